//! Linear matrix pencils `A0 + Σ A_k·x_k` and their evaluation at matrix tuples.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::{lift, Mat};

/// A (possibly rectangular) matrix of affine forms in named noncommuting
/// variables.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearPencil<F> {
    vars: Vec<String>,
    a0: Mat<F>,
    a: Vec<Mat<F>>,
}

/// A square pencil with rational coefficients, the algorithm's input.
pub type Pencil = LinearPencil<Rational>;

/// A tuple of `dim × dim` matrices, one per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct MatTuple<F> {
    dim: usize,
    mats: Vec<Mat<F>>,
    zero: F,
}

impl<F: Field> MatTuple<F> {
    pub fn new(dim: usize, mats: Vec<Mat<F>>, zero: &F) -> Result<Self> {
        if mats.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::Shape(format!("tuple entries must be {dim}x{dim}")));
        }
        Ok(MatTuple { dim, mats, zero: zero.zero_like() })
    }

    pub fn zeros(n: usize, dim: usize, zero: &F) -> Self {
        MatTuple { dim, mats: vec![Mat::zeros(dim, dim, zero); n], zero: zero.zero_like() }
    }

    pub fn zero_elem(&self) -> &F {
        &self.zero
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[Mat<F>] {
        &self.mats
    }

    pub fn map<G: Field>(&self, zero: &G, mut f: impl FnMut(&F) -> G) -> MatTuple<G> {
        MatTuple { dim: self.dim, mats: self.mats.iter().map(|m| m.map(zero, &mut f)).collect(), zero: zero.zero_like() }
    }

    pub fn try_map<G: Field>(&self, zero: &G, mut f: impl FnMut(&F) -> Option<G>) -> Option<MatTuple<G>> {
        let mats: Option<Vec<_>> = self.mats.iter().map(|m| m.try_map(zero, &mut f)).collect();
        Some(MatTuple { dim: self.dim, mats: mats?, zero: zero.zero_like() })
    }

    /// Each entry tensored on the right: `p_k ⊗ I_e`.
    pub fn tensor_identity(&self, e: usize, zero: &F) -> Self {
        let id = Mat::identity(e, zero);
        MatTuple { dim: self.dim * e, mats: self.mats.iter().map(|m| m.kron(&id)).collect(), zero: zero.zero_like() }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim || self.len() != rhs.len() {
            return Err(Error::Shape("tuple shapes differ".into()));
        }
        let mats = self.mats.iter().zip(&rhs.mats).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(MatTuple { dim: self.dim, mats, zero: self.zero.clone() })
    }

    pub fn scale(&self, c: &F) -> Self {
        MatTuple { dim: self.dim, mats: self.mats.iter().map(|m| m.scale(c)).collect(), zero: self.zero.clone() }
    }

    /// Deletes the last row and column of every matrix.
    pub fn chop(&self) -> Self {
        assert!(self.dim > 0);
        let k = self.dim - 1;
        MatTuple { dim: k, mats: self.mats.iter().map(|m| m.block(0, 0, k, k)).collect(), zero: self.zero.clone() }
    }
}

impl<F: Field> LinearPencil<F> {
    pub fn new(vars: Vec<String>, a0: Mat<F>, a: Vec<Mat<F>>) -> Result<Self> {
        if vars.len() != a.len() {
            return Err(Error::Shape(format!("{} variables but {} coefficient matrices", vars.len(), a.len())));
        }
        let mut seen = HashSet::new();
        if let Some(v) = vars.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(Error::Shape(format!("duplicate variable {v}")));
        }
        if a.iter().any(|m| m.rows() != a0.rows() || m.cols() != a0.cols()) {
            return Err(Error::Shape("coefficient matrices differ in shape".into()));
        }
        Ok(LinearPencil { vars, a0, a })
    }

    /// Variables named `x1, …, xn`.
    pub fn with_default_vars(a0: Mat<F>, a: Vec<Mat<F>>) -> Result<Self> {
        let vars = (1..=a.len()).map(|i| format!("x{i}")).collect();
        Self::new(vars, a0, a)
    }

    pub fn rows(&self) -> usize {
        self.a0.rows()
    }

    pub fn cols(&self) -> usize {
        self.a0.cols()
    }

    /// Side length of a square pencil.
    pub fn size(&self) -> usize {
        self.a0.rows()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn constant(&self) -> &Mat<F> {
        &self.a0
    }

    pub fn coeff(&self, k: usize) -> &Mat<F> {
        &self.a[k]
    }

    pub fn coeffs(&self) -> &[Mat<F>] {
        &self.a
    }

    pub fn zero_elem(&self) -> &F {
        self.a0.zero_elem()
    }

    pub fn is_zero(&self) -> bool {
        self.a0.is_zero() && self.a.iter().all(|m| m.is_zero())
    }

    pub fn map<G: Field>(&self, zero: &G, mut f: impl FnMut(&F) -> G) -> LinearPencil<G> {
        LinearPencil {
            vars: self.vars.clone(),
            a0: self.a0.map(zero, &mut f),
            a: self.a.iter().map(|m| m.map(zero, &mut f)).collect(),
        }
    }

    pub fn try_map<G: Field>(&self, zero: &G, mut f: impl FnMut(&F) -> Option<G>) -> Option<LinearPencil<G>> {
        let a: Option<Vec<_>> = self.a.iter().map(|m| m.try_map(zero, &mut f)).collect();
        Some(LinearPencil { vars: self.vars.clone(), a0: self.a0.try_map(zero, &mut f)?, a: a? })
    }

    /// The scalar entry `(i, j)` as an affine form: constant and one
    /// coefficient per variable.
    pub fn entry(&self, i: usize, j: usize) -> (F, Vec<F>) {
        (self.a0.get(i, j).clone(), self.a.iter().map(|m| m.get(i, j).clone()).collect())
    }

    /// `A0 ⊗ I_d + Σ A_k ⊗ p_k`.
    pub fn eval(&self, p: &MatTuple<F>) -> Result<Mat<F>> {
        if p.len() != self.nvars() {
            return Err(Error::Shape(format!("pencil has {} variables, tuple has {}", self.nvars(), p.len())));
        }
        let d = p.dim();
        let z = self.zero_elem().clone();
        let mut out = self.a0.kron(&Mat::identity(d, &z));
        for (ak, pk) in self.a.iter().zip(p.mats()) {
            for i in 0..ak.rows() {
                for j in 0..ak.cols() {
                    let c = ak.get(i, j);
                    if c.is_zero() {
                        continue;
                    }
                    for a in 0..d {
                        for b in 0..d {
                            let v = pk.get(a, b);
                            if !v.is_zero() {
                                let (r, s) = (i * d + a, j * d + b);
                                let x = out.get(r, s).add(&c.mul(v));
                                out.set(r, s, x);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Evaluation at scalars.
    pub fn eval_scalars(&self, x: &[F]) -> Result<Mat<F>> {
        let z = self.zero_elem();
        let p = MatTuple { dim: 1, mats: x.iter().map(|v| Mat::filled(1, 1, v, z)).collect(), zero: z.clone() };
        self.eval(&p)
    }
}

impl Pencil {
    /// Coefficients mapped into the field of `proto`.
    pub fn lift<F: Field>(&self, proto: &F) -> LinearPencil<F> {
        let z = proto.zero_like();
        LinearPencil { vars: self.vars.clone(), a0: lift(&self.a0, &z), a: self.a.iter().map(|m| lift(m, &z)).collect() }
    }
}

/// `T(p)` for a rational pencil and a tuple over any field.
pub fn pencil_eval<F: Field>(t: &Pencil, p: &MatTuple<F>) -> Result<Mat<F>> {
    t.lift(p.zero_elem()).eval(p)
}

/// Index of the fresh variable `z^{(k)}_{ab}` in a dimension-`d` blow-up.
pub fn blowup_var(k: usize, a: usize, b: usize, d: usize) -> usize {
    k * d * d + a * d + b
}

pub fn blowup_var_name(vars: &[String], k: usize, a: usize, b: usize) -> String {
    format!("{}_{}_{}", vars[k], a + 1, b + 1)
}

/// `T_d(Z + p) = A0 ⊗ I_d + Σ A_k ⊗ (Z_k + p_k)` over the `n·d²` variables of
/// the generic matrices `Z_k`.
pub fn blowup_shift<F: Field>(t: &Pencil, p: &MatTuple<F>) -> Result<LinearPencil<F>> {
    let d = p.dim();
    let z = p.zero_elem().clone();
    let lt = t.lift(&z);
    let a0 = lt.eval(p)?;
    let mut vars = Vec::with_capacity(t.nvars() * d * d);
    let mut a = Vec::with_capacity(t.nvars() * d * d);
    for k in 0..t.nvars() {
        for x in 0..d {
            for y in 0..d {
                vars.push(blowup_var_name(t.vars(), k, x, y));
                let e = Mat::from_fn(d, d, &z, |i, j| if (i, j) == (x, y) { z.one_like() } else { z.zero_like() });
                a.push(lt.coeff(k).kron(&e));
            }
        }
    }
    LinearPencil::new(vars, a0, a)
}

/// The rational blow-up pencil `T_d(Z)` itself.
pub fn blowup_pencil(t: &Pencil, d: usize) -> Pencil {
    let z = t.zero_elem().clone();
    blowup_shift(t, &MatTuple::zeros(t.nvars(), d, &z)).expect("shapes agree")
}

/// Assembles the tuple `Σ_ab E_ab ⊗ q_{kab}` from a tuple indexed by blow-up
/// variables.
pub fn unflatten_blowup<F: Field>(q: &MatTuple<F>, n: usize, d: usize) -> Result<MatTuple<F>> {
    if q.len() != n * d * d {
        return Err(Error::Shape(format!("expected {} matrices, got {}", n * d * d, q.len())));
    }
    let e = q.dim();
    let z = q.zero.clone();
    let mats = (0..n)
        .map(|k| {
            Mat::from_fn(d * e, d * e, &z, |i, j| q.mats()[blowup_var(k, i / e, j / e, d)].get(i % e, j % e).clone())
        })
        .collect();
    Ok(MatTuple { dim: d * e, mats, zero: z })
}
