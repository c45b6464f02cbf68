//! Noncommutative algebraic branching programs as iterated products of
//! matrices of affine forms, with a deterministic zero test.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Mat;
use crate::pencil::{LinearPencil, MatTuple};

/// `f = L_1 · L_2 ⋯ L_m` where `L_1` is `1×w_1`, `L_m` is `w_{m-1}×1` and each
/// `L_t` is a matrix of affine forms.
#[derive(Clone, Debug, PartialEq)]
pub struct Abp<F> {
    vars: Vec<String>,
    layers: Vec<LinearPencil<F>>,
}

/// A spanning set of coefficient vectors, each tagged with the word it is the
/// coefficient vector of.
#[derive(Clone, Debug)]
struct Closure<F> {
    words: Vec<Vec<usize>>,
    vecs: Vec<Vec<F>>,
}

impl<F: Field> Abp<F> {
    pub fn new(vars: Vec<String>, layers: Vec<LinearPencil<F>>) -> Result<Self> {
        let Some(first) = layers.first() else {
            return Err(Error::Shape("an ABP needs at least one layer".into()));
        };
        if first.rows() != 1 || layers.last().unwrap().cols() != 1 {
            return Err(Error::Shape("first layer must have one row and last layer one column".into()));
        }
        for (t, w) in layers.windows(2).enumerate() {
            if w[0].cols() != w[1].rows() {
                return Err(Error::Shape(format!("layers {} and {} do not compose", t + 1, t + 2)));
            }
        }
        if layers.iter().any(|l| l.vars() != vars.as_slice()) {
            return Err(Error::Shape("layer variables differ from the ABP's".into()));
        }
        Ok(Abp { vars, layers })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn layers(&self) -> &[LinearPencil<F>] {
        &self.layers
    }

    pub fn width(&self) -> usize {
        self.layers.iter().map(|l| l.rows().max(l.cols())).max().unwrap_or(1)
    }

    fn zero(&self) -> F {
        self.layers[0].zero_elem().zero_like()
    }

    /// Single-path ABP computing `c · x_{w1} ⋯ x_{wk}`; the empty word gives the
    /// constant `c`.
    pub fn monomial(vars: Vec<String>, word: &[usize], c: &F) -> Result<Self> {
        let z = c.zero_like();
        let n = vars.len();
        if word.iter().any(|&v| v >= n) {
            return Err(Error::Shape("word uses an unknown variable".into()));
        }
        let one = Mat::filled(1, 1, &z.one_like(), &z);
        let zero = Mat::zeros(1, 1, &z);
        let mut layers = Vec::new();
        if word.is_empty() {
            layers.push(LinearPencil::new(vars.clone(), Mat::filled(1, 1, c, &z), vec![zero.clone(); n])?);
        }
        for (t, &v) in word.iter().enumerate() {
            let a = (0..n)
                .map(|k| if k != v { zero.clone() } else if t == 0 { Mat::filled(1, 1, c, &z) } else { one.clone() })
                .collect();
            layers.push(LinearPencil::new(vars.clone(), zero.clone(), a)?);
        }
        Abp::new(vars, layers)
    }

    /// Appends constant `[1]` layers until there are `m` layers.
    pub fn padded(&self, m: usize) -> Self {
        let z = self.zero();
        let mut out = self.clone();
        while out.layers.len() < m {
            let l = LinearPencil::new(
                self.vars.clone(),
                Mat::identity(1, &z),
                vec![Mat::zeros(1, 1, &z); self.nvars()],
            )
            .unwrap();
            out.layers.push(l);
        }
        out
    }

    /// `Σ c_i f_i` by padding to a common depth and placing the programs side
    /// by side.
    pub fn linear_combination(terms: &[(F, Abp<F>)]) -> Result<Self> {
        let Some((_, f0)) = terms.first() else {
            return Err(Error::Shape("empty combination".into()));
        };
        let vars = f0.vars.clone();
        if terms.iter().any(|(_, f)| f.vars != vars) {
            return Err(Error::Shape("variable lists differ".into()));
        }
        let z = f0.zero();
        let m = terms.iter().map(|(_, f)| f.layers.len()).max().unwrap();
        let padded: Vec<Abp<F>> = terms.iter().map(|(_, f)| f.padded(m)).collect();
        let n = vars.len();
        let mut layers = Vec::with_capacity(m);
        for t in 0..m {
            let parts: Vec<&LinearPencil<F>> = padded.iter().map(|f| &f.layers[t]).collect();
            let pick = |sel: &dyn Fn(&LinearPencil<F>) -> Mat<F>, scale_first: bool| -> Result<Mat<F>> {
                let mats: Vec<Mat<F>> = parts
                    .iter()
                    .zip(terms)
                    .map(|(l, (c, _))| if scale_first { sel(l).scale(c) } else { sel(l) })
                    .collect();
                if m == 1 {
                    // single layer: 1×1 entries summed
                    let mut acc = z.zero_like();
                    for x in &mats {
                        acc = acc.add(x.get(0, 0));
                    }
                    Ok(Mat::filled(1, 1, &acc, &z))
                } else if t == 0 {
                    Mat::block_assemble(&[mats])
                } else if t == m - 1 {
                    Mat::block_assemble(&mats.into_iter().map(|x| vec![x]).collect::<Vec<_>>())
                } else {
                    let k = mats.len();
                    let grid: Vec<Vec<Mat<F>>> = (0..k)
                        .map(|i| {
                            (0..k)
                                .map(|j| if i == j { mats[i].clone() } else { Mat::zeros(mats[i].rows(), mats[j].cols(), &z) })
                                .collect()
                        })
                        .collect();
                    Mat::block_assemble(&grid)
                }
            };
            let first = t == 0;
            let a0 = pick(&|l| l.constant().clone(), first)?;
            let a = (0..n).map(|k| pick(&|l| l.coeff(k).clone(), first)).collect::<Result<Vec<_>>>()?;
            layers.push(LinearPencil::new(vars.clone(), a0, a)?);
        }
        Abp::new(vars, layers)
    }

    /// Product of the first `t` evaluated layers, a `d × w_t·d` matrix.
    pub fn eval_prefix(&self, t: usize, p: &MatTuple<F>) -> Result<Mat<F>> {
        let d = p.dim();
        let mut acc = Mat::identity(d, p.zero_elem());
        for l in &self.layers[..t] {
            acc = acc.mul(&l.eval(p)?)?;
        }
        Ok(acc)
    }

    /// Product of the evaluated layers from `t` on, a `w_t·d × d` matrix.
    pub fn eval_suffix(&self, t: usize, p: &MatTuple<F>) -> Result<Mat<F>> {
        let mut acc: Option<Mat<F>> = None;
        for l in &self.layers[t..] {
            let e = l.eval(p)?;
            acc = Some(match acc {
                None => e,
                Some(a) => a.mul(&e)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Mat::identity(p.dim(), p.zero_elem())))
    }

    /// Coefficient vector of `word` at every node, layer by layer.
    fn coefficient_vector(&self, word: &[usize]) -> Vec<F> {
        let mut c = self.start_vector();
        for &z in word {
            c = self.shift(&c, z);
        }
        c
    }

    fn offsets(&self) -> Vec<usize> {
        let mut off = vec![0, 1];
        for l in &self.layers {
            off.push(off.last().unwrap() + l.cols());
        }
        off
    }

    fn start_vector(&self) -> Vec<F> {
        let z = self.zero();
        let off = self.offsets();
        let mut c = vec![z.clone(); *off.last().unwrap()];
        c[0] = z.one_like();
        for (t, l) in self.layers.iter().enumerate() {
            let prev = c[off[t]..off[t + 1]].to_vec();
            let next = Mat::vec_mul(&prev, l.constant());
            c[off[t + 1]..off[t + 2]].clone_from_slice(&next);
        }
        c
    }

    /// Maps the coefficient vector of `u` to that of `u·x_z`.
    fn shift(&self, c: &[F], z: usize) -> Vec<F> {
        let zero = self.zero();
        let off = self.offsets();
        let mut out = vec![zero; c.len()];
        for (t, l) in self.layers.iter().enumerate() {
            let mut next = Mat::vec_mul(&out[off[t]..off[t + 1]], l.constant());
            let lin = Mat::vec_mul(&c[off[t]..off[t + 1]], l.coeff(z));
            for (a, b) in next.iter_mut().zip(&lin) {
                *a = a.add(b);
            }
            out[off[t + 1]..off[t + 2]].clone_from_slice(&next);
        }
        out
    }

    fn sink(&self, c: &[F]) -> F {
        c[c.len() - 1].clone()
    }

    /// The coefficient of `word` in `f`.
    pub fn coefficient(&self, word: &[usize]) -> F {
        self.sink(&self.coefficient_vector(word))
    }

    /// Breadth-first closure of the coefficient vectors under the shifts. With
    /// `stop_at_nonzero`, returns as soon as a word with nonzero coefficient
    /// has been added.
    fn closure(&self, stop_at_nonzero: bool) -> Closure<F> {
        let mut basis = Echelon::new();
        let mut out = Closure { words: vec![], vecs: vec![] };
        let start = self.start_vector();
        let mut level: Vec<usize> = Vec::new();
        if basis.insert(&start) {
            out.words.push(vec![]);
            out.vecs.push(start);
            level.push(0);
            if stop_at_nonzero && !self.sink(&out.vecs[0]).is_zero() {
                return out;
            }
        }
        while !level.is_empty() {
            let mut next = Vec::new();
            for &b in &level {
                for z in 0..self.nvars() {
                    let c = self.shift(&out.vecs[b], z);
                    if basis.insert(&c) {
                        let mut w = out.words[b].clone();
                        w.push(z);
                        let hit = !self.sink(&c).is_zero();
                        out.words.push(w);
                        out.vecs.push(c);
                        next.push(out.vecs.len() - 1);
                        if stop_at_nonzero && hit {
                            return out;
                        }
                    }
                }
            }
            level = next;
        }
        out
    }
}

/// Row-echelon accumulator used for incremental independence tests.
pub(crate) struct Echelon<F> {
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub(crate) fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    /// Adds `v` if it is independent of the rows so far.
    pub(crate) fn insert(&mut self, v: &[F]) -> bool {
        let mut v = v.to_vec();
        for (piv, row) in &self.rows {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a = a.sub(&f.mul(b));
                    }
                }
            }
        }
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else { return false };
        let inv = v[piv].inv().unwrap();
        for x in v.iter_mut() {
            *x = x.mul(&inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[piv].is_zero() {
                let f = row[piv].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    if !b.is_zero() {
                        *a = a.sub(&f.mul(b));
                    }
                }
            }
        }
        self.rows.push((piv, v));
        true
    }
}

/// `f(p_1, …, p_n)` as a `d×d` matrix.
pub fn abp_eval<F: Field>(f: &Abp<F>, p: &MatTuple<F>) -> Result<Mat<F>> {
    if p.len() != f.nvars() {
        return Err(Error::Shape(format!("ABP has {} variables, tuple has {}", f.nvars(), p.len())));
    }
    f.eval_suffix(0, p)
}

/// True iff `f` is the zero noncommutative polynomial.
pub fn rs_zero_test<F: Field>(f: &Abp<F>) -> bool {
    let cl = f.closure(true);
    cl.vecs.iter().all(|c| f.sink(c).is_zero())
}

/// A shortest word with nonzero coefficient in `f`.
pub fn extract_monomial<F: Field>(f: &Abp<F>) -> Result<Vec<usize>> {
    let cl = f.closure(true);
    cl.vecs
        .iter()
        .zip(&cl.words)
        .find(|(c, _)| !f.sink(c).is_zero())
        .map(|(_, w)| w.clone())
        .ok_or(Error::ZeroPolynomial)
}

/// The 0/1 transition matrices of the automaton accepting exactly `word`,
/// padded with zero rows and columns to `dim`.
pub fn automaton_tuple<F: Field>(word: &[usize], nvars: usize, dim: usize, zero: &F) -> Result<MatTuple<F>> {
    if dim < word.len() + 1 {
        return Err(Error::Params(format!("dimension {dim} is below word length + 1 = {}", word.len() + 1)));
    }
    if word.iter().any(|&v| v >= nvars) {
        return Err(Error::Params("word uses an unknown variable".into()));
    }
    let mut mats = vec![Mat::zeros(dim, dim, zero); nvars];
    for (t, &v) in word.iter().enumerate() {
        mats[v].set(t, t + 1, zero.one_like());
    }
    MatTuple::new(dim, mats, zero)
}

/// All words with nonzero coefficient, by expanding every path. Exponential;
/// intended for small programs.
pub fn expand<F: Field>(f: &Abp<F>) -> BTreeMap<Vec<usize>, F> {
    let z = f.zero();
    let mut state: Vec<BTreeMap<Vec<usize>, F>> = vec![BTreeMap::from([(vec![], z.one_like())])];
    for l in &f.layers {
        let mut next: Vec<BTreeMap<Vec<usize>, F>> = vec![BTreeMap::new(); l.cols()];
        for (u, polys) in state.iter().enumerate() {
            for (v, out) in next.iter_mut().enumerate() {
                let (c, lin) = l.entry(u, v);
                for (w, a) in polys {
                    if !c.is_zero() {
                        acc(out, w.clone(), a.mul(&c));
                    }
                    for (k, b) in lin.iter().enumerate() {
                        if !b.is_zero() {
                            let mut w2 = w.clone();
                            w2.push(k);
                            acc(out, w2, a.mul(b));
                        }
                    }
                }
            }
        }
        state = next;
    }
    state.into_iter().next().unwrap_or_default()
}

fn acc<F: Field>(m: &mut BTreeMap<Vec<usize>, F>, w: Vec<usize>, v: F) {
    let e = m.entry(w.clone()).or_insert_with(|| v.zero_like());
    *e = e.add(&v);
    if e.is_zero() {
        m.remove(&w);
    }
}
