use crate::field::Field;
use crate::linalg::{bareiss_rank, clear_denominators, rank, Mat};
use crate::pencil::{pencil_eval, LinearPencil, MatTuple, Pencil};
use crate::scalar::{CycloNumber, FieldScalar, Fp, Image};

/// A tuple `p` of `d×d` matrices over K with `rank T(p) ≥ r·d`.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub r: usize,
    pub tuple: MatTuple<FieldScalar>,
}

impl Witness {
    /// `r = 0`, `d = 1`, all variables zero.
    pub fn initial(t: &Pencil) -> Self {
        Witness { r: 0, tuple: MatTuple::zeros(t.nvars(), 1, &FieldScalar::zero(1)) }
    }

    pub fn dim(&self) -> usize {
        self.tuple.dim()
    }

    pub fn cyclo_index(&self) -> u64 {
        self.tuple.zero_elem().index()
    }
}

/// Number of modular images tried before falling back to exact arithmetic.
pub(crate) const IMAGE_ATTEMPTS: u64 = 3;

pub(crate) fn pencil_image(t: &Pencil, img: &Image) -> Option<LinearPencil<Fp>> {
    t.try_map(&img.zero(), |q| img.rational(q))
}

pub(crate) fn tuple_image(q: &MatTuple<FieldScalar>, img: &Image) -> Option<MatTuple<Fp>> {
    q.try_map(&img.zero(), |x| img.scalar(x))
}

pub(crate) fn cyclo_tuple_image(q: &MatTuple<CycloNumber>, img: &Image) -> Option<MatTuple<Fp>> {
    q.try_map(&img.zero(), |x| img.cyclo(x))
}

/// `T(q)` in the image, or `None` when some coefficient does not map.
pub(crate) fn eval_image(t: &Pencil, q: &MatTuple<FieldScalar>, img: &Image) -> Option<Mat<Fp>> {
    pencil_image(t, img)?.eval(&tuple_image(q, img)?).ok()
}

/// The largest rank of `T(q)` over a few images. Every value is a lower
/// bound for the exact rank.
pub fn image_rank(t: &Pencil, q: &MatTuple<FieldScalar>, attempts: u64) -> usize {
    let n = q.zero_elem().index();
    (0..attempts)
        .filter_map(|a| eval_image(t, q, &Image::nth(n, a)).map(|m| rank(&m)))
        .max()
        .unwrap_or(0)
}

pub fn cyclo_image_rank(t: &Pencil, q: &MatTuple<CycloNumber>, attempts: u64) -> usize {
    let n = q.zero_elem().index();
    (0..attempts)
        .filter_map(|a| {
            let img = Image::nth(n, a);
            pencil_image(t, &img)?.eval(&cyclo_tuple_image(q, &img)?).ok().map(|m| rank(&m))
        })
        .max()
        .unwrap_or(0)
}

/// Exact rank of `T(q)` over K, by fraction-free elimination.
pub fn exact_rank(t: &Pencil, q: &MatTuple<FieldScalar>) -> usize {
    let m = pencil_eval(t, q).expect("witness matches the pencil");
    bareiss_rank(&clear_denominators(&m))
}

/// Checks `rank T(p) ≥ r·d`: modular images first (a nonzero minor mod p is
/// nonzero), exact elimination otherwise.
pub fn verify_witness(t: &Pencil, w: &Witness) -> bool {
    if w.tuple.len() != t.nvars() {
        return false;
    }
    let need = w.r * w.dim();
    if need == 0 {
        return true;
    }
    if image_rank(t, &w.tuple, IMAGE_ATTEMPTS) >= need {
        return true;
    }
    exact_rank(t, &w.tuple) >= need
}

/// Largest rational coefficient bit length and the y/w degrees over all
/// witness entries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EntryStats {
    pub max_deg_y: u32,
    pub max_deg_w: u32,
    pub max_bits: u64,
    pub all_polynomial: bool,
}

pub fn entry_stats(q: &MatTuple<FieldScalar>) -> EntryStats {
    let mut st = EntryStats { all_polynomial: true, ..Default::default() };
    for m in q.mats() {
        for x in m.entries() {
            if x.is_zero() {
                continue;
            }
            st.all_polynomial &= x.is_polynomial();
            for p in [x.num(), x.den()] {
                st.max_deg_y = st.max_deg_y.max(p.deg_y());
                st.max_deg_w = st.max_deg_w.max(p.deg_w());
                for c in p.terms().values() {
                    for q in c.coeffs() {
                        st.max_bits = st.max_bits.max(crate::field::rational_bits(q));
                    }
                }
            }
        }
    }
    st
}
