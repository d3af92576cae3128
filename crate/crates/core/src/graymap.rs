//! The Gray map `a + b·u ↦ (b, a + b)` from GF(4)+uGF(4) to GF(4)², and
//! the Lee weight it turns into Hamming weight.

use num_traits::Zero;

use crate::generator::GeneratorMatrix;
use crate::matrix::DenseMatrix;
use crate::ring::{HermitianRing, F4, F4U};

/// `φ(v) = (b ‖ a + b)` where `v = a + b·u` componentwise.
pub fn gray_map(v: &[F4U]) -> Vec<F4> {
    let mut out = Vec::with_capacity(2 * v.len());
    out.extend(v.iter().map(|x| x.b()));
    out.extend(v.iter().map(|x| x.a() + x.b()));
    out
}

/// `n₁ + 2·n₂`, where `n₂` counts components with `a ≠ b` and `b ≠ 0` and
/// `n₁` counts the remaining nonzero components.
pub fn lee_weight(v: &[F4U]) -> usize {
    v.iter()
        .map(|x| {
            if x.is_zero() {
                0
            } else if x.a() != x.b() && !x.b().is_zero() {
                2
            } else {
                1
            }
        })
        .sum()
}

pub fn hamming_weight<R: HermitianRing>(v: &[R]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Rings whose codes have a quaternary (GF(4)) image on which Hamming
/// weights are measured.
pub trait QuaternaryImage: HermitianRing {
    /// GF(4)-rows spanning the image of the code generated by `g`.
    fn image_rows(g: &GeneratorMatrix<Self>) -> Vec<Vec<F4>>;
}

impl QuaternaryImage for F4 {
    fn image_rows(g: &GeneratorMatrix<F4>) -> Vec<Vec<F4>> {
        g.rows().map(<[F4]>::to_vec).collect()
    }
}

impl QuaternaryImage for F4U {
    /// As a GF(4)-space the code is spanned by `r_i` and `u·r_i`.
    fn image_rows(g: &GeneratorMatrix<F4U>) -> Vec<Vec<F4>> {
        let mut out = Vec::with_capacity(2 * g.k());
        for r in g.rows() {
            out.push(gray_map(r));
        }
        for r in g.rows() {
            let ur: Vec<F4U> = r.iter().map(|&x| F4U::U * x).collect();
            out.push(gray_map(&ur));
        }
        out
    }
}

/// The generator matrix of the GF(4) image of a code.
pub fn image_generator<R: QuaternaryImage>(g: &GeneratorMatrix<R>) -> GeneratorMatrix<F4> {
    GeneratorMatrix::from_matrix(DenseMatrix::from_rows(R::image_rows(g)).expect("rectangular"))
}
