//! λ-circulant matrices and the Θ mapping.
//!
//! A λ-circulant matrix `σ_λ(a)` has first row `a`; each following row is
//! the previous one shifted right by one place, with the entry that wraps
//! around multiplied by λ.
//!
//! `Θ(x, y, j)[λ]` is the `j`-th entry of the generating vector of a
//! product of λ-circulants:
//!
//! ```text
//! Θ(x, y, j)[λ] = Σ_{i=0}^{n-j-1} x_{[i+j]_n}·y_i + λ·Σ_{i=n-j}^{n-1} x_{[i+j]_n}·y_i
//! ```
//!
//! For unitary λ (λ·conj(λ) = 1), `σ_λ(b)·conj(σ_λ(a))ᵀ` is the λ-circulant
//! generated by `v_j = Θ(b, conj(a), j)[conj(λ)]`, and `v` is determined by
//! its first `⌊n/2⌋+1` entries. Every self-duality check in
//! [`crate::constructions`] is phrased through these values, so no matrix
//! is ever materialized on the hot path.

use thiserror::Error;

use crate::matrix::DenseMatrix;
use crate::ring::HermitianRing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CirculantError {
    #[error("shift index {j} outside [0, {n})")]
    IndexOutOfRange { j: usize, n: usize },
    #[error("λ = {0} is not unitary (λ·conj(λ) ≠ 1)")]
    NotUnitaryLambda(char),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("empty generating vector")]
    Empty,
}

/// `[i]_n`: the least non-negative residue of `i` modulo `n`.
///
/// All index arithmetic on circulant generators goes through here.
#[inline(always)]
pub fn wrap(i: usize, n: usize) -> usize {
    if i < n {
        i
    } else {
        i % n
    }
}

/// Index of `n - j` reduced into `[0, n)`.
#[inline(always)]
pub fn reflect(j: usize, n: usize) -> usize {
    wrap(n - wrap(j, n), n)
}

/// The compressed form `(λ, a)` of `σ_λ(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CirculantSpec<R> {
    pub lambda: R,
    pub gen: Vec<R>,
}

/// Which identity `A·conj(A)ᵀ` is compared against. The two coincide in
/// characteristic 2 but both are kept so call sites say which one they mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitaryTarget {
    PlusOne,
    MinusOne,
}

impl<R: HermitianRing> CirculantSpec<R> {
    pub fn new(lambda: R, gen: Vec<R>) -> Result<Self, CirculantError> {
        if gen.is_empty() {
            return Err(CirculantError::Empty);
        }
        Ok(CirculantSpec { lambda, gen })
    }

    pub fn n(&self) -> usize {
        self.gen.len()
    }

    /// Entry `(i, j)` is `gen[j-i]` when `j ≥ i`, else `λ·gen[n+j-i]`.
    pub fn materialize(&self) -> DenseMatrix<R> {
        let n = self.n();
        DenseMatrix::from_fn(n, n, |i, j| {
            if j >= i {
                self.gen[j - i]
            } else {
                self.lambda * self.gen[n + j - i]
            }
        })
    }

    /// Read the first row back out of a dense matrix, if it is λ-circulant.
    pub fn from_dense(m: &DenseMatrix<R>, lambda: R) -> Option<Self> {
        if m.rows() != m.cols() || m.rows() == 0 {
            return None;
        }
        let spec = CirculantSpec {
            lambda,
            gen: m.row(0).to_vec(),
        };
        (spec.materialize() == *m).then_some(spec)
    }

    /// `σ_λ(a)ᵀ` as a λ⁻¹-circulant: first row `(a_0, λa_{n-1}, …, λa_1)`.
    pub fn transpose_spec(&self) -> Option<Self> {
        let inv = self.lambda.inv()?;
        let n = self.n();
        let gen = (0..n)
            .map(|i| {
                if i == 0 {
                    self.gen[0]
                } else {
                    self.lambda * self.gen[n - i]
                }
            })
            .collect();
        Some(CirculantSpec { lambda: inv, gen })
    }

    /// `conj(σ_λ(a)) = σ_{conj(λ)}(conj(a))`.
    pub fn conj_spec(&self) -> Self {
        CirculantSpec {
            lambda: self.lambda.conj(),
            gen: conj_vec(&self.gen),
        }
    }

    fn require_unitary_lambda(&self) -> Result<(), CirculantError> {
        if self.lambda.is_unitary() {
            Ok(())
        } else {
            Err(CirculantError::NotUnitaryLambda(self.lambda.symbol()))
        }
    }
}

pub fn conj_vec<R: HermitianRing>(v: &[R]) -> Vec<R> {
    v.iter().map(|x| x.conj()).collect()
}

/// Θ without range checks. `j` must lie in `[0, n)`.
#[inline]
pub fn theta_raw<R: HermitianRing>(x: &[R], y: &[R], j: usize, lambda: R) -> R {
    let n = x.len();
    debug_assert_eq!(n, y.len());
    if j == 0 {
        return x.iter().zip(y).map(|(&a, &b)| a * b).sum();
    }
    let head: R = x[j..].iter().zip(&y[..n - j]).map(|(&a, &b)| a * b).sum();
    let tail: R = x[..j].iter().zip(&y[n - j..]).map(|(&a, &b)| a * b).sum();
    head + lambda * tail
}

/// `Θ(x, y, j)[λ]`.
pub fn theta<R: HermitianRing>(x: &[R], y: &[R], j: usize, lambda: R) -> Result<R, CirculantError> {
    if x.len() != y.len() {
        return Err(CirculantError::LengthMismatch(x.len(), y.len()));
    }
    if j >= x.len() {
        return Err(CirculantError::IndexOutOfRange { j, n: x.len() });
    }
    Ok(theta_raw(x, y, j, lambda))
}

/// Generating vector of `σ_λ(b)·conj(σ_λ(a))ᵀ`, one Θ value per shift.
pub fn theta_product<R: HermitianRing>(b: &[R], a: &[R], lambda: R) -> Result<Vec<R>, CirculantError> {
    if a.len() != b.len() {
        return Err(CirculantError::LengthMismatch(b.len(), a.len()));
    }
    if !lambda.is_unitary() {
        return Err(CirculantError::NotUnitaryLambda(lambda.symbol()));
    }
    let ac = conj_vec(a);
    let lc = lambda.conj();
    Ok((0..a.len()).map(|j| theta_raw(b, &ac, j, lc)).collect())
}

/// `Θ(a, conj(a), j)[conj(λ)]` for `j ∈ [0, ⌊n/2⌋]`, the half of the
/// generating vector of `σ_λ(a)·conj(σ_λ(a))ᵀ` that determines the rest.
pub fn self_theta_half<R: HermitianRing>(a: &[R], lambda: R) -> Vec<R> {
    let ac = conj_vec(a);
    let lc = lambda.conj();
    (0..=a.len() / 2).map(|j| theta_raw(a, &ac, j, lc)).collect()
}

/// Expand the half vector of [`self_theta_half`] to all `n` entries using
/// `f(j) = conj(λ·f(n-j))`.
pub fn unfold_self_theta<R: HermitianRing>(half: &[R], n: usize, lambda: R) -> Vec<R> {
    (0..n)
        .map(|j| {
            if j <= n / 2 {
                half[j]
            } else {
                (lambda * half[n - j]).conj()
            }
        })
        .collect()
}

/// True iff `A·conj(A)ᵀ = ±I` for `A = σ_λ(a)`, decided from `⌊n/2⌋+1`
/// Θ values.
pub fn is_hermitian_unitary<R: HermitianRing>(
    spec: &CirculantSpec<R>,
    target: UnitaryTarget,
) -> Result<bool, CirculantError> {
    spec.require_unitary_lambda()?;
    Ok(self_theta_matches(&spec.gen, spec.lambda, target))
}

/// Hot-path form of [`is_hermitian_unitary`]; λ must already be unitary.
#[inline]
pub fn self_theta_matches<R: HermitianRing>(a: &[R], lambda: R, target: UnitaryTarget) -> bool {
    let want = match target {
        UnitaryTarget::PlusOne => R::one(),
        UnitaryTarget::MinusOne => R::one().negate(),
    };
    let ac = conj_vec(a);
    let lc = lambda.conj();
    let n = a.len();
    if theta_raw(a, &ac, 0, lc) != want {
        return false;
    }
    (1..=n / 2).all(|j| theta_raw(a, &ac, j, lc).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::ring::{parse_vector, unitary_elements, F4, F4U};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rv<R: HermitianRing>(rng: &mut impl Rng, n: usize) -> Vec<R> {
        (0..n).map(|_| R::from_index(rng.random_range(0..R::ORDER as u8))).collect()
    }

    fn pick<R: HermitianRing>(rng: &mut impl Rng) -> R {
        let us = unitary_elements::<R>();
        us[rng.random_range(0..us.len())]
    }

    #[test]
    fn materialize_example() {
        let w = F4::OMEGA;
        let spec = CirculantSpec::new(w, vec![F4::ONE, F4::ZERO, w]).unwrap();
        let m = spec.materialize();
        let expect = DenseMatrix::from_rows(vec![
            vec![F4::ONE, F4::ZERO, w],
            vec![F4::OMEGA2, F4::ONE, F4::ZERO],
            vec![F4::ZERO, F4::OMEGA2, F4::ONE],
        ])
        .unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn unit_generator_is_identity() {
        for n in 1..6 {
            let mut g = vec![F4U::ZERO; n];
            g[0] = F4U::ONE;
            assert!(CirculantSpec::new(F4U::ONE, g).unwrap().materialize().is_identity());
        }
    }

    #[test]
    fn first_column_of_table_c_vector() {
        let c: Vec<F4> = parse_vector("(311023)").unwrap();
        let m = CirculantSpec::new(F4::ONE, c.clone()).unwrap().materialize();
        let col: Vec<F4> = (0..6).map(|i| m.get(i, 0)).collect();
        let expect = vec![c[0], c[5], c[4], c[3], c[2], c[1]];
        assert_eq!(col, expect);
    }

    #[test]
    fn theta_examples() {
        let x = vec![F4::ONE, F4::OMEGA, F4::ZERO];
        let y = vec![F4::ZERO, F4::ONE, F4::ONE];
        // x1·y0 + x2·y1 + ω·x0·y2, evaluated term by term
        let direct = x[1] * y[0] + x[2] * y[1] + F4::OMEGA * (x[0] * y[2]);
        assert_eq!(direct, F4::OMEGA);
        assert_eq!(theta(&x, &y, 1, F4::OMEGA).unwrap(), F4::OMEGA);
        let dot: F4 = x.iter().zip(&y).map(|(&a, &b)| a * b).sum();
        for l in F4::elements() {
            assert_eq!(theta(&x, &y, 0, l).unwrap(), dot);
        }
        let z = vec![F4::ZERO; 3];
        for j in 0..3 {
            assert!(theta(&x, &z, j, F4::OMEGA).unwrap().is_zero());
        }
        assert_eq!(
            theta(&x, &y, 3, F4::ONE),
            Err(CirculantError::IndexOutOfRange { j: 3, n: 3 })
        );
    }

    #[test]
    fn theta_product_identity() {
        let mut e = vec![F4::ZERO; 5];
        e[0] = F4::ONE;
        assert_eq!(theta_product(&e, &e, F4::ONE).unwrap(), e);
        assert!(matches!(
            theta_product(&e, &e, F4::ZERO),
            Err(CirculantError::NotUnitaryLambda('0'))
        ));
    }

    fn product_matches_dense<R: HermitianRing>(seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let n = rng.random_range(1..9);
            let l: R = pick(&mut rng);
            let a = rv::<R>(&mut rng, n);
            let b = rv::<R>(&mut rng, n);
            let am = CirculantSpec::new(l, a.clone()).unwrap().materialize();
            let bm = CirculantSpec::new(l, b.clone()).unwrap().materialize();
            let dense = bm.mul(&am.conj_transpose()).unwrap();
            let v = theta_product(&b, &a, l).unwrap();
            assert_eq!(CirculantSpec::new(l, v).unwrap().materialize(), dense);
        }
    }

    #[test]
    fn theta_product_is_dense_product() {
        product_matches_dense::<F4>(10);
        product_matches_dense::<F4U>(11);
    }

    #[test]
    fn reflection_reproduces_full_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let n = rng.random_range(1..10);
            let l: F4U = pick(&mut rng);
            let a = rv::<F4U>(&mut rng, n);
            let full = theta_product(&a, &a, l).unwrap();
            let half = self_theta_half(&a, l);
            assert_eq!(unfold_self_theta(&half, n, l), full);
            for j in 1..n {
                assert_eq!(full[j], (l * full[n - j]).conj());
            }
        }
    }

    #[test]
    fn commuting_and_closure() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let n = rng.random_range(1..8);
            let l = F4::OMEGA;
            let a = CirculantSpec::new(l, rv::<F4>(&mut rng, n)).unwrap().materialize();
            let b = CirculantSpec::new(l, rv::<F4>(&mut rng, n)).unwrap().materialize();
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab, b.mul(&a).unwrap());
            assert!(CirculantSpec::from_dense(&ab, l).is_some());
            assert!(CirculantSpec::from_dense(&a.add(&b).unwrap(), l).is_some());
        }
    }

    #[test]
    fn transpose_is_inverse_lambda_circulant() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..100 {
            let n = rng.random_range(1..8);
            let units: Vec<F4U> = F4U::elements().filter(|x| x.is_unit()).collect();
            let l = units[rng.random_range(0..units.len())];
            let spec = CirculantSpec::new(l, rv::<F4U>(&mut rng, n)).unwrap();
            let t = spec.transpose_spec().unwrap();
            assert_eq!(t.lambda, l.inv().unwrap());
            assert_eq!(t.materialize(), spec.materialize().transpose());
        }
    }

    #[test]
    fn unitary_check_examples() {
        let mut e = vec![F4::ZERO; 4];
        e[0] = F4::ONE;
        let id = CirculantSpec::new(F4::ONE, e).unwrap();
        assert!(is_hermitian_unitary(&id, UnitaryTarget::PlusOne).unwrap());
        let c = CirculantSpec::new(F4::ONE, parse_vector("(311023)").unwrap()).unwrap();
        assert!(is_hermitian_unitary(&c, UnitaryTarget::PlusOne).unwrap());
        assert!(is_hermitian_unitary(&c, UnitaryTarget::MinusOne).unwrap());
        let bad = CirculantSpec::new(F4::ZERO, vec![F4::ONE]).unwrap();
        assert!(is_hermitian_unitary(&bad, UnitaryTarget::PlusOne).is_err());
    }
}
