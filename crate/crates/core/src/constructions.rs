//! Generator-matrix builders for the circulant constructions and the
//! building-up extension, each paired with a Θ-based condition check.
//!
//! Condition checks never allocate a matrix and are what the search engine
//! calls on every candidate. Builders re-run the check and then assemble
//! `(I | X)` densely.
//!
//! All rings here have characteristic 2: every sign in the underlying
//! identities is routed through [`HermitianRing::negate`], which is the
//! identity map.

use thiserror::Error;

use crate::circulant::{conj_vec, self_theta_matches, theta_raw, wrap, CirculantSpec, UnitaryTarget};
use crate::generator::GeneratorMatrix;
use crate::matrix::{DenseMatrix, MatrixError};
use crate::ring::{hermitian_inner, HermitianRing};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("{name} = {value} is not unitary")]
    NotUnitaryLambda { name: &'static str, value: char },
    #[error("self-duality conditions are not satisfied")]
    ConditionsNotMet,
    #[error("ε·conj(ε) must equal -1 (= 1)")]
    BadEpsilon,
    #[error("δ must have length {expected} and ⟨δ,δ⟩ = -1 (= 1)")]
    BadDelta { expected: usize },
    #[error("input generator matrix does not define a Hermitian self-dual [2n, n] code")]
    InputNotSelfDual,
    #[error("shape error: {0}")]
    Shape(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Which construction a parameter record belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConstructionTag {
    /// Four-circulant `[4n, 2n]`.
    Thm1,
    /// Block λ-circulant of μ-circulants `[2kn, kn]`.
    Thm2,
    /// Bordered block circulant `[2(kn+1), kn+1]`.
    Thm3,
    BuildingUp,
}

impl ConstructionTag {
    pub const fn tag(self) -> &'static str {
        match self {
            ConstructionTag::Thm1 => "thm1",
            ConstructionTag::Thm2 => "thm2",
            ConstructionTag::Thm3 => "thm3",
            ConstructionTag::BuildingUp => "building_up",
        }
    }
}

impl std::fmt::Display for ConstructionTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for ConstructionTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "thm1" => Ok(ConstructionTag::Thm1),
            "thm2" => Ok(ConstructionTag::Thm2),
            "thm3" => Ok(ConstructionTag::Thm3),
            "building_up" | "building-up" => Ok(ConstructionTag::BuildingUp),
            _ => Err(format!("unknown construction '{s}' (expected thm1, thm2, thm3 or building_up)")),
        }
    }
}

fn require_unitary<R: HermitianRing>(name: &'static str, x: R) -> Result<(), ConstructionError> {
    if x.is_unitary() {
        Ok(())
    } else {
        Err(ConstructionError::NotUnitaryLambda {
            name,
            value: x.symbol(),
        })
    }
}

/// The unitary factor `C` of the four-circulant construction: normally a
/// μ-circulant, but any unitary matrix is admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitaryFactor<R: HermitianRing> {
    Circulant(CirculantSpec<R>),
    Dense(DenseMatrix<R>),
}

impl<R: HermitianRing> UnitaryFactor<R> {
    pub fn materialize(&self) -> DenseMatrix<R> {
        match self {
            UnitaryFactor::Circulant(s) => s.materialize(),
            UnitaryFactor::Dense(m) => m.clone(),
        }
    }

    fn is_unitary(&self) -> bool {
        match self {
            UnitaryFactor::Circulant(s) => self_theta_matches(&s.gen, s.lambda, UnitaryTarget::PlusOne),
            UnitaryFactor::Dense(m) => m.hermitian_gram().is_identity(),
        }
    }
}

/// Parameters of the four-circulant construction of `[4n, 2n]` codes:
/// `X = [[-AᵀCJ, -conj(B)], [BᵀCJ, -conj(A)]]` with `A = σ_λ(a)`,
/// `B = σ_λ(b)` and `C` unitary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourCirculantParams<R: HermitianRing> {
    pub lambda: R,
    pub a: Vec<R>,
    pub b: Vec<R>,
    pub c: UnitaryFactor<R>,
}

impl<R: HermitianRing> FourCirculantParams<R> {
    pub fn new(lambda: R, mu: R, a: Vec<R>, b: Vec<R>, c: Vec<R>) -> Self {
        FourCirculantParams {
            lambda,
            a,
            b,
            c: UnitaryFactor::Circulant(CirculantSpec { lambda: mu, gen: c }),
        }
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    fn validate(&self) -> Result<(), ConstructionError> {
        require_unitary("λ", self.lambda)?;
        let n = self.n();
        if n == 0 || self.b.len() != n {
            return Err(ConstructionError::Shape(format!(
                "a and b must be nonempty and equally long ({} vs {})",
                self.a.len(),
                self.b.len()
            )));
        }
        match &self.c {
            UnitaryFactor::Circulant(s) => {
                require_unitary("μ", s.lambda)?;
                if s.gen.len() != n {
                    return Err(ConstructionError::Shape(format!("c has length {}, expected {n}", s.gen.len())));
                }
            }
            UnitaryFactor::Dense(m) => {
                if m.shape() != (n, n) {
                    return Err(ConstructionError::Shape(format!("C is {:?}, expected {n}x{n}", m.shape())));
                }
            }
        }
        Ok(())
    }

    /// `Σ_{x∈{a,b}} Θ(x, conj(x), j)[conj(λ)]` is `-1` at `j = 0` and `0` for
    /// `j ∈ [1, ⌊n/2⌋]`, and `C·conj(C)ᵀ = I`.
    pub fn conditions(&self) -> Result<bool, ConstructionError> {
        self.validate()?;
        Ok(self.conditions_unchecked())
    }

    /// [`Self::conditions`] without validating shapes or unitarity of λ, μ.
    #[inline]
    pub fn conditions_unchecked(&self) -> bool {
        pair_sum_matches(&self.a, &self.b, self.lambda) && self.c.is_unitary()
    }

    /// The `2n × 2n` redundancy block, assembled without checking conditions.
    pub fn redundancy(&self) -> DenseMatrix<R> {
        let n = self.n();
        let a = CirculantSpec { lambda: self.lambda, gen: self.a.clone() }.materialize();
        let b = CirculantSpec { lambda: self.lambda, gen: self.b.clone() }.materialize();
        let c = self.c.materialize();
        let j = DenseMatrix::exchange(n);
        let cj = c.mul(&j).expect("square");
        let top_left = a.transpose().mul(&cj).expect("square").scale(R::one().negate());
        let top_right = b.conj().scale(R::one().negate());
        let bottom_left = b.transpose().mul(&cj).expect("square");
        let bottom_right = a.conj().scale(R::one().negate());
        DenseMatrix::from_blocks(&[vec![&top_left, &top_right], vec![&bottom_left, &bottom_right]])
            .expect("equal block sizes")
    }

    pub fn build(&self) -> Result<GeneratorMatrix<R>, ConstructionError> {
        if !self.conditions()? {
            return Err(ConstructionError::ConditionsNotMet);
        }
        Ok(GeneratorMatrix::standard(&self.redundancy()))
    }
}

/// The `{a, b}` half of the four-circulant conditions.
#[inline]
pub fn pair_sum_matches<R: HermitianRing>(a: &[R], b: &[R], lambda: R) -> bool {
    let n = a.len();
    let lc = lambda.conj();
    let ac = conj_vec(a);
    let bc = conj_vec(b);
    let want0 = R::one().negate();
    if theta_raw(a, &ac, 0, lc) + theta_raw(b, &bc, 0, lc) != want0 {
        return false;
    }
    (1..=n / 2).all(|j| (theta_raw(a, &ac, j, lc) + theta_raw(b, &bc, j, lc)).is_zero())
}

/// `Σ_{i=0}^{k-j-1} Θ(a_{i+j}, conj(a_i), t)[inner] + outer·Σ_{i=k-j}^{k-1} Θ(a_{[i+j]_k}, conj(a_i), t)[inner]`,
/// the generating entry `t` of block `(0, j)` of `X·conj(X)ᵀ` for a block
/// λ-circulant `X` with μ-circulant blocks (`outer = conj(λ)`,
/// `inner = conj(μ)`). Shared by checker and tests so the weighting of the
/// wrapped part cannot drift.
#[inline]
pub fn block_shift_sum<R: HermitianRing>(blocks: &[Vec<R>], conj_blocks: &[Vec<R>], j: usize, t: usize, outer: R, inner: R) -> R {
    let k = blocks.len();
    let mut head = R::zero();
    let mut tail = R::zero();
    for i in 0..k {
        let v = theta_raw(&blocks[wrap(i + j, k)], &conj_blocks[i], t, inner);
        if i < k - j {
            head += v;
        } else {
            tail += v;
        }
    }
    head + outer * tail
}

fn validate_blocks<R>(blocks: &[Vec<R>]) -> Result<usize, ConstructionError> {
    let n = blocks.first().map_or(0, Vec::len);
    if blocks.is_empty() || n == 0 || blocks.iter().any(|b| b.len() != n) {
        return Err(ConstructionError::Shape("need k ≥ 1 nonempty blocks of equal length".into()));
    }
    Ok(n)
}

/// Check that the block λ-circulant `X` with μ-circulant blocks satisfies
/// `X·conj(X)ᵀ = d·I + o·(all-ones)`, where `d + o` is `diag` and `o` is
/// `off`; only the `⌊n/2⌋+1` and `⌊k/2⌋` families that determine the rest
/// are evaluated.
fn block_gram_matches<R: HermitianRing>(blocks: &[Vec<R>], lambda: R, mu: R, diag: R, off: R) -> bool {
    let k = blocks.len();
    let n = blocks[0].len();
    let conj_blocks: Vec<Vec<R>> = blocks.iter().map(|b| conj_vec(b)).collect();
    let outer = lambda.conj();
    let inner = mu.conj();
    if block_shift_sum(blocks, &conj_blocks, 0, 0, outer, inner) != diag {
        return false;
    }
    for t in 1..=n / 2 {
        if block_shift_sum(blocks, &conj_blocks, 0, t, outer, inner) != off {
            return false;
        }
    }
    for j in 1..=k / 2 {
        if block_shift_sum(blocks, &conj_blocks, j, 0, outer, inner) != off {
            return false;
        }
    }
    for j in 1..k {
        for t in 1..=n / 2 {
            if block_shift_sum(blocks, &conj_blocks, j, t, outer, inner) != off {
                return false;
            }
        }
    }
    true
}

/// Block λ-circulant of μ-circulant blocks, `[2kn, kn]` codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCirculantParams<R> {
    /// Block-level λ.
    pub lambda: R,
    /// λ of each block.
    pub mu: R,
    pub blocks: Vec<Vec<R>>,
}

impl<R: HermitianRing> BlockCirculantParams<R> {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    fn validate(&self) -> Result<(), ConstructionError> {
        require_unitary("λ", self.lambda)?;
        require_unitary("μ", self.mu)?;
        validate_blocks(&self.blocks).map(|_| ())
    }

    pub fn conditions(&self) -> Result<bool, ConstructionError> {
        self.validate()?;
        Ok(self.conditions_unchecked())
    }

    #[inline]
    pub fn conditions_unchecked(&self) -> bool {
        block_gram_matches(&self.blocks, self.lambda, self.mu, R::one().negate(), R::zero())
    }

    pub fn redundancy(&self) -> DenseMatrix<R> {
        block_circulant(&self.blocks, self.lambda, self.mu)
    }

    pub fn build(&self) -> Result<GeneratorMatrix<R>, ConstructionError> {
        if !self.conditions()? {
            return Err(ConstructionError::ConditionsNotMet);
        }
        Ok(GeneratorMatrix::standard(&self.redundancy()))
    }
}

/// Dense block λ-circulant matrix with μ-circulant blocks.
pub fn block_circulant<R: HermitianRing>(blocks: &[Vec<R>], lambda: R, mu: R) -> DenseMatrix<R> {
    let k = blocks.len();
    let n = blocks[0].len();
    let mats: Vec<DenseMatrix<R>> = blocks
        .iter()
        .map(|b| CirculantSpec { lambda: mu, gen: b.clone() }.materialize())
        .collect();
    DenseMatrix::from_fn(k * n, k * n, |i, j| {
        let (br, bc) = (i / n, j / n);
        let (r, c) = (i % n, j % n);
        if bc >= br {
            mats[bc - br].get(r, c)
        } else {
            lambda * mats[k + bc - br].get(r, c)
        }
    })
}

/// Bordered block-circulant construction of `[2(kn+1), kn+1]` codes:
/// `X = [[x1, x2·1ᵀ], [x3·1, Y]]` with `Y` a block circulant of circulants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BorderedParams<R> {
    pub x1: R,
    pub x2: R,
    pub x3: R,
    pub blocks: Vec<Vec<R>>,
}

impl<R: HermitianRing> BorderedParams<R> {
    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn n(&self) -> usize {
        self.blocks.first().map_or(0, Vec::len)
    }

    pub fn conditions(&self) -> Result<bool, ConstructionError> {
        validate_blocks(&self.blocks)?;
        Ok(self.conditions_unchecked())
    }

    pub fn conditions_unchecked(&self) -> bool {
        let kn = self.k() * self.n();
        let one = R::one();
        // 1 + x1·conj(x1) + kn·x2·conj(x2) = 0
        if !(one + self.x1.norm() + self.x2.norm().times_int(kn)).is_zero() {
            return false;
        }
        // x1·conj(x3) + x2·Σ conj(a_{i:s}) = 0
        let coeff_sum: R = self.blocks.iter().flatten().map(|a| a.conj()).sum();
        if !(self.x1 * self.x3.conj() + self.x2 * coeff_sum).is_zero() {
            return false;
        }
        let x3n = self.x3.norm();
        let off = x3n.negate();
        let diag = one.negate() + off;
        block_gram_matches(&self.blocks, one, one, diag, off)
    }

    pub fn redundancy(&self) -> DenseMatrix<R> {
        let kn = self.k() * self.n();
        let y = block_circulant(&self.blocks, R::one(), R::one());
        DenseMatrix::from_fn(kn + 1, kn + 1, |i, j| match (i, j) {
            (0, 0) => self.x1,
            (0, _) => self.x2,
            (_, 0) => self.x3,
            _ => y.get(i - 1, j - 1),
        })
    }

    pub fn build(&self) -> Result<GeneratorMatrix<R>, ConstructionError> {
        if !self.conditions()? {
            return Err(ConstructionError::ConditionsNotMet);
        }
        Ok(GeneratorMatrix::standard(&self.redundancy()))
    }
}

/// Extend a self-dual `[2n, n]` code to a self-dual `[2n+2, n+1]` code.
///
/// The output has first row `(1, 0, δ)` and row `i+1` equal to
/// `(-γ_i, ε·γ_i, r_i)` with `γ_i = ⟨r_i, δ⟩_H`. Requires
/// `ε·conj(ε) = -1` and `⟨δ, δ⟩_H = -1`. `check_input` additionally
/// verifies the input is self-dual, at `O(n³)` cost.
pub fn building_up<R: HermitianRing>(
    g: &GeneratorMatrix<R>,
    delta: &[R],
    epsilon: R,
    check_input: bool,
) -> Result<GeneratorMatrix<R>, ConstructionError> {
    let minus_one = R::one().negate();
    if epsilon.norm() != minus_one {
        return Err(ConstructionError::BadEpsilon);
    }
    let len = g.n();
    if delta.len() != len || hermitian_inner(delta, delta) != minus_one {
        return Err(ConstructionError::BadDelta { expected: len });
    }
    if check_input && (len != 2 * g.k() || !g.rows_self_orthogonal() || !has_free_rank(g)) {
        return Err(ConstructionError::InputNotSelfDual);
    }
    let mut rows = Vec::with_capacity(g.k() + 1);
    let mut first = vec![R::one(), R::zero()];
    first.extend_from_slice(delta);
    rows.push(first);
    for r in g.rows() {
        let gamma = hermitian_inner(r, delta);
        let mut row = vec![gamma.negate(), epsilon * gamma];
        row.extend_from_slice(r);
        rows.push(row);
    }
    Ok(GeneratorMatrix::from_rows(rows)?)
}

/// Whether the rows generate a free module of rank `k`.
pub fn has_free_rank<R: HermitianRing>(g: &GeneratorMatrix<R>) -> bool {
    if g.is_standard_form() || g.to_standard_form().is_some() {
        return true;
    }
    if R::RING == crate::ring::RingId::F4 {
        let m = DenseMatrix::from_fn(g.k(), g.n(), |i, j| crate::ring::F4::from_index(g.matrix().get(i, j).index()));
        return crate::generator::rank_f4(&m) == g.k();
    }
    false
}
