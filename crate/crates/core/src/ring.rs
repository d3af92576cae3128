//! Exact arithmetic over GF(4) and GF(4)+uGF(4).
//!
//! GF(4) = F2[ω]/(ω²+ω+1). An element is stored as two bits `b0 + 2·b1`
//! meaning `b0·1 + b1·ω`, which is exactly the hexadecimal symbol used in
//! published code tables (`0 = 0`, `1 = 1`, `2 = ω`, `3 = 1+ω`).
//!
//! GF(4)+uGF(4) = GF(4)[u]/(u²). An element `a + b·u` is stored as the
//! nibble `a + 4·b`, again equal to its table symbol (`5 = 1+u`,
//! `A = ω+ωu`, ...).
//!
//! Both rings have characteristic 2, so negation is the identity. Every
//! `-1` appearing in a self-duality condition is therefore `1`.
//!
//! The Hermitian involution is Frobenius squaring, applied coefficient-wise
//! over GF(4)+uGF(4): `conj(a + b·u) = a² + b²·u`.

use std::fmt;
use std::hash::Hash;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("operands belong to different rings ({0} and {1})")]
    MixedRings(RingId, RingId),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("bad symbol {sym:?} for ring {ring}")]
    BadSymbol { sym: char, ring: RingId },
    #[error("malformed vector literal {0:?}: expected a parenthesized hex string")]
    BadVector(String),
    #[error("unknown ring {0:?} (expected f4 or f4u)")]
    UnknownRing(String),
}

/// Which of the two alphabets a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RingId {
    F4,
    F4U,
}

impl RingId {
    pub const fn order(self) -> usize {
        match self {
            RingId::F4 => 4,
            RingId::F4U => 16,
        }
    }

    pub const fn tag(self) -> &'static str {
        match self {
            RingId::F4 => "f4",
            RingId::F4U => "f4u",
        }
    }
}

impl fmt::Display for RingId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl std::str::FromStr for RingId {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "f4" => Ok(RingId::F4),
            "f4u" | "f4+uf4" => Ok(RingId::F4U),
            _ => Err(RingError::UnknownRing(s.to_string())),
        }
    }
}

/// A finite commutative ring of characteristic 2 with a fixed involutory
/// automorphism (the Hermitian conjugation).
///
/// Elements are indexed `0..ORDER` by their table symbol.
pub trait HermitianRing:
    Copy
    + Eq
    + Ord
    + Hash
    + Default
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + MulAssign
    + Send
    + Sync
    + Sum
    + 'static
{
    const RING: RingId;
    const ORDER: usize;

    /// Element with table symbol `index`. Panics if `index >= ORDER`.
    fn from_index(index: u8) -> Self;
    fn index(self) -> u8;
    fn conj(self) -> Self;
    fn inv(self) -> Option<Self>;

    fn is_unit(self) -> bool {
        self.inv().is_some()
    }

    /// `x · conj(x)`.
    fn norm(self) -> Self {
        self * self.conj()
    }

    fn is_unitary(self) -> bool {
        self.norm().is_one()
    }

    /// Additive inverse. The identity in characteristic 2; kept as a named
    /// operation so sign positions in the constructions stay visible.
    fn negate(self) -> Self {
        -self
    }

    /// The integer `n` acting on the ring, i.e. `(n mod 2)·self`.
    fn times_int(self, n: usize) -> Self {
        if n % 2 == 1 {
            self
        } else {
            Self::zero()
        }
    }

    fn elements() -> Box<dyn Iterator<Item = Self>> {
        Box::new((0..Self::ORDER as u8).map(Self::from_index))
    }

    fn symbol(self) -> char {
        char::from_digit(u32::from(self.index()), 16)
            .expect("index below 16")
            .to_ascii_uppercase()
    }

    fn from_symbol(sym: char) -> Result<Self, RingError> {
        match sym.to_digit(16) {
            Some(v) if (v as usize) < Self::ORDER => Ok(Self::from_index(v as u8)),
            _ => Err(RingError::BadSymbol {
                sym,
                ring: Self::RING,
            }),
        }
    }
}

const fn f4_mul_raw(x: u8, y: u8) -> u8 {
    let (a0, a1) = (x & 1, (x >> 1) & 1);
    let (b0, b1) = (y & 1, (y >> 1) & 1);
    let c0 = (a0 & b0) ^ (a1 & b1);
    let c1 = (a0 & b1) ^ (a1 & b0) ^ (a1 & b1);
    c0 | (c1 << 1)
}

const fn f4_sq_raw(x: u8) -> u8 {
    f4_mul_raw(x, x)
}

const F4_MUL: [[u8; 4]; 4] = {
    let mut t = [[0u8; 4]; 4];
    let mut i = 0;
    while i < 4 {
        let mut j = 0;
        while j < 4 {
            t[i][j] = f4_mul_raw(i as u8, j as u8);
            j += 1;
        }
        i += 1;
    }
    t
};

const F4U_MUL: [[u8; 16]; 16] = {
    let mut t = [[0u8; 16]; 16];
    let mut i = 0;
    while i < 16 {
        let mut j = 0;
        while j < 16 {
            let (a, b) = ((i & 3) as u8, (i >> 2) as u8);
            let (c, d) = ((j & 3) as u8, (j >> 2) as u8);
            // (a + bu)(c + du) = ac + (ad + bc)u
            let lo = f4_mul_raw(a, c);
            let hi = f4_mul_raw(a, d) ^ f4_mul_raw(b, c);
            t[i][j] = lo | (hi << 2);
            j += 1;
        }
        i += 1;
    }
    t
};

const F4U_CONJ: [u8; 16] = {
    let mut t = [0u8; 16];
    let mut i = 0;
    while i < 16 {
        let (a, b) = ((i & 3) as u8, (i >> 2) as u8);
        t[i] = f4_sq_raw(a) | (f4_sq_raw(b) << 2);
        i += 1;
    }
    t
};

const F4U_INV: [u8; 16] = {
    let mut t = [0xffu8; 16];
    let mut i = 0;
    while i < 16 {
        let mut j = 0;
        while j < 16 {
            if F4U_MUL[i][j] == 1 {
                t[i] = j as u8;
            }
            j += 1;
        }
        i += 1;
    }
    t
};

/// An element of GF(4).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F4(u8);

impl F4 {
    pub const ZERO: F4 = F4(0);
    pub const ONE: F4 = F4(1);
    pub const OMEGA: F4 = F4(2);
    pub const OMEGA2: F4 = F4(3);

    /// Low bit (coefficient of 1) and high bit (coefficient of ω).
    #[inline]
    pub const fn bits(self) -> (bool, bool) {
        (self.0 & 1 != 0, self.0 & 2 != 0)
    }
}

impl HermitianRing for F4 {
    const RING: RingId = RingId::F4;
    const ORDER: usize = 4;

    #[inline]
    fn from_index(index: u8) -> Self {
        assert!(index < 4, "GF(4) index out of range: {index}");
        F4(index)
    }

    #[inline]
    fn index(self) -> u8 {
        self.0
    }

    #[inline]
    fn conj(self) -> Self {
        F4(f4_sq_raw(self.0))
    }

    fn inv(self) -> Option<Self> {
        // x⁻¹ = x² for x ≠ 0
        (self.0 != 0).then(|| self.conj())
    }
}

/// An element `a + b·u` of GF(4)+uGF(4).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F4U(u8);

impl F4U {
    pub const ZERO: F4U = F4U(0);
    pub const ONE: F4U = F4U(1);
    pub const U: F4U = F4U(4);

    pub fn new(a: F4, b: F4) -> Self {
        F4U(a.0 | (b.0 << 2))
    }

    /// The unit-part coordinate `a`.
    #[inline]
    pub fn a(self) -> F4 {
        F4(self.0 & 3)
    }

    /// The `u` coordinate `b`.
    #[inline]
    pub fn b(self) -> F4 {
        F4(self.0 >> 2)
    }
}

impl HermitianRing for F4U {
    const RING: RingId = RingId::F4U;
    const ORDER: usize = 16;

    #[inline]
    fn from_index(index: u8) -> Self {
        assert!(index < 16, "GF(4)+uGF(4) index out of range: {index}");
        F4U(index)
    }

    #[inline]
    fn index(self) -> u8 {
        self.0
    }

    #[inline]
    fn conj(self) -> Self {
        F4U(F4U_CONJ[self.0 as usize])
    }

    fn inv(self) -> Option<Self> {
        let v = F4U_INV[self.0 as usize];
        (v != 0xff).then_some(F4U(v))
    }
}

// Addition in characteristic 2 is XOR of the coordinate bits.
macro_rules! impl_char2_ops {
    ($t:ident, $mul:expr) => {
        #[allow(clippy::suspicious_arithmetic_impl)]
        impl Add for $t {
            type Output = $t;
            #[inline]
            fn add(self, rhs: $t) -> $t {
                $t(self.0 ^ rhs.0)
            }
        }

        #[allow(clippy::suspicious_arithmetic_impl)]
        impl Sub for $t {
            type Output = $t;
            #[inline]
            fn sub(self, rhs: $t) -> $t {
                $t(self.0 ^ rhs.0)
            }
        }

        impl Neg for $t {
            type Output = $t;
            #[inline]
            fn neg(self) -> $t {
                self
            }
        }

        impl Mul for $t {
            type Output = $t;
            #[inline]
            fn mul(self, rhs: $t) -> $t {
                $t($mul[self.0 as usize][rhs.0 as usize])
            }
        }

        #[allow(clippy::suspicious_op_assign_impl)]
        impl AddAssign for $t {
            #[inline]
            fn add_assign(&mut self, rhs: $t) {
                self.0 ^= rhs.0;
            }
        }

        impl MulAssign for $t {
            #[inline]
            fn mul_assign(&mut self, rhs: $t) {
                *self = *self * rhs;
            }
        }

        impl Zero for $t {
            fn zero() -> Self {
                $t(0)
            }
            fn is_zero(&self) -> bool {
                self.0 == 0
            }
        }

        impl One for $t {
            fn one() -> Self {
                $t(1)
            }
        }

        impl std::iter::Sum for $t {
            fn sum<I: Iterator<Item = $t>>(iter: I) -> $t {
                iter.fold($t(0), |acc, x| acc + x)
            }
        }

        impl fmt::Display for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.symbol())
            }
        }

        impl fmt::Debug for $t {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({})", stringify!($t), self.symbol())
            }
        }
    };
}

impl_char2_ops!(F4, F4_MUL);
impl_char2_ops!(F4U, F4U_MUL);

/// `U' = {λ : λ·conj(λ) = 1}`, found by testing every element.
pub fn unitary_elements<R: HermitianRing>() -> Vec<R> {
    R::elements().filter(|x| x.is_unitary()).collect()
}

/// Hermitian inner product `Σ xᵢ·conj(yᵢ)`.
pub fn hermitian_inner<R: HermitianRing>(x: &[R], y: &[R]) -> R {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

/// Parse the parenthesized hex form used in the tables, e.g. `(000333)`.
/// The parentheses are optional.
pub fn parse_vector<R: HermitianRing>(s: &str) -> Result<Vec<R>, RingError> {
    let t = s.trim();
    let inner = match (t.strip_prefix('('), t.ends_with(')')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => t,
        _ => return Err(RingError::BadVector(s.to_string())),
    };
    if inner.is_empty() {
        return Err(RingError::BadVector(s.to_string()));
    }
    inner.chars().map(R::from_symbol).collect()
}

pub fn format_vector<R: HermitianRing>(v: &[R]) -> String {
    let mut s = String::with_capacity(v.len() + 2);
    s.push('(');
    s.extend(v.iter().map(|x| x.symbol()));
    s.push(')');
    s
}

/// A ring element whose ring is only known at run time (CLI input,
/// persisted records).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingElement {
    F4(F4),
    F4U(F4U),
}

impl RingElement {
    pub fn ring(self) -> RingId {
        match self {
            RingElement::F4(_) => RingId::F4,
            RingElement::F4U(_) => RingId::F4U,
        }
    }

    pub fn decode(sym: char, ring: RingId) -> Result<Self, RingError> {
        Ok(match ring {
            RingId::F4 => RingElement::F4(F4::from_symbol(sym)?),
            RingId::F4U => RingElement::F4U(F4U::from_symbol(sym)?),
        })
    }

    pub fn encode(self) -> char {
        match self {
            RingElement::F4(x) => x.symbol(),
            RingElement::F4U(x) => x.symbol(),
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, RingError> {
        match (self, rhs) {
            (RingElement::F4(a), RingElement::F4(b)) => Ok(RingElement::F4(a + b)),
            (RingElement::F4U(a), RingElement::F4U(b)) => Ok(RingElement::F4U(a + b)),
            _ => Err(RingError::MixedRings(self.ring(), rhs.ring())),
        }
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, RingError> {
        match (self, rhs) {
            (RingElement::F4(a), RingElement::F4(b)) => Ok(RingElement::F4(a * b)),
            (RingElement::F4U(a), RingElement::F4U(b)) => Ok(RingElement::F4U(a * b)),
            _ => Err(RingError::MixedRings(self.ring(), rhs.ring())),
        }
    }

    pub fn inv(self) -> Result<Self, RingError> {
        let inv = match self {
            RingElement::F4(a) => a.inv().map(RingElement::F4),
            RingElement::F4U(a) => a.inv().map(RingElement::F4U),
        };
        inv.ok_or_else(|| RingError::NotAUnit(self.encode().to_string()))
    }

    pub fn conj(self) -> Self {
        match self {
            RingElement::F4(a) => RingElement::F4(a.conj()),
            RingElement::F4U(a) => RingElement::F4U(a.conj()),
        }
    }

    pub fn unitary_elements(ring: RingId) -> Vec<RingElement> {
        match ring {
            RingId::F4 => unitary_elements::<F4>().into_iter().map(RingElement::F4).collect(),
            RingId::F4U => unitary_elements::<F4U>()
                .into_iter()
                .map(RingElement::F4U)
                .collect(),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}
