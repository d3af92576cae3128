//! Hermitian self-dual codes over GF(4) and GF(4)+uGF(4) from λ-circulant
//! constructions: condition checks, generator assembly, code verification,
//! and a seeded search engine.
//!
//! Everything algebraic is generic over [`HermitianRing`]; the aliases below
//! fix the two supported rings.

pub mod circulant;
pub mod codeops;
pub mod constructions;
pub mod fixtures;
pub mod generator;
pub mod graymap;
pub mod matrix;
pub mod packed;
pub mod ring;
pub mod search;

pub use circulant::{theta, theta_product, CirculantSpec, UnitaryTarget};
pub use codeops::{alpha_of, min_distance, verify_hermitian_self_dual, weight_distribution_exhaustive, Method, WeightDistribution};
pub use constructions::{building_up, BlockCirculantParams, BorderedParams, FourCirculantParams, UnitaryFactor};
pub use generator::GeneratorMatrix;
pub use graymap::{gray_map, lee_weight};
pub use matrix::DenseMatrix;
pub use ring::{HermitianRing, RingElement, RingId, F4, F4U};

pub type F4Matrix = DenseMatrix<F4>;
pub type F4UMatrix = DenseMatrix<F4U>;
pub type F4Circulant = CirculantSpec<F4>;
pub type F4UCirculant = CirculantSpec<F4U>;
pub type F4Generator = GeneratorMatrix<F4>;
pub type F4UGenerator = GeneratorMatrix<F4U>;
