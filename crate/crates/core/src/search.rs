//! Seeded randomized search over construction parameters, unitary
//! circulant pre-enumeration, parameter records and table verification.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circulant::{self_theta_matches, UnitaryTarget};
use crate::codeops::{
    alpha_of_packed, distance_bound, enumerator_identity, info_set_distance, AlphaMethod, AlphaReport, CodeError,
    PackedCode, DEFAULT_BUDGET, EXTENDED_BUDGET,
};
use crate::constructions::{
    building_up, has_free_rank, pair_sum_matches, BlockCirculantParams, BorderedParams, ConstructionError,
    ConstructionTag, FourCirculantParams,
};
use crate::fixtures::{self, Fixture, FixtureError, FixtureRow};
use crate::generator::GeneratorMatrix;
use crate::graymap::{image_generator, QuaternaryImage};
use crate::ring::{format_vector, hermitian_inner, parse_vector, unitary_elements, HermitianRing, RingError, RingId, F4, F4U};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("enumerating {ring} vectors of length {n} exceeds the budget")]
    BudgetExceeded { ring: RingId, n: usize },
    #[error("record line {line}: {msg}")]
    Record { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SearchError + '_ {
    move |source| SearchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

// ---------------------------------------------------------------------------
// Unitary circulant tables

pub const UNITARY_TABLE_VERSION: u32 = 1;
/// At most `16^7` generating vectors per μ.
const UNITARY_BUDGET: u128 = 1 << 28;

/// All generating vectors `c` with `σ_μ(c)·conj(σ_μ(c))ᵀ = I`, per unitary μ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitaryCirculantTable {
    pub ring: RingId,
    pub n: usize,
    /// `(μ index, generating vectors as element indices)`.
    pub per_mu: Vec<(u8, Vec<Vec<u8>>)>,
}

impl UnitaryCirculantTable {
    /// `N_C`: the number of `(μ, c)` pairs.
    pub fn total(&self) -> usize {
        self.per_mu.iter().map(|(_, v)| v.len()).sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (u8, &[u8])> {
        self.per_mu
            .iter()
            .flat_map(|(mu, vs)| vs.iter().map(move |v| (*mu, v.as_slice())))
    }

    pub fn file_name(ring: RingId, n: usize) -> String {
        format!("unitary_{}_{n}.tbl", ring.tag())
    }

    fn header(&self) -> String {
        format!("# hsd-unitary v{UNITARY_TABLE_VERSION} ring={} n={}", self.ring.tag(), self.n)
    }

    pub fn to_text(&self) -> String {
        let mut s = self.header();
        s.push('\n');
        for (mu, v) in self.entries() {
            let sym = |i: u8| char::from_digit(u32::from(i), 16).unwrap().to_ascii_uppercase();
            let body: String = v.iter().map(|&i| sym(i)).collect();
            s.push_str(&format!("{} ({body})\n", sym(mu)));
        }
        s
    }

    /// `None` if the header does not match the current version, ring and n.
    pub fn from_text(text: &str, ring: RingId, n: usize) -> Option<Self> {
        let mut lines = text.lines();
        let expected = UnitaryCirculantTable { ring, n, per_mu: Vec::new() }.header();
        if lines.next()? != expected {
            return None;
        }
        let mut per_mu: Vec<(u8, Vec<Vec<u8>>)> = Vec::new();
        for line in lines {
            let (mu, v) = line.split_once(' ')?;
            let mu = u8::from_str_radix(mu, 16).ok()?;
            let v: Vec<u8> = v
                .trim_start_matches('(')
                .trim_end_matches(')')
                .chars()
                .map(|c| c.to_digit(16).map(|d| d as u8))
                .collect::<Option<_>>()?;
            if v.len() != n || v.iter().any(|&x| usize::from(x) >= ring.order()) {
                return None;
            }
            match per_mu.last_mut() {
                Some((m, vs)) if *m == mu => vs.push(v),
                _ => per_mu.push((mu, vec![v])),
            }
        }
        Some(UnitaryCirculantTable { ring, n, per_mu })
    }
}

fn decode_index<R: HermitianRing>(mut i: u64, n: usize) -> Vec<R> {
    (0..n)
        .map(|_| {
            let x = R::from_index((i % R::ORDER as u64) as u8);
            i /= R::ORDER as u64;
            x
        })
        .collect()
}

fn enumerate_typed<R: HermitianRing>(n: usize) -> Vec<(u8, Vec<Vec<u8>>)> {
    let total = (R::ORDER as u64).pow(n as u32);
    unitary_elements::<R>()
        .into_iter()
        .map(|mu| {
            let found: Vec<Vec<u8>> = (0..total)
                .into_par_iter()
                .filter_map(|i| {
                    let c = decode_index::<R>(i, n);
                    self_theta_matches(&c, mu, UnitaryTarget::PlusOne).then(|| c.iter().map(|x| x.index()).collect())
                })
                .collect();
            (mu.index(), found)
        })
        .collect()
}

/// Exhaustively test every generating vector for every unitary μ.
pub fn enumerate_unitary_circulants(ring: RingId, n: usize) -> Result<UnitaryCirculantTable, SearchError> {
    let size = (ring.order() as u128).checked_pow(n as u32);
    if n == 0 || size.is_none_or(|s| s > UNITARY_BUDGET) {
        return Err(SearchError::BudgetExceeded { ring, n });
    }
    let per_mu = match ring {
        RingId::F4 => enumerate_typed::<F4>(n),
        RingId::F4U => enumerate_typed::<F4U>(n),
    };
    Ok(UnitaryCirculantTable { ring, n, per_mu })
}

/// Read `unitary_<ring>_<n>.tbl` from `cache_dir`, or enumerate and write it.
/// A stale or corrupt cache file is rebuilt.
pub fn load_or_build_unitary(
    ring: RingId,
    n: usize,
    cache_dir: Option<&Path>,
) -> Result<UnitaryCirculantTable, SearchError> {
    let Some(dir) = cache_dir else {
        return enumerate_unitary_circulants(ring, n);
    };
    let path = dir.join(UnitaryCirculantTable::file_name(ring, n));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Some(t) = UnitaryCirculantTable::from_text(&text, ring, n) {
            return Ok(t);
        }
    }
    let table = enumerate_unitary_circulants(ring, n)?;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    fs::write(&path, table.to_text()).map_err(io_err(&path))?;
    Ok(table)
}

// ---------------------------------------------------------------------------
// Parameter records

/// The building-up step applied to the quaternary image of a base code.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Extension {
    pub eps: char,
    pub delta: String,
}

/// Construction parameters in table notation. For `thm3` the first vector
/// is `(x1 x2 x3)` and λ = μ = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeParams {
    pub construction: ConstructionTag,
    pub ring: RingId,
    pub n: usize,
    pub k: usize,
    pub lambda: char,
    pub mu: char,
    pub vectors: Vec<String>,
    pub extension: Option<Extension>,
}

/// A generator matrix over either ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltCode {
    F4(GeneratorMatrix<F4>),
    F4U(GeneratorMatrix<F4U>),
}

/// Length `2k`, self-orthogonal rows and free rank `k`.
pub fn is_self_dual<R: HermitianRing>(g: &GeneratorMatrix<R>) -> bool {
    g.n() == 2 * g.k() && g.rows_self_orthogonal() && has_free_rank(g)
}

impl BuiltCode {
    pub fn ring(&self) -> RingId {
        match self {
            BuiltCode::F4(_) => RingId::F4,
            BuiltCode::F4U(_) => RingId::F4U,
        }
    }

    pub fn self_dual(&self) -> bool {
        match self {
            BuiltCode::F4(g) => is_self_dual(g),
            BuiltCode::F4U(g) => is_self_dual(g),
        }
    }

    /// Generator of the quaternary image.
    pub fn image(&self) -> GeneratorMatrix<F4> {
        match self {
            BuiltCode::F4(g) => g.clone(),
            BuiltCode::F4U(g) => image_generator(g),
        }
    }
}

fn sym<R: HermitianRing>(c: char) -> Result<R, SearchError> {
    Ok(R::from_symbol(c)?)
}

impl CodeParams {
    /// Length of the code over its own ring, before any extension.
    pub fn base_length(&self) -> usize {
        match self.construction {
            ConstructionTag::Thm1 => 4 * self.n,
            ConstructionTag::Thm2 => 2 * self.k * self.n,
            ConstructionTag::Thm3 => 2 * (self.k * self.n + 1),
            ConstructionTag::BuildingUp => 0,
        }
    }

    /// Length of the final quaternary code.
    pub fn length(&self) -> usize {
        let factor = match self.ring {
            RingId::F4 => 1,
            RingId::F4U => 2,
        };
        self.base_length() * factor + if self.extension.is_some() { 2 } else { 0 }
    }

    fn check_shape(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::Params(m));
        let want_vectors = match self.construction {
            ConstructionTag::Thm1 => 3,
            ConstructionTag::Thm2 => self.k,
            ConstructionTag::Thm3 => self.k + 1,
            ConstructionTag::BuildingUp => return bad("the base construction must be thm1, thm2 or thm3".into()),
        };
        if self.vectors.len() != want_vectors {
            return bad(format!(
                "{} with k = {} takes {want_vectors} vectors, got {}",
                self.construction,
                self.k,
                self.vectors.len()
            ));
        }
        if self.n == 0 || self.k == 0 {
            return bad("n and k must be positive".into());
        }
        Ok(())
    }

    fn typed<R: HermitianRing>(&self) -> Result<TypedParams<R>, SearchError> {
        self.check_shape()?;
        let vecs: Vec<Vec<R>> = self.vectors.iter().map(|v| parse_vector(v)).collect::<Result<_, _>>()?;
        let (head, blocks) = match self.construction {
            ConstructionTag::Thm3 => {
                if vecs[0].len() != 3 {
                    return Err(SearchError::Params("thm3 needs (x1x2x3) as its first vector".into()));
                }
                (Some(vecs[0].clone()), vecs[1..].to_vec())
            }
            _ => (None, vecs),
        };
        if let Some(v) = blocks.iter().find(|v| v.len() != self.n) {
            return Err(SearchError::Params(format!("vector {} has length {}, expected n = {}", format_vector(v), v.len(), self.n)));
        }
        let lambda = sym::<R>(self.lambda)?;
        let mu = sym::<R>(self.mu)?;
        Ok(match self.construction {
            ConstructionTag::Thm1 => {
                let mut it = blocks.into_iter();
                let (a, b, c) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
                TypedParams::Thm1(FourCirculantParams::new(lambda, mu, a, b, c))
            }
            ConstructionTag::Thm2 => TypedParams::Thm2(BlockCirculantParams { lambda, mu, blocks }),
            ConstructionTag::Thm3 => {
                let h = head.unwrap();
                TypedParams::Thm3(BorderedParams { x1: h[0], x2: h[1], x3: h[2], blocks })
            }
            ConstructionTag::BuildingUp => unreachable!("rejected by check_shape"),
        })
    }

    /// Whether the construction's self-duality conditions hold (base code
    /// only; the building-up step has its own input checks).
    pub fn conditions(&self) -> Result<bool, SearchError> {
        match self.ring {
            RingId::F4 => self.typed::<F4>()?.conditions(),
            RingId::F4U => self.typed::<F4U>()?.conditions(),
        }
    }

    fn build_base(&self) -> Result<BuiltCode, SearchError> {
        Ok(match self.ring {
            RingId::F4 => BuiltCode::F4(self.typed::<F4>()?.build()?),
            RingId::F4U => BuiltCode::F4U(self.typed::<F4U>()?.build()?),
        })
    }

    /// The final code: the construction, followed by the building-up step
    /// on its quaternary image when an extension is present.
    pub fn build(&self) -> Result<BuiltCode, SearchError> {
        let base = self.build_base()?;
        let Some(ext) = &self.extension else {
            return Ok(base);
        };
        let image = base.image();
        let delta: Vec<F4> = parse_vector(&ext.delta)?;
        let eps = sym::<F4>(ext.eps)?;
        Ok(BuiltCode::F4(building_up(&image, &delta, eps, true)?))
    }

    fn fields(&self) -> String {
        let mut s = String::new();
        if self.extension.is_some() {
            s.push_str(&format!("construction=building_up base={}", self.construction));
        } else {
            s.push_str(&format!("construction={}", self.construction));
        }
        s.push_str(&format!(
            " ring={} n={} k={} lambda={} mu={} vectors={}",
            self.ring.tag(),
            self.n,
            self.k,
            self.lambda,
            self.mu,
            self.vectors.join(";")
        ));
        if let Some(e) = &self.extension {
            s.push_str(&format!(" eps={} delta={}", e.eps, e.delta));
        }
        s
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fields())
    }
}

enum TypedParams<R: HermitianRing> {
    Thm1(FourCirculantParams<R>),
    Thm2(BlockCirculantParams<R>),
    Thm3(BorderedParams<R>),
}

impl<R: HermitianRing> TypedParams<R> {
    fn conditions(&self) -> Result<bool, SearchError> {
        Ok(match self {
            TypedParams::Thm1(p) => p.conditions()?,
            TypedParams::Thm2(p) => p.conditions()?,
            TypedParams::Thm3(p) => p.conditions()?,
        })
    }

    fn build(&self) -> Result<GeneratorMatrix<R>, SearchError> {
        Ok(match self {
            TypedParams::Thm1(p) => p.build()?,
            TypedParams::Thm2(p) => p.build()?,
            TypedParams::Thm3(p) => p.build()?,
        })
    }
}

/// One line of the persistence format.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeRecord {
    pub params: CodeParams,
    /// Length of the quaternary code.
    pub length: usize,
    pub d: usize,
    pub alpha: Option<u64>,
    pub seed: Option<u64>,
    /// Index of the candidate in the seeded stream.
    pub candidate: Option<u64>,
}

impl CodeRecord {
    pub fn rank(&self) -> usize {
        self.length / 2
    }
}

fn opt<T: fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "-".to_string(), T::to_string)
}

impl fmt::Display for CodeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} length={} rank={} d={} alpha={} seed={} candidate={}",
            self.params,
            self.length,
            self.rank(),
            self.d,
            opt(&self.alpha),
            opt(&self.seed),
            opt(&self.candidate)
        )
    }
}

impl FromStr for CodeRecord {
    type Err = String;

    fn from_str(line: &str) -> Result<Self, String> {
        let mut map = std::collections::HashMap::new();
        for tok in line.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| format!("expected key=value, got '{tok}'"))?;
            if map.insert(k, v).is_some() {
                return Err(format!("duplicate field '{k}'"));
            }
        }
        let get = |k: &str| map.get(k).copied().ok_or_else(|| format!("missing field '{k}'"));
        let num = |k: &str| get(k)?.parse::<usize>().map_err(|_| format!("bad {k}"));
        let opt_num = |k: &str| -> Result<Option<u64>, String> {
            match map.get(k).copied() {
                None | Some("-") => Ok(None),
                Some(v) => v.parse().map(Some).map_err(|_| format!("bad {k}")),
            }
        };
        let one_char = |k: &str| -> Result<char, String> {
            let v = get(k)?;
            let mut it = v.chars();
            match (it.next(), it.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(format!("{k} must be a single symbol")),
            }
        };
        let tag: ConstructionTag = get("construction")?.parse()?;
        let (construction, extension) = if tag == ConstructionTag::BuildingUp {
            let base: ConstructionTag = get("base")?.parse()?;
            let ext = Extension {
                eps: one_char("eps")?,
                delta: get("delta")?.to_string(),
            };
            (base, Some(ext))
        } else {
            (tag, None)
        };
        let params = CodeParams {
            construction,
            ring: get("ring")?.parse().map_err(|e: RingError| e.to_string())?,
            n: num("n")?,
            k: num("k")?,
            lambda: one_char("lambda")?,
            mu: one_char("mu")?,
            vectors: get("vectors")?.split(';').map(str::to_string).collect(),
            extension,
        };
        let length = num("length")?;
        if length != params.length() {
            return Err(format!("length {length} does not match the parameters ({})", params.length()));
        }
        Ok(CodeRecord {
            params,
            length,
            d: num("d")?,
            alpha: opt_num("alpha")?,
            seed: opt_num("seed")?,
            candidate: opt_num("candidate")?,
        })
    }
}

/// One record per `(length, ring, d, α)`, keeping the first occurrence.
pub fn dedupe_records(records: &[CodeRecord]) -> Vec<CodeRecord> {
    let mut seen = HashSet::new();
    records
        .iter()
        .filter(|r| seen.insert((r.length, r.params.ring, r.d, r.alpha)))
        .cloned()
        .collect()
}

/// Sort by `(α, parameters)`; records without α go last.
pub fn sort_records(records: &mut [CodeRecord]) {
    records.sort_by_cached_key(|r| (r.alpha.is_none(), r.alpha, r.params.to_string(), r.to_string()));
}

pub fn write_records(path: &Path, records: &[CodeRecord]) -> Result<(), SearchError> {
    let mut sorted = records.to_vec();
    sort_records(&mut sorted);
    let text: String = sorted.iter().map(|r| format!("{r}\n")).collect();
    fs::write(path, text).map_err(io_err(path))
}

pub fn read_records(path: &Path) -> Result<Vec<CodeRecord>, SearchError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| l.parse().map_err(|msg| SearchError::Record { line: i + 1, msg }))
        .collect()
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Compute α when the length has a known weight enumerator.
    pub alpha: bool,
    /// Raise the exhaustive enumeration budget to `4^16`.
    pub extended: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { alpha: true, extended: false }
    }
}

#[derive(Debug, Clone)]
pub struct Verification {
    pub length: usize,
    /// Self-duality over the construction's own ring.
    pub self_dual: bool,
    /// Self-duality of the quaternary image.
    pub image_self_dual: bool,
    pub d: usize,
    pub alpha: Option<AlphaReport>,
}

/// Build, check self-duality, and compute `d` (then α) on the quaternary
/// image.
pub fn verify_params(p: &CodeParams, opts: VerifyOptions) -> Result<Verification, SearchError> {
    let built = p.build()?;
    let image = built.image();
    let self_dual = built.self_dual();
    let image_self_dual = is_self_dual(&image);
    let code = PackedCode::image_of(&image)?;
    let d = info_set_distance(&code, None)?.upper;
    let alpha = if opts.alpha && enumerator_identity(code.len()).is_some() {
        let budget = if opts.extended { EXTENDED_BUDGET } else { DEFAULT_BUDGET };
        Some(alpha_of_packed(&code, None, AlphaMethod::Auto, budget)?)
    } else {
        None
    };
    Ok(Verification {
        length: code.len(),
        self_dual,
        image_self_dual,
        d,
        alpha,
    })
}

/// Parameters of a fixture row; building-up rows pull their base code from
/// the table named in the fixture header.
pub fn fixture_row_params(fixture: &Fixture, row: &FixtureRow) -> Result<CodeParams, SearchError> {
    let field = |name: &str| {
        row.get(name)
            .ok_or_else(|| SearchError::Params(format!("fixture {} has no column '{name}'", fixture.id)))
    };
    let one = |name: &str| -> Result<char, SearchError> {
        let v = field(name)?;
        let mut it = v.chars();
        match (it.next(), it.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(SearchError::Params(format!("{name} must be one symbol, got '{v}'"))),
        }
    };
    let inner_len = |v: &str| v.trim_matches(|c| c == '(' || c == ')').chars().count();
    match fixture.construction {
        ConstructionTag::Thm1 => {
            let vectors = vec![field("a")?.to_string(), field("b")?.to_string(), field("c")?.to_string()];
            Ok(CodeParams {
                construction: ConstructionTag::Thm1,
                ring: fixture.ring,
                n: inner_len(&vectors[0]),
                k: 1,
                lambda: one("lambda")?,
                mu: one("mu")?,
                vectors,
                extension: None,
            })
        }
        ConstructionTag::Thm2 | ConstructionTag::Thm3 => {
            let k: usize = field("k")?.parse().map_err(|_| SearchError::Params("bad k".into()))?;
            let mut vectors = Vec::new();
            let (lambda, mu) = if fixture.construction == ConstructionTag::Thm3 {
                vectors.push(format!("({}{}{})", one("x1")?, one("x2")?, one("x3")?));
                ('1', '1')
            } else {
                (one("lambda")?, one("mu")?)
            };
            for i in 1..=k {
                vectors.push(field(&format!("a{i}"))?.to_string());
            }
            Ok(CodeParams {
                construction: fixture.construction,
                ring: fixture.ring,
                n: inner_len(vectors.last().unwrap()),
                k,
                lambda,
                mu,
                vectors,
                extension: None,
            })
        }
        ConstructionTag::BuildingUp => {
            let base_id = fixture
                .base
                .as_deref()
                .ok_or_else(|| SearchError::Params(format!("fixture {} names no base table", fixture.id)))?;
            let base = fixtures::load(base_id)?;
            let j: usize = field("base")?.parse().map_err(|_| SearchError::Params("bad base row".into()))?;
            let base_row = base
                .row(j)
                .ok_or_else(|| SearchError::Params(format!("table {base_id} has no row {j}")))?;
            let mut p = fixture_row_params(&base, base_row)?;
            p.extension = Some(Extension {
                eps: one("eps")?,
                delta: field("delta")?.to_string(),
            });
            Ok(p)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowReport {
    pub id: usize,
    pub self_dual: bool,
    pub image_self_dual: bool,
    pub d: Option<usize>,
    pub claimed_d: Option<usize>,
    pub alpha: Option<u64>,
    pub claimed_alpha: Option<u64>,
    /// Whether the second weight-enumerator coefficient matched.
    pub identity: Option<bool>,
    pub error: Option<String>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        let alpha_ok = match (self.alpha, self.claimed_alpha) {
            (Some(a), Some(c)) => a == c,
            _ => true,
        };
        self.error.is_none()
            && self.self_dual
            && self.image_self_dual
            && self.claimed_d.is_none_or(|c| self.d == Some(c))
            && alpha_ok
            && self.identity != Some(false)
    }
}

impl fmt::Display for RowReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        if let Some(e) = &self.error {
            return write!(f, "row {}: {verdict} ({e})", self.id);
        }
        write!(
            f,
            "row {}: {verdict} self_dual={} image_self_dual={} d={}",
            self.id,
            self.self_dual,
            self.image_self_dual,
            opt(&self.d)
        )?;
        if let Some(c) = self.claimed_d {
            write!(f, " (claimed {c})")?;
        }
        if self.alpha.is_some() || self.claimed_alpha.is_some() {
            write!(f, " alpha={}", opt(&self.alpha))?;
            if let Some(c) = self.claimed_alpha {
                write!(f, " (claimed {c})")?;
            }
        }
        if let Some(i) = self.identity {
            write!(f, " next_coefficient_ok={i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableReport {
    pub id: String,
    pub rows: Vec<RowReport>,
}

impl TableReport {
    pub fn passed(&self) -> usize {
        self.rows.iter().filter(|r| r.passed()).count()
    }

    pub fn all_passed(&self) -> bool {
        self.passed() == self.rows.len()
    }

    /// `"p/t pass"`, followed by `d` when all rows share it and by α for a
    /// single-row table.
    pub fn summary(&self) -> String {
        let mut s = format!("{}/{} pass", self.passed(), self.rows.len());
        let ds: HashSet<Option<usize>> = self.rows.iter().map(|r| r.d).collect();
        if let (1, Some(Some(d))) = (ds.len(), ds.iter().next()) {
            s.push_str(&format!(", d={d}"));
        }
        if let [r] = self.rows.as_slice() {
            if let Some(a) = r.alpha {
                s.push_str(&format!(", alpha={a}"));
            }
        }
        s
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "table {}", self.id)?;
        for r in &self.rows {
            writeln!(f, "  {r}")?;
        }
        write!(f, "{}", self.summary())
    }
}

pub fn verify_fixture_row(fixture: &Fixture, row: &FixtureRow, opts: VerifyOptions) -> RowReport {
    let mut report = RowReport {
        id: row.id(),
        self_dual: false,
        image_self_dual: false,
        d: None,
        claimed_d: fixture.claimed_d,
        alpha: None,
        claimed_alpha: row.alpha(),
        identity: None,
        error: None,
    };
    match fixture_row_params(fixture, row).and_then(|p| verify_params(&p, opts)) {
        Ok(v) => {
            report.self_dual = v.self_dual;
            report.image_self_dual = v.image_self_dual;
            report.d = Some(v.d);
            if let Some(a) = v.alpha {
                report.alpha = Some(a.alpha);
                report.identity = a.identity_holds;
            }
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Verify every row of a shipped table (or only the listed row ids).
pub fn verify_table(id: &str, rows: Option<&[usize]>, opts: VerifyOptions) -> Result<TableReport, SearchError> {
    let fixture = fixtures::load(id)?;
    let selected: Vec<&FixtureRow> = fixture
        .rows
        .iter()
        .filter(|r| rows.is_none_or(|ids| ids.contains(&r.id())))
        .collect();
    Ok(TableReport {
        id: id.to_string(),
        rows: selected.into_iter().map(|r| verify_fixture_row(&fixture, r, opts)).collect(),
    })
}

// ---------------------------------------------------------------------------
// Search

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub construction: ConstructionTag,
    pub ring: RingId,
    pub n: usize,
    /// Number of blocks for thm2/thm3.
    pub k: usize,
    /// Minimum distance a code must reach to be emitted. Defaults to
    /// `2⌊len/6⌋` when unset.
    pub target_d: Option<usize>,
    /// Number of candidates drawn.
    pub budget: u64,
    pub seed: u64,
    pub workers: usize,
    pub lambdas: Option<Vec<char>>,
    pub mus: Option<Vec<char>>,
    /// Base code for building-up searches.
    pub base: Option<CodeParams>,
    /// Stop after this many records.
    pub max_records: Option<usize>,
    pub alpha: bool,
    pub extended: bool,
    pub cache_dir: Option<PathBuf>,
}

impl SearchConfig {
    pub fn new(construction: ConstructionTag, ring: RingId, n: usize) -> Self {
        SearchConfig {
            construction,
            ring,
            n,
            k: 1,
            target_d: None,
            budget: 1_000_000,
            seed: 0,
            workers: 1,
            lambdas: None,
            mus: None,
            base: None,
            max_records: None,
            alpha: true,
            extended: false,
            cache_dir: None,
        }
    }

    /// Quaternary length of the codes searched.
    pub fn length(&self) -> usize {
        match (&self.base, self.construction) {
            (Some(b), ConstructionTag::BuildingUp) => b.length() + 2,
            _ => CodeParams {
                construction: self.construction,
                ring: self.ring,
                n: self.n,
                k: self.k,
                lambda: '1',
                mu: '1',
                vectors: Vec::new(),
                extension: None,
            }
            .length(),
        }
    }

    pub fn target(&self) -> usize {
        self.target_d.unwrap_or_else(|| distance_bound(self.length()) - 2)
    }

    fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::ConfigInvalid(m.to_string()));
        if self.budget == 0 {
            return bad("budget must be at least 1");
        }
        if self.workers == 0 {
            return bad("workers must be at least 1");
        }
        if self.construction == ConstructionTag::BuildingUp {
            let Some(base) = &self.base else {
                return bad("building_up needs a base code");
            };
            if base.extension.is_some() {
                return bad("the base code must not itself be extended");
            }
            return Ok(());
        }
        if self.n == 0 || self.k == 0 {
            return bad("n and k must be positive");
        }
        if self.construction == ConstructionTag::Thm1 && self.k != 1 {
            return bad("thm1 takes no k");
        }
        if self.length() > crate::packed::MAX_LEN {
            return bad("codes longer than 64 are not supported");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Emitted records, ordered by candidate index.
    pub records: Vec<CodeRecord>,
    pub candidates: u64,
    /// Candidates that satisfied the self-duality conditions.
    pub self_dual: u64,
}

fn restriction<R: HermitianRing>(set: &Option<Vec<char>>, name: &str) -> Result<Vec<R>, SearchError> {
    match set {
        None => Ok(unitary_elements::<R>()),
        Some(syms) => {
            let v: Vec<R> = syms.iter().map(|&c| sym::<R>(c)).collect::<Result<_, _>>()?;
            if v.is_empty() || v.iter().any(|x| !x.is_unitary()) {
                return Err(SearchError::ConfigInvalid(format!("{name} set must be nonempty and unitary")));
            }
            Ok(v)
        }
    }
}

/// Records, candidates drawn, and candidates passing the conditions.
type WorkerOutput = (Vec<CodeRecord>, u64, u64);

/// Read-only state shared by workers.
struct Context<R: HermitianRing> {
    cfg: SearchConfig,
    lambdas: Vec<R>,
    mus: Vec<R>,
    /// `(μ, c)` pairs for thm1.
    unitary: Vec<(R, Vec<R>)>,
    /// Image of the base code for building-up.
    base_image: Option<GeneratorMatrix<F4>>,
    target: usize,
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, v: &'a [T]) -> &'a T {
    &v[rng.random_range(0..v.len())]
}

fn random_vec<R: HermitianRing>(rng: &mut ChaCha8Rng, n: usize) -> Vec<R> {
    (0..n).map(|_| R::from_index(rng.random_range(0..R::ORDER as u8))).collect()
}

impl<R: HermitianRing + QuaternaryImage> Context<R> {
    /// Draw one candidate; return its parameters and generator if it passes
    /// the condition check. The number of draws per candidate is fixed, so
    /// the stream position depends only on the candidate index.
    fn candidate(&self, rng: &mut ChaCha8Rng) -> Option<(CodeParams, GeneratorMatrix<F4>)> {
        let cfg = &self.cfg;
        let (n, k) = (cfg.n, cfg.k);
        let params = |lambda: R, mu: R, vectors: Vec<String>| CodeParams {
            construction: cfg.construction,
            ring: cfg.ring,
            n,
            k,
            lambda: lambda.symbol(),
            mu: mu.symbol(),
            vectors,
            extension: None,
        };
        match cfg.construction {
            ConstructionTag::Thm1 => {
                let a = random_vec::<R>(rng, n);
                let b = random_vec::<R>(rng, n);
                let lambda = *pick(rng, &self.lambdas);
                let (mu, c) = pick(rng, &self.unitary).clone();
                if !pair_sum_matches(&a, &b, lambda) {
                    return None;
                }
                let vectors = vec![format_vector(&a), format_vector(&b), format_vector(&c)];
                let p = FourCirculantParams::new(lambda, mu, a, b, c);
                let g = GeneratorMatrix::standard(&p.redundancy());
                Some((params(lambda, mu, vectors), image_generator(&g)))
            }
            ConstructionTag::Thm2 => {
                let blocks: Vec<Vec<R>> = (0..k).map(|_| random_vec(rng, n)).collect();
                let lambda = *pick(rng, &self.lambdas);
                let mu = *pick(rng, &self.mus);
                let p = BlockCirculantParams { lambda, mu, blocks };
                if !p.conditions_unchecked() {
                    return None;
                }
                let g = GeneratorMatrix::standard(&p.redundancy());
                let vectors = p.blocks.iter().map(|b| format_vector(b)).collect();
                Some((params(lambda, mu, vectors), image_generator(&g)))
            }
            ConstructionTag::Thm3 => {
                let x = random_vec::<R>(rng, 3);
                let blocks: Vec<Vec<R>> = (0..k).map(|_| random_vec(rng, n)).collect();
                let p = BorderedParams { x1: x[0], x2: x[1], x3: x[2], blocks };
                if !p.conditions_unchecked() {
                    return None;
                }
                let g = GeneratorMatrix::standard(&p.redundancy());
                let mut vectors = vec![format_vector(&x)];
                vectors.extend(p.blocks.iter().map(|b| format_vector(b)));
                Some((params(R::one(), R::one(), vectors), image_generator(&g)))
            }
            ConstructionTag::BuildingUp => {
                let image = self.base_image.as_ref().expect("validated");
                let delta = random_vec::<F4>(rng, image.n());
                let eps = *pick(rng, &[F4::ONE, F4::OMEGA, F4::OMEGA2]);
                if hermitian_inner(&delta, &delta) != F4::ONE {
                    return None;
                }
                let g = building_up(image, &delta, eps, false).ok()?;
                let mut p = cfg.base.clone().expect("validated");
                p.extension = Some(Extension {
                    eps: eps.symbol(),
                    delta: format_vector(&delta),
                });
                Some((p, g))
            }
        }
    }

    fn run_worker(&self, w: usize, stop: &AtomicBool, found: &AtomicUsize) -> Result<WorkerOutput, SearchError> {
        let cfg = &self.cfg;
        let workers = cfg.workers as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(w as u64);
        let mut records = Vec::new();
        let (mut tried, mut passed) = (0u64, 0u64);
        let mut index = w as u64;
        while index < cfg.budget && !stop.load(Ordering::Relaxed) {
            tried += 1;
            let candidate = self.candidate(&mut rng);
            let this = index;
            index += workers;
            let Some((params, image)) = candidate else { continue };
            passed += 1;
            let code = PackedCode::image_of(&image)?;
            let bounds = info_set_distance(&code, Some(self.target))?;
            if bounds.upper < self.target {
                continue;
            }
            let alpha = if cfg.alpha && enumerator_identity(code.len()).is_some() {
                let budget = if cfg.extended { EXTENDED_BUDGET } else { DEFAULT_BUDGET };
                Some(alpha_of_packed(&code, None, AlphaMethod::Auto, budget)?.alpha)
            } else {
                None
            };
            records.push(CodeRecord {
                params,
                length: code.len(),
                d: bounds.upper,
                alpha,
                seed: Some(cfg.seed),
                candidate: Some(this),
            });
            let total = found.fetch_add(1, Ordering::SeqCst) + 1;
            if cfg.max_records.is_some_and(|m| total >= m) {
                stop.store(true, Ordering::SeqCst);
            }
        }
        Ok((records, tried, passed))
    }
}

fn run_typed<R: HermitianRing + QuaternaryImage>(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let lambdas = restriction::<R>(&cfg.lambdas, "lambda")?;
    let mus = restriction::<R>(&cfg.mus, "mu")?;
    let mut unitary = Vec::new();
    if cfg.construction == ConstructionTag::Thm1 {
        let table = load_or_build_unitary(cfg.ring, cfg.n, cfg.cache_dir.as_deref())?;
        for (mu, c) in table.entries() {
            let mu = R::from_index(mu);
            if mus.contains(&mu) {
                unitary.push((mu, c.iter().map(|&i| R::from_index(i)).collect()));
            }
        }
        if unitary.is_empty() {
            return Err(SearchError::ConfigInvalid("no unitary circulants for the chosen mu set".into()));
        }
    }
    let base_image = match (&cfg.base, cfg.construction) {
        (Some(b), ConstructionTag::BuildingUp) => {
            let built = b.build()?;
            let image = built.image();
            if !built.self_dual() || !is_self_dual(&image) {
                return Err(ConstructionError::InputNotSelfDual.into());
            }
            Some(image)
        }
        _ => None,
    };
    let ctx = Context {
        cfg: cfg.clone(),
        lambdas,
        mus,
        unitary,
        base_image,
        target: cfg.target(),
    };
    let stop = AtomicBool::new(false);
    let found = AtomicUsize::new(0);
    let results: Vec<Result<WorkerOutput, SearchError>> = if cfg.workers == 1 {
        vec![ctx.run_worker(0, &stop, &found)]
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..cfg.workers)
                .map(|w| {
                    let (ctx, stop, found) = (&ctx, &stop, &found);
                    s.spawn(move || ctx.run_worker(w, stop, found))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("search worker panicked")).collect()
        })
    };
    let mut out = SearchOutcome {
        records: Vec::new(),
        candidates: 0,
        self_dual: 0,
    };
    for r in results {
        let (records, tried, passed) = r?;
        out.records.extend(records);
        out.candidates += tried;
        out.self_dual += passed;
    }
    out.records.sort_by_key(|r| r.candidate);
    if let Some(m) = cfg.max_records {
        out.records.truncate(m);
    }
    Ok(out)
}

/// Draw `budget` candidates from the seeded stream(s), filter them with the
/// condition checks, and emit every code reaching the target distance.
///
/// Worker `w` uses stream `w` of a ChaCha8 generator seeded with `seed` and
/// handles candidates `w, w + workers, …`. With one worker the output is
/// fully determined by the configuration.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    match cfg.ring {
        RingId::F4 => run_typed::<F4>(cfg),
        RingId::F4U => run_typed::<F4U>(cfg),
    }
}
