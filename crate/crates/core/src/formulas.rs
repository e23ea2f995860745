//! The theorem registry: closed-form divisor-sum identities for
//! `A_{t,k}(n)` and the machinery that verifies them.
//!
//! Each [`FormulaSpec`] records one identity of the shape
//!
//! ```text
//! A_{t,k}(n) = (E(m) - a(m)) / c,    m = alpha * n + beta,
//! ```
//!
//! where `E` is a (possibly twisted) divisor-sum coefficient function,
//! `a` the coefficient of a registered cusp-form eta product (absent for
//! the purely Eisenstein cases), and `c` an integer constant. The division
//! must be exact; a nonzero remainder signals a registry or cusp
//! coefficient bug and is reported, never rounded away.
//!
//! [`verify`] recomputes each value along three routes — closed form,
//! series coefficient of the generating eta quotient, and (below the
//! enumeration cap) the combinatorial oracle — and reports the Sturm bound
//! `ceil(weight * [SL2(Z) : Gamma_0(N)] / 12)` next to the result so the
//! caller can see when agreement reaches proof grade for the stated level
//! and weight. Mismatches are data in the report, not errors, so batch
//! runs always complete.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::num::NonZeroU32;
use core::time::Duration;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;

use crate::arith::{self, DirichletCharacter, CHI_3, CHI_4_2, CHI_5_3, CHI_7_4};
use crate::cores::Oracle;
use crate::eta::{self, NamedForm};
use crate::series::TruncatedSeries;

/// Errors from formula evaluation and registry parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaError {
    /// The divisor does not exactly divide `E(m) - a(m)`.
    NonIntegralResult {
        theorem: String,
        m: u64,
        remainder: BigInt,
    },
    /// No registered form or theorem under this id.
    UnknownForm(String),
    /// A registry manifest line failed to parse.
    Manifest { line: usize, message: String },
}

impl fmt::Display for FormulaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormulaError::NonIntegralResult {
                theorem,
                m,
                remainder,
            } => write!(
                f,
                "A_{{{theorem}}}: divisor does not divide E({m}) - a({m}) \
                 (remainder {remainder}); registry entry is corrupt"
            ),
            FormulaError::UnknownForm(id) => write!(f, "unknown form or theorem id: {id}"),
            FormulaError::Manifest { line, message } => {
                write!(f, "manifest line {line}: {message}")
            }
        }
    }
}

impl core::error::Error for FormulaError {}

/// The four characters the registry refers to by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CharId {
    Chi3,
    Chi4_2,
    Chi5_3,
    Chi7_4,
}

impl CharId {
    pub fn character(self) -> &'static DirichletCharacter {
        match self {
            CharId::Chi3 => &CHI_3,
            CharId::Chi4_2 => &CHI_4_2,
            CharId::Chi5_3 => &CHI_5_3,
            CharId::Chi7_4 => &CHI_7_4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CharId::Chi3 => "chi3",
            CharId::Chi4_2 => "chi4_2",
            CharId::Chi5_3 => "chi5_3",
            CharId::Chi7_4 => "chi7_4",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "chi3" => Some(CharId::Chi3),
            "chi4_2" => Some(CharId::Chi4_2),
            "chi5_3" => Some(CharId::Chi5_3),
            "chi7_4" => Some(CharId::Chi7_4),
            _ => None,
        }
    }
}

/// The Eisenstein coefficient function of one identity. These are evaluated
/// pointwise along the arithmetic progression `m = alpha n + beta`; the
/// Eisenstein series is never materialized as a series object.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eisenstein {
    /// `sigma_j(m)`
    Sigma { j: u32 },
    /// `sum_{d|m} chi(d) d^j`
    TwistedDivisor { chi: CharId, j: u32 },
    /// `sum_{d|m} chi(m/d) d^j`
    TwistedCodivisor { chi: CharId, j: u32 },
    /// `p^{j nu_p(m)} sum_{d|m, p∤d} d^j`
    Sharp { p: u32, j: u32 },
}

impl Eisenstein {
    /// Coefficient at m >= 1.
    pub fn eval(&self, m: u64) -> BigInt {
        let v = match *self {
            Eisenstein::Sigma { j } => arith::sigma(j, m),
            Eisenstein::TwistedDivisor { chi, j } => arith::sigma_twisted_d(chi.character(), j, m),
            Eisenstein::TwistedCodivisor { chi, j } => {
                arith::sigma_twisted_q(chi.character(), j, m)
            }
            Eisenstein::Sharp { p, j } => arith::sigma_sharp(p, j, m),
        };
        v.expect("Eisenstein coefficient functions are evaluated at m >= 1")
    }

    /// Canonical name used in the registry manifest; the sharp sums carry
    /// the (j, p) subscript order of their definition.
    pub fn name(&self) -> String {
        match *self {
            Eisenstein::Sigma { j } => format!("sigma({j})"),
            Eisenstein::TwistedDivisor { chi, j } => format!("sigma({j},{})", chi.name()),
            Eisenstein::TwistedCodivisor { chi, j } => format!("sigma_star({j},{})", chi.name()),
            Eisenstein::Sharp { p, j } => format!("sigma_sharp({j},{p})"),
        }
    }

    fn parse(s: &str) -> Option<Self> {
        let (head, rest) = s.split_once('(')?;
        let args = rest.strip_suffix(')')?;
        let mut parts = args.split(',');
        let j: u32 = parts.next()?.trim().parse().ok()?;
        let second = parts.next().map(str::trim);
        if parts.next().is_some() {
            return None;
        }
        match (head, second) {
            ("sigma", None) => Some(Eisenstein::Sigma { j }),
            ("sigma", Some(chi)) => Some(Eisenstein::TwistedDivisor {
                chi: CharId::parse(chi)?,
                j,
            }),
            ("sigma_star", Some(chi)) => Some(Eisenstein::TwistedCodivisor {
                chi: CharId::parse(chi)?,
                j,
            }),
            ("sigma_sharp", Some(p)) => Some(Eisenstein::Sharp {
                p: p.parse().ok()?,
                j,
            }),
            _ => None,
        }
    }
}

/// The affine re-indexing `n -> m = alpha * n + beta` between tuple counts
/// and Fourier coefficients, read off the q-exponent of each theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexMap {
    pub alpha: u64,
    pub beta: u64,
}

impl IndexMap {
    pub fn apply(&self, n: u64) -> u64 {
        self.alpha * n + self.beta
    }
}

impl fmt::Display for IndexMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha == 1 {
            write!(f, "n+{}", self.beta)
        } else {
            write!(f, "{}n+{}", self.alpha, self.beta)
        }
    }
}

/// One theorem: everything needed to evaluate and cross-check
/// `A_{t,k}(n) = (E(alpha n + beta) - a(alpha n + beta)) / c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaSpec {
    pub t: u32,
    pub k: u32,
    pub index_map: IndexMap,
    pub eisenstein: Eisenstein,
    /// Id of the registered cusp form whose coefficients are subtracted,
    /// if the space has one.
    pub cusp: Option<&'static str>,
    /// The constant c dividing `E(m) - a(m)`; always exactly.
    pub divisor: u64,
    /// Level of Gamma_0(N) for the Sturm bound.
    pub level: u64,
    /// Weight of the modular form.
    pub weight: u32,
    /// Nebentypus as stated, recorded as metadata only.
    pub nebentypus: &'static str,
}

impl FormulaSpec {
    /// Canonical id, e.g. "3,4" for the A_{3,4} theorem.
    pub fn id(&self) -> String {
        format!("{},{}", self.t, self.k)
    }

    fn cusp_named_form(&self) -> Option<&'static NamedForm> {
        self.cusp
            .map(|id| eta::cusp_form(id).expect("registry names a registered form"))
    }
}

impl fmt::Display for FormulaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{{{},{}}}", self.t, self.k)
    }
}

/// The nine proved identities.
pub fn registry() -> Vec<FormulaSpec> {
    use Eisenstein::*;
    Vec::from([
        FormulaSpec {
            t: 3,
            k: 1,
            index_map: IndexMap { alpha: 3, beta: 1 },
            eisenstein: TwistedDivisor {
                chi: CharId::Chi3,
                j: 0,
            },
            cusp: None,
            divisor: 1,
            level: 9,
            weight: 1,
            nebentypus: "(-3|n)",
        },
        FormulaSpec {
            t: 3,
            k: 2,
            index_map: IndexMap { alpha: 3, beta: 2 },
            eisenstein: Sigma { j: 1 },
            cusp: None,
            divisor: 3,
            level: 9,
            weight: 2,
            nebentypus: "(9|n)",
        },
        FormulaSpec {
            t: 3,
            k: 3,
            index_map: IndexMap { alpha: 1, beta: 1 },
            eisenstein: TwistedCodivisor {
                chi: CharId::Chi3,
                j: 2,
            },
            cusp: None,
            divisor: 1,
            level: 3,
            weight: 3,
            nebentypus: "(-3|n)",
        },
        FormulaSpec {
            t: 3,
            k: 4,
            index_map: IndexMap { alpha: 3, beta: 4 },
            eisenstein: Sigma { j: 3 },
            cusp: Some("eta8_3"),
            divisor: 81,
            level: 9,
            weight: 4,
            nebentypus: "(9|n)",
        },
        FormulaSpec {
            t: 3,
            k: 6,
            index_map: IndexMap { alpha: 1, beta: 2 },
            eisenstein: Sharp { p: 3, j: 5 },
            cusp: Some("eta6_1_6_3"),
            divisor: 39,
            level: 3,
            weight: 6,
            nebentypus: "(9|n)",
        },
        FormulaSpec {
            t: 4,
            k: 2,
            index_map: IndexMap { alpha: 4, beta: 5 },
            eisenstein: TwistedDivisor {
                chi: CharId::Chi4_2,
                j: 2,
            },
            cusp: Some("eta6_4"),
            divisor: 32,
            level: 16,
            weight: 3,
            nebentypus: "(-4|n)",
        },
        FormulaSpec {
            t: 5,
            k: 1,
            index_map: IndexMap { alpha: 1, beta: 1 },
            eisenstein: TwistedCodivisor {
                chi: CharId::Chi5_3,
                j: 1,
            },
            cusp: None,
            divisor: 1,
            level: 5,
            weight: 2,
            nebentypus: "(5|n)",
        },
        FormulaSpec {
            t: 5,
            k: 2,
            index_map: IndexMap { alpha: 1, beta: 2 },
            eisenstein: Sharp { p: 5, j: 3 },
            cusp: Some("eta4_1_4_5"),
            divisor: 13,
            level: 5,
            weight: 4,
            nebentypus: "trivial",
        },
        FormulaSpec {
            t: 7,
            k: 1,
            index_map: IndexMap { alpha: 1, beta: 2 },
            eisenstein: TwistedCodivisor {
                chi: CharId::Chi7_4,
                j: 2,
            },
            cusp: Some("eta3_1_3_7"),
            divisor: 8,
            level: 7,
            weight: 3,
            nebentypus: "(-7|n)",
        },
    ])
}

/// Find a registry entry by (t, k).
pub fn find(t: u32, k: u32) -> Option<FormulaSpec> {
    registry().into_iter().find(|s| s.t == t && s.k == k)
}

/// Cusp-form expansions computed once per run and indexed by coefficient.
/// Grows geometrically so a sequence of increasing queries stays cheap.
#[derive(Default)]
pub struct CuspCache {
    expansions: alloc::collections::BTreeMap<&'static str, TruncatedSeries>,
}

impl CuspCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Make sure coefficients up to `m` are available for `form`.
    pub fn ensure(&mut self, form: &'static NamedForm, m: u64) {
        let m = m as usize;
        let have = self.expansions.get(form.id).map(TruncatedSeries::order);
        if have.is_none_or(|o| o < m) {
            let target = m.max(have.unwrap_or(0) * 2).max(64);
            self.expansions.insert(form.id, form.expand(target));
        }
    }

    /// Coefficient a(m) of the registered form.
    pub fn coefficient(&mut self, form: &'static NamedForm, m: u64) -> BigInt {
        self.ensure(form, m);
        self.expansions[form.id].coeff(m as usize).clone()
    }
}

/// `(m, quotient, remainder)` of `(E(m) - a(m)) / c` with truncating
/// division, so callers can treat a nonzero remainder as a mismatch.
fn closed_form_parts(spec: &FormulaSpec, n: u64, cache: &mut CuspCache) -> (u64, BigInt, BigInt) {
    let m = spec.index_map.apply(n);
    let mut value = spec.eisenstein.eval(m);
    if let Some(form) = spec.cusp_named_form() {
        value -= cache.coefficient(form, m);
    }
    let c = BigInt::from(spec.divisor);
    let (q, r) = (&value / &c, &value % &c);
    (m, q, r)
}

/// Exact `A_{t,k}(n)` by the registered closed form. The division by the
/// registry constant must leave remainder zero; anything else is reported
/// as [`FormulaError::NonIntegralResult`].
pub fn closed_form(
    spec: &FormulaSpec,
    n: u64,
    cache: &mut CuspCache,
) -> Result<BigInt, FormulaError> {
    let (m, q, r) = closed_form_parts(spec, n, cache);
    if !r.is_zero() {
        return Err(FormulaError::NonIntegralResult {
            theorem: spec.id(),
            m,
            remainder: r,
        });
    }
    Ok(q)
}

/// Index of Gamma_0(N) in SL_2(Z): `N * prod_{p | N} (1 + 1/p)`.
fn gamma0_index(level: u64) -> u64 {
    assert!(level >= 1, "level must be >= 1");
    let mut index = level;
    let mut n = level;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            index = index / p * (p + 1);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        index = index / n * (n + 1);
    }
    index
}

/// Number of initial Fourier coefficients whose agreement forces equality
/// of two forms of the given level and weight:
/// `ceil(weight * [SL2(Z) : Gamma_0(N)] / 12)`.
pub fn sturm_bound(level: u64, weight: u32) -> u64 {
    assert!(weight >= 1, "weight must be >= 1");
    (u64::from(weight) * gamma0_index(level)).div_ceil(12)
}

/// The first index where the routes disagreed, with every value that was
/// available there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub formula: BigInt,
    pub series: BigInt,
    pub oracle: Option<BigInt>,
}

/// Outcome of one verification run.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub theorem: String,
    /// Number of indices checked (n = 0 ..= terms).
    pub terms_checked: u64,
    pub sturm_bound: u64,
    pub first_mismatch: Option<Mismatch>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn is_ok(&self) -> bool {
        self.first_mismatch.is_none()
    }

    /// Whether enough coefficients were checked that agreement of the two
    /// modular-form routes is proof grade for this level and weight.
    pub fn meets_sturm_bound(&self) -> bool {
        self.terms_checked >= self.sturm_bound
    }
}

#[cfg(feature = "std")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let started = std::time::Instant::now();
    let value = f();
    (value, started.elapsed())
}

#[cfg(not(feature = "std"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    (f(), Duration::ZERO)
}

/// Check one identity for n = 0 ..= terms along all three routes:
/// closed form, series coefficient, and (for n <= oracle_cap) the
/// enumeration oracle. Disagreement of any pair — including a non-exact
/// division inside the closed form — is recorded as the first mismatch;
/// the run itself never fails.
pub fn verify(spec: &FormulaSpec, terms: u64, oracle_cap: u64) -> VerificationReport {
    let (first_mismatch, elapsed) = timed(|| {
        let mut cache = CuspCache::new();
        if let Some(form) = spec.cusp_named_form() {
            cache.ensure(form, spec.index_map.apply(terms));
        }
        let k = NonZeroU32::new(spec.k).expect("registry k >= 1");
        let series = eta::phi_power(spec.t, k, terms as usize);
        let oracle = Oracle::new(oracle_cap);

        for n in 0..=terms {
            let (_, formula, remainder) = closed_form_parts(spec, n, &mut cache);
            let series_value = series.coeff(n as usize);
            let oracle_value = (n <= oracle_cap).then(|| {
                oracle
                    .count_tuples(n, spec.t, k)
                    .expect("verify only queries the oracle within its cap")
            });
            let ok = remainder.is_zero()
                && &formula == series_value
                && oracle_value.as_ref().is_none_or(|o| o == series_value);
            if !ok {
                return Some(Mismatch {
                    n,
                    formula,
                    series: series_value.clone(),
                    oracle: oracle_value,
                });
            }
        }
        None
    });

    VerificationReport {
        theorem: spec.id(),
        terms_checked: terms + 1,
        sturm_bound: sturm_bound(spec.level, spec.weight),
        first_mismatch,
        elapsed,
    }
}

/// The Lambert-series route to the 5-core counts:
/// `sum_{n>=0} sum over residues r (+ for r = 1, 4; - for r = 2, 3) of
/// q^{5n+r} / (1 - q^{5n+r})^2`, expanded term by term with
/// `q^a/(1-q^a)^2 = sum_{d>=1} d q^{ad}`. Equals `q * phi(5)` coefficient
/// for coefficient.
pub fn lambert_a51(order: usize) -> TruncatedSeries {
    let mut coeffs = alloc::vec![BigInt::zero(); order + 1];
    for a in 1..=order as u64 {
        let sign = CHI_5_3.eval(a);
        if sign == 0 {
            continue;
        }
        let mut exp = a as usize;
        let mut d = 1u64;
        while exp <= order {
            if sign > 0 {
                coeffs[exp] += BigInt::from(d);
            } else {
                coeffs[exp] -= BigInt::from(d);
            }
            d += 1;
            exp += a as usize;
        }
    }
    TruncatedSeries::from_coeffs(coeffs)
}

/// Fraction of indices 1 ..= order carrying a nonzero coefficient.
pub fn density_nonzero(series: &TruncatedSeries, order: usize) -> Ratio<u64> {
    assert!(
        order >= 1 && order <= series.order(),
        "density window out of range"
    );
    let nonzero = (1..=order).filter(|&n| !series.coeff(n).is_zero()).count() as u64;
    Ratio::new(nonzero, order as u64)
}

/// Density of nonzero coefficients of a registered form up to `order`.
/// The lacunarity of the CM forms shows up as this dropping with order.
pub fn lacunarity_density(form_id: &str, order: usize) -> Result<Ratio<u64>, FormulaError> {
    let form =
        eta::cusp_form(form_id).ok_or_else(|| FormulaError::UnknownForm(form_id.to_string()))?;
    Ok(density_nonzero(&form.expand(order), order))
}

/// Human-readable manifest of a registry, one theorem per line. The same
/// format parses back via [`parse_manifest`].
pub fn manifest(specs: &[FormulaSpec]) -> String {
    let mut out = String::new();
    for spec in specs {
        let _ = writeln!(
            out,
            "theorem={} t={} k={} map={} eisenstein={} cusp={} divisor={} level={} weight={}",
            spec.id(),
            spec.t,
            spec.k,
            spec.index_map,
            spec.eisenstein.name(),
            spec.cusp.unwrap_or("-"),
            spec.divisor,
            spec.level,
            spec.weight,
        );
    }
    out
}

fn parse_index_map(s: &str) -> Option<IndexMap> {
    let (alpha, rest) = match s.split_once('n') {
        Some(("", rest)) => (1, rest),
        Some((a, rest)) => (a.parse().ok()?, rest),
        None => return None,
    };
    let beta = match rest.strip_prefix('+') {
        Some(b) => b.parse().ok()?,
        None if rest.is_empty() => 0,
        None => return None,
    };
    Some(IndexMap { alpha, beta })
}

/// Parse a manifest produced by [`manifest`] (or edited by hand) back into
/// registry records. Structural problems — malformed fields, unknown cusp
/// ids, t < 2, k < 1 — are errors; whether the *values* define a true
/// identity is decided by [`verify`], not here.
pub fn parse_manifest(text: &str) -> Result<Vec<FormulaSpec>, FormulaError> {
    let mut specs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| FormulaError::Manifest {
            line: line_no,
            message,
        };
        let mut fields: alloc::collections::BTreeMap<&str, &str> =
            alloc::collections::BTreeMap::new();
        for token in line.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got '{token}'")))?;
            fields.insert(key, value);
        }
        let get = |key: &str| {
            fields
                .get(key)
                .copied()
                .ok_or_else(|| err(format!("missing field '{key}'")))
        };
        let t: u32 = get("t")?.parse().map_err(|_| err("bad t".into()))?;
        let k: u32 = get("k")?.parse().map_err(|_| err("bad k".into()))?;
        if t < 2 {
            return Err(err("t must be >= 2".into()));
        }
        if k < 1 {
            return Err(err("k must be >= 1".into()));
        }
        let theorem = get("theorem")?;
        if theorem != format!("{t},{k}") {
            return Err(err(format!(
                "theorem id '{theorem}' does not match t={t}, k={k}"
            )));
        }
        let map_text = get("map")?;
        let index_map =
            parse_index_map(map_text).ok_or_else(|| err(format!("bad index map '{map_text}'")))?;
        let eis_text = get("eisenstein")?;
        let eisenstein = Eisenstein::parse(eis_text)
            .ok_or_else(|| err(format!("bad eisenstein function '{eis_text}'")))?;
        let cusp = match get("cusp")? {
            "-" => None,
            id => Some(
                eta::cusp_form(id)
                    .ok_or_else(|| err(format!("unknown cusp form '{id}'")))?
                    .id,
            ),
        };
        let divisor: u64 = get("divisor")?
            .parse()
            .map_err(|_| err("bad divisor".into()))?;
        if divisor == 0 {
            return Err(err("divisor must be >= 1".into()));
        }
        let level: u64 = get("level")?.parse().map_err(|_| err("bad level".into()))?;
        let weight: u32 = get("weight")?
            .parse()
            .map_err(|_| err("bad weight".into()))?;
        if level < 1 || weight < 1 {
            return Err(err("level and weight must be >= 1".into()));
        }
        specs.push(FormulaSpec {
            t,
            k,
            index_map,
            eisenstein,
            cusp,
            divisor,
            level,
            weight,
            nebentypus: "",
        });
    }
    Ok(specs)
}
