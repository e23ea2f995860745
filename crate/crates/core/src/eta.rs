//! Eta quotients as symbolic objects with exact q-expansion.
//!
//! An [`EtaQuotient`] is a finite product `prod_m eta(m tau)^{r_m}`. Its
//! q-expansion splits into an "Euler part" `prod_m (q^m;q^m)^{r_m}` with
//! constant term 1 and a fractional prefactor `q^{prefactor24/24}` tracked
//! as an integer numerator. Only the Euler part ever feeds the series
//! machinery; the full modular expansion (with the shift applied) exists
//! when 24 divides the prefactor, which holds for every registered cusp
//! form.
//!
//! Expansion works factor by factor from the sparse pentagonal series:
//! a factor `eta(m tau)^r` is expanded at order/m and dilated, and negative
//! exponents are handled by inverting the sparse base first and powering
//! the (dense) inverse afterwards, which keeps intermediate growth small.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::num::NonZeroU32;

use crate::series::TruncatedSeries;

/// Errors from eta-quotient expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EtaError {
    /// Full modular expansion requested but 24 does not divide prefactor24.
    FractionalPrefactor { prefactor24: i64 },
    /// Full modular expansion requested for a quotient whose q-power is
    /// negative; Laurent tails are out of scope.
    NegativePrefactor { prefactor24: i64 },
}

impl fmt::Display for EtaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EtaError::FractionalPrefactor { prefactor24 } => write!(
                f,
                "eta quotient carries the fractional prefactor q^({prefactor24}/24); \
                 only the Euler part has an integer expansion"
            ),
            EtaError::NegativePrefactor { prefactor24 } => write!(
                f,
                "eta quotient has negative q-power {prefactor24}/24; \
                 series with negative exponents are not supported"
            ),
        }
    }
}

impl core::error::Error for EtaError {}

/// A formal product `prod_m eta(m tau)^{r_m}` with nonzero integer
/// exponents, keyed by multiplier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaQuotient {
    factors: BTreeMap<u32, i32>,
}

impl EtaQuotient {
    /// Collect factors, merging duplicate multipliers and dropping zero
    /// exponents. Multipliers must be >= 1.
    pub fn new(factors: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut map: BTreeMap<u32, i32> = BTreeMap::new();
        for (m, r) in factors {
            assert!(m >= 1, "eta multiplier must be >= 1");
            let e = map.entry(m).or_insert(0);
            *e = e.checked_add(r).expect("eta exponent overflow");
            if *e == 0 {
                map.remove(&m);
            }
        }
        Self { factors: map }
    }

    /// The factors, sorted by multiplier.
    pub fn factors(&self) -> impl Iterator<Item = (u32, i32)> + '_ {
        self.factors.iter().map(|(&m, &r)| (m, r))
    }

    /// Numerator of the fractional q-prefactor: `sum_m m * r_m`, so the
    /// quotient equals `q^{prefactor24/24}` times its Euler part.
    pub fn prefactor24(&self) -> i64 {
        self.factors
            .iter()
            .map(|(&m, &r)| i64::from(m) * i64::from(r))
            .sum()
    }

    /// Expansion of the Euler part `prod_m (q^m;q^m)^{r_m}`; always has
    /// constant term 1.
    pub fn expand_euler_part(&self, order: usize) -> TruncatedSeries {
        let mut acc = TruncatedSeries::one(order);
        // Positive factors first, then the inverted ones.
        let split = |positive: bool| {
            self.factors
                .iter()
                .filter(move |&(_, &r)| (r > 0) == positive)
        };
        for (&m, &r) in split(true).chain(split(false)) {
            let base = TruncatedSeries::euler_product(1, order / m as usize);
            let expanded = if r > 0 {
                base.pow(NonZeroU32::new(r as u32).unwrap())
            } else {
                // constant term is 1, so inversion cannot fail
                base.invert()
                    .unwrap()
                    .pow(NonZeroU32::new(r.unsigned_abs()).unwrap())
            };
            let factor = if m == 1 {
                expanded
            } else {
                expanded.dilate_to(m, order)
            };
            acc = acc.mul(&factor);
        }
        acc
    }

    /// Full modular expansion including the `q^{prefactor24/24}` shift.
    /// Defined only when the prefactor is a non-negative multiple of 24.
    pub fn expand(&self, order: usize) -> Result<TruncatedSeries, EtaError> {
        let p24 = self.prefactor24();
        if p24 % 24 != 0 {
            return Err(EtaError::FractionalPrefactor { prefactor24: p24 });
        }
        if p24 < 0 {
            return Err(EtaError::NegativePrefactor { prefactor24: p24 });
        }
        let shift = (p24 / 24) as usize;
        if shift > order {
            return Ok(TruncatedSeries::zero(order));
        }
        Ok(self.expand_euler_part(order - shift).shift_up(shift))
    }

    /// Canonical text form, factors sorted by multiplier:
    /// `eta(1)^6*eta(3)^6`. Round-trips through [`parse_eta_quotient`].
    pub fn canonical_string(&self) -> String {
        if self.factors.is_empty() {
            return String::from("eta(1)^0");
        }
        let mut out = String::new();
        for (i, (&m, &r)) in self.factors.iter().enumerate() {
            if i > 0 {
                out.push('*');
            }
            let _ = write!(out, "eta({m})^{r}");
        }
        out
    }
}

/// Generating function of t-core counts:
/// `phi(t) = (q^t;q^t)^t / (q;q)`, so the q^n coefficient is A_t(n).
pub fn phi(t: u32, order: usize) -> TruncatedSeries {
    assert!(t >= 2, "t-cores are defined for t >= 2");
    EtaQuotient::new([(t, t as i32), (1, -1)]).expand_euler_part(order)
}

/// Generating function of t-core k-tuple counts: the q^n coefficient of
/// `(q^t;q^t)^{kt} / (q;q)^k` is A_{t,k}(n).
pub fn phi_power(t: u32, k: NonZeroU32, order: usize) -> TruncatedSeries {
    assert!(t >= 2, "t-cores are defined for t >= 2");
    let kt = i32::try_from(u64::from(t) * u64::from(k.get())).expect("t * k too large");
    let k = i32::try_from(k.get()).expect("k too large");
    EtaQuotient::new([(t, kt), (1, -k)]).expand_euler_part(order)
}

/// A named eta product with its expansion metadata. The five registered
/// cusp forms all have prefactor24 = 24, hence first exponent 1.
#[derive(Clone, Copy, Debug)]
pub struct NamedForm {
    pub id: &'static str,
    pub factors: &'static [(u32, i32)],
    pub first_exponent: u64,
}

impl NamedForm {
    pub fn quotient(&self) -> EtaQuotient {
        EtaQuotient::new(self.factors.iter().copied())
    }

    /// Full modular expansion (the registered forms always have an
    /// integral prefactor).
    pub fn expand(&self, order: usize) -> TruncatedSeries {
        self.quotient()
            .expand(order)
            .expect("registered form has integral prefactor")
    }
}

/// The cusp forms spanning the one-dimensional spaces the closed forms
/// subtract: eta^8(3t), eta^6(t)eta^6(3t), eta^6(4t), eta^4(t)eta^4(5t),
/// eta^3(t)eta^3(7t).
pub const CUSP_FORMS: &[NamedForm] = &[
    NamedForm {
        id: "eta8_3",
        factors: &[(3, 8)],
        first_exponent: 1,
    },
    NamedForm {
        id: "eta6_1_6_3",
        factors: &[(1, 6), (3, 6)],
        first_exponent: 1,
    },
    NamedForm {
        id: "eta6_4",
        factors: &[(4, 6)],
        first_exponent: 1,
    },
    NamedForm {
        id: "eta4_1_4_5",
        factors: &[(1, 4), (5, 4)],
        first_exponent: 1,
    },
    NamedForm {
        id: "eta3_1_3_7",
        factors: &[(1, 3), (7, 3)],
        first_exponent: 1,
    },
];

/// Look up a registered form by id.
pub fn cusp_form(id: &str) -> Option<&'static NamedForm> {
    CUSP_FORMS.iter().find(|f| f.id == id)
}

/// Parse error for the eta-quotient text syntax, with the byte offset the
/// parser stopped at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for EtaParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.message)
    }
}

impl core::error::Error for EtaParseError {}

/// Parse the CLI eta-quotient syntax: a product of `eta(m)^r` terms joined
/// by `*` and `/`, e.g. `eta(3)^8`, `eta(1)^6*eta(3)^6`, `eta(4)^4/eta(1)`.
/// The exponent may be negative and defaults to 1; whitespace is allowed
/// between tokens.
pub fn parse_eta_quotient(input: &str) -> Result<EtaQuotient, EtaParseError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let mut factors: Vec<(u32, i32)> = Vec::new();

    fn skip_ws(bytes: &[u8], pos: &mut usize) {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    }

    fn err(pos: usize, message: &str) -> EtaParseError {
        EtaParseError {
            pos,
            message: String::from(message),
        }
    }

    fn parse_uint(bytes: &[u8], pos: &mut usize, what: &str) -> Result<u64, EtaParseError> {
        let start = *pos;
        let mut value: u64 = 0;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(bytes[*pos] - b'0')))
                .ok_or_else(|| err(start, "number too large"))?;
            *pos += 1;
        }
        if *pos == start {
            return Err(err(start, what));
        }
        Ok(value)
    }

    let mut dividing = false;
    loop {
        skip_ws(bytes, &mut pos);
        if !input[pos..].starts_with("eta") {
            return Err(err(pos, "expected 'eta'"));
        }
        pos += 3;
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() || bytes[pos] != b'(' {
            return Err(err(pos, "expected '(' after 'eta'"));
        }
        pos += 1;
        skip_ws(bytes, &mut pos);
        let m = parse_uint(bytes, &mut pos, "expected multiplier digits")?;
        if m == 0 {
            return Err(err(pos - 1, "eta multiplier must be >= 1"));
        }
        let m = u32::try_from(m).map_err(|_| err(pos, "multiplier too large"))?;
        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() || bytes[pos] != b')' {
            return Err(err(pos, "expected ')'"));
        }
        pos += 1;
        skip_ws(bytes, &mut pos);
        let mut exp: i64 = 1;
        if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            skip_ws(bytes, &mut pos);
            let mut sign = 1i64;
            if pos < bytes.len() && (bytes[pos] == b'-' || bytes[pos] == b'+') {
                sign = if bytes[pos] == b'-' { -1 } else { 1 };
                pos += 1;
            }
            let mag = parse_uint(bytes, &mut pos, "expected exponent digits")?;
            exp = sign * i64::try_from(mag).map_err(|_| err(pos, "exponent too large"))?;
        }
        if dividing {
            exp = -exp;
        }
        let exp = i32::try_from(exp).map_err(|_| err(pos, "exponent too large"))?;
        factors.push((m, exp));

        skip_ws(bytes, &mut pos);
        if pos >= bytes.len() {
            break;
        }
        match bytes[pos] {
            b'*' => dividing = false,
            b'/' => dividing = true,
            _ => return Err(err(pos, "expected '*', '/', or end of input")),
        }
        pos += 1;
    }
    Ok(EtaQuotient::new(factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_bigint::BigInt;

    fn nz(k: u32) -> NonZeroU32 {
        NonZeroU32::new(k).unwrap()
    }

    fn coeffs_i64(s: &TruncatedSeries, upto: usize) -> Vec<i64> {
        (0..=upto)
            .map(|n| i64::try_from(s.coeff(n)).unwrap())
            .collect()
    }

    #[test]
    fn eta8_3_prefix() {
        // eta^8(3 tau) = q - 8q^4 + 20q^7 + 0q^10 - 70q^13 + 64q^16 - ...
        let s = cusp_form("eta8_3").unwrap().expand(16);
        let mut want = vec![0i64; 17];
        want[1] = 1;
        want[4] = -8;
        want[7] = 20;
        want[10] = 0;
        want[13] = -70;
        want[16] = 64;
        assert_eq!(coeffs_i64(&s, 16), want);
    }

    #[test]
    fn eta6_4_prefix() {
        let s = cusp_form("eta6_4").unwrap().expand(17);
        let mut want = vec![0i64; 18];
        want[1] = 1;
        want[5] = -6;
        want[9] = 9;
        want[13] = 10;
        want[17] = -30;
        assert_eq!(coeffs_i64(&s, 17), want);
    }

    #[test]
    fn eta3_1_3_7_prefix() {
        let s = cusp_form("eta3_1_3_7").unwrap().expand(8);
        assert_eq!(coeffs_i64(&s, 8), vec![0, 1, -3, 0, 5, 0, 0, -7, -3]);
    }

    #[test]
    fn eta6_1_6_3_prefix() {
        let s = cusp_form("eta6_1_6_3").unwrap().expand(5);
        assert_eq!(coeffs_i64(&s, 5), vec![0, 1, -6, 9, 4, 6]);
    }

    #[test]
    fn eta4_1_4_5_prefix() {
        let s = cusp_form("eta4_1_4_5").unwrap().expand(5);
        assert_eq!(coeffs_i64(&s, 5), vec![0, 1, -4, 2, 8, -5]);
    }

    #[test]
    fn registered_forms_start_at_q1_with_unit_coefficient() {
        use num_traits::Zero;
        for form in CUSP_FORMS {
            let s = form.expand(12);
            assert_eq!(form.quotient().prefactor24(), 24, "{}", form.id);
            assert_eq!(form.first_exponent, 1, "{}", form.id);
            assert!(s.coeff(0).is_zero(), "{} has a constant term", form.id);
            assert_eq!(
                s.coeff(1),
                &BigInt::from(1),
                "{} first coefficient",
                form.id
            );
        }
    }

    #[test]
    fn phi3_prefix_with_gap() {
        // A_3(n) for n = 0..5: 1, 1, 2, 0, 2, 1 (note the vanishing at n = 3,
        // the missing q^10 term of the weight-1 form).
        assert_eq!(coeffs_i64(&phi(3, 5), 5), vec![1, 1, 2, 0, 2, 1]);
    }

    #[test]
    fn phi5_prefix() {
        assert_eq!(coeffs_i64(&phi(5, 4), 4), vec![1, 1, 2, 3, 5]);
    }

    #[test]
    fn phi2_is_triangular_indicator() {
        let s = phi(2, 60);
        for n in 0..=60usize {
            let is_triangular = (0..=60).any(|j| j * (j + 1) / 2 == n);
            assert_eq!(
                s.coeff(n),
                &BigInt::from(u8::from(is_triangular)),
                "n = {n}"
            );
        }
    }

    #[test]
    fn phi_power_prefixes() {
        assert_eq!(
            coeffs_i64(&phi_power(3, nz(4), 4), 4),
            vec![1, 4, 14, 28, 57]
        );
        assert_eq!(
            coeffs_i64(&phi_power(4, nz(2), 4), 4),
            vec![1, 2, 5, 10, 12]
        );
    }

    #[test]
    fn phi_power_one_is_phi() {
        for t in [2u32, 3, 4, 5, 7] {
            assert_eq!(phi_power(t, nz(1), 30), phi(t, 30));
        }
    }

    #[test]
    fn phi_power_matches_pow_of_phi() {
        for t in [2u32, 3, 4, 5, 7] {
            for k in 1..=4u32 {
                assert_eq!(
                    phi_power(t, nz(k), 25),
                    phi(t, 25).pow(nz(k)),
                    "t = {t}, k = {k}"
                );
            }
        }
    }

    #[test]
    fn phi_prefactor_is_t_squared_minus_one() {
        for t in [3u32, 4, 5, 7] {
            let q = EtaQuotient::new([(t, t as i32), (1, -1)]);
            assert_eq!(q.prefactor24(), i64::from(t) * i64::from(t) - 1);
        }
    }

    #[test]
    fn expand_rejects_fractional_prefactor() {
        // eta^3(3 tau)/eta(tau) has prefactor 8/24 = 1/3.
        let q = EtaQuotient::new([(3, 3), (1, -1)]);
        assert_eq!(
            q.expand(10).unwrap_err(),
            EtaError::FractionalPrefactor { prefactor24: 8 }
        );
        // ... but its Euler part is Phi_3 itself.
        assert_eq!(q.expand_euler_part(5), phi(3, 5));
    }

    #[test]
    fn expand_rejects_negative_prefactor() {
        let q = EtaQuotient::new([(1, -24)]);
        assert_eq!(
            q.expand(10).unwrap_err(),
            EtaError::NegativePrefactor { prefactor24: -24 }
        );
    }

    #[test]
    fn parser_accepts_the_documented_forms() {
        assert_eq!(
            parse_eta_quotient("eta(3)^8").unwrap(),
            EtaQuotient::new([(3, 8)])
        );
        assert_eq!(
            parse_eta_quotient("eta(1)^6*eta(3)^6").unwrap(),
            EtaQuotient::new([(1, 6), (3, 6)])
        );
        assert_eq!(
            parse_eta_quotient("eta(4)^4/eta(1)").unwrap(),
            EtaQuotient::new([(4, 4), (1, -1)])
        );
        assert_eq!(
            parse_eta_quotient("eta(1)^0").unwrap(),
            EtaQuotient::new([])
        );
        assert_eq!(
            parse_eta_quotient(" eta( 2 ) ^ -3 / eta(2)^-5 ").unwrap(),
            EtaQuotient::new([(2, 2)])
        );
    }

    #[test]
    fn parser_reports_positions() {
        assert_eq!(parse_eta_quotient("").unwrap_err().pos, 0);
        assert_eq!(parse_eta_quotient("eta3)^8").unwrap_err().pos, 3);
        assert_eq!(parse_eta_quotient("eta(3^8").unwrap_err().pos, 5);
        assert_eq!(parse_eta_quotient("eta(3)^").unwrap_err().pos, 7);
        assert_eq!(parse_eta_quotient("eta(3)^8+eta(1)").unwrap_err().pos, 8);
        assert_eq!(parse_eta_quotient("eta(0)^2").unwrap_err().pos, 4);
    }

    #[test]
    fn canonical_string_sorts_and_round_trips() {
        let q = parse_eta_quotient("eta(5)^4*eta(1)^4").unwrap();
        assert_eq!(q.canonical_string(), "eta(1)^4*eta(5)^4");
        assert_eq!(parse_eta_quotient(&q.canonical_string()).unwrap(), q);
        assert_eq!(EtaQuotient::new([]).canonical_string(), "eta(1)^0");
    }
}
