//! Truncated formal power series over arbitrary-precision integers.
//!
//! A [`TruncatedSeries`] stores the coefficients of `q^0 .. q^order`
//! densely, as exact `BigInt`s. "Order" is inclusive: a series of order N
//! carries N+1 coefficients. Binary operations truncate to the smaller
//! order of the two operands instead of erroring, so pipelines compose.
//!
//! Multiplication is schoolbook with zero-coefficient skipping. Products of
//! sparse series (pentagonal-theorem Euler factors, dilated series) stay
//! cheap without a dedicated sparse representation.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Errors from series operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesError {
    /// `invert` requires the constant term to be +1 or -1.
    NonUnitConstantTerm(BigInt),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::NonUnitConstantTerm(c) => {
                write!(
                    f,
                    "cannot invert series with constant term {c} (must be +1 or -1)"
                )
            }
        }
    }
}

impl core::error::Error for SeriesError {}

/// A formal power series truncated after `q^order`, with exact integer
/// coefficients. `coeffs.len() == order + 1` always holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigInt>,
}

impl TruncatedSeries {
    /// The zero series `0 + 0q + ... + 0q^order`.
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    /// The constant series `1`.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// `c * q^exp`, truncated at `order` (the term is dropped if `exp > order`).
    pub fn monomial(c: impl Into<BigInt>, exp: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if exp <= order {
            s.coeffs[exp] = c.into();
        }
        s
    }

    /// Build from an explicit coefficient vector; the order is `len - 1`.
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series carries at least the q^0 coefficient"
        );
        Self { coeffs }
    }

    /// `(q^m; q^m)_inf = prod_{n>=1} (1 - q^{mn})`, expanded by the
    /// pentagonal number theorem: the only nonzero coefficients sit at
    /// exponents `m * j(3j -/+ 1)/2` and equal `(-1)^j`.
    pub fn euler_product(m: u32, order: usize) -> Self {
        assert!(m >= 1, "euler_product multiplier must be >= 1");
        let m = m as usize;
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        let mut j = 1usize;
        loop {
            let g1 = j * (3 * j - 1) / 2;
            if m * g1 > order {
                break;
            }
            let sign = if j % 2 == 1 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            };
            s.coeffs[m * g1] = sign.clone();
            let g2 = j * (3 * j + 1) / 2;
            if m * g2 <= order {
                s.coeffs[m * g2] = sign;
            }
            j += 1;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^n`. Panics beyond the truncation order: those
    /// coefficients are unknown, not zero.
    pub fn coeff(&self, n: usize) -> &BigInt {
        assert!(
            n < self.coeffs.len(),
            "coefficient of q^{n} requested from a series of order {}",
            self.order()
        );
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Coefficient-wise sum, truncated to the smaller order.
    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &rhs.coeffs[i])
            .collect();
        Self { coeffs }
    }

    /// Coefficient-wise difference, truncated to the smaller order.
    pub fn sub(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] - &rhs.coeffs[i])
            .collect();
        Self { coeffs }
    }

    /// Cauchy product, truncated to the smaller order. Schoolbook with
    /// zero-block skipping; exact, never overflows.
    pub fn mul(&self, rhs: &Self) -> Self {
        let order = self.order().min(rhs.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(order + 1 - i).enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// `self^k` by binary exponentiation; identical to k-fold `mul`.
    pub fn pow(&self, k: NonZeroU32) -> Self {
        let mut k = k.get();
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse up to the truncation order, by the linear
    /// recurrence `a0 * b_n = -sum_{j=1..n} a_j * b_{n-j}`. Only unit
    /// constant terms (+1 or -1) are invertible here, which keeps every
    /// coefficient an integer; `1/a0 = a0` in both cases.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let a0 = &self.coeffs[0];
        if !(a0 == &BigInt::one() || a0 == &BigInt::from(-1)) {
            return Err(SeriesError::NonUnitConstantTerm(a0.clone()));
        }
        let order = self.order();
        let mut inv = vec![BigInt::zero(); order + 1];
        inv[0] = a0.clone();
        // Indices of nonzero a_j; the Euler products this inverts are sparse.
        let support: Vec<usize> = (1..=order).filter(|&j| !self.coeffs[j].is_zero()).collect();
        for n in 1..=order {
            let mut sum = BigInt::zero();
            for &j in support.iter().take_while(|&&j| j <= n) {
                sum += &self.coeffs[j] * &inv[n - j];
            }
            if !sum.is_zero() {
                inv[n] = -(a0 * sum);
            }
        }
        Ok(Self { coeffs: inv })
    }

    /// Substitute `q -> q^m`, keeping the truncation order: the old `q^i`
    /// coefficient lands at `q^{i*m}` when that still fits.
    pub fn dilate(&self, m: u32) -> Self {
        self.dilate_to(m, self.order())
    }

    /// Substitute `q -> q^m` into a series of order at least `order / m`,
    /// producing a series of the requested order. Exponents that are not
    /// multiples of m are exactly zero, so no information is invented.
    pub fn dilate_to(&self, m: u32, order: usize) -> Self {
        assert!(m >= 1, "dilation factor must be >= 1");
        let m = m as usize;
        assert!(
            self.order() >= order / m,
            "dilation source of order {} cannot reach order {order} under q -> q^{m}",
            self.order()
        );
        let mut out = Self::zero(order);
        for i in 0..=order / m {
            out.coeffs[i * m] = self.coeffs[i].clone();
        }
        out
    }

    /// Multiply by `q^k`: every exponent moves up by k and the order grows
    /// by k, so no coefficient is lost.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + k];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i + k] = c.clone();
        }
        Self { coeffs }
    }

    /// Copy of the series truncated to a (smaller or equal) order.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "truncate cannot extend a series");
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;
    use proptest::prelude::*;
    use proptest::test_runner::RngSeed;

    fn nz(k: u32) -> NonZeroU32 {
        NonZeroU32::new(k).unwrap()
    }

    fn from_i64(v: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(v.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Reference Cauchy product with no skipping, for bit-identity checks.
    fn schoolbook_mul(a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        let order = a.order().min(b.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for i in 0..=order {
            for j in 0..=order - i {
                out[i + j] += a.coeff(i) * b.coeff(j);
            }
        }
        TruncatedSeries::from_coeffs(out)
    }

    /// Number of partitions of n by bounded-part recursion; independent of
    /// the series code it checks.
    fn partition_count(n: usize) -> u64 {
        fn rec(n: usize, max: usize) -> u64 {
            if n == 0 {
                return 1;
            }
            (1..=max.min(n)).map(|p| rec(n - p, p)).sum()
        }
        rec(n, n.max(1))
    }

    #[test]
    fn add_cancels_and_keeps_identity() {
        let one_plus_q = from_i64(&[1, 1]);
        let one_minus_q = from_i64(&[1, -1]);
        assert_eq!(one_plus_q.add(&one_minus_q), from_i64(&[2, 0]));

        let s = from_i64(&[3, -2, 7]);
        assert_eq!(s.add(&TruncatedSeries::zero(2)), s);

        let a = from_i64(&[1, 2, 5]);
        let b = from_i64(&[0, 1, 0]);
        assert_eq!(a.add(&b), from_i64(&[1, 3, 5]));
    }

    #[test]
    fn mul_basic() {
        let a = from_i64(&[1, 1, 0]);
        let b = from_i64(&[1, -1, 0]);
        assert_eq!(a.mul(&b), from_i64(&[1, 0, -1]));
    }

    #[test]
    fn mul_truncates_to_min_order() {
        let a = from_i64(&[1, 1, 1, 1, 1]);
        let b = from_i64(&[1, 2]);
        let p = a.mul(&b);
        assert_eq!(p.order(), 1);
        assert_eq!(p, from_i64(&[1, 3]));
    }

    #[test]
    fn phi3_squared_prefix() {
        // Phi_3(q)^2 generates the 3-core pair counts 1, 2, 5, 4, 8.
        let e3 = TruncatedSeries::euler_product(3, 12);
        let e1 = TruncatedSeries::euler_product(1, 12);
        let phi3 = e3.pow(nz(3)).mul(&e1.invert().unwrap());
        let sq = phi3.mul(&phi3);
        let want: Vec<BigInt> = [1, 2, 5, 4, 8].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(&sq.coeffs()[..5], &want[..]);
    }

    #[test]
    fn pow_one_is_identity() {
        let s = from_i64(&[1, 4, -3, 2]);
        assert_eq!(s.pow(nz(1)), s);
    }

    #[test]
    fn pow_square_binomial() {
        let s = from_i64(&[1, 1, 0]);
        assert_eq!(s.pow(nz(2)), from_i64(&[1, 2, 1]));
    }

    #[test]
    fn phi3_cubed_prefix() {
        let e3 = TruncatedSeries::euler_product(3, 12);
        let e1 = TruncatedSeries::euler_product(1, 12);
        let phi3 = e3.pow(nz(3)).mul(&e1.invert().unwrap());
        let cubed = phi3.pow(nz(3));
        let want: Vec<BigInt> = [1, 3, 9, 13, 24].iter().map(|&c| BigInt::from(c)).collect();
        assert_eq!(&cubed.coeffs()[..5], &want[..]);
    }

    #[test]
    fn invert_geometric() {
        let s = from_i64(&[1, -1, 0, 0, 0]);
        assert_eq!(s.invert().unwrap(), from_i64(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn invert_euler_gives_partition_numbers() {
        let inv = TruncatedSeries::euler_product(1, 20).invert().unwrap();
        for n in 0..=20 {
            assert_eq!(
                inv.coeff(n),
                &BigInt::from(partition_count(n)),
                "partition count mismatch at n = {n}"
            );
        }
    }

    #[test]
    fn invert_rejects_non_unit_constant() {
        let s = from_i64(&[2, 1]);
        assert_eq!(
            s.invert().unwrap_err(),
            SeriesError::NonUnitConstantTerm(BigInt::from(2))
        );
    }

    #[test]
    fn invert_negative_unit_round_trips() {
        let s = from_i64(&[-1, 3, -2, 5]);
        let inv = s.invert().unwrap();
        assert_eq!(s.mul(&inv), TruncatedSeries::one(3));
        assert_eq!(inv.invert().unwrap(), s);
    }

    #[test]
    fn euler_product_prefix() {
        // (q;q)_inf = 1 - q - q^2 + q^5 + q^7 - q^12 - ...
        let e = TruncatedSeries::euler_product(1, 12);
        let want = from_i64(&[1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]);
        assert_eq!(e, want);
    }

    #[test]
    fn euler_product_dilation_law() {
        let direct = TruncatedSeries::euler_product(3, 40);
        let dilated = TruncatedSeries::euler_product(1, 40).dilate(3);
        assert_eq!(direct, dilated);
        assert_eq!(direct.coeff(0), &BigInt::one());
    }

    #[test]
    fn euler_product_pentagonal_support() {
        for m in [1u32, 2, 5] {
            let e = TruncatedSeries::euler_product(m, 200);
            let mut support = alloc::collections::BTreeSet::new();
            support.insert(0usize);
            let mut j = 1usize;
            while m as usize * (j * (3 * j - 1) / 2) <= 200 {
                support.insert(m as usize * (j * (3 * j - 1) / 2));
                if m as usize * (j * (3 * j + 1) / 2) <= 200 {
                    support.insert(m as usize * (j * (3 * j + 1) / 2));
                }
                j += 1;
            }
            for n in 0..=200 {
                let c = e.coeff(n);
                if support.contains(&n) {
                    assert!(c == &BigInt::one() || c == &BigInt::from(-1));
                } else {
                    assert!(c.is_zero(), "unexpected coefficient at q^{n} for m={m}");
                }
            }
        }
    }

    #[test]
    fn shift_up_preserves_coefficients() {
        let s = from_i64(&[1, -8, 20]);
        let shifted = s.shift_up(2);
        assert_eq!(shifted, from_i64(&[0, 0, 1, -8, 20]));
    }

    fn arb_series(order: usize, max_abs: i64) -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(-max_abs..=max_abs, order + 1)
            .prop_map(|v| TruncatedSeries::from_coeffs(v.into_iter().map(BigInt::from).collect()))
    }

    fn arb_unit_series(order: usize) -> impl Strategy<Value = TruncatedSeries> {
        (
            proptest::collection::vec(-50i64..=50, order),
            proptest::bool::ANY,
        )
            .prop_map(|(tail, neg)| {
                let mut coeffs = alloc::vec![BigInt::from(if neg { -1 } else { 1 })];
                coeffs.extend(tail.into_iter().map(BigInt::from));
                TruncatedSeries::from_coeffs(coeffs)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig {
            rng_seed: RngSeed::Fixed(0x7c05_e71e_5000),
            ..ProptestConfig::default()
        })]

        #[test]
        fn ring_laws(a in arb_series(14, 100), b in arb_series(14, 100), c in arb_series(14, 100)) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn mul_matches_schoolbook_reference(a in arb_series(24, 1000), b in arb_series(24, 1000)) {
            prop_assert_eq!(a.mul(&b), schoolbook_mul(&a, &b));
        }

        #[test]
        fn invert_is_right_inverse(a in arb_unit_series(16)) {
            let inv = a.invert().unwrap();
            prop_assert_eq!(a.mul(&inv), TruncatedSeries::one(16));
            prop_assert_eq!(inv.invert().unwrap(), a);
        }

        #[test]
        fn pow_matches_iterated_mul(a in arb_series(10, 20), k in 1u32..=8) {
            let mut iterated = a.clone();
            for _ in 1..k {
                iterated = iterated.mul(&a);
            }
            prop_assert_eq!(a.pow(nz(k)), iterated);
        }
    }
}
