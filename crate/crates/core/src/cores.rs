//! Combinatorial oracle: partitions, hook numbers, t-core counts.
//!
//! Everything here is obtained by exhaustive enumeration, never from a
//! formula or series identity, so it can serve as independent ground truth
//! for the other two computation routes. The enumeration cap keeps oracle
//! queries sub-second and is configuration, not a constant.

use alloc::vec::Vec;
use core::fmt;
use core::num::NonZeroU32;

use num_bigint::BigInt;

use crate::series::TruncatedSeries;

/// Errors from oracle queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoresError {
    /// Requested n exceeds the configured enumeration cap.
    BudgetExceeded { n: u64, cap: u64 },
}

impl fmt::Display for CoresError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoresError::BudgetExceeded { n, cap } => {
                write!(f, "oracle enumeration capped at n <= {cap}, got n = {n}")
            }
        }
    }
}

impl core::error::Error for CoresError {}

/// An integer partition: weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Build a partition from parts in any order; zero parts are rejected.
    pub fn new(parts: impl Into<Vec<u32>>) -> Self {
        let mut parts = parts.into();
        assert!(
            parts.iter().all(|&p| p > 0),
            "partition parts must be positive"
        );
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    /// Conjugate partition: column lengths of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0) as usize;
        let mut conj = Vec::with_capacity(cols);
        for j in 1..=cols {
            conj.push(self.parts.iter().filter(|&&p| p as usize >= j).count() as u32);
        }
        Partition { parts: conj }
    }

    /// Hook numbers of every cell, row-major: for the cell in row i,
    /// column j (1-indexed), the hook is `parts[i] - j + conj[j] - i + 1`.
    pub fn hook_numbers(&self) -> Vec<u64> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.weight() as usize);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let arm = u64::from(row) - (j as u64 + 1);
                let leg = u64::from(conj.parts[j]) - (i as u64 + 1);
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// True iff no hook number is divisible by t.
    pub fn is_t_core(&self, t: u32) -> bool {
        assert!(t >= 2, "t-core is defined for t >= 2");
        let conj = self.conjugate();
        let t = u64::from(t);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row as usize {
                let hook =
                    u64::from(row) - (j as u64 + 1) + u64::from(conj.parts[j]) - (i as u64 + 1) + 1;
                if hook.is_multiple_of(t) {
                    return false;
                }
            }
        }
        true
    }
}

/// Visit every partition of n (parts descending) exactly once.
fn for_each_partition(n: u64, visit: &mut impl FnMut(&[u32])) {
    fn rec(remaining: u64, max_part: u64, stack: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
        if remaining == 0 {
            visit(stack);
            return;
        }
        let mut p = max_part.min(remaining);
        while p >= 1 {
            stack.push(p as u32);
            rec(remaining - p, p, stack, visit);
            stack.pop();
            p -= 1;
        }
    }
    let mut stack = Vec::new();
    rec(n, n.max(1), &mut stack, visit);
}

/// Enumeration-backed counting of t-cores and t-core k-tuples, bounded by a
/// configurable cap on n.
#[derive(Clone, Copy, Debug)]
pub struct Oracle {
    cap: u64,
}

impl Default for Oracle {
    fn default() -> Self {
        Self { cap: 40 }
    }
}

impl Oracle {
    pub fn new(cap: u64) -> Self {
        Self { cap }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    /// A_t(n) by enumerating all partitions of n and testing hooks.
    pub fn count_t_cores(&self, n: u64, t: u32) -> Result<BigInt, CoresError> {
        assert!(t >= 2, "t-core is defined for t >= 2");
        if n > self.cap {
            return Err(CoresError::BudgetExceeded { n, cap: self.cap });
        }
        let mut count = 0u64;
        for_each_partition(n, &mut |parts| {
            if (Partition {
                parts: parts.to_vec(),
            })
            .is_t_core(t)
            {
                count += 1;
            }
        });
        Ok(BigInt::from(count))
    }

    /// A_{t,k}(n): the k-fold convolution of the enumerated t-core counts.
    /// The per-weight counts come from enumeration; only the convolution
    /// over compositions of n is delegated to series multiplication.
    pub fn count_tuples(&self, n: u64, t: u32, k: NonZeroU32) -> Result<BigInt, CoresError> {
        if n > self.cap {
            return Err(CoresError::BudgetExceeded { n, cap: self.cap });
        }
        let counts: Vec<BigInt> = (0..=n)
            .map(|m| self.count_t_cores(m, t))
            .collect::<Result<_, _>>()?;
        let gen = TruncatedSeries::from_coeffs(counts);
        Ok(gen.pow(k).coeff(n as usize).clone())
    }
}
