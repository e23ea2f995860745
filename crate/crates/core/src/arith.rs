//! Dirichlet characters and twisted divisor sums.
//!
//! The four real characters used by the closed forms (mod 3, 4, 5, 7) are
//! stored as explicit value tables; the Jacobi-symbol construction exists
//! only as a cross-check so nothing depends on symbol conventions at even
//! arguments. Divisor sums enumerate divisors by trial division to sqrt(n)
//! and return signed big integers: `sigma_sharp` outgrows 64 bits already
//! near n = 10^4 when the p-adic valuation is large.

use core::fmt;

use num_bigint::BigInt;
use num_traits::{Pow, Zero};

/// Errors from arithmetic functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithError {
    /// Jacobi symbols are defined for odd positive lower arguments only.
    EvenModulus(u64),
    /// Divisor sums and valuations need n >= 1.
    ZeroInput,
    /// `sigma_sharp` supports (p, j) = (3, 5) and (5, 3) only.
    UnsupportedPair { p: u32, j: u32 },
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::EvenModulus(n) => write!(f, "jacobi symbol needs an odd modulus, got {n}"),
            ArithError::ZeroInput => write!(f, "argument must be a positive integer"),
            ArithError::UnsupportedPair { p, j } => {
                write!(
                    f,
                    "sigma_sharp is defined for (p, j) in {{(3, 5), (5, 3)}}, got ({p}, {j})"
                )
            }
        }
    }
}

impl core::error::Error for ArithError {}

/// A real Dirichlet character of small modulus, stored as its value table.
/// `values[r]` is the character at residue r; it is 0 exactly when
/// `gcd(r, modulus) > 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u32,
    values: [i8; 7],
}

/// chi_3(n) = (n|3), the Legendre symbol mod 3.
pub const CHI_3: DirichletCharacter = DirichletCharacter {
    modulus: 3,
    values: [0, 1, -1, 0, 0, 0, 0],
};

/// chi_{4,2}: +1 at n = 1 mod 4, -1 at n = 3 mod 4, 0 on even n.
pub const CHI_4_2: DirichletCharacter = DirichletCharacter {
    modulus: 4,
    values: [0, 1, 0, -1, 0, 0, 0],
};

/// chi_{5,3}: +1 at n = 1, 4 mod 5, -1 at n = 2, 3 mod 5.
pub const CHI_5_3: DirichletCharacter = DirichletCharacter {
    modulus: 5,
    values: [0, 1, -1, -1, 1, 0, 0],
};

/// chi_{7,4}: +1 at n = 1, 2, 4 mod 7, -1 at n = 3, 5, 6 mod 7.
pub const CHI_7_4: DirichletCharacter = DirichletCharacter {
    modulus: 7,
    values: [0, 1, 1, -1, 1, -1, -1],
};

impl DirichletCharacter {
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Character value at n, in {-1, 0, +1}.
    pub fn eval(&self, n: u64) -> i64 {
        self.values[(n % u64::from(self.modulus)) as usize] as i64
    }

    /// Whether the stored table is completely multiplicative,
    /// i.e. `chi(ab) = chi(a) chi(b)` for all residues a, b.
    pub fn is_multiplicative(&self) -> bool {
        let m = u64::from(self.modulus);
        for a in 0..m {
            for b in 0..m {
                if self.eval(a * b) != self.eval(a) * self.eval(b) {
                    return false;
                }
            }
        }
        true
    }
}

/// Jacobi symbol (a|n) for odd n >= 1, by quadratic reciprocity.
pub fn jacobi(a: i64, n: u64) -> Result<i32, ArithError> {
    if n.is_multiple_of(2) {
        return Err(ArithError::EvenModulus(n));
    }
    let mut num = a.rem_euclid(n as i64) as u64;
    let mut den = n;
    let mut acc = 1i32;
    while num != 0 {
        while num.is_multiple_of(2) {
            num /= 2;
            // (2|den) = -1 iff den = 3, 5 mod 8
            if den % 8 == 3 || den % 8 == 5 {
                acc = -acc;
            }
        }
        core::mem::swap(&mut num, &mut den);
        if num % 4 == 3 && den % 4 == 3 {
            acc = -acc;
        }
        num %= den;
    }
    Ok(if den == 1 { acc } else { 0 })
}

/// Largest e with p^e dividing n. `p` is assumed prime (>= 2 asserted).
pub fn valuation(p: u32, n: u64) -> Result<u32, ArithError> {
    assert!(p >= 2, "valuation needs a prime p");
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let p = u64::from(p);
    let mut e = 0;
    let mut n = n;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Ok(e)
}

fn for_each_divisor(n: u64, mut f: impl FnMut(u64)) {
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            f(d);
            if d != n / d {
                f(n / d);
            }
        }
        d += 1;
    }
}

fn pow_u64(d: u64, j: u32) -> BigInt {
    BigInt::from(d).pow(j)
}

/// sigma_j(n) = sum over divisors d of n of d^j.
pub fn sigma(j: u32, n: u64) -> Result<BigInt, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mut sum = BigInt::zero();
    for_each_divisor(n, |d| sum += pow_u64(d, j));
    Ok(sum)
}

/// sigma_{j,chi}(n) = sum over d | n of chi(d) d^j (twist on the divisor).
pub fn sigma_twisted_d(chi: &DirichletCharacter, j: u32, n: u64) -> Result<BigInt, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mut sum = BigInt::zero();
    for_each_divisor(n, |d| match chi.eval(d) {
        1 => sum += pow_u64(d, j),
        -1 => sum -= pow_u64(d, j),
        _ => {}
    });
    Ok(sum)
}

/// sigma*_{j,chi}(n) = sum over d | n of chi(n/d) d^j (twist on the co-divisor).
pub fn sigma_twisted_q(chi: &DirichletCharacter, j: u32, n: u64) -> Result<BigInt, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mut sum = BigInt::zero();
    for_each_divisor(n, |d| match chi.eval(n / d) {
        1 => sum += pow_u64(d, j),
        -1 => sum -= pow_u64(d, j),
        _ => {}
    });
    Ok(sum)
}

/// sigma#_{j,p}(n) = p^{j nu_p(n)} * sum over divisors d of n coprime to p
/// of d^j, for the two pairs the closed forms use: (p, j) = (3, 5) and (5, 3).
pub fn sigma_sharp(p: u32, j: u32, n: u64) -> Result<BigInt, ArithError> {
    if !((p == 3 && j == 5) || (p == 5 && j == 3)) {
        return Err(ArithError::UnsupportedPair { p, j });
    }
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let nu = valuation(p, n)?;
    let mut sum = BigInt::zero();
    for_each_divisor(n, |d| {
        if d % u64::from(p) != 0 {
            sum += pow_u64(d, j);
        }
    });
    Ok(BigInt::from(p).pow(j * nu) * sum)
}
