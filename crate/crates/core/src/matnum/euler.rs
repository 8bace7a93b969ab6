use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense matrix of exact rationals, row major.
pub type RationalMatrix = Vec<Vec<BigRational>>;

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Signed Euler (secant) numbers `E_0, E_2, ..., E_{2n}`, the Taylor
/// coefficients of `sech`: `1, -1, 5, -61, 1385, ...`.
///
/// Uses `sum_{j=0}^{m} C(2m, 2j) E_{2j} = 0` for `m >= 1`.
pub fn euler_secant(n: usize) -> Vec<BigInt> {
    let mut e: Vec<BigInt> = Vec::with_capacity(n + 1);
    e.push(BigInt::one());
    for m in 1..=n as u64 {
        let partial: BigInt = (0..m).map(|j| binomial(2 * m, 2 * j) * &e[j as usize]).sum();
        e.push(-partial);
    }
    e
}

/// Inverse of the lower triangular matrix `A(m, j) = C(2m, 2j)`, `0 <= j, m <= n`,
/// given by `C(2j, 2m) E_{2j-2m}` (row `j`, column `m`).
pub fn binomial_inverse_by_euler(n: usize) -> RationalMatrix {
    let e = euler_secant(n);
    (0..=n)
        .map(|j| {
            (0..=n)
                .map(|m| {
                    if m > j {
                        BigRational::zero()
                    } else {
                        BigRational::from_integer(binomial(2 * j as u64, 2 * m as u64) * &e[j - m])
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_euler_numbers() {
        let e = euler_secant(5);
        let expected = [1, -1, 5, -61, 1385, -50521];
        for (x, y) in e.iter().zip(expected) {
            assert_eq!(*x, BigInt::from(y));
        }
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(4, 5), BigInt::zero());
        assert_eq!(binomial(12, 6), BigInt::from(924));
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(6), BigInt::from(720));
    }
}
