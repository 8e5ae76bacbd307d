//! Integer number theory used throughout: primality, factoring, modular
//! exponentiation, primitive roots, Kronecker symbols, Bernoulli polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, primes ascending.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(q, _)| q).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n).into_iter().fold(n, |acc, (q, _)| acc / q * (q - 1))
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// Multiplicative order of `a` modulo `m` (requires gcd(a, m) = 1).
pub fn mult_order(a: u64, m: u64) -> u64 {
    let phi = euler_phi(m);
    let mut ord = phi;
    for (q, _) in factor(phi) {
        while ord.is_multiple_of(q) && pow_mod(a, ord / q, m) == 1 {
            ord /= q;
        }
    }
    ord
}

/// Smallest generator of the cyclic group (Z/q^a)^× for an odd prime q.
pub fn primitive_root_prime_power(q: u64, a: u32) -> u64 {
    let m = q.pow(a);
    let phi = euler_phi(m);
    (2..m).find(|&g| gcd(g, m) == 1 && mult_order(g, m) == phi).expect("odd prime powers have primitive roots")
}

/// Kronecker symbol (d / n) for n ≥ 1.
pub fn kronecker(d: i64, n: u64) -> i32 {
    if n == 0 {
        return if d.abs() == 1 { 1 } else { 0 };
    }
    let mut result = 1i32;
    let mut n = n;
    while n.is_multiple_of(2) {
        n /= 2;
        let r = d.rem_euclid(8);
        if r % 2 == 0 {
            return 0;
        }
        if r == 3 || r == 5 {
            result = -result;
        }
    }
    if n == 1 {
        return result;
    }
    result * jacobi(d.rem_euclid(n as i64) as u64, n)
}

/// Jacobi symbol (a / n), n odd positive.
pub fn jacobi(mut a: u64, mut n: u64) -> i32 {
    let mut t = 1i32;
    a %= n;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Primes `2 ≤ ℓ ≤ n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

/// p-adic valuation of a nonzero integer.
pub fn val_p(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

/// Bernoulli numbers B_0..=B_n with B_1 = −1/2.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for m in 1..=n {
        let mut s = BigRational::zero();
        let mut binom = BigInt::one();
        for k in 0..m {
            s += BigRational::from_integer(binom.clone()) * &b[k];
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b[m] = -s / BigRational::from_integer(BigInt::from(m + 1));
    }
    b
}

/// Coefficients of the Bernoulli polynomial B_k(x), lowest degree first.
pub fn bernoulli_poly(k: usize) -> Vec<BigRational> {
    let b = bernoulli_numbers(k);
    let mut out = vec![BigRational::zero(); k + 1];
    let mut binom = BigInt::one();
    for j in 0..=k {
        // B_k(x) = Σ_j C(k, j) B_j x^{k−j}
        out[k - j] = BigRational::from_integer(binom.clone()) * &b[j];
        binom = binom * BigInt::from(k - j) / BigInt::from(j + 1);
    }
    out
}

pub fn eval_rational_poly(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

/// Index μ = [SL₂(Z) : Γ₀(N)].
pub fn gamma0_index(n: u64) -> u64 {
    factor(n).into_iter().fold(n, |acc, (q, _)| acc / q * (q + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn bernoulli_small() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[3].is_zero());
    }

    #[test]
    fn bernoulli_polynomial_values() {
        // B_2(x) = x² − x + 1/6
        assert_eq!(bernoulli_poly(2), vec![rat(1, 6), rat(-1, 1), rat(1, 1)]);
        assert_eq!(eval_rational_poly(&bernoulli_poly(1), &rat(1, 1)), rat(1, 2));
    }

    #[test]
    fn kronecker_matches_legendre() {
        for l in primes_up_to(200).into_iter().filter(|&l| l > 2 && l != 23) {
            let euler = pow_mod((23 * l - 23) % l, (l - 1) / 2, l);
            let expect = if euler == 1 { 1 } else { -1 };
            assert_eq!(kronecker(-23, l), expect, "ℓ = {l}");
        }
        assert_eq!(kronecker(-23, 2), 1);
        assert_eq!(kronecker(-47, 2), 1);
        assert_eq!(kronecker(-4, 2), 0);
    }

    #[test]
    fn orders_and_roots() {
        assert_eq!(mult_order(5, 11), 5);
        assert_eq!(mult_order(5, 23), 22);
        assert_eq!(primitive_root_prime_power(23, 1), 5);
        assert_eq!(primitive_root_prime_power(101, 1), 2);
        assert_eq!(gamma0_index(2323), 2448);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(inv_mod(2, 5), Some(3));
    }
}
