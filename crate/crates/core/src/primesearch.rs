//! Auxiliary primes ℓ ≡ 1 mod p at which the dihedral residual
//! representation is trivial on Frobenius: ℓ splits completely in the
//! ring class field, detected by the shipped class polynomial.

use serde::Serialize;

use crate::arith;
use crate::dihedral::{poly_discriminant, SplittingPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SieveError {
    #[error("DiscriminantDivisible: {ell} divides the discriminant of the polynomial")]
    DiscriminantDivisible { ell: u64 },
    #[error("NotPrime: {0}")]
    NotPrime(u64),
}

/// True iff the monic integer polynomial `f` (lowest degree first) has
/// deg f distinct roots mod ℓ, i.e. x^ℓ ≡ x mod (f, ℓ).
pub fn splits_completely(f: &[i64], ell: u64) -> Result<bool, SieveError> {
    if !arith::is_prime(ell) {
        return Err(SieveError::NotPrime(ell));
    }
    let disc = poly_discriminant(f);
    if (disc % num_bigint::BigInt::from(ell)) == num_bigint::BigInt::from(0) {
        return Err(SieveError::DiscriminantDivisible { ell });
    }
    let m = |x: i64| x.rem_euclid(ell as i64) as u64;
    let fp: Vec<u64> = f.iter().map(|&c| m(c)).collect();
    let deg = fp.len() - 1;
    if deg <= 1 {
        return Ok(true);
    }
    let xl = pow_x_mod(&fp, ell, ell);
    let mut x = vec![0u64; deg];
    x[1] = 1;
    Ok(xl == x)
}

/// (a·b) mod (f, ℓ) for a monic f, on coefficient vectors of length deg f.
fn mulmod(a: &[u64], b: &[u64], f: &[u64], ell: u64) -> Vec<u64> {
    let deg = f.len() - 1;
    let l = ell as u128;
    let mut prod = vec![0u128; 2 * deg];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u128 * y as u128) % l;
        }
    }
    for k in (deg..2 * deg).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (i, &fi) in f[..deg].iter().enumerate() {
            let t = prod[k - deg + i] + l - (c * fi as u128) % l;
            prod[k - deg + i] = t % l;
        }
    }
    prod[..deg].iter().map(|&x| x as u64).collect()
}

/// x^e mod (f, ℓ), deg f ≥ 2.
fn pow_x_mod(f: &[u64], mut e: u64, ell: u64) -> Vec<u64> {
    let deg = f.len() - 1;
    let mut base = vec![0u64; deg];
    base[1] = 1;
    let mut acc = vec![0u64; deg];
    acc[0] = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, f, ell);
        }
        base = mulmod(&base, &base, f, ell);
        e >>= 1;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Checks {
    pub one_mod_p: bool,
    pub split_in_k: bool,
    pub poly_splits: bool,
    pub coprime_to_level: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Candidate,
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidatePrime {
    pub ell: u64,
    pub p: u64,
    pub d: i64,
    pub checks: Checks,
    pub status: Status,
}

pub fn check_prime(p: u64, poly: &SplittingPoly, level: u64, ell: u64) -> CandidatePrime {
    let one_mod_p = ell % p == 1;
    let split_in_k = arith::kronecker(poly.d, ell) == 1;
    let poly_splits = splits_completely(&poly.coeffs, ell).unwrap_or(false);
    let coprime_to_level = !level.is_multiple_of(ell);
    let checks = Checks { one_mod_p, split_in_k, poly_splits, coprime_to_level };
    let ok = one_mod_p && split_in_k && poly_splits && coprime_to_level;
    CandidatePrime { ell, p, d: poly.d, checks, status: if ok { Status::Candidate } else { Status::Rejected } }
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveResult {
    pub candidates: Vec<CandidatePrime>,
    /// Primes examined (ℓ ≤ the last one reached).
    pub examined: usize,
    pub observed_density: f64,
    /// 1/(h·(p−1)) · 1/2: splitting completely in H(ζ_p), of degree 2h(p−1).
    pub predicted_density: f64,
}

/// First `count` primes ℓ ≤ `limit` passing every check.
pub fn sieve(p: u64, poly: &SplittingPoly, level: u64, limit: u64, count: usize) -> SieveResult {
    let h = (poly.coeffs.len() - 1) as f64;
    let mut candidates = Vec::new();
    let mut examined = 0;
    for ell in arith::primes_up_to(limit) {
        if candidates.len() >= count {
            break;
        }
        examined += 1;
        let c = check_prime(p, poly, level, ell);
        if c.status == Status::Candidate {
            candidates.push(c);
        }
    }
    let observed_density = if examined == 0 { 0.0 } else { candidates.len() as f64 / examined as f64 };
    SieveResult { candidates, examined, observed_density, predicted_density: 1.0 / (2.0 * h * (p as f64 - 1.0)) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dihedral::splitting_poly;

    #[test]
    fn cubic_examples() {
        assert!(splits_completely(&[-1, -1, 0, 1], 59).unwrap());
        assert!(!splits_completely(&[-1, -1, 0, 1], 2).unwrap());
        assert!(splits_completely(&[3, 1], 7).unwrap());
        assert_eq!(splits_completely(&[-1, -1, 0, 1], 23), Err(SieveError::DiscriminantDivisible { ell: 23 }));
    }

    #[test]
    fn first_candidates_for_minus_23() {
        let poly = splitting_poly(-23).unwrap();
        let s = sieve(5, &poly, 23, 1000, 6);
        let ells: Vec<u64> = s.candidates.iter().map(|c| c.ell).collect();
        assert_eq!(ells, vec![101, 211, 271, 691, 821, 991]);
        for l in [11, 31, 41, 61, 71] {
            assert_eq!(check_prime(5, &poly, 23, l).status, Status::Rejected);
        }
        assert_eq!(check_prime(5, &poly, 23, 5).status, Status::Rejected);
        assert!(!check_prime(5, &poly, 23, 11).checks.poly_splits);
    }
}
