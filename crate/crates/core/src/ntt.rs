//! Truncated products of prime-field coefficient arrays via number
//! theoretic transforms, with CRT across two NTT primes when a single
//! prime cannot hold the exact integer convolution.

const P1: u64 = 998_244_353;
const P2: u64 = 469_762_049;
const G: u64 = 3;

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn ntt(a: &mut [u64], invert: bool, m: u64) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let w = pow_mod(G, (m - 1) / len as u64, m);
        let w = if invert { pow_mod(w, m - 2, m) } else { w };
        let half = len / 2;
        let mut tw = Vec::with_capacity(half);
        let mut x = 1u64;
        for _ in 0..half {
            tw.push(x);
            x = x * w % m;
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = hi[k] * tw[k] % m;
                lo[k] = if u + v >= m { u + v - m } else { u + v };
                hi[k] = if u >= v { u - v } else { u + m - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let ninv = pow_mod(n as u64, m - 2, m);
        for x in a.iter_mut() {
            *x = *x * ninv % m;
        }
    }
}

fn convolve_mod(a: &[u32], b: &[u32], n_out: usize, m: u64) -> Vec<u64> {
    let full = a.len() + b.len() - 1;
    let need = full.min(n_out);
    let size = full.next_power_of_two();
    let mut fa = vec![0u64; size];
    let mut fb = vec![0u64; size];
    for (d, &s) in fa.iter_mut().zip(a) {
        *d = s as u64;
    }
    for (d, &s) in fb.iter_mut().zip(b) {
        *d = s as u64;
    }
    ntt(&mut fa, false, m);
    ntt(&mut fb, false, m);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = *x * y % m;
    }
    ntt(&mut fa, true, m);
    fa.truncate(need);
    fa
}

fn naive(a: &[u32], b: &[u32], n_out: usize, p: u32) -> Vec<u32> {
    let mut acc = vec![0u64; n_out];
    for (i, &x) in a.iter().enumerate().take(n_out) {
        if x == 0 {
            continue;
        }
        let x = x as u64;
        for (d, &y) in acc[i..].iter_mut().zip(b) {
            *d += x * y as u64;
        }
    }
    acc.into_iter().map(|x| (x % p as u64) as u32).collect()
}

/// First `n_out` coefficients of the product of `a` and `b`, entries in
/// [0, p). Shorter inputs are zero-extended only up to their own length:
/// the caller is responsible for truncation semantics.
pub fn mul_trunc(a: &[u32], b: &[u32], n_out: usize, p: u32) -> Vec<u32> {
    let a = &a[..a.len().min(n_out)];
    let b = &b[..b.len().min(n_out)];
    if a.is_empty() || b.is_empty() {
        return vec![0; n_out];
    }
    let mut out = if a.len().min(b.len()) <= 48 {
        naive(a, b, n_out.min(a.len() + b.len() - 1), p)
    } else {
        // Exact integer coefficients are bounded by len·(p−1)².
        let bound = (a.len().min(b.len()) as u128) * ((p as u128 - 1).pow(2));
        if bound < P1 as u128 {
            convolve_mod(a, b, n_out, P1).into_iter().map(|x| (x % p as u64) as u32).collect()
        } else {
            assert!(bound < (P1 as u128) * (P2 as u128), "convolution too large for CRT");
            let r1 = convolve_mod(a, b, n_out, P1);
            let r2 = convolve_mod(a, b, n_out, P2);
            let inv = pow_mod(P1 % P2, P2 - 2, P2);
            r1.into_iter()
                .zip(r2)
                .map(|(x1, x2)| {
                    let t = (x2 + P2 - x1 % P2) % P2 * inv % P2;
                    let v = x1 as u128 + P1 as u128 * t as u128;
                    (v % p as u128) as u32
                })
                .collect()
        }
    };
    out.resize(n_out, 0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn agrees_with_schoolbook() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for &(p, la, lb, n) in &[(5u32, 300, 200, 400), (65521, 500, 700, 900), (7, 1000, 1000, 1000), (13, 60, 3, 100)]
        {
            let a: Vec<u32> = (0..la).map(|_| rng.gen_range(0..p)).collect();
            let b: Vec<u32> = (0..lb).map(|_| rng.gen_range(0..p)).collect();
            let fast = mul_trunc(&a, &b, n, p);
            let slow = naive(&a, &b, n, p);
            let mut slow = slow;
            slow.resize(n, 0);
            assert_eq!(fast, slow, "p={p}");
        }
    }
}
