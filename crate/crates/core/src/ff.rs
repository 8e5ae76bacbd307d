//! Finite fields F_{p^r} for p ≥ 5, r ≤ 8.
//!
//! Elements are stored as a single `u32` holding the base-p digits of the
//! coefficient vector (c_0 + c_1 p + … + c_{r−1} p^{r−1}), so a prime field
//! element is just its residue. Bulk containers (series, matrices) hold raw
//! `Fq` values next to one shared [`FieldCtx`].

use std::fmt;
use std::sync::Arc;

use crate::arith;

/// Raw encoded field element; meaningful only together with a [`FieldCtx`].
pub type Fq = u32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FfError {
    #[error("NotPrime: {0} is not prime")]
    NotPrime(u64),
    #[error("UnsupportedCharacteristic: p = {0} (need 5 ≤ p < 65536)")]
    UnsupportedCharacteristic(u64),
    #[error("DegreeTooLarge: r = {0} (need 1 ≤ r ≤ 8)")]
    DegreeTooLarge(u32),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("ContextMismatch: {0} vs {1}")]
    ContextMismatch(String, String),
}

/// Reduction modulo a small odd prime by multiply-high (Lemire's fastmod).
#[derive(Debug, Clone, Copy)]
pub struct ModP {
    p: u32,
    m: u64,
}

impl ModP {
    pub fn new(p: u32) -> Self {
        ModP { p, m: u64::MAX / p as u64 + 1 }
    }
    #[inline(always)]
    pub fn reduce(&self, x: u32) -> u32 {
        let low = self.m.wrapping_mul(x as u64);
        ((low as u128 * self.p as u128) >> 64) as u32
    }
    #[inline(always)]
    pub fn reduce64(&self, x: u64) -> u32 {
        if x < u32::MAX as u64 {
            self.reduce(x as u32)
        } else {
            (x % self.p as u64) as u32
        }
    }
    pub fn p(&self) -> u32 {
        self.p
    }
}

#[derive(Debug)]
struct Inner {
    p: u32,
    r: u32,
    q: u32,
    /// Monic modulus, lowest degree first, length r + 1.
    modulus: Vec<u32>,
    fast: ModP,
    /// Discrete log tables relative to `generator` (extension fields only).
    log: Vec<u32>,
    exp: Vec<u32>,
    generator: Fq,
}

/// Handle to a finite field; cheap to clone, immutable, `Send + Sync`.
#[derive(Clone)]
pub struct FieldCtx(Arc<Inner>);

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FieldCtx {}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Builds F_{p^r} with the first monic irreducible modulus in the order
/// c_0 + c_1 p + … (so for r = 2, p = 5 the modulus is x² + 2).
pub fn make_field(p: u64, r: u32) -> Result<FieldCtx, FfError> {
    if !arith::is_prime(p) {
        return Err(FfError::NotPrime(p));
    }
    if !(5..1 << 16).contains(&p) {
        return Err(FfError::UnsupportedCharacteristic(p));
    }
    if r == 0 || r > 8 {
        return Err(FfError::DegreeTooLarge(r));
    }
    if p.checked_pow(r).is_none_or(|q| q > u32::MAX as u64 / 2) {
        return Err(FfError::DegreeTooLarge(r));
    }
    let p32 = p as u32;
    let q = p32.pow(r);
    if r == 1 {
        let g = primitive_root(p32);
        return Ok(FieldCtx(Arc::new(Inner {
            p: p32,
            r,
            q,
            modulus: vec![0, 1],
            fast: ModP::new(p32),
            log: Vec::new(),
            exp: Vec::new(),
            generator: g,
        })));
    }
    let base = make_field(p, 1)?;
    let modulus = (0..q)
        .map(|code| {
            let mut m = decode_digits(code, p32, r);
            m.push(1);
            m
        })
        .find(|m| is_irreducible(&base, m))
        .expect("irreducible polynomials exist in every degree");
    let mut inner =
        Inner { p: p32, r, q, modulus, fast: ModP::new(p32), log: Vec::new(), exp: Vec::new(), generator: 0 };
    let probe = FieldCtx(Arc::new(Inner { log: Vec::new(), exp: Vec::new(), ..clone_inner(&inner) }));
    let g = probe.find_generator();
    inner.generator = g;
    if q <= 1 << 21 {
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![0u32; q as usize];
        let mut x = 1;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = probe.mul_slow(x, g);
        }
        inner.exp = exp;
        inner.log = log;
    }
    Ok(FieldCtx(Arc::new(inner)))
}

fn clone_inner(i: &Inner) -> Inner {
    Inner {
        p: i.p,
        r: i.r,
        q: i.q,
        modulus: i.modulus.clone(),
        fast: i.fast,
        log: i.log.clone(),
        exp: i.exp.clone(),
        generator: i.generator,
    }
}

fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let ps = arith::prime_divisors(p as u64 - 1);
    (2..p).find(|&g| ps.iter().all(|&q| arith::pow_mod(g as u64, (p as u64 - 1) / q, p as u64) != 1)).unwrap()
}

fn decode_digits(mut code: u32, p: u32, r: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(code % p);
        code /= p;
    }
    out
}

/// Rabin's irreducibility test over the prime field `base`.
fn is_irreducible(base: &FieldCtx, m: &[u32]) -> bool {
    let f = Poly::new(m.to_vec());
    let r = f.degree().unwrap();
    let x = Poly::new(vec![0, 1]);
    let p = base.p() as u64;
    // x^{p^j} mod f
    let frob = |j: usize| {
        let mut h = x.clone();
        for _ in 0..j {
            h = h.pow_mod(base, p, &f);
        }
        h
    };
    if frob(r) != x.rem(base, &f) {
        return false;
    }
    for (d, _) in arith::factor(r as u64) {
        let h = frob(r / d as usize).sub(base, &x);
        if Poly::gcd(base, &f, &h).degree() != Some(0) {
            return false;
        }
    }
    true
}

impl FieldCtx {
    #[inline]
    pub fn p(&self) -> u32 {
        self.0.p
    }
    #[inline]
    pub fn r(&self) -> u32 {
        self.0.r
    }
    /// Field size p^r.
    #[inline]
    pub fn order(&self) -> u32 {
        self.0.q
    }
    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.r == 1
    }
    #[inline]
    pub fn fastmod(&self) -> ModP {
        self.0.fast
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }
    /// Fixed generator of the multiplicative group.
    pub fn generator(&self) -> Fq {
        self.0.generator
    }

    pub fn label(&self) -> String {
        if self.r() == 1 {
            format!("F{}", self.p())
        } else {
            let m = Poly::new(self.modulus().to_vec());
            format!("F{}^{}[a]/({})", self.p(), self.r(), m.display("a"))
        }
    }

    #[inline]
    pub fn zero(&self) -> Fq {
        0
    }
    #[inline]
    pub fn one(&self) -> Fq {
        1
    }

    /// Image of an integer.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p() as i64) as Fq
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Fq {
        let p = self.p();
        c.iter().rev().fold(0u32, |acc, &d| acc * p + d % p)
    }

    pub fn coeffs(&self, a: Fq) -> Vec<u32> {
        decode_digits(a, self.p(), self.r())
    }

    /// Elements of the prime subfield are exactly the codes below p.
    pub fn in_prime_field(&self, a: Fq) -> bool {
        a < self.p()
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p();
        if self.0.r == 1 {
            let s = a + b;
            if s >= p {
                s - p
            } else {
                s
            }
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.0.r {
                let d = (a % p + b % p) % p;
                out += d * place;
                place *= p;
                a /= p;
                b /= p;
            }
            out
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        let p = self.p();
        if self.0.r == 1 {
            if a == 0 {
                0
            } else {
                p - a
            }
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.0.r {
                out += ((p - a % p) % p) * place;
                place *= p;
                a /= p;
            }
            out
        }
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if self.0.r == 1 {
            self.0.fast.reduce(a * b)
        } else if a == 0 || b == 0 {
            0
        } else if !self.0.exp.is_empty() {
            let n = self.0.q - 1;
            let s = self.0.log[a as usize] + self.0.log[b as usize];
            self.0.exp[(if s >= n { s - n } else { s }) as usize]
        } else {
            self.mul_slow(a, b)
        }
    }

    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p() as u64;
        let r = self.r() as usize;
        let ca = self.coeffs(a);
        let cb = self.coeffs(b);
        let mut prod = vec![0u64; 2 * r - 1];
        for i in 0..r {
            for j in 0..r {
                prod[i + j] = (prod[i + j] + ca[i] as u64 * cb[j] as u64) % p;
            }
        }
        let m = &self.0.modulus;
        for d in (r..2 * r - 1).rev() {
            let c = prod[d];
            if c != 0 {
                for i in 0..r {
                    prod[d - r + i] = (prod[d - r + i] + (p - c) * m[i] as u64) % p;
                }
                prod[d] = 0;
            }
        }
        let digits: Vec<u32> = prod[..r].iter().map(|&x| x as u32).collect();
        self.from_coeffs(&digits)
    }

    pub fn pow(&self, a: Fq, mut e: u64) -> Fq {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, FfError> {
        if a == 0 {
            return Err(FfError::DivisionByZero);
        }
        Ok(self.pow(a, self.order() as u64 - 2))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, FfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Frobenius a ↦ a^p.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p() as u64)
    }

    /// Primitive n-th root of unity g^{(q−1)/n}; the family is compatible
    /// (ζ_{ab}^a = ζ_b), which keeps character values consistent.
    pub fn root_of_unity(&self, n: u64) -> Option<Fq> {
        let q1 = self.order() as u64 - 1;
        if n == 0 || !q1.is_multiple_of(n) {
            return None;
        }
        Some(self.pow(self.generator(), q1 / n))
    }

    /// Discrete log base the fixed generator.
    pub fn log(&self, a: Fq) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if !self.0.log.is_empty() {
            return Some(self.0.log[a as usize] as u64);
        }
        let g = self.generator();
        let mut x = 1;
        for i in 0..self.order() as u64 - 1 {
            if x == a {
                return Some(i);
            }
            x = self.mul(x, g);
        }
        None
    }

    fn find_generator(&self) -> Fq {
        let q1 = self.order() as u64 - 1;
        let ps = arith::prime_divisors(q1);
        (2..self.order())
            .find(|&g| ps.iter().all(|&l| self.pow(g, q1 / l) != 1))
            .expect("multiplicative group is cyclic")
    }

    /// Human-readable element: an integer for prime fields, else a
    /// polynomial in `a`.
    pub fn fmt_elem(&self, x: Fq) -> String {
        if self.r() == 1 {
            x.to_string()
        } else {
            Poly::new(self.coeffs(x)).display("a")
        }
    }

    /// Parses the output of [`FieldCtx::fmt_elem`] (and plain integers).
    pub fn parse_elem(&self, s: &str) -> Option<Fq> {
        let s = s.trim();
        if let Ok(n) = s.parse::<i64>() {
            return Some(self.from_int(n));
        }
        let mut coeffs = vec![0u32; self.r() as usize];
        for term in s.replace('-', "+-").split('+').map(str::trim).filter(|t| !t.is_empty()) {
            let (c, d) = match term.split_once('a') {
                None => (term.parse::<i64>().ok()?, 0usize),
                Some((c, rest)) => {
                    let c = c.trim_end_matches('*');
                    let c = match c {
                        "" => 1,
                        "-" => -1,
                        _ => c.parse::<i64>().ok()?,
                    };
                    let d = rest.trim_start_matches('^');
                    (c, if d.is_empty() { 1 } else { d.parse().ok()? })
                }
            };
            if d >= coeffs.len() {
                return None;
            }
            coeffs[d] = (coeffs[d] as i64 + c).rem_euclid(self.p() as i64) as u32;
        }
        Some(self.from_coeffs(&coeffs))
    }

    /// Wraps a raw value.
    pub fn elem(&self, v: Fq) -> FieldElement {
        FieldElement { ctx: self.clone(), v }
    }

    /// Embeds `sub` into `self` by sending the generator variable of `sub`
    /// to the smallest root (by code) of its modulus in `self`.
    pub fn embed_from(&self, sub: &FieldCtx, x: Fq) -> Option<Fq> {
        if sub.p() != self.p() || !self.r().is_multiple_of(sub.r()) {
            return None;
        }
        if sub.r() == 1 {
            return Some(x);
        }
        let m = Poly::new(sub.modulus().to_vec());
        let root = (0..self.order()).find(|&y| m.eval(self, y) == 0)?;
        let c = sub.coeffs(x);
        Some(c.iter().rev().fold(0, |acc, &d| self.add(self.mul(acc, root), d)))
    }
}

/// A field element bundled with its context, for API-level arithmetic.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    ctx: FieldCtx,
    v: Fq,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self.ctx.fmt_elem(self.v), self.ctx.label())
    }
}

impl FieldElement {
    pub fn value(&self) -> Fq {
        self.v
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn coeffs(&self) -> Vec<u32> {
        self.ctx.coeffs(self.v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FfError> {
    if a.ctx != b.ctx {
        return Err(FfError::ContextMismatch(a.ctx.label(), b.ctx.label()));
    }
    let c = &a.ctx;
    let v = match op {
        ArithOp::Add => c.add(a.v, b.v),
        ArithOp::Sub => c.sub(a.v, b.v),
        ArithOp::Mul => c.mul(a.v, b.v),
        ArithOp::Div => c.div(a.v, b.v)?,
    };
    Ok(c.elem(v))
}

/// Dense polynomial over a field, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    c: Vec<Fq>,
}

impl Poly {
    pub fn new(mut c: Vec<Fq>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { c }
    }
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    pub fn coeffs(&self) -> &[Fq] {
        &self.c
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(f: &FieldCtx, roots: &[Fq]) -> Self {
        roots.iter().fold(Poly::new(vec![1]), |acc, &r| acc.mul(f, &Poly::new(vec![f.neg(r), 1])))
    }

    pub fn eval(&self, f: &FieldCtx, x: Fq) -> Fq {
        self.c.iter().rev().fold(0, |acc, &a| f.add(f.mul(acc, x), a))
    }

    pub fn add(&self, f: &FieldCtx, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| f.add(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0))).collect())
    }

    pub fn sub(&self, f: &FieldCtx, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        Poly::new((0..n).map(|i| f.sub(*self.c.get(i).unwrap_or(&0), *o.c.get(i).unwrap_or(&0))).collect())
    }

    pub fn mul(&self, f: &FieldCtx, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, f: &FieldCtx, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv_lead = f.inv(d.c[dd]).unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = f.mul(r[i], inv_lead);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for j in 0..=dd {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(c, d.c[j]));
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, f: &FieldCtx, d: &Poly) -> Poly {
        self.divrem(f, d).1
    }

    pub fn monic(&self, f: &FieldCtx) -> Poly {
        match self.c.last() {
            None => Poly::zero(),
            Some(&l) => {
                let il = f.inv(l).unwrap();
                Poly::new(self.c.iter().map(|&a| f.mul(a, il)).collect())
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn pow_mod(&self, f: &FieldCtx, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(f, m);
        let mut acc = Poly::new(vec![1]).rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &base).rem(f, m);
            }
            base = base.mul(f, &base).rem(f, m);
            e >>= 1;
        }
        acc
    }

    pub fn display(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &c) in self.c.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}{mono}"),
            });
        }
        parts.join("+")
    }
}

/// All roots of `f` in the field, with multiplicity, by exhaustive
/// evaluation followed by repeated deflation.
pub fn poly_roots(field: &FieldCtx, f: &Poly) -> Vec<Fq> {
    let mut out = Vec::new();
    if f.degree().is_none_or(|d| d == 0) {
        return out;
    }
    for x in 0..field.order() {
        if f.eval(field, x) != 0 {
            continue;
        }
        let lin = Poly::new(vec![field.neg(x), 1]);
        let mut g = f.clone();
        loop {
            let (q, r) = g.divrem(field, &lin);
            if !r.is_zero() {
                break;
            }
            out.push(x);
            g = q;
        }
    }
    out
}

/// Smallest j such that `f` splits into linear factors over the degree-j
/// extension of `field` (lcm of the degrees of its irreducible factors).
pub fn splitting_degree(field: &FieldCtx, f: &Poly) -> u32 {
    let Some(d) = f.degree() else { return 1 };
    if d == 0 {
        return 1;
    }
    let q = field.order() as u64;
    let x = Poly::new(vec![0, 1]);
    let mut rest = f.monic(field);
    let mut h = x.clone();
    let mut result = 1u64;
    let mut i = 0u64;
    while rest.degree().unwrap_or(0) > 0 {
        i += 1;
        h = h.pow_mod(field, q, &rest);
        let mut g = Poly::gcd(field, &rest, &h.sub(field, &x));
        let mut found = false;
        while g.degree().unwrap_or(0) > 0 {
            found = true;
            rest = rest.divrem(field, &g).0;
            g = Poly::gcd(field, &rest, &g);
        }
        if found {
            result = arith::lcm(result, i);
        }
        if rest.degree().unwrap_or(0) > 0 {
            h = h.rem(field, &rest);
        }
    }
    result as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn brute_irreducible_quadratics(p: u32) -> Vec<(u32, u32)> {
        // x² + c1 x + c0 is irreducible iff it has no root.
        let mut out = Vec::new();
        for c1 in 0..p {
            for c0 in 0..p {
                if (0..p).all(|x| (x * x + c1 * x + c0) % p != 0) {
                    out.push((c0, c1));
                }
            }
        }
        out
    }

    #[test]
    fn construction_errors() {
        assert_eq!(make_field(4, 1), Err(FfError::NotPrime(4)));
        assert_eq!(make_field(3, 1), Err(FfError::UnsupportedCharacteristic(3)));
        assert_eq!(make_field(5, 9), Err(FfError::DegreeTooLarge(9)));
    }

    #[test]
    fn quadratic_modulus_is_first_irreducible() {
        let f = make_field(5, 2).unwrap();
        let first = brute_irreducible_quadratics(5).into_iter().min_by_key(|&(c0, c1)| c0 + 5 * c1).unwrap();
        assert_eq!(f.modulus(), &[first.0, first.1, 1]);
        // x·x reduces by the modulus: x² = −c1 x − c0
        let x = f.from_coeffs(&[0, 1]);
        assert_eq!(f.coeffs(f.mul(x, x)), vec![(5 - first.0) % 5, (5 - first.1) % 5]);
    }

    #[test]
    fn prime_field_basics() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(f.mul(3, 4), 2);
        assert_eq!(f.inv(2), Ok(3));
        assert_eq!(f.inv(0), Err(FfError::DivisionByZero));
        let a = f.elem(3);
        let g = make_field(7, 1).unwrap().elem(3);
        assert!(matches!(arith(&a, &g, ArithOp::Add), Err(FfError::ContextMismatch(..))));
        assert_eq!(arith(&a, &f.elem(4), ArithOp::Div).unwrap().value(), 2);
    }

    #[test]
    fn inverses_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for (p, r) in [(5, 1), (5, 2), (7, 3), (11, 2), (5, 5)] {
            let f = make_field(p, r).unwrap();
            for _ in 0..1000 {
                let a = rng.gen_range(1..f.order());
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }

    #[test]
    fn frobenius_fixes_prime_field_only() {
        let f = make_field(7, 2).unwrap();
        let mut fixed = 0;
        for a in 0..f.order() {
            for b in [0, 1, 5, 17, 30] {
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                assert_eq!(f.frobenius(f.mul(a, b)), f.mul(f.frobenius(a), f.frobenius(b)));
            }
            if f.frobenius(a) == a {
                fixed += 1;
                assert!(f.in_prime_field(a));
            }
        }
        assert_eq!(fixed, 7);
    }

    #[test]
    fn roots_examples() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(poly_roots(&f, &Poly::new(vec![4, 0, 1])), vec![1, 4]);
        assert_eq!(poly_roots(&f, &Poly::new(vec![1, 0, 1])), vec![2, 3]);
        assert!(poly_roots(&f, &Poly::new(vec![2, 0, 1])).is_empty());
        assert_eq!(splitting_degree(&f, &Poly::new(vec![2, 0, 1])), 2);
        // (x−1)²(x²+2)(x³+x+1): factors of degree 1, 2, 3
        let g = Poly::from_roots(&f, &[1, 1]).mul(&f, &Poly::new(vec![2, 0, 1])).mul(&f, &Poly::new(vec![1, 1, 0, 1]));
        assert_eq!(poly_roots(&f, &g), vec![1, 1]);
        assert_eq!(splitting_degree(&f, &g), 6);
    }

    #[test]
    fn roots_match_evaluation_zero_set() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let f = make_field(5, 2).unwrap();
        for _ in 0..50 {
            let deg = rng.gen_range(1..6);
            let mut c: Vec<u32> = (0..deg).map(|_| rng.gen_range(0..f.order())).collect();
            c.push(1);
            let g = Poly::new(c);
            let mut roots = poly_roots(&f, &g);
            roots.dedup();
            let zeros: Vec<u32> = (0..f.order()).filter(|&x| g.eval(&f, x) == 0).collect();
            assert_eq!(roots, zeros);
        }
    }

    #[test]
    fn roots_of_unity_compatible() {
        let f = make_field(5, 2).unwrap();
        let z24 = f.root_of_unity(24).unwrap();
        assert_eq!(f.pow(z24, 3), f.root_of_unity(8).unwrap());
        assert!(f.root_of_unity(5).is_none());
    }

    #[test]
    fn parse_roundtrip() {
        let f = make_field(5, 3).unwrap();
        for x in [0, 1, 7, 31, 124] {
            assert_eq!(f.parse_elem(&f.fmt_elem(x)), Some(x));
        }
    }

    #[test]
    fn subfield_embedding_is_a_homomorphism() {
        let small = make_field(5, 2).unwrap();
        let big = make_field(5, 4).unwrap();
        for a in 0..small.order() {
            for b in [1, 3, 9, 20] {
                let e = |x| big.embed_from(&small, x).unwrap();
                assert_eq!(e(small.mul(a, b)), big.mul(e(a), e(b)));
                assert_eq!(e(small.add(a, b)), big.add(e(a), e(b)));
            }
        }
    }
}
