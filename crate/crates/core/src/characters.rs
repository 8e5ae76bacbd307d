//! Dirichlet characters mod N with values in F_{p^r}.
//!
//! (Z/N)^× is split by CRT into cyclic components: one per odd prime power
//! (smallest primitive root), and for 2^a the components generated by −1
//! and 5. A character is an exponent vector: component i sends its
//! generator to ζ_{ord_i}^{e_i}. Labels print the vector per prime power,
//! e.g. `23:11` or `23:11,101:0`; the 2-power entry for a ≥ 3 reads
//! `8:e1.e2`.
//!
//! Field values use the compatible roots of unity ζ̄_n = g^{(q−1)/n} of the
//! working field; the characteristic-zero lift sends ζ_n to e^{2πi/n}.

use std::fmt;
use std::sync::Arc;

use crate::arith;
use crate::cyclo::Cyclo;
use crate::ff::{FieldCtx, Fq};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error("FieldTooSmall: characters mod {modulus} need r = {min_r}")]
    FieldTooSmall { modulus: u64, min_r: u32 },
    #[error("OrderDivisibleByP: character {label} has order divisible by p")]
    OrderDivisibleByP { label: String },
    #[error("BadLabel: {0}")]
    BadLabel(String),
}

#[derive(Debug, Clone)]
struct Component {
    /// Prime power this component lives in.
    prime_power: u64,
    /// Generator as a residue mod N (≡ 1 on the other prime powers).
    generator: u64,
    order: u64,
    /// Discrete log table indexed by residue mod `prime_power`.
    dlog: Vec<u32>,
}

const NO_LOG: u32 = u32::MAX;

/// Structure of (Z/N)^× with fixed generators.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    modulus: u64,
    comps: Vec<Component>,
}

impl UnitGroup {
    pub fn new(n: u64) -> Arc<Self> {
        assert!(n >= 1);
        let mut comps = Vec::new();
        for (q, a) in arith::factor(n) {
            let qa = q.pow(a);
            let lift = |g: u64| -> u64 {
                // g mod qa, 1 mod n/qa
                let rest = n / qa;
                if rest == 1 {
                    return g % qa;
                }
                let inv = arith::inv_mod(rest % qa, qa).unwrap();
                let t = ((g + qa - 1) % qa) * inv % qa;
                (1 + rest * t) % n
            };
            if q == 2 {
                if a == 1 {
                    continue;
                }
                let minus = qa - 1;
                let span = if a == 2 { 1 } else { qa / 4 };
                let mut d_minus = vec![NO_LOG; qa as usize];
                let mut d_five = vec![NO_LOG; qa as usize];
                let mut x = 1u64;
                for j in 0..span {
                    d_minus[x as usize] = 0;
                    d_five[x as usize] = j as u32;
                    d_minus[((qa - x) % qa) as usize] = 1;
                    d_five[((qa - x) % qa) as usize] = j as u32;
                    x = x * 5 % qa;
                }
                comps.push(Component { prime_power: qa, generator: lift(minus), order: 2, dlog: d_minus });
                if a >= 3 {
                    comps.push(Component { prime_power: qa, generator: lift(5), order: span, dlog: d_five });
                }
            } else {
                let g = arith::primitive_root_prime_power(q, a);
                let order = arith::euler_phi(qa);
                let mut dlog = vec![NO_LOG; qa as usize];
                let mut x = 1u64;
                for j in 0..order {
                    dlog[x as usize] = j as u32;
                    x = x * g % qa;
                }
                comps.push(Component { prime_power: qa, generator: lift(g), order, dlog });
            }
        }
        Arc::new(UnitGroup { modulus: n, comps })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Orders of the cyclic components.
    pub fn orders(&self) -> Vec<u64> {
        self.comps.iter().map(|c| c.order).collect()
    }

    pub fn generators(&self) -> Vec<u64> {
        self.comps.iter().map(|c| c.generator).collect()
    }

    /// Exponent of the group.
    pub fn exponent(&self) -> u64 {
        self.comps.iter().fold(1, |acc, c| arith::lcm(acc, c.order))
    }

    fn logs(&self, x: u64) -> Option<Vec<u64>> {
        self.comps
            .iter()
            .map(|c| {
                let l = c.dlog[(x % c.prime_power) as usize];
                (l != NO_LOG).then_some(l as u64)
            })
            .collect()
    }
}

/// A Dirichlet character with values in a finite field.
#[derive(Clone)]
pub struct DirichletChar {
    group: Arc<UnitGroup>,
    ctx: FieldCtx,
    exps: Vec<u64>,
    order: u64,
    conductor: u64,
    odd: bool,
    /// j(x) with χ̃(x) = ζ_order^{j(x)}, NO_LOG on non-units.
    logs: Vec<u32>,
    values: Vec<Fq>,
}

impl fmt::Debug for DirichletChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "χ[{} mod {}, order {}]", self.label(), self.modulus(), self.order)
    }
}

impl PartialEq for DirichletChar {
    fn eq(&self, o: &Self) -> bool {
        self.group.modulus == o.group.modulus && self.exps == o.exps && self.ctx == o.ctx
    }
}
impl Eq for DirichletChar {}

impl DirichletChar {
    /// Character with the given exponent vector; fails if its values do
    /// not lie in `ctx` or its order is divisible by p.
    pub fn from_exponents(group: &Arc<UnitGroup>, ctx: &FieldCtx, exps: &[u64]) -> Result<Self, CharError> {
        let orders = group.orders();
        if exps.len() != orders.len() {
            return Err(CharError::BadLabel(format!("expected {} exponents", orders.len())));
        }
        let exps: Vec<u64> = exps.iter().zip(&orders).map(|(&e, &o)| e % o).collect();
        let order = exps.iter().zip(&orders).fold(1, |acc, (&e, &o)| arith::lcm(acc, o / arith::gcd(e, o)));
        let n = group.modulus;
        let label = label_of(group, &exps);
        if order % ctx.p() as u64 == 0 {
            return Err(CharError::OrderDivisibleByP { label });
        }
        let Some(zeta) = ctx.root_of_unity(order) else {
            return Err(CharError::FieldTooSmall {
                modulus: n,
                min_r: arith::mult_order(ctx.p() as u64, order) as u32,
            });
        };
        let mut logs = vec![NO_LOG; n as usize];
        let mut values = vec![0; n as usize];
        let mut powers = Vec::with_capacity(order as usize);
        let mut z = 1;
        for _ in 0..order {
            powers.push(z);
            z = ctx.mul(z, zeta);
        }
        let weights: Vec<u64> = exps.iter().zip(&orders).map(|(&e, &o)| e * order / o).collect();
        for x in 0..n {
            if arith::gcd(x, n) != 1 {
                continue;
            }
            let ls = group.logs(x).expect("unit has logs");
            let j = ls.iter().zip(&weights).fold(0u128, |acc, (&l, &w)| (acc + l as u128 * w as u128) % order as u128)
                as u32;
            logs[x as usize] = j;
            values[x as usize] = powers[j as usize];
        }
        if n == 1 {
            logs[0] = 0;
            values[0] = 1;
        }
        let conductor = conductor_of(group, &exps);
        let odd = n > 2 && values[(n - 1) as usize] != 1;
        Ok(DirichletChar { group: group.clone(), ctx: ctx.clone(), exps, order, conductor, odd, logs, values })
    }

    pub fn trivial(group: &Arc<UnitGroup>, ctx: &FieldCtx) -> Self {
        Self::from_exponents(group, ctx, &vec![0; group.comps.len()]).unwrap()
    }

    pub fn parse(group: &Arc<UnitGroup>, ctx: &FieldCtx, label: &str) -> Result<Self, CharError> {
        let exps = parse_label(group, label)?;
        Self::from_exponents(group, ctx, &exps)
    }

    pub fn modulus(&self) -> u64 {
        self.group.modulus
    }
    pub fn group(&self) -> &Arc<UnitGroup> {
        &self.group
    }
    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }
    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn conductor(&self) -> u64 {
        self.conductor
    }
    pub fn is_odd(&self) -> bool {
        self.odd
    }
    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }
    pub fn label(&self) -> String {
        label_of(&self.group, &self.exps)
    }

    /// χ(n), zero on non-units.
    #[inline]
    pub fn value(&self, n: i64) -> Fq {
        self.values[n.rem_euclid(self.modulus() as i64) as usize]
    }

    /// Exponent j with χ̃(n) = ζ_order^j, or None on non-units.
    pub fn log(&self, n: i64) -> Option<u64> {
        let l = self.logs[n.rem_euclid(self.modulus() as i64) as usize];
        (l != NO_LOG).then_some(l as u64)
    }

    /// Characteristic-zero value χ̃(n) in Q(ζ_order).
    pub fn lift_value(&self, n: i64) -> Cyclo {
        match self.log(n) {
            Some(j) => Cyclo::zeta_pow(self.order, j),
            None => Cyclo::zero(self.order),
        }
    }

    pub fn mul(&self, o: &DirichletChar) -> DirichletChar {
        assert_eq!(self.modulus(), o.modulus());
        let e: Vec<u64> = self.exps.iter().zip(&o.exps).map(|(a, b)| a + b).collect();
        Self::from_exponents(&self.group, &self.ctx, &e).expect("product of representable characters")
    }

    pub fn inverse(&self) -> DirichletChar {
        let e: Vec<u64> = self.exps.iter().zip(self.group.orders()).map(|(&a, o)| (o - a) % o).collect();
        Self::from_exponents(&self.group, &self.ctx, &e).unwrap()
    }

    /// Value at n of the primitive character mod the conductor inducing χ.
    pub fn primitive_value(&self, n: i64) -> Fq {
        self.primitive_log(n).map_or(0, |j| self.ctx.pow(self.ctx.root_of_unity(self.order).unwrap(), j))
    }

    /// Log (as in [`DirichletChar::log`]) of the primitive character at n.
    pub fn primitive_log(&self, n: i64) -> Option<u64> {
        let f = self.conductor as i64;
        if arith::gcd(n.unsigned_abs(), f as u64) != 1 {
            return None;
        }
        let nm = self.modulus() as i64;
        let mut m = n.rem_euclid(f);
        while arith::gcd(m as u64, nm as u64) != 1 {
            m += f;
        }
        self.log(m)
    }

    /// Primitive values for 0..conductor, as a lookup table.
    pub fn primitive_table(&self) -> Vec<Fq> {
        (0..self.conductor as i64).map(|n| self.primitive_value(n)).collect()
    }
}

fn conductor_of(group: &UnitGroup, exps: &[u64]) -> u64 {
    let mut cond = 1u64;
    let mut i = 0;
    while i < group.comps.len() {
        let c = &group.comps[i];
        let qa = c.prime_power;
        if qa.is_multiple_of(2) {
            let e_minus = exps[i];
            let (o5, next) = if i + 1 < group.comps.len() && group.comps[i + 1].prime_power == qa {
                let c5 = &group.comps[i + 1];
                (c5.order / arith::gcd(exps[i + 1], c5.order), i + 2)
            } else {
                (1, i + 1)
            };
            if o5 > 1 {
                cond *= 4 * o5;
            } else if e_minus % 2 == 1 {
                cond *= 4;
            }
            i = next;
            continue;
        }
        let o = c.order / arith::gcd(exps[i], c.order);
        if o > 1 {
            let q = arith::factor(qa)[0].0;
            let mut qb = q;
            while o > 0 && !arith::euler_phi(qb).is_multiple_of(o) {
                qb *= q;
            }
            cond *= qb;
        }
        i += 1;
    }
    cond
}

fn label_of(group: &UnitGroup, exps: &[u64]) -> String {
    if group.comps.is_empty() {
        return "trivial".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < group.comps.len() {
        let qa = group.comps[i].prime_power;
        if i + 1 < group.comps.len() && group.comps[i + 1].prime_power == qa {
            parts.push(format!("{qa}:{}.{}", exps[i], exps[i + 1]));
            i += 2;
        } else {
            parts.push(format!("{qa}:{}", exps[i]));
            i += 1;
        }
    }
    parts.join(",")
}

/// Parses `q^a:e[,…]`, with omitted prime powers meaning exponent 0. A
/// trailing `-quadratic` or `-trivial` tag is checked against the order.
pub fn parse_label(group: &UnitGroup, label: &str) -> Result<Vec<u64>, CharError> {
    let bad = || CharError::BadLabel(label.to_string());
    let (body, tag) = match label.split_once('-') {
        Some((b, t)) if !b.is_empty() => (b, Some(t)),
        _ => (label, None),
    };
    let mut exps = vec![0u64; group.comps.len()];
    if body != "trivial" && body != "1" {
        for part in body.split(',') {
            let (m, e) = part.split_once(':').ok_or_else(bad)?;
            let m: u64 = m.trim().parse().map_err(|_| bad())?;
            let idx = group.comps.iter().position(|c| c.prime_power == m).ok_or_else(bad)?;
            let vals: Vec<&str> = e.split('.').collect();
            let two_part = idx + 1 < group.comps.len() && group.comps[idx + 1].prime_power == m;
            if vals.len() != if two_part { 2 } else { 1 } {
                return Err(bad());
            }
            for (k, v) in vals.iter().enumerate() {
                exps[idx + k] = v.trim().parse().map_err(|_| bad())?;
            }
        }
    }
    if let Some(tag) = tag {
        let orders = group.orders();
        let order = exps.iter().zip(&orders).fold(1, |acc, (&e, &o)| arith::lcm(acc, o / arith::gcd(e % o, o)));
        let ok = match tag {
            "quadratic" => order == 2,
            "trivial" => order == 1,
            _ => false,
        };
        if !ok {
            return Err(bad());
        }
    }
    Ok(exps)
}

/// All characters of order prime to p, provided the working field holds
/// their values; otherwise reports the smallest sufficient r.
pub fn enumerate_chars(n: u64, ctx: &FieldCtx) -> Result<Vec<DirichletChar>, CharError> {
    let group = UnitGroup::new(n);
    let p = ctx.p() as u64;
    let mut e = group.exponent();
    while e.is_multiple_of(p) {
        e /= p;
    }
    if !(ctx.order() as u64 - 1).is_multiple_of(e) {
        return Err(CharError::FieldTooSmall { modulus: n, min_r: arith::mult_order(p, e) as u32 });
    }
    Ok(chars_with(&group, ctx, |_| true))
}

/// Characters of order prime to p whose values lie in the working field.
pub fn representable_chars(n: u64, ctx: &FieldCtx) -> Vec<DirichletChar> {
    chars_with(&UnitGroup::new(n), ctx, |_| true)
}

fn chars_with(group: &Arc<UnitGroup>, ctx: &FieldCtx, keep: impl Fn(&DirichletChar) -> bool) -> Vec<DirichletChar> {
    let q1 = ctx.order() as u64 - 1;
    let p = ctx.p() as u64;
    let per: Vec<Vec<u64>> = group
        .orders()
        .into_iter()
        .map(|o| {
            (0..o)
                .filter(|&e| {
                    let oe = o / arith::gcd(e, o);
                    q1.is_multiple_of(oe) && !oe.is_multiple_of(p)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per.len()];
    loop {
        let exps: Vec<u64> = idx.iter().zip(&per).map(|(&i, v)| v[i]).collect();
        if let Ok(c) = DirichletChar::from_exponents(group, ctx, &exps) {
            if keep(&c) {
                out.push(c);
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < per[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// The quadratic character mod |D| attached to a negative fundamental
/// discriminant, expressed on the unit group mod `n` (|D| divides n).
pub fn kronecker_char(d: i64, n: u64, ctx: &FieldCtx) -> Option<DirichletChar> {
    let group = UnitGroup::new(n);
    let gens = group.generators();
    let orders = group.orders();
    let exps: Vec<u64> =
        gens.iter().zip(&orders).map(|(&g, &o)| if arith::kronecker(d, g) == 1 { 0 } else { o / 2 }).collect();
    let c = DirichletChar::from_exponents(&group, ctx, &exps).ok()?;
    // Confirm on all units below n.
    (1..n as i64)
        .filter(|&x| arith::gcd(x as u64, n) == 1)
        .all(|x| c.value(x) == ctx.from_int(arith::kronecker(d, x as u64) as i64))
        .then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn field_too_small_reports_min_degree() {
        let f = make_field(5, 1).unwrap();
        assert_eq!(enumerate_chars(23, &f).unwrap_err(), CharError::FieldTooSmall { modulus: 23, min_r: 5 });
        let f5 = make_field(5, 5).unwrap();
        assert_eq!(enumerate_chars(23, &f5).unwrap().len(), 22);
        assert_eq!(enumerate_chars(1, &f).unwrap().len(), 1);
        assert_eq!(representable_chars(23, &f).len(), 2);
    }

    #[test]
    fn quadratic_character_mod_23() {
        let f = make_field(5, 1).unwrap();
        let g = UnitGroup::new(23);
        let chi = DirichletChar::parse(&g, &f, "23:11-quadratic").unwrap();
        assert_eq!(chi.value(2), 1);
        assert_eq!(chi.value(-1), 4);
        assert_eq!(chi.value(1), 1);
        assert_eq!(chi.value(23), 0);
        assert!(chi.is_odd());
        assert_eq!(chi.conductor(), 23);
        assert_eq!(chi.label(), "23:11");
        assert_eq!(kronecker_char(-23, 23, &f).unwrap(), chi);
        assert!(DirichletChar::parse(&g, &f, "23:2-quadratic").is_err());
        assert!(DirichletChar::parse(&g, &f, "29:1").is_err());
    }

    #[test]
    fn multiplicative_and_counts() {
        let f = make_field(5, 2).unwrap();
        for n in [1u64, 8, 15, 16, 23, 35, 48] {
            let chars = enumerate_chars(n, &f);
            let Ok(chars) = chars else { continue };
            let phi = arith::euler_phi(n);
            let mut prime_to_p = phi;
            while prime_to_p.is_multiple_of(5) {
                prime_to_p /= 5;
            }
            assert_eq!(chars.len() as u64, prime_to_p, "N = {n}");
            for c in &chars {
                for a in 0..n as i64 {
                    for b in 0..n as i64 {
                        assert_eq!(c.value(a * b), f.mul(c.value(a), c.value(b)));
                    }
                }
                assert_eq!(c.is_odd(), n > 2 && c.value(-1) == f.from_int(-1));
                assert_eq!(DirichletChar::parse(c.group(), &f, &c.label()).unwrap(), *c);
            }
        }
    }

    #[test]
    fn conductors_by_brute_force() {
        let f = make_field(5, 2).unwrap();
        for n in [9u64, 12, 16, 20, 21, 24] {
            for c in enumerate_chars(n, &f).unwrap() {
                // smallest d | n with χ trivial on units ≡ 1 mod d
                let brute = arith::divisors(n)
                    .into_iter()
                    .find(|&d| {
                        (0..n).filter(|&x| arith::gcd(x, n) == 1 && x % d == 1 % d).all(|x| c.value(x as i64) == 1)
                    })
                    .unwrap();
                assert_eq!(c.conductor(), brute, "{c:?}");
            }
        }
    }

    #[test]
    fn lift_matches_reduction() {
        let f = make_field(5, 1).unwrap();
        for c in representable_chars(101, &f) {
            let z = f.root_of_unity(c.order()).unwrap();
            for n in 1..101 {
                assert_eq!(f.pow(z, c.log(n).unwrap()), c.value(n));
            }
        }
    }
}
