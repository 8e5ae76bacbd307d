//! Property checks shared by the proptest suites and the acceptance run.
#![allow(dead_code)]

use proptest::prelude::*;
use theta_doubler::ff::{make_field, FieldCtx, Fq};
use theta_doubler::localalg::{dual_number_check, DualMat, DualNumber, DualNumberRep};
use theta_doubler::qseries::QExpansion;

/// A field F_{p^r} with p ∈ {5, 7, 11, 13}, r ≤ 2, and two raw series.
#[derive(Debug, Clone)]
pub struct SeriesPair {
    pub p: u64,
    pub r: u32,
    pub f: Vec<Vec<u32>>,
    pub g: Vec<Vec<u32>>,
}

pub fn series_pair() -> impl Strategy<Value = SeriesPair> {
    (prop::sample::select(vec![5u64, 7, 11, 13]), 1u32..=2, 1usize..80).prop_flat_map(|(p, r, n)| {
        let elem = prop::collection::vec(0..p as u32, r as usize);
        let series = prop::collection::vec(elem, n);
        (series.clone(), series).prop_map(move |(f, g)| SeriesPair { p, r, f, g })
    })
}

pub fn realise(s: &SeriesPair) -> (FieldCtx, QExpansion, QExpansion) {
    let ctx = make_field(s.p, s.r).unwrap();
    let conv = |v: &[Vec<u32>]| QExpansion::new(&ctx, v.iter().map(|c| ctx.from_coeffs(c)).collect());
    let (f, g) = (conv(&s.f), conv(&s.g));
    (ctx, f, g)
}

/// θ(Vf) = 0 and θ(fg) = θf·g + f·θg.
pub fn theta_rules(s: &SeriesPair) -> Result<(), String> {
    let (_, f, g) = realise(s);
    let p = s.p as usize;
    let vf = f.v_op(p, p * f.prec()).unwrap();
    if !vf.theta().is_zero() {
        return Err("θ∘V ≠ 0".into());
    }
    let lhs = f.mul(&g).unwrap().theta();
    let rhs = f.theta().mul(&g).unwrap().add(&f.mul(&g.theta()).unwrap()).unwrap();
    if lhs != rhs {
        return Err("θ is not a derivation".into());
    }
    Ok(())
}

/// V(f + g) = Vf + Vg, V(fg) = Vf·Vg, V(1) = 1.
pub fn v_ring_hom(s: &SeriesPair) -> Result<(), String> {
    let (ctx, f, g) = realise(s);
    let p = s.p as usize;
    let n = p * f.prec();
    let v = |h: &QExpansion| h.v_op(p, n).unwrap();
    if v(&f.add(&g).unwrap()) != v(&f).add(&v(&g)).unwrap() {
        return Err("V not additive".into());
    }
    if v(&f.mul(&g).unwrap()) != v(&f).mul(&v(&g)).unwrap() {
        return Err("V not multiplicative".into());
    }
    if v(&QExpansion::one(&ctx, f.prec())) != QExpansion::one(&ctx, n) {
        return Err("V(1) ≠ 1".into());
    }
    Ok(())
}

/// A representation of ⟨τ, φ⟩ over F_p[ε] with trivial reduction: every
/// entry of ρ(τ) − 1, ρ(φ) − 1 and α − 1 lies in (ε).
#[derive(Debug, Clone)]
pub struct RawRep {
    pub p: u64,
    pub tau: [u32; 4],
    pub phi: [u32; 4],
    pub alpha: u32,
}

pub fn trivial_reduction_rep() -> impl Strategy<Value = RawRep> {
    prop::sample::select(vec![5u64, 7, 11]).prop_flat_map(|p| {
        let e = 0..p as u32;
        (prop::array::uniform4(e.clone()), prop::array::uniform4(e.clone()), e)
            .prop_map(move |(tau, phi, alpha)| RawRep { p, tau, phi, alpha })
    })
}

fn lift(ctx: &FieldCtx, eps: [u32; 4]) -> DualMat {
    let d = |i: usize, diag: bool| DualNumber::new(if diag { 1 } else { 0 }, ctx.from_int(eps[i] as i64));
    [[d(0, true), d(1, false)], [d(2, false), d(3, true)]]
}

pub fn realise_rep(r: &RawRep) -> DualNumberRep {
    let ctx = make_field(r.p, 1).unwrap();
    DualNumberRep {
        tau: lift(&ctx, r.tau),
        phi: lift(&ctx, r.phi),
        alpha: DualNumber::new(1, ctx.from_int(r.alpha as i64)),
        ctx,
    }
}

/// The relation check succeeds exactly when Tr ρ(τ) = 2.
pub fn dual_verdict_is_trace(r: &RawRep) -> Result<(), String> {
    let rep = realise_rep(r);
    let c = dual_number_check(&rep);
    let two: Fq = rep.ctx.from_int(2);
    let tr = rep.ctx.add(rep.tau[0][0].a, rep.tau[1][1].a);
    let tr_eps = rep.ctx.add(rep.tau[0][0].b, rep.tau[1][1].b);
    let trace_two = tr == two && tr_eps == 0;
    if c.verdict != trace_two {
        return Err(format!("verdict {} but trace two {}", c.verdict, trace_two));
    }
    Ok(())
}
