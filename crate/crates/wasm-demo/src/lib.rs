//! Browser bindings: each call returns a JSON string for the page to render.

use serde_json::json;
use wasm_bindgen::prelude::*;

use theta_doubler::dihedral::{splitting_poly, weight_one_newform};
use theta_doubler::ff::make_field;
use theta_doubler::hecke::component_prime_bound;
use theta_doubler::primesearch::sieve;
use theta_doubler::weightone::{
    dihedral_component, dihedral_space, dihedral_target, doubling_report, PipelineOptions, WeightOneError,
};

fn js<E: std::fmt::Display>(e: E) -> JsError {
    JsError::new(&e.to_string())
}

/// q-expansion of the weight-one newform of discriminant `d`, with
/// coefficients written as polynomials in ζ_h.
#[wasm_bindgen]
pub fn theta_form(d: i32, prec: u32) -> Result<String, JsError> {
    let f = weight_one_newform(d as i64, (prec as usize).clamp(2, 2000)).map_err(js)?;
    let coeffs: Vec<String> = match f.integer_coeffs() {
        Some(z) => z.iter().map(i64::to_string).collect(),
        None => f.coeffs.iter().map(|c| cyc_string(c)).collect(),
    };
    Ok(json!({ "d": d, "class_number": f.h, "multiplicative": f.is_multiplicative(), "coeffs": coeffs }).to_string())
}

fn cyc_string(c: &[i64]) -> String {
    let mut out = String::new();
    for (j, &x) in c.iter().enumerate().filter(|(_, &x)| x != 0) {
        let mono = match j {
            0 => String::new(),
            1 => "ζ".to_string(),
            _ => format!("ζ^{j}"),
        };
        let mag = if x.abs() == 1 && j > 0 { String::new() } else { x.abs().to_string() };
        match (out.is_empty(), x < 0) {
            (true, true) => out.push('-'),
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
            (true, false) => {}
        }
        out.push_str(&mag);
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Primes ℓ ≡ 1 mod p split completely in the ring class field of Q(√d).
#[wasm_bindgen]
pub fn auxiliary_primes(p: u32, d: i32, limit: u32, count: u32) -> Result<String, JsError> {
    let poly = splitting_poly(d as i64).map_err(js)?;
    let s = sieve(p as u64, &poly, d.unsigned_abs() as u64, limit.min(1_000_000) as u64, count.min(100) as usize);
    serde_json::to_string(&s).map_err(js)
}

/// Count identity, doubled submodule and pairing for the dihedral form of
/// discriminant `d` at level |d|, weight p.
#[wasm_bindgen]
pub fn doubling(d: i32, p: u32) -> Result<String, JsError> {
    let (d, p) = (d as i64, p as u64);
    let level = d.unsigned_abs();
    let mut r = 1;
    loop {
        let ctx = make_field(p, r).map_err(js)?;
        let run = || -> Result<_, WeightOneError> {
            let s = dihedral_space(d, level, &ctx)?;
            let bound = component_prime_bound(&s, 13);
            let t = dihedral_target(d, &ctx, bound as usize + 1)?;
            let c = dihedral_component(&s, &t.reduction, PipelineOptions::default())?;
            doubling_report(&c)
        };
        match run() {
            Ok(rep) => return serde_json::to_string(&rep).map_err(js),
            Err(WeightOneError::FieldTooSmall { min_r }) if min_r > r && min_r <= 8 => r = min_r,
            Err(WeightOneError::Hecke(theta_doubler::hecke::HeckeError::FieldTooSmall { min_r, .. }))
                if min_r > r && min_r <= 8 =>
            {
                r = min_r
            }
            Err(e) => return Err(js(e)),
        }
    }
}
