//! Level-raised run at (D, p, ℓ) = (−23, 5, 101) with timings.
use std::time::Instant;

use theta_doubler::ff::make_field;
use theta_doubler::weightone::{dihedral_space, nonlift_report, PipelineOptions};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().unwrap()).collect();
    let (p, ell) = (args.first().copied().unwrap_or(5), args.get(1).copied().unwrap_or(101));
    let f = make_field(p, 1).unwrap();
    let t = Instant::now();
    let space = dihedral_space(-23, 23 * ell, &f).unwrap();
    eprintln!("basis dim {} in {:?}", space.dim(), t.elapsed());
    let r = nonlift_report(-23, &space, ell, PipelineOptions::default()).unwrap();
    eprintln!("report in {:?}", t.elapsed());
    println!("{}", serde_json::to_string_pretty(&r).unwrap());
}
