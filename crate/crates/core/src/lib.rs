pub mod arith;
pub mod characters;
pub mod cli;
pub mod cyclo;
pub mod dihedral;
pub mod eisbasis;
pub mod ff;
pub mod hecke;
pub mod linalg;
pub mod localalg;
mod ntt;
pub mod primesearch;
pub mod qseries;
pub mod weightone;
