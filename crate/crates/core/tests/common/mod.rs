#![allow(dead_code)]

use corrconc::ModelParams;

pub const RHOS: [f64; 8] = [0.0, 0.25, -0.25, 0.56, 0.75, -0.75, 0.95, -0.95];
pub const NS: [u32; 5] = [3, 5, 10, 30, 100];

pub fn p(rho: f64, n: u32) -> ModelParams {
    ModelParams::new(rho, n).unwrap()
}

pub fn grid() -> impl Iterator<Item = ModelParams> {
    NS.into_iter().flat_map(|n| RHOS.into_iter().map(move |rho| p(rho, n)))
}
