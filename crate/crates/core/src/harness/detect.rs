//! Canonical detector corpus on a single unit-length element.
//!
//! "Offset" variants move the non-smooth point to r = 0.85 in reference
//! coordinates, near the right edge of the element.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::detector::{estimate_smoothness_with, DetectorOptions, SmoothnessReport};
use crate::dg::ReferenceElement;
use crate::error::{Error, Result};

pub const CORPUS: &[&str] = &[
    "jump",
    "offset-jump",
    "kink",
    "offset-kink",
    "trunc-square",
    "offset-trunc-square",
    "top-mode",
    "smooth-1",
    "smooth-2",
    "noise",
    "const-plus-noise",
];

pub const EDGE_OFFSET: f64 = 0.85;
/// Physical element length used for the corpus.
pub const CORPUS_H: f64 = 1.0;
const NOISE_SEED: u64 = 20_160_817;
const SMALL_NOISE: f64 = 1e-8;

fn step(r: f64) -> f64 {
    if r >= 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Nodal values of a corpus function on the GLL nodes of `elem`.
pub fn corpus_nodal(name: &str, elem: &ReferenceElement<f64>) -> Result<Vec<f64>> {
    let nodes = elem.nodes();
    let map = |f: &dyn Fn(f64) -> f64| nodes.iter().map(|&r| f(r)).collect::<Vec<f64>>();
    let d = EDGE_OFFSET;
    let noise = |amp: f64, base: f64| {
        let mut rng = StdRng::seed_from_u64(NOISE_SEED);
        nodes.iter().map(|_| base + amp * rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>()
    };
    Ok(match name {
        "jump" => map(&step),
        "offset-jump" => map(&|r| step(r - d)),
        "kink" => map(&|r| r * step(r)),
        "offset-kink" => map(&|r| (r - d) * step(r - d)),
        "trunc-square" => map(&|r| r * r * step(r)),
        "offset-trunc-square" => map(&|r| (r - d) * (r - d) * step(r - d)),
        "top-mode" => {
            let mut modal = vec![0.0; elem.np()];
            modal[elem.degree()] = 1.0;
            elem.modal_to_nodal(&modal)
        }
        "smooth-1" => map(&|r| (3.0 + (1.3 * r).sin()).cos()),
        "smooth-2" => map(&|r| (std::f64::consts::PI * r).sin()),
        "noise" => noise(1.0, 0.0),
        "const-plus-noise" => noise(SMALL_NOISE, 1.0),
        other => return Err(Error::UnknownFunction(other.to_string())),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectReport {
    pub function: String,
    pub degree: usize,
    pub h: f64,
    /// Plain fit of the raw spectrum.
    pub raw: SmoothnessReport<f64>,
    /// Skyline only ("SL").
    pub skyline: SmoothnessReport<f64>,
    /// Baseline decay then skyline ("BD+SL").
    pub baseline_skyline: SmoothnessReport<f64>,
}

/// Runs the three detector variants on one corpus function.
pub fn detect(name: &str, degree: usize) -> Result<DetectReport> {
    if degree < 2 {
        return Err(Error::InvalidArgument("detector needs N >= 2".into()));
    }
    let elem = ReferenceElement::<f64>::new(degree)?;
    let nodal = corpus_nodal(name, &elem)?;
    let run = |opts: DetectorOptions<f64>| estimate_smoothness_with(&elem, &nodal, CORPUS_H, &opts);
    Ok(DetectReport {
        function: name.to_string(),
        degree,
        h: CORPUS_H,
        raw: run(DetectorOptions::raw()),
        skyline: run(DetectorOptions::skyline_only()),
        baseline_skyline: run(DetectorOptions::default()),
    })
}
