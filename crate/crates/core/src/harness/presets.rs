//! Shipped benchmark presets.
//!
//! Riemann data follows the usual literature conventions: Sod's tube
//! (1, 0, 1) / (0.125, 0, 0.1) to T = 0.25 and Lax's tube
//! (0.445, 0.698, 3.528) / (0.5, 0, 0.571) to T = 0.13, both on (0, 1) with
//! the diaphragm at 0.5. Shu–Osher runs on (−5, 5) to T = 1.8 with the shock
//! at x = −4; it has no closed-form solution, so its schedule compares
//! against a fine self-convergence run.

use toml::Value;

use super::config::{arr, iarr, FlatConfig};

pub const PRESETS: &[&str] =
    &["advection-box", "smooth-sine", "wave-neumann", "sod", "sod-n5-k80", "lax", "shu-osher"];

fn table(entries: Vec<(&str, Value)>) -> FlatConfig {
    entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn s(x: &str) -> Value {
    Value::String(x.into())
}

fn f(x: f64) -> Value {
    Value::Float(x)
}

fn i(x: i64) -> Value {
    Value::Integer(x)
}

fn riemann(left: &[f64], right: &[f64], t: f64) -> Vec<(&'static str, Value)> {
    vec![
        ("problem.kind", s("euler")),
        ("problem.ic", s("riemann")),
        ("problem.T", f(t)),
        ("problem.gamma", f(1.4)),
        ("ic.left", arr(left)),
        ("ic.right", arr(right)),
        ("ic.x0", f(0.5)),
        ("mesh.domain", arr(&[0.0, 1.0])),
        ("mesh.left_bc", s("farfield")),
        ("mesh.right_bc", s("farfield")),
        // subsonic Euler runs use half the default viscosity scale
        ("viscosity.c_nu", f(0.5)),
    ]
}

/// Flat keys of a named preset.
pub fn preset(name: &str) -> Option<FlatConfig> {
    let mut e = match name {
        "advection-box" => vec![
            ("problem.kind", s("advection")),
            ("problem.ic", s("box")),
            ("problem.T", f(2.0)),
            ("problem.velocity", f(1.0)),
            ("ic.box", arr(&[0.0, 5.0])),
            ("mesh.domain", arr(&[0.0, 10.0])),
            ("mesh.K", i(20)),
            ("dg.N", i(10)),
        ],
        "smooth-sine" => vec![
            ("problem.kind", s("advection")),
            ("problem.ic", s("sine")),
            ("problem.T", f(1.0)),
            ("mesh.domain", arr(&[0.0, 1.0])),
            ("mesh.K", i(4)),
            ("dg.N", i(8)),
            ("time.rtol", f(1e-11)),
            ("time.atol", f(1e-13)),
            ("convergence.N", iarr(&[8])),
            ("convergence.K", iarr(&[2, 4, 8])),
        ],
        "wave-neumann" => vec![
            ("problem.kind", s("wave")),
            ("problem.ic", s("wave-box")),
            ("problem.T", f(0.6)),
            ("problem.c", f(1.0)),
            ("mesh.domain", arr(&[-1.0, 1.0])),
            ("mesh.left_bc", s("neumann")),
            ("mesh.right_bc", s("neumann")),
            ("mesh.K", i(20)),
            ("dg.N", i(4)),
            ("time.rtol", f(1e-8)),
            ("time.atol", f(1e-10)),
            ("convergence.N", iarr(&[4])),
            ("convergence.K", iarr(&[20, 40, 80])),
        ],
        "sod" => {
            let mut e = riemann(&[1.0, 0.0, 1.0], &[0.125, 0.0, 0.1], 0.25);
            e.extend([
                ("mesh.K", i(20)),
                ("dg.N", i(4)),
                ("convergence.N", iarr(&[4, 5])),
                ("convergence.K", iarr(&[20, 40, 80])),
            ]);
            e
        }
        "sod-n5-k80" => {
            let mut e = riemann(&[1.0, 0.0, 1.0], &[0.125, 0.0, 0.1], 0.25);
            e.extend([("mesh.K", i(80)), ("dg.N", i(5))]);
            e
        }
        "lax" => {
            let mut e = riemann(&[0.445, 0.698, 3.528], &[0.5, 0.0, 0.571], 0.13);
            e.extend([("mesh.K", i(80)), ("dg.N", i(5))]);
            e
        }
        "shu-osher" => vec![
            ("problem.kind", s("euler")),
            ("problem.ic", s("shu-osher")),
            ("problem.T", f(1.8)),
            ("problem.gamma", f(1.4)),
            ("ic.x0", f(-4.0)),
            ("mesh.domain", arr(&[-5.0, 5.0])),
            ("mesh.left_bc", s("farfield")),
            ("mesh.right_bc", s("farfield")),
            ("mesh.K", i(80)),
            ("dg.N", i(5)),
            ("output.viscosity_stride", i(10)),
            ("convergence.N", iarr(&[5])),
            ("convergence.K", iarr(&[80, 160, 320])),
            ("convergence.reference", s("self")),
            ("convergence.reference_K", i(2000)),
            ("convergence.reference_N", i(5)),
        ],
        _ => return None,
    };
    e.push(("preset", s(name)));
    Some(table(e))
}
