//! Single simulation driver and its output files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::json;

use super::config::RunConfig;
use super::ic::{ExactSolution, InitialCondition};
use crate::detector::DetectorOptions;
use crate::dg::{Boundary, FieldState, Mesh1D, ReferenceElement};
use crate::error::{Error, Result};
use crate::oracles::error_norm;
use crate::pde::{Discretization, ProblemDefinition, ProblemKind};
use crate::solver::{simulate, RecordOptions, SimulationOutput};
use crate::timeint::StepController;
use crate::viscosity::ViscosityConfig;

/// Everything needed to start one simulation.
pub struct Setup {
    pub disc: Discretization<f64>,
    pub viscosity: ViscosityConfig<f64>,
    pub ctrl: StepController<f64>,
    pub initial: FieldState<f64>,
    pub ic: InitialCondition,
    pub exact: Option<ExactSolution>,
}

pub fn component_names(kind: ProblemKind) -> &'static [&'static str] {
    match kind {
        ProblemKind::Advection => &["u"],
        ProblemKind::Wave => &["u", "v"],
        ProblemKind::Euler => &["rho", "rho_u", "E"],
    }
}

pub fn viscosity_config(cfg: &RunConfig) -> ViscosityConfig<f64> {
    ViscosityConfig {
        enable: cfg.viscosity_enable,
        c_nu: cfg.c_nu,
        noise_floor: cfg.noise_floor,
        detector: DetectorOptions {
            baseline: cfg.baseline,
            normalize_baseline: cfg.normalize_baseline,
            skyline: cfg.skyline,
            s_max: cfg.s_max,
        },
    }
}

pub fn controller(cfg: &RunConfig) -> Result<StepController<f64>> {
    let ctrl = StepController { rtol: cfg.rtol, atol: cfg.atol, cfl: cfg.cfl, dt_init: cfg.dt_init, ..Default::default() };
    ctrl.validate()?;
    Ok(ctrl)
}

/// Builds the discretization for degree `n` on `k` elements.
pub fn setup_with(cfg: &RunConfig, n: usize, k: usize) -> Result<Setup> {
    let ic = InitialCondition::from_config(cfg)?;
    let (a, b) = cfg.domain;
    let mesh = if cfg.left_bc == Boundary::Periodic {
        Mesh1D::periodic(a, b, k)?
    } else {
        Mesh1D::uniform(a, b, k, cfg.left_bc, cfg.right_bc)?
    };
    let elem = ReferenceElement::new(n).map_err(|e| Error::config("dg.N", e.to_string()))?;
    let ff = ic.farfield(cfg);
    let problem = match cfg.kind {
        ProblemKind::Advection => ProblemDefinition::advection(cfg.velocity, cfg.final_time),
        ProblemKind::Wave => ProblemDefinition::wave(cfg.wave_speed, cfg.final_time),
        ProblemKind::Euler => ProblemDefinition::euler(cfg.gamma, cfg.final_time),
    }
    .with_farfield(ff[0], ff[1]);
    problem.validate()?;
    let disc = Discretization::new(problem, mesh, elem)?;
    let initial = disc.interpolate(|x| ic.eval(x, cfg));
    let exact = ic.exact(cfg)?;
    Ok(Setup { disc, viscosity: viscosity_config(cfg), ctrl: controller(cfg)?, initial, ic, exact })
}

pub fn setup(cfg: &RunConfig) -> Result<Setup> {
    setup_with(cfg, cfg.n, cfg.k)
}

/// Per-component error norms against the exact solution.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorNorms {
    pub components: Vec<String>,
    #[serde(rename = "L1")]
    pub l1: Vec<f64>,
    #[serde(rename = "L2")]
    pub l2: Vec<f64>,
}

pub fn error_norms(
    state: &FieldState<f64>,
    mesh: &Mesh1D<f64>,
    elem: &ReferenceElement<f64>,
    kind: ProblemKind,
    exact: &ExactSolution,
) -> ErrorNorms {
    let t = state.time;
    let names = component_names(kind);
    let per = |p: u32| -> Vec<f64> {
        (0..names.len()).map(|eq| error_norm(state, eq, mesh, elem, |x| exact.eval(x, t)[eq], p)).collect()
    };
    ErrorNorms { components: names.iter().map(|s| s.to_string()).collect(), l1: per(1), l2: per(2) }
}

/// Runs the configured simulation without touching the file system.
pub fn run_simulation(cfg: &RunConfig, record: &RecordOptions<f64>) -> Result<(Setup, SimulationOutput<f64>)> {
    let s = setup(cfg)?;
    let disc = Discretization::new(s.disc.problem.clone(), s.disc.mesh.clone(), s.disc.elem.clone())?;
    let out = simulate(disc, s.viscosity, &s.ctrl, s.initial.clone(), record)?;
    Ok((s, out))
}

/// Reference coordinates of the output samples: `m` equispaced interior
/// points plus both element ends.
pub fn sample_points(m: usize) -> Vec<f64> {
    let mut r = Vec::with_capacity(m + 2);
    r.push(-1.0);
    r.extend((0..m).map(|j| -1.0 + 2.0 * (j as f64 + 0.5) / m as f64));
    r.push(1.0);
    r
}

fn write_state(path: &Path, setup: &Setup, state: &FieldState<f64>, samples: usize) -> Result<()> {
    let names = component_names(setup.disc.problem.kind);
    let mut s = String::from("element,x");
    for n in names {
        write!(s, ",{n}").unwrap();
    }
    if setup.exact.is_some() {
        for n in names {
            write!(s, ",exact_{n}").unwrap();
        }
    }
    s.push('\n');
    let (mesh, elem) = (&setup.disc.mesh, &setup.disc.elem);
    let rs = sample_points(samples);
    for k in 0..mesh.num_elements() {
        for &r in &rs {
            let x = mesh.map_to_physical(k, r);
            write!(s, "{k},{x:e}").unwrap();
            for eq in 0..names.len() {
                write!(s, ",{:e}", elem.evaluate(state.element(eq, k), r)).unwrap();
            }
            if let Some(ex) = &setup.exact {
                for v in ex.eval(x, state.time) {
                    write!(s, ",{v:e}").unwrap();
                }
            }
            s.push('\n');
        }
    }
    fs::write(path, s)?;
    Ok(())
}

fn write_steps(path: &Path, out: &SimulationOutput<f64>) -> Result<()> {
    let mut s = String::from("step,t,dt,err,nu_max,accepted\n");
    for r in &out.log {
        writeln!(s, "{},{:e},{:e},{:e},{:e},{}", r.step, r.t, r.dt, r.err, r.nu_max, u8::from(r.accepted)).unwrap();
    }
    fs::write(path, s)?;
    Ok(())
}

fn write_viscosity(path: &Path, out: &SimulationOutput<f64>, k: usize, stride: usize) -> Result<()> {
    let mut s = String::from("t");
    for e in 0..k {
        write!(s, ",nu_{e}").unwrap();
    }
    s.push('\n');
    let last = out.viscosity.len().saturating_sub(1);
    for (i, v) in out.viscosity.iter().enumerate() {
        if i % stride != 0 && i != last {
            continue;
        }
        write!(s, "{:e}", v.t).unwrap();
        for nu in &v.raw {
            write!(s, ",{nu:e}").unwrap();
        }
        s.push('\n');
    }
    fs::write(path, s)?;
    Ok(())
}

/// Outcome of `cmd_run`; mirrors `summary.json`.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub status: String,
    pub failure: Option<Failure>,
    pub problem: String,
    pub preset: Option<String>,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub h: f64,
    pub final_time: Option<f64>,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evaluations: usize,
    pub activated_steps: usize,
    pub errors: Option<ErrorNorms>,
    pub runtime_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub stage: String,
    pub message: String,
}

fn write_summary(dir: &Path, cfg: &RunConfig, summary: &RunSummary) -> Result<()> {
    let mut v = serde_json::to_value(summary)?;
    v["config"] = cfg.snapshot();
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&v)? + "\n")?;
    Ok(())
}

/// Runs one simulation and writes `state.csv`, `steps.csv`, `viscosity.csv`
/// and `summary.json` into `dir`. A solver failure still writes the summary
/// before the error is returned.
pub fn cmd_run(cfg: &RunConfig, dir: &Path) -> Result<RunSummary> {
    fs::create_dir_all(dir)?;
    let start = Instant::now();
    let mut summary = RunSummary {
        status: "ok".into(),
        failure: None,
        problem: cfg.kind.name().into(),
        preset: cfg.preset.clone(),
        n: cfg.n,
        k: cfg.k,
        h: (cfg.domain.1 - cfg.domain.0) / cfg.k as f64,
        final_time: None,
        accepted_steps: 0,
        rejected_steps: 0,
        rhs_evaluations: 0,
        activated_steps: 0,
        errors: None,
        runtime_seconds: 0.0,
    };
    let setup = setup(cfg)?;
    let disc = Discretization::new(setup.disc.problem.clone(), setup.disc.mesh.clone(), setup.disc.elem.clone())?;
    let record = RecordOptions { viscosity_history: true, snapshot_times: Vec::new() };
    let out = match simulate(disc, setup.viscosity, &setup.ctrl, setup.initial.clone(), &record) {
        Ok(out) => out,
        Err(e) => {
            summary.status = "failed".into();
            summary.failure = Some(Failure { stage: "integration".into(), message: e.to_string() });
            summary.runtime_seconds = start.elapsed().as_secs_f64();
            write_summary(dir, cfg, &summary)?;
            return Err(e);
        }
    };
    summary.final_time = Some(out.state.time);
    summary.accepted_steps = out.log.iter().filter(|r| r.accepted).count();
    summary.rejected_steps = out.log.len() - summary.accepted_steps;
    summary.rhs_evaluations = out.rhs_evaluations;
    summary.activated_steps = out.activated_steps;
    summary.errors = setup
        .exact
        .as_ref()
        .map(|ex| error_norms(&out.state, &setup.disc.mesh, &setup.disc.elem, cfg.kind, ex));

    write_state(&dir.join("state.csv"), &setup, &out.state, cfg.sample_points)?;
    write_steps(&dir.join("steps.csv"), &out)?;
    write_viscosity(&dir.join("viscosity.csv"), &out, cfg.k, cfg.viscosity_stride)?;
    summary.runtime_seconds = start.elapsed().as_secs_f64();
    write_summary(dir, cfg, &summary)?;
    Ok(summary)
}

/// JSON schema sketch of `summary.json`, shipped for consumers.
pub fn summary_schema() -> serde_json::Value {
    json!({
        "status": "\"ok\" | \"failed\"",
        "failure": "null | { stage, message }",
        "problem": "advection | wave | euler",
        "preset": "string | null",
        "N": "polynomial degree",
        "K": "number of elements",
        "h": "element size",
        "final_time": "time reached, null on failure",
        "accepted_steps": "integer",
        "rejected_steps": "integer",
        "rhs_evaluations": "integer",
        "activated_steps": "accepted steps with any element viscosity",
        "errors": "null | { components, L1: [..], L2: [..] } against the exact solution",
        "runtime_seconds": "wall clock",
        "config": "flattened dotted-key configuration"
    })
}
