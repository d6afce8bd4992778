//! Grid convergence studies over an (N, K) schedule.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Reference, RunConfig, Schedule};
use super::run::setup_with;
use crate::dg::{FieldState, Mesh1D, ReferenceElement};
use crate::error::{Error, Result};
use crate::oracles::{eoc_fit, error_norm};
use crate::pde::Discretization;
use crate::solver::{simulate, RecordOptions};

#[derive(Clone, Debug, Serialize)]
pub struct Cell {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub h: f64,
    pub error: Option<f64>,
    pub failure: Option<String>,
}

/// Rows are refinement levels, columns are degrees.
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceTable {
    pub degrees: Vec<usize>,
    pub elements: Vec<usize>,
    pub hs: Vec<f64>,
    pub cells: Vec<Vec<Cell>>,
    /// Rate in h for each degree.
    pub eoc_h: Vec<Option<f64>>,
    /// Rate in N for each level: `−d log e / d log N`.
    pub eoc_n: Vec<Option<f64>>,
}

impl ConvergenceTable {
    pub fn error(&self, level: usize, degree_index: usize) -> Option<f64> {
        self.cells[level][degree_index].error
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().flatten().filter(|c| c.failure.is_some()).count()
    }
}

struct FineReference {
    state: FieldState<f64>,
    mesh: Mesh1D<f64>,
    elem: ReferenceElement<f64>,
}

fn run_cell(cfg: &RunConfig, s: &Schedule, n: usize, k: usize, fine: Option<&FineReference>) -> Result<f64> {
    let setup = setup_with(cfg, n, k)?;
    let Discretization { problem, mesh, elem } = setup.disc;
    let disc = Discretization::new(problem, mesh.clone(), elem.clone())?;
    let out = simulate(disc, setup.viscosity, &setup.ctrl, setup.initial, &RecordOptions::default())?;
    let eq = s.component;
    let t = out.state.time;
    let e = match (&s.reference, fine, &setup.exact) {
        (Reference::Exact, _, Some(ex)) => error_norm(&out.state, eq, &mesh, &elem, |x| ex.eval(x, t)[eq], s.norm),
        (Reference::Exact, _, None) => {
            return Err(Error::config("convergence.reference", "no exact solution for this problem; use `self`"))
        }
        (Reference::SelfConvergence { .. }, Some(f), _) => error_norm(
            &out.state,
            eq,
            &mesh,
            &elem,
            |x| f.state.evaluate(eq, x, &f.mesh, &f.elem).unwrap_or(f64::NAN),
            s.norm,
        ),
        (Reference::SelfConvergence { .. }, None, _) => unreachable!("fine reference computed first"),
    };
    Ok(e)
}

fn fine_reference(cfg: &RunConfig, k: usize, n: usize) -> Result<FineReference> {
    let setup = setup_with(cfg, n, k)?;
    let Discretization { problem, mesh, elem } = setup.disc;
    let disc = Discretization::new(problem, mesh.clone(), elem.clone())?;
    let out = simulate(disc, setup.viscosity, &setup.ctrl, setup.initial, &RecordOptions::default())?;
    Ok(FineReference { state: out.state, mesh, elem })
}

fn fit(points: Vec<(f64, f64)>) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    eoc_fit(&points).ok()
}

/// Runs every cell of the schedule (in parallel) and assembles the table.
/// Failed cells are recorded, not propagated; only a failing fine
/// reference aborts the study.
pub fn run_convergence(cfg: &RunConfig) -> Result<ConvergenceTable> {
    let s = cfg.schedule.as_ref().ok_or_else(|| Error::config("convergence.K", "no refinement schedule"))?;
    let fine = match s.reference {
        Reference::SelfConvergence { k, n } => Some(fine_reference(cfg, k, n)?),
        Reference::Exact => None,
    };
    let len = cfg.domain.1 - cfg.domain.0;
    let hs: Vec<f64> = s.elements.iter().map(|&k| len / k as f64).collect();
    let jobs: Vec<(usize, usize)> =
        (0..s.elements.len()).flat_map(|l| (0..s.degrees.len()).map(move |d| (l, d))).collect();
    let results: Vec<Cell> = jobs
        .par_iter()
        .map(|&(l, d)| {
            let (n, k) = (s.degrees[d], s.elements[l]);
            let r = run_cell(cfg, s, n, k, fine.as_ref());
            let (error, failure) = match r {
                Ok(e) if e.is_finite() => (Some(e), None),
                Ok(_) => (None, Some("non-finite error".to_string())),
                Err(e) => (None, Some(e.to_string())),
            };
            Cell { n, k, h: hs[l], error, failure }
        })
        .collect();
    let nd = s.degrees.len();
    let cells: Vec<Vec<Cell>> = results.chunks(nd).map(|c| c.to_vec()).collect();

    let eoc_h = (0..nd)
        .map(|d| fit(cells.iter().filter_map(|row| row[d].error.map(|e| (row[d].h, e))).collect()))
        .collect();
    let eoc_n = cells
        .iter()
        .map(|row| fit(row.iter().filter_map(|c| c.error.map(|e| (c.n as f64, e))).collect()).map(|m| -m))
        .collect();
    Ok(ConvergenceTable { degrees: s.degrees.clone(), elements: s.elements.clone(), hs, cells, eoc_h, eoc_n })
}

/// `convergence.csv`: one row per h level (`h/1`, `h/2`, ...), one column per
/// degree, a trailing rate-in-N column and a closing rate-in-h row.
pub fn table_csv(t: &ConvergenceTable) -> String {
    let mut s = String::from("level,K,h");
    for n in &t.degrees {
        write!(s, ",N={n}").unwrap();
    }
    s.push_str(",EOC_N\n");
    let k0 = t.elements[0];
    for (l, row) in t.cells.iter().enumerate() {
        let ratio = t.elements[l] as f64 / k0 as f64;
        write!(s, "h/{},{},{:e}", ratio, t.elements[l], t.hs[l]).unwrap();
        for c in row {
            match (c.error, &c.failure) {
                (Some(e), _) => write!(s, ",{e:.4e}").unwrap(),
                (None, _) => s.push_str(",failed"),
            }
        }
        match t.eoc_n[l] {
            Some(r) => writeln!(s, ",{r:.4}").unwrap(),
            None => s.push_str(",unavailable\n"),
        }
    }
    s.push_str("EOC_h,,");
    for r in &t.eoc_h {
        match r {
            Some(r) => write!(s, ",{r:.4}").unwrap(),
            None => s.push_str(",unavailable"),
        }
    }
    s.push_str(",\n");
    s
}

/// Runs the study and writes `convergence.csv` and `convergence.json`.
pub fn cmd_convergence(cfg: &RunConfig, dir: &Path) -> Result<ConvergenceTable> {
    fs::create_dir_all(dir)?;
    let t = run_convergence(cfg)?;
    fs::write(dir.join("convergence.csv"), table_csv(&t))?;
    let mut v = serde_json::to_value(&t)?;
    v["config"] = cfg.snapshot();
    fs::write(dir.join("convergence.json"), serde_json::to_string_pretty(&v)? + "\n")?;
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level_marks_eoc_unavailable() {
        let cfg = RunConfig::preset(
            "smooth-sine",
            &["convergence.N=[2, 3]", "convergence.K=[4]", "problem.T=0.05", "time.rtol=1e-6"],
        )
        .unwrap();
        let t = run_convergence(&cfg).unwrap();
        assert!(t.eoc_h.iter().all(Option::is_none));
        assert!(t.eoc_n[0].is_some());
        let csv = table_csv(&t);
        assert!(csv.lines().last().unwrap().contains("unavailable"));
        assert!(csv.starts_with("level,K,h,N=2,N=3,EOC_N\n"));
    }

    #[test]
    fn smooth_sine_rate_in_h() {
        let cfg = RunConfig::preset("smooth-sine", &["convergence.N=[3]", "convergence.K=[4, 8, 16]", "viscosity.enable=false"]).unwrap();
        let t = run_convergence(&cfg).unwrap();
        assert_eq!(t.failures(), 0);
        let r = t.eoc_h[0].unwrap();
        assert!(r >= 3.5, "rate {r}");
    }
}
