//! Initial conditions and the matching exact solutions.

use std::f64::consts::PI;

use super::config::RunConfig;
use crate::dg::Boundary;
use crate::error::{Error, Result};
use crate::oracles::{exact_riemann, exact_wave, RiemannSolution};
use crate::pde::{Primitive, ProblemKind};

const SHU_OSHER_LEFT: [f64; 3] = [3.857143, 2.629369, 10.33333];

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    /// Indicator of `[a, b)`.
    Box { a: f64, b: f64 },
    /// `sin(2πk(x − x_a)/L)`.
    Sine { k: f64 },
    /// `u = 2 + cos(5πx) + 4·1_{[−0.3, 0.3]}`, `v = 0`.
    WaveBox,
    /// `u = cos(kπ(x − x_a)/L)`, `v = 0`.
    WaveSmooth { k: f64 },
    /// Two primitive states separated at `x0`.
    Riemann { left: [f64; 3], right: [f64; 3], x0: f64 },
    /// Shock at `x0` running into a density sine wave.
    ShuOsher { x0: f64 },
}

/// Closed-form solution for a configured problem.
pub enum ExactSolution {
    Advection { ic: InitialCondition, velocity: f64, domain: (f64, f64), periodic: bool },
    Wave { ic: InitialCondition, c: f64, domain: (f64, f64), neumann: bool },
    Riemann { solution: RiemannSolution<f64>, x0: f64, gamma: f64 },
}

impl InitialCondition {
    pub fn from_config(cfg: &RunConfig) -> Result<Self> {
        let wrong = |what: &str| Err(Error::config("problem.ic", format!("`{}` is not a {what} initial condition", cfg.ic)));
        let ic = match cfg.ic.as_str() {
            "box" => Self::Box { a: cfg.ic_box[0], b: cfg.ic_box[1] },
            "sine" => Self::Sine { k: cfg.ic_wavenumber as f64 },
            "wave-box" => Self::WaveBox,
            "wave-smooth" => Self::WaveSmooth { k: cfg.ic_wavenumber as f64 },
            "riemann" => {
                let left = cfg.ic_left.ok_or_else(|| Error::config("ic.left", "missing Riemann state"))?;
                let right = cfg.ic_right.ok_or_else(|| Error::config("ic.right", "missing Riemann state"))?;
                for (key, s) in [("ic.left", left), ("ic.right", right)] {
                    if !(s[0] > 0.0 && s[2] > 0.0) {
                        return Err(Error::config(key, "density and pressure must be positive"));
                    }
                }
                let x0 = cfg.ic_x0.unwrap_or(0.5 * (cfg.domain.0 + cfg.domain.1));
                Self::Riemann { left, right, x0 }
            }
            "shu-osher" => Self::ShuOsher { x0: cfg.ic_x0.unwrap_or(-4.0) },
            other => return Err(Error::config("problem.ic", format!("unknown initial condition `{other}`"))),
        };
        let fits = match ic {
            Self::Box { .. } | Self::Sine { .. } => cfg.kind == ProblemKind::Advection,
            Self::WaveBox | Self::WaveSmooth { .. } => cfg.kind == ProblemKind::Wave,
            Self::Riemann { .. } | Self::ShuOsher { .. } => cfg.kind == ProblemKind::Euler,
        };
        if !fits {
            return wrong(cfg.kind.name());
        }
        if let Self::Box { a, b } = ic {
            if !(a < b) {
                return Err(Error::config("ic.box", "need a < b"));
            }
        }
        Ok(ic)
    }

    fn scalar(&self, x: f64, domain: (f64, f64)) -> f64 {
        match *self {
            Self::Box { a, b } => {
                if (a..b).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Sine { k } => (2.0 * PI * k * (x - domain.0) / (domain.1 - domain.0)).sin(),
            Self::WaveBox => 2.0 + (5.0 * PI * x).cos() + if x.abs() <= 0.3 { 4.0 } else { 0.0 },
            Self::WaveSmooth { k } => (k * PI * (x - domain.0) / (domain.1 - domain.0)).cos(),
            _ => unreachable!("scalar initial data only"),
        }
    }

    /// Primitive Euler state at `x`.
    fn primitive(&self, x: f64) -> Primitive<f64> {
        match *self {
            Self::Riemann { left, right, x0 } => {
                let s = if x < x0 { left } else { right };
                Primitive::new(s[0], s[1], s[2])
            }
            Self::ShuOsher { x0 } => {
                if x < x0 {
                    Primitive::new(SHU_OSHER_LEFT[0], SHU_OSHER_LEFT[1], SHU_OSHER_LEFT[2])
                } else {
                    Primitive::new(1.0 + 0.2 * (5.0 * x).sin(), 0.0, 1.0)
                }
            }
            _ => unreachable!("Euler initial data only"),
        }
    }

    /// Conserved initial state at `x`.
    pub fn eval(&self, x: f64, cfg: &RunConfig) -> Vec<f64> {
        match self {
            Self::Box { .. } | Self::Sine { .. } => vec![self.scalar(x, cfg.domain)],
            Self::WaveBox | Self::WaveSmooth { .. } => vec![self.scalar(x, cfg.domain), 0.0],
            Self::Riemann { .. } | Self::ShuOsher { .. } => self.primitive(x).to_conserved(cfg.gamma).to_vec(),
        }
    }

    /// Conserved far-field states at both ends of the domain, padded to three.
    pub fn farfield(&self, cfg: &RunConfig) -> [[f64; 3]; 2] {
        let pad = |v: Vec<f64>| {
            let mut out = [0.0; 3];
            out[..v.len()].copy_from_slice(&v);
            out
        };
        [pad(self.eval(cfg.domain.0, cfg)), pad(self.eval(cfg.domain.1, cfg))]
    }

    /// Exact solution where one is known for the configured boundaries.
    pub fn exact(&self, cfg: &RunConfig) -> Result<Option<ExactSolution>> {
        let periodic = cfg.left_bc == Boundary::Periodic;
        Ok(match self {
            Self::Box { .. } | Self::Sine { .. } => Some(ExactSolution::Advection {
                ic: self.clone(),
                velocity: cfg.velocity,
                domain: cfg.domain,
                periodic,
            }),
            Self::WaveBox | Self::WaveSmooth { .. } => {
                let neumann = cfg.left_bc == Boundary::NeumannWave && cfg.right_bc == Boundary::NeumannWave;
                (periodic || neumann).then(|| ExactSolution::Wave {
                    ic: self.clone(),
                    c: cfg.wave_speed,
                    domain: cfg.domain,
                    neumann,
                })
            }
            Self::Riemann { left, right, x0 } => {
                let l = Primitive::new(left[0], left[1], left[2]);
                let r = Primitive::new(right[0], right[1], right[2]);
                let solution = exact_riemann(l, r, cfg.gamma, 1e-14)?;
                Some(ExactSolution::Riemann { solution, x0: *x0, gamma: cfg.gamma })
            }
            Self::ShuOsher { .. } => None,
        })
    }
}

impl ExactSolution {
    /// Conserved exact state at `(x, t)`.
    pub fn eval(&self, x: f64, t: f64) -> Vec<f64> {
        match self {
            Self::Advection { ic, velocity, domain, periodic } => {
                let (a, b) = *domain;
                let mut y = x - velocity * t;
                if *periodic {
                    let len = b - a;
                    y = a + (y - a).rem_euclid(len);
                } else {
                    // inflow carries the frozen boundary value
                    y = y.clamp(a, b);
                }
                vec![ic.scalar(y, *domain)]
            }
            Self::Wave { ic, c, domain, neumann } => {
                let f = |z: f64| [ic.scalar(z, *domain), 0.0];
                exact_wave(f, *c, x, t, *domain, *neumann).to_vec()
            }
            Self::Riemann { solution, x0, gamma } => solution.evaluate(x, t, *x0).to_conserved(*gamma).to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_exact_wraps_periodically() {
        let cfg = RunConfig::preset("advection-box", &[]).unwrap();
        let ic = InitialCondition::from_config(&cfg).unwrap();
        let ex = ic.exact(&cfg).unwrap().unwrap();
        assert_eq!(ex.eval(1.0, 0.0), vec![1.0]);
        assert_eq!(ex.eval(6.0, 2.0), vec![1.0]);
        assert_eq!(ex.eval(6.0, 0.5), vec![0.0]);
        assert_eq!(ex.eval(0.5, 10.0), vec![1.0]);
    }

    #[test]
    fn sod_farfield_matches_states() {
        let cfg = RunConfig::preset("sod", &[]).unwrap();
        let ic = InitialCondition::from_config(&cfg).unwrap();
        let ff = ic.farfield(&cfg);
        assert!((ff[0][0] - 1.0).abs() + ff[0][1].abs() + (ff[0][2] - 2.5).abs() < 1e-14);
        assert!((ff[1][2] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn mismatched_problem_rejected() {
        let err = RunConfig::preset("sod", &["problem.ic=box"]).unwrap_err();
        assert!(matches!(err, Error::Config { key, .. } if key == "problem.ic"));
    }
}
