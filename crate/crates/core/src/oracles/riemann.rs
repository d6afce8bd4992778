//! Exact solution of the Euler Riemann problem for an ideal gas.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pde::flux::Primitive;
use crate::scalar::Real;

pub const MAX_NEWTON_ITERATIONS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WaveKind {
    Shock,
    Rarefaction,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RiemannSolution<T> {
    pub left: Primitive<T>,
    pub right: Primitive<T>,
    pub p_star: T,
    pub u_star: T,
    pub gamma: T,
    pub left_wave: WaveKind,
    pub right_wave: WaveKind,
}

/// `f_K(p)` and its derivative for one side.
fn pressure_function<T: Real>(p: T, s: &Primitive<T>, gamma: T) -> (T, T) {
    let one = T::one();
    let a = s.sound_speed(gamma);
    if p > s.p {
        let ak = T::two() / ((gamma + one) * s.rho);
        let bk = (gamma - one) / (gamma + one) * s.p;
        let root = (ak / (p + bk)).sqrt();
        let f = (p - s.p) * root;
        let df = root * (one - (p - s.p) / (T::two() * (bk + p)));
        (f, df)
    } else {
        let ratio = p / s.p;
        let f = T::two() * a / (gamma - one) * (ratio.powf((gamma - one) / (T::two() * gamma)) - one);
        let df = one / (s.rho * a) * ratio.powf(-(gamma + one) / (T::two() * gamma));
        (f, df)
    }
}

/// Residual of the star-pressure equation `f_L(p) + f_R(p) + Δu`.
pub fn star_pressure_residual<T: Real>(p: T, left: &Primitive<T>, right: &Primitive<T>, gamma: T) -> T {
    pressure_function(p, left, gamma).0 + pressure_function(p, right, gamma).0 + (right.u - left.u)
}

/// Solves for the star state by safeguarded Newton iteration.
pub fn exact_riemann<T: Real>(
    left: Primitive<T>,
    right: Primitive<T>,
    gamma: T,
    tol: T,
) -> Result<RiemannSolution<T>> {
    for s in [&left, &right] {
        if !(s.rho > T::zero() && s.p > T::zero()) {
            return Err(Error::InvalidArgument("Riemann states need positive density and pressure".into()));
        }
    }
    if !(gamma > T::one()) {
        return Err(Error::InvalidArgument("gamma must exceed 1".into()));
    }
    let (al, ar) = (left.sound_speed(gamma), right.sound_speed(gamma));
    let du = right.u - left.u;
    if T::two() / (gamma - T::one()) * (al + ar) <= du {
        return Err(Error::Vacuum);
    }

    // primitive-variable linearization as starting guess
    let pv = T::half() * (left.p + right.p) - T::of(0.125) * du * (left.rho + right.rho) * (al + ar);
    let mut p = pv.max(tol * T::half() * (left.p + right.p)).max(T::min_positive_value());
    let mut converged = false;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let (fl, dl) = pressure_function(p, &left, gamma);
        let (fr, dr) = pressure_function(p, &right, gamma);
        let mut next = p - (fl + fr + du) / (dl + dr);
        if !(next > T::zero()) {
            next = p * T::half();
        }
        let change = T::two() * (next - p).abs() / (next + p);
        p = next;
        if change < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RiemannNoConvergence(MAX_NEWTON_ITERATIONS));
    }
    let fl = pressure_function(p, &left, gamma).0;
    let fr = pressure_function(p, &right, gamma).0;
    let u_star = T::half() * (left.u + right.u) + T::half() * (fr - fl);
    let kind = |side: &Primitive<T>| if p > side.p { WaveKind::Shock } else { WaveKind::Rarefaction };
    Ok(RiemannSolution {
        left,
        right,
        p_star: p,
        u_star,
        gamma,
        left_wave: kind(&left),
        right_wave: kind(&right),
    })
}

impl<T: Real> RiemannSolution<T> {
    /// Primitive state at similarity coordinate `ξ = x/t`.
    pub fn sample(&self, xi: T) -> Primitive<T> {
        let g = self.gamma;
        let one = T::one();
        let g1 = (g - one) / (T::two() * g);
        let g2 = (g + one) / (T::two() * g);
        let g6 = (g - one) / (g + one);
        let two_gp1 = T::two() / (g + one);
        let ps = self.p_star;
        let us = self.u_star;
        if xi <= us {
            let w = &self.left;
            let a = w.sound_speed(g);
            let ratio = ps / w.p;
            match self.left_wave {
                WaveKind::Shock => {
                    let speed = w.u - a * (g2 * ratio + g1).sqrt();
                    if xi <= speed {
                        *w
                    } else {
                        Primitive::new(w.rho * (ratio + g6) / (g6 * ratio + one), us, ps)
                    }
                }
                WaveKind::Rarefaction => {
                    let head = w.u - a;
                    let a_star = a * ratio.powf(g1);
                    let tail = us - a_star;
                    if xi <= head {
                        *w
                    } else if xi > tail {
                        Primitive::new(w.rho * ratio.powf(one / g), us, ps)
                    } else {
                        let u = two_gp1 * (a + (g - one) * T::half() * w.u + xi);
                        let c = two_gp1 * (a + (g - one) * T::half() * (w.u - xi));
                        let r = c / a;
                        Primitive::new(w.rho * r.powf(T::two() / (g - one)), u, w.p * r.powf(T::two() * g / (g - one)))
                    }
                }
            }
        } else {
            let w = &self.right;
            let a = w.sound_speed(g);
            let ratio = ps / w.p;
            match self.right_wave {
                WaveKind::Shock => {
                    let speed = w.u + a * (g2 * ratio + g1).sqrt();
                    if xi >= speed {
                        *w
                    } else {
                        Primitive::new(w.rho * (ratio + g6) / (g6 * ratio + one), us, ps)
                    }
                }
                WaveKind::Rarefaction => {
                    let head = w.u + a;
                    let a_star = a * ratio.powf(g1);
                    let tail = us + a_star;
                    if xi >= head {
                        *w
                    } else if xi <= tail {
                        Primitive::new(w.rho * ratio.powf(one / g), us, ps)
                    } else {
                        let u = two_gp1 * (-a + (g - one) * T::half() * w.u + xi);
                        let c = two_gp1 * (a - (g - one) * T::half() * (w.u - xi));
                        let r = c / a;
                        Primitive::new(w.rho * r.powf(T::two() / (g - one)), u, w.p * r.powf(T::two() * g / (g - one)))
                    }
                }
            }
        }
    }

    /// State at `(x, t)` for a diaphragm initially at `x0`.
    pub fn evaluate(&self, x: T, t: T, x0: T) -> Primitive<T> {
        if t <= T::zero() {
            return if x < x0 { self.left } else { self.right };
        }
        self.sample((x - x0) / t)
    }

    /// Shock speeds (left, right) when the corresponding wave is a shock.
    pub fn shock_speeds(&self) -> (Option<T>, Option<T>) {
        let g = self.gamma;
        let g1 = (g - T::one()) / (T::two() * g);
        let g2 = (g + T::one()) / (T::two() * g);
        let l = (self.left_wave == WaveKind::Shock).then(|| {
            self.left.u - self.left.sound_speed(g) * (g2 * self.p_star / self.left.p + g1).sqrt()
        });
        let r = (self.right_wave == WaveKind::Shock).then(|| {
            self.right.u + self.right.sound_speed(g) * (g2 * self.p_star / self.right.p + g1).sqrt()
        });
        (l, r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect(l: &Primitive<f64>, r: &Primitive<f64>, g: f64) -> f64 {
        let (mut lo, mut hi) = (1e-12, 1e4);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if star_pressure_residual(mid, l, r, g) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn trivial_problem_has_no_waves() {
        let s = Primitive::new(1.3, 0.2, 0.7);
        let sol = exact_riemann(s, s, 1.4, 1e-14).unwrap();
        assert!((sol.p_star - 0.7f64).abs() < 1e-13);
        assert!((sol.u_star - 0.2f64).abs() < 1e-13);
    }

    #[test]
    fn sod_star_state() {
        let l = Primitive::new(1.0, 0.0, 1.0);
        let r = Primitive::new(0.125, 0.0, 0.1);
        let sol = exact_riemann(l, r, 1.4, 1e-14).unwrap();
        let pb = bisect(&l, &r, 1.4);
        assert!((sol.p_star - pb).abs() < 1e-10);
        // reference values for Sod's problem
        assert!((sol.p_star - 0.30313f64).abs() < 1e-5);
        assert!((sol.u_star - 0.92745f64).abs() < 1e-5);
        assert_eq!(sol.left_wave, WaveKind::Rarefaction);
        assert_eq!(sol.right_wave, WaveKind::Shock);
    }

    #[test]
    fn mirror_symmetry() {
        let l = Primitive::new(0.445f64, 0.698, 3.528);
        let r = Primitive::new(0.5, 0.0, 0.571);
        let a = exact_riemann(l, r, 1.4, 1e-14).unwrap();
        let b = exact_riemann(Primitive::new(r.rho, -r.u, r.p), Primitive::new(l.rho, -l.u, l.p), 1.4, 1e-14)
            .unwrap();
        assert!((a.p_star - b.p_star).abs() < 1e-12);
        assert!((a.u_star + b.u_star).abs() < 1e-12);
    }

    #[test]
    fn vacuum_detected() {
        let l = Primitive::new(1.0, -10.0, 0.1);
        let r = Primitive::new(1.0, 10.0, 0.1);
        assert!(matches!(exact_riemann(l, r, 1.4, 1e-12), Err(Error::Vacuum)));
    }

    #[test]
    fn sampler_far_field_and_continuity_through_fan() {
        let l = Primitive::new(1.0, 0.0, 1.0);
        let r = Primitive::new(0.125, 0.0, 0.1);
        let sol = exact_riemann(l, r, 1.4, 1e-14).unwrap();
        assert_eq!(sol.sample(-10.0), l);
        assert_eq!(sol.sample(10.0), r);
        let head = -(1.4f64).sqrt();
        let just_inside = sol.sample(head + 1e-9);
        assert!((just_inside.rho - 1.0).abs() < 1e-7);
    }

    #[test]
    fn rankine_hugoniot_across_shock() {
        let g = 1.4f64;
        let l = Primitive::new(1.0, 0.0, 1.0);
        let r = Primitive::new(0.125, 0.0, 0.1);
        let sol = exact_riemann(l, r, g, 1e-14).unwrap();
        let s = sol.shock_speeds().1.unwrap();
        let behind = sol.sample(s - 1e-9).to_conserved(g);
        let ahead = sol.sample(s + 1e-9).to_conserved(g);
        let fb = crate::pde::flux::euler_flux(&behind, g);
        let fa = crate::pde::flux::euler_flux(&ahead, g);
        for i in 0..3 {
            assert!(((fb[i] - fa[i]) - s * (behind[i] - ahead[i])).abs() < 1e-8);
        }
    }
}
