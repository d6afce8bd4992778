//! Adaptive Bogacki–Shampine 3(2) integration with a viscous CFL cap.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepController<T> {
    pub rtol: T,
    pub atol: T,
    pub safety: T,
    pub fac_min: T,
    pub fac_max: T,
    /// Constant in front of the stability cap.
    pub cfl: T,
    pub dt_init: Option<T>,
    pub err_floor: T,
    /// Halvings allowed after a positivity or non-finite failure in a stage.
    pub max_failure_retries: usize,
    pub max_steps: usize,
}

impl<T: Real> Default for StepController<T> {
    fn default() -> Self {
        Self {
            rtol: T::of(1e-4),
            atol: T::of(1e-8),
            safety: T::of(0.9),
            fac_min: T::of(0.2),
            fac_max: T::of(5.0),
            cfl: T::one(),
            dt_init: None,
            err_floor: T::of(1e-12),
            max_failure_retries: 8,
            max_steps: 10_000_000,
        }
    }
}

impl<T: Real> StepController<T> {
    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: &str| Err(Error::config(key, msg));
        if !(self.rtol > T::zero()) {
            return bad("time.rtol", "must be positive");
        }
        if !(self.atol > T::zero()) {
            return bad("time.atol", "must be positive");
        }
        if !(self.cfl > T::zero()) {
            return bad("time.cfl", "must be positive");
        }
        if !(self.safety > T::zero() && self.safety < T::one()) {
            return bad("time.safety", "must lie in (0, 1)");
        }
        if !(self.fac_min > T::zero() && self.fac_min < T::one() && self.fac_max > T::one()) {
            return bad("time.fac_min", "need 0 < fac_min < 1 < fac_max");
        }
        if let Some(dt) = self.dt_init {
            if !(dt > T::zero()) {
                return bad("time.dt_init", "must be positive");
            }
        }
        Ok(())
    }

    /// Step-size proposal from an error estimate.
    pub fn propose(&self, dt: T, err: T) -> T {
        let e = err.max(self.err_floor);
        let fac = self.safety * e.powf(-T::one() / T::of(3.0));
        dt * fac.max(self.fac_min).min(self.fac_max)
    }
}

/// `C / (λ N²/h + ν N⁴/h²)`, `+∞` when both rates vanish.
pub fn dt_cap<T: Real>(lambda_max: T, nu_max: T, h_min: T, degree: usize, cfl: T) -> T {
    let n2 = T::of_usize(degree * degree);
    let rate = lambda_max * n2 / h_min + nu_max * n2 * n2 / (h_min * h_min);
    if rate == T::zero() {
        T::infinity()
    } else {
        cfl / rate
    }
}

/// Result of one trial step.
#[derive(Clone, Debug)]
pub struct Bs3Step<T> {
    pub y: Vec<T>,
    /// Weighted RMS error estimate; ≤ 1 means acceptable.
    pub err: T,
    /// Rate at the new point, reusable as the next first stage.
    pub k_last: Vec<T>,
}

/// Weighted RMS of `e` with per-entry scale `atol + rtol·max(|y0|, |y1|)`.
pub fn weighted_rms<T: Real>(e: &[T], y0: &[T], y1: &[T], rtol: T, atol: T) -> T {
    if e.is_empty() {
        return T::zero();
    }
    let sum: T = e
        .iter()
        .zip(y0.iter().zip(y1))
        .map(|(e, (a, b))| {
            let s = atol + rtol * a.abs().max(b.abs());
            (*e / s) * (*e / s)
        })
        .sum();
    (sum / T::of_usize(e.len())).sqrt()
}

/// One BS3(2) step from `(t, y)` given the first stage `k1 = f(t, y)`.
pub fn step_bs3<T: Real>(
    rhs: &mut impl FnMut(T, &[T], &mut [T]) -> Result<()>,
    t: T,
    y: &[T],
    k1: &[T],
    dt: T,
    rtol: T,
    atol: T,
) -> Result<Bs3Step<T>> {
    let n = y.len();
    let c = |x: f64| T::of(x);
    let mut tmp = vec![T::zero(); n];
    let mut k2 = vec![T::zero(); n];
    let mut k3 = vec![T::zero(); n];
    let mut k4 = vec![T::zero(); n];

    for i in 0..n {
        tmp[i] = y[i] + dt * c(0.5) * k1[i];
    }
    rhs(t + dt * c(0.5), &tmp, &mut k2)?;
    finite(&k2)?;
    for i in 0..n {
        tmp[i] = y[i] + dt * c(0.75) * k2[i];
    }
    rhs(t + dt * c(0.75), &tmp, &mut k3)?;
    finite(&k3)?;
    let (b1, b2, b3) = (T::two() / c(9.0), T::one() / c(3.0), c(4.0) / c(9.0));
    let mut y_new = vec![T::zero(); n];
    for i in 0..n {
        y_new[i] = y[i] + dt * (b1 * k1[i] + b2 * k2[i] + b3 * k3[i]);
    }
    finite(&y_new)?;
    rhs(t + dt, &y_new, &mut k4)?;
    finite(&k4)?;
    // b − b* for the embedded second-order solution
    let (e1, e2, e3, e4) = (
        b1 - c(7.0) / c(24.0),
        b2 - c(0.25),
        b3 - T::one() / c(3.0),
        -T::one() / c(8.0),
    );
    for i in 0..n {
        tmp[i] = dt * (e1 * k1[i] + e2 * k2[i] + e3 * k3[i] + e4 * k4[i]);
    }
    let err = weighted_rms(&tmp, y, &y_new, rtol, atol);
    Ok(Bs3Step { y: y_new, err, k_last: k4 })
}

fn finite<T: Real>(v: &[T]) -> Result<()> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Per-step operator data returned when a new step begins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prepared<T> {
    pub dt_cap: T,
    pub nu_max: T,
    /// Whether the frozen operator differs from the previous step's.
    pub changed: bool,
}

/// An ODE right-hand side whose coefficients are refreshed once per step.
pub trait System<T: Real> {
    /// Called once at the start of each new step, before any stage.
    fn prepare(&mut self, t: T, y: &[T]) -> Result<Prepared<T>>;
    fn rhs(&mut self, t: T, y: &[T], out: &mut [T]) -> Result<()>;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepRecord<T> {
    pub step: usize,
    /// Time at the start of the attempt.
    pub t: T,
    pub dt: T,
    pub err: T,
    pub nu_max: T,
    pub dt_cap: T,
    pub accepted: bool,
}

#[derive(Clone, Debug)]
pub struct Integration<T> {
    pub y: Vec<T>,
    pub t: T,
    pub log: Vec<StepRecord<T>>,
    pub rhs_evaluations: usize,
}

impl<T: Real> Integration<T> {
    pub fn accepted_steps(&self) -> usize {
        self.log.iter().filter(|r| r.accepted).count()
    }

    pub fn rejected_steps(&self) -> usize {
        self.log.len() - self.accepted_steps()
    }
}

/// Integrates from `t0` to `t_end`, landing exactly on each of `stops`
/// (sorted, inside `(t0, t_end]`). `observer` sees every accepted step
/// along with whether it ended on a stop time.
pub fn integrate<T: Real, S: System<T>>(
    sys: &mut S,
    y0: Vec<T>,
    t0: T,
    t_end: T,
    ctrl: &StepController<T>,
    stops: &[T],
    mut observer: impl FnMut(&S, &StepRecord<T>, &[T], bool),
) -> Result<Integration<T>> {
    ctrl.validate()?;
    let span = t_end - t0;
    let n = y0.len();
    let mut y = y0;
    let mut t = t0;
    let mut log = Vec::new();
    let mut evals = 0usize;
    let mut k1 = vec![T::zero(); n];
    let mut have_k1 = false;
    let mut dt_next: Option<T> = ctrl.dt_init;
    let mut stop_idx = stops.iter().position(|s| *s > t0).unwrap_or(stops.len());
    let tiny = T::of(1e-14) * span.abs().max(T::min_positive_value());
    let mut step = 0usize;

    while t_end - t > tiny {
        if step >= ctrl.max_steps {
            return Err(Error::Stagnation { t: t.to_f64_lossy(), dt: dt_next.unwrap_or(T::zero()).to_f64_lossy() });
        }
        let prep = sys.prepare(t, &y)?;
        if !have_k1 || prep.changed {
            sys.rhs(t, &y, &mut k1)?;
            finite(&k1)?;
            evals += 1;
        }
        let mut dt = match dt_next {
            Some(d) => d,
            None => initial_dt(span, prep.dt_cap),
        };
        let mut failures = 0usize;
        loop {
            dt = dt.min(prep.dt_cap);
            let target = if stop_idx < stops.len() { stops[stop_idx].min(t_end) } else { t_end };
            let unclipped = dt;
            let landing = t + dt >= target - tiny;
            if landing {
                dt = target - t;
            }
            let hits_stop = landing && stop_idx < stops.len();
            if dt < tiny {
                return Err(Error::Stagnation { t: t.to_f64_lossy(), dt: dt.to_f64_lossy() });
            }
            let mut counted = |tt: T, yy: &[T], out: &mut [T]| {
                evals += 1;
                sys.rhs(tt, yy, out)
            };
            let result = step_bs3(&mut counted, t, &y, &k1, dt, ctrl.rtol, ctrl.atol);
            let mut rec =
                StepRecord { step, t, dt, err: T::infinity(), nu_max: prep.nu_max, dt_cap: prep.dt_cap, accepted: false };
            match result {
                Ok(s) if s.err <= T::one() => {
                    rec.err = s.err;
                    rec.accepted = true;
                    log.push(rec);
                    let proposal = ctrl.propose(dt, s.err);
                    // a step shortened to land on a target should not shrink the next one
                    dt_next = Some(if landing { proposal.max(unclipped) } else { proposal });
                    y = s.y;
                    k1 = s.k_last;
                    have_k1 = true;
                    t = if landing { target } else { t + dt };
                    if hits_stop {
                        stop_idx += 1;
                    }
                    step += 1;
                    observer(sys, &rec, &y, hits_stop);
                    break;
                }
                Ok(s) => {
                    rec.err = s.err;
                    log.push(rec);
                    dt = ctrl.propose(dt, s.err).min(dt * ctrl.safety);
                }
                Err(e @ (Error::Positivity { .. } | Error::NonFinite)) => {
                    log.push(rec);
                    failures += 1;
                    if failures > ctrl.max_failure_retries {
                        return Err(e);
                    }
                    dt = dt * T::half();
                }
                Err(e) => return Err(e),
            }
            step += 1;
            if step >= ctrl.max_steps {
                return Err(Error::Stagnation { t: t.to_f64_lossy(), dt: dt.to_f64_lossy() });
            }
        }
    }
    Ok(Integration { y, t, log, rhs_evaluations: evals })
}

fn initial_dt<T: Real>(span: T, cap: T) -> T {
    let guess = span.abs() / T::of(100.0);
    if cap.is_finite() {
        guess.min(cap)
    } else {
        guess
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Linear {
        lambda: f64,
        cap: f64,
    }

    impl System<f64> for Linear {
        fn prepare(&mut self, _t: f64, _y: &[f64]) -> Result<Prepared<f64>> {
            Ok(Prepared { dt_cap: self.cap, nu_max: 0.0, changed: false })
        }
        fn rhs(&mut self, _t: f64, y: &[f64], out: &mut [f64]) -> Result<()> {
            out[0] = self.lambda * y[0];
            Ok(())
        }
    }

    #[test]
    fn cap_examples() {
        assert!((dt_cap(1.0, 0.0, 0.1, 5, 1.0) - 0.004f64).abs() < 1e-15);
        assert!(dt_cap(1.0, 1e-3, 0.1, 5, 1.0) < 0.004);
        assert_eq!(dt_cap(0.0, 0.0, 0.1, 5, 1.0), f64::INFINITY);
    }

    #[test]
    fn single_step_matches_stability_polynomial() {
        for z in [-0.3f64, 0.1, -1.7] {
            let mut f = |_t: f64, y: &[f64], o: &mut [f64]| {
                o[0] = z * y[0];
                Ok(())
            };
            let s = step_bs3(&mut f, 0.0, &[1.0], &[z], 1.0, 1e-4, 1e-8).unwrap();
            let r = 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
            assert!((s.y[0] - r).abs() < 1e-14, "z={z}");
        }
    }

    #[test]
    fn zero_rhs_is_stationary() {
        let mut f = |_t: f64, _y: &[f64], o: &mut [f64]| {
            o.iter_mut().for_each(|v| *v = 0.0);
            Ok(())
        };
        let s = step_bs3(&mut f, 0.0, &[2.0, 3.0], &[0.0, 0.0], 0.5, 1e-4, 1e-8).unwrap();
        assert_eq!(s.y, vec![2.0, 3.0]);
        assert_eq!(s.err, 0.0);
    }

    #[test]
    fn zero_rhs_grows_dt_to_cap() {
        let mut sys = Linear { lambda: 0.0, cap: 0.05 };
        let out = integrate(&mut sys, vec![1.0], 0.0, 1.0, &StepController::default(), &[], |_, _, _, _| {}).unwrap();
        let dts: Vec<f64> = out.log.iter().map(|r| r.dt).collect();
        assert!(out.log.iter().all(|r| r.accepted));
        for w in dts.windows(2).take(dts.len().saturating_sub(2)) {
            assert!(w[1] >= w[0] - 1e-15);
        }
        assert!(dts.iter().all(|&d| d <= 0.05 + 1e-15));
        assert_eq!(out.t, 1.0);
    }

    #[test]
    fn stop_times_are_hit_exactly() {
        let mut sys = Linear { lambda: -1.0, cap: f64::INFINITY };
        let mut hits = Vec::new();
        integrate(&mut sys, vec![1.0], 0.0, 1.0, &StepController::default(), &[0.25, 0.5], |_, r, _, hit| {
            if hit {
                hits.push(r.t + r.dt);
            }
        })
        .unwrap();
        assert_eq!(hits.len(), 2);
        assert!((hits[0] - 0.25).abs() < 1e-15 && (hits[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fsal_reuses_last_stage() {
        let mut sys = Linear { lambda: -1.0, cap: f64::INFINITY };
        let out = integrate(&mut sys, vec![1.0], 0.0, 2.0, &StepController::default(), &[], |_, _, _, _| {}).unwrap();
        let attempts = out.log.len();
        assert_eq!(out.rhs_evaluations, 1 + 3 * attempts);
        assert!((out.y[0] - (-2.0f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn global_error_is_third_order() {
        let run = |dt: f64| {
            let mut f = |_t: f64, y: &[f64], o: &mut [f64]| {
                o[0] = -y[0];
                Ok(())
            };
            let mut y = vec![1.0];
            let steps = (1.0 / dt).round() as usize;
            for i in 0..steps {
                let k1 = vec![-y[0]];
                y = step_bs3(&mut f, i as f64 * dt, &y, &k1, dt, 1e-4, 1e-8).unwrap().y;
            }
            (y[0] - (-1.0f64).exp()).abs()
        };
        let ratio = run(0.1) / run(0.05);
        assert!(ratio > 7.0 && ratio < 9.0, "ratio {ratio}");
    }
}
