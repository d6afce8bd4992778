//! Deterministic property checks shared by the property tests and the
//! acceptance report. Each returns a short summary on success.
#![allow(dead_code)]

use dgshock::detector::{fit_decay, skyline};
use dgshock::dg::{Mesh1D, ReferenceElement};
use dgshock::oracles::exact_riemann;
use dgshock::oracles::riemann::star_pressure_residual;
use dgshock::pde::{Discretization, Primitive, ProblemDefinition};
use dgshock::solver::{simulate, RecordOptions};
use dgshock::timeint::{step_bs3, StepController};
use dgshock::viscosity::ViscosityConfig;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<String, String>;

/// Positive magnitudes spread over several decades.
pub fn random_mags(rng: &mut StdRng, len: usize) -> Vec<f64> {
    (0..len).map(|_| 10f64.powf(rng.gen_range(-12.0..2.0))).collect()
}

/// Skyline invariants on one vector.
pub fn skyline_invariants(v: &[f64]) -> Result<(), String> {
    let s = skyline(v);
    if skyline(&s) != s {
        return Err(format!("not idempotent on {v:?}"));
    }
    if s.windows(2).any(|w| w[1] > w[0]) {
        return Err(format!("envelope increases on {v:?}"));
    }
    if s.iter().zip(v).any(|(a, b)| a < b) {
        return Err(format!("envelope below input on {v:?}"));
    }
    // order preserving: raising one entry never lowers the envelope
    let mut w = v.to_vec();
    w[v.len() / 2] *= 3.0;
    if skyline(&w).iter().zip(&s).any(|(a, b)| a < b) {
        return Err(format!("not monotone in the input on {v:?}"));
    }
    Ok(())
}

pub fn skyline_suite(count: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..count {
        let len = rng.gen_range(2..=20);
        skyline_invariants(&random_mags(&mut rng, len))?;
    }
    Ok(format!("{count} vectors"))
}

/// Least-squares exponent by refining a grid in `s`; the intercept has a
/// closed form for each fixed `s`.
pub fn grid_search_decay(mags: &[f64]) -> f64 {
    let xs: Vec<f64> = (1..=mags.len()).map(|n| (n as f64).log10()).collect();
    let ys: Vec<f64> = mags.iter().map(|m| m.log10()).collect();
    let cost = |s: f64| {
        let c = xs.iter().zip(&ys).map(|(x, y)| y + s * x).sum::<f64>() / xs.len() as f64;
        xs.iter().zip(&ys).map(|(x, y)| (y - c + s * x).powi(2)).sum::<f64>()
    };
    let (mut lo, mut hi) = (-200.0, 200.0);
    for _ in 0..40 {
        let step = (hi - lo) / 20.0;
        let best = (0..=20).map(|i| lo + step * i as f64).min_by(|a, b| cost(*a).total_cmp(&cost(*b))).unwrap();
        lo = best - step;
        hi = best + step;
    }
    0.5 * (lo + hi)
}

pub fn fit_decay_matches_grid(mags: &[f64]) -> Result<(), String> {
    let (s, _) = fit_decay(mags).map_err(|e| e.to_string())?;
    let g = grid_search_decay(mags);
    if (s - g).abs() > 1e-6 {
        return Err(format!("fit {s} vs grid {g} on {mags:?}"));
    }
    Ok(())
}

pub fn fit_decay_suite(count: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..count {
        let len = rng.gen_range(2..=16);
        fit_decay_matches_grid(&random_mags(&mut rng, len))?;
    }
    Ok(format!("{count} spectra within 1e-6"))
}

pub fn bisect_star_pressure(l: &Primitive<f64>, r: &Primitive<f64>, gamma: f64) -> f64 {
    let (mut lo, mut hi) = (1e-14, 1e6);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if star_pressure_residual(mid, l, r, gamma) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn random_primitive(rng: &mut StdRng) -> Primitive<f64> {
    Primitive::new(rng.gen_range(0.1..5.0), rng.gen_range(-1.0..1.0), rng.gen_range(0.1..5.0))
}

/// Newton star pressure against bisection, relative to the pressure scale.
pub fn riemann_matches_bisection(l: Primitive<f64>, r: Primitive<f64>) -> Result<(), String> {
    let sol = exact_riemann(l, r, 1.4, 1e-14).map_err(|e| e.to_string())?;
    let pb = bisect_star_pressure(&l, &r, 1.4);
    let scale = l.p.max(r.p);
    if (sol.p_star - pb).abs() > 1e-10 * scale {
        return Err(format!("p* {} vs bisection {pb} for {l:?} {r:?}", sol.p_star));
    }
    Ok(())
}

pub fn riemann_suite(count: usize, seed: u64) -> Check {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut done = 0;
    while done < count {
        let (l, r) = (random_primitive(&mut rng), random_primitive(&mut rng));
        riemann_matches_bisection(l, r)?;
        done += 1;
    }
    Ok(format!("{count} state pairs within 1e-10"))
}

/// Periodic Euler with a contact and pressure jump; returns the largest
/// drift of the three conserved totals and the number of activated steps.
pub fn periodic_euler_drift(k: usize, n: usize, t_end: f64) -> Result<(f64, usize), String> {
    let mesh = Mesh1D::periodic(0.0, 1.0, k).map_err(|e| e.to_string())?;
    let elem = ReferenceElement::new(n).map_err(|e| e.to_string())?;
    let disc = Discretization::new(ProblemDefinition::euler(1.4, t_end), mesh.clone(), elem.clone())
        .map_err(|e| e.to_string())?;
    let init = disc.interpolate(|x| {
        let inside = (0.3..0.7).contains(&x);
        let p = Primitive::new(if inside { 1.0 } else { 0.5 }, 0.3, if inside { 1.0 } else { 0.4 });
        p.to_conserved(1.4).to_vec()
    });
    let before: Vec<f64> = (0..3).map(|e| init.integral(e, &mesh, &elem)).collect();
    let ctrl = StepController { rtol: 1e-6, atol: 1e-9, ..Default::default() };
    let out = simulate(disc, ViscosityConfig::default(), &ctrl, init, &RecordOptions::default())
        .map_err(|e| e.to_string())?;
    let drift = (0..3)
        .map(|e| (out.state.integral(e, &mesh, &elem) - before[e]).abs())
        .fold(0.0, f64::max);
    Ok((drift, out.activated_steps))
}

pub fn conservation_check() -> Check {
    let (drift, activated) = periodic_euler_drift(20, 4, 0.2)?;
    if activated == 0 {
        return Err("viscosity never activated".into());
    }
    if drift > 1e-10 {
        return Err(format!("drift {drift:e}"));
    }
    Ok(format!("drift {drift:.1e} over {activated} activated steps"))
}

/// Observed order of fixed-step BS3 on `u' = cos(t) u` to t = 1.
pub fn bs3_observed_order() -> f64 {
    let mut rhs = |t: f64, y: &[f64], out: &mut [f64]| {
        out[0] = t.cos() * y[0];
        Ok(())
    };
    let exact = 1f64.sin().exp();
    let errs: Vec<(f64, f64)> = [10usize, 20, 40, 80]
        .iter()
        .map(|&m| {
            let dt = 1.0 / m as f64;
            let mut y = vec![1.0];
            let mut k1 = vec![1.0];
            for i in 0..m {
                let st = step_bs3(&mut rhs, i as f64 * dt, &y, &k1, dt, 1e-6, 1e-9).unwrap();
                y = st.y;
                k1 = st.k_last;
            }
            (dt, (y[0] - exact).abs())
        })
        .collect();
    dgshock::oracles::eoc_fit(&errs).unwrap()
}

pub fn bs3_order_check() -> Check {
    let p = bs3_observed_order();
    if (p - 3.0).abs() > 0.1 {
        return Err(format!("order {p:.3}"));
    }
    Ok(format!("order {p:.3}"))
}
