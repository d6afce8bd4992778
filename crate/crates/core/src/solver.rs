//! Time-dependent simulation: DG operator + viscosity refresh + adaptive BS3.

use crate::dg::FieldState;
use crate::error::Result;
use crate::pde::Discretization;
use crate::scalar::Real;
use crate::timeint::{dt_cap, integrate, Prepared, StepController, StepRecord, System};
use crate::viscosity::{compute_viscosity, ViscosityConfig, ViscosityField};

/// The semi-discrete system with viscosity frozen over each step.
pub struct ViscousSystem<T: Real> {
    pub disc: Discretization<T>,
    pub viscosity: ViscosityConfig<T>,
    pub cfl: T,
    nu: ViscosityField<T>,
    lambda: T,
    input: FieldState<T>,
    output: FieldState<T>,
    prepared_once: bool,
}

impl<T: Real> ViscousSystem<T> {
    pub fn new(disc: Discretization<T>, viscosity: ViscosityConfig<T>, cfl: T) -> Self {
        let input = disc.zero_state();
        let output = disc.zero_state();
        let nu = ViscosityField::zeros(disc.mesh.num_elements());
        Self { disc, viscosity, cfl, nu, lambda: T::zero(), input, output, prepared_once: false }
    }

    /// Viscosity frozen for the current step.
    pub fn viscosity_field(&self) -> &ViscosityField<T> {
        &self.nu
    }

    pub fn lambda_max(&self) -> T {
        self.lambda
    }

    fn load(&mut self, t: T, y: &[T]) {
        self.input.values_mut().copy_from_slice(y);
        self.input.time = t;
    }
}

impl<T: Real> System<T> for ViscousSystem<T> {
    fn prepare(&mut self, t: T, y: &[T]) -> Result<Prepared<T>> {
        self.load(t, y);
        self.disc.check_admissible(&self.input)?;
        self.lambda = self.disc.problem.max_wave_speed(&self.input)?;
        let nu = compute_viscosity(
            &self.input,
            &self.disc.mesh,
            &self.disc.elem,
            self.disc.problem.detector_component(),
            self.lambda,
            &self.viscosity,
        )?;
        let changed = !self.prepared_once || nu.vertex_values() != self.nu.vertex_values();
        self.nu = nu;
        self.prepared_once = true;
        let cap = dt_cap(self.lambda, self.nu.max(), self.disc.mesh.h_min(), self.disc.elem.degree(), self.cfl);
        Ok(Prepared { dt_cap: cap, nu_max: self.nu.max(), changed })
    }

    fn rhs(&mut self, t: T, y: &[T], out: &mut [T]) -> Result<()> {
        self.load(t, y);
        self.disc.rhs(&self.input, &self.nu, &mut self.output)?;
        out.copy_from_slice(self.output.values());
        Ok(())
    }
}

/// What to keep while a simulation runs.
#[derive(Clone, Debug, Default)]
pub struct RecordOptions<T> {
    /// Keep the raw per-element viscosity of every accepted step.
    pub viscosity_history: bool,
    /// Times at which to snapshot the state (the integrator lands on them).
    pub snapshot_times: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct ViscositySample<T> {
    pub t: T,
    pub raw: Vec<T>,
    pub smoothness: Vec<T>,
    pub norms: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct SimulationOutput<T> {
    pub state: FieldState<T>,
    pub log: Vec<StepRecord<T>>,
    pub viscosity: Vec<ViscositySample<T>>,
    pub snapshots: Vec<FieldState<T>>,
    pub rhs_evaluations: usize,
    /// Number of accepted steps in which at least one element had ν > 0.
    pub activated_steps: usize,
}

/// Runs `initial` to `disc.problem.final_time`.
pub fn simulate<T: Real>(
    disc: Discretization<T>,
    viscosity: ViscosityConfig<T>,
    ctrl: &StepController<T>,
    initial: FieldState<T>,
    record: &RecordOptions<T>,
) -> Result<SimulationOutput<T>> {
    let t0 = initial.time;
    let t_end = disc.problem.final_time;
    let (n_eq, k, np) = (initial.n_eq(), initial.n_elem(), initial.np());
    let mut sys = ViscousSystem::new(disc, viscosity, ctrl.cfl);
    let mut history = Vec::new();
    let mut snapshots = Vec::new();
    let mut activated = 0usize;
    let out = integrate(&mut sys, initial.values().to_vec(), t0, t_end, ctrl, &record.snapshot_times, |s, rec, y, hit| {
        let nu = s.viscosity_field();
        if nu.active_elements() > 0 {
            activated += 1;
        }
        if record.viscosity_history {
            history.push(ViscositySample { t: rec.t, raw: nu.raw().to_vec(), smoothness: nu.smoothness.clone(), norms: nu.norms.clone() });
        }
        if hit {
            let mut snap = FieldState::from_values(n_eq, k, np, y.to_vec()).expect("state shape");
            snap.time = rec.t + rec.dt;
            snapshots.push(snap);
        }
    })?;
    let mut state = FieldState::from_values(n_eq, k, np, out.y).expect("state shape");
    state.time = out.t;
    Ok(SimulationOutput {
        state,
        log: out.log,
        viscosity: history,
        snapshots,
        rhs_evaluations: out.rhs_evaluations,
        activated_steps: activated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{Mesh1D, ReferenceElement};
    use crate::pde::ProblemDefinition;

    #[test]
    fn smooth_advection_settles_near_cap_without_rejections() {
        let mesh = Mesh1D::periodic(0.0, 1.0, 8).unwrap();
        let elem = ReferenceElement::new(4).unwrap();
        let disc = Discretization::new(ProblemDefinition::advection(1.0, 1.0), mesh, elem).unwrap();
        let init = disc.interpolate(|x| vec![(2.0 * std::f64::consts::PI * x).sin()]);
        let out = simulate(disc, ViscosityConfig::default(), &StepController::default(), init, &RecordOptions::default())
            .unwrap();
        let accepted: Vec<_> = out.log.iter().filter(|r| r.accepted).collect();
        let late = &accepted[accepted.len() / 2..accepted.len() - 1];
        assert!(late.iter().all(|r| r.dt <= r.dt_cap * (1.0 + 1e-12)));
        assert!(late.iter().all(|r| r.dt >= 0.5 * r.dt_cap), "dt should sit near the cap");
        assert_eq!(out.activated_steps, 0);
        assert!((out.state.time - 1.0).abs() < 1e-14);
    }

    #[test]
    fn every_accepted_step_respects_cap() {
        let mesh = Mesh1D::periodic(0.0, 1.0, 10).unwrap();
        let elem = ReferenceElement::new(5).unwrap();
        let disc = Discretization::new(ProblemDefinition::advection(1.0, 0.3), mesh, elem).unwrap();
        let init = disc.interpolate(|x| vec![if (0.2..0.5).contains(&x) { 1.0 } else { 0.0 }]);
        let out = simulate(disc, ViscosityConfig::default(), &StepController::default(), init, &RecordOptions::default())
            .unwrap();
        assert!(out.activated_steps > 0);
        for r in out.log.iter().filter(|r| r.accepted) {
            assert!(r.dt <= r.dt_cap * (1.0 + 1e-12));
        }
    }
}
