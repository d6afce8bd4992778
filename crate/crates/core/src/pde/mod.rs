//! Semi-discrete right-hand sides for advection, the first-order wave
//! system, and the Euler equations, each with artificial viscosity.

pub mod diffusion;
pub mod flux;

use serde::Serialize;

use crate::dg::{Boundary, FieldState, Mesh1D, ReferenceElement};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::viscosity::ViscosityField;

pub use diffusion::{ip_diffusion_add, ip_diffusion_rhs, DiffusionGhost};
pub use flux::{
    euler_flux, euler_llf, euler_primitive, llf_flux, upwind_flux_advection, wave_upwind_flux, Primitive,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Advection,
    Wave,
    Euler,
}

impl ProblemKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "advection" => Some(Self::Advection),
            "wave" => Some(Self::Wave),
            "euler" => Some(Self::Euler),
            _ => None,
        }
    }

    pub fn n_eq(self) -> usize {
        match self {
            Self::Advection => 1,
            Self::Wave => 2,
            Self::Euler => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Advection => "advection",
            Self::Wave => "wave",
            Self::Euler => "euler",
        }
    }
}

/// Which side of the domain a boundary condition applies to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemDefinition<T> {
    pub kind: ProblemKind,
    /// Advection velocity.
    pub velocity: T,
    /// Wave speed.
    pub wave_speed: T,
    pub gamma: T,
    pub final_time: T,
    /// Conserved exterior states for far-field boundaries (left, right).
    pub farfield: [[T; 3]; 2],
}

impl<T: Real> ProblemDefinition<T> {
    fn base(kind: ProblemKind, final_time: T) -> Self {
        Self {
            kind,
            velocity: T::one(),
            wave_speed: T::one(),
            gamma: T::of(1.4),
            final_time,
            farfield: [[T::zero(); 3]; 2],
        }
    }

    pub fn advection(velocity: T, final_time: T) -> Self {
        Self { velocity, ..Self::base(ProblemKind::Advection, final_time) }
    }

    pub fn wave(c: T, final_time: T) -> Self {
        Self { wave_speed: c, ..Self::base(ProblemKind::Wave, final_time) }
    }

    pub fn euler(gamma: T, final_time: T) -> Self {
        Self { gamma, ..Self::base(ProblemKind::Euler, final_time) }
    }

    pub fn with_farfield(mut self, left: [T; 3], right: [T; 3]) -> Self {
        self.farfield = [left, right];
        self
    }

    pub fn n_eq(&self) -> usize {
        self.kind.n_eq()
    }

    /// Component the smoothness detector inspects: `u`, `u`, and `ρ`.
    pub fn detector_component(&self) -> usize {
        0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.final_time > T::zero()) {
            return Err(Error::config("problem.T", "final time must be positive"));
        }
        match self.kind {
            ProblemKind::Wave if !(self.wave_speed > T::zero()) => {
                Err(Error::config("problem.c", "wave speed must be positive"))
            }
            ProblemKind::Euler if !(self.gamma > T::one()) => {
                Err(Error::config("problem.gamma", "gamma must exceed 1"))
            }
            ProblemKind::Advection if !self.velocity.is_finite() => {
                Err(Error::config("problem.velocity", "velocity must be finite"))
            }
            _ => Ok(()),
        }
    }

    /// Physical flux at one point.
    #[inline]
    pub fn flux(&self, q: &[T; 3]) -> [T; 3] {
        match self.kind {
            ProblemKind::Advection => [self.velocity * q[0], T::zero(), T::zero()],
            ProblemKind::Wave => [self.wave_speed * q[1], self.wave_speed * q[0], T::zero()],
            ProblemKind::Euler => euler_flux(q, self.gamma),
        }
    }

    /// +x-directed numerical flux between `left` and `right` states.
    pub fn numerical_flux(&self, left: &[T; 3], right: &[T; 3], element: usize) -> Result<[T; 3]> {
        Ok(match self.kind {
            ProblemKind::Advection => {
                [upwind_flux_advection(left[0], right[0], self.velocity, T::one()), T::zero(), T::zero()]
            }
            ProblemKind::Wave => {
                let f = wave_upwind_flux([left[0], left[1]], [right[0], right[1]], self.wave_speed);
                [f[0], f[1], T::zero()]
            }
            ProblemKind::Euler => euler_llf(left, right, self.gamma, element)?,
        })
    }

    /// Largest characteristic speed over all nodes of `state`.
    pub fn max_wave_speed(&self, state: &FieldState<T>) -> Result<T> {
        match self.kind {
            ProblemKind::Advection => Ok(self.velocity.abs()),
            ProblemKind::Wave => Ok(self.wave_speed),
            ProblemKind::Euler => {
                let mut lam = T::zero();
                for k in 0..state.n_elem() {
                    for i in 0..state.np() {
                        let q = [state.get(0, k, i), state.get(1, k, i), state.get(2, k, i)];
                        let p = euler_primitive(&q, self.gamma, k).map_err(|e| at_time(e, state.time))?;
                        lam = lam.max(p.u.abs() + p.sound_speed(self.gamma));
                    }
                }
                Ok(lam)
            }
        }
    }

    /// Exterior state at a non-periodic boundary.
    pub fn apply_bc(&self, boundary: Boundary, side: Side, interior: &[T; 3]) -> [T; 3] {
        match boundary {
            Boundary::Periodic => *interior,
            Boundary::NeumannWave => {
                let mut g = *interior;
                if let Some(odd) = self.odd_component() {
                    g[odd] = -g[odd];
                }
                g
            }
            Boundary::DirichletFarfield => match side {
                Side::Left => self.farfield[0],
                Side::Right => self.farfield[1],
            },
        }
    }

    /// Component flipped by a reflecting boundary: `v` for the wave system,
    /// momentum for Euler.
    fn odd_component(&self) -> Option<usize> {
        match self.kind {
            ProblemKind::Advection => None,
            ProblemKind::Wave | ProblemKind::Euler => Some(1),
        }
    }

    fn diffusion_ghost(&self, boundary: Boundary, side: Side, eq: usize) -> DiffusionGhost<T> {
        match boundary {
            Boundary::Periodic => DiffusionGhost::Even,
            Boundary::NeumannWave if self.odd_component() == Some(eq) => DiffusionGhost::Odd,
            Boundary::NeumannWave => DiffusionGhost::Even,
            Boundary::DirichletFarfield => {
                DiffusionGhost::Fixed(self.farfield[if side == Side::Left { 0 } else { 1 }][eq])
            }
        }
    }
}

fn at_time<T: Real>(e: Error, t: T) -> Error {
    match e {
        Error::Positivity { element, density, pressure, .. } => {
            Error::Positivity { element, time: t.to_f64_lossy(), density, pressure }
        }
        other => other,
    }
}

/// Problem, mesh and reference element bundled into one semi-discrete operator.
#[derive(Clone, Debug)]
pub struct Discretization<T> {
    pub problem: ProblemDefinition<T>,
    pub mesh: Mesh1D<T>,
    pub elem: ReferenceElement<T>,
}

impl<T: Real> Discretization<T> {
    pub fn new(problem: ProblemDefinition<T>, mesh: Mesh1D<T>, elem: ReferenceElement<T>) -> Result<Self> {
        problem.validate()?;
        Ok(Self { problem, mesh, elem })
    }

    pub fn n_eq(&self) -> usize {
        self.problem.n_eq()
    }

    pub fn zero_state(&self) -> FieldState<T> {
        FieldState::zeros(self.n_eq(), self.mesh.num_elements(), self.elem.np())
    }

    pub fn interpolate(&self, init: impl FnMut(T) -> Vec<T>) -> FieldState<T> {
        FieldState::interpolate(self.n_eq(), &self.mesh, &self.elem, init)
    }

    /// Rejects non-finite values, and non-positive density or pressure for Euler.
    pub fn check_admissible(&self, state: &FieldState<T>) -> Result<()> {
        state.ensure_finite()?;
        if self.problem.kind == ProblemKind::Euler {
            self.problem.max_wave_speed(state)?;
        }
        Ok(())
    }

    #[inline]
    fn point(state: &FieldState<T>, n_eq: usize, k: usize, i: usize) -> [T; 3] {
        let mut q = [T::zero(); 3];
        for (e, v) in q.iter_mut().enumerate().take(n_eq) {
            *v = state.get(e, k, i);
        }
        q
    }

    /// (left, right) traces at each of the K+1 faces.
    fn face_states(&self, state: &FieldState<T>) -> Vec<([T; 3], [T; 3])> {
        let k_count = self.mesh.num_elements();
        let n = self.elem.degree();
        let m = self.n_eq();
        let mut faces = Vec::with_capacity(k_count + 1);
        for f in 0..=k_count {
            let left = if f > 0 {
                Some(Self::point(state, m, f - 1, n))
            } else if self.mesh.is_periodic() {
                Some(Self::point(state, m, k_count - 1, n))
            } else {
                None
            };
            let right = if f < k_count {
                Some(Self::point(state, m, f, 0))
            } else if self.mesh.is_periodic() {
                Some(Self::point(state, m, 0, 0))
            } else {
                None
            };
            faces.push(match (left, right) {
                (Some(l), Some(r)) => (l, r),
                (None, Some(r)) => (self.problem.apply_bc(self.mesh.left_boundary(), Side::Left, &r), r),
                (Some(l), None) => (l, self.problem.apply_bc(self.mesh.right_boundary(), Side::Right, &l)),
                (None, None) => unreachable!(),
            });
        }
        faces
    }

    /// Full rate `du/dt` including the artificial-viscosity term.
    pub fn rhs(&self, state: &FieldState<T>, nu: &ViscosityField<T>, out: &mut FieldState<T>) -> Result<()> {
        self.convective_rhs(state, out).map_err(|e| at_time(e, state.time))?;
        self.add_diffusion(state, nu, out);
        Ok(())
    }

    pub fn rhs_alloc(&self, state: &FieldState<T>, nu: &ViscosityField<T>) -> Result<FieldState<T>> {
        let mut out = self.zero_state();
        self.rhs(state, nu, &mut out)?;
        Ok(out)
    }

    fn add_diffusion(&self, state: &FieldState<T>, nu: &ViscosityField<T>, out: &mut FieldState<T>) {
        if nu.is_zero() {
            return;
        }
        let k_count = self.mesh.num_elements();
        let len = k_count * self.elem.np();
        for eq in 0..self.n_eq() {
            let left = self.problem.diffusion_ghost(self.mesh.left_boundary(), Side::Left, eq);
            let right = self.problem.diffusion_ghost(self.mesh.right_boundary(), Side::Right, eq);
            let o = eq * len;
            ip_diffusion_add(
                state.component(eq),
                nu,
                &self.mesh,
                &self.elem,
                left,
                right,
                &mut out.values_mut()[o..o + len],
            );
        }
    }

    fn convective_rhs(&self, state: &FieldState<T>, out: &mut FieldState<T>) -> Result<()> {
        if self.problem.kind == ProblemKind::Euler {
            self.problem.max_wave_speed(state)?;
        }
        let faces = self.face_states(state);
        let mut fstar = Vec::with_capacity(faces.len());
        for (f, (l, r)) in faces.iter().enumerate() {
            fstar.push(self.problem.numerical_flux(l, r, f.min(self.mesh.num_elements() - 1))?);
        }
        match self.problem.kind {
            ProblemKind::Euler => self.weak_volume(state, &fstar, out),
            _ => {
                self.strong_volume(state, &fstar, out);
                Ok(())
            }
        }
    }

    fn strong_volume(&self, state: &FieldState<T>, fstar: &[[T; 3]], out: &mut FieldState<T>) {
        let np = self.elem.np();
        let n = self.elem.degree();
        let m = self.n_eq();
        let dr = self.elem.diff();
        let lift = self.elem.lift();
        let mut fl = vec![[T::zero(); 3]; np];
        let mut col = vec![T::zero(); np];
        let mut dcol = vec![T::zero(); np];
        for k in 0..self.mesh.num_elements() {
            let scale = T::two() / self.mesh.h(k);
            for (i, f) in fl.iter_mut().enumerate() {
                *f = self.problem.flux(&Self::point(state, m, k, i));
            }
            for eq in 0..m {
                for i in 0..np {
                    col[i] = fl[i][eq];
                }
                dr.mul_vec_into(&col, &mut dcol);
                let jl = fstar[k][eq] - fl[0][eq];
                let jr = fl[n][eq] - fstar[k + 1][eq];
                let oe = out.element_mut(eq, k);
                for i in 0..np {
                    oe[i] = scale * (-dcol[i] + lift[(i, 0)] * jl + lift[(i, 1)] * jr);
                }
            }
        }
    }

    fn weak_volume(&self, state: &FieldState<T>, fstar: &[[T; 3]], out: &mut FieldState<T>) -> Result<()> {
        let np = self.elem.np();
        let quad = self.elem.quadrature();
        let nq = quad.points.len();
        let lift = self.elem.lift();
        let mut uq = vec![[T::zero(); 3]; nq];
        let mut col = vec![T::zero(); nq];
        let mut vol = vec![T::zero(); np];
        let mut tmp = vec![T::zero(); nq];
        let mut fq = vec![[T::zero(); 3]; nq];
        for k in 0..self.mesh.num_elements() {
            let scale = T::two() / self.mesh.h(k);
            for eq in 0..3 {
                quad.interp.mul_vec_into(state.element(eq, k), &mut tmp);
                for q in 0..nq {
                    uq[q][eq] = tmp[q];
                }
            }
            if uq.iter().any(|q| !(q[0] > T::zero())) {
                let rho = uq.iter().map(|q| q[0]).fold(T::infinity(), T::min);
                return Err(Error::Positivity {
                    element: k,
                    time: f64::NAN,
                    density: rho.to_f64_lossy(),
                    pressure: f64::NAN,
                });
            }
            for (f, q) in fq.iter_mut().zip(&uq) {
                *f = euler_flux(q, self.problem.gamma);
            }
            for eq in 0..3 {
                for q in 0..nq {
                    col[q] = fq[q][eq];
                }
                quad.weak_volume.mul_vec_into(&col, &mut vol);
                let (fl, fr) = (fstar[k][eq], fstar[k + 1][eq]);
                let oe = out.element_mut(eq, k);
                for i in 0..np {
                    oe[i] = scale * (vol[i] - lift[(i, 1)] * fr + lift[(i, 0)] * fl);
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disc(p: ProblemDefinition<f64>, k: usize, n: usize, mesh: Option<Mesh1D<f64>>) -> Discretization<f64> {
        let mesh = mesh.unwrap_or_else(|| Mesh1D::periodic(0.0, 1.0, k).unwrap());
        Discretization::new(p, mesh, ReferenceElement::new(n).unwrap()).unwrap()
    }

    #[test]
    fn advection_exact_on_polynomials() {
        // a global polynomial is not periodic; only the interior faces are
        // continuous, so check elements whose upwind neighbor is interior
        let m = Mesh1D::uniform(0.0, 1.0, 4, Boundary::DirichletFarfield, Boundary::DirichletFarfield).unwrap();
        let f = |x: f64| x * x * x - 2.0 * x;
        let p = ProblemDefinition::advection(2.0, 1.0).with_farfield([f(0.0), 0.0, 0.0], [f(1.0), 0.0, 0.0]);
        let d = disc(p, 4, 4, Some(m));
        let s = d.interpolate(|x| vec![f(x)]);
        let r = d.rhs_alloc(&s, &ViscosityField::zeros(4)).unwrap();
        for (k, xs) in d.mesh.node_coordinates(&d.elem).iter().enumerate() {
            for (i, x) in xs.iter().enumerate() {
                let exact = -2.0 * (3.0 * x * x - 2.0);
                assert!((r.get(0, k, i) - exact).abs() < 1e-9, "k={k} i={i}");
            }
        }
    }

    #[test]
    fn free_stream_is_preserved() {
        let e = disc(ProblemDefinition::euler(1.4, 1.0), 5, 4, None);
        let s = e.interpolate(|_| vec![1.2, 0.6, 3.0]);
        let r = e.rhs_alloc(&s, &crate::viscosity::smooth_p1(&[0.1; 5], &e.mesh)).unwrap();
        assert!(r.values().iter().all(|v| v.abs() < 1e-12));
        let w = disc(ProblemDefinition::wave(1.0, 1.0), 5, 4, None);
        let s = w.interpolate(|_| vec![1.5, -0.5]);
        assert!(w.rhs_alloc(&s, &ViscosityField::zeros(5)).unwrap().values().iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn wave_neumann_ghost_mirrors() {
        let p = ProblemDefinition::wave(1.0, 1.0);
        assert_eq!(p.apply_bc(Boundary::NeumannWave, Side::Left, &[2.0, 3.0, 0.0]), [2.0, -3.0, 0.0]);
        let sod = ProblemDefinition::euler(1.4, 0.25).with_farfield([1.0, 0.0, 2.5], [0.125, 0.0, 0.25]);
        assert_eq!(sod.apply_bc(Boundary::DirichletFarfield, Side::Left, &[9.0, 9.0, 9.0]), [1.0, 0.0, 2.5]);
    }

    #[test]
    fn periodic_faces_wrap() {
        let d = disc(ProblemDefinition::advection(1.0, 1.0), 3, 2, None);
        let mut s = d.zero_state();
        s.set(0, 2, 2, 5.0);
        s.set(0, 0, 0, 1.0);
        let faces = d.face_states(&s);
        assert_eq!(faces[0].0[0], 5.0);
        assert_eq!(faces[3].1[0], 1.0);
    }

    #[test]
    fn euler_positivity_failure_is_reported() {
        let d = disc(ProblemDefinition::euler(1.4, 1.0), 3, 2, None);
        let mut s = d.interpolate(|_| vec![1.0, 0.0, 2.5]);
        s.set(0, 1, 1, -0.1);
        s.time = 0.5;
        match d.rhs_alloc(&s, &ViscosityField::zeros(3)) {
            Err(Error::Positivity { element, time, .. }) => {
                assert_eq!(element, 1);
                assert_eq!(time, 0.5);
            }
            other => panic!("{other:?}"),
        }
    }
}
