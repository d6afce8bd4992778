use crate::dg::element::ReferenceElement;
use crate::dg::mesh::Mesh1D;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Nodal solution coefficients laid out as (equation, element, node).
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState<T> {
    n_eq: usize,
    n_elem: usize,
    np: usize,
    values: Vec<T>,
    pub time: T,
}

impl<T: Real> FieldState<T> {
    pub fn zeros(n_eq: usize, n_elem: usize, np: usize) -> Self {
        Self { n_eq, n_elem, np, values: vec![T::zero(); n_eq * n_elem * np], time: T::zero() }
    }

    pub fn from_values(n_eq: usize, n_elem: usize, np: usize, values: Vec<T>) -> Result<Self> {
        if values.len() != n_eq * n_elem * np {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                n_eq * n_elem * np,
                values.len()
            )));
        }
        Ok(Self { n_eq, n_elem, np, values, time: T::zero() })
    }

    /// Nodal interpolation of `init(x) -> [u_0, …, u_{n-1}]`.
    ///
    /// Element endpoint nodes are sampled as one-sided limits from inside the
    /// element so that data jumping exactly at a vertex is represented sharply.
    pub fn interpolate(
        n_eq: usize,
        mesh: &Mesh1D<T>,
        elem: &ReferenceElement<T>,
        mut init: impl FnMut(T) -> Vec<T>,
    ) -> Self {
        let np = elem.np();
        let k_count = mesh.num_elements();
        let mut state = Self::zeros(n_eq, k_count, np);
        let nudge = T::of(1e-12);
        for k in 0..k_count {
            for (i, &r) in elem.nodes().iter().enumerate() {
                let r = if i == 0 {
                    r + nudge
                } else if i == np - 1 {
                    r - nudge
                } else {
                    r
                };
                let v = init(mesh.map_to_physical(k, r));
                assert_eq!(v.len(), n_eq, "initial condition arity");
                for (e, val) in v.into_iter().enumerate() {
                    state.set(e, k, i, val);
                }
            }
        }
        state
    }

    #[inline]
    pub fn n_eq(&self) -> usize {
        self.n_eq
    }

    #[inline]
    pub fn n_elem(&self) -> usize {
        self.n_elem
    }

    #[inline]
    pub fn np(&self) -> usize {
        self.np
    }

    #[inline]
    fn offset(&self, eq: usize, k: usize) -> usize {
        (eq * self.n_elem + k) * self.np
    }

    #[inline]
    pub fn get(&self, eq: usize, k: usize, i: usize) -> T {
        self.values[self.offset(eq, k) + i]
    }

    #[inline]
    pub fn set(&mut self, eq: usize, k: usize, i: usize, v: T) {
        let o = self.offset(eq, k);
        self.values[o + i] = v;
    }

    #[inline]
    pub fn element(&self, eq: usize, k: usize) -> &[T] {
        let o = self.offset(eq, k);
        &self.values[o..o + self.np]
    }

    #[inline]
    pub fn element_mut(&mut self, eq: usize, k: usize) -> &mut [T] {
        let o = self.offset(eq, k);
        let np = self.np;
        &mut self.values[o..o + np]
    }

    /// All elements of one equation, contiguous.
    pub fn component(&self, eq: usize) -> &[T] {
        let o = self.offset(eq, 0);
        &self.values[o..o + self.n_elem * self.np]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFinite)
        }
    }

    /// `∫ u_eq dx` of the nodal interpolant.
    pub fn integral(&self, eq: usize, mesh: &Mesh1D<T>, elem: &ReferenceElement<T>) -> T {
        let w = elem.integration_weights();
        (0..self.n_elem)
            .map(|k| {
                let s: T = self.element(eq, k).iter().zip(w).map(|(u, w)| *u * *w).sum();
                s * mesh.h(k) / T::two()
            })
            .sum()
    }

    /// Evaluates component `eq` at physical point `x`.
    pub fn evaluate(&self, eq: usize, x: T, mesh: &Mesh1D<T>, elem: &ReferenceElement<T>) -> Option<T> {
        let (k, r) = mesh.locate(x)?;
        Some(elem.evaluate(self.element(eq, k), r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::mesh::Boundary;

    #[test]
    fn layout_is_equation_element_node() {
        let mut s = FieldState::<f64>::zeros(2, 3, 4);
        s.set(1, 2, 3, 7.0);
        assert_eq!(s.values()[(1 * 3 + 2) * 4 + 3], 7.0);
        assert_eq!(s.element(1, 2)[3], 7.0);
        assert_eq!(s.component(1).len(), 12);
    }

    #[test]
    fn interpolation_keeps_vertex_jumps_sharp() {
        let mesh = Mesh1D::<f64>::uniform(0.0, 1.0, 2, Boundary::DirichletFarfield, Boundary::DirichletFarfield)
            .unwrap();
        let elem = ReferenceElement::new(3).unwrap();
        let s = FieldState::interpolate(1, &mesh, &elem, |x| vec![if x < 0.5 { 1.0 } else { 0.0 }]);
        assert!(s.element(0, 0).iter().all(|&v| v == 1.0));
        assert!(s.element(0, 1).iter().all(|&v| v == 0.0));
        assert!((s.integral(0, &mesh, &elem) - 0.5).abs() < 1e-14);
    }

    #[test]
    fn wrong_length_rejected() {
        assert!(FieldState::<f64>::from_values(1, 2, 3, vec![0.0; 5]).is_err());
    }

    #[test]
    fn non_finite_detected() {
        let mut s = FieldState::<f64>::zeros(1, 1, 2);
        assert!(s.ensure_finite().is_ok());
        s.set(0, 0, 1, f64::NAN);
        assert!(matches!(s.ensure_finite(), Err(Error::NonFinite)));
    }
}
