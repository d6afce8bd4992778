//! Reference element [-1, 1] with its nodal operator matrices.

use crate::dg::basis::{
    gauss_legendre, gauss_lobatto_nodes, legendre_all, legendre_deriv_all,
};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;

pub const MAX_DEGREE: usize = 20;

/// Nodal reference element of polynomial degree `N` on Gauss–Lobatto nodes.
///
/// All matrices act on nodal coefficient vectors in reference coordinates.
/// Physical operators on an element of width `h` scale the mass matrix by
/// `h/2` and the differentiation and lift matrices by `2/h`.
#[derive(Clone, Debug)]
pub struct ReferenceElement<T> {
    degree: usize,
    nodes: Vec<T>,
    /// `V[i][j] = φ_j(r_i)`
    vandermonde: Matrix<T>,
    inv_vandermonde: Matrix<T>,
    mass: Matrix<T>,
    stiffness: Matrix<T>,
    diff: Matrix<T>,
    /// `M⁻¹ Sᵀ`, the weak-form derivative
    weak_diff: Matrix<T>,
    /// Np × 2: column 0 lifts the left endpoint, column 1 the right.
    lift: Matrix<T>,
    /// Row sums of the mass matrix (the Lobatto weights).
    integration_weights: Vec<T>,
    quad: QuadratureData<T>,
}

/// Gauss rule and the interpolation data needed to evaluate nonlinear
/// volume integrals of nodal polynomials.
#[derive(Clone, Debug)]
pub struct QuadratureData<T> {
    pub points: Vec<T>,
    pub weights: Vec<T>,
    /// nq × Np: nodal values → values at the quadrature points
    pub interp: Matrix<T>,
    /// Np × nq: `M⁻¹ (Dr_q)ᵀ W`, the weak volume derivative acting on
    /// flux samples at the quadrature points
    pub weak_volume: Matrix<T>,
    /// Np × Np: L² projection of `(1 - r)/2 · p` and `(1 + r)/2 · p`
    pub project_left_hat: Matrix<T>,
    pub project_right_hat: Matrix<T>,
}

impl<T: Real> ReferenceElement<T> {
    pub fn new(degree: usize) -> Result<Self> {
        if !(1..=MAX_DEGREE).contains(&degree) {
            return Err(Error::InvalidArgument(format!(
                "polynomial degree must lie in 1..={MAX_DEGREE}, got {degree}"
            )));
        }
        let np = degree + 1;
        let nodes = gauss_lobatto_nodes::<T>(degree);

        let vandermonde = Matrix::from_fn(np, np, |i, j| legendre_all(degree, nodes[i])[j]);
        let grad_vandermonde =
            Matrix::from_fn(np, np, |i, j| legendre_deriv_all(degree, nodes[i])[j]);
        let inv_vandermonde = vandermonde.inverse()?;

        let diff = grad_vandermonde.matmul(&inv_vandermonde);
        // M = (V Vᵀ)⁻¹ = V⁻ᵀ V⁻¹
        let mass = inv_vandermonde.transpose().matmul(&inv_vandermonde);
        let stiffness = mass.matmul(&diff);
        let inv_mass = vandermonde.matmul(&vandermonde.transpose());
        let weak_diff = inv_mass.matmul(&stiffness.transpose());
        let lift = Matrix::from_fn(np, 2, |i, f| inv_mass[(i, if f == 0 { 0 } else { degree })]);
        let integration_weights = (0..np).map(|i| mass.row(i).iter().copied().sum()).collect();

        let quad = QuadratureData::build(degree, &inv_vandermonde, &inv_mass);

        Ok(Self {
            degree,
            nodes,
            vandermonde,
            inv_vandermonde,
            mass,
            stiffness,
            diff,
            weak_diff,
            lift,
            integration_weights,
            quad,
        })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of nodes, `N + 1`.
    #[inline]
    pub fn np(&self) -> usize {
        self.degree + 1
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn vandermonde(&self) -> &Matrix<T> {
        &self.vandermonde
    }

    pub fn inv_vandermonde(&self) -> &Matrix<T> {
        &self.inv_vandermonde
    }

    pub fn mass(&self) -> &Matrix<T> {
        &self.mass
    }

    pub fn stiffness(&self) -> &Matrix<T> {
        &self.stiffness
    }

    pub fn diff(&self) -> &Matrix<T> {
        &self.diff
    }

    pub fn weak_diff(&self) -> &Matrix<T> {
        &self.weak_diff
    }

    pub fn lift(&self) -> &Matrix<T> {
        &self.lift
    }

    pub fn integration_weights(&self) -> &[T] {
        &self.integration_weights
    }

    pub fn quadrature(&self) -> &QuadratureData<T> {
        &self.quad
    }

    /// Modal coefficients `V⁻¹ · nodal` in the orthonormal Legendre basis.
    pub fn nodal_to_modal(&self, nodal: &[T]) -> Vec<T> {
        assert_eq!(nodal.len(), self.np(), "nodal vector length");
        self.inv_vandermonde.mul_vec(nodal)
    }

    pub fn modal_to_nodal(&self, modal: &[T]) -> Vec<T> {
        assert_eq!(modal.len(), self.np(), "modal vector length");
        self.vandermonde.mul_vec(modal)
    }

    /// L² norm of the interpolant over an element of width `h`.
    pub fn element_l2_norm(&self, nodal: &[T], h: T) -> T {
        let mut mu = vec![T::zero(); self.np()];
        self.mass.mul_vec_into(nodal, &mut mu);
        let q: T = nodal.iter().zip(&mu).map(|(a, b)| *a * *b).sum();
        (h / T::two() * q.max(T::zero())).sqrt()
    }

    /// Evaluates the interpolating polynomial at reference coordinate `r`.
    pub fn evaluate(&self, nodal: &[T], r: T) -> T {
        let modal = self.nodal_to_modal(nodal);
        self.evaluate_modal(&modal, r)
    }

    pub fn evaluate_modal(&self, modal: &[T], r: T) -> T {
        legendre_all(self.degree, r).iter().zip(modal).map(|(p, c)| *p * *c).sum()
    }
}

impl<T: Real> QuadratureData<T> {
    fn build(degree: usize, inv_v: &Matrix<T>, inv_mass: &Matrix<T>) -> Self {
        let np = degree + 1;
        // exact to degree 3N: ⌈(3N+1)/2⌉ points
        let nq = (3 * degree + 2) / 2;
        let (points, weights) = gauss_legendre::<T>(nq);
        let vq = Matrix::from_fn(nq, np, |q, j| legendre_all(degree, points[q])[j]);
        let vrq = Matrix::from_fn(nq, np, |q, j| legendre_deriv_all(degree, points[q])[j]);
        let interp = vq.matmul(inv_v);
        let dr_q = vrq.matmul(inv_v);
        let weighted = Matrix::from_fn(np, nq, |i, q| dr_q[(q, i)] * weights[q]);
        let weak_volume = inv_mass.matmul(&weighted);

        // projection of P1-weighted products; N+1 Gauss points suffice for degree 2N+1
        let (pp, pw) = gauss_legendre::<T>(np + 1);
        let ip = Matrix::from_fn(pp.len(), np, |q, j| legendre_all(degree, pp[q])[j]).matmul(inv_v);
        let weighted_mass = |hat: &dyn Fn(T) -> T| {
            let m = Matrix::from_fn(np, np, |i, j| {
                (0..pp.len()).map(|q| pw[q] * hat(pp[q]) * ip[(q, i)] * ip[(q, j)]).sum()
            });
            inv_mass.matmul(&m)
        };
        let project_left_hat = weighted_mass(&|r| (T::one() - r) / T::two());
        let project_right_hat = weighted_mass(&|r| (T::one() + r) / T::two());

        Self { points, weights, interp, weak_volume, project_left_hat, project_right_hat }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::basis::legendre_eval;

    #[test]
    fn rejects_out_of_range_degree() {
        assert!(ReferenceElement::<f64>::new(0).is_err());
        assert!(ReferenceElement::<f64>::new(21).is_err());
        assert!(ReferenceElement::<f64>::new(20).is_ok());
    }

    #[test]
    fn linear_element_differentiation() {
        let e = ReferenceElement::<f64>::new(1).unwrap();
        let d = e.diff();
        for (i, j, v) in [(0, 0, -0.5), (0, 1, 0.5), (1, 0, -0.5), (1, 1, 0.5)] {
            assert!((d[(i, j)] - v).abs() < 1e-15);
        }
    }

    #[test]
    fn differentiation_rows_sum_to_zero() {
        for n in 1..=15 {
            let e = ReferenceElement::<f64>::new(n).unwrap();
            for i in 0..e.np() {
                let s: f64 = e.diff().row(i).iter().sum();
                assert!(s.abs() < 1e-12, "N={n}, row {i}: {s}");
            }
        }
    }

    #[test]
    fn differentiation_exact_on_monomials() {
        for n in [3usize, 5, 9, 12] {
            let e = ReferenceElement::<f64>::new(n).unwrap();
            for m in 1..=n {
                let u: Vec<f64> = e.nodes().iter().map(|r| r.powi(m as i32)).collect();
                let du = e.diff().mul_vec(&u);
                for (k, r) in e.nodes().iter().enumerate() {
                    let exact = m as f64 * r.powi(m as i32 - 1);
                    assert!((du[k] - exact).abs() < 1e-10, "N={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn mass_matrix_matches_quadrature_of_lagrange_products() {
        let n = 10;
        let e = ReferenceElement::<f64>::new(n).unwrap();
        let (x, w) = gauss_legendre::<f64>((3 * n + 1).div_ceil(2));
        // l_i(x) via nodal interpolation of unit vectors
        let lagrange = |i: usize, r: f64| {
            let mut unit = vec![0.0; e.np()];
            unit[i] = 1.0;
            e.evaluate(&unit, r)
        };
        for i in 0..e.np() {
            for j in 0..e.np() {
                let q: f64 = x.iter().zip(&w).map(|(&r, &wi)| wi * lagrange(i, r) * lagrange(j, r)).sum();
                assert!((e.mass()[(i, j)] - q).abs() < 1e-12, "({i},{j})");
            }
        }
    }

    #[test]
    fn mass_is_symmetric_positive() {
        let e = ReferenceElement::<f64>::new(7).unwrap();
        let m = e.mass();
        assert!(m.max_abs_diff(&m.transpose()) < 1e-14);
        let total: f64 = e.integration_weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
        assert!(e.integration_weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn differentiation_equals_inverse_mass_times_stiffness() {
        let e = ReferenceElement::<f64>::new(8).unwrap();
        let d = e.mass().inverse().unwrap().matmul(e.stiffness());
        assert!(d.max_abs_diff(e.diff()) < 1e-11);
    }

    #[test]
    fn lift_reproduces_endpoint_indicators() {
        let e = ReferenceElement::<f64>::new(6).unwrap();
        let ml = e.mass().matmul(e.lift());
        for i in 0..e.np() {
            let left = if i == 0 { 1.0 } else { 0.0 };
            let right = if i == e.degree() { 1.0 } else { 0.0 };
            assert!((ml[(i, 0)] - left).abs() < 1e-12);
            assert!((ml[(i, 1)] - right).abs() < 1e-12);
        }
    }

    #[test]
    fn modal_transform_of_constant_and_basis_function() {
        let e = ReferenceElement::<f64>::new(6).unwrap();
        let c = vec![3.0; e.np()];
        let q = e.nodal_to_modal(&c);
        assert!((q[0] - 3.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!(q[1..].iter().all(|v| v.abs() < 1e-12));

        let phi3: Vec<f64> = e.nodes().iter().map(|&r| legendre_eval(3, r)).collect();
        let q = e.nodal_to_modal(&phi3);
        for (n, v) in q.iter().enumerate() {
            let expect = if n == 3 { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn element_norm_examples() {
        let e = ReferenceElement::<f64>::new(5).unwrap();
        let ones = vec![1.0; e.np()];
        assert!((e.element_l2_norm(&ones, 2.0) - 2f64.sqrt()).abs() < 1e-13);
        let phi1: Vec<f64> = e.nodes().iter().map(|&r| legendre_eval(1, r)).collect();
        assert!((e.element_l2_norm(&phi1, 2.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn weak_volume_operator_integrates_polynomial_flux() {
        // for flux samples of a degree-N polynomial f, weak_volume·f_q = M⁻¹ Sᵀ f
        let e = ReferenceElement::<f64>::new(5).unwrap();
        let f: Vec<f64> = e.nodes().iter().map(|r| 1.0 + r - 2.0 * r.powi(4)).collect();
        let fq = e.quadrature().interp.mul_vec(&f);
        let a = e.quadrature().weak_volume.mul_vec(&fq);
        let b = e.weak_diff().mul_vec(&f);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-11);
        }
        assert_eq!(e.quadrature().points.len(), 8);
    }

    #[test]
    fn generic_over_single_precision() {
        let e = ReferenceElement::<f32>::new(4).unwrap();
        let u: Vec<f32> = e.nodes().iter().map(|r| r * r).collect();
        let du = e.diff().mul_vec(&u);
        for (k, r) in e.nodes().iter().enumerate() {
            assert!((du[k] - 2.0 * r).abs() < 1e-4);
        }
    }
}
