//! Interior-penalty discretization of `∂x(ν ∂x u)` for one scalar component.
//!
//! Pass 1 forms `q = ∂x u` in strong form with the central flux `u* = {u}`
//! and projects `σ = ν q` onto the element polynomials. Pass 2 takes the weak
//! divergence with `σ* = {σ} − (N²/h) ν ⟦u⟧`, `h` the smaller adjacent width.

use crate::dg::{Mesh1D, ReferenceElement};
use crate::scalar::Real;
use crate::viscosity::ViscosityField;

/// Exterior data for the diffusion fluxes at a non-periodic end.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiffusionGhost<T> {
    /// `u⁺ = u⁻`, `σ⁺ = −σ⁻`: zero diffusive flux.
    Even,
    /// `u⁺ = −u⁻`, `σ⁺ = σ⁻`.
    Odd,
    /// `u⁺ = g`, `σ⁺ = σ⁻`.
    Fixed(T),
}

/// Returns the diffusion rate for `u` (length K·Np, element-major).
pub fn ip_diffusion_rhs<T: Real>(
    u: &[T],
    nu: &ViscosityField<T>,
    mesh: &Mesh1D<T>,
    elem: &ReferenceElement<T>,
    left: DiffusionGhost<T>,
    right: DiffusionGhost<T>,
) -> Vec<T> {
    let mut out = vec![T::zero(); u.len()];
    ip_diffusion_add(u, nu, mesh, elem, left, right, &mut out);
    out
}

/// Adds the diffusion rate for `u` into `out`.
pub fn ip_diffusion_add<T: Real>(
    u: &[T],
    nu: &ViscosityField<T>,
    mesh: &Mesh1D<T>,
    elem: &ReferenceElement<T>,
    left: DiffusionGhost<T>,
    right: DiffusionGhost<T>,
    out: &mut [T],
) {
    let k_count = mesh.num_elements();
    let np = elem.np();
    let n = elem.degree();
    assert_eq!(u.len(), k_count * np);
    assert_eq!(nu.num_elements(), k_count);
    if nu.is_zero() {
        return;
    }
    let periodic = mesh.is_periodic();
    let first = |k: usize| u[k * np];
    let last = |k: usize| u[k * np + n];

    // central trace of u at each face
    let mut u_star = vec![T::zero(); k_count + 1];
    for f in 1..k_count {
        u_star[f] = T::half() * (last(f - 1) + first(f));
    }
    if periodic {
        let w = T::half() * (last(k_count - 1) + first(0));
        u_star[0] = w;
        u_star[k_count] = w;
    } else {
        u_star[0] = match left {
            DiffusionGhost::Even => first(0),
            DiffusionGhost::Odd => T::zero(),
            DiffusionGhost::Fixed(g) => T::half() * (first(0) + g),
        };
        u_star[k_count] = match right {
            DiffusionGhost::Even => last(k_count - 1),
            DiffusionGhost::Odd => T::zero(),
            DiffusionGhost::Fixed(g) => T::half() * (last(k_count - 1) + g),
        };
    }

    let dr = elem.diff();
    let lift = elem.lift();
    let quad = elem.quadrature();
    let mut sigma = vec![T::zero(); u.len()];
    let mut q = vec![T::zero(); np];
    let mut tmp = vec![T::zero(); np];
    for k in 0..k_count {
        let (nl, nr) = (nu.left(k), nu.right(k));
        if nl == T::zero() && nr == T::zero() {
            continue;
        }
        let ue = &u[k * np..(k + 1) * np];
        let scale = T::two() / mesh.h(k);
        dr.mul_vec_into(ue, &mut q);
        let jl = -(u_star[k] - ue[0]);
        let jr = u_star[k + 1] - ue[n];
        for i in 0..np {
            q[i] = scale * (q[i] + lift[(i, 0)] * jl + lift[(i, 1)] * jr);
        }
        let se = &mut sigma[k * np..(k + 1) * np];
        quad.project_left_hat.mul_vec_into(&q, &mut tmp);
        for i in 0..np {
            se[i] = nl * tmp[i];
        }
        quad.project_right_hat.mul_vec_into(&q, &mut tmp);
        for i in 0..np {
            se[i] += nr * tmp[i];
        }
    }

    let n2 = T::of_usize(n * n);
    let s_first = |k: usize| sigma[k * np];
    let s_last = |k: usize| sigma[k * np + n];
    let mut sigma_star = vec![T::zero(); k_count + 1];
    for f in 1..k_count {
        let tau = n2 / mesh.h(f - 1).min(mesh.h(f)) * nu.left(f);
        sigma_star[f] = T::half() * (s_last(f - 1) + s_first(f)) - tau * (last(f - 1) - first(f));
    }
    if periodic {
        let tau = n2 / mesh.h(k_count - 1).min(mesh.h(0)) * nu.left(0);
        let w = T::half() * (s_last(k_count - 1) + s_first(0)) - tau * (last(k_count - 1) - first(0));
        sigma_star[0] = w;
        sigma_star[k_count] = w;
    } else {
        let tau = n2 / mesh.h(0) * nu.left(0);
        let (ui, si) = (first(0), s_first(0));
        sigma_star[0] = match left {
            DiffusionGhost::Even => T::zero(),
            DiffusionGhost::Odd => si + tau * T::two() * ui,
            DiffusionGhost::Fixed(g) => si - tau * (g - ui),
        };
        let tau = n2 / mesh.h(k_count - 1) * nu.right(k_count - 1);
        let (ui, si) = (last(k_count - 1), s_last(k_count - 1));
        sigma_star[k_count] = match right {
            DiffusionGhost::Even => T::zero(),
            DiffusionGhost::Odd => si - tau * T::two() * ui,
            DiffusionGhost::Fixed(g) => si - tau * (ui - g),
        };
    }

    let wd = elem.weak_diff();
    for k in 0..k_count {
        let se = &sigma[k * np..(k + 1) * np];
        let (sl, sr) = (sigma_star[k], sigma_star[k + 1]);
        if sl == T::zero() && sr == T::zero() && se.iter().all(|v| *v == T::zero()) {
            continue;
        }
        let scale = T::two() / mesh.h(k);
        wd.mul_vec_into(se, &mut tmp);
        let oe = &mut out[k * np..(k + 1) * np];
        for i in 0..np {
            oe[i] += scale * (-tmp[i] + lift[(i, 1)] * sr - lift[(i, 0)] * sl);
        }
    }
}
