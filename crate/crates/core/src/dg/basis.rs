//! Orthonormal Legendre basis and 1D point sets on the reference interval [-1, 1].

use crate::scalar::Real;

/// Unnormalized Legendre polynomials P_0..=P_n at `r` and their derivatives.
fn legendre_table<T: Real>(n: usize, r: T) -> (Vec<T>, Vec<T>) {
    let mut p = vec![T::zero(); n + 1];
    let mut dp = vec![T::zero(); n + 1];
    p[0] = T::one();
    if n >= 1 {
        p[1] = r;
        dp[1] = T::one();
    }
    for k in 1..n {
        let kf = T::of_usize(k);
        p[k + 1] = ((T::two() * kf + T::one()) * r * p[k] - kf * p[k - 1]) / (kf + T::one());
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k
        dp[k + 1] = dp[k - 1] + (T::two() * kf + T::one()) * p[k];
    }
    (p, dp)
}

#[inline]
fn normalization<T: Real>(n: usize) -> T {
    ((T::two() * T::of_usize(n) + T::one()) / T::two()).sqrt()
}

/// L²([-1,1])-orthonormal Legendre polynomial φ_n(r).
pub fn legendre_eval<T: Real>(n: usize, r: T) -> T {
    let (p, _) = legendre_table(n, r);
    p[n] * normalization::<T>(n)
}

/// Derivative φ_n'(r) of the orthonormal Legendre polynomial.
pub fn legendre_deriv<T: Real>(n: usize, r: T) -> T {
    let (_, dp) = legendre_table(n, r);
    dp[n] * normalization::<T>(n)
}

/// All φ_0..=φ_n at `r`.
pub fn legendre_all<T: Real>(n: usize, r: T) -> Vec<T> {
    let (p, _) = legendre_table(n, r);
    p.iter().enumerate().map(|(k, &v)| v * normalization::<T>(k)).collect()
}

/// All φ_0'..=φ_n' at `r`.
pub fn legendre_deriv_all<T: Real>(n: usize, r: T) -> Vec<T> {
    let (_, dp) = legendre_table(n, r);
    dp.iter().enumerate().map(|(k, &v)| v * normalization::<T>(k)).collect()
}

/// Gauss–Lobatto–Legendre nodes for degree `n` (n+1 points), ascending.
///
/// Newton iteration on (1-r²)P_n'(r) = 0 started from Chebyshev–Lobatto points.
pub fn gauss_lobatto_nodes<T: Real>(n: usize) -> Vec<T> {
    assert!(n >= 1);
    let np = n + 1;
    let mut x: Vec<T> = (0..np)
        .map(|i| (T::PI() * T::of_usize(i) / T::of_usize(n)).cos())
        .collect();
    let nf = T::of_usize(n);
    for _ in 0..100 {
        let mut max_dx = T::zero();
        for xi in x.iter_mut() {
            let (p, _) = legendre_table(n, *xi);
            let dx = (*xi * p[n] - p[n - 1]) / ((nf + T::one()) * p[n]);
            *xi -= dx;
            max_dx = max_dx.max(dx.abs());
        }
        if max_dx <= T::epsilon() {
            break;
        }
    }
    x.reverse();
    x[0] = -T::one();
    x[n] = T::one();
    // symmetric point set: enforce exact antisymmetry
    for i in 0..np / 2 {
        let v = (x[np - 1 - i] - x[i]) / T::two();
        x[i] = -v;
        x[np - 1 - i] = v;
    }
    if np % 2 == 1 {
        x[n / 2] = T::zero();
    }
    x
}

/// Gauss–Legendre rule with `m` points: (nodes ascending, weights).
pub fn gauss_legendre<T: Real>(m: usize) -> (Vec<T>, Vec<T>) {
    assert!(m >= 1);
    let mut nodes = vec![T::zero(); m];
    let mut weights = vec![T::zero(); m];
    let mf = T::of_usize(m);
    for i in 0..m {
        // Tricomi initial guess
        let mut x = (T::PI() * (T::of_usize(i) + T::of(0.75)) / (mf + T::half())).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_table(m, x);
            let dx = p[m] / dp[m];
            x -= dx;
            if dx.abs() <= T::epsilon() {
                break;
            }
        }
        let (_, dp) = legendre_table(m, x);
        nodes[m - 1 - i] = x;
        weights[m - 1 - i] = T::two() / ((T::one() - x * x) * dp[m] * dp[m]);
    }
    (nodes, weights)
}
