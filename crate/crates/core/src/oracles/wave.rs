//! d'Alembert solution of `u_t + c v_x = 0, v_t + c u_x = 0`.

use crate::scalar::Real;

fn wrap<T: Real>(y: T, period: T) -> T {
    let r = y - period * (y / period).floor();
    if r >= period {
        r - period
    } else {
        r
    }
}

/// Initial data extended past `[a, b]`: even in `u` and odd in `v` across
/// each wall when `neumann`, plainly periodic otherwise.
fn extended<T: Real>(ic: &impl Fn(T) -> [T; 2], y: T, a: T, b: T, neumann: bool) -> [T; 2] {
    let len = b - a;
    if !neumann {
        let z = a + wrap(y - a, len);
        return ic(z);
    }
    let period = T::two() * len;
    let z = a + wrap(y - a, period);
    if z <= b {
        ic(z)
    } else {
        let m = T::two() * b - z;
        let [u, v] = ic(m);
        [u, -v]
    }
}

/// Exact `(u, v)` at `(x, t)` on `domain = (a, b)`.
pub fn exact_wave<T: Real>(
    ic: impl Fn(T) -> [T; 2],
    c: T,
    x: T,
    t: T,
    domain: (T, T),
    neumann: bool,
) -> [T; 2] {
    let (a, b) = domain;
    if t == T::zero() {
        return ic(x);
    }
    let right_moving = extended(&ic, x - c * t, a, b, neumann);
    let left_moving = extended(&ic, x + c * t, a, b, neumann);
    let wp = right_moving[0] + right_moving[1];
    let wm = left_moving[0] - left_moving[1];
    [T::half() * (wp + wm), T::half() * (wp - wm)]
}
