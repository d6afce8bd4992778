use serde::{Deserialize, Serialize};

use crate::dg::element::ReferenceElement;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Boundary treatment at one end of the domain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Periodic,
    /// Reflecting wall for the wave system: exterior `u` mirrors, `v` flips.
    NeumannWave,
    /// Exterior state frozen at the initial far-field value.
    DirichletFarfield,
}

impl Boundary {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "periodic" => Some(Self::Periodic),
            "neumann" | "neumann-wave" => Some(Self::NeumannWave),
            "farfield" | "dirichlet-farfield" => Some(Self::DirichletFarfield),
            _ => None,
        }
    }
}

/// Ordered partition of `[a, b]` into `K` intervals.
#[derive(Clone, Debug)]
pub struct Mesh1D<T> {
    vertices: Vec<T>,
    left: Boundary,
    right: Boundary,
}

impl<T: Real> Mesh1D<T> {
    pub fn new(vertices: Vec<T>, left: Boundary, right: Boundary) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidArgument("mesh needs at least one element".into()));
        }
        if vertices.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument("mesh vertices must be strictly increasing".into()));
        }
        if (left == Boundary::Periodic) != (right == Boundary::Periodic) {
            return Err(Error::InvalidArgument(
                "periodic boundary must be set on both ends or neither".into(),
            ));
        }
        Ok(Self { vertices, left, right })
    }

    pub fn uniform(a: T, b: T, k: usize, left: Boundary, right: Boundary) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("mesh needs at least one element".into()));
        }
        let h = (b - a) / T::of_usize(k);
        let mut v: Vec<T> = (0..=k).map(|i| a + h * T::of_usize(i)).collect();
        v[k] = b;
        Self::new(v, left, right)
    }

    pub fn periodic(a: T, b: T, k: usize) -> Result<Self> {
        Self::uniform(a, b, k, Boundary::Periodic, Boundary::Periodic)
    }

    #[inline]
    pub fn num_elements(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[T] {
        &self.vertices
    }

    pub fn domain(&self) -> (T, T) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    #[inline]
    pub fn h(&self, k: usize) -> T {
        self.vertices[k + 1] - self.vertices[k]
    }

    pub fn h_min(&self) -> T {
        (0..self.num_elements()).map(|k| self.h(k)).fold(T::infinity(), T::min)
    }

    pub fn left_boundary(&self) -> Boundary {
        self.left
    }

    pub fn right_boundary(&self) -> Boundary {
        self.right
    }

    pub fn is_periodic(&self) -> bool {
        self.left == Boundary::Periodic
    }

    /// Physical coordinate of reference point `r` in element `k`.
    #[inline]
    pub fn map_to_physical(&self, k: usize, r: T) -> T {
        self.vertices[k] + (T::one() + r) / T::two() * self.h(k)
    }

    /// Element containing `x` and the reference coordinate inside it.
    /// Points on an interior vertex resolve to the element on the right.
    pub fn locate(&self, x: T) -> Option<(usize, T)> {
        let (a, b) = self.domain();
        if x < a || x > b {
            return None;
        }
        let k = match self.vertices.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(self.num_elements() - 1),
            Err(i) => i - 1,
        };
        let r = T::two() * (x - self.vertices[k]) / self.h(k) - T::one();
        Some((k, r.max(-T::one()).min(T::one())))
    }

    /// Physical node coordinates, element-major.
    pub fn node_coordinates(&self, elem: &ReferenceElement<T>) -> Vec<Vec<T>> {
        (0..self.num_elements())
            .map(|k| elem.nodes().iter().map(|&r| self.map_to_physical(k, r)).collect())
            .collect()
    }
}
