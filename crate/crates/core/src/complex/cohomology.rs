use crate::field::{independent_subset, kernel_basis, SpanSolver, Vector};

use super::CochainComplex;

/// `H^n` of a complex, with explicit bases.
///
/// `representatives` are cycles whose classes form a basis of `H^n`; together
/// with `boundaries` they form a basis of the cycle space.
#[derive(Debug, Clone)]
pub struct Cohomology {
    degree: i32,
    ambient: usize,
    cycles: Vec<Vector>,
    boundaries: Vec<Vector>,
    representatives: Vec<Vector>,
    solver: SpanSolver,
}

impl Cohomology {
    pub(super) fn compute(c: &CochainComplex, n: i32) -> Self {
        let ambient = c.dim(n);
        let cycles = kernel_basis(&c.differential(n));
        let incoming = c.differential(n - 1).columns();
        let boundaries: Vec<Vector> =
            independent_subset(ambient, &incoming).into_iter().map(|i| incoming[i].clone()).collect();
        let mut candidates = boundaries.clone();
        candidates.extend(cycles.iter().cloned());
        let chosen = independent_subset(ambient, &candidates);
        let representatives: Vec<Vector> =
            chosen.iter().filter(|&&i| i >= boundaries.len()).map(|&i| candidates[i].clone()).collect();
        let mut span = boundaries.clone();
        span.extend(representatives.iter().cloned());
        let solver = SpanSolver::new(ambient, &span);
        Cohomology { degree: n, ambient, cycles, boundaries, representatives, solver }
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    /// Dimension of the degree-n chain space.
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn cycle_basis(&self) -> &[Vector] {
        &self.cycles
    }

    pub fn boundary_basis(&self) -> &[Vector] {
        &self.boundaries
    }

    pub fn representatives(&self) -> &[Vector] {
        &self.representatives
    }

    /// Coordinates of the class of `z` in the representative basis, or `None`
    /// when `z` is not a cycle.
    pub fn class_of(&self, z: &[crate::field::Scalar]) -> Option<Vector> {
        let coords = self.solver.coords(z)?;
        Some(coords[self.boundaries.len()..].to_vec())
    }

    pub fn is_boundary(&self, z: &[crate::field::Scalar]) -> bool {
        self.class_of(z).is_some_and(|c| crate::field::is_zero_vector(&c))
    }
}
