//! Witness search for "some linear combination makes every block invertible".
//!
//! Several checkers reduce to the same question: given square-or-not blocks
//! `M_b(t) = Σ_j t_j A_(b,j)` depending linearly on parameters `t`, find `t`
//! with every `M_b(t)` invertible. The product of the determinants is a
//! polynomial of total degree `D = Σ_b size(M_b)`, so if it is nonzero it is
//! nonzero somewhere on the grid `{0..=D}^n`; an exhausted grid is a proof
//! that no witness exists.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::{rank, rank_mod_p, Matrix, Scalar, Vector};

const FILTER_PRIME: u64 = 2_147_483_647;

/// Search limits shared by every witness search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budget {
    pub max_summands: usize,
    pub shift_range: i32,
    pub random_trials: usize,
    pub height: i64,
    /// Largest grid that is enumerated exhaustively.
    pub exhaustive_cap: usize,
    pub seed: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_summands: 4, shift_range: 2, random_trials: 64, height: 8, exhaustive_cap: 4096, seed: 0 }
    }
}

impl Budget {
    pub fn with_seed(seed: u64) -> Self {
        Budget { seed, ..Budget::default() }
    }

    /// Applies a `key=value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let bad = |_| format!("invalid value {value:?} for budget key {key:?}");
        match key {
            "max_summands" => self.max_summands = value.parse().map_err(bad)?,
            "shift_range" => self.shift_range = value.parse().map_err(bad)?,
            "random_trials" => self.random_trials = value.parse().map_err(bad)?,
            "height" => self.height = value.parse().map_err(bad)?,
            "exhaustive_cap" => self.exhaustive_cap = value.parse().map_err(bad)?,
            "seed" => self.seed = value.parse().map_err(bad)?,
            _ => return Err(format!("unknown budget key {key:?}")),
        }
        Ok(())
    }
}

/// Why no witness can exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refutation {
    /// Block `block` is `rows x cols` with `rows != cols`.
    NonSquare { block: usize, rows: usize, cols: usize },
    /// The images of all parameter matrices of `block` do not span its target.
    RankDeficient { block: usize },
    /// Every point of the grid `{0..=bound}^params` was tried.
    Exhaustive { bound: usize, params: usize },
}

impl std::fmt::Display for Refutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Refutation::NonSquare { block, rows, cols } => {
                write!(f, "block {block} is {rows}x{cols}, never invertible")
            }
            Refutation::RankDeficient { block } => write!(f, "block {block} has deficient rank for every parameter"),
            Refutation::Exhaustive { bound, params } => {
                write!(f, "no witness on the grid {{0..={bound}}}^{params}, which decides the question")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome<T> {
    Found(T),
    Refuted(Refutation),
    NotFoundWithinBudget,
}

impl<T> Outcome<T> {
    pub fn is_found(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Outcome::Refuted(_))
    }

    pub fn found(self) -> Option<T> {
        match self {
            Outcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Found(t) => Outcome::Found(f(t)),
            Outcome::Refuted(r) => Outcome::Refuted(r),
            Outcome::NotFoundWithinBudget => Outcome::NotFoundWithinBudget,
        }
    }
}

/// One block of a pencil: a `rows x cols` matrix for each parameter.
#[derive(Debug, Clone)]
pub struct Block {
    pub rows: usize,
    pub cols: usize,
    pub terms: Vec<Matrix>,
}

/// A family of blocks depending linearly on the same parameters.
#[derive(Debug, Clone)]
pub struct Pencil {
    params: usize,
    blocks: Vec<Block>,
}

impl Pencil {
    pub fn new(params: usize) -> Self {
        Pencil { params, blocks: Vec::new() }
    }

    /// `terms[j]` is the coefficient matrix of parameter `j`.
    pub fn push(&mut self, rows: usize, cols: usize, terms: Vec<Matrix>) {
        assert_eq!(terms.len(), self.params, "one matrix per parameter");
        assert!(terms.iter().all(|m| m.shape() == (rows, cols)), "block shape");
        self.blocks.push(Block { rows, cols, terms });
    }

    pub fn params(&self) -> usize {
        self.params
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn evaluate(&self, block: usize, t: &[Scalar]) -> Matrix {
        let b = &self.blocks[block];
        let mut m = Matrix::zero(b.rows, b.cols);
        for (c, a) in t.iter().zip(&b.terms) {
            if !c.is_zero() {
                m = m.add(&a.scale(c));
            }
        }
        m
    }

    /// Exact check that `t` makes every block invertible.
    pub fn accepts(&self, t: &[Scalar]) -> bool {
        (0..self.blocks.len()).all(|b| {
            let m = self.evaluate(b, t);
            m.rows() == m.cols() && rank(&m) == m.rows()
        })
    }

    fn passes_filter(&self, t: &[Scalar]) -> bool {
        (0..self.blocks.len()).all(|b| {
            let m = self.evaluate(b, t);
            // an unusable reduction is not evidence either way
            rank_mod_p(&m, FILTER_PRIME).is_none_or(|r| r == m.rows())
        })
    }

    fn quick_refutation(&self) -> Option<Refutation> {
        for (i, b) in self.blocks.iter().enumerate() {
            if b.rows != b.cols {
                return Some(Refutation::NonSquare { block: i, rows: b.rows, cols: b.cols });
            }
            if b.rows == 0 {
                continue;
            }
            let mut stacked = Matrix::zero(b.rows, b.cols * b.terms.len());
            for (j, a) in b.terms.iter().enumerate() {
                stacked.place(0, j * b.cols, a);
            }
            if rank(&stacked) < b.rows {
                return Some(Refutation::RankDeficient { block: i });
            }
        }
        None
    }

    /// Total degree of the product of the block determinants.
    fn degree(&self) -> usize {
        self.blocks.iter().map(|b| b.rows).sum()
    }

    /// Tries, in order: `hint`, each basis vector, the all-ones vector, seeded
    /// random vectors of bounded height, and finally the full grid when it is
    /// within the budget. Every returned point passed [`Pencil::accepts`].
    pub fn search(&self, hint: Option<&[Scalar]>, budget: &Budget) -> Outcome<Vector> {
        if let Some(r) = self.quick_refutation() {
            return Outcome::Refuted(r);
        }
        let n = self.params;
        let tried = |t: Vector| self.passes_filter(&t) && self.accepts(&t);
        if let Some(h) = hint {
            if tried(h.to_vec()) {
                return Outcome::Found(h.to_vec());
            }
        }
        for j in 0..n {
            let t = crate::field::unit_vector(n, j);
            if tried(t.clone()) {
                return Outcome::Found(t);
            }
        }
        let ones = vec![Scalar::one(); n];
        if tried(ones.clone()) {
            return Outcome::Found(ones);
        }
        if n == 0 {
            // the empty combination was the only candidate
            return Outcome::Refuted(Refutation::Exhaustive { bound: 0, params: 0 });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        let h = budget.height.max(1);
        for _ in 0..budget.random_trials {
            let t: Vector = (0..n).map(|_| Scalar::from_int(rng.gen_range(-h..=h))).collect();
            if tried(t.clone()) {
                return Outcome::Found(t);
            }
        }
        let bound = self.degree();
        let points = (bound + 1).checked_pow(n as u32);
        match points {
            Some(p) if p <= budget.exhaustive_cap => {
                let mut digits = vec![0usize; n];
                for _ in 0..p {
                    let t: Vector = digits.iter().map(|&d| Scalar::from_int(d as i64)).collect();
                    if self.accepts(&t) {
                        return Outcome::Found(t);
                    }
                    for d in digits.iter_mut() {
                        *d += 1;
                        if *d <= bound {
                            break;
                        }
                        *d = 0;
                    }
                }
                Outcome::Refuted(Refutation::Exhaustive { bound, params: n })
            }
            _ => Outcome::NotFoundWithinBudget,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_int_rows(rows)
    }

    #[test]
    fn empty_pencil_is_satisfied() {
        let p = Pencil::new(0);
        assert_eq!(p.search(None, &Budget::default()), Outcome::Found(vec![]));
    }

    #[test]
    fn non_square_block_is_refuted() {
        let mut p = Pencil::new(0);
        p.push(1, 0, vec![]);
        assert!(matches!(p.search(None, &Budget::default()), Outcome::Refuted(Refutation::NonSquare { .. })));
    }

    #[test]
    fn needs_a_combination() {
        // t0 * E11 + t1 * E22 is invertible only when both are nonzero
        let mut p = Pencil::new(2);
        p.push(2, 2, vec![m(&[&[1, 0], &[0, 0]]), m(&[&[0, 0], &[0, 1]])]);
        let t = p.search(None, &Budget::default()).found().unwrap();
        assert!(p.accepts(&t));
    }

    #[test]
    fn singular_everywhere_is_refuted_exhaustively() {
        // [[t0, t1], [t0, t1]] has rank <= 1, but the stacked images span k^2
        let mut p = Pencil::new(2);
        p.push(2, 2, vec![m(&[&[1, 0], &[1, 0]]), m(&[&[0, 1], &[0, 1]])]);
        let out = p.search(None, &Budget { random_trials: 4, ..Budget::default() });
        assert!(matches!(out, Outcome::Refuted(Refutation::RankDeficient { .. })));
        // det [[t0, t1], [t1, t0]] = t0^2 - t1^2, so the hint (1, 1) is rejected
        let mut q = Pencil::new(2);
        q.push(2, 2, vec![m(&[&[1, 0], &[0, 1]]), m(&[&[0, 1], &[1, 0]])]);
        let t = q.search(Some(&[Scalar::one(), Scalar::one()]), &Budget::default()).found().unwrap();
        assert_ne!(t[0], t[1]);
    }

    #[test]
    fn grid_decides_when_filters_miss() {
        // [[t0, t0], [t1, t1]] is singular everywhere although the
        // parameter images together span the target.
        let mut p = Pencil::new(2);
        p.push(2, 2, vec![m(&[&[1, 1], &[0, 0]]), m(&[&[0, 0], &[1, 1]])]);
        let out = p.search(None, &Budget::default());
        assert_eq!(out, Outcome::Refuted(Refutation::Exhaustive { bound: 2, params: 2 }));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let mut p = Pencil::new(3);
        let a = m(&[&[1, 0], &[0, 1]]);
        p.push(2, 2, vec![a.clone(), a.neg(), m(&[&[0, 1], &[1, 0]])]);
        let b = Budget::with_seed(7);
        assert_eq!(p.search(None, &b), p.search(None, &b));
    }
}
