use std::fmt;

use super::{DgCategory, Element};

/// A violated identity, located by object names, degrees and basis indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnitNotClosed {
        object: String,
    },
    /// `e_y ∘ f ≠ f` for the basis vector `index` of `hom(x, y)^degree`.
    LeftUnit {
        source: String,
        target: String,
        degree: i32,
        index: usize,
    },
    /// `f ∘ e_x ≠ f`.
    RightUnit {
        source: String,
        target: String,
        degree: i32,
        index: usize,
    },
    /// `d(g∘f) ≠ dg∘f + (-1)^|g| g∘df` for basis vectors `g` of
    /// `hom(y, z)^p`, `f` of `hom(x, y)^q`.
    Leibniz {
        objects: [String; 3],
        degrees: (i32, i32),
        indices: (usize, usize),
    },
    /// `(h∘g)∘f ≠ h∘(g∘f)` for `f: w -> x`, `g: x -> y`, `h: y -> z`.
    Associativity {
        objects: [String; 4],
        degrees: (i32, i32, i32),
        indices: (usize, usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnitNotClosed { object } => write!(f, "unit not closed at {object}"),
            Violation::LeftUnit { source, target, degree, index } => {
                write!(f, "left unit law fails on {source}->{target} degree {degree} basis {index}")
            }
            Violation::RightUnit { source, target, degree, index } => {
                write!(f, "right unit law fails on {source}->{target} degree {degree} basis {index}")
            }
            Violation::Leibniz { objects: [x, y, z], degrees: (p, q), indices: (a, b) } => {
                write!(f, "Leibniz rule fails for g = {y}->{z} degree {p} basis {a}, f = {x}->{y} degree {q} basis {b}")
            }
            Violation::Associativity { objects: [w, x, y, z], degrees: (p, q, r), indices: (a, b, c) } => write!(
                f,
                "associativity fails for h = {y}->{z} degree {p} basis {a}, g = {x}->{y} degree {q} basis {b}, \
                 f = {w}->{x} degree {r} basis {c}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

pub(super) fn validate(t: &DgCategory) -> ValidationReport {
    let mut out = Vec::new();
    let n = t.len();
    let name = |x: usize| t.name(x).to_string();

    for x in 0..n {
        if !t.is_cycle(x, x, &t.unit_element(x)) {
            out.push(Violation::UnitNotClosed { object: name(x) });
        }
    }

    for x in 0..n {
        for y in 0..n {
            for (deg, dim) in t.hom(x, y).space().iter() {
                for i in 0..dim {
                    let f = Element::basis(deg, dim, i);
                    if t.compose(x, y, y, &t.unit_element(y), &f) != f {
                        out.push(Violation::LeftUnit { source: name(x), target: name(y), degree: deg, index: i });
                    }
                    if t.compose(x, x, y, &f, &t.unit_element(x)) != f {
                        out.push(Violation::RightUnit { source: name(x), target: name(y), degree: deg, index: i });
                    }
                }
            }
        }
    }

    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for (p, dp) in t.hom(y, z).space().iter() {
                    for (q, dq) in t.hom(x, y).space().iter() {
                        for a in 0..dp {
                            let g = Element::basis(p, dp, a);
                            let dg = t.d(y, z, &g);
                            for b in 0..dq {
                                let f = Element::basis(q, dq, b);
                                let lhs = t.d(x, z, &t.compose(x, y, z, &g, &f));
                                let mut rhs = t.compose(x, y, z, &dg, &f);
                                let gdf = t.compose(x, y, z, &g, &t.d(x, y, &f));
                                rhs = if p % 2 == 0 { rhs.add(&gdf) } else { rhs.sub(&gdf) };
                                if lhs != rhs {
                                    out.push(Violation::Leibniz {
                                        objects: [name(x), name(y), name(z)],
                                        degrees: (p, q),
                                        indices: (a, b),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    for w in 0..n {
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    associativity(t, [w, x, y, z], &mut out);
                }
            }
        }
    }
    ValidationReport { violations: out }
}

fn associativity(t: &DgCategory, [w, x, y, z]: [usize; 4], out: &mut Vec<Violation>) {
    let (hh, hg, hf) = (t.hom(y, z), t.hom(x, y), t.hom(w, x));
    if hh.is_zero() || hg.is_zero() || hf.is_zero() {
        return;
    }
    for (p, dp) in hh.space().iter() {
        for (q, dq) in hg.space().iter() {
            for a in 0..dp {
                let h = Element::basis(p, dp, a);
                for b in 0..dq {
                    let g = Element::basis(q, dq, b);
                    let hg_ = t.compose(x, y, z, &h, &g);
                    for (r, dr) in hf.space().iter() {
                        for c in 0..dr {
                            let f = Element::basis(r, dr, c);
                            let left = t.compose(w, x, z, &hg_, &f);
                            let right = t.compose(w, y, z, &h, &t.compose(w, x, y, &g, &f));
                            if left != right {
                                out.push(Violation::Associativity {
                                    objects: [t.name(w), t.name(x), t.name(y), t.name(z)].map(str::to_string),
                                    degrees: (p, q, r),
                                    indices: (a, b, c),
                                });
                            }
                        }
                    }
                }
            }
        }
    }
}
