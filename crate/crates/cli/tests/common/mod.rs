//! Independent oracles over the serialized JSON: exact rationals, dense
//! linear algebra, no library arithmetic.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

pub type Q = BigRational;

pub fn q(v: &Value) -> Q {
    Q::from_str(v.as_str().expect("scalar string")).expect("rational")
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..cols {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        r += 1;
    }
    r
}

fn rows(v: &Value) -> Vec<Vec<Q>> {
    v.as_array().expect("rows").iter().map(|r| r.as_array().expect("row").iter().map(q).collect()).collect()
}

/// A cochain complex read from its serialized form.
pub struct Complex {
    pub dims: BTreeMap<i32, usize>,
    pub d: BTreeMap<i32, Vec<Vec<Q>>>,
}

impl Complex {
    pub fn from_json(v: &Value) -> Self {
        let dims = v["dims"]
            .as_object()
            .expect("dims")
            .iter()
            .map(|(k, n)| (k.parse().unwrap(), n.as_u64().unwrap() as usize))
            .collect();
        let d = match v.get("d") {
            Some(d) => d.as_object().unwrap().iter().map(|(k, r)| (k.parse().unwrap(), rows(r))).collect(),
            None => BTreeMap::new(),
        };
        Complex { dims, d }
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    fn rank_d(&self, n: i32) -> usize {
        self.d.get(&n).map_or(0, |m| rank(m))
    }

    /// `dim H^n` for every degree with nonzero cohomology.
    pub fn cohomology(&self) -> BTreeMap<i32, usize> {
        self.dims
            .keys()
            .map(|&n| (n, self.dim(n) - self.rank_d(n) - self.rank_d(n - 1)))
            .filter(|&(_, h)| h > 0)
            .collect()
    }

    pub fn apply(&self, n: i32, v: &[Q]) -> Vec<Q> {
        match self.d.get(&n) {
            Some(m) => m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect(),
            None => vec![Q::zero(); self.dim(n + 1)],
        }
    }
}

pub fn complex_of<T: serde::Serialize>(data: &T) -> Complex {
    Complex::from_json(&serde_json::to_value(data).unwrap())
}

/// A dg category read from its serialized form.
pub struct Category {
    pub objects: Vec<String>,
    homs: HashMap<(usize, usize), Complex>,
    comp: HashMap<(usize, usize, usize, i32, i32), Vec<(usize, usize, usize, Q)>>,
    units: Vec<Vec<Q>>,
}

type Vector = (i32, Vec<Q>);

impl Category {
    pub fn from_json(v: &Value) -> Self {
        let objects: Vec<String> =
            v["objects"].as_array().unwrap().iter().map(|o| o.as_str().unwrap().to_string()).collect();
        let idx = |s: &str| objects.iter().position(|o| o == s).unwrap();
        let mut homs = HashMap::new();
        for (k, c) in v["homs"].as_object().unwrap() {
            let p: Vec<&str> = k.split('|').collect();
            homs.insert((idx(p[0]), idx(p[1])), Complex::from_json(c));
        }
        let mut comp = HashMap::new();
        for (k, blocks) in v["comp"].as_object().unwrap() {
            let p: Vec<&str> = k.split('|').collect();
            for (deg, entries) in blocks.as_object().unwrap() {
                let (a, b) = deg.split_once(',').unwrap();
                let es = entries
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|e| {
                        let u = |i: usize| e[i].as_u64().unwrap() as usize;
                        (u(0), u(1), u(2), q(&e[3]))
                    })
                    .collect();
                comp.insert((idx(p[0]), idx(p[1]), idx(p[2]), a.parse().unwrap(), b.parse().unwrap()), es);
            }
        }
        let units = objects.iter().map(|o| v["units"][o].as_array().unwrap().iter().map(q).collect()).collect();
        Category { objects, homs, comp, units }
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn dim(&self, x: usize, y: usize, n: i32) -> usize {
        self.homs.get(&(x, y)).map_or(0, |c| c.dim(n))
    }

    fn degrees(&self, x: usize, y: usize) -> Vec<i32> {
        self.homs.get(&(x, y)).map_or(vec![], |c| c.dims.iter().filter(|(_, &d)| d > 0).map(|(&n, _)| n).collect())
    }

    fn basis(&self, x: usize, y: usize, n: i32, i: usize) -> Vector {
        let mut v = vec![Q::zero(); self.dim(x, y, n)];
        v[i] = Q::one();
        (n, v)
    }

    fn d(&self, x: usize, y: usize, f: &Vector) -> Vector {
        let out = match self.homs.get(&(x, y)) {
            Some(c) => c.apply(f.0, &f.1),
            None => vec![],
        };
        (f.0 + 1, out)
    }

    /// `g ∘ f` for `f: x -> y`, `g: y -> z`.
    fn compose(&self, x: usize, y: usize, z: usize, g: &Vector, f: &Vector) -> Vector {
        let n = g.0 + f.0;
        let mut out = vec![Q::zero(); self.dim(x, z, n)];
        if let Some(es) = self.comp.get(&(x, y, z, g.0, f.0)) {
            for (a, b, c, s) in es {
                out[*c] += &g.1[*a] * &f.1[*b] * s;
            }
        }
        (n, out)
    }

    fn unit(&self, x: usize) -> Vector {
        (0, self.units[x].clone())
    }

    /// Every dg-category axiom, checked on basis vectors.
    pub fn is_valid(&self) -> bool {
        let n = self.len();
        let eq = |a: &Vector, b: &Vector| a.1.len() == b.1.len() && a.1 == b.1;
        let add = |a: &Vector, b: &Vector| (a.0, a.1.iter().zip(&b.1).map(|(u, v)| u + v).collect::<Vec<Q>>());
        let scale = |c: i32, a: &Vector| (a.0, a.1.iter().map(|u| u * Q::from_integer(c.into())).collect::<Vec<Q>>());
        for (_, c) in &self.homs {
            for (&k, m) in &c.d {
                if let Some(next) = c.d.get(&(k + 1)) {
                    for j in 0..c.dim(k) {
                        let col: Vec<Q> = m.iter().map(|r| r[j].clone()).collect();
                        let dd: Vec<Q> = next.iter().map(|r| r.iter().zip(&col).map(|(a, b)| a * b).sum()).collect();
                        if dd.iter().any(|v| !v.is_zero()) {
                            return false;
                        }
                    }
                }
            }
        }
        for x in 0..n {
            if self.units[x].len() != self.dim(x, x, 0) || self.d(x, x, &self.unit(x)).1.iter().any(|v| !v.is_zero()) {
                return false;
            }
        }
        for x in 0..n {
            for y in 0..n {
                for p in self.degrees(x, y) {
                    for i in 0..self.dim(x, y, p) {
                        let f = self.basis(x, y, p, i);
                        if !eq(&self.compose(x, y, y, &self.unit(y), &f), &f)
                            || !eq(&self.compose(x, x, y, &f, &self.unit(x)), &f)
                        {
                            return false;
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for p in self.degrees(y, z) {
                        for qd in self.degrees(x, y) {
                            for a in 0..self.dim(y, z, p) {
                                let g = self.basis(y, z, p, a);
                                for b in 0..self.dim(x, y, qd) {
                                    let f = self.basis(x, y, qd, b);
                                    let lhs = self.d(x, z, &self.compose(x, y, z, &g, &f));
                                    let sign = if p % 2 == 0 { 1 } else { -1 };
                                    let rhs = add(
                                        &self.compose(x, y, z, &self.d(y, z, &g), &f),
                                        &scale(sign, &self.compose(x, y, z, &g, &self.d(x, y, &f))),
                                    );
                                    if !eq(&lhs, &rhs) {
                                        return false;
                                    }
                                    for w in 0..n {
                                        for r in self.degrees(w, x) {
                                            for c in 0..self.dim(w, x, r) {
                                                let e = self.basis(w, x, r, c);
                                                let left = self.compose(w, x, z, &self.compose(x, y, z, &g, &f), &e);
                                                let right = self.compose(w, y, z, &g, &self.compose(w, x, y, &f, &e));
                                                if !eq(&left, &right) {
                                                    return false;
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// JSON paths of every nonzero scalar in differentials, composition and units.
pub fn scalar_paths(v: &Value) -> Vec<Vec<String>> {
    fn walk(v: &Value, path: &mut Vec<String>, out: &mut Vec<Vec<String>>) {
        match v {
            Value::String(s) if s != "0" && path.first().is_some_and(|p| p != "objects") => {
                if Q::from_str(s).is_ok() {
                    out.push(path.clone());
                }
            }
            Value::Array(a) => {
                for (i, x) in a.iter().enumerate() {
                    path.push(i.to_string());
                    walk(x, path, out);
                    path.pop();
                }
            }
            Value::Object(m) => {
                for (k, x) in m {
                    path.push(k.clone());
                    walk(x, path, out);
                    path.pop();
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    walk(v, &mut Vec::new(), &mut out);
    out
}

/// The value with the sign of the scalar at `path` flipped.
pub fn flip_sign(v: &Value, path: &[String]) -> Value {
    let mut out = v.clone();
    let mut cur = &mut out;
    for p in path {
        cur = match cur {
            Value::Array(a) => &mut a[p.parse::<usize>().unwrap()],
            Value::Object(m) => m.get_mut(p).unwrap(),
            _ => unreachable!(),
        };
    }
    let s = cur.as_str().unwrap();
    let flipped = match s.strip_prefix('-') {
        Some(rest) => rest.to_string(),
        None => format!("-{s}"),
    };
    *cur = Value::String(flipped);
    out
}
