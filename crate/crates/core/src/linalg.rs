//! Sparse incremental elimination: span membership with witnesses, and kernels.

use std::collections::BTreeMap;

use crate::scalar::{Field, Scalar};

/// Sparse vector: sorted `(index, nonzero value)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec(pub Vec<(usize, Scalar)>);

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec(Vec::new())
    }

    pub fn from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
        SparseVec(m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn from_dense(v: &[Scalar]) -> SparseVec {
        SparseVec(
            v.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        )
    }

    pub fn to_dense(&self, field: Field, n: usize) -> Vec<Scalar> {
        let mut out = vec![field.zero(); n];
        for (i, v) in &self.0 {
            out[*i] = v.clone();
        }
        out
    }

    pub fn unit(i: usize, field: Field) -> SparseVec {
        SparseVec(vec![(i, field.one())])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn lead(&self) -> Option<usize> {
        self.0.first().map(|(i, _)| *i)
    }

    pub fn get(&self, i: usize) -> Option<&Scalar> {
        self.0
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.0[k].1)
    }

    /// `self + c * o`
    pub fn axpy(&self, c: &Scalar, o: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut a, mut b) = (self.0.iter().peekable(), o.0.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (j, y) = b.next().unwrap();
                    out.push((*j, c * y));
                }
                (Some((i, _)), Some((j, _))) => {
                    if i < j {
                        out.push(a.next().unwrap().clone());
                    } else if j < i {
                        let (j, y) = b.next().unwrap();
                        out.push((*j, c * y));
                    } else {
                        let (i, x) = a.next().unwrap();
                        let (_, y) = b.next().unwrap();
                        let v = x + &(c * y);
                        if !v.is_zero() {
                            out.push((*i, v));
                        }
                    }
                }
            }
        }
        SparseVec(out)
    }

    pub fn scale(&self, c: &Scalar) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, v)| (*i, v * c)).collect())
    }
}

struct Row {
    vec: SparseVec,
    /// Combination of the inserted generators equal to `vec`.
    combo: SparseVec,
}

/// Incremental echelon basis of the span of inserted generators.
///
/// Each generator `k` is recorded; reduced rows keep track of which combination of
/// generators they equal, which yields solution witnesses and kernel vectors.
pub struct Echelon {
    field: Field,
    rows: BTreeMap<usize, Row>,
    kernel: Vec<SparseVec>,
    count: usize,
}

impl Echelon {
    pub fn new(field: Field) -> Echelon {
        Echelon {
            field,
            rows: BTreeMap::new(),
            kernel: Vec::new(),
            count: 0,
        }
    }

    pub fn generators(&self) -> usize {
        self.count
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v`, returning the remainder and the generator combination that was subtracted.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut rem = v.clone();
        let mut used = SparseVec::new();
        let mut from = 0usize;
        loop {
            let next = rem.0.iter().find(|(i, _)| *i >= from && self.rows.contains_key(i));
            let Some((i, c)) = next.cloned() else { break };
            let row = &self.rows[&i];
            let f = c.neg();
            rem = rem.axpy(&f, &row.vec);
            used = used.axpy(&f, &row.combo);
            from = i + 1;
        }
        (rem, used)
    }

    /// Insert generator number `self.generators()`; returns true if it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let k = self.count;
        self.count += 1;
        let (rem, used) = self.reduce(&v);
        let combo = used.axpy(&self.field.one(), &SparseVec::unit(k, self.field));
        match rem.lead() {
            None => {
                self.kernel.push(combo);
                false
            }
            Some(p) => {
                let inv = rem.0[0].1.inv().expect("nonzero lead");
                let vec = rem.scale(&inv);
                let combo = combo.scale(&inv);
                // keep rows fully reduced with respect to the new pivot
                let keys: Vec<usize> = self
                    .rows
                    .iter()
                    .filter(|(_, r)| r.vec.get(p).is_some())
                    .map(|(k, _)| *k)
                    .collect();
                for key in keys {
                    let row = self.rows.get_mut(&key).unwrap();
                    let c = row.vec.get(p).unwrap().neg();
                    row.vec = row.vec.axpy(&c, &vec);
                    row.combo = row.combo.axpy(&c, &combo);
                }
                self.rows.insert(p, Row { vec, combo });
                true
            }
        }
    }

    /// Coefficients `c` (indexed by generator) with `Σ c_k g_k = target`, if any.
    pub fn solve(&self, target: &SparseVec) -> Option<SparseVec> {
        let (rem, used) = self.reduce(target);
        if rem.is_zero() {
            Some(used.scale(&self.field.int(-1)))
        } else {
            None
        }
    }

    pub fn contains(&self, target: &SparseVec) -> bool {
        self.reduce(target).0.is_zero()
    }

    /// Basis of relations among generators: combinations summing to zero.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }
}

/// Linear map given by the images of basis vectors (columns).
pub struct LinearMap {
    pub field: Field,
    pub cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field);
        for c in &self.cols {
            e.insert(c.clone());
        }
        e
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, c) in &x.0 {
            out = out.axpy(c, &self.cols[*i]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sv(f: Field, d: &[i64]) -> SparseVec {
        SparseVec::from_dense(&d.iter().map(|&x| f.int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn solve_and_kernel() {
        let f = Field::Q;
        let mut e = Echelon::new(f);
        e.insert(sv(f, &[1, 0, 1]));
        e.insert(sv(f, &[0, 1, 1]));
        e.insert(sv(f, &[1, 1, 2]));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.kernel().len(), 1);
        let c = e.solve(&sv(f, &[2, 3, 5])).unwrap();
        let map = LinearMap { field: f, cols: vec![sv(f, &[1, 0, 1]), sv(f, &[0, 1, 1]), sv(f, &[1, 1, 2])] };
        assert_eq!(map.apply(&c), sv(f, &[2, 3, 5]));
        assert!(map.apply(&e.kernel()[0]).is_zero());
        assert!(e.solve(&sv(f, &[1, 0, 0])).is_none());
    }

    proptest! {
        #[test]
        fn witnesses_are_exact(cols in proptest::collection::vec(proptest::collection::vec(-3i64..4, 5), 1..7),
                               coeffs in proptest::collection::vec(-3i64..4, 7)) {
            let f = Field::Q;
            let map = LinearMap { field: f, cols: cols.iter().map(|c| sv(f, c)).collect() };
            let e = map.echelon();
            let x = SparseVec::from_dense(&coeffs[..cols.len()].iter().map(|&c| f.int(c)).collect::<Vec<_>>());
            let target = map.apply(&x);
            let w = e.solve(&target).expect("target lies in the image");
            prop_assert_eq!(map.apply(&w), target);
            for k in e.kernel() {
                prop_assert!(map.apply(k).is_zero());
            }
            prop_assert_eq!(e.rank() + e.kernel().len(), cols.len());
        }
    }
}
