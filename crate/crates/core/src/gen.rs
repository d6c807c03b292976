//! Seeded random generation of twisted objects, cocycles, coboundaries and special isomorphisms.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ad::{self, AdMorphism, SModule};
use crate::hat::{HatBasis, HatIdem};
use crate::linalg::SparseVec;
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::section::SectionAlgebra;
use crate::tw::{self, HomSpace, Obj, TwMor, TwObject};

pub struct Gen<'a> {
    z: &'a SectionAlgebra,
    rng: ChaCha8Rng,
    /// Bound on the total dimension of generated modules.
    pub dims: usize,
    /// Shifts of generated fibers lie in `1-window..=1`.
    pub window: i64,
}

impl<'a> Gen<'a> {
    pub fn new(z: &'a SectionAlgebra, seed: u64, dims: usize) -> Gen<'a> {
        Gen { z, rng: ChaCha8Rng::seed_from_u64(seed), dims: dims.max(1), window: 1 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn small(&mut self) -> Scalar {
        let v = self.rng.gen_range(-2..=2);
        self.z.field().int(v)
    }

    /// A module supported on two adjacent shifts, which keeps hom spaces and `δ` nonempty.
    pub fn module(&mut self) -> SModule {
        let total = self.rng.gen_range(1..=self.dims);
        let mut dims: BTreeMap<HatIdem, usize> = BTreeMap::new();
        let n = self.z.idems().len();
        let base = self.rng.gen_range(1 - self.window.max(1)..=0);
        for _ in 0..total {
            let s = base + self.rng.gen_range(0..=1);
            let i = self.rng.gen_range(0..n);
            *dims.entry(HatIdem::new(s, i)).or_insert(0) += 1;
        }
        SModule::new(dims)
    }

    /// Degree-0 tags between fibers of `m`.
    fn delta_tags(&self, m: &SModule) -> Vec<HatBasis> {
        let z = self.z;
        let mut out = Vec::new();
        for (b, be) in z.basis().iter().enumerate() {
            for (u, _) in m.support() {
                if u.idem != be.source {
                    continue;
                }
                let tag = HatBasis::new(b, u.shift + be.degree, u.shift);
                if m.dim(tag.target(z)) > 0 {
                    out.push(tag);
                }
            }
        }
        out
    }

    /// A random strictly triangular `δ` (relative to a random total order on coordinates).
    fn triangular_delta(&mut self, m: &SModule, density: f64) -> AdMorphism {
        let z = self.z;
        let field = z.field();
        let mut start = BTreeMap::new();
        let mut run = 0;
        for (u, d) in m.support() {
            start.insert(u, run);
            run += d;
        }
        let mut order: Vec<usize> = (0..run).collect();
        for i in (1..run).rev() {
            let j = self.rng.gen_range(0..=i);
            order.swap(i, j);
        }
        let mut out = AdMorphism::zero(m, m);
        for tag in self.delta_tags(m) {
            let (v, u) = (tag.target(z), tag.source(z));
            let mut mat = Matrix::zeros(field, m.dim(v), m.dim(u));
            for r in 0..mat.rows() {
                for c in 0..mat.cols() {
                    if order[start[&v] + r] < order[start[&u] + c] && self.rng.gen_bool(density) {
                        let x = self.small();
                        mat.set(r, c, x);
                    }
                }
            }
            out.add_term(tag, &mat);
        }
        out
    }

    /// A valid twisted object; rejection sampling on the Maurer–Cartan equation.
    pub fn object(&mut self) -> Obj {
        let m = self.module();
        self.object_on(&m)
    }

    /// Prefers a nonzero differential when one is found among the samples.
    pub fn object_on(&mut self, m: &SModule) -> Obj {
        let mut fallback = None;
        for attempt in 0..24 {
            let density = 0.7 / (1.0 + attempt as f64 / 6.0);
            let d = self.triangular_delta(m, density);
            if let Ok(o) = TwObject::new(self.z, m.clone(), d) {
                if !o.delta.is_zero() {
                    return o;
                }
                fallback.get_or_insert(o);
            }
        }
        fallback.unwrap_or_else(|| TwObject::trivial(m))
    }

    pub fn morphism(&mut self, x: &Obj, y: &Obj, degree: i64) -> TwMor {
        let hs = HomSpace::new(self.z, &x.module, &y.module, degree);
        let mut v = Vec::new();
        for k in 0..hs.dim() {
            if self.rng.gen_bool(0.5) {
                let c = self.small();
                if !c.is_zero() {
                    v.push((k, c));
                }
            }
        }
        TwMor { src: x.clone(), tgt: y.clone(), map: hs.from_vec(self.z, &SparseVec(v)) }
    }

    /// A random element of the degree `-1` cocycles.
    pub fn cocycle(&mut self, x: &Obj, y: &Obj) -> TwMor {
        let basis = tw::cocycle_basis(self.z, x, y, -1);
        let mut acc = TwMor::zero(x, y);
        for b in &basis {
            let c = self.small();
            acc = acc.add(&b.scale(&c));
        }
        acc
    }

    /// A random coboundary `b_1^tw(h)` with `h` of degree `-2`.
    pub fn coboundary(&mut self, x: &Obj, y: &Obj) -> TwMor {
        let h = self.morphism(x, y, -2);
        tw::b1(self.z, &h)
    }

    /// A random locally invertible special endomorphism of `m`.
    pub fn special_iso(&mut self, m: &SModule) -> TwMor {
        let field = self.z.field();
        let mut parts = BTreeMap::new();
        for (u, d) in m.support() {
            let mut a = Matrix::identity(field, d);
            for i in 0..d {
                for j in 0..i {
                    let x = self.small();
                    a.set(i, j, x);
                }
            }
            let mut p = Matrix::zeros(field, d, d);
            let mut perm: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                let j = self.rng.gen_range(0..=i);
                perm.swap(i, j);
            }
            for (i, &j) in perm.iter().enumerate() {
                p.set(i, j, field.one());
            }
            parts.insert(u, p.mul(&a));
        }
        let map = ad::special(self.z, m, m, &parts).expect("square fibers");
        let o = TwObject::trivial(m);
        TwMor { src: o.clone(), tgt: o, map }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::scalar::Field;

    #[test]
    fn seeded_generation_is_reproducible() {
        let z = examples::e2(Field::Q);
        let a: Vec<_> = {
            let mut g = Gen::new(&z, 42, 4);
            (0..5).map(|_| g.object().delta.clone()).collect()
        };
        let b: Vec<_> = {
            let mut g = Gen::new(&z, 42, 4);
            (0..5).map(|_| g.object().delta.clone()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn generated_cocycles_and_coboundaries() {
        for z in [examples::e2(Field::Q), examples::e3(Field::fp(101).unwrap())] {
            let mut g = Gen::new(&z, 1, 4);
            for _ in 0..6 {
                let x = g.object();
                let y = g.object();
                assert!(tw::is_cocycle(&z, &g.cocycle(&x, &y)));
                let c = g.coboundary(&x, &y);
                assert!(tw::is_cocycle(&z, &c));
                assert!(tw::is_coboundary(&z, &c));
            }
        }
    }
}
