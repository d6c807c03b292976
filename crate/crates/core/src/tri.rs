//! Triangles in `ℋ(Ẑ)`: canonical triangles, certificates of isomorphism to them, the shift
//! functor, rotations, TR3 completion, cones, octahedra and an axiom verifier.

use crate::ad::{self, DirectSum};
use crate::confl::{self, block_mor, single, Canonical, Certificate, Conflation};
use crate::error::{Error, Result};
use crate::gen::Gen;
use crate::section::SectionAlgebra;
use crate::tw::{self, b1, h_equal, is_cocycle, star, Obj, TwMor, TwObject, Unknown};

/// `T^k(f)` between freshly shifted objects.
pub fn shift_mor(f: &TwMor, k: i64) -> TwMor {
    f.shift_between(k, &f.src.shift(k), &f.tgt.shift(k))
}

/// `T^k(f)` between given objects (which must be the shifted ends).
pub fn shift_onto(f: &TwMor, k: i64, src: &Obj, tgt: &Obj) -> TwMor {
    debug_assert!(src.module == f.src.module.shift(k) && tgt.module == f.tgt.module.shift(k));
    f.shift_between(k, src, tgt)
}

/// Right-nested composite `fs[0] ⋆ (fs[1] ⋆ (… ⋆ fs[n-1]))`.
pub fn compose(z: &SectionAlgebra, fs: &[&TwMor]) -> TwMor {
    let (last, rest) = fs.split_last().expect("nonempty composite");
    rest.iter().rev().fold((*last).clone(), |acc, g| star(z, g, &acc))
}

/// `ψ` with `ψ ⋆ θ ≃ 𝕀` and `θ ⋆ ψ ≃ 𝕀`, trying `candidate` before solving.
pub fn invert(z: &SectionAlgebra, theta: &TwMor, candidate: Option<TwMor>) -> Result<TwMor> {
    if let Some(c) = candidate {
        if tw::is_h_inverse(z, theta, &c) {
            return Ok(c);
        }
    }
    tw::h_inverse(z, theta).ok_or_else(|| Error::NotInvertible(format!("in ℋ: {}", theta.map.describe(z))))
}

/// An isomorphism in `ℋ` from a triangle to the canonical triangle of `canonical`.
#[derive(Clone, Debug)]
pub struct TriCert {
    pub canonical: Canonical,
    pub theta: [TwMor; 3],
    pub inv: [TwMor; 3],
}

/// A sextuple `X →u E →v Y →w X[1]` with a certificate that it is a triangle.
#[derive(Clone, Debug)]
pub struct Triangle {
    pub x: Obj,
    pub e: Obj,
    pub y: Obj,
    pub x1: Obj,
    pub u: TwMor,
    pub v: TwMor,
    pub w: TwMor,
    pub cert: TriCert,
}

/// `(π f, π g, π(σ_X ∘ γ))`.
pub fn canonical_triangle(z: &SectionAlgebra, c: &Canonical) -> Triangle {
    let w = confl::psi_inv(z, c);
    let ids = [TwMor::identity(z, &c.x), TwMor::identity(z, &c.e), TwMor::identity(z, &c.y)];
    Triangle {
        x: c.x.clone(),
        e: c.e.clone(),
        y: c.y.clone(),
        x1: w.tgt.clone(),
        u: c.f.clone(),
        v: c.g.clone(),
        w,
        cert: TriCert { canonical: c.clone(), theta: ids.clone(), inv: ids },
    }
}

fn square(z: &SectionAlgebra, name: &str, lhs: &TwMor, rhs: &TwMor) -> Result<()> {
    if h_equal(z, lhs, rhs) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{name} square does not commute in ℋ")))
    }
}

impl Triangle {
    /// Replays the certificate: components are cocycles, `θ_k` are isomorphisms in `ℋ`, and
    /// all three squares (including the one through `T(θ_1)`) commute in `ℋ`.
    pub fn verify(&self, z: &SectionAlgebra) -> Result<()> {
        let ends = [
            (&self.u, &self.x, &self.e, "u"),
            (&self.v, &self.e, &self.y, "v"),
            (&self.w, &self.y, &self.x1, "w"),
        ];
        for (m, s, t, name) in ends {
            if m.src != *s || m.tgt != *t {
                return Err(Error::Shape(format!("{name} has the wrong ends")));
            }
            if !is_cocycle(z, m) {
                return Err(Error::NotCocycle(format!("triangle map {name}")));
            }
        }
        if self.x1.module != self.x.module.shift(1) || self.x1.delta != self.x.delta.shift(1) {
            return Err(Error::Shape("fourth object is not T(X)".into()));
        }
        let c = &self.cert.canonical;
        let objs = [(&self.x, &c.x), (&self.e, &c.e), (&self.y, &c.y)];
        for (k, ((s, t), (th, inv))) in objs.iter().zip(self.cert.theta.iter().zip(&self.cert.inv)).enumerate() {
            if th.src != **s || th.tgt != **t || inv.src != **t || inv.tgt != **s {
                return Err(Error::Shape(format!("certificate map θ{} has the wrong ends", k + 1)));
            }
            if !tw::is_h_inverse(z, th, inv) {
                return Err(Error::NotInvertible(format!("certificate map θ{}", k + 1)));
            }
        }
        let [t1, t2, t3] = &self.cert.theta;
        let wc = confl::psi_inv(z, c);
        square(z, "first", &star(z, &c.f, t1), &star(z, t2, &self.u))?;
        square(z, "second", &star(z, &c.g, t2), &star(z, t3, &self.v))?;
        let t1s = shift_onto(t1, 1, &self.x1, &wc.tgt);
        square(z, "third", &star(z, &wc, t3), &star(z, &t1s, &self.w))
    }

    pub fn is_valid(&self, z: &SectionAlgebra) -> bool {
        self.verify(z).is_ok()
    }
}

/// The triangle of a general conflation certified by a chain of ladders.
pub fn from_conflation(z: &SectionAlgebra, c: &Conflation, cert: &Certificate) -> Result<Triangle> {
    cert.verify(z, c)?;
    let canon = &cert.canonical;
    let (tx, t, ty) = (cert.left_end(z)?, cert.middle(z)?, cert.right_end(z)?);
    let wc = confl::psi_inv(z, canon);
    let x1 = c.x.shift(1);
    let txi = invert(z, &tx, None)?;
    let txi1 = shift_onto(&txi, 1, &wc.tgt, &x1);
    let w = compose(z, &[&txi1, &wc, &ty]);
    let inv = [txi, invert(z, &t, None)?, invert(z, &ty, None)?];
    Ok(Triangle {
        x: c.x.clone(),
        e: c.e.clone(),
        y: c.y.clone(),
        x1,
        u: c.f.clone(),
        v: c.g.clone(),
        w,
        cert: TriCert { canonical: canon.clone(), theta: [tx, t, ty], inv },
    })
}

/// `T^k(τ) = (T^k u, T^k v, (-1)^k T^k w)`, certified against the canonical triangle of `T^k(ξ)`.
pub fn shift_triangle(z: &SectionAlgebra, t: &Triangle, k: i64) -> Result<Triangle> {
    let c = &t.cert.canonical;
    let tc = Canonical::new(z, &c.x.shift(k), &c.y.shift(k), &c.gamma.map.shift(k))?;
    let (x, e, y, x1) = (t.x.shift(k), t.e.shift(k), t.y.shift(k), t.x1.shift(k));
    let u = shift_onto(&t.u, k, &x, &e);
    let v = shift_onto(&t.v, k, &e, &y);
    let w = shift_onto(&t.w, k, &y, &x1);
    let w = if k % 2 == 0 { w } else { w.neg() };
    let srcs = [&x, &e, &y];
    let tgts = [&tc.x, &tc.e, &tc.y];
    let theta = [0, 1, 2].map(|i| shift_onto(&t.cert.theta[i], k, srcs[i], tgts[i]));
    let inv = [0, 1, 2].map(|i| shift_onto(&t.cert.inv[i], k, tgts[i], srcs[i]));
    Ok(Triangle { x, e, y, x1, u, v, w, cert: TriCert { canonical: tc, theta, inv } })
}

/// `E →v Y →w X[1] →(-u[1]) E[1]`, certified via the `J(X)` rotation conflation.
pub fn rotate_right(z: &SectionAlgebra, t: &Triangle) -> Result<Triangle> {
    let c = &t.cert.canonical;
    let x1c = c.x.shift(1);
    let rot = confl::rotation_conflation(z, c, &x1c)?;
    let eta1 = rot.cert.canonical;
    // Y_c → E_c ⊕ X_c[1] = X_c ⊕ Y_c ⊕ X_c[1], (0, 𝕀, σ_X∘γ)ᵗ
    let sg = ad::circ(z, &ad::sigma(z, &c.x.module), &c.gamma.map);
    let ide = ad::identity(z, &c.y.module);
    let e3 = DirectSum::new(&[&c.x.module, &c.y.module, &x1c.module]);
    let yds = single(&c.y.module);
    let th2 = block_mor(z, &c.y, &yds, &eta1.e, &e3, &[vec![None], vec![Some(&ide)], vec![Some(&sg)]]);
    let cand = block_mor(z, &eta1.e, &e3, &c.y, &yds, &[vec![None, Some(&ide), None]]);
    let th2i = invert(z, &th2, Some(cand))?;
    let e1 = t.e.shift(1);
    let mu1 = shift_onto(&t.u, 1, &t.x1, &e1).neg();
    let [a, b, cc] = &t.cert.theta;
    let [ai, bi, ci] = &t.cert.inv;
    let theta = [b.clone(), star(z, &th2, cc), shift_onto(a, 1, &t.x1, &x1c)];
    let inv = [bi.clone(), star(z, ci, &th2i), shift_onto(ai, 1, &x1c, &t.x1)];
    Ok(Triangle {
        x: t.e.clone(),
        e: t.y.clone(),
        y: t.x1.clone(),
        x1: e1,
        u: t.v.clone(),
        v: t.w.clone(),
        w: mu1,
        cert: TriCert { canonical: eta1, theta, inv },
    })
}

/// `Y[-1] →(-w[-1]) X →u E →v Y`, certified via the `J(Y[-1])` rotation conflation.
pub fn rotate_left(z: &SectionAlgebra, t: &Triangle) -> Result<Triangle> {
    let c = &t.cert.canonical;
    let ycm = c.y.shift(-1);
    let rot = confl::dual_rotation_conflation(z, c, &ycm)?;
    let eta1 = rot.cert.canonical;
    // X_c → Y_c[-1] ⊕ E_c = Y_c[-1] ⊕ X_c ⊕ Y_c, (0, 𝕀, 0)ᵗ
    let idx = ad::identity(z, &c.x.module);
    let e3 = DirectSum::new(&[&ycm.module, &c.x.module, &c.y.module]);
    let xds = single(&c.x.module);
    let th2 = block_mor(z, &c.x, &xds, &eta1.e, &e3, &[vec![None], vec![Some(&idx)], vec![None]]);
    let cand = block_mor(z, &eta1.e, &e3, &c.x, &xds, &[vec![None, Some(&idx), None]]);
    let th2i = invert(z, &th2, Some(cand))?;
    let ym = t.y.shift(-1);
    let mw = t.w.shift_between(-1, &ym, &t.x).neg();
    let [a, b, cc] = &t.cert.theta;
    let [ai, bi, ci] = &t.cert.inv;
    let theta = [shift_onto(cc, -1, &ym, &ycm).neg(), star(z, &th2, a), b.clone()];
    let inv = [shift_onto(ci, -1, &ycm, &ym).neg(), star(z, ai, &th2i), bi.clone()];
    Ok(Triangle {
        x: ym,
        e: t.x.clone(),
        y: t.e.clone(),
        x1: t.y.clone(),
        u: mw,
        v: t.u.clone(),
        w: t.v.clone(),
        cert: TriCert { canonical: eta1, theta, inv },
    })
}

/// Completion of a 𝒵-commutative-up-to-homotopy square between canonical conflations:
/// adjusts `b` by a coboundary so that the left square commutes exactly, then reads off the
/// right vertical map from the cokernel. Returns the exact ladder `(a, b', c)`.
pub fn complete_canonical(
    z: &SectionAlgebra,
    c: &Canonical,
    c2: &Canonical,
    a: &TwMor,
    b: &TwMor,
) -> Result<confl::Ladder> {
    let s = star(z, &c2.f, a).sub(&star(z, b, &c.f));
    let fix = tw::solve_linear(
        z,
        &[Unknown::new(&c.e, &c2.e, -2)],
        |_, v| vec![(0, star(z, &b1(z, v), &c.f).map)],
        &[(0, s.map.clone())],
    )
    .ok_or_else(|| Error::NotTrivial("left square does not commute in ℋ".into()))?;
    let b2 = b.add(&b1(z, &fix[0]));
    let rhs = star(z, &c2.g, &b2);
    let cmap = tw::factor_after(z, &rhs, &c.g).ok_or_else(|| Error::Invalid("no exact cokernel factorization".into()))?;
    let l = confl::Ladder { from: c.conflation(), to: c2.conflation(), tx: a.clone(), t: b2, ty: cmap };
    l.verify(z)?;
    Ok(l)
}

/// TR3: given triangles `t`, `t2` and `θ1, θ2` with `u'⋆θ1 ≃ θ2⋆u`, a `θ3` completing the morphism.
pub fn complete_tr3(z: &SectionAlgebra, t: &Triangle, t2: &Triangle, th1: &TwMor, th2: &TwMor) -> Result<TwMor> {
    if !h_equal(z, &star(z, &t2.u, th1), &star(z, th2, &t.u)) {
        return Err(Error::NotTrivial("input square does not commute in ℋ".into()));
    }
    let a = compose(z, &[&t2.cert.theta[0], th1, &t.cert.inv[0]]);
    let b = compose(z, &[&t2.cert.theta[1], th2, &t.cert.inv[1]]);
    let l = complete_canonical(z, &t.cert.canonical, &t2.cert.canonical, &a, &b)?;
    Ok(compose(z, &[&t2.cert.inv[2], &l.ty, &t.cert.theta[2]]))
}

/// Checks a morphism of triangles `(θ1, θ2, θ3)` in `ℋ`.
pub fn verify_morphism(z: &SectionAlgebra, t: &Triangle, t2: &Triangle, th: [&TwMor; 3]) -> Result<()> {
    let [a, b, c] = th;
    square(z, "first", &star(z, &t2.u, a), &star(z, b, &t.u))?;
    square(z, "second", &star(z, &t2.v, b), &star(z, c, &t.v))?;
    let a1 = shift_onto(a, 1, &t.x1, &t2.x1);
    square(z, "third", &star(z, &t2.w, c), &star(z, &a1, &t.w))
}

/// `X →u Y →(𝕀,0)ᵗ (Y ⊕ X[1], δ'_W) →(0,-𝕀) X[1]` from the cone conflation.
pub fn cone_of(z: &SectionAlgebra, u: &TwMor) -> Result<Triangle> {
    let cone = confl::cone_conflation(z, u)?;
    let (x, y) = (&u.src, &u.tgt);
    let x1 = x.shift(1);
    let idy = ad::identity(z, &y.module);
    let yds = single(&y.module);
    let v = block_mor(z, y, &yds, &cone.w, &cone.wds, &[vec![Some(&idy)], vec![None]]);
    let mid1 = ad::identity(z, &x1.module).neg();
    let w = block_mor(z, &cone.w, &cone.wds, &x1, &single(&x1.module), &[vec![None, Some(&mid1)]]);
    let e3 = DirectSum::new(&[&x.module, &x1.module, &y.module]);
    let iota = block_mor(z, y, &yds, &cone.eta.e, &e3, &[vec![None], vec![None], vec![Some(&idy)]]);
    let th2 = star(z, &cone.cert.middle(z)?, &iota);
    let canon = cone.cert.canonical.clone();
    let cands = {
        let e3b = DirectSum::new(&[&x.module, &y.module, &x1.module]);
        block_mor(z, &canon.e, &e3b, y, &yds, &[vec![None, Some(&idy), None]])
    };
    let th2i = invert(z, &th2, Some(cands))?;
    let ix = TwMor::identity(z, x);
    let iw = TwMor::identity(z, &cone.w);
    Ok(Triangle {
        x: x.clone(),
        e: y.clone(),
        y: cone.w.clone(),
        x1,
        u: u.clone(),
        v,
        w,
        cert: TriCert { canonical: canon, theta: [ix.clone(), th2, iw.clone()], inv: [ix, th2i, iw] },
    })
}

/// `X →𝕀 X → 0 → X[1]`.
pub fn identity_triangle(z: &SectionAlgebra, x: &Obj) -> Result<Triangle> {
    let zero = TwObject::zero();
    let c = Canonical::new(z, x, &zero, &ad::AdMorphism::zero(&zero.module, &x.module))?;
    let x1 = x.shift(1);
    let ix = TwMor::identity(z, x);
    let ce = TwMor::new(x, &c.e, ad::identity(z, &x.module))?;
    let ec = TwMor::new(&c.e, x, ad::identity(z, &x.module))?;
    let iz = TwMor::identity(z, &zero);
    Ok(Triangle {
        x: x.clone(),
        e: x.clone(),
        y: zero.clone(),
        x1: x1.clone(),
        u: ix.clone(),
        v: TwMor::zero(x, &zero),
        w: TwMor::zero(&zero, &x1),
        cert: TriCert { canonical: c, theta: [ix.clone(), ce, iz.clone()], inv: [ix, ec, iz] },
    })
}

/// Transport of a triangle along isomorphisms `φ_k` with inverses `ψ_k` (TR1(a)).
pub fn transport_triangle(z: &SectionAlgebra, t: &Triangle, phi: [&TwMor; 3], psi: [&TwMor; 3]) -> Result<Triangle> {
    let (x, e, y) = (phi[0].tgt.clone(), phi[1].tgt.clone(), phi[2].tgt.clone());
    let x1 = x.shift(1);
    let phi0s = shift_onto(phi[0], 1, &t.x1, &x1);
    let u = compose(z, &[phi[1], &t.u, psi[0]]);
    let v = compose(z, &[phi[2], &t.v, psi[1]]);
    let w = compose(z, &[&phi0s, &t.w, psi[2]]);
    let theta = [0, 1, 2].map(|k| star(z, &t.cert.theta[k], psi[k]));
    let inv = [0, 1, 2].map(|k| star(z, phi[k], &t.cert.inv[k]));
    Ok(Triangle { x, e, y, x1, u, v, w, cert: TriCert { canonical: t.cert.canonical.clone(), theta, inv } })
}

/// The canonical octahedron over `ξ1: A → B → C'` and `ξ2: B → C → A'`: the composite
/// canonical conflation `ξ3: A → C → B'` with `B' = (C' ⊕ A', [[δ, β₂], [0, δ]])` and the
/// canonical conflation `χ: C' → B' → A'`.
pub struct CanonicalOcta {
    pub xi3: Canonical,
    pub chi: Canonical,
}

pub fn canonical_octahedron(z: &SectionAlgebra, xi1: &Canonical, xi2: &Canonical) -> Result<CanonicalOcta> {
    if xi2.x != xi1.e {
        return Err(Error::Shape("second conflation must start at the middle term of the first".into()));
    }
    let a1 = single(&xi2.y.module);
    let beta1 = ad::block(z, &xi2.gamma.map, &xi1.ds, &a1, 0, 0);
    let beta2 = ad::block(z, &xi2.gamma.map, &xi1.ds, &a1, 1, 0);
    let chi = Canonical::new(z, &xi1.y, &xi2.y, &beta2)?;
    let corner = ad::assemble(z, &single(&xi1.x.module), &chi.ds, &[vec![Some(&xi1.gamma.map), Some(&beta1)]]);
    let xi3 = Canonical::new(z, &xi1.x, &chi.e, &corner)?;
    if xi3.e != xi2.e {
        return Err(Error::Invalid("composite differential does not match".into()));
    }
    Ok(CanonicalOcta { xi3, chi })
}

/// Output of TR4: the triangle `U' →f Y' →g X' →(T(i)⋆ĵ) T(U')`.
#[derive(Clone, Debug)]
pub struct Octahedron {
    pub tri: Triangle,
}

/// TR4 for triangles `t1` on `u`, `t2` on `v` and `t3` on `v⋆u`.
pub fn octahedron(z: &SectionAlgebra, t1: &Triangle, t2: &Triangle, t3: &Triangle) -> Result<Octahedron> {
    if t2.x != t1.e || t3.x != t1.x || t3.e != t2.e {
        return Err(Error::Shape("triangles are not arranged over a composable pair".into()));
    }
    if !h_equal(z, &t3.u, &star(z, &t2.u, &t1.u)) {
        return Err(Error::Invalid("third triangle is not on the composite".into()));
    }
    let xi1 = &t1.cert.canonical;
    let [th1, th2, th3] = &t1.cert.theta;
    // conflation B → J(B) ⊕ Z → A' for a representative of v ⋆ θ2⁻¹
    let h = star(z, &t2.u, &t1.cert.inv[1]);
    let th = cone_of(z, &h)?;
    let xi2 = th.cert.canonical.clone();
    let zeta2 = th.cert.theta[1].clone();
    let txi2 = canonical_triangle(z, &xi2);
    let beta3 = complete_tr3(z, t2, &txi2, th2, &zeta2)?;
    let oc = canonical_octahedron(z, xi1, &xi2)?;
    let txi3 = canonical_triangle(z, &oc.xi3);
    let zeta2b = zeta2.retarget(&t2.e, &oc.xi3.e);
    let zeta3 = complete_tr3(z, t3, &txi3, th1, &zeta2b)?;
    let chi = &oc.chi;
    let zeta3i = invert(z, &zeta3, None)?;
    let beta3i = invert(z, &beta3, None)?;
    let f = compose(z, &[&zeta3i, &chi.f.retarget(&chi.x, &oc.xi3.y), th3]);
    let g = compose(z, &[&beta3i, &chi.g.retarget(&oc.xi3.y, &chi.y), &zeta3]);
    let u1 = t1.y.shift(1);
    let i1 = shift_onto(&t1.v, 1, &t2.x1, &u1);
    let w = star(z, &i1, &t2.w);
    let zeta3b = zeta3.retarget(&t3.y, &chi.e);
    let zeta3bi = zeta3i.retarget(&chi.e, &t3.y);
    let tri = Triangle {
        x: t1.y.clone(),
        e: t3.y.clone(),
        y: t2.y.clone(),
        x1: u1,
        u: f,
        v: g,
        w,
        cert: TriCert {
            canonical: chi.clone(),
            theta: [th3.clone(), zeta3b, beta3],
            inv: [t1.cert.inv[2].clone(), zeta3bi, beta3i],
        },
    };
    Ok(Octahedron { tri })
}

/// The four commutativity conditions of TR4 and the triangle property of the output.
pub fn verify_octahedron(z: &SectionAlgebra, t1: &Triangle, t2: &Triangle, t3: &Triangle, o: &Octahedron) -> Result<()> {
    let (f, g) = (&o.tri.u, &o.tri.v);
    square(z, "octahedral (1)", &star(z, f, &t1.v), &star(z, &t3.v, &t2.u))?;
    square(z, "octahedral (2)", &star(z, g, &t3.v), &t2.v)?;
    let lhs = star(z, &t3.w, f);
    square(z, "octahedral (3)", &lhs, &t1.w.retarget(&t1.y, &t3.x1))?;
    let u1 = shift_onto(&t1.u, 1, &t3.x1, &t2.x1);
    square(z, "octahedral (4)", &star(z, &u1, &t3.w), &star(z, &t2.w, g))?;
    o.tri.verify(z)
}

/// A composable pair `X →u Y →v W` of cocycles from which all axiom checks are built.
#[derive(Clone, Debug)]
pub struct Instance {
    pub u: TwMor,
    pub v: TwMor,
}

/// `count` seeded composable pairs over modules of total dimension at most `dims`.
pub fn fuzz_instances(z: &SectionAlgebra, seed: u64, count: usize, dims: usize) -> Vec<Instance> {
    let mut g = Gen::new(z, seed, dims);
    (0..count)
        .map(|_| {
            let x = g.object();
            let y = g.object();
            let w = g.object();
            Instance { u: g.cocycle(&x, &y), v: g.cocycle(&y, &w) }
        })
        .collect()
}

/// Deliberate defects for checking that the verifier has teeth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mutation {
    None,
    /// `rotate_right` emits `u[1]` instead of `-u[1]`.
    RotateRightSign,
}

pub const AXIOMS: [&str; 8] = ["TR1a", "TR1b", "TR1c", "TR2-right", "TR2-left", "TR2-round-trip", "TR3", "TR4"];

#[derive(Clone, Debug)]
pub struct AxiomResult {
    pub axiom: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub results: Vec<AxiomResult>,
    pub warnings: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failures.is_empty())
    }

    pub fn result(&self, axiom: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.axiom == axiom)
    }

    /// One `key=value` line per axiom, then warnings.
    pub fn lines(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in &self.results {
            let status = if r.failures.is_empty() { "pass" } else { "fail" };
            let mut line = format!("axiom={} status={} checked={} failures={}", r.axiom, status, r.checked, r.failures.len());
            if let Some(f) = r.failures.first() {
                line.push_str(&format!(" counterexample=\"{f}\""));
            }
            out.push(line);
        }
        out.extend(self.warnings.iter().map(|w| format!("warning=\"{w}\"")));
        out
    }
}

struct Tally(Vec<AxiomResult>);

impl Tally {
    fn record(&mut self, axiom: &str, i: usize, r: Result<()>) {
        let slot = self.0.iter_mut().find(|x| x.axiom == axiom).expect("known axiom");
        slot.checked += 1;
        if let Err(e) = r {
            slot.failures.push(format!("instance {i}: {e}"));
        }
    }
}

fn transported(z: &SectionAlgebra, g: &mut Gen, t: &Triangle) -> Result<Triangle> {
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for o in [&t.x, &t.e, &t.y] {
        let h = g.special_iso(&o.module).map;
        let (o2, p) = tw::transport(z, &h, o)?;
        let cand = TwMor::new(&o2, o, ad::special_inverse(z, &h)?)?;
        psi.push(invert(z, &p, Some(cand))?);
        phi.push(p);
    }
    transport_triangle(z, t, [&phi[0], &phi[1], &phi[2]], [&psi[0], &psi[1], &psi[2]])
}

fn same_in_h(z: &SectionAlgebra, name: &str, a: &TwMor, b: &TwMor) -> Result<()> {
    if a.src.module != b.src.module || a.tgt.module != b.tgt.module {
        return Err(Error::Shape(format!("{name} changed its ends")));
    }
    square(z, name, a, b)
}

fn tr3_cases(z: &SectionAlgebra, g: &mut Gen, t1: &Triangle) -> Result<()> {
    // a map out of Y lifted to the cone of the composite
    let y2 = g.object();
    let b = g.cocycle(&t1.e, &y2);
    let t2 = cone_of(z, &star(z, &b, &t1.u))?;
    let ix = TwMor::identity(z, &t1.x);
    let th2 = b.add(&g.coboundary(&t1.e, &y2));
    let th3 = complete_tr3(z, t1, &t2, &ix, &th2)?;
    verify_morphism(z, t1, &t2, [&ix, &th2, &th3])?;
    // a pushout ladder along a random map out of X
    let c = &t1.cert.canonical;
    let x2 = g.object();
    let a = g.cocycle(&c.x, &x2);
    let (l, c2) = confl::pushout(z, c, &a)?;
    let t2 = canonical_triangle(z, &c2);
    let th1 = star(z, &a, &t1.cert.theta[0]);
    let th2 = star(z, &l.t, &t1.cert.theta[1]).add(&g.coboundary(&t1.e, &c2.e));
    let th3 = complete_tr3(z, t1, &t2, &th1, &th2)?;
    verify_morphism(z, t1, &t2, [&th1, &th2, &th3])
}

/// Runs TR1(a–c), both rotations and their round trip, TR3 and TR4 on every instance.
pub fn verify_axioms(z: &SectionAlgebra, instances: &[Instance], seed: u64, mutation: Mutation) -> AxiomReport {
    let mut tally = Tally(AXIOMS.iter().map(|a| AxiomResult { axiom: a, checked: 0, failures: vec![] }).collect());
    let mut warnings = Vec::new();
    if instances.is_empty() {
        warnings.push("empty instance set: axioms hold vacuously".to_string());
    }
    let mut g = Gen::new(z, seed, 3);
    for (i, inst) in instances.iter().enumerate() {
        let (u, v) = (&inst.u, &inst.v);
        if u.tgt != v.src {
            tally.record("TR1c", i, Err(Error::Shape("instance maps are not composable".into())));
            continue;
        }
        let t1 = match cone_of(z, u) {
            Ok(t) => t,
            Err(e) => {
                tally.record("TR1c", i, Err(e));
                continue;
            }
        };
        tally.record("TR1c", i, t1.verify(z));
        tally.record("TR1b", i, identity_triangle(z, &u.src).and_then(|t| t.verify(z)));
        tally.record("TR1a", i, transported(z, &mut g, &t1).and_then(|t| t.verify(z)));
        let right = rotate_right(z, &t1).and_then(|mut r| {
            if mutation == Mutation::RotateRightSign {
                r.w = r.w.neg();
            }
            r.verify(z)
        });
        tally.record("TR2-right", i, right);
        tally.record("TR2-left", i, rotate_left(z, &t1).and_then(|l| l.verify(z)));
        let round = rotate_right(z, &t1).and_then(|r| rotate_left(z, &r)).and_then(|b| {
            b.verify(z)?;
            same_in_h(z, "u after round trip", &b.u, &t1.u)?;
            same_in_h(z, "v after round trip", &b.v, &t1.v)?;
            same_in_h(z, "w after round trip", &b.w, &t1.w)
        });
        tally.record("TR2-round-trip", i, round);
        tally.record("TR3", i, tr3_cases(z, &mut g, &t1));
        let tr4 = cone_of(z, v).and_then(|t2| {
            let t3 = cone_of(z, &star(z, v, u))?;
            let o = octahedron(z, &t1, &t2, &t3)?;
            verify_octahedron(z, &t1, &t2, &t3, &o)
        });
        tally.record("TR4", i, tr4);
    }
    AxiomReport { results: tally.0, warnings }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::gen::Gen;
    use crate::scalar::Field;

    fn random_canonical(z: &SectionAlgebra, g: &mut Gen) -> Canonical {
        let x = g.object();
        let y = g.object();
        let h = g.cocycle(&y, &x.shift(1));
        confl::psi(z, &x, &h).unwrap()
    }

    #[test]
    fn canonical_and_identity_triangles() {
        let z = examples::e2(Field::Q);
        let mut g = Gen::new(&z, 41, 4);
        for _ in 0..4 {
            let c = random_canonical(&z, &mut g);
            canonical_triangle(&z, &c).verify(&z).unwrap();
            identity_triangle(&z, &c.x).unwrap().verify(&z).unwrap();
        }
    }

    #[test]
    fn rotations_are_triangles() {
        for z in [examples::e2(Field::Q), examples::e3(Field::Q)] {
            let mut g = Gen::new(&z, 43, 3);
            for _ in 0..3 {
                let t = canonical_triangle(&z, &random_canonical(&z, &mut g));
                let r = rotate_right(&z, &t).unwrap();
                r.verify(&z).unwrap();
                let l = rotate_left(&z, &t).unwrap();
                l.verify(&z).unwrap();
                rotate_right(&z, &r).unwrap().verify(&z).unwrap();
                let back = rotate_left(&z, &r).unwrap();
                back.verify(&z).unwrap();
                assert_eq!(back.u.map, t.u.map);
            }
        }
    }

    #[test]
    fn shifted_triangles() {
        let z = examples::e3(Field::Q);
        let mut g = Gen::new(&z, 47, 3);
        for _ in 0..3 {
            let c = random_canonical(&z, &mut g);
            let t = canonical_triangle(&z, &c);
            shift_triangle(&z, &t, 1).unwrap().verify(&z).unwrap();
            shift_triangle(&z, &t, -1).unwrap().verify(&z).unwrap();
            shift_triangle(&z, &t, 2).unwrap().verify(&z).unwrap();
        }
    }

    #[test]
    fn cones_and_tr3() {
        for z in [examples::e2(Field::Q), examples::e3(Field::Q)] {
            let mut g = Gen::new(&z, 53, 3);
            for _ in 0..3 {
                let x = g.object();
                let y = g.object();
                let u = g.cocycle(&x, &y);
                let t = cone_of(&z, &u).unwrap();
                t.verify(&z).unwrap();
                let c = random_canonical(&z, &mut g);
                let x2 = g.object();
                let (l, c2) = confl::pushout(&z, &c, &g.cocycle(&c.x, &x2)).unwrap();
                let (t1, t2) = (canonical_triangle(&z, &c), canonical_triangle(&z, &c2));
                let th2 = l.t.add(&g.coboundary(&c.e, &c2.e));
                let th3 = complete_tr3(&z, &t1, &t2, &l.tx, &th2).unwrap();
                verify_morphism(&z, &t1, &t2, [&l.tx, &th2, &th3]).unwrap();
            }
        }
    }

    #[test]
    fn axioms_on_fuzzed_instances() {
        for z in [examples::e2(Field::Q), examples::e3(Field::Q)] {
            let inst = fuzz_instances(&z, 67, 4, 3);
            let rep = verify_axioms(&z, &inst, 67, Mutation::None);
            assert!(rep.passed(), "{:?}", rep.lines());
            assert!(rep.results.iter().all(|r| r.checked == 4));
        }
    }

    #[test]
    fn empty_instance_set_is_vacuous() {
        let z = examples::e2(Field::Q);
        let rep = verify_axioms(&z, &[], 0, Mutation::None);
        assert!(rep.passed());
        assert_eq!(rep.warnings.len(), 1);
    }

    #[test]
    fn octahedra_from_composable_pairs() {
        for z in [examples::e2(Field::Q), examples::e3(Field::Q)] {
            let mut g = Gen::new(&z, 59, 2);
            for _ in 0..2 {
                let x = g.object();
                let y = g.object();
                let w = g.object();
                let u = g.cocycle(&x, &y);
                let v = g.cocycle(&y, &w);
                let t1 = cone_of(&z, &u).unwrap();
                let t2 = cone_of(&z, &v).unwrap();
                let t3 = cone_of(&z, &star(&z, &v, &u)).unwrap();
                let o = octahedron(&z, &t1, &t2, &t3).unwrap();
                verify_octahedron(&z, &t1, &t2, &t3, &o).unwrap();
            }
        }
    }
}

#[cfg(test)]
mod mutation_tests {
    use super::*;
    use crate::examples;
    use crate::gen::Gen;
    use crate::scalar::Field;

    #[test]
    fn wrong_signs_are_rejected() {
        for z in [examples::e2(Field::Q), examples::e3(Field::Q)] {
            let mut g = Gen::new(&z, 61, 3);
            let (mut rot, mut oct, mut cone) = (0, 0, 0);
            for _ in 0..8 {
                let x = g.object();
                let y = g.object();
                let w = g.object();
                let u = g.cocycle(&x, &y);
                let v = g.cocycle(&y, &w);
                let t = cone_of(&z, &u).unwrap();
                let mut bad = t.clone();
                bad.w = bad.w.neg();
                if !tw::is_coboundary(&z, &t.w.add(&t.w)) {
                    assert!(bad.verify(&z).is_err());
                    cone += 1;
                }
                let mut r = rotate_right(&z, &t).unwrap();
                r.w = r.w.neg();
                if !tw::is_coboundary(&z, &u) {
                    assert!(r.verify(&z).is_err());
                    rot += 1;
                }
                let t2 = cone_of(&z, &v).unwrap();
                let t3 = cone_of(&z, &star(&z, &v, &u)).unwrap();
                let mut o = octahedron(&z, &t, &t2, &t3).unwrap();
                verify_octahedron(&z, &t, &t2, &t3, &o).unwrap();
                o.tri.w = o.tri.w.neg();
                if verify_octahedron(&z, &t, &t2, &t3, &o).is_err() {
                    oct += 1;
                }
            }
            let inst = fuzz_instances(&z, 71, 6, 3);
            let rep = verify_axioms(&z, &inst, 71, Mutation::RotateRightSign);
            assert!(!rep.result("TR2-right").unwrap().failures.is_empty());
            assert!(cone > 0 && rot > 0 && oct > 0);
        }
    }
}
