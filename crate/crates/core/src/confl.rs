//! Special and canonical conflations in `𝒵(Ẑ)`, their ladders, `Ψ`, the functor `J`,
//! cone and rotation conflations.

use std::collections::BTreeMap;

use crate::ad::{self, AdMorphism, DirectSum, SModule};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::section::SectionAlgebra;
use crate::tw::{self, b1, is_cocycle, star, Obj, TwMor, TwObject};

/// Morphism between direct sums of objects assembled from plain blocks `grid[j][i]`.
pub fn block_mor(
    z: &SectionAlgebra,
    src: &Obj,
    sds: &DirectSum,
    tgt: &Obj,
    tds: &DirectSum,
    grid: &[Vec<Option<&AdMorphism>>],
) -> TwMor {
    TwMor { src: src.clone(), tgt: tgt.clone(), map: ad::assemble(z, tds, sds, grid) }
}

pub fn single(m: &SModule) -> DirectSum {
    DirectSum::new(&[m])
}

/// A composable pair `X → E → Y` of `𝒵(Ẑ)`.
#[derive(Clone, Debug)]
pub struct Conflation {
    pub x: Obj,
    pub e: Obj,
    pub y: Obj,
    pub f: TwMor,
    pub g: TwMor,
}

/// `E = X ⊕ Y`, `δ_E = [[δ_X, γ], [0, δ_Y]]`, `f = (𝕀, 0)ᵗ`, `g = (0, 𝕀)`.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub x: Obj,
    pub y: Obj,
    pub e: Obj,
    pub gamma: TwMor,
    pub ds: DirectSum,
    pub f: TwMor,
    pub g: TwMor,
}

impl Canonical {
    pub fn new(z: &SectionAlgebra, x: &Obj, y: &Obj, gamma: &AdMorphism) -> Result<Canonical> {
        let gamma = TwMor::new(y, x, gamma.clone())?;
        if let Some(d) = gamma.degree(z) {
            if d != 0 {
                return Err(Error::Degree { expected: 0, found: d });
            }
        }
        let res = b1(z, &gamma);
        if !res.is_zero() {
            return Err(Error::NotCocycle(res.map.describe(z)));
        }
        let ds = DirectSum::new(&[&x.module, &y.module]);
        let delta = ad::assemble(z, &ds, &ds, &[vec![Some(&x.delta), Some(&gamma.map)], vec![None, Some(&y.delta)]]);
        let e = TwObject::new(z, ds.total.clone(), delta)?;
        let f = TwMor { src: x.clone(), tgt: e.clone(), map: ds.inj(z, 0) };
        let g = TwMor { src: e.clone(), tgt: y.clone(), map: ds.proj(z, 1) };
        Ok(Canonical { x: x.clone(), y: y.clone(), e, gamma, ds, f, g })
    }

    pub fn split(z: &SectionAlgebra, x: &Obj, y: &Obj) -> Canonical {
        Canonical::new(z, x, y, &AdMorphism::zero(&y.module, &x.module)).expect("split conflation")
    }

    pub fn conflation(&self) -> Conflation {
        Conflation { x: self.x.clone(), e: self.e.clone(), y: self.y.clone(), f: self.f.clone(), g: self.g.clone() }
    }

    /// Section `Y → E` (not a cocycle unless `γ = 0`).
    pub fn incl_y(&self, z: &SectionAlgebra) -> TwMor {
        TwMor { src: self.y.clone(), tgt: self.e.clone(), map: self.ds.inj(z, 1) }
    }

    /// Retraction `E → X`.
    pub fn proj_x(&self, z: &SectionAlgebra) -> TwMor {
        TwMor { src: self.e.clone(), tgt: self.x.clone(), map: self.ds.proj(z, 0) }
    }

    /// `h = σ_X ∘ γ: Y → X[1]`, the class classifying the conflation.
    pub fn class(&self, z: &SectionAlgebra) -> TwMor {
        psi_inv(z, self)
    }
}

fn fiber_matrix(z: &SectionAlgebra, f: &AdMorphism, u: crate::hat::HatIdem) -> Matrix {
    let field = z.field();
    f.term(&crate::hat::unit(z, u))
        .cloned()
        .unwrap_or_else(|| Matrix::zeros(field, f.tgt.dim(u), f.src.dim(u)))
}

/// Fiberwise exactness of a pair of special cocycles.
pub fn validate_special(z: &SectionAlgebra, c: &Conflation) -> Result<()> {
    for (m, name) in [(&c.f, "f"), (&c.g, "g")] {
        if !m.map.is_special(z) {
            return Err(Error::Invalid(format!("{name} is not special")));
        }
        if !is_cocycle(z, m) {
            return Err(Error::NotCocycle(format!("{name}: {}", b1(z, m).map.describe(z))));
        }
    }
    if c.f.tgt != c.e || c.g.src != c.e || c.f.src != c.x || c.g.tgt != c.y {
        return Err(Error::Shape("conflation ends".into()));
    }
    let mut fibers: Vec<_> = c.e.module.support().map(|(u, _)| u).collect();
    fibers.extend(c.x.module.support().map(|(u, _)| u));
    fibers.extend(c.y.module.support().map(|(u, _)| u));
    fibers.sort();
    fibers.dedup();
    for u in fibers {
        let fu = fiber_matrix(z, &c.f.map, u);
        let gu = fiber_matrix(z, &c.g.map, u);
        let at = format!("({},{})", u.shift, z.idems()[u.idem]);
        if fu.rank() != fu.cols() {
            return Err(Error::Invalid(format!("not an inflation at {at}")));
        }
        if gu.rank() != gu.rows() {
            return Err(Error::Invalid(format!("not a deflation at {at}")));
        }
        if !gu.mul(&fu).is_zero() || fu.cols() + gu.rows() != fu.rows() {
            return Err(Error::Invalid(format!("not exact at {at}")));
        }
    }
    Ok(())
}

/// A special isomorphism `h: E → X ⊕ Y` carrying a special conflation to a canonical one.
pub fn canonicalize(z: &SectionAlgebra, c: &Conflation) -> Result<(TwMor, Canonical)> {
    validate_special(z, c)?;
    let field = z.field();
    let ds = DirectSum::new(&[&c.x.module, &c.y.module]);
    let mut parts = BTreeMap::new();
    for (u, d) in c.e.module.support() {
        let fu = fiber_matrix(z, &c.f.map, u);
        let gu = fiber_matrix(z, &c.g.map, u);
        let (dx, dy) = (fu.cols(), gu.rows());
        // section of g: solve g s = 1 column by column via the reduced form of [g | 1]
        let mut aug = Matrix::zeros(field, dy, d + dy);
        aug.put_block(0, 0, &gu);
        aug.put_block(0, d, &Matrix::identity(field, dy));
        let (r, piv) = aug.rref();
        let mut s = Matrix::zeros(field, d, dy);
        for (row, &p) in piv.iter().enumerate() {
            for j in 0..dy {
                s.set(p, j, r.get(row, d + j).clone());
            }
        }
        let mut inv = Matrix::zeros(field, d, dx + dy);
        inv.put_block(0, 0, &fu);
        inv.put_block(0, dx, &s);
        parts.insert(u, inv.inverse()?);
    }
    let h = ad::special(z, &c.e.module, &ds.total, &parts)?;
    let (e2, hm) = tw::transport(z, &h, &c.e)?;
    let gamma = ad::block(z, &e2.delta, &ds, &ds, 0, 1);
    let canon = Canonical::new(z, &c.x, &c.y, &gamma)?;
    if canon.e.delta != e2.delta {
        return Err(Error::Invalid("transported differential is not triangular".into()));
    }
    let hm = TwMor { src: hm.src, tgt: canon.e.clone(), map: hm.map };
    Ok((hm, canon))
}

/// A ladder between composable pairs: `t ⋆ f = f' ⋆ tx` and `g' ⋆ t = ty ⋆ g` in `𝒵`.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub from: Conflation,
    pub to: Conflation,
    pub tx: TwMor,
    pub t: TwMor,
    pub ty: TwMor,
}

impl Ladder {
    pub fn identity_ends(z: &SectionAlgebra, from: Conflation, to: Conflation, t: TwMor) -> Ladder {
        let tx = TwMor::identity(z, &from.x);
        let ty = TwMor::identity(z, &from.y);
        Ladder { from, to, tx, t, ty }
    }

    pub fn verify(&self, z: &SectionAlgebra) -> Result<()> {
        for (m, name) in [(&self.tx, "tx"), (&self.t, "t"), (&self.ty, "ty")] {
            if !is_cocycle(z, m) {
                return Err(Error::NotCocycle(format!("ladder map {name}")));
            }
        }
        for c in [&self.from, &self.to] {
            for m in [&c.f, &c.g] {
                if !is_cocycle(z, m) {
                    return Err(Error::NotCocycle("conflation morphism".into()));
                }
            }
        }
        let left = star(z, &self.t, &self.from.f).sub(&star(z, &self.to.f, &self.tx));
        if !left.is_zero() {
            return Err(Error::Invalid(format!("left square fails: {}", left.map.describe(z))));
        }
        let right = star(z, &self.to.g, &self.t).sub(&star(z, &self.ty, &self.from.g));
        if !right.is_zero() {
            return Err(Error::Invalid(format!("right square fails: {}", right.map.describe(z))));
        }
        Ok(())
    }
}

/// A chain `ξ = ξ_0 ~ ξ_1 ~ … ~ ξ_n` of ladders ending at a canonical conflation.
/// `forward[k]` says whether step `k` points from `ξ_k` to `ξ_{k+1}`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub steps: Vec<(bool, Ladder)>,
    pub canonical: Canonical,
}

fn same_pair(a: &Conflation, b: &Conflation) -> bool {
    a.x == b.x && a.e == b.e && a.y == b.y && a.f == b.f && a.g == b.g
}

impl Certificate {
    pub fn trivial(c: Canonical) -> Certificate {
        Certificate { steps: Vec::new(), canonical: c }
    }

    pub fn verify(&self, z: &SectionAlgebra, c: &Conflation) -> Result<()> {
        let mut cur = c.clone();
        for (k, (fwd, l)) in self.steps.iter().enumerate() {
            l.verify(z).map_err(|e| Error::Invalid(format!("step {k}: {e}")))?;
            let (here, next) = if *fwd { (&l.from, &l.to) } else { (&l.to, &l.from) };
            if !same_pair(here, &cur) {
                return Err(Error::Invalid(format!("step {k} does not start at the previous pair")));
            }
            cur = next.clone();
        }
        if !same_pair(&cur, &self.canonical.conflation()) {
            return Err(Error::Invalid("chain does not end at its canonical conflation".into()));
        }
        Ok(())
    }

    /// Composite middle map `E → E_c` in `ℋ`, inverting backward steps with the solver.
    pub fn middle(&self, z: &SectionAlgebra) -> Result<TwMor> {
        self.compose(z, |l| &l.t)
    }

    pub fn left_end(&self, z: &SectionAlgebra) -> Result<TwMor> {
        self.compose(z, |l| &l.tx)
    }

    pub fn right_end(&self, z: &SectionAlgebra) -> Result<TwMor> {
        self.compose(z, |l| &l.ty)
    }

    fn compose(&self, z: &SectionAlgebra, pick: impl Fn(&Ladder) -> &TwMor) -> Result<TwMor> {
        let mut acc: Option<TwMor> = None;
        for (fwd, l) in &self.steps {
            let m = if *fwd {
                pick(l).clone()
            } else {
                tw::h_inverse(z, pick(l)).ok_or_else(|| Error::NotInvertible("ladder map".into()))?
            };
            acc = Some(match acc {
                None => m,
                Some(a) => star(z, &m, &a),
            });
        }
        Ok(acc.unwrap_or_else(|| TwMor::identity(z, &self.canonical.e)))
    }
}

/// Corner search: `h = [[𝕀, s], [0, 𝕀]]: E → E'` in `𝒵` between canonical conflations with equal ends.
pub fn equivalent(z: &SectionAlgebra, a: &Canonical, b: &Canonical) -> Option<TwMor> {
    if a.x != b.x || a.y != b.y {
        return None;
    }
    let base = block_mor(
        z,
        &a.e,
        &a.ds,
        &b.e,
        &b.ds,
        &[vec![Some(&ad::identity(z, &a.x.module)), None], vec![None, Some(&ad::identity(z, &a.y.module))]],
    );
    let sol = tw::solve_linear(
        z,
        &[tw::Unknown::new(&a.y, &a.x, -1)],
        |_, s| {
            let corner = block_mor(z, &a.e, &a.ds, &b.e, &b.ds, &[vec![None, Some(&s.map)], vec![None, None]]);
            vec![(0, b1(z, &corner).map)]
        },
        &[(0, b1(z, &base).map.neg())],
    )?;
    let s = &sol[0];
    Some(block_mor(
        z,
        &a.e,
        &a.ds,
        &b.e,
        &b.ds,
        &[vec![Some(&ad::identity(z, &a.x.module)), Some(&s.map)], vec![None, Some(&ad::identity(z, &a.y.module))]],
    ))
}

/// Pushout along `h: X → X₁`: corner `h ⋆ γ`, ladder `(h, diag(h, 𝕀), 𝕀)`.
pub fn pushout(z: &SectionAlgebra, c: &Canonical, h: &TwMor) -> Result<(Ladder, Canonical)> {
    let g1 = star(z, h, &c.gamma);
    let c1 = Canonical::new(z, &h.tgt, &c.y, &g1.map)?;
    let t = block_mor(z, &c.e, &c.ds, &c1.e, &c1.ds, &[vec![Some(&h.map), None], vec![None, Some(&ad::identity(z, &c.y.module))]]);
    let l = Ladder { from: c.conflation(), to: c1.conflation(), tx: h.clone(), t, ty: TwMor::identity(z, &c.y) };
    Ok((l, c1))
}

/// Pullback along `h: Y₁ → Y`: corner `-γ ⋆ h`, ladder `(𝕀, diag(𝕀, h), h)` from the new row.
pub fn pullback(z: &SectionAlgebra, c: &Canonical, h: &TwMor) -> Result<(Ladder, Canonical)> {
    let g1 = star(z, &c.gamma, h).neg();
    let c1 = Canonical::new(z, &c.x, &h.src, &g1.map)?;
    let t = block_mor(z, &c1.e, &c1.ds, &c.e, &c.ds, &[vec![Some(&ad::identity(z, &c.x.module)), None], vec![None, Some(&h.map)]]);
    let l = Ladder { from: c1.conflation(), to: c.conflation(), tx: TwMor::identity(z, &c.x), t, ty: h.clone() };
    Ok((l, c1))
}

pub fn sigma(z: &SectionAlgebra, x: &Obj, x1: &Obj) -> TwMor {
    TwMor { src: x.clone(), tgt: x1.clone(), map: ad::sigma(z, &x.module) }
}

pub fn tau(z: &SectionAlgebra, x: &Obj, x1: &Obj) -> TwMor {
    TwMor { src: x1.clone(), tgt: x.clone(), map: ad::tau(z, &x.module) }
}

/// `ξ_h` for a cocycle `h: Y → X[1]`: corner `-τ_X ∘ h`.
pub fn psi(z: &SectionAlgebra, x: &Obj, h: &TwMor) -> Result<Canonical> {
    if !is_cocycle(z, h) {
        return Err(Error::NotCocycle(b1(z, h).map.describe(z)));
    }
    if h.tgt.module != x.module.shift(1) {
        return Err(Error::Shape("h must land in X[1]".into()));
    }
    let gamma = ad::circ(z, &ad::tau(z, &x.module), &h.map).neg();
    Canonical::new(z, x, &h.src, &gamma)
}

/// `σ_X ∘ γ: Y → X[1]`.
pub fn psi_inv(z: &SectionAlgebra, c: &Canonical) -> TwMor {
    let x1 = c.x.shift(1);
    TwMor { src: c.y.clone(), tgt: x1, map: ad::circ(z, &ad::sigma(z, &c.x.module), &c.gamma.map) }
}

/// `J(X) = (X ⊕ X[1], [[δ_X, -τ_X], [0, δ_X[1]]])`, as the canonical conflation `X → J(X) → X[1]`,
/// together with the contracting homotopy `s = [[0, 0], [-σ_X, 0]]`.
pub struct JData {
    pub xi: Canonical,
    pub s: TwMor,
}

pub fn j_object(z: &SectionAlgebra, x: &Obj) -> JData {
    j_object_with(z, x, &x.shift(1))
}

pub fn j_object_with(z: &SectionAlgebra, x: &Obj, x1: &Obj) -> JData {
    let gamma = ad::tau(z, &x.module).neg();
    let xi = Canonical::new(z, x, x1, &gamma).expect("τ_X is a cocycle");
    let ms = ad::sigma(z, &x.module).neg();
    let s = block_mor(z, &xi.e, &xi.ds, &xi.e, &xi.ds, &[vec![None, None], vec![Some(&ms), None]]);
    JData { xi, s }
}

/// `J(f) = diag(f, f[1])`.
pub fn j_mor(z: &SectionAlgebra, f: &TwMor, jx: &JData, jy: &JData) -> TwMor {
    let f1 = f.map.shift(1);
    block_mor(z, &jx.xi.e, &jx.xi.ds, &jy.xi.e, &jy.xi.ds, &[vec![Some(&f.map), None], vec![None, Some(&f1)]])
}

/// `h' ⋆ f = h` for a homologically trivial `h: X → X₁` and a special inflation `f`.
pub fn factor_through_inflation(z: &SectionAlgebra, h: &TwMor, f: &TwMor) -> Result<TwMor> {
    if !tw::is_coboundary(z, h) {
        return Err(Error::NotTrivial(h.map.describe(z)));
    }
    tw::factor_after(z, h, f).ok_or_else(|| Error::NotTrivial("no factorization".into()))
}

/// `g ⋆ h' = h` for a homologically trivial `h: Y₁ → Y` and a special deflation `g`.
pub fn factor_through_deflation(z: &SectionAlgebra, h: &TwMor, g: &TwMor) -> Result<TwMor> {
    if !tw::is_coboundary(z, h) {
        return Err(Error::NotTrivial(h.map.describe(z)));
    }
    tw::factor_before(z, h, g).ok_or_else(|| Error::NotTrivial("no factorization".into()))
}

/// `X → J(X) ⊕ Y → (W, δ'_W)` with `W = Y ⊕ X[1]`, `δ'_W = [[δ_Y, f∘τ_X], [0, δ_X[1]]]`.
pub struct Cone {
    pub w: Obj,
    pub wds: DirectSum,
    pub eta: Conflation,
    pub cert: Certificate,
}

pub fn cone_conflation(z: &SectionAlgebra, f: &TwMor) -> Result<Cone> {
    if !is_cocycle(z, f) {
        return Err(Error::NotCocycle(b1(z, f).map.describe(z)));
    }
    let (x, y) = (&f.src, &f.tgt);
    let x1 = x.shift(1);
    let tau_x = ad::tau(z, &x.module);
    let ftau = ad::circ(z, &f.map, &tau_x);
    let wds = DirectSum::new(&[&y.module, &x1.module]);
    let dw1 = ad::assemble(z, &wds, &wds, &[vec![Some(&y.delta), Some(&ftau)], vec![None, Some(&x1.delta)]]);
    let w = TwObject::new(z, wds.total.clone(), dw1)?;

    // Ē = J(X) ⊕ Y, stored as X ⊕ X[1] ⊕ Y
    let e3 = DirectSum::new(&[&x.module, &x1.module, &y.module]);
    let (idx, idx1, idy) = (ad::identity(z, &x.module), ad::identity(z, &x1.module), ad::identity(z, &y.module));
    let mtau = tau_x.neg();
    let dbar = ad::assemble(
        z,
        &e3,
        &e3,
        &[vec![Some(&x.delta), Some(&mtau), None], vec![None, Some(&x1.delta), None], vec![None, None, Some(&y.delta)]],
    );
    let ebar = TwObject::new(z, e3.total.clone(), dbar)?;
    let xds = single(&x.module);
    let alpha_bar = block_mor(z, x, &xds, &ebar, &e3, &[vec![Some(&idx)], vec![None], vec![Some(&f.map)]]);
    let mf = f.map.neg();
    let beta_bar = block_mor(z, &ebar, &e3, &w, &wds, &[vec![Some(&mf), None, Some(&idy)], vec![None, Some(&idx1), None]]);
    let eta_bar = Conflation { x: x.clone(), e: ebar.clone(), y: w.clone(), f: alpha_bar, g: beta_bar };

    // E = X ⊕ W with split δ_W and corner γ = (0, -τ_X)
    let e3b = DirectSum::new(&[&x.module, &y.module, &x1.module]);
    let wsplit_delta = ad::assemble(z, &e3b, &e3b, &[vec![Some(&x.delta), None, Some(&mtau)], vec![None, Some(&y.delta), None], vec![None, None, Some(&x1.delta)]]);
    let e_obj = TwObject::new(z, e3b.total.clone(), wsplit_delta)?;
    let alpha = block_mor(z, x, &xds, &e_obj, &e3b, &[vec![Some(&idx)], vec![Some(&f.map)], vec![None]]);
    let beta = block_mor(z, &e_obj, &e3b, &w, &wds, &[vec![Some(&mf), Some(&idy), None], vec![None, None, Some(&idx1)]]);
    let eta = Conflation { x: x.clone(), e: e_obj.clone(), y: w.clone(), f: alpha, g: beta };
    let t = block_mor(
        z,
        &ebar,
        &e3,
        &e_obj,
        &e3b,
        &[vec![Some(&idx), None, None], vec![None, None, Some(&idy)], vec![None, Some(&idx1), None]],
    );
    let step1 = Ladder::identity_ends(z, eta_bar.clone(), eta.clone(), t);

    // canonical target with corner γ over (W, δ'_W)
    let gamma = ad::assemble(z, &xds, &wds, &[vec![None, Some(&mtau)]]);
    let canon = Canonical::new(z, x, &w, &gamma)?;
    let h = block_mor(
        z,
        &e_obj,
        &e3b,
        &canon.e,
        &e3b,
        &[vec![Some(&idx), None, None], vec![Some(&mf), Some(&idy), None], vec![None, None, Some(&idx1)]],
    );
    let step2 = Ladder::identity_ends(z, eta, canon.conflation(), h);
    let cert = Certificate { steps: vec![(true, step1), (true, step2)], canonical: canon };
    Ok(Cone { w, wds, eta: eta_bar, cert })
}

/// `η: E → J(X) ⊕ Y → X[1]` with `α = (h_ξ, g)ᵗ`, `β = (β_X, -h_γ)`, `h_γ = -σ_X∘γ`,
/// certified against the canonical `E → E ⊕ X[1] → X[1]` with corner `(-τ_X, 0)ᵗ`.
pub struct Rotation {
    pub eta: Conflation,
    pub cert: Certificate,
    /// `J(X) ⊕ Y` stored as `X ⊕ X[1] ⊕ Y`.
    pub mid_ds: DirectSum,
}

pub fn rotation_conflation(z: &SectionAlgebra, c: &Canonical, x1: &Obj) -> Result<Rotation> {
    let (x, y, e) = (&c.x, &c.y, &c.e);
    let (idx, idx1, idy) = (ad::identity(z, &x.module), ad::identity(z, &x1.module), ad::identity(z, &y.module));
    let hg = ad::circ(z, &ad::sigma(z, &x.module), &c.gamma.map).neg();
    let mid = DirectSum::new(&[&x.module, &x1.module, &y.module]);
    let mid_obj = {
        let mtau = ad::tau(z, &x.module).neg();
        let d = ad::assemble(z, &mid, &mid, &[vec![Some(&x.delta), Some(&mtau), None], vec![None, Some(&x1.delta), None], vec![None, None, Some(&y.delta)]]);
        TwObject::new(z, mid.total.clone(), d)?
    };
    let x1ds = single(&x1.module);
    let alpha = block_mor(z, e, &c.ds, &mid_obj, &mid, &[vec![Some(&idx), None], vec![None, Some(&hg)], vec![None, Some(&idy)]]);
    let mhg = hg.neg();
    let beta = block_mor(z, &mid_obj, &mid, x1, &x1ds, &[vec![None, Some(&idx1), Some(&mhg)]]);
    let eta = Conflation { x: e.clone(), e: mid_obj.clone(), y: x1.clone(), f: alpha, g: beta };

    // permutation s: X ⊕ X[1] ⊕ Y → X ⊕ Y ⊕ X[1], transported differential
    let tgt_ds = DirectSum::new(&[&x.module, &y.module, &x1.module]);
    let s_map = ad::assemble(z, &tgt_ds, &mid, &[vec![Some(&idx), None, None], vec![None, None, Some(&idy)], vec![None, Some(&idx1), None]]);
    let (ebar, s) = tw::transport(z, &s_map, &mid_obj)?;
    let eds = single(&e.module);
    let rho = ad::assemble(z, &x1ds, &c.ds, &[vec![None, Some(&mhg)]]);
    let ide = ad::identity(z, &e.module);
    let e_x1 = DirectSum::new(&[&e.module, &x1.module]);
    let mrho = rho.neg();
    let abar = TwMor { src: e.clone(), tgt: ebar.clone(), map: ad::assemble(z, &e_x1, &eds, &[vec![Some(&ide)], vec![Some(&mrho)]]) };
    let bbar = TwMor { src: ebar.clone(), tgt: x1.clone(), map: ad::assemble(z, &x1ds, &e_x1, &[vec![Some(&rho), Some(&idx1)]]) };
    let eta_bar = Conflation { x: e.clone(), e: ebar.clone(), y: x1.clone(), f: abar, g: bbar };
    let step1 = Ladder::identity_ends(z, eta.clone(), eta_bar.clone(), s);

    let g1 = {
        let mtau = ad::tau(z, &x.module).neg();
        ad::assemble(z, &c.ds, &x1ds, &[vec![Some(&mtau)], vec![None]])
    };
    let canon = Canonical::new(z, e, x1, &g1)?;
    let sp = TwMor {
        src: ebar.clone(),
        tgt: canon.e.clone(),
        map: ad::assemble(z, &canon.ds, &canon.ds, &[vec![Some(&ide), None], vec![Some(&rho), Some(&idx1)]]),
    };
    let step2 = Ladder::identity_ends(z, eta_bar, canon.conflation(), sp);
    Ok(Rotation { eta, cert: Certificate { steps: vec![(true, step1), (true, step2)], canonical: canon }, mid_ds: mid })
}

/// `η: Y[-1] → J(Y[-1]) ⊕ X → E` with `α = (α_{Y[-1]}, -h^γ)ᵗ`, `β = (h^ξ, f)`,
/// `h^γ = -(σ_X∘γ)[-1]`, certified against `Y[-1] → Y[-1] ⊕ E → E` with corner `(0, -τ_{Y[-1]})`.
pub fn dual_rotation_conflation(z: &SectionAlgebra, c: &Canonical, ym: &Obj) -> Result<Rotation> {
    let (x, y, e) = (&c.x, &c.y, &c.e);
    let (idx, idy, idym) = (ad::identity(z, &x.module), ad::identity(z, &y.module), ad::identity(z, &ym.module));
    let hgu = ad::circ(z, &ad::sigma(z, &x.module), &c.gamma.map).shift(-1).neg();
    let mtau = ad::tau(z, &ym.module).neg();
    // J(Y[-1]) ⊕ X stored as Y[-1] ⊕ Y ⊕ X
    let mid = DirectSum::new(&[&ym.module, &y.module, &x.module]);
    let d = ad::assemble(z, &mid, &mid, &[vec![Some(&ym.delta), Some(&mtau), None], vec![None, Some(&y.delta), None], vec![None, None, Some(&x.delta)]]);
    let mid_obj = TwObject::new(z, mid.total.clone(), d)?;
    let ymds = single(&ym.module);
    let mhgu = hgu.neg();
    let alpha = block_mor(z, ym, &ymds, &mid_obj, &mid, &[vec![Some(&idym)], vec![None], vec![Some(&mhgu)]]);
    let beta = block_mor(z, &mid_obj, &mid, e, &c.ds, &[vec![Some(&hgu), None, Some(&idx)], vec![None, Some(&idy), None]]);
    let eta = Conflation { x: ym.clone(), e: mid_obj.clone(), y: e.clone(), f: alpha, g: beta };

    // permutation to Y[-1] ⊕ X ⊕ Y
    let tgt_ds = DirectSum::new(&[&ym.module, &x.module, &y.module]);
    let s_map = ad::assemble(z, &tgt_ds, &mid, &[vec![Some(&idym), None, None], vec![None, None, Some(&idx)], vec![None, Some(&idy), None]]);
    let (ebar, s) = tw::transport(z, &s_map, &mid_obj)?;
    let rho = ad::assemble(z, &c.ds, &ymds, &[vec![Some(&hgu)], vec![None]]);
    let mrho = rho.neg();
    let ide = ad::identity(z, &e.module);
    let ym_e = DirectSum::new(&[&ym.module, &e.module]);
    let eds = single(&e.module);
    let abar = TwMor { src: ym.clone(), tgt: ebar.clone(), map: ad::assemble(z, &ym_e, &ymds, &[vec![Some(&idym)], vec![Some(&mrho)]]) };
    let bbar = TwMor { src: ebar.clone(), tgt: e.clone(), map: ad::assemble(z, &eds, &ym_e, &[vec![Some(&rho), Some(&ide)]]) };
    let eta_bar = Conflation { x: ym.clone(), e: ebar.clone(), y: e.clone(), f: abar, g: bbar };
    let step1 = Ladder::identity_ends(z, eta.clone(), eta_bar.clone(), s);

    let g1 = ad::assemble(z, &ymds, &c.ds, &[vec![None, Some(&mtau)]]);
    let canon = Canonical::new(z, ym, e, &g1)?;
    let sp = TwMor {
        src: ebar.clone(),
        tgt: canon.e.clone(),
        map: ad::assemble(z, &canon.ds, &canon.ds, &[vec![Some(&idym), None], vec![Some(&rho), Some(&ide)]]),
    };
    let step2 = Ladder::identity_ends(z, eta_bar, canon.conflation(), sp);
    Ok(Rotation { eta, cert: Certificate { steps: vec![(true, step1), (true, step2)], canonical: canon }, mid_ds: mid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::gen::Gen;
    use crate::scalar::Field;

    #[test]
    fn split_and_psi_round_trip() {
        let z = examples::e2(Field::Q);
        let mut g = Gen::new(&z, 7, 4);
        for _ in 0..5 {
            let x = g.object();
            let y = g.object();
            let x1 = x.shift(1);
            let h = g.cocycle(&y, &x1);
            let c = psi(&z, &x, &h).unwrap();
            assert_eq!(psi_inv(&z, &c).map, h.map);
            let c2 = psi(&z, &x, &psi_inv(&z, &c)).unwrap();
            assert_eq!(c2.gamma.map, c.gamma.map);
            validate_special(&z, &c.conflation()).unwrap();
        }
    }

    #[test]
    fn j_homotopy() {
        let z = examples::e3(Field::Q);
        let mut g = Gen::new(&z, 3, 4);
        for _ in 0..4 {
            let x = g.object();
            let jd = j_object(&z, &x);
            assert_eq!(b1(&z, &jd.s), TwMor::identity(&z, &jd.xi.e));
        }
    }

    #[test]
    fn cone_and_rotations_certified() {
        for z in [examples::e2(Field::Q), examples::e3(Field::Q)] {
            let mut g = Gen::new(&z, 11, 4);
            for _ in 0..3 {
                let x = g.object();
                let y = g.object();
                let f = g.cocycle(&x, &y);
                let cone = cone_conflation(&z, &f).unwrap();
                cone.cert.verify(&z, &cone.eta).unwrap();
                let h = g.cocycle(&y, &x.shift(1));
                let c = psi(&z, &x, &h).unwrap();
                let r = rotation_conflation(&z, &c, &x.shift(1)).unwrap();
                r.cert.verify(&z, &r.eta).unwrap();
                let d = dual_rotation_conflation(&z, &c, &y.shift(-1)).unwrap();
                d.cert.verify(&z, &d.eta).unwrap();
            }
        }
    }

    #[test]
    fn canonicalize_permuted_middle() {
        let z = examples::e2(Field::Q);
        let mut g = Gen::new(&z, 5, 4);
        let x = g.object();
        let y = g.object();
        let c = psi(&z, &x, &g.cocycle(&y, &x.shift(1))).unwrap();
        let p = g.special_iso(&c.e.module);
        let (e2, pm) = tw::transport(&z, &p.map, &c.e).unwrap();
        let pinv = ad::special_inverse(&z, &p.map).unwrap();
        let f2 = star(&z, &pm, &c.f);
        let g2 = star(&z, &c.g, &TwMor { src: e2.clone(), tgt: c.e.clone(), map: pinv });
        let conf = Conflation { x: x.clone(), e: e2, y: y.clone(), f: f2, g: g2 };
        let (h, canon) = canonicalize(&z, &conf).unwrap();
        let l = Ladder::identity_ends(&z, conf, canon.conflation(), h);
        l.verify(&z).unwrap();
        assert!(equivalent(&z, &canon, &c).is_some());
    }
}

#[cfg(test)]
mod more_tests {
    use super::*;
    use crate::examples;
    use crate::gen::Gen;
    use crate::scalar::Field;

    #[test]
    fn corner_of_upper_triangular_map() {
        let z = examples::e2(Field::Q);
        let mut g = Gen::new(&z, 21, 4);
        for _ in 0..6 {
            let x = g.object();
            let y = g.object();
            let x1 = x.shift(1);
            let a = psi(&z, &x, &g.cocycle(&y, &x1)).unwrap();
            let b = psi(&z, &x, &g.cocycle(&y, &x1)).unwrap();
            let s = g.morphism(&y, &x, -1);
            let (idx, idy) = (ad::identity(&z, &x.module), ad::identity(&z, &y.module));
            let h = block_mor(&z, &a.e, &a.ds, &b.e, &b.ds, &[vec![Some(&idx), Some(&s.map)], vec![None, Some(&idy)]]);
            let corner = ad::block(&z, &b1(&z, &h).map, &b.ds, &a.ds, 0, 1);
            let expected = b1(&z, &s)
                .map
                .add(&ad::circ(&z, &b.gamma.map, &idy))
                .add(&ad::circ(&z, &idx, &a.gamma.map));
            assert_eq!(corner, expected);
        }
    }

    #[test]
    fn equivalence_matches_class() {
        let z = examples::e2(Field::Q);
        let mut g = Gen::new(&z, 23, 4);
        let (mut same, mut differ) = (0, 0);
        for k in 0..12 {
            let x = g.object();
            let y = g.object();
            let x1 = x.shift(1);
            let h = g.cocycle(&y, &x1);
            let h2 = if k % 2 == 0 { h.add(&g.coboundary(&y, &x1)) } else { g.cocycle(&y, &x1) };
            let a = psi(&z, &x, &h).unwrap();
            let b = psi(&z, &x, &h2).unwrap();
            let eq = equivalent(&z, &a, &b);
            assert_eq!(eq.is_some(), tw::is_coboundary(&z, &h.sub(&h2)));
            if let Some(t) = eq {
                Ladder::identity_ends(&z, a.conflation(), b.conflation(), t).verify(&z).unwrap();
                same += 1;
            } else {
                differ += 1;
            }
        }
        assert!(same > 0 && differ > 0);
    }

    #[test]
    fn pushout_and_pullback_ladders() {
        for z in [examples::e2(Field::Q), examples::e3(Field::Q)] {
            let mut g = Gen::new(&z, 29, 4);
            for _ in 0..4 {
                let x = g.object();
                let y = g.object();
                let c = psi(&z, &x, &g.cocycle(&y, &x.shift(1))).unwrap();
                let x2 = g.object();
                let (l, c1) = pushout(&z, &c, &g.cocycle(&x, &x2)).unwrap();
                l.verify(&z).unwrap();
                validate_special(&z, &c1.conflation()).unwrap();
                let y2 = g.object();
                let (l, c2) = pullback(&z, &c, &g.cocycle(&y2, &y)).unwrap();
                l.verify(&z).unwrap();
                validate_special(&z, &c2.conflation()).unwrap();
            }
        }
    }

    #[test]
    fn special_exact_pair_validation_rejects_broken_pairs() {
        let z = examples::e2(Field::Q);
        let mut g = Gen::new(&z, 31, 4);
        let x = g.object();
        let y = g.object();
        let c = Canonical::split(&z, &x, &y);
        let mut bad = c.conflation();
        bad.g = bad.g.scale(&z.field().zero());
        assert!(validate_special(&z, &bad).is_err());
    }
}
