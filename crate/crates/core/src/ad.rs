//! The b-category `ad(Ẑ)`: finite-support modules given by dimension vectors and
//! morphisms `Σ M_a ⊗ a` with one scalar matrix per hat-basis tag.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::hat::{self, HatBasis, HatIdem};
use crate::matrix::Matrix;
use crate::scalar::Scalar;
use crate::section::SectionAlgebra;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SModule {
    dims: BTreeMap<HatIdem, usize>,
}

impl SModule {
    pub fn new(dims: impl IntoIterator<Item = (HatIdem, usize)>) -> SModule {
        let mut m = BTreeMap::new();
        for (u, d) in dims {
            if d > 0 {
                *m.entry(u).or_insert(0) += d;
            }
        }
        SModule { dims: m }
    }

    pub fn zero() -> SModule {
        SModule::default()
    }

    pub fn dim(&self, u: HatIdem) -> usize {
        self.dims.get(&u).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (HatIdem, usize)> + '_ {
        self.dims.iter().map(|(u, d)| (*u, *d))
    }

    pub fn total(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// `X[k]`: the fiber at `(s+k, i)` is the fiber of `X` at `(s, i)`.
    pub fn shift(&self, k: i64) -> SModule {
        SModule::new(self.support().map(|(u, d)| (u.nu(k), d)))
    }

    pub fn sum(parts: &[&SModule]) -> SModule {
        SModule::new(parts.iter().flat_map(|p| p.support()))
    }

    pub fn describe(&self, z: &SectionAlgebra) -> String {
        let parts: Vec<String> = self
            .support()
            .map(|(u, d)| format!("({},{}): {}", u.shift, z.idems()[u.idem], d))
            .collect();
        format!("{{ {} }}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdMorphism {
    pub src: SModule,
    pub tgt: SModule,
    terms: BTreeMap<HatBasis, Matrix>,
}

fn shape_for(z: &SectionAlgebra, src: &SModule, tgt: &SModule, a: HatBasis) -> (usize, usize) {
    (tgt.dim(a.target(z)), src.dim(a.source(z)))
}

impl AdMorphism {
    pub fn zero(src: &SModule, tgt: &SModule) -> AdMorphism {
        AdMorphism { src: src.clone(), tgt: tgt.clone(), terms: BTreeMap::new() }
    }

    pub fn from_terms(
        z: &SectionAlgebra,
        src: &SModule,
        tgt: &SModule,
        terms: impl IntoIterator<Item = (HatBasis, Matrix)>,
    ) -> Result<AdMorphism> {
        let mut f = AdMorphism::zero(src, tgt);
        for (a, m) in terms {
            let want = shape_for(z, src, tgt, a);
            if m.shape() != want {
                return Err(Error::Shape(format!(
                    "tag {} needs a {}x{} matrix, got {}x{}",
                    a.name(z),
                    want.0,
                    want.1,
                    m.rows(),
                    m.cols()
                )));
            }
            f.add_term(a, &m);
        }
        Ok(f)
    }

    /// Accumulate `m ⊗ a`; the caller guarantees the shape.
    pub fn add_term(&mut self, a: HatBasis, m: &Matrix) {
        if m.is_zero() {
            return;
        }
        match self.terms.get_mut(&a) {
            Some(cur) => {
                cur.add_assign(m);
                if cur.is_zero() {
                    self.terms.remove(&a);
                }
            }
            None => {
                self.terms.insert(a, m.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HatBasis, &Matrix)> {
        self.terms.iter()
    }

    pub fn term(&self, a: &HatBasis) -> Option<&Matrix> {
        self.terms.get(a)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_ends(&self, o: &AdMorphism) -> Result<()> {
        if self.src != o.src || self.tgt != o.tgt {
            return Err(Error::Shape("morphisms have different ends".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &AdMorphism) -> AdMorphism {
        self.same_ends(o).expect("sum of morphisms with equal ends");
        let mut out = self.clone();
        for (a, m) in &o.terms {
            out.add_term(*a, m);
        }
        out
    }

    pub fn sub(&self, o: &AdMorphism) -> AdMorphism {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Scalar) -> AdMorphism {
        let mut out = AdMorphism::zero(&self.src, &self.tgt);
        if c.is_zero() {
            return out;
        }
        for (a, m) in &self.terms {
            out.terms.insert(*a, m.scale(c));
        }
        out
    }

    pub fn neg(&self) -> AdMorphism {
        let mut out = self.clone();
        for m in out.terms.values_mut() {
            *m = m.neg();
        }
        out
    }

    /// The common degree of all tags; `None` for zero or mixed-degree morphisms.
    pub fn degree(&self, z: &SectionAlgebra) -> Option<i64> {
        let mut it = self.terms.keys().map(|a| a.degree(z));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous_of(&self, z: &SectionAlgebra, d: i64) -> bool {
        self.terms.keys().all(|a| a.degree(z) == d)
    }

    /// Every tag has a strict unit as its base element.
    pub fn is_strict(&self, z: &SectionAlgebra) -> bool {
        self.terms.keys().all(|a| z.basis()[a.b].is_unit)
    }

    /// Of the form `Σ f_u ⊗ 𝔢_u`.
    pub fn is_special(&self, z: &SectionAlgebra) -> bool {
        self.terms.keys().all(|a| z.basis()[a.b].is_unit && a.s == a.t)
    }

    /// The fiber maps `f_u` of a special morphism (zero matrices where absent).
    pub fn special_parts(&self, z: &SectionAlgebra) -> Result<BTreeMap<HatIdem, Matrix>> {
        if !self.is_special(z) {
            return Err(Error::Invalid("morphism is not special".into()));
        }
        let field = z.field();
        let mut out = BTreeMap::new();
        let mut idems: Vec<HatIdem> = self.src.support().map(|(u, _)| u).collect();
        idems.extend(self.tgt.support().map(|(u, _)| u));
        idems.sort();
        idems.dedup();
        for u in idems {
            let m = self
                .terms
                .get(&hat::unit(z, u))
                .cloned()
                .unwrap_or_else(|| Matrix::zeros(field, self.tgt.dim(u), self.src.dim(u)));
            out.insert(u, m);
        }
        Ok(out)
    }

    /// `f[k]`: same matrices, every tag shifted by `k`.
    pub fn shift(&self, k: i64) -> AdMorphism {
        AdMorphism {
            src: self.src.shift(k),
            tgt: self.tgt.shift(k),
            terms: self.terms.iter().map(|(a, m)| (a.shift(k), m.clone())).collect(),
        }
    }

    /// Rebuild with other end modules of identical fibers on the tags used.
    pub fn with_ends(&self, src: &SModule, tgt: &SModule) -> AdMorphism {
        AdMorphism { src: src.clone(), tgt: tgt.clone(), terms: self.terms.clone() }
    }

    pub fn describe(&self, z: &SectionAlgebra) -> String {
        let mut s = String::from("[");
        for (i, (a, m)) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, " ({}, {})", a.name(z), matrix_literal(m));
        }
        s.push_str(" ]");
        s
    }
}

pub fn matrix_literal(m: &Matrix) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| {
            let r: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
            format!("[{}]", r.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// `b_n^ad(f_n ⊗ … ⊗ f_1)` for a written-order chain `[f_n, …, f_1]`.
pub fn ad_bn(z: &SectionAlgebra, chain: &[&AdMorphism]) -> Result<AdMorphism> {
    if chain.is_empty() {
        return Err(Error::Invalid("empty chain".into()));
    }
    for w in chain.windows(2) {
        if w[0].src != w[1].tgt {
            return Err(Error::Shape("consecutive morphisms do not compose".into()));
        }
    }
    let n = chain.len();
    let src = &chain[n - 1].src;
    let tgt = &chain[0].tgt;
    let mut out = AdMorphism::zero(src, tgt);
    if n > z.max_arity() {
        return Ok(out);
    }
    let indexed: Vec<BTreeMap<HatIdem, Vec<(HatBasis, &Matrix)>>> = chain
        .iter()
        .map(|f| {
            let mut m: BTreeMap<HatIdem, Vec<(HatBasis, &Matrix)>> = BTreeMap::new();
            for (a, mat) in f.terms() {
                m.entry(a.target(z)).or_default().push((*a, mat));
            }
            m
        })
        .collect();
    let mut tags = Vec::with_capacity(n);
    let mut base = Vec::with_capacity(n);
    rec(z, chain, &indexed, &mut tags, &mut base, None, &mut out);
    Ok(out)
}

fn rec(
    z: &SectionAlgebra,
    chain: &[&AdMorphism],
    indexed: &[BTreeMap<HatIdem, Vec<(HatBasis, &Matrix)>>],
    tags: &mut Vec<HatBasis>,
    base: &mut Vec<usize>,
    prod: Option<&Matrix>,
    out: &mut AdMorphism,
) {
    let pos = tags.len();
    if pos == chain.len() {
        let Some((sign, val, s0, sn)) = hat::hat_bn_raw(z, tags, base) else { return };
        let prod = prod.expect("nonempty chain");
        for (b, c) in val {
            out.add_term(HatBasis::new(*b, s0, sn), &prod.scale(&(&sign * c)));
        }
        return;
    }
    let cands: Box<dyn Iterator<Item = (HatBasis, &Matrix)>> = match tags.last() {
        None => Box::new(chain[0].terms().map(|(a, m)| (*a, m))),
        Some(prev) => match indexed[pos].get(&prev.source(z)) {
            None => return,
            Some(v) => Box::new(v.iter().map(|(a, m)| (*a, *m))),
        },
    };
    for (a, m) in cands {
        base.push(a.b);
        if z.has_prefix(base) {
            tags.push(a);
            let next = match prod {
                None => m.clone(),
                Some(p) => p.mul(m),
            };
            if !next.is_zero() {
                rec(z, chain, indexed, tags, base, Some(&next), out);
            }
            tags.pop();
        }
        base.pop();
    }
}

/// `g ∘ f := b_2^ad(g ⊗ f)`
pub fn circ(z: &SectionAlgebra, g: &AdMorphism, f: &AdMorphism) -> AdMorphism {
    ad_bn(z, &[g, f]).expect("composable pair")
}

/// `𝕀_X = Σ_u id ⊗ 𝔢_u`
pub fn identity(z: &SectionAlgebra, x: &SModule) -> AdMorphism {
    let f = z.field();
    let mut out = AdMorphism::zero(x, x);
    for (u, d) in x.support() {
        out.add_term(hat::unit(z, u), &Matrix::identity(f, d));
    }
    out
}

/// `L(f) = Σ_u f_u ⊗ 𝔢_u`
pub fn special(
    z: &SectionAlgebra,
    src: &SModule,
    tgt: &SModule,
    parts: &BTreeMap<HatIdem, Matrix>,
) -> Result<AdMorphism> {
    let terms = parts.iter().map(|(u, m)| (hat::unit(z, *u), m.clone()));
    AdMorphism::from_terms(z, src, tgt, terms)
}

/// Two-sided inverse of a locally invertible special morphism.
pub fn special_inverse(z: &SectionAlgebra, h: &AdMorphism) -> Result<AdMorphism> {
    let parts = h.special_parts(z)?;
    let mut inv = BTreeMap::new();
    for (u, m) in parts {
        inv.insert(u, m.inverse().map_err(|_| Error::NotInvertible(format!("fiber at shift {} idempotent {}", u.shift, u.idem)))?);
    }
    special(z, &h.tgt, &h.src, &inv)
}

/// `σ_X: X → X[1]`, degree -2.
pub fn sigma(z: &SectionAlgebra, x: &SModule) -> AdMorphism {
    let f = z.field();
    let mut out = AdMorphism::zero(x, &x.shift(1));
    for (u, d) in x.support() {
        let (a, c) = hat::sigma_unit(z, u);
        out.add_term(a, &Matrix::identity(f, d).scale(&c));
    }
    out
}

/// `τ_X: X[1] → X`, degree 0.
pub fn tau(z: &SectionAlgebra, x: &SModule) -> AdMorphism {
    let f = z.field();
    let mut out = AdMorphism::zero(&x.shift(1), x);
    for (u, d) in x.support() {
        let (a, c) = hat::tau_unit(z, u);
        out.add_term(a, &Matrix::identity(f, d).scale(&c));
    }
    out
}

/// A direct sum decomposition `E = X_0 ⊕ … ⊕ X_{k-1}`; within each fiber the
/// coordinates of summand `i` precede those of summand `i+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSum {
    pub total: SModule,
    pub parts: Vec<SModule>,
    offsets: Vec<BTreeMap<HatIdem, usize>>,
}

impl DirectSum {
    pub fn new(parts: &[&SModule]) -> DirectSum {
        let total = SModule::sum(parts);
        let mut run: BTreeMap<HatIdem, usize> = BTreeMap::new();
        let mut offsets = Vec::with_capacity(parts.len());
        for p in parts {
            let mut off = BTreeMap::new();
            for (u, _) in total.support() {
                off.insert(u, run.get(&u).copied().unwrap_or(0));
            }
            for (u, d) in p.support() {
                *run.entry(u).or_insert(0) += d;
            }
            offsets.push(off);
        }
        DirectSum { total, parts: parts.iter().map(|p| (*p).clone()).collect(), offsets }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn offset(&self, i: usize, u: HatIdem) -> usize {
        self.offsets[i].get(&u).copied().unwrap_or(0)
    }

    /// Canonical injection `s_i: X_i → E` (special).
    pub fn inj(&self, z: &SectionAlgebra, i: usize) -> AdMorphism {
        let f = z.field();
        let mut out = AdMorphism::zero(&self.parts[i], &self.total);
        for (u, d) in self.parts[i].support() {
            let mut m = Matrix::zeros(f, self.total.dim(u), d);
            m.put_block(self.offset(i, u), 0, &Matrix::identity(f, d));
            out.add_term(hat::unit(z, u), &m);
        }
        out
    }

    /// Canonical projection `p_i: E → X_i` (special).
    pub fn proj(&self, z: &SectionAlgebra, i: usize) -> AdMorphism {
        let f = z.field();
        let mut out = AdMorphism::zero(&self.total, &self.parts[i]);
        for (u, d) in self.parts[i].support() {
            let mut m = Matrix::zeros(f, d, self.total.dim(u));
            m.put_block(0, self.offset(i, u), &Matrix::identity(f, d));
            out.add_term(hat::unit(z, u), &m);
        }
        out
    }
}

/// Plain block `(j, i)` of `f: src.total → tgt.total`.
pub fn block(z: &SectionAlgebra, f: &AdMorphism, tgt: &DirectSum, src: &DirectSum, j: usize, i: usize) -> AdMorphism {
    assert_eq!(f.src, src.total, "source decomposition");
    assert_eq!(f.tgt, tgt.total, "target decomposition");
    let (x, y) = (&src.parts[i], &tgt.parts[j]);
    let mut out = AdMorphism::zero(x, y);
    for (a, m) in f.terms() {
        let (v, u) = (a.target(z), a.source(z));
        let (r, c) = (y.dim(v), x.dim(u));
        if r == 0 || c == 0 {
            continue;
        }
        out.add_term(*a, &m.block(tgt.offset(j, v), r, src.offset(i, u), c));
    }
    out
}

/// Assemble a morphism `src.total → tgt.total` from blocks `blocks[j][i]: X_i → Y_j`.
pub fn assemble(
    z: &SectionAlgebra,
    tgt: &DirectSum,
    src: &DirectSum,
    blocks: &[Vec<Option<&AdMorphism>>],
) -> AdMorphism {
    let field = z.field();
    let mut out = AdMorphism::zero(&src.total, &tgt.total);
    for (j, row) in blocks.iter().enumerate() {
        for (i, b) in row.iter().enumerate() {
            let Some(b) = b else { continue };
            assert_eq!(b.src, src.parts[i], "block ({j},{i}) source");
            assert_eq!(b.tgt, tgt.parts[j], "block ({j},{i}) target");
            for (a, m) in b.terms() {
                let (v, u) = (a.target(z), a.source(z));
                let mut big = Matrix::zeros(field, tgt.total.dim(v), src.total.dim(u));
                big.put_block(tgt.offset(j, v), src.offset(i, u), m);
                out.add_term(*a, &big);
            }
        }
    }
    out
}

/// The `(j, i)` component via `(-1)^{|f|+1} p_j ∘ f ∘ s_i`, for homogeneous `f`.
pub fn matrix_component(
    z: &SectionAlgebra,
    f: &AdMorphism,
    tgt: &DirectSum,
    src: &DirectSum,
    j: usize,
    i: usize,
) -> Result<AdMorphism> {
    if f.is_zero() {
        return Ok(AdMorphism::zero(&src.parts[i], &tgt.parts[j]));
    }
    let d = f.degree(z).ok_or_else(|| Error::Invalid("component of a non-homogeneous morphism".into()))?;
    let inner = circ(z, f, &src.inj(z, i));
    let outer = circ(z, &tgt.proj(z, j), &inner);
    Ok(outer.scale(&z.field().sign(d + 1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::scalar::Field;

    fn m1(z: &SectionAlgebra, v: i64) -> Matrix {
        Matrix::from_ints(z.field(), &[&[v]])
    }

    #[test]
    fn identity_laws() {
        let z = examples::e3(Field::Q);
        let x = SModule::new([(HatIdem::new(0, 0), 1), (HatIdem::new(1, 0), 2)]);
        let a = z.basis_index("a").unwrap();
        let f = AdMorphism::from_terms(
            &z,
            &x,
            &x,
            [(HatBasis::new(a, 1, 0), Matrix::from_ints(z.field(), &[&[1], &[2]]))],
        )
        .unwrap();
        let d = f.degree(&z).unwrap();
        let id = identity(&z, &x);
        assert_eq!(circ(&z, &id, &f), f);
        assert_eq!(circ(&z, &f, &id), f.scale(&z.field().sign(d + 1)));
        assert_eq!(circ(&z, &id, &id), id);
        assert!(identity(&z, &SModule::zero()).is_zero());
        assert_eq!(identity(&z, &x.shift(1)), id.shift(1));
    }

    #[test]
    fn strict_factor_kills_b3() {
        let z = examples::e3(Field::Q);
        let x = SModule::new([(HatIdem::new(0, 0), 1)]);
        let a = z.basis_index("a").unwrap();
        let f = AdMorphism::from_terms(&z, &x, &x, [(HatBasis::new(a, 0, 0), m1(&z, 1))]).unwrap();
        let id = identity(&z, &x);
        assert!(!ad_bn(&z, &[&f, &f, &f]).unwrap().is_zero());
        assert!(ad_bn(&z, &[&f, &id, &f]).unwrap().is_zero());
    }

    #[test]
    fn sigma_tau_inverse() {
        let z = examples::e2(Field::Q);
        let x = SModule::new([(HatIdem::new(-1, 0), 2), (HatIdem::new(2, 1), 1)]);
        let s = sigma(&z, &x);
        let t = tau(&z, &x);
        assert_eq!(circ(&z, &t, &s), identity(&z, &x));
        assert_eq!(circ(&z, &s, &t), identity(&z, &x.shift(1)));
        assert_eq!(s.degree(&z), Some(-2));
        assert_eq!(t.degree(&z), Some(0));
        assert!(s.is_strict(&z) && t.is_strict(&z));
        assert_eq!(s.shift(-1), sigma(&z, &x.shift(-1)).neg());
        assert_eq!(t.shift(-1), tau(&z, &x.shift(-1)).neg());
    }

    #[test]
    fn blocks_and_components() {
        let z = examples::e2(Field::Q);
        let f = z.field();
        let x = SModule::new([(HatIdem::new(0, 0), 1)]);
        let y = SModule::new([(HatIdem::new(0, 1), 2)]);
        let ds = DirectSum::new(&[&x, &y]);
        let id = identity(&z, &ds.total);
        assert_eq!(block(&z, &id, &ds, &ds, 0, 0), identity(&z, &x));
        assert_eq!(block(&z, &id, &ds, &ds, 1, 1), identity(&z, &y));
        assert!(block(&z, &id, &ds, &ds, 0, 1).is_zero());
        let xa = z.basis_index("x").unwrap();
        let g = AdMorphism::from_terms(&z, &x, &y, [(HatBasis::new(xa, 0, 0), Matrix::from_ints(f, &[&[1], &[3]]))]).unwrap();
        let big = assemble(&z, &ds, &ds, &[vec![None, None], vec![Some(&g), None]]);
        assert_eq!(block(&z, &big, &ds, &ds, 1, 0), g);
        assert_eq!(matrix_component(&z, &big, &ds, &ds, 1, 0).unwrap(), g);
        let p = ds.proj(&z, 1);
        let s = ds.inj(&z, 1);
        assert_eq!(circ(&z, &p, &s), identity(&z, &y));
    }

    #[test]
    fn special_inverse_and_functoriality() {
        let z = examples::e1(Field::Q);
        let f = z.field();
        let x = SModule::new([(HatIdem::new(0, 0), 2)]);
        let mut parts = BTreeMap::new();
        parts.insert(HatIdem::new(0, 0), Matrix::from_ints(f, &[&[1, 1], &[0, 1]]));
        let h = special(&z, &x, &x, &parts).unwrap();
        let hi = special_inverse(&z, &h).unwrap();
        assert_eq!(circ(&z, &h, &hi), identity(&z, &x));
        assert_eq!(circ(&z, &hi, &h), identity(&z, &x));
        let mut p2 = BTreeMap::new();
        p2.insert(HatIdem::new(0, 0), Matrix::from_ints(f, &[&[2, 0], &[1, 1]]));
        let g = special(&z, &x, &x, &p2).unwrap();
        let mut prod = BTreeMap::new();
        prod.insert(HatIdem::new(0, 0), p2[&HatIdem::new(0, 0)].mul(&parts[&HatIdem::new(0, 0)]));
        assert_eq!(special(&z, &x, &x, &prod).unwrap(), circ(&z, &g, &h));
    }
}
