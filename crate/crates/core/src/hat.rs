//! The (b,ν)-extension `Ẑ` of a section algebra.
//!
//! A basis symbol `(b, s, t)` stands for `ν^s b ν^{-t}`: it goes from `(t, u(b))` to
//! `(s, v(b))` and has degree `|b| + t - s`. Chains are in written order; the element
//! at position `i` lies in the window `(s_i, s_{i+1})` of the profile.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::section::{Elem, SectionAlgebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HatIdem {
    pub shift: i64,
    pub idem: usize,
}

impl HatIdem {
    pub fn new(shift: i64, idem: usize) -> HatIdem {
        HatIdem { shift, idem }
    }

    pub fn nu(self, k: i64) -> HatIdem {
        HatIdem { shift: self.shift + k, idem: self.idem }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HatBasis {
    pub b: usize,
    pub s: i64,
    pub t: i64,
}

pub type HatElem = BTreeMap<HatBasis, Scalar>;

impl HatBasis {
    pub fn new(b: usize, s: i64, t: i64) -> HatBasis {
        HatBasis { b, s, t }
    }

    pub fn source(&self, z: &SectionAlgebra) -> HatIdem {
        HatIdem::new(self.t, z.basis()[self.b].source)
    }

    pub fn target(&self, z: &SectionAlgebra) -> HatIdem {
        HatIdem::new(self.s, z.basis()[self.b].target)
    }

    pub fn degree(&self, z: &SectionAlgebra) -> i64 {
        z.degree(self.b) + self.t - self.s
    }

    /// `x[k]`
    pub fn shift(self, k: i64) -> HatBasis {
        HatBasis { b: self.b, s: self.s + k, t: self.t + k }
    }

    /// `ν x`
    pub fn nu_left(self) -> HatBasis {
        HatBasis { s: self.s + 1, ..self }
    }

    /// `ν^{-1} x`
    pub fn nu_inv_left(self) -> HatBasis {
        HatBasis { s: self.s - 1, ..self }
    }

    /// `x ν^{-1}`
    pub fn nu_right_inv(self) -> HatBasis {
        HatBasis { t: self.t + 1, ..self }
    }

    /// `x ν`
    pub fn nu_right(self) -> HatBasis {
        HatBasis { t: self.t - 1, ..self }
    }

    pub fn name(&self, z: &SectionAlgebra) -> String {
        format!("nu^{} * {} * nu^-{}", self.s, z.basis()[self.b].name, self.t)
    }
}

pub fn hat_add_scaled(acc: &mut HatElem, c: &Scalar, x: &HatElem) {
    for (k, v) in x {
        let t = c * v;
        match acc.get_mut(k) {
            Some(cur) => {
                *cur = &*cur + &t;
                if cur.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                if !t.is_zero() {
                    acc.insert(*k, t);
                }
            }
        }
    }
}

pub fn basis_elem(x: HatBasis, c: Scalar) -> HatElem {
    if c.is_zero() {
        HatElem::new()
    } else {
        HatElem::from([(x, c)])
    }
}

/// Apply a basis-level map to every term.
pub fn map_terms(e: &HatElem, f: impl Fn(HatBasis) -> HatBasis) -> HatElem {
    e.iter().map(|(k, v)| (f(*k), v.clone())).collect()
}

pub fn scale(e: &HatElem, c: &Scalar) -> HatElem {
    let mut out = HatElem::new();
    hat_add_scaled(&mut out, c, e);
    out
}

/// Window `(s, t)` shared by every term, or `None` when mixed or empty.
pub fn window(e: &HatElem) -> Option<(i64, i64)> {
    let mut it = e.keys();
    let first = it.next()?;
    it.all(|k| k.s == first.s && k.t == first.t).then_some((first.s, first.t))
}

/// `ρ_{s,t}`: strips the window.
pub fn rho(e: &HatElem) -> Result<Elem> {
    if e.is_empty() {
        return Ok(Elem::new());
    }
    if window(e).is_none() {
        return Err(Error::Invalid("rho needs a window-homogeneous element".into()));
    }
    Ok(e.iter().map(|(k, v)| (k.b, v.clone())).collect())
}

/// `ρ_{s,t}^{-1}`
pub fn rho_inv(e: &Elem, s: i64, t: i64) -> HatElem {
    e.iter().map(|(b, v)| (HatBasis::new(*b, s, t), v.clone())).collect()
}

pub fn composable(z: &SectionAlgebra, chain: &[HatBasis]) -> bool {
    chain.windows(2).all(|w| w[0].source(z) == w[1].target(z))
}

/// Sign exponent `z = s_0 - s_n + Σ_{l<n} (s_l - s_n)|a_l|` of the evaluated form.
pub fn window_sign_exponent(z: &SectionAlgebra, chain: &[HatBasis]) -> i64 {
    let n = chain.len();
    let s0 = chain[0].s;
    let sn = chain[n - 1].t;
    let mut e = s0 - sn;
    for x in &chain[..n - 1] {
        e += (x.t - sn) * x.degree(z);
    }
    e
}

/// `b̂_n` on a composable chain, or `None` if the section table has no entry.
/// Returns the sign, the section output, and the output window.
pub fn hat_bn_raw<'a>(
    z: &'a SectionAlgebra,
    chain: &[HatBasis],
    base: &[usize],
) -> Option<(Scalar, &'a Elem, i64, i64)> {
    let out = z.lookup(base)?;
    let e = window_sign_exponent(z, chain);
    Some((z.field().sign(e), out, chain[0].s, chain[chain.len() - 1].t))
}

pub fn hat_bn(z: &SectionAlgebra, chain: &[HatBasis]) -> Result<HatElem> {
    if chain.is_empty() {
        return Err(Error::Invalid("empty chain".into()));
    }
    if !composable(z, chain) {
        return Err(Error::Incompatible("window or idempotent mismatch".into()));
    }
    let base: Vec<usize> = chain.iter().map(|x| x.b).collect();
    Ok(match hat_bn_raw(z, chain, &base) {
        None => HatElem::new(),
        Some((sign, out, s0, sn)) => scale(&rho_inv(out, s0, sn), &sign),
    })
}

/// Multilinear `b̂_n` on a chain of elements; incompatible term tuples contribute zero.
pub fn hat_bn_multi(z: &SectionAlgebra, chain: &[HatElem]) -> HatElem {
    let mut acc = HatElem::new();
    let mut idx: Vec<HatBasis> = Vec::with_capacity(chain.len());
    rec(z, chain, &mut idx, &z.field().one(), &mut acc);
    fn rec(z: &SectionAlgebra, chain: &[HatElem], idx: &mut Vec<HatBasis>, c: &Scalar, acc: &mut HatElem) {
        let d = idx.len();
        if d == chain.len() {
            let base: Vec<usize> = idx.iter().map(|x| x.b).collect();
            if let Some((sign, out, s0, sn)) = hat_bn_raw(z, idx, &base) {
                hat_add_scaled(acc, &(c * &sign), &rho_inv(out, s0, sn));
            }
            return;
        }
        for (k, v) in &chain[d] {
            if let Some(prev) = idx.last() {
                if prev.source(z) != k.target(z) {
                    continue;
                }
            }
            idx.push(*k);
            rec(z, chain, idx, &(c * v), acc);
            idx.pop();
        }
    }
    acc
}

/// `x ∘ y := b̂_2(x ⊗ y)`
pub fn circ(z: &SectionAlgebra, x: &HatElem, y: &HatElem) -> HatElem {
    hat_bn_multi(z, &[x.clone(), y.clone()])
}

/// Strict unit `𝔢_u = ν^s 𝔢_i ν^{-s}` for `u = (s, i)`.
pub fn unit(z: &SectionAlgebra, u: HatIdem) -> HatBasis {
    HatBasis::new(z.unit(u.idem), u.shift, u.shift)
}

/// `σ(𝔢_u) = (-1)^s ν 𝔢_u`, in window `(s+1, s)`, degree -2.
pub fn sigma_unit(z: &SectionAlgebra, u: HatIdem) -> (HatBasis, Scalar) {
    (unit(z, u).nu_left(), z.field().sign(u.shift))
}

/// `τ(𝔢_u) = (-1)^s 𝔢_u ν^{-1}`, in window `(s, s+1)`, degree 0.
pub fn tau_unit(z: &SectionAlgebra, u: HatIdem) -> (HatBasis, Scalar) {
    (unit(z, u).nu_right_inv(), z.field().sign(u.shift))
}

pub fn sigma_elem(z: &SectionAlgebra, u: HatIdem) -> HatElem {
    let (b, c) = sigma_unit(z, u);
    basis_elem(b, c)
}

pub fn tau_elem(z: &SectionAlgebra, u: HatIdem) -> HatElem {
    let (b, c) = tau_unit(z, u);
    basis_elem(b, c)
}

pub fn unit_elem(z: &SectionAlgebra, u: HatIdem) -> HatElem {
    basis_elem(unit(z, u), z.field().one())
}

/// `Σ_{r+s+t=n} b̂_{r+1+t}(id^r ⊗ b̂_s ⊗ id^t)` on one hat chain.
pub fn hat_stasheff_residue(z: &SectionAlgebra, chain: &[HatBasis]) -> HatElem {
    let n = chain.len();
    let one = z.field().one();
    let mut acc = HatElem::new();
    for s in 1..=n {
        for r in 0..=(n - s) {
            let inner = hat_bn(z, &chain[r..r + s]).expect("composable");
            if inner.is_empty() {
                continue;
            }
            let d: i64 = chain[..r].iter().map(|x| x.degree(z)).sum();
            let mut outer: Vec<HatElem> = Vec::with_capacity(n - s + 1);
            outer.extend(chain[..r].iter().map(|x| basis_elem(*x, one.clone())));
            outer.push(inner);
            outer.extend(chain[r + s..].iter().map(|x| basis_elem(*x, one.clone())));
            hat_add_scaled(&mut acc, &z.field().sign(d), &hat_bn_multi(z, &outer));
        }
    }
    acc
}

/// True when some Stasheff term of the base chain is nonzero; otherwise every
/// windowed lift of the chain has zero residue term by term.
pub fn base_chain_active(z: &SectionAlgebra, base: &[usize]) -> bool {
    let n = base.len();
    for s in 1..=n {
        for r in 0..=(n - s) {
            let Some(inner) = z.lookup(&base[r..r + s]) else { continue };
            for k in inner.keys() {
                let mut outer = base[..r].to_vec();
                outer.push(*k);
                outer.extend_from_slice(&base[r + s..]);
                if z.lookup(&outer).is_some() {
                    return true;
                }
            }
        }
    }
    false
}

/// Every window profile `(s_0, …, s_n)` with entries in `[-w, w]`.
pub fn profiles(n: usize, w: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..=n {
        let mut next = Vec::new();
        for p in &out {
            for s in -w..=w {
                let mut q = p.clone();
                q.push(s);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Lift a base chain to the hat chain with the given profile.
pub fn lift(base: &[usize], profile: &[i64]) -> Vec<HatBasis> {
    base.iter()
        .enumerate()
        .map(|(i, &b)| HatBasis::new(b, profile[i], profile[i + 1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::scalar::Field;

    fn one(z: &SectionAlgebra, x: HatBasis) -> HatElem {
        basis_elem(x, z.field().one())
    }

    #[test]
    fn rho_maps() {
        let z = examples::e3(Field::Q);
        let a = z.basis_index("a").unwrap();
        let x = one(&z, HatBasis::new(a, 1, 0));
        assert_eq!(rho(&x).unwrap(), Elem::from([(a, Field::Q.one())]));
        let back = rho_inv(&rho(&x).unwrap(), 1, 0);
        assert_eq!(back, x);
        assert_eq!(HatBasis::new(a, 2, 1).degree(&z), -1);
        let mut mixed = x.clone();
        mixed.insert(HatBasis::new(a, 0, 0), Field::Q.one());
        assert!(rho(&mixed).is_err());
    }

    #[test]
    fn zero_windows_agree_with_section() {
        let z = examples::e3(Field::Q);
        for n in 1..=3 {
            for base in z.chains(n) {
                let h = hat_bn(&z, &lift(&base, &vec![0; n + 1])).unwrap();
                assert_eq!(rho(&h).unwrap(), z.bn_eval(&base).unwrap());
            }
        }
    }

    /// Oracle: the sign produced by `ρ_{s_0,s_1} ⊗ … ⊗ ρ_{s_{n-1},s_n}` under the Koszul rule,
    /// accumulated pairwise as map `j` moves past element `i < j`, times `(-1)^{s_0-s_n}`.
    fn oracle_sign(z: &SectionAlgebra, chain: &[HatBasis]) -> i64 {
        let n = chain.len();
        let mut e = chain[0].s - chain[n - 1].t;
        for j in 0..n {
            let map_deg = chain[j].s - chain[j].t;
            for x in &chain[..j] {
                e += map_deg * x.degree(z);
            }
        }
        e.rem_euclid(2)
    }

    #[test]
    fn window_sign_matches_koszul_oracle() {
        let z = examples::e3(Field::Q);
        for n in 1..=3 {
            for base in z.chains(n) {
                for p in profiles(n, 2) {
                    let chain = lift(&base, &p);
                    assert_eq!(window_sign_exponent(&z, &chain).rem_euclid(2), oracle_sign(&z, &chain));
                }
            }
        }
    }

    #[test]
    fn two_factor_sign_example() {
        // a_1 in window (1,1), a_2 in window (1,0): z = 1 + |a_1|
        let z = examples::e3(Field::Q);
        let (a, c) = (z.basis_index("a").unwrap(), z.basis_index("c").unwrap());
        for b in [a, c] {
            let chain = [HatBasis::new(b, 1, 1), HatBasis::new(a, 1, 0)];
            let e = window_sign_exponent(&z, &chain);
            assert_eq!(e.rem_euclid(2), (1 + chain[0].degree(&z)).rem_euclid(2));
        }
    }

    #[test]
    fn sigma_tau_units() {
        let z = examples::e2(Field::Q);
        for s in -2..=2 {
            for i in 0..2 {
                let u = HatIdem::new(s, i);
                let sg = sigma_elem(&z, u);
                let ta = tau_elem(&z, u);
                assert_eq!(circ(&z, &ta, &sg), unit_elem(&z, u));
                assert_eq!(circ(&z, &sg, &ta), unit_elem(&z, u.nu(1)));
                let (sb, _) = sigma_unit(&z, u);
                assert_eq!(sb.degree(&z), -2);
                assert_eq!(tau_unit(&z, u).0.degree(&z), 0);
                // σ(𝔢_u)[-1] = -σ(𝔢_{ν^{-1}u})
                let shifted = map_terms(&sg, |x| x.shift(-1));
                assert_eq!(shifted, scale(&sigma_elem(&z, u.nu(-1)), &Field::Q.int(-1)));
            }
        }
    }

    #[test]
    fn shift_round_trip() {
        let x = HatBasis::new(0, 2, -1);
        assert_eq!(x.shift(1).shift(-1), x);
        assert_eq!(x.nu_left().nu_right_inv(), x.shift(1));
    }

    #[test]
    fn b1_window_sign() {
        // A one-idempotent algebra with b_1(a) = y: b̂_1(νa) = -νy.
        use crate::section::BasisElem;
        let basis = vec![
            BasisElem { name: "e".into(), source: 0, target: 0, degree: -1, is_unit: true },
            BasisElem { name: "a".into(), source: 0, target: 0, degree: 0, is_unit: false },
            BasisElem { name: "y".into(), source: 0, target: 0, degree: 1, is_unit: false },
        ];
        let f = Field::Q;
        let z = SectionAlgebra::new(f, vec!["1".into()], basis, vec![(vec![1], Elem::from([(2, f.one())]))]).unwrap();
        let out = hat_bn(&z, &[HatBasis::new(1, 1, 0)]).unwrap();
        assert_eq!(out, basis_elem(HatBasis::new(2, 1, 0), f.int(-1)));
    }
}
