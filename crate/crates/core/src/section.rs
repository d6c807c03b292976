//! The section b-algebra `Z`: a finite directed basis with sparse structure constants.
//!
//! Chains are stored in written order: `b_n(a_n ⊗ … ⊗ a_1)` is the slice `[a_n, …, a_1]`,
//! so element `k` is composable with element `k+1` when `source(chain[k]) == target(chain[k+1])`.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Linear combination of basis indices.
pub type Elem = BTreeMap<usize, Scalar>;

pub fn elem_add_scaled(acc: &mut Elem, c: &Scalar, x: &Elem) {
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

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElem {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub degree: i64,
    pub is_unit: bool,
}

#[derive(Clone, Debug)]
pub struct SectionAlgebra {
    field: Field,
    idems: Vec<String>,
    basis: Vec<BasisElem>,
    units: Vec<usize>,
    explicit: Vec<(Vec<usize>, Elem)>,
    table: HashMap<Vec<usize>, Elem>,
    prefixes: HashSet<Vec<usize>>,
    max_arity: usize,
}

/// One failing relation found by a check.
#[derive(Clone, Debug, PartialEq)]
pub struct Failure {
    pub chain: Vec<usize>,
    pub message: String,
}

impl SectionAlgebra {
    /// Build and validate an algebra. Unit rules missing from `entries` are generated;
    /// explicit entries (including ones with unit arguments) are kept as given.
    pub fn new(
        field: Field,
        idems: Vec<String>,
        basis: Vec<BasisElem>,
        entries: Vec<(Vec<usize>, Elem)>,
    ) -> Result<SectionAlgebra> {
        for (i, a) in idems.iter().enumerate() {
            if idems[..i].contains(a) {
                return Err(Error::Algebra(format!("duplicate idempotent '{a}'")));
            }
        }
        let mut units = vec![usize::MAX; idems.len()];
        for (k, b) in basis.iter().enumerate() {
            if basis[..k].iter().any(|c| c.name == b.name) {
                return Err(Error::Algebra(format!("duplicate basis element '{}'", b.name)));
            }
            if b.source >= idems.len() || b.target >= idems.len() {
                return Err(Error::Algebra(format!("'{}' has an unknown idempotent", b.name)));
            }
            if b.is_unit {
                if b.degree != -1 {
                    return Err(Error::Algebra(format!(
                        "unit '{}' has degree {} (units have degree -1)",
                        b.name, b.degree
                    )));
                }
                if b.source != b.target {
                    return Err(Error::Algebra(format!("unit '{}' is not a loop", b.name)));
                }
                if units[b.source] != usize::MAX {
                    return Err(Error::Algebra(format!(
                        "two units at idempotent '{}'",
                        idems[b.source]
                    )));
                }
                units[b.source] = k;
            }
        }
        if let Some(i) = units.iter().position(|&u| u == usize::MAX) {
            return Err(Error::Algebra(format!("idempotent '{}' has no unit", idems[i])));
        }
        let mut alg = SectionAlgebra {
            field,
            idems,
            basis,
            units,
            explicit: Vec::new(),
            table: HashMap::new(),
            prefixes: HashSet::new(),
            max_arity: 0,
        };
        for (chain, out) in entries {
            alg.check_entry(&chain, &out)?;
            let out: Elem = out.into_iter().filter(|(_, v)| !v.is_zero()).collect();
            if alg.table.insert(chain.clone(), out.clone()).is_some() {
                return Err(Error::Algebra(format!("duplicate entry for {}", alg.chain_name(&chain))));
            }
            alg.explicit.push((chain, out));
        }
        for (chain, out) in alg.unit_rules() {
            alg.table.entry(chain).or_insert(out);
        }
        alg.table.retain(|_, v| !v.is_empty());
        for k in alg.table.keys() {
            for l in 1..=k.len() {
                alg.prefixes.insert(k[..l].to_vec());
            }
        }
        alg.max_arity = alg.table.keys().map(Vec::len).max().unwrap_or(0).max(2);
        Ok(alg)
    }

    fn check_entry(&self, chain: &[usize], out: &Elem) -> Result<()> {
        if chain.is_empty() {
            return Err(Error::Algebra("empty chain".into()));
        }
        for &k in chain.iter().chain(out.keys()) {
            if k >= self.basis.len() {
                return Err(Error::UnknownBasis(format!("#{k}")));
            }
        }
        self.check_composable(chain)?;
        let deg = 1 + chain.iter().map(|&k| self.basis[k].degree).sum::<i64>();
        let (s, t) = (
            self.basis[*chain.last().unwrap()].source,
            self.basis[chain[0]].target,
        );
        for (&k, c) in out {
            if c.is_zero() {
                continue;
            }
            let b = &self.basis[k];
            if b.degree != deg {
                return Err(Error::Algebra(format!(
                    "degree law fails for {}: output '{}' has degree {} (expected {deg})",
                    self.chain_name(chain),
                    b.name,
                    b.degree
                )));
            }
            if b.source != s || b.target != t {
                return Err(Error::Algebra(format!(
                    "output '{}' of {} is not directed from {} to {}",
                    b.name,
                    self.chain_name(chain),
                    self.idems[s],
                    self.idems[t]
                )));
            }
        }
        Ok(())
    }

    fn unit_rules(&self) -> Vec<(Vec<usize>, Elem)> {
        let mut out = Vec::new();
        for (k, a) in self.basis.iter().enumerate() {
            let left = self.units[a.target];
            out.push((vec![left, k], Elem::from([(k, self.field.one())])));
            let right = self.units[a.source];
            out.push((vec![k, right], Elem::from([(k, self.field.sign(a.degree + 1))])));
        }
        out
    }

    pub fn check_composable(&self, chain: &[usize]) -> Result<()> {
        for w in chain.windows(2) {
            if self.basis[w[0]].source != self.basis[w[1]].target {
                return Err(Error::Incompatible(format!(
                    "'{}' cannot follow '{}'",
                    self.basis[w[0]].name, self.basis[w[1]].name
                )));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn idems(&self) -> &[String] {
        &self.idems
    }

    pub fn basis(&self) -> &[BasisElem] {
        &self.basis
    }

    pub fn unit(&self, idem: usize) -> usize {
        self.units[idem]
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    pub fn explicit_entries(&self) -> &[(Vec<usize>, Elem)] {
        &self.explicit
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn idem_index(&self, name: &str) -> Option<usize> {
        self.idems.iter().position(|b| b == name)
    }

    pub fn degree(&self, k: usize) -> i64 {
        self.basis[k].degree
    }

    pub fn chain_name(&self, chain: &[usize]) -> String {
        let names: Vec<&str> = chain.iter().map(|&k| self.basis[k].name.as_str()).collect();
        format!("[{}]", names.join(","))
    }

    /// Structure constant lookup on a basis chain (written order); `None` means zero.
    pub fn lookup(&self, chain: &[usize]) -> Option<&Elem> {
        self.table.get(chain)
    }

    /// Whether some nonzero table entry starts with this chain.
    pub fn has_prefix(&self, p: &[usize]) -> bool {
        p.is_empty() || self.prefixes.contains(p)
    }

    /// `b_n` on a basis chain, with errors for unknown ids or incompatible chains.
    pub fn bn_eval(&self, chain: &[usize]) -> Result<Elem> {
        if let Some(&k) = chain.iter().find(|&&k| k >= self.basis.len()) {
            return Err(Error::UnknownBasis(format!("#{k}")));
        }
        self.check_composable(chain)?;
        Ok(self.lookup(chain).cloned().unwrap_or_default())
    }

    /// Multilinear `b_n` on a chain of linear combinations.
    pub fn bn_multi(&self, chain: &[Elem]) -> Elem {
        let mut acc = Elem::new();
        let mut idx = Vec::with_capacity(chain.len());
        self.bn_multi_rec(chain, &mut idx, &self.field.one(), &mut acc);
        acc
    }

    fn bn_multi_rec(&self, chain: &[Elem], idx: &mut Vec<usize>, coeff: &Scalar, acc: &mut Elem) {
        let d = idx.len();
        if d == chain.len() {
            if let Some(out) = self.lookup(idx) {
                elem_add_scaled(acc, coeff, out);
            }
            return;
        }
        for (k, c) in &chain[d] {
            if let Some(&prev) = idx.last() {
                if self.basis[prev].source != self.basis[*k].target {
                    continue;
                }
            }
            idx.push(*k);
            self.bn_multi_rec(chain, idx, &(coeff * c), acc);
            idx.pop();
        }
    }

    /// `id^{⊗r} ⊗ b_s ⊗ id^{⊗t}` on a basis chain; returns the sign and the inner result.
    pub fn koszul_insert(&self, r: usize, s: usize, chain: &[usize]) -> Result<(Scalar, Elem)> {
        if s == 0 || r + s > chain.len() {
            return Err(Error::Invalid(format!("bad insertion r={r} s={s} n={}", chain.len())));
        }
        let inner = self.bn_eval(&chain[r..r + s])?;
        let d: i64 = chain[..r].iter().map(|&k| self.degree(k)).sum();
        Ok((self.field.sign(d), inner))
    }

    /// All composable basis chains of length `n`, in lexicographic order.
    pub fn chains(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        self.chains_rec(n, &mut cur, &mut out);
        out
    }

    fn chains_rec(&self, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..self.basis.len() {
            if let Some(&prev) = cur.last() {
                if self.basis[prev].source != self.basis[k].target {
                    continue;
                }
            }
            cur.push(k);
            self.chains_rec(n, cur, out);
            cur.pop();
        }
    }

    /// The Stasheff sum `Σ b_{r+1+t}(id^r ⊗ b_s ⊗ id^t)` on one basis chain.
    pub fn stasheff_residue(&self, chain: &[usize]) -> Elem {
        let n = chain.len();
        let mut acc = Elem::new();
        for s in 1..=n {
            for r in 0..=(n - s) {
                let Some(inner) = self.lookup(&chain[r..r + s]) else { continue };
                let d: i64 = chain[..r].iter().map(|&k| self.degree(k)).sum();
                let mut outer: Vec<Elem> = Vec::with_capacity(n - s + 1);
                for &k in &chain[..r] {
                    outer.push(Elem::from([(k, self.field.one())]));
                }
                outer.push(inner.clone());
                for &k in &chain[r + s..] {
                    outer.push(Elem::from([(k, self.field.one())]));
                }
                let val = self.bn_multi(&outer);
                elem_add_scaled(&mut acc, &self.field.sign(d), &val);
            }
        }
        acc
    }

    pub fn check_stasheff(&self, n: usize) -> Vec<Failure> {
        self.chains(n)
            .into_iter()
            .filter_map(|c| {
                let res = self.stasheff_residue(&c);
                (!res.is_empty()).then(|| Failure {
                    message: format!("residue {}", self.elem_string(&res)),
                    chain: c,
                })
            })
            .collect()
    }

    /// Unit conditions: degree/loop/uniqueness (enforced at construction), the arity-2
    /// rules for every basis element, and vanishing of every other entry with a unit argument.
    pub fn check_units(&self) -> Vec<Failure> {
        let mut out = Vec::new();
        for (chain, expected) in self.unit_rules() {
            let got = self.lookup(&chain).cloned().unwrap_or_default();
            if got != expected {
                out.push(Failure {
                    message: format!(
                        "unit rule: expected {}, table has {}",
                        self.elem_string(&expected),
                        self.elem_string(&got)
                    ),
                    chain,
                });
            }
        }
        let mut keys: Vec<&Vec<usize>> = self.table.keys().collect();
        keys.sort();
        for chain in keys {
            if chain.len() != 2 && chain.iter().any(|&k| self.basis[k].is_unit) {
                out.push(Failure {
                    chain: chain.clone(),
                    message: "unit argument at arity != 2 has a nonzero value".into(),
                });
            }
        }
        out
    }

    pub fn elem_string(&self, e: &Elem) -> String {
        if e.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = e
            .iter()
            .map(|(k, c)| format!("{}*{}", c, self.basis[*k].name))
            .collect();
        parts.join(" + ")
    }

    /// Same algebra with one explicit or generated entry replaced.
    pub fn with_entry(&self, chain: Vec<usize>, out: Elem) -> Result<SectionAlgebra> {
        let mut entries: Vec<(Vec<usize>, Elem)> = self
            .explicit
            .iter()
            .filter(|(c, _)| *c != chain)
            .cloned()
            .collect();
        entries.push((chain, out));
        SectionAlgebra::new(self.field, self.idems.clone(), self.basis.clone(), entries)
    }

    /// Sorted list of every nonzero table entry, generated unit rules included.
    pub fn all_entries(&self) -> Vec<(Vec<usize>, Elem)> {
        let mut v: Vec<(Vec<usize>, Elem)> =
            self.table.iter().map(|(k, e)| (k.clone(), e.clone())).collect();
        v.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    #[test]
    fn unit_rules_on_e3() {
        let z = examples::e3(Field::Q);
        let e = z.basis_index("e").unwrap();
        let a = z.basis_index("a").unwrap();
        let c = z.basis_index("c").unwrap();
        assert_eq!(z.bn_eval(&[e, a]).unwrap(), Elem::from([(a, Field::Q.one())]));
        // |a| = 0 so a∘e = -a
        assert_eq!(z.bn_eval(&[a, e]).unwrap(), Elem::from([(a, Field::Q.int(-1))]));
        // |c| = 1 so c∘e = c
        assert_eq!(z.bn_eval(&[c, e]).unwrap(), Elem::from([(c, Field::Q.one())]));
        assert!(z.bn_eval(&[e, a, a]).unwrap().is_empty());
        assert_eq!(z.bn_eval(&[a, a, a]).unwrap(), Elem::from([(c, Field::Q.one())]));
        assert!(z.check_units().is_empty());
    }

    #[test]
    fn koszul_signs() {
        let z = examples::e3(Field::Q);
        let e = z.basis_index("e").unwrap();
        let a = z.basis_index("a").unwrap();
        let (s0, _) = z.koszul_insert(0, 2, &[e, e, e]).unwrap();
        assert!(s0.is_one());
        let (s1, _) = z.koszul_insert(1, 2, &[a, e, e]).unwrap();
        assert!(s1.is_one());
        let (s2, _) = z.koszul_insert(1, 2, &[e, e, e]).unwrap();
        assert_eq!(s2, Field::Q.int(-1));
    }

    /// Independent oracle for the sign of `id ⊗ g` applied to `m ⊗ n`: expand
    /// `(f ⊗ g)(m ⊗ n) = (-1)^{|g||m|} f(m) ⊗ g(n)` with `|f| = 0`, `|g| = 1`.
    #[test]
    fn koszul_sign_matches_pairwise_expansion() {
        let z = examples::e3(Field::Q);
        for chain in z.chains(3) {
            for r in 0..3 {
                let (s, _) = z.koszul_insert(r, 1, &chain).unwrap();
                let mut parity = 0i64;
                for &k in &chain[..r] {
                    parity += z.degree(k); // |b_1| = 1 passes each left factor
                }
                assert_eq!(s, Field::Q.sign(parity));
            }
        }
    }

    #[test]
    fn stasheff_on_e1_unit_chain() {
        let z = examples::e1(Field::Q);
        let e = z.basis_index("e").unwrap();
        assert!(z.stasheff_residue(&[e, e, e]).is_empty());
    }

    #[test]
    fn shipped_examples_satisfy_stasheff() {
        for z in [examples::e1(Field::Q), examples::e2(Field::Q), examples::e3(Field::Q)] {
            for n in 1..=z.max_arity() + 2 {
                assert!(z.check_stasheff(n).is_empty(), "n={n}");
            }
            assert!(z.check_units().is_empty());
        }
    }

    #[test]
    fn incompatible_chain_is_rejected() {
        let z = examples::e2(Field::Q);
        let x = z.basis_index("x").unwrap();
        assert!(matches!(z.bn_eval(&[x, x]), Err(Error::Incompatible(_))));
        assert!(matches!(z.bn_eval(&[99]), Err(Error::UnknownBasis(_))));
    }

    #[test]
    fn degree_zero_unit_is_rejected() {
        let basis = vec![BasisElem { name: "e".into(), source: 0, target: 0, degree: 0, is_unit: true }];
        let r = SectionAlgebra::new(Field::Q, vec!["1".into()], basis, vec![]);
        assert!(matches!(r, Err(Error::Algebra(m)) if m.contains("degree")));
    }

    #[test]
    fn degree_law_is_enforced() {
        let z = examples::e3(Field::Q);
        let a = z.basis_index("a").unwrap();
        let r = z.with_entry(vec![a, a], Elem::from([(a, Field::Q.one())]));
        assert!(matches!(r, Err(Error::Algebra(m)) if m.contains("degree law")));
    }

    #[test]
    fn flipped_unit_rule_fails_checks() {
        let z = examples::e1(Field::Q);
        let e = z.basis_index("e").unwrap();
        let m = z.with_entry(vec![e, e], Elem::from([(e, Field::Q.int(-1))])).unwrap();
        assert!(!m.check_units().is_empty());
    }
}
