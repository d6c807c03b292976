//! Invariant suites over the shipped examples and seeded fuzz cases. Each suite is a list of
//! named checks with a case count and the failing cases; reports are deterministic.

use std::collections::BTreeMap;

use rand::Rng;

use crate::ad::{self, AdMorphism, SModule};
use crate::confl::{self, Canonical, Conflation, Ladder};
use crate::examples;
use crate::gen::Gen;
use crate::hat::{self, HatBasis, HatElem, HatIdem};
use crate::matrix::Matrix;
use crate::scalar::Field;
use crate::section::{Elem, SectionAlgebra};
use crate::tri::{self, Mutation};
use crate::tw::{self, b1, is_coboundary, is_cocycle, star, HomSpace, Obj, TwMor, TwObject};

#[derive(Clone, Debug)]
pub struct Config {
    pub seed: u64,
    /// Fuzz cases per identity and algebra.
    pub cases: usize,
    /// Bound on the total dimension of generated modules.
    pub dims: usize,
    /// Window bound `|s| ≤ window` for exhaustive hat checks.
    pub window: i64,
    pub field: Field,
}

impl Default for Config {
    fn default() -> Config {
        Config { seed: 42, cases: 100, dims: 4, window: 3, field: Field::Q }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Cases whose inputs were nonzero, for checks that a zero input would satisfy trivially.
    pub nontrivial: Option<usize>,
}

impl Check {
    fn new(name: impl Into<String>) -> Check {
        Check { name: name.into(), cases: 0, failures: Vec::new(), nontrivial: None }
    }

    fn witness(&mut self, nonzero: bool) {
        *self.nontrivial.get_or_insert(0) += usize::from(nonzero);
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result<T>(&mut self, r: crate::Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        self.cases += 1;
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{}: {e}", what()));
                None
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Suite {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl Suite {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `suite=… check=… status=… cases=… failures=…`, one line per check.
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let status = if c.passed() { "pass" } else { "fail" };
                let mut s = format!(
                    "suite={} check={} status={} cases={} failures={}",
                    self.name,
                    c.name,
                    status,
                    c.cases,
                    c.failures.len()
                );
                if let Some(n) = c.nontrivial {
                    s.push_str(&format!(" nontrivial={n}"));
                }
                if let Some(f) = c.failures.first() {
                    s.push_str(&format!(" counterexample=\"{}\"", f.replace('"', "'")));
                }
                s
            })
            .collect()
    }
}

pub const SUITES: [&str; 9] = ["stasheff", "hat", "tw", "sigma-tau", "j", "psi", "confl", "tri", "shift"];

pub fn run_suite(name: &str, cfg: &Config) -> Option<Suite> {
    Some(match name {
        "stasheff" => stasheff(cfg),
        "hat" => hat_suite(cfg),
        "tw" => tw_suite(cfg),
        "sigma-tau" => sigma_tau(cfg),
        "j" => j_suite(cfg),
        "psi" => psi_suite(cfg),
        "confl" => confl_suite(cfg),
        "tri" => tri_suite(cfg),
        "shift" => shift_suite(cfg),
        _ => return None,
    })
}

pub fn run_all(cfg: &Config) -> Vec<Suite> {
    SUITES.iter().map(|s| run_suite(s, cfg).expect("known suite")).collect()
}

// ---------------------------------------------------------------- section algebra

/// Stasheff relations up to `max_arity + 2` and the unit conditions.
pub fn algebra_checks(name: &str, z: &SectionAlgebra) -> Vec<Check> {
    let mut st = Check::new(format!("{name}-stasheff"));
    for n in 1..=z.max_arity() + 2 {
        st.cases += z.chains(n).len();
        for f in z.check_stasheff(n) {
            st.failures.push(format!("S_{n} on {}: {}", z.chain_name(&f.chain), f.message));
        }
    }
    let mut un = Check::new(format!("{name}-units"));
    un.cases = z.all_entries().len();
    for f in z.check_units() {
        un.failures.push(format!("{}: {}", z.chain_name(&f.chain), f.message));
    }
    vec![st, un]
}

/// Single-coefficient sign flips of every unit rule of `z`.
pub fn mutation_corpus(z: &SectionAlgebra) -> Vec<(String, SectionAlgebra)> {
    let mut out = Vec::new();
    for (chain, e) in z.all_entries() {
        if !chain.iter().any(|&k| z.basis()[k].is_unit) {
            continue;
        }
        for k in e.keys() {
            let mut flipped: Elem = e.clone();
            let v = flipped[k].clone();
            flipped.insert(*k, -v);
            let label = format!("{} -> {}", z.chain_name(&chain), z.elem_string(&flipped));
            if let Ok(m) = z.with_entry(chain.clone(), flipped) {
                out.push((label, m));
            }
        }
    }
    out
}

/// First Stasheff failure of `z` as `(n, chain)`.
fn first_stasheff_failure(z: &SectionAlgebra) -> Option<(usize, Vec<usize>)> {
    (1..=z.max_arity() + 2).find_map(|n| z.check_stasheff(n).into_iter().next().map(|f| (n, f.chain)))
}

/// A mutant is rejected when it violates a Stasheff relation or the unit conditions.
fn rejected(z: &SectionAlgebra) -> bool {
    first_stasheff_failure(z).is_some() || !z.check_units().is_empty()
}

pub fn stasheff(cfg: &Config) -> Suite {
    let mut checks = Vec::new();
    let mut corpus = Check::new("mutants-rejected");
    let mut e3 = Check::new("e3-unit-flip-fails-s3-on-unit-chain");
    for (name, z) in examples::all(cfg.field) {
        checks.extend(algebra_checks(name, &z));
        for (label, m) in mutation_corpus(&z) {
            corpus.case(rejected(&m), || format!("{name} mutant {label} satisfies Stasheff and units"));
            if name == "E3" {
                let hit = m.check_stasheff(3).iter().any(|f| f.chain.iter().any(|&k| m.basis()[k].is_unit));
                e3.case(hit, || format!("mutant {label}"));
            }
        }
    }
    checks.push(corpus);
    checks.push(e3);
    Suite { name: "stasheff", checks }
}

// ---------------------------------------------------------------- hat algebra

fn one(z: &SectionAlgebra, x: HatBasis) -> HatElem {
    hat::basis_elem(x, z.field().one())
}

fn signed(z: &SectionAlgebra, x: HatBasis, e: i64) -> HatElem {
    hat::basis_elem(x, z.field().sign(e))
}

fn neg(z: &SectionAlgebra, x: &HatElem) -> HatElem {
    hat::scale(x, &z.field().int(-1))
}

fn sgn(z: &SectionAlgebra, x: &HatElem, e: i64) -> HatElem {
    hat::scale(x, &z.field().sign(e))
}

fn shift_elem(x: &HatElem, k: i64) -> HatElem {
    hat::map_terms(x, |b| b.shift(k))
}

fn nu_left(x: &HatElem) -> HatElem {
    hat::map_terms(x, HatBasis::nu_left)
}

fn nu_right_inv(x: &HatElem) -> HatElem {
    hat::map_terms(x, HatBasis::nu_right_inv)
}

fn bn(z: &SectionAlgebra, chain: &[HatElem]) -> HatElem {
    hat::hat_bn_multi(z, chain)
}

fn chain_text(z: &SectionAlgebra, c: &[HatBasis]) -> String {
    let names: Vec<String> = c.iter().map(|x| x.name(z)).collect();
    format!("[{}]", names.join(", "))
}

/// Every hat chain over base chains of length `n` with profile entries in `[-w, w]`.
fn hat_chains(z: &SectionAlgebra, n: usize, w: i64) -> Vec<Vec<HatBasis>> {
    let mut out = Vec::new();
    for base in z.chains(n) {
        for p in hat::profiles(n, w) {
            out.push(hat::lift(&base, &p));
        }
    }
    out
}

pub fn hat_suite(cfg: &Config) -> Suite {
    Suite { name: "hat", checks: hat_checks(&examples::all(cfg.field), cfg.window) }
}

/// Hat-level identities over every chain with shifts in `[-w, w]`.
pub fn hat_checks(algebras: &[(&str, SectionAlgebra)], w: i64) -> Vec<Check> {
    let mut stasheff = Check::new("hat-stasheff");
    let mut nu = Check::new("nu-equivariance");
    let mut shift = Check::new("shift-equivariance");
    let mut circ_nu = Check::new("circ-nu-laws");
    let mut units = Check::new("unit-conjugation");
    let mut shifted_units = Check::new("shifted-unit-compositions");
    let mut triples = Check::new("triple-products");
    let mut pull = Check::new("pull-out-laws");
    for (name, z) in algebras {
        for n in 1..=z.max_arity() + 2 {
            for base in z.chains(n) {
                if !hat::base_chain_active(z, &base) {
                    continue;
                }
                for p in hat::profiles(n, w) {
                    let c = hat::lift(&base, &p);
                    let r = hat::hat_stasheff_residue(z, &c);
                    stasheff.case(r.is_empty(), || format!("{name} {}", chain_text(z, &c)));
                }
            }
        }
        for n in 1..=z.max_arity() {
            for c in hat_chains(z, n, w) {
                let els: Vec<HatElem> = c.iter().map(|x| one(z, *x)).collect();
                let base = bn(z, &els);
                let sn = c[n - 1].t;
                let s1 = c[0].t;
                // ν on the left factor
                let mut l = els.clone();
                l[0] = nu_left(&els[0]);
                nu.case(bn(z, &l) == sgn(z, &nu_left(&base), s1 - sn + 1), || format!("{name} left ν {}", chain_text(z, &c)));
                // ν^{-1} on the right factor
                let mut r = els.clone();
                r[n - 1] = nu_right_inv(&els[n - 1]);
                let dsum: i64 = c[..n - 1].iter().map(|x| x.degree(z)).sum();
                nu.case(bn(z, &r) == sgn(z, &nu_right_inv(&base), 1 + dsum), || format!("{name} right ν⁻¹ {}", chain_text(z, &c)));
                // internal exchange
                for l in 0..n.saturating_sub(1) {
                    let mut m = els.clone();
                    m[l] = nu_right_inv(&els[l]);
                    m[l + 1] = nu_left(&els[l + 1]);
                    let e = c[l].degree(z) + c[l].t - c[l + 1].t + 1;
                    nu.case(bn(z, &m) == sgn(z, &base, e), || format!("{name} exchange at {l} {}", chain_text(z, &c)));
                }
                for k in [1, -1] {
                    let sh: Vec<HatElem> = els.iter().map(|x| shift_elem(x, k)).collect();
                    shift.case(bn(z, &sh) == shift_elem(&base, k), || format!("{name} shift {k} {}", chain_text(z, &c)));
                }
                // pull-out of σ on the left
                let v = c[0].target(z);
                let mut ps = els.clone();
                ps[0] = hat::circ(z, &hat::sigma_elem(z, v), &els[0]);
                let rhs = neg(z, &hat::circ(z, &hat::sigma_elem(z, v), &base));
                pull.case(bn(z, &ps) == rhs, || format!("{name} σ pull-out {}", chain_text(z, &c)));
                // τ ⊗ σ middle insertion
                for l in 0..n.saturating_sub(1) {
                    let u = c[l].source(z);
                    let mut m = els.clone();
                    m[l] = hat::circ(z, &els[l], &hat::tau_elem(z, u));
                    m[l + 1] = hat::circ(z, &hat::sigma_elem(z, u), &els[l + 1]);
                    pull.case(bn(z, &m) == sgn(z, &base, c[l].degree(z)), || format!("{name} τ⊗σ insertion at {l} {}", chain_text(z, &c)));
                }
            }
        }
        for c in hat_chains(z, 2, w) {
            let (a1, a2) = (c[0], c[1]);
            let (s1, s2) = (a1.t, a2.t);
            let d1 = a1.degree(z);
            let (e1, e2) = (one(z, a1), one(z, a2));
            let base = hat::circ(z, &e1, &e2);
            let what = || format!("{name} {}", chain_text(z, &c));
            circ_nu.case(hat::circ(z, &nu_left(&e1), &e2) == sgn(z, &nu_left(&base), s1 - s2 + 1), what);
            circ_nu.case(hat::circ(z, &e1, &nu_right_inv(&e2)) == sgn(z, &nu_right_inv(&base), d1 + 1), what);
            circ_nu.case(hat::circ(z, &nu_right_inv(&e1), &nu_left(&e2)) == sgn(z, &base, s1 - s2 + d1 + 1), what);
            // a2 ∈ Ẑ_{s1-1, s2}: a1 ∘ (ν a2) = ± (a1 ν) ∘ a2
            let b2 = one(z, a2.nu_inv_left());
            let lhs = hat::circ(z, &e1, &nu_left(&b2));
            let rhs = hat::circ(z, &hat::map_terms(&e1, HatBasis::nu_right), &b2);
            circ_nu.case(lhs == sgn(z, &rhs, s1 - s2 + d1 + 1), what);
            // a2 ∈ Ẑ_{s1+1, s2}: (a1 ν^{-1}) ∘ a2 = ± a1 ∘ (ν^{-1} a2)
            let b2 = one(z, a2.nu_left());
            let lhs = hat::circ(z, &nu_right_inv(&e1), &b2);
            let rhs = hat::circ(z, &e1, &hat::map_terms(&b2, HatBasis::nu_inv_left));
            circ_nu.case(lhs == sgn(z, &rhs, s1 - s2 + d1 + 1), what);
        }
        for c in hat_chains(z, 1, w) {
            let a = c[0];
            let (s, t) = (a.s, a.t);
            let ea = one(z, a);
            let (src, tgt) = (a.source(z), a.target(z));
            let what = || format!("{name} {}", a.name(z));
            // units of Ẑ are the conjugated units of Z and act as strict units
            let eu = hat::unit(z, tgt);
            units.case(eu == HatBasis::new(z.unit(tgt.idem), 0, 0).shift(tgt.shift), what);
            units.case(hat::circ(z, &one(z, eu), &ea) == ea, what);
            units.case(hat::circ(z, &ea, &hat::unit_elem(z, src)) == sgn(z, &ea, a.degree(z) + 1), what);
            for n in [1, 3] {
                let mut ch = vec![one(z, eu)];
                ch.extend(std::iter::repeat_n(ea.clone(), n - 1));
                if n == 1 || z.max_arity() >= n {
                    units.case(bn(z, &ch).is_empty(), what);
                }
            }
            // compositions with σ(𝔢_u), τ(𝔢_u)
            let (i, j) = (src.idem, tgt.idem);
            let r = hat::circ(z, &ea, &hat::sigma_elem(z, HatIdem::new(t - 1, i)));
            shifted_units.case(r == signed(z, a.nu_right(), t - 1), what);
            let r = hat::circ(z, &hat::sigma_elem(z, HatIdem::new(s, j)), &ea);
            shifted_units.case(r == signed(z, a.nu_left(), t - 1), what);
            let r = hat::circ(z, &ea, &hat::tau_elem(z, HatIdem::new(t, i)));
            shifted_units.case(r == signed(z, a.nu_right_inv(), t), what);
            let r = hat::circ(z, &hat::tau_elem(z, HatIdem::new(s - 1, j)), &ea);
            shifted_units.case(r == signed(z, a.nu_inv_left(), t), what);
            // three-factor products
            let (sg, ta) = (|u| hat::sigma_elem(z, u), |u| hat::tau_elem(z, u));
            let (us, ut, usm) = (HatIdem::new(s, j), HatIdem::new(t, i), HatIdem::new(s - 1, j));
            let r = hat::circ(z, &ta(us), &hat::circ(z, &sg(us), &ea));
            triples.case(r == neg(z, &ea), what);
            let r = hat::circ(z, &sg(usm), &hat::circ(z, &ta(usm), &ea));
            triples.case(r == neg(z, &ea), what);
            let r = hat::circ(z, &sg(us), &hat::circ(z, &ea, &ta(ut)));
            triples.case(r == one(z, a.shift(1)), what);
            let r = hat::circ(z, &hat::circ(z, &sg(us), &ea), &ta(ut));
            triples.case(r == signed(z, a.shift(1), 1), what);
            let r = hat::circ(z, &hat::circ(z, &ea, &ta(ut)), &sg(ut));
            triples.case(r == ea, what);
        }
        for s in -w..=w {
            for i in 0..z.idems().len() {
                let u = HatIdem::new(s, i);
                let e = hat::unit_elem(z, u);
                let what = || format!("{name} unit at ({s},{i})");
                units.case(hat::circ(z, &e, &e) == e, what);
                units.case(hat::circ(z, &hat::tau_elem(z, u), &hat::sigma_elem(z, u)) == e, what);
                units.case(hat::circ(z, &hat::sigma_elem(z, u), &hat::tau_elem(z, u)) == hat::unit_elem(z, u.nu(1)), what);
                units.case(shift_elem(&hat::sigma_elem(z, u), -1) == neg(z, &hat::sigma_elem(z, u.nu(-1))), what);
                units.case(shift_elem(&hat::tau_elem(z, u), -1) == neg(z, &hat::tau_elem(z, u.nu(-1))), what);
            }
        }
    }
    vec![stasheff, nu, shift, circ_nu, units, shifted_units, triples, pull]
}

/// Keep fuzzing past `cases` until half as many nontrivial instances were seen, within a budget.
fn needs_more(cfg: &Config, case: usize, nontrivial: usize) -> bool {
    case < cfg.cases || (nontrivial < cfg.cases.div_ceil(2) && case < 20 * cfg.cases)
}

// ---------------------------------------------------------------- ad level: σ_X, τ_X

fn random_module(g: &mut Gen) -> SModule {
    g.module()
}

/// A homogeneous morphism `x → y` of a random degree with a nonempty hom space.
fn random_hom(z: &SectionAlgebra, g: &mut Gen, x: &SModule, y: &SModule) -> (AdMorphism, i64) {
    let (ox, oy) = (TwObject::trivial(x), TwObject::trivial(y));
    let mut degrees: Vec<i64> = (-3..=2).filter(|&d| HomSpace::new(z, x, y, d).dim() > 0).collect();
    if degrees.is_empty() {
        degrees.push(0);
    }
    let d = degrees[g.rng().gen_range(0..degrees.len())];
    for _ in 0..4 {
        let f = g.morphism(&ox, &oy, d);
        if !f.is_zero() {
            return (f.map, d);
        }
    }
    (AdMorphism::zero(x, y), d)
}

pub fn sigma_tau(cfg: &Config) -> Suite {
    let mut inv = Check::new("tau-sigma-inverse");
    let mut three = Check::new("three-factor");
    let mut sandwich = Check::new("sandwich");
    let mut insertion = Check::new("tau-sigma-insertion");
    let mut shifts = Check::new("shifted-sigma-tau");
    for (k, (name, z)) in examples::all(cfg.field).into_iter().enumerate() {
        let z = &z;
        let mut g = Gen::new(z, cfg.seed.wrapping_add(100 + k as u64), cfg.dims);
        let start = sandwich.nontrivial.unwrap_or(0);
        for case in 0.. {
            if !needs_more(cfg, case, sandwich.nontrivial.unwrap_or(0) - start) {
                break;
            }
            let what = || format!("{name} case {case}");
            let n = 1 + case % 4;
            let mods: Vec<SModule> = (0..=n).map(|_| random_module(&mut g)).collect();
            let fs: Vec<(AdMorphism, i64)> = (0..n).map(|i| random_hom(z, &mut g, &mods[i], &mods[i + 1])).collect();
            let (x, y) = (&mods[0], &mods[1]);
            let f = &fs[0].0;
            let (sx, tx, sy, ty) = (ad::sigma(z, x), ad::tau(z, x), ad::sigma(z, y), ad::tau(z, y));
            let c = |a: &AdMorphism, b: &AdMorphism| ad::circ(z, a, b);
            inv.case(c(&tx, &sx) == ad::identity(z, x), what);
            inv.case(c(&sx, &tx) == ad::identity(z, &x.shift(1)), what);
            three.case(c(&c(f, &tx), &sx) == *f, what);
            three.case(c(&ty, &c(&sy, f)) == f.neg(), what);
            let gm = random_hom(z, &mut g, x, &y.shift(1)).0;
            three.case(c(&sy, &c(&ty, &gm)) == gm.neg(), what);
            three.case(c(&sy, &c(f, &tx)) == f.shift(1), what);
            three.case(c(&c(&sy, f), &tx) == f.shift(1).neg(), what);
            shifts.case(ad::sigma(z, x).shift(-1) == ad::sigma(z, &x.shift(-1)).neg(), what);
            shifts.case(ad::tau(z, x).shift(-1) == ad::tau(z, &x.shift(-1)).neg(), what);
            // written order [f_n, …, f_1]
            let chain: Vec<&AdMorphism> = fs.iter().rev().map(|(m, _)| m).collect();
            let base = ad::ad_bn(z, &chain).expect("composable");
            let lhs = c(&ad::sigma(z, &mods[n]), &base);
            sandwich.witness(!base.is_zero());
            for l in 1..=n {
                let dl: i64 = fs[l..].iter().map(|(_, d)| d).sum::<i64>() + 1;
                let mut parts: Vec<AdMorphism> = Vec::new();
                for (i, (m, _)) in fs.iter().enumerate() {
                    parts.push(match (i + 1).cmp(&l) {
                        std::cmp::Ordering::Less => m.clone(),
                        std::cmp::Ordering::Equal => c(&ad::sigma(z, &mods[l]), m),
                        std::cmp::Ordering::Greater => m.shift(1),
                    });
                }
                let refs: Vec<&AdMorphism> = parts.iter().rev().collect();
                let rhs = ad::ad_bn(z, &refs).expect("composable").scale(&z.field().sign(dl));
                sandwich.case(lhs == rhs, || format!("{name} case {case} n={n} l={l}"));
            }
            for l in 1..n {
                let mut parts: Vec<AdMorphism> = fs.iter().map(|(m, _)| m.clone()).collect();
                parts[l] = c(&fs[l].0, &ad::tau(z, &mods[l]));
                parts[l - 1] = c(&ad::sigma(z, &mods[l]), &fs[l - 1].0);
                let refs: Vec<&AdMorphism> = parts.iter().rev().collect();
                let lhs = ad::ad_bn(z, &refs).expect("composable");
                insertion.case(lhs == base.scale(&z.field().sign(fs[l].1)), || format!("{name} case {case} n={n} l={l}"));
            }
        }
    }
    Suite { name: "sigma-tau", checks: vec![inv, three, sandwich, insertion, shifts] }
}

// ---------------------------------------------------------------- tw level

fn fuzz_algebras(cfg: &Config) -> Vec<(&'static str, SectionAlgebra)> {
    vec![("E2", examples::e2(cfg.field)), ("E3", examples::e3(cfg.field))]
}

pub fn tw_suite(cfg: &Config) -> Suite {
    let mut b1b1 = Check::new("b1-b1-zero");
    let mut closure = Check::new("cocycle-closure");
    let mut ideal = Check::new("coboundary-ideal");
    let mut assoc = Check::new("h-associativity");
    let mut units = Check::new("star-units");
    let mut split = Check::new("strict-split-evaluation");
    let mut shift = Check::new("b1-shift");
    for (k, (name, z)) in fuzz_algebras(cfg).into_iter().enumerate() {
        let z = &z;
        let mut g = Gen::new(z, cfg.seed.wrapping_add(200 + k as u64), cfg.dims);
        let start = assoc.nontrivial.unwrap_or(0);
        for case in 0.. {
            if !needs_more(cfg, case, assoc.nontrivial.unwrap_or(0) - start) {
                break;
            }
            let what = || format!("{name} case {case}");
            let (w, x, y, v) = (g.object(), g.object(), g.object(), g.object());
            let d = g.rng().gen_range(-3..=1);
            let h = g.morphism(&x, &y, d);
            b1b1.witness(!b1(z, &h).is_zero());
            b1b1.case(b1(z, &b1(z, &h)).is_zero(), what);
            let f = g.cocycle(&w, &x);
            let gg = g.cocycle(&x, &y);
            let hh = g.cocycle(&y, &v);
            let gf = star(z, &gg, &f);
            closure.witness(!gf.is_zero());
            closure.case(is_cocycle(z, &gf), what);
            let cb = g.coboundary(&w, &x);
            let cb2 = g.coboundary(&x, &y);
            ideal.case(is_coboundary(z, &star(z, &gg, &cb)), what);
            ideal.case(is_coboundary(z, &star(z, &cb2, &f)), what);
            let l = star(z, &star(z, &hh, &gg), &f);
            assoc.witness(!l.is_zero());
            let r = star(z, &hh, &star(z, &gg, &f));
            assoc.case(is_coboundary(z, &l.sub(&r)), what);
            units.case(star(z, &f, &TwMor::identity(z, &w)) == f, what);
            units.case(star(z, &TwMor::identity(z, &x), &f) == f, what);
            units.case(b1(z, &TwMor::identity(z, &x)).is_zero(), what);
            split.case(tw::b1_split(z, &h) == b1(z, &h), what);
            split.case(tw::star_split(z, &gg, &f) == star(z, &gg, &f), what);
            let h1 = tri::shift_mor(&h, 1);
            shift.case(b1(z, &h1).map == b1(z, &h).map.shift(1), what);
        }
    }
    Suite { name: "tw", checks: vec![b1b1, closure, ideal, assoc, units, split, shift] }
}

// ---------------------------------------------------------------- J

pub fn j_suite(cfg: &Config) -> Suite {
    let mut homotopy = Check::new("b1-s-identity");
    let mut witness = Check::new("identity-coboundary-witness");
    let mut functor = Check::new("functoriality");
    let mut proj = Check::new("factor-into-j");
    let mut inj = Check::new("factor-out-of-j");
    for (k, (name, z)) in fuzz_algebras(cfg).into_iter().enumerate() {
        let z = &z;
        let mut g = Gen::new(z, cfg.seed.wrapping_add(300 + k as u64), cfg.dims);
        for case in 0..cfg.cases {
            let what = || format!("{name} case {case}");
            let (x, y, w) = (g.object(), g.object(), g.object());
            let jx = confl::j_object(z, &x);
            let idj = TwMor::identity(z, &jx.xi.e);
            homotopy.case(b1(z, &jx.s) == idj, what);
            let wit = tw::coboundary_witness(z, &idj).ok().flatten();
            witness.case(wit.is_some_and(|s| b1(z, &s) == idj), what);
            let (jy, jw) = (confl::j_object(z, &y), confl::j_object(z, &w));
            let f = g.cocycle(&x, &y);
            let gm = g.cocycle(&y, &w);
            let lhs = confl::j_mor(z, &star(z, &gm, &f), &jx, &jw);
            let rhs = star(z, &confl::j_mor(z, &gm, &jy, &jw), &confl::j_mor(z, &f, &jx, &jy));
            functor.witness(!lhs.is_zero());
            functor.case(lhs == rhs, what);
            functor.case(confl::j_mor(z, &TwMor::identity(z, &x), &jx, &jx) == idj, what);
            // a special inflation A → E and a map A → J(U)
            let c = random_canonical(z, &mut g);
            let h = g.cocycle(&c.x, &jx.xi.e);
            proj.witness(!h.is_zero());
            let r = confl::factor_through_inflation(z, &h, &c.f).and_then(|h2| {
                if star(z, &h2, &c.f) == h {
                    Ok(())
                } else {
                    Err(crate::Error::Invalid("h' ⋆ f ≠ h".into()))
                }
            });
            proj.result(r, what);
            let h = g.cocycle(&jx.xi.e, &c.y);
            inj.witness(!h.is_zero());
            let r = confl::factor_through_deflation(z, &h, &c.g).and_then(|h2| {
                if star(z, &c.g, &h2) == h {
                    Ok(())
                } else {
                    Err(crate::Error::Invalid("g ⋆ h' ≠ h".into()))
                }
            });
            inj.result(r, what);
        }
    }
    Suite { name: "j", checks: vec![homotopy, witness, functor, proj, inj] }
}

fn random_canonical(z: &SectionAlgebra, g: &mut Gen) -> Canonical {
    let x = g.object();
    let y = g.object();
    let h = g.cocycle(&y, &x.shift(1));
    confl::psi(z, &x, &h).expect("cocycle")
}

// ---------------------------------------------------------------- Ψ

pub fn psi_suite(cfg: &Config) -> Suite {
    let mut round = Check::new("psi-round-trip");
    let mut iff = Check::new("equivalence-iff-coboundary");
    let mut outcomes = Check::new("both-outcomes-exercised");
    for (k, (name, z)) in fuzz_algebras(cfg).into_iter().enumerate() {
        let z = &z;
        let mut g = Gen::new(z, cfg.seed.wrapping_add(400 + k as u64), cfg.dims);
        let (mut same, mut differ) = (0, 0);
        for case in 0..cfg.cases {
            let what = || format!("{name} case {case}");
            let (x, y) = (g.object(), g.object());
            let x1 = x.shift(1);
            let h = g.cocycle(&y, &x1);
            let a = confl::psi(z, &x, &h).expect("cocycle");
            round.witness(!h.is_zero());
            round.case(confl::psi_inv(z, &a).map == h.map, what);
            let back = confl::psi(z, &x, &confl::psi_inv(z, &a)).expect("cocycle");
            round.case(back.gamma.map == a.gamma.map, what);
            let h2 = if case % 2 == 0 { h.add(&g.coboundary(&y, &x1)) } else { g.cocycle(&y, &x1) };
            let b = confl::psi(z, &x, &h2).expect("cocycle");
            let cob = is_coboundary(z, &h.sub(&h2));
            let eq = confl::equivalent(z, &a, &b);
            let ladder_ok = eq.as_ref().is_none_or(|t| {
                Ladder::identity_ends(z, a.conflation(), b.conflation(), t.clone()).verify(z).is_ok()
            });
            iff.case(eq.is_some() == cob && ladder_ok, what);
            let back_eq = confl::equivalent(z, &b, &a).is_some();
            iff.case(back_eq == cob, what);
            if cob {
                same += 1;
            } else {
                differ += 1;
            }
        }
        outcomes.case(same > 0 && differ > 0, || format!("{name}: {same} equivalent, {differ} inequivalent"));
    }
    Suite { name: "psi", checks: vec![round, iff, outcomes] }
}

// ---------------------------------------------------------------- conflation calculus

/// Coefficient vectors of the cocycles `h: src → tgt` (degree -1) with `apply(h) = 0`.
fn constrained_cocycles(
    z: &SectionAlgebra,
    src: &Obj,
    tgt: &Obj,
    apply: impl Fn(&TwMor) -> TwMor,
) -> Vec<TwMor> {
    let basis = tw::cocycle_basis(z, src, tgt, -1);
    if basis.is_empty() {
        return vec![];
    }
    let images: Vec<TwMor> = basis.iter().map(&apply).collect();
    let (s, t) = (&images[0].src, &images[0].tgt);
    let hs = HomSpace::new(z, &s.module, &t.module, -1);
    let field = z.field();
    let mut m = Matrix::zeros(field, hs.dim(), basis.len());
    for (j, im) in images.iter().enumerate() {
        for (i, v) in hs.to_vec(&im.map).expect("degree -1").0 {
            m.set(i, j, v);
        }
    }
    let ns = m.nullspace();
    (0..ns.cols())
        .map(|c| {
            basis.iter().enumerate().fold(TwMor::zero(src, tgt), |acc, (j, b)| acc.add(&b.scale(ns.get(j, c))))
        })
        .collect()
}

fn random_combination(g: &mut Gen, z: &SectionAlgebra, vs: &[TwMor], src: &Obj, tgt: &Obj) -> TwMor {
    vs.iter().fold(TwMor::zero(src, tgt), |acc, v| {
        let c = z.field().int(g.rng().gen_range(-2..=2));
        acc.add(&v.scale(&c))
    })
}

pub fn confl_suite(cfg: &Config) -> Suite {
    let mut push = Check::new("pushout-ladder");
    let mut pull = Check::new("pullback-ladder");
    let mut canon = Check::new("canonicalize-both-ways");
    let mut kernel = Check::new("kernel-factorization");
    let mut cokernel = Check::new("cokernel-factorization");
    let mut biproduct = Check::new("biproduct");
    for (k, (name, z)) in fuzz_algebras(cfg).into_iter().enumerate() {
        let z = &z;
        let mut g = Gen::new(z, cfg.seed.wrapping_add(500 + k as u64), cfg.dims);
        for case in 0..cfg.cases {
            let what = || format!("{name} case {case}");
            let c = random_canonical(z, &mut g);
            push.witness(!c.gamma.is_zero());
            let x2 = g.object();
            let r = confl::pushout(z, &c, &g.cocycle(&c.x, &x2))
                .and_then(|(l, c1)| l.verify(z).and_then(|_| confl::validate_special(z, &c1.conflation())));
            push.result(r, what);
            let r = confl::pushout(z, &c, &TwMor::identity(z, &c.x)).map(|(_, c1)| c1.gamma.map == c.gamma.map);
            push.case(matches!(r, Ok(true)), what);
            let y2 = g.object();
            let r = confl::pullback(z, &c, &g.cocycle(&y2, &c.y))
                .and_then(|(l, c1)| l.verify(z).and_then(|_| confl::validate_special(z, &c1.conflation())));
            pull.result(r, what);
            let r = confl::pullback(z, &c, &TwMor::identity(z, &c.y)).map(|(_, c1)| c1.gamma.map == c.gamma.map);
            pull.case(matches!(r, Ok(true)), what);

            // a special conflation with a scrambled middle term
            let p = g.special_iso(&c.e.module);
            let r = tw::transport(z, &p.map, &c.e).and_then(|(e2, pm)| {
                let pinv = ad::special_inverse(z, &p.map)?;
                let back = TwMor { src: e2.clone(), tgt: c.e.clone(), map: pinv };
                let conf = Conflation { x: c.x.clone(), e: e2, y: c.y.clone(), f: star(z, &pm, &c.f), g: star(z, &c.g, &back) };
                let (h, cn) = confl::canonicalize(z, &conf)?;
                Ladder::identity_ends(z, conf.clone(), cn.conflation(), h.clone()).verify(z)?;
                let hinv = TwMor { src: cn.e.clone(), tgt: conf.e.clone(), map: ad::special_inverse(z, &h.map)? };
                Ladder::identity_ends(z, cn.conflation(), conf, hinv).verify(z)?;
                if confl::equivalent(z, &cn, &c).is_none() || confl::equivalent(z, &c, &cn).is_none() {
                    return Err(crate::Error::Invalid("canonical form not equivalent to the original".into()));
                }
                Ok(())
            });
            canon.result(r, what);

            // exact pair: h ⋆ f = 0 ⇒ h = h₂ ⋆ g, and g ⋆ h = 0 ⇒ h = f ⋆ h₁
            let w = g.object();
            let ker = constrained_cocycles(z, &c.e, &w, |h| star(z, h, &c.f));
            let h = random_combination(&mut g, z, &ker, &c.e, &w);
            cokernel.witness(!h.is_zero());
            let ok = tw::factor_after(z, &h, &c.g).is_some_and(|h2| star(z, &h2, &c.g) == h);
            cokernel.case(ok, what);
            let v = g.object();
            let ker = constrained_cocycles(z, &v, &c.e, |h| star(z, &c.g, h));
            let h = random_combination(&mut g, z, &ker, &v, &c.e);
            kernel.witness(!h.is_zero());
            let ok = tw::factor_before(z, &h, &c.f).is_some_and(|h1| star(z, &c.f, &h1) == h);
            kernel.case(ok, what);

            // split conflation as a biproduct
            let s = Canonical::split(z, &c.x, &c.y);
            let (sx, px) = (s.f.clone(), s.proj_x(z));
            let (sy, py) = (s.incl_y(z), s.g.clone());
            let one = |m: &TwMor| m.map == ad::identity(z, &m.src.module);
            biproduct.case(one(&star(z, &px, &sx)) && one(&star(z, &py, &sy)), what);
            biproduct.case(star(z, &px, &sy).is_zero() && star(z, &py, &sx).is_zero(), what);
            biproduct.case(one(&star(z, &sx, &px).add(&star(z, &sy, &py))), what);
        }
    }
    Suite { name: "confl", checks: vec![push, pull, canon, kernel, cokernel, biproduct] }
}

// ---------------------------------------------------------------- triangles

/// Axiom instances per algebra: at least 25.
pub fn tri_instances(cfg: &Config) -> usize {
    (cfg.cases / 4).max(25)
}

fn axiom_checks(name: &str, rep: &tri::AxiomReport) -> Vec<Check> {
    rep.results
        .iter()
        .map(|r| Check { name: format!("{name}-{}", r.axiom), cases: r.checked, failures: r.failures.clone(), nontrivial: None })
        .collect()
}

pub fn tri_suite(cfg: &Config) -> Suite {
    let mut checks = Vec::new();
    let mut mutation = Check::new("rotate-right-sign-mutation-detected");
    let n = tri_instances(cfg);
    for (k, (name, z)) in fuzz_algebras(cfg).into_iter().enumerate() {
        let seed = cfg.seed.wrapping_add(600 + k as u64);
        let inst = tri::fuzz_instances(&z, seed, n, cfg.dims.min(3));
        let rep = tri::verify_axioms(&z, &inst, seed, Mutation::None);
        checks.extend(axiom_checks(name, &rep));
        let m = tri::verify_axioms(&z, &inst[..n.min(8)], seed, Mutation::RotateRightSign);
        let caught = m.result("TR2-right").is_some_and(|r| !r.failures.is_empty());
        mutation.case(caught, || format!("{name}: mutated rotation accepted"));
    }
    let z = examples::e2(cfg.field);
    let empty = tri::verify_axioms(&z, &[], cfg.seed, Mutation::None);
    let mut vac = Check::new("empty-instance-set-vacuous");
    vac.case(empty.passed() && !empty.warnings.is_empty(), || "empty instance set not reported as vacuous".into());
    checks.push(mutation);
    checks.push(vac);
    Suite { name: "tri", checks }
}

// ---------------------------------------------------------------- shift functor

pub fn shift_suite(cfg: &Config) -> Suite {
    let mut star_c = Check::new("preserves-star");
    let mut ids = Check::new("preserves-identities");
    let mut cob = Check::new("preserves-coboundaries");
    let mut inverse = Check::new("inverse");
    let mut tris = Check::new("shifted-triangles");
    let mut canon = Check::new("canonical-of-shift");
    for (k, (name, z)) in fuzz_algebras(cfg).into_iter().enumerate() {
        let z = &z;
        let mut g = Gen::new(z, cfg.seed.wrapping_add(700 + k as u64), cfg.dims);
        let start = star_c.nontrivial.unwrap_or(0);
        for case in 0.. {
            if !needs_more(cfg, case, star_c.nontrivial.unwrap_or(0) - start) {
                break;
            }
            let what = || format!("{name} case {case}");
            let (x, y, w) = (g.object(), g.object(), g.object());
            let f = g.cocycle(&x, &y);
            let gm = g.cocycle(&y, &w);
            star_c.witness(!star(z, &gm, &f).is_zero());
            for kk in [1, -1] {
                let (tx, ty, tw_) = (x.shift(kk), y.shift(kk), w.shift(kk));
                let tf = f.shift_between(kk, &tx, &ty);
                let tg = gm.shift_between(kk, &ty, &tw_);
                star_c.case(star(z, &tg, &tf).map == star(z, &gm, &f).map.shift(kk), what);
                ids.case(TwMor::identity(z, &x).map.shift(kk) == TwMor::identity(z, &tx).map, what);
                let h = g.morphism(&x, &y, -2);
                let b = b1(z, &h);
                let tb = b.shift_between(kk, &tx, &ty);
                cob.case(b1(z, &h.shift_between(kk, &tx, &ty)) == tb && is_coboundary(z, &tb), what);
                cob.case(is_coboundary(z, &tf) == is_coboundary(z, &f), what);
            }
            let back = tri::shift_mor(&tri::shift_mor(&f, 1), -1);
            inverse.case(back.map == f.map && back.src.delta == x.delta && back.tgt.delta == y.delta, what);
            let back = tri::shift_mor(&tri::shift_mor(&f, -1), 1);
            inverse.case(back.map == f.map, what);
            if case % 4 == 0 {
                let c = random_canonical(z, &mut g);
                let t = tri::canonical_triangle(z, &c);
                for kk in [1, -1, 2] {
                    tris.result(tri::shift_triangle(z, &t, kk).and_then(|s| s.verify(z)), || format!("{name} case {case} T^{kk}"));
                }
                let tc = Canonical::new(z, &c.x.shift(1), &c.y.shift(1), &c.gamma.map.shift(1));
                let ok = tc.is_ok_and(|tc| {
                    let ct = tri::canonical_triangle(z, &tc);
                    ct.u.map == t.u.map.shift(1) && ct.v.map == t.v.map.shift(1) && ct.w.map == t.w.map.shift(1).neg()
                });
                canon.case(ok, what);
            }
        }
    }
    Suite { name: "shift", checks: vec![star_c, ids, cob, inverse, tris, canon] }
}

/// Per-suite summary used by `selftest` and `fuzz`.
pub fn report(suites: &[Suite]) -> (Vec<String>, bool) {
    let mut lines = Vec::new();
    let mut ok = true;
    let mut totals: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for s in suites {
        lines.extend(s.lines());
        ok &= s.passed();
        let e = totals.entry(s.name).or_default();
        for c in &s.checks {
            e.0 += c.cases;
            e.1 += c.failures.len();
        }
    }
    for s in suites {
        let (cases, fails) = totals[s.name];
        let status = if s.passed() { "pass" } else { "fail" };
        lines.push(format!("summary suite={} status={status} cases={cases} failures={fails}", s.name));
    }
    lines.push(format!("overall={}", if ok { "pass" } else { "fail" }));
    (lines, ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Config {
        Config { cases: 6, dims: 3, window: 2, ..Config::default() }
    }

    #[test]
    fn mutation_corpus_is_nonempty_and_fails() {
        let cfg = small();
        let s = stasheff(&cfg);
        let c = s.check("mutants-rejected").unwrap();
        assert!(c.cases >= 10, "{}", c.cases);
        assert!(s.passed(), "{:?}", s.lines());
    }

    #[test]
    fn inactive_chains_have_zero_residue() {
        let z = examples::e3(Field::Q);
        for n in 1..=4 {
            for base in z.chains(n) {
                if hat::base_chain_active(&z, &base) {
                    continue;
                }
                for p in hat::profiles(n, 1) {
                    assert!(hat::hat_stasheff_residue(&z, &hat::lift(&base, &p)).is_empty());
                }
            }
        }
    }

    #[test]
    fn small_suites_pass() {
        let cfg = small();
        for name in ["hat", "tw", "sigma-tau", "j", "psi", "confl", "shift"] {
            let s = run_suite(name, &cfg).unwrap();
            assert!(s.passed(), "{:?}", s.lines());
            assert!(s.checks.iter().all(|c| c.cases > 0), "{:?}", s.lines());
        }
    }
}
