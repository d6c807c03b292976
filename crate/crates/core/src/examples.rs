//! The shipped example algebras, also available as `.twc` text under `data/`.

use crate::scalar::Field;
use crate::section::{BasisElem, Elem, SectionAlgebra};

pub const E1_TWC: &str = include_str!("../data/e1.twc");
pub const E2_TWC: &str = include_str!("../data/e2.twc");
pub const E3_TWC: &str = include_str!("../data/e3.twc");

fn unit(name: &str, i: usize) -> BasisElem {
    BasisElem { name: name.into(), source: i, target: i, degree: -1, is_unit: true }
}

/// One idempotent and its unit.
pub fn e1(field: Field) -> SectionAlgebra {
    SectionAlgebra::new(field, vec!["1".into()], vec![unit("e", 0)], vec![]).expect("E1 is valid")
}

/// Two idempotents and an arrow `x: 1 -> 2` of degree 0; only unit products.
pub fn e2(field: Field) -> SectionAlgebra {
    let basis = vec![
        unit("e1", 0),
        unit("e2", 1),
        BasisElem { name: "x".into(), source: 0, target: 1, degree: 0, is_unit: false },
    ];
    SectionAlgebra::new(field, vec!["1".into(), "2".into()], basis, vec![]).expect("E2 is valid")
}

/// One idempotent, `|a| = 0`, `|c| = 1`, and the single higher product `b_3(a⊗a⊗a) = c`.
pub fn e3(field: Field) -> SectionAlgebra {
    let basis = vec![
        unit("e", 0),
        BasisElem { name: "a".into(), source: 0, target: 0, degree: 0, is_unit: false },
        BasisElem { name: "c".into(), source: 0, target: 0, degree: 1, is_unit: false },
    ];
    let entries = vec![(vec![1, 1, 1], Elem::from([(2, field.one())]))];
    SectionAlgebra::new(field, vec!["1".into()], basis, entries).expect("E3 is valid")
}

pub fn by_name(name: &str, field: Field) -> Option<SectionAlgebra> {
    match name {
        "e1" | "E1" => Some(e1(field)),
        "e2" | "E2" => Some(e2(field)),
        "e3" | "E3" => Some(e3(field)),
        _ => None,
    }
}

pub fn all(field: Field) -> Vec<(&'static str, SectionAlgebra)> {
    vec![("E1", e1(field)), ("E2", e2(field)), ("E3", e3(field))]
}
