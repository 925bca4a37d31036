//! Operads over an operadic category, presented as monoids in the category
//! of collections: a carrier set for every object, a unit element at every
//! trivial object, and a multiplication table indexed by morphisms.
//!
//! The module also carries two exhaustive counters used as oracles for each
//! other on categories of cardinality zero, where an operad is the same
//! thing as a presheaf: [`count_presheaf_actions`] enumerates contravariant
//! action tables directly, while [`enumerate_operads`] enumerates full
//! operad tables and filters through [`validate_operad`].

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::normal::Presheaf;
use crate::operadic::OperadicCategory;
use crate::report::ValidationReport;

/// Too many tables to examine under the given cap.
#[derive(Clone, Debug, Error)]
#[error("enumeration cap {cap} exceeded while counting tables")]
pub struct EnumerationCap {
    pub cap: usize,
}

/// Canonical multiplication key: the 1-based morphism id, the element of
/// the codomain component, and the fibre elements in fibre order.
pub fn mult_key(phi: usize, x: &str, ys: &[&str]) -> String {
    format!("{}|{}|{}", phi + 1, x, ys.join(","))
}

/// An operad: one finite set per object, a unit element per trivial
/// object, and one multiplication entry per typed input tuple.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Operad {
    sets: Vec<Vec<String>>,
    unit: BTreeMap<usize, String>,
    mult: BTreeMap<String, String>,
}

impl Operad {
    pub fn new(n_objects: usize) -> Self {
        Self {
            sets: vec![Vec::new(); n_objects],
            unit: BTreeMap::new(),
            mult: BTreeMap::new(),
        }
    }

    pub fn n_objects(&self) -> usize {
        self.sets.len()
    }

    pub fn set_elements(&mut self, object: usize, elems: &[&str]) {
        self.sets[object] = elems.iter().map(|e| e.to_string()).collect();
    }

    pub fn elements(&self, object: usize) -> &[String] {
        &self.sets[object]
    }

    pub fn set_unit(&mut self, object: usize, element: impl Into<String>) {
        self.unit.insert(object, element.into());
    }

    pub fn unit(&self, object: usize) -> Option<&str> {
        self.unit.get(&object).map(String::as_str)
    }

    pub fn unit_entries(&self) -> impl Iterator<Item = (usize, &str)> {
        self.unit.iter().map(|(&u, e)| (u, e.as_str()))
    }

    pub fn set_mult(&mut self, phi: usize, x: &str, ys: &[&str], result: impl Into<String>) {
        self.mult.insert(mult_key(phi, x, ys), result.into());
    }

    /// Inserts a multiplication entry under an already formatted key, as
    /// read from a file.
    pub fn insert_mult_key(&mut self, key: impl Into<String>, result: impl Into<String>) {
        self.mult.insert(key.into(), result.into());
    }

    pub fn mult(&self, phi: usize, x: &str, ys: &[&str]) -> Option<&str> {
        self.mult.get(&mult_key(phi, x, ys)).map(String::as_str)
    }

    pub fn mult_entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.mult.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Calls `f` once per tuple in the product of the given slots, in
/// lexicographic order.  Zero slots yield the empty tuple; an empty slot
/// yields nothing.
fn each_tuple<'a>(slots: &[&'a [String]], f: &mut dyn FnMut(&[&'a str])) {
    if slots.iter().any(|s| s.is_empty()) {
        return;
    }
    let mut idx = vec![0usize; slots.len()];
    loop {
        let tuple: Vec<&str> = idx
            .iter()
            .zip(slots)
            .map(|(&k, s)| s[k].as_str())
            .collect();
        f(&tuple);
        let mut j = slots.len();
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < slots[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Counts contravariant action tables on the underlying category with the
/// given component sizes: for each morphism a function from the codomain
/// component to the domain component, respecting identities and
/// composition.  This enumeration never constructs an [`Operad`].
pub fn count_presheaf_actions(
    oc: &OperadicCategory,
    sizes: &[usize],
    cap: usize,
) -> Result<u64, EnumerationCap> {
    let cat = oc.cat();
    assert_eq!(sizes.len(), cat.n_objects(), "one size per object");
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for pi in 0..cat.n_morphisms() {
        for x in 0..sizes[cat.cod(pi)] {
            slots.push((pi, x));
        }
    }
    let slot_index: BTreeMap<(usize, usize), usize> = slots
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, k))
        .collect();
    let pairs = cat.composable_pairs();
    let mut table = vec![0usize; slots.len()];
    let mut count = 0u64;
    let mut used = 0usize;
    loop {
        used += 1;
        if used > cap {
            return Err(EnumerationCap { cap });
        }
        let act = |pi: usize, x: usize| table[slot_index[&(pi, x)]];
        let identities_ok = (0..cat.n_objects())
            .all(|c| (0..sizes[c]).all(|x| act(cat.identity_of(c), x) == x));
        let composites_ok = identities_ok
            && pairs.iter().all(|&(outer, inner)| {
                let m = cat.compose(outer, inner).expect("listed as composable");
                (0..sizes[cat.cod(outer)]).all(|x| act(inner, act(outer, x)) == act(m, x))
            });
        if composites_ok {
            count += 1;
        }
        let mut j = slots.len();
        loop {
            if j == 0 {
                return Ok(count);
            }
            j -= 1;
            table[j] += 1;
            if table[j] < sizes[cat.dom(slots[j].0)] {
                break;
            }
            table[j] = 0;
        }
    }
}

/// The operad whose components are all singletons.
pub fn terminal_operad(oc: &OperadicCategory) -> Operad {
    let cat = oc.cat();
    let mut t = Operad::new(cat.n_objects());
    for c in 0..cat.n_objects() {
        t.set_elements(c, &["*"]);
    }
    for u in oc.trivial_objects() {
        t.set_unit(u, "*");
    }
    for phi in 0..cat.n_morphisms() {
        let k = oc.obj_card(cat.cod(phi));
        let ys = vec!["*"; k];
        t.set_mult(phi, "*", &ys, "*");
    }
    t
}

/// Reads a presheaf on a category of cardinality zero as an operad: the
/// components are the presheaf components, there are no units, and every
/// multiplication is a unary action `x . phi`.  Missing or non-functorial
/// action entries surface in [`validate_operad`], not here.
pub fn operad_from_presheaf(oc: &OperadicCategory, x: &Presheaf) -> Operad {
    let cat = oc.cat();
    let mut t = Operad::new(cat.n_objects());
    for c in 0..cat.n_objects() {
        let elems: Vec<&str> = x.carrier().at(c).iter().map(String::as_str).collect();
        t.set_elements(c, &elems);
    }
    for (pi, e, result) in x.action_entries() {
        t.set_mult(pi, e, &[], result);
    }
    t
}

/// Checks that an operad is a monoid: the tables are total and well typed,
/// multiplication is associative across every composable pair, and the
/// unit laws hold along morphisms to trivial objects and identities.
pub fn validate_operad(oc: &OperadicCategory, t: &Operad) -> ValidationReport {
    let cat = oc.cat();
    let mut report = ValidationReport::new();
    if t.n_objects() != cat.n_objects() {
        report.fail(
            "operad-typing",
            "component count differs from the object count",
            vec![t.n_objects().to_string(), cat.n_objects().to_string()],
        );
        return report;
    }

    let trivial: BTreeSet<usize> = oc.trivial_objects().into_iter().collect();
    for &u in &trivial {
        match t.unit(u) {
            Some(e) if t.elements(u).iter().any(|el| el == e) => report.bump("unit-totality", 1),
            Some(e) => report.fail(
                "unit-typing",
                "unit element is outside its component",
                vec![cat.object_label(u).to_string(), e.to_string()],
            ),
            None => report.fail(
                "unit-totality",
                "trivial object has no unit element",
                vec![cat.object_label(u).to_string()],
            ),
        }
    }
    for (u, e) in t.unit_entries() {
        if !trivial.contains(&u) {
            report.fail(
                "unit-typing",
                "unit entry at a non-trivial object",
                vec![cat.object_label(u).to_string(), e.to_string()],
            );
        }
    }

    let mut expected: BTreeMap<String, usize> = BTreeMap::new();
    for phi in 0..cat.n_morphisms() {
        let c = cat.dom(phi);
        let d = cat.cod(phi);
        let k = oc.obj_card(d);
        let slots: Vec<&[String]> = (1..=k)
            .map(|i| t.elements(oc.fibre(phi, i).expect("fibres of a validated category")))
            .collect();
        for x in t.elements(d) {
            each_tuple(&slots, &mut |ys| {
                expected.insert(mult_key(phi, x, ys), c);
            });
        }
    }
    for (key, &c) in &expected {
        match t.mult.get(key) {
            Some(r) if t.elements(c).iter().any(|el| el == r) => report.bump("mult-totality", 1),
            Some(r) => report.fail(
                "mult-typing",
                "multiplication result is outside the domain component",
                vec![key.clone(), r.clone()],
            ),
            None => report.fail(
                "mult-totality",
                "typed input tuple has no multiplication entry",
                vec![key.clone()],
            ),
        }
    }
    for (key, _) in t.mult_entries() {
        if !expected.contains_key(key) {
            report.fail(
                "mult-typing",
                "multiplication entry outside the typed domain",
                vec![key.to_string()],
            );
        }
    }
    if !report.pass() {
        return report;
    }

    for (outer, inner) in cat.composable_pairs() {
        let composite = cat.compose(outer, inner).expect("listed as composable");
        let d = cat.cod(inner);
        let e = cat.cod(outer);
        let kd = oc.obj_card(d);
        let ke = oc.obj_card(e);
        let outer_fibres: Vec<&[String]> = (1..=ke)
            .map(|j| t.elements(oc.fibre(outer, j).expect("fibres of a validated category")))
            .collect();
        let inner_fibres: Vec<&[String]> = (1..=kd)
            .map(|i| t.elements(oc.fibre(inner, i).expect("fibres of a validated category")))
            .collect();
        let restricted: Vec<usize> = (1..=ke)
            .map(|j| {
                oc.fibre_morphism(inner, outer, j)
                    .expect("fibre morphisms of a validated category")
            })
            .collect();
        let blocks = oc.mor_card(outer).fibres();
        for x in t.elements(e) {
            each_tuple(&outer_fibres, &mut |ys| {
                let xy = t.mult(outer, x, ys).expect("totality already checked");
                each_tuple(&inner_fibres, &mut |zs| {
                    let left = t.mult(inner, xy, zs).expect("totality already checked");
                    let ws: Vec<&str> = (0..ke)
                        .map(|j| {
                            let sub: Vec<&str> =
                                blocks.embed(j + 1).iter().map(|&i| zs[i - 1]).collect();
                            t.mult(restricted[j], ys[j], &sub)
                                .expect("totality already checked")
                        })
                        .collect();
                    let right = t.mult(composite, x, &ws).expect("totality already checked");
                    if left == right {
                        report.bump("associativity", 1);
                    } else {
                        report.fail(
                            "associativity",
                            "the two evaluation orders disagree",
                            vec![
                                cat.mor_label(inner).to_string(),
                                cat.mor_label(outer).to_string(),
                                x.to_string(),
                                ys.join(","),
                                zs.join(","),
                            ],
                        );
                    }
                });
            });
        }
    }

    for &u in &trivial {
        let eta = t.unit(u).expect("unit totality already checked");
        for &phi in cat.hom_in(u) {
            for x in t.elements(cat.dom(phi)) {
                let got = t.mult(phi, eta, &[x]).expect("totality already checked");
                if got == x {
                    report.bump("left-unit", 1);
                } else {
                    report.fail(
                        "left-unit",
                        "multiplying into the unit does not return the element",
                        vec![cat.mor_label(phi).to_string(), x.to_string(), got.to_string()],
                    );
                }
            }
        }
    }

    for c in 0..cat.n_objects() {
        let id = cat.identity_of(c);
        let k = oc.obj_card(c);
        let etas: Vec<&str> = (1..=k)
            .map(|i| {
                let f = oc.fibre(id, i).expect("fibres of a validated category");
                t.unit(f).expect("identity fibres are trivial")
            })
            .collect();
        for x in t.elements(c) {
            let got = t.mult(id, x, &etas).expect("totality already checked");
            if got == x {
                report.bump("right-unit", 1);
            } else {
                report.fail(
                    "right-unit",
                    "multiplying with units along the identity does not return the element",
                    vec![
                        cat.object_label(c).to_string(),
                        x.to_string(),
                        got.to_string(),
                    ],
                );
            }
        }
    }

    report
}

/// Counts the operads with the given component sizes by exhausting every
/// unit and multiplication table and filtering through
/// [`validate_operad`].
pub fn enumerate_operads(
    oc: &OperadicCategory,
    sizes: &[usize],
    cap: usize,
) -> Result<u64, EnumerationCap> {
    let cat = oc.cat();
    assert_eq!(sizes.len(), cat.n_objects(), "one size per object");
    let elements: Vec<Vec<String>> = sizes
        .iter()
        .enumerate()
        .map(|(c, &s)| (0..s).map(|k| format!("t{c}e{k}")).collect())
        .collect();
    let mut base = Operad::new(cat.n_objects());
    for c in 0..cat.n_objects() {
        let elems: Vec<&str> = elements[c].iter().map(String::as_str).collect();
        base.set_elements(c, &elems);
    }

    enum Slot {
        Unit(usize),
        Mult(String, usize),
    }
    let mut slots: Vec<(Slot, usize)> = Vec::new();
    for u in oc.trivial_objects() {
        slots.push((Slot::Unit(u), sizes[u]));
    }
    for phi in 0..cat.n_morphisms() {
        let c = cat.dom(phi);
        let d = cat.cod(phi);
        let k = oc.obj_card(d);
        let fibre_slots: Vec<&[String]> = (1..=k)
            .map(|i| {
                elements[oc.fibre(phi, i).expect("fibres of a validated category")].as_slice()
            })
            .collect();
        for x in &elements[d] {
            each_tuple(&fibre_slots, &mut |ys| {
                slots.push((Slot::Mult(mult_key(phi, x, ys), c), sizes[c]));
            });
        }
    }
    if slots.iter().any(|&(_, choices)| choices == 0) {
        return Ok(0);
    }

    let mut table = vec![0usize; slots.len()];
    let mut count = 0u64;
    let mut used = 0usize;
    loop {
        used += 1;
        if used > cap {
            return Err(EnumerationCap { cap });
        }
        let mut candidate = base.clone();
        for (j, (slot, _)) in slots.iter().enumerate() {
            match slot {
                Slot::Unit(u) => candidate.set_unit(*u, elements[*u][table[j]].clone()),
                Slot::Mult(key, c) => {
                    candidate.insert_mult_key(key.clone(), elements[*c][table[j]].clone())
                }
            }
        }
        if validate_operad(oc, &candidate).pass() {
            count += 1;
        }
        let mut j = slots.len();
        loop {
            if j == 0 {
                return Ok(count);
            }
            j -= 1;
            table[j] += 1;
            if table[j] < slots[j].1 {
                break;
            }
            table[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{chain_poset, discrete_zero, finite_ordinals, finite_sets, two_trees};
    use crate::coll::Collection;
    use crate::normal::free_presheaf;

    fn chain_fixture() -> OperadicCategory {
        discrete_zero(&chain_poset(2)).unwrap()
    }

    #[test]
    fn action_tables_are_counted_directly() {
        let oc = chain_fixture();
        assert_eq!(count_presheaf_actions(&oc, &[1, 1], 1000).unwrap(), 1);
        assert_eq!(count_presheaf_actions(&oc, &[2, 1], 1000).unwrap(), 2);
        let oc3 = discrete_zero(&chain_poset(3)).unwrap();
        assert_eq!(count_presheaf_actions(&oc3, &[2, 2, 1], 100_000).unwrap(), 8);
    }

    #[test]
    fn the_terminal_operad_validates_on_small_fixtures() {
        for oc in [finite_sets(2), finite_ordinals(3), two_trees(2, 2)] {
            let report = validate_operad(&oc, &terminal_operad(&oc));
            assert!(report.pass(), "{}", report.render());
            assert!(report.stats()["associativity"] > 0);
        }
    }

    #[test]
    fn a_presheaf_on_a_zero_cardinality_category_is_an_operad() {
        let oc = chain_fixture();
        let cat = oc.cat();
        let x = free_presheaf(&oc, &[(1, "q".into())]).unwrap();
        assert_eq!(
            x.act(cat.mor("p0->p1").unwrap(), "q@p1->p1"),
            Some("q@p0->p1")
        );
        let t = operad_from_presheaf(&oc, &x);
        let report = validate_operad(&oc, &t);
        assert!(report.pass(), "{}", report.render());
        assert!(report.stats().get("left-unit").is_none());
    }

    #[test]
    fn a_non_functorial_action_fails_the_right_unit_law() {
        let oc = chain_fixture();
        let cat = oc.cat();
        let mut carrier = Collection::new();
        carrier.set(0, vec!["a0".into(), "a1".into()]);
        carrier.set(1, vec!["q".into()]);
        let mut x = Presheaf::new(carrier);
        x.set_action(cat.identity_of(0), "a0", "a1");
        x.set_action(cat.identity_of(0), "a1", "a0");
        x.set_action(cat.identity_of(1), "q", "q");
        x.set_action(cat.mor("p0->p1").unwrap(), "q", "a0");
        let t = operad_from_presheaf(&oc, &x);
        let report = validate_operad(&oc, &t);
        assert!(!report.pass());
        let failure = &report.failures_for("right-unit")[0];
        assert_eq!(failure.witness, vec!["p0", "a0", "a1"]);
    }

    #[test]
    fn a_redirected_multiplication_entry_breaks_a_law() {
        let oc = discrete_zero(&chain_poset(3)).unwrap();
        let cat = oc.cat();
        let mut t = Operad::new(cat.n_objects());
        t.set_elements(0, &["a0", "a1"]);
        t.set_elements(1, &["b"]);
        t.set_elements(2, &["c"]);
        for c in 0..3 {
            for e in t.elements(c).to_vec() {
                t.set_mult(cat.identity_of(c), &e, &[], e.clone());
            }
        }
        t.set_mult(cat.mor("p1->p2").unwrap(), "c", &[], "b");
        t.set_mult(cat.mor("p0->p1").unwrap(), "b", &[], "a0");
        t.set_mult(cat.mor("p0->p2").unwrap(), "c", &[], "a0");
        assert!(validate_operad(&oc, &t).pass());

        t.set_mult(cat.mor("p0->p2").unwrap(), "c", &[], "a1");
        let report = validate_operad(&oc, &t);
        assert!(!report.pass());
        let failure = &report.failures_for("associativity")[0];
        assert_eq!(failure.witness[0], "p0->p1");
        assert_eq!(failure.witness[1], "p1->p2");
    }

    #[test]
    fn operad_tables_are_counted_exhaustively() {
        let oc = chain_fixture();
        assert_eq!(enumerate_operads(&oc, &[1, 1], 1000).unwrap(), 1);
        assert_eq!(enumerate_operads(&oc, &[2, 1], 1000).unwrap(), 2);
        let point = crate::builders::adjoin_terminal(&chain_poset(0)).unwrap();
        assert_eq!(enumerate_operads(&point, &[1], 1000).unwrap(), 1);
    }

    #[test]
    fn both_counters_agree_on_zero_cardinality_categories() {
        let oc3 = discrete_zero(&chain_poset(3)).unwrap();
        for sizes in [vec![1, 1, 1], vec![2, 1, 1], vec![2, 2, 1]] {
            let direct = count_presheaf_actions(&oc3, &sizes, 1_000_000).unwrap();
            let filtered = enumerate_operads(&oc3, &sizes, 1_000_000).unwrap();
            assert_eq!(direct, filtered, "sizes {sizes:?}");
        }
    }

    #[test]
    fn the_enumeration_respects_its_cap() {
        let oc = chain_fixture();
        let err = enumerate_operads(&oc, &[2, 2], 3).unwrap_err();
        assert_eq!(err.cap, 3);
        assert!(count_presheaf_actions(&oc, &[2, 2], 3).is_err());
    }

    #[test]
    fn relabeling_elements_preserves_the_verdict() {
        let oc = chain_fixture();
        let cat = oc.cat();
        let build = |a: &str, b: &str, q_f: &str| {
            let mut t = Operad::new(2);
            t.set_elements(0, &[a, b]);
            t.set_elements(1, &["q"]);
            t.set_mult(cat.identity_of(0), a, &[], a);
            t.set_mult(cat.identity_of(0), b, &[], a);
            t.set_mult(cat.identity_of(1), "q", &[], "q");
            t.set_mult(cat.mor("p0->p1").unwrap(), "q", &[], q_f);
            t
        };
        let broken = validate_operad(&oc, &build("x", "y", "x"));
        let renamed = validate_operad(&oc, &build("u0", "v1", "u0"));
        assert!(!broken.pass());
        assert!(!renamed.pass());
        assert_eq!(
            broken.failures_for("right-unit").len(),
            renamed.failures_for("right-unit").len()
        );
    }
}
