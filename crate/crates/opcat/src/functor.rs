//! Functors between operadic categories, given as label tables.

use crate::fin::FinFunction;
use crate::operadic::OperadicCategory;
use crate::report::ValidationReport;

/// A candidate functor: object and morphism assignments by label.
#[derive(Clone, Debug, Default)]
pub struct OperadicFunctorData {
    pub object_map: Vec<(String, String)>,
    pub morphism_map: Vec<(String, String)>,
}

impl OperadicFunctorData {
    pub fn new(
        object_map: Vec<(String, String)>,
        morphism_map: Vec<(String, String)>,
    ) -> Self {
        OperadicFunctorData {
            object_map,
            morphism_map,
        }
    }
}

/// Checks that the assignment is a functor that strictly preserves
/// cardinalities, fibres, and fibre morphisms, and sends trivial objects to
/// trivial objects.  Malformed data (unknown labels, duplicates, missing
/// assignments) is reported as failures, not errors.
pub fn validate_functor(
    src: &OperadicCategory,
    dst: &OperadicCategory,
    data: &OperadicFunctorData,
) -> ValidationReport {
    let mut r = ValidationReport::new();
    let scat = src.cat();
    let dcat = dst.cat();

    let mut omap: Vec<Option<usize>> = vec![None; scat.n_objects()];
    for (from, to) in &data.object_map {
        let Some(c) = scat.object(from) else {
            r.fail("functor-data", "unknown source object", vec![from.clone()]);
            continue;
        };
        let Some(d) = dcat.object(to) else {
            r.fail("functor-data", "unknown target object", vec![to.clone()]);
            continue;
        };
        if omap[c].is_some() {
            r.fail("functor-data", "object mapped twice", vec![from.clone()]);
            continue;
        }
        omap[c] = Some(d);
    }
    let mut mmap: Vec<Option<usize>> = vec![None; scat.n_morphisms()];
    for (from, to) in &data.morphism_map {
        let Some(m) = scat.mor(from) else {
            r.fail("functor-data", "unknown source morphism", vec![from.clone()]);
            continue;
        };
        let Some(n) = dcat.mor(to) else {
            r.fail("functor-data", "unknown target morphism", vec![to.clone()]);
            continue;
        };
        if mmap[m].is_some() {
            r.fail("functor-data", "morphism mapped twice", vec![from.clone()]);
            continue;
        }
        mmap[m] = Some(n);
    }
    for c in 0..scat.n_objects() {
        if omap[c].is_none() {
            r.fail(
                "functor-data",
                "object not mapped",
                vec![scat.object_label(c).to_string()],
            );
        }
    }
    for m in 0..scat.n_morphisms() {
        if mmap[m].is_none() {
            r.fail(
                "functor-data",
                "morphism not mapped",
                vec![scat.mor_label(m).to_string()],
            );
        }
    }

    let slabel = |m: usize| scat.mor_label(m).to_string();
    let solabel = |c: usize| scat.object_label(c).to_string();

    for m in 0..scat.n_morphisms() {
        let Some(fm) = mmap[m] else { continue };
        if omap[scat.dom(m)] != Some(dcat.dom(fm)) || omap[scat.cod(m)] != Some(dcat.cod(fm)) {
            r.fail(
                "functor-typing",
                "image morphism has the wrong endpoints",
                vec![slabel(m), dcat.mor_label(fm).to_string()],
            );
        }
    }

    for c in 0..scat.n_objects() {
        let (Some(fc), Some(idc)) = (omap[c], scat.identity(c)) else {
            continue;
        };
        if mmap[idc] != dcat.identity(fc) {
            r.fail(
                "functor-identities",
                "identity not sent to the identity of the image",
                vec![solabel(c)],
            );
        }
    }

    for (outer, inner) in scat.composable_pairs() {
        let Some(composite) = scat.compose(outer, inner) else {
            continue;
        };
        let (Some(fo), Some(fi)) = (mmap[outer], mmap[inner]) else {
            continue;
        };
        if dcat.compose(fo, fi) != mmap[composite] {
            r.fail(
                "functor-composition",
                "composite not preserved",
                vec![slabel(outer), slabel(inner)],
            );
        }
    }

    for c in 0..scat.n_objects() {
        let Some(fc) = omap[c] else { continue };
        if src.obj_card(c) != dst.obj_card(fc) {
            r.fail(
                "functor-cardinality",
                "object cardinality not preserved",
                vec![solabel(c)],
            );
        }
    }
    for m in 0..scat.n_morphisms() {
        let Some(fm) = mmap[m] else { continue };
        if src.mor_card(m).values() != dst.mor_card(fm).values() {
            r.fail(
                "functor-cardinality",
                "cardinality map not preserved",
                vec![slabel(m)],
            );
        }
    }

    for psi in 0..scat.n_morphisms() {
        let Some(fpsi) = mmap[psi] else { continue };
        for i in 1..=src.obj_card(scat.cod(psi)) {
            let Some(u) = src.fibre(psi, i) else { continue };
            if omap[u] != dst.fibre(fpsi, i) {
                r.fail(
                    "functor-fibres",
                    format!("fibre at index {i} not preserved"),
                    vec![slabel(psi), solabel(u)],
                );
            }
        }
    }

    let preserves_card = |m: &FinFunction, n: &FinFunction| m.values() == n.values();
    for (psi, phi) in scat.composable_pairs() {
        let (Some(fpsi), Some(fphi)) = (mmap[psi], mmap[phi]) else {
            continue;
        };
        if !preserves_card(src.mor_card(psi), dst.mor_card(fpsi)) {
            continue;
        }
        for i in 1..=src.obj_card(scat.cod(psi)) {
            let Some(m) = src.fibre_morphism(phi, psi, i) else {
                continue;
            };
            if mmap[m] != dst.fibre_morphism(fphi, fpsi, i) {
                r.fail(
                    "functor-fibre-morphisms",
                    format!("fibre morphism at index {i} not preserved"),
                    vec![slabel(psi), slabel(phi), slabel(m)],
                );
            }
        }
    }

    for u in 0..scat.n_objects() {
        if !src.is_trivial(u) {
            continue;
        }
        let Some(fu) = omap[u] else { continue };
        if !dst.is_trivial(fu) {
            r.fail(
                "functor-trivial",
                "trivial object sent to a non-trivial object",
                vec![solabel(u), dcat.object_label(fu).to_string()],
            );
        }
    }

    r
}

/// The assignment sending every object to its cardinality and every
/// morphism to its cardinality map, read as labels of a finite-sets
/// category truncated at or beyond the source's largest cardinality.  It
/// is strict for any validated source, since the fibre axioms say exactly
/// that cardinalities commute with fibres.
pub fn cardinality_functor_data(src: &OperadicCategory) -> OperadicFunctorData {
    let cat = src.cat();
    OperadicFunctorData::new(
        (0..cat.n_objects())
            .map(|c| (cat.object_label(c).to_string(), src.obj_card(c).to_string()))
            .collect(),
        (0..cat.n_morphisms())
            .map(|m| (cat.mor_label(m).to_string(), src.mor_card(m).to_string()))
            .collect(),
    )
}

/// The identity-on-labels assignment from `src` into any category that uses
/// the same labels, such as a larger truncation of the same family.
pub fn inclusion_data(src: &OperadicCategory) -> OperadicFunctorData {
    let cat = src.cat();
    OperadicFunctorData::new(
        cat.object_labels()
            .iter()
            .map(|l| (l.clone(), l.clone()))
            .collect(),
        (0..cat.n_morphisms())
            .map(|m| (cat.mor_label(m).to_string(), cat.mor_label(m).to_string()))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{finite_ordinals, finite_sets};

    #[test]
    fn identity_functor_passes() {
        let s2 = finite_sets(2);
        let report = validate_functor(&s2, &s2, &inclusion_data(&s2));
        assert!(report.pass(), "{}", report.render());
    }

    #[test]
    fn order_forgetting_inclusion_passes() {
        let p2 = finite_ordinals(2);
        let s2 = finite_sets(2);
        let report = validate_functor(&p2, &s2, &inclusion_data(&p2));
        assert!(report.pass(), "{}", report.render());
    }

    #[test]
    fn broken_morphism_map_fails() {
        let p2 = finite_ordinals(2);
        let s2 = finite_sets(2);
        let mut data = inclusion_data(&p2);
        for entry in &mut data.morphism_map {
            if entry.0 == "2>2[1 2]" {
                entry.1 = "2>2[2 1]".to_string();
            }
        }
        let report = validate_functor(&p2, &s2, &data);
        assert!(!report.pass());
        assert!(!report.failures_for("functor-identities").is_empty());
        assert!(!report.failures_for("functor-cardinality").is_empty());
    }

    #[test]
    fn non_total_data_is_reported() {
        let s2 = finite_sets(2);
        let mut data = inclusion_data(&s2);
        data.object_map.pop();
        data.morphism_map.remove(0);
        let report = validate_functor(&s2, &s2, &data);
        assert!(!report.pass());
        assert!(report
            .failures_for("functor-data")
            .iter()
            .any(|f| f.message.contains("not mapped")));
    }
}
