//! Finite categories presented by explicit tables.
//!
//! [`FinCategory`] is the raw, label-level presentation: lists of objects and
//! morphisms plus identity and composition tables.  It is deliberately
//! permissive so that [`validate_category`] can report malformed references
//! as ordinary failures.  [`Category`] is the resolved, index-level form used
//! by all computations; resolving fails only on problems that make the data
//! unrepresentable (empty, duplicate, or dangling labels).
//!
//! Identity of objects and morphisms is label equality, and the enumeration
//! order everywhere is the order of the defining lists.

use crate::report::ValidationReport;
use crate::uf::UnionFind;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismRecord {
    pub label: String,
    pub dom: String,
    pub cod: String,
}

/// Raw tables presenting a finite category.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FinCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismRecord>,
    /// Pairs `(object, identity morphism)`.
    pub identities: Vec<(String, String)>,
    /// Triples `(outer, inner, composite)` meaning `outer . inner = composite`.
    pub composition: Vec<(String, String, String)>,
}

impl FinCategory {
    pub fn morphism(&self, label: &str) -> Option<&MorphismRecord> {
        self.morphisms.iter().find(|m| m.label == label)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("empty {kind} label")]
    EmptyLabel { kind: &'static str },
    #[error("duplicate {kind} label {label:?}")]
    DuplicateLabel { kind: &'static str, label: String },
    #[error("unknown object {label:?} referenced by {context}")]
    UnknownObject { label: String, context: String },
    #[error("unknown morphism {label:?} referenced by {context}")]
    UnknownMorphism { label: String, context: String },
}

/// Resolved, index-level category.  Identity and composition tables may be
/// partial here; totality and the category laws are the business of
/// [`validate_category`].
#[derive(Clone, Debug)]
pub struct Category {
    object_labels: Vec<String>,
    mor_labels: Vec<String>,
    dom: Vec<usize>,
    cod: Vec<usize>,
    identity: Vec<Option<usize>>,
    compose: HashMap<(usize, usize), usize>,
    hom_out: Vec<Vec<usize>>,
    hom_in: Vec<Vec<usize>>,
    obj_index: HashMap<String, usize>,
    mor_index: HashMap<String, usize>,
}

impl Category {
    pub fn resolve(raw: &FinCategory) -> Result<Self, ResolveError> {
        let mut obj_index = HashMap::new();
        for label in &raw.objects {
            if label.is_empty() {
                return Err(ResolveError::EmptyLabel { kind: "object" });
            }
            if obj_index.insert(label.clone(), obj_index.len()).is_some() {
                return Err(ResolveError::DuplicateLabel {
                    kind: "object",
                    label: label.clone(),
                });
            }
        }
        let mut mor_index = HashMap::new();
        for m in &raw.morphisms {
            if m.label.is_empty() {
                return Err(ResolveError::EmptyLabel { kind: "morphism" });
            }
            if mor_index.insert(m.label.clone(), mor_index.len()).is_some() {
                return Err(ResolveError::DuplicateLabel {
                    kind: "morphism",
                    label: m.label.clone(),
                });
            }
        }
        let obj = |label: &str, context: &dyn Fn() -> String| {
            obj_index
                .get(label)
                .copied()
                .ok_or_else(|| ResolveError::UnknownObject {
                    label: label.to_string(),
                    context: context(),
                })
        };
        let mor = |label: &str, context: &dyn Fn() -> String| {
            mor_index
                .get(label)
                .copied()
                .ok_or_else(|| ResolveError::UnknownMorphism {
                    label: label.to_string(),
                    context: context(),
                })
        };

        let mut dom = Vec::with_capacity(raw.morphisms.len());
        let mut cod = Vec::with_capacity(raw.morphisms.len());
        for m in &raw.morphisms {
            let ctx = || format!("morphism {:?}", m.label);
            dom.push(obj(&m.dom, &ctx)?);
            cod.push(obj(&m.cod, &ctx)?);
        }

        let mut identity = vec![None; raw.objects.len()];
        for (c, id) in &raw.identities {
            let ctx = || format!("identity entry for {c:?}");
            let ci = obj(c, &ctx)?;
            let mi = mor(id, &ctx)?;
            identity[ci].get_or_insert(mi);
        }

        let mut compose = HashMap::new();
        for (g, f, gf) in &raw.composition {
            let ctx = || format!("composition entry {g:?} . {f:?}");
            let gi = mor(g, &ctx)?;
            let fi = mor(f, &ctx)?;
            let ci = mor(gf, &ctx)?;
            compose.entry((gi, fi)).or_insert(ci);
        }

        let mut hom_out = vec![Vec::new(); raw.objects.len()];
        let mut hom_in = vec![Vec::new(); raw.objects.len()];
        for m in 0..raw.morphisms.len() {
            hom_out[dom[m]].push(m);
            hom_in[cod[m]].push(m);
        }

        Ok(Category {
            object_labels: raw.objects.clone(),
            mor_labels: raw.morphisms.iter().map(|m| m.label.clone()).collect(),
            dom,
            cod,
            identity,
            compose,
            hom_out,
            hom_in,
            obj_index,
            mor_index,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.object_labels.len()
    }

    pub fn n_morphisms(&self) -> usize {
        self.mor_labels.len()
    }

    pub fn object_label(&self, c: usize) -> &str {
        &self.object_labels[c]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.object_labels
    }

    pub fn mor_label(&self, m: usize) -> &str {
        &self.mor_labels[m]
    }

    pub fn dom(&self, m: usize) -> usize {
        self.dom[m]
    }

    pub fn cod(&self, m: usize) -> usize {
        self.cod[m]
    }

    pub fn object(&self, label: &str) -> Option<usize> {
        self.obj_index.get(label).copied()
    }

    pub fn mor(&self, label: &str) -> Option<usize> {
        self.mor_index.get(label).copied()
    }

    pub fn identity(&self, c: usize) -> Option<usize> {
        self.identity[c]
    }

    /// Identity of `c` in a category whose identity table is known total.
    pub fn identity_of(&self, c: usize) -> usize {
        self.identity[c].expect("identity table is total")
    }

    pub fn is_identity(&self, m: usize) -> bool {
        self.identity[self.dom[m]] == Some(m)
    }

    /// `outer . inner`, when the table has an entry.
    pub fn compose(&self, outer: usize, inner: usize) -> Option<usize> {
        self.compose.get(&(outer, inner)).copied()
    }

    pub fn hom_out(&self, c: usize) -> &[usize] {
        &self.hom_out[c]
    }

    pub fn hom_in(&self, c: usize) -> &[usize] {
        &self.hom_in[c]
    }

    pub fn hom(&self, c: usize, d: usize) -> Vec<usize> {
        self.hom_out[c]
            .iter()
            .copied()
            .filter(|&m| self.cod[m] == d)
            .collect()
    }

    /// Composable pairs `(outer, inner)` in enumeration order.
    pub fn composable_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for outer in 0..self.n_morphisms() {
            for &inner in &self.hom_in[self.dom[outer]] {
                pairs.push((outer, inner));
            }
        }
        pairs
    }

    /// Regenerates the raw tables, with identity entries in object order and
    /// composition entries ordered by (outer, inner).
    pub fn raw(&self) -> FinCategory {
        let morphisms = (0..self.n_morphisms())
            .map(|m| MorphismRecord {
                label: self.mor_labels[m].clone(),
                dom: self.object_labels[self.dom[m]].clone(),
                cod: self.object_labels[self.cod[m]].clone(),
            })
            .collect();
        let identities = (0..self.n_objects())
            .filter_map(|c| {
                self.identity[c]
                    .map(|m| (self.object_labels[c].clone(), self.mor_labels[m].clone()))
            })
            .collect();
        let mut keys: Vec<(usize, usize)> = self.compose.keys().copied().collect();
        keys.sort_unstable();
        let composition = keys
            .into_iter()
            .map(|(g, f)| {
                (
                    self.mor_labels[g].clone(),
                    self.mor_labels[f].clone(),
                    self.mor_labels[self.compose[&(g, f)]].clone(),
                )
            })
            .collect();
        FinCategory {
            objects: self.object_labels.clone(),
            morphisms,
            identities,
            composition,
        }
    }
}

/// Checks the category laws on raw tables: label sanity, reference sanity,
/// total and well-typed identities, composition defined exactly on
/// composable pairs, the identity laws, and associativity.  Malformed
/// references are reported as failures, never thrown.
pub fn validate_category(raw: &FinCategory) -> ValidationReport {
    let mut r = ValidationReport::new();

    let mut obj_index: HashMap<&str, usize> = HashMap::new();
    for (i, label) in raw.objects.iter().enumerate() {
        if label.is_empty() {
            r.fail("object-labels", "empty object label", vec![format!("#{i}")]);
            continue;
        }
        if obj_index.insert(label, i).is_some() {
            r.fail(
                "object-labels",
                "duplicate object label",
                vec![label.clone()],
            );
        }
    }
    let mut mor_index: HashMap<&str, usize> = HashMap::new();
    for (i, m) in raw.morphisms.iter().enumerate() {
        if m.label.is_empty() {
            r.fail(
                "morphism-labels",
                "empty morphism label",
                vec![format!("#{i}")],
            );
            continue;
        }
        if mor_index.insert(&m.label, i).is_some() {
            r.fail(
                "morphism-labels",
                "duplicate morphism label",
                vec![m.label.clone()],
            );
        }
    }

    for m in &raw.morphisms {
        for (role, label) in [("dom", &m.dom), ("cod", &m.cod)] {
            if !obj_index.contains_key(label.as_str()) {
                r.fail(
                    "morphism-refs",
                    format!("unknown {role} object of morphism"),
                    vec![m.label.clone(), label.clone()],
                );
            }
        }
    }

    // Identity table: exactly one well-typed entry per object.
    let mut identity: HashMap<usize, usize> = HashMap::new();
    for (c, id) in &raw.identities {
        let (ci, ii) = match (obj_index.get(c.as_str()), mor_index.get(id.as_str())) {
            (Some(&ci), Some(&ii)) => (ci, ii),
            _ => {
                r.fail(
                    "identity-table",
                    "identity entry references unknown label",
                    vec![c.clone(), id.clone()],
                );
                continue;
            }
        };
        if identity.insert(ci, ii).is_some() {
            r.fail(
                "identity-table",
                "more than one identity entry for object",
                vec![c.clone()],
            );
        }
        let rec = &raw.morphisms[ii];
        if rec.dom != *c || rec.cod != *c {
            r.fail(
                "identity-table",
                "identity morphism is not an endomorphism of its object",
                vec![c.clone(), id.clone()],
            );
        }
    }
    for (label, &ci) in obj_index.iter() {
        if !identity.contains_key(&ci) {
            r.fail(
                "identity-table",
                "object has no identity entry",
                vec![(*label).to_string()],
            );
        }
    }

    // Composition table: defined exactly on composable pairs, well-typed.
    let dom_idx: Vec<Option<usize>> = raw
        .morphisms
        .iter()
        .map(|m| obj_index.get(m.dom.as_str()).copied())
        .collect();
    let cod_idx: Vec<Option<usize>> = raw
        .morphisms
        .iter()
        .map(|m| obj_index.get(m.cod.as_str()).copied())
        .collect();
    let dom_of = |i: usize| dom_idx[i];
    let cod_of = |i: usize| cod_idx[i];
    let mut compose: HashMap<(usize, usize), usize> = HashMap::new();
    for (g, f, gf) in &raw.composition {
        let (gi, fi, ci) = match (
            mor_index.get(g.as_str()),
            mor_index.get(f.as_str()),
            mor_index.get(gf.as_str()),
        ) {
            (Some(&gi), Some(&fi), Some(&ci)) => (gi, fi, ci),
            _ => {
                r.fail(
                    "composition-table",
                    "composition entry references unknown morphism",
                    vec![g.clone(), f.clone(), gf.clone()],
                );
                continue;
            }
        };
        if compose.insert((gi, fi), ci).is_some() {
            r.fail(
                "composition-table",
                "duplicate composition entry",
                vec![g.clone(), f.clone()],
            );
        }
        match (dom_of(gi), cod_of(fi)) {
            (Some(a), Some(b)) if a == b => {}
            _ => {
                r.fail(
                    "composition-table",
                    "composition entry for a non-composable pair",
                    vec![g.clone(), f.clone()],
                );
                continue;
            }
        }
        if dom_of(ci) != dom_of(fi) || cod_of(ci) != cod_of(gi) {
            r.fail(
                "composition-table",
                "composite has wrong domain or codomain",
                vec![g.clone(), f.clone(), gf.clone()],
            );
        }
    }
    let n = raw.morphisms.len();
    let n_obj = raw.objects.len();
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    let mut in_of: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    for m in 0..n {
        if let Some(c) = dom_of(m) {
            out_of[c].push(m);
        }
        if let Some(c) = cod_of(m) {
            in_of[c].push(m);
        }
    }
    let lut = {
        let mut lut = vec![u32::MAX; n * n];
        for (&(g, f), &gf) in &compose {
            lut[g * n + f] = gf as u32;
        }
        lut
    };
    let lut_get = |g: usize, f: usize| -> Option<usize> {
        let v = lut[g * n + f];
        (v != u32::MAX).then_some(v as usize)
    };
    let mut pairs = 0u64;
    for c in 0..n_obj {
        for &g in &out_of[c] {
            for &f in &in_of[c] {
                pairs += 1;
                if lut_get(g, f).is_none() {
                    r.fail(
                        "composition-table",
                        "composable pair has no composition entry",
                        vec![
                            raw.morphisms[g].label.clone(),
                            raw.morphisms[f].label.clone(),
                        ],
                    );
                }
            }
        }
    }
    r.set_stat("composable-pairs", pairs);

    // Identity laws.
    for f in 0..n {
        let (Some(df), Some(cf)) = (dom_of(f), cod_of(f)) else {
            continue;
        };
        if let Some(&idd) = identity.get(&df) {
            if lut_get(f, idd) != Some(f) {
                r.fail(
                    "identity-law",
                    "composing with the domain identity does not return the morphism",
                    vec![raw.morphisms[f].label.clone()],
                );
            }
        }
        if let Some(&idc) = identity.get(&cf) {
            if lut_get(idc, f) != Some(f) {
                r.fail(
                    "identity-law",
                    "composing with the codomain identity does not return the morphism",
                    vec![raw.morphisms[f].label.clone()],
                );
            }
        }
    }

    // Associativity.
    let mut triples = 0u64;
    for g in 0..n {
        let (Some(dg), Some(cg)) = (dom_of(g), cod_of(g)) else {
            continue;
        };
        for &h in &out_of[cg] {
            let hg = lut_get(h, g);
            for &f in &in_of[dg] {
                triples += 1;
                let left = hg.and_then(|hg| lut_get(hg, f));
                let right = lut_get(g, f).and_then(|gf| lut_get(h, gf));
                match (left, right) {
                    (Some(a), Some(b)) if a == b => {}
                    (None, _) | (_, None) => {} // missing entries already reported
                    _ => {
                        r.fail(
                            "associativity",
                            "the two ways of composing a triple disagree",
                            vec![
                                raw.morphisms[h].label.clone(),
                                raw.morphisms[g].label.clone(),
                                raw.morphisms[f].label.clone(),
                            ],
                        );
                    }
                }
            }
        }
    }
    r.set_stat("composable-triples", triples);
    r
}

/// Finest partition of the objects closed under "there is a morphism
/// between".  Components are ordered by their first object, members in file
/// order.
pub fn connected_components(raw: &FinCategory) -> Vec<Vec<String>> {
    let mut obj_index: HashMap<&str, usize> = HashMap::new();
    for (i, label) in raw.objects.iter().enumerate() {
        obj_index.entry(label).or_insert(i);
    }
    let mut uf = UnionFind::new(raw.objects.len());
    for m in &raw.morphisms {
        if let (Some(&a), Some(&b)) = (obj_index.get(m.dom.as_str()), obj_index.get(m.cod.as_str()))
        {
            uf.union(a, b);
        }
    }
    uf.classes()
        .into_iter()
        .map(|class| class.into_iter().map(|c| raw.objects[c].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The arrow category: two objects, one non-identity morphism.
    fn arrow() -> FinCategory {
        FinCategory {
            objects: vec!["a".into(), "b".into()],
            morphisms: vec![
                MorphismRecord {
                    label: "id_a".into(),
                    dom: "a".into(),
                    cod: "a".into(),
                },
                MorphismRecord {
                    label: "id_b".into(),
                    dom: "b".into(),
                    cod: "b".into(),
                },
                MorphismRecord {
                    label: "f".into(),
                    dom: "a".into(),
                    cod: "b".into(),
                },
            ],
            identities: vec![("a".into(), "id_a".into()), ("b".into(), "id_b".into())],
            composition: vec![
                ("id_a".into(), "id_a".into(), "id_a".into()),
                ("id_b".into(), "id_b".into(), "id_b".into()),
                ("f".into(), "id_a".into(), "f".into()),
                ("id_b".into(), "f".into(), "f".into()),
            ],
        }
    }

    #[test]
    fn the_arrow_category_validates() {
        let r = validate_category(&arrow());
        assert!(r.pass(), "{}", r.render());
        assert_eq!(r.stats()["composable-pairs"], 4);
    }

    #[test]
    fn empty_category_validates() {
        let r = validate_category(&FinCategory::default());
        assert!(r.pass());
    }

    #[test]
    fn unknown_labels_are_failures_not_panics() {
        let mut c = arrow();
        c.morphisms.push(MorphismRecord {
            label: "g".into(),
            dom: "a".into(),
            cod: "zzz".into(),
        });
        let r = validate_category(&c);
        assert!(!r.pass());
        assert!(!r.failures_for("morphism-refs").is_empty());
    }

    #[test]
    fn missing_identity_is_reported() {
        let mut c = arrow();
        c.identities.pop();
        let r = validate_category(&c);
        assert!(r
            .failures()
            .iter()
            .any(|f| f.check == "identity-table" && f.witness == vec!["b".to_string()]));
    }

    #[test]
    fn composite_with_wrong_domain_is_reported_with_the_pair() {
        let mut c = arrow();
        // Point id_b . f at id_b, whose domain is wrong.
        c.composition.retain(|(g, f, _)| !(g == "id_b" && f == "f"));
        c.composition
            .push(("id_b".into(), "f".into(), "id_b".into()));
        let r = validate_category(&c);
        let fails = r.failures_for("composition-table");
        assert!(fails
            .iter()
            .any(|f| f.witness == vec!["id_b".to_string(), "f".to_string(), "id_b".to_string()]));
    }

    #[test]
    fn missing_composition_entry_is_reported() {
        let mut c = arrow();
        c.composition.retain(|(g, f, _)| !(g == "f" && f == "id_a"));
        let r = validate_category(&c);
        assert!(r
            .failures_for("composition-table")
            .iter()
            .any(|f| f.message.contains("no composition entry")));
        // And the identity law fails for the same reason.
        assert!(!r.failures_for("identity-law").is_empty());
    }

    #[test]
    fn resolve_builds_lookup_structures() {
        let cat = Category::resolve(&arrow()).unwrap();
        assert_eq!(cat.n_objects(), 2);
        assert_eq!(cat.n_morphisms(), 3);
        let f = cat.mor("f").unwrap();
        assert_eq!(cat.dom(f), cat.object("a").unwrap());
        assert_eq!(cat.cod(f), cat.object("b").unwrap());
        assert_eq!(cat.compose(cat.identity_of(1), f), Some(f));
        assert_eq!(cat.hom(0, 1), vec![f]);
        assert_eq!(cat.composable_pairs().len(), 4);
    }

    #[test]
    fn resolve_rejects_dangling_references() {
        let mut c = arrow();
        c.composition.push(("f".into(), "nope".into(), "f".into()));
        assert!(matches!(
            Category::resolve(&c),
            Err(ResolveError::UnknownMorphism { .. })
        ));
    }

    #[test]
    fn raw_round_trips_through_resolve() {
        let cat = Category::resolve(&arrow()).unwrap();
        let raw = cat.raw();
        let again = Category::resolve(&raw).unwrap();
        assert_eq!(raw, again.raw());
        assert!(validate_category(&raw).pass());
    }

    #[test]
    fn components_of_the_arrow_category() {
        assert_eq!(
            connected_components(&arrow()),
            vec![vec!["a".to_string(), "b".to_string()]]
        );
        let disjoint = FinCategory {
            objects: vec!["x".into(), "y".into()],
            morphisms: vec![],
            identities: vec![],
            composition: vec![],
        };
        assert_eq!(connected_components(&disjoint).len(), 2);
    }
}
