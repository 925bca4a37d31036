//! Operadic categories as explicit data.
//!
//! An [`OperadicCategory`] is a finite category equipped with a cardinality
//! for every object, a finite function between cardinalities for every
//! morphism, a fibre object for every morphism and codomain index, and a
//! fibre morphism for every composable pair and index.  Fibres of a morphism
//! `psi : c -> d` are indexed by `1..=card(d)`; for a composable pair the
//! table entry at `(outer psi, inner phi)` lists, per index, the morphism
//! induced by `phi` between the fibres of `psi . phi` and of `psi`.
//!
//! Construction resolves labels and enforces table shapes; all mathematical
//! laws are checked by [`validate_operadic`], which reports failures with
//! labelled witnesses instead of throwing.

use crate::cat::{Category, FinCategory, ResolveError, validate_category};
use crate::fin::{FinError, FinFunction, fibre_restrict};
use crate::report::ValidationReport;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error("expected {expected} object cardinalities, got {got}")]
    CardsLength { expected: usize, got: usize },
    #[error("expected {expected} cardinality maps, got {got}")]
    CardMapsLength { expected: usize, got: usize },
    #[error("cardinality map of {morphism:?} has {got} values but its domain has cardinality {expected}")]
    CardMapShape {
        morphism: String,
        expected: usize,
        got: usize,
    },
    #[error("cardinality map of {morphism:?}: {source}")]
    CardMapValue {
        morphism: String,
        source: FinError,
    },
    #[error("{table} entry references unknown morphism {label:?}")]
    UnknownMorphism { table: &'static str, label: String },
    #[error("fibre entry of {morphism:?} references unknown object {label:?}")]
    UnknownFibreObject { morphism: String, label: String },
    #[error("duplicate {table} entry for {key}")]
    DuplicateEntry { table: &'static str, key: String },
    #[error("fibre list of {morphism:?} has length {got}, expected {expected}")]
    FibreShape {
        morphism: String,
        expected: usize,
        got: usize,
    },
    #[error("fibre morphism list of ({outer:?}, {inner:?}) has length {got}, expected {expected}")]
    FibreMorShape {
        outer: String,
        inner: String,
        expected: usize,
        got: usize,
    },
}

/// A finite operadic category, fully resolved.
#[derive(Clone, Debug)]
pub struct OperadicCategory {
    cat: Category,
    obj_card: Vec<usize>,
    mor_card: Vec<FinFunction>,
    fibres: HashMap<usize, Vec<usize>>,
    fibre_mors: HashMap<(usize, usize), Vec<usize>>,
    trivial: Vec<bool>,
}

impl OperadicCategory {
    /// Builds from label-level tables.
    ///
    /// `cards` and `card_maps` run parallel to the object and morphism lists
    /// of `base`.  `fibres` maps a morphism label to its fibre objects (one
    /// per codomain index); `fibre_morphisms` maps `(outer, inner)` labels to
    /// the induced morphisms (one per codomain index of the outer morphism).
    /// Shapes and label references are enforced here; laws are not.
    pub fn new(
        base: &FinCategory,
        cards: &[usize],
        card_maps: &[Vec<usize>],
        fibres: &[(String, Vec<String>)],
        fibre_morphisms: &[(String, String, Vec<String>)],
    ) -> Result<Self, BuildError> {
        let cat = Category::resolve(base)?;
        if cards.len() != cat.n_objects() {
            return Err(BuildError::CardsLength {
                expected: cat.n_objects(),
                got: cards.len(),
            });
        }
        if card_maps.len() != cat.n_morphisms() {
            return Err(BuildError::CardMapsLength {
                expected: cat.n_morphisms(),
                got: card_maps.len(),
            });
        }
        let mut mor_card = Vec::with_capacity(cat.n_morphisms());
        for (m, values) in card_maps.iter().enumerate() {
            let expected = cards[cat.dom(m)];
            if values.len() != expected {
                return Err(BuildError::CardMapShape {
                    morphism: cat.mor_label(m).to_string(),
                    expected,
                    got: values.len(),
                });
            }
            let f = FinFunction::new(cards[cat.cod(m)], values.clone()).map_err(|source| {
                BuildError::CardMapValue {
                    morphism: cat.mor_label(m).to_string(),
                    source,
                }
            })?;
            mor_card.push(f);
        }

        let mut fibre_table: HashMap<usize, Vec<usize>> = HashMap::new();
        for (mor_label, objs) in fibres {
            let m = cat.mor(mor_label).ok_or_else(|| BuildError::UnknownMorphism {
                table: "fibre",
                label: mor_label.clone(),
            })?;
            let expected = cards[cat.cod(m)];
            if objs.len() != expected {
                return Err(BuildError::FibreShape {
                    morphism: mor_label.clone(),
                    expected,
                    got: objs.len(),
                });
            }
            let mut resolved = Vec::with_capacity(objs.len());
            for o in objs {
                resolved.push(cat.object(o).ok_or_else(|| BuildError::UnknownFibreObject {
                    morphism: mor_label.clone(),
                    label: o.clone(),
                })?);
            }
            if fibre_table.insert(m, resolved).is_some() {
                return Err(BuildError::DuplicateEntry {
                    table: "fibre",
                    key: mor_label.clone(),
                });
            }
        }

        let mut fm_table: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (outer, inner, entries) in fibre_morphisms {
            let o = cat.mor(outer).ok_or_else(|| BuildError::UnknownMorphism {
                table: "fibre morphism",
                label: outer.clone(),
            })?;
            let i = cat.mor(inner).ok_or_else(|| BuildError::UnknownMorphism {
                table: "fibre morphism",
                label: inner.clone(),
            })?;
            let expected = cards[cat.cod(o)];
            if entries.len() != expected {
                return Err(BuildError::FibreMorShape {
                    outer: outer.clone(),
                    inner: inner.clone(),
                    expected,
                    got: entries.len(),
                });
            }
            let mut resolved = Vec::with_capacity(entries.len());
            for e in entries {
                resolved.push(cat.mor(e).ok_or_else(|| BuildError::UnknownMorphism {
                    table: "fibre morphism",
                    label: e.clone(),
                })?);
            }
            if fm_table.insert((o, i), resolved).is_some() {
                return Err(BuildError::DuplicateEntry {
                    table: "fibre morphism",
                    key: format!("({outer}, {inner})"),
                });
            }
        }

        let mut oc = OperadicCategory {
            cat,
            obj_card: cards.to_vec(),
            mor_card,
            fibres: fibre_table,
            fibre_mors: fm_table,
            trivial: Vec::new(),
        };
        oc.trivial = oc.scan_trivial();
        Ok(oc)
    }

    /// An object is trivial when it has cardinality one and every morphism
    /// into it restricts to its domain: the single fibre is the domain object
    /// and the single fibre morphism of any composable pair is the inner
    /// morphism itself.
    fn scan_trivial(&self) -> Vec<bool> {
        (0..self.cat.n_objects())
            .map(|u| {
                if self.obj_card[u] != 1 {
                    return false;
                }
                for &psi in self.cat.hom_in(u) {
                    match self.fibres.get(&psi) {
                        Some(f) if f.len() == 1 && f[0] == self.cat.dom(psi) => {}
                        _ => return false,
                    }
                    for &phi in self.cat.hom_in(self.cat.dom(psi)) {
                        match self.fibre_mors.get(&(psi, phi)) {
                            Some(e) if e.len() == 1 && e[0] == phi => {}
                            _ => return false,
                        }
                    }
                }
                true
            })
            .collect()
    }

    pub fn cat(&self) -> &Category {
        &self.cat
    }

    pub fn obj_card(&self, c: usize) -> usize {
        self.obj_card[c]
    }

    pub fn obj_cards(&self) -> &[usize] {
        &self.obj_card
    }

    pub fn mor_card(&self, m: usize) -> &FinFunction {
        &self.mor_card[m]
    }

    /// Fibre object of `psi` at the 1-based index `i`.
    pub fn fibre(&self, psi: usize, i: usize) -> Option<usize> {
        self.fibres.get(&psi).and_then(|f| f.get(i - 1)).copied()
    }

    pub fn fibre_family(&self, psi: usize) -> Option<&[usize]> {
        self.fibres.get(&psi).map(Vec::as_slice)
    }

    /// Fibre morphism of the inner `phi` along the outer `psi` at index `i`:
    /// the induced morphism from the fibre of `psi . phi` to the fibre of
    /// `psi`.
    pub fn fibre_morphism(&self, phi: usize, psi: usize, i: usize) -> Option<usize> {
        self.fibre_mors
            .get(&(psi, phi))
            .and_then(|f| f.get(i - 1))
            .copied()
    }

    pub fn fibre_morphism_family(&self, phi: usize, psi: usize) -> Option<&[usize]> {
        self.fibre_mors.get(&(psi, phi)).map(Vec::as_slice)
    }

    pub fn is_trivial(&self, c: usize) -> bool {
        self.trivial[c]
    }

    /// Derived trivial objects, in object order.
    pub fn trivial_objects(&self) -> Vec<usize> {
        (0..self.cat.n_objects())
            .filter(|&c| self.trivial[c])
            .collect()
    }

    /// Fibres of identity morphisms, deduplicated, in first-seen order.
    pub fn fibres_of_identities(&self) -> Vec<usize> {
        let mut seen = vec![false; self.cat.n_objects()];
        let mut out = Vec::new();
        for c in 0..self.cat.n_objects() {
            let Some(idc) = self.cat.identity(c) else {
                continue;
            };
            if let Some(f) = self.fibres.get(&idc) {
                for &u in f {
                    if !seen[u] {
                        seen[u] = true;
                        out.push(u);
                    }
                }
            }
        }
        out
    }

    /// Morphisms from `c` into trivial objects, in file order.
    pub fn mors_to_trivial(&self, c: usize) -> Vec<usize> {
        self.cat
            .hom_out(c)
            .iter()
            .copied()
            .filter(|&m| self.trivial[self.cat.cod(m)])
            .collect()
    }

    /// Whether every object has exactly one morphism to a trivial object.
    /// On failure the witness is the first offending object with its list of
    /// morphisms to trivial objects.
    pub fn is_genuine(&self) -> GenuineVerdict {
        for c in 0..self.cat.n_objects() {
            let mors = self.mors_to_trivial(c);
            if mors.len() != 1 {
                return GenuineVerdict {
                    genuine: false,
                    witness: Some(GenuineWitness { object: c, mors }),
                };
            }
        }
        GenuineVerdict {
            genuine: true,
            witness: None,
        }
    }

    /// Copy with one fibre entry replaced (1-based index).  Panics on an
    /// absent entry or out-of-range index; intended for what-breaks-if
    /// experiments on complete tables.
    pub fn with_fibre(&self, psi: usize, i: usize, object: usize) -> Self {
        let mut oc = self.clone();
        oc.fibres.get_mut(&psi).expect("fibre entry present")[i - 1] = object;
        oc.trivial = oc.scan_trivial();
        oc
    }

    /// Copy with one fibre morphism entry replaced (1-based index).
    pub fn with_fibre_morphism(&self, outer: usize, inner: usize, i: usize, m: usize) -> Self {
        let mut oc = self.clone();
        oc.fibre_mors
            .get_mut(&(outer, inner))
            .expect("fibre morphism entry present")[i - 1] = m;
        oc.trivial = oc.scan_trivial();
        oc
    }

    /// Fibre table in morphism order, for serialization and sweeps.
    pub fn fibre_table(&self) -> Vec<(usize, &[usize])> {
        (0..self.cat.n_morphisms())
            .filter_map(|m| self.fibres.get(&m).map(|f| (m, f.as_slice())))
            .collect()
    }

    /// Fibre morphism table ordered by (outer, inner) morphism indices.
    pub fn fibre_morphism_table(&self) -> Vec<(usize, usize, &[usize])> {
        let mut keys: Vec<(usize, usize)> = self.fibre_mors.keys().copied().collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|(o, i)| (o, i, self.fibre_mors[&(o, i)].as_slice()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenuineVerdict {
    pub genuine: bool,
    pub witness: Option<GenuineWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenuineWitness {
    pub object: usize,
    pub mors: Vec<usize>,
}

/// Checks every law of an operadic category on explicit tables.
///
/// The base category laws are included, followed by: functoriality of the
/// cardinality assignment, agreement of fibre objects with cardinality
/// fibres, shape and typing of fibre morphisms, preservation of identities
/// and composition by the fibre assignment, triviality of identity fibres,
/// the two double-slice conditions, and the domain behaviour of fibres over
/// trivial objects.
pub fn validate_operadic(oc: &OperadicCategory) -> ValidationReport {
    let cat = &oc.cat;
    let mut r = validate_category(&cat.raw());

    let label = |m: usize| cat.mor_label(m).to_string();
    let olabel = |c: usize| cat.object_label(c).to_string();

    // Dense lookup tables for the triple-quantified checks.
    let n = cat.n_morphisms();
    let pairs = cat.composable_pairs();
    let compose_lut: Vec<u32> = {
        let mut lut = vec![u32::MAX; n * n];
        for &(outer, inner) in &pairs {
            if let Some(c) = cat.compose(outer, inner) {
                lut[outer * n + inner] = c as u32;
            }
        }
        lut
    };
    let compose_of = |outer: usize, inner: usize| -> Option<usize> {
        let v = compose_lut[outer * n + inner];
        (v != u32::MAX).then_some(v as usize)
    };
    let fm_lut: Vec<Option<&[usize]>> = {
        let mut lut = vec![None; n * n];
        for (&(outer, inner), fam) in &oc.fibre_mors {
            lut[outer * n + inner] = Some(fam.as_slice());
        }
        lut
    };
    let fm_of = |outer: usize, inner: usize| fm_lut[outer * n + inner];

    // Cardinality functoriality.
    for m in 0..cat.n_morphisms() {
        let f = &oc.mor_card[m];
        if f.dom() != oc.obj_card[cat.dom(m)] || f.cod() != oc.obj_card[cat.cod(m)] {
            r.fail(
                "card-functor",
                "cardinality map shape disagrees with object cardinalities",
                vec![label(m)],
            );
        }
    }
    for c in 0..cat.n_objects() {
        if let Some(idc) = cat.identity(c) {
            if !oc.mor_card[idc].is_identity() {
                r.fail(
                    "card-functor",
                    "cardinality map of an identity is not the identity",
                    vec![olabel(c), label(idc)],
                );
            }
        }
    }
    for (outer, inner) in cat.composable_pairs() {
        let Some(composite) = cat.compose(outer, inner) else {
            continue; // missing entry already reported by the category checks
        };
        match FinFunction::compose(&oc.mor_card[outer], &oc.mor_card[inner]) {
            Ok(expected) if expected == oc.mor_card[composite] => {}
            _ => r.fail(
                "card-functor",
                "cardinality map of a composite is not the composite of cardinality maps",
                vec![label(outer), label(inner), label(composite)],
            ),
        }
    }

    // Fibre objects: total, and of the cardinality the fibre data demands.
    for m in 0..cat.n_morphisms() {
        let Some(fam) = oc.fibres.get(&m) else {
            r.fail("fibre-objects", "morphism has no fibre entry", vec![label(m)]);
            continue;
        };
        let data = oc.mor_card[m].fibres();
        if fam.len() != oc.obj_card[cat.cod(m)] {
            r.fail(
                "fibre-objects",
                "fibre list length disagrees with codomain cardinality",
                vec![label(m)],
            );
            continue;
        }
        for i in 1..=fam.len() {
            if oc.obj_card[fam[i - 1]] != data.card(i) {
                r.fail(
                    "fibre-objects",
                    format!(
                        "fibre at index {i} has cardinality {}, expected {}",
                        oc.obj_card[fam[i - 1]],
                        data.card(i)
                    ),
                    vec![label(m), olabel(fam[i - 1])],
                );
            }
        }
    }

    // Fibre morphisms: keyed exactly by composable pairs, correctly typed,
    // with the restricted cardinality map.
    for &(outer, inner) in &pairs {
        if !oc.fibre_mors.contains_key(&(outer, inner)) {
            r.fail(
                "fibre-morphisms",
                "composable pair has no fibre morphism entry",
                vec![label(outer), label(inner)],
            );
        }
    }
    {
        let mut keys: Vec<(usize, usize)> = oc.fibre_mors.keys().copied().collect();
        keys.sort_unstable();
        for (outer, inner) in keys {
            if cat.dom(outer) != cat.cod(inner) {
                r.fail(
                    "fibre-morphisms",
                    "fibre morphism entry for a non-composable pair",
                    vec![label(outer), label(inner)],
                );
            }
        }
    }
    for &(outer, inner) in &pairs {
        let Some(entries) = oc.fibre_mors.get(&(outer, inner)) else {
            continue;
        };
        let Some(composite) = cat.compose(outer, inner) else {
            continue;
        };
        if entries.len() != oc.obj_card[cat.cod(outer)] {
            r.fail(
                "fibre-morphisms",
                "fibre morphism list length disagrees with codomain cardinality",
                vec![label(outer), label(inner)],
            );
            continue;
        }
        for i in 1..=entries.len() {
            let m = entries[i - 1];
            let expected_dom = oc.fibre(composite, i);
            let expected_cod = oc.fibre(outer, i);
            if expected_dom != Some(cat.dom(m)) || expected_cod != Some(cat.cod(m)) {
                r.fail(
                    "fibre-morphisms",
                    format!("fibre morphism at index {i} has wrong domain or codomain"),
                    vec![label(outer), label(inner), label(m)],
                );
                continue;
            }
            match fibre_restrict(&oc.mor_card[inner], &oc.mor_card[outer], i) {
                Ok(expected) if expected == oc.mor_card[m] => {}
                _ => r.fail(
                    "fibre-morphisms",
                    format!(
                        "cardinality map of the fibre morphism at index {i} is not the restriction"
                    ),
                    vec![label(outer), label(inner), label(m)],
                ),
            }
        }
    }

    // Fibre assignment preserves identities.
    for psi in 0..cat.n_morphisms() {
        let Some(idc) = cat.identity(cat.dom(psi)) else {
            continue;
        };
        let Some(entries) = oc.fibre_mors.get(&(psi, idc)) else {
            continue;
        };
        for i in 1..=entries.len() {
            let expected = oc
                .fibre(psi, i)
                .and_then(|u| cat.identity(u));
            if expected != Some(entries[i - 1]) {
                r.fail(
                    "fibre-identities",
                    format!("fibre of the identity along index {i} is not an identity"),
                    vec![label(psi), label(entries[i - 1])],
                );
            }
        }
    }

    // Fibre assignment preserves composition: for phi, psi, theta composable,
    // restricting phi along theta.psi and then psi along theta composes to
    // restricting psi.phi along theta.
    let mut functoriality_checks = 0u64;
    for theta in 0..n {
        let card = oc.obj_card[cat.cod(theta)];
        for &psi in cat.hom_in(cat.dom(theta)) {
            let Some(theta_psi) = compose_of(theta, psi) else {
                continue;
            };
            let Some(psi_fam) = fm_of(theta, psi) else {
                continue;
            };
            for &phi in cat.hom_in(cat.dom(psi)) {
                let Some(psi_phi) = compose_of(psi, phi) else {
                    continue;
                };
                functoriality_checks += 1;
                let (Some(phi_fam), Some(composite_fam)) =
                    (fm_of(theta_psi, phi), fm_of(theta, psi_phi))
                else {
                    continue;
                };
                for j in 1..=card {
                    let (Some(&outer_j), Some(&inner_j), Some(&composite_j)) = (
                        psi_fam.get(j - 1),
                        phi_fam.get(j - 1),
                        composite_fam.get(j - 1),
                    ) else {
                        continue;
                    };
                    if compose_of(outer_j, inner_j) != Some(composite_j) {
                        r.fail(
                            "fibre-functoriality",
                            format!("restriction along index {j} does not respect composition"),
                            vec![label(theta), label(psi), label(phi)],
                        );
                    }
                }
            }
        }
    }
    r.set_stat("fibre-functoriality-triples", functoriality_checks);

    // Fibres of identity morphisms are trivial.
    for c in 0..cat.n_objects() {
        let Some(idc) = cat.identity(c) else {
            continue;
        };
        let Some(fam) = oc.fibres.get(&idc) else {
            continue;
        };
        for (i, &u) in fam.iter().enumerate() {
            if !oc.trivial[u] {
                r.fail(
                    "identity-fibres-trivial",
                    format!("fibre {} of the identity is not trivial", i + 1),
                    vec![olabel(c), olabel(u)],
                );
            }
        }
    }

    // Double slice, object part: the fibres of a fibre morphism are the
    // fibres of the inner morphism over the members of the outer fibre.
    for &(psi, phi) in &pairs {
        let Some(entries) = oc.fibre_mors.get(&(psi, phi)) else {
            continue;
        };
        if entries.len() != oc.obj_card[cat.cod(psi)] {
            continue;
        }
        let psi_fibres = oc.mor_card[psi].fibres();
        if entries.len() != oc.mor_card[psi].cod() {
            continue;
        }
        for j in 1..=entries.len() {
            let restricted = entries[j - 1];
            let Some(rf) = oc.fibres.get(&restricted) else {
                continue;
            };
            if rf.len() != psi_fibres.card(j) {
                continue; // length mismatch is reported by the fibre checks
            }
            for t in 1..=rf.len() {
                let expected = oc.fibre(phi, psi_fibres.element(j, t));
                if expected != Some(rf[t - 1]) {
                    r.fail(
                        "double-slice-objects",
                        format!("fibre {t} of the fibre morphism at index {j} is wrong"),
                        vec![label(psi), label(phi), label(restricted)],
                    );
                }
            }
        }
    }

    // Double slice, morphism part: restricting a restriction is the
    // restriction over the corresponding member of the outer fibre.
    let mut double_slice_checks = 0u64;
    for psi in 0..n {
        let card = oc.mor_card[psi].cod();
        let psi_fibres = oc.mor_card[psi].fibres();
        for &phi in cat.hom_in(cat.dom(psi)) {
            let Some(psi_phi) = compose_of(psi, phi) else {
                continue;
            };
            let Some(outer_fam) = fm_of(psi, phi) else {
                continue;
            };
            for &chi in cat.hom_in(cat.dom(phi)) {
                double_slice_checks += 1;
                let (Some(inner_fam), Some(rhs_fam)) = (fm_of(psi_phi, chi), fm_of(phi, chi))
                else {
                    continue;
                };
                for j in 1..=card {
                    let (Some(&outer_j), Some(&inner_j)) =
                        (outer_fam.get(j - 1), inner_fam.get(j - 1))
                    else {
                        continue;
                    };
                    let Some(lhs_entries) = fm_of(outer_j, inner_j) else {
                        r.fail(
                            "double-slice-morphisms",
                            format!("no fibre morphism entry for the restricted pair at index {j}"),
                            vec![label(psi), label(phi), label(chi)],
                        );
                        continue;
                    };
                    if lhs_entries.len() != psi_fibres.card(j) {
                        continue;
                    }
                    for t in 1..=lhs_entries.len() {
                        let expected = rhs_fam.get(psi_fibres.element(j, t) - 1);
                        if expected != Some(&lhs_entries[t - 1]) {
                            r.fail(
                                "double-slice-morphisms",
                                format!(
                                    "restricted restriction at index {j}, position {t} is wrong"
                                ),
                                vec![label(psi), label(phi), label(chi)],
                            );
                        }
                    }
                }
            }
        }
    }
    r.set_stat("double-slice-triples", double_slice_checks);

    // Over a trivial object the fibre assignment is the domain functor.
    for u in 0..cat.n_objects() {
        if !oc.trivial[u] {
            continue;
        }
        for &psi in cat.hom_in(u) {
            if oc.fibre(psi, 1) != Some(cat.dom(psi)) {
                r.fail(
                    "trivial-fibres-are-domains",
                    "fibre over a trivial object is not the domain",
                    vec![olabel(u), label(psi)],
                );
            }
            for &phi in cat.hom_in(cat.dom(psi)) {
                if oc.fibre_morphism(phi, psi, 1) != Some(phi) {
                    r.fail(
                        "trivial-fibres-are-domains",
                        "fibre morphism over a trivial object is not the inner morphism",
                        vec![olabel(u), label(psi), label(phi)],
                    );
                }
            }
        }
    }

    // An object is trivial exactly when it is a fibre of its own identity.
    for u in 0..cat.n_objects() {
        let self_fibre = oc.obj_card[u] == 1
            && cat
                .identity(u)
                .is_some_and(|idu| oc.fibre(idu, 1) == Some(u));
        if oc.trivial[u] != self_fibre {
            r.fail(
                "trivial-characterization",
                if oc.trivial[u] {
                    "trivial object is not the fibre of its identity"
                } else {
                    "fibre of its own identity is not trivial"
                },
                vec![olabel(u)],
            );
        }
    }

    r.set_stat("objects", cat.n_objects() as u64);
    r.set_stat("morphisms", cat.n_morphisms() as u64);
    r.set_stat("trivial-objects", oc.trivial_objects().len() as u64);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cat::MorphismRecord;

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn mor(label: &str, dom: &str, cod: &str) -> MorphismRecord {
        MorphismRecord {
            label: s(label),
            dom: s(dom),
            cod: s(cod),
        }
    }

    /// Two objects: `u` of cardinality one (trivial) and `c` of cardinality
    /// two, with the unique map `p: c -> u`.
    fn pointed_pair() -> OperadicCategory {
        let base = FinCategory {
            objects: vec![s("u"), s("c")],
            morphisms: vec![mor("1u", "u", "u"), mor("1c", "c", "c"), mor("p", "c", "u")],
            identities: vec![(s("u"), s("1u")), (s("c"), s("1c"))],
            composition: vec![
                (s("1u"), s("1u"), s("1u")),
                (s("1u"), s("p"), s("p")),
                (s("p"), s("1c"), s("p")),
                (s("1c"), s("1c"), s("1c")),
            ],
        };
        let cards = vec![1, 2];
        let card_maps = vec![vec![1], vec![1, 2], vec![1, 1]];
        let fibres = vec![
            (s("1u"), vec![s("u")]),
            (s("1c"), vec![s("u"), s("u")]),
            (s("p"), vec![s("c")]),
        ];
        let fibre_mors = vec![
            (s("1u"), s("1u"), vec![s("1u")]),
            (s("1u"), s("p"), vec![s("p")]),
            (s("p"), s("1c"), vec![s("1c")]),
            (s("1c"), s("1c"), vec![s("1u"), s("1u")]),
        ];
        OperadicCategory::new(&base, &cards, &card_maps, &fibres, &fibre_mors).unwrap()
    }

    #[test]
    fn pointed_pair_validates() {
        let oc = pointed_pair();
        let report = validate_operadic(&oc);
        assert!(report.pass(), "{}", report.render());
        let u = oc.cat().object("u").unwrap();
        assert_eq!(oc.trivial_objects(), vec![u]);
        assert!(oc.is_genuine().genuine);
        assert_eq!(oc.fibres_of_identities(), vec![u]);
    }

    #[test]
    fn accessors() {
        let oc = pointed_pair();
        let c = oc.cat().object("c").unwrap();
        let p = oc.cat().mor("p").unwrap();
        let idc = oc.cat().mor("1c").unwrap();
        assert_eq!(oc.fibre(p, 1), Some(c));
        assert_eq!(oc.fibre_morphism(idc, p, 1), Some(idc));
        assert_eq!(oc.obj_card(c), 2);
        assert_eq!(oc.mor_card(p).values(), &[1, 1]);
        assert_eq!(oc.fibre_table().len(), 3);
        assert_eq!(oc.fibre_morphism_table().len(), 4);
    }

    #[test]
    fn mutated_fibre_is_caught() {
        let oc = pointed_pair();
        let u = oc.cat().object("u").unwrap();
        let p = oc.cat().mor("p").unwrap();
        let broken = oc.with_fibre(p, 1, u);
        let report = validate_operadic(&broken);
        assert!(!report.pass());
        assert!(!report.failures_for("fibre-objects").is_empty());
    }

    #[test]
    fn mutated_fibre_morphism_is_caught() {
        let oc = pointed_pair();
        let idc = oc.cat().mor("1c").unwrap();
        let broken = oc.with_fibre_morphism(idc, idc, 2, idc);
        let report = validate_operadic(&broken);
        assert!(!report.pass());
        assert!(!report.failures_for("fibre-morphisms").is_empty());
    }

    #[test]
    fn missing_fibre_entry_is_a_failure_not_an_error() {
        let base = FinCategory {
            objects: vec![s("u"), s("c")],
            morphisms: vec![mor("1u", "u", "u"), mor("1c", "c", "c"), mor("p", "c", "u")],
            identities: vec![(s("u"), s("1u")), (s("c"), s("1c"))],
            composition: vec![
                (s("1u"), s("1u"), s("1u")),
                (s("1u"), s("p"), s("p")),
                (s("p"), s("1c"), s("p")),
                (s("1c"), s("1c"), s("1c")),
            ],
        };
        let cards = vec![1, 2];
        let card_maps = vec![vec![1], vec![1, 2], vec![1, 1]];
        let fibres = vec![(s("1u"), vec![s("u")]), (s("1c"), vec![s("u"), s("u")])];
        let oc = OperadicCategory::new(&base, &cards, &card_maps, &fibres, &[]).unwrap();
        let report = validate_operadic(&oc);
        assert!(!report.pass());
        assert!(report
            .failures_for("fibre-objects")
            .iter()
            .any(|f| f.message.contains("no fibre entry")));
        assert!(!report.failures_for("fibre-morphisms").is_empty());
    }

    #[test]
    fn build_rejects_malformed_tables() {
        let base = FinCategory {
            objects: vec![s("u")],
            morphisms: vec![mor("1u", "u", "u")],
            identities: vec![(s("u"), s("1u"))],
            composition: vec![(s("1u"), s("1u"), s("1u"))],
        };
        let err = OperadicCategory::new(&base, &[], &[vec![1]], &[], &[]);
        assert!(matches!(err, Err(BuildError::CardsLength { .. })));
        let err = OperadicCategory::new(&base, &[1], &[vec![1, 1]], &[], &[]);
        assert!(matches!(err, Err(BuildError::CardMapShape { .. })));
        let err = OperadicCategory::new(
            &base,
            &[1],
            &[vec![1]],
            &[(s("1u"), vec![s("u"), s("u")])],
            &[],
        );
        assert!(matches!(err, Err(BuildError::FibreShape { .. })));
        let err = OperadicCategory::new(&base, &[1], &[vec![1]], &[(s("nope"), vec![s("u")])], &[]);
        assert!(matches!(err, Err(BuildError::UnknownMorphism { .. })));
        let err = OperadicCategory::new(
            &base,
            &[1],
            &[vec![1]],
            &[(s("1u"), vec![s("u")]), (s("1u"), vec![s("u")])],
            &[],
        );
        assert!(matches!(err, Err(BuildError::DuplicateEntry { .. })));
    }

    #[test]
    fn trivial_characterization_matches_scan() {
        let oc = pointed_pair();
        for u in 0..oc.cat().n_objects() {
            let idu = oc.cat().identity(u).unwrap();
            let self_fibre = oc.obj_card(u) == 1 && oc.fibre(idu, 1) == Some(u);
            assert_eq!(oc.is_trivial(u), self_fibre);
        }
    }
}
