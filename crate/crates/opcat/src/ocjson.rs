//! JSON files for categories, collections, presheaves, and operads.
//!
//! Categories are written with 1-based numeric ids: `objects` is a list of
//! `{id, card}` rows, `morphisms` a list of `{id, dom, cod, card_map}` rows,
//! and the remaining tables are string-keyed maps over those ids, with
//! composable pairs keyed `"outer|inner"`.  An optional `expected_trivial`
//! list is cross-checked against the computed trivial objects at parse time.
//! Parsing names every object and morphism by its id, so a file round trips
//! byte for byte: `serialize(parse(text)) == text` for canonical `text`.
//!
//! Collection files carry `{"collection": {object: [labels]}}`; presheaf
//! files add `"action"` keyed `"morphism|element"`; operad files carry
//! `"sets"`, `"unit"`, and `"mult"` keyed `"morphism|element|y1,y2,..."`.
//! Element labels may not contain `'|'` or `','`.

use crate::cat::{FinCategory, MorphismRecord};
use crate::coll::Collection;
use crate::normal::Presheaf;
use crate::operad::Operad;
use crate::operadic::{BuildError, OperadicCategory};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OcjsonError {
    #[error("malformed JSON")]
    Json(#[from] serde_json::Error),
    #[error("{table} references {kind} id {id}, expected 1..={max}")]
    IdRange {
        table: &'static str,
        kind: &'static str,
        id: String,
        max: usize,
    },
    #[error("{table} key {key:?} is not of the form {form:?}")]
    Key {
        table: &'static str,
        key: String,
        form: &'static str,
    },
    #[error("duplicate {kind} id {id}")]
    DuplicateId { kind: &'static str, id: usize },
    #[error("element label {label:?} contains a reserved character ('|' or ',')")]
    Label { label: String },
    #[error("expected_trivial lists {listed:?} but the trivial objects are {computed:?}")]
    ExpectedTrivial {
        listed: Vec<usize>,
        computed: Vec<usize>,
    },
    #[error(transparent)]
    Build(#[from] BuildError),
}

#[derive(Serialize, Deserialize)]
struct ObjectRow {
    id: usize,
    card: usize,
}

#[derive(Serialize, Deserialize)]
struct MorphismRow {
    id: usize,
    dom: usize,
    cod: usize,
    card_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct CategoryFile {
    objects: Vec<ObjectRow>,
    morphisms: Vec<MorphismRow>,
    identities: BTreeMap<String, usize>,
    composition: BTreeMap<String, usize>,
    fibres: BTreeMap<String, Vec<usize>>,
    fibre_morphisms: BTreeMap<String, Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_trivial: Option<Vec<usize>>,
}

fn check_label(label: &str) -> Result<(), OcjsonError> {
    if label.contains('|') || label.contains(',') {
        return Err(OcjsonError::Label {
            label: label.to_string(),
        });
    }
    Ok(())
}

fn parse_id(
    table: &'static str,
    kind: &'static str,
    text: &str,
    max: usize,
) -> Result<usize, OcjsonError> {
    let err = || OcjsonError::IdRange {
        table,
        kind,
        id: text.to_string(),
        max,
    };
    let id: usize = text.parse().map_err(|_| err())?;
    if id == 0 || id > max {
        return Err(err());
    }
    Ok(id)
}

fn check_id(
    table: &'static str,
    kind: &'static str,
    id: usize,
    max: usize,
) -> Result<usize, OcjsonError> {
    if id == 0 || id > max {
        return Err(OcjsonError::IdRange {
            table,
            kind,
            id: id.to_string(),
            max,
        });
    }
    Ok(id)
}

fn split_pair(table: &'static str, key: &str) -> Result<(String, String), OcjsonError> {
    let parts: Vec<&str> = key.split('|').collect();
    if parts.len() != 2 {
        return Err(OcjsonError::Key {
            table,
            key: key.to_string(),
            form: "outer|inner",
        });
    }
    Ok((parts[0].to_string(), parts[1].to_string()))
}

/// Reads a category file and resolves it into an [`OperadicCategory`].
pub fn parse_category(text: &str) -> Result<OperadicCategory, OcjsonError> {
    let file: CategoryFile = serde_json::from_str(text)?;
    let n_obj = file.objects.len();
    let n_mor = file.morphisms.len();

    let mut cards = vec![0usize; n_obj];
    let mut seen_obj = vec![false; n_obj];
    for row in &file.objects {
        check_id("objects", "object", row.id, n_obj)?;
        if seen_obj[row.id - 1] {
            return Err(OcjsonError::DuplicateId {
                kind: "object",
                id: row.id,
            });
        }
        seen_obj[row.id - 1] = true;
        cards[row.id - 1] = row.card;
    }

    let mut records = vec![None; n_mor];
    let mut card_maps = vec![Vec::new(); n_mor];
    for row in &file.morphisms {
        check_id("morphisms", "morphism", row.id, n_mor)?;
        check_id("morphisms", "object", row.dom, n_obj)?;
        check_id("morphisms", "object", row.cod, n_obj)?;
        if records[row.id - 1].is_some() {
            return Err(OcjsonError::DuplicateId {
                kind: "morphism",
                id: row.id,
            });
        }
        records[row.id - 1] = Some(MorphismRecord {
            label: row.id.to_string(),
            dom: row.dom.to_string(),
            cod: row.cod.to_string(),
        });
        card_maps[row.id - 1] = row.card_map.clone();
    }
    let morphisms: Vec<MorphismRecord> = records.into_iter().map(|r| r.unwrap()).collect();

    let mut identities = Vec::new();
    for (object, morphism) in &file.identities {
        let c = parse_id("identities", "object", object, n_obj)?;
        let m = check_id("identities", "morphism", *morphism, n_mor)?;
        identities.push((c.to_string(), m.to_string()));
    }

    let mut composition = Vec::new();
    for (key, composite) in &file.composition {
        let (outer, inner) = split_pair("composition", key)?;
        let o = parse_id("composition", "morphism", &outer, n_mor)?;
        let i = parse_id("composition", "morphism", &inner, n_mor)?;
        let m = check_id("composition", "morphism", *composite, n_mor)?;
        composition.push((o.to_string(), i.to_string(), m.to_string()));
    }

    let mut fibres = Vec::new();
    for (morphism, objects) in &file.fibres {
        let m = parse_id("fibres", "morphism", morphism, n_mor)?;
        let mut objs = Vec::with_capacity(objects.len());
        for &c in objects {
            objs.push(check_id("fibres", "object", c, n_obj)?.to_string());
        }
        fibres.push((m.to_string(), objs));
    }

    let mut fibre_morphisms = Vec::new();
    for (key, entries) in &file.fibre_morphisms {
        let (outer, inner) = split_pair("fibre_morphisms", key)?;
        let o = parse_id("fibre_morphisms", "morphism", &outer, n_mor)?;
        let i = parse_id("fibre_morphisms", "morphism", &inner, n_mor)?;
        let mut mors = Vec::with_capacity(entries.len());
        for &m in entries {
            mors.push(check_id("fibre_morphisms", "morphism", m, n_mor)?.to_string());
        }
        fibre_morphisms.push((o.to_string(), i.to_string(), mors));
    }

    let raw = FinCategory {
        objects: (1..=n_obj).map(|i| i.to_string()).collect(),
        morphisms,
        identities,
        composition,
    };
    let oc = OperadicCategory::new(&raw, &cards, &card_maps, &fibres, &fibre_morphisms)?;

    if let Some(listed) = &file.expected_trivial {
        let mut listed = listed.clone();
        listed.sort_unstable();
        let computed: Vec<usize> = oc.trivial_objects().iter().map(|c| c + 1).collect();
        if listed != computed {
            return Err(OcjsonError::ExpectedTrivial { listed, computed });
        }
    }
    Ok(oc)
}

/// Writes a category in canonical form: 1-based ids in table order, sorted
/// string keys, pretty-printed with a trailing newline.
pub fn serialize_category(oc: &OperadicCategory) -> String {
    let cat = oc.cat();
    let objects = (0..cat.n_objects())
        .map(|c| ObjectRow {
            id: c + 1,
            card: oc.obj_card(c),
        })
        .collect();
    let morphisms = (0..cat.n_morphisms())
        .map(|m| MorphismRow {
            id: m + 1,
            dom: cat.dom(m) + 1,
            cod: cat.cod(m) + 1,
            card_map: oc.mor_card(m).values().to_vec(),
        })
        .collect();
    let mut identities = BTreeMap::new();
    for c in 0..cat.n_objects() {
        if let Some(m) = cat.identity(c) {
            identities.insert((c + 1).to_string(), m + 1);
        }
    }
    let mut composition = BTreeMap::new();
    for (outer, inner, composite) in &cat.raw().composition {
        let o = cat.mor(outer).expect("own table") + 1;
        let i = cat.mor(inner).expect("own table") + 1;
        let m = cat.mor(composite).expect("own table") + 1;
        composition.insert(format!("{o}|{i}"), m);
    }
    let mut fibres = BTreeMap::new();
    for (m, objs) in oc.fibre_table() {
        fibres.insert(
            (m + 1).to_string(),
            objs.iter().map(|c| c + 1).collect::<Vec<usize>>(),
        );
    }
    let mut fibre_morphisms = BTreeMap::new();
    for (outer, inner, mors) in oc.fibre_morphism_table() {
        fibre_morphisms.insert(
            format!("{}|{}", outer + 1, inner + 1),
            mors.iter().map(|m| m + 1).collect::<Vec<usize>>(),
        );
    }
    let file = CategoryFile {
        objects,
        morphisms,
        identities,
        composition,
        fibres,
        fibre_morphisms,
        expected_trivial: Some(oc.trivial_objects().iter().map(|c| c + 1).collect()),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("tables serialize");
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
struct CollectionFile {
    collection: BTreeMap<String, Vec<String>>,
}

fn collection_tables(
    oc: &OperadicCategory,
    table: BTreeMap<String, Vec<String>>,
) -> Result<Collection, OcjsonError> {
    let n_obj = oc.cat().n_objects();
    let mut out = Collection::new();
    for (object, labels) in table {
        let c = parse_id("collection", "object", &object, n_obj)?;
        for label in &labels {
            check_label(label)?;
        }
        out.set(c - 1, labels);
    }
    Ok(out)
}

fn collection_file(coll: &Collection) -> BTreeMap<String, Vec<String>> {
    let mut table = BTreeMap::new();
    for (c, elems) in coll.supported() {
        table.insert((c + 1).to_string(), elems.to_vec());
    }
    table
}

/// Reads a collection over `oc` from `{"collection": {object: [labels]}}`.
pub fn parse_collection(oc: &OperadicCategory, text: &str) -> Result<Collection, OcjsonError> {
    let file: CollectionFile = serde_json::from_str(text)?;
    collection_tables(oc, file.collection)
}

pub fn serialize_collection(coll: &Collection) -> String {
    let file = CollectionFile {
        collection: collection_file(coll),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("tables serialize");
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
struct PresheafFile {
    collection: BTreeMap<String, Vec<String>>,
    action: BTreeMap<String, String>,
}

/// Reads a presheaf over `oc`: a collection plus an action table keyed
/// `"morphism|element"`.
pub fn parse_presheaf(oc: &OperadicCategory, text: &str) -> Result<Presheaf, OcjsonError> {
    let file: PresheafFile = serde_json::from_str(text)?;
    let carrier = collection_tables(oc, file.collection)?;
    let mut p = Presheaf::new(carrier);
    let n_mor = oc.cat().n_morphisms();
    for (key, result) in &file.action {
        let parts: Vec<&str> = key.split('|').collect();
        if parts.len() != 2 {
            return Err(OcjsonError::Key {
                table: "action",
                key: key.clone(),
                form: "morphism|element",
            });
        }
        let pi = parse_id("action", "morphism", parts[0], n_mor)?;
        check_label(parts[1])?;
        check_label(result)?;
        p.set_action(pi - 1, parts[1], result.clone());
    }
    Ok(p)
}

pub fn serialize_presheaf(p: &Presheaf) -> String {
    let mut action = BTreeMap::new();
    for (pi, x, result) in p.action_entries() {
        action.insert(format!("{}|{}", pi + 1, x), result.to_string());
    }
    let file = PresheafFile {
        collection: collection_file(p.carrier()),
        action,
    };
    let mut out = serde_json::to_string_pretty(&file).expect("tables serialize");
    out.push('\n');
    out
}

#[derive(Serialize, Deserialize)]
struct OperadFile {
    sets: BTreeMap<String, Vec<String>>,
    unit: BTreeMap<String, String>,
    mult: BTreeMap<String, String>,
}

/// Reads an operad over `oc`: carrier sets per object, unit elements per
/// object, and a multiplication table keyed `"morphism|x|y1,y2,..."`.
pub fn parse_operad(oc: &OperadicCategory, text: &str) -> Result<Operad, OcjsonError> {
    let file: OperadFile = serde_json::from_str(text)?;
    let n_obj = oc.cat().n_objects();
    let n_mor = oc.cat().n_morphisms();
    let mut t = Operad::new(n_obj);
    for (object, labels) in &file.sets {
        let c = parse_id("sets", "object", object, n_obj)?;
        for label in labels {
            check_label(label)?;
        }
        let refs: Vec<&str> = labels.iter().map(String::as_str).collect();
        t.set_elements(c - 1, &refs);
    }
    for (object, label) in &file.unit {
        let c = parse_id("unit", "object", object, n_obj)?;
        check_label(label)?;
        t.set_unit(c - 1, label.clone());
    }
    for (key, result) in &file.mult {
        let parts: Vec<&str> = key.split('|').collect();
        if parts.len() != 3 {
            return Err(OcjsonError::Key {
                table: "mult",
                key: key.clone(),
                form: "morphism|x|y1,y2,...",
            });
        }
        parse_id("mult", "morphism", parts[0], n_mor)?;
        check_label(parts[1])?;
        for y in parts[2].split(',').filter(|y| !y.is_empty()) {
            check_label(y)?;
        }
        check_label(result)?;
        t.insert_mult_key(key.clone(), result.clone());
    }
    Ok(t)
}

pub fn serialize_operad(oc: &OperadicCategory, t: &Operad) -> String {
    let mut sets = BTreeMap::new();
    for c in 0..oc.cat().n_objects() {
        let elems = t.elements(c);
        if !elems.is_empty() {
            sets.insert((c + 1).to_string(), elems.to_vec());
        }
    }
    let mut unit = BTreeMap::new();
    for (c, label) in t.unit_entries() {
        unit.insert((c + 1).to_string(), label.to_string());
    }
    let mut mult = BTreeMap::new();
    for (key, result) in t.mult_entries() {
        mult.insert(key.to_string(), result.to_string());
    }
    let file = OperadFile { sets, unit, mult };
    let mut out = serde_json::to_string_pretty(&file).expect("tables serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{bouquets, chain_poset, discrete_zero, finite_ordinals, finite_sets};
    use crate::functor::{OperadicFunctorData, validate_functor};
    use crate::operad::{terminal_operad, validate_operad};
    use crate::operadic::validate_operadic;
    use crate::sample::Sampler;

    fn id_correspondence(oc: &OperadicCategory) -> OperadicFunctorData {
        let cat = oc.cat();
        let object_map = (0..cat.n_objects())
            .map(|c| (cat.object_label(c).to_string(), (c + 1).to_string()))
            .collect();
        let morphism_map = (0..cat.n_morphisms())
            .map(|m| (cat.mor_label(m).to_string(), (m + 1).to_string()))
            .collect();
        OperadicFunctorData::new(object_map, morphism_map)
    }

    #[test]
    fn categories_round_trip_through_files() {
        for oc in [
            finite_sets(2),
            finite_ordinals(3),
            discrete_zero(&chain_poset(3)).unwrap(),
            bouquets(&["r", "g"], 2),
        ] {
            let text = serialize_category(&oc);
            let parsed = parse_category(&text).unwrap();
            assert_eq!(serialize_category(&parsed), text);
            assert!(validate_operadic(&parsed).pass());
            let data = id_correspondence(&oc);
            assert!(validate_functor(&oc, &parsed, &data).pass());
        }
    }

    #[test]
    fn bad_references_are_rejected() {
        let oc = finite_sets(1);
        let mut text = serialize_category(&oc);
        text = text.replace("\"card_map\": [\n        1\n      ]", "\"card_map\": [\n        7\n      ]");
        let err = parse_category(&text).unwrap_err();
        assert!(matches!(err, OcjsonError::Build(_)), "{err:?}");

        let garbage = "{\"objects\": 3}";
        assert!(matches!(
            parse_category(garbage).unwrap_err(),
            OcjsonError::Json(_)
        ));
    }

    #[test]
    fn a_wrong_trivial_claim_is_rejected() {
        let oc = finite_sets(1);
        let text = serialize_category(&oc);
        assert!(text.contains("expected_trivial"));
        let wrong = text.replace(
            "\"expected_trivial\": [\n    2\n  ]",
            "\"expected_trivial\": [\n    1\n  ]",
        );
        assert_ne!(wrong, text);
        let err = parse_category(&wrong).unwrap_err();
        assert!(matches!(err, OcjsonError::ExpectedTrivial { .. }), "{err:?}");
    }

    #[test]
    fn collections_and_presheaves_round_trip() {
        let oc = finite_sets(2);
        let mut sampler = Sampler::new(3, 2);
        let coll = sampler.collection(&oc, "x");
        let text = serialize_collection(&coll);
        let parsed = parse_collection(&oc, &text).unwrap();
        assert_eq!(serialize_collection(&parsed), text);

        let dz = discrete_zero(&chain_poset(2)).unwrap();
        let p = crate::normal::free_presheaf(&dz, &[(1, "q".to_string())]).unwrap();
        let text = serialize_presheaf(&p);
        let parsed = parse_presheaf(&dz, &text).unwrap();
        assert_eq!(serialize_presheaf(&parsed), text);
        assert!(crate::normal::validate_presheaf(&dz, &parsed).pass());
    }

    #[test]
    fn operads_round_trip() {
        let oc = finite_ordinals(2);
        let t = terminal_operad(&oc);
        let text = serialize_operad(&oc, &t);
        let parsed = parse_operad(&oc, &text).unwrap();
        assert_eq!(serialize_operad(&oc, &parsed), text);
        assert!(validate_operad(&oc, &parsed).pass());
    }

    #[test]
    fn reserved_characters_in_labels_are_rejected() {
        let oc = finite_sets(1);
        let text = "{\"collection\": {\"1\": [\"a|b\"]}}";
        assert!(matches!(
            parse_collection(&oc, text).unwrap_err(),
            OcjsonError::Label { .. }
        ));
        let text = "{\"collection\": {\"1\": [\"a,b\"]}}";
        assert!(matches!(
            parse_collection(&oc, text).unwrap_err(),
            OcjsonError::Label { .. }
        ));
    }
}
