//! Rebuilding an operadic category from its collection calculus.
//!
//! [`reconstruct`] is handed nothing but a [`TensorInterface`]: objects with
//! their cardinalities, the unit collection, tensor evaluation with its
//! functorial action, the structure maps, and the projection of tensor
//! elements onto their parts over finite sets.  From these it rebuilds the
//! category whose morphisms out of `c` are the elements of `(C * C)_c`,
//! where `C` is the collection with one element per object: codomain,
//! cardinality map, and fibres are read off the projection, composition and
//! fibre morphisms off `alpha`, identities and units off `rho`.
//!
//! [`OpaqueInterface`] is the canonical implementation.  It relabels every
//! tensor element with a fresh opaque name, so a rebuild driven through it
//! cannot see the tables it came from; [`roundtrip`] then checks that the
//! rebuilt category is isomorphic to the original over the minted labels.

use crate::cat::{FinCategory, MorphismRecord};
use crate::coll::{self, Collection, decode_element, render_parts};
use crate::fin::FinFunction;
use crate::functor::{OperadicFunctorData, validate_functor};
use crate::operadic::{OperadicCategory, validate_operadic};
use crate::report::{Failure, ValidationReport};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use thiserror::Error;

/// A collection presented by labels: object label to element labels.
pub type Family = BTreeMap<String, Vec<String>>;

/// A map of collections presented by labels: `(object, element)` to the
/// image element at the same object.
pub type FamilyMap = BTreeMap<(String, String), String>;

/// The parts of one tensor element as seen over finite sets: the element of
/// the first factor, the underlying finite function of the middle morphism,
/// and the second-factor family indexed by that function's codomain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    pub x: String,
    pub map: FinFunction,
    pub ys: Vec<String>,
}

/// Projections of every element of one tensor, keyed by `(object, element)`.
pub type Projections = BTreeMap<(String, String), Projection>;

/// Access to a category's collection calculus without its tables.
///
/// The methods expose exactly what the calculus itself provides; they never
/// name morphisms of the underlying category.  All families handed in must
/// be supported on the labels returned by `objects`, and the map arguments
/// of `tensor_map` must be total on the corresponding families.
pub trait TensorInterface {
    /// Object labels, in a fixed order.
    fn objects(&self) -> Vec<String>;
    /// Cardinality of an object.
    fn card(&self, object: &str) -> usize;
    /// The unit collection.
    fn unit(&self) -> Family;
    /// Elements of `x * y` per object.
    fn tensor(&self, x: &Family, y: &Family) -> Family;
    /// The action of the tensor on a pair of collection maps `f: x -> x2`
    /// and `g: y -> y2`, as a map `x * y -> x2 * y2`.
    fn tensor_map(
        &self,
        x: &Family,
        y: &Family,
        x2: &Family,
        y2: &Family,
        f: &FamilyMap,
        g: &FamilyMap,
    ) -> FamilyMap;
    /// The associator `(x * y) * z -> x * (y * z)`.
    fn alpha(&self, x: &Family, y: &Family, z: &Family) -> FamilyMap;
    /// The left unit map `unit * x -> x`.
    fn lambda(&self, x: &Family) -> FamilyMap;
    /// The right unit map `x -> x * unit`.
    fn rho(&self, x: &Family) -> FamilyMap;
    /// Parts of every element of `x * y` over finite sets.
    fn project(&self, x: &Family, y: &Family) -> Projections;
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RebuildError {
    #[error("unit element at {object:?} sits over cardinality {card}, expected 1")]
    UnitCardinality { object: String, card: usize },
    #[error("unit retraction fails: the round trip from {unit:?} at {object:?} returns {got:?}")]
    UnitRetraction {
        object: String,
        unit: String,
        got: String,
    },
    #[error("rebuilt composition is not associative: {0}")]
    Associativity(String),
    #[error("rebuilt identities break an identity law: {0}")]
    Identities(String),
    #[error("rebuilt fibre data is not functorial: {0}")]
    FibreFunctoriality(String),
    #[error("a morphism into a unit object has a fibre other than its domain: {0}")]
    UnitFibres(String),
    #[error("rebuilt fibre morphisms break the double slice law: {0}")]
    DoubleSlice(String),
    #[error("interface data is malformed: {0}")]
    Shape(String),
}

fn shape(msg: impl Into<String>) -> RebuildError {
    RebuildError::Shape(msg.into())
}

fn classify(f: &Failure) -> RebuildError {
    let msg = if f.witness.is_empty() {
        format!("{}: {}", f.check, f.message)
    } else {
        format!("{}: {} [{}]", f.check, f.message, f.witness.join(", "))
    };
    match f.check.as_str() {
        "associativity" | "composable-pairs" | "composable-triples" => {
            RebuildError::Associativity(msg)
        }
        "identity-table" | "identity-law" => RebuildError::Identities(msg),
        "card-functor" | "fibre-functoriality" | "fibre-functoriality-triples"
        | "fibre-identities" | "fibre-morphisms" | "fibre-objects" => {
            RebuildError::FibreFunctoriality(msg)
        }
        "trivial-objects" | "trivial-characterization" | "trivial-fibres-are-domains"
        | "identity-fibres-trivial" => RebuildError::UnitFibres(msg),
        c if c.starts_with("double-slice") => RebuildError::DoubleSlice(msg),
        _ => RebuildError::Shape(msg),
    }
}

fn at<'f>(fam: &'f Family, object: &str) -> &'f [String] {
    fam.get(object).map(Vec::as_slice).unwrap_or(&[])
}

fn terminal_map(fam: &Family) -> FamilyMap {
    let mut out = FamilyMap::new();
    for (object, elems) in fam {
        for e in elems {
            out.insert((object.clone(), e.clone()), object.clone());
        }
    }
    out
}

fn identity_map(fam: &Family) -> FamilyMap {
    let mut out = FamilyMap::new();
    for (object, elems) in fam {
        for e in elems {
            out.insert((object.clone(), e.clone()), e.clone());
        }
    }
    out
}

/// Rebuilds an operadic category from its collection calculus alone.
pub fn reconstruct(iface: &dyn TensorInterface) -> Result<OperadicCategory, RebuildError> {
    let objects = iface.objects();
    let cards: Vec<usize> = objects.iter().map(|o| iface.card(o)).collect();
    let mut c_fam = Family::new();
    for o in &objects {
        c_fam.insert(o.clone(), vec![o.clone()]);
    }
    let u_fam = iface.unit();

    for (b, elems) in &u_fam {
        if elems.is_empty() {
            continue;
        }
        let Some(bi) = objects.iter().position(|o| o == b) else {
            return Err(shape(format!("unit element at unknown object {b:?}")));
        };
        if cards[bi] != 1 {
            return Err(RebuildError::UnitCardinality {
                object: b.clone(),
                card: cards[bi],
            });
        }
    }

    let lam_u = iface.lambda(&u_fam);
    let rho_u = iface.rho(&u_fam);
    for (b, elems) in &u_fam {
        for v in elems {
            let r = rho_u
                .get(&(b.clone(), v.clone()))
                .ok_or_else(|| shape(format!("rho is undefined at unit element {v:?}")))?;
            let w = lam_u
                .get(&(b.clone(), r.clone()))
                .ok_or_else(|| shape(format!("lambda is undefined at {r:?}")))?;
            if w != v {
                return Err(RebuildError::UnitRetraction {
                    object: b.clone(),
                    unit: v.clone(),
                    got: w.clone(),
                });
            }
        }
    }

    let cc = iface.tensor(&c_fam, &c_fam);
    let cc_parts = iface.project(&c_fam, &c_fam);
    let mut records = Vec::new();
    let mut card_maps: Vec<Vec<usize>> = Vec::new();
    let mut fibres: Vec<(String, Vec<String>)> = Vec::new();
    for (ci, c) in objects.iter().enumerate() {
        for m in at(&cc, c) {
            let pr = cc_parts
                .get(&(c.clone(), m.clone()))
                .ok_or_else(|| shape(format!("no projection for morphism element {m:?}")))?;
            let Some(di) = objects.iter().position(|o| o == &pr.x) else {
                return Err(shape(format!(
                    "morphism element {m:?} points at unknown object {x:?}",
                    x = pr.x
                )));
            };
            if pr.map.dom() != cards[ci] || pr.map.cod() != cards[di] {
                return Err(shape(format!(
                    "projection of {m:?} carries a function {map}, expected {a} -> {b}",
                    map = pr.map,
                    a = cards[ci],
                    b = cards[di]
                )));
            }
            if pr.ys.len() != cards[di] {
                return Err(shape(format!(
                    "projection of {m:?} lists {got} fibres, expected {want}",
                    got = pr.ys.len(),
                    want = cards[di]
                )));
            }
            if let Some(bad) = pr.ys.iter().find(|y| !objects.contains(y)) {
                return Err(shape(format!(
                    "projection of {m:?} names unknown fibre object {bad:?}"
                )));
            }
            records.push(MorphismRecord {
                label: m.clone(),
                dom: c.clone(),
                cod: pr.x.clone(),
            });
            card_maps.push(pr.map.values().to_vec());
            fibres.push((m.clone(), pr.ys.clone()));
        }
    }

    let rho_c = iface.rho(&c_fam);
    let cu_parts = iface.project(&c_fam, &u_fam);
    let id_c = identity_map(&c_fam);
    let term_u = terminal_map(&u_fam);
    let strip_unit = iface.tensor_map(&c_fam, &u_fam, &c_fam, &c_fam, &id_c, &term_u);
    let mut identities = Vec::new();
    for c in &objects {
        let r = rho_c
            .get(&(c.clone(), c.clone()))
            .ok_or_else(|| shape(format!("rho is undefined at object {c:?}")))?;
        let pj = cu_parts
            .get(&(c.clone(), r.clone()))
            .ok_or_else(|| shape(format!("no projection for identity candidate {r:?}")))?;
        if &pj.x != c {
            return Err(RebuildError::Identities(format!(
                "the identity candidate at {c:?} ends at {x:?}",
                x = pj.x
            )));
        }
        let e = strip_unit
            .get(&(c.clone(), r.clone()))
            .ok_or_else(|| shape(format!("tensor action is undefined at {r:?}")))?;
        identities.push((c.clone(), e.clone()));
    }

    let term_cc = terminal_map(&cc);
    let cc_c = iface.tensor(&cc, &c_fam);
    let pair_parts = iface.project(&cc, &c_fam);
    let al = iface.alpha(&c_fam, &c_fam, &c_fam);
    let assoc_parts = iface.project(&c_fam, &cc);
    let inner_of = iface.tensor_map(&cc, &c_fam, &c_fam, &c_fam, &term_cc, &id_c);
    let comp_of = iface.tensor_map(&c_fam, &cc, &c_fam, &c_fam, &id_c, &term_cc);
    let mut composition = Vec::new();
    let mut fibre_mors: Vec<(String, String, Vec<String>)> = Vec::new();
    let mut seen: HashMap<(String, String), String> = HashMap::new();
    for c in &objects {
        for t in at(&cc_c, c) {
            let key = (c.clone(), t.clone());
            let inner = inner_of
                .get(&key)
                .ok_or_else(|| shape(format!("tensor action is undefined at {t:?}")))?;
            let outer = &pair_parts
                .get(&key)
                .ok_or_else(|| shape(format!("no projection for pair element {t:?}")))?
                .x;
            let a = al
                .get(&key)
                .ok_or_else(|| shape(format!("alpha is undefined at {t:?}")))?;
            let comp = comp_of
                .get(&(c.clone(), a.clone()))
                .ok_or_else(|| shape(format!("tensor action is undefined at {a:?}")))?;
            let pj = assoc_parts
                .get(&(c.clone(), a.clone()))
                .ok_or_else(|| shape(format!("no projection for composite element {a:?}")))?;
            match seen.insert((outer.clone(), inner.clone()), comp.clone()) {
                Some(prev) if &prev != comp => {
                    return Err(shape(format!(
                        "two tensor elements assign different composites to ({outer}, {inner})"
                    )));
                }
                Some(_) => {}
                None => {
                    composition.push((outer.clone(), inner.clone(), comp.clone()));
                    fibre_mors.push((outer.clone(), inner.clone(), pj.ys.clone()));
                }
            }
        }
    }
    for v in &records {
        for w in &records {
            if v.dom == w.cod && !seen.contains_key(&(v.label.clone(), w.label.clone())) {
                return Err(shape(format!(
                    "no tensor element represents the pair ({}, {})",
                    v.label, w.label
                )));
            }
        }
    }

    let raw = FinCategory {
        objects: objects.clone(),
        morphisms: records,
        identities,
        composition,
    };
    let rebuilt = OperadicCategory::new(&raw, &cards, &card_maps, &fibres, &fibre_mors)
        .map_err(|e| shape(e.to_string()))?;

    let cat = rebuilt.cat();
    for (b, elems) in &u_fam {
        if elems.is_empty() {
            continue;
        }
        let bi = cat.object(b).expect("unit objects were checked");
        for &m in cat.hom_in(bi) {
            let fib = rebuilt
                .fibre(m, 1)
                .ok_or_else(|| shape(format!("missing fibre of {}", cat.mor_label(m))))?;
            if fib != cat.dom(m) {
                return Err(RebuildError::UnitFibres(format!(
                    "fibre of {} over the unit object {b} is {}, not {}",
                    cat.mor_label(m),
                    cat.object_label(fib),
                    cat.object_label(cat.dom(m))
                )));
            }
        }
    }

    let report = validate_operadic(&rebuilt);
    if let Some(f) = report.failures().first() {
        return Err(classify(f));
    }
    Ok(rebuilt)
}

struct Mint {
    next: usize,
    forward: HashMap<String, String>,
    backward: HashMap<String, String>,
}

impl Mint {
    fn opaque(&mut self, real: &str) -> String {
        if let Some(o) = self.forward.get(real) {
            return o.clone();
        }
        let o = format!("e{}", self.next);
        self.next += 1;
        self.forward.insert(real.to_string(), o.clone());
        self.backward.insert(o.clone(), real.to_string());
        o
    }
}

/// The collection calculus of an operadic category behind minted labels.
///
/// Every tensor element is renamed to an opaque `e<n>` the first time it
/// appears; the same element always receives the same name.  Families handed
/// in are taken at face value, so nested tensors work on the minted names
/// without ever exposing the underlying triples.
pub struct OpaqueInterface<'a> {
    oc: &'a OperadicCategory,
    mint: RefCell<Mint>,
}

impl<'a> OpaqueInterface<'a> {
    pub fn new(oc: &'a OperadicCategory) -> Self {
        OpaqueInterface {
            oc,
            mint: RefCell::new(Mint {
                next: 0,
                forward: HashMap::new(),
                backward: HashMap::new(),
            }),
        }
    }

    /// The tensor triple behind a minted label, for checking a rebuild
    /// against the source from outside.
    pub fn reveal(&self, label: &str) -> Option<String> {
        self.mint.borrow().backward.get(label).cloned()
    }

    fn collection(&self, fam: &Family) -> Collection {
        let cat = self.oc.cat();
        let mut out = Collection::new();
        for (object, elems) in fam {
            let c = cat
                .object(object)
                .unwrap_or_else(|| panic!("unknown object label {object:?}"));
            out.set(c, elems.clone());
        }
        out
    }

    fn label(&self, c: usize) -> String {
        self.oc.cat().object_label(c).to_string()
    }
}

impl TensorInterface for OpaqueInterface<'_> {
    fn objects(&self) -> Vec<String> {
        self.oc.cat().object_labels().to_vec()
    }

    fn card(&self, object: &str) -> usize {
        let c = self
            .oc
            .cat()
            .object(object)
            .unwrap_or_else(|| panic!("unknown object label {object:?}"));
        self.oc.obj_card(c)
    }

    fn unit(&self) -> Family {
        let mut out = Family::new();
        for (c, elems) in coll::unit(self.oc).supported() {
            out.insert(self.label(c), elems.to_vec());
        }
        out
    }

    fn tensor(&self, x: &Family, y: &Family) -> Family {
        let t = coll::tensor(self.oc, &self.collection(x), &self.collection(y));
        let mut mint = self.mint.borrow_mut();
        let mut out = Family::new();
        for (c, elems) in t.supported() {
            let labels = elems.iter().map(|l| mint.opaque(l)).collect();
            out.insert(self.label(c), labels);
        }
        out
    }

    fn tensor_map(
        &self,
        x: &Family,
        y: &Family,
        _x2: &Family,
        _y2: &Family,
        f: &FamilyMap,
        g: &FamilyMap,
    ) -> FamilyMap {
        let cat = self.oc.cat();
        let t = coll::tensor(self.oc, &self.collection(x), &self.collection(y));
        let ff = |c: usize, e: &str| f.get(&(cat.object_label(c).to_string(), e.to_string())).cloned();
        let gg = |c: usize, e: &str| g.get(&(cat.object_label(c).to_string(), e.to_string())).cloned();
        let mut out = FamilyMap::new();
        for (c, elems) in t.supported() {
            for l in elems {
                let image = coll::map_element(self.oc, &ff, &gg, l)
                    .unwrap_or_else(|e| panic!("maps must be total on the tensor: {e}"));
                let mut mint = self.mint.borrow_mut();
                out.insert((self.label(c), mint.opaque(l)), mint.opaque(&image));
            }
        }
        out
    }

    fn alpha(&self, x: &Family, y: &Family, z: &Family) -> FamilyMap {
        let cat = self.oc.cat();
        let xy = self.tensor(x, y);
        let big = coll::tensor(self.oc, &self.collection(&xy), &self.collection(z));
        let mut out = FamilyMap::new();
        for (c, elems) in big.supported() {
            for l in elems {
                let el = decode_element(self.oc, l).expect("tensor labels decode");
                let real_inner = self
                    .mint
                    .borrow()
                    .backward
                    .get(&el.x)
                    .cloned()
                    .expect("first factors of a tensor over a tensor are minted");
                let ys: Vec<&str> = el.ys.iter().map(String::as_str).collect();
                let real = render_parts(&real_inner, cat.mor_label(el.phi), &ys);
                let image = coll::alpha(self.oc, &real).expect("alpha is total");
                let im = decode_element(self.oc, &image).expect("tensor labels decode");
                let mut mint = self.mint.borrow_mut();
                let nested: Vec<String> = im.ys.iter().map(|r| mint.opaque(r)).collect();
                let nested_refs: Vec<&str> = nested.iter().map(String::as_str).collect();
                let target = render_parts(&im.x, cat.mor_label(im.phi), &nested_refs);
                out.insert((self.label(c), mint.opaque(l)), mint.opaque(&target));
            }
        }
        out
    }

    fn lambda(&self, x: &Family) -> FamilyMap {
        let u = coll::unit(self.oc);
        let t = coll::tensor(self.oc, &u, &self.collection(x));
        let mut out = FamilyMap::new();
        for (c, elems) in t.supported() {
            for l in elems {
                let image = coll::lambda(self.oc, l).expect("lambda is total");
                out.insert((self.label(c), self.mint.borrow_mut().opaque(l)), image);
            }
        }
        out
    }

    fn rho(&self, x: &Family) -> FamilyMap {
        let mut out = FamilyMap::new();
        for (object, elems) in x {
            let c = self
                .oc
                .cat()
                .object(object)
                .unwrap_or_else(|| panic!("unknown object label {object:?}"));
            for e in elems {
                let image = coll::rho(self.oc, c, e).expect("rho is total");
                out.insert(
                    (object.clone(), e.clone()),
                    self.mint.borrow_mut().opaque(&image),
                );
            }
        }
        out
    }

    fn project(&self, x: &Family, y: &Family) -> Projections {
        let t = coll::tensor(self.oc, &self.collection(x), &self.collection(y));
        let mut out = Projections::new();
        for (c, elems) in t.supported() {
            for l in elems {
                let el = decode_element(self.oc, l).expect("tensor labels decode");
                let pr = Projection {
                    x: el.x,
                    map: self.oc.mor_card(el.phi).clone(),
                    ys: el.ys,
                };
                out.insert((self.label(c), self.mint.borrow_mut().opaque(l)), pr);
            }
        }
        out
    }
}

/// A rebuild together with the relabelling back onto its source and the
/// verdict on that relabelling.
pub struct RoundTrip {
    pub rebuilt: OperadicCategory,
    pub correspondence: OperadicFunctorData,
    pub report: ValidationReport,
}

/// Exposes `oc` through an [`OpaqueInterface`], rebuilds it, and checks that
/// sending each minted morphism back to the triple it stands for is an
/// isomorphism of operadic categories.
pub fn roundtrip(oc: &OperadicCategory) -> Result<RoundTrip, RebuildError> {
    let iface = OpaqueInterface::new(oc);
    let rebuilt = reconstruct(&iface)?;
    let rcat = rebuilt.cat();
    let scat = oc.cat();
    let object_map: Vec<(String, String)> = rcat
        .object_labels()
        .iter()
        .map(|o| (o.clone(), o.clone()))
        .collect();
    let mut morphism_map = Vec::new();
    for m in 0..rcat.n_morphisms() {
        let label = rcat.mor_label(m);
        let real = iface
            .reveal(label)
            .ok_or_else(|| shape(format!("morphism {label:?} has no source counterpart")))?;
        let el = decode_element(oc, &real).map_err(|e| shape(e.to_string()))?;
        morphism_map.push((label.to_string(), scat.mor_label(el.phi).to_string()));
    }
    let correspondence = OperadicFunctorData::new(object_map, morphism_map);
    let mut report = validate_functor(&rebuilt, oc, &correspondence);
    if rcat.n_objects() != scat.n_objects() {
        report.fail(
            "bijective",
            "object counts differ",
            vec![rcat.n_objects().to_string(), scat.n_objects().to_string()],
        );
    }
    if rcat.n_morphisms() != scat.n_morphisms() {
        report.fail(
            "bijective",
            "morphism counts differ",
            vec![
                rcat.n_morphisms().to_string(),
                scat.n_morphisms().to_string(),
            ],
        );
    }
    let distinct: BTreeSet<&str> = correspondence
        .morphism_map
        .iter()
        .map(|(_, to)| to.as_str())
        .collect();
    if distinct.len() != correspondence.morphism_map.len() {
        report.fail(
            "bijective",
            "two rebuilt morphisms stand for the same source morphism",
            vec![],
        );
    }
    Ok(RoundTrip {
        rebuilt,
        correspondence,
        report,
    })
}
