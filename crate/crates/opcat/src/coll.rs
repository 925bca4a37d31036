//! Collections over an operadic category and their skew monoidal structure.
//!
//! A collection is a finite family of element labels indexed by the objects
//! of the category. The substitution tensor is
//!
//! ```text
//! (X * Y)_c  =  sum over phi: c -> d  of  X_d x prod over i in |d| of Y_{fibre(phi, i)}
//! ```
//!
//! with unit the collection of trivial objects. Elements of a tensor are
//! triples `(x, phi, ys)` rendered as canonical string labels, so nested
//! tensors are ordinary collections again and equality of elements is string
//! equality. The structure maps `alpha`, `lambda`, `rho` act on those labels,
//! and [`verify_skew_axioms`] checks the five skew monoidal axioms plus
//! naturality pointwise.

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::operadic::OperadicCategory;
use crate::report::ValidationReport;
use crate::sample::Sampler;

const EMPTY: &[String] = &[];

/// A finite collection: for each object `c`, a finite set `X_c` of element
/// labels. Objects without an entry carry the empty set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Collection {
    sets: BTreeMap<usize, Vec<String>>,
}

impl Collection {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder form used by tests: `Collection::new().with(0, &["a"])`.
    pub fn with(mut self, object: usize, elems: &[&str]) -> Self {
        self.set(object, elems.iter().map(|s| s.to_string()).collect());
        self
    }

    pub fn insert(&mut self, object: usize, label: impl Into<String>) {
        self.sets.entry(object).or_default().push(label.into());
    }

    pub fn set(&mut self, object: usize, elems: Vec<String>) {
        if elems.is_empty() {
            self.sets.remove(&object);
        } else {
            self.sets.insert(object, elems);
        }
    }

    /// The elements over `object`, in insertion order.
    pub fn at(&self, object: usize) -> &[String] {
        self.sets.get(&object).map(Vec::as_slice).unwrap_or(EMPTY)
    }

    pub fn contains(&self, object: usize, label: &str) -> bool {
        self.at(object).iter().any(|l| l == label)
    }

    /// Objects with a nonempty set, ascending, paired with their elements.
    pub fn supported(&self) -> impl Iterator<Item = (usize, &[String])> {
        self.sets.iter().map(|(&c, v)| (c, v.as_slice()))
    }

    pub fn total(&self) -> usize {
        self.sets.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Per-object membership index for repeated lookups.
    fn index(&self) -> BTreeMap<usize, HashSet<&str>> {
        self.sets
            .iter()
            .map(|(&c, v)| (c, v.iter().map(String::as_str).collect()))
            .collect()
    }
}

/// A map of collections: for each object, a function on element labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CollectionMap {
    entries: BTreeMap<(usize, String), String>,
}

impl CollectionMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn identity(coll: &Collection) -> Self {
        let mut map = Self::new();
        for (c, elems) in coll.supported() {
            for e in elems {
                map.insert(c, e.clone(), e.clone());
            }
        }
        map
    }

    pub fn insert(&mut self, object: usize, from: impl Into<String>, to: impl Into<String>) {
        self.entries.insert((object, from.into()), to.into());
    }

    pub fn get(&self, object: usize, from: &str) -> Option<&str> {
        self.entries
            .get(&(object, from.to_string()))
            .map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, &str, &str)> {
        self.entries
            .iter()
            .map(|((c, from), to)| (*c, from.as_str(), to.as_str()))
    }

    /// Checks totality on `src` and that images land in `dst`.
    pub fn is_total(&self, src: &Collection, dst: &Collection) -> bool {
        src.supported().all(|(c, elems)| {
            elems
                .iter()
                .all(|e| self.get(c, e).is_some_and(|im| dst.contains(c, im)))
        })
    }

    pub fn as_fn(&self) -> impl Fn(usize, &str) -> Option<String> + '_ {
        move |c, from| self.get(c, from).map(String::from)
    }
}

/// One element `(x, phi, ys)` of a tensor `(X * Y)_{dom phi}`: `x` lies in
/// `X` over `cod phi` and `ys[i]` lies in `Y` over `fibre(phi, i + 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub x: String,
    pub phi: usize,
    pub ys: Vec<String>,
}

impl TensorElement {
    pub fn label(&self, oc: &OperadicCategory) -> String {
        let ys: Vec<&str> = self.ys.iter().map(String::as_str).collect();
        render_parts(&self.x, oc.cat().mor_label(self.phi), &ys)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("label {0} is not a tensor element")]
    NotTensor(String),
    #[error("label {0} names no morphism")]
    UnknownMorphism(String),
    #[error("element {0} is ill typed: {1}")]
    IllTyped(String, String),
    #[error("morphisms {outer} and {inner} do not compose")]
    NotComposable { outer: String, inner: String },
    #[error("no fibre recorded for {0} at position {1}")]
    MissingFibre(String, usize),
    #[error("no fibre morphism recorded for ({outer}, {inner}) at position {at}")]
    MissingFibreMorphism {
        outer: String,
        inner: String,
        at: usize,
    },
    #[error("object {0} has no identity")]
    MissingIdentity(String),
    #[error("map undefined on {0} over object {1}")]
    MapUndefined(String, String),
}

fn esc_into(out: &mut String, s: &str) {
    for ch in s.chars() {
        if ch == '\\' || ch == '|' || ch == ',' {
            out.push('\\');
        }
        out.push(ch);
    }
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(ch);
        }
    }
    out
}

/// Splits on unescaped occurrences of `delim`, keeping escapes intact.
fn split_keep(s: &str, delim: char) -> Vec<String> {
    let mut parts = vec![String::new()];
    let mut chars = s.chars();
    while let Some(ch) = chars.next() {
        if ch == '\\' {
            parts.last_mut().unwrap().push(ch);
            if let Some(next) = chars.next() {
                parts.last_mut().unwrap().push(next);
            }
        } else if ch == delim {
            parts.push(String::new());
        } else {
            parts.last_mut().unwrap().push(ch);
        }
    }
    parts
}

/// Canonical label of a tensor element. The three parts are separated by
/// `|`, the family by `,`, with `\` escaping those characters inside parts.
pub fn render_parts(x: &str, phi_label: &str, ys: &[&str]) -> String {
    let mut out = String::from("(");
    esc_into(&mut out, x);
    out.push('|');
    esc_into(&mut out, phi_label);
    out.push('|');
    for (k, y) in ys.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        esc_into(&mut out, y);
    }
    out.push(')');
    out
}

/// Inverse of [`render_parts`], resolving the morphism part to its index.
pub fn decode_element(
    oc: &OperadicCategory,
    label: &str,
) -> Result<TensorElement, StructureError> {
    let inner = label
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| StructureError::NotTensor(label.to_string()))?;
    let parts = split_keep(inner, '|');
    if parts.len() != 3 {
        return Err(StructureError::NotTensor(label.to_string()));
    }
    let x = unescape(&parts[0]);
    let phi_label = unescape(&parts[1]);
    let phi = oc
        .cat()
        .mor(&phi_label)
        .ok_or(StructureError::UnknownMorphism(phi_label))?;
    let ys = if parts[2].is_empty() {
        Vec::new()
    } else {
        split_keep(&parts[2], ',')
            .iter()
            .map(|p| unescape(p))
            .collect()
    };
    Ok(TensorElement { x, phi, ys })
}

/// The substitution tensor `X * Y`, with elements enumerated per object by
/// outgoing morphism, then by element of `X`, then lexicographically over
/// the fibre family.
pub fn tensor(oc: &OperadicCategory, xs: &Collection, ys: &Collection) -> Collection {
    let cat = oc.cat();
    let mut out = Collection::new();
    for c in 0..cat.n_objects() {
        let mut elems = Vec::new();
        for &phi in cat.hom_out(c) {
            let d = cat.cod(phi);
            let xd = xs.at(d);
            if xd.is_empty() {
                continue;
            }
            let card = oc.obj_card(d);
            let mut factors: Vec<&[String]> = Vec::with_capacity(card);
            let mut complete = true;
            for i in 1..=card {
                match oc.fibre(phi, i) {
                    Some(f) if !ys.at(f).is_empty() => factors.push(ys.at(f)),
                    _ => {
                        complete = false;
                        break;
                    }
                }
            }
            if !complete {
                continue;
            }
            let phi_label = cat.mor_label(phi);
            for x in xd {
                let mut counters = vec![0usize; card];
                loop {
                    let tuple: Vec<&str> = counters
                        .iter()
                        .zip(&factors)
                        .map(|(&k, f)| f[k].as_str())
                        .collect();
                    elems.push(render_parts(x, phi_label, &tuple));
                    let mut pos = card;
                    while pos > 0 {
                        counters[pos - 1] += 1;
                        if counters[pos - 1] < factors[pos - 1].len() {
                            break;
                        }
                        counters[pos - 1] = 0;
                        pos -= 1;
                    }
                    if pos == 0 {
                        break;
                    }
                }
            }
        }
        out.set(c, elems);
    }
    out
}

/// The unit collection: one element per trivial object, labelled by the
/// object itself.
pub fn unit(oc: &OperadicCategory) -> Collection {
    let mut out = Collection::new();
    for u in oc.trivial_objects() {
        out.insert(u, oc.cat().object_label(u));
    }
    out
}

/// The collection with one element per object, labelled by the object. It
/// is terminal: every collection maps to it by sending an element to its
/// object's label.
pub fn identity_collection(oc: &OperadicCategory) -> Collection {
    let mut out = Collection::new();
    for c in 0..oc.cat().n_objects() {
        out.insert(c, oc.cat().object_label(c));
    }
    out
}

/// `alpha((x, psi, ys), phi, zs) = (x, psi . phi, nested)` where the `j`-th
/// nested element is `(ys[j], fibre_morphism(phi, psi, j), zs restricted to
/// the j-th fibre of |psi|)`.
pub fn alpha(oc: &OperadicCategory, label: &str) -> Result<String, StructureError> {
    let cat = oc.cat();
    let outer = decode_element(oc, label)?;
    let inner = decode_element(oc, &outer.x)?;
    let phi = outer.phi;
    let psi = inner.phi;
    let mid = cat.cod(phi);
    if cat.dom(psi) != mid {
        return Err(StructureError::NotComposable {
            outer: cat.mor_label(psi).to_string(),
            inner: cat.mor_label(phi).to_string(),
        });
    }
    if outer.ys.len() != oc.obj_card(mid) {
        return Err(StructureError::IllTyped(
            label.to_string(),
            format!(
                "family has {} entries, cod of {} has cardinality {}",
                outer.ys.len(),
                cat.mor_label(phi),
                oc.obj_card(mid)
            ),
        ));
    }
    let top = cat.cod(psi);
    if inner.ys.len() != oc.obj_card(top) {
        return Err(StructureError::IllTyped(
            outer.x.clone(),
            format!(
                "family has {} entries, cod of {} has cardinality {}",
                inner.ys.len(),
                cat.mor_label(psi),
                oc.obj_card(top)
            ),
        ));
    }
    let composite = cat
        .compose(psi, phi)
        .ok_or_else(|| StructureError::NotComposable {
            outer: cat.mor_label(psi).to_string(),
            inner: cat.mor_label(phi).to_string(),
        })?;
    let grouping = oc.mor_card(psi).fibres();
    let mut nested = Vec::with_capacity(inner.ys.len());
    for j in 1..=oc.obj_card(top) {
        let fm = oc.fibre_morphism(phi, psi, j).ok_or_else(|| {
            StructureError::MissingFibreMorphism {
                outer: cat.mor_label(psi).to_string(),
                inner: cat.mor_label(phi).to_string(),
                at: j,
            }
        })?;
        let block: Vec<&str> = grouping
            .embed(j)
            .iter()
            .map(|&i| outer.ys[i - 1].as_str())
            .collect();
        nested.push(render_parts(&inner.ys[j - 1], cat.mor_label(fm), &block));
    }
    let nested_refs: Vec<&str> = nested.iter().map(String::as_str).collect();
    Ok(render_parts(
        &inner.x,
        cat.mor_label(composite),
        &nested_refs,
    ))
}

/// `lambda(u, phi, (x)) = x` for `phi` into a trivial object.
pub fn lambda(oc: &OperadicCategory, label: &str) -> Result<String, StructureError> {
    let el = decode_element(oc, label)?;
    let cod = oc.cat().cod(el.phi);
    if !oc.is_trivial(cod) {
        return Err(StructureError::IllTyped(
            label.to_string(),
            format!("cod of {} is not trivial", oc.cat().mor_label(el.phi)),
        ));
    }
    if el.ys.len() != 1 {
        return Err(StructureError::IllTyped(
            label.to_string(),
            format!("family has {} entries, expected 1", el.ys.len()),
        ));
    }
    Ok(el.ys[0].clone())
}

/// `rho(x) = (x, 1_c, units at the fibres of 1_c)` for `x` over `c`.
pub fn rho(oc: &OperadicCategory, object: usize, x: &str) -> Result<String, StructureError> {
    let cat = oc.cat();
    let id = cat
        .identity(object)
        .ok_or_else(|| StructureError::MissingIdentity(cat.object_label(object).to_string()))?;
    let mut ys = Vec::with_capacity(oc.obj_card(object));
    for i in 1..=oc.obj_card(object) {
        let f = oc
            .fibre(id, i)
            .ok_or_else(|| StructureError::MissingFibre(cat.mor_label(id).to_string(), i))?;
        ys.push(cat.object_label(f));
    }
    Ok(render_parts(x, cat.mor_label(id), &ys))
}

/// Applies `f` on the `x` part and `g` on the family of a tensor element:
/// the action of the tensor on a pair of collection maps.
pub fn map_element(
    oc: &OperadicCategory,
    f: &dyn Fn(usize, &str) -> Option<String>,
    g: &dyn Fn(usize, &str) -> Option<String>,
    label: &str,
) -> Result<String, StructureError> {
    let cat = oc.cat();
    let el = decode_element(oc, label)?;
    let d = cat.cod(el.phi);
    let fx = f(d, &el.x).ok_or_else(|| {
        StructureError::MapUndefined(el.x.clone(), cat.object_label(d).to_string())
    })?;
    let mut ys = Vec::with_capacity(el.ys.len());
    for (i, y) in el.ys.iter().enumerate() {
        let fib = oc
            .fibre(el.phi, i + 1)
            .ok_or_else(|| StructureError::MissingFibre(cat.mor_label(el.phi).to_string(), i + 1))?;
        ys.push(g(fib, y).ok_or_else(|| {
            StructureError::MapUndefined(y.clone(), cat.object_label(fib).to_string())
        })?);
    }
    let ys_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
    Ok(render_parts(&fx, cat.mor_label(el.phi), &ys_refs))
}

fn fail_err(rep: &mut ValidationReport, check: &str, e: &StructureError, witness: Vec<String>) {
    rep.fail(check, e.to_string(), witness);
}

/// Describes a pentagon input as its seven constituents: the innermost
/// element, three morphisms working outwards, and the three families.
fn pentagon_tuple(oc: &OperadicCategory, label: &str) -> Vec<String> {
    let mut parts = Vec::new();
    match decode_element(oc, label) {
        Ok(outer) => match decode_element(oc, &outer.x) {
            Ok(mid) => match decode_element(oc, &mid.x) {
                Ok(core) => {
                    parts.push(core.x);
                    parts.push(oc.cat().mor_label(core.phi).to_string());
                    parts.push(core.ys.join(" "));
                    parts.push(oc.cat().mor_label(mid.phi).to_string());
                    parts.push(mid.ys.join(" "));
                    parts.push(oc.cat().mor_label(outer.phi).to_string());
                    parts.push(outer.ys.join(" "));
                }
                Err(_) => parts.push(label.to_string()),
            },
            Err(_) => parts.push(label.to_string()),
        },
        Err(_) => parts.push(label.to_string()),
    }
    parts
}

/// Pointwise verification of the five skew monoidal axioms on the given
/// collections, plus naturality of the structure maps against sampled
/// collection maps drawn from `sampler`.
pub fn verify_skew_axioms(
    oc: &OperadicCategory,
    w: &Collection,
    x: &Collection,
    y: &Collection,
    z: &Collection,
    sampler: &mut Sampler,
) -> ValidationReport {
    let mut rep = ValidationReport::new();
    let cat = oc.cat();
    let u = unit(oc);
    let mut checked = 0u64;

    for (ob, elems) in u.supported() {
        for v in elems {
            checked += 1;
            let round = rho(oc, ob, v).and_then(|r| lambda(oc, &r));
            match round {
                Ok(back) if back == *v => {}
                Ok(back) => rep.fail(
                    "lambda-rho-unit",
                    "lambda after rho does not fix the unit element",
                    vec![cat.object_label(ob).to_string(), v.clone(), back],
                ),
                Err(e) => fail_err(
                    &mut rep,
                    "lambda-rho-unit",
                    &e,
                    vec![cat.object_label(ob).to_string(), v.clone()],
                ),
            }
        }
    }

    let xy = tensor(oc, x, y);
    let xy_idx = xy.index();
    let ux = tensor(oc, &u, x);
    let uxy = tensor(oc, &ux, y);
    for (c, elems) in uxy.supported() {
        for el in elems {
            checked += 1;
            let lhs = alpha(oc, el).and_then(|a| lambda(oc, &a));
            let rhs = decode_element(oc, el).and_then(|t| {
                let lx = lambda(oc, &t.x)?;
                let ys: Vec<&str> = t.ys.iter().map(String::as_str).collect();
                Ok(render_parts(&lx, cat.mor_label(t.phi), &ys))
            });
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        rep.fail(
                            "alpha-lambda",
                            "lambda after alpha disagrees with lambda on the left factor",
                            vec![cat.object_label(c).to_string(), el.clone(), a.clone(), b],
                        );
                    } else if !xy_idx.get(&c).is_some_and(|s| s.contains(a.as_str())) {
                        rep.fail(
                            "alpha-lambda",
                            "image is not an element of the target tensor",
                            vec![cat.object_label(c).to_string(), el.clone(), a],
                        );
                    }
                }
                (Err(e), _) | (_, Err(e)) => fail_err(
                    &mut rep,
                    "alpha-lambda",
                    &e,
                    vec![cat.object_label(c).to_string(), el.clone()],
                ),
            }
        }
    }

    let yu = tensor(oc, y, &u);
    let x_yu = tensor(oc, x, &yu);
    let x_yu_idx = x_yu.index();
    for (c, elems) in xy.supported() {
        for el in elems {
            checked += 1;
            let lhs = rho(oc, c, el).and_then(|r| alpha(oc, &r));
            let rhs = decode_element(oc, el).and_then(|t| {
                let mut ys = Vec::with_capacity(t.ys.len());
                for (i, yel) in t.ys.iter().enumerate() {
                    let fib = oc.fibre(t.phi, i + 1).ok_or_else(|| {
                        StructureError::MissingFibre(cat.mor_label(t.phi).to_string(), i + 1)
                    })?;
                    ys.push(rho(oc, fib, yel)?);
                }
                let ys_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
                Ok(render_parts(&t.x, cat.mor_label(t.phi), &ys_refs))
            });
            match (lhs, rhs) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        rep.fail(
                            "alpha-rho",
                            "alpha after rho disagrees with rho on the family",
                            vec![cat.object_label(c).to_string(), el.clone(), a.clone(), b],
                        );
                    } else if !x_yu_idx.get(&c).is_some_and(|s| s.contains(a.as_str())) {
                        rep.fail(
                            "alpha-rho",
                            "image is not an element of the target tensor",
                            vec![cat.object_label(c).to_string(), el.clone(), a],
                        );
                    }
                }
                (Err(e), _) | (_, Err(e)) => fail_err(
                    &mut rep,
                    "alpha-rho",
                    &e,
                    vec![cat.object_label(c).to_string(), el.clone()],
                ),
            }
        }
    }

    for (c, elems) in xy.supported() {
        for el in elems {
            checked += 1;
            let round = decode_element(oc, el)
                .and_then(|t| {
                    let d = cat.cod(t.phi);
                    let rx = rho(oc, d, &t.x)?;
                    let ys: Vec<&str> = t.ys.iter().map(String::as_str).collect();
                    Ok(render_parts(&rx, cat.mor_label(t.phi), &ys))
                })
                .and_then(|staged| alpha(oc, &staged))
                .and_then(|assoc| {
                    let t = decode_element(oc, &assoc)?;
                    let mut ys = Vec::with_capacity(t.ys.len());
                    for yel in &t.ys {
                        ys.push(lambda(oc, yel)?);
                    }
                    let ys_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
                    Ok(render_parts(&t.x, cat.mor_label(t.phi), &ys_refs))
                });
            match round {
                Ok(back) if back == *el => {}
                Ok(back) => rep.fail(
                    "lambda-alpha-rho",
                    "inserting and removing the unit in the middle is not the identity",
                    vec![cat.object_label(c).to_string(), el.clone(), back],
                ),
                Err(e) => fail_err(
                    &mut rep,
                    "lambda-alpha-rho",
                    &e,
                    vec![cat.object_label(c).to_string(), el.clone()],
                ),
            }
        }
    }

    let wx = tensor(oc, w, x);
    let wxy = tensor(oc, &wx, y);
    let wxyz = tensor(oc, &wxy, z);
    let yz = tensor(oc, y, z);
    let x_yz = tensor(oc, x, &yz);
    let w_x_yz = tensor(oc, w, &x_yz);
    let target_idx = w_x_yz.index();
    let mut pentagon_elements = 0u64;
    for (c, elems) in wxyz.supported() {
        for el in elems {
            pentagon_elements += 1;
            let path_a = alpha(oc, el).and_then(|a| alpha(oc, &a));
            let path_b = decode_element(oc, el)
                .and_then(|t| {
                    let inner = alpha(oc, &t.x)?;
                    let ys: Vec<&str> = t.ys.iter().map(String::as_str).collect();
                    Ok(render_parts(&inner, cat.mor_label(t.phi), &ys))
                })
                .and_then(|staged| alpha(oc, &staged))
                .and_then(|assoc| {
                    let t = decode_element(oc, &assoc)?;
                    let mut ys = Vec::with_capacity(t.ys.len());
                    for yel in &t.ys {
                        ys.push(alpha(oc, yel)?);
                    }
                    let ys_refs: Vec<&str> = ys.iter().map(String::as_str).collect();
                    Ok(render_parts(&t.x, cat.mor_label(t.phi), &ys_refs))
                });
            match (path_a, path_b) {
                (Ok(a), Ok(b)) => {
                    if a != b {
                        let mut witness = vec![cat.object_label(c).to_string()];
                        witness.extend(pentagon_tuple(oc, el));
                        witness.push(a.clone());
                        witness.push(b);
                        rep.fail("pentagon", "the two pentagon paths disagree", witness);
                    } else if !target_idx.get(&c).is_some_and(|s| s.contains(a.as_str())) {
                        let mut witness = vec![cat.object_label(c).to_string()];
                        witness.extend(pentagon_tuple(oc, el));
                        witness.push(a);
                        rep.fail(
                            "pentagon",
                            "image is not an element of the target tensor",
                            witness,
                        );
                    }
                }
                (Err(e), _) | (_, Err(e)) => {
                    let mut witness = vec![cat.object_label(c).to_string()];
                    witness.extend(pentagon_tuple(oc, el));
                    fail_err(&mut rep, "pentagon", &e, witness);
                }
            }
        }
    }
    rep.set_stat("pentagon-elements", pentagon_elements);

    let (_, gm) = sampler.map_into(oc, x, "nx");
    let (_, hm) = sampler.map_into(oc, y, "ny");
    let (_, km) = sampler.map_into(oc, z, "nz");
    let g = gm.as_fn();
    let h = hm.as_fn();
    let k = km.as_fn();
    let echo = |_: usize, s: &str| Some(s.to_string());

    for (c, elems) in ux.supported() {
        for el in elems {
            checked += 1;
            let lhs = lambda(oc, el).and_then(|lx| {
                g(c, &lx).ok_or_else(|| {
                    StructureError::MapUndefined(lx, cat.object_label(c).to_string())
                })
            });
            let rhs = map_element(oc, &echo, &g, el).and_then(|m| lambda(oc, &m));
            if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() || rhs.is_err() {
                rep.fail(
                    "lambda-naturality",
                    "lambda does not commute with the sampled map",
                    vec![cat.object_label(c).to_string(), el.clone()],
                );
            }
        }
    }

    for (c, elems) in x.supported() {
        for el in elems {
            checked += 1;
            let lhs = g(c, el)
                .ok_or_else(|| {
                    StructureError::MapUndefined(el.clone(), cat.object_label(c).to_string())
                })
                .and_then(|gx| rho(oc, c, &gx));
            let rhs = rho(oc, c, el).and_then(|r| map_element(oc, &g, &echo, &r));
            if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() || rhs.is_err() {
                rep.fail(
                    "rho-naturality",
                    "rho does not commute with the sampled map",
                    vec![cat.object_label(c).to_string(), el.clone()],
                );
            }
        }
    }

    let xyz = tensor(oc, &xy, z);
    let gh = |_: usize, lbl: &str| map_element(oc, &g, &h, lbl).ok();
    let hk = |_: usize, lbl: &str| map_element(oc, &h, &k, lbl).ok();
    for (c, elems) in xyz.supported() {
        for el in elems {
            checked += 1;
            let lhs = map_element(oc, &gh, &k, el).and_then(|m| alpha(oc, &m));
            let rhs = alpha(oc, el).and_then(|a| map_element(oc, &g, &hk, &a));
            if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() || rhs.is_err() {
                rep.fail(
                    "alpha-naturality",
                    "alpha does not commute with the sampled maps",
                    vec![cat.object_label(c).to_string(), el.clone()],
                );
            }
        }
    }

    rep.set_stat("elements-checked", checked + pentagon_elements);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{discrete_zero, finite_ordinals, finite_sets};
    use crate::cat::FinCategory;
    use crate::operadic::{validate_operadic, OperadicCategory};

    fn s(n: usize) -> OperadicCategory {
        finite_sets(n)
    }

    #[test]
    fn labels_round_trip_through_escaping() {
        let oc = s(1);
        let label = render_parts("a|b,c\\d", "1>1[1]", &["x,y", "p|q"]);
        let el = decode_element(&oc, &label).unwrap();
        assert_eq!(el.x, "a|b,c\\d");
        assert_eq!(el.ys, vec!["x,y".to_string(), "p|q".to_string()]);
        assert_eq!(el.label(&oc), label);
    }

    #[test]
    fn tensor_on_finite_sets_one_matches_hand_enumeration() {
        let oc = s(1);
        let x = Collection::new().with(0, &["a"]).with(1, &["b"]);
        let t = tensor(&oc, &x, &x);
        assert_eq!(
            t.at(0),
            &["(a|0>0[]|)".to_string(), "(b|0>1[]|a)".to_string()]
        );
        assert_eq!(t.at(1).len(), 1);
        assert_eq!(t.at(1), &["(b|1>1[1]|b)".to_string()]);
    }

    #[test]
    fn tensor_with_empty_left_factor_is_empty() {
        let oc = s(2);
        let x = Collection::new();
        let y = Collection::new().with(1, &["b"]);
        assert!(tensor(&oc, &x, &y).is_empty());
    }

    #[test]
    fn empty_family_gives_elements_over_cardinality_zero() {
        let mut base = FinCategory::default();
        base.objects.push("n".to_string());
        base.morphisms.push(crate::cat::MorphismRecord {
            label: "1n".to_string(),
            dom: "n".to_string(),
            cod: "n".to_string(),
        });
        base.identities.push(("n".to_string(), "1n".to_string()));
        base.composition
            .push(("1n".to_string(), "1n".to_string(), "1n".to_string()));
        let oc = discrete_zero(&base).unwrap();
        let x = Collection::new().with(0, &["a"]);
        let y = Collection::new();
        let t = tensor(&oc, &x, &y);
        assert_eq!(t.at(0), &["(a|1n|)".to_string()]);
    }

    #[test]
    fn unit_is_supported_on_trivial_objects() {
        let oc = s(2);
        let u = unit(&oc);
        assert!(u.at(0).is_empty());
        assert_eq!(u.at(1), &["1".to_string()]);
        assert!(u.at(2).is_empty());
    }

    #[test]
    fn rho_pads_with_units_at_identity_fibres() {
        let oc = s(2);
        let two = oc.cat().object("2").unwrap();
        let r = rho(&oc, two, "a").unwrap();
        assert_eq!(r, "(a|2>2[1 2]|1,1)");
        let el = decode_element(&oc, &r).unwrap();
        assert!(oc.cat().is_identity(el.phi));
    }

    #[test]
    fn lambda_projects_the_single_family_entry() {
        let oc = s(1);
        let u = unit(&oc);
        let x = Collection::new().with(0, &["a"]).with(1, &["b"]);
        let ux = tensor(&oc, &u, &x);
        assert_eq!(ux.at(0), &["(1|0>1[]|a)".to_string()]);
        assert_eq!(lambda(&oc, "(1|0>1[]|a)").unwrap(), "a");
    }

    #[test]
    fn alpha_composes_and_restricts_families() {
        let oc = s(2);
        let swap = "2>2[2 1]";
        let bang = "2>1[1 1]";
        let inner = render_parts("x", bang, &["y"]);
        let el = render_parts(&inner, swap, &["z1", "z2"]);
        let image = alpha(&oc, &el).unwrap();
        let composed = decode_element(&oc, &image).unwrap();
        assert_eq!(oc.cat().mor_label(composed.phi), bang);
        assert_eq!(composed.x, "x");
        assert_eq!(composed.ys.len(), 1);
        let nested = decode_element(&oc, &composed.ys[0]).unwrap();
        assert_eq!(oc.cat().mor_label(nested.phi), swap);
        assert_eq!(nested.x, "y");
        assert_eq!(nested.ys, vec!["z1".to_string(), "z2".to_string()]);
    }

    #[test]
    fn axioms_hold_on_sampled_collections() {
        for oc in [s(2), finite_ordinals(2)] {
            assert!(validate_operadic(&oc).pass());
            let mut sampler = Sampler::new(0, 2);
            let w = sampler.collection(&oc, "w");
            let x = sampler.collection(&oc, "x");
            let y = sampler.collection(&oc, "y");
            let z = sampler.collection(&oc, "z");
            let rep = verify_skew_axioms(&oc, &w, &x, &y, &z, &mut sampler);
            assert!(rep.pass(), "{}", rep.render());
        }
    }

    #[test]
    fn axioms_hold_on_empty_collections() {
        let oc = s(2);
        let e = Collection::new();
        let mut sampler = Sampler::new(0, 2);
        let rep = verify_skew_axioms(&oc, &e, &e, &e, &e, &mut sampler);
        assert!(rep.pass(), "{}", rep.render());
    }

    #[test]
    fn corrupted_composition_breaks_the_pentagon() {
        let oc = s(2);
        let mut base = oc.cat().raw();
        let swap = "2>2[2 1]".to_string();
        for entry in &mut base.composition {
            if entry.0 == swap && entry.1 == swap {
                entry.2 = swap.clone();
            }
        }
        let fibres: Vec<(String, Vec<String>)> = oc
            .fibre_table()
            .into_iter()
            .map(|(m, objs)| {
                (
                    oc.cat().mor_label(m).to_string(),
                    objs.iter()
                        .map(|&o| oc.cat().object_label(o).to_string())
                        .collect(),
                )
            })
            .collect();
        let fibre_mors: Vec<(String, String, Vec<String>)> = oc
            .fibre_morphism_table()
            .into_iter()
            .map(|(outer, inner, fams)| {
                (
                    oc.cat().mor_label(outer).to_string(),
                    oc.cat().mor_label(inner).to_string(),
                    fams.iter()
                        .map(|&m| oc.cat().mor_label(m).to_string())
                        .collect(),
                )
            })
            .collect();
        let cards: Vec<usize> = oc.obj_cards().to_vec();
        let card_maps: Vec<Vec<usize>> = (0..oc.cat().n_morphisms())
            .map(|m| oc.mor_card(m).values().to_vec())
            .collect();
        let broken =
            OperadicCategory::new(&base, &cards, &card_maps, &fibres, &fibre_mors).unwrap();

        let full = {
            let mut c = Collection::new();
            for ob in 0..broken.cat().n_objects() {
                c.insert(ob, format!("e{ob}"));
            }
            c
        };
        let mut sampler = Sampler::new(0, 2);
        let rep = verify_skew_axioms(&broken, &full, &full, &full, &full, &mut sampler);
        assert!(!rep.pass());
        let pentagon = rep.failures_for("pentagon");
        assert!(!pentagon.is_empty());
        assert!(pentagon[0].witness.len() >= 8);
    }

    #[test]
    fn tensor_is_stable_under_relabelling() {
        let oc = s(2);
        let x = Collection::new().with(1, &["p", "q"]).with(2, &["r"]);
        let y = Collection::new().with(1, &["m"]).with(2, &["n"]);
        let t1 = tensor(&oc, &x, &y);
        let rename = |s: &str| format!("{s}{s}");
        let mut x2 = Collection::new();
        for (c, elems) in x.supported() {
            for e in elems {
                x2.insert(c, rename(e));
            }
        }
        let mut y2 = Collection::new();
        for (c, elems) in y.supported() {
            for e in elems {
                y2.insert(c, rename(e));
            }
        }
        let t2 = tensor(&oc, &x2, &y2);
        for c in 0..oc.cat().n_objects() {
            assert_eq!(t1.at(c).len(), t2.at(c).len());
        }
    }
}
