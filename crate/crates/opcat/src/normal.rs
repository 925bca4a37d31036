//! Fibrewise-trivial morphisms, presheaves over them, and the wedge tensor.
//!
//! A morphism is fibrewise trivial when all of its fibres are trivial
//! objects. These morphisms form a subcategory containing every object; a
//! presheaf on that subcategory is the same thing as a right module over
//! the unit collection, and both readings are checked independently by
//! [`validate_presheaf`]. The wedge `X ∧ Y` quotients the tensor of the
//! carriers by sliding fibrewise-trivial factors of the middle morphism
//! into the module actions, which makes the right unit map invertible.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::cat::FinCategory;
use crate::coll::{self, Collection};
use crate::operadic::OperadicCategory;
use crate::report::ValidationReport;
use crate::uf::UnionFind;

#[derive(Debug, Error)]
pub enum NormalError {
    #[error("identity {0} is not fibrewise trivial")]
    IdentityNotTrivial(String),
    #[error("fibrewise-trivial morphisms are not closed under composition: {outer} after {inner}")]
    NotClosed { outer: String, inner: String },
    #[error("fibre data is incomplete for {0}")]
    MissingData(String),
    #[error("quotient generator for {0} violates the fibre equality at position {1}")]
    FibreMismatch(String, usize),
    #[error("presheaf action is undefined for ({0}, {1})")]
    ActionUndefined(String, String),
    #[error("induced map depends on the representative of {0}")]
    RepresentativeDependent(String),
    #[error("element {0} is not part of the quotient domain")]
    UnknownElement(String),
}

/// True iff every fibre of `m` is a trivial object. Morphisms into
/// cardinality-zero objects are fibrewise trivial vacuously; missing fibre
/// data counts as not fibrewise trivial.
pub fn is_fibrewise_trivial(oc: &OperadicCategory, m: usize) -> bool {
    let card = oc.obj_card(oc.cat().cod(m));
    (1..=card).all(|i| oc.fibre(m, i).is_some_and(|f| oc.is_trivial(f)))
}

/// The subcategory of fibrewise-trivial morphisms, on all objects.
#[derive(Clone, Debug)]
pub struct FtSubcategory {
    pub cat: FinCategory,
    /// Ambient index of each subcategory morphism, in enumeration order.
    pub morphisms: Vec<usize>,
}

/// Closure properties of fibrewise-trivial morphisms, checked exhaustively:
/// fibre morphisms of a fibrewise-trivial morphism are fibrewise trivial,
/// and composition with a fibrewise-trivial outer factor preserves and
/// reflects fibrewise triviality.
pub fn check_ft_lemmas(oc: &OperadicCategory) -> ValidationReport {
    let cat = oc.cat();
    let mut rep = ValidationReport::new();
    let ft: Vec<bool> = (0..cat.n_morphisms())
        .map(|m| is_fibrewise_trivial(oc, m))
        .collect();
    let mut pairs = 0u64;
    for (outer, inner) in cat.composable_pairs() {
        pairs += 1;
        let Some(composite) = cat.compose(outer, inner) else {
            continue;
        };
        if ft[inner] {
            let card = oc.obj_card(cat.cod(outer));
            for j in 1..=card {
                match oc.fibre_morphism(inner, outer, j) {
                    Some(fm) if ft[fm] => {}
                    Some(fm) => rep.fail(
                        "ft-fibre-morphisms",
                        "fibre morphism of a fibrewise-trivial morphism is not fibrewise trivial",
                        vec![
                            cat.mor_label(inner).to_string(),
                            cat.mor_label(outer).to_string(),
                            j.to_string(),
                            cat.mor_label(fm).to_string(),
                        ],
                    ),
                    None => rep.fail(
                        "ft-fibre-morphisms",
                        "missing fibre morphism",
                        vec![
                            cat.mor_label(inner).to_string(),
                            cat.mor_label(outer).to_string(),
                            j.to_string(),
                        ],
                    ),
                }
            }
        }
        if ft[outer] && ft[inner] != ft[composite] {
            rep.fail(
                "ft-composition",
                "composition with a fibrewise-trivial outer factor changes fibrewise triviality",
                vec![
                    cat.mor_label(outer).to_string(),
                    cat.mor_label(inner).to_string(),
                    cat.mor_label(composite).to_string(),
                ],
            );
        }
    }
    rep.set_stat("ft-pairs", pairs);
    rep.set_stat("ft-morphisms", ft.iter().filter(|&&b| b).count() as u64);
    rep
}

pub fn ft_subcategory(oc: &OperadicCategory) -> Result<FtSubcategory, NormalError> {
    let cat = oc.cat();
    let ft: Vec<bool> = (0..cat.n_morphisms())
        .map(|m| is_fibrewise_trivial(oc, m))
        .collect();
    for c in 0..cat.n_objects() {
        let id = cat
            .identity(c)
            .ok_or_else(|| NormalError::MissingData(cat.object_label(c).to_string()))?;
        if !ft[id] {
            return Err(NormalError::IdentityNotTrivial(
                cat.mor_label(id).to_string(),
            ));
        }
    }
    let mut raw = FinCategory {
        objects: cat.object_labels().to_vec(),
        ..FinCategory::default()
    };
    let mut morphisms = Vec::new();
    for m in 0..cat.n_morphisms() {
        if ft[m] {
            morphisms.push(m);
            raw.morphisms.push(crate::cat::MorphismRecord {
                label: cat.mor_label(m).to_string(),
                dom: cat.object_label(cat.dom(m)).to_string(),
                cod: cat.object_label(cat.cod(m)).to_string(),
            });
        }
    }
    for c in 0..cat.n_objects() {
        raw.identities.push((
            cat.object_label(c).to_string(),
            cat.mor_label(cat.identity_of(c)).to_string(),
        ));
    }
    for (outer, inner) in cat.composable_pairs() {
        if !ft[outer] || !ft[inner] {
            continue;
        }
        let composite = cat.compose(outer, inner).filter(|&m| ft[m]).ok_or_else(|| {
            NormalError::NotClosed {
                outer: cat.mor_label(outer).to_string(),
                inner: cat.mor_label(inner).to_string(),
            }
        })?;
        raw.composition.push((
            cat.mor_label(outer).to_string(),
            cat.mor_label(inner).to_string(),
            cat.mor_label(composite).to_string(),
        ));
    }
    Ok(FtSubcategory {
        cat: raw,
        morphisms,
    })
}

/// A presheaf on the fibrewise-trivial subcategory: a carrier collection
/// together with, for each fibrewise-trivial `pi: c -> d`, a function
/// `X_d -> X_c` written `x . pi`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Presheaf {
    carrier: Collection,
    action: BTreeMap<(usize, String), String>,
}

impl Presheaf {
    pub fn new(carrier: Collection) -> Self {
        Self {
            carrier,
            action: BTreeMap::new(),
        }
    }

    pub fn carrier(&self) -> &Collection {
        &self.carrier
    }

    pub fn set_action(&mut self, pi: usize, x: impl Into<String>, result: impl Into<String>) {
        self.action.insert((pi, x.into()), result.into());
    }

    pub fn act(&self, pi: usize, x: &str) -> Option<&str> {
        self.action
            .get(&(pi, x.to_string()))
            .map(String::as_str)
    }

    pub fn action_entries(&self) -> impl Iterator<Item = (usize, &str, &str)> {
        self.action
            .iter()
            .map(|((pi, x), y)| (*pi, x.as_str(), y.as_str()))
    }
}

/// The unit collection as a presheaf: the action moves the unit element at
/// a trivial object along any fibrewise-trivial morphism between trivial
/// objects.
pub fn unit_presheaf(oc: &OperadicCategory) -> Presheaf {
    let cat = oc.cat();
    let mut p = Presheaf::new(coll::unit(oc));
    for m in 0..cat.n_morphisms() {
        if !is_fibrewise_trivial(oc, m) {
            continue;
        }
        let (c, d) = (cat.dom(m), cat.cod(m));
        if oc.is_trivial(c) && oc.is_trivial(d) {
            p.set_action(m, cat.object_label(d), cat.object_label(c));
        }
    }
    p
}

/// The free presheaf on a family of generators: an element over `c` is a
/// generator `g` at `d` together with a fibrewise-trivial `pi: c -> d`,
/// labelled `g@pi`, and the action precomposes `pi`.
pub fn free_presheaf(
    oc: &OperadicCategory,
    generators: &[(usize, String)],
) -> Result<Presheaf, NormalError> {
    let cat = oc.cat();
    for (d, name) in generators {
        if *d >= cat.n_objects() {
            return Err(NormalError::UnknownElement(format!("{name} at object {d}")));
        }
    }
    let ft: Vec<bool> = (0..cat.n_morphisms())
        .map(|m| is_fibrewise_trivial(oc, m))
        .collect();
    let mut carrier = Collection::new();
    let mut elems: Vec<(usize, String, usize)> = Vec::new();
    for c in 0..cat.n_objects() {
        for (d, name) in generators {
            for &pi in cat.hom_out(c) {
                if cat.cod(pi) == *d && ft[pi] {
                    let label = format!("{name}@{}", cat.mor_label(pi));
                    carrier.insert(c, label.clone());
                    elems.push((c, label, pi));
                }
            }
        }
    }
    let mut p = Presheaf::new(carrier);
    for (c, label, pi) in &elems {
        for sigma in 0..cat.n_morphisms() {
            if !ft[sigma] || cat.cod(sigma) != *c {
                continue;
            }
            let moved = cat
                .compose(*pi, sigma)
                .ok_or_else(|| NormalError::MissingData(cat.mor_label(*pi).to_string()))?;
            let name = label.split('@').next().unwrap_or(label);
            p.set_action(sigma, label.clone(), format!("{name}@{}", cat.mor_label(moved)));
        }
    }
    Ok(p)
}

/// Checks the presheaf laws directly and, independently, the two right
/// module diagrams for the induced map `X * U -> X`.
pub fn validate_presheaf(oc: &OperadicCategory, p: &Presheaf) -> ValidationReport {
    let cat = oc.cat();
    let mut rep = ValidationReport::new();
    let ft: Vec<bool> = (0..cat.n_morphisms())
        .map(|m| is_fibrewise_trivial(oc, m))
        .collect();

    for (pi, x, y) in p.action_entries() {
        if !ft[pi] {
            rep.fail(
                "action-typing",
                "action entry on a morphism that is not fibrewise trivial",
                vec![cat.mor_label(pi).to_string(), x.to_string()],
            );
            continue;
        }
        if !p.carrier.contains(cat.cod(pi), x) || !p.carrier.contains(cat.dom(pi), y) {
            rep.fail(
                "action-typing",
                "action entry is not typed carrier to carrier",
                vec![cat.mor_label(pi).to_string(), x.to_string(), y.to_string()],
            );
        }
    }
    for pi in 0..cat.n_morphisms() {
        if !ft[pi] {
            continue;
        }
        for x in p.carrier.at(cat.cod(pi)) {
            if p.act(pi, x).is_none() {
                rep.fail(
                    "action-typing",
                    "action is undefined",
                    vec![cat.mor_label(pi).to_string(), x.clone()],
                );
            }
        }
    }

    for c in 0..cat.n_objects() {
        if let Some(id) = cat.identity(c) {
            for x in p.carrier.at(c) {
                if p.act(id, x).is_some_and(|y| y != x) {
                    rep.fail(
                        "action-identity",
                        "identity does not act trivially",
                        vec![cat.object_label(c).to_string(), x.clone()],
                    );
                }
            }
        }
    }

    for (pi, sigma) in cat.composable_pairs() {
        if !ft[pi] || !ft[sigma] {
            continue;
        }
        let Some(composite) = cat.compose(pi, sigma) else {
            continue;
        };
        for x in p.carrier.at(cat.cod(pi)) {
            let stepwise = p.act(pi, x).and_then(|y| p.act(sigma, y));
            let direct = p.act(composite, x);
            if stepwise != direct {
                rep.fail(
                    "action-composition",
                    "acting in two steps disagrees with acting by the composite",
                    vec![
                        cat.mor_label(pi).to_string(),
                        cat.mor_label(sigma).to_string(),
                        x.clone(),
                        stepwise.unwrap_or("<undefined>").to_string(),
                        direct.unwrap_or("<undefined>").to_string(),
                    ],
                );
            }
        }
    }

    let u = coll::unit(oc);
    let xu = coll::tensor(oc, &p.carrier, &u);
    let run = |label: &str| -> Option<String> {
        let el = coll::decode_element(oc, label).ok()?;
        p.act(el.phi, &el.x).map(String::from)
    };

    for (c, elems) in p.carrier.supported() {
        for x in elems {
            match coll::rho(oc, c, x).ok().and_then(|r| run(&r)) {
                Some(back) if back == *x => {}
                other => rep.fail(
                    "module-unit",
                    "acting along the right unit map is not the identity",
                    vec![
                        cat.object_label(c).to_string(),
                        x.clone(),
                        other.unwrap_or_else(|| "<undefined>".to_string()),
                    ],
                ),
            }
        }
    }

    let xuu = coll::tensor(oc, &xu, &u);
    for (c, elems) in xuu.supported() {
        for el in elems {
            let stepwise = coll::decode_element(oc, el).ok().and_then(|t| {
                let inner = run(&t.x)?;
                let ys: Vec<&str> = t.ys.iter().map(String::as_str).collect();
                run(&coll::render_parts(
                    &inner,
                    cat.mor_label(t.phi),
                    &ys,
                ))
            });
            let associated = coll::alpha(oc, el).ok().and_then(|a| {
                let t = coll::decode_element(oc, &a).ok()?;
                let mut units = Vec::with_capacity(t.ys.len());
                for y in &t.ys {
                    units.push(coll::lambda(oc, y).ok()?);
                }
                let refs: Vec<&str> = units.iter().map(String::as_str).collect();
                run(&coll::render_parts(&t.x, cat.mor_label(t.phi), &refs))
            });
            if stepwise != associated || stepwise.is_none() {
                rep.fail(
                    "module-associativity",
                    "the two module action paths disagree",
                    vec![
                        cat.object_label(c).to_string(),
                        el.clone(),
                        stepwise.unwrap_or_else(|| "<undefined>".to_string()),
                        associated.unwrap_or_else(|| "<undefined>".to_string()),
                    ],
                );
            }
        }
    }

    rep
}

/// One class of the wedge quotient: the members are tensor element labels
/// and the representative is the lexicographically least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeClass {
    pub representative: String,
    pub members: Vec<String>,
}

/// The wedge `X ∧ Y` of two presheaves: per object, the classes of the
/// tensor of the carriers under sliding fibrewise-trivial middle factors,
/// together with the induced presheaf action on classes.
#[derive(Clone, Debug)]
pub struct Wedge {
    classes: BTreeMap<usize, Vec<WedgeClass>>,
    index: HashMap<(usize, String), usize>,
    action: BTreeMap<(usize, usize), usize>,
    action_objects: HashMap<(usize, usize), (usize, usize)>,
}

impl Wedge {
    pub fn classes(&self, object: usize) -> &[WedgeClass] {
        self.classes.get(&object).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn class_count(&self, object: usize) -> usize {
        self.classes(object).len()
    }

    pub fn class_of(&self, object: usize, label: &str) -> Option<usize> {
        self.index.get(&(object, label.to_string())).copied()
    }

    pub fn representative(&self, object: usize, label: &str) -> Option<&str> {
        self.class_of(object, label)
            .map(|k| self.classes(object)[k].representative.as_str())
    }

    /// The classes as a collection of representative labels.
    pub fn carrier(&self) -> Collection {
        let mut out = Collection::new();
        for (&c, classes) in &self.classes {
            for class in classes {
                out.insert(c, class.representative.clone());
            }
        }
        out
    }

    /// The wedge as a presheaf on representative labels, using the induced
    /// action.
    pub fn as_presheaf(&self) -> Presheaf {
        let mut p = Presheaf::new(self.carrier());
        for (&(sigma, from), &to) in &self.action {
            let (c, d) = self.action_objects[&(sigma, from)];
            p.set_action(
                sigma,
                self.classes(d)[from].representative.clone(),
                self.classes(c)[to].representative.clone(),
            );
        }
        p
    }
}

pub fn wedge(
    oc: &OperadicCategory,
    p: &Presheaf,
    q: &Presheaf,
) -> Result<Wedge, NormalError> {
    let cat = oc.cat();
    let ft: Vec<bool> = (0..cat.n_morphisms())
        .map(|m| is_fibrewise_trivial(oc, m))
        .collect();
    let mut factorisations: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cat.n_morphisms()];
    for (outer, inner) in cat.composable_pairs() {
        if ft[outer] && !cat.is_identity(outer) {
            if let Some(m) = cat.compose(outer, inner) {
                factorisations[m].push((outer, inner));
            }
        }
    }

    let t = coll::tensor(oc, p.carrier(), q.carrier());
    let mut classes = BTreeMap::new();
    let mut index = HashMap::new();
    for c in 0..cat.n_objects() {
        let elems = t.at(c);
        if elems.is_empty() {
            continue;
        }
        let pos: HashMap<&str, usize> = elems
            .iter()
            .enumerate()
            .map(|(k, l)| (l.as_str(), k))
            .collect();
        let mut uf = UnionFind::new(elems.len());
        for (k, label) in elems.iter().enumerate() {
            let el = coll::decode_element(oc, label)
                .map_err(|_| NormalError::UnknownElement(label.clone()))?;
            for &(pi, phi) in &factorisations[el.phi] {
                let mid_card = oc.obj_card(cat.cod(phi));
                let pi_map = oc.mor_card(pi);
                let mut moved_family = Vec::with_capacity(mid_card);
                for i in 1..=mid_card {
                    let through = pi_map.apply(i);
                    let outer_fibre = oc
                        .fibre(el.phi, through)
                        .ok_or_else(|| NormalError::MissingData(label.clone()))?;
                    let inner_fibre = oc
                        .fibre(phi, i)
                        .ok_or_else(|| NormalError::MissingData(label.clone()))?;
                    if outer_fibre != inner_fibre {
                        return Err(NormalError::FibreMismatch(label.clone(), i));
                    }
                    moved_family.push(el.ys[through - 1].as_str());
                }
                let moved_x = p.act(pi, &el.x).ok_or_else(|| {
                    NormalError::ActionUndefined(cat.mor_label(pi).to_string(), el.x.clone())
                })?;
                let other = coll::render_parts(moved_x, cat.mor_label(phi), &moved_family);
                let &other_pos = pos
                    .get(other.as_str())
                    .ok_or_else(|| NormalError::UnknownElement(other.clone()))?;
                uf.union(k, other_pos);
            }
        }
        let mut by_root: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (k, label) in elems.iter().enumerate() {
            by_root.entry(uf.find(k)).or_default().push(label.clone());
        }
        let mut object_classes: Vec<WedgeClass> = by_root
            .into_values()
            .map(|mut members| {
                members.sort();
                WedgeClass {
                    representative: members[0].clone(),
                    members,
                }
            })
            .collect();
        object_classes.sort_by(|a, b| a.representative.cmp(&b.representative));
        for (k, class) in object_classes.iter().enumerate() {
            for member in &class.members {
                index.insert((c, member.clone()), k);
            }
        }
        classes.insert(c, object_classes);
    }

    let mut action = BTreeMap::new();
    let mut action_objects = HashMap::new();
    for sigma in 0..cat.n_morphisms() {
        if !ft[sigma] {
            continue;
        }
        let (b, c) = (cat.dom(sigma), cat.cod(sigma));
        let n_classes = classes.get(&c).map(Vec::len).unwrap_or(0);
        for k in 0..n_classes {
            let mut target: Option<usize> = None;
            for member in classes[&c][k].members.clone() {
                let el = coll::decode_element(oc, &member)
                    .map_err(|_| NormalError::UnknownElement(member.clone()))?;
                let moved_phi = cat.compose(el.phi, sigma).ok_or_else(|| {
                    NormalError::MissingData(cat.mor_label(sigma).to_string())
                })?;
                let card = oc.obj_card(cat.cod(el.phi));
                let mut moved = Vec::with_capacity(card);
                for i in 1..=card {
                    let fm = oc.fibre_morphism(sigma, el.phi, i).ok_or_else(|| {
                        NormalError::MissingData(cat.mor_label(sigma).to_string())
                    })?;
                    let yi = q.act(fm, &el.ys[i - 1]).ok_or_else(|| {
                        NormalError::ActionUndefined(
                            cat.mor_label(fm).to_string(),
                            el.ys[i - 1].clone(),
                        )
                    })?;
                    moved.push(yi.to_string());
                }
                let refs: Vec<&str> = moved.iter().map(String::as_str).collect();
                let image = coll::render_parts(&el.x, cat.mor_label(moved_phi), &refs);
                let image_class = index
                    .get(&(b, image.clone()))
                    .copied()
                    .ok_or(NormalError::UnknownElement(image))?;
                match target {
                    None => target = Some(image_class),
                    Some(prev) if prev == image_class => {}
                    Some(_) => {
                        return Err(NormalError::RepresentativeDependent(member));
                    }
                }
            }
            if let Some(target) = target {
                action.insert((sigma, k), target);
                action_objects.insert((sigma, k), (b, c));
            }
        }
    }

    Ok(Wedge {
        classes,
        index,
        action,
        action_objects,
    })
}

/// A map between indexed families of finite sets, recorded pointwise.
#[derive(Clone, Debug, Default)]
pub struct IndexedMap {
    pub domain: Collection,
    pub codomain: Collection,
    pairs: BTreeMap<(usize, String), String>,
}

impl IndexedMap {
    pub fn get(&self, object: usize, x: &str) -> Option<&str> {
        self.pairs
            .get(&(object, x.to_string()))
            .map(String::as_str)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, &str, &str)> {
        self.pairs.iter().map(|((c, x), y)| (*c, x.as_str(), y.as_str()))
    }

    /// `None` when the map is a bijection over every object; otherwise a
    /// witness naming the object and the offending elements.
    pub fn bijectivity_witness(&self) -> Option<Vec<String>> {
        let mut objects: Vec<usize> = self
            .domain
            .supported()
            .chain(self.codomain.supported())
            .map(|(c, _)| c)
            .collect();
        objects.sort_unstable();
        objects.dedup();
        for c in objects {
            let mut hit: BTreeMap<&str, &str> = BTreeMap::new();
            for x in self.domain.at(c) {
                let Some(y) = self.get(c, x) else {
                    return Some(vec![c.to_string(), x.clone(), "<undefined>".to_string()]);
                };
                if !self.codomain.contains(c, y) {
                    return Some(vec![c.to_string(), x.clone(), y.to_string()]);
                }
                if let Some(prev) = hit.insert(y, x) {
                    return Some(vec![
                        c.to_string(),
                        prev.to_string(),
                        x.clone(),
                        y.to_string(),
                    ]);
                }
            }
            for y in self.codomain.at(c) {
                if !hit.contains_key(y.as_str()) {
                    return Some(vec![c.to_string(), "<unhit>".to_string(), y.clone()]);
                }
            }
        }
        None
    }
}

/// The comparison map `X -> X ∧ U` induced by the right unit map.
pub fn wedge_rho(oc: &OperadicCategory, x: &Presheaf) -> Result<IndexedMap, NormalError> {
    let u = unit_presheaf(oc);
    let xu = wedge(oc, x, &u)?;
    let mut pairs = BTreeMap::new();
    for (c, elems) in x.carrier().supported() {
        for el in elems {
            let r = coll::rho(oc, c, el)
                .map_err(|_| NormalError::MissingData(el.clone()))?;
            let rep = xu
                .representative(c, &r)
                .ok_or_else(|| NormalError::UnknownElement(r.clone()))?;
            pairs.insert((c, el.clone()), rep.to_string());
        }
    }
    Ok(IndexedMap {
        domain: x.carrier().clone(),
        codomain: xu.carrier(),
        pairs,
    })
}

/// The comparison map `U ∧ X -> X` induced by the left unit map.
pub fn wedge_lambda(oc: &OperadicCategory, x: &Presheaf) -> Result<IndexedMap, NormalError> {
    let cat = oc.cat();
    let u = unit_presheaf(oc);
    let ux = wedge(oc, &u, x)?;
    let mut pairs = BTreeMap::new();
    for c in 0..cat.n_objects() {
        for class in ux.classes(c) {
            let mut value: Option<String> = None;
            for member in &class.members {
                let v = coll::lambda(oc, member)
                    .map_err(|_| NormalError::MissingData(member.clone()))?;
                match &value {
                    None => value = Some(v),
                    Some(prev) if *prev == v => {}
                    Some(_) => {
                        return Err(NormalError::RepresentativeDependent(member.clone()))
                    }
                }
            }
            if let Some(v) = value {
                pairs.insert((c, class.representative.clone()), v);
            }
        }
    }
    Ok(IndexedMap {
        domain: ux.carrier(),
        codomain: x.carrier().clone(),
        pairs,
    })
}

/// The comparison map `(X ∧ Y) ∧ Z -> X ∧ (Y ∧ Z)` induced by the
/// associativity map on representatives.
pub fn wedge_alpha(
    oc: &OperadicCategory,
    x: &Presheaf,
    y: &Presheaf,
    z: &Presheaf,
) -> Result<IndexedMap, NormalError> {
    let cat = oc.cat();
    let xy = wedge(oc, x, y)?;
    let yz = wedge(oc, y, z)?;
    let left = wedge(oc, &xy.as_presheaf(), z)?;
    let right = wedge(oc, x, &yz.as_presheaf())?;
    let mut pairs = BTreeMap::new();
    for c in 0..cat.n_objects() {
        for class in left.classes(c) {
            let mut image: Option<String> = None;
            for member in &class.members {
                let a = coll::alpha(oc, member)
                    .map_err(|_| NormalError::MissingData(member.clone()))?;
                let t = coll::decode_element(oc, &a)
                    .map_err(|_| NormalError::UnknownElement(a.clone()))?;
                let mut reps = Vec::with_capacity(t.ys.len());
                for (j, nested) in t.ys.iter().enumerate() {
                    let fibre = oc
                        .fibre(t.phi, j + 1)
                        .ok_or_else(|| NormalError::MissingData(a.clone()))?;
                    let rep = yz
                        .representative(fibre, nested)
                        .ok_or_else(|| NormalError::UnknownElement(nested.clone()))?;
                    reps.push(rep.to_string());
                }
                let refs: Vec<&str> = reps.iter().map(String::as_str).collect();
                let outer = coll::render_parts(&t.x, cat.mor_label(t.phi), &refs);
                let target = right
                    .representative(c, &outer)
                    .ok_or_else(|| NormalError::UnknownElement(outer.clone()))?;
                match &image {
                    None => image = Some(target.to_string()),
                    Some(prev) if prev == target => {}
                    Some(_) => {
                        return Err(NormalError::RepresentativeDependent(member.clone()))
                    }
                }
            }
            if let Some(target) = image {
                pairs.insert((c, class.representative.clone()), target);
            }
        }
    }
    Ok(IndexedMap {
        domain: left.carrier(),
        codomain: right.carrier(),
        pairs,
    })
}

/// Samples presheaves and checks whether the three wedge comparison maps
/// are bijections, reporting one verdict per sampled map.
pub fn wedge_bijectivity_check(
    oc: &OperadicCategory,
    samples: usize,
    sampler: &mut crate::sample::Sampler,
) -> ValidationReport {
    let mut rep = ValidationReport::new();
    for round in 0..samples {
        let x = sampler.presheaf(oc, "x");
        let y = sampler.presheaf(oc, "y");
        let z = sampler.presheaf(oc, "z");
        let mut run = |check: &str, result: Result<IndexedMap, NormalError>| match result {
            Ok(map) => match map.bijectivity_witness() {
                None => rep.bump(&format!("{check}-bijective"), 1),
                Some(mut w) => {
                    let mut witness = vec![format!("round {round}")];
                    witness.append(&mut w);
                    rep.fail(check, "comparison map is not a bijection", witness);
                }
            },
            Err(e) => rep.fail(check, e.to_string(), vec![format!("round {round}")]),
        };
        run("wedge-rho", wedge_rho(oc, &x));
        run("wedge-lambda", wedge_lambda(oc, &x));
        run("wedge-alpha", wedge_alpha(oc, &x, &y, &z));
        rep.bump("rounds", 1);
    }
    rep
}

#[derive(Clone, Debug)]
pub struct LeftNormalVerdict {
    pub left_normal: bool,
    pub reason: String,
    pub witness: Vec<String>,
}

/// Decides left normality: every object must admit a morphism to a trivial
/// object, and for each object the morphisms to trivial objects must be
/// connected under postcomposition with morphisms between trivial objects.
pub fn left_normal_check(oc: &OperadicCategory) -> LeftNormalVerdict {
    let cat = oc.cat();
    for c in 0..cat.n_objects() {
        let homs = oc.mors_to_trivial(c);
        if homs.is_empty() {
            return LeftNormalVerdict {
                left_normal: false,
                reason: "object admits no morphism to a trivial object".to_string(),
                witness: vec![cat.object_label(c).to_string()],
            };
        }
        let pos: HashMap<usize, usize> =
            homs.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        let mut uf = UnionFind::new(homs.len());
        for (k, &phi) in homs.iter().enumerate() {
            let u = cat.cod(phi);
            for &pi in cat.hom_out(u) {
                if !oc.is_trivial(cat.cod(pi)) {
                    continue;
                }
                if let Some(next) = cat.compose(pi, phi) {
                    if let Some(&kp) = pos.get(&next) {
                        uf.union(k, kp);
                    }
                }
            }
        }
        let root = uf.find(0);
        for k in 1..homs.len() {
            if uf.find(k) != root {
                return LeftNormalVerdict {
                    left_normal: false,
                    reason: "morphisms to trivial objects fall into separate components"
                        .to_string(),
                    witness: vec![
                        cat.object_label(c).to_string(),
                        cat.mor_label(homs[0]).to_string(),
                        cat.mor_label(homs[k]).to_string(),
                    ],
                };
            }
        }
    }
    LeftNormalVerdict {
        left_normal: true,
        reason: String::new(),
        witness: Vec::new(),
    }
}
