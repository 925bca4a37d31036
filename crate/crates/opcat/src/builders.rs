//! Canned operadic categories with known fingerprints.
//!
//! The map-based families (`finite_sets`, `finite_ordinals`, `bouquets`,
//! `two_trees`) are truncations of infinite categories: the full subcategory
//! on objects below a size bound.  All fibres are no larger than their
//! ambient object, so each truncation is closed under the fibre assignment.
//! The remaining builders decorate an arbitrary finite category with a
//! cardinality structure.

use crate::cat::{FinCategory, MorphismRecord};
use crate::fin::{fibre_restrict, FinFunction};
use crate::operadic::{BuildError, OperadicCategory};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuilderError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error("label {0:?} is reserved by this construction")]
    ReservedLabel(String),
}

/// Explicit fibre tables for [`card_one`], replacing the default domain
/// assignment.
#[derive(Clone, Debug, Default)]
pub struct FibreAssignment {
    pub fibres: Vec<(String, Vec<String>)>,
    pub fibre_morphisms: Vec<(String, String, Vec<String>)>,
}

/// All value vectors for functions `{1..dom} -> {1..cod}`, lexicographic.
fn all_value_vectors(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    if dom == 0 {
        return vec![Vec::new()];
    }
    if cod == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![1usize; dom];
    'outer: loop {
        out.push(cur.clone());
        let mut k = dom;
        loop {
            if k == 0 {
                break 'outer;
            }
            if cur[k - 1] < cod {
                cur[k - 1] += 1;
                for v in &mut cur[k..] {
                    *v = 1;
                }
                break;
            }
            k -= 1;
        }
    }
    out
}

fn is_order_preserving(values: &[usize]) -> bool {
    values.windows(2).all(|w| w[0] <= w[1])
}

/// Shared construction for the skeletal map categories: objects are the
/// numbers `0..=n`, morphisms are the functions admitted by `keep`, and the
/// operadic structure is the one induced by preimages.
fn maps_fixture(n: usize, keep: fn(&[usize]) -> bool) -> OperadicCategory {
    let objects: Vec<String> = (0..=n).map(|k| k.to_string()).collect();
    let mut maps: Vec<FinFunction> = Vec::new();
    for d in 0..=n {
        for c in 0..=n {
            for values in all_value_vectors(d, c) {
                if keep(&values) {
                    maps.push(FinFunction::new(c, values).expect("values in range"));
                }
            }
        }
    }
    let morphisms: Vec<MorphismRecord> = maps
        .iter()
        .map(|f| MorphismRecord {
            label: f.to_string(),
            dom: f.dom().to_string(),
            cod: f.cod().to_string(),
        })
        .collect();
    let identities: Vec<(String, String)> = (0..=n)
        .map(|k| (k.to_string(), FinFunction::identity(k).to_string()))
        .collect();
    let mut composition = Vec::new();
    let mut fibre_mors = Vec::new();
    for g in &maps {
        for f in &maps {
            if f.cod() != g.dom() {
                continue;
            }
            let gf = FinFunction::compose(g, f).expect("composable");
            composition.push((g.to_string(), f.to_string(), gf.to_string()));
            let entries = (1..=g.cod())
                .map(|i| {
                    fibre_restrict(f, g, i)
                        .expect("composable")
                        .to_string()
                })
                .collect();
            fibre_mors.push((g.to_string(), f.to_string(), entries));
        }
    }
    let fibres: Vec<(String, Vec<String>)> = maps
        .iter()
        .map(|f| {
            let cards = f.fibres().cards();
            (f.to_string(), cards.iter().map(|k| k.to_string()).collect())
        })
        .collect();
    let base = FinCategory {
        objects,
        morphisms,
        identities,
        composition,
    };
    let cards: Vec<usize> = (0..=n).collect();
    let card_maps: Vec<Vec<usize>> = maps.iter().map(|f| f.values().to_vec()).collect();
    OperadicCategory::new(&base, &cards, &card_maps, &fibres, &fibre_mors)
        .expect("generated tables are well formed")
}

/// Skeletal finite sets up to cardinality `n`: objects `0..=n`, morphisms
/// all functions, fibres the preimages.
pub fn finite_sets(n: usize) -> OperadicCategory {
    maps_fixture(n, |_| true)
}

/// Finite ordinals up to `n`: objects `0..=n`, morphisms the
/// order-preserving functions, fibres the preimages with their induced
/// order.
pub fn finite_ordinals(n: usize) -> OperadicCategory {
    maps_fixture(n, is_order_preserving)
}

/// Any finite category with every cardinality zero: no fibres at all.
pub fn discrete_zero(a: &FinCategory) -> Result<OperadicCategory, BuilderError> {
    let cards = vec![0; a.objects.len()];
    let card_maps = vec![Vec::new(); a.morphisms.len()];
    let fibres: Vec<(String, Vec<String>)> = a
        .morphisms
        .iter()
        .map(|m| (m.label.clone(), Vec::new()))
        .collect();
    let mut fibre_mors = Vec::new();
    for g in &a.morphisms {
        for f in &a.morphisms {
            if f.cod == g.dom {
                fibre_mors.push((g.label.clone(), f.label.clone(), Vec::new()));
            }
        }
    }
    Ok(OperadicCategory::new(a, &cards, &card_maps, &fibres, &fibre_mors)?)
}

/// The label of the freely adjoined terminal object.
pub const TERMINAL_LABEL: &str = "*";

fn to_terminal_label(c: &str) -> String {
    format!("{c}>*")
}

/// Freely adjoins a terminal object of cardinality one to `a`, with every
/// original object given cardinality zero.  The fibre of each new morphism
/// is its domain.
pub fn adjoin_terminal(a: &FinCategory) -> Result<OperadicCategory, BuilderError> {
    if a.objects.iter().any(|o| o == TERMINAL_LABEL) {
        return Err(BuilderError::ReservedLabel(TERMINAL_LABEL.to_string()));
    }
    let new_labels: Vec<String> = a
        .objects
        .iter()
        .map(|c| to_terminal_label(c))
        .chain([to_terminal_label(TERMINAL_LABEL)])
        .collect();
    for m in &a.morphisms {
        if new_labels.iter().any(|l| *l == m.label) {
            return Err(BuilderError::ReservedLabel(m.label.clone()));
        }
    }

    let mut base = a.clone();
    base.objects.push(TERMINAL_LABEL.to_string());
    for c in &a.objects {
        base.morphisms.push(MorphismRecord {
            label: to_terminal_label(c),
            dom: c.clone(),
            cod: TERMINAL_LABEL.to_string(),
        });
    }
    let star = to_terminal_label(TERMINAL_LABEL);
    base.morphisms.push(MorphismRecord {
        label: star.clone(),
        dom: TERMINAL_LABEL.to_string(),
        cod: TERMINAL_LABEL.to_string(),
    });
    base.identities
        .push((TERMINAL_LABEL.to_string(), star.clone()));
    for f in &a.morphisms {
        base.composition.push((
            to_terminal_label(&f.cod),
            f.label.clone(),
            to_terminal_label(&f.dom),
        ));
    }
    for c in &a.objects {
        base.composition
            .push((star.clone(), to_terminal_label(c), to_terminal_label(c)));
    }
    base.composition.push((star.clone(), star.clone(), star.clone()));

    let mut cards = vec![0; a.objects.len()];
    cards.push(1);
    let mut card_maps = vec![Vec::new(); a.morphisms.len()];
    for _ in &a.objects {
        card_maps.push(Vec::new());
    }
    card_maps.push(vec![1]);

    let mut fibres: Vec<(String, Vec<String>)> = a
        .morphisms
        .iter()
        .map(|m| (m.label.clone(), Vec::new()))
        .collect();
    for c in &a.objects {
        fibres.push((to_terminal_label(c), vec![c.clone()]));
    }
    fibres.push((star.clone(), vec![TERMINAL_LABEL.to_string()]));

    let mut fibre_mors = Vec::new();
    for g in &a.morphisms {
        for f in &a.morphisms {
            if f.cod == g.dom {
                fibre_mors.push((g.label.clone(), f.label.clone(), Vec::new()));
            }
        }
    }
    for f in &a.morphisms {
        fibre_mors.push((
            to_terminal_label(&f.cod),
            f.label.clone(),
            vec![f.label.clone()],
        ));
    }
    for c in &a.objects {
        fibre_mors.push((
            star.clone(),
            to_terminal_label(c),
            vec![to_terminal_label(c)],
        ));
    }
    fibre_mors.push((star.clone(), star.clone(), vec![star.clone()]));

    Ok(OperadicCategory::new(
        &base,
        &cards,
        &card_maps,
        &fibres,
        &fibre_mors,
    )?)
}

/// Any finite category with every cardinality one.  By default each fibre is
/// the domain and each fibre morphism is the inner morphism; an explicit
/// [`FibreAssignment`] replaces both tables, and validation decides whether
/// the result is lawful.
pub fn card_one(
    a: &FinCategory,
    assignment: Option<&FibreAssignment>,
) -> Result<OperadicCategory, BuilderError> {
    let cards = vec![1; a.objects.len()];
    let card_maps = vec![vec![1]; a.morphisms.len()];
    let (fibres, fibre_mors) = match assignment {
        Some(data) => (data.fibres.clone(), data.fibre_morphisms.clone()),
        None => {
            let fibres = a
                .morphisms
                .iter()
                .map(|m| (m.label.clone(), vec![m.dom.clone()]))
                .collect();
            let mut fibre_mors = Vec::new();
            for g in &a.morphisms {
                for f in &a.morphisms {
                    if f.cod == g.dom {
                        fibre_mors.push((g.label.clone(), f.label.clone(), vec![f.label.clone()]));
                    }
                }
            }
            (fibres, fibre_mors)
        }
    };
    Ok(OperadicCategory::new(a, &cards, &card_maps, &fibres, &fibre_mors)?)
}

/// A bouquet: a list of petal colours and a root colour, both drawn from a
/// fixed palette.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bouquet {
    petals: Vec<usize>,
    root: usize,
}

impl Bouquet {
    fn label(&self, colours: &[String]) -> String {
        let petals: Vec<&str> = self.petals.iter().map(|&i| colours[i].as_str()).collect();
        format!("({};{})", petals.join(" "), colours[self.root])
    }
}

fn bouquet_mor_label(colours: &[String], src: &Bouquet, dst: &Bouquet, f: &FinFunction) -> String {
    let vals: Vec<String> = f.values().iter().map(|v| v.to_string()).collect();
    format!(
        "{}>{}[{}]",
        src.label(colours),
        dst.label(colours),
        vals.join(" ")
    )
}

/// Bouquets over the given colour palette, truncated at `n` petals.
/// Morphisms exist only between bouquets with equal root colours and are
/// arbitrary functions on petals; the fibre at a petal keeps the source
/// colours over it, rooted at that petal's colour.
pub fn bouquets(colours: &[&str], n: usize) -> OperadicCategory {
    let colours: Vec<String> = colours.iter().map(|c| c.to_string()).collect();
    let mut objs: Vec<Bouquet> = Vec::new();
    for m in 0..=n {
        for petals in all_value_vectors(m, colours.len()) {
            let petals: Vec<usize> = petals.iter().map(|v| v - 1).collect();
            for root in 0..colours.len() {
                objs.push(Bouquet {
                    petals: petals.clone(),
                    root,
                });
            }
        }
    }

    struct Mor {
        src: usize,
        dst: usize,
        f: FinFunction,
    }
    let mut mors: Vec<Mor> = Vec::new();
    for (s, src) in objs.iter().enumerate() {
        for (d, dst) in objs.iter().enumerate() {
            if src.root != dst.root {
                continue;
            }
            for values in all_value_vectors(src.petals.len(), dst.petals.len()) {
                mors.push(Mor {
                    src: s,
                    dst: d,
                    f: FinFunction::new(dst.petals.len(), values).expect("values in range"),
                });
            }
        }
    }

    let mor_label = |m: &Mor| bouquet_mor_label(&colours, &objs[m.src], &objs[m.dst], &m.f);
    let fibre_of = |m: &Mor, j: usize| -> Bouquet {
        let data = m.f.fibres();
        Bouquet {
            petals: data
                .embed(j)
                .iter()
                .map(|&t| objs[m.src].petals[t - 1])
                .collect(),
            root: objs[m.dst].petals[j - 1],
        }
    };

    let mut base = FinCategory {
        objects: objs.iter().map(|b| b.label(&colours)).collect(),
        morphisms: mors
            .iter()
            .map(|m| MorphismRecord {
                label: mor_label(m),
                dom: objs[m.src].label(&colours),
                cod: objs[m.dst].label(&colours),
            })
            .collect(),
        identities: objs
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let id = FinFunction::identity(b.petals.len());
                (
                    b.label(&colours),
                    bouquet_mor_label(&colours, &objs[k], &objs[k], &id),
                )
            })
            .collect(),
        composition: Vec::new(),
    };
    let mut fibre_mors = Vec::new();
    for g in &mors {
        for f in &mors {
            if f.dst != g.src {
                continue;
            }
            let gf = Mor {
                src: f.src,
                dst: g.dst,
                f: FinFunction::compose(&g.f, &f.f).expect("composable"),
            };
            base.composition
                .push((mor_label(g), mor_label(f), mor_label(&gf)));
            let entries = (1..=g.f.cod())
                .map(|j| {
                    let restricted = fibre_restrict(&f.f, &g.f, j).expect("composable");
                    bouquet_mor_label(&colours, &fibre_of(&gf, j), &fibre_of(g, j), &restricted)
                })
                .collect();
            fibre_mors.push((mor_label(g), mor_label(f), entries));
        }
    }
    let fibres: Vec<(String, Vec<String>)> = mors
        .iter()
        .map(|m| {
            let fam = (1..=m.f.cod())
                .map(|j| fibre_of(m, j).label(&colours))
                .collect();
            (mor_label(m), fam)
        })
        .collect();

    let cards: Vec<usize> = objs.iter().map(|b| b.petals.len()).collect();
    let card_maps: Vec<Vec<usize>> = mors.iter().map(|m| m.f.values().to_vec()).collect();
    OperadicCategory::new(&base, &cards, &card_maps, &fibres, &fibre_mors)
        .expect("generated tables are well formed")
}

/// A square between two-level trees: a map on the top level and an
/// order-preserving map on the bottom level, commuting with the level maps.
#[derive(Clone, Debug, PartialEq, Eq)]
struct TreeMor {
    src: usize,
    dst: usize,
    top: FinFunction,
    bottom: FinFunction,
}

fn tree_mor_label(objs: &[FinFunction], m: &TreeMor) -> String {
    let vals = |f: &FinFunction| {
        let v: Vec<String> = f.values().iter().map(|x| x.to_string()).collect();
        v.join(" ")
    };
    format!(
        "{}=>{}[{}][{}]",
        objs[m.src],
        objs[m.dst],
        vals(&m.top),
        vals(&m.bottom)
    )
}

/// Order-preserving on the level fibres: whenever two top elements share a
/// bottom image, their images are ordered like the elements.
fn fibrewise_order_preserving(top: &FinFunction, level: &FinFunction) -> bool {
    for i in 1..=top.dom() {
        for j in (i + 1)..=top.dom() {
            if level.apply(i) == level.apply(j) && top.apply(i) > top.apply(j) {
                return false;
            }
        }
    }
    true
}

/// Two-level trees: objects are order-preserving maps between ordinals with
/// the top level at most `n2` and the bottom level at most `n1`; morphisms
/// are commuting squares whose bottom map is order-preserving and whose top
/// map is order-preserving on each fibre of the level map.  The cardinality
/// of a tree is its top level; fibres restrict both levels over a top
/// element and its bottom image.
pub fn two_trees(n2: usize, n1: usize) -> OperadicCategory {
    let mut objs: Vec<FinFunction> = Vec::new();
    for p2 in 0..=n2 {
        for p1 in 0..=n1 {
            for values in all_value_vectors(p2, p1) {
                if is_order_preserving(&values) {
                    objs.push(FinFunction::new(p1, values).expect("values in range"));
                }
            }
        }
    }

    let mut mors: Vec<TreeMor> = Vec::new();
    for (s, src) in objs.iter().enumerate() {
        for (d, dst) in objs.iter().enumerate() {
            for bottom_values in all_value_vectors(src.cod(), dst.cod()) {
                if !is_order_preserving(&bottom_values) {
                    continue;
                }
                let bottom =
                    FinFunction::new(dst.cod(), bottom_values).expect("values in range");
                for top_values in all_value_vectors(src.dom(), dst.dom()) {
                    let top = FinFunction::new(dst.dom(), top_values).expect("values in range");
                    let square_commutes = (1..=src.dom())
                        .all(|t| dst.apply(top.apply(t)) == bottom.apply(src.apply(t)));
                    if square_commutes && fibrewise_order_preserving(&top, src) {
                        mors.push(TreeMor {
                            src: s,
                            dst: d,
                            top,
                            bottom: bottom.clone(),
                        });
                    }
                }
            }
        }
    }

    // Restrict a tree morphism over top element `i` of the target: the top
    // level keeps the preimage of `i`, the bottom level the preimage of the
    // bottom image of `i`.
    let fibre_of = |m: &TreeMor, i: usize| -> FinFunction {
        let src = &objs[m.src];
        let dst = &objs[m.dst];
        let top_data = m.top.fibres();
        let bottom_data = m.bottom.fibres();
        let pi = dst.apply(i);
        let values: Vec<usize> = top_data
            .embed(i)
            .iter()
            .map(|&t| {
                bottom_data
                    .position(pi, src.apply(t))
                    .expect("square commutes")
            })
            .collect();
        FinFunction::new(bottom_data.card(pi), values).expect("values in range")
    };

    let base_objects: Vec<String> = objs.iter().map(|o| o.to_string()).collect();
    let mut base = FinCategory {
        objects: base_objects.clone(),
        morphisms: mors
            .iter()
            .map(|m| MorphismRecord {
                label: tree_mor_label(&objs, m),
                dom: base_objects[m.src].clone(),
                cod: base_objects[m.dst].clone(),
            })
            .collect(),
        identities: objs
            .iter()
            .enumerate()
            .map(|(k, o)| {
                let id = TreeMor {
                    src: k,
                    dst: k,
                    top: FinFunction::identity(o.dom()),
                    bottom: FinFunction::identity(o.cod()),
                };
                (base_objects[k].clone(), tree_mor_label(&objs, &id))
            })
            .collect(),
        composition: Vec::new(),
    };
    let mut fibre_mors = Vec::new();
    for g in &mors {
        for f in &mors {
            if f.dst != g.src {
                continue;
            }
            let gf = TreeMor {
                src: f.src,
                dst: g.dst,
                top: FinFunction::compose(&g.top, &f.top).expect("composable"),
                bottom: FinFunction::compose(&g.bottom, &f.bottom).expect("composable"),
            };
            base.composition.push((
                tree_mor_label(&objs, g),
                tree_mor_label(&objs, f),
                tree_mor_label(&objs, &gf),
            ));
            let dst = &objs[g.dst];
            let entries = (1..=g.top.cod())
                .map(|j| {
                    let top = fibre_restrict(&f.top, &g.top, j).expect("composable");
                    let bottom = fibre_restrict(&f.bottom, &g.bottom, dst.apply(j))
                        .expect("composable");
                    let src_label = fibre_of(&gf, j).to_string();
                    let dst_label = fibre_of(g, j).to_string();
                    let vals = |h: &FinFunction| {
                        let v: Vec<String> =
                            h.values().iter().map(|x| x.to_string()).collect();
                        v.join(" ")
                    };
                    format!(
                        "{}=>{}[{}][{}]",
                        src_label,
                        dst_label,
                        vals(&top),
                        vals(&bottom)
                    )
                })
                .collect();
            fibre_mors.push((
                tree_mor_label(&objs, g),
                tree_mor_label(&objs, f),
                entries,
            ));
        }
    }
    let fibres: Vec<(String, Vec<String>)> = mors
        .iter()
        .map(|m| {
            let fam = (1..=m.top.cod())
                .map(|i| fibre_of(m, i).to_string())
                .collect();
            (tree_mor_label(&objs, m), fam)
        })
        .collect();

    let cards: Vec<usize> = objs.iter().map(FinFunction::dom).collect();
    let card_maps: Vec<Vec<usize>> = mors.iter().map(|m| m.top.values().to_vec()).collect();
    OperadicCategory::new(&base, &cards, &card_maps, &fibres, &fibre_mors)
        .expect("generated tables are well formed")
}

/// The poset `0 < 1 < ... < k-1` as a finite category, with objects `p0`,
/// `p1`, ... and morphisms `pi->pj` for `i <= j`.
pub fn chain_poset(k: usize) -> FinCategory {
    let objects: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let mut morphisms = Vec::new();
    let mut identities = Vec::new();
    let mut composition = Vec::new();
    let arrow = |i: usize, j: usize| format!("p{i}->p{j}");
    for i in 0..k {
        for j in i..k {
            morphisms.push(MorphismRecord {
                label: arrow(i, j),
                dom: objects[i].clone(),
                cod: objects[j].clone(),
            });
        }
        identities.push((objects[i].clone(), arrow(i, i)));
    }
    for i in 0..k {
        for j in i..k {
            for l in j..k {
                composition.push((arrow(j, l), arrow(i, j), arrow(i, l)));
            }
        }
    }
    FinCategory {
        objects,
        morphisms,
        identities,
        composition,
    }
}
