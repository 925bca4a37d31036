//! Opmonoidal structure of the pushforward along a strict operadic
//! functor, checked pointwise on sampled collections.
//!
//! The pushforward of a collection keeps its elements and reassigns each
//! one to the image of its object; elements are prefixed with their source
//! object so that distinct objects with the same image stay disjoint.  The
//! comparison map sends an element `(x, phi, ys)` of a pushed tensor to
//! `(x, F(phi), ys)`, and the counit sends the pushed unit element at a
//! trivial object to the unit element at its image.
//!
//! Three coherence conditions relate the comparison and counit to the
//! structure maps of the two collection categories, and the naturality
//! squares of the comparison map are required to be pullbacks.

use crate::cat::Category;
use crate::coll::{
    alpha, decode_element, lambda, map_element, render_parts, rho, tensor, unit, Collection,
    CollectionMap, StructureError,
};
use crate::functor::OperadicFunctorData;
use crate::operadic::OperadicCategory;
use crate::report::ValidationReport;
use crate::sample::Sampler;

struct Resolved {
    omap: Vec<usize>,
    mmap: Vec<usize>,
}

fn resolve(
    src: &OperadicCategory,
    dst: &OperadicCategory,
    data: &OperadicFunctorData,
    report: &mut ValidationReport,
) -> Option<Resolved> {
    let scat = src.cat();
    let dcat = dst.cat();
    let mut omap: Vec<Option<usize>> = vec![None; scat.n_objects()];
    let mut mmap: Vec<Option<usize>> = vec![None; scat.n_morphisms()];
    for (from, to) in &data.object_map {
        match (scat.object(from), dcat.object(to)) {
            (Some(c), Some(d)) => omap[c] = Some(d),
            _ => report.fail(
                "functor-data",
                "unresolved object assignment",
                vec![from.clone(), to.clone()],
            ),
        }
    }
    for (from, to) in &data.morphism_map {
        match (scat.mor(from), dcat.mor(to)) {
            (Some(m), Some(n)) => mmap[m] = Some(n),
            _ => report.fail(
                "functor-data",
                "unresolved morphism assignment",
                vec![from.clone(), to.clone()],
            ),
        }
    }
    let omap: Option<Vec<usize>> = omap.into_iter().collect();
    let mmap: Option<Vec<usize>> = mmap.into_iter().collect();
    match (omap, mmap) {
        (Some(omap), Some(mmap)) => Some(Resolved { omap, mmap }),
        _ => {
            report.fail(
                "functor-data",
                "assignment is not total",
                vec![],
            );
            None
        }
    }
}

fn pushed(cat: &Category, c: usize, e: &str) -> String {
    format!("{}:{}", cat.object_label(c), e)
}

/// The same elements, grouped over image objects and prefixed with their
/// source object.
fn push_collection(src: &OperadicCategory, r: &Resolved, x: &Collection) -> Collection {
    let cat = src.cat();
    let mut out = Collection::new();
    for c in 0..cat.n_objects() {
        for e in x.at(c) {
            out.insert(r.omap[c], pushed(cat, c, e));
        }
    }
    out
}

/// The pushforward of a collection map, acting as the original map on each
/// prefixed element.
fn push_map(src: &OperadicCategory, r: &Resolved, x: &Collection, h: &CollectionMap) -> CollectionMap {
    let cat = src.cat();
    let mut out = CollectionMap::new();
    for c in 0..cat.n_objects() {
        for e in x.at(c) {
            if let Some(to) = h.get(c, e) {
                out.insert(r.omap[c], pushed(cat, c, e), pushed(cat, c, to));
            }
        }
    }
    out
}

/// The counit: the pushed unit element at a trivial object goes to the
/// unit element at its image.
fn counit_map(src: &OperadicCategory, dst: &OperadicCategory, r: &Resolved) -> CollectionMap {
    let scat = src.cat();
    let dcat = dst.cat();
    let mut out = CollectionMap::new();
    for u in src.trivial_objects() {
        let label = scat.object_label(u);
        out.insert(
            r.omap[u],
            pushed(scat, u, label),
            dcat.object_label(r.omap[u]),
        );
    }
    out
}

/// The comparison map on the pushed tensor of `x` and `y`: each element
/// `(x, phi, ys)` over `c` goes to `(x, F(phi), ys)` with the parts pushed.
fn comparison_map(
    src: &OperadicCategory,
    dst: &OperadicCategory,
    r: &Resolved,
    x: &Collection,
    y: &Collection,
) -> Result<CollectionMap, StructureError> {
    let scat = src.cat();
    let dcat = dst.cat();
    let xy = tensor(src, x, y);
    let mut out = CollectionMap::new();
    for c in 0..scat.n_objects() {
        for t in xy.at(c) {
            let el = decode_element(src, t)?;
            let e = scat.cod(el.phi);
            let fx = pushed(scat, e, &el.x);
            let mut fys = Vec::with_capacity(el.ys.len());
            for (i, yv) in el.ys.iter().enumerate() {
                let fib = src
                    .fibre(el.phi, i + 1)
                    .ok_or_else(|| StructureError::MissingFibre(t.clone(), i + 1))?;
                fys.push(pushed(scat, fib, yv));
            }
            let fys_refs: Vec<&str> = fys.iter().map(String::as_str).collect();
            let image = render_parts(&fx, dcat.mor_label(r.mmap[el.phi]), &fys_refs);
            out.insert(r.omap[c], pushed(scat, c, t), image);
        }
    }
    Ok(out)
}

fn identity_fn(_: usize, e: &str) -> Option<String> {
    Some(e.to_string())
}

/// Checks the opmonoidal structure of the pushforward along the given
/// assignment: well-typed comparison images, the three coherence
/// conditions against lambda, rho, and alpha, and the pullback property of
/// sampled naturality squares of the comparison map.
pub fn check_opmonoidal(
    src: &OperadicCategory,
    dst: &OperadicCategory,
    data: &OperadicFunctorData,
    samples: usize,
    sampler: &mut Sampler,
) -> ValidationReport {
    let mut report = ValidationReport::new();
    let Some(r) = resolve(src, dst, data, &mut report) else {
        return report;
    };
    let scat = src.cat();
    let dcat = dst.cat();
    let src_unit = unit(src);
    let f0 = counit_map(src, dst, &r);
    let f0_fn = f0.as_fn();

    for round in 0..samples {
        let x = sampler.collection(src, &format!("x{round}o"));
        let y = sampler.collection(src, &format!("y{round}o"));
        let z = sampler.collection(src, &format!("z{round}o"));
        let push_x = push_collection(src, &r, &x);
        let push_y = push_collection(src, &r, &y);

        let f2_xy = match comparison_map(src, dst, &r, &x, &y) {
            Ok(m) => m,
            Err(e) => {
                report.fail("opmonoidal-typing", e.to_string(), vec![round.to_string()]);
                continue;
            }
        };
        let target = tensor(dst, &push_x, &push_y);
        for (d, from, to) in f2_xy.entries() {
            if target.contains(d, to) {
                report.bump("opmonoidal-typing", 1);
            } else {
                report.fail(
                    "opmonoidal-typing",
                    "comparison image is not an element of the target tensor",
                    vec![dcat.object_label(d).to_string(), from.to_string(), to.to_string()],
                );
            }
        }

        let f2_ux = match comparison_map(src, dst, &r, &src_unit, &x) {
            Ok(m) => m,
            Err(e) => {
                report.fail(
                    "coherence-with-lambda",
                    e.to_string(),
                    vec![round.to_string()],
                );
                continue;
            }
        };
        let ux = tensor(src, &src_unit, &x);
        for c in 0..scat.n_objects() {
            for t in ux.at(c) {
                let outcome = (|| -> Result<(String, String), StructureError> {
                    let img = f2_ux.get(r.omap[c], &pushed(scat, c, t)).ok_or_else(|| {
                        StructureError::MapUndefined(t.clone(), scat.object_label(c).to_string())
                    })?;
                    let stripped = map_element(dst, &f0_fn, &identity_fn, img)?;
                    let lhs = lambda(dst, &stripped)?;
                    let rhs = pushed(scat, c, &lambda(src, t)?);
                    Ok((lhs, rhs))
                })();
                match outcome {
                    Ok((lhs, rhs)) if lhs == rhs => report.bump("coherence-with-lambda", 1),
                    Ok((lhs, rhs)) => report.fail(
                        "coherence-with-lambda",
                        "the two paths around the counit square disagree",
                        vec![scat.object_label(c).to_string(), t.clone(), lhs, rhs],
                    ),
                    Err(e) => report.fail(
                        "coherence-with-lambda",
                        e.to_string(),
                        vec![scat.object_label(c).to_string(), t.clone()],
                    ),
                }
            }
        }

        let f2_xu = match comparison_map(src, dst, &r, &x, &src_unit) {
            Ok(m) => m,
            Err(e) => {
                report.fail("coherence-with-rho", e.to_string(), vec![round.to_string()]);
                continue;
            }
        };
        for c in 0..scat.n_objects() {
            for el in x.at(c) {
                let outcome = (|| -> Result<(String, String), StructureError> {
                    let t = rho(src, c, el)?;
                    let img = f2_xu.get(r.omap[c], &pushed(scat, c, &t)).ok_or_else(|| {
                        StructureError::MapUndefined(t.clone(), scat.object_label(c).to_string())
                    })?;
                    let lhs = map_element(dst, &identity_fn, &f0_fn, img)?;
                    let rhs = rho(dst, r.omap[c], &pushed(scat, c, el))?;
                    Ok((lhs, rhs))
                })();
                match outcome {
                    Ok((lhs, rhs)) if lhs == rhs => report.bump("coherence-with-rho", 1),
                    Ok((lhs, rhs)) => report.fail(
                        "coherence-with-rho",
                        "the two paths around the counit square disagree",
                        vec![scat.object_label(c).to_string(), el.clone(), lhs, rhs],
                    ),
                    Err(e) => report.fail(
                        "coherence-with-rho",
                        e.to_string(),
                        vec![scat.object_label(c).to_string(), el.clone()],
                    ),
                }
            }
        }

        let xy = tensor(src, &x, &y);
        let yz = tensor(src, &y, &z);
        let maps = (|| -> Result<_, StructureError> {
            let f2_xy_z = comparison_map(src, dst, &r, &xy, &z)?;
            let f2_x_yz = comparison_map(src, dst, &r, &x, &yz)?;
            let f2_yz = comparison_map(src, dst, &r, &y, &z)?;
            Ok((f2_xy_z, f2_x_yz, f2_yz))
        })();
        let (f2_xy_z, f2_x_yz, f2_yz) = match maps {
            Ok(m) => m,
            Err(e) => {
                report.fail(
                    "coherence-with-alpha",
                    e.to_string(),
                    vec![round.to_string()],
                );
                continue;
            }
        };
        let f2_xy_fn = f2_xy.as_fn();
        let f2_yz_fn = f2_yz.as_fn();
        let xyz = tensor(src, &xy, &z);
        for c in 0..scat.n_objects() {
            for t in xyz.at(c) {
                let outcome = (|| -> Result<(String, String), StructureError> {
                    let img = f2_xy_z.get(r.omap[c], &pushed(scat, c, t)).ok_or_else(|| {
                        StructureError::MapUndefined(t.clone(), scat.object_label(c).to_string())
                    })?;
                    let spread = map_element(dst, &f2_xy_fn, &identity_fn, img)?;
                    let upper = alpha(dst, &spread)?;
                    let a = alpha(src, t)?;
                    let img2 = f2_x_yz.get(r.omap[c], &pushed(scat, c, &a)).ok_or_else(|| {
                        StructureError::MapUndefined(a.clone(), scat.object_label(c).to_string())
                    })?;
                    let lower = map_element(dst, &identity_fn, &f2_yz_fn, img2)?;
                    Ok((upper, lower))
                })();
                match outcome {
                    Ok((upper, lower)) if upper == lower => {
                        report.bump("coherence-with-alpha", 1)
                    }
                    Ok((upper, lower)) => report.fail(
                        "coherence-with-alpha",
                        "the two paths around the associativity square disagree",
                        vec![scat.object_label(c).to_string(), t.clone(), upper, lower],
                    ),
                    Err(e) => report.fail(
                        "coherence-with-alpha",
                        e.to_string(),
                        vec![scat.object_label(c).to_string(), t.clone()],
                    ),
                }
            }
        }

        let (xp, h) = sampler.map_into(src, &x, &format!("x{round}p"));
        let (yp, k) = sampler.map_into(src, &y, &format!("y{round}p"));
        check_cartesian(
            src,
            dst,
            &r,
            (&x, &y),
            (&xp, &yp),
            (&h, &k),
            &f2_xy,
            &mut report,
        );
    }
    report
}

/// Checks that one naturality square of the comparison map is a pullback:
/// the canonical map into the corner-pair set is a bijection.
#[allow(clippy::too_many_arguments)]
fn check_cartesian(
    src: &OperadicCategory,
    dst: &OperadicCategory,
    r: &Resolved,
    (x, y): (&Collection, &Collection),
    (xp, yp): (&Collection, &Collection),
    (h, k): (&CollectionMap, &CollectionMap),
    f2_xy: &CollectionMap,
    report: &mut ValidationReport,
) {
    let scat = src.cat();
    let dcat = dst.cat();
    let f2_p = match comparison_map(src, dst, r, xp, yp) {
        Ok(m) => m,
        Err(e) => {
            report.fail("cartesian-pullback", e.to_string(), vec![]);
            return;
        }
    };
    let xy = tensor(src, x, y);
    let xpyp = tensor(src, xp, yp);
    let push_x = push_collection(src, r, x);
    let push_y = push_collection(src, r, y);
    let dst_tensor = tensor(dst, &push_x, &push_y);
    let ph = push_map(src, r, x, h);
    let pk = push_map(src, r, y, k);
    let ph_fn = ph.as_fn();
    let pk_fn = pk.as_fn();
    let h_fn = h.as_fn();
    let k_fn = k.as_fn();

    let mut right: Vec<Vec<(String, String)>> = vec![Vec::new(); dcat.n_objects()];
    for d in 0..dcat.n_objects() {
        for b in dst_tensor.at(d) {
            match map_element(dst, &ph_fn, &pk_fn, b) {
                Ok(img) => right[d].push((b.clone(), img)),
                Err(e) => {
                    report.fail(
                        "cartesian-pullback",
                        e.to_string(),
                        vec![dcat.object_label(d).to_string(), b.clone()],
                    );
                    return;
                }
            }
        }
    }

    let mut corners: Vec<std::collections::BTreeSet<(String, String)>> =
        vec![Default::default(); dcat.n_objects()];
    for c in 0..scat.n_objects() {
        for t in xy.at(c) {
            let d = r.omap[c];
            let outcome = (|| -> Result<(), StructureError> {
                let moved = map_element(src, &h_fn, &k_fn, t)?;
                let s = pushed(scat, c, &moved);
                let b = f2_xy.get(d, &pushed(scat, c, t)).ok_or_else(|| {
                    StructureError::MapUndefined(t.clone(), scat.object_label(c).to_string())
                })?;
                let via_bottom = f2_p.get(d, &s).ok_or_else(|| {
                    StructureError::MapUndefined(s.clone(), dcat.object_label(d).to_string())
                })?;
                let via_right = right[d]
                    .iter()
                    .find(|(bb, _)| bb == b)
                    .map(|(_, img)| img.as_str())
                    .ok_or_else(|| {
                        StructureError::MapUndefined(b.to_string(), dcat.object_label(d).to_string())
                    })?;
                if via_bottom != via_right {
                    report.fail(
                        "cartesian-naturality",
                        "the naturality square does not commute",
                        vec![
                            dcat.object_label(d).to_string(),
                            t.clone(),
                            via_bottom.to_string(),
                            via_right.to_string(),
                        ],
                    );
                    return Ok(());
                }
                if !corners[d].insert((s, b.to_string())) {
                    report.fail(
                        "cartesian-pullback",
                        "two elements reach the same corner pair",
                        vec![dcat.object_label(d).to_string(), t.clone()],
                    );
                }
                Ok(())
            })();
            if let Err(e) = outcome {
                report.fail(
                    "cartesian-pullback",
                    e.to_string(),
                    vec![scat.object_label(c).to_string(), t.clone()],
                );
            }
        }
    }

    let pushed_xpyp = push_collection(src, r, &xpyp);
    for d in 0..dcat.n_objects() {
        for s in pushed_xpyp.at(d) {
            let Some(via_bottom) = f2_p.get(d, s) else {
                continue;
            };
            for (b, img) in &right[d] {
                if img != via_bottom {
                    continue;
                }
                if corners[d].contains(&(s.clone(), b.clone())) {
                    report.bump("cartesian-pullback", 1);
                } else {
                    report.fail(
                        "cartesian-pullback",
                        "corner pair is not reached by any element",
                        vec![dcat.object_label(d).to_string(), s.clone(), b.clone()],
                    );
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{bouquets, finite_ordinals, finite_sets};
    use crate::functor::{cardinality_functor_data, inclusion_data, validate_functor};

    #[test]
    fn the_identity_functor_is_opmonoidal() {
        let s2 = finite_sets(2);
        let mut sampler = Sampler::new(0, 2);
        let report = check_opmonoidal(&s2, &s2, &inclusion_data(&s2), 5, &mut sampler);
        assert!(report.pass(), "{}", report.render());
        assert!(report.stats()["coherence-with-alpha"] > 0);
        assert!(report.stats()["cartesian-pullback"] > 0);
    }

    #[test]
    fn the_order_forgetting_functor_is_opmonoidal() {
        let p2 = finite_ordinals(2);
        let s2 = finite_sets(2);
        let data = cardinality_functor_data(&p2);
        assert!(validate_functor(&p2, &s2, &data).pass());
        let mut sampler = Sampler::new(0, 2);
        let report = check_opmonoidal(&p2, &s2, &data, 10, &mut sampler);
        assert!(report.pass(), "{}", report.render());
        assert!(report.stats()["coherence-with-lambda"] > 0);
        assert!(report.stats()["coherence-with-rho"] > 0);
        assert!(report.stats()["coherence-with-alpha"] > 0);
    }

    #[test]
    fn the_cardinality_functor_is_opmonoidal_for_coloured_bouquets() {
        let bq = bouquets(&["r", "g"], 2);
        let s2 = finite_sets(2);
        let data = cardinality_functor_data(&bq);
        assert!(validate_functor(&bq, &s2, &data).pass());
        let mut sampler = Sampler::new(1, 1);
        let report = check_opmonoidal(&bq, &s2, &data, 3, &mut sampler);
        assert!(report.pass(), "{}", report.render());
    }

    #[test]
    fn a_mutated_morphism_image_breaks_the_alpha_coherence() {
        let p2 = finite_ordinals(2);
        let s2 = finite_sets(2);
        let mut data = cardinality_functor_data(&p2);
        for entry in &mut data.morphism_map {
            if entry.0 == "2>2[1 1]" {
                entry.1 = "2>2[2 2]".to_string();
            }
        }
        assert!(!validate_functor(&p2, &s2, &data).pass());
        let mut sampler = Sampler::new(0, 2);
        let report = check_opmonoidal(&p2, &s2, &data, 10, &mut sampler);
        assert!(!report.pass());
        assert!(!report.failures_for("coherence-with-alpha").is_empty());
    }
}
