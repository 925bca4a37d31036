//! Invertibility diagnostics for the three structure maps of the collection
//! tensor, decided on the category data rather than on sampled collections.
//!
//! Each verdict is an equivalent condition on the operadic category: the left
//! unit map is invertible exactly when every object has a unique morphism to
//! a trivial object, the right unit map exactly when the only fibrewise
//! trivial morphisms are identities, and the associator exactly when every
//! lifting problem against the fibre functors has exactly one solution.

use crate::normal::is_fibrewise_trivial;
use crate::operadic::OperadicCategory;

/// A lifting problem with the wrong number of solutions: the base morphism
/// `psi`, the target family (one morphism out of each fibre of `psi`), and
/// every factorization `(phi, psi_prime)` of `psi` whose fibre morphisms
/// reproduce the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftWitness {
    pub psi: String,
    pub targets: Vec<String>,
    pub lifts: Vec<(String, String)>,
}

/// Invertibility of the associator, left unit, and right unit on collections,
/// with witnesses for whichever fail.
#[derive(Clone, Debug, Default)]
pub struct Diagnostics {
    pub lambda_invertible: bool,
    /// On failure: the offending object followed by its morphisms to
    /// trivial objects (possibly none).
    pub lambda_witness: Vec<String>,
    pub rho_invertible: bool,
    /// On failure: every fibrewise trivial morphism that is not an identity.
    pub rho_witness: Vec<String>,
    pub alpha_invertible: bool,
    /// On failure: every lifting problem with zero or at least two solutions.
    pub alpha_witness: Vec<LiftWitness>,
    /// Lifting problems examined.
    pub families_checked: usize,
    /// Target families skipped because no object realizes their total
    /// cardinality; no factorization can exist for these, at any scale.
    pub families_skipped: usize,
}

/// Decides all three invertibility questions for a validated category.
pub fn diagnostics(oc: &OperadicCategory) -> Diagnostics {
    let cat = oc.cat();
    let mut d = Diagnostics::default();

    let genuine = oc.is_genuine();
    d.lambda_invertible = genuine.genuine;
    if let Some(w) = genuine.witness {
        d.lambda_witness.push(cat.object_label(w.object).to_string());
        for m in w.mors {
            d.lambda_witness.push(cat.mor_label(m).to_string());
        }
    }

    for m in 0..cat.n_morphisms() {
        if is_fibrewise_trivial(oc, m) && !cat.is_identity(m) {
            d.rho_witness.push(cat.mor_label(m).to_string());
        }
    }
    d.rho_invertible = d.rho_witness.is_empty();

    let mut factorizations: Vec<Vec<(usize, usize)>> = vec![Vec::new(); cat.n_morphisms()];
    for (outer, inner) in cat.composable_pairs() {
        if let Some(m) = cat.compose(outer, inner) {
            factorizations[m].push((inner, outer));
        }
    }

    let realizable =
        |total: usize| (0..cat.n_objects()).any(|c| oc.obj_card(c) == total);

    for psi in 0..cat.n_morphisms() {
        let e = cat.cod(psi);
        let k = oc.obj_card(e);
        let fibres: Vec<usize> = (1..=k)
            .map(|j| oc.fibre(psi, j).expect("fibres of a validated category"))
            .collect();
        let choices: Vec<&[usize]> = fibres.iter().map(|&f| cat.hom_out(f)).collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut idx = vec![0usize; k];
        loop {
            let family: Vec<usize> = (0..k).map(|j| choices[j][idx[j]]).collect();
            let total: usize = family.iter().map(|&t| oc.obj_card(cat.cod(t))).sum();
            if realizable(total) {
                d.families_checked += 1;
                let lifts: Vec<(usize, usize)> = factorizations[psi]
                    .iter()
                    .copied()
                    .filter(|&(phi, psip)| {
                        (0..k).all(|j| oc.fibre_morphism(phi, psip, j + 1) == Some(family[j]))
                    })
                    .collect();
                if lifts.len() != 1 {
                    d.alpha_witness.push(LiftWitness {
                        psi: cat.mor_label(psi).to_string(),
                        targets: family
                            .iter()
                            .map(|&t| cat.mor_label(t).to_string())
                            .collect(),
                        lifts: lifts
                            .iter()
                            .map(|&(phi, psip)| {
                                (
                                    cat.mor_label(phi).to_string(),
                                    cat.mor_label(psip).to_string(),
                                )
                            })
                            .collect(),
                    });
                }
            } else {
                d.families_skipped += 1;
            }
            let mut done = true;
            for j in (0..k).rev() {
                idx[j] += 1;
                if idx[j] < choices[j].len() {
                    done = false;
                    break;
                }
                idx[j] = 0;
            }
            if done {
                break;
            }
        }
    }
    d.alpha_invertible = d.alpha_witness.is_empty();
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{chain_poset, discrete_zero, finite_ordinals, finite_sets};

    #[test]
    fn ordinals_have_all_three_maps_invertible() {
        for n in [2usize, 3] {
            let d = diagnostics(&finite_ordinals(n));
            assert!(d.lambda_invertible, "lambda over ordinals up to {n}");
            assert!(d.rho_invertible, "rho over ordinals up to {n}");
            assert!(d.alpha_invertible, "alpha over ordinals up to {n}");
            assert!(d.families_checked > 0);
        }
        assert!(diagnostics(&finite_ordinals(3)).families_skipped > 0);
    }

    #[test]
    fn finite_sets_fail_the_unit_and_associativity_diagnostics() {
        let d = diagnostics(&finite_sets(2));
        assert!(d.lambda_invertible);
        assert!(!d.rho_invertible);
        assert_eq!(d.rho_witness, vec!["2>2[2 1]".to_string()]);
        assert!(!d.alpha_invertible);
        let pinned = d
            .alpha_witness
            .iter()
            .find(|w| w.psi == "2>2[1 2]" && w.targets == ["1>1[1]", "1>1[1]"])
            .expect("the identity base with identity targets fails");
        let mut lifts = pinned.lifts.clone();
        lifts.sort();
        assert_eq!(
            lifts,
            vec![
                ("2>2[1 2]".to_string(), "2>2[1 2]".to_string()),
                ("2>2[2 1]".to_string(), "2>2[2 1]".to_string()),
            ]
        );
    }

    #[test]
    fn all_cardinality_zero_categories_fail_the_left_unit_diagnostic() {
        let single = diagnostics(&discrete_zero(&chain_poset(1)).unwrap());
        assert!(!single.lambda_invertible);
        assert!(single.rho_invertible);
        assert!(single.alpha_invertible);

        let pair = diagnostics(&discrete_zero(&chain_poset(2)).unwrap());
        assert!(!pair.lambda_invertible);
        assert!(!pair.rho_invertible, "a vacuously fibrewise trivial arrow");
        assert_eq!(pair.rho_witness, vec!["p0->p1".to_string()]);
        assert!(!pair.alpha_invertible);
        assert_eq!(pair.alpha_witness[0].lifts.len(), 2);
    }
}
