use opcat::builders::{
    adjoin_terminal, bouquets, card_one, chain_poset, discrete_zero, finite_ordinals, finite_sets,
    two_trees,
};
use opcat::coll::verify_skew_axioms;
use opcat::diag::diagnostics;
use opcat::functor::{cardinality_functor_data, validate_functor};
use opcat::hopf::{OmegaMode, hopf_sufficient_check};
use opcat::normal::{ft_subcategory, left_normal_check, wedge, wedge_bijectivity_check};
use opcat::operad::{count_presheaf_actions, enumerate_operads, terminal_operad, validate_operad};
use opcat::operadic::{OperadicCategory, validate_operadic};
use opcat::opmonoidal::check_opmonoidal;
use opcat::rebuild::roundtrip;
use opcat::sample::Sampler;

fn fixtures() -> Vec<(&'static str, OperadicCategory)> {
    let chain = chain_poset(3);
    vec![
        ("finite sets", finite_sets(3)),
        ("finite ordinals", finite_ordinals(3)),
        ("discrete zero", discrete_zero(&chain).unwrap()),
        ("adjoined terminal", adjoin_terminal(&chain).unwrap()),
        ("cardinality one", card_one(&chain, None).unwrap()),
        ("bouquets", bouquets(&["r", "g"], 2)),
        ("two level trees", two_trees(3, 2)),
    ]
}

fn label_tables(
    oc: &OperadicCategory,
) -> (Vec<(String, Vec<String>)>, Vec<(String, String, Vec<String>)>) {
    let cat = oc.cat();
    let fibres = oc
        .fibre_table()
        .into_iter()
        .map(|(m, entries)| {
            (
                cat.mor_label(m).to_string(),
                entries
                    .iter()
                    .map(|&c| cat.object_label(c).to_string())
                    .collect(),
            )
        })
        .collect();
    let fibre_mors = oc
        .fibre_morphism_table()
        .into_iter()
        .map(|(outer, inner, entries)| {
            (
                cat.mor_label(outer).to_string(),
                cat.mor_label(inner).to_string(),
                entries
                    .iter()
                    .map(|&m| cat.mor_label(m).to_string())
                    .collect(),
            )
        })
        .collect();
    (fibres, fibre_mors)
}

fn rebuild_fails(
    oc: &OperadicCategory,
    fibres: &[(String, Vec<String>)],
    fibre_mors: &[(String, String, Vec<String>)],
) -> bool {
    let cat = oc.cat();
    let card_maps: Vec<Vec<usize>> = (0..cat.n_morphisms())
        .map(|m| oc.mor_card(m).values().to_vec())
        .collect();
    match OperadicCategory::new(&cat.raw(), oc.obj_cards(), &card_maps, fibres, fibre_mors) {
        Ok(mutated) => !validate_operadic(&mutated).pass(),
        Err(_) => true,
    }
}

#[test]
fn validation_accepts_every_fixture_and_rejects_every_table_mutation() {
    for (name, oc) in fixtures() {
        let report = validate_operadic(&oc);
        assert!(report.pass(), "{name}: {}", report.render());
    }

    let oc = finite_sets(2);
    let cat = oc.cat();
    let (fibres, fibre_mors) = label_tables(&oc);
    let object_labels = cat.object_labels().to_vec();
    let morphism_labels: Vec<String> = (0..cat.n_morphisms())
        .map(|m| cat.mor_label(m).to_string())
        .collect();

    let mut mutations = 0usize;
    for (row, (_, entries)) in fibres.iter().enumerate() {
        for pos in 0..entries.len() {
            for alt in &object_labels {
                if *alt == entries[pos] {
                    continue;
                }
                let mut bent = fibres.clone();
                bent[row].1[pos] = alt.clone();
                assert!(
                    rebuild_fails(&oc, &bent, &fibre_mors),
                    "fibre entry {row}/{pos} bent to {alt} still validates"
                );
                mutations += 1;
            }
        }
    }
    for (row, (_, _, entries)) in fibre_mors.iter().enumerate() {
        for pos in 0..entries.len() {
            for alt in &morphism_labels {
                if *alt == entries[pos] {
                    continue;
                }
                let mut bent = fibre_mors.clone();
                bent[row].2[pos] = alt.clone();
                assert!(
                    rebuild_fails(&oc, &fibres, &bent),
                    "fibre morphism entry {row}/{pos} bent to {alt} still validates"
                );
                mutations += 1;
            }
        }
    }
    assert!(mutations > 500, "only {mutations} mutations exercised");
}

#[test]
fn invertibility_fingerprints_match_the_known_examples() {
    let p3 = diagnostics(&finite_ordinals(3));
    assert!(p3.lambda_invertible && p3.rho_invertible && p3.alpha_invertible);

    let s2 = diagnostics(&finite_sets(2));
    assert!(s2.lambda_invertible);
    assert!(!s2.rho_invertible);
    assert_eq!(s2.rho_witness, ["2>2[2 1]"]);
    assert!(!s2.alpha_invertible);
    let double = s2
        .alpha_witness
        .iter()
        .find(|w| w.psi == "2>2[1 2]" && w.targets == ["1>1[1]", "1>1[1]"])
        .expect("the identity-over-points family is a witness");
    assert_eq!(double.lifts.len(), 2, "{:?}", double.lifts);

    let dz = diagnostics(&discrete_zero(&chain_poset(3)).unwrap());
    assert!(!dz.lambda_invertible);
    assert!(!dz.lambda_witness.is_empty());
}

#[test]
fn skew_axioms_hold_on_seeded_collection_tuples() {
    for (name, oc) in fixtures() {
        let max_size = if oc.cat().n_morphisms() > 100 { 1 } else { 2 };
        let mut sampler = Sampler::new(3, max_size);
        let mut report = opcat::report::ValidationReport::new();
        for _ in 0..20 {
            let w = sampler.collection(&oc, "w");
            let x = sampler.collection(&oc, "x");
            let y = sampler.collection(&oc, "y");
            let z = sampler.collection(&oc, "z");
            report.merge(verify_skew_axioms(&oc, &w, &x, &y, &z, &mut sampler));
        }
        assert!(report.pass(), "{name}: {}", report.render());
    }
}

#[test]
fn fibrewise_trivial_subcategories_have_known_sizes() {
    let s3 = finite_sets(3);
    let ft = ft_subcategory(&s3).unwrap();
    assert_eq!(ft.morphisms.len(), 10);

    let p3 = finite_ordinals(3);
    let ft = ft_subcategory(&p3).unwrap();
    assert_eq!(ft.morphisms.len(), p3.cat().n_objects());
    for &m in &ft.morphisms {
        assert_eq!(p3.cat().identity(p3.cat().dom(m)), Some(m));
    }

    let dz = discrete_zero(&chain_poset(3)).unwrap();
    let ft = ft_subcategory(&dz).unwrap();
    assert_eq!(ft.morphisms.len(), dz.cat().n_morphisms());
}

#[test]
fn wedges_over_empty_cardinalities_collapse_to_the_left_factor() {
    let dz = discrete_zero(&chain_poset(2)).unwrap();
    let mut sampler = Sampler::new(9, 2);
    for _ in 0..20 {
        let x = sampler.presheaf(&dz, "x");
        let y = sampler.presheaf(&dz, "y");
        let w = wedge(&dz, &x, &y).unwrap();
        for c in 0..dz.cat().n_objects() {
            assert_eq!(w.class_count(c), x.carrier().at(c).len());
        }
    }

    let mut sampler = Sampler::new(10, 2);
    let report = wedge_bijectivity_check(&dz, 20, &mut sampler);
    assert!(!report.pass());
    for f in report.failures() {
        assert_eq!(f.check, "wedge-lambda", "{f:?}");
    }
    assert_eq!(report.stats()["wedge-alpha-bijective"], 20);
    assert_eq!(report.stats()["wedge-rho-bijective"], 20);
}

#[test]
fn normalized_structure_maps_are_bijective_for_sets_and_ordinals() {
    for (name, oc) in [("finite sets", finite_sets(2)), ("finite ordinals", finite_ordinals(2))] {
        let mut sampler = Sampler::new(12, 2);
        let report = wedge_bijectivity_check(&oc, 20, &mut sampler);
        assert!(report.pass(), "{name}: {}", report.render());
        assert_eq!(report.stats()["wedge-alpha-bijective"], 20);
        assert_eq!(report.stats()["wedge-lambda-bijective"], 20);
        assert_eq!(report.stats()["wedge-rho-bijective"], 20);
    }
}

#[test]
fn factorization_search_passes_small_fixtures_and_fails_two_level_trees() {
    let chain = chain_poset(3);
    let passing: Vec<(&str, OperadicCategory)> = vec![
        ("finite ordinals", finite_ordinals(2)),
        ("finite sets", finite_sets(2)),
        ("bouquets", bouquets(&["r", "g"], 2)),
        ("discrete zero", discrete_zero(&chain).unwrap()),
        ("adjoined terminal", adjoin_terminal(&chain).unwrap()),
    ];
    for (name, oc) in passing {
        let report = hopf_sufficient_check(&oc, OmegaMode::All, 1_000_000).unwrap();
        assert!(report.pass(), "{name}: {}", report.render());
    }

    let om = two_trees(3, 2);
    let report = hopf_sufficient_check(&om, OmegaMode::All, 8_000_000).unwrap();
    assert!(!report.pass());
    let theta = "3>2[1 1 2]=>2>1[1 1][1 2 2][1 1]";
    let omega1 = "1>2[1]=>1>2[1][1][1 2]";
    let omega2 = "2>2[1 2]=>1>1[1][1 1][1 1]";
    assert!(
        report
            .failures()
            .iter()
            .any(|f| f.witness == [theta, omega1, omega2]),
        "the known family is missing from the report"
    );
}

#[test]
fn genuine_fixtures_are_left_normal_and_the_discrete_one_is_not() {
    for (name, oc) in fixtures() {
        if oc.is_genuine().genuine {
            let verdict = left_normal_check(&oc);
            assert!(verdict.left_normal, "{name}: {}", verdict.reason);
        }
    }
    let dz = discrete_zero(&chain_poset(3)).unwrap();
    let verdict = left_normal_check(&dz);
    assert!(!verdict.left_normal);
    assert!(!verdict.witness.is_empty());
}

#[test]
fn terminal_operads_validate_and_operad_count_matches_action_count() {
    for (name, oc) in fixtures() {
        let t = terminal_operad(&oc);
        let report = validate_operad(&oc, &t);
        assert!(report.pass(), "{name}: {}", report.render());
    }

    let dz = discrete_zero(&chain_poset(2)).unwrap();
    let operads = enumerate_operads(&dz, &[2, 1], 100_000).unwrap();
    let actions = count_presheaf_actions(&dz, &[2, 1], 100_000).unwrap();
    assert_eq!(operads, 2);
    assert_eq!(operads, actions);
}

#[test]
fn every_fixture_survives_reconstruction() {
    for (name, oc) in fixtures() {
        let rt = roundtrip(&oc).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(rt.report.pass(), "{name}: {}", rt.report.render());
    }
    let s2 = roundtrip(&finite_sets(2)).unwrap();
    assert_eq!(s2.rebuilt.cat().n_morphisms(), 11);
    let p2 = roundtrip(&finite_ordinals(2)).unwrap();
    assert_eq!(p2.rebuilt.cat().n_morphisms(), 10);
}

#[test]
fn cardinality_transport_is_opmonoidal_with_cartesian_comparison() {
    let chain = chain_poset(3);
    let transported: Vec<(&str, OperadicCategory)> = vec![
        ("finite sets", finite_sets(3)),
        ("finite ordinals", finite_ordinals(3)),
        ("discrete zero", discrete_zero(&chain).unwrap()),
        ("adjoined terminal", adjoin_terminal(&chain).unwrap()),
        ("cardinality one", card_one(&chain, None).unwrap()),
        ("bouquets", bouquets(&["r", "g"], 2)),
        ("two level trees", two_trees(2, 1)),
    ];
    for (name, oc) in transported {
        let top = (0..oc.cat().n_objects())
            .map(|c| oc.obj_card(c))
            .max()
            .unwrap();
        let sets = finite_sets(top);
        let data = cardinality_functor_data(&oc);
        let functor = validate_functor(&oc, &sets, &data);
        assert!(functor.pass(), "{name}: {}", functor.render());
        let mut sampler = Sampler::new(11, 2);
        let report = check_opmonoidal(&oc, &sets, &data, 10, &mut sampler);
        assert!(report.pass(), "{name}: {}", report.render());
    }
}
