//! Invariants checked on generated inputs against the reference computations in `common`.

mod common;

use proptest::prelude::*;
use rand::Rng;
use strategic_knapsack::knapsack::{brute_force_opt, opt_knapsack};
use strategic_knapsack::lab::certificates::{eval_certificate, CertParams, Family};
use strategic_knapsack::lab::{
    audit_strategyproofness, enumerate_pure_nash, AuditOptions, Deviation, NashOptions,
};
use strategic_knapsack::mechanisms::{alpha_eu, alpha_ptl, run_greedy, run_max_value, MechanismId};
use strategic_knapsack::model::{expected_utility, validate, Item, ItemSet, Model, ReportProfile};
use strategic_knapsack::program::{solve_program, ProgramInstance};
use strategic_knapsack::{r, Instance, Rational};

use common::{
    brute_opt_value, program_dual_oracle, program_lines, random_instance, reference_half_greedy,
    rng,
};

fn arb_item(id: String) -> impl Strategy<Value = Item> {
    (1i64..=12, 1i64..=12).prop_map(move |(v, s)| Item::new(id.clone(), 1, r(v, 4), r(s, 12)))
}

/// A pool of up to 8 items plus three masks picking `A`, `B ⊆ A` and `C` with `C ∩ A ⊆ B`.
fn arb_nested_sets() -> impl Strategy<Value = (ItemSet, ItemSet, ItemSet)> {
    (1usize..=8)
        .prop_flat_map(|n| {
            let items: Vec<_> = (0..n).map(|k| arb_item(format!("t{k}"))).collect();
            (items, any::<u8>(), any::<u8>(), any::<u8>())
        })
        .prop_map(|(items, a, b, c)| {
            let pool = ItemSet::from_items(items);
            let a_set = pool.subset_by_mask(a as u64);
            let b_set = a_set.subset_by_mask(b as u64);
            let c_raw = pool.subset_by_mask(c as u64);
            // Drop members of A \ B from C.
            let c_set = ItemSet::from_items(
                c_raw
                    .iter()
                    .filter(|it| !a_set.contains_id(it.id()) || b_set.contains_id(it.id()))
                    .cloned(),
            );
            (a_set, b_set, c_set)
        })
}

fn one(set: &ItemSet) -> ReportProfile {
    ReportProfile(vec![set.clone()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn shrinking_the_pool_keeps_surviving_choices((a, b, c) in arb_nested_sets()) {
        let cap = r(1, 1);
        let gr_a = run_greedy(&one(&a), &cap);
        let gr_b = run_greedy(&one(&b), &cap);
        prop_assert!(c.intersection(&gr_a).is_subset(&gr_b), "greedy: A={a} B={b} C={c}");
        let mv_a = run_max_value(&one(&a), &cap);
        let mv_b = run_max_value(&one(&b), &cap);
        prop_assert!(c.intersection(&mv_a).is_subset(&mv_b), "max-value: A={a} B={b} C={c}");
    }
}

fn scaled(inst: &Instance, factor: &Rational) -> Instance {
    let agents = inst
        .agents()
        .iter()
        .map(|a| {
            let items = a
                .items
                .iter()
                .map(|it| Item::new(it.id(), it.owner(), it.value().clone(), it.size() * factor))
                .collect();
            (a.model, items)
        })
        .collect();
    Instance::new(inst.capacity() * factor, agents).expect("scaling keeps validity")
}

fn all_mechanisms() -> Vec<MechanismId> {
    vec![
        MechanismId::Greedy,
        MechanismId::MaxValue,
        MechanismId::HalfGreedy,
        MechanismId::BadGreedy,
        MechanismId::Optimal,
        MechanismId::PacifyTheLiar(alpha_ptl()),
        MechanismId::EqualUtility(alpha_eu()),
        MechanismId::Next,
        MechanismId::ModifiedHalfGreedy,
    ]
}

#[test]
fn every_mechanism_is_feasible_and_scale_free() {
    for seed in 0..500u64 {
        let mut g = rng(10_000 + seed);
        let agents = if seed % 2 == 0 {
            2
        } else {
            g.random_range(1..=4)
        };
        let inst = random_instance(&mut g, agents, 4, Model::Understating);
        let factor = r(g.random_range(1..=9), g.random_range(1..=9));
        let big = scaled(&inst, &factor);
        let truth = inst.truthful();
        for mech in all_mechanisms() {
            if matches!(mech, MechanismId::EqualUtility(_)) && agents != 2 {
                assert!(mech.run(&truth, inst.capacity()).is_err());
                continue;
            }
            let dist = mech.run(&truth, inst.capacity()).unwrap();
            dist.check_feasible(inst.capacity(), &truth).unwrap();
            let mass: Rational = dist.atoms().iter().map(|(_, p)| p.clone()).sum();
            assert_eq!(mass, r(1, 1));
            let other = mech.run(&big.truthful(), big.capacity()).unwrap();
            let ids =
                |d: &strategic_knapsack::OutcomeDistribution| -> Vec<(Vec<String>, Rational)> {
                    d.atoms()
                        .iter()
                        .map(|(s, p)| (s.ids().iter().map(|x| x.to_string()).collect(), p.clone()))
                        .collect()
                };
            assert_eq!(
                ids(&dist),
                ids(&other),
                "seed {seed} {mech} factor {factor}"
            );
            let norm = big.normalized();
            assert_eq!(norm.capacity(), &r(1, 1));
            assert_eq!(
                ids(&mech.run(&norm.truthful(), norm.capacity()).unwrap()),
                ids(&dist)
            );
        }
    }
}

#[test]
fn half_greedy_matches_reference_scan() {
    for seed in 0..2000u64 {
        let mut g = rng(20_000 + seed);
        let agents = g.random_range(1..=5);
        let inst = random_instance(&mut g, agents, 4, Model::Understating);
        let (prefix, mv) = reference_half_greedy(&inst.union(), inst.capacity());
        let truth = inst.truthful();
        let gr = run_greedy(&truth, inst.capacity());
        assert_eq!(
            gr.ids(),
            prefix.iter().map(String::as_str).collect::<Vec<_>>(),
            "seed {seed}"
        );
        let m = run_max_value(&truth, inst.capacity());
        assert_eq!(m.ids().first().map(|s| s.to_string()), mv, "seed {seed}");
    }
}

#[test]
fn branch_and_bound_matches_exhaustive_search() {
    for seed in 0..1000u64 {
        let mut g = rng(30_000 + seed);
        let n = g.random_range(0..=12);
        let items =
            ItemSet::from_items((0..n).map(|k| common::random_item(&mut g, format!("k{k:02}"), 1)));
        let cap = r(g.random_range(1..=24), 12);
        let fast = opt_knapsack(&items, &cap).unwrap();
        assert_eq!(fast.value, brute_opt_value(&items, &cap), "seed {seed}");
        assert_eq!(fast, brute_force_opt(&items, &cap).unwrap(), "seed {seed}");
        assert!(fast.chosen.size() <= cap);
    }
}

/// Largest gain over every subset report of every agent, computed without the audit code.
fn brute_max_gain(mech: &MechanismId, inst: &Instance) -> Option<(usize, Rational)> {
    let truth = inst.truthful();
    let base = mech.run(&truth, inst.capacity()).unwrap();
    let mut best: Option<(usize, Rational)> = None;
    for i in 1..=inst.n() {
        let x = inst.true_set(i);
        let honest = expected_utility(x, &base);
        for mask in 0..1u64 << x.len() {
            let dist = mech
                .run(
                    &truth.with_report(i, x.subset_by_mask(mask)),
                    inst.capacity(),
                )
                .unwrap();
            let gain = expected_utility(x, &dist) - &honest;
            if gain.is_positive() && best.as_ref().is_none_or(|(_, b)| &gain > b) {
                best = Some((i, gain));
            }
        }
    }
    best
}

#[test]
fn understating_audit_is_sound_and_complete() {
    let mechs = [
        MechanismId::Greedy,
        MechanismId::Optimal,
        MechanismId::BadGreedy,
        MechanismId::HalfGreedy,
    ];
    let mut violations = 0;
    for seed in 0..300u64 {
        let mut g = rng(40_000 + seed);
        let agents = g.random_range(2..=3);
        let inst = random_instance(&mut g, agents, 4, Model::Understating);
        for mech in &mechs {
            let v = audit_strategyproofness(mech, &inst, &AuditOptions::default()).unwrap();
            assert!(v.complete);
            let brute = brute_max_gain(mech, &inst);
            match (v.witness(), &brute) {
                (None, None) => {}
                (Some(w), Some((_, gain))) => {
                    violations += 1;
                    assert_eq!(&w.gain, gain, "seed {seed} {mech}");
                    replay(mech, &inst, w);
                }
                (w, b) => panic!("seed {seed} {mech}: audit {w:?} vs brute force {b:?}"),
            }
        }
    }
    assert!(
        violations > 0,
        "the suite should exercise manipulable mechanisms"
    );
}

fn replay(mech: &MechanismId, inst: &Instance, w: &strategic_knapsack::lab::Witness) {
    let Deviation::Report(report) = &w.deviation else {
        panic!("item audit produced a size deviation");
    };
    let profile = inst.truthful().with_report(w.agent, report.clone());
    validate(inst, &profile).unwrap();
    let x = inst.true_set(w.agent);
    let dev = expected_utility(x, &mech.run(&profile, inst.capacity()).unwrap());
    let honest = expected_utility(x, &mech.run(&inst.truthful(), inst.capacity()).unwrap());
    assert_eq!(dev, w.deviating_utility);
    assert_eq!(honest, w.truthful_utility);
    assert_eq!(&dev - &honest, w.gain);
    assert!(w.gain.is_positive());
}

#[test]
fn full_model_witnesses_replay() {
    for seed in 0..60u64 {
        let mut g = rng(50_000 + seed);
        let inst = random_instance(&mut g, 2, 2, Model::Full);
        for mech in [
            MechanismId::Optimal,
            MechanismId::BadGreedy,
            MechanismId::HalfGreedy,
        ] {
            let seq = audit_strategyproofness(&mech, &inst, &AuditOptions::default()).unwrap();
            assert!(!seq.complete);
            if let Some(w) = seq.witness() {
                replay(&mech, &inst, w);
            }
            let par = audit_strategyproofness(
                &mech,
                &inst,
                &AuditOptions {
                    jobs: 3,
                    ..AuditOptions::default()
                },
            )
            .unwrap();
            assert_eq!(seq, par, "seed {seed} {mech}");
        }
        let over = inst.with_models(Model::Overstating);
        let v = audit_strategyproofness(&MechanismId::HalfGreedy, &over, &AuditOptions::default())
            .unwrap();
        assert!(!v.is_violation(), "seed {seed}: {:?}", v.witness());
    }
}

#[test]
fn nash_is_independent_of_thread_count() {
    for seed in 0..30u64 {
        let mut g = rng(60_000 + seed);
        let inst = random_instance(&mut g, 2, 3, Model::Understating);
        if inst.union().is_empty() {
            continue;
        }
        let seq =
            enumerate_pure_nash(&MechanismId::HalfGreedy, &inst, &NashOptions::default()).unwrap();
        let par = enumerate_pure_nash(
            &MechanismId::HalfGreedy,
            &inst,
            &NashOptions {
                jobs: 4,
                ..NashOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}

#[test]
fn program_matches_dual_on_larger_instances() {
    for seed in 0..300u64 {
        let mut g = rng(70_000 + seed);
        let inst = random_instance(&mut g, 2, 4, Model::Understating);
        let (x1, x2) = (inst.true_set(1).clone(), inst.true_set(2).clone());
        let sol =
            solve_program(&ProgramInstance::new(x1.clone(), x2.clone(), r(1, 1)).unwrap()).unwrap();
        let lines = program_lines(&x1, &x2, &r(1, 1));
        assert_eq!(sol.objective, program_dual_oracle(&lines), "seed {seed}");
        assert!(sol.distribution.atoms().len() <= 2);
        assert_eq!(
            expected_utility(&x1, &sol.distribution),
            expected_utility(&x2, &sol.distribution)
        );
    }
}

fn margin(family: Family, params: &CertParams) -> Option<Rational> {
    eval_certificate(family, params)
        .unwrap()
        .verdict
        .margin()
        .cloned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn randomized_certificates_weaken_as_the_ratio_grows(a in 1i64..100, b in 1i64..100) {
        let (lo, hi) = (a.min(b), a.max(b));
        for family in [Family::OverstateRand, Family::KqusRand] {
            let p_lo = CertParams::new(r(100 + lo, 100)).with_m(100);
            let p_hi = CertParams::new(r(100 + hi, 100)).with_m(100);
            if let Some(m_hi) = margin(family, &p_hi) {
                let m_lo = margin(family, &p_lo);
                prop_assert!(m_lo.as_ref().is_some_and(|m| m >= &m_hi), "{family} {lo} {hi}");
            }
        }
        prop_assert!(margin(Family::OverstateRand, &CertParams::new(r(2, 1)).with_m(100)).is_none());
        prop_assert!(margin(Family::KqusRand, &CertParams::new(r(2, 1)).with_m(100)).is_none());
    }

    #[test]
    fn deterministic_certificates_flip_at_m(m in 2i64..40, num in 100i64..4000) {
        let ratio = r(num, 100);
        for family in [Family::OverstateDet, Family::KqusDet] {
            let infeasible = margin(family, &CertParams::new(ratio.clone()).with_m(m)).is_some();
            prop_assert_eq!(infeasible, ratio < r(m, 1), "{} M={} r={}", family, m, ratio);
        }
    }

    #[test]
    fn understating_certificates_hold_below_their_thresholds(num in 100i64..161) {
        let ratio = r(num, 100);
        let det = margin(Family::UnderstateDet, &CertParams::new(ratio.clone()).with_eps(r(1, 1000)));
        prop_assert!(det.is_some(), "thm7 at {}", ratio);
        let rand = margin(Family::UnderstateRand, &CertParams::new(ratio.clone()));
        prop_assert_eq!(rand.is_some(), num <= 109, "thm8 at {}", ratio);
    }
}
