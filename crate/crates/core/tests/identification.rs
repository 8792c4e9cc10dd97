//! Rewriting rules are consequences of the relators: replay them in a
//! finite quotient, and check that weaker budgets only weaken bounds.

use kazhdan::backend::{GroupBackend, MatrixGroup, PresentedGroup, PrimeField};
use kazhdan::catalog::steinberg_text;
use kazhdan::pipeline::{run_bound, RunConfig};
use kazhdan::presentation::{parse_presentation, PresentationSpec};
use kazhdan::rewrite::{bounded_completion, RewriteBudget};
use proptest::prelude::*;

/// `St_3(Z) → SL(3, F_7)`, `x_ij ↦ I + E_ij`.
fn steinberg_image(spec: &PresentationSpec) -> MatrixGroup<PrimeField> {
    let f = PrimeField::new(7).unwrap();
    let alphabet = spec.alphabet().clone();
    let elementary = |i: usize, j: usize, v: u32| {
        let mut m = vec![0u32; 9];
        for k in 0..3 {
            m[k * 3 + k] = 1;
        }
        m[i * 3 + j] = v;
        m
    };
    let mut gens = vec![Vec::new(); alphabet.len()];
    for &l in spec.generators() {
        let name = alphabet.name(l).to_string();
        let digits: Vec<usize> = name[1..].chars().map(|c| c.to_digit(10).unwrap() as usize - 1).collect();
        gens[l as usize] = elementary(digits[0], digits[1], 1);
        gens[alphabet.inverse(l) as usize] = elementary(digits[0], digits[1], 6);
    }
    MatrixGroup::new(3, f, alphabet, gens).unwrap()
}

#[test]
fn steinberg_relators_hold_in_sl3_f7() {
    let spec = parse_presentation(&steinberg_text(3)).unwrap();
    let img = steinberg_image(&spec);
    for r in spec.relators() {
        assert_eq!(img.canonicalize(r), img.identity());
    }
}

#[test]
fn steinberg_rules_replay_in_sl3_f7() {
    let spec = parse_presentation(&steinberg_text(3)).unwrap();
    let img = steinberg_image(&spec);
    let sys = bounded_completion(
        &spec,
        RewriteBudget {
            max_rules: 1500,
            max_rule_len: 20,
        },
    );
    assert!(sys.rule_count() > 100);
    for (lhs, rhs) in sys.rules() {
        assert_eq!(img.canonicalize(lhs), img.canonicalize(rhs));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Words with equal normal forms (also after ball closure) are equal in
    /// the finite quotient.
    #[test]
    fn merged_words_are_equal_in_the_quotient(
        a in prop::collection::vec(0u16..12, 0..9),
        b in prop::collection::vec(0u16..12, 0..9),
    ) {
        let spec = parse_presentation(&steinberg_text(3)).unwrap();
        let img = steinberg_image(&spec);
        let g = PresentedGroup::new(
            spec,
            RewriteBudget { max_rules: 300, max_rule_len: 16 },
        )
        .with_ball_closure(3);
        let (x, y) = (g.canonicalize(&a), g.canonicalize(&b));
        if x == y {
            prop_assert_eq!(img.canonicalize(&a), img.canonicalize(&b));
        }
        prop_assert_eq!(img.canonicalize(&x), img.canonicalize(&a));
    }
}

fn eps_with_budget(group: &str, d: usize, max_rules: usize) -> f64 {
    let mut cfg = RunConfig::new(group);
    cfg.radius = Some(d);
    cfg.max_rules = max_rules;
    cfg.closure_radius = Some(0);
    run_bound(&cfg).unwrap().report.eps_numeric.unwrap()
}

#[test]
fn weaker_budgets_never_raise_the_bound() {
    for (group, d) in [("cyclic:3", 1), ("coxeter:A2", 3)] {
        let full = eps_with_budget(group, d, 20_000);
        for rules in [0, 1, 2, 3] {
            let weak = eps_with_budget(group, d, rules);
            assert!(weak <= full + 1e-6, "{group} budget {rules}: {weak} > {full}");
        }
    }
}

#[test]
fn closure_only_identifies_equal_elements() {
    let text = "involutions: s t\nrel: (s t)^3\n";
    let spec = parse_presentation(text).unwrap();
    let g = PresentedGroup::new(spec, RewriteBudget { max_rules: 0, max_rule_len: 0 }).with_ball_closure(4);
    // the dihedral group of order 6: Ball(3) is everything
    let mut seen = std::collections::HashSet::new();
    for w in [vec![], vec![0], vec![1], vec![0, 1], vec![1, 0], vec![0, 1, 0], vec![1, 0, 1]] {
        seen.insert(g.canonicalize(&w));
    }
    assert_eq!(seen.len(), 6);
}
