use kazhdan::backend::PresentedGroup;
use kazhdan::catalog::{build_from_descriptor, ronan_text};
use kazhdan::certify::{
    exact_ldl_with_shift, floor_dyadic, reconstruct_block, round_and_project, verify_certificate,
    Certificate, RoundedGram,
};
use kazhdan::error::Error;
use kazhdan::pipeline::{run_bound, RunConfig};
use kazhdan::presentation::parse_presentation;
use kazhdan::rewrite::RewriteBudget;
use kazhdan::with_group;
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `P·R·P` with `P = I − J/n`, by plain rational matrix products.
fn project_oracle(r: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = r.len();
    let p: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (if i == j { BigRational::one() } else { BigRational::zero() }) - rat(1, n as i64))
                .collect()
        })
        .collect();
    let mul = |a: &Vec<Vec<BigRational>>, b: &Vec<Vec<BigRational>>| -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| &a[i][k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    };
    mul(&mul(&p, &r.to_vec()), &p)
}

fn random_psd(n: usize, rank: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = DMatrix::from_fn(n, rank, |_, _| rng.gen_range(-1.0..1.0));
    let p = DMatrix::from_fn(n, n, |i, j| (if i == j { 1.0 } else { 0.0 }) - 1.0 / n as f64);
    &p * &v * v.transpose() * &p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projection_matches_rational_product(
        n in 1usize..7,
        vals in prop::collection::vec(-3.0f64..3.0, 49),
        bits in 2u32..12,
    ) {
        let q = DMatrix::from_fn(n, n, |i, j| vals[i.min(j) * 7 + i.max(j)]);
        let g = round_and_project(&q, bits);
        let scale = (bits as f64).exp2();
        let rounded: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| {
                let v = (q[(i, j)] * scale).round() as i64;
                BigRational::new(BigInt::from(v), BigInt::from(1i64 << bits))
            }).collect())
            .collect();
        let want = project_oracle(&rounded);
        for i in 0..n {
            let mut row = BigRational::zero();
            for j in 0..n {
                prop_assert_eq!(g.get(i, j), want[i][j].clone());
                prop_assert_eq!(g.get(i, j), g.get(j, i));
                row += g.get(i, j);
            }
            prop_assert!(row.is_zero());
        }
    }

    #[test]
    fn floor_dyadic_is_a_lower_bound(x in -100.0f64..100.0, bits in 1u32..40) {
        let r = floor_dyadic(x, bits);
        let f = kazhdan::certify::to_f64(&r);
        prop_assert!(f <= x);
        prop_assert!(x - f < (-(bits as f64)).exp2() + 1e-12);
    }
}

fn reconstruction_holds(q: &RoundedGram) {
    let (m, f) = exact_ldl_with_shift(q).expect("PSD input factors");
    let n = q.n;
    let block = reconstruct_block(n - 1, &f);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let want = BigRational::new(m.num[i * n + j].clone(), m.den.clone());
            assert_eq!(block[i][j], want, "entry ({i}, {j})");
        }
    }
    assert!(f.r.iter().all(|r| *r >= BigRational::zero()));
}

#[test]
fn ldl_reconstructs_the_shifted_gram_matrix() {
    for n in 2..=15 {
        for (rank, seed) in [(n, 1), (n / 2 + 1, 2), (1, 3)] {
            let q = round_and_project(&random_psd(n, rank, seed * 100 + n as u64), 24);
            reconstruction_holds(&q);
        }
    }
}

#[test]
fn indefinite_matrix_is_rejected() {
    let mut q = random_psd(6, 6, 7);
    q[(0, 0)] -= 3.0;
    q[(1, 1)] += 3.0;
    q[(0, 1)] += 0.0;
    let g = round_and_project(&-q, 20);
    assert!(matches!(exact_ldl_with_shift(&g), Err(Error::Certification(_))));
}

fn ronan_certificate() -> (Certificate, PresentedGroup) {
    let mut cfg = RunConfig::new("ronan:G1");
    cfg.radius = Some(2);
    let out = run_bound(&cfg).unwrap();
    let cert = out.certificate.unwrap();
    let g = PresentedGroup::new(parse_presentation(&ronan_text(1)).unwrap(), RewriteBudget::default());
    (cert, g)
}

fn a2_certificate() -> Certificate {
    let mut cfg = RunConfig::new("coxeter:A2");
    cfg.radius = Some(3);
    run_bound(&cfg).unwrap().certificate.unwrap()
}

fn rejects(cert: &Certificate, what: &str) -> String {
    let g = build_from_descriptor(&cert.group).unwrap();
    match with_group!(&g, |b| verify_certificate(cert, b)) {
        Err(Error::Verification(msg)) => msg,
        other => panic!("{what}: expected rejection, got {other:?}"),
    }
}

#[test]
fn fresh_certificate_verifies_and_round_trips() {
    let (cert, g) = ronan_certificate();
    let text = cert.to_text();
    let back = Certificate::parse(&text).unwrap();
    assert_eq!(back, cert);
    assert_eq!(back.to_text(), text);
    let v = verify_certificate(&back, &g).unwrap();
    assert_eq!(v.kappa_certified, cert.kappa_certified);
    assert!(v.is_positive());
    assert!(v.kappa_certified.as_str() >= "0.238");
}

#[test]
fn perturbed_l_entry_is_rejected() {
    let mut cert = a2_certificate();
    assert!(!cert.ldl.l.is_empty());
    cert.ldl.l[0].2 += rat(1, 1 << 20);
    let msg = rejects(&cert, "L entry");
    assert!(msg.contains("Q′ + τP"), "{msg}");
}

#[test]
fn understated_residual_norm_is_rejected() {
    let mut cert = a2_certificate();
    cert.c_l1 = &cert.c_l1 / BigInt::from(2);
    let msg = rejects(&cert, "‖c‖₁");
    assert!(msg.contains("‖c‖₁"), "{msg}");
}

#[test]
fn overstated_bound_is_rejected() {
    let mut cert = a2_certificate();
    cert.eps_certified = &cert.eps_certified + rat(1, 1000);
    rejects(&cert, "ε_certified");
}

#[test]
fn negative_pivot_is_rejected() {
    let mut cert = a2_certificate();
    let k = cert.ldl.r.iter().position(|r| !r.is_zero()).unwrap();
    cert.ldl.r[k] = -cert.ldl.r[k].clone();
    rejects(&cert, "negative r");
}

#[test]
fn dropped_residual_term_is_rejected() {
    let mut cert = a2_certificate();
    cert.residual.pop();
    rejects(&cert, "residual");
}

#[test]
fn tampered_text_fails_to_parse_or_verify() {
    let cert = a2_certificate();
    let text = cert.to_text().replace("generators 2", "generators 3");
    let back = Certificate::parse(&text).unwrap();
    rejects(&back, "|S|");
    assert!(Certificate::parse(&cert.to_text().replace("kazhdan-certificate v1", "v0")).is_err());
}
