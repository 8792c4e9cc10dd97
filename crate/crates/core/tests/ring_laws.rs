use kazhdan::backend::{elementary_generators, GroupBackend, MatrixGroup, PresentedGroup, PrimeField};
use kazhdan::elements::{ElementId, ElementTable};
use kazhdan::presentation::parse_presentation;
use kazhdan::rewrite::RewriteBudget;
use kazhdan::ring::{laplacian, RingElem};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

type Terms = Vec<(Vec<u16>, i64)>;

fn terms(alphabet: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (
            prop::collection::vec(0..alphabet as u16, 0..5),
            -4i64..=4,
        ),
        0..6,
    )
}

fn build<B: GroupBackend>(t: &mut ElementTable<'_, B>, spec: &Terms) -> RingElem<BigRational> {
    let mut x = RingElem::zero();
    for (w, c) in spec {
        let g = t.canonicalize(w);
        x.add_term(g, BigRational::from_integer(BigInt::from(*c)));
    }
    x
}

fn sl2_f5() -> MatrixGroup<PrimeField> {
    let f = PrimeField::new(5).unwrap();
    let (alphabet, gens) = elementary_generators(2, &f);
    MatrixGroup::new(2, f, alphabet, gens).unwrap()
}

fn free2() -> PresentedGroup {
    PresentedGroup::new(parse_presentation("gens: a b\n").unwrap(), RewriteBudget::default())
}

fn check_laws<B: GroupBackend>(g: &B, x: &Terms, y: &Terms, z: &Terms) {
    let mut t = ElementTable::new(g);
    let (x, y, z) = (build(&mut t, x), build(&mut t, y), build(&mut t, z));
    let xy = x.mul(&y, &mut t);
    // associativity and distributivity
    let l = xy.mul(&z, &mut t);
    let yz = y.mul(&z, &mut t);
    let r = x.mul(&yz, &mut t);
    assert_eq!(l, r);
    let xz = x.mul(&z, &mut t);
    assert_eq!(x.mul(&y.add(&z), &mut t), xy.add(&xz));
    // star is an anti-automorphism and an involution
    let lhs = xy.star(&t);
    let rhs = y.star(&t).mul(&x.star(&t), &mut t);
    assert_eq!(lhs, rhs);
    assert_eq!(x.star(&t).star(&t), x);
    // augmentation is a ring homomorphism and star-invariant
    assert_eq!(xy.augmentation(), x.augmentation() * y.augmentation());
    assert_eq!(x.star(&t).augmentation(), x.augmentation());
    // x*x has nonnegative identity coefficient equal to Σ c_g²
    let xx = x.star(&t).mul(&x, &mut t);
    let sq: BigRational = x.iter().map(|(_, c)| c * c).sum();
    assert_eq!(xx.coeff(t.identity()), sq);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_free_group(x in terms(4), y in terms(4), z in terms(4)) {
        check_laws(&free2(), &x, &y, &z);
    }

    #[test]
    fn ring_laws_finite_matrix_group(x in terms(4), y in terms(4), z in terms(4)) {
        check_laws(&sl2_f5(), &x, &y, &z);
    }

    #[test]
    fn float_and_rational_products_agree(x in terms(4), y in terms(4)) {
        let g = sl2_f5();
        let mut t = ElementTable::new(&g);
        let (x, y) = (build(&mut t, &x), build(&mut t, &y));
        let exact = x.mul(&y, &mut t);
        let float = x.to_f64().mul(&y.to_f64(), &mut t);
        let ids: Vec<ElementId> = exact.support().chain(float.support()).collect();
        for g in ids {
            let e: f64 = kazhdan::certify::to_f64(&exact.coeff(g));
            prop_assert!((e - float.coeff(g)).abs() < 1e-9);
        }
    }
}

#[test]
fn laplacian_is_self_adjoint_and_augmented() {
    let g = sl2_f5();
    let mut t = ElementTable::new(&g);
    let gens = t.generating_set();
    let b = laplacian(&t, &gens).unwrap();
    assert_eq!(b.delta.star(&t), b.delta);
    assert!(b.delta.augmentation().is_zero());
    let d2 = b.delta_squared(&mut t);
    assert!(d2.augmentation().is_zero());
    assert_eq!(d2.star(&t), d2);
    // |S|² from the identity term plus one for each pair s·s⁻¹
    assert_eq!(d2.coeff(t.identity()), BigRational::from_integer(BigInt::from(20)));
}
