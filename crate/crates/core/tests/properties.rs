use bianchi_noether::conslaw::{integral_expression, on_shell_remainder};
use bianchi_noether::geometry::MetricSpec;
use bianchi_noether::liealg::{commutator, VectorField5};
use bianchi_noether::noether::{find_case, residual_paths_agree, residual_template, verify_generator, verify_under, Generator};
use bianchi_noether::symbolic::{poly, Atom, Coord, Dir, Func, Monomial, RewriteRuleSet};
use bianchi_noether::{Poly, Rational, Scalar};
use proptest::prelude::*;
use std::sync::OnceLock;

fn template() -> &'static Poly {
    static T: OnceLock<Poly> = OnceLock::new();
    T.get_or_init(|| residual_template::<Rational>().unwrap())
}

const POINT_ATOMS: [Atom; 5] = [Atom::S, Atom::T, Atom::X, Atom::Y, Atom::Z];

fn jet_atoms() -> Vec<Atom> {
    let mut v = POINT_ATOMS.to_vec();
    v.extend(Dir::ALL.map(Atom::Vel));
    v.extend(Func::ALL.map(Atom::func));
    v
}

fn monomial(atoms: &'static [Atom], max_deg: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((0..atoms.len(), 1..=2i32), 0..=max_deg)
        .prop_map(move |fs| Monomial::from_factors(fs.into_iter().map(|(i, e)| (atoms[i], e))))
}

fn poly_over(atoms: &'static [Atom], max_deg: usize, max_terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((monomial(atoms, max_deg), -3i64..=3), 0..=max_terms)
        .prop_map(|ts| Poly::from_terms(ts.into_iter().map(|(m, c)| (m, Rational::from_int(c)))))
}

fn point_poly() -> impl Strategy<Value = Poly> {
    poly_over(&POINT_ATOMS, 2, 3)
}

fn jet_poly() -> impl Strategy<Value = Poly> {
    static ATOMS: OnceLock<Vec<Atom>> = OnceLock::new();
    poly_over(ATOMS.get_or_init(jet_atoms), 3, 4)
}

fn generator() -> impl Strategy<Value = Generator<Rational>> {
    (prop::array::uniform5(point_poly()), point_poly()).prop_map(|(coeffs, gauge)| VectorField5 { coeffs, gauge })
}

fn case_ii_symmetry() -> impl Strategy<Value = Generator<Rational>> {
    let case = find_case("II").unwrap();
    let verified: Vec<Generator<Rational>> =
        case.claimed_generators.iter().map(|(_, g)| g.clone()).filter(|g| verify_generator(g, &case).unwrap().verified()).collect();
    prop::collection::vec(-4i64..=4, verified.len()).prop_map(move |cs| {
        let k: Vec<Rational> = cs.into_iter().map(Rational::from_int).collect();
        Generator::combination(&verified, &k)
    })
}

fn case_ii_spec() -> MetricSpec<Rational> {
    find_case("II").unwrap().spec()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(a in jet_poly(), b in jet_poly(), c in jet_poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn display_parse_roundtrip(a in jet_poly()) {
        let back: Poly = poly(&a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn leibniz_rule(a in jet_poly(), b in jet_poly(), i in 0usize..5) {
        let x = POINT_ATOMS[i];
        prop_assert_eq!((&a * &b).diff(&x), &(&a.diff(&x) * &b) + &(&a * &b.diff(&x)));
        let d = |p: &Poly| p.total_derivative().unwrap();
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
    }

    #[test]
    fn rules_respect_arithmetic(a in jet_poly(), b in jet_poly()) {
        let rules = find_case("I").unwrap().constraints;
        let lhs = rules.apply(&(&a * &b)).unwrap();
        let rhs = &rules.apply(&a).unwrap() * &rules.apply(&b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn residual_paths_agree_on_random_generators(g in generator()) {
        prop_assert!(residual_paths_agree(template(), &g, &RewriteRuleSet::empty()).unwrap());
    }

    #[test]
    fn verification_is_scale_invariant(g in case_ii_symmetry(), c in prop::sample::select(vec![-3i64, -1, 2, 5])) {
        let spec = case_ii_spec();
        let k = Rational::from_int(c);
        prop_assert!(verify_under(&g, &spec).unwrap().verified());
        prop_assert!(verify_under(&g.scale(&k), &spec).unwrap().verified());
    }

    #[test]
    fn refutation_is_scale_invariant(g in generator(), c in prop::sample::select(vec![-2i64, 3])) {
        let spec = case_ii_spec();
        let k = Rational::from_int(c);
        prop_assert_eq!(
            verify_under(&g, &spec).unwrap().status,
            verify_under(&g.scale(&k), &spec).unwrap().status
        );
    }

    #[test]
    fn integrals_are_linear(g in generator(), h in generator()) {
        let spec = MetricSpec::generic();
        let sum = integral_expression(&g.add(&h), &spec).unwrap();
        let parts = &integral_expression(&g, &spec).unwrap() + &integral_expression(&h, &spec).unwrap();
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn symmetries_give_conserved_integrals(g in case_ii_symmetry()) {
        let spec = case_ii_spec();
        let i = integral_expression(&g, &spec).unwrap();
        prop_assert!(on_shell_remainder(&i, &spec).unwrap().is_zero());
    }

    #[test]
    fn bracket_is_antisymmetric_and_jacobi(a in generator(), b in generator(), c in generator()) {
        prop_assert!(commutator(&a, &b).add(&commutator(&b, &a)).is_zero());
        let j = commutator(&a, &commutator(&b, &c))
            .add(&commutator(&b, &commutator(&c, &a)))
            .add(&commutator(&c, &commutator(&a, &b)));
        prop_assert!(j.is_zero_field());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    /// Pure Killing fields (μ = 0, f = 0): the momentum is conserved exactly
    /// when the field verifies.
    #[test]
    fn killing_momenta(c in prop::array::uniform3(-2i64..=2), d in prop::array::uniform3(-1i64..=1)) {
        let spec = case_ii_spec();
        let p = |s: &str| -> Poly { poly(s).unwrap() };
        let fields = [p("1"), p("z"), p("x")];
        let mut coeffs: [Poly; 5] = Default::default();
        for (k, coord) in [Coord::X, Coord::Y, Coord::Z].into_iter().enumerate() {
            coeffs[coord.index()] = fields[k].scale(&Rational::from_int(c[k]));
        }
        coeffs[Coord::T.index()] = Poly::int(d[0]) + Poly::atom(Atom::X).scale(&Rational::from_int(d[1] * d[2]));
        let g = VectorField5 { coeffs, gauge: Poly::zero() };
        let verified = verify_under(&g, &spec).unwrap().verified();
        let i = integral_expression(&g, &spec).unwrap();
        prop_assert_eq!(on_shell_remainder(&i, &spec).unwrap().is_zero(), verified);
    }
}
