//! One test per acceptance criterion. Each prints a single PASS/FAIL line.
//!
//! A criterion that cannot hold because the catalogued claim is false is
//! reported as FAIL, and the test then pins the exact recomputed refutation
//! so that any other deviation still breaks the build.

use std::time::{Duration, Instant};

use bianchi_noether::conslaw::{first_integral, integral_values, numeric_drift, on_shell_check, OnShellStatus};
use bianchi_noether::geometry::{
    accelerations_agree, generic_lagrangian, integrate_geodesic, lagrangian, steps_for, verify_inverse, GeodesicState, MetricSpec,
    NumericMetric,
};
use bianchi_noether::liealg::{commutator, structure_constants, LeviVerdict, SubspaceQ, VectorField5};
use bianchi_noether::noether::{
    audit_case, basis_from_solution, case_catalog, derive_determining_system, find_case, proportional, residual_paths_agree,
    residual_template, translation_claims, verify_generator, Generator,
};
use bianchi_noether::report::{algebra_report, levi_candidate};
use bianchi_noether::symbolic::{poly, Atom, Coord, Monomial};
use bianchi_noether::{Poly, Rational, Scalar};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: u32, pass: bool, detail: &str) {
    println!("criterion {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
}

fn p(s: &str) -> Poly {
    poly(s).unwrap()
}

fn within(start: Instant, limit: Duration) -> bool {
    start.elapsed() < limit
}

/// Reference determining system, written out by hand independently of the
/// engine.
const REFERENCE_SYSTEM: [&str; 19] = [
    "mu_t",
    "A^2*mu_x",
    "B^2*mu_y",
    "(C^2 + B^2*x^2)*mu_z",
    "mu_s - 2*tau_t",
    "2*A*A'*tau + 2*A^2*xi_x - A^2*mu_s",
    "2*B*B'*tau + 2*B^2*eta_y - B^2*mu_s - 2*B^2*x*phi_y",
    "2*B^2*x*xi + 2*B*B'*x^2*tau + 2*C*C'*tau - 2*B^2*x*eta_z - C^2*mu_s - B^2*x^2*mu_s + 2*C^2*phi_z + 2*B^2*x^2*phi_z",
    "A^2*xi_t - tau_x",
    "B^2*eta_t - tau_y - B^2*x*phi_t",
    "-B^2*x*eta_t - tau_z + C^2*phi_t + B^2*x^2*phi_t",
    "B^2*eta_x + A^2*xi_y - B^2*x*phi_x",
    "-B^2*x*eta_x + A^2*xi_z + C^2*phi_x + B^2*x^2*phi_x",
    "-B^2*xi - 2*B*B'*x*tau - B^2*x*eta_y + B^2*eta_z + B^2*x*mu_s + C^2*phi_y + B^2*x^2*phi_y - B^2*x*phi_z",
    "f_t + 2*tau_s",
    "-f_x + 2*A^2*xi_s",
    "-f_y + 2*B^2*eta_s - 2*B^2*x*phi_s",
    "-f_z - 2*B^2*x*eta_s + 2*C^2*phi_s + 2*B^2*x^2*phi_s",
    "f_s",
];

fn criterion_1_determining_system() {
    let start = Instant::now();
    let sys = derive_determining_system(&MetricSpec::generic()).unwrap();
    let computed: Vec<&Poly> = sys.nontrivial().map(|e| &e.normalized).collect();
    let reference: Vec<Poly> = REFERENCE_SYSTEM.iter().map(|s| p(s)).collect();
    let mut used = vec![false; computed.len()];
    let mut unmatched = Vec::new();
    for (k, r) in reference.iter().enumerate() {
        match (0..computed.len()).find(|&i| !used[i] && proportional(computed[i], r)) {
            Some(i) => used[i] = true,
            None => unmatched.push(k + 8),
        }
    }
    let bijective = computed.len() == 19 && unmatched.is_empty() && used.iter().all(|u| *u);
    let fast = within(start, Duration::from_secs(5));
    report(
        1,
        bijective && fast,
        &format!("{} nontrivial equations, unmatched reference equations {unmatched:?}, {:?}", computed.len(), start.elapsed()),
    );
    assert!(bijective && fast);
}

fn criterion_2_case_ii() {
    let start = Instant::now();
    let case = find_case("II").unwrap();
    let refuted: Vec<(String, Poly)> = case
        .claimed_generators
        .iter()
        .filter_map(|(n, g)| {
            let v = verify_generator(g, &case).unwrap();
            (!v.verified()).then(|| (n.clone(), v.residual))
        })
        .collect();
    let audit = audit_case(&case).unwrap();
    let brackets_ok = audit.brackets.iter().all(|b| b.matches)
        && audit.brackets.iter().filter(|b| b.listed).count() == 4
        && audit.summary.implicit_zero_total == 17;
    let alg = structure_constants(&case.claimed_generators.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>()).unwrap();
    let series: Vec<usize> = alg.derived_series().iter().map(SubspaceQ::dim).collect();
    let fast = within(start, Duration::from_secs(5));
    let pass = refuted.is_empty() && brackets_ok && series == [7, 4, 1, 0] && fast;
    let detail = format!(
        "{}/7 generators verify, refuted {:?}; brackets match {brackets_ok}; derived series {series:?}; {:?}",
        7 - refuted.len(),
        refuted.iter().map(|(n, r)| format!("{n}: residual {r}")).collect::<Vec<_>>(),
        start.elapsed()
    );
    report(2, pass, &detail);
    // The rotation X3 preserves the Lagrangian only when A = C.
    assert!(brackets_ok && series == [7, 4, 1, 0] && fast);
    assert_eq!(refuted.len(), 1);
    assert_eq!(refuted[0].0, "X3");
    assert_eq!(refuted[0].1, p("2*xd*zd*A^2 - 2*xd*zd*C^2"));
}

fn criterion_3_cases_vii_to_ix() {
    let mut refuted = Vec::new();
    for label in ["VII", "VIII", "IX"] {
        let case = find_case(label).unwrap();
        for (n, g) in &case.claimed_generators {
            let v = verify_generator(g, &case).unwrap();
            if !v.verified() {
                refuted.push((format!("{label} {n}"), v.residual));
            }
        }
    }
    let vii = find_case("VII").unwrap();
    let vii_list: Vec<Generator<Rational>> = vii.claimed_generators.iter().map(|(_, g)| g.clone()).collect();
    let b24 = commutator(&vii_list[1], &vii_list[3]);
    let vii_bracket = b24.sub(&vii_list[2]).is_zero_field();
    let vii_others_zero = (0..4)
        .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
        .filter(|&(i, j)| (i, j) != (1, 3))
        .all(|(i, j)| commutator(&vii_list[i], &vii_list[j]).is_zero_field());
    let abelian = ["VIII", "IX"].iter().all(|l| {
        let c = find_case(l).unwrap();
        let list: Vec<Generator<Rational>> = c.claimed_generators.iter().map(|(_, g)| g.clone()).collect();
        structure_constants(&list).unwrap().is_abelian()
    });
    let pass = refuted.is_empty() && vii_bracket && vii_others_zero && abelian;
    report(
        3,
        pass,
        &format!(
            "refuted {:?}; [X2, X4] = X3 in VII {vii_bracket}, other VII brackets vanish {vii_others_zero}; VIII and IX abelian {abelian}",
            refuted.iter().map(|(n, r)| format!("{n}: residual {r}")).collect::<Vec<_>>()
        ),
    );
    // ∂t in Case VIII needs A' = 0, which contradicts A'' ≠ 0.
    assert!(vii_bracket && vii_others_zero && abelian);
    assert_eq!(refuted.len(), 1);
    assert_eq!(refuted[0].0, "VIII X2");
    assert_eq!(refuted[0].1, p("2*xd^2*A*A' + 2*zd^2*C*C'"));
}

fn criterion_4_case_i_structure() {
    let case = find_case("I").unwrap();
    let extracted = basis_from_solution(&case).unwrap();
    let ds = extracted.iter().find(|(k, _)| *k == 3).map(|(_, g)| g.clone()).unwrap();
    assert_eq!(ds, Generator::basis_direction(Coord::S, Rational::from_int(1)));
    let mut basis: Vec<Generator<Rational>> = case.claimed_generators.iter().map(|(_, g)| g.clone()).collect();
    basis[3] = ds;
    let alg = structure_constants(&basis);
    let closes = alg.is_ok();
    let alg = alg.unwrap();
    let rad = alg.solvable_radical().unwrap();
    let n = alg.dim();
    let unit = |i: usize| bianchi_noether::liealg::linear::unit::<Rational>(n, i);
    let sl2 = SubspaceQ::span(n, [unit(0), unit(1), unit(3)]);
    let levi = matches!(alg.levi_check(&sl2).unwrap(), LeviVerdict::Sl2(ref t) if alg.is_standard_triple(t));
    let kappa = alg.killing_form();
    let killing = !kappa[0][3].is_zero() && !kappa[1][1].is_zero();

    // Independent recomputation of every listed bracket on the corrected basis.
    let audit = audit_case(&case).unwrap();
    let mut missing_findings = Vec::new();
    for claim in &case.claimed_brackets {
        let mut rhs = Generator::default();
        for (k, c) in &claim.rhs {
            rhs = rhs.add(&basis[k - 1].scale(c));
        }
        let holds = commutator(&basis[claim.i - 1], &basis[claim.j - 1]).sub(&rhs).is_zero_field();
        let prefix = format!("[X{}, X{}] is listed", claim.i, claim.j);
        if !holds && !audit.findings.iter().any(|f| f.starts_with(&prefix)) {
            missing_findings.push(prefix);
        }
    }
    let mismatches = audit.brackets.iter().filter(|b| b.listed && !b.matches).count();
    let typo = audit.findings.iter().any(|f| f.starts_with("probable typo: X4"));
    let via_report = algebra_report(&case).unwrap().1;
    let report_agrees = via_report.radical_dim == 5
        && via_report.levi.as_ref().is_some_and(|l| l.status == "sl2")
        && levi_candidate(&alg, &rad).dim() == 3;
    let pass = closes && rad.dim() == 5 && levi && killing && missing_findings.is_empty() && typo && report_agrees;
    report(
        4,
        pass,
        &format!(
            "closes {closes}, radical dim {}, sl(2) on <X1, X2, ds> {levi}, κ(X1,X4) = {}, κ(X2,X2) = {}, {mismatches} bracket mismatch findings, typo finding {typo}",
            rad.dim(),
            kappa[0][3],
            kappa[1][1]
        ),
    );
    assert!(pass, "missing findings {missing_findings:?}");
}

fn random_generator(rng: &mut ChaCha8Rng) -> Generator<Rational> {
    let atoms = [Atom::S, Atom::T, Atom::X, Atom::Y, Atom::Z];
    let rand_poly = |rng: &mut ChaCha8Rng| {
        let terms = rng.gen_range(0..=3);
        Poly::from_terms((0..terms).map(|_| {
            let factors: Vec<(Atom, i32)> =
                (0..rng.gen_range(0..=2)).map(|_| (atoms[rng.gen_range(0..5)], rng.gen_range(1..=2))).collect();
            (Monomial::from_factors(factors), Rational::from_ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
        }))
    };
    let coeffs = [rand_poly(rng), rand_poly(rng), rand_poly(rng), rand_poly(rng), rand_poly(rng)];
    VectorField5 { coeffs, gauge: rand_poly(rng) }
}

fn criterion_5_dual_path_residuals() {
    let start = Instant::now();
    let template = residual_template::<Rational>().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let specs: Vec<MetricSpec<Rational>> =
        std::iter::once(MetricSpec::generic()).chain(case_catalog().iter().map(|c| c.spec())).collect();
    let mut disagreements = 0;
    for k in 0..50 {
        let g = random_generator(&mut rng);
        let rules = specs[k % specs.len()].rules().unwrap();
        if !residual_paths_agree(&template, &g, &rules).unwrap() {
            disagreements += 1;
        }
    }
    let fast = within(start, Duration::from_secs(30));
    report(5, disagreements == 0 && fast, &format!("50 random generators, {disagreements} disagreements, {:?}", start.elapsed()));
    assert!(disagreements == 0 && fast);
}

fn criterion_6_symbolic_conservation() {
    let mut failures = Vec::new();
    let mut proved = 0;
    for label in ["II", "VII", "VIII", "IX"] {
        let case = find_case(label).unwrap();
        let spec = case.spec();
        for (n, g) in &case.claimed_generators {
            if !verify_generator(g, &case).unwrap().verified() {
                continue;
            }
            let i = first_integral(n, g, &spec).unwrap();
            match on_shell_check(&i, &spec).unwrap() {
                OnShellStatus::Proved => proved += 1,
                OnShellStatus::Failed => failures.push(format!("{label} {n}")),
            }
        }
    }
    let ds = Generator::basis_direction(Coord::S, Rational::from_int(1));
    let mut not_minus_l = Vec::new();
    for case in case_catalog() {
        let spec = case.spec();
        let i = first_integral("ds", &ds, &spec).unwrap();
        let minus_l = -lagrangian(&spec).unwrap();
        if !spec.rules().unwrap().is_zero(&(&i.expression - &minus_l)).unwrap() {
            not_minus_l.push(case.label);
        }
    }
    assert_eq!(-generic_lagrangian::<Rational>(), first_integral("ds", &ds, &MetricSpec::generic()).unwrap().expression);
    let pass = failures.is_empty() && not_minus_l.is_empty();
    report(6, pass, &format!("{proved} integrals proved on shell, failures {failures:?}, ∂s integral differs from -L in {not_minus_l:?}"));
    assert!(pass);
}

fn criterion_7_numeric_conservation() {
    let start = Instant::now();
    let case = find_case("II").unwrap();
    let metric = NumericMetric::unit();
    let spec = MetricSpec::Numeric(metric.clone());
    let vel = [1.0, 0.3, 0.2, 0.1];
    let h = 1e-3;
    let traj = integrate_geodesic(&metric, GeodesicState::new(0.0, [0.0; 4], vel), h, steps_for(1.0, h)).unwrap();
    let integrals: Vec<_> = case
        .claimed_generators
        .iter()
        .map(|(n, g)| {
            let mut i = first_integral(n, g, &spec).unwrap();
            i.on_shell = Some(on_shell_check(&i, &spec).unwrap());
            i
        })
        .collect();
    let drifts: Vec<f64> = integrals.iter().map(|i| numeric_drift(i, &traj).unwrap().max_rel_drift).collect();
    let all_proved = integrals.iter().all(|i| i.on_shell == Some(OnShellStatus::Proved));
    let small = drifts.iter().all(|d| *d < 1e-7);

    // In f64 every drift sits at round-off, so the order check runs the same
    // integrator in 113-bit arithmetic.
    type Q = f128::f128;
    let q = |x: f64| Q::from(x);
    let qics = GeodesicState::new(q(0.0), [q(0.0); 4], vel.map(q));
    let drift_at = |h: f64| -> Vec<f64> {
        let t = integrate_geodesic(&metric, qics, q(h), steps_for(1.0, h)).unwrap();
        integrals
            .iter()
            .map(|i| {
                let v = integral_values(&i.expression, &t).unwrap();
                v.iter().map(|x| (*x - v[0]).to_f64().unwrap_or(f64::NAN).abs()).fold(0.0, f64::max)
            })
            .collect()
    };
    let coarse = drift_at(h);
    let fine = drift_at(h / 2.0);
    let ratios: Vec<String> = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| if *c == 0.0 && *f == 0.0 { "exact".to_string() } else { format!("{:.1}", c / f) })
        .collect();
    let fourth_order = coarse.iter().zip(&fine).all(|(c, f)| f * 12.0 <= *c);
    let fast = within(start, Duration::from_secs(5));
    let pass = all_proved && small && fourth_order && fast;
    report(
        7,
        pass,
        &format!(
            "max relative drift {:.2e}, halving ratios {ratios:?}, {:?}",
            drifts.iter().cloned().fold(0.0, f64::max),
            start.elapsed()
        ),
    );
    assert!(pass);
}

fn criterion_8_self_checks() {
    let specs: Vec<(String, MetricSpec<Rational>)> = std::iter::once(("generic".to_string(), MetricSpec::generic()))
        .chain(case_catalog().iter().map(|c| (c.label.to_string(), c.spec())))
        .chain(std::iter::once(("numeric".to_string(), MetricSpec::Numeric(NumericMetric::parse("A = t^2, B = t, C = 3").unwrap()))))
        .collect();
    let mut bad = Vec::new();
    for (name, spec) in &specs {
        if !verify_inverse(spec).unwrap() {
            bad.push(format!("{name}: g·g⁻¹ ≠ 1"));
        }
        if !accelerations_agree(spec).unwrap() {
            bad.push(format!("{name}: Christoffel and Euler-Lagrange accelerations differ"));
        }
    }
    let mut algebras = 0;
    for case in case_catalog() {
        let lists = [
            case.claimed_generators.iter().map(|(_, g)| g.clone()).collect::<Vec<_>>(),
            bianchi_noether::noether::effective_generators(&case).unwrap().0,
        ];
        for list in lists {
            let alg = structure_constants(&list).unwrap();
            algebras += 1;
            if !alg.jacobi_violations().is_empty() {
                bad.push(format!("{}: Jacobi identity fails", case.label));
            }
            if !alg.killing_ad_invariant() {
                bad.push(format!("{}: Killing form not ad-invariant", case.label));
            }
        }
    }
    report(8, bad.is_empty(), &format!("{} metric specs, {algebras} algebras, problems {bad:?}", specs.len()));
    assert!(bad.is_empty());
}

fn criterion_9_translation_claims() {
    let claims = translation_claims().unwrap();
    let mut unbacked = Vec::new();
    for c in &claims {
        let case = find_case(&c.case).unwrap();
        let coord = match c.quantity.as_str() {
            "energy" => Coord::T,
            "momentum-y" => Coord::Y,
            _ => Coord::Z,
        };
        let g = Generator::basis_direction(coord, Rational::from_int(1));
        if verify_generator(&g, &case).unwrap().verified() != c.verified || c.agrees != (c.claimed == c.verified) {
            unbacked.push(format!("{} {}", c.case, c.quantity));
        }
    }
    let disagreements: Vec<String> =
        claims.iter().filter(|c| !c.agrees).map(|c| format!("{} {}", c.case, c.quantity)).collect();
    let pass = claims.len() == 27 && unbacked.is_empty();
    report(9, pass, &format!("{} lines, disagreements with the summary {disagreements:?}", claims.len()));
    assert!(pass, "unbacked lines {unbacked:?}");
    assert!(!disagreements.is_empty());
}

fn main() {
    let criteria: [(&str, fn()); 9] = [
        ("determining system", criterion_1_determining_system),
        ("case II", criterion_2_case_ii),
        ("cases VII to IX", criterion_3_cases_vii_to_ix),
        ("case I structure", criterion_4_case_i_structure),
        ("dual-path residuals", criterion_5_dual_path_residuals),
        ("symbolic conservation", criterion_6_symbolic_conservation),
        ("numeric conservation", criterion_7_numeric_conservation),
        ("self-checks", criterion_8_self_checks),
        ("translation claims", criterion_9_translation_claims),
    ];
    let broken: Vec<&str> =
        criteria.iter().filter(|(_, f)| std::panic::catch_unwind(f).is_err()).map(|(name, _)| *name).collect();
    if !broken.is_empty() {
        eprintln!("acceptance checks broke unexpectedly: {broken:?}");
        std::process::exit(1);
    }
}
