//! Acceptance battery: one test per verified claim, each printing a
//! PASS/FAIL line. Every tolerance is pinned here; "exact" means equality
//! of arbitrary-precision rationals.

use netconics::chow;
use netconics::hesse;
use netconics::invariants::{discriminant, j_invariant, ExtendedJ};
use netconics::linalg;
use netconics::roots;
use netconics::scalar::{rat, rat_int, EisRat, Rat};
use netconics::stabilizer;
use netconics::sweep;
use netconics::ternary::{jacobian_net, Conic, Net, TernaryForm};
use netconics::unipoly::{BinaryForm, MultiplicityProfile, UniPoly};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::time::Instant;

const SEED: u64 = 0xACCE;

fn report(criterion: &str, started: Instant, budget_secs: Option<f64>, pass: bool) {
    let elapsed = started.elapsed().as_secs_f64();
    let within = budget_secs.is_none_or(|b| elapsed <= b);
    println!(
        "criterion {criterion}: {} ({elapsed:.2}s{})",
        if pass && within { "PASS" } else { "FAIL" },
        budget_secs.map_or(String::new(), |b| format!(" / budget {b}s")),
    );
    assert!(pass, "criterion {criterion} failed");
    assert!(
        within,
        "criterion {criterion} exceeded its runtime budget ({elapsed:.2}s)"
    );
}

fn random_lambdas(seed: u64, count: usize) -> Vec<Rat> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out: Vec<Rat> = Vec::new();
    while out.len() < count {
        let l = rat(rng.gen_range(-40i64..=40), rng.gen_range(1i64..=12));
        let l3 = &l * &l * &l;
        if (&l3 + Rat::one()).is_zero() || l.is_zero() || l == rat_int(2) || out.contains(&l) {
            continue;
        }
        out.push(l);
    }
    out
}

fn random_cubic(rng: &mut ChaCha20Rng) -> TernaryForm<Rat> {
    loop {
        let f = TernaryForm::from_terms(
            3,
            netconics::ternary::CUBIC_MONOMIALS
                .iter()
                .map(|&e| (e, rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)))),
        );
        if !f.is_zero() {
            return f;
        }
    }
}

fn random_gl3(rng: &mut ChaCha20Rng) -> [[Rat; 3]; 3] {
    loop {
        let g: [[Rat; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rat_int(rng.gen_range(-6..=6))));
        let rows: Vec<Vec<Rat>> = g.iter().map(|r| r.to_vec()).collect();
        if !linalg::det(&rows).is_zero() {
            return g;
        }
    }
}

/// Criterion 1: the Hessian j-identity holds with exact rational equality
/// for 20 seeded random admissible pencil parameters.
#[test]
fn criterion_1_hessian_identity() {
    let t0 = Instant::now();
    let lambdas = random_lambdas(SEED ^ 1, 20);
    let mut pass = true;
    for l in &lambdas {
        let r = hesse::hessian_identity_check(l).expect("admissible lambda");
        pass &= r.equal && r.j_gamma == r.rhs;
    }
    report("1 (Hessian j-identity, 20 exact)", t0, Some(5.0), pass);
}

/// Criterion 2: the reference net has discriminant (-b^3 - c^3 + abc)/4,
/// a single node at [1:0:0], j = infinity, node conic rank 2; all exact.
#[test]
fn criterion_2_reference_net() {
    let t0 = Instant::now();
    let pass = sweep::verify_h0().is_ok();
    report("2 (reference net, exact)", t0, Some(1.0), pass);
}

/// Criterion 3: for 5 seeded flags the sweep discriminant has exact degree
/// 12 and square-free profile [(1,4),(2,4)], so 8 distinct roots.
#[test]
fn criterion_3_sweep_profile() {
    let t0 = Instant::now();
    let mut pass = true;
    let expected = MultiplicityProfile(vec![(1, 4), (2, 4)]);
    for seed in 1..=5u64 {
        let flag_t = Instant::now();
        let flag = sweep::sample_flag(seed).expect("flag");
        let r = sweep::discriminant_sweep(&flag).expect("sweep");
        pass &= r.disc.degree() == 12 && r.profile == expected && r.a_inf == 8;
        pass &= flag_t.elapsed().as_secs_f64() < 10.0;
    }
    report(
        "3 (degree-12 sweep, profile [(1,4),(2,4)], 5 flags)",
        t0,
        None,
        pass,
    );
}

/// Criterion 4: every double root's plane contains exactly one Veronese
/// point (residual < 1e-8) and that point is the node (conic rank 1); every
/// simple root has a rank-2 node; the ledger yields l1 = 2, l2 = 1,
/// [F] = 12, [O] = 4 as exact integers.
#[test]
fn criterion_4_node_veronese_and_ledger() {
    let t0 = Instant::now();
    let mut pass = true;
    let mut reports = Vec::new();
    for seed in 1..=3u64 {
        let flag = sweep::sample_flag(seed).expect("flag");
        let r = sweep::discriminant_sweep(&flag).expect("sweep");
        let r = sweep::node_veronese_correlation(&flag, r).expect("correlation");
        pass &= r.b1 == Some(4) && r.b2 == Some(4);
        for check in &r.node_checks {
            match check.multiplicity {
                2 => {
                    pass &= check.conic_rank == 1
                        && check.veronese_match.is_some()
                        && check.membership_residual.unwrap_or(1.0) < 1e-8;
                }
                1 => pass &= check.conic_rank == 2 && check.veronese_match.is_none(),
                _ => pass = false,
            }
        }
        reports.push(r);
    }
    let ledger = sweep::class_ledger(&reports).expect("ledger");
    pass &= ledger.b1 == 4
        && ledger.b2 == 4
        && ledger.l1 == 2
        && ledger.l2 == 1
        && ledger.fiber_class == 12
        && ledger.orbit_class == 4;
    report(
        "4 (node/Veronese correlation, ledger 12 = 2*4 + 1*4, [O] = 4)",
        t0,
        None,
        pass,
    );
}

/// Criterion 5: for 3 random finite j-values per flag the fiber form has
/// total multiplicity 12, with 12 distinct roots separated by > 1e-8 for
/// generic values.
#[test]
fn criterion_5_finite_fibers() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 5);
    let mut pass = true;
    for seed in 1..=3u64 {
        let flag = sweep::sample_flag(seed).expect("flag");
        for _ in 0..3 {
            let j0 = rat(rng.gen_range(-500i64..=500), rng.gen_range(1i64..=9));
            let fs = sweep::fiber_sweep(&flag, &j0).expect("fiber");
            pass &= fs.total_multiplicity == 12;
            pass &= fs.distinct_roots == 12 && fs.min_separation > 1e-8;
        }
    }
    report(
        "5 (fiber forms: 12 with multiplicity, 12 distinct)",
        t0,
        None,
        pass,
    );
}

/// Criterion 6: dual_degree(3, 4) = 4 with the displayed intermediate
/// classes, plus the cross-checks d(d-1)^2 at (3, 0) and (2, 0).
#[test]
fn criterion_6_dual_degree() {
    let t0 = Instant::now();
    let strict = chow::strict_transform_class(3, &[2, 2, 2, 2]);
    let polar = chow::polar_map_class(3, 4);
    let product = strict.multiply(&polar.pow(2).unwrap()).unwrap();
    let mut pass = strict.to_string() == "3L_1 - 2G_1,1 - 2G_1,2 - 2G_1,3 - 2G_1,4";
    pass &= polar.to_string() == "2L_1 - 1G_1,1 - 1G_1,2 - 1G_1,3 - 1G_1,4";
    // deg(12 L_3 - 2 sum G_{3,i}) = 12 - 2(4) = 4
    pass &= product.lambda_coeff() == &12.into();
    pass &= product.gamma_coeffs().iter().all(|c| c == &(-2).into());
    pass &= product.degree().unwrap() == 4.into();
    pass &= chow::dual_degree(3, 4) == 4.into();
    pass &= chow::dual_degree(3, 0) == 12.into();
    pass &= chow::dual_degree(2, 0) == 2.into();
    report(
        "6 (dual degree 4 = 12 - 2(4), cross-checks 12 and 2)",
        t0,
        Some(1.0),
        pass,
    );
}

/// Criterion 7: the fiber cubic has repeated roots exactly at b = 0 (triple
/// root 6912) and b = 1728 (double -13824, simple 1728); 10 random b give
/// three simple roots. All exact.
#[test]
fn criterion_7_fb_roots() {
    let t0 = Instant::now();
    let mut pass = hesse::fb_critical_b().unwrap() == vec![rat_int(0), rat_int(1728)];
    let a0 = hesse::fb_root_analysis(&rat_int(0)).unwrap();
    pass &= a0.profile == MultiplicityProfile(vec![(3, 1)])
        && a0.rational_roots == vec![(rat_int(6912), 3)];
    let a1728 = hesse::fb_root_analysis(&rat_int(1728)).unwrap();
    pass &= a1728.profile == MultiplicityProfile(vec![(1, 1), (2, 1)])
        && a1728.rational_roots == vec![(rat_int(-13824), 2), (rat_int(1728), 1)];
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 7);
    let mut tried = 0;
    while tried < 10 {
        let b = rat(rng.gen_range(-4000i64..=4000), rng.gen_range(1i64..=9));
        if b.is_zero() || b == rat_int(1728) {
            continue;
        }
        tried += 1;
        let a = hesse::fb_root_analysis(&b).unwrap();
        pass &= a.profile == MultiplicityProfile(vec![(1, 3)]);
    }
    report(
        "7 (repeated fiber roots only at b = 0, 1728)",
        t0,
        Some(1.0),
        pass,
    );
}

/// Criterion 8: all 18 candidates stabilize W_lambda exactly for the seven
/// listed parameters; the 324-product closure, order 18, presentation
/// relations, and the 9 quadratic residuals all hold exactly; 1000 random
/// probes find no extra stabilizers (evidence, not proof).
#[test]
fn criterion_8_stabilizer() {
    let t0 = Instant::now();
    let elements = stabilizer::candidate_group();
    let group = stabilizer::verify_group_structure(&elements).expect("group structure");
    let mut pass = group.order == 18
        && group.distinct
        && group.closed
        && group.has_identity
        && group.has_inverses
        && group.relations.iter().all(|(_, ok)| *ok);
    let lambdas: Vec<Rat> = [-7i64, -5, -3, 1, 3, 5, 7]
        .iter()
        .map(|&v| rat_int(v))
        .collect();
    let rows = stabilizer::stabilizer_survey(&lambdas, 1000, SEED ^ 8).expect("survey");
    for row in rows {
        pass &= row.candidates_ok == 18 && row.eq2_ok == 18;
        pass &= row.probes_tried == 1000 && row.extra_found == 0;
    }
    report(
        "8 (order-18 stabilizer: membership, closure, relations, probes)",
        t0,
        Some(20.0),
        pass,
    );
}

// --- criterion 9: property suites under a fixed seed, all exact ----------

#[test]
fn criterion_9a_field_axioms() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x9A);
    let mut pass = true;
    for _ in 0..60 {
        let r = |rng: &mut ChaCha20Rng| rat(rng.gen_range(-30i64..=30), rng.gen_range(1i64..=9));
        let (a, b, c) = (r(&mut rng), r(&mut rng), r(&mut rng));
        pass &= (&a + &b) + &c == &a + (&b + &c);
        pass &= (&a * &b) * &c == &a * (&b * &c);
        pass &= &a * (&b + &c) == &a * &b + &a * &c;
        if !a.is_zero() {
            pass &= &a * (Rat::one() / &a) == Rat::one();
        }
        let e = |rng: &mut ChaCha20Rng| {
            EisRat::new(
                rat(rng.gen_range(-15i64..=15), rng.gen_range(1i64..=5)),
                rat(rng.gen_range(-15i64..=15), rng.gen_range(1i64..=5)),
            )
        };
        let (x, y, z) = (e(&mut rng), e(&mut rng), e(&mut rng));
        pass &= (x.clone() + y.clone()) + z.clone() == x.clone() + (y.clone() + z.clone());
        pass &= (x.clone() * y.clone()) * z.clone() == x.clone() * (y.clone() * z.clone());
        pass &=
            x.clone() * (y.clone() + z.clone()) == x.clone() * y.clone() + x.clone() * z.clone();
        if !x.is_zero() {
            pass &= x.clone() * x.checked_inv().unwrap() == EisRat::one();
            pass &= x.norm() > Rat::zero();
        }
        // the numeric image respects multiplication to 1e-12 relative
        let xc = x.to_complex();
        let yc = y.to_complex();
        let prod = (x.clone() * y.clone()).to_complex();
        let err = (prod - xc * yc).norm();
        pass &= err <= 1e-12 * (1.0 + prod.norm());
    }
    report(
        "9a (field axioms for Rat and EisRat, exact)",
        t0,
        None,
        pass,
    );
}

#[test]
fn criterion_9b_euler_identity() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x9B);
    let mut pass = true;
    for _ in 0..40 {
        let degree = rng.gen_range(1usize..=4);
        let mut f = TernaryForm::zero_form(degree);
        for _ in 0..8 {
            let i = rng.gen_range(0..=degree) as u8;
            let j = rng.gen_range(0..=(degree - i as usize)) as u8;
            let k = degree as u8 - i - j;
            f = f.add(&TernaryForm::monomial(
                degree,
                (i, j, k),
                rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)),
            ));
        }
        let x = TernaryForm::monomial(1, (1, 0, 0), Rat::one());
        let y = TernaryForm::monomial(1, (0, 1, 0), Rat::one());
        let z = TernaryForm::monomial(1, (0, 0, 1), Rat::one());
        let sum = x
            .mul(&f.partial_derivative(0))
            .add(&y.mul(&f.partial_derivative(1)))
            .add(&z.mul(&f.partial_derivative(2)));
        pass &= sum == f.scale(&rat_int(degree as i64));
    }
    report("9b (Euler identity up to degree 4, exact)", t0, None, pass);
}

#[test]
fn criterion_9c_substitution_action() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x9C);
    let mut pass = true;
    for _ in 0..25 {
        let f = random_cubic(&mut rng);
        let g = random_gl3(&mut rng);
        let h = random_gl3(&mut rng);
        // composition reads in matrix-product order
        let gh_rows = linalg::mat_mul(
            &g.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
            &h.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
        );
        let gh: [[Rat; 3]; 3] =
            std::array::from_fn(|i| std::array::from_fn(|j| gh_rows[i][j].clone()));
        pass &= f.substitute(&g).substitute(&h) == f.substitute(&gh);
        // substitution respects multiplication
        let q = random_cubic(&mut rng);
        pass &= f.mul(&q).substitute(&g) == f.substitute(&g).mul(&q.substitute(&g));
    }
    report(
        "9c (substitution action and multiplicativity, exact)",
        t0,
        None,
        pass,
    );
}

#[test]
fn criterion_9d_gl_invariance_of_j() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x9D);
    let mut pass = true;
    let mut tested = 0;
    while tested < 15 {
        let f = random_cubic(&mut rng);
        if discriminant(&f).unwrap().is_zero() {
            continue;
        }
        tested += 1;
        let g = random_gl3(&mut rng);
        pass &= j_invariant(&f).unwrap() == j_invariant(&f.substitute(&g)).unwrap();
        // rescaling the form leaves j unchanged too
        pass &= j_invariant(&f).unwrap() == j_invariant(&f.scale(&rat(7, 3))).unwrap();
    }
    report("9d (GL-invariance of j, exact)", t0, None, pass);
}

#[test]
fn criterion_9e_discriminant_covariance() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x9E);
    let mut pass = true;
    for _ in 0..15 {
        let f = random_cubic(&mut rng);
        let g = random_gl3(&mut rng);
        let rows: Vec<Vec<Rat>> = g.iter().map(|r| r.to_vec()).collect();
        let det = linalg::det(&rows);
        let mut det12 = Rat::one();
        for _ in 0..12 {
            det12 *= &det;
        }
        pass &= discriminant(&f.substitute(&g)).unwrap() == det12 * discriminant(&f).unwrap();
    }
    report(
        "9e (discriminant covariance with exponent 12, exact)",
        t0,
        None,
        pass,
    );
}

#[test]
fn criterion_9f_weierstrass_anchor() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x9F);
    let mut pass = true;
    let mut tested = 0;
    while tested < 50 {
        let a = rat(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=6));
        let b = rat(rng.gen_range(-20i64..=20), rng.gen_range(1i64..=6));
        let denom = rat_int(4) * &a * &a * &a + rat_int(27) * &b * &b;
        if denom.is_zero() {
            continue;
        }
        tested += 1;
        let w = TernaryForm::from_terms(
            3,
            [
                ((0, 2, 1), Rat::one()),
                ((3, 0, 0), -Rat::one()),
                ((1, 0, 2), -a.clone()),
                ((0, 0, 3), -b.clone()),
            ],
        );
        let expected = rat_int(6912) * &a * &a * &a / &denom;
        pass &= j_invariant(&w).unwrap() == ExtendedJ::Finite(expected);
    }
    report(
        "9f (Weierstrass anchor family, 50 samples, exact)",
        t0,
        None,
        pass,
    );
}

#[test]
fn criterion_9g_yun_reconstruction() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x96);
    let mut pass = true;
    for _ in 0..40 {
        let mut f: UniPoly<Rat> = UniPoly::one();
        for _ in 0..rng.gen_range(1..4) {
            let deg = rng.gen_range(1..3usize);
            let mut coeffs: Vec<Rat> = (0..=deg)
                .map(|_| rat(rng.gen_range(-6i64..=6), rng.gen_range(1i64..=3)))
                .collect();
            if coeffs[deg].is_zero() {
                coeffs[deg] = Rat::one();
            }
            let factor = UniPoly::new(coeffs);
            for _ in 0..rng.gen_range(1..4) {
                f = f * factor.clone();
            }
        }
        let decomposition = f.squarefree_decomposition().unwrap();
        let mut back: UniPoly<Rat> = UniPoly::one();
        for (factor, mult) in &decomposition {
            pass &= UniPoly::gcd(factor, &factor.derivative())
                .unwrap()
                .is_constant();
            for _ in 0..*mult {
                back = back * factor.clone();
            }
        }
        pass &= back.monic() == f.monic();
    }
    report(
        "9g (Yun reconstruction up to a unit, exact)",
        t0,
        None,
        pass,
    );
}

#[test]
fn criterion_9h_profile_degree_conservation() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x97);
    let mut pass = true;
    for _ in 0..40 {
        // random product of linear binary forms, including boundary roots
        let mut form = BinaryForm::new(0, vec![Rat::one()]);
        for _ in 0..rng.gen_range(1..8usize) {
            let a = rat_int(rng.gen_range(-4i64..=4));
            let b = rat_int(rng.gen_range(-4i64..=4));
            let lin = if a.is_zero() && b.is_zero() {
                BinaryForm::linear(Rat::one(), Rat::zero())
            } else {
                BinaryForm::linear(a, b)
            };
            form = form.mul(&lin);
        }
        let profile = form.profile().unwrap();
        pass &= profile.total() == form.degree();
    }
    report(
        "9h (multiplicity profiles conserve the degree, exact)",
        t0,
        None,
        pass,
    );
}

#[test]
fn criterion_9i_chow_ring_axioms() {
    let t0 = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0x98);
    let mut pass = true;
    for _ in 0..150 {
        let n = rng.gen_range(1..=6usize);
        let mk = |k: usize, rng: &mut ChaCha20Rng| {
            let lam = rng.gen_range(-9i64..=9);
            let gamma = (0..n)
                .map(|_| {
                    if k == 0 {
                        0.into()
                    } else {
                        rng.gen_range(-9i64..=9).into()
                    }
                })
                .collect();
            chow::ChowClass::new(n, k, lam, gamma)
        };
        let ka = rng.gen_range(0..=1usize);
        let kb = rng.gen_range(0..=1usize);
        let kc = rng.gen_range(0..=(3 - ka - kb).min(1));
        let a = mk(ka, &mut rng);
        let b = mk(kb, &mut rng);
        let c = mk(kc, &mut rng);
        pass &= a.multiply(&b).unwrap() == b.multiply(&a).unwrap();
        pass &= a.multiply(&b).unwrap().multiply(&c).unwrap()
            == a.multiply(&b.multiply(&c).unwrap()).unwrap();
    }
    report(
        "9i (Chow-ring commutativity and associativity, exact)",
        t0,
        None,
        pass,
    );
}

// --- additional cross-module invariants from the module property lists ---

/// The closed-form pencil j agrees with the invariant-theoretic route for
/// 20 random admissible parameters, revalidating the calibration.
#[test]
fn hesse_closed_form_matches_invariants_20() {
    for l in random_lambdas(SEED ^ 0xB5, 20) {
        let closed = hesse::hesse_j(&l).unwrap();
        let via_inv = j_invariant(&hesse::hesse_cubic(&l)).unwrap();
        assert_eq!(via_inv, ExtendedJ::Finite(closed), "lambda = {l}");
    }
}

/// deg((a*lambda - sum b_i e_i)^3) = a^3 - sum b_i^3, cross-checked against
/// the expanded triple product.
#[test]
fn chow_cube_degree_closed_form() {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0xB6);
    for _ in 0..40 {
        let n = rng.gen_range(1..=6usize);
        let a: i64 = rng.gen_range(-7..=7);
        let bs: Vec<i64> = (0..n).map(|_| rng.gen_range(-7..=7)).collect();
        let class = chow::ChowClass::new(
            n,
            1,
            a,
            bs.iter().map(|&b| (-b).into()).collect(),
        );
        let cube = class.pow(3).unwrap();
        let expected: i64 = a.pow(3) - bs.iter().map(|b| b.pow(3)).sum::<i64>();
        assert_eq!(cube.degree().unwrap(), expected.into());
    }
}

/// Membership and the 9 quadratic residuals agree for all 18 candidates and
/// 56 random matrices across the seven surveyed parameters.
#[test]
fn stabilizer_membership_equals_residuals() {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0xB7);
    let candidates = stabilizer::candidate_group();
    for lam in [-7i64, -5, -3, 1, 3, 5, 7] {
        let le = EisRat::from_int(lam);
        for sigma in &candidates {
            assert!(stabilizer::stabilizes(sigma, &le).unwrap());
            assert!(stabilizer::eq2_residuals(sigma, &le)
                .iter()
                .all(|r| r.is_zero()));
        }
        let mut tried = 0;
        while tried < 8 {
            let m: [[EisRat; 3]; 3] = std::array::from_fn(|_| {
                std::array::from_fn(|_| EisRat::from_int(rng.gen_range(-4..=4)))
            });
            let Ok(p) = stabilizer::PGLElement::new(m) else {
                continue;
            };
            tried += 1;
            let member = stabilizer::stabilizes(&p, &le).unwrap();
            let residuals_zero = stabilizer::eq2_residuals(&p, &le)
                .iter()
                .all(|r| r.is_zero());
            assert_eq!(member, residuals_zero);
        }
    }
}

/// Scaling a representative by any nonzero scalar of Q(w) does not change
/// the group element.
#[test]
fn pgl_canonicalization_is_scale_invariant() {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0xB8);
    let candidates = stabilizer::candidate_group();
    for sigma in candidates.iter().take(6) {
        for _ in 0..5 {
            let mu = loop {
                let m = EisRat::new(
                    rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)),
                    rat(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=4)),
                );
                if !m.is_zero() {
                    break m;
                }
            };
            let scaled = sigma.matrix().clone().map(|row| row.map(|e| e * mu.clone()));
            assert_eq!(&stabilizer::PGLElement::new(scaled).unwrap(), sigma);
        }
    }
}

/// The discriminant cubic of a re-based net has the same j-invariant.
#[test]
fn net_basis_covariance_preserves_j() {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0xB0);
    let mut tested = 0;
    while tested < 8 {
        let phi = random_cubic(&mut rng);
        let Ok(net) = jacobian_net(&phi) else {
            continue;
        };
        let gamma = net.discriminant_cubic();
        let Ok(j1) = j_invariant(&gamma) else {
            continue;
        };
        // mix the basis by a random invertible 3x3 matrix
        let u = random_gl3(&mut rng);
        let basis = net.basis();
        let mixed: Vec<Conic<Rat>> = (0..3)
            .map(|i| {
                let mut acc = TernaryForm::zero_form(2);
                for (j, q) in basis.iter().enumerate() {
                    acc = acc.add(&q.form().scale(&u[i][j]));
                }
                Conic::new(acc).unwrap()
            })
            .collect();
        let Ok(net2) = Net::new([mixed[0].clone(), mixed[1].clone(), mixed[2].clone()]) else {
            continue;
        };
        tested += 1;
        let j2 = j_invariant(&net2.discriminant_cubic()).unwrap();
        assert_eq!(j1, j2, "j changed under net re-basing");
    }
}

/// j(Hessian(phi_lambda)) equals j(Gamma(W_lambda)) exactly.
#[test]
fn hessian_route_matches_net_route() {
    for l in random_lambdas(SEED ^ 0xB1, 6) {
        let phi = hesse::hesse_cubic(&l);
        let h = netconics::invariants::hessian_cubic(&phi).unwrap();
        let net = hesse::w_lambda(&l).unwrap();
        let gamma = net.discriminant_cubic();
        assert_eq!(
            j_invariant(&h).unwrap(),
            j_invariant(&gamma).unwrap(),
            "lambda = {l}"
        );
    }
}

/// Delta = 0 exactly when the cubic has singular points, over a corpus of
/// random cubics and the hand-built degenerate ones.
#[test]
fn discriminant_detects_singularity() {
    use netconics::invariants::singular_points;
    use netconics::ternary::{parse_form, VarSet};
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0xB2);
    let mut smooth = 0;
    let mut singular = 0;
    for _ in 0..100 {
        let f = random_cubic(&mut rng);
        let delta_zero = discriminant(&f).unwrap().is_zero();
        match singular_points(&f) {
            Ok(points) => assert_eq!(
                delta_zero,
                !points.is_empty(),
                "delta/singularity mismatch on {f}"
            ),
            Err(netconics::invariants::InvariantsError::NonIsolatedSingularities) => {
                assert!(delta_zero)
            }
            Err(e) => panic!("solver failed on {f}: {e}"),
        }
        if delta_zero {
            singular += 1;
        } else {
            smooth += 1;
        }
    }
    assert!(smooth > 0);
    let _ = singular;
    // hand-built degenerate cases
    for (s, expect_points) in [
        ("-y^3 - z^3 + x*y*z", true),
        ("y^2*z - x^3", true),
        ("x*y*z", true),
        ("x^3 + y^3 + z^3", false),
        ("x*y*x + y^3", true), // x^2 y + y^3 = y(x^2 + y^2): conic + line
    ] {
        let f = parse_form(s, VarSet::Xyz).unwrap();
        let delta_zero = discriminant(&f).unwrap().is_zero();
        assert_eq!(delta_zero, expect_points, "{s}");
        match singular_points(&f) {
            Ok(points) => assert_eq!(!points.is_empty(), expect_points, "{s}"),
            Err(netconics::invariants::InvariantsError::NonIsolatedSingularities) => {
                assert!(delta_zero)
            }
            Err(e) => panic!("{s}: {e}"),
        }
    }
}

/// Resultant swap symmetry Res(f, g) = (-1)^(mn) Res(g, f) on random input.
#[test]
fn resultant_swap_symmetry() {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0xB3);
    for _ in 0..30 {
        let mk = |rng: &mut ChaCha20Rng| {
            let deg = rng.gen_range(1..5usize);
            let mut coeffs: Vec<Rat> = (0..=deg)
                .map(|_| rat_int(rng.gen_range(-9i64..=9)))
                .collect();
            if coeffs[deg].is_zero() {
                coeffs[deg] = Rat::one();
            }
            UniPoly::new(coeffs)
        };
        let f = mk(&mut rng);
        let g = mk(&mut rng);
        let r1 = UniPoly::resultant(&f, &g).unwrap();
        let r2 = UniPoly::resultant(&g, &f).unwrap();
        let sign = if (f.degree() * g.degree()) % 2 == 0 {
            Rat::one()
        } else {
            -Rat::one()
        };
        assert_eq!(r1, sign * r2);
    }
}

/// Exact rational roots are recovered by the numeric solver within
/// tol * (1 + |root|).
#[test]
fn numeric_roots_recover_rational_roots() {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED ^ 0xB4);
    for _ in 0..12 {
        let count = rng.gen_range(2..6usize);
        let mut roots_exact: Vec<i64> = Vec::new();
        while roots_exact.len() < count {
            let r = rng.gen_range(-12i64..=12);
            if !roots_exact.contains(&r) {
                roots_exact.push(r);
            }
        }
        let mut f: UniPoly<Rat> = UniPoly::one();
        for &r in &roots_exact {
            f = f * UniPoly::new(vec![rat_int(-r), Rat::one()]);
        }
        let tol = 1e-9;
        let zs = roots::complex_roots(&f, tol).unwrap();
        for &r in &roots_exact {
            let target = netconics::scalar::CplxApprox::new(r as f64, 0.0);
            assert!(
                zs.iter()
                    .any(|z| (z - target).norm() <= tol * (1.0 + r.abs() as f64)),
                "missing root {r}"
            );
        }
    }
}
