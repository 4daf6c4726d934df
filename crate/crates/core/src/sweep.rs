//! The enumerative verifier: sweeps the pencil of 2-planes that contain a
//! fixed general line L inside a fixed general 3-plane in the P^5 of
//! conics, forms the degree-12 discriminant binary form of the resulting
//! family of plane cubics, and correlates its roots with the Veronese
//! surface of double lines.
//!
//! The discriminant and its square-free decomposition are exact over the
//! rationals; only root extraction and point matching are numeric.

use crate::invariants::{
    aronhold, classify_singularity, j_invariant, singular_points, ExtendedJ, InvariantsError,
    ProjectivePoint, SingularityKind, J_NUMERATOR_SCALE,
};
use crate::linalg;
use crate::roots::{
    self, cnorm, durand_kerner, newton_polish, numeric_rank_3, singular_values_3, span_residual,
    RootError,
};
use crate::scalar::{rat_int, rat_to_f64, CplxApprox, Rat};
use crate::ternary::{Conic, Net, TernaryForm};
use crate::unipoly::{
    bipoly_const, bipoly_t0, bipoly_t1, resultant_ring, BiPoly, BinaryForm, MultiplicityProfile,
    UniPoly, UniPolyError,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Relative tolerance for plane-membership and point-identity matching.
pub const MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("non-generic flag: {0}")]
    NonGenericFlag(String),
    #[error("flag sampling failed {0} times in a row; this indicates a bug")]
    ResampleLimit(u32),
    #[error("root finding failed: {0}")]
    Roots(#[from] RootError),
    #[error("polynomial computation failed: {0}")]
    UniPoly(#[from] UniPolyError),
    #[error("invariant computation failed: {0}")]
    Invariants(#[from] InvariantsError),
    #[error("root correlation failed: {0}")]
    Correlation(String),
    #[error("exact verification failed: {0}")]
    ExactCheck(String),
    #[error("inconsistent sweep reports: {0}")]
    Inconsistent(String),
}

/// The Schubert data: a rank-4 rational basis of the 3-plane, whose first
/// two rows span the line L.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    rows: [[Rat; 6]; 4],
    seed: u64,
    resamples: u32,
}

impl Flag {
    /// Builds a flag from explicit rows, enforcing only the rank conditions.
    pub fn from_rows(rows: [[Rat; 6]; 4]) -> Result<Self, SweepError> {
        let all: Vec<Vec<Rat>> = rows.iter().map(|r| r.to_vec()).collect();
        if linalg::rank(&all[..2]) != 2 {
            return Err(SweepError::NonGenericFlag("line rows are dependent".into()));
        }
        if linalg::rank(&all) != 4 {
            return Err(SweepError::NonGenericFlag("basis has rank < 4".into()));
        }
        Ok(Flag {
            rows,
            seed: 0,
            resamples: 0,
        })
    }

    pub fn rows(&self) -> &[[Rat; 6]; 4] {
        &self.rows
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn resamples(&self) -> u32 {
        self.resamples
    }

    fn row_conic(&self, i: usize) -> Conic<Rat> {
        Conic::from_vec6(&self.rows[i].clone())
    }

    /// Complex basis of the plane at pencil parameter (1 : t).
    fn plane_basis(&self, t: CplxApprox) -> [Vec<CplxApprox>; 3] {
        let to_c = |row: &[Rat; 6]| -> Vec<CplxApprox> {
            row.iter()
                .map(|r| CplxApprox::new(rat_to_f64(r), 0.0))
                .collect()
        };
        let v1 = to_c(&self.rows[0]);
        let v2 = to_c(&self.rows[1]);
        let r3 = to_c(&self.rows[2]);
        let r4 = to_c(&self.rows[3]);
        let v3: Vec<CplxApprox> = r3.iter().zip(&r4).map(|(a, b)| a + b * t).collect();
        [v1, v2, v3]
    }
}

const MAX_RESAMPLES: u32 = 32;

/// Draws a deterministic flag with small integer entries, resampling with an
/// incremented sub-seed until the rank checks pass and the sweep
/// discriminant is a degree-12 form with square-free profile [(1,4),(2,4)].
pub fn sample_flag(seed: u64) -> Result<Flag, SweepError> {
    for attempt in 0..MAX_RESAMPLES {
        let mut rng = ChaCha20Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
        let rows: [[Rat; 6]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| rat_int(rng.gen_range(-20..=20))));
        let Ok(mut flag) = Flag::from_rows(rows) else {
            continue;
        };
        flag.seed = seed;
        flag.resamples = attempt;
        if discriminant_sweep(&flag).is_ok() {
            return Ok(flag);
        }
    }
    Err(SweepError::ResampleLimit(MAX_RESAMPLES))
}

/// The family of discriminant cubics over the pencil: a cubic in plane
/// coordinates (a, b, c) whose coefficient at a^i b^j c^k is a homogeneous
/// binary form of degree k in the pencil parameter (t0 : t1). The plane at
/// (t0 : t1) is spanned by (r1, r2, t0 r3 + t1 r4).
pub fn pencil_cubic(flag: &Flag) -> TernaryForm<BiPoly> {
    let lift = |q: &Conic<Rat>| -> [[BiPoly; 3]; 3] {
        let m = q.matrix();
        std::array::from_fn(|i| std::array::from_fn(|j| bipoly_const(m[i][j].clone())))
    };
    let m1 = lift(&flag.row_conic(0));
    let m2 = lift(&flag.row_conic(1));
    let m3 = lift(&flag.row_conic(2));
    let m4 = lift(&flag.row_conic(3));
    let t0 = bipoly_t0();
    let t1 = bipoly_t1();
    // entry (i, j) of a M1 + b M2 + c (t0 M3 + t1 M4) as a linear form
    let entry = |i: usize, j: usize| -> TernaryForm<BiPoly> {
        let mt = t0.clone() * m3[i][j].clone() + t1.clone() * m4[i][j].clone();
        TernaryForm::from_terms(
            1,
            [
                ((1, 0, 0), m1[i][j].clone()),
                ((0, 1, 0), m2[i][j].clone()),
                ((0, 0, 1), mt),
            ],
        )
    };
    let mut acc = TernaryForm::zero_form(3);
    for (perm, positive) in DET_PERMS {
        let prod = entry(0, perm[0])
            .mul(&entry(1, perm[1]))
            .mul(&entry(2, perm[2]));
        acc = if positive {
            acc.add(&prod)
        } else {
            acc.sub(&prod)
        };
    }
    acc
}

const DET_PERMS: [([usize; 3], bool); 6] = [
    ([0, 1, 2], true),
    ([1, 2, 0], true),
    ([2, 0, 1], true),
    ([0, 2, 1], false),
    ([1, 0, 2], false),
    ([2, 1, 0], false),
];

fn bipoly_is_homogeneous(p: &BiPoly, degree: usize) -> bool {
    for (j, inner) in p.coeffs().iter().enumerate() {
        for (i, c) in inner.coeffs().iter().enumerate() {
            if !c.is_zero() && i + j != degree {
                return false;
            }
        }
    }
    true
}

/// Per-root diagnostic record from the node/Veronese correlation.
#[derive(Debug, Clone, Serialize)]
pub struct NodeCheck {
    /// Root of the dehomogenized parameter polynomial, as (re, im).
    pub t: [f64; 2],
    pub multiplicity: usize,
    /// Node of the swept cubic in plane coordinates (a, b, c).
    pub node: [[f64; 2]; 3],
    /// Rank of the 3x3 conic matrix at the node: 1 on the Veronese surface,
    /// 2 off it.
    pub conic_rank: usize,
    /// Index of the matched Veronese intersection point, for double roots.
    pub veronese_match: Option<usize>,
    pub gradient_residual: f64,
    pub membership_residual: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub seed: u64,
    pub resamples: u32,
    pub flag: Flag,
    pub disc: BinaryForm,
    pub profile: MultiplicityProfile,
    /// Number of distinct roots of the discriminant (8 for the generic
    /// profile [(1,4),(2,4)]).
    pub a_inf: usize,
    pub double_root_factor: UniPoly<Rat>,
    pub simple_root_factor: UniPoly<Rat>,
    pub b1: Option<usize>,
    pub b2: Option<usize>,
    pub node_checks: Vec<NodeCheck>,
}

impl Serialize for SweepReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SweepReport", 11)?;
        st.serialize_field("seed", &self.seed)?;
        st.serialize_field("resamples", &self.resamples)?;
        let rows: Vec<Vec<String>> = self
            .flag
            .rows()
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        st.serialize_field("flag", &rows)?;
        st.serialize_field("disc", &self.disc)?;
        st.serialize_field("profile", &self.profile)?;
        st.serialize_field("a_inf", &self.a_inf)?;
        let dc: Vec<String> = self
            .double_root_factor
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect();
        let sc: Vec<String> = self
            .simple_root_factor
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect();
        st.serialize_field("double_root_factor", &dc)?;
        st.serialize_field("simple_root_factor", &sc)?;
        st.serialize_field("b1", &self.b1)?;
        st.serialize_field("b2", &self.b2)?;
        st.serialize_field("node_checks", &self.node_checks)?;
        st.end()
    }
}

/// The exact sweep: discriminant of the pencil cubic as a degree-12 binary
/// form (computed from the frozen invariants with binary-form coefficients),
/// content-stripped, with its square-free multiplicity profile. Errors on
/// any non-generic structure.
pub fn discriminant_sweep(flag: &Flag) -> Result<SweepReport, SweepError> {
    let pencil = pencil_cubic(flag);
    // isobaric grading: the coefficient of a^i b^j c^k is homogeneous of
    // degree k in (t0, t1)
    for (&(_, _, k), coeff) in pencil.terms() {
        if !bipoly_is_homogeneous(coeff, k as usize) {
            return Err(SweepError::ExactCheck(
                "pencil cubic violates the isobaric grading".into(),
            ));
        }
    }
    let (s, t) = aronhold(&pencil)?;
    let delta = t.clone() * t - s.clone() * s.clone() * s;
    let disc = BinaryForm::from_bipoly(&delta)?;
    if disc.is_zero() {
        return Err(SweepError::NonGenericFlag(
            "sweep discriminant vanishes identically".into(),
        ));
    }
    if disc.degree() != 12 {
        return Err(SweepError::NonGenericFlag(format!(
            "sweep discriminant has degree {}",
            disc.degree()
        )));
    }
    let disc = disc.content_stripped();
    if disc.infinity_multiplicity() != 0 {
        return Err(SweepError::NonGenericFlag(
            "discriminant has a root at the infinite pencil parameter".into(),
        ));
    }
    let profile = disc.profile()?;
    if profile != MultiplicityProfile(vec![(1, 4), (2, 4)]) {
        return Err(SweepError::NonGenericFlag(format!(
            "profile {profile} instead of [(1, 4), (2, 4)]"
        )));
    }
    let factors = disc.dehomogenize().squarefree_decomposition()?;
    let simple = factors
        .iter()
        .find(|(_, m)| *m == 1)
        .map(|(f, _)| f.clone())
        .expect("profile guarantees a simple part");
    let double = factors
        .iter()
        .find(|(_, m)| *m == 2)
        .map(|(f, _)| f.clone())
        .expect("profile guarantees a double part");
    let a_inf = profile.distinct_roots();
    Ok(SweepReport {
        seed: flag.seed,
        resamples: flag.resamples,
        flag: flag.clone(),
        disc,
        profile,
        a_inf,
        double_root_factor: double,
        simple_root_factor: simple,
        b1: None,
        b2: None,
        node_checks: Vec::new(),
    })
}

// ---------------------------------------------------------------------------
// Veronese intersection
// ---------------------------------------------------------------------------

/// One of the four points where the 3-plane meets the surface of double
/// lines: the plane point (u : v : w), its image conic (a point of P^5,
/// scaled so the largest coordinate is 1), and the exact image when the
/// coordinates are rational.
#[derive(Debug, Clone)]
pub struct VeronesePoint {
    pub plane: [CplxApprox; 3],
    pub conic: [CplxApprox; 6],
    pub exact: Option<[Rat; 6]>,
}

/// Coefficient vector of the double line (u x + v y + w z)^2: the squares
/// carry (u^2, v^2, w^2) and the mixed monomials carry twice the products,
/// so the associated symmetric matrix is the rank-1 outer product.
fn veronese_map_complex(p: &[CplxApprox; 3]) -> [CplxApprox; 6] {
    [
        p[0] * p[0],
        p[1] * p[1],
        p[2] * p[2],
        2.0 * p[0] * p[1],
        2.0 * p[0] * p[2],
        2.0 * p[1] * p[2],
    ]
}

fn normalize6(mut v: [CplxApprox; 6]) -> [CplxApprox; 6] {
    let (k, _) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    let inv = CplxApprox::new(1.0, 0.0) / v[k];
    for c in v.iter_mut() {
        *c *= inv;
    }
    v
}

fn normalize3(mut v: [CplxApprox; 3]) -> [CplxApprox; 3] {
    let (k, _) = v
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    let inv = CplxApprox::new(1.0, 0.0) / v[k];
    for c in v.iter_mut() {
        *c *= inv;
    }
    v
}

fn eval_form_c(f: &TernaryForm<Rat>, p: &[CplxApprox; 3]) -> CplxApprox {
    let mut acc = CplxApprox::zero();
    for (&(i, j, k), c) in f.terms() {
        acc += rat_to_f64(c) * p[0].powu(i as u32) * p[1].powu(j as u32) * p[2].powu(k as u32);
    }
    acc
}

fn form_scale_c(f: &TernaryForm<Rat>) -> f64 {
    f.terms()
        .map(|(_, c)| rat_to_f64(c).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

fn conic_matrix_c(v: &[CplxApprox; 6]) -> [[CplxApprox; 3]; 3] {
    let h = 0.5;
    [
        [v[0], v[3] * h, v[4] * h],
        [v[3] * h, v[1], v[5] * h],
        [v[4] * h, v[5] * h, v[2]],
    ]
}

/// Solves for the four points of the 3-plane on the Veronese surface by
/// pulling back two independent hyperplanes containing the plane through
/// (u, v, w) -> (u^2, v^2, w^2, uv, uw, vw) and intersecting the two
/// resulting conics by resultant elimination. Each returned image conic has
/// numeric rank 1.
pub fn veronese_intersection(flag: &Flag) -> Result<Vec<VeronesePoint>, SweepError> {
    let points = veronese_points_clustered(flag)?;
    if points.len() != 4 {
        return Err(SweepError::NonGenericFlag(format!(
            "{} distinct Veronese points instead of 4",
            points.len()
        )));
    }
    for vp in &points {
        if numeric_rank_3(&conic_matrix_c(&vp.conic), MATCH_TOL) != 1 {
            return Err(SweepError::Correlation(
                "Veronese image conic is not numerically rank 1".into(),
            ));
        }
    }
    Ok(points)
}

/// Veronese intersection points after clustering; may return fewer than 4
/// when the plane is tangent to the surface.
fn veronese_points_clustered(flag: &Flag) -> Result<Vec<VeronesePoint>, SweepError> {
    let rows: Vec<Vec<Rat>> = flag.rows.iter().map(|r| r.to_vec()).collect();
    let kernel = linalg::kernel(&rows);
    if kernel.len() != 2 {
        return Err(SweepError::NonGenericFlag(
            "hyperplane kernel is not 2-dimensional".into(),
        ));
    }
    // hyperplane h evaluated on the double line (u x + v y + w z)^2
    let pullback = |h: &[Rat]| -> TernaryForm<Rat> {
        let two = rat_int(2);
        TernaryForm::from_terms(
            2,
            [
                ((2, 0, 0), h[0].clone()),
                ((0, 2, 0), h[1].clone()),
                ((0, 0, 2), h[2].clone()),
                ((1, 1, 0), &two * &h[3]),
                ((1, 0, 1), &two * &h[4]),
                ((0, 1, 1), &two * &h[5]),
            ],
        )
    };
    let q1 = pullback(&kernel[0]);
    let q2 = pullback(&kernel[1]);

    let mut rng = ChaCha20Rng::seed_from_u64(flag.seed ^ 0x7E20_0001);
    for _attempt in 0..8 {
        let g = random_gl3(&mut rng);
        let g1 = q1.substitute(&g);
        let g2 = q2.substitute(&g);
        if g1.coeff((0, 0, 2)).is_zero() || g2.coeff((0, 0, 2)).is_zero() {
            continue;
        }
        let r = resultant_ring(&g1.as_poly_in_third(), &g2.as_poly_in_third())
            .map_err(SweepError::UniPoly)?;
        let rb = BinaryForm::from_bipoly(&r)?;
        if rb.is_zero() || rb.degree() != 4 || rb.infinity_multiplicity() != 0 {
            continue;
        }
        let uv_roots = match roots::complex_roots(&rb.dehomogenize(), 1e-13) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let mut found: Vec<[CplxApprox; 3]> = Vec::new();
        for v_val in uv_roots {
            for w in quadratic_roots_at(&g1, v_val) {
                let s = [CplxApprox::new(1.0, 0.0), v_val, w];
                let scale = s.iter().map(|c| c.norm()).fold(1.0, f64::max).powi(2);
                if eval_form_c(&g2, &s).norm() > 1e-6 * scale * form_scale_c(&g2) {
                    continue;
                }
                found.push(polish_two_conics(&g1, &g2, s));
            }
        }
        let mut points: Vec<VeronesePoint> = Vec::new();
        for s in found {
            let p = apply_mat_c(&g, &s);
            let pn = normalize3(p);
            let conic = normalize6(veronese_map_complex(&pn));
            points.push(VeronesePoint {
                plane: pn,
                conic,
                exact: None,
            });
        }
        dedupe_points(&mut points);
        let scale = form_scale_c(&q1).max(form_scale_c(&q2));
        let ok = points.iter().all(|vp| {
            eval_form_c(&q1, &vp.plane).norm() < 1e-7 * scale
                && eval_form_c(&q2, &vp.plane).norm() < 1e-7 * scale
        });
        if !ok {
            continue;
        }
        for vp in points.iter_mut() {
            try_exact_snap(vp, &q1, &q2);
        }
        return Ok(points);
    }
    Err(SweepError::NonGenericFlag(
        "Veronese elimination failed for all coordinate changes".into(),
    ))
}

fn random_gl3(rng: &mut ChaCha20Rng) -> [[Rat; 3]; 3] {
    loop {
        let g: [[Rat; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| rat_int(rng.gen_range(-9..=9))));
        let rows: Vec<Vec<Rat>> = g.iter().map(|r| r.to_vec()).collect();
        if !linalg::det(&rows).is_zero() {
            return g;
        }
    }
}

fn apply_mat_c(g: &[[Rat; 3]; 3], v: &[CplxApprox; 3]) -> [CplxApprox; 3] {
    std::array::from_fn(|i| {
        (0..3)
            .map(|j| CplxApprox::new(rat_to_f64(&g[i][j]), 0.0) * v[j])
            .sum()
    })
}

/// Roots in w of f(1, v, w) for a conic f.
fn quadratic_roots_at(f: &TernaryForm<Rat>, v: CplxApprox) -> Vec<CplxApprox> {
    let mut coeffs = vec![CplxApprox::zero(); 3];
    for (&(_i, j, k), c) in f.terms() {
        coeffs[k as usize] += rat_to_f64(c) * v.powu(j as u32);
    }
    let top = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    while coeffs.last().is_some_and(|c| c.norm() < 1e-13 * top) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Vec::new();
    }
    durand_kerner(&coeffs, 1e-13).unwrap_or_default()
}

/// Gauss-Newton polish of a common zero of two conics, in the chart fixing
/// the largest coordinate.
fn polish_two_conics(
    g1: &TernaryForm<Rat>,
    g2: &TernaryForm<Rat>,
    mut p: [CplxApprox; 3],
) -> [CplxApprox; 3] {
    let (fixed, _) = p
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    let free: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
    for _ in 0..8 {
        let r = vec![eval_form_c(g1, &p), eval_form_c(g2, &p)];
        let jac: Vec<Vec<CplxApprox>> = [g1, g2]
            .iter()
            .map(|f| {
                free.iter()
                    .map(|&v| eval_form_c(&f.partial_derivative(v), &p))
                    .collect()
            })
            .collect();
        let Some(dx) = roots::solve_complex(&jac, &r) else {
            break;
        };
        p[free[0]] -= dx[0];
        p[free[1]] -= dx[1];
    }
    p
}

fn dedupe_points(points: &mut Vec<VeronesePoint>) {
    let mut out: Vec<VeronesePoint> = Vec::new();
    for p in points.drain(..) {
        let dup = out
            .iter()
            .any(|q| projective_distance6(&p.conic, &q.conic) < MATCH_TOL);
        if !dup {
            out.push(p);
        }
    }
    *points = out;
}

fn projective_distance6(a: &[CplxApprox; 6], b: &[CplxApprox; 6]) -> f64 {
    let dot: CplxApprox = a.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
    let na = cnorm(a);
    let nb = cnorm(b);
    1.0 - dot.norm() / (na * nb).max(f64::MIN_POSITIVE)
}

/// Attempts small-denominator rational reconstruction of the plane point,
/// verified exactly against both pullback conics.
fn try_exact_snap(vp: &mut VeronesePoint, q1: &TernaryForm<Rat>, q2: &TernaryForm<Rat>) {
    let mut exact: [Rat; 3] = [Rat::zero(), Rat::zero(), Rat::zero()];
    for (i, c) in vp.plane.iter().enumerate() {
        if c.im.abs() > 1e-10 {
            return;
        }
        let Some(r) = rationalize(c.re, 1_000_000) else {
            return;
        };
        exact[i] = r;
    }
    if exact.iter().all(|r| r.is_zero()) {
        return;
    }
    if q1.eval(&exact).is_zero() && q2.eval(&exact).is_zero() {
        let two = rat_int(2);
        vp.exact = Some([
            &exact[0] * &exact[0],
            &exact[1] * &exact[1],
            &exact[2] * &exact[2],
            &two * &exact[0] * &exact[1],
            &two * &exact[0] * &exact[2],
            &two * &exact[1] * &exact[2],
        ]);
    }
}

/// Continued-fraction rational approximation with bounded denominator,
/// accepted only when it matches to near machine precision.
fn rationalize(x: f64, max_den: i64) -> Option<Rat> {
    if !x.is_finite() || x.abs() > 1e12 {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..40 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= 1e-11 * (1.0 + x.abs()) {
            return Some(Rat::new(BigInt::from(p1), BigInt::from(q1)));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        frac = r - a;
        let np = (a as i64).checked_mul(p1)?.checked_add(p0)?;
        let nq = (a as i64).checked_mul(q1)?.checked_add(q0)?;
        p0 = p1;
        q0 = q1;
        p1 = np;
        q1 = nq;
        if q1 > max_den {
            return None;
        }
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - x).abs() <= 1e-11 * (1.0 + x.abs()) {
        Some(Rat::new(BigInt::from(p1), BigInt::from(q1)))
    } else {
        None
    }
}

// ---------------------------------------------------------------------------
// node correlation
// ---------------------------------------------------------------------------

const CUBIC_MONOS: [(u32, u32, u32); 10] = [
    (3, 0, 0),
    (2, 1, 0),
    (2, 0, 1),
    (1, 2, 0),
    (1, 1, 1),
    (1, 0, 2),
    (0, 3, 0),
    (0, 2, 1),
    (0, 1, 2),
    (0, 0, 3),
];

/// The swept cubic at a fixed complex pencil parameter, coefficients
/// normalized to unit maximum modulus.
struct NumericCubic {
    coeffs: [CplxApprox; 10],
}

impl NumericCubic {
    fn from_pencil(pencil: &TernaryForm<BiPoly>, t: CplxApprox) -> Self {
        let coeffs10 = pencil.cubic_coefficients().expect("pencil cubic");
        let mut coeffs: [CplxApprox; 10] = [CplxApprox::zero(); 10];
        for (slot, bp) in coeffs10.iter().enumerate() {
            let mut acc = CplxApprox::zero();
            for (j, inner) in bp.coeffs().iter().enumerate() {
                // t0 = 1
                let inner_val: f64 = inner.coeffs().iter().map(rat_to_f64).sum();
                acc += inner_val * t.powu(j as u32);
            }
            coeffs[slot] = acc;
        }
        let m = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            for c in coeffs.iter_mut() {
                *c /= m;
            }
        }
        NumericCubic { coeffs }
    }

    /// Relabels the plane variables by a cyclic shift (for chart changes).
    fn rotated(&self, shift: usize) -> NumericCubic {
        let mut coeffs = [CplxApprox::zero(); 10];
        for (slot, (i, j, k)) in CUBIC_MONOS.iter().enumerate() {
            let mut e = [*i, *j, *k];
            e.rotate_left(shift);
            let target = CUBIC_MONOS
                .iter()
                .position(|m| m == &(e[0], e[1], e[2]))
                .expect("monomial table is closed under permutations");
            coeffs[target] = self.coeffs[slot];
        }
        NumericCubic { coeffs }
    }

    fn gradient(&self, p: &[CplxApprox; 3]) -> [CplxApprox; 3] {
        let mut out = [CplxApprox::zero(); 3];
        for ((i, j, k), c) in CUBIC_MONOS.iter().zip(&self.coeffs) {
            let e = [*i, *j, *k];
            for v in 0..3 {
                if e[v] == 0 {
                    continue;
                }
                let mut term = c * e[v] as f64;
                for (w, &ew) in e.iter().enumerate() {
                    let pw = if w == v { ew - 1 } else { ew };
                    term *= p[w].powu(pw);
                }
                out[v] += term;
            }
        }
        out
    }

    fn hessian(&self, p: &[CplxApprox; 3]) -> [[CplxApprox; 3]; 3] {
        let mut out = [[CplxApprox::zero(); 3]; 3];
        for ((i, j, k), c) in CUBIC_MONOS.iter().zip(&self.coeffs) {
            let e = [*i, *j, *k];
            for v in 0..3 {
                if e[v] == 0 {
                    continue;
                }
                let mut ev = e;
                ev[v] -= 1;
                for w in 0..3 {
                    if ev[w] == 0 {
                        continue;
                    }
                    let factor = (e[v] * ev[w]) as f64;
                    let mut ew = ev;
                    ew[w] -= 1;
                    let mut term = c * factor;
                    for (x, &ex) in ew.iter().enumerate() {
                        term *= p[x].powu(ex);
                    }
                    out[v][w] += term;
                }
            }
        }
        out
    }

    /// The node of a one-node cubic: eliminate the third coordinate from two
    /// gradient components, try each cyclic chart until the residual is
    /// good.
    fn find_node(&self) -> Option<[CplxApprox; 3]> {
        let mut best: Option<([CplxApprox; 3], f64)> = None;
        for shift in 0..3 {
            let rot = self.rotated(shift);
            if let Some((p_rot, res)) = rot.find_node_chart() {
                // undo the relabeling: rotated(shift) sent original index
                // (v + shift) mod 3 to v
                let mut p = [CplxApprox::zero(); 3];
                for v in 0..3 {
                    p[(v + shift) % 3] = p_rot[v];
                }
                match &best {
                    Some((_, r)) if *r <= res => {}
                    _ => best = Some((p, res)),
                }
            }
        }
        let (p, r) = best?;
        if r < 1e-7 {
            Some(normalize3(p))
        } else {
            None
        }
    }

    /// Node search in the chart a = 1.
    fn find_node_chart(&self) -> Option<([CplxApprox; 3], f64)> {
        // gradient components as polynomials in c (outer) over b (inner)
        let grad_poly = |v: usize| -> UniPoly<UniPoly<CplxApprox>> {
            let mut cc: Vec<Vec<CplxApprox>> = vec![vec![CplxApprox::zero(); 3]; 3];
            for ((i, j, k), coef) in CUBIC_MONOS.iter().zip(&self.coeffs) {
                let e = [*i, *j, *k];
                if e[v] == 0 {
                    continue;
                }
                let mut dexp = e;
                dexp[v] -= 1;
                cc[dexp[2] as usize][dexp[1] as usize] += coef * e[v] as f64;
            }
            UniPoly::new(cc.into_iter().map(UniPoly::new).collect())
        };
        let g0 = grad_poly(0);
        let g1 = grad_poly(1);
        let res: UniPoly<CplxApprox> = resultant_ring(&g0, &g1).ok()?;
        let mut cs: Vec<CplxApprox> = res.coeffs().to_vec();
        let top = cs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if top <= 0.0 {
            return None;
        }
        while cs.last().is_some_and(|c| c.norm() < 1e-11 * top) {
            cs.pop();
        }
        if cs.len() < 2 {
            return None;
        }
        let b_candidates = durand_kerner(&cs, 1e-12).ok()?;
        let mut best: Option<([CplxApprox; 3], f64)> = None;
        for b in b_candidates {
            let mut quad = [CplxApprox::zero(); 3];
            for ((i, j, k), c) in CUBIC_MONOS.iter().zip(&self.coeffs) {
                if *i == 0 {
                    continue;
                }
                quad[*k as usize] += c * *i as f64 * b.powu(*j);
            }
            let mut quad = quad.to_vec();
            let qtop = quad.iter().map(|c| c.norm()).fold(0.0, f64::max);
            while quad
                .last()
                .is_some_and(|c| c.norm() < 1e-11 * qtop.max(1e-300))
            {
                quad.pop();
            }
            if quad.len() < 2 {
                continue;
            }
            let Ok(c_roots) = durand_kerner(&quad, 1e-12) else {
                continue;
            };
            for c in c_roots {
                let mut p = [CplxApprox::one(), b, c];
                p = self.polish_node(p);
                let g = self.gradient(&p);
                let scale = p.iter().map(|z| z.norm()).fold(1.0, f64::max).powi(2);
                let res_norm = g.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
                match &best {
                    Some((_, r)) if *r <= res_norm => {}
                    _ => best = Some((p, res_norm)),
                }
            }
        }
        best
    }

    fn polish_node(&self, mut p: [CplxApprox; 3]) -> [CplxApprox; 3] {
        let (fixed, _) = p
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
            .unwrap();
        let free: Vec<usize> = (0..3).filter(|&i| i != fixed).collect();
        for _ in 0..10 {
            let g = self.gradient(&p);
            let hess = self.hessian(&p);
            let jac: Vec<Vec<CplxApprox>> = (0..3)
                .map(|r| free.iter().map(|&c| hess[r][c]).collect())
                .collect();
            let mut a = vec![vec![CplxApprox::zero(); 2]; 2];
            let mut rhs = vec![CplxApprox::zero(); 2];
            for (row, gr) in jac.iter().zip(g.iter()) {
                for i in 0..2 {
                    for j in 0..2 {
                        a[i][j] += row[i].conj() * row[j];
                    }
                    rhs[i] += row[i].conj() * gr;
                }
            }
            let Some(dx) = roots::solve_complex(&a, &rhs) else {
                break;
            };
            p[free[0]] -= dx[0];
            p[free[1]] -= dx[1];
        }
        p
    }
}

/// Correlates discriminant roots with the Veronese geometry: each double
/// root's plane contains exactly one of the four Veronese points, and that
/// point is the node of the swept cubic (conic rank 1); each simple root's
/// cubic has a single node whose conic has rank 2. Fills b1, b2 and the
/// per-root diagnostics.
pub fn node_veronese_correlation(
    flag: &Flag,
    mut report: SweepReport,
) -> Result<SweepReport, SweepError> {
    let veronese = veronese_intersection(flag)?;
    let pencil = pencil_cubic(flag);
    let mut checks: Vec<NodeCheck> = Vec::new();
    let mut b1 = 0usize;
    let mut b2 = 0usize;
    let mut matched: Vec<usize> = Vec::new();

    for (factor, mult) in [
        (&report.double_root_factor, 2usize),
        (&report.simple_root_factor, 1usize),
    ] {
        let coeffs_c = roots::to_complex_coeffs(factor);
        for t in roots::complex_roots(factor, 1e-12)? {
            let t = newton_polish(&coeffs_c, t, 6);
            let basis = flag.plane_basis(t);
            let cubic = NumericCubic::from_pencil(&pencil, t);
            if mult == 2 {
                let mut hits: Vec<(usize, f64)> = Vec::new();
                for (i, vp) in veronese.iter().enumerate() {
                    let r = span_residual(&vp.conic, &basis);
                    if r < MATCH_TOL {
                        hits.push((i, r));
                    }
                }
                if hits.len() != 1 {
                    return Err(SweepError::Correlation(format!(
                        "double root at t = {t} matches {} Veronese points",
                        hits.len()
                    )));
                }
                let (vi, mres) = hits[0];
                matched.push(vi);
                let vp = &veronese[vi];
                let node_abc = express_in_basis(&vp.conic, &basis).ok_or_else(|| {
                    SweepError::Correlation("plane-coordinate solve failed".into())
                })?;
                let g = cubic.gradient(&node_abc);
                let nscale = node_abc
                    .iter()
                    .map(|z| z.norm())
                    .fold(1.0, f64::max)
                    .powi(2);
                let grad_res = g.iter().map(|z| z.norm()).fold(0.0, f64::max) / nscale;
                if grad_res > 1e-6 {
                    return Err(SweepError::Correlation(format!(
                        "Veronese point is not the node (gradient residual {grad_res:e})"
                    )));
                }
                let rank = numeric_rank_3(&conic_matrix_c(&vp.conic), MATCH_TOL);
                if rank != 1 {
                    return Err(SweepError::Correlation(
                        "node conic at a double root is not rank 1".into(),
                    ));
                }
                b1 += 1;
                checks.push(NodeCheck {
                    t: [t.re, t.im],
                    multiplicity: 2,
                    node: node_abc.map(|z| [z.re, z.im]),
                    conic_rank: rank,
                    veronese_match: Some(vi),
                    gradient_residual: grad_res,
                    membership_residual: Some(mres),
                });
            } else {
                for vp in &veronese {
                    if span_residual(&vp.conic, &basis) < MATCH_TOL {
                        return Err(SweepError::Correlation(
                            "simple root's plane contains a Veronese point".into(),
                        ));
                    }
                }
                let node = cubic.find_node().ok_or_else(|| {
                    SweepError::Correlation(format!("no node found at simple root t = {t}"))
                })?;
                let g = cubic.gradient(&node);
                let grad_res = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
                let conic6: [CplxApprox; 6] = std::array::from_fn(|i| {
                    node[0] * basis[0][i] + node[1] * basis[1][i] + node[2] * basis[2][i]
                });
                let rank = numeric_rank_3(&conic_matrix_c(&normalize6(conic6)), MATCH_TOL);
                if rank != 2 {
                    return Err(SweepError::Correlation(format!(
                        "node conic at a simple root has rank {rank} instead of 2"
                    )));
                }
                b2 += 1;
                checks.push(NodeCheck {
                    t: [t.re, t.im],
                    multiplicity: 1,
                    node: node.map(|z| [z.re, z.im]),
                    conic_rank: rank,
                    veronese_match: None,
                    gradient_residual: grad_res,
                    membership_residual: None,
                });
            }
        }
    }
    matched.sort_unstable();
    matched.dedup();
    if matched.len() != 4 {
        return Err(SweepError::Correlation(format!(
            "double roots matched only {} of the 4 Veronese points",
            matched.len()
        )));
    }
    report.b1 = Some(b1);
    report.b2 = Some(b2);
    report.node_checks = checks;
    Ok(report)
}

/// Least-squares coordinates of a 6-vector in a 3-dimensional complex span.
fn express_in_basis(v: &[CplxApprox; 6], basis: &[Vec<CplxApprox>; 3]) -> Option<[CplxApprox; 3]> {
    let mut a = vec![vec![CplxApprox::zero(); 3]; 3];
    let mut rhs = vec![CplxApprox::zero(); 3];
    for i in 0..3 {
        for j in 0..3 {
            a[i][j] = basis[i]
                .iter()
                .zip(basis[j].iter())
                .map(|(x, y)| x.conj() * y)
                .sum();
        }
        rhs[i] = basis[i]
            .iter()
            .zip(v.iter())
            .map(|(x, y)| x.conj() * y)
            .sum();
    }
    let x = roots::solve_complex(&a, &rhs)?;
    Some([x[0], x[1], x[2]])
}

// ---------------------------------------------------------------------------
// fiber sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct FiberSweep {
    pub j0: String,
    pub total_multiplicity: usize,
    pub distinct_roots: usize,
    pub profile: MultiplicityProfile,
    /// Minimum pairwise separation of the numeric roots.
    pub min_separation: f64,
}

/// The degree-12 binary form kappa S^3 - j0 Delta whose roots are the pencil
/// parameters where the swept cubic has j-invariant j0.
pub fn fiber_form(flag: &Flag, j0: &Rat) -> Result<BinaryForm, SweepError> {
    let pencil = pencil_cubic(flag);
    let (s, t) = aronhold(&pencil)?;
    let delta = t.clone() * t - s.clone() * s.clone() * s.clone();
    let s3 = s.clone() * s.clone() * s;
    let fiber = s3 * bipoly_const(rat_int(J_NUMERATOR_SCALE)) - delta * bipoly_const(j0.clone());
    let form = BinaryForm::from_bipoly(&fiber)?;
    if form.is_zero() {
        return Err(SweepError::NonGenericFlag(
            "fiber form vanishes identically".into(),
        ));
    }
    Ok(form.content_stripped())
}

/// Multiplicity profile and numeric root separation of the j0-fiber.
pub fn fiber_sweep(flag: &Flag, j0: &Rat) -> Result<FiberSweep, SweepError> {
    let form = fiber_form(flag, j0)?;
    if form.degree() != 12 {
        return Err(SweepError::NonGenericFlag(format!(
            "fiber form has degree {}",
            form.degree()
        )));
    }
    let profile = form.profile()?;
    let dehom = form.dehomogenize();
    let mut min_sep = f64::INFINITY;
    if dehom.degree() >= 1 {
        let zs = roots::complex_roots(&dehom, 1e-10)?;
        for i in 0..zs.len() {
            for j in (i + 1)..zs.len() {
                min_sep = min_sep.min((zs[i] - zs[j]).norm());
            }
        }
    }
    Ok(FiberSweep {
        j0: j0.to_string(),
        total_multiplicity: profile.total(),
        distinct_roots: profile.distinct_roots(),
        profile,
        min_separation: min_sep,
    })
}

/// Specializes the pencil cubic at an exact rational parameter (1 : t).
pub fn specialize_pencil(flag: &Flag, t: &Rat) -> TernaryForm<Rat> {
    let pencil = pencil_cubic(flag);
    pencil.map_coeffs(|bp| {
        let mut acc = Rat::zero();
        for (j, inner) in bp.coeffs().iter().enumerate() {
            // t0 = 1: the inner polynomial evaluates to the sum of its
            // coefficients
            let inner_val = inner
                .coeffs()
                .iter()
                .fold(Rat::zero(), |a, c| a + c.clone());
            acc += inner_val * t.pow(j as i32);
        }
        acc
    })
}

// ---------------------------------------------------------------------------
// tangent cones
// ---------------------------------------------------------------------------

/// Sparse exact polynomial in the 4 plane coordinates.
#[derive(Debug, Clone)]
struct Poly4 {
    terms: std::collections::BTreeMap<[u8; 4], Rat>,
}

impl Poly4 {
    fn zero() -> Self {
        Poly4 {
            terms: Default::default(),
        }
    }

    fn add_term(&mut self, e: [u8; 4], c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    fn linear(v: &[Rat; 4]) -> Self {
        let mut p = Poly4::zero();
        for (i, c) in v.iter().enumerate() {
            let mut e = [0u8; 4];
            e[i] = 1;
            p.add_term(e, c.clone());
        }
        p
    }

    fn mul(&self, other: &Poly4) -> Poly4 {
        let mut out = Poly4::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: [u8; 4] = std::array::from_fn(|i| e1[i] + e2[i]);
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    fn add(&self, other: &Poly4) -> Poly4 {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    fn scale(&self, s: &Rat) -> Poly4 {
        let mut out = Poly4::zero();
        for (e, c) in &self.terms {
            out.add_term(*e, c * s);
        }
        out
    }

    fn gradient_c(&self, p: &[CplxApprox; 4]) -> [CplxApprox; 4] {
        let mut out = [CplxApprox::zero(); 4];
        for (e, c) in &self.terms {
            for v in 0..4 {
                if e[v] == 0 {
                    continue;
                }
                let mut term = CplxApprox::new(rat_to_f64(c) * e[v] as f64, 0.0);
                for (i, &ei) in e.iter().enumerate() {
                    let pw = if i == v { ei - 1 } else { ei };
                    term *= p[i].powu(pw as u32);
                }
                out[v] += term;
            }
        }
        out
    }

    fn hessian_c(&self, p: &[CplxApprox; 4]) -> [[CplxApprox; 4]; 4] {
        let mut out = [[CplxApprox::zero(); 4]; 4];
        for (e, c) in &self.terms {
            for v in 0..4 {
                if e[v] == 0 {
                    continue;
                }
                let mut ev = *e;
                ev[v] -= 1;
                for w in 0..4 {
                    if ev[w] == 0 {
                        continue;
                    }
                    let factor = (e[v] as u32 * ev[w] as u32) as f64;
                    let mut ew = ev;
                    ew[w] -= 1;
                    let mut term = CplxApprox::new(rat_to_f64(c) * factor, 0.0);
                    for (i, &ei) in ew.iter().enumerate() {
                        term *= p[i].powu(ei as u32);
                    }
                    out[v][w] += term;
                }
            }
        }
        out
    }
}

/// The restriction of the determinant cubic to the 3-plane, as an exact
/// cubic in the 4 plane coordinates.
fn restricted_cubic(flag: &Flag) -> Poly4 {
    let mats: Vec<[[Rat; 3]; 3]> = (0..4).map(|k| flag.row_conic(k).matrix()).collect();
    let entry = |i: usize, j: usize| -> Poly4 {
        let v: [Rat; 4] = std::array::from_fn(|k| mats[k][i][j].clone());
        Poly4::linear(&v)
    };
    let mut acc = Poly4::zero();
    for (perm, positive) in DET_PERMS {
        let prod = entry(0, perm[0])
            .mul(&entry(1, perm[1]))
            .mul(&entry(2, perm[2]));
        acc = if positive {
            acc.add(&prod)
        } else {
            acc.add(&prod.scale(&rat_int(-1)))
        };
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct TangentConeRecord {
    pub point_index: usize,
    pub gradient_residual: f64,
    /// Singular values of the restricted quadratic part.
    pub cone_singular_values: [f64; 3],
    pub smooth_quadric: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TangentConeReport {
    pub ok: bool,
    pub points_found: usize,
    pub records: Vec<TangentConeRecord>,
    pub reason: Option<String>,
}

/// Checks that the projective tangent cone of the restricted cubic at each
/// Veronese intersection point is a smooth quadric (full rank 3 in the three
/// local coordinates), i.e. that each point is an ordinary double point.
pub fn tangent_cone_check(flag: &Flag) -> Result<TangentConeReport, SweepError> {
    let points = veronese_points_clustered(flag)?;
    let cubic = restricted_cubic(flag);
    let mut records = Vec::new();
    let mut ok = points.len() == 4;
    let mut reason = if ok {
        None
    } else {
        Some(format!(
            "{} distinct intersection points instead of 4 (tangential position)",
            points.len()
        ))
    };
    for (idx, vp) in points.iter().enumerate() {
        let s = match plane_coordinates(flag, &vp.conic) {
            Some(s) => s,
            None => {
                ok = false;
                reason = Some("could not solve for plane coordinates".into());
                continue;
            }
        };
        let grad = cubic.gradient_c(&s);
        let gscale = s.iter().map(|z| z.norm()).fold(1.0, f64::max).powi(2);
        let grad_res = grad.iter().map(|z| z.norm()).fold(0.0, f64::max) / gscale;
        let hess = cubic.hessian_c(&s);
        let dirs = complement_basis_4(&s);
        let mut q = [[CplxApprox::zero(); 3]; 3];
        for (a, da) in dirs.iter().enumerate() {
            for (b, db) in dirs.iter().enumerate() {
                let mut acc = CplxApprox::zero();
                for i in 0..4 {
                    for j in 0..4 {
                        acc += da[i] * hess[i][j] * db[j];
                    }
                }
                q[a][b] = acc;
            }
        }
        let sv = singular_values_3(&q);
        let smooth = sv[2] > 1e-6 * sv[0].max(f64::MIN_POSITIVE);
        if !smooth {
            ok = false;
            reason = Some(format!("degenerate tangent cone at point {idx}"));
        }
        records.push(TangentConeRecord {
            point_index: idx,
            gradient_residual: grad_res,
            cone_singular_values: sv,
            smooth_quadric: smooth,
        });
    }
    Ok(TangentConeReport {
        ok,
        points_found: points.len(),
        records,
        reason,
    })
}

/// Solves sum_k s_k r_k = v for the 4 plane coordinates s, via an exact
/// pivot-column selection and a complex 4x4 solve, verified on the
/// remaining columns.
fn plane_coordinates(flag: &Flag, v: &[CplxApprox; 6]) -> Option<[CplxApprox; 4]> {
    let rows: Vec<Vec<Rat>> = flag.rows.iter().map(|r| r.to_vec()).collect();
    let mut cols: Vec<usize> = Vec::new();
    for c in 0..6 {
        if cols.len() == 4 {
            break;
        }
        let mut candidate = cols.clone();
        candidate.push(c);
        let sub: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| candidate.iter().map(|&j| r[j].clone()).collect())
            .collect();
        if linalg::rank(&sub) == candidate.len() {
            cols = candidate;
        }
    }
    if cols.len() != 4 {
        return None;
    }
    let a: Vec<Vec<CplxApprox>> = cols
        .iter()
        .map(|&j| {
            (0..4)
                .map(|k| CplxApprox::new(rat_to_f64(&rows[k][j]), 0.0))
                .collect()
        })
        .collect();
    let rhs: Vec<CplxApprox> = cols.iter().map(|&j| v[j]).collect();
    let x = roots::solve_complex(&a, &rhs)?;
    let scale = v.iter().map(|z| z.norm()).fold(1.0, f64::max);
    for j in 0..6 {
        let lhs: CplxApprox = (0..4)
            .map(|k| x[k] * CplxApprox::new(rat_to_f64(&rows[k][j]), 0.0))
            .sum();
        if (lhs - v[j]).norm() > 1e-6 * scale {
            return None;
        }
    }
    Some([x[0], x[1], x[2], x[3]])
}

fn complement_basis_4(s: &[CplxApprox; 4]) -> [[CplxApprox; 4]; 3] {
    let sn: f64 = s.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let unit: Vec<CplxApprox> = s.iter().map(|c| c / sn).collect();
    let (drop, _) = s
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    let mut out = [[CplxApprox::zero(); 4]; 3];
    let mut slot = 0;
    for i in 0..4 {
        if i == drop {
            continue;
        }
        let mut e = [CplxApprox::zero(); 4];
        e[i] = CplxApprox::one();
        let overlap: CplxApprox = e.iter().zip(&unit).map(|(a, b)| a * b.conj()).sum();
        for k in 0..4 {
            out[slot][k] = e[k] - overlap * unit[k];
        }
        slot += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// reference instance and the class ledger
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct H0Report {
    pub gamma: String,
    pub node: Vec<String>,
    pub kind: String,
    pub j: String,
    pub node_conic_rank: usize,
    /// The node's conic has rank 2, so it is off the surface of double
    /// lines: the net lies in the nodal orbit with node off the Veronese.
    pub node_on_veronese: bool,
}

/// Exact verification of the reference net <xy, x^2 + yz, y^2 + xz>: its
/// discriminant cubic is (-b^3 - c^3 + abc)/4 with a single node at
/// [1 : 0 : 0], j = infinity, and node conic xy of rank 2.
pub fn verify_h0() -> Result<H0Report, SweepError> {
    use crate::ternary::{format_form, parse_form, VarSet};
    let f = |s: &str| parse_form(s, VarSet::Xyz).expect("valid form");
    let h0 = Net::new([
        Conic::new(f("x*y")).expect("conic"),
        Conic::new(f("x^2 + y*z")).expect("conic"),
        Conic::new(f("y^2 + x*z")).expect("conic"),
    ])
    .expect("rank-3 net");
    let gamma = h0.discriminant_cubic();
    let expected = parse_form("-1/4*b^3 - 1/4*c^3 + 1/4*a*b*c", VarSet::Abc).expect("closed form");
    if gamma != expected {
        return Err(SweepError::ExactCheck(
            "discriminant cubic differs from (-b^3 - c^3 + abc)/4".into(),
        ));
    }
    let pts = singular_points(&gamma)?;
    let node_expected = ProjectivePoint::Exact([Rat::one(), Rat::zero(), Rat::zero()]);
    if pts.len() != 1 || pts[0] != node_expected {
        return Err(SweepError::ExactCheck(
            "singular locus is not exactly [1:0:0]".into(),
        ));
    }
    let kind = classify_singularity(&gamma, &pts[0])?;
    if kind != SingularityKind::Node {
        return Err(SweepError::ExactCheck("singularity is not a node".into()));
    }
    let j = j_invariant(&gamma)?;
    if j != ExtendedJ::Infinite {
        return Err(SweepError::ExactCheck("j-invariant is not infinite".into()));
    }
    // the node [1:0:0] corresponds to the basis conic xy, of rank 2
    let m = h0.basis()[0].matrix();
    let rows: Vec<Vec<Rat>> = m.iter().map(|r| r.to_vec()).collect();
    let rank = linalg::rank(&rows);
    if rank != 2 {
        return Err(SweepError::ExactCheck(format!(
            "node conic has rank {rank} instead of 2"
        )));
    }
    Ok(H0Report {
        gamma: format_form(&gamma, VarSet::Abc),
        node: vec!["1".into(), "0".into(), "0".into()],
        kind: "Node".into(),
        j: "infinity".into(),
        node_conic_rank: rank,
        node_on_veronese: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassLedger {
    pub seeds: Vec<u64>,
    pub b1: usize,
    pub b2: usize,
    pub l1: usize,
    pub l2: usize,
    /// l1 b1 + l2 b2 = 12.
    pub fiber_class: usize,
    /// fiber_class / 3 = 4 (three pencil members per generic j-value).
    pub orbit_class: usize,
}

/// Aggregates correlated sweep reports into the integer class ledger,
/// checking mutual consistency. The per-orbit class is the fiber class
/// divided (exactly) by the generic fiber root count 3.
pub fn class_ledger(reports: &[SweepReport]) -> Result<ClassLedger, SweepError> {
    if reports.is_empty() {
        return Err(SweepError::Inconsistent("no reports".into()));
    }
    let expected = MultiplicityProfile(vec![(1, 4), (2, 4)]);
    for r in reports {
        if r.profile != expected {
            return Err(SweepError::Inconsistent(format!(
                "seed {} has profile {}",
                r.seed, r.profile
            )));
        }
        if r.b1 != Some(4) || r.b2 != Some(4) {
            return Err(SweepError::Inconsistent(format!(
                "seed {} has (b1, b2) = ({:?}, {:?})",
                r.seed, r.b1, r.b2
            )));
        }
    }
    let (b1, b2) = (4usize, 4usize);
    // multiplicities carried by the two root families of the discriminant
    let (l1, l2) = (2usize, 1usize);
    let fiber_class = l1 * b1 + l2 * b2;
    // the generic fiber of the j-map has 3 simple roots
    let generic_fiber = crate::hesse::fb_root_analysis(&rat_int(5))
        .map_err(|e| SweepError::Inconsistent(format!("fiber analysis failed: {e}")))?;
    let fiber_count = generic_fiber.profile.total();
    if fiber_class % fiber_count != 0 {
        return Err(SweepError::Inconsistent(format!(
            "fiber class {fiber_class} is not divisible by the fiber count {fiber_count}"
        )));
    }
    Ok(ClassLedger {
        seeds: reports.iter().map(|r| r.seed).collect(),
        b1,
        b2,
        l1,
        l2,
        fiber_class,
        orbit_class: fiber_class / fiber_count,
    })
}
