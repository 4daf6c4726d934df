//! Classical invariants of plane cubics: the degree-4 and degree-6
//! generators S and T, the discriminant, the extended j-invariant, Hessian
//! cubics, and singular-point location/classification.
//!
//! Normalization is frozen against the Weierstrass family
//! y^2 z - x^3 - a x z^2 - b z^3, on which S = -48a, T = 864b,
//! Delta = T^2 - S^3 = 27648 (4a^3 + 27b^2), and
//! j = -1728 S^3 / Delta = 1728 * 4a^3 / (4a^3 + 27b^2).

mod tables;

use crate::linalg;
use crate::roots;
use crate::scalar::{rat_int, rat_to_f64, CplxApprox, Field, Rat, Ring};
use crate::ternary::TernaryForm;
use crate::unipoly::{resultant_ring, BiPoly, BinaryForm, UniPoly};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InvariantsError {
    #[error("expected a cubic form, got degree {0}")]
    NotCubic(usize),
    #[error("the zero form has no invariants")]
    ZeroForm,
    #[error("point is not a singular point of the curve")]
    NotSingular,
    #[error("curve has a one-dimensional singular locus")]
    NonIsolatedSingularities,
    #[error("singular-point elimination failed to reach the required residual")]
    Elimination,
}

/// j-invariant extended to the boundary: Infinite for nodal-type
/// degenerations (Delta = 0 with (S, T) != 0), Undefined for cusps and worse
/// (S = T = 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtendedJ<K = Rat> {
    Finite(K),
    Infinite,
    Undefined,
}

impl<K> ExtendedJ<K> {
    pub fn as_finite(&self) -> Option<&K> {
        match self {
            ExtendedJ::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedJ::Infinite)
    }
}

impl Serialize for ExtendedJ<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtendedJ::Finite(v) => {
                let mut st = s.serialize_struct("ExtendedJ", 1)?;
                st.serialize_field("finite", &v.to_string())?;
                st.end()
            }
            ExtendedJ::Infinite => s.serialize_str("infinity"),
            ExtendedJ::Undefined => s.serialize_str("undefined"),
        }
    }
}

/// The invariants of one cubic. Delta is the frozen combination T^2 - S^3;
/// j depends only on the cubic up to scalar and linear substitution.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicInvariants<K = Rat> {
    pub s: K,
    pub t: K,
    pub delta: K,
    pub j: ExtendedJ<K>,
}

impl Serialize for CubicInvariants<Rat> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CubicInvariants", 4)?;
        st.serialize_field("s", &self.s.to_string())?;
        st.serialize_field("t", &self.t.to_string())?;
        st.serialize_field("delta", &self.delta.to_string())?;
        st.serialize_field("j", &self.j)?;
        st.end()
    }
}

fn eval_table<K: Ring>(table: &[([u8; 10], i64)], coeffs: &[K; 10]) -> K {
    let mut acc = K::zero();
    for (exps, c) in table {
        let mut term = K::from_int(*c);
        for (i, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                term = term * coeffs[i].clone();
            }
        }
        acc = acc + term;
    }
    acc
}

/// The degree-4 and degree-6 invariants (S, T) of a cubic, evaluated over
/// any coefficient ring (in particular over binary-form coefficients, where
/// the isobaric weights make the results homogeneous). Covariance:
/// S(F o g) = det(g)^4 S(F) and T(F o g) = det(g)^6 T(F).
pub fn aronhold<K: Ring>(f: &TernaryForm<K>) -> Result<(K, K), InvariantsError> {
    let coeffs = f
        .cubic_coefficients()
        .map_err(|_| InvariantsError::NotCubic(f.degree()))?;
    Ok((
        eval_table(tables::S_TERMS, &coeffs),
        eval_table(tables::T_TERMS, &coeffs),
    ))
}

/// Discriminant Delta = T^2 - S^3: zero iff the cubic is singular;
/// homogeneous of degree 12 in the coefficients with
/// Delta(F o g) = det(g)^12 Delta(F).
pub fn discriminant<K: Ring>(f: &TernaryForm<K>) -> Result<K, InvariantsError> {
    let (s, t) = aronhold(f)?;
    Ok(t.clone() * t - s.clone() * s.clone() * s)
}

/// Numerator scale of the j-invariant: j = J_NUMERATOR_SCALE * S^3 / Delta.
pub const J_NUMERATOR_SCALE: i64 = -1728;

pub fn cubic_invariants<K: Field>(
    f: &TernaryForm<K>,
) -> Result<CubicInvariants<K>, InvariantsError> {
    if f.is_zero() {
        return Err(InvariantsError::ZeroForm);
    }
    let (s, t) = aronhold(f)?;
    let delta = t.clone() * t.clone() - s.clone() * s.clone() * s.clone();
    let j = if !delta.is_zero() {
        let s3 = s.clone() * s.clone() * s.clone();
        let num = s3 * K::from_int(J_NUMERATOR_SCALE);
        ExtendedJ::Finite(num * delta.inv().expect("delta nonzero"))
    } else if s.is_zero() && t.is_zero() {
        ExtendedJ::Undefined
    } else {
        ExtendedJ::Infinite
    };
    Ok(CubicInvariants { s, t, delta, j })
}

pub fn j_invariant<K: Field>(f: &TernaryForm<K>) -> Result<ExtendedJ<K>, InvariantsError> {
    Ok(cubic_invariants(f)?.j)
}

/// Hessian cubic: determinant of the matrix of second partials.
pub fn hessian_cubic<K: Ring>(phi: &TernaryForm<K>) -> Result<TernaryForm<K>, InvariantsError> {
    if phi.degree() != 3 {
        return Err(InvariantsError::NotCubic(phi.degree()));
    }
    let second: Vec<Vec<TernaryForm<K>>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| phi.partial_derivative(i).partial_derivative(j))
                .collect()
        })
        .collect();
    const PERMS: [([usize; 3], bool); 6] = [
        ([0, 1, 2], true),
        ([1, 2, 0], true),
        ([2, 0, 1], true),
        ([0, 2, 1], false),
        ([1, 0, 2], false),
        ([2, 1, 0], false),
    ];
    let mut acc = TernaryForm::zero_form(3);
    for (perm, positive) in PERMS {
        let prod = second[0][perm[0]]
            .mul(&second[1][perm[1]])
            .mul(&second[2][perm[2]]);
        acc = if positive {
            acc.add(&prod)
        } else {
            acc.sub(&prod)
        };
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// singular points
// ---------------------------------------------------------------------------

/// A point of the projective plane, exact where the solve stayed rational.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectivePoint {
    Exact([Rat; 3]),
    Approx([CplxApprox; 3]),
}

impl ProjectivePoint {
    pub fn to_complex(&self) -> [CplxApprox; 3] {
        match self {
            ProjectivePoint::Exact(p) => [0, 1, 2].map(|i| CplxApprox::new(rat_to_f64(&p[i]), 0.0)),
            ProjectivePoint::Approx(p) => *p,
        }
    }

    /// Scales so the largest coordinate has modulus 1 (exact points: first
    /// nonzero coordinate 1).
    fn normalized(self) -> Self {
        match self {
            ProjectivePoint::Exact(p) => {
                let pivot = p.iter().find(|c| !c.is_zero()).expect("nonzero point");
                let inv = Rat::one() / pivot;
                ProjectivePoint::Exact([0, 1, 2].map(|i| &p[i] * &inv))
            }
            ProjectivePoint::Approx(p) => {
                let (k, _) = p
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
                    .unwrap();
                let inv = CplxApprox::new(1.0, 0.0) / p[k];
                ProjectivePoint::Approx([0, 1, 2].map(|i| p[i] * inv))
            }
        }
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ProjectivePoint::Exact(p) => {
                let strs: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                let mut st = s.serialize_struct("ProjectivePoint", 1)?;
                st.serialize_field("exact", &strs)?;
                st.end()
            }
            ProjectivePoint::Approx(p) => {
                let pairs: Vec<[f64; 2]> = p.iter().map(|c| [c.re, c.im]).collect();
                let mut st = s.serialize_struct("ProjectivePoint", 1)?;
                st.serialize_field("approx", &pairs)?;
                st.end()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingularityKind {
    Smooth,
    Node,
    Cusp,
    Other,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularityReport {
    pub kind: SingularityKind,
    pub points: Vec<ProjectivePoint>,
    /// Set when the singular locus is one-dimensional (repeated linear
    /// factor); `points` is empty in that case.
    pub one_dimensional_locus: bool,
}

const SINGULAR_RESIDUAL_TOL: f64 = 1e-9;

/// Common projective zeros of the three partial derivatives of a cubic.
/// Solves by resultant elimination after a deterministic random rational
/// coordinate change (undone on output); returns exact points where the
/// elimination stays rational, numeric points (scaled residual < 1e-9)
/// otherwise. A one-dimensional singular locus is reported as an error.
pub fn singular_points(f: &TernaryForm<Rat>) -> Result<Vec<ProjectivePoint>, InvariantsError> {
    if f.degree() != 3 {
        return Err(InvariantsError::NotCubic(f.degree()));
    }
    if f.is_zero() {
        return Err(InvariantsError::ZeroForm);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0x5EED_0001);
    let mut one_dim_votes = 0usize;
    for _attempt in 0..8 {
        let g = random_gl3(&mut rng);
        match singular_points_with_change(f, &g) {
            Ok(points) => return Ok(points),
            Err(SolveOutcome::OneDimensional) => {
                one_dim_votes += 1;
                if one_dim_votes >= 2 {
                    return Err(InvariantsError::NonIsolatedSingularities);
                }
            }
            Err(SolveOutcome::Degenerate) => {}
        }
    }
    Err(InvariantsError::Elimination)
}

enum SolveOutcome {
    OneDimensional,
    Degenerate,
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

fn mat_apply(g: &[[Rat; 3]; 3], v: &[CplxApprox; 3]) -> [CplxApprox; 3] {
    std::array::from_fn(|i| {
        (0..3)
            .map(|j| CplxApprox::new(rat_to_f64(&g[i][j]), 0.0) * v[j])
            .sum()
    })
}

fn mat_apply_exact(g: &[[Rat; 3]; 3], v: &[Rat; 3]) -> [Rat; 3] {
    std::array::from_fn(|i| {
        (0..3)
            .map(|j| &g[i][j] * &v[j])
            .fold(Rat::zero(), |a, b| a + b)
    })
}

fn singular_points_with_change(
    f: &TernaryForm<Rat>,
    g: &[[Rat; 3]; 3],
) -> Result<Vec<ProjectivePoint>, SolveOutcome> {
    let h = f.substitute(g);
    let partials: Vec<TernaryForm<Rat>> = (0..3).map(|v| h.partial_derivative(v)).collect();
    // require each partial to have a genuine c^2 term so c-elimination is clean
    for p in &partials {
        if p.coeff((0, 0, 2)).is_zero() {
            return Err(SolveOutcome::Degenerate);
        }
    }
    let pc: Vec<UniPoly<BiPoly>> = partials.iter().map(|p| p.as_poly_in_third()).collect();
    let r1 = resultant_ring(&pc[0], &pc[1]).map_err(|_| SolveOutcome::Degenerate)?;
    let r2 = resultant_ring(&pc[0], &pc[2]).map_err(|_| SolveOutcome::Degenerate)?;
    let b1 = BinaryForm::from_bipoly(&r1).expect("resultant of forms is homogeneous");
    let b2 = BinaryForm::from_bipoly(&r2).expect("resultant of forms is homogeneous");
    match (b1.is_zero(), b2.is_zero()) {
        (true, true) => return Err(SolveOutcome::OneDimensional),
        (false, false) => {}
        _ => return Err(SolveOutcome::Degenerate),
    }
    let gcd = BinaryForm::gcd(&b1, &b2).map_err(|_| SolveOutcome::Degenerate)?;
    if gcd.degree() == 0 {
        return Ok(Vec::new()); // smooth: no common root
    }
    // a common root at a = 0 sits outside the a = 1 chart: retry with a
    // different coordinate change
    if gcd.infinity_multiplicity() > 0 {
        return Err(SolveOutcome::Degenerate);
    }
    let core = gcd.dehomogenize();
    // a singular point s of h = f o g maps to the singular point g s of f
    let mut points: Vec<ProjectivePoint> = Vec::new();
    for (factor, _mult) in core
        .squarefree_decomposition()
        .map_err(|_| SolveOutcome::Degenerate)?
    {
        if factor.degree() == 1 {
            let b_val = -factor.coeff(0);
            let triple = match triple_gcd_at(&partials, &b_val) {
                Some(t) => t,
                None => return Err(SolveOutcome::Degenerate),
            };
            if triple.is_constant() {
                continue; // spurious resultant root, no common zero here
            }
            // the square-free part has degree 1 exactly when the common
            // c-value is rational (possibly as a repeated root, e.g. when
            // the elimination line is tangent)
            let sf = squarefree_part(&triple).ok_or(SolveOutcome::Degenerate)?;
            if sf.degree() == 1 {
                let c_val = -sf.coeff(0);
                let p = [Rat::one(), b_val, c_val];
                points.push(ProjectivePoint::Exact(mat_apply_exact(g, &p)).normalized());
            } else {
                // conjugate c values over a rational (a:b)
                let found =
                    numeric_c_candidates(&partials, CplxApprox::new(rat_to_f64(&b_val), 0.0));
                if found.is_empty() {
                    return Err(SolveOutcome::Degenerate);
                }
                for c_val in found {
                    let p = [
                        CplxApprox::new(1.0, 0.0),
                        CplxApprox::new(rat_to_f64(&b_val), 0.0),
                        c_val,
                    ];
                    points.push(ProjectivePoint::Approx(mat_apply(g, &p)).normalized());
                }
            }
        } else {
            let broots =
                roots::complex_roots(&factor, 1e-13).map_err(|_| SolveOutcome::Degenerate)?;
            for b_val in broots {
                // spurious roots find no common c and are skipped
                for c_val in numeric_c_candidates(&partials, b_val) {
                    let p = [CplxApprox::new(1.0, 0.0), b_val, c_val];
                    points.push(ProjectivePoint::Approx(mat_apply(g, &p)).normalized());
                }
            }
        }
    }
    // residual check on the original cubic's gradient
    let orig_partials: Vec<TernaryForm<Rat>> = (0..3).map(|v| f.partial_derivative(v)).collect();
    for pt in &points {
        let z = pt.to_complex();
        let scale = z.iter().map(|c| c.norm()).fold(0.0, f64::max).powi(2);
        for p in &orig_partials {
            let val = eval_complex(p, &z);
            if val.norm() > SINGULAR_RESIDUAL_TOL * scale.max(1e-30) * form_scale(p) {
                return Err(SolveOutcome::Degenerate);
            }
        }
    }
    points.dedup_by(|a, b| point_distance(a, b) < 1e-8);
    Ok(points)
}

/// Gcd in c of the three partials specialized at (1 : b : c).
fn triple_gcd_at(partials: &[TernaryForm<Rat>], b: &Rat) -> Option<UniPoly<Rat>> {
    let mut gcd: Option<UniPoly<Rat>> = None;
    for p in partials {
        let spec = specialize_ab(p, b);
        gcd = Some(match gcd {
            None => spec,
            Some(g) => UniPoly::gcd(&g, &spec).ok()?,
        });
    }
    gcd
}

fn squarefree_part(f: &UniPoly<Rat>) -> Option<UniPoly<Rat>> {
    if f.is_constant() {
        return Some(f.clone());
    }
    let g = UniPoly::gcd(f, &f.derivative()).ok()?;
    Some(f.exact_div(&g).monic())
}

/// Specializes a form at (a, b, c) = (1, b, c) as a polynomial in c.
fn specialize_ab(f: &TernaryForm<Rat>, b: &Rat) -> UniPoly<Rat> {
    let deg = f.degree();
    let mut coeffs = vec![Rat::zero(); deg + 1];
    for (&(_i, j, k), c) in f.terms() {
        let mut term = c.clone();
        for _ in 0..j {
            term *= b;
        }
        coeffs[k as usize] += term;
    }
    UniPoly::new(coeffs)
}

fn eval_complex(f: &TernaryForm<Rat>, p: &[CplxApprox; 3]) -> CplxApprox {
    let mut acc = CplxApprox::zero();
    for (&(i, j, k), c) in f.terms() {
        acc += rat_to_f64(c) * p[0].powu(i as u32) * p[1].powu(j as u32) * p[2].powu(k as u32);
    }
    acc
}

fn form_scale(f: &TernaryForm<Rat>) -> f64 {
    f.terms()
        .map(|(_, c)| rat_to_f64(c).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE)
}

fn numeric_c_candidates(partials: &[TernaryForm<Rat>], b: CplxApprox) -> Vec<CplxApprox> {
    // roots of the first partial in c, filtered by the other two
    let quad: Vec<CplxApprox> = {
        let p = &partials[0];
        let mut coeffs = vec![CplxApprox::zero(); p.degree() + 1];
        for (&(_i, j, k), c) in p.terms() {
            coeffs[k as usize] += rat_to_f64(c) * b.powu(j as u32);
        }
        while coeffs.last().is_some_and(|c| c.norm() < 1e-14) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Vec::new();
        }
        match roots::durand_kerner(&coeffs, 1e-13) {
            Ok(r) => r,
            Err(_) => return Vec::new(),
        }
    };
    let mut out = Vec::new();
    for c_val in quad {
        let p = [CplxApprox::new(1.0, 0.0), b, c_val];
        let ok = partials.iter().all(|f| {
            eval_complex(f, &p).norm()
                <= 1e-7 * form_scale(f) * p.iter().map(|z| z.norm()).fold(1.0, f64::max).powi(2)
        });
        if ok {
            // polish on the full gradient system, then re-verify
            let polished = polish_gradient(partials, p);
            let ok2 = partials.iter().all(|f| {
                eval_complex(f, &polished).norm() <= SINGULAR_RESIDUAL_TOL * form_scale(f)
            });
            if ok2 {
                out.push(polished[2] / polished[0]);
            }
        }
    }
    out.dedup_by(|x, y| (*x - *y).norm() < 1e-10);
    out
}

/// Gauss-Newton on the gradient system in the chart normalizing the first
/// coordinate.
fn polish_gradient(partials: &[TernaryForm<Rat>], mut p: [CplxApprox; 3]) -> [CplxApprox; 3] {
    for _ in 0..6 {
        // residuals and Jacobian w.r.t. (p1, p2)
        let f0 = eval_complex(&partials[0], &p);
        let f1 = eval_complex(&partials[1], &p);
        let f2 = eval_complex(&partials[2], &p);
        let jac: Vec<Vec<CplxApprox>> = partials
            .iter()
            .map(|f| {
                vec![
                    eval_complex(&f.partial_derivative(1), &p),
                    eval_complex(&f.partial_derivative(2), &p),
                ]
            })
            .collect();
        // normal equations (J^H J) dx = J^H r
        let mut a = vec![vec![CplxApprox::zero(); 2]; 2];
        let mut rhs = vec![CplxApprox::zero(); 2];
        let res = [f0, f1, f2];
        for (row, r) in jac.iter().zip(res.iter()) {
            for i in 0..2 {
                for j in 0..2 {
                    a[i][j] += row[i].conj() * row[j];
                }
                rhs[i] += row[i].conj() * r;
            }
        }
        let Some(dx) = roots::solve_complex(&a, &rhs) else {
            break;
        };
        p[1] -= dx[0];
        p[2] -= dx[1];
    }
    p
}

/// Classifies an isolated singular point by the rank of the local quadratic
/// part: two distinct tangent lines (Node), a repeated one (Cusp), or a
/// vanishing quadratic part (Other).
pub fn classify_singularity(
    f: &TernaryForm<Rat>,
    p: &ProjectivePoint,
) -> Result<SingularityKind, InvariantsError> {
    match p {
        ProjectivePoint::Exact(pt) => classify_exact(f, pt),
        ProjectivePoint::Approx(pt) => classify_numeric(f, pt),
    }
}

fn classify_exact(f: &TernaryForm<Rat>, p: &[Rat; 3]) -> Result<SingularityKind, InvariantsError> {
    let m = p
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(InvariantsError::NotSingular)?;
    // columns: p itself, then the two other coordinate directions
    let others: Vec<usize> = (0..3).filter(|&i| i != m).collect();
    let g: [[Rat; 3]; 3] = std::array::from_fn(|r| {
        let mut row = [Rat::zero(), Rat::zero(), Rat::zero()];
        row[0] = p[r].clone();
        if r == others[0] {
            row[1] = Rat::one();
        }
        if r == others[1] {
            row[2] = Rat::one();
        }
        row
    });
    let local = f.substitute(&g);
    // on the curve and singular there: u0^3 and u0^2-linear parts must vanish
    if !local.coeff((3, 0, 0)).is_zero()
        || !local.coeff((2, 1, 0)).is_zero()
        || !local.coeff((2, 0, 1)).is_zero()
    {
        return Err(InvariantsError::NotSingular);
    }
    let alpha = local.coeff((1, 2, 0));
    let beta = local.coeff((1, 1, 1));
    let gamma = local.coeff((1, 0, 2));
    let disc = &beta * &beta - rat_int(4) * &alpha * &gamma;
    Ok(if !disc.is_zero() {
        SingularityKind::Node
    } else if !alpha.is_zero() || !beta.is_zero() || !gamma.is_zero() {
        SingularityKind::Cusp
    } else {
        SingularityKind::Other
    })
}

fn classify_numeric(
    f: &TernaryForm<Rat>,
    p: &[CplxApprox; 3],
) -> Result<SingularityKind, InvariantsError> {
    let scale = form_scale(f);
    for v in 0..3 {
        if eval_complex(&f.partial_derivative(v), p).norm() > 1e-6 * scale {
            return Err(InvariantsError::NotSingular);
        }
    }
    // quadratic part along two directions orthogonal to p
    let dirs = complement_dirs(p);
    let second: Vec<Vec<CplxApprox>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| eval_complex(&f.partial_derivative(i).partial_derivative(j), p))
                .collect()
        })
        .collect();
    let mut q = [[CplxApprox::zero(); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    q[a][b] += dirs[a][i] * second[i][j] * dirs[b][j];
                }
            }
        }
    }
    let disc = q[0][1] * q[1][0] - q[0][0] * q[1][1];
    let qscale = q.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(if qscale < 1e-7 * scale {
        SingularityKind::Other
    } else if disc.norm() > 1e-7 * qscale * qscale {
        SingularityKind::Node
    } else {
        SingularityKind::Cusp
    })
}

fn complement_dirs(p: &[CplxApprox; 3]) -> [[CplxApprox; 3]; 2] {
    let mut basis: Vec<[CplxApprox; 3]> = Vec::new();
    for i in 0..3 {
        let mut e = [CplxApprox::zero(); 3];
        e[i] = CplxApprox::new(1.0, 0.0);
        basis.push(e);
    }
    // drop the coordinate with the largest |p_i| and orthogonalize the rest
    let (k, _) = p
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().partial_cmp(&b.1.norm()).unwrap())
        .unwrap();
    basis.remove(k);
    let pn: f64 = p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let unit: Vec<CplxApprox> = p.iter().map(|c| c / pn).collect();
    let mut out = [[CplxApprox::zero(); 3]; 2];
    for (slot, e) in basis.into_iter().enumerate() {
        let overlap: CplxApprox = e.iter().zip(&unit).map(|(a, b)| a * b.conj()).sum();
        for i in 0..3 {
            out[slot][i] = e[i] - overlap * unit[i];
        }
    }
    out
}

/// Full report: Smooth iff the discriminant is nonzero iff no singular
/// points; otherwise the worst singularity kind found.
pub fn singularity_report(f: &TernaryForm<Rat>) -> Result<SingularityReport, InvariantsError> {
    match singular_points(f) {
        Err(InvariantsError::NonIsolatedSingularities) => Ok(SingularityReport {
            kind: SingularityKind::Other,
            points: Vec::new(),
            one_dimensional_locus: true,
        }),
        Err(e) => Err(e),
        Ok(points) => {
            if points.is_empty() {
                return Ok(SingularityReport {
                    kind: SingularityKind::Smooth,
                    points,
                    one_dimensional_locus: false,
                });
            }
            let mut kind = SingularityKind::Node;
            for p in &points {
                match classify_singularity(f, p)? {
                    SingularityKind::Other => kind = SingularityKind::Other,
                    SingularityKind::Cusp if kind == SingularityKind::Node => {
                        kind = SingularityKind::Cusp
                    }
                    _ => {}
                }
            }
            Ok(SingularityReport {
                kind,
                points,
                one_dimensional_locus: false,
            })
        }
    }
}

fn point_distance(a: &ProjectivePoint, b: &ProjectivePoint) -> f64 {
    // distance up to projective scale: 1 - |<a, b>| / (|a||b|)
    let pa = a.to_complex();
    let pb = b.to_complex();
    let dot: CplxApprox = pa.iter().zip(&pb).map(|(x, y)| x * y.conj()).sum();
    let na: f64 = pa.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = pb.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    1.0 - dot.norm() / (na * nb).max(f64::MIN_POSITIVE)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::ternary::{parse_form, VarSet};

    fn f(s: &str) -> TernaryForm<Rat> {
        parse_form(s, VarSet::Xyz).unwrap()
    }

    #[test]
    fn weierstrass_anchor_j_1728() {
        // a = 1, b = 0: j = 1728 * 4 / 4 = 1728
        let w = f("y^2*z - x^3 - x*z^2");
        let inv = cubic_invariants(&w).unwrap();
        assert_eq!(inv.s, rat_int(-48));
        assert_eq!(inv.t, rat_int(0));
        assert_eq!(inv.j, ExtendedJ::Finite(rat_int(1728)));
    }

    #[test]
    fn fermat_has_s_zero_and_j_zero() {
        let inv = cubic_invariants(&f("x^3 + y^3 + z^3")).unwrap();
        assert_eq!(inv.s, rat_int(0));
        assert_eq!(inv.t, rat_int(-5832));
        assert_eq!(inv.j, ExtendedJ::Finite(rat_int(0)));
        assert!(!inv.delta.is_zero());
    }

    #[test]
    fn hesse_lambda_one_j_value() {
        // j of x^3+y^3+z^3+3xyz is -27 * 1 * (1 - 8)^3 / (1 + 1)^3 = 9261/8
        let inv = cubic_invariants(&f("x^3 + y^3 + z^3 + 3*x*y*z")).unwrap();
        assert_eq!(inv.j, ExtendedJ::Finite(rat(9261, 8)));
    }

    #[test]
    fn nodal_cubic_j_infinite() {
        let nodal = f("-y^3 - z^3 + x*y*z");
        let inv = cubic_invariants(&nodal).unwrap();
        assert!(inv.delta.is_zero());
        assert_eq!(inv.j, ExtendedJ::Infinite);
        // discriminant via the public entry point too
        assert!(discriminant(&nodal).unwrap().is_zero());
    }

    #[test]
    fn cuspidal_cubic_j_undefined() {
        let inv = cubic_invariants(&f("y^2*z - x^3")).unwrap();
        assert!(inv.s.is_zero() && inv.t.is_zero());
        assert_eq!(inv.j, ExtendedJ::Undefined);
    }

    #[test]
    fn covariance_under_scaling() {
        let phi = f("x^3 + 2*x^2*y - 5*y^2*z + z^3 + x*y*z");
        let (s, t) = aronhold(&phi).unwrap();
        // diag(1, 1, 2): det = 2, so S scales by 2^4 and T by 2^6
        let g = [
            [rat_int(1), rat_int(0), rat_int(0)],
            [rat_int(0), rat_int(1), rat_int(0)],
            [rat_int(0), rat_int(0), rat_int(2)],
        ];
        let (s2, t2) = aronhold(&phi.substitute(&g)).unwrap();
        assert_eq!(s2, &s * rat_int(16));
        assert_eq!(t2, &t * rat_int(64));
        // rescaling the form: S ~ mu^4, T ~ mu^6
        let mu = rat(2, 3);
        let (s3, t3) = aronhold(&phi.scale(&mu)).unwrap();
        assert_eq!(s3, s * &mu * &mu * &mu * &mu);
        assert_eq!(t3, t * &mu * &mu * &mu * &mu * &mu * &mu);
    }

    #[test]
    fn hessian_examples() {
        assert_eq!(
            hessian_cubic(&f("x^3 + y^3 + z^3")).unwrap(),
            f("216*x*y*z")
        );
        assert_eq!(hessian_cubic(&f("x*y*z")).unwrap(), f("2*x*y*z"));
        let h = hessian_cubic(&f("x^3 + y^3 + z^3 + 3*x*y*z")).unwrap();
        assert_eq!(h, f("270*x*y*z - 54*x^3 - 54*y^3 - 54*z^3"));
    }

    #[test]
    fn singular_points_node_at_100() {
        // -b^3 - c^3 + abc, written in (x, y, z)
        let nodal = f("-y^3 - z^3 + x*y*z");
        let pts = singular_points(&nodal).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            pts[0],
            ProjectivePoint::Exact([Rat::one(), Rat::zero(), Rat::zero()])
        );
        assert_eq!(
            classify_singularity(&nodal, &pts[0]).unwrap(),
            SingularityKind::Node
        );
    }

    #[test]
    fn singular_points_smooth_and_triangle() {
        assert!(singular_points(&f("x^3 + y^3 + z^3")).unwrap().is_empty());
        let tri = f("x*y*z");
        let pts = singular_points(&tri).unwrap();
        assert_eq!(pts.len(), 3);
        for p in &pts {
            assert_eq!(
                classify_singularity(&tri, p).unwrap(),
                SingularityKind::Node
            );
        }
    }

    #[test]
    fn cusp_classified() {
        let cusp = f("y^2*z - x^3");
        let pts = singular_points(&cusp).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(
            pts[0],
            ProjectivePoint::Exact([Rat::zero(), Rat::zero(), Rat::one()])
        );
        assert_eq!(
            classify_singularity(&cusp, &pts[0]).unwrap(),
            SingularityKind::Cusp
        );
    }

    #[test]
    fn repeated_line_flagged_one_dimensional() {
        let rep = f("x^2*y");
        assert_eq!(
            singular_points(&rep),
            Err(InvariantsError::NonIsolatedSingularities)
        );
        let report = singularity_report(&rep).unwrap();
        assert!(report.one_dimensional_locus);
        assert_eq!(report.kind, SingularityKind::Other);
    }

    #[test]
    fn classify_rejects_smooth_point() {
        let c = f("x^3 + y^3 + z^3");
        let p = ProjectivePoint::Exact([Rat::one(), -Rat::one(), Rat::zero()]);
        assert_eq!(
            classify_singularity(&c, &p),
            Err(InvariantsError::NotSingular)
        );
    }

    #[test]
    fn extended_j_serialization() {
        assert_eq!(
            serde_json::to_string(&ExtendedJ::Finite(rat(22, 7))).unwrap(),
            r#"{"finite":"22/7"}"#
        );
        assert_eq!(
            serde_json::to_string(&ExtendedJ::<Rat>::Infinite).unwrap(),
            r#""infinity""#
        );
        assert_eq!(
            serde_json::to_string(&ExtendedJ::<Rat>::Undefined).unwrap(),
            r#""undefined""#
        );
    }
}
