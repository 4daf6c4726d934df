//! The Hesse pencil x^3 + y^3 + z^3 + 3*lambda*xyz: its j-invariant in
//! closed form, the associated Jacobian nets, the exact Hessian j-identity
//! check, and the root analysis of the fiber cubic
//! f_b(j) = (6912 - j)^3 - 27 b j^2.

use crate::invariants::{j_invariant, ExtendedJ, InvariantsError};
use crate::roots::{self, RootError};
use crate::scalar::{rat_int, CplxApprox, EisRat, Field, Rat, Ring};
use crate::ternary::{jacobian_net, Net, TernaryError, TernaryForm};
use crate::unipoly::{resultant_ring, MultiplicityProfile, UniPoly, UniPolyError};
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HesseError {
    #[error("lambda gives a singular pencil member (lambda^3 = -1)")]
    SingularMember,
    #[error("formula pole: j(phi_lambda) = 0 at this lambda")]
    FormulaPole,
    #[error("invariant computation failed: {0}")]
    Invariants(#[from] InvariantsError),
    #[error("net construction failed: {0}")]
    Ternary(#[from] TernaryError),
    #[error("polynomial computation failed: {0}")]
    UniPoly(#[from] UniPolyError),
    #[error("root finding failed: {0}")]
    Roots(#[from] RootError),
}

/// A pencil parameter with its exclusion flag. Excluded values (singular
/// members and the Fermat-equivalent ones) may still be used to build
/// objects; only the identity checks refuse them.
#[derive(Debug, Clone, PartialEq)]
pub struct HesseParam {
    pub lambda: Rat,
    pub excluded: bool,
}

impl HesseParam {
    pub fn new(lambda: Rat) -> Self {
        let excluded = [rat_int(-1), rat_int(0), rat_int(2)].contains(&lambda);
        HesseParam { lambda, excluded }
    }
}

/// Exclusion test over Q(w): lambda in {-1, -w, -w^2, 0, 2, 2w, 2w^2}.
pub fn is_excluded_eis(lambda: &EisRat) -> bool {
    let w = EisRat::omega();
    let w2 = w.clone() * w.clone();
    [
        EisRat::from_int(-1),
        -w.clone(),
        -w2.clone(),
        EisRat::zero(),
        EisRat::from_int(2),
        EisRat::from_int(2) * w,
        EisRat::from_int(2) * w2,
    ]
    .contains(lambda)
}

/// The pencil cubic x^3 + y^3 + z^3 + 3*lambda*xyz.
pub fn hesse_cubic<K: Ring>(lambda: &K) -> TernaryForm<K> {
    TernaryForm::from_terms(
        3,
        [
            ((3, 0, 0), K::one()),
            ((0, 3, 0), K::one()),
            ((0, 0, 3), K::one()),
            ((1, 1, 1), K::from_int(3) * lambda.clone()),
        ],
    )
}

/// Closed form for j of the pencil member:
/// j(lambda) = -27 lambda^3 (lambda^3 - 8)^3 / (lambda^3 + 1)^3,
/// using (lambda + 1)(lambda + w)(lambda + w^2) = lambda^3 + 1 to stay in Q.
pub fn hesse_j(lambda: &Rat) -> Result<Rat, HesseError> {
    let l3 = lambda * lambda * lambda;
    let den = &l3 + Rat::one();
    if den.is_zero() {
        return Err(HesseError::SingularMember);
    }
    let num = &l3 * (&l3 - rat_int(8)).pow(3) * rat_int(-27);
    Ok(num / den.pow(3))
}

/// The Jacobian net of the pencil member: <x^2 + l yz, y^2 + l xz, z^2 + l xy>.
pub fn w_lambda<K: Field>(lambda: &K) -> Result<Net<K>, TernaryError> {
    jacobian_net(&hesse_cubic(lambda))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HessianIdentityReport {
    pub lambda: Rat,
    pub j_phi: Rat,
    pub j_gamma: Rat,
    pub rhs: Rat,
    pub equal: bool,
}

impl Serialize for HessianIdentityReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HessianIdentityReport", 5)?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        st.serialize_field("j_phi", &self.j_phi.to_string())?;
        st.serialize_field("j_gamma", &self.j_gamma.to_string())?;
        st.serialize_field("rhs", &self.rhs.to_string())?;
        st.serialize_field("equal", &self.equal)?;
        st.end()
    }
}

/// Exact check of j(Gamma(W_lambda)) = (6912 - j)^3 / (27 j^2) with
/// j = j(phi_lambda); refuses the singular members and the j = 0 pole.
pub fn hessian_identity_check(lambda: &Rat) -> Result<HessianIdentityReport, HesseError> {
    let l3 = lambda * lambda * lambda;
    if (&l3 + Rat::one()).is_zero() {
        return Err(HesseError::SingularMember);
    }
    let phi = hesse_cubic(lambda);
    let j_phi = match j_invariant(&phi)? {
        ExtendedJ::Finite(j) => j,
        _ => return Err(HesseError::SingularMember),
    };
    if j_phi.is_zero() {
        return Err(HesseError::FormulaPole);
    }
    let net = w_lambda(lambda)?;
    let gamma = net.discriminant_cubic();
    let j_gamma = match j_invariant(&gamma)? {
        ExtendedJ::Finite(j) => j,
        _ => return Err(HesseError::SingularMember),
    };
    let six912 = rat_int(6912);
    let rhs = (&six912 - &j_phi).pow(3) / (rat_int(27) * &j_phi * &j_phi);
    let equal = j_gamma == rhs;
    Ok(HessianIdentityReport {
        lambda: lambda.clone(),
        j_phi,
        j_gamma,
        rhs,
        equal,
    })
}

/// The fiber cubic f_b(j) = (6912 - j)^3 - 27 b j^2, ascending in j.
pub fn fb_poly(b: &Rat) -> UniPoly<Rat> {
    let c = rat_int(6912);
    UniPoly::new(vec![
        &c * &c * &c,
        rat_int(-3) * &c * &c,
        rat_int(3) * &c - rat_int(27) * b,
        rat_int(-1),
    ])
}

#[derive(Debug, Clone, PartialEq)]
pub struct FbAnalysis {
    pub b: Rat,
    pub profile: MultiplicityProfile,
    /// Monic square-free factors with multiplicities.
    pub factors: Vec<(UniPoly<Rat>, usize)>,
    /// Exact rational roots with multiplicities (complete here: the
    /// square-free factors of f_b have degree <= 3, and repeated-root cases
    /// split into linear factors).
    pub rational_roots: Vec<(Rat, usize)>,
}

/// Square-free profile and rational roots of f_b.
pub fn fb_root_analysis(b: &Rat) -> Result<FbAnalysis, HesseError> {
    let f = fb_poly(b);
    let factors = f.squarefree_decomposition()?;
    let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
    for (factor, mult) in &factors {
        *counts.entry(*mult).or_default() += factor.degree();
    }
    let rational_roots = f.small_rational_roots()?;
    Ok(FbAnalysis {
        b: b.clone(),
        profile: MultiplicityProfile(counts.into_iter().collect()),
        factors,
        rational_roots,
    })
}

/// Parameters b at which f_b has a repeated root: the rational roots of
/// disc_j(f_b), which is a cubic in b proportional to b^2 (b - 1728).
pub fn fb_critical_b() -> Result<Vec<Rat>, HesseError> {
    // f_b over Q[b]: coefficients of j^k are polynomials in b
    let c = rat_int(6912);
    let f: UniPoly<UniPoly<Rat>> = UniPoly::new(vec![
        UniPoly::constant(&c * &c * &c),
        UniPoly::constant(rat_int(-3) * &c * &c),
        UniPoly::new(vec![rat_int(3) * &c, rat_int(-27)]),
        UniPoly::constant(rat_int(-1)),
    ]);
    let disc = resultant_ring(&f, &f.derivative())?;
    assert!(
        !disc.is_zero(),
        "discriminant of the fiber family is nonzero"
    );
    let mut roots: Vec<Rat> = disc
        .small_rational_roots()?
        .into_iter()
        .map(|(r, _)| r)
        .collect();
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// One root of f_b seen as an orbit-closure component of the fiber.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberComponent {
    /// Exact value when the root is rational.
    pub rational: Option<String>,
    pub approx: [f64; 2],
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberDecomposition {
    pub components: Vec<FiberComponent>,
    /// Sum of multiplicities, always 3 (the degree of f_b).
    pub total_multiplicity: usize,
    /// Total class in units of sigma_1: 4 per component multiplicity, = 12.
    pub class_total: usize,
}

/// Decomposes the fiber over b as a weighted sum of orbit closures, one per
/// root of f_b with the root's multiplicity as weight; each closure
/// contributes 4 to the class, for a total of 12.
pub fn fiber_decomposition(b: &Rat) -> Result<FiberDecomposition, HesseError> {
    let analysis = fb_root_analysis(b)?;
    let mut components = Vec::new();
    for (factor, mult) in &analysis.factors {
        if factor.degree() == 1 {
            let root = -factor.coeff(0);
            let approx = crate::scalar::rat_to_f64(&root);
            components.push(FiberComponent {
                rational: Some(root.to_string()),
                approx: [approx, 0.0],
                multiplicity: *mult,
            });
        } else {
            for z in roots::complex_roots(factor, 1e-12)? {
                components.push(FiberComponent {
                    rational: None,
                    approx: [z.re, z.im],
                    multiplicity: *mult,
                });
            }
        }
    }
    let total: usize = components.iter().map(|c| c.multiplicity).sum();
    Ok(FiberDecomposition {
        components,
        total_multiplicity: total,
        class_total: 4 * total,
    })
}

/// Numeric j-image of the closed-form map, for cross-checking fiber roots.
pub fn hesse_j_complex(x: CplxApprox) -> CplxApprox {
    let x3 = x * x * x;
    -27.0 * x3 * (x3 - 8.0).powu(3) / (x3 + 1.0).powu(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::ternary::{parse_form, Conic, VarSet};

    #[test]
    fn hesse_cubic_examples() {
        assert_eq!(
            hesse_cubic(&rat_int(0)),
            parse_form("x^3 + y^3 + z^3", VarSet::Xyz).unwrap()
        );
        assert_eq!(
            hesse_cubic(&rat_int(1)),
            parse_form("x^3 + y^3 + z^3 + 3*x*y*z", VarSet::Xyz).unwrap()
        );
        // symmetric under variable swaps
        let phi = hesse_cubic(&rat(5, 3));
        let swap = [
            [rat_int(0), rat_int(1), rat_int(0)],
            [rat_int(1), rat_int(0), rat_int(0)],
            [rat_int(0), rat_int(0), rat_int(1)],
        ];
        assert_eq!(phi.substitute(&swap), phi);
    }

    #[test]
    fn hesse_j_matches_invariant_route() {
        // the closed form and the S/T route agree exactly; lambda = 1 gives 9261/8
        assert_eq!(hesse_j(&rat_int(1)).unwrap(), rat(9261, 8));
        for l in [rat_int(3), rat(7, 2), rat(-4, 5), rat_int(5)] {
            let closed = hesse_j(&l).unwrap();
            let via_inv = j_invariant(&hesse_cubic(&l)).unwrap();
            assert_eq!(via_inv, ExtendedJ::Finite(closed));
        }
        assert_eq!(hesse_j(&rat_int(-1)), Err(HesseError::SingularMember));
        // excluded-but-constructible values map to j = 0
        assert_eq!(hesse_j(&rat_int(0)).unwrap(), rat_int(0));
        assert_eq!(hesse_j(&rat_int(2)).unwrap(), rat_int(0));
        assert!(HesseParam::new(rat_int(0)).excluded);
        assert!(HesseParam::new(rat_int(2)).excluded);
        assert!(!HesseParam::new(rat_int(1)).excluded);
    }

    #[test]
    fn factored_denominator_identity_in_eis() {
        // (lambda + 1)(lambda + w)(lambda + w^2) = lambda^3 + 1 over Q(w)
        let w = EisRat::omega();
        let w2 = w.clone() * w.clone();
        for l in [rat_int(1), rat(3, 4), rat_int(-7)] {
            let le = EisRat::from(l.clone());
            let prod =
                (le.clone() + EisRat::one()) * (le.clone() + w.clone()) * (le.clone() + w2.clone());
            let expect = EisRat::from(&l * &l * &l + Rat::one());
            assert_eq!(prod, expect);
        }
    }

    #[test]
    fn w_lambda_matches_displayed_basis() {
        let net = w_lambda(&rat_int(1)).unwrap();
        for q in ["x^2 + y*z", "y^2 + x*z", "z^2 + x*y"] {
            let conic = Conic::new(parse_form(q, VarSet::Xyz).unwrap()).unwrap();
            assert!(net.contains(&conic));
        }
        // x^2 itself is not in W_lambda for lambda != 0
        let x2 = Conic::new(parse_form("x^2", VarSet::Xyz).unwrap()).unwrap();
        assert!(!net.contains(&x2));
    }

    #[test]
    fn hessian_identity_exact_at_small_lambdas() {
        for l in [rat_int(1), rat_int(3), rat(5, 2), rat_int(-4)] {
            let report = hessian_identity_check(&l).unwrap();
            assert!(report.equal, "identity failed at lambda = {l}");
            assert_eq!(report.j_gamma, report.rhs);
        }
        assert_eq!(
            hessian_identity_check(&rat_int(0)),
            Err(HesseError::FormulaPole)
        );
        assert_eq!(
            hessian_identity_check(&rat_int(2)),
            Err(HesseError::FormulaPole)
        );
        assert_eq!(
            hessian_identity_check(&rat_int(-1)),
            Err(HesseError::SingularMember)
        );
    }

    #[test]
    fn fb_poly_shape() {
        let f = fb_poly(&rat_int(0));
        assert_eq!(f.degree(), 3);
        assert_eq!(f.coeff(3), rat_int(-1));
        // f_b(6912) = -27 b 6912^2
        let b = rat(7, 3);
        let fb = fb_poly(&b);
        assert_eq!(
            fb.eval(&rat_int(6912)),
            rat_int(-27) * &b * rat_int(6912) * rat_int(6912)
        );
    }

    #[test]
    fn fb_root_analysis_cases() {
        let a0 = fb_root_analysis(&rat_int(0)).unwrap();
        assert_eq!(a0.profile, MultiplicityProfile(vec![(3, 1)]));
        assert_eq!(a0.rational_roots, vec![(rat_int(6912), 3)]);

        let a1728 = fb_root_analysis(&rat_int(1728)).unwrap();
        assert_eq!(a1728.profile, MultiplicityProfile(vec![(1, 1), (2, 1)]));
        assert_eq!(
            a1728.rational_roots,
            vec![(rat_int(-13824), 2), (rat_int(1728), 1)]
        );

        let a5 = fb_root_analysis(&rat_int(5)).unwrap();
        assert_eq!(a5.profile, MultiplicityProfile(vec![(1, 3)]));
    }

    #[test]
    fn fb_critical_values() {
        assert_eq!(fb_critical_b().unwrap(), vec![rat_int(0), rat_int(1728)]);
    }

    #[test]
    fn fiber_decomposition_classes() {
        let d0 = fiber_decomposition(&rat_int(0)).unwrap();
        assert_eq!(d0.components.len(), 1);
        assert_eq!(d0.components[0].multiplicity, 3);
        assert_eq!(d0.class_total, 12);

        let d1728 = fiber_decomposition(&rat_int(1728)).unwrap();
        assert_eq!(d1728.total_multiplicity, 3);
        assert_eq!(d1728.class_total, 12);

        let dgen = fiber_decomposition(&rat(31, 7)).unwrap();
        assert_eq!(dgen.components.len(), 3);
        assert!(dgen.components.iter().all(|c| c.multiplicity == 1));
        assert_eq!(dgen.class_total, 12);
    }
}
