//! The order-18 stabilizer of the Hesse-pencil Jacobian nets inside PGL(3):
//! the candidate elements B^k A_g over Q(w), their group structure
//! C3 x| S3, exact membership checks, and the 9 quadratic residual
//! conditions equivalent to stabilization.

use crate::hesse::w_lambda;
use crate::scalar::{EisRat, Rat};
use crate::ternary::Conic;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StabilizerError {
    #[error("matrix is singular")]
    Singular,
    #[error("group relation failed: {0}")]
    RelationFailed(String),
    #[error("candidate set is not closed under multiplication")]
    NotClosed,
    #[error("net construction failed for this lambda")]
    BadLambda,
}

/// Element of PGL(3, Q(w)): an invertible matrix canonicalized by scaling so
/// the first nonzero entry in row-major order is 1. Equality of canonical
/// matrices is equality in PGL(3).
#[derive(Debug, Clone, PartialEq)]
pub struct PGLElement {
    m: [[EisRat; 3]; 3],
}

fn det3(m: &[[EisRat; 3]; 3]) -> EisRat {
    let minor = |r: [usize; 2], c: [usize; 2]| {
        m[r[0]][c[0]].clone() * m[r[1]][c[1]].clone()
            - m[r[0]][c[1]].clone() * m[r[1]][c[0]].clone()
    };
    m[0][0].clone() * minor([1, 2], [1, 2]) - m[0][1].clone() * minor([1, 2], [0, 2])
        + m[0][2].clone() * minor([1, 2], [0, 1])
}

impl PGLElement {
    pub fn new(m: [[EisRat; 3]; 3]) -> Result<Self, StabilizerError> {
        if det3(&m).is_zero() {
            return Err(StabilizerError::Singular);
        }
        Ok(PGLElement {
            m: Self::canonicalize(m),
        })
    }

    fn canonicalize(m: [[EisRat; 3]; 3]) -> [[EisRat; 3]; 3] {
        let pivot = m
            .iter()
            .flatten()
            .find(|e| !e.is_zero())
            .expect("nonzero matrix")
            .clone();
        let inv = pivot.checked_inv().expect("pivot nonzero");
        m.map(|row| row.map(|e| e * inv.clone()))
    }

    pub fn identity() -> Self {
        PGLElement::new(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                if i == j {
                    EisRat::one()
                } else {
                    EisRat::zero()
                }
            })
        }))
        .expect("identity is invertible")
    }

    pub fn matrix(&self) -> &[[EisRat; 3]; 3] {
        &self.m
    }

    pub fn mul(&self, other: &PGLElement) -> PGLElement {
        let mut out: [[EisRat; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| EisRat::zero()));
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    out[i][j] = out[i][j].clone() + self.m[i][k].clone() * other.m[k][j].clone();
                }
            }
        }
        PGLElement {
            m: Self::canonicalize(out),
        }
    }

    pub fn inverse(&self) -> PGLElement {
        // adjugate suffices in PGL (the determinant factor is a scalar)
        let m = &self.m;
        let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
            m[r0][c0].clone() * m[r1][c1].clone() - m[r0][c1].clone() * m[r1][c0].clone()
        };
        let adj: [[EisRat; 3]; 3] = [
            [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
            [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
            [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
        ];
        PGLElement {
            m: Self::canonicalize(adj),
        }
    }

    pub fn pow(&self, e: usize) -> PGLElement {
        let mut acc = PGLElement::identity();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Permutation matrix (A_g)_{ij} = 1 iff j = g(i), for g given as the image
/// list [g(0), g(1), g(2)].
pub fn permutation_matrix(g: &[usize; 3]) -> PGLElement {
    let m: [[EisRat; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if j == g[i] {
                EisRat::one()
            } else {
                EisRat::zero()
            }
        })
    });
    PGLElement::new(m).expect("permutation matrices are invertible")
}

/// The matrix B = diag(1, w, w^2).
pub fn matrix_b() -> PGLElement {
    let w = EisRat::omega();
    let w2 = w.clone() * w.clone();
    let z = EisRat::zero;
    PGLElement::new([[EisRat::one(), z(), z()], [z(), w, z()], [z(), z(), w2]])
        .expect("B is invertible")
}

pub const S3: [[usize; 3]; 6] = [
    [0, 1, 2], // id
    [1, 2, 0], // (123)
    [2, 0, 1], // (132)
    [1, 0, 2], // (12)
    [0, 2, 1], // (23)
    [2, 1, 0], // (13)
];

const CYCLIC: [[usize; 3]; 3] = [[0, 1, 2], [1, 2, 0], [2, 0, 1]];

/// The 18 candidate elements [B^k A_g], k in {0, 1, 2}, g in S3, pairwise
/// distinct after canonicalization.
pub fn candidate_group() -> Vec<PGLElement> {
    let b = matrix_b();
    let mut out = Vec::with_capacity(18);
    for k in 0..3 {
        let bk = b.pow(k);
        for g in &S3 {
            out.push(bk.mul(&permutation_matrix(g)));
        }
    }
    debug_assert_eq!(out.len(), 18);
    out
}

/// Exact stabilization test: sigma stabilizes W_lambda iff the substituted
/// image of each basis conic lies back in the net.
pub fn stabilizes(sigma: &PGLElement, lambda: &EisRat) -> Result<bool, StabilizerError> {
    let net = w_lambda(lambda).map_err(|_| StabilizerError::BadLambda)?;
    for conic in net.basis() {
        let image = Conic::new(conic.form().substitute(sigma.matrix()))
            .expect("substitution preserves degree");
        if !net.contains(&image) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The 9 left-hand sides of the quadratic stabilizer conditions, indexed by
/// pairs (g, h) of cyclic permutations: with entries a_{ij} of sigma,
///
///   2 a_{g(1)h(2)} a_{g(1)h(3)}
///     + lambda (a_{g(2)h(3)} a_{g(3)h(2)} + a_{g(2)h(2)} a_{g(3)h(3)})
///     - lambda a_{g(1)h(1)}^2
///     - lambda^2 a_{g(2)h(1)} a_{g(3)h(1)}
///
/// All nine vanish exactly iff sigma stabilizes W_lambda.
pub fn eq2_residuals(sigma: &PGLElement, lambda: &EisRat) -> [EisRat; 9] {
    let a = sigma.matrix();
    let l = lambda.clone();
    let mut out: [EisRat; 9] = std::array::from_fn(|_| EisRat::zero());
    let mut idx = 0;
    for g in &CYCLIC {
        for h in &CYCLIC {
            let term1 = EisRat::from_int(2) * a[g[0]][h[1]].clone() * a[g[0]][h[2]].clone();
            let term2 = l.clone()
                * (a[g[1]][h[2]].clone() * a[g[2]][h[1]].clone()
                    + a[g[1]][h[1]].clone() * a[g[2]][h[2]].clone());
            let term3 = l.clone() * a[g[0]][h[0]].clone() * a[g[0]][h[0]].clone();
            let term4 = l.clone() * l.clone() * a[g[1]][h[0]].clone() * a[g[2]][h[0]].clone();
            out[idx] = term1 + term2 - term3 - term4;
            idx += 1;
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupReport {
    pub order: usize,
    pub distinct: bool,
    pub closed: bool,
    pub has_identity: bool,
    pub has_inverses: bool,
    /// (relation, holds) pairs for the presentation
    /// a^3 = b^3 = c^2 = 1, ab = ba, cbc = b^-1, cac = a^-1.
    pub relations: Vec<(String, bool)>,
}

/// Verifies the candidate set is a group of order 18 satisfying the
/// semidirect-product presentation with a = [A_(123)], b = [B], c = [A_(12)].
pub fn verify_group_structure(elements: &[PGLElement]) -> Result<GroupReport, StabilizerError> {
    let distinct =
        (0..elements.len()).all(|i| (i + 1..elements.len()).all(|j| elements[i] != elements[j]));
    let contains = |x: &PGLElement| elements.iter().any(|e| e == x);
    let mut closed = true;
    for x in elements {
        for y in elements {
            if !contains(&x.mul(y)) {
                closed = false;
            }
        }
    }
    let has_identity = contains(&PGLElement::identity());
    let has_inverses = elements.iter().all(|e| contains(&e.inverse()));

    let a = permutation_matrix(&[1, 2, 0]); // (123)
    let b = matrix_b();
    let c = permutation_matrix(&[1, 0, 2]); // (12)
    let id = PGLElement::identity();
    let relations = vec![
        ("a^3 = 1".to_string(), a.pow(3) == id),
        ("b^3 = 1".to_string(), b.pow(3) == id),
        ("c^2 = 1".to_string(), c.pow(2) == id),
        ("ab = ba".to_string(), a.mul(&b) == b.mul(&a)),
        ("cbc = b^-1".to_string(), c.mul(&b).mul(&c) == b.inverse()),
        ("cac = a^-1".to_string(), c.mul(&a).mul(&c) == a.inverse()),
    ];
    for (name, ok) in &relations {
        if !ok {
            return Err(StabilizerError::RelationFailed(name.clone()));
        }
    }
    if !closed {
        return Err(StabilizerError::NotClosed);
    }
    Ok(GroupReport {
        order: elements.len(),
        distinct,
        closed,
        has_identity,
        has_inverses,
        relations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurveyRow {
    pub lambda: Rat,
    pub candidates_ok: usize,
    pub eq2_ok: usize,
    pub probes_tried: usize,
    pub extra_found: usize,
}

impl Serialize for SurveyRow {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SurveyRow", 5)?;
        st.serialize_field("lambda", &self.lambda.to_string())?;
        st.serialize_field("candidates_ok", &self.candidates_ok)?;
        st.serialize_field("eq2_ok", &self.eq2_ok)?;
        st.serialize_field("probes_tried", &self.probes_tried)?;
        st.serialize_field("extra_found", &self.extra_found)?;
        st.end()
    }
}

/// Draws a random invertible integer matrix that is not one of the
/// candidates.
fn random_probe(rng: &mut ChaCha20Rng, candidates: &[PGLElement]) -> PGLElement {
    loop {
        let m: [[EisRat; 3]; 3] = std::array::from_fn(|_| {
            std::array::from_fn(|_| EisRat::from_int(rng.gen_range(-5..=5)))
        });
        match PGLElement::new(m) {
            Ok(p) if !candidates.contains(&p) => return p,
            _ => continue,
        }
    }
}

/// For each lambda: checks all 18 candidates stabilize W_lambda exactly
/// (both by membership and by the 9 residuals), then probes `probes` random
/// non-candidate matrices expecting none to stabilize. Evidence for the
/// completeness of the candidate set, not a proof.
pub fn stabilizer_survey(
    lambdas: &[Rat],
    probes: usize,
    seed: u64,
) -> Result<Vec<SurveyRow>, StabilizerError> {
    let candidates = candidate_group();
    let mut rows = Vec::with_capacity(lambdas.len());
    for lambda in lambdas {
        let le = EisRat::from(lambda.clone());
        let mut candidates_ok = 0;
        let mut eq2_ok = 0;
        for sigma in &candidates {
            if stabilizes(sigma, &le)? {
                candidates_ok += 1;
            }
            if eq2_residuals(sigma, &le).iter().all(|r| r.is_zero()) {
                eq2_ok += 1;
            }
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed ^ hash_rat(lambda));
        let mut extra_found = 0;
        for _ in 0..probes {
            let probe = random_probe(&mut rng, &candidates);
            if stabilizes(&probe, &le)? {
                extra_found += 1;
            }
        }
        rows.push(SurveyRow {
            lambda: lambda.clone(),
            candidates_ok,
            eq2_ok,
            probes_tried: probes,
            extra_found,
        });
    }
    Ok(rows)
}

fn hash_rat(r: &Rat) -> u64 {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};
    let mut h = DefaultHasher::new();
    r.hash(&mut h);
    h.finish()
}
