//! Integer intersection arithmetic in the Chow ring of the blow-up of P^3
//! at n general points: basis Lambda_k, Gamma_{k,i} in each grade k, with
//! relations Lambda_k Lambda_l = Lambda_{k+l}, Lambda_k Gamma_{l,i} = 0,
//! Gamma_{k,i} Gamma_{l,j} = 0 for i != j, and
//! Gamma_{k,i} Gamma_{l,i} = -Gamma_{k+l,i}. With e_i = Gamma_{1,i} this
//! gives e_i^2 = -Gamma_{2,i} and e_i^3 = +Gamma_{3,i}, and the degree map
//! on grade 3 sends both Lambda_3 and Gamma_{3,i} to 1.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChowError {
    #[error("classes live on blow-ups of different point counts ({0} vs {1})")]
    MixedPointCount(usize, usize),
    #[error("grade overflow: {0} + {1} > 3")]
    GradeOverflow(usize, usize),
    #[error("degree is defined on grade-3 classes only, got grade {0}")]
    WrongGrade(usize),
}

/// Integer class a*Lambda_k + sum_i c_i*Gamma_{k,i} on the blow-up of P^3 at
/// n points. Grade-0 classes are multiples of 1 = Lambda_0 and carry no
/// Gamma coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowClass {
    n: usize,
    k: usize,
    lambda_coeff: BigInt,
    gamma_coeffs: Vec<BigInt>,
}

impl ChowClass {
    pub fn new(
        n: usize,
        k: usize,
        lambda_coeff: impl Into<BigInt>,
        gamma_coeffs: Vec<BigInt>,
    ) -> Self {
        assert!(k <= 3, "grades run from 0 to 3");
        assert_eq!(gamma_coeffs.len(), n);
        let class = ChowClass {
            n,
            k,
            lambda_coeff: lambda_coeff.into(),
            gamma_coeffs,
        };
        debug_assert!(
            k > 0 || class.gamma_coeffs.iter().all(|c| c.is_zero()),
            "grade-0 classes have no Gamma part"
        );
        class
    }

    pub fn zero(n: usize, k: usize) -> Self {
        ChowClass::new(n, k, 0, vec![BigInt::zero(); n])
    }

    /// The hyperplane class lambda = Lambda_1.
    pub fn lambda(n: usize) -> Self {
        ChowClass::new(n, 1, 1, vec![BigInt::zero(); n])
    }

    /// The exceptional divisor class e_i = Gamma_{1,i} (0-indexed).
    pub fn exceptional(n: usize, i: usize) -> Self {
        let mut gamma = vec![BigInt::zero(); n];
        gamma[i] = BigInt::one();
        ChowClass::new(n, 1, 0, gamma)
    }

    pub fn grade(&self) -> usize {
        self.k
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn lambda_coeff(&self) -> &BigInt {
        &self.lambda_coeff
    }

    pub fn gamma_coeffs(&self) -> &[BigInt] {
        &self.gamma_coeffs
    }

    pub fn add(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        if self.n != other.n {
            return Err(ChowError::MixedPointCount(self.n, other.n));
        }
        assert_eq!(self.k, other.k, "can only add classes of equal grade");
        Ok(ChowClass::new(
            self.n,
            self.k,
            &self.lambda_coeff + &other.lambda_coeff,
            self.gamma_coeffs
                .iter()
                .zip(&other.gamma_coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn scale(&self, s: impl Into<BigInt>) -> ChowClass {
        let s = s.into();
        ChowClass::new(
            self.n,
            self.k,
            &self.lambda_coeff * &s,
            self.gamma_coeffs.iter().map(|c| c * &s).collect(),
        )
    }

    /// Bilinear extension of the basis relations. Grade-0 factors act as
    /// integer scalars.
    pub fn multiply(&self, other: &ChowClass) -> Result<ChowClass, ChowError> {
        if self.n != other.n {
            return Err(ChowError::MixedPointCount(self.n, other.n));
        }
        if self.k + other.k > 3 {
            return Err(ChowError::GradeOverflow(self.k, other.k));
        }
        if self.k == 0 {
            return Ok(other.scale(self.lambda_coeff.clone()));
        }
        if other.k == 0 {
            return Ok(self.scale(other.lambda_coeff.clone()));
        }
        let k = self.k + other.k;
        let lambda = &self.lambda_coeff * &other.lambda_coeff;
        let gamma = self
            .gamma_coeffs
            .iter()
            .zip(&other.gamma_coeffs)
            .map(|(a, b)| -(a * b))
            .collect();
        Ok(ChowClass::new(self.n, k, lambda, gamma))
    }

    pub fn pow(&self, e: usize) -> Result<ChowClass, ChowError> {
        let mut acc = ChowClass::new(self.n, 0, 1, vec![BigInt::zero(); self.n]);
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Degree of a grade-3 class: deg Lambda_3 = deg Gamma_{3,i} = 1.
    pub fn degree(&self) -> Result<BigInt, ChowError> {
        if self.k != 3 {
            return Err(ChowError::WrongGrade(self.k));
        }
        let mut d = self.lambda_coeff.clone();
        for c in &self.gamma_coeffs {
            d += c;
        }
        Ok(d)
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use num_traits::Signed;
        write!(f, "{}L_{}", self.lambda_coeff, self.k)?;
        for (i, c) in self.gamma_coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if c.is_negative() {
                write!(f, " - {}G_{},{}", -c, self.k, i + 1)?;
            } else {
                write!(f, " + {}G_{},{}", c, self.k, i + 1)?;
            }
        }
        Ok(())
    }
}

/// Class of the strict transform of a degree-d surface with the given point
/// multiplicities: d*lambda - sum m_i e_i.
pub fn strict_transform_class(d: i64, mults: &[i64]) -> ChowClass {
    assert!(d >= 1);
    let n = mults.len();
    ChowClass::new(n, 1, d, mults.iter().map(|&m| BigInt::from(-m)).collect())
}

/// Pullback of a general hyperplane under the polar (gradient) map of a
/// degree-d surface through n assigned base points: (d-1)*lambda - sum e_i.
pub fn polar_map_class(d: i64, n: usize) -> ChowClass {
    assert!(d >= 2);
    ChowClass::new(n, 1, d - 1, vec![BigInt::from(-1); n])
}

/// Degree of the dual hypersurface of a degree-d surface in P^3 with n
/// ordinary double points, as the intersection number
/// deg(strict_transform * polar^2) = d (d-1)^2 - 2 n.
pub fn dual_degree(d: i64, n: usize) -> BigInt {
    let strict = strict_transform_class(d, &vec![2; n]);
    let polar = polar_map_class(d, n);
    let product = strict
        .multiply(&polar.pow(2).expect("grade 2"))
        .expect("grade 3");
    product.degree().expect("grade-3 class")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn basis_relations() {
        let n = 4;
        let l = ChowClass::lambda(n);
        let e1 = ChowClass::exceptional(n, 0);
        // lambda * lambda = Lambda_2
        let l2 = l.multiply(&l).unwrap();
        assert_eq!(l2.grade(), 2);
        assert_eq!(l2.lambda_coeff(), &int(1));
        assert!(l2.gamma_coeffs().iter().all(|c| c.is_zero()));
        // e1 * e1 = -Gamma_{2,1}
        let e1sq = e1.multiply(&e1).unwrap();
        assert_eq!(e1sq.gamma_coeffs()[0], int(-1));
        assert_eq!(e1sq.lambda_coeff(), &int(0));
        // lambda * e1 = 0
        let mixed = l.multiply(&e1).unwrap();
        assert_eq!(mixed, ChowClass::zero(n, 2));
        // e1^3 = +Gamma_{3,1}, so deg e1^3 = 1
        let e1cube = e1.pow(3).unwrap();
        assert_eq!(e1cube.gamma_coeffs()[0], int(1));
        assert_eq!(e1cube.degree().unwrap(), int(1));
        // lambda^3 is a point
        assert_eq!(l.pow(3).unwrap().degree().unwrap(), int(1));
    }

    #[test]
    fn grade_errors() {
        let l = ChowClass::lambda(2);
        let g2 = l.pow(2).unwrap();
        assert_eq!(g2.multiply(&g2), Err(ChowError::GradeOverflow(2, 2)));
        assert_eq!(g2.degree(), Err(ChowError::WrongGrade(2)));
        assert_eq!(
            l.multiply(&ChowClass::lambda(3)),
            Err(ChowError::MixedPointCount(2, 3))
        );
    }

    #[test]
    fn displayed_cayley_computation() {
        // strict transform 3*lambda - 2(e1+e2+e3+e4), polar class
        // 2*lambda - sum e_i, and deg(12 L_3 - 2 sum G_{3,i}) = 12 - 2*4 = 4
        let strict = strict_transform_class(3, &[2, 2, 2, 2]);
        assert_eq!(strict.lambda_coeff(), &int(3));
        assert!(strict.gamma_coeffs().iter().all(|c| c == &int(-2)));
        let polar = polar_map_class(3, 4);
        assert_eq!(polar.lambda_coeff(), &int(2));
        let product = strict.multiply(&polar.pow(2).unwrap()).unwrap();
        assert_eq!(product.lambda_coeff(), &int(12));
        assert!(product.gamma_coeffs().iter().all(|c| c == &int(-2)));
        assert_eq!(product.degree().unwrap(), int(4));
        assert_eq!(dual_degree(3, 4), int(4));
    }

    #[test]
    fn dual_degree_closed_form() {
        assert_eq!(dual_degree(3, 0), int(12));
        assert_eq!(dual_degree(2, 0), int(2));
        for d in 2..=6i64 {
            for n in 0..=8usize {
                assert_eq!(dual_degree(d, n), int(d * (d - 1) * (d - 1) - 2 * n as i64));
            }
        }
    }

    #[test]
    fn multiplicity_recovery_on_exceptional() {
        // restricting d*lambda - sum m_i e_i to E_i reads off -m_i times the
        // line class; with m_i = 2 the tangent cone is the degree-2 quadric
        let strict = strict_transform_class(3, &[2, 2, 2, 2]);
        assert_eq!(strict.gamma_coeffs()[2], int(-2));
    }

    #[test]
    fn commutativity_and_associativity_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(99);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let ka = rng.gen_range(0..=1usize);
            let kb = rng.gen_range(0..=1usize);
            let kc = rng.gen_range(0..=(3 - ka - kb).min(1));
            let mk = |k: usize, rng: &mut rand_chacha::ChaCha20Rng| {
                let lam = rng.gen_range(-9..=9);
                let gamma: Vec<BigInt> = (0..n)
                    .map(|_| {
                        if k == 0 {
                            BigInt::zero()
                        } else {
                            int(rng.gen_range(-9..=9))
                        }
                    })
                    .collect();
                ChowClass::new(n, k, lam, gamma)
            };
            let a = mk(ka, &mut rng);
            let b = mk(kb, &mut rng);
            let c = mk(kc, &mut rng);
            assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
            let ab_c = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let a_bc = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc);
        }
    }

    #[test]
    fn display_format() {
        let strict = strict_transform_class(3, &[2, 2]);
        assert_eq!(strict.to_string(), "3L_1 - 2G_1,1 - 2G_1,2");
    }
}
