//! Univariate polynomials over a generic coefficient ring, exact gcd and
//! Yun square-free decomposition over a field, Sylvester resultants, and
//! homogeneous binary forms with multiplicity profiles.

use crate::linalg;
use crate::scalar::{rat_to_f64, CplxApprox, Field, Rat, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum UniPolyError {
    #[error("operation undefined for the zero polynomial")]
    ZeroInput,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("polynomial is not homogeneous of a single degree")]
    Inhomogeneous,
    #[error("degree must be at least 1")]
    DegreeTooSmall,
}

/// Dense univariate polynomial, lowest-degree coefficient first, trailing
/// zeros trimmed; the zero polynomial is the empty sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct UniPoly<K> {
    coeffs: Vec<K>,
}

impl<K: Ring> UniPoly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: K) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn var() -> Self {
        UniPoly::new(vec![K::zero(), K::one()])
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    /// Index of the last nonzero coefficient; 0 for constants and the zero
    /// polynomial (use [`UniPoly::is_zero`] to distinguish).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Option<&K> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, s: &K) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    /// Multiplies by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![K::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly::new(coeffs)
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::new(Vec::new());
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * K::from_int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn map_coeffs<L: Ring, F: Fn(&K) -> L>(&self, f: F) -> UniPoly<L> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl<K: Ring> Add for UniPoly<K> {
    type Output = UniPoly<K>;
    fn add(self, rhs: UniPoly<K>) -> UniPoly<K> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        UniPoly::new(out)
    }
}

impl<K: Ring> Sub for UniPoly<K> {
    type Output = UniPoly<K>;
    fn sub(self, rhs: UniPoly<K>) -> UniPoly<K> {
        self + (-rhs)
    }
}

impl<K: Ring> Neg for UniPoly<K> {
    type Output = UniPoly<K>;
    fn neg(self) -> UniPoly<K> {
        UniPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<K: Ring> Mul for UniPoly<K> {
    type Output = UniPoly<K>;
    fn mul(self, rhs: UniPoly<K>) -> UniPoly<K> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::new(Vec::new());
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let delta = a.clone() * b.clone();
                out[i + j] = out[i + j].clone() + delta;
            }
        }
        UniPoly::new(out)
    }
}

impl<K: Ring> Zero for UniPoly<K> {
    fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<K: Ring> One for UniPoly<K> {
    fn one() -> Self {
        UniPoly::constant(K::one())
    }
}

impl<K: Ring> Ring for UniPoly<K> {
    fn from_rat(r: &Rat) -> Self {
        UniPoly::constant(K::from_rat(r))
    }
}

// ---------------------------------------------------------------------------
// field-coefficient algorithms
// ---------------------------------------------------------------------------

impl<K: Field> UniPoly<K> {
    /// Euclidean division; panics when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.degree() < divisor.degree() || self.is_zero() {
            return (UniPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dlead = divisor.leading().unwrap().clone();
        let dinv = dlead.inv().expect("leading coefficient nonzero");
        let dd = divisor.degree();
        let mut quot = vec![K::zero(); rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let q = rem[i].clone() * dinv.clone();
            quot[i - dd] = q.clone();
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let delta = q.clone() * dc.clone();
                rem[i - dd + j] = rem[i - dd + j].clone() - delta;
            }
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    /// Quotient of an exact division; panics when the remainder is nonzero.
    pub fn exact_div(&self, divisor: &Self) -> Self {
        let (q, r) = self.div_rem(divisor);
        assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().expect("leading coefficient nonzero");
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor. Remainders are re-normalized to monic
    /// at every step to keep rational coefficient growth in check.
    pub fn gcd(f: &Self, g: &Self) -> Result<Self, UniPolyError> {
        if f.is_zero() && g.is_zero() {
            return Err(UniPolyError::BothZero);
        }
        let mut a = f.monic();
        let mut b = g.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Yun square-free decomposition: returns pairwise-coprime monic
    /// square-free factors with their multiplicities, so that the product of
    /// factor^multiplicity equals the input up to a nonzero constant.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, usize)>, UniPolyError> {
        if self.is_zero() {
            return Err(UniPolyError::ZeroInput);
        }
        let f = self.monic();
        if f.is_constant() {
            return Ok(Vec::new());
        }
        let df = f.derivative();
        let g = Self::gcd(&f, &df)?;
        let mut w = f.exact_div(&g);
        let mut y = df.exact_div(&g);
        let mut out = Vec::new();
        let mut mult = 1usize;
        loop {
            let z = y - w.derivative();
            if z.is_zero() {
                if !w.is_constant() {
                    out.push((w.monic(), mult));
                }
                break;
            }
            let h = Self::gcd(&w, &z)?;
            if !h.is_constant() {
                out.push((h.monic(), mult));
            }
            w = w.exact_div(&h);
            y = z.exact_div(&h);
            mult += 1;
            if w.is_constant() {
                break;
            }
        }
        Ok(out)
    }

    /// Sylvester-matrix resultant, normalized so that
    /// Res(f, g) = lc(f)^deg(g) * prod g(alpha_i) over the roots of f.
    pub fn resultant(f: &Self, g: &Self) -> Result<K, UniPolyError> {
        if f.is_zero() || g.is_zero() {
            return Err(UniPolyError::ZeroInput);
        }
        let m = f.degree();
        let n = g.degree();
        if m == 0 {
            // Res(c, g) = c^deg(g)
            let mut acc = K::one();
            for _ in 0..n {
                acc = acc * f.coeff(0);
            }
            return Ok(acc);
        }
        if n == 0 {
            let mut acc = K::one();
            for _ in 0..m {
                acc = acc * g.coeff(0);
            }
            return Ok(acc);
        }
        Ok(linalg::det(&sylvester_matrix(f, g)))
    }
}

/// Sylvester matrix of f (degree m) and g (degree n): n rows of f's
/// coefficients followed by m rows of g's, both in descending order.
pub fn sylvester_matrix<K: Ring>(f: &UniPoly<K>, g: &UniPoly<K>) -> Vec<Vec<K>> {
    let m = f.degree();
    let n = g.degree();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for k in 0..n {
        let mut row = vec![K::zero(); size];
        for (i, c) in f.coeffs.iter().enumerate() {
            row[k + m - i] = c.clone();
        }
        rows.push(row);
    }
    for k in 0..m {
        let mut row = vec![K::zero(); size];
        for (i, c) in g.coeffs.iter().enumerate() {
            row[k + n - i] = c.clone();
        }
        rows.push(row);
    }
    rows
}

/// Resultant over a coefficient ring without division (cofactor expansion of
/// the Sylvester matrix); intended for small degrees.
pub fn resultant_ring<K: Ring>(f: &UniPoly<K>, g: &UniPoly<K>) -> Result<K, UniPolyError> {
    if f.is_zero() || g.is_zero() {
        return Err(UniPolyError::ZeroInput);
    }
    if f.degree() == 0 || g.degree() == 0 {
        let (c, d) = if f.degree() == 0 {
            (f.coeff(0), g.degree())
        } else {
            (g.coeff(0), f.degree())
        };
        let mut acc = K::one();
        for _ in 0..d {
            acc = acc * c.clone();
        }
        return Ok(acc);
    }
    Ok(linalg::det_ring(&sylvester_matrix(f, g)))
}

// ---------------------------------------------------------------------------
// rational-specific helpers
// ---------------------------------------------------------------------------

impl UniPoly<Rat> {
    /// Writes f = unit * primitive where primitive has coprime integer
    /// coefficients and positive leading coefficient.
    pub fn integer_primitive(&self) -> (UniPoly<Rat>, Rat) {
        if self.is_zero() {
            return (self.clone(), Rat::one());
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        let mut unit = Rat::new(num_gcd, den_lcm);
        if self.leading().unwrap().is_negative() {
            unit = -unit;
        }
        let inv = Rat::one() / &unit;
        (self.scale(&inv), unit)
    }

    /// Exact rational roots with multiplicity, complete for polynomials whose
    /// square-free factors all have degree at most 2. Factors of larger
    /// degree contribute no entries.
    pub fn small_rational_roots(&self) -> Result<Vec<(Rat, usize)>, UniPolyError> {
        let mut out = Vec::new();
        for (factor, mult) in self.squarefree_decomposition()? {
            match factor.degree() {
                1 => out.push((-factor.coeff(0), mult)),
                2 => {
                    let b = factor.coeff(1);
                    let c = factor.coeff(0);
                    let disc = &b * &b - Rat::from_integer(BigInt::from(4)) * &c;
                    if let Some(s) = rational_sqrt(&disc) {
                        let half = Rat::new(BigInt::one(), BigInt::from(2));
                        out.push(((&s - &b) * &half, mult));
                        if !s.is_zero() {
                            out.push(((-&s - &b) * &half, mult));
                        }
                    }
                }
                _ => {}
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        Ok(out)
    }
}

impl Serialize for UniPoly<Rat> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(Rat::new(ns, ds))
    } else {
        None
    }
}

/// Bivariate polynomials in (t0, t1): outer variable t1, inner variable t0.
pub type BiPoly = UniPoly<UniPoly<Rat>>;

/// Constant embedded in [`BiPoly`].
pub fn bipoly_const(r: Rat) -> BiPoly {
    UniPoly::constant(UniPoly::constant(r))
}

/// The variable t0 as a [`BiPoly`].
pub fn bipoly_t0() -> BiPoly {
    UniPoly::constant(UniPoly::var())
}

/// The variable t1 as a [`BiPoly`].
pub fn bipoly_t1() -> BiPoly {
    UniPoly::new(vec![UniPoly::zero(), UniPoly::one()])
}

// ---------------------------------------------------------------------------
// binary forms
// ---------------------------------------------------------------------------

/// Homogeneous binary form of fixed degree d: sum of
/// coeffs[i] * t0^(d-i) * t1^i.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinaryForm {
    degree: usize,
    #[serde(serialize_with = "ser_rat_vec")]
    coeffs: Vec<Rat>,
}

fn ser_rat_vec<S: serde::Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

impl BinaryForm {
    pub fn new(degree: usize, mut coeffs: Vec<Rat>) -> Self {
        coeffs.resize(degree + 1, Rat::zero());
        BinaryForm { degree, coeffs }
    }

    /// Degree-1 form a*t0 + b*t1.
    pub fn linear(a: Rat, b: Rat) -> Self {
        BinaryForm::new(1, vec![a, b])
    }

    /// Interprets a bivariate polynomial as a homogeneous form, failing if it
    /// mixes total degrees.
    pub fn from_bipoly(p: &BiPoly) -> Result<Self, UniPolyError> {
        if p.is_zero() {
            return Ok(BinaryForm::new(0, vec![Rat::zero()]));
        }
        let mut total: Option<usize> = None;
        for (j, q) in p.coeffs().iter().enumerate() {
            for (i, c) in q.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let d = i + j;
                match total {
                    None => total = Some(d),
                    Some(t) if t != d => return Err(UniPolyError::Inhomogeneous),
                    _ => {}
                }
            }
        }
        let d = total.expect("nonzero polynomial has a degree");
        let mut coeffs = vec![Rat::zero(); d + 1];
        for (j, q) in p.coeffs().iter().enumerate() {
            for (i, c) in q.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    debug_assert_eq!(i + j, d);
                    coeffs[j] = c.clone();
                }
            }
        }
        Ok(BinaryForm { degree: d, coeffs })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Specialization t0 = 1; coefficients ascending in t1.
    pub fn dehomogenize(&self) -> UniPoly<Rat> {
        UniPoly::new(self.coeffs.clone())
    }

    /// Multiplicity of the root at infinity (0 : 1), i.e. the drop from the
    /// formal degree to the degree of the dehomogenization.
    pub fn infinity_multiplicity(&self) -> usize {
        let p = self.dehomogenize();
        if p.is_zero() {
            self.degree
        } else {
            self.degree - p.degree()
        }
    }

    /// Strips the rational content, leaving coprime integer coefficients with
    /// a positive topmost nonzero coefficient.
    pub fn content_stripped(&self) -> BinaryForm {
        let (prim, _) = self.dehomogenize().integer_primitive();
        let mut coeffs: Vec<Rat> = prim.coeffs().to_vec();
        coeffs.resize(self.degree + 1, Rat::zero());
        BinaryForm {
            degree: self.degree,
            coeffs,
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let d = self.degree + other.degree;
        let mut coeffs = vec![Rat::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        BinaryForm { degree: d, coeffs }
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        assert_eq!(self.degree, other.degree, "degrees must match");
        BinaryForm {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> BinaryForm {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Substitutes (t0, t1) -> (m00 t0 + m01 t1, m10 t0 + m11 t1).
    pub fn reparametrize(&self, m: &[[Rat; 2]; 2]) -> BinaryForm {
        let l0 = BinaryForm::linear(m[0][0].clone(), m[0][1].clone());
        let l1 = BinaryForm::linear(m[1][0].clone(), m[1][1].clone());
        let mut out = BinaryForm::new(self.degree, vec![]);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = BinaryForm::new(0, vec![c.clone()]);
            for _ in 0..(self.degree - i) {
                term = term.mul(&l0);
            }
            for _ in 0..i {
                term = term.mul(&l1);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval_complex(&self, t0: CplxApprox, t1: CplxApprox) -> CplxApprox {
        let mut acc = CplxApprox::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += rat_to_f64(c) * t0.powu((self.degree - i) as u32) * t1.powu(i as u32);
        }
        acc
    }

    /// Greatest common divisor of two binary forms, including any common
    /// roots at (1 : 0) and (0 : 1).
    pub fn gcd(a: &BinaryForm, b: &BinaryForm) -> Result<BinaryForm, UniPolyError> {
        if a.is_zero() || b.is_zero() {
            return Err(UniPolyError::ZeroInput);
        }
        let split = |f: &BinaryForm| -> (usize, usize, UniPoly<Rat>) {
            let p = f.dehomogenize();
            let t1_mult = p.coeffs().iter().position(|c| !c.is_zero()).unwrap();
            let t0_mult = f.infinity_multiplicity();
            let core = UniPoly::new(p.coeffs()[t1_mult..].to_vec());
            (t1_mult, t0_mult, core)
        };
        let (a1, a0, ca) = split(a);
        let (b1, b0, cb) = split(b);
        let g = UniPoly::gcd(&ca, &cb)?;
        let gd = g.degree();
        let t1m = a1.min(b1);
        let t0m = a0.min(b0);
        let mut coeffs = vec![Rat::zero(); gd + t1m + t0m + 1];
        for (i, c) in g.coeffs().iter().enumerate() {
            coeffs[i + t1m] = c.clone();
        }
        Ok(BinaryForm {
            degree: gd + t1m + t0m,
            coeffs,
        })
    }

    /// Multiplicity profile of the roots in the algebraic closure of the
    /// projective line, the root at infinity included.
    pub fn profile(&self) -> Result<MultiplicityProfile, UniPolyError> {
        if self.is_zero() {
            return Err(UniPolyError::ZeroInput);
        }
        let mut counts: std::collections::BTreeMap<usize, usize> = Default::default();
        let p = self.dehomogenize();
        for (factor, mult) in p.squarefree_decomposition()? {
            *counts.entry(mult).or_default() += factor.degree();
        }
        let inf = self.infinity_multiplicity();
        if inf > 0 {
            *counts.entry(inf).or_default() += 1;
        }
        Ok(MultiplicityProfile(counts.into_iter().collect()))
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*t0^{}*t1^{}", c, self.degree - i, i))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Sorted list of (multiplicity m, count c): c roots of multiplicity exactly
/// m, the root at infinity included. The weighted sum recovers the degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityProfile(pub Vec<(usize, usize)>);

impl MultiplicityProfile {
    pub fn total(&self) -> usize {
        self.0.iter().map(|(m, c)| m * c).sum()
    }

    pub fn distinct_roots(&self) -> usize {
        self.0.iter().map(|(_, c)| c).sum()
    }

    pub fn count_at(&self, mult: usize) -> usize {
        self.0
            .iter()
            .find(|(m, _)| *m == mult)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }
}

impl fmt::Display for MultiplicityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(m, c)| format!("({m}, {c})")).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
