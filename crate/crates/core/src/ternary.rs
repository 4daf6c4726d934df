//! Homogeneous forms in three variables, conic/matrix duality, and nets of
//! conics with their discriminant cubics.
//!
//! The canonical basis order for conics is (x^2, y^2, z^2, xy, xz, yz).
//! Plane coordinates on the projectivization of a net are written (a, b, c)
//! against the chosen basis.

use crate::linalg;
use crate::scalar::{parse_rat, rat, Field, Rat, Ring};
use num_traits::{One, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TernaryError {
    #[error("expected a form of degree {expected}, got degree {got}")]
    WrongDegree { expected: usize, got: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("degenerate Jacobian net")]
    DegenerateJacobian,
    #[error("net basis must have rank 3")]
    RankDeficientNet,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Exponent triple (i, j, k) with i + j + k = degree.
pub type Exps = (u8, u8, u8);

/// Sparse homogeneous polynomial of fixed degree in 3 variables.
#[derive(Debug, Clone, PartialEq)]
pub struct TernaryForm<K> {
    degree: usize,
    terms: BTreeMap<Exps, K>,
}

impl<K: Ring> TernaryForm<K> {
    pub fn zero_form(degree: usize) -> Self {
        TernaryForm {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(degree: usize, exps: Exps, coeff: K) -> Self {
        let mut f = TernaryForm::zero_form(degree);
        f.add_term(exps, coeff);
        f
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, K)>>(degree: usize, terms: I) -> Self {
        let mut f = TernaryForm::zero_form(degree);
        for (e, c) in terms {
            f.add_term(e, c);
        }
        f
    }

    fn add_term(&mut self, exps: Exps, coeff: K) {
        debug_assert_eq!(
            exps.0 as usize + exps.1 as usize + exps.2 as usize,
            self.degree,
            "exponents must sum to the declared degree"
        );
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: Exps) -> K {
        self.terms.get(&exps).cloned().unwrap_or_else(K::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TernaryForm {
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        if s.is_zero() {
            return TernaryForm::zero_form(self.degree);
        }
        let mut out = TernaryForm::zero_form(self.degree);
        for (e, c) in &self.terms {
            out.add_term(*e, c.clone() * s.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = TernaryForm::zero_form(self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(
                    (e1.0 + e2.0, e1.1 + e2.1, e1.2 + e2.2),
                    c1.clone() * c2.clone(),
                );
            }
        }
        out
    }

    pub fn eval(&self, p: &[K; 3]) -> K {
        let mut acc = K::zero();
        for (&(i, j, k), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..i {
                term = term * p[0].clone();
            }
            for _ in 0..j {
                term = term * p[1].clone();
            }
            for _ in 0..k {
                term = term * p[2].clone();
            }
            acc = acc + term;
        }
        acc
    }

    /// Partial derivative with respect to variable 0, 1, or 2. The derivative
    /// of a degree-0 form is the zero form.
    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < 3);
        if self.degree == 0 {
            return TernaryForm::zero_form(0);
        }
        let mut out = TernaryForm::zero_form(self.degree - 1);
        for (&(i, j, k), c) in &self.terms {
            let (e, rest) = match var {
                0 => (i, (i.wrapping_sub(1), j, k)),
                1 => (j, (i, j.wrapping_sub(1), k)),
                _ => (k, (i, j, k.wrapping_sub(1))),
            };
            if e == 0 {
                continue;
            }
            out.add_term(rest, c.clone() * K::from_int(e as i64));
        }
        out
    }

    /// Substitutes each variable by its image linear form under `g`
    /// (row convention): the result is v -> F(g v). Composing two
    /// substitutions multiplies the matrices: subst(subst(F, g), h) =
    /// subst(F, g h).
    pub fn substitute(&self, g: &[[K; 3]; 3]) -> Self {
        let lin: Vec<TernaryForm<K>> = (0..3)
            .map(|i| {
                TernaryForm::from_terms(
                    1,
                    [
                        ((1, 0, 0), g[i][0].clone()),
                        ((0, 1, 0), g[i][1].clone()),
                        ((0, 0, 1), g[i][2].clone()),
                    ],
                )
            })
            .collect();
        let mut out = TernaryForm::zero_form(self.degree);
        for (&(i, j, k), c) in &self.terms {
            let mut term = TernaryForm::monomial(0, (0, 0, 0), c.clone());
            for _ in 0..i {
                term = term.mul(&lin[0]);
            }
            for _ in 0..j {
                term = term.mul(&lin[1]);
            }
            for _ in 0..k {
                term = term.mul(&lin[2]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Maps coefficients into another ring.
    pub fn map_coeffs<L: Ring, F: Fn(&K) -> L>(&self, f: F) -> TernaryForm<L> {
        TernaryForm::from_terms(self.degree, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    /// Views the form as a univariate polynomial in the third variable whose
    /// coefficients are bivariate polynomials in the first two (inner
    /// variable first, outer second).
    #[allow(clippy::type_complexity)]
    pub fn as_poly_in_third(
        &self,
    ) -> crate::unipoly::UniPoly<crate::unipoly::UniPoly<crate::unipoly::UniPoly<K>>> {
        use crate::unipoly::UniPoly;
        let deg_c = self.terms().map(|(&(_, _, k), _)| k).max().unwrap_or(0) as usize;
        let mut coeffs: Vec<UniPoly<UniPoly<K>>> = vec![UniPoly::zero(); deg_c + 1];
        for (&(i, j, k), c) in self.terms() {
            let inner = UniPoly::new(
                std::iter::repeat_n(K::zero(), i as usize)
                    .chain(std::iter::once(c.clone()))
                    .collect(),
            );
            let mono: UniPoly<UniPoly<K>> = UniPoly::new(
                std::iter::repeat_n(UniPoly::zero(), j as usize)
                    .chain(std::iter::once(inner))
                    .collect(),
            );
            coeffs[k as usize] = coeffs[k as usize].clone() + mono;
        }
        UniPoly::new(coeffs)
    }

    /// The 10 coefficients of a cubic in the canonical order
    /// [x^3, x^2 y, x^2 z, x y^2, x y z, x z^2, y^3, y^2 z, y z^2, z^3].
    pub fn cubic_coefficients(&self) -> Result<[K; 10], TernaryError> {
        if self.degree != 3 {
            return Err(TernaryError::WrongDegree {
                expected: 3,
                got: self.degree,
            });
        }
        Ok(CUBIC_MONOMIALS.map(|e| self.coeff(e)))
    }
}

/// Canonical monomial order used for cubic coefficient vectors.
pub const CUBIC_MONOMIALS: [Exps; 10] = [
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

/// Canonical conic basis order (x^2, y^2, z^2, xy, xz, yz).
pub const CONIC_MONOMIALS: [Exps; 6] = [
    (2, 0, 0),
    (0, 2, 0),
    (0, 0, 2),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
];

/// A ternary quadratic form together with the 6-vector and symmetric-matrix
/// views used throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct Conic<K> {
    form: TernaryForm<K>,
}

impl<K: Ring> Conic<K> {
    pub fn new(form: TernaryForm<K>) -> Result<Self, TernaryError> {
        if form.degree() != 2 {
            return Err(TernaryError::WrongDegree {
                expected: 2,
                got: form.degree(),
            });
        }
        Ok(Conic { form })
    }

    pub fn form(&self) -> &TernaryForm<K> {
        &self.form
    }

    pub fn from_vec6(v: &[K; 6]) -> Self {
        Conic {
            form: TernaryForm::from_terms(
                2,
                CONIC_MONOMIALS.iter().cloned().zip(v.iter().cloned()),
            ),
        }
    }

    pub fn vec6(&self) -> [K; 6] {
        CONIC_MONOMIALS.map(|e| self.form.coeff(e))
    }

    /// The symmetric matrix M with v^T M v = q(v); off-diagonal entries are
    /// halves of the mixed coefficients.
    pub fn matrix(&self) -> [[K; 3]; 3] {
        let half = K::from_rat(&rat(1, 2));
        let [a, b, c, d, e, f] = self.vec6();
        let hd = half.clone() * d;
        let he = half.clone() * e;
        let hf = half * f;
        [
            [a, hd.clone(), he.clone()],
            [hd, b, hf.clone()],
            [he, hf, c],
        ]
    }

    /// Inverse of [`Conic::matrix`]; fails on non-symmetric input.
    pub fn from_matrix(m: &[[K; 3]; 3]) -> Result<Self, TernaryError> {
        for i in 0..3 {
            for j in (i + 1)..3 {
                if m[i][j] != m[j][i] {
                    return Err(TernaryError::NotSymmetric);
                }
            }
        }
        let two = K::from_int(2);
        Ok(Conic::from_vec6(&[
            m[0][0].clone(),
            m[1][1].clone(),
            m[2][2].clone(),
            two.clone() * m[0][1].clone(),
            two.clone() * m[0][2].clone(),
            two * m[1][2].clone(),
        ]))
    }
}

/// A net of conics: a 3-dimensional subspace of the 6-dimensional conic
/// space, stored as 3 basis conics (coefficient matrix of rank exactly 3).
#[derive(Debug, Clone, PartialEq)]
pub struct Net<K> {
    basis: [Conic<K>; 3],
}

impl<K: Field> Net<K> {
    pub fn new(basis: [Conic<K>; 3]) -> Result<Self, TernaryError> {
        let rows: Vec<Vec<K>> = basis.iter().map(|q| q.vec6().to_vec()).collect();
        if linalg::rank(&rows) != 3 {
            return Err(TernaryError::RankDeficientNet);
        }
        Ok(Net { basis })
    }

    pub fn basis(&self) -> &[Conic<K>; 3] {
        &self.basis
    }

    /// 3x6 coefficient matrix in the canonical conic basis order.
    pub fn coeff_matrix(&self) -> Vec<Vec<K>> {
        self.basis.iter().map(|q| q.vec6().to_vec()).collect()
    }

    /// Membership test: true iff stacking q on the basis leaves the rank at 3.
    pub fn contains(&self, q: &Conic<K>) -> bool {
        let mut rows = self.coeff_matrix();
        rows.push(q.vec6().to_vec());
        linalg::rank(&rows) == 3
    }

    /// The discriminant cubic det(a M1 + b M2 + c M3) in plane coordinates
    /// (a, b, c) against the stored basis.
    pub fn discriminant_cubic(&self) -> TernaryForm<K> {
        let mats: Vec<[[K; 3]; 3]> = self.basis.iter().map(|q| q.matrix()).collect();
        // entry (i, j) of a*M1 + b*M2 + c*M3 as a linear form in (a, b, c)
        let entry = |i: usize, j: usize| -> TernaryForm<K> {
            TernaryForm::from_terms(
                1,
                [
                    ((1, 0, 0), mats[0][i][j].clone()),
                    ((0, 1, 0), mats[1][i][j].clone()),
                    ((0, 0, 1), mats[2][i][j].clone()),
                ],
            )
        };
        let mut acc = TernaryForm::zero_form(3);
        // det via Leibniz expansion over S_3
        const PERMS: [([usize; 3], bool); 6] = [
            ([0, 1, 2], true),
            ([1, 2, 0], true),
            ([2, 0, 1], true),
            ([0, 2, 1], false),
            ([1, 0, 2], false),
            ([2, 1, 0], false),
        ];
        for (perm, positive) in PERMS {
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
}

/// The net spanned by the three partial derivatives of a cubic.
pub fn jacobian_net<K: Field>(phi: &TernaryForm<K>) -> Result<Net<K>, TernaryError> {
    if phi.degree() != 3 {
        return Err(TernaryError::WrongDegree {
            expected: 3,
            got: phi.degree(),
        });
    }
    let basis: Vec<Conic<K>> = (0..3)
        .map(|v| Conic::new(phi.partial_derivative(v)))
        .collect::<Result<_, _>>()?;
    Net::new([basis[0].clone(), basis[1].clone(), basis[2].clone()])
        .map_err(|_| TernaryError::DegenerateJacobian)
}

// ---------------------------------------------------------------------------
// text form: printer / parser for rational-coefficient forms
// ---------------------------------------------------------------------------

/// Variable alphabet used when printing or parsing a form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarSet {
    Xyz,
    Abc,
}

impl VarSet {
    fn names(self) -> [char; 3] {
        match self {
            VarSet::Xyz => ['x', 'y', 'z'],
            VarSet::Abc => ['a', 'b', 'c'],
        }
    }

    fn index(self, ch: char) -> Option<usize> {
        self.names().iter().position(|&c| c == ch)
    }
}

pub fn format_form(f: &TernaryForm<Rat>, vars: VarSet) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let names = vars.names();
    let mut out = String::new();
    let terms: Vec<_> = f.terms().collect();
    for (&(i, j, k), c) in terms.into_iter().rev() {
        let neg = c < &Rat::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        let exps = [i, j, k];
        if !mag.is_one() || exps.iter().all(|&e| e == 0) {
            factors.push(mag.to_string());
        }
        for (v, &e) in exps.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(names[v].to_string()),
                _ => factors.push(format!("{}^{}", names[v], e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Parses strings like `x^2 + 2/3*y*z` (variables x, y, z) or
/// `-b^3 - c^3 + a*b*c` (variables a, b, c). The form must be homogeneous.
pub fn parse_form(s: &str, vars: VarSet) -> Result<TernaryForm<Rat>, TernaryError> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(TernaryError::Parse("empty input".into()));
    }
    // split into signed terms at top level
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut sign = false;
    for (idx, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-')
            && idx != 0
            && !"+-*/^".contains(compact.as_bytes()[idx - 1] as char)
        {
            terms.push((sign, std::mem::take(&mut cur)));
            sign = ch == '-';
        } else if idx == 0 && (ch == '+' || ch == '-') {
            sign = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((sign, cur));

    let mut parsed: Vec<(Exps, Rat)> = Vec::new();
    let mut degree: Option<usize> = None;
    for (neg, term) in terms {
        if term.is_empty() {
            return Err(TernaryError::Parse("empty term".into()));
        }
        let mut coeff = Rat::one();
        let mut exps = [0u8; 3];
        for factor in term.split('*') {
            if factor.is_empty() {
                return Err(TernaryError::Parse(format!("bad term {term:?}")));
            }
            let first = factor.chars().next().unwrap();
            if let Some(v) = vars.index(first) {
                let e: u8 = match factor.len() {
                    1 => 1,
                    _ => {
                        let rest = &factor[1..];
                        let Some(pow) = rest.strip_prefix('^') else {
                            return Err(TernaryError::Parse(format!("bad factor {factor:?}")));
                        };
                        pow.parse()
                            .map_err(|_| TernaryError::Parse(format!("bad exponent {factor:?}")))?
                    }
                };
                exps[v] += e;
            } else {
                coeff *= parse_rat(factor)
                    .map_err(|_| TernaryError::Parse(format!("bad coefficient {factor:?}")))?;
            }
        }
        if neg {
            coeff = -coeff;
        }
        let d = (exps[0] + exps[1] + exps[2]) as usize;
        match degree {
            None => degree = Some(d),
            Some(d0) if d0 != d && !coeff.is_zero() => {
                return Err(TernaryError::Parse("form is not homogeneous".into()))
            }
            _ => {}
        }
        parsed.push(((exps[0], exps[1], exps[2]), coeff));
    }
    Ok(TernaryForm::from_terms(degree.unwrap_or(0), parsed))
}

impl Serialize for TernaryForm<Rat> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            exps: [u8; 3],
            coeff: String,
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (&(i, j, k), c) in &self.terms {
            seq.serialize_element(&Term {
                exps: [i, j, k],
                coeff: c.to_string(),
            })?;
        }
        seq.end()
    }
}

impl fmt::Display for TernaryForm<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_form(self, VarSet::Xyz))
    }
}
