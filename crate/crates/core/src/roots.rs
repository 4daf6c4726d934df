//! Simultaneous complex root finding (Durand-Kerner) plus the small numeric
//! helpers the sweep verifier needs: Newton refinement, span residuals, and
//! singular values of 3x3 complex matrices.
//!
//! Starting points are R * (0.4 + 0.9i)^k for k = 1..=degree, with R the
//! Cauchy root bound, and the iteration cap is 1000; both are fixed so runs
//! are reproducible.

use crate::scalar::Rat;
use crate::scalar::{rat_to_f64, CplxApprox};
use crate::unipoly::UniPoly;
use num_traits::Zero;
use thiserror::Error;

pub const DK_MAX_ITERATIONS: usize = 1000;
pub const DK_START_BASE: (f64, f64) = (0.4, 0.9);

#[derive(Debug, Error, PartialEq)]
pub enum RootError {
    #[error("polynomial must have degree >= 1")]
    DegreeTooSmall,
    #[error("root iteration did not converge (best residual {residual:e})")]
    NonConvergence { residual: f64 },
}

fn horner(coeffs: &[CplxApprox], z: CplxApprox) -> CplxApprox {
    let mut acc = CplxApprox::zero();
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Scale for the relative residual |f(z)| / (sum |c_i| |z|^i).
fn residual_scale(coeffs: &[CplxApprox], z: CplxApprox) -> f64 {
    let r = z.norm();
    let mut scale = 0.0;
    let mut pw = 1.0;
    for c in coeffs {
        scale += c.norm() * pw;
        pw *= r;
    }
    scale.max(f64::MIN_POSITIVE)
}

pub fn relative_residual(coeffs: &[CplxApprox], z: CplxApprox) -> f64 {
    horner(coeffs, z).norm() / residual_scale(coeffs, z)
}

/// All complex roots of the polynomial with the given coefficients
/// (ascending), by simultaneous Durand-Kerner iteration. Deterministic:
/// fixed starting configuration, roots sorted by (re, im).
pub fn durand_kerner(coeffs: &[CplxApprox], tol: f64) -> Result<Vec<CplxApprox>, RootError> {
    let mut cs = coeffs.to_vec();
    while cs.last().is_some_and(|c| c.norm() == 0.0) {
        cs.pop();
    }
    if cs.len() < 2 {
        return Err(RootError::DegreeTooSmall);
    }
    let n = cs.len() - 1;
    let lead = cs[n];
    let monic: Vec<CplxApprox> = cs.iter().map(|c| c / lead).collect();
    let cauchy = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let base = CplxApprox::new(DK_START_BASE.0, DK_START_BASE.1);
    let mut zs: Vec<CplxApprox> = (1..=n).map(|k| base.powu(k as u32) * cauchy).collect();

    let mut best = f64::INFINITY;
    for _ in 0..DK_MAX_ITERATIONS {
        let mut worst = 0.0f64;
        for k in 0..n {
            let fz = horner(&monic, zs[k]);
            let mut denom = CplxApprox::new(1.0, 0.0);
            for j in 0..n {
                if j != k {
                    denom *= zs[k] - zs[j];
                }
            }
            if denom.norm() < 1e-300 {
                // coincident iterates: nudge deterministically
                zs[k] += CplxApprox::new(1e-8, 1e-8);
                worst = f64::INFINITY;
                continue;
            }
            zs[k] -= fz / denom;
        }
        for &z in &zs {
            worst = worst.max(relative_residual(&cs, z));
        }
        best = best.min(worst);
        if worst < tol {
            // final per-root Newton polish tightens simple roots well below
            // the residual stopping level; kept only when it helps
            for z in zs.iter_mut() {
                let polished = newton_polish(&cs, *z, 3);
                if relative_residual(&cs, polished) <= relative_residual(&cs, *z) {
                    *z = polished;
                }
            }
            zs.sort_by(|a, b| {
                a.re.partial_cmp(&b.re)
                    .unwrap()
                    .then(a.im.partial_cmp(&b.im).unwrap())
            });
            return Ok(zs);
        }
    }
    Err(RootError::NonConvergence { residual: best })
}

/// Converts the exact polynomial to f64 coefficients (content stripped first
/// so magnitudes stay in range) and runs Durand-Kerner.
pub fn complex_roots(f: &UniPoly<Rat>, tol: f64) -> Result<Vec<CplxApprox>, RootError> {
    if f.is_zero() || f.degree() < 1 {
        return Err(RootError::DegreeTooSmall);
    }
    let (prim, _) = f.integer_primitive();
    let coeffs: Vec<CplxApprox> = prim
        .coeffs()
        .iter()
        .map(|c| CplxApprox::new(rat_to_f64(c), 0.0))
        .collect();
    durand_kerner(&coeffs, tol)
}

/// A few Newton steps on the (floating-point image of the) polynomial.
pub fn newton_polish(coeffs: &[CplxApprox], mut z: CplxApprox, steps: usize) -> CplxApprox {
    let deriv: Vec<CplxApprox> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect();
    for _ in 0..steps {
        let d = horner(&deriv, z);
        if d.norm() < 1e-300 {
            break;
        }
        z -= horner(coeffs, z) / d;
    }
    z
}

pub fn to_complex_coeffs(f: &UniPoly<Rat>) -> Vec<CplxApprox> {
    f.coeffs()
        .iter()
        .map(|c| CplxApprox::new(rat_to_f64(c), 0.0))
        .collect()
}

// ---------------------------------------------------------------------------
// small complex linear algebra
// ---------------------------------------------------------------------------

/// Hermitian inner product <a, b> = sum a_i * conj(b_i).
pub fn cdot(a: &[CplxApprox], b: &[CplxApprox]) -> CplxApprox {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn cnorm(a: &[CplxApprox]) -> f64 {
    cdot(a, a).re.max(0.0).sqrt()
}

/// Relative distance of `v` from the span of `basis` (modified Gram-Schmidt
/// projection residual); 0 means containment.
pub fn span_residual(v: &[CplxApprox], basis: &[Vec<CplxApprox>]) -> f64 {
    let mut ortho: Vec<Vec<CplxApprox>> = Vec::new();
    for b in basis {
        let mut u = b.clone();
        for o in &ortho {
            let c = cdot(&u, o);
            for (ui, oi) in u.iter_mut().zip(o) {
                *ui -= c * oi;
            }
        }
        let n = cnorm(&u);
        if n > 1e-300 {
            for ui in u.iter_mut() {
                *ui /= n;
            }
            ortho.push(u);
        }
    }
    let vn = cnorm(v);
    if vn == 0.0 {
        return 0.0;
    }
    let mut r: Vec<CplxApprox> = v.to_vec();
    for o in &ortho {
        let c = cdot(&r, o);
        for (ri, oi) in r.iter_mut().zip(o) {
            *ri -= c * oi;
        }
    }
    cnorm(&r) / vn
}

/// Singular values (descending) of a 3x3 complex matrix by one-sided Jacobi
/// (full f64 precision, unlike the eigenvalues of A^H A which lose half the
/// digits and cannot support 1e-8 rank thresholds).
pub fn singular_values_3(a: &[[CplxApprox; 3]; 3]) -> [f64; 3] {
    // columns
    let mut col: [[CplxApprox; 3]; 3] = std::array::from_fn(|j| std::array::from_fn(|i| a[i][j]));
    for _sweep in 0..40 {
        let mut off = 0.0f64;
        for p in 0..3 {
            for q in (p + 1)..3 {
                let app: f64 = col[p].iter().map(|c| c.norm_sqr()).sum();
                let aqq: f64 = col[q].iter().map(|c| c.norm_sqr()).sum();
                let apq: CplxApprox = col[p]
                    .iter()
                    .zip(col[q].iter())
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let g = apq.norm();
                if g <= 1e-30 || g * g <= 1e-32 * app * aqq {
                    continue;
                }
                off = off.max(g / (app * aqq).sqrt().max(f64::MIN_POSITIVE));
                // remove the phase so the 2x2 Gram block is real symmetric
                let phase = apq / g;
                let tau = (aqq - app) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..3 {
                    let vp = col[p][i];
                    let vq = col[q][i] * phase.conj();
                    col[p][i] = vp * c - vq * s;
                    col[q][i] = vp * s + vq * c;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut sv: [f64; 3] =
        std::array::from_fn(|j| col[j].iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Numeric rank of a 3x3 complex matrix at the given relative tolerance.
pub fn numeric_rank_3(a: &[[CplxApprox; 3]; 3], rel_tol: f64) -> usize {
    let sv = singular_values_3(a);
    if sv[0] <= f64::MIN_POSITIVE {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * sv[0]).count()
}

/// Gaussian-elimination solve for small complex systems; `None` if singular
/// to working precision.
pub fn solve_complex(a: &[Vec<CplxApprox>], b: &[CplxApprox]) -> Option<Vec<CplxApprox>> {
    let n = a.len();
    let mut m: Vec<Vec<CplxApprox>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(*rhs);
            r
        })
        .collect();
    for col in 0..n {
        let (pivot, pnorm) = (col..n)
            .map(|r| (r, m[r][col].norm()))
            .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        if pnorm < 1e-250 {
            return None;
        }
        m.swap(col, pivot);
        let inv = CplxApprox::new(1.0, 0.0) / m[col][col];
        for c in col..=n {
            m[col][c] *= inv;
        }
        for r in 0..n {
            if r != col {
                let f = m[r][col];
                if f.norm() == 0.0 {
                    continue;
                }
                for c in col..=n {
                    let delta = f * m[col][c];
                    m[r][c] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n]).collect())
}
