//! Roots of complex polynomials via companion-matrix eigenvalues.
//!
//! The companion matrix is upper Hessenberg, so eigenvalues come from a
//! shifted QR iteration with complex Givens rotations, followed by Newton
//! polishing on the original coefficients.

use crate::error::{GqsvtError, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// All roots of `sum_k coeffs[k] z^k`. The leading coefficient must be
/// nonzero; callers trim degenerate leading terms first.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    assert!(
        coeffs.last().map(|c| c.norm() > 0.0).unwrap_or(false),
        "leading coefficient must be nonzero"
    );
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    if n == 1 {
        return Ok(vec![-coeffs[0] / coeffs[1]]);
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs[..n].iter().map(|c| c / lead).collect();

    let mut h = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        h[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        h[(i, n - 1)] = -monic[i];
    }
    let mut roots = hessenberg_eigenvalues(h)?;
    for r in roots.iter_mut() {
        *r = newton_polish(coeffs, *r);
    }
    Ok(roots)
}

/// Eigenvalues of a complex upper Hessenberg matrix by explicit shifted QR.
fn hessenberg_eigenvalues(mut h: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let mut eigen = Vec::with_capacity(n);
    let mut hi = n;
    let mut stagnation = 0usize;
    let mut total_iters = 0usize;
    let max_iters = 60 * n + 200;

    while hi > 0 {
        if total_iters > max_iters {
            return Err(GqsvtError::EigenNoConvergence);
        }
        // zero negligible subdiagonals inside the active window
        for k in 1..hi {
            let tol = f64::EPSILON * (h[(k - 1, k - 1)].norm() + h[(k, k)].norm()).max(1e-300);
            if h[(k, k - 1)].norm() <= tol {
                h[(k, k - 1)] = Complex64::new(0.0, 0.0);
            }
        }
        if hi == 1 || h[(hi - 1, hi - 2)].norm() == 0.0 {
            eigen.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            stagnation = 0;
            continue;
        }
        // active block [lo, hi)
        let mut lo = hi - 1;
        while lo > 0 && h[(lo, lo - 1)].norm() != 0.0 {
            lo -= 1;
        }

        let shift = if stagnation > 0 && stagnation % 12 == 0 {
            // exceptional shift to escape rare cycling
            h[(hi - 1, hi - 1)]
                + Complex64::new(1.5 * h[(hi - 1, hi - 2)].norm(), 0.5 * h[(hi - 1, hi - 2)].norm())
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };

        qr_step(&mut h, lo, hi, shift);
        total_iters += 1;
        stagnation += 1;

        let tol = f64::EPSILON
            * (h[(hi - 2, hi - 2)].norm() + h[(hi - 1, hi - 1)].norm()).max(1e-300);
        if h[(hi - 1, hi - 2)].norm() <= tol {
            stagnation = 0;
        }
    }
    Ok(eigen)
}

/// Eigenvalue of the trailing 2x2 closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let e1 = tr_half + disc;
    let e2 = tr_half - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

/// One explicit shifted QR sweep on the Hessenberg block `[lo, hi)`.
fn qr_step(h: &mut DMatrix<Complex64>, lo: usize, hi: usize, shift: Complex64) {
    let m = hi - lo;
    if m < 2 {
        return;
    }
    for i in lo..hi {
        h[(i, i)] -= shift;
    }
    // left Givens sweep: eliminate the subdiagonal
    let mut rotations = Vec::with_capacity(m - 1);
    for k in lo..hi - 1 {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        rotations.push((c, s));
        for j in k..hi {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
    }
    // right sweep: RQ restores Hessenberg form; R is upper triangular so
    // columns k, k+1 are populated down to row k+1
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        let last = (k + 1).min(hi - 1);
        for i in lo..=last {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = c * x + s * y;
            h[(i, k + 1)] = -s.conj() * x + c * y;
        }
    }
    for i in lo..hi {
        h[(i, i)] += shift;
    }
}

/// Complex Givens rotation with real `c`: [[c, conj(s)], [-s, c]] * (a, b) = (r, 0).
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, b / bn);
    }
    let r = (an * an + bn * bn).sqrt();
    let c = an / r;
    // s chosen so that -s*a + c*b = 0
    let s = (b * (a.conj() / an)) / r;
    (c, s)
}

fn newton_polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    };
    let (mut pz, _) = eval(z);
    for _ in 0..10 {
        let (p, dp) = eval(z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        let cand = z - step;
        let (pc, _) = eval(cand);
        if pc.norm() < pz.norm() {
            z = cand;
            pz = pc;
            if step.norm() < 1e-16 * z.norm().max(1.0) {
                break;
            }
        } else {
            break;
        }
    }
    z
}
