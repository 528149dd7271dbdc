//! Phase-factor synthesis for generalized quantum signal processing.
//!
//! Given a unit-circle polynomial P with |P| <= 1, finds the rotation angles
//! (theta, phi, lambda) whose alternating product with diag(z, 1) has P as its
//! top-left entry. The complementary polynomial comes from a Fejer-Riesz
//! factorization of 1 - |P|^2; angles are then extracted by layer peeling,
//! with a damped least-squares fallback for ill-conditioned factorizations.

use crate::error::{GqsvtError, Result};
use crate::poly::{eval_unit_circle, UnitCirclePoly};
use crate::roots::polynomial_roots;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest polynomial degree accepted by the synthesis routines.
pub const MAX_PHASE_DEGREE: usize = 128;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Rotation angles realizing a GQSP product of degree `m`:
/// `theta`/`phi` have length `m + 1`, `lambda` enters the zeroth rotation.
#[derive(Debug, Clone)]
pub struct PhaseFactorSet {
    theta: Vec<f64>,
    phi: Vec<f64>,
    lambda: f64,
}

impl PhaseFactorSet {
    pub fn new(theta: Vec<f64>, phi: Vec<f64>, lambda: f64) -> Result<Self> {
        if theta.len() != phi.len() || theta.is_empty() {
            return Err(GqsvtError::ShapeMismatch(
                "theta and phi must have equal nonzero length".into(),
            ));
        }
        if theta.iter().chain(phi.iter()).any(|a| !a.is_finite()) || !lambda.is_finite() {
            return Err(GqsvtError::NonFiniteCoefficient);
        }
        Ok(Self { theta, phi, lambda })
    }

    pub fn degree(&self) -> usize {
        self.theta.len() - 1
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// The 2x2 rotation Upsilon_j; j = 0 carries lambda.
    pub fn rotation(&self, j: usize) -> [[Complex64; 2]; 2] {
        let (st, ct) = self.theta[j].sin_cos();
        let phase = |a: f64| Complex64::from_polar(1.0, a);
        if j == 0 {
            [
                [phase(self.lambda + self.phi[0]) * ct, phase(self.phi[0]) * st],
                [phase(self.lambda) * st, Complex64::new(-ct, 0.0)],
            ]
        } else {
            [
                [phase(self.phi[j]) * ct, phase(self.phi[j]) * st],
                [Complex64::new(st, 0.0), Complex64::new(-ct, 0.0)],
            ]
        }
    }

    /// Top-left entry of the rotation product evaluated at `z = e^{ix}`.
    pub fn eval_product(&self, x: f64) -> Complex64 {
        self.product_matrix(x)[0][0]
    }

    /// Full 2x2 product at `z = e^{ix}`.
    pub fn product_matrix(&self, x: f64) -> [[Complex64; 2]; 2] {
        let z = Complex64::from_polar(1.0, x);
        let mut m = self.rotation(0);
        for j in 1..=self.degree() {
            // A(z) = diag(z, 1) from the left, then Upsilon_j
            let az = [[z * m[0][0], z * m[0][1]], [m[1][0], m[1][1]]];
            let u = self.rotation(j);
            m = [
                [
                    u[0][0] * az[0][0] + u[0][1] * az[1][0],
                    u[0][0] * az[0][1] + u[0][1] * az[1][1],
                ],
                [
                    u[1][0] * az[0][0] + u[1][1] * az[1][0],
                    u[1][0] * az[0][1] + u[1][1] * az[1][1],
                ],
            ];
        }
        m
    }

    /// Maximum grid deviation of the reconstructed polynomial from `target`.
    pub fn max_reconstruction_error(&self, target: &UnitCirclePoly) -> f64 {
        let grid = 4 * self.degree() + 64;
        (0..grid)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / grid as f64;
                (self.eval_product(x) - eval_unit_circle(target, x)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// A polynomial together with its complement: |P|^2 + |Q|^2 = 1 on the circle.
#[derive(Debug, Clone)]
pub struct ComplementaryPair {
    p: UnitCirclePoly,
    q: UnitCirclePoly,
}

impl ComplementaryPair {
    pub fn p(&self) -> &UnitCirclePoly {
        &self.p
    }

    pub fn q(&self) -> &UnitCirclePoly {
        &self.q
    }

    /// Maximum grid deviation of |P|^2 + |Q|^2 from 1.
    pub fn invariant_residual(&self) -> f64 {
        let grid = 4 * self.p.degree() + 64;
        (0..grid)
            .map(|i| {
                let x = 2.0 * PI * i as f64 / grid as f64;
                let pp = eval_unit_circle(&self.p, x).norm_sqr();
                let qq = eval_unit_circle(&self.q, x).norm_sqr();
                (pp + qq - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn grid_max_modulus(p: &UnitCirclePoly) -> f64 {
    p.max_modulus_on_grid(4 * p.degree() + 64)
}

/// Build Q with |P|^2 + |Q|^2 = 1 on the unit circle by factoring the Laurent
/// polynomial G = 1 - P conj-reciprocal(P) through its roots.
pub fn complementary_poly(p: &UnitCirclePoly) -> Result<ComplementaryPair> {
    let m = p.degree();
    if m > MAX_PHASE_DEGREE {
        return Err(GqsvtError::DegreeOverflow(m, MAX_PHASE_DEGREE));
    }
    let max_mod = grid_max_modulus(p);
    if max_mod > 1.0 + 1e-12 {
        return Err(GqsvtError::ModulusExceeded(max_mod));
    }

    // coefficients of z^m G(z): h_l = g_{l-m}, g_k = delta_{k0} - sum_j p_{j+k} conj(p_j)
    let pc = p.coeffs();
    let mut h = vec![ZERO; 2 * m + 1];
    for (l, hl) in h.iter_mut().enumerate() {
        let k = l as i64 - m as i64;
        let mut s = ZERO;
        for j in 0..=m {
            let jk = j as i64 + k;
            if (0..=m as i64).contains(&jk) {
                s += pc[jk as usize] * pc[j].conj();
            }
        }
        *hl = if k == 0 { ONE - s } else { -s };
    }

    let hmax = h.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if hmax <= 1e-13 * (m as f64 + 1.0) {
        // |P| = 1 identically: the complement is zero
        return Ok(ComplementaryPair {
            p: p.clone(),
            q: UnitCirclePoly::new(vec![ZERO]),
        });
    }

    // symmetric trim: h_0 = conj(h_{2m}) by construction, so zero-runs at the
    // origin and at infinity have equal length
    let ztol = 1e-13 * hmax;
    let mut hi = h.len();
    while hi > 1 && h[hi - 1].norm() <= ztol {
        hi -= 1;
    }
    let mut lo = 0;
    while lo + 1 < hi && h[lo].norm() <= ztol {
        lo += 1;
    }
    let origin_zeros = lo;
    let core = &h[lo..hi];

    let mut selected: Vec<Complex64> = vec![ZERO; origin_zeros];
    if core.len() > 1 {
        let roots = polynomial_roots(core)?;
        selected.extend(select_inside_roots(&roots)?);
    }

    // fix the positive scale at the grid angle where G is largest
    let grid = 4 * m + 64;
    let g_at = |x: f64| 1.0 - eval_unit_circle(p, x).norm_sqr();
    let (x0, g0) = (0..grid)
        .map(|i| {
            let x = 2.0 * PI * i as f64 / grid as f64;
            (x, g_at(x))
        })
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .unwrap();
    let monic = poly_from_roots(&selected);
    let q0 = eval_unit_circle(&UnitCirclePoly::new(monic.clone()), x0).norm();
    if q0 == 0.0 {
        return Err(GqsvtError::RootPairing(
            "complement vanishes where G is largest".into(),
        ));
    }
    let alpha = g0.max(0.0).sqrt() / q0;
    let q = UnitCirclePoly::new(monic.into_iter().map(|c| c * alpha).collect());

    let pair = ComplementaryPair { p: p.clone(), q };
    let resid = pair.invariant_residual();
    if resid > 1e-9 {
        return Err(GqsvtError::RootPairing(format!(
            "pair invariant residual {resid:.3e} exceeds 1e-9 (ill-conditioned factorization)"
        )));
    }
    Ok(pair)
}

/// Keep one root per conjugate-reciprocal pair (r, 1/conj(r)): the inner one,
/// and half of each even-multiplicity cluster on the circle.
fn select_inside_roots(roots: &[Complex64]) -> Result<Vec<Complex64>> {
    const BAND: f64 = 1e-7;
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    let mut on_circle = Vec::new();
    for &r in roots {
        let d = r.norm() - 1.0;
        if d.abs() <= BAND {
            on_circle.push(r);
        } else if d < 0.0 {
            inside.push(r);
        } else {
            outside.push(r);
        }
    }
    if on_circle.len() % 2 != 0 {
        return Err(GqsvtError::RootPairing(format!(
            "odd number ({}) of unit-circle roots",
            on_circle.len()
        )));
    }
    if inside.len() != outside.len() {
        return Err(GqsvtError::RootPairing(format!(
            "{} inside vs {} outside roots",
            inside.len(),
            outside.len()
        )));
    }
    // each inside root must be mirrored by an outside root near 1/conj(r)
    let mut used = vec![false; outside.len()];
    for &r in &inside {
        let mirror = ONE / r.conj();
        let mut best: Option<(usize, f64)> = None;
        for (i, &s) in outside.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (s - mirror).norm() / mirror.norm().max(1.0);
            if best.map(|(_, bd)| d < bd).unwrap_or(true) {
                best = Some((i, d));
            }
        }
        match best {
            Some((i, d)) if d <= 1e-6 => used[i] = true,
            _ => {
                return Err(GqsvtError::RootPairing(format!(
                    "no reciprocal partner for root {r} within 1e-6"
                )))
            }
        }
    }
    let mut keep = inside;
    // circle roots come in even-multiplicity clusters; take every other one
    // after sorting by angle so each cluster is split equally
    on_circle.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
    for pair in on_circle.chunks(2) {
        // use the cluster midpoint projected onto the circle
        let mid = (pair[0] + pair[1]) * Complex64::new(0.5, 0.0);
        let root = if mid.norm() > 0.0 {
            mid / mid.norm() * Complex64::new(1.0, 0.0)
        } else {
            pair[0]
        };
        keep.push(root);
    }
    Ok(keep)
}

fn poly_from_roots(roots: &[Complex64]) -> Vec<Complex64> {
    let mut c = vec![ONE];
    for &r in roots {
        let mut next = vec![ZERO; c.len() + 1];
        for (k, &ck) in c.iter().enumerate() {
            next[k] -= r * ck;
            next[k + 1] += ck;
        }
        c = next;
    }
    c
}

fn wrap_angle(a: f64) -> f64 {
    let mut r = a % (2.0 * PI);
    if r <= -PI {
        r += 2.0 * PI;
    } else if r > PI {
        r -= 2.0 * PI;
    }
    r
}

/// Extract rotation angles from a complementary pair by peeling one degree
/// per layer from the top.
pub fn peel_angles(pair: &ComplementaryPair) -> Result<PhaseFactorSet> {
    let (phases, err) = peel_angles_partial(pair);
    match err {
        None => Ok(phases),
        Some(e) => Err(e),
    }
}

/// Peel as far as possible; on failure returns the partial angle set (used to
/// seed the least-squares fallback) together with the error.
fn peel_angles_partial(pair: &ComplementaryPair) -> (PhaseFactorSet, Option<GqsvtError>) {
    let m = pair.p.degree();
    let mut pw: Vec<Complex64> = pair.p.coeffs().to_vec();
    let mut qw: Vec<Complex64> = pair.q.coeffs().to_vec();
    qw.resize(m + 1, ZERO);

    let mut theta = vec![0.0; m + 1];
    let mut phi = vec![0.0; m + 1];
    let mut failure = None;
    const TINY: f64 = 1e-12;

    for j in (1..=m).rev() {
        let pj = pw[j];
        let qj = qw[j];
        let (th, ph) = if qj.norm() < TINY && pj.norm() < TINY {
            failure = Some(GqsvtError::DegreeDeflation(j));
            break;
        } else if qj.norm() < TINY {
            (0.0, 0.0)
        } else if pj.norm() < TINY {
            (PI / 2.0, 0.0)
        } else {
            (qj.norm().atan2(pj.norm()), wrap_angle(pj.arg() - qj.arg()))
        };
        theta[j] = th;
        phi[j] = ph;

        let (st, ct) = th.sin_cos();
        let e = Complex64::from_polar(1.0, -ph);
        let scale = pw
            .iter()
            .chain(qw.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
            .max(1e-30);
        let mut new_p = vec![ZERO; j + 1];
        let mut new_q = vec![ZERO; j + 1];
        for l in 0..=j {
            new_p[l] = ct * e * pw[l] + st * qw[l];
            new_q[l] = st * e * pw[l] - ct * qw[l];
        }
        // unitarity forces the constant term of the rotated P to vanish
        let resid = new_p[0].norm();
        if resid > 1e-9 * scale {
            failure = Some(GqsvtError::PeelInconsistency { layer: j, residual: resid });
            break;
        }
        pw = new_p[1..].to_vec();
        qw = new_q[..j].to_vec();
    }

    let (lambda, phi0, theta0) = if failure.is_none() {
        let p0 = pw[0];
        let q0 = qw[0];
        let lam = if q0.norm() > 1e-14 { q0.arg() } else { 0.0 };
        let p_arg = if p0.norm() > 1e-14 { p0.arg() } else { 0.0 };
        (lam, wrap_angle(p_arg - lam), q0.norm().atan2(p0.norm()))
    } else {
        (0.0, 0.0, 0.0)
    };
    theta[0] = theta0;
    phi[0] = phi0;
    let phases = PhaseFactorSet {
        theta,
        phi,
        lambda,
    };
    (phases, failure)
}

/// Expand the full rotation product symbolically and return the top-left
/// polynomial.
pub fn reconstruct_poly(phases: &PhaseFactorSet) -> UnitCirclePoly {
    UnitCirclePoly::new(reconstruct_matrix(phases)[0][0].clone())
}

/// Coefficient vectors of all four entries of the rotation product.
pub fn reconstruct_matrix(phases: &PhaseFactorSet) -> [[Vec<Complex64>; 2]; 2] {
    let m = phases.degree();
    let u0 = phases.rotation(0);
    let mut mat = [
        [vec![u0[0][0]], vec![u0[0][1]]],
        [vec![u0[1][0]], vec![u0[1][1]]],
    ];
    for j in 1..=m {
        let u = phases.rotation(j);
        let shift = |v: &[Complex64]| {
            let mut out = vec![ZERO];
            out.extend_from_slice(v);
            out
        };
        let top = [shift(&mat[0][0]), shift(&mat[0][1])];
        let axpy = |a: Complex64, x: &[Complex64], b: Complex64, y: &[Complex64]| {
            let n = x.len().max(y.len());
            let mut out = vec![ZERO; n];
            for (k, o) in out.iter_mut().enumerate() {
                let xv = x.get(k).copied().unwrap_or(ZERO);
                let yv = y.get(k).copied().unwrap_or(ZERO);
                *o = a * xv + b * yv;
            }
            out
        };
        mat = [
            [
                axpy(u[0][0], &top[0], u[0][1], &mat[1][0]),
                axpy(u[0][0], &top[1], u[0][1], &mat[1][1]),
            ],
            [
                axpy(u[1][0], &top[0], u[1][1], &mat[1][0]),
                axpy(u[1][0], &top[1], u[1][1], &mat[1][1]),
            ],
        ];
    }
    mat
}

/// Full synthesis: complementary polynomial, peel, verification, and a damped
/// least-squares fallback when factorization or peeling is ill-conditioned.
pub fn solve_phases(p: &UnitCirclePoly) -> Result<PhaseFactorSet> {
    let m = p.degree();
    if m > MAX_PHASE_DEGREE {
        return Err(GqsvtError::DegreeOverflow(m, MAX_PHASE_DEGREE));
    }
    let max_mod = grid_max_modulus(p);
    if max_mod > 1.0 + 1e-12 {
        return Err(GqsvtError::ModulusExceeded(max_mod));
    }

    let mut best: Option<(PhaseFactorSet, f64)> = None;
    let mut consider = |phases: PhaseFactorSet, err: f64, best: &mut Option<(PhaseFactorSet, f64)>| {
        if best.as_ref().map(|(_, e)| err < *e).unwrap_or(true) {
            *best = Some((phases, err));
        }
    };

    let seed = match complementary_poly(p) {
        Ok(pair) => {
            let (phases, peel_err) = peel_angles_partial(&pair);
            let err = phases.max_reconstruction_error(p);
            consider(phases.clone(), err, &mut best);
            if peel_err.is_none() && err <= 1e-8 {
                // cheap polish pass tightens the reconstruction further
                let polished = refine_least_squares(p, phases, 6);
                let perr = polished.max_reconstruction_error(p);
                consider(polished, perr, &mut best);
                return Ok(best.unwrap().0);
            }
            phases
        }
        Err(_) => PhaseFactorSet {
            theta: vec![0.0; m + 1],
            phi: vec![0.0; m + 1],
            lambda: 0.0,
        },
    };

    let refined = refine_least_squares(p, seed, 500);
    let err = refined.max_reconstruction_error(p);
    consider(refined, err, &mut best);
    let (phases, err) = best.unwrap();
    if err <= 1e-8 {
        Ok(phases)
    } else {
        Err(GqsvtError::SynthesisFailure(err))
    }
}

/// Levenberg-Marquardt style damped least squares over all angles, minimizing
/// the squared reconstruction error on the verification grid.
fn refine_least_squares(
    target: &UnitCirclePoly,
    start: PhaseFactorSet,
    max_iters: usize,
) -> PhaseFactorSet {
    let m = start.degree();
    let grid: Vec<f64> = (0..4 * m + 64)
        .map(|i| 2.0 * PI * i as f64 / (4 * m + 64) as f64)
        .collect();
    let tvals: Vec<Complex64> = grid.iter().map(|&x| eval_unit_circle(target, x)).collect();
    let nparams = 2 * (m + 1) + 1;

    let pack = |p: &PhaseFactorSet| -> DVector<f64> {
        let mut v = DVector::zeros(nparams);
        for j in 0..=m {
            v[j] = p.theta[j];
            v[m + 1 + j] = p.phi[j];
        }
        v[nparams - 1] = p.lambda;
        v
    };
    let unpack = |v: &DVector<f64>| -> PhaseFactorSet {
        PhaseFactorSet {
            theta: (0..=m).map(|j| v[j]).collect(),
            phi: (0..=m).map(|j| v[m + 1 + j]).collect(),
            lambda: v[nparams - 1],
        }
    };
    let residuals = |v: &DVector<f64>| -> DVector<f64> {
        let p = unpack(v);
        let mut r = DVector::zeros(2 * grid.len());
        for (i, &x) in grid.iter().enumerate() {
            let d = p.eval_product(x) - tvals[i];
            r[2 * i] = d.re;
            r[2 * i + 1] = d.im;
        }
        r
    };

    let mut x = pack(&start);
    let mut r = residuals(&x);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;

    for _ in 0..max_iters {
        if r.amax() < 5e-15 {
            break;
        }
        // forward-difference Jacobian
        let mut jac = DMatrix::zeros(r.len(), nparams);
        let h = 1e-7;
        for k in 0..nparams {
            let mut xp = x.clone();
            xp[k] += h;
            let rp = residuals(&xp);
            for i in 0..r.len() {
                jac[(i, k)] = (rp[i] - r[i]) / h;
            }
        }
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * &r;
        let mut improved = false;
        for _ in 0..8 {
            let mut a = jtj.clone();
            for k in 0..nparams {
                a[(k, k)] += mu * (jtj[(k, k)].abs() + 1e-12);
            }
            if let Some(chol) = a.cholesky() {
                let step = chol.solve(&(-&jtr));
                let xc = &x + &step;
                let rc = residuals(&xc);
                let cc = rc.norm_squared();
                if cc < cost {
                    x = xc;
                    r = rc;
                    cost = cc;
                    mu = (mu / 3.0).max(1e-14);
                    improved = true;
                    break;
                }
            }
            mu *= 4.0;
            if mu > 1e14 {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    unpack(&x)
}
