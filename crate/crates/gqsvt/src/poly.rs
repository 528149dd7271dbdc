//! Polynomial representations: monomial, Chebyshev, Laurent on the unit
//! circle, and the shifted unit-circle form, plus extremum search on [-1, 1].

use crate::error::{GqsvtError, Result};
use num_complex::Complex64;

/// Largest polynomial degree accepted by the conversion and extremum routines.
pub const MAX_DEGREE: usize = 512;

/// Real polynomial in the monomial basis, `coeffs[l]` multiplying `x^l`.
///
/// Trailing zero coefficients are trimmed on construction so the leading
/// coefficient is nonzero unless the polynomial is identically zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly {
    coeffs: Vec<f64>,
}

impl MonomialPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(GqsvtError::NonFiniteCoefficient);
        }
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0.0 {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Ok(Self { coeffs })
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![c])
    }

    /// x^k
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = 1.0;
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == 0.0
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, l: usize) -> f64 {
        self.coeffs.get(l).copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// x * p(x); used for the shifted direction polynomials.
    pub fn times_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![0.0];
        coeffs.extend_from_slice(&self.coeffs);
        Self { coeffs }
    }

    /// Parity of the nonzero support: all-even, all-odd, or mixed.
    pub fn parity_structure(&self) -> ParityStructure {
        let mut even = false;
        let mut odd = false;
        for (l, &c) in self.coeffs.iter().enumerate() {
            if c != 0.0 {
                if l % 2 == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        match (even, odd) {
            (true, true) => ParityStructure::Mixed,
            (false, true) => ParityStructure::Odd,
            _ => ParityStructure::Even,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityStructure {
    Even,
    Odd,
    Mixed,
}

/// Real polynomial in the Chebyshev basis, `coeffs[j]` multiplying `T_j(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevPoly {
    coeffs: Vec<f64>,
}

impl ChebyshevPoly {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(GqsvtError::NonFiniteCoefficient);
        }
        if coeffs.is_empty() {
            return Ok(Self { coeffs: vec![0.0] });
        }
        Ok(Self { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Clenshaw recurrence for `sum_j a_j T_j(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.coeffs.len();
        if n == 1 {
            return self.coeffs[0];
        }
        let mut b_k1 = 0.0;
        let mut b_k2 = 0.0;
        let two_x = 2.0 * x;
        for k in (1..n).rev() {
            let b_k = two_x * b_k1 - b_k2 + self.coeffs[k];
            b_k2 = b_k1;
            b_k1 = b_k;
        }
        x * b_k1 - b_k2 + self.coeffs[0]
    }
}

/// Exact basis change from monomials to Chebyshev polynomials via the
/// coefficient recurrence `x T_j = (T_{j+1} + T_{j-1}) / 2`.
pub fn monomial_to_chebyshev(p: &MonomialPoly) -> Result<ChebyshevPoly> {
    if p.degree() > MAX_DEGREE {
        return Err(GqsvtError::DegreeOverflow(p.degree(), MAX_DEGREE));
    }
    let d = p.degree();
    let mut acc = vec![0.0; d + 1];
    // basis[j] = Chebyshev coefficients of x^l, updated in place
    let mut basis = vec![0.0; d + 1];
    basis[0] = 1.0;
    acc[0] = p.coeff(0);
    let mut next = vec![0.0; d + 1];
    for l in 1..=d {
        next.iter_mut().for_each(|v| *v = 0.0);
        for (j, &bj) in basis.iter().enumerate().take(l) {
            if bj == 0.0 {
                continue;
            }
            if j == 0 {
                next[1] += bj;
            } else {
                next[j + 1] += 0.5 * bj;
                next[j - 1] += 0.5 * bj;
            }
        }
        std::mem::swap(&mut basis, &mut next);
        let cl = p.coeff(l);
        if cl != 0.0 {
            for (aj, &bj) in acc.iter_mut().zip(basis.iter()) {
                *aj += cl * bj;
            }
        }
    }
    ChebyshevPoly::new(acc)
}

/// Laurent polynomial on the unit circle, coefficients `c_j` for
/// `j = -degree ..= degree`, stored as `coeffs[j + degree]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    coeffs: Vec<Complex64>,
    degree: usize,
}

impl LaurentPoly {
    pub fn new(coeffs: Vec<Complex64>, degree: usize) -> Result<Self> {
        if coeffs.len() != 2 * degree + 1 {
            return Err(GqsvtError::ShapeMismatch(format!(
                "Laurent coefficient count {} does not match 2*{degree}+1",
                coeffs.len()
            )));
        }
        Ok(Self { coeffs, degree })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, j: i64) -> Complex64 {
        let d = self.degree as i64;
        if j < -d || j > d {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(j + d) as usize]
        }
    }

    /// Evaluate `sum_j c_j e^{i j eta}`.
    pub fn eval_at_angle(&self, eta: f64) -> Complex64 {
        let d = self.degree as i64;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in -d..=d {
            sum += self.coeff(j) * Complex64::from_polar(1.0, j as f64 * eta);
        }
        sum
    }
}

/// Re-express a Chebyshev expansion as a Laurent polynomial in `e^{i eta}`:
/// `c_{+-j} = a_j / 2` for `j >= 1` and `c_0 = a_0`, so that
/// `f(cos eta) = sum_j c_j e^{i j eta}` holds identically.
pub fn laurent_from_chebyshev(c: &ChebyshevPoly) -> LaurentPoly {
    let d = c.degree();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * d + 1];
    coeffs[d] = Complex64::new(c.coeffs()[0], 0.0);
    for j in 1..=d {
        let half = Complex64::new(0.5 * c.coeffs()[j], 0.0);
        coeffs[d + j] = half;
        coeffs[d - j] = half;
    }
    LaurentPoly { coeffs, degree: d }
}

/// Ordinary polynomial in `z` restricted to the unit circle, `coeffs[k]`
/// multiplying `z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitCirclePoly {
    coeffs: Vec<Complex64>,
}

impl UnitCirclePoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            return Self {
                coeffs: vec![Complex64::new(0.0, 0.0)],
            };
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Maximum of `|P(e^{ix})|` over a uniform grid of `npts` angles.
    pub fn max_modulus_on_grid(&self, npts: usize) -> f64 {
        (0..npts)
            .map(|i| {
                let x = 2.0 * std::f64::consts::PI * i as f64 / npts as f64;
                eval_unit_circle(self, x).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Shift `f~_d(z) = sum c_j z^j` to the ordinary polynomial
/// `f^_{2d}(z) = z^d f~_d(z)`, i.e. `p_{d+j} = c_j`.
pub fn shift_to_unit_circle(l: &LaurentPoly) -> UnitCirclePoly {
    UnitCirclePoly::new(l.coeffs.clone())
}

/// Horner evaluation of a unit-circle polynomial at `z = e^{ix}`.
pub fn eval_unit_circle(q: &UnitCirclePoly, x: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, x);
    q.coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Maximum of `|p(x)|` over `[-1, 1]`.
///
/// Samples `max(64, 8 * degree)` Chebyshev nodes, then refines with
/// golden-section search around the best node and both endpoints.
pub fn poly_max_on_interval(p: &MonomialPoly) -> Result<f64> {
    if p.degree() > MAX_DEGREE {
        return Err(GqsvtError::DegreeOverflow(p.degree(), MAX_DEGREE));
    }
    if p.is_zero() {
        return Ok(0.0);
    }
    let n = usize::max(64, 8 * p.degree());
    let mut best = f64::max(p.eval(-1.0).abs(), p.eval(1.0).abs());
    let mut best_idx = None;
    let node = |i: usize| (std::f64::consts::PI * (i as f64 + 0.5) / n as f64).cos();
    for i in 0..n {
        let v = p.eval(node(i)).abs();
        if v > best {
            best = v;
            best_idx = Some(i);
        }
    }
    let mut refine = |a: f64, b: f64, acc: f64| -> f64 {
        golden_section_max(|x| p.eval(x).abs(), a, b).max(acc)
    };
    // nodes are ordered decreasing in x; bracket with the neighbors
    if let Some(i) = best_idx {
        let lo = if i + 1 < n { node(i + 1) } else { -1.0 };
        let hi = if i > 0 { node(i - 1) } else { 1.0 };
        best = refine(lo, hi, best);
    }
    best = refine(-1.0, node(n - 1), best);
    best = refine(node(0), 1.0, best);
    Ok(best)
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    const INVPHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > 1e-13 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INVPHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INVPHI * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    fn cheb_of(coeffs: &[f64]) -> ChebyshevPoly {
        monomial_to_chebyshev(&MonomialPoly::new(coeffs.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn x_squared_in_chebyshev_basis() {
        let c = cheb_of(&[0.0, 0.0, 1.0]);
        assert_eq!(c.coeffs(), &[0.5, 0.0, 0.5]);
    }

    #[test]
    fn x_in_chebyshev_basis() {
        let c = cheb_of(&[0.0, 1.0]);
        assert_eq!(c.coeffs(), &[0.0, 1.0]);
    }

    #[test]
    fn chebyshev_conversion_matches_direct_evaluation() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        let coeffs: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = MonomialPoly::new(coeffs).unwrap();
        let c = monomial_to_chebyshev(&p).unwrap();
        let bound: f64 = 1e-12 * c.coeffs().iter().map(|a| a.abs()).sum::<f64>().max(1.0);
        for i in 0..33 {
            let x = (std::f64::consts::PI * (i as f64 + 0.5) / 33.0).cos();
            assert!((c.eval(x) - p.eval(x)).abs() <= bound);
        }
    }

    #[test]
    fn degree_overflow_is_rejected() {
        let p = MonomialPoly::monomial(MAX_DEGREE + 1);
        assert!(matches!(
            monomial_to_chebyshev(&p),
            Err(GqsvtError::DegreeOverflow(..))
        ));
    }

    #[test]
    fn laurent_of_t1() {
        let l = laurent_from_chebyshev(&ChebyshevPoly::new(vec![0.0, 1.0]).unwrap());
        assert_eq!(l.coeff(1), Complex64::new(0.5, 0.0));
        assert_eq!(l.coeff(-1), Complex64::new(0.5, 0.0));
        assert_eq!(l.coeff(0), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn laurent_of_constant_keeps_full_weight() {
        let l = laurent_from_chebyshev(&ChebyshevPoly::new(vec![1.0]).unwrap());
        assert_eq!(l.coeff(0), Complex64::new(1.0, 0.0));
        assert!((l.eval_at_angle(0.7) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn laurent_of_x_squared() {
        let l = laurent_from_chebyshev(&cheb_of(&[0.0, 0.0, 1.0]));
        assert_eq!(l.coeff(2), Complex64::new(0.25, 0.0));
        assert_eq!(l.coeff(-2), Complex64::new(0.25, 0.0));
        assert_eq!(l.coeff(0), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn shift_examples() {
        let l = LaurentPoly::new(vec![Complex64::new(1.0, 0.0)], 0).unwrap();
        let p = shift_to_unit_circle(&l);
        assert_eq!(p.coeffs(), &[Complex64::new(1.0, 0.0)]);

        let l = laurent_from_chebyshev(&ChebyshevPoly::new(vec![0.0, 1.0]).unwrap());
        let p = shift_to_unit_circle(&l);
        assert_eq!(
            p.coeffs(),
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0)
            ]
        );

        let l = laurent_from_chebyshev(&cheb_of(&[0.0, 0.0, 1.0]));
        let p = shift_to_unit_circle(&l);
        assert_eq!(
            p.coeffs(),
            &[
                Complex64::new(0.25, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.5, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.25, 0.0)
            ]
        );
    }

    #[test]
    fn shift_relates_evaluations() {
        // f^_{2d}(e^{ix}) = e^{idx} f~_d(e^{ix}) on 64 circle points
        let p = MonomialPoly::new(vec![0.3, -0.2, 0.0, 0.5]).unwrap();
        let l = laurent_from_chebyshev(&monomial_to_chebyshev(&p).unwrap());
        let q = shift_to_unit_circle(&l);
        let d = l.degree() as f64;
        for i in 0..64 {
            let x = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
            let lhs = eval_unit_circle(&q, x);
            let rhs = Complex64::from_polar(1.0, d * x) * l.eval_at_angle(x);
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn unit_circle_eval_examples() {
        let p = UnitCirclePoly::new(vec![Complex64::new(1.0, 0.0)]);
        assert!((eval_unit_circle(&p, 0.3) - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let p = UnitCirclePoly::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((eval_unit_circle(&p, std::f64::consts::PI) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn unit_circle_eval_matches_term_sum() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let coeffs: Vec<Complex64> = (0..9)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let p = UnitCirclePoly::new(coeffs.clone());
        for i in 0..100 {
            let x = 2.0 * std::f64::consts::PI * i as f64 / 100.0;
            let direct: Complex64 = coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c * Complex64::from_polar(1.0, k as f64 * x))
                .sum();
            assert!((eval_unit_circle(&p, x) - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn max_of_t5_is_one() {
        // T_5(x) = 16 x^5 - 20 x^3 + 5 x equioscillates with extremum 1
        let p = MonomialPoly::new(vec![0.0, 5.0, 0.0, -20.0, 0.0, 16.0]).unwrap();
        let m = poly_max_on_interval(&p).unwrap();
        assert!((m - 1.0).abs() < 1e-10);
    }

    #[test]
    fn max_of_x_squared_is_at_endpoint() {
        let p = MonomialPoly::new(vec![0.0, 0.0, 1.0]).unwrap();
        assert!((poly_max_on_interval(&p).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn max_matches_dense_grid_oracle() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..5 {
            let coeffs: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let p = MonomialPoly::new(coeffs).unwrap();
            let m = poly_max_on_interval(&p).unwrap();
            let mut oracle: f64 = 0.0;
            let n = 1_000_000;
            for i in 0..=n {
                let x = -1.0 + 2.0 * i as f64 / n as f64;
                oracle = oracle.max(p.eval(x).abs());
            }
            assert!((m - oracle).abs() <= 1e-8 * oracle.max(1.0));
            assert!(m >= oracle - 1e-10);
        }
    }

    #[test]
    fn max_never_undershoots_random_points() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let coeffs: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let p = MonomialPoly::new(coeffs).unwrap();
        let m = poly_max_on_interval(&p).unwrap();
        for _ in 0..10_000 {
            let x = rng.gen_range(-1.0..=1.0);
            assert!(m >= p.eval(x).abs() - 1e-10);
        }
    }

    proptest! {
        #[test]
        fn roundtrip_monomial_chebyshev_eval(coeffs in proptest::collection::vec(-1.0f64..1.0, 1..12)) {
            let p = MonomialPoly::new(coeffs).unwrap();
            let c = monomial_to_chebyshev(&p).unwrap();
            let bound = 1e-12 * c.coeffs().iter().map(|a| a.abs()).sum::<f64>().max(1.0);
            for i in 0..101 {
                let x = -1.0 + 2.0 * i as f64 / 100.0;
                prop_assert!((c.eval(x) - p.eval(x)).abs() <= bound);
            }
        }

        #[test]
        fn laurent_form_evaluates_to_the_polynomial(coeffs in proptest::collection::vec(-1.0f64..1.0, 1..10)) {
            let p = MonomialPoly::new(coeffs).unwrap();
            let l = laurent_from_chebyshev(&monomial_to_chebyshev(&p).unwrap());
            let bound = 1e-12 * l.coeffs.iter().map(|c| c.norm()).sum::<f64>().max(1.0);
            for i in 0..41 {
                let x = -1.0 + 2.0 * i as f64 / 40.0;
                let eta = x.acos();
                let v = l.eval_at_angle(eta);
                prop_assert!((v - Complex64::new(p.eval(x), 0.0)).norm() <= bound);
            }
        }

        #[test]
        fn shift_preserves_modulus(coeffs in proptest::collection::vec(-1.0f64..1.0, 1..10)) {
            let p = MonomialPoly::new(coeffs).unwrap();
            let l = laurent_from_chebyshev(&monomial_to_chebyshev(&p).unwrap());
            let q = shift_to_unit_circle(&l);
            for i in 0..37 {
                let x = 2.0 * std::f64::consts::PI * i as f64 / 37.0;
                prop_assert!((eval_unit_circle(&q, x).norm() - l.eval_at_angle(x).norm()).abs() < 1e-12);
            }
        }
    }
}
