//! Scalar special functions: log-gamma, regularized incomplete gamma and
//! beta, digamma.
//!
//! Everything here is a pure function of its arguments. Iterative
//! evaluations are capped and report [`Error::NoConvergence`] instead of
//! returning a partially converged value.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const FPMIN: f64 = f64::MIN_POSITIVE / EPS;

/// `exp` of anything below this is zero in double precision.
const LN_UNDERFLOW: f64 = -745.2;

const MIN_ITERATIONS: usize = 300;

/// Iteration budget for series and continued fractions whose convergence
/// slows like `sqrt(scale)` near the transition point.
fn iteration_cap(scale: f64) -> usize {
    MIN_ITERATIONS.max((12.0 * scale.sqrt()) as usize + 50)
}

/// Coefficients `B_2n / (2n (2n - 1))` of the Stirling series.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const STIRLING_MIN_ARG: f64 = 10.0;

fn ln_gamma_stirling(z: f64) -> f64 {
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut pow = inv;
    let mut tail = 0.0;
    for c in STIRLING {
        tail += c * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + tail
}

/// Natural logarithm of the gamma function for `x > 0`.
///
/// Arguments below 10 are lifted with `Γ(x) = Γ(x + n) / (x (x+1) … (x+n-1))`
/// before the Stirling series is applied.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("ln_gamma", format!("x = {x}, need 0 < x < inf")));
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < STIRLING_MIN_ARG {
        prod *= z;
        z += 1.0;
    }
    Ok(ln_gamma_stirling(z) - prod.ln())
}

/// `ln B(a, b) = ln Γ(a) + ln Γ(b) - ln Γ(a + b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    Ok(ln_gamma(a)? + ln_gamma(b)? - ln_gamma(a + b)?)
}

/// Regularized lower incomplete gamma function `P(a, x) = γ(a, x) / Γ(a)`,
/// the CDF of a Gamma(a, 1) variate evaluated at `x`.
pub fn reg_lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain("reg_lower_inc_gamma", format!("a = {a}, need a > 0")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain("reg_lower_inc_gamma", format!("x = {x}, need x >= 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }

    let log_prefactor = a * x.ln() - x - ln_gamma(a)?;
    if x < a + 1.0 {
        // sum <= (1/a) / (1 - x/(a+1)) bounds the series from above
        let log_bound = log_prefactor - a.ln() - (-x / (a + 1.0)).ln_1p();
        if log_bound < LN_UNDERFLOW {
            return Ok(0.0);
        }
        let sum = lower_gamma_series(a, x)?;
        Ok((log_prefactor + sum.ln()).exp().min(1.0))
    } else {
        // the continued fraction is bounded by 1 in this region
        if log_prefactor < LN_UNDERFLOW {
            return Ok(1.0);
        }
        let cf = upper_gamma_fraction(a, x)?;
        Ok((1.0 - (log_prefactor + cf.ln()).exp()).max(0.0))
    }
}

/// `Σ_n x^n / (a (a+1) … (a+n))`, so that `P(a, x) = x^a e^-x / Γ(a) · sum`.
fn lower_gamma_series(a: f64, x: f64) -> Result<f64> {
    let cap = iteration_cap(a);
    let mut denom = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..cap {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        function: "reg_lower_inc_gamma (series)",
        iterations: cap,
    })
}

/// Modified Lentz evaluation of the continued fraction for `Γ(a, x) e^x x^-a`.
fn upper_gamma_fraction(a: f64, x: f64) -> Result<f64> {
    let cap = iteration_cap(a.max(x));
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=cap {
        let i = i as f64;
        let an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        function: "reg_lower_inc_gamma (continued fraction)",
        iterations: cap,
    })
}

/// Regularized incomplete beta function `I_x(a, b) = B(x; a, b) / B(a, b)`.
pub fn reg_inc_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("reg_inc_beta", format!("x = {x}, need 0 <= x <= 1")));
    }
    if !(a > 0.0) || !a.is_finite() || !(b > 0.0) || !b.is_finite() {
        return Err(Error::domain("reg_inc_beta", format!("a = {a}, b = {b}, need a, b > 0")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }

    let log_prefactor = a * x.ln() + b * (-x).ln_1p() - ln_beta(a, b)?;
    let value = if x < (a + 1.0) / (a + b + 2.0) {
        (log_prefactor + beta_fraction(x, a, b)?.ln()).exp() / a
    } else {
        1.0 - (log_prefactor + beta_fraction(1.0 - x, b, a)?.ln()).exp() / b
    };
    Ok(value.clamp(0.0, 1.0))
}

fn beta_fraction(x: f64, a: f64, b: f64) -> Result<f64> {
    let cap = iteration_cap(a.max(b));
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let fix = |v: f64| if v.abs() < FPMIN { FPMIN } else { v };

    let mut c = 1.0;
    let mut d = 1.0 / fix(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=cap {
        let m = m as f64;
        let m2 = 2.0 * m;

        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / fix(1.0 + aa * d);
        c = fix(1.0 + aa / c);
        h *= d * c;

        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / fix(1.0 + aa * d);
        c = fix(1.0 + aa / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        function: "reg_inc_beta",
        iterations: cap,
    })
}

const DIGAMMA_MIN_ARG: f64 = 6.0;

/// Digamma function `ψ(x) = d/dx ln Γ(x)` for `x > 0`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("digamma", format!("x = {x}, need 0 < x < inf")));
    }
    let mut z = x;
    let mut acc = 0.0;
    while z < DIGAMMA_MIN_ARG {
        acc -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    // ψ(z) ~ ln z - 1/(2z) - Σ B_2n / (2n z^2n)
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32_760.0 - inv2 / 12.0))))));
    Ok(acc + z.ln() - 0.5 / z - series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ln_gamma_small_integers() {
        assert_abs_diff_eq!(ln_gamma(1.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(2.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(ln_gamma(5.0).unwrap(), 24f64.ln(), epsilon = 1e-14);
        let mut fact = 1.0f64;
        for n in 1..30 {
            fact *= n as f64;
            let lg = ln_gamma(n as f64 + 1.0).unwrap();
            assert!((lg - fact.ln()).abs() <= 1e-13 * fact.ln().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn ln_gamma_half_from_duplication() {
        // Γ(x) Γ(x + 1/2) = 2^(1 - 2x) sqrt(pi) Γ(2x); at x = 1/2 this pins Γ(1/2) = sqrt(pi)
        let expected = 0.5 * PI.ln();
        assert_abs_diff_eq!(expected, 0.5723649429247001, epsilon = 1e-15);
        assert_abs_diff_eq!(ln_gamma(0.5).unwrap(), expected, epsilon = 1e-14);
        for &x in &[0.013, 0.3, 0.77, 1.9, 4.2, 9.6, 33.3, 250.0, 4321.0] {
            let lhs = ln_gamma(x).unwrap() + ln_gamma(x + 0.5).unwrap();
            let rhs = (1.0 - 2.0 * x) * 2f64.ln() + 0.5 * PI.ln() + ln_gamma(2.0 * x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_reflection() {
        // Γ(x) Γ(1 - x) = pi / sin(pi x)
        for &x in &[1e-6, 0.01, 0.1, 0.25, 0.4, 0.6, 0.93] {
            let lhs = ln_gamma(x).unwrap() + ln_gamma(1.0 - x).unwrap();
            let rhs = PI.ln() - (PI * x).sin().ln();
            assert!((lhs - rhs).abs() <= 1e-13 * rhs.abs().max(1.0), "x = {x}");
        }
    }

    #[test]
    fn ln_gamma_large_argument() {
        // Stirling with the first two correction terms is exact to ~1e-26 relative here
        let x: f64 = 1e6;
        let approx = (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + 1.0 / (12.0 * x)
            - 1.0 / (360.0 * x.powi(3));
        let lg = ln_gamma(x).unwrap();
        assert!(((lg - approx) / approx).abs() < 1e-15);
        assert!(ln_gamma(1300.0).unwrap().is_finite());
    }

    #[test]
    fn ln_gamma_rejects_nonpositive() {
        assert!(matches!(ln_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(ln_gamma(-1.5), Err(Error::Domain { .. })));
        assert!(ln_gamma(f64::NAN).is_err());
    }

    #[test]
    fn lower_gamma_examples() {
        assert_eq!(reg_lower_inc_gamma(2.5, 0.0).unwrap(), 0.0);
        for &x in &[0.01f64, 0.5, 1.0, 2.0, 7.0, 30.0] {
            let expected = -(-x).exp_m1();
            assert_abs_diff_eq!(reg_lower_inc_gamma(1.0, x).unwrap(), expected, epsilon = 1e-12);
        }
        let expected = 1.0 - (-3.0f64).exp() * (1.0 + 3.0 + 4.5);
        assert_abs_diff_eq!(expected, 0.5768099188731565, epsilon = 1e-15);
        assert_abs_diff_eq!(reg_lower_inc_gamma(3.0, 3.0).unwrap(), expected, epsilon = 1e-12);
    }

    #[test]
    fn lower_gamma_integer_shape_closed_form() {
        // P(n, x) = 1 - e^-x Σ_{m<n} x^m / m!
        for n in [2usize, 5, 12, 40] {
            for &x in &[0.3, 1.0, 4.0, 11.0, 39.0, 60.0] {
                let mut term = 1.0;
                let mut sum = 1.0;
                for m in 1..n {
                    term *= x / m as f64;
                    sum += term;
                }
                let expected = 1.0 - (-x).exp() * sum;
                let got = reg_lower_inc_gamma(n as f64, x).unwrap();
                assert_abs_diff_eq!(got, expected, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn lower_gamma_upper_limit() {
        for &a in &[0.5, 1.0, 3.0, 50.0, 534.0, 1300.0] {
            let x = a + 50.0 * f64::sqrt(a);
            assert!(reg_lower_inc_gamma(a, x).unwrap() >= 1.0 - 1e-10, "a = {a}");
        }
    }

    #[test]
    fn lower_gamma_large_shape_near_mode() {
        // median of Gamma(a) is close to a - 1/3
        for &a in &[200.0, 1000.0, 5000.0] {
            let p = reg_lower_inc_gamma(a, a - 1.0 / 3.0).unwrap();
            assert!((p - 0.5).abs() < 1e-3, "a = {a}, p = {p}");
        }
    }

    #[test]
    fn lower_gamma_domain_errors() {
        assert!(reg_lower_inc_gamma(0.0, 1.0).is_err());
        assert!(reg_lower_inc_gamma(1.0, -1e-9).is_err());
    }

    #[test]
    fn inc_beta_examples() {
        for &a in &[0.5, 1.0, 3.0, 10.0, 100.0] {
            assert_abs_diff_eq!(reg_inc_beta(0.5, a, a).unwrap(), 0.5, epsilon = 1e-12);
        }
        // B(x; 2, 1) = x^2 / 2 and B(2, 1) = 1/2
        assert_abs_diff_eq!(reg_inc_beta(0.5, 2.0, 1.0).unwrap(), 0.25, epsilon = 1e-12);
        // Beta(2, 4) density 20 t (1-t)^3; antiderivative 20 (t^2/2 - t^3 + 3t^4/4 - t^5/5)
        let t: f64 = 0.5;
        let expected = 20.0 * (t.powi(2) / 2.0 - t.powi(3) + 0.75 * t.powi(4) - t.powi(5) / 5.0);
        assert_abs_diff_eq!(expected, 0.8125, epsilon = 1e-15);
        assert_abs_diff_eq!(reg_inc_beta(0.5, 2.0, 4.0).unwrap(), expected, epsilon = 1e-12);
        assert_eq!(reg_inc_beta(0.0, 2.0, 3.0).unwrap(), 0.0);
        assert_eq!(reg_inc_beta(1.0, 2.0, 3.0).unwrap(), 1.0);
    }

    #[test]
    fn inc_beta_domain_errors() {
        assert!(reg_inc_beta(1.5, 1.0, 1.0).is_err());
        assert!(reg_inc_beta(-0.1, 1.0, 1.0).is_err());
        assert!(reg_inc_beta(0.5, 0.0, 1.0).is_err());
        assert!(reg_inc_beta(0.5, 1.0, -2.0).is_err());
    }

    /// Independent digamma: lift to x >= 40, three-term asymptotic series.
    fn digamma_oracle(x: f64) -> f64 {
        let mut z = x;
        let mut acc = 0.0;
        while z < 40.0 {
            acc -= 1.0 / z;
            z += 1.0;
        }
        let z2 = z * z;
        acc + z.ln() - 0.5 / z - 1.0 / (12.0 * z2) + 1.0 / (120.0 * z2 * z2)
            - 1.0 / (252.0 * z2 * z2 * z2)
    }

    #[test]
    fn digamma_examples() {
        for &x in &[0.5, 1.0, 2.0, 10.0] {
            let step = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
            assert_abs_diff_eq!(step, 1.0 / x, epsilon = 1e-12);
        }
        let psi1 = digamma_oracle(1.0);
        assert_abs_diff_eq!(psi1, -0.5772156649015329, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma(1.0).unwrap(), psi1, epsilon = 1e-12);
        assert_abs_diff_eq!(digamma(2.0).unwrap(), psi1 + 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(digamma(2.0).unwrap(), 0.4227843350984671, epsilon = 1e-12);
    }

    #[test]
    fn digamma_matches_oracle_on_grid() {
        let mut x = 1e-3;
        while x < 1e4 {
            assert_abs_diff_eq!(digamma(x).unwrap(), digamma_oracle(x), epsilon = 1e-12);
            x *= 1.37;
        }
    }

    #[test]
    fn digamma_rejects_nonpositive() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-2.0).is_err());
    }
}
