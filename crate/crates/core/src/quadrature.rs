//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 2000,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), QuadratureError> {
        let ok_tol = |t: f64| t >= 0.0 && t.is_finite();
        if !ok_tol(self.abs_tol) || !ok_tol(self.rel_tol) {
            return Err(QuadratureError::InvalidConfig(
                "tolerances must be finite and nonnegative".into(),
            ));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(QuadratureError::InvalidConfig(
                "at least one of abs_tol, rel_tol must be positive".into(),
            ));
        }
        if self.max_subdivisions == 0 {
            return Err(QuadratureError::InvalidConfig(
                "max_subdivisions must be positive".into(),
            ));
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral value together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),

    /// The subdivision budget ran out; `best` is the estimate reached so far.
    #[error("tolerance not met after {subdivisions} subdivisions (best {value} ± {error})", value = best.value, error = best.error)]
    NoConvergence { best: Estimate, subdivisions: usize },
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss weights for the odd Kronrod nodes and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gauss_kronrod_15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let abs_half = half.abs();

    let f_center = f(center);
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..3 {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
        fv1[jtw] = f1;
        fv2[jtw] = f2;
    }
    for j in 0..4 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        res_kronrod += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    let error = rescale_error((res_kronrod - res_gauss) * half, res_abs, res_asc);
    Estimate { value, error }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Bisect the segment with the largest error estimate until the summed
/// error meets the tolerance. Non-finite samples count as zero.
fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    breakpoints: &[f64],
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadratureError> {
    cfg.validate()?;
    let mut g = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };

    let mut heap = BinaryHeap::with_capacity(cfg.max_subdivisions + breakpoints.len());
    for w in breakpoints.windows(2) {
        let est = gauss_kronrod_15(&mut g, w[0], w[1]);
        heap.push(Segment { a: w[0], b: w[1], est });
    }

    let totals = |heap: &BinaryHeap<Segment>| {
        heap.iter().fold(Estimate { value: 0.0, error: 0.0 }, |acc, s| Estimate {
            value: acc.value + s.est.value,
            error: acc.error + s.est.error,
        })
    };

    let mut total = totals(&heap);
    let mut subdivisions = heap.len();
    loop {
        if total.error <= cfg.tolerance(total.value) {
            // re-sum to shed drift from the incremental updates
            let exact = totals(&heap);
            if exact.error <= cfg.tolerance(exact.value) {
                return Ok(exact);
            }
            total = exact;
        }
        if subdivisions >= cfg.max_subdivisions {
            return Err(QuadratureError::NoConvergence {
                best: totals(&heap),
                subdivisions,
            });
        }
        let worst = heap.pop().expect("at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Err(QuadratureError::NoConvergence {
                best: totals(&heap),
                subdivisions,
            });
        }
        let left = gauss_kronrod_15(&mut g, worst.a, mid);
        let right = gauss_kronrod_15(&mut g, mid, worst.b);
        total.value += left.value + right.value - worst.est.value;
        total.error += left.error + right.error - worst.est.error;
        heap.push(Segment { a: worst.a, b: mid, est: left });
        heap.push(Segment { a: mid, b: worst.b, est: right });
        subdivisions += 1;
    }
}

/// Integrate `f` over the finite interval `[lo, hi]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadratureError> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(QuadratureError::InvalidInterval { lo, hi });
    }
    adaptive(f, &[lo, hi], cfg)
}

/// Number of geometric breakpoints (`lo + 4^i`) placed before the infinite tail.
const TAIL_BREAKPOINTS: i32 = 16;

/// Integrate `f` over `[lo, ∞)`.
///
/// Uses `x = lo + t / (1 - t)` to map onto `[0, 1)`. The initial partition
/// puts breakpoints at `x - lo = 4^i` so that a narrow bump far from `lo`
/// is sampled before any refinement decision is made.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate, QuadratureError> {
    if !(lo >= 0.0) || !lo.is_finite() {
        return Err(QuadratureError::InvalidInterval { lo, hi: f64::INFINITY });
    }
    let mut breakpoints = Vec::with_capacity(TAIL_BREAKPOINTS as usize + 2);
    breakpoints.push(0.0);
    for i in 0..TAIL_BREAKPOINTS {
        let d = 4f64.powi(i);
        breakpoints.push(d / (1.0 + d));
    }
    breakpoints.push(1.0);

    let mapped = |t: f64| {
        let s = 1.0 - t;
        f(lo + t / s) / (s * s)
    };
    adaptive(mapped, &breakpoints, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{ln_gamma, reg_lower_inc_gamma};
    use approx::assert_abs_diff_eq;

    fn gamma_density(shape: f64) -> impl Fn(f64) -> f64 {
        let norm = ln_gamma(shape).unwrap();
        move |x: f64| ((shape - 1.0) * x.ln() - x - norm).exp()
    }

    #[test]
    fn polynomials_are_exact() {
        let cfg = QuadratureConfig::default();
        assert_abs_diff_eq!(integrate(|_| 1.0, 0.0, 1.0, &cfg).unwrap().value, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            integrate(|x| x * x, 0.0, 1.0, &cfg).unwrap().value,
            1.0 / 3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn gamma_three_mass_on_finite_interval() {
        let cfg = QuadratureConfig::default();
        let est = integrate(|x| (-x).exp() * x * x / 2.0, 0.0, 60.0, &cfg).unwrap();
        let oracle = reg_lower_inc_gamma(3.0, 60.0).unwrap();
        assert_abs_diff_eq!(est.value, oracle, epsilon = 1e-10);
        assert!(est.error <= cfg.tolerance(est.value));
    }

    #[test]
    fn semi_infinite_exponential() {
        let cfg = QuadratureConfig::default();
        let est = integrate_semi_infinite(|x| (-x).exp(), 0.0, &cfg).unwrap();
        assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-10);
        let tail = integrate_semi_infinite(|x| (-x).exp(), 5.0, &cfg).unwrap();
        assert_abs_diff_eq!(tail.value, (-5.0f64).exp(), epsilon = 1e-10);
        assert_abs_diff_eq!(tail.value, 0.006737947, epsilon = 1e-9);
    }

    #[test]
    fn semi_infinite_gamma_densities_normalize() {
        let cfg = QuadratureConfig::default();
        for &shape in &[0.5, 1.0, 5.0, 50.0, 534.0] {
            let est = integrate_semi_infinite(gamma_density(shape), 0.0, &cfg).unwrap();
            assert_abs_diff_eq!(est.value, 1.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn additivity_and_linearity() {
        let cfg = QuadratureConfig::default();
        let f = |x: f64| (3.0 * x).sin() + x.sqrt();
        let whole = integrate(f, 0.0, 4.0, &cfg).unwrap().value;
        let left = integrate(f, 0.0, 1.5, &cfg).unwrap().value;
        let right = integrate(f, 1.5, 4.0, &cfg).unwrap().value;
        assert_abs_diff_eq!(whole, left + right, epsilon = 3e-10);

        let g = |x: f64| (-x * x).exp();
        let combo = integrate(|x| 2.0 * f(x) - 0.5 * g(x), 0.0, 4.0, &cfg).unwrap().value;
        let gi = integrate(g, 0.0, 4.0, &cfg).unwrap().value;
        assert_abs_diff_eq!(combo, 2.0 * whole - 0.5 * gi, epsilon = 1e-9);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let cfg = QuadratureConfig::default();
        let est = integrate(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &cfg).unwrap();
        assert_abs_diff_eq!(est.value, 2.0, epsilon = 1e-8);
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let cfg = QuadratureConfig {
            abs_tol: 1e-14,
            rel_tol: 0.0,
            max_subdivisions: 3,
        };
        match integrate(|x: f64| (50.0 * x).sin().abs(), 0.0, 3.0, &cfg) {
            Err(QuadratureError::NoConvergence { best, subdivisions }) => {
                assert_eq!(subdivisions, 3);
                assert!(best.value.is_finite() && best.value > 0.0);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_input() {
        let cfg = QuadratureConfig::default();
        assert!(matches!(
            integrate(|x| x, 1.0, 1.0, &cfg),
            Err(QuadratureError::InvalidInterval { .. })
        ));
        assert!(integrate(|x| x, 0.0, f64::INFINITY, &cfg).is_err());
        assert!(integrate_semi_infinite(|x| x, -1.0, &cfg).is_err());
        let zero = QuadratureConfig::with_tolerances(0.0, 0.0);
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, &zero),
            Err(QuadratureError::InvalidConfig(_))
        ));
    }
}
