//! Small numerical kernels: adaptive Gauss-Kronrod quadrature, bracketing
//! root search and a few stable special functions.

use libm::erfc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("quadrature on [{a}, {b}] did not reach tolerance {tol:e} (estimate {estimate}, error {error:e}, {intervals} intervals)")]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        tol: f64,
        estimate: f64,
        error: f64,
        intervals: usize,
    },
    #[error("bisection bracket [{lo}, {hi}] does not change sign (f(lo) = {flo}, f(hi) = {fhi})")]
    InvalidBracket { lo: f64, hi: f64, flo: f64, fhi: f64 },
}

// 7-point Gauss / 15-point Kronrod nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (k, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = h * x;
        let s = f(c - dx) + f(c + dx);
        kron += w * s;
        // Gauss nodes are the odd-indexed Kronrod nodes.
        if k % 2 == 1 {
            gauss += WG[k / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive G7K15 quadrature of `f` over `[a, b]`, refining the
/// interval with the largest error estimate until the summed estimate is
/// below `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64, NumericsError> {
    integrate_with_breaks(f, &[a, b], abs_tol)
}

/// Like [`integrate`] but starts from the given sorted breakpoints, which
/// should bracket the features of the integrand.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    abs_tol: f64,
) -> Result<f64, NumericsError> {
    const MAX_INTERVALS: usize = 4000;
    let mut segs: Vec<(f64, f64, f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    loop {
        let total_err: f64 = segs.iter().map(|s| s.3).sum();
        let total: f64 = segs.iter().map(|s| s.2).sum();
        if total_err <= abs_tol {
            return Ok(total);
        }
        if segs.len() >= MAX_INTERVALS {
            return Err(NumericsError::QuadratureNonConvergence {
                a: breaks[0],
                b: breaks[breaks.len() - 1],
                tol: abs_tol,
                estimate: total,
                error: total_err,
                intervals: segs.len(),
            });
        }
        let (worst, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one segment");
        let (a, b, _, _) = segs.swap_remove(worst);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&f, a, m);
        let (v2, e2) = gk15(&f, m, b);
        segs.push((a, m, v1, e1));
        segs.push((m, b, v2, e2));
    }
}

/// Bisection for a root of `f` on `[lo, hi]`; stops when the bracket is
/// narrower than `x_tol`. Returns the midpoint of the final bracket.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64, NumericsError> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() || flo.is_nan() || fhi.is_nan() {
        return Err(NumericsError::InvalidBracket { lo, hi, flo, fhi });
    }
    while hi - lo > x_tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Gaussian tail probability `Q(x) = Pr{N(0,1) > x}`.
#[inline]
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// `ln(exp(a) + exp(b))` without overflow.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

/// `log2(1 + exp(-x))`, accurate for large `|x|`.
#[inline]
pub fn log2_1p_exp_neg(x: f64) -> f64 {
    let nats = if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    };
    nats / std::f64::consts::LN_2
}

/// Binary entropy in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

/// Entropy in bits of a probability vector.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn gauss_kronrod_polynomial_exact() {
        let v = integrate(|x| x.powi(5) - 3.0 * x * x + 1.0, -1.0, 2.0, 1e-12).unwrap();
        // antiderivative x^6/6 - x^3 + x
        let exact = (64.0 / 6.0 - 8.0 + 2.0) - (1.0 / 6.0 + 1.0 - 1.0);
        assert_abs_diff_eq!(v, exact, epsilon = 1e-12);
    }

    #[test]
    fn gaussian_density_integrates_to_one() {
        let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let v = integrate(pdf, -12.0, 12.0, 1e-12).unwrap();
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert_abs_diff_eq!(r, std::f64::consts::SQRT_2, epsilon = 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-6),
            Err(NumericsError::InvalidBracket { .. })
        ));
    }

    #[test]
    fn q_function_values() {
        assert_abs_diff_eq!(q_function(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(q_function(1.0), 0.158_655_253_931_457_05, epsilon = 1e-14);
        assert_abs_diff_eq!(q_function(-1.0), 1.0 - 0.158_655_253_931_457_05, epsilon = 1e-14);
    }

    #[test]
    fn log_helpers() {
        assert_abs_diff_eq!(log_add_exp(0.0, 0.0), 2f64.ln(), epsilon = 1e-15);
        assert_abs_diff_eq!(log_add_exp(1000.0, 0.0), 1000.0, epsilon = 1e-12);
        assert_abs_diff_eq!(log2_1p_exp_neg(0.0), 1.0, epsilon = 1e-15);
        assert!(log2_1p_exp_neg(800.0) >= 0.0);
        assert_abs_diff_eq!(log2_1p_exp_neg(-800.0), 800.0 / std::f64::consts::LN_2, epsilon = 1e-9);
    }
}
