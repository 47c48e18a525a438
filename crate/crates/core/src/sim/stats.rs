use statrs::distribution::{Beta, ContinuousCDF};

/// Two-sided Clopper-Pearson interval for `k` successes in `n` trials at
/// confidence `1 − alpha`.
pub fn clopper_pearson(k: u64, n: u64, alpha: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let (kf, nf) = (k as f64, n as f64);
    let lo = if k == 0 { 0.0 } else { Beta::new(kf, nf - kf + 1.0).expect("valid shape").inverse_cdf(alpha / 2.0) };
    let hi = if k == n { 1.0 } else { Beta::new(kf + 1.0, nf - kf).expect("valid shape").inverse_cdf(1.0 - alpha / 2.0) };
    (lo, hi)
}

/// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> (f64, f64) {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    let ne = (na * nb / (na + nb)).sqrt();
    (d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d))
}

/// Survival function of the Kolmogorov distribution.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda < 1e-3 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=200 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cp_known_values() {
        let (lo, hi) = clopper_pearson(0, 10, 0.05);
        assert_eq!(lo, 0.0);
        assert_abs_diff_eq!(hi, 1.0 - 0.025f64.powf(0.1), epsilon = 1e-9);
        let (lo, hi) = clopper_pearson(5, 10, 0.05);
        assert_abs_diff_eq!(lo, 0.187_086_028, epsilon = 1e-6);
        assert_abs_diff_eq!(hi, 0.812_913_972, epsilon = 1e-6);
    }

    #[test]
    fn ks_detects_shift() {
        let a: Vec<f64> = (0..2000).map(|i| i as f64 / 2000.0).collect();
        let b: Vec<f64> = a.iter().map(|x| x + 0.2).collect();
        let (d, p) = ks_two_sample(&a, &b);
        assert_abs_diff_eq!(d, 0.2, epsilon = 1e-3);
        assert!(p < 1e-10);
        let (d, p) = ks_two_sample(&a, &a);
        assert_eq!(d, 0.0);
        assert_eq!(p, 1.0);
    }
}
