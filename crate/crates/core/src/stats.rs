//! Pearson correlation and one-way ANOVA with natively computed p-values.

use serde::Serialize;

use crate::error::{Error, Result};

/// Convergence tolerance of the incomplete-beta continued fraction.
pub const BETA_CF_TOLERANCE: f64 = 1e-12;
/// Iteration cap of the incomplete-beta continued fraction.
pub const BETA_CF_MAX_ITER: usize = 500;

/// A labelled list of observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub label: String,
    pub values: Vec<f64>,
}

impl Sample {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Sample {
            label: label.into(),
            values,
        }
    }

    pub fn mean(&self) -> f64 {
        mean(&self.values)
    }
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Correlation {
    pub r: f64,
    pub p: f64,
    #[serde(skip)]
    pub n: usize,
}

/// Product-moment correlation with a two-sided p-value from the t
/// distribution on `n - 2` degrees of freedom.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "samples differ in length: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "correlation needs at least 3 pairs, got {n}"
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("samples must be finite".into()));
    }
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::UndefinedCorrelation("first sample has zero variance"));
    }
    if syy == 0.0 {
        return Err(Error::UndefinedCorrelation("second sample has zero variance"));
    }
    let r = (sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0);
    let df = (n - 2) as f64;
    let p = if r.abs() == 1.0 {
        0.0
    } else {
        let t2 = r * r * df / (1.0 - r * r);
        regularized_incomplete_beta(df / (df + t2), df / 2.0, 0.5)
    };
    Ok(Correlation { r, p, n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Anova {
    /// `None` when the within-group sum of squares is zero but the groups
    /// differ (infinite F).
    #[serde(rename = "F")]
    pub f: Option<f64>,
    pub p: f64,
    pub eta_squared: f64,
    pub infinite_f: bool,
    pub df_between: usize,
    pub df_within: usize,
}

/// One-way ANOVA across groups.
pub fn anova_oneway(groups: &[&[f64]]) -> Result<Anova> {
    if groups.len() < 2 {
        return Err(Error::InvalidArgument("ANOVA needs at least 2 groups".into()));
    }
    if let Some(g) = groups.iter().position(|g| g.len() < 2) {
        return Err(Error::InvalidArgument(format!(
            "ANOVA group {g} has fewer than 2 values"
        )));
    }
    if groups.iter().flat_map(|g| g.iter()).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("samples must be finite".into()));
    }
    let total_n: usize = groups.iter().map(|g| g.len()).sum();
    let grand = groups.iter().flat_map(|g| g.iter()).sum::<f64>() / total_n as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let m = mean(g);
        ss_between += g.len() as f64 * (m - grand).powi(2);
        ss_within += g.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    }
    let df_between = groups.len() - 1;
    let df_within = total_n - groups.len();
    let ss_total = ss_between + ss_within;
    let eta_squared = if ss_total > 0.0 { ss_between / ss_total } else { 0.0 };
    if ss_within == 0.0 {
        let infinite = ss_between > 0.0;
        return Ok(Anova {
            f: (!infinite).then_some(0.0),
            p: if infinite { 0.0 } else { 1.0 },
            eta_squared,
            infinite_f: infinite,
            df_between,
            df_within,
        });
    }
    let (d1, d2) = (df_between as f64, df_within as f64);
    let f = (ss_between / d1) / (ss_within / d2);
    let p = regularized_incomplete_beta(d2 / (d2 + d1 * f), d2 / 2.0, d1 / 2.0);
    Ok(Anova {
        f: Some(f),
        p,
        eta_squared,
        infinite_f: false,
        df_between,
        df_within,
    })
}

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_9,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + 7.5;
    let mut sum = COEF[0];
    for (i, &c) in COEF.iter().enumerate().skip(1) {
        sum += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + sum.ln()
}

fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta `I_x(a, b)` by Lentz's continued fraction,
/// using the symmetry `I_x(a,b) = 1 - I_{1-x}(b,a)` where the fraction
/// converges faster.
pub fn regularized_incomplete_beta(x: f64, a: f64, b: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b)).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(x, a, b) / a
    } else {
        1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b
    }
}

fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < BETA_CF_TOLERANCE {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Power series `B(x; a, b) = x^a Σ (1-b)_n x^n / (n! (a + n))`,
    /// reflected for x > 1/2.
    fn incomplete_beta_series(x: f64, a: f64, b: f64) -> f64 {
        if x > 0.5 {
            return 1.0 - incomplete_beta_series(1.0 - x, b, a);
        }
        let mut term = 1.0;
        let mut sum = 1.0 / a;
        for n in 1..2000 {
            let n = n as f64;
            term *= (n - b) / n * x;
            sum += term / (a + n);
            if term.abs() < 1e-18 {
                break;
            }
        }
        (a * x.ln() + sum.ln() - ln_beta(a, b)).exp()
    }

    #[test]
    fn incomplete_beta_cross_check() {
        for &a in &[0.5, 1.0, 2.5, 4.0, 10.0] {
            for &b in &[0.5, 1.0, 3.0, 7.5] {
                for i in 1..20 {
                    let x = i as f64 / 20.0;
                    let cf = regularized_incomplete_beta(x, a, b);
                    let series = incomplete_beta_series(x, a, b);
                    assert!((cf - series).abs() < 1e-10, "I_{x}({a},{b}): {cf} vs {series}");
                }
            }
        }
    }

    #[test]
    fn incomplete_beta_closed_forms() {
        // I_x(1, 1) = x and I_x(a, 1) = x^a
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            assert!((regularized_incomplete_beta(x, 1.0, 1.0) - x).abs() < 1e-14);
            assert!((regularized_incomplete_beta(x, 3.0, 1.0) - x.powi(3)).abs() < 1e-14);
        }
    }

    #[test]
    fn ln_gamma_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            assert!((ln_gamma(n as f64) - fact.ln()).abs() < 1e-12);
            fact *= n as f64;
        }
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn perfect_correlation() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let c = pearson(&x, &x).unwrap();
        assert_eq!((c.r, c.p), (1.0, 0.0));
        assert_eq!(pearson(&x, &neg).unwrap().r, -1.0);
    }

    #[test]
    fn correlation_errors() {
        assert!(matches!(
            pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]),
            Err(Error::UndefinedCorrelation(_))
        ));
        assert!(pearson(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn uncorrelated_sample_has_large_p() {
        let c = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, -1.0, -1.0, 1.0]).unwrap();
        assert_eq!(c.r, 0.0);
        assert!((c.p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn anova_degenerate_cases() {
        let a = anova_oneway(&[&[2.0, 2.0, 2.0], &[2.0, 2.0, 2.0]]).unwrap();
        assert_eq!((a.f, a.eta_squared, a.infinite_f), (Some(0.0), 0.0, false));
        let b = anova_oneway(&[&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0]]).unwrap();
        assert!(b.infinite_f);
        assert_eq!(b.f, None);
        assert_eq!(b.eta_squared, 1.0);
        assert!(anova_oneway(&[&[1.0, 2.0]]).is_err());
        assert!(anova_oneway(&[&[1.0, 2.0], &[3.0]]).is_err());
    }
}
