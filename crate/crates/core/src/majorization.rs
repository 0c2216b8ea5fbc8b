//! Ordered spectra, majorization verdicts, and concave test functions.

use alloc::vec::Vec;

use crate::channels::HermitianOperator;
use crate::error::{Error, Result};
use crate::linalg;

/// Slack allowed outside `[0, 1]` before a value counts as a domain error;
/// values inside the slack are clamped.
pub const DOMAIN_SLACK: f64 = 1e-9;

/// Eigenvalues in non-increasing order, stored as `(value, multiplicity)`
/// runs so that closed-form spectra with huge multiplicities stay compact.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSequence {
    levels: Vec<(f64, u64)>,
}

impl SpectrumSequence {
    pub fn from_values(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { levels: values.into_iter().map(|v| (v, 1)).collect() }
    }

    pub fn from_levels(mut levels: Vec<(f64, u64)>) -> Self {
        levels.retain(|&(_, m)| m > 0);
        levels.sort_by(|a, b| b.0.total_cmp(&a.0));
        Self { levels }
    }

    pub fn levels(&self) -> &[(f64, u64)] {
        &self.levels
    }

    /// Total multiplicity.
    pub fn len(&self) -> u64 {
        self.levels.iter().map(|&(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.levels.iter().map(|&(v, m)| v * m as f64).sum()
    }

    pub fn max(&self) -> Option<f64> {
        self.levels.first().map(|&(v, _)| v)
    }

    /// Expanded values, largest first.
    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.levels.iter().flat_map(|&(v, m)| core::iter::repeat_n(v, m as usize))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.iter().collect()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self::from_levels(self.levels.iter().map(|&(v, m)| (v * s, m)).collect())
    }

    /// Append zeros up to total multiplicity `len`.
    pub fn zero_padded(&self, len: u64) -> Self {
        let mut levels = self.levels.clone();
        let have = self.len();
        if len > have {
            levels.push((0.0, len - have));
        }
        Self::from_levels(levels)
    }

    /// Merge neighbouring values closer than `tol` (for reporting
    /// multiplicities of numerically computed spectra).
    pub fn grouped(&self, tol: f64) -> Self {
        let mut out: Vec<(f64, u64, f64)> = Vec::new();
        for &(v, m) in &self.levels {
            match out.last_mut() {
                Some((first, count, sum)) if (*first - v).abs() <= tol => {
                    *count += m;
                    *sum += v * m as f64;
                }
                _ => out.push((v, m, v * m as f64)),
            }
        }
        Self { levels: out.into_iter().map(|(_, m, s)| (s / m as f64, m)).collect() }
    }

    /// `sum f(x_j)` over the spectrum, with multiplicities.
    pub fn trace_fn(&self, f: &ConcaveFn) -> Result<f64> {
        self.levels
            .iter()
            .try_fold(0.0, |acc, &(v, m)| Ok(acc + f.eval_clamped(v)? * m as f64))
    }
}

/// Eigenvalues of a Hermitian operator, non-increasing.
pub fn spectrum(a: &HermitianOperator) -> Result<SpectrumSequence> {
    if !a.is_hermitian() {
        return Err(Error::NotDensity("Hermitian"));
    }
    Ok(SpectrumSequence::from_values(linalg::hermitian_eigenvalues(a.matrix())?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Some partial sum of `x` exceeds that of `y` by more than the tolerance.
    Strict,
    /// All partial sums agree within the tolerance.
    Equal,
    /// Partial sums dominate but the totals differ (sub-majorization); only
    /// produced by [`submajorizes`].
    Weak,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Majorization {
    pub verdict: Verdict,
    /// 0-based index of the first partial sum where `x` falls short.
    pub first_violation: Option<usize>,
    /// `max_j (X_j - Y_j)` over partial sums.
    pub margin: f64,
    /// `min_j (X_j - Y_j)` over partial sums.
    pub worst: f64,
}

/// Default partial-sum tolerance for spectra with total `total`.
pub fn default_tolerance(total: f64) -> f64 {
    1e-9 * (1.0 + total.abs())
}

/// Does `x` majorize `y`? Both sequences must have the same length (pad
/// explicitly with [`SpectrumSequence::zero_padded`]) and equal totals.
pub fn majorizes(x: &SpectrumSequence, y: &SpectrumSequence, tol: f64) -> Result<Majorization> {
    let diff = x.total() - y.total();
    if diff.abs() > tol {
        return Err(Error::TotalMismatch { diff, tol });
    }
    compare(x, y, tol, false)
}

/// Weak (sub-)majorization: partial sums of `x` dominate those of `y`
/// without requiring equal totals.
pub fn submajorizes(x: &SpectrumSequence, y: &SpectrumSequence, tol: f64) -> Result<Majorization> {
    compare(x, y, tol, true)
}

fn compare(x: &SpectrumSequence, y: &SpectrumSequence, tol: f64, weak: bool) -> Result<Majorization> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len() as usize, found: y.len() as usize });
    }
    let (mut sx, mut sy) = (0.0, 0.0);
    let mut margin = f64::NEG_INFINITY;
    let mut worst = f64::INFINITY;
    let mut first_violation = None;
    for (j, (a, b)) in x.iter().zip(y.iter()).enumerate() {
        sx += a;
        sy += b;
        let d = sx - sy;
        margin = margin.max(d);
        worst = worst.min(d);
        if d < -tol && first_violation.is_none() {
            first_violation = Some(j);
        }
    }
    if x.is_empty() {
        margin = 0.0;
        worst = 0.0;
    }
    let totals_differ = (sx - sy).abs() > tol;
    let verdict = if first_violation.is_some() {
        Verdict::No
    } else if weak && totals_differ {
        Verdict::Weak
    } else if margin > tol {
        Verdict::Strict
    } else {
        Verdict::Equal
    };
    Ok(Majorization { verdict, first_violation, margin, worst })
}

/// `sum f(y_j) - sum f(x_j)`; non-negative whenever `x` majorizes `y` and
/// `f` is concave.
pub fn karamata_gap(x: &SpectrumSequence, y: &SpectrumSequence, f: &ConcaveFn) -> Result<f64> {
    let diff = x.total() - y.total();
    let tol = default_tolerance(x.total());
    if diff.abs() > tol {
        return Err(Error::TotalMismatch { diff, tol });
    }
    Ok(y.trace_fn(f)? - x.trace_fn(f)?)
}

/// Piecewise-linear function through sample points covering `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    points: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    /// Points must have strictly increasing abscissae from 0 to 1.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Invalid("table needs at least two points"));
        }
        if points[0].0 != 0.0 || points[points.len() - 1].0 != 1.0 {
            return Err(Error::Invalid("table must start at x = 0 and end at x = 1"));
        }
        if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
            return Err(Error::Invalid("table entries must be finite"));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Invalid("table abscissae must be strictly increasing"));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    fn eval(&self, x: f64) -> f64 {
        let i = self.points.partition_point(|p| p.0 < x);
        if i == 0 {
            return self.points[0].1;
        }
        if i == self.points.len() {
            return self.points[i - 1].1;
        }
        let (x0, y0) = self.points[i - 1];
        let (x1, y1) = self.points[i];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

/// Concave functions on `[0, 1]` used as entropy-like test functions.
#[derive(Debug, Clone, PartialEq)]
pub enum ConcaveFn {
    /// `-x ln x`, with `f(0) = 0`.
    Entropy,
    /// `x^p`, `0 < p < 1`.
    Power(f64),
    /// `min(x, t)`.
    Kink(f64),
    /// `slope * x + intercept`.
    Affine { slope: f64, intercept: f64 },
    Table(PiecewiseLinear),
}

impl ConcaveFn {
    pub fn power(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Invalid("power exponent must lie in (0, 1)"));
        }
        Ok(Self::Power(p))
    }

    pub fn kink(t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Invalid("kink position must lie in [0, 1]"));
        }
        Ok(Self::Kink(t))
    }

    pub fn constant(c: f64) -> Self {
        Self::Affine { slope: 0.0, intercept: c }
    }

    /// A piecewise-linear table, rejected unless it passes the grid
    /// concavity check.
    pub fn table(points: Vec<(f64, f64)>) -> Result<Self> {
        let f = Self::Table(PiecewiseLinear::new(points)?);
        f.verify_concavity()?;
        Ok(f)
    }

    /// The three functions used throughout the checks: entropy, square root
    /// and `min(x, 0.3)`.
    pub fn builtin() -> [ConcaveFn; 3] {
        [Self::Entropy, Self::Power(0.5), Self::Kink(0.3)]
    }

    /// Evaluate on `[0, 1]`; no domain check.
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Self::Entropy => {
                if x <= 0.0 {
                    0.0
                } else {
                    -x * libm::log(x)
                }
            }
            Self::Power(p) => {
                if x <= 0.0 {
                    0.0
                } else {
                    libm::pow(x, *p)
                }
            }
            Self::Kink(t) => x.min(*t),
            Self::Affine { slope, intercept } => slope * x + intercept,
            Self::Table(t) => t.eval(x),
        }
    }

    /// Evaluate after clamping values within [`DOMAIN_SLACK`] of `[0, 1]`.
    pub fn eval_clamped(&self, x: f64) -> Result<f64> {
        if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
            return Err(Error::Domain { value: x });
        }
        Ok(self.eval(x.clamp(0.0, 1.0)))
    }

    /// Interior points where the function is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Self::Kink(t) if *t > 0.0 && *t < 1.0 => alloc::vec![*t],
            Self::Table(t) => t.points[1..t.points.len() - 1].iter().map(|p| p.0).collect(),
            _ => Vec::new(),
        }
    }

    /// Midpoint test on a 1000-interval grid: `f(mid) >= mean of ends - 1e-12`.
    pub fn verify_concavity(&self) -> Result<()> {
        const STEPS: usize = 1000;
        for i in 1..STEPS {
            let x = i as f64 / STEPS as f64;
            let lo = self.eval((i - 1) as f64 / STEPS as f64);
            let hi = self.eval((i + 1) as f64 / STEPS as f64);
            if self.eval(x) < 0.5 * (lo + hi) - 1e-12 {
                return Err(Error::NotConcave { at: x });
            }
        }
        if let Self::Table(t) = self {
            // Exact check on the slopes as well.
            let slopes: Vec<f64> = t.points.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
            if let Some(i) = slopes.windows(2).position(|s| s[1] > s[0] + 1e-12) {
                return Err(Error::NotConcave { at: t.points[i + 1].0 });
            }
        }
        Ok(())
    }
}
