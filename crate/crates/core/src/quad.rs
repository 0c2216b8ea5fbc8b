//! Adaptive 7/15-point Gauss-Kronrod integration on a finite interval.

// Nodes and weights are quoted to 30 digits; rounding to f64 is intended.
#![allow(clippy::excessive_precision)]

use alloc::vec::Vec;

use crate::error::{Error, Result};

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

/// Gauss weights at the odd Kronrod nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel { a, b, value: kronrod * half, error: ((kronrod - gauss) * half).abs() }
}

/// Integrate `f` over `[a, b]`, splitting first at the given interior
/// breakpoints and then bisecting the worst panel until the summed error
/// estimate drops below `tol` or `max_panels` is reached.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
    max_panels: usize,
) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::Invalid("integration interval must be finite with a < b"));
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut panels: Vec<Panel> = edges.windows(2).map(|w| gk15(&mut f, w[0], w[1])).collect();
    let mut evaluations = 15 * panels.len();
    loop {
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= tol {
            let value = panels.iter().map(|p| p.value).sum();
            return Ok(Quadrature { value, error, evaluations });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels[worst];
        let mid = 0.5 * (p.a + p.b);
        if panels.len() >= max_panels || mid <= p.a || mid >= p.b {
            return Err(Error::Quadrature { achieved: error });
        }
        panels[worst] = gk15(&mut f, p.a, mid);
        panels.push(gk15(&mut f, mid, p.b));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact_on_one_panel() {
        let q = integrate(|x| x.powi(10), 0.0, 1.0, &[], 1e-14, 1).unwrap();
        assert!((q.value - 1.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn log_singularity() {
        // int_0^1 -x ln x dx = 1/4
        let q = integrate(|x| if x > 0.0 { -x * libm::log(x) } else { 0.0 }, 0.0, 1.0, &[], 1e-14, 500).unwrap();
        assert!((q.value - 0.25).abs() < 1e-14);
        let q = integrate(libm::sqrt, 0.0, 1.0, &[], 1e-13, 500).unwrap();
        assert!((q.value - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn kinks_at_breakpoints() {
        let f = |x: f64| x.min(0.3);
        let q = integrate(f, 0.0, 1.0, &[0.3], 1e-15, 2).unwrap();
        assert!((q.value - (0.045 + 0.21)).abs() < 1e-15);
    }

    #[test]
    fn reports_failure() {
        let r = integrate(|x| 1.0 / x, 1e-300, 1.0, &[], 1e-16, 4);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
        assert!(integrate(|x| x, 1.0, 0.0, &[], 1e-10, 10).is_err());
    }
}
