//! Adaptive Gauss-Kronrod (7/15) integration of complex-valued integrands.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae on [0, 1); odd indices are the 7-point Gauss nodes.
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
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Integral estimate with an error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    /// Sum of the per-panel Kronrod/Gauss differences plus the rounding floor.
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    magnitude: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F>(f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> Complex64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut magnitude = fc.norm() * WGK[7];
    for (j, (&x, &wk)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        kronrod += (f1 + f2) * wk;
        magnitude += (f1.norm() + f2.norm()) * wk;
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kronrod * half;
    Panel {
        a,
        b,
        value,
        error: ((kronrod - gauss) * half).norm(),
        magnitude: magnitude * half.abs(),
    }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the given
/// panel partition and bisecting the panel with the largest error until the
/// summed error drops below `max(rel_tol |I|, abs_tol)`.
pub(crate) fn integrate<F>(
    f: F,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
    max_panels: usize,
) -> Result<Estimate>
where
    F: Fn(f64) -> Complex64,
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut heap: BinaryHeap<Panel> = breaks
        .windows(2)
        .map(|w| gauss_kronrod(&f, w[0], w[1]))
        .collect();

    loop {
        // sums are recomputed each pass; cheap next to the integrand evaluations
        let (value, error, magnitude) = heap.iter().fold(
            (Complex64::new(0.0, 0.0), 0.0, 0.0),
            |(v, e, m), p| (v + p.value, e + p.error, m + p.magnitude),
        );
        let tolerance = (rel_tol * value.norm()).max(abs_tol);
        let rounding = 50.0 * f64::EPSILON * magnitude;
        if error <= tolerance.max(rounding) {
            return Ok(Estimate {
                value,
                error: error + rounding,
                panels: heap.len(),
            });
        }
        if heap.len() >= max_panels {
            return Err(Error::NonConvergence {
                subdivisions: heap.len(),
                error,
                tolerance,
            });
        }
        // bisect the worst panels, a batch at a time to keep the loop cheap
        let batch = (heap.len() / 16).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                return Err(Error::NonConvergence {
                    subdivisions: heap.len() + 1,
                    error,
                    tolerance,
                });
            }
            heap.push(gauss_kronrod(&f, worst.a, mid));
            heap.push(gauss_kronrod(&f, mid, worst.b));
        }
    }
}

/// Breakpoints on `[a, b]` whose spacing never exceeds `max_width(x)` at the
/// left end of each panel, with at least `min_panels` panels.
pub(crate) fn partition<W>(a: f64, b: f64, min_panels: usize, max_width: W) -> Vec<f64>
where
    W: Fn(f64) -> f64,
{
    let uniform = (b - a) / min_panels as f64;
    let mut breaks = vec![a];
    let mut x = a;
    while x < b {
        let step = max_width(x).min(uniform);
        x = if x + step >= b - 1e-3 * step { b } else { x + step };
        breaks.push(x);
    }
    breaks
}
