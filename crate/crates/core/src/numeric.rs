//! Small numerical kernels shared by the other modules.

use statrs::function::gamma::ln_gamma;

/// Series truncation rule: a sum stops once the next term's magnitude drops
/// below this fraction of the running sum.
pub const SERIES_REL_TOL: f64 = 1e-18;

/// `1 / (1 + e^{-x})`, evaluated without overflow for any finite `x`.
#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(1 + e^x)`.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// `2^s · x`, exact in binary floating point (no rounding, only exponent shift).
#[inline]
pub fn dyadic_scale(x: f64, s: u32) -> f64 {
    // powi(2, s) is exact for s < 1024; beyond that the result is +inf anyway.
    if s >= 1100 {
        return f64::INFINITY * x.signum();
    }
    x * 2f64.powi(s as i32)
}

/// Returns true when `term` is negligible against `sum` under [`SERIES_REL_TOL`].
#[inline]
pub fn series_converged(term: f64, sum: f64) -> bool {
    term == 0.0 || (sum != 0.0 && term.abs() < SERIES_REL_TOL * sum.abs())
}

/// Natural log of the binomial coefficient `C(n, k)`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    assert!(k <= n, "ln_choose requires k <= n");
    let k = k.min(n - k);
    if k == 0 {
        return 0.0;
    }
    if k <= 64 {
        // Short products are more accurate than differences of large ln_gamma values.
        (0..k)
            .map(|j| ((n - j) as f64 / (j + 1) as f64).ln())
            .sum()
    } else {
        ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
    }
}

/// Natural log of `n!`.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        0.0
    } else if n <= 32 {
        (2..=n).map(|j| (j as f64).ln()).sum()
    } else {
        ln_gamma(n as f64 + 1.0)
    }
}

/// Splits `x` into an integer mantissa with `digits` significant decimal digits
/// and a power-of-ten exponent, rounding half away from zero:
/// `5.391246e-44 -> (5391, -47)`.
pub fn significant_digits(x: f64, digits: u32) -> (i64, i32) {
    if x == 0.0 || !x.is_finite() {
        return (0, 0);
    }
    let mut exponent = x.abs().log10().floor() as i32 - (digits as i32 - 1);
    let mut mantissa = (x / 10f64.powi(exponent)).round() as i64;
    if mantissa.unsigned_abs() >= 10u64.pow(digits) {
        mantissa = (mantissa as f64 / 10.0).round() as i64;
        exponent += 1;
    }
    (mantissa, exponent)
}

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = KRONROD_WEIGHTS[7] * fc;
    let mut gauss = GAUSS_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod quadrature of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
        let (value, err) = gk15(f, a, b);
        if err <= tol || depth == 0 || (b - a).abs() < 1e-12 {
            return value;
        }
        let mid = 0.5 * (a + b);
        recurse(f, a, mid, 0.5 * tol, depth - 1) + recurse(f, mid, b, 0.5 * tol, depth - 1)
    }
    recurse(&f, a, b, tol, 48)
}
