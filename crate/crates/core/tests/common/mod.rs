//! Helpers shared by the integration tests.

#![allow(dead_code)]

use beew::{Beew, FamilyId, HFamily};

// 15-point Kronrod nodes on [0, 1] (symmetric half) and weights; the odd
// nodes carry the embedded 7-point Gauss rule.
const XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WK: [f64; 8] = [
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

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let d = h * XK[i];
        let s = f(c - d) + f(c + d);
        k += WK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod integral of `f` over `[a, b]`: the piece with
/// the largest error estimate is bisected until the summed estimate drops
/// below `tol` or 500 pieces exist.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (est, err) = kronrod(&f, a, b);
    let mut pieces = vec![(a, b, est, err)];
    let mut total_err = err;
    while total_err > tol && pieces.len() < 500 {
        let worst = (0..pieces.len())
            .max_by(|&i, &j| pieces[i].3.total_cmp(&pieces[j].3))
            .unwrap();
        let (lo, hi, _, e) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (l, le) = kronrod(&f, lo, mid);
        let (r, re) = kronrod(&f, mid, hi);
        total_err += le + re - e;
        pieces.push((lo, mid, l, le));
        pieces.push((mid, hi, r, re));
    }
    pieces.iter().map(|p| p.2).sum()
}

/// `∫_start^∞ f`, through `x = start + scale (u / (1 − u))^4`. The quartic
/// map softens integrable power singularities at `start`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: F, start: f64, scale: f64, tol: f64) -> f64 {
    let g = |u: f64| {
        if u <= 0.0 || u >= 1.0 {
            return 0.0;
        }
        let r = u / (1.0 - u);
        let x = start + scale * r.powi(4);
        let jac = scale * 4.0 * r.powi(3) / ((1.0 - u) * (1.0 - u));
        let v = f(x) * jac;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, tol)
}

/// Five parameter sets per generator, spread over shapes below and above 1.
pub fn parameter_sets() -> Vec<Beew> {
    let shapes = [
        [1.0, 1.0, 1.0],
        [0.6, 2.0, 0.8],
        [2.5, 0.7, 1.5],
        [1.5, 0.5, 1.2],
        [3.0, 4.0, 0.6],
    ];
    let families: [(FamilyId, [&[f64]; 5], f64); 6] = [
        (FamilyId::Exp, [&[], &[], &[], &[], &[]], 1.0),
        (
            FamilyId::Lfr,
            [
                &[1.0, 0.5],
                &[0.2, 2.0],
                &[0.0, 1.0],
                &[2.0, 0.0],
                &[0.5, 0.5],
            ],
            1.0,
        ),
        (
            FamilyId::Weib,
            [&[1.5], &[0.8], &[2.5], &[1.0], &[3.0]],
            0.7,
        ),
        (
            FamilyId::Gomp,
            [&[0.5], &[1.0], &[0.1], &[2.0], &[0.3]],
            0.8,
        ),
        (
            FamilyId::Wg,
            [
                &[0.5, 1.0, 0.5],
                &[1.0, 0.5, 1.0],
                &[0.0, 1.0, 1.0],
                &[1.5, 0.2, 2.0],
                &[0.8, 2.0, 0.3],
            ],
            0.6,
        ),
        (
            FamilyId::Mwe,
            [
                &[1.0, 1.0],
                &[2.0, 0.5],
                &[0.5, 2.0],
                &[5.0, 1.5],
                &[1.5, 0.8],
            ],
            1.2,
        ),
    ];
    let mut out = Vec::new();
    for (id, xis, lambda) in families {
        for (a, xi) in shapes.iter().zip(xis) {
            let lambda = if id.lambda_fixed() { 1.0 } else { lambda };
            out.push(Beew::new(a[0], a[1], a[2], lambda, HFamily::new(id, xi).unwrap()).unwrap());
        }
    }
    out
}

/// A representative size of the data for `model`: the median of the max.
pub fn typical_scale(model: &Beew) -> f64 {
    model.max_law().quantile(0.5).unwrap()
}

/// Mass of the three pieces of the joint density: below the diagonal
/// (`x1 < x2`), above it, and on it.
pub fn region_masses(model: &Beew, tol: f64) -> (f64, f64, f64) {
    let s = typical_scale(model);
    let lower = integrate_tail(
        |x1| integrate_tail(|x2| model.ln_f1(x1, x2).exp(), x1, s, tol),
        0.0,
        s,
        tol,
    );
    let upper = integrate_tail(
        |x2| integrate_tail(|x1| model.ln_f2(x1, x2).exp(), x2, s, tol),
        0.0,
        s,
        tol,
    );
    let line = integrate_tail(|x| model.ln_f0(x).exp(), 0.0, s, tol);
    (lower, upper, line)
}
