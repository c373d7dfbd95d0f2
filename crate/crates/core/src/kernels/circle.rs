//! Heat kernel on the circle of length 2π by the method of images.

use std::f64::consts::PI;

use super::KernelJet;

/// Number of images on each side so that every neglected term is below
/// `e^{-45}` relative to the leading one. Shared with the sphere's
/// image representation, whose images decay at the same rate.
pub(crate) fn images_per_side(t: f64) -> i64 {
    let mut m = 1i64;
    while PI * PI * (m * (m - 1)) as f64 / t <= 45.0 {
        m += 1;
    }
    m
}

/// Direct image sum `(4πt)^{-1/2} Σ_k exp(-(d + 2πk)^2 / 4t)` with `images`
/// terms centred on `k = 0` (so 7 images means `k = -3..=3`).
pub fn circle_kernel_images(d: f64, t: f64, images: usize) -> f64 {
    let half = (images / 2) as i64;
    let lo = -half;
    let hi = if images % 2 == 1 { half } else { half - 1 };
    let pref = (4.0 * PI * t).powf(-0.5);
    (lo..=hi)
        .map(|k| {
            let x = d + 2.0 * PI * k as f64;
            (-(x * x) / (4.0 * t)).exp()
        })
        .sum::<f64>()
        * pref
}

pub(crate) fn jet(d: f64, t: f64) -> KernelJet {
    // W = Σ_k exp(-a_k), a_k = π k (d + π k) / t, so that the k = 0 term is 1.
    let m = images_per_side(t);
    let (mut w, mut w1, mut w2, mut wt) = (0.0, 0.0, 0.0, 0.0);
    for k in -m..=m {
        let kf = k as f64;
        let a = PI * kf * (d + PI * kf) / t;
        let e = (-a).exp();
        let da = PI * kf / t;
        w += e;
        w1 -= e * da;
        w2 += e * da * da;
        wt += e * a / t;
    }
    let g1 = w1 / w;
    KernelJet { n: 1, d, t, log_w: w.ln(), dlogw_dd: g1, d2logw_dd2: w2 / w - g1 * g1, dlogw_dt: wt / w }
}
