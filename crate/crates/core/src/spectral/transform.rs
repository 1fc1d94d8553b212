//! FFT plumbing shared by the field types and the nonlinear product.
//!
//! Coefficients follow the integral convention `f̂(k) = ∫ f e^{-ik·x} dx`,
//! i.e. the raw DFT scaled by `(2π/M)²`. Two real fields are always moved
//! through a single complex FFT (`z = f + i g`), which also makes the
//! analysed spectra exactly conjugate symmetric.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::grid::wavenumber;

struct Plans {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

fn plans(n: usize) -> Arc<Plans> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<usize, Arc<Plans>>)>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    let (planner, map) = &mut *guard;
    if let Some(p) = map.get(&n) {
        return p.clone();
    }
    let p = Arc::new(Plans {
        forward: planner.plan_fft_forward(n),
        inverse: planner.plan_fft_inverse(n),
    });
    map.insert(n, p.clone());
    p
}

fn transpose_square(buf: &mut [Complex64], n: usize) {
    for r in 0..n {
        for c in (r + 1)..n {
            buf.swap(r * n + c, c * n + r);
        }
    }
}

/// Unnormalised 2D DFT of an `n × n` row-major buffer, in place.
pub(crate) fn fft2(buf: &mut [Complex64], n: usize, inverse: bool) {
    debug_assert_eq!(buf.len(), n * n);
    let p = plans(n);
    let fft = if inverse { &p.inverse } else { &p.forward };
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    fft.process_with_scratch(buf, &mut scratch);
    transpose_square(buf, n);
    fft.process_with_scratch(buf, &mut scratch);
    transpose_square(buf, n);
}

/// Synthesises two real fields on an `l × l` grid from spectra stored on an
/// `m × m` FFT layout, keeping only modes with `|k|_∞ <= radius`.
///
/// Returns the real and imaginary parts of `f + i g`; the imaginary part of
/// each individual field is not observable here, so callers that need to
/// check realness pass `b = None` and inspect the second output.
pub(crate) fn synthesize_pair(
    a: &[Complex64],
    b: Option<&[Complex64]>,
    m: usize,
    radius: usize,
    l: usize,
) -> (Vec<f64>, Vec<f64>) {
    debug_assert!(2 * radius < l);
    let mut buf = vec![Complex64::new(0.0, 0.0); l * l];
    let r = radius as i64;
    for i2 in 0..m {
        let k2 = wavenumber(i2, m);
        if k2.abs() > r {
            continue;
        }
        let o2 = k2.rem_euclid(l as i64) as usize;
        for i1 in 0..m {
            let k1 = wavenumber(i1, m);
            if k1.abs() > r {
                continue;
            }
            let o1 = k1.rem_euclid(l as i64) as usize;
            let src = i2 * m + i1;
            let mut z = a[src];
            if let Some(b) = b {
                // f + i g  in coefficient space
                z += Complex64::new(-b[src].im, b[src].re);
            }
            buf[o2 * l + o1] = z;
        }
    }
    fft2(&mut buf, l, true);
    let scale = 1.0 / (4.0 * PI * PI);
    let re = buf.iter().map(|z| z.re * scale).collect();
    let im = buf.iter().map(|z| z.im * scale).collect();
    (re, im)
}

/// Analyses two real `l × l` sample arrays and returns their spectra on an
/// `m × m` FFT layout with every mode outside `|k|_∞ <= radius` zeroed.
pub(crate) fn analyze_pair(
    f: &[f64],
    g: Option<&[f64]>,
    l: usize,
    m: usize,
    radius: usize,
) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut buf: Vec<Complex64> = match g {
        Some(g) => f.iter().zip(g).map(|(&x, &y)| Complex64::new(x, y)).collect(),
        None => f.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    };
    fft2(&mut buf, l, false);
    let h = 2.0 * PI / l as f64;
    let scale = h * h;
    let mut fa = vec![Complex64::new(0.0, 0.0); m * m];
    let mut ga = vec![Complex64::new(0.0, 0.0); m * m];
    let r = radius as i64;
    let li = l as i64;
    for i2 in 0..m {
        let k2 = wavenumber(i2, m);
        if k2.abs() > r {
            continue;
        }
        let p2 = k2.rem_euclid(li) as usize;
        let q2 = (-k2).rem_euclid(li) as usize;
        for i1 in 0..m {
            let k1 = wavenumber(i1, m);
            if k1.abs() > r {
                continue;
            }
            let p1 = k1.rem_euclid(li) as usize;
            let q1 = (-k1).rem_euclid(li) as usize;
            let z = buf[p2 * l + p1];
            let zc = buf[q2 * l + q1].conj();
            let dst = i2 * m + i1;
            fa[dst] = (z + zc) * (0.5 * scale);
            // (z - conj z(-k)) / 2i
            let d = (z - zc) * (0.5 * scale);
            ga[dst] = Complex64::new(d.im, -d.re);
        }
    }
    (fa, ga)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fft2_inverse_undoes_forward() {
        let n = 6;
        let orig: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut buf = orig.clone();
        fft2(&mut buf, n, false);
        fft2(&mut buf, n, true);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a / (n * n) as f64 - b).norm() < 1e-13);
        }
    }

    #[test]
    fn pair_analysis_separates_fields() {
        let m = 8;
        let h = 2.0 * PI / m as f64;
        let mut f = vec![0.0; m * m];
        let mut g = vec![0.0; m * m];
        for j2 in 0..m {
            for j1 in 0..m {
                let (x, y) = (j1 as f64 * h, j2 as f64 * h);
                f[j2 * m + j1] = x.cos();
                g[j2 * m + j1] = (2.0 * y).sin() + 0.5;
            }
        }
        let (fa, ga) = analyze_pair(&f, Some(&g), m, m, m / 2 - 1);
        let c = 4.0 * PI * PI;
        assert!((fa[1] - Complex64::new(c / 2.0, 0.0)).norm() < 1e-12);
        assert!((fa[m - 1] - Complex64::new(c / 2.0, 0.0)).norm() < 1e-12);
        assert!((ga[0] - Complex64::new(c * 0.5, 0.0)).norm() < 1e-12);
        assert!((ga[2 * m] - Complex64::new(0.0, -c / 2.0)).norm() < 1e-12);
        let (f2, g2) = synthesize_pair(&fa, Some(&ga), m, m / 2 - 1, m);
        for i in 0..m * m {
            assert!((f2[i] - f[i]).abs() < 1e-13);
            assert!((g2[i] - g[i]).abs() < 1e-13);
        }
    }
}
