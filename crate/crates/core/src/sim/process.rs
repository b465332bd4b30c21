use std::f64::consts::FRAC_PI_2;

use num_complex::Complex;
use rustfft::FftPlanner;

use super::runner::Raw2D;
use crate::error::{Error, Result};

/// F1 zero-fill factor.
pub const ZERO_FILL: usize = 4;

/// Magnitude spectrum, `n_f1 × n_f2`, row-major by F1.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum2D {
    pub f1_axis: Vec<f64>,
    pub f2_axis: Vec<f64>,
    pub data: Vec<f64>,
}

impl Spectrum2D {
    pub fn n_f1(&self) -> usize {
        self.f1_axis.len()
    }

    pub fn n_f2(&self) -> usize {
        self.f2_axis.len()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n_f2() + j]
    }

    pub fn max(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// Maximum over F2 for every F1 row.
    pub fn f1_projection(&self) -> Vec<f64> {
        self.data.chunks(self.n_f2().max(1)).map(|r| r.iter().copied().fold(0.0, f64::max)).collect()
    }

    /// Largest magnitude in rows whose F1 lies within `half_width` of `f1`.
    pub fn max_near_f1(&self, f1: f64, half_width: f64) -> f64 {
        self.f1_axis
            .iter()
            .zip(self.f1_projection())
            .filter(|(f, _)| (**f - f1).abs() <= half_width)
            .map(|(_, v)| v)
            .fold(0.0, f64::max)
    }
}

/// Centered frequency grid `−sw/2 + k·sw/n`.
pub fn frequency_axis(n: usize, sw: f64) -> Vec<f64> {
    (0..n).map(|k| -sw / 2.0 + k as f64 * sw / n as f64).collect()
}

/// Quarter-cosine window, 1 at the first point and approaching 0 at the end.
pub fn cosine_window(n: usize) -> Vec<f64> {
    (0..n).map(|i| (FRAC_PI_2 * i as f64 / n as f64).cos()).collect()
}

/// Swaps the halves so that zero frequency lands at index `n/2`.
pub fn fftshift<T: Copy>(v: &mut [T]) {
    let n = v.len();
    v.rotate_right(n / 2);
}

/// Unitary forward FFT with the zero frequency centered.
pub fn fft_centered(v: &mut [Complex<f64>]) {
    let n = v.len();
    if n == 0 {
        return;
    }
    FftPlanner::new().plan_fft_forward(n).process(v);
    let scale = 1.0 / (n as f64).sqrt();
    v.iter_mut().for_each(|z| *z *= scale);
    fftshift(v);
}

/// `C(m) = Σ_i s_i cos(2π m i / N)` on the centered grid, `N = len(out)`.
fn cosine_transform(s: &[Complex<f64>], n: usize, planner: &mut FftPlanner<f64>) -> Vec<Complex<f64>> {
    let mut x = vec![Complex::new(0.0, 0.0); n];
    x[..s.len()].copy_from_slice(s);
    planner.plan_fft_forward(n).process(&mut x);
    let mut c: Vec<Complex<f64>> = (0..n).map(|m| (x[m] + x[(n - m) % n]) * 0.5).collect();
    fftshift(&mut c);
    c
}

/// Cosine window in both dimensions (first t₁ point halved), unitary FFT in t₂,
/// cosine transform over ×4 zero-filled t₁, magnitude.
pub fn process_2d(raw: &Raw2D) -> Spectrum2D {
    let (n1, n2) = (raw.n_t1, raw.n_t2);
    let w1 = cosine_window(n1);
    let w2 = cosine_window(n2);
    let mut rows: Vec<Vec<Complex<f64>>> = (0..n1)
        .map(|i| {
            let scale = if i == 0 { 0.5 * w1[i] } else { w1[i] };
            let mut r: Vec<Complex<f64>> = raw.row(i).iter().zip(&w2).map(|(z, w)| z * (w * scale)).collect();
            fft_centered(&mut r);
            r
        })
        .collect();
    let nf1 = ZERO_FILL * n1;
    let mut planner = FftPlanner::new();
    let mut data = vec![0.0; nf1 * n2];
    let mut column = vec![Complex::new(0.0, 0.0); n1];
    for j in 0..n2 {
        for (i, r) in rows.iter_mut().enumerate() {
            column[i] = r[j];
        }
        for (m, c) in cosine_transform(&column, nf1, &mut planner).into_iter().enumerate() {
            data[m * n2 + j] = c.norm();
        }
    }
    Spectrum2D { f1_axis: frequency_axis(nf1, 1.0 / raw.dwell_t1), f2_axis: frequency_axis(n2, 1.0 / raw.dwell_t2), data }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    /// `max |a − b| / max |a|`.
    pub max_rel_diff: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Comparison {
    pub fn to_text(&self) -> String {
        format!("COMPARE {} max_rel_diff={:e} tol={:e}\n", if self.pass { "PASS" } else { "FAIL" }, self.max_rel_diff, self.tol)
    }
}

fn same_axis(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0))
}

/// Largest magnitude difference relative to the largest magnitude of `a`.
pub fn compare_spectra(a: &Spectrum2D, b: &Spectrum2D, tol: f64) -> Result<Comparison> {
    if !same_axis(&a.f1_axis, &b.f1_axis) || !same_axis(&a.f2_axis, &b.f2_axis) {
        return Err(Error::GridMismatch(format!("{}×{} vs {}×{}", a.n_f1(), a.n_f2(), b.n_f1(), b.n_f2())));
    }
    let diff = a.data.iter().zip(&b.data).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = a.max();
    let max_rel_diff = if scale > 0.0 { diff / scale } else { diff };
    Ok(Comparison { max_rel_diff, tol, pass: max_rel_diff <= tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn tone(f1: f64, f2: f64, n1: usize, n2: usize) -> Raw2D {
        let mut raw = Raw2D::zeros(n1, n2, 1.0 / 30.0, 1.0 / 4000.0);
        for i in 0..n1 {
            for j in 0..n2 {
                let (t1, t2) = (raw.t1(i), j as f64 * raw.dwell_t2);
                raw.data[i * n2 + j] = Complex::from_polar((2.0 * PI * f1 * t1).cos(), 2.0 * PI * f2 * t2);
            }
        }
        raw
    }

    fn argmax(v: &[f64]) -> usize {
        (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b })
    }

    #[test]
    fn cosine_tone_gives_symmetric_f1_maxima() {
        let s = process_2d(&tone(5.9, 500.0, 64, 64));
        let p = s.f1_projection();
        let bin = 30.0 / 256.0;
        let (neg, pos) = p.split_at(128);
        let fneg = s.f1_axis[argmax(neg)];
        let fpos = s.f1_axis[128 + argmax(pos)];
        assert!((fneg + 5.9).abs() <= bin, "{fneg}");
        assert!((fpos - 5.9).abs() <= bin, "{fpos}");
    }

    #[test]
    fn zero_in_zero_out() {
        let s = process_2d(&Raw2D::zeros(8, 16, 0.1, 0.01));
        assert!(s.data.iter().all(|&v| v == 0.0));
        assert_eq!((s.n_f1(), s.n_f2()), (32, 16));
    }

    #[test]
    fn unitary_fft_preserves_energy() {
        let mut v: Vec<Complex<f64>> = (0..1000).map(|k| Complex::new((k as f64 * 0.37).sin(), (k as f64 * 1.3).cos())).collect();
        let e0: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        fft_centered(&mut v);
        let e1: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        assert!((e0 - e1).abs() / e0 < 1e-9);
    }

    #[test]
    fn axes_span_the_spectral_width() {
        let s = process_2d(&Raw2D::zeros(64, 8, 1.0 / 30.0, 1.0 / 4000.0));
        assert_eq!(s.f1_axis[0], -15.0);
        assert!((s.f1_axis[255] - (15.0 - 30.0 / 256.0)).abs() < 1e-12);
        assert_eq!(s.f1_axis[128], 0.0);
    }

    #[test]
    fn comparison() {
        let a = process_2d(&tone(3.0, 100.0, 16, 32));
        let c = compare_spectra(&a, &a, 0.0).unwrap();
        assert!(c.pass && c.max_rel_diff == 0.0);
        let b = process_2d(&tone(3.0, 100.0, 16, 16));
        assert!(matches!(compare_spectra(&a, &b, 1.0), Err(Error::GridMismatch(_))));
    }
}
