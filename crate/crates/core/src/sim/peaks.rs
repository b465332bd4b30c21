use std::fmt::Write as _;

use super::process::Spectrum2D;
use crate::error::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Peak {
    pub f1: f64,
    pub f2: f64,
    /// Grid magnitude over the global maximum.
    pub amplitude: f64,
}

/// Peaks sorted by amplitude, largest first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PeakList {
    pub peaks: Vec<Peak>,
}

impl PeakList {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    /// Distinct F1 positions, merged when closer than `tol` Hz.
    pub fn f1_positions(&self, tol: f64) -> Vec<f64> {
        let mut out: Vec<f64> = Vec::new();
        for p in &self.peaks {
            if !out.iter().any(|f| (f - p.f1).abs() < tol) {
                out.push(p.f1);
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    pub fn has_f1(&self, f1: f64, tol: f64) -> bool {
        self.peaks.iter().any(|p| (p.f1 - f1).abs() <= tol)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::from("f1_hz\tf2_hz\tamplitude\n");
        for p in &self.peaks {
            let _ = writeln!(s, "{:.6}\t{:.6}\t{:.9}", p.f1, p.f2, p.amplitude);
        }
        s
    }
}

/// Vertex offset of the parabola through three equally spaced samples, in bins.
fn parabolic(l: f64, c: f64, r: f64) -> f64 {
    let den = l - 2.0 * c + r;
    if den == 0.0 {
        0.0
    } else {
        (0.5 * (l - r) / den).clamp(-0.5, 0.5)
    }
}

fn step(axis: &[f64]) -> f64 {
    if axis.len() > 1 {
        axis[1] - axis[0]
    } else {
        0.0
    }
}

/// 2D local maxima above `threshold_fraction` of the global maximum, refined
/// along each axis by a three-point parabola.
pub fn peak_pick(s2d: &Spectrum2D, threshold_fraction: f64) -> Result<PeakList> {
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("peak threshold must lie in (0, 1), got {threshold_fraction}")));
    }
    let (n1, n2) = (s2d.n_f1(), s2d.n_f2());
    let max = s2d.max();
    if max <= 0.0 {
        return Ok(PeakList::default());
    }
    let cut = threshold_fraction * max;
    let (d1, d2) = (step(&s2d.f1_axis), step(&s2d.f2_axis));
    let mut peaks = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let v = s2d.at(i, j);
            if v < cut {
                continue;
            }
            let mut is_max = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii < 0 || jj < 0 || ii >= n1 as i64 || jj >= n2 as i64 {
                        continue;
                    }
                    let w = s2d.at(ii as usize, jj as usize);
                    // ties go to the first cell in scan order
                    if w > v || (w == v && (di, dj) < (0, 0)) {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if !is_max {
                continue;
            }
            let o1 = if i > 0 && i + 1 < n1 { parabolic(s2d.at(i - 1, j), v, s2d.at(i + 1, j)) } else { 0.0 };
            let o2 = if j > 0 && j + 1 < n2 { parabolic(s2d.at(i, j - 1), v, s2d.at(i, j + 1)) } else { 0.0 };
            peaks.push(Peak { f1: s2d.f1_axis[i] + o1 * d1, f2: s2d.f2_axis[j] + o2 * d2, amplitude: v / max });
        }
    }
    peaks.sort_by(|a, b| b.amplitude.total_cmp(&a.amplitude).then(a.f1.total_cmp(&b.f1)).then(a.f2.total_cmp(&b.f2)));
    Ok(PeakList { peaks })
}
