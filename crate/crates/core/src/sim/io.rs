//! Binary grids (little-endian f64) with `key = value` text headers.
//!
//! `name.bin` holds the samples, `name.hdr` the dimensions, axes and the
//! SHA-256 of the inputs that produced them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex;
use sha2::{Digest, Sha256};

use super::process::Spectrum2D;
use super::runner::Raw2D;
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub config_sha256: String,
    pub sequence_sha256: String,
}

impl Provenance {
    pub fn from_texts(config: &str, sequence: &str) -> Self {
        Provenance { config_sha256: sha256_hex(config.as_bytes()), sequence_sha256: sha256_hex(sequence.as_bytes()) }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn with_ext(stem: &Path, ext: &str) -> PathBuf {
    let mut p = stem.as_os_str().to_owned();
    p.push(".");
    p.push(ext);
    PathBuf::from(p)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn to_bytes(v: impl Iterator<Item = f64>) -> Vec<u8> {
    v.flat_map(f64::to_le_bytes).collect()
}

fn from_bytes(b: &[u8]) -> Result<Vec<f64>> {
    if b.len() % 8 != 0 {
        return Err(Error::Validation(format!("binary grid length {} is not a multiple of 8", b.len())));
    }
    Ok(b.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

fn header_text(kind: &str, fields: &[(&str, String)], prov: &Provenance) -> String {
    let mut s = format!("kind = {kind}\n");
    for (k, v) in fields {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "config_sha256 = {}", prov.config_sha256);
    let _ = writeln!(s, "sequence_sha256 = {}", prov.sequence_sha256);
    s
}

fn parse_header(text: &str) -> Result<BTreeMap<String, String>> {
    let mut m = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Syntax { line: i + 1, message: "expected `key = value`".into() })?;
        m.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(m)
}

fn field<'a>(h: &'a BTreeMap<String, String>, k: &str) -> Result<&'a str> {
    h.get(k).map(String::as_str).ok_or_else(|| Error::Validation(format!("header lacks `{k}`")))
}

fn floats(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split_whitespace().map(|w| w.parse().map_err(|_| Error::Validation(format!("{what}: bad number `{w}`")))).collect()
}

pub fn write_raw(stem: &Path, raw: &Raw2D, prov: &Provenance) -> Result<()> {
    let fields = [
        ("n_t1", raw.n_t1.to_string()),
        ("n_t2", raw.n_t2.to_string()),
        ("dwell_t1", raw.dwell_t1.to_string()),
        ("dwell_t2", raw.dwell_t2.to_string()),
        ("t1_mode", "cosine".to_string()),
        ("layout", "row-major t1 by t2, interleaved re im".to_string()),
    ];
    fs::write(with_ext(stem, "hdr"), header_text("raw2d", &fields, prov))?;
    fs::write(with_ext(stem, "bin"), to_bytes(raw.data.iter().flat_map(|z| [z.re, z.im])))?;
    Ok(())
}

pub fn read_raw(stem: &Path) -> Result<Raw2D> {
    let h = parse_header(&fs::read_to_string(with_ext(stem, "hdr"))?)?;
    let parse_usize = |k: &str| field(&h, k)?.parse::<usize>().map_err(|_| Error::Validation(format!("bad `{k}`")));
    let parse_f64 = |k: &str| field(&h, k)?.parse::<f64>().map_err(|_| Error::Validation(format!("bad `{k}`")));
    let (n1, n2) = (parse_usize("n_t1")?, parse_usize("n_t2")?);
    let v = from_bytes(&fs::read(with_ext(stem, "bin"))?)?;
    if v.len() != 2 * n1 * n2 {
        return Err(Error::Validation(format!("expected {} samples, found {}", 2 * n1 * n2, v.len())));
    }
    let data = v.chunks_exact(2).map(|c| Complex::new(c[0], c[1])).collect();
    Ok(Raw2D { n_t1: n1, n_t2: n2, dwell_t1: parse_f64("dwell_t1")?, dwell_t2: parse_f64("dwell_t2")?, data })
}

pub fn write_spectrum(stem: &Path, s: &Spectrum2D, prov: &Provenance) -> Result<()> {
    let fields = [
        ("n_f1", s.n_f1().to_string()),
        ("n_f2", s.n_f2().to_string()),
        ("layout", "row-major f1 by f2, magnitude".to_string()),
        ("f1_axis_hz", join(&s.f1_axis)),
        ("f2_axis_hz", join(&s.f2_axis)),
    ];
    fs::write(with_ext(stem, "hdr"), header_text("spectrum2d", &fields, prov))?;
    fs::write(with_ext(stem, "bin"), to_bytes(s.data.iter().copied()))?;
    Ok(())
}

pub fn read_spectrum(stem: &Path) -> Result<Spectrum2D> {
    let h = parse_header(&fs::read_to_string(with_ext(stem, "hdr"))?)?;
    if field(&h, "kind")? != "spectrum2d" {
        return Err(Error::Validation(format!("{} is not a spectrum header", with_ext(stem, "hdr").display())));
    }
    let f1_axis = floats(field(&h, "f1_axis_hz")?, "f1_axis_hz")?;
    let f2_axis = floats(field(&h, "f2_axis_hz")?, "f2_axis_hz")?;
    let data = from_bytes(&fs::read(with_ext(stem, "bin"))?)?;
    if data.len() != f1_axis.len() * f2_axis.len() {
        return Err(Error::Validation(format!("expected {} samples, found {}", f1_axis.len() * f2_axis.len(), data.len())));
    }
    Ok(Spectrum2D { f1_axis, f2_axis, data })
}

/// `f1_hz f2_hz magnitude` rows.
pub fn spectrum_tsv(s: &Spectrum2D) -> String {
    let mut out = String::from("f1_hz\tf2_hz\tmagnitude\n");
    for (i, f1) in s.f1_axis.iter().enumerate() {
        for (j, f2) in s.f2_axis.iter().enumerate() {
            let _ = writeln!(out, "{f1}\t{f2}\t{:e}", s.at(i, j));
        }
    }
    out
}

/// `t1_s t2_s re im` rows.
pub fn raw_tsv(r: &Raw2D) -> String {
    let mut out = String::from("t1_s\tt2_s\tre\tim\n");
    for i in 0..r.n_t1 {
        for j in 0..r.n_t2 {
            let z = r.at(i, j);
            let _ = writeln!(out, "{}\t{}\t{:e}\t{:e}", r.t1(i), j as f64 * r.dwell_t2, z.re, z.im);
        }
    }
    out
}
