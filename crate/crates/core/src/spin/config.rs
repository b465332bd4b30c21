//! Line-oriented spin-system config.
//!
//! ```text
//! # comment
//! spin <label> gamma=<int|p/q|decimal> [shift_hz=<float>] [species=<name>]
//! j <labelA> <labelB> <hz>
//! t2 <QQ|DQ1|DQ2|ZQ|SQ|default> <seconds>
//! ```
//!
//! Spins must be declared before the `j` lines that use them. A pair may be
//! declared in both orientations only with the same value; differing values
//! are an asymmetric table and fail validation.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::system::{parse_ratio, CoherenceLabel, Spin, SpinSystem, T2Map};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, message: message.into() }
}

fn number<T: Real>(line: usize, what: &str, s: &str) -> Result<T> {
    let v: T = s.parse().map_err(|_| syntax(line, format!("{what}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(syntax(line, format!("{what}: `{s}` is not finite")));
    }
    Ok(v)
}

pub fn parse_spin_config<T: Real>(text: &str) -> Result<SpinSystem<T>> {
    let mut spins: Vec<Spin<T>> = Vec::new();
    let mut couplings: BTreeMap<(usize, usize), (T, usize)> = BTreeMap::new();
    let mut t2 = T2Map::default();
    let mut t2_seen = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let words: Vec<&str> = body.split_whitespace().collect();
        match words[0] {
            "spin" => {
                let label = *words.get(1).ok_or_else(|| syntax(line, "spin needs a label"))?;
                if label.contains('=') {
                    return Err(syntax(line, "spin needs a label before its keys"));
                }
                if spins.iter().any(|s| s.label == label) {
                    return Err(Error::Validation(format!("line {line}: duplicate spin label `{label}`")));
                }
                let mut gamma = None;
                let mut shift = None;
                let mut species = None;
                for kv in &words[2..] {
                    let (k, v) = kv.split_once('=').ok_or_else(|| syntax(line, format!("expected key=value, got `{kv}`")))?;
                    let dup = match k {
                        "gamma" => gamma.replace(parse_ratio(v).ok_or_else(|| syntax(line, format!("gamma: bad value `{v}`")))?).is_some(),
                        "shift_hz" => shift.replace(number::<T>(line, "shift_hz", v)?).is_some(),
                        "species" => species.replace(v.to_string()).is_some(),
                        _ => return Err(syntax(line, format!("unknown key `{k}`"))),
                    };
                    if dup {
                        return Err(syntax(line, format!("key `{k}` given twice")));
                    }
                }
                let gamma = gamma.ok_or_else(|| syntax(line, format!("spin `{label}` needs gamma=")))?;
                spins.push(Spin { label: label.to_string(), gamma, shift_hz: shift.unwrap_or_else(T::zero), species });
            }
            "j" => {
                if words.len() != 4 {
                    return Err(syntax(line, "expected `j <labelA> <labelB> <hz>`"));
                }
                let find = |l: &str| {
                    spins
                        .iter()
                        .position(|s| s.label == l)
                        .ok_or_else(|| syntax(line, format!("unknown spin `{l}` (declare spins first)")))
                };
                let (a, b) = (find(words[1])?, find(words[2])?);
                if a == b {
                    return Err(Error::Validation(format!("line {line}: coupling table diagonal must be zero (spin `{}`)", words[1])));
                }
                let hz = number::<T>(line, "j", words[3])?;
                let key = (a.min(b), a.max(b));
                let oriented = a < b;
                match couplings.get(&key) {
                    None => {
                        couplings.insert(key, (hz, if oriented { 1 } else { 2 }));
                    }
                    Some(&(prev, seen)) => {
                        let bit = if oriented { 1 } else { 2 };
                        if seen & bit != 0 {
                            return Err(syntax(line, format!("duplicate coupling {} {}", words[1], words[2])));
                        }
                        if prev != hz {
                            return Err(Error::Validation(format!(
                                "coupling table not symmetric: J({},{}) = {} but J({},{}) = {}",
                                words[2], words[1], prev, words[1], words[2], hz
                            )));
                        }
                        couplings.insert(key, (prev, seen | bit));
                    }
                }
            }
            "t2" => {
                if words.len() != 3 {
                    return Err(syntax(line, "expected `t2 <label> <seconds>`"));
                }
                let label: CoherenceLabel = words[1].parse().map_err(|_| syntax(line, format!("unknown coherence label `{}`", words[1])))?;
                if t2_seen.contains(&label) {
                    return Err(syntax(line, format!("duplicate t2 for {label}")));
                }
                t2_seen.push(label);
                let secs = number::<T>(line, "t2", words[2])?;
                if !(secs > T::zero()) {
                    return Err(Error::Validation(format!("line {line}: T2 for {label} must be positive")));
                }
                t2.set(label, secs);
            }
            other => return Err(syntax(line, format!("unknown directive `{other}`"))),
        }
    }

    let n = spins.len();
    let mut table = vec![vec![T::zero(); n]; n];
    for ((a, b), (hz, _)) in couplings {
        table[a][b] = hz;
        table[b][a] = hz;
    }
    SpinSystem::from_parts(spins, table, t2)
}

/// Inverse of [`parse_spin_config`]; `parse(serialize(s)) == s`.
pub fn serialize_spin_config<T: Real>(system: &SpinSystem<T>) -> String {
    let mut out = String::new();
    for s in system.spins() {
        let _ = write!(out, "spin {} gamma={} shift_hz={}", s.label, s.gamma, s.shift_hz);
        if let Some(sp) = &s.species {
            let _ = write!(out, " species={sp}");
        }
        out.push('\n');
    }
    let n = system.len();
    for a in 0..n {
        for b in a + 1..n {
            let j = system.coupling(a, b);
            if j != T::zero() {
                let _ = writeln!(out, "j {} {} {}", system.spin(a).label, system.spin(b).label, j);
            }
        }
    }
    for (label, secs) in system.t2().entries() {
        let _ = writeln!(out, "t2 {label} {secs}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::DEFAULT_T2_SECONDS;

    #[test]
    fn minimal_two_spin_file() {
        let s: SpinSystem<f64> = parse_spin_config("spin A gamma=1\nspin B gamma=1 shift_hz=2.5\nj A B 10\n").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.coupling(1, 0), 10.0);
        assert_eq!(s.spin(1).shift_hz, 2.5);
        assert_eq!(s.t2().get(CoherenceLabel::DQ2), DEFAULT_T2_SECONDS);
    }

    #[test]
    fn asymmetric_couplings_fail_validation() {
        let e = parse_spin_config::<f64>("spin A gamma=1\nspin B gamma=1\nj A B 10\nj B A 12\n").unwrap_err();
        assert!(matches!(e, Error::Validation(_)), "{e}");
    }

    #[test]
    fn both_orientations_with_one_value_are_fine() {
        assert!(parse_spin_config::<f64>("spin A gamma=1\nspin B gamma=1\nj A B 10\nj B A 10\n").is_ok());
    }

    #[test]
    fn unknown_keys_and_directives_report_line() {
        let e = parse_spin_config::<f64>("spin A gamma=1\nspin B gamma=1 colour=red\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }), "{e}");
        let e = parse_spin_config::<f64>("# hi\n\nbogus 1\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 3, .. }), "{e}");
    }

    #[test]
    fn duplicates_rejected() {
        assert!(parse_spin_config::<f64>("spin A gamma=1\nspin A gamma=1\n").is_err());
        assert!(parse_spin_config::<f64>("spin A gamma=1\nt2 SQ 1\nt2 sq 2\n").is_err());
        assert!(parse_spin_config::<f64>("spin A gamma=1 gamma=2\n").is_err());
    }

    #[test]
    fn missing_gamma_and_empty_file_rejected() {
        assert!(parse_spin_config::<f64>("spin A shift_hz=1\n").is_err());
        assert!(matches!(parse_spin_config::<f64>("# nothing\n"), Err(Error::Validation(_))));
    }
}
