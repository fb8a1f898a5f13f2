//! Flag grammars. Every target index a user types is 1-based; the values
//! returned here are 0-based.

use spinmediate::pattern::RegionMethod;
use spinmediate::protocols::PhaseTable;
use spinmediate::simulator::Outcome;

use crate::error::CliError;

type Result<T> = std::result::Result<T, CliError>;

fn bad(what: &str, input: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("bad {what} '{input}': {why}"))
}

fn number(what: &str, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|e| bad(what, s, e))?;
    if !v.is_finite() {
        return Err(bad(what, s, "not finite"));
    }
    Ok(v)
}

fn index(what: &str, s: &str) -> Result<usize> {
    let k: usize = s.trim().parse().map_err(|e| bad(what, s, e))?;
    if k == 0 {
        return Err(bad(what, s, "indices start at 1"));
    }
    Ok(k - 1)
}

/// `1,0,-0.5`
pub fn floats(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Err(bad("number list", s, "empty"));
    }
    s.split(',').map(|x| number("number list", x)).collect()
}

/// `1,2,3` with no repeats.
pub fn indices(s: &str) -> Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Err(bad("index list", s, "empty"));
    }
    let v: Vec<usize> = s.split(',').map(|x| index("index list", x)).collect::<Result<_>>()?;
    for (k, a) in v.iter().enumerate() {
        if v[k + 1..].contains(a) {
            return Err(bad("index list", s, format!("{} repeated", a + 1)));
        }
    }
    Ok(v)
}

/// `1-2`
pub fn pair(s: &str) -> Result<(usize, usize)> {
    let (a, b) = s.split_once('-').ok_or_else(|| bad("pair", s, "expected A-B"))?;
    let (a, b) = (index("pair", a)?, index("pair", b)?);
    if a == b {
        return Err(bad("pair", s, "both ends are the same target"));
    }
    Ok((a, b))
}

/// `1-2,2-3`; an empty string is the empty graph.
pub fn edges(s: &str) -> Result<Vec<(usize, usize)>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(pair).collect()
}

/// `+,-,+`
pub fn outcomes(s: &str) -> Result<Vec<Outcome>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| match x.trim() {
            "+" | "plus" | "0" => Ok(Outcome::Plus),
            "-" | "minus" | "1" => Ok(Outcome::Minus),
            other => Err(bad("outcome", other, "expected + or -")),
        })
        .collect()
}

/// `1,2:0.785;3:0.1` means `exp(-i 0.785 Z1 Z2) exp(-i 0.1 Z3)`.
pub fn phases(s: &str, targets: usize) -> Result<PhaseTable> {
    let mut table = PhaseTable::new(targets);
    for term in s.split(';').filter(|t| !t.trim().is_empty()) {
        let (subset, angle) = term.split_once(':').ok_or_else(|| bad("phase term", term, "expected SUBSET:ANGLE"))?;
        let subset = indices(subset)?;
        table
            .insert(&subset, number("phase", angle)?)
            .map_err(|e| bad("phase term", term, e))?;
    }
    Ok(table)
}

/// `point`, `taylor:K` or `discretize:SIGMA` (center, `+y` and `-x` at
/// distance `SIGMA`).
pub fn region(s: &str, dim: usize) -> Result<RegionMethod> {
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k.trim(), Some(a)),
        None => (s.trim(), None),
    };
    match (kind, arg) {
        ("point", None) => Ok(RegionMethod::Point),
        ("taylor", Some(a)) => {
            let order: usize = a.trim().parse().map_err(|e| bad("Taylor order", a, e))?;
            if order == 0 {
                return Err(bad("Taylor order", a, "must be at least 1"));
            }
            Ok(RegionMethod::Taylor { order })
        }
        ("discretize", Some(a)) => {
            let sigma = number("offset", a)?;
            if sigma <= 0.0 {
                return Err(bad("offset", a, "must be positive"));
            }
            Ok(RegionMethod::Discretize {
                offsets: spinmediate::pattern::RegionSpec::default_offsets(dim, sigma),
            })
        }
        _ => Err(bad("region", s, "expected point, taylor:K or discretize:SIGMA")),
    }
}
