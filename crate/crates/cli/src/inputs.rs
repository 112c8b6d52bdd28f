//! Parsing of group, subgroup, digraph and coefficient arguments.

use std::path::Path;

use arrowaut_core::cdga::Coeff;
use arrowaut_core::digraph::Digraph;
use arrowaut_core::group::{cyclic, dihedral, klein4, symmetric, FiniteGroup};
use arrowaut_core::{Error, Result};

/// `cyclic:n`, `klein4`, `dihedral:n`, `sym:k`, or a path to a group JSON file.
pub fn parse_group(spec: &str) -> Result<FiniteGroup> {
    let arg = |a: &str| a.parse::<usize>().map_err(|_| Error::Parse(format!("bad group size in {spec:?}")));
    match spec.split_once(':') {
        Some(("cyclic", n)) => cyclic(arg(n)?),
        Some(("dihedral", n)) => dihedral(arg(n)?),
        Some(("sym", k)) => symmetric(arg(k)?),
        None if spec == "klein4" => Ok(klein4()),
        _ if Path::new(spec).is_file() => {
            let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: {e}")))
        }
        _ => Err(Error::Parse(format!("unknown group {spec:?}"))),
    }
}

/// Generator pairs written as `(a,b)`, optionally separated by commas,
/// semicolons or spaces. The empty string gives no generators.
pub fn parse_pairs(spec: &str) -> Result<Vec<(usize, usize)>> {
    let bad = || Error::Parse(format!("expected pairs like \"(2,2);(0,1)\", got {spec:?}"));
    let mut out = Vec::new();
    let mut rest = spec.trim();
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(bad)?;
        let close = body.find(')').ok_or_else(bad)?;
        let (a, b) = body[..close].split_once(',').ok_or_else(bad)?;
        out.push((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
        rest = body[close + 1..].trim_start_matches(|c: char| c == ',' || c == ';' || c.is_whitespace());
    }
    Ok(out)
}

/// A digraph preset (`cycle:k`, `complete:k`, `bowtie`, `chorded:k`) or a
/// path to a digraph JSON file.
pub fn parse_digraph(spec: &str) -> Result<Digraph> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Parse(format!("{spec}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{spec}: {e}")));
    }
    Digraph::preset(spec)
}

/// Comma-separated rationals such as `-1,0,1` or `1/2,2`.
pub fn parse_coeff_set(spec: &str) -> Result<Vec<Coeff>> {
    let mut out: Vec<Coeff> = spec
        .split(',')
        .map(|t| t.trim().parse::<Coeff>().map_err(|_| Error::Parse(format!("bad coefficient {t:?}"))))
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(Error::Parse("empty coefficient set".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pairs("(2,2)").unwrap(), vec![(2, 2)]);
        assert_eq!(parse_pairs(" (1, 0); (0,3) ,(4,4)").unwrap(), vec![(1, 0), (0, 3), (4, 4)]);
        assert!(parse_pairs("").unwrap().is_empty());
        assert!(parse_pairs("(1,)").is_err());
        assert!(parse_pairs("2,2").is_err());
    }

    #[test]
    fn groups() {
        assert_eq!(parse_group("cyclic:8").unwrap().order(), 8);
        assert_eq!(parse_group("klein4").unwrap().order(), 4);
        assert_eq!(parse_group("dihedral:4").unwrap().order(), 8);
        assert_eq!(parse_group("sym:3").unwrap().order(), 6);
        assert!(parse_group("cyclic:x").is_err());
        assert!(parse_group("mystery").is_err());
    }

    #[test]
    fn coefficients() {
        let c = parse_coeff_set("1,-1,0,1").unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(parse_coeff_set("1/2").unwrap()[0].to_string(), "1/2");
        assert!(parse_coeff_set("a").is_err());
    }
}
