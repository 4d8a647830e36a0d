use std::fmt;
use std::str::FromStr;

use super::PlanarDiagram;
use crate::error::Error;

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedSyntax(msg.into())
}

/// Parses `X[a,b,c,d]` tuples out of the body of a `PD[...]` literal.
fn parse_body(body: &str) -> Result<Vec<[u32; 4]>, Error> {
    let mut out = Vec::new();
    let mut rest = body;
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix("X[")
            .ok_or_else(|| malformed(format!("expected 'X[' at '{rest}'")))?;
        let close = inner
            .find(']')
            .ok_or_else(|| malformed("unterminated crossing"))?;
        let labels: Vec<u32> = inner[..close]
            .split(',')
            .map(|s| match s.parse::<u32>() {
                Ok(v) if v > 0 => Ok(v),
                _ => Err(malformed(format!("bad arc label '{s}'"))),
            })
            .collect::<Result<_, _>>()?;
        let arcs: [u32; 4] = labels.try_into().map_err(|v: Vec<u32>| {
            malformed(format!("crossing has {} labels, expected 4", v.len()))
        })?;
        out.push(arcs);
        rest = &inner[close + 1..];
        if let Some(r) = rest.strip_prefix(',') {
            if r.is_empty() {
                return Err(malformed("trailing comma"));
            }
            rest = r;
        } else if !rest.is_empty() {
            return Err(malformed(format!("expected ',' at '{rest}'")));
        }
    }
    Ok(out)
}

impl FromStr for PlanarDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix("PD[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| malformed(format!("expected PD[...], got '{s}'")))?;
        PlanarDiagram::from_tuples(&parse_body(body)?)
    }
}

impl fmt::Display for PlanarDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PD[")?;
        for (i, x) in self.crossings.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            let [a, b, c, d] = x.arcs;
            write!(f, "X[{a},{b},{c},{d}]")?;
        }
        f.write_str("]")
    }
}
