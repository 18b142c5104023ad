//! The `.upset` text format.
//!
//! ```text
//! n=5
//! 1
//! 3,4
//! ```
//!
//! Line one is the header `n=<int>`. Every following non-empty line is one
//! generator: comma-separated elements of `[n]`, or `{}` for the empty set.
//! The family is the up-closure of the generators, so an empty body is the
//! empty family and a `{}` line is the full cube. Writers emit the minimal
//! elements in `(cardinality, mask)` order.

use std::fs;
use std::path::Path;

use super::family::{Family, Point, N_MAX};
use crate::error::{Error, Result};

pub fn write_upset(f: &Family) -> Result<String> {
    let mut out = format!("n={}\n", f.n());
    for p in f.minimal_elements()? {
        if p.is_empty() {
            out.push_str("{}\n");
        } else {
            let line: Vec<String> = p.elements().iter().map(u32::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
    }
    Ok(out)
}

pub fn parse_upset(text: &str) -> Result<Family> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines
        .by_ref()
        .find(|(_, l)| !l.trim().is_empty())
        .ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
    let n: u32 = header
        .trim()
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse().ok())
        .ok_or(Error::Parse {
            line: 1,
            msg: format!("expected `n=<int>`, found {header:?}"),
        })?;
    if n > N_MAX {
        return Err(Error::Parse {
            line: 1,
            msg: format!("n={n} exceeds {N_MAX}"),
        });
    }
    let mut gens = Family::empty(n)?;
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: idx + 1, msg };
        if line == "{}" {
            gens.insert(Point::EMPTY);
            continue;
        }
        let mut mask = 0u32;
        for tok in line.split(',') {
            let e: u32 = tok
                .trim()
                .parse()
                .map_err(|_| err(format!("bad element {tok:?}")))?;
            if e == 0 || e > n {
                return Err(err(format!("element {e} outside [{n}]")));
            }
            let bit = 1u32 << (e - 1);
            if mask & bit != 0 {
                return Err(err(format!("duplicate element {e}")));
            }
            mask |= bit;
        }
        gens.insert(Point(mask));
    }
    Ok(gens.up_closure())
}

pub fn read_upset_file(path: impl AsRef<Path>) -> Result<Family> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_upset(&text)
}

pub fn write_upset_file(f: &Family, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, write_upset(f)?).map_err(|e| Error::io(path, e))
}
