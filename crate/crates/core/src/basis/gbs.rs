//! Gaussian-format basis text.
//!
//! ```text
//! ! comment
//! ****
//! C     0
//! S   6   1.00
//!   3047.5249   0.0018347
//!   ...
//! SP   3   1.00
//!   7.8682724  -0.1193324   0.0689991
//! ****
//! ```
//!
//! An element block opens with `<symbol> 0` and closes with `****`. Each
//! shell header is `<S|P|D|SP> <nprim> <scale>`; exponents are multiplied by
//! `scale²`. `SP` rows carry one exponent and two coefficients and are split
//! into an S and a P shell sharing exponents. Fortran `D` exponents are
//! accepted. Blank lines and lines starting with `!` or `#` are ignored.

use std::collections::BTreeMap;

use super::{BasisError, BasisSet, ContractedShell};
use crate::molio::atomic_number;

fn number(tok: &str, line: usize) -> Result<f64, BasisError> {
    tok.replace(['D', 'd'], "E")
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| BasisError::Parse {
            line,
            msg: format!("expected a number, found '{tok}'"),
        })
}

pub fn parse_gbs(name: &str, text: &str) -> Result<BasisSet, BasisError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('!') && !l.starts_with('#'))
        .collect();

    let mut shells: BTreeMap<u32, Vec<ContractedShell>> = BTreeMap::new();
    let mut element: Option<u32> = None;
    let mut i = 0;
    while i < lines.len() {
        let (lineno, line) = lines[i];
        i += 1;
        if line.starts_with("****") {
            element = None;
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let Some(z) = element else {
            let z = atomic_number(tokens[0]).ok_or_else(|| BasisError::Parse {
                line: lineno,
                msg: format!("expected an element header, found '{line}'"),
            })?;
            if shells.contains_key(&z) {
                return Err(BasisError::Parse {
                    line: lineno,
                    msg: format!("element {} defined twice", tokens[0]),
                });
            }
            shells.insert(z, Vec::new());
            element = Some(z);
            continue;
        };

        if tokens.len() < 2 {
            return Err(BasisError::Parse {
                line: lineno,
                msg: format!("malformed shell header '{line}'"),
            });
        }
        let label = tokens[0].to_ascii_uppercase();
        let ls: Vec<u32> = match label.as_str() {
            "S" => vec![0],
            "P" => vec![1],
            "D" => vec![2],
            "SP" | "L" => vec![0, 1],
            "F" | "G" | "H" | "I" => {
                return Err(BasisError::UnsupportedAngularMomentum {
                    line: lineno,
                    label: tokens[0].to_string(),
                })
            }
            _ => {
                return Err(BasisError::Parse {
                    line: lineno,
                    msg: format!("unknown shell type '{}'", tokens[0]),
                })
            }
        };
        let nprim: usize = tokens[1].parse().map_err(|_| BasisError::Parse {
            line: lineno,
            msg: format!("bad primitive count '{}'", tokens[1]),
        })?;
        let scale = match tokens.get(2) {
            Some(t) => number(t, lineno)?,
            None => 1.0,
        };

        let mut rows: Vec<Vec<f64>> = Vec::with_capacity(nprim);
        for _ in 0..nprim {
            let Some(&(rl, row)) = lines.get(i) else {
                return Err(BasisError::Parse {
                    line: lineno,
                    msg: format!("shell ends after {} of {nprim} primitives", rows.len()),
                });
            };
            i += 1;
            let vals = row
                .split_whitespace()
                .map(|t| number(t, rl))
                .collect::<Result<Vec<_>, _>>()?;
            if vals.len() != 1 + ls.len() {
                return Err(BasisError::Parse {
                    line: rl,
                    msg: format!("expected {} columns, found {}", 1 + ls.len(), vals.len()),
                });
            }
            rows.push(vals);
        }
        for (col, &l) in ls.iter().enumerate() {
            let prims = rows.iter().map(|r| (r[0] * scale * scale, r[1 + col])).collect();
            let shell = ContractedShell::new(z, l, prims)
                .map_err(|msg| BasisError::Parse { line: lineno, msg })?;
            shells.get_mut(&z).expect("element registered").push(shell);
        }
    }
    Ok(BasisSet {
        name: name.to_string(),
        shells,
    })
}
