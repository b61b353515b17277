//! XYZ reading and writing.
//!
//! Line 1 holds the atom count, line 2 is a free comment in which
//! whitespace-separated `key=value` tokens are recognized (`id`, `charge`,
//! `smiles`), and each following line is `symbol x y z`.

use std::fmt::Write;
use std::str::FromStr;

use nalgebra::Vector3;

use super::{atomic_number, element_symbol, Atom, MolError, Molecule};
use crate::units::BOHR_PER_ANGSTROM;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LengthUnit {
    Angstrom,
    Bohr,
}

impl LengthUnit {
    pub fn name(self) -> &'static str {
        match self {
            LengthUnit::Angstrom => "angstrom",
            LengthUnit::Bohr => "bohr",
        }
    }

    fn to_bohr(self) -> f64 {
        match self {
            LengthUnit::Angstrom => BOHR_PER_ANGSTROM,
            LengthUnit::Bohr => 1.0,
        }
    }
}

impl FromStr for LengthUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "angstrom" | "a" | "ang" => Ok(LengthUnit::Angstrom),
            "bohr" | "au" => Ok(LengthUnit::Bohr),
            other => Err(format!("unknown length unit '{other}'")),
        }
    }
}

/// Parses a single XYZ frame. Trailing blank lines are allowed; any other
/// extra line is an atom-count mismatch.
pub fn parse_xyz(text: &str, unit: LengthUnit) -> Result<Molecule, MolError> {
    let lines: Vec<&str> = text.lines().collect();
    let (mol, consumed) = parse_frame(&lines, 0, unit)?;
    let extra = lines[consumed..].iter().filter(|l| !l.trim().is_empty()).count();
    if extra > 0 {
        return Err(MolError::AtomCountMismatch {
            expected: mol.len(),
            found: mol.len() + extra,
        });
    }
    Ok(mol)
}

/// Parses concatenated XYZ frames.
pub fn parse_xyz_stream(text: &str, unit: LengthUnit) -> Result<Vec<Molecule>, MolError> {
    Ok(split_frames(text, unit)?.into_iter().map(|(m, _)| m).collect())
}

/// Splits concatenated frames into their raw text, validating each.
pub(super) fn split_frames(text: &str, unit: LengthUnit) -> Result<Vec<(Molecule, String)>, MolError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut out = Vec::new();
    let mut at = 0;
    loop {
        while at < lines.len() && lines[at].trim().is_empty() {
            at += 1;
        }
        if at >= lines.len() {
            return Ok(out);
        }
        let (mol, next) = parse_frame(&lines, at, unit)?;
        let mut raw = lines[at..next].join("\n");
        raw.push('\n');
        out.push((mol, raw));
        at = next;
    }
}

fn parse_frame(lines: &[&str], start: usize, unit: LengthUnit) -> Result<(Molecule, usize), MolError> {
    let count_line = lines.get(start).copied().unwrap_or("");
    let natoms: usize = count_line.trim().parse().map_err(|_| MolError::BadCount {
        line: start + 1,
        text: count_line.to_string(),
    })?;
    let comment = lines.get(start + 1).copied().unwrap_or("");
    let fields = CommentFields::parse(comment, start + 2)?;

    let scale = unit.to_bohr();
    let mut atoms = Vec::with_capacity(natoms);
    for k in 0..natoms {
        let lineno = start + 3 + k;
        let line = match lines.get(start + 2 + k) {
            Some(l) if !l.trim().is_empty() => *l,
            _ => {
                return Err(MolError::AtomCountMismatch {
                    expected: natoms,
                    found: k,
                })
            }
        };
        let mut tok = line.split_whitespace();
        let symbol = tok.next().unwrap_or_default();
        let coords: Vec<&str> = tok.take(3).collect();
        if coords.len() != 3 {
            return Err(MolError::BadAtomLine {
                line: lineno,
                text: line.to_string(),
            });
        }
        let z = atomic_number(symbol).ok_or_else(|| MolError::UnknownElement {
            line: lineno,
            symbol: symbol.to_string(),
        })?;
        let mut xyz = [0.0; 3];
        for (slot, c) in xyz.iter_mut().zip(&coords) {
            let v: f64 = c.parse().map_err(|_| MolError::BadAtomLine {
                line: lineno,
                text: line.to_string(),
            })?;
            if !v.is_finite() {
                return Err(MolError::NonFiniteCoordinate { line: lineno });
            }
            *slot = v * scale;
        }
        atoms.push(Atom {
            atomic_number: z,
            position: Vector3::from(xyz),
        });
    }
    let mol = Molecule::new(atoms, fields.charge)?
        .with_id(fields.id.unwrap_or_default())
        .with_smiles(fields.smiles);
    Ok((mol, start + 2 + natoms))
}

#[derive(Default)]
struct CommentFields {
    id: Option<String>,
    charge: i32,
    smiles: Option<String>,
}

impl CommentFields {
    fn parse(comment: &str, line: usize) -> Result<Self, MolError> {
        let mut out = Self::default();
        for tok in comment.split_whitespace() {
            let Some((key, value)) = tok.split_once('=') else {
                continue;
            };
            match key.to_ascii_lowercase().as_str() {
                "id" => out.id = Some(value.to_string()),
                "smiles" => out.smiles = Some(value.to_string()),
                "charge" => {
                    out.charge = value.parse().map_err(|_| MolError::BadCommentField {
                        line,
                        text: tok.to_string(),
                    })?
                }
                _ => {}
            }
        }
        Ok(out)
    }
}

/// Writes one XYZ frame. The comment line carries `id=`, `charge=` and
/// `smiles=` so that [`parse_xyz`] restores them. Coordinates are written with
/// shortest round-trip formatting.
pub fn emit_xyz(mol: &Molecule, unit: LengthUnit) -> String {
    let scale = 1.0 / unit.to_bohr();
    let mut s = String::new();
    let _ = writeln!(s, "{}", mol.len());
    let mut comment = Vec::new();
    if !mol.id().is_empty() {
        comment.push(format!("id={}", mol.id()));
    }
    if mol.charge() != 0 {
        comment.push(format!("charge={}", mol.charge()));
    }
    if let Some(smi) = mol.smiles() {
        comment.push(format!("smiles={smi}"));
    }
    let _ = writeln!(s, "{}", comment.join(" "));
    for a in mol.atoms() {
        let p = a.position * scale;
        let _ = writeln!(
            s,
            "{:<2} {:?} {:?} {:?}",
            element_symbol(a.atomic_number).unwrap_or("X"),
            p.x,
            p.y,
            p.z
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn single_hydrogen_at_origin() {
        let m = parse_xyz("1\n\nH 0 0 0", LengthUnit::Angstrom).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.atoms()[0].atomic_number, 1);
        assert_eq!(m.atoms()[0].position, Vector3::zeros());
    }

    #[test]
    fn h2_angstrom_to_bohr_and_comment_fields() {
        let m = parse_xyz("2\nid=h2\nH 0 0 0\nH 0 0 0.7408", LengthUnit::Angstrom).unwrap();
        assert_eq!(m.id(), "h2");
        assert_eq!(m.charge(), 0);
        assert!((m.atoms()[1].position.z - 1.4000).abs() < 1e-4);
        assert!((m.atoms()[1].position.z - 0.7408 * 1.8897259886).abs() < 1e-14);

        let ion = parse_xyz("2\nfoo id=x charge=-2 bar\nO 0 0 0\nh 0 0 1", LengthUnit::Bohr).unwrap();
        assert_eq!(ion.charge(), -2);
        assert_eq!(ion.atoms()[1].atomic_number, 1);
    }

    #[test]
    fn error_cases() {
        assert!(matches!(
            parse_xyz("two\n\nH 0 0 0", LengthUnit::Bohr),
            Err(MolError::BadCount { line: 1, .. })
        ));
        assert!(matches!(
            parse_xyz("1\n\nQq 0 0 0", LengthUnit::Bohr),
            Err(MolError::UnknownElement { line: 3, .. })
        ));
        assert!(matches!(
            parse_xyz("3\n\nH 0 0 0\nH 0 0 1.4", LengthUnit::Bohr),
            Err(MolError::AtomCountMismatch { expected: 3, found: 2 })
        ));
        assert!(matches!(
            parse_xyz("1\n\nH 0 0 0\nH 0 0 1.4", LengthUnit::Bohr),
            Err(MolError::AtomCountMismatch { expected: 1, found: 2 })
        ));
        assert!(matches!(
            parse_xyz("1\n\nH 0 NaN 0", LengthUnit::Bohr),
            Err(MolError::NonFiniteCoordinate { line: 3 })
        ));
        assert!(matches!(
            parse_xyz("1\n\nH 0 inf 0", LengthUnit::Bohr),
            Err(MolError::NonFiniteCoordinate { line: 3 })
        ));
        assert!(matches!(
            parse_xyz("1\ncharge=one\nH 0 0 0", LengthUnit::Bohr),
            Err(MolError::BadCommentField { line: 2, .. })
        ));
        assert!(matches!(
            parse_xyz("1\n\nH 0 0", LengthUnit::Bohr),
            Err(MolError::BadAtomLine { line: 3, .. })
        ));
    }

    #[test]
    fn stream_of_frames() {
        let text = "1\nid=a\nH 0 0 0\n\n2\nid=b smiles=[H][H]\nH 0 0 0\nH 0 0 1.4\n";
        let mols = parse_xyz_stream(text, LengthUnit::Bohr).unwrap();
        assert_eq!(mols.len(), 2);
        assert_eq!(mols[1].id(), "b");
        assert_eq!(mols[1].smiles(), Some("[H][H]"));
    }

    proptest! {
        #[test]
        fn emit_parse_round_trip(
            atoms in prop::collection::vec((1u32..=18, prop::array::uniform3(-20.0f64..20.0)), 1..12),
            charge in -2i32..3,
            angstrom in any::<bool>(),
        ) {
            let Ok(mol) = Molecule::from_bohr(&atoms, charge) else { return Ok(()) };
            let mol = mol.with_id("conf-7");
            let unit = if angstrom { LengthUnit::Angstrom } else { LengthUnit::Bohr };
            let back = parse_xyz(&emit_xyz(&mol, unit), unit).unwrap();
            prop_assert_eq!(back.id(), "conf-7");
            prop_assert_eq!(back.charge(), charge);
            for (a, b) in mol.atoms().iter().zip(back.atoms()) {
                prop_assert_eq!(a.atomic_number, b.atomic_number);
                prop_assert!((a.position - b.position).amax() < 1e-10);
            }
        }
    }
}
