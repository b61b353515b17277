//! Basis-set tables, Gaussian-format parsing and expansion of shells onto a
//! molecule.

mod gbs;

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::Vector3;
use thiserror::Error;

use crate::molio::{element_symbol, Molecule};

pub use gbs::parse_gbs;

const STO_3G: &str = include_str!("../../data/basis/sto-3g.gbs");
const G631: &str = include_str!("../../data/basis/6-31g.gbs");

/// Highest supported angular momentum (d).
pub const MAX_L: u32 = 2;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("unknown basis '{0}' (built-ins: sto-3g, 6-31g; otherwise a path to a .gbs file)")]
    UnknownBasis(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: angular momentum '{label}' above d is not supported")]
    UnsupportedAngularMomentum { line: usize, label: String },
    #[error("basis '{basis}' has no functions for element {symbol} (Z={z})")]
    MissingElement { basis: String, z: u32, symbol: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// A contracted Cartesian shell as tabulated: raw exponents (Bohr⁻²) and
/// contraction coefficients over unnormalized primitives.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractedShell {
    pub element: u32,
    pub l: u32,
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
}

impl ContractedShell {
    /// Sorts primitives by descending exponent and validates the shell.
    pub fn new(element: u32, l: u32, mut prims: Vec<(f64, f64)>) -> Result<Self, String> {
        if l > MAX_L {
            return Err(format!("l={l} exceeds the supported maximum {MAX_L}"));
        }
        if prims.is_empty() {
            return Err("shell has no primitives".into());
        }
        if let Some(&(a, _)) = prims.iter().find(|(a, c)| !(*a > 0.0 && a.is_finite() && c.is_finite())) {
            return Err(format!("invalid primitive with exponent {a}"));
        }
        prims.sort_by(|x, y| y.0.total_cmp(&x.0));
        if prims.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err("repeated exponent in shell".into());
        }
        let (exponents, coefficients) = prims.into_iter().unzip();
        Ok(Self {
            element,
            l,
            exponents,
            coefficients,
        })
    }

    pub fn n_cart(&self) -> usize {
        n_cart(self.l)
    }

    pub fn n_prim(&self) -> usize {
        self.exponents.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasisSet {
    pub name: String,
    pub shells: BTreeMap<u32, Vec<ContractedShell>>,
}

impl BasisSet {
    pub fn for_element(&self, z: u32) -> Option<&[ContractedShell]> {
        self.shells.get(&z).map(Vec::as_slice)
    }
}

/// Resolves a built-in basis name (`sto-3g`, `6-31g`, case and dash
/// insensitive) or a path to a Gaussian-format basis file.
pub fn load_basis(name_or_path: &str) -> Result<BasisSet, BasisError> {
    let key: String = name_or_path
        .chars()
        .filter(|c| *c != '-' && *c != '_')
        .collect::<String>()
        .to_ascii_lowercase();
    match key.as_str() {
        "sto3g" => return parse_gbs("sto-3g", STO_3G),
        "631g" => return parse_gbs("6-31g", G631),
        _ => {}
    }
    let path = Path::new(name_or_path);
    if !path.is_file() {
        return Err(BasisError::UnknownBasis(name_or_path.to_string()));
    }
    let text = std::fs::read_to_string(path).map_err(|source| BasisError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| name_or_path.to_string());
    parse_gbs(&name, &text)
}

/// Number of Cartesian components of angular momentum `l`.
pub fn n_cart(l: u32) -> usize {
    ((l + 1) * (l + 2) / 2) as usize
}

/// Cartesian exponent triples in the fixed order x,y,z (p) and
/// xx,xy,xz,yy,yz,zz (d).
pub fn cart_components(l: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::with_capacity(n_cart(l));
    for lx in (0..=l).rev() {
        for ly in (0..=l - lx).rev() {
            out.push([lx, ly, l - lx - ly]);
        }
    }
    out
}

fn double_factorial(n: i64) -> f64 {
    let mut r = 1.0;
    let mut k = n;
    while k > 1 {
        r *= k as f64;
        k -= 2;
    }
    r
}

/// Factor turning the normalized `x^l` component into a normalized
/// `x^lx y^ly z^lz` component with the same radial part.
pub fn component_scale(c: [u32; 3]) -> f64 {
    let l = (c[0] + c[1] + c[2]) as i64;
    let denom: f64 = c.iter().map(|&k| double_factorial(2 * k as i64 - 1)).product();
    (double_factorial(2 * l - 1) / denom).sqrt()
}

/// A shell placed on an atom, with coefficients absorbing primitive and
/// contraction normalization of its `x^l` component.
#[derive(Debug, Clone, PartialEq)]
pub struct Shell {
    pub center: usize,
    pub origin: Vector3<f64>,
    pub l: u32,
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub ao_offset: usize,
}

impl Shell {
    pub fn n_cart(&self) -> usize {
        n_cart(self.l)
    }

    /// Per-component scale factors, in [`cart_components`] order.
    pub fn component_scales(&self) -> Vec<f64> {
        cart_components(self.l).into_iter().map(component_scale).collect()
    }
}

/// The atomic-orbital basis of one molecule.
#[derive(Debug, Clone, PartialEq)]
pub struct AOBasis {
    pub shells: Vec<Shell>,
    pub n_ao: usize,
    pub ao_offsets: Vec<usize>,
    pub basis_name: String,
}

impl AOBasis {
    /// Instantiates `basis` on every atom of `mol`, atoms in order and, within
    /// each atom, shells sorted by angular momentum (table order among equal l).
    pub fn expand(mol: &Molecule, basis: &BasisSet) -> Result<Self, BasisError> {
        let mut shells = Vec::new();
        let mut offsets = Vec::new();
        let mut n_ao = 0;
        for (center, atom) in mol.atoms().iter().enumerate() {
            let z = atom.atomic_number;
            let table = basis.for_element(z).ok_or_else(|| BasisError::MissingElement {
                basis: basis.name.clone(),
                z,
                symbol: element_symbol(z).unwrap_or("?").to_string(),
            })?;
            let mut table: Vec<&ContractedShell> = table.iter().collect();
            table.sort_by_key(|s| s.l);
            for cs in table {
                offsets.push(n_ao);
                shells.push(Shell {
                    center,
                    origin: atom.position,
                    l: cs.l,
                    exponents: cs.exponents.clone(),
                    coefficients: normalized_coefficients(cs),
                    ao_offset: n_ao,
                });
                n_ao += cs.n_cart();
            }
        }
        Ok(Self {
            shells,
            n_ao,
            ao_offsets: offsets,
            basis_name: basis.name.clone(),
        })
    }

    pub fn max_l(&self) -> u32 {
        self.shells.iter().map(|s| s.l).max().unwrap_or(0)
    }

    /// Shell index owning each AO.
    pub fn ao_to_shell(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.n_ao);
        for (k, s) in self.shells.iter().enumerate() {
            out.extend(std::iter::repeat_n(k, s.n_cart()));
        }
        out
    }
}

/// Coefficients over unnormalized primitives `x^l exp(-a r^2)` giving the
/// contracted `x^l` component unit self-overlap.
fn normalized_coefficients(cs: &ContractedShell) -> Vec<f64> {
    use std::f64::consts::PI;
    let l = cs.l as i32;
    let dfact = double_factorial(2 * l as i64 - 1);
    let prim_norm = |a: f64| (2.0 * a / PI).powf(0.75) * (4.0 * a).powf(l as f64 / 2.0) / dfact.sqrt();
    let c: Vec<f64> = cs
        .exponents
        .iter()
        .zip(&cs.coefficients)
        .map(|(&a, &c)| c * prim_norm(a))
        .collect();
    // <x^l e^{-a r^2} | x^l e^{-b r^2}> = (2l-1)!! / (2p)^l * (pi/p)^{3/2}
    let mut self_overlap = 0.0;
    for (i, &ai) in cs.exponents.iter().enumerate() {
        for (j, &aj) in cs.exponents.iter().enumerate() {
            let p = ai + aj;
            self_overlap += c[i] * c[j] * dfact / (2.0 * p).powi(l) * (PI / p).powf(1.5);
        }
    }
    let scale = 1.0 / self_overlap.sqrt();
    c.into_iter().map(|x| x * scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mol(atoms: &[(u32, [f64; 3])]) -> Molecule {
        Molecule::from_bohr(atoms, 0).unwrap()
    }

    #[test]
    fn builtin_tables() {
        let sto = load_basis("sto-3g").unwrap();
        let h = sto.for_element(1).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!((h[0].l, h[0].n_prim()), (0, 3));
        for z in 1..=18 {
            assert!(sto.for_element(z).is_some(), "sto-3g missing Z={z}");
        }

        let g = load_basis("6-31G").unwrap();
        let c = g.for_element(6).unwrap();
        assert_eq!(c.iter().filter(|s| s.l == 0).count(), 3);
        assert_eq!(c.iter().filter(|s| s.l == 1).count(), 2);
        assert!(matches!(load_basis("cc-pvdz"), Err(BasisError::UnknownBasis(_))));
    }

    #[test]
    fn ao_counts() {
        let sto = load_basis("sto-3g").unwrap();
        let h2 = mol(&[(1, [0.0; 3]), (1, [0.0, 0.0, 1.4])]);
        assert_eq!(AOBasis::expand(&h2, &sto).unwrap().n_ao, 2);
        let water = mol(&[(8, [0.0, 0.0, 0.22]), (1, [0.0, 1.43, -0.89]), (1, [0.0, -1.43, -0.89])]);
        let ao = AOBasis::expand(&water, &sto).unwrap();
        assert_eq!(ao.n_ao, 7);
        assert_eq!(ao.ao_offsets, vec![0, 1, 2, 5, 6]);
        assert_eq!(ao.ao_to_shell(), vec![0, 1, 2, 2, 2, 3, 4]);

        let g = load_basis("6-31g").unwrap();
        let ch4 = mol(&[
            (6, [0.0; 3]),
            (1, [1.2, 1.2, 1.2]),
            (1, [-1.2, -1.2, 1.2]),
            (1, [-1.2, 1.2, -1.2]),
            (1, [1.2, -1.2, -1.2]),
        ]);
        assert_eq!(AOBasis::expand(&ch4, &g).unwrap().n_ao, 17);
    }

    #[test]
    fn missing_element() {
        let basis = parse_gbs("tiny", "H 0\nS 1 1.00\n 1.0 1.0\n****\n").unwrap();
        let he = mol(&[(2, [0.0; 3])]);
        assert!(matches!(
            AOBasis::expand(&he, &basis),
            Err(BasisError::MissingElement { z: 2, .. })
        ));
    }

    #[test]
    fn cartesian_order_and_scales() {
        assert_eq!(cart_components(1), vec![[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(
            cart_components(2),
            vec![[2, 0, 0], [1, 1, 0], [1, 0, 1], [0, 2, 0], [0, 1, 1], [0, 0, 2]]
        );
        assert_eq!(component_scale([2, 0, 0]), 1.0);
        assert!((component_scale([1, 1, 0]) - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn shell_validation() {
        let s = ContractedShell::new(1, 0, vec![(0.5, 0.3), (3.0, 0.1), (1.0, 0.6)]).unwrap();
        assert_eq!(s.exponents, vec![3.0, 1.0, 0.5]);
        assert_eq!(s.coefficients, vec![0.1, 0.6, 0.3]);
        assert!(ContractedShell::new(1, 3, vec![(1.0, 1.0)]).is_err());
        assert!(ContractedShell::new(1, 0, vec![(-1.0, 1.0)]).is_err());
        assert!(ContractedShell::new(1, 0, vec![(1.0, 1.0), (1.0, 2.0)]).is_err());
    }
}
