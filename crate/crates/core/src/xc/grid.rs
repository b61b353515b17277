//! Molecular integration grids: Treutler-Ahlrichs (M4) radial shells times
//! pruned Lebedev spheres on every atom, combined with Becke's fuzzy-cell
//! partitioning.

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::molio::Molecule;

use super::lebedev;
use super::XcError;

pub const DEFAULT_GRID_LEVEL: u32 = 1;
pub const MAX_GRID_LEVEL: u32 = 3;

/// Largest Lebedev rule per level.
const ANGULAR: [usize; 4] = [50, 86, 194, 302];
/// Radial shells per level for H-He, Li-Ne, Na-Ar.
const RADIAL: [[usize; 3]; 4] = [[18, 24, 28], [20, 34, 38], [30, 45, 50], [45, 60, 65]];
/// Points whose partitioned weight falls below this are dropped.
const WEIGHT_CUTOFF: f64 = 1e-15;

/// Treutler-Ahlrichs radial scaling ξ, indexed by atomic number.
const TA_XI: [f64; 19] = [
    1.0, 0.8, 0.9, 1.8, 1.4, 1.3, 1.1, 0.9, 0.9, 0.9, 0.9, 1.4, 1.3, 1.3, 1.2, 1.1, 1.0, 1.0, 1.0,
];

/// Bragg-Slater radii in Å, indexed by atomic number.
const BRAGG_ANGSTROM: [f64; 19] = [
    0.0, 0.35, 1.40, 1.45, 1.05, 0.85, 0.70, 0.65, 0.60, 0.50, 1.50, 1.80, 1.50, 1.25, 1.10, 1.00, 1.00, 1.00, 1.80,
];

#[derive(Debug, Clone)]
pub struct Grid {
    /// Cartesian coordinates in Bohr.
    pub points: Vec<[f64; 3]>,
    /// Quadrature weights including the partition function.
    pub weights: Vec<f64>,
    pub level: u32,
}

impl Grid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The same grid rotated about the origin.
    pub fn rotated(&self, r: &Matrix3<f64>) -> Grid {
        Grid {
            points: self
                .points
                .iter()
                .map(|p| {
                    let v = r * Vector3::from(*p);
                    [v.x, v.y, v.z]
                })
                .collect(),
            weights: self.weights.clone(),
            level: self.level,
        }
    }

    pub fn integrate(&self, f: impl Fn([f64; 3]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&p, &w)| w * f(p)).sum()
    }
}

/// Treutler-Ahlrichs M4 radii and weights (including 4πr²), innermost first.
pub fn radial_grid(n: usize, z: u32) -> (Vec<f64>, Vec<f64>) {
    let xi = TA_XI[z as usize];
    let step = std::f64::consts::PI / (n + 1) as f64;
    let ln2 = xi / std::f64::consts::LN_2;
    let mut r = Vec::with_capacity(n);
    let mut w = Vec::with_capacity(n);
    for i in (1..=n).rev() {
        let x = (i as f64 * step).cos();
        let ri = -ln2 * (1.0 + x).powf(0.6) * ((1.0 - x) / 2.0).ln();
        let dr = step
            * (i as f64 * step).sin()
            * ln2
            * (1.0 + x).powf(0.6)
            * (-0.6 / (1.0 + x) * ((1.0 - x) / 2.0).ln() + 1.0 / (1.0 - x));
        r.push(ri);
        w.push(4.0 * std::f64::consts::PI * ri * ri * dr);
    }
    (r, w)
}

fn row(z: u32) -> usize {
    match z {
        0..=2 => 0,
        3..=10 => 1,
        _ => 2,
    }
}

/// Lebedev rule size for each radial shell: small rules close to the
/// nucleus and far out, the full rule in the valence region.
fn pruned_orders(radii: &[f64], z: u32, max_order: usize) -> Vec<usize> {
    // next smaller rule with all-positive weights (the 74-point rule has negative ones)
    let lower = lebedev::orders()
        .into_iter()
        .filter(|&o| o < max_order && lebedev::rule(o).is_some_and(|r| r.weights.iter().all(|&w| w > 0.0)))
        .max()
        .unwrap_or(max_order);
    let regions: [usize; 5] = if max_order <= 50 {
        [6, 14, 14, 14, 6]
    } else {
        [6, 26, lower, max_order, lower]
    };
    let alphas: [f64; 4] = match row(z) {
        0 => [0.25, 0.5, 1.0, 4.5],
        1 => [0.1667, 0.5, 0.9, 3.5],
        _ => [0.1, 0.4, 0.8, 2.5],
    };
    let rb = BRAGG_ANGSTROM[z as usize] * crate::units::BOHR_PER_ANGSTROM;
    radii
        .iter()
        .map(|&r| regions[alphas.iter().filter(|&&a| r / rb > a).count()])
        .collect()
}

/// Becke's smoothed cell function with three iterations.
#[inline]
fn becke_s(mu: f64) -> f64 {
    let mut f = mu;
    for _ in 0..3 {
        f = 1.5 * f - 0.5 * f * f * f;
    }
    0.5 * (1.0 - f)
}

/// Partition weight of atom `owner` at `p`.
fn becke_weight(p: [f64; 3], owner: usize, centers: &[Vector3<f64>], inv_dist: &[f64]) -> f64 {
    let na = centers.len();
    if na == 1 {
        return 1.0;
    }
    let pv = Vector3::from(p);
    let d: Vec<f64> = centers.iter().map(|c| (pv - c).norm()).collect();
    let mut total = 0.0;
    let mut own = 0.0;
    for a in 0..na {
        let mut cell = 1.0;
        for b in 0..na {
            if a != b {
                cell *= becke_s((d[a] - d[b]) * inv_dist[a * na + b]);
                if cell == 0.0 {
                    break;
                }
            }
        }
        if a == owner {
            own = cell;
        }
        total += cell;
    }
    if total > 0.0 {
        own / total
    } else {
        0.0
    }
}

/// Builds the molecular grid at `level` (0 to [`MAX_GRID_LEVEL`]).
pub fn build_grid(mol: &Molecule, level: u32) -> Result<Grid, XcError> {
    if level > MAX_GRID_LEVEL {
        return Err(XcError::UnsupportedLevel { level, max: MAX_GRID_LEVEL });
    }
    let centers: Vec<Vector3<f64>> = mol.atoms().iter().map(|a| a.position).collect();
    let na = centers.len();
    let mut inv_dist = vec![0.0; na * na];
    for a in 0..na {
        for b in 0..na {
            if a != b {
                inv_dist[a * na + b] = 1.0 / (centers[a] - centers[b]).norm();
            }
        }
    }

    let per_atom: Vec<Vec<([f64; 3], f64)>> = mol
        .atoms()
        .par_iter()
        .enumerate()
        .map(|(ia, atom)| {
            let z = atom.atomic_number;
            let (radii, rw) = radial_grid(RADIAL[level as usize][row(z)], z);
            let orders = pruned_orders(&radii, z, ANGULAR[level as usize]);
            let mut pts = Vec::new();
            for ((&r, &w), &order) in radii.iter().zip(&rw).zip(&orders) {
                let rule = lebedev::rule(order).expect("lebedev rule");
                for (u, &wa) in rule.points.iter().zip(&rule.weights) {
                    let p = [
                        atom.position.x + r * u[0],
                        atom.position.y + r * u[1],
                        atom.position.z + r * u[2],
                    ];
                    let weight = w * wa * becke_weight(p, ia, &centers, &inv_dist);
                    if weight >= WEIGHT_CUTOFF {
                        pts.push((p, weight));
                    }
                }
            }
            pts
        })
        .collect();

    let (points, weights) = per_atom.into_iter().flatten().unzip();
    Ok(Grid { points, weights, level })
}
