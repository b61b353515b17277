//! Lebedev angular quadratures on the unit sphere, expanded from
//! octahedral orbit generators. Weights sum to 1.

use std::collections::BTreeMap;
use std::sync::OnceLock;

const TABLE: &str = include_str!("../../data/lebedev.txt");

pub struct Lebedev {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

fn tables() -> &'static BTreeMap<usize, Lebedev> {
    static T: OnceLock<BTreeMap<usize, Lebedev>> = OnceLock::new();
    T.get_or_init(|| {
        let mut out = BTreeMap::new();
        let mut current: Option<(usize, Lebedev)> = None;
        for line in TABLE.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f[0] == "order" {
                if let Some((n, rule)) = current.take() {
                    out.insert(n, rule);
                }
                let n = f[1].parse().expect("lebedev order");
                current = Some((n, Lebedev { points: Vec::new(), weights: Vec::new() }));
                continue;
            }
            let code: u8 = f[0].parse().expect("lebedev code");
            let a: f64 = f[1].parse().expect("lebedev a");
            let b: f64 = f[2].parse().expect("lebedev b");
            let v: f64 = f[3].parse().expect("lebedev weight");
            let rule = &mut current.as_mut().expect("lebedev header").1;
            for p in orbit(code, a, b) {
                rule.points.push(p);
                rule.weights.push(v);
            }
        }
        if let Some((n, rule)) = current {
            out.insert(n, rule);
        }
        for (n, rule) in &out {
            assert_eq!(*n, rule.points.len(), "lebedev order {n}");
        }
        out
    })
}

/// All sign changes of `base`, skipping duplicates from zero entries.
fn signs(base: [f64; 3], out: &mut Vec<[f64; 3]>) {
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                if (base[0] == 0.0 && sx < 0.0) || (base[1] == 0.0 && sy < 0.0) || (base[2] == 0.0 && sz < 0.0) {
                    continue;
                }
                out.push([sx * base[0], sy * base[1], sz * base[2]]);
            }
        }
    }
}

fn orbit(code: u8, a: f64, b: f64) -> Vec<[f64; 3]> {
    let mut out = Vec::new();
    match code {
        0 => {
            for base in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
                signs(base, &mut out);
            }
        }
        1 => {
            let a = 0.5f64.sqrt();
            for base in [[0.0, a, a], [a, 0.0, a], [a, a, 0.0]] {
                signs(base, &mut out);
            }
        }
        2 => {
            let a = (1.0f64 / 3.0).sqrt();
            signs([a, a, a], &mut out);
        }
        3 => {
            let b = (1.0 - 2.0 * a * a).sqrt();
            for base in [[a, a, b], [a, b, a], [b, a, a]] {
                signs(base, &mut out);
            }
        }
        4 => {
            let b = (1.0 - a * a).sqrt();
            for base in [[a, b, 0.0], [b, a, 0.0], [a, 0.0, b], [b, 0.0, a], [0.0, a, b], [0.0, b, a]] {
                signs(base, &mut out);
            }
        }
        5 => {
            let c = (1.0 - a * a - b * b).sqrt();
            for base in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
                signs(base, &mut out);
            }
        }
        _ => panic!("unknown lebedev orbit code {code}"),
    }
    out
}

/// Available rule sizes, ascending.
pub fn orders() -> Vec<usize> {
    tables().keys().copied().collect()
}

pub fn rule(n_points: usize) -> Option<&'static Lebedev> {
    tables().get(&n_points)
}
