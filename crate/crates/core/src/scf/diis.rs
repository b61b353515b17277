//! Pulay DIIS extrapolation of Fock matrices.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::real::Real;

/// Above this condition number the DIIS system is considered singular.
const MAX_CONDITION: f64 = 1e12;

pub struct Diis<T: Real> {
    capacity: usize,
    focks: VecDeque<DMatrix<T>>,
    errors: VecDeque<DMatrix<T>>,
}

/// Outcome of one extrapolation.
pub enum DiisStep<T: Real> {
    Extrapolated(DMatrix<T>),
    /// The linear system was singular; the caller should fall back to damping.
    Singular,
}

impl<T: Real> Diis<T> {
    pub fn new(capacity: usize) -> Self {
        Self {
            capacity: capacity.max(1),
            focks: VecDeque::new(),
            errors: VecDeque::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.focks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.focks.is_empty()
    }

    pub fn push(&mut self, f: DMatrix<T>, err: DMatrix<T>) {
        if self.focks.len() == self.capacity {
            self.focks.pop_front();
            self.errors.pop_front();
        }
        self.focks.push_back(f);
        self.errors.push_back(err);
    }

    /// Combination Σ c_i F_i minimizing |Σ c_i e_i| subject to Σ c_i = 1.
    pub fn extrapolate(&self) -> DiisStep<T> {
        let m = self.focks.len();
        if m == 1 {
            return DiisStep::Extrapolated(self.focks[0].clone());
        }
        let mut b = DMatrix::<f64>::zeros(m + 1, m + 1);
        for i in 0..m {
            for j in 0..=i {
                let v: f64 = self.errors[i].iter().zip(self.errors[j].iter()).map(|(a, b)| a.f64() * b.f64()).sum();
                b[(i, j)] = v;
                b[(j, i)] = v;
            }
            b[(i, m)] = -1.0;
            b[(m, i)] = -1.0;
        }
        // scale the error block so the condition number reflects geometry, not magnitude
        let scale = (0..m).map(|i| b[(i, i)]).fold(0.0, f64::max);
        if scale == 0.0 {
            return DiisStep::Extrapolated(self.focks[m - 1].clone());
        }
        b.view_mut((0, 0), (m, m)).scale_mut(1.0 / scale);
        let sv = b.clone().singular_values();
        let cond = sv.max() / sv.min();
        if !cond.is_finite() || cond > MAX_CONDITION {
            return DiisStep::Singular;
        }
        let mut rhs = DVector::<f64>::zeros(m + 1);
        rhs[m] = -1.0;
        let Some(c) = b.lu().solve(&rhs) else {
            return DiisStep::Singular;
        };
        let mut f = DMatrix::<f64>::zeros(self.focks[0].nrows(), self.focks[0].ncols());
        for (i, fi) in self.focks.iter().enumerate() {
            f.zip_apply(fi, |a, b| *a += c[i] * b.f64());
        }
        DiisStep::Extrapolated(f.map(T::of))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_entry_returned_unchanged() {
        let mut d = Diis::new(8);
        let f = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 3.0]);
        d.push(f.clone(), DMatrix::from_element(2, 2, 0.3));
        assert!(matches!(d.extrapolate(), DiisStep::Extrapolated(g) if g == f));
    }

    #[test]
    fn capacity_drops_oldest() {
        let mut d = Diis::new(2);
        for k in 0..4 {
            d.push(DMatrix::<f64>::from_element(1, 1, k as f64), DMatrix::from_element(1, 1, 1.0 / (k + 1) as f64));
        }
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn zero_error_latest_is_fixed_point() {
        let mut d = Diis::new(8);
        let f1 = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
        let f2 = DMatrix::from_row_slice(2, 2, &[1.1, 0.4, 0.4, 2.2]);
        d.push(f1, DMatrix::from_row_slice(2, 2, &[0.0, 0.1, -0.1, 0.0]));
        d.push(f2.clone(), DMatrix::zeros(2, 2));
        match d.extrapolate() {
            DiisStep::Extrapolated(f) => assert!((f - f2).abs().max() < 1e-10),
            DiisStep::Singular => panic!("unexpected fallback"),
        }
    }

    #[test]
    fn identical_errors_are_singular() {
        let mut d = Diis::new(8);
        let e = DMatrix::from_row_slice(2, 2, &[0.0, 0.1, -0.1, 0.0]);
        d.push(DMatrix::<f64>::identity(2, 2), e.clone());
        d.push(DMatrix::<f64>::identity(2, 2) * 2.0, e);
        assert!(matches!(d.extrapolate(), DiisStep::Singular));
    }
}
