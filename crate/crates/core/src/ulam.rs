//! Exact-preimage Ulam discretization of the transfer operator.
//!
//! The unit interval is cut into n uniform cells E_i and the operator is
//! the row-stochastic matrix P[i][j] = m(E_i ∩ f⁻¹E_j)/m(E_i). Both branch
//! preimages of a cell are closed-form intervals (the branch inverses are Φ
//! and u + a − Φ(u)), so every entry is an exact interval overlap — no orbit
//! sampling anywhere. Lebesgue invariance of f makes P doubly stochastic,
//! which the construction reproduces to round-off and the tests pin at
//! 1e−12.
//!
//! Densities evolve through the transpose action (Lψ)_j = Σ_i ψ_i P[i][j];
//! the entries are stored row-major in L's orientation so a density push is
//! a gather per output cell, parallel and bit-stable regardless of thread
//! count.

use crate::error::{Error, Result};
use crate::fit::{DecaySeries, SeriesMeta};
use crate::map1d::ExpandingMap;
use crate::scalar::Real;
use rayon::prelude::*;

/// Memory guard: refuse partitions above 2^22 cells.
pub const MAX_CELLS: usize = 1 << 22;

/// Cells below this count are pushed serially; rayon overhead dominates.
const PAR_THRESHOLD: usize = 4096;

/// Violation report for the antisymmetry/monotonicity preservation check.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct AntisymmetryReport<T> {
    pub steps: usize,
    /// max over steps and cells of |v_i + v_{n−1−i}|.
    pub max_antisymmetry_violation: T,
    /// max over steps of the largest positive successive difference.
    pub max_monotonicity_violation: T,
    /// Scale constant C such that both violations are ≤ C / n_cells.
    pub bound_constant: T,
}

/// Sparse row-stochastic Ulam matrix over a uniform partition.
#[derive(Debug, Clone)]
pub struct UlamMatrix<T> {
    n_cells: usize,
    symmetric_cut: bool,
    /// CSR of the density action: row j holds the sources of output cell j.
    row_ptr: Vec<usize>,
    src_idx: Vec<u32>,
    vals: Vec<T>,
}

impl<T: Real> UlamMatrix<T> {
    /// Build the matrix from exact branch preimages of every cell.
    pub fn build(map: &ExpandingMap<T>, n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::InvalidConfig("ulam needs at least 2 cells".into()));
        }
        if n_cells > MAX_CELLS {
            return Err(Error::TooManyCells {
                cells: n_cells,
                guard: MAX_CELLS,
            });
        }
        if let crate::cut::CutKind::Constant(c) = map.cut().kind() {
            if *c != T::half() {
                return Err(Error::UnsupportedCut(
                    "ulam requires a non-constant cut or the classical constant-1/2 case",
                ));
            }
        }
        let n = n_cells;
        let nf = T::of_usize(n);
        let cut = map.cut();
        let a = map.a();
        // grid of Φ and of the right inverse at the cell edges; the edge
        // values are shared between adjacent columns so preimage components
        // tile [0, a) and [a, 1) without gaps
        let edges: Vec<T> = (0..=n).map(|j| T::of_usize(j) / nf).collect();
        let phi_edges: Vec<T> = edges
            .iter()
            .map(|&u| cut.antiderivative_unchecked(u))
            .collect();
        let right_edges: Vec<T> = edges
            .iter()
            .zip(phi_edges.iter())
            .map(|(&u, &p)| u + a - p)
            .collect();

        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut src_idx: Vec<u32> = Vec::with_capacity(4 * n);
        let mut vals: Vec<T> = Vec::with_capacity(4 * n);
        row_ptr.push(0);
        let mut scatter = |lo: T, hi: T, src_idx: &mut Vec<u32>, vals: &mut Vec<T>| {
            if hi <= lo {
                return;
            }
            let mut i = (lo * nf).to_usize().unwrap_or(0).min(n - 1);
            loop {
                let cell_lo = T::of_usize(i) / nf;
                if cell_lo >= hi {
                    break;
                }
                let cell_hi = T::of_usize(i + 1) / nf;
                let overlap = hi.min(cell_hi) - lo.max(cell_lo);
                if overlap > T::zero() {
                    let idx = i as u32;
                    if src_idx.last() == Some(&idx) {
                        *vals.last_mut().unwrap() += overlap * nf;
                    } else {
                        src_idx.push(idx);
                        vals.push(overlap * nf);
                    }
                }
                i += 1;
                if i >= n {
                    break;
                }
            }
        };
        for j in 0..n {
            scatter(phi_edges[j], phi_edges[j + 1], &mut src_idx, &mut vals);
            scatter(right_edges[j], right_edges[j + 1], &mut src_idx, &mut vals);
            row_ptr.push(src_idx.len());
        }
        Ok(UlamMatrix {
            n_cells: n,
            symmetric_cut: cut.is_symmetric(),
            row_ptr,
            src_idx,
            vals,
        })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// Iterate the stored entries as (source cell i, target cell j, P[i][j]).
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n_cells).flat_map(move |j| {
            (self.row_ptr[j]..self.row_ptr[j + 1])
                .map(move |k| (self.src_idx[k] as usize, j, self.vals[k]))
        })
    }

    /// Row sums of P (each must be 1: the preimages of all cells tile E_i).
    pub fn row_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.n_cells];
        for (i, _, v) in self.entries() {
            sums[i] += v;
        }
        sums
    }

    /// Column sums of P (each must be 1: n·m(f⁻¹E_j) = n·m(E_j) by Lebesgue
    /// invariance).
    pub fn col_sums(&self) -> Vec<T> {
        (0..self.n_cells)
            .map(|j| {
                self.vals[self.row_ptr[j]..self.row_ptr[j + 1]]
                    .iter()
                    .copied()
                    .sum()
            })
            .collect()
    }

    /// Nonzero count of the widest column of P. The inverse branches
    /// contract, so each of the two preimage components of a cell spans at
    /// most two cells.
    pub fn max_col_nnz(&self) -> usize {
        (0..self.n_cells)
            .map(|j| self.row_ptr[j + 1] - self.row_ptr[j])
            .max()
            .unwrap_or(0)
    }

    /// Grid of cell centers, the sampling points for observables.
    pub fn centers(&self) -> Vec<T> {
        let nf = T::of_usize(self.n_cells);
        (0..self.n_cells)
            .map(|i| (T::of_usize(i) + T::half()) / nf)
            .collect()
    }

    /// Discretization floor 10/n_cells: below it the matrix mixes
    /// exponentially and the polynomial tail is gone.
    pub fn tv_floor(&self) -> T {
        T::of(10.0) / T::of_usize(self.n_cells)
    }

    /// One application of the density action Lψ.
    pub fn apply(&self, psi: &[T]) -> Vec<T> {
        assert_eq!(psi.len(), self.n_cells);
        let gather = |j: usize| -> T {
            let mut acc = T::zero();
            for k in self.row_ptr[j]..self.row_ptr[j + 1] {
                acc += self.vals[k] * psi[self.src_idx[k] as usize];
            }
            acc
        };
        if self.n_cells >= PAR_THRESHOLD {
            (0..self.n_cells).into_par_iter().map(gather).collect()
        } else {
            (0..self.n_cells).map(gather).collect()
        }
    }

    /// Lⁿψ on cell averages.
    pub fn push_density(&self, psi: &[T], steps: usize) -> Result<Vec<T>> {
        if psi.len() != self.n_cells {
            return Err(Error::InvalidConfig(format!(
                "density has {} cells, matrix has {}",
                psi.len(),
                self.n_cells
            )));
        }
        let mut v = psi.to_vec();
        for _ in 0..steps {
            v = self.apply(&v);
        }
        Ok(v)
    }

    /// Total-variation distance of f_*ⁿλ from Lebesgue for n = 0..=n_max,
    /// cell-discretized: dₙ = mean |（Lⁿλ)_i − 1|.
    pub fn measure_decay(&self, lambda_density: &[T], n_max: usize) -> Result<DecaySeries<T>> {
        if lambda_density.len() != self.n_cells {
            return Err(Error::InvalidConfig(format!(
                "density has {} cells, matrix has {}",
                lambda_density.len(),
                self.n_cells
            )));
        }
        if lambda_density.iter().any(|&d| d < T::zero()) {
            return Err(Error::InvalidConfig("lambda density must be nonnegative".into()));
        }
        let nf = T::of_usize(self.n_cells);
        let mean: T = lambda_density.iter().copied().sum::<T>() / nf;
        if (mean - T::one()).abs() > T::of(1e-8) {
            return Err(Error::InvalidConfig(format!(
                "lambda density must have mean 1, got {mean}"
            )));
        }
        let tv = |v: &[T]| -> T {
            v.iter().map(|&d| (d - T::one()).abs()).sum::<T>() / nf
        };
        let mut ns = Vec::with_capacity(n_max + 1);
        let mut values = Vec::with_capacity(n_max + 1);
        let mut v = lambda_density.to_vec();
        ns.push(0);
        values.push(tv(&v));
        for n in 1..=n_max {
            v = self.apply(&v);
            ns.push(n as u64);
            values.push(tv(&v));
        }
        DecaySeries::new(
            ns,
            values,
            SeriesMeta {
                observables: "|L^n lambda - 1|_L1".into(),
                method: "ulam".into(),
                samples: self.n_cells as u64,
            },
        )
    }

    /// Push the decreasing antisymmetric density ψ(x) = 1/2 − x through
    /// `steps` applications of L and record the worst antisymmetry and
    /// monotonicity violations. For a symmetric cut both are preserved by
    /// the exact operator, so what is measured here is purely the
    /// discretization/round-off floor of the matrix.
    pub fn antisymmetry_check(&self, steps: usize) -> Result<AntisymmetryReport<T>> {
        if !self.symmetric_cut {
            return Err(Error::UnsupportedCut(
                "antisymmetry check requires a symmetric cut",
            ));
        }
        if self.n_cells % 2 != 0 {
            return Err(Error::InvalidConfig(
                "antisymmetry check needs an even cell count".into(),
            ));
        }
        let n = self.n_cells;
        let mut v: Vec<T> = self.centers().iter().map(|&c| T::half() - c).collect();
        let mut max_anti = T::zero();
        let mut max_mono = T::zero();
        let mut violations = |v: &[T], max_anti: &mut T, max_mono: &mut T| {
            for i in 0..n / 2 {
                let pair = (v[i] + v[n - 1 - i]).abs();
                if pair > *max_anti {
                    *max_anti = pair;
                }
            }
            for i in 0..n - 1 {
                let diff = v[i + 1] - v[i];
                if diff > *max_mono {
                    *max_mono = diff;
                }
            }
        };
        violations(&v, &mut max_anti, &mut max_mono);
        for _ in 0..steps {
            v = self.apply(&v);
            violations(&v, &mut max_anti, &mut max_mono);
        }
        let bound_constant = max_anti.max(max_mono) * T::of_usize(n);
        Ok(AntisymmetryReport {
            steps,
            max_antisymmetry_violation: max_anti,
            max_monotonicity_violation: max_mono,
            bound_constant,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cut::CutFunction;

    fn linear_matrix(cells: usize) -> UlamMatrix<f64> {
        UlamMatrix::build(&ExpandingMap::new(CutFunction::linear()), cells).unwrap()
    }

    fn doubling_matrix(cells: usize) -> UlamMatrix<f64> {
        UlamMatrix::build(
            &ExpandingMap::new(CutFunction::constant(0.5).unwrap()),
            cells,
        )
        .unwrap()
    }

    #[test]
    fn doubling_map_matrix_is_exact() {
        let u = doubling_matrix(4);
        // f(x) = 2x mod 1: P[i][j] = 1/2 exactly for j ∈ {2i mod 4, (2i+1) mod 4}
        let mut dense = [[0.0f64; 4]; 4];
        for (i, j, v) in u.entries() {
            dense[i][j] += v;
        }
        for i in 0..4 {
            for j in 0..4 {
                let expected = if j == (2 * i) % 4 || j == (2 * i + 1) % 4 {
                    0.5
                } else {
                    0.0
                };
                assert_eq!(dense[i][j], expected, "P[{i}][{j}]");
            }
        }
    }

    #[test]
    fn doubly_stochastic() {
        for cells in [1 << 10, 1 << 12] {
            for u in [
                linear_matrix(cells),
                UlamMatrix::build(
                    &ExpandingMap::new(CutFunction::symmetric_power(2.0).unwrap()),
                    cells,
                )
                .unwrap(),
            ] {
                for s in u.row_sums() {
                    assert!((s - 1.0).abs() <= 1e-12);
                }
                for s in u.col_sums() {
                    assert!((s - 1.0).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn columns_are_sparse() {
        // both branch inverses contract, so each preimage component of a
        // cell spans at most two cells: ≤ 4 entries per column, and ~3n
        // entries overall
        let u = linear_matrix(1 << 12);
        assert!(u.max_col_nnz() <= 4);
        assert!(u.nnz() <= 4 * u.n_cells());
    }

    #[test]
    fn guards() {
        assert!(matches!(
            UlamMatrix::<f64>::build(&ExpandingMap::new(CutFunction::linear()), MAX_CELLS * 2),
            Err(Error::TooManyCells { .. })
        ));
        assert!(UlamMatrix::<f64>::build(&ExpandingMap::new(CutFunction::linear()), 1).is_err());
        assert!(matches!(
            UlamMatrix::<f64>::build(
                &ExpandingMap::new(CutFunction::constant(0.3).unwrap()),
                16
            ),
            Err(Error::UnsupportedCut(_))
        ));
    }

    #[test]
    fn uniform_density_is_invariant() {
        let u = linear_matrix(1 << 10);
        let ones = vec![1.0f64; u.n_cells()];
        let pushed = u.push_density(&ones, 25).unwrap();
        for v in pushed {
            assert!((v - 1.0).abs() < 1e-12);
        }
        // steps = 0 is the identity
        let psi: Vec<f64> = u.centers();
        assert_eq!(u.push_density(&psi, 0).unwrap(), psi);
    }

    #[test]
    fn mean_and_positivity_preserved() {
        let u = linear_matrix(1 << 10);
        let psi: Vec<f64> = u.centers().iter().map(|c| 2.0 * c).collect();
        let n = u.n_cells() as f64;
        let mean0: f64 = psi.iter().sum::<f64>() / n;
        let mut v = psi;
        for step in 1..=50 {
            v = u.apply(&v);
            let mean: f64 = v.iter().sum::<f64>() / n;
            assert!((mean - mean0).abs() <= 1e-10 * step as f64);
            assert!(v.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn doubling_map_smears_in_log2_steps() {
        let u = doubling_matrix(1 << 10);
        let psi: Vec<f64> = u.centers().iter().map(|&c| 0.5 - c).collect();
        let v = u.push_density(&psi, 11).unwrap();
        let max = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
        assert!(max <= 1e-12, "doubling left residual {max}");
    }

    #[test]
    fn measure_decay_basics() {
        let u = linear_matrix(1 << 10);
        // λ = m is a fixed point: distances are identically zero
        let s = u.measure_decay(&vec![1.0; u.n_cells()], 20).unwrap();
        assert!(s.values().iter().all(|&d| d < 1e-13));
        // density must be nonnegative with mean one
        assert!(u.measure_decay(&vec![2.0; u.n_cells()], 5).is_err());
        let mut bad = vec![1.0; u.n_cells()];
        bad[0] = -0.5;
        assert!(u.measure_decay(&bad, 5).is_err());
    }

    #[test]
    fn refinement_consistency() {
        // tv distances computed at 2^12 and 2^13 cells agree within 5%
        // over the valid fit window
        let coarse = linear_matrix(1 << 12);
        let fine = linear_matrix(1 << 13);
        let density = |u: &UlamMatrix<f64>| -> Vec<f64> {
            u.centers().iter().map(|&c| 2.0 * c).collect()
        };
        let n_max = 120;
        let sc = coarse.measure_decay(&density(&coarse), n_max).unwrap();
        let sf = fine.measure_decay(&density(&fine), n_max).unwrap();
        let (lo, hi) = sc.floor_window(coarse.tv_floor());
        for n in lo..=hi.min(n_max as u64) {
            let dc = sc.values()[n as usize];
            let df = sf.values()[n as usize];
            assert!(
                (dc - df).abs() <= 0.05 * dc.max(df),
                "n={n}: {dc} vs {df}"
            );
        }
    }

    #[test]
    fn antisymmetry_initial_vector_is_exact() {
        let u = linear_matrix(1 << 10);
        let r = u.antisymmetry_check(0).unwrap();
        assert_eq!(r.max_antisymmetry_violation, 0.0);
        assert_eq!(r.max_monotonicity_violation, 0.0);
    }

    #[test]
    fn antisymmetry_rejects_asymmetric_cuts() {
        let u = UlamMatrix::build(
            &ExpandingMap::new(CutFunction::asymmetric_power(1.0, 2.0).unwrap()),
            1 << 10,
        )
        .unwrap();
        assert!(matches!(
            u.antisymmetry_check(10),
            Err(Error::UnsupportedCut(_))
        ));
    }
}
