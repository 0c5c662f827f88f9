//! Dense rational matrices with exact rank, kernel, and determinant.
//!
//! Elimination is fraction-free (Bareiss single-step): each row is first
//! scaled to integer entries, then the integer echelon form is computed with
//! the exact-division recurrence, which keeps intermediate entries at the
//! size of minors instead of letting gcd-free rational growth compound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rat::Rat;

/// A dense rows x cols matrix of rationals, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rat::one();
        }
        m
    }

    /// Build from row vectors; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(
            rows.iter().all(|row| row.len() == c),
            "ragged rows in matrix construction"
        );
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Rat {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rat::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.echelon().pivot_cols.len()
    }

    /// Exact determinant of a square matrix.
    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Rat::one();
        }
        let ech = self.echelon();
        if ech.pivot_cols.len() < n {
            return Rat::zero();
        }
        // Bareiss: after full elimination the last pivot equals the integer
        // determinant; undo the per-row scaling and the swap sign.
        let int_det = ech.rows[n - 1][n - 1].clone();
        let mut d = Rat::from_integer(int_det);
        if ech.swap_sign < 0 {
            d = -d;
        }
        for s in &ech.row_scales {
            d /= Rat::from_integer(s.clone());
        }
        d
    }

    /// Basis of the right kernel { v : self * v = 0 }.
    ///
    /// The basis has cols() - rank() vectors; each one satisfies the system
    /// exactly. One vector is produced per free column by back-substitution
    /// against the integer echelon form.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let ech = self.echelon();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &ech.pivot_cols {
                s[c] = true;
            }
            s
        };
        let free_cols: Vec<usize> = (0..self.cols).filter(|&c| !pivot_set[c]).collect();

        let mut basis = Vec::with_capacity(free_cols.len());
        for &fc in &free_cols {
            let mut v = vec![Rat::zero(); self.cols];
            v[fc] = Rat::one();
            // Solve pivot coordinates bottom-up; free coordinates other than
            // fc stay zero.
            for (ri, &pc) in ech.pivot_cols.iter().enumerate().rev() {
                let row = &ech.rows[ri];
                let mut sum = Rat::zero();
                for c in pc + 1..self.cols {
                    if !row[c].is_zero() && !v[c].is_zero() {
                        sum += Rat::from_integer(row[c].clone()) * &v[c];
                    }
                }
                v[pc] = -sum / Rat::from_integer(row[pc].clone());
            }
            debug_assert!(self.mul_vec(&v).iter().all(Zero::is_zero));
            basis.push(v);
        }
        basis
    }

    /// Dimension of the projection of the kernel onto the listed coordinates.
    ///
    /// Equals the rank of the kernel-basis matrix restricted to those columns.
    pub fn projected_kernel_dim(&self, coords: &[usize]) -> usize {
        for &c in coords {
            assert!(c < self.cols, "projection coordinate out of range");
        }
        let basis = self.kernel_basis();
        if basis.is_empty() || coords.is_empty() {
            return 0;
        }
        let restricted: Vec<Vec<Rat>> = basis
            .iter()
            .map(|v| coords.iter().map(|&c| v[c].clone()).collect())
            .collect();
        RatMatrix::from_rows(restricted).rank()
    }

    /// Fraction-free row echelon form over the integers.
    fn echelon(&self) -> Echelon {
        // Scale every row to integer entries (row scaling preserves rank and
        // kernel; scales are tracked for the determinant).
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(self.rows);
        let mut row_scales: Vec<BigInt> = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let lcm = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            rows.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect(),
            );
            row_scales.push(lcm);
        }

        let mut pivot_cols = Vec::new();
        let mut swap_sign = 1i8;
        let mut prev = BigInt::one();
        let mut r = 0usize;
        for col in 0..self.cols {
            if r >= self.rows {
                break;
            }
            // Smallest-magnitude pivot keeps the Bareiss entries small.
            let pivot = (r..self.rows)
                .filter(|&i| !rows[i][col].is_zero())
                .min_by_key(|&i| rows[i][col].magnitude().clone());
            let p = match pivot {
                Some(p) => p,
                None => continue,
            };
            if p != r {
                rows.swap(p, r);
                row_scales.swap(p, r);
                swap_sign = -swap_sign;
            }
            let pivot_row = rows[r].clone();
            for row in rows.iter_mut().skip(r + 1) {
                if row[col].is_zero() {
                    // The subtraction term vanishes; the scaling by the pivot
                    // and the exact division still apply.
                    for entry in row.iter_mut().skip(col + 1) {
                        if !entry.is_zero() {
                            *entry = &pivot_row[col] * &*entry / &prev;
                        }
                    }
                    continue;
                }
                for j in col + 1..self.cols {
                    let t = &pivot_row[col] * &row[j] - &row[col] * &pivot_row[j];
                    // Exact by the Sylvester identity.
                    row[j] = t / &prev;
                }
                row[col] = BigInt::zero();
            }
            prev = rows[r][col].clone();
            pivot_cols.push(col);
            r += 1;
        }

        Echelon {
            rows,
            pivot_cols,
            swap_sign,
            row_scales,
        }
    }
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
    swap_sign: i8,
    row_scales: Vec<BigInt>,
}

/// Convenience for building matrices from i64 literals in tests and unfolding.
pub fn mat_i64(rows: &[&[i64]]) -> RatMatrix {
    RatMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| crate::rat::rat(x)).collect())
            .collect(),
    )
}
