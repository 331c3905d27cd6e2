//! Dense matrices over the rationals with exact elimination.
//!
//! Elimination clears denominators row by row and then runs fraction-free
//! (Bareiss) elimination on integers, so intermediate entries stay bounded by
//! minors of the scaled matrix.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Integer row echelon form plus the bookkeeping needed to undo the scaling.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

fn echelon(matrix: &ExactMatrix) -> (Echelon, Rational) {
    let mut scale = Rational::one();
    let mut rows: Vec<Vec<BigInt>> = (0..matrix.rows)
        .map(|i| {
            let row = matrix.row(i);
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            scale *= Rational::from_integer(lcm.clone());
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..matrix.cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            rows.swap(p, r);
            swaps += 1;
        }
        let (upper, lower) = rows.split_at_mut(r + 1);
        let pivot_row = &upper[r];
        for row in lower.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..matrix.cols {
                let value = &pivot_row[c] * &row[j] - &factor * &pivot_row[j];
                row[j] = value / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = rows[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (Echelon { rows, pivots, swaps }, scale)
}

impl Echelon {
    /// Solves the echelon system for the pivot unknowns given values of the
    /// free ones; `rhs` is the (scaled) right-hand side per echelon row.
    fn back_substitute(&self, cols: usize, free: &[(usize, Rational)], rhs: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); cols];
        for (j, v) in free {
            x[*j] = v.clone();
        }
        for (i, &c) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let mut acc = rhs[i].clone();
            for j in c + 1..cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[c] = acc / Rational::from_integer(row[c].clone());
        }
        x
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut out = ExactMatrix::zeros(size, size);
        for i in 0..size {
            out.set(i, i, Rational::one());
        }
        out
    }

    /// Builds a matrix from rows, which must all have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let count = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::ShapeMismatch(format!("row of length {} in a {cols}-column matrix", row.len())));
            }
            data.extend(row);
        }
        Ok(ExactMatrix { rows: count, cols, data })
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<Rational>>) -> Result<Self> {
        Ok(ExactMatrix::from_rows(rows, columns)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = ExactMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let entry = &mut out.data[i * other.cols + j];
                        *entry += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.cols {
            return Err(Error::ShapeMismatch(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &ExactMatrix) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!("stacking {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(ExactMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Matrix restricted to the given columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut out = ExactMatrix::zeros(self.rows, columns.len());
        for i in 0..self.rows {
            for (jj, &j) in columns.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn rank(&self) -> usize {
        echelon(self).0.pivots.len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        let (ech, scale) = echelon(self);
        if ech.pivots.len() < self.rows {
            return Ok(Rational::zero());
        }
        let mut det = Rational::from_integer(ech.rows[self.rows - 1][self.cols - 1].clone()) / scale;
        if ech.swaps % 2 == 1 {
            det = -det;
        }
        Ok(det)
    }

    /// Basis of `{x : self x = 0}`, one vector per free column with that
    /// column set to one.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (ech, _) = echelon(self);
        let rhs = vec![Rational::zero(); ech.pivots.len()];
        (0..self.cols)
            .filter(|j| !ech.pivots.contains(j))
            .map(|j| ech.back_substitute(self.cols, &[(j, Rational::one())], &rhs))
            .collect()
    }

    /// Some solution of `self x = b` (free unknowns set to zero), or `None`
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::ShapeMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let mut augmented = ExactMatrix::zeros(self.rows, self.cols + 1);
        for (i, value) in b.iter().enumerate() {
            for j in 0..self.cols {
                augmented.set(i, j, self.get(i, j).clone());
            }
            augmented.set(i, self.cols, value.clone());
        }
        let (ech, _) = echelon(&augmented);
        if ech.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let rhs: Vec<Rational> = (0..ech.pivots.len())
            .map(|i| Rational::from_integer(ech.rows[i][self.cols].clone()))
            .collect();
        Ok(Some(ech.back_substitute(self.cols, &[], &rhs)))
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// True when the entries of `x` are not all zero.
pub fn is_nonzero_vector(x: &[Rational]) -> bool {
    x.iter().any(|v| !v.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn m(rows: &[&[i64]]) -> ExactMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        ExactMatrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()).unwrap()
    }

    /// Cofactor expansion, for cross-checking small determinants.
    fn laplace(a: &ExactMatrix) -> Rational {
        let size = a.rows();
        if size == 0 {
            return int(1);
        }
        let mut total = int(0);
        for j in 0..size {
            let rest: Vec<usize> = (0..size).filter(|&c| c != j).collect();
            let minor = ExactMatrix::from_rows(
                size - 1,
                (1..size)
                    .map(|i| rest.iter().map(|&c| a.get(i, c).clone()).collect())
                    .collect(),
            )
            .unwrap();
            let term = a.get(0, j) * laplace(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(m(&[&[2, 1], &[1, 3]]).determinant().unwrap(), int(5));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant().unwrap(), int(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant().unwrap(), int(0));
        assert_eq!(ExactMatrix::zeros(0, 0).determinant().unwrap(), int(1));
        assert_eq!(
            m(&[&[1, 2, 3]]).determinant(),
            Err(Error::DimensionMismatch { rows: 1, cols: 3 })
        );
        let mut h = ExactMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                h.set(i, j, frac(1, (i + j + 1) as i64));
            }
        }
        assert_eq!(h.determinant().unwrap(), frac(1, 2160));
    }

    #[test]
    fn rank_and_nullspace() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let null = a.nullspace();
        assert_eq!(null.len(), 1);
        assert!(!is_nonzero_vector(&a.mul_vec(&null[0]).unwrap()));
        assert_eq!(ExactMatrix::identity(4).rank(), 4);
        assert!(ExactMatrix::identity(4).nullspace().is_empty());
        assert_eq!(ExactMatrix::zeros(2, 3).nullspace().len(), 3);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let x = a.solve(&[int(3), int(1), int(4)]).unwrap().unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert_eq!(a.solve(&[int(3), int(1), int(5)]).unwrap(), None);
        let under = m(&[&[1, 1]]);
        let x = under.solve(&[frac(1, 2)]).unwrap().unwrap();
        assert_eq!(under.mul_vec(&x).unwrap(), vec![frac(1, 2)]);
    }

    proptest::proptest! {
        #[test]
        fn determinant_matches_cofactor_expansion(entries in proptest::collection::vec(-4i64..5, 16), dens in proptest::collection::vec(1i64..4, 16)) {
            let mut a = ExactMatrix::zeros(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    a.set(i, j, frac(entries[4 * i + j], dens[4 * i + j]));
                }
            }
            proptest::prop_assert_eq!(a.determinant().unwrap(), laplace(&a));
            let null = a.nullspace();
            proptest::prop_assert_eq!(null.len() + a.rank(), 4);
            for v in &null {
                proptest::prop_assert!(!is_nonzero_vector(&a.mul_vec(v).unwrap()));
            }
        }
    }
}
