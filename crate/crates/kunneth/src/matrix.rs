//! Dense matrices over the exact rationals.
//!
//! This is the arithmetic core of the crate: multiplication, reduced row
//! echelon form, canonical kernel and image bases, exact linear solving and
//! Kronecker products. Subspaces are always compared through canonical
//! rref bases, so equality of images or kernels never depends on a basis
//! choice.
//!
//! Forward elimination is fraction-free (Bareiss): rows are cleared to
//! integers once, pivoting divides by the previous pivot, and entries only
//! become rationals again in the final normalization step. This keeps
//! intermediate numerators at minor-of-the-input size instead of blowing up
//! through repeated gcd-free products.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::Mul;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("{rows}x{cols} matrix needs {} entries, got {found}", rows * cols)]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("shape mismatch in {op}: left is {lr}x{lc}, right is {rr}x{rc}")]
    ShapeMismatch {
        op: &'static str,
        lr: usize,
        lc: usize,
        rr: usize,
        rc: usize,
    },
}

/// Dense row-major matrix of rationals. Equality is entrywise and exact.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| crate::rational::format_rational(self.at(r, c)))
                .collect();
            writeln!(f, "  {}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::EmptyShape { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(MatrixError::EntryCount {
                rows,
                cols,
                found: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self::new(rows, cols, entries).expect("from_fn shape")
    }

    /// Builds from nested rows of `i64` values; test and fixture convenience.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| crate::rational::rat_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape("add", other)?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c) + other.at(r, c)
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.same_shape("sub", other)?;
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self.at(r, c) - other.at(r, c)
        }))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| -self.at(r, c))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| self.at(r, c) * s)
    }

    fn same_shape(&self, op: &'static str, other: &Self) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch {
                op,
                lr: self.rows,
                lc: self.cols,
                rr: other.rows,
                rc: other.cols,
            });
        }
        Ok(())
    }

    /// Exact matrix product. The inner loop runs on denominator-cleared
    /// integers and reduces once per output entry.
    pub fn matmul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "matmul",
                lr: self.rows,
                lc: self.cols,
                rr: other.rows,
                rc: other.cols,
            });
        }
        let (a_int, a_den) = self.cleared_rows();
        let (bt_int, b_den) = other.transpose().cleared_rows();
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            let ar = &a_int[i];
            for j in 0..other.cols {
                let bc = &bt_int[j];
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    if !ar[k].is_zero() && !bc[k].is_zero() {
                        acc += &ar[k] * &bc[k];
                    }
                }
                entries.push(Rational::new(acc, &a_den[i] * &b_den[j]));
            }
        }
        Self::new(self.rows, other.cols, entries)
    }

    /// Per-row denominator-cleared integer copies plus the row denominators.
    fn cleared_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        let mut int_rows = Vec::with_capacity(self.rows);
        let mut dens = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut lcm = BigInt::one();
            for c in 0..self.cols {
                lcm = lcm.lcm(self.at(r, c).denom());
            }
            let row: Vec<BigInt> = (0..self.cols)
                .map(|c| {
                    let e = self.at(r, c);
                    e.numer() * (&lcm / e.denom())
                })
                .collect();
            int_rows.push(row);
            dens.push(lcm);
        }
        (int_rows, dens)
    }

    /// Kronecker product: block matrix with `(i,j)` block `self[i,j] * other`.
    pub fn kronecker(&self, other: &Self) -> Self {
        Self::from_fn(
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| {
                let (ri, rj) = (r / other.rows, r % other.rows);
                let (ci, cj) = (c / other.cols, c % other.cols);
                self.at(ri, ci) * other.at(rj, cj)
            },
        )
    }

    /// Reduced row echelon form with the pivot column list.
    pub fn rref(&self) -> Rref {
        // Clear each row to integers; row scaling does not change the rref.
        let (mut m, _) = self.cleared_rows();
        let rows = self.rows;
        let cols = self.cols;
        let mut pivots: Vec<usize> = Vec::new();
        let mut prev = BigInt::one();
        let mut row = 0usize;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(piv_row) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, piv_row);
            let piv = m[row][col].clone();
            for r in row + 1..rows {
                if m[r].iter().all(Zero::is_zero) {
                    continue;
                }
                let factor = std::mem::replace(&mut m[r][col], BigInt::zero());
                for c in col + 1..cols {
                    let num = &piv * &m[r][c] - &factor * &m[row][c];
                    let (q, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                    m[r][c] = if rem.is_zero() { q } else { num / &prev };
                }
                for c in 0..col {
                    m[r][c] = BigInt::zero();
                }
            }
            prev = piv;
            pivots.push(col);
            row += 1;
        }
        // Final normalization: monic pivots, then eliminate above each pivot.
        let mut rat = RatMatrix::zeros(rows.max(1), cols);
        for r in 0..rows {
            for c in 0..cols {
                if !m[r][c].is_zero() {
                    rat.set(r, c, Rational::from_integer(m[r][c].clone()));
                }
            }
        }
        for (r, &pc) in pivots.iter().enumerate() {
            let inv = rat.at(r, pc).recip();
            for c in pc..cols {
                let v = rat.at(r, c) * &inv;
                rat.set(r, c, v);
            }
        }
        for (r, &pc) in pivots.iter().enumerate().rev() {
            for above in 0..r {
                let factor = rat.at(above, pc).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in pc..cols {
                    let v = rat.at(above, c) - &factor * rat.at(r, c);
                    rat.set(above, c, v);
                }
            }
        }
        Rref {
            mat: rat,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Canonical basis of the null space: one vector per free column, free
    /// columns in increasing order, read off the rref.
    pub fn kernel_basis(&self) -> Vec<RatMatrix> {
        let rref = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &pc) in rref.pivots.iter().enumerate() {
                v[pc] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = RatMatrix::zeros(self.cols, 1);
            v.set(free, 0, Rational::one());
            for (r, &pc) in rref.pivots.iter().enumerate() {
                v.set(pc, 0, -rref.mat.at(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Canonical basis of the column space: the nonzero rows of the rref of
    /// the transpose, returned as column vectors. Two matrices have the same
    /// image exactly when these lists coincide.
    pub fn image_basis(&self) -> Vec<RatMatrix> {
        let rref = self.transpose().rref();
        (0..rref.pivots.len())
            .map(|r| {
                RatMatrix::from_fn(self.rows, 1, |i, _| rref.mat.at(r, i).clone())
            })
            .collect()
    }

    /// Solves `self * X = rhs` exactly. Returns the canonical solution with
    /// every free variable set to zero, or `None` when no solution exists.
    pub fn solve_all(&self, rhs: &Self) -> Result<Option<RatMatrix>, MatrixError> {
        if self.rows != rhs.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "solve_all",
                lr: self.rows,
                lc: self.cols,
                rr: rhs.rows,
                rc: rhs.cols,
            });
        }
        let aug = RatMatrix::from_fn(self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                rhs.at(r, c - self.cols).clone()
            }
        });
        let rref = aug.rref();
        if rref.pivots.iter().any(|&pc| pc >= self.cols) {
            return Ok(None);
        }
        let mut x = RatMatrix::zeros(self.cols, rhs.cols);
        for (r, &pc) in rref.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, rref.mat.at(r, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Exact two-sided inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if !self.is_square() {
            return None;
        }
        let inv = self
            .solve_all(&RatMatrix::identity(self.rows))
            .expect("square shapes")?;
        // A right inverse of a square matrix is two-sided; keep the cheap
        // rank guard rather than trusting the solver blindly.
        if inv.matmul(self).expect("square shapes").is_identity() {
            Some(inv)
        } else {
            None
        }
    }

    /// Submatrix with the given row and column index sets (in the given order).
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> RatMatrix {
        RatMatrix::from_fn(row_idx.len().max(1), col_idx.len().max(1), |r, c| {
            if r < row_idx.len() && c < col_idx.len() {
                self.at(row_idx[r], col_idx[c]).clone()
            } else {
                Rational::zero()
            }
        })
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.matmul(rhs).expect("matrix shapes must compose")
    }
}

/// Result of `RatMatrix::rref`.
pub struct Rref {
    pub mat: RatMatrix,
    pub pivots: Vec<usize>,
}

/// A linear subspace of `Q^ambient`, held as canonical rref basis rows.
/// Two subspaces are equal exactly when their canonical rows coincide.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    basis_rows: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis_rows: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis_rows: (0..ambient)
                .map(|i| {
                    let mut row = vec![Rational::zero(); ambient];
                    row[i] = Rational::one();
                    row
                })
                .collect(),
        }
    }

    /// Subspace spanned by the columns of `m`.
    pub fn from_columns(m: &RatMatrix) -> Self {
        let rref = m.transpose().rref();
        let basis_rows = (0..rref.pivots.len())
            .map(|r| (0..m.rows()).map(|c| rref.mat.at(r, c).clone()).collect())
            .collect();
        Self {
            ambient: m.rows(),
            basis_rows,
        }
    }

    /// Subspace spanned by a list of column vectors (all `ambient` x 1).
    pub fn from_column_list(ambient: usize, cols: &[RatMatrix]) -> Self {
        if cols.is_empty() {
            return Self::zero(ambient);
        }
        let m = RatMatrix::from_fn(ambient, cols.len(), |r, c| cols[c].at(r, 0).clone());
        Self::from_columns(&m)
    }

    /// The null space of `m`, canonical.
    pub fn kernel_of(m: &RatMatrix) -> Self {
        Self::from_column_list(m.cols(), &m.kernel_basis())
    }

    /// Coordinate subspace spanned by the listed unit vectors.
    pub fn coordinate(ambient: usize, coords: &[usize]) -> Self {
        let mut sorted: Vec<usize> = coords.to_vec();
        sorted.sort_unstable();
        Self {
            ambient,
            basis_rows: sorted
                .iter()
                .map(|&i| {
                    let mut row = vec![Rational::zero(); ambient];
                    row[i] = Rational::one();
                    row
                })
                .collect(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis_rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis_rows.is_empty()
    }

    /// Whether `other` is contained in `self`.
    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient);
        if other.is_zero() {
            return true;
        }
        if self.is_zero() {
            return false;
        }
        // stack and compare ranks
        let stacked = RatMatrix::from_fn(
            self.dim() + other.dim(),
            self.ambient,
            |r, c| {
                if r < self.dim() {
                    self.basis_rows[r][c].clone()
                } else {
                    other.basis_rows[r - self.dim()][c].clone()
                }
            },
        );
        stacked.rank() == self.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};
    use proptest::prelude::*;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> RatMatrix {
        RatMatrix::from_i64_rows(&[&[a, b], &[c, d]])
    }

    #[test]
    fn matmul_identity_and_worked_products() {
        let any = m2(3, -1, 7, 2);
        let id = RatMatrix::identity(2);
        assert_eq!(id.matmul(&any).unwrap(), any);
        // hand 2x2 arithmetic oracle
        assert_eq!(
            m2(1, 3, 0, 0).matmul(&m2(1, 0, 0, 0)).unwrap(),
            m2(1, 0, 0, 0)
        );
        assert_eq!(
            m2(1, 0, 0, 0).matmul(&m2(0, 0, 1, 1)).unwrap(),
            m2(0, 0, 0, 0)
        );
    }

    #[test]
    fn matmul_rejects_shape_mismatch() {
        let a = RatMatrix::zeros(2, 3);
        let b = RatMatrix::zeros(2, 3);
        assert!(matches!(
            a.matmul(&b),
            Err(MatrixError::ShapeMismatch { op: "matmul", .. })
        ));
    }

    #[test]
    fn kernel_basis_examples() {
        // zero 2x2 matrix: two basis vectors spanning Q^2
        let z = RatMatrix::zeros(2, 2);
        let kb = z.kernel_basis();
        assert_eq!(kb.len(), 2);
        assert_eq!(Subspace::from_column_list(2, &kb), Subspace::full(2));
        // identity: injective, empty kernel
        assert!(RatMatrix::identity(3).kernel_basis().is_empty());
        // [[1,0],[0,0]]: single vector (0,1), by rref oracle
        let kb = m2(1, 0, 0, 0).kernel_basis();
        assert_eq!(kb.len(), 1);
        assert_eq!(kb[0].at(0, 0), &rat_int(0));
        assert_eq!(kb[0].at(1, 0), &rat_int(1));
    }

    #[test]
    fn image_basis_examples() {
        let basis = RatMatrix::identity(2).image_basis();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].at(0, 0), &rat_int(1));
        assert_eq!(basis[1].at(1, 0), &rat_int(1));
        assert!(RatMatrix::zeros(3, 2).image_basis().is_empty());
        // [[1,0],[-1/2,0]]: one vector, leading entry normalized to 1
        let m = RatMatrix::new(2, 2, vec![rat_int(1), rat_int(0), rat(-1, 2), rat_int(0)])
            .unwrap();
        let basis = m.image_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].at(0, 0), &rat_int(1));
        assert_eq!(basis[0].at(1, 0), &rat(-1, 2));
    }

    #[test]
    fn solve_examples() {
        let b = m2(5, -2, 1, 9);
        assert_eq!(
            RatMatrix::identity(2).solve_all(&b).unwrap().unwrap(),
            b
        );
        // row space obstruction checked by hand: no solution
        assert!(m2(1, 0, 0, 0)
            .solve_all(&m2(0, 0, 1, 0))
            .unwrap()
            .is_none());
        // scalar division
        let a = RatMatrix::from_i64_rows(&[&[2]]);
        let b = RatMatrix::from_i64_rows(&[&[3]]);
        let x = a.solve_all(&b).unwrap().unwrap();
        assert_eq!(x.at(0, 0), &rat(3, 2));
    }

    #[test]
    fn solve_returns_canonical_least_free_variable_solution() {
        // x + y = 2 has many solutions; canonical sets the free variable to 0.
        let a = RatMatrix::from_i64_rows(&[&[1, 1]]);
        let b = RatMatrix::from_i64_rows(&[&[2]]);
        let x = a.solve_all(&b).unwrap().unwrap();
        assert_eq!(x.at(0, 0), &rat_int(2));
        assert_eq!(x.at(1, 0), &rat_int(0));
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(
            RatMatrix::identity(2).kronecker(&RatMatrix::identity(3)),
            RatMatrix::identity(6)
        );
        let m = m2(2, -7, 3, 5);
        assert_eq!(RatMatrix::from_i64_rows(&[&[1]]).kronecker(&m), m);
        let k = m2(1, 0, 0, 0).kronecker(&m2(0, 1, 0, 0));
        let mut expected = RatMatrix::zeros(4, 4);
        expected.set(0, 1, rat_int(1));
        assert_eq!(k, expected);
    }

    #[test]
    fn inverse_round_trip() {
        let m = RatMatrix::new(
            2,
            2,
            vec![rat_int(1), rat(1, 2), rat_int(-3), rat_int(2)],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).unwrap().is_identity());
        assert!(inv.matmul(&m).unwrap().is_identity());
        assert!(m2(1, 2, 2, 4).inverse().is_none());
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=3).prop_map(|(n, d)| rat(n, d))
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
        proptest::collection::vec(small_rat(), rows * cols)
            .prop_map(move |v| RatMatrix::new(rows, cols, v).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matmul_associative_and_distributive(
            a in small_matrix(3, 2),
            b in small_matrix(2, 4),
            c in small_matrix(4, 3),
            b2 in small_matrix(2, 4),
        ) {
            let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
            let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let lhs = a.matmul(&b.add(&b2).unwrap()).unwrap();
            let rhs = a.matmul(&b).unwrap().add(&a.matmul(&b2).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_nullity(a in small_matrix(4, 5)) {
            prop_assert_eq!(a.rank() + a.kernel_basis().len(), a.cols());
            for v in a.kernel_basis() {
                prop_assert!(a.matmul(&v).unwrap().is_zero());
            }
        }

        #[test]
        fn kernel_vectors_independent(a in small_matrix(3, 5)) {
            let kb = a.kernel_basis();
            if !kb.is_empty() {
                let spanning = Subspace::from_column_list(a.cols(), &kb);
                prop_assert_eq!(spanning.dim(), kb.len());
            }
        }

        #[test]
        fn kron_mixed_product(
            a in small_matrix(2, 3),
            b in small_matrix(2, 2),
            c in small_matrix(3, 2),
            d in small_matrix(2, 3),
        ) {
            let lhs = a.kronecker(&b).matmul(&c.kronecker(&d)).unwrap();
            let rhs = a.matmul(&c).unwrap().kronecker(&b.matmul(&d).unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn solve_is_sound_and_complete(
            a in small_matrix(3, 4),
            x in small_matrix(4, 2),
        ) {
            // complete: a solvable system is solved...
            let b = a.matmul(&x).unwrap();
            let sol = a.solve_all(&b).unwrap().expect("constructed to be solvable");
            // ...and the returned solution is genuine.
            prop_assert_eq!(a.matmul(&sol).unwrap(), b);
        }

        #[test]
        fn rref_is_idempotent(a in small_matrix(4, 4)) {
            let r1 = a.rref();
            let r2 = r1.mat.rref();
            prop_assert_eq!(r1.mat, r2.mat);
            prop_assert_eq!(r1.pivots, r2.pivots);
        }

        #[test]
        fn image_basis_is_canonical(a in small_matrix(3, 3), t in small_matrix(3, 3)) {
            // Right-multiplying by an invertible matrix preserves the image,
            // and the canonical basis must not notice.
            if t.inverse().is_some() {
                let b = a.matmul(&t).unwrap();
                prop_assert_eq!(
                    Subspace::from_column_list(3, &a.image_basis()),
                    Subspace::from_column_list(3, &b.image_basis())
                );
            }
        }
    }
}
