//! Deterministic exact linear algebra over the configured field.
//!
//! Everything funnels through a canonical reduced row-echelon form, so
//! basis-dependent outputs (syzygy bases, section bases, intersections)
//! are reproducible bit for bit.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

/// Dense matrix with entries in one exact field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, field, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        Matrix { rows: r, cols: c, field, entries }
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_i64_rows(field: Field, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect(),
        )
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn stack(&self, below: &Matrix) -> Matrix {
        assert_eq!(self.cols, below.cols);
        let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(self.rows + below.rows);
        for i in 0..self.rows {
            rows.push(self.row(i).to_vec());
        }
        for i in 0..below.rows {
            rows.push(below.row(i).to_vec());
        }
        Matrix::from_rows(self.field, rows)
    }

    /// Canonical reduced row-echelon form together with the rank.
    ///
    /// Over the rationals the elimination is fraction-free (Bareiss-Jordan
    /// on cleared rows) with a single normalization pass at the end; over
    /// `F_p` it is plain Gauss-Jordan.
    pub fn rref(&self) -> (Matrix, usize) {
        match self.field {
            Field::Rational => self.rref_rational(),
            Field::Prime(_) => self.rref_prime(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    fn rref_rational(&self) -> (Matrix, usize) {
        // Clear denominators row by row; rank and row space are unchanged.
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    let d = self.get(i, j).as_rational().unwrap().denom().clone();
                    lcm = lcm.lcm(&d);
                }
                (0..self.cols)
                    .map(|j| {
                        let r = self.get(i, j).as_rational().unwrap();
                        r.numer() * (&lcm / r.denom())
                    })
                    .collect()
            })
            .collect();

        let (rows, cols) = (self.rows, self.cols);
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut divisor = BigInt::one();
        let mut rank = 0usize;
        for col in 0..cols {
            // Pick the pivot row with the shortest nonzero entry to slow growth.
            let mut pivot: Option<usize> = None;
            for r in rank..rows {
                if !m[r][col].is_zero()
                    && pivot.is_none_or(|p| m[r][col].magnitude().bits() < m[p][col].magnitude().bits())
                {
                    pivot = Some(r);
                }
            }
            let Some(p) = pivot else { continue };
            m.swap(rank, p);
            let pivot_val = m[rank][col].clone();
            // One-step fraction-free Gauss-Jordan: the division is exact and
            // intermediate entries stay minors of the input.
            for r in 0..rows {
                if r == rank {
                    continue;
                }
                let factor = m[r][col].clone();
                for c in 0..cols {
                    let v = &m[r][c] * &pivot_val - &factor * &m[rank][c];
                    m[r][c] = &v / &divisor;
                }
            }
            divisor = pivot_val;
            pivots.push((rank, col));
            rank += 1;
        }
        // Normalize pivot rows to leading 1 and convert back to rationals.
        let mut out = Matrix::zero(Field::Rational, rows, cols);
        for &(r, c) in &pivots {
            let p = m[r][c].clone();
            for j in 0..cols {
                let v = BigRational::new(m[r][j].clone(), p.clone());
                out.set(r, j, Scalar::Rational(v));
            }
        }
        (out, rank)
    }

    fn rref_prime(&self) -> (Matrix, usize) {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut rank = 0usize;
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !m.get(r, col).is_zero()) else { continue };
            for j in 0..cols {
                let tmp = m.get(rank, j).clone();
                m.set(rank, j, m.get(p, j).clone());
                m.set(p, j, tmp);
            }
            let inv = m.get(rank, col).inv().expect("nonzero pivot");
            for j in 0..cols {
                m.set(rank, j, m.get(rank, j).mul(&inv));
            }
            for r in 0..rows {
                if r != rank && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for j in 0..cols {
                        let v = m.get(r, j).sub(&factor.mul(m.get(rank, j)));
                        m.set(r, j, v);
                    }
                }
            }
            rank += 1;
        }
        (m, rank)
    }

    /// Basis of the right null space, as a canonical Subspace of `k^cols`.
    pub fn kernel_basis(&self) -> Subspace {
        let (r, rank) = self.rref();
        let mut pivot_cols = Vec::with_capacity(rank);
        for i in 0..rank {
            let c = (0..self.cols).find(|&j| r.get(i, j).is_one()).expect("pivot");
            pivot_cols.push(c);
        }
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivot_cols {
                v[c] = true;
            }
            v
        };
        let mut basis: Vec<Vec<Scalar>> = Vec::with_capacity(self.cols - rank);
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = r.get(i, free).neg();
            }
            basis.push(v);
        }
        Subspace::from_rows(self.field, self.cols, basis)
    }
}

/// A linear subspace of `k^ambient`, stored as canonical RREF rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub ambient: usize,
    pub field: Field,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, field, basis: Matrix::zero(field, 0, ambient) }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace { ambient, field, basis: Matrix::identity(field, ambient) }
    }

    /// Span of the given vectors, canonicalized.
    pub fn from_rows(field: Field, ambient: usize, rows: Vec<Vec<Scalar>>) -> Subspace {
        for r in &rows {
            assert_eq!(r.len(), ambient, "vector length mismatch");
        }
        let m = Matrix::from_rows(field, rows);
        let m = if m.rows == 0 { Matrix::zero(field, 0, ambient) } else { m };
        let (r, rank) = m.rref();
        let mut basis_rows = Vec::with_capacity(rank);
        for i in 0..rank {
            basis_rows.push(r.row(i).to_vec());
        }
        Subspace { ambient, field, basis: Matrix::from_rows(field, basis_rows) }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Exact membership via residual after reduction against the RREF rows.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut v = v.to_vec();
        for i in 0..self.dim() {
            let lead = (0..self.ambient).find(|&j| self.basis.get(i, j).is_one()).unwrap();
            if !v[lead].is_zero() {
                let factor = v[lead].clone();
                for j in 0..self.ambient {
                    v[j] = v[j].sub(&factor.mul(self.basis.get(i, j)));
                }
            }
        }
        v.iter().all(Scalar::is_zero)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis_vectors().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Ok(Subspace::from_rows(self.field, self.ambient, rows))
    }

    /// Canonical basis of the intersection, by solving `u·A = v·B`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.compatible(other)?;
        let (a, b) = (self.dim(), other.dim());
        if a == 0 || b == 0 {
            return Ok(Subspace::zero(self.field, self.ambient));
        }
        // Columns of the system are coordinates (u, v); rows are ambient slots.
        let sys = Matrix::from_fn(self.field, self.ambient, a + b, |i, j| {
            if j < a {
                self.basis.get(j, i).clone()
            } else {
                other.basis.get(j - a, i).neg()
            }
        });
        let ker = sys.kernel_basis();
        let mut rows = Vec::with_capacity(ker.dim());
        for k in ker.basis_vectors() {
            let mut v = vec![self.field.zero(); self.ambient];
            for (idx, coeff) in k[..a].iter().enumerate() {
                if !coeff.is_zero() {
                    for j in 0..self.ambient {
                        v[j] = v[j].add(&coeff.mul(self.basis.get(idx, j)));
                    }
                }
            }
            rows.push(v);
        }
        Ok(Subspace::from_rows(self.field, self.ambient, rows))
    }

    fn compatible(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(q(), 3);
        let (r, rank) = id.rref();
        assert_eq!(r, id);
        assert_eq!(rank, 3);
        let z = Matrix::zero(q(), 2, 4);
        let (r, rank) = z.rref();
        assert_eq!(r, z);
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = Matrix::from_i64_rows(q(), &[&[1, 2], &[2, 4]]);
        let (r, rank) = m.rref();
        assert_eq!(rank, 1);
        assert_eq!(r.row(0), Matrix::from_i64_rows(q(), &[&[1, 2]]).row(0));
        assert!(r.row(1).iter().all(Scalar::is_zero));
    }

    #[test]
    fn kernel_of_identity_and_line() {
        assert_eq!(Matrix::identity(q(), 4).kernel_basis().dim(), 0);
        let m = Matrix::from_i64_rows(q(), &[&[1, -1]]);
        let k = m.kernel_basis();
        assert_eq!(k.dim(), 1);
        assert!(k.contains(&[q().from_i64(1), q().from_i64(1)]));
    }

    #[test]
    fn kernel_annihilates() {
        let m = Matrix::from_i64_rows(
            q(),
            &[&[1, 2, 3, 4, 5], &[0, 1, 0, 2, 0], &[3, 0, 1, 0, 7]],
        );
        let k = m.kernel_basis();
        assert_eq!(k.dim() + m.rank(), m.cols);
        for v in k.basis_vectors() {
            let col = Matrix::from_rows(q(), vec![v]).transpose();
            let prod = m.mul(&col);
            for i in 0..prod.rows {
                assert!(prod.get(i, 0).is_zero());
            }
        }
    }

    #[test]
    fn intersect_coordinate_planes() {
        let f = q();
        let e = |i: usize| {
            let mut v = vec![f.zero(); 4];
            v[i] = f.one();
            v
        };
        let a = Subspace::from_rows(f, 4, vec![e(0), e(1)]);
        let b = Subspace::from_rows(f, 4, vec![e(1), e(2)]);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&e(1)));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn rref_canonical_for_equal_row_spaces() {
        let a = Matrix::from_i64_rows(q(), &[&[2, 4, 6], &[1, 1, 1]]);
        let b = Matrix::from_i64_rows(q(), &[&[3, 5, 7], &[1, 2, 3]]);
        assert_eq!(a.rref().0, b.rref().0);
    }

    #[test]
    fn prime_field_rref_matches_rank() {
        let f = Field::prime_default();
        let m = Matrix::from_i64_rows(f, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(m.rank(), 2);
        let mq = Matrix::from_i64_rows(q(), &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(mq.rank(), 2);
    }
}
