//! Dense exact linear algebra over a [`FieldDescriptor`].
//!
//! Everything downstream (splittings, cohomology, morphism ranks, the linear
//! part of the constraint solver) reduces to row elimination on small dense
//! matrices with [`FieldElement`] entries. Pivoting is deterministic —
//! leftmost nonzero column, first usable row — so repeated runs produce
//! identical bases and certificates.

use crate::field::{FieldDescriptor, FieldElement};

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    desc: FieldDescriptor,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, desc: &FieldDescriptor) -> Self {
        Matrix {
            rows,
            cols,
            desc: desc.clone(),
            data: vec![desc.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, desc: &FieldDescriptor) -> Self {
        let mut m = Matrix::zero(n, n, desc);
        for i in 0..n {
            *m.at_mut(i, i) = desc.one();
        }
        m
    }

    pub fn from_columns(rows: usize, columns: &[Vec<FieldElement>], desc: &FieldDescriptor) -> Self {
        let mut m = Matrix::zero(rows, columns.len(), desc);
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (r, v) in col.iter().enumerate() {
                *m.at_mut(r, c) = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldElement {
        &mut self.data[r * self.cols + c]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let mut acc = self.desc.zero();
                for c in 0..self.cols {
                    let e = self.at(r, c);
                    if !e.is_zero() && !v[c].is_zero() {
                        acc = &acc + &(e * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.at(row, c).clone();
                    let b = m.at(pr, c).clone();
                    *m.at_mut(row, c) = b;
                    *m.at_mut(pr, c) = a;
                }
            }
            let inv = m.at(row, col).inverse().expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = m.at(row, c) * &inv;
                *m.at_mut(row, c) = v;
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.at(r, c) - &(&factor * m.at(row, c));
                        *m.at_mut(r, c) = v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, one vector per free column, in column order.
    /// The vector for free column j has entry 1 at j and the negated pivot
    /// solution elsewhere.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElement>> {
        let rref = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &p) in rref.pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivot_set[j].is_some() {
                continue;
            }
            let mut vec = vec![self.desc.zero(); self.cols];
            vec[j] = self.desc.one();
            for (i, &p) in rref.pivots.iter().enumerate() {
                vec[p] = -rref.matrix.at(i, j).clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `self * x = b`, returning one solution with free variables set
    /// to zero, or None when inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(self.rows, self.cols + 1, &self.desc);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, self.cols) = b[r].clone();
        }
        let rref = aug.rref();
        if rref.pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![self.desc.zero(); self.cols];
        for (i, &p) in rref.pivots.iter().enumerate() {
            x[p] = rref.matrix.at(i, self.cols).clone();
        }
        Some(x)
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zero(n, 2 * n, &self.desc);
        for r in 0..n {
            for c in 0..n {
                *aug.at_mut(r, c) = self.at(r, c).clone();
            }
            *aug.at_mut(r, n + r) = self.desc.one();
        }
        let rref = aug.rref();
        if rref.pivots.len() != n || rref.pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return None;
        }
        let mut inv = Matrix::zero(n, n, &self.desc);
        for r in 0..n {
            for c in 0..n {
                *inv.at_mut(r, c) = rref.matrix.at(r, n + c).clone();
            }
        }
        Some(inv)
    }
}

pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Incremental greedy column selection: feed vectors left to right, keep the
/// ones that enlarge the span. Used to pick deterministic complements.
pub struct SpanBuilder {
    dim: usize,
    desc: FieldDescriptor,
    // rows kept in echelon form, each with its leading index
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl SpanBuilder {
    pub fn new(dim: usize, desc: &FieldDescriptor) -> Self {
        SpanBuilder {
            dim,
            desc: desc.clone(),
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = v.to_vec();
        for (lead, row) in &self.rows {
            if !v[*lead].is_zero() {
                let factor = v[*lead].clone();
                for c in 0..self.dim {
                    if !row[c].is_zero() {
                        v[c] = &v[c] - &(&factor * &row[c]);
                    }
                }
            }
        }
        v
    }

    /// Returns true (and absorbs the vector) iff it is independent of the
    /// vectors absorbed so far.
    pub fn insert(&mut self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.dim);
        let red = self.reduce(v);
        let Some(lead) = red.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let inv = red[lead].inverse().expect("nonzero lead");
        let normalized: Vec<FieldElement> = red.iter().map(|e| e * &inv).collect();
        self.rows.push((lead, normalized));
        true
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(|e| e.is_zero())
    }

    /// Dummy descriptor accessor for constructing zero vectors alongside.
    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;
    use num::BigInt;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn fe(n: i64) -> FieldElement {
        q().from_integer(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows[0].len();
        let mut m = Matrix::zero(r, c, &q());
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                *m.at_mut(i, j) = fe(v);
            }
        }
        m
    }

    #[test]
    fn rref_and_rank() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let r = m.rref();
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 1, 1]]);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 1);
        for v in &kernel {
            assert!(m.mul_vec(v).iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(&[&[1, 1], &[0, 1]]);
        let x = m.solve(&[fe(3), fe(1)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![fe(3), fe(1)]);

        let singular = mat(&[&[1, 1], &[1, 1]]);
        assert!(singular.solve(&[fe(0), fe(1)]).is_none());
    }

    #[test]
    fn inverse_round_trip() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        let e0 = inv.mul_vec(&[fe(1), fe(0)]);
        assert_eq!(m.mul_vec(&e0), vec![fe(1), fe(0)]);
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn span_builder_selects_greedily() {
        let mut sb = SpanBuilder::new(3, &q());
        assert!(sb.insert(&[fe(1), fe(0), fe(1)]));
        assert!(!sb.insert(&[fe(2), fe(0), fe(2)]));
        assert!(sb.insert(&[fe(0), fe(1), fe(0)]));
        assert_eq!(sb.rank(), 2);
        assert!(sb.contains(&[fe(3), fe(5), fe(3)]));
        assert!(!sb.contains(&[fe(0), fe(0), fe(1)]));
    }

    #[test]
    fn works_over_quadratic_extension() {
        let f = FieldDescriptor::quadratic(BigRational::from_integer(BigInt::from(2))).unwrap();
        let s = f.sqrt_theta().unwrap();
        let mut m = Matrix::zero(2, 2, &f);
        *m.at_mut(0, 0) = s.clone();
        *m.at_mut(0, 1) = f.one();
        *m.at_mut(1, 0) = f.one();
        *m.at_mut(1, 1) = s.clone();
        // determinant 2 - 1 = 1, invertible
        assert_eq!(m.rank(), 2);
        let inv = m.inverse().unwrap();
        let x = inv.mul_vec(&[f.one(), f.zero()]);
        assert_eq!(m.mul_vec(&x), vec![f.one(), f.zero()]);
    }
}
