use std::collections::BTreeMap;
use std::fmt;

use super::GInt;

/// Sparse matrix with Gaussian-integer entries.
///
/// Stored column-major; zero entries are never kept, so structural equality
/// is value equality. Dimensions up to 2^20 are comfortable as long as the
/// entry count stays desk-scale, which is all the realization budget allows.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: u64,
    cols: u64,
    // key (col, row) so a column is a contiguous range
    entries: BTreeMap<(u64, u64), GInt>,
}

impl ExactMatrix {
    pub fn zeros(rows: u64, cols: u64) -> ExactMatrix {
        ExactMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(dim: u64) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(dim, dim);
        for d in 0..dim {
            m.entries.insert((d, d), GInt::ONE);
        }
        m
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn cols(&self) -> u64 {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: u64, col: u64) -> GInt {
        self.entries.get(&(col, row)).copied().unwrap_or(GInt::ZERO)
    }

    pub fn set(&mut self, row: u64, col: u64, value: GInt) {
        debug_assert!(row < self.rows && col < self.cols);
        if value.is_zero() {
            self.entries.remove(&(col, row));
        } else {
            self.entries.insert((col, row), value);
        }
    }

    /// Add `value` into the entry at (row, col).
    pub fn add_entry(&mut self, row: u64, col: u64, value: GInt) {
        debug_assert!(row < self.rows && col < self.cols);
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry((col, row)).or_insert(GInt::ZERO);
        *slot += value;
        if slot.is_zero() {
            self.entries.remove(&(col, row));
        }
    }

    /// Iterate non-zero entries as (row, col, value) in column-major order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, GInt)> + '_ {
        self.entries.iter().map(|(&(c, r), &v)| (r, c, v))
    }

    /// Entries of one column as (row, value).
    pub fn column(&self, col: u64) -> impl Iterator<Item = (u64, GInt)> + '_ {
        self.entries
            .range((col, 0)..=(col, u64::MAX))
            .map(|(&(_, r), &v)| (r, v))
    }

    pub fn scale(&self, s: GInt) -> ExactMatrix {
        if s.is_zero() {
            return ExactMatrix::zeros(self.rows, self.cols);
        }
        let mut m = self.clone();
        for v in m.entries.values_mut() {
            *v *= s;
        }
        m
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (r, c, v) in other.iter() {
            m.add_entry(r, c, v);
        }
        m
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        self.add(&other.scale(-GInt::ONE))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut m = ExactMatrix::zeros(self.rows, other.cols);
        for (&(k, j), &bv) in &other.entries {
            // other[j, k]; need self's column j
            for (r, av) in self.column(j) {
                m.add_entry(r, k, av * bv);
            }
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.cols, self.rows);
        for (r, c, v) in self.iter() {
            m.entries.insert((r, c), v.conj());
        }
        m
    }

    /// Kronecker product; `other`'s indices are the low bits.
    pub fn kron(&self, other: &ExactMatrix) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r1, c1, v1) in self.iter() {
            for (r2, c2, v2) in other.iter() {
                m.entries
                    .insert((c1 * other.cols + c2, r1 * other.rows + r2), v1 * v2);
            }
        }
        m
    }

    /// If `self == s·I`, return `s` (zero matrix returns 0 only for dim 0).
    pub fn as_scalar_identity(&self) -> Option<GInt> {
        if self.rows != self.cols {
            return None;
        }
        if self.entries.is_empty() {
            return if self.rows == 0 { Some(GInt::ZERO) } else { None };
        }
        let s = self.get(0, 0);
        if s.is_zero() {
            return None;
        }
        if self.entries.len() != self.rows as usize {
            return None;
        }
        for (r, c, v) in self.iter() {
            if r != c || v != s {
                return None;
            }
        }
        Some(s)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} ({} nnz)", self.rows, self.cols, self.nnz())?;
        for (r, c, v) in self.iter().take(64) {
            writeln!(f, "  [{r}, {c}] = {v}")?;
        }
        if self.nnz() > 64 {
            writeln!(f, "  ...")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_identity() {
        let mut a = ExactMatrix::zeros(2, 2);
        a.set(0, 1, GInt::new(0, 1));
        a.set(1, 0, GInt::new(0, -1));
        let id = ExactMatrix::identity(2);
        assert_eq!(a.mul(&id), a);
        assert_eq!(id.mul(&a), a);
    }

    #[test]
    fn adjoint_involution() {
        let mut a = ExactMatrix::zeros(2, 3);
        a.set(0, 2, GInt::new(1, 2));
        a.set(1, 0, GInt::new(0, -1));
        assert_eq!(a.adjoint().adjoint(), a);
        assert_eq!(a.adjoint().get(2, 0), GInt::new(1, -2));
    }

    #[test]
    fn scalar_identity_detection() {
        let m = ExactMatrix::identity(4).scale(GInt::new(2, 0));
        assert_eq!(m.as_scalar_identity(), Some(GInt::new(2, 0)));
        let mut n = m.clone();
        n.set(0, 1, GInt::ONE);
        assert_eq!(n.as_scalar_identity(), None);
    }
}
