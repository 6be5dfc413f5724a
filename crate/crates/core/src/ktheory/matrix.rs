use std::fmt;

use serde::Serialize;

use super::KError;

/// Dense integer matrix with overflow-checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    /// Column vector `e_i` of length `n`.
    pub fn unit_column(n: usize, i: usize) -> Self {
        let mut m = Self::zeros(n, 1);
        m.data[i] = 1;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Products accumulate at double width, so only a result entry outside
    /// `i64` is an overflow.
    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, KError> {
        if self.cols != other.rows {
            return Err(KError::Shape { left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc: i128 = 0;
                for k in 0..self.cols {
                    let term = i128::from(self.get(r, k)) * i128::from(other.get(k, c));
                    acc = acc.checked_add(term).ok_or(KError::Overflow)?;
                }
                out.set(r, c, i64::try_from(acc).map_err(|_| KError::Overflow)?);
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &IntMatrix) -> Result<IntMatrix, KError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(KError::Shape { left: (self.rows, self.cols), right: (other.rows, other.cols) });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.checked_sub(*b).ok_or(KError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Columns `range` of `self` as a new matrix.
    pub fn columns(&self, range: std::ops::Range<usize>) -> IntMatrix {
        let mut out = Self::zeros(self.rows, range.len());
        for r in 0..self.rows {
            for (k, c) in range.clone().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "row counts differ");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.get(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.get(r, c));
            }
        }
        out
    }

    /// `[self ; other]`.
    pub fn vconcat(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "column counts differ");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMatrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64, KError> {
        if self.rows != self.cols {
            return Err(KError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&r| a[r * n + k] != 0) {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(pivot)
                        .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                        .ok_or(KError::Overflow)?;
                    a[i * n + j] = v / prev;
                }
                a[i * n + k] = 0;
            }
            prev = pivot;
        }
        i64::try_from(sign * a[n * n - 1]).map_err(|_| KError::Overflow)
    }
}

impl fmt::Display for IntMatrix {
    /// Row-major bracketed text, e.g. `[[1, 0], [0, 1]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (k, x) in self.row(r).iter().enumerate() {
                if k > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", x)?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_shapes() {
        let a = IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), IntMatrix::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert!(matches!(a.mul(&IntMatrix::zeros(3, 1)), Err(KError::Shape { .. })));
        assert_eq!(a.to_string(), "[[1, 2], [3, 4]]");
    }

    #[test]
    fn overflow_is_an_error() {
        let big = IntMatrix::from_rows(&[vec![i64::MAX, i64::MAX]]);
        let ones = IntMatrix::from_rows(&[vec![1], vec![1]]);
        assert_eq!(big.mul(&ones), Err(KError::Overflow));
    }

    #[test]
    fn determinants() {
        assert_eq!(IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]).det(), Ok(-8));
        assert_eq!(IntMatrix::identity(4).det(), Ok(1));
        let m = IntMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        assert_eq!(m.det(), Ok(-2));
        assert_eq!(IntMatrix::zeros(0, 0).det(), Ok(1));
    }
}
