//! Dense exact matrices over `BigInt` and `BigRational`.
//!
//! Ranks in this crate never exceed 24, so everything is straightforward
//! O(n³) arithmetic with no fraction-free tricks beyond what exactness needs.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IVec = Vec<Int>;
pub type QVec = Vec<Rat>;

pub fn int(v: i64) -> Int {
    Int::from(v)
}

pub fn rat(v: i64) -> Rat {
    Rat::from(Int::from(v))
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![Int::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Int::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<IVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> IVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> IVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<IVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Int]) -> IVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn neg(&self) -> IMat {
        IMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }

    pub fn scale(&self, k: &Int) -> IMat {
        IMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * k).collect() }
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn to_q(&self) -> QMat {
        QMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| Rat::from(x.clone())).collect(),
        }
    }

    pub fn det(&self) -> Int {
        let d = self.to_q().det();
        debug_assert!(d.is_integer());
        d.to_integer()
    }

    /// `v† · self · w` (the bilinear pairing when `self` is a Gram matrix).
    pub fn pair(&self, v: &[Int], w: &[Int]) -> Int {
        assert_eq!(v.len(), self.rows);
        assert_eq!(w.len(), self.cols);
        let mut acc = Int::zero();
        for i in 0..self.rows {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if w[j].is_zero() {
                    continue;
                }
                acc += &v[i] * self.get(i, j) * &w[j];
            }
        }
        acc
    }

    pub fn pair_q(&self, v: &[Rat], w: &[Rat]) -> Rat {
        self.to_q().pair(v, w)
    }
}

impl std::fmt::Debug for IMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl QMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<QVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        QMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> QVec {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> QVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> QMat {
        let mut t = QMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = QMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> QVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn pair(&self, v: &[Rat], w: &[Rat]) -> Rat {
        assert_eq!(v.len(), self.rows);
        assert_eq!(w.len(), self.cols);
        let mut acc = Rat::zero();
        for i in 0..self.rows {
            if v[i].is_zero() {
                continue;
            }
            for j in 0..self.cols {
                if w[j].is_zero() {
                    continue;
                }
                acc += &v[i] * self.get(i, j) * &w[j];
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn to_int(&self) -> Option<IMat> {
        if !self.is_integral() {
            return None;
        }
        Some(IMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.to_integer()).collect(),
        })
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rat::one();
        for t in 0..n {
            let Some(p) = (t..n).find(|&i| !a.get(i, t).is_zero()) else {
                return Rat::zero();
            };
            if p != t {
                for j in 0..n {
                    let tmp = a.get(t, j).clone();
                    a.set(t, j, a.get(p, j).clone());
                    a.set(p, j, tmp);
                }
                det = -det;
            }
            let pivot = a.get(t, t).clone();
            det *= &pivot;
            for i in t + 1..n {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let factor = a.get(i, t) / &pivot;
                for j in t..n {
                    let v = a.get(i, j) - &factor * a.get(t, j);
                    a.set(i, j, v);
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse; `Err(Degenerate)` if singular.
    pub fn inverse(&self) -> Result<QMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = QMat::identity(n);
        for t in 0..n {
            let p = (t..n).find(|&i| !a.get(i, t).is_zero()).ok_or(Error::Degenerate)?;
            if p != t {
                for j in 0..n {
                    let tmp = a.get(t, j).clone();
                    a.set(t, j, a.get(p, j).clone());
                    a.set(p, j, tmp);
                    let tmp = inv.get(t, j).clone();
                    inv.set(t, j, inv.get(p, j).clone());
                    inv.set(p, j, tmp);
                }
            }
            let pivot = a.get(t, t).clone();
            for j in 0..n {
                let v = a.get(t, j) / &pivot;
                a.set(t, j, v);
                let v = inv.get(t, j) / &pivot;
                inv.set(t, j, v);
            }
            for i in 0..n {
                if i == t || a.get(i, t).is_zero() {
                    continue;
                }
                let factor = a.get(i, t).clone();
                for j in 0..n {
                    let v = a.get(i, j) - &factor * a.get(t, j);
                    a.set(i, j, v);
                    let v = inv.get(i, j) - &factor * inv.get(t, j);
                    inv.set(i, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self · X = rhs`; `Err(Degenerate)` when `self` is singular.
    pub fn solve(&self, rhs: &QMat) -> Result<QMat> {
        Ok(self.inverse()?.mul(rhs))
    }

    /// Basis of the right kernel `{v | self · v = 0}`, via reduced row echelon
    /// form. The basis is deterministic for a given input.
    pub fn kernel(&self) -> Vec<QVec> {
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Vec::new();
        for &fj in &free {
            let mut v = vec![Rat::zero(); self.cols];
            v[fj] = Rat::one();
            for (r, &pj) in pivots.iter().enumerate() {
                v[pj] = -rref.get(r, fj).clone();
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn rref(&self) -> (QMat, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, j).is_zero()) else {
                continue;
            };
            if p != r {
                for c in 0..a.cols {
                    let tmp = a.get(r, c).clone();
                    a.set(r, c, a.get(p, c).clone());
                    a.set(p, c, tmp);
                }
            }
            let pivot = a.get(r, j).clone();
            for c in 0..a.cols {
                let v = a.get(r, c) / &pivot;
                a.set(r, c, v);
            }
            for i in 0..a.rows {
                if i == r || a.get(i, j).is_zero() {
                    continue;
                }
                let factor = a.get(i, j).clone();
                for c in 0..a.cols {
                    let v = a.get(i, c) - &factor * a.get(r, c);
                    a.set(i, c, v);
                }
            }
            pivots.push(j);
            r += 1;
        }
        (a, pivots)
    }
}

impl std::fmt::Debug for QMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "QMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| crate::rat::rat_to_string(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

pub fn ivec_to_q(v: &[Int]) -> QVec {
    v.iter().map(|x| Rat::from(x.clone())).collect()
}

pub fn qvec_is_integral(v: &[Rat]) -> bool {
    v.iter().all(|x| x.is_integer())
}

pub fn qvec_to_int(v: &[Rat]) -> Option<IVec> {
    if qvec_is_integral(v) {
        Some(v.iter().map(|x| x.to_integer()).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IMat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(m.det(), int(-1));
        let q = m.to_q();
        let inv = q.inverse().unwrap();
        assert!(q.mul(&inv).is_identity());

        let singular = IMat::from_i64(&[&[1, 2], &[2, 4]]).to_q();
        assert_eq!(singular.det(), rat(0));
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn kernel_of_singular_map() {
        let m = IMat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).to_q();
        let k = m.kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn pairing() {
        let g = IMat::from_i64(&[&[0, 1], &[1, 0]]);
        let e = vec![int(1), int(0)];
        let f = vec![int(0), int(1)];
        assert_eq!(g.pair(&e, &f), int(1));
        assert_eq!(g.pair(&e, &e), int(0));
    }
}
