//! Smith normal form over the integers with explicit transformation tracking.
//!
//! The classic pivot-and-reduce algorithm. Ranks here stay below 25, so no
//! modular or LLL-assisted variants are needed; transparency wins.

use num::{BigInt, Signed, Zero};

use crate::mat::{IMat, IVec, Int};

/// `left · m · right` is diagonal with entries `diag` (in divisibility
/// order, non-negative); `left` and `right` are unimodular. `right_inv`
/// is kept because saturation and discriminant computations need it.
#[derive(Clone, Debug)]
pub struct Snf {
    pub left: IMat,
    pub diag: Vec<Int>,
    pub right: IMat,
    pub right_inv: IMat,
}

impl Snf {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// The invariant factors that exceed 1 (the cyclic orders of the quotient).
    pub fn nontrivial_factors(&self) -> Vec<Int> {
        self.diag.iter().filter(|d| d.abs() > BigInt::from(1)).cloned().collect()
    }
}

struct Work {
    m: IMat,
    left: IMat,
    right: IMat,
    right_inv: IMat,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols() {
            let t = self.m.get(a, j).clone();
            self.m.set(a, j, self.m.get(b, j).clone());
            self.m.set(b, j, t);
        }
        for j in 0..self.left.cols() {
            let t = self.left.get(a, j).clone();
            self.left.set(a, j, self.left.get(b, j).clone());
            self.left.set(b, j, t);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.m.rows() {
            let t = self.m.get(i, a).clone();
            self.m.set(i, a, self.m.get(i, b).clone());
            self.m.set(i, b, t);
        }
        for i in 0..self.right.rows() {
            let t = self.right.get(i, a).clone();
            self.right.set(i, a, self.right.get(i, b).clone());
            self.right.set(i, b, t);
        }
        // inverse of a swap is the same swap, applied to rows of right_inv
        for j in 0..self.right_inv.cols() {
            let t = self.right_inv.get(a, j).clone();
            self.right_inv.set(a, j, self.right_inv.get(b, j).clone());
            self.right_inv.set(b, j, t);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.m.cols() {
            let v = -self.m.get(a, j);
            self.m.set(a, j, v);
        }
        for j in 0..self.left.cols() {
            let v = -self.left.get(a, j);
            self.left.set(a, j, v);
        }
    }

    /// row a ← row a + k · row b
    fn add_row(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.m.cols() {
            let v = self.m.get(a, j) + k * self.m.get(b, j);
            self.m.set(a, j, v);
        }
        for j in 0..self.left.cols() {
            let v = self.left.get(a, j) + k * self.left.get(b, j);
            self.left.set(a, j, v);
        }
    }

    /// col a ← col a + k · col b
    fn add_col(&mut self, a: usize, b: usize, k: &Int) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.m.rows() {
            let v = self.m.get(i, a) + k * self.m.get(i, b);
            self.m.set(i, a, v);
        }
        for i in 0..self.right.rows() {
            let v = self.right.get(i, a) + k * self.right.get(i, b);
            self.right.set(i, a, v);
        }
        // inverse op: row b ← row b − k · row a  (on right_inv)
        for j in 0..self.right_inv.cols() {
            let v = self.right_inv.get(b, j) - k * self.right_inv.get(a, j);
            self.right_inv.set(b, j, v);
        }
    }
}

/// Smith normal form of an arbitrary integer matrix (zero rows allowed).
pub fn smith_normal_form(m: &IMat) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        left: IMat::identity(rows),
        right: IMat::identity(cols),
        right_inv: IMat::identity(cols),
    };
    let steps = rows.min(cols);
    let mut t = 0;
    while t < steps {
        // smallest |entry| in the trailing block, row-major tie break
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.m.get(i, j).is_zero() {
                    continue;
                }
                match &pivot {
                    None => pivot = Some((i, j)),
                    Some(&(pi, pj)) => {
                        if w.m.get(i, j).abs() < w.m.get(pi, pj).abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break; // trailing block is zero
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        if w.m.get(t, t).is_negative() {
            w.negate_row(t);
        }

        let mut clean = true;
        for i in t + 1..rows {
            if !w.m.get(i, t).is_zero() {
                let q = div_round(w.m.get(i, t), w.m.get(t, t));
                w.add_row(i, t, &(-q));
                if !w.m.get(i, t).is_zero() {
                    clean = false;
                }
            }
        }
        for j in t + 1..cols {
            if !w.m.get(t, j).is_zero() {
                let q = div_round(w.m.get(t, j), w.m.get(t, t));
                w.add_col(j, t, &(-q));
                if !w.m.get(t, j).is_zero() {
                    clean = false;
                }
            }
        }
        if !clean {
            continue; // pivot magnitude shrank; rerun selection at the same t
        }

        // enforce divisibility of the rest of the block by the pivot
        let mut folded = false;
        'outer: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(w.m.get(i, j) % w.m.get(t, t)).is_zero() {
                    w.add_row(t, i, &Int::from(1));
                    folded = true;
                    break 'outer;
                }
            }
        }
        if folded {
            continue;
        }
        t += 1;
    }

    let diag: Vec<Int> = (0..steps).map(|i| w.m.get(i, i).abs()).collect();
    debug_assert!(diag.windows(2).all(|p| p[1].is_zero() || (&p[1] % &p[0]).is_zero()));
    Snf { left: w.left, diag, right: w.right, right_inv: w.right_inv }
}

fn div_round(a: &Int, b: &Int) -> Int {
    // quotient with remainder in (-|b|/2, |b|/2]
    let (q, r) = num::Integer::div_mod_floor(a, b);
    if &(r.abs() * BigInt::from(2)) > &b.abs() {
        q + Int::from(1)
    } else {
        q
    }
}

/// Basis of `{v ∈ Z^n | m · v = 0}`; always saturated.
pub fn integer_kernel(m: &IMat) -> Vec<IVec> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|j| snf.right.col(j)).collect()
}

/// Basis of the saturation of the row span of `basis` inside `Z^n`,
/// i.e. of (Q-row-space ∩ Z^n). `basis` must have full row rank.
pub fn saturate_rows(basis: &IMat) -> Vec<IVec> {
    let snf = smith_normal_form(basis);
    let r = snf.rank();
    assert_eq!(r, basis.rows(), "saturate_rows needs full row rank");
    (0..r).map(|i| snf.right_inv.row(i)).collect()
}
