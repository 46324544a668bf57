//! Bounded and complete short-vector enumeration.
//!
//! Indefinite lattices get a coordinate-box search (honest about its bound);
//! definite lattices get a complete enumeration by recursive completion of
//! squares. Output order is lexicographic everywhere so golden tests stay
//! stable.

use num::{Signed, Zero};

use crate::lattice::Lattice;
use crate::mat::{IVec, Int, QMat, Rat};
use crate::{Error, Result};

/// Tri-state answer for "does L represent n".
///
/// `No` carries a number-theoretic reason and is only produced by the
/// criteria layer; plain enumeration can never prove absence on an
/// indefinite lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Represents {
    Yes { witness: IVec },
    NoWithinBound { bound: u32 },
    No { reason: String },
}

impl Lattice {
    /// All vectors with coordinates in `[-bound, bound]` and self-pairing
    /// `n`, in lexicographic order.
    pub fn vectors_of_norm(&self, n: &Int, bound: u32) -> Vec<IVec> {
        self.vectors_of_norm_with_progress(n, bound, |_| true)
            .expect("enumeration without cancellation cannot fail")
    }

    /// Same as [`vectors_of_norm`](Self::vectors_of_norm) but reports the
    /// number of candidates visited every few thousand steps; returning
    /// `false` from the callback cancels the run. Output is deterministic
    /// regardless of callback behaviour (cancellation aborts, it never
    /// truncates silently).
    pub fn vectors_of_norm_with_progress(
        &self,
        n: &Int,
        bound: u32,
        mut progress: impl FnMut(u64) -> bool,
    ) -> Result<Vec<IVec>> {
        assert!(bound >= 1, "coordinate bound must be positive");
        let rank = self.rank();
        let b = bound as i64;
        let mut current: Vec<i64> = vec![-b; rank];
        let mut out = Vec::new();
        let mut visited: u64 = 0;
        loop {
            visited += 1;
            if visited % 8192 == 0 && !progress(visited) {
                return Err(Error::Cancelled);
            }
            let v: IVec = current.iter().map(|&c| Int::from(c)).collect();
            if &self.norm(&v) == n {
                out.push(v);
            }
            // lexicographic odometer
            let mut i = rank;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if current[i] < b {
                    current[i] += 1;
                    for c in current.iter_mut().skip(i + 1) {
                        *c = -b;
                    }
                    break;
                }
            }
        }
    }

    /// Complete enumeration of all vectors of self-pairing `n` on a definite
    /// lattice, no coordinate bound needed. Errors on indefinite input.
    pub fn vectors_of_norm_complete(&self, n: &Int) -> Result<Vec<IVec>> {
        let (p, m) = self.signature();
        let (gram, target) = if m == 0 {
            (self.gram().to_q(), n.clone())
        } else if p == 0 {
            (self.gram().neg().to_q(), -n)
        } else {
            return Err(Error::CrossCheck("complete enumeration needs a definite lattice".into()));
        };
        if target.is_negative() {
            return Ok(Vec::new());
        }
        // Completion of squares: Q(x) = Σ dᵢ (xᵢ + Σ_{j>i} μᵢⱼ xⱼ)², dᵢ > 0.
        let rank = self.rank();
        let (d, mu) = cholesky_rational(&gram);
        let mut out = Vec::new();
        let mut coords = vec![Int::zero(); rank];
        descend(&d, &mu, rank, &Rat::from(target), &mut coords, &mut out);
        out.sort();
        Ok(out)
    }

    /// Bounded-box representability check.
    pub fn represents_within(&self, n: &Int, bound: u32) -> Represents {
        match self.vectors_of_norm(n, bound).into_iter().find(|v| !v.iter().all(|x| x.is_zero())) {
            Some(witness) => Represents::Yes { witness },
            None => {
                if n.is_zero() {
                    // the zero vector always has norm 0 but is not a witness
                    Represents::NoWithinBound { bound }
                } else {
                    Represents::NoWithinBound { bound }
                }
            }
        }
    }
}

/// d, μ with Q(x) = Σ dᵢ(xᵢ + Σ_{j>i} μᵢⱼxⱼ)²; requires positive-definite
/// input, every leading pivot is then nonzero.
fn cholesky_rational(gram: &QMat) -> (Vec<Rat>, QMat) {
    let n = gram.rows();
    let mut a = gram.clone();
    let mut d = Vec::with_capacity(n);
    let mut mu = QMat::zeros(n, n);
    for t in 0..n {
        let pivot = a.get(t, t).clone();
        assert!(pivot.is_positive(), "not positive definite");
        for j in t + 1..n {
            mu.set(t, j, a.get(t, j) / &pivot);
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let v = a.get(i, j) - a.get(i, t) * a.get(t, j) / &pivot;
                a.set(i, j, v);
            }
        }
        d.push(pivot);
    }
    (d, mu)
}

fn descend(
    d: &[Rat],
    mu: &QMat,
    level: usize,
    budget: &Rat,
    coords: &mut Vec<Int>,
    out: &mut Vec<IVec>,
) {
    if level == 0 {
        if budget.is_zero() {
            out.push(coords.clone());
        }
        return;
    }
    let i = level - 1;
    // center cᵢ = Σ_{j>i} μᵢⱼ xⱼ; admissible xᵢ satisfy dᵢ(xᵢ+cᵢ)² ≤ budget
    let mut center = Rat::zero();
    for j in i + 1..mu.cols() {
        center += mu.get(i, j) * Rat::from(coords[j].clone());
    }
    let base = (-&center).floor().to_integer();
    // walk outward in both directions; the constraint is monotone in |x+c|
    let mut x = base.clone();
    loop {
        let term = &d[i] * square(&(Rat::from(x.clone()) + &center));
        if term > *budget {
            break;
        }
        coords[i] = x.clone();
        descend(d, mu, i, &(budget - term), coords, out);
        x -= 1;
    }
    let mut x = base + 1;
    loop {
        let term = &d[i] * square(&(Rat::from(x.clone()) + &center));
        if term > *budget {
            break;
        }
        coords[i] = x.clone();
        descend(d, mu, i, &(budget - term), coords, out);
        x += 1;
    }
    coords[i] = Int::zero();
}

fn square(r: &Rat) -> Rat {
    r * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{int, IMat};

    #[test]
    fn u_norm_zero_bound_one() {
        let l = Lattice::hyperbolic_u();
        let vs = l.vectors_of_norm(&int(0), 1);
        let expect: Vec<IVec> = vec![
            vec![int(-1), int(0)],
            vec![int(0), int(-1)],
            vec![int(0), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(0)],
        ];
        assert_eq!(vs, expect);
    }

    #[test]
    fn a4_u2_has_no_plus_two_classes() {
        // bounded desk-scale proxy for "contains no (+2)-classes"
        let l = Lattice::rank_one(&int(4))
            .unwrap()
            .direct_sum(&Lattice::hyperbolic_u().twist(&int(2)).unwrap());
        assert!(l.vectors_of_norm(&int(2), 10).is_empty());
    }

    #[test]
    fn twisted_rank3_does_not_represent_minus_two_in_box() {
        let g = IMat::from_i64(&[&[0, 0, 7], &[0, 2, 0], &[7, 0, 0]]);
        let l = Lattice::new(g, None).unwrap();
        assert!(l.vectors_of_norm(&int(-2), 25).is_empty());
    }

    #[test]
    fn e8_has_240_roots() {
        let e8neg = Lattice::e8_minus();
        let roots = e8neg.vectors_of_norm_complete(&int(-2)).unwrap();
        assert_eq!(roots.len(), 240);
        assert!(e8neg.vectors_of_norm_complete(&int(2)).unwrap().is_empty());
        assert!(e8neg.vectors_of_norm_complete(&int(-1)).unwrap().is_empty());
    }

    #[test]
    fn complete_matches_box_on_definite() {
        let l = Lattice::rank_one(&int(2)).unwrap().direct_sum(&Lattice::rank_one(&int(6)).unwrap());
        let complete = l.vectors_of_norm_complete(&int(8)).unwrap();
        let boxed = l.vectors_of_norm(&int(8), 3);
        assert_eq!(complete, boxed);
        assert!(!complete.is_empty());
    }

    #[test]
    fn cancellation() {
        let l = Lattice::k3_lambda();
        let r = l.vectors_of_norm_with_progress(&int(2), 1, |_| false);
        assert_eq!(r, Err(Error::Cancelled));
    }
}
