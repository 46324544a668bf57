//! Integral lattices: validated Gram matrices and their basic invariants.

use std::sync::OnceLock;

use num::{One, Signed, Zero};

use crate::mat::{int, IMat, IVec, Int, QMat, Rat};
use crate::{Error, Result};

/// A free Z-module of finite rank with a non-degenerate symmetric integral
/// bilinear form, given by its Gram matrix. Validated at construction;
/// immutable afterwards.
#[derive(Clone, PartialEq, Eq)]
pub struct Lattice {
    rank: usize,
    gram: IMat,
    label: Option<String>,
}

impl Lattice {
    pub fn new(gram: IMat, label: Option<String>) -> Result<Self> {
        if gram.rows() != gram.cols() || gram.rows() == 0 {
            return Err(Error::DimensionMismatch { expected: gram.rows(), got: gram.cols() });
        }
        for i in 0..gram.rows() {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        if gram.det().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(Lattice { rank: gram.rows(), gram, label })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gram(&self) -> &IMat {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn det(&self) -> Int {
        self.gram.det()
    }

    /// Evenness is a queryable predicate, not an invariant; helper lattices
    /// like ⟨1⟩ may be odd.
    pub fn is_even(&self) -> bool {
        (0..self.rank).all(|i| (self.gram.get(i, i) % int(2)).is_zero())
    }

    pub fn pair(&self, v: &[Int], w: &[Int]) -> Int {
        self.gram.pair(v, w)
    }

    pub fn norm(&self, v: &[Int]) -> Int {
        self.gram.pair(v, v)
    }

    pub fn pair_q(&self, v: &[Rat], w: &[Rat]) -> Rat {
        self.gram.pair_q(v, w)
    }

    /// Exact signature `(s_+, s_-)` by symmetric Gaussian reduction over the
    /// rationals with pivot bookkeeping. No floating point.
    pub fn signature(&self) -> (usize, usize) {
        let n = self.rank;
        let mut a = self.gram.to_q();
        let mut plus = 0;
        let mut minus = 0;
        let mut t = 0;
        while t < n {
            if a.get(t, t).is_zero() {
                // bring a nonzero diagonal entry into position t
                match (t..n).find(|&i| !a.get(i, i).is_zero()) {
                    Some(i) => symmetric_swap(&mut a, t, i),
                    None => {
                        // all-zero diagonal: some off-diagonal entry is nonzero
                        // (non-degenerate), fold it onto the diagonal
                        let (i, j) = find_offdiag(&a, t, n);
                        symmetric_add(&mut a, i, j);
                        symmetric_swap(&mut a, t, i);
                    }
                }
            }
            let pivot = a.get(t, t).clone();
            if pivot.is_positive() {
                plus += 1;
            } else {
                minus += 1;
            }
            for i in t + 1..n {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let factor = a.get(i, t) / &pivot;
                for j in t..n {
                    let v = a.get(i, j) - &factor * a.get(t, j);
                    a.set(i, j, v);
                }
                for j in t..n {
                    let v = a.get(j, i) - &factor * a.get(j, t);
                    a.set(j, i, v);
                }
            }
            t += 1;
        }
        (plus, minus)
    }

    pub fn is_definite(&self) -> bool {
        let (p, m) = self.signature();
        p == 0 || m == 0
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let n = self.rank + other.rank;
        let mut g = IMat::zeros(n, n);
        for i in 0..self.rank {
            for j in 0..self.rank {
                g.set(i, j, self.gram.get(i, j).clone());
            }
        }
        for i in 0..other.rank {
            for j in 0..other.rank {
                g.set(self.rank + i, self.rank + j, other.gram.get(i, j).clone());
            }
        }
        let label = match (&self.label, &other.label) {
            (Some(a), Some(b)) => Some(format!("{a}+{b}")),
            _ => None,
        };
        Lattice { rank: n, gram: g, label }
    }

    /// Gram matrix scaled entrywise by `n ≠ 0`.
    pub fn twist(&self, n: &Int) -> Result<Lattice> {
        if n.is_zero() {
            return Err(Error::Degenerate);
        }
        let label = self.label.as_ref().map(|l| format!("{l}({n})"));
        Ok(Lattice { rank: self.rank, gram: self.gram.scale(n), label })
    }

    // ---- standard lattices ----

    /// The hyperbolic plane U with Gram [[0,1],[1,0]].
    pub fn hyperbolic_u() -> Lattice {
        Lattice {
            rank: 2,
            gram: IMat::from_i64(&[&[0, 1], &[1, 0]]),
            label: Some("U".into()),
        }
    }

    /// Rank-1 lattice ⟨k⟩.
    pub fn rank_one(k: &Int) -> Result<Lattice> {
        let mut g = IMat::zeros(1, 1);
        g.set(0, 0, k.clone());
        Lattice::new(g, Some(format!("A{k}")))
    }

    /// The negative-definite E8 lattice, in the Cartan-matrix basis negated.
    /// Any even negative-definite unimodular rank-8 Gram would do; nothing
    /// downstream depends on this particular basis.
    pub fn e8_minus() -> Lattice {
        let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
        let mut g = IMat::zeros(8, 8);
        for i in 0..8 {
            g.set(i, i, int(-2));
        }
        for &(i, j) in &edges {
            g.set(i, j, int(1));
            g.set(j, i, int(1));
        }
        Lattice { rank: 8, gram: g, label: Some("E8-".into()) }
    }

    /// The K3 lattice Λ = E8(−1)² ⊕ U³, rank 22, signature (3,19).
    /// Basis order: two E8(−1) blocks, then the U pairs (e1,f1),(e2,f2),(e3,f3).
    pub fn k3_lambda() -> Lattice {
        static CACHE: OnceLock<Lattice> = OnceLock::new();
        CACHE
            .get_or_init(|| {
                let e8 = Lattice::e8_minus();
                let u = Lattice::hyperbolic_u();
                e8.direct_sum(&e8)
                    .direct_sum(&u)
                    .direct_sum(&u)
                    .direct_sum(&u)
                    .with_label("Lambda")
            })
            .clone()
    }

    /// The extended K3 lattice Λ̃ = Λ ⊕ U, rank 24, signature (4,20).
    /// The extra hyperbolic basis vectors e, f sit at indices 22 and 23.
    pub fn extended_k3() -> Lattice {
        static CACHE: OnceLock<Lattice> = OnceLock::new();
        CACHE
            .get_or_init(|| {
                Lattice::k3_lambda().direct_sum(&Lattice::hyperbolic_u()).with_label("LambdaTilde")
            })
            .clone()
    }

    /// The primitive class ℓ = e1 + d·f1 in Λ, as a coordinate vector.
    pub fn ell_vector(d: u64) -> IVec {
        let mut v = vec![Int::zero(); 22];
        v[16] = Int::one();
        v[17] = int(d as i64);
        v
    }

    /// The d-polarized K3 lattice Λ_d = Λ ∩ ℓ^⊥, rank 21, signature (2,19).
    pub fn lambda_d(d: u64) -> Lattice {
        let lambda = Lattice::k3_lambda();
        let ell = crate::sublattice::Sublattice::new(
            lambda.clone(),
            vec![Lattice::ell_vector(d)],
        )
        .expect("ℓ is a valid sublattice basis");
        ell.orthogonal_complement()
            .induced_lattice()
            .expect("Λ_d is non-degenerate")
            .with_label(format!("Lambda_d:{d}"))
    }

    /// Gram matrix of a list of rational vectors under this lattice's form.
    pub fn gram_of_q(&self, vecs: &[Vec<Rat>]) -> QMat {
        let n = vecs.len();
        let mut g = QMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                g.set(i, j, self.pair_q(&vecs[i], &vecs[j]));
            }
        }
        g
    }
}

impl std::fmt::Debug for Lattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.label {
            Some(l) => write!(f, "Lattice[{l}, rank {}]", self.rank),
            None => write!(f, "Lattice[rank {}, gram {:?}]", self.rank, self.gram),
        }
    }
}

fn symmetric_swap(a: &mut QMat, s: usize, t: usize) {
    if s == t {
        return;
    }
    let n = a.rows();
    for j in 0..n {
        let tmp = a.get(s, j).clone();
        a.set(s, j, a.get(t, j).clone());
        a.set(t, j, tmp);
    }
    for i in 0..n {
        let tmp = a.get(i, s).clone();
        a.set(i, s, a.get(i, t).clone());
        a.set(i, t, tmp);
    }
}

/// basis vector i ← vᵢ + vⱼ, applied symmetrically
fn symmetric_add(a: &mut QMat, i: usize, j: usize) {
    let n = a.rows();
    for c in 0..n {
        let v = a.get(i, c) + a.get(j, c);
        a.set(i, c, v);
    }
    for r in 0..n {
        let v = a.get(r, i) + a.get(r, j);
        a.set(r, i, v);
    }
}

fn find_offdiag(a: &QMat, t: usize, n: usize) -> (usize, usize) {
    for i in t..n {
        for j in i + 1..n {
            if !a.get(i, j).is_zero() {
                return (i, j);
            }
        }
    }
    unreachable!("degenerate block in signature computation");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert_eq!(
            Lattice::new(IMat::from_i64(&[&[0, 1], &[2, 0]]), None),
            Err(Error::NotSymmetric(1, 0))
        );
        assert_eq!(Lattice::new(IMat::from_i64(&[&[1, 1], &[1, 1]]), None), Err(Error::Degenerate));
    }

    #[test]
    fn signature_hyperbolic_plane() {
        assert_eq!(Lattice::hyperbolic_u().signature(), (1, 1));
    }

    #[test]
    fn signature_extended_k3() {
        // lattice structure of signature (4,20)
        assert_eq!(Lattice::extended_k3().signature(), (4, 20));
        assert_eq!(Lattice::extended_k3().det().abs(), int(1));
    }

    #[test]
    fn signature_a4_plus_u2() {
        // 3×3 symmetric reduction by hand: diag 4, then hyperbolic block (1,1)
        let l = Lattice::rank_one(&int(4))
            .unwrap()
            .direct_sum(&Lattice::hyperbolic_u().twist(&int(2)).unwrap());
        assert_eq!(l.signature(), (2, 1));
    }

    #[test]
    fn k3_lattice_shape() {
        let l = Lattice::k3_lambda();
        assert_eq!(l.rank(), 22);
        assert_eq!(l.signature(), (3, 19));
        assert!(l.is_even());
        assert_eq!(l.det().abs(), int(1));
    }

    #[test]
    fn e8_is_even_unimodular() {
        let e8 = Lattice::e8_minus();
        assert!(e8.is_even());
        assert_eq!(e8.det(), int(1));
        assert_eq!(e8.signature(), (0, 8));
    }

    #[test]
    fn twist_examples() {
        let u2 = Lattice::hyperbolic_u().twist(&int(2)).unwrap();
        assert_eq!(u2.gram(), &IMat::from_i64(&[&[0, 2], &[2, 0]]));
        let a4 = Lattice::rank_one(&int(1)).unwrap().twist(&int(4)).unwrap();
        assert_eq!(a4.gram(), &IMat::from_i64(&[&[4]]));
        assert!(Lattice::hyperbolic_u().twist(&int(0)).is_err());
    }

    #[test]
    fn direct_sum_examples() {
        let u = Lattice::hyperbolic_u();
        let uu = u.direct_sum(&u);
        assert_eq!(uu.rank(), 4);
        assert_eq!(uu.signature(), (2, 2));
    }

    #[test]
    fn lambda_d_shape() {
        let l1 = Lattice::lambda_d(1);
        assert_eq!(l1.rank(), 21);
        assert_eq!(l1.signature(), (2, 19));
    }

    #[test]
    fn oddness() {
        assert!(!Lattice::rank_one(&int(1)).unwrap().is_even());
        assert!(Lattice::rank_one(&int(4)).unwrap().is_even());
    }
}
