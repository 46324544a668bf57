//! Discriminant groups A_L = L^∨/L and their finite quadratic forms.

use num::{One, Signed, Zero};

use crate::lattice::Lattice;
use crate::mat::{ivec_to_q, IMat, Int, QVec, Rat};
use crate::rat::{mod_one, mod_two};
use crate::snf::smith_normal_form;
use crate::{Error, Result};

/// The finite group A_L = L^∨/L with generators expressed as rational
/// vectors in L_Q (lattice-basis coordinates), the bilinear form b_L with
/// values in Q/Z, and — for even L — the quadratic form q_L with values in
/// Q/2Z.
#[derive(Clone, Debug)]
pub struct DiscriminantForm {
    invariant_factors: Vec<Int>,
    generators: Vec<QVec>,
    q_values: Option<Vec<Rat>>,
    b_matrix: Vec<Vec<Rat>>,
    // full SNF data of the Gram matrix, kept for computing induced actions
    diag_full: Vec<Int>,
    right: IMat,
    right_inv: IMat,
    nontrivial: Vec<usize>,
}

impl DiscriminantForm {
    /// Invariant factors > 1, in divisibility order.
    pub fn invariant_factors(&self) -> &[Int] {
        &self.invariant_factors
    }

    pub fn generators(&self) -> &[QVec] {
        &self.generators
    }

    pub fn order(&self) -> Int {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// q_L values on the generators, mod 2Z; error for odd lattices.
    pub fn q_values(&self) -> Result<&[Rat]> {
        self.q_values.as_deref().ok_or(Error::OddLattice)
    }

    /// b_L values on generator pairs, mod Z.
    pub fn b_matrix(&self) -> &[Vec<Rat>] {
        &self.b_matrix
    }

    /// Matrix of the automorphism of A_L induced by an isometry matrix `m`
    /// of the underlying lattice, on generator coordinates; entry (i,j) is
    /// reduced modulo the i-th invariant factor.
    pub fn action_of(&self, m: &IMat) -> DiscriminantAction {
        let k = self.nontrivial.len();
        let mut action = IMat::zeros(k, k);
        let mq = m.to_q();
        let vinv = self.right_inv.to_q();
        for (jj, &j) in self.nontrivial.iter().enumerate() {
            let image = mq.mul_vec(&self.generator_at(j));
            // coordinates of the image: t = D·V⁻¹·image, integral because
            // isometries of L map L^∨ to L^∨
            let raw = vinv.mul_vec(&image);
            for (ii, &i) in self.nontrivial.iter().enumerate() {
                let t = &raw[i] * Rat::from(self.diag_full[i].clone());
                assert!(t.is_integer(), "discriminant image not in L^∨");
                let ti = t.to_integer();
                let d = &self.diag_full[i];
                let reduced = num::Integer::mod_floor(&ti, d);
                action.set(ii, jj, reduced);
            }
        }
        DiscriminantAction { factors: self.invariant_factors.clone(), matrix: action }
    }

    fn generator_at(&self, idx: usize) -> QVec {
        let d = Rat::from(self.diag_full[idx].clone());
        ivec_to_q(&self.right.col(idx)).into_iter().map(|x| x / &d).collect()
    }
}

/// The induced map on discriminant generators, entries reduced modulo the
/// row's invariant factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscriminantAction {
    factors: Vec<Int>,
    matrix: IMat,
}

impl DiscriminantAction {
    pub fn factors(&self) -> &[Int] {
        &self.factors
    }

    pub fn matrix(&self) -> &IMat {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        let k = self.factors.len();
        (0..k).all(|i| {
            (0..k).all(|j| {
                let want = if i == j {
                    num::Integer::mod_floor(&Int::one(), &self.factors[i])
                } else {
                    Int::zero()
                };
                *self.matrix.get(i, j) == want
            })
        })
    }

    /// Composition, for homomorphism checks.
    pub fn compose(&self, other: &DiscriminantAction) -> DiscriminantAction {
        assert_eq!(self.factors, other.factors);
        let raw = self.matrix.mul(&other.matrix);
        let k = self.factors.len();
        let mut m = IMat::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                m.set(i, j, num::Integer::mod_floor(raw.get(i, j), &self.factors[i]));
            }
        }
        DiscriminantAction { factors: self.factors.clone(), matrix: m }
    }
}

/// Discriminant form of a lattice. The group structure and b_L are computed
/// for any lattice; q_L is present exactly when the lattice is even.
pub fn discriminant_form(l: &Lattice) -> DiscriminantForm {
    let snf = smith_normal_form(l.gram());
    let diag_full = snf.diag.clone();
    let nontrivial: Vec<usize> =
        (0..diag_full.len()).filter(|&i| diag_full[i].abs() > Int::one()).collect();

    let mut generators = Vec::new();
    for &i in &nontrivial {
        let d = Rat::from(diag_full[i].clone());
        let g: QVec = ivec_to_q(&snf.right.col(i)).into_iter().map(|x| x / &d).collect();
        generators.push(g);
    }

    let invariant_factors: Vec<Int> = nontrivial.iter().map(|&i| diag_full[i].clone()).collect();

    let b_matrix: Vec<Vec<Rat>> = generators
        .iter()
        .map(|gi| generators.iter().map(|gj| mod_one(&l.pair_q(gi, gj))).collect())
        .collect();

    let q_values = if l.is_even() {
        Some(generators.iter().map(|g| mod_two(&l.pair_q(g, g))).collect())
    } else {
        None
    };

    DiscriminantForm {
        invariant_factors,
        generators,
        q_values,
        b_matrix,
        diag_full,
        right: snf.right,
        right_inv: snf.right_inv,
        nontrivial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{int, rat};
    use num::BigRational;

    fn q(p: i64, d: i64) -> Rat {
        BigRational::new(Int::from(p), Int::from(d))
    }

    #[test]
    fn unimodular_is_trivial() {
        let d = discriminant_form(&Lattice::hyperbolic_u());
        assert!(d.is_trivial());
        assert_eq!(d.order(), int(1));
    }

    #[test]
    fn rank_one_four() {
        // generator x/4 with q = (x/4 . x/4) = 4/16 = 1/4 mod 2Z
        let l = Lattice::rank_one(&int(4)).unwrap();
        let d = discriminant_form(&l);
        assert_eq!(d.invariant_factors(), &[int(4)]);
        assert_eq!(d.q_values().unwrap(), &[q(1, 4)]);
    }

    #[test]
    fn u_twisted_by_two() {
        // generators e/2, f/2: q ≡ 0 on both, b(g1,g2) = 1/2 mod 1
        let l = Lattice::hyperbolic_u().twist(&int(2)).unwrap();
        let d = discriminant_form(&l);
        assert_eq!(d.invariant_factors(), &[int(2), int(2)]);
        assert_eq!(d.q_values().unwrap(), &[rat(0), rat(0)]);
        assert_eq!(d.b_matrix()[0][1], q(1, 2));
        assert_eq!(d.b_matrix()[1][0], q(1, 2));
    }

    #[test]
    fn odd_lattice_has_no_q() {
        let l = Lattice::rank_one(&int(3)).unwrap();
        let d = discriminant_form(&l);
        assert_eq!(d.q_values(), Err(Error::OddLattice));
        assert_eq!(d.invariant_factors(), &[int(3)]);
    }

    #[test]
    fn order_equals_abs_det() {
        for l in [
            Lattice::hyperbolic_u().twist(&int(3)).unwrap(),
            Lattice::rank_one(&int(4))
                .unwrap()
                .direct_sum(&Lattice::hyperbolic_u().twist(&int(2)).unwrap()),
            Lattice::e8_minus(),
        ] {
            assert_eq!(discriminant_form(&l).order(), l.det().abs());
        }
    }

    #[test]
    fn even_lattice_q_b_compatibility() {
        // q(x+y) − q(x) − q(y) ≡ 2 b(x,y) mod 2Z on generator pairs
        let l = Lattice::rank_one(&int(4))
            .unwrap()
            .direct_sum(&Lattice::hyperbolic_u().twist(&int(2)).unwrap());
        let d = discriminant_form(&l);
        let gens = d.generators();
        for i in 0..gens.len() {
            for j in 0..gens.len() {
                let sum: QVec =
                    gens[i].iter().zip(&gens[j]).map(|(a, b)| a + b).collect();
                let q_sum = mod_two(&l.pair_q(&sum, &sum));
                let lhs = mod_two(&(&q_sum - &l.pair_q(&gens[i], &gens[i])
                    - &l.pair_q(&gens[j], &gens[j])));
                let rhs = mod_two(&(l.pair_q(&gens[i], &gens[j]) * rat(2)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}
