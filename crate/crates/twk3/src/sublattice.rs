//! Sublattices of a fixed ambient lattice: saturation, primitivity,
//! orthogonal complements.

use num::{One, Zero};

use crate::lattice::Lattice;
use crate::mat::{IMat, IVec, Int, QMat};
use crate::snf::{integer_kernel, saturate_rows, smith_normal_form};
use crate::{Error, Result};

/// A sublattice given by a basis (rows, in ambient coordinates) together
/// with its induced Gram matrix. The basis is linearly independent over Q;
/// primitivity is a queryable predicate, not an invariant.
#[derive(Clone, Debug)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IMat,
    induced: IMat,
}

impl Sublattice {
    pub fn new(ambient: Lattice, basis: Vec<IVec>) -> Result<Self> {
        let k = basis.len();
        for row in &basis {
            if row.len() != ambient.rank() {
                return Err(Error::DimensionMismatch { expected: ambient.rank(), got: row.len() });
            }
        }
        let b = IMat::from_rows(basis);
        if k > 0 && b.to_q().rank() != k {
            return Err(Error::DependentBasis);
        }
        let induced = induced_gram(&ambient, &b);
        Ok(Sublattice { ambient, basis: b, induced })
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &IMat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<IVec> {
        self.basis.row_vecs()
    }

    pub fn induced_gram(&self) -> &IMat {
        &self.induced
    }

    /// The induced form as a lattice; fails when the restriction of the
    /// ambient form to this sublattice is degenerate.
    pub fn induced_lattice(&self) -> Result<Lattice> {
        Lattice::new(self.induced.clone(), None)
    }

    /// A sublattice is primitive iff it is saturated in the ambient lattice,
    /// iff the Smith form of its basis matrix has all invariant factors 1.
    pub fn is_primitive(&self) -> bool {
        smith_normal_form(&self.basis).nontrivial_factors().is_empty()
    }

    /// Smallest saturated sublattice containing this one; equal to it iff
    /// primitive.
    pub fn saturation(&self) -> Sublattice {
        let rows = saturate_rows(&self.basis);
        let b = IMat::from_rows(rows);
        let induced = induced_gram(&self.ambient, &b);
        Sublattice { ambient: self.ambient.clone(), basis: b, induced }
    }

    /// The saturated sublattice `{v | (v.s) = 0 for all s here}`, computed
    /// by an integer kernel (kernels of integer matrices are saturated).
    pub fn orthogonal_complement(&self) -> Sublattice {
        let pairing_map = self.basis.mul(self.ambient.gram());
        let kernel = integer_kernel(&pairing_map);
        let b = IMat::from_rows(kernel);
        let induced = induced_gram(&self.ambient, &b);
        Sublattice { ambient: self.ambient.clone(), basis: b, induced }
    }

    /// Rational coordinates of `v` in this sublattice's basis, if `v` lies
    /// in the Q-span.
    pub fn q_coordinates(&self, v: &[Int]) -> Option<Vec<crate::mat::Rat>> {
        let k = self.rank();
        let bt = self.basis.to_q().transpose(); // n×k, columns are basis
        // solve bt · x = v in the least-squares-free exact sense: use any k
        // independent rows of bt
        let mut sys = QMat::zeros(k, k);
        let mut rhs = QMat::zeros(k, 1);
        let mut picked = Vec::new();
        let mut r = 0;
        for row in 0..bt.rows() {
            if r == k {
                break;
            }
            let mut trial = picked.clone();
            trial.push(row);
            let m = QMat::from_rows(trial.iter().map(|&i| bt.row(i)).collect());
            if m.rank() == trial.len() {
                picked = trial;
                r += 1;
            }
        }
        if r < k {
            return None;
        }
        for (i, &row) in picked.iter().enumerate() {
            for j in 0..k {
                sys.set(i, j, bt.get(row, j).clone());
            }
            rhs.set(i, 0, crate::mat::Rat::from(v[row].clone()));
        }
        let x = sys.solve(&rhs).ok()?;
        let coords: Vec<crate::mat::Rat> = (0..k).map(|i| x.get(i, 0).clone()).collect();
        // verify on all rows, not just the picked ones
        for row in 0..bt.rows() {
            let mut acc = crate::mat::Rat::zero();
            for j in 0..k {
                acc += bt.get(row, j) * &coords[j];
            }
            if acc != crate::mat::Rat::from(v[row].clone()) {
                return None;
            }
        }
        Some(coords)
    }

    /// Whether `v` lies in the sublattice itself (integral coordinates).
    pub fn contains(&self, v: &[Int]) -> bool {
        self.q_coordinates(v).is_some_and(|c| c.iter().all(|x| x.is_integer()))
    }
}

fn induced_gram(ambient: &Lattice, basis: &IMat) -> IMat {
    basis.mul(ambient.gram()).mul(&basis.transpose())
}

/// Span of a single vector, as a sublattice.
pub fn span(ambient: &Lattice, v: IVec) -> Result<Sublattice> {
    Sublattice::new(ambient.clone(), vec![v])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::int;

    fn u() -> Lattice {
        Lattice::hyperbolic_u()
    }

    #[test]
    fn complement_of_isotropic_line_is_itself() {
        // (e.e) = 0, (e.f) = 1: the complement of span(e) in U is span(e)
        let s = span(&u(), vec![int(1), int(0)]).unwrap();
        let c = s.orthogonal_complement();
        assert_eq!(c.rank(), 1);
        assert!(c.contains(&[int(1), int(0)]));
        assert!(!c.contains(&[int(0), int(1)]));
    }

    #[test]
    fn complement_of_e_plus_f() {
        let s = span(&u(), vec![int(1), int(1)]).unwrap();
        let c = s.orthogonal_complement();
        assert_eq!(c.rank(), 1);
        assert!(c.contains(&[int(1), int(-1)]));
    }

    #[test]
    fn saturation_examples() {
        // span(2e) saturates to span(e)
        let s = span(&u(), vec![int(2), int(0)]).unwrap();
        assert!(!s.is_primitive());
        let sat = s.saturation();
        assert!(sat.is_primitive());
        assert!(sat.contains(&[int(1), int(0)]));

        // span(e+f, e−f) has index 2; saturation is all of U
        let s = Sublattice::new(u(), vec![vec![int(1), int(1)], vec![int(1), int(-1)]]).unwrap();
        let sat = s.saturation();
        assert_eq!(sat.basis().det().abs(), int(1));

        // idempotence on a primitive sublattice
        let p = span(&u(), vec![int(1), int(0)]).unwrap();
        assert!(p.is_primitive());
        let psat = p.saturation();
        assert_eq!(psat.basis(), p.basis());
    }

    #[test]
    fn ell_complement_in_lambda() {
        let lambda = Lattice::k3_lambda();
        let ell = span(&lambda, Lattice::ell_vector(1)).unwrap();
        let c = ell.orthogonal_complement();
        assert_eq!(c.rank(), 21);
        let ind = c.induced_lattice().unwrap();
        assert_eq!(ind.signature(), (2, 19));
    }

    #[test]
    fn double_complement_is_saturation() {
        let s = Sublattice::new(u(), vec![vec![int(2), int(2)]]).unwrap();
        let dd = s.orthogonal_complement().orthogonal_complement();
        let sat = s.saturation();
        assert_eq!(dd.rank(), sat.rank());
        for v in sat.basis_vectors() {
            assert!(dd.contains(&v));
        }
        for v in dd.basis_vectors() {
            assert!(sat.contains(&v));
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let err = Sublattice::new(u(), vec![vec![int(1), int(0)], vec![int(2), int(0)]]);
        assert!(matches!(err, Err(Error::DependentBasis)));
    }
}
