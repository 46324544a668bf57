//! Positive sign structures on the extended K3 lattice: natural sign bases
//! at rational test periods and the orientation comparison that decides
//! signedness between twisted structures.

use num::{One, Signed, Zero};

use crate::isometry::Isometry;
use crate::lattice::Lattice;
use crate::mat::{int, QMat, QVec, Rat};
use crate::mukai::{BField, ExtendedVector, LAMBDA_RANK};
use crate::{Error, Result};

/// A rational stand-in for a period point: p = x + iy with (p.p) = 0 and
/// (p.p̄) > 0, encoded as (x.x) = (y.y), (x.y) = 0, (x.x) > 0. Periods with
/// nonzero e/f components never arise from twisted periods and are
/// rejected.
#[derive(Clone, Debug)]
pub struct TestPeriod {
    x: ExtendedVector,
    y: ExtendedVector,
}

impl TestPeriod {
    pub fn new(x: ExtendedVector, y: ExtendedVector) -> Result<Self> {
        for v in [&x, &y] {
            if !v.e_part.is_zero() || !v.f_part.is_zero() {
                return Err(Error::InvalidPeriod("nonzero e/f component".into()));
            }
        }
        let xx = x.pair(&x);
        let yy = y.pair(&y);
        let xy = x.pair(&y);
        if xx != yy || !xy.is_zero() {
            return Err(Error::InvalidPeriod("(p.p) ≠ 0".into()));
        }
        if !xx.is_positive() {
            return Err(Error::InvalidPeriod("(p.p̄) ≤ 0".into()));
        }
        Ok(TestPeriod { x, y })
    }

    pub fn from_lambda(x: QVec, y: QVec) -> Result<Self> {
        Self::new(ExtendedVector::from_lambda(x), ExtendedVector::from_lambda(y))
    }

    pub fn x(&self) -> &ExtendedVector {
        &self.x
    }

    pub fn y(&self) -> &ExtendedVector {
        &self.y
    }

    /// The reference period x = e2 + f2, y = e3 + f3 — orthogonal to every
    /// polarization class e1 + d·f1.
    pub fn standard() -> Self {
        let mut x = vec![Rat::zero(); LAMBDA_RANK];
        x[crate::mukai::E2] = Rat::one();
        x[crate::mukai::F2] = Rat::one();
        let mut y = vec![Rat::zero(); LAMBDA_RANK];
        y[crate::mukai::E3] = Rat::one();
        y[crate::mukai::F3] = Rat::one();
        Self::from_lambda(x, y).expect("reference period is valid")
    }
}

/// An ordered 4-tuple of rational vectors in Λ̃_Q spanning a
/// positive-definite subspace (checked exactly via leading principal
/// minors); represents a positive sign structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignBasis {
    vectors: [ExtendedVector; 4],
}

impl SignBasis {
    pub fn new(vectors: [ExtendedVector; 4]) -> Result<Self> {
        let basis = SignBasis { vectors };
        let g = basis.gram();
        // positive-definite ⟺ all leading principal minors positive
        for k in 1..=4 {
            let mut minor = QMat::zeros(k, k);
            for i in 0..k {
                for j in 0..k {
                    minor.set(i, j, g.get(i, j).clone());
                }
            }
            if !minor.det().is_positive() {
                return Err(Error::NotPositiveDefinite);
            }
        }
        Ok(basis)
    }

    pub fn vectors(&self) -> &[ExtendedVector; 4] {
        &self.vectors
    }

    pub fn gram(&self) -> QMat {
        let mut g = QMat::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                g.set(i, j, self.vectors[i].pair(&self.vectors[j]));
            }
        }
        g
    }

    pub fn map_by(&self, phi: &Isometry) -> SignBasis {
        let m = phi.matrix().to_q();
        let apply = |v: &ExtendedVector| ExtendedVector::from_coords(&m.mul_vec(&v.to_coords()));
        SignBasis {
            vectors: [
                apply(&self.vectors[0]),
                apply(&self.vectors[1]),
                apply(&self.vectors[2]),
                apply(&self.vectors[3]),
            ],
        }
    }
}

/// The natural sign basis at a test period:
/// (exp(B)·x, exp(B)·y, Re exp(B+iω), Im exp(B+iω)), all rational.
/// Errors when the resulting 4-tuple fails to be positive-definite.
pub fn natural_sign_basis(p: &TestPeriod, b: &BField, omega: &[Rat]) -> Result<SignBasis> {
    assert_eq!(omega.len(), LAMBDA_RANK);
    let exp_b = b.exp();
    let v1 = exp_b.mul(p.x());
    let v2 = exp_b.mul(p.y());
    // Re exp(B+iω) = e + B − ((B.B)−(ω.ω))/2 · f
    let omega_norm = crate::mukai::lambda_pair(omega, omega);
    let half = Rat::new(int(1), int(2));
    let v3 = ExtendedVector::new(
        Rat::one(),
        b.coords().to_vec(),
        -((b.norm() - omega_norm) * half),
    );
    // Im exp(B+iω) = ω − (B.ω) · f
    let v4 = ExtendedVector::new(Rat::zero(), omega.to_vec(), -b.pair_lambda(omega));
    SignBasis::new([v1, v2, v3, v4])
}

/// Whether the orthogonal projection of `w` onto `span(w2)` is
/// orientation-preserving: computes the projection matrix in the `w2` basis
/// via Gram(w2)⁻¹ applied to cross-pairings, and returns det > 0. The
/// projection between two maximal positive subspaces is never singular, but
/// a zero determinant is still an error, never a silent sign.
pub fn same_orientation(w: &SignBasis, w2: &SignBasis) -> Result<bool> {
    let gram2_inv = w2.gram().inverse().expect("positive-definite Gram");
    let mut cross = QMat::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            cross.set(i, j, w2.vectors()[i].pair(&w.vectors()[j]));
        }
    }
    let proj = gram2_inv.mul(&cross);
    let det = proj.det();
    if det.is_zero() {
        return Err(Error::ProjectionSingular);
    }
    Ok(det.is_positive())
}

/// Signedness of an isometry of Λ̃ between two sign structures:
/// same_orientation(φ(W_src), W_tgt).
pub fn is_signed_between(phi: &Isometry, w_src: &SignBasis, w_tgt: &SignBasis) -> Result<bool> {
    if phi.lattice().gram() != Lattice::extended_k3().gram() {
        return Err(Error::DimensionMismatch {
            expected: crate::mukai::EXTENDED_RANK,
            got: phi.lattice().rank(),
        });
    }
    same_orientation(&w_src.map_by(phi), w_tgt)
}

/// The Kähler-class stand-in ω = e1 + f1 used by default test data.
pub fn standard_omega() -> QVec {
    let mut omega = vec![Rat::zero(); LAMBDA_RANK];
    omega[crate::mukai::E1] = Rat::one();
    omega[crate::mukai::F1] = Rat::one();
    omega
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{rat, IMat};

    #[test]
    fn natural_basis_reference_gram() {
        // x = e2+f2, y = e3+f3, B = 0, ω = e1+f1: Gram is diag(2,2,2,2)
        let w = natural_sign_basis(&TestPeriod::standard(), &BField::zero(), &standard_omega())
            .unwrap();
        let g = w.gram();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { rat(2) } else { rat(0) };
                assert_eq!(*g.get(i, j), expect);
            }
        }
        // first two vectors are exp(B)·x and exp(B)·y by construction
        assert_eq!(w.vectors()[0], TestPeriod::standard().x().clone());
    }

    #[test]
    fn orientation_self_and_swap() {
        let w = natural_sign_basis(&TestPeriod::standard(), &BField::zero(), &standard_omega())
            .unwrap();
        assert!(same_orientation(&w, &w).unwrap());
        let mut swapped = w.vectors().clone();
        swapped.swap(0, 1);
        let w_swapped = SignBasis::new(swapped).unwrap();
        assert!(!same_orientation(&w_swapped, &w).unwrap());
    }

    #[test]
    fn omega_scaling_preserves_orientation() {
        let p = TestPeriod::standard();
        let b = BField::from_abc(&crate::mat::int(3), &crate::mat::int(1), &crate::mat::int(2))
            .unwrap();
        let omega = standard_omega();
        let omega2: QVec = omega.iter().map(|x| x * rat(3)).collect();
        let w1 = natural_sign_basis(&p, &b, &omega).unwrap();
        let w2 = natural_sign_basis(&p, &b, &omega2).unwrap();
        assert!(same_orientation(&w1, &w2).unwrap());
    }

    #[test]
    fn neg_identity_is_signed_between() {
        let w = natural_sign_basis(&TestPeriod::standard(), &BField::zero(), &standard_omega())
            .unwrap();
        let neg = Isometry::neg_identity(Lattice::extended_k3());
        assert!(is_signed_between(&neg, &w, &w).unwrap());
    }

    #[test]
    fn mid_flip_is_non_signed_between_twisted_structures() {
        // id on the e/f plane ⊕ −id on Λ, between the natural bases for
        // (p, B, ω) and (−p, −B, ω)
        let b = BField::from_abc(&crate::mat::int(5), &crate::mat::int(2), &crate::mat::int(3))
            .unwrap();
        let p = TestPeriod::standard();
        let omega = standard_omega();
        let w_src = natural_sign_basis(&p, &b, &omega).unwrap();
        let p_img = TestPeriod::new(p.x().neg(), p.y().neg()).unwrap();
        let w_tgt = natural_sign_basis(&p_img, &b.neg(), &omega).unwrap();

        let mut m = IMat::identity(24).neg();
        m.set(22, 22, crate::mat::int(1));
        m.set(23, 23, crate::mat::int(1));
        let phi = Isometry::new(Lattice::extended_k3(), m).unwrap();
        assert!(!is_signed_between(&phi, &w_src, &w_tgt).unwrap());
    }

    #[test]
    fn invalid_periods_rejected() {
        let mut x = vec![Rat::zero(); LAMBDA_RANK];
        x[crate::mukai::E2] = Rat::one();
        x[crate::mukai::F2] = Rat::one();
        // y with mismatched norm
        let mut y = vec![Rat::zero(); LAMBDA_RANK];
        y[crate::mukai::E3] = Rat::one();
        y[crate::mukai::F3] = rat(2);
        assert!(TestPeriod::from_lambda(x.clone(), y).is_err());
        // nonzero e part
        let bad = ExtendedVector::new(Rat::one(), x.clone(), Rat::zero());
        assert!(TestPeriod::new(bad, ExtendedVector::from_lambda(x)).is_err());
    }

    #[test]
    fn negative_definite_tuple_rejected() {
        let e8dir = ExtendedVector::from_lambda({
            let mut v = vec![Rat::zero(); LAMBDA_RANK];
            v[0] = Rat::one();
            v
        });
        let mk = |i: usize| {
            ExtendedVector::from_lambda({
                let mut v = vec![Rat::zero(); LAMBDA_RANK];
                v[i] = Rat::one();
                v
            })
        };
        assert_eq!(
            SignBasis::new([e8dir, mk(2), mk(4), mk(6)]).err(),
            Some(Error::NotPositiveDefinite)
        );
    }
}
