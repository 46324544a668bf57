//! Isometries of lattices and rational quadratic spaces: reflections,
//! Cartan–Dieudonné decomposition, spinor norms at the real and p-adic
//! places, discriminant actions, Nikulin-style gluing, and a seeded
//! reflection-word sampler for O♯ elements.

use num::{BigInt, Integer as NumInteger, One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::disc::{discriminant_form, DiscriminantAction, DiscriminantForm};
use crate::lattice::Lattice;
use crate::mat::{int, ivec_to_q, IMat, IVec, Int, QMat, QVec, Rat};
use crate::sublattice::Sublattice;
use crate::{Error, Result};

/// A place of Q: the real place or a finite prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

/// A square class of Q at a place. Real classes are signs; p-adic classes
/// are tracked symbolically by a canonical unit representative and the
/// parity of the valuation — never by p-adic approximation.
///
/// For odd p the unit is 1 or the least positive non-residue mod p; for
/// p = 2 it lives in {1,3,5,7} mod 8.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareClass {
    Real { sign: i8 },
    Padic { p: u64, unit: u64, val_parity: u8 },
}

impl SquareClass {
    pub fn one(place: Place) -> SquareClass {
        match place {
            Place::Real => SquareClass::Real { sign: 1 },
            Place::Prime(p) => SquareClass::Padic { p, unit: 1, val_parity: 0 },
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Real { sign } => *sign == 1,
            SquareClass::Padic { unit, val_parity, .. } => *unit == 1 && *val_parity == 0,
        }
    }

    pub fn sign(&self) -> Option<i8> {
        match self {
            SquareClass::Real { sign } => Some(*sign),
            _ => None,
        }
    }

    /// Square class of a nonzero rational at a place.
    pub fn of_rational(q: &Rat, place: Place) -> SquareClass {
        assert!(!q.is_zero(), "square class of zero");
        match place {
            Place::Real => SquareClass::Real { sign: if q.is_positive() { 1 } else { -1 } },
            Place::Prime(p) => {
                let pb = Int::from(p);
                let (vn, n0) = strip(q.numer(), &pb);
                let (vd, d0) = strip(q.denom(), &pb);
                let val_parity = ((vn - vd).rem_euclid(2)) as u8;
                let unit = if p == 2 {
                    // n0·d0⁻¹ mod 8; both odd, so d0 is invertible mod 8
                    let m8 = int(8);
                    let d_inv = mod_inverse(&d0, &m8);
                    let r = (n0 * d_inv).mod_floor(&m8);
                    r.to_string().parse::<u64>().unwrap()
                } else {
                    let d_inv = mod_inverse(&d0, &pb);
                    let r = (n0 * d_inv).mod_floor(&pb);
                    if legendre_is_residue(&r, p) {
                        1
                    } else {
                        least_nonresidue(p)
                    }
                };
                SquareClass::Padic { p, unit, val_parity }
            }
        }
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        match (self, other) {
            (SquareClass::Real { sign: a }, SquareClass::Real { sign: b }) => {
                SquareClass::Real { sign: a * b }
            }
            (
                SquareClass::Padic { p, unit: u1, val_parity: v1 },
                SquareClass::Padic { p: p2, unit: u2, val_parity: v2 },
            ) => {
                assert_eq!(p, p2, "square classes at different places");
                let unit = if *p == 2 {
                    (u1 * u2) % 8
                } else {
                    // units are 1 or the fixed non-residue; classes multiply
                    // like signs
                    if u1 == u2 {
                        1
                    } else {
                        least_nonresidue(*p)
                    }
                };
                SquareClass::Padic { p: *p, unit, val_parity: (v1 + v2) % 2 }
            }
            _ => panic!("square classes at different places"),
        }
    }
}

fn strip(n: &Int, p: &Int) -> (i64, Int) {
    let mut v = 0i64;
    let mut m = n.clone();
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    (v, m)
}

fn mod_inverse(a: &Int, m: &Int) -> Int {
    let e = NumInteger::extended_gcd(&a.mod_floor(m), m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// Euler's criterion with exact modular exponentiation.
fn legendre_is_residue(a: &Int, p: u64) -> bool {
    let pb = Int::from(p);
    let a = a.mod_floor(&pb);
    assert!(!a.is_zero(), "legendre of multiple of p");
    let exp = (&pb - 1) / 2;
    a.modpow(&exp, &pb).is_one()
}

fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&r| !legendre_is_residue(&Int::from(r), p)).expect("odd prime has non-residues")
}

/// The image of an isometry under (det, spin_real). The signed isometries
/// are exactly those landing in Γ⁺₀ = {(+1,+1),(−1,−1)}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GammaZeroElement {
    pub det_part: i8,
    pub spin_part: i8,
}

impl GammaZeroElement {
    pub fn in_gamma_plus(&self) -> bool {
        self.det_part == self.spin_part
    }
}

/// An isometry of a rational quadratic space, given by its Gram matrix and
/// an invertible matrix preserving it (column-vector action).
#[derive(Clone, Debug)]
pub struct RationalIsometry {
    gram: QMat,
    matrix: QMat,
}

impl RationalIsometry {
    pub fn new(gram: QMat, matrix: QMat) -> Result<Self> {
        let n = gram.rows();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.rows() });
        }
        let check = matrix.transpose().mul(&gram).mul(&matrix);
        for i in 0..n {
            for j in 0..n {
                if check.get(i, j) != gram.get(i, j) {
                    return Err(Error::NotIsometry(i, j));
                }
            }
        }
        Ok(RationalIsometry { gram, matrix })
    }

    pub fn identity(gram: QMat) -> Self {
        let n = gram.rows();
        RationalIsometry { gram, matrix: QMat::identity(n) }
    }

    pub fn gram(&self) -> &QMat {
        &self.gram
    }

    pub fn matrix(&self) -> &QMat {
        &self.matrix
    }

    /// τ_v : w ↦ w − 2(w.v)/(v.v)·v. Errors on isotropic v.
    pub fn reflection(gram: QMat, v: &[Rat]) -> Result<Self> {
        let matrix = reflection_matrix(&gram, v)?;
        Ok(RationalIsometry { gram, matrix })
    }

    pub fn compose(&self, other: &RationalIsometry) -> RationalIsometry {
        assert_eq!(self.gram, other.gram);
        RationalIsometry { gram: self.gram.clone(), matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn det_sign(&self) -> i8 {
        if self.matrix.det().is_positive() {
            1
        } else {
            -1
        }
    }

    /// Reflection vectors r₁,…,r_k with τ_{r₁}∘…∘τ_{r_k} equal to this
    /// isometry; at most 2·rank of them, every one anisotropic.
    pub fn cartan_dieudonne(&self) -> Vec<QVec> {
        cd_recurse(&self.gram, &self.matrix, false)
    }

    /// Same, with the candidate scan order reversed — used to confirm that
    /// spinor norms do not depend on the decomposition.
    pub fn cartan_dieudonne_reversed(&self) -> Vec<QVec> {
        cd_recurse(&self.gram, &self.matrix, true)
    }

    /// Product of the square classes of (v.v) over a Cartan–Dieudonné
    /// decomposition, reduced at the place. Well-defined independently of
    /// the decomposition.
    pub fn spinor_norm(&self, place: Place) -> SquareClass {
        let mut acc = SquareClass::one(place);
        for v in self.cartan_dieudonne() {
            let n = self.gram.pair(&v, &v);
            acc = acc.mul(&SquareClass::of_rational(&n, place));
        }
        acc
    }

    pub fn apply(&self, v: &[Rat]) -> QVec {
        self.matrix.mul_vec(v)
    }
}

fn reflection_matrix(gram: &QMat, v: &[Rat]) -> Result<QMat> {
    let n = gram.rows();
    assert_eq!(v.len(), n);
    let vnorm = gram.pair(v, v);
    if vnorm.is_zero() {
        return Err(Error::IsotropicReflection);
    }
    let gv = gram.mul_vec(v); // (e_j . v) = (G v)_j for symmetric G
    let two = Rat::from(int(2));
    let mut m = QMat::identity(n);
    for j in 0..n {
        let c = &two * &gv[j] / &vnorm;
        if c.is_zero() {
            continue;
        }
        for i in 0..n {
            let val = m.get(i, j) - &c * &v[i];
            m.set(i, j, val);
        }
    }
    Ok(m)
}

/// Constructive Cartan–Dieudonné: pick an anisotropic vector y from a fixed
/// candidate list (basis vectors, then pairwise sums), peel off at most two
/// reflections so that the isometry fixes y, and recurse on y^⊥.
fn cd_recurse(gram: &QMat, m: &QMat, reversed: bool) -> Vec<QVec> {
    let n = gram.rows();
    if n == 0 || m.is_identity() {
        return Vec::new();
    }

    let mut candidates: Vec<QVec> = Vec::new();
    for i in 0..n {
        let mut v = vec![Rat::zero(); n];
        v[i] = Rat::one();
        candidates.push(v);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut v = vec![Rat::zero(); n];
            v[i] = Rat::one();
            v[j] = Rat::one();
            candidates.push(v);
        }
    }
    if reversed {
        candidates.reverse();
    }

    let anisotropic = |v: &QVec| !gram.pair(v, v).is_zero();
    let moved = |v: &QVec| m.mul_vec(v) != *v;
    let y = candidates
        .iter()
        .find(|v| anisotropic(v) && moved(v))
        .or_else(|| candidates.iter().find(|v| anisotropic(v)))
        .expect("non-degenerate space has anisotropic candidates")
        .clone();

    let my = m.mul_vec(&y);
    let mut reflections: Vec<QVec> = Vec::new();
    let m_fixing_y = if my == y {
        m.clone()
    } else {
        let u: QVec = my.iter().zip(&y).map(|(a, b)| a - b).collect();
        if !gram.pair(&u, &u).is_zero() {
            let tau = reflection_matrix(gram, &u).expect("anisotropic");
            reflections.push(u);
            tau.mul(m)
        } else {
            // (M y + y) has norm 4(y.y) ≠ 0 here
            let w: QVec = my.iter().zip(&y).map(|(a, b)| a + b).collect();
            let tau_w = reflection_matrix(gram, &w).expect("anisotropic");
            let tau_y = reflection_matrix(gram, &y).expect("anisotropic");
            reflections.push(w);
            reflections.push(y.clone());
            tau_y.mul(&tau_w).mul(m)
        }
    };

    // restrict to y^⊥ and recurse
    let functional = QMat::from_rows(vec![gram.mul_vec(&y)]);
    let perp = functional.kernel(); // n−1 vectors, since y is anisotropic
    debug_assert_eq!(perp.len(), n - 1);
    let mut pcols: Vec<QVec> = perp.clone();
    pcols.push(y);
    let p = QMat::from_rows(pcols).transpose(); // columns: y^⊥ basis, then y
    let t = p.inverse().expect("basis of the full space").mul(&m_fixing_y).mul(&p);
    let mut sub = QMat::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            sub.set(i, j, t.get(i, j).clone());
        }
    }
    let mut sub_gram = QMat::zeros(n - 1, n - 1);
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            sub_gram.set(i, j, gram.pair(&perp[i], &perp[j]));
        }
    }
    for c in cd_recurse(&sub_gram, &sub, reversed) {
        // lift sub-coordinates back to the current space
        let mut v = vec![Rat::zero(); n];
        for (ci, pv) in c.iter().zip(&perp) {
            for (vi, pvi) in v.iter_mut().zip(pv) {
                *vi += ci * pvi;
            }
        }
        reflections.push(v);
    }
    reflections
}

/// An integral isometry of a lattice: matrixᵀ·gram·matrix = gram and
/// |det| = 1, validated at construction.
#[derive(Clone, PartialEq, Eq)]
pub struct Isometry {
    lattice: Lattice,
    matrix: IMat,
}

impl Isometry {
    pub fn new(lattice: Lattice, matrix: IMat) -> Result<Self> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: matrix.rows() });
        }
        let check = matrix.transpose().mul(lattice.gram()).mul(&matrix);
        for i in 0..n {
            for j in 0..n {
                if check.get(i, j) != lattice.gram().get(i, j) {
                    return Err(Error::NotIsometry(i, j));
                }
            }
        }
        if matrix.det().abs() != int(1) {
            return Err(Error::NotUnimodular);
        }
        Ok(Isometry { lattice, matrix })
    }

    pub fn identity(lattice: Lattice) -> Self {
        let n = lattice.rank();
        Isometry { lattice, matrix: IMat::identity(n) }
    }

    pub fn neg_identity(lattice: Lattice) -> Self {
        let n = lattice.rank();
        Isometry { lattice, matrix: IMat::identity(n).neg() }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IMat {
        &self.matrix
    }

    pub fn apply(&self, v: &[Int]) -> IVec {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        assert_eq!(self.lattice.gram(), other.lattice.gram());
        Isometry { lattice: self.lattice.clone(), matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn det(&self) -> i8 {
        if self.matrix.det().is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn to_rational(&self) -> RationalIsometry {
        RationalIsometry { gram: self.lattice.gram().to_q(), matrix: self.matrix.to_q() }
    }

    pub fn spinor_norm(&self, place: Place) -> SquareClass {
        self.to_rational().spinor_norm(place)
    }

    /// (det, spin_real) bookkeeping pair.
    pub fn gamma_zero(&self) -> Result<GammaZeroElement> {
        let (s_plus, _) = self.lattice.signature();
        if s_plus == 0 {
            return Err(Error::NoPositivePart);
        }
        let spin = self.spinor_norm(Place::Real).sign().expect("real place");
        Ok(GammaZeroElement { det_part: self.det(), spin_part: spin })
    }

    /// det(φ)·spin(φ_R) = +1, the signed isometries O⁺.
    pub fn is_signed(&self) -> Result<bool> {
        Ok(self.gamma_zero()?.in_gamma_plus())
    }

    pub fn discriminant_action(&self) -> DiscriminantAction {
        discriminant_form(&self.lattice).action_of(&self.matrix)
    }

    /// Same, against a precomputed discriminant form (the sampler calls this
    /// in a loop).
    pub fn discriminant_action_with(&self, disc: &DiscriminantForm) -> DiscriminantAction {
        disc.action_of(&self.matrix)
    }

    pub fn is_o_sharp(&self) -> bool {
        self.discriminant_action().is_identity()
    }
}

impl std::fmt::Debug for Isometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Isometry of {:?}: {:?}", self.lattice, self.matrix)
    }
}

/// Extends an isometry of a primitive sublattice by the identity on its
/// orthogonal complement, verifying that the rational extension stabilizes
/// the full lattice. Fails exactly when the discriminant action of `phi_s`
/// obstructs integrality.
pub fn glue_extend(l: &Lattice, s: &Sublattice, phi_s: &Isometry) -> Result<Isometry> {
    if s.ambient().gram() != l.gram() {
        return Err(Error::DimensionMismatch { expected: l.rank(), got: s.ambient().rank() });
    }
    if phi_s.lattice().gram() != s.induced_gram() {
        return Err(Error::NotIsometry(0, 0));
    }
    if !s.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let t = s.orthogonal_complement();
    if s.rank() + t.rank() != l.rank() {
        return Err(Error::Degenerate);
    }
    let n = l.rank();
    let k = s.rank();

    // columns of p: basis of S, then basis of S^⊥
    let mut cols: Vec<QVec> = Vec::with_capacity(n);
    for v in s.basis_vectors() {
        cols.push(ivec_to_q(&v));
    }
    for v in t.basis_vectors() {
        cols.push(ivec_to_q(&v));
    }
    let p = QMat::from_rows(cols).transpose();

    let mut block = QMat::identity(n);
    for i in 0..k {
        for j in 0..k {
            block.set(i, j, Rat::from(phi_s.matrix().get(i, j).clone()));
        }
    }
    let phi = p.mul(&block).mul(&p.inverse()?);
    let Some(phi_int) = phi.to_int() else {
        return Err(Error::GlueNotIntegral);
    };
    Isometry::new(l.clone(), phi_int)
}

/// Deterministic-for-seed sample of O♯(L) elements: words in reflections
/// τ_v for lattice vectors v of self-pairing ±2 found within the coordinate
/// bound (only integral τ_v are kept), filtered to trivial discriminant
/// action. An empty result is legal.
pub fn o_sharp_sampler(
    l: &Lattice,
    word_length: usize,
    coord_bound: u32,
    seed: u64,
) -> Vec<Isometry> {
    o_sharp_sampler_with(l, word_length, coord_bound, seed, 32, &[-2, 2])
}

/// Generalized sampler: arbitrary reflection-norm set and sample count.
/// Lattices whose form is a multiple of a primitive form have no (±2)-vectors
/// at all; their integral reflections come from other norms.
pub fn o_sharp_sampler_with(
    l: &Lattice,
    word_length: usize,
    coord_bound: u32,
    seed: u64,
    count: usize,
    norms: &[i64],
) -> Vec<Isometry> {
    assert!(coord_bound >= 1);
    if word_length == 0 {
        return vec![Isometry::identity(l.clone())];
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let pool = reflection_pool(l, coord_bound, norms, &mut rng);
    if pool.is_empty() {
        return Vec::new();
    }
    let disc = discriminant_form(l);
    let mut seen: Vec<IMat> = Vec::new();
    let mut out = Vec::new();
    for _ in 0..count {
        let mut m = IMat::identity(l.rank());
        for _ in 0..word_length {
            let pick = rng.random_range(0..pool.len());
            m = pool[pick].1.mul(&m);
        }
        if seen.contains(&m) {
            continue;
        }
        seen.push(m.clone());
        let iso = Isometry::new(l.clone(), m).expect("reflection words are isometries");
        if iso.discriminant_action_with(&disc).is_identity() {
            out.push(iso);
        }
    }
    out
}

/// Candidate reflection vectors and their integral reflection matrices.
fn reflection_pool(
    l: &Lattice,
    coord_bound: u32,
    norms: &[i64],
    rng: &mut StdRng,
) -> Vec<(IVec, IMat)> {
    let rank = l.rank();
    let norm_set: Vec<Int> = norms.iter().map(|&n| int(n)).collect();
    let mut pool: Vec<(IVec, IMat)> = Vec::new();
    let mut push = |v: IVec, pool: &mut Vec<(IVec, IMat)>| {
        if !norm_set.contains(&l.norm(&v)) {
            return;
        }
        if pool.iter().any(|(w, _)| *w == v) {
            return;
        }
        if let Some(m) = integral_reflection(l, &v) {
            pool.push((v, m));
        }
    };
    let box_size = ((2 * coord_bound as u64) + 1).checked_pow(rank as u32);
    match box_size {
        Some(sz) if sz <= 200_000 => {
            for v in full_box(rank, coord_bound) {
                push(v, &mut pool);
            }
        }
        _ => {
            // rank too large for the full box: seeded sparse sampling
            let b = coord_bound as i64;
            for _ in 0..4000 {
                let support = rng.random_range(1..=3.min(rank));
                let mut v = vec![Int::zero(); rank];
                for _ in 0..support {
                    let idx = rng.random_range(0..rank);
                    let c = rng.random_range(-b..=b);
                    v[idx] = int(c);
                }
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                push(v, &mut pool);
            }
        }
    }
    pool
}

fn full_box(rank: usize, bound: u32) -> Vec<IVec> {
    let b = bound as i64;
    let mut out = Vec::new();
    let mut current = vec![-b; rank];
    loop {
        if current.iter().any(|&c| c != 0) {
            out.push(current.iter().map(|&c| int(c)).collect());
        }
        let mut i = rank;
        loop {
            if i == 0 {
                return out;
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

/// Integer matrix of τ_v on L when integral: requires (v.v) | 2(w.v) for
/// every basis vector w.
fn integral_reflection(l: &Lattice, v: &[Int]) -> Option<IMat> {
    let vnorm = l.norm(v);
    if vnorm.is_zero() {
        return None;
    }
    let gv = l.gram().mul_vec(v);
    let n = l.rank();
    let mut m = IMat::identity(n);
    for j in 0..n {
        let num = int(2) * &gv[j];
        let (q, r) = num.div_rem(&vnorm);
        if !r.is_zero() {
            return None;
        }
        if q.is_zero() {
            continue;
        }
        for i in 0..n {
            let val = m.get(i, j) - &q * &v[i];
            m.set(i, j, val);
        }
    }
    Some(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::rat;

    fn u() -> Lattice {
        Lattice::hyperbolic_u()
    }

    fn qv(vals: &[i64]) -> QVec {
        vals.iter().map(|&v| rat(v)).collect()
    }

    #[test]
    fn verify_isometry_examples() {
        assert!(Isometry::new(u(), IMat::identity(2)).is_ok());
        assert!(Isometry::new(u(), IMat::from_i64(&[&[0, 1], &[1, 0]])).is_ok());
        assert_eq!(
            Isometry::new(u(), IMat::from_i64(&[&[1, 1], &[0, 1]])),
            Err(Error::NotIsometry(0, 1))
        );
    }

    #[test]
    fn reflection_examples() {
        let g = u().gram().to_q();
        // τ_{e+f}: e ↦ −f, f ↦ −e
        let t = RationalIsometry::reflection(g.clone(), &qv(&[1, 1])).unwrap();
        assert_eq!(t.apply(&qv(&[1, 0])), qv(&[0, -1]));
        assert_eq!(t.apply(&qv(&[0, 1])), qv(&[-1, 0]));
        // τ_{e−f}: e ↦ f, f ↦ e
        let t = RationalIsometry::reflection(g.clone(), &qv(&[1, -1])).unwrap();
        assert_eq!(t.apply(&qv(&[1, 0])), qv(&[0, 1]));
        // involution
        assert!(t.compose(&t).matrix().is_identity());
        // isotropic vector rejected
        assert_eq!(
            RationalIsometry::reflection(g, &qv(&[1, 0])).err(),
            Some(Error::IsotropicReflection)
        );
    }

    fn compose_reflections(gram: &QMat, vs: &[QVec]) -> QMat {
        let mut m = QMat::identity(gram.rows());
        for v in vs {
            m = m.mul(&reflection_matrix(gram, v).unwrap());
        }
        m
    }

    #[test]
    fn cartan_dieudonne_examples() {
        let g = u().gram().to_q();
        // identity → empty list
        let id = RationalIsometry::identity(g.clone());
        assert!(id.cartan_dieudonne().is_empty());

        // a single reflection is recovered (up to scaling)
        let t = RationalIsometry::reflection(g.clone(), &qv(&[1, 1])).unwrap();
        let vs = t.cartan_dieudonne();
        assert_eq!(compose_reflections(&g, &vs), *t.matrix());

        // −id on U decomposes into two reflections
        let neg = RationalIsometry::new(g.clone(), QMat::identity(2).mul(&QMat::from_rows(vec![qv(&[-1, 0]), qv(&[0, -1])]))).unwrap();
        let vs = neg.cartan_dieudonne();
        assert_eq!(vs.len(), 2);
        assert_eq!(compose_reflections(&g, &vs), *neg.matrix());
        for v in &vs {
            assert!(!g.pair(v, v).is_zero());
        }
    }

    #[test]
    fn spinor_norm_examples() {
        let g = u().gram().to_q();
        let t = RationalIsometry::reflection(g.clone(), &qv(&[1, 1])).unwrap();
        assert_eq!(t.spinor_norm(Place::Real), SquareClass::Real { sign: 1 });

        let neg = Isometry::neg_identity(u());
        assert_eq!(neg.spinor_norm(Place::Real), SquareClass::Real { sign: -1 });

        let id = RationalIsometry::identity(g);
        assert!(id.spinor_norm(Place::Real).is_trivial());
    }

    #[test]
    fn is_signed_examples() {
        assert!(Isometry::identity(u()).is_signed().unwrap());
        // −id on U: det = 1, spin_real = −1
        assert!(!Isometry::neg_identity(u()).is_signed().unwrap());
        // −id on the extended K3 lattice is signed
        assert!(Isometry::neg_identity(Lattice::extended_k3()).is_signed().unwrap());
    }

    #[test]
    fn square_class_arithmetic() {
        let two = rat(2);
        let c = SquareClass::of_rational(&two, Place::Prime(7));
        assert_eq!(c, SquareClass::Padic { p: 7, unit: 1, val_parity: 0 });
        let m7 = SquareClass::of_rational(&rat(-7), Place::Prime(7));
        // −7 = 7·(−1); −1 ≡ 6 mod 7 is a non-residue (squares are 1,2,4)
        assert_eq!(m7, SquareClass::Padic { p: 7, unit: 3, val_parity: 1 });
        assert!(m7.mul(&m7).is_trivial());

        let half = Rat::new(int(1), int(2));
        let c = SquareClass::of_rational(&half, Place::Prime(2));
        assert_eq!(c, SquareClass::Padic { p: 2, unit: 1, val_parity: 1 });
        let five = SquareClass::of_rational(&rat(5), Place::Prime(2));
        assert_eq!(five, SquareClass::Padic { p: 2, unit: 5, val_parity: 0 });
    }

    #[test]
    fn discriminant_action_examples() {
        // −id on ⟨4⟩: x ↦ −x on Z/4, not in O♯
        let a4 = Lattice::rank_one(&int(4)).unwrap();
        assert!(!Isometry::neg_identity(a4).is_o_sharp());

        // id ⊕ −id_{U(2)} on ⟨4⟩⊕U(2) acts trivially on the discriminant
        let l = Lattice::rank_one(&int(4))
            .unwrap()
            .direct_sum(&Lattice::hyperbolic_u().twist(&int(2)).unwrap());
        let m = IMat::from_i64(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]);
        let iso = Isometry::new(l, m).unwrap();
        assert!(iso.is_o_sharp());

        // the identity is always in O♯
        assert!(Isometry::identity(Lattice::rank_one(&int(4)).unwrap()).is_o_sharp());
    }

    #[test]
    fn glue_extend_examples() {
        // S = L: the extension is phi_S itself
        let l = u();
        let s = Sublattice::new(l.clone(), vec![vec![int(1), int(0)], vec![int(0), int(1)]])
            .unwrap();
        let swap = Isometry::new(l.clone(), IMat::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        let ext = glue_extend(&l, &s, &swap).unwrap();
        assert_eq!(ext.matrix(), swap.matrix());

        // L = U ⊕ U, S = first U, phi = −id → −id ⊕ id
        let uu = l.direct_sum(&u());
        let s = Sublattice::new(
            uu.clone(),
            vec![vec![int(1), int(0), int(0), int(0)], vec![int(0), int(1), int(0), int(0)]],
        )
        .unwrap();
        let phi = Isometry::neg_identity(s.induced_lattice().unwrap());
        let ext = glue_extend(&uu, &s, &phi).unwrap();
        let expect = IMat::from_i64(&[
            &[-1, 0, 0, 0],
            &[0, -1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ]);
        assert_eq!(ext.matrix(), &expect);

        // restriction checks: extension acts as phi on S, id on S^⊥
        let t = s.orthogonal_complement();
        for v in t.basis_vectors() {
            assert_eq!(ext.apply(&v), v);
        }
    }

    #[test]
    fn glue_extend_blocked_by_discriminant() {
        // −id on ⟨4⟩ inside ⟨4⟩⊕⟨−4⟩ glued with identity is not integral:
        // the glue group needs the discriminant action to match
        let a4 = Lattice::rank_one(&int(4)).unwrap();
        let am4 = Lattice::rank_one(&int(-4)).unwrap();
        let l0 = a4.direct_sum(&am4);
        // index-4 overlattice of ⟨4⟩⊕⟨−4⟩ generated by (1/2,1/2): gram of
        // basis (v, (v+w)/2) where v=(1,0), w=(0,1)
        let g = IMat::from_i64(&[&[4, 2], &[2, 0]]);
        let l = Lattice::new(g, None).unwrap();
        // S = span of first basis vector (the ⟨4⟩ part), primitive in l
        let s = Sublattice::new(l.clone(), vec![vec![int(1), int(0)]]).unwrap();
        assert!(s.is_primitive());
        let phi = Isometry::neg_identity(s.induced_lattice().unwrap());
        assert_eq!(glue_extend(&l, &s, &phi), Err(Error::GlueNotIntegral));
        // sanity: in the split sum it would have worked
        let s0 = Sublattice::new(l0.clone(), vec![vec![int(1), int(0)]]).unwrap();
        let phi0 = Isometry::neg_identity(s0.induced_lattice().unwrap());
        assert!(glue_extend(&l0, &s0, &phi0).is_ok());
    }

    #[test]
    fn sampler_on_u() {
        // O(U) has four elements; every sampled word lands among them
        let all: Vec<IMat> = vec![
            IMat::identity(2),
            IMat::identity(2).neg(),
            IMat::from_i64(&[&[0, 1], &[1, 0]]),
            IMat::from_i64(&[&[0, -1], &[-1, 0]]),
        ];
        for seed in [0, 1, 7] {
            for iso in o_sharp_sampler(&u(), 3, 1, seed) {
                assert!(all.contains(iso.matrix()));
            }
        }
        // word length 0 → identity
        let ws = o_sharp_sampler(&u(), 0, 1, 5);
        assert_eq!(ws.len(), 1);
        assert!(ws[0].matrix().is_identity());
    }

    #[test]
    fn sampler_on_k3_lambda() {
        let lambda = Lattice::k3_lambda();
        let sample = o_sharp_sampler(&lambda, 4, 2, 1);
        assert!(!sample.is_empty());
        for iso in &sample {
            assert!(iso.is_o_sharp());
        }
    }
}
