//! Fox–Milnor style concordance obstructions: the difference triple of two
//! links, metabolizer verification, the factorization identity for the
//! extended polynomial, and signature certificates.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::alexander::{alex_vars, conway_det};
use crate::mat::Matrix;
use crate::ring::{GroundRing, LaurentPoly, PolyMatrix};
use crate::seifert::{psi_on_h, BilinearFamily, SeifertError, SeifertTriple, Symmetry};
use crate::signatures::{concordance_admissible, signature_at, EvalPoint, SignatureResult};
use crate::Rat;

/// The block triple of a concordance pair: `H = H₀ ⊕ H₁`,
/// `θ = (−θ₀) ⊕ θ₁`, `d = d₀ ⊕ d₁` (as stacked rows into the same `V`),
/// and transported forms `Ψ̃ᵤ = (−Ψ₀ᵤ) ⊕ Ψ₁ᵤ` on `H`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferenceTriple {
    pub ring: GroundRing,
    pub theta: Matrix,
    /// Forms on `H` (already transported through the `dₖ`), with tags.
    pub psi_tilde: Vec<(Matrix, Symmetry)>,
    pub block0: usize,
    pub block1: usize,
}

impl DifferenceTriple {
    pub fn rank(&self) -> usize {
        self.block0 + self.block1
    }
}

/// Assemble the difference triple of `(t0, t1)` with a common family on `V`.
pub fn difference_triple(
    t0: &SeifertTriple,
    t1: &SeifertTriple,
    family: &BilinearFamily,
) -> Result<DifferenceTriple, SeifertError> {
    if t0.ambient.v_rank != t1.ambient.v_rank || t0.ring != t1.ring {
        return Err(SeifertError::Dimension(
            "difference triple needs matching ambient and ring".into(),
        ));
    }
    let theta = t0.theta.neg().direct_sum(&t1.theta);
    let mut psi_tilde = Vec::with_capacity(family.len());
    for (u, f) in family.forms.iter().enumerate() {
        let p0 = psi_on_h(t0, family, u)?;
        let p1 = psi_on_h(t1, family, u)?;
        psi_tilde.push((p0.neg().direct_sum(&p1), f.symmetry));
    }
    Ok(DifferenceTriple {
        ring: t0.ring,
        theta,
        psi_tilde,
        block0: t0.rank,
        block1: t1.rank,
    })
}

/// A candidate metabolizer: a square change-of-basis matrix whose last `g`
/// columns span the half-rank summand.
#[derive(Debug, Clone, PartialEq)]
pub struct Metabolizer {
    pub basis: Matrix,
}

impl Metabolizer {
    pub fn new(basis: Matrix) -> Result<Self, SeifertError> {
        if basis.rows != basis.cols {
            return Err(SeifertError::Dimension("basis must be square".into()));
        }
        let d = basis.det();
        if !(d == Rat::one() || d == -Rat::one()) {
            return Err(SeifertError::BadMove(
                "metabolizer basis must have determinant ±1".into(),
            ));
        }
        Ok(Metabolizer { basis })
    }

    /// The diagonal metabolizer for `t0 = t1`: last-`g` columns `eᵢ ⊕ eᵢ`.
    pub fn diagonal(h: usize) -> Self {
        let mut u = Matrix::zero(2 * h, 2 * h);
        for i in 0..h {
            u[(i, i)] = Rat::one();
            u[(i, h + i)] = Rat::one();
            u[(h + i, h + i)] = Rat::one();
        }
        Metabolizer { basis: u }
    }
}

/// True when, after the base change, both θ and every `Ψ̃ᵤ` vanish on the
/// lower-right `g × g` block.
pub fn verify_metabolizer(
    dt: &DifferenceTriple,
    met: &Metabolizer,
) -> Result<bool, SeifertError> {
    let n = dt.rank();
    if n % 2 != 0 {
        return Err(SeifertError::Dimension("difference rank must be even".into()));
    }
    if met.basis.rows != n {
        return Err(SeifertError::Dimension("basis size mismatch".into()));
    }
    let d = met.basis.det();
    if !(d == Rat::one() || d == -Rat::one()) {
        return Err(SeifertError::BadMove("basis not unimodular".into()));
    }
    let g = n / 2;
    let ut = met.basis.transpose();
    let check_block = |m: &Matrix| -> bool {
        let t = ut.mul(m).mul(&met.basis);
        (g..n).all(|i| (g..n).all(|j| t[(i, j)].is_zero()))
    };
    if !check_block(&dt.theta) {
        return Ok(false);
    }
    for (p, _) in &dt.psi_tilde {
        if !check_block(p) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Extract `f(t, s₁..sₙ) = det(t^{1/2}A − t^{-1/2}Bᵀ + Σᵤ sᵤCᵤ)` from the
/// off-diagonal blocks of the transformed matrices. The metabolizer must
/// verify first.
pub fn fox_milnor_f(
    dt: &DifferenceTriple,
    met: &Metabolizer,
) -> Result<LaurentPoly, SeifertError> {
    if !verify_metabolizer(dt, met)? {
        return Err(SeifertError::BadMove("metabolizer does not verify".into()));
    }
    let n = dt.rank();
    let g = n / 2;
    let ut = met.basis.transpose();
    let t = ut.mul(&dt.theta).mul(&met.basis);
    let a = t.submatrix(0..g, g..n);
    let b = t.submatrix(g..n, 0..g);
    let cs: Vec<Matrix> = dt
        .psi_tilde
        .iter()
        .map(|(p, _)| ut.mul(p).mul(&met.basis).submatrix(0..g, g..n))
        .collect();
    let n_forms = dt.psi_tilde.len();
    let vars = alex_vars(n_forms);
    let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let mut m = PolyMatrix::zero(g, g, &vv);
    for i in 0..g {
        for j in 0..g {
            let mut e_u = vec![0i64; vars.len()];
            e_u[0] = 1;
            let mut p = LaurentPoly::monomial(&vv, &e_u, a[(i, j)].clone());
            let mut e_d = vec![0i64; vars.len()];
            e_d[0] = -1;
            p = p.add(&LaurentPoly::monomial(&vv, &e_d, -b[(j, i)].clone()));
            for (k, c) in cs.iter().enumerate() {
                let mut e_s = vec![0i64; vars.len()];
                e_s[k + 1] = 1;
                p = p.add(&LaurentPoly::monomial(&vv, &e_s, c[(i, j)].clone()));
            }
            m.set(i, j, p);
        }
    }
    Ok(m.det().expect("square"))
}

/// Check the factorization identity
/// `Δ_{L₀}(t⁻¹, −s₁t^{−1/2}, …, sₙt^{−1/2}) · Δ_{L₁}(t, s₁t^{1/2}, …)
///  = f(t⁻¹, −s₁, …, −s_p, s_{p+1}, …, sₙ) · f(t, s₁, …, sₙ)`
/// exactly, with the family split into `p` symmetric then skew forms.
pub fn check_fm_identity(
    t0: &SeifertTriple,
    t1: &SeifertTriple,
    family: &BilinearFamily,
    f: &LaurentPoly,
) -> Result<bool, SeifertError> {
    let p = family
        .split_point()
        .ok_or_else(|| SeifertError::BadSymmetry("family must be symmetric-first".into()))?;
    let n = family.len();
    let vars = alex_vars(n);
    let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let d0 = conway_det(t0, family)?;
    let d1 = conway_det(t1, family)?;

    // Δ₀(t⁻¹, ∓sᵤ t^{−1/2}): u ↦ u⁻¹, sᵤ ↦ ∓sᵤu⁻¹.
    let mut map0 = BTreeMap::new();
    let mut e_u = vec![0i64; vars.len()];
    e_u[0] = -1;
    map0.insert("u".into(), LaurentPoly::monomial(&vv, &e_u, Rat::one()));
    for i in 1..=n {
        let mut e = vec![0i64; vars.len()];
        e[0] = -1;
        e[i] = 1;
        let sign = if i <= p { -Rat::one() } else { Rat::one() };
        map0.insert(format!("s{i}"), LaurentPoly::monomial(&vv, &e, sign));
    }
    let lhs0 = d0
        .substitute(&vv, &map0)
        .map_err(|e| SeifertError::BadMove(format!("substitution: {e}")))?;

    // Δ₁(t, sᵤ t^{1/2}): sᵤ ↦ sᵤu.
    let mut map1 = BTreeMap::new();
    for i in 1..=n {
        let mut e = vec![0i64; vars.len()];
        e[0] = 1;
        e[i] = 1;
        map1.insert(format!("s{i}"), LaurentPoly::monomial(&vv, &e, Rat::one()));
    }
    let lhs1 = d1
        .substitute(&vv, &map1)
        .map_err(|e| SeifertError::BadMove(format!("substitution: {e}")))?;
    let lhs = lhs0.mul(&lhs1);

    // f(t⁻¹, −s₁, …, −s_p, s_{p+1}, …): u ↦ u⁻¹, sᵤ ↦ ∓sᵤ.
    let mut mapf = BTreeMap::new();
    mapf.insert("u".into(), LaurentPoly::monomial(&vv, &e_u, Rat::one()));
    for i in 1..=n {
        let mut e = vec![0i64; vars.len()];
        e[i] = 1;
        let sign = if i <= p { -Rat::one() } else { Rat::one() };
        mapf.insert(format!("s{i}"), LaurentPoly::monomial(&vv, &e, sign));
    }
    let f_conj = f
        .substitute(&vv, &mapf)
        .map_err(|e| SeifertError::BadMove(format!("substitution: {e}")))?;
    let rhs = f_conj.mul(f);
    Ok(lhs == rhs)
}

/// Per-point outcome of the signature obstruction test.
#[derive(Debug, Clone)]
pub struct ObstructionRow {
    pub point: EvalPoint,
    pub admissible0: bool,
    pub admissible1: bool,
    pub sig0: SignatureResult,
    pub sig1: SignatureResult,
    pub differs: bool,
    /// A non-concordance certificate: both admissible and signatures differ.
    pub certifies: bool,
}

/// Evaluate the concordance signature test at a list of points (`ω ≠ 1`).
pub fn signature_obstruction(
    t0: &SeifertTriple,
    t1: &SeifertTriple,
    family: &BilinearFamily,
    points: &[EvalPoint],
) -> Result<Vec<ObstructionRow>, SeifertError> {
    let d0 = crate::alexander::ConwayPolynomial {
        value: conway_det(t0, family)?,
        m: 1,
    };
    let d1 = crate::alexander::ConwayPolynomial {
        value: conway_det(t1, family)?,
        m: 1,
    };
    let mut out = Vec::with_capacity(points.len());
    for pt in points {
        if pt.is_omega_one() {
            return Err(SeifertError::BadMove(
                "signature obstruction needs omega != 1".into(),
            ));
        }
        let a0 = concordance_admissible(&d0, family, pt)?;
        let a1 = concordance_admissible(&d1, family, pt)?;
        let s0 = signature_at(t0, family, pt)?;
        let s1 = signature_at(t1, family, pt)?;
        let differs = s0.signature != s1.signature;
        let certifies = a0 && a1 && s0.admissible && s1.admissible && differs;
        out.push(ObstructionRow {
            point: pt.clone(),
            admissible0: a0,
            admissible1: a1,
            sig0: s0,
            sig1: s1,
            differs,
            certifies,
        });
    }
    Ok(out)
}

/// Exhaustive metabolizer search for small ranks (a refutation aid): looks
/// for `g` independent columns with entries in `{−1, 0, 1}` on which θ and
/// every `Ψ̃ᵤ` vanish, then completes them to a unimodular basis. Returns
/// `None` when no candidate subspace exists.
pub fn search_metabolizer(dt: &DifferenceTriple) -> Result<Option<Metabolizer>, SeifertError> {
    let n = dt.rank();
    if n % 2 != 0 {
        return Err(SeifertError::Dimension("difference rank must be even".into()));
    }
    let g = n / 2;
    if g == 0 {
        return Ok(Some(Metabolizer {
            basis: Matrix::zero(0, 0),
        }));
    }
    if n > 4 {
        return Err(SeifertError::Dimension(
            "exhaustive search is limited to rank <= 4".into(),
        ));
    }
    let vanishes = |y: &Matrix| -> bool {
        let yt = y.transpose();
        if !yt.mul(&dt.theta).mul(y).is_zero() {
            return false;
        }
        dt.psi_tilde
            .iter()
            .all(|(p, _)| yt.mul(p).mul(y).is_zero())
    };
    // Enumerate column tuples with entries in {−1, 0, 1}.
    let columns: Vec<Vec<Rat>> = {
        let mut cols = Vec::new();
        let total = 3usize.pow(n as u32);
        for code in 1..total {
            let mut c = code;
            let mut v = Vec::with_capacity(n);
            for _ in 0..n {
                v.push(Rat::from_integer(((c % 3) as i64 - 1).into()));
                c /= 3;
            }
            if v.iter().any(|x| !x.is_zero()) {
                cols.push(v);
            }
        }
        cols
    };
    let mut pick = vec![0usize; g];
    let build = |pick: &[usize]| -> Matrix {
        let mut y = Matrix::zero(n, g);
        for (j, &ci) in pick.iter().enumerate() {
            for i in 0..n {
                y[(i, j)] = columns[ci][i].clone();
            }
        }
        y
    };
    fn advance(pick: &mut [usize], max: usize) -> bool {
        for i in (0..pick.len()).rev() {
            if pick[i] + 1 < max {
                pick[i] += 1;
                for j in i + 1..pick.len() {
                    pick[j] = pick[i];
                }
                return true;
            }
        }
        false
    }
    loop {
        let y = build(&pick);
        if y.rank() == g && vanishes(&y) {
            if let Some(m) = complete_to_unimodular(&y, dt.ring) {
                return Ok(Some(Metabolizer { basis: m }));
            }
        }
        if !advance(&mut pick, columns.len()) {
            return Ok(None);
        }
    }
}

/// Complete `g` independent columns to a square matrix with determinant ±1,
/// placing them last. Over the rationals any invertible completion is
/// rescaled; over the integers only determinant ±1 completions are accepted.
fn complete_to_unimodular(y: &Matrix, ring: GroundRing) -> Option<Matrix> {
    let n = y.rows;
    let g = y.cols;
    let mut basis = Matrix::zero(n, n);
    for j in 0..g {
        for i in 0..n {
            basis[(i, n - g + j)] = y[(i, j)].clone();
        }
    }
    // Greedily fill the leading columns with standard vectors keeping rank.
    let mut used = 0;
    for k in 0..n {
        if used == n - g {
            break;
        }
        basis[(k, used)] = Rat::one();
        let test = basis.submatrix(0..n, 0..used + 1);
        let mut full = Matrix::zero(n, used + 1 + g);
        for i in 0..n {
            for j in 0..=used {
                full[(i, j)] = test[(i, j)].clone();
            }
            for j in 0..g {
                full[(i, used + 1 + j)] = y[(i, j)].clone();
            }
        }
        if full.rank() == used + 1 + g {
            used += 1;
        } else {
            basis[(k, used)] = Rat::zero();
        }
    }
    if used != n - g {
        return None;
    }
    let det = basis.det();
    if det.is_zero() {
        return None;
    }
    if det == Rat::one() || det == -Rat::one() {
        return Some(basis);
    }
    if ring == GroundRing::Rationals {
        // Rescale the first column to normalize the determinant.
        for i in 0..n {
            let scaled = &basis[(i, 0)] / &det;
            basis[(i, 0)] = scaled;
        }
        Some(basis)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;
    use crate::seifert::AmbientSpec;

    fn trefoil() -> SeifertTriple {
        SeifertTriple::new(
            GroundRing::Integers,
            Matrix::from_i64(&[&[-1, 1], &[0, -1]]),
            Matrix::zero(2, 0),
            AmbientSpec::new(0),
        )
        .unwrap()
    }

    fn empty() -> SeifertTriple {
        SeifertTriple::empty(GroundRing::Integers, AmbientSpec::new(0))
    }

    #[test]
    fn difference_blocks() {
        let t = trefoil();
        let dt = difference_triple(&t, &t, &BilinearFamily::empty()).unwrap();
        assert_eq!(dt.rank(), 4);
        assert_eq!(dt.theta[(0, 0)], int(1)); // −θ₀
        assert_eq!(dt.theta[(2, 2)], int(-1)); // θ₁
        assert_eq!(dt.theta[(0, 2)], int(0));
        let e = empty();
        let de = difference_triple(&e, &e, &BilinearFamily::empty()).unwrap();
        assert_eq!(de.rank(), 0);
    }

    #[test]
    fn diagonal_metabolizer_verifies() {
        let t = trefoil();
        let dt = difference_triple(&t, &t, &BilinearFamily::empty()).unwrap();
        let met = Metabolizer::diagonal(2);
        assert!(verify_metabolizer(&dt, &met).unwrap());
    }

    #[test]
    fn random_metabolizer_matches_bruteforce_blocks() {
        let t = trefoil();
        let dt = difference_triple(&t, &t, &BilinearFamily::empty()).unwrap();
        // A basis that does NOT kill the corner: the identity.
        let met = Metabolizer::new(Matrix::identity(4)).unwrap();
        let ut = met.basis.transpose();
        let trans = ut.mul(&dt.theta).mul(&met.basis);
        let manual = (2..4).all(|i| (2..4).all(|j| trans[(i, j)].is_zero()));
        assert_eq!(verify_metabolizer(&dt, &met).unwrap(), manual);
        assert!(!manual);
    }

    #[test]
    fn fox_milnor_identity_trefoil_pair() {
        let t = trefoil();
        let dt = difference_triple(&t, &t, &BilinearFamily::empty()).unwrap();
        let met = Metabolizer::diagonal(2);
        let f = fox_milnor_f(&dt, &met).unwrap();
        assert!(check_fm_identity(&t, &t, &BilinearFamily::empty(), &f).unwrap());
    }

    #[test]
    fn fm_identity_fails_for_distinct_links() {
        let t = trefoil();
        let e = empty();
        // f = 1 cannot satisfy the identity: the left side is Δ(t⁻¹)·Δ(t)·… ≠ 1.
        let vars = alex_vars(0);
        let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let one = LaurentPoly::one(&vv);
        assert!(!check_fm_identity(&t, &e, &BilinearFamily::empty(), &one).unwrap());
        assert!(check_fm_identity(&e, &e, &BilinearFamily::empty(), &one).unwrap());
    }

    #[test]
    fn no_metabolizer_for_trefoil_vs_padded_empty() {
        // Trefoil against a rank-0 triple padded to rank 2 by trivial
        // generators: the difference form has Δ-obstruction, so the bounded
        // search finds nothing.
        let t = trefoil();
        let padded = {
            let e = empty();
            let e1 = crate::seifert::trivial_enlarge(&e);
            crate::seifert::trivial_enlarge(&e1)
        };
        let dt = difference_triple(&t, &padded, &BilinearFamily::empty()).unwrap();
        assert!(search_metabolizer(&dt).unwrap().is_none());
    }

    #[test]
    fn search_finds_diagonal_for_equal_pair() {
        let t = trefoil();
        let dt = difference_triple(&t, &t, &BilinearFamily::empty()).unwrap();
        let found = search_metabolizer(&dt).unwrap();
        assert!(found.is_some());
        assert!(verify_metabolizer(&dt, &found.unwrap()).unwrap());
    }

    #[test]
    fn obstruction_certificate_trefoil_vs_unknot() {
        let t = trefoil();
        let padded = {
            let e = empty();
            crate::seifert::trivial_enlarge(&crate::seifert::trivial_enlarge(&e))
        };
        let pt = EvalPoint::from_angle(1, 1, vec![]).unwrap();
        let rows =
            signature_obstruction(&t, &padded, &BilinearFamily::empty(), &[pt]).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].certifies);
        assert_eq!(rows[0].sig0.signature, -2);
        assert_eq!(rows[0].sig1.signature, 0);
        // Same triple never certifies.
        let pt2 = EvalPoint::from_angle(1, 1, vec![]).unwrap();
        let same = signature_obstruction(&t, &t, &BilinearFamily::empty(), &[pt2]).unwrap();
        assert!(!same[0].certifies);
    }
}
