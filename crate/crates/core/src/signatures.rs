//! Extended Murasugi–Tristram–Levine signatures.
//!
//! `σ_{L,ψ₁..ψₙ}(ω, λ)` is the signature of the Hermitian form
//! `(1−ω)θ + (1−ω̄)θᵀ + (Σ_{u≤p} λᵤψᵤ + i Σ_{u>p} λᵤψᵤ)∘(d×d)` on `C ⊗ H`,
//! with the family ordered symmetric-first. Eigenvalues are computed through
//! the real symmetric doubling `[[A, −B], [B, A]]` of `H = A + iB`.

use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::alexander::ConwayPolynomial;
use crate::eigen::symmetric_eigenvalues;
use crate::mat::Matrix;
use crate::seifert::{psi_on_h, restrict, BilinearFamily, SeifertError, SeifertTriple};

/// Evaluation point: `ω` on the unit circle and real weights `λ`.
#[derive(Debug, Clone)]
pub struct EvalPoint {
    pub omega: Complex64,
    /// When `ω = exp(iπ p/q)` exactly, the rational angle, kept for exact
    /// reporting.
    pub angle: Option<(i64, i64)>,
    pub lambda: Vec<f64>,
}

impl EvalPoint {
    pub fn new(omega: Complex64, lambda: Vec<f64>) -> Result<Self, SeifertError> {
        if (omega.norm() - 1.0).abs() > 1e-12 {
            return Err(SeifertError::BadMove(format!(
                "omega must lie on the unit circle, |omega| = {}",
                omega.norm()
            )));
        }
        Ok(EvalPoint {
            omega,
            angle: None,
            lambda,
        })
    }

    /// `ω = exp(iπ p/q)`.
    pub fn from_angle(p: i64, q: i64, lambda: Vec<f64>) -> Result<Self, SeifertError> {
        if q == 0 {
            return Err(SeifertError::BadMove("angle denominator zero".into()));
        }
        let theta = std::f64::consts::PI * p as f64 / q as f64;
        Ok(EvalPoint {
            omega: Complex64::new(theta.cos(), theta.sin()),
            angle: Some((p, q)),
            lambda,
        })
    }

    pub fn is_omega_one(&self) -> bool {
        if let Some((p, q)) = self.angle {
            return p.rem_euclid(2 * q) == 0;
        }
        (self.omega - Complex64::new(1.0, 0.0)).norm() < 1e-12
    }
}

/// Signature result with the numeric-hygiene report.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureResult {
    pub signature: i64,
    pub nullity: usize,
    /// False when some eigenvalue falls in the ambiguity band `(τ, 10τ)`.
    pub admissible: bool,
    pub min_abs_eigenvalue: f64,
    pub tolerance: f64,
    /// Set when some `ωᵢ = 1` (the θ-part of the form vanishes there).
    pub degenerate_omega: bool,
}

/// Complex Hermitian matrix stored as real and imaginary parts.
#[derive(Debug, Clone)]
pub struct HermitianMatrix {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl HermitianMatrix {
    pub fn size(&self) -> usize {
        self.re.len()
    }

    pub fn max_norm(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.size() {
            for j in 0..self.size() {
                m = m.max((self.re[i][j].powi(2) + self.im[i][j].powi(2)).sqrt());
            }
        }
        m
    }

    /// Hermitian defect `max |H − H*|`, used as a construction sanity check.
    pub fn hermitian_defect(&self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..self.size() {
            for j in 0..self.size() {
                d = d.max((self.re[i][j] - self.re[j][i]).abs());
                d = d.max((self.im[i][j] + self.im[j][i]).abs());
            }
        }
        d
    }

    /// Eigenvalues via the real symmetric doubling (each eigenvalue of `H`
    /// appears twice in the doubled spectrum).
    pub fn eigenvalues_doubled(&self) -> Vec<f64> {
        let n = self.size();
        let mut big = vec![vec![0.0; 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                big[i][j] = self.re[i][j];
                big[i][n + j] = -self.im[i][j];
                big[n + i][j] = self.im[i][j];
                big[n + i][n + j] = self.re[i][j];
            }
        }
        symmetric_eigenvalues(&big)
    }
}

fn mat_f64(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.rows)
        .map(|i| {
            (0..m.cols)
                .map(|j| m[(i, j)].to_f64().unwrap_or(f64::NAN))
                .collect()
        })
        .collect()
}

/// Assemble the Hermitian matrix of the extended signature form at a point.
/// The family must be ordered symmetric-first (indices `1..p` symmetric,
/// the rest skew).
pub fn hermitian_matrix(
    triple: &SeifertTriple,
    family: &BilinearFamily,
    point: &EvalPoint,
) -> Result<HermitianMatrix, SeifertError> {
    let p = family
        .split_point()
        .ok_or_else(|| SeifertError::BadSymmetry("family must be symmetric-first".into()))?;
    if point.lambda.len() != family.len() {
        return Err(SeifertError::Dimension(format!(
            "lambda has {} entries for {} forms",
            point.lambda.len(),
            family.len()
        )));
    }
    let h = triple.rank;
    let th = mat_f64(&triple.theta);
    let omega = point.omega;
    let c1 = Complex64::new(1.0, 0.0) - omega; // coefficient of θ
    let c2 = Complex64::new(1.0, 0.0) - omega.conj(); // coefficient of θᵀ
    let mut re = vec![vec![0.0; h]; h];
    let mut im = vec![vec![0.0; h]; h];
    for i in 0..h {
        for j in 0..h {
            let z = c1 * th[i][j] + c2 * th[j][i];
            re[i][j] = z.re;
            im[i][j] = z.im;
        }
    }
    for (u, f) in family.forms.iter().enumerate() {
        let psi = psi_on_h(triple, family, u)?;
        let pm = mat_f64(&psi);
        let _ = f;
        for i in 0..h {
            for j in 0..h {
                if u < p {
                    re[i][j] += point.lambda[u] * pm[i][j];
                } else {
                    im[i][j] += point.lambda[u] * pm[i][j];
                }
            }
        }
    }
    let hm = HermitianMatrix { re, im };
    debug_assert!(hm.hermitian_defect() <= 1e-10 * (hm.max_norm() + 1.0));
    Ok(hm)
}

pub(crate) fn signature_of(hm: &HermitianMatrix, degenerate_omega: bool) -> SignatureResult {
    let tol = 1e-9 * (hm.max_norm() + 1.0);
    let eig = hm.eigenvalues_doubled();
    let mut pos = 0i64;
    let mut neg = 0i64;
    let mut null = 0usize;
    let mut min_abs = f64::INFINITY;
    let mut admissible = true;
    for &e in &eig {
        let a = e.abs();
        if a < min_abs {
            min_abs = a;
        }
        if a <= tol {
            null += 1;
        } else if e > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
        if a > tol && a < 10.0 * tol {
            admissible = false;
        }
    }
    if min_abs.is_infinite() {
        min_abs = 0.0;
    }
    // Doubled spectrum: every eigenvalue of H appears twice.
    debug_assert!(pos % 2 == 0 && neg % 2 == 0 && null % 2 == 0);
    SignatureResult {
        signature: (pos - neg) / 2,
        nullity: null / 2,
        admissible,
        min_abs_eigenvalue: min_abs,
        tolerance: tol,
        degenerate_omega,
    }
}

/// Signature and nullity of the extended form at a point.
pub fn signature_at(
    triple: &SeifertTriple,
    family: &BilinearFamily,
    point: &EvalPoint,
) -> Result<SignatureResult, SeifertError> {
    let hm = hermitian_matrix(triple, family, point)?;
    Ok(signature_of(&hm, point.is_omega_one()))
}

/// Admissibility of a point in the sense of the concordance theorem: the
/// extended polynomial must not vanish at
/// `(ω, ξλ₁,…,ξλ_p, iξλ_{p+1},…,iξλₙ)` with `ξ = (ω⁻¹ − 1)⁻¹`.
///
/// The factorization in the concordance proof produces `ξ = (ω⁻¹ − 1)⁻¹`
/// (the determinant of the signature form at `(ω, λ)` is a nonzero multiple
/// of Δ at exactly this point); the statement's `(1 − ω⁻¹)⁻¹` differs by a
/// sign that the nullity/root correspondence rules out.
pub fn concordance_admissible(
    delta: &ConwayPolynomial,
    family: &BilinearFamily,
    point: &EvalPoint,
) -> Result<bool, SeifertError> {
    if point.is_omega_one() {
        return Err(SeifertError::BadMove(
            "admissibility is undefined at omega = 1".into(),
        ));
    }
    let p = family
        .split_point()
        .ok_or_else(|| SeifertError::BadSymmetry("family must be symmetric-first".into()))?;
    let omega = point.omega;
    let xi = (omega.inv() - Complex64::new(1.0, 0.0)).inv();
    let s: Vec<Complex64> = point
        .lambda
        .iter()
        .enumerate()
        .map(|(u, &l)| {
            if u < p {
                xi * l
            } else {
                Complex64::new(0.0, 1.0) * xi * l
            }
        })
        .collect();
    let val = delta.eval(omega, &s);
    let tol = 1e-9 * (1.0 + delta.value.coeff_l1_norm());
    Ok(val.norm() > tol)
}

/// Derived signature: restrict the triple (and family) to a subspace of `V`
/// and take the signature there.
pub fn derived_signatures(
    triple: &SeifertTriple,
    family: &BilinearFamily,
    subspace: &Matrix,
    point: &EvalPoint,
) -> Result<SignatureResult, SeifertError> {
    let (t, fam) = restrict(triple, family, subspace)?;
    signature_at(&t, &fam, point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::GroundRing;
    use crate::seifert::{standard_symplectic, AmbientSpec, NamedForm, Symmetry};

    fn trefoil(ring: GroundRing) -> SeifertTriple {
        SeifertTriple::new(
            ring,
            Matrix::from_i64(&[&[-1, 1], &[0, -1]]),
            Matrix::zero(2, 0),
            AmbientSpec::new(0),
        )
        .unwrap()
    }

    #[test]
    fn hermitian_matrix_trefoil_at_minus_one() {
        // 2(Θ + Θᵀ) = [[−4, 2], [2, −4]]
        let p = EvalPoint::from_angle(1, 1, vec![]).unwrap();
        let hm = hermitian_matrix(&trefoil(GroundRing::Integers), &BilinearFamily::empty(), &p)
            .unwrap();
        assert!((hm.re[0][0] + 4.0).abs() < 1e-12);
        assert!((hm.re[0][1] - 2.0).abs() < 1e-12);
        assert!(hm.im[0][1].abs() < 1e-12);
    }

    #[test]
    fn signature_trefoil() {
        let p = EvalPoint::from_angle(1, 1, vec![]).unwrap();
        let s = signature_at(&trefoil(GroundRing::Integers), &BilinearFamily::empty(), &p)
            .unwrap();
        assert_eq!(s.signature, -2);
        assert_eq!(s.nullity, 0);
        assert!(s.admissible);
    }

    #[test]
    fn signature_at_omega_one_is_zero() {
        let p = EvalPoint::from_angle(0, 1, vec![]).unwrap();
        let s = signature_at(&trefoil(GroundRing::Integers), &BilinearFamily::empty(), &p)
            .unwrap();
        assert_eq!(s.signature, 0);
        assert_eq!(s.nullity, 2);
        assert!(s.degenerate_omega);
    }

    #[test]
    fn skew_form_i_j_spectrum() {
        // Θ = 0₂, ψ = J skew with d = identity, λ = 1: matrix iJ has
        // eigenvalues ±1 → signature 0, nullity 0.
        let amb = AmbientSpec::new(2);
        let t = SeifertTriple::new(
            GroundRing::Integers,
            Matrix::zero(2, 2),
            Matrix::identity(2),
            amb,
        )
        .unwrap();
        let fam = BilinearFamily::new(vec![NamedForm {
            name: "j".into(),
            matrix: standard_symplectic(1),
            symmetry: Symmetry::Skew,
        }])
        .unwrap();
        let p = EvalPoint::from_angle(0, 1, vec![1.0]).unwrap();
        let s = signature_at(&t, &fam, &p).unwrap();
        assert_eq!(s.signature, 0);
        assert_eq!(s.nullity, 0);
    }

    #[test]
    fn symmetric_identity_form() {
        // Θ = 0₂, one symmetric ψ = I with d = I, λ = 3 → matrix 3I.
        let amb = AmbientSpec::new(2);
        let t = SeifertTriple::new(
            GroundRing::Integers,
            Matrix::zero(2, 2),
            Matrix::identity(2),
            amb,
        )
        .unwrap();
        let fam = BilinearFamily::new(vec![NamedForm {
            name: "id".into(),
            matrix: Matrix::identity(2),
            symmetry: Symmetry::Symmetric,
        }])
        .unwrap();
        let p = EvalPoint::from_angle(0, 1, vec![3.0]).unwrap();
        let hm = hermitian_matrix(&t, &fam, &p).unwrap();
        assert!((hm.re[0][0] - 3.0).abs() < 1e-12);
        let s = signature_at(&t, &fam, &p).unwrap();
        assert_eq!(s.signature, 2);
    }

    #[test]
    fn admissibility_trefoil() {
        use crate::alexander::alexander_conway;
        use crate::seifert::LinkMeta;
        let d = alexander_conway(
            &trefoil(GroundRing::Integers),
            &BilinearFamily::empty(),
            LinkMeta { m: 1, g: 1 },
        )
        .unwrap();
        // Δ(−1) = −3 ≠ 0 → admissible.
        let p = EvalPoint::from_angle(1, 1, vec![]).unwrap();
        assert!(concordance_admissible(&d, &BilinearFamily::empty(), &p).unwrap());
        // ω = e^{iπ/3} is a root of t − 1 + t⁻¹ on the circle.
        let r = EvalPoint::from_angle(1, 3, vec![]).unwrap();
        assert!(!concordance_admissible(&d, &BilinearFamily::empty(), &r).unwrap());
        // Unknot: Δ = 1 everywhere.
        let one = ConwayPolynomial {
            value: crate::ring::LaurentPoly::one(&["u"]),
            m: 1,
        };
        assert!(concordance_admissible(&one, &BilinearFamily::empty(), &p).unwrap());
        // ω = 1 errors.
        let o = EvalPoint::from_angle(0, 1, vec![]).unwrap();
        assert!(concordance_admissible(&d, &BilinearFamily::empty(), &o).is_err());
    }

    #[test]
    fn derived_signature_full_subspace_matches() {
        let amb = AmbientSpec::new(1);
        let t = SeifertTriple::new(
            GroundRing::Rationals,
            Matrix::from_i64(&[&[-1, 1], &[0, -1]]),
            Matrix::from_i64(&[&[1], &[0]]),
            amb,
        )
        .unwrap();
        let fam = BilinearFamily::empty();
        let p = EvalPoint::from_angle(1, 1, vec![]).unwrap();
        let full = derived_signatures(&t, &fam, &Matrix::identity(1), &p).unwrap();
        let direct = signature_at(&t, &fam, &p).unwrap();
        assert_eq!(full.signature, direct.signature);
        assert_eq!(full.nullity, direct.nullity);
        // W' = 0: signature of θ on ker d = span(second generator).
        let zero = derived_signatures(&t, &fam, &Matrix::zero(1, 0), &p).unwrap();
        assert_eq!(zero.signature, -1);
    }

    #[test]
    fn conjugate_point_symmetry() {
        // σ(ω̄, λ') with skew coordinates negated equals σ(ω, λ).
        let amb = AmbientSpec::new(2);
        let t = SeifertTriple::new(
            GroundRing::Integers,
            Matrix::from_i64(&[&[1, 2], &[0, -1]]),
            Matrix::from_i64(&[&[1, 0], &[1, 1]]),
            amb,
        )
        .unwrap();
        let fam = BilinearFamily::new(vec![
            NamedForm {
                name: "sym".into(),
                matrix: Matrix::from_i64(&[&[1, 1], &[1, 0]]),
                symmetry: Symmetry::Symmetric,
            },
            NamedForm {
                name: "skew".into(),
                matrix: standard_symplectic(1),
                symmetry: Symmetry::Skew,
            },
        ])
        .unwrap();
        let p = EvalPoint::from_angle(2, 3, vec![0.7, -1.3]).unwrap();
        let q = EvalPoint::from_angle(-2, 3, vec![0.7, 1.3]).unwrap();
        let sp = signature_at(&t, &fam, &p).unwrap();
        let sq = signature_at(&t, &fam, &q).unwrap();
        assert_eq!(sp.signature, sq.signature);
        assert_eq!(sp.nullity, sq.nullity);
    }
}
