//! Colored Seifert triples, type I/II elementary enlargements, the extended
//! Conway function `Ω` in the localized ring `Λ_{R',μ}`, and multivariable
//! signatures.
//!
//! A μ-colored triple stores one form `θ^ε` per sign vector
//! `ε = (+1, ε₂, …, ε_μ)`; the forms with `ε₁ = −1` are recovered from the
//! relation `θ^ε(a,b) − θ^{−ε}(b,a) = d(a)·_{∂M} d(b)`.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mat::Matrix;
use crate::ring::{GroundRing, LaurentPoly, LocalizedPoly, PolyMatrix};
use crate::seifert::{AmbientSpec, SeifertError, SeifertTriple};
use crate::signatures::{HermitianMatrix, SignatureResult};
use crate::Rat;

/// Sign vector `ε` with `ε₁ = +1`, encoded by a bitmask over `ε₂..ε_μ`
/// (bit set ⇔ εᵢ = −1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignVector {
    pub mu: usize,
    pub mask: usize,
}

impl SignVector {
    pub fn all(mu: usize) -> impl Iterator<Item = SignVector> {
        (0..(1usize << (mu - 1))).map(move |mask| SignVector { mu, mask })
    }

    /// `εᵢ` for 1-based `i`.
    pub fn sign(&self, i: usize) -> i64 {
        assert!((1..=self.mu).contains(&i));
        if i == 1 {
            1
        } else if self.mask >> (i - 2) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// Product `ε₂ ⋯ ε_μ`.
    pub fn tail_product(&self) -> i64 {
        if (self.mask.count_ones() as i64) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Exponent vector of the monomial `t₁ t₂^{ε₂} ⋯ t_μ^{ε_μ}`.
    pub fn monomial_exponents(&self) -> Vec<i64> {
        (1..=self.mu).map(|i| self.sign(i)).collect()
    }
}

/// C-complex metadata: clasp count `c`, total linking `ℓ`, the Euler
/// characteristics `χ(F∖Fᵢ)`, and the component count `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredMeta {
    pub c: i64,
    pub ell: i64,
    pub chi: Vec<i64>,
    pub m: usize,
}

/// A μ-colored Seifert triple with its C-complex metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredSeifertTriple {
    pub mu: usize,
    pub rank: usize,
    /// `θ^ε` indexed by the sign-vector mask.
    pub thetas: Vec<Matrix>,
    pub d: Matrix,
    pub ambient: AmbientSpec,
    pub meta: ColoredMeta,
    /// Optional intersection forms `φ^ε`, same indexing.
    pub phis: Option<Vec<Matrix>>,
}

impl ColoredSeifertTriple {
    pub fn new(
        mu: usize,
        thetas: Vec<Matrix>,
        d: Matrix,
        ambient: AmbientSpec,
        meta: ColoredMeta,
        phis: Option<Vec<Matrix>>,
    ) -> Result<Self, SeifertError> {
        if mu == 0 {
            return Err(SeifertError::Dimension("mu must be positive".into()));
        }
        if thetas.len() != 1 << (mu - 1) {
            return Err(SeifertError::Dimension(format!(
                "expected {} theta matrices, got {}",
                1 << (mu - 1),
                thetas.len()
            )));
        }
        let rank = thetas[0].rows;
        for t in &thetas {
            if t.rows != rank || t.cols != rank {
                return Err(SeifertError::Dimension("theta sizes differ".into()));
            }
        }
        if d.rows != rank || d.cols != ambient.v_rank {
            return Err(SeifertError::Dimension("d shape mismatch".into()));
        }
        if meta.chi.len() != mu {
            return Err(SeifertError::Dimension("chi must have mu entries".into()));
        }
        if (meta.c - meta.ell) % 2 != 0 {
            return Err(SeifertError::Dimension(
                "(c - ell) must be even for the sign exponent".into(),
            ));
        }
        if let Some(ps) = &phis {
            if ps.len() != thetas.len() {
                return Err(SeifertError::Dimension("phis count mismatch".into()));
            }
            if ambient.boundary_form.is_none() {
                return Err(SeifertError::MissingBoundaryForm);
            }
        }
        Ok(ColoredSeifertTriple {
            mu,
            rank,
            thetas,
            d,
            ambient,
            meta,
            phis,
        })
    }

    /// View a 1-colored triple as a plain Seifert triple.
    pub fn as_plain(&self) -> Result<SeifertTriple, SeifertError> {
        if self.mu != 1 {
            return Err(SeifertError::Dimension("as_plain needs mu = 1".into()));
        }
        SeifertTriple::new(
            GroundRing::Rationals,
            self.thetas[0].clone(),
            self.d.clone(),
            self.ambient.clone(),
        )
    }

    /// Wrap a plain triple as a 1-colored triple with the canonical Seifert
    /// surface metadata `c = ℓ = 0`, `χ(F∖F₁) = χ(∅) = 0`.
    pub fn from_plain(t: &SeifertTriple, m: usize) -> Self {
        ColoredSeifertTriple {
            mu: 1,
            rank: t.rank,
            thetas: vec![t.theta.clone()],
            d: t.d.clone(),
            ambient: t.ambient.clone(),
            meta: ColoredMeta {
                c: 0,
                ell: 0,
                chi: vec![0],
                m,
            },
            phis: None,
        }
    }
}

/// A type I or type II elementary enlargement with its starred parameters
/// (one border per stored sign vector).
#[derive(Debug, Clone, PartialEq)]
pub enum ColoredMoveKind {
    TypeI { i: usize, sigma: i64 },
    TypeII { i: usize, j: usize, sigma: i64, sigma2: i64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ColoredMove {
    pub kind: ColoredMoveKind,
    /// Per sign vector: the starred column `θ̃^ε(·, a)` over the old basis.
    pub cols: Vec<Vec<Rat>>,
    /// Per sign vector: the starred row `θ̃^ε(a, ·)`.
    pub rows: Vec<Vec<Rat>>,
    /// Per sign vector: `θ̃^ε(a, a)`.
    pub corners: Vec<Rat>,
    pub d_a: Vec<Rat>,
}

impl ColoredMoveKind {
    fn validate(&self, mu: usize) -> Result<(), SeifertError> {
        match self {
            ColoredMoveKind::TypeI { i, sigma } => {
                if !(1..=mu).contains(i) || sigma.abs() != 1 {
                    return Err(SeifertError::BadMove("type I indices".into()));
                }
            }
            ColoredMoveKind::TypeII { i, j, sigma, sigma2 } => {
                if !(1..=mu).contains(i)
                    || !(1..=mu).contains(j)
                    || i == j
                    || sigma.abs() != 1
                    || sigma2.abs() != 1
                {
                    return Err(SeifertError::BadMove("type II indices".into()));
                }
            }
        }
        Ok(())
    }

    /// Kronecker corner pair `(θ̃^ε(a,b), θ̃^ε(b,a))` for a sign vector.
    fn corner_deltas(&self, eps: SignVector) -> (i64, i64) {
        match *self {
            ColoredMoveKind::TypeI { i, sigma } => {
                let e = eps.sign(i);
                (
                    if sigma == e { 1 } else { 0 },
                    if -sigma == e { 1 } else { 0 },
                )
            }
            ColoredMoveKind::TypeII { i, j, sigma, sigma2 } => {
                let (ei, ej) = (eps.sign(i), eps.sign(j));
                (
                    if sigma == ei && sigma2 == ej { 1 } else { 0 },
                    if -sigma == ei && -sigma2 == ej { 1 } else { 0 },
                )
            }
        }
    }
}

/// Apply a colored elementary enlargement, updating the C-complex metadata:
/// a type I move keeps `c` and lowers `χ(F∖Fᵢ)` by 2 for `i ≠ k`; a type II
/// move adds two clasps and lowers `χ(F∖Fᵢ)` by 2 for `i ∉ {k, l}`.
pub fn colored_enlarge(
    ct: &ColoredSeifertTriple,
    mv: &ColoredMove,
) -> Result<ColoredSeifertTriple, SeifertError> {
    mv.kind.validate(ct.mu)?;
    let n_eps = ct.thetas.len();
    let h = ct.rank;
    let v = ct.ambient.v_rank;
    if mv.cols.len() != n_eps || mv.rows.len() != n_eps || mv.corners.len() != n_eps {
        return Err(SeifertError::BadMove(
            "need one star set per sign vector".into(),
        ));
    }
    if mv.d_a.len() != v {
        return Err(SeifertError::BadMove("d_a length".into()));
    }
    let mut thetas = Vec::with_capacity(n_eps);
    for (idx, eps) in SignVector::all(ct.mu).enumerate() {
        if mv.cols[idx].len() != h || mv.rows[idx].len() != h {
            return Err(SeifertError::BadMove("star lengths".into()));
        }
        let (ab, ba) = mv.kind.corner_deltas(eps);
        let mut th = Matrix::zero(h + 2, h + 2);
        for i in 0..h {
            for j in 0..h {
                th[(i, j)] = ct.thetas[idx][(i, j)].clone();
            }
            th[(i, h)] = mv.cols[idx][i].clone();
            th[(h, i)] = mv.rows[idx][i].clone();
        }
        th[(h, h)] = mv.corners[idx].clone();
        th[(h, h + 1)] = Rat::from_integer(ab.into());
        th[(h + 1, h)] = Rat::from_integer(ba.into());
        thetas.push(th);
    }
    let mut d = Matrix::zero(h + 2, v);
    for i in 0..h {
        for j in 0..v {
            d[(i, j)] = ct.d[(i, j)].clone();
        }
    }
    for j in 0..v {
        d[(h, j)] = mv.d_a[j].clone();
    }
    let mut meta = ct.meta.clone();
    match mv.kind {
        ColoredMoveKind::TypeI { i, .. } => {
            for (k, chi) in meta.chi.iter_mut().enumerate() {
                if k + 1 != i {
                    *chi -= 2;
                }
            }
        }
        ColoredMoveKind::TypeII { i, j, .. } => {
            meta.c += 2;
            for (k, chi) in meta.chi.iter_mut().enumerate() {
                if k + 1 != i && k + 1 != j {
                    *chi -= 2;
                }
            }
        }
    }
    // Stored intersection forms are re-derived from the enlarged thetas.
    let phis = if ct.phis.is_some() {
        let bf = ct
            .ambient
            .boundary_form
            .as_ref()
            .ok_or(SeifertError::MissingBoundaryForm)?;
        let g = d.mul(bf).mul(&d.transpose());
        Some(
            thetas
                .iter()
                .map(|th| th.sub(&th.transpose()).sub(&g))
                .collect(),
        )
    } else {
        None
    };
    ColoredSeifertTriple::new(ct.mu, thetas, d, ct.ambient.clone(), meta, phis)
}

fn t_vars(mu: usize) -> Vec<String> {
    (1..=mu).map(|i| format!("t{i}")).collect()
}

/// The matrix `A_F = Σ_ε ε₂⋯ε_μ [t₁t₂^{ε₂}⋯t_μ^{ε_μ} Θ^ε +
/// (−1)^μ (t₁t₂^{ε₂}⋯t_μ^{ε_μ})⁻¹ (Θ^ε)ᵀ]` over `t₁..t_μ`.
pub fn a_matrix(ct: &ColoredSeifertTriple) -> PolyMatrix {
    let vars = t_vars(ct.mu);
    let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let h = ct.rank;
    let mut a = PolyMatrix::zero(h, h, &vv);
    let mu_sign = if ct.mu % 2 == 0 { 1 } else { -1 };
    for eps in SignVector::all(ct.mu) {
        let coeff = eps.tail_product();
        let mono = eps.monomial_exponents();
        let mono_inv: Vec<i64> = mono.iter().map(|x| -x).collect();
        let th = &ct.thetas[eps.mask];
        for i in 0..h {
            for j in 0..h {
                let mut p = a.at(i, j).clone();
                if !th[(i, j)].is_zero() {
                    p = p.add(&LaurentPoly::monomial(
                        &vv,
                        &mono,
                        &th[(i, j)] * Rat::from_integer(coeff.into()),
                    ));
                }
                if !th[(j, i)].is_zero() {
                    p = p.add(&LaurentPoly::monomial(
                        &vv,
                        &mono_inv,
                        &th[(j, i)] * Rat::from_integer((coeff * mu_sign).into()),
                    ));
                }
                a.set(i, j, p);
            }
        }
    }
    a
}

/// The extended Conway function
/// `Ω_{L,ψ} = (−1)^{(c−ℓ)/2} ∏ᵢ (tᵢ−tᵢ⁻¹)^{χ(F∖Fᵢ)−1} det(−A_F + Ψ)`
/// as a canonical element of the localization.
pub fn conway_function(
    ct: &ColoredSeifertTriple,
    psi: &Matrix,
) -> Result<LocalizedPoly, SeifertError> {
    if psi.rows != ct.ambient.v_rank || psi.cols != ct.ambient.v_rank {
        return Err(SeifertError::Dimension("psi must be v_rank x v_rank".into()));
    }
    let vars = t_vars(ct.mu);
    let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    let h = ct.rank;
    let a = a_matrix(ct);
    let psi_h = ct.d.mul(psi).mul(&ct.d.transpose());
    let mut m = PolyMatrix::zero(h, h, &vv);
    for i in 0..h {
        for j in 0..h {
            let p = a
                .at(i, j)
                .neg()
                .add(&LaurentPoly::constant(&vv, psi_h[(i, j)].clone()));
            m.set(i, j, p);
        }
    }
    let det = m.det().expect("square");
    let sign_exp = (ct.meta.c - ct.meta.ell) / 2;
    let mut num = if sign_exp.rem_euclid(2) == 1 {
        det.neg()
    } else {
        det
    };
    let mut denom = vec![0u32; ct.mu];
    for i in 0..ct.mu {
        let e = ct.meta.chi[i] - 1;
        if e >= 0 {
            let f = LocalizedPoly::denominator_factor(&vars, i);
            num = num.mul(&f.pow(e as u32));
        } else {
            denom[i] = (-e) as u32;
        }
    }
    Ok(LocalizedPoly::normalize(num, denom))
}

/// Check the relations `θ^ε − θ^{−ε} = φ^ε` and
/// `θ^ε(a,b) − θ^{−ε}(b,a) = d(a)·d(b)`, using the second to reconstruct
/// the unstored `θ^{−ε}`. Requires both `phis` and the boundary form.
pub fn check_lemma73(ct: &ColoredSeifertTriple) -> Result<bool, SeifertError> {
    let phis = ct
        .phis
        .as_ref()
        .ok_or_else(|| SeifertError::BadMove("phis absent".into()))?;
    let bf = ct
        .ambient
        .boundary_form
        .as_ref()
        .ok_or(SeifertError::MissingBoundaryForm)?;
    let g = ct.d.mul(bf).mul(&ct.d.transpose());
    for (idx, _) in SignVector::all(ct.mu).enumerate() {
        let th = &ct.thetas[idx];
        // θ^{−ε} = (θ^ε − G)ᵀ  (from the second relation), so the first
        // relation reads φ^ε = θ^ε − (θ^ε)ᵀ − G (G is skew).
        let expect = th.sub(&th.transpose()).sub(&g);
        if phis[idx] != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Verify the symmetry `Ω_{L,ψ}(t₁⁻¹,…,t_μ⁻¹) = (−1)^m Ω_{L,ψ'}(t₁,…,t_μ)`
/// with `ψ'(a,b) = (−1)^μ ψ(b,a)`, exactly in the localized ring.
pub fn conway_symmetry_check(
    ct: &ColoredSeifertTriple,
    psi: &Matrix,
) -> Result<bool, SeifertError> {
    let omega = conway_function(ct, psi)?;
    let vars = t_vars(ct.mu);
    let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
    // Ω(t⁻¹): invert every variable in the numerator; each denominator
    // factor picks up a sign.
    let mut map = std::collections::BTreeMap::new();
    for (i, v) in vars.iter().enumerate() {
        let mut e = vec![0i64; vars.len()];
        e[i] = -1;
        map.insert(v.clone(), LaurentPoly::monomial(&vv, &e, Rat::from_integer(1.into())));
    }
    let num_inv = omega
        .numerator
        .substitute(&vv, &map)
        .map_err(|e| SeifertError::BadMove(format!("substitution: {e}")))?;
    let total_k: u32 = omega.denom_exp.iter().sum();
    let lhs_num = if total_k % 2 == 1 {
        num_inv.neg()
    } else {
        num_inv
    };
    let lhs = LocalizedPoly {
        numerator: lhs_num,
        denom_exp: omega.denom_exp.clone(),
    };
    let psi_prime = if ct.mu % 2 == 0 {
        psi.transpose()
    } else {
        psi.transpose().neg()
    };
    let rhs_raw = conway_function(ct, &psi_prime)?;
    let rhs = if ct.meta.m % 2 == 1 {
        LocalizedPoly {
            numerator: rhs_raw.numerator.neg(),
            denom_exp: rhs_raw.denom_exp,
        }
    } else {
        rhs_raw
    };
    Ok(lhs.cross_multiplied_eq(&rhs))
}

/// Multivariable signature at `(ω₁..ω_μ) ∈ T^μ` with weights `λ`:
/// the Hermitian form
/// `Σ_ε [(1−ω₁)∏_{i>1}(1−ωᵢ^{εᵢ}) θ^ε + conj(...) (θ^ε)ᵀ] + ψ(λ)`,
/// where `ψ(λ)` is the transported symmetric/skew combination.
pub fn colored_signature(
    ct: &ColoredSeifertTriple,
    family: &crate::seifert::BilinearFamily,
    omegas: &[Complex64],
    lambda: &[f64],
) -> Result<SignatureResult, SeifertError> {
    if omegas.len() != ct.mu {
        return Err(SeifertError::Dimension("need one omega per color".into()));
    }
    for w in omegas {
        if (w.norm() - 1.0).abs() > 1e-12 {
            return Err(SeifertError::BadMove("omega off the torus".into()));
        }
    }
    let p = family
        .split_point()
        .ok_or_else(|| SeifertError::BadSymmetry("family must be symmetric-first".into()))?;
    if lambda.len() != family.len() {
        return Err(SeifertError::Dimension("lambda length".into()));
    }
    let h = ct.rank;
    let mut re = vec![vec![0.0; h]; h];
    let mut im = vec![vec![0.0; h]; h];
    for eps in SignVector::all(ct.mu) {
        let mut coeff = Complex64::new(1.0, 0.0) - omegas[0];
        for i in 2..=ct.mu {
            let wi = if eps.sign(i) == 1 {
                omegas[i - 1]
            } else {
                omegas[i - 1].inv()
            };
            coeff *= Complex64::new(1.0, 0.0) - wi;
        }
        let cbar = coeff.conj();
        let th = &ct.thetas[eps.mask];
        for i in 0..h {
            for j in 0..h {
                let tij = th[(i, j)].to_f64().unwrap_or(f64::NAN);
                let tji = th[(j, i)].to_f64().unwrap_or(f64::NAN);
                let z = coeff * tij + cbar * tji;
                re[i][j] += z.re;
                im[i][j] += z.im;
            }
        }
    }
    for (u, f) in family.forms.iter().enumerate() {
        if f.matrix.rows != ct.ambient.v_rank {
            return Err(SeifertError::Dimension("family form size".into()));
        }
        let psi = ct.d.mul(&f.matrix).mul(&ct.d.transpose());
        for i in 0..h {
            for j in 0..h {
                let x = lambda[u] * psi[(i, j)].to_f64().unwrap_or(f64::NAN);
                if u < p {
                    re[i][j] += x;
                } else {
                    im[i][j] += x;
                }
            }
        }
    }
    let hm = HermitianMatrix { re, im };
    let degenerate = omegas
        .iter()
        .any(|w| (w - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    Ok(crate::signatures::signature_of(&hm, degenerate))
}

/// One step of a colored fuzz walk.
#[derive(Debug, Clone)]
pub struct ColoredOrbitStep {
    pub triple: ColoredSeifertTriple,
    pub applied: Option<ColoredMove>,
}

/// Deterministic pseudo-random walk of type I/II enlargements.
pub fn colored_fuzz_orbit(
    ct: &ColoredSeifertTriple,
    n_moves: usize,
    seed: u64,
) -> Vec<ColoredOrbitStep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orbit = vec![ColoredOrbitStep {
        triple: ct.clone(),
        applied: None,
    }];
    let mut cur = ct.clone();
    for _ in 0..n_moves {
        let mv = random_colored_move(&mut rng, &cur);
        cur = colored_enlarge(&cur, &mv).expect("generated move is well formed");
        orbit.push(ColoredOrbitStep {
            triple: cur.clone(),
            applied: Some(mv),
        });
    }
    orbit
}

/// Draw a random type I/II move with small integer stars.
pub fn random_colored_move(rng: &mut ChaCha8Rng, ct: &ColoredSeifertTriple) -> ColoredMove {
    let kind = if ct.mu >= 2 && rng.gen_bool(0.5) {
        let i = rng.gen_range(1..=ct.mu);
        let mut j = rng.gen_range(1..=ct.mu);
        while j == i {
            j = rng.gen_range(1..=ct.mu);
        }
        ColoredMoveKind::TypeII {
            i,
            j,
            sigma: if rng.gen_bool(0.5) { 1 } else { -1 },
            sigma2: if rng.gen_bool(0.5) { 1 } else { -1 },
        }
    } else {
        ColoredMoveKind::TypeI {
            i: rng.gen_range(1..=ct.mu),
            sigma: if rng.gen_bool(0.5) { 1 } else { -1 },
        }
    };
    let n_eps = ct.thetas.len();
    let h = ct.rank;
    let small = |r: &mut ChaCha8Rng| Rat::from_integer(r.gen_range(-2i64..=2).into());
    ColoredMove {
        kind,
        cols: (0..n_eps)
            .map(|_| (0..h).map(|_| small(rng)).collect())
            .collect(),
        rows: (0..n_eps)
            .map(|_| (0..h).map(|_| small(rng)).collect())
            .collect(),
        corners: (0..n_eps).map(|_| small(rng)).collect(),
        d_a: (0..ct.ambient.v_rank).map(|_| small(rng)).collect(),
    }
}
