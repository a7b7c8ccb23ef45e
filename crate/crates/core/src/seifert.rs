//! Seifert triples `(H, θ, d)` over a module `V`, bilinear form families,
//! and the move calculus: elementary enlargements/reductions, trivial
//! enlargements, φ-enlargements, and restriction to a subspace of `V`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mat::Matrix;
use crate::ring::GroundRing;
use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum SeifertError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("ambient boundary form is absent")]
    MissingBoundaryForm,
    #[error("ambient phi form is absent")]
    MissingPhi,
    #[error("operation requires the rational ground ring")]
    NonFieldGround,
    #[error("malformed move: {0}")]
    BadMove(String),
    #[error("form `{0}` does not match its declared symmetry")]
    BadSymmetry(String),
    #[error("scalar outside the ground ring")]
    ScalarOutsideRing,
    #[error("no reducible pair found")]
    NotReducible,
    #[error("metadata inconsistent: rank {rank} != 2*{g} + {m} - 1")]
    BadMeta { rank: usize, g: u32, m: usize },
}

/// Declared symmetry of a bilinear form on `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Skew,
    General,
}

impl Symmetry {
    pub fn matches(&self, m: &Matrix) -> bool {
        match self {
            Symmetry::Symmetric => m.is_symmetric(),
            Symmetry::Skew => m.is_skew(),
            Symmetry::General => m.rows == m.cols,
        }
    }
}

/// The ambient data of the quasi-cylinder seen by the algebra: the rank of
/// `V`, the intersection form of `∂M` restricted to `V` (when known), and
/// the φ form of the two-boundary case.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientSpec {
    pub v_rank: usize,
    pub boundary_form: Option<Matrix>,
    pub phi: Option<Matrix>,
}

impl AmbientSpec {
    pub fn new(v_rank: usize) -> Self {
        AmbientSpec {
            v_rank,
            boundary_form: None,
            phi: None,
        }
    }

    pub fn with_boundary_form(mut self, bf: Matrix) -> Result<Self, SeifertError> {
        if bf.rows != self.v_rank || !bf.is_skew() {
            return Err(SeifertError::BadSymmetry("boundary_form".into()));
        }
        self.boundary_form = Some(bf);
        Ok(self)
    }

    pub fn with_phi(mut self, phi: Matrix) -> Result<Self, SeifertError> {
        if phi.rows != self.v_rank || !phi.is_skew() {
            return Err(SeifertError::BadSymmetry("phi".into()));
        }
        let d = phi.det();
        if !(d == Rat::one() || d == -Rat::one()) {
            return Err(SeifertError::BadSymmetry("phi (not unimodular)".into()));
        }
        self.phi = Some(phi);
        Ok(self)
    }
}

/// Link metadata for an abstract triple: component count `m` and surface
/// genus `g`, with `rank H = 2g + m − 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkMeta {
    pub m: usize,
    pub g: u32,
}

impl LinkMeta {
    pub fn check(&self, rank: usize) -> Result<(), SeifertError> {
        if self.m == 0 || 2 * self.g as usize + self.m - 1 != rank {
            return Err(SeifertError::BadMeta {
                rank,
                g: self.g,
                m: self.m,
            });
        }
        Ok(())
    }
}

/// A Seifert triple `(H, θ, d)`: `H` free of rank `rank`, `θ` the
/// generalized Seifert form, `d : H → V` as an `rank × v_rank` matrix whose
/// row `a` holds the coordinates of `d(basis_a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeifertTriple {
    pub ring: GroundRing,
    pub rank: usize,
    pub theta: Matrix,
    pub d: Matrix,
    pub ambient: AmbientSpec,
}

impl SeifertTriple {
    pub fn new(
        ring: GroundRing,
        theta: Matrix,
        d: Matrix,
        ambient: AmbientSpec,
    ) -> Result<Self, SeifertError> {
        let rank = theta.rows;
        if theta.cols != rank {
            return Err(SeifertError::Dimension("theta must be square".into()));
        }
        if d.rows != rank || d.cols != ambient.v_rank {
            return Err(SeifertError::Dimension(format!(
                "d must be {}x{}, got {}x{}",
                rank, ambient.v_rank, d.rows, d.cols
            )));
        }
        let t = SeifertTriple {
            ring,
            rank,
            theta,
            d,
            ambient,
        };
        t.check_ring()?;
        Ok(t)
    }

    fn check_ring(&self) -> Result<(), SeifertError> {
        if self.ring == GroundRing::Integers {
            for i in 0..self.rank {
                for j in 0..self.rank {
                    if !self.theta[(i, j)].is_integer() {
                        return Err(SeifertError::ScalarOutsideRing);
                    }
                }
                for j in 0..self.ambient.v_rank {
                    if !self.d[(i, j)].is_integer() {
                        return Err(SeifertError::ScalarOutsideRing);
                    }
                }
            }
        }
        Ok(())
    }

    /// The empty triple (rank 0) over an ambient `V`.
    pub fn empty(ring: GroundRing, ambient: AmbientSpec) -> Self {
        let v = ambient.v_rank;
        SeifertTriple {
            ring,
            rank: 0,
            theta: Matrix::zero(0, 0),
            d: Matrix::zero(0, v),
            ambient,
        }
    }
}

/// Named bilinear form on `V` with its symmetry tag.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedForm {
    pub name: String,
    pub matrix: Matrix,
    pub symmetry: Symmetry,
}

/// An ordered family `ψ₁, …, ψₙ` of bilinear forms on `V`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BilinearFamily {
    pub forms: Vec<NamedForm>,
}

impl BilinearFamily {
    pub fn empty() -> Self {
        BilinearFamily { forms: Vec::new() }
    }

    pub fn new(forms: Vec<NamedForm>) -> Result<Self, SeifertError> {
        for f in &forms {
            if !f.symmetry.matches(&f.matrix) {
                return Err(SeifertError::BadSymmetry(f.name.clone()));
            }
        }
        Ok(BilinearFamily { forms })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// True when the forms are ordered symmetric-first and every tag is
    /// either `Symmetric` or `Skew`; `p` = number of symmetric forms.
    pub fn split_point(&self) -> Option<usize> {
        let mut p = 0;
        let mut seen_skew = false;
        for f in &self.forms {
            match f.symmetry {
                Symmetry::Symmetric => {
                    if seen_skew {
                        return None;
                    }
                    p += 1;
                }
                Symmetry::Skew => seen_skew = true,
                Symmetry::General => return None,
            }
        }
        Some(p)
    }

    /// The family `−ψᵀ₁, …, −ψᵀₙ`.
    pub fn neg_transpose(&self) -> Self {
        BilinearFamily {
            forms: self
                .forms
                .iter()
                .map(|f| NamedForm {
                    name: f.name.clone(),
                    matrix: f.matrix.transpose().neg(),
                    symmetry: f.symmetry,
                })
                .collect(),
        }
    }
}

/// Compute `Ψᵢ = ψᵢ ∘ (d × d)` on `H`: entry `(a,b) = d(a)ᵀ ψᵢ d(b)`.
pub fn psi_on_h(
    triple: &SeifertTriple,
    family: &BilinearFamily,
    i: usize,
) -> Result<Matrix, SeifertError> {
    let f = family
        .forms
        .get(i)
        .ok_or_else(|| SeifertError::Dimension(format!("form index {i} out of range")))?;
    if f.matrix.rows != triple.ambient.v_rank {
        return Err(SeifertError::Dimension(format!(
            "form `{}` is {}x{} but v_rank = {}",
            f.name, f.matrix.rows, f.matrix.cols, triple.ambient.v_rank
        )));
    }
    Ok(triple.d.mul(&f.matrix).mul(&triple.d.transpose()))
}

/// Transport a single bilinear form matrix on `V` to `H`.
pub fn form_on_h(triple: &SeifertTriple, psi: &Matrix) -> Result<Matrix, SeifertError> {
    if psi.rows != triple.ambient.v_rank || psi.cols != triple.ambient.v_rank {
        return Err(SeifertError::Dimension("form size != v_rank".into()));
    }
    Ok(triple.d.mul(psi).mul(&triple.d.transpose()))
}

/// Kinds of stabilization moves on Seifert triples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// `θ'(a,b) = 1, θ'(b,a) = 0`.
    ElemEnlargeUpper,
    /// `θ'(a,b) = 0, θ'(b,a) = 1`.
    ElemEnlargeLower,
    TrivialEnlarge,
    /// φ-enlargement; `variant_d = true` puts the φ matrix in the corner.
    PhiEnlarge { variant_d: bool },
}

/// Parameters of one move: the starred row/column/corner of the enlargement
/// block and the value `d(a)` of the new generator.
#[derive(Debug, Clone, PartialEq)]
pub struct MoveRecord {
    pub kind: MoveKind,
    /// New column of θ over H: entries `θ'(x, a)` for `x` in the old basis.
    pub col: Vec<Rat>,
    /// New row of θ over H: entries `θ'(a, x)`.
    pub row: Vec<Rat>,
    /// `θ'(a, a)`.
    pub corner: Rat,
    /// `d(a)` coordinates in `V`.
    pub d_a: Vec<Rat>,
}

impl MoveRecord {
    pub fn trivial() -> Self {
        MoveRecord {
            kind: MoveKind::TrivialEnlarge,
            col: Vec::new(),
            row: Vec::new(),
            corner: Rat::zero(),
            d_a: Vec::new(),
        }
    }
}

/// Apply an elementary enlargement; the new generators `a, b` are placed in
/// the last two rows/columns, `d(b) = 0`.
pub fn elementary_enlarge(
    triple: &SeifertTriple,
    mv: &MoveRecord,
) -> Result<SeifertTriple, SeifertError> {
    let h = triple.rank;
    let v = triple.ambient.v_rank;
    if mv.col.len() != h || mv.row.len() != h || mv.d_a.len() != v {
        return Err(SeifertError::BadMove(format!(
            "elementary enlargement wants row/col of length {h} and d_a of length {v}"
        )));
    }
    let (ab, ba) = match mv.kind {
        MoveKind::ElemEnlargeUpper => (Rat::one(), Rat::zero()),
        MoveKind::ElemEnlargeLower => (Rat::zero(), Rat::one()),
        _ => return Err(SeifertError::BadMove("not an elementary enlargement".into())),
    };
    let mut theta = Matrix::zero(h + 2, h + 2);
    for i in 0..h {
        for j in 0..h {
            theta[(i, j)] = triple.theta[(i, j)].clone();
        }
        theta[(i, h)] = mv.col[i].clone();
        theta[(h, i)] = mv.row[i].clone();
    }
    theta[(h, h)] = mv.corner.clone();
    theta[(h, h + 1)] = ab;
    theta[(h + 1, h)] = ba;
    let mut d = Matrix::zero(h + 2, v);
    for i in 0..h {
        for j in 0..v {
            d[(i, j)] = triple.d[(i, j)].clone();
        }
    }
    for j in 0..v {
        d[(h, j)] = mv.d_a[j].clone();
    }
    SeifertTriple::new(triple.ring, theta, d, triple.ambient.clone())
}

/// Search for a reducible pair `(a, b)` matching an elementary enlargement
/// block (up to simultaneous row/column permutation) and remove it.
/// Returns the reduced triple together with the indices removed.
pub fn elementary_reduce(
    triple: &SeifertTriple,
) -> Result<(SeifertTriple, (usize, usize)), SeifertError> {
    let h = triple.rank;
    for b in 0..h {
        // Row b and column b of θ must vanish away from a single partner a,
        // and the d-row of b must vanish.
        if (0..triple.ambient.v_rank).any(|j| !triple.d[(b, j)].is_zero()) {
            continue;
        }
        if !triple.theta[(b, b)].is_zero() {
            continue;
        }
        for a in 0..h {
            if a == b {
                continue;
            }
            let ab = &triple.theta[(a, b)];
            let ba = &triple.theta[(b, a)];
            let upper = ab.is_one() && ba.is_zero();
            let lower = ab.is_zero() && ba.is_one();
            if !(upper || lower) {
                continue;
            }
            let clean = (0..h).all(|k| {
                (k == a || k == b || triple.theta[(b, k)].is_zero())
                    && (k == a || k == b || triple.theta[(k, b)].is_zero())
            });
            if !clean {
                continue;
            }
            let keep: Vec<usize> = (0..h).filter(|&k| k != a && k != b).collect();
            let mut theta = Matrix::zero(h - 2, h - 2);
            for (ii, &i) in keep.iter().enumerate() {
                for (jj, &j) in keep.iter().enumerate() {
                    theta[(ii, jj)] = triple.theta[(i, j)].clone();
                }
            }
            let mut d = Matrix::zero(h - 2, triple.ambient.v_rank);
            for (ii, &i) in keep.iter().enumerate() {
                for j in 0..triple.ambient.v_rank {
                    d[(ii, j)] = triple.d[(i, j)].clone();
                }
            }
            let t = SeifertTriple::new(triple.ring, theta, d, triple.ambient.clone())?;
            return Ok((t, (a, b)));
        }
    }
    Err(SeifertError::NotReducible)
}

/// Trivial enlargement: a new generator with all θ-pairings zero and `d = 0`.
pub fn trivial_enlarge(triple: &SeifertTriple) -> SeifertTriple {
    let h = triple.rank;
    let v = triple.ambient.v_rank;
    let mut theta = Matrix::zero(h + 1, h + 1);
    for i in 0..h {
        for j in 0..h {
            theta[(i, j)] = triple.theta[(i, j)].clone();
        }
    }
    let mut d = Matrix::zero(h + 1, v);
    for i in 0..h {
        for j in 0..v {
            d[(i, j)] = triple.d[(i, j)].clone();
        }
    }
    SeifertTriple {
        ring: triple.ring,
        rank: h + 1,
        theta,
        d,
        ambient: triple.ambient.clone(),
    }
}

/// φ-enlargement: `H' = H ⊕ V`, `d'` extends `d` by the identity,
/// `Θ' = [[Θ, 0], [C, D]]` or `[[Θ, 0], [C, 0]]` with `C[w,a] = φ(w, d(a))`.
pub fn phi_enlarge(
    triple: &SeifertTriple,
    variant_d: bool,
) -> Result<SeifertTriple, SeifertError> {
    let phi = triple
        .ambient
        .phi
        .as_ref()
        .ok_or(SeifertError::MissingPhi)?;
    let h = triple.rank;
    let v = triple.ambient.v_rank;
    let c = phi.mul(&triple.d.transpose()); // v×h, entry (w, a) = φ(w, d(a))
    let mut theta = Matrix::zero(h + v, h + v);
    for i in 0..h {
        for j in 0..h {
            theta[(i, j)] = triple.theta[(i, j)].clone();
        }
    }
    for w in 0..v {
        for a in 0..h {
            theta[(h + w, a)] = c[(w, a)].clone();
        }
        if variant_d {
            for w2 in 0..v {
                theta[(h + w, h + w2)] = phi[(w, w2)].clone();
            }
        }
    }
    let mut d = Matrix::zero(h + v, v);
    for i in 0..h {
        for j in 0..v {
            d[(i, j)] = triple.d[(i, j)].clone();
        }
    }
    for w in 0..v {
        d[(h + w, w)] = Rat::one();
    }
    SeifertTriple::new(triple.ring, theta, d, triple.ambient.clone())
}

/// Restrict a triple to a subspace `W' ⊆ V` spanned by the columns of
/// `w_basis`: `H' = d⁻¹(W')`, θ and d restricted, the family restricted to
/// `W'`. Requires the rational ground ring.
pub fn restrict(
    triple: &SeifertTriple,
    family: &BilinearFamily,
    w_basis: &Matrix,
) -> Result<(SeifertTriple, BilinearFamily), SeifertError> {
    if triple.ring != GroundRing::Rationals {
        return Err(SeifertError::NonFieldGround);
    }
    let v = triple.ambient.v_rank;
    if w_basis.rows != v {
        return Err(SeifertError::Dimension(format!(
            "subspace basis must have {v} rows"
        )));
    }
    let k = w_basis.cols;
    // Annihilator of W' in the dual: columns K with (W')ᵀ·K = 0.
    let ann = w_basis.transpose().nullspace(); // v × (v - rank)
    let dk = triple.d.mul(&ann); // h × (v - rank)
    let y = dk.left_nullspace(); // rows form a basis of H'
    let r = y.rows;
    let theta = y.mul(&triple.theta).mul(&y.transpose());
    // Express d(H') in the W' basis: for each row, solve B·cᵀ = (y·D)ᵀ.
    let yd = y.mul(&triple.d); // r × v
    let mut d = Matrix::zero(r, k);
    for i in 0..r {
        let rhs: Vec<Rat> = (0..v).map(|j| yd[(i, j)].clone()).collect();
        let c = w_basis.solve(&rhs).ok_or_else(|| {
            SeifertError::Dimension("restricted d does not land in W'".into())
        })?;
        for j in 0..k {
            d[(i, j)] = c[j].clone();
        }
    }
    let bt = w_basis.transpose();
    let mut ambient = AmbientSpec::new(k);
    if let Some(bf) = &triple.ambient.boundary_form {
        ambient = ambient.with_boundary_form(bt.mul(bf).mul(w_basis))?;
    }
    if let Some(phi) = &triple.ambient.phi {
        let restricted = bt.mul(phi).mul(w_basis);
        let det = restricted.det();
        if restricted.is_skew() && (det == Rat::one() || det == -Rat::one()) {
            ambient = ambient.with_phi(restricted)?;
        }
    }
    let forms = family
        .forms
        .iter()
        .map(|f| NamedForm {
            name: f.name.clone(),
            matrix: bt.mul(&f.matrix).mul(w_basis),
            symmetry: f.symmetry,
        })
        .collect();
    let t = SeifertTriple::new(triple.ring, theta, d, ambient)?;
    Ok((t, BilinearFamily { forms }))
}

/// Check the relation `a·_F b = θ(a,b) − θ(b,a) − d(a)·_{∂M} d(b)` against a
/// supplied intersection matrix of `F`.
pub fn check_lemma22(
    triple: &SeifertTriple,
    intersection_f: &Matrix,
) -> Result<bool, SeifertError> {
    let bf = triple
        .ambient
        .boundary_form
        .as_ref()
        .ok_or(SeifertError::MissingBoundaryForm)?;
    if intersection_f.rows != triple.rank || intersection_f.cols != triple.rank {
        return Err(SeifertError::Dimension(
            "intersection matrix must be rank x rank".into(),
        ));
    }
    let defect = triple.d.mul(bf).mul(&triple.d.transpose());
    let rhs = triple.theta.sub(&triple.theta.transpose()).sub(&defect);
    Ok(*intersection_f == rhs)
}

/// One step of a fuzzed move walk.
#[derive(Debug, Clone)]
pub struct OrbitStep {
    pub triple: SeifertTriple,
    /// The move that produced this triple from the previous one; `None` for
    /// the initial entry. Reductions are recorded with the indices removed.
    pub applied: Option<AppliedMove>,
}

#[derive(Debug, Clone)]
pub enum AppliedMove {
    Enlarge(MoveRecord),
    Reduce { a: usize, b: usize },
}

/// Deterministic pseudo-random walk in the move calculus. `kinds` lists the
/// enlargement kinds to draw from; when `allow_reduce` is set the walk
/// occasionally undoes a reducible pair. Starred entries are drawn from
/// `{−2,…,2}`.
pub fn fuzz_orbit(
    triple: &SeifertTriple,
    kinds: &[MoveKind],
    n_moves: usize,
    seed: u64,
    allow_reduce: bool,
) -> Vec<OrbitStep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut orbit = vec![OrbitStep {
        triple: triple.clone(),
        applied: None,
    }];
    let mut current = triple.clone();
    for _ in 0..n_moves {
        let try_reduce = allow_reduce && current.rank >= 2 && rng.gen_range(0..3) == 0;
        if try_reduce {
            if let Ok((t, (a, b))) = elementary_reduce(&current) {
                current = t;
                orbit.push(OrbitStep {
                    triple: current.clone(),
                    applied: Some(AppliedMove::Reduce { a, b }),
                });
                continue;
            }
        }
        let kind = kinds[rng.gen_range(0..kinds.len())];
        let mv = random_move(&mut rng, &current, kind);
        let next = match mv.kind {
            MoveKind::TrivialEnlarge => trivial_enlarge(&current),
            MoveKind::PhiEnlarge { variant_d } => match phi_enlarge(&current, variant_d) {
                Ok(t) => t,
                Err(_) => continue,
            },
            _ => elementary_enlarge(&current, &mv).expect("generated move is well formed"),
        };
        current = next;
        orbit.push(OrbitStep {
            triple: current.clone(),
            applied: Some(AppliedMove::Enlarge(mv)),
        });
    }
    orbit
}

/// Draw a random move of the given kind with small integer parameters.
pub fn random_move(rng: &mut ChaCha8Rng, triple: &SeifertTriple, kind: MoveKind) -> MoveRecord {
    let h = triple.rank;
    let v = triple.ambient.v_rank;
    let small = |r: &mut ChaCha8Rng| Rat::from_integer(r.gen_range(-2i64..=2).into());
    match kind {
        MoveKind::TrivialEnlarge => MoveRecord::trivial(),
        MoveKind::PhiEnlarge { variant_d } => MoveRecord {
            kind: MoveKind::PhiEnlarge { variant_d },
            col: Vec::new(),
            row: Vec::new(),
            corner: Rat::zero(),
            d_a: Vec::new(),
        },
        k => MoveRecord {
            kind: k,
            col: (0..h).map(|_| small(rng)).collect(),
            row: (0..h).map(|_| small(rng)).collect(),
            corner: small(rng),
            d_a: (0..v).map(|_| small(rng)).collect(),
        },
    }
}

/// The standard skew block `J = [[0,1],[−1,0]]^{⊕g}`.
pub fn standard_symplectic(g: usize) -> Matrix {
    let mut m = Matrix::zero(2 * g, 2 * g);
    for i in 0..g {
        m[(2 * i, 2 * i + 1)] = Rat::one();
        m[(2 * i + 1, 2 * i)] = -Rat::one();
    }
    m
}
