//! Seeded random generators for property runs: triples, families, and
//! colored triples with small integer entries.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::colored::{ColoredMeta, ColoredSeifertTriple};
use crate::mat::Matrix;
use crate::ring::GroundRing;
use crate::seifert::{AmbientSpec, BilinearFamily, NamedForm, SeifertTriple, Symmetry};
use crate::Rat;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_int(rng: &mut ChaCha8Rng, bound: i64) -> Rat {
    Rat::from_integer(rng.gen_range(-bound..=bound).into())
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> Matrix {
    let mut m = Matrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = small_int(rng, bound);
        }
    }
    m
}

pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    let mut m = Matrix::zero(n, n);
    for i in 0..n {
        for j in i..n {
            let x = small_int(rng, bound);
            m[(i, j)] = x.clone();
            m[(j, i)] = x;
        }
    }
    m
}

pub fn random_skew(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> Matrix {
    let mut m = Matrix::zero(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = small_int(rng, bound);
            m[(i, j)] = x.clone();
            m[(j, i)] = -x;
        }
    }
    m
}

/// Random triple of the given rank over an ambient of rank `v`.
pub fn random_triple(
    rng: &mut ChaCha8Rng,
    ring: GroundRing,
    rank: usize,
    v: usize,
    bound: i64,
) -> SeifertTriple {
    SeifertTriple::new(
        ring,
        random_matrix(rng, rank, rank, bound),
        random_matrix(rng, rank, v, bound),
        AmbientSpec::new(v),
    )
    .expect("shapes are consistent")
}

/// Random family: `n_sym` symmetric forms followed by `n_skew` skew forms.
pub fn random_family(
    rng: &mut ChaCha8Rng,
    v: usize,
    n_sym: usize,
    n_skew: usize,
    bound: i64,
) -> BilinearFamily {
    let mut forms = Vec::new();
    for k in 0..n_sym {
        forms.push(NamedForm {
            name: format!("sym{}", k + 1),
            matrix: random_symmetric(rng, v, bound),
            symmetry: Symmetry::Symmetric,
        });
    }
    for k in 0..n_skew {
        forms.push(NamedForm {
            name: format!("skew{}", k + 1),
            matrix: random_skew(rng, v, bound),
            symmetry: Symmetry::Skew,
        });
    }
    BilinearFamily::new(forms).expect("tags match by construction")
}

/// Random colored triple with consistent meta. The component count is drawn
/// with `m ≡ rank + 1 (mod 2)` so the μ = 1 determinant parity matches the
/// surface relation `rank = 2g + m − 1`.
pub fn random_colored_triple(
    rng: &mut ChaCha8Rng,
    mu: usize,
    rank: usize,
    v: usize,
    bound: i64,
) -> ColoredSeifertTriple {
    let thetas = (0..(1usize << (mu - 1)))
        .map(|_| random_matrix(rng, rank, rank, bound))
        .collect();
    let d = random_matrix(rng, rank, v, bound);
    let m = if rank % 2 == 0 {
        1 + 2 * rng.gen_range(0..2usize)
    } else {
        2 + 2 * rng.gen_range(0..2usize)
    };
    let c_minus_ell = 2 * rng.gen_range(-2i64..=2);
    let ell = rng.gen_range(-2i64..=2);
    let meta = ColoredMeta {
        c: ell + c_minus_ell,
        ell,
        chi: (0..mu).map(|_| rng.gen_range(-2i64..=1)).collect(),
        m,
    };
    ColoredSeifertTriple::new(mu, thetas, d, AmbientSpec::new(v), meta, None)
        .expect("shapes are consistent")
}

/// Seed triples satisfying the boundary relation: θ − θᵀ − d·bf·dᵀ equals a
/// unimodular skew form for `m = 1` (used by the Δ(1,−1) checks). Built by
/// fixing the intersection form to the standard symplectic block and
/// choosing θ upper-triangular freely.
pub fn random_surface_like_triple(
    rng: &mut ChaCha8Rng,
    g: usize,
    v: usize,
    bound: i64,
) -> SeifertTriple {
    let rank = 2 * g;
    let inter = crate::seifert::standard_symplectic(g);
    let d = random_matrix(rng, rank, v, bound);
    let bf = random_skew(rng, v, bound);
    let defect = d.mul(&bf).mul(&d.transpose());
    // θ − θᵀ = inter + defect: put the strict upper part of the right side
    // into θ's upper triangle, keep the diagonal random.
    let rhs = inter.add(&defect);
    let mut theta = Matrix::zero(rank, rank);
    for i in 0..rank {
        theta[(i, i)] = small_int(rng, bound);
        for j in i + 1..rank {
            theta[(i, j)] = rhs[(i, j)].clone();
            // θ[(j, i)] stays 0: θ − θᵀ has (i, j) entry rhs[(i, j)].
        }
    }
    let ambient = AmbientSpec::new(v)
        .with_boundary_form(bf)
        .expect("skew by construction");
    SeifertTriple::new(GroundRing::Integers, theta, d, ambient).expect("consistent")
}

/// A unimodular skew matrix congruent to the standard block, for φ data:
/// `UᵀJU` with small unimodular `U`.
pub fn random_phi(rng: &mut ChaCha8Rng, g: usize) -> Matrix {
    let n = 2 * g;
    let j = crate::seifert::standard_symplectic(g);
    // Random unimodular U: product of a few elementary operations.
    let mut u = Matrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut k = rng.gen_range(0..n);
        while k == i {
            k = rng.gen_range(0..n);
        }
        let c = small_int(rng, 1);
        // row_i += c · row_k
        for col in 0..n {
            let add = &c * &u[(k, col)];
            u[(i, col)] += add;
        }
    }
    let phi = u.transpose().mul(&j).mul(&u);
    debug_assert!(phi.is_skew());
    debug_assert!(phi.det() == Rat::one());
    phi
}
