//! Alexander module presentations and the extended Alexander–Conway
//! polynomial `Δ_{L,ψ₁..ψₙ}(t, s₁..sₙ) = det(t^{1/2}Θ − t^{-1/2}Θᵀ +
//! t^{-1/2}Σ sᵢΨᵢ)`, together with its coefficient expansion, symmetry law,
//! genus bounds, and the two-boundary variant `Δ̃` defined up to powers of
//! `t^g`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::mat::Matrix;
use crate::ring::{LaurentPoly, PolyMatrix};
use crate::seifert::{psi_on_h, BilinearFamily, LinkMeta, SeifertError, SeifertTriple};
use crate::Rat;

/// Variable list for the extended polynomial: the half-power carrier `u`
/// (`t = u²`) followed by `s1..sn`.
pub fn alex_vars(n: usize) -> Vec<String> {
    let mut v = vec!["u".to_string()];
    for i in 1..=n {
        v.push(format!("s{i}"));
    }
    v
}

fn var_refs(vars: &[String]) -> Vec<&str> {
    vars.iter().map(|s| s.as_str()).collect()
}

/// Square presentation matrix `tΘ − Θᵀ + Σ sᵢΨᵢ` of the Alexander module,
/// over the variables `(u, s₁..sₙ)` with `t = u²`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlexanderPresentation {
    pub matrix: PolyMatrix,
    pub generators: usize,
}

pub fn presentation(
    triple: &SeifertTriple,
    family: &BilinearFamily,
) -> Result<AlexanderPresentation, SeifertError> {
    let h = triple.rank;
    let n = family.len();
    let vars = alex_vars(n);
    let vv = var_refs(&vars);
    let psis: Vec<Matrix> = (0..n)
        .map(|i| psi_on_h(triple, family, i))
        .collect::<Result<_, _>>()?;
    let mut m = PolyMatrix::zero(h, h, &vv);
    for i in 0..h {
        for j in 0..h {
            let mut e_t = vec![0i64; vars.len()];
            e_t[0] = 2;
            let mut p = LaurentPoly::monomial(&vv, &e_t, triple.theta[(i, j)].clone());
            p = p.add(&LaurentPoly::constant(&vv, -triple.theta[(j, i)].clone()));
            for (k, psi) in psis.iter().enumerate() {
                let mut e_s = vec![0i64; vars.len()];
                e_s[k + 1] = 1;
                p = p.add(&LaurentPoly::monomial(&vv, &e_s, psi[(i, j)].clone()));
            }
            m.set(i, j, p);
        }
    }
    Ok(AlexanderPresentation {
        matrix: m,
        generators: h,
    })
}

/// The extended Alexander–Conway polynomial, stored over `(u, s₁..sₙ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConwayPolynomial {
    pub value: LaurentPoly,
    /// Component count used by the parity normalization checks.
    pub m: usize,
}

impl ConwayPolynomial {
    /// All `u`-exponents are congruent to `1 − m` mod 2.
    pub fn parity_ok(&self) -> bool {
        let want = (1i64 - self.m as i64).rem_euclid(2);
        self.value.terms().all(|(e, _)| e[0].rem_euclid(2) == want)
    }

    /// Canonical text in `t` units (`u` exponents halved).
    pub fn render(&self) -> String {
        self.value.render(Some((0, "t")))
    }

    /// Evaluate at `t = ω` on the unit circle and the given complex
    /// `s`-values, using the principal branch for `t^{1/2}`.
    pub fn eval(&self, omega: Complex64, s: &[Complex64]) -> Complex64 {
        let u = omega.sqrt();
        let mut vals = vec![u];
        vals.extend_from_slice(s);
        self.value.eval_complex(&vals)
    }

    /// Evaluate the one-variable specialization at `t = x` (rational),
    /// requiring integer powers of `t` (odd `m`); panics otherwise.
    pub fn eval_rat_t(&self, x: &Rat, s: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in self.value.terms() {
            assert!(e[0] % 2 == 0, "half powers need a square argument");
            let mut term = c.clone();
            term = term * pow_rat(x, e[0] / 2);
            for (k, sv) in s.iter().enumerate() {
                term = term * pow_rat(sv, e[k + 1]);
            }
            acc += term;
        }
        acc
    }
}

fn pow_rat(x: &Rat, e: i64) -> Rat {
    if e == 0 {
        return Rat::from_integer(1.into());
    }
    let mut acc = Rat::from_integer(1.into());
    for _ in 0..e.unsigned_abs() {
        acc = acc * x;
    }
    if e < 0 {
        Rat::from_integer(1.into()) / acc
    } else {
        acc
    }
}

/// Raw determinant `det(uΘ − u⁻¹Θᵀ + u⁻¹ Σ sᵢΨᵢ)` without metadata checks.
pub fn conway_det(
    triple: &SeifertTriple,
    family: &BilinearFamily,
) -> Result<LaurentPoly, SeifertError> {
    let h = triple.rank;
    let n = family.len();
    let vars = alex_vars(n);
    let vv = var_refs(&vars);
    let psis: Vec<Matrix> = (0..n)
        .map(|i| psi_on_h(triple, family, i))
        .collect::<Result<_, _>>()?;
    let mut m = PolyMatrix::zero(h, h, &vv);
    for i in 0..h {
        for j in 0..h {
            let mut e_u = vec![0i64; vars.len()];
            e_u[0] = 1;
            let mut p = LaurentPoly::monomial(&vv, &e_u, triple.theta[(i, j)].clone());
            let mut e_d = vec![0i64; vars.len()];
            e_d[0] = -1;
            p = p.add(&LaurentPoly::monomial(
                &vv,
                &e_d,
                -triple.theta[(j, i)].clone(),
            ));
            for (k, psi) in psis.iter().enumerate() {
                let mut e_s = vec![0i64; vars.len()];
                e_s[0] = -1;
                e_s[k + 1] = 1;
                p = p.add(&LaurentPoly::monomial(&vv, &e_s, psi[(i, j)].clone()));
            }
            m.set(i, j, p);
        }
    }
    Ok(m.det().expect("square by construction"))
}

/// The extended Alexander–Conway polynomial of a triple with link metadata
/// `(m, g)`; the triple's rank must equal `2g + m − 1`.
pub fn alexander_conway(
    triple: &SeifertTriple,
    family: &BilinearFamily,
    meta: LinkMeta,
) -> Result<ConwayPolynomial, SeifertError> {
    meta.check(triple.rank)?;
    let value = conway_det(triple, family)?;
    Ok(ConwayPolynomial { value, m: meta.m })
}

/// Expand `Δ = Σ Δ^{(i₁..iₙ)}(t) s₁^{i₁}…sₙ^{iₙ}`; keys are the `s`-exponent
/// vectors, values are polynomials in `u` alone.
pub fn coefficient_expand(delta: &ConwayPolynomial) -> BTreeMap<Vec<i64>, LaurentPoly> {
    let mut out: BTreeMap<Vec<i64>, LaurentPoly> = BTreeMap::new();
    for (e, c) in delta.value.terms() {
        let key: Vec<i64> = e[1..].to_vec();
        let entry = out
            .entry(key)
            .or_insert_with(|| LaurentPoly::zero(&["u"]));
        *entry = entry.add(&LaurentPoly::monomial(&["u"], &[e[0]], c.clone()));
    }
    out
}

/// Check `deg_{sᵢ} Δ ≤ rank ψᵢ` for every form of the family.
pub fn degree_bounds_ok(
    delta: &ConwayPolynomial,
    family: &BilinearFamily,
) -> bool {
    for (i, f) in family.forms.iter().enumerate() {
        let bound = f.matrix.rank() as i64;
        if let Some(d) = delta.value.degree(i + 1) {
            if d > bound {
                return false;
            }
        }
    }
    true
}

/// Verify the symmetry law
/// `Δ_{L,ψ₁..ψₙ}(t⁻¹, s₁t⁻¹, …) = (−1)^{m−1} Δ_{L,−ψᵀ₁..−ψᵀₙ}(t, s₁, …)`
/// as an exact polynomial identity.
pub fn check_symmetry(
    triple: &SeifertTriple,
    family: &BilinearFamily,
    meta: LinkMeta,
) -> Result<bool, SeifertError> {
    let delta = alexander_conway(triple, family, meta)?;
    let n = family.len();
    let vars = alex_vars(n);
    let vv = var_refs(&vars);
    let mut map = BTreeMap::new();
    let mut e_u = vec![0i64; vars.len()];
    e_u[0] = -1;
    map.insert(
        "u".to_string(),
        LaurentPoly::monomial(&vv, &e_u, Rat::from_integer(1.into())),
    );
    for i in 1..=n {
        let mut e = vec![0i64; vars.len()];
        e[0] = -2;
        e[i] = 1;
        map.insert(
            format!("s{i}"),
            LaurentPoly::monomial(&vv, &e, Rat::from_integer(1.into())),
        );
    }
    let lhs = delta
        .value
        .substitute(&vv, &map)
        .map_err(|e| SeifertError::BadMove(format!("substitution failed: {e}")))?;
    let rhs_poly = conway_det(triple, &family.neg_transpose())?;
    let rhs = if meta.m % 2 == 0 {
        rhs_poly.neg()
    } else {
        rhs_poly
    };
    Ok(lhs == rhs)
}

/// Genus lower bound `(span_t Δ + 1 − m)/2`; `None` when `Δ = 0`.
pub fn genus_lower_bound(delta: &ConwayPolynomial, m: usize) -> Option<Rat> {
    let u_span = delta.value.span(0).ok()?;
    // span in t units is u_span/2.
    Some(Rat::new(
        (u_span + 2 - 2 * m as i64).into(),
        4.into(),
    ))
}

/// Genus upper bound of the generalized Seifert algorithm,
/// `1 + (n − γ − m)/2 + (γ − γ₀)·max{1, g}`, together with the combined
/// span bound `n + 1 − γ + 2(γ − γ₀)·max{1, g}`.
pub fn genus_upper_bound(
    n: usize,
    gamma: usize,
    gamma0: usize,
    m: usize,
    g_sigma: usize,
) -> Result<(Rat, Rat), SeifertError> {
    if gamma0 > gamma || gamma == 0 {
        return Err(SeifertError::Dimension(
            "need gamma0 <= gamma and gamma >= 1".into(),
        ));
    }
    let maxg = 1.max(g_sigma) as i64;
    let bound = Rat::from_integer(1.into())
        + Rat::new(
            (n as i64 - gamma as i64 - m as i64).into(),
            2.into(),
        )
        + Rat::from_integer(((gamma as i64 - gamma0 as i64) * maxg).into());
    let span_bound = Rat::from_integer(
        (n as i64 + 1 - gamma as i64 + 2 * (gamma as i64 - gamma0 as i64) * maxg).into(),
    );
    Ok((bound, span_bound))
}

/// `Δ̃` of the two-boundary case: the extended polynomial with `ψ = −φ`,
/// well defined up to multiplication by integer powers of `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaTilde {
    /// The raw determinant value over `u`.
    pub raw: LaurentPoly,
    /// Canonical representative: raw shifted so its minimum `u`-exponent
    /// is zero (zero polynomial stays zero).
    pub class_rep: LaurentPoly,
}

pub fn delta_tilde(triple: &SeifertTriple) -> Result<DeltaTilde, SeifertError> {
    let phi = triple
        .ambient
        .phi
        .as_ref()
        .ok_or(SeifertError::MissingPhi)?;
    let psi = crate::seifert::form_on_h(triple, &phi.neg())?;
    // det(uΘ − u⁻¹Θᵀ + u⁻¹Ψ) over u alone.
    let vv = ["u"];
    let h = triple.rank;
    let mut m = PolyMatrix::zero(h, h, &vv);
    for i in 0..h {
        for j in 0..h {
            let p = LaurentPoly::monomial(&vv, &[1], triple.theta[(i, j)].clone())
                .add(&LaurentPoly::monomial(
                    &vv,
                    &[-1],
                    &psi[(i, j)] - &triple.theta[(j, i)],
                ));
            m.set(i, j, p);
        }
    }
    let raw = m.det().expect("square");
    let class_rep = match raw.min_exponents() {
        Some(mins) => raw.shift(&[-mins[0]]),
        None => raw.clone(),
    };
    Ok(DeltaTilde { raw, class_rep })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::GroundRing;
    use crate::seifert::{standard_symplectic, AmbientSpec, NamedForm, Symmetry};
    use crate::{int, rat};

    fn trefoil() -> SeifertTriple {
        SeifertTriple::new(
            GroundRing::Integers,
            Matrix::from_i64(&[&[-1, 1], &[0, -1]]),
            Matrix::zero(2, 0),
            AmbientSpec::new(0),
        )
        .unwrap()
    }

    fn example_33(g: usize) -> (SeifertTriple, BilinearFamily) {
        // Θ = 0 of rank 2g, Ψ = s·J^{⊕g} via d = identity.
        let amb = AmbientSpec::new(2 * g);
        let t = SeifertTriple::new(
            GroundRing::Integers,
            Matrix::zero(2 * g, 2 * g),
            Matrix::identity(2 * g),
            amb,
        )
        .unwrap();
        let fam = BilinearFamily::new(vec![NamedForm {
            name: "psi1".into(),
            matrix: standard_symplectic(g),
            symmetry: Symmetry::Skew,
        }])
        .unwrap();
        (t, fam)
    }

    #[test]
    fn presentation_trefoil() {
        // t[[−1,1],[0,−1]] − [[−1,0],[1,−1]] = [[1−t, t],[−1, 1−t]]
        let p = presentation(&trefoil(), &BilinearFamily::empty()).unwrap();
        let vars = alex_vars(0);
        let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let one_minus_t = LaurentPoly::parse("1 - u^2", &vv, None).unwrap();
        let t = LaurentPoly::parse("u^2", &vv, None).unwrap();
        let minus_one = LaurentPoly::parse("-1", &vv, None).unwrap();
        assert_eq!(p.matrix.at(0, 0), &one_minus_t);
        assert_eq!(p.matrix.at(0, 1), &t);
        assert_eq!(p.matrix.at(1, 0), &minus_one);
        assert_eq!(p.matrix.at(1, 1), &one_minus_t);
    }

    #[test]
    fn presentation_empty_and_theta_zero() {
        let e = SeifertTriple::empty(GroundRing::Integers, AmbientSpec::new(0));
        let p = presentation(&e, &BilinearFamily::empty()).unwrap();
        assert_eq!(p.generators, 0);
        let (t, fam) = example_33(1);
        let p = presentation(&t, &fam).unwrap();
        // Θ = 0 so every entry is s₁·J-entry.
        let vars = alex_vars(1);
        let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        assert_eq!(
            p.matrix.at(0, 1),
            &LaurentPoly::parse("s1", &vv, None).unwrap()
        );
        assert!(p.matrix.at(0, 0).is_zero());
    }

    #[test]
    fn conway_unknot_and_trefoil() {
        let e = SeifertTriple::empty(GroundRing::Integers, AmbientSpec::new(0));
        let d = alexander_conway(&e, &BilinearFamily::empty(), LinkMeta { m: 1, g: 0 }).unwrap();
        assert_eq!(d.render(), "1");
        let d3 = alexander_conway(&trefoil(), &BilinearFamily::empty(), LinkMeta { m: 1, g: 1 })
            .unwrap();
        assert_eq!(d3.render(), "t^-1 - 1 + t");
        assert!(d3.parity_ok());
    }

    #[test]
    fn conway_example_33() {
        for g in 1..=3usize {
            let (t, fam) = example_33(g);
            let d = alexander_conway(&t, &fam, LinkMeta { m: 1, g: g as u32 }).unwrap();
            // Δ = t^{−g} s^{2g}
            let vars = alex_vars(1);
            let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            let expect = LaurentPoly::monomial(
                &vv,
                &[-2 * g as i64, 2 * g as i64],
                int(1),
            );
            assert_eq!(d.value, expect);
        }
    }

    #[test]
    fn conway_rejects_bad_meta() {
        let t = trefoil();
        assert!(alexander_conway(&t, &BilinearFamily::empty(), LinkMeta { m: 2, g: 1 }).is_err());
    }

    #[test]
    fn coefficient_expansion() {
        let (t, fam) = example_33(1);
        let d = alexander_conway(&t, &fam, LinkMeta { m: 1, g: 1 }).unwrap();
        let coeffs = coefficient_expand(&d);
        assert_eq!(coeffs.len(), 1);
        let p = coeffs.get(&vec![2]).unwrap();
        assert_eq!(p, &LaurentPoly::monomial(&["u"], &[-2], int(1)));
        // n = 1 with no s-dependence: single key (0).
        let d3 = alexander_conway(&trefoil(), &BilinearFamily::empty(), LinkMeta { m: 1, g: 1 })
            .unwrap();
        let c3 = coefficient_expand(&d3);
        assert_eq!(c3.len(), 1);
        assert!(c3.contains_key(&Vec::<i64>::new()));
    }

    #[test]
    fn symmetry_law_examples() {
        let e = SeifertTriple::empty(GroundRing::Integers, AmbientSpec::new(0));
        assert!(check_symmetry(&e, &BilinearFamily::empty(), LinkMeta { m: 1, g: 0 }).unwrap());
        assert!(
            check_symmetry(&trefoil(), &BilinearFamily::empty(), LinkMeta { m: 1, g: 1 }).unwrap()
        );
        let (t, fam) = example_33(1);
        assert!(check_symmetry(&t, &fam, LinkMeta { m: 1, g: 1 }).unwrap());
    }

    #[test]
    fn genus_bounds() {
        let d3 = alexander_conway(&trefoil(), &BilinearFamily::empty(), LinkMeta { m: 1, g: 1 })
            .unwrap();
        assert_eq!(genus_lower_bound(&d3, 1).unwrap(), int(1));
        let e = SeifertTriple::empty(GroundRing::Integers, AmbientSpec::new(0));
        let d1 = alexander_conway(&e, &BilinearFamily::empty(), LinkMeta { m: 1, g: 0 }).unwrap();
        assert_eq!(genus_lower_bound(&d1, 1).unwrap(), int(0));
        let (t, fam) = example_33(1);
        let dex = alexander_conway(&t, &fam, LinkMeta { m: 1, g: 1 }).unwrap();
        // t-span of t^{−g}s^{2g} is 0.
        assert_eq!(genus_lower_bound(&dex, 1).unwrap(), int(0));

        assert_eq!(
            genus_upper_bound(3, 2, 2, 1, 0).unwrap().0,
            int(1)
        );
        assert_eq!(genus_upper_bound(0, 1, 1, 1, 0).unwrap().0, int(0));
        assert_eq!(genus_upper_bound(2, 2, 1, 1, 1).unwrap().0, rat(3, 2));
    }

    #[test]
    fn skein_matrix_identity() {
        // Bordered triples per the skein proof: corner α vs α+1, Ψ border
        // fixed; Δ₊ − Δ₋ = (t^{−1/2} − t^{1/2}) Δ₀.
        let theta0 = Matrix::from_i64(&[&[-1, 1], &[0, -1]]);
        let border_col = [int(2), int(0)];
        let border_row = [int(-1), int(1)];
        for alpha in [-2i64, 0, 3] {
            let mk = |corner: i64| {
                let mut th = Matrix::zero(3, 3);
                for i in 0..2 {
                    for j in 0..2 {
                        th[(i, j)] = theta0[(i, j)].clone();
                    }
                    th[(i, 2)] = border_col[i].clone();
                    th[(2, i)] = border_row[i].clone();
                }
                th[(2, 2)] = int(corner);
                SeifertTriple::new(
                    GroundRing::Integers,
                    th,
                    Matrix::zero(3, 0),
                    AmbientSpec::new(0),
                )
                .unwrap()
            };
            let plus = conway_det(&mk(alpha), &BilinearFamily::empty()).unwrap();
            let minus = conway_det(&mk(alpha + 1), &BilinearFamily::empty()).unwrap();
            let zero = conway_det(
                &SeifertTriple::new(
                    GroundRing::Integers,
                    theta0.clone(),
                    Matrix::zero(2, 0),
                    AmbientSpec::new(0),
                )
                .unwrap(),
                &BilinearFamily::empty(),
            )
            .unwrap();
            let vars = alex_vars(0);
            let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            let factor = LaurentPoly::parse("u^-1 - u", &vv, None).unwrap();
            assert_eq!(plus.sub(&minus), factor.mul(&zero));
        }
    }

    #[test]
    fn delta_tilde_phi_enlarge_factor() {
        use crate::seifert::phi_enlarge;
        let g = 1usize;
        let amb = AmbientSpec::new(2 * g)
            .with_phi(standard_symplectic(g))
            .unwrap();
        // A knot-marked seed: rank 2, θ the trefoil matrix, d = identity.
        let t = SeifertTriple::new(
            GroundRing::Integers,
            Matrix::from_i64(&[&[-1, 1], &[0, -1]]),
            Matrix::identity(2),
            amb,
        )
        .unwrap();
        let before = delta_tilde(&t).unwrap();
        let after = delta_tilde(&phi_enlarge(&t, false).unwrap()).unwrap();
        // Variant `zero` multiplies the raw value by exactly t^{−g} = u^{−2g}.
        assert_eq!(after.raw, before.raw.shift(&[-2 * g as i64]));
        assert_eq!(after.class_rep, before.class_rep);
        // Variant `D` shifts by t^{+g}; the class is unchanged either way.
        let after_d = delta_tilde(&phi_enlarge(&t, true).unwrap()).unwrap();
        assert_eq!(after_d.raw, before.raw.shift(&[2 * g as i64]));
        assert_eq!(after_d.class_rep, before.class_rep);
    }

    #[test]
    fn delta_tilde_requires_phi() {
        let t = trefoil();
        assert!(matches!(delta_tilde(&t), Err(SeifertError::MissingPhi)));
    }

    #[test]
    fn delta_tilde_empty_is_one() {
        let amb = AmbientSpec::new(2)
            .with_phi(standard_symplectic(1))
            .unwrap();
        let e = SeifertTriple::empty(GroundRing::Integers, amb);
        let d = delta_tilde(&e).unwrap();
        assert_eq!(d.class_rep, LaurentPoly::one(&["u"]));
    }

    #[test]
    fn degree_bound_rank_one_form() {
        // Rank-4 triple with a rank-1 symmetric ψ: deg_s Δ ≤ 1.
        let amb = AmbientSpec::new(2);
        let mut d = Matrix::zero(4, 2);
        d[(0, 0)] = int(1);
        d[(1, 1)] = int(1);
        d[(2, 0)] = int(1);
        d[(3, 1)] = int(2);
        let t = SeifertTriple::new(
            GroundRing::Integers,
            Matrix::from_i64(&[&[1, 0, 2, -1], &[1, 1, 0, 0], &[0, 2, -1, 1], &[1, 0, 0, 1]]),
            d,
            amb,
        )
        .unwrap();
        let mut rank1 = Matrix::zero(2, 2);
        rank1[(0, 0)] = int(1);
        let fam = BilinearFamily::new(vec![NamedForm {
            name: "p".into(),
            matrix: rank1,
            symmetry: Symmetry::Symmetric,
        }])
        .unwrap();
        let delta = ConwayPolynomial {
            value: conway_det(&t, &fam).unwrap(),
            m: 1,
        };
        assert!(degree_bounds_ok(&delta, &fam));
        for (key, _) in coefficient_expand(&delta) {
            assert!(key[0] <= 1);
        }
    }
}
