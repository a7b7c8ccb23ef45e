//! Exact multivariate Laurent polynomial arithmetic and determinants.
//!
//! Scalars are arbitrary-precision rationals. Half powers of `t` are
//! represented by integer powers of an internal variable `u` with `t = u²`;
//! the rendering layer reports exponents in `t` units, so `u³` prints as
//! `t^(3/2)`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::Rat;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum RingError {
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VariableMismatch(Vec<String>, Vec<String>),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("substitution for `{0}` must be an invertible monomial (negative exponent)")]
    NonInvertibleSubstitution(String),
    #[error("no substitution target for variable `{0}`")]
    MissingSubstitution(String),
    #[error("span of the zero polynomial is undefined")]
    ZeroSpan,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Ground ring of scalars: the integers or the rationals.
///
/// All scalars are stored as exact rationals; `Integers` is a validation tag
/// asserting that every scalar in a computation is integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroundRing {
    Integers,
    Rationals,
}

impl GroundRing {
    pub fn admits(&self, x: &Rat) -> bool {
        match self {
            GroundRing::Integers => x.is_integer(),
            GroundRing::Rationals => true,
        }
    }
}

impl fmt::Display for GroundRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundRing::Integers => write!(f, "Z"),
            GroundRing::Rationals => write!(f, "Q"),
        }
    }
}

/// Exact multivariate Laurent polynomial.
///
/// Terms map exponent vectors (negative entries allowed) to nonzero rational
/// coefficients; the `BTreeMap` keeps them in lexicographic order so equality
/// is bit-exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<i64>, Rat>,
}

impl LaurentPoly {
    pub fn zero(vars: &[&str]) -> Self {
        LaurentPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_of(vars: &[String]) -> Self {
        LaurentPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rat) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; p.vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The monomial `c · ∏ varsᵢ^{exps[i]}`.
    pub fn monomial(vars: &[&str], exps: &[i64], c: Rat) -> Self {
        assert_eq!(vars.len(), exps.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps.to_vec(), c);
        }
        p
    }

    /// The variable `vars[idx]` as a polynomial.
    pub fn var(vars: &[&str], idx: usize) -> Self {
        let mut exps = vec![0i64; vars.len()];
        exps[idx] = 1;
        Self::monomial(vars, &exps, Rat::one())
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[i64]) -> Rat {
        self.terms.get(exps).cloned().unwrap_or_else(Rat::zero)
    }

    /// True when the polynomial is a single term (a unit of the Laurent ring
    /// when the coefficient ring is a field).
    pub fn as_monomial(&self) -> Option<(Vec<i64>, Rat)> {
        if self.terms.len() == 1 {
            let (e, c) = self.terms.iter().next().unwrap();
            Some((e.clone(), c.clone()))
        } else {
            None
        }
    }

    fn check_vars(&self, other: &Self) -> Result<(), RingError> {
        if self.vars != other.vars {
            Err(RingError::VariableMismatch(
                self.vars.clone(),
                other.vars.clone(),
            ))
        } else {
            Ok(())
        }
    }

    fn insert_term(terms: &mut BTreeMap<Vec<i64>, Rat>, e: Vec<i64>, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_vars(other).expect("poly add: variable mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_term(&mut terms, e.clone(), c.clone());
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_vars(other).expect("poly sub: variable mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            Self::insert_term(&mut terms, e.clone(), -c.clone());
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other).expect("poly mul: variable mismatch");
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                Self::insert_term(&mut terms, e, ca * cb);
            }
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero_of(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (e.clone(), k * c))
                .collect(),
        }
    }

    /// Multiply by the monomial `∏ varsᵢ^{shift[i]}`.
    pub fn shift(&self, shift: &[i64]) -> Self {
        assert_eq!(shift.len(), self.vars.len());
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    (
                        e.iter().zip(shift).map(|(a, b)| a + b).collect(),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let vv: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut acc = Self::one(&vv);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Componentwise minimum of exponent vectors over all terms.
    pub fn min_exponents(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| (*a).min(*b)).collect()
        }))
    }

    /// Span (max minus min exponent) of the given variable. Errors on zero.
    pub fn span(&self, var_idx: usize) -> Result<i64, RingError> {
        if self.is_zero() {
            return Err(RingError::ZeroSpan);
        }
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for e in self.terms.keys() {
            lo = lo.min(e[var_idx]);
            hi = hi.max(e[var_idx]);
        }
        Ok(hi - lo)
    }

    /// Maximum exponent of a variable (degree); None when zero.
    pub fn degree(&self, var_idx: usize) -> Option<i64> {
        self.terms.keys().map(|e| e[var_idx]).max()
    }

    /// Substitute variables by Laurent polynomials over the target variable
    /// list. Variables absent from `map` must exist in `target_vars` under
    /// the same name. A variable occurring with negative exponents must map
    /// to an invertible monomial.
    pub fn substitute(
        &self,
        target_vars: &[&str],
        map: &BTreeMap<String, LaurentPoly>,
    ) -> Result<LaurentPoly, RingError> {
        let mut images: Vec<LaurentPoly> = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            if let Some(img) = map.get(v) {
                images.push(img.clone());
            } else if let Some(idx) = target_vars.iter().position(|t| t == v) {
                images.push(LaurentPoly::var(target_vars, idx));
            } else {
                return Err(RingError::MissingSubstitution(v.clone()));
            }
        }
        let mut acc = LaurentPoly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut term = LaurentPoly::constant(target_vars, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                if exp > 0 {
                    term = term.mul(&images[i].pow(exp as u32));
                } else {
                    let (me, mc) = images[i].as_monomial().ok_or_else(|| {
                        RingError::NonInvertibleSubstitution(self.vars[i].clone())
                    })?;
                    if mc.is_zero() {
                        return Err(RingError::NonInvertibleSubstitution(self.vars[i].clone()));
                    }
                    let inv_e: Vec<i64> = me.iter().map(|k| -k).collect();
                    let inv = LaurentPoly::monomial(target_vars, &inv_e, Rat::one() / mc);
                    term = term.mul(&inv.pow((-exp) as u32));
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Exact division: returns `Some(q)` with `self = q · d` or `None`.
    pub fn try_div(&self, d: &Self) -> Option<LaurentPoly> {
        self.check_vars(d).ok()?;
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero_of(&self.vars));
        }
        // Shift both to nonnegative exponents and divide in the polynomial ring.
        let sa = self.min_exponents().unwrap();
        let sd = d.min_exponents().unwrap();
        let neg_sa: Vec<i64> = sa.iter().map(|x| -x).collect();
        let neg_sd: Vec<i64> = sd.iter().map(|x| -x).collect();
        let a = self.shift(&neg_sa);
        let b = d.shift(&neg_sd);
        let mut r = a;
        let mut q_terms: BTreeMap<Vec<i64>, Rat> = BTreeMap::new();
        let (lead_b, lead_bc) = {
            let (e, c) = b.terms.iter().next_back().unwrap();
            (e.clone(), c.clone())
        };
        while !r.is_zero() {
            let (lead_r, lead_rc) = {
                let (e, c) = r.terms.iter().next_back().unwrap();
                (e.clone(), c.clone())
            };
            let me: Vec<i64> = lead_r
                .iter()
                .zip(&lead_b)
                .map(|(a, b)| a - b)
                .collect();
            if me.iter().any(|&x| x < 0) {
                return None;
            }
            let mc = lead_rc / &lead_bc;
            Self::insert_term(&mut q_terms, me.clone(), mc.clone());
            let vv: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
            let m = LaurentPoly::monomial(&vv, &me, mc);
            r = r.sub(&m.mul(&b));
        }
        let q = LaurentPoly {
            vars: self.vars.clone(),
            terms: q_terms,
        };
        // Undo the shifts: self = q' · d with q' = q · x^{sa - sd}.
        let back: Vec<i64> = sa.iter().zip(&sd).map(|(a, b)| a - b).collect();
        Some(q.shift(&back))
    }

    /// Evaluate at a complex point (one value per variable).
    pub fn eval_complex(&self, vals: &[Complex64]) -> Complex64 {
        assert_eq!(vals.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (i, &k) in e.iter().enumerate() {
                t *= vals[i].powi(k as i32);
            }
            acc += t;
        }
        acc
    }

    /// Sum of coefficient magnitudes, as f64 (for numeric tolerances).
    pub fn coeff_l1_norm(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(0.0))
            .sum()
    }

    /// Canonical text form. When `half` names a variable index, that
    /// variable is printed under `half_name` with halved exponents:
    /// `u³ → t^(3/2)`, `u² → t`.
    pub fn render(&self, half: Option<(usize, &str)>) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            for (vi, &exp) in e.iter().enumerate() {
                if exp == 0 {
                    continue;
                }
                let piece = if let Some((hi, hname)) = half {
                    if vi == hi {
                        render_half_var(hname, exp)
                    } else {
                        render_var(&self.vars[vi], exp)
                    }
                } else {
                    render_var(&self.vars[vi], exp)
                };
                factors.push(piece);
            }
            if factors.is_empty() {
                out.push_str(&render_rat(&mag));
            } else {
                if !mag.is_one() {
                    out.push_str(&render_rat(&mag));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Parse the canonical text form produced by [`render`](Self::render).
    pub fn parse(
        s: &str,
        vars: &[&str],
        half: Option<(usize, &str)>,
    ) -> Result<LaurentPoly, RingError> {
        let s = s.trim();
        let mut p = LaurentPoly::zero(vars);
        if s == "0" {
            return Ok(p);
        }
        // Split into signed terms.
        let mut terms: Vec<(i64, String)> = Vec::new();
        let mut rest = s;
        let mut sign = 1i64;
        if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        }
        loop {
            let plus = rest.find(" + ");
            let minus = rest.find(" - ");
            let cut = match (plus, minus) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (Some(a), None) => Some(a),
                (None, Some(b)) => Some(b),
                (None, None) => None,
            };
            match cut {
                Some(pos) => {
                    terms.push((sign, rest[..pos].to_string()));
                    sign = if rest[pos..].starts_with(" + ") { 1 } else { -1 };
                    rest = &rest[pos + 3..];
                }
                None => {
                    terms.push((sign, rest.to_string()));
                    break;
                }
            }
        }
        for (sgn, t) in terms {
            let (exps, coeff) = parse_term(&t, vars, half)?;
            let c = coeff * Rat::from_integer(sgn.into());
            LaurentPoly::insert_term(&mut p.terms, exps, c);
        }
        Ok(p)
    }
}

fn render_var(name: &str, exp: i64) -> String {
    if exp == 1 {
        name.to_string()
    } else {
        format!("{}^{}", name, exp)
    }
}

fn render_half_var(name: &str, u_exp: i64) -> String {
    if u_exp % 2 == 0 {
        render_var(name, u_exp / 2)
    } else {
        format!("{}^({}/2)", name, u_exp)
    }
}

pub(crate) fn render_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn parse_rat(s: &str) -> Result<Rat, RingError> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<num_bigint::BigInt, RingError> {
        t.parse()
            .map_err(|_| RingError::Parse(format!("bad integer `{t}`")))
    };
    if let Some((n, d)) = s.split_once('/') {
        let dd = parse_int(d)?;
        if dd.is_zero() {
            return Err(RingError::Parse("zero denominator".into()));
        }
        Ok(Rat::new(parse_int(n)?, dd))
    } else {
        Ok(Rat::from_integer(parse_int(s)?))
    }
}

fn parse_term(
    t: &str,
    vars: &[&str],
    half: Option<(usize, &str)>,
) -> Result<(Vec<i64>, Rat), RingError> {
    let mut exps = vec![0i64; vars.len()];
    let mut coeff = Rat::one();
    for factor in t.split('*') {
        let f = factor.trim();
        if f.is_empty() {
            return Err(RingError::Parse(format!("empty factor in `{t}`")));
        }
        if f.chars().next().unwrap().is_ascii_digit() {
            coeff *= parse_rat(f)?;
            continue;
        }
        let (name, exp_str) = match f.split_once('^') {
            Some((n, e)) => (n, Some(e)),
            None => (f, None),
        };
        // Half-power variable printed under a different display name.
        if let Some((hi, hname)) = half {
            if name == hname {
                let u_exp = match exp_str {
                    None => 2,
                    Some(e) => {
                        if let Some(inner) = e.strip_prefix('(').and_then(|x| x.strip_suffix(")")) {
                            let (num, den) = inner.split_once('/').ok_or_else(|| {
                                RingError::Parse(format!("bad half exponent `{e}`"))
                            })?;
                            if den.trim() != "2" {
                                return Err(RingError::Parse(format!(
                                    "half exponents must have denominator 2, got `{e}`"
                                )));
                            }
                            num.trim().parse::<i64>().map_err(|_| {
                                RingError::Parse(format!("bad half exponent `{e}`"))
                            })?
                        } else {
                            2 * e.parse::<i64>().map_err(|_| {
                                RingError::Parse(format!("bad exponent `{e}`"))
                            })?
                        }
                    }
                };
                exps[hi] += u_exp;
                continue;
            }
        }
        let idx = vars
            .iter()
            .position(|v| *v == name)
            .ok_or_else(|| RingError::Parse(format!("unknown variable `{name}`")))?;
        let exp = match exp_str {
            None => 1,
            Some(e) => e
                .parse::<i64>()
                .map_err(|_| RingError::Parse(format!("bad exponent `{e}`")))?,
        };
        exps[idx] += exp;
    }
    Ok((exps, coeff))
}

/// Dense rectangular matrix of Laurent polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    pub rows: usize,
    pub cols: usize,
    vars: Vec<String>,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<LaurentPoly>) -> Self {
        assert_eq!(entries.len(), rows * cols);
        assert!(
            !entries.is_empty(),
            "use PolyMatrix::zero to build empty matrices (it carries the variable list)"
        );
        let vars = entries[0].vars().to_vec();
        for e in &entries {
            assert_eq!(e.vars(), &vars[..], "mixed variable lists in matrix");
        }
        PolyMatrix {
            rows,
            cols,
            vars,
            entries,
        }
    }

    pub fn zero(rows: usize, cols: usize, vars: &[&str]) -> Self {
        PolyMatrix {
            rows,
            cols,
            vars: vars.iter().map(|s| s.to_string()).collect(),
            entries: vec![LaurentPoly::zero(vars); rows * cols],
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn at(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.push(self.at(i, j).clone());
            }
        }
        PolyMatrix {
            rows: self.cols,
            cols: self.rows,
            vars: self.vars.clone(),
            entries: out,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let vars = self.vars.clone();
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero_of(&vars);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                out.push(acc);
            }
        }
        PolyMatrix {
            rows: self.rows,
            cols: other.cols,
            vars,
            entries: out,
        }
    }

    pub fn scale_poly(&self, p: &LaurentPoly) -> Self {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            vars: self.vars.clone(),
            entries: self.entries.iter().map(|e| e.mul(p)).collect(),
        }
    }

    /// Exact determinant. Cofactor expansion up to 4×4, fraction-free
    /// Bareiss elimination above that. The 0×0 determinant is 1.
    pub fn det(&self) -> Result<LaurentPoly, RingError> {
        if self.rows != self.cols {
            return Err(RingError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows <= 4 {
            Ok(self.det_cofactor())
        } else {
            Ok(self.det_bareiss())
        }
    }

    /// Determinant by cofactor expansion along the first row.
    pub fn det_cofactor(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let vars = self.vars.clone();
        if n == 0 {
            let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
            return LaurentPoly::one(&vv);
        }
        if n == 1 {
            return self.at(0, 0).clone();
        }
        let mut acc = LaurentPoly::zero_of(&vars);
        for j in 0..n {
            if self.at(0, j).is_zero() {
                continue;
            }
            let mut minor = Vec::with_capacity((n - 1) * (n - 1));
            for i in 1..n {
                for k in 0..n {
                    if k != j {
                        minor.push(self.at(i, k).clone());
                    }
                }
            }
            let m = PolyMatrix {
                rows: n - 1,
                cols: n - 1,
                vars: vars.clone(),
                entries: minor,
            };
            let term = self.at(0, j).mul(&m.det_cofactor());
            if j % 2 == 0 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        acc
    }

    /// Determinant by fraction-free Bareiss elimination; intermediate
    /// divisions are exact polynomial divisions.
    pub fn det_bareiss(&self) -> LaurentPoly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let vars = self.vars.clone();
        let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        if n == 0 {
            return LaurentPoly::one(&vv);
        }
        let mut m: Vec<Vec<LaurentPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = 1i64;
        let mut prev = LaurentPoly::one(&vv);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let pivot = (k + 1..n).find(|&r| !m[r][k].is_zero());
                match pivot {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return LaurentPoly::zero_of(&vars),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num
                        .try_div(&prev)
                        .expect("Bareiss division must be exact");
                }
                m[i][k] = LaurentPoly::zero_of(&vars);
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if sign < 0 {
            d.neg()
        } else {
            d
        }
    }
}

/// Element of the localization `Λ_{R',μ}` of `R'[t₁^{±1},…,t_μ^{±1}]` at the
/// multiplicative system generated by the `tᵢ − tᵢ⁻¹`.
///
/// Stored as `numerator / ∏ᵢ (tᵢ − tᵢ⁻¹)^{kᵢ}` with every `kᵢ` reduced until
/// `tᵢ − tᵢ⁻¹` no longer divides the numerator; equality of canonical forms
/// is then decidable by direct comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedPoly {
    pub numerator: LaurentPoly,
    pub denom_exp: Vec<u32>,
}

impl LocalizedPoly {
    /// `tᵢ − tᵢ⁻¹` over the numerator's variables.
    pub fn denominator_factor(vars: &[String], i: usize) -> LaurentPoly {
        let vv: Vec<&str> = vars.iter().map(|s| s.as_str()).collect();
        let mut up = vec![0i64; vars.len()];
        up[i] = 1;
        let mut down = vec![0i64; vars.len()];
        down[i] = -1;
        LaurentPoly::monomial(&vv, &up, Rat::one())
            .sub(&LaurentPoly::monomial(&vv, &down, Rat::one()))
    }

    /// Canonicalize `num / ∏ (tᵢ − tᵢ⁻¹)^{denom_exp[i]}`.
    pub fn normalize(num: LaurentPoly, denom_exp: Vec<u32>) -> Self {
        let nvars = num.vars().len();
        assert_eq!(denom_exp.len(), nvars);
        if num.is_zero() {
            return LocalizedPoly {
                numerator: num,
                denom_exp: vec![0; nvars],
            };
        }
        let mut numerator = num;
        let mut denom = denom_exp;
        let vars = numerator.vars().to_vec();
        for i in 0..nvars {
            let f = Self::denominator_factor(&vars, i);
            while denom[i] > 0 {
                match numerator.try_div(&f) {
                    Some(q) => {
                        numerator = q;
                        denom[i] -= 1;
                    }
                    None => break,
                }
            }
        }
        LocalizedPoly {
            numerator,
            denom_exp: denom,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    /// Multiply through by `∏ (tᵢ − tᵢ⁻¹)^{k}` to clear denominators: the
    /// polynomial `numerator · ∏ (tᵢ − tᵢ⁻¹)^{K − kᵢ}` for `K = max kᵢ`…
    /// callers that need a common-denominator comparison use
    /// `cross_multiplied_eq` instead.
    pub fn cross_multiplied_eq(&self, other: &Self) -> bool {
        if self.numerator.vars() != other.numerator.vars() {
            return false;
        }
        let vars = self.numerator.vars().to_vec();
        let mut a = self.numerator.clone();
        let mut b = other.numerator.clone();
        for i in 0..vars.len() {
            let f = Self::denominator_factor(&vars, i);
            let (ka, kb) = (self.denom_exp[i], other.denom_exp[i]);
            if ka < kb {
                a = a.mul(&f.pow(kb - ka));
            } else if kb < ka {
                b = b.mul(&f.pow(ka - kb));
            }
        }
        a == b
    }

    pub fn render(&self) -> String {
        let vars = self.numerator.vars().to_vec();
        let num = self.numerator.render(None);
        let mut factors: Vec<String> = Vec::new();
        for (i, &k) in self.denom_exp.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let base = format!("({} - {}^-1)", vars[i], vars[i]);
            if k == 1 {
                factors.push(base);
            } else {
                factors.push(format!("{}^{}", base, k));
            }
        }
        if factors.is_empty() {
            num
        } else if self.numerator.num_terms() > 1 {
            format!("({}) / {}", num, factors.join("*"))
        } else {
            format!("{} / {}", num, factors.join("*"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    fn uvars() -> Vec<&'static str> {
        vec!["u"]
    }

    #[test]
    fn difference_of_squares() {
        // (u − u⁻¹)(u + u⁻¹) = u² − u⁻²
        let v = uvars();
        let u = LaurentPoly::var(&v, 0);
        let uinv = LaurentPoly::monomial(&v, &[-1], int(1));
        let prod = u.sub(&uinv).mul(&u.add(&uinv));
        let expect = LaurentPoly::monomial(&v, &[2], int(1))
            .sub(&LaurentPoly::monomial(&v, &[-2], int(1)));
        assert_eq!(prod, expect);
    }

    #[test]
    fn add_zero_identity() {
        let v = uvars();
        let p = LaurentPoly::parse("2*u - 3 + u^-2", &v, None).unwrap();
        assert_eq!(p.add(&LaurentPoly::zero(&v)), p);
    }

    #[test]
    fn hand_expansion_square() {
        // (t − 1 + t⁻¹)² = t² − 2t + 3 − 2t⁻¹ + t⁻², in u-units (t = u²).
        let v = uvars();
        let p = LaurentPoly::parse("u^-2 - 1 + u^2", &v, None).unwrap();
        let sq = p.mul(&p);
        let expect =
            LaurentPoly::parse("u^-4 - 2*u^-2 + 3 - 2*u^2 + u^4", &v, None).unwrap();
        assert_eq!(sq, expect);
    }

    #[test]
    fn det_empty_is_one() {
        let m = PolyMatrix::zero(0, 0, &[]);
        assert_eq!(m.det().unwrap(), LaurentPoly::one(&[]));
    }

    #[test]
    fn det_two_by_two() {
        // [[t, 1], [1, t]] → t² − 1 over plain variable t.
        let v = vec!["t"];
        let t = LaurentPoly::var(&v, 0);
        let one = LaurentPoly::one(&v);
        let m = PolyMatrix::new(2, 2, vec![t.clone(), one.clone(), one.clone(), t.clone()]);
        let expect = t.mul(&t).sub(&one);
        assert_eq!(m.det().unwrap(), expect);
    }

    #[test]
    fn det_trefoil_case() {
        // [[u−u⁻¹, u],[−u⁻¹, u−u⁻¹]] → u² − 1 + u⁻²
        let v = uvars();
        let a = LaurentPoly::parse("-u^-1 + u", &v, None).unwrap();
        let u = LaurentPoly::var(&v, 0);
        let minus_uinv = LaurentPoly::monomial(&v, &[-1], int(-1));
        let m = PolyMatrix::new(2, 2, vec![a.clone(), u, minus_uinv, a]);
        let expect = LaurentPoly::parse("u^-2 - 1 + u^2", &v, None).unwrap();
        assert_eq!(m.det().unwrap(), expect);
    }

    #[test]
    fn det_nonsquare_errors() {
        let m = PolyMatrix::zero(2, 3, &["t"]);
        assert!(matches!(m.det(), Err(RingError::NotSquare { .. })));
    }

    #[test]
    fn substitute_palindrome() {
        // p = t − 1 + t⁻¹, t ↦ t⁻¹ gives t⁻¹ − 1 + t (u-units).
        let v = uvars();
        let p = LaurentPoly::parse("u^-2 - 1 + u^2", &v, None).unwrap();
        let mut map = BTreeMap::new();
        map.insert(
            "u".to_string(),
            LaurentPoly::monomial(&v, &[-1], int(1)),
        );
        let q = p.substitute(&v, &map).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn substitute_prop35_shape() {
        // p = s²t⁻¹ with (t ↦ t⁻¹, s ↦ st⁻¹) stays s²t⁻¹ (u-units: t = u²).
        let v = vec!["u", "s"];
        let p = LaurentPoly::monomial(&v, &[-2, 2], int(1));
        let mut map = BTreeMap::new();
        map.insert("u".to_string(), LaurentPoly::monomial(&v, &[-1, 0], int(1)));
        map.insert("s".to_string(), LaurentPoly::monomial(&v, &[-2, 1], int(1)));
        let q = p.substitute(&v, &map).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn substitute_t_to_one() {
        let v = uvars();
        let p = LaurentPoly::var(&v, 0);
        let mut map = BTreeMap::new();
        map.insert("u".to_string(), LaurentPoly::one(&v));
        assert_eq!(p.substitute(&v, &map).unwrap(), LaurentPoly::one(&v));
    }

    #[test]
    fn substitute_nonmonomial_negative_errors() {
        let v = uvars();
        let p = LaurentPoly::monomial(&v, &[-1], int(1));
        let mut map = BTreeMap::new();
        map.insert(
            "u".to_string(),
            LaurentPoly::parse("1 + u", &v, None).unwrap(),
        );
        assert!(matches!(
            p.substitute(&v, &map),
            Err(RingError::NonInvertibleSubstitution(_))
        ));
    }

    #[test]
    fn span_examples() {
        let v = uvars();
        let p = LaurentPoly::parse("u^-2 - 1 + u^2", &v, None).unwrap();
        assert_eq!(p.span(0).unwrap(), 4); // 2 in t-units
        let c = LaurentPoly::one(&v);
        assert_eq!(c.span(0).unwrap(), 0);
        let v2 = vec!["u", "s"];
        let q = LaurentPoly::monomial(&v2, &[-2, 2], int(1));
        assert_eq!(q.span(0).unwrap(), 0);
        assert!(matches!(
            LaurentPoly::zero(&v).span(0),
            Err(RingError::ZeroSpan)
        ));
    }

    #[test]
    fn localized_exact_cancellation() {
        // (t − t⁻¹)/(t − t⁻¹) → 1
        let vars = vec!["t1".to_string()];
        let f = LocalizedPoly::denominator_factor(&vars, 0);
        let l = LocalizedPoly::normalize(f, vec![1]);
        assert_eq!(l.numerator, LaurentPoly::one(&["t1"]));
        assert_eq!(l.denom_exp, vec![0]);
    }

    #[test]
    fn localized_irreducible() {
        let one = LaurentPoly::one(&["t1"]);
        let l = LocalizedPoly::normalize(one.clone(), vec![1]);
        assert_eq!(l.numerator, one);
        assert_eq!(l.denom_exp, vec![1]);
    }

    #[test]
    fn localized_partial_reduction() {
        // (t−t⁻¹)²·(t²−1+t⁻²) over (t−t⁻¹)³ reduces to (t²−1+t⁻²)/(t−t⁻¹).
        let vars = vec!["t1".to_string()];
        let f = LocalizedPoly::denominator_factor(&vars, 0);
        let core = LaurentPoly::parse("t1^-2 - 1 + t1^2", &["t1"], None).unwrap();
        let num = f.mul(&f).mul(&core);
        let l = LocalizedPoly::normalize(num, vec![3]);
        assert_eq!(l.numerator, core);
        assert_eq!(l.denom_exp, vec![1]);
    }

    #[test]
    fn localized_normalize_idempotent() {
        let vars = vec!["t1".to_string()];
        let f = LocalizedPoly::denominator_factor(&vars, 0);
        let core = LaurentPoly::parse("2*t1 + 3", &["t1"], None).unwrap();
        let l = LocalizedPoly::normalize(f.mul(&core), vec![2]);
        let l2 = LocalizedPoly::normalize(l.numerator.clone(), l.denom_exp.clone());
        assert_eq!(l, l2);
    }

    #[test]
    fn render_parse_round_trip_half_powers() {
        let v = vec!["u", "s1"];
        let p = LaurentPoly::parse("t^-1 - 1 + t", &v, Some((0, "t"))).unwrap();
        assert_eq!(p.render(Some((0, "t"))), "t^-1 - 1 + t");
        let q = LaurentPoly::parse("-2*t^(-1/2) + 1/3*s1 + t^(3/2)*s1^2", &v, Some((0, "t")))
            .unwrap();
        let text = q.render(Some((0, "t")));
        assert_eq!(text, "-2*t^(-1/2) + 1/3*s1 + t^(3/2)*s1^2");
        let back = LaurentPoly::parse(&text, &v, Some((0, "t"))).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn try_div_multivariate() {
        let v = vec!["t", "s"];
        let a = LaurentPoly::parse("t^2*s - s + t*s^2 - s^2*t^-1", &v, None).unwrap();
        let d = LaurentPoly::parse("t - t^-1", &v, None).unwrap();
        let q = a.try_div(&d).expect("divides");
        assert_eq!(q.mul(&d), a);
        let nd = LaurentPoly::parse("t + 2", &v, None).unwrap();
        assert!(a.try_div(&nd).is_none() || a.try_div(&nd).unwrap().mul(&nd) == a);
    }

    #[test]
    fn scalar_rendering() {
        assert_eq!(render_rat(&rat(-3, 2)), "-3/2");
        assert_eq!(render_rat(&int(7)), "7");
        assert_eq!(parse_rat("-3/2").unwrap(), rat(-3, 2));
    }
}
