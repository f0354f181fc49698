//! Sparse multivariate polynomials over the rationals.
//!
//! Variables split into coordinates `x1, x2, …` and the three parameters
//! `u`, `a1`, `a2`. Parameters take part in arithmetic exactly like
//! coordinates; they only differ in the flag predicates of the rational
//! function layer, which ignore them.
//!
//! The term order is graded lexicographic: higher total degree first, ties
//! broken by the exponent of the earliest variable (so `x1^2 > x1*x2 > x2^2`).
//! All normal forms (leading terms, monic scaling, gcd output) refer to this
//! order, which keeps every computation deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arith::{rat_pow, Rational};

/// A polynomial variable: coordinate `x_i` (index 1-based) or one of the
/// named parameters.
///
/// The derived ordering (`x1 < x2 < … < u < a1 < a2`) is the variable order
/// underlying the term order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    X(u32),
    U,
    A1,
    A2,
}

impl Var {
    /// True for `u`, `a1`, `a2`.
    pub fn is_param(self) -> bool {
        !matches!(self, Var::X(_))
    }

    /// Coordinate index for `x_i` variables.
    pub fn x_index(self) -> Option<u32> {
        match self {
            Var::X(i) => Some(i),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::U => write!(f, "u"),
            Var::A1 => write!(f, "a1"),
            Var::A2 => write!(f, "a2"),
        }
    }
}

/// A power product of variables; exponents are strictly positive and the
/// pair list is sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    pairs: Vec<(Var, u32)>,
}

impl Monomial {
    /// The empty product.
    pub fn one() -> Self {
        Monomial { pairs: Vec::new() }
    }

    /// A single variable to the first power.
    pub fn var(v: Var) -> Self {
        Monomial {
            pairs: vec![(v, 1)],
        }
    }

    /// Builds a monomial from (variable, exponent) pairs; merges duplicates
    /// and drops zero exponents.
    pub fn from_pairs(pairs: &[(Var, u32)]) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for &(v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            pairs: map.into_iter().collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(Var, u32)] {
        &self.pairs
    }

    pub fn total_degree(&self) -> u32 {
        self.pairs.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_of(&self, v: Var) -> u32 {
        self.pairs
            .iter()
            .find(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut map: BTreeMap<Var, u32> = self.pairs.iter().copied().collect();
        for &(v, e) in &other.pairs {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial {
            pairs: map.into_iter().collect(),
        }
    }

    /// Exact monomial quotient, or `None` when some exponent would go
    /// negative.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut map: BTreeMap<Var, u32> = self.pairs.iter().copied().collect();
        for &(v, e) in &other.pairs {
            let slot = map.get_mut(&v)?;
            if *slot < e {
                return None;
            }
            *slot -= e;
            if *slot == 0 {
                map.remove(&v);
            }
        }
        Some(Monomial {
            pairs: map.into_iter().collect(),
        })
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            pairs: self.pairs.iter().map(|&(v, x)| (v, x * e)).collect(),
        }
    }

    /// The monomial with variable `v` removed entirely.
    pub fn without(&self, v: Var) -> Monomial {
        Monomial {
            pairs: self
                .pairs
                .iter()
                .copied()
                .filter(|&(w, _)| w != v)
                .collect(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.pairs.iter().map(|&(v, _)| v)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic order; `Greater` means "later in leading-term
    /// position".
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Walk both sorted exponent lists; the first variable whose
        // exponents differ decides, larger exponent on the earlier variable
        // winning.
        let mut a = self.pairs.iter().peekable();
        let mut b = other.pairs.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&&(va, ea)), Some(&&(vb, eb))) => {
                    if va < vb {
                        // self has a positive exponent on an earlier variable
                        return Ordering::Greater;
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    match ea.cmp(&eb) {
                        Ordering::Equal => {
                            a.next();
                            b.next();
                        }
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.pairs {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("gcd of two zero polynomials is undefined")]
    GcdUndefined,
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// Invariant: no stored coefficient is zero, so structural equality is
/// mathematical equality.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn var(v: Var) -> Self {
        Polynomial::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Leading term under the graded-lex order; `None` for zero.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Leading coefficient; zero polynomial gives zero.
    pub fn leading_coeff(&self) -> Rational {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Scales so the leading coefficient is one; zero stays zero.
    pub fn make_monic(&self) -> Polynomial {
        match self.leading_term() {
            None => Polynomial::zero(),
            Some((_, c)) => self.scale(&c.clone().recip()),
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(t, a)| (t.mul(m), a * c)).collect(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.total_degree()).max()
    }

    /// Highest exponent of `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms.keys().map(|m| m.degree_of(v)).max()
    }

    /// All variables with a positive exponent somewhere.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flat_map(|m| m.vars()).collect()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.degree_of(v) > 0)
    }

    pub fn has_params(&self) -> bool {
        self.terms.keys().any(|m| m.vars().any(Var::is_param))
    }

    /// Largest coordinate index present.
    pub fn max_x_index(&self) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|m| m.vars().filter_map(Var::x_index))
            .max()
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.degree_of(v);
            if e == 0 {
                continue;
            }
            let mut lowered = m.without(v);
            if e > 1 {
                lowered = lowered.mul(&Monomial::from_pairs(&[(v, e - 1)]));
            }
            out.add_term(lowered, c * Rational::from_integer(e.into()));
        }
        out
    }

    /// Evaluates with one rational per variable; `Err` carries the first
    /// variable missing from the assignment.
    pub fn evaluate(&self, vals: &BTreeMap<Var, Rational>) -> Result<Rational, Var> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut prod = c.clone();
            for &(v, e) in m.pairs() {
                let val = vals.get(&v).ok_or(v)?;
                let powed = rat_pow(val, e as i64).expect("nonnegative exponent");
                prod *= powed;
            }
            total += prod;
        }
        Ok(total)
    }

    /// Coefficients of powers of `v`, lowest first; index `k` holds the
    /// coefficient of `v^k` (a polynomial free of `v`). Empty for zero.
    pub fn coeffs_in(&self, v: Var) -> Vec<Polynomial> {
        let Some(deg) = self.degree_in(v) else {
            return Vec::new();
        };
        let mut out = vec![Polynomial::zero(); deg as usize + 1];
        for (m, c) in &self.terms {
            let e = m.degree_of(v);
            out[e as usize].add_term(m.without(v), c.clone());
        }
        out
    }

    /// Rebuilds `sum coeffs[k] * v^k`.
    pub fn from_coeffs_in(v: Var, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let vk = Polynomial::term(Monomial::from_pairs(&[(v, k as u32)]), Rational::one());
            out = out.add(&c.mul(&vk));
        }
        out
    }

    /// Leading coefficient viewed as univariate in `v` (zero for zero).
    pub fn leading_coeff_in(&self, v: Var) -> Polynomial {
        self.coeffs_in(v).pop().unwrap_or_else(Polynomial::zero)
    }

    /// Exact multivariate division; `None` when `divisor` does not divide
    /// `self`. Division by zero is `None`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (dm, dc) = divisor.leading_term()?;
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.try_div(&dm)?;
            let qc = rc / &dc;
            let piece = Polynomial::term(qm, qc);
            quot = quot.add(&piece);
            rem = rem.sub(&piece.mul(divisor));
        }
        Some(quot)
    }

    /// Sparse pseudo-remainder of `self` by `divisor` in the variable `v`:
    /// repeatedly kills the leading `v`-term, scaling by the divisor's
    /// leading `v`-coefficient. The result is the classical pseudo-remainder
    /// up to a power of that coefficient, which is all a primitive remainder
    /// sequence needs.
    pub fn pseudo_rem(&self, divisor: &Polynomial, v: Var) -> Polynomial {
        let db = divisor.degree_in(v).expect("divisor must be nonzero");
        let lb = divisor.leading_coeff_in(v);
        let mut r = self.clone();
        while let Some(dr) = r.degree_in(v) {
            if dr < db || r.is_zero() {
                break;
            }
            let lr = r.leading_coeff_in(v);
            let shift = Polynomial::term(Monomial::from_pairs(&[(v, dr - db)]), Rational::one());
            r = r.mul(&lb).sub(&divisor.mul(&lr).mul(&shift));
            debug_assert!(r.degree_in(v).is_none_or(|d| d < dr));
        }
        r
    }

    /// Content with respect to `v`: monic gcd of the `v`-coefficients.
    pub fn content_in(&self, v: Var) -> Polynomial {
        let mut content = Polynomial::zero();
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            content = gcd_normalized(&content, &c);
            if content.is_one() {
                break;
            }
        }
        content
    }

    /// Primitive part with respect to `v` (self / content).
    pub fn primitive_part_in(&self, v: Var) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let content = self.content_in(v);
        self.div_exact(&content)
            .expect("content divides the polynomial")
    }
}

/// Small evaluation points for the gcd degree bound; distinct magnitudes
/// and mixed signs keep accidental cancellations rare.
const PROBE_POINTS: [i64; 8] = [2, -3, 5, 7, -11, 13, -17, 19];

fn trim_trailing_zeros(mut coeffs: Vec<Rational>) -> Vec<Rational> {
    while coeffs.last().is_some_and(Rational::is_zero) {
        coeffs.pop();
    }
    coeffs
}

/// Monic gcd of two nonzero dense univariate coefficient vectors by the
/// Euclidean algorithm, dividing through by leading coefficients at each
/// round to keep the numbers small.
fn euclid_univariate(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim_trailing_zeros(a.to_vec());
    let mut b = trim_trailing_zeros(b.to_vec());
    while !b.is_empty() {
        let lead = b.last().expect("trimmed").clone();
        for c in &mut b {
            *c = &*c / &lead;
        }
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let coef = a.last().expect("trimmed").clone();
            for (i, bc) in b.iter().enumerate() {
                a[shift + i] = &a[shift + i] - &(bc * &coef);
            }
            a = trim_trailing_zeros(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    let lead = a.last().expect("gcd of nonzero inputs is nonzero").clone();
    if !lead.is_one() {
        for c in &mut a {
            *c = &*c / &lead;
        }
    }
    a
}

/// Coefficient vector of `p` in `v` with every other variable fixed at
/// `point`; `None` when the substitution kills the leading coefficient
/// (the degree bound argument needs it intact).
fn specialize_univariate(
    p: &Polynomial,
    v: Var,
    point: &BTreeMap<Var, Rational>,
) -> Option<Vec<Rational>> {
    let deg = p.degree_in(v).expect("nonzero polynomial") as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in p.terms() {
        let mut value = c.clone();
        for &(w, e) in m.pairs() {
            if w == v {
                continue;
            }
            let base = point.get(&w).expect("point covers all other variables");
            value *= rat_pow(base, e as i64).expect("positive exponent");
        }
        out[m.degree_of(v) as usize] += value;
    }
    if out[deg].is_zero() {
        return None;
    }
    Some(out)
}

/// Upper bound for the `v`-degree of `gcd(p, q)`, obtained by evaluating
/// away the other variables and taking a univariate gcd. Specializing can
/// only enlarge the gcd as long as the leading coefficients survive, which
/// `specialize_univariate` checks; degenerate points are retried. `None`
/// when every attempt degenerated.
fn gcd_degree_bound(p: &Polynomial, q: &Polynomial, v: Var) -> Option<u32> {
    let mut others: BTreeSet<Var> = p.vars().union(&q.vars()).copied().collect();
    others.remove(&v);
    for attempt in 0..4usize {
        let point: BTreeMap<Var, Rational> = others
            .iter()
            .enumerate()
            .map(|(k, &w)| {
                let value = PROBE_POINTS[(k + attempt) % PROBE_POINTS.len()];
                (w, Rational::from_integer(value.into()))
            })
            .collect();
        let Some(a) = specialize_univariate(p, v, &point) else {
            continue;
        };
        let Some(b) = specialize_univariate(q, v, &point) else {
            continue;
        };
        let g = euclid_univariate(&a, &b);
        return Some((g.len() - 1) as u32);
    }
    None
}

/// Monic gcd where at most one argument is zero (`gcd(0, p) = monic p`).
fn gcd_normalized(p: &Polynomial, q: &Polynomial) -> Polynomial {
    if p.is_zero() {
        return q.make_monic();
    }
    if q.is_zero() {
        return p.make_monic();
    }
    if p.is_constant() || q.is_constant() {
        return Polynomial::one();
    }
    if p == q {
        return p.make_monic();
    }
    let vars: BTreeSet<Var> = p.vars().union(&q.vars()).copied().collect();
    let v = *vars
        .iter()
        .next()
        .expect("nonconstant polynomials have vars");

    if vars.len() == 1 {
        // genuinely univariate: plain Euclid, no content bookkeeping
        let point = BTreeMap::new();
        let a = specialize_univariate(p, v, &point).expect("leading coefficient is constant");
        let b = specialize_univariate(q, v, &point).expect("leading coefficient is constant");
        let coeffs: Vec<Polynomial> = euclid_univariate(&a, &b)
            .into_iter()
            .map(Polynomial::constant)
            .collect();
        return Polynomial::from_coeffs_in(v, &coeffs);
    }

    // A zero degree bound proves the primitive parts coprime, leaving only
    // the contents; this settles the common case without a remainder
    // sequence.
    if gcd_degree_bound(p, q, v) == Some(0) {
        return gcd_normalized(&p.content_in(v), &q.content_in(v));
    }

    let cp = p.content_in(v);
    let pp = p.div_exact(&cp).expect("content divides");
    let cq = q.content_in(v);
    let pq = q.div_exact(&cq).expect("content divides");
    let content_gcd = gcd_normalized(&cp, &cq);

    let (mut a, mut b) = if p.degree_in(v) >= q.degree_in(v) {
        (pp, pq)
    } else {
        (pq, pp)
    };
    while !b.is_zero() {
        if b.degree_in(v) == Some(0) {
            // The divisor is free of v, and both sides are primitive in v:
            // the primitive gcd is trivial.
            a = Polynomial::one();
            break;
        }
        let r = a.pseudo_rem(&b, v);
        a = b;
        b = if r.is_zero() {
            r
        } else {
            r.primitive_part_in(v)
        };
    }
    let a = if a.is_constant() {
        Polynomial::one()
    } else {
        a.primitive_part_in(v)
    };
    content_gcd.mul(&a).make_monic()
}

/// Greatest common divisor, normalized monic under the term order.
///
/// Errors only when both inputs are zero.
pub fn gcd(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, PolyError> {
    if p.is_zero() && q.is_zero() {
        return Err(PolyError::GcdUndefined);
    }
    Ok(gcd_normalized(p, q))
}

/// Splits `p = v^k · p0` with `v` not dividing `p0` and returns the monic
/// squarefree part of `p0` in `v` together with `k`.
///
/// Viewed over the fraction field of the remaining variables, the returned
/// polynomial has the same distinct `v`-roots as `p` apart from `v = 0`,
/// each with multiplicity one; its `v`-degree is therefore the generic count
/// of distinct nonzero roots.
pub fn squarefree_part(p: &Polynomial, v: Var) -> Result<(Polynomial, u32), PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let k = p
        .terms()
        .map(|(m, _)| m.degree_of(v))
        .min()
        .expect("nonzero polynomial");
    let strip = Polynomial::term(Monomial::from_pairs(&[(v, k)]), Rational::one());
    let p0 = p.div_exact(&strip).expect("v^k divides by construction");
    if !p0.contains_var(v) {
        return Ok((p0.make_monic(), k));
    }
    let deriv = p0.derivative(v);
    let g = gcd_normalized(&p0, &deriv);
    let sf = p0.div_exact(&g).expect("gcd divides");
    Ok((sf.make_monic(), k))
}

impl fmt::Display for Polynomial {
    /// Canonical rendering: terms in descending term order, ` + `/` - `
    /// separators, `*` for products, `^` for powers, unit coefficients
    /// suppressed.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let mag = c.abs();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}
