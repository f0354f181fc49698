//! Triangular birational maps and their group operations.
//!
//! An element acts on the coordinates by
//!
//! ```text
//! x_i  ->  mu_i * x_i + f_i        (i = 1, ..., n)
//! ```
//!
//! where `mu_i` (nonzero) and `f_i` involve only the later coordinates
//! `x_{i+1}, ..., x_n`. Such maps permute the function field and stabilise
//! the flag of subfields generated by the tails of the coordinate list,
//! which is what makes every operation here exact and effective.
//!
//! Two variants share the shape but differ in what the multiplier may be:
//! in [`Variant::J`] each `mu_i` is a nonzero rational number, in
//! [`Variant::Jhat`] it is any nonzero rational function of the later
//! coordinates. Multiplication is composition of substitutions; inverses
//! come from back-substitution in descending coordinate order. For `J` the
//! order of an element is always decidable; for `Jhat` the library iterates
//! up to a cap and reports honestly when that is inconclusive.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::Rational;
use crate::expr::{parse_ratfunc, render, MapDocument, MapEntry, MapVariant, ParseError};
use crate::poly::Var;
use crate::ratfunc::{Eval, RatFunc, Substitution};

/// Which multiplier class an element lives in: scalar (`J`) or full
/// rational-function (`Jhat`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Variant {
    J,
    Jhat,
}

impl From<Variant> for MapVariant {
    fn from(v: Variant) -> MapVariant {
        match v {
            Variant::J => MapVariant::J,
            Variant::Jhat => MapVariant::Jhat,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ElementError {
    #[error("an element needs at least one coordinate")]
    Empty,
    #[error("expected {expected} coordinate rules, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("multiplier for x{index} is zero")]
    ZeroMultiplier { index: usize },
    #[error("variant J requires a scalar multiplier for x{index}")]
    MultiplierNotScalar { index: usize },
    #[error("multiplier for x{index} may only involve coordinates after x{index}")]
    MultiplierNotTriangular { index: usize },
    #[error("translation for x{index} may only involve coordinates after x{index}")]
    TranslationNotTriangular { index: usize },
    #[error("rule for x{index} mentions a coordinate beyond x{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("rule for x{index} mentions a parameter (u, a1, a2)")]
    ParameterPresent { index: usize },
    #[error("document variant is not a group element")]
    NotAGroupElement,
    #[error("entry {index}: {which} does not parse: {source}")]
    Parse {
        index: usize,
        which: &'static str,
        source: ParseError,
    },
}

/// A triangular map in canonical form. Structural equality is equality of
/// maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JonqElement {
    variant: Variant,
    n: usize,
    mu: Vec<RatFunc>,
    f: Vec<RatFunc>,
}

/// What [`JonqElement::order`] found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderResult {
    Finite(u64),
    Infinite,
    /// The search was cut off at `cap` compositions without reaching the
    /// identity or an infinitude certificate.
    Unknown {
        cap: u64,
    },
}

impl JonqElement {
    /// Validates and builds an element; `mu[i]` and `f[i]` are the rule for
    /// `x_{i+1}`.
    pub fn new(
        variant: Variant,
        n: usize,
        mu: Vec<RatFunc>,
        f: Vec<RatFunc>,
    ) -> Result<JonqElement, ElementError> {
        if n == 0 {
            return Err(ElementError::Empty);
        }
        for list in [&mu, &f] {
            if list.len() != n {
                return Err(ElementError::WrongLength {
                    expected: n,
                    got: list.len(),
                });
            }
        }
        for i in 0..n {
            let index = i + 1;
            if mu[i].is_zero() {
                return Err(ElementError::ZeroMultiplier { index });
            }
            if mu[i].has_params() || f[i].has_params() {
                return Err(ElementError::ParameterPresent { index });
            }
            for part in [&mu[i], &f[i]] {
                if let Some(top) = part.max_x_index() {
                    if top as usize > n {
                        return Err(ElementError::IndexOutOfRange { index, n });
                    }
                }
            }
            if !mu[i].depends_only_on(index) {
                return Err(ElementError::MultiplierNotTriangular { index });
            }
            if !f[i].depends_only_on(index) {
                return Err(ElementError::TranslationNotTriangular { index });
            }
            if variant == Variant::J && !mu[i].is_constant() {
                return Err(ElementError::MultiplierNotScalar { index });
            }
        }
        Ok(JonqElement { variant, n, mu, f })
    }

    pub fn identity(variant: Variant, n: usize) -> JonqElement {
        JonqElement {
            variant,
            n,
            mu: vec![RatFunc::one(); n],
            f: vec![RatFunc::zero(); n],
        }
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn multipliers(&self) -> &[RatFunc] {
        &self.mu
    }

    pub fn translations(&self) -> &[RatFunc] {
        &self.f
    }

    /// The image of `x_i` (1-based) as a rational function.
    pub fn rule(&self, i: usize) -> Option<RatFunc> {
        if i == 0 || i > self.n {
            return None;
        }
        let image = self.mu[i - 1]
            .mul(&RatFunc::var(Var::X(i as u32)))
            .add(&self.f[i - 1]);
        Some(image)
    }

    pub fn is_identity(&self) -> bool {
        self.mu.iter().all(RatFunc::is_one) && self.f.iter().all(RatFunc::is_zero)
    }

    /// The substitution `x_i -> mu_i x_i + f_i` realising the action on the
    /// function field.
    fn substitution(&self) -> Substitution {
        let mut sub = Substitution::identity();
        for i in 1..=self.n {
            sub.set(Var::X(i as u32), self.rule(i).expect("index in range"));
        }
        sub
    }

    /// Acts on a rational function by substituting every coordinate's image.
    /// Total because the substitution is a field automorphism.
    pub fn apply(&self, h: &RatFunc) -> RatFunc {
        h.substitute(&self.substitution())
            .expect("automorphism keeps denominators nonzero")
    }

    /// Composition: `compose(g1, g2)` acts on functions as `g1` after `g2`,
    /// i.e. `compose(g1, g2).apply(h) == g1.apply(&g2.apply(h))`.
    ///
    /// # Panics
    ///
    /// Panics when the arities differ; elements of different arity live in
    /// different groups.
    pub fn compose(&self, other: &JonqElement) -> JonqElement {
        assert_eq!(
            self.n, other.n,
            "cannot compose elements of different arity"
        );
        let variant = self.variant.max(other.variant);
        let mut mu = Vec::with_capacity(self.n);
        let mut f = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let carried = self.apply(&other.mu[i]);
            mu.push(carried.mul(&self.mu[i]));
            f.push(carried.mul(&self.f[i]).add(&self.apply(&other.f[i])));
        }
        if self.variant == Variant::J && other.variant == Variant::J {
            // scalar multipliers just multiply; cross-check the general path
            debug_assert!(mu
                .iter()
                .zip(self.mu.iter().zip(&other.mu))
                .all(|(got, (a, b))| got == &a.mul(b)));
        }
        JonqElement::new(variant, self.n, mu, f).expect("composition stays triangular")
    }

    /// The group inverse, by back-substitution from the last coordinate
    /// down.
    pub fn invert(&self) -> JonqElement {
        let mut sub = Substitution::identity();
        let mut mu = vec![RatFunc::zero(); self.n];
        let mut f = vec![RatFunc::zero(); self.n];
        for i in (0..self.n).rev() {
            let b = self.mu[i]
                .substitute(&sub)
                .expect("automorphism image is nonzero")
                .inverse()
                .expect("multiplier is nonzero");
            let c = self.f[i]
                .substitute(&sub)
                .expect("automorphism image is defined");
            let neg_bc = b.mul(&c).neg();
            let image = b.mul(&RatFunc::var(Var::X(i as u32 + 1))).add(&neg_bc);
            sub.set(Var::X(i as u32 + 1), image);
            mu[i] = b;
            f[i] = neg_bc;
        }
        JonqElement::new(self.variant, self.n, mu, f).expect("inverse stays triangular")
    }

    /// `self` composed with itself `k` times; `k = 0` gives the identity.
    pub fn pow(&self, k: u64) -> JonqElement {
        let mut acc = JonqElement::identity(self.variant, self.n);
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    /// Moves a point of coordinate space: each output coordinate is
    /// `mu_i(p) * p_i + f_i(p)`. Returns `None` when a multiplier or
    /// translation is undefined at `p`.
    ///
    /// Points transform contravariantly to functions: the point map of
    /// `compose(g1, g2)` is the point map of `g2` after that of `g1`.
    pub fn move_point(&self, point: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(point.len(), self.n, "point dimension mismatch");
        let mut out = Vec::with_capacity(self.n);
        for i in 1..=self.n {
            let rule = self.rule(i).expect("index in range");
            match rule
                .evaluate(point)
                .expect("coordinates cover all variables")
            {
                Eval::Value(v) => out.push(v),
                Eval::Undefined => return None,
            }
        }
        Some(out)
    }

    /// Decides or bounds the order of the element in its group.
    ///
    /// With scalar multipliers the answer is exact: the element has finite
    /// order precisely when every multiplier is `1` or `-1` and the
    /// corresponding small power is the identity; everything else has
    /// infinite order. With genuinely rational multipliers the method first
    /// looks for a certificate of infinitude in the last coordinate (an
    /// affine map of infinite order), then composes up to `cap` steps.
    pub fn order(&self, cap: u64) -> OrderResult {
        if self.mu.iter().all(RatFunc::is_constant) {
            return self.order_scalar();
        }
        // The last rule is affine over the rationals; its infinitude is
        // inherited by the whole element.
        let last_mu = self.mu[self.n - 1]
            .as_constant()
            .expect("last multiplier has no coordinates left to involve");
        let last_f = self.f[self.n - 1]
            .as_constant()
            .expect("last translation has no coordinates left to involve");
        if !last_mu.is_one() && last_mu != -Rational::one() {
            return OrderResult::Infinite;
        }
        if last_mu.is_one() && !last_f.is_zero() {
            return OrderResult::Infinite;
        }
        let mut acc = JonqElement::identity(self.variant, self.n);
        for m in 1..=cap {
            acc = acc.compose(self);
            if acc.is_identity() {
                return OrderResult::Finite(m);
            }
        }
        OrderResult::Unknown { cap }
    }

    fn order_scalar(&self) -> OrderResult {
        let one = Rational::one();
        let minus_one = -Rational::one();
        let mut m0 = 1u64;
        for mu in &self.mu {
            let value = mu.as_constant().expect("scalar multiplier");
            if value == minus_one {
                m0 = 2;
            } else if value != one {
                return OrderResult::Infinite;
            }
        }
        if self.pow(m0).is_identity() {
            OrderResult::Finite(m0)
        } else {
            // A nontrivial element with all multipliers 1 is unipotent and
            // never of finite order.
            OrderResult::Infinite
        }
    }

    /// A deterministic text key; equal elements and only they share it.
    pub fn canonical_key(&self) -> String {
        self.to_string()
    }

    /// Reads an element from its JSON document form.
    pub fn from_document(doc: &MapDocument) -> Result<JonqElement, ElementError> {
        let variant = match doc.variant {
            MapVariant::J => Variant::J,
            MapVariant::Jhat => Variant::Jhat,
            MapVariant::Flow => return Err(ElementError::NotAGroupElement),
        };
        if doc.maps.len() != doc.n {
            return Err(ElementError::WrongLength {
                expected: doc.n,
                got: doc.maps.len(),
            });
        }
        let mut mu = Vec::with_capacity(doc.n);
        let mut f = Vec::with_capacity(doc.n);
        for (i, entry) in doc.maps.iter().enumerate() {
            let index = i + 1;
            let mu_i = match &entry.mu {
                Some(text) => parse_ratfunc(text).map_err(|source| ElementError::Parse {
                    index,
                    which: "mu",
                    source,
                })?,
                None => RatFunc::one(),
            };
            let f_i = parse_ratfunc(&entry.f).map_err(|source| ElementError::Parse {
                index,
                which: "f",
                source,
            })?;
            mu.push(mu_i);
            f.push(f_i);
        }
        JonqElement::new(variant, doc.n, mu, f)
    }

    /// Serialises back to the JSON document form; multipliers are always
    /// written out.
    pub fn to_document(&self) -> MapDocument {
        MapDocument {
            variant: self.variant.into(),
            n: self.n,
            maps: (0..self.n)
                .map(|i| MapEntry {
                    mu: Some(render(&self.mu[i])),
                    f: render(&self.f[i]),
                })
                .collect(),
        }
    }
}

impl fmt::Display for JonqElement {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.n {
            if i > 1 {
                write!(out, "; ")?;
            }
            write!(out, "x{i} -> {}", self.rule(i).expect("index in range"))?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosureError {
    #[error("no generators given")]
    Empty,
    #[error("generators have mixed arities")]
    ArityMismatch,
    #[error("generators have mixed variants")]
    VariantMismatch,
    #[error("closure exceeded {cap} elements without stabilising")]
    Overflow { cap: usize },
}

/// A finite subgroup produced by [`subgroup_closure`], elements sorted by
/// canonical key.
#[derive(Debug, Clone)]
pub struct Closure {
    elements: Vec<JonqElement>,
}

impl Closure {
    pub fn elements(&self) -> &[JonqElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &JonqElement) -> bool {
        self.elements.iter().any(|h| h == g)
    }

    /// True when every pair of elements commutes.
    pub fn is_abelian(&self) -> bool {
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                if a.compose(b) != b.compose(a) {
                    return false;
                }
            }
        }
        true
    }
}

/// Breadth-first closure of the generated subgroup, stopping with an error
/// once more than `cap` distinct elements appear.
pub fn subgroup_closure(gens: &[JonqElement], cap: usize) -> Result<Closure, ClosureError> {
    let first = gens.first().ok_or(ClosureError::Empty)?;
    if gens.iter().any(|g| g.arity() != first.arity()) {
        return Err(ClosureError::ArityMismatch);
    }
    if gens.iter().any(|g| g.variant() != first.variant()) {
        return Err(ClosureError::VariantMismatch);
    }
    let mut seeds: Vec<JonqElement> = gens.to_vec();
    seeds.extend(gens.iter().map(JonqElement::invert));

    let identity = JonqElement::identity(first.variant(), first.arity());
    let mut seen: BTreeMap<String, JonqElement> = BTreeMap::new();
    seen.insert(identity.canonical_key(), identity.clone());
    let mut frontier = vec![identity];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for g in &frontier {
            for s in &seeds {
                let product = g.compose(s);
                if let Entry::Vacant(slot) = seen.entry(product.canonical_key()) {
                    slot.insert(product.clone());
                    if seen.len() > cap {
                        return Err(ClosureError::Overflow { cap });
                    }
                    next.push(product);
                }
            }
        }
        frontier = next;
    }
    Ok(Closure {
        elements: seen.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};
    use crate::expr::parse_ratfunc as parse;

    fn x(i: u32) -> RatFunc {
        RatFunc::var(Var::X(i))
    }

    fn scalar(v: i64) -> RatFunc {
        RatFunc::constant(rat_int(v))
    }

    /// Shorthand: builds an element from expression strings.
    fn elem(variant: Variant, rules: &[(&str, &str)]) -> JonqElement {
        let n = rules.len();
        let mu = rules.iter().map(|(m, _)| parse(m).unwrap()).collect();
        let f = rules.iter().map(|(_, f)| parse(f).unwrap()).collect();
        JonqElement::new(variant, n, mu, f).unwrap()
    }

    #[test]
    fn validation_rejects_bad_shapes() {
        let err = |v, mu: Vec<RatFunc>, f: Vec<RatFunc>| JonqElement::new(v, 2, mu, f).unwrap_err();
        assert_eq!(
            JonqElement::new(Variant::J, 0, vec![], vec![]).unwrap_err(),
            ElementError::Empty
        );
        assert_eq!(
            err(Variant::J, vec![scalar(1)], vec![RatFunc::zero(); 2]),
            ElementError::WrongLength {
                expected: 2,
                got: 1
            }
        );
        assert_eq!(
            err(
                Variant::J,
                vec![RatFunc::zero(), scalar(1)],
                vec![RatFunc::zero(); 2]
            ),
            ElementError::ZeroMultiplier { index: 1 }
        );
        // mu_1 may involve x2 but not x1
        assert_eq!(
            err(
                Variant::Jhat,
                vec![x(1), scalar(1)],
                vec![RatFunc::zero(); 2]
            ),
            ElementError::MultiplierNotTriangular { index: 1 }
        );
        // f_2 may involve nothing at all in arity 2
        assert_eq!(
            err(Variant::J, vec![scalar(1); 2], vec![RatFunc::zero(), x(2)]),
            ElementError::TranslationNotTriangular { index: 2 }
        );
        assert_eq!(
            err(Variant::J, vec![scalar(1); 2], vec![x(3), RatFunc::zero()]),
            ElementError::IndexOutOfRange { index: 1, n: 2 }
        );
        assert_eq!(
            err(
                Variant::J,
                vec![scalar(1); 2],
                vec![RatFunc::var(Var::U), RatFunc::zero()]
            ),
            ElementError::ParameterPresent { index: 1 }
        );
        assert_eq!(
            err(Variant::J, vec![x(2), scalar(1)], vec![RatFunc::zero(); 2]),
            ElementError::MultiplierNotScalar { index: 1 }
        );
        // the same element is fine as Jhat
        assert!(JonqElement::new(
            Variant::Jhat,
            2,
            vec![x(2), scalar(1)],
            vec![RatFunc::zero(); 2]
        )
        .is_ok());
    }

    #[test]
    fn apply_substitutes_rules() {
        let g = elem(Variant::J, &[("1", "x2"), ("1", "0")]);
        assert_eq!(g.apply(&x(1)), x(1).add(&x(2)));
        assert_eq!(g.apply(&x(2)), x(2));
        let h = parse("x1^2/x2").unwrap();
        assert_eq!(g.apply(&h), parse("(x1 + x2)^2/x2").unwrap());
    }

    #[test]
    fn compose_carries_multipliers_through() {
        // g1: x1 -> -x1,      x2 -> x2
        // g2: x1 -> x1 + x2^2, x2 -> x2
        let g1 = elem(Variant::J, &[("-1", "0"), ("1", "0")]);
        let g2 = elem(Variant::J, &[("1", "x2^2"), ("1", "0")]);
        let g12 = g1.compose(&g2);
        assert_eq!(g12.rule(1).unwrap(), parse("-x1 + x2^2").unwrap());

        // rational multipliers pick up the substitution
        let h1 = elem(Variant::Jhat, &[("x2", "0"), ("1", "1")]);
        let h2 = elem(Variant::Jhat, &[("x2 + 1", "0"), ("1", "0")]);
        let h12 = h1.compose(&h2);
        assert_eq!(h12.multipliers()[0], parse("x2^2 + 2*x2").unwrap());
    }

    #[test]
    fn compose_matches_apply() {
        let g1 = elem(
            Variant::Jhat,
            &[("x3", "x2*x3"), ("2", "x3^2"), ("-1", "5")],
        );
        let g2 = elem(
            Variant::Jhat,
            &[("1/2", "x3"), ("x3 + 1", "0"), ("1", "-1")],
        );
        let g12 = g1.compose(&g2);
        for i in 1..=3 {
            assert_eq!(g12.rule(i).unwrap(), g1.apply(&g2.rule(i).unwrap()));
        }
    }

    #[test]
    fn invert_roundtrips() {
        let cases = [
            elem(Variant::J, &[("2", "3")]),
            elem(Variant::J, &[("-1", "x2^2"), ("-1", "1/2")]),
            elem(Variant::Jhat, &[("x2/(x2 + 1)", "1/x2"), ("1", "1")]),
            elem(
                Variant::Jhat,
                &[("x3", "x2*x3"), ("2", "x3^2"), ("-1", "5")],
            ),
        ];
        for g in cases {
            let inv = g.invert();
            let id = JonqElement::identity(g.variant(), g.arity());
            assert_eq!(g.compose(&inv), id, "g * g^-1 for {g}");
            assert_eq!(inv.compose(&g), id, "g^-1 * g for {g}");
        }
    }

    #[test]
    fn affine_inverse_is_explicit() {
        let g = elem(Variant::J, &[("2", "3")]);
        let inv = g.invert();
        assert_eq!(inv.rule(1).unwrap(), parse("1/2*x1 - 3/2").unwrap());
    }

    #[test]
    fn order_of_scalar_elements_is_decided() {
        let translation = elem(Variant::J, &[("1", "1")]);
        assert_eq!(translation.order(64), OrderResult::Infinite);

        let reflection = elem(Variant::J, &[("-1", "0")]);
        assert_eq!(reflection.order(64), OrderResult::Finite(2));

        // x1 -> -x1 + x2, x2 -> -x2: squares to x1 -> x1 - 2 x2
        let twisted = elem(Variant::J, &[("-1", "x2"), ("-1", "0")]);
        assert_eq!(twisted.order(64), OrderResult::Infinite);

        let doubling = elem(Variant::J, &[("2", "0")]);
        assert_eq!(doubling.order(64), OrderResult::Infinite);

        let id = JonqElement::identity(Variant::J, 3);
        assert_eq!(id.order(64), OrderResult::Finite(1));

        // an involution with a translation part
        let glide = elem(Variant::J, &[("-1", "x2^2"), ("1", "0")]);
        assert_eq!(glide.order(64), OrderResult::Finite(2));
    }

    #[test]
    fn order_of_rational_multipliers() {
        // mu_1(x2) * mu_1(-x2) = 1, so this squares to the identity.
        let inv = elem(Variant::Jhat, &[("(1 + x2)/(1 - x2)", "0"), ("-1", "0")]);
        assert_eq!(inv.order(8), OrderResult::Finite(2));

        // last coordinate translates: certificate of infinitude
        let shift = elem(Variant::Jhat, &[("x2/(x2 + 1)", "0"), ("1", "1")]);
        assert_eq!(shift.order(8), OrderResult::Infinite);

        let stretch = elem(Variant::Jhat, &[("x2", "0"), ("3", "0")]);
        assert_eq!(stretch.order(8), OrderResult::Infinite);

        // no certificate and no return to the identity within the cap
        let open = elem(Variant::Jhat, &[("x2 + 1", "0"), ("-1", "0")]);
        assert_eq!(open.order(8), OrderResult::Unknown { cap: 8 });
    }

    #[test]
    fn move_point_follows_rules() {
        let g = elem(Variant::J, &[("1", "x2"), ("1", "0")]);
        let p = vec![rat_int(1), rat_int(2)];
        assert_eq!(g.move_point(&p).unwrap(), vec![rat_int(3), rat_int(2)]);

        // contravariance: the point map of g1*g2 is sigma_{g2} after sigma_{g1}
        let g1 = elem(Variant::J, &[("2", "0"), ("1", "1")]);
        let g2 = elem(Variant::J, &[("1", "x2^2"), ("-1", "0")]);
        let composed = g1.compose(&g2);
        let via_parts = g2.move_point(&g1.move_point(&p).unwrap()).unwrap();
        assert_eq!(composed.move_point(&p).unwrap(), via_parts);

        // a pole in a multiplier reports None
        let h = elem(Variant::Jhat, &[("1/x2", "0"), ("1", "0")]);
        assert_eq!(h.move_point(&[rat_int(1), rat_int(0)]), None);
        assert_eq!(
            h.move_point(&[rat_int(1), rat_int(2)]).unwrap(),
            vec![rat(1, 2), rat_int(2)]
        );
    }

    #[test]
    fn closure_of_sign_changes() {
        let a = elem(Variant::J, &[("-1", "0"), ("1", "0")]);
        let b = elem(Variant::J, &[("1", "0"), ("-1", "0")]);
        let closure = subgroup_closure(&[a, b], 16).unwrap();
        assert_eq!(closure.len(), 4);
        assert!(closure.is_abelian());
        assert!(closure.contains(&elem(Variant::J, &[("-1", "0"), ("-1", "0")])));
        assert!(closure.contains(&JonqElement::identity(Variant::J, 2)));
    }

    #[test]
    fn closure_overflow_is_reported() {
        let t = elem(Variant::J, &[("1", "1")]);
        assert_eq!(
            subgroup_closure(&[t], 10).unwrap_err(),
            ClosureError::Overflow { cap: 10 }
        );
        assert_eq!(subgroup_closure(&[], 10).unwrap_err(), ClosureError::Empty);

        let mixed = [
            elem(Variant::J, &[("-1", "0")]),
            JonqElement::identity(Variant::Jhat, 1),
        ];
        assert_eq!(
            subgroup_closure(&mixed, 10).unwrap_err(),
            ClosureError::VariantMismatch
        );
        let arities = [
            elem(Variant::J, &[("-1", "0")]),
            JonqElement::identity(Variant::J, 2),
        ];
        assert_eq!(
            subgroup_closure(&arities, 10).unwrap_err(),
            ClosureError::ArityMismatch
        );
    }

    #[test]
    fn documents_roundtrip() {
        let g = elem(Variant::Jhat, &[("x2/(x2 + 1)", "1/x2"), ("-1", "1/3")]);
        let doc = g.to_document();
        assert_eq!(JonqElement::from_document(&doc).unwrap(), g);

        let json = r#"{"variant":"J","n":2,"maps":[{"mu":"-1","f":"x2^2"},{"f":"0"}]}"#;
        let doc = MapDocument::from_json(json).unwrap();
        let h = JonqElement::from_document(&doc).unwrap();
        assert_eq!(h.multipliers()[0], scalar(-1));
        assert_eq!(h.multipliers()[1], scalar(1));

        let flow = MapDocument {
            variant: MapVariant::Flow,
            n: 1,
            maps: vec![MapEntry {
                mu: None,
                f: "u".into(),
            }],
        };
        assert_eq!(
            JonqElement::from_document(&flow).unwrap_err(),
            ElementError::NotAGroupElement
        );

        let bad = MapDocument {
            variant: MapVariant::J,
            n: 1,
            maps: vec![MapEntry {
                mu: Some("x^".into()),
                f: "0".into(),
            }],
        };
        assert!(matches!(
            JonqElement::from_document(&bad).unwrap_err(),
            ElementError::Parse {
                index: 1,
                which: "mu",
                ..
            }
        ));
    }

    #[test]
    fn display_is_deterministic() {
        let g = elem(Variant::J, &[("-1", "x2^2"), ("1", "0")]);
        assert_eq!(g.to_string(), "x1 -> x2^2 - x1; x2 -> x2");
        assert_eq!(g.canonical_key(), g.to_string());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        prop_compose! {
            fn arb_scalar()(n in prop_oneof![Just(-2i64), Just(-1), Just(1), Just(2), Just(3)],
                            d in 1i64..3) -> RatFunc {
                RatFunc::constant(rat(n, d))
            }
        }

        /// A small polynomial in the coordinates past `i` (1-based), arity 3.
        fn arb_tail_poly(i: usize) -> BoxedStrategy<RatFunc> {
            let vars: Vec<u32> = ((i as u32 + 1)..=3).collect();
            if vars.is_empty() {
                (-3i64..4)
                    .prop_map(|c| RatFunc::constant(rat_int(c)))
                    .boxed()
            } else {
                proptest::collection::vec((proptest::sample::select(vars), 0u32..3, -2i64..3), 0..3)
                    .prop_map(|terms| {
                        let mut acc = RatFunc::zero();
                        for (v, e, c) in terms {
                            let m = RatFunc::var(Var::X(v)).pow(e as i64).unwrap();
                            acc = acc.add(&m.scale(&rat_int(c)));
                        }
                        acc
                    })
                    .boxed()
            }
        }

        fn arb_element() -> impl Strategy<Value = JonqElement> {
            (
                [arb_scalar(), arb_scalar(), arb_scalar()],
                arb_tail_poly(1),
                arb_tail_poly(2),
                arb_tail_poly(3),
            )
                .prop_map(|(mu, f1, f2, f3)| {
                    JonqElement::new(Variant::J, 3, mu.to_vec(), vec![f1, f2, f3]).unwrap()
                })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn composition_is_associative(
                a in arb_element(), b in arb_element(), c in arb_element()
            ) {
                prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
            }

            #[test]
            fn identity_is_neutral(g in arb_element()) {
                let id = JonqElement::identity(Variant::J, 3);
                prop_assert_eq!(&g.compose(&id), &g);
                prop_assert_eq!(&id.compose(&g), &g);
            }

            #[test]
            fn inverse_cancels(g in arb_element()) {
                let id = JonqElement::identity(Variant::J, 3);
                prop_assert_eq!(g.compose(&g.invert()), id.clone());
                prop_assert_eq!(g.invert().compose(&g), id);
            }

            #[test]
            fn compose_acts_like_nested_apply(
                a in arb_element(), b in arb_element()
            ) {
                let probe = RatFunc::var(Var::X(1))
                    .add(&RatFunc::var(Var::X(2)))
                    .add(&RatFunc::var(Var::X(3)));
                prop_assert_eq!(
                    a.compose(&b).apply(&probe),
                    a.apply(&b.apply(&probe))
                );
            }

            #[test]
            fn scalar_multipliers_multiply(a in arb_element(), b in arb_element()) {
                let c = a.compose(&b);
                for i in 0..3 {
                    prop_assert_eq!(
                        c.multipliers()[i].clone(),
                        a.multipliers()[i].mul(&b.multipliers()[i])
                    );
                }
            }
        }
    }
}
