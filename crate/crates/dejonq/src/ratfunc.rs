//! Rational functions in canonical form.
//!
//! A [`RatFunc`] is a quotient of two [`Polynomial`]s kept in the unique
//! reduced shape: numerator and denominator coprime, denominator monic under
//! the term order, zero represented as `0/1`. Structural equality is
//! therefore mathematical equality, and rendering is deterministic.
//!
//! Beyond field arithmetic the type carries the two operations the
//! triangular-map machinery needs constantly: simultaneous substitution of
//! rational functions for variables, and the flag predicate "depends only on
//! variables after `x_i`".

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::arith::Rational;
use crate::poly::{gcd, Polynomial, Var};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatFuncError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("map undefined on this function (denominator collapses to zero)")]
    SubstitutionUndefined,
    #[error("no value assigned to variable {0}")]
    UnassignedVariable(Var),
}

/// Outcome of evaluating at a point: either a value or "the denominator
/// vanishes here". The latter is a signal, not a failure; callers resample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Eval {
    Value(Rational),
    Undefined,
}

impl Eval {
    /// Unwraps the value, panicking on `Undefined`; test convenience.
    pub fn expect_value(self) -> Rational {
        match self {
            Eval::Value(v) => v,
            Eval::Undefined => panic!("evaluation hit a pole"),
        }
    }
}

/// A rational function in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

impl RatFunc {
    /// Builds `num/den` in canonical form; errors when `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RatFunc, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Polynomial::zero(),
                den: Polynomial::one(),
            });
        }
        let g = gcd(&num, &den).expect("inputs are nonzero");
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        let lc = den.leading_coeff();
        let num = num.scale(&lc.clone().recip());
        let den = den.scale(&lc.recip());
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: Polynomial) -> RatFunc {
        RatFunc {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc::from_poly(Polynomial::zero())
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(Polynomial::one())
    }

    pub fn constant(c: Rational) -> RatFunc {
        RatFunc::from_poly(Polynomial::constant(c))
    }

    pub fn var(v: Var) -> RatFunc {
        RatFunc::from_poly(Polynomial::var(v))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// The constant value when numerator and denominator are scalars.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_constant() {
            let n = self.num.as_constant()?;
            let d = self.den.as_constant()?;
            Some(n / d)
        } else {
            None
        }
    }

    /// True when the function is a polynomial (denominator one).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        RatFunc::new(num, den).expect("product of nonzero denominators")
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let num = self.num.mul(&other.num);
        let den = self.den.mul(&other.den);
        RatFunc::new(num, den).expect("product of nonzero denominators")
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone()).expect("denominator unchanged")
    }

    /// Multiplicative inverse; errors on zero.
    pub fn inverse(&self) -> Result<RatFunc, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Field division; errors when `other` is zero.
    pub fn div(&self, other: &RatFunc) -> Result<RatFunc, RatFuncError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power, negative exponents through the inverse. `0^e` with
    /// `e < 0` errors.
    pub fn pow(&self, e: i64) -> Result<RatFunc, RatFuncError> {
        if e == 0 {
            return Ok(RatFunc::one());
        }
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut result = RatFunc::one();
        let mut sq = base;
        let mut rem = e.unsigned_abs();
        while rem > 0 {
            if rem & 1 == 1 {
                result = result.mul(&sq);
            }
            rem >>= 1;
            if rem > 0 {
                sq = sq.mul(&sq);
            }
        }
        Ok(result)
    }

    /// Every variable (coordinates and parameters) with a positive exponent.
    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        let mut vs = self.num.vars();
        vs.extend(self.den.vars());
        vs
    }

    pub fn has_params(&self) -> bool {
        self.num.has_params() || self.den.has_params()
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    /// Largest coordinate index present, if any.
    pub fn max_x_index(&self) -> Option<u32> {
        self.num.max_x_index().max(self.den.max_x_index())
    }

    /// True when every coordinate variable present has index strictly
    /// greater than `i`. Parameters are ignored. `i = 0` accepts everything;
    /// constants pass for every `i`.
    pub fn depends_only_on(&self, i: usize) -> bool {
        self.vars()
            .into_iter()
            .filter_map(Var::x_index)
            .all(|j| j as usize > i)
    }

    /// Simultaneous substitution of rational functions for variables.
    /// Unmapped variables stay themselves. Errors when the substituted
    /// denominator collapses to zero.
    pub fn substitute(&self, map: &Substitution) -> Result<RatFunc, RatFuncError> {
        let num = substitute_poly(&self.num, map);
        let den = substitute_poly(&self.den, map);
        if den.is_zero() {
            return Err(RatFuncError::SubstitutionUndefined);
        }
        num.div(&den)
            .map_err(|_| RatFuncError::SubstitutionUndefined)
    }

    /// Evaluates at a coordinate point (`point[i]` is the value of `x_{i+1}`).
    /// Errors on parameters or coordinates beyond the point; a vanishing
    /// denominator yields [`Eval::Undefined`].
    pub fn evaluate(&self, point: &[Rational]) -> Result<Eval, RatFuncError> {
        let mut vals: BTreeMap<Var, Rational> = BTreeMap::new();
        for v in self.vars() {
            match v.x_index() {
                Some(i) if (i as usize) <= point.len() => {
                    vals.insert(v, point[i as usize - 1].clone());
                }
                _ => return Err(RatFuncError::UnassignedVariable(v)),
            }
        }
        let den = self.den.evaluate(&vals).expect("all variables assigned");
        if den.is_zero() {
            return Ok(Eval::Undefined);
        }
        let num = self.num.evaluate(&vals).expect("all variables assigned");
        Ok(Eval::Value(num / den))
    }

    /// Evaluates with an explicit assignment for every variable present
    /// (coordinates and parameters alike).
    pub fn evaluate_map(&self, vals: &BTreeMap<Var, Rational>) -> Result<Eval, RatFuncError> {
        for v in self.vars() {
            if !vals.contains_key(&v) {
                return Err(RatFuncError::UnassignedVariable(v));
            }
        }
        let den = self.den.evaluate(vals).expect("all variables assigned");
        if den.is_zero() {
            return Ok(Eval::Undefined);
        }
        let num = self.num.evaluate(vals).expect("all variables assigned");
        Ok(Eval::Value(num / den))
    }

    /// Formal partial derivative `(n'd - nd')/d^2`.
    pub fn derivative(&self, v: Var) -> RatFunc {
        let num = self
            .num
            .derivative(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(v)));
        let den = self.den.mul(&self.den);
        RatFunc::new(num, den).expect("square of nonzero denominator")
    }
}

fn substitute_poly(p: &Polynomial, map: &Substitution) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (m, c) in p.terms() {
        let mut prod = RatFunc::constant(c.clone());
        for &(v, e) in m.pairs() {
            let base = map.get(v);
            let factor = base.pow(e as i64).expect("positive exponent");
            prod = prod.mul(&factor);
        }
        acc = acc.add(&prod);
    }
    acc
}

/// A variable assignment for [`RatFunc::substitute`]; unmapped variables are
/// left alone.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Var, RatFunc>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn set(&mut self, v: Var, f: RatFunc) -> &mut Self {
        self.map.insert(v, f);
        self
    }

    pub fn with(mut self, v: Var, f: RatFunc) -> Self {
        self.map.insert(v, f);
        self
    }

    pub fn get(&self, v: Var) -> RatFunc {
        self.map.get(&v).cloned().unwrap_or_else(|| RatFunc::var(v))
    }
}

impl fmt::Display for RatFunc {
    /// Canonical text form, parenthesised so that it reparses to the same
    /// function: multi-term numerators get parentheses, denominators are
    /// bare only for a single power of a single variable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let simple_den = self.den.term_count() == 1
            && self
                .den
                .leading_term()
                .is_some_and(|(m, _)| m.pairs().len() == 1);
        if simple_den {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}
