//! Invariant fields of triangular group actions.
//!
//! For a group of triangular maps the invariant subfield can be searched
//! level by level, from the last coordinate down to the first: at level `i`
//! every invariant that genuinely involves `x_i` can be written with a
//! polynomial numerator in `x_i` whose coefficients live in the later
//! coordinates, over a denominator built from the denominators of the group
//! action itself. Fixing degree bounds turns "is there such an invariant?"
//! into exact rational linear algebra.
//!
//! The outcome per level is either a certified invariant — certified means
//! the returned function is checked against every generator, not assumed
//! from the solver — or an honest report that the bounded ansatz was
//! exhausted. A chain with every level certified and the results
//! algebraically independent is flagged [`ChainResult::pure_certified`].
//!
//! The same module houses the multiplicative counterpart: monomial
//! invariants of a diagonal torus action, read off from the integer kernel
//! of the weight matrix.

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::{kernel_basis, rat, rational_nullspace, IntMatrix, Rational};
use crate::jonq::{Closure, JonqElement};
use crate::poly::{gcd, Monomial, Polynomial, Var};
use crate::ratfunc::{Eval, RatFunc};

/// Degree limits for the level-by-level ansatz: `max_degree` bounds the
/// degree in the level's own coordinate, `max_aux_degree` the total degree
/// of the coefficients in the later coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzBounds {
    pub max_degree: u32,
    pub max_aux_degree: u32,
}

impl Default for AnsatzBounds {
    fn default() -> AnsatzBounds {
        AnsatzBounds {
            max_degree: 6,
            max_aux_degree: 6,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChainError {
    #[error("no generators given")]
    NoGenerators,
    #[error("generators have mixed arities")]
    ArityMismatch,
}

/// What the bounded search concluded at one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LevelOutcome {
    /// An invariant involving this level's coordinate, verified against
    /// every generator, numerator monic.
    Certified { invariant: RatFunc },
    /// The ansatz ran out of degrees without finding one. This does not
    /// prove absence; larger bounds may still succeed.
    Unresolved {
        max_degree: u32,
        max_aux_degree: u32,
    },
    /// Reserved for a proof that no invariant involves this coordinate.
    /// The bounded search cannot establish that, so it never produces this
    /// outcome; it exists so reports can represent the distinction.
    Trivial,
}

/// One level of the chain; `level` is the 1-based coordinate index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelReport {
    pub level: usize,
    pub outcome: LevelOutcome,
}

/// The full chain, ordered from the last coordinate down to the first.
#[derive(Debug, Clone)]
pub struct ChainResult {
    arity: usize,
    levels: Vec<LevelReport>,
    pure_certified: bool,
}

impl ChainResult {
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Reports ordered by level `n, n-1, ..., 1`.
    pub fn levels(&self) -> &[LevelReport] {
        &self.levels
    }

    /// The certified invariants in chain order (last coordinate first).
    pub fn generators(&self) -> Vec<&RatFunc> {
        self.levels
            .iter()
            .filter_map(|report| match &report.outcome {
                LevelOutcome::Certified { invariant } => Some(invariant),
                _ => None,
            })
            .collect()
    }

    /// True when every level produced a certified invariant.
    pub fn fully_certified(&self) -> bool {
        self.levels
            .iter()
            .all(|r| matches!(r.outcome, LevelOutcome::Certified { .. }))
    }

    /// True when every level is certified and the invariants passed the
    /// algebraic-independence check.
    pub fn pure_certified(&self) -> bool {
        self.pure_certified
    }
}

/// Runs the level-by-level bounded search for a chain of invariants of the
/// group generated by `gens`.
pub fn invariant_chain(
    gens: &[JonqElement],
    bounds: &AnsatzBounds,
) -> Result<ChainResult, ChainError> {
    let first = gens.first().ok_or(ChainError::NoGenerators)?;
    let n = first.arity();
    if gens.iter().any(|g| g.arity() != n) {
        return Err(ChainError::ArityMismatch);
    }
    let mut levels = Vec::with_capacity(n);
    for level in (1..=n).rev() {
        let outcome = match search_level(gens, n, level, bounds) {
            Some(invariant) => LevelOutcome::Certified { invariant },
            None => LevelOutcome::Unresolved {
                max_degree: bounds.max_degree,
                max_aux_degree: bounds.max_aux_degree,
            },
        };
        levels.push(LevelReport { level, outcome });
    }
    let result = ChainResult {
        arity: n,
        levels,
        pure_certified: false,
    };
    let pure = result.fully_certified() && {
        let gens_found: Vec<RatFunc> = result.generators().into_iter().cloned().collect();
        check_independence(&gens_found)
    };
    Ok(ChainResult {
        pure_certified: pure,
        ..result
    })
}

/// Monomials in `vars` of total degree at most `max_total`, ascending in
/// the term order (the constant monomial first).
fn monomials_up_to(vars: &[Var], max_total: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for &v in vars {
        let mut extended = Vec::new();
        for m in &out {
            let mut power = m.clone();
            loop {
                extended.push(power.clone());
                if power.total_degree() >= max_total {
                    break;
                }
                power = power.mul(&Monomial::var(v));
            }
        }
        out = extended;
    }
    out.retain(|m| m.total_degree() <= max_total);
    out.sort();
    out.dedup();
    out
}

/// Monic least common multiple of two denominators.
fn poly_lcm(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let g = gcd(a, b).expect("denominators are nonzero");
    a.mul(b).div_exact(&g).expect("gcd divides").make_monic()
}

/// The common denominator scale for one level: the monic lcm of every
/// generator's rule denominators at this level and later.
fn level_denominator(gens: &[JonqElement], level: usize, n: usize) -> Polynomial {
    let mut l = Polynomial::one();
    for g in gens {
        for j in level..=n {
            let rule = g.rule(j).expect("index in range");
            if !rule.den().is_one() {
                l = poly_lcm(&l, rule.den());
            }
        }
    }
    l
}

/// Searches one level for an invariant of minimal coordinate degree within
/// the bounds. Returns it with monic numerator, verified against every
/// generator.
fn search_level(
    gens: &[JonqElement],
    n: usize,
    level: usize,
    bounds: &AnsatzBounds,
) -> Option<RatFunc> {
    let xi = Var::X(level as u32);
    let aux_vars: Vec<Var> = ((level + 1)..=n).map(|j| Var::X(j as u32)).collect();
    let aux = monomials_up_to(&aux_vars, bounds.max_aux_degree);
    let base_den = level_denominator(gens, level, n);

    for degree in 1..=bounds.max_degree {
        let q_poly = base_den.pow(degree);
        let q = RatFunc::from_poly(q_poly.clone());
        // Unknowns ordered degree-major: all coefficients of x_i^0, then
        // x_i^1, and so on; within a degree the aux monomials ascend.
        let basis_polys: Vec<Polynomial> = (0..=degree)
            .flat_map(|j| {
                let xi_pow = Monomial::var(xi).pow(j);
                aux.iter()
                    .map(move |m| Polynomial::term(m.mul(&xi_pow), Rational::one()))
            })
            .collect();
        let ncols = basis_polys.len();
        let block = aux.len();

        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for g in gens {
            // Invariance of N/Q under g is the polynomial identity
            //   (g.N) Q - N (g.Q) = 0,
            // linear in the coefficients of N once denominators clear.
            let gq = g.apply(&q);
            let terms: Vec<RatFunc> = basis_polys
                .iter()
                .map(|b| {
                    let b_rf = RatFunc::from_poly(b.clone());
                    g.apply(&b_rf).mul(&q).sub(&b_rf.mul(&gq))
                })
                .collect();
            let mut common = Polynomial::one();
            for t in &terms {
                if !t.den().is_one() {
                    common = poly_lcm(&common, t.den());
                }
            }
            let cleared: Vec<Polynomial> = terms
                .iter()
                .map(|t| {
                    let scale = common.div_exact(t.den()).expect("lcm clears denominator");
                    t.num().mul(&scale)
                })
                .collect();
            let mut monomials: std::collections::BTreeSet<Monomial> =
                std::collections::BTreeSet::new();
            for p in &cleared {
                monomials.extend(p.terms().map(|(m, _)| m.clone()));
            }
            for m in &monomials {
                let row: Vec<Rational> = cleared
                    .iter()
                    .map(|p| {
                        p.terms()
                            .find(|(pm, _)| *pm == m)
                            .map_or_else(Rational::zero, |(_, c)| c.clone())
                    })
                    .collect();
                rows.push(row);
            }
        }

        let kernel = rational_nullspace(rows, ncols);
        let chosen = kernel
            .iter()
            .find(|v| v.iter().skip(block).any(|c| !c.is_zero()));
        if let Some(coeffs) = chosen {
            let mut num = Polynomial::zero();
            for (c, b) in coeffs.iter().zip(&basis_polys) {
                if !c.is_zero() {
                    num = num.add(&b.scale(c));
                }
            }
            let invariant = RatFunc::new(num, q_poly).expect("fixed nonzero denominator");
            let lc = invariant.num().leading_coeff();
            let invariant = invariant.scale(&lc.recip());
            for g in gens {
                assert_eq!(
                    g.apply(&invariant),
                    invariant,
                    "solver produced a non-invariant; this is a bug"
                );
            }
            return Some(invariant);
        }
    }
    None
}

/// Tests algebraic independence of rational functions by the rank of their
/// Jacobian at deterministic sample points. A full-rank sample proves
/// independence; failure at every sample is reported as `false`, which for
/// honestly dependent inputs is always the case and for independent ones is
/// only possible if every sample landed in a proper closed subset.
pub fn check_independence(functions: &[RatFunc]) -> bool {
    if functions.is_empty() {
        return true;
    }
    let top = functions
        .iter()
        .filter_map(RatFunc::max_x_index)
        .max()
        .unwrap_or(0) as usize;
    if functions.len() > top {
        // more functions than coordinates, or a constant among them
        return false;
    }
    let jacobian: Vec<Vec<RatFunc>> = functions
        .iter()
        .map(|f| (1..=top).map(|c| f.derivative(Var::X(c as u32))).collect())
        .collect();
    'attempt: for t in 0..8i64 {
        let point: Vec<Rational> = (0..top as i64)
            .map(|i| rat(7 * t + 3 * i + 2, 1 + (t + i) % 2))
            .collect();
        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(functions.len());
        for row in &jacobian {
            let mut vals = Vec::with_capacity(top);
            for entry in row {
                match entry.evaluate(&point) {
                    Ok(Eval::Value(v)) => vals.push(v),
                    _ => continue 'attempt,
                }
            }
            rows.push(vals);
        }
        let pivots = crate::arith::rational_rref(&mut rows);
        if pivots.len() == functions.len() {
            return true;
        }
    }
    false
}

/// Monomial invariants of the diagonal torus action with the given integer
/// weight matrix: one Laurent monomial per kernel basis vector, in the
/// reduced basis order.
pub fn torus_monomial_invariants(weights: &IntMatrix) -> Vec<RatFunc> {
    kernel_basis(weights)
        .into_iter()
        .map(|v| laurent_monomial(&v))
        .collect()
}

fn laurent_monomial(exponents: &[crate::arith::Integer]) -> RatFunc {
    let mut num = Polynomial::one();
    let mut den = Polynomial::one();
    for (i, e) in exponents.iter().enumerate() {
        let v = Var::X(i as u32 + 1);
        let magnitude: u32 = e
            .magnitude()
            .try_into()
            .expect("reduced kernel exponents are small");
        if magnitude == 0 {
            continue;
        }
        let factor = Polynomial::term(Monomial::var(v).pow(magnitude), Rational::one());
        if e.sign() == num_bigint::Sign::Minus {
            den = den.mul(&factor);
        } else {
            num = num.mul(&factor);
        }
    }
    RatFunc::new(num, den).expect("monomial denominator is nonzero")
}

/// Averages a function over a finite closure: `(1/|G|) sum_g g.h`. The
/// result is invariant by construction and offers an independent
/// cross-check on the chain search.
pub fn reynolds(group: &Closure, h: &RatFunc) -> RatFunc {
    let mut sum = RatFunc::zero();
    for g in group.elements() {
        sum = sum.add(&g.apply(h));
    }
    sum.scale(&rat(1, group.len() as i64))
}
