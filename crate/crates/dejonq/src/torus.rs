//! Diagonal torus actions given by integer weight matrices.
//!
//! An `m`-dimensional torus acts on `n` coordinates through an `m x n`
//! weight matrix `W`: the `j`-th coordinate is scaled by the character with
//! exponent column `W[.,j]`. Everything about such an action is linear
//! algebra over the integers:
//!
//! * faithfulness is surjectivity of `W` as a map of character lattices,
//!   read off the Smith normal form;
//! * the transcendence degree of the invariant field is `n - rank(W)`;
//! * monomial invariants come from the integer kernel (see
//!   [`crate::invariants::torus_monomial_invariants`]).
//!
//! For the one-dimensional action on the plane with weights `(d1, d2)` the
//! module also produces a [`LineCertificate`]: for each of the six shapes a
//! line can take relative to the coordinate axes it counts, with formal
//! coefficients, the distinct nonzero parameter values where a generic
//! orbit meets such a line. A count of exactly one flags a candidate line;
//! when no shape yields one, no orbit closure is a line.

use num_integer::Integer as _;
use num_traits::One;
use thiserror::Error;

use crate::arith::{smith_normal_form, IntMatrix, Integer, Rational};
use crate::invariants::torus_monomial_invariants;
use crate::poly::{squarefree_part, Monomial, Polynomial, Var};
use crate::ratfunc::RatFunc;

/// Largest weight magnitude accepted by the line-certificate machinery.
pub const MAX_WEIGHT: i64 = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error("the weight matrix must have at least one row and one column")]
    EmptyAction,
    #[error("all coefficients are switched off, the polynomial is zero")]
    ZeroPolynomial,
    #[error("weight {d} exceeds the supported magnitude {MAX_WEIGHT}")]
    WeightTooLarge { d: i64 },
}

/// A diagonal torus action described by its weight matrix (rows are torus
/// factors, columns are coordinates).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAction {
    weights: IntMatrix,
}

/// Lattice-theoretic summary of a weight action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessReport {
    /// Number of torus factors (rows).
    pub torus_rank: usize,
    /// Number of coordinates (columns).
    pub coords: usize,
    /// Rank of the weight matrix.
    pub weight_rank: usize,
    /// Nonzero diagonal of the Smith normal form.
    pub invariant_factors: Vec<Integer>,
    /// True when the action has trivial kernel: full rank and every
    /// invariant factor equal to one.
    pub faithful: bool,
    /// Transcendence degree of the field of invariants.
    pub invariants_trdeg: usize,
}

impl WeightAction {
    pub fn new(weights: IntMatrix) -> Result<WeightAction, TorusError> {
        if weights.rows() == 0 || weights.cols() == 0 {
            return Err(TorusError::EmptyAction);
        }
        Ok(WeightAction { weights })
    }

    pub fn torus_rank(&self) -> usize {
        self.weights.rows()
    }

    pub fn coords(&self) -> usize {
        self.weights.cols()
    }

    pub fn weights(&self) -> &IntMatrix {
        &self.weights
    }

    /// Rank, invariant factors, faithfulness, and invariant transcendence
    /// degree in one pass over the Smith normal form.
    pub fn faithfulness(&self) -> FaithfulnessReport {
        let snf = smith_normal_form(&self.weights);
        let mut invariant_factors = Vec::new();
        for i in 0..self.weights.rows().min(self.weights.cols()) {
            let d = snf.d.get(i, i).clone();
            if d != Integer::from(0) {
                invariant_factors.push(d);
            }
        }
        let weight_rank = invariant_factors.len();
        let faithful = weight_rank == self.torus_rank()
            && invariant_factors.iter().all(|d| d == &Integer::from(1));
        FaithfulnessReport {
            torus_rank: self.torus_rank(),
            coords: self.coords(),
            weight_rank,
            invariant_factors,
            faithful,
            invariants_trdeg: self.coords() - weight_rank,
        }
    }

    /// Laurent-monomial generators of the invariant field, one per kernel
    /// basis vector of the weight matrix.
    pub fn monomial_invariants(&self) -> Vec<RatFunc> {
        torus_monomial_invariants(&self.weights)
    }
}

/// Counts the distinct nonzero roots in `t`, for formal coefficients, of
///
/// ```text
/// [mu1] a1 t^d1  +  [mu2] a2 t^d2  +  [nu] 1
/// ```
///
/// where a flag switches its term on. Negative exponents are cleared by a
/// power of `t` first, and roots at `t = 0` are discarded along with
/// multiplicities.
pub fn generic_root_count(
    d1: i64,
    d2: i64,
    mu1: bool,
    mu2: bool,
    nu: bool,
) -> Result<u32, TorusError> {
    for d in [d1, d2] {
        if d.unsigned_abs() > MAX_WEIGHT as u64 {
            return Err(TorusError::WeightTooLarge { d });
        }
    }
    let mut exponents: Vec<(i64, Option<Var>)> = Vec::new();
    if mu1 {
        exponents.push((d1, Some(Var::A1)));
    }
    if mu2 {
        exponents.push((d2, Some(Var::A2)));
    }
    if nu {
        exponents.push((0, None));
    }
    if exponents.is_empty() {
        return Err(TorusError::ZeroPolynomial);
    }
    let shift = -exponents.iter().map(|&(e, _)| e).min().unwrap_or(0).min(0);
    let t = Var::X(1);
    let mut poly = Polynomial::zero();
    for (e, coeff) in exponents {
        let degree = (e + shift) as u32;
        let mut mono = Monomial::var(t).pow(degree);
        if let Some(a) = coeff {
            mono = mono.mul(&Monomial::var(a));
        }
        poly = poly.add(&Polynomial::term(mono, Rational::one()));
    }
    let (reduced, _stripped) = squarefree_part(&poly, t).expect("polynomial is nonzero");
    Ok(reduced.degree_in(t).unwrap_or(0))
}

/// The six shapes a line can take relative to the two coordinates, in the
/// order they are always reported: which of the coefficients on `x1`, `x2`
/// and the constant term are present.
pub const LINE_CASES: [(bool, bool, bool); 6] = [
    (false, true, true),
    (false, true, false),
    (true, false, true),
    (true, false, false),
    (true, true, false),
    (true, true, true),
];

fn case_description(case: usize) -> &'static str {
    match case {
        1 => "x2 = const",
        2 => "x2 = 0",
        3 => "x1 = const",
        4 => "x1 = 0",
        5 => "x1 = const * x2",
        _ => "a1*x1 + a2*x2 = const",
    }
}

/// One row of a line certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineCase {
    pub mu1: bool,
    pub mu2: bool,
    pub nu: bool,
    pub count: u32,
}

/// Standing hypotheses the caller may care about; they are reported, not
/// enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineConditions {
    /// `d1 - d2 >= 2`.
    pub separated: bool,
    /// `|d1| >= 2` and `|d2| >= 2`.
    pub high_degree: bool,
    /// `gcd(d1, d2) = 1`.
    pub coprime: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineConclusion {
    /// No case has exactly one generic intersection: no orbit closure is a
    /// line.
    NoLine,
    /// The first case (1-based) meeting a generic orbit exactly once, with
    /// the shape of the candidate line.
    Candidate { case: usize, line: String },
}

/// The full six-case intersection count table for weights `(d1, d2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineCertificate {
    pub d1: i64,
    pub d2: i64,
    pub cases: Vec<LineCase>,
    pub conditions: LineConditions,
    pub conclusion: LineConclusion,
}

/// Builds the certificate: root counts for all six cases plus the derived
/// conclusion.
pub fn line_certificate(d1: i64, d2: i64) -> Result<LineCertificate, TorusError> {
    let mut cases = Vec::with_capacity(6);
    for &(mu1, mu2, nu) in &LINE_CASES {
        let count = generic_root_count(d1, d2, mu1, mu2, nu)?;
        cases.push(LineCase {
            mu1,
            mu2,
            nu,
            count,
        });
    }
    let conclusion =
        cases
            .iter()
            .position(|case| case.count == 1)
            .map_or(LineConclusion::NoLine, |idx| LineConclusion::Candidate {
                case: idx + 1,
                line: case_description(idx + 1).to_string(),
            });
    Ok(LineCertificate {
        d1,
        d2,
        cases,
        conditions: LineConditions {
            separated: d1 - d2 >= 2,
            high_degree: d1.unsigned_abs() >= 2 && d2.unsigned_abs() >= 2,
            coprime: d1.gcd(&d2) == 1,
        },
        conclusion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(cert: &LineCertificate) -> Vec<u32> {
        cert.cases.iter().map(|c| c.count).collect()
    }

    #[test]
    fn faithfulness_of_row_actions() {
        let action = WeightAction::new(IntMatrix::from_i64(1, 2, &[5, 3])).unwrap();
        let report = action.faithfulness();
        assert_eq!(report.torus_rank, 1);
        assert_eq!(report.coords, 2);
        assert_eq!(report.weight_rank, 1);
        assert!(report.faithful);
        assert_eq!(report.invariants_trdeg, 1);
        assert_eq!(report.invariant_factors, vec![Integer::from(1)]);

        // common factor 2: the sign subgroup acts trivially
        let doubled = WeightAction::new(IntMatrix::from_i64(1, 2, &[2, 4])).unwrap();
        let report = doubled.faithfulness();
        assert!(!report.faithful);
        assert_eq!(report.invariant_factors, vec![Integer::from(2)]);
        assert_eq!(report.invariants_trdeg, 1);
    }

    #[test]
    fn faithfulness_of_higher_tori() {
        let full = WeightAction::new(IntMatrix::from_i64(2, 2, &[1, 0, 0, 1])).unwrap();
        assert!(full.faithfulness().faithful);

        let index_two = WeightAction::new(IntMatrix::from_i64(2, 2, &[1, 0, 0, 2])).unwrap();
        let report = index_two.faithfulness();
        assert!(!report.faithful);
        assert_eq!(report.weight_rank, 2);
        assert_eq!(report.invariants_trdeg, 0);

        // rank drop: a one-dimensional subtorus acts trivially
        let degenerate = WeightAction::new(IntMatrix::from_i64(2, 2, &[1, 2, 2, 4])).unwrap();
        let report = degenerate.faithfulness();
        assert!(!report.faithful);
        assert_eq!(report.weight_rank, 1);
        assert_eq!(report.invariants_trdeg, 1);
    }

    #[test]
    fn monomial_invariants_are_exposed() {
        let action = WeightAction::new(IntMatrix::from_i64(1, 2, &[5, 3])).unwrap();
        let invs = action.monomial_invariants();
        assert_eq!(invs.len(), 1);
        assert_eq!(invs[0].to_string(), "x1^3/x2^5");

        assert_eq!(
            WeightAction::new(IntMatrix::from_i64(1, 0, &[])).unwrap_err(),
            TorusError::EmptyAction
        );
    }

    #[test]
    fn root_counts_for_single_terms() {
        // a lone monomial only vanishes at the origin
        assert_eq!(generic_root_count(5, 3, true, false, false).unwrap(), 0);
        assert_eq!(generic_root_count(5, 3, false, true, false).unwrap(), 0);
        // switching everything off is an error
        assert_eq!(
            generic_root_count(5, 3, false, false, false).unwrap_err(),
            TorusError::ZeroPolynomial
        );
        assert_eq!(
            generic_root_count(1000, 0, true, false, true).unwrap_err(),
            TorusError::WeightTooLarge { d: 1000 }
        );
    }

    #[test]
    fn certificate_for_five_three() {
        let cert = line_certificate(5, 3).unwrap();
        assert_eq!(counts(&cert), vec![3, 0, 5, 0, 2, 5]);
        assert_eq!(cert.conclusion, LineConclusion::NoLine);
        assert!(cert.conditions.separated);
        assert!(cert.conditions.high_degree);
        assert!(cert.conditions.coprime);
    }

    #[test]
    fn low_degree_weights_admit_lines() {
        let cert = line_certificate(2, 1).unwrap();
        assert_eq!(
            cert.conclusion,
            LineConclusion::Candidate {
                case: 1,
                line: "x2 = const".to_string()
            }
        );
        assert!(!cert.conditions.high_degree);

        let cert = line_certificate(1, 0).unwrap();
        assert_eq!(
            cert.conclusion,
            LineConclusion::Candidate {
                case: 3,
                line: "x1 = const".to_string()
            }
        );

        // adjacent degrees: the through-the-origin case has one root
        let cert = line_certificate(4, 3).unwrap();
        assert_eq!(
            cert.conclusion,
            LineConclusion::Candidate {
                case: 5,
                line: "x1 = const * x2".to_string()
            }
        );
        assert!(!cert.conditions.separated);
    }

    #[test]
    fn negative_weights_are_cleared() {
        // a1 t^-2 + a2 t + 1 times t^2 has three distinct generic roots
        assert_eq!(generic_root_count(-2, 1, true, true, true).unwrap(), 3);
        // weight 1 on x2 still admits horizontal lines
        let cert = line_certificate(-2, 1).unwrap();
        assert_eq!(
            cert.conclusion,
            LineConclusion::Candidate {
                case: 1,
                line: "x2 = const".to_string()
            }
        );
        // with both magnitudes at least 2 the counts are 3, 0, 2, 0, 5, 5
        let cert = line_certificate(-2, 3).unwrap();
        assert_eq!(counts(&cert), vec![3, 0, 2, 0, 5, 5]);
        assert_eq!(cert.conclusion, LineConclusion::NoLine);
    }

    #[test]
    fn coprime_separated_sweep_has_no_lines() {
        for d2 in 2i64..=7 {
            for d1 in (d2 + 2)..=7 {
                if d1.gcd(&d2) != 1 {
                    continue;
                }
                let cert = line_certificate(d1, d2).unwrap();
                assert_eq!(
                    cert.conclusion,
                    LineConclusion::NoLine,
                    "unexpected line for ({d1}, {d2})"
                );
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn through_origin_count_is_degree_gap(d1 in -8i64..9, d2 in -8i64..9) {
                prop_assume!(d1 != d2);
                let count = generic_root_count(d1, d2, true, true, false).unwrap();
                prop_assert_eq!(count as i64, (d1 - d2).abs());
            }

            #[test]
            fn single_coefficient_against_constant(d in -8i64..9) {
                prop_assume!(d != 0);
                let count = generic_root_count(d, 0, true, false, true).unwrap();
                prop_assert_eq!(count as i64, d.abs());
            }

            #[test]
            fn counts_never_exceed_degree_span(d1 in -6i64..7, d2 in -6i64..7) {
                let cert = line_certificate(d1, d2).unwrap();
                let span = d1.abs().max(d2.abs()) * 2;
                for case in &cert.cases {
                    prop_assert!((case.count as i64) <= span.max(1));
                }
            }
        }
    }
}
