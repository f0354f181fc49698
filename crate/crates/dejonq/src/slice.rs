//! One-parameter unipotent flows and rational cross-sections.
//!
//! An [`AdditiveFlow`] is a family of triangular maps
//!
//! ```text
//! x_i  ->  x_i + F_i(u, x_{i+1}, ..., x_n)
//! ```
//!
//! indexed by the parameter `u`, with `F_i(0) = 0` and the one-parameter
//! group law: running the flow for `u` and then for `v` equals running it
//! for `u + v`. The law is checked symbolically on construction with a
//! second formal parameter, so invalid families are rejected up front.
//!
//! Because the top moving coordinate `x_d` only sees `F_d = u * s` with `s`
//! free of `u` (additivity in `u` forces linearity), the hyperplane
//! `x_d = c` meets each orbit exactly once wherever `s` is nonzero. Solving
//! for the parameter and substituting back gives, for every other
//! coordinate, a rational invariant that restricts to that coordinate on
//! the hyperplane — a rational cross-section. [`slice_chain`] repeats this
//! against a whole family of flows, transporting the remaining flows onto
//! the slice each time, until nothing moves; the composed pullbacks are
//! joint invariants in the original coordinates.
//!
//! The flows this was built for come from nilpotent Lie algebras acting on
//! the dual of their underlying space: [`coadjoint_flows`] turns validated
//! structure constants ([`NilpotentAlgebra`]) into one flow per basis
//! vector via a nilpotent matrix exponential.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::arith::Rational;
use crate::expr::{
    parse_ratfunc, render, AlgebraDocument, MapDocument, MapEntry, MapVariant, ParseError,
};
use crate::invariants::check_independence;
use crate::jonq::{JonqElement, Variant};
use crate::poly::{Monomial, Polynomial, Var};
use crate::ratfunc::{RatFunc, RatFuncError, Substitution};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SliceError {
    #[error("offset {index}: coefficient parameters a1/a2 are not allowed in flows")]
    ForbiddenParameter { index: usize },
    #[error("offset {index} may only involve coordinates after x{index}")]
    NotTriangular { index: usize },
    #[error("offset {index} mentions a coordinate beyond x{n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("offset {index} must vanish at u = 0")]
    NotZeroAtZero { index: usize },
    #[error("offset {index} breaks the flow law (u then v must equal u + v)")]
    GroupLawViolation { index: usize },
    #[error("expected {expected} offsets, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("document is not a flow")]
    NotAFlow,
    #[error("offset {index}: flows take no multiplier other than 1")]
    MultiplierForbidden { index: usize },
    #[error("offset {index} does not parse: {source}")]
    Parse { index: usize, source: ParseError },
    #[error("the flow moves nothing, there is nothing to slice")]
    TrivialFlow,
    #[error("top offset at x{index} is not linear in the parameter")]
    SlopeNotLinear { index: usize },
    #[error("pivot {pivot} is out of range for this family")]
    BadPivot { pivot: usize },
    #[error("slice value {value} for x{index} runs into a vanishing denominator")]
    DegenerateConstant { index: usize, value: Rational },
    #[error("flow {flow} fails validation after slicing x{index}: {source}")]
    InducedFlowInvalid {
        index: usize,
        flow: usize,
        source: Box<SliceError>,
    },
    #[error("no candidate slice value works for x{index}")]
    CandidatesExhausted { index: usize },
    #[error("no flows given")]
    Empty,
    #[error("flows have mixed arities")]
    ArityMismatch,
}

/// A validated one-parameter unipotent flow `x_i -> x_i + F_i(u, later)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveFlow {
    n: usize,
    f: Vec<RatFunc>,
}

impl AdditiveFlow {
    /// Validates the offsets: triangular shape, no coefficient parameters,
    /// zero at `u = 0`, and the symbolic one-parameter group law.
    pub fn new(n: usize, f: Vec<RatFunc>) -> Result<AdditiveFlow, SliceError> {
        if f.len() != n {
            return Err(SliceError::WrongLength {
                expected: n,
                got: f.len(),
            });
        }
        for (i, offset) in f.iter().enumerate() {
            let index = i + 1;
            if offset.contains_var(Var::A1) || offset.contains_var(Var::A2) {
                return Err(SliceError::ForbiddenParameter { index });
            }
            if let Some(top) = offset.max_x_index() {
                if top as usize > n {
                    return Err(SliceError::IndexOutOfRange { index, n });
                }
            }
            if !offset.depends_only_on(index) {
                return Err(SliceError::NotTriangular { index });
            }
        }
        let flow = AdditiveFlow { n, f };
        for i in 0..n {
            let index = i + 1;
            let at_zero = flow.f[i]
                .substitute(&Substitution::identity().with(Var::U, RatFunc::zero()))
                .map_err(|_| SliceError::NotZeroAtZero { index })?;
            if !at_zero.is_zero() {
                return Err(SliceError::NotZeroAtZero { index });
            }
        }
        // Group law with a fresh formal parameter: F(u + a1) must equal
        // F(u) plus the flow at u applied to F(a1).
        let shift = RatFunc::var(Var::U).add(&RatFunc::var(Var::A1));
        let to_a1 = Substitution::identity().with(Var::U, RatFunc::var(Var::A1));
        let flow_sub = flow.substitution();
        for i in 0..n {
            let index = i + 1;
            let lhs = flow.f[i]
                .substitute(&Substitution::identity().with(Var::U, shift.clone()))
                .expect("affine parameter change keeps denominators nonzero");
            let second = flow.f[i]
                .substitute(&to_a1)
                .expect("parameter rename keeps denominators nonzero")
                .substitute(&flow_sub)
                .expect("unit-triangular substitution is invertible");
            let rhs = flow.f[i].add(&second);
            if lhs != rhs {
                return Err(SliceError::GroupLawViolation { index });
            }
        }
        Ok(flow)
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// The offsets `F_1, ..., F_n` with the parameter symbolic.
    pub fn offsets(&self) -> &[RatFunc] {
        &self.f
    }

    pub fn is_trivial(&self) -> bool {
        self.f.iter().all(RatFunc::is_zero)
    }

    /// The largest coordinate index the flow actually moves.
    pub fn max_moved_index(&self) -> Option<usize> {
        (1..=self.n).rev().find(|&i| !self.f[i - 1].is_zero())
    }

    /// The substitution `x_i -> x_i + F_i` with `u` left symbolic.
    fn substitution(&self) -> Substitution {
        let mut sub = Substitution::identity();
        for i in 0..self.n {
            let v = Var::X(i as u32 + 1);
            sub.set(v, RatFunc::var(v).add(&self.f[i]));
        }
        sub
    }

    /// Acts on a function of the coordinates (the function must not itself
    /// contain the flow parameter).
    pub fn apply(&self, h: &RatFunc) -> RatFunc {
        h.substitute(&self.substitution())
            .expect("unit-triangular substitution is invertible")
    }

    /// The offsets with the parameter replaced by `value`; errors when a
    /// denominator collapses there.
    pub fn offsets_at(&self, value: &RatFunc) -> Result<Vec<RatFunc>, RatFuncError> {
        let sub = Substitution::identity().with(Var::U, value.clone());
        self.f
            .iter()
            .map(|offset| offset.substitute(&sub))
            .collect()
    }

    /// Freezes the flow at a rational parameter value, yielding a group
    /// element with unit multipliers.
    pub fn at(&self, value: &Rational) -> Result<JonqElement, RatFuncError> {
        let offsets = self.offsets_at(&RatFunc::constant(value.clone()))?;
        Ok(
            JonqElement::new(Variant::J, self.n, vec![RatFunc::one(); self.n], offsets)
                .expect("frozen flow is a valid element"),
        )
    }

    /// Reads a flow from its JSON document form.
    pub fn from_document(doc: &MapDocument) -> Result<AdditiveFlow, SliceError> {
        if doc.variant != MapVariant::Flow {
            return Err(SliceError::NotAFlow);
        }
        if doc.maps.len() != doc.n {
            return Err(SliceError::WrongLength {
                expected: doc.n,
                got: doc.maps.len(),
            });
        }
        let mut f = Vec::with_capacity(doc.n);
        for (i, entry) in doc.maps.iter().enumerate() {
            let index = i + 1;
            if let Some(mu) = &entry.mu {
                let parsed =
                    parse_ratfunc(mu).map_err(|source| SliceError::Parse { index, source })?;
                if !parsed.is_one() {
                    return Err(SliceError::MultiplierForbidden { index });
                }
            }
            f.push(parse_ratfunc(&entry.f).map_err(|source| SliceError::Parse { index, source })?);
        }
        AdditiveFlow::new(doc.n, f)
    }

    pub fn to_document(&self) -> MapDocument {
        MapDocument {
            variant: MapVariant::Flow,
            n: self.n,
            maps: self
                .f
                .iter()
                .map(|offset| MapEntry {
                    mu: None,
                    f: render(offset),
                })
                .collect(),
        }
    }
}

/// The top moving coordinate of a flow and the slope there: the offset at
/// the largest moved index is `u * s` with `s` free of the parameter.
pub fn extract_slope(flow: &AdditiveFlow) -> Result<(usize, RatFunc), SliceError> {
    let d = flow.max_moved_index().ok_or(SliceError::TrivialFlow)?;
    let slope = flow.f[d - 1]
        .div(&RatFunc::var(Var::U))
        .expect("parameter variable is nonzero");
    if slope.contains_var(Var::U) {
        return Err(SliceError::SlopeNotLinear { index: d });
    }
    Ok((d, slope))
}

/// One slicing step: the sliced coordinate, the slope there, the invariant
/// pullbacks of the surviving coordinates, and the whole family transported
/// onto the slice (reindexed to arity `n - 1`).
#[derive(Debug, Clone)]
pub struct SliceStep {
    pub index: usize,
    pub value: Rational,
    pub slope: RatFunc,
    pub pullbacks: Vec<RatFunc>,
    pub induced: Vec<AdditiveFlow>,
}

/// Slices the pivot flow of `family` along `x_d = c`, where `d` is the
/// pivot's top moving coordinate.
pub fn slice_step(
    family: &[AdditiveFlow],
    pivot: usize,
    c: &Rational,
) -> Result<SliceStep, SliceError> {
    let flow = family.get(pivot).ok_or(SliceError::BadPivot { pivot })?;
    let n = flow.arity();
    if family.iter().any(|h| h.arity() != n) {
        return Err(SliceError::ArityMismatch);
    }
    let (d, slope) = extract_slope(flow)?;
    let degenerate = || SliceError::DegenerateConstant {
        index: d,
        value: c.clone(),
    };

    // The parameter value moving a point onto the slice, and the invariant
    // pullbacks x_i + F_i at that value.
    let u0 = RatFunc::constant(c.clone())
        .sub(&RatFunc::var(Var::X(d as u32)))
        .div(&slope)
        .expect("slope is nonzero");
    let offsets = flow.offsets_at(&u0).map_err(|_| degenerate())?;
    let survivors: Vec<usize> = (1..=n).filter(|&i| i != d).collect();
    let pullbacks: Vec<RatFunc> = survivors
        .iter()
        .map(|&i| RatFunc::var(Var::X(i as u32)).add(&offsets[i - 1]))
        .collect();

    // Postconditions of the construction; failures here would be bugs, not
    // data problems.
    let symbolic = flow_at_formal_parameter(flow);
    for e in &pullbacks {
        assert_eq!(
            e.substitute(&symbolic)
                .expect("flow substitution is invertible"),
            e.clone(),
            "pullback is not flow-invariant; this is a bug"
        );
    }
    let restrict = Substitution::identity().with(Var::X(d as u32), RatFunc::constant(c.clone()));
    for (&i, e) in survivors.iter().zip(&pullbacks) {
        let restricted = e.substitute(&restrict).map_err(|_| degenerate())?;
        assert_eq!(
            restricted,
            RatFunc::var(Var::X(i as u32)),
            "pullback does not restrict to its coordinate; this is a bug"
        );
    }

    // Transport every flow in the family onto the slice: the offset of a
    // surviving coordinate is the flow's effect on the pullback, restricted
    // to the slice and renumbered.
    let reindex = {
        let mut sub = Substitution::identity();
        for j in (d + 1)..=n {
            sub.set(Var::X(j as u32), RatFunc::var(Var::X(j as u32 - 1)));
        }
        sub
    };
    let mut induced = Vec::with_capacity(family.len());
    for (fi, h) in family.iter().enumerate() {
        let mut offsets = Vec::with_capacity(n - 1);
        for e in &pullbacks {
            let moved = h.apply(e).sub(e);
            let restricted = moved.substitute(&restrict).map_err(|_| degenerate())?;
            let renamed = restricted
                .substitute(&reindex)
                .expect("coordinate renaming never collapses");
            offsets.push(renamed);
        }
        let flow =
            AdditiveFlow::new(n - 1, offsets).map_err(|source| SliceError::InducedFlowInvalid {
                index: d,
                flow: fi,
                source: Box::new(source),
            })?;
        induced.push(flow);
    }

    Ok(SliceStep {
        index: d,
        value: c.clone(),
        slope,
        pullbacks,
        induced,
    })
}

/// The flow substitution with the parameter renamed to the formal `a1`, for
/// invariance checks against functions that must stay parameter-free.
fn flow_at_formal_parameter(flow: &AdditiveFlow) -> Substitution {
    let to_a1 = Substitution::identity().with(Var::U, RatFunc::var(Var::A1));
    let mut sub = Substitution::identity();
    for i in 0..flow.arity() {
        let v = Var::X(i as u32 + 1);
        let offset = flow.f[i]
            .substitute(&to_a1)
            .expect("parameter rename keeps denominators nonzero");
        sub.set(v, RatFunc::var(v).add(&offset));
    }
    sub
}

/// Slice values to try, in order, at every step of [`slice_chain`].
#[derive(Debug, Clone)]
pub struct SliceOptions {
    pub candidates: Vec<Rational>,
}

impl Default for SliceOptions {
    fn default() -> SliceOptions {
        SliceOptions {
            candidates: [0i64, 1, -1, 2, -2, 3]
                .into_iter()
                .map(|v| Rational::from_integer(v.into()))
                .collect(),
        }
    }
}

/// The result of repeatedly slicing a family of flows until nothing moves.
#[derive(Debug, Clone)]
pub struct SliceResult {
    /// Arity of the original coordinate space.
    pub arity: usize,
    /// Sliced coordinates with their slice values, ascending by index.
    pub sliced: Vec<(usize, Rational)>,
    /// Original indices of the surviving coordinates, ascending.
    pub survivors: Vec<usize>,
    /// Joint invariants, in the original coordinates, one per survivor and
    /// in the same order.
    pub invariants: Vec<RatFunc>,
}

/// Runs the slicing recursion: pick the first nontrivial flow, slice its
/// top coordinate at the first workable candidate value, transport the
/// family, repeat. Degenerate slice values are retried with the next
/// candidate; structural failures abort.
pub fn slice_chain(
    family: &[AdditiveFlow],
    options: &SliceOptions,
) -> Result<SliceResult, SliceError> {
    let first = family.first().ok_or(SliceError::Empty)?;
    let n = first.arity();
    if family.iter().any(|h| h.arity() != n) {
        return Err(SliceError::ArityMismatch);
    }

    let mut current: Vec<AdditiveFlow> = family.to_vec();
    let mut orig_of: Vec<usize> = (1..=n).collect();
    // Expression of each current coordinate as an invariant pullback in the
    // original coordinates.
    let mut exprs: Vec<RatFunc> = (1..=n).map(|i| RatFunc::var(Var::X(i as u32))).collect();
    let mut sliced: Vec<(usize, Rational)> = Vec::new();

    while let Some(pivot) = current.iter().position(|h| !h.is_trivial()) {
        let d = extract_slope(&current[pivot])?.0;
        let orig_index = orig_of[d - 1];
        let mut step = None;
        for c in &options.candidates {
            match slice_step(&current, pivot, c) {
                Ok(found) => {
                    step = Some(found);
                    break;
                }
                Err(SliceError::DegenerateConstant { .. }) => continue,
                Err(other) => return Err(other),
            }
        }
        let step = step.ok_or(SliceError::CandidatesExhausted { index: orig_index })?;

        sliced.push((orig_index, step.value.clone()));
        // Compose: the new coordinates' pullbacks are functions of the old
        // coordinates; rewrite them in the original ones.
        let rewrite = {
            let mut sub = Substitution::identity();
            for (k, e) in exprs.iter().enumerate() {
                sub.set(Var::X(k as u32 + 1), e.clone());
            }
            sub
        };
        exprs = step
            .pullbacks
            .iter()
            .map(|p| {
                p.substitute(&rewrite)
                    .expect("pullback composition stays defined")
            })
            .collect();
        orig_of.remove(d - 1);
        current = step.induced;
    }

    sliced.sort_by_key(|(i, _)| *i);
    Ok(SliceResult {
        arity: n,
        sliced,
        survivors: orig_of,
        invariants: exprs,
    })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("invariant {invariant} is not fixed by flow {flow}")]
    NotInvariant { invariant: usize, flow: usize },
    #[error("invariant {invariant} does not restrict to its coordinate on the slice")]
    WrongRestriction { invariant: usize },
    #[error("sliced indices and invariants do not cover all coordinates")]
    WrongCount,
    #[error("invariants are not algebraically independent")]
    Dependent,
}

/// Checks a slicing result against the original family: every invariant is
/// fixed by every flow, restricts on the slice to its surviving coordinate,
/// and the counts add up with the invariants independent.
pub fn verify_cross_section(
    family: &[AdditiveFlow],
    result: &SliceResult,
) -> Result<(), VerifyError> {
    if result.sliced.len() + result.survivors.len() != result.arity
        || result.invariants.len() != result.survivors.len()
    {
        return Err(VerifyError::WrongCount);
    }
    for (zi, z) in result.invariants.iter().enumerate() {
        for (fi, h) in family.iter().enumerate() {
            let moved = z
                .substitute(&flow_at_formal_parameter(h))
                .expect("flow substitution is invertible");
            if &moved != z {
                return Err(VerifyError::NotInvariant {
                    invariant: zi,
                    flow: fi,
                });
            }
        }
    }
    let mut restrict = Substitution::identity();
    for (i, c) in &result.sliced {
        restrict.set(Var::X(*i as u32), RatFunc::constant(c.clone()));
    }
    for (zi, (z, &surv)) in result.invariants.iter().zip(&result.survivors).enumerate() {
        match z.substitute(&restrict) {
            Ok(r) if r == RatFunc::var(Var::X(surv as u32)) => {}
            _ => return Err(VerifyError::WrongRestriction { invariant: zi }),
        }
    }
    if !check_independence(&result.invariants) && !result.invariants.is_empty() {
        return Err(VerifyError::Dependent);
    }
    Ok(())
}

/// Largest dimension [`NilpotentAlgebra::new`] accepts. Bracket rows and
/// coadjoint flow matrices are dense in the dimension, so this keeps a
/// hostile document with a huge `dim` field from requesting gigabyte
/// allocations.
pub const MAX_ALGEBRA_DIM: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension {dim} exceeds the supported maximum {MAX_ALGEBRA_DIM}")]
    DimensionTooLarge { dim: usize },
    #[error("bracket [{i},{j}] -> {k}: indices must satisfy k > j > i within 1..={dim}")]
    NotStrictlyTriangular {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("bracket [{i},{j}] -> {k} appears twice")]
    DuplicateEntry { i: usize, j: usize, k: usize },
    #[error("bracket [{i},{j}] -> {k}: coefficient does not parse: {source}")]
    ParseCoeff {
        i: usize,
        j: usize,
        k: usize,
        source: ParseError,
    },
    #[error("bracket [{i},{j}] -> {k}: coefficient must be a nonzero rational constant")]
    NotAConstant { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails on (e{i}, e{j}, e{k})")]
    JacobiFails { i: usize, j: usize, k: usize },
}

/// A nilpotent Lie algebra in a strictly triangular basis: nonzero brackets
/// `[e_i, e_j]` (for `i < j`) only involve basis vectors past `e_j`. Jacobi
/// is verified on construction; strict triangularity makes nilpotency
/// automatic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentAlgebra {
    dim: usize,
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

impl NilpotentAlgebra {
    pub fn new(
        dim: usize,
        entries: &[(usize, usize, usize, Rational)],
    ) -> Result<NilpotentAlgebra, AlgebraError> {
        if dim == 0 {
            return Err(AlgebraError::ZeroDimension);
        }
        if dim > MAX_ALGEBRA_DIM {
            return Err(AlgebraError::DimensionTooLarge { dim });
        }
        let mut brackets: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for &(i, j, k, ref c) in entries {
            if !(i >= 1 && i < j && j < k && k <= dim) {
                return Err(AlgebraError::NotStrictlyTriangular { i, j, k, dim });
            }
            if c.is_zero() {
                return Err(AlgebraError::NotAConstant { i, j, k });
            }
            let row = brackets
                .entry((i, j))
                .or_insert_with(|| vec![Rational::zero(); dim]);
            if !row[k - 1].is_zero() {
                return Err(AlgebraError::DuplicateEntry { i, j, k });
            }
            row[k - 1] = c.clone();
        }
        let algebra = NilpotentAlgebra { dim, brackets };
        algebra.check_jacobi()?;
        Ok(algebra)
    }

    pub fn from_document(doc: &AlgebraDocument) -> Result<NilpotentAlgebra, AlgebraError> {
        let mut entries = Vec::with_capacity(doc.brackets.len());
        for &(i, j, k, ref text) in &doc.brackets {
            let parsed = parse_ratfunc(text).map_err(|source| AlgebraError::ParseCoeff {
                i,
                j,
                k,
                source,
            })?;
            let value = parsed
                .as_constant()
                .ok_or(AlgebraError::NotAConstant { i, j, k })?;
            entries.push((i, j, k, value));
        }
        NilpotentAlgebra::new(doc.dim, &entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The coefficient vector of `[e_i, e_j]`, for any order of arguments.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        assert!(i >= 1 && i <= self.dim && j >= 1 && j <= self.dim);
        if i == j {
            return vec![Rational::zero(); self.dim];
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        let mut row = self
            .brackets
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| vec![Rational::zero(); self.dim]);
        if flip {
            for c in &mut row {
                *c = -c.clone();
            }
        }
        row
    }

    /// Bracket of an arbitrary coefficient vector with a basis vector.
    fn bracket_vec(&self, v: &[Rational], j: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (a, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (k, c) in self.bracket(a + 1, j).into_iter().enumerate() {
                if !c.is_zero() {
                    out[k] = out[k].clone() + coeff.clone() * c;
                }
            }
        }
        out
    }

    fn check_jacobi(&self) -> Result<(), AlgebraError> {
        for i in 1..=self.dim {
            for j in (i + 1)..=self.dim {
                for k in (j + 1)..=self.dim {
                    let mut total = self.bracket_vec(&self.bracket(i, j), k);
                    for (idx, term) in self
                        .bracket_vec(&self.bracket(j, k), i)
                        .into_iter()
                        .enumerate()
                    {
                        total[idx] = total[idx].clone() + term;
                    }
                    for (idx, term) in self
                        .bracket_vec(&self.bracket(k, i), j)
                        .into_iter()
                        .enumerate()
                    {
                        total[idx] = total[idx].clone() + term;
                    }
                    if total.iter().any(|c| !c.is_zero()) {
                        return Err(AlgebraError::JacobiFails { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }
}

/// The flow of each basis vector on the dual space, acting on coordinate
/// functions. For basis vector `e_j` the infinitesimal action sends `x_i`
/// to the coordinate expansion of `-[e_j, e_i]`; exponentiating the
/// (nilpotent) negative of that matrix in the parameter gives polynomial
/// flow offsets. Returns one flow per basis vector, trivial ones included.
pub fn coadjoint_flows(algebra: &NilpotentAlgebra) -> Vec<AdditiveFlow> {
    let n = algebra.dim();
    (1..=n)
        .map(|j| {
            // S[i][k]: coefficient of x_{k+1} in the derivative of x_{i+1}.
            let s: Vec<Vec<Rational>> = (1..=n)
                .map(|i| algebra.bracket(j, i).into_iter().map(|c| -c).collect())
                .collect();
            let mut offsets = vec![Polynomial::zero(); n];
            let mut power = identity_matrix(n);
            let mut factorial = Rational::one();
            for m in 1..=n as u64 {
                power = mat_mul(&power, &s);
                if power.iter().all(|row| row.iter().all(Zero::is_zero)) {
                    break;
                }
                factorial *= Rational::from_integer(m.into());
                let sign = if m % 2 == 1 {
                    -Rational::one()
                } else {
                    Rational::one()
                };
                let u_pow = Monomial::var(Var::U).pow(m as u32);
                for (i, row) in power.iter().enumerate() {
                    for (k, entry) in row.iter().enumerate() {
                        if entry.is_zero() {
                            continue;
                        }
                        let coeff = sign.clone() * entry.clone() / factorial.clone();
                        let term = Polynomial::term(
                            u_pow.mul(&Monomial::var(Var::X(k as u32 + 1))),
                            coeff,
                        );
                        offsets[i] = offsets[i].add(&term);
                    }
                }
            }
            let f = offsets.into_iter().map(RatFunc::from_poly).collect();
            AdditiveFlow::new(n, f).expect("coadjoint offsets satisfy the flow laws")
        })
        .collect()
}

fn identity_matrix(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    if i == k {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    let mut acc = Rational::zero();
                    for (m, row) in b.iter().enumerate() {
                        if !a[i][m].is_zero() && !row[k].is_zero() {
                            acc += a[i][m].clone() * row[k].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}
