//! Acceptance suite: one test per release criterion. Every test prints a
//! single `criterion NN <name>: pass|fail` line (visible with
//! `cargo test --test acceptance -- --nocapture`) and fails the build when
//! its checks do not hold. All randomness is seeded, so the suite is
//! deterministic.

use std::time::{Duration, Instant};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use dejonq::arith::{rat, rat_int};
use dejonq::expr::{parse_ratfunc, render, AlgebraDocument};
use dejonq::invariants::{invariant_chain, AnsatzBounds, LevelOutcome};
use dejonq::jonq::{subgroup_closure, JonqElement, OrderResult, Variant};
use dejonq::poly::{gcd, Monomial, Polynomial, Var};
use dejonq::slice::{coadjoint_flows, slice_chain, NilpotentAlgebra, SliceOptions};
use dejonq::torus::{line_certificate, LineConclusion};
use dejonq::{kernel_basis, IntMatrix, RatFunc, Rational};

// ---------------------------------------------------------------------------
// harness

fn criterion(number: u32, name: &str, run: impl FnOnce() -> Result<(), String>) {
    match run() {
        Ok(()) => println!("criterion {number:02} {name}: pass"),
        Err(message) => {
            println!("criterion {number:02} {name}: fail");
            panic!("criterion {number:02} {name}: {message}");
        }
    }
}

fn check(ok: bool, message: impl Fn() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let elapsed = start.elapsed();
    check(elapsed <= budget, || {
        format!("{what} took {elapsed:?}, budget {budget:?}")
    })
}

// ---------------------------------------------------------------------------
// seeded element generators

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_scalar(rng: &mut ChaCha8Rng) -> Rational {
    let pool = [-3i64, -2, -1, 1, 2, 3];
    let num = pool[rng.gen_range(0..pool.len())];
    let den = [1i64, 2, 3][rng.gen_range(0..3)];
    rat(num, den)
}

/// Random polynomial in the given variables, total degree at most
/// `max_degree`, a handful of small terms. May be zero.
fn random_poly(rng: &mut ChaCha8Rng, vars: &[Var], max_degree: u32) -> Polynomial {
    let mut p = Polynomial::zero();
    for _ in 0..rng.gen_range(0..4) {
        let mut mono = Monomial::one();
        let mut left = max_degree;
        for &v in vars {
            let e = rng.gen_range(0..=left);
            mono = mono.mul(&Monomial::var(v).pow(e));
            left -= e;
        }
        p = p.add(&Polynomial::term(mono, random_scalar(rng)));
    }
    p
}

/// Coordinates strictly after `i`, for rules at level `i` of an `n`-space.
fn later_vars(i: usize, n: usize) -> Vec<Var> {
    ((i + 1)..=n).map(|j| Var::X(j as u32)).collect()
}

/// Random element with scalar multipliers and polynomial translations of
/// degree at most 2 in the later coordinates.
fn random_j_element(rng: &mut ChaCha8Rng, n: usize) -> JonqElement {
    let mut mu = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    for i in 1..=n {
        mu.push(RatFunc::constant(random_scalar(rng)));
        f.push(RatFunc::from_poly(random_poly(rng, &later_vars(i, n), 2)));
    }
    JonqElement::new(Variant::J, n, mu, f).expect("construction is valid")
}

/// Random element whose multipliers may be genuine rational functions of
/// the later coordinates.
fn random_jhat_element(rng: &mut ChaCha8Rng, n: usize) -> JonqElement {
    let mut mu = Vec::with_capacity(n);
    let mut f = Vec::with_capacity(n);
    for i in 1..=n {
        let vars = later_vars(i, n);
        let pick = if vars.is_empty() {
            0
        } else {
            rng.gen_range(0..3)
        };
        let m = match pick {
            // (x_j + a) / (x_j + b) with distinct shifts: nonzero, nonconstant
            1 => {
                let v = vars[rng.gen_range(0..vars.len())];
                let a = rat_int(rng.gen_range(1..4));
                let b = rat_int(-rng.gen_range(1..4));
                let num = Polynomial::var(v).add(&Polynomial::constant(a));
                let den = Polynomial::var(v).add(&Polynomial::constant(b));
                RatFunc::new(num, den).expect("denominator is nonzero")
            }
            // x_j^2 + c with c > 0: a nonvanishing polynomial multiplier
            2 => {
                let v = vars[rng.gen_range(0..vars.len())];
                let c = rat_int(rng.gen_range(1..4));
                RatFunc::from_poly(Polynomial::var(v).pow(2).add(&Polynomial::constant(c)))
            }
            _ => RatFunc::constant(random_scalar(rng)),
        };
        mu.push(m);
        f.push(RatFunc::from_poly(random_poly(rng, &vars, 2)));
    }
    JonqElement::new(Variant::Jhat, n, mu, f).expect("construction is valid")
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| {
            let num = rng.gen_range(-9i64..10);
            let den = rng.gen_range(1i64..4);
            rat(num, den)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// criteria

#[test]
fn criterion_01_character_and_cocycle_laws() {
    criterion(1, "character and cocycle laws", || {
        let start = Instant::now();
        let mut rng = rng(101);
        for case in 0..200 {
            let g1 = random_j_element(&mut rng, 3);
            let g2 = random_j_element(&mut rng, 3);
            let product = g1.compose(&g2);
            for i in 0..3 {
                let expected_mu = g1.multipliers()[i].mul(&g2.multipliers()[i]);
                check(product.multipliers()[i] == expected_mu, || {
                    format!("case {case}: multiplier {i} is not multiplicative")
                })?;
                let expected_f = g2.multipliers()[i]
                    .mul(&g1.translations()[i])
                    .add(&g1.apply(&g2.translations()[i]));
                check(product.translations()[i] == expected_f, || {
                    format!("case {case}: translation {i} breaks the cocycle law")
                })?;
            }
            check(g1.compose(&g1.invert()).is_identity(), || {
                format!("case {case}: g * g^-1 is not the identity")
            })?;
            check(
                product.invert() == g2.invert().compose(&g1.invert()),
                || format!("case {case}: inverse of a product is not the reversed product"),
            )?;
        }
        within(start, Duration::from_secs(30), "200 random pairs")
    });
}

#[test]
fn criterion_02_flag_stability() {
    criterion(2, "flag stability", || {
        let mut rng = rng(202);
        for case in 0..100 {
            let n = 3;
            let g = if case % 2 == 0 {
                random_j_element(&mut rng, n)
            } else {
                random_jhat_element(&mut rng, n)
            };
            for j in 1..=n {
                let rule = g.rule(j).expect("index in range");
                check(rule.depends_only_on(j - 1), || {
                    format!("case {case}: rule for x{j} reaches below level {j}")
                })?;
                let tail = RatFunc::from_poly(random_poly(&mut rng, &later_vars(j - 1, n), 2));
                check(g.apply(&tail).depends_only_on(j - 1), || {
                    format!("case {case}: image of a level-{j} function drops below level {j}")
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_03_order_classification() {
    criterion(3, "order classification", || {
        let shift = JonqElement::new(
            Variant::J,
            1,
            vec![RatFunc::one()],
            vec![RatFunc::constant(rat_int(1))],
        )
        .expect("valid");
        check(shift.order(64) == OrderResult::Infinite, || {
            "a translation must have infinite order".to_string()
        })?;

        let flip = JonqElement::new(
            Variant::J,
            1,
            vec![RatFunc::constant(rat_int(-1))],
            vec![RatFunc::zero()],
        )
        .expect("valid");
        check(flip.order(64) == OrderResult::Finite(2), || {
            "a sign flip must have order two".to_string()
        })?;

        // x1 -> -x1 + x2, x2 -> -x2: multipliers of order two, but the
        // square is the translation x1 -> x1 - 2*x2
        let glide = JonqElement::new(
            Variant::J,
            2,
            vec![
                RatFunc::constant(rat_int(-1)),
                RatFunc::constant(rat_int(-1)),
            ],
            vec![RatFunc::var(Var::X(2)), RatFunc::zero()],
        )
        .expect("valid");
        check(glide.order(64) == OrderResult::Infinite, || {
            "the glide must have infinite order".to_string()
        })
    });
}

#[test]
fn criterion_04_finite_closures_are_abelian() {
    criterion(4, "finite closures are abelian", || {
        let mut rng = rng(404);
        let minus = RatFunc::constant(rat_int(-1));
        let d1 = JonqElement::new(
            Variant::J,
            2,
            vec![minus.clone(), RatFunc::one()],
            vec![RatFunc::zero(), RatFunc::zero()],
        )
        .expect("valid");
        let d2 = JonqElement::new(
            Variant::J,
            2,
            vec![RatFunc::one(), minus],
            vec![RatFunc::zero(), RatFunc::zero()],
        )
        .expect("valid");
        for case in 0..20 {
            let h = random_j_element(&mut rng, 2);
            let conjugated: Vec<JonqElement> = [&d1, &d2]
                .iter()
                .map(|d| h.compose(d).compose(&h.invert()))
                .collect();
            let closure = subgroup_closure(&conjugated, 64)
                .map_err(|err| format!("case {case}: closure failed: {err}"))?;
            check(closure.len() == 4, || {
                format!("case {case}: expected 4 elements, got {}", closure.len())
            })?;
            check(closure.is_abelian(), || {
                format!("case {case}: conjugated sign group is not abelian")
            })?;
            for g in closure.elements() {
                check(matches!(g.order(8), OrderResult::Finite(1 | 2)), || {
                    format!("case {case}: element order is not 1 or 2")
                })?;
            }
        }
        Ok(())
    });
}

#[test]
fn criterion_05_invariant_chain_for_the_sign_pair() {
    criterion(5, "invariant chain for the sign pair", || {
        let start = Instant::now();
        let minus = RatFunc::constant(rat_int(-1));
        let g = JonqElement::new(
            Variant::J,
            2,
            vec![minus.clone(), minus],
            vec![RatFunc::zero(), RatFunc::zero()],
        )
        .expect("valid");
        let chain = invariant_chain(std::slice::from_ref(&g), &AnsatzBounds::default())
            .map_err(|err| err.to_string())?;
        let rendered: Vec<String> = chain
            .levels()
            .iter()
            .map(|level| match &level.outcome {
                LevelOutcome::Certified { invariant } => render(invariant),
                other => format!("{other:?}"),
            })
            .collect();
        check(rendered == ["x2^2", "x1*x2"], || {
            format!("unexpected chain {rendered:?}")
        })?;
        check(chain.pure_certified(), || {
            "chain is not certified independent".to_string()
        })?;
        within(start, Duration::from_secs(10), "the chain search")
    });
}

#[test]
fn criterion_06_torus_weight_kernel() {
    criterion(6, "torus weight kernel", || {
        let weights = IntMatrix::from_i64(1, 2, &[5, 3]);
        let basis = kernel_basis(&weights);
        check(basis.len() == 1, || {
            format!("kernel rank {} instead of 1", basis.len())
        })?;
        let v: Vec<i64> = basis[0]
            .iter()
            .map(|z| i64::try_from(z).expect("small"))
            .collect();
        check(v == [3, -5] || v == [-3, 5], || {
            format!("kernel vector {v:?} is not +-(3, -5)")
        })?;
        let invariants = dejonq::invariants::torus_monomial_invariants(&weights);
        let rendered: Vec<String> = invariants.iter().map(render).collect();
        check(rendered == ["x1^3/x2^5"], || {
            format!("unexpected invariants {rendered:?}")
        })
    });
}

#[test]
fn criterion_07_heisenberg_slice_and_orbits() {
    criterion(7, "heisenberg slice and orbits", || {
        let start = Instant::now();
        let algebra = NilpotentAlgebra::from_document(&AlgebraDocument {
            dim: 3,
            brackets: vec![(1, 2, 3, "1".to_string())],
        })
        .map_err(|err| err.to_string())?;
        let family = coadjoint_flows(&algebra);
        let result =
            slice_chain(&family, &SliceOptions::default()).map_err(|err| err.to_string())?;
        let sliced: Vec<usize> = result.sliced.iter().map(|(i, _)| *i).collect();
        check(sliced == [1, 2], || {
            format!("sliced {sliced:?}, not [1, 2]")
        })?;
        let rendered: Vec<String> = result.invariants.iter().map(render).collect();
        check(rendered == ["x3"], || {
            format!("invariants {rendered:?}, not [x3]")
        })?;

        // the invariant must be constant along every one-parameter orbit
        let mut rng = rng(707);
        for case in 0..100 {
            let p = random_point(&mut rng, 3);
            let u = random_scalar(&mut rng);
            let flow = &family[rng.gen_range(0..family.len())];
            let step = flow.at(&u).map_err(|err| format!("case {case}: {err}"))?;
            let q = step
                .move_point(&p)
                .ok_or_else(|| format!("case {case}: polynomial flow hit a pole"))?;
            for inv in &result.invariants {
                let before = inv
                    .evaluate(&p)
                    .map_err(|err| format!("case {case}: {err}"))?;
                let after = inv
                    .evaluate(&q)
                    .map_err(|err| format!("case {case}: {err}"))?;
                check(before == after, || {
                    format!("case {case}: invariant moved along an orbit")
                })?;
            }
        }
        within(start, Duration::from_secs(20), "slice plus 100 orbits")
    });
}

#[test]
fn criterion_08_filiform_cross_section() {
    criterion(8, "filiform cross-section", || {
        let algebra = NilpotentAlgebra::from_document(&AlgebraDocument {
            dim: 4,
            brackets: vec![(1, 2, 3, "1".to_string()), (1, 3, 4, "1".to_string())],
        })
        .map_err(|err| err.to_string())?;
        let family = coadjoint_flows(&algebra);
        check(family.len() == 4, || {
            format!("{} flows instead of 4", family.len())
        })?;
        let result =
            slice_chain(&family, &SliceOptions::default()).map_err(|err| err.to_string())?;
        check(result.sliced.len() == 2, || {
            format!("{} sliced coordinates instead of 2", result.sliced.len())
        })?;
        check(result.survivors == [2, 4], || {
            format!("survivors {:?}, not [2, 4]", result.survivors)
        })?;
        check(
            dejonq::invariants::check_independence(&result.invariants),
            || "slice invariants are not independent".to_string(),
        )?;

        // x3^2 - 2 x2 x4 is the classical invariant; every flow fixes it
        let classical = parse_ratfunc("x3^2 - 2*x2*x4").expect("parses");
        for (i, flow) in family.iter().enumerate() {
            check(flow.apply(&classical) == classical, || {
                format!("flow {} moves the classical invariant", i + 1)
            })?;
        }
        // and it is a combination of the reported invariants
        let z1 = &result.invariants[0]; // (x2 x4 - x3^2/2) / x4
        let z2 = &result.invariants[1]; // x4
        let recombined = z1.mul(z2).scale(&rat_int(-2));
        check(recombined == classical, || {
            "-2 * z1 * z2 does not recover the classical invariant".to_string()
        })
    });
}

#[test]
fn criterion_09_no_line_sweep() {
    criterion(9, "no-line sweep", || {
        let start = Instant::now();
        let mut pairs = Vec::new();
        for d2 in 2i64..=7 {
            for d1 in (d2 + 2)..=7 {
                if num_integer::gcd(d1, d2) == 1 {
                    pairs.push((d1, d2));
                }
            }
        }
        check(
            pairs == [(5, 2), (7, 2), (5, 3), (7, 3), (7, 4), (7, 5)],
            || format!("unexpected sweep {pairs:?}"),
        )?;
        for (d1, d2) in pairs {
            let cert = line_certificate(d1, d2).map_err(|err| err.to_string())?;
            check(cert.conclusion == LineConclusion::NoLine, || {
                format!("({d1}, {d2}) unexpectedly admits a line")
            })?;
            check(
                cert.conditions.separated && cert.conditions.high_degree && cert.conditions.coprime,
                || format!("({d1}, {d2}) fails the stated side conditions"),
            )?;
        }
        within(start, Duration::from_secs(60), "the certificate sweep")
    });
}

#[test]
fn criterion_10_parser_round_trips() {
    criterion(10, "parser round trips", || {
        let mut rng = rng(1010);
        let vars = [Var::X(1), Var::X(2), Var::X(3), Var::U, Var::A1];
        for case in 0..500 {
            let num = random_poly(&mut rng, &vars, 3);
            let mut den = random_poly(&mut rng, &vars, 2);
            if den.is_zero() {
                den = Polynomial::one();
            }
            let f = RatFunc::new(num, den).expect("denominator nonzero");
            let text = render(&f);
            let back = parse_ratfunc(&text)
                .map_err(|err| format!("case {case}: {text:?} failed to parse: {err}"))?;
            check(back == f, || {
                format!("case {case}: {text:?} did not round-trip")
            })?;
        }
        Ok(())
    });
}

#[test]
fn criterion_11_gcd_oracle() {
    criterion(11, "gcd oracle", || {
        let mut rng = rng(1111);
        let vars = [Var::X(1), Var::X(2)];
        let mut done = 0;
        while done < 100 {
            let p = random_poly(&mut rng, &vars, 3);
            let q = random_poly(&mut rng, &vars, 3);
            let r = random_poly(&mut rng, &vars, 2);
            if p.is_zero() || q.is_zero() || r.is_zero() {
                continue;
            }
            done += 1;
            let a = p.mul(&r);
            let b = q.mul(&r);
            let g = gcd(&a, &b).map_err(|err| err.to_string())?;
            check(g.div_exact(&r.make_monic()).is_some(), || {
                format!("instance {done}: planted factor {r} does not divide gcd {g}")
            })?;
            check(
                a.div_exact(&g).is_some() && b.div_exact(&g).is_some(),
                || format!("instance {done}: gcd {g} is not a common divisor"),
            )?;
        }
        Ok(())
    });
}
