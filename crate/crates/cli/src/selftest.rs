//! Built-in consistency suites. "quick" exercises each subsystem on the
//! p = 47 fixture in a few seconds; "full" runs the exhaustive model
//! scans and both fixture curves.

use std::time::Instant;

use num_bigint::{BigUint, RandBigInt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use rootext::curve;
use rootext::dlog;
use rootext::error::Error;
use rootext::model::{
    brute_force_grep, exhaustive_existence_table, ModelGroup, GOLDEN_EXISTENCE_2_2,
};
use rootext::params::{gen_params, ParamRequest};
use rootext::solver::{
    existence_check, solve_grep, solve_simultaneous, verify_solution, GrepInstance, SimulInstance,
};
use rootext::torsion::{find_basis, weil_pairing, TorsionContext};
use rootext::{CurveTorsion, ModelTorsion, TorsionGroup};

struct Check {
    name: &'static str,
    result: Result<String, String>,
}

/// First line where two texts differ, with both versions.
pub fn diff_location(expected: &str, actual: &str) -> Option<(usize, String, String)> {
    let mut exp = expected.lines();
    let mut act = actual.lines();
    let mut line = 1;
    loop {
        match (exp.next(), act.next()) {
            (None, None) => return None,
            (e, a) if e == a => line += 1,
            (e, a) => {
                return Some((
                    line,
                    e.unwrap_or("<missing line>").to_string(),
                    a.unwrap_or("<missing line>").to_string(),
                ))
            }
        }
    }
}

fn golden_table_check(expected: &str) -> Result<String, String> {
    let regenerated = exhaustive_existence_table(2, 2).map_err(|e| e.to_string())?;
    match diff_location(expected, &regenerated) {
        None => Ok(format!("byte-identical ({} bytes)", regenerated.len())),
        Some((line, exp, act)) => Err(format!(
            "first difference at line {line}: expected `{exp}`, regenerated `{act}`"
        )),
    }
}

fn solvability_check(l: u64, e: u32) -> Result<String, String> {
    let g = ModelTorsion::new(l, e).map_err(|err| err.to_string())?;
    let le = l.pow(e);
    let mut rng = ChaCha12Rng::seed_from_u64(0x5e1f_0001 + le);
    let mut triples = 0u64;
    for m in 0..le {
        for n in 0..le {
            for k0 in 0..le {
                for k1 in 0..le {
                    triples += 1;
                    let k = g.group().element(&[k0, k1]).map_err(|e| e.to_string())?;
                    let oracle = brute_force_grep(l, e, &k, m, n)
                        .map_err(|e| e.to_string())?
                        .is_some();
                    let inst = GrepInstance::new(&g, k, BigUint::from(m), BigUint::from(n));
                    let ex = existence_check(&g, &inst).map_err(|e| e.to_string())?;
                    if ex.solvable != oracle {
                        return Err(format!(
                            "u+r predicate disagrees with brute force at ({m},{n},{k0},{k1})"
                        ));
                    }
                    match solve_grep(&g, &inst, &mut rng) {
                        Ok(out) if oracle => {
                            if !verify_solution(&g, &inst, &out.solution).all_ok() {
                                return Err(format!("unverified solution at ({m},{n},{k0},{k1})"));
                            }
                        }
                        Err(Error::NoSolution { .. }) if !oracle => {}
                        other => {
                            return Err(format!(
                                "solver verdict {other:?} disagrees at ({m},{n},{k0},{k1})"
                            ))
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{triples} triples agree with brute force"))
}

fn full_order_check() -> Result<String, String> {
    let g = ModelGroup::rank2(8).map_err(|e| e.to_string())?;
    let mut checks = 0u64;
    for p0 in 0..8u64 {
        for p1 in 0..8u64 {
            for q0 in 0..8u64 {
                for q1 in 0..8u64 {
                    if (p0 as i64 * q1 as i64 - p1 as i64 * q0 as i64).rem_euclid(2) == 0 {
                        continue;
                    }
                    let p = g.element(&[p0, p1]).map_err(|e| e.to_string())?;
                    let q = g.element(&[q0, q1]).map_err(|e| e.to_string())?;
                    for m in 0..8u64 {
                        for n in 0..8u64 {
                            if m % 2 == 0 && n % 2 == 0 {
                                continue;
                            }
                            let k = g.add(&g.scalar_mul(m, &p), &g.scalar_mul(n, &q));
                            if g.order(&k) != 8 {
                                return Err(format!(
                                    "ord != 8 at P=({p0},{p1}) Q=({q0},{q1}) m={m} n={n}"
                                ));
                            }
                            checks += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{checks} full-order combinations"))
}

fn generic_root_check(trials: u32) -> Result<String, String> {
    let z12 = ModelGroup::new(vec![12]).map_err(|e| e.to_string())?;
    let h = z12.element(&[4]).map_err(|e| e.to_string())?;
    let x = z12.generic_root(&h, 2, 2).map_err(|e| e.to_string())?;
    if 4 * x.coords()[0] % 12 != 4 {
        return Err(format!("Z/12 worked example returned {:?}", x.coords()));
    }
    let g48 = ModelGroup::rank2(48).map_err(|e| e.to_string())?;
    let mut rng = ChaCha12Rng::seed_from_u64(0x5e1f_0002);
    for _ in 0..trials {
        let r = rng.gen_range(1u32..=3);
        let seed = g48
            .element(&[rng.gen_range(0..48), rng.gen_range(0..48)])
            .map_err(|e| e.to_string())?;
        let h = g48.scalar_mul(1 << r, &seed);
        let root = g48.generic_root(&h, 2, r).map_err(|e| e.to_string())?;
        if g48.scalar_mul(1 << r, &root) != h {
            return Err(format!("round-trip failed for r = {r}"));
        }
    }
    Ok(format!("Z/12 worked example + {trials} round-trips"))
}

fn curve_solver_check(ctx: &TorsionContext, trials: u32, seed: u64) -> Result<String, String> {
    let backend = CurveTorsion::new(ctx);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let le = ctx.lpow_e().clone();
    for trial in 0..trials {
        let basis = backend.find_basis(&mut rng).map_err(|e| e.to_string())?;
        let (p0, q0) = backend.basis_points(&basis);
        let m = rng.gen_biguint_below(&le);
        let n = rng.gen_biguint_below(&le);
        let k = backend.add(&backend.scalar_mul(&m, &p0), &backend.scalar_mul(&n, &q0));
        let inst = GrepInstance::new(&backend, k, m, n);
        let out =
            solve_grep(&backend, &inst, &mut rng).map_err(|e| format!("trial {trial}: {e}"))?;
        if !verify_solution(&backend, &inst, &out.solution).all_ok() {
            return Err(format!("trial {trial}: verification failed"));
        }
    }
    Ok(format!("{trials} solvable instances verified"))
}

fn pairing_check(ctx: &TorsionContext, trials: u32, seed: u64) -> Result<String, String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let le = ctx.lpow_e().clone();
    let basis = find_basis(ctx, &mut rng).map_err(|e| e.to_string())?;
    let g = basis.pairing().clone();
    for _ in 0..trials {
        let a = rng.gen_biguint_below(&le);
        let b = rng.gen_biguint_below(&le);
        let pa = curve::scalar_mul_uint(&a, basis.p_gen(), ctx.curve());
        let qb = curve::scalar_mul_uint(&b, basis.q_gen(), ctx.curve());
        if weil_pairing(&pa, &qb, ctx).map_err(|e| e.to_string())? != g.pow(&(a * b)) {
            return Err("bilinearity failed".into());
        }
        let p =
            rootext::torsion::cofactor_project(&curve::random_point(ctx.curve(), &mut rng), ctx);
        if !weil_pairing(&p, &p, ctx)
            .map_err(|e| e.to_string())?
            .is_one()
        {
            return Err("alternation failed".into());
        }
    }
    let le_minus = BigUint::from(ctx.l()).pow(ctx.e() - 1);
    if g.pow(&le_minus).is_one() || !g.pow(&le).is_one() {
        return Err("basis pairing does not have exact order l^e".into());
    }
    Ok(format!("{trials} bilinearity/alternation samples"))
}

fn dlog_check(ctx: &TorsionContext, trials: u32, seed: u64) -> Result<String, String> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let le = ctx.lpow_e().clone();
    let basis = find_basis(ctx, &mut rng).map_err(|e| e.to_string())?;
    for _ in 0..trials {
        let k1 = rng.gen_biguint_below(&le);
        let k2 = rng.gen_biguint_below(&le);
        let k = curve::add(
            &curve::scalar_mul_uint(&k1, basis.p_gen(), ctx.curve()),
            &curve::scalar_mul_uint(&k2, basis.q_gen(), ctx.curve()),
            ctx.curve(),
        );
        let dl = dlog::extended_dlog(&k, &basis, ctx).map_err(|e| e.to_string())?;
        if (dl.k1, dl.k2) != (k1, k2) {
            return Err("extended dlog mismatch".into());
        }
    }
    Ok(format!("{trials} round-trips"))
}

fn simultaneous_check(ctx: &TorsionContext, trials: u32, seed: u64) -> Result<String, String> {
    let backend = CurveTorsion::new(ctx);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let le = ctx.lpow_e().clone();
    let mut solved = 0;
    while solved < trials {
        let basis = backend.find_basis(&mut rng).map_err(|e| e.to_string())?;
        let (p, q) = backend.basis_points(&basis);
        let c: Vec<BigUint> = (0..4).map(|_| rng.gen_biguint_below(&le)).collect();
        if c.iter().all(|v| (v % ctx.l()) == BigUint::from(0u32)) {
            continue;
        }
        let det = ((&c[0] * &c[3]) % &le + &le - (&c[1] * &c[2]) % &le) % &le;
        if det == BigUint::from(0u32) {
            continue;
        }
        let mk = |m: &BigUint, n: &BigUint| {
            backend.add(&backend.scalar_mul(m, &p), &backend.scalar_mul(n, &q))
        };
        let inst = SimulInstance {
            k1: mk(&c[0], &c[1]),
            k2: mk(&c[2], &c[3]),
            m1: c[0].clone(),
            n1: c[1].clone(),
            m2: c[2].clone(),
            n2: c[3].clone(),
        };
        let out = solve_simultaneous(&backend, &inst, &mut rng)
            .map_err(|e| format!("instance {solved}: {e}"))?;
        if !backend
            .is_independent(&out.solution.p, &out.solution.q)
            .map_err(|e| e.to_string())?
        {
            return Err(format!("instance {solved}: output does not generate"));
        }
        solved += 1;
    }
    Ok(format!("{trials} random systems solved and verified"))
}

fn run_check(
    checks: &mut Vec<Check>,
    name: &'static str,
    body: impl FnOnce() -> Result<String, String>,
) {
    checks.push(Check {
        name,
        result: body(),
    });
}

/// Runs the suite, prints one line per check, and returns overall success.
pub fn run(full: bool) -> bool {
    let started = Instant::now();
    println!("selftest ({})", if full { "full" } else { "quick" });
    let mut checks = Vec::new();

    run_check(&mut checks, "golden-table", || {
        golden_table_check(GOLDEN_EXISTENCE_2_2)
    });
    run_check(&mut checks, "solvability-(2,2)", || solvability_check(2, 2));
    run_check(&mut checks, "generic-root", || {
        generic_root_check(if full { 500 } else { 100 })
    });

    let ctx47 = gen_params(&ParamRequest::new(2, 4)).expect("p = 47 fixture");
    let quick_trials = if full { 1000 } else { 100 };
    run_check(&mut checks, "curve-p47", || {
        curve_solver_check(&ctx47, quick_trials, 0x5e1f_0010)
    });
    run_check(&mut checks, "pairing-p47", || {
        pairing_check(&ctx47, if full { 100 } else { 25 }, 0x5e1f_0011)
    });
    run_check(&mut checks, "dlog-p47", || {
        dlog_check(&ctx47, if full { 200 } else { 50 }, 0x5e1f_0012)
    });
    run_check(&mut checks, "simultaneous-p47", || {
        simultaneous_check(&ctx47, if full { 100 } else { 20 }, 0x5e1f_0013)
    });

    if full {
        run_check(&mut checks, "solvability-(2,3)", || solvability_check(2, 3));
        run_check(&mut checks, "solvability-(3,2)", || solvability_check(3, 2));
        run_check(&mut checks, "full-order-(2,3)", full_order_check);
        let ctx107 = gen_params(&ParamRequest::new(3, 3)).expect("p = 107 fixture");
        run_check(&mut checks, "curve-p107", || {
            curve_solver_check(&ctx107, 1000, 0x5e1f_0020)
        });
        run_check(&mut checks, "pairing-p107", || {
            pairing_check(&ctx107, 100, 0x5e1f_0021)
        });
        run_check(&mut checks, "dlog-p107", || {
            dlog_check(&ctx107, 200, 0x5e1f_0022)
        });
    }

    let mut all_ok = true;
    for check in &checks {
        match &check.result {
            Ok(detail) => println!("  ok    {:<18} {detail}", check.name),
            Err(reason) => {
                all_ok = false;
                println!("  FAIL  {:<18} {reason}", check.name);
            }
        }
    }
    println!(
        "{} of {} checks passed in {:.1?}",
        checks.iter().filter(|c| c.result.is_ok()).count(),
        checks.len(),
        started.elapsed()
    );
    all_ok
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_reports_the_first_divergent_line() {
        assert!(diff_location("a\nb\nc", "a\nb\nc").is_none());
        let (line, exp, act) = diff_location("a\nb\nc", "a\nx\nc").unwrap();
        assert_eq!((line, exp.as_str(), act.as_str()), (2, "b", "x"));
        // truncation counts as a difference
        let (line, _, act) = diff_location("a\nb", "a").unwrap();
        assert_eq!((line, act.as_str()), (2, "<missing line>"));
    }

    #[test]
    fn corrupted_golden_is_caught_with_location() {
        let mut corrupted = GOLDEN_EXISTENCE_2_2.to_string();
        corrupted.replace_range(..1, "x");
        let err = golden_table_check(&corrupted).unwrap_err();
        assert!(err.contains("line 1"), "unexpected message: {err}");
    }
}
