//! Cross-module property suites behind `circdeg verify`.
//!
//! The fast suite is a smoke test. The full suite runs the eleven
//! acceptance properties of the library. Each check is named, timed and
//! independent; a failing check does not stop the others.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::census;
use crate::circulant::{self, ConnectionSet};
use crate::cyclotomic::{self, CyclotomicRing};
use crate::integral;
use crate::mintable;
use crate::numtheory;

/// Seed of the random symbols in the oracle check.
pub const ORACLE_SEED: u64 = 0x00c1_7c0d_e9ee;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fast,
    Full,
}

/// A deliberate defect, used to confirm that the suites detect failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fault {
    /// Euler's totient is off by one for every `n > 2`.
    Totient,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

struct Ctx {
    fault: Option<Fault>,
}

impl Ctx {
    fn phi(&self, n: u64) -> u64 {
        let v = numtheory::euler_phi(n).expect("positive argument");
        match self.fault {
            Some(Fault::Totient) if n > 2 => v + 1,
            _ => v,
        }
    }
}

type CheckResult = Result<String, String>;
type CheckFn = fn(&Ctx) -> CheckResult;

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn checks(suite: Suite) -> Vec<(&'static str, CheckFn)> {
    match suite {
        Suite::Fast => vec![
            ("oracle-equivalence-n-le-40", |_| oracle_exhaustive(40)),
            ("table-d-le-30", |c| table_check(c, 30)),
            ("prime-censuses-p-le-100", |c| census_sweep(c, 100)),
        ],
        Suite::Full => vec![
            ("table-reproduction", |c| table_check(c, 100)),
            ("census-13-2", |_| example_1()),
            ("census-19-3", |_| example_2()),
            ("census-11-5", |_| example_3()),
            ("exact-prime-degree-count", |_| exact_prime_degree(300)),
            ("sandwich-bounds", |c| census_sweep(c, 200)),
            ("integral-count-vs-brute-force", |c| integral_counts(c, 120)),
            ("oracle-equivalence", |_| {
                let a = oracle_exhaustive(40)?;
                let b = oracle_random(500, 41, 200)?;
                Ok(format!("{a}; {b}"))
            }),
            ("prime-power-equality", |_| prime_power_equality(1024)),
            ("construction-verification", |c| constructions(c, 200, 100)),
            ("a-m-nonvanishing", |_| a_m_sweep(200)),
        ],
    }
}

/// Runs a suite, calling `progress` after each check.
pub fn run(suite: Suite, opts: &VerifyOptions, mut progress: impl FnMut(&CheckOutcome)) -> VerifyReport {
    let ctx = Ctx { fault: opts.fault };
    let mut outcomes = Vec::new();
    for (name, check) in checks(suite) {
        let start = Instant::now();
        let result = check(&ctx);
        let outcome = CheckOutcome {
            name: name.to_string(),
            passed: result.is_ok(),
            detail: result.unwrap_or_else(|x| x),
            seconds: start.elapsed().as_secs_f64(),
        };
        progress(&outcome);
        outcomes.push(outcome);
    }
    VerifyReport { suite, outcomes }
}

fn oracle_exhaustive(n_max: u64) -> CheckResult {
    let mut count = 0u64;
    for n in 1..=n_max {
        let ring = CyclotomicRing::new(n).map_err(e)?;
        for s in circulant::symmetric_symbols(n).map_err(e)? {
            let oracle = cyclotomic::splitting_degree_with(&ring, &s).map_err(e)?;
            let deg = circulant::algebraic_degree(&s);
            ensure(oracle == deg, || format!("{s}: degree {deg}, oracle {oracle}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} symbols with n <= {n_max}"))
}

/// Uniformly random symbols: `n` uniform in `lo..=hi`, each class `{s, n-s}`
/// present with probability 1/2.
pub fn random_symbols(count: usize, lo: u64, hi: u64, seed: u64) -> Vec<ConnectionSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let raw: Vec<u64> = (1..=n / 2)
                .filter(|_| rng.gen_bool(0.5))
                .flat_map(|s| [s, n - s])
                .collect();
            ConnectionSet::new(n, raw).expect("symmetric by construction")
        })
        .collect()
}

fn oracle_random(count: usize, lo: u64, hi: u64) -> CheckResult {
    for s in random_symbols(count, lo, hi, ORACLE_SEED) {
        let oracle = cyclotomic::splitting_degree_oracle(&s).map_err(e)?;
        let deg = circulant::algebraic_degree(&s);
        ensure(oracle == deg, || format!("{s}: degree {deg}, oracle {oracle}"))?;
    }
    Ok(format!("{count} random symbols with {lo} <= n <= {hi}"))
}

fn table_check(ctx: &Ctx, d_max: u64) -> CheckResult {
    let rows = mintable::table(d_max).map_err(e)?;
    let mismatches = mintable::check_against_golden(&rows);
    ensure(mismatches.is_empty(), || format!("golden mismatches: {mismatches:?}"))?;
    for r in &rows {
        if r.d == 1 {
            continue;
        }
        let d = r.d;
        ensure(ctx.phi(r.c_of_d) % (2 * d) == 0, || {
            format!("2*{d} does not divide phi(C({d})) = phi({})", r.c_of_d)
        })?;
        if let Some(n) = (1..r.c_of_d).find(|&n| ctx.phi(n) % (2 * d) == 0) {
            return Err(format!("C({d}) = {} is not minimal: {n} is admissible", r.c_of_d));
        }
        ensure(circulant::algebraic_degree(&r.witness) == d, || format!("witness of row {d}"))?;
    }
    Ok(format!("{} rows match", rows.len()))
}

fn pm(n: u64, xs: &[u64]) -> ConnectionSet {
    ConnectionSet::new(n, xs.iter().flat_map(|&x| [x, n - x])).expect("symmetric")
}

fn example(p: u64, d: u64, expected: &[ConnectionSet]) -> CheckResult {
    let r = census::prime_census(p, d).map_err(e)?;
    ensure(r.value == expected.len() as u128, || {
        format!("census({p}, {d}) = {}, expected {}", r.value, expected.len())
    })?;
    for x in expected {
        let hits = r
            .witnesses
            .iter()
            .filter(|w| circulant::multiplier_isomorphic(w, x).ok().flatten().is_some())
            .count();
        ensure(hits == 1, || format!("{x} matches {hits} witnesses"))?;
    }
    Ok(format!("census({p}, {d}) = {}", r.value))
}

fn example_1() -> CheckResult {
    example(13, 2, &[pm(13, &[1, 3, 4])])
}

fn example_2() -> CheckResult {
    example(19, 3, &[pm(19, &[1, 7, 8]), pm(19, &[1, 2, 3, 5, 7, 8])])
}

fn example_3() -> CheckResult {
    example(
        11,
        5,
        &[
            pm(11, &[1]),
            pm(11, &[1, 2]),
            pm(11, &[1, 4]),
            pm(11, &[1, 2, 3]),
            pm(11, &[1, 2, 4]),
            pm(11, &[1, 2, 3, 4]),
        ],
    )
}

fn primes(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    (lo..=hi).filter(|&p| numtheory::is_prime(p))
}

fn exact_prime_degree(p_max: u64) -> CheckResult {
    let mut cases = 0;
    for d in [2u64, 3, 5, 7] {
        let expected = census::exact_count_prime_degree(d).map_err(e)?;
        for p in primes(3, p_max).filter(|p| ((p - 1) / 2) % d == 0) {
            let v = census::prime_census(p, d).map_err(e)?.value;
            ensure(v == expected, || format!("census({p}, {d}) = {v}, expected {expected}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (p, d) pairs"))
}

fn census_sweep(ctx: &Ctx, p_max: u64) -> CheckResult {
    let mut cases = 0;
    for p in primes(3, p_max) {
        ensure(ctx.phi(p) == p - 1, || format!("phi({p}) = {}", ctx.phi(p)))?;
        for d in numtheory::divisors((p - 1) / 2).map_err(e)? {
            if d < 2 {
                continue;
            }
            let v = census::prime_census(p, d).map_err(e)?.value;
            let (lo, _) = census::lower_bound(p, d).map_err(e)?;
            let hi = census::upper_bound_prime(d).map_err(e)?;
            ensure(u128::from(lo) <= v && v <= hi, || {
                format!("({p}, {d}): {lo} <= {v} <= {hi} fails")
            })?;
            cases += 1;
        }
    }
    Ok(format!("{cases} (p, d) pairs"))
}

fn integral_counts(ctx: &Ctx, n_max: u64) -> CheckResult {
    for n in 1..=n_max {
        let formula = integral::count_connected_integral(n).map_err(e)?;
        let brute = integral::count_connected_integral_bruteforce(n).map_err(e)?;
        ensure(formula == brute, || format!("n = {n}: formula {formula}, brute force {brute}"))?;
        let divs = numtheory::divisors(n).map_err(e)?;
        let total: u128 = divs
            .iter()
            .map(|&d| integral::count_connected_integral(d))
            .sum::<Result<u128, _>>()
            .map_err(e)?;
        ensure(total == 1u128 << (divs.len() - 1), || format!("divisor sum at n = {n} is {total}"))?;
        let basic: u64 = divs.iter().filter(|&&d| d != n).map(|&d| ctx.phi(n / d)).sum();
        ensure(basic == n - 1, || format!("basic symbols of Z_{n} have {basic} elements"))?;
    }
    Ok(format!("n <= {n_max}"))
}

fn prime_power_equality(n_max: u64) -> CheckResult {
    let mut powers = 0;
    for n in 2..=n_max {
        let fact = numtheory::factorize(n).map_err(e)?;
        let bound = 1u128 << (fact.tau() - 2);
        let v = integral::count_connected_integral(n).map_err(e)?;
        if fact.is_prime_power() {
            ensure(v == bound, || format!("n = {n}: {v} != {bound}"))?;
            powers += 1;
        } else {
            ensure(v > bound, || format!("n = {n}: {v} <= {bound}"))?;
        }
    }
    Ok(format!("{powers} prime powers <= {n_max}"))
}

fn constructions(ctx: &Ctx, n_max: u64, d_max: u64) -> CheckResult {
    let mut cases = 0;
    for n in 3..=n_max {
        let phi = ctx.phi(n);
        for d in numtheory::divisors(numtheory::euler_phi(n).map_err(e)? / 2).map_err(e)? {
            let s = circulant::regular_construction(n, d).map_err(e)?;
            let deg = circulant::algebraic_degree(&s);
            ensure(deg == d, || format!("regular_construction({n}, {d}) has degree {deg}"))?;
            ensure(s.valency() * d == phi, || {
                format!("regular_construction({n}, {d}) has valency {}, phi/d = {}/{d}", s.valency(), phi)
            })?;
            cases += 1;
        }
    }
    for d in 1..=d_max {
        let (p, s) = circulant::minimal_prime_construction(d).map_err(e)?;
        let deg = circulant::algebraic_degree(&s);
        ensure(deg == d, || format!("minimal_prime_construction({d}) on {p} vertices has degree {deg}"))?;
    }
    Ok(format!("{cases} regular constructions, {d_max} prime constructions"))
}

fn a_m_sweep(p_bound: u64) -> CheckResult {
    let mut cases = 0;
    for p in primes(3, p_bound - 1) {
        for d in numtheory::divisors((p - 1) / 2).map_err(e)? {
            for m in 1..d {
                ensure(census::a_m_nonvanishing_check(p, d, m).map_err(e)?, || {
                    format!("A_{m} vanishes mod {p} for d = {d}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (p, d, m) triples"))
}
