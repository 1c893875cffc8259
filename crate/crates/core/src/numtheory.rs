//! Elementary number theory on 63-bit integers.
//!
//! Everything here is a pure function of its arguments.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest accepted input for [`factorize`].
pub const MAX_INPUT: u64 = (1 << 63) - 1;

/// Ceiling for the arithmetic-progression prime search.
pub const PRIME_SEARCH_CEILING: u64 = 1 << 32;

/// Canonical prime factorization. Primes strictly increase, exponents are
/// positive, and `n = 1` has no factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_prime_power(&self) -> bool {
        self.factors.len() == 1
    }

    pub fn is_square_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    pub fn mobius(&self) -> i64 {
        if !self.is_square_free() {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    pub fn sigma(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (0..=e).map(|k| p.pow(k)).sum::<u64>())
            .product()
    }

    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if (a | b) >> 32 == 0 {
        return (a * b) % m;
    }
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

const SMALL_PRIME_LIMIT: u64 = 10_000;

fn small_primes() -> &'static [u64] {
    use std::sync::OnceLock;
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = SMALL_PRIME_LIMIT as usize;
        let mut sieve = vec![true; limit];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i < limit {
            if sieve[i] {
                let mut j = i * i;
                while j < limit {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..limit as u64).filter(|&k| sieve[k as usize]).collect()
    })
}

/// Deterministic primality for all 64-bit inputs: trial division by primes
/// below 10^4, then Miller-Rabin with the first twelve prime bases.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in small_primes() {
        if p * p > n {
            return true;
        }
        if n % p == 0 {
            return n == p;
        }
    }
    miller_rabin(n)
}

fn miller_rabin(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho; `n` is odd, composite and free of small
// factors.
fn pollard_brent(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut q, mut g) = (2u64, 2u64, 1u64, 1u64);
        let mut r = 1u64;
        let mut ys = y;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn collect_prime_factors(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    collect_prime_factors(d, out);
    collect_prime_factors(n / d, out);
}

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(invalid("cannot factorize 0"));
    }
    if n > MAX_INPUT {
        return Err(invalid(format!("{n} exceeds 2^63 - 1")));
    }
    let mut primes = Vec::new();
    let mut rest = n;
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        while rest % p == 0 {
            primes.push(p);
            rest /= p;
        }
    }
    collect_prime_factors(rest, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n, factors })
}

fn factor_positive(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(invalid("argument must be positive"));
    }
    factorize(n)
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factor_positive(n)?.euler_phi())
}

pub fn mobius(n: u64) -> Result<i64> {
    Ok(factor_positive(n)?.mobius())
}

pub fn tau(n: u64) -> Result<u64> {
    Ok(factor_positive(n)?.tau())
}

pub fn sigma(n: u64) -> Result<u64> {
    Ok(factor_positive(n)?.sigma())
}

pub fn omega(n: u64) -> Result<u32> {
    Ok(factor_positive(n)?.omega())
}

pub fn divisors(n: u64) -> Result<Vec<u64>> {
    Ok(factor_positive(n)?.divisors())
}

/// Least prime `p` with `p = 1 (mod 2d)`, searched along `2d+1, 4d+1, ...`
/// up to [`PRIME_SEARCH_CEILING`].
pub fn smallest_prime_1_mod_2d(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    let exhausted = || Error::SearchExhausted {
        what: format!("p = 1 mod {}", d.saturating_mul(2)),
        ceiling: PRIME_SEARCH_CEILING,
    };
    let step = d.checked_mul(2).ok_or_else(exhausted)?;
    let mut candidate = step + 1;
    while candidate <= PRIME_SEARCH_CEILING {
        if is_prime(candidate) {
            return Ok(candidate);
        }
        candidate = candidate.checked_add(step).ok_or_else(exhausted)?;
    }
    Err(exhausted())
}

pub fn lcm_of_set(values: &[u64]) -> Result<u64> {
    check_set(values)?;
    values.iter().try_fold(1u64, |acc, &v| {
        let g = acc.gcd(&v);
        (acc / g)
            .checked_mul(v)
            .ok_or(Error::Overflow("lcm_of_set"))
    })
}

pub fn gcd_of_set(values: &[u64]) -> Result<u64> {
    check_set(values)?;
    Ok(values.iter().fold(0u64, |acc, &v| acc.gcd(&v)))
}

fn check_set(values: &[u64]) -> Result<()> {
    if values.is_empty() {
        return Err(invalid("the set must be nonempty"));
    }
    if values.contains(&0) {
        return Err(invalid("the set must contain positive integers only"));
    }
    Ok(())
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication
        acc = acc
            .checked_mul(u128::from(n - i))
            .ok_or(Error::Overflow("binomial"))?
            / u128::from(i + 1);
    }
    Ok(acc)
}
