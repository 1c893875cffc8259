//! Integral circulant graphs.
//!
//! `Cay(Z_n, S)` is integral exactly when `S` is a union of basic symbols
//! `G_n(d) = {x : gcd(x, n) = d}` over a set `D` of proper divisors of `n`.
//! Distinct divisor sets give non-isomorphic graphs, so counting connected
//! symbols counts isomorphism classes.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::circulant::{self, ConnectionSet};
use crate::error::{invalid, Error, Result};
use crate::numtheory;

/// Largest divisor count accepted by the brute-force counter.
pub const BRUTE_FORCE_TAU_LIMIT: u64 = 24;

/// A set `D` of proper divisors of `n`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralSymbol {
    n: u64,
    divisors: Vec<u64>,
}

impl IntegralSymbol {
    pub fn new(n: u64, divisors: impl IntoIterator<Item = u64>) -> Result<IntegralSymbol> {
        if n == 0 {
            return Err(invalid("modulus must be positive"));
        }
        let mut divisors: Vec<u64> = divisors.into_iter().collect();
        divisors.sort_unstable();
        divisors.dedup();
        for &d in &divisors {
            if d == 0 || n % d != 0 || d == n {
                return Err(invalid(format!("{d} is not a proper divisor of {n}")));
            }
        }
        Ok(IntegralSymbol { n, divisors })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }
}

impl fmt::Display for IntegralSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|", self.n)?;
        for (i, d) in self.divisors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Parses `n|d1,d2,...`.
impl FromStr for IntegralSymbol {
    type Err = Error;

    fn from_str(input: &str) -> Result<IntegralSymbol> {
        let malformed = |reason: String| Error::Malformed {
            input: input.to_string(),
            reason,
        };
        let (n_part, rest) = input
            .trim()
            .split_once('|')
            .ok_or_else(|| malformed("expected `n|d1,d2,...`".into()))?;
        let n: u64 = n_part
            .trim()
            .parse()
            .map_err(|e| malformed(format!("bad modulus: {e}")))?;
        let mut divs = Vec::new();
        if !rest.trim().is_empty() {
            for tok in rest.split(',') {
                divs.push(
                    tok.trim()
                        .parse::<u64>()
                        .map_err(|e| malformed(format!("bad divisor {tok:?}: {e}")))?,
                );
            }
        }
        IntegralSymbol::new(n, divs).map_err(|e| match e {
            Error::InvalidArgument(reason) => malformed(reason),
            other => other,
        })
    }
}

impl Serialize for IntegralSymbol {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntegralSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `G_n(d) = {x in 1..n : gcd(x, n) = d}`.
pub fn basic_symbol(n: u64, d: u64) -> Result<Vec<u64>> {
    if n == 0 || d == 0 || n % d != 0 || d == n {
        return Err(invalid(format!("{d} is not a proper divisor of {n}")));
    }
    Ok((1..n).filter(|x| x.gcd(&n) == d).collect())
}

pub fn realize(sym: &IntegralSymbol) -> ConnectionSet {
    let n = sym.n;
    let elements: Vec<u64> = (1..n)
        .filter(|x| sym.divisors.binary_search(&x.gcd(&n)).is_ok())
        .collect();
    ConnectionSet::from_sorted_unchecked(n, elements)
}

/// The divisor set whose realization is `S`, if `S` is integral.
pub fn is_integral(s: &ConnectionSet) -> Option<IntegralSymbol> {
    let n = s.n();
    let mut divs: Vec<u64> = s.elements().iter().map(|x| x.gcd(&n)).collect();
    divs.sort_unstable();
    divs.dedup();
    let sym = IntegralSymbol { n, divisors: divs };
    let total: u64 = sym
        .divisors
        .iter()
        .map(|&d| numtheory::euler_phi(n / d).expect("positive"))
        .sum();
    (total == s.valency()).then_some(sym)
}

/// The bijection from all integral symbols of order `n` onto the connected
/// integral symbols of orders dividing `n`: with `A = n/D` and `M = lcm(A)`,
/// `D` maps to the symbol `{M/a : a in A}` of order `M`. The empty symbol
/// maps to the empty symbol of order 1.
pub fn phi_map(sym: &IntegralSymbol) -> Result<(u64, IntegralSymbol)> {
    if sym.divisors.is_empty() {
        return Ok((1, IntegralSymbol { n: 1, divisors: vec![] }));
    }
    let quotients: Vec<u64> = sym.divisors.iter().map(|&d| sym.n / d).collect();
    let order = numtheory::lcm_of_set(&quotients)?;
    let image = IntegralSymbol::new(order, quotients.iter().map(|&a| order / a))?;
    Ok((order, image))
}

/// Number of connected integral circulant graphs on `n` vertices up to
/// isomorphism: `(1/2) sum_{d | n} mu(d) 2^{tau(n/d)}`.
pub fn count_connected_integral(n: u64) -> Result<u128> {
    let fact = numtheory::factorize(n)?;
    let mut sum: i128 = 0;
    for d in fact.divisors() {
        let mu = numtheory::mobius(d)?;
        if mu == 0 {
            continue;
        }
        let t = numtheory::tau(n / d)?;
        if t >= 126 {
            return Err(Error::Overflow("count_connected_integral"));
        }
        sum += i128::from(mu) * (1i128 << t);
    }
    if sum < 0 || sum % 2 != 0 {
        return Err(Error::Inconsistency(format!(
            "Moebius sum {sum} for n = {n} is not a nonnegative even number"
        )));
    }
    Ok((sum / 2) as u128)
}

/// Counts divisor sets `D ⊆ D(n) \ {n}` whose realization is connected.
pub fn count_connected_integral_bruteforce(n: u64) -> Result<u128> {
    let proper: Vec<u64> = numtheory::divisors(n)?
        .into_iter()
        .filter(|&d| d != n)
        .collect();
    if proper.len() as u64 + 1 > BRUTE_FORCE_TAU_LIMIT {
        return Err(invalid(format!(
            "tau({n}) = {} exceeds the enumeration bound {BRUTE_FORCE_TAU_LIMIT}",
            proper.len() + 1
        )));
    }
    let mut count = 0u128;
    for mask in 0u64..1 << proper.len() {
        let sym = IntegralSymbol {
            n,
            divisors: proper
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &d)| d)
                .collect(),
        };
        if circulant::is_connected(&realize(&sym)) {
            count += 1;
        }
    }
    Ok(count)
}

/// All `2^{tau(n)-1}` integral symbols of order `n`.
pub fn all_symbols(n: u64) -> Result<Vec<IntegralSymbol>> {
    let proper: Vec<u64> = numtheory::divisors(n)?
        .into_iter()
        .filter(|&d| d != n)
        .collect();
    if proper.len() >= 32 {
        return Err(invalid(format!("too many divisors of {n} to enumerate")));
    }
    Ok((0u64..1 << proper.len())
        .map(|mask| IntegralSymbol {
            n,
            divisors: proper
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &d)| d)
                .collect(),
        })
        .collect())
}
