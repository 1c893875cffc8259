//! Connection sets of circulant graphs `Cay(Z_n, S)` and their algebraic
//! degree `phi(n) / |Fix(S)|`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numtheory::{self, mul_mod, pow_mod};
use crate::unitgroup::{self, Subgroup};

/// An inverse-symmetric subset of `Z_n \ {0}`, sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectionSet {
    n: u64,
    elements: Vec<u64>,
}

impl ConnectionSet {
    /// Validates `raw` as a connection set over `Z_n`. Order and duplicates
    /// in `raw` do not matter.
    pub fn new(n: u64, raw: impl IntoIterator<Item = u64>) -> Result<ConnectionSet> {
        if n == 0 {
            return Err(invalid("modulus must be positive"));
        }
        let mut elements: Vec<u64> = raw.into_iter().collect();
        elements.sort_unstable();
        elements.dedup();
        if let Some(&bad) = elements.iter().find(|&&s| s >= n) {
            return Err(invalid(format!("residue {bad} out of range for n = {n}")));
        }
        if elements.first() == Some(&0) {
            return Err(invalid("0 cannot belong to a connection set"));
        }
        for &s in &elements {
            if elements.binary_search(&(n - s)).is_err() {
                return Err(invalid(format!(
                    "{s} is present but its inverse {} is missing (n = {n})",
                    n - s
                )));
            }
        }
        Ok(ConnectionSet { n, elements })
    }

    pub(crate) fn from_sorted_unchecked(n: u64, elements: Vec<u64>) -> ConnectionSet {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.iter().all(|&s| s > 0 && s < n));
        ConnectionSet { n, elements }
    }

    pub fn empty(n: u64) -> Result<ConnectionSet> {
        ConnectionSet::new(n, [])
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: u64) -> bool {
        self.elements.binary_search(&s).is_ok()
    }

    /// Valency of the graph.
    pub fn valency(&self) -> u64 {
        self.elements.len() as u64
    }

    fn membership(&self) -> Vec<bool> {
        let mut m = vec![false; self.n as usize];
        for &s in &self.elements {
            m[s as usize] = true;
        }
        m
    }
}

impl fmt::Display for ConnectionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.n)?;
        for (i, s) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Parses `n:s1,s2,...`.
impl FromStr for ConnectionSet {
    type Err = Error;

    fn from_str(input: &str) -> Result<ConnectionSet> {
        let malformed = |reason: String| Error::Malformed {
            input: input.to_string(),
            reason,
        };
        let (n_part, rest) = input
            .trim()
            .split_once(':')
            .ok_or_else(|| malformed("expected `n:s1,s2,...`".into()))?;
        let n: u64 = n_part
            .trim()
            .parse()
            .map_err(|e| malformed(format!("bad modulus: {e}")))?;
        let mut raw = Vec::new();
        if !rest.trim().is_empty() {
            for tok in rest.split(',') {
                let s: u64 = tok
                    .trim()
                    .parse()
                    .map_err(|e| malformed(format!("bad residue {tok:?}: {e}")))?;
                if raw.contains(&s) {
                    return Err(malformed(format!("residue {s} repeated")));
                }
                raw.push(s);
            }
        }
        ConnectionSet::new(n, raw).map_err(|e| match e {
            Error::InvalidArgument(reason) => malformed(reason),
            other => other,
        })
    }
}

impl Serialize for ConnectionSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ConnectionSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Fix(S) = {k in Z_n^* : kS = S}`, by scanning every unit.
pub fn fix(s: &ConnectionSet) -> Subgroup {
    let n = s.n;
    if n == 1 {
        return Subgroup::from_sorted_unchecked(1, vec![0]);
    }
    let member = s.membership();
    let elements = (1..n)
        .filter(|&k| {
            s.elements
                .iter()
                .all(|&x| member[mul_mod(k, x, n) as usize])
                && k.gcd(&n) == 1
        })
        .collect();
    Subgroup::from_sorted_unchecked(n, elements)
}

/// Algebraic degree of `Cay(Z_n, S)`, i.e. `phi(n) / |Fix(S)|`.
pub fn algebraic_degree(s: &ConnectionSet) -> u64 {
    if s.n <= 2 {
        return 1;
    }
    let phi = numtheory::euler_phi(s.n).expect("n is positive");
    phi / fix(s).order()
}

/// A Cayley graph on `Z_n` is connected iff `S` generates `Z_n`, i.e. the
/// gcd of `S ∪ {n}` is 1.
pub fn is_connected(s: &ConnectionSet) -> bool {
    s.elements.iter().fold(s.n, |g, &x| g.gcd(&x)) == 1
}

/// `⋃ rep·H` over the given representatives.
pub fn coset_union(n: u64, h: &Subgroup, reps: &[u64]) -> Result<ConnectionSet> {
    if h.n() != n {
        return Err(invalid("subgroup modulus differs from n"));
    }
    if n >= 3 && !h.contains(n - 1) {
        return Err(invalid(format!("subgroup of Z_{n}^* does not contain -1")));
    }
    let mut out = Vec::with_capacity(reps.len() * h.elements().len());
    for &r in reps {
        if r.gcd(&n) != 1 {
            return Err(Error::NotAUnit { a: r, n });
        }
        out.extend(h.elements().iter().map(|&x| mul_mod(r, x, n)));
    }
    ConnectionSet::new(n, out)
}

/// `mS mod n` for a unit `m`.
pub fn multiplier_image(s: &ConnectionSet, m: u64) -> Result<ConnectionSet> {
    if m.gcd(&s.n) != 1 {
        return Err(Error::NotAUnit { a: m, n: s.n });
    }
    let mut out: Vec<u64> = s.elements.iter().map(|&x| mul_mod(m, x, s.n)).collect();
    out.sort_unstable();
    Ok(ConnectionSet::from_sorted_unchecked(s.n, out))
}

/// Least unit `m` with `mS = T`, if any. Absence proves non-isomorphism only
/// when `gcd(n, phi(n)) = 1`.
pub fn multiplier_isomorphic(s: &ConnectionSet, t: &ConnectionSet) -> Result<Option<u64>> {
    if s.n != t.n {
        return Err(invalid(format!("moduli differ ({} vs {})", s.n, t.n)));
    }
    if s.len() != t.len() {
        return Ok(None);
    }
    let member = t.membership();
    Ok(unitgroup::units(s.n)?.into_iter().find(|&m| {
        s.elements
            .iter()
            .all(|&x| member[mul_mod(m, x, s.n) as usize])
    }))
}

/// Degree-`d` circulant of prime order `p_d`: `S = {r^{jd} : 0 <= j < (p-1)/d}`
/// for the least primitive root `r`.
pub fn minimal_prime_construction(d: u64) -> Result<(u64, ConnectionSet)> {
    let p = numtheory::smallest_prime_1_mod_2d(d)?;
    let r = unitgroup::primitive_root(p)?;
    let rd = pow_mod(r, d, p);
    let m = (p - 1) / d;
    let mut x = 1u64;
    let mut elems = Vec::with_capacity(m as usize);
    for _ in 0..m {
        elems.push(x);
        x = mul_mod(x, rd, p);
    }
    let s = ConnectionSet::new(p, elems)?;
    Ok((p, s))
}

/// A `phi(n)/d`-regular circulant of degree `d`: an inverse-symmetric
/// subgroup of order `phi(n)/d`.
pub fn regular_construction(n: u64, d: u64) -> Result<ConnectionSet> {
    if n < 3 {
        return Err(invalid("n must be at least 3"));
    }
    let phi = numtheory::euler_phi(n)?;
    if d == 0 || (phi / 2) % d != 0 {
        return Err(invalid(format!("{d} does not divide phi({n})/2 = {}", phi / 2)));
    }
    let t = unitgroup::inverse_symmetric_subgroup(n, phi / d)?;
    ConnectionSet::new(n, t.elements().iter().copied())
}

/// Every inverse-symmetric subset of `Z_n \ {0}`, lazily, in the order of
/// the bitmask over the classes `{s, n-s}` for `1 <= s <= n/2`.
pub fn symmetric_symbols(n: u64) -> Result<impl Iterator<Item = ConnectionSet>> {
    if n == 0 || n / 2 >= 63 {
        return Err(invalid(format!("cannot enumerate symbols of Z_{n}")));
    }
    let half = n / 2;
    Ok((0u64..1 << half).map(move |mask| {
        let mut elems = Vec::with_capacity(2 * mask.count_ones() as usize);
        for s in 1..=half {
            if mask >> (s - 1) & 1 == 1 {
                elems.push(s);
            }
        }
        let upper = elems.len();
        for i in (0..upper).rev() {
            let x = n - elems[i];
            if x != elems[i] {
                elems.push(x);
            }
        }
        ConnectionSet::from_sorted_unchecked(n, elems)
    }))
}
