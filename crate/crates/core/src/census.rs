//! Isomorphism classes of connected d-integral circulant graphs.
//!
//! At prime order `p` a degree-`d` symbol is a union of cosets of the unique
//! subgroup `H` of order `(p-1)/d`, multiplier equivalence is the whole
//! isomorphism relation, and the multipliers act on coset indices by
//! rotation of `Z_d`. [`prime_census`] enumerates those rotation orbits. For
//! composite orders only lower bounds with explicit witnesses are offered,
//! plus a brute-force census for very small `n`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::circulant::{self, ConnectionSet};
use crate::error::{invalid, Error, Result};
use crate::numtheory::{self, mul_mod, pow_mod};
use crate::unitgroup::{self, Subgroup};

/// Largest `d` for which [`prime_census`] materializes every orbit.
pub const ENUMERATION_LIMIT: u64 = 20;

/// Largest order accepted by [`naive_census`].
pub const NAIVE_LIMIT: u64 = 12;

pub const METHOD_ORBITS: &str = "coset-orbit-enumeration";
pub const METHOD_NECKLACE: &str = "aperiodic-necklace-count";
pub const METHOD_WITNESS_FAMILY: &str = "witness-family";
pub const METHOD_NAIVE: &str = "naive-isomorphism";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusKind {
    Exact,
    LowerBound,
    UpperBound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub n: u64,
    pub d: u64,
    pub kind: CensusKind,
    pub value: u128,
    pub witnesses: Vec<ConnectionSet>,
    pub method: String,
}

/// Which lower bound produced the value of [`lower_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundRule {
    /// `phi(d)`, `d` a prime power.
    PrimePower,
    /// `phi(d) + omega(d)`, `d` not a prime power.
    NotPrimePower,
    /// `d - omega(d)`, `d` square-free.
    SquareFree,
    /// `d - 1`, `n` prime.
    PrimeOrder,
}

impl LowerBoundRule {
    pub fn tag(self) -> &'static str {
        match self {
            LowerBoundRule::PrimePower => "prime_power",
            LowerBoundRule::NotPrimePower => "not_prime_power",
            LowerBoundRule::SquareFree => "square_free",
            LowerBoundRule::PrimeOrder => "prime_order",
        }
    }
}

/// `2d | phi(n)`: the orders admitting a circulant of degree `d`.
pub fn is_admissible(n: u64, d: u64) -> Result<bool> {
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    Ok(numtheory::euler_phi(n)? % (2 * d) == 0)
}

fn check_prime_census_args(p: u64, d: u64) -> Result<()> {
    if p < 3 || !numtheory::is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    if d < 2 || ((p - 1) / 2) % d != 0 {
        return Err(invalid(format!(
            "d = {d} must satisfy 1 < d and d | (p-1)/2 = {}",
            (p - 1) / 2
        )));
    }
    Ok(())
}

/// Least rotation of a `d`-bit mask and the size of its rotation stabilizer.
fn min_rotation(mask: u64, d: u64) -> (u64, u64) {
    let full = (1u64 << d) - 1;
    let mut best = mask;
    let mut stab = 1;
    let mut cur = mask;
    for _ in 1..d {
        cur = ((cur << 1) | (cur >> (d - 1))) & full;
        if cur == mask {
            stab += 1;
        }
        best = best.min(cur);
    }
    (best, stab)
}

fn canonical_under(s: &ConnectionSet, multipliers: &[u64]) -> ConnectionSet {
    let n = s.n();
    let mut best: Option<Vec<u64>> = None;
    let mut buf = Vec::with_capacity(s.len());
    for &m in multipliers {
        buf.clear();
        buf.extend(s.elements().iter().map(|&x| mul_mod(m, x, n)));
        buf.sort_unstable();
        if best.as_ref().map_or(true, |b| buf < *b) {
            best = Some(buf.clone());
        }
    }
    ConnectionSet::from_sorted_unchecked(n, best.unwrap_or_default())
}

/// Lexicographically least `mS` over all units `m`, for prime `n`.
pub fn canonical_form(s: &ConnectionSet) -> Result<ConnectionSet> {
    if !numtheory::is_prime(s.n()) {
        return Err(invalid(format!("canonical_form needs a prime order, got {}", s.n())));
    }
    Ok(canonical_under(s, &unitgroup::units(s.n())?))
}

struct PrimeCosets {
    h: Subgroup,
    /// `cosets[i] = r^i H`.
    cosets: Vec<Vec<u64>>,
    /// `r^i` for `0 <= i < d`.
    reps: Vec<u64>,
}

fn prime_cosets(p: u64, d: u64) -> Result<PrimeCosets> {
    let h = unitgroup::unique_subgroup_of_prime_modulus(p, (p - 1) / d)?;
    let r = unitgroup::primitive_root(p)?;
    let reps: Vec<u64> = (0..d).map(|i| pow_mod(r, i, p)).collect();
    let cosets = reps
        .iter()
        .map(|&x| h.elements().iter().map(|&y| mul_mod(x, y, p)).collect())
        .collect();
    Ok(PrimeCosets { h, cosets, reps })
}

fn union_of(p: u64, cosets: &[Vec<u64>], mask: u64) -> ConnectionSet {
    let mut elems: Vec<u64> = cosets
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .flat_map(|(_, c)| c.iter().copied())
        .collect();
    elems.sort_unstable();
    ConnectionSet::from_sorted_unchecked(p, elems)
}

/// Exact census of degree-`d` circulants on `p` vertices.
///
/// For `d <= ENUMERATION_LIMIT` every nonempty proper coset subset is
/// visited once per rotation orbit, its degree is computed with
/// [`circulant::fix`], and one canonical witness per surviving orbit is
/// returned. Larger `d` fall back to the count of aperiodic orbits without
/// witnesses.
pub fn prime_census(p: u64, d: u64) -> Result<CensusRecord> {
    check_prime_census_args(p, d)?;
    if d > ENUMERATION_LIMIT {
        return Ok(CensusRecord {
            n: p,
            d,
            kind: CensusKind::Exact,
            value: aperiodic_orbit_count(d)?,
            witnesses: Vec::new(),
            method: METHOD_NECKLACE.to_string(),
        });
    }
    let pc = prime_cosets(p, d)?;
    let full = (1u64 << d) - 1;
    let mut witnesses = Vec::new();
    for mask in 1..full {
        let (least, stab) = min_rotation(mask, d);
        if least != mask {
            continue;
        }
        let s = union_of(p, &pc.cosets, mask);
        let f = circulant::fix(&s);
        let exact = f.elements() == pc.h.elements();
        let size = u64::from(mask.count_ones());
        if size.gcd(&d) == 1 && !exact {
            return Err(Error::Inconsistency(format!(
                "coset union of {size} cosets at (p, d) = ({p}, {d}) has |Fix| = {}",
                f.order()
            )));
        }
        if exact != (stab == 1) {
            return Err(Error::Inconsistency(format!(
                "Fix(S) disagrees with the rotation stabilizer for mask {mask:#b} at ({p}, {d})"
            )));
        }
        if exact {
            witnesses.push(canonical_under(&s, &pc.reps));
        }
    }
    witnesses.sort();
    let before = witnesses.len();
    witnesses.dedup();
    if witnesses.len() != before {
        return Err(Error::Inconsistency(format!(
            "two rotation orbits share a canonical form at ({p}, {d})"
        )));
    }
    Ok(CensusRecord {
        n: p,
        d,
        kind: CensusKind::Exact,
        value: witnesses.len() as u128,
        witnesses,
        method: METHOD_ORBITS.to_string(),
    })
}

/// Number of rotation orbits of `Z_d` on subsets with trivial stabilizer:
/// `(1/d) sum_{e | d} mu(e) 2^{d/e}`.
pub fn aperiodic_orbit_count(d: u64) -> Result<u128> {
    if d == 0 || d >= 127 {
        return Err(invalid(format!("d = {d} outside 1..=126")));
    }
    let mut sum: i128 = 0;
    for e in numtheory::divisors(d)? {
        sum += i128::from(numtheory::mobius(e)?) * (1i128 << (d / e));
    }
    if sum < 0 || sum % i128::from(d) != 0 {
        return Err(Error::Inconsistency(format!(
            "necklace sum {sum} is not a nonnegative multiple of {d}"
        )));
    }
    Ok((sum / i128::from(d)) as u128)
}

/// Orbits of the rotation group of `Z_d` on `m`-subsets, by Burnside.
pub fn burnside_orbit_count(d: u64, m: u64) -> Result<u128> {
    if d == 0 || m == 0 || m >= d {
        return Err(invalid(format!("need 1 <= m <= d-1, got d = {d}, m = {m}")));
    }
    let mut sum: u128 = 0;
    for i in 0..d {
        let g = i.gcd(&d);
        let cycle = d / g;
        if m % cycle == 0 {
            let term = numtheory::binomial(g, m / cycle)?;
            sum = sum.checked_add(term).ok_or(Error::Overflow("burnside_orbit_count"))?;
        }
    }
    if sum % u128::from(d) != 0 {
        return Err(Error::Inconsistency(format!(
            "Burnside sum {sum} is not divisible by {d}"
        )));
    }
    Ok(sum / u128::from(d))
}

/// `(2^d - 2)/d` for prime `d`.
pub fn exact_count_prime_degree(d: u64) -> Result<u128> {
    if !numtheory::is_prime(d) {
        return Err(invalid(format!("{d} is not prime")));
    }
    if d >= 128 {
        return Err(Error::Overflow("exact_count_prime_degree"));
    }
    let num = (1u128 << d) - 2;
    if num % u128::from(d) != 0 {
        return Err(Error::Inconsistency(format!("{d} does not divide 2^{d} - 2")));
    }
    Ok(num / u128::from(d))
}

/// Upper bound on the census at prime order,
/// `((2^d - 2) + (d - phi(d) - 1) * sum_{gcd(m,d)>1} C(d,m)) / d - (sigma(d) - 1 - d)`,
/// rounded down since the count is an integer.
pub fn upper_bound_prime(d: u64) -> Result<u128> {
    if d < 2 {
        return Err(invalid("d must be at least 2"));
    }
    if d >= 127 {
        return Err(Error::Overflow("upper_bound_prime"));
    }
    let fact = numtheory::factorize(d)?;
    let mut binom_sum: u128 = 0;
    for m in 1..d {
        if m.gcd(&d) > 1 {
            binom_sum = binom_sum
                .checked_add(numtheory::binomial(d, m)?)
                .ok_or(Error::Overflow("upper_bound_prime"))?;
        }
    }
    let coeff = u128::from(d - fact.euler_phi() - 1);
    let num = coeff
        .checked_mul(binom_sum)
        .and_then(|x| x.checked_add((1u128 << d) - 2))
        .ok_or(Error::Overflow("upper_bound_prime"))?;
    let degenerate = u128::from(fact.sigma() - 1 - d);
    (num / u128::from(d)).checked_sub(degenerate).ok_or_else(|| {
        Error::Inconsistency(format!("upper bound for d = {d} is negative"))
    })
}

fn check_lower_bound_args(n: u64, d: u64) -> Result<()> {
    if d < 2 {
        return Err(invalid("d must be at least 2"));
    }
    if !is_admissible(n, d)? {
        return Err(invalid(format!("2d = {} does not divide phi({n})", 2 * d)));
    }
    Ok(())
}

/// Best applicable lower bound on the number of connected degree-`d`
/// circulants of order `n`. On ties the prime-order rule is preferred, then
/// the general rule.
pub fn lower_bound(n: u64, d: u64) -> Result<(u64, LowerBoundRule)> {
    check_lower_bound_args(n, d)?;
    let fact = numtheory::factorize(d)?;
    let phi = fact.euler_phi();
    let omega = u64::from(fact.omega());
    let mut candidates = Vec::new();
    if numtheory::is_prime(n) && ((n - 1) / 2) % d == 0 {
        candidates.push((d - 1, LowerBoundRule::PrimeOrder));
    }
    if fact.is_prime_power() {
        candidates.push((phi, LowerBoundRule::PrimePower));
    } else {
        candidates.push((phi + omega, LowerBoundRule::NotPrimePower));
    }
    if fact.is_square_free() {
        candidates.push((d - omega, LowerBoundRule::SquareFree));
    }
    let mut best = candidates[0];
    for &c in &candidates[1..] {
        if c.0 > best.0 {
            best = c;
        }
    }
    Ok(best)
}

/// Connection sets realizing [`lower_bound`]: unions of cosets of an
/// inverse-symmetric subgroup `H` of order `phi(n)/d`, each verified to have
/// `Fix(S) = H` and to be connected. Sorted by valency.
pub fn witness_family(n: u64, d: u64) -> Result<Vec<ConnectionSet>> {
    let (value, rule) = lower_bound(n, d)?;
    let phi = numtheory::euler_phi(n)?;
    let h = unitgroup::inverse_symmetric_subgroup(n, phi / d)?;
    let blocks: Vec<Vec<u64>> = match rule {
        LowerBoundRule::PrimeOrder => {
            let r = unitgroup::primitive_root(n)?;
            (1..d)
                .map(|m| (0..m).map(|i| pow_mod(r, i, n)).collect())
                .collect()
        }
        LowerBoundRule::PrimePower | LowerBoundRule::NotPrimePower => {
            general_blocks(n, d, &h, rule == LowerBoundRule::NotPrimePower)?
        }
        LowerBoundRule::SquareFree => square_free_blocks(n, d, &h)?,
    };
    let mut out = Vec::with_capacity(blocks.len());
    for reps in blocks {
        let s = circulant::coset_union(n, &h, &reps)?;
        let f = circulant::fix(&s);
        if f.elements() != h.elements() {
            return Err(Error::Construction(format!(
                "witness {s} has |Fix| = {} instead of {}",
                f.order(),
                h.order()
            )));
        }
        if !circulant::is_connected(&s) {
            return Err(Error::Construction(format!("witness {s} is disconnected")));
        }
        out.push(s);
    }
    if out.len() as u64 != value {
        return Err(Error::Construction(format!(
            "built {} witnesses for a lower bound of {value}",
            out.len()
        )));
    }
    out.sort_by(|a, b| (a.len(), a.elements()).cmp(&(b.len(), b.elements())));
    Ok(out)
}

/// Coset representatives of `Z_n^*/H`, ordered by least element, with the
/// order of each coset.
fn quotient(n: u64, h: &Subgroup) -> Result<Vec<(u64, u64)>> {
    unitgroup::cosets(n, h)?
        .into_iter()
        .map(|c| Ok((c[0], unitgroup::coset_order(n, h, c[0])?)))
        .collect()
}

/// Chains `H, x_2 H, ..., x_{d} H`, cut at every `m` coprime to `d` and, when
/// `with_primes`, at every prime `q | d`. With `with_primes`, `x_2` has order
/// `p_2` and `x_3` has order `p_1`, the two least primes of `d`.
fn general_blocks(n: u64, d: u64, h: &Subgroup, with_primes: bool) -> Result<Vec<Vec<u64>>> {
    let q = quotient(n, h)?;
    let mut chain: Vec<u64> = vec![q[0].0];
    let mut rest: Vec<(u64, u64)> = q[1..].to_vec();
    let primes: Vec<u64> = numtheory::factorize(d)?.primes().collect();
    if with_primes {
        for want in [primes[1], primes[0]] {
            let pos = rest.iter().position(|&(_, o)| o == want).ok_or_else(|| {
                Error::Construction(format!("no coset of order {want} in Z_{n}^*/H"))
            })?;
            chain.push(rest.remove(pos).0);
        }
    }
    chain.extend(rest.iter().map(|&(x, _)| x));
    let cuts: Vec<u64> = (1..d)
        .filter(|&m| m.gcd(&d) == 1 || (with_primes && primes.contains(&m)))
        .collect();
    Ok(cuts.into_iter().map(|m| chain[..m as usize].to_vec()).collect())
}

/// For square-free `d` the quotient is cyclic, generated by some `g`. Starting
/// from `{H}`, adjoin all but one element of each prime order `p_i`, then
/// every element of each composite order, recording each prefix.
fn square_free_blocks(n: u64, d: u64, h: &Subgroup) -> Result<Vec<Vec<u64>>> {
    let q = quotient(n, h)?;
    let g = q
        .iter()
        .find(|&&(_, o)| o == d)
        .ok_or_else(|| Error::Construction(format!("Z_{n}^*/H is not cyclic of order {d}")))?
        .0;
    let order_of = |j: u64| d / j.gcd(&d);
    let divisors = numtheory::divisors(d)?;
    let mut order_seq: Vec<u64> = Vec::new();
    for &t in divisors.iter().filter(|&&t| numtheory::is_prime(t)) {
        let js: Vec<u64> = (1..d).filter(|&j| order_of(j) == t).collect();
        order_seq.extend(&js[..js.len() - 1]);
    }
    for &t in divisors.iter().filter(|&&t| t > 1 && !numtheory::is_prime(t)) {
        order_seq.extend((1..d).filter(|&j| order_of(j) == t));
    }
    let mut blocks = Vec::with_capacity(order_seq.len() + 1);
    let mut cur = vec![1 % n];
    blocks.push(cur.clone());
    for j in order_seq {
        cur.push(pow_mod(g, j, n));
        blocks.push(cur.clone());
    }
    Ok(blocks)
}

/// Lower-bound record for any admissible `(n, d)`, with the witness family.
pub fn lower_bound_census(n: u64, d: u64) -> Result<CensusRecord> {
    let (value, rule) = lower_bound(n, d)?;
    let witnesses = witness_family(n, d)?;
    Ok(CensusRecord {
        n,
        d,
        kind: CensusKind::LowerBound,
        value: u128::from(value),
        witnesses,
        method: format!("{METHOD_WITNESS_FAMILY}:{}", rule.tag()),
    })
}

/// `A_m = sum_{j in S_m} j^{(p-1)/d} mod p` with `S_m = ⋃_{i<m} r^i H`;
/// true iff `A_m` is nonzero mod `p`.
pub fn a_m_nonvanishing_check(p: u64, d: u64, m: u64) -> Result<bool> {
    check_prime_census_args(p, d)?;
    if m == 0 || m >= d {
        return Err(invalid(format!("need 1 <= m <= d-1, got m = {m}")));
    }
    Ok(a_m(p, d, m)? != 0)
}

fn a_m(p: u64, d: u64, m: u64) -> Result<u64> {
    let pc = prime_cosets(p, d)?;
    let e = (p - 1) / d;
    Ok(pc.cosets[..m as usize]
        .iter()
        .flatten()
        .fold(0u64, |acc, &j| (acc + pow_mod(j, e, p)) % p))
}

fn adjacency(s: &ConnectionSet) -> Vec<u32> {
    let n = s.n();
    (0..n)
        .map(|u| {
            s.elements()
                .iter()
                .fold(0u32, |acc, &x| acc | 1 << ((u + x) % n))
        })
        .collect()
}

/// Graph isomorphism of two circulants of equal order by backtracking. The
/// target is vertex-transitive, so vertex 0 may be pinned to 0.
fn circulants_isomorphic(a: &ConnectionSet, b: &ConnectionSet) -> bool {
    if a.n() != b.n() || a.len() != b.len() {
        return false;
    }
    let n = a.n() as usize;
    let adj_a = adjacency(a);
    let adj_b = adjacency(b);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[0] = 0;
    used[0] = true;

    fn extend(v: usize, n: usize, adj_a: &[u32], adj_b: &[u32], map: &mut [usize], used: &mut [bool]) -> bool {
        if v == n {
            return true;
        }
        for w in 0..n {
            if used[w] {
                continue;
            }
            let ok = (0..v).all(|u| {
                (adj_a[u] >> v & 1) == (adj_b[map[u]] >> w & 1)
            });
            if ok {
                map[v] = w;
                used[w] = true;
                if extend(v + 1, n, adj_a, adj_b, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        map[v] = usize::MAX;
        false
    }
    extend(1, n, &adj_a, &adj_b, &mut map, &mut used)
}

/// Brute-force census for `3 <= n <= NAIVE_LIMIT`: every connected symbol of
/// degree `d`, grouped first by multipliers and then by full graph
/// isomorphism.
pub fn naive_census(n: u64, d: u64) -> Result<CensusRecord> {
    if !(3..=NAIVE_LIMIT).contains(&n) {
        return Err(invalid(format!("naive census needs 3 <= n <= {NAIVE_LIMIT}")));
    }
    if d == 0 {
        return Err(invalid("d must be positive"));
    }
    let half = n / 2;
    let mut candidates = Vec::new();
    for mask in 1u64..1 << half {
        let mut elems = BTreeSet::new();
        for c in 1..=half {
            if mask >> (c - 1) & 1 == 1 {
                elems.insert(c);
                elems.insert(n - c);
            }
        }
        let s = ConnectionSet::from_sorted_unchecked(n, elems.into_iter().collect());
        if circulant::is_connected(&s) && circulant::algebraic_degree(&s) == d {
            candidates.push(s);
        }
    }
    candidates.sort_by(|a, b| (a.len(), a.elements()).cmp(&(b.len(), b.elements())));
    let mut reps: Vec<ConnectionSet> = Vec::new();
    for s in candidates {
        let mut found = false;
        for r in &reps {
            if circulant::multiplier_isomorphic(r, &s)?.is_some() || circulants_isomorphic(r, &s) {
                found = true;
                break;
            }
        }
        if !found {
            reps.push(s);
        }
    }
    Ok(CensusRecord {
        n,
        d,
        kind: CensusKind::Exact,
        value: reps.len() as u128,
        witnesses: reps,
        method: METHOD_NAIVE.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circulant::{algebraic_degree, multiplier_image, multiplier_isomorphic};

    fn cs(n: u64, e: &[u64]) -> ConnectionSet {
        ConnectionSet::new(n, e.iter().copied()).unwrap()
    }

    fn pm(n: u64, e: &[u64]) -> ConnectionSet {
        cs(n, &e.iter().flat_map(|&x| [x, n - x]).collect::<Vec<_>>())
    }

    fn assert_same_classes(found: &[ConnectionSet], expected: &[ConnectionSet]) {
        assert_eq!(found.len(), expected.len());
        for e in expected {
            let hits = found
                .iter()
                .filter(|w| multiplier_isomorphic(w, e).unwrap().is_some())
                .count();
            assert_eq!(hits, 1, "{e}");
        }
    }

    fn primes_upto(n: u64) -> impl Iterator<Item = u64> {
        (3..=n).filter(|&p| numtheory::is_prime(p))
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(5, 2).unwrap());
        assert!(is_admissible(13, 2).unwrap());
        assert!(!is_admissible(7, 4).unwrap());
        assert!(is_admissible(15, 4).unwrap());
    }

    #[test]
    fn census_examples() {
        let r = prime_census(13, 2).unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.kind, CensusKind::Exact);
        assert_same_classes(&r.witnesses, &[pm(13, &[1, 3, 4])]);

        let r = prime_census(19, 3).unwrap();
        assert_eq!(r.value, 2);
        assert_same_classes(&r.witnesses, &[pm(19, &[1, 7, 8]), pm(19, &[1, 2, 3, 5, 7, 8])]);

        let r = prime_census(11, 5).unwrap();
        assert_eq!(r.value, 6);
        let gammas = [
            pm(11, &[1]),
            pm(11, &[1, 2]),
            pm(11, &[1, 4]),
            pm(11, &[1, 2, 3]),
            pm(11, &[1, 2, 4]),
            pm(11, &[1, 2, 3, 4]),
        ];
        assert_same_classes(&r.witnesses, &gammas);

        assert_eq!(prime_census(17, 4).unwrap().value, 3);
        assert!(prime_census(13, 4).is_err());
        assert!(prime_census(15, 2).is_err());
        assert!(prime_census(13, 1).is_err());
    }

    #[test]
    fn census_witnesses_are_valid() {
        for p in primes_upto(113) {
            for d in numtheory::divisors((p - 1) / 2).unwrap().into_iter().filter(|&d| d > 1) {
                let r = prime_census(p, d).unwrap();
                if d > ENUMERATION_LIMIT {
                    assert!(r.witnesses.is_empty());
                    continue;
                }
                assert_eq!(r.value, r.witnesses.len() as u128);
                for w in &r.witnesses {
                    assert_eq!(w.n(), p);
                    assert_eq!(algebraic_degree(w), d, "{w}");
                    assert!(circulant::is_connected(w));
                    assert_eq!(&canonical_form(w).unwrap(), w);
                }
            }
        }
    }

    #[test]
    fn exact_count_for_prime_degrees() {
        for d in [2u64, 3, 5, 7] {
            let expected = exact_count_prime_degree(d).unwrap();
            for p in primes_upto(300).filter(|p| ((p - 1) / 2) % d == 0) {
                assert_eq!(prime_census(p, d).unwrap().value, expected, "(p, d) = ({p}, {d})");
            }
        }
        assert_eq!(exact_count_prime_degree(2).unwrap(), 1);
        assert_eq!(exact_count_prime_degree(3).unwrap(), 2);
        assert_eq!(exact_count_prime_degree(5).unwrap(), 6);
        assert!(exact_count_prime_degree(4).is_err());
    }

    #[test]
    fn enumeration_matches_necklace_count() {
        for p in primes_upto(400) {
            for d in numtheory::divisors((p - 1) / 2).unwrap() {
                if d < 2 || d > ENUMERATION_LIMIT {
                    continue;
                }
                assert_eq!(
                    prime_census(p, d).unwrap().value,
                    aperiodic_orbit_count(d).unwrap(),
                    "(p, d) = ({p}, {d})"
                );
            }
        }
        assert_eq!(aperiodic_orbit_count(4).unwrap(), 3);
        assert_eq!(aperiodic_orbit_count(6).unwrap(), 9);
        let big = prime_census(199, 99).unwrap();
        assert_eq!(big.method, METHOD_NECKLACE);
        assert!(big.witnesses.is_empty());
    }

    #[test]
    fn sandwich_bounds() {
        for p in primes_upto(200) {
            for d in numtheory::divisors((p - 1) / 2).unwrap().into_iter().filter(|&d| d > 1) {
                let exact = prime_census(p, d).unwrap().value;
                let (lo, _) = lower_bound(p, d).unwrap();
                let hi = upper_bound_prime(d).unwrap();
                assert!(u128::from(lo) <= exact && exact <= hi, "(p, d) = ({p}, {d}): {lo} <= {exact} <= {hi}");
            }
        }
    }

    #[test]
    fn orbit_soundness() {
        for (p, d) in [(13u64, 2u64), (19, 3), (11, 5), (17, 4), (37, 6), (41, 10), (73, 12)] {
            let r = prime_census(p, d).unwrap();
            for (i, a) in r.witnesses.iter().enumerate() {
                for b in &r.witnesses[i + 1..] {
                    assert_eq!(multiplier_isomorphic(a, b).unwrap(), None);
                }
            }
            let pc = prime_cosets(p, d).unwrap();
            for mask in 1..(1u64 << d) - 1 {
                let s = union_of(p, &pc.cosets, mask);
                if algebraic_degree(&s) != d {
                    continue;
                }
                let c = canonical_form(&s).unwrap();
                assert!(r.witnesses.contains(&c));
                assert!(multiplier_isomorphic(&c, &s).unwrap().is_some());
            }
        }
    }

    #[test]
    fn subgroup_unions_are_discarded() {
        for (p, d) in [(37u64, 6u64), (73, 12), (41, 10), (17, 4), (61, 15)] {
            let pc = prime_cosets(p, d).unwrap();
            let r = prime_census(p, d).unwrap();
            for k in numtheory::divisors(d).unwrap() {
                if k == 1 || k == d {
                    continue;
                }
                let mask = (0..d).filter(|i| i % k == 0).fold(0u64, |m, i| m | 1 << i);
                let s = union_of(p, &pc.cosets, mask);
                assert_eq!(algebraic_degree(&s), k);
                assert!(!r.witnesses.contains(&canonical_form(&s).unwrap()));
            }
        }
    }

    #[test]
    fn burnside_examples_and_brute_force() {
        assert_eq!(burnside_orbit_count(4, 2).unwrap(), 2);
        assert_eq!(burnside_orbit_count(7, 1).unwrap(), 1);
        for d in [3u64, 5, 7, 11, 13] {
            for m in 1..d {
                assert_eq!(
                    burnside_orbit_count(d, m).unwrap(),
                    numtheory::binomial(d, m).unwrap() / u128::from(d)
                );
            }
        }
        for d in 2..=14u64 {
            for m in 1..d {
                let orbits: BTreeSet<u64> = (0u64..1 << d)
                    .filter(|x| u64::from(x.count_ones()) == m)
                    .map(|x| min_rotation(x, d).0)
                    .collect();
                assert_eq!(burnside_orbit_count(d, m).unwrap(), orbits.len() as u128, "({d}, {m})");
            }
        }
        assert!(burnside_orbit_count(4, 4).is_err());
        assert!(burnside_orbit_count(4, 0).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound_prime(2).unwrap(), 1);
        assert_eq!(upper_bound_prime(3).unwrap(), 2);
        assert_eq!(upper_bound_prime(4).unwrap(), 3);
        assert_eq!(upper_bound_prime(6).unwrap(), 30);
        for d in [5u64, 7, 11, 13, 31] {
            assert_eq!(upper_bound_prime(d).unwrap(), exact_count_prime_degree(d).unwrap());
        }
        assert!(upper_bound_prime(1).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(13, 2).unwrap().0, 1);
        assert_eq!(lower_bound(11, 5).unwrap(), (4, LowerBoundRule::PrimeOrder));
        // 2*6 | phi(21) = 12
        assert_eq!(lower_bound(21, 6).unwrap().0, 4);
        assert_eq!(lower_bound(37, 18).unwrap().0, 17);
        for p in primes_upto(200).filter(|&p| p > 3) {
            assert_eq!(lower_bound(p, (p - 1) / 2).unwrap().0, (p - 3) / 2);
        }
        assert!(lower_bound(7, 4).is_err());
        assert!(lower_bound(13, 1).is_err());
    }

    #[test]
    fn witness_family_examples() {
        assert_eq!(witness_family(13, 2).unwrap(), vec![pm(13, &[1, 3, 4])]);
        let w = witness_family(19, 3).unwrap();
        assert_same_classes(&w, &prime_census(19, 3).unwrap().witnesses);
        let w = witness_family(11, 5).unwrap();
        assert_eq!(w.len(), 4);
        for pair in w.windows(2) {
            assert!(pair[0].elements().iter().all(|x| pair[1].contains(*x)));
        }
    }

    #[test]
    fn witness_families_are_valid() {
        for n in 3..=300u64 {
            let phi = numtheory::euler_phi(n).unwrap();
            for d in numtheory::divisors(phi / 2).unwrap().into_iter().filter(|&d| d > 1) {
                let (value, _) = lower_bound(n, d).unwrap();
                let w = witness_family(n, d).unwrap();
                assert_eq!(w.len() as u64, value, "(n, d) = ({n}, {d})");
                let valencies: BTreeSet<usize> = w.iter().map(|s| s.len()).collect();
                assert_eq!(valencies.len(), w.len(), "(n, d) = ({n}, {d})");
                for s in &w {
                    assert_eq!(algebraic_degree(s), d);
                    assert!(circulant::is_connected(s));
                }
            }
        }
    }

    #[test]
    fn canonical_form_examples() {
        assert_eq!(canonical_form(&pm(11, &[2, 4])).unwrap(), cs(11, &[1, 2, 9, 10]));
        let all = cs(13, &(1..13).collect::<Vec<_>>());
        assert_eq!(canonical_form(&all).unwrap(), all);
        let s = pm(19, &[1, 2, 3, 5, 7, 8]);
        for m in 1..19 {
            assert_eq!(
                canonical_form(&multiplier_image(&s, m).unwrap()).unwrap(),
                canonical_form(&s).unwrap()
            );
        }
        assert!(canonical_form(&pm(12, &[1])).is_err());
    }

    #[test]
    fn a_m_examples() {
        assert_eq!(a_m(13, 2, 1).unwrap(), 6);
        assert!(a_m_nonvanishing_check(13, 2, 1).unwrap());
        assert!(a_m_nonvanishing_check(11, 5, 2).unwrap());
        for p in primes_upto(199) {
            for d in numtheory::divisors((p - 1) / 2).unwrap().into_iter().filter(|&d| d > 1) {
                for m in 1..d {
                    assert!(a_m_nonvanishing_check(p, d, m).unwrap(), "({p}, {d}, {m})");
                }
            }
        }
        assert!(a_m_nonvanishing_check(13, 2, 2).is_err());
    }

    #[test]
    fn naive_census_agrees_at_prime_order() {
        for (p, d) in [(5u64, 2u64), (7, 3), (11, 5)] {
            let naive = naive_census(p, d).unwrap();
            let exact = prime_census(p, d).unwrap();
            assert_eq!(naive.value, exact.value);
            assert_same_classes(&naive.witnesses, &exact.witnesses);
        }
    }

    #[test]
    fn naive_census_composite() {
        for (n, d) in [(8u64, 2u64), (9, 3), (10, 2), (12, 2)] {
            let r = naive_census(n, d).unwrap();
            let (lo, _) = lower_bound(n, d).unwrap();
            assert!(r.value >= u128::from(lo), "(n, d) = ({n}, {d})");
            for w in &r.witnesses {
                assert_eq!(algebraic_degree(w), d);
            }
        }
        // C_8 (S = {1,7}) and the symbol {3,5} are multiplier-equivalent
        assert!(circulants_isomorphic(&pm(8, &[1]), &pm(8, &[3])));
        assert!(!circulants_isomorphic(&pm(8, &[1]), &pm(8, &[2])));
        assert!(naive_census(13, 2).is_err());
    }

    #[test]
    fn record_serialization() {
        let r = prime_census(13, 2).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"kind\":\"exact\""));
        assert!(json.contains("13:1,3,4,9,10,12"));
        let back: CensusRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let big = prime_census(199, 99).unwrap();
        let back: CensusRecord = serde_json::from_str(&serde_json::to_string(&big).unwrap()).unwrap();
        assert_eq!(back, big);
    }
}
