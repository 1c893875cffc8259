//! The multiplicative group `Z_n^*`.
//!
//! Residues are kept in `[0, n)`; for `n = 1` the only unit is `0`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numtheory::{self, mul_mod, pow_mod};

/// One cyclic factor of the decomposition of `Z_n^*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclicFactor {
    pub generator: u64,
    pub order: u64,
}

/// `Z_n^*` as a direct product of cyclic groups, one or two per prime power
/// of `n`, glued by the Chinese remainder theorem. Trivial factors are omitted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnitGroup {
    n: u64,
    factors: Vec<CyclicFactor>,
}

impl UnitGroup {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[CyclicFactor] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().map(|f| f.order).product()
    }

    /// The element `prod g_i^{e_i}`.
    pub fn element(&self, exponents: &[u64]) -> u64 {
        self.factors
            .iter()
            .zip(exponents)
            .fold(1 % self.n, |acc, (f, &e)| {
                mul_mod(acc, pow_mod(f.generator, e, self.n), self.n)
            })
    }
}

/// A subgroup of `Z_n^*`, stored as its sorted element list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    n: u64,
    elements: Vec<u64>,
}

impl Subgroup {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.n)).is_ok()
    }

    /// Whether `-1` is an element, i.e. `H = -H` as a subset of `Z_n`.
    pub fn is_inverse_symmetric(&self) -> bool {
        self.elements.iter().all(|&x| self.contains(self.n - x))
    }

    /// Closure of `generators` under multiplication.
    pub fn generated_by(n: u64, generators: &[u64]) -> Result<Subgroup> {
        let one = 1 % n;
        let mut seen = BTreeSet::from([one]);
        let mut frontier = vec![one];
        for &g in generators {
            check_unit(n, g)?;
        }
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let y = mul_mod(x, g, n);
                if seen.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Ok(Subgroup {
            n,
            elements: seen.into_iter().collect(),
        })
    }

    /// Wraps a residue set already known to be a subgroup.
    pub(crate) fn from_sorted_unchecked(n: u64, elements: Vec<u64>) -> Subgroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { n, elements }
    }

    /// Full unit group as a subgroup.
    pub fn whole(n: u64) -> Result<Subgroup> {
        Ok(Subgroup {
            n,
            elements: units(n)?,
        })
    }
}

fn check_unit(n: u64, a: u64) -> Result<()> {
    if n == 0 {
        return Err(invalid("modulus must be positive"));
    }
    if a.gcd(&n) != 1 && n != 1 {
        return Err(Error::NotAUnit { a, n });
    }
    Ok(())
}

/// Ascending list of the units modulo `n`.
pub fn units(n: u64) -> Result<Vec<u64>> {
    if n == 0 {
        return Err(invalid("modulus must be positive"));
    }
    if n == 1 {
        return Ok(vec![0]);
    }
    Ok((1..n).filter(|a| a.gcd(&n) == 1).collect())
}

pub fn unit_group(n: u64) -> Result<UnitGroup> {
    let fact = numtheory::factorize(n)?;
    let mut factors = Vec::new();
    for &(p, e) in fact.factors() {
        let q = p.pow(e);
        let cofactor = n / q;
        // (local generator mod q, order)
        let local: Vec<(u64, u64)> = if p == 2 {
            match e {
                1 => vec![],
                2 => vec![(3, 2)],
                _ => vec![(q - 1, 2), (5, q / 4)],
            }
        } else {
            let phi_q = (p - 1) * p.pow(e - 1);
            let g = (2..q)
                .find(|&g| g % p != 0 && order_with_phi(q, g, phi_q) == phi_q)
                .expect("odd prime powers have primitive roots");
            vec![(g, phi_q)]
        };
        for (g, order) in local {
            factors.push(CyclicFactor {
                generator: crt_lift(g, q, cofactor),
                order,
            });
        }
    }
    Ok(UnitGroup { n, factors })
}

// The residue mod q*cofactor congruent to g mod q and to 1 mod cofactor.
fn crt_lift(g: u64, q: u64, cofactor: u64) -> u64 {
    if cofactor == 1 {
        return g;
    }
    let n = q * cofactor;
    // cofactor * inv(cofactor mod q) mod q
    let inv = mod_inverse(cofactor % q, q).expect("coprime moduli");
    let e_q = mul_mod(cofactor, inv, n);
    let e_c = (1 + n - e_q) % n;
    (mul_mod(g, e_q, n) + e_c) % n
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(m as i128) as u64)
}

fn order_with_phi(n: u64, a: u64, phi: u64) -> u64 {
    let mut t = phi;
    for p in numtheory::factorize(phi)
        .expect("phi is positive")
        .primes()
        .collect::<Vec<_>>()
    {
        while t % p == 0 && pow_mod(a, t / p, n) == 1 % n {
            t /= p;
        }
    }
    t
}

pub fn element_order(n: u64, a: u64) -> Result<u64> {
    check_unit(n, a)?;
    if n <= 2 {
        return Ok(1);
    }
    Ok(order_with_phi(n, a, numtheory::euler_phi(n)?))
}

/// Smallest primitive root of an odd prime.
pub fn primitive_root(p: u64) -> Result<u64> {
    if p == 2 || !numtheory::is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    Ok((2..p)
        .find(|&g| order_with_phi(p, g, p - 1) == p - 1)
        .expect("primes have primitive roots"))
}

// Generators (with orders) of the product subgroup of order `l`. For each
// prime q | l the q-part is filled greedily from the first factor onwards, so
// earlier factors receive the largest possible share.
fn product_subgroup_generators(group: &UnitGroup, l: u64) -> Result<Vec<CyclicFactor>> {
    let phi = group.order();
    if l == 0 || phi % l != 0 {
        return Err(invalid(format!(
            "{l} does not divide phi({}) = {phi}",
            group.n
        )));
    }
    let mut shares = vec![1u64; group.factors.len()];
    if l > 1 {
        for &(q, e) in numtheory::factorize(l)?.factors() {
            let mut remaining = e;
            for (i, f) in group.factors.iter().enumerate() {
                if remaining == 0 {
                    break;
                }
                let mut avail = 0;
                let mut o = f.order;
                while o % q == 0 {
                    o /= q;
                    avail += 1;
                }
                let take = avail.min(remaining);
                shares[i] *= q.pow(take);
                remaining -= take;
            }
            if remaining > 0 {
                return Err(Error::Inconsistency(format!(
                    "could not place the {q}-part of {l} in Z_{}^*",
                    group.n
                )));
            }
        }
    }
    Ok(group
        .factors
        .iter()
        .zip(&shares)
        .filter(|(_, &s)| s > 1)
        .map(|(f, &s)| CyclicFactor {
            generator: pow_mod(f.generator, f.order / s, group.n),
            order: s,
        })
        .collect())
}

/// A subgroup of order `l`: the product of the cyclic subgroups of the
/// factors of [`unit_group`], with prime-power parts assigned to the earliest
/// factors that can hold them.
pub fn subgroup_of_order(n: u64, l: u64) -> Result<Subgroup> {
    let group = unit_group(n)?;
    let gens = product_subgroup_generators(&group, l)?;
    let h = Subgroup::generated_by(n, &gens.iter().map(|f| f.generator).collect::<Vec<_>>())?;
    if h.order() != l {
        return Err(Error::Inconsistency(format!(
            "subgroup of Z_{n}^* has order {} instead of {l}",
            h.order()
        )));
    }
    Ok(h)
}

/// A subgroup `T` of order `l` with `T = -T`.
///
/// Takes [`subgroup_of_order`]; if it misses `-1`, halves it along an even
/// cyclic factor to `K` and returns `K ∪ -K`.
pub fn inverse_symmetric_subgroup(n: u64, l: u64) -> Result<Subgroup> {
    if n < 3 {
        return Err(invalid("inverse-symmetric subgroups need n >= 3"));
    }
    if l % 2 != 0 {
        return Err(invalid(format!("order {l} is odd")));
    }
    let group = unit_group(n)?;
    let gens = product_subgroup_generators(&group, l)?;
    let gen_residues: Vec<u64> = gens.iter().map(|f| f.generator).collect();
    let h = Subgroup::generated_by(n, &gen_residues)?;
    if h.contains(n - 1) {
        return Ok(h);
    }
    let idx = gens
        .iter()
        .position(|f| f.order % 2 == 0)
        .ok_or_else(|| Error::Construction(format!("subgroup of order {l} has no even factor")))?;
    let mut k_gens = gen_residues.clone();
    k_gens[idx] = mul_mod(k_gens[idx], k_gens[idx], n);
    let k = Subgroup::generated_by(n, &k_gens)?;
    if k.elements.iter().any(|&x| k.contains(n - x)) {
        return Err(Error::Construction(format!(
            "index-2 subgroup K of order {} in Z_{n}^* meets -K",
            k.order()
        )));
    }
    let mut t: Vec<u64> = k.elements.iter().flat_map(|&x| [x, n - x]).collect();
    t.sort_unstable();
    let t = Subgroup { n, elements: t };
    if t.order() != l || !is_subgroup(n, &t.elements)? {
        return Err(Error::Construction(format!(
            "K ∪ -K is not a subgroup of order {l} in Z_{n}^*"
        )));
    }
    Ok(t)
}

/// The unique subgroup of order `m` of `Z_p^*`, `{x : x^m = 1}`.
pub fn unique_subgroup_of_prime_modulus(p: u64, m: u64) -> Result<Subgroup> {
    if !numtheory::is_prime(p) {
        return Err(invalid(format!("{p} is not prime")));
    }
    if m == 0 || (p - 1) % m != 0 {
        return Err(invalid(format!("{m} does not divide {}", p - 1)));
    }
    if p == 2 {
        return Ok(Subgroup { n: 2, elements: vec![1] });
    }
    let r = primitive_root(p)?;
    Subgroup::generated_by(p, &[pow_mod(r, (p - 1) / m, p)])
}

/// Coset partition of `Z_n^*` by `h`, ordered by least element; the first
/// block is `h`.
pub fn cosets(n: u64, h: &Subgroup) -> Result<Vec<Vec<u64>>> {
    if h.n != n || !is_subgroup(n, &h.elements)? {
        return Err(invalid(format!("not a subgroup of Z_{n}^*")));
    }
    let all = units(n)?;
    let mut covered = BTreeSet::new();
    let mut out = Vec::new();
    for x in all {
        if covered.contains(&x) {
            continue;
        }
        let mut coset: Vec<u64> = h.elements.iter().map(|&y| mul_mod(x, y, n)).collect();
        coset.sort_unstable();
        covered.extend(coset.iter().copied());
        out.push(coset);
    }
    Ok(out)
}

/// Whether a nonempty residue set is closed under multiplication mod `n`.
pub fn is_subgroup(n: u64, set: &[u64]) -> Result<bool> {
    for &x in set {
        check_unit(n, x)?;
    }
    if set.is_empty() {
        return Ok(false);
    }
    let members: BTreeSet<u64> = set.iter().map(|&x| x % n).collect();
    Ok(members
        .iter()
        .all(|&a| members.iter().all(|&b| members.contains(&mul_mod(a, b, n)))))
}

/// Order of the coset `xH` in `Z_n^* / H`.
pub fn coset_order(n: u64, h: &Subgroup, x: u64) -> Result<u64> {
    check_unit(n, x)?;
    let mut y = x % n;
    let mut t = 1;
    while !h.contains(y) {
        y = mul_mod(y, x, n);
        t += 1;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_order(n: u64, a: u64) -> u64 {
        let mut x = a % n;
        let mut t = 1;
        while x != 1 % n {
            x = x * a % n;
            t += 1;
        }
        t
    }

    #[test]
    fn unit_group_examples() {
        let orders = |n| {
            let mut o: Vec<u64> = unit_group(n).unwrap().factors().iter().map(|f| f.order).collect();
            o.sort_unstable();
            o
        };
        assert_eq!(orders(8), vec![2, 2]);
        assert_eq!(orders(13), vec![12]);
        assert_eq!(orders(15), vec![2, 4]);
        assert_eq!(orders(1), Vec::<u64>::new());
        assert_eq!(orders(2), Vec::<u64>::new());
        // brute force for 15: element orders of the 8 units are {1,2,2,2,4,4,4,4}
        let mut brute: Vec<u64> = units(15).unwrap().into_iter().map(|a| brute_order(15, a)).collect();
        brute.sort_unstable();
        assert_eq!(brute, vec![1, 2, 2, 2, 4, 4, 4, 4]);
    }

    #[test]
    fn generators_have_stated_orders_and_span_uniquely() {
        for n in 1..=500u64 {
            let g = unit_group(n).unwrap();
            assert_eq!(g.order(), numtheory::euler_phi(n).unwrap(), "n = {n}");
            for f in g.factors() {
                assert_eq!(brute_order(n, f.generator), f.order, "n = {n}");
            }
            let mut produced = Vec::new();
            let mut exps = vec![0u64; g.factors().len()];
            loop {
                produced.push(g.element(&exps));
                let mut i = 0;
                while i < exps.len() {
                    exps[i] += 1;
                    if exps[i] < g.factors()[i].order {
                        break;
                    }
                    exps[i] = 0;
                    i += 1;
                }
                if i == exps.len() {
                    break;
                }
            }
            produced.sort_unstable();
            assert_eq!(produced, units(n).unwrap(), "n = {n}");
        }
    }

    #[test]
    fn element_order_examples() {
        assert_eq!(element_order(13, 1).unwrap(), 1);
        assert_eq!(element_order(13, 2).unwrap(), 12);
        assert_eq!(element_order(8, 7).unwrap(), 2);
        assert!(matches!(element_order(12, 4), Err(Error::NotAUnit { .. })));
        for n in 3..200u64 {
            for a in units(n).unwrap() {
                assert_eq!(element_order(n, a).unwrap(), brute_order(n, a));
            }
        }
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(11).unwrap(), 2);
        assert_eq!(primitive_root(19).unwrap(), 2);
        assert_eq!(primitive_root(13).unwrap(), 2);
        // orders mod 7: 2 -> 3, 3 -> 6
        assert_eq!(brute_order(7, 2), 3);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert!(primitive_root(2).is_err());
        assert!(primitive_root(15).is_err());
    }

    #[test]
    fn subgroup_of_order_examples() {
        assert_eq!(subgroup_of_order(13, 6).unwrap().elements(), &[1, 3, 4, 9, 10, 12]);
        assert!(is_subgroup(13, &[1, 3, 4, 9, 10, 12]).unwrap());
        assert_eq!(subgroup_of_order(20, 1).unwrap().elements(), &[1]);
        assert_eq!(subgroup_of_order(20, 8).unwrap().elements(), units(20).unwrap().as_slice());
        assert!(subgroup_of_order(13, 5).is_err());
        for n in 1..=200u64 {
            let phi = numtheory::euler_phi(n).unwrap();
            for l in numtheory::divisors(phi).unwrap() {
                let h = subgroup_of_order(n, l).unwrap();
                assert_eq!(h.order(), l);
                assert!(is_subgroup(n, h.elements()).unwrap());
            }
        }
    }

    #[test]
    fn inverse_symmetric_examples() {
        assert_eq!(
            inverse_symmetric_subgroup(13, 6).unwrap().elements(),
            &[1, 3, 4, 9, 10, 12]
        );
        assert_eq!(
            inverse_symmetric_subgroup(19, 6).unwrap().elements(),
            &[1, 7, 8, 11, 12, 18]
        );
        assert_eq!(inverse_symmetric_subgroup(15, 2).unwrap().elements(), &[1, 14]);
        assert_eq!(inverse_symmetric_subgroup(100, 2).unwrap().elements(), &[1, 99]);
        assert!(inverse_symmetric_subgroup(13, 3).is_err());
        assert!(inverse_symmetric_subgroup(13, 8).is_err());
        assert!(inverse_symmetric_subgroup(2, 2).is_err());
    }

    #[test]
    fn inverse_symmetric_subgroups_exist_for_all_even_orders() {
        for n in 3..=200u64 {
            let phi = numtheory::euler_phi(n).unwrap();
            for l in numtheory::divisors(phi).unwrap().into_iter().filter(|l| l % 2 == 0) {
                let t = inverse_symmetric_subgroup(n, l).unwrap();
                assert_eq!(t.order(), l, "n = {n}, l = {l}");
                assert!(t.is_inverse_symmetric(), "n = {n}, l = {l}");
                assert!(is_subgroup(n, t.elements()).unwrap(), "n = {n}, l = {l}");
            }
        }
    }

    #[test]
    fn unique_subgroup_matches_root_exhaustion() {
        assert_eq!(unique_subgroup_of_prime_modulus(13, 6).unwrap().elements(), &[1, 3, 4, 9, 10, 12]);
        assert_eq!(unique_subgroup_of_prime_modulus(17, 1).unwrap().elements(), &[1]);
        assert_eq!(unique_subgroup_of_prime_modulus(11, 2).unwrap().elements(), &[1, 10]);
        assert!(unique_subgroup_of_prime_modulus(11, 3).is_err());
        for p in (2..300u64).filter(|&p| numtheory::is_prime(p)) {
            for m in numtheory::divisors(p - 1).unwrap() {
                let expected: Vec<u64> = (1..p).filter(|&x| pow_mod(x, m, p) == 1).collect();
                assert_eq!(unique_subgroup_of_prime_modulus(p, m).unwrap().elements(), expected.as_slice());
            }
        }
    }

    #[test]
    fn coset_examples() {
        let h19 = Subgroup::from_sorted_unchecked(19, vec![1, 7, 8, 11, 12, 18]);
        let c = cosets(19, &h19).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c[0], h19.elements());
        let h11 = Subgroup::from_sorted_unchecked(11, vec![1, 10]);
        assert_eq!(cosets(11, &h11).unwrap().len(), 5);
        assert_eq!(cosets(9, &Subgroup::whole(9).unwrap()).unwrap().len(), 1);
        let bogus = Subgroup::from_sorted_unchecked(13, vec![1, 2]);
        assert!(cosets(13, &bogus).is_err());
    }

    #[test]
    fn cosets_partition_the_unit_group() {
        for n in 1..=120u64 {
            let phi = numtheory::euler_phi(n).unwrap();
            for l in numtheory::divisors(phi).unwrap() {
                let h = subgroup_of_order(n, l).unwrap();
                let blocks = cosets(n, &h).unwrap();
                assert_eq!(blocks.len() as u64, phi / l);
                let mut all: Vec<u64> = blocks.concat();
                all.sort_unstable();
                assert_eq!(all, units(n).unwrap());
            }
        }
    }

    #[test]
    fn is_subgroup_examples() {
        assert!(is_subgroup(13, &[1, 3, 9]).unwrap());
        assert!(!is_subgroup(13, &[1, 2]).unwrap());
        assert!(is_subgroup(13, &[1]).unwrap());
        assert!(!is_subgroup(13, &[]).unwrap());
        assert!(matches!(is_subgroup(12, &[1, 2]), Err(Error::NotAUnit { .. })));
    }

    #[test]
    fn coset_order_in_quotient() {
        let h = unique_subgroup_of_prime_modulus(13, 2).unwrap();
        assert_eq!(coset_order(13, &h, 2).unwrap(), 6);
        assert_eq!(coset_order(13, &h, 12).unwrap(), 1);
    }
}
