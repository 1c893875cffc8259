//! Exact arithmetic in `Z[zeta_n]`.
//!
//! Elements are stored in the power basis `1, zeta, ..., zeta^{phi(n)-1}`
//! after reduction modulo the cyclotomic polynomial `Phi_n`, which makes
//! equality of algebraic numbers equality of coefficient vectors. All
//! coefficient arithmetic is checked; overflow is reported as
//! [`Error::Overflow`].

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::circulant::ConnectionSet;
use crate::error::{invalid, Error, Result};
use crate::numtheory::{self, mul_mod};
use crate::unitgroup;

/// Integer polynomial, lowest degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPolynomial {
    coeffs: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i64>) -> IntPolynomial {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> IntPolynomial {
        let mut c = vec![0; n + 1];
        c[0] = -1;
        c[n] += 1;
        IntPolynomial::new(c)
    }

    pub fn mul(&self, other: &IntPolynomial) -> Result<IntPolynomial> {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(IntPolynomial::new(vec![]));
        }
        let mut out = vec![0i64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = a
                    .checked_mul(b)
                    .and_then(|p| out[i + j].checked_add(p))
                    .ok_or(Error::Overflow("polynomial product"))?;
            }
        }
        Ok(IntPolynomial::new(out))
    }

    /// Quotient by a monic divisor; fails unless the division is exact.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = divisor
            .degree()
            .ok_or_else(|| invalid("division by the zero polynomial"))?;
        if divisor.coeffs[dd] != 1 {
            return Err(invalid("divisor must be monic"));
        }
        let Some(nd) = self.degree() else {
            return Ok(IntPolynomial::new(vec![]));
        };
        if nd < dd {
            return Err(Error::Inconsistency("inexact polynomial division".into()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0i64; nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd];
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                rem[k + i] = b
                    .checked_mul(c)
                    .and_then(|p| rem[k + i].checked_sub(p))
                    .ok_or(Error::Overflow("polynomial division"))?;
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return Err(Error::Inconsistency("inexact polynomial division".into()));
        }
        Ok(IntPolynomial::new(quot))
    }
}

/// `Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic_polynomial(n: u64) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let divs = numtheory::divisors(n)?;
    let mut known: BTreeMap<u64, IntPolynomial> = BTreeMap::new();
    for &d in &divs {
        let mut p = IntPolynomial::x_pow_minus_one(d as usize);
        for (&e, phi_e) in &known {
            if d % e == 0 {
                p = p.div_exact(phi_e)?;
            }
        }
        known.insert(d, p);
    }
    Ok(known.remove(&n).expect("n divides itself"))
}

/// An element of `Z[zeta_n]`: exactly `phi(n)` power-basis coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicInt {
    n: u64,
    coeffs: Vec<i64>,
}

impl CyclotomicInt {
    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// The integer value when this element lies in `Z`.
    pub fn as_rational_integer(&self) -> Option<i64> {
        match self.coeffs.split_first() {
            Some((&c, rest)) if rest.iter().all(|&x| x == 0) => Some(c),
            _ => None,
        }
    }
}

pub fn is_rational_integer(x: &CyclotomicInt) -> Option<i64> {
    x.as_rational_integer()
}

/// `Z[zeta_n]` together with the data needed to reduce modulo `Phi_n`.
#[derive(Debug, Clone)]
pub struct CyclotomicRing {
    n: u64,
    phi: usize,
    modulus: IntPolynomial,
    // nonzero non-leading terms (power, coefficient) of Phi_n
    tail: Vec<(usize, i64)>,
    units: Vec<u64>,
    divisors: Vec<u64>,
}

impl CyclotomicRing {
    pub fn new(n: u64) -> Result<CyclotomicRing> {
        let modulus = cyclotomic_polynomial(n)?;
        let phi = modulus.degree().expect("Phi_n is nonzero");
        let tail = modulus.coeffs()[..phi]
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| (i, c))
            .collect();
        Ok(CyclotomicRing {
            n,
            phi,
            modulus,
            tail,
            units: unitgroup::units(n)?,
            divisors: numtheory::divisors(n)?,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &IntPolynomial {
        &self.modulus
    }

    /// Reduces an unreduced coefficient vector (any length) modulo `Phi_n`.
    pub fn reduce(&self, mut buf: Vec<i64>) -> Result<CyclotomicInt> {
        self.reduce_in_place(&mut buf)?;
        buf.resize(self.phi, 0);
        Ok(CyclotomicInt {
            n: self.n,
            coeffs: buf,
        })
    }

    fn reduce_in_place(&self, buf: &mut Vec<i64>) -> Result<()> {
        for e in (self.phi..buf.len()).rev() {
            let c = buf[e];
            if c == 0 {
                continue;
            }
            buf[e] = 0;
            let base = e - self.phi;
            for &(i, a) in &self.tail {
                buf[base + i] = c
                    .checked_mul(a)
                    .and_then(|p| buf[base + i].checked_sub(p))
                    .ok_or(Error::Overflow("reduction modulo Phi_n"))?;
            }
        }
        buf.truncate(self.phi);
        Ok(())
    }

    pub fn from_integer(&self, c: i64) -> CyclotomicInt {
        let mut coeffs = vec![0; self.phi];
        coeffs[0] = c;
        CyclotomicInt { n: self.n, coeffs }
    }

    pub fn zero(&self) -> CyclotomicInt {
        self.from_integer(0)
    }

    pub fn one(&self) -> CyclotomicInt {
        self.from_integer(1)
    }

    /// `zeta_n^(e mod n)`.
    pub fn zeta_power(&self, e: u64) -> CyclotomicInt {
        let e = (e % self.n) as usize;
        let mut buf = vec![0i64; e.max(self.phi - 1) + 1];
        buf[e] = 1;
        self.reduce(buf).expect("single monomial reduction stays small")
    }

    fn check(&self, x: &CyclotomicInt) -> Result<()> {
        if x.n != self.n {
            return Err(Error::ConductorMismatch {
                left: self.n,
                right: x.n,
            });
        }
        Ok(())
    }

    fn zip_with(
        &self,
        x: &CyclotomicInt,
        y: &CyclotomicInt,
        op: fn(i64, i64) -> Option<i64>,
    ) -> Result<CyclotomicInt> {
        self.check(x)?;
        self.check(y)?;
        let coeffs = x
            .coeffs
            .iter()
            .zip(&y.coeffs)
            .map(|(&a, &b)| op(a, b).ok_or(Error::Overflow("cyclotomic addition")))
            .collect::<Result<_>>()?;
        Ok(CyclotomicInt { n: self.n, coeffs })
    }

    pub fn add(&self, x: &CyclotomicInt, y: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.zip_with(x, y, i64::checked_add)
    }

    pub fn sub(&self, x: &CyclotomicInt, y: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.zip_with(x, y, i64::checked_sub)
    }

    pub fn mul(&self, x: &CyclotomicInt, y: &CyclotomicInt) -> Result<CyclotomicInt> {
        self.check(x)?;
        self.check(y)?;
        let mut buf = vec![0i64; 2 * self.phi - 1];
        for (i, &a) in x.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.coeffs.iter().enumerate() {
                buf[i + j] = a
                    .checked_mul(b)
                    .and_then(|p| buf[i + j].checked_add(p))
                    .ok_or(Error::Overflow("cyclotomic product"))?;
            }
        }
        self.reduce(buf)
    }

    /// `sigma_k(x)` where `sigma_k(zeta) = zeta^k`: every power `zeta^e` of
    /// the representation is sent to `zeta^{ke mod n}` and the result is
    /// reduced again.
    pub fn galois_apply(&self, k: u64, x: &CyclotomicInt) -> Result<CyclotomicInt> {
        if k.gcd(&self.n) != 1 && self.n != 1 {
            return Err(Error::NotAUnit { a: k, n: self.n });
        }
        let mut buf = Vec::new();
        self.galois_apply_into(k, x, &mut buf)?;
        Ok(CyclotomicInt {
            n: self.n,
            coeffs: buf,
        })
    }

    fn galois_apply_into(&self, k: u64, x: &CyclotomicInt, buf: &mut Vec<i64>) -> Result<()> {
        self.check(x)?;
        buf.clear();
        buf.resize(self.n as usize, 0);
        let k = k % self.n;
        let mut e = 0u64;
        for &c in &x.coeffs {
            let slot = &mut buf[e as usize];
            *slot = slot
                .checked_add(c)
                .ok_or(Error::Overflow("galois action"))?;
            e += k;
            if e >= self.n {
                e -= self.n;
            }
        }
        self.reduce_in_place(buf)
    }

    /// `lambda_j = sum_{s in S} zeta^{js}`.
    pub fn eigenvalue(&self, s: &ConnectionSet, j: u64) -> Result<CyclotomicInt> {
        if s.n() != self.n {
            return Err(Error::ConductorMismatch {
                left: self.n,
                right: s.n(),
            });
        }
        let n = self.n;
        let mut buf = vec![0i64; n as usize];
        for &x in s.elements() {
            buf[mul_mod(j % n, x, n) as usize] += 1;
        }
        self.reduce(buf)
    }

}

pub fn zeta_power(n: u64, e: u64) -> Result<CyclotomicInt> {
    Ok(CyclotomicRing::new(n)?.zeta_power(e))
}

pub fn eigenvalue(s: &ConnectionSet, j: u64) -> Result<CyclotomicInt> {
    if j >= s.n() {
        return Err(invalid(format!("eigenvalue index {j} out of range for n = {}", s.n())));
    }
    CyclotomicRing::new(s.n())?.eigenvalue(s, j)
}

pub fn galois_apply(k: u64, x: &CyclotomicInt) -> Result<CyclotomicInt> {
    CyclotomicRing::new(x.n)?.galois_apply(k, x)
}

/// Units `k` whose automorphism `sigma_k` fixes the whole spectrum of
/// `Cay(Z_n, S)`.
///
/// Only the eigenvalues `lambda_g` for `g | n` are tested: any `j` is `u*g`
/// with `g = gcd(j, n)` and `u` a unit, so `lambda_j = sigma_u(lambda_g)`,
/// and the Galois group is abelian.
pub fn spectrum_fixing_units(ring: &CyclotomicRing, s: &ConnectionSet) -> Result<Vec<u64>> {
    let mut eigenvalues: Vec<Option<CyclotomicInt>> = vec![None; ring.divisors.len()];
    let mut scratch = Vec::with_capacity(ring.n as usize);
    let mut out = Vec::new();
    'units: for &k in &ring.units {
        for (slot, &g) in eigenvalues.iter_mut().zip(&ring.divisors) {
            let value = match slot {
                Some(v) => v,
                None => slot.insert(ring.eigenvalue(s, g % ring.n)?),
            };
            ring.galois_apply_into(k, value, &mut scratch)?;
            if scratch[..] != value.coeffs[..] {
                continue 'units;
            }
        }
        out.push(k);
    }
    Ok(out)
}

/// Degree of the splitting field of `Cay(Z_n, S)` computed from the exact
/// eigenvalues alone: `phi(n)` divided by the number of Galois
/// automorphisms fixing every eigenvalue.
pub fn splitting_degree_oracle(s: &ConnectionSet) -> Result<u64> {
    let ring = CyclotomicRing::new(s.n())?;
    splitting_degree_with(&ring, s)
}

/// [`splitting_degree_oracle`] with a caller-provided ring, for sweeps over
/// many symbols with the same modulus.
pub fn splitting_degree_with(ring: &CyclotomicRing, s: &ConnectionSet) -> Result<u64> {
    let fixed = spectrum_fixing_units(ring, s)?.len() as u64;
    Ok(ring.degree() as u64 / fixed)
}
