//! Arithmetic in `F_p[x] / (f)` and the derived root counts and
//! factorization types.

use std::io::{Read, Write};

use rayon::prelude::*;

use super::{FactorizationType, Quartic};
use crate::arith::{inv_mod, is_prime, primes_up_to};
use crate::error::{Error, Result};

type Elem = [u64; 4];

/// Multiplication modulo `(p, f)`. Below 2^30 the seven-term products are
/// accumulated unreduced in u64.
struct Ring {
    p: u64,
    /// `x^4 = c0 + c1 x + c2 x^2 + c3 x^3`
    c: Elem,
    small: bool,
}

impl Ring {
    fn new(f: &Quartic, p: u64) -> Ring {
        let asc = f.ascending();
        let neg = |a: i64| (-(a as i128)).rem_euclid(p as i128) as u64;
        Ring {
            p,
            c: [neg(asc[0]), neg(asc[1]), neg(asc[2]), neg(asc[3])],
            small: p < (1 << 30),
        }
    }

    fn one(&self) -> Elem {
        [1 % self.p, 0, 0, 0]
    }

    fn x(&self) -> Elem {
        if self.p == 1 {
            [0; 4]
        } else {
            [0, 1, 0, 0]
        }
    }

    fn mul_x(&self, a: &Elem) -> Elem {
        let p = self.p as u128;
        let top = a[3] as u128;
        let mut r = [0u64; 4];
        r[0] = (top * self.c[0] as u128 % p) as u64;
        for i in 1..4 {
            r[i] = ((a[i - 1] as u128 + top * self.c[i] as u128) % p) as u64;
        }
        r
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        if self.small {
            self.mul_small(a, b)
        } else {
            self.mul_wide(a, b)
        }
    }

    fn mul_small(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.p;
        let c = &self.c;
        let mut d = [0u64; 7];
        for i in 0..4 {
            for j in 0..4 {
                d[i + j] += a[i] * b[j];
            }
        }
        // Fold x^6, x^5, x^4 in turn; every slot stays below 8 p^2 < 2^63.
        for k in (4..7).rev() {
            let top = d[k] % p;
            for i in 0..4 {
                d[k - 4 + i] += top * c[i];
            }
        }
        [d[0] % p, d[1] % p, d[2] % p, d[3] % p]
    }

    fn mul_wide(&self, a: &Elem, b: &Elem) -> Elem {
        let p = self.p as u128;
        let mut d = [0u128; 7];
        for i in 0..4 {
            for j in 0..4 {
                d[i + j] = (d[i + j] + a[i] as u128 * b[j] as u128 % p) % p;
            }
        }
        for k in (4..7).rev() {
            let top = d[k];
            for i in 0..4 {
                d[k - 4 + i] = (d[k - 4 + i] + top * self.c[i] as u128 % p) % p;
            }
        }
        [d[0] as u64, d[1] as u64, d[2] as u64, d[3] as u64]
    }

    /// `x^e`, squaring left to right so the odd steps are shifts.
    fn pow_x(&self, e: u64) -> Elem {
        let mut r = self.one();
        if e == 0 {
            return r;
        }
        for bit in (0..64 - e.leading_zeros()).rev() {
            r = self.mul(&r, &r);
            if (e >> bit) & 1 == 1 {
                r = self.mul_x(&r);
            }
        }
        r
    }

    fn pow(&self, a: &Elem, mut e: u64) -> Elem {
        let mut base = *a;
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        r
    }

    /// Degree of `gcd(g, f)` in `F_p[x]` where `g` is given reduced mod f.
    fn gcd_degree_with_f(&self, g: &Elem) -> usize {
        let p = self.p;
        let f: Vec<u64> = {
            let mut v: Vec<u64> = self.c.iter().map(|&c| (p - c) % p).collect();
            v.push(1);
            v
        };
        let g: Vec<u64> = g.to_vec();
        poly_gcd_degree(f, g, p)
    }
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Degree of the gcd of two polynomials over `F_p` (ascending coefficients).
/// The gcd of `f` with zero is `f` itself.
fn poly_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    trim(&mut a);
    trim(&mut b);
    let p128 = p as u128;
    while !b.is_empty() {
        // a <- a mod b
        let inv = inv_mod(*b.last().unwrap(), p) as u128;
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let factor = (*a.last().unwrap() as u128 * inv % p128) as u64;
            for (i, &bi) in b.iter().enumerate() {
                let sub = (factor as u128 * bi as u128 % p128) as u64;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

fn sub_x(ring: &Ring, mut a: Elem) -> Elem {
    let x = ring.x();
    a[1] = (a[1] + ring.p - x[1]) % ring.p;
    a
}

/// Number of distinct roots of f in `F_p`. `p` must be prime.
pub fn root_count_mod_p(f: &Quartic, p: u64) -> usize {
    let ring = Ring::new(f, p);
    ring.gcd_degree_with_f(&sub_x(&ring, ring.pow_x(p)))
}

/// Whether f has a root modulo the prime `p`, ramified or not.
pub fn has_root_mod_p(f: &Quartic, p: u64) -> bool {
    root_count_mod_p(f, p) > 0
}

/// Degrees of the irreducible factors of f mod `p`, for `p` prime and not
/// dividing the discriminant.
pub fn factorization_type_mod_p(f: &Quartic, p: u64) -> Result<FactorizationType> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    if f.discriminant() % p as i64 == 0 {
        return Err(Error::Ramified {
            p,
            disc: f.discriminant(),
        });
    }
    let ring = Ring::new(f, p);
    let xp = ring.pow_x(p);
    Ok(match ring.gcd_degree_with_f(&sub_x(&ring, xp)) {
        4 => FactorizationType::Split,
        2 => FactorizationType::OneOneTwo,
        1 => FactorizationType::OneThree,
        0 => {
            let xp2 = ring.pow(&xp, p);
            if ring.gcd_degree_with_f(&sub_x(&ring, xp2)) == 4 {
                FactorizationType::TwoTwo
            } else {
                FactorizationType::Four
            }
        }
        d => unreachable!("squarefree quartic with {d} roots mod {p}"),
    })
}

/// Bitset over `0..=limit` marking the primes modulo which f has a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootTable {
    coeffs: [i64; 4],
    limit: u64,
    bits: Vec<u64>,
}

const ROOT_MAGIC: &[u8; 8] = b"ROOTFLAG";

impl RootTable {
    /// Tests every prime up to `limit`. Work is split into fixed chunks and
    /// reassembled in order, so the table does not depend on thread count.
    pub fn build(f: &Quartic, limit: u64) -> RootTable {
        let primes = primes_up_to(limit);
        let flags: Vec<bool> = primes
            .par_chunks(4096)
            .flat_map_iter(|chunk| chunk.iter().map(|&p| has_root_mod_p(f, p)).collect::<Vec<_>>())
            .collect();
        let mut bits = vec![0u64; (limit as usize + 64) / 64];
        for (&p, _) in primes.iter().zip(&flags).filter(|(_, &b)| b) {
            bits[(p / 64) as usize] |= 1 << (p % 64);
        }
        RootTable {
            coeffs: f.coefficients(),
            limit,
            bits,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn coefficients(&self) -> [i64; 4] {
        self.coeffs
    }

    /// `None` beyond the table limit.
    pub fn get(&self, p: u64) -> Option<bool> {
        (p <= self.limit).then(|| self.bits[(p / 64) as usize] >> (p % 64) & 1 == 1)
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(ROOT_MAGIC)?;
        w.write_all(&self.limit.to_le_bytes())?;
        for c in self.coeffs {
            w.write_all(&c.to_le_bytes())?;
        }
        for word in &self.bits {
            w.write_all(&word.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<RootTable> {
        let mut buf = Vec::new();
        r.read_to_end(&mut buf)?;
        if buf.len() < 48 || &buf[..8] != ROOT_MAGIC {
            return Err(Error::Format("missing root table header".into()));
        }
        let word = |i: usize| u64::from_le_bytes(buf[i..i + 8].try_into().unwrap());
        let limit = word(8);
        let coeffs = [0, 1, 2, 3].map(|k| word(16 + 8 * k) as i64);
        let nwords = usize::try_from(limit)
            .ok()
            .and_then(|l| l.checked_add(64))
            .map(|l| l / 64)
            .ok_or_else(|| Error::Format("root table limit too large".into()))?;
        if buf.len() != 48 + 8 * nwords {
            return Err(Error::Format(format!(
                "root table body has {} bytes, expected {}",
                buf.len() - 48,
                8 * nwords
            )));
        }
        let bits = (0..nwords).map(|k| word(48 + 8 * k)).collect();
        Ok(RootTable {
            coeffs,
            limit,
            bits,
        })
    }
}
