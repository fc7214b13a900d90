//! Real and p-adic solvability of `H_q : q y^2 = f(x)`.
//!
//! The curve is handled as `(q y)^2 = q f(x)`: a point over `Q_p` exists iff
//! `q f(x)` is a square in `Q_p` for some `x` in `Z_p` (the affine chart), or
//! `q f*(u)` is for some `u` in `p Z_p`, where `f*(u) = u^4 f(1/u)` (the chart
//! at infinity). Each chart is searched over residue classes `x = x0 mod p^k`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_padic_square, is_prime, is_squarefree, jacobi_u64, prime_divisors, valuation};
use crate::error::{Error, Result};
use crate::quartic::Quartic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    Affine,
    Infinity,
}

/// The set `{x in Z_p : x = x0 mod p^k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueClass {
    pub p: u64,
    pub k: u32,
    pub x0: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// Every `x = x0 mod p^k` gives a value of valuation `v` whose unit part
    /// is a square.
    SquareValue {
        chart: Chart,
        #[serde(with = "bigint_string")]
        x0: BigInt,
        k: u32,
        v: u32,
    },
    /// Hensel's lemma lifts `x0 mod p^k` to a root of the polynomial.
    HenselRoot {
        chart: Chart,
        #[serde(with = "bigint_string")]
        x0: BigInt,
        k: u32,
    },
    /// `q` is a square in `Q_p`, so the points at infinity are rational.
    PointAtInfinity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolvabilityReport {
    pub solvable: bool,
    pub witness: Option<Witness>,
    /// Deepest `k` visited across the search.
    pub depth_used: u32,
}

mod bigint_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Valuation of a nonzero integer; `None` for zero.
fn big_valuation(t: &BigInt, p: &BigInt) -> Option<u32> {
    if t.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut t = t.clone();
    loop {
        let (q, r) = t.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        t = q;
        v += 1;
    }
}

/// Taylor coefficients `c_j` with `h(x0 + t) = sum c_j t^j`.
fn taylor(h: &[BigInt], x0: &BigInt) -> Vec<BigInt> {
    let mut c = h.to_vec();
    let n = c.len();
    for j in 0..n {
        for i in (j..n - 1).rev() {
            let carry = &c[i + 1] * x0;
            c[i] += carry;
        }
    }
    c
}

/// Whether the unit `u` (not divisible by `p`) is a square in `Z_p`.
fn unit_is_square(u: &BigInt, p: u64) -> bool {
    if p == 2 {
        u.mod_floor(&BigInt::from(8)) == BigInt::one()
    } else {
        let r = u.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        jacobi_u64(r, p) == 1
    }
}

enum Outcome {
    Square { v: u32 },
    NonSquare,
    Hensel,
    Split,
}

/// On the class `x0 mod p^k` every value `h(x)` is congruent to `h(x0)` modulo
/// `p^m` with `m = min_j (v(c_j) + j k)`. If `v(h(x0))` sits far enough below
/// `m` the square class is constant on the class.
fn examine(h: &[BigInt], p: u64, pb: &BigInt, x0: &BigInt, k: u32) -> Result<Outcome> {
    let c = taylor(h, x0);
    let v = big_valuation(&c[0], pb).ok_or_else(|| Error::ZeroValue(x0.to_string()))?;
    let m = c
        .iter()
        .enumerate()
        .skip(1)
        .filter_map(|(j, cj)| big_valuation(cj, pb).map(|vj| vj + j as u32 * k))
        .min()
        .unwrap_or(u32::MAX);
    let margin = if p == 2 { 3 } else { 1 };
    if v.saturating_add(margin) <= m {
        if v % 2 == 1 {
            return Ok(Outcome::NonSquare);
        }
        let unit = &c[0] / pb.pow(v);
        return Ok(if unit_is_square(&unit, p) {
            Outcome::Square { v }
        } else {
            Outcome::NonSquare
        });
    }
    if let Some(vd) = big_valuation(&c[1], pb) {
        if v > 2 * vd {
            return Ok(Outcome::Hensel);
        }
    }
    Ok(Outcome::Split)
}

/// Depth-first search for `x` in `Z_p` with `x mod p` in `initial` and `h(x)`
/// a square in `Q_p`. `h` is given by ascending integer coefficients.
pub fn zp_square_value_exists(
    h: &[BigInt],
    p: u64,
    initial: &[u64],
    cap: u32,
) -> Result<SolvabilityReport> {
    search(h, p, initial, cap, Chart::Affine)
}

fn search(h: &[BigInt], p: u64, initial: &[u64], cap: u32, chart: Chart) -> Result<SolvabilityReport> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let pb = BigInt::from(p);
    let mut depth_used = 0;
    let mut stack: Vec<ResidueClass> = initial
        .iter()
        .rev()
        .map(|&r| ResidueClass {
            p,
            k: 1,
            x0: BigInt::from(r % p),
        })
        .collect();
    while let Some(class) = stack.pop() {
        if class.k > cap {
            return Err(Error::DepthCapExceeded { p, cap });
        }
        depth_used = depth_used.max(class.k);
        match examine(h, p, &pb, &class.x0, class.k)? {
            Outcome::Square { v } => {
                return Ok(SolvabilityReport {
                    solvable: true,
                    witness: Some(Witness::SquareValue {
                        chart,
                        x0: class.x0,
                        k: class.k,
                        v,
                    }),
                    depth_used,
                })
            }
            Outcome::Hensel => {
                return Ok(SolvabilityReport {
                    solvable: true,
                    witness: Some(Witness::HenselRoot {
                        chart,
                        x0: class.x0,
                        k: class.k,
                    }),
                    depth_used,
                })
            }
            Outcome::NonSquare => {}
            Outcome::Split => {
                let step = pb.pow(class.k);
                for j in (0..p).rev() {
                    stack.push(ResidueClass {
                        p,
                        k: class.k + 1,
                        x0: &class.x0 + &step * j,
                    });
                }
            }
        }
    }
    Ok(SolvabilityReport {
        solvable: false,
        witness: None,
        depth_used,
    })
}

fn scaled(coeffs: [i64; 5], q: i64) -> Vec<BigInt> {
    coeffs.iter().map(|&a| BigInt::from(a) * q).collect()
}

/// Refinement depth bound at `p`: `v(q^6 disc f) + 10`.
pub fn depth_cap(f: &Quartic, q: i64, p: u64) -> Result<u32> {
    Ok(6 * valuation(q, p)? + valuation(f.discriminant(), p)? + 10)
}

fn check_twist(q: i64) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument("twist must be nonzero".into()));
    }
    if !is_squarefree(q.unsigned_abs()) {
        return Err(Error::NotSquarefree(q.unsigned_abs()));
    }
    Ok(())
}

/// Full report for `H_q` over `Q_p`.
pub fn local_report(f: &Quartic, q: i64, p: u64) -> Result<SolvabilityReport> {
    check_twist(q)?;
    let cap = depth_cap(f, q, p)?;
    let all: Vec<u64> = (0..p).collect();
    let affine = search(&scaled(f.ascending(), q), p, &all, cap, Chart::Affine)?;
    if affine.solvable {
        return Ok(affine);
    }
    if is_padic_square(q, p)? {
        return Ok(SolvabilityReport {
            solvable: true,
            witness: Some(Witness::PointAtInfinity),
            depth_used: affine.depth_used,
        });
    }
    let inf = search(&scaled(f.reversed_ascending(), q), p, &[0], cap, Chart::Infinity)?;
    Ok(SolvabilityReport {
        depth_used: affine.depth_used.max(inf.depth_used),
        ..inf
    })
}

/// Whether `H_q(Q_p)` is nonempty, for square-free nonzero `q`.
pub fn is_locally_solvable(f: &Quartic, q: i64, p: u64) -> Result<bool> {
    Ok(local_report(f, q, p)?.solvable)
}

/// Always true for `q > 0`, since f is monic. Negative twists are rejected.
pub fn real_solvable(_f: &Quartic, q: i64) -> Result<bool> {
    if q <= 0 {
        return Err(Error::InvalidArgument(format!(
            "only positive twists are supported, got {q}"
        )));
    }
    Ok(true)
}

/// Primes at which solvability of `H_q` has to be checked: those dividing
/// `2 q disc(f)`. Elsewhere the curve has good reduction and a point.
pub fn relevant_primes(f: &Quartic, q: u64) -> Vec<u64> {
    let mut ps = prime_divisors(f.discriminant());
    ps.extend(prime_divisors(q as i64));
    ps.push(2);
    ps.sort_unstable();
    ps.dedup();
    ps
}

/// Per-prime reports behind [`is_els_direct`].
pub fn els_direct_reports(f: &Quartic, q: u64) -> Result<Vec<(u64, SolvabilityReport)>> {
    let qi = i64::try_from(q).map_err(|_| Error::InvalidArgument(format!("twist {q} too large")))?;
    real_solvable(f, qi)?;
    check_twist(qi)?;
    relevant_primes(f, q)
        .into_iter()
        .map(|p| Ok((p, local_report(f, qi, p)?)))
        .collect()
}

/// Everywhere local solvability decided prime by prime with the solver.
pub fn is_els_direct(f: &Quartic, q: u64) -> Result<bool> {
    let qi = i64::try_from(q).map_err(|_| Error::InvalidArgument(format!("twist {q} too large")))?;
    real_solvable(f, qi)?;
    check_twist(qi)?;
    for p in relevant_primes(f, q) {
        if !is_locally_solvable(f, qi, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
