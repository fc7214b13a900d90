//! Local Euler factors at unramified primes, and the per-cycle-type check of
//! the relations between `g(s)` and Dedekind zeta functions of the quartic
//! field `K`, its Galois closure `L`, and (for S4) the degree-8 field fixed by
//! a 3-cycle.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quartic::{
    coset_orbit_type, frobenius_order_type, group_elements, FactorizationType, GaloisType,
};

/// `prod_a (1 - t^a)^{e_a}` in `t = p^{-s}`, with no zero exponents stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LocalFactor {
    factors: BTreeMap<u32, i64>,
}

impl LocalFactor {
    pub fn one() -> Self {
        Self::default()
    }

    /// `(1 - t^a)^e`
    pub fn power_of(a: u32, e: i64) -> Self {
        let mut f = Self::one();
        f.add_exponent(a, e);
        f
    }

    /// `(1 + t^a)^e = (1 - t^{2a})^e (1 - t^a)^{-e}`
    pub fn one_plus(a: u32, e: i64) -> Self {
        let mut f = Self::power_of(2 * a, e);
        f.add_exponent(a, -e);
        f
    }

    fn add_exponent(&mut self, a: u32, e: i64) {
        assert!(a >= 1, "factor degree must be positive");
        let slot = self.factors.entry(a).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&a);
        }
    }

    pub fn exponent(&self, a: u32) -> i64 {
        self.factors.get(&a).copied().unwrap_or(0)
    }

    pub fn factors(&self) -> &BTreeMap<u32, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&a, &e) in &other.factors {
            out.add_exponent(a, e);
        }
        out
    }

    pub fn pow(&self, k: i64) -> Self {
        let mut out = Self::one();
        for (&a, &e) in &self.factors {
            out.add_exponent(a, e * k);
        }
        out
    }

    pub fn inv(&self) -> Self {
        self.pow(-1)
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Power series coefficients up to `t^order`.
    pub fn series(&self, order: usize) -> Vec<i128> {
        let mut s = vec![0i128; order + 1];
        s[0] = 1;
        for (&a, &e) in &self.factors {
            let a = a as usize;
            for _ in 0..e.unsigned_abs() {
                if e > 0 {
                    // multiply by 1 - t^a
                    for k in (a..=order).rev() {
                        s[k] -= s[k - a];
                    }
                } else {
                    // multiply by 1/(1 - t^a) = 1 + t^a + t^2a + ...
                    for k in a..=order {
                        s[k] += s[k - a];
                    }
                }
            }
        }
        s
    }
}

impl fmt::Display for LocalFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(&a, &e)| {
                let base = if a == 1 { "(1-t)".to_string() } else { format!("(1-t^{a})") };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

/// Local factor of a Dedekind zeta function at a prime splitting into
/// residue degrees `parts`.
pub fn dedekind_local(parts: &[usize]) -> LocalFactor {
    parts
        .iter()
        .fold(LocalFactor::one(), |acc, &d| acc.mul(&LocalFactor::power_of(d as u32, -1)))
}

/// Local factor of `zeta(s) / zeta(2s)`, i.e. `prod (1 + t^{f_i})`.
pub fn ratio_local(parts: &[usize]) -> LocalFactor {
    parts
        .iter()
        .fold(LocalFactor::one(), |acc, &d| acc.mul(&LocalFactor::one_plus(d as u32, 1)))
}

/// Residue degrees of an unramified prime of Frobenius cycle type `t` in
/// `K`, in `L`, and (S4 only) in the fixed field of a 3-cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub k: Vec<usize>,
    pub l: Vec<usize>,
    pub l3: Option<Vec<usize>>,
}

pub fn splitting_in_fields(t: FactorizationType, g: GaloisType) -> Result<Splitting> {
    let group = group_elements(g);
    let sigma = group
        .elements()
        .iter()
        .find(|s| s.cycle_type() == t)
        .ok_or_else(|| Error::Unrealizable(t.to_string(), g.to_string()))?;
    Ok(Splitting {
        k: t.parts().iter().map(|&x| x as usize).collect(),
        l: frobenius_order_type(t, g)?,
        l3: (g == GaloisType::S4).then(|| coset_orbit_type(sigma)),
    })
}

/// Exponents in `g^{g_exp} ~ (zK ratio)^{k} (zL ratio)^{l} (zL3 ratio)^{l3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaCase {
    pub galois: GaloisType,
    pub g_exp: i64,
    pub k_exp: i64,
    pub l_exp: i64,
    pub l3_exp: i64,
}

impl ZetaCase {
    pub fn new(galois: GaloisType) -> ZetaCase {
        let (g_exp, k_exp, l_exp, l3_exp) = match galois {
            GaloisType::V4 | GaloisType::C4 => (4, 1, 0, 0),
            GaloisType::D4 => (8, 4, -1, 0),
            GaloisType::A4 => (4, 4, -1, 0),
            // Balancing the (1+t) exponents over the classes of S4 forces
            // l = -3: with identity, transposition and 3-cycle the K, L and
            // L3 factors contribute (4, 24, 8), (2, 0, 0) and (1, 0, 2).
            GaloisType::S4 => (24, 12, -3, 6),
        };
        ZetaCase {
            galois,
            g_exp,
            k_exp,
            l_exp,
            l3_exp,
        }
    }
}

impl fmt::Display for ZetaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g^{} ~ (zK(s)/zK(2s))^{}", self.g_exp, self.k_exp)?;
        if self.l_exp != 0 {
            write!(f, " * (zL(s)/zL(2s))^{}", self.l_exp)?;
        }
        if self.l3_exp != 0 {
            write!(f, " * (zL3(s)/zL3(2s))^{}", self.l3_exp)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub galois: GaloisType,
    pub cycle_type: FactorizationType,
    pub holds: bool,
    /// Left side divided by right side.
    pub residual: LocalFactor,
}

fn sides(case: &ZetaCase, t: FactorizationType) -> Result<(LocalFactor, LocalFactor)> {
    let s = splitting_in_fields(t, case.galois)?;
    let lhs = if t.has_linear_factor() {
        LocalFactor::one_plus(1, case.g_exp)
    } else {
        LocalFactor::one()
    };
    let mut rhs = ratio_local(&s.k).pow(case.k_exp).mul(&ratio_local(&s.l).pow(case.l_exp));
    if case.l3_exp != 0 {
        let l3 = s
            .l3
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no degree-8 resolvent field", case.galois)))?;
        rhs = rhs.mul(&ratio_local(&l3).pow(case.l3_exp));
    }
    Ok((lhs, rhs))
}

/// The identity holds at primes of type `t` when the residual has no
/// `(1 - t)` factor, which is what separates a nice Euler factor from one
/// that shifts the pole at `s = 1`.
pub fn verify_identity_case(case: &ZetaCase, t: FactorizationType) -> Result<IdentityCheck> {
    let (lhs, rhs) = sides(case, t)?;
    let residual = lhs.div(&rhs);
    Ok(IdentityCheck {
        galois: case.galois,
        cycle_type: t,
        holds: residual.exponent(1) == 0,
        residual,
    })
}

pub fn verify_identity(g: GaloisType, t: FactorizationType) -> Result<IdentityCheck> {
    verify_identity_case(&ZetaCase::new(g), t)
}

/// Every (group, realizable cycle type) pair.
pub fn verify_all() -> Vec<IdentityCheck> {
    let mut out = Vec::new();
    for g in GaloisType::ALL {
        let group = group_elements(g);
        for t in FactorizationType::ALL {
            if group.has_cycle_type(t) {
                out.push(verify_identity(g, t).expect("realizable type"));
            }
        }
    }
    out
}

/// Both sides expanded as power series in `t` to `t^order`; returns the
/// residual series `lhs / rhs`.
pub fn truncated_residual(case: &ZetaCase, t: FactorizationType, order: usize) -> Result<Vec<i128>> {
    let (lhs, rhs) = sides(case, t)?;
    let l = lhs.series(order);
    let r = rhs.series(order);
    // r has constant term 1, so the quotient has integer coefficients.
    let mut q = vec![0i128; order + 1];
    for k in 0..=order {
        let acc: i128 = (1..=k).map(|j| r[j] * q[k - j]).sum();
        q[k] = l[k] - acc;
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use FactorizationType as F;

    #[test]
    fn dedekind_and_ratio_examples() {
        assert_eq!(dedekind_local(&[1, 1, 1, 1]), LocalFactor::power_of(1, -4));
        assert_eq!(dedekind_local(&[4]), LocalFactor::power_of(4, -1));
        assert_eq!(dedekind_local(&[2, 2]), LocalFactor::power_of(2, -2));
        assert_eq!(ratio_local(&[1, 1, 1, 1]), LocalFactor::one_plus(1, 4));
        assert_eq!(
            ratio_local(&[1, 1, 2]),
            LocalFactor::one_plus(1, 2).mul(&LocalFactor::one_plus(2, 1))
        );
        assert_eq!(
            ratio_local(&[1, 3]),
            LocalFactor::one_plus(1, 1).mul(&LocalFactor::one_plus(3, 1))
        );
        // zeta(s)/zeta(2s) = dedekind(t) / dedekind(t^2)
        for parts in [vec![1, 1, 1, 1], vec![1, 3], vec![2, 2], vec![4]] {
            let doubled: Vec<usize> = parts.iter().map(|d| 2 * d).collect();
            assert_eq!(ratio_local(&parts), dedekind_local(&parts).div(&dedekind_local(&doubled)));
        }
    }

    #[test]
    fn series_expansion() {
        // (1+t)^2 = 1 + 2t + t^2
        assert_eq!(LocalFactor::one_plus(1, 2).series(4), vec![1, 2, 1, 0, 0]);
        // 1/(1-t)^2 = sum (k+1) t^k
        assert_eq!(LocalFactor::power_of(1, -2).series(4), vec![1, 2, 3, 4, 5]);
        assert_eq!(LocalFactor::one_plus(2, 1).to_string(), "(1-t^2)^-1 * (1-t^4)");
        assert_eq!(LocalFactor::one_plus(1, -1).to_string(), "(1-t) * (1-t^2)^-1");
        assert_eq!(LocalFactor::one().to_string(), "1");
    }

    #[test]
    fn splitting_examples() {
        let s = splitting_in_fields(F::OneOneTwo, GaloisType::S4).unwrap();
        assert_eq!(s.k, vec![1, 1, 2]);
        assert_eq!(s.l, vec![2; 12]);
        assert_eq!(s.l3, Some(vec![2, 2, 2, 2]));
        let s = splitting_in_fields(F::Split, GaloisType::D4).unwrap();
        assert_eq!((s.l, s.l3), (vec![1; 8], None));
        let s = splitting_in_fields(F::OneThree, GaloisType::A4).unwrap();
        assert_eq!(s.l, vec![3; 4]);
        assert!(matches!(
            splitting_in_fields(F::OneOneTwo, GaloisType::C4),
            Err(Error::Unrealizable(..))
        ));
    }

    #[test]
    fn splitting_matches_group_data() {
        let s4 = group_elements(GaloisType::S4);
        for sigma in s4.elements() {
            let s = splitting_in_fields(sigma.cycle_type(), GaloisType::S4).unwrap();
            assert_eq!(s.l3.unwrap(), coset_orbit_type(sigma));
        }
    }

    #[test]
    fn identity_examples() {
        let c = verify_identity(GaloisType::V4, F::Split).unwrap();
        assert!(c.holds && c.residual.is_one());
        let c = verify_identity(GaloisType::V4, F::TwoTwo).unwrap();
        assert!(c.holds);
        assert_eq!(c.residual, LocalFactor::one_plus(2, -2));
        let c = verify_identity(GaloisType::S4, F::OneThree).unwrap();
        assert!(c.holds && c.residual.is_one());
    }

    #[test]
    fn all_pairs_hold() {
        let checks = verify_all();
        assert_eq!(checks.len(), 2 + 3 + 4 + 3 + 5);
        for c in &checks {
            assert!(c.holds, "{:?} {}: {}", c.galois, c.cycle_type, c.residual);
            assert_eq!(c.residual.exponent(1), 0);
        }
    }

    #[test]
    fn s4_exponent_is_forced() {
        // Only l = -3 balances the split class.
        for l in -8..=2 {
            let case = ZetaCase {
                l_exp: l,
                ..ZetaCase::new(GaloisType::S4)
            };
            let ok = FactorizationType::ALL
                .iter()
                .all(|&t| verify_identity_case(&case, t).unwrap().holds);
            assert_eq!(ok, l == -3, "l = {l}");
        }
        let printed = ZetaCase {
            l_exp: -5,
            ..ZetaCase::new(GaloisType::S4)
        };
        let c = verify_identity_case(&printed, F::Split).unwrap();
        assert!(!c.holds);
        assert_eq!(c.residual, LocalFactor::one_plus(1, 48));
    }

    #[test]
    fn truncated_series_agree() {
        for c in verify_all() {
            let case = ZetaCase::new(c.galois);
            let q = truncated_residual(&case, c.cycle_type, 12).unwrap();
            assert_eq!(q[0], 1);
            assert_eq!(q[1], 0, "{:?} {}", c.galois, c.cycle_type);
            assert_eq!(q, c.residual.series(12));
        }
    }
}
