//! The everywhere-local-solvability criterion for twists of a fixed quartic,
//! materialized as finite tables, the disjoint condition sets they cut out,
//! and the character expansion of the Dirichlet series over those sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::arith::{jacobi_u64, prime_divisors, squarefree_factor};
use crate::error::{Error, Result};
use crate::localsolve::is_locally_solvable;
use crate::quartic::{classify_galois_checked, has_root_mod_p, GaloisType, Quartic, RootTable};
use crate::series::chi_value;

/// Primes up to which the Galois classification is cross-checked against
/// Frobenius cycle types when a bundle is built.
const CLASSIFICATION_CHECK_BOUND: u64 = 2000;

/// Allowed residues mod 8 of the odd part of `q`: `odd` when `q` is odd,
/// `half` for `q/2` when `q` is even.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod8Table {
    pub odd: BTreeSet<u8>,
    pub half: BTreeSet<u8>,
}

/// Integer representatives of the odd square classes of `Q_2`, keyed by
/// their residue mod 8.
const ODD_REPS: [(u8, i64); 4] = [(1, 1), (3, -5), (5, 5), (7, -1)];

pub fn compute_mod8_table(f: &Quartic) -> Result<Mod8Table> {
    let mut odd = BTreeSet::new();
    let mut half = BTreeSet::new();
    for (class, rep) in ODD_REPS {
        if is_locally_solvable(f, rep, 2)? {
            odd.insert(class);
        }
        if is_locally_solvable(f, 2 * rep, 2)? {
            half.insert(class);
        }
    }
    Ok(Mod8Table { odd, half })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoprimeRule {
    Unconstrained,
    /// `(q/p) = 1` is required.
    ResidueOnly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DividingRule {
    Unconstrained,
    /// `((q/p)/p) = 1` is required.
    CofactorResidue,
    /// `((q/p)/p) = -1` is required.
    CofactorNonresidue,
    Forbidden,
}

impl CoprimeRule {
    pub fn allows(self, symbol: i8) -> bool {
        self == CoprimeRule::Unconstrained || symbol == 1
    }
}

impl DividingRule {
    pub fn from_solvability(h_p: bool, h_up: bool) -> DividingRule {
        match (h_p, h_up) {
            (true, true) => DividingRule::Unconstrained,
            (true, false) => DividingRule::CofactorResidue,
            (false, true) => DividingRule::CofactorNonresidue,
            (false, false) => DividingRule::Forbidden,
        }
    }

    pub fn allows(self, symbol: i8) -> bool {
        match self {
            DividingRule::Unconstrained => true,
            DividingRule::CofactorResidue => symbol == 1,
            DividingRule::CofactorNonresidue => symbol == -1,
            DividingRule::Forbidden => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OddBadPrimeTable {
    pub p: u64,
    /// Least positive quadratic non-residue mod `p`.
    pub u: u64,
    pub coprime_rule: CoprimeRule,
    pub dividing_rule: DividingRule,
}

pub fn least_nonresidue(p: u64) -> u64 {
    (2..p).find(|&u| jacobi_u64(u, p) == -1).expect("odd prime has a non-residue")
}

pub fn compute_odd_table(f: &Quartic, p: u64) -> Result<OddBadPrimeTable> {
    if p == 2 || f.discriminant() % p as i64 != 0 || !crate::arith::is_prime(p) {
        return Err(Error::InvalidArgument(format!(
            "{p} is not an odd prime dividing the discriminant {}",
            f.discriminant()
        )));
    }
    let u = least_nonresidue(p);
    let (ui, pi) = (u as i64, p as i64);
    // H_1 always has the points at infinity.
    let coprime_rule = if is_locally_solvable(f, ui, p)? {
        CoprimeRule::Unconstrained
    } else {
        CoprimeRule::ResidueOnly
    };
    // The least non-residue is prime, so u p is square-free.
    let dividing_rule = DividingRule::from_solvability(
        is_locally_solvable(f, pi, p)?,
        is_locally_solvable(f, ui * pi, p)?,
    );
    Ok(OddBadPrimeTable {
        p,
        u,
        coprime_rule,
        dividing_rule,
    })
}

/// The square-free `q` whose bad part is `bad_part`, whose cofactor
/// `q' = q / bad_part` is prime to every bad prime, is `mod8_class` mod 8,
/// and has the prescribed Legendre symbols.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionSet {
    pub bad_part: u64,
    pub mod8_class: u8,
    pub legendre_constraints: BTreeMap<u64, i8>,
}

impl ConditionSet {
    /// Membership on the bad-prime conditions only; the good primes of `q`
    /// are governed separately by the root condition.
    pub fn contains(&self, q: u64) -> bool {
        if q == 0 || !q.is_multiple_of(self.bad_part) {
            return false;
        }
        let rest = q / self.bad_part;
        if rest % 8 != self.mod8_class as u64 {
            return false;
        }
        self.legendre_constraints
            .iter()
            .all(|(&p, &s)| !rest.is_multiple_of(p) && jacobi_u64(rest % p, p) == s)
    }
}

impl fmt::Display for ConditionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q = {} * q', q' = {} mod 8", self.bad_part, self.mod8_class)?;
        for (p, s) in &self.legendre_constraints {
            write!(f, ", (q'/{p}) = {s:+}")?;
        }
        Ok(())
    }
}

/// One summand `coefficient * prefactor^{-s} * g^{chi_i psi_r ...}(s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistTerm {
    pub sign_num: i64,
    pub sign_den: i64,
    pub chi: u8,
    pub psis: Vec<u64>,
    pub prefactor: u64,
}

impl TwistTerm {
    pub fn coefficient(&self) -> Ratio<i64> {
        Ratio::new(self.sign_num, self.sign_den)
    }
}

impl fmt::Display for TwistTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient())?;
        if self.prefactor != 1 {
            write!(f, " * {}^-s", self.prefactor)?;
        }
        let mut twist: Vec<String> = Vec::new();
        if self.chi != 1 {
            twist.push(format!("chi{}", self.chi));
        }
        twist.extend(self.psis.iter().map(|r| format!("psi{r}")));
        if twist.is_empty() {
            write!(f, " * g")
        } else {
            write!(f, " * g^({})", twist.join("*"))
        }
    }
}

/// The criterion for one quartic, ready for membership tests and expansion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionBundle {
    pub f: Quartic,
    pub disc: i64,
    pub galois: GaloisType,
    pub mod8: Mod8Table,
    pub odd_tables: Vec<OddBadPrimeTable>,
    pub sets: Vec<ConditionSet>,
    pub terms: Vec<TwistTerm>,
}

impl CriterionBundle {
    pub fn new(f: &Quartic) -> Result<CriterionBundle> {
        let galois = classify_galois_checked(f, CLASSIFICATION_CHECK_BOUND)?;
        let mod8 = compute_mod8_table(f)?;
        let odd_tables = prime_divisors(f.discriminant())
            .into_iter()
            .filter(|&p| p != 2)
            .map(|p| compute_odd_table(f, p))
            .collect::<Result<Vec<_>>>()?;
        let mut bundle = CriterionBundle {
            f: *f,
            disc: f.discriminant(),
            galois,
            mod8,
            odd_tables,
            sets: Vec::new(),
            terms: Vec::new(),
        };
        bundle.sets = condition_sets(&bundle);
        bundle.terms = expand_f_terms(&bundle.sets);
        Ok(bundle)
    }

    /// 2 and the odd primes dividing the discriminant.
    pub fn bad_primes(&self) -> Vec<u64> {
        std::iter::once(2).chain(self.odd_tables.iter().map(|t| t.p)).collect()
    }

    pub fn is_bad(&self, p: u64) -> bool {
        p == 2 || self.odd_tables.iter().any(|t| t.p == p)
    }
}

/// Source of "f has a root mod p" answers for good primes.
pub trait RootLookup {
    fn has_root(&self, p: u64) -> Result<bool>;
}

impl RootLookup for RootTable {
    fn has_root(&self, p: u64) -> Result<bool> {
        self.get(p).ok_or(Error::TableLimit {
            n: p,
            limit: self.limit(),
        })
    }
}

/// Computes each answer on demand.
pub struct DirectRoots<'a>(pub &'a Quartic);

impl RootLookup for DirectRoots<'_> {
    fn has_root(&self, p: u64) -> Result<bool> {
        Ok(has_root_mod_p(self.0, p))
    }
}

/// Conditions at 2 and the odd bad primes for square-free `q`.
pub fn bad_prime_conditions_hold(bundle: &CriterionBundle, q: u64) -> bool {
    if q.is_multiple_of(2) {
        if !bundle.mod8.half.contains(&(((q / 2) % 8) as u8)) {
            return false;
        }
    } else if !bundle.mod8.odd.contains(&((q % 8) as u8)) {
        return false;
    }
    bundle.odd_tables.iter().all(|t| {
        if q.is_multiple_of(t.p) {
            t.dividing_rule.allows(jacobi_u64((q / t.p) % t.p, t.p))
        } else {
            t.coprime_rule.allows(jacobi_u64(q % t.p, t.p))
        }
    })
}

/// The criterion for a square-free `q` with known prime factors.
pub fn is_els_criterion_factored(
    bundle: &CriterionBundle,
    q: u64,
    primes: &[u64],
    roots: &impl RootLookup,
) -> Result<bool> {
    if !bad_prime_conditions_hold(bundle, q) {
        return Ok(false);
    }
    for &p in primes {
        if !bundle.is_bad(p) && !roots.has_root(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_els_criterion(bundle: &CriterionBundle, q: u64, roots: &impl RootLookup) -> Result<bool> {
    if q == 0 {
        return Err(Error::InvalidArgument("twist must be positive".into()));
    }
    let primes = squarefree_factor(q, None)?.ok_or(Error::NotSquarefree(q))?;
    is_els_criterion_factored(bundle, q, &primes, roots)
}

/// Cells over (subset of bad primes) x (symbol pattern) x (class mod 8),
/// keeping those the tables allow. Subsets are ordered by their product.
pub fn condition_sets(bundle: &CriterionBundle) -> Vec<ConditionSet> {
    let bad = bundle.bad_primes();
    let odd: Vec<u64> = bad[1..].to_vec();
    let mut subsets: Vec<Vec<u64>> = (0u32..1 << bad.len())
        .map(|mask| {
            bad.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect();
    subsets.sort_by_key(|s| s.iter().product::<u64>());

    let mut out = Vec::new();
    for subset in subsets {
        let m: u64 = subset.iter().product();
        for pattern in 0u32..1 << odd.len() {
            let symbols: Vec<i8> = (0..odd.len())
                .map(|j| if pattern >> j & 1 == 0 { 1 } else { -1 })
                .collect();
            let symbols_ok = bundle.odd_tables.iter().zip(&symbols).all(|(t, &s)| {
                if subset.contains(&t.p) {
                    let cofactor = jacobi_u64((m / t.p) % t.p, t.p) * s;
                    t.dividing_rule.allows(cofactor)
                } else {
                    t.coprime_rule.allows(jacobi_u64(m % t.p, t.p) * s)
                }
            });
            if !symbols_ok {
                continue;
            }
            for class in [1u8, 3, 5, 7] {
                let allowed = if subset.contains(&2) {
                    bundle.mod8.half.contains(&((((m / 2) * class as u64) % 8) as u8))
                } else {
                    bundle.mod8.odd.contains(&(((m * class as u64) % 8) as u8))
                };
                if allowed {
                    out.push(ConditionSet {
                        bad_part: m,
                        mod8_class: class,
                        legendre_constraints: odd.iter().copied().zip(symbols.iter().copied()).collect(),
                    });
                }
            }
        }
    }
    out
}

/// Character expansion of the indicator of each cell, merged across cells.
pub fn expand_f_terms(sets: &[ConditionSet]) -> Vec<TwistTerm> {
    let mut merged: BTreeMap<(u64, u8, Vec<u64>), Ratio<i64>> = BTreeMap::new();
    for set in sets {
        let odd: Vec<(u64, i8)> = set.legendre_constraints.iter().map(|(&p, &s)| (p, s)).collect();
        let scale = Ratio::new(1, 1i64 << (odd.len() + 2));
        for chi in 1..=4u8 {
            let chi_sign = chi_value(chi, set.mod8_class as i64) as i64;
            for mask in 0u32..1 << odd.len() {
                let mut sign = chi_sign;
                let mut psis = Vec::new();
                for (j, &(p, s)) in odd.iter().enumerate() {
                    if mask >> j & 1 == 1 {
                        sign *= s as i64;
                        psis.push(p);
                    }
                }
                *merged
                    .entry((set.bad_part, chi, psis))
                    .or_insert_with(|| Ratio::from_integer(0)) += scale * sign;
            }
        }
    }
    merged
        .into_iter()
        .filter(|(_, c)| *c != Ratio::from_integer(0))
        .map(|((prefactor, chi, psis), c)| TwistTerm {
            sign_num: *c.numer(),
            sign_den: *c.denom(),
            chi,
            psis,
            prefactor,
        })
        .collect()
}
