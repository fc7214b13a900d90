//! Transitive subgroups of S4 as explicit permutation lists.
//!
//! Cycle types of group elements stand in for Frobenius classes: for an
//! unramified prime the factorization type of f mod p is the cycle type of
//! Frob_p acting on the four roots.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::FactorizationType;
use crate::error::{Error, Result};

/// A permutation of `{0, 1, 2, 3}` stored as its image list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(pub [u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    /// Build from disjoint cycles written with points `1..=4`.
    pub fn from_cycles(cycles: &[&[u8]]) -> Perm {
        let mut img = [0u8, 1, 2, 3];
        for cyc in cycles {
            for (i, &a) in cyc.iter().enumerate() {
                let b = cyc[(i + 1) % cyc.len()];
                img[(a - 1) as usize] = b - 1;
            }
        }
        Perm(img)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut out = [0u8; 4];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[other.0[i] as usize];
        }
        Perm(out)
    }

    pub fn inverse(&self) -> Perm {
        let mut out = [0u8; 4];
        for (i, &j) in self.0.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        Perm(out)
    }

    /// Cycle lengths in ascending order, fixed points included.
    pub fn cycle_lengths(&self) -> Vec<u8> {
        let mut seen = [false; 4];
        let mut out = Vec::with_capacity(4);
        for start in 0..4 {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i] as usize;
                len += 1;
            }
            out.push(len);
        }
        out.sort_unstable();
        out
    }

    pub fn cycle_type(&self) -> FactorizationType {
        FactorizationType::from_parts(&self.cycle_lengths())
            .expect("cycle lengths always partition 4")
    }

    pub fn order(&self) -> u32 {
        self.cycle_lengths()
            .iter()
            .fold(1u32, |acc, &l| acc.lcm(&(l as u32)))
    }
}

impl fmt::Display for Perm {
    /// Disjoint cycle notation on `1..=4`, e.g. `(1 2)(3 4)`; `()` for identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = [false; 4];
        let mut wrote = false;
        for start in 0..4 {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
                first = false;
                i = self.0[i] as usize;
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// The five transitive subgroups of S4, up to conjugacy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum GaloisType {
    V4,
    C4,
    D4,
    A4,
    S4,
}

impl GaloisType {
    pub const ALL: [GaloisType; 5] = [
        GaloisType::V4,
        GaloisType::C4,
        GaloisType::D4,
        GaloisType::A4,
        GaloisType::S4,
    ];

    pub fn order(self) -> usize {
        match self {
            GaloisType::V4 | GaloisType::C4 => 4,
            GaloisType::D4 => 8,
            GaloisType::A4 => 12,
            GaloisType::S4 => 24,
        }
    }

    fn generators(self) -> Vec<Perm> {
        let c = Perm::from_cycles;
        match self {
            GaloisType::V4 => vec![c(&[&[1, 2], &[3, 4]]), c(&[&[1, 3], &[2, 4]])],
            GaloisType::C4 => vec![c(&[&[1, 2, 3, 4]])],
            GaloisType::D4 => vec![c(&[&[1, 2, 3, 4]]), c(&[&[1, 3]])],
            GaloisType::A4 => vec![c(&[&[1, 2, 3]]), c(&[&[1, 2], &[3, 4]])],
            GaloisType::S4 => vec![c(&[&[1, 2]]), c(&[&[1, 2, 3, 4]])],
        }
    }
}

impl fmt::Display for GaloisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::str::FromStr for GaloisType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GaloisType::ALL
            .into_iter()
            .find(|g| g.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown Galois group {s:?}")))
    }
}

/// A finite permutation group on four points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    elements: Vec<Perm>,
}

impl PermGroup {
    /// Closure of the generators under composition. In a finite group this
    /// also contains all inverses.
    pub fn generate(gens: &[Perm]) -> PermGroup {
        let mut seen = BTreeSet::from([Perm::IDENTITY]);
        let mut queue = VecDeque::from([Perm::IDENTITY]);
        while let Some(g) = queue.pop_front() {
            for s in gens {
                let h = s.compose(&g);
                if seen.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        PermGroup {
            elements: seen.into_iter().collect(),
        }
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_closed(&self) -> bool {
        self.contains(&Perm::IDENTITY)
            && self.elements.iter().all(|a| {
                self.contains(&a.inverse())
                    && self.elements.iter().all(|b| self.contains(&a.compose(b)))
            })
    }

    pub fn is_transitive(&self) -> bool {
        let orbit: BTreeSet<u8> = self.elements.iter().map(|g| g.0[0]).collect();
        orbit.len() == 4
    }

    /// Number of elements of each cycle type.
    pub fn cycle_type_counts(&self) -> BTreeMap<FactorizationType, usize> {
        let mut out = BTreeMap::new();
        for g in &self.elements {
            *out.entry(g.cycle_type()).or_insert(0) += 1;
        }
        out
    }

    pub fn has_cycle_type(&self, t: FactorizationType) -> bool {
        self.elements.iter().any(|g| g.cycle_type() == t)
    }
}

pub fn group_elements(g: GaloisType) -> PermGroup {
    PermGroup::generate(&g.generators())
}

/// Share of group elements that fix at least one root; these are the
/// Frobenius classes of primes where f has a root.
pub fn mean_rho(g: GaloisType) -> Ratio<i64> {
    let group = group_elements(g);
    let hits = group
        .elements()
        .iter()
        .filter(|s| s.cycle_type().has_linear_factor())
        .count();
    Ratio::new(hits as i64, group.order() as i64)
}

/// Orbit lengths of `<sigma>` on the eight left cosets of `<(1 2 3)>` in S4,
/// ascending. This is the splitting type of an unramified prime with
/// Frobenius `sigma` in the degree-8 fixed field of a 3-Sylow subgroup.
pub fn coset_orbit_type(sigma: &Perm) -> Vec<usize> {
    let s4 = group_elements(GaloisType::S4);
    let h = PermGroup::generate(&[Perm::from_cycles(&[&[1, 2, 3]])]);
    let coset_key = |g: &Perm| -> Perm {
        h.elements()
            .iter()
            .map(|x| g.compose(x))
            .min()
            .expect("subgroup is nonempty")
    };
    let cosets: Vec<Perm> = s4
        .elements()
        .iter()
        .map(coset_key)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    debug_assert_eq!(cosets.len(), 8);
    let index_of = |k: &Perm| cosets.binary_search(k).expect("coset key is canonical");

    let mut seen = vec![false; cosets.len()];
    let mut lengths = Vec::new();
    for start in 0..cosets.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            len += 1;
            i = index_of(&coset_key(&sigma.compose(&cosets[i])));
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

/// Splitting type in the Galois closure: `|G|/d` primes of degree `d`, where
/// `d` is the order of Frobenius.
pub fn frobenius_order_type(t: FactorizationType, g: GaloisType) -> Result<Vec<usize>> {
    if !group_elements(g).has_cycle_type(t) {
        return Err(Error::Unrealizable(t.to_string(), g.to_string()));
    }
    let d = t.frobenius_order() as usize;
    Ok(vec![d; g.order() / d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use FactorizationType as F;

    fn counts(g: GaloisType) -> Vec<(F, usize)> {
        group_elements(g).cycle_type_counts().into_iter().collect()
    }

    #[test]
    fn groups_have_expected_shape() {
        for g in GaloisType::ALL {
            let grp = group_elements(g);
            assert_eq!(grp.order(), g.order(), "{g}");
            assert!(grp.is_closed(), "{g}");
            assert!(grp.is_transitive(), "{g}");
        }
        assert_eq!(counts(GaloisType::V4), vec![(F::Split, 1), (F::TwoTwo, 3)]);
        assert_eq!(
            counts(GaloisType::D4),
            vec![(F::Split, 1), (F::OneOneTwo, 2), (F::TwoTwo, 3), (F::Four, 2)]
        );
        assert_eq!(
            counts(GaloisType::S4),
            vec![
                (F::Split, 1),
                (F::OneOneTwo, 6),
                (F::OneThree, 8),
                (F::TwoTwo, 3),
                (F::Four, 6)
            ]
        );
        assert_eq!(
            counts(GaloisType::A4),
            vec![(F::Split, 1), (F::OneThree, 8), (F::TwoTwo, 3)]
        );
        assert_eq!(
            counts(GaloisType::C4),
            vec![(F::Split, 1), (F::TwoTwo, 1), (F::Four, 2)]
        );
    }

    #[test]
    fn mean_rho_table() {
        let r = |a, b| Ratio::new(a, b);
        assert_eq!(mean_rho(GaloisType::S4), r(5, 8));
        assert_eq!(mean_rho(GaloisType::A4), r(3, 4));
        assert_eq!(mean_rho(GaloisType::D4), r(3, 8));
        assert_eq!(mean_rho(GaloisType::C4), r(1, 4));
        assert_eq!(mean_rho(GaloisType::V4), r(1, 4));
    }

    #[test]
    fn coset_orbits_examples() {
        assert_eq!(coset_orbit_type(&Perm::IDENTITY), vec![1; 8]);
        assert_eq!(
            coset_orbit_type(&Perm::from_cycles(&[&[2, 4]])),
            vec![2, 2, 2, 2]
        );
        assert_eq!(
            coset_orbit_type(&Perm::from_cycles(&[&[1, 2, 4]])),
            vec![1, 1, 3, 3]
        );
    }

    #[test]
    fn coset_orbits_are_class_functions() {
        let s4 = group_elements(GaloisType::S4);
        let mut by_type: BTreeMap<F, BTreeSet<Vec<usize>>> = BTreeMap::new();
        for g in s4.elements() {
            by_type
                .entry(g.cycle_type())
                .or_default()
                .insert(coset_orbit_type(g));
        }
        for (t, set) in &by_type {
            assert_eq!(set.len(), 1, "{t} gives {set:?}");
            assert_eq!(set.iter().next().unwrap().iter().sum::<usize>(), 8);
        }
        assert_eq!(by_type[&F::TwoTwo].first().unwrap(), &vec![2, 2, 2, 2]);
        assert_eq!(by_type[&F::Four].first().unwrap(), &vec![4, 4]);
    }

    #[test]
    fn frobenius_orders() {
        assert_eq!(frobenius_order_type(F::Split, GaloisType::D4).unwrap(), vec![1; 8]);
        assert_eq!(
            frobenius_order_type(F::OneOneTwo, GaloisType::D4).unwrap(),
            vec![2; 4]
        );
        assert_eq!(
            frobenius_order_type(F::OneThree, GaloisType::A4).unwrap(),
            vec![3; 4]
        );
        assert!(matches!(
            frobenius_order_type(F::OneThree, GaloisType::D4),
            Err(Error::Unrealizable(..))
        ));
    }

    #[test]
    fn perm_basics() {
        let a = Perm::from_cycles(&[&[1, 2, 3, 4]]);
        assert_eq!(a.to_string(), "(1 2 3 4)");
        assert_eq!(a.order(), 4);
        assert_eq!(a.compose(&a.inverse()), Perm::IDENTITY);
        assert_eq!(Perm::IDENTITY.to_string(), "()");
        assert_eq!("s4".parse::<GaloisType>().unwrap(), GaloisType::S4);
    }
}
