//! Dirichlet characters, truncated coefficient streams of Dirichlet series,
//! and the frobenian multiplicative function attached to a quartic.

use std::fmt::Write as _;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::arith::{jacobi_u64, prime_divisors, primes_up_to};
use crate::criterion::{CriterionBundle, TwistTerm};
use crate::error::{Error, Result};
use crate::quartic::{Quartic, RootTable};

pub type Q = Ratio<i64>;

/// Values of the four characters mod 8 on the classes 1, 3, 5, 7.
const CHI_TABLE: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, -1, 1], [1, -1, 1, -1]];

/// `chi_i(n)` for `i` in `1..=4`; zero on even `n`.
pub fn chi_value(i: u8, n: i64) -> i8 {
    assert!((1..=4).contains(&i), "character index {i} outside 1..=4");
    if n % 2 == 0 {
        return 0;
    }
    CHI_TABLE[i as usize - 1][(n.rem_euclid(8) / 2) as usize]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Character {
    /// One of the four characters mod 8.
    Mod8(u8),
    /// `psi_r(n) = (n / r)` for an odd prime `r`.
    Quad(u64),
}

impl Character {
    pub fn value(self, n: u64) -> i8 {
        match self {
            Character::Mod8(i) => chi_value(i, n as i64),
            Character::Quad(r) => jacobi_u64(n % r, r),
        }
    }
}

fn product_value(chars: &[Character], n: u64) -> i8 {
    chars.iter().map(|c| c.value(n)).product()
}

/// The multiplicative function with `rho(p) = 1` when f has a root mod `p`
/// and `p` does not divide `2 disc(f)`, and `rho = 0` on higher prime powers.
#[derive(Clone, Debug)]
pub struct FrobenianRho {
    exceptional: Vec<u64>,
    roots: RootTable,
}

impl FrobenianRho {
    /// Prime values are available up to `bound`.
    pub fn new(f: &Quartic, bound: u64) -> FrobenianRho {
        FrobenianRho::with_roots(f, RootTable::build(f, bound))
    }

    pub fn with_roots(f: &Quartic, roots: RootTable) -> FrobenianRho {
        let mut exceptional = prime_divisors(f.discriminant());
        if !exceptional.contains(&2) {
            exceptional.insert(0, 2);
        }
        FrobenianRho { exceptional, roots }
    }

    pub fn exceptional(&self) -> &[u64] {
        &self.exceptional
    }

    pub fn bound(&self) -> u64 {
        self.roots.limit()
    }

    /// `rho(p)` for a prime `p` up to the bound.
    pub fn at_prime(&self, p: u64) -> Result<bool> {
        let root = self.roots.get(p).ok_or(Error::TableLimit {
            n: p,
            limit: self.roots.limit(),
        })?;
        Ok(root && !self.exceptional.contains(&p))
    }
}

/// Coefficients `a_1..a_N` of a Dirichlet series, exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientStream {
    a: Vec<Q>,
}

impl CoefficientStream {
    pub fn zeros(n: usize) -> Self {
        CoefficientStream {
            a: vec![Q::zero(); n + 1],
        }
    }

    /// From `a_1, a_2, ...`.
    pub fn from_values(values: Vec<Q>) -> Self {
        let mut a = Vec::with_capacity(values.len() + 1);
        a.push(Q::zero());
        a.extend(values);
        CoefficientStream { a }
    }

    pub fn len(&self) -> usize {
        self.a.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `a_n` for `1 <= n <= N`.
    pub fn get(&self, n: usize) -> Q {
        assert!(n >= 1, "coefficients start at n = 1");
        self.a[n]
    }

    pub fn set(&mut self, n: usize, v: Q) {
        assert!(n >= 1, "coefficients start at n = 1");
        self.a[n] = v;
    }

    pub fn values(&self) -> &[Q] {
        &self.a[1..]
    }

    fn check_len(&self, other: &Self) {
        assert_eq!(self.len(), other.len(), "streams of different lengths");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_len(other);
        CoefficientStream {
            a: self.a.iter().zip(&other.a).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn scale(&self, c: Q) -> Self {
        CoefficientStream {
            a: self.a.iter().map(|x| x * c).collect(),
        }
    }

    /// `sum a_n chi(n) n^-s` for the product `chi` of the given characters.
    pub fn twist(&self, chars: &[Character]) -> Self {
        let mut out = self.clone();
        for n in 1..out.a.len() {
            out.a[n] *= Q::from_integer(product_value(chars, n as u64) as i64);
        }
        out
    }

    /// Dirichlet convolution, truncated at the common length.
    pub fn dirichlet_mul(&self, other: &Self) -> Self {
        self.check_len(other);
        let n = self.len();
        let mut out = Self::zeros(n);
        for d in 1..=n {
            if self.a[d].is_zero() {
                continue;
            }
            for m in 1..=n / d {
                out.a[d * m] += self.a[d] * other.a[m];
            }
        }
        out
    }

    /// Inverse under Dirichlet convolution; needs `a_1 != 0`.
    pub fn dirichlet_inverse(&self) -> Result<Self> {
        let n = self.len();
        if n == 0 || self.a[1].is_zero() {
            return Err(Error::InvalidArgument("inverse needs a_1 != 0".into()));
        }
        let mut b = Self::zeros(n);
        b.a[1] = self.a[1].recip();
        for k in 2..=n {
            let mut acc = Q::zero();
            for d in divisors_upto(k).into_iter().filter(|&d| d > 1) {
                acc += self.a[d] * b.a[k / d];
            }
            b.a[k] = -acc / self.a[1];
        }
        Ok(b)
    }

    /// CSV with header `n,a_n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,a_n\n");
        for (n, v) in self.a.iter().enumerate().skip(1) {
            let _ = writeln!(out, "{n},{v}");
        }
        out
    }
}

fn divisors_upto(k: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= k {
        if k.is_multiple_of(d) {
            out.push(d);
            if d * d != k {
                out.push(k / d);
            }
        }
        d += 1;
    }
    out
}

/// `a_n = 1` iff `n` is square-free with `rho(p) = 1` for every `p | n`.
pub fn rho_coefficients(rho: &FrobenianRho, n: usize) -> Result<CoefficientStream> {
    let mut support = vec![true; n + 1];
    for p in primes_up_to(n as u64) {
        let p = p as usize;
        let kill_all = !rho.at_prime(p as u64)?;
        let step = if kill_all { p } else { p * p };
        let mut m = step;
        while m <= n {
            support[m] = false;
            m += step;
        }
    }
    let mut out = CoefficientStream::zeros(n);
    for (k, &s) in support.iter().enumerate().skip(1) {
        if s {
            out.a[k] = Q::one();
        }
    }
    Ok(out)
}

/// `(1/4) sum_i chi_i(c) a^{chi_i}` equals `a_n [n = c mod 8]` for `n <= N`.
pub fn filtration_check_mod8(a: &CoefficientStream, c: u8, n: usize) -> bool {
    first_filtration_failure_mod8(a, c, n).is_none()
}

/// Smallest `n` where the mod-8 identity fails.
pub fn first_filtration_failure_mod8(a: &CoefficientStream, c: u8, n: usize) -> Option<usize> {
    let twists: Vec<CoefficientStream> = (1..=4).map(|i| a.twist(&[Character::Mod8(i)])).collect();
    let quarter = Q::new(1, 4);
    (1..=n.min(a.len())).find(|&k| {
        let lhs: Q = (1..=4u8)
            .map(|i| twists[i as usize - 1].a[k] * Q::from_integer(chi_value(i, c as i64) as i64))
            .sum::<Q>()
            * quarter;
        let rhs = if k % 8 == c as usize { a.a[k] } else { Q::zero() };
        lhs != rhs
    })
}

/// `(1/2)(a + sign a^{psi_r})` equals `a_n [(n/r) = sign]` for `n <= N`
/// coprime to `r`.
pub fn filtration_check_modr(a: &CoefficientStream, r: u64, sign: i8, n: usize) -> bool {
    first_filtration_failure_modr(a, r, sign, n).is_none()
}

pub fn first_filtration_failure_modr(
    a: &CoefficientStream,
    r: u64,
    sign: i8,
    n: usize,
) -> Option<usize> {
    let tw = a.twist(&[Character::Quad(r)]);
    let half = Q::new(1, 2);
    let s = Q::from_integer(sign as i64);
    (1..=n.min(a.len()))
        .filter(|&k| !(k as u64).is_multiple_of(r))
        .find(|&k| {
            let lhs = (a.a[k] + s * tw.a[k]) * half;
            let rhs = if jacobi_u64(k as u64 % r, r) == sign {
                a.a[k]
            } else {
                Q::zero()
            };
            lhs != rhs
        })
}

/// Evaluates the term list against `rho`: the `n`-th coefficient is
/// `sum c * chi(n/M) psi(n/M) rho(n/M)` over terms whose prefactor `M | n`.
pub fn f_coefficients_from_terms(
    terms: &[TwistTerm],
    rho: &CoefficientStream,
) -> CoefficientStream {
    let n = rho.len();
    let mut out = CoefficientStream::zeros(n);
    for term in terms {
        let m = term.prefactor as usize;
        if m == 0 || m > n {
            continue;
        }
        let mut chars = vec![Character::Mod8(term.chi)];
        chars.extend(term.psis.iter().map(|&r| Character::Quad(r)));
        let c = term.coefficient();
        for k in 1..=n / m {
            let r = rho.a[k];
            if r.is_zero() {
                continue;
            }
            let v = product_value(&chars, k as u64);
            if v != 0 {
                out.a[k * m] += c * r * Q::from_integer(v as i64);
            }
        }
    }
    out
}

/// Coefficients of the Dirichlet series over the ELS twists, from the bundle's
/// term list.
pub fn f_coefficients(bundle: &CriterionBundle, rho: &FrobenianRho, n: usize) -> Result<CoefficientStream> {
    let base = rho_coefficients(rho, n)?;
    Ok(f_coefficients_from_terms(&bundle.terms, &base))
}

/// Average of `rho(p) chi(p)` over primes `p <= b` outside the exceptional set.
pub fn empirical_mean(rho: &FrobenianRho, chars: &[Character], b: u64) -> Result<f64> {
    let mut total: i64 = 0;
    let mut count: u64 = 0;
    for p in primes_up_to(b) {
        if rho.exceptional.contains(&p) {
            continue;
        }
        count += 1;
        if rho.at_prime(p)? {
            total += product_value(chars, p) as i64;
        }
    }
    if count == 0 {
        return Ok(0.0);
    }
    Ok(total as f64 / count as f64)
}
