//! Monic integer quartics: discriminant, irreducibility, factorization types
//! modulo primes, and Galois group classification.

mod modp;
pub mod perm;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{divisors, exact_sqrt, is_prime};
use crate::error::{Error, Result};

pub use modp::{factorization_type_mod_p, has_root_mod_p, root_count_mod_p, RootTable};
pub use perm::{
    coset_orbit_type, frobenius_order_type, group_elements, mean_rho, GaloisType, Perm, PermGroup,
};

/// Degrees of the irreducible factors of f mod an unramified prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FactorizationType {
    /// `(1,1,1,1)`
    Split,
    /// `(1,1,2)`
    OneOneTwo,
    /// `(1,3)`
    OneThree,
    /// `(2,2)`
    TwoTwo,
    /// `(4)`
    Four,
}

impl FactorizationType {
    pub const ALL: [FactorizationType; 5] = [
        FactorizationType::Split,
        FactorizationType::OneOneTwo,
        FactorizationType::OneThree,
        FactorizationType::TwoTwo,
        FactorizationType::Four,
    ];

    /// Ascending parts, summing to 4.
    pub fn parts(self) -> &'static [u8] {
        match self {
            FactorizationType::Split => &[1, 1, 1, 1],
            FactorizationType::OneOneTwo => &[1, 1, 2],
            FactorizationType::OneThree => &[1, 3],
            FactorizationType::TwoTwo => &[2, 2],
            FactorizationType::Four => &[4],
        }
    }

    pub fn from_parts(parts: &[u8]) -> Option<Self> {
        let mut sorted = parts.to_vec();
        sorted.sort_unstable();
        Self::ALL.into_iter().find(|t| t.parts() == sorted.as_slice())
    }

    /// True for the types with a part equal to 1, i.e. f has a root mod p.
    pub fn has_linear_factor(self) -> bool {
        self.parts()[0] == 1
    }

    /// Order of a permutation with this cycle type.
    pub fn frobenius_order(self) -> u32 {
        match self {
            FactorizationType::Split => 1,
            FactorizationType::OneOneTwo | FactorizationType::TwoTwo => 2,
            FactorizationType::OneThree => 3,
            FactorizationType::Four => 4,
        }
    }
}

impl fmt::Display for FactorizationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts().iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for FactorizationType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: std::result::Result<Vec<u8>, _> =
            inner.split(',').map(|x| x.trim().parse::<u8>()).collect();
        parts
            .ok()
            .and_then(|p| Self::from_parts(&p))
            .ok_or_else(|| Error::InvalidArgument(format!("not a partition of 4: {s:?}")))
    }
}

impl TryFrom<String> for FactorizationType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<FactorizationType> for String {
    fn from(t: FactorizationType) -> String {
        t.to_string()
    }
}

/// Monic resolvent cubic `y^3 + b2 y^2 + b1 y + b0` whose roots are
/// `r1 r2 + r3 r4`, `r1 r3 + r2 r4`, `r1 r4 + r2 r3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cubic {
    pub b2: i128,
    pub b1: i128,
    pub b0: i128,
}

impl Cubic {
    pub fn eval(&self, y: i128) -> i128 {
        ((y + self.b2) * y + self.b1) * y + self.b0
    }

    /// Distinct integer roots, ascending. A monic integer cubic has no
    /// other rational roots.
    pub fn rational_roots(&self) -> Vec<i128> {
        let mut roots = Vec::new();
        if self.b0 == 0 {
            roots.push(0);
            // y^2 + b2 y + b1
            if let Some(s) = exact_sqrt(self.b2 * self.b2 - 4 * self.b1) {
                for r in [(-self.b2 - s), (-self.b2 + s)] {
                    if r % 2 == 0 {
                        roots.push(r / 2);
                    }
                }
            }
        } else {
            for d in divisors(self.b0.unsigned_abs() as u64) {
                for r in [d as i128, -(d as i128)] {
                    if self.eval(r) == 0 {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort_unstable();
        roots.dedup();
        roots
    }
}

impl fmt::Display for Cubic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^3{:+}*y^2{:+}*y{:+}", self.b2, self.b1, self.b0)
    }
}

/// `x^4 + a3 x^3 + a2 x^2 + a1 x + a0`, irreducible over Q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Quartic {
    a3: i64,
    a2: i64,
    a1: i64,
    a0: i64,
    disc: i64,
}

impl Quartic {
    /// Validates irreducibility over Q and that the discriminant fits in 64 bits.
    pub fn new(a3: i64, a2: i64, a1: i64, a0: i64) -> Result<Self> {
        let disc = discriminant_of(a3, a2, a1, a0).ok_or_else(|| {
            Error::InvalidArgument("coefficients too large: discriminant overflows i64".into())
        })?;
        let f = Quartic {
            a3,
            a2,
            a1,
            a0,
            disc,
        };
        // Resolvent coefficients must fit too.
        let r = f.resolvent_cubic();
        if i64::try_from(r.b0).is_err() || i64::try_from(r.b1).is_err() {
            return Err(Error::InvalidArgument(
                "coefficients too large for the resolvent cubic".into(),
            ));
        }
        if !f.is_irreducible() {
            return Err(Error::Reducible(f.pretty()));
        }
        debug_assert_ne!(disc, 0);
        Ok(f)
    }

    /// `[a3, a2, a1, a0]`
    pub fn coefficients(&self) -> [i64; 4] {
        [self.a3, self.a2, self.a1, self.a0]
    }

    /// Ascending coefficients `[a0, a1, a2, a3, 1]`.
    pub fn ascending(&self) -> [i64; 5] {
        [self.a0, self.a1, self.a2, self.a3, 1]
    }

    /// Coefficients of `u^4 f(1/u)`, ascending: `[1, a3, a2, a1, a0]`.
    pub fn reversed_ascending(&self) -> [i64; 5] {
        [1, self.a3, self.a2, self.a1, self.a0]
    }

    pub fn discriminant(&self) -> i64 {
        self.disc
    }

    pub fn eval(&self, x: i128) -> i128 {
        (((x + self.a3 as i128) * x + self.a2 as i128) * x + self.a1 as i128) * x + self.a0 as i128
    }

    pub fn resolvent_cubic(&self) -> Cubic {
        let (a3, a2, a1, a0) = (
            self.a3 as i128,
            self.a2 as i128,
            self.a1 as i128,
            self.a0 as i128,
        );
        Cubic {
            b2: -a2,
            b1: a3 * a1 - 4 * a0,
            b0: 4 * a2 * a0 - a3 * a3 * a0 - a1 * a1,
        }
    }

    /// Complete test for degree 4: no rational root and no splitting into
    /// two monic integer quadratics.
    fn is_irreducible(&self) -> bool {
        if self.a0 == 0 {
            return false;
        }
        let divs = divisors(self.a0.unsigned_abs());
        let has_root = divs
            .iter()
            .any(|&d| self.eval(d as i128) == 0 || self.eval(-(d as i128)) == 0);
        if has_root {
            return false;
        }
        let (a3, a2, a1, a0) = (
            self.a3 as i128,
            self.a2 as i128,
            self.a1 as i128,
            self.a0 as i128,
        );
        // (x^2 + b x + c)(x^2 + d x + e): ce = a0, b + d = a3,
        // c + e + bd = a2, be + cd = a1.
        for &dv in &divs {
            for c in [dv as i128, -(dv as i128)] {
                let e = a0 / c;
                let mut candidates = Vec::new();
                if c != e {
                    let num = a1 - a3 * c;
                    let den = e - c;
                    if num % den == 0 {
                        candidates.push(num / den);
                    }
                } else if a1 == c * a3 {
                    // b, d are the roots of z^2 - a3 z + (a2 - 2c)
                    if let Some(s) = exact_sqrt(a3 * a3 - 4 * (a2 - 2 * c)) {
                        if (a3 + s) % 2 == 0 {
                            candidates.push((a3 + s) / 2);
                        }
                    }
                }
                for b in candidates {
                    let d = a3 - b;
                    if c + e + b * d == a2 && b * e + c * d == a1 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Canonical form with every coefficient signed, e.g. `x^4+0*x^3+0*x^2-1*x+1`.
    pub fn canonical(&self) -> String {
        format!(
            "x^4{:+}*x^3{:+}*x^2{:+}*x{:+}",
            self.a3, self.a2, self.a1, self.a0
        )
    }

    /// Human form with zero terms dropped, e.g. `x^4 - x + 1`.
    pub fn pretty(&self) -> String {
        let mut s = String::from("x^4");
        for (c, mono) in [
            (self.a3, "x^3"),
            (self.a2, "x^2"),
            (self.a1, "x"),
            (self.a0, ""),
        ] {
            if c == 0 {
                continue;
            }
            s.push_str(if c < 0 { " - " } else { " + " });
            let a = c.unsigned_abs();
            if mono.is_empty() {
                s.push_str(&a.to_string());
            } else {
                if a != 1 {
                    s.push_str(&a.to_string());
                }
                s.push_str(mono);
            }
        }
        s
    }

    /// Parse either four integers `"a3 a2 a1 a0"` or a polynomial string.
    pub fn parse(input: &str) -> Result<Self> {
        let words: Vec<&str> = input.split_whitespace().collect();
        if words.len() == 4 && words.iter().all(|w| w.parse::<i64>().is_ok()) {
            let c: Vec<i64> = words.iter().map(|w| w.parse().unwrap()).collect();
            return Quartic::new(c[0], c[1], c[2], c[3]);
        }
        let coeffs = parse_polynomial(input)?;
        if coeffs[4] != 1 {
            return Err(Error::Parse {
                input: input.into(),
                reason: "expected a monic quartic".into(),
            });
        }
        Quartic::new(coeffs[3], coeffs[2], coeffs[1], coeffs[0])
    }
}

impl fmt::Display for Quartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

impl FromStr for Quartic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Quartic::parse(s)
    }
}

impl TryFrom<String> for Quartic {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        Quartic::parse(&s)
    }
}

impl From<Quartic> for String {
    fn from(f: Quartic) -> String {
        f.canonical()
    }
}

/// Ascending coefficients of a polynomial of degree at most 4 written with
/// `x`, `^`, optional `*`, and integer coefficients.
fn parse_polynomial(input: &str) -> Result<[i64; 5]> {
    let err = |reason: &str| Error::Parse {
        input: input.into(),
        reason: reason.into(),
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty input"));
    }
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 && !s[..i].ends_with('^') {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);

    let mut out = [0i64; 5];
    for term in terms {
        let (sign, body) = match term.as_bytes().first() {
            Some(b'-') => (-1i64, &term[1..]),
            Some(b'+') => (1, &term[1..]),
            _ => (1, term),
        };
        if body.is_empty() {
            return Err(err("dangling sign"));
        }
        let (coef, degree) = match body.find('x') {
            None => (body.parse::<i64>().map_err(|_| err("bad constant"))?, 0usize),
            Some(pos) => {
                let c = body[..pos].trim_end_matches('*');
                let coef = if c.is_empty() {
                    1
                } else {
                    c.parse::<i64>().map_err(|_| err("bad coefficient"))?
                };
                let rest = &body[pos + 1..];
                let degree = if rest.is_empty() {
                    1
                } else if let Some(d) = rest.strip_prefix('^') {
                    d.parse::<usize>().map_err(|_| err("bad exponent"))?
                } else {
                    return Err(err("unexpected text after x"));
                };
                (coef, degree)
            }
        };
        if degree > 4 {
            return Err(err("degree exceeds 4"));
        }
        out[degree] = out[degree]
            .checked_add(sign * coef)
            .ok_or_else(|| err("coefficient overflow"))?;
    }
    Ok(out)
}

fn discriminant_of(a3: i64, a2: i64, a1: i64, a0: i64) -> Option<i64> {
    let (b, c, d, e) = (a3 as i128, a2 as i128, a1 as i128, a0 as i128);
    // Each monomial has weighted degree 12; with |coefficients| < 2^20 the
    // partial sums stay far inside i128, so only larger inputs need checks.
    let terms: [Option<i128>; 16] = [
        mono(256, &[e, e, e]),
        mono(-192, &[b, d, e, e]),
        mono(-128, &[c, c, e, e]),
        mono(144, &[c, d, d, e]),
        mono(-27, &[d, d, d, d]),
        mono(144, &[b, b, c, e, e]),
        mono(-6, &[b, b, d, d, e]),
        mono(-80, &[b, c, c, d, e]),
        mono(18, &[b, c, d, d, d]),
        mono(16, &[c, c, c, c, e]),
        mono(-4, &[c, c, c, d, d]),
        mono(-27, &[b, b, b, b, e, e]),
        mono(18, &[b, b, b, c, d, e]),
        mono(-4, &[b, b, b, d, d, d]),
        mono(-4, &[b, b, c, c, c, e]),
        mono(1, &[b, b, c, c, d, d]),
    ];
    let mut acc: i128 = 0;
    for t in terms {
        acc = acc.checked_add(t?)?;
    }
    i64::try_from(acc).ok()
}

fn mono(k: i128, xs: &[i128]) -> Option<i128> {
    xs.iter().try_fold(k, |acc, &x| acc.checked_mul(x))
}

pub fn discriminant(f: &Quartic) -> i64 {
    f.discriminant()
}

pub fn resolvent_cubic(f: &Quartic) -> Cubic {
    f.resolvent_cubic()
}

/// `v` is a square in `Q(sqrt(disc))`: zero, a rational square, or `disc`
/// times a rational square.
fn square_in_quadratic_field(v: i128, disc: i128) -> bool {
    v == 0 || exact_sqrt(v).is_some() || exact_sqrt(v * disc).is_some()
}

/// Galois group of the splitting field, via the resolvent cubic.
pub fn classify_galois(f: &Quartic) -> GaloisType {
    let disc = f.discriminant() as i128;
    let disc_square = exact_sqrt(disc).is_some();
    let cubic = f.resolvent_cubic();
    let roots = cubic.rational_roots();
    match roots.len() {
        0 if disc_square => GaloisType::A4,
        0 => GaloisType::S4,
        3 => GaloisType::V4,
        1 => {
            let t = roots[0];
            let [a3, a2, _, a0] = f.coefficients().map(|c| c as i128);
            let q1 = t * t - 4 * a0;
            let q2 = a3 * a3 - 4 * (a2 - t);
            if square_in_quadratic_field(q1, disc) && square_in_quadratic_field(q2, disc) {
                GaloisType::C4
            } else {
                GaloisType::D4
            }
        }
        n => unreachable!("resolvent of a separable quartic has {n} rational roots"),
    }
}

/// Check that every unramified prime up to `bound` has a factorization type
/// occurring as a cycle type in `g`.
pub fn cross_check_galois(f: &Quartic, g: GaloisType, bound: u64) -> Result<()> {
    let group = group_elements(g);
    let disc = f.discriminant();
    for p in (2..=bound).filter(|&p| is_prime(p) && disc % p as i64 != 0) {
        let t = factorization_type_mod_p(f, p)?;
        if !group.has_cycle_type(t) {
            return Err(Error::ClassificationMismatch {
                claimed: g.to_string(),
                p,
                observed: t.to_string(),
            });
        }
    }
    Ok(())
}

/// Exact classification, confirmed against Frobenius cycle types of the
/// unramified primes up to `bound`.
pub fn classify_galois_checked(f: &Quartic, bound: u64) -> Result<GaloisType> {
    let g = classify_galois(f);
    cross_check_galois(f, g, bound)?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a3: i64, a2: i64, a1: i64, a0: i64) -> Quartic {
        Quartic::new(a3, a2, a1, a0).unwrap()
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(q(0, 0, -1, 1).discriminant(), 229);
        assert_eq!(q(0, 0, 0, 1).discriminant(), 256);
        assert_eq!(q(0, 0, 8, 12).discriminant(), 331_776);
        assert_eq!(q(0, 0, 0, -2).discriminant(), -2048);
        assert_eq!(q(1, 1, 1, 1).discriminant(), 125);
    }

    #[test]
    fn resolvent_examples() {
        let r = q(0, 0, -1, 1).resolvent_cubic();
        assert_eq!((r.b2, r.b1, r.b0), (0, -4, -1));
        let r = q(0, 0, 0, 1).resolvent_cubic();
        assert_eq!((r.b2, r.b1, r.b0), (0, -4, 0));
        let r = q(0, 0, 0, -2).resolvent_cubic();
        assert_eq!((r.b2, r.b1, r.b0), (0, 8, 0));
        assert_eq!(r.rational_roots(), vec![0]);
        assert_eq!(q(0, 0, 0, 1).resolvent_cubic().rational_roots(), vec![-2, 0, 2]);
    }

    /// Numerical roots of the quartic give the resolvent's roots as
    /// `r1 r2 + r3 r4` and permutations.
    #[test]
    fn resolvent_roots_are_pair_sums() {
        use num_complex_free::*;
        let f = q(0, 0, -1, 1);
        let roots = durand_kerner(&f.ascending().map(|c| c as f64));
        let r = f.resolvent_cubic();
        for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
            let y = add(mul(roots[i], roots[j]), mul(roots[k], roots[l]));
            let val = {
                let y2 = mul(y, y);
                let y3 = mul(y2, y);
                add(
                    add(y3, scale(y2, r.b2 as f64)),
                    add(scale(y, r.b1 as f64), (r.b0 as f64, 0.0)),
                )
            };
            assert!(val.0.abs() < 1e-9 && val.1.abs() < 1e-9, "{val:?}");
        }
    }

    /// Minimal complex helpers for the numerical cross-check.
    mod num_complex_free {
        pub type C = (f64, f64);
        pub fn add(a: C, b: C) -> C {
            (a.0 + b.0, a.1 + b.1)
        }
        pub fn sub(a: C, b: C) -> C {
            (a.0 - b.0, a.1 - b.1)
        }
        pub fn mul(a: C, b: C) -> C {
            (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
        }
        pub fn scale(a: C, k: f64) -> C {
            (a.0 * k, a.1 * k)
        }
        fn div(a: C, b: C) -> C {
            let d = b.0 * b.0 + b.1 * b.1;
            ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
        }
        pub fn durand_kerner(asc: &[f64; 5]) -> [C; 4] {
            let eval = |x: C| {
                let mut acc = (0.0, 0.0);
                for &c in asc.iter().rev() {
                    acc = add(mul(acc, x), (c, 0.0));
                }
                acc
            };
            let mut z = [(0.4, 0.9), (0.4, 0.9), (0.4, 0.9), (0.4, 0.9)];
            for i in 1..4 {
                z[i] = mul(z[i - 1], (0.4, 0.9));
            }
            for _ in 0..500 {
                for i in 0..4 {
                    let mut den = (1.0, 0.0);
                    for j in 0..4 {
                        if i != j {
                            den = mul(den, sub(z[i], z[j]));
                        }
                    }
                    z[i] = sub(z[i], div(eval(z[i]), den));
                }
            }
            z
        }
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_galois(&q(0, 0, -1, 1)), GaloisType::S4);
        assert_eq!(classify_galois(&q(0, 0, 0, 1)), GaloisType::V4);
        assert_eq!(classify_galois(&q(0, 0, 0, -2)), GaloisType::D4);
        assert_eq!(classify_galois(&q(0, 0, 8, 12)), GaloisType::A4);
        assert_eq!(classify_galois(&q(1, 1, 1, 1)), GaloisType::C4);
        // x^4 - 10x^2 + 1 (sqrt2 + sqrt3) is V4; x^4 + 4x^2 + 2 is C4.
        assert_eq!(classify_galois(&q(0, -10, 0, 1)), GaloisType::V4);
        assert_eq!(classify_galois(&q(0, 4, 0, 2)), GaloisType::C4);
        assert_eq!(classify_galois(&q(0, 0, 0, 2)), GaloisType::D4);
    }

    #[test]
    fn classification_survives_frobenius_cross_check() {
        for f in [
            q(0, 0, -1, 1),
            q(0, 0, 0, 1),
            q(0, 0, 0, -2),
            q(0, 0, 8, 12),
            q(1, 1, 1, 1),
            q(0, -10, 0, 1),
            q(0, 4, 0, 2),
            q(3, -2, 5, 7),
        ] {
            classify_galois_checked(&f, 3000).unwrap();
        }
        // C4 admits no (1,1,2) primes, so x^4 - 2 cannot pass as C4.
        let err = cross_check_galois(&q(0, 0, 0, -2), GaloisType::C4, 3000).unwrap_err();
        assert!(matches!(err, Error::ClassificationMismatch { .. }));
        assert!(err.is_tripwire());
    }

    #[test]
    fn reducible_inputs_rejected() {
        // (x^2 - 2x + 2)(x^2 + 2x + 2)
        assert!(matches!(Quartic::new(0, 0, 0, 4), Err(Error::Reducible(_))));
        assert!(matches!(Quartic::new(0, 0, 0, -1), Err(Error::Reducible(_))));
        assert!(matches!(Quartic::new(0, 0, 1, 0), Err(Error::Reducible(_))));
        // (x^2 + 1)^2
        assert!(matches!(Quartic::new(0, 2, 0, 1), Err(Error::Reducible(_))));
        // (x^2 + x + 1)(x^2 - x + 2)
        assert!(matches!(Quartic::new(0, 2, 1, 2), Err(Error::Reducible(_))));
        // (x - 3)(x^3 + 1) = x^4 - 3x^3 + x - 3
        assert!(matches!(Quartic::new(-3, 0, 1, -3), Err(Error::Reducible(_))));
    }

    /// Brute-force irreducibility: no rational root among divisors, and no
    /// monic quadratic factor with small coefficients dividing f.
    fn irreducible_oracle(c: [i64; 4]) -> bool {
        let [a3, a2, a1, a0] = c.map(|x| x as i128);
        if a0 == 0 {
            return false;
        }
        let f = |x: i128| (((x + a3) * x + a2) * x + a1) * x + a0;
        for d in 1..=a0.abs() {
            if a0 % d == 0 && (f(d) == 0 || f(-d) == 0) {
                return false;
            }
        }
        // Divide by x^2 + b x + c for |b| <= 40, c | a0.
        for c0 in -a0.abs()..=a0.abs() {
            if c0 == 0 || a0 % c0 != 0 {
                continue;
            }
            for b in -40..=40i128 {
                // long division of [1, a3, a2, a1, a0] by [1, b, c0]
                let mut r = [1, a3, a2, a1, a0];
                for i in 0..3 {
                    let lead = r[i];
                    r[i + 1] -= lead * b;
                    r[i + 2] -= lead * c0;
                }
                if r[3] == 0 && r[4] == 0 {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn irreducibility_matches_oracle() {
        let mut n = 0;
        for a3 in -3..=3 {
            for a2 in -3..=3 {
                for a1 in -3..=3 {
                    for a0 in -4..=4 {
                        let expect = irreducible_oracle([a3, a2, a1, a0]);
                        let got = Quartic::new(a3, a2, a1, a0).is_ok();
                        assert_eq!(got, expect, "{:?}", [a3, a2, a1, a0]);
                        n += got as usize;
                    }
                }
            }
        }
        assert!(n > 1000);
    }

    #[test]
    fn parsing_and_printing() {
        let f = Quartic::parse("0 0 -1 1").unwrap();
        assert_eq!(f.canonical(), "x^4+0*x^3+0*x^2-1*x+1");
        assert_eq!(f.pretty(), "x^4 - x + 1");
        assert_eq!(Quartic::parse(&f.canonical()).unwrap(), f);
        assert_eq!(Quartic::parse("x^4 - x + 1").unwrap(), f);
        assert_eq!(Quartic::parse("1 - x + x^4").unwrap(), f);
        assert_eq!(
            Quartic::parse("x^4+x^3+x^2+x+1").unwrap(),
            Quartic::new(1, 1, 1, 1).unwrap()
        );
        assert_eq!(
            Quartic::parse("x^4 + 8*x + 12").unwrap().coefficients(),
            [0, 0, 8, 12]
        );
        assert!(matches!(
            Quartic::parse("2*x^4 + 1"),
            Err(Error::Parse { .. })
        ));
        assert!(Quartic::parse("x^5 + 1").is_err());
        assert!(Quartic::parse("x^4 + y").is_err());
        assert!(Quartic::parse("x^4 + 4").is_err());
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(json, "\"x^4+0*x^3+0*x^2-1*x+1\"");
        assert_eq!(serde_json::from_str::<Quartic>(&json).unwrap(), f);
    }

    #[test]
    fn factorization_type_strings() {
        for t in FactorizationType::ALL {
            assert_eq!(t.to_string().parse::<FactorizationType>().unwrap(), t);
            assert_eq!(t.parts().iter().map(|&x| x as u32).sum::<u32>(), 4);
        }
        assert_eq!(FactorizationType::OneOneTwo.to_string(), "(1,1,2)");
    }
}
