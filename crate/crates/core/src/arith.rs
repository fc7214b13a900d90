//! Exact integer, modular and p-adic primitives.
//!
//! Everything here works on machine integers. The residue-class search in
//! [`crate::localsolve`] needs arbitrary precision and keeps its own helpers.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

const SPF_MAGIC: &[u8; 8] = b"SPFTABLE";

/// Largest limit a [`PrimeTable`] may be built for.
pub const PRIME_TABLE_MAX: u32 = 1 << 31;

/// Smallest-prime-factor table for `2..=limit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u32,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl PrimeTable {
    /// Linear sieve; `spf[n]` is filled exactly once for every composite.
    pub fn new(limit: u32) -> Result<Self> {
        if limit > PRIME_TABLE_MAX {
            return Err(Error::InvalidArgument(format!(
                "prime table limit {limit} exceeds 2^31"
            )));
        }
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { limit, spf, primes })
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    /// Smallest prime factor of `n`, for `2 <= n <= limit`.
    pub fn spf(&self, n: u32) -> u32 {
        assert!(n >= 2 && n <= self.limit, "spf({n}) outside table");
        self.spf[n as usize]
    }

    pub fn is_prime(&self, n: u32) -> bool {
        n >= 2 && n <= self.limit && self.spf[n as usize] == n
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Distinct prime factors of `n` in ascending order, or `None` when a
    /// square divides `n`.
    pub fn squarefree_factor(&self, mut n: u32) -> Option<Vec<u32>> {
        debug_assert!(n >= 1 && n <= self.limit);
        let mut out = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            n /= p;
            if n.is_multiple_of(p) {
                return None;
            }
            out.push(p);
        }
        Some(out)
    }

    /// Little-endian layout: magic, u64 limit, then one u32 per `n` in `2..=limit`.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        w.write_all(SPF_MAGIC)?;
        w.write_all(&(self.limit as u64).to_le_bytes())?;
        for &v in self.spf.iter().skip(2) {
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic)?;
        if &magic != SPF_MAGIC {
            return Err(Error::Format("missing SPFTABLE magic".into()));
        }
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf8)?;
        let limit = u64::from_le_bytes(buf8);
        if limit > PRIME_TABLE_MAX as u64 {
            return Err(Error::Format(format!("limit {limit} exceeds 2^31")));
        }
        let limit = limit as u32;
        let mut spf = vec![0u32; limit as usize + 1];
        let mut buf4 = [0u8; 4];
        for slot in spf.iter_mut().skip(2) {
            r.read_exact(&mut buf4)
                .map_err(|_| Error::Format("truncated spf entries".into()))?;
            *slot = u32::from_le_bytes(buf4);
        }
        if r.read(&mut buf4)? != 0 {
            return Err(Error::Format("trailing bytes after spf entries".into()));
        }
        let mut primes = Vec::new();
        for n in 2..=limit {
            let p = spf[n as usize];
            if p < 2 || p > n || n % p != 0 {
                return Err(Error::Format(format!("corrupt entry spf[{n}] = {p}")));
            }
            if p == n {
                primes.push(n);
            }
        }
        Ok(Self { limit, spf, primes })
    }
}

/// Primes up to `limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect()
}

/// Jacobi symbol `(a/n)` for odd `n >= 1`.
pub fn jacobi(a: i64, n: i64) -> Result<i8> {
    if n < 1 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "jacobi symbol needs an odd positive modulus, got {n}"
        )));
    }
    Ok(jacobi_u64(a.rem_euclid(n) as u64, n as u64))
}

/// Jacobi symbol for `0 <= a`, odd `n`; no argument checks.
pub(crate) fn jacobi_u64(mut a: u64, mut n: u64) -> i8 {
    a %= n;
    let mut sign = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && matches!(n % 8, 3 | 5) {
            sign = -sign;
        }
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Largest `e` with `p^e | n`.
pub fn valuation(n: i64, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::InvalidArgument("valuation of zero".into()));
    }
    if p < 2 {
        return Err(Error::InvalidArgument(format!("{p} is not a prime")));
    }
    let mut m = n.unsigned_abs();
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    Ok(e)
}

/// Whether the nonzero integer `n` is a square in `Q_p`.
pub fn is_padic_square(n: i64, p: u64) -> Result<bool> {
    let v = valuation(n, p)?;
    if v % 2 == 1 {
        return Ok(false);
    }
    let unit = n / (p as i64).pow(v);
    Ok(if p == 2 {
        unit.rem_euclid(8) == 1
    } else {
        jacobi_u64(unit.rem_euclid(p as i64) as u64, p) == 1
    })
}

/// Distinct prime factors of `n`, ascending, or `None` when `n` is not
/// square-free. Uses the table when given, trial division otherwise.
pub fn squarefree_factor(n: u64, table: Option<&PrimeTable>) -> Result<Option<Vec<u64>>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor zero".into()));
    }
    if let Some(t) = table {
        if n > t.limit() as u64 {
            return Err(Error::TableLimit {
                n,
                limit: t.limit() as u64,
            });
        }
        return Ok(t
            .squarefree_factor(n as u32)
            .map(|v| v.into_iter().map(u64::from).collect()));
    }
    let factors = factor_u64(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return Ok(None);
    }
    Ok(Some(factors.into_iter().map(|(p, _)| p).collect()))
}

pub fn is_squarefree(n: u64) -> bool {
    matches!(squarefree_factor(n, None), Ok(Some(_)))
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors of a nonzero integer, ascending.
pub fn prime_divisors(n: i64) -> Vec<u64> {
    factor_u64(n.unsigned_abs()).into_iter().map(|(p, _)| p).collect()
}

/// Prime factorization `(p, e)` with ascending `p`; empty for `n <= 1`.
pub fn factor_u64(n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        while m.is_multiple_of(p) && m > 1 {
            primes.push(p);
            m /= p;
        }
    }
    split_into(m, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n <= 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let mut c = 1;
    loop {
        if let Some(d) = pollard_brent(n, c) {
            split_into(d, out);
            split_into(n / d, out);
            return;
        }
        c += 1;
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q, m) = (2u64, 1u64, 1u64, 128u64);
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..m.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = num_integer::Integer::gcd(&q, &n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = num_integer::Integer::gcd(&x.abs_diff(ys), &n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// All positive divisors of `n >= 1`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

/// Integer square root of a nonnegative `i128`, if it is a perfect square.
pub fn exact_sqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = isqrt(n as u128) as i128;
    (r * r == n).then_some(r)
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function on `(0, 2]`.
pub fn gamma_eval(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= 2.0) {
        return Err(Error::InvalidArgument(format!(
            "gamma_eval is defined on (0, 2], got {x}"
        )));
    }
    Ok(lanczos_gamma(x))
}

fn lanczos_gamma(x: f64) -> f64 {
    use std::f64::consts::PI;
    if x < 0.5 {
        return PI / ((PI * x).sin() * lanczos_gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
}
