//! Counting the square-free `q <= x` whose twist is everywhere locally
//! solvable, and the constants that describe the growth of that count.

use std::fs;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{gamma_eval, primes_up_to, PrimeTable};
use crate::criterion::{bad_prime_conditions_hold, CriterionBundle};
use crate::error::{Error, Result};
use crate::quartic::{mean_rho, GaloisType, Quartic, RootTable};
use crate::series::{empirical_mean, FrobenianRho};

/// Environment variable naming the directory for cached root tables.
pub const CACHE_DIR_ENV: &str = "QUARTIC_ELS_CACHE_DIR";

/// Block size for parallel counting. Fixed, so the partition never depends
/// on the number of threads.
const BLOCK: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountCheckpoint {
    pub x: u64,
    #[serde(rename = "L")]
    pub lx: u64,
    /// `L(x) (ln x)^m / x`
    pub c: f64,
}

/// `m = 1 - m(rho)`, the power of `ln x` in the growth of `L(x)`.
pub fn log_exponent(g: GaloisType) -> Ratio<i64> {
    Ratio::from_integer(1) - mean_rho(g)
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn normalized_count(x: u64, lx: u64, m: f64) -> f64 {
    if x < 2 {
        return 0.0;
    }
    let xf = x as f64;
    lx as f64 * xf.ln().powf(m) / xf
}

/// Everything needed to decide the criterion for every `q` up to a bound
/// without further factoring or solver work.
pub struct CountContext<'a> {
    pub bundle: &'a CriterionBundle,
    pub spf: &'a PrimeTable,
    pub roots: &'a RootTable,
}

impl CountContext<'_> {
    pub fn limit(&self) -> u64 {
        (self.spf.limit() as u64).min(self.roots.limit())
    }

    /// Whether `q` is square-free and its twist is everywhere locally
    /// solvable.
    pub fn counts(&self, q: u64) -> bool {
        let mut n = q as u32;
        while n > 1 {
            let p = self.spf.spf(n);
            n /= p;
            if n.is_multiple_of(p) {
                return false;
            }
            let p = p as u64;
            if !self.bundle.is_bad(p) && !self.roots.get(p).unwrap_or(false) {
                return false;
            }
        }
        bad_prime_conditions_hold(self.bundle, q)
    }

    /// Counts in `(lo, hi]` split at the checkpoints: entry `i` covers
    /// `(checkpoints[i-1], checkpoints[i]]`.
    fn count_block(&self, lo: u64, hi: u64, checkpoints: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; checkpoints.len()];
        let mut slot = checkpoints.partition_point(|&c| c <= lo);
        for q in lo + 1..=hi {
            while slot < checkpoints.len() && checkpoints[slot] < q {
                slot += 1;
            }
            if slot == checkpoints.len() {
                break;
            }
            if self.counts(q) {
                out[slot] += 1;
            }
        }
        out
    }
}

fn validate_checkpoints(ctx: &CountContext<'_>, checkpoints: &[u64]) -> Result<u64> {
    if checkpoints.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("checkpoints must be sorted".into()));
    }
    let top = checkpoints.last().copied().unwrap_or(0);
    if top > ctx.limit() {
        return Err(Error::TableLimit {
            n: top,
            limit: ctx.limit(),
        });
    }
    Ok(top)
}

fn assemble(g: GaloisType, checkpoints: &[u64], per_interval: Vec<u64>) -> Vec<CountCheckpoint> {
    let m = ratio_f64(log_exponent(g));
    let mut total = 0;
    checkpoints
        .iter()
        .zip(per_interval)
        .map(|(&x, k)| {
            total += k;
            CountCheckpoint {
                x,
                lx: total,
                c: normalized_count(x, total, m),
            }
        })
        .collect()
}

/// `L(x)` at each checkpoint, counting in fixed blocks on the current rayon
/// pool and summing in block order.
pub fn count_l(ctx: &CountContext<'_>, checkpoints: &[u64]) -> Result<Vec<CountCheckpoint>> {
    let top = validate_checkpoints(ctx, checkpoints)?;
    let blocks: Vec<(u64, u64)> = (0..top.div_ceil(BLOCK))
        .map(|b| (b * BLOCK, ((b + 1) * BLOCK).min(top)))
        .collect();
    let partials: Vec<Vec<u64>> = blocks
        .par_iter()
        .map(|&(lo, hi)| ctx.count_block(lo, hi, checkpoints))
        .collect();
    let mut sums = vec![0u64; checkpoints.len()];
    for part in partials {
        for (s, v) in sums.iter_mut().zip(part) {
            *s += v;
        }
    }
    Ok(assemble(ctx.bundle.galois, checkpoints, sums))
}

/// The same count over `parts` contiguous ranges, one task each.
pub fn count_l_partitioned(
    ctx: &CountContext<'_>,
    checkpoints: &[u64],
    parts: usize,
) -> Result<Vec<CountCheckpoint>> {
    let top = validate_checkpoints(ctx, checkpoints)?;
    let parts = parts.max(1) as u64;
    let bounds: Vec<(u64, u64)> = (0..parts)
        .map(|i| (top * i / parts, top * (i + 1) / parts))
        .collect();
    let partials: Vec<Vec<u64>> = bounds
        .par_iter()
        .map(|&(lo, hi)| ctx.count_block(lo, hi, checkpoints))
        .collect();
    let mut sums = vec![0u64; checkpoints.len()];
    for part in partials {
        for (s, v) in sums.iter_mut().zip(part) {
            *s += v;
        }
    }
    Ok(assemble(ctx.bundle.galois, checkpoints, sums))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub checkpoints: Vec<CountCheckpoint>,
    #[serde(with = "ratio_string")]
    pub m_used: Ratio<i64>,
    /// `c` at the last checkpoint.
    pub cf_estimate: f64,
    /// Relative change of `c` between the last two checkpoints.
    pub trend: f64,
}

mod ratio_string {
    use num_rational::Ratio;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

/// Recomputes `c` with the exponent for `g` and reports the last value and
/// its relative change. No extrapolation is attempted.
pub fn fit_cf(checkpoints: &[CountCheckpoint], g: GaloisType) -> Result<FitReport> {
    let usable: Vec<CountCheckpoint> = checkpoints.iter().copied().filter(|c| c.x >= 100).collect();
    if usable.len() < 2 {
        return Err(Error::InvalidArgument(
            "fitting needs at least two checkpoints with x >= 100".into(),
        ));
    }
    let m_used = log_exponent(g);
    let m = ratio_f64(m_used);
    let points: Vec<CountCheckpoint> = usable
        .iter()
        .map(|c| CountCheckpoint {
            c: normalized_count(c.x, c.lx, m),
            ..*c
        })
        .collect();
    let last = points[points.len() - 1].c;
    let prev = points[points.len() - 2].c;
    let trend = if prev == 0.0 { f64::INFINITY } else { (last - prev) / prev };
    Ok(FitReport {
        checkpoints: points,
        m_used,
        cf_estimate: last,
        trend,
    })
}

/// `(1/Gamma(m)) prod_{p <= b} (1 + rho(p)/p) (1 - 1/p)^m` for a prime rule.
pub fn euler_product_truncated(rule: impl Fn(u64) -> Result<bool>, m: f64, b: u64) -> Result<f64> {
    if !(m > 0.0 && m <= 1.0) {
        return Err(Error::InvalidArgument(format!("exponent {m} outside (0, 1]")));
    }
    let mut log_sum = 0.0f64;
    for p in primes_up_to(b) {
        let pf = p as f64;
        if rule(p)? {
            log_sum += (1.0 / pf).ln_1p();
        }
        log_sum += m * (-1.0 / pf).ln_1p();
    }
    Ok(log_sum.exp() / gamma_eval(m)?)
}

/// Truncated Euler product for the constant of `sum_{n <= x} rho(n)`.
pub fn euler_cf_truncated(rho: &FrobenianRho, m: Ratio<i64>, b: u64) -> Result<f64> {
    euler_product_truncated(|p| rho.at_prime(p), ratio_f64(m), b)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub bound: u64,
    pub fraction: f64,
    #[serde(with = "ratio_string")]
    pub target: Ratio<i64>,
    pub tolerance: f64,
    pub pass: bool,
}

pub const DENSITY_TOLERANCE: f64 = 0.01;

/// Fraction of unexceptional primes up to `b` at which f has a root,
/// against the mean of the group.
pub fn density_check(rho: &FrobenianRho, g: GaloisType, b: u64, tolerance: f64) -> Result<DensityReport> {
    let fraction = empirical_mean(rho, &[], b)?;
    let target = mean_rho(g);
    Ok(DensityReport {
        bound: b,
        fraction,
        target,
        tolerance,
        pass: (fraction - ratio_f64(target)).abs() <= tolerance,
    })
}

/// Where root tables are cached, if anywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootCache {
    Disabled,
    Dir(PathBuf),
}

impl RootCache {
    /// The directory from the environment, else a subdirectory of the
    /// system temporary directory.
    pub fn from_env() -> RootCache {
        let dir = std::env::var_os(CACHE_DIR_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| std::env::temp_dir().join("quartic-els-cache"));
        RootCache::Dir(dir)
    }

    pub fn path_for(dir: &Path, f: &Quartic, xmax: u64) -> PathBuf {
        let [a3, a2, a1, a0] = f.coefficients();
        let key = format!("{a3},{a2},{a1},{a0};{xmax}");
        let digest = Sha256::digest(key.as_bytes());
        let hex: String = digest[..12].iter().map(|b| format!("{b:02x}")).collect();
        dir.join(format!("roots-{hex}.bin"))
    }

    /// Loads a matching table or builds one, writing it through a temporary
    /// file so readers never see a partial table.
    pub fn root_table(&self, f: &Quartic, xmax: u64) -> Result<RootTable> {
        let dir = match self {
            RootCache::Disabled => return Ok(RootTable::build(f, xmax)),
            RootCache::Dir(d) => d,
        };
        let path = Self::path_for(dir, f, xmax);
        if let Ok(file) = fs::File::open(&path) {
            if let Ok(t) = RootTable::read_from(BufReader::new(file)) {
                if t.coefficients() == f.coefficients() && t.limit() == xmax {
                    return Ok(t);
                }
            }
        }
        let table = RootTable::build(f, xmax);
        fs::create_dir_all(dir)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        table.write_to(BufWriter::new(fs::File::create(&tmp)?))?;
        fs::rename(&tmp, &path)?;
        Ok(table)
    }
}
