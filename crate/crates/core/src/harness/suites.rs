use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{case_seed, gen_inclusion_family, gen_lattice_pair};
use super::report::SuiteReport;
use crate::convexfn::{epi_distance_report, guarded_min, pointwise_max, sample_approx, CellPA, Conjugate, EpiDistanceReport};
use crate::error::{Error, Result};
use crate::valuations::ValuationOracle;

pub const VALUATION_TOLERANCE: f64 = 1e-9;
pub const INCLUSION_EXCLUSION_TOLERANCE: f64 = 1e-8;
pub const CONTINUITY_TOLERANCE: f64 = 1e-2;

fn run_cases(
    suite: &str,
    seed: u64,
    cases: usize,
    tolerance: f64,
    defect: impl Fn(u64) -> Result<f64> + Sync,
) -> Result<SuiteReport> {
    let defects = (0..cases)
        .into_par_iter()
        .map(|case| {
            let s = case_seed(seed, case);
            Ok((s, defect(s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport::from_defects(suite, seed, tolerance, &defects))
}

/// `|Z(u ∨ v) + Z(u ∧ v) - Z(u) - Z(v)| / (1 + max |Z|)` over seeded lattice pairs.
pub fn valuation_identity_suite(
    z: &ValuationOracle<CellPA>,
    n: usize,
    cases: usize,
    seed: u64,
    tolerance: f64,
) -> Result<SuiteReport> {
    run_cases(&format!("valuation/{}/n{n}", z.name()), seed, cases, tolerance, |s| {
        let pair = gen_lattice_pair(s, n)?;
        let vals = [
            z.eval(&pair.max)?,
            z.eval(&pair.min)?,
            z.eval(&pair.u)?,
            z.eval(&pair.v)?,
        ];
        let scale = 1.0 + vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        Ok((vals[0] + vals[1] - vals[2] - vals[3]).abs() / scale)
    })
}

/// `Z(∧ u_j) = sum_{J != ∅} (-1)^{|J|-1} Z(∨_{j in J} u_j)` over seeded families
/// of `m` functions.
pub fn inclusion_exclusion_suite(
    z: &ValuationOracle<CellPA>,
    n: usize,
    m: usize,
    cases: usize,
    seed: u64,
    tolerance: f64,
) -> Result<SuiteReport> {
    if !(2..=4).contains(&m) {
        return Err(Error::InvalidInput(format!("family size {m} outside 2..=4")));
    }
    run_cases(&format!("inclexcl/{}/n{n}/m{m}", z.name()), seed, cases, tolerance, |s| {
        let (fs, _) = gen_inclusion_family(s, n, m)?;
        inclusion_exclusion_defect(z, &fs)
    })
}

pub fn inclusion_exclusion_defect(z: &ValuationOracle<CellPA>, fs: &[CellPA]) -> Result<f64> {
    let m = fs.len();
    let mut min = fs[0].clone();
    for f in &fs[1..] {
        min = guarded_min(&min, f)?
            .convex()
            .ok_or_else(|| Error::NotConvex("minimum of the family".into()))?;
    }
    let lhs = z.eval(&min)?;
    let mut scale = lhs.abs();
    let mut rhs = 0.0;
    for mask in 1usize..(1 << m) {
        let mut idx = (0..m).filter(|j| mask & (1 << j) != 0);
        let mut acc = fs[idx.next().expect("mask is nonzero")].clone();
        for j in idx {
            acc = pointwise_max(&acc, &fs[j])?;
        }
        let v = z.eval(&acc)?;
        scale = scale.max(v.abs());
        rhs += if mask.count_ones() % 2 == 1 { v } else { -v };
    }
    Ok((lhs - rhs).abs() / (1.0 + scale))
}

/// Values of `Z` along conjugates of tangent-plane approximations of a
/// smooth convex function on an interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuityReport {
    pub probe_counts: Vec<usize>,
    pub values: Vec<f64>,
    pub limit: f64,
    pub errors: Vec<f64>,
    pub monotone: bool,
    pub final_relative_error: f64,
    pub epi: EpiDistanceReport,
}

impl ContinuityReport {
    pub fn converged(&self, tolerance: f64) -> bool {
        self.monotone && self.final_relative_error <= tolerance
    }

    pub fn to_suite(&self, name: &str, tolerance: f64) -> SuiteReport {
        let mut r = SuiteReport::from_defects(
            name,
            0,
            tolerance,
            &[(0, if self.converged(tolerance) { 0.0 } else { f64::INFINITY })],
        );
        r.max_defect = self.final_relative_error;
        r
    }
}

/// A smooth convex function of one variable sampled on `[lo, hi]`.
pub struct SmoothTarget<'a> {
    pub f: &'a (dyn Fn(f64) -> f64 + Sync),
    pub grad: &'a (dyn Fn(f64) -> f64 + Sync),
    pub lo: f64,
    pub hi: f64,
}

fn approximant(t: &SmoothTarget<'_>, k: usize) -> Result<CellPA> {
    if k < 2 {
        return Err(Error::InvalidInput("at least two probes are needed".into()));
    }
    let probes: Vec<Vec<f64>> = (0..k)
        .map(|i| vec![t.lo + (t.hi - t.lo) * i as f64 / (k - 1) as f64])
        .collect();
    let f = |x: &[f64]| (t.f)(x[0]);
    let g = |x: &[f64]| vec![(t.grad)(x[0])];
    sample_approx(&f, Some(&g), &probes)?.conjugate()
}

/// Evaluates `Z` on the conjugate approximants for each probe count. The
/// limit is `limit` when known, else the value at sixteen times the largest
/// probe count.
pub fn continuity_suite(
    z: &ValuationOracle<CellPA>,
    target: &SmoothTarget<'_>,
    probe_counts: &[usize],
    limit: Option<f64>,
) -> Result<ContinuityReport> {
    if probe_counts.is_empty() {
        return Err(Error::EmptyInput);
    }
    let seq = probe_counts
        .par_iter()
        .map(|&k| approximant(target, k))
        .collect::<Result<Vec<_>>>()?;
    let values = seq.par_iter().map(|u| z.eval(u)).collect::<Result<Vec<_>>>()?;
    let kmax = *probe_counts.iter().max().expect("nonempty");
    let reference = approximant(target, 16 * kmax)?;
    let limit = match limit {
        Some(l) => l,
        None => z.eval(&reference)?,
    };
    let errors: Vec<f64> = values.iter().map(|v| (v - limit).abs()).collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let final_relative_error = errors.last().copied().unwrap_or(f64::INFINITY) / limit.abs().max(f64::MIN_POSITIVE);
    let lo = reference.min_value();
    let t_grid = [lo + 0.05, lo + 0.25, lo + 1.0];
    let epi = epi_distance_report(&seq, &reference, &t_grid)?;
    Ok(ContinuityReport {
        probe_counts: probe_counts.to_vec(),
        values,
        limit,
        errors,
        monotone,
        final_relative_error,
        epi,
    })
}
