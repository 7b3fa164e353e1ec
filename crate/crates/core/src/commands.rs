//! The data-emitting pipelines behind the command-line tool. Every command
//! is a pure function of its [`RunConfig`]; writing files is left to the
//! caller.

use rayon::prelude::*;

use crate::empirics::{annulus_filter, ks_distance_values, EmpiricalDistribution};
use crate::ensembles::{EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::io::{meta_get, CurveTable, Meta, RecordTable};
use crate::laws::asymptotic::{
    bulk_overlap_law, density_large_n, density_triangular, edge_overlap_law, edge_profile, edge_s,
    EnsembleTag,
};
use crate::laws::exact::LawContext;
use crate::spectra::{spectral_records_with, Solver, SpectralRecord};
use crate::verify::{Check, VerificationReport};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Radial KS threshold used by [`cmd_compare`].
pub const COMPARE_RADIAL_KS: f64 = 0.02;
/// Annulus-conditioned overlap KS threshold used by [`cmd_compare`].
pub const COMPARE_OVERLAP_KS: f64 = 0.05;

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub ensemble: EnsembleKind,
    pub matrices: u64,
    pub seed: u64,
    pub workers: usize,
    pub points: usize,
    pub r_min: f64,
    pub r_max: f64,
    pub t_max: f64,
    pub s_min: f64,
    pub s_max: f64,
    /// Fixed radius for `overlap`.
    pub r: f64,
    pub annulus: (f64, f64),
    pub solver: Solver,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n: 10,
            ensemble: EnsembleKind::AiGaussian,
            matrices: 1000,
            seed: 42,
            workers: 1,
            points: 201,
            r_min: 0.0,
            r_max: 2.0,
            t_max: 20.0,
            s_min: -6.0,
            s_max: 6.0,
            r: 0.0,
            annulus: (0.0, 0.2),
            solver: Solver::Faer,
        }
    }
}

fn range_ok(lo: f64, hi: f64) -> bool {
    lo.is_finite() && hi.is_finite() && lo < hi
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.n < 2 || self.n > u32::MAX as usize {
            return bad(format!("--n must be >= 2, got {}", self.n));
        }
        if self.matrices == 0 {
            return bad("--matrices must be positive".into());
        }
        if self.workers == 0 {
            return bad("--workers must be >= 1".into());
        }
        if self.points < 2 {
            return bad(format!("--points must be >= 2, got {}", self.points));
        }
        if !range_ok(self.r_min, self.r_max) || self.r_min < 0.0 {
            return bad(format!("need 0 <= r-min < r-max, got {}..{}", self.r_min, self.r_max));
        }
        if !(self.t_max > 0.0 && self.t_max.is_finite()) {
            return bad(format!("--t-max must be positive, got {}", self.t_max));
        }
        if !range_ok(self.s_min, self.s_max) {
            return bad(format!("need s-min < s-max, got {}..{}", self.s_min, self.s_max));
        }
        if !(self.r >= 0.0 && self.r.is_finite()) {
            return bad(format!("--r must be >= 0, got {}", self.r));
        }
        let (lo, hi) = self.annulus;
        if !range_ok(lo, hi) || lo < 0.0 {
            return bad(format!("--annulus needs 0 <= lo < hi, got {lo}:{hi}"));
        }
        Ok(())
    }

    fn n32(&self) -> u32 {
        self.n as u32
    }

    fn base_meta(&self) -> Meta {
        vec![("version".into(), VERSION.into()), ("n".into(), self.n.to_string())]
    }
}

/// `points` equally spaced values on `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi - lo) / (points - 1) as f64;
    (0..points)
        .map(|k| if k + 1 == points { hi } else { lo + step * k as f64 })
        .collect()
}

/// Runs `f(0..count)` on a pool of `workers` threads; results in index order.
pub fn par_map_indices<R: Send>(
    workers: usize,
    count: u64,
    f: impl Fn(u64) -> R + Sync + Send,
) -> Result<Vec<R>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| (0..count).into_par_iter().map(&f).collect()))
}

/// Columns `r, rho_exact, rho_large_n, rho_triangular`.
pub fn cmd_density(cfg: &RunConfig) -> Result<CurveTable> {
    cfg.validate()?;
    let ctx = LawContext::<f64>::new(cfg.n32())?;
    let mut table = CurveTable::new(&["r", "rho_exact", "rho_large_n", "rho_triangular"]);
    for r in linspace(cfg.r_min, cfg.r_max, cfg.points) {
        table.push(vec![
            r,
            ctx.radial_density(r)?,
            density_large_n(cfg.n32(), r)?,
            density_triangular(r),
        ])?;
    }
    table.meta = cfg.base_meta();
    table.meta.push(("points".into(), cfg.points.to_string()));
    Ok(table)
}

/// Columns `t, pdf_exact, pdf_bulk, pdf_edge`, all as densities in `t` at
/// the fixed radius `cfg.r`. The bulk column is `N⁻¹·P(t/N)`, NaN outside
/// the bulk; the edge column is `N^{-1/2}·P_s(t/√N)` at `s = √N(r²/2 − 1)`.
pub fn cmd_overlap(cfg: &RunConfig) -> Result<CurveTable> {
    cfg.validate()?;
    let ctx = LawContext::<f64>::new(cfg.n32())?;
    let law = ctx.overlap_law(cfg.r)?;
    let nf = cfg.n as f64;
    let sn = nf.sqrt();
    let s = edge_s(cfg.n32(), cfg.r);
    let in_bulk = cfg.r < std::f64::consts::SQRT_2;
    let mut table = CurveTable::new(&["t", "pdf_exact", "pdf_bulk", "pdf_edge"]);
    for t in linspace(0.0, cfg.t_max, cfg.points) {
        let bulk = match (in_bulk, t > 0.0) {
            (false, _) => f64::NAN,
            (true, false) => 0.0,
            (true, true) => bulk_overlap_law(cfg.r, t / nf)? / nf,
        };
        let edge = if t > 0.0 {
            edge_overlap_law(EnsembleTag::AiDagger, s, t / sn)? / sn
        } else {
            0.0
        };
        table.push(vec![t, law.density(t)?, bulk, edge])?;
    }
    table.meta = cfg.base_meta();
    table.meta.push(("r".into(), cfg.r.to_string()));
    table.meta.push(("s".into(), s.to_string()));
    Ok(table)
}

/// Columns `s, theta_ai, theta_gin1, theta_gin2` on the `s` grid, then
/// `sigma, p_ai, p_gin1, p_gin2` on a σ grid over `[0, t_max]` at `s = 0`.
pub fn cmd_edge(cfg: &RunConfig) -> Result<CurveTable> {
    cfg.validate()?;
    let tags = [EnsembleTag::AiDagger, EnsembleTag::GinibreReal, EnsembleTag::GinibreComplex];
    let mut table = CurveTable::new(&[
        "s", "theta_ai", "theta_gin1", "theta_gin2", "sigma", "p_ai", "p_gin1", "p_gin2",
    ]);
    let ss = linspace(cfg.s_min, cfg.s_max, cfg.points);
    let sigmas = linspace(0.0, cfg.t_max, cfg.points);
    for (&s, &sigma) in ss.iter().zip(&sigmas) {
        let mut row = vec![s];
        row.extend(tags.iter().map(|&tag| edge_profile(tag, s)));
        row.push(sigma);
        for &tag in &tags {
            row.push(if sigma > 0.0 { edge_overlap_law(tag, 0.0, sigma)? } else { 0.0 });
        }
        table.push(row)?;
    }
    table.meta = vec![
        ("version".into(), VERSION.into()),
        ("sigma_law_s".into(), "0".into()),
    ];
    Ok(table)
}

/// Samples of one run, in matrix-index order.
#[derive(Clone, Debug, Default)]
pub struct SampleRun {
    pub records: Vec<SpectralRecord<f64>>,
    pub failures: Vec<(u64, String)>,
}

impl SampleRun {
    pub fn defective(&self) -> usize {
        self.records.iter().filter(|r| r.defective).count()
    }
}

/// Diagonalizes matrices `0..matrices` of `spec` on `workers` threads.
/// Solver failures are collected per index and the run continues.
pub fn sample_records(spec: &EnsembleSpec, matrices: u64, workers: usize, solver: Solver) -> Result<SampleRun> {
    let per = par_map_indices(workers, matrices, |k| {
        spectral_records_with(&spec.matrix::<f64>(k), k, solver)
    })?;
    let mut run = SampleRun::default();
    for (k, res) in per.into_iter().enumerate() {
        match res {
            Ok(recs) => run.records.extend(recs),
            Err(e) => run.failures.push((k as u64, e.to_string())),
        }
    }
    Ok(run)
}

/// Record table with columns `matrix_index, re_z, im_z, t, residual, defective`.
pub fn cmd_sample(cfg: &RunConfig) -> Result<RecordTable> {
    cfg.validate()?;
    let spec = EnsembleSpec::new(cfg.ensemble, cfg.n, cfg.seed)?;
    let run = sample_records(&spec, cfg.matrices, cfg.workers, cfg.solver)?;
    let mut meta = vec![
        ("seed".into(), cfg.seed.to_string()),
        ("version".into(), VERSION.into()),
        ("ensemble".into(), cfg.ensemble.to_string()),
        ("n".into(), cfg.n.to_string()),
        ("matrices".into(), cfg.matrices.to_string()),
        ("rows".into(), run.records.len().to_string()),
        ("defective".into(), run.defective().to_string()),
        ("failures".into(), run.failures.len().to_string()),
    ];
    for (k, why) in &run.failures {
        meta.push(("failed_matrix".into(), format!("{k} {why}")));
    }
    Ok(RecordTable {
        records: run.records,
        meta,
    })
}

/// Entries of the sampled matrices: `matrix_index, row, col, re, im`.
pub fn dump_matrices(cfg: &RunConfig) -> Result<CurveTable> {
    cfg.validate()?;
    let spec = EnsembleSpec::new(cfg.ensemble, cfg.n, cfg.seed)?;
    let mut table = CurveTable::new(&["matrix_index", "row", "col", "re", "im"]);
    for k in 0..cfg.matrices {
        let j = spec.matrix::<f64>(k);
        for r in 0..cfg.n {
            for c in 0..cfg.n {
                let z = j.get(r, c);
                table.push(vec![k as f64, r as f64, c as f64, z.re, z.im])?;
            }
        }
    }
    table.meta = vec![
        ("seed".into(), cfg.seed.to_string()),
        ("ensemble".into(), cfg.ensemble.to_string()),
        ("n".into(), cfg.n.to_string()),
    ];
    Ok(table)
}

/// KS of the unflagged radii against the exact radial CDF.
pub fn radial_ks(ctx: &LawContext<f64>, records: &[SpectralRecord<f64>]) -> Result<f64> {
    let radii: Vec<f64> = records.iter().filter(|r| !r.defective).map(|r| r.radius()).collect();
    let emp = EmpiricalDistribution::new(radii)?;
    let cdf = ctx.radial_cdf_sorted(emp.samples())?;
    ks_distance_values(&emp, &cdf)
}

/// KS of the unflagged `t` inside `[lo, hi)` against `P_r̄`; also returns the
/// number of samples used and of defective records excluded.
pub fn annulus_overlap_ks(
    ctx: &LawContext<f64>,
    records: &[SpectralRecord<f64>],
    (lo, hi): (f64, f64),
) -> Result<(f64, usize, usize)> {
    let ann = annulus_filter(records, lo, hi)?;
    let emp = EmpiricalDistribution::new(ann.usable_t())?;
    let cdf = ctx.overlap_law(ann.mid())?.cdf_sorted(emp.samples())?;
    Ok((ks_distance_values(&emp, &cdf)?, emp.count(), ann.defective))
}

/// Compares a record table with the exact AI† laws at the table's `N`
/// (from its footer, else `cfg.n`).
pub fn cmd_compare(cfg: &RunConfig, table: &RecordTable) -> Result<VerificationReport> {
    cfg.validate()?;
    let n: usize = match meta_get(&table.meta, "n") {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Parse { line: 0, message: format!("footer n: '{v}' is not an integer") })?,
        None => cfg.n,
    };
    let ctx = LawContext::<f64>::new(n as u32)?;
    let mut checks = Vec::new();
    checks.push(Check::timed("radial ks", COMPARE_RADIAL_KS, || radial_ks(&ctx, &table.records)));
    let mut used = 0;
    let mut excluded = 0;
    checks.push(Check::timed("annulus overlap ks", COMPARE_OVERLAP_KS, || {
        let (d, u, x) = annulus_overlap_ks(&ctx, &table.records, cfg.annulus)?;
        used = u;
        excluded = x;
        Ok(d)
    }));
    let mut report = VerificationReport::new(checks);
    let defective = table.records.iter().filter(|r| r.defective).count();
    report.counts = vec![
        ("n".into(), n.to_string()),
        ("records".into(), table.records.len().to_string()),
        ("defective_excluded".into(), defective.to_string()),
        ("annulus".into(), format!("{}:{}", cfg.annulus.0, cfg.annulus.1)),
        ("annulus_samples".into(), used.to_string()),
        ("annulus_defective_excluded".into(), excluded.to_string()),
    ];
    Ok(report)
}
