//! Monte Carlo scan over random pure two-qutrit states.
//!
//! Sample `i` is drawn from its own RNG stream, and the sample range is cut
//! into fixed chunks whose partial results are combined in index order, so a
//! report is bit-for-bit the same for any number of worker threads.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::chsh::{chsh_analysis, correlation_matrix_coeff, VIOLATION_TOLERANCE};
use crate::entanglement::concurrence_pure;
use crate::state::{sample_pure_state_at, Dims, PureState, Sampler, StateFile};
use crate::{Error, Result, C64};

const CHUNK: u64 = 4096;

/// Samples with concurrence below this are listed as near-separable.
pub const NEAR_SEPARABLE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    pub n_samples: u64,
    pub sampler: Sampler,
    pub seed: u64,
    pub histogram_bins: usize,
    /// Thread count; 0 uses the global rayon pool.
    pub workers: usize,
    /// How many leading samples to copy into the report verbatim.
    pub record_rows: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { n_samples: 1000, sampler: Sampler::default(), seed: 0, histogram_bins: 20, workers: 0, record_rows: 50 }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::InvalidConfig("n_samples must be at least 1".into()));
        }
        if self.histogram_bins == 0 {
            return Err(Error::InvalidConfig("histogram_bins must be at least 1".into()));
        }
        Ok(())
    }
}

/// `γ` and concurrence of one sampled state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SampleMetrics {
    pub gamma: f64,
    pub concurrence: f64,
}

pub fn evaluate_pure(psi: &PureState) -> Result<SampleMetrics> {
    let z = correlation_matrix_coeff(psi)?;
    Ok(SampleMetrics { gamma: chsh_analysis(&z).gamma, concurrence: concurrence_pure(psi) })
}

fn draw(cfg: &ScanConfig, index: u64) -> PureState {
    sample_pure_state_at(Dims::QUTRITS, cfg.sampler, cfg.seed, index)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub index: u64,
    pub gamma: f64,
    pub concurrence: f64,
    pub state: StateFile,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SampleRow {
    pub index: u64,
    pub amplitudes: Vec<[f64; 2]>,
    pub gamma: f64,
    pub concurrence: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub n_samples: u64,
    pub sampler: Sampler,
    pub seed: u64,
    pub max_gamma: f64,
    pub argmax_index: u64,
    pub argmax_state: StateFile,
    pub mean_gamma: f64,
    pub min_concurrence: f64,
    pub max_concurrence: f64,
    pub violation_count: u64,
    pub violations: Vec<Violation>,
    pub near_separable: Vec<u64>,
    pub concurrence_histogram: Vec<HistogramBin>,
    pub sample_rows: Vec<SampleRow>,
}

/// Upper end of the histogram range, the largest two-qutrit concurrence.
pub fn max_qutrit_concurrence() -> f64 {
    2.0 / 3f64.sqrt()
}

fn histogram_bin(c: f64, bins: usize) -> usize {
    let x = c / max_qutrit_concurrence() * bins as f64;
    (x.max(0.0) as usize).min(bins - 1)
}

#[derive(Clone, Debug)]
struct Partial {
    max_gamma: f64,
    argmax_index: u64,
    gamma_sum: f64,
    min_concurrence: f64,
    max_concurrence: f64,
    violations: Vec<(u64, SampleMetrics)>,
    near_separable: Vec<u64>,
    histogram: Vec<u64>,
}

impl Partial {
    fn empty(bins: usize) -> Self {
        Self {
            max_gamma: f64::NEG_INFINITY,
            argmax_index: 0,
            gamma_sum: 0.0,
            min_concurrence: f64::INFINITY,
            max_concurrence: f64::NEG_INFINITY,
            violations: Vec::new(),
            near_separable: Vec::new(),
            histogram: vec![0; bins],
        }
    }

    fn push(&mut self, index: u64, m: SampleMetrics) {
        if m.gamma > self.max_gamma {
            self.max_gamma = m.gamma;
            self.argmax_index = index;
        }
        self.gamma_sum += m.gamma;
        self.min_concurrence = self.min_concurrence.min(m.concurrence);
        self.max_concurrence = self.max_concurrence.max(m.concurrence);
        if m.gamma > 1.0 + VIOLATION_TOLERANCE {
            self.violations.push((index, m));
        }
        if m.concurrence < NEAR_SEPARABLE {
            self.near_separable.push(index);
        }
        let bin = histogram_bin(m.concurrence, self.histogram.len());
        self.histogram[bin] += 1;
    }

    /// `later` covers strictly higher indices, so ties keep the earlier argmax.
    fn merge(mut self, later: Partial) -> Self {
        if later.max_gamma > self.max_gamma {
            self.max_gamma = later.max_gamma;
            self.argmax_index = later.argmax_index;
        }
        self.gamma_sum += later.gamma_sum;
        self.min_concurrence = self.min_concurrence.min(later.min_concurrence);
        self.max_concurrence = self.max_concurrence.max(later.max_concurrence);
        self.violations.extend(later.violations);
        self.near_separable.extend(later.near_separable);
        for (a, b) in self.histogram.iter_mut().zip(later.histogram) {
            *a += b;
        }
        self
    }
}

fn scan_chunk(cfg: &ScanConfig, chunk: u64) -> Partial {
    let mut p = Partial::empty(cfg.histogram_bins);
    let end = ((chunk + 1) * CHUNK).min(cfg.n_samples);
    for index in chunk * CHUNK..end {
        let metrics = evaluate_pure(&draw(cfg, index)).expect("qutrit samples have qutrit dimensions");
        p.push(index, metrics);
    }
    p
}

fn scan_all(cfg: &ScanConfig) -> Partial {
    let chunks = cfg.n_samples.div_ceil(CHUNK);
    let partials: Vec<Partial> = (0..chunks).into_par_iter().map(|c| scan_chunk(cfg, c)).collect();
    partials.into_iter().fold(Partial::empty(cfg.histogram_bins), Partial::merge)
}

pub fn run_scan(cfg: &ScanConfig) -> Result<ScanReport> {
    cfg.validate()?;
    let total = if cfg.workers == 0 {
        scan_all(cfg)
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start {} workers: {e}", cfg.workers)))?;
        pool.install(|| scan_all(cfg))
    };

    let width = max_qutrit_concurrence() / cfg.histogram_bins as f64;
    let concurrence_histogram = total
        .histogram
        .iter()
        .enumerate()
        .map(|(i, &count)| HistogramBin { bin_lo: i as f64 * width, bin_hi: (i + 1) as f64 * width, count })
        .collect();
    let violations = total
        .violations
        .iter()
        .map(|&(index, m)| Violation {
            index,
            gamma: m.gamma,
            concurrence: m.concurrence,
            state: StateFile::from(&draw(cfg, index)),
        })
        .collect();
    let sample_rows = (0..cfg.n_samples.min(cfg.record_rows as u64))
        .map(|index| {
            let psi = draw(cfg, index);
            let m = evaluate_pure(&psi)?;
            let amplitudes = psi.amplitudes().iter().map(|z| [z.re, z.im]).collect();
            Ok(SampleRow { index, amplitudes, gamma: m.gamma, concurrence: m.concurrence })
        })
        .collect::<Result<_>>()?;

    Ok(ScanReport {
        n_samples: cfg.n_samples,
        sampler: cfg.sampler,
        seed: cfg.seed,
        max_gamma: total.max_gamma,
        argmax_index: total.argmax_index,
        argmax_state: StateFile::from(&draw(cfg, total.argmax_index)),
        mean_gamma: total.gamma_sum / cfg.n_samples as f64,
        min_concurrence: total.min_concurrence,
        max_concurrence: total.max_concurrence,
        violation_count: total.violations.len() as u64,
        violations,
        near_separable: total.near_separable,
        concurrence_histogram,
        sample_rows,
    })
}

fn round_to(x: f64, decimals: u32) -> f64 {
    let f = 10f64.powi(decimals as i32);
    let r = (x * f).round() / f;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// One line of a table of sampled states, rounded for printing.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub index: u64,
    pub amplitudes: Vec<[f64; 2]>,
    pub gamma: f64,
}

impl TableRow {
    /// Amplitudes as `re+imi`, then `γ`, separated by tabs.
    pub fn format(&self, decimals: u32) -> String {
        let d = decimals as usize;
        let mut cells: Vec<String> =
            self.amplitudes.iter().map(|[re, im]| format!("{re:.d$}{}{:.d$}i", if *im < 0.0 { '-' } else { '+' }, im.abs())).collect();
        cells.push(format!("{:.d$}", self.gamma));
        cells.join("\t")
    }
}

/// The first `k` samples of `cfg` with amplitudes and `γ` rounded to
/// `decimals` places.
pub fn table_rows(cfg: &ScanConfig, k: usize, decimals: u32) -> Result<Vec<TableRow>> {
    cfg.validate()?;
    if k as u64 > cfg.n_samples {
        return Err(Error::InvalidConfig(format!("requested {k} rows from {} samples", cfg.n_samples)));
    }
    (0..k as u64)
        .map(|index| {
            let psi = draw(cfg, index);
            let gamma = round_to(evaluate_pure(&psi)?.gamma, decimals);
            let amplitudes = psi.amplitudes().iter().map(|z| [round_to(z.re, decimals), round_to(z.im, decimals)]).collect();
            Ok(TableRow { index, amplitudes, gamma })
        })
        .collect()
}

/// `γ` of the two-qutrit state whose (possibly truncated) amplitudes are
/// given in row-major order, after renormalizing.
pub fn renormalized_gamma(amplitudes: &[C64]) -> Result<f64> {
    let psi = PureState::normalized(Dims::QUTRITS, amplitudes.to_vec())?;
    Ok(evaluate_pure(&psi)?.gamma)
}

pub fn write_histogram_csv<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for bin in &report.concurrence_histogram {
        w.serialize(bin)?;
    }
    w.flush()?;
    Ok(())
}

fn amplitude_header() -> Vec<String> {
    let mut h: Vec<String> =
        (1..=3).flat_map(|m| (1..=3).flat_map(move |k| [format!("re{m}{k}"), format!("im{m}{k}")])).collect();
    h.push("gamma".into());
    h
}

/// Rows as `re11,im11,…,re33,im33,gamma`.
pub fn write_rows_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(amplitude_header())?;
    for row in rows {
        let mut rec: Vec<String> = row.amplitudes.iter().flat_map(|[re, im]| [re.to_string(), im.to_string()]).collect();
        rec.push(row.gamma.to_string());
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}
