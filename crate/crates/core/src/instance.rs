//! Problem instances: the processing-time matrix with missing operations,
//! due dates and weights, plus the random generator and the text format.

use std::fmt::Write as _;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Stream};

/// Largest processing time the generator draws and the parser accepts.
pub const MAX_PROCESSING_TIME: u32 = 100;

/// A permutation flowshop instance. A processing time of zero marks a
/// missing operation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    name: String,
    missing_percent: u32,
    n_jobs: usize,
    n_machines: usize,
    /// Row-major, `n_jobs` rows of `n_machines` entries.
    processing_times: Vec<u32>,
    due_dates: Vec<u64>,
    weights: Vec<u64>,
}

impl Instance {
    /// Builds an instance from its rows, validating every invariant.
    pub fn new(
        name: impl Into<String>,
        missing_percent: u32,
        processing_times: Vec<Vec<u32>>,
        due_dates: Vec<u64>,
        weights: Vec<u64>,
    ) -> Result<Self> {
        let n_jobs = processing_times.len();
        if n_jobs == 0 {
            return Err(Error::Config("an instance needs at least one job".into()));
        }
        let n_machines = processing_times[0].len();
        if n_machines == 0 {
            return Err(Error::Config("an instance needs at least one machine".into()));
        }
        if let Some(j) = processing_times.iter().position(|r| r.len() != n_machines) {
            return Err(Error::Dimension(format!(
                "job {j} has {} processing times, expected {n_machines}",
                processing_times[j].len()
            )));
        }
        if due_dates.len() != n_jobs || weights.len() != n_jobs {
            return Err(Error::Dimension(format!(
                "{} due dates and {} weights for {n_jobs} jobs",
                due_dates.len(),
                weights.len()
            )));
        }
        let flat: Vec<u32> = processing_times.into_iter().flatten().collect();
        if let Some(p) = flat.iter().find(|&&p| p > MAX_PROCESSING_TIME) {
            return Err(Error::Config(format!(
                "processing time {p} outside [0, {MAX_PROCESSING_TIME}]"
            )));
        }
        if weights.contains(&0) {
            return Err(Error::Config("weights must be at least 1".into()));
        }
        if flat.iter().all(|&p| p == 0) {
            return Err(Error::Config("every processing time is zero".into()));
        }
        Ok(Self {
            name: name.into(),
            missing_percent,
            n_jobs,
            n_machines,
            processing_times: flat,
            due_dates,
            weights,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Nominal missing-operation percentage recorded with the instance.
    pub fn missing_percent(&self) -> u32 {
        self.missing_percent
    }

    pub fn n_jobs(&self) -> usize {
        self.n_jobs
    }

    pub fn n_machines(&self) -> usize {
        self.n_machines
    }

    /// Processing time of `job` on `machine`.
    #[inline]
    pub fn processing_time(&self, job: usize, machine: usize) -> u32 {
        self.processing_times[job * self.n_machines + machine]
    }

    /// The processing times of one job, one entry per machine.
    #[inline]
    pub fn job_row(&self, job: usize) -> &[u32] {
        &self.processing_times[job * self.n_machines..(job + 1) * self.n_machines]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.processing_times.chunks(self.n_machines)
    }

    pub fn due_dates(&self) -> &[u64] {
        &self.due_dates
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Total processing time of `job` over all machines.
    pub fn total_work(&self, job: usize) -> u64 {
        self.job_row(job).iter().map(|&p| u64::from(p)).sum()
    }

    /// Fraction of zero entries in the processing-time matrix.
    pub fn zero_fraction(&self) -> f64 {
        let zeros = self.processing_times.iter().filter(|&&p| p == 0).count();
        zeros as f64 / self.processing_times.len() as f64
    }
}

/// Display name `{n}Jx{m}M-{p}%` with `p` the rounded missing percentage.
pub fn instance_name(n_jobs: usize, n_machines: usize, missing_prob: f64) -> String {
    format!("{n_jobs}Jx{n_machines}M-{}%", percent(missing_prob))
}

fn percent(prob: f64) -> u32 {
    (100.0 * prob).round() as u32
}

/// Parameters of the random instance generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n_jobs: usize,
    pub n_machines: usize,
    /// Probability that an operation is missing (processing time zero).
    pub missing_prob: f64,
    pub seed: u64,
    /// Due date of job `j` is `round(u * total_work(j))` with `u` uniform in
    /// this interval.
    #[serde(default = "default_tightness")]
    pub due_date_tightness: (f64, f64),
    /// Inclusive range of the integer job weights.
    #[serde(default = "default_weight_range")]
    pub weight_range: (u64, u64),
}

fn default_tightness() -> (f64, f64) {
    (1.0, 2.0)
}

fn default_weight_range() -> (u64, u64) {
    (1, 10)
}

impl GeneratorConfig {
    pub fn new(n_jobs: usize, n_machines: usize, missing_prob: f64, seed: u64) -> Self {
        Self {
            n_jobs,
            n_machines,
            missing_prob,
            seed,
            due_date_tightness: default_tightness(),
            weight_range: default_weight_range(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_jobs == 0 || self.n_machines == 0 {
            return Err(Error::Config("jobs and machines must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.missing_prob) {
            return Err(Error::Config(format!(
                "missing probability {} outside [0, 1]",
                self.missing_prob
            )));
        }
        if self.missing_prob == 1.0 {
            return Err(Error::Config(
                "missing probability 1 leaves no operation to schedule".into(),
            ));
        }
        let (lo, hi) = self.due_date_tightness;
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::Config(format!("bad due-date tightness [{lo}, {hi}]")));
        }
        let (wlo, whi) = self.weight_range;
        if wlo < 1 || wlo > whi {
            return Err(Error::Config(format!("bad weight range [{wlo}, {whi}]")));
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        instance_name(self.n_jobs, self.n_machines, self.missing_prob)
    }
}

/// Draws a random instance.
///
/// Every cell takes one uniform draw from the mask stream and one value in
/// `1..=100` from the processing-time stream; the cell is missing when the
/// mask draw falls below `missing_prob`. Two configurations that differ only
/// in `missing_prob` therefore share their nonzero values, and the zeros of
/// the lower probability are a subset of the zeros of the higher one.
pub fn generate_instance(cfg: &GeneratorConfig) -> Result<Instance> {
    cfg.validate()?;
    let cells = cfg.n_jobs * cfg.n_machines;
    let mut mask_rng = rng::stream(cfg.seed, Stream::MissingMask);
    let mut value_rng = rng::stream(cfg.seed, Stream::ProcessingTimes);

    let flat = loop {
        let flat: Vec<u32> = (0..cells)
            .map(|_| {
                let missing = mask_rng.gen::<f64>() < cfg.missing_prob;
                let value = value_rng.gen_range(1..=MAX_PROCESSING_TIME);
                if missing {
                    0
                } else {
                    value
                }
            })
            .collect();
        if flat.iter().any(|&p| p > 0) {
            break flat;
        }
        log::debug!("redrawing all-zero processing-time matrix");
    };

    let rows: Vec<Vec<u32>> = flat.chunks(cfg.n_machines).map(<[u32]>::to_vec).collect();
    let (lo, hi) = cfg.due_date_tightness;
    let mut due_rng = rng::stream(cfg.seed, Stream::DueDates);
    let due_dates = rows
        .iter()
        .map(|row| {
            let work: u64 = row.iter().map(|&p| u64::from(p)).sum();
            let u = if lo < hi { due_rng.gen_range(lo..=hi) } else { lo };
            (u * work as f64).round() as u64
        })
        .collect();
    let mut weight_rng = rng::stream(cfg.seed, Stream::Weights);
    let (wlo, whi) = cfg.weight_range;
    let weights = (0..cfg.n_jobs)
        .map(|_| weight_rng.gen_range(wlo..=whi))
        .collect();

    Instance::new(
        cfg.name(),
        percent(cfg.missing_prob),
        rows,
        due_dates,
        weights,
    )
}

/// Writes the text form of `inst`:
///
/// ```text
/// name
/// n m p_percent
/// n lines of m processing times
/// n due dates
/// n weights
/// ```
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", inst.name);
    let _ = writeln!(
        out,
        "{} {} {}",
        inst.n_jobs, inst.n_machines, inst.missing_percent
    );
    for row in inst.rows() {
        out.push_str(&join(row));
        out.push('\n');
    }
    out.push_str(&join(&inst.due_dates));
    out.push('\n');
    out.push_str(&join(&inst.weights));
    out.push('\n');
    out
}

fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
    raw: &'a str,
}

fn tokenize(raw: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in raw.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token {
                    text: &raw[s..i],
                    column: s + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token {
            text: &raw[s..],
            column: s + 1,
        });
    }
    tokens
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_int(line: usize, tok: &Token<'_>, max: u64, what: &str) -> Result<u64> {
    let value: u64 = tok.text.parse().map_err(|_| {
        parse_err(
            line,
            tok.column,
            format!("{what}: `{}` is not a non-negative integer", tok.text),
        )
    })?;
    if value > max {
        return Err(parse_err(
            line,
            tok.column,
            format!("{what}: {value} out of range [0, {max}]"),
        ));
    }
    Ok(value)
}

/// Parses the text form written by [`serialize_instance`]. Blank lines and
/// lines starting with `#` are ignored.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, raw)| Line {
            number: i + 1,
            tokens: tokenize(raw),
            raw,
        })
        .filter(|l| !l.tokens.is_empty() && !l.tokens[0].text.starts_with('#'));
    let eof_line = text.lines().count() + 1;

    let name_line = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing instance name"))?;
    let name = name_line.raw.trim().to_string();

    let header = lines
        .next()
        .ok_or_else(|| parse_err(eof_line, 1, "missing `n m p_percent` header"))?;
    if header.tokens.len() != 3 {
        return Err(parse_err(
            header.number,
            1,
            format!("expected `n m p_percent`, found {} tokens", header.tokens.len()),
        ));
    }
    let n = parse_int(header.number, &header.tokens[0], u32::MAX as u64, "job count")? as usize;
    let m = parse_int(header.number, &header.tokens[1], u32::MAX as u64, "machine count")? as usize;
    let pct = parse_int(header.number, &header.tokens[2], 100, "missing percent")? as u32;
    if n == 0 || m == 0 {
        return Err(parse_err(header.number, 1, "job and machine counts must be positive"));
    }

    let mut row_of = |what: &str, len: usize, max: u64| -> Result<Vec<u64>> {
        let line = lines.next().ok_or_else(|| {
            parse_err(eof_line, 1, format!("dimension mismatch: missing {what} line"))
        })?;
        if line.tokens.len() != len {
            let col = line.tokens.get(len).map_or(line.raw.len() + 1, |t| t.column);
            return Err(parse_err(
                line.number,
                col,
                format!(
                    "dimension mismatch: {what} line has {} values, expected {len}",
                    line.tokens.len()
                ),
            ));
        }
        line.tokens
            .iter()
            .map(|t| parse_int(line.number, t, max, what))
            .collect()
    };

    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let row = row_of(
            &format!("processing times of job {j}"),
            m,
            u64::from(MAX_PROCESSING_TIME),
        )?;
        rows.push(row.into_iter().map(|p| p as u32).collect::<Vec<_>>());
    }
    let due_dates = row_of("due dates", n, u64::MAX)?;
    let weights = row_of("weights", n, u64::MAX)?;

    if let Some(extra) = lines.next() {
        return Err(parse_err(
            extra.number,
            extra.tokens[0].column,
            "dimension mismatch: unexpected data after the weights line",
        ));
    }
    if let Some(j) = weights.iter().position(|&w| w == 0) {
        return Err(parse_err(eof_line, 1, format!("weight of job {j} is zero")));
    }
    Instance::new(name, pct, rows, due_dates, weights)
}
