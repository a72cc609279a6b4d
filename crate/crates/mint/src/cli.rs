//! Command implementations behind the `mint` binary: corpus scoring,
//! constrained decoding, and tradeoff reports.
//!
//! Inputs are line-delimited JSON records ([`crate::corpus`]); outputs are
//! CSV files whose first line is a `#schema=...` version comment. All
//! commands are deterministic for fixed inputs and flags, independent of the
//! worker count.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

use crate::corpus::{read_jsonl, CorpusError, CorpusRecord};
use crate::lm::{LmError, NgramModel};
use crate::nac::{beam_decode, NacConfig, NacMode};
use crate::score::{aggregate_reports, mint_score, MintReport};
use crate::text::{TokenSeq, TokenizerOptions};
use crate::tradeoff::{fit_trend, mu_score, TradeoffPoint};

pub const SCORE_SCHEMA: &str = "#schema=mint-score.v1";
pub const DECODE_SCHEMA: &str = "#schema=mint-decode.v1";
pub const TRADEOFF_SCHEMA: &str = "#schema=mint-tradeoff.v1";

/// Command failure, classified for the process exit code: usage errors exit
/// 1, data errors 2, internal errors 3.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<LmError> for CliError {
    fn from(e: LmError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(e.to_string())
    }
}

fn csv_internal(e: csv::Error) -> CliError {
    CliError::Internal(e.to_string())
}

/// Counts reported back to the caller; any record or series error means the
/// process should exit with the data-error code.
#[derive(Debug, Default, Clone, Copy)]
pub struct Outcome {
    pub rows: usize,
    pub errors: usize,
}

pub fn load_records(path: &Path) -> Result<Vec<CorpusRecord>, CliError> {
    let file = std::fs::File::open(path)
        .map_err(|e| CliError::Data(format!("cannot open {}: {e}", path.display())))?;
    Ok(read_jsonl(std::io::BufReader::new(file))?)
}

fn run_with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(pool.install(f))
}

fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

// ---------------------------------------------------------------------------
// score
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Default)]
pub struct ScoreOptions {
    pub max_input_words: Option<usize>,
    pub workers: usize,
    pub tokenizer: TokenizerOptions,
}

/// Score every record's summary against its source and append a field-wise
/// mean row. Records without a summary produce an error entry instead of
/// aborting the run.
pub fn cmd_score<W: Write>(
    records: &[CorpusRecord],
    opts: &ScoreOptions,
    out: W,
) -> Result<Outcome, CliError> {
    let results: Vec<Result<MintReport, String>> = run_with_workers(opts.workers, || {
        records
            .par_iter()
            .map(|record| {
                let summary = record
                    .summary_tokens(&opts.tokenizer)
                    .ok_or_else(|| "missing summary".to_string())?;
                let source = record.source_tokens(&opts.tokenizer, opts.max_input_words);
                mint_score(&source, &summary).map_err(|e| e.to_string())
            })
            .collect()
    })?;

    let mut writer = score_csv_writer(out)?;
    let mut errors = 0;
    for (record, result) in records.iter().zip(&results) {
        match result {
            Ok(r) => writer
                .write_record([
                    record.id.as_str(),
                    "ok",
                    &r.summary_len.to_string(),
                    &r.fragment_count.to_string(),
                    &fmt6(r.p1),
                    &fmt6(r.p2),
                    &fmt6(r.p3),
                    &fmt6(r.p4),
                    &fmt6(r.lcsr),
                    &fmt6(r.chi),
                    &fmt6(r.mint),
                    &fmt6(r.density),
                    "",
                ])
                .map_err(csv_internal)?,
            Err(message) => {
                errors += 1;
                writer
                    .write_record([
                        record.id.as_str(),
                        "error",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        message,
                    ])
                    .map_err(csv_internal)?;
            }
        }
    }

    let reports: Vec<MintReport> = results.into_iter().flatten().collect();
    if let Ok(mean) = aggregate_reports(&reports) {
        writer
            .write_record([
                "",
                "mean",
                &fmt6(mean.summary_len),
                &fmt6(mean.fragment_count),
                &fmt6(mean.p1),
                &fmt6(mean.p2),
                &fmt6(mean.p3),
                &fmt6(mean.p4),
                &fmt6(mean.lcsr),
                &fmt6(mean.chi),
                &fmt6(mean.mint),
                &fmt6(mean.density),
                "",
            ])
            .map_err(csv_internal)?;
    }
    writer.flush()?;

    Ok(Outcome {
        rows: records.len(),
        errors,
    })
}

fn score_csv_writer<W: Write>(mut out: W) -> Result<csv::Writer<W>, CliError> {
    writeln!(out, "{SCORE_SCHEMA}")?;
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record([
            "id",
            "status",
            "summary_len",
            "fragment_count",
            "p1",
            "p2",
            "p3",
            "p4",
            "lcsr",
            "chi",
            "mint",
            "density",
            "error",
        ])
        .map_err(csv_internal)?;
    Ok(writer)
}

// ---------------------------------------------------------------------------
// decode
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct DecodeOptions {
    /// One decode per record per config, in the given order.
    pub configs: Vec<NacConfig>,
    pub max_input_words: Option<usize>,
    pub workers: usize,
    pub tokenizer: TokenizerOptions,
}

/// Decode every record's source under every config, annotating each output
/// with its score breakdown and its MINT against the (possibly truncated)
/// source it was decoded from.
pub fn cmd_decode<W: Write>(
    records: &[CorpusRecord],
    model: &NgramModel,
    opts: &DecodeOptions,
    out: W,
) -> Result<Outcome, CliError> {
    if opts.configs.is_empty() {
        return Err(CliError::Usage("no decode configurations given".into()));
    }
    for config in &opts.configs {
        config
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }

    type Row = Result<(Vec<String>, f64, f64, f64), String>;
    let results: Vec<Vec<Row>> = run_with_workers(opts.workers, || {
        records
            .par_iter()
            .map(|record| {
                let source = record.source_tokens(&opts.tokenizer, opts.max_input_words);
                opts.configs
                    .iter()
                    .map(|config| {
                        let decoded = beam_decode(model, &source, config)
                            .map_err(|e| e.to_string())?;
                        let summary = TokenSeq::from_tokens(decoded.tokens.clone());
                        let mint = mint_score(&source, &summary)
                            .map(|r| r.mint)
                            .map_err(|e| e.to_string())?;
                        Ok((
                            decoded.tokens,
                            decoded.model_logprob,
                            decoded.nac_logdiscount,
                            mint,
                        ))
                    })
                    .collect()
            })
            .collect()
    })?;

    let mut writer = decode_csv_writer(out)?;
    let mut errors = 0;
    let mut rows = 0;
    for (record, per_config) in records.iter().zip(&results) {
        for (config, row) in opts.configs.iter().zip(per_config) {
            rows += 1;
            let h = match config.mode {
                NacMode::Off => String::new(),
                _ => format!("{}", config.half_life),
            };
            match row {
                Ok((tokens, model_lp, nac, mint)) => writer
                    .write_record([
                        record.id.as_str(),
                        config.mode.as_str(),
                        &h,
                        "ok",
                        &tokens.join(" "),
                        &fmt6(*model_lp),
                        &fmt6(*nac),
                        &fmt6(*mint),
                        "",
                    ])
                    .map_err(csv_internal)?,
                Err(message) => {
                    errors += 1;
                    writer
                        .write_record([
                            record.id.as_str(),
                            config.mode.as_str(),
                            &h,
                            "error",
                            "",
                            "",
                            "",
                            "",
                            message,
                        ])
                        .map_err(csv_internal)?;
                }
            }
        }
    }
    writer.flush()?;

    Ok(Outcome { rows, errors })
}

fn decode_csv_writer<W: Write>(mut out: W) -> Result<csv::Writer<W>, CliError> {
    writeln!(out, "{DECODE_SCHEMA}")?;
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record([
            "id",
            "mode",
            "h",
            "status",
            "summary",
            "model_logprob",
            "nac_logdiscount",
            "mint",
            "error",
        ])
        .map_err(csv_internal)?;
    Ok(writer)
}

/// Expand a mode plus the requested half-lives into decode configs: one per
/// half-life for penalty/reward, a single config when the constraint is off.
pub fn expand_configs(base: &NacConfig, mode: NacMode, half_lives: &[f64]) -> Vec<NacConfig> {
    match mode {
        NacMode::Off => vec![NacConfig {
            mode,
            ..base.clone()
        }],
        _ => {
            let hs: &[f64] = if half_lives.is_empty() { &[2.0] } else { half_lives };
            hs.iter()
                .map(|&h| NacConfig {
                    mode,
                    half_life: h,
                    ..base.clone()
                })
                .collect()
        }
    }
}

// ---------------------------------------------------------------------------
// tradeoff
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct TradeoffOptions {
    pub phi: f64,
}

impl Default for TradeoffOptions {
    fn default() -> Self {
        Self { phi: 2.0 }
    }
}

/// A labeled series of tradeoff points.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<TradeoffPoint>,
}

/// Read a points CSV with the columns `series,label,abstractiveness,factuality`.
/// Series keep their order of first appearance.
pub fn read_points_csv<R: Read>(reader: R) -> Result<Vec<Series>, CliError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = csv_reader.headers().map_err(data_csv)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("points file is missing column {name:?}")))
    };
    let (c_series, c_label, c_a, c_f) = (
        col("series")?,
        col("label")?,
        col("abstractiveness")?,
        col("factuality")?,
    );

    let mut series: Vec<Series> = Vec::new();
    for (idx, row) in csv_reader.records().enumerate() {
        let row = row.map_err(data_csv)?;
        let line = idx + 2; // header occupies the first CSV line
        let parse = |i: usize, name: &str| -> Result<f64, CliError> {
            row.get(i)
                .unwrap_or("")
                .trim()
                .parse::<f64>()
                .map_err(|_| CliError::Data(format!("row {line}: bad {name} value")))
        };
        let point = TradeoffPoint::new(
            row.get(c_label).unwrap_or("").to_string(),
            parse(c_a, "abstractiveness")?,
            parse(c_f, "factuality")?,
        )
        .map_err(|e| CliError::Data(format!("row {line}: {e}")))?;
        let name = row.get(c_series).unwrap_or("").to_string();
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push(point),
            None => series.push(Series {
                name,
                points: vec![point],
            }),
        }
    }
    Ok(series)
}

fn data_csv(e: csv::Error) -> CliError {
    CliError::Data(e.to_string())
}

/// Read the per-record `mint` column of a score CSV (rows with status `ok`).
pub fn read_score_csv<R: Read>(reader: R) -> Result<Vec<(String, f64)>, CliError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = csv_reader.headers().map_err(data_csv)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("score file is missing column {name:?}")))
    };
    let (c_id, c_status, c_mint) = (col("id")?, col("status")?, col("mint")?);
    let mut rows = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(data_csv)?;
        if record.get(c_status) != Some("ok") {
            continue;
        }
        let mint: f64 = record
            .get(c_mint)
            .unwrap_or("")
            .parse()
            .map_err(|_| CliError::Data("bad mint value in score file".into()))?;
        rows.push((record.get(c_id).unwrap_or("").to_string(), mint));
    }
    Ok(rows)
}

/// Read an `id -> factuality` mapping from either a CSV with `id,factuality`
/// columns or a line-delimited record file carrying `factuality` fields.
pub fn read_factuality<R: Read>(mut reader: R) -> Result<Vec<(String, f64)>, CliError> {
    let mut raw = String::new();
    reader.read_to_string(&mut raw)?;
    if raw.trim_start().starts_with('{') {
        let records = read_jsonl(raw.as_bytes())?;
        return records
            .into_iter()
            .map(|r| {
                let f = r.factuality.ok_or_else(|| {
                    CliError::Data(format!("record {:?} has no factuality value", r.id))
                })?;
                Ok((r.id, f))
            })
            .collect();
    }
    let mut csv_reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(raw.as_bytes());
    let headers = csv_reader.headers().map_err(data_csv)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Data(format!("factuality file is missing column {name:?}")))
    };
    let (c_id, c_f) = (col("id")?, col("factuality")?);
    let mut rows = Vec::new();
    for record in csv_reader.records() {
        let record = record.map_err(data_csv)?;
        let f: f64 = record
            .get(c_f)
            .unwrap_or("")
            .parse()
            .map_err(|_| CliError::Data("bad factuality value".into()))?;
        rows.push((record.get(c_id).unwrap_or("").to_string(), f));
    }
    Ok(rows)
}

/// Join per-record scores with factuality values into a single series;
/// abstractiveness is the mint ratio expressed as a percentage.
pub fn join_scores_with_factuality(
    series_name: &str,
    scores: &[(String, f64)],
    factuality: &[(String, f64)],
) -> Result<Vec<Series>, CliError> {
    let lookup: std::collections::HashMap<&str, f64> = factuality
        .iter()
        .map(|(id, f)| (id.as_str(), *f))
        .collect();
    let mut points = Vec::new();
    for (id, mint) in scores {
        let f = *lookup
            .get(id.as_str())
            .ok_or_else(|| CliError::Data(format!("no factuality value for record {id:?}")))?;
        let point = TradeoffPoint::new(id.clone(), mint * 100.0, f)
            .map_err(|e| CliError::Data(format!("record {id:?}: {e}")))?;
        points.push(point);
    }
    Ok(vec![Series {
        name: series_name.to_string(),
        points,
    }])
}

/// Per-series fits and per-point mu-scores. Degenerate series produce error
/// rows; the remaining series are still reported.
pub fn cmd_tradeoff<W: Write>(
    series: &[Series],
    opts: &TradeoffOptions,
    out: W,
    svg_out: Option<&mut dyn Write>,
) -> Result<Outcome, CliError> {
    let mut writer = tradeoff_csv_writer(out)?;
    let mut errors = 0;
    let mut rows = 0;

    for s in series {
        for p in &s.points {
            rows += 1;
            let mu = mu_score(p.factuality, p.abstractiveness, opts.phi)
                .map_err(|e| CliError::Data(e.to_string()))?;
            writer
                .write_record([
                    "point",
                    s.name.as_str(),
                    p.label.as_str(),
                    &fmt6(p.abstractiveness),
                    &fmt6(p.factuality),
                    &fmt6(mu),
                    "",
                    "",
                    "",
                    "",
                    "",
                    "",
                ])
                .map_err(csv_internal)?;
        }
    }

    let mut fits = Vec::new();
    for s in series {
        rows += 1;
        match fit_trend(&s.points) {
            Ok(fit) => {
                writer
                    .write_record([
                        "series",
                        s.name.as_str(),
                        "",
                        "",
                        "",
                        "",
                        &fmt6(fit.slope),
                        &fmt6(fit.intercept),
                        &fmt6(fit.r_squared),
                        &fmt6(fit.f_at_50()),
                        &fit.n_points.to_string(),
                        "",
                    ])
                    .map_err(csv_internal)?;
                fits.push((s, Some(fit)));
            }
            Err(e) => {
                errors += 1;
                writer
                    .write_record([
                        "series",
                        s.name.as_str(),
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        "",
                        &s.points.len().to_string(),
                        &e.to_string(),
                    ])
                    .map_err(csv_internal)?;
                fits.push((s, None));
            }
        }
    }
    writer.flush()?;

    if let Some(svg) = svg_out {
        svg.write_all(render_scatter_svg(&fits).as_bytes())?;
    }

    Ok(Outcome { rows, errors })
}

fn tradeoff_csv_writer<W: Write>(mut out: W) -> Result<csv::Writer<W>, CliError> {
    writeln!(out, "{TRADEOFF_SCHEMA}")?;
    let mut writer = csv::Writer::from_writer(out);
    writer
        .write_record([
            "kind",
            "series",
            "label",
            "abstractiveness",
            "factuality",
            "mu",
            "slope",
            "intercept",
            "r_squared",
            "f_at_50",
            "n_points",
            "error",
        ])
        .map_err(csv_internal)?;
    Ok(writer)
}

// ---------------------------------------------------------------------------
// scatter plot
// ---------------------------------------------------------------------------

const SERIES_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
];

/// Render an abstractiveness/factuality scatter plot with one trend line per
/// fitted series. Both axes span 0..100.
fn render_scatter_svg(series: &[(&Series, Option<crate::tradeoff::TrendFit>)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const M: f64 = 50.0;
    let sx = |a: f64| M + a / 100.0 * (W - 2.0 * M);
    let sy = |f: f64| H - M - f / 100.0 * (H - 2.0 * M);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" \
         viewBox=\"0 0 {W} {H}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"{M}\" y=\"{M}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#333\"/>\n",
        W - 2.0 * M,
        H - 2.0 * M
    ));
    for tick in (0..=100).step_by(25) {
        let t = tick as f64;
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{tick}</text>\n",
            sx(t),
            H - M + 16.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{tick}</text>\n",
            M - 6.0,
            sy(t) + 4.0
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">abstractiveness (%)</text>\n",
        W / 2.0,
        H - 10.0
    ));
    svg.push_str(&format!(
        "  <text x=\"14\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.2})\">factuality (%)</text>\n",
        H / 2.0,
        H / 2.0
    ));

    for (i, (s, fit)) in series.iter().enumerate() {
        let color = SERIES_COLORS[i % SERIES_COLORS.len()];
        if let Some(fit) = fit {
            if let Some(((x0, y0), (x1, y1))) = clip_line_to_unit_box(fit.slope, fit.intercept) {
                svg.push_str(&format!(
                    "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-dasharray=\"5 3\"/>\n",
                    sx(x0),
                    sy(y0),
                    sx(x1),
                    sy(y1)
                ));
            }
        }
        for p in &s.points {
            svg.push_str(&format!(
                "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"{color}\"><title>{}: {}</title></circle>\n",
                sx(p.abstractiveness),
                sy(p.factuality),
                escape_xml(&s.name),
                escape_xml(&p.label)
            ));
        }
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"{color}\">{}</text>\n",
            W - M + 6.0,
            M + 16.0 * i as f64,
            escape_xml(&s.name)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Intersect `f = intercept + slope * a` with the `[0,100] x [0,100]` box.
fn clip_line_to_unit_box(slope: f64, intercept: f64) -> Option<((f64, f64), (f64, f64))> {
    let y = |x: f64| intercept + slope * x;
    let (mut lo, mut hi) = (0.0f64, 100.0f64);
    if slope != 0.0 {
        // x positions where the line enters/leaves 0 <= y <= 100
        let xa = (0.0 - intercept) / slope;
        let xb = (100.0 - intercept) / slope;
        let (enter, leave) = if xa < xb { (xa, xb) } else { (xb, xa) };
        lo = lo.max(enter);
        hi = hi.min(leave);
    } else if !(0.0..=100.0).contains(&intercept) {
        return None;
    }
    if lo >= hi {
        return None;
    }
    Some(((lo, y(lo)), (hi, y(hi))))
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(id: &str, source: &str, summary: Option<&str>) -> CorpusRecord {
        CorpusRecord {
            id: id.to_string(),
            source: crate::corpus::SourceText::Single(source.to_string()),
            summary: summary.map(String::from),
            factuality: None,
        }
    }

    #[test]
    fn score_writes_rows_and_mean() {
        let records = vec![
            record("r1", "the cat sat on the mat", Some("the cat sat on the mat")),
            record("r2", "the cat sat on the mat", Some("a dog ran")),
        ];
        let mut buf = Vec::new();
        let outcome = cmd_score(&records, &ScoreOptions::default(), &mut buf).unwrap();
        assert_eq!(outcome.errors, 0);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(SCORE_SCHEMA));
        let lines: Vec<&str> = text.lines().collect();
        // schema + header + 2 records + mean
        assert_eq!(lines.len(), 5);
        assert!(lines[2].starts_with("r1,ok,"));
        assert!(lines[4].starts_with(",mean,"));
        // Identical summary and source: mint is exactly 0.
        assert!(lines[2].contains(",0.000000,"));
    }

    #[test]
    fn score_missing_summary_is_per_record_error() {
        let records = vec![
            record("r1", "a b c", Some("a b")),
            record("r2", "a b c", None),
        ];
        let mut buf = Vec::new();
        let outcome = cmd_score(&records, &ScoreOptions::default(), &mut buf).unwrap();
        assert_eq!(outcome.errors, 1);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("r2,error"));
        assert!(text.contains("missing summary"));
        // The healthy record still has a mean row computed from it alone.
        assert!(text.lines().any(|l| l.starts_with(",mean,")));
    }

    #[test]
    fn score_is_deterministic_across_worker_counts() {
        let records: Vec<CorpusRecord> = (0..12)
            .map(|i| {
                record(
                    &format!("r{i}"),
                    "the quick brown fox jumps over the lazy dog",
                    Some(if i % 2 == 0 {
                        "the quick brown fox"
                    } else {
                        "a completely different sentence here"
                    }),
                )
            })
            .collect();
        let mut one = Vec::new();
        let mut four = Vec::new();
        cmd_score(
            &records,
            &ScoreOptions {
                workers: 1,
                ..ScoreOptions::default()
            },
            &mut one,
        )
        .unwrap();
        cmd_score(
            &records,
            &ScoreOptions {
                workers: 4,
                ..ScoreOptions::default()
            },
            &mut four,
        )
        .unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn tradeoff_reports_fits_and_errors_per_series() {
        let good = Series {
            name: "good".into(),
            points: vec![
                TradeoffPoint::new("a", 10.0, 80.0).unwrap(),
                TradeoffPoint::new("b", 30.0, 60.0).unwrap(),
            ],
        };
        let degenerate = Series {
            name: "flat".into(),
            points: vec![
                TradeoffPoint::new("a", 10.0, 80.0).unwrap(),
                TradeoffPoint::new("b", 10.0, 60.0).unwrap(),
            ],
        };
        let mut buf = Vec::new();
        let outcome = cmd_tradeoff(
            &[good, degenerate],
            &TradeoffOptions::default(),
            &mut buf,
            None,
        )
        .unwrap();
        assert_eq!(outcome.errors, 1);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(TRADEOFF_SCHEMA));
        assert!(text.contains("series,good"));
        assert!(text.contains("series,flat"));
        assert!(text.contains("abstractiveness values are equal"));
        // Two points on a line: F@50 = 90 - 50 = 40.
        assert!(text.contains("40.000000"));
    }

    #[test]
    fn points_csv_round_trip() {
        let input = "\
#schema=mint-tradeoff-points.v1
series,label,abstractiveness,factuality
m1,none,19.6,88.7
m1,strong,68.2,76.0
m2,none,80.6,41.3
";
        let series = read_points_csv(input.as_bytes()).unwrap();
        assert_eq!(series.len(), 2);
        assert_eq!(series[0].name, "m1");
        assert_eq!(series[0].points.len(), 2);
        assert_eq!(series[1].points[0].label, "none");
    }

    #[test]
    fn points_csv_rejects_out_of_range() {
        let input = "series,label,abstractiveness,factuality\nm,x,120,50\n";
        assert!(matches!(
            read_points_csv(input.as_bytes()),
            Err(CliError::Data(_))
        ));
    }

    #[test]
    fn factuality_reader_accepts_csv_and_jsonl() {
        let csv = "id,factuality\nr1,88.5\nr2,41.0\n";
        let from_csv = read_factuality(csv.as_bytes()).unwrap();
        assert_eq!(from_csv, vec![("r1".into(), 88.5), ("r2".into(), 41.0)]);
        let jsonl = "{\"id\":\"r1\",\"source\":\"s\",\"factuality\":88.5}\n";
        let from_jsonl = read_factuality(jsonl.as_bytes()).unwrap();
        assert_eq!(from_jsonl, vec![("r1".into(), 88.5)]);
    }

    #[test]
    fn svg_contains_points_and_trend() {
        let s = Series {
            name: "demo".into(),
            points: vec![
                TradeoffPoint::new("a", 10.0, 80.0).unwrap(),
                TradeoffPoint::new("b", 30.0, 60.0).unwrap(),
            ],
        };
        let fit = fit_trend(&s.points).unwrap();
        let svg = render_scatter_svg(&[(&s, Some(fit))]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<circle"));
        assert!(svg.contains("<line"));
        assert!(svg.contains("demo"));
    }

    #[test]
    fn clip_handles_steep_and_flat_lines() {
        assert!(clip_line_to_unit_box(0.0, 50.0).is_some());
        assert!(clip_line_to_unit_box(0.0, 150.0).is_none());
        let ((x0, y0), (x1, y1)) = clip_line_to_unit_box(-1.0, 120.0).unwrap();
        for v in [x0, y0, x1, y1] {
            assert!((-1e-9..=100.0 + 1e-9).contains(&v));
        }
    }
}
