//! Text formats for models and IM tables, and CSV schemas for curves,
//! capital trajectories and gamble logs.
//!
//! A model file is a sequence of sections; `#` starts a comment.
//!
//! ```text
//! [frames]
//! data = y1 y2 y3
//! param = t1 t2 t3
//!
//! [likelihood]            # one row per parameter value: L(y | θ) in data order
//! t1 = 0.8 0.15 0.05
//! t2 = 0.1 0.8 0.1
//! t3 = 0.05 0.15 0.8
//!
//! [prior]                 # focal sets and masses; omitted means vacuous
//! {t1 t2} = 0.6
//! {t1 t2 t3} = 0.4
//!
//! [interval-prior]        # nested focal intervals on the real line
//! -inf 7 = 0.9
//! -inf inf = 0.1
//! ```
//!
//! An IM table file has a `[frames]` section and an `[im]` section whose
//! entries read `y {H} = lower`. Numbers are decimal strings; in exact mode
//! `p/q` is also accepted.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};

use crate::credal::{CredalModel, Likelihood};
use crate::error::{Error, Result};
use crate::frame::{Frame, Subset};
use crate::im_table::IMTable;
use crate::mass::MassFunction;
use crate::randomset::{CurveRow, FocalInterval, Interval, IntervalPrior};
use crate::scalar::Scalar;
use crate::underworld::{CapitalTrajectory, GambleRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyDocument,
    Syntax,
    MalformedSection,
    MissingEntry,
    DuplicateEntry,
    InvalidNumber,
    UnknownLabel,
    InvalidFrame,
    MassSum,
    NonStochastic,
    InvalidModel,
}

/// A located diagnostic; `line` and `column` are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub section: Option<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: ", self.line, self.column)?;
        if let Some(section) = &self.section {
            write!(f, "[{section}] ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ParseError {}

/// What a model file describes: a finite credal model, a standalone mass
/// function (`[frames]` with only `param`, plus `[prior]`), an interval prior,
/// or a model together with an interval prior.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelBundle<S: Scalar = f64> {
    pub model: Option<CredalModel<S>>,
    pub mass: Option<MassFunction<S>>,
    pub interval_prior: Option<IntervalPrior>,
}

impl<S: Scalar> ModelBundle<S> {
    pub fn from_model(model: CredalModel<S>) -> Self {
        Self { model: Some(model), mass: None, interval_prior: None }
    }

    pub fn from_mass(mass: MassFunction<S>) -> Self {
        Self { model: None, mass: Some(mass), interval_prior: None }
    }

    pub fn from_interval_prior(prior: IntervalPrior) -> Self {
        Self { model: None, mass: None, interval_prior: Some(prior) }
    }

    /// The standalone mass function, or else the model's prior.
    pub fn mass_function(&self) -> Result<MassFunction<S>> {
        self.mass
            .clone()
            .or_else(|| self.model.as_ref().map(|m| m.prior().clone()))
            .ok_or_else(|| Error::InvalidArgument("the model file has no [prior] section".into()))
    }

    pub fn credal(self) -> Result<CredalModel<S>> {
        self.model.ok_or_else(|| Error::InvalidArgument("the model file has no [likelihood] section".into()))
    }
}

#[derive(Debug)]
struct Entry {
    line: usize,
    key: String,
    key_col: usize,
    value: String,
    value_col: usize,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

struct Document {
    sections: Vec<Section>,
}

impl Document {
    fn parse(text: &str, allowed: &[&str]) -> std::result::Result<Self, ParseError> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let col = column_of(raw, trimmed);
            if trimmed.starts_with('[') {
                let name = trimmed
                    .strip_prefix('[')
                    .and_then(|t| t.strip_suffix(']'))
                    .filter(|n| !n.is_empty() && n.chars().all(|c| c.is_ascii_lowercase() || c == '-'));
                let Some(name) = name else {
                    return Err(err(line, col, ParseErrorKind::MalformedSection, None, format!("malformed section header {trimmed:?}")));
                };
                if !allowed.contains(&name) {
                    return Err(err(
                        line,
                        col,
                        ParseErrorKind::MalformedSection,
                        Some(name),
                        format!("unknown section; expected one of {}", allowed.join(", ")),
                    ));
                }
                if sections.iter().any(|s| s.name == name) {
                    return Err(err(line, col, ParseErrorKind::MalformedSection, Some(name), "section appears twice".into()));
                }
                sections.push(Section { name: name.to_string(), line, entries: Vec::new() });
                continue;
            }
            let Some(section) = sections.last_mut() else {
                return Err(err(line, col, ParseErrorKind::MalformedSection, None, "entry before any section header".into()));
            };
            let Some(eq) = content.find('=') else {
                return Err(err(line, col, ParseErrorKind::Syntax, Some(&section.name), "expected `key = value`".into()));
            };
            let (key_raw, value_raw) = (&content[..eq], &content[eq + 1..]);
            let key = key_raw.trim();
            let value = value_raw.trim();
            if key.is_empty() || value.is_empty() {
                return Err(err(line, col, ParseErrorKind::Syntax, Some(&section.name), "expected `key = value`".into()));
            }
            section.entries.push(Entry {
                line,
                key: key.to_string(),
                key_col: column_of(raw, key),
                value: value.to_string(),
                value_col: eq + 2 + (value_raw.len() - value_raw.trim_start().len()),
            });
        }
        if sections.is_empty() {
            return Err(err(1, 1, ParseErrorKind::EmptyDocument, None, "document has no sections".into()));
        }
        Ok(Self { sections })
    }

    fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }
}

fn err(line: usize, column: usize, kind: ParseErrorKind, section: Option<&str>, message: String) -> ParseError {
    ParseError { line, column, kind, section: section.map(str::to_string), message }
}

/// 1-based column of `part`, a subslice of `line`.
fn column_of(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

/// Whitespace-separated tokens with their 1-based columns, starting from `base`.
fn tokens(text: &str, base: usize) -> Vec<(usize, &str)> {
    text.split_whitespace().map(|t| (base + column_of(text, t) - 1, t)).collect()
}

struct Frames<'a> {
    section: &'a Section,
    data: Option<Frame>,
    param: Option<Frame>,
}

impl Frames<'_> {
    fn require(&self, key: &str) -> std::result::Result<Frame, ParseError> {
        let frame = if key == "data" { &self.data } else { &self.param };
        frame.clone().ok_or_else(|| {
            err(self.section.line, 1, ParseErrorKind::MissingEntry, Some("frames"), format!("missing `{key} = ...`"))
        })
    }
}

fn parse_frames(doc: &Document) -> std::result::Result<Option<Frames<'_>>, ParseError> {
    let Some(section) = doc.section("frames") else { return Ok(None) };
    let mut found: BTreeMap<&str, (Frame, usize)> = BTreeMap::new();
    for e in &section.entries {
        if e.key != "data" && e.key != "param" {
            return Err(err(e.line, e.key_col, ParseErrorKind::Syntax, Some("frames"), format!("unknown key {:?}; expected data or param", e.key)));
        }
        let frame = Frame::new(e.value.split_whitespace())
            .map_err(|x| err(e.line, e.value_col, ParseErrorKind::InvalidFrame, Some("frames"), x.to_string()))?;
        if found.insert(e.key.as_str(), (frame, e.line)).is_some() {
            return Err(err(e.line, e.key_col, ParseErrorKind::DuplicateEntry, Some("frames"), format!("{} given twice", e.key)));
        }
    }
    let take = |key: &str| found.get(key).map(|(f, _)| f.clone());
    Ok(Some(Frames { section, data: take("data"), param: take("param") }))
}

fn parse_number<S: Scalar>(token: &str, line: usize, col: usize, section: &str) -> std::result::Result<S, ParseError> {
    S::parse_decimal(token)
        .ok_or_else(|| err(line, col, ParseErrorKind::InvalidNumber, Some(section), format!("{token:?} is not a number")))
}

fn parse_subset(
    frame: &Frame,
    text: &str,
    line: usize,
    col: usize,
    section: &str,
) -> std::result::Result<Subset, ParseError> {
    let inner = text
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| err(line, col, ParseErrorKind::Syntax, Some(section), format!("expected a set like {{a b}}, got {text:?}")))?;
    let mut indices = Vec::new();
    for (c, label) in tokens(inner, col + 1) {
        let index = frame
            .index_of(label)
            .ok_or_else(|| err(line, c, ParseErrorKind::UnknownLabel, Some(section), format!("unknown label {label:?}")))?;
        if indices.contains(&index) {
            return Err(err(line, c, ParseErrorKind::DuplicateEntry, Some(section), format!("label {label:?} repeated")));
        }
        indices.push(index);
    }
    Ok(frame.subset_from_indices(indices).expect("indices come from the frame"))
}

fn parse_likelihood<S: Scalar>(
    doc: &Document,
    data: &Frame,
    param: &Frame,
) -> std::result::Result<Likelihood<S>, ParseError> {
    const NAME: &str = "likelihood";
    let section = doc.section(NAME).expect("checked by caller");
    let mut rows: Vec<Option<Vec<S>>> = vec![None; param.len()];
    for e in &section.entries {
        let theta = param
            .index_of(&e.key)
            .ok_or_else(|| err(e.line, e.key_col, ParseErrorKind::UnknownLabel, Some(NAME), format!("unknown parameter label {:?}", e.key)))?;
        if rows[theta].is_some() {
            return Err(err(e.line, e.key_col, ParseErrorKind::DuplicateEntry, Some(NAME), format!("row {} given twice", e.key)));
        }
        let toks = tokens(&e.value, e.value_col);
        if toks.len() != data.len() {
            return Err(err(
                e.line,
                e.value_col,
                ParseErrorKind::Syntax,
                Some(NAME),
                format!("row {} has {} entries for {} data points", e.key, toks.len(), data.len()),
            ));
        }
        let mut row = Vec::with_capacity(toks.len());
        for (c, t) in toks {
            let value: S = parse_number(t, e.line, c, NAME)?;
            if value < S::zero() {
                return Err(err(e.line, c, ParseErrorKind::NonStochastic, Some(NAME), format!("negative probability {t}")));
            }
            row.push(value);
        }
        let total = row.iter().fold(S::zero(), |acc, p| acc + p.clone());
        if (total.clone() - S::one()).abs() > S::mass_tolerance() {
            return Err(err(
                e.line,
                e.value_col,
                ParseErrorKind::NonStochastic,
                Some(NAME),
                format!("row {} sums to {}, expected 1", e.key, total.to_decimal()),
            ));
        }
        rows[theta] = Some(row);
    }
    let rows = rows
        .into_iter()
        .enumerate()
        .map(|(t, r)| {
            r.ok_or_else(|| err(section.line, 1, ParseErrorKind::MissingEntry, Some(NAME), format!("missing row for {}", param.label(t))))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Likelihood::new(data, param, rows).map_err(|x| err(section.line, 1, ParseErrorKind::NonStochastic, Some(NAME), x.to_string()))
}

fn parse_prior<S: Scalar>(doc: &Document, param: &Frame) -> std::result::Result<MassFunction<S>, ParseError> {
    const NAME: &str = "prior";
    let Some(section) = doc.section(NAME) else { return Ok(MassFunction::vacuous(param)) };
    let mut entries: Vec<(Subset, S)> = Vec::new();
    for e in &section.entries {
        let subset = parse_subset(param, &e.key, e.line, e.key_col, NAME)?;
        if subset.is_empty() {
            return Err(err(e.line, e.key_col, ParseErrorKind::Syntax, Some(NAME), "the empty set cannot be focal".into()));
        }
        if entries.iter().any(|(s, _)| *s == subset) {
            return Err(err(e.line, e.key_col, ParseErrorKind::DuplicateEntry, Some(NAME), format!("focal set {subset} listed twice")));
        }
        let mass: S = parse_number(&e.value, e.line, e.value_col, NAME)?;
        if mass <= S::zero() {
            return Err(err(e.line, e.value_col, ParseErrorKind::InvalidNumber, Some(NAME), format!("mass {} must be positive", e.value)));
        }
        entries.push((subset, mass));
    }
    if entries.is_empty() {
        return Err(err(section.line, 1, ParseErrorKind::MissingEntry, Some(NAME), "no focal sets".into()));
    }
    let total = entries.iter().fold(S::zero(), |acc, (_, m)| acc + m.clone());
    if (total.clone() - S::one()).abs() > S::mass_tolerance() {
        return Err(err(
            section.line,
            1,
            ParseErrorKind::MassSum,
            Some(NAME),
            format!("masses in [{NAME}] sum to {}, expected 1", total.to_decimal()),
        ));
    }
    MassFunction::new(param, entries).map_err(|x| err(section.line, 1, ParseErrorKind::InvalidModel, Some(NAME), x.to_string()))
}

fn parse_bound(token: &str, line: usize, col: usize) -> std::result::Result<f64, ParseError> {
    let value = match token {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        _ => f64::parse_decimal(token).ok_or_else(|| {
            err(line, col, ParseErrorKind::InvalidNumber, Some("interval-prior"), format!("{token:?} is not a bound"))
        })?,
    };
    Ok(value)
}

fn format_bound(value: f64) -> String {
    if value == f64::INFINITY {
        "inf".into()
    } else if value == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        value.to_decimal()
    }
}

fn parse_interval_prior(doc: &Document) -> std::result::Result<Option<IntervalPrior>, ParseError> {
    const NAME: &str = "interval-prior";
    let Some(section) = doc.section(NAME) else { return Ok(None) };
    let mut focal = Vec::new();
    for e in &section.entries {
        let toks = tokens(&e.key, e.key_col);
        let [(c0, lo), (c1, hi)] = toks[..] else {
            return Err(err(e.line, e.key_col, ParseErrorKind::Syntax, Some(NAME), "expected `lo hi = mass`".into()));
        };
        let interval = Interval::new(parse_bound(lo, e.line, c0)?, parse_bound(hi, e.line, c1)?)
            .map_err(|x| err(e.line, c0, ParseErrorKind::InvalidModel, Some(NAME), x.to_string()))?;
        let mass: f64 = parse_number(&e.value, e.line, e.value_col, NAME)?;
        if mass <= 0.0 {
            return Err(err(e.line, e.value_col, ParseErrorKind::InvalidNumber, Some(NAME), format!("mass {} must be positive", e.value)));
        }
        focal.push(FocalInterval { interval, mass });
    }
    if focal.is_empty() {
        return Err(err(section.line, 1, ParseErrorKind::MissingEntry, Some(NAME), "no focal intervals".into()));
    }
    let total: f64 = focal.iter().map(|f| f.mass).sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(err(
            section.line,
            1,
            ParseErrorKind::MassSum,
            Some(NAME),
            format!("masses in [{NAME}] sum to {total}, expected 1"),
        ));
    }
    IntervalPrior::new(focal)
        .map(Some)
        .map_err(|x| err(section.line, 1, ParseErrorKind::InvalidModel, Some(NAME), x.to_string()))
}

/// Parses a model file.
pub fn parse_model<S: Scalar>(text: &str) -> Result<ModelBundle<S>> {
    let doc = Document::parse(text, &["frames", "likelihood", "prior", "interval-prior"])?;
    let frames = parse_frames(&doc)?;
    let missing = |line: usize, what: &str| -> Error {
        err(line, 1, ParseErrorKind::MissingEntry, None, format!("a [{what}] section is required")).into()
    };
    let (mut model, mut mass) = (None, None);
    match (frames, doc.section("likelihood"), doc.section("prior")) {
        (Some(frames), Some(_), _) => {
            let (data, param) = (frames.require("data")?, frames.require("param")?);
            let likelihood = parse_likelihood(&doc, &data, &param)?;
            let prior = parse_prior(&doc, &param)?;
            model = Some(CredalModel::new(likelihood, prior)?);
        }
        (Some(frames), None, Some(_)) => mass = Some(parse_prior(&doc, &frames.require("param")?)?),
        (Some(frames), None, None) => return Err(missing(frames.section.line, "likelihood")),
        (None, Some(s), _) | (None, None, Some(s)) => return Err(missing(s.line, "frames")),
        (None, None, None) => {}
    }
    let interval_prior = parse_interval_prior(&doc)?;
    Ok(ModelBundle { model, mass, interval_prior })
}

fn write_frames(out: &mut String, data: &Frame, param: &Frame) {
    out.push_str("[frames]\n");
    out.push_str(&format!("data = {}\n", data.labels().join(" ")));
    out.push_str(&format!("param = {}\n", param.labels().join(" ")));
}

/// Serializes a bundle so that [`parse_model`] returns it unchanged.
pub fn serialize_model<S: Scalar>(bundle: &ModelBundle<S>) -> String {
    let mut out = String::new();
    if let Some(model) = &bundle.model {
        let (data, param) = (model.data_frame(), model.param_frame());
        write_frames(&mut out, data, param);
        out.push_str("\n[likelihood]\n");
        for theta in 0..param.len() {
            let row: Vec<String> = model.likelihood().row(theta).iter().map(Scalar::to_decimal).collect();
            out.push_str(&format!("{} = {}\n", param.label(theta), row.join(" ")));
        }
        write_prior(&mut out, model.prior());
    } else if let Some(mass) = &bundle.mass {
        out.push_str(&format!("[frames]\nparam = {}\n", mass.frame().labels().join(" ")));
        write_prior(&mut out, mass);
    }
    if let Some(prior) = &bundle.interval_prior {
        if !out.is_empty() {
            out.push('\n');
        }
        out.push_str("[interval-prior]\n");
        for f in prior.focal() {
            out.push_str(&format!(
                "{} {} = {}\n",
                format_bound(f.interval.lo),
                format_bound(f.interval.hi),
                f.mass.to_decimal()
            ));
        }
    }
    out
}

fn write_prior<S: Scalar>(out: &mut String, prior: &MassFunction<S>) {
    out.push_str("\n[prior]\n");
    for (subset, mass) in prior.focal() {
        out.push_str(&format!("{subset} = {}\n", mass.to_decimal()));
    }
}

/// Parses an IM table file. Entries for the empty set and the full frame may
/// be omitted; every other `(y, H)` must be present.
pub fn parse_im_table<S: Scalar>(text: &str) -> Result<IMTable<S>> {
    const NAME: &str = "im";
    let doc = Document::parse(text, &["frames", "im"])?;
    let Some(frames) = parse_frames(&doc)? else {
        return Err(err(1, 1, ParseErrorKind::MissingEntry, None, "a [frames] section is required".into()).into());
    };
    let (data, param) = (frames.require("data")?, frames.require("param")?);
    let Some(section) = doc.section(NAME) else {
        return Err(err(1, 1, ParseErrorKind::MissingEntry, None, "an [im] section is required".into()).into());
    };
    let width = 1usize
        .checked_shl(param.len() as u32)
        .filter(|_| param.len() <= crate::im_table::DEFAULT_SUBSET_CAP)
        .ok_or_else(|| err(1, 1, ParseErrorKind::InvalidFrame, Some("frames"), "parameter frame too large to tabulate".into()))?;
    let mut rows: Vec<Vec<Option<S>>> = vec![vec![None; width]; data.len()];
    for e in &section.entries {
        let brace = e.key.find('{').ok_or_else(|| {
            err(e.line, e.key_col, ParseErrorKind::Syntax, Some(NAME), "expected `y {H} = value`".into())
        })?;
        let label = e.key[..brace].trim();
        let y = data
            .index_of(label)
            .ok_or_else(|| err(e.line, e.key_col, ParseErrorKind::UnknownLabel, Some(NAME), format!("unknown data label {label:?}")))?;
        let subset = parse_subset(&param, e.key[brace..].trim(), e.line, e.key_col + brace, NAME)?;
        let value: S = parse_number(&e.value, e.line, e.value_col, NAME)?;
        let slot = &mut rows[y][subset.bits() as usize];
        if slot.is_some() {
            return Err(err(e.line, e.key_col, ParseErrorKind::DuplicateEntry, Some(NAME), format!("{label} {subset} given twice")).into());
        }
        *slot = Some(value);
    }
    let full = param.full_bits() as usize;
    let mut table = Vec::with_capacity(data.len());
    for (y, row) in rows.into_iter().enumerate() {
        let mut values = Vec::with_capacity(width);
        for (bits, v) in row.into_iter().enumerate() {
            values.push(match v {
                Some(v) => v,
                None if bits == 0 => S::zero(),
                None if bits == full => S::one(),
                None => {
                    let subset = param.subset_from_bits(bits as u64).expect("bits within frame");
                    return Err(err(
                        section.line,
                        1,
                        ParseErrorKind::MissingEntry,
                        Some(NAME),
                        format!("missing entry {} {subset}", data.label(y)),
                    )
                    .into());
                }
            });
        }
        table.push(values);
    }
    IMTable::from_rows(&data, &param, table)
        .map_err(|x| err(section.line, 1, ParseErrorKind::InvalidModel, Some(NAME), x.to_string()).into())
}

pub fn serialize_im_table<S: Scalar>(table: &IMTable<S>) -> String {
    let (data, param) = (table.data_frame(), table.param_frame());
    let mut out = String::new();
    write_frames(&mut out, data, param);
    out.push_str("\n[im]\n");
    for y in 0..data.len() {
        for subset in param.power_set() {
            let value = table.lower(y, &subset).expect("same frame");
            out.push_str(&format!("{} {subset} = {}\n", data.label(y), value.to_decimal()));
        }
    }
    out
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

pub const CURVE_HEADER: [&str; 5] = ["theta", "lower_vacuous", "upper_vacuous", "lower_combined", "upper_combined"];
pub const TRAJECTORY_HEADER: [&str; 2] = ["round", "capital"];
pub const GAMBLE_LOG_HEADER: [&str; 4] = ["round", "H", "beta", "payoff"];

pub fn write_curve<W: Write>(writer: W, rows: &[CurveRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CURVE_HEADER).map_err(csv_error)?;
    for r in rows {
        w.write_record(
            [r.theta, r.lower_vacuous, r.upper_vacuous, r.lower_combined, r.upper_combined].map(|v| v.to_decimal()),
        )
        .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

fn check_header(reader: &mut csv::Reader<impl Read>, expected: &[&str]) -> Result<()> {
    let header = reader.headers().map_err(csv_error)?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Io(format!("expected header {}, found {}", expected.join(","), header.iter().collect::<Vec<_>>().join(","))));
    }
    Ok(())
}

fn csv_number<T: std::str::FromStr>(record: &csv::StringRecord, index: usize, row: usize) -> Result<T> {
    record
        .get(index)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::Io(format!("row {row}: column {} is not a number", index + 1)))
}

/// Reads a curve file, checking that `θ` increases strictly and every bound lies in `[0, 1]`.
pub fn read_curve<R: Read>(reader: R) -> Result<Vec<CurveRow>> {
    let mut r = csv::Reader::from_reader(reader);
    check_header(&mut r, &CURVE_HEADER)?;
    let mut rows: Vec<CurveRow> = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(csv_error)?;
        let v: Vec<f64> = (0..5).map(|k| csv_number(&record, k, i + 1)).collect::<Result<_>>()?;
        let row = CurveRow { theta: v[0], lower_vacuous: v[1], upper_vacuous: v[2], lower_combined: v[3], upper_combined: v[4] };
        if v[1..].iter().any(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::Io(format!("row {}: bound outside [0, 1]", i + 1)));
        }
        if rows.last().is_some_and(|prev| prev.theta >= row.theta) {
            return Err(Error::Io(format!("row {}: theta is not strictly increasing", i + 1)));
        }
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_trajectory<W: Write>(writer: W, trajectory: &CapitalTrajectory) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRAJECTORY_HEADER).map_err(csv_error)?;
    for (i, c) in trajectory.capital.iter().enumerate() {
        w.write_record([(i + 1).to_string(), c.to_decimal()]).map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn read_trajectory<R: Read>(reader: R) -> Result<Vec<(usize, f64)>> {
    let mut r = csv::Reader::from_reader(reader);
    check_header(&mut r, &TRAJECTORY_HEADER)?;
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_error)?;
            Ok((csv_number(&rec, 0, i + 1)?, csv_number(&rec, 1, i + 1)?))
        })
        .collect()
}

pub fn write_gamble_log<W: Write>(writer: W, log: &[GambleRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(GAMBLE_LOG_HEADER).map_err(csv_error)?;
    for g in log {
        w.write_record([g.round.to_string(), g.hypothesis.to_string(), g.beta.to_decimal(), g.payoff.to_decimal()])
            .map_err(csv_error)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GambleLogRow {
    pub round: usize,
    pub hypothesis: String,
    pub beta: f64,
    pub payoff: f64,
}

pub fn read_gamble_log<R: Read>(reader: R) -> Result<Vec<GambleLogRow>> {
    let mut r = csv::Reader::from_reader(reader);
    check_header(&mut r, &GAMBLE_LOG_HEADER)?;
    r.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(csv_error)?;
            Ok(GambleLogRow {
                round: csv_number(&rec, 0, i + 1)?,
                hypothesis: rec.get(1).unwrap_or_default().to_string(),
                beta: csv_number(&rec, 2, i + 1)?,
                payoff: csv_number(&rec, 3, i + 1)?,
            })
        })
        .collect()
}

/// Three-point model with an informative likelihood and a vacuous prior.
pub const DEMO_VACUOUS: &str = "\
# Three-point location-like model, no prior information.
[frames]
data = y1 y2 y3
param = t1 t2 t3

[likelihood]
t1 = 0.8 0.15 0.05
t2 = 0.1 0.8 0.1
t3 = 0.05 0.15 0.8
";

/// The same likelihood with a partially informative prior.
pub const DEMO_PARTIAL: &str = "\
# Three-point model; the prior puts 0.6 on {t1 t2}.
[frames]
data = y1 y2 y3
param = t1 t2 t3

[likelihood]
t1 = 0.8 0.15 0.05
t2 = 0.1 0.8 0.1
t3 = 0.05 0.15 0.8

[prior]
{t1 t2} = 0.6
{t1 t2 t3} = 0.4
";

/// Normal mean with prior mass 0.9 on `(−∞, 7]`.
pub const NORMAL_MEAN: &str = "\
# Normal location model Y ~ N(theta, 1); 90% sure that theta <= 7.
[interval-prior]
-inf 7 = 0.9
-inf inf = 0.1
";

/// Bundled model text by name: `demo3`, `demo3-partial` or `normal-mean`.
pub fn bundled_model(name: &str) -> Option<&'static str> {
    match name {
        "demo3" => Some(DEMO_VACUOUS),
        "demo3-partial" => Some(DEMO_PARTIAL),
        "normal-mean" => Some(NORMAL_MEAN),
        _ => None,
    }
}

pub const BUNDLED_NAMES: [&str; 3] = ["demo3", "demo3-partial", "normal-mean"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn parse_err(text: &str) -> ParseError {
        match parse_model::<f64>(text) {
            Err(Error::Parse(e)) => e,
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn bundled_models_parse() {
        for name in BUNDLED_NAMES {
            let bundle = parse_model::<f64>(bundled_model(name).unwrap()).unwrap();
            assert!(bundle.model.is_some() || bundle.interval_prior.is_some());
        }
        let demo = parse_model::<f64>(DEMO_VACUOUS).unwrap().credal().unwrap();
        assert!(demo.prior().is_vacuous());
        assert_eq!(*demo.likelihood().probability(1, 0), 0.15);
    }

    #[test]
    fn interval_prior_round_trip() {
        let bundle = parse_model::<f64>(NORMAL_MEAN).unwrap();
        let prior = bundle.interval_prior.clone().unwrap();
        let expected = IntervalPrior::new(vec![
            FocalInterval { interval: Interval::new(f64::NEG_INFINITY, 7.0).unwrap(), mass: 0.9 },
            FocalInterval { interval: Interval::REAL_LINE, mass: 0.1 },
        ])
        .unwrap();
        assert_eq!(prior, expected);
        assert_eq!(parse_model::<f64>(&serialize_model(&bundle)).unwrap(), bundle);
    }

    #[test]
    fn credal_model_round_trip_exact_and_float() {
        let exact = parse_model::<Rational>(DEMO_PARTIAL).unwrap();
        let text = serialize_model(&exact);
        assert_eq!(parse_model::<Rational>(&text).unwrap(), exact);
        let float = parse_model::<f64>(DEMO_PARTIAL).unwrap();
        assert_eq!(parse_model::<f64>(&serialize_model(&float)).unwrap(), float);
        assert!(text.contains("{t1 t2} = 0.6"));
    }

    #[test]
    fn diagnostics_are_distinct() {
        assert_eq!(parse_err("").kind, ParseErrorKind::EmptyDocument);
        assert_eq!(parse_err("# only a comment\n").kind, ParseErrorKind::EmptyDocument);
        let e = parse_err("[frames\ndata = a\n");
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::MalformedSection, 1, 1));
        assert_eq!(parse_err("[bogus]\n").kind, ParseErrorKind::MalformedSection);
        let sum = DEMO_PARTIAL.replace("{t1 t2 t3} = 0.4", "{t1 t2 t3} = 0.39");
        let e = parse_err(&sum);
        assert_eq!(e.kind, ParseErrorKind::MassSum);
        assert_eq!(e.section.as_deref(), Some("prior"));
        assert!(e.to_string().contains("[prior]"));
        let rows = DEMO_VACUOUS.replace("t2 = 0.1 0.8 0.1", "t2 = 0.1 0.8 0.2");
        let e = parse_err(&rows);
        assert_eq!((e.kind, e.line), (ParseErrorKind::NonStochastic, 8));
        let interval = NORMAL_MEAN.replace("= 0.1", "= 0.09");
        let e = parse_err(&interval);
        assert_eq!(e.kind, ParseErrorKind::MassSum);
        assert_eq!(e.section.as_deref(), Some("interval-prior"));
    }

    #[test]
    fn diagnostics_carry_columns() {
        let text = DEMO_VACUOUS.replace("t3 = 0.05 0.15 0.8", "t3 = 0.05 x 0.8");
        let e = parse_err(&text);
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::InvalidNumber, 9, 11));
        let text = DEMO_PARTIAL.replace("{t1 t2} = 0.6", "{t1 t9} = 0.6");
        let e = parse_err(&text);
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::UnknownLabel, 12, 5));
        let e = parse_err("[likelihood]\nt1 = 1\n");
        assert_eq!(e.kind, ParseErrorKind::MissingEntry);
        let e = parse_err("[frames]\ndata = a\n");
        assert_eq!(e.kind, ParseErrorKind::MissingEntry);
        let e = parse_err("[frames]\ndata a\n");
        assert_eq!((e.kind, e.line), (ParseErrorKind::Syntax, 2));
    }

    #[test]
    fn standalone_mass_function_round_trip() {
        let text = "[frames]\nparam = a b c\n\n[prior]\n{a} = 1/4\n{a b c} = 3/4\n";
        let bundle = parse_model::<Rational>(text).unwrap();
        assert!(bundle.model.is_none());
        let mass = bundle.mass_function().unwrap();
        assert_eq!(mass.len(), 2);
        assert_eq!(parse_model::<Rational>(&serialize_model(&bundle)).unwrap(), bundle);
        assert!(parse_model::<f64>("[frames]\nparam = a b\n").is_err());
    }

    #[test]
    fn im_table_round_trip() {
        let model = parse_model::<Rational>(DEMO_PARTIAL).unwrap().credal().unwrap();
        let table = crate::credal::generalized_bayes_im(&model).unwrap();
        let text = serialize_im_table(&table);
        assert_eq!(parse_im_table::<Rational>(&text).unwrap(), table);
        let f = table.try_map(|_, _, v| v.clone()).unwrap();
        assert_eq!(f, table);
        let missing: String = text.lines().filter(|l| !l.starts_with("y2 {t1} ")).map(|l| format!("{l}\n")).collect();
        assert!(matches!(
            parse_im_table::<Rational>(&missing),
            Err(Error::Parse(ParseError { kind: ParseErrorKind::MissingEntry, .. }))
        ));
    }

    #[test]
    fn csv_round_trips() {
        let rows = vec![
            CurveRow { theta: 1.0, lower_vacuous: 0.0, upper_vacuous: 0.5, lower_combined: 0.1, upper_combined: 0.6 },
            CurveRow { theta: 2.5, lower_vacuous: 0.25, upper_vacuous: 1.0, lower_combined: 0.3, upper_combined: 1.0 },
        ];
        let mut buf = Vec::new();
        write_curve(&mut buf, &rows).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("theta,lower_vacuous,upper_vacuous,lower_combined,upper_combined\n"));
        assert_eq!(read_curve(&buf[..]).unwrap(), rows);
        let bad = b"theta,lower_vacuous,upper_vacuous,lower_combined,upper_combined\n2,0,0,0,0\n1,0,0,0,0\n";
        assert!(read_curve(&bad[..]).is_err());

        let t = crate::underworld::simulate_agent1(0.2, &Default::default(), 20, 1).unwrap();
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &t).unwrap();
        let back = read_trajectory(&buf[..]).unwrap();
        assert_eq!(back.len(), 20);
        assert_eq!(back[19], (20, t.final_capital()));

        let frame = Frame::new(["a", "b"]).unwrap();
        let log = vec![GambleRecord { round: 3, y: 0, theta: 1, hypothesis: frame.full(), beta: 0.25, payoff: 0.75 }];
        let mut buf = Vec::new();
        write_gamble_log(&mut buf, &log).unwrap();
        let back = read_gamble_log(&buf[..]).unwrap();
        assert_eq!(back, vec![GambleLogRow { round: 3, hypothesis: "{a b}".into(), beta: 0.25, payoff: 0.75 }]);
    }
}
