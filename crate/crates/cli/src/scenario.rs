//! Line-oriented scenario files: `[section]` headers followed by
//! `key = value` lines. Lines starting with `#` are comments.

use std::fmt;
use std::fmt::Write as _;

use momentkit_core::catalog;
use momentkit_core::kirwan::SearchParams;
use momentkit_core::reduction::{CutBase, SliceStatus};
use momentkit_core::symcheck::SpaceKind;
use momentkit_core::{eval_rep_expr, FactorSpec, GroupSpec, RepExpr};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    /// Orbit verdict at a given point.
    Verdict,
    /// Kirwan search for a Lagrangian point.
    Search,
    /// Circle reduction of a linear space, checked upstairs.
    Reduction,
    /// Symplectic cut, checked on `V x C`.
    Cut,
    /// Weighted projective space as a reduction of `V`.
    Weighted,
    /// Linear check on a slice module at a fixed point.
    Slice,
    /// Certification of a final-table row.
    Table,
    /// Known gap; reported, never run.
    Unsupported,
}

impl Pipeline {
    pub const ALL: [Pipeline; 8] = [
        Pipeline::Verdict,
        Pipeline::Search,
        Pipeline::Reduction,
        Pipeline::Cut,
        Pipeline::Weighted,
        Pipeline::Slice,
        Pipeline::Table,
        Pipeline::Unsupported,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::Verdict => "verdict",
            Pipeline::Search => "search",
            Pipeline::Reduction => "reduction",
            Pipeline::Cut => "cut",
            Pipeline::Weighted => "weighted",
            Pipeline::Slice => "slice",
            Pipeline::Table => "table",
            Pipeline::Unsupported => "unsupported",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Pipeline {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown pipeline `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    /// One weight per coordinate slot of the module.
    pub weights: Vec<i64>,
    pub level: f64,
    /// Required for cuts.
    pub base: Option<CutBase>,
    /// Line coordinate of a cut; derived from the level when absent.
    pub line: Option<Complex64>,
    /// Name of the cut space used in the downstairs claim.
    pub target: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSpec {
    /// Complex dimension of the first summand.
    pub split: usize,
    pub k: u32,
    pub s: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expected {
    pub lagrangian: Option<bool>,
    pub orbit_dim: Option<usize>,
    pub isotropy_dim: Option<usize>,
    pub moduli_dim: Option<usize>,
    pub dim_p: Option<usize>,
    pub reduced_orbit_dim: Option<usize>,
    pub claim: Option<bool>,
    pub isolated: Option<bool>,
    pub ss_transitive: Option<bool>,
    pub found: Option<bool>,
    pub slice_status: Option<SliceStatus>,
}

impl Expected {
    pub fn is_empty(&self) -> bool {
        *self == Expected::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub pipeline: Pipeline,
    pub space: Option<SpaceKind>,
    pub citation: Option<String>,
    pub notes: Vec<String>,
    /// Why an `unsupported` scenario is not run.
    pub reason: Option<String>,
    pub group: Option<GroupSpec>,
    pub rep: Option<RepExpr>,
    /// Unnormalized point; absent means search (where the pipeline allows it).
    pub point: Option<Vec<Complex64>>,
    pub circle: Option<CircleSpec>,
    pub weighted: Option<WeightedSpec>,
    pub ambient: Option<String>,
    pub table_row: Option<String>,
    pub search: Option<SearchParams>,
    pub expected: Expected,
}

impl Scenario {
    pub fn new(name: impl Into<String>, pipeline: Pipeline) -> Self {
        Self {
            name: name.into(),
            pipeline,
            space: None,
            citation: None,
            notes: Vec::new(),
            reason: None,
            group: None,
            rep: None,
            point: None,
            circle: None,
            weighted: None,
            ambient: None,
            table_row: None,
            search: None,
            expected: Expected::default(),
        }
    }

    /// Render in the scenario grammar; `parse_scenario` inverts this.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("name", &self.name);
        line("pipeline", &self.pipeline);
        if let Some(s) = self.space {
            line("space", &s);
        }
        if let Some(c) = &self.citation {
            line("citation", c);
        }
        for n in &self.notes {
            line("note", n);
        }
        if let Some(r) = &self.reason {
            line("reason", r);
        }
        let mut text = format!("[scenario]\n{out}");
        let mut section = |title: &str, rows: Vec<(&str, String)>| {
            if rows.is_empty() {
                return;
            }
            let _ = writeln!(text, "\n[{title}]");
            for (k, v) in rows {
                let _ = writeln!(text, "{k} = {v}");
            }
        };
        let mut group = Vec::new();
        if let Some(g) = &self.group {
            for f in &g.factors {
                group.push(("factor", f.to_string()));
            }
        }
        if let Some(r) = &self.rep {
            group.push(("rep", r.to_string()));
        }
        section("group", group);
        if let Some(p) = &self.point {
            let nonzero = p.iter().filter(|c| **c != Complex64::new(0.0, 0.0)).count();
            let row = if 2 * nonzero < p.len() {
                let parts: Vec<String> = p
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
                    .map(|(i, c)| format!("{i}:{}", format_complex(*c)))
                    .collect();
                vec![("dim", p.len().to_string()), ("entries", parts.join(", "))]
            } else {
                vec![("coords", p.iter().map(|c| format_complex(*c)).collect::<Vec<_>>().join(", "))]
            };
            section("point", row);
        }
        if let Some(c) = &self.circle {
            let mut rows = vec![("weights", join_ints(&c.weights)), ("level", c.level.to_string())];
            if let Some(b) = c.base {
                rows.push(("base", cut_base_str(b).to_string()));
            }
            if let Some(z) = c.line {
                rows.push(("line", format_complex(z)));
            }
            if let Some(t) = &c.target {
                rows.push(("target", t.clone()));
            }
            section("circle", rows);
        }
        if let Some(w) = &self.weighted {
            section(
                "weighted",
                vec![("split", w.split.to_string()), ("k", w.k.to_string()), ("s", w.s.to_string())],
            );
        }
        if let Some(a) = &self.ambient {
            section("slice", vec![("ambient", a.clone())]);
        }
        if let Some(r) = &self.table_row {
            section("table", vec![("row", r.clone())]);
        }
        if let Some(p) = &self.search {
            section(
                "search",
                vec![
                    ("starts", p.starts.to_string()),
                    ("seed", p.rng_seed.to_string()),
                    ("max_iters", p.max_iters.to_string()),
                    ("armijo_c", p.armijo_c.to_string()),
                    ("shrink", p.shrink.to_string()),
                    ("grad_tol", p.grad_tol.to_string()),
                    ("f_tol", p.f_tol.to_string()),
                ],
            );
        }
        let e = &self.expected;
        let mut rows = Vec::new();
        let mut push = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                rows.push((k, v));
            }
        };
        push("lagrangian", e.lagrangian.map(|b| b.to_string()));
        push("orbit_dim", e.orbit_dim.map(|b| b.to_string()));
        push("isotropy_dim", e.isotropy_dim.map(|b| b.to_string()));
        push("moduli_dim", e.moduli_dim.map(|b| b.to_string()));
        push("dim_p", e.dim_p.map(|b| b.to_string()));
        push("reduced_orbit_dim", e.reduced_orbit_dim.map(|b| b.to_string()));
        push("claim", e.claim.map(|b| b.to_string()));
        push("isolated", e.isolated.map(|b| b.to_string()));
        push("ss_transitive", e.ss_transitive.map(|b| b.to_string()));
        push("found", e.found.map(|b| b.to_string()));
        push("slice_status", e.slice_status.map(|s| slice_status_str(s).to_string()));
        section("expected", rows);
        text
    }
}

fn join_ints(w: &[i64]) -> String {
    w.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")
}

pub fn cut_base_str(b: CutBase) -> &'static str {
    match b {
        CutBase::Linear => "linear",
        CutBase::Projective => "projective",
    }
}

pub fn slice_status_str(s: SliceStatus) -> &'static str {
    match s {
        SliceStatus::Supported => "supported",
        SliceStatus::NoConclusion => "no_conclusion",
    }
}

/// Shortest round-tripping form: `a`, `bi`, `a+bi` or `a-bi`.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 && !c.im.is_sign_negative() {
        c.re.to_string()
    } else if c.re == 0.0 && !c.re.is_sign_negative() {
        format!("{}i", c.im)
    } else if c.im.is_sign_negative() {
        format!("{}-{}i", c.re, -c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Accepts `a`, `bi`, `i`, `-i`, `a+bi`, `a-i`, with exponents allowed in
/// either part.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("malformed complex literal `{}`", s.trim());
    if t.is_empty() {
        return Err(bad());
    }
    let real = |x: &str| -> Result<f64, String> {
        let v: f64 = x.parse().map_err(|_| bad())?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad())
        }
    };
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex64::new(real(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let imag = |x: &str| -> Result<f64, String> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => real(x),
        }
    };
    match split {
        Some(j) => Ok(Complex64::new(real(&body[..j])?, imag(&body[j..])?)),
        None => Ok(Complex64::new(0.0, imag(body)?)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based; 0 when the error concerns the file as a whole.
    pub line: usize,
    /// 1-based byte column.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<ParseError>);

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

/// A value with the position of its first byte.
#[derive(Debug, Clone)]
struct Item {
    line: usize,
    column: usize,
    value: String,
}

#[derive(Default)]
struct Collector {
    errors: Vec<ParseError>,
}

impl Collector {
    fn at(&mut self, it: &Item, message: impl Into<String>) {
        self.errors.push(ParseError {
            line: it.line,
            column: it.column,
            message: message.into(),
        });
    }

    fn at_offset(&mut self, it: &Item, offset: usize, message: impl Into<String>) {
        self.errors.push(ParseError {
            line: it.line,
            column: it.column + offset,
            message: message.into(),
        });
    }
}

const SECTIONS: [(&str, &[&str]); 9] = [
    ("scenario", &["name", "pipeline", "space", "citation", "note", "reason"]),
    ("group", &["factor", "rep"]),
    ("point", &["coords", "entries", "dim"]),
    ("circle", &["weights", "level", "base", "line", "target"]),
    ("weighted", &["split", "k", "s"]),
    ("slice", &["ambient"]),
    ("table", &["row"]),
    ("search", &["starts", "seed", "max_iters", "armijo_c", "shrink", "grad_tol", "f_tol"]),
    (
        "expected",
        &[
            "lagrangian",
            "orbit_dim",
            "isotropy_dim",
            "moduli_dim",
            "dim_p",
            "reduced_orbit_dim",
            "claim",
            "isolated",
            "ss_transitive",
            "found",
            "slice_status",
        ],
    ),
];

const REPEATABLE: [&str; 2] = ["note", "factor"];

/// Raw `(section, key) -> items` table in file order.
struct Raw {
    entries: Vec<(String, String, Item)>,
    sections_seen: Vec<(String, usize)>,
}

impl Raw {
    fn all(&self, section: &str, key: &str) -> Vec<&Item> {
        self.entries
            .iter()
            .filter(|(s, k, _)| s == section && k == key)
            .map(|(_, _, it)| it)
            .collect()
    }

    fn one(&self, section: &str, key: &str) -> Option<&Item> {
        self.all(section, key).into_iter().next()
    }

    fn has_section(&self, section: &str) -> bool {
        self.sections_seen.iter().any(|(s, _)| s == section)
    }
}

fn lex(text: &str, col: &mut Collector) -> Raw {
    let mut raw = Raw {
        entries: Vec::new(),
        sections_seen: Vec::new(),
    };
    let mut current: Option<String> = None;
    for (idx, line) in text.lines().enumerate() {
        let ln = idx + 1;
        let lead = line.len() - line.trim_start().len();
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix('[') {
            let Some(name) = rest.strip_suffix(']') else {
                col.errors.push(ParseError {
                    line: ln,
                    column: lead + t.len(),
                    message: "section header is missing `]`".into(),
                });
                continue;
            };
            let name = name.trim();
            if !SECTIONS.iter().any(|(s, _)| *s == name) {
                col.errors.push(ParseError {
                    line: ln,
                    column: lead + 2,
                    message: format!("unknown section `[{name}]`"),
                });
                current = None;
                continue;
            }
            if raw.sections_seen.iter().any(|(s, _)| s == name) {
                col.errors.push(ParseError {
                    line: ln,
                    column: lead + 1,
                    message: format!("section `[{name}]` appears twice"),
                });
            }
            raw.sections_seen.push((name.to_string(), ln));
            current = Some(name.to_string());
            continue;
        }
        let Some(eq) = t.find('=') else {
            col.errors.push(ParseError {
                line: ln,
                column: lead + 1,
                message: "expected `key = value`".into(),
            });
            continue;
        };
        let key = t[..eq].trim();
        let after = &t[eq + 1..];
        let vlead = after.len() - after.trim_start().len();
        let value = after.trim();
        let vcol = lead + eq + 1 + vlead + 1;
        let Some(section) = current.clone() else {
            col.errors.push(ParseError {
                line: ln,
                column: lead + 1,
                message: format!("key `{key}` outside of any section"),
            });
            continue;
        };
        let keys = SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, k)| *k).unwrap_or(&[]);
        if !keys.contains(&key) {
            col.errors.push(ParseError {
                line: ln,
                column: lead + 1,
                message: format!("unknown key `{key}` in `[{section}]`"),
            });
            continue;
        }
        if !REPEATABLE.contains(&key) && raw.entries.iter().any(|(s, k, _)| *s == section && k == key) {
            col.errors.push(ParseError {
                line: ln,
                column: lead + 1,
                message: format!("duplicate key `{key}`"),
            });
            continue;
        }
        if value.is_empty() {
            col.errors.push(ParseError {
                line: ln,
                column: vcol,
                message: format!("key `{key}` has an empty value"),
            });
            continue;
        }
        raw.entries.push((
            section,
            key.to_string(),
            Item {
                line: ln,
                column: vcol,
                value: value.to_string(),
            },
        ));
    }
    raw
}

fn parse_with<T>(col: &mut Collector, it: Option<&Item>, f: impl Fn(&str) -> Result<T, String>) -> Option<T> {
    let it = it?;
    match f(&it.value) {
        Ok(v) => Some(v),
        Err(m) => {
            col.at(it, m);
            None
        }
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("expected `true` or `false`, got `{s}`")),
    }
}

fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String> {
    s.parse().map_err(|_| format!("`{s}` is not a valid number"))
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = parse_num(s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn parse_int_list(s: &str) -> Result<Vec<i64>, String> {
    s.split(',').map(|t| parse_num::<i64>(t.trim())).collect()
}

/// Comma-separated complex literals with the offset of each element.
fn split_list(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = 0;
    for part in s.split(',') {
        let lead = part.len() - part.trim_start().len();
        out.push((start + lead, part.trim()));
        start += part.len() + 1;
    }
    out
}

fn parse_point(col: &mut Collector, raw: &Raw) -> Option<(Vec<Complex64>, Item)> {
    let coords = raw.one("point", "coords");
    let entries = raw.one("point", "entries");
    let dim = raw.one("point", "dim");
    match (coords, entries) {
        (Some(c), None) => {
            if let Some(d) = dim {
                col.at(d, "`dim` is only used with `entries`");
            }
            let mut out = Vec::new();
            let mut ok = true;
            for (off, tok) in split_list(&c.value) {
                match parse_complex(tok) {
                    Ok(z) => out.push(z),
                    Err(m) => {
                        col.at_offset(c, off, m);
                        ok = false;
                    }
                }
            }
            ok.then(|| (out, c.clone()))
        }
        (None, Some(e)) => {
            let Some(d) = dim else {
                col.at(e, "`entries` needs a `dim` line");
                return None;
            };
            let n: usize = parse_with(col, Some(d), parse_num)?;
            let mut out = vec![Complex64::new(0.0, 0.0); n];
            let mut ok = true;
            for (off, tok) in split_list(&e.value) {
                let Some((i, v)) = tok.split_once(':') else {
                    col.at_offset(e, off, format!("entry `{tok}` is not `index:value`"));
                    ok = false;
                    continue;
                };
                match (i.trim().parse::<usize>(), parse_complex(v)) {
                    (Ok(i), Ok(v)) if i < n => out[i] = v,
                    (Ok(i), Ok(_)) => {
                        col.at_offset(e, off, format!("index {i} out of range for dim {n}"));
                        ok = false;
                    }
                    (Err(_), _) => {
                        col.at_offset(e, off, format!("`{}` is not an index", i.trim()));
                        ok = false;
                    }
                    (_, Err(m)) => {
                        col.at_offset(e, off + i.len() + 1, m);
                        ok = false;
                    }
                }
            }
            ok.then(|| (out, e.clone()))
        }
        (Some(_), Some(e)) => {
            col.at(e, "give either `coords` or `entries`, not both");
            None
        }
        (None, None) => {
            if let Some(d) = dim {
                col.at(d, "`dim` without `entries`");
            }
            None
        }
    }
}

fn parse_cut_base(s: &str) -> Result<CutBase, String> {
    match s {
        "linear" => Ok(CutBase::Linear),
        "projective" => Ok(CutBase::Projective),
        _ => Err(format!("cut base must be `linear` or `projective`, got `{s}`")),
    }
}

fn parse_slice_status(s: &str) -> Result<SliceStatus, String> {
    match s {
        "supported" => Ok(SliceStatus::Supported),
        "no_conclusion" => Ok(SliceStatus::NoConclusion),
        _ => Err(format!("slice status must be `supported` or `no_conclusion`, got `{s}`")),
    }
}

/// Parse bytes in the scenario grammar.
pub fn parse_scenario_bytes(bytes: &[u8]) -> Result<Scenario, ParseErrors> {
    match std::str::from_utf8(bytes) {
        Ok(s) => parse_scenario(s),
        Err(e) => {
            let prefix = &bytes[..e.valid_up_to()];
            let line = prefix.iter().filter(|&&b| b == b'\n').count() + 1;
            let column = prefix.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
            Err(ParseErrors(vec![ParseError {
                line,
                column,
                message: "input is not valid UTF-8".into(),
            }]))
        }
    }
}

/// Parse and validate a scenario, including evaluating its representation.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseErrors> {
    let mut col = Collector::default();
    let raw = lex(text, &mut col);
    if raw.entries.is_empty() && col.errors.is_empty() {
        return Err(ParseErrors(vec![ParseError {
            line: 0,
            column: 0,
            message: "empty scenario".into(),
        }]));
    }
    let name = raw.one("scenario", "name").map(|i| i.value.clone());
    let pipeline = parse_with(&mut col, raw.one("scenario", "pipeline"), |s| s.parse::<Pipeline>());
    let space = parse_with(&mut col, raw.one("scenario", "space"), |s| s.parse::<SpaceKind>());
    let mut sc = Scenario::new(name.clone().unwrap_or_default(), pipeline.unwrap_or(Pipeline::Verdict));
    sc.space = space;
    sc.citation = raw.one("scenario", "citation").map(|i| i.value.clone());
    sc.notes = raw.all("scenario", "note").into_iter().map(|i| i.value.clone()).collect();
    sc.reason = raw.one("scenario", "reason").map(|i| i.value.clone());

    let mut factors = Vec::new();
    for it in raw.all("group", "factor") {
        match it.value.parse::<FactorSpec>() {
            Ok(f) => factors.push(f),
            Err(m) => col.at(it, m),
        }
    }
    if !factors.is_empty() {
        sc.group = Some(GroupSpec::new(factors));
    }
    if let Some(it) = raw.one("group", "rep") {
        match it.value.parse::<RepExpr>() {
            Ok(r) => sc.rep = Some(r),
            Err(e) => col.at_offset(it, e.offset, e.message),
        }
    }
    let point = parse_point(&mut col, &raw);
    sc.point = point.as_ref().map(|(p, _)| p.clone());

    if raw.has_section("circle") {
        let weights = parse_with(&mut col, raw.one("circle", "weights"), parse_int_list);
        let level = parse_with(&mut col, raw.one("circle", "level"), parse_finite);
        let base = parse_with(&mut col, raw.one("circle", "base"), parse_cut_base);
        let line = parse_with(&mut col, raw.one("circle", "line"), parse_complex);
        let target = raw.one("circle", "target").map(|i| i.value.clone());
        match (weights, level) {
            (Some(weights), Some(level)) => {
                sc.circle = Some(CircleSpec {
                    weights,
                    level,
                    base,
                    line,
                    target,
                })
            }
            _ => missing(&mut col, &raw, "circle", &["weights", "level"]),
        }
    }
    if raw.has_section("weighted") {
        let split = parse_with(&mut col, raw.one("weighted", "split"), parse_num::<usize>);
        let k = parse_with(&mut col, raw.one("weighted", "k"), parse_num::<u32>);
        let s = parse_with(&mut col, raw.one("weighted", "s"), parse_num::<u32>);
        match (split, k, s) {
            (Some(split), Some(k), Some(s)) => sc.weighted = Some(WeightedSpec { split, k, s }),
            _ => missing(&mut col, &raw, "weighted", &["split", "k", "s"]),
        }
    }
    sc.ambient = raw.one("slice", "ambient").map(|i| i.value.clone());
    sc.table_row = raw.one("table", "row").map(|i| i.value.clone());
    if raw.has_section("search") {
        let mut p = SearchParams::default();
        if let Some(v) = parse_with(&mut col, raw.one("search", "starts"), parse_num) {
            p.starts = v;
        }
        if let Some(v) = parse_with(&mut col, raw.one("search", "seed"), parse_num) {
            p.rng_seed = v;
        }
        if let Some(v) = parse_with(&mut col, raw.one("search", "max_iters"), parse_num) {
            p.max_iters = v;
        }
        if let Some(v) = parse_with(&mut col, raw.one("search", "armijo_c"), parse_finite) {
            p.armijo_c = v;
        }
        if let Some(v) = parse_with(&mut col, raw.one("search", "shrink"), parse_finite) {
            p.shrink = v;
        }
        if let Some(v) = parse_with(&mut col, raw.one("search", "grad_tol"), parse_finite) {
            p.grad_tol = v;
        }
        if let Some(v) = parse_with(&mut col, raw.one("search", "f_tol"), parse_finite) {
            p.f_tol = v;
        }
        if let Err(m) = p.validate() {
            let line = header_line(&raw, "search");
            col.errors.push(ParseError { line, column: 1, message: m });
        }
        sc.search = Some(p);
    }
    let e = &mut sc.expected;
    e.lagrangian = parse_with(&mut col, raw.one("expected", "lagrangian"), parse_bool);
    e.orbit_dim = parse_with(&mut col, raw.one("expected", "orbit_dim"), parse_num);
    e.isotropy_dim = parse_with(&mut col, raw.one("expected", "isotropy_dim"), parse_num);
    e.moduli_dim = parse_with(&mut col, raw.one("expected", "moduli_dim"), parse_num);
    e.dim_p = parse_with(&mut col, raw.one("expected", "dim_p"), parse_num);
    e.reduced_orbit_dim = parse_with(&mut col, raw.one("expected", "reduced_orbit_dim"), parse_num);
    e.claim = parse_with(&mut col, raw.one("expected", "claim"), parse_bool);
    e.isolated = parse_with(&mut col, raw.one("expected", "isolated"), parse_bool);
    e.ss_transitive = parse_with(&mut col, raw.one("expected", "ss_transitive"), parse_bool);
    e.found = parse_with(&mut col, raw.one("expected", "found"), parse_bool);
    e.slice_status = parse_with(&mut col, raw.one("expected", "slice_status"), parse_slice_status);

    if name.is_none() {
        missing(&mut col, &raw, "scenario", &["name"]);
    }
    if pipeline.is_none() && raw.one("scenario", "pipeline").is_none() {
        missing(&mut col, &raw, "scenario", &["pipeline"]);
    }
    if col.errors.is_empty() {
        validate(&sc, &raw, point.as_ref().map(|(_, it)| it), &mut col);
    }
    if col.errors.is_empty() {
        Ok(sc)
    } else {
        col.errors.sort_by_key(|e| (e.line, e.column));
        Err(ParseErrors(col.errors))
    }
}

fn missing(col: &mut Collector, raw: &Raw, section: &str, keys: &[&str]) {
    let line = raw
        .sections_seen
        .iter()
        .find(|(s, _)| s == section)
        .map(|(_, l)| *l)
        .unwrap_or(0);
    for k in keys {
        if raw.one(section, k).is_none() {
            col.errors.push(ParseError {
                line,
                column: 1,
                message: format!("`[{section}]` is missing `{k}`"),
            });
        }
    }
}

fn header_line(raw: &Raw, section: &str) -> usize {
    raw.sections_seen
        .iter()
        .find(|(s, _)| s == section)
        .map(|(_, l)| *l)
        .unwrap_or(0)
}

/// Cross-field checks: required sections per pipeline and dimensions
/// against the evaluated module.
fn validate(sc: &Scenario, raw: &Raw, point_item: Option<&Item>, col: &mut Collector) {
    let need = |col: &mut Collector, ok: bool, section: &str, what: &str| {
        if !ok {
            col.errors.push(ParseError {
                line: header_line(raw, section),
                column: 1,
                message: format!("pipeline `{}` needs {what}", sc.pipeline),
            });
        }
    };
    match sc.pipeline {
        Pipeline::Unsupported => {
            need(col, sc.reason.is_some(), "scenario", "a `reason`");
            return;
        }
        Pipeline::Table => {
            let Some(row) = &sc.table_row else {
                need(col, false, "table", "a `[table] row`");
                return;
            };
            if let Err(e) = catalog::table_entry(row) {
                let it = raw.one("table", "row").expect("row parsed");
                col.at(it, e.to_string());
            }
            return;
        }
        _ => {}
    }
    let (Some(group), Some(rep)) = (&sc.group, &sc.rep) else {
        need(col, false, "group", "`[group]` factors and a `rep`");
        return;
    };
    let r = match eval_rep_expr(group, rep) {
        Ok(r) => r,
        Err(e) => {
            let it = raw.one("group", "rep").expect("rep parsed");
            col.at(it, e.to_string());
            return;
        }
    };
    let dim = r.dim_v();
    match sc.pipeline {
        Pipeline::Verdict => {
            need(col, sc.space.is_some(), "scenario", "a `space`");
            need(col, sc.point.is_some(), "point", "a `[point]`");
        }
        Pipeline::Search | Pipeline::Slice => {
            need(col, sc.space.is_some(), "scenario", "a `space`");
            if sc.pipeline == Pipeline::Slice {
                need(col, sc.ambient.is_some(), "slice", "an `[slice] ambient`");
            }
        }
        Pipeline::Reduction | Pipeline::Cut => {
            need(col, sc.point.is_some(), "point", "a `[point]`");
            match &sc.circle {
                None => need(col, false, "circle", "a `[circle]`"),
                Some(c) => {
                    if c.weights.len() != dim {
                        let it = raw.one("circle", "weights").expect("weights parsed");
                        col.at(it, format!("{} circle weights, expected dimV = {dim}", c.weights.len()));
                    }
                    if sc.pipeline == Pipeline::Cut {
                        need(col, c.base.is_some(), "circle", "a circle `base`");
                    }
                }
            }
        }
        Pipeline::Weighted => {
            need(col, sc.point.is_some(), "point", "a `[point]`");
            match &sc.weighted {
                None => need(col, false, "weighted", "a `[weighted]` section"),
                Some(w) if w.split == 0 || w.split >= dim => {
                    let it = raw.one("weighted", "split").expect("split parsed");
                    col.at(it, format!("split {} must lie strictly between 0 and dimV = {dim}", w.split));
                }
                Some(_) => {}
            }
        }
        Pipeline::Table | Pipeline::Unsupported => unreachable!(),
    }
    if let (Some(p), Some(it)) = (&sc.point, point_item) {
        if p.len() != dim {
            col.at(it, format!("point has {} coordinates, expected dimV = {dim}", p.len()));
        } else if p.iter().all(|c| c.norm() == 0.0) && sc.space == Some(SpaceKind::Projective) {
            col.at(it, "zero vector has no projective class");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const QUI: &str = "\
[scenario]
name = example-qui
pipeline = verdict
space = linear

[group]
factor = u1 slots: -1, -1, 0, 0
factor = su 2
rep = sum(def(1), def(1))

[point]
coords = 1, 1, 1, -1

[expected]
lagrangian = true
orbit_dim = 4
moduli_dim = 1
";

    #[test]
    fn complex_literals() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("1").unwrap(), c(1.0, 0.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("2.5i").unwrap(), c(0.0, 2.5));
        assert_eq!(parse_complex("0.5+2i").unwrap(), c(0.5, 2.0));
        assert_eq!(parse_complex("1e-3-2.5e2i").unwrap(), c(1e-3, -250.0));
        assert_eq!(parse_complex("-1 - i").unwrap(), c(-1.0, -1.0));
        assert_eq!(parse_complex("1e+2+i").unwrap(), c(100.0, 1.0));
        for bad in ["", "x", "1+", "1+2", "ii", "1+2j", "nan", "inf"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn complex_format_round_trips() {
        for z in [
            Complex64::new(0.1, 0.0),
            Complex64::new(0.0, -0.3),
            Complex64::new(-1.0 / 3.0, 2e-17),
            Complex64::new(1e21, -1e-21),
            Complex64::new(-0.0, 0.0),
        ] {
            let back = parse_complex(&format_complex(z)).unwrap();
            assert_eq!(back, z, "{}", format_complex(z));
        }
    }

    #[test]
    fn parses_qui() {
        let s = parse_scenario(QUI).unwrap();
        assert_eq!(s.name, "example-qui");
        assert_eq!(s.group.as_ref().unwrap().factors.len(), 2);
        assert_eq!(s.point.as_ref().unwrap().len(), 4);
        assert_eq!(s.expected.moduli_dim, Some(1));
    }

    #[test]
    fn text_round_trip() {
        let s = parse_scenario(QUI).unwrap();
        assert_eq!(parse_scenario(&s.to_text()).unwrap(), s);
    }

    #[test]
    fn empty_file_is_an_error() {
        let e = parse_scenario("").unwrap_err();
        assert_eq!(e.0.len(), 1);
        assert!(parse_scenario("# only a comment\n\n").is_err());
    }

    #[test]
    fn wrong_point_length_names_dim() {
        let text = QUI.replace("coords = 1, 1, 1, -1", "coords = 1, 1, 1");
        let e = parse_scenario(&text).unwrap_err();
        assert!(e.0[0].message.contains("expected dimV = 4"), "{e}");
        assert_eq!(e.0[0].line, 12);
    }

    #[test]
    fn positioned_errors() {
        let text = QUI.replace("coords = 1, 1, 1, -1", "coords = 1, 1, 1+q, -1");
        let e = parse_scenario(&text).unwrap_err();
        assert_eq!((e.0[0].line, e.0[0].column), (12, 16));
        assert!(e.0[0].message.contains("malformed complex literal"));

        let text = QUI.replace("factor = su 2", "factor = xx 2");
        let e = parse_scenario(&text).unwrap_err();
        assert_eq!((e.0[0].line, e.0[0].column), (8, 10));

        let text = QUI.replace("rep = sum(def(1), def(1))", "rep = sum(def(1), dof(1))");
        let e = parse_scenario(&text).unwrap_err();
        assert_eq!(e.0[0].line, 9);
        assert!(e.0[0].column > 7);

        let e = parse_scenario("[scenario]\nname x\n").unwrap_err();
        assert!(e.0.iter().any(|x| (x.line, x.column) == (2, 1) && x.message.contains("key = value")), "{e}");
    }

    #[test]
    fn entries_form() {
        let text = QUI.replace("coords = 1, 1, 1, -1", "dim = 4\nentries = 0:1, 3:-1");
        let s = parse_scenario(&text).unwrap();
        let p = s.point.unwrap();
        assert_eq!(p[3], Complex64::new(-1.0, 0.0));
        assert_eq!(p[1], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn duplicate_and_unknown_keys() {
        let text = QUI.replace("orbit_dim = 4", "orbit_dim = 4\norbit_dim = 5\ncolour = red");
        let e = parse_scenario(&text).unwrap_err();
        assert_eq!(e.0.len(), 2);
    }
}
