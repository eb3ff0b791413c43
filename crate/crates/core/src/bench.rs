//! Judge-score validation, benchmark aggregation and human alignment.
//!
//! Judge responses are produced outside this crate (renderers, VLM
//! judges) and arrive as text files:
//!
//! ```text
//! JUDGE v1
//! response {
//!   asset_id "cabinet"
//!   geometry {
//!     clip 0.31
//!     consistency_3d 82
//!     visual_quality 4
//!   }
//!   scale {
//!     judged_max_dim_m 1.2
//!   }
//!   material {
//!     freefall 70
//!     waterdrop 64
//!   }
//!   affordance 75
//!   kinematics {
//!     prior_part 80
//!     revealed_entity 70
//!     global_coherence 90
//!   }
//!   description 66
//! }
//! ```
//!
//! A file holds one or more `response` blocks. Every block after
//! `asset_id` is optional but, when present, appears in the order above.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::asset::PhysicalAsset;
use crate::kvtext::{self, Fields, KvError, Node, Writer};
use crate::metrics::{self, MetricError};

pub const JUDGE_HEADER: &str = "JUDGE v1";
pub const DEFAULT_KIN_WEIGHTS: [f64; 3] = [0.4, 0.2, 0.4];

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("judge syntax error at {0}")]
    Syntax(#[from] KvError),
    #[error("invalid judge response: {}", join(.0))]
    Invalid(Vec<JudgeViolation>),
    #[error("unmatched asset id `{0}`")]
    Unmatched(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("score table: {0}")]
    Table(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
}

fn join(v: &[JudgeViolation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Benchmark dimensions a judge can be asked to score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimension {
    Geometry,
    Scale,
    Material,
    Affordance,
    Kinematics,
    Description,
}

impl Dimension {
    pub const ALL: [Dimension; 6] = [
        Dimension::Geometry,
        Dimension::Scale,
        Dimension::Material,
        Dimension::Affordance,
        Dimension::Kinematics,
        Dimension::Description,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Dimension::Geometry => "geometry",
            Dimension::Scale => "scale",
            Dimension::Material => "material",
            Dimension::Affordance => "affordance",
            Dimension::Kinematics => "kinematics",
            Dimension::Description => "description",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|d| d.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeometryJudgement {
    /// In [0, 1].
    pub clip: f64,
    pub consistency_3d: f64,
    /// Grade 1 (very poor) to 5 (excellent).
    pub visual_quality: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleJudgement {
    pub judged_max_dim_m: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialJudgement {
    pub freefall: f64,
    pub waterdrop: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KinematicsJudgement {
    pub prior_part: f64,
    pub revealed_entity: f64,
    pub global_coherence: f64,
}

impl KinematicsJudgement {
    pub fn scores(&self) -> [f64; 3] {
        [self.prior_part, self.revealed_entity, self.global_coherence]
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct JudgeResponse {
    pub asset_id: String,
    pub geometry: Option<GeometryJudgement>,
    pub scale: Option<ScaleJudgement>,
    pub material: Option<MaterialJudgement>,
    pub affordance: Option<f64>,
    pub kinematics: Option<KinematicsJudgement>,
    pub description: Option<f64>,
}

impl JudgeResponse {
    pub fn has(&self, d: Dimension) -> bool {
        match d {
            Dimension::Geometry => self.geometry.is_some(),
            Dimension::Scale => self.scale.is_some(),
            Dimension::Material => self.material.is_some(),
            Dimension::Affordance => self.affordance.is_some(),
            Dimension::Kinematics => self.kinematics.is_some(),
            Dimension::Description => self.description.is_some(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JudgeViolation {
    pub asset_id: String,
    pub field: String,
    pub rule: String,
}

impl fmt::Display for JudgeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`: {}: {}", self.asset_id, self.field, self.rule)
    }
}

/// Range checks on every present field plus presence of each `requested`
/// dimension.
pub fn validate_judge(r: &JudgeResponse, requested: &[Dimension]) -> Vec<JudgeViolation> {
    let mut v = Vec::new();
    let mut push = |field: &str, rule: String| {
        v.push(JudgeViolation {
            asset_id: r.asset_id.clone(),
            field: field.to_string(),
            rule,
        })
    };
    if r.asset_id.is_empty() {
        push("asset_id", "must not be empty".into());
    }
    for &d in requested {
        if !r.has(d) {
            push(d.name(), "missing but requested".into());
        }
    }
    let mut range = |field: &str, x: f64, lo: f64, hi: f64| {
        if !(lo..=hi).contains(&x) {
            push(field, format!("{x} outside [{lo}, {hi}]"));
        }
    };
    if let Some(g) = &r.geometry {
        range("geometry.clip", g.clip, 0.0, 1.0);
        range("geometry.consistency_3d", g.consistency_3d, 0.0, 100.0);
    }
    if let Some(m) = &r.material {
        range("material.freefall", m.freefall, 0.0, 100.0);
        range("material.waterdrop", m.waterdrop, 0.0, 100.0);
    }
    if let Some(a) = r.affordance {
        range("affordance", a, 0.0, 100.0);
    }
    if let Some(k) = &r.kinematics {
        range("kinematics.prior_part", k.prior_part, 0.0, 100.0);
        range("kinematics.revealed_entity", k.revealed_entity, 0.0, 100.0);
        range("kinematics.global_coherence", k.global_coherence, 0.0, 100.0);
    }
    if let Some(d) = r.description {
        range("description", d, 0.0, 100.0);
    }
    if let Some(g) = &r.geometry {
        if !(1..=5).contains(&g.visual_quality) {
            push("geometry.visual_quality", format!("grade {} outside 1..=5", g.visual_quality));
        }
    }
    if let Some(s) = &r.scale {
        if !(s.judged_max_dim_m > 0.0 && s.judged_max_dim_m.is_finite()) {
            push("scale.judged_max_dim_m", format!("{} must be positive", s.judged_max_dim_m));
        }
    }
    v
}

/// Grade 1..=5 onto {0, 25, 50, 75, 100}.
pub fn visual_quality_score(grade: i64) -> Result<f64, BenchError> {
    if !(1..=5).contains(&grade) {
        return Err(BenchError::InvalidInput(format!("visual quality grade {grade} outside 1..=5")));
    }
    Ok((grade - 1) as f64 * 25.0)
}

// Neumaier-compensated sum; weights such as 0.1, 0.2, 0.3 sum to exactly 0.6.
fn compensated_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// Weighted mean `Σ wᵢsᵢ / Σ wᵢ` of the three kinematics sub-scores.
pub fn aggregate_kinematics(scores: [f64; 3], weights: [f64; 3]) -> Result<f64, BenchError> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(BenchError::InvalidInput(format!("weights {weights:?} must be non-negative")));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(BenchError::InvalidInput(format!("scores {scores:?} must be finite")));
    }
    let total = compensated_sum(weights);
    if total <= 0.0 {
        return Err(BenchError::InvalidInput("weights sum to zero".into()));
    }
    Ok(compensated_sum((0..3).map(|i| weights[i] * scores[i])) / total)
}

pub fn parse_kin_weights(s: &str) -> Result<[f64; 3], BenchError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || BenchError::InvalidInput(format!("expected three comma-separated weights, found `{s}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut w = [0.0; 3];
    for (o, p) in w.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| bad())?;
    }
    aggregate_kinematics([0.0; 3], w)?;
    Ok(w)
}

fn parse_grade(node: &Node) -> Result<i64, KvError> {
    let a = &node.expect_leaf(1)?[0];
    let w = a.word()?;
    let digits = w.strip_prefix('-').unwrap_or(w);
    match w.parse() {
        Ok(g) if !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()) => Ok(g),
        _ => Err(KvError {
            line: a.line,
            col: a.col,
            msg: format!("expected an integer grade, found `{w}`"),
        }),
    }
}

fn parse_response(node: &Node) -> Result<JudgeResponse, KvError> {
    if !node.args.is_empty() {
        return Err(KvError {
            line: node.line,
            col: node.col,
            msg: "`response` takes no arguments".into(),
        });
    }
    let mut f = Fields::of_block(node)?;
    let asset_id = f.take("asset_id")?.string()?;
    let geometry = match f.take_opt("geometry") {
        Some(n) => {
            let mut g = Fields::of_block(n)?;
            let out = GeometryJudgement {
                clip: g.take("clip")?.f64()?,
                consistency_3d: g.take("consistency_3d")?.f64()?,
                visual_quality: parse_grade(g.take("visual_quality")?)?,
            };
            g.finish()?;
            Some(out)
        }
        None => None,
    };
    let scale = match f.take_opt("scale") {
        Some(n) => {
            let mut g = Fields::of_block(n)?;
            let out = ScaleJudgement {
                judged_max_dim_m: g.take("judged_max_dim_m")?.f64()?,
            };
            g.finish()?;
            Some(out)
        }
        None => None,
    };
    let material = match f.take_opt("material") {
        Some(n) => {
            let mut g = Fields::of_block(n)?;
            let out = MaterialJudgement {
                freefall: g.take("freefall")?.f64()?,
                waterdrop: g.take("waterdrop")?.f64()?,
            };
            g.finish()?;
            Some(out)
        }
        None => None,
    };
    let affordance = f.take_opt("affordance").map(Node::f64).transpose()?;
    let kinematics = match f.take_opt("kinematics") {
        Some(n) => {
            let mut g = Fields::of_block(n)?;
            let out = KinematicsJudgement {
                prior_part: g.take("prior_part")?.f64()?,
                revealed_entity: g.take("revealed_entity")?.f64()?,
                global_coherence: g.take("global_coherence")?.f64()?,
            };
            g.finish()?;
            Some(out)
        }
        None => None,
    };
    let description = f.take_opt("description").map(Node::f64).transpose()?;
    f.finish()?;
    Ok(JudgeResponse {
        asset_id,
        geometry,
        scale,
        material,
        affordance,
        kinematics,
        description,
    })
}

/// Parses a judge file. Ranges are not checked here; see [`validate_judge`].
pub fn parse_judges(text: &str) -> Result<Vec<JudgeResponse>, BenchError> {
    let nodes = kvtext::parse_document(text, JUDGE_HEADER)?;
    let mut f = Fields::new(&nodes, text.lines().count().max(1));
    let mut out = Vec::new();
    while f.peek_key() == Some("response") {
        out.push(parse_response(f.take("response")?)?);
    }
    f.finish()?;
    if out.is_empty() {
        f.take("response")?;
    }
    Ok(out)
}

pub fn serialize_judges(responses: &[JudgeResponse]) -> String {
    let n = kvtext::num;
    let mut w = Writer::new(JUDGE_HEADER);
    for r in responses {
        w.open("response", &[]);
        w.line("asset_id", &[&kvtext::quote(&r.asset_id)]);
        if let Some(g) = &r.geometry {
            w.open("geometry", &[]);
            w.line("clip", &[&n(g.clip)]);
            w.line("consistency_3d", &[&n(g.consistency_3d)]);
            w.line("visual_quality", &[&g.visual_quality.to_string()]);
            w.close();
        }
        if let Some(s) = &r.scale {
            w.open("scale", &[]);
            w.line("judged_max_dim_m", &[&n(s.judged_max_dim_m)]);
            w.close();
        }
        if let Some(m) = &r.material {
            w.open("material", &[]);
            w.line("freefall", &[&n(m.freefall)]);
            w.line("waterdrop", &[&n(m.waterdrop)]);
            w.close();
        }
        if let Some(a) = r.affordance {
            w.line("affordance", &[&n(a)]);
        }
        if let Some(k) = &r.kinematics {
            w.open("kinematics", &[]);
            w.line("prior_part", &[&n(k.prior_part)]);
            w.line("revealed_entity", &[&n(k.revealed_entity)]);
            w.line("global_coherence", &[&n(k.global_coherence)]);
            w.close();
        }
        if let Some(d) = r.description {
            w.line("description", &[&n(d)]);
        }
        w.close();
    }
    w.finish()
}

/// Report columns. All are on [0, 100] except `clip`, which stays on [0, 1].
pub const COLUMNS: [&str; 8] = [
    "clip",
    "consistency_3d",
    "visual_quality",
    "scale",
    "material",
    "affordance",
    "kinematics",
    "description",
];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub asset_id: String,
    /// Indexed like [`COLUMNS`]; `None` where the response lacks the block.
    pub scores: [Option<f64>; 8],
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub kinematics_weights: [f64; 3],
    /// Sorted by asset id.
    pub rows: Vec<BenchRow>,
    /// Arithmetic mean per column over the rows carrying it.
    pub means: [Option<f64>; 8],
}

fn score_row(r: &JudgeResponse, asset: &PhysicalAsset, weights: [f64; 3]) -> Result<BenchRow, BenchError> {
    let mut s = [None; 8];
    if let Some(g) = &r.geometry {
        s[0] = Some(g.clip);
        s[1] = Some(g.consistency_3d);
        s[2] = Some(visual_quality_score(g.visual_quality)?);
    }
    if let Some(sc) = &r.scale {
        s[3] = Some(metrics::scale_plausibility(asset.max_scale(), sc.judged_max_dim_m)?);
    }
    if let Some(m) = &r.material {
        s[4] = Some((m.freefall + m.waterdrop) / 2.0);
    }
    s[5] = r.affordance;
    if let Some(k) = &r.kinematics {
        s[6] = Some(aggregate_kinematics(k.scores(), weights)?);
    }
    s[7] = r.description;
    Ok(BenchRow {
        asset_id: r.asset_id.clone(),
        scores: s,
    })
}

/// Scores every response against the asset sharing its id.
///
/// Each response must name a distinct asset present in `assets`; assets
/// without a response are not evaluated.
pub fn aggregate_report(
    responses: &[JudgeResponse],
    assets: &[(String, PhysicalAsset)],
    weights: [f64; 3],
) -> Result<BenchReport, BenchError> {
    aggregate_kinematics([0.0; 3], weights)?;
    let mut by_id = BTreeMap::new();
    for (id, a) in assets {
        if by_id.insert(id.as_str(), a).is_some() {
            return Err(BenchError::Duplicate(format!("asset id `{id}`")));
        }
    }
    let violations: Vec<JudgeViolation> = responses.iter().flat_map(|r| validate_judge(r, &[])).collect();
    if !violations.is_empty() {
        return Err(BenchError::Invalid(violations));
    }
    let mut sorted: Vec<&JudgeResponse> = responses.iter().collect();
    sorted.sort_by(|a, b| a.asset_id.cmp(&b.asset_id));
    let mut seen = BTreeSet::new();
    let mut rows = Vec::with_capacity(sorted.len());
    for r in sorted {
        if !seen.insert(r.asset_id.as_str()) {
            return Err(BenchError::Duplicate(format!("response for `{}`", r.asset_id)));
        }
        let asset = by_id
            .get(r.asset_id.as_str())
            .ok_or_else(|| BenchError::Unmatched(r.asset_id.clone()))?;
        rows.push(score_row(r, asset, weights)?);
    }
    let mut means = [None; 8];
    for (c, m) in means.iter_mut().enumerate() {
        let vals: Vec<f64> = rows.iter().filter_map(|r| r.scores[c]).collect();
        if !vals.is_empty() {
            *m = Some(compensated_sum(vals.iter().copied()) / vals.len() as f64);
        }
    }
    Ok(BenchReport {
        kinematics_weights: weights,
        rows,
        means,
    })
}

fn cell(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| format!("{x:.4}"))
}

impl BenchReport {
    /// Fixed-width table for reading.
    pub fn table(&self) -> String {
        let w = self.kinematics_weights;
        let mut s = format!("kinematics_weights={},{},{}\n", w[0], w[1], w[2]);
        let width = self.rows.iter().map(|r| r.asset_id.len()).max().unwrap_or(0).max(8);
        let _ = write!(s, "{:<width$}", "asset");
        for c in COLUMNS {
            let _ = write!(s, " {c:>14}");
        }
        s.push('\n');
        let mut line = |id: &str, v: &[Option<f64>; 8]| {
            let _ = write!(s, "{id:<width$}");
            for x in v {
                let text = x.map_or("-".to_string(), |x| format!("{x:.2}"));
                let _ = write!(s, " {text:>14}");
            }
            s.push('\n');
        };
        for r in &self.rows {
            line(&r.asset_id, &r.scores);
        }
        line("mean", &self.means);
        s
    }

    /// One CSV row per asset; empty cells where a dimension was not judged.
    pub fn rows_csv(&self) -> String {
        let mut s = String::from("asset_id");
        for c in COLUMNS {
            s.push(',');
            s.push_str(c);
        }
        s.push_str(",kin_w_prior_part,kin_w_revealed_entity,kin_w_global_coherence\n");
        let w = self.kinematics_weights;
        for r in &self.rows {
            s.push_str(&csv_field(&r.asset_id));
            for v in r.scores {
                s.push(',');
                s.push_str(&cell(v));
            }
            let _ = writeln!(s, ",{},{},{}", w[0], w[1], w[2]);
        }
        s
    }

    /// `method,dimension,score` rows of the column means, the same layout
    /// as the human-annotation table.
    pub fn summary_csv(&self, method: &str) -> String {
        let mut s = String::from("method,dimension,score\n");
        for (c, m) in COLUMNS.iter().zip(self.means) {
            if let Some(m) = m {
                let _ = writeln!(s, "{},{c},{}", csv_field(method), m);
            }
        }
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Spearman ρ and Pearson r between automatic and human scores of the same
/// methods.
pub fn human_alignment(method_scores: &[f64], human_scores: &[f64]) -> Result<(f64, f64), MetricError> {
    Ok((
        metrics::spearman_rho(method_scores, human_scores)?,
        metrics::pearson_r(method_scores, human_scores)?,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScoreEntry {
    pub method: String,
    pub dimension: String,
    pub score: f64,
}

/// Reads a `method,dimension,score` table. Pairs must be unique.
pub fn parse_score_table(text: &str) -> Result<Vec<ScoreEntry>, BenchError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| BenchError::Table(e.to_string()))?.clone();
    if headers.iter().collect::<Vec<_>>() != ["method", "dimension", "score"] {
        return Err(BenchError::Table(format!(
            "header must be `method,dimension,score`, found `{}`",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| BenchError::Table(e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line());
        let score: f64 = rec[2]
            .parse()
            .ok()
            .filter(|x: &f64| x.is_finite())
            .ok_or_else(|| BenchError::Table(format!("line {line}: score `{}` is not a number", &rec[2])))?;
        if !seen.insert((rec[0].to_string(), rec[1].to_string())) {
            return Err(BenchError::Duplicate(format!(
                "score for method `{}`, dimension `{}` (line {line})",
                &rec[0], &rec[1]
            )));
        }
        out.push(ScoreEntry {
            method: rec[0].to_string(),
            dimension: rec[1].to_string(),
            score,
        });
    }
    Ok(out)
}

#[derive(Debug, PartialEq)]
pub struct Alignment {
    pub dimension: String,
    /// Methods scored in both tables, in name order.
    pub methods: Vec<String>,
    pub rho: Result<f64, MetricError>,
    pub r: Result<f64, MetricError>,
}

/// Per-dimension alignment over the methods present in both tables.
pub fn align_tables(auto: &[ScoreEntry], human: &[ScoreEntry]) -> Vec<Alignment> {
    let index = |t: &[ScoreEntry]| -> BTreeMap<(String, String), f64> {
        t.iter()
            .map(|e| ((e.dimension.clone(), e.method.clone()), e.score))
            .collect()
    };
    let a = index(auto);
    let h = index(human);
    let dims: BTreeSet<&String> = h.keys().map(|(d, _)| d).filter(|d| a.keys().any(|(ad, _)| ad == *d)).collect();
    dims.into_iter()
        .map(|d| {
            let mut methods = Vec::new();
            let (mut xs, mut ys) = (Vec::new(), Vec::new());
            for ((hd, m), &y) in &h {
                if hd == d {
                    if let Some(&x) = a.get(&(d.clone(), m.clone())) {
                        methods.push(m.clone());
                        xs.push(x);
                        ys.push(y);
                    }
                }
            }
            Alignment {
                dimension: d.clone(),
                methods,
                rho: metrics::spearman_rho(&xs, &ys),
                r: metrics::pearson_r(&xs, &ys),
            }
        })
        .collect()
}

pub fn alignment_csv(rows: &[Alignment]) -> String {
    let fmt = |v: &Result<f64, MetricError>| match v {
        Ok(x) => format!("{x:.6}"),
        Err(_) => "undefined".to_string(),
    };
    let mut s = String::from("dimension,methods,spearman_rho,pearson_r\n");
    for a in rows {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            csv_field(&a.dimension),
            a.methods.len(),
            fmt(&a.rho),
            fmt(&a.r)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinematics_examples() {
        assert_eq!(aggregate_kinematics([80.0, 70.0, 90.0], [1.0; 3]).unwrap(), 80.0);
        assert_eq!(aggregate_kinematics([80.0, 70.0, 90.0], DEFAULT_KIN_WEIGHTS).unwrap(), 82.0);
        assert_eq!(aggregate_kinematics([80.0, 70.0, 90.0], [1.0, 0.0, 0.0]).unwrap(), 80.0);
        assert!(aggregate_kinematics([80.0, 70.0, 90.0], [0.0; 3]).is_err());
        assert!(aggregate_kinematics([80.0, 70.0, 90.0], [-1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn compensated_sum_of_tenths() {
        assert_eq!([0.1, 0.2, 0.3].iter().sum::<f64>(), 0.6000000000000001);
        assert_eq!(compensated_sum([0.1, 0.2, 0.3]), 0.6);
    }

    #[test]
    fn weights_flag() {
        assert_eq!(parse_kin_weights("0.4,0.2,0.4").unwrap(), DEFAULT_KIN_WEIGHTS);
        assert!(parse_kin_weights("1,2").is_err());
        assert!(parse_kin_weights("0,0,0").is_err());
        assert!(parse_kin_weights("a,1,1").is_err());
    }

    #[test]
    fn grades() {
        assert_eq!(visual_quality_score(1).unwrap(), 0.0);
        assert_eq!(visual_quality_score(5).unwrap(), 100.0);
        assert!(visual_quality_score(6).is_err());
    }

    #[test]
    fn judge_text_round_trip() {
        let r = JudgeResponse {
            asset_id: "a b".into(),
            geometry: Some(GeometryJudgement {
                clip: 0.25,
                consistency_3d: 80.0,
                visual_quality: 6,
            }),
            affordance: Some(12.5),
            ..Default::default()
        };
        let text = serialize_judges(std::slice::from_ref(&r));
        assert_eq!(parse_judges(&text).unwrap(), vec![r.clone()]);
        let v = validate_judge(&r, &[Dimension::Kinematics]);
        assert_eq!(v.len(), 2);
        assert!(v.iter().any(|x| x.field == "kinematics"));
        assert!(v.iter().any(|x| x.field == "geometry.visual_quality"));
    }

    #[test]
    fn judge_syntax_errors() {
        assert!(parse_judges("JUDGE v1\n").is_err());
        assert!(parse_judges("JUDGE v1\nresponse {\n}\n").is_err());
        let e = parse_judges("JUDGE v1\nresponse {\n  asset_id \"a\"\n  affordance x\n}\n").unwrap_err();
        assert!(e.to_string().contains("line 4"), "{e}");
        let e = parse_judges("JUDGE v1\nresponse {\n  asset_id \"a\"\n  description 1\n  affordance 2\n}\n").unwrap_err();
        assert!(e.to_string().contains("unexpected"), "{e}");
    }

    #[test]
    fn score_tables() {
        let t = parse_score_table("method,dimension,score\nA,geometry,1\nB,geometry,2\n").unwrap();
        assert_eq!(t.len(), 2);
        assert!(parse_score_table("method,dimension,score\nA,g,1\nA,g,2\n").is_err());
        assert!(parse_score_table("m,d,s\n").is_err());
        assert!(parse_score_table("method,dimension,score\nA,g,x\n").is_err());
    }
}
