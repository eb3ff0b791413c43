//! Tree-structured simulation-ready asset and its canonical text form.
//!
//! ```text
//! ASSET v1
//! category "cabinet"
//! description "A two-door wooden cabinet."
//! scale 0.6 0.4 0.9
//! deformable false
//! part 0 {
//!   name "body"
//!   description "Main carcass."
//!   parent none
//!   material {
//!     name "wood"
//!     density 700
//!     youngs_modulus 10000000000
//!     poisson_ratio 0.3
//!   }
//!   affordance 0.2
//!   joint {
//!     kind fixed
//!     origin 0 0 0
//!     axis 0 0 1
//!     limit none
//!   }
//!   geometry "P64|E|..."
//! }
//! ```
//!
//! Keys appear in exactly this order; parts are written in ascending id.
//! Lengths are meters in the asset frame, whose origin is the center of the
//! bounding box of all part voxels and whose axes follow the voxel lattice.
//! Revolute limits are radians, prismatic limits meters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::codec::{self, CodecError, PartCode};
use crate::geom::{self, Vec3};
use crate::kvtext::{self, Fields, KvError, Node, Writer};

pub const HEADER: &str = "ASSET v1";

const AXIS_NORM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum JointKind {
    Fixed,
    Revolute,
    Prismatic,
    Continuous,
}

impl JointKind {
    /// Lower-case name, shared with URDF joint types.
    pub fn name(self) -> &'static str {
        match self {
            JointKind::Fixed => "fixed",
            JointKind::Revolute => "revolute",
            JointKind::Prismatic => "prismatic",
            JointKind::Continuous => "continuous",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "fixed" => JointKind::Fixed,
            "revolute" => JointKind::Revolute,
            "prismatic" => JointKind::Prismatic,
            "continuous" => JointKind::Continuous,
            _ => return None,
        })
    }

    pub fn has_limits(self) -> bool {
        matches!(self, JointKind::Revolute | JointKind::Prismatic)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointLimit {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointSpec {
    pub kind: JointKind,
    pub origin_m: Vec3,
    pub axis: Vec3,
    pub limit: Option<JointLimit>,
}

impl JointSpec {
    pub fn fixed() -> Self {
        Self {
            kind: JointKind::Fixed,
            origin_m: [0.0; 3],
            axis: [0.0, 0.0, 1.0],
            limit: None,
        }
    }

    /// Violations of the joint's own invariants, reported against `part`.
    pub fn violations(&self, part: Option<u32>) -> Vec<Violation> {
        let mut v = Vec::new();
        let mut push = |field: &str, rule: String| v.push(Violation::new(part, field, rule));
        if !self.origin_m.iter().all(|c| c.is_finite()) {
            push("joint.origin", "coordinates must be finite".into());
        }
        if self.kind != JointKind::Fixed {
            let n = geom::norm(self.axis);
            if !((n - 1.0).abs() <= AXIS_NORM_TOL) {
                push("joint.axis", format!("axis norm {n} must be 1"));
            }
        }
        match (self.kind.has_limits(), self.limit) {
            (true, None) => push("joint.limit", format!("{} joint requires limits", self.kind.name())),
            (false, Some(_)) => push(
                "joint.limit",
                format!("{} joint must not carry limits", self.kind.name()),
            ),
            (true, Some(l)) => {
                if !(l.lower.is_finite() && l.upper.is_finite()) {
                    push("joint.limit", "limits must be finite".into());
                } else if l.lower > l.upper {
                    push("joint.limit", format!("lower {} exceeds upper {}", l.lower, l.upper));
                }
            }
            (false, None) => {}
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaterialSpec {
    pub name: String,
    /// kg/m³
    pub density: f64,
    /// Pa
    pub youngs_modulus: f64,
    pub poisson_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartSpec {
    pub id: u32,
    pub name: String,
    pub description: String,
    pub parent: Option<u32>,
    pub material: MaterialSpec,
    /// Interaction priority in [0, 1]; higher is more interactable.
    pub affordance: f64,
    pub joint: JointSpec,
    pub geometry: PartCode,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalAsset {
    pub category: String,
    pub description: String,
    /// Real-world bounding dimensions along x, y, z in meters.
    pub scale_m: Vec3,
    pub deformable: bool,
    pub parts: Vec<PartSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// `None` for asset-level fields.
    pub part: Option<u32>,
    pub field: String,
    pub rule: String,
}

impl Violation {
    pub fn new(part: Option<u32>, field: &str, rule: impl Into<String>) -> Self {
        Self {
            part,
            field: field.to_string(),
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.part {
            Some(p) => write!(f, "part {p}: {}: {}", self.field, self.rule),
            None => write!(f, "asset: {}: {}", self.field, self.rule),
        }
    }
}

#[derive(Debug, Error)]
pub enum AssetError {
    #[error("asset syntax error at {0}")]
    Syntax(#[from] KvError),
    #[error("part {part} geometry (line {line}): {source}")]
    Geometry {
        part: u32,
        line: usize,
        #[source]
        source: CodecError,
    },
    #[error("invalid asset: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

impl PhysicalAsset {
    pub fn part(&self, id: u32) -> Option<&PartSpec> {
        self.parts.iter().find(|p| p.id == id)
    }

    pub fn root(&self) -> Option<&PartSpec> {
        self.parts.iter().find(|p| p.parent.is_none())
    }

    pub fn max_scale(&self) -> f64 {
        self.scale_m.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Geometry resolution shared by all parts (that of the first part).
    pub fn resolution(&self) -> Option<usize> {
        self.parts.first().map(|p| p.geometry.resolution)
    }

    /// Parts ordered by id.
    pub fn sorted_parts(&self) -> Vec<&PartSpec> {
        let mut v: Vec<&PartSpec> = self.parts.iter().collect();
        v.sort_by_key(|p| p.id);
        v
    }
}

/// Every invariant violation of the asset; empty iff the asset is valid.
pub fn validate(asset: &PhysicalAsset) -> Vec<Violation> {
    let mut out = Vec::new();
    if !asset.scale_m.iter().all(|s| s.is_finite() && *s > 0.0) {
        out.push(Violation::new(
            None,
            "scale",
            format!("components {:?} must be finite and positive", asset.scale_m),
        ));
    }
    if asset.parts.is_empty() {
        out.push(Violation::new(None, "parts", "asset needs at least one part"));
        return out;
    }

    let mut ids = BTreeSet::new();
    for p in &asset.parts {
        if !ids.insert(p.id) {
            out.push(Violation::new(Some(p.id), "id", "duplicate part id"));
        }
    }
    let parents: BTreeMap<u32, Option<u32>> = asset.parts.iter().map(|p| (p.id, p.parent)).collect();

    let roots: Vec<u32> = asset.parts.iter().filter(|p| p.parent.is_none()).map(|p| p.id).collect();
    match roots.len() {
        0 => out.push(Violation::new(None, "parts", "no root part (every part has a parent)")),
        1 => {}
        n => out.push(Violation::new(
            None,
            "parts",
            format!("{n} root parts {roots:?}, expected exactly one"),
        )),
    }

    let resolution = asset.parts[0].geometry.resolution;
    for p in &asset.parts {
        let id = Some(p.id);
        match p.parent {
            Some(par) if par == p.id => {
                out.push(Violation::new(id, "parent", "part cannot be its own parent"))
            }
            Some(par) if !parents.contains_key(&par) => {
                out.push(Violation::new(id, "parent", format!("parent {par} does not exist")))
            }
            Some(_) => {
                // Walk up; more steps than parts means a cycle.
                let mut cur = p.parent;
                let mut steps = 0;
                while let Some(c) = cur {
                    steps += 1;
                    if steps > parents.len() {
                        out.push(Violation::new(id, "parent", "parent links form a cycle"));
                        break;
                    }
                    cur = parents.get(&c).copied().flatten();
                }
            }
            None => {
                if p.joint.kind != JointKind::Fixed {
                    out.push(Violation::new(id, "joint.kind", "root part joint must be fixed"));
                }
            }
        }

        if !(0.0..=1.0).contains(&p.affordance) {
            out.push(Violation::new(
                id,
                "affordance",
                format!("{} outside [0, 1]", p.affordance),
            ));
        }
        let m = &p.material;
        if !(m.density.is_finite() && m.density > 0.0) {
            out.push(Violation::new(id, "material.density", format!("{} must be > 0", m.density)));
        }
        if !(m.youngs_modulus.is_finite() && m.youngs_modulus > 0.0) {
            out.push(Violation::new(
                id,
                "material.youngs_modulus",
                format!("{} must be > 0", m.youngs_modulus),
            ));
        }
        if !(m.poisson_ratio > -1.0 && m.poisson_ratio < 0.5) {
            out.push(Violation::new(
                id,
                "material.poisson_ratio",
                format!("{} outside (-1, 0.5)", m.poisson_ratio),
            ));
        }
        out.extend(p.joint.violations(id));
        if asset.deformable && p.joint.kind != JointKind::Fixed {
            out.push(Violation::new(
                id,
                "joint.kind",
                "deformable assets carry only fixed joints",
            ));
        }
        if p.geometry.resolution != resolution {
            out.push(Violation::new(
                id,
                "geometry",
                format!(
                    "resolution {} differs from {resolution} of the first part",
                    p.geometry.resolution
                ),
            ));
        }
        if p.geometry.depth() != p.geometry.resolution {
            out.push(Violation::new(
                id,
                "geometry",
                format!(
                    "{} layers for resolution {}",
                    p.geometry.depth(),
                    p.geometry.resolution
                ),
            ));
        } else if let Err(e) = p.geometry.check() {
            out.push(Violation::new(id, "geometry", e.to_string()));
        }
    }
    out
}

/// Part ids by descending affordance, ties by ascending id.
pub fn affordance_ranking(asset: &PhysicalAsset) -> Vec<u32> {
    let mut v: Vec<(u32, f64)> = asset.parts.iter().map(|p| (p.id, p.affordance)).collect();
    v.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0)));
    v.into_iter().map(|(id, _)| id).collect()
}

pub fn serialize_asset(asset: &PhysicalAsset) -> Result<String, AssetError> {
    let violations = validate(asset);
    if !violations.is_empty() {
        return Err(AssetError::Invalid(violations));
    }
    let n = kvtext::num;
    let mut w = Writer::new(HEADER);
    w.line("category", &[&kvtext::quote(&asset.category)]);
    w.line("description", &[&kvtext::quote(&asset.description)]);
    let s = asset.scale_m.map(n);
    w.line("scale", &[&s[0], &s[1], &s[2]]);
    w.line("deformable", &[if asset.deformable { "true" } else { "false" }]);
    for p in asset.sorted_parts() {
        w.open("part", &[&p.id.to_string()]);
        w.line("name", &[&kvtext::quote(&p.name)]);
        w.line("description", &[&kvtext::quote(&p.description)]);
        match p.parent {
            Some(par) => w.line("parent", &[&par.to_string()]),
            None => w.line("parent", &["none"]),
        }
        w.open("material", &[]);
        w.line("name", &[&kvtext::quote(&p.material.name)]);
        w.line("density", &[&n(p.material.density)]);
        w.line("youngs_modulus", &[&n(p.material.youngs_modulus)]);
        w.line("poisson_ratio", &[&n(p.material.poisson_ratio)]);
        w.close();
        w.line("affordance", &[&n(p.affordance)]);
        w.open("joint", &[]);
        w.line("kind", &[p.joint.kind.name()]);
        let o = p.joint.origin_m.map(n);
        w.line("origin", &[&o[0], &o[1], &o[2]]);
        let a = p.joint.axis.map(n);
        w.line("axis", &[&a[0], &a[1], &a[2]]);
        match p.joint.limit {
            Some(l) => w.line("limit", &[&n(l.lower), &n(l.upper)]),
            None => w.line("limit", &["none"]),
        }
        w.close();
        w.line("geometry", &[&kvtext::quote(&codec::serialize_part(&p.geometry))]);
        w.close();
    }
    Ok(w.finish())
}

/// Strict parse of the canonical text; the result is fully validated.
pub fn parse_asset(text: &str) -> Result<PhysicalAsset, AssetError> {
    let nodes = kvtext::parse_document(text, HEADER)?;
    let last_line = text.lines().count().max(1);
    let mut f = Fields::new(&nodes, last_line);
    let category = f.take("category")?.string()?;
    let description = f.take("description")?.string()?;
    let scale_m = f.take("scale")?.f64s::<3>()?;
    let deformable = parse_bool(f.take("deformable")?)?;
    let mut parts = Vec::new();
    while f.peek_key() == Some("part") {
        parts.push(parse_part_block(f.take("part")?)?);
    }
    f.finish()?;
    let asset = PhysicalAsset {
        category,
        description,
        scale_m,
        deformable,
        parts,
    };
    let violations = validate(&asset);
    if !violations.is_empty() {
        return Err(AssetError::Invalid(violations));
    }
    Ok(asset)
}

fn syntax<T>(node: &Node, msg: impl Into<String>) -> Result<T, AssetError> {
    Err(AssetError::Syntax(KvError {
        line: node.line,
        col: node.col,
        msg: msg.into(),
    }))
}

fn parse_bool(node: &Node) -> Result<bool, AssetError> {
    match node.word()? {
        "true" => Ok(true),
        "false" => Ok(false),
        w => syntax(node, format!("expected true or false, found `{w}`")),
    }
}

fn parse_part_block(node: &Node) -> Result<PartSpec, AssetError> {
    if node.args.len() != 1 {
        return syntax(node, "`part` takes exactly one id");
    }
    let id = node.args[0].u32()?;
    let mut f = Fields::of_block(node)?;
    let name = f.take("name")?.string()?;
    let description = f.take("description")?.string()?;
    let parent_node = f.take("parent")?;
    let parent = match parent_node.word()? {
        "none" => None,
        _ => Some(parent_node.args[0].u32()?),
    };

    let mnode = f.take("material")?;
    let mut mf = Fields::of_block(mnode)?;
    let material = MaterialSpec {
        name: mf.take("name")?.string()?,
        density: mf.take("density")?.f64()?,
        youngs_modulus: mf.take("youngs_modulus")?.f64()?,
        poisson_ratio: mf.take("poisson_ratio")?.f64()?,
    };
    mf.finish()?;

    let affordance = f.take("affordance")?.f64()?;

    let jnode = f.take("joint")?;
    let mut jf = Fields::of_block(jnode)?;
    let kind_node = jf.take("kind")?;
    let kind = JointKind::from_name(kind_node.word()?).map_or_else(
        || syntax(kind_node, "joint kind must be fixed, revolute, prismatic or continuous"),
        Ok,
    )?;
    let origin_m = jf.take("origin")?.f64s::<3>()?;
    let axis = jf.take("axis")?.f64s::<3>()?;
    let lnode = jf.take("limit")?;
    let limit = if lnode.args.len() == 1 && !lnode.args[0].quoted && lnode.args[0].text == "none" {
        lnode.expect_leaf(1)?;
        None
    } else {
        let [lower, upper] = lnode.f64s::<2>()?;
        Some(JointLimit { lower, upper })
    };
    jf.finish()?;

    let gnode = f.take("geometry")?;
    let gtext = gnode.string()?;
    let geometry = codec::parse_part(&gtext).map_err(|source| AssetError::Geometry {
        part: id,
        line: gnode.line,
        source,
    })?;
    f.finish()?;

    Ok(PartSpec {
        id,
        name,
        description,
        parent,
        material,
        affordance,
        joint: JointSpec {
            kind,
            origin_m,
            axis,
            limit,
        },
        geometry,
    })
}
