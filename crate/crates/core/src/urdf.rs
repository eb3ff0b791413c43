//! URDF export of physical assets and structural URDF validation.
//!
//! Each part becomes a link named `part_<id>` whose visual and collision
//! geometry is the part's voxel boundary mesh, written as
//! `meshes/part_<id>.obj`. Each non-root part is attached to its parent by
//! a joint named `joint_<id>`. Link frames are axis-aligned with the asset
//! frame and placed at the part's joint origin (the root link sits at the
//! asset origin). Voxels are scaled per axis so the occupied bounding box
//! of the whole asset equals `scale_m`.
//!
//! Material attributes that URDF cannot express (Young's modulus, Poisson
//! ratio) go into a `physics.json` sidecar next to the document.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::asset::{self, JointKind, PhysicalAsset, Violation};
use crate::codec::{self, CodecError};
use crate::geom::{self, Vec3};
use crate::mesh::{self, TriangleMesh};
use crate::voxel::{self, PartGrid};

pub const DOCUMENT_NAME: &str = "asset.urdf";
pub const SIDECAR_NAME: &str = "physics.json";
/// Actuation bounds written into `<limit>`; the asset model does not carry them.
pub const DEFAULT_EFFORT: f64 = 100.0;
pub const DEFAULT_VELOCITY: f64 = 1.0;

const AXIS_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("invalid asset: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidAsset(Vec<Violation>),
    #[error("part {part}: {msg}")]
    Part { part: u32, msg: String },
    #[error("part {part} geometry: {source}")]
    Geometry {
        part: u32,
        #[source]
        source: CodecError,
    },
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Mass properties of one link in its own frame.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkInertial {
    pub mass: f64,
    /// Center of mass relative to the link frame.
    pub com: Vec3,
    /// `[ixx, ixy, ixz, iyy, iyz, izz]` about the center of mass.
    pub inertia: [f64; 6],
    pub voxel_count: usize,
    pub volume: f64,
}

#[derive(Debug, Clone)]
pub struct UrdfBundle {
    pub document: String,
    /// `(relative path, OBJ text)` per link, in part id order.
    pub meshes: Vec<(String, String)>,
    pub sidecar: String,
    pub inertials: BTreeMap<u32, LinkInertial>,
}

impl UrdfBundle {
    pub fn total_mass(&self) -> f64 {
        self.inertials.values().map(|i| i.mass).sum()
    }

    pub fn write_to(&self, out_dir: &Path) -> Result<Vec<PathBuf>, ExportError> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| ExportError::Io { path, source }
        };
        let mesh_dir = out_dir.join("meshes");
        std::fs::create_dir_all(&mesh_dir).map_err(io(&mesh_dir))?;
        let mut written = Vec::new();
        let doc = out_dir.join(DOCUMENT_NAME);
        std::fs::write(&doc, &self.document).map_err(io(&doc))?;
        written.push(doc);
        for (rel, text) in &self.meshes {
            let p = out_dir.join(rel);
            std::fs::write(&p, text).map_err(io(&p))?;
            written.push(p);
        }
        let side = out_dir.join(SIDECAR_NAME);
        std::fs::write(&side, &self.sidecar).map_err(io(&side))?;
        written.push(side);
        Ok(written)
    }
}

/// Maps unit-lattice coordinates of the asset's parts into the asset frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssetFrame {
    /// Lattice coordinate that maps to the asset origin.
    pub center: Vec3,
    /// Voxel edge length per axis in meters.
    pub voxel_dims: Vec3,
}

impl AssetFrame {
    pub fn to_asset(&self, lattice: Vec3) -> Vec3 {
        [
            (lattice[0] - self.center[0]) * self.voxel_dims[0],
            (lattice[1] - self.center[1]) * self.voxel_dims[1],
            (lattice[2] - self.center[2]) * self.voxel_dims[2],
        ]
    }

    pub fn voxel_volume(&self) -> f64 {
        self.voxel_dims[0] * self.voxel_dims[1] * self.voxel_dims[2]
    }
}

/// Frame fitting the union of `parts` to `scale_m`; `None` if all parts are empty.
pub fn asset_frame(parts: &[PartGrid], scale_m: Vec3) -> Option<AssetFrame> {
    let mut lo = [usize::MAX; 3];
    let mut hi = [0usize; 3];
    let mut any = false;
    for p in parts {
        if let Some((l, h)) = p.grid.occupied_bounds() {
            any = true;
            for k in 0..3 {
                lo[k] = lo[k].min(l[k]);
                hi[k] = hi[k].max(h[k]);
            }
        }
    }
    if !any {
        return None;
    }
    let mut center = [0.0; 3];
    let mut dims = [0.0; 3];
    for k in 0..3 {
        let extent = (hi[k] + 1 - lo[k]) as f64;
        center[k] = lo[k] as f64 + extent / 2.0;
        dims[k] = scale_m[k] / extent;
    }
    Some(AssetFrame {
        center,
        voxel_dims: dims,
    })
}

/// Decodes every part geometry on the unit lattice, in part id order.
pub fn decode_parts(asset: &PhysicalAsset) -> Result<Vec<PartGrid>, ExportError> {
    asset
        .sorted_parts()
        .into_iter()
        .map(|p| {
            codec::decode_part(&p.geometry, p.id).map_err(|source| ExportError::Geometry {
                part: p.id,
                source,
            })
        })
        .collect()
}

fn link_frame_origin(asset: &PhysicalAsset, id: u32) -> Vec3 {
    match asset.part(id) {
        Some(p) if p.parent.is_some() => p.joint.origin_m,
        _ => [0.0; 3],
    }
}

/// Mass properties of a voxel solid, treating each voxel as a uniform box.
pub fn voxel_inertial(grid: &PartGrid, frame: &AssetFrame, density: f64, link_origin: Vec3) -> LinkInertial {
    let centers: Vec<Vec3> = grid
        .grid
        .iter_occupied()
        .map(|[x, y, z]| frame.to_asset([x as f64 + 0.5, y as f64 + 0.5, z as f64 + 0.5]))
        .collect();
    let n = centers.len();
    let volume = n as f64 * frame.voxel_volume();
    let [dx, dy, dz] = frame.voxel_dims;
    // Multiplied out one edge at a time so round figures stay exact.
    let mass = density * n as f64 * dx * dy * dz;
    let m_voxel = density * frame.voxel_volume();
    let mut c = [0.0; 3];
    for p in &centers {
        c = geom::add(c, *p);
    }
    let c = geom::scale(c, 1.0 / n.max(1) as f64);
    // Second central moments of the voxel centers.
    let mut s = [[0.0; 3]; 3];
    for p in &centers {
        let d = geom::sub(*p, c);
        for i in 0..3 {
            for j in 0..3 {
                s[i][j] += d[i] * d[j];
            }
        }
    }
    // Own inertia of one voxel box about its center.
    let own = [
        m_voxel * (dy * dy + dz * dz) / 12.0,
        m_voxel * (dx * dx + dz * dz) / 12.0,
        m_voxel * (dx * dx + dy * dy) / 12.0,
    ];
    let nf = n as f64;
    let ixx = m_voxel * (s[1][1] + s[2][2]) + nf * own[0];
    let iyy = m_voxel * (s[0][0] + s[2][2]) + nf * own[1];
    let izz = m_voxel * (s[0][0] + s[1][1]) + nf * own[2];
    // `+ 0.0` turns -0.0 into 0.0 for clean output.
    let ixy = -m_voxel * s[0][1] + 0.0;
    let ixz = -m_voxel * s[0][2] + 0.0;
    let iyz = -m_voxel * s[1][2] + 0.0;
    LinkInertial {
        mass,
        com: geom::sub(c, link_origin),
        inertia: [ixx, ixy, ixz, iyy, iyz, izz],
        voxel_count: n,
        volume,
    }
}

fn robot_name(category: &str) -> String {
    let s: String = category
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    if s.is_empty() {
        "asset".into()
    } else {
        s
    }
}

fn v3(v: Vec3) -> String {
    format!("{} {} {}", v[0], v[1], v[2])
}

/// Builds the URDF document, link meshes and physics sidecar in memory.
pub fn build_urdf(asset: &PhysicalAsset) -> Result<UrdfBundle, ExportError> {
    let violations = asset::validate(asset);
    if !violations.is_empty() {
        return Err(ExportError::InvalidAsset(violations));
    }
    let grids = decode_parts(asset)?;
    for g in &grids {
        if g.grid.is_empty() {
            return Err(ExportError::Part {
                part: g.part_id,
                msg: "geometry decodes to no voxels".into(),
            });
        }
    }
    let frame = asset_frame(&grids, asset.scale_m).expect("parts are non-empty");

    let mut doc = String::new();
    let _ = writeln!(doc, "<?xml version=\"1.0\"?>");
    let _ = writeln!(doc, "<robot name=\"{}\">", robot_name(&asset.category));
    let mut meshes = Vec::new();
    let mut inertials = BTreeMap::new();
    let parts = asset.sorted_parts();

    for (p, g) in parts.iter().zip(&grids) {
        let link_origin = link_frame_origin(asset, p.id);
        let inertial = voxel_inertial(g, &frame, p.material.density, link_origin);
        let mut m = voxel::extract_boundary_mesh(g).map_err(|e| ExportError::Part {
            part: p.id,
            msg: e.to_string(),
        })?;
        for v in &mut m.vertices {
            *v = geom::sub(frame.to_asset(*v), link_origin);
        }
        m.face_labels.clear();
        let rel = format!("meshes/part_{}.obj", p.id);
        meshes.push((rel.clone(), mesh::write_obj(&m)));

        let [ixx, ixy, ixz, iyy, iyz, izz] = inertial.inertia;
        let _ = writeln!(doc, "  <link name=\"part_{}\">", p.id);
        let _ = writeln!(doc, "    <inertial>");
        let _ = writeln!(doc, "      <origin xyz=\"{}\" rpy=\"0 0 0\"/>", v3(inertial.com));
        let _ = writeln!(doc, "      <mass value=\"{}\"/>", inertial.mass);
        let _ = writeln!(
            doc,
            "      <inertia ixx=\"{ixx}\" ixy=\"{ixy}\" ixz=\"{ixz}\" iyy=\"{iyy}\" iyz=\"{iyz}\" izz=\"{izz}\"/>"
        );
        let _ = writeln!(doc, "    </inertial>");
        for tag in ["visual", "collision"] {
            let _ = writeln!(doc, "    <{tag}>");
            let _ = writeln!(doc, "      <origin xyz=\"0 0 0\" rpy=\"0 0 0\"/>");
            let _ = writeln!(doc, "      <geometry>");
            let _ = writeln!(doc, "        <mesh filename=\"{rel}\"/>");
            let _ = writeln!(doc, "      </geometry>");
            let _ = writeln!(doc, "    </{tag}>");
        }
        let _ = writeln!(doc, "  </link>");
        inertials.insert(p.id, inertial);
    }

    for p in parts.iter().filter(|p| p.parent.is_some()) {
        let parent = p.parent.expect("filtered");
        let j = &p.joint;
        let xyz = geom::sub(j.origin_m, link_frame_origin(asset, parent));
        let _ = writeln!(doc, "  <joint name=\"joint_{}\" type=\"{}\">", p.id, j.kind.name());
        let _ = writeln!(doc, "    <parent link=\"part_{parent}\"/>");
        let _ = writeln!(doc, "    <child link=\"part_{}\"/>", p.id);
        let _ = writeln!(doc, "    <origin xyz=\"{}\" rpy=\"0 0 0\"/>", v3(xyz));
        if j.kind != JointKind::Fixed {
            let _ = writeln!(doc, "    <axis xyz=\"{}\"/>", v3(j.axis));
        }
        if let (true, Some(l)) = (j.kind.has_limits(), j.limit) {
            let _ = writeln!(
                doc,
                "    <limit lower=\"{}\" upper=\"{}\" effort=\"{DEFAULT_EFFORT}\" velocity=\"{DEFAULT_VELOCITY}\"/>",
                l.lower, l.upper
            );
        }
        let _ = writeln!(doc, "  </joint>");
    }
    let _ = writeln!(doc, "</robot>");

    let sidecar = serde_json::json!({
        "category": asset.category,
        "deformable": asset.deformable,
        "voxel_dims_m": frame.voxel_dims,
        "parts": parts.iter().map(|p| serde_json::json!({
            "id": p.id,
            "link": format!("part_{}", p.id),
            "name": p.name,
            "material": p.material.name,
            "density": p.material.density,
            "youngs_modulus": p.material.youngs_modulus,
            "poisson_ratio": p.material.poisson_ratio,
            "mass": inertials[&p.id].mass,
        })).collect::<Vec<_>>(),
    });
    let sidecar = serde_json::to_string_pretty(&sidecar).expect("json values serialize") + "\n";

    Ok(UrdfBundle {
        document: doc,
        meshes,
        sidecar,
        inertials,
    })
}

/// Builds the bundle and writes it under `out_dir`.
pub fn export_urdf(asset: &PhysicalAsset, out_dir: &Path) -> Result<UrdfBundle, ExportError> {
    let bundle = build_urdf(asset)?;
    bundle.write_to(out_dir)?;
    Ok(bundle)
}

/// Boundary meshes of every part in the asset frame, labeled by part id.
pub fn asset_mesh(asset: &PhysicalAsset) -> Result<TriangleMesh, ExportError> {
    let grids = decode_parts(asset)?;
    let Some(frame) = asset_frame(&grids, asset.scale_m) else {
        return Ok(TriangleMesh::default());
    };
    let mut meshes = Vec::new();
    for g in grids.iter().filter(|g| !g.grid.is_empty()) {
        let mut m = voxel::extract_boundary_mesh(g).map_err(|e| ExportError::Part {
            part: g.part_id,
            msg: e.to_string(),
        })?;
        for v in &mut m.vertices {
            *v = frame.to_asset(*v);
        }
        meshes.push(m);
    }
    Ok(TriangleMesh::merge(&meshes))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UrdfViolation {
    pub element: String,
    pub rule: String,
}

impl std::fmt::Display for UrdfViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.element, self.rule)
    }
}

fn parse_vec3(s: &str) -> Option<Vec3> {
    let v: Vec<f64> = s.split_whitespace().map(|t| t.parse().ok()).collect::<Option<_>>()?;
    (v.len() == 3).then(|| [v[0], v[1], v[2]])
}

/// Structural checks on a URDF document. Mesh references are resolved
/// against `base_dir` when given.
pub fn validate_urdf(document: &str, base_dir: Option<&Path>) -> Vec<UrdfViolation> {
    let mut out = Vec::new();
    let mut push = |element: &str, rule: String| {
        out.push(UrdfViolation {
            element: element.to_string(),
            rule,
        })
    };
    let doc = match roxmltree::Document::parse(document) {
        Ok(d) => d,
        Err(e) => {
            push("document", format!("not well-formed XML: {e}"));
            return out;
        }
    };
    let robot = doc.root_element();
    if robot.tag_name().name() != "robot" {
        push("document", format!("root element is <{}>, expected <robot>", robot.tag_name().name()));
        return out;
    }

    let mut links: BTreeSet<String> = BTreeSet::new();
    for link in robot.children().filter(|n| n.has_tag_name("link")) {
        let Some(name) = link.attribute("name") else {
            push("link", "missing name".into());
            continue;
        };
        if !links.insert(name.to_string()) {
            push(&format!("link {name}"), "duplicate link name".into());
        }
        for m in link.descendants().filter(|n| n.has_tag_name("mesh")) {
            match (m.attribute("filename"), base_dir) {
                (None, _) => push(&format!("link {name}"), "mesh without filename".into()),
                (Some(f), Some(dir)) if !dir.join(f).is_file() => {
                    push(&format!("link {name}"), format!("mesh file `{f}` not found"))
                }
                _ => {}
            }
        }
        if let Some(mass) = link.descendants().find(|n| n.has_tag_name("mass")) {
            match mass.attribute("value").and_then(|v| v.parse::<f64>().ok()) {
                Some(v) if v > 0.0 && v.is_finite() => {}
                _ => push(&format!("link {name}"), "mass must be a positive number".into()),
            }
        }
    }

    let mut joint_names = BTreeSet::new();
    let mut parent_of: HashMap<String, String> = HashMap::new();
    let mut children: HashMap<String, Vec<String>> = HashMap::new();
    for joint in robot.children().filter(|n| n.has_tag_name("joint")) {
        let name = joint.attribute("name").unwrap_or("").to_string();
        let el = format!("joint {name}");
        if name.is_empty() {
            push("joint", "missing name".into());
        } else if !joint_names.insert(name.clone()) {
            push(&el, "duplicate joint name".into());
        }
        let kind = joint.attribute("type").unwrap_or("");
        let kind = match kind {
            "fixed" | "revolute" | "prismatic" | "continuous" | "floating" | "planar" => kind,
            other => {
                push(&el, format!("unknown joint type `{other}`"));
                "fixed"
            }
        };
        let link_of = |tag: &str| {
            joint
                .children()
                .find(|n| n.has_tag_name(tag))
                .and_then(|n| n.attribute("link"))
                .map(str::to_string)
        };
        let (parent, child) = match (link_of("parent"), link_of("child")) {
            (Some(p), Some(c)) => (p, c),
            _ => {
                push(&el, "needs parent and child links".into());
                continue;
            }
        };
        for l in [&parent, &child] {
            if !links.contains(l) {
                push(&el, format!("references unknown link `{l}`"));
            }
        }
        if let Some(prev) = parent_of.insert(child.clone(), parent.clone()) {
            push(&el, format!("link `{child}` already has parent `{prev}`"));
        }
        children.entry(parent).or_default().push(child);

        if matches!(kind, "revolute" | "prismatic" | "continuous") {
            if let Some(axis) = joint.children().find(|n| n.has_tag_name("axis")) {
                match axis.attribute("xyz").and_then(parse_vec3) {
                    Some(a) if (geom::norm(a) - 1.0).abs() <= AXIS_TOL => {}
                    Some(a) => push(&el, format!("axis norm {} is not 1", geom::norm(a))),
                    None => push(&el, "axis xyz must be three numbers".into()),
                }
            }
        }
        let limit = joint.children().find(|n| n.has_tag_name("limit"));
        match (kind, limit) {
            ("revolute" | "prismatic", None) => push(&el, format!("{kind} joint needs <limit>")),
            (_, Some(l)) => {
                let lo = l.attribute("lower").map(str::parse::<f64>);
                let hi = l.attribute("upper").map(str::parse::<f64>);
                match (lo, hi) {
                    (Some(Ok(lo)), Some(Ok(hi))) if lo > hi => {
                        push(&el, format!("limit lower {lo} exceeds upper {hi}"))
                    }
                    (Some(Err(_)), _) | (_, Some(Err(_))) => {
                        push(&el, "limit bounds must be numbers".into())
                    }
                    _ => {}
                }
            }
            _ => {}
        }
    }

    let roots: Vec<&String> = links.iter().filter(|l| !parent_of.contains_key(*l)).collect();
    if roots.len() != 1 {
        push(
            "robot",
            format!("expected exactly one root link, found {}", roots.len()),
        );
    } else {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([roots[0].clone()]);
        while let Some(l) = queue.pop_front() {
            if !seen.insert(l.clone()) {
                continue;
            }
            for c in children.get(&l).into_iter().flatten() {
                queue.push_back(c.clone());
            }
        }
        for l in links.iter().filter(|l| !seen.contains(*l)) {
            push(
                &format!("link {l}"),
                "not reachable from the root (cycle or disconnected)".into(),
            );
        }
    }
    out
}
