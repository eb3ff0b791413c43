//! Triangle meshes and the ASCII OBJ subset used for mesh input and output.
//!
//! Supported OBJ statements: `v x y z`, `f i j k ...` (polygons are fan
//! triangulated, `i/t/n` forms and negative indices accepted) and
//! `g part_<id>` group headers, which label every following face with
//! `<id>`. Any other group name clears the label. Other statements are
//! ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::geom::{self, Vec3};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("obj line {line}: {msg}")]
    Obj { line: usize, msg: String },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[u32; 3]>,
    /// Per-face part label; same length as `faces` or empty when the
    /// mesh carries no labels at all.
    pub face_labels: Vec<Option<u32>>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[u32; 3]>) -> Self {
        Self {
            vertices,
            faces,
            face_labels: Vec::new(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<u32>) -> Self {
        self.face_labels = labels.into_iter().map(Some).collect();
        self
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn triangle(&self, f: usize) -> [Vec3; 3] {
        let [a, b, c] = self.faces[f];
        [
            self.vertices[a as usize],
            self.vertices[b as usize],
            self.vertices[c as usize],
        ]
    }

    pub fn label(&self, f: usize) -> Option<u32> {
        self.face_labels.get(f).copied().flatten()
    }

    /// Checks index bounds, finiteness and label length.
    pub fn check(&self) -> Result<(), MeshError> {
        let n = self.vertices.len();
        if let Some((i, _)) = self
            .vertices
            .iter()
            .enumerate()
            .find(|(_, v)| !v.iter().all(|c| c.is_finite()))
        {
            return Err(MeshError::InvalidInput(format!(
                "vertex {i} has a non-finite coordinate"
            )));
        }
        for (fi, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&i| i as usize >= n) {
                return Err(MeshError::InvalidInput(format!(
                    "face {fi} references a vertex out of range"
                )));
            }
        }
        if !self.face_labels.is_empty() && self.face_labels.len() != self.faces.len() {
            return Err(MeshError::InvalidInput(format!(
                "{} face labels for {} faces",
                self.face_labels.len(),
                self.faces.len()
            )));
        }
        Ok(())
    }

    /// Axis-aligned bounds `(min, max)` over vertices referenced by faces.
    pub fn bounds(&self) -> Option<(Vec3, Vec3)> {
        let mut it = self.faces.iter().flat_map(|f| f.iter());
        let first = self.vertices[*it.next()? as usize];
        let (mut lo, mut hi) = (first, first);
        for &i in it {
            let v = self.vertices[i as usize];
            for k in 0..3 {
                lo[k] = lo[k].min(v[k]);
                hi[k] = hi[k].max(v[k]);
            }
        }
        Some((lo, hi))
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len())
            .map(|f| {
                let [a, b, c] = self.triangle(f);
                geom::triangle_area(a, b, c)
            })
            .sum()
    }

    /// Copy of the mesh centered at the origin with its longest bounding
    /// box edge scaled to 1.
    pub fn normalized_unit_cube(&self) -> Result<TriangleMesh, MeshError> {
        let (lo, hi) = self
            .bounds()
            .ok_or_else(|| MeshError::InvalidInput("empty mesh".into()))?;
        let extent = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
        if extent <= 0.0 {
            return Err(MeshError::InvalidInput("degenerate bounding box".into()));
        }
        let center = geom::scale(geom::add(lo, hi), 0.5);
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v = geom::scale(geom::sub(*v, center), 1.0 / extent);
        }
        Ok(out)
    }

    /// Concatenates meshes, offsetting indices.
    pub fn merge(meshes: &[TriangleMesh]) -> TriangleMesh {
        let mut out = TriangleMesh::default();
        let any_labels = meshes.iter().any(|m| !m.face_labels.is_empty());
        for m in meshes {
            let base = out.vertices.len() as u32;
            out.vertices.extend_from_slice(&m.vertices);
            out.faces
                .extend(m.faces.iter().map(|f| [f[0] + base, f[1] + base, f[2] + base]));
            if any_labels {
                if m.face_labels.is_empty() {
                    out.face_labels.extend(std::iter::repeat_n(None, m.faces.len()));
                } else {
                    out.face_labels.extend_from_slice(&m.face_labels);
                }
            }
        }
        out
    }
}

pub fn parse_obj(text: &str) -> Result<TriangleMesh, MeshError> {
    let mut mesh = TriangleMesh::default();
    let mut labels: Vec<Option<u32>> = Vec::new();
    let mut current: Option<u32> = None;
    let mut any_label = false;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "v" => {
                let mut p = [0.0; 3];
                for c in &mut p {
                    let t = toks.next().ok_or_else(|| MeshError::Obj {
                        line,
                        msg: "vertex needs three coordinates".into(),
                    })?;
                    *c = t.parse().map_err(|_| MeshError::Obj {
                        line,
                        msg: format!("bad coordinate `{t}`"),
                    })?;
                }
                mesh.vertices.push(p);
            }
            "f" => {
                let n = mesh.vertices.len() as i64;
                let idx = toks
                    .map(|t| {
                        let head = t.split('/').next().unwrap_or("");
                        let i: i64 = head.parse().map_err(|_| MeshError::Obj {
                            line,
                            msg: format!("bad face index `{t}`"),
                        })?;
                        let zero_based = if i > 0 { i - 1 } else { n + i };
                        if i == 0 || zero_based < 0 || zero_based >= n {
                            return Err(MeshError::Obj {
                                line,
                                msg: format!("face index {i} out of range"),
                            });
                        }
                        Ok(zero_based as u32)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if idx.len() < 3 {
                    return Err(MeshError::Obj {
                        line,
                        msg: "face needs at least three vertices".into(),
                    });
                }
                for k in 1..idx.len() - 1 {
                    mesh.faces.push([idx[0], idx[k], idx[k + 1]]);
                    labels.push(current);
                }
            }
            "g" => {
                current = toks
                    .next()
                    .and_then(|name| name.strip_prefix("part_"))
                    .map(|id| {
                        id.parse::<u32>().map_err(|_| MeshError::Obj {
                            line,
                            msg: format!("bad part id `{id}`"),
                        })
                    })
                    .transpose()?;
                any_label |= current.is_some();
            }
            _ => {}
        }
    }
    if any_label {
        mesh.face_labels = labels;
    }
    Ok(mesh)
}

/// Writes the mesh as OBJ. Labeled faces are grouped under `g part_<id>`
/// headers in ascending id order after any unlabeled faces.
pub fn write_obj(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
    }
    let mut groups: BTreeMap<Option<u32>, Vec<usize>> = BTreeMap::new();
    for f in 0..mesh.faces.len() {
        groups.entry(mesh.label(f)).or_default().push(f);
    }
    for (label, faces) in groups {
        if let Some(id) = label {
            let _ = writeln!(out, "g part_{id}");
        }
        for f in faces {
            let [a, b, c] = mesh.faces[f];
            let _ = writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1);
        }
    }
    out
}

/// Closed axis-aligned box as 12 outward-facing triangles.
pub fn box_mesh(min: Vec3, max: Vec3) -> TriangleMesh {
    let v = |i: usize| {
        [
            if i & 1 == 0 { min[0] } else { max[0] },
            if i & 2 == 0 { min[1] } else { max[1] },
            if i & 4 == 0 { min[2] } else { max[2] },
        ]
    };
    let vertices = (0..8).map(v).collect();
    let faces = vec![
        [0, 2, 1],
        [1, 2, 3],
        [4, 5, 6],
        [5, 7, 6],
        [0, 1, 4],
        [1, 5, 4],
        [2, 6, 3],
        [3, 6, 7],
        [0, 4, 2],
        [2, 4, 6],
        [1, 3, 5],
        [3, 7, 5],
    ];
    TriangleMesh::new(vertices, faces)
}
