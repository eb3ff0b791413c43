//! Procedural shapes and the reference asset corpus.
//!
//! Everything here is deterministic; the random generators take an
//! explicit RNG. The shipped files under `fixtures/` are written by the
//! `gen_fixtures` example from these builders.

use rand::{Rng, RngExt};

use crate::asset::{JointKind, JointLimit, JointSpec, MaterialSpec, PartSpec, PhysicalAsset};
use crate::bench::{
    GeometryJudgement, JudgeResponse, KinematicsJudgement, MaterialJudgement, ScaleJudgement,
};
use crate::codec;
use crate::geom::Vec3;
use crate::mesh::{box_mesh, TriangleMesh};
use crate::urdf;
use crate::voxel::{PartGrid, SliceMask, VoxelGrid};

pub const CORPUS_RESOLUTION: usize = 64;

fn unit(r: usize) -> VoxelGrid {
    VoxelGrid::unit(r).expect("resolution within bounds")
}

/// Voxels with `min <= (x, y, z) < max`, clipped to the grid.
pub fn box_grid(r: usize, min: [usize; 3], max: [usize; 3]) -> VoxelGrid {
    let mut g = unit(r);
    fill_box(&mut g, min, max, true);
    g
}

pub fn fill_box(g: &mut VoxelGrid, min: [usize; 3], max: [usize; 3], v: bool) {
    let r = g.resolution();
    for z in min[2]..max[2].min(r) {
        for y in min[1]..max[1].min(r) {
            for x in min[0]..max[0].min(r) {
                g.set(x, y, z, v);
            }
        }
    }
}

/// Voxels whose centers lie inside the axis-aligned ellipsoid.
pub fn ellipsoid_grid(r: usize, center: Vec3, radii: Vec3) -> VoxelGrid {
    let mut g = unit(r);
    fill_ellipsoid(&mut g, center, radii);
    g
}

fn fill_ellipsoid(g: &mut VoxelGrid, center: Vec3, radii: Vec3) {
    let r = g.resolution();
    for z in 0..r {
        for y in 0..r {
            for x in 0..r {
                let p = [x as f64 + 0.5, y as f64 + 0.5, z as f64 + 0.5];
                let s: f64 = (0..3).map(|k| ((p[k] - center[k]) / radii[k]).powi(2)).sum();
                if s <= 1.0 {
                    g.set(x, y, z, true);
                }
            }
        }
    }
}

pub fn ball_grid(r: usize, center: Vec3, radius: f64) -> VoxelGrid {
    ellipsoid_grid(r, center, [radius; 3])
}

/// Disk of cells whose centers lie within `radius` of `center` (x, y).
pub fn disk_mask(r: usize, center: [f64; 2], radius: f64) -> SliceMask {
    let mut m = SliceMask::empty(r);
    for y in 0..r {
        for x in 0..r {
            let (dx, dy) = (x as f64 + 0.5 - center[0], y as f64 + 0.5 - center[1]);
            if dx * dx + dy * dy <= radius * radius {
                m.set(x, y, true);
            }
        }
    }
    m
}

/// Cells inside the convex polygon (counter-clockwise vertices).
pub fn polygon_mask(r: usize, poly: &[[f64; 2]]) -> SliceMask {
    let mut m = SliceMask::empty(r);
    for y in 0..r {
        for x in 0..r {
            let p = [x as f64 + 0.5, y as f64 + 0.5];
            let inside = (0..poly.len()).all(|i| {
                let a = poly[i];
                let b = poly[(i + 1) % poly.len()];
                (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) >= 0.0
            });
            if inside {
                m.set(x, y, true);
            }
        }
    }
    m
}

/// `mask` repeated on layers `z0..z1`.
pub fn extrusion_grid(mask: &SliceMask, z0: usize, z1: usize) -> VoxelGrid {
    let r = mask.resolution();
    let mut g = unit(r);
    for z in z0..z1.min(r) {
        for i in mask.bits().iter_ones() {
            g.set(i % r, i / r, z, true);
        }
    }
    g
}

/// Cylinder with its axis along x, y or z (`axis` 0, 1, 2).
pub fn cylinder_grid(r: usize, axis: usize, center: Vec3, radius: f64, len: [usize; 2]) -> VoxelGrid {
    let mut g = unit(r);
    let (u, v) = match axis {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    for a in len[0]..len[1].min(r) {
        for j in 0..r {
            for i in 0..r {
                let (du, dv) = (i as f64 + 0.5 - center[u], j as f64 + 0.5 - center[v]);
                if du * du + dv * dv <= radius * radius {
                    let mut c = [0; 3];
                    c[axis] = a;
                    c[u] = i;
                    c[v] = j;
                    g.set(c[0], c[1], c[2], true);
                }
            }
        }
    }
    g
}

fn union(mut a: VoxelGrid, b: &VoxelGrid) -> VoxelGrid {
    for [x, y, z] in b.iter_occupied().collect::<Vec<_>>() {
        a.set(x, y, z, true);
    }
    a
}

fn minus(mut a: VoxelGrid, b: &VoxelGrid) -> VoxelGrid {
    for [x, y, z] in b.iter_occupied().collect::<Vec<_>>() {
        a.set(x, y, z, false);
    }
    a
}

/// Constant cross-section prisms spanning all `r` layers.
pub fn prism_family(r: usize) -> Vec<(String, VoxelGrid)> {
    let f = r as f64;
    let tri = polygon_mask(r, &[[0.1 * f, 0.1 * f], [0.9 * f, 0.2 * f], [0.4 * f, 0.85 * f]]);
    let hex: Vec<[f64; 2]> = (0..6)
        .map(|i| {
            let a = std::f64::consts::PI / 3.0 * i as f64;
            [f / 2.0 + 0.4 * f * a.cos(), f / 2.0 + 0.4 * f * a.sin()]
        })
        .collect();
    let mut ell = SliceMask::empty(r);
    for y in r / 8..r * 7 / 8 {
        for x in r / 8..r * 3 / 8 {
            ell.set(x, y, true);
        }
    }
    for y in r / 8..r * 3 / 8 {
        for x in r / 8..r * 7 / 8 {
            ell.set(x, y, true);
        }
    }
    vec![
        ("prism_triangle".to_string(), extrusion_grid(&tri, 0, r)),
        ("prism_hexagon".to_string(), extrusion_grid(&polygon_mask(r, &hex), 0, r)),
        ("prism_disk".to_string(), extrusion_grid(&disk_mask(r, [f / 2.0; 2], 0.3 * f), 0, r)),
        ("prism_ell".to_string(), extrusion_grid(&ell, 0, r)),
    ]
}

/// Solid `edge`³ cube at the lattice origin corner `at`.
pub fn cube_grid(r: usize, at: usize, edge: usize) -> VoxelGrid {
    box_grid(r, [at; 3], [at + edge; 3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeKind {
    Blob,
    Box,
    Sphere,
    Extrusion,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 4] = [ShapeKind::Blob, ShapeKind::Box, ShapeKind::Sphere, ShapeKind::Extrusion];
}

fn random_point<R: Rng + ?Sized>(rng: &mut R, r: usize) -> Vec3 {
    let f = r as f64;
    [rng.random::<f64>() * f, rng.random::<f64>() * f, rng.random::<f64>() * f]
}

fn random_range2<R: Rng + ?Sized>(rng: &mut R, r: usize) -> [usize; 2] {
    let a = rng.random_range(0..r);
    let b = rng.random_range(0..r);
    [a.min(b), a.max(b) + 1]
}

/// Random part grid of the given family; may be empty for tiny spheres.
pub fn random_grid<R: Rng + ?Sized>(kind: ShapeKind, r: usize, rng: &mut R) -> VoxelGrid {
    match kind {
        ShapeKind::Box => {
            let (x, y, z) = (random_range2(rng, r), random_range2(rng, r), random_range2(rng, r));
            box_grid(r, [x[0], y[0], z[0]], [x[1], y[1], z[1]])
        }
        ShapeKind::Sphere => {
            let radius = rng.random::<f64>() * r as f64 / 2.0 + 0.5;
            ball_grid(r, random_point(rng, r), radius)
        }
        ShapeKind::Blob => {
            let mut g = unit(r);
            for _ in 0..rng.random_range(1..6usize) {
                let radii = [
                    rng.random::<f64>() * r as f64 / 3.0 + 0.5,
                    rng.random::<f64>() * r as f64 / 3.0 + 0.5,
                    rng.random::<f64>() * r as f64 / 3.0 + 0.5,
                ];
                fill_ellipsoid(&mut g, random_point(rng, r), radii);
            }
            // Sparse salt-and-pepper noise.
            let p = rng.random::<f64>() * 0.05;
            for z in 0..r {
                for y in 0..r {
                    for x in 0..r {
                        if rng.random::<f64>() < p {
                            let v = g.get(x, y, z);
                            g.set(x, y, z, !v);
                        }
                    }
                }
            }
            g
        }
        ShapeKind::Extrusion => {
            let mut m = SliceMask::empty(r);
            for _ in 0..rng.random_range(1..4usize) {
                let (xr, yr) = (random_range2(rng, r), random_range2(rng, r));
                for y in yr[0]..yr[1] {
                    for x in xr[0]..xr[1] {
                        m.set(x, y, true);
                    }
                }
            }
            let z = random_range2(rng, r);
            extrusion_grid(&m, z[0], z[1])
        }
    }
}

/// UV sphere with `rings` latitude bands and `segments` longitude slices.
pub fn sphere_mesh(center: Vec3, radius: f64, rings: usize, segments: usize) -> TriangleMesh {
    let mut v = vec![[center[0], center[1], center[2] + radius]];
    for i in 1..rings {
        let th = std::f64::consts::PI * i as f64 / rings as f64;
        for j in 0..segments {
            let ph = 2.0 * std::f64::consts::PI * j as f64 / segments as f64;
            v.push([
                center[0] + radius * th.sin() * ph.cos(),
                center[1] + radius * th.sin() * ph.sin(),
                center[2] + radius * th.cos(),
            ]);
        }
    }
    v.push([center[0], center[1], center[2] - radius]);
    let south = (v.len() - 1) as u32;
    let ring = |i: usize, j: usize| (1 + (i - 1) * segments + j % segments) as u32;
    let mut f = Vec::new();
    for j in 0..segments {
        f.push([0, ring(1, j), ring(1, j + 1)]);
        f.push([south, ring(rings - 1, j + 1), ring(rings - 1, j)]);
    }
    for i in 1..rings - 1 {
        for j in 0..segments {
            let (a, b, c, d) = (ring(i, j), ring(i, j + 1), ring(i + 1, j), ring(i + 1, j + 1));
            f.push([a, c, d]);
            f.push([a, d, b]);
        }
    }
    TriangleMesh::new(v, f)
}

pub fn tetrahedron_mesh() -> TriangleMesh {
    TriangleMesh::new(
        vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        vec![[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]],
    )
}

/// Two labeled boxes, a body (part 0) with a lid (part 1) on top.
pub fn labeled_box_pair() -> TriangleMesh {
    let body = box_mesh([0.0, 0.0, 0.0], [2.0, 1.0, 1.0]);
    let lid = box_mesh([0.0, 0.0, 1.0], [2.0, 1.0, 1.25]);
    let n_body = body.faces.len();
    let n_lid = lid.faces.len();
    let mut labels = vec![0; n_body];
    labels.extend(vec![1; n_lid]);
    TriangleMesh::merge(&[body, lid]).with_labels(labels)
}

/// Named meshes shipped as OBJ files.
pub fn mesh_corpus() -> Vec<(String, TriangleMesh)> {
    vec![
        ("box".into(), box_mesh([0.0; 3], [1.0, 0.5, 0.25])),
        ("sphere".into(), sphere_mesh([0.0; 3], 1.0, 12, 24)),
        ("sphere_offset".into(), sphere_mesh([0.3, 0.0, 0.0], 1.05, 12, 24)),
        ("tetrahedron".into(), tetrahedron_mesh()),
        ("box_pair".into(), labeled_box_pair()),
    ]
}

pub fn wood() -> MaterialSpec {
    material("wood", 600.0, 1.1e10, 0.3)
}

pub fn steel() -> MaterialSpec {
    material("steel", 7850.0, 2.0e11, 0.29)
}

pub fn plastic() -> MaterialSpec {
    material("plastic", 950.0, 2.0e9, 0.35)
}

pub fn rubber() -> MaterialSpec {
    material("rubber", 1100.0, 1.0e7, 0.49)
}

pub fn foam() -> MaterialSpec {
    material("foam", 30.0, 1.0e5, 0.3)
}

pub fn glass() -> MaterialSpec {
    material("glass", 2500.0, 7.0e10, 0.22)
}

fn material(name: &str, density: f64, youngs_modulus: f64, poisson_ratio: f64) -> MaterialSpec {
    MaterialSpec {
        name: name.into(),
        density,
        youngs_modulus,
        poisson_ratio,
    }
}

/// A part before its joint origin is mapped into meters.
#[derive(Debug, Clone)]
pub struct PartDraft {
    pub id: u32,
    pub name: String,
    pub description: String,
    pub parent: Option<u32>,
    pub material: MaterialSpec,
    pub affordance: f64,
    pub kind: JointKind,
    /// Joint origin in lattice coordinates (voxel corners are integers).
    pub origin_lattice: Vec3,
    pub axis: Vec3,
    pub limit: Option<JointLimit>,
    pub grid: VoxelGrid,
}

impl PartDraft {
    pub fn new(id: u32, name: &str, description: &str, material: MaterialSpec, affordance: f64, grid: VoxelGrid) -> Self {
        Self {
            id,
            name: name.into(),
            description: description.into(),
            parent: None,
            material,
            affordance,
            kind: JointKind::Fixed,
            origin_lattice: [0.0; 3],
            axis: [0.0, 0.0, 1.0],
            limit: None,
            grid,
        }
    }

    pub fn child(mut self, parent: u32, kind: JointKind, origin_lattice: Vec3, axis: Vec3, limit: Option<[f64; 2]>) -> Self {
        self.parent = Some(parent);
        self.kind = kind;
        self.origin_lattice = origin_lattice;
        self.axis = axis;
        self.limit = limit.map(|[lower, upper]| JointLimit { lower, upper });
        self
    }
}

/// Encodes the drafts and maps joint origins into the asset frame.
pub fn build_asset(category: &str, description: &str, scale_m: Vec3, deformable: bool, drafts: Vec<PartDraft>) -> PhysicalAsset {
    let grids: Vec<PartGrid> = drafts
        .iter()
        .map(|d| PartGrid {
            part_id: d.id,
            grid: d.grid.clone(),
        })
        .collect();
    let frame = urdf::asset_frame(&grids, scale_m);
    let parts = drafts
        .into_iter()
        .zip(&grids)
        .map(|(d, g)| {
            let origin_m = match (d.parent, frame) {
                (Some(_), Some(f)) => f.to_asset(d.origin_lattice),
                _ => [0.0; 3],
            };
            PartSpec {
                id: d.id,
                name: d.name,
                description: d.description,
                parent: d.parent,
                material: d.material,
                affordance: d.affordance,
                joint: JointSpec {
                    kind: d.kind,
                    origin_m,
                    axis: d.axis,
                    limit: d.limit,
                },
                geometry: codec::encode_part(g),
            }
        })
        .collect();
    PhysicalAsset {
        category: category.into(),
        description: description.into(),
        scale_m,
        deformable,
        parts,
    }
}

const R: usize = CORPUS_RESOLUTION;
const Z: Vec3 = [0.0, 0.0, 1.0];
const QUARTER_TURN: f64 = std::f64::consts::FRAC_PI_2;

/// Two-part cabinet whose door swings on a vertical hinge.
pub fn cabinet() -> PhysicalAsset {
    let shell = minus(box_grid(R, [8, 8, 4], [40, 56, 60]), &box_grid(R, [10, 10, 6], [40, 54, 58]));
    let door = box_grid(R, [40, 8, 4], [42, 56, 60]);
    build_asset(
        "cabinet",
        "A wooden storage cabinet with a single hinged door.",
        [0.45, 0.6, 0.9],
        false,
        vec![
            PartDraft::new(0, "body", "Open-front box forming the cabinet carcass.", wood(), 0.2, shell),
            PartDraft::new(1, "door", "Flat door panel hinged on its left edge.", wood(), 0.9, door).child(
                0,
                JointKind::Revolute,
                [41.0, 8.0, 32.0],
                Z,
                Some([0.0, QUARTER_TURN]),
            ),
        ],
    )
}

/// Solid 10³-voxel cube at 1 cm voxels and density 1000 kg/m³, so 1 kg.
pub fn mass_box() -> PhysicalAsset {
    build_asset(
        "box",
        "A solid cube of water-density material used to check mass export.",
        [0.1, 0.1, 0.1],
        false,
        vec![PartDraft::new(
            0,
            "cube",
            "Solid cube.",
            material("water_solid", 1000.0, 2.2e9, 0.45),
            0.5,
            cube_grid(R, 27, 10),
        )],
    )
}

pub fn drawer_chest() -> PhysicalAsset {
    let frame = minus(
        box_grid(R, [10, 8, 4], [50, 56, 56]),
        &union(box_grid(R, [12, 10, 6], [50, 54, 29]), &box_grid(R, [12, 10, 31], [50, 54, 54])),
    );
    let drawer = |z0: usize| {
        minus(
            box_grid(R, [12, 10, z0], [52, 54, z0 + 23]),
            &box_grid(R, [14, 12, z0 + 2], [50, 52, z0 + 23]),
        )
    };
    let x = [1.0, 0.0, 0.0];
    build_asset(
        "chest_of_drawers",
        "A two-drawer chest with sliding drawers.",
        [0.5, 0.55, 0.6],
        false,
        vec![
            PartDraft::new(0, "frame", "Carcass with two drawer bays.", wood(), 0.1, frame),
            PartDraft::new(1, "lower_drawer", "Lower sliding drawer.", wood(), 0.8, drawer(6))
                .child(0, JointKind::Prismatic, [52.0, 32.0, 17.0], x, Some([0.0, 0.35])),
            PartDraft::new(2, "upper_drawer", "Upper sliding drawer.", wood(), 0.85, drawer(31))
                .child(0, JointKind::Prismatic, [52.0, 32.0, 42.0], x, Some([0.0, 0.35])),
        ],
    )
}

pub fn desk_lamp() -> PhysicalAsset {
    let base = cylinder_grid(R, 2, [32.0, 32.0, 0.0], 12.0, [2, 6]);
    let arm = box_grid(R, [30, 30, 6], [34, 34, 44]);
    let head = ellipsoid_grid(R, [32.0, 32.0, 50.0], [10.0, 10.0, 6.0]);
    build_asset(
        "lamp",
        "A desk lamp with a tilting arm and a spinning shade.",
        [0.25, 0.25, 0.5],
        false,
        vec![
            PartDraft::new(0, "base", "Weighted round base.", steel(), 0.3, base),
            PartDraft::new(1, "arm", "Straight arm tilting about its foot.", steel(), 0.6, arm).child(
                0,
                JointKind::Revolute,
                [32.0, 32.0, 6.0],
                [1.0, 0.0, 0.0],
                Some([-0.6, 0.6]),
            ),
            PartDraft::new(2, "shade", "Dome shade rotating freely.", plastic(), 0.7, head).child(
                1,
                JointKind::Continuous,
                [32.0, 32.0, 44.0],
                Z,
                None,
            ),
        ],
    )
}

pub fn scissors() -> PhysicalAsset {
    let blade_a = union(
        box_grid(R, [8, 28, 30], [56, 32, 32]),
        &box_grid(R, [4, 24, 30], [14, 36, 32]),
    );
    let blade_b = union(
        box_grid(R, [8, 32, 32], [56, 36, 34]),
        &box_grid(R, [4, 30, 32], [14, 40, 34]),
    );
    build_asset(
        "scissors",
        "A pair of scissors pivoting on a central rivet.",
        [0.2, 0.06, 0.01],
        false,
        vec![
            PartDraft::new(0, "blade_a", "Lower blade with handle loop.", steel(), 0.6, blade_a),
            PartDraft::new(1, "blade_b", "Upper blade pivoting about the rivet.", steel(), 0.65, blade_b).child(
                0,
                JointKind::Revolute,
                [32.0, 32.0, 32.0],
                Z,
                Some([-0.5, 0.0]),
            ),
        ],
    )
}

pub fn toy_car() -> PhysicalAsset {
    let body = union(box_grid(R, [8, 18, 14], [56, 46, 26]), &box_grid(R, [20, 20, 26], [44, 44, 36]));
    let y = [0.0, 1.0, 0.0];
    let mut parts = vec![PartDraft::new(0, "chassis", "Car body with cabin.", plastic(), 0.4, body)];
    let wheels = [(16.0, 18usize), (48.0, 18), (16.0, 46), (48.0, 46)];
    for (i, &(x, y0)) in wheels.iter().enumerate() {
        let (lo, hi) = if y0 < 32 { (y0 - 4, y0) } else { (y0, y0 + 4) };
        let wheel = cylinder_grid(R, 1, [x, 0.0, 14.0], 6.0, [lo, hi]);
        let side = if y0 < 32 { "left" } else { "right" };
        let end = if x < 32.0 { "rear" } else { "front" };
        parts.push(
            PartDraft::new(i as u32 + 1, &format!("{end}_{side}_wheel"), "Rubber wheel on a free axle.", rubber(), 0.5, wheel)
                .child(0, JointKind::Continuous, [x, y0 as f64, 14.0], y, None),
        );
    }
    build_asset("toy_car", "A four-wheeled toy car.", [0.3, 0.2, 0.15], false, parts)
}

/// Deformable single-part pillow.
pub fn pillow() -> PhysicalAsset {
    build_asset(
        "pillow",
        "A soft foam pillow.",
        [0.6, 0.4, 0.15],
        true,
        vec![PartDraft::new(
            0,
            "cushion",
            "Flattened foam cushion.",
            foam(),
            0.7,
            ellipsoid_grid(R, [32.0, 32.0, 32.0], [30.0, 20.0, 8.0]),
        )],
    )
}

/// Deformable two-part mattress: a foam core with a fixed rubber topper.
pub fn mattress() -> PhysicalAsset {
    build_asset(
        "mattress",
        "A foam mattress with a rubber topper.",
        [1.9, 0.9, 0.25],
        true,
        vec![
            PartDraft::new(0, "core", "Foam core.", foam(), 0.3, box_grid(R, [2, 16, 20], [62, 48, 36])),
            PartDraft::new(1, "topper", "Thin rubber topper.", rubber(), 0.6, box_grid(R, [2, 16, 36], [62, 48, 40]))
                .child(0, JointKind::Fixed, [32.0, 32.0, 36.0], Z, None),
        ],
    )
}

pub fn table() -> PhysicalAsset {
    let top = box_grid(R, [4, 12, 44], [60, 52, 50]);
    let mut parts = vec![PartDraft::new(0, "top", "Rectangular tabletop.", wood(), 0.6, top)];
    for (i, (x, y)) in [(6usize, 14usize), (54, 14), (6, 46), (54, 46)].into_iter().enumerate() {
        let leg = box_grid(R, [x, y, 4], [x + 4, y + 4, 44]);
        parts.push(
            PartDraft::new(i as u32 + 1, &format!("leg_{i}"), "Square leg.", wood(), 0.2, leg).child(
                0,
                JointKind::Fixed,
                [x as f64 + 2.0, y as f64 + 2.0, 44.0],
                Z,
                None,
            ),
        );
    }
    build_asset("table", "A four-legged dining table.", [1.2, 0.8, 0.75], false, parts)
}

pub fn bottle() -> PhysicalAsset {
    let body = union(
        cylinder_grid(R, 2, [32.0, 32.0, 0.0], 12.0, [2, 42]),
        &cylinder_grid(R, 2, [32.0, 32.0, 0.0], 5.0, [42, 52]),
    );
    let cap = cylinder_grid(R, 2, [32.0, 32.0, 0.0], 6.0, [52, 58]);
    build_asset(
        "bottle",
        "A glass bottle with a screw cap.",
        [0.08, 0.08, 0.3],
        false,
        vec![
            PartDraft::new(0, "body", "Bottle body and neck.", glass(), 0.5, body),
            PartDraft::new(1, "cap", "Screw cap.", plastic(), 0.9, cap).child(0, JointKind::Continuous, [32.0, 32.0, 52.0], Z, None),
        ],
    )
}

pub fn laptop() -> PhysicalAsset {
    let base = box_grid(R, [8, 10, 20], [56, 44, 23]);
    let lid = box_grid(R, [8, 42, 23], [56, 44, 56]);
    build_asset(
        "laptop",
        "A laptop with a hinged screen.",
        [0.34, 0.24, 0.23],
        false,
        vec![
            PartDraft::new(0, "base", "Keyboard base.", plastic(), 0.7, base),
            PartDraft::new(1, "screen", "Screen lid hinged along its lower edge.", plastic(), 0.8, lid).child(
                0,
                JointKind::Revolute,
                [32.0, 44.0, 23.0],
                [1.0, 0.0, 0.0],
                Some([0.0, 2.0]),
            ),
        ],
    )
}

/// The reference corpus, keyed by file stem.
pub fn asset_corpus() -> Vec<(String, PhysicalAsset)> {
    vec![
        ("cabinet".into(), cabinet()),
        ("mass_box".into(), mass_box()),
        ("drawer_chest".into(), drawer_chest()),
        ("desk_lamp".into(), desk_lamp()),
        ("scissors".into(), scissors()),
        ("toy_car".into(), toy_car()),
        ("pillow".into(), pillow()),
        ("mattress".into(), mattress()),
        ("table".into(), table()),
        ("bottle".into(), bottle()),
        ("laptop".into(), laptop()),
    ]
}

/// Small valid two-part asset used as the base of the invalid fixtures.
pub fn small_hinge() -> PhysicalAsset {
    build_asset(
        "hinge",
        "Two plates joined by a hinge.",
        [0.1, 0.05, 0.01],
        false,
        vec![
            PartDraft::new(0, "plate_a", "Fixed plate.", steel(), 0.3, box_grid(8, [1, 2, 3], [4, 6, 4])),
            PartDraft::new(1, "plate_b", "Swinging plate.", steel(), 0.6, box_grid(8, [4, 2, 3], [7, 6, 4])).child(
                0,
                JointKind::Revolute,
                [4.0, 4.0, 3.5],
                [0.0, 1.0, 0.0],
                Some([-1.0, 1.0]),
            ),
        ],
    )
}

/// Textual edits of the serialized [`small_hinge`] that each break one
/// invariant: `(stem, text, violated field)`.
pub fn invalid_asset_texts() -> Vec<(String, String, String)> {
    let base = crate::asset::serialize_asset(&small_hinge()).expect("valid base asset");
    let edit = |from: &str, to: &str, nth: usize| -> String {
        let i = base.match_indices(from).nth(nth).map(|(i, _)| i).unwrap_or_else(|| panic!("`{from}` occurrence {nth} not in base asset"));
        format!("{}{}{}", &base[..i], to, &base[i + from.len()..])
    };
    let cases: Vec<(&str, String, &str)> = vec![
        ("poisson_ratio", edit("poisson_ratio 0.29", "poisson_ratio 0.7", 0), "material.poisson_ratio"),
        ("zero_axis", edit("axis 0 1 0", "axis 0 0 0", 0), "joint.axis"),
        ("two_roots", edit("parent 0", "parent none", 0), "parts"),
        ("cycle", edit("parent none", "parent 1", 0), "parts"),
        ("self_parent", edit("parent 0", "parent 1", 0), "parent"),
        ("missing_parent", edit("parent 0", "parent 7", 0), "parent"),
        ("affordance", edit("affordance 0.6", "affordance 1.5", 0), "affordance"),
        ("density", edit("density 7850", "density -1", 1), "material.density"),
        ("youngs_modulus", edit("youngs_modulus 200000000000", "youngs_modulus 0", 0), "material.youngs_modulus"),
        ("limit_order", edit("limit -1 1", "limit 1 -1", 0), "joint.limit"),
        ("missing_limit", edit("limit -1 1", "limit none", 0), "joint.limit"),
        ("root_revolute", edit("kind fixed", "kind continuous", 0), "joint.kind"),
        ("deformable_joint", edit("deformable false", "deformable true", 0), "joint.kind"),
        ("scale", edit("scale 0.1 0.05 0.01", "scale 0.1 0 0.01", 0), "scale"),
        ("duplicate_id", edit("part 1 {", "part 0 {", 0), "id"),
        ("depth", edit("|E\"", "\"", 1), "geometry"),
    ];
    cases
        .into_iter()
        .map(|(n, t, f)| (n.to_string(), t, f.to_string()))
        .collect()
}

fn judge(
    id: &str,
    g: (f64, f64, i64),
    judged_dim: f64,
    mat: (f64, f64),
    aff: f64,
    kin: (f64, f64, f64),
    desc: f64,
) -> JudgeResponse {
    JudgeResponse {
        asset_id: id.into(),
        geometry: Some(GeometryJudgement {
            clip: g.0,
            consistency_3d: g.1,
            visual_quality: g.2,
        }),
        scale: Some(ScaleJudgement {
            judged_max_dim_m: judged_dim,
        }),
        material: Some(MaterialJudgement {
            freefall: mat.0,
            waterdrop: mat.1,
        }),
        affordance: Some(aff),
        kinematics: Some(KinematicsJudgement {
            prior_part: kin.0,
            revealed_entity: kin.1,
            global_coherence: kin.2,
        }),
        description: Some(desc),
    }
}

/// Judge responses for five corpus assets, one file each.
pub fn judge_corpus() -> Vec<(String, Vec<JudgeResponse>)> {
    vec![
        ("cabinet".into(), vec![judge("cabinet", (0.32, 84.0, 4), 0.9, (70.0, 64.0), 78.0, (80.0, 70.0, 90.0), 66.0)]),
        ("desk_lamp".into(), vec![judge("desk_lamp", (0.28, 76.0, 3), 0.4, (60.0, 58.0), 71.0, (75.0, 60.0, 85.0), 72.0)]),
        ("laptop".into(), vec![judge("laptop", (0.35, 90.0, 5), 0.34, (82.0, 78.0), 88.0, (90.0, 85.0, 95.0), 81.0)]),
        ("scissors".into(), vec![judge("scissors", (0.25, 68.0, 2), 0.25, (55.0, 49.0), 63.0, (65.0, 55.0, 70.0), 58.0)]),
        ("table".into(), vec![judge("table", (0.3, 80.0, 4), 1.5, (74.0, 70.0), 69.0, (100.0, 100.0, 100.0), 75.0)]),
    ]
}

/// Human preference scores for five methods: geometry ranks with two
/// adjacent swaps relative to the automatic scores, material identical.
pub fn human_table() -> String {
    "method,dimension,score\n\
     method_a,geometry,4.1\n\
     method_b,geometry,3.9\n\
     method_c,geometry,3.2\n\
     method_d,geometry,3.4\n\
     method_e,geometry,2.0\n\
     method_a,material,4.5\n\
     method_b,material,3.5\n\
     method_c,material,3.0\n\
     method_d,material,2.5\n\
     method_e,material,1.0\n"
        .to_string()
}

/// Automatic summary scores matching [`human_table`].
pub fn auto_table() -> String {
    "method,dimension,score\n\
     method_a,geometry,80\n\
     method_b,geometry,85\n\
     method_c,geometry,70\n\
     method_d,geometry,65\n\
     method_e,geometry,50\n\
     method_a,material,90\n\
     method_b,material,70\n\
     method_c,material,60\n\
     method_d,material,50\n\
     method_e,material,20\n"
        .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asset::validate;

    #[test]
    fn corpus_is_valid() {
        let corpus = asset_corpus();
        assert!(corpus.len() >= 10);
        for (name, a) in &corpus {
            assert!(validate(a).is_empty(), "{name}: {:?}", validate(a));
            assert!(a.parts.len() <= 10);
            assert_eq!(a.resolution(), Some(CORPUS_RESOLUTION));
        }
    }

    #[test]
    fn prisms_fill_every_layer() {
        for (name, g) in prism_family(16) {
            let c = codec::encode_part(&PartGrid { part_id: 0, grid: g });
            assert_eq!(c.template_count(), 1, "{name}");
        }
    }

    #[test]
    fn sphere_mesh_is_closed() {
        let m = sphere_mesh([0.0; 3], 1.0, 6, 8);
        m.check().unwrap();
        let mut edges = std::collections::HashMap::new();
        for f in &m.faces {
            for k in 0..3 {
                *edges.entry((f[k], f[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        for (&(a, b), &n) in &edges {
            assert_eq!(n, 1);
            assert_eq!(edges.get(&(b, a)), Some(&1));
        }
    }
}
