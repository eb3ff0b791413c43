//! Dense cubic occupancy grids: surface voxelization, solid filling,
//! part decomposition, z-slicing and boundary mesh extraction.
//!
//! Linear voxel index is `x + R * (y + R * z)`.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::bits::BitBuf;
use crate::geom::{self, Vec3};
use crate::mesh::{MeshError, TriangleMesh};

pub const DEFAULT_RESOLUTION: usize = 64;
/// Upper bound on accepted lattice resolution (R³ bits must stay allocatable).
pub const MAX_RESOLUTION: usize = 1024;

// Slack, in voxel units, added around each box in the triangle-box test so
// that surfaces lying exactly on a lattice plane are not lost to rounding.
const BOX_SLACK: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum VoxelError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error("grid dump line {line}: {msg}")]
    Dump { line: usize, msg: String },
}

#[derive(Clone, PartialEq)]
pub struct VoxelGrid {
    resolution: usize,
    occupancy: BitBuf,
    pub origin: Vec3,
    pub voxel_size: f64,
}

impl std::fmt::Debug for VoxelGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("VoxelGrid")
            .field("resolution", &self.resolution)
            .field("occupied", &self.count())
            .field("origin", &self.origin)
            .field("voxel_size", &self.voxel_size)
            .finish()
    }
}

impl VoxelGrid {
    pub fn new(resolution: usize, origin: Vec3, voxel_size: f64) -> Result<Self, VoxelError> {
        if !(2..=MAX_RESOLUTION).contains(&resolution) {
            return Err(VoxelError::InvalidInput(format!(
                "resolution {resolution} outside 2..={MAX_RESOLUTION}"
            )));
        }
        if !(voxel_size > 0.0 && voxel_size.is_finite()) {
            return Err(VoxelError::InvalidInput(format!(
                "voxel size {voxel_size} must be positive"
            )));
        }
        Ok(Self {
            resolution,
            occupancy: BitBuf::zeros(resolution * resolution * resolution),
            origin,
            voxel_size,
        })
    }

    /// Unit voxels anchored at the origin.
    pub fn unit(resolution: usize) -> Result<Self, VoxelError> {
        Self::new(resolution, [0.0; 3], 1.0)
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn occupancy(&self) -> &BitBuf {
        &self.occupancy
    }

    #[inline]
    pub fn index(&self, x: usize, y: usize, z: usize) -> usize {
        x + self.resolution * (y + self.resolution * z)
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let r = self.resolution;
        [idx % r, (idx / r) % r, idx / (r * r)]
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, z: usize) -> bool {
        self.occupancy.get(self.index(x, y, z))
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, z: usize, v: bool) {
        let i = self.index(x, y, z);
        self.occupancy.set(i, v);
    }

    pub fn count(&self) -> usize {
        self.occupancy.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.occupancy.none()
    }

    pub fn iter_occupied(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.occupancy.iter_ones().map(|i| self.coords(i))
    }

    /// World-space center of voxel `(x, y, z)`.
    pub fn voxel_center(&self, x: usize, y: usize, z: usize) -> Vec3 {
        let s = self.voxel_size;
        [
            self.origin[0] + (x as f64 + 0.5) * s,
            self.origin[1] + (y as f64 + 0.5) * s,
            self.origin[2] + (z as f64 + 0.5) * s,
        ]
    }

    /// Inclusive voxel-index bounds `(min, max)` of the occupied set.
    pub fn occupied_bounds(&self) -> Option<([usize; 3], [usize; 3])> {
        let mut it = self.iter_occupied();
        let first = it.next()?;
        let (mut lo, mut hi) = (first, first);
        for c in it {
            for k in 0..3 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        Some((lo, hi))
    }

    /// Same lattice, no occupied voxels.
    pub fn cleared(&self) -> Self {
        Self {
            resolution: self.resolution,
            occupancy: BitBuf::zeros(self.occupancy.len()),
            origin: self.origin,
            voxel_size: self.voxel_size,
        }
    }

    pub fn same_lattice(&self, other: &VoxelGrid) -> bool {
        self.resolution == other.resolution
            && self.origin == other.origin
            && self.voxel_size == other.voxel_size
    }

    /// Text dump: one line of `R²` `0`/`1` characters per z-slice (x fastest,
    /// then y), slices separated by blank lines.
    pub fn to_dump(&self) -> String {
        let r = self.resolution;
        let mut out = String::with_capacity(r * r * r + 2 * r);
        for z in 0..r {
            if z > 0 {
                out.push('\n');
            }
            let base = z * r * r;
            for i in 0..r * r {
                out.push(if self.occupancy.get(base + i) { '1' } else { '0' });
            }
            out.push('\n');
        }
        out
    }

    /// Inverse of [`VoxelGrid::to_dump`]; the lattice is anchored at the
    /// origin with unit voxels.
    pub fn from_dump(text: &str) -> Result<Self, VoxelError> {
        let mut slices: Vec<(usize, &str)> = Vec::new();
        let mut expect_blank = false;
        for (ln, line) in text.lines().enumerate() {
            let line_no = ln + 1;
            if expect_blank {
                if !line.is_empty() {
                    return Err(VoxelError::Dump {
                        line: line_no,
                        msg: "slices must be separated by a blank line".into(),
                    });
                }
                expect_blank = false;
                continue;
            }
            if line.is_empty() {
                return Err(VoxelError::Dump {
                    line: line_no,
                    msg: "unexpected blank line".into(),
                });
            }
            slices.push((line_no, line));
            expect_blank = true;
        }
        let r = slices.len();
        let grid = Self::unit(r).map_err(|_| VoxelError::Dump {
            line: 1,
            msg: format!("{r} slices is not a valid resolution"),
        })?;
        let mut grid = grid;
        for (z, (line_no, line)) in slices.into_iter().enumerate() {
            if line.len() != r * r {
                return Err(VoxelError::Dump {
                    line: line_no,
                    msg: format!("expected {} cells, found {}", r * r, line.len()),
                });
            }
            for (i, b) in line.bytes().enumerate() {
                match b {
                    b'0' => {}
                    b'1' => grid.occupancy.set(z * r * r + i, true),
                    _ => {
                        return Err(VoxelError::Dump {
                            line: line_no,
                            msg: format!("invalid cell character at column {}", i + 1),
                        })
                    }
                }
            }
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartGrid {
    pub part_id: u32,
    pub grid: VoxelGrid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceMask {
    resolution: usize,
    bits: BitBuf,
}

impl SliceMask {
    pub fn empty(resolution: usize) -> Self {
        Self {
            resolution,
            bits: BitBuf::zeros(resolution * resolution),
        }
    }

    pub fn full(resolution: usize) -> Self {
        Self {
            resolution,
            bits: BitBuf::ones(resolution * resolution),
        }
    }

    pub fn from_bits(resolution: usize, bits: BitBuf) -> Self {
        assert_eq!(bits.len(), resolution * resolution, "mask must have R² bits");
        Self { resolution, bits }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn bits(&self) -> &BitBuf {
        &self.bits
    }

    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits.get(x + self.resolution * y)
    }

    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.bits.set(x + self.resolution * y, v);
    }
}

/// Conservative surface voxelization.
///
/// The lattice spans the mesh bounding box padded by one voxel per side
/// along the longest axis (`voxel_size = longest edge / (R - 2)`), with the
/// box minimum at voxel 1 on every axis. A voxel is set when a triangle
/// touches its closed box. The outer shell of the grid is reserved as
/// padding and never set.
pub fn voxelize_surface(mesh: &TriangleMesh, resolution: usize) -> Result<VoxelGrid, VoxelError> {
    if mesh.is_empty() {
        return Err(VoxelError::InvalidInput("mesh has no faces".into()));
    }
    if resolution < 3 {
        return Err(VoxelError::InvalidInput(format!(
            "resolution {resolution} leaves no interior after padding"
        )));
    }
    mesh.check()?;
    let (lo, hi) = mesh.bounds().expect("non-empty mesh");
    let longest = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
    if longest <= 0.0 {
        return Err(VoxelError::InvalidInput(
            "mesh bounding box has zero extent".into(),
        ));
    }
    let vs = longest / (resolution - 2) as f64;
    let origin = [lo[0] - vs, lo[1] - vs, lo[2] - vs];
    let mut grid = VoxelGrid::new(resolution, origin, vs)?;

    let inner_max = (resolution - 2) as i64;
    let half = [0.5 + BOX_SLACK; 3];
    for f in 0..mesh.faces.len() {
        let tri = mesh
            .triangle(f)
            .map(|p| [(p[0] - origin[0]) / vs, (p[1] - origin[1]) / vs, (p[2] - origin[2]) / vs]);
        let mut range = [(0i64, 0i64); 3];
        for (k, r) in range.iter_mut().enumerate() {
            let mn = tri[0][k].min(tri[1][k]).min(tri[2][k]);
            let mx = tri[0][k].max(tri[1][k]).max(tri[2][k]);
            *r = (
                ((mn - BOX_SLACK).floor() as i64).max(1),
                ((mx + BOX_SLACK).floor() as i64).min(inner_max),
            );
        }
        for z in range[2].0..=range[2].1 {
            for y in range[1].0..=range[1].1 {
                for x in range[0].0..=range[0].1 {
                    let (xu, yu, zu) = (x as usize, y as usize, z as usize);
                    if grid.get(xu, yu, zu) {
                        continue;
                    }
                    let c = [x as f64 + 0.5, y as f64 + 0.5, z as f64 + 0.5];
                    if geom::triangle_box_overlap(c, half, tri) {
                        grid.set(xu, yu, zu, true);
                    }
                }
            }
        }
    }
    Ok(grid)
}

/// Fills enclosed cavities: everything not 6-connected to the grid boundary
/// through empty voxels becomes occupied.
pub fn fill_solid(grid: &VoxelGrid) -> VoxelGrid {
    let r = grid.resolution;
    let mut outside = BitBuf::zeros(r * r * r);
    let mut queue = VecDeque::new();
    for z in 0..r {
        for y in 0..r {
            for x in 0..r {
                let on_boundary = x == 0 || y == 0 || z == 0 || x == r - 1 || y == r - 1 || z == r - 1;
                if on_boundary {
                    let i = grid.index(x, y, z);
                    if !grid.occupancy.get(i) && !outside.get(i) {
                        outside.set(i, true);
                        queue.push_back([x, y, z]);
                    }
                }
            }
        }
    }
    while let Some(c) = queue.pop_front() {
        for n in neighbors6(c, r).into_iter().flatten() {
            let i = grid.index(n[0], n[1], n[2]);
            if !grid.occupancy.get(i) && !outside.get(i) {
                outside.set(i, true);
                queue.push_back(n);
            }
        }
    }
    let mut out = grid.clone();
    out.occupancy = outside.xor(&BitBuf::ones(r * r * r));
    out
}

fn neighbors6(c: [usize; 3], r: usize) -> [Option<[usize; 3]>; 6] {
    let [x, y, z] = c;
    [
        (x > 0).then(|| [x - 1, y, z]),
        (x + 1 < r).then(|| [x + 1, y, z]),
        (y > 0).then(|| [x, y - 1, z]),
        (y + 1 < r).then(|| [x, y + 1, z]),
        (z > 0).then(|| [x, y, z - 1]),
        (z + 1 < r).then(|| [x, y, z + 1]),
    ]
}

/// Assigns every occupied voxel to the label of the nearest labeled
/// triangle (distance from the voxel center; ties go to the lowest label).
/// Returns one grid per label present in the mesh, sorted by label.
pub fn split_parts(grid: &VoxelGrid, mesh: &TriangleMesh) -> Result<Vec<PartGrid>, VoxelError> {
    mesh.check()?;
    if mesh.is_empty() {
        return Err(VoxelError::InvalidInput("mesh has no faces".into()));
    }
    let labels: Vec<u32> = (0..mesh.faces.len())
        .map(|f| {
            mesh.label(f).ok_or_else(|| {
                VoxelError::InvalidInput(format!("face {f} carries no part label"))
            })
        })
        .collect::<Result<_, _>>()?;
    let mut ids = labels.clone();
    ids.sort_unstable();
    ids.dedup();
    let mut parts: Vec<PartGrid> = ids
        .iter()
        .map(|&part_id| PartGrid {
            part_id,
            grid: grid.cleared(),
        })
        .collect();
    let tris: Vec<[Vec3; 3]> = (0..mesh.faces.len()).map(|f| mesh.triangle(f)).collect();

    for idx in grid.occupancy.iter_ones() {
        let [x, y, z] = grid.coords(idx);
        let p = grid.voxel_center(x, y, z);
        let mut best = (f64::INFINITY, u32::MAX);
        for (t, &label) in tris.iter().zip(&labels) {
            let d = geom::point_triangle_dist2(p, t[0], t[1], t[2]);
            if d < best.0 || (d == best.0 && label < best.1) {
                best = (d, label);
            }
        }
        let slot = ids.binary_search(&best.1).expect("label collected above");
        parts[slot].grid.occupancy.set(idx, true);
    }
    Ok(parts)
}

/// Splits a part volume into `R` masks, `z = 0..R`.
pub fn slice_z(part: &PartGrid) -> Vec<SliceMask> {
    let r = part.grid.resolution;
    let rr = r * r;
    (0..r)
        .map(|z| {
            let mut bits = BitBuf::zeros(rr);
            bits.copy_from(0, &part.grid.occupancy, z * rr, rr);
            SliceMask::from_bits(r, bits)
        })
        .collect()
}

/// Stacks `R` masks of resolution `R` back into a grid on the given lattice.
pub fn stack_slices(
    part_id: u32,
    masks: &[SliceMask],
    origin: Vec3,
    voxel_size: f64,
) -> Result<PartGrid, VoxelError> {
    let r = masks.len();
    let mut grid = VoxelGrid::new(r, origin, voxel_size)?;
    for (z, m) in masks.iter().enumerate() {
        if m.resolution != r {
            return Err(VoxelError::InvalidInput(format!(
                "slice {z} has resolution {} but {r} slices were given",
                m.resolution
            )));
        }
        let rr = r * r;
        for i in m.bits.iter_ones() {
            grid.occupancy.set(z * rr + i, true);
        }
    }
    Ok(PartGrid { part_id, grid })
}

// Outward-facing quads per direction as lattice corner offsets:
// -x, +x, -y, +y, -z, +z.
const FACE_QUADS: [[[usize; 3]; 4]; 6] = [
    [[0, 0, 0], [0, 0, 1], [0, 1, 1], [0, 1, 0]],
    [[1, 0, 0], [1, 1, 0], [1, 1, 1], [1, 0, 1]],
    [[0, 0, 0], [1, 0, 0], [1, 0, 1], [0, 0, 1]],
    [[0, 1, 0], [0, 1, 1], [1, 1, 1], [1, 1, 0]],
    [[0, 0, 0], [0, 1, 0], [1, 1, 0], [1, 0, 0]],
    [[0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1]],
];

/// Number of voxel faces whose 6-neighbor is empty or outside the grid.
pub fn exposed_face_count(grid: &VoxelGrid) -> usize {
    let r = grid.resolution;
    grid.iter_occupied()
        .map(|c| {
            neighbors6(c, r)
                .iter()
                .filter(|n| n.is_none_or(|n| !grid.get(n[0], n[1], n[2])))
                .count()
        })
        .sum()
}

/// Surface of the voxel solid: two outward-facing triangles per exposed
/// voxel face, with shared lattice corners, in world coordinates.
pub fn extract_boundary_mesh(part: &PartGrid) -> Result<TriangleMesh, VoxelError> {
    let grid = &part.grid;
    if grid.is_empty() {
        return Err(VoxelError::InvalidInput(format!(
            "part {} has no occupied voxels",
            part.part_id
        )));
    }
    let r = grid.resolution;
    let mut corner_ids: HashMap<[usize; 3], u32> = HashMap::new();
    let mut mesh = TriangleMesh::default();
    let mut corner = |c: [usize; 3], mesh: &mut TriangleMesh| -> u32 {
        *corner_ids.entry(c).or_insert_with(|| {
            mesh.vertices.push([
                grid.origin[0] + c[0] as f64 * grid.voxel_size,
                grid.origin[1] + c[1] as f64 * grid.voxel_size,
                grid.origin[2] + c[2] as f64 * grid.voxel_size,
            ]);
            (mesh.vertices.len() - 1) as u32
        })
    };
    for c in grid.iter_occupied() {
        for (dir, n) in neighbors6(c, r).iter().enumerate() {
            if n.is_some_and(|n| grid.get(n[0], n[1], n[2])) {
                continue;
            }
            let q = FACE_QUADS[dir].map(|o| corner([c[0] + o[0], c[1] + o[1], c[2] + o[2]], &mut mesh));
            mesh.faces.push([q[0], q[1], q[2]]);
            mesh.faces.push([q[0], q[2], q[3]]);
        }
    }
    mesh.face_labels = vec![Some(part.part_id); mesh.faces.len()];
    Ok(mesh)
}

/// Human-readable occupancy summary used by the examples.
pub fn describe(grid: &VoxelGrid) -> String {
    let mut s = String::new();
    let _ = write!(
        s,
        "R={} occupied={} voxel_size={}",
        grid.resolution,
        grid.count(),
        grid.voxel_size
    );
    if let Some((lo, hi)) = grid.occupied_bounds() {
        let _ = write!(s, " bounds={lo:?}..={hi:?}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::box_mesh;

    fn quad_z(z: f64) -> TriangleMesh {
        TriangleMesh::new(
            vec![[0.0, 0.0, z], [1.0, 0.0, z], [1.0, 1.0, z], [0.0, 1.0, z]],
            vec![[0, 1, 2], [0, 2, 3]],
        )
    }

    #[test]
    fn planar_quad_occupies_single_layer() {
        let g = voxelize_surface(&quad_z(0.5), 4).unwrap();
        let layers: Vec<usize> = (0..4)
            .filter(|&z| (0..4).any(|y| (0..4).any(|x| g.get(x, y, z))))
            .collect();
        assert_eq!(layers.len(), 1);
        let z = layers[0];
        for y in 1..3 {
            for x in 1..3 {
                assert!(g.get(x, y, z));
            }
        }
        assert_eq!(g.count(), 4);
    }

    #[test]
    fn empty_mesh_rejected() {
        assert!(matches!(
            voxelize_surface(&TriangleMesh::default(), 8),
            Err(VoxelError::InvalidInput(_))
        ));
    }

    #[test]
    fn degenerate_bounds_rejected() {
        let m = TriangleMesh::new(vec![[1.0; 3]; 3], vec![[0, 1, 2]]);
        assert!(matches!(voxelize_surface(&m, 8), Err(VoxelError::InvalidInput(_))));
    }

    #[test]
    fn voxel_size_and_padding() {
        let g = voxelize_surface(&box_mesh([0.0; 3], [2.0, 1.0, 1.0]), 10).unwrap();
        assert_eq!(g.voxel_size, 0.25);
        let (lo, hi) = g.occupied_bounds().unwrap();
        assert_eq!(lo, [1, 1, 1]);
        assert_eq!(hi[0], 8);
    }

    #[test]
    fn fill_all_empty_stays_empty() {
        let g = VoxelGrid::unit(6).unwrap();
        assert!(fill_solid(&g).is_empty());
    }

    #[test]
    fn fill_is_idempotent_on_solid() {
        let g = voxelize_surface(&box_mesh([0.0; 3], [1.0; 3]), 12).unwrap();
        let solid = fill_solid(&g);
        assert!(g.occupancy().is_subset(solid.occupancy()));
        assert_eq!(fill_solid(&solid), solid);
        assert_eq!(solid.count(), 10 * 10 * 10);
    }

    #[test]
    fn single_voxel_boundary_has_12_triangles() {
        let mut g = VoxelGrid::unit(4).unwrap();
        g.set(1, 1, 1, true);
        let m = extract_boundary_mesh(&PartGrid { part_id: 0, grid: g }).unwrap();
        assert_eq!(m.faces.len(), 12);
        assert_eq!(m.vertices.len(), 8);
    }

    #[test]
    fn bar_boundary_has_20_triangles() {
        let mut g = VoxelGrid::unit(4).unwrap();
        g.set(1, 1, 1, true);
        g.set(2, 1, 1, true);
        let m = extract_boundary_mesh(&PartGrid { part_id: 0, grid: g }).unwrap();
        assert_eq!(m.faces.len(), 20);
    }

    #[test]
    fn empty_part_boundary_rejected() {
        let g = VoxelGrid::unit(4).unwrap();
        assert!(extract_boundary_mesh(&PartGrid { part_id: 7, grid: g }).is_err());
    }

    #[test]
    fn single_voxel_slice() {
        let mut g = VoxelGrid::unit(4).unwrap();
        g.set(1, 2, 3, true);
        let masks = slice_z(&PartGrid { part_id: 0, grid: g });
        assert_eq!(masks.len(), 4);
        for (z, m) in masks.iter().enumerate() {
            assert_eq!(m.bits().count_ones(), usize::from(z == 3));
        }
        assert!(masks[3].get(1, 2));
    }

    #[test]
    fn empty_part_slices_are_zero() {
        let g = VoxelGrid::unit(5).unwrap();
        let masks = slice_z(&PartGrid { part_id: 0, grid: g });
        assert_eq!(masks.len(), 5);
        assert!(masks.iter().all(|m| m.bits().none()));
    }

    #[test]
    fn split_requires_labels() {
        let m = box_mesh([0.0; 3], [1.0; 3]);
        let g = voxelize_surface(&m, 8).unwrap();
        assert!(matches!(split_parts(&g, &m), Err(VoxelError::InvalidInput(_))));
    }

    #[test]
    fn split_single_label_is_identity() {
        let m = box_mesh([0.0; 3], [1.0; 3]).with_labels(vec![4; 12]);
        let g = fill_solid(&voxelize_surface(&m, 10).unwrap());
        let parts = split_parts(&g, &m).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].part_id, 4);
        assert_eq!(parts[0].grid, g);
    }

    #[test]
    fn split_tie_goes_to_lowest_label() {
        // Two triangles mirrored about x = 0.5; the voxel centered on that
        // plane is equidistant to both.
        let mesh = TriangleMesh::new(
            vec![
                [0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, 0.0, 1.0],
                [1.0, 0.0, 0.0],
                [1.0, 0.0, 1.0],
                [1.0, 1.0, 0.0],
            ],
            vec![[0, 1, 2], [3, 4, 5]],
        )
        .with_labels(vec![5, 2]);
        let mut g = VoxelGrid::new(3, [0.0; 3], 1.0 / 3.0).unwrap();
        g.set(1, 0, 0, true);
        let parts = split_parts(&g, &mesh).unwrap();
        assert_eq!(parts.iter().map(|p| p.part_id).collect::<Vec<_>>(), vec![2, 5]);
        assert_eq!(parts[0].grid.count(), 1);
        assert_eq!(parts[1].grid.count(), 0);
    }

    #[test]
    fn dump_round_trip_and_errors() {
        let mut g = VoxelGrid::unit(3).unwrap();
        g.set(0, 1, 2, true);
        g.set(2, 2, 0, true);
        let text = g.to_dump();
        assert_eq!(text.lines().count(), 5);
        assert_eq!(VoxelGrid::from_dump(&text).unwrap(), g);
        assert!(VoxelGrid::from_dump("000\n\n000\n").is_err());
        assert!(VoxelGrid::from_dump("0000\n0000\n").is_err());
        assert!(VoxelGrid::from_dump("0000\n\n00x0\n").is_err());
    }
}
