use std::collections::HashMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use simasset::fixtures::{self, ShapeKind};
use simasset::geom::Vec3;
use simasset::mesh::{box_mesh, TriangleMesh};
use simasset::voxel::{self, PartGrid, VoxelGrid};

const EPS: f64 = 1e-6;

/// Sutherland-Hodgman clip of a convex polygon against `n·p <= d`.
fn clip(poly: Vec<Vec3>, axis: usize, bound: f64, keep_below: bool) -> Vec<Vec3> {
    let inside = |p: &Vec3| if keep_below { p[axis] <= bound } else { p[axis] >= bound };
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        match (inside(&a), inside(&b)) {
            (true, true) => out.push(b),
            (true, false) | (false, true) => {
                let t = (bound - a[axis]) / (b[axis] - a[axis]);
                let mut p = [0.0; 3];
                for k in 0..3 {
                    p[k] = a[k] + t * (b[k] - a[k]);
                }
                p[axis] = bound;
                out.push(p);
                if inside(&b) {
                    out.push(b);
                }
            }
            (false, false) => {}
        }
    }
    out
}

/// Whether the triangle meets the closed box `[lo, hi]`, by clipping.
fn oracle_touches(tri: [Vec3; 3], lo: Vec3, hi: Vec3) -> bool {
    let mut poly = tri.to_vec();
    for k in 0..3 {
        poly = clip(poly, k, lo[k], false);
        poly = clip(poly, k, hi[k], true);
        if poly.is_empty() {
            return false;
        }
    }
    true
}

fn brute_voxelize(mesh: &TriangleMesh, r: usize) -> VoxelGrid {
    let (lo, hi) = mesh.bounds().unwrap();
    let longest = (0..3).map(|k| hi[k] - lo[k]).fold(0.0, f64::max);
    let vs = longest / (r - 2) as f64;
    let origin = [lo[0] - vs, lo[1] - vs, lo[2] - vs];
    let mut g = VoxelGrid::new(r, origin, vs).unwrap();
    for z in 1..r - 1 {
        for y in 1..r - 1 {
            for x in 1..r - 1 {
                let blo = [x as f64 - EPS, y as f64 - EPS, z as f64 - EPS];
                let bhi = [x as f64 + 1.0 + EPS, y as f64 + 1.0 + EPS, z as f64 + 1.0 + EPS];
                let hit = (0..mesh.faces.len()).any(|f| {
                    let t = mesh.triangle(f).map(|p| [(p[0] - origin[0]) / vs, (p[1] - origin[1]) / vs, (p[2] - origin[2]) / vs]);
                    oracle_touches(t, blo, bhi)
                });
                g.set(x, y, z, hit);
            }
        }
    }
    g
}

#[test]
fn unit_cube_matches_brute_force_triangle_box_oracle() {
    let mesh = box_mesh([0.0; 3], [1.0; 3]);
    let fast = voxel::voxelize_surface(&mesh, 16).unwrap();
    let slow = brute_voxelize(&mesh, 16);
    assert_eq!(fast, slow);
    // Faces sit on lattice planes 1 and 15; both neighbors of each plane are
    // touched except the padding shell, leaving a two-voxel-thick shell.
    let mut expect = 0;
    for z in 1..15 {
        for y in 1..15 {
            for x in 1..15 {
                let edge = |c: usize| c <= 1 || c >= 14;
                if edge(x) || edge(y) || edge(z) {
                    expect += 1;
                }
            }
        }
    }
    assert_eq!(fast.count(), expect);
}

#[test]
fn tilted_meshes_match_brute_force_oracle() {
    for mesh in [fixtures::sphere_mesh([0.1, -0.2, 0.3], 0.8, 5, 7), fixtures::tetrahedron_mesh()] {
        for r in [5, 9, 12] {
            assert_eq!(voxel::voxelize_surface(&mesh, r).unwrap(), brute_voxelize(&mesh, r));
        }
    }
}

#[test]
fn voxelization_ignores_vertex_order() {
    let mesh = fixtures::sphere_mesh([0.0; 3], 1.0, 6, 9);
    let rotated = TriangleMesh::new(mesh.vertices.clone(), mesh.faces.iter().map(|&[a, b, c]| [b, c, a]).collect());
    let flipped = TriangleMesh::new(mesh.vertices.clone(), mesh.faces.iter().rev().map(|&[a, b, c]| [a, c, b]).collect());
    let g = voxel::voxelize_surface(&mesh, 20).unwrap();
    assert_eq!(voxel::voxelize_surface(&rotated, 20).unwrap(), g);
    assert_eq!(voxel::voxelize_surface(&flipped, 20).unwrap(), g);
}

#[test]
fn padding_shell_stays_empty() {
    let g = voxel::voxelize_surface(&fixtures::sphere_mesh([0.0; 3], 1.0, 8, 12), 24).unwrap();
    for [x, y, z] in g.iter_occupied() {
        assert!([x, y, z].iter().all(|c| (1..=22).contains(c)));
    }
}

#[test]
fn hollow_shell_interior_is_filled() {
    let shell = fixtures::box_grid(16, [5, 5, 5], [11, 11, 11]);
    let mut hollow = shell.clone();
    fixtures::fill_box(&mut hollow, [6, 6, 6], [10, 10, 10], false);
    assert_eq!(hollow.count(), 6 * 6 * 6 - 4 * 4 * 4);
    let filled = voxel::fill_solid(&hollow);
    // Oracle: a 6³ shell encloses exactly the 4³ block at [6, 10).
    let mut added = Vec::new();
    for [x, y, z] in filled.iter_occupied() {
        if !hollow.get(x, y, z) {
            added.push([x, y, z]);
        }
    }
    assert_eq!(added.len(), 64);
    assert!(added.iter().all(|c| c.iter().all(|&v| (6..10).contains(&v))));
    assert_eq!(filled, shell);
}

#[test]
fn fill_solid_trivial_cases() {
    let empty = VoxelGrid::unit(8).unwrap();
    assert!(voxel::fill_solid(&empty).is_empty());
    let solid = fixtures::box_grid(8, [2, 2, 2], [6, 6, 6]);
    assert_eq!(voxel::fill_solid(&solid), solid);
}

fn cube_at(min: Vec3, label: u32) -> TriangleMesh {
    let m = box_mesh(min, [min[0] + 1.0, min[1] + 1.0, min[2] + 1.0]);
    let n = m.faces.len();
    m.with_labels(vec![label; n])
}

#[test]
fn two_cube_split_matches_box_membership() {
    let mesh = TriangleMesh::merge(&[cube_at([0.0; 3], 0), cube_at([2.0, 0.0, 0.0], 1)]);
    let solid = voxel::fill_solid(&voxel::voxelize_surface(&mesh, 16).unwrap());
    let parts = voxel::split_parts(&solid, &mesh).unwrap();
    assert_eq!(parts.iter().map(|p| p.part_id).collect::<Vec<_>>(), vec![0, 1]);
    let vs = solid.voxel_size;
    for (p, x0) in parts.iter().zip([0.0, 2.0]) {
        let mut expect = solid.cleared();
        for [x, y, z] in solid.iter_occupied() {
            let lo = [solid.origin[0] + x as f64 * vs, solid.origin[1] + y as f64 * vs, solid.origin[2] + z as f64 * vs];
            let overlaps = lo[0] <= x0 + 1.0 + EPS && lo[0] + vs >= x0 - EPS;
            if overlaps {
                expect.set(x, y, z, true);
            }
        }
        assert_eq!(p.grid, expect, "part {}", p.part_id);
        assert!(!p.grid.is_empty());
    }
}

#[test]
fn split_ties_go_to_lowest_label() {
    // Two coincident triangles with labels 5 and 2: every voxel is equidistant.
    let tri = |label| TriangleMesh::new(vec![[0.0; 3], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], vec![[0, 1, 2]]).with_labels(vec![label]);
    let mesh = TriangleMesh::merge(&[tri(5), tri(2)]);
    let g = voxel::voxelize_surface(&mesh, 6).unwrap();
    let parts = voxel::split_parts(&g, &mesh).unwrap();
    assert_eq!(parts.len(), 2);
    assert_eq!(parts[0].part_id, 2);
    assert_eq!(parts[0].grid, g);
    assert!(parts[1].grid.is_empty());
}

#[test]
fn split_requires_labels() {
    let mesh = box_mesh([0.0; 3], [1.0; 3]);
    let g = voxel::voxelize_surface(&mesh, 6).unwrap();
    assert!(voxel::split_parts(&g, &mesh).is_err());
}

fn neighbor_scan_faces(g: &VoxelGrid) -> usize {
    let r = g.resolution() as i64;
    let occ = |x: i64, y: i64, z: i64| x >= 0 && y >= 0 && z >= 0 && x < r && y < r && z < r && g.get(x as usize, y as usize, z as usize);
    let mut n = 0;
    for [x, y, z] in g.iter_occupied() {
        let (x, y, z) = (x as i64, y as i64, z as i64);
        for (dx, dy, dz) in [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)] {
            if !occ(x + dx, y + dy, z + dz) {
                n += 1;
            }
        }
    }
    n
}

fn edge_counts(m: &TriangleMesh) -> HashMap<(u32, u32), usize> {
    let mut e = HashMap::new();
    for f in &m.faces {
        for k in 0..3 {
            *e.entry((f[k], f[(k + 1) % 3])).or_insert(0) += 1;
        }
    }
    e
}

fn boundary(g: &VoxelGrid) -> TriangleMesh {
    voxel::extract_boundary_mesh(&PartGrid { part_id: 0, grid: g.clone() }).unwrap()
}

#[test]
fn boundary_mesh_counts_match_neighbor_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..24 {
        let g = fixtures::random_grid(ShapeKind::ALL[i % 4], 12, &mut rng);
        if g.is_empty() {
            continue;
        }
        let faces = neighbor_scan_faces(&g);
        assert_eq!(voxel::exposed_face_count(&g), faces);
        let m = boundary(&g);
        assert_eq!(m.faces.len(), 2 * faces);
        // Every directed edge is matched by its reverse: the surface is
        // closed and consistently oriented.
        let e = edge_counts(&m);
        for (&(a, b), &n) in &e {
            assert_eq!(e.get(&(b, a)), Some(&n));
        }
    }
}

#[test]
fn boundary_mesh_small_cases() {
    let mut one = VoxelGrid::unit(3).unwrap();
    one.set(1, 1, 1, true);
    assert_eq!(boundary(&one).faces.len(), 12);
    let bar = fixtures::box_grid(4, [1, 1, 1], [3, 2, 2]);
    assert_eq!(boundary(&bar).faces.len(), 20);
    assert!(voxel::extract_boundary_mesh(&PartGrid { part_id: 0, grid: VoxelGrid::unit(3).unwrap() }).is_err());
}

#[test]
fn convex_solids_give_two_manifold_boundaries() {
    let shapes = [
        fixtures::box_grid(10, [1, 2, 3], [8, 7, 9]),
        fixtures::ellipsoid_grid(16, [8.0, 8.0, 8.0], [6.0, 4.5, 3.0]),
        fixtures::ball_grid(12, [6.0; 3], 5.0),
    ];
    for g in shapes {
        let e = edge_counts(&boundary(&g));
        for (&(a, b), &n) in &e {
            assert_eq!(n, 1);
            assert_eq!(e.get(&(b, a)), Some(&1));
        }
    }
}

#[test]
fn edge_diagonal_solid_is_not_two_manifold() {
    // 6-connected through the upper layer, but the lower layer meets only
    // along the edge x = y = 1, which then borders four faces.
    let mut g = VoxelGrid::unit(3).unwrap();
    for c in [[0, 0, 0], [1, 1, 0], [0, 0, 1], [1, 0, 1], [1, 1, 1]] {
        g.set(c[0], c[1], c[2], true);
    }
    let m = boundary(&g);
    let mut undirected: HashMap<(u32, u32), usize> = HashMap::new();
    for (&(a, b), &n) in &edge_counts(&m) {
        *undirected.entry((a.min(b), a.max(b))).or_insert(0) += n;
    }
    assert!(undirected.values().any(|&n| n == 4));
}

#[test]
fn slice_examples() {
    let mut g = VoxelGrid::unit(4).unwrap();
    g.set(1, 2, 3, true);
    let s = voxel::slice_z(&PartGrid { part_id: 0, grid: g });
    assert_eq!(s.len(), 4);
    assert!(s[..3].iter().all(|m| m.bits().none()));
    assert_eq!(s[3].bits().iter_ones().collect::<Vec<_>>(), vec![1 + 2 * 4]);
    assert!(s[3].get(1, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn slices_reassemble(bits in proptest::collection::vec(any::<bool>(), 512)) {
        let mut g = VoxelGrid::unit(8).unwrap();
        for (i, b) in bits.iter().enumerate() {
            let [x, y, z] = g.coords(i);
            g.set(x, y, z, *b);
        }
        let part = PartGrid { part_id: 4, grid: g };
        let masks = voxel::slice_z(&part);
        let back = voxel::stack_slices(4, &masks, part.grid.origin, part.grid.voxel_size).unwrap();
        prop_assert_eq!(back, part);
    }

    #[test]
    fn fill_is_monotone_and_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = fixtures::random_grid(ShapeKind::Blob, 10, &mut rng);
        let f = voxel::fill_solid(&g);
        prop_assert!(g.occupancy().is_subset(f.occupancy()));
        prop_assert_eq!(voxel::fill_solid(&f), f);
    }

    #[test]
    fn split_is_a_disjoint_cover(seed in 0u64..64) {
        let mesh = fixtures::labeled_box_pair();
        let r = 8 + (seed % 8) as usize;
        let g = voxel::fill_solid(&voxel::voxelize_surface(&mesh, r).unwrap());
        let parts = voxel::split_parts(&g, &mesh).unwrap();
        let mut total = 0;
        for (i, a) in parts.iter().enumerate() {
            total += a.grid.count();
            prop_assert!(a.grid.occupancy().is_subset(g.occupancy()));
            prop_assert!(a.grid.same_lattice(&g));
            for b in &parts[i + 1..] {
                prop_assert!(a.grid.occupancy().and(b.grid.occupancy()).none());
            }
        }
        prop_assert_eq!(total, g.count());
    }
}

#[test]
fn grid_dump_round_trip() {
    let g = fixtures::ellipsoid_grid(6, [3.0; 3], [2.5, 2.0, 1.5]);
    let text = g.to_dump();
    assert_eq!(text.lines().filter(|l| !l.is_empty()).count(), 6);
    assert_eq!(VoxelGrid::from_dump(&text).unwrap(), g);
}
