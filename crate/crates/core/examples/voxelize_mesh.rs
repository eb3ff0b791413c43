//! Voxelize a labeled mesh, fill it and split it into parts.
//!
//! cargo run --example voxelize_mesh [-- <mesh.obj> [resolution]]

use simasset::fixtures;
use simasset::mesh::parse_obj;
use simasset::voxel::{self, describe};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let mesh = match args.next() {
        Some(path) => parse_obj(&std::fs::read_to_string(path)?)?,
        None => fixtures::labeled_box_pair(),
    };
    let r: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(32);

    let surface = voxel::voxelize_surface(&mesh, r)?;
    let solid = voxel::fill_solid(&surface);
    println!("surface {}", describe(&surface));
    println!("solid   {}", describe(&solid));
    println!("exposed faces: {}", voxel::exposed_face_count(&solid));

    for part in voxel::split_parts(&solid, &mesh)? {
        let slices = voxel::slice_z(&part);
        let busy = slices.iter().filter(|s| !s.bits().none()).count();
        println!("part {}: {} voxels on {busy} layers", part.part_id, part.grid.count());
    }
    Ok(())
}
