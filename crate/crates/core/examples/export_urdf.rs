//! Export an asset to URDF with per-link OBJ meshes and validate it.
//!
//! cargo run --example export_urdf [-- <asset file> <out dir>]

use std::path::PathBuf;

use simasset::asset::parse_asset;
use simasset::fixtures;
use simasset::urdf::{export_urdf, validate_urdf};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let asset = match args.next() {
        Some(p) => parse_asset(&std::fs::read_to_string(p)?)?,
        None => fixtures::drawer_chest(),
    };
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("simasset_urdf"));

    let bundle = export_urdf(&asset, &out)?;
    for (id, inertial) in &bundle.inertials {
        println!(
            "part_{id}: {} voxels, mass {:.4} kg, com {:?}",
            inertial.voxel_count, inertial.mass, inertial.com
        );
    }
    println!("total mass {:.4} kg", bundle.total_mass());
    let violations = validate_urdf(&bundle.document, Some(&out));
    println!("wrote {} ({} violations)", out.display(), violations.len());
    for v in violations {
        println!("  {v}");
    }
    Ok(())
}
