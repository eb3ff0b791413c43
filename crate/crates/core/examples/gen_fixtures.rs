//! Regenerates the shipped fixture corpus.
//!
//! cargo run --example gen_fixtures [-- <out_dir>]

use std::fs;
use std::path::{Path, PathBuf};

use simasset::asset::serialize_asset;
use simasset::bench::serialize_judges;
use simasset::codec::{encode_part, serialize_part};
use simasset::fixtures;
use simasset::mesh::write_obj;
use simasset::PartGrid;

fn write(path: PathBuf, text: &str) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    fs::write(&path, text).unwrap();
    println!("wrote {}", path.display());
}

fn code_line(grid: simasset::VoxelGrid) -> String {
    serialize_part(&encode_part(&PartGrid { part_id: 0, grid })) + "\n"
}

fn main() {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"));

    for (name, a) in fixtures::asset_corpus() {
        write(out.join(format!("assets/{name}.asset")), &serialize_asset(&a).unwrap());
    }

    let mut manifest = String::from("file,field\n");
    for (name, text, field) in fixtures::invalid_asset_texts() {
        write(out.join(format!("invalid_assets/{name}.invalid")), &text);
        manifest.push_str(&format!("{name}.invalid,{field}\n"));
    }
    write(out.join("invalid_assets/expected.csv"), &manifest);

    let r = fixtures::CORPUS_RESOLUTION;
    for (name, g) in fixtures::prism_family(r) {
        write(out.join(format!("codes/{name}.code")), &code_line(g));
    }
    write(out.join("codes/cube16_in_64.code"), &code_line(fixtures::cube_grid(r, 24, 16)));
    write(
        out.join("codes/ball.code"),
        &code_line(fixtures::ball_grid(r, [32.0, 30.0, 34.0], 20.0)),
    );
    let cabinet = fixtures::cabinet();
    let multi: String = cabinet
        .sorted_parts()
        .iter()
        .map(|p| serialize_part(&p.geometry) + "\n")
        .collect();
    write(out.join("codes/cabinet_parts.code"), &multi);

    write(
        out.join("grids/ellipsoid_r8.grid"),
        &fixtures::ellipsoid_grid(8, [4.0, 4.0, 4.0], [3.5, 2.5, 2.0]).to_dump(),
    );
    write(out.join("grids/box_r16.grid"), &fixtures::box_grid(16, [3, 4, 5], [12, 9, 15]).to_dump());

    for (name, m) in fixtures::mesh_corpus() {
        write(out.join(format!("meshes/{name}.obj")), &write_obj(&m));
    }

    for (name, responses) in fixtures::judge_corpus() {
        write(out.join(format!("judges/{name}.judge")), &serialize_judges(&responses));
    }
    write(out.join("bench/auto_scores.csv"), &fixtures::auto_table());
    write(out.join("bench/human_scores.csv"), &fixtures::human_table());
}
