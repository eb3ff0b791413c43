//! Template run-length coding of a part volume against the two baselines.
//!
//! cargo run --example template_rle

use simasset::codec::{self, CodeStats};
use simasset::fixtures;
use simasset::PartGrid;

fn main() -> Result<(), simasset::CodecError> {
    let r = 64;
    let mut shapes = fixtures::prism_family(r);
    shapes.push(("cube16".into(), fixtures::cube_grid(r, 24, 16)));
    shapes.push(("ball".into(), fixtures::ball_grid(r, [32.0; 3], 20.0)));

    println!("{:<16} {:>8} {:>10} {:>12} {:>5} {:>5}", "shape", "template", "plain_rle", "voxel_index", "T", "D");
    for (name, grid) in shapes {
        let part = PartGrid { part_id: 0, grid };
        let code = codec::encode_part(&part);
        let text = codec::serialize_part(&code);

        let back = codec::decode_part(&codec::parse_part(&text)?, 0)?;
        assert_eq!(back.grid.occupancy(), part.grid.occupancy());

        let s = CodeStats::for_code(&code)?;
        println!(
            "{name:<16} {:>8} {:>10} {:>12} {:>5} {:>5}",
            codec::token_count(&text),
            s.plain_rle_tokens,
            s.voxel_index_tokens,
            s.template_count,
            s.delta_count
        );
    }

    let tiny = codec::parse_part("P4|T 0 4 12|D0 16")?;
    println!("\n{tiny} decodes to {} layers", tiny.decode_layers()?.len());
    Ok(())
}
