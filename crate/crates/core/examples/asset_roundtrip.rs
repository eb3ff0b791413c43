//! Build an articulated asset, write its canonical text and parse it back.
//!
//! cargo run --example asset_roundtrip

use simasset::asset::{self, parse_asset, serialize_asset};
use simasset::codec::token_count;
use simasset::fixtures;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cabinet = fixtures::cabinet();
    let text = serialize_asset(&cabinet)?;
    let back = parse_asset(&text)?;
    assert_eq!(back, cabinet);
    assert_eq!(serialize_asset(&back)?, text);

    for p in cabinet.sorted_parts() {
        println!(
            "part {} {:<6} parent={:?} joint={} affordance={}",
            p.id,
            p.name,
            p.parent,
            p.joint.kind.name(),
            p.affordance
        );
    }
    println!("affordance ranking: {:?}", asset::affordance_ranking(&cabinet));
    println!("{} bytes, {} tokens", text.len(), token_count(&text));

    let bad = text.replacen("poisson_ratio 0.3", "poisson_ratio 0.7", 1);
    match parse_asset(&bad) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
