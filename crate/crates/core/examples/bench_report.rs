//! Aggregate judge responses and measure agreement with human scores.
//!
//! cargo run --example bench_report

use simasset::bench::{self, DEFAULT_KIN_WEIGHTS};
use simasset::fixtures;

fn main() -> Result<(), bench::BenchError> {
    let assets = fixtures::asset_corpus();
    let responses: Vec<_> = fixtures::judge_corpus().into_iter().flat_map(|(_, r)| r).collect();

    let report = bench::aggregate_report(&responses, &assets, DEFAULT_KIN_WEIGHTS)?;
    print!("{}", report.table());
    println!();
    print!("{}", report.summary_csv("ours"));
    println!();

    let auto = bench::parse_score_table(&fixtures::auto_table())?;
    let human = bench::parse_score_table(&fixtures::human_table())?;
    print!("{}", bench::alignment_csv(&bench::align_tables(&auto, &human)));
    Ok(())
}
