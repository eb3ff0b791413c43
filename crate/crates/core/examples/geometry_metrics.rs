//! Chamfer distance and F-score between sampled meshes.
//!
//! cargo run --example geometry_metrics

use simasset::fixtures::sphere_mesh;
use simasset::mesh::box_mesh;
use simasset::metrics::{self, DEFAULT_FSCORE_TAU};

fn main() -> Result<(), metrics::MetricError> {
    let gt = sphere_mesh([0.0; 3], 1.0, 16, 32);
    let candidates = [
        ("same sphere", sphere_mesh([0.0; 3], 1.0, 16, 32)),
        ("coarse sphere", sphere_mesh([0.0; 3], 1.0, 4, 6)),
        ("cube", box_mesh([-1.0; 3], [1.0; 3])),
        ("slab", box_mesh([-1.0, -1.0, -0.1], [1.0, 1.0, 0.1])),
    ];
    for (name, pred) in &candidates {
        let m = metrics::eval_geometry(pred, &gt, 4000, 7, DEFAULT_FSCORE_TAU)?;
        println!("{name:<14} CD x1e3 {:>8.3}  F x1e2 {:>6.2}", m.cd_times_1e3, m.fscore_times_1e2);
    }

    // Raw clouds, without the unit-cube normalization.
    let a = metrics::sample_points(&gt, 2000, 1)?;
    let b = metrics::sample_points(&gt, 2000, 2)?;
    println!("two samplings of one sphere: CD {:.6}", metrics::chamfer_distance(&a, &b)?);
    Ok(())
}
