//! Scale, kinematic and affordance-heatmap metrics between two assets.
//!
//! cargo run --example physical_metrics

use simasset::asset::JointKind;
use simasset::fixtures;
use simasset::metrics;

fn main() -> Result<(), metrics::MetricError> {
    let gt = fixtures::cabinet();
    let mut pred = gt.clone();
    pred.scale_m = [0.5, 0.6, 1.0];
    let door = pred.parts.iter_mut().find(|p| p.id == 1).unwrap();
    door.joint.kind = JointKind::Prismatic;
    door.joint.axis = [0.0, 0.0, -1.0];
    door.affordance = 0.4;

    print!("{}", metrics::eval_physical(&pred, &gt)?.report());
    println!("scale plausibility (1.0 m vs 0.9 m): {:.2}", metrics::scale_plausibility(1.0, 0.9)?);

    let method = [71.0, 64.0, 80.0, 55.0, 60.0];
    let human = [3.9, 3.1, 4.4, 2.2, 3.0];
    let (rho, r) = simasset::bench::human_alignment(&method, &human)?;
    println!("alignment: rho {rho:.3}, r {r:.3}");
    Ok(())
}
