//! Conventional evaluation metrics and the numeric scoring primitives of
//! the benchmark.
//!
//! Geometry: Chamfer distance (squared-distance variant) and F-score on
//! point clouds sampled from meshes normalized to the unit cube. Reported
//! units follow the usual tables: CD ×10³, F-score ×10².

mod correlation;
mod kdtree;

use std::fmt::Write as _;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::asset::{JointSpec, PhysicalAsset};
use crate::geom::{self, Vec3};
use crate::mesh::TriangleMesh;
use crate::urdf;

pub use correlation::{average_ranks, pearson_r, spearman_rho};
pub use kdtree::KdTree;

pub const DEFAULT_FSCORE_TAU: f64 = 0.05;
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 0;
pub const PSNR_PEAK: f64 = 255.0;

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("undefined: {0}")]
    Undefined(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud(pub Vec<Vec3>);

impl PointCloud {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check(&self, what: &str) -> Result<(), MetricError> {
        if self.0.is_empty() {
            return Err(MetricError::InvalidInput(format!("{what} point cloud is empty")));
        }
        if self.0.iter().flatten().any(|c| !c.is_finite()) {
            return Err(MetricError::InvalidInput(format!("{what} point cloud has non-finite points")));
        }
        Ok(())
    }
}

/// Area-weighted uniform surface samples from a seeded ChaCha8 stream.
pub fn sample_points(mesh: &TriangleMesh, n: usize, seed: u64) -> Result<PointCloud, MetricError> {
    if mesh.is_empty() {
        return Err(MetricError::InvalidInput("mesh has no faces".into()));
    }
    if n == 0 {
        return Err(MetricError::InvalidInput("sample count must be at least 1".into()));
    }
    mesh.check().map_err(|e| MetricError::InvalidInput(e.to_string()))?;
    let mut cumulative = Vec::with_capacity(mesh.faces.len());
    let mut total = 0.0;
    for f in 0..mesh.faces.len() {
        let [a, b, c] = mesh.triangle(f);
        total += geom::triangle_area(a, b, c);
        cumulative.push(total);
    }
    if !(total > 0.0) {
        return Err(MetricError::InvalidInput("mesh has zero surface area".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let last = mesh.faces.len() - 1;
    let points = (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * total;
            let f = cumulative.partition_point(|&c| c <= u).min(last);
            let [a, b, c] = mesh.triangle(f);
            let s = rng.random::<f64>().sqrt();
            let t = rng.random::<f64>();
            let (wa, wb, wc) = (1.0 - s, s * (1.0 - t), s * t);
            [
                wa * a[0] + wb * b[0] + wc * c[0],
                wa * a[1] + wb * b[1] + wc * c[1],
                wa * a[2] + wb * b[2] + wc * c[2],
            ]
        })
        .collect();
    Ok(PointCloud(points))
}

/// Squared nearest-neighbor distance from every point of `from` into `to`.
pub fn nearest_dist2(from: &PointCloud, to: &PointCloud) -> Vec<f64> {
    let tree = KdTree::build(&to.0);
    from.0.iter().map(|&p| tree.nearest_dist2(p)).collect()
}

/// Mean squared nearest-neighbor distance, summed over both directions.
pub fn chamfer_distance(a: &PointCloud, b: &PointCloud) -> Result<f64, MetricError> {
    a.check("first")?;
    b.check("second")?;
    let ab = nearest_dist2(a, b);
    let ba = nearest_dist2(b, a);
    Ok(ab.iter().sum::<f64>() / ab.len() as f64 + ba.iter().sum::<f64>() / ba.len() as f64)
}

/// F-score at threshold `tau`, in percent.
pub fn fscore(a: &PointCloud, b: &PointCloud, tau: f64) -> Result<f64, MetricError> {
    a.check("first")?;
    b.check("second")?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(MetricError::InvalidInput(format!("threshold {tau} must be positive")));
    }
    let within = |d2: &[f64]| d2.iter().filter(|&&d| d.sqrt() <= tau).count() as f64 / d2.len() as f64;
    let precision = within(&nearest_dist2(a, b));
    let recall = within(&nearest_dist2(b, a));
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(200.0 * precision * recall / (precision + recall))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self, MetricError> {
        if width == 0 || height == 0 {
            return Err(MetricError::InvalidInput("image dimensions must be at least 1".into()));
        }
        if pixels.len() != width * height {
            return Err(MetricError::InvalidInput(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }
}

/// Peak signal-to-noise ratio in dB with peak 255; `+inf` for identical images.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64, MetricError> {
    if a.width != b.width || a.height != b.height {
        return Err(MetricError::InvalidInput(format!(
            "image sizes differ ({}x{} vs {}x{})",
            a.width, a.height, b.width, b.height
        )));
    }
    let sse: f64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(&p, &q)| {
            let d = f64::from(p) - f64::from(q);
            d * d
        })
        .sum();
    let mse = sse / a.pixels.len() as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (PSNR_PEAK * PSNR_PEAK / mse).log10())
}

fn check_scale(v: &[f64], what: &str) -> Result<(), MetricError> {
    if v.iter().all(|x| x.is_finite() && *x > 0.0) {
        Ok(())
    } else {
        Err(MetricError::InvalidInput(format!("{what} scale {v:?} must be positive")))
    }
}

/// Mean squared per-axis difference between two scales (m²).
pub fn scale_mse(pred: Vec3, gt: Vec3) -> Result<f64, MetricError> {
    check_scale(&pred, "predicted")?;
    check_scale(&gt, "ground-truth")?;
    Ok((0..3).map(|k| (pred[k] - gt[k]).powi(2)).sum::<f64>() / 3.0)
}

/// Symmetric percentage error `200 |p - g| / (p + g)`, in [0, 200].
pub fn symmetric_percentage_error(p: f64, g: f64) -> Result<f64, MetricError> {
    check_scale(&[p, g], "dimension")?;
    Ok(200.0 * (p - g).abs() / (p + g))
}

/// Linear map of a symmetric percentage error in [0, 200] onto [100, 0].
pub fn plausibility_from_spe(spe: f64) -> Result<f64, MetricError> {
    if !(0.0..=200.0).contains(&spe) {
        return Err(MetricError::InvalidInput(format!("SPE {spe} outside [0, 200]")));
    }
    Ok(100.0 * (1.0 - spe / 200.0))
}

/// Plausibility of a predicted maximum dimension against a judged one.
pub fn scale_plausibility(pred_max_dim: f64, judged_max_dim: f64) -> Result<f64, MetricError> {
    plausibility_from_spe(symmetric_percentage_error(pred_max_dim, judged_max_dim)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicError {
    pub position_mse: f64,
    /// `min(|a - b|², |a + b|²)` of the two unit axes.
    pub direction_err: f64,
    pub type_err: f64,
    pub limit_mse: f64,
    /// Unweighted mean of the four components.
    pub composite: f64,
    /// Whether both joints carried limits.
    pub limits_compared: bool,
}

impl KinematicError {
    fn from_parts(position_mse: f64, direction_err: f64, type_err: f64, limit_mse: f64, limits_compared: bool) -> Self {
        Self {
            position_mse,
            direction_err,
            type_err,
            limit_mse,
            composite: (position_mse + direction_err + type_err + limit_mse) / 4.0,
            limits_compared,
        }
    }

    /// Component-wise mean; `None` for an empty slice.
    pub fn mean(errs: &[KinematicError]) -> Option<KinematicError> {
        if errs.is_empty() {
            return None;
        }
        let n = errs.len() as f64;
        let avg = |f: fn(&KinematicError) -> f64| errs.iter().map(f).sum::<f64>() / n;
        Some(Self::from_parts(
            avg(|e| e.position_mse),
            avg(|e| e.direction_err),
            avg(|e| e.type_err),
            avg(|e| e.limit_mse),
            errs.iter().any(|e| e.limits_compared),
        ))
    }
}

pub fn kinematic_error(pred: &JointSpec, gt: &JointSpec) -> Result<KinematicError, MetricError> {
    for (j, what) in [(pred, "predicted"), (gt, "ground-truth")] {
        if let Some(v) = j.violations(None).first() {
            return Err(MetricError::InvalidInput(format!("{what} joint: {}: {}", v.field, v.rule)));
        }
    }
    let position_mse = (0..3).map(|k| (pred.origin_m[k] - gt.origin_m[k]).powi(2)).sum::<f64>() / 3.0;
    let direction_err = geom::dist2(pred.axis, gt.axis).min(geom::dist2(pred.axis, geom::scale(gt.axis, -1.0)));
    let type_err = if pred.kind == gt.kind { 0.0 } else { 1.0 };
    let (limit_mse, compared) = match (pred.limit, gt.limit) {
        (Some(p), Some(g)) => (((p.lower - g.lower).powi(2) + (p.upper - g.upper).powi(2)) / 2.0, true),
        _ => (0.0, false),
    };
    Ok(KinematicError::from_parts(position_mse, direction_err, type_err, limit_mse, compared))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometryMetrics {
    pub cd_times_1e3: f64,
    pub fscore_times_1e2: f64,
    pub samples: usize,
    pub seed: u64,
    pub tau: f64,
}

/// Normalizes both meshes to the unit cube, samples each with the same
/// seed and compares the clouds.
pub fn eval_geometry(
    pred: &TriangleMesh,
    gt: &TriangleMesh,
    samples: usize,
    seed: u64,
    tau: f64,
) -> Result<GeometryMetrics, MetricError> {
    let norm = |m: &TriangleMesh| m.normalized_unit_cube().map_err(|e| MetricError::InvalidInput(e.to_string()));
    let a = sample_points(&norm(pred)?, samples, seed)?;
    let b = sample_points(&norm(gt)?, samples, seed)?;
    Ok(GeometryMetrics {
        cd_times_1e3: chamfer_distance(&a, &b)? * 1e3,
        fscore_times_1e2: fscore(&a, &b, tau)?,
        samples,
        seed,
        tau,
    })
}

impl GeometryMetrics {
    pub fn report(&self) -> String {
        format!(
            "cd_x1e3={:.3}\nfscore_x1e2={:.2}\nsamples={}\nseed={}\ntau={}\n",
            self.cd_times_1e3, self.fscore_times_1e2, self.samples, self.seed, self.tau
        )
    }

    pub const CSV_HEADER: &'static str = "pred,gt,cd_x1e3,fscore_x1e2,samples,seed,tau";

    pub fn csv_row(&self, pred: &str, gt: &str) -> String {
        format!(
            "{pred},{gt},{:.3},{:.2},{},{},{}",
            self.cd_times_1e3, self.fscore_times_1e2, self.samples, self.seed, self.tau
        )
    }
}

/// Top-down affordance heatmap: each lattice column takes the affordance of
/// the highest occupied voxel, scaled to 0..=255; empty columns are 0.
pub fn affordance_heatmap(asset: &PhysicalAsset) -> Result<GrayImage, MetricError> {
    let grids = urdf::decode_parts(asset).map_err(|e| MetricError::InvalidInput(e.to_string()))?;
    let r = asset
        .resolution()
        .ok_or_else(|| MetricError::InvalidInput("asset has no parts".into()))?;
    let mut top: Vec<Option<(usize, f64)>> = vec![None; r * r];
    for (part, g) in asset.sorted_parts().iter().zip(&grids) {
        for [x, y, z] in g.grid.iter_occupied() {
            let cell = &mut top[x + r * y];
            if cell.is_none_or(|(zz, _)| z > zz) {
                *cell = Some((z, part.affordance));
            }
        }
    }
    let pixels = top
        .into_iter()
        .map(|c| c.map_or(0, |(_, a)| (a.clamp(0.0, 1.0) * 255.0).round() as u8))
        .collect();
    GrayImage::new(r, r, pixels)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalMetrics {
    pub scale_mse: f64,
    /// Mean over non-root parts present in both assets (matched by id).
    pub kinematic: Option<KinematicError>,
    pub joints_compared: usize,
    pub affordance_psnr: Option<f64>,
}

pub fn eval_physical(pred: &PhysicalAsset, gt: &PhysicalAsset) -> Result<PhysicalMetrics, MetricError> {
    let scale = scale_mse(pred.scale_m, gt.scale_m)?;
    let mut errs = Vec::new();
    for g in gt.parts.iter().filter(|p| p.parent.is_some()) {
        if let Some(p) = pred.part(g.id).filter(|p| p.parent.is_some()) {
            errs.push(kinematic_error(&p.joint, &g.joint)?);
        }
    }
    let affordance_psnr = if pred.resolution() == gt.resolution() {
        Some(psnr(&affordance_heatmap(pred)?, &affordance_heatmap(gt)?)?)
    } else {
        None
    };
    Ok(PhysicalMetrics {
        scale_mse: scale,
        kinematic: KinematicError::mean(&errs),
        joints_compared: errs.len(),
        affordance_psnr,
    })
}

fn fmt_psnr(v: f64) -> String {
    if v.is_infinite() {
        "inf".into()
    } else {
        format!("{v:.2}")
    }
}

impl PhysicalMetrics {
    pub fn report(&self) -> String {
        let mut s = format!("scale_mse={}\njoints_compared={}\n", self.scale_mse, self.joints_compared);
        if let Some(k) = self.kinematic {
            let _ = write!(
                s,
                "kin_position_mse={}\nkin_direction_err={}\nkin_type_err={}\nkin_limit_mse={}\nkin_composite={}\nkin_limits_compared={}\n",
                k.position_mse, k.direction_err, k.type_err, k.limit_mse, k.composite, k.limits_compared
            );
        }
        match self.affordance_psnr {
            Some(p) => {
                let _ = writeln!(s, "affordance_psnr_db={}", fmt_psnr(p));
            }
            None => s.push_str("affordance_psnr_db=n/a\n"),
        }
        s
    }
}
