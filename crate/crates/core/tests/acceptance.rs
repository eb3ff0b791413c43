//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs without the libtest harness so the lines always print.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simasset::asset::{self, AssetError, PhysicalAsset};
use simasset::bench;
use simasset::codec::{self, TOKEN_BUDGET};
use simasset::fixtures::{self, ShapeKind};
use simasset::geom::Vec3;
use simasset::metrics::{self, PointCloud};
use simasset::urdf;
use simasset::voxel::PartGrid;

const LOSSLESS_GRIDS: usize = 500;
const LOSSLESS_BUDGET: Duration = Duration::from_secs(60);
const METRIC_PAIRS: usize = 200;
const METRIC_MAX_N: usize = 1024;
const METRIC_TOL: f64 = 1e-9;
const SPEARMAN_TOL: f64 = 1e-12;
const MASS_REL_TOL: f64 = 1e-9;
const INDEX_TOKENS: usize = 4096;
const CUBE_TEMPLATE_BOUND: usize = 200;
const REPEAT_LAYER_BOUND: usize = 3;
const MAX_PARTS: usize = 10;
const ASSET_RESOLUTION: usize = 64;
const MIN_CORPUS: usize = 10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn files_with(dir: &str, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(fixture_root().join(dir))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    v.sort();
    v
}

fn shipped_assets() -> Vec<(PathBuf, String, PhysicalAsset)> {
    files_with("assets", "asset")
        .into_iter()
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            let a = asset::parse_asset(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            (p, text, a)
        })
        .collect()
}

/// Every serialized part code shipped: `.code` lines and asset geometry.
fn shipped_codes() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for p in files_with("codes", "code") {
        for (i, line) in fs::read_to_string(&p).unwrap().lines().enumerate() {
            out.push((format!("{}:{}", p.display(), i + 1), line.to_string()));
        }
    }
    for (p, _, a) in shipped_assets() {
        for part in &a.parts {
            out.push((format!("{} part {}", p.display(), part.id), codec::serialize_part(&part.geometry)));
        }
    }
    out
}

fn check(cond: bool, ok: String, fail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(ok)
    } else {
        Err(fail())
    }
}

fn codec_losslessness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let resolutions = [8, 16, 32, 64];
    for i in 0..LOSSLESS_GRIDS {
        let r = resolutions[i % 4];
        let kind = ShapeKind::ALL[(i / 4) % 4];
        let g = fixtures::random_grid(kind, r, &mut rng);
        let code = codec::encode_part(&PartGrid { part_id: 0, grid: g.clone() });
        let text = codec::serialize_part(&code);
        let back = codec::decode_part(&codec::parse_part(&text).map_err(|e| e.to_string())?, 0).map_err(|e| e.to_string())?;
        if back.grid.occupancy() != g.occupancy() {
            return Err(format!("grid {i} ({kind:?}, R={r}) differs after decode"));
        }
    }
    let t = start.elapsed();
    check(
        t < LOSSLESS_BUDGET,
        format!("{LOSSLESS_GRIDS} grids bit-exact in {:.2}s", t.as_secs_f64()),
        || format!("took {:.2}s, budget {}s", t.as_secs_f64(), LOSSLESS_BUDGET.as_secs()),
    )
}

fn alphabet() -> Outcome {
    let codes = shipped_codes();
    let allowed = |b: u8| b.is_ascii_digit() || b"PTDEF |".contains(&b);
    for (name, text) in &codes {
        if let Some(b) = text.bytes().find(|&b| !allowed(b)) {
            return Err(format!("{name}: byte {b:#04x}"));
        }
    }
    Ok(format!("{} serialized codes use only digits, PTDEF, space and |", codes.len()))
}

fn dominance() -> Outcome {
    let codes = shipped_codes();
    for (name, text) in &codes {
        let code = codec::parse_part(text).map_err(|e| format!("{name}: {e}"))?;
        let part = codec::decode_part(&code, 0).map_err(|e| format!("{name}: {e}"))?;
        let plain = codec::token_count(&codec::encode_plain_rle_baseline(&part));
        let ours = codec::token_count(text);
        if ours > plain {
            return Err(format!("{name}: {ours} tokens vs plain {plain}"));
        }
    }
    let mut worst = 0;
    let prisms = fixtures::prism_family(64);
    for (name, g) in &prisms {
        let code = codec::encode_part(&PartGrid { part_id: 0, grid: g.clone() });
        if code.template_count() != 1 {
            return Err(format!("{name}: {} templates", code.template_count()));
        }
        worst = worst.max(code.layers[1..].iter().map(|l| l.token_cost()).max().unwrap());
    }
    check(
        worst <= REPEAT_LAYER_BOUND,
        format!("{} fixtures <= plain RLE; repeated prism layers cost <= {worst} tokens", codes.len()),
        || format!("a repeated prism layer costs {worst} tokens"),
    )
}

fn baseline_gap() -> Outcome {
    let part = PartGrid { part_id: 0, grid: fixtures::cube_grid(64, 24, 16) };
    let index = codec::token_count(&codec::encode_voxel_index_baseline(&part));
    let ours = codec::token_count(&codec::serialize_part(&codec::encode_part(&part)));
    check(
        index == INDEX_TOKENS && ours <= CUBE_TEMPLATE_BOUND,
        format!("index baseline {index} tokens, template {ours} tokens"),
        || format!("index baseline {index} (want {INDEX_TOKENS}), template {ours} (want <= {CUBE_TEMPLATE_BOUND})"),
    )
}

fn token_budget() -> Outcome {
    let assets = shipped_assets();
    let mut worst = 0;
    for (p, text, a) in &assets {
        if a.parts.len() > MAX_PARTS || a.resolution() != Some(ASSET_RESOLUTION) {
            return Err(format!("{}: {} parts at R={:?}", p.display(), a.parts.len(), a.resolution()));
        }
        let n = codec::token_count(text);
        if n >= TOKEN_BUDGET {
            return Err(format!("{}: {n} tokens", p.display()));
        }
        worst = worst.max(n);
    }
    Ok(format!("{} assets, largest {worst} tokens < {TOKEN_BUDGET}", assets.len()))
}

fn d2(a: Vec3, b: Vec3) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

fn brute_nn(from: &[Vec3], to: &[Vec3]) -> Vec<f64> {
    from.iter().map(|&p| to.iter().map(|&q| d2(p, q)).fold(f64::INFINITY, f64::min)).collect()
}

fn metric_oracles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let tau = metrics::DEFAULT_FSCORE_TAU;
    let mut worst: f64 = 0.0;
    for i in 0..METRIC_PAIRS {
        let mut cloud = |n: usize| -> Vec<Vec3> { (0..n).map(|_| [rng.random(), rng.random(), rng.random()]).collect() };
        let na = 1 + i * (METRIC_MAX_N - 1) / (METRIC_PAIRS - 1);
        let a = cloud(na);
        let b = cloud(METRIC_MAX_N + 1 - na);
        let (ab, ba) = (brute_nn(&a, &b), brute_nn(&b, &a));
        let cd = ab.iter().sum::<f64>() / ab.len() as f64 + ba.iter().sum::<f64>() / ba.len() as f64;
        let frac = |d: &[f64]| d.iter().filter(|&&x| x.sqrt() <= tau).count() as f64 / d.len() as f64;
        let (p, r) = (frac(&ab), frac(&ba));
        let fs = if p + r == 0.0 { 0.0 } else { 200.0 * p * r / (p + r) };
        let (pa, pb) = (PointCloud(a), PointCloud(b));
        let got_cd = metrics::chamfer_distance(&pa, &pb).map_err(|e| e.to_string())?;
        let got_fs = metrics::fscore(&pa, &pb, tau).map_err(|e| e.to_string())?;
        worst = worst.max((got_cd - cd).abs()).max((got_fs - fs).abs());
    }
    if worst > METRIC_TOL {
        return Err(format!("max deviation from brute force {worst:e}"));
    }
    let c = PointCloud((0..500).map(|_| [rng.random(), rng.random(), rng.random()]).collect());
    let (cd0, fs100) = (metrics::chamfer_distance(&c, &c).unwrap(), metrics::fscore(&c, &c, tau).unwrap());
    if cd0 != 0.0 || fs100 != 100.0 {
        return Err(format!("identical clouds gave CD {cd0}, F {fs100}"));
    }
    let rho = metrics::spearman_rho(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 3.0, 5.0, 4.0]).map_err(|e| e.to_string())?;
    check(
        (rho - 0.8).abs() <= SPEARMAN_TOL,
        format!("{METRIC_PAIRS} pairs within {worst:.1e}; identical clouds 0/100; rho = {rho}"),
        || format!("Spearman fixture gave {rho}"),
    )
}

fn scale_endpoints() -> Outcome {
    let same = [0.01, 0.7, 1.0, 3.5, 120.0].iter().map(|&p| metrics::scale_plausibility(p, p).unwrap()).collect::<Vec<_>>();
    let limit = metrics::plausibility_from_spe(200.0).map_err(|e| e.to_string())?;
    check(
        same.iter().all(|&s| s == 100.0) && limit == 0.0,
        "scale_plausibility(p, p) = 100, SPE 200 maps to 0".into(),
        || format!("equal dims gave {same:?}, SPE 200 gave {limit}"),
    )
}

fn kinematics_aggregation() -> Outcome {
    let k = bench::aggregate_kinematics([80.0, 70.0, 90.0], [0.4, 0.2, 0.4]).map_err(|e| e.to_string())?;
    if k != 82.0 {
        return Err(format!("got {k:?}"));
    }
    let mut runner = TestRunner::new(Config { cases: 512, failure_persistence: None, ..Config::default() });
    let strategy = (
        proptest::array::uniform3(0.0f64..=100.0),
        proptest::array::uniform3(0.0f64..=1.0),
        0.001f64..1000.0,
    );
    runner
        .run(&strategy, |(s, w, c)| {
            prop_assume!(w.iter().sum::<f64>() > 1e-3);
            let a = bench::aggregate_kinematics(s, w).unwrap();
            let b = bench::aggregate_kinematics(s, w.map(|x| x * c)).unwrap();
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{a} vs {b}");
            Ok(())
        })
        .map_err(|e| format!("rescaling: {e}"))?;
    Ok("(0.4, 0.2, 0.4) on (80, 70, 90) = 82; rescaling invariant over 512 cases".into())
}

fn urdf_export() -> Outcome {
    let cabinet = fixtures::cabinet();
    let b = urdf::build_urdf(&cabinet).map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&b.document).map_err(|e| e.to_string())?;
    let count = |tag: &str| doc.root_element().children().filter(|n| n.has_tag_name(tag)).count();
    let (links, joints) = (count("link"), count("joint"));
    let v = urdf::validate_urdf(&b.document, None);
    if (links, joints) != (2, 1) || !v.is_empty() {
        return Err(format!("cabinet: {links} links, {joints} joints, {} violations", v.len()));
    }
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut worst_rel: f64 = 0.0;
    let assets = shipped_assets();
    for (p, _, a) in &assets {
        let name = p.file_stem().unwrap().to_string_lossy().to_string();
        let out = dir.path().join(&name);
        let b = urdf::export_urdf(a, &out).map_err(|e| format!("{name}: {e}"))?;
        let v = urdf::validate_urdf(&b.document, Some(&out));
        if !v.is_empty() {
            return Err(format!("{name}: {}", v[0]));
        }
        // Density times voxel volume, with voxel edges fitted to the scale.
        let grids: Vec<_> = a.parts.iter().map(|p| (p.material.density, codec::decode_part(&p.geometry, p.id).unwrap())).collect();
        let (mut lo, mut hi) = ([usize::MAX; 3], [0; 3]);
        for (_, g) in &grids {
            for c in g.grid.iter_occupied() {
                for k in 0..3 {
                    lo[k] = lo[k].min(c[k]);
                    hi[k] = hi[k].max(c[k] + 1);
                }
            }
        }
        let vol: f64 = (0..3).map(|k| a.scale_m[k] / (hi[k] - lo[k]) as f64).product();
        let want: f64 = grids.iter().map(|(rho, g)| rho * g.grid.count() as f64 * vol).sum();
        worst_rel = worst_rel.max(((b.total_mass() - want) / want).abs());
    }
    check(
        worst_rel <= MASS_REL_TOL,
        format!("cabinet 2 links / 1 joint / 0 violations; {} assets clean, mass rel err {worst_rel:.1e}", assets.len()),
        || format!("mass relative error {worst_rel:e}"),
    )
}

fn asset_grammar() -> Outcome {
    let assets = shipped_assets();
    if assets.len() < MIN_CORPUS {
        return Err(format!("only {} assets", assets.len()));
    }
    for (p, text, a) in &assets {
        let again = asset::serialize_asset(a).map_err(|e| e.to_string())?;
        if &again != text {
            return Err(format!("{} does not reserialize byte-for-byte", p.display()));
        }
    }
    let mut rdr = csv::Reader::from_path(fixture_root().join("invalid_assets/expected.csv")).map_err(|e| e.to_string())?;
    let mut n = 0;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let text = fs::read_to_string(fixture_root().join("invalid_assets").join(&rec[0])).map_err(|e| e.to_string())?;
        match asset::parse_asset(&text) {
            Err(AssetError::Invalid(v)) if v.iter().any(|x| x.field == rec[1]) => n += 1,
            other => return Err(format!("{}: expected a `{}` violation, got {other:?}", &rec[0], &rec[1])),
        }
    }
    Ok(format!("{} assets byte-identical; {n} invalid fixtures rejected on the expected field", assets.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("codec losslessness", codec_losslessness),
        ("grammar alphabet", alphabet),
        ("compression dominance", dominance),
        ("baseline gap", baseline_gap),
        ("token budget", token_budget),
        ("metric oracle equivalence", metric_oracles),
        ("scale mapping endpoints", scale_endpoints),
        ("kinematics aggregation", kinematics_aggregation),
        ("urdf export", urdf_export),
        ("asset grammar", asset_grammar),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match std::panic::catch_unwind(f) {
            Ok(Ok(msg)) => println!("PASS  {name}: {msg}"),
            Ok(Err(msg)) => {
                failed += 1;
                println!("FAIL  {name}: {msg}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL  {name}: panicked");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
