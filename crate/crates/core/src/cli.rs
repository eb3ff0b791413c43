//! The `simasset` command line.
//!
//! Exit status: 0 on success, 1 when an input fails validation or a check
//! does not hold, 2 on usage errors (bad flags, unreadable files).
//! `SIMASSET_RES` overrides the default voxel resolution (64).

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::asset::{self, PhysicalAsset};
use crate::bench::{self, Dimension, JudgeResponse};
use crate::codec::{self, CodeStats, PartCode};
use crate::mesh::{self, TriangleMesh};
use crate::metrics;
use crate::urdf;
use crate::voxel::{self, PartGrid, VoxelGrid};

pub const RESOLUTION_ENV: &str = "SIMASSET_RES";

#[derive(Debug, Parser)]
#[command(name = "simasset", version, about = "Voxel codec, physical assets, URDF export and evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Voxelize an OBJ mesh; prints a summary, optionally writes a grid dump.
    Voxelize {
        obj: PathBuf,
        #[arg(long)]
        res: Option<usize>,
        /// Flood-fill the interior.
        #[arg(long)]
        solid: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Encode a grid dump or an OBJ mesh; one part code per line.
    Encode {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Resolution for OBJ input.
        #[arg(long)]
        res: Option<usize>,
        /// Keep only the surface shell of OBJ input.
        #[arg(long)]
        surface: bool,
    },
    /// Decode a code file into a grid dump, or an OBJ when the output ends in `.obj`.
    Decode {
        code: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check lossless round trips of every supported file under a path.
    Roundtrip {
        path: PathBuf,
        #[arg(long)]
        res: Option<usize>,
    },
    /// Code statistics, baselines and the token budget check.
    Stats {
        #[arg(required = true)]
        codes: Vec<PathBuf>,
    },
    /// Export an asset to URDF and validate the result.
    ExportUrdf {
        asset: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Chamfer distance and F-score between two meshes.
    EvalGeometry {
        pred: PathBuf,
        gt: PathBuf,
        #[arg(long, default_value_t = metrics::DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = metrics::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = metrics::DEFAULT_FSCORE_TAU)]
        tau: f64,
    },
    /// Scale, kinematic and affordance metrics between two assets.
    EvalPhysical { pred: PathBuf, gt: PathBuf },
    /// Aggregate judge responses into the benchmark report.
    BenchAggregate {
        responses_dir: PathBuf,
        assets_dir: PathBuf,
        #[arg(long, default_value = "0.4,0.2,0.4")]
        kin_weights: String,
        /// Dimensions every response must carry, comma separated.
        #[arg(long, value_delimiter = ',')]
        require: Vec<String>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
        /// Method name used by the summary format.
        #[arg(long, default_value = "method")]
        method: String,
    },
    /// Spearman and Pearson alignment of a summary report with human scores.
    BenchAlign { report: PathBuf, human_csv: PathBuf },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Table,
    Rows,
    Summary,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Invalid(String),
}

type Outcome = Result<(), Failure>;

fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn default_resolution() -> Result<usize, Failure> {
    match std::env::var(RESOLUTION_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{RESOLUTION_ENV}={v} is not a resolution"))),
        Err(_) => Ok(voxel::DEFAULT_RESOLUTION),
    }
}

fn resolution(flag: Option<usize>) -> Result<usize, Failure> {
    flag.map_or_else(default_resolution, Ok)
}

fn ext(path: &Path) -> &str {
    path.extension().and_then(|e| e.to_str()).unwrap_or("")
}

fn load_mesh(path: &Path) -> Result<TriangleMesh, Failure> {
    mesh::parse_obj(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_asset(path: &Path) -> Result<PhysicalAsset, Failure> {
    asset::parse_asset(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_codes(path: &Path) -> Result<Vec<PartCode>, Failure> {
    let text = read(path)?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| codec::parse_part(l).map_err(|e| invalid(format!("{}:{}: {e}", path.display(), i + 1))))
        .collect()
}

/// Parts of a mesh: one per label, or a single part 0 when unlabeled.
fn mesh_parts(mesh: &TriangleMesh, r: usize, solid: bool) -> Result<Vec<PartGrid>, Failure> {
    let surface = voxel::voxelize_surface(mesh, r).map_err(invalid)?;
    let grid = if solid { voxel::fill_solid(&surface) } else { surface };
    if mesh.face_labels.iter().any(Option::is_some) {
        voxel::split_parts(&grid, mesh).map_err(invalid)
    } else {
        Ok(vec![PartGrid { part_id: 0, grid }])
    }
}

fn codes_text(codes: &[PartCode]) -> String {
    codes.iter().map(|c| codec::serialize_part(c) + "\n").collect()
}

fn decode_all(codes: &[PartCode]) -> Result<Vec<PartGrid>, Failure> {
    codes
        .iter()
        .enumerate()
        .map(|(i, c)| codec::decode_part(c, i as u32).map_err(invalid))
        .collect()
}

fn union_grid(parts: &[PartGrid]) -> Result<VoxelGrid, Failure> {
    let Some(first) = parts.first() else {
        return Err(Failure::Invalid("no parts to decode".into()));
    };
    let mut g = first.grid.cleared();
    for p in parts {
        if p.grid.resolution() != g.resolution() {
            return Err(Failure::Invalid("parts differ in resolution".into()));
        }
        for [x, y, z] in p.grid.iter_occupied() {
            g.set(x, y, z, true);
        }
    }
    Ok(g)
}

fn voxelize(obj: &Path, res: Option<usize>, solid: bool, output: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let mesh = load_mesh(obj)?;
    let surface = voxel::voxelize_surface(&mesh, resolution(res)?).map_err(invalid)?;
    let grid = if solid { voxel::fill_solid(&surface) } else { surface };
    if let Some(path) = output {
        write_file(path, &grid.to_dump())?;
    }
    let _ = writeln!(out, "{}", voxel::describe(&grid));
    let _ = writeln!(out, "origin={:?}", grid.origin);
    Ok(())
}

fn encode(input: &Path, output: &Path, res: Option<usize>, surface: bool, out: &mut dyn Write) -> Outcome {
    let parts = if ext(input) == "obj" {
        mesh_parts(&load_mesh(input)?, resolution(res)?, !surface)?
    } else {
        let grid = VoxelGrid::from_dump(&read(input)?).map_err(|e| invalid(format!("{}: {e}", input.display())))?;
        vec![PartGrid { part_id: 0, grid }]
    };
    let codes: Vec<PartCode> = parts.iter().map(codec::encode_part).collect();
    let text = codes_text(&codes);
    write_file(output, &text)?;
    let _ = writeln!(out, "parts={}\ntokens={}", codes.len(), codec::token_count(&text));
    Ok(())
}

fn decode(code: &Path, output: &Path, out: &mut dyn Write) -> Outcome {
    let parts = decode_all(&load_codes(code)?)?;
    if ext(output) == "obj" {
        let meshes = parts
            .iter()
            .filter(|p| !p.grid.is_empty())
            .map(|p| voxel::extract_boundary_mesh(p).map_err(invalid))
            .collect::<Result<Vec<_>, _>>()?;
        write_file(output, &mesh::write_obj(&TriangleMesh::merge(&meshes)))?;
    } else {
        write_file(output, &union_grid(&parts)?.to_dump())?;
    }
    let voxels: usize = parts.iter().map(|p| p.grid.count()).sum();
    let _ = writeln!(out, "parts={}\nvoxels={voxels}", parts.len());
    Ok(())
}

/// Files under `path` in sorted order (the path itself if it is a file).
fn walk(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut out = Vec::new();
    let entries = std::fs::read_dir(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut children: Vec<PathBuf> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
    children.sort();
    for c in children {
        if c.is_dir() {
            out.extend(walk(&c)?);
        } else {
            out.push(c);
        }
    }
    Ok(out)
}

fn code_roundtrip(codes: &[PartCode], text: &str) -> Result<(), String> {
    if codes_text(codes) != text.trim_end().to_string() + "\n" {
        return Err("text is not canonical".into());
    }
    for (i, c) in codes.iter().enumerate() {
        let part = codec::decode_part(c, i as u32).map_err(|e| e.to_string())?;
        let again = codec::encode_part(&part);
        let back = codec::decode_part(&again, i as u32).map_err(|e| e.to_string())?;
        if back != part {
            return Err(format!("part {i} changed after re-encoding"));
        }
    }
    Ok(())
}

fn grid_roundtrip(grid: &VoxelGrid) -> Result<(), String> {
    let part = PartGrid { part_id: 0, grid: grid.clone() };
    let text = codec::serialize_part(&codec::encode_part(&part));
    let parsed = codec::parse_part(&text).map_err(|e| e.to_string())?;
    let back = codec::decode_part(&parsed, 0).map_err(|e| e.to_string())?;
    if back.grid.occupancy() != grid.occupancy() {
        return Err("decoded grid differs".into());
    }
    Ok(())
}

/// `Ok(None)` for unsupported file kinds.
fn roundtrip_file(path: &Path, res: usize) -> Result<Option<()>, String> {
    let text = || std::fs::read_to_string(path).map_err(|e| e.to_string());
    match ext(path) {
        "code" => {
            let t = text()?;
            let codes: Vec<PartCode> = t
                .lines()
                .map(|l| codec::parse_part(l).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            code_roundtrip(&codes, &t)?;
        }
        "grid" => grid_roundtrip(&VoxelGrid::from_dump(&text()?).map_err(|e| e.to_string())?)?,
        "asset" => {
            let t = text()?;
            let a = asset::parse_asset(&t).map_err(|e| e.to_string())?;
            if asset::serialize_asset(&a).map_err(|e| e.to_string())? != t {
                return Err("serialized asset differs from the file".into());
            }
            for p in &a.parts {
                grid_roundtrip(&codec::decode_part(&p.geometry, p.id).map_err(|e| e.to_string())?.grid)?;
            }
        }
        "judge" => {
            let t = text()?;
            let r = bench::parse_judges(&t).map_err(|e| e.to_string())?;
            if bench::serialize_judges(&r) != t {
                return Err("serialized judge file differs".into());
            }
        }
        "obj" => {
            let m = mesh::parse_obj(&text()?).map_err(|e| e.to_string())?;
            for p in mesh_parts(&m, res, true).map_err(|e| match e {
                Failure::Usage(s) | Failure::Invalid(s) => s,
            })? {
                grid_roundtrip(&p.grid)?;
            }
        }
        _ => return Ok(None),
    }
    Ok(Some(()))
}

fn roundtrip(path: &Path, res: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let res = resolution(res)?;
    let (mut checked, mut failed) = (0, 0);
    for f in walk(path)? {
        match roundtrip_file(&f, res) {
            Ok(Some(())) => {
                checked += 1;
                let _ = writeln!(out, "ok {}", f.display());
            }
            Ok(None) => {}
            Err(e) => {
                failed += 1;
                let _ = writeln!(err, "FAIL {}: {e}", f.display());
            }
        }
    }
    let _ = writeln!(out, "checked={checked}\nfailed={failed}");
    if failed > 0 {
        return Err(Failure::Invalid(format!("{failed} round trip(s) failed")));
    }
    Ok(())
}

fn stats(paths: &[PathBuf], out: &mut dyn Write) -> Outcome {
    let mut total = CodeStats::default();
    let mut over = Vec::new();
    for p in paths {
        let (codes, text_tokens) = if ext(p) == "asset" {
            let a = load_asset(p)?;
            let text = asset::serialize_asset(&a).map_err(invalid)?;
            (a.sorted_parts().into_iter().map(|q| q.geometry.clone()).collect::<Vec<_>>(), codec::token_count(&text))
        } else {
            let codes = load_codes(p)?;
            let n = codes.iter().map(PartCode::token_cost).sum();
            (codes, n)
        };
        let mut s = CodeStats::default();
        for c in &codes {
            s.merge(&CodeStats::for_code(c).map_err(|e| invalid(format!("{}: {e}", p.display())))?);
        }
        let _ = writeln!(out, "file={}\nparts={}\ntext_tokens={text_tokens}", p.display(), codes.len());
        let _ = write!(out, "{}", s.report());
        if text_tokens > codec::TOKEN_BUDGET || s.token_count > codec::TOKEN_BUDGET {
            over.push(p.display().to_string());
        }
        total.merge(&s);
    }
    if paths.len() > 1 {
        let _ = write!(out, "file=total\n{}", total.report());
    }
    if !over.is_empty() {
        return Err(Failure::Invalid(format!("over the token budget: {}", over.join(", "))));
    }
    Ok(())
}

fn export(asset_path: &Path, out_dir: &Path, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let a = load_asset(asset_path)?;
    let bundle = urdf::build_urdf(&a).map_err(invalid)?;
    std::fs::create_dir_all(out_dir).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", out_dir.display())))?;
    bundle.write_to(out_dir).map_err(|e| Failure::Usage(e.to_string()))?;
    let violations = urdf::validate_urdf(&bundle.document, Some(out_dir));
    let joints = a.parts.iter().filter(|p| p.parent.is_some()).count();
    let _ = writeln!(
        out,
        "links={}\njoints={joints}\ntotal_mass_kg={}\nviolations={}",
        a.parts.len(),
        bundle.total_mass(),
        violations.len()
    );
    for v in &violations {
        let _ = writeln!(err, "violation: {v}");
    }
    if !violations.is_empty() {
        return Err(Failure::Invalid("exported URDF failed validation".into()));
    }
    Ok(())
}

fn files_with_ext(dir: &Path, e: &str) -> Result<Vec<PathBuf>, Failure> {
    if !dir.is_dir() {
        return Err(Failure::Usage(format!("{} is not a directory", dir.display())));
    }
    Ok(walk(dir)?.into_iter().filter(|p| ext(p) == e).collect())
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

#[allow(clippy::too_many_arguments)]
fn bench_aggregate(
    responses_dir: &Path,
    assets_dir: &Path,
    kin_weights: &str,
    require: &[String],
    format: ReportFormat,
    method: &str,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let weights = bench::parse_kin_weights(kin_weights).map_err(|e| Failure::Usage(e.to_string()))?;
    let requested = require
        .iter()
        .map(|d| Dimension::from_name(d).ok_or_else(|| Failure::Usage(format!("unknown dimension `{d}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let mut responses: Vec<JudgeResponse> = Vec::new();
    for f in files_with_ext(responses_dir, "judge")? {
        responses.extend(bench::parse_judges(&read(&f)?).map_err(|e| invalid(format!("{}: {e}", f.display())))?);
    }
    let violations: Vec<_> = responses.iter().flat_map(|r| bench::validate_judge(r, &requested)).collect();
    for v in &violations {
        let _ = writeln!(err, "violation: {v}");
    }
    if !violations.is_empty() {
        return Err(Failure::Invalid(format!("{} judge violation(s)", violations.len())));
    }
    let assets = files_with_ext(assets_dir, "asset")?
        .iter()
        .map(|f| Ok((stem(f), load_asset(f)?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let report = bench::aggregate_report(&responses, &assets, weights).map_err(invalid)?;
    let text = match format {
        ReportFormat::Table => report.table(),
        ReportFormat::Rows => report.rows_csv(),
        ReportFormat::Summary => report.summary_csv(method),
    };
    let _ = out.write_all(text.as_bytes());
    Ok(())
}

fn bench_align(report: &Path, human: &Path, out: &mut dyn Write) -> Outcome {
    let auto = bench::parse_score_table(&read(report)?).map_err(|e| invalid(format!("{}: {e}", report.display())))?;
    let human = bench::parse_score_table(&read(human)?).map_err(|e| invalid(format!("{}: {e}", human.display())))?;
    let rows = bench::align_tables(&auto, &human);
    if rows.is_empty() {
        return Err(Failure::Invalid("no dimension appears in both tables".into()));
    }
    let _ = out.write_all(bench::alignment_csv(&rows).as_bytes());
    Ok(())
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Voxelize { obj, res, solid, output } => voxelize(&obj, res, solid, output.as_deref(), out),
        Command::Encode { input, output, res, surface } => encode(&input, &output, res, surface, out),
        Command::Decode { code, output } => decode(&code, &output, out),
        Command::Roundtrip { path, res } => roundtrip(&path, res, out, err),
        Command::Stats { codes } => stats(&codes, out),
        Command::ExportUrdf { asset, output } => export(&asset, &output, out, err),
        Command::EvalGeometry { pred, gt, samples, seed, tau } => {
            let m = metrics::eval_geometry(&load_mesh(&pred)?, &load_mesh(&gt)?, samples, seed, tau).map_err(invalid)?;
            let _ = out.write_all(m.report().as_bytes());
            Ok(())
        }
        Command::EvalPhysical { pred, gt } => {
            let m = metrics::eval_physical(&load_asset(&pred)?, &load_asset(&gt)?).map_err(invalid)?;
            let _ = out.write_all(m.report().as_bytes());
            Ok(())
        }
        Command::BenchAggregate {
            responses_dir,
            assets_dir,
            kin_weights,
            require,
            format,
            method,
        } => bench_aggregate(&responses_dir, &assets_dir, &kin_weights, &require, format, &method, out, err),
        Command::BenchAlign { report, human_csv } => bench_align(&report, &human_csv, out),
    }
}

/// Runs the command line `args` (program name first) and returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Invalid(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

/// Capture helper: runs and returns `(status, stdout, stderr)` as strings.
pub fn run_captured<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let (mut o, mut e) = (Vec::new(), Vec::new());
    let code = run(args, &mut o, &mut e);
    (
        code,
        String::from_utf8_lossy(&o).into_owned(),
        String::from_utf8_lossy(&e).into_owned(),
    )
}
