//! Template-based run-length encoding of part voxel volumes.
//!
//! A part is sliced along z. Each slice is linearized row-major
//! (x fastest) and stored as one of:
//!
//! * `E`: all empty
//! * `F`: all occupied
//! * `T <runs>`: a template layer: alternating run lengths starting with
//!   empty cells (the first run may be 0)
//! * `D<k> <runs>`: the XOR difference against the `k`-th template layer
//!   seen so far, in the same run notation
//!
//! A part code is `P<R>` followed by one `|`-separated field per layer, e.g.
//! `P4|T 0 4 12|D0 16`. The serialized alphabet is digits, `PTDEF`, space
//! and `|`.
//!
//! The encoder is greedy and online: a slice becomes a delta against the
//! cheapest earlier template only when that is strictly fewer tokens than
//! storing it as a fresh template (lowest template index wins ties).

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::bits::BitBuf;
use crate::voxel::{self, PartGrid, SliceMask, VoxelError, VoxelGrid, MAX_RESOLUTION};

/// Sequence budget of the generating model, used for budget checks.
pub const TOKEN_BUDGET: usize = 16_384;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("malformed code at layer {layer}: {msg}")]
    Malformed { layer: usize, msg: String },
    #[error("malformed runs: {0}")]
    Runs(String),
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
}

impl From<VoxelError> for CodecError {
    fn from(e: VoxelError) -> Self {
        CodecError::Malformed {
            layer: 0,
            msg: e.to_string(),
        }
    }
}

/// Alternating empty/occupied run lengths over one linearized slice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RunList(Vec<u32>);

impl RunList {
    /// Validates the structural invariant (non-empty, no zero after the
    /// first entry). The sum is checked against a resolution on decode.
    pub fn new(runs: Vec<u32>) -> Result<Self, CodecError> {
        if runs.is_empty() {
            return Err(CodecError::Runs("run list is empty".into()));
        }
        if let Some(i) = runs.iter().skip(1).position(|&r| r == 0) {
            return Err(CodecError::Runs(format!("zero-length run at position {}", i + 1)));
        }
        Ok(Self(runs))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&r| u64::from(r)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LayerCode {
    Empty,
    Full,
    Template(RunList),
    Delta { template: u32, runs: RunList },
}

impl LayerCode {
    /// Tokens this layer contributes to the serialized form.
    pub fn token_cost(&self) -> usize {
        match self {
            LayerCode::Empty | LayerCode::Full => 1,
            LayerCode::Template(r) | LayerCode::Delta { runs: r, .. } => 1 + r.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartCode {
    pub resolution: usize,
    pub layers: Vec<LayerCode>,
}

impl PartCode {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn template_count(&self) -> usize {
        self.layers
            .iter()
            .filter(|l| matches!(l, LayerCode::Template(_)))
            .count()
    }

    /// Token count of the serialized code, computed without serializing.
    pub fn token_cost(&self) -> usize {
        1 + self.layers.iter().map(LayerCode::token_cost).sum::<usize>()
    }

    /// Checks template references and run sums.
    pub fn check(&self) -> Result<(), CodecError> {
        self.decode_layers().map(|_| ())
    }

    /// Decodes every layer into a mask, for any depth.
    pub fn decode_layers(&self) -> Result<Vec<SliceMask>, CodecError> {
        let r = self.resolution;
        if r == 0 || r > MAX_RESOLUTION {
            return Err(CodecError::Malformed {
                layer: 0,
                msg: format!("resolution {r} outside 1..={MAX_RESOLUTION}"),
            });
        }
        let mut templates: Vec<usize> = Vec::new();
        let mut masks: Vec<SliceMask> = Vec::with_capacity(self.layers.len());
        for (z, layer) in self.layers.iter().enumerate() {
            let with_layer = |e: CodecError| match e {
                CodecError::Runs(msg) => CodecError::Malformed { layer: z, msg },
                other => other,
            };
            let mask = match layer {
                LayerCode::Empty => SliceMask::empty(r),
                LayerCode::Full => SliceMask::full(r),
                LayerCode::Template(runs) => {
                    templates.push(z);
                    decode_slice(runs, r).map_err(with_layer)?
                }
                LayerCode::Delta { template, runs } => {
                    let &src = templates.get(*template as usize).ok_or_else(|| {
                        CodecError::Malformed {
                            layer: z,
                            msg: format!(
                                "delta references template {template} but only {} precede it",
                                templates.len()
                            ),
                        }
                    })?;
                    let diff = decode_slice(runs, r).map_err(with_layer)?;
                    SliceMask::from_bits(r, masks[src].bits().xor(diff.bits()))
                }
            };
            masks.push(mask);
        }
        Ok(masks)
    }
}

impl fmt::Display for PartCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_part(self))
    }
}

pub fn encode_slice(mask: &SliceMask) -> RunList {
    RunList(mask.bits().runs())
}

pub fn decode_slice(runs: &RunList, resolution: usize) -> Result<SliceMask, CodecError> {
    let cells = resolution * resolution;
    let total = runs.total();
    if total != cells as u64 {
        return Err(CodecError::Runs(format!(
            "runs sum to {total}, expected {cells}"
        )));
    }
    let mut bits = BitBuf::zeros(cells);
    let mut pos = 0usize;
    for (i, &r) in runs.as_slice().iter().enumerate() {
        if i % 2 == 1 {
            bits.set_range(pos, r as usize);
        }
        pos += r as usize;
    }
    Ok(SliceMask::from_bits(resolution, bits))
}

pub fn encode_part(part: &PartGrid) -> PartCode {
    let masks = voxel::slice_z(part);
    encode_masks(part.grid.resolution(), &masks)
}

pub fn encode_masks(resolution: usize, masks: &[SliceMask]) -> PartCode {
    let mut templates: Vec<&SliceMask> = Vec::new();
    let mut layers = Vec::with_capacity(masks.len());
    for mask in masks {
        let bits = mask.bits();
        if bits.none() {
            layers.push(LayerCode::Empty);
            continue;
        }
        if bits.all() {
            layers.push(LayerCode::Full);
            continue;
        }
        let fresh_cost = 1 + bits.run_count();
        let mut best: Option<(usize, usize)> = None;
        for (k, t) in templates.iter().enumerate() {
            let cost = 1 + bits.xor(t.bits()).run_count();
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((k, cost));
            }
        }
        match best {
            Some((k, cost)) if cost < fresh_cost => layers.push(LayerCode::Delta {
                template: k as u32,
                runs: RunList(bits.xor(templates[k].bits()).runs()),
            }),
            _ => {
                templates.push(mask);
                layers.push(LayerCode::Template(RunList(bits.runs())));
            }
        }
    }
    PartCode { resolution, layers }
}

/// Decodes a code of depth `R` into a part on a unit lattice at the origin.
pub fn decode_part(code: &PartCode, part_id: u32) -> Result<PartGrid, CodecError> {
    let masks = code.decode_layers()?;
    if masks.len() != code.resolution {
        return Err(CodecError::Malformed {
            layer: masks.len(),
            msg: format!(
                "code has {} layers, a part needs exactly {}",
                masks.len(),
                code.resolution
            ),
        });
    }
    Ok(voxel::stack_slices(part_id, &masks, [0.0; 3], 1.0)?)
}

pub fn serialize_part(code: &PartCode) -> String {
    let mut out = String::new();
    let _ = write!(out, "P{}", code.resolution);
    for layer in &code.layers {
        out.push('|');
        let runs = match layer {
            LayerCode::Empty => {
                out.push('E');
                continue;
            }
            LayerCode::Full => {
                out.push('F');
                continue;
            }
            LayerCode::Template(runs) => {
                out.push('T');
                runs
            }
            LayerCode::Delta { template, runs } => {
                let _ = write!(out, "D{template}");
                runs
            }
        };
        for r in runs.as_slice() {
            let _ = write!(out, " {r}");
        }
    }
    out
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, CodecError> {
        Err(CodecError::Parse {
            offset: self.pos,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    // Canonical decimal: no sign, no leading zeros.
    fn number(&mut self) -> Result<u64, CodecError> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            self.pos = start;
            return self.err("expected a number");
        }
        let digits = &self.src[start..self.pos];
        if digits.len() > 1 && digits[0] == b'0' {
            self.pos = start;
            return self.err("number has a leading zero");
        }
        if digits.len() > 19 {
            self.pos = start;
            return self.err("number too large");
        }
        Ok(digits.iter().fold(0u64, |acc, d| acc * 10 + u64::from(d - b'0')))
    }
}

/// Strict parser for the part code grammar; inverse of [`serialize_part`].
pub fn parse_part(text: &str) -> Result<PartCode, CodecError> {
    let mut c = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    if !c.eat(b'P') {
        return c.err("expected `P` header");
    }
    let r_at = c.pos;
    let resolution = c.number()?;
    if resolution == 0 || resolution > MAX_RESOLUTION as u64 {
        c.pos = r_at;
        return c.err(format!("resolution outside 1..={MAX_RESOLUTION}"));
    }
    let resolution = resolution as usize;
    let cells = (resolution * resolution) as u64;
    let mut layers = Vec::new();
    while c.pos < c.src.len() {
        if !c.eat(b'|') {
            return c.err("expected `|` between layers");
        }
        let tag_at = c.pos;
        let layer = match c.peek() {
            Some(b'E') => {
                c.pos += 1;
                LayerCode::Empty
            }
            Some(b'F') => {
                c.pos += 1;
                LayerCode::Full
            }
            Some(b'T') => {
                c.pos += 1;
                LayerCode::Template(parse_runs(&mut c, cells)?)
            }
            Some(b'D') => {
                c.pos += 1;
                let k = c.number()?;
                if k > u64::from(u32::MAX) {
                    c.pos = tag_at + 1;
                    return c.err("template index too large");
                }
                LayerCode::Delta {
                    template: k as u32,
                    runs: parse_runs(&mut c, cells)?,
                }
            }
            _ => {
                c.pos = tag_at;
                return c.err("unknown layer tag");
            }
        };
        layers.push(layer);
    }
    Ok(PartCode { resolution, layers })
}

fn parse_runs(c: &mut Cursor<'_>, cells: u64) -> Result<RunList, CodecError> {
    let start = c.pos;
    let mut runs = Vec::new();
    let mut total = 0u64;
    while c.eat(b' ') {
        let at = c.pos;
        let n = c.number()?;
        if n > u64::from(u32::MAX) {
            c.pos = at;
            return c.err("run too long");
        }
        if n == 0 && !runs.is_empty() {
            c.pos = at;
            return c.err("zero-length run after the first");
        }
        total += n;
        if total > cells {
            c.pos = at;
            return c.err(format!("runs exceed {cells} cells"));
        }
        runs.push(n as u32);
    }
    if c.peek().is_some_and(|b| b != b'|') {
        return c.err("expected a run or `|`");
    }
    if runs.is_empty() {
        return c.err("expected at least one run");
    }
    if total != cells {
        c.pos = start;
        return c.err(format!("runs sum to {total}, expected {cells}"));
    }
    Ok(RunList(runs))
}

/// Proxy token count: maximal substrings free of `|` and whitespace.
pub fn token_count(text: &str) -> usize {
    text.split(|ch: char| ch == '|' || ch.is_ascii_whitespace())
        .filter(|s| !s.is_empty())
        .count()
}

/// Baseline: ascending linear indices of occupied voxels, space separated.
pub fn encode_voxel_index_baseline(part: &PartGrid) -> String {
    let mut out = String::new();
    for (n, i) in part.grid.occupancy().iter_ones().enumerate() {
        if n > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{i}");
    }
    out
}

pub fn decode_voxel_index_baseline(text: &str, resolution: usize) -> Result<VoxelGrid, CodecError> {
    let mut grid = VoxelGrid::unit(resolution)?;
    let cells = resolution * resolution * resolution;
    let mut offset = 0usize;
    for tok in text.split(' ') {
        if tok.is_empty() {
            offset += 1;
            continue;
        }
        let i: usize = tok.parse().map_err(|_| CodecError::Parse {
            offset,
            msg: format!("bad index `{tok}`"),
        })?;
        if i >= cells {
            return Err(CodecError::Parse {
                offset,
                msg: format!("index {i} outside the grid"),
            });
        }
        let [x, y, z] = grid.coords(i);
        grid.set(x, y, z, true);
        offset += tok.len() + 1;
    }
    Ok(grid)
}

/// Baseline: the same grammar with every non-trivial layer as a template.
pub fn plain_rle_code(part: &PartGrid) -> PartCode {
    let layers = voxel::slice_z(part)
        .iter()
        .map(|m| {
            if m.bits().none() {
                LayerCode::Empty
            } else if m.bits().all() {
                LayerCode::Full
            } else {
                LayerCode::Template(encode_slice(m))
            }
        })
        .collect();
    PartCode {
        resolution: part.grid.resolution(),
        layers,
    }
}

pub fn encode_plain_rle_baseline(part: &PartGrid) -> String {
    serialize_part(&plain_rle_code(part))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CodeStats {
    pub token_count: usize,
    pub template_count: usize,
    pub delta_count: usize,
    pub empty_count: usize,
    pub full_count: usize,
    pub plain_rle_tokens: usize,
    pub voxel_index_tokens: usize,
}

impl CodeStats {
    /// Statistics for a well-formed code of depth `R`; baselines are
    /// computed from its decoded volume.
    pub fn for_code(code: &PartCode) -> Result<Self, CodecError> {
        let part = decode_part(code, 0)?;
        let mut s = CodeStats {
            token_count: code.token_cost(),
            plain_rle_tokens: plain_rle_code(&part).token_cost(),
            voxel_index_tokens: part.grid.count(),
            ..Default::default()
        };
        for l in &code.layers {
            match l {
                LayerCode::Empty => s.empty_count += 1,
                LayerCode::Full => s.full_count += 1,
                LayerCode::Template(_) => s.template_count += 1,
                LayerCode::Delta { .. } => s.delta_count += 1,
            }
        }
        Ok(s)
    }

    pub fn merge(&mut self, other: &CodeStats) {
        self.token_count += other.token_count;
        self.template_count += other.template_count;
        self.delta_count += other.delta_count;
        self.empty_count += other.empty_count;
        self.full_count += other.full_count;
        self.plain_rle_tokens += other.plain_rle_tokens;
        self.voxel_index_tokens += other.voxel_index_tokens;
    }

    /// Flat `key=value` lines.
    pub fn report(&self) -> String {
        format!(
            "token_count={}\ntemplate_count={}\ndelta_count={}\nempty_count={}\nfull_count={}\n\
             plain_rle_tokens={}\nvoxel_index_tokens={}\ntoken_budget={}\nwithin_budget={}\n",
            self.token_count,
            self.template_count,
            self.delta_count,
            self.empty_count,
            self.full_count,
            self.plain_rle_tokens,
            self.voxel_index_tokens,
            TOKEN_BUDGET,
            self.token_count <= TOKEN_BUDGET
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn first_row_mask(r: usize) -> SliceMask {
        let mut m = SliceMask::empty(r);
        for x in 0..r {
            m.set(x, 0, true);
        }
        m
    }

    fn runs(v: &[u32]) -> RunList {
        RunList::new(v.to_vec()).unwrap()
    }

    #[test]
    fn slice_examples() {
        assert_eq!(encode_slice(&SliceMask::empty(4)).as_slice(), &[16]);
        assert_eq!(encode_slice(&first_row_mask(4)).as_slice(), &[0, 4, 12]);
        assert_eq!(decode_slice(&runs(&[16]), 4).unwrap(), SliceMask::empty(4));
        assert_eq!(decode_slice(&runs(&[0, 16]), 4).unwrap(), SliceMask::full(4));
        assert!(matches!(
            decode_slice(&runs(&[3, 5, 9]), 4),
            Err(CodecError::Runs(_))
        ));
    }

    #[test]
    fn run_list_rejects_interior_zero() {
        assert!(RunList::new(vec![0, 3]).is_ok());
        assert!(RunList::new(vec![3, 0, 2]).is_err());
        assert!(RunList::new(vec![]).is_err());
    }

    #[test]
    fn serialize_examples() {
        let code = PartCode {
            resolution: 4,
            layers: vec![LayerCode::Empty, LayerCode::Empty],
        };
        assert_eq!(serialize_part(&code), "P4|E|E");
        let code = encode_masks(4, &[first_row_mask(4), first_row_mask(4)]);
        assert_eq!(serialize_part(&code), "P4|T 0 4 12|D0 16");
    }

    #[test]
    fn parse_examples() {
        let code = parse_part("P4|E|E|E|E").unwrap();
        assert_eq!(code.resolution, 4);
        assert_eq!(code.layers, vec![LayerCode::Empty; 4]);
        assert_eq!(
            parse_part("P4|X"),
            Err(CodecError::Parse {
                offset: 3,
                msg: "unknown layer tag".into()
            })
        );
    }

    #[test]
    fn parse_rejects_garbage() {
        for bad in [
            "", "Q4", "P", "P0", "P04|E", "P4|E|", "P4|E ", "P4|T", "P4|T 16 ", "P4|T 3 5 9",
            "P4|T 0 0 16", "P4|D 16", "P4|T  16", "P4|E|Ex", "P4||E",
        ] {
            assert!(parse_part(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn token_count_examples() {
        assert_eq!(token_count("P4|E|E"), 3);
        assert_eq!(token_count("P4|T 0 4 12|D0 16"), 7);
        assert_eq!(token_count(""), 0);
    }

    #[test]
    fn decode_layer_examples() {
        let code = PartCode {
            resolution: 4,
            layers: vec![LayerCode::Template(runs(&[0, 4, 12])), LayerCode::Delta {
                template: 0,
                runs: runs(&[16]),
            }],
        };
        let masks = code.decode_layers().unwrap();
        assert_eq!(masks[0], masks[1]);

        let all_empty = PartCode {
            resolution: 4,
            layers: vec![LayerCode::Empty; 4],
        };
        assert!(decode_part(&all_empty, 0).unwrap().grid.is_empty());
    }

    #[test]
    fn dangling_template_names_layer() {
        let code = PartCode {
            resolution: 4,
            layers: vec![
                LayerCode::Template(runs(&[0, 4, 12])),
                LayerCode::Template(runs(&[4, 4, 8])),
                LayerCode::Delta {
                    template: 3,
                    runs: runs(&[16]),
                },
                LayerCode::Empty,
            ],
        };
        match decode_part(&code, 0) {
            Err(CodecError::Malformed { layer, .. }) => assert_eq!(layer, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn run_sum_error_names_layer() {
        let code = PartCode {
            resolution: 2,
            layers: vec![LayerCode::Empty, LayerCode::Template(runs(&[1, 1]))],
        };
        assert!(matches!(
            decode_part(&code, 0),
            Err(CodecError::Malformed { layer: 1, .. })
        ));
    }

    #[test]
    fn wrong_depth_rejected_by_decode_part() {
        let code = parse_part("P4|E|E").unwrap();
        assert!(decode_part(&code, 0).is_err());
        assert_eq!(code.decode_layers().unwrap().len(), 2);
    }

    #[test]
    fn index_baseline_examples() {
        let mut g = VoxelGrid::unit(4).unwrap();
        g.set(0, 0, 0, true);
        let part = PartGrid { part_id: 0, grid: g.clone() };
        assert_eq!(encode_voxel_index_baseline(&part), "0");
        g.set(3, 3, 3, true);
        let part = PartGrid { part_id: 0, grid: g.clone() };
        let text = encode_voxel_index_baseline(&part);
        assert_eq!(text, "0 63");
        assert_eq!(decode_voxel_index_baseline(&text, 4).unwrap(), g);
    }
}
