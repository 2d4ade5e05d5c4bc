//! QUBO assembly for modularity partitioning, energy evaluation, solution
//! decoding, and the sparse text / JSON interchange formats.
//!
//! Energy convention: `E(x) = x^T Q x + b^T x + c0` with Q symmetric, so an
//! off-diagonal stored entry (i, j, v) with i < j contributes `2 v x_i x_j`.
//! [`build_qubo`] folds all diagonal quadratic terms into the linear vector
//! (x_i^2 = x_i for binary x), which keeps the text format round trips
//! bit-exact.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    modularity_gain_with, Graph, GroupDegrees, ModularityMatrix, Partition,
};

/// Default cap on the number of binary variables (n·k).
pub const DEFAULT_VARIABLE_CAP: usize = 20_000;

/// Variable index of (node i, group c) in the flattened layout.
#[inline]
pub fn idx(i: u32, c: u32, k: u32) -> usize {
    debug_assert!(c < k);
    i as usize * k as usize + c as usize
}

/// Inverse of [`idx`].
#[inline]
pub fn var_node_group(index: usize, k: u32) -> (u32, u32) {
    ((index / k as usize) as u32, (index % k as usize) as u32)
}

/// Penalty weights of the combined objective
/// `-w1 * Q_M + lambda_a * Q_A + lambda_s * Q_S` plus an optional flat
/// per-edge bonus `-2 w3` for co-grouped edge endpoints (off by default).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PenaltyWeights {
    pub w1: f64,
    pub lambda_a: f64,
    pub lambda_s: f64,
    #[serde(default)]
    pub w3: f64,
}

impl PenaltyWeights {
    /// Defaults for a given graph: w1 = 1, lambda_a = 2 max_i d_i / 2m + 1
    /// (dominates any single-node modularity swing), lambda_s = 0.5 / n.
    pub fn defaults_for(g: &Graph) -> PenaltyWeights {
        let d_max = g.degrees().iter().cloned().fold(0.0, f64::max);
        let two_m = g.two_m();
        let lambda_a = if two_m > 0.0 {
            2.0 * d_max / two_m + 1.0
        } else {
            1.0
        };
        PenaltyWeights {
            w1: 1.0,
            lambda_a,
            lambda_s: 0.5 / g.node_count().max(1) as f64,
            w3: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("w1", self.w1),
            ("lambda_a", self.lambda_a),
            ("lambda_s", self.lambda_s),
            ("w3", self.w3),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "penalty weight {name} = {v} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }
}

/// Sparse symmetric QUBO over n·k binary variables with the (node, group)
/// layout of [`idx`].
#[derive(Clone, Debug)]
pub struct QuboProblem {
    n: u32,
    k: u32,
    /// Upper-triangle entries (i <= j), sorted by (i, j), duplicates merged.
    quadratic: Vec<(u32, u32, f64)>,
    linear: Vec<f64>,
    offset: f64,
}

impl QuboProblem {
    pub fn new(
        n: u32,
        k: u32,
        quadratic: Vec<(u32, u32, f64)>,
        linear: Vec<f64>,
        offset: f64,
    ) -> Result<QuboProblem> {
        let dim = n as usize * k as usize;
        if linear.len() != dim {
            return Err(Error::DimensionMismatch {
                got: linear.len(),
                dim,
            });
        }
        if !offset.is_finite() || linear.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "non-finite linear term or offset".into(),
            ));
        }
        let mut entries: Vec<(u32, u32, f64)> = Vec::with_capacity(quadratic.len());
        for (i, j, v) in quadratic {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "non-finite quadratic entry at ({i}, {j})"
                )));
            }
            let (a, b) = (i.min(j), i.max(j));
            if b as usize >= dim {
                return Err(Error::DimensionMismatch {
                    got: b as usize + 1,
                    dim,
                });
            }
            entries.push((a, b, v));
        }
        entries.sort_unstable_by_key(|&(a, b, _)| (a, b));
        entries.dedup_by(|cur, acc| {
            if cur.0 == acc.0 && cur.1 == acc.1 {
                acc.2 += cur.2;
                true
            } else {
                false
            }
        });
        entries.retain(|&(_, _, v)| v != 0.0);
        Ok(QuboProblem {
            n,
            k,
            quadratic: entries,
            linear,
            offset,
        })
    }

    pub fn dim(&self) -> usize {
        self.n as usize * self.k as usize
    }

    /// Layout (n, k) of the variable grid.
    pub fn layout(&self) -> (u32, u32) {
        (self.n, self.k)
    }

    pub fn quadratic(&self) -> &[(u32, u32, f64)] {
        &self.quadratic
    }

    pub fn linear(&self) -> &[f64] {
        &self.linear
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Checked variable index for (node, group) within this layout.
    pub fn var_index(&self, i: u32, c: u32) -> Result<usize> {
        if i >= self.n {
            return Err(Error::NodeOutOfRange {
                node: i,
                n: self.n as usize,
            });
        }
        if c >= self.k {
            return Err(Error::GroupOutOfRange { group: c, k: self.k });
        }
        Ok(idx(i, c, self.k))
    }

    /// Exact energy `x^T Q x + b^T x + offset` of a binary vector.
    pub fn energy(&self, x: &[u8]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                got: x.len(),
                dim: self.dim(),
            });
        }
        if let Some(pos) = x.iter().position(|&b| b > 1) {
            return Err(Error::NonBinaryEntry {
                index: pos,
                value: x[pos],
            });
        }
        let mut e = self.offset;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 1 {
                e += self.linear[i];
            }
        }
        for &(i, j, v) in &self.quadratic {
            if x[i as usize] & x[j as usize] == 1 {
                e += if i == j { v } else { 2.0 * v };
            }
        }
        Ok(e)
    }

    /// Energy of a bit-packed vector (bit i of `bits` = x_i); dim <= 64.
    /// Identical accumulation order to [`Self::energy`].
    pub fn energy_bits(&self, bits: u64) -> f64 {
        debug_assert!(self.dim() <= 64);
        let mut e = self.offset;
        for (i, &b) in self.linear.iter().enumerate() {
            if bits >> i & 1 == 1 {
                e += b;
            }
        }
        for &(i, j, v) in &self.quadratic {
            if bits >> i & 1 == 1 && bits >> j & 1 == 1 {
                e += if i == j { v } else { 2.0 * v };
            }
        }
        e
    }
}

/// Assemble the minimization QUBO for partitioning `g` into `k` groups.
///
/// For any one-hot-valid x the energy equals
/// `-w1 * Q_M(x) + lambda_a * Q_A(x) + lambda_s * Q_S(x)` where Q_M is the
/// modularity of the encoded partition (kept in modularity units via the
/// 1/2m scaling), Q_A the one-hot constraint residual, and Q_S the
/// group-size balance residual with target n/k. Constant terms of the
/// expanded squares live in the offset; diagonal quadratic contributions
/// are folded into the linear vector.
pub fn build_qubo(g: &Graph, k: u32, weights: &PenaltyWeights) -> Result<QuboProblem> {
    build_qubo_capped(g, k, weights, DEFAULT_VARIABLE_CAP)
}

pub fn build_qubo_capped(
    g: &Graph,
    k: u32,
    weights: &PenaltyWeights,
    cap: usize,
) -> Result<QuboProblem> {
    if k < 2 {
        return Err(Error::GroupCountTooSmall { k });
    }
    weights.validate()?;
    let n = g.node_count();
    let dim = n * k as usize;
    if dim > cap {
        return Err(Error::VariableCapExceeded { dim, cap });
    }
    let two_m = g.two_m();
    if two_m <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }

    let t = n as f64 / k as f64;
    let offset = weights.lambda_a * n as f64 + weights.lambda_s * k as f64 * t * t;
    let mut linear = vec![0.0f64; dim];
    let mut quadratic: Vec<(u32, u32, f64)> = Vec::new();

    // Per-variable terms: modularity diagonal (folded), one-hot linear,
    // balance linear.
    for i in 0..n as u32 {
        let d = g.degree(i);
        let a_ii = g.edge_weight(i, i).unwrap_or(0.0);
        let b_ii = (a_ii - d * d / two_m) / two_m;
        let per_var = -weights.w1 * b_ii - weights.lambda_a + weights.lambda_s * (1.0 - 2.0 * t);
        for c in 0..k {
            linear[idx(i, c, k)] = per_var;
        }
    }

    // One-hot pair penalties within each node.
    for i in 0..n as u32 {
        for c1 in 0..k {
            for c2 in c1 + 1..k {
                quadratic.push((idx(i, c1, k) as u32, idx(i, c2, k) as u32, weights.lambda_a));
            }
        }
    }

    // Node-pair terms per group: -w1 * B_ij / 2m (dense through the null
    // model), + lambda_s balance coupling, and the optional w3 edge bonus.
    let mut row = vec![0.0f64; n];
    for i in 0..n as u32 {
        for (j, w) in g.neighbors(i) {
            row[j as usize] = w;
        }
        let d_i = g.degree(i);
        for j in i + 1..n as u32 {
            let a_ij = row[j as usize];
            let b_ij = (a_ij - d_i * g.degree(j) / two_m) / two_m;
            let mut val = -weights.w1 * b_ij + weights.lambda_s;
            if a_ij > 0.0 {
                val -= weights.w3;
            }
            if val != 0.0 {
                for c in 0..k {
                    quadratic.push((idx(i, c, k) as u32, idx(j, c, k) as u32, val));
                }
            }
        }
        for (j, _) in g.neighbors(i) {
            row[j as usize] = 0.0;
        }
    }

    QuboProblem::new(n as u32, k, quadratic, linear, offset)
}

/// How [`decode_assignment`] treats one-hot violations.
pub enum Repair<'a> {
    /// Any violation is an error naming the offending node.
    Strict,
    /// Zero-hot nodes get the best-modularity-gain group, multi-hot nodes
    /// keep the gain-maximizing group among their set bits (ties to the
    /// lowest group id). Needs the graph the QUBO was built from.
    Greedy(&'a Graph),
}

/// Map a binary QUBO vector back to a partition using the (node, group)
/// layout.
pub fn decode_assignment(q: &QuboProblem, x: &[u8], repair: Repair<'_>) -> Result<Partition> {
    let (n, k) = q.layout();
    if x.len() != q.dim() {
        return Err(Error::DimensionMismatch {
            got: x.len(),
            dim: q.dim(),
        });
    }
    if let Some(pos) = x.iter().position(|&b| b > 1) {
        return Err(Error::NonBinaryEntry {
            index: pos,
            value: x[pos],
        });
    }

    let mut assignment = vec![0u32; n as usize];
    let mut violated: Vec<(u32, Vec<u32>)> = Vec::new();
    for i in 0..n {
        let hot: Vec<u32> = (0..k).filter(|&c| x[idx(i, c, k)] == 1).collect();
        match hot.len() {
            1 => assignment[i as usize] = hot[0],
            _ => {
                match repair {
                    Repair::Strict => {
                        return Err(Error::OneHotViolation {
                            node: i,
                            hot: hot.len(),
                        })
                    }
                    Repair::Greedy(_) => {
                        // Provisional placement; fixed up below.
                        assignment[i as usize] = hot.first().copied().unwrap_or(0);
                        violated.push((i, hot));
                    }
                }
            }
        }
    }

    let mut p = Partition::new(assignment, k)?;
    if let Repair::Greedy(g) = repair {
        if g.node_count() != n as usize {
            return Err(Error::PartitionMismatch {
                partition_len: n as usize,
                node_count: g.node_count(),
            });
        }
        let mut gd = GroupDegrees::new(g, &p);
        for (i, hot) in violated {
            let candidates: Vec<u32> = if hot.is_empty() {
                (0..k).collect()
            } else {
                hot
            };
            let cur = p.group_of(i);
            let mut best_group = cur;
            let mut best_gain = 0.0f64;
            for &c in &candidates {
                if c == cur {
                    continue;
                }
                let gain = modularity_gain_with(g, &p, &gd, i, c);
                if gain > best_gain {
                    best_gain = gain;
                    best_group = c;
                }
            }
            if best_group != cur {
                gd.apply_move(g.degree(i), cur, best_group);
                p.set_group(i, best_group);
            }
        }
    }
    Ok(p)
}

/// Direct evaluation of the three objective pieces from a graph and a raw
/// binary vector (Q_M, Q_A, Q_S without their weights). Quadratic in n;
/// used as the from-scratch cross-check for [`build_qubo`].
pub fn objective_terms(g: &Graph, k: u32, x: &[u8]) -> (f64, f64, f64) {
    let n = g.node_count();
    let two_m = g.two_m();
    let b = ModularityMatrix::new(g);

    let mut q_m = 0.0;
    for i in 0..n as u32 {
        for j in 0..n as u32 {
            let mut same = 0.0;
            for c in 0..k {
                same += (x[idx(i, c, k)] * x[idx(j, c, k)]) as f64;
            }
            q_m += b.entry(i, j) / two_m * same;
        }
    }

    let mut q_a = 0.0;
    for i in 0..n as u32 {
        let mut chosen = 0.0;
        for c in 0..k {
            chosen += x[idx(i, c, k)] as f64;
        }
        q_a += (1.0 - chosen) * (1.0 - chosen);
    }

    let t = n as f64 / k as f64;
    let mut q_s = 0.0;
    for c in 0..k {
        let mut size = 0.0;
        for i in 0..n as u32 {
            size += x[idx(i, c, k)] as f64;
        }
        q_s += (size - t) * (size - t);
    }

    (q_m, q_a, q_s)
}

/// Adjacency-structured view of a QUBO for incremental single-flip work:
/// `field_i(y) = Q_ii + b_i + sum_{j != i} (Q_ij + Q_ji) y_j`, so the
/// energy change of flipping bit i is `(1 - 2 x_i) * field_i(x)`.
pub struct Couplings {
    base: Vec<f64>,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    vals: Vec<f64>,
}

impl Couplings {
    pub fn new(q: &QuboProblem) -> Couplings {
        let dim = q.dim();
        let mut base = q.linear().to_vec();
        let mut counts = vec![0usize; dim];
        for &(i, j, v) in q.quadratic() {
            if i == j {
                base[i as usize] += v;
            } else {
                counts[i as usize] += 1;
                counts[j as usize] += 1;
            }
        }
        let mut row_ptr = vec![0usize; dim + 1];
        for i in 0..dim {
            row_ptr[i + 1] = row_ptr[i] + counts[i];
        }
        let mut cols = vec![0u32; row_ptr[dim]];
        let mut vals = vec![0.0f64; row_ptr[dim]];
        let mut cursor = row_ptr.clone();
        for &(i, j, v) in q.quadratic() {
            if i == j {
                continue;
            }
            let w = 2.0 * v; // Q_ij + Q_ji
            cols[cursor[i as usize]] = j;
            vals[cursor[i as usize]] = w;
            cursor[i as usize] += 1;
            cols[cursor[j as usize]] = i;
            vals[cursor[j as usize]] = w;
            cursor[j as usize] += 1;
        }
        Couplings {
            base,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    /// Effective field at i given real-valued occupations y.
    pub fn field(&self, i: usize, y: &[f64]) -> f64 {
        let mut f = self.base[i];
        for e in self.row_ptr[i]..self.row_ptr[i + 1] {
            f += self.vals[e] * y[self.cols[e] as usize];
        }
        f
    }

    /// Fields for a binary vector, all at once.
    pub fn fields_binary(&self, x: &[u8], out: &mut [f64]) {
        for i in 0..self.dim() {
            let mut f = self.base[i];
            for e in self.row_ptr[i]..self.row_ptr[i + 1] {
                if x[self.cols[e] as usize] == 1 {
                    f += self.vals[e];
                }
            }
            out[i] = f;
        }
    }

    /// Energy change of flipping bit i.
    #[inline]
    pub fn flip_delta(&self, x: &[u8], fields: &[f64], i: usize) -> f64 {
        (1.0 - 2.0 * x[i] as f64) * fields[i]
    }

    /// Flip bit i in place and update the neighbor fields.
    pub fn apply_flip(&self, x: &mut [u8], fields: &mut [f64], i: usize) {
        x[i] ^= 1;
        let sign = if x[i] == 1 { 1.0 } else { -1.0 };
        for e in self.row_ptr[i]..self.row_ptr[i + 1] {
            fields[self.cols[e] as usize] += sign * self.vals[e];
        }
    }
}

// ---------------------------------------------------------------------------
// Interchange formats
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct LayoutJson {
    n: u32,
    k: u32,
}

#[derive(Serialize, Deserialize)]
struct QuboJson {
    layout: LayoutJson,
    quadratic: Vec<(u32, u32, f64)>,
    linear: Vec<f64>,
    offset: f64,
}

impl QuboProblem {
    /// Sparse COO text format:
    ///
    /// ```text
    /// c layout <n> <k>
    /// c offset <offset>
    /// p qubo <dim> <nnz>
    /// <i> <j> <v>
    /// ```
    ///
    /// Entries have i <= j and symmetric meaning; diagonal lines carry the
    /// folded value Q_ii + b_i and are read back as linear terms (exact for
    /// binary variables). Values print in shortest round-trip form, so
    /// write -> read -> write reproduces the file byte for byte.
    pub fn write_coo<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        let mut entries: Vec<(u32, u32, f64)> = self.quadratic.clone();
        for (i, &b) in self.linear.iter().enumerate() {
            if b != 0.0 {
                entries.push((i as u32, i as u32, b));
            }
        }
        entries.sort_unstable_by_key(|&(i, j, _)| (i, j));
        entries.dedup_by(|cur, acc| {
            if cur.0 == acc.0 && cur.1 == acc.1 {
                acc.2 += cur.2;
                true
            } else {
                false
            }
        });
        writeln!(w, "c layout {} {}", self.n, self.k)?;
        writeln!(w, "c offset {}", self.offset)?;
        writeln!(w, "p qubo {} {}", self.dim(), entries.len())?;
        for (i, j, v) in entries {
            writeln!(w, "{i} {j} {v}")?;
        }
        Ok(())
    }

    pub fn read_coo<R: BufRead>(reader: R) -> Result<QuboProblem> {
        let mut layout: Option<(u32, u32)> = None;
        let mut offset = 0.0f64;
        let mut dim: Option<usize> = None;
        let mut declared_nnz = 0usize;
        let mut quadratic: Vec<(u32, u32, f64)> = Vec::new();
        let mut linear: Vec<f64> = Vec::new();
        let mut seen = 0usize;

        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let s = line.trim();
            if s.is_empty() {
                continue;
            }
            let fields: Vec<&str> = s.split_whitespace().collect();
            let malformed = |reason: &str| Error::MalformedQuboLine {
                line: lineno,
                reason: reason.to_string(),
            };
            match fields[0] {
                "c" => {
                    if fields.len() == 4 && fields[1] == "layout" {
                        let n = fields[2].parse().map_err(|_| malformed("bad layout n"))?;
                        let k = fields[3].parse().map_err(|_| malformed("bad layout k"))?;
                        layout = Some((n, k));
                    } else if fields.len() == 3 && fields[1] == "offset" {
                        offset = fields[2].parse().map_err(|_| malformed("bad offset"))?;
                    }
                }
                "p" => {
                    if fields.len() != 4 || fields[1] != "qubo" {
                        return Err(malformed("expected `p qubo <dim> <nnz>`"));
                    }
                    let d: usize = fields[2].parse().map_err(|_| malformed("bad dim"))?;
                    declared_nnz = fields[3].parse().map_err(|_| malformed("bad nnz"))?;
                    linear = vec![0.0; d];
                    dim = Some(d);
                }
                _ => {
                    let d = dim.ok_or_else(|| malformed("entry before `p qubo` header"))?;
                    if fields.len() != 3 {
                        return Err(malformed("expected `i j v`"));
                    }
                    let i: u32 = fields[0].parse().map_err(|_| malformed("bad index i"))?;
                    let j: u32 = fields[1].parse().map_err(|_| malformed("bad index j"))?;
                    let v: f64 = fields[2].parse().map_err(|_| malformed("bad value"))?;
                    if i as usize >= d || j as usize >= d {
                        return Err(malformed("index out of range"));
                    }
                    if i == j {
                        linear[i as usize] += v;
                    } else {
                        quadratic.push((i.min(j), i.max(j), v));
                    }
                    seen += 1;
                }
            }
        }
        let dim = dim.ok_or(Error::MalformedQuboLine {
            line: 0,
            reason: "missing `p qubo` header".into(),
        })?;
        if seen != declared_nnz {
            return Err(Error::MalformedQuboLine {
                line: 0,
                reason: format!("header declares {declared_nnz} entries, found {seen}"),
            });
        }
        let (n, k) = layout.unwrap_or((dim as u32, 1));
        if n as usize * k as usize != dim {
            return Err(Error::MalformedQuboLine {
                line: 0,
                reason: format!("layout {n}x{k} does not match dim {dim}"),
            });
        }
        QuboProblem::new(n, k, quadratic, linear, offset)
    }

    pub fn to_json<W: Write>(&self, w: W) -> Result<()> {
        let doc = QuboJson {
            layout: LayoutJson {
                n: self.n,
                k: self.k,
            },
            quadratic: self.quadratic.clone(),
            linear: self.linear.clone(),
            offset: self.offset,
        };
        serde_json::to_writer_pretty(w, &doc)?;
        Ok(())
    }

    pub fn from_json<R: std::io::Read>(r: R) -> Result<QuboProblem> {
        let doc: QuboJson = serde_json::from_reader(r)?;
        QuboProblem::new(
            doc.layout.n,
            doc.layout.k,
            doc.quadratic,
            doc.linear,
            doc.offset,
        )
    }
}
