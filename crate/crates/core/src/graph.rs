//! Weighted undirected graphs in CSR form, partitions, and modularity.
//!
//! The adjacency is stored as matrix entries: an off-diagonal edge {u, v}
//! of weight w appears as A[u][v] = A[v][u] = w, and a self-loop of edge
//! weight w is stored once on the diagonal as A[u][u] = 2w. Under this
//! convention degrees are plain row sums and 2m = sum of degrees, which is
//! what keeps coarsened graphs (where matched pairs fold their edge into a
//! self-loop) on the same modularity scale as the original graph.

use std::collections::HashMap;
use std::io::BufRead;

use rand::Rng;

use crate::error::{Error, Result};

/// Weighted undirected graph. Immutable after construction and safe to
/// share across threads.
#[derive(Clone, Debug)]
pub struct Graph {
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    weights: Vec<f64>,
    degrees: Vec<f64>,
    two_m: f64,
    max_offdiag: f64,
    edge_count: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Build a graph from undirected edges `(u, v, w)`. Duplicate edges
    /// have their weights summed; a self-edge `(u, u, w)` contributes 2w
    /// to the stored diagonal.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let triplets = edges.into_iter().map(|(u, v, w)| {
            if u == v {
                (u, v, 2.0 * w)
            } else {
                (u.min(v), u.max(v), w)
            }
        });
        Self::from_matrix_triplets(node_count, triplets, None)
    }

    /// Build a graph from symmetric adjacency-matrix triplets `(i, j, v)`
    /// with `i <= j` meaning A[i][j] = A[j][i] = v (duplicates summed).
    /// Diagonal triplets are stored as given.
    pub(crate) fn from_matrix_triplets<I>(
        node_count: usize,
        triplets: I,
        labels: Option<Vec<String>>,
    ) -> Result<Graph>
    where
        I: IntoIterator<Item = (u32, u32, f64)>,
    {
        let mut entries: Vec<(u32, u32, f64)> = Vec::new();
        for (u, v, w) in triplets {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) has invalid weight {w}"
                )));
            }
            let (a, b) = (u.min(v), u.max(v));
            if b as usize >= node_count {
                return Err(Error::NodeOutOfRange {
                    node: b,
                    n: node_count,
                });
            }
            entries.push((a, b, w));
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

        let n = node_count;
        let mut row_counts = vec![0usize; n];
        let mut edge_count = 0usize;
        for &(a, b, _) in &entries {
            row_counts[a as usize] += 1;
            if a != b {
                row_counts[b as usize] += 1;
            }
            edge_count += 1;
        }
        let mut row_ptr = vec![0usize; n + 1];
        for i in 0..n {
            row_ptr[i + 1] = row_ptr[i] + row_counts[i];
        }
        let nnz = row_ptr[n];
        let mut cols = vec![0u32; nnz];
        let mut weights = vec![0.0f64; nnz];
        let mut cursor = row_ptr.clone();
        // Entries are sorted by (a, b); mirrored entries land in column
        // order because every row first receives its cols < row (by a
        // ascending) and then its cols >= row (by b ascending).
        for &(a, b, w) in &entries {
            let pa = cursor[a as usize];
            cols[pa] = b;
            weights[pa] = w;
            cursor[a as usize] += 1;
            if a != b {
                let pb = cursor[b as usize];
                cols[pb] = a;
                weights[pb] = w;
                cursor[b as usize] += 1;
            }
        }

        let mut degrees = vec![0.0f64; n];
        let mut max_offdiag = 0.0f64;
        for i in 0..n {
            let mut row_sum = 0.0;
            for e in row_ptr[i]..row_ptr[i + 1] {
                row_sum += weights[e];
                if cols[e] as usize != i && weights[e] > max_offdiag {
                    max_offdiag = weights[e];
                }
            }
            degrees[i] = row_sum;
        }
        let mut two_m = 0.0;
        for &d in &degrees {
            two_m += d;
        }

        Ok(Graph {
            row_ptr,
            cols,
            weights,
            degrees,
            two_m,
            max_offdiag,
            edge_count,
            labels,
        })
    }

    pub fn node_count(&self) -> usize {
        self.row_ptr.len() - 1
    }

    /// Number of stored undirected edges (self-loops count once).
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Total weight m = (1/2) sum_ij A_ij.
    pub fn total_weight(&self) -> f64 {
        self.two_m * 0.5
    }

    /// 2m = sum of degrees, accumulated in node order.
    pub fn two_m(&self) -> f64 {
        self.two_m
    }

    pub fn degree(&self, v: u32) -> f64 {
        self.degrees[v as usize]
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Largest off-diagonal adjacency entry (0 if there are none).
    pub fn max_offdiag_weight(&self) -> f64 {
        self.max_offdiag
    }

    /// Neighbors of `v` (including a possible diagonal entry) in
    /// ascending column order.
    pub fn neighbors(&self, v: u32) -> impl Iterator<Item = (u32, f64)> + '_ {
        let r = self.row_ptr[v as usize]..self.row_ptr[v as usize + 1];
        self.cols[r.clone()]
            .iter()
            .copied()
            .zip(self.weights[r].iter().copied())
    }

    /// Adjacency entry A[u][v], if stored.
    pub fn edge_weight(&self, u: u32, v: u32) -> Option<f64> {
        let r = self.row_ptr[u as usize]..self.row_ptr[u as usize + 1];
        let row = &self.cols[r.clone()];
        row.binary_search(&v)
            .ok()
            .map(|pos| self.weights[r.start + pos])
    }

    /// Iterate stored entries once per unordered pair (i <= j).
    pub fn upper_entries(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        (0..self.node_count() as u32).flat_map(move |i| {
            self.neighbors(i)
                .filter(move |&(j, _)| j >= i)
                .map(move |(j, w)| (i, j, w))
        })
    }

    /// Original input label for a node (falls back to the dense id).
    pub fn label(&self, v: u32) -> String {
        match &self.labels {
            Some(l) => l[v as usize].clone(),
            None => v.to_string(),
        }
    }

    pub fn has_labels(&self) -> bool {
        self.labels.is_some()
    }
}

/// Parse a whitespace-separated edge list (`u v [w]`, default weight 1.0).
/// Lines starting with `#` or `%` and blank lines are skipped. Node ids
/// (integers or arbitrary strings) are interned to dense 0-based ids in
/// first-appearance order; original labels are kept for output.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut ids: HashMap<String, u32> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut edges: Vec<(u32, u32, f64)> = Vec::new();

    let intern = |tok: &str, labels: &mut Vec<String>, ids: &mut HashMap<String, u32>| -> u32 {
        if let Some(&id) = ids.get(tok) {
            return id;
        }
        let id = labels.len() as u32;
        ids.insert(tok.to_string(), id);
        labels.push(tok.to_string());
        id
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = s.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::MalformedLine {
                line: lineno,
                reason: format!("expected `u v [w]`, got {} fields", fields.len()),
            });
        }
        let w = if fields.len() == 3 {
            match fields[2].parse::<f64>() {
                Ok(w) if w.is_finite() => w,
                _ => {
                    return Err(Error::MalformedLine {
                        line: lineno,
                        reason: format!("bad weight `{}`", fields[2]),
                    })
                }
            }
        } else {
            1.0
        };
        if w < 0.0 {
            return Err(Error::NegativeWeight {
                line: lineno,
                weight: w,
            });
        }
        let u = intern(fields[0], &mut labels, &mut ids);
        let v = intern(fields[1], &mut labels, &mut ids);
        edges.push((u, v, w));
    }

    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = labels.len();
    let triplets = edges.into_iter().map(|(u, v, w)| {
        if u == v {
            (u, v, 2.0 * w)
        } else {
            (u.min(v), u.max(v), w)
        }
    });
    Graph::from_matrix_triplets(n, triplets, Some(labels))
}

/// Node-to-group assignment for a fixed group count k (0-based ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    assignment: Vec<u32>,
    k: u32,
    group_sizes: Vec<u32>,
}

impl Partition {
    pub fn new(assignment: Vec<u32>, k: u32) -> Result<Partition> {
        let mut group_sizes = vec![0u32; k as usize];
        for &g in &assignment {
            if g >= k {
                return Err(Error::GroupOutOfRange { group: g, k });
            }
            group_sizes[g as usize] += 1;
        }
        Ok(Partition {
            assignment,
            k,
            group_sizes,
        })
    }

    /// All nodes in group 0.
    pub fn constant(n: usize, k: u32) -> Partition {
        let mut group_sizes = vec![0u32; k as usize];
        group_sizes[0] = n as u32;
        Partition {
            assignment: vec![0; n],
            k,
            group_sizes,
        }
    }

    /// Uniformly random assignment.
    pub fn random<R: Rng>(n: usize, k: u32, rng: &mut R) -> Partition {
        let assignment: Vec<u32> = (0..n).map(|_| rng.random_range(0..k)).collect();
        Partition::new(assignment, k).expect("groups in range by construction")
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn group_of(&self, v: u32) -> u32 {
        self.assignment[v as usize]
    }

    pub fn assignment(&self) -> &[u32] {
        &self.assignment
    }

    pub fn group_sizes(&self) -> &[u32] {
        &self.group_sizes
    }

    /// Move `v` to `group`, keeping the size tallies current.
    pub fn set_group(&mut self, v: u32, group: u32) {
        let old = self.assignment[v as usize];
        if old == group {
            return;
        }
        self.group_sizes[old as usize] -= 1;
        self.group_sizes[group as usize] += 1;
        self.assignment[v as usize] = group;
    }
}

/// Modularity Q = (1/2m) sum_ij (A_ij - d_i d_j / 2m) delta(c_i, c_j),
/// summed over ordered pairs including the diagonal.
///
/// Evaluated as (2m * intra - sum_g D_g^2) / (2m)^2 where intra is the
/// same-group adjacency sum and D_g the group degree sums; the squared
/// sums are folded in descending order so the result is bit-identical
/// under group relabeling, and a single-group partition gives exactly 0.
pub fn modularity(g: &Graph, p: &Partition) -> Result<f64> {
    if p.len() != g.node_count() {
        return Err(Error::PartitionMismatch {
            partition_len: p.len(),
            node_count: g.node_count(),
        });
    }
    if g.two_m() <= 0.0 {
        return Err(Error::ZeroTotalWeight);
    }
    let two_m = g.two_m();
    let n = g.node_count();

    let mut intra = 0.0;
    for v in 0..n as u32 {
        let gv = p.group_of(v);
        let mut row = 0.0;
        for (j, w) in g.neighbors(v) {
            if p.group_of(j) == gv {
                row += w;
            }
        }
        intra += row;
    }

    let mut dsum = vec![0.0f64; p.k() as usize];
    for v in 0..n as u32 {
        dsum[p.group_of(v) as usize] += g.degree(v);
    }
    let mut squares: Vec<f64> = dsum.iter().map(|d| d * d).collect();
    squares.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut null = 0.0;
    for sq in squares {
        null += sq;
    }

    Ok((two_m * intra - null) / (two_m * two_m))
}

/// Per-group degree sums, the O(1)-updatable bookkeeping behind
/// incremental modularity gains.
#[derive(Clone, Debug)]
pub struct GroupDegrees {
    sums: Vec<f64>,
}

impl GroupDegrees {
    pub fn new(g: &Graph, p: &Partition) -> GroupDegrees {
        let mut sums = vec![0.0f64; p.k() as usize];
        for v in 0..g.node_count() as u32 {
            sums[p.group_of(v) as usize] += g.degree(v);
        }
        GroupDegrees { sums }
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }

    pub fn apply_move(&mut self, degree: f64, from: u32, to: u32) {
        if from == to {
            return;
        }
        self.sums[from as usize] -= degree;
        self.sums[to as usize] += degree;
    }
}

/// Modularity change from moving `v` into `target`, in O(deg(v)) given
/// current group degree sums. Equals the difference of two full
/// [`modularity`] evaluations up to floating-point error.
pub fn modularity_gain_with(
    g: &Graph,
    p: &Partition,
    gd: &GroupDegrees,
    v: u32,
    target: u32,
) -> f64 {
    let from = p.group_of(v);
    if from == target {
        return 0.0;
    }
    let two_m = g.two_m();
    let mut w_from = 0.0;
    let mut w_to = 0.0;
    for (j, w) in g.neighbors(v) {
        if j == v {
            continue; // the diagonal stays intra-group under any move
        }
        let c = p.group_of(j);
        if c == from {
            w_from += w;
        } else if c == target {
            w_to += w;
        }
    }
    let d = g.degree(v);
    let (da, db) = (gd.sums[from as usize], gd.sums[target as usize]);
    (2.0 * two_m * (w_to - w_from) - 2.0 * d * (db - da + d)) / (two_m * two_m)
}

/// Standalone variant of [`modularity_gain_with`]; builds the degree-sum
/// bookkeeping on the fly (O(n) setup, O(deg) gain).
pub fn modularity_gain(g: &Graph, p: &Partition, v: u32, target: u32) -> Result<f64> {
    if p.len() != g.node_count() {
        return Err(Error::PartitionMismatch {
            partition_len: p.len(),
            node_count: g.node_count(),
        });
    }
    if (v as usize) >= g.node_count() {
        return Err(Error::NodeOutOfRange {
            node: v,
            n: g.node_count(),
        });
    }
    if target >= p.k() {
        return Err(Error::GroupOutOfRange {
            group: target,
            k: p.k(),
        });
    }
    let gd = GroupDegrees::new(g, p);
    Ok(modularity_gain_with(g, p, &gd, v, target))
}

/// Implicit view of B_ij = A_ij - d_i d_j / 2m. Entries are computed on
/// demand; dense materialization is refused above a size limit.
pub struct ModularityMatrix<'g> {
    g: &'g Graph,
}

impl<'g> ModularityMatrix<'g> {
    /// Default cap for [`Self::to_dense`].
    pub const DENSE_LIMIT: usize = 2000;

    pub fn new(g: &'g Graph) -> ModularityMatrix<'g> {
        ModularityMatrix { g }
    }

    pub fn entry(&self, i: u32, j: u32) -> f64 {
        let a = self.g.edge_weight(i, j).unwrap_or(0.0);
        a - self.g.degree(i) * self.g.degree(j) / self.g.two_m()
    }

    /// Row sum of B (identically zero up to floating-point error).
    pub fn row_sum(&self, i: u32) -> f64 {
        let mut s = 0.0;
        for j in 0..self.g.node_count() as u32 {
            s += self.entry(i, j);
        }
        s
    }

    pub fn to_dense(&self) -> Result<Vec<f64>> {
        self.to_dense_with_limit(Self::DENSE_LIMIT)
    }

    /// Row-major dense B; errors when n exceeds `limit`.
    pub fn to_dense_with_limit(&self, limit: usize) -> Result<Vec<f64>> {
        let n = self.g.node_count();
        if n > limit {
            return Err(Error::DenseLimitExceeded { n, limit });
        }
        let mut out = vec![0.0; n * n];
        for i in 0..n as u32 {
            for j in 0..n as u32 {
                out[i as usize * n + j as usize] = self.entry(i, j);
            }
        }
        Ok(out)
    }
}
