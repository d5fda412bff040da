//! Neighborhood operators and block families.

use crate::error::{check_len, Error, Result};
use crate::foundation::{BinaryRel, Partition, Subset};

/// Per-element neighborhood `N(x)`.
///
/// The domain and the target universe usually coincide; successor
/// neighborhoods of a relation between two universes are the exception.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodOperator {
    target_len: usize,
    sets: Vec<Subset>,
    kind: String,
    reflexive: bool,
}

impl NeighborhoodOperator {
    pub fn new(kind: &str, target_len: usize, sets: Vec<Subset>) -> Result<Self> {
        for s in &sets {
            s.check_universe(target_len)?;
        }
        let reflexive = sets.len() == target_len && sets.iter().enumerate().all(|(x, s)| s.contains(x));
        Ok(NeighborhoodOperator {
            target_len,
            sets,
            kind: kind.to_string(),
            reflexive,
        })
    }

    fn build(kind: &str, n: usize, f: impl Fn(usize) -> Subset) -> Self {
        NeighborhoodOperator::new(kind, n, (0..n).map(f).collect()).expect("sizes agree")
    }

    pub fn domain_len(&self) -> usize {
        self.sets.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn get(&self, x: usize) -> &Subset {
        &self.sets[x]
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn kind(&self) -> &str {
        &self.kind
    }

    pub fn is_reflexive(&self) -> bool {
        self.reflexive
    }

    /// True when `y ∈ N(x) ⇔ x ∈ N(y)` on a shared universe.
    pub fn is_symmetric(&self) -> bool {
        let n = self.sets.len();
        n == self.target_len
            && (0..n).all(|x| (0..n).all(|y| self.sets[x].contains(y) == self.sets[y].contains(x)))
    }

    pub fn from_partition(p: &Partition) -> Self {
        Self::build("from_partition", p.universe_len(), |x| p.block(x).clone())
    }

    /// `N(x) = {y : x R y}`
    pub fn successor(rel: &BinaryRel) -> Self {
        Self::build("successor", rel.universe_len(), |x| rel.successors(x))
    }

    /// Successor sets of a relation from one universe into another.
    pub fn cross(target_len: usize, images: Vec<Subset>) -> Result<Self> {
        NeighborhoodOperator::new("successor", target_len, images)
    }

    /// `[a] = {x : x R a}`
    pub fn directed_granule(rel: &BinaryRel) -> Self {
        Self::build("directed_granule", rel.universe_len(), |a| rel.predecessors(a))
    }

    pub fn preorder_up(rel: &BinaryRel) -> Result<Self> {
        check_preorder(rel)?;
        Ok(Self::build("preorder_up", rel.universe_len(), |x| rel.successors(x)))
    }

    pub fn preorder_down(rel: &BinaryRel) -> Result<Self> {
        check_preorder(rel)?;
        Ok(Self::build("preorder_down", rel.universe_len(), |x| rel.predecessors(x)))
    }

    /// `N_δ(x) = {y : d(x,y) ≤ δ}`
    pub fn metric_ball(data: &MetricSpaceData, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be nonnegative, got {delta}")));
        }
        let n = data.len();
        Ok(Self::build("metric_ball", n, |x| {
            Subset::from_indices(n, (0..n).filter(|&y| data.distance(x, y) <= delta))
        }))
    }

    /// Balls from an explicit symmetric distance matrix.
    pub fn distance_ball(dist: &DistanceMatrix, delta: f64) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(Error::InvalidParameter(format!("radius must be nonnegative, got {delta}")));
        }
        let n = dist.len();
        Ok(Self::build("distance_ball", n, |x| {
            Subset::from_indices(n, (0..n).filter(|&y| dist.get(x, y) <= delta))
        }))
    }

    /// Probe-vector tolerance `‖Φ(x) − Φ(y)‖_p ≤ ε`.
    pub fn descriptive_tolerance(data: &MetricSpaceData, eps: f64) -> Result<Self> {
        let mut op = Self::metric_ball(data, eps)?;
        op.kind = "descriptive_tolerance".into();
        Ok(op)
    }

    /// `N(x) = {y : S(x,y) ≥ τ}`, τ ∈ (0, 1].
    pub fn similarity_threshold(s: &SimilarityMatrix, tau: f64) -> Result<Self> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::InvalidParameter(format!("threshold must lie in (0, 1], got {tau}")));
        }
        let n = s.len();
        Ok(Self::build("similarity_threshold", n, |x| {
            Subset::from_indices(n, (0..n).filter(|&y| s.get(x, y) >= tau))
        }))
    }

    /// Elements whose intervals overlap on every attribute.
    pub fn interval_overlap(data: &IntervalData) -> Self {
        let n = data.len();
        Self::build("interval_overlap", n, |x| {
            Subset::from_indices(n, (0..n).filter(|&y| data.overlaps(x, y)))
        })
    }

    /// Underlying relation `x R y ⇔ y ∈ N(x)`.
    pub fn relation(&self) -> Result<BinaryRel> {
        check_len(self.target_len, self.sets.len())?;
        Ok(BinaryRel::from_fn(self.target_len, |x, y| self.sets[x].contains(y)))
    }
}

fn check_preorder(rel: &BinaryRel) -> Result<()> {
    let p = rel.props();
    if p.reflexive && p.transitive {
        Ok(())
    } else {
        Err(Error::Precondition("relation is not a preorder".into()))
    }
}

/// Feature vectors with a Minkowski exponent; `p = ∞` gives the max norm.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpaceData {
    vectors: Vec<Vec<f64>>,
    p: f64,
}

impl MetricSpaceData {
    pub fn new(vectors: Vec<Vec<f64>>, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter(format!("norm exponent must be ≥ 1, got {p}")));
        }
        if let Some(first) = vectors.first() {
            let d = first.len();
            if let Some(bad) = vectors.iter().position(|v| v.len() != d) {
                return Err(Error::InvalidParameter(format!(
                    "vector {bad} has dimension {}, expected {d}",
                    vectors[bad].len()
                )));
            }
        }
        Ok(MetricSpaceData { vectors, p })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        let diffs = self.vectors[x].iter().zip(&self.vectors[y]).map(|(a, b)| (a - b).abs());
        if self.p.is_infinite() {
            diffs.fold(0.0, f64::max)
        } else {
            diffs.map(|d| d.powf(self.p)).sum::<f64>().powf(1.0 / self.p)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    d: Vec<Vec<f64>>,
}

impl DistanceMatrix {
    pub fn new(d: Vec<Vec<f64>>) -> Result<Self> {
        let n = d.len();
        for (i, row) in d.iter().enumerate() {
            check_len(n, row.len())?;
            if row[i] != 0.0 {
                return Err(Error::Precondition(format!("distance d({i},{i}) must be 0")));
            }
            for j in 0..n {
                if row[j] < 0.0 || row[j] != d[j][i] {
                    return Err(Error::Precondition(format!("distance ({i},{j}) is negative or asymmetric")));
                }
            }
        }
        Ok(DistanceMatrix { d })
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.d[x][y]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    s: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn new(s: Vec<Vec<f64>>) -> Result<Self> {
        let n = s.len();
        for (i, row) in s.iter().enumerate() {
            check_len(n, row.len())?;
            if row[i] != 1.0 {
                return Err(Error::Precondition(format!("similarity S({i},{i}) must be 1")));
            }
            for j in 0..n {
                if !(0.0..=1.0).contains(&row[j]) || row[j] != s[j][i] {
                    return Err(Error::Precondition(format!(
                        "similarity ({i},{j}) is outside [0,1] or asymmetric"
                    )));
                }
            }
        }
        Ok(SimilarityMatrix { s })
    }

    pub fn len(&self) -> usize {
        self.s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.s[x][y]
    }
}

/// One closed interval per (element, attribute).
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalData {
    cells: Vec<Vec<(f64, f64)>>,
}

impl IntervalData {
    pub fn new(cells: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        for (x, row) in cells.iter().enumerate() {
            if let Some(&(l, u)) = row.iter().find(|(l, u)| !(l <= u)) {
                return Err(Error::Precondition(format!("element {x} has interval [{l}, {u}]")));
            }
        }
        Ok(IntervalData { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn overlaps(&self, x: usize, y: usize) -> bool {
        self.cells[x]
            .iter()
            .zip(&self.cells[y])
            .all(|(a, b)| a.0.max(b.0) <= a.1.min(b.1))
    }
}

/// Nonempty, possibly overlapping blocks over a universe.
#[derive(Debug, Clone, PartialEq)]
pub struct GranuleFamily {
    n: usize,
    blocks: Vec<Subset>,
    is_partition: bool,
    is_covering: bool,
}

impl GranuleFamily {
    pub fn new(n: usize, blocks: Vec<Subset>) -> Result<Self> {
        for (i, b) in blocks.iter().enumerate() {
            b.check_universe(n)?;
            if b.is_empty() {
                return Err(Error::Precondition(format!("block {i} is empty")));
            }
        }
        let mut seen = vec![0usize; n];
        for b in &blocks {
            for x in b.iter() {
                seen[x] += 1;
            }
        }
        Ok(GranuleFamily {
            n,
            blocks,
            is_partition: seen.iter().all(|&c| c == 1),
            is_covering: seen.iter().all(|&c| c >= 1),
        })
    }

    pub fn from_index_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        GranuleFamily::new(n, blocks.iter().map(|b| Subset::from_indices(n, b.iter().copied())).collect())
    }

    pub fn from_partition(p: &Partition) -> Self {
        GranuleFamily::new(p.universe_len(), p.blocks().to_vec()).expect("partition blocks are valid")
    }

    /// Images that must partition the universe.
    pub fn strait(n: usize, images: Vec<Subset>) -> Result<Self> {
        let f = GranuleFamily::new(n, images)?;
        if !f.is_partition {
            return Err(Error::Precondition("strait images must partition the universe".into()));
        }
        Ok(f)
    }

    /// `{[a] : a ∈ U}` with `[a] = {x : x R a}`.
    pub fn directed_granules(rel: &BinaryRel) -> Result<Self> {
        let n = rel.universe_len();
        GranuleFamily::new(n, (0..n).map(|a| rel.predecessors(a)).collect())
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn is_partition(&self) -> bool {
        self.is_partition
    }

    pub fn is_covering(&self) -> bool {
        self.is_covering
    }

    pub fn to_partition(&self) -> Result<Partition> {
        Partition::from_blocks(self.n, self.blocks.clone())
    }
}

/// Hard cap on the number of maximal cliques produced.
pub const CLIQUE_LIMIT: usize = 1 << 20;

/// All maximal cliques of the tolerance graph behind `op`, ordered by
/// their sorted member lists.
pub fn maximal_tolerance_classes(op: &NeighborhoodOperator) -> Result<GranuleFamily> {
    if !(op.is_reflexive() && op.is_symmetric()) {
        return Err(Error::Precondition("tolerance classes need a reflexive symmetric relation".into()));
    }
    let n = op.domain_len();
    let adj: Vec<Subset> = (0..n)
        .map(|x| {
            let mut s = op.get(x).clone();
            s.remove(x);
            s
        })
        .collect();
    let mut out = Vec::new();
    bron_kerbosch(&adj, Subset::empty(n), Subset::full(n), Subset::empty(n), &mut out)?;
    out.sort_by_key(|c| c.iter().collect::<Vec<_>>());
    GranuleFamily::new(n, out)
}

fn bron_kerbosch(adj: &[Subset], r: Subset, mut p: Subset, mut x: Subset, out: &mut Vec<Subset>) -> Result<()> {
    if p.is_empty() && x.is_empty() {
        if out.len() >= CLIQUE_LIMIT {
            return Err(Error::Guard(format!("more than {CLIQUE_LIMIT} maximal cliques")));
        }
        out.push(r);
        return Ok(());
    }
    let pivot = p
        .union(&x)
        .iter()
        .max_by_key(|&u| (p.intersection(&adj[u]).len(), std::cmp::Reverse(u)))
        .expect("p ∪ x nonempty");
    let candidates: Vec<usize> = p.difference(&adj[pivot]).iter().collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.insert(v);
        bron_kerbosch(adj, r2, p.intersection(&adj[v]), x.intersection(&adj[v]), out)?;
        p.remove(v);
        x.insert(v);
    }
    Ok(())
}
