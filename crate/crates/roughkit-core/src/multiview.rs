//! Keyed families of approximations: per-relation, per-time, per-node,
//! per-subgraph, per-scale and meta-level.

use std::collections::BTreeMap;

use crate::approx::{pawlak, pointwise_approx, ApproximationPair};
use crate::error::{check_len, Error, Result};
use crate::foundation::{Partition, Subset};
use crate::granulation::{DistanceMatrix, MetricSpaceData, NeighborhoodOperator};

pub type IndexedRelations = Vec<(String, Partition)>;
pub type IndexedApproximation = Vec<(String, ApproximationPair)>;

pub enum Targets<'a> {
    Single(&'a Subset),
    PerKey(&'a [(String, Subset)]),
}

fn shared_len(rels: &IndexedRelations) -> Result<usize> {
    let n = rels.first().ok_or_else(|| Error::Precondition("empty relation family".into()))?.1.universe_len();
    for (i, (k, r)) in rels.iter().enumerate() {
        check_len(n, r.universe_len())?;
        if rels[..i].iter().any(|(o, _)| o == k) {
            return Err(Error::InvalidParameter(format!("duplicate key `{k}`")));
        }
    }
    Ok(n)
}

pub fn multirough(rels: &IndexedRelations, targets: Targets<'_>) -> Result<IndexedApproximation> {
    shared_len(rels)?;
    match targets {
        Targets::Single(x) => rels.iter().map(|(k, r)| Ok((k.clone(), pawlak(r, x)?))).collect(),
        Targets::PerKey(ts) => {
            if let Some((k, _)) = ts.iter().find(|(k, _)| !rels.iter().any(|(r, _)| r == k)) {
                return Err(Error::InvalidParameter(format!("target key `{k}` has no relation")));
            }
            rels.iter()
                .filter_map(|(k, r)| ts.iter().find(|(t, _)| t == k).map(|(_, x)| (k, r, x)))
                .map(|(k, r, x)| Ok((k.clone(), pawlak(r, x)?)))
                .collect()
        }
    }
}

/// Attributes as vertices, each with its own partition.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeGraph {
    pub names: Vec<String>,
    pub partitions: Vec<Partition>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl AttributeGraph {
    fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b))
    }

    pub fn full_subgraph(&self) -> Subgraph {
        Subgraph {
            vertices: (0..self.names.len()).collect(),
            edges: self.edges.clone(),
        }
    }

    /// `R_H`, the meet of the vertex partitions of `h`.
    pub fn combined(&self, h: &Subgraph) -> Result<Partition> {
        let n = self.partitions.first().map_or(0, |p| p.universe_len());
        if h.vertices.is_empty() || h.vertices.iter().any(|&v| v >= self.names.len()) {
            return Err(Error::InvalidParameter("subgraph needs known, nonempty vertices".into()));
        }
        for &(a, b) in &h.edges {
            if !self.has_edge(a, b) || !h.vertices.contains(&a) || !h.vertices.contains(&b) {
                return Err(Error::InvalidParameter(format!("subgraph edge ({a},{b}) is not an induced graph edge")));
            }
        }
        let mut acc = Partition::indiscrete(n);
        for &v in &h.vertices {
            acc = acc.meet(&self.partitions[v])?;
        }
        Ok(acc)
    }
}

pub fn graphic_rough(g: &AttributeGraph, subgraphs: &[(String, Subgraph)], x: &Subset) -> Result<IndexedApproximation> {
    subgraphs
        .iter()
        .map(|(k, h)| Ok((k.clone(), pawlak(&g.combined(h)?, x)?)))
        .collect()
}

/// Element of `T_k`: a subset at depth 0, otherwise one (lower, upper)
/// pair of depth-`k−1` values per key.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nested {
    Leaf(Subset),
    Node(Vec<(Nested, Nested)>),
}

impl Nested {
    /// Shape check for membership in `T_k` over `keys` relations.
    pub fn in_t(&self, k: usize, keys: usize, n: usize) -> bool {
        match (self, k) {
            (Nested::Leaf(s), 0) => s.universe_len() == n,
            (Nested::Node(v), k) if k > 0 => {
                v.len() == keys && v.iter().all(|(a, b)| a.in_t(k - 1, keys, n) && b.in_t(k - 1, keys, n))
            }
            _ => false,
        }
    }
}

pub const MAX_ITER_DEPTH: usize = 3;

pub fn iterated_multirough(rels: &IndexedRelations, x: &Subset, depth: usize) -> Result<Nested> {
    if depth > MAX_ITER_DEPTH {
        return Err(Error::Guard(format!("iteration depth {depth} exceeds {MAX_ITER_DEPTH}")));
    }
    let n = shared_len(rels)?;
    x.check_universe(n)?;
    fn go(rels: &IndexedRelations, y: &Subset, k: usize) -> Result<Nested> {
        if k == 0 {
            return Ok(Nested::Leaf(y.clone()));
        }
        rels.iter()
            .map(|(_, r)| {
                let p = pawlak(r, y)?;
                Ok((go(rels, &p.lower, k - 1)?, go(rels, &p.upper, k - 1)?))
            })
            .collect::<Result<_>>()
            .map(Nested::Node)
    }
    let out = go(rels, x, depth)?;
    debug_assert!(out.in_t(depth, rels.len(), n));
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MgrsMode {
    Optimistic,
    Pessimistic,
}

pub fn mgrs(rels: &IndexedRelations, x: &Subset, mode: MgrsMode) -> Result<ApproximationPair> {
    let n = shared_len(rels)?;
    x.check_universe(n)?;
    let inc = |e: usize| rels.iter().map(move |(_, r)| r.block(e).is_subset(x));
    let hit = |e: usize| rels.iter().map(move |(_, r)| r.block(e).intersects(x));
    let (lower, upper): (Vec<bool>, Vec<bool>) = match mode {
        MgrsMode::Optimistic => ((0..n).map(|e| inc(e).any(|b| b)).collect(), (0..n).map(|e| hit(e).all(|b| b)).collect()),
        MgrsMode::Pessimistic => ((0..n).map(|e| inc(e).all(|b| b)).collect(), (0..n).map(|e| hit(e).any(|b| b)).collect()),
    };
    let tag = if mode == MgrsMode::Optimistic { "mgrs_optimistic" } else { "mgrs_pessimistic" };
    Ok(ApproximationPair::new(tag, Subset::from_bools(lower), Subset::from_bools(upper)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NestingReport {
    pub lowers_shrink: bool,
    pub uppers_grow: bool,
}

impl NestingReport {
    pub fn passed(&self) -> bool {
        self.lowers_shrink && self.uppers_grow
    }
}

/// Chain from finest to coarsest.
pub fn refined_chain(chain: &IndexedRelations, x: &Subset) -> Result<(IndexedApproximation, NestingReport)> {
    shared_len(chain)?;
    for w in chain.windows(2) {
        if !w[0].1.refines(&w[1].1)? {
            return Err(Error::Precondition(format!("`{}` does not refine `{}`", w[0].0, w[1].0)));
        }
    }
    let pairs = multirough(chain, Targets::Single(x))?;
    let report = NestingReport {
        lowers_shrink: pairs.windows(2).all(|w| w[1].1.lower.is_subset(&w[0].1.lower)),
        uppers_grow: pairs.windows(2).all(|w| w[0].1.upper.is_subset(&w[1].1.upper)),
    };
    Ok((pairs, report))
}

#[derive(Debug, Clone, PartialEq)]
pub enum MetricSource {
    Vectors(MetricSpaceData),
    Distances(DistanceMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaleFamily {
    pub metric: MetricSource,
    pub grid: Vec<f64>,
}

pub fn persistent(family: &ScaleFamily, x: &Subset) -> Result<IndexedApproximation> {
    if family.grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::Precondition("scale grid must be sorted ascending".into()));
    }
    family
        .grid
        .iter()
        .map(|&eps| {
            let op = match &family.metric {
                MetricSource::Vectors(d) => NeighborhoodOperator::metric_ball(d, eps)?,
                MetricSource::Distances(d) => NeighborhoodOperator::distance_ball(d, eps)?,
            };
            Ok((eps.to_string(), pointwise_approx(&op, x)?))
        })
        .collect()
}

pub const META_LIMIT: usize = 12;

pub type RoughObject = (Subset, Subset);

/// Distinct `(lower(A), upper(A))` over all `A ⊆ U`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoughObjectSpace {
    pub base: Partition,
    pub objects: Vec<RoughObject>,
}

impl RoughObjectSpace {
    pub fn new(base: Partition) -> Result<Self> {
        let n = base.universe_len();
        if n > META_LIMIT {
            return Err(Error::Guard(format!("universe of {n} exceeds {META_LIMIT} for rough-object enumeration")));
        }
        let mut seen = BTreeMap::new();
        for m in 0..1u64 << n {
            let p = pawlak(&base, &Subset::from_mask(n, m))?;
            seen.entry((p.lower.to_mask(), p.upper.to_mask())).or_insert((p.lower, p.upper));
        }
        Ok(RoughObjectSpace { base, objects: seen.into_values().collect() })
    }

    pub fn contains(&self, r: &RoughObject) -> bool {
        self.objects.contains(r)
    }
}

/// Built-in meta-descriptor: boundary size.
pub fn boundary_cardinality(r: &RoughObject) -> String {
    r.1.difference(&r.0).len().to_string()
}

pub fn metarough(
    space: &RoughObjectSpace,
    c: &[RoughObject],
    descriptor: &dyn Fn(&RoughObject) -> String,
) -> Result<(Vec<RoughObject>, Vec<RoughObject>)> {
    if let Some(bad) = c.iter().find(|r| !space.contains(r)) {
        return Err(Error::Precondition(format!("pair with lower {:?} is not a rough object", bad.0.iter().collect::<Vec<_>>())));
    }
    let tags: Vec<String> = space.objects.iter().map(descriptor).collect();
    let tags = &tags;
    let class = |i: usize| (0..space.objects.len()).filter(move |&j| tags[j] == tags[i]);
    let in_c = |j: usize| c.contains(&space.objects[j]);
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for i in 0..space.objects.len() {
        if class(i).all(in_c) {
            lower.push(space.objects[i].clone());
        }
        if class(i).any(in_c) {
            upper.push(space.objects[i].clone());
        }
    }
    Ok((lower, upper))
}
