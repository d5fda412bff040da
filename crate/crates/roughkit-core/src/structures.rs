//! Approximations carried over to topologies, graphs, magmas, matroids,
//! simplicial complexes, finite functors and constant sheaves.

use std::collections::BTreeMap;

use crate::approx::{pawlak, pointwise_approx, ApproximationPair};
use crate::error::{check_len, Error, Result};
use crate::foundation::{Partition, Subset};
use crate::granulation::NeighborhoodOperator;
use crate::hyper::{soft_rough, ParamFamily};
use crate::multiview::IndexedApproximation;

pub const ROUGH_TOPOLOGY_LIMIT: usize = 16;
pub const MATROID_LIMIT: usize = 16;
pub const EXCHANGE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    n: usize,
    opens: Vec<Subset>,
}

impl FiniteTopology {
    /// Duplicate opens are dropped; order of first appearance is kept.
    pub fn new(n: usize, opens: Vec<Subset>) -> Result<Self> {
        let mut kept: Vec<Subset> = Vec::new();
        for o in opens {
            o.check_universe(n)?;
            if !kept.contains(&o) {
                kept.push(o);
            }
        }
        if !kept.contains(&Subset::empty(n)) || !kept.contains(&Subset::full(n)) {
            return Err(Error::Precondition("topology must contain ∅ and the ground set".into()));
        }
        for (i, a) in kept.iter().enumerate() {
            for b in &kept[i + 1..] {
                if !kept.contains(&a.union(b)) || !kept.contains(&a.intersection(b)) {
                    return Err(Error::Precondition(format!(
                        "opens {:?} and {:?} break closure under union/intersection",
                        a.iter().collect::<Vec<_>>(),
                        b.iter().collect::<Vec<_>>()
                    )));
                }
            }
        }
        Ok(FiniteTopology { n, opens: kept })
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn opens(&self) -> &[Subset] {
        &self.opens
    }

    pub fn is_open(&self, o: &Subset) -> bool {
        self.opens.contains(o)
    }

    pub fn interior(&self, a: &Subset) -> Subset {
        self.opens.iter().filter(|o| o.is_subset(a)).fold(Subset::empty(self.n), |acc, o| acc.union(o))
    }

    pub fn closure(&self, a: &Subset) -> Subset {
        self.interior(&a.complement()).complement()
    }
}

pub fn topological_approx(top: &FiniteTopology, y: &Subset) -> Result<ApproximationPair> {
    y.check_universe(top.n)?;
    Ok(ApproximationPair::new("topological", top.interior(y), top.closure(y)))
}

/// The topology whose closed sets are the upper-approximation fixpoints.
#[derive(Debug, Clone)]
pub struct RoughTopology {
    partition: Partition,
    topology: FiniteTopology,
}

pub fn rough_topology(p: &Partition) -> Result<RoughTopology> {
    let k = p.blocks().len();
    if k > ROUGH_TOPOLOGY_LIMIT {
        return Err(Error::Guard(format!("{k} blocks exceeds the limit of {ROUGH_TOPOLOGY_LIMIT}")));
    }
    let n = p.universe_len();
    let opens = (0..1u64 << k)
        .map(|m| {
            p.blocks()
                .iter()
                .enumerate()
                .filter(|(i, _)| m >> i & 1 == 1)
                .fold(Subset::empty(n), |acc, (_, b)| acc.union(b))
        })
        .collect();
    Ok(RoughTopology { partition: p.clone(), topology: FiniteTopology { n, opens } })
}

impl RoughTopology {
    /// `upper(Oᶜ) = Oᶜ`
    pub fn is_open(&self, o: &Subset) -> Result<bool> {
        let c = o.complement();
        Ok(pawlak(&self.partition, &c)?.upper == c)
    }

    pub fn interior(&self, a: &Subset) -> Result<Subset> {
        a.check_universe(self.topology.n)?;
        Ok(self.topology.interior(a))
    }

    pub fn closure(&self, a: &Subset) -> Result<Subset> {
        a.check_universe(self.topology.n)?;
        Ok(self.topology.closure(a))
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }
}

#[derive(Debug, Clone)]
pub struct GraphData {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub edge_partition: Option<Partition>,
    pub vertex_family: Option<ParamFamily>,
    pub edge_family: Option<ParamFamily>,
}

impl GraphData {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for (i, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::UnknownElement(format!("edge {u}-{v} uses an undeclared vertex")));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            if edges[..i].iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u)) {
                return Err(Error::DuplicateElement(format!("edge {u}-{v}")));
            }
        }
        Ok(GraphData { vertices, edges, edge_partition: None, vertex_family: None, edge_family: None })
    }

    pub fn with_edge_partition(mut self, p: Partition) -> Result<Self> {
        check_len(self.edges.len(), p.universe_len())?;
        self.edge_partition = Some(p);
        Ok(self)
    }

    pub fn with_soft_families(mut self, vf: ParamFamily, ef: ParamFamily) -> Result<Self> {
        check_len(self.vertices, vf.universe_len())?;
        check_len(self.edges.len(), ef.universe_len())?;
        self.vertex_family = Some(vf);
        self.edge_family = Some(ef);
        Ok(self)
    }

    /// `E[S]`
    pub fn induced_edges(&self, s: &Subset) -> Subset {
        Subset::from_indices(
            self.edges.len(),
            self.edges.iter().enumerate().filter(|(_, &(u, v))| s.contains(u) && s.contains(v)).map(|(i, _)| i),
        )
    }
}

pub fn rough_graph(g: &GraphData, x_edges: &Subset) -> Result<ApproximationPair> {
    let p = g.edge_partition.as_ref().ok_or_else(|| Error::Precondition("graph has no edge partition".into()))?;
    let pair = pawlak(p, x_edges)?;
    Ok(ApproximationPair::new("rough_graph", pair.lower, pair.upper))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphPart {
    pub vertices: Subset,
    pub edges: Subset,
}

pub fn soft_rough_graph(g: &GraphData, x_vertices: &Subset, y_edges: &Subset) -> Result<(GraphPart, GraphPart)> {
    let (vf, ef) = match (&g.vertex_family, &g.edge_family) {
        (Some(v), Some(e)) => (v, e),
        _ => return Err(Error::Precondition("graph has no vertex/edge soft families".into())),
    };
    let fv = soft_rough(vf, x_vertices)?;
    let ke = soft_rough(ef, y_edges)?;
    let part = |vs: Subset, es: &Subset| {
        let edges = es.intersection(&g.induced_edges(&vs));
        GraphPart { vertices: vs, edges }
    };
    Ok((part(fv.lower, &ke.lower), part(fv.upper, &ke.upper)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagmaTable {
    n: usize,
    table: Vec<Vec<usize>>,
}

impl MagmaTable {
    /// Row-major: `table[a][b] = a * b`.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        for (a, row) in table.iter().enumerate() {
            check_len(n, row.len())?;
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidParameter(format!("row {a} has entry {v} outside the carrier")));
            }
        }
        Ok(MagmaTable { n, table })
    }

    pub fn cyclic(n: usize) -> Self {
        MagmaTable { n, table: (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupReport {
    pub upper: Subset,
    pub nonempty: bool,
    pub closure_in_upper: bool,
    pub associative_on_upper: bool,
    pub identity: Option<usize>,
    /// One witness per member of `G`, or `None` when some member has none.
    pub inverses: Option<Vec<(usize, usize)>>,
    pub is_rough_group: bool,
}

pub fn rough_group_check(m: &MagmaTable, rel: &Partition, g: &Subset) -> Result<GroupReport> {
    check_len(m.n, rel.universe_len())?;
    let upper = pawlak(rel, g)?.upper;
    let up: Vec<usize> = upper.iter().collect();
    let closure_in_upper = g.iter().all(|x| g.iter().all(|y| upper.contains(m.op(x, y))));
    let associative_on_upper =
        up.iter().all(|&a| up.iter().all(|&b| up.iter().all(|&c| m.op(m.op(a, b), c) == m.op(a, m.op(b, c)))));
    let identity = up.iter().copied().find(|&e| g.iter().all(|x| m.op(x, e) == x && m.op(e, x) == x));
    let inverses = identity.and_then(|e| {
        g.iter()
            .map(|x| up.iter().copied().find(|&y| m.op(x, y) == e && m.op(y, x) == e).map(|y| (x, y)))
            .collect::<Option<Vec<_>>>()
    });
    let nonempty = !g.is_empty();
    let is_rough_group = nonempty && closure_in_upper && associative_on_upper && inverses.is_some();
    Ok(GroupReport { upper, nonempty, closure_in_upper, associative_on_upper, identity, inverses, is_rough_group })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupReport {
    pub contained: bool,
    pub group: GroupReport,
    pub subgroup: GroupReport,
    pub is_rough_subgroup: bool,
}

pub fn rough_subgroup_check(m: &MagmaTable, rel: &Partition, g: &Subset, h: &Subset) -> Result<SubgroupReport> {
    let group = rough_group_check(m, rel, g)?;
    let subgroup = rough_group_check(m, rel, h)?;
    let contained = h.is_subset(g);
    let is_rough_subgroup = contained && group.is_rough_group && subgroup.is_rough_group;
    Ok(SubgroupReport { contained, group, subgroup, is_rough_subgroup })
}

/// Independent sets are those whose Pawlak lower approximation stays in `X`.
#[derive(Debug, Clone)]
pub struct RoughMatroid {
    partition: Partition,
    x: Subset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExchangeReport {
    pub holds: bool,
    /// First `(I, J)` with no element of `J \\ I` that extends `I`.
    pub counterexample: Option<(Subset, Subset)>,
}

pub fn rough_matroid(p: &Partition, x_param: &Subset) -> Result<RoughMatroid> {
    x_param.check_universe(p.universe_len())?;
    Ok(RoughMatroid { partition: p.clone(), x: x_param.clone() })
}

impl RoughMatroid {
    fn n(&self) -> usize {
        self.partition.universe_len()
    }

    fn guard(&self, limit: usize) -> Result<()> {
        if self.n() > limit {
            return Err(Error::Guard(format!("|U| = {} exceeds the limit of {limit}", self.n())));
        }
        Ok(())
    }

    pub fn is_independent(&self, i: &Subset) -> Result<bool> {
        Ok(pawlak(&self.partition, i)?.lower.is_subset(&self.x))
    }

    fn indep_table(&self) -> Vec<bool> {
        let n = self.n();
        (0..1u64 << n).map(|m| self.is_independent(&Subset::from_mask(n, m)).expect("sizes match")).collect()
    }

    /// Minimal dependent sets in mask order.
    pub fn circuits(&self) -> Result<Vec<Subset>> {
        self.guard(MATROID_LIMIT)?;
        let n = self.n();
        let ind = self.indep_table();
        Ok((0..1u64 << n)
            .filter(|&m| !ind[m as usize] && (0..n).filter(|b| m >> b & 1 == 1).all(|b| ind[(m & !(1 << b)) as usize]))
            .map(|m| Subset::from_mask(n, m))
            .collect())
    }

    /// `∅` independent and every subset of an independent set independent.
    pub fn independence_system_check(&self) -> Result<bool> {
        self.guard(MATROID_LIMIT)?;
        let n = self.n();
        let ind = self.indep_table();
        Ok(ind[0]
            && (0..1u64 << n)
                .filter(|&m| ind[m as usize])
                .all(|m| (0..n).all(|b| ind[(m & !(1 << b)) as usize])))
    }

    /// Augmentation over pairs with `|J| = |I| + 1`; with downward closure
    /// this is the full axiom.
    pub fn exchange_check(&self) -> Result<ExchangeReport> {
        self.guard(EXCHANGE_LIMIT)?;
        let n = self.n();
        let ind = self.indep_table();
        let sets: Vec<u64> = (0..1u64 << n).filter(|&m| ind[m as usize]).collect();
        for &i in &sets {
            for &j in &sets {
                if j.count_ones() != i.count_ones() + 1 {
                    continue;
                }
                let extra = j & !i;
                if !(0..n).any(|e| extra >> e & 1 == 1 && ind[(i | 1 << e) as usize]) {
                    return Ok(ExchangeReport {
                        holds: false,
                        counterexample: Some((Subset::from_mask(n, i), Subset::from_mask(n, j))),
                    });
                }
            }
        }
        Ok(ExchangeReport { holds: true, counterexample: None })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexData {
    n: usize,
    facets: Vec<Subset>,
}

impl ComplexData {
    pub fn new(n: usize, facets: Vec<Subset>) -> Result<Self> {
        for (i, f) in facets.iter().enumerate() {
            f.check_universe(n)?;
            if f.is_empty() {
                return Err(Error::InvalidParameter(format!("facet {i} is empty")));
            }
            for (j, g) in facets.iter().enumerate() {
                if i != j && f.is_subset(g) {
                    return Err(Error::Precondition(format!("facet {i} lies inside facet {j}")));
                }
            }
        }
        Ok(ComplexData { n, facets })
    }

    pub fn facets(&self) -> &[Subset] {
        &self.facets
    }

    /// Indices of the facets containing `v`.
    pub fn signature(&self, v: usize) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].contains(v)).collect()
    }

    pub fn partition(&self) -> Partition {
        let sigs: Vec<Vec<usize>> = (0..self.n).map(|v| self.signature(v)).collect();
        Partition::from_labels(&sigs).expect("labels cover the universe")
    }
}

pub fn simplicial_rough(c: &ComplexData, x: &Subset) -> Result<ApproximationPair> {
    let pair = pawlak(&c.partition(), x)?;
    Ok(ApproximationPair::new("simplicial", pair.lower, pair.upper))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone)]
pub struct CategoryData {
    pub objects: Vec<String>,
    pub arrows: Vec<Arrow>,
    pub identities: Vec<usize>,
    /// `(g, f) ↦ g∘f` for every composable pair.
    pub compose: BTreeMap<(usize, usize), usize>,
    pub fibers: Vec<usize>,
    pub transports: Vec<Vec<usize>>,
    pub relations: Vec<Partition>,
    pub targets: Vec<Subset>,
}

impl CategoryData {
    /// Checks the category laws; functor laws are reported by
    /// [`functorial_rough`] instead.
    pub fn validate(&self) -> Result<()> {
        let k = self.objects.len();
        check_len(k, self.identities.len())?;
        check_len(k, self.fibers.len())?;
        check_len(k, self.relations.len())?;
        check_len(k, self.targets.len())?;
        check_len(self.arrows.len(), self.transports.len())?;
        let bad = |msg: String| Err(Error::Precondition(msg));
        for a in &self.arrows {
            if a.source >= k || a.target >= k {
                return bad(format!("arrow {} has an unknown endpoint", a.name));
            }
        }
        for (o, &id) in self.identities.iter().enumerate() {
            match self.arrows.get(id) {
                Some(a) if a.source == o && a.target == o => {}
                _ => return bad(format!("identity for {} is not a loop on it", self.objects[o])),
            }
        }
        for (o, (p, t)) in self.relations.iter().zip(&self.targets).enumerate() {
            check_len(self.fibers[o], p.universe_len())?;
            check_len(self.fibers[o], t.universe_len())?;
        }
        for (fi, tr) in self.transports.iter().enumerate() {
            let a = &self.arrows[fi];
            check_len(self.fibers[a.source], tr.len())?;
            if tr.iter().any(|&y| y >= self.fibers[a.target]) {
                return bad(format!("transport along {} leaves its target fiber", a.name));
            }
        }
        let name = |i: usize| &self.arrows[i].name;
        for (f, af) in self.arrows.iter().enumerate() {
            for (g, ag) in self.arrows.iter().enumerate() {
                let key = (g, f);
                if af.target != ag.source {
                    if self.compose.contains_key(&key) {
                        return bad(format!("{}∘{} is defined but not composable", name(g), name(f)));
                    }
                    continue;
                }
                match self.compose.get(&key).and_then(|&h| self.arrows.get(h).map(|a| (h, a))) {
                    Some((_, ah)) if ah.source == af.source && ah.target == ag.target => {}
                    _ => return bad(format!("{}∘{} is missing or has the wrong endpoints", name(g), name(f))),
                }
            }
        }
        for (f, af) in self.arrows.iter().enumerate() {
            if self.compose[&(f, self.identities[af.source])] != f || self.compose[&(self.identities[af.target], f)] != f {
                return bad(format!("identity law fails at {}", name(f)));
            }
        }
        for (&(g, f), &gf) in &self.compose {
            for h in 0..self.arrows.len() {
                if let (Some(&hg), Some(&l)) = (self.compose.get(&(h, g)), self.compose.get(&(h, gf))) {
                    if self.compose[&(hg, f)] != l {
                        return bad(format!("associativity fails at ({}, {}, {})", name(h), name(g), name(f)));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct FunctorialResult {
    pub approximations: IndexedApproximation,
    pub functor_laws_ok: bool,
    pub functor_violations: Vec<String>,
    pub relation_compatible: bool,
    pub incompatible_arrows: Vec<String>,
}

pub fn functorial_rough(cat: &CategoryData) -> Result<FunctorialResult> {
    cat.validate()?;
    let approximations = cat
        .objects
        .iter()
        .enumerate()
        .map(|(o, name)| {
            let p = pawlak(&cat.relations[o], &cat.targets[o])?;
            Ok((name.clone(), ApproximationPair::new("functorial", p.lower, p.upper).with_param("object", name)))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut functor_violations = Vec::new();
    for &id in &cat.identities {
        if cat.transports[id].iter().enumerate().any(|(x, &y)| x != y) {
            functor_violations.push(format!("F({}) is not the identity", cat.arrows[id].name));
        }
    }
    for (&(g, f), &gf) in &cat.compose {
        let (tg, tf) = (&cat.transports[g], &cat.transports[f]);
        if (0..tf.len()).any(|x| cat.transports[gf][x] != tg[tf[x]]) {
            functor_violations.push(format!("F({}∘{}) differs from F({})∘F({})", cat.arrows[g].name, cat.arrows[f].name, cat.arrows[g].name, cat.arrows[f].name));
        }
    }
    let incompatible_arrows: Vec<String> = cat
        .arrows
        .iter()
        .zip(&cat.transports)
        .filter(|(a, t)| {
            let (rx, ry) = (&cat.relations[a.source], &cat.relations[a.target]);
            (0..t.len()).any(|x| (0..t.len()).any(|y| rx.block_of(x) == rx.block_of(y) && ry.block_of(t[x]) != ry.block_of(t[y])))
        })
        .map(|(a, _)| a.name.clone())
        .collect();
    Ok(FunctorialResult {
        approximations,
        functor_laws_ok: functor_violations.is_empty(),
        functor_violations,
        relation_compatible: incompatible_arrows.is_empty(),
        incompatible_arrows,
    })
}

/// Constant sheaf: every nonempty open carries the whole label set and
/// restrictions are identities.
#[derive(Debug, Clone)]
pub struct SheafData {
    pub topology: FiniteTopology,
    pub labels: Vec<String>,
    sections: Vec<(Subset, usize)>,
}

impl SheafData {
    pub fn constant(topology: FiniteTopology, labels: Vec<String>) -> Result<Self> {
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateElement(l.clone()));
            }
        }
        let sections = topology
            .opens
            .iter()
            .filter(|o| !o.is_empty())
            .flat_map(|o| (0..labels.len()).map(move |l| (o.clone(), l)))
            .collect();
        Ok(SheafData { topology, labels, sections })
    }

    /// Nonempty opens in topology order, each with every label.
    pub fn sections(&self) -> &[(Subset, usize)] {
        &self.sections
    }

    pub fn section_index(&self, open: &Subset, label: &str) -> Result<usize> {
        let l = self.labels.iter().position(|x| x == label).ok_or_else(|| Error::UnknownElement(label.into()))?;
        self.sections
            .iter()
            .position(|(o, m)| o == open && *m == l)
            .ok_or_else(|| Error::UnknownElement(format!("section on {:?}", open.iter().collect::<Vec<_>>())))
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        let ((u, a), (v, b)) = (&self.sections[i], &self.sections[j]);
        a == b && !self.topology.interior(&u.intersection(v)).is_empty()
    }
}

pub fn sheaf_rough_constant(s: &SheafData, a_sections: &Subset) -> Result<ApproximationPair> {
    let m = s.sections.len();
    let sets = (0..m).map(|i| Subset::from_indices(m, (0..m).filter(|&j| s.related(i, j)))).collect();
    let op = NeighborhoodOperator::new("sheaf", m, sets)?;
    let pair = pointwise_approx(&op, a_sections)?;
    Ok(ApproximationPair::new("sheaf", pair.lower, pair.upper))
}
