//! Lattice-valued rough approximations.

mod chain;
mod pl;

pub use chain::{
    inclusion_degree, linguistic_at, linguistic_rough, lvalued_approx, vague_rough, LinguisticOutcome,
    LinguisticResult, LinguisticSpace, ResiduatedChain,
};
pub use pl::{pl_max, pl_min, triangular, z_rough, PlDomain, PiecewiseLinearFn, Triangular, ZNumber};

use crate::error::{check_len, Error, Result};
use crate::foundation::Partition;

const TOL: f64 = 1e-9;

fn unit_ok(x: f64) -> bool {
    x.is_finite() && (-TOL..=1.0 + TOL).contains(&x)
}

fn check_unit(what: &str, x: f64) -> Result<()> {
    if unit_ok(x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} {x} is outside [0,1]")))
    }
}

fn check_square<T>(m: &[Vec<T>], n: usize) -> Result<()> {
    check_len(n, m.len())?;
    m.iter().try_for_each(|row| check_len(n, row.len()))
}

/// Carrier of a bounded De Morgan lattice.
#[derive(Debug, Clone, PartialEq)]
pub enum DegreeDomain {
    /// Finite chain, bottom first.
    Chain(Vec<String>),
    Unit,
    Product(Vec<DegreeDomain>),
    /// Subsets of the atoms, as bitmasks.
    Powerset(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Degree {
    Idx(usize),
    Real(f64),
    Tuple(Vec<Degree>),
    Mask(u64),
}

impl Degree {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Degree::Real(x) => Some(*x),
            _ => None,
        }
    }
}

impl DegreeDomain {
    pub fn boolean() -> Self {
        DegreeDomain::Chain(vec!["0".into(), "1".into()])
    }

    pub fn contains(&self, d: &Degree) -> bool {
        match (self, d) {
            (DegreeDomain::Chain(l), Degree::Idx(i)) => *i < l.len(),
            (DegreeDomain::Unit, Degree::Real(x)) => unit_ok(*x),
            (DegreeDomain::Product(ds), Degree::Tuple(v)) => ds.len() == v.len() && ds.iter().zip(v).all(|(a, b)| a.contains(b)),
            (DegreeDomain::Powerset(atoms), Degree::Mask(m)) => atoms.len() >= 64 || m >> atoms.len() == 0,
            _ => false,
        }
    }

    pub fn check(&self, d: &Degree) -> Result<()> {
        if self.contains(d) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("degree {d:?} is not in the carrier")))
        }
    }

    pub fn bottom(&self) -> Degree {
        match self {
            DegreeDomain::Chain(_) => Degree::Idx(0),
            DegreeDomain::Unit => Degree::Real(0.0),
            DegreeDomain::Product(ds) => Degree::Tuple(ds.iter().map(|d| d.bottom()).collect()),
            DegreeDomain::Powerset(_) => Degree::Mask(0),
        }
    }

    pub fn top(&self) -> Degree {
        self.neg(&self.bottom())
    }

    fn full_mask(atoms: usize) -> u64 {
        if atoms >= 64 {
            u64::MAX
        } else {
            (1u64 << atoms) - 1
        }
    }

    fn zip(&self, a: &Degree, b: &Degree, join: bool) -> Degree {
        match (self, a, b) {
            (DegreeDomain::Chain(_), Degree::Idx(x), Degree::Idx(y)) => Degree::Idx(if join { *x.max(y) } else { *x.min(y) }),
            (DegreeDomain::Unit, Degree::Real(x), Degree::Real(y)) => Degree::Real(if join { x.max(*y) } else { x.min(*y) }),
            (DegreeDomain::Product(ds), Degree::Tuple(u), Degree::Tuple(v)) => {
                Degree::Tuple(ds.iter().zip(u.iter().zip(v)).map(|(d, (p, q))| d.zip(p, q, join)).collect())
            }
            (DegreeDomain::Powerset(_), Degree::Mask(x), Degree::Mask(y)) => Degree::Mask(if join { x | y } else { x & y }),
            _ => panic!("degree outside its carrier: {a:?}, {b:?}"),
        }
    }

    pub fn join(&self, a: &Degree, b: &Degree) -> Degree {
        self.zip(a, b, true)
    }

    pub fn meet(&self, a: &Degree, b: &Degree) -> Degree {
        self.zip(a, b, false)
    }

    pub fn neg(&self, a: &Degree) -> Degree {
        match (self, a) {
            (DegreeDomain::Chain(l), Degree::Idx(i)) => Degree::Idx(l.len() - 1 - i),
            (DegreeDomain::Unit, Degree::Real(x)) => Degree::Real(1.0 - x),
            (DegreeDomain::Product(ds), Degree::Tuple(v)) => Degree::Tuple(ds.iter().zip(v).map(|(d, x)| d.neg(x)).collect()),
            (DegreeDomain::Powerset(atoms), Degree::Mask(m)) => Degree::Mask(!m & Self::full_mask(atoms.len())),
            _ => panic!("degree outside its carrier: {a:?}"),
        }
    }

    pub fn leq(&self, a: &Degree, b: &Degree) -> bool {
        match (self, a, b) {
            (DegreeDomain::Chain(_), Degree::Idx(x), Degree::Idx(y)) => x <= y,
            (DegreeDomain::Unit, Degree::Real(x), Degree::Real(y)) => x <= y,
            (DegreeDomain::Product(ds), Degree::Tuple(u), Degree::Tuple(v)) => ds.iter().zip(u.iter().zip(v)).all(|(d, (p, q))| d.leq(p, q)),
            (DegreeDomain::Powerset(_), Degree::Mask(x), Degree::Mask(y)) => x & !y == 0,
            _ => false,
        }
    }

    fn fold(&self, items: impl Iterator<Item = Degree>, join: bool) -> Degree {
        let unit = if join { self.bottom() } else { self.top() };
        items.fold(unit, |acc, d| self.zip(&acc, &d, join))
    }
}

fn check_set(domain: &DegreeDomain, a: &[Degree]) -> Result<()> {
    a.iter().try_for_each(|d| domain.check(d))
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertainResult {
    pub lower: Vec<Degree>,
    pub upper: Vec<Degree>,
    pub pos: Vec<Degree>,
    pub neg: Vec<Degree>,
    pub bnd: Vec<Degree>,
}

/// Kleene–Dienes lower, meet-join upper, plus the three regions.
pub fn uncertain_approx(domain: &DegreeDomain, rel: &[Vec<Degree>], a: &[Degree]) -> Result<UncertainResult> {
    let n = a.len();
    check_square(rel, n)?;
    check_set(domain, a)?;
    rel.iter().try_for_each(|row| check_set(domain, row))?;
    let lower: Vec<Degree> = (0..n)
        .map(|x| domain.fold((0..n).map(|y| domain.join(&domain.neg(&rel[x][y]), &a[y])), false))
        .collect();
    let upper: Vec<Degree> = (0..n).map(|x| domain.fold((0..n).map(|y| domain.meet(&rel[x][y], &a[y])), true)).collect();
    let neg = upper.iter().map(|u| domain.neg(u)).collect();
    let bnd = upper.iter().zip(&lower).map(|(u, l)| domain.meet(u, &domain.neg(l))).collect();
    Ok(UncertainResult { pos: lower.clone(), lower, upper, neg, bnd })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TNorm {
    Min,
    Product,
}

impl TNorm {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Min => a.min(b),
            TNorm::Product => a * b,
        }
    }

    pub fn conorm(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Min => a.max(b),
            TNorm::Product => a + b - a * b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Implicator {
    KleeneDienes,
    /// `S(1−a, b)` with `S` the conorm dual to the chosen t-norm.
    FromConorm,
}

pub fn fuzzy_rough(rel: &[Vec<f64>], mu: &[f64], tnorm: TNorm, imp: Implicator) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = mu.len();
    check_square(rel, n)?;
    mu.iter().try_for_each(|&x| check_unit("membership", x))?;
    rel.iter().flatten().try_for_each(|&x| check_unit("relation degree", x))?;
    let s = |a: f64, b: f64| match imp {
        Implicator::KleeneDienes => a.max(b),
        Implicator::FromConorm => tnorm.conorm(a, b),
    };
    let lower = (0..n).map(|x| (0..n).map(|y| s(1.0 - rel[x][y], mu[y])).fold(1.0, f64::min)).collect();
    let upper = (0..n).map(|x| (0..n).map(|y| tnorm.apply(rel[x][y], mu[y])).fold(0.0, f64::max)).collect();
    Ok((lower, upper))
}

/// Membership and non-membership, with `μ + γ ≤ 1` entrywise.
#[derive(Debug, Clone, PartialEq)]
pub struct IfSet {
    pub mu: Vec<f64>,
    pub gamma: Vec<f64>,
}

fn check_if_pair(mu: f64, gamma: f64) -> Result<()> {
    check_unit("membership", mu)?;
    check_unit("non-membership", gamma)?;
    if mu + gamma > 1.0 + TOL {
        return Err(Error::Precondition(format!("μ + γ = {} exceeds 1", mu + gamma)));
    }
    Ok(())
}

impl IfSet {
    pub fn new(mu: Vec<f64>, gamma: Vec<f64>) -> Result<Self> {
        check_len(mu.len(), gamma.len())?;
        mu.iter().zip(&gamma).try_for_each(|(&m, &g)| check_if_pair(m, g))?;
        Ok(IfSet { mu, gamma })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IfRelation {
    pub mu: Vec<Vec<f64>>,
    pub gamma: Vec<Vec<f64>>,
}

impl IfRelation {
    pub fn new(mu: Vec<Vec<f64>>, gamma: Vec<Vec<f64>>) -> Result<Self> {
        check_square(&mu, mu.len())?;
        check_square(&gamma, mu.len())?;
        for (r, s) in mu.iter().zip(&gamma) {
            r.iter().zip(s).try_for_each(|(&m, &g)| check_if_pair(m, g))?;
        }
        Ok(IfRelation { mu, gamma })
    }
}

pub fn if_rough(rel: &IfRelation, x: &IfSet) -> Result<(IfSet, IfSet)> {
    let n = x.mu.len();
    check_len(n, rel.mu.len())?;
    let min_over = |f: &dyn Fn(usize) -> f64| (0..n).map(f).fold(1.0, f64::min);
    let max_over = |f: &dyn Fn(usize) -> f64| (0..n).map(f).fold(0.0, f64::max);
    let mut lower = IfSet { mu: vec![], gamma: vec![] };
    let mut upper = IfSet { mu: vec![], gamma: vec![] };
    for u in 0..n {
        lower.mu.push(min_over(&|y| rel.gamma[u][y].max(x.mu[y])));
        lower.gamma.push(max_over(&|y| rel.mu[u][y].min(x.gamma[y])));
        upper.mu.push(max_over(&|y| rel.mu[u][y].min(x.mu[y])));
        upper.gamma.push(min_over(&|y| rel.gamma[u][y].max(x.gamma[y])));
    }
    Ok((lower, upper))
}

/// Blockwise meet and join of a valued set.
pub fn granulewise_lattice(p: &Partition, a: &[Degree], domain: &DegreeDomain) -> Result<(Vec<Degree>, Vec<Degree>)> {
    check_len(p.universe_len(), a.len())?;
    check_set(domain, a)?;
    let per_block = |join: bool| -> Vec<Degree> {
        p.blocks().iter().map(|b| domain.fold(b.iter().map(|y| a[y].clone()), join)).collect()
    };
    let (lo, up) = (per_block(false), per_block(true));
    let n = a.len();
    Ok(((0..n).map(|x| lo[p.block_of(x)].clone()).collect(), (0..n).map(|x| up[p.block_of(x)].clone()).collect()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModResult {
    pub lower: Vec<(f64, Degree)>,
    pub upper: Vec<(f64, Degree)>,
}

/// Scores take min/max over the block; tags take the join on both sides.
pub fn mod_approx(p: &Partition, scores: &[f64], tags: &[Degree], tag_domain: &DegreeDomain) -> Result<ModResult> {
    check_len(scores.len(), tags.len())?;
    scores.iter().try_for_each(|&s| check_unit("score", s))?;
    let unit: Vec<Degree> = scores.iter().map(|&s| Degree::Real(s)).collect();
    let (lo, up) = granulewise_lattice(p, &unit, &DegreeDomain::Unit)?;
    let (_, tag_up) = granulewise_lattice(p, tags, tag_domain)?;
    let num = |d: &Degree| d.as_f64().unwrap_or_default();
    Ok(ModResult {
        lower: lo.iter().zip(&tag_up).map(|(s, t)| (num(s), t.clone())).collect(),
        upper: up.iter().zip(&tag_up).map(|(s, t)| (num(s), t.clone())).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlithogenicData {
    pub values: Vec<String>,
    /// `pdf[x][v]` holds `s` components.
    pub pdf: Vec<Vec<Vec<f64>>>,
    /// `pcf[v][w]` holds `t` components.
    pub pcf: Vec<Vec<Vec<f64>>>,
}

impl PlithogenicData {
    pub fn new(values: Vec<String>, pdf: Vec<Vec<Vec<f64>>>, pcf: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        let m = values.len();
        let s = pdf.first().and_then(|r| r.first()).map_or(0, Vec::len);
        for row in &pdf {
            check_len(m, row.len())?;
            for v in row {
                check_len(s, v.len())?;
                v.iter().try_for_each(|&x| check_unit("appurtenance", x))?;
            }
        }
        check_square(&pcf, m)?;
        let t = pcf.first().and_then(|r| r.first()).map_or(0, Vec::len);
        for v in 0..m {
            for w in 0..m {
                check_len(t, pcf[v][w].len())?;
                pcf[v][w].iter().try_for_each(|&x| check_unit("contradiction", x))?;
                if pcf[v][w] != pcf[w][v] {
                    return Err(Error::Precondition(format!("contradiction between `{}` and `{}` is not symmetric", values[v], values[w])));
                }
            }
            if pcf[v][v].iter().any(|&x| x != 0.0) {
                return Err(Error::Precondition(format!("self-contradiction of `{}` is nonzero", values[v])));
            }
        }
        Ok(PlithogenicData { values, pdf, pcf })
    }
}

pub fn plithogenic_approx(p: &Partition, data: &PlithogenicData) -> Result<(PlithogenicData, PlithogenicData)> {
    let n = data.pdf.len();
    check_len(p.universe_len(), n)?;
    let s = data.pdf.first().and_then(|r| r.first()).map_or(0, Vec::len);
    let domain = DegreeDomain::Product(vec![DegreeDomain::Unit; s]);
    let mut lower = vec![Vec::new(); n];
    let mut upper = vec![Vec::new(); n];
    for v in 0..data.values.len() {
        let col: Vec<Degree> = data.pdf.iter().map(|row| Degree::Tuple(row[v].iter().map(|&x| Degree::Real(x)).collect())).collect();
        let (lo, up) = granulewise_lattice(p, &col, &domain)?;
        let flat = |d: &Degree| match d {
            Degree::Tuple(t) => t.iter().filter_map(Degree::as_f64).collect(),
            _ => Vec::new(),
        };
        for x in 0..n {
            lower[x].push(flat(&lo[x]));
            upper[x].push(flat(&up[x]));
        }
    }
    let wrap = |pdf| PlithogenicData { values: data.values.clone(), pdf, pcf: data.pcf.clone() };
    Ok((wrap(lower), wrap(upper)))
}

/// Truth, indeterminacy, falsity.
pub type Neutrosophic = (f64, f64, f64);

pub fn neutrosophic_approx(p: &Partition, a: &[Neutrosophic]) -> Result<(Vec<Neutrosophic>, Vec<Neutrosophic>)> {
    check_len(p.universe_len(), a.len())?;
    for &(t, i, f) in a {
        check_unit("truth", t)?;
        check_unit("indeterminacy", i)?;
        check_unit("falsity", f)?;
    }
    let mut lower = Vec::with_capacity(a.len());
    let mut upper = Vec::with_capacity(a.len());
    for x in 0..a.len() {
        let b = p.block(x);
        let min = |g: fn(&Neutrosophic) -> f64| b.iter().map(|y| g(&a[y])).fold(f64::INFINITY, f64::min);
        let max = |g: fn(&Neutrosophic) -> f64| b.iter().map(|y| g(&a[y])).fold(f64::NEG_INFINITY, f64::max);
        lower.push((min(|v| v.0), min(|v| v.1), max(|v| v.2)));
        upper.push((max(|v| v.0), max(|v| v.1), min(|v| v.2)));
    }
    Ok((lower, upper))
}
