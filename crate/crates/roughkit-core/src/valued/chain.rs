//! Finite chains: Gödel-residuated L-valued operators, linguistic labels,
//! and the vague assignment check.

use crate::approx::ApproximationPair;
use crate::error::{check_len, Error, Result};
use crate::foundation::{Rational, Subset};

/// Chain `0 < 1 < … < len−1` with `⊙ = min` and the Gödel residuum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResiduatedChain {
    pub labels: Vec<String>,
}

impl ResiduatedChain {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidParameter("chain needs at least one degree".into()));
        }
        Ok(ResiduatedChain { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn top(&self) -> usize {
        self.labels.len() - 1
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidParameter(format!("`{label}` is not a chain degree")))
    }

    pub fn product(&self, a: usize, b: usize) -> usize {
        a.min(b)
    }

    pub fn residuum(&self, a: usize, b: usize) -> usize {
        if a <= b {
            self.top()
        } else {
            b
        }
    }

    fn check(&self, what: &str, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{what} degree {v} is outside the chain")))
        }
    }
}

/// Lower and upper L-valued approximation of `q` in the L-universe `u_val`.
/// Relation arguments are read as `R(y, x)`.
pub fn lvalued_approx(chain: &ResiduatedChain, u_val: &[usize], rel: &[Vec<usize>], q: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = u_val.len();
    check_len(n, q.len())?;
    check_len(n, rel.len())?;
    for (x, row) in rel.iter().enumerate() {
        check_len(n, row.len())?;
        for (y, &r) in row.iter().enumerate() {
            chain.check("relation", r)?;
            if r > u_val[x].min(u_val[y]) {
                return Err(Error::Precondition(format!("R({x},{y}) exceeds U({x}) ∧ U({y})")));
            }
        }
    }
    for x in 0..n {
        chain.check("universe", u_val[x])?;
        chain.check("subset", q[x])?;
        if q[x] > u_val[x] {
            return Err(Error::Precondition(format!("Q({x}) exceeds U({x})")));
        }
    }
    let lower = (0..n)
        .map(|x| (0..n).map(|y| chain.product(u_val[x], chain.residuum(rel[y][x], q[y]))).min().unwrap_or(chain.top()))
        .collect();
    let upper = (0..n)
        .map(|x| (0..n).map(|y| chain.product(rel[y][x], chain.residuum(u_val[y], q[y]))).max().unwrap_or(0))
        .collect();
    Ok((lower, upper))
}

/// Concepts and decision as label indices, `0` being the least label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinguisticSpace {
    pub labels: Vec<String>,
    pub concepts: Vec<(String, Vec<usize>)>,
    pub decision: Vec<usize>,
}

impl LinguisticSpace {
    pub fn new(labels: Vec<String>, concepts: Vec<(String, Vec<usize>)>, decision: Vec<usize>) -> Result<Self> {
        if concepts.is_empty() {
            return Err(Error::Precondition("linguistic space needs at least one concept".into()));
        }
        if concepts.len() > 20 {
            return Err(Error::Guard(format!("{} concepts exceed the subset enumeration limit of 20", concepts.len())));
        }
        let n = decision.len();
        for (name, c) in &concepts {
            check_len(n, c.len())?;
            if c.iter().any(|&v| v >= labels.len()) {
                return Err(Error::InvalidParameter(format!("concept `{name}` uses a label outside the chain")));
            }
        }
        if decision.iter().any(|&v| v >= labels.len()) {
            return Err(Error::InvalidParameter("decision uses a label outside the chain".into()));
        }
        Ok(LinguisticSpace { labels, concepts, decision })
    }

    fn fold(&self, mask: u64, join: bool) -> Vec<usize> {
        let n = self.decision.len();
        let picked = self.concepts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| &c.1);
        let init = if join { vec![0; n] } else { vec![self.labels.len() - 1; n] };
        picked.fold(init, |acc, c| acc.iter().zip(c).map(|(&a, &b)| if join { a.max(b) } else { a.min(b) }).collect())
    }

    pub fn meet_of(&self, mask: u64) -> Vec<usize> {
        self.fold(mask, false)
    }

    pub fn join_of(&self, mask: u64) -> Vec<usize> {
        self.fold(mask, true)
    }

    pub fn names(&self, mask: u64) -> Vec<String> {
        self.concepts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| c.0.clone()).collect()
    }

    pub fn mask_of(&self, names: &[&str]) -> Result<u64> {
        names.iter().try_fold(0u64, |m, name| {
            let i = self
                .concepts
                .iter()
                .position(|c| c.0 == *name)
                .ok_or_else(|| Error::UnknownAttribute(name.to_string()))?;
            Ok(m | 1 << i)
        })
    }
}

fn support(v: &[usize]) -> Subset {
    Subset::from_indices(v.len(), (0..v.len()).filter(|&x| v[x] > 0))
}

/// `D(W, V)`: share of `supp(V)` where `V ≤ W`. `None` when `V` has empty
/// support.
pub fn inclusion_degree(w: &[usize], v: &[usize]) -> Option<Rational> {
    let s = support(v);
    if s.is_empty() {
        return None;
    }
    Some(Rational::of(s.iter().filter(|&x| v[x] <= w[x]).count(), s.len()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinguisticOutcome {
    Approximable {
        k_star: Vec<String>,
        l_star: Vec<String>,
        lower: Vec<usize>,
        upper: Vec<usize>,
        gap: usize,
    },
    NotApproximable {
        p_empty: bool,
        q_empty: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticResult {
    pub k_l: Option<Rational>,
    pub k_u: Option<Rational>,
    pub outcome: LinguisticOutcome,
}

fn in_p(space: &LinguisticSpace, mask: u64, k: Rational) -> bool {
    inclusion_degree(&space.decision, &space.meet_of(mask)).is_some_and(|d| d >= k)
}

fn in_q(space: &LinguisticSpace, mask: u64, k: Rational) -> bool {
    inclusion_degree(&space.join_of(mask), &space.decision).is_some_and(|d| d >= k)
}

fn gap(space: &LinguisticSpace, km: u64, lm: u64) -> usize {
    support(&space.join_of(lm)).difference(&support(&space.meet_of(km))).len()
}

fn full(space: &LinguisticSpace) -> u64 {
    (1u64 << space.concepts.len()) - 1
}

/// Exhaustive search over nonempty concept subsets; the first minimizing
/// `(K, L)` in bitmask order wins.
pub fn linguistic_rough(space: &LinguisticSpace, k: Rational) -> Result<LinguisticResult> {
    if k > Rational::one() {
        return Err(Error::InvalidParameter(format!("level {k} exceeds 1")));
    }
    let all = full(space);
    let k_l = inclusion_degree(&space.decision, &space.meet_of(all));
    let k_u = inclusion_degree(&space.join_of(all), &space.decision);
    let p: Vec<u64> = (1..=all).filter(|&m| in_p(space, m, k)).collect();
    let q: Vec<u64> = (1..=all).filter(|&m| in_q(space, m, k)).collect();
    if p.is_empty() || q.is_empty() {
        return Ok(LinguisticResult { k_l, k_u, outcome: LinguisticOutcome::NotApproximable { p_empty: p.is_empty(), q_empty: q.is_empty() } });
    }
    let mut best = (usize::MAX, 0, 0);
    for &km in &p {
        for &lm in &q {
            let g = gap(space, km, lm);
            if g < best.0 {
                best = (g, km, lm);
            }
        }
    }
    let (g, km, lm) = best;
    Ok(LinguisticResult {
        k_l,
        k_u,
        outcome: LinguisticOutcome::Approximable {
            k_star: space.names(km),
            l_star: space.names(lm),
            lower: space.meet_of(km),
            upper: space.join_of(lm),
            gap: g,
        },
    })
}

/// The pair produced by a caller-chosen `(K, L)`, after checking that
/// `K ∈ P(Y)` and `L ∈ Q(Y)`.
pub fn linguistic_at(space: &LinguisticSpace, k: Rational, k_set: &[&str], l_set: &[&str]) -> Result<(Vec<usize>, Vec<usize>, usize)> {
    let (km, lm) = (space.mask_of(k_set)?, space.mask_of(l_set)?);
    if km == 0 || lm == 0 {
        return Err(Error::InvalidParameter("concept subsets must be nonempty".into()));
    }
    if !in_p(space, km, k) {
        return Err(Error::Precondition(format!("{k_set:?} does not reach level {k} for the lower side")));
    }
    if !in_q(space, lm, k) {
        return Err(Error::Precondition(format!("{l_set:?} does not reach level {k} for the upper side")));
    }
    Ok((space.meet_of(km), space.join_of(lm), gap(space, km, lm)))
}

/// Checks the three region constraints and returns `[μ, 1−ν]` per element.
pub fn vague_rough(pair: &ApproximationPair, mu: &[f64], nu: &[f64]) -> Result<Vec<(f64, f64)>> {
    let n = pair.lower.universe_len();
    check_len(n, mu.len())?;
    check_len(n, nu.len())?;
    if !pair.lower.is_subset(&pair.upper) {
        return Err(Error::Precondition("lower approximation is not inside the upper".into()));
    }
    let eq = |a: f64, b: f64| (a - b).abs() <= 1e-9;
    let mut bad = Vec::new();
    for x in 0..n {
        let (m, v) = (mu[x], nu[x]);
        if !(0.0..=1.0).contains(&m) || !(0.0..=1.0).contains(&v) {
            bad.push(format!("element {x}: degrees must lie in [0,1]"));
        } else if pair.lower.contains(x) {
            if !(eq(m, 1.0) && eq(v, 0.0)) {
                bad.push(format!("element {x}: lower region needs [1,1], got [{m},{}]", 1.0 - v));
            }
        } else if !pair.upper.contains(x) {
            if !(eq(m, 0.0) && eq(v, 1.0)) {
                bad.push(format!("element {x}: outside region needs [0,0], got [{m},{}]", 1.0 - v));
            }
        } else if m + v > 1.0 + 1e-9 {
            bad.push(format!("element {x}: boundary needs μ+ν ≤ 1, got {}", m + v));
        }
    }
    if bad.is_empty() {
        Ok(mu.iter().zip(nu).map(|(&m, &v)| (m, 1.0 - v)).collect())
    } else {
        Err(Error::Precondition(bad.join("; ")))
    }
}
