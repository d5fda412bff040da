//! Lower/upper approximation operators and the regions they induce.

use crate::error::{check_len, Error, Result};
use crate::foundation::{Partition, Rational, Subset};
use crate::granulation::{GranuleFamily, NeighborhoodOperator};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximationPair {
    pub lower: Subset,
    pub upper: Subset,
    pub model: String,
    pub params: Vec<(String, String)>,
}

impl ApproximationPair {
    pub fn new(model: &str, lower: Subset, upper: Subset) -> Self {
        ApproximationPair {
            lower,
            upper,
            model: model.to_string(),
            params: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn boundary(&self) -> Subset {
        self.upper.difference(&self.lower)
    }

    /// Same lower and upper sets, ignoring provenance.
    pub fn same_sets(&self, other: &ApproximationPair) -> bool {
        self.lower == other.lower && self.upper == other.upper
    }
}

/// Pawlak pair of `x` under a partition.
pub fn pawlak(p: &Partition, x: &Subset) -> Result<ApproximationPair> {
    x.check_universe(p.universe_len())?;
    let n = p.universe_len();
    let lower = Subset::from_indices(n, (0..n).filter(|&e| p.block(e).is_subset(x)));
    let upper = Subset::from_indices(n, (0..n).filter(|&e| p.block(e).intersects(x)));
    Ok(ApproximationPair::new("pawlak", lower, upper))
}

/// `lower = {x : N(x) ⊆ X}`, `upper = {x : N(x) ∩ X ≠ ∅}`.
pub fn pointwise_approx(op: &NeighborhoodOperator, x: &Subset) -> Result<ApproximationPair> {
    x.check_universe(op.target_len())?;
    let n = op.domain_len();
    let lower = Subset::from_indices(n, (0..n).filter(|&e| op.get(e).is_subset(x)));
    let upper = Subset::from_indices(n, (0..n).filter(|&e| op.get(e).intersects(x)));
    Ok(ApproximationPair::new(op.kind(), lower, upper))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockMode {
    Tight,
    Loose,
    Generated,
}

pub fn block_approx(family: &GranuleFamily, x: &Subset, mode: BlockMode) -> Result<ApproximationPair> {
    let n = family.universe_len();
    x.check_universe(n)?;
    if mode != BlockMode::Generated && !family.is_covering() {
        return Err(Error::Precondition("tight and loose pairs need a covering family".into()));
    }
    let blocks = family.blocks();
    let union_of = |keep: &dyn Fn(&Subset) -> bool| {
        blocks.iter().filter(|b| keep(b)).fold(Subset::empty(n), |acc, b| acc.union(b))
    };
    let every_block_at = |e: usize, test: &dyn Fn(&Subset) -> bool| {
        blocks.iter().filter(|b| b.contains(e)).all(|b| test(b))
    };
    let (lower, upper, tag) = match mode {
        BlockMode::Tight => (
            union_of(&|b| b.is_subset(x)),
            Subset::from_indices(n, (0..n).filter(|&e| every_block_at(e, &|b| b.intersects(x)))),
            "tight",
        ),
        BlockMode::Loose => (
            Subset::from_indices(n, (0..n).filter(|&e| every_block_at(e, &|b| b.is_subset(x)))),
            union_of(&|b| b.intersects(x)),
            "loose",
        ),
        BlockMode::Generated => (union_of(&|b| b.is_subset(x)), union_of(&|b| b.intersects(x)), "generated"),
    };
    Ok(ApproximationPair::new(tag, lower, upper))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeWayRegions {
    pub pos: Subset,
    pub bnd: Subset,
    pub neg: Subset,
}

impl ThreeWayRegions {
    /// Split by a per-element classifier: `Some(true)` positive,
    /// `Some(false)` negative, `None` boundary.
    pub fn classify(n: usize, f: impl Fn(usize) -> Option<bool>) -> Self {
        let mut r = ThreeWayRegions {
            pos: Subset::empty(n),
            bnd: Subset::empty(n),
            neg: Subset::empty(n),
        };
        for e in 0..n {
            match f(e) {
                Some(true) => r.pos.insert(e),
                Some(false) => r.neg.insert(e),
                None => r.bnd.insert(e),
            }
        }
        r
    }

    pub fn is_partition_of_universe(&self) -> bool {
        let n = self.pos.universe_len();
        (0..n).all(|e| {
            [self.pos.contains(e), self.bnd.contains(e), self.neg.contains(e)]
                .iter()
                .filter(|b| **b)
                .count()
                == 1
        })
    }
}

/// Per-element code over `{0, i, 1+i}` as (real, imaginary) bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexCode {
    pub bits: Vec<(bool, bool)>,
}

impl ComplexCode {
    pub fn symbol(&self, e: usize) -> &'static str {
        match self.bits[e] {
            (true, true) => "1+i",
            (false, true) => "i",
            (false, false) => "0",
            (true, false) => unreachable!("real bit without imaginary bit"),
        }
    }

    /// Recover the pair that produced the code.
    pub fn decode(&self) -> (Subset, Subset) {
        let lower = Subset::from_bools(self.bits.iter().map(|b| b.0).collect());
        let upper = Subset::from_bools(self.bits.iter().map(|b| b.1).collect());
        (lower, upper)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionReport {
    pub regions: ThreeWayRegions,
    pub accuracy: Rational,
    pub definable: bool,
    pub code: ComplexCode,
}

pub fn regions(pair: &ApproximationPair) -> Result<RegionReport> {
    let (lo, up) = (&pair.lower, &pair.upper);
    check_len(lo.universe_len(), up.universe_len())?;
    if !lo.is_subset(up) {
        return Err(Error::Precondition("lower approximation is not contained in the upper".into()));
    }
    let accuracy = if up.is_empty() {
        Rational::one()
    } else {
        Rational::of(lo.len(), up.len())
    };
    Ok(RegionReport {
        regions: ThreeWayRegions {
            pos: lo.clone(),
            bnd: up.difference(lo),
            neg: up.complement(),
        },
        accuracy,
        definable: lo == up,
        code: ComplexCode {
            bits: (0..lo.universe_len()).map(|e| (lo.contains(e), up.contains(e))).collect(),
        },
    })
}

pub fn rough_equal(a: &ApproximationPair, b: &ApproximationPair) -> bool {
    a.same_sets(b)
}

#[derive(Debug, Clone, PartialEq)]
pub enum RatioScheme {
    /// Grade-`k` pair: lower keeps blocks with at most `k` outside
    /// elements, upper keeps blocks with more than `k` inside.
    Graded { k: usize },
    Vprs { beta: Rational },
    Probabilistic { alpha: Rational, beta: Rational },
    Local { alpha: Rational, beta: Rational },
    Entropy { alpha: Rational, theta: f64 },
}

/// `|X ∩ B| / |B|`
pub fn block_ratio(block: &Subset, x: &Subset) -> Rational {
    Rational::of(block.intersection(x).len(), block.len())
}

/// Binary entropy of the split `(p, 1 − p)` in nats, `0 ln 0 = 0`.
pub fn split_entropy(p: Rational) -> f64 {
    let h = |q: f64| if q > 0.0 { -q * q.ln() } else { 0.0 };
    let p = p.to_f64();
    h(p) + h(1.0 - p)
}

pub fn ratio_approx(p: &Partition, x: &Subset, scheme: &RatioScheme) -> Result<ApproximationPair> {
    let n = p.universe_len();
    x.check_universe(n)?;
    let half = Rational::new(1, 2)?;
    let one = Rational::one();
    let ratio = |e: usize| block_ratio(p.block(e), x);
    let pick = |f: &dyn Fn(usize) -> bool| Subset::from_indices(n, (0..n).filter(|&e| f(e)));
    let pair = match scheme {
        RatioScheme::Graded { k } => ApproximationPair::new(
            "graded",
            pick(&|e| p.block(e).difference(x).len() <= *k),
            pick(&|e| p.block(e).intersection(x).len() > *k),
        )
        .with_param("k", k),
        RatioScheme::Vprs { beta } => {
            if *beta >= half {
                return Err(Error::InvalidParameter(format!("VPRS beta must lie in [0, 1/2), got {beta}")));
            }
            let need = one.checked_sub(*beta).unwrap();
            let lower_of = |t: &Subset| {
                Subset::from_indices(n, (0..n).filter(|&e| block_ratio(p.block(e), t) >= need))
            };
            let lower = lower_of(x);
            let upper = lower_of(&x.complement()).complement();
            ApproximationPair::new("vprs", lower, upper).with_param("beta", beta)
        }
        RatioScheme::Probabilistic { alpha, beta } => {
            check_thresholds(*alpha, *beta)?;
            ApproximationPair::new("probabilistic", pick(&|e| ratio(e) >= *alpha), pick(&|e| ratio(e) > *beta))
                .with_param("alpha", alpha)
                .with_param("beta", beta)
        }
        RatioScheme::Local { alpha, beta } => {
            check_thresholds(*alpha, *beta)?;
            ApproximationPair::new(
                "local",
                pick(&|e| x.contains(e) && ratio(e) >= *alpha),
                pick(&|e| ratio(e) > *beta),
            )
            .with_param("alpha", alpha)
            .with_param("beta", beta)
        }
        RatioScheme::Entropy { alpha, theta } => {
            if *alpha <= half || *alpha > one {
                return Err(Error::InvalidParameter(format!("entropy alpha must lie in (1/2, 1], got {alpha}")));
            }
            if !(*theta >= 0.0 && *theta <= std::f64::consts::LN_2) {
                return Err(Error::InvalidParameter(format!("entropy theta must lie in [0, ln 2], got {theta}")));
            }
            let lower = pick(&|e| x.contains(e) && ratio(e) >= *alpha && split_entropy(ratio(e)) <= *theta);
            ApproximationPair::new("entropy", lower, pawlak(p, x)?.upper)
                .with_param("alpha", alpha)
                .with_param("theta", theta)
        }
    };
    Ok(pair)
}

fn check_thresholds(alpha: Rational, beta: Rational) -> Result<()> {
    if beta < alpha && alpha <= Rational::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("need 0 ≤ beta < alpha ≤ 1, got alpha {alpha}, beta {beta}")))
    }
}

/// Two-tier (definite / possible) data.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTierData {
    pub n_def: NeighborhoodOperator,
    pub n_pos: NeighborhoodOperator,
    pub x_def: Subset,
    pub x_pos: Subset,
}

impl TwoTierData {
    pub fn new(n_def: NeighborhoodOperator, n_pos: NeighborhoodOperator, x_def: Subset, x_pos: Subset) -> Result<Self> {
        let n = n_def.domain_len();
        check_len(n, n_pos.domain_len())?;
        x_def.check_universe(n_def.target_len())?;
        x_pos.check_universe(n_pos.target_len())?;
        if let Some(e) = (0..n).find(|&e| !n_def.get(e).is_subset(n_pos.get(e))) {
            return Err(Error::Precondition(format!("definite neighborhood of element {e} exceeds the possible one")));
        }
        if !x_def.is_subset(&x_pos) {
            return Err(Error::Precondition("definite target is not inside the possible target".into()));
        }
        Ok(TwoTierData { n_def, n_pos, x_def, x_pos })
    }
}

pub fn two_tier_approx(d: &TwoTierData) -> ApproximationPair {
    let n = d.n_def.domain_len();
    ApproximationPair::new(
        "two_tier",
        Subset::from_indices(n, (0..n).filter(|&e| d.n_def.get(e).is_subset(&d.x_def))),
        Subset::from_indices(n, (0..n).filter(|&e| d.n_pos.get(e).intersects(&d.x_pos))),
    )
}

/// Inconsistency kernels with thresholds `(α, β, γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ContraKernels {
    pub c_r: Vec<Vec<f64>>,
    pub c_u: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

pub fn contra_from_kernels(k: &ContraKernels) -> Result<TwoTierData> {
    let n = k.c_u.len();
    check_len(n, k.c_r.len())?;
    for (i, row) in k.c_r.iter().enumerate() {
        check_len(n, row.len())?;
        if row[i] != 0.0 {
            return Err(Error::Precondition(format!("kernel diagonal at {i} is not 0")));
        }
        for j in 0..n {
            if row[j] != k.c_r[j][i] || !(0.0..=1.0).contains(&row[j]) {
                return Err(Error::Precondition(format!("kernel entry ({i},{j}) is asymmetric or outside [0,1]")));
            }
        }
    }
    if k.c_u.iter().any(|v| !(0.0..=1.0).contains(v)) {
        return Err(Error::Precondition("element kernel outside [0,1]".into()));
    }
    if !(k.beta <= k.gamma) {
        return Err(Error::InvalidParameter(format!("need beta ≤ gamma, got {} > {}", k.beta, k.gamma)));
    }
    let ball: Vec<Subset> = (0..n)
        .map(|x| Subset::from_indices(n, (0..n).filter(|&y| k.c_r[x][y] <= k.alpha)))
        .collect();
    let op = NeighborhoodOperator::new("contra", n, ball)?;
    let x_def = Subset::from_indices(n, (0..n).filter(|&x| k.c_u[x] <= k.beta));
    let x_pos = Subset::from_indices(n, (0..n).filter(|&x| k.c_u[x] <= k.gamma));
    TwoTierData::new(op.clone(), op, x_def, x_pos)
}

/// Hesitant memberships: relation degrees `h_r[x][y]` and element degrees
/// `h_u[x]`, each a finite set of values in [0,1].
///
/// Definite parts keep entries equal to `{1}`, possible parts keep entries
/// containing 1.
pub fn hesitant_two_tier(h_r: &[Vec<Vec<f64>>], h_u: &[Vec<f64>]) -> Result<TwoTierData> {
    let n = h_u.len();
    check_len(n, h_r.len())?;
    let definite = |h: &[f64]| !h.is_empty() && h.iter().all(|&v| v == 1.0);
    let possible = |h: &[f64]| h.contains(&1.0);
    for (x, row) in h_r.iter().enumerate() {
        check_len(n, row.len())?;
        if !definite(&row[x]) {
            return Err(Error::Precondition(format!("hesitant relation is not definitely reflexive at {x}")));
        }
        if row.iter().flatten().chain(h_u.iter().flatten()).any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Precondition("hesitant degree outside [0,1]".into()));
        }
    }
    let tier = |keep: &dyn Fn(&[f64]) -> bool| -> Vec<Subset> {
        (0..n).map(|x| Subset::from_indices(n, (0..n).filter(|&y| keep(&h_r[x][y])))).collect()
    };
    TwoTierData::new(
        NeighborhoodOperator::new("hesitant_def", n, tier(&definite))?,
        NeighborhoodOperator::new("hesitant_pos", n, tier(&possible))?,
        Subset::from_indices(n, (0..n).filter(|&x| definite(&h_u[x]))),
        Subset::from_indices(n, (0..n).filter(|&x| possible(&h_u[x]))),
    )
}

/// Pawlak lowers composed in order; upper by duality.
pub fn sequential_approx(relations: &[Partition], x: &Subset) -> Result<ApproximationPair> {
    let first = relations.first().ok_or_else(|| Error::Precondition("empty relation sequence".into()))?;
    let n = first.universe_len();
    x.check_universe(n)?;
    for r in relations {
        check_len(n, r.universe_len())?;
    }
    let seq_lower = |t: &Subset| -> Result<Subset> {
        let mut cur = t.clone();
        for r in relations {
            cur = pawlak(r, &cur)?.lower;
        }
        Ok(cur)
    };
    let lower = seq_lower(x)?;
    let upper = seq_lower(&x.complement())?.complement();
    Ok(ApproximationPair::new("sequential", lower, upper))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferResult {
    pub x_f: Subset,
    pub x_circ: Subset,
    pub pair: ApproximationPair,
}

/// `f[u] = Some(v)` when `f(u) = v` is defined.
pub fn s_transfer_approx(p: &Partition, f: &[Option<usize>], x: &Subset) -> Result<TransferResult> {
    let n = p.universe_len();
    x.check_universe(n)?;
    check_len(n, f.len())?;
    if let Some(v) = f.iter().flatten().find(|&&v| v >= n) {
        return Err(Error::Precondition(format!("transfer image {v} outside the universe")));
    }
    let x_f = Subset::from_indices(n, (0..n).filter(|&u| !x.contains(u) && f[u].is_some_and(|v| x.contains(v))));
    let x_circ = x.union(&x_f);
    let mut pair = pawlak(p, &x_circ)?;
    pair.model = "s_transfer".into();
    Ok(TransferResult { x_f, x_circ, pair })
}

/// `{x : p(x) ≥ 1 − η}` on both probability maps.
pub fn dp_robust(p_lower: &[Rational], p_upper: &[Rational], eta: Rational) -> Result<ApproximationPair> {
    check_len(p_lower.len(), p_upper.len())?;
    if eta.is_zero() || eta >= Rational::one() {
        return Err(Error::InvalidParameter(format!("eta must lie in (0, 1), got {eta}")));
    }
    if let Some(e) = (0..p_lower.len()).find(|&e| p_lower[e] > p_upper[e] || p_upper[e] > Rational::one()) {
        return Err(Error::Precondition(format!("probabilities at element {e} violate p_lower ≤ p_upper ≤ 1")));
    }
    let need = eta.one_minus().unwrap();
    let pick = |p: &[Rational]| Subset::from_indices(p.len(), (0..p.len()).filter(|&e| p[e] >= need));
    Ok(ApproximationPair::new("dp_robust", pick(p_lower), pick(p_upper)).with_param("eta", eta))
}

/// Estimate membership probabilities by thresholding Laplace-noised counts:
/// the share of trials in which `count + noise ≥ threshold`.
pub fn monte_carlo_membership<R: rand::Rng>(
    counts: &[f64],
    scale: f64,
    threshold: f64,
    trials: usize,
    rng: &mut R,
) -> Result<Vec<Rational>> {
    if trials == 0 || !(scale > 0.0) {
        return Err(Error::InvalidParameter("need trials > 0 and a positive noise scale".into()));
    }
    Ok(counts
        .iter()
        .map(|&c| {
            let hits = (0..trials)
                .filter(|_| {
                    let u: f64 = rng.gen_range(-0.5..0.5);
                    let noise = -scale * u.signum() * (1.0 - 2.0 * u.abs()).ln();
                    c + noise >= threshold
                })
                .count();
            Rational::of(hits, trials)
        })
        .collect())
}

/// Lower/upper parts of a weak rough set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakRoughSet {
    pub a_lower: Subset,
    pub a_upper: Subset,
}

impl WeakRoughSet {
    pub fn new(a_lower: Subset, a_upper: Subset) -> Result<Self> {
        check_len(a_lower.universe_len(), a_upper.universe_len())?;
        if !a_lower.is_subset(&a_upper) {
            return Err(Error::Precondition("weak rough lower part exceeds the upper".into()));
        }
        Ok(WeakRoughSet { a_lower, a_upper })
    }

    pub fn from_pair(p: &ApproximationPair) -> Result<Self> {
        WeakRoughSet::new(p.lower.clone(), p.upper.clone())
    }

    pub fn union(&self, b: &WeakRoughSet) -> Result<WeakRoughSet> {
        self.same_universe(b)?;
        WeakRoughSet::new(self.a_lower.union(&b.a_lower), self.a_upper.union(&b.a_upper))
    }

    pub fn intersection(&self, b: &WeakRoughSet) -> Result<WeakRoughSet> {
        self.same_universe(b)?;
        WeakRoughSet::new(self.a_lower.intersection(&b.a_lower), self.a_upper.intersection(&b.a_upper))
    }

    pub fn complement(&self) -> WeakRoughSet {
        WeakRoughSet {
            a_lower: self.a_upper.complement(),
            a_upper: self.a_lower.complement(),
        }
    }

    pub fn leq(&self, b: &WeakRoughSet) -> Result<bool> {
        self.same_universe(b)?;
        Ok(self.a_lower.is_subset(&b.a_lower) && self.a_upper.is_subset(&b.a_upper))
    }

    fn same_universe(&self, b: &WeakRoughSet) -> Result<()> {
        check_len(self.a_lower.universe_len(), b.a_lower.universe_len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::foundation::{BinaryRel, Universe};
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn idx(n: usize, v: &[usize]) -> Subset {
        Subset::from_indices(n, v.iter().copied())
    }

    fn blocks(n: usize, b: &[&[usize]]) -> Partition {
        Partition::from_index_blocks(n, &b.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triage_pair_and_regions() {
        let p = blocks(6, &[&[0, 1], &[2, 3], &[4, 5]]);
        let pair = pawlak(&p, &idx(6, &[0, 2, 3])).unwrap();
        assert_eq!(pair.lower, idx(6, &[2, 3]));
        assert_eq!(pair.upper, idx(6, &[0, 1, 2, 3]));
        let rep = regions(&pair).unwrap();
        assert_eq!(rep.regions.bnd, idx(6, &[0, 1]));
        assert_eq!(rep.regions.neg, idx(6, &[4, 5]));
        assert_eq!(rep.accuracy, r("1/2"));
        assert!(!rep.definable);
    }

    #[test]
    fn cross_universe_successors() {
        let consumers = Universe::new(["Alice", "Bob", "Carol", "Dan"]).unwrap();
        let products = Universe::new(["p1", "p2", "p3"]).unwrap();
        let img = |v: &[&str]| products.subset(v).unwrap();
        let op = NeighborhoodOperator::cross(3, vec![img(&["p1", "p2"]), img(&["p2", "p3"]), img(&["p3"]), img(&["p2"])]).unwrap();
        let pair = pointwise_approx(&op, &img(&["p1", "p2"])).unwrap();
        assert_eq!(consumers.names(&pair.lower), vec!["Alice", "Dan"]);
        assert_eq!(consumers.names(&pair.upper), vec!["Alice", "Bob", "Dan"]);
    }

    #[test]
    fn preorder_literal_rule() {
        let rel = BinaryRel::from_fn(5, |x, y| x <= y);
        let y = idx(5, &[3, 4]);
        let up = pointwise_approx(&NeighborhoodOperator::preorder_up(&rel).unwrap(), &y).unwrap();
        assert_eq!(up.lower, idx(5, &[3, 4]));
        // every up-set reaches the top level
        assert_eq!(up.upper, Subset::full(5));
        let down = pointwise_approx(&NeighborhoodOperator::preorder_down(&rel).unwrap(), &y).unwrap();
        assert!(down.lower.is_empty());
        assert_eq!(down.upper, idx(5, &[3, 4]));
    }

    #[test]
    fn empty_target() {
        let op = NeighborhoodOperator::from_partition(&Partition::discrete(3));
        let pair = pointwise_approx(&op, &Subset::empty(3)).unwrap();
        assert!(pair.lower.is_empty() && pair.upper.is_empty());
        assert_eq!(regions(&pair).unwrap().accuracy, Rational::one());
    }

    #[test]
    fn covering_modes() {
        let f = GranuleFamily::from_index_blocks(6, &[vec![0, 1, 2], vec![2, 3], vec![3, 4], vec![4], vec![3, 5]]).unwrap();
        let x = idx(6, &[3, 4]);
        let t = block_approx(&f, &x, BlockMode::Tight).unwrap();
        assert_eq!((t.lower, t.upper), (idx(6, &[3, 4]), idx(6, &[3, 4, 5])));
        let l = block_approx(&f, &x, BlockMode::Loose).unwrap();
        assert_eq!((l.lower, l.upper), (idx(6, &[4]), idx(6, &[2, 3, 4, 5])));
        let partial = GranuleFamily::from_index_blocks(3, &[vec![0]]).unwrap();
        assert!(block_approx(&partial, &idx(3, &[0]), BlockMode::Tight).is_err());
        assert!(block_approx(&partial, &idx(3, &[0]), BlockMode::Generated).is_ok());
    }

    #[test]
    fn complex_code_example() {
        let p = blocks(7, &[&[0, 1], &[2, 3, 4], &[5], &[6]]);
        let rep = regions(&pawlak(&p, &idx(7, &[1, 3, 5])).unwrap()).unwrap();
        let syms: Vec<&str> = (0..7).map(|e| rep.code.symbol(e)).collect();
        assert_eq!(syms, vec!["i", "i", "i", "i", "i", "1+i", "0"]);
    }

    #[test]
    fn lower_outside_upper_rejected() {
        let bad = ApproximationPair::new("x", idx(2, &[0]), idx(2, &[1]));
        assert!(regions(&bad).is_err());
    }

    #[test]
    fn ratio_examples() {
        let p = blocks(9, &[&[0, 1, 2], &[3, 4, 5, 6], &[7, 8]]);
        let g = ratio_approx(&p, &idx(9, &[0, 1, 2, 3, 4]), &RatioScheme::Graded { k: 1 }).unwrap();
        assert_eq!((g.lower, g.upper), (idx(9, &[0, 1, 2]), idx(9, &[0, 1, 2, 3, 4, 5, 6])));

        let p = blocks(10, &[&[0, 1, 2, 3, 4], &[5, 6, 7], &[8, 9]]);
        let v = ratio_approx(&p, &idx(10, &[0, 1, 2, 3, 8]), &RatioScheme::Vprs { beta: r("1/5") }).unwrap();
        let rg = regions(&v).unwrap().regions;
        assert_eq!(rg.pos, idx(10, &[0, 1, 2, 3, 4]));
        assert_eq!(rg.neg, idx(10, &[5, 6, 7]));
        assert_eq!(rg.bnd, idx(10, &[8, 9]));
        assert!(ratio_approx(&p, &idx(10, &[0]), &RatioScheme::Vprs { beta: r("1/2") }).is_err());
    }

    #[test]
    fn probabilistic_and_local_examples() {
        let p = blocks(12, &[&[0, 1, 2, 3], &[4, 5, 6, 7, 8], &[9, 10, 11]]);
        let a = idx(12, &[0, 1, 2, 3, 4, 5, 6]);
        let pr = ratio_approx(&p, &a, &RatioScheme::Probabilistic { alpha: r("4/5"), beta: r("3/10") }).unwrap();
        assert_eq!(pr.lower, idx(12, &[0, 1, 2, 3]));
        assert_eq!(pr.upper, idx(12, &[0, 1, 2, 3, 4, 5, 6, 7, 8]));

        let p = blocks(8, &[&[0, 1, 2, 3], &[4, 5], &[6, 7]]);
        let lc = ratio_approx(&p, &idx(8, &[0, 1, 2, 4]), &RatioScheme::Local { alpha: r("3/4"), beta: r("1/4") }).unwrap();
        assert_eq!(lc.lower, idx(8, &[0, 1, 2]));
        assert_eq!(lc.upper, idx(8, &[0, 1, 2, 3, 4, 5]));
        assert_eq!(lc.boundary(), idx(8, &[3, 4, 5]));
        assert!(ratio_approx(&p, &idx(8, &[0]), &RatioScheme::Local { alpha: r("1/4"), beta: r("1/4") }).is_err());
    }

    #[test]
    fn entropy_example() {
        let p = blocks(10, &[&[0, 1, 2, 3, 4], &[5, 6, 7, 8, 9]]);
        let x = idx(10, &[0, 1, 2, 3, 5]);
        let e = ratio_approx(&p, &x, &RatioScheme::Entropy { alpha: r("0.75"), theta: 0.55 }).unwrap();
        assert_eq!(e.lower, idx(10, &[0, 1, 2, 3]));
        assert_eq!(e.upper, Subset::full(10));
        let h = split_entropy(r("4/5"));
        assert!((h - 0.5004).abs() < 1e-3);
        assert!((h - (-0.8f64 * 0.8f64.ln() - 0.2 * 0.2f64.ln())).abs() < 1e-12);
        assert!(ratio_approx(&p, &x, &RatioScheme::Entropy { alpha: r("1/2"), theta: 0.1 }).is_err());
        assert!(ratio_approx(&p, &x, &RatioScheme::Entropy { alpha: r("1"), theta: 0.7 }).is_err());
    }

    #[test]
    fn indeterminate_example() {
        let dp = blocks(6, &[&[0, 1], &[2, 3], &[4], &[5]]);
        let pp = blocks(6, &[&[0, 1, 4], &[2, 3, 5]]);
        let d = TwoTierData::new(
            NeighborhoodOperator::from_partition(&dp),
            NeighborhoodOperator::from_partition(&pp),
            idx(6, &[0, 1]),
            idx(6, &[0, 1, 4]),
        )
        .unwrap();
        let pair = two_tier_approx(&d);
        assert_eq!((pair.lower, pair.upper), (idx(6, &[0, 1]), idx(6, &[0, 1, 4])));
        // tiers swapped violate n_def ⊆ n_pos
        assert!(TwoTierData::new(
            NeighborhoodOperator::from_partition(&pp),
            NeighborhoodOperator::from_partition(&dp),
            idx(6, &[0]),
            idx(6, &[0]),
        )
        .is_err());
    }

    #[test]
    fn hesitant_example() {
        let n = 5;
        let mut h = vec![vec![vec![0.0]; n]; n];
        for (i, row) in h.iter_mut().enumerate() {
            row[i] = vec![1.0];
        }
        for &(a, b) in &[(0, 1), (3, 4)] {
            h[a][b] = vec![1.0];
            h[b][a] = vec![1.0];
        }
        for &(a, b) in &[(0, 2), (1, 2)] {
            h[a][b] = vec![0.0, 1.0];
            h[b][a] = vec![0.0, 1.0];
        }
        let hu = vec![vec![1.0], vec![1.0], vec![0.0, 1.0], vec![0.0], vec![0.0]];
        let d = hesitant_two_tier(&h, &hu).unwrap();
        let rg = regions(&two_tier_approx(&d)).unwrap().regions;
        assert_eq!(rg.pos, idx(5, &[0, 1]));
        assert_eq!(rg.bnd, idx(5, &[2]));
        assert_eq!(rg.neg, idx(5, &[3, 4]));
    }

    #[test]
    fn contra_example() {
        let n = 6;
        let mut c = vec![vec![0.9; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for &(a, b, v) in &[(0, 4, 0.15), (1, 2, 0.10), (3, 5, 0.05)] {
            c[a][b] = v;
            c[b][a] = v;
        }
        let k = ContraKernels {
            c_r: c,
            c_u: vec![0.05, 0.25, 0.35, 0.55, 0.08, 0.75],
            alpha: 0.20,
            beta: 0.10,
            gamma: 0.40,
        };
        let rg = regions(&two_tier_approx(&contra_from_kernels(&k).unwrap())).unwrap().regions;
        assert_eq!(rg.pos, idx(6, &[0, 4]));
        assert_eq!(rg.bnd, idx(6, &[1, 2]));
        assert_eq!(rg.neg, idx(6, &[3, 5]));
        let bad = ContraKernels { beta: 0.5, ..k };
        assert!(contra_from_kernels(&bad).is_err());
    }

    #[test]
    fn sequential_example() {
        let r1 = blocks(6, &[&[0, 1, 2], &[3, 4, 5]]);
        let r2 = blocks(6, &[&[0, 1], &[2, 3], &[4, 5]]);
        let s = sequential_approx(&[r1, r2], &idx(6, &[0, 1, 2])).unwrap();
        assert_eq!((s.lower, s.upper), (idx(6, &[0, 1]), idx(6, &[0, 1, 2, 3])));
        assert!(sequential_approx(&[], &idx(6, &[0])).is_err());
    }

    #[test]
    fn transfer_example() {
        let p = blocks(6, &[&[0, 1, 4], &[2, 3], &[5]]);
        let f = vec![None, Some(0), None, Some(2), Some(1), None];
        let t = s_transfer_approx(&p, &f, &idx(6, &[0, 2])).unwrap();
        assert_eq!(t.x_f, idx(6, &[1, 3]));
        assert_eq!(t.pair.lower, idx(6, &[2, 3]));
        assert_eq!(t.pair.upper, idx(6, &[0, 1, 2, 3, 4]));
        assert_eq!(t.pair.boundary(), idx(6, &[0, 1, 4]));
        assert!(s_transfer_approx(&p, &[Some(9), None, None, None, None, None], &idx(6, &[0])).is_err());
    }

    #[test]
    fn dp_example() {
        let pl: Vec<Rational> = ["0.95", "0.92", "0.08"].iter().map(|s| r(s)).collect();
        let pu: Vec<Rational> = ["0.98", "0.97", "0.40"].iter().map(|s| r(s)).collect();
        let a = dp_robust(&pl, &pu, r("0.10")).unwrap();
        assert_eq!((a.lower, a.upper), (idx(3, &[0, 1]), idx(3, &[0, 1])));
        let b = dp_robust(&pl, &pu, r("0.60")).unwrap();
        assert_eq!(b.upper, idx(3, &[0, 1, 2]));
        assert!(dp_robust(&pu, &pl, r("0.5")).is_err());
        assert!(dp_robust(&pl, &pu, r("1")).is_err());
        let ones = vec![Rational::one(); 3];
        let c = dp_robust(&ones, &ones, r("0.01")).unwrap();
        assert!(c.lower == Subset::full(3) && c.upper == Subset::full(3));
    }

    #[test]
    fn monte_carlo_extremes() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let est = monte_carlo_membership(&[1000.0, -1000.0], 1.0, 0.0, 200, &mut rng).unwrap();
        assert_eq!(est, vec![Rational::one(), Rational::zero()]);
    }

    #[test]
    fn weak_complement() {
        let full = WeakRoughSet::new(Subset::empty(3), Subset::full(3)).unwrap();
        assert_eq!(full.complement(), full);
        let t = WeakRoughSet::new(idx(6, &[2, 3]), idx(6, &[0, 1, 2, 3])).unwrap();
        let c = t.complement();
        assert_eq!((c.a_lower, c.a_upper), (idx(6, &[4, 5]), idx(6, &[0, 1, 4, 5])));
    }

    fn arb_case() -> impl Strategy<Value = (Vec<u8>, Vec<bool>, Vec<bool>)> {
        (1usize..=8).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u8..4, n),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec(any::<bool>(), n),
            )
        })
    }

    proptest! {
        #[test]
        fn reductions_to_pawlak((labels, xs, _) in arb_case()) {
            let p = Partition::from_labels(&labels).unwrap();
            let x = Subset::from_bools(xs);
            let base = pawlak(&p, &x).unwrap();
            for s in [
                RatioScheme::Vprs { beta: Rational::zero() },
                RatioScheme::Probabilistic { alpha: Rational::one(), beta: Rational::zero() },
                RatioScheme::Graded { k: 0 },
            ] {
                prop_assert!(ratio_approx(&p, &x, &s).unwrap().same_sets(&base));
            }
            let op = NeighborhoodOperator::from_partition(&p);
            let d = TwoTierData::new(op.clone(), op.clone(), x.clone(), x.clone()).unwrap();
            prop_assert!(two_tier_approx(&d).same_sets(&pointwise_approx(&op, &x).unwrap()));
            let fam = GranuleFamily::from_partition(&p);
            for m in [BlockMode::Tight, BlockMode::Loose, BlockMode::Generated] {
                prop_assert!(block_approx(&fam, &x, m).unwrap().same_sets(&base));
            }
        }

        #[test]
        fn covering_duality(n in 1usize..=7, seed in any::<u64>(), xs in proptest::collection::vec(any::<bool>(), 7)) {
            let mut s = seed;
            let mut blocks = Vec::new();
            for _ in 0..4 {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
                let m = (s >> 20) & ((1 << n) - 1);
                if m != 0 { blocks.push(Subset::from_mask(n, m)); }
            }
            for e in 0..n { blocks.push(Subset::from_indices(n, [e, (e + 1) % n])); }
            let f = GranuleFamily::new(n, blocks).unwrap();
            let x = Subset::from_bools(xs[..n].to_vec());
            for m in [BlockMode::Tight, BlockMode::Loose] {
                let a = block_approx(&f, &x, m).unwrap();
                let c = block_approx(&f, &x.complement(), m).unwrap();
                prop_assert_eq!(&a.upper, &c.lower.complement());
            }
        }

        #[test]
        fn sequential_matches_quantifiers((labels, xs, _) in arb_case(), l2 in proptest::collection::vec(0u8..3, 8), l3 in proptest::collection::vec(0u8..3, 8)) {
            let n = labels.len();
            let ps = [
                Partition::from_labels(&labels).unwrap(),
                Partition::from_labels(&l2[..n]).unwrap(),
                Partition::from_labels(&l3[..n]).unwrap(),
            ];
            let x = Subset::from_bools(xs);
            let got = sequential_approx(&ps, &x).unwrap();
            // literal nested quantifiers: x survives stage k iff its whole block survived stage k-1
            let mut alive: Vec<bool> = (0..n).map(|e| x.contains(e)).collect();
            for p in &ps {
                alive = (0..n).map(|e| p.block(e).iter().all(|y| alive[y])).collect();
            }
            prop_assert_eq!(got.lower, Subset::from_bools(alive));
        }

        #[test]
        fn transfer_matches_definition((labels, xs, _) in arb_case(), fs in proptest::collection::vec(proptest::option::of(0usize..8), 8)) {
            let n = labels.len();
            let p = Partition::from_labels(&labels).unwrap();
            let f: Vec<Option<usize>> = fs[..n].iter().map(|o| o.map(|v| v % n)).collect();
            let x = Subset::from_bools(xs);
            let t = s_transfer_approx(&p, &f, &x).unwrap();
            for u in 0..n {
                let expect = !x.contains(u) && matches!(f[u], Some(v) if x.contains(v));
                prop_assert_eq!(t.x_f.contains(u), expect);
            }
            prop_assert!(t.pair.same_sets(&pawlak(&p, &x.union(&t.x_f)).unwrap()));
        }

        #[test]
        fn weak_union_grows((labels, xs, ys) in arb_case()) {
            let p = Partition::from_labels(&labels).unwrap();
            let a = WeakRoughSet::from_pair(&pawlak(&p, &Subset::from_bools(xs)).unwrap()).unwrap();
            let b = WeakRoughSet::from_pair(&pawlak(&p, &Subset::from_bools(ys)).unwrap()).unwrap();
            let u = a.union(&b).unwrap();
            prop_assert!(a.a_lower.is_subset(&u.a_lower));
            prop_assert!(a.leq(&u).unwrap() && a.intersection(&b).unwrap().leq(&a).unwrap());
            prop_assert_eq!(a.complement().complement(), a);
        }

        #[test]
        fn code_is_faithful((labels, xs, ys) in arb_case()) {
            let p = Partition::from_labels(&labels).unwrap();
            let a = pawlak(&p, &Subset::from_bools(xs)).unwrap();
            let b = pawlak(&p, &Subset::from_bools(ys)).unwrap();
            let ca = regions(&a).unwrap().code;
            let (lo, up) = ca.decode();
            prop_assert_eq!((&lo, &up), (&a.lower, &a.upper));
            prop_assert_eq!(rough_equal(&a, &b), ca == regions(&b).unwrap().code);
        }
    }
}
