//! Membership, loss-driven thresholds, weighted and dominance-based
//! approximations, D-number descriptions and the threshold game.

use crate::approx::{block_ratio, ThreeWayRegions};
use crate::error::{check_len, Error, Result};
use crate::foundation::{indiscernibility, InformationTable, Partition, Rational, Subset};

/// `μ(x) = |X ∩ [x]| / |[x]|`
pub fn rough_membership(p: &Partition, x: &Subset) -> Result<Vec<Rational>> {
    x.check_universe(p.universe_len())?;
    Ok((0..p.universe_len()).map(|e| block_ratio(p.block(e), x)).collect())
}

/// Accept when `μ ≥ α`, reject when `μ ≤ β`, defer otherwise.
pub fn threshold_regions(mu: &[Rational], alpha: Rational, beta: Rational) -> ThreeWayRegions {
    ThreeWayRegions::classify(mu.len(), |e| {
        if mu[e] >= alpha {
            Some(true)
        } else if mu[e] <= beta {
            Some(false)
        } else {
            None
        }
    })
}

/// Costs of taking action P/B/N when the object is in (·P) or outside (·N)
/// the concept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LossTable {
    pub pp: Rational,
    pub bp: Rational,
    pub np: Rational,
    pub pn: Rational,
    pub bn: Rational,
    pub nn: Rational,
}

impl LossTable {
    /// Order: λPP, λBP, λNP, λPN, λBN, λNN.
    pub fn new(l: [Rational; 6]) -> Result<Self> {
        let t = LossTable {
            pp: l[0],
            bp: l[1],
            np: l[2],
            pn: l[3],
            bn: l[4],
            nn: l[5],
        };
        if !(t.pp <= t.bp && t.bp < t.np && t.nn <= t.bn && t.bn < t.pn) {
            return Err(Error::Precondition(
                "losses must satisfy λPP ≤ λBP < λNP and λNN ≤ λBN < λPN".into(),
            ));
        }
        // the ordering alone does not keep the thresholds apart, e.g. (0,8,9,4,3,0)
        let (alpha, beta) = t.thresholds();
        if beta >= alpha {
            return Err(Error::Precondition(format!(
                "losses give crossing thresholds: alpha {alpha} ≤ beta {beta}"
            )));
        }
        Ok(t)
    }

    pub fn thresholds(&self) -> (Rational, Rational) {
        let d = |a: Rational, b: Rational| a.checked_sub(b).expect("ordering checked at construction");
        let (a1, a2) = (d(self.pn, self.bn), d(self.bp, self.pp));
        let (b1, b2) = (d(self.bn, self.nn), d(self.np, self.bp));
        (a1 / (a1 + a2), b1 / (b1 + b2))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DtrsResult {
    pub alpha: Rational,
    pub beta: Rational,
    pub regions: ThreeWayRegions,
}

pub fn dtrs(losses: &LossTable, p: &Partition, x: &Subset) -> Result<DtrsResult> {
    let (alpha, beta) = losses.thresholds();
    let mu = rough_membership(p, x)?;
    Ok(DtrsResult {
        alpha,
        beta,
        regions: threshold_regions(&mu, alpha, beta),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedResult {
    /// Dependency of the decision on all of `B`.
    pub gamma_all: Rational,
    /// Dependency with one attribute dropped, per attribute of `B`.
    pub gamma_without: Vec<(String, Rational)>,
    pub theta: Vec<(String, Rational)>,
    pub weights: Vec<(String, Rational)>,
    pub sigma: Vec<Rational>,
    pub lower: Subset,
}

/// `|POS_B(D)| / |U|`
pub fn dependency<S: AsRef<str>>(t: &InformationTable, b: &[S], decision: &str) -> Result<Rational> {
    let n = t.universe().len();
    if n == 0 {
        return Ok(Rational::one());
    }
    let pb = indiscernibility(t, b)?;
    let pd = indiscernibility(t, &[decision])?;
    let pos = (0..n).filter(|&e| pb.block(e).is_subset(pd.block(e))).count();
    Ok(Rational::of(pos, n))
}

pub fn weighted_rough<S: AsRef<str>>(
    t: &InformationTable,
    b: &[S],
    decision: &str,
    x: &Subset,
    alpha: Rational,
) -> Result<WeightedResult> {
    let n = t.universe().len();
    x.check_universe(n)?;
    let names: Vec<&str> = b.iter().map(|s| s.as_ref()).collect();
    let gamma_all = dependency(t, &names, decision)?;
    let mut gamma_without = Vec::new();
    let mut theta = Vec::new();
    for a in &names {
        let rest: Vec<&str> = names.iter().copied().filter(|o| o != a).collect();
        let g = dependency(t, &rest, decision)?;
        // dependency is monotone in the attribute set
        let th = gamma_all.checked_sub(g).unwrap_or_else(Rational::zero);
        gamma_without.push((a.to_string(), g));
        theta.push((a.to_string(), th));
    }
    let total: Rational = theta.iter().map(|(_, v)| *v).sum();
    if total.is_zero() {
        return Err(Error::Precondition("all attribute significances are zero".into()));
    }
    let weights: Vec<(String, Rational)> = theta.iter().map(|(a, v)| (a.clone(), *v / total)).collect();
    let singles: Vec<Partition> = names.iter().map(|a| indiscernibility(t, &[*a])).collect::<Result<_>>()?;
    let sigma: Vec<Rational> = (0..n)
        .map(|e| {
            weights
                .iter()
                .zip(&singles)
                .filter(|(_, p)| p.block(e).is_subset(x))
                .map(|((_, w), _)| *w)
                .sum()
        })
        .collect();
    let lower = Subset::from_indices(n, (0..n).filter(|&e| sigma[e] >= alpha));
    Ok(WeightedResult {
        gamma_all,
        gamma_without,
        theta,
        weights,
        sigma,
        lower,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Benefit,
    Cost,
}

/// Criterion values in benefit form with ordered class labels `1..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceData {
    values: Vec<Vec<f64>>,
    classes: Vec<usize>,
    n_classes: usize,
    criteria: Vec<usize>,
}

impl DominanceData {
    /// Cost criteria are negated so larger is always better.
    pub fn new(values: Vec<Vec<f64>>, directions: &[Direction], classes: Vec<usize>, n_classes: usize) -> Result<Self> {
        check_len(values.len(), classes.len())?;
        for row in &values {
            check_len(directions.len(), row.len())?;
        }
        if let Some(c) = classes.iter().find(|&&c| c == 0 || c > n_classes) {
            return Err(Error::Precondition(format!("class label {c} outside 1..={n_classes}")));
        }
        let values = values
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .zip(directions)
                    .map(|(v, d)| if *d == Direction::Cost { -v } else { v })
                    .collect()
            })
            .collect();
        Ok(DominanceData {
            values,
            classes,
            n_classes,
            criteria: (0..directions.len()).collect(),
        })
    }

    /// Restrict to a criterion subset `P`.
    pub fn with_criteria(mut self, criteria: Vec<usize>) -> Result<Self> {
        let m = self.values.first().map_or(0, |r| r.len());
        if let Some(c) = criteria.iter().find(|&&c| c >= m) {
            return Err(Error::InvalidParameter(format!("criterion {c} out of range")));
        }
        self.criteria = criteria;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `y` is at least as good as `x` on every criterion in `P`.
    pub fn dominates(&self, y: usize, x: usize) -> bool {
        self.criteria.iter().all(|&q| self.values[y][q] >= self.values[x][q])
    }

    pub fn cone_plus(&self, x: usize) -> Subset {
        Subset::from_indices(self.len(), (0..self.len()).filter(|&y| self.dominates(y, x)))
    }

    pub fn cone_minus(&self, x: usize) -> Subset {
        Subset::from_indices(self.len(), (0..self.len()).filter(|&y| self.dominates(x, y)))
    }

    pub fn upward(&self, t: usize) -> Subset {
        Subset::from_indices(self.len(), (0..self.len()).filter(|&x| self.classes[x] >= t))
    }

    pub fn downward(&self, t: usize) -> Subset {
        Subset::from_indices(self.len(), (0..self.len()).filter(|&x| self.classes[x] <= t))
    }

    fn lower_ge(&self, t: usize) -> Subset {
        let up = self.upward(t);
        Subset::from_indices(self.len(), up.iter().filter(|&x| self.cone_plus(x).is_subset(&up)).collect::<Vec<_>>())
    }

    fn lower_le(&self, t: usize) -> Subset {
        let down = self.downward(t);
        Subset::from_indices(self.len(), down.iter().filter(|&x| self.cone_minus(x).is_subset(&down)).collect::<Vec<_>>())
    }
}

/// Uppers and boundaries are `None` outside their index range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DrsaResult {
    pub lower_ge: Subset,
    pub upper_ge: Option<Subset>,
    pub bnd_ge: Option<Subset>,
    pub lower_le: Subset,
    pub upper_le: Option<Subset>,
    pub bnd_le: Option<Subset>,
}

pub fn drsa(d: &DominanceData, t: usize) -> Result<DrsaResult> {
    let n = d.n_classes;
    if t == 0 || t > n {
        return Err(Error::InvalidParameter(format!("class index {t} outside 1..={n}")));
    }
    let lower_ge = d.lower_ge(t);
    let lower_le = d.lower_le(t);
    let upper_ge = (t >= 2).then(|| d.lower_le(t - 1).complement());
    let upper_le = (t < n).then(|| d.lower_ge(t + 1).complement());
    Ok(DrsaResult {
        bnd_ge: upper_ge.as_ref().map(|u| u.difference(&lower_ge)),
        bnd_le: upper_le.as_ref().map(|u| u.difference(&lower_le)),
        lower_ge,
        upper_ge,
        lower_le,
        upper_le,
    })
}

/// Masses on `{+}`, `{−}` and the whole frame; the rest is unassigned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DNumber {
    pub plus: Rational,
    pub minus: Rational,
    pub frame: Rational,
}

impl DNumber {
    pub fn new(plus: Rational, minus: Rational, frame: Rational) -> Result<Self> {
        if plus + minus + frame > Rational::one() {
            return Err(Error::Precondition("D-number masses sum above 1".into()));
        }
        Ok(DNumber { plus, minus, frame })
    }

    pub fn unassigned(&self) -> Rational {
        Rational::one().checked_sub(self.plus + self.minus + self.frame).unwrap()
    }
}

pub fn d_rough(p: &Partition, x: &Subset, alpha: Rational, beta: Rational) -> Result<(Vec<DNumber>, ThreeWayRegions)> {
    if !(beta < alpha && alpha <= Rational::one()) {
        return Err(Error::InvalidParameter(format!("need 0 ≤ beta < alpha ≤ 1, got {alpha}, {beta}")));
    }
    x.check_universe(p.universe_len())?;
    let ds: Vec<DNumber> = (0..p.universe_len())
        .map(|e| {
            let b = p.block(e);
            DNumber {
                plus: block_ratio(b, x),
                minus: Rational::of(b.difference(x).len(), b.len()),
                frame: Rational::zero(),
            }
        })
        .collect();
    let mu: Vec<Rational> = ds.iter().map(|d| d.plus).collect();
    Ok((ds, threshold_regions(&mu, alpha, beta)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Precision,
    Recall,
    /// Share of the universe left outside the boundary.
    Decisiveness,
}

/// A move of `d_alpha` steps of `δα` and `d_beta` steps of `δβ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub name: String,
    pub d_alpha: i64,
    pub d_beta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Player {
    pub name: String,
    pub strategies: Vec<Strategy>,
    pub measure: Measure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameSpec {
    pub players: Vec<Player>,
    pub alpha0: Rational,
    pub beta0: Rational,
    pub step_alpha: Rational,
    pub step_beta: Rational,
}

/// Additive smoothing of precision and recall denominators.
pub const GTRS_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOutcome {
    pub profile: Vec<usize>,
    pub alpha: Rational,
    pub beta: Rational,
    pub payoffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GtrsResult {
    Equilibrium {
        outcome: ProfileOutcome,
        regions: ThreeWayRegions,
    },
    None {
        matrix: Vec<ProfileOutcome>,
    },
}

fn shift(base: Rational, step: Rational, k: i64) -> Rational {
    let mag = step * Rational::of(k.unsigned_abs() as usize, 1);
    let v = if k >= 0 {
        base + mag
    } else {
        base.checked_sub(mag).unwrap_or_else(Rational::zero)
    };
    v.min(Rational::one())
}

impl GameSpec {
    fn thresholds(&self, profile: &[usize]) -> Result<(Rational, Rational)> {
        let (mut da, mut db) = (0i64, 0i64);
        for (pl, &s) in self.players.iter().zip(profile) {
            da += pl.strategies[s].d_alpha;
            db += pl.strategies[s].d_beta;
        }
        let a = shift(self.alpha0, self.step_alpha, da);
        let b = shift(self.beta0, self.step_beta, db);
        if b >= a {
            return Err(Error::Precondition(format!("profile {profile:?} yields beta {b} ≥ alpha {a}")));
        }
        Ok((a, b))
    }

    /// All profiles in lexicographic order, first player most significant.
    fn profiles(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for pl in &self.players {
            out = out
                .into_iter()
                .flat_map(|pre| {
                    (0..pl.strategies.len()).map(move |s| {
                        let mut v = pre.clone();
                        v.push(s);
                        v
                    })
                })
                .collect();
        }
        out
    }
}

fn measure(m: Measure, r: &ThreeWayRegions, x: &Subset) -> f64 {
    let hit = r.pos.intersection(x).len() as f64;
    match m {
        Measure::Precision => hit / (r.pos.len() as f64 + GTRS_EPS),
        Measure::Recall => hit / (x.len() as f64 + GTRS_EPS),
        Measure::Decisiveness => 1.0 - r.bnd.len() as f64 / r.pos.universe_len().max(1) as f64,
    }
}

pub fn gtrs_equilibrium(game: &GameSpec, p: &Partition, x: &Subset) -> Result<GtrsResult> {
    if game.players.is_empty() || game.players.iter().any(|pl| pl.strategies.is_empty()) {
        return Err(Error::Precondition("every player needs a nonempty strategy grid".into()));
    }
    let mu = rough_membership(p, x)?;
    let base = threshold_regions(&mu, game.alpha0, game.beta0);
    let eval = |profile: &[usize]| -> Result<(ProfileOutcome, ThreeWayRegions)> {
        let (alpha, beta) = game.thresholds(profile)?;
        let r = threshold_regions(&mu, alpha, beta);
        let payoffs = game
            .players
            .iter()
            .map(|pl| measure(pl.measure, &r, x) - measure(pl.measure, &base, x))
            .collect();
        Ok((
            ProfileOutcome {
                profile: profile.to_vec(),
                alpha,
                beta,
                payoffs,
            },
            r,
        ))
    };
    let profiles = game.profiles();
    let mut table = Vec::with_capacity(profiles.len());
    for pr in &profiles {
        table.push(eval(pr)?);
    }
    let index_of = |pr: &[usize]| profiles.iter().position(|q| q == pr).unwrap();
    for (i, (out, r)) in table.iter().enumerate() {
        let stable = game.players.iter().enumerate().all(|(k, pl)| {
            (0..pl.strategies.len()).all(|s| {
                let mut dev = profiles[i].clone();
                dev[k] = s;
                table[index_of(&dev)].0.payoffs[k] <= out.payoffs[k]
            })
        });
        if stable {
            return Ok(GtrsResult::Equilibrium {
                outcome: out.clone(),
                regions: r.clone(),
            });
        }
    }
    Ok(GtrsResult::None {
        matrix: table.into_iter().map(|(o, _)| o).collect(),
    })
}
