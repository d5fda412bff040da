//! Finite universes, subsets, relations, partitions, information tables and
//! exact rationals.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::{check_len, Error, Result};

/// Ordered, duplicate-free list of element identifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Universe {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl Universe {
    pub fn new<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateElement(id.clone()));
            }
        }
        Ok(Universe { ids, index })
    }

    /// Universe `prefix1..=prefixn`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Universe::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("distinct by construction")
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    pub fn subset<S: AsRef<str>>(&self, ids: &[S]) -> Result<Subset> {
        let mut s = Subset::empty(self.len());
        for id in ids {
            s.insert(self.index_of(id.as_ref())?);
        }
        Ok(s)
    }

    /// Sorted identifier list of a subset.
    pub fn names(&self, s: &Subset) -> Vec<String> {
        let mut v: Vec<String> = s.iter().map(|i| self.ids[i].clone()).collect();
        v.sort();
        v
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }
}

/// Dense membership vector over a universe of fixed size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subset {
    bits: Vec<bool>,
}

impl Subset {
    pub fn empty(n: usize) -> Self {
        Subset { bits: vec![false; n] }
    }

    pub fn full(n: usize) -> Self {
        Subset { bits: vec![true; n] }
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Subset::empty(n);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn from_bools(bits: Vec<bool>) -> Self {
        Subset { bits }
    }

    /// Low `n` bits of `mask` as a subset.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Subset {
            bits: (0..n).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    pub fn to_mask(&self) -> u64 {
        self.iter().fold(0u64, |m, i| m | 1 << i)
    }

    /// Size of the ambient universe.
    pub fn universe_len(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.bits.len(), "index {i} outside universe");
        self.bits[i] = true;
    }

    pub fn remove(&mut self, i: usize) {
        self.bits[i] = false;
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn is_subset(&self, other: &Subset) -> bool {
        self.bits.iter().zip(&other.bits).all(|(a, b)| !a || *b)
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.bits.iter().zip(&other.bits).any(|(a, b)| *a && *b)
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Subset {
        Subset {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    fn zip(&self, other: &Subset, f: impl Fn(bool, bool) -> bool) -> Subset {
        assert_eq!(self.bits.len(), other.bits.len(), "subsets of different universes");
        Subset {
            bits: self.bits.iter().zip(&other.bits).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn check_universe(&self, n: usize) -> Result<()> {
        check_len(n, self.bits.len())
    }
}

/// Property flags of a binary relation, each from an exhaustive check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelProps {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
    pub up_directed: bool,
}

impl RelProps {
    pub fn is_equivalence(&self) -> bool {
        self.reflexive && self.symmetric && self.transitive
    }
}

/// Boolean adjacency matrix on one universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRel {
    n: usize,
    adj: Vec<bool>,
    props: RelProps,
}

impl BinaryRel {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut adj = vec![false; n * n];
        for x in 0..n {
            for y in 0..n {
                adj[x * n + y] = f(x, y);
            }
        }
        let mut r = BinaryRel {
            n,
            adj,
            props: RelProps {
                reflexive: false,
                symmetric: false,
                transitive: false,
                up_directed: false,
            },
        };
        r.props = compute_props(&r);
        r
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::InvalidParameter(format!("pair ({x},{y}) outside universe")));
            }
        }
        Ok(BinaryRel::from_fn(n, |x, y| pairs.contains(&(x, y))))
    }

    pub fn from_partition(p: &Partition) -> Self {
        BinaryRel::from_fn(p.universe_len(), |x, y| p.block_of(x) == p.block_of(y))
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn related(&self, x: usize, y: usize) -> bool {
        self.adj[x * self.n + y]
    }

    pub fn props(&self) -> RelProps {
        self.props
    }

    /// `{y : x R y}`
    pub fn successors(&self, x: usize) -> Subset {
        Subset::from_indices(self.n, (0..self.n).filter(|&y| self.related(x, y)))
    }

    /// `{y : y R x}`
    pub fn predecessors(&self, x: usize) -> Subset {
        Subset::from_indices(self.n, (0..self.n).filter(|&y| self.related(y, x)))
    }

    /// Equivalence classes, if the relation is an equivalence.
    pub fn to_partition(&self) -> Result<Partition> {
        if !self.props.is_equivalence() {
            return Err(Error::Precondition("relation is not an equivalence".into()));
        }
        Partition::from_labels(&(0..self.n).map(|x| (0..self.n).find(|&y| self.related(x, y)).unwrap()).collect::<Vec<_>>())
    }
}

fn compute_props(r: &BinaryRel) -> RelProps {
    let n = r.n;
    let reflexive = (0..n).all(|x| r.related(x, x));
    let symmetric = (0..n).all(|x| (0..n).all(|y| r.related(x, y) == r.related(y, x)));
    let transitive = (0..n).all(|x| {
        (0..n).all(|y| !r.related(x, y) || (0..n).all(|z| !r.related(y, z) || r.related(x, z)))
    });
    let up_directed =
        (0..n).all(|a| (0..n).all(|b| (0..n).any(|c| r.related(a, c) && r.related(b, c))));
    RelProps {
        reflexive,
        symmetric,
        transitive,
        up_directed,
    }
}

pub fn relation_properties(rel: &BinaryRel) -> RelProps {
    rel.props()
}

/// Disjoint nonempty blocks covering the universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Subset>,
    block_of: Vec<usize>,
}

impl Partition {
    pub fn from_blocks(n: usize, blocks: Vec<Subset>) -> Result<Self> {
        let mut block_of = vec![usize::MAX; n];
        for (b, blk) in blocks.iter().enumerate() {
            blk.check_universe(n)?;
            if blk.is_empty() {
                return Err(Error::Precondition(format!("block {b} is empty")));
            }
            for x in blk.iter() {
                if block_of[x] != usize::MAX {
                    return Err(Error::Precondition(format!("element {x} lies in two blocks")));
                }
                block_of[x] = b;
            }
        }
        if let Some(x) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(Error::Precondition(format!("element {x} is in no block")));
        }
        Ok(Partition { blocks, block_of })
    }

    pub fn from_index_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        Partition::from_blocks(
            n,
            blocks.iter().map(|b| Subset::from_indices(n, b.iter().copied())).collect(),
        )
    }

    /// Blocks from equal labels; block order follows first occurrence.
    pub fn from_labels<K: PartialEq>(labels: &[K]) -> Result<Self> {
        let n = labels.len();
        let mut reps: Vec<usize> = Vec::new();
        let mut block_of = vec![0; n];
        for x in 0..n {
            match reps.iter().position(|&r| labels[r] == labels[x]) {
                Some(b) => block_of[x] = b,
                None => {
                    block_of[x] = reps.len();
                    reps.push(x);
                }
            }
        }
        let mut blocks = vec![Subset::empty(n); reps.len()];
        for x in 0..n {
            blocks[block_of[x]].insert(x);
        }
        Ok(Partition { blocks, block_of })
    }

    pub fn discrete(n: usize) -> Self {
        Partition::from_labels(&(0..n).collect::<Vec<_>>()).unwrap()
    }

    pub fn indiscrete(n: usize) -> Self {
        Partition::from_labels(&vec![0; n]).unwrap()
    }

    pub fn universe_len(&self) -> usize {
        self.block_of.len()
    }

    pub fn blocks(&self) -> &[Subset] {
        &self.blocks
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// `[x]`
    pub fn block(&self, x: usize) -> &Subset {
        &self.blocks[self.block_of[x]]
    }

    pub fn refines(&self, q: &Partition) -> Result<bool> {
        check_len(self.universe_len(), q.universe_len())?;
        Ok(self.blocks.iter().all(|b| q.blocks.iter().any(|c| b.is_subset(c))))
    }

    /// Common refinement (intersection of the equivalences).
    pub fn meet(&self, q: &Partition) -> Result<Partition> {
        check_len(self.universe_len(), q.universe_len())?;
        let keys: Vec<(usize, usize)> =
            (0..self.universe_len()).map(|x| (self.block_of[x], q.block_of[x])).collect();
        Partition::from_labels(&keys)
    }
}

pub fn partition_refines(p: &Partition, q: &Partition) -> Result<bool> {
    p.refines(q)
}

/// A single cell of an information table.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Cat(String),
    Num(f64),
}

impl Value {
    /// Numeric if the token has decimal syntax, categorical otherwise.
    pub fn parse(token: &str) -> Value {
        let t = token.trim();
        if is_decimal(t) {
            Value::Num(t.parse().expect("decimal syntax parses"))
        } else {
            Value::Cat(t.to_string())
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Value::Num(v) => Some(*v),
            Value::Cat(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Cat(s) => f.write_str(s),
            Value::Num(v) => write!(f, "{v}"),
        }
    }
}

fn is_decimal(t: &str) -> bool {
    let body = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
    let mut parts = body.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    match frac {
        None => !int.is_empty() && digits(int),
        Some(fr) => (!int.is_empty() || !fr.is_empty()) && digits(int) && digits(fr),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InformationTable {
    universe: Universe,
    attrs: Vec<String>,
    cells: Vec<Vec<Value>>,
    decision: Option<String>,
}

impl InformationTable {
    pub fn new(universe: Universe, attrs: Vec<String>, cells: Vec<Vec<Value>>) -> Result<Self> {
        check_len(universe.len(), cells.len())?;
        for (i, row) in cells.iter().enumerate() {
            if row.len() != attrs.len() {
                return Err(Error::Parse(format!(
                    "row `{}` has {} cells, expected {}",
                    universe.id(i),
                    row.len(),
                    attrs.len()
                )));
            }
        }
        Ok(InformationTable {
            universe,
            attrs,
            cells,
            decision: None,
        })
    }

    pub fn with_decision(mut self, attr: &str) -> Result<Self> {
        self.attr_index(attr)?;
        self.decision = Some(attr.to_string());
        Ok(self)
    }

    /// Build from string tokens; `rows[i][0]` is the element id.
    pub fn from_rows(attrs: &[&str], rows: &[&[&str]]) -> Result<Self> {
        let universe = Universe::new(rows.iter().map(|r| r[0].to_string()))?;
        let cells = rows.iter().map(|r| r[1..].iter().map(|t| Value::parse(t)).collect()).collect();
        InformationTable::new(universe, attrs.iter().map(|s| s.to_string()).collect(), cells)
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn attrs(&self) -> &[String] {
        &self.attrs
    }

    pub fn decision(&self) -> Option<&str> {
        self.decision.as_deref()
    }

    pub fn attr_index(&self, name: &str) -> Result<usize> {
        self.attrs
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn value(&self, x: usize, attr: usize) -> &Value {
        &self.cells[x][attr]
    }

    pub fn column(&self, name: &str) -> Result<Vec<Value>> {
        let a = self.attr_index(name)?;
        Ok(self.cells.iter().map(|r| r[a].clone()).collect())
    }

    /// Elements whose `attr` cell renders as `value`.
    pub fn select(&self, attr: &str, value: &str) -> Result<Subset> {
        let a = self.attr_index(attr)?;
        let v = Value::parse(value);
        Ok(Subset::from_indices(
            self.universe.len(),
            (0..self.universe.len()).filter(|&x| self.cells[x][a] == v),
        ))
    }
}

pub fn indiscernibility<S: AsRef<str>>(table: &InformationTable, attrs: &[S]) -> Result<Partition> {
    let idx: Vec<usize> = attrs.iter().map(|a| table.attr_index(a.as_ref())).collect::<Result<_>>()?;
    let keys: Vec<Vec<&Value>> = (0..table.universe.len())
        .map(|x| idx.iter().map(|&a| &table.cells[x][a]).collect())
        .collect();
    Partition::from_labels(&keys)
}

/// Exact nonnegative fraction in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<u64>);

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    /// `num/den` for a count ratio with `den > 0`.
    pub fn of(num: usize, den: usize) -> Self {
        assert!(den > 0, "count ratio over an empty granule");
        Rational(Ratio::new(num as u64, den as u64))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn one() -> Self {
        Rational(Ratio::from_integer(1))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn checked_sub(&self, rhs: Rational) -> Option<Rational> {
        if rhs.0 > self.0 {
            None
        } else {
            Some(Rational(self.0 - rhs.0))
        }
    }

    /// `1 - self`, defined for values in [0, 1].
    pub fn one_minus(&self) -> Option<Rational> {
        Rational::one().checked_sub(*self)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl std::ops::Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl std::ops::Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl std::ops::Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        Rational(self.0 / rhs.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `n/d`, integers, and finite decimals (parsed exactly).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse(format!("not a nonnegative rational: `{s}`"));
        if let Some((n, d)) = t.split_once('/') {
            let n: u64 = n.trim().parse().map_err(|_| bad())?;
            let d: u64 = d.trim().parse().map_err(|_| bad())?;
            return Rational::new(n, d).map_err(|_| bad());
        }
        if !is_decimal(t) || t.starts_with('-') {
            return Err(bad());
        }
        let t = t.trim_start_matches('+');
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        let digits = format!("{int}{frac}");
        let num: u64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
        let den = 10u64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
        Rational::new(num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triage() -> InformationTable {
        InformationTable::from_rows(
            &["Fever", "Cough", "Diagnosis"],
            &[
                &["p1", "High", "Yes", "Flu"],
                &["p2", "High", "Yes", "Cold"],
                &["p3", "High", "No", "Flu"],
                &["p4", "High", "No", "Flu"],
                &["p5", "Normal", "No", "Healthy"],
                &["p6", "Normal", "No", "Healthy"],
            ],
        )
        .unwrap()
    }

    #[test]
    fn triage_blocks() {
        let t = triage();
        let p = indiscernibility(&t, &["Fever", "Cough"]).unwrap();
        let u = t.universe();
        let names: Vec<Vec<String>> = p.blocks().iter().map(|b| u.names(b)).collect();
        assert_eq!(names, vec![vec!["p1", "p2"], vec!["p3", "p4"], vec!["p5", "p6"]]);
    }

    #[test]
    fn empty_attrs_single_block() {
        let p = indiscernibility::<&str>(&triage(), &[]).unwrap();
        assert_eq!(p.blocks().len(), 1);
    }

    #[test]
    fn unknown_attribute() {
        assert_eq!(
            indiscernibility(&triage(), &["Age"]),
            Err(Error::UnknownAttribute("Age".into()))
        );
    }

    #[test]
    fn tolerance_props() {
        let s = [2.0f64, 3.0, 3.0, 4.0, 5.0, 5.0];
        let r = BinaryRel::from_fn(6, |x, y| (s[x] - s[y]).abs() <= 1.0);
        let p = r.props();
        assert!(p.reflexive && p.symmetric && !p.transitive);
    }

    #[test]
    fn empty_relation_not_reflexive() {
        assert!(!BinaryRel::from_fn(3, |_, _| false).props().reflexive);
    }

    #[test]
    fn directed_example_up_directed() {
        // F R P C ; out-sets {F,R,P} {R,P,C} {F,P,C} {F,R,C}
        let out = [[0, 1, 2], [1, 2, 3], [0, 2, 3], [0, 1, 3]];
        let r = BinaryRel::from_fn(4, |x, y| out[x].contains(&y));
        assert!(r.props().up_directed);
    }

    #[test]
    fn refinement_chain() {
        let r1 = Partition::from_index_blocks(6, &[vec![0, 1], vec![2], vec![3, 4], vec![5]]).unwrap();
        let r2 = Partition::from_index_blocks(6, &[vec![0, 1, 2], vec![3, 4], vec![5]]).unwrap();
        assert!(r1.refines(&r2).unwrap());
        assert!(!r2.refines(&r1).unwrap());
        assert!(r1.refines(&r1).unwrap());
        assert!(r1.refines(&Partition::discrete(5)).is_err());
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::from_index_blocks(3, &[vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_index_blocks(3, &[vec![0, 1]]).is_err());
        assert!(Partition::from_index_blocks(3, &[vec![0, 1, 2], vec![]]).is_err());
    }

    #[test]
    fn rational_parse_and_display() {
        assert_eq!("90/95".parse::<Rational>().unwrap().to_string(), "18/19");
        assert_eq!("0.8".parse::<Rational>().unwrap(), Rational::new(4, 5).unwrap());
        assert_eq!("1".parse::<Rational>().unwrap().to_string(), "1/1");
        assert_eq!(".25".parse::<Rational>().unwrap(), Rational::new(1, 4).unwrap());
        assert!("-1/2".parse::<Rational>().is_err());
        assert!("1/0".parse::<Rational>().is_err());
        assert!("abc".parse::<Rational>().is_err());
    }

    #[test]
    fn numeric_detection() {
        assert_eq!(Value::parse("1.5"), Value::Num(1.5));
        assert_eq!(Value::parse("-3"), Value::Num(-3.0));
        assert_eq!(Value::parse("High"), Value::Cat("High".into()));
        assert_eq!(Value::parse("1e5"), Value::Cat("1e5".into()));
    }

    #[test]
    fn equivalence_round_trip() {
        let p = Partition::from_index_blocks(5, &[vec![0, 3], vec![1], vec![2, 4]]).unwrap();
        let r = BinaryRel::from_partition(&p);
        assert!(r.props().is_equivalence());
        let q = r.to_partition().unwrap();
        assert!(p.refines(&q).unwrap() && q.refines(&p).unwrap());
    }
}
