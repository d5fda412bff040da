//! Parameterized families of subsets and the lifted relations on iterated
//! powersets.

use std::collections::BTreeMap;

use crate::approx::{pawlak, ApproximationPair};
use crate::error::{check_len, Error, Result};
use crate::foundation::{InformationTable, Partition, Subset, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Hyper,
    Soft,
    Strait,
    Expert,
}

impl ParamKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "hyper" | "bipartite" => Ok(ParamKind::Hyper),
            "soft" => Ok(ParamKind::Soft),
            "strait" => Ok(ParamKind::Strait),
            "expert" => Ok(ParamKind::Expert),
            other => Err(Error::InvalidParameter(format!("unknown family kind `{other}`"))),
        }
    }
}

/// A parameter is a tuple of descriptor components, e.g. attribute values
/// or an (attribute, expert, opinion) triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Param {
    pub key: Vec<String>,
    pub members: Subset,
}

impl Param {
    pub fn label(&self) -> String {
        self.key.join(",")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamFamily {
    pub kind: ParamKind,
    n: usize,
    params: Vec<Param>,
}

impl ParamFamily {
    pub fn new(kind: ParamKind, n: usize, params: Vec<Param>) -> Result<Self> {
        for (i, p) in params.iter().enumerate() {
            check_len(n, p.members.universe_len())?;
            if params[..i].iter().any(|q| q.key == p.key) {
                return Err(Error::InvalidParameter(format!("duplicate parameter `{}`", p.label())));
            }
        }
        if kind == ParamKind::Strait {
            let blocks = params.iter().map(|p| p.members.clone()).collect();
            Partition::from_blocks(n, blocks)
                .map_err(|e| Error::Precondition(format!("strait family must partition the universe: {e}")))?;
        }
        Ok(ParamFamily { kind, n, params })
    }

    /// `F(j1,…,jk) = {x : (a1(x),…,ak(x)) = (j1,…,jk)}` over every tuple of
    /// observed values, so unrealised tuples map to the empty set.
    pub fn from_table(table: &InformationTable, attrs: &[&str]) -> Result<Self> {
        let n = table.universe().len();
        let cols: Vec<usize> = attrs.iter().map(|a| table.attr_index(a)).collect::<Result<_>>()?;
        let domains: Vec<Vec<&Value>> = cols
            .iter()
            .map(|&c| {
                let mut d: Vec<&Value> = Vec::new();
                for x in 0..n {
                    let v = table.value(x, c);
                    if !d.contains(&v) {
                        d.push(v);
                    }
                }
                d
            })
            .collect();
        let mut params = Vec::new();
        let mut pick = vec![0usize; cols.len()];
        loop {
            let tuple: Vec<&Value> = pick.iter().zip(&domains).map(|(&i, d)| d[i]).collect();
            let members = Subset::from_indices(n, (0..n).filter(|&x| cols.iter().zip(&tuple).all(|(&c, v)| table.value(x, c) == *v)));
            params.push(Param { key: tuple.iter().map(|v| v.to_string()).collect(), members });
            // odometer over the value domains, last attribute fastest
            let mut k = cols.len();
            loop {
                if k == 0 {
                    return ParamFamily::new(ParamKind::Hyper, n, params);
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < domains[k].len() {
                    break;
                }
                pick[k] = 0;
            }
        }
    }

    pub fn universe_len(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn get(&self, key: &[&str]) -> Option<&Subset> {
        self.params.iter().find(|p| p.key.iter().map(String::as_str).eq(key.iter().copied())).map(|p| &p.members)
    }

    pub fn images_union(&self) -> Subset {
        self.params.iter().fold(Subset::empty(self.n), |acc, p| acc.union(&p.members))
    }
}

pub fn param_family_approx(family: &ParamFamily, rel: &Partition) -> Result<Vec<(String, ApproximationPair)>> {
    check_len(family.n, rel.universe_len())?;
    family
        .params
        .iter()
        .map(|p| Ok((p.label(), pawlak(rel, &p.members)?.with_param("parameter", p.label()))))
        .collect()
}

/// Union form: `e` contributes `F(e)` itself when it qualifies.
fn union_form(family: &ParamFamily, b: &Subset, model: &str) -> Result<ApproximationPair> {
    b.check_universe(family.n)?;
    let mut lower = Subset::empty(family.n);
    let mut upper = Subset::empty(family.n);
    for p in &family.params {
        if p.members.is_subset(b) {
            lower = lower.union(&p.members);
        }
        if p.members.intersects(b) {
            upper = upper.union(&p.members);
        }
    }
    Ok(ApproximationPair::new(model, lower, upper))
}

pub fn soft_rough(family: &ParamFamily, b: &Subset) -> Result<ApproximationPair> {
    let tag = if family.kind == ParamKind::Expert { "soft_expert" } else { "soft_rough" };
    union_form(family, b, tag)
}

pub fn strait_approx(family: &ParamFamily, x: &Subset) -> Result<(ApproximationPair, Subset)> {
    if family.kind != ParamKind::Strait {
        return Err(Error::Precondition("strait approximation needs a strait family".into()));
    }
    let pair = union_form(family, x, "strait")?;
    let bnd = pair.boundary();
    Ok((pair, bnd))
}

/// An element of the k-fold iterated powerset of `{0..n}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Base(usize),
    Set(Vec<Level>),
}

impl Level {
    pub fn set(items: Vec<Level>) -> Level {
        Level::Set(items).canonical()
    }

    pub fn from_subset(s: &Subset) -> Level {
        Level::Set(s.iter().map(Level::Base).collect())
    }

    /// Sorted and deduplicated at every depth.
    pub fn canonical(self) -> Level {
        match self {
            Level::Base(x) => Level::Base(x),
            Level::Set(v) => {
                let mut v: Vec<Level> = v.into_iter().map(Level::canonical).collect();
                v.sort();
                v.dedup();
                Level::Set(v)
            }
        }
    }

    pub fn is_level(&self, k: usize, n: usize) -> bool {
        match self {
            Level::Base(x) => k == 0 && *x < n,
            Level::Set(v) => k > 0 && v.iter().all(|c| c.is_level(k - 1, n)),
        }
    }
}

pub const LIFT_LIMIT_K1: usize = 6;
pub const LIFT_LIMIT_K2: usize = 4;

/// `R^k` on `P^k(X)`, decided by class signatures.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedRelation {
    base: Partition,
    k: usize,
}

pub fn superhyper_lift(base: &Partition, k: usize) -> Result<LiftedRelation> {
    let n = base.universe_len();
    let limit = match k {
        0 => usize::MAX,
        1 => LIFT_LIMIT_K1,
        2 => LIFT_LIMIT_K2,
        _ => return Err(Error::Guard(format!("lift depth {k} exceeds 2"))),
    };
    if n > limit {
        return Err(Error::Guard(format!("universe of {n} exceeds {limit} at lift depth {k}")));
    }
    Ok(LiftedRelation { base: base.clone(), k })
}

impl LiftedRelation {
    pub fn depth(&self) -> usize {
        self.k
    }

    /// Base elements become their class index; sets become the set of
    /// their members' signatures.
    pub fn signature(&self, a: &Level) -> Level {
        match a {
            Level::Base(x) => Level::Base(self.base.block_of(*x)),
            Level::Set(v) => Level::set(v.iter().map(|c| self.signature(c)).collect()),
        }
    }

    fn check(&self, a: &Level) -> Result<()> {
        if a.is_level(self.k, self.base.universe_len()) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("element is not at level {}", self.k)))
        }
    }

    pub fn related(&self, a: &Level, b: &Level) -> Result<bool> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.signature(a) == self.signature(b))
    }

    /// All of `P^k(X)` in canonical form.
    pub fn carrier(&self) -> Vec<Level> {
        let n = self.base.universe_len();
        let mut cur: Vec<Level> = (0..n).map(Level::Base).collect();
        for _ in 0..self.k {
            let m = cur.len();
            cur = (0..1u64 << m)
                .map(|mask| Level::set((0..m).filter(|i| mask >> i & 1 == 1).map(|i| cur[i].clone()).collect()))
                .collect();
        }
        cur
    }

    pub fn class_of(&self, a: &Level) -> Result<Vec<Level>> {
        self.check(a)?;
        let sig = self.signature(a);
        let mut out: Vec<Level> = self.carrier().into_iter().filter(|d| self.signature(d) == sig).collect();
        out.sort();
        Ok(out)
    }
}

/// Lower and upper approximation of a level-`k+1` value `c` under `R^k`.
pub fn superhyper_approx(lift: &LiftedRelation, c: &Level) -> Result<(Vec<Level>, Vec<Level>)> {
    let n = lift.base.universe_len();
    let members = match c {
        Level::Set(v) if c.is_level(lift.k + 1, n) => v.iter().cloned().map(Level::canonical).collect::<Vec<_>>(),
        _ => return Err(Error::InvalidParameter(format!("target is not at level {}", lift.k + 1))),
    };
    let mut classes: BTreeMap<Level, Vec<Level>> = BTreeMap::new();
    for d in lift.carrier() {
        classes.entry(lift.signature(&d)).or_default().push(d);
    }
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for class in classes.values() {
        let hit = class.iter().filter(|d| members.contains(d)).count();
        if hit == class.len() {
            lower.extend(class.iter().cloned());
        }
        if hit > 0 {
            upper.extend(class.iter().cloned());
        }
    }
    lower.sort();
    upper.sort();
    Ok((lower, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn idx(n: usize, v: &[usize]) -> Subset {
        Subset::from_indices(n, v.iter().copied())
    }

    fn param(key: &[&str], n: usize, v: &[usize]) -> Param {
        Param { key: key.iter().map(|s| s.to_string()).collect(), members: idx(n, v) }
    }

    fn loan() -> InformationTable {
        InformationTable::from_rows(
            &["Employment", "Credit", "Income"],
            &[
                &["x1", "Stable", "Good", "High"],
                &["x2", "Stable", "Good", "Low"],
                &["x3", "Stable", "Bad", "High"],
                &["x4", "Stable", "Bad", "Low"],
                &["x5", "Unstable", "Good", "Low"],
                &["x6", "Unstable", "Bad", "Low"],
            ],
        )
        .unwrap()
    }

    #[test]
    fn hyper_loan_tuples() {
        let t = loan();
        let fam = ParamFamily::from_table(&t, &["Employment", "Credit", "Income"]).unwrap();
        assert_eq!(fam.params().len(), 8);
        let r = crate::indiscernibility(&t, &["Employment", "Credit"]).unwrap();
        let out = param_family_approx(&fam, &r).unwrap();
        let get = |k: &str| out.iter().find(|(l, _)| l == k).unwrap().1.clone();
        let a = get("Stable,Good,High");
        assert_eq!((a.lower, a.upper), (Subset::empty(6), idx(6, &[0, 1])));
        let b = get("Unstable,Good,Low");
        assert_eq!((b.lower, b.upper), (idx(6, &[4]), idx(6, &[4])));
        let e = get("Unstable,Good,High");
        assert_eq!((e.lower, e.upper), (Subset::empty(6), Subset::empty(6)));
        assert_eq!(fam.get(&["Stable", "Good", "Low"]), Some(&idx(6, &[1])));
    }

    #[test]
    fn soft_apartments() {
        let fam = ParamFamily::new(
            ParamKind::Soft,
            6,
            vec![param(&["e1"], 6, &[0, 2, 4]), param(&["e2"], 6, &[0, 1, 3]), param(&["e3"], 6, &[1, 4, 5])],
        )
        .unwrap();
        let p = soft_rough(&fam, &idx(6, &[0, 1, 3])).unwrap();
        assert_eq!((p.lower, p.upper), (idx(6, &[0, 1, 3]), Subset::full(6)));
        let e = soft_rough(&fam, &Subset::empty(6)).unwrap();
        assert!(e.lower.is_empty() && e.upper.is_empty());
    }

    #[test]
    fn expert_smartphones() {
        let fam = ParamFamily::new(
            ParamKind::Expert,
            4,
            vec![
                param(&["Battery", "Alice", "1"], 4, &[0, 1]),
                param(&["Camera", "Bob", "1"], 4, &[1, 2]),
                param(&["Price", "Alice", "1"], 4, &[0, 2]),
                param(&["Battery", "Bob", "0"], 4, &[2]),
            ],
        )
        .unwrap();
        let p = soft_rough(&fam, &idx(4, &[1, 2])).unwrap();
        assert_eq!((p.lower, p.upper), (idx(4, &[1, 2]), idx(4, &[0, 1, 2])));
        assert_eq!(p.model, "soft_expert");
    }

    #[test]
    fn strait_districts() {
        let fam = ParamFamily::new(
            ParamKind::Strait,
            7,
            vec![param(&["north"], 7, &[0, 1]), param(&["centre"], 7, &[2, 3, 4]), param(&["south"], 7, &[5, 6])],
        )
        .unwrap();
        let (p, bnd) = strait_approx(&fam, &idx(7, &[0, 1, 2, 5, 6])).unwrap();
        assert_eq!(p.lower, idx(7, &[0, 1, 5, 6]));
        assert_eq!(bnd, idx(7, &[2, 3, 4]));
        let (d, bnd) = strait_approx(&fam, &idx(7, &[0, 1])).unwrap();
        assert!(bnd.is_empty() && d.lower == d.upper);
        let overlap = ParamFamily::new(ParamKind::Strait, 3, vec![param(&["a"], 3, &[0, 1]), param(&["b"], 3, &[1, 2])]);
        assert!(matches!(overlap, Err(Error::Precondition(_))));
        let soft = ParamFamily::new(ParamKind::Soft, 3, vec![param(&["a"], 3, &[0])]).unwrap();
        assert!(strait_approx(&soft, &idx(3, &[0])).is_err());
    }

    #[test]
    fn strait_matches_triage_pawlak() {
        let blocks: [&[usize]; 3] = [&[0, 1], &[2, 3], &[4, 5]];
        let fam = ParamFamily::new(
            ParamKind::Strait,
            6,
            blocks.iter().enumerate().map(|(i, b)| param(&[&i.to_string()], 6, b)).collect(),
        )
        .unwrap();
        let part = Partition::from_index_blocks(6, &blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap();
        let x = idx(6, &[0, 2, 3]);
        let (p, _) = strait_approx(&fam, &x).unwrap();
        let op = crate::granulation::NeighborhoodOperator::from_partition(&part);
        assert!(p.same_sets(&crate::approx::pointwise_approx(&op, &x).unwrap()));
    }

    // products: mo=0, mr=1, bw=2, bg=3
    fn grocery() -> LiftedRelation {
        let r = Partition::from_index_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        superhyper_lift(&r, 1).unwrap()
    }

    fn bundle(v: &[usize]) -> Level {
        Level::set(v.iter().map(|&x| Level::Base(x)).collect())
    }

    #[test]
    fn grocery_bundles() {
        let lift = grocery();
        let c = Level::set(vec![bundle(&[0, 3]), bundle(&[1, 3]), bundle(&[0, 2])]);
        let (lower, upper) = superhyper_approx(&lift, &c).unwrap();
        let e: Vec<Level> = [[0, 2], [0, 3], [1, 2], [1, 3]].iter().map(|b| bundle(b)).collect();
        let class = lift.class_of(&bundle(&[0, 3])).unwrap();
        // every set with some milk and some bread
        assert_eq!(class.len(), 9);
        assert!(e.iter().all(|b| class.contains(b)));
        assert!(e.iter().all(|b| !lower.contains(b)));
        assert!(e.iter().all(|b| upper.contains(b)));
        assert!(lower.is_empty());
        assert_eq!(upper, class);
    }

    #[test]
    fn depth_zero_is_base() {
        let r = Partition::from_index_blocks(4, &[vec![0, 1], vec![2], vec![3]]).unwrap();
        let lift = superhyper_lift(&r, 0).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(lift.related(&Level::Base(a), &Level::Base(b)).unwrap(), r.block_of(a) == r.block_of(b));
            }
        }
        let x = idx(4, &[0, 2]);
        let (lo, up) = superhyper_approx(&lift, &Level::from_subset(&x)).unwrap();
        let p = pawlak(&r, &x).unwrap();
        assert_eq!(lo, p.lower.iter().map(Level::Base).collect::<Vec<_>>());
        assert_eq!(up, p.upper.iter().map(Level::Base).collect::<Vec<_>>());
    }

    #[test]
    fn lift_guards() {
        assert!(superhyper_lift(&Partition::discrete(7), 1).is_err());
        assert!(superhyper_lift(&Partition::discrete(6), 1).is_ok());
        assert!(superhyper_lift(&Partition::discrete(5), 2).is_err());
        assert!(superhyper_lift(&Partition::discrete(4), 2).is_ok());
        assert!(superhyper_lift(&Partition::discrete(2), 3).is_err());
        let lift = grocery();
        assert!(lift.related(&Level::Base(0), &bundle(&[0])).is_err());
        assert!(superhyper_approx(&lift, &bundle(&[0])).is_err());
    }

    #[test]
    fn depth_two_carrier() {
        let r = Partition::from_index_blocks(2, &[vec![0, 1]]).unwrap();
        let lift = superhyper_lift(&r, 2).unwrap();
        assert_eq!(lift.carrier().len(), 16);
        // signatures: ∅, {∅}, {{c}}, {∅,{c}}
        let sigs: std::collections::BTreeSet<Level> = lift.carrier().iter().map(|a| lift.signature(a)).collect();
        assert_eq!(sigs.len(), 4);
    }

    /// The definition read literally: each side covers the other.
    fn mutual_cover(r: &Partition, k: usize, a: &Level, b: &Level) -> bool {
        match (a, b) {
            (Level::Base(x), Level::Base(y)) if k == 0 => r.block_of(*x) == r.block_of(*y),
            (Level::Set(p), Level::Set(q)) if k > 0 => {
                p.iter().all(|u| q.iter().any(|v| mutual_cover(r, k - 1, u, v)))
                    && q.iter().all(|v| p.iter().any(|u| mutual_cover(r, k - 1, u, v)))
            }
            _ => false,
        }
    }

    proptest! {
        #[test]
        fn signature_matches_mutual_cover(labels in proptest::collection::vec(0u8..3, 4)) {
            let r = Partition::from_labels(&labels).unwrap();
            let lift = superhyper_lift(&r, 1).unwrap();
            let all = lift.carrier();
            for a in &all {
                for b in &all {
                    prop_assert_eq!(lift.related(a, b).unwrap(), mutual_cover(&r, 1, a, b));
                }
            }
        }

        #[test]
        fn depth_two_signature_sampled(labels in proptest::collection::vec(0u8..2, 3), ma in any::<u8>(), mb in any::<u8>()) {
            let r = Partition::from_labels(&labels).unwrap();
            let lift = superhyper_lift(&r, 2).unwrap();
            let sets: Vec<Level> = (0..8u64).map(|m| Level::from_subset(&Subset::from_mask(3, m))).collect();
            let pick = |m: u8| Level::set((0..8).filter(|i| m >> i & 1 == 1).map(|i| sets[i].clone()).collect());
            let (a, b) = (pick(ma), pick(mb));
            prop_assert_eq!(lift.related(&a, &b).unwrap(), mutual_cover(&r, 2, &a, &b));
        }

        #[test]
        fn lifted_is_equivalence(labels in proptest::collection::vec(0u8..3, 1..=4), picks in proptest::collection::vec((0usize..16, 0usize..16, 0usize..16), 20)) {
            let r = Partition::from_labels(&labels).unwrap();
            let lift = superhyper_lift(&r, 1).unwrap();
            let all = lift.carrier();
            for (i, j, k) in picks {
                let (a, b, c) = (&all[i % all.len()], &all[j % all.len()], &all[k % all.len()]);
                prop_assert!(lift.related(a, a).unwrap());
                prop_assert_eq!(lift.related(a, b).unwrap(), lift.related(b, a).unwrap());
                if lift.related(a, b).unwrap() && lift.related(b, c).unwrap() {
                    prop_assert!(lift.related(a, c).unwrap());
                }
            }
        }

        #[test]
        fn family_pairs_nest(labels in proptest::collection::vec(0u8..3, 1..=8), images in proptest::collection::vec(any::<u64>(), 1..5)) {
            let n = labels.len();
            let r = Partition::from_labels(&labels).unwrap();
            let mut params: Vec<Param> = images.iter().enumerate()
                .map(|(i, &m)| Param { key: vec![i.to_string()], members: Subset::from_mask(n, m) }).collect();
            params.push(Param { key: vec!["all".into()], members: Subset::full(n) });
            let fam = ParamFamily::new(ParamKind::Hyper, n, params).unwrap();
            let out = param_family_approx(&fam, &r).unwrap();
            for (_, p) in &out {
                prop_assert!(p.lower.is_subset(&p.upper));
            }
            let last = &out.last().unwrap().1;
            prop_assert!(last.lower == Subset::full(n) && last.upper == Subset::full(n));
        }

        #[test]
        fn soft_bounds(n in 1usize..=8, images in proptest::collection::vec(any::<u64>(), 1..5), bm in any::<u64>()) {
            let params = images.iter().enumerate()
                .map(|(i, &m)| Param { key: vec![i.to_string()], members: Subset::from_mask(n, m) }).collect();
            let fam = ParamFamily::new(ParamKind::Soft, n, params).unwrap();
            let b = Subset::from_mask(n, bm);
            let p = soft_rough(&fam, &b).unwrap();
            prop_assert!(p.lower.is_subset(&p.upper));
            prop_assert!(p.lower.is_subset(&b));
            prop_assert!(p.upper.is_subset(&fam.images_union()));
        }

        #[test]
        fn strait_equals_pawlak(labels in proptest::collection::vec(0u8..4, 1..=8), xm in any::<u64>()) {
            let n = labels.len();
            let part = Partition::from_labels(&labels).unwrap();
            let params = part.blocks().iter().enumerate()
                .map(|(i, b)| Param { key: vec![i.to_string()], members: b.clone() }).collect();
            let fam = ParamFamily::new(ParamKind::Strait, n, params).unwrap();
            let x = Subset::from_mask(n, xm);
            let (p, _) = strait_approx(&fam, &x).unwrap();
            prop_assert!(p.same_sets(&pawlak(&part, &x).unwrap()));
        }
    }
}
