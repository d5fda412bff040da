//! Piecewise-linear memberships, triangular numbers, and Z-valued sets.

use crate::error::{check_len, Error, Result};
use crate::foundation::Partition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlDomain {
    Real,
    Unit,
}

/// Linear between breakpoints, zero outside `[first, last]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearFn {
    points: Vec<(f64, f64)>,
    pub domain: PlDomain,
}

impl PiecewiseLinearFn {
    pub fn new(points: Vec<(f64, f64)>, domain: PlDomain) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidParameter("membership needs at least one breakpoint".into()));
        }
        for w in points.windows(2) {
            if !(w[0].0 < w[1].0) {
                return Err(Error::InvalidParameter("breakpoint abscissas must be strictly increasing".into()));
            }
        }
        for &(x, y) in &points {
            if !x.is_finite() || !(0.0..=1.0).contains(&y) {
                return Err(Error::InvalidParameter(format!("breakpoint ({x}, {y}) is out of range")));
            }
            if domain == PlDomain::Unit && !(0.0..=1.0).contains(&x) {
                return Err(Error::InvalidParameter(format!("abscissa {x} is outside [0,1]")));
            }
        }
        Ok(PiecewiseLinearFn { points, domain })
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, t: f64) -> f64 {
        let p = &self.points;
        if t < p[0].0 || t > p[p.len() - 1].0 {
            return 0.0;
        }
        match p.iter().position(|&(x, _)| x >= t) {
            Some(0) => p[0].1,
            Some(i) => {
                let ((x0, y0), (x1, y1)) = (p[i - 1], p[i]);
                if t == x1 {
                    y1
                } else {
                    y0 + (y1 - y0) * (t - x0) / (x1 - x0)
                }
            }
            None => 0.0,
        }
    }

    /// No jump where the support begins or ends.
    pub fn is_continuous(&self) -> bool {
        self.points[0].1 == 0.0 && self.points[self.points.len() - 1].1 == 0.0
    }
}

fn combine(f: &PiecewiseLinearFn, g: &PiecewiseLinearFn, pick: fn(f64, f64) -> f64) -> Result<PiecewiseLinearFn> {
    if f.domain != g.domain {
        return Err(Error::InvalidParameter("memberships live on different domains".into()));
    }
    if !f.is_continuous() || !g.is_continuous() {
        return Err(Error::Precondition("min/max needs memberships that vanish at both support ends".into()));
    }
    let mut xs: Vec<f64> = f.points.iter().chain(&g.points).map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let mut all = Vec::with_capacity(xs.len() * 2);
    for (i, &x) in xs.iter().enumerate() {
        if i > 0 {
            // both sides linear on [x0, x]; add the crossing if the order flips
            let x0 = xs[i - 1];
            let (d0, d1) = (f.eval(x0) - g.eval(x0), f.eval(x) - g.eval(x));
            if d0 * d1 < 0.0 {
                let t = x0 + (x - x0) * d0 / (d0 - d1);
                if t > x0 && t < x {
                    all.push(t);
                }
            }
        }
        all.push(x);
    }
    let mut pts: Vec<(f64, f64)> = all.into_iter().map(|x| (x, pick(f.eval(x), g.eval(x)))).collect();
    // trim zero runs at either end down to a single zero point
    while pts.len() > 1 && pts[0].1 == 0.0 && pts[1].1 == 0.0 {
        pts.remove(0);
    }
    while pts.len() > 1 && pts[pts.len() - 1].1 == 0.0 && pts[pts.len() - 2].1 == 0.0 {
        pts.pop();
    }
    PiecewiseLinearFn::new(pts, f.domain)
}

pub fn pl_min(f: &PiecewiseLinearFn, g: &PiecewiseLinearFn) -> Result<PiecewiseLinearFn> {
    combine(f, g, f64::min)
}

pub fn pl_max(f: &PiecewiseLinearFn, g: &PiecewiseLinearFn) -> Result<PiecewiseLinearFn> {
    combine(f, g, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Triangular {
    pub membership: PiecewiseLinearFn,
    pub centroid: f64,
}

pub fn triangular(a: f64, b: f64, c: f64, domain: PlDomain) -> Result<Triangular> {
    if !(a <= b && b <= c) {
        return Err(Error::InvalidParameter(format!("triangular needs a ≤ b ≤ c, got ({a}, {b}, {c})")));
    }
    let pts = match (a < b, b < c) {
        (true, true) => vec![(a, 0.0), (b, 1.0), (c, 0.0)],
        (false, true) => vec![(a, 1.0), (c, 0.0)],
        (true, false) => vec![(a, 0.0), (c, 1.0)],
        (false, false) => vec![(a, 1.0)],
    };
    Ok(Triangular { membership: PiecewiseLinearFn::new(pts, domain)?, centroid: (a + b + c) / 3.0 })
}

/// A value restriction on the reals and a reliability restriction on `[0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZNumber {
    pub value: PiecewiseLinearFn,
    pub reliability: PiecewiseLinearFn,
}

impl ZNumber {
    pub fn new(value: PiecewiseLinearFn, reliability: PiecewiseLinearFn) -> Result<Self> {
        if reliability.domain != PlDomain::Unit {
            return Err(Error::InvalidParameter("reliability must be a membership on [0,1]".into()));
        }
        Ok(ZNumber { value, reliability })
    }

    pub fn meet(&self, o: &ZNumber) -> Result<ZNumber> {
        Ok(ZNumber { value: pl_min(&self.value, &o.value)?, reliability: pl_min(&self.reliability, &o.reliability)? })
    }

    pub fn join(&self, o: &ZNumber) -> Result<ZNumber> {
        Ok(ZNumber { value: pl_max(&self.value, &o.value)?, reliability: pl_max(&self.reliability, &o.reliability)? })
    }
}

pub fn z_rough(p: &Partition, a: &[ZNumber]) -> Result<(Vec<ZNumber>, Vec<ZNumber>)> {
    check_len(p.universe_len(), a.len())?;
    let mut lo_blocks = Vec::new();
    let mut up_blocks = Vec::new();
    for b in p.blocks() {
        let mut it = b.iter();
        let first = a[it.next().expect("blocks are nonempty")].clone();
        let (mut lo, mut up) = (first.clone(), first);
        for y in it {
            lo = lo.meet(&a[y])?;
            up = up.join(&a[y])?;
        }
        lo_blocks.push(lo);
        up_blocks.push(up);
    }
    let n = a.len();
    Ok(((0..n).map(|x| lo_blocks[p.block_of(x)].clone()).collect(), (0..n).map(|x| up_blocks[p.block_of(x)].clone()).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csat_triangle() {
        let t = triangular(3.0, 4.0, 5.0, PlDomain::Real).unwrap();
        assert_eq!(t.centroid, 4.0);
        let m = &t.membership;
        assert_eq!([1.0, 2.0, 3.0, 4.0, 5.0].map(|x| m.eval(x)), [0.0, 0.0, 0.0, 1.0, 0.0]);
        assert!((m.eval(3.5) - 0.5).abs() < 1e-12);
        assert!(triangular(3.0, 2.0, 5.0, PlDomain::Real).is_err());
    }

    #[test]
    fn degenerate_triangles() {
        let p = triangular(2.0, 2.0, 2.0, PlDomain::Real).unwrap().membership;
        assert_eq!((p.eval(2.0), p.eval(1.999), p.eval(2.001)), (1.0, 0.0, 0.0));
        let l = triangular(1.0, 1.0, 3.0, PlDomain::Real).unwrap().membership;
        assert_eq!((l.eval(1.0), l.eval(2.0), l.eval(0.5)), (1.0, 0.5, 0.0));
        let r = triangular(1.0, 3.0, 3.0, PlDomain::Real).unwrap().membership;
        assert_eq!((r.eval(3.0), r.eval(2.0)), (1.0, 0.5));
        assert!(pl_min(&l, &r).is_err());
    }

    fn tri(a: f64, b: f64, c: f64, d: PlDomain) -> PiecewiseLinearFn {
        triangular(a, b, c, d).unwrap().membership
    }

    #[test]
    fn fever_z_rough() {
        let z = |t: (f64, f64, f64), r: (f64, f64, f64)| {
            ZNumber::new(tri(t.0, t.1, t.2, PlDomain::Real), tri(r.0, r.1, r.2, PlDomain::Unit)).unwrap()
        };
        let a = vec![
            z((37.5, 38.0, 38.6), (0.70, 0.80, 0.90)),
            z((37.3, 37.8, 38.4), (0.55, 0.65, 0.75)),
            z((36.8, 37.2, 37.7), (0.80, 0.90, 1.00)),
            z((37.0, 37.4, 38.0), (0.60, 0.75, 0.90)),
        ];
        let p = Partition::from_index_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let (lo, up) = z_rough(&p, &a).unwrap();
        assert_eq!(lo[0], lo[1]);
        for t in [37.4, 37.6, 37.9, 38.0, 38.3] {
            let (f, g) = (a[0].value.eval(t), a[1].value.eval(t));
            assert!((lo[0].value.eval(t) - f.min(g)).abs() < 1e-9);
            assert!((up[1].value.eval(t) - f.max(g)).abs() < 1e-9);
        }
        // T1 and T2 cross once on their shared falling edges
        let peak = lo[0].value.points().iter().map(|p| p.1).fold(0.0, f64::max);
        assert!(peak > 0.5 && peak < 1.0);
        assert!((up[2].reliability.eval(0.9) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reliability_domain_checked() {
        assert!(ZNumber::new(tri(1.0, 2.0, 3.0, PlDomain::Real), tri(1.0, 2.0, 3.0, PlDomain::Real)).is_err());
        assert!(PiecewiseLinearFn::new(vec![(0.0, 0.0), (2.0, 0.0)], PlDomain::Unit).is_err());
    }

    fn arb_pl() -> impl Strategy<Value = PiecewiseLinearFn> {
        (proptest::collection::vec((0.1f64..2.0, 0.0f64..=1.0), 1..5), -3.0f64..3.0).prop_map(|(steps, start)| {
            let mut x = start;
            let mut pts = vec![(x, 0.0)];
            for (dx, y) in steps {
                x += dx;
                pts.push((x, y));
            }
            x += 0.5;
            pts.push((x, 0.0));
            PiecewiseLinearFn::new(pts, PlDomain::Real).unwrap()
        })
    }

    proptest! {
        #[test]
        fn min_max_exact(f in arb_pl(), g in arb_pl(), ts in proptest::collection::vec(-4.0f64..14.0, 40)) {
            let lo = pl_min(&f, &g).unwrap();
            let hi = pl_max(&f, &g).unwrap();
            for t in ts {
                prop_assert!((lo.eval(t) - f.eval(t).min(g.eval(t))).abs() < 1e-9);
                prop_assert!((hi.eval(t) - f.eval(t).max(g.eval(t))).abs() < 1e-9);
            }
        }
    }
}
