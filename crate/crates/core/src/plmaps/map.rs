use std::cmp::Ordering;
use std::fmt;

use serde_json::{json, Value};

use super::PlError;
use crate::exactnum::FieldElem;
use crate::json::{self, FormatError};
use crate::subdivision::Ctx;

fn check_points(ctx: &Ctx, pts: &[FieldElem]) -> Result<(), PlError> {
    if pts.len() < 2 {
        return Err(PlError::BadEndpoints);
    }
    if pts.iter().any(|p| p.context().poly() != ctx.poly()) {
        return Err(PlError::ContextMismatch);
    }
    if !pts[0].is_zero() || pts[pts.len() - 1] != FieldElem::one(ctx) {
        return Err(PlError::BadEndpoints);
    }
    for (i, w) in pts.windows(2).enumerate() {
        if w[0].compare(&w[1]) != Some(Ordering::Less) {
            return Err(PlError::NotIncreasing { index: i + 1 });
        }
    }
    Ok(())
}

/// Strictly increasing points from `0` to `1`.
#[derive(Clone, Debug)]
pub struct Partition {
    ctx: Ctx,
    points: Vec<FieldElem>,
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.poly() == other.ctx.poly() && self.points == other.points
    }
}

impl Eq for Partition {}

impl Partition {
    pub fn new(ctx: &Ctx, points: Vec<FieldElem>) -> Result<Self, PlError> {
        check_points(ctx, &points)?;
        Ok(Partition { ctx: ctx.clone(), points })
    }

    /// Partition whose consecutive cells have the given lengths.
    pub fn from_lengths(ctx: &Ctx, lengths: &[FieldElem]) -> Result<Self, PlError> {
        let mut points = vec![FieldElem::zero(ctx)];
        for l in lengths {
            let last = points.last().expect("nonempty");
            points.push(last + l);
        }
        Self::new(ctx, points)
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn points(&self) -> &[FieldElem] {
        &self.points
    }

    pub fn cells(&self) -> usize {
        self.points.len() - 1
    }

    pub fn lengths(&self) -> Vec<FieldElem> {
        self.points.windows(2).map(|w| &w[1] - &w[0]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionPair {
    pub domain: Partition,
    pub codomain: Partition,
}

impl PartitionPair {
    pub fn new(domain: Partition, codomain: Partition) -> Result<Self, PlError> {
        if domain.ctx.poly() != codomain.ctx.poly() {
            return Err(PlError::ContextMismatch);
        }
        if domain.points.len() != codomain.points.len() {
            return Err(PlError::LengthMismatch {
                domain: domain.cells(),
                codomain: codomain.cells(),
            });
        }
        Ok(PartitionPair { domain, codomain })
    }
}

/// `(numerator, denominator)`
pub type Fraction = (i64, i64);

type Coord = fn(&(FieldElem, FieldElem)) -> &FieldElem;

/// Orientation-preserving PL homeomorphism of `[0, 1]`, stored as its
/// vertex list. Canonical: consecutive slopes differ.
#[derive(Clone)]
pub struct PlMap {
    ctx: Ctx,
    vertices: Vec<(FieldElem, FieldElem)>,
}

fn same_slope(a: &(FieldElem, FieldElem), b: &(FieldElem, FieldElem), c: &(FieldElem, FieldElem)) -> bool {
    // (y1 - y0)(x2 - x1) = (y2 - y1)(x1 - x0)
    let l = &(&b.1 - &a.1) * &(&c.0 - &b.0);
    let r = &(&c.1 - &b.1) * &(&b.0 - &a.0);
    l == r
}

impl PlMap {
    pub fn new(ctx: &Ctx, vertices: Vec<(FieldElem, FieldElem)>) -> Result<Self, PlError> {
        let xs: Vec<FieldElem> = vertices.iter().map(|v| v.0.clone()).collect();
        let ys: Vec<FieldElem> = vertices.iter().map(|v| v.1.clone()).collect();
        check_points(ctx, &xs)?;
        check_points(ctx, &ys)?;
        Ok(Self::canonical(ctx, vertices))
    }

    fn canonical(ctx: &Ctx, vertices: Vec<(FieldElem, FieldElem)>) -> Self {
        let mut out: Vec<(FieldElem, FieldElem)> = Vec::with_capacity(vertices.len());
        for v in vertices {
            while out.len() >= 2 && same_slope(&out[out.len() - 2], &out[out.len() - 1], &v) {
                out.pop();
            }
            out.push(v);
        }
        PlMap { ctx: ctx.clone(), vertices: out }
    }

    pub fn identity(ctx: &Ctx) -> Self {
        let (z, o) = (FieldElem::zero(ctx), FieldElem::one(ctx));
        PlMap { ctx: ctx.clone(), vertices: vec![(z.clone(), z), (o.clone(), o)] }
    }

    /// Vertices given by rationals, for contexts where that suffices.
    pub fn from_rationals(ctx: &Ctx, pts: &[(Fraction, Fraction)]) -> Result<Self, PlError> {
        let q = |(n, d): (i64, i64)| FieldElem::from_rational(ctx, num_rational::BigRational::new(n.into(), d.into()));
        Self::new(ctx, pts.iter().map(|&(x, y)| (q(x), q(y))).collect())
    }

    pub fn context(&self) -> &Ctx {
        &self.ctx
    }

    pub fn vertices(&self) -> &[(FieldElem, FieldElem)] {
        &self.vertices
    }

    /// Vertices other than `(0,0)` and `(1,1)`.
    pub fn breakpoints(&self) -> &[(FieldElem, FieldElem)] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.vertices.len() == 2
    }

    pub fn slopes(&self) -> Vec<FieldElem> {
        self.vertices
            .windows(2)
            .map(|w| {
                (&w[1].1 - &w[0].1)
                    .checked_div(&(&w[1].0 - &w[0].0))
                    .expect("strictly increasing")
            })
            .collect()
    }

    pub fn to_partition_pair(&self) -> PartitionPair {
        PartitionPair {
            domain: Partition { ctx: self.ctx.clone(), points: self.vertices.iter().map(|v| v.0.clone()).collect() },
            codomain: Partition { ctx: self.ctx.clone(), points: self.vertices.iter().map(|v| v.1.clone()).collect() },
        }
    }

    fn locate(pts: &[(FieldElem, FieldElem)], x: &FieldElem, coord: fn(&(FieldElem, FieldElem)) -> &FieldElem) -> usize {
        // largest i with pts[i] <= x, capped so that i + 1 is valid
        let (mut lo, mut hi) = (0, pts.len() - 1);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if coord(&pts[mid]) <= x {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn interpolate(&self, x: &FieldElem, forward: bool) -> Result<FieldElem, PlError> {
        if x.context().poly() != self.ctx.poly() {
            return Err(PlError::ContextMismatch);
        }
        if x.sign() == Ordering::Less || *x > FieldElem::one(&self.ctx) {
            return Err(PlError::OutOfDomain);
        }
        let (src, dst): (Coord, Coord) =
            if forward { (|v| &v.0, |v| &v.1) } else { (|v| &v.1, |v| &v.0) };
        let i = Self::locate(&self.vertices, x, src);
        let (a, b) = (&self.vertices[i], &self.vertices[i + 1]);
        if src(a) == x {
            return Ok(dst(a).clone());
        }
        let t = (x - src(a)).checked_div(&(src(b) - src(a))).expect("strictly increasing");
        Ok(dst(a) + &(&t * &(dst(b) - dst(a))))
    }

    pub fn eval(&self, x: &FieldElem) -> Result<FieldElem, PlError> {
        self.interpolate(x, true)
    }

    pub fn eval_inverse(&self, y: &FieldElem) -> Result<FieldElem, PlError> {
        self.interpolate(y, false)
    }

    pub fn invert(&self) -> PlMap {
        PlMap {
            ctx: self.ctx.clone(),
            vertices: self.vertices.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
        }
    }

    /// `(self * g)(t) = g(self(t))`.
    pub fn compose(&self, g: &PlMap) -> Result<PlMap, PlError> {
        if self.ctx.poly() != g.ctx.poly() {
            return Err(PlError::ContextMismatch);
        }
        // merge this map's breakpoints with the pullbacks of g's
        let mut ts: Vec<FieldElem> = Vec::with_capacity(self.vertices.len() + g.vertices.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vertices.len() || j < g.vertices.len() {
            let a = self.vertices.get(i).map(|v| &v.1);
            let b = g.vertices.get(j).map(|v| &v.0);
            let take_a = match (a, b) {
                (Some(a), Some(b)) => match a.compare(b).expect("same context") {
                    Ordering::Less => Some(true),
                    Ordering::Greater => Some(false),
                    Ordering::Equal => None,
                },
                (Some(_), None) => Some(true),
                _ => Some(false),
            };
            match take_a {
                Some(true) => {
                    ts.push(self.vertices[i].0.clone());
                    i += 1;
                }
                Some(false) => {
                    ts.push(self.eval_inverse(&g.vertices[j].0)?);
                    j += 1;
                }
                None => {
                    ts.push(self.vertices[i].0.clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        let vertices = ts
            .into_iter()
            .map(|t| {
                let y = g.eval(&self.eval(&t)?)?;
                Ok((t, y))
            })
            .collect::<Result<Vec<_>, PlError>>()?;
        Ok(Self::canonical(&self.ctx, vertices))
    }

    pub fn pow(&self, k: i64) -> PlMap {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut acc = PlMap::identity(&self.ctx);
        for _ in 0..k.unsigned_abs() {
            acc = acc.compose(&base).expect("same context");
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        let vs: Vec<Value> = self
            .vertices
            .iter()
            .map(|(x, y)| json!([json::field_coords(x), json::field_coords(y)]))
            .collect();
        json!({ "context": json::context(&self.ctx), "vertices": vs })
    }

    pub fn from_json(v: &Value) -> Result<PlMap, FormatError> {
        let ctx = json::parse_context(json::get(v, "context")?)?;
        let vertices = json::array(json::get(v, "vertices")?, "vertices")?
            .iter()
            .map(|p| {
                let p = json::array(p, "vertex")?;
                if p.len() != 2 {
                    return Err(FormatError::new("vertex must be an [x, y] pair"));
                }
                Ok((json::parse_field_coords(&ctx, &p[0])?, json::parse_field_coords(&ctx, &p[1])?))
            })
            .collect::<Result<Vec<_>, _>>()?;
        PlMap::new(&ctx, vertices).map_err(|e| FormatError::new(e.to_string()))
    }
}

/// The PL bijection sending each domain cell linearly onto the matching
/// codomain cell.
pub fn from_partition_pair(pp: &PartitionPair) -> PlMap {
    let vertices = pp
        .domain
        .points
        .iter()
        .cloned()
        .zip(pp.codomain.points.iter().cloned())
        .collect();
    PlMap::canonical(&pp.domain.ctx, vertices)
}

impl PartialEq for PlMap {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.poly() == other.ctx.poly()
            && self.vertices.len() == other.vertices.len()
            && self.vertices.iter().zip(&other.vertices).all(|(a, b)| a.0 == b.0 && a.1 == b.1)
    }
}

impl Eq for PlMap {}

impl fmt::Debug for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlMap[{}]", self)
    }
}

impl fmt::Display for PlMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, y)) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({x}, {y})")?;
        }
        Ok(())
    }
}
