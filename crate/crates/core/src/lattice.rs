//! Planar lattice geometry with exact rational coordinates.
//!
//! Points carry rational exponents (x may be fractional in `K[x^{±1/l}, y]`),
//! directions are primitive integer pairs. The ordering on directions is the
//! counterclockwise order on the arc from `(0,-1)` to `(1,0)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Exact exponent type.
pub type Exp = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("point {0} lies on the diagonal Z(1,1) and has no associated direction")]
    DegeneratePoint(LatticePoint),
    #[error("direction {0} lies outside the arc from (0,-1) to (1,0)")]
    OutOfArc(Direction),
    #[error("({0},{1}) is not a direction (gcd must be 1)")]
    NotPrimitive(i64, i64),
    #[error("empty support")]
    EmptySupport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    pub x: Exp,
    pub y: Exp,
}

impl LatticePoint {
    pub fn new(x: Exp, y: Exp) -> Self {
        LatticePoint { x, y }
    }

    pub fn int(x: i64, y: i64) -> Self {
        LatticePoint {
            x: Exp::from_integer(x),
            y: Exp::from_integer(y),
        }
    }

    pub fn origin() -> Self {
        LatticePoint::int(0, 0)
    }

    /// Integer coordinates, when both are integral.
    pub fn as_int(&self) -> Option<(i64, i64)> {
        if self.x.is_integer() && self.y.is_integer() {
            Some((self.x.to_integer(), self.y.to_integer()))
        } else {
            None
        }
    }

    pub fn scale(&self, k: Exp) -> Self {
        LatticePoint::new(self.x * k, self.y * k)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<i64> for LatticePoint {
    type Output = LatticePoint;
    fn mul(self, k: i64) -> LatticePoint {
        LatticePoint::new(self.x * k, self.y * k)
    }
}

/// A primitive integer pair `(ρ,σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Direction {
    rho: i64,
    sigma: i64,
}

impl Direction {
    pub fn new(rho: i64, sigma: i64) -> Result<Self, LatticeError> {
        if rho.gcd(&sigma) != 1 {
            return Err(LatticeError::NotPrimitive(rho, sigma));
        }
        Ok(Direction { rho, sigma })
    }

    /// Divides a nonzero integer pair by its gcd.
    pub fn primitive(a: i64, b: i64) -> Option<Self> {
        let g = a.gcd(&b);
        if g == 0 {
            return None;
        }
        Some(Direction {
            rho: a / g,
            sigma: b / g,
        })
    }

    pub fn rho(&self) -> i64 {
        self.rho
    }

    pub fn sigma(&self) -> i64 {
        self.sigma
    }

    /// `-ρ-σ`, positive exactly on the lower arc.
    pub fn gap(&self) -> i64 {
        -self.rho - self.sigma
    }

    /// Membership in the open arc `](0,-1),(1,-1)[`.
    pub fn in_lower_arc(&self) -> bool {
        self.rho > 0 && self.rho + self.sigma < 0
    }

    /// Membership in the open arc `](0,-1),(1,0)[`.
    pub fn in_open_quadrant(&self) -> bool {
        self.rho > 0 && self.sigma < 0
    }

    /// Membership in the closed arc `[(0,-1),(1,0)]`.
    pub fn in_closed_quadrant(&self) -> bool {
        self.rho >= 0 && self.sigma <= 0
    }

    /// The edge vector `(-σ,ρ)` along which `val` is constant.
    pub fn edge_step(&self) -> (i64, i64) {
        (-self.sigma, self.rho)
    }
}

impl Neg for Direction {
    type Output = Direction;
    fn neg(self) -> Direction {
        Direction {
            rho: -self.rho,
            sigma: -self.sigma,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rho, self.sigma)
    }
}

/// `ρ·x + σ·y`.
pub fn val(d: Direction, p: &LatticePoint) -> Exp {
    p.x * d.rho + p.y * d.sigma
}

/// `ρ₁σ₂ − σ₁ρ₂`.
pub fn cross(d1: Direction, d2: Direction) -> i64 {
    d1.rho * d2.sigma - d1.sigma * d2.rho
}

/// The primitive counterclockwise normal of `p`, i.e. the direction proportional
/// to `(-y, x)`. It annihilates `p` under [`val`].
pub fn dir_of(p: &LatticePoint) -> Result<Direction, LatticeError> {
    if p.x == p.y && p.x.is_integer() {
        return Err(LatticeError::DegeneratePoint(*p));
    }
    let den = p.x.denom().lcm(p.y.denom());
    let a = (-p.y * den).to_integer();
    let b = (p.x * den).to_integer();
    Direction::primitive(a, b).ok_or(LatticeError::DegeneratePoint(*p))
}

/// Strict counterclockwise order on the closed arc `[(0,-1),(1,0)]`.
pub fn dir_lt(d1: Direction, d2: Direction) -> Result<bool, LatticeError> {
    for d in [d1, d2] {
        if !d.in_closed_quadrant() {
            return Err(LatticeError::OutOfArc(d));
        }
    }
    Ok(cross(d1, d2) > 0)
}

/// Total order used for sorting directions that lie inside the arc.
pub fn dir_cmp(d1: Direction, d2: Direction) -> Ordering {
    0.cmp(&cross(d1, d2))
}

fn turn(o: &LatticePoint, a: &LatticePoint, b: &LatticePoint) -> Exp {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Corners of the convex hull (monotone chain), counterclockwise from the
/// lexicographically least corner. Collinear inputs give their two extremes.
pub fn newton_polygon(support: &[LatticePoint]) -> Result<Vec<LatticePoint>, LatticeError> {
    let mut pts: Vec<LatticePoint> = support.to_vec();
    pts.sort();
    pts.dedup();
    match pts.len() {
        0 => return Err(LatticeError::EmptySupport),
        1 | 2 => return Ok(pts),
        _ => {}
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && !turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    if lower.len() == 2 && lower[0] == lower[1] {
        lower.pop();
    }
    Ok(lower)
}

/// One hull edge: endpoints in counterclockwise order and its outward direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HullEdge {
    pub start: LatticePoint,
    pub end: LatticePoint,
    pub dir: Direction,
}

/// Outward primitive normal of the edge `a -> b` of a counterclockwise polygon.
pub fn outward_normal(a: &LatticePoint, b: &LatticePoint) -> Option<Direction> {
    let e = *b - *a;
    if e.x.is_zero() && e.y.is_zero() {
        return None;
    }
    let den = e.x.denom().lcm(e.y.denom());
    Direction::primitive((e.y * den).to_integer(), (-e.x * den).to_integer())
}

/// All edges of a hull in counterclockwise order. A segment yields both
/// orientations.
pub fn hull_edges(corners: &[LatticePoint]) -> Vec<HullEdge> {
    let n = corners.len();
    if n < 2 {
        return Vec::new();
    }
    (0..n)
        .filter_map(|i| {
            let a = corners[i];
            let b = corners[(i + 1) % n];
            outward_normal(&a, &b).map(|dir| HullEdge { start: a, end: b, dir })
        })
        .collect()
}

/// Hull edges whose outward direction lies in `](0,-1),(1,-1)[`, in increasing
/// direction order.
pub fn lower_side_edges(corners: &[LatticePoint]) -> Vec<HullEdge> {
    let mut edges: Vec<HullEdge> = hull_edges(corners)
        .into_iter()
        .filter(|e| e.dir.in_lower_arc())
        .collect();
    edges.sort_by(|a, b| dir_cmp(a.dir, b.dir));
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(r: i64, s: i64) -> Direction {
        Direction::new(r, s).unwrap()
    }

    fn p(x: i64, y: i64) -> LatticePoint {
        LatticePoint::int(x, y)
    }

    #[test]
    fn valuations() {
        assert_eq!(val(d(1, -1), &p(3, 2)), Exp::from_integer(1));
        assert_eq!(val(d(5, -8), &p(14, 8)), Exp::from_integer(6));
        assert_eq!(val(d(2, -3), &p(1, 0)), Exp::from_integer(2));
    }

    #[test]
    fn cross_products() {
        assert_eq!(cross(d(0, -1), d(1, -2)), 1);
        assert_eq!(cross(d(1, -2), d(2, -3)), 1);
        assert_eq!(cross(d(1, -1), d(1, -1)), 0);
    }

    #[test]
    fn dir_of_rotates() {
        assert_eq!(dir_of(&p(2, 1)).unwrap(), d(-1, 2));
        assert_eq!(-dir_of(&(p(1, 0) + p(1, 1) * 2)).unwrap(), d(2, -3));
        assert!(matches!(dir_of(&p(1, 1)), Err(LatticeError::DegeneratePoint(_))));
        assert!(dir_of(&p(0, 0)).is_err());
        let half = LatticePoint::new(Exp::new(1, 2), Exp::new(1, 2));
        assert_eq!(dir_of(&half).unwrap(), d(-1, 1));
    }

    #[test]
    fn direction_order() {
        assert!(dir_lt(d(0, -1), d(1, -2)).unwrap());
        assert!(dir_lt(d(1, -2), d(5, -8)).unwrap());
        assert!(!dir_lt(d(1, -1), d(1, -1)).unwrap());
        assert!(matches!(dir_lt(d(-1, 2), d(1, -1)), Err(LatticeError::OutOfArc(_))));
        assert!(Direction::new(2, -4).is_err());
    }

    #[test]
    fn hulls() {
        assert_eq!(
            newton_polygon(&[p(0, 0), p(1, 0), p(3, 1)]).unwrap(),
            vec![p(0, 0), p(1, 0), p(3, 1)]
        );
        assert_eq!(newton_polygon(&[p(1, 0), p(3, 1)]).unwrap(), vec![p(1, 0), p(3, 1)]);
        assert_eq!(
            newton_polygon(&[p(0, 0), p(1, 1), p(2, 2), p(3, 3)]).unwrap(),
            vec![p(0, 0), p(3, 3)]
        );
        assert_eq!(newton_polygon(&[p(2, 2), p(2, 2)]).unwrap(), vec![p(2, 2)]);
        assert_eq!(newton_polygon(&[]), Err(LatticeError::EmptySupport));
    }

    #[test]
    fn lower_edges() {
        let e = lower_side_edges(&newton_polygon(&[p(3, 1), p(1, 0)]).unwrap());
        assert_eq!(e.len(), 1);
        assert_eq!((e[0].start, e[0].end, e[0].dir), (p(1, 0), p(3, 1), d(1, -2)));
        assert!(lower_side_edges(&newton_polygon(&[p(1, 0), p(0, 1)]).unwrap()).is_empty());
        assert!(lower_side_edges(&[p(4, 1)]).is_empty());
    }
}
