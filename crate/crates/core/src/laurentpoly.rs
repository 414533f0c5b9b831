//! Sparse exact arithmetic in `K[x^{±1/l}, y]` over the rationals.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{self, dir_cmp, Direction, Exp, LatticePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("term x^({0})y^{1} has x-exponent -1 and is not in the image of D_x")]
    NotInImage(Exp, Exp),
    #[error("substituted value must not involve y")]
    NotPureX,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// A finitely supported element of `K[x^{±1/l}, y]`. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<LatticePoint, BigRational>,
}

fn exp_to_big(e: Exp) -> BigRational {
    BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()))
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        LaurentPoly::monomial(c, LatticePoint::origin())
    }

    pub fn monomial(c: BigRational, p: LatticePoint) -> Self {
        debug_assert!(
            p.y.is_integer() && !p.y.is_negative(),
            "y-exponent must be a nonnegative integer"
        );
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        LaurentPoly { terms }
    }

    /// `c·x^a·y^b` with integer exponents.
    pub fn term(c: BigRational, a: i64, b: i64) -> Self {
        LaurentPoly::monomial(c, LatticePoint::int(a, b))
    }

    pub fn x() -> Self {
        LaurentPoly::term(BigRational::one(), 1, 0)
    }

    pub fn y() -> Self {
        LaurentPoly::term(BigRational::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (LatticePoint, BigRational)>>(it: I) -> Self {
        let mut p = LaurentPoly::zero();
        for (pt, c) in it {
            p.add_term(pt, c);
        }
        p
    }

    fn add_term(&mut self, pt: LatticePoint, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(pt).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&pt);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &BigRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, p: &LatticePoint) -> BigRational {
        self.terms.get(p).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    /// Least `l` with every x-exponent in `Z/l`.
    pub fn level(&self) -> i64 {
        self.terms.keys().fold(1, |acc, p| acc.lcm(p.x.denom()))
    }

    /// Constant term, i.e. the coefficient of `x^0 y^0`.
    pub fn constant_term(&self) -> BigRational {
        self.coef(&LatticePoint::origin())
    }

    /// The value as a rational, when the polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (p, c) = self.terms.iter().next().expect("one term");
                (*p == LatticePoint::origin()).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// All exponents are nonnegative integers.
    pub fn in_l(&self) -> bool {
        self.terms
            .keys()
            .all(|p| p.x.is_integer() && !p.x.is_negative() && p.y.is_integer() && !p.y.is_negative())
    }

    pub fn y_degree(&self) -> Option<i64> {
        self.terms.keys().map(|p| p.y.to_integer()).max()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(p, a)| (*p, a * c)).collect(),
        }
    }

    /// Multiplication by the monomial `x^p.x y^p.y`.
    pub fn shift(&self, p: LatticePoint) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(q, a)| (*q + p, a.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = LaurentPoly::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `max val(d, p)` over the support.
    pub fn v_deg(&self, d: Direction) -> Result<Exp, PolyError> {
        self.terms
            .keys()
            .map(|p| lattice::val(d, p))
            .max()
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Sum of the terms of maximal `d`-degree.
    pub fn leading_form(&self, d: Direction) -> Result<LaurentPoly, PolyError> {
        let top = self.v_deg(d)?;
        Ok(LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| lattice::val(d, p) == top)
                .map(|(p, c)| (*p, c.clone()))
                .collect(),
        })
    }

    /// Endpoints of the leading form: minimal and maximal y-exponent, ties
    /// broken by x-exponent.
    pub fn st_en(&self, d: Direction) -> Result<(LatticePoint, LatticePoint), PolyError> {
        let lf = self.leading_form(d)?;
        let key = |p: &&LatticePoint| (p.y, p.x);
        let st = *lf.terms.keys().min_by_key(key).expect("nonzero");
        let en = *lf.terms.keys().max_by_key(key).expect("nonzero");
        Ok((st, en))
    }

    pub fn is_homogeneous(&self, d: Direction) -> bool {
        let mut vals = self.terms.keys().map(|p| lattice::val(d, p));
        match vals.next() {
            None => true,
            Some(v0) => vals.all(|v| v == v0),
        }
    }

    /// Directions whose leading form has more than one term, sorted by angle
    /// measured from `(0,-1)`.
    pub fn dir_set(&self) -> Result<Vec<Direction>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        let corners = lattice::newton_polygon(&self.support()).expect("nonempty support");
        let mut dirs: Vec<Direction> = lattice::hull_edges(&corners).into_iter().map(|e| e.dir).collect();
        dirs.sort_by(|a, b| angle_key(*a).cmp(&angle_key(*b)).then(dir_cmp(*a, *b)));
        dirs.dedup();
        Ok(dirs)
    }

    pub fn differentiate(&self, axis: Axis) -> Self {
        LaurentPoly::from_terms(self.terms.iter().filter_map(|(p, c)| {
            let (e, q) = match axis {
                Axis::X => (p.x, LatticePoint::new(p.x - 1, p.y)),
                Axis::Y => (p.y, LatticePoint::new(p.x, p.y - 1)),
            };
            (!e.is_zero()).then(|| (q, c * exp_to_big(e)))
        }))
    }

    /// Termwise antiderivative; fails on `x^{-1}` terms when integrating in x.
    pub fn integrate(&self, axis: Axis) -> Result<Self, PolyError> {
        let mut out = LaurentPoly::zero();
        for (p, c) in &self.terms {
            let (e, q) = match axis {
                Axis::X => (p.x + 1, LatticePoint::new(p.x + 1, p.y)),
                Axis::Y => (p.y + 1, LatticePoint::new(p.x, p.y + 1)),
            };
            if e.is_zero() {
                return Err(PolyError::NotInImage(p.x, p.y));
            }
            out.add_term(q, c / exp_to_big(e));
        }
        Ok(out)
    }

    /// `[P,Q] = P_x Q_y − Q_x P_y`.
    pub fn bracket(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
        let px = p.differentiate(Axis::X);
        let py = p.differentiate(Axis::Y);
        let qx = q.differentiate(Axis::X);
        let qy = q.differentiate(Axis::Y);
        &(&px * &qy) - &(&qx * &py)
    }

    /// Image under `y ↦ y + c·x^e`.
    pub fn subst_y_shift(&self, c: &BigRational, e: Exp) -> Self {
        let mut out = LaurentPoly::zero();
        for (p, a) in &self.terms {
            let j = p.y.to_integer();
            let mut binom = BigInt::one();
            let mut cpow = BigRational::one();
            for m in 0..=j {
                let q = LatticePoint::new(p.x + e * m, p.y - m);
                out.add_term(q, a * BigRational::from_integer(binom.clone()) * &cpow);
                binom = binom * (j - m) / (m + 1);
                cpow *= c;
            }
        }
        out
    }

    /// Coefficients of the powers of y, each a polynomial in x only.
    pub fn y_coefficients(&self) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (p, c) in &self.terms {
            out.entry(p.y.to_integer())
                .or_default()
                .add_term(LatticePoint::new(p.x, Exp::zero()), c.clone());
        }
        out
    }

    /// `P(x, η)` for `η` free of y.
    pub fn eval_y(&self, eta: &LaurentPoly) -> Result<Self, PolyError> {
        if eta.terms.keys().any(|p| !p.y.is_zero()) {
            return Err(PolyError::NotPureX);
        }
        let mut out = LaurentPoly::zero();
        let mut power = LaurentPoly::one();
        let mut last = 0;
        for (j, coef) in self.y_coefficients() {
            while last < j {
                power = &power * eta;
                last += 1;
            }
            out = &out + &(&coef * &power);
        }
        Ok(out)
    }
}

/// Orders directions counterclockwise starting just after `(0,-1)`.
fn angle_key(d: Direction) -> u8 {
    let (r, s) = (d.rho(), d.sigma());
    match (r.signum(), s.signum()) {
        (1, -1) => 0,
        (1, 0) => 1,
        (1, 1) => 2,
        (0, 1) => 3,
        (-1, 1) => 4,
        (-1, 0) => 5,
        (-1, -1) => 6,
        _ => 7,
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_term(*p, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (p, c) in &o.terms {
            out.add_term(*p, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (p, a) in &self.terms {
            for (q, b) in &o.terms {
                out.add_term(*p + *q, a * b);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        self.scale(&-BigRational::one())
    }
}
