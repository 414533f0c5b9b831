//! Necessary conditions on Jacobian pairs read off Newton polygons: the
//! corrected antiderivative `J̃` of the bracket, exact primitives, slope-one
//! edges, the edge obstruction resultant, and common leading roots.

use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::homogform::{monic_power_root, HomogError, HomogForm};
use crate::lattice::{self, Direction, Exp, HullEdge, LatticePoint};
use crate::laurentpoly::{Axis, LaurentPoly, PolyError};
use crate::univariate::{rat, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the form g dx + f dy is not closed")]
    NotClosed,
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("leading forms share no common root for {0}")]
    NoCommonRoot(Direction),
    #[error("degree ratio v(P)/v(Q) = {0} is not a positive rational")]
    RatioMismatch(String),
    #[error(transparent)]
    Form(#[from] HomogError),
}

/// `Coef_{x^{-1}y^0}(Q·D_x P)·x^{-1} + ∫_y [P,Q]`.
pub fn tilde_j(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    let inv_x = LatticePoint::new(Exp::from_integer(-1), Exp::zero());
    let correction = (q * &p.differentiate(Axis::X)).coef(&inv_x);
    let integral = LaurentPoly::bracket(p, q)
        .integrate(Axis::Y)
        .expect("integration in y never fails");
    &LaurentPoly::monomial(correction, inv_x) + &integral
}

/// `H` with `D_x H = g` and `D_y H = f`.
pub fn exact_primitive(g: &LaurentPoly, f: &LaurentPoly) -> Result<LaurentPoly, ObstructionError> {
    g.integrate(Axis::X)?;
    if g.differentiate(Axis::Y) != f.differentiate(Axis::X) {
        return Err(ObstructionError::NotClosed);
    }
    let fy = f.integrate(Axis::Y)?;
    let y_free = g - &g.differentiate(Axis::Y).integrate(Axis::Y)?;
    Ok(&fy + &y_free.integrate(Axis::X)?)
}

/// Hull edges of `Supp(P)` of slope one.
pub fn slope_one_audit(p: &LaurentPoly) -> Result<Vec<HullEdge>, ObstructionError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    let corners = lattice::newton_polygon(&p.support()).expect("nonempty support");
    // A segment is listed once, oriented from its lexicographically least end.
    let edges = lattice::hull_edges(&corners);
    let take = if corners.len() == 2 { 1 } else { edges.len() };
    Ok(edges
        .into_iter()
        .take(take)
        .filter(|e| (e.dir.rho(), e.dir.sigma()) == (1, -1) || (e.dir.rho(), e.dir.sigma()) == (-1, 1))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The dehomogenized leading forms have no common nonzero root.
    Obstructed,
    /// A common root exists over the algebraic closure.
    Consistent,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Obstructed => write!(f, "obstructed"),
            Verdict::Consistent => write!(f, "consistent"),
        }
    }
}

/// `Σ c·z^{y-exponent}` over the terms of a homogeneous form, with the power
/// of `z` dividing it removed.
pub fn dehomogenize(form: &LaurentPoly) -> UniPoly {
    let mut coeffs: Vec<BigRational> = Vec::new();
    for (p, c) in form.terms() {
        let k = p.y.to_integer() as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigRational::zero());
        }
        coeffs[k] += c;
    }
    let u = UniPoly::new(coeffs);
    let low = u.low_order().unwrap_or(0);
    u.unshift(low)
}

/// Edge test given `J̃` directly.
pub fn edge_obstruction_from(
    p: &LaurentPoly,
    jt: &LaurentPoly,
    d: Direction,
) -> Result<(BigRational, Verdict), ObstructionError> {
    if d.rho() == 0 {
        return Err(ObstructionError::HypothesisUnmet(format!("direction {d} has rho = 0")));
    }
    if !p.dir_set()?.contains(&d) {
        return Err(ObstructionError::HypothesisUnmet(format!(
            "{d} is not an edge direction of P"
        )));
    }
    if jt.is_zero() {
        return Err(ObstructionError::HypothesisUnmet("J~ vanishes".into()));
    }
    let vj = jt.v_deg(d)?;
    if vj != Exp::from_integer(-d.rho()) {
        return Err(ObstructionError::HypothesisUnmet(format!(
            "v_{d}(J~) = {vj}, expected {}",
            -d.rho()
        )));
    }
    let pz = dehomogenize(&p.leading_form(d)?);
    let jz = dehomogenize(&jt.leading_form(d)?);
    let res = UniPoly::resultant(&pz, &jz);
    let verdict = if res.is_zero() {
        Verdict::Consistent
    } else {
        Verdict::Obstructed
    };
    Ok((res, verdict))
}

/// Resultant of the dehomogenized leading forms of `P` and `J̃(P,Q)` along
/// `d`; nonzero means no root `λ` of `ℓ_d(P)` annihilates `ℓ_d(J̃)`.
pub fn edge_obstruction_test(
    p: &LaurentPoly,
    q: &LaurentPoly,
    d: Direction,
) -> Result<(BigRational, Verdict), ObstructionError> {
    edge_obstruction_from(p, &tilde_j(p, q), d)
}

/// A common root of two leading forms: `ℓ(P) = λP·R^m`, `ℓ(Q) = λQ·R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingRoot {
    pub r: HomogForm,
    pub m: u32,
    pub n: u32,
    pub lambda_p: BigRational,
    pub lambda_q: BigRational,
}

pub fn pair_leading_root(p: &LaurentPoly, q: &LaurentPoly, d: Direction) -> Result<LeadingRoot, ObstructionError> {
    if !d.in_lower_arc() {
        return Err(HomogError::BadDirection(d).into());
    }
    let vp = p.v_deg(d)?;
    let vq = q.v_deg(d)?;
    if !vp.is_positive() || !vq.is_positive() {
        return Err(ObstructionError::RatioMismatch(format!("{vp}/{vq}")));
    }
    let ratio = vp / vq;
    let (m, n) = (*ratio.numer() as u32, *ratio.denom() as u32);
    let (rp, kp, cp) = monic_power_root(&p.leading_form(d)?, d)?;
    let (rq, kq, cq) = monic_power_root(&q.leading_form(d)?, d)?;
    if kp % m != 0 || kq % n != 0 {
        return Err(ObstructionError::NoCommonRoot(d));
    }
    let r1 = rp.pow(kp / m);
    let r2 = rq.pow(kq / n);
    if r1 != r2 {
        return Err(ObstructionError::NoCommonRoot(d));
    }
    Ok(LeadingRoot {
        r: r1,
        m,
        n,
        lambda_p: cp,
        lambda_q: cq,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairViolation {
    /// `[P,Q]` is not a nonzero constant.
    BracketNotConstant(LaurentPoly),
    /// A hull edge of slope one in `P` (`which = 'P'`) or `Q`.
    SlopeOneEdge { which: char, edge: HullEdge },
    /// A direction in `](1,-1),(1,0)[` whose end point lies strictly inside the
    /// first quadrant.
    ForbiddenDirection { dir: Direction, en: LatticePoint },
    /// `m·ρ > v_d(P)` for a lower direction with common root exponent `m`.
    DegreeInequality { dir: Direction, m: u32, v: Exp },
}

impl fmt::Display for PairViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairViolation::BracketNotConstant(b) => write!(f, "bracket [P,Q] = {b} is not a nonzero constant"),
            PairViolation::SlopeOneEdge { which, edge } => {
                write!(f, "{which} has a slope-one edge {} -- {}", edge.start, edge.end)
            }
            PairViolation::ForbiddenDirection { dir, en } => {
                write!(f, "direction {dir} of P ends at {en} with a > b > 0")
            }
            PairViolation::DegreeInequality { dir, m, v } => {
                write!(
                    f,
                    "direction {dir}: m*rho = {} exceeds v(P) = {v}",
                    *m as i64 * dir.rho()
                )
            }
        }
    }
}

/// Every necessary polygon condition that a Jacobian pair violates.
pub fn pair_polygon_audit(p: &LaurentPoly, q: &LaurentPoly) -> Vec<PairViolation> {
    let mut out = Vec::new();
    let b = LaurentPoly::bracket(p, q);
    if b.as_constant().is_none_or(|c| c.is_zero()) {
        out.push(PairViolation::BracketNotConstant(b));
    }
    for (which, poly) in [('P', p), ('Q', q)] {
        if let Ok(edges) = slope_one_audit(poly) {
            out.extend(
                edges
                    .into_iter()
                    .map(|edge| PairViolation::SlopeOneEdge { which, edge }),
            );
        }
    }
    let Ok(dirs) = p.dir_set() else {
        return out;
    };
    for d in dirs {
        let (rho, sigma) = (d.rho(), d.sigma());
        if rho > -sigma && -sigma > 0 {
            let (_, en) = p.st_en(d).expect("nonzero");
            if en.x > en.y && en.y.is_positive() {
                out.push(PairViolation::ForbiddenDirection { dir: d, en });
            }
        }
        if d.in_lower_arc() {
            if let Ok(root) = pair_leading_root(p, q, d) {
                let v = p.v_deg(d).expect("nonzero");
                if Exp::from_integer(root.m as i64 * rho) > v {
                    out.push(PairViolation::DegreeInequality { dir: d, m: root.m, v });
                }
            }
        }
    }
    out
}

/// A pair with `[P,Q] = ±1` obtained by composing elementary shears starting
/// from `(x, y)`: each `(a, c, k)` applies `x ↦ x + c·y^k` when `a` is true and
/// `y ↦ y + c·x^k` otherwise.
pub fn automorphism_pair(steps: &[(bool, i64, u32)]) -> (LaurentPoly, LaurentPoly) {
    let mut p = LaurentPoly::x();
    let mut q = LaurentPoly::y();
    for &(on_x, c, k) in steps {
        if on_x {
            p = &p + &q.pow(k).scale(&rat(c));
        } else {
            q = &q + &p.pow(k).scale(&rat(c));
        }
    }
    (p, q)
}

/// Image of a pair under `y ↦ y + c·x^e`, which preserves brackets.
pub fn shift_pair(p: &LaurentPoly, q: &LaurentPoly, c: &BigRational, e: i64) -> (LaurentPoly, LaurentPoly) {
    let e = Exp::from_integer(e);
    (p.subst_y_shift(c, e), q.subst_y_shift(c, e))
}

/// `true` when `[P,Q]` is a nonzero constant.
pub fn is_jacobian_pair(p: &LaurentPoly, q: &LaurentPoly) -> bool {
    LaurentPoly::bracket(p, q).as_constant().is_some_and(|c| !c.is_zero())
}
