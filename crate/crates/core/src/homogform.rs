//! Homogeneous forms `x^α y^β f̂(w)`, `w = x^{-σ} y^ρ`, and the bracket
//! equation `[G,R] = R^i` between two of them.
//!
//! Writing `R = x^{u/ρ} r(z)` and `G = x^{v/ρ} g(z)` with `z = x^{-σ/ρ} y`, the
//! bracket equation is equivalent to `v = u(i-1) + ρ + σ` together with the
//! univariate identity `ρ r^i = v r' g − u g' r`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::factor::factor_rational;
use crate::lattice::{dir_lt, Direction, LatticePoint};
use crate::laurentpoly::{LaurentPoly, PolyError};
use crate::univariate::{rat, ratio, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomogError {
    #[error("direction {0} is not usable here")]
    BadDirection(Direction),
    #[error("polynomial is not homogeneous for {0}")]
    NotHomogeneous(Direction),
    #[error("polynomial has exponents outside K[x,y]")]
    NotInL,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("forms have different directions {0} and {1}")]
    DirectionMismatch(Direction, Direction),
    #[error("[G,R] = R^{0} does not hold")]
    NotCompanion(u32),
    #[error("(n-1)u + rho + sigma = {0} is negative")]
    HypothesisViolated(i64),
    #[error("companion is not divisible by R^{0}")]
    NonDivisible(u32),
    #[error("bad start point {0}: need a > b >= 0")]
    BadStart(LatticePoint),
    #[error("start point {0} on the x-axis admits infinitely many directions; a gap bound is required")]
    UnboundedFamily(LatticePoint),
    #[error("bad family parameters: {0}")]
    BadParams(String),
    #[error("edge from {st} along {dir} with {steps} steps fails the direction predicate")]
    EdgeRejected {
        st: LatticePoint,
        dir: Direction,
        steps: i64,
    },
    #[error("factor {factor} has s = {s}, t = {t}, fitting neither t = s(i-1)+1 nor ut = vs")]
    MultiplicityMismatch { factor: String, s: usize, t: usize },
}

impl From<PolyError> for HomogError {
    fn from(_: PolyError) -> Self {
        HomogError::ZeroPolynomial
    }
}

/// `x^α y^β f̂(x^{-σ} y^ρ)` with `f̂(0) ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogForm {
    dir: Direction,
    alpha: i64,
    beta: i64,
    fhat: UniPoly,
}

impl HomogForm {
    pub fn new(dir: Direction, alpha: i64, beta: i64, fhat: UniPoly) -> Result<Self, HomogError> {
        if !dir.in_open_quadrant() {
            return Err(HomogError::BadDirection(dir));
        }
        if alpha < 0 || beta < 0 {
            return Err(HomogError::NotInL);
        }
        if fhat.is_zero() {
            return Err(HomogError::ZeroPolynomial);
        }
        if fhat.coeff(0).is_zero() {
            return Err(HomogError::InvalidForm("fhat(0) must be nonzero".into()));
        }
        Ok(HomogForm { dir, alpha, beta, fhat })
    }

    /// Factored representation of a homogeneous polynomial in `K[x,y]`.
    pub fn from_poly(p: &LaurentPoly, d: Direction) -> Result<Self, HomogError> {
        if !d.in_open_quadrant() {
            return Err(HomogError::BadDirection(d));
        }
        if p.is_zero() {
            return Err(HomogError::ZeroPolynomial);
        }
        if !p.is_homogeneous(d) {
            return Err(HomogError::NotHomogeneous(d));
        }
        if !p.in_l() {
            return Err(HomogError::NotInL);
        }
        let (st, _) = p.st_en(d)?;
        let (alpha, beta) = st.as_int().expect("integral exponents");
        let mut coeffs = BTreeMap::new();
        for (pt, c) in p.terms() {
            let (_, b) = pt.as_int().expect("integral exponents");
            coeffs.insert(((b - beta) / d.rho()) as usize, c.clone());
        }
        let deg = *coeffs.keys().max().expect("nonzero");
        let fhat = UniPoly::new(
            (0..=deg)
                .map(|j| coeffs.remove(&j).unwrap_or_else(BigRational::zero))
                .collect(),
        );
        HomogForm::new(d, alpha, beta, fhat)
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let (rho, sigma) = (self.dir.rho(), self.dir.sigma());
        LaurentPoly::from_terms(self.fhat.coeffs().iter().enumerate().map(|(j, c)| {
            let j = j as i64;
            (
                LatticePoint::int(self.alpha - sigma * j, self.beta + rho * j),
                c.clone(),
            )
        }))
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn fhat(&self) -> &UniPoly {
        &self.fhat
    }

    /// The `(ρ,σ)`-degree.
    pub fn u(&self) -> i64 {
        self.dir.rho() * self.alpha + self.dir.sigma() * self.beta
    }

    pub fn st(&self) -> LatticePoint {
        LatticePoint::int(self.alpha, self.beta)
    }

    pub fn en(&self) -> LatticePoint {
        let m = self.n1() as i64;
        LatticePoint::int(self.alpha - self.dir.sigma() * m, self.beta + self.dir.rho() * m)
    }

    /// Number of primitive steps along the edge, `deg f̂`.
    pub fn n1(&self) -> usize {
        self.fhat.degree().expect("nonzero")
    }

    /// `gcd(α, β)`.
    pub fn n2(&self) -> i64 {
        self.alpha.gcd(&self.beta)
    }

    pub fn is_monomial(&self) -> bool {
        self.n1() == 0
    }

    /// `r(z) = z^β f̂(z^ρ)`.
    pub fn r_of_z(&self) -> UniPoly {
        self.fhat.inflate(self.dir.rho() as usize).shift(self.beta as usize)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        HomogForm {
            fhat: self.fhat.scale(c),
            ..self.clone()
        }
    }

    pub fn mul(&self, o: &HomogForm) -> Result<Self, HomogError> {
        if self.dir != o.dir {
            return Err(HomogError::DirectionMismatch(self.dir, o.dir));
        }
        Ok(HomogForm {
            dir: self.dir,
            alpha: self.alpha + o.alpha,
            beta: self.beta + o.beta,
            fhat: &self.fhat * &o.fhat,
        })
    }

    pub fn pow(&self, n: u32) -> Self {
        HomogForm {
            dir: self.dir,
            alpha: self.alpha * n as i64,
            beta: self.beta * n as i64,
            fhat: self.fhat.pow(n),
        }
    }
}

impl fmt::Display for HomogForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

/// A companion pair `[G,R] = R^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub r: HomogForm,
    pub g: HomogForm,
    pub i: u32,
}

impl Witness {
    /// Exact check of `[G,R] = R^i` on the expanded polynomials.
    pub fn bracket_holds(&self) -> bool {
        let r = self.r.to_poly();
        LaurentPoly::bracket(&self.g.to_poly(), &r) == r.pow(self.i)
    }
}

fn valuation_matches(r: &HomogForm, g: &HomogForm, i: u32) -> bool {
    let d = r.dir;
    g.u() == r.u() * (i as i64 - 1) + d.rho() + d.sigma()
}

/// `ρ r^i − (v r' g − u g' r)`; zero exactly when `[G,R] = R^i`. When the
/// degrees cannot match the result is `ρ r^i`.
pub fn central_residual(r: &HomogForm, g: &HomogForm, i: u32) -> Result<UniPoly, HomogError> {
    if r.dir != g.dir {
        return Err(HomogError::DirectionMismatch(r.dir, g.dir));
    }
    let rho = rat(r.dir.rho());
    let rz = r.r_of_z();
    let lhs = rz.pow(i).scale(&rho);
    if !valuation_matches(r, g, i) {
        return Ok(lhs);
    }
    let gz = g.r_of_z();
    let u = rat(r.u());
    let v = rat(g.u());
    let rhs = &(&rz.derivative() * &gz).scale(&v) - &(&gz.derivative() * &rz).scale(&u);
    Ok(&lhs - &rhs)
}

/// `p + q·t` for one free parameter `t`.
#[derive(Clone, Debug)]
struct Affine {
    p: BigRational,
    q: BigRational,
}

impl Affine {
    fn zero() -> Self {
        Affine {
            p: BigRational::zero(),
            q: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    fn sub_scaled(&mut self, a: &Affine, c: &BigRational) {
        self.p -= &a.p * c;
        self.q -= &a.q * c;
    }

    fn div(&self, c: &BigRational) -> Affine {
        Affine {
            p: &self.p / c,
            q: &self.q / c,
        }
    }

    fn at(&self, t: &BigRational) -> BigRational {
        &self.p + &self.q * t
    }
}

/// Finds `G` with `[G,R] = R^i`, `G ∈ K[x,y]` homogeneous for the direction of
/// `R`, and `y`-degree of `en(G)` at most `(i-1)·y(en R) + 1`.
///
/// The operator `g ↦ v r' g − u g' r` sends `z^b` to a polynomial whose top term
/// sits in degree `b + deg r − 1`, so the coefficients of `g` are determined
/// from the top down; the single resonant exponent `b = v·deg r / u` (if any)
/// contributes one free parameter, fixed by the remaining equations.
pub fn solve_companion(r: &HomogForm, i: u32) -> Result<Option<HomogForm>, HomogError> {
    let d = r.dir;
    if !d.in_lower_arc() {
        return Err(HomogError::BadDirection(d));
    }
    if i == 0 {
        return Ok(None);
    }
    let (rho, sigma) = (d.rho(), d.sigma());
    let u = r.u();
    let v = u * (i as i64 - 1) + rho + sigma;
    let rz = r.r_of_z();
    let deg_r = rz.degree().expect("nonzero");
    let top = i as usize * deg_r;
    let target = rz.pow(i).scale(&rat(rho));
    let mut res: Vec<Affine> = (0..=top)
        .map(|e| Affine {
            p: target.coeff(e),
            q: BigRational::zero(),
        })
        .collect();
    let nonzero_r: Vec<(usize, BigRational)> = rz
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(j, c)| (j, c.clone()))
        .collect();
    let allowed = |b: i64| {
        let x_num = v - sigma * b;
        x_num >= 0 && x_num % rho == 0
    };
    let b_max = (i as usize - 1) * deg_r + 1;
    let lead = rz.lead();
    let mut coef: Vec<Affine> = vec![Affine::zero(); b_max + 1];
    let mut constraints: Vec<Affine> = Vec::new();
    for b in (0..=b_max).rev() {
        let bi = b as i64;
        let Some(pivot_idx) = (b + deg_r).checked_sub(1) else {
            continue;
        };
        if allowed(bi) {
            let pivot = &lead * rat(v * deg_r as i64 - u * bi);
            let cb = if pivot.is_zero() {
                Affine {
                    p: BigRational::zero(),
                    q: BigRational::one(),
                }
            } else {
                res[pivot_idx].div(&pivot)
            };
            for (j, rj) in &nonzero_r {
                if b + j == 0 {
                    continue;
                }
                let factor = rj * rat(v * *j as i64 - u * bi);
                res[b + j - 1].sub_scaled(&cb, &factor);
            }
            coef[b] = cb;
        }
        if !res[pivot_idx].is_zero() {
            constraints.push(res[pivot_idx].clone());
        }
    }
    for e in res.iter().take(deg_r.saturating_sub(1)) {
        if !e.is_zero() {
            constraints.push(e.clone());
        }
    }
    let t = match constraints.iter().find(|c| !c.q.is_zero()) {
        Some(c) => -&c.p / &c.q,
        None => BigRational::zero(),
    };
    if constraints.iter().any(|c| !c.at(&t).is_zero()) {
        return Ok(None);
    }
    let values: Vec<BigRational> = coef.iter().map(|c| c.at(&t)).collect();
    let Some(b0) = values.iter().position(|c| !c.is_zero()) else {
        return Ok(None);
    };
    let rho_u = rho as usize;
    let fhat = UniPoly::new(values.iter().skip(b0).step_by(rho_u).cloned().collect());
    let alpha = (v - sigma * b0 as i64) / rho;
    let g = HomogForm::new(d, alpha, b0 as i64, fhat)?;
    debug_assert!(central_residual(r, &g, i)?.is_zero());
    Ok(Some(g))
}

const FILTER_PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % FILTER_PRIME as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn int_mod(n: &BigInt) -> u64 {
    let p = BigInt::from(FILTER_PRIME);
    let r = ((n % &p) + &p) % &p;
    u64::try_from(r).expect("reduced below p")
}

fn i64_mod(n: i64) -> u64 {
    n.rem_euclid(FILTER_PRIME as i64) as u64
}

/// Runs the triangular solve of [`solve_companion`] modulo a 61-bit prime.
/// Returns `true` only when this proves that no rational `G` exists: every
/// pivot and input denominator is a unit mod p, and a rational solution
/// reduces to a solution mod p unless the free parameter is pinned by an
/// equation whose coefficient vanishes mod p, which is reported as
/// inconclusive.
fn companion_infeasible_mod_p(r: &HomogForm, i: u32) -> bool {
    let d = r.dir;
    let (rho, sigma) = (d.rho(), d.sigma());
    let u = r.u();
    let v = u * (i as i64 - 1) + rho + sigma;
    let rz = r.r_of_z();
    let deg_r = rz.degree().expect("nonzero");
    let mut rz_mod = Vec::with_capacity(deg_r + 1);
    for c in rz.coeffs() {
        let den = int_mod(c.denom());
        if den == 0 {
            return false;
        }
        rz_mod.push(mulmod(int_mod(c.numer()), powmod(den, FILTER_PRIME - 2)));
    }
    let lead = rz_mod[deg_r];
    if lead == 0 {
        return false;
    }
    let nonzero_r: Vec<(usize, u64)> = rz_mod.iter().copied().enumerate().filter(|(_, c)| *c != 0).collect();
    let rho_mod = i64_mod(rho);
    let top = i as usize * deg_r;
    let mut target = vec![1u64];
    for _ in 0..i {
        let mut next = vec![0u64; target.len() + deg_r];
        for (a, &x) in target.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for &(j, y) in &nonzero_r {
                next[a + j] = (next[a + j] + mulmod(x, y)) % FILTER_PRIME;
            }
        }
        target = next;
    }
    // (constant part, coefficient of the free parameter)
    let mut res: Vec<(u64, u64)> = (0..=top).map(|e| (mulmod(target[e], rho_mod), 0)).collect();
    let b_max = (i as usize - 1) * deg_r + 1;
    let mut resonant = false;
    let mut constraints: Vec<(u64, u64)> = Vec::new();
    for b in (0..=b_max).rev() {
        let bi = b as i64;
        let Some(pivot_idx) = (b + deg_r).checked_sub(1) else {
            continue;
        };
        let x_num = v - sigma * bi;
        if x_num >= 0 && x_num % rho == 0 {
            let k = v * deg_r as i64 - u * bi;
            let cb = if k == 0 {
                resonant = true;
                (0, 1)
            } else {
                let inv = powmod(mulmod(lead, i64_mod(k)), FILTER_PRIME - 2);
                (mulmod(res[pivot_idx].0, inv), mulmod(res[pivot_idx].1, inv))
            };
            for &(j, rj) in &nonzero_r {
                if b + j == 0 {
                    continue;
                }
                let f = mulmod(rj, i64_mod(v * j as i64 - u * bi));
                let e = &mut res[b + j - 1];
                e.0 = (e.0 + FILTER_PRIME - mulmod(cb.0, f)) % FILTER_PRIME;
                e.1 = (e.1 + FILTER_PRIME - mulmod(cb.1, f)) % FILTER_PRIME;
            }
        }
        constraints.push(res[pivot_idx]);
    }
    constraints.extend(res.iter().take(deg_r.saturating_sub(1)).copied());
    let t = match constraints.iter().find(|c| c.1 != 0) {
        Some(c) => mulmod(FILTER_PRIME - c.0 % FILTER_PRIME, powmod(c.1, FILTER_PRIME - 2)) % FILTER_PRIME,
        None if resonant => return false,
        None => 0,
    };
    constraints
        .iter()
        .any(|c| !(c.0 + mulmod(c.1, t)).is_multiple_of(FILTER_PRIME))
}

/// The rational `q` with `q^n = c`, if there is one.
pub fn rational_root(c: &BigRational, n: u32) -> Option<BigRational> {
    if n == 1 {
        return Some(c.clone());
    }
    if c.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let root_int = |a: &BigInt| -> Option<BigInt> {
        let r = a.abs().nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == a.abs()).then_some(r)
    };
    let num = root_int(c.numer())?;
    let den = root_int(c.denom())?;
    let q = BigRational::new(num, den);
    Some(if c.is_negative() { -q } else { q })
}

/// `F = c · R0^k` with `f̂(R0)` monic and `k` maximal.
pub fn monic_power_root(f: &LaurentPoly, d: Direction) -> Result<(HomogForm, u32, BigRational), HomogError> {
    let h = HomogForm::from_poly(f, d)?;
    let c = h.fhat.lead();
    let parts = h.fhat.monic().squarefree();
    let kf = parts.iter().fold(0usize, |acc, (_, m)| acc.gcd(m)) as i64;
    let mut k = h.alpha.gcd(&h.beta).gcd(&kf);
    if k == 0 {
        k = 1;
    }
    let fhat = parts
        .iter()
        .fold(UniPoly::one(), |acc, (p, m)| &acc * &p.pow((*m as i64 / k) as u32));
    let root = HomogForm::new(d, h.alpha / k, h.beta / k, fhat)?;
    Ok((root, k as u32, c))
}

/// `(R0, k)` with `F = R0^k` exactly and `k` maximal.
pub fn power_free_root(f: &LaurentPoly, d: Direction) -> Result<(HomogForm, u32), HomogError> {
    let (r0, k, c) = monic_power_root(f, d)?;
    for e in (1..=k).rev().filter(|e| k % e == 0) {
        if let Some(q) = rational_root(&c, e) {
            return Ok((r0.pow(k / e).scale(&q), e));
        }
    }
    unreachable!("the first power always has a rational root")
}

/// Which alternative of the multiplicity equation a factor satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MultiplicityTag {
    /// `t = s(i-1) + 1`.
    A,
    /// `u·t = v·s`.
    B,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityRecord {
    /// Monic irreducible factor of `r(z)`.
    pub factor: UniPoly,
    /// Multiplicity in `r`.
    pub s: usize,
    /// Multiplicity in `g`.
    pub t: usize,
    pub tag: MultiplicityTag,
}

/// Classifies every irreducible factor of `r(z)` for a companion pair.
pub fn multiplicity_classify(r: &HomogForm, g: &HomogForm, i: u32) -> Result<Vec<MultiplicityRecord>, HomogError> {
    if !central_residual(r, g, i)?.is_zero() {
        return Err(HomogError::NotCompanion(i));
    }
    let (u, v) = (r.u(), g.u());
    let gz = g.r_of_z();
    let mut out = Vec::new();
    for (factor, s) in factor_rational(&r.r_of_z()).factors {
        let t = gz.multiplicity(&factor);
        let tag = if u * t as i64 == v * s as i64 {
            MultiplicityTag::B
        } else if t == s * (i as usize - 1) + 1 {
            MultiplicityTag::A
        } else {
            return Err(HomogError::MultiplicityMismatch {
                factor: factor.to_string(),
                s,
                t,
            });
        };
        out.push(MultiplicityRecord { factor, s, t, tag });
    }
    Ok(out)
}

/// From `[G1,R] = R^i` produce `G2` with `[G2,R] = R^n`.
pub fn reduce_exponent(r: &HomogForm, g1: &HomogForm, i: u32, n: u32) -> Result<HomogForm, HomogError> {
    let d = r.dir;
    let slack = (n as i64 - 1) * r.u() + d.rho() + d.sigma();
    if slack < 0 {
        return Err(HomogError::HypothesisViolated(slack));
    }
    if !central_residual(r, g1, i)?.is_zero() {
        return Err(HomogError::NotCompanion(i));
    }
    if i <= n {
        return g1.mul(&r.pow(n - i));
    }
    let e = i - n;
    let divisor = r.pow(e);
    let alpha = g1.alpha - divisor.alpha;
    let beta = g1.beta - divisor.beta;
    let quotient = g1.fhat.exact_div(&divisor.fhat);
    match quotient {
        Some(q) if alpha >= 0 && beta >= 0 => {
            let g2 = HomogForm::new(d, alpha, beta, q)?;
            debug_assert!(central_residual(r, &g2, n)?.is_zero());
            Ok(g2)
        }
        _ => Err(HomogError::NonDivisible(e)),
    }
}

/// How a direction passes the arithmetic edge predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseTag {
    /// `st` on the x-axis and `ρ = 1`.
    Case1,
    /// `t′·u = s·(−ρ−σ)`, minimal `s`.
    Case2 { s: i64, t_prime: i64 },
    /// `t′·u = γ·(−ρ−σ)` with `γ | gcd(α,β)`, minimal `γ`.
    Case3 { gamma: i64, t_prime: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DirectionCandidate {
    pub dir: Direction,
    pub case: CaseTag,
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Directions `d` in `](0,-1),(1,-1)[`, above `prev`, with `u = val(d, st) ≥ ρ`
/// that pass the arithmetic predicate for an edge of at most `m_max` steps.
///
/// With `st` on the x-axis the set is infinite, so `max_gap` (a bound on
/// `−ρ−σ`) is required there; otherwise it defaults to the bound implied by
/// `u ≥ ρ`.
pub fn candidate_directions(
    st: LatticePoint,
    m_max: i64,
    prev: Option<Direction>,
    max_gap: Option<i64>,
) -> Result<Vec<DirectionCandidate>, HomogError> {
    let Some((alpha, beta)) = st.as_int() else {
        return Err(HomogError::BadStart(st));
    };
    if beta < 0 || alpha <= beta {
        return Err(HomogError::BadStart(st));
    }
    let n2 = alpha.gcd(&beta);
    let c = m_max.max(n2).max(1);
    let diff = alpha - beta;
    let k_max = match max_gap {
        Some(k) => k,
        None if beta > 0 => c * (diff - 1) * diff / beta,
        None => return Err(HomogError::UnboundedFamily(st)),
    };
    let gammas = divisors(n2);
    let mut out = Vec::new();
    for k in 1..=k_max {
        let rho_max = (k * (c + beta) / diff).max(1);
        for rho in 1..=rho_max {
            if rho.gcd(&k) != 1 {
                continue;
            }
            let d = Direction::new(rho, -rho - k).expect("primitive");
            if let Some(p) = prev {
                if !dir_lt(p, d).unwrap_or(false) {
                    continue;
                }
            }
            let u = rho * alpha + d.sigma() * beta;
            if u < rho {
                continue;
            }
            if beta == 0 && rho == 1 {
                out.push(DirectionCandidate {
                    dir: d,
                    case: CaseTag::Case1,
                });
            }
            let s = u / u.gcd(&k);
            if s <= m_max {
                out.push(DirectionCandidate {
                    dir: d,
                    case: CaseTag::Case2 { s, t_prime: s * k / u },
                });
            }
            if let Some(&gamma) = gammas.iter().find(|&&g| (g * k) % u == 0) {
                out.push(DirectionCandidate {
                    dir: d,
                    case: CaseTag::Case3 {
                        gamma,
                        t_prime: gamma * k / u,
                    },
                });
            }
        }
    }
    out.sort_by(|a, b| crate::lattice::dir_cmp(a.dir, b.dir));
    Ok(out)
}

/// Whether an edge of `steps` primitive steps from `st` along `d` passes the
/// arithmetic predicate.
pub fn edge_passes(st: LatticePoint, d: Direction, steps: i64, prev: Option<Direction>) -> bool {
    candidate_directions(st, steps, prev, Some(d.gap()))
        .map(|cs| cs.iter().any(|c| c.dir == d))
        .unwrap_or(false)
}

/// The explicit witness families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `R = x^{a-b}(1+xy)^b`, direction `(1,-1)`.
    Intro { a: i64, b: i64 },
    /// `R = x^k(1+x²y)^j`, direction `(1,-2)`.
    Ejemplo { k: i64, j: i64 },
    /// `R = x(w+1)^n`, `w = x^{n+1}y^n`, direction `(n,-n-1)`.
    Caso2 { n: i64 },
    /// `R = x^u(x^{-σ}y − λ)^j`, direction `(1,σ)`, exponent `i`.
    Case1 {
        u: i64,
        sigma: i64,
        lambda: BigRational,
        j: i64,
        i: u32,
    },
    /// `R = 9x^14y^8(1+x^8y^5)`, direction `(5,-8)`.
    Case3,
}

impl Family {
    pub const NAMES: [&'static str; 5] = ["intro", "ejemplo", "caso2", "case1", "case3"];

    /// Builds a family from its name and `key=value` parameters.
    pub fn from_params(name: &str, params: &BTreeMap<String, String>) -> Result<Self, HomogError> {
        let int = |key: &str, default: Option<i64>| -> Result<i64, HomogError> {
            match params.get(key) {
                Some(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| HomogError::BadParams(format!("{key}={s} is not an integer"))),
                None => default.ok_or_else(|| HomogError::BadParams(format!("missing parameter {key}"))),
            }
        };
        match name {
            "intro" => Ok(Family::Intro {
                a: int("a", None)?,
                b: int("b", None)?,
            }),
            "ejemplo" => Ok(Family::Ejemplo {
                k: int("k", Some(1))?,
                j: int("j", Some(1))?,
            }),
            "caso2" => Ok(Family::Caso2 { n: int("n", Some(2))? }),
            "case1" => {
                let lambda = match params.get("lambda") {
                    Some(s) => crate::text::parse_poly(s)
                        .ok()
                        .and_then(|p| p.as_constant())
                        .ok_or_else(|| HomogError::BadParams(format!("lambda={s} is not a rational")))?,
                    None => BigRational::one(),
                };
                let i = int("i", Some(2))?;
                Ok(Family::Case1 {
                    u: int("u", None)?,
                    sigma: int("sigma", None)?,
                    lambda,
                    j: int("j", None)?,
                    i: u32::try_from(i).map_err(|_| HomogError::BadParams("i must be positive".into()))?,
                })
            }
            "case3" => Ok(Family::Case3),
            other => Err(HomogError::BadParams(format!(
                "unknown family {other}; expected one of {}",
                Family::NAMES.join(", ")
            ))),
        }
    }
}

fn dir(r: i64, s: i64) -> Result<Direction, HomogError> {
    Direction::new(r, s).map_err(|e| HomogError::BadParams(e.to_string()))
}

/// The witness pair of a family; the bracket identity is checked before
/// returning.
pub fn family_witness(f: &Family) -> Result<Witness, HomogError> {
    let bad = |m: &str| Err(HomogError::BadParams(m.to_string()));
    let w = match f {
        Family::Intro { a, b } => {
            if *b < 1 || a - b < 1 {
                return bad("intro needs b >= 1 and a - b >= 1");
            }
            let d = dir(1, -1)?;
            let fhat = UniPoly::from_ints(&[1, 1]).pow(*b as u32);
            let r = HomogForm::new(d, a - b, 0, fhat.clone())?;
            let g = HomogForm::new(d, a - b + 1, 1, fhat.scale(&ratio(-1, a - b)))?;
            Witness { r, g, i: 2 }
        }
        Family::Ejemplo { k, j } => {
            if *k < 1 || *j < 1 {
                return bad("ejemplo needs k >= 1 and j >= 1");
            }
            let d = dir(1, -2)?;
            let base = UniPoly::from_ints(&[1, 1]);
            let r = HomogForm::new(d, *k, 0, base.pow(*j as u32))?;
            let g = HomogForm::new(d, k - 1, 0, base.pow(*j as u32 + 1).scale(&ratio(-1, j + k)))?;
            Witness { r, g, i: 2 }
        }
        Family::Caso2 { n } => {
            if *n < 1 {
                return bad("caso2 needs n >= 1");
            }
            let d = dir(*n, -n - 1)?;
            let base = UniPoly::from_ints(&[1, 1]);
            let r = HomogForm::new(d, 1, 0, base.pow(*n as u32))?;
            let tail = UniPoly::from_ints(&[n + 1, 1]);
            let gf = (&base.pow(*n as u32 - 1) * &tail).scale(&ratio(-1, n + 1));
            let g = HomogForm::new(d, 2, 1, gf)?;
            Witness { r, g, i: 2 }
        }
        Family::Case1 { u, sigma, lambda, j, i } => {
            if *u < 1 || *j < 1 || *sigma > -2 || *i < 1 || lambda.is_zero() {
                return bad("case1 needs u >= 1, j >= 1, sigma <= -2, i >= 1, lambda != 0");
            }
            let (u, sigma, j, i64i) = (*u, *sigma, *j, *i as i64);
            let varpi = j * ((j - 1) * u * (i64i - 1) - j * (sigma + 1));
            if varpi <= 0 {
                return bad("case1 needs j((j-1)u(i-1) - j(sigma+1)) > 0");
            }
            let v = u * (i64i - 1) + sigma + 1;
            if v < 0 {
                return bad("case1 needs u(i-1) + sigma + 1 >= 0");
            }
            let d = dir(1, sigma)?;
            let base = UniPoly::linear_root(lambda.clone());
            let r = HomogForm::new(d, u, 0, base.pow(j as u32))?;
            let c = BigRational::one() / rat(j * (sigma + 1) - u);
            let g = HomogForm::new(d, v, 0, base.pow((j * (i64i - 1) + 1) as u32).scale(&c))?;
            Witness { r, g, i: *i }
        }
        Family::Case3 => {
            let d = dir(5, -8)?;
            let r = HomogForm::new(d, 14, 8, UniPoly::from_ints(&[9, 9]))?;
            let g = HomogForm::new(d, 7, 4, UniPoly::from_ints(&[1, 1]).pow(2).scale(&rat(-1)))?;
            Witness { r, g, i: 2 }
        }
    };
    if !central_residual(&w.r, &w.g, w.i)?.is_zero() {
        return Err(HomogError::NotCompanion(w.i));
    }
    Ok(w)
}

/// Shape restrictions for [`witness_search`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Candidate roots `λ` of `f̂`.
    pub pool: Vec<BigRational>,
    /// Largest exponent `i` tried.
    pub i_max: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            pool: vec![rat(1), rat(-1), rat(2), rat(-2), ratio(1, 2)],
            i_max: 4,
        }
    }
}

/// All multiplicity vectors over `n` slots summing to `total`, largest first
/// slot first.
fn compositions(n: usize, total: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(n - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Searches `R = x^α y^β ∏(w − λ)^{s_λ}` with roots from the pool and
/// `Σ s_λ = steps`, returning the first `R` that admits a companion for some
/// `i ∈ 2..=i_max`. `None` means the restricted search space is exhausted.
pub fn witness_search(
    st: LatticePoint,
    d: Direction,
    steps: i64,
    cfg: &SearchConfig,
) -> Result<Option<Witness>, HomogError> {
    if steps < 1 || !edge_passes(st, d, steps, None) {
        return Err(HomogError::EdgeRejected { st, dir: d, steps });
    }
    let (alpha, beta) = st.as_int().expect("checked by the predicate");
    let mut pool: Vec<BigRational> = Vec::new();
    for l in &cfg.pool {
        if !l.is_zero() && !pool.contains(l) {
            pool.push(l.clone());
        }
    }
    let linears: Vec<UniPoly> = pool.iter().map(|l| UniPoly::linear_root(l.clone())).collect();
    for mults in compositions(linears.len(), steps as usize) {
        let fhat = mults
            .iter()
            .zip(&linears)
            .fold(UniPoly::one(), |acc, (m, l)| &acc * &l.pow(*m as u32));
        let r = HomogForm::new(d, alpha, beta, fhat)?;
        for i in 2..=cfg.i_max {
            if companion_infeasible_mod_p(&r, i) {
                continue;
            }
            if let Some(g) = solve_companion(&r, i)? {
                return Ok(Some(Witness { r, g, i }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;

    fn pp(s: &str) -> LaurentPoly {
        parse_poly(s).unwrap()
    }

    fn d(r: i64, s: i64) -> Direction {
        Direction::new(r, s).unwrap()
    }

    fn hf(s: &str, r: i64, sg: i64) -> HomogForm {
        HomogForm::from_poly(&pp(s), d(r, sg)).unwrap()
    }

    #[test]
    fn factored_form() {
        let h = hf("x^3*y + x", 1, -2);
        assert_eq!((h.alpha(), h.beta()), (1, 0));
        assert_eq!(h.fhat(), &UniPoly::from_ints(&[1, 1]));
        let h = hf("9*x^14*y^8*(1+x^8*y^5)", 5, -8);
        assert_eq!((h.alpha(), h.beta(), h.u()), (14, 8, 6));
        assert_eq!(h.fhat(), &UniPoly::from_ints(&[9, 9]));
        assert_eq!(h.en(), LatticePoint::int(22, 13));
        assert_eq!(
            HomogForm::from_poly(&pp("x+y"), d(1, -2)),
            Err(HomogError::NotHomogeneous(d(1, -2)))
        );
        assert_eq!(HomogForm::from_poly(&pp("x^(-1)"), d(1, -2)), Err(HomogError::NotInL));
    }

    #[test]
    fn residuals() {
        let r = hf("x*(1+x^2*y)", 1, -2);
        let g = hf("-(1/2)*(1+x^2*y)^2", 1, -2);
        assert!(central_residual(&r, &g, 2).unwrap().is_zero());
        let w = family_witness(&Family::Case3).unwrap();
        assert!(central_residual(&w.r, &w.g, 2).unwrap().is_zero());
        let bumped = HomogForm::new(
            w.g.dir(),
            w.g.alpha(),
            w.g.beta(),
            w.g.fhat() + &UniPoly::from_ints(&[0, 1]),
        )
        .unwrap();
        assert!(!central_residual(&w.r, &bumped, 2).unwrap().is_zero());
    }

    #[test]
    fn companions() {
        let r = hf("x*(1+x^2*y)", 1, -2);
        let g = solve_companion(&r, 2).unwrap().unwrap();
        assert!(central_residual(&r, &g, 2).unwrap().is_zero());
        // Companions are unique up to adding elements commuting with R; here
        // the solver drops the constant of the textbook solution.
        let diff = &g.to_poly() - &pp("-(1/2)*(1+x^2*y)^2");
        assert!(diff.as_constant().is_some());
        assert_eq!(solve_companion(&r, 1).unwrap(), None);
        let r = hf("x*(x^3*y^2+1)^2", 2, -3);
        let g = solve_companion(&r, 2).unwrap().unwrap();
        assert!(Witness { r, g, i: 2 }.bracket_holds());
    }

    #[test]
    fn power_roots() {
        let (r, k) = power_free_root(&pp("x^2*(1+x^2*y)^2"), d(1, -2)).unwrap();
        assert_eq!((r.to_poly(), k), (pp("x*(1+x^2*y)"), 2));
        let (r, k) = power_free_root(&pp("x^3*y"), d(1, -2)).unwrap();
        assert_eq!((r.to_poly(), k), (pp("x^3*y"), 1));
        let (r, k) = power_free_root(&pp("8*x^3*(1+x*y)^3"), d(1, -1)).unwrap();
        assert_eq!((r.to_poly(), k), (pp("2*x*(1+x*y)"), 3));
        let (r, k) = power_free_root(&pp("2*x^2*(1+x*y)^2"), d(1, -1)).unwrap();
        assert_eq!((r.to_poly(), k), (pp("2*x^2*(1+x*y)^2"), 1));
        let (r, k) = power_free_root(&pp("-x^3*(1+x*y)^3"), d(1, -1)).unwrap();
        assert_eq!((r.to_poly(), k), (pp("-x*(1+x*y)"), 3));
    }

    #[test]
    fn multiplicities() {
        let w = family_witness(&Family::Ejemplo { k: 1, j: 1 }).unwrap();
        let recs = multiplicity_classify(&w.r, &w.g, 2).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!((recs[0].s, recs[0].t, recs[0].tag), (1, 2, MultiplicityTag::A));
        let w = family_witness(&Family::Case3).unwrap();
        let recs = multiplicity_classify(&w.r, &w.g, 2).unwrap();
        let z = &recs[0];
        assert_eq!(z.factor, UniPoly::from_ints(&[0, 1]));
        assert_eq!((z.s, z.t, z.tag), (8, 4, MultiplicityTag::B));
        assert!(recs[1..].iter().all(|r| r.tag == MultiplicityTag::A));
        assert_eq!(recs.len(), 3);
    }

    #[test]
    fn exponent_reduction() {
        let w = family_witness(&Family::Ejemplo { k: 1, j: 1 }).unwrap();
        let g3 = reduce_exponent(&w.r, &w.g, 2, 3).unwrap();
        assert_eq!(g3, w.g.mul(&w.r).unwrap());
        assert!(central_residual(&w.r, &g3, 3).unwrap().is_zero());
        assert_eq!(reduce_exponent(&w.r, &g3, 3, 2).unwrap(), w.g);
        let r = hf("x*(x^3*y-1)", 1, -3);
        let g = solve_companion(&r, 4).unwrap().expect("companion exists");
        assert_eq!(reduce_exponent(&r, &g, 4, 2), Err(HomogError::HypothesisViolated(-1)));
    }

    #[test]
    fn directions() {
        let c = candidate_directions(LatticePoint::int(1, 0), 2, None, Some(3)).unwrap();
        assert!(c.contains(&DirectionCandidate {
            dir: d(2, -3),
            case: CaseTag::Case2 { s: 2, t_prime: 1 }
        }));
        assert!(c.iter().any(|x| x.case == CaseTag::Case1));
        let c = candidate_directions(LatticePoint::int(3, 1), 1, None, None).unwrap();
        assert!(!c.iter().any(|x| x.dir == d(2, -3)));
        let c = candidate_directions(LatticePoint::int(1, 0), 1, None, Some(1)).unwrap();
        assert!(c.contains(&DirectionCandidate {
            dir: d(1, -2),
            case: CaseTag::Case2 { s: 1, t_prime: 1 }
        }));
        assert_eq!(
            candidate_directions(LatticePoint::int(2, 2), 1, None, None),
            Err(HomogError::BadStart(LatticePoint::int(2, 2)))
        );
    }

    #[test]
    fn families() {
        let w = family_witness(&Family::Ejemplo { k: 1, j: 1 }).unwrap();
        assert_eq!(w.r.to_poly(), pp("x*(1+x^2*y)"));
        assert_eq!(w.g.to_poly(), pp("-(1/2)*(1+x^2*y)^2"));
        let w = family_witness(&Family::Caso2 { n: 2 }).unwrap();
        assert_eq!(w.r.to_poly(), pp("x*(x^3*y^2+1)^2"));
        assert_eq!(w.r.en(), LatticePoint::int(7, 4));
        assert!(w.bracket_holds());
        assert!(family_witness(&Family::Case1 {
            u: 1,
            sigma: -2,
            lambda: rat(1),
            j: 1,
            i: 1
        })
        .is_err());
    }

    #[test]
    fn searches() {
        let cfg = SearchConfig::default();
        let w = witness_search(LatticePoint::int(1, 0), d(2, -3), 2, &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(w.r.en(), LatticePoint::int(7, 4));
        assert!(w.bracket_holds());
        let only_minus_one = SearchConfig {
            pool: vec![rat(-1)],
            i_max: 2,
        };
        let w = witness_search(LatticePoint::int(1, 0), d(2, -3), 2, &only_minus_one)
            .unwrap()
            .unwrap();
        assert_eq!(w.r.to_poly(), pp("x*(x^3*y^2+1)^2"));
        let w = witness_search(LatticePoint::int(1, 0), d(1, -2), 1, &cfg)
            .unwrap()
            .unwrap();
        assert_eq!(w.r.en(), LatticePoint::int(3, 1));
        assert!(matches!(
            witness_search(LatticePoint::int(3, 1), d(2, -3), 1, &cfg),
            Err(HomogError::EdgeRejected { .. })
        ));
    }
    #[test]
    fn modular_filter_is_sound() {
        let pool = [rat(1), rat(-1), rat(2), ratio(1, 2)];
        let mut agree = 0;
        for (rho, sigma) in [(1, -2), (2, -3), (1, -3), (3, -4)] {
            let dir = d(rho, sigma);
            for (alpha, beta) in [(1, 0), (2, 0), (3, 1)] {
                for mults in compositions(pool.len(), 3) {
                    let fhat = mults.iter().zip(&pool).fold(UniPoly::one(), |acc, (m, l)| {
                        &acc * &UniPoly::linear_root(l.clone()).pow(*m as u32)
                    });
                    let r = HomogForm::new(dir, alpha, beta, fhat).unwrap();
                    for i in 2..=4 {
                        let exact = solve_companion(&r, i).unwrap();
                        if companion_infeasible_mod_p(&r, i) {
                            assert!(exact.is_none(), "filter rejected a solvable system for {r}, i = {i}");
                        } else if exact.is_none() {
                            continue;
                        }
                        agree += 1;
                    }
                }
            }
        }
        assert!(agree > 0);
    }
}
