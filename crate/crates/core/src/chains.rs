//! Admissible chains of lower-side edges and the enumeration of candidate
//! corners below a `v_{1,-1}` bound.
//!
//! Classification is two-tiered. Tier 1 propagates the arithmetic edge
//! predicate from the start points `(l,0)`; a point no Tier-1 chain reaches is
//! discarded. Tier 2 looks for explicit companions edge by edge; a point with a
//! fully witnessed chain is witnessed, otherwise it stays unresolved.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::homogform::{
    candidate_directions, family_witness, monic_power_root, rational_root, witness_search, CaseTag, Family, HomogError,
    HomogForm, SearchConfig, Witness,
};
use crate::lattice::{self, dir_lt, val, Direction, Exp, LatticePoint};
use crate::laurentpoly::LaurentPoly;

/// Per-edge data: the homogeneous `R_j` and its companion `(G_j, i_j)`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EdgeData {
    pub r: Option<HomogForm>,
    pub companion: Option<(HomogForm, u32)>,
}

impl EdgeData {
    pub fn witnessed(w: Witness) -> Self {
        EdgeData {
            r: Some(w.r),
            companion: Some((w.g, w.i)),
        }
    }

    pub fn witness(&self) -> Option<Witness> {
        let r = self.r.clone()?;
        let (g, i) = self.companion.clone()?;
        Some(Witness { r, g, i })
    }
}

/// Points `C_0..C_k`, directions `(ρ_j,σ_j)` and per-edge data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleChain {
    pub points: Vec<LatticePoint>,
    pub dirs: Vec<Direction>,
    pub edges: Vec<EdgeData>,
}

impl AdmissibleChain {
    /// The length-0 chain at `(l,0)`.
    pub fn start(l: i64) -> Self {
        AdmissibleChain {
            points: vec![LatticePoint::int(l, 0)],
            dirs: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn end(&self) -> LatticePoint {
        *self.points.last().expect("chains have a start point")
    }

    pub fn push(&mut self, dir: Direction, to: LatticePoint, data: EdgeData) {
        self.points.push(to);
        self.dirs.push(dir);
        self.edges.push(data);
    }

    pub fn is_fully_witnessed(&self) -> bool {
        self.edges.iter().all(|e| e.witness().is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainViolation {
    Length,
    NonIntegral(LatticePoint),
    /// Condition (1): `C_0 = (l,0)` with `l ≥ 1`.
    NotAnchored(LatticePoint),
    /// Condition (2): directions strictly increase.
    NotIncreasing {
        edge: usize,
        prev: Direction,
        next: Direction,
    },
    /// Directions must lie in `](0,-1),(1,-1)[`.
    OutsideArc {
        edge: usize,
        dir: Direction,
    },
    /// The step `C_j − C_{j-1}` is not a positive multiple of `(-σ,ρ)`.
    NotOnEdge {
        edge: usize,
    },
    /// Condition (3): `R_j` homogeneous for the edge direction, not a monomial.
    BadForm {
        edge: usize,
    },
    /// Condition (4): `st(R_j) = C_{j-1}`.
    StartMismatch {
        edge: usize,
        found: LatticePoint,
    },
    /// Condition (5): `en(R_j) = C_j`.
    EndMismatch {
        edge: usize,
        found: LatticePoint,
    },
    /// Condition (6): `v_{1,-1}(C_j) > 0`.
    OnOrAboveDiagonal {
        edge: usize,
    },
    /// Condition (7): `v_{ρ_j,σ_j}(C_j) ≥ ρ_j`.
    LowValue {
        edge: usize,
        value: Exp,
    },
    /// Condition (8): `[G_j,R_j] = R_j^{i_j}`.
    BracketFails {
        edge: usize,
    },
    /// A companion without its `R_j`.
    CompanionWithoutForm {
        edge: usize,
    },
}

impl fmt::Display for ChainViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ChainViolation::*;
        match self {
            Length => write!(f, "points, directions and edge data have inconsistent lengths"),
            NonIntegral(p) => write!(f, "point {p} is not integral"),
            NotAnchored(p) => write!(f, "condition (1): chain starts at {p}, not at (l,0) with l >= 1"),
            NotIncreasing { edge, prev, next } => {
                write!(f, "condition (2): edge {edge}: direction {next} does not follow {prev}")
            }
            OutsideArc { edge, dir } => write!(f, "edge {edge}: direction {dir} is outside ](0,-1),(1,-1)["),
            NotOnEdge { edge } => write!(f, "edge {edge}: step is not a positive multiple of (-sigma,rho)"),
            BadForm { edge } => write!(
                f,
                "condition (3): edge {edge}: R is a monomial or has the wrong direction"
            ),
            StartMismatch { edge, found } => write!(f, "condition (4): edge {edge}: st(R) = {found}"),
            EndMismatch { edge, found } => write!(f, "condition (5): edge {edge}: en(R) = {found}"),
            OnOrAboveDiagonal { edge } => write!(f, "condition (6): edge {edge}: end point has v11 <= 0"),
            LowValue { edge, value } => write!(f, "condition (7): edge {edge}: value {value} is below rho"),
            BracketFails { edge } => write!(f, "condition (8): edge {edge}: [G,R] != R^i"),
            CompanionWithoutForm { edge } => write!(f, "edge {edge}: companion given without R"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainVerdict {
    /// Every condition holds and every edge carries a verified companion.
    Valid,
    /// Every checkable condition holds but some edge lacks `R` or `G`.
    SkeletonValid,
}

fn v11(p: &LatticePoint) -> Exp {
    p.x - p.y
}

/// Checks the numbered chain conditions; brackets are recomputed exactly.
pub fn validate_chain(c: &AdmissibleChain) -> Result<ChainVerdict, Vec<ChainViolation>> {
    use ChainViolation::*;
    if c.points.is_empty() || c.points.len() != c.dirs.len() + 1 || c.dirs.len() != c.edges.len() {
        return Err(vec![Length]);
    }
    let mut bad = Vec::new();
    for p in &c.points {
        if p.as_int().is_none() {
            bad.push(NonIntegral(*p));
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    let c0 = c.points[0];
    if !c0.y.is_zero() || c0.x < Exp::from_integer(1) {
        bad.push(NotAnchored(c0));
    }
    let mut complete = true;
    for (j, (d, data)) in c.dirs.iter().zip(&c.edges).enumerate() {
        let edge = j + 1;
        let (from, to) = (c.points[j], c.points[j + 1]);
        if !d.in_lower_arc() {
            bad.push(OutsideArc { edge, dir: *d });
        }
        if j > 0 && !dir_lt(c.dirs[j - 1], *d).unwrap_or(false) {
            bad.push(NotIncreasing {
                edge,
                prev: c.dirs[j - 1],
                next: *d,
            });
        }
        let step = to - from;
        let (tau, rho) = d.edge_step();
        let on_edge = rho != 0 && {
            let m = step.y / rho;
            m.is_integer() && m >= Exp::from_integer(1) && step.x == m * tau
        };
        if !on_edge {
            bad.push(NotOnEdge { edge });
        }
        if v11(&to) <= Exp::zero() {
            bad.push(OnOrAboveDiagonal { edge });
        }
        let value = val(*d, &to);
        if value < Exp::from_integer(d.rho()) {
            bad.push(LowValue { edge, value });
        }
        match &data.r {
            Some(r) => {
                if r.dir() != *d || r.is_monomial() {
                    bad.push(BadForm { edge });
                }
                if r.st() != from {
                    bad.push(StartMismatch { edge, found: r.st() });
                }
                if r.en() != to {
                    bad.push(EndMismatch { edge, found: r.en() });
                }
                match &data.companion {
                    Some(_) => {
                        let w = data.witness().expect("both parts present");
                        if w.g.dir() != *d || !w.bracket_holds() {
                            bad.push(BracketFails { edge });
                        }
                    }
                    None => complete = false,
                }
            }
            None => {
                complete = false;
                if data.companion.is_some() {
                    bad.push(CompanionWithoutForm { edge });
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    Ok(if complete {
        ChainVerdict::Valid
    } else {
        ChainVerdict::SkeletonValid
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("P(0,0) = 0")]
    NotAnchored,
    #[error("corner {0} is not divisible by m")]
    NotDivisible(LatticePoint),
    #[error("leading form along {0} is not an m-th power")]
    PowerRootFailed(Direction),
    #[error("polygon does not have the shape of a chain: {0}")]
    Shape(String),
    #[error(transparent)]
    Form(#[from] HomogError),
}

/// Reads a chain skeleton off the lower side of the Newton polygon of `P`,
/// scaled by `1/m`, with `R_j` the `m`-th root of each edge's leading form.
pub fn chain_from_polygon(p: &LaurentPoly, m: u32) -> Result<AdmissibleChain, ChainError> {
    if m == 0 {
        return Err(ChainError::Shape("m must be positive".into()));
    }
    if p.constant_term().is_zero() {
        return Err(ChainError::NotAnchored);
    }
    if !p.in_l() {
        return Err(ChainError::Shape("P has exponents outside K[x,y]".into()));
    }
    let mi = m as i64;
    let scale = |q: LatticePoint| -> Result<LatticePoint, ChainError> {
        let (a, b) = q.as_int().expect("integral");
        if a % mi != 0 || b % mi != 0 {
            return Err(ChainError::NotDivisible(q));
        }
        Ok(LatticePoint::int(a / mi, b / mi))
    };
    let corners = lattice::newton_polygon(&p.support()).expect("nonempty support");
    let edges = lattice::lower_side_edges(&corners);
    let start = match edges.first() {
        Some(e) => e.start,
        None => p
            .support()
            .into_iter()
            .filter(|q| q.y.is_zero())
            .max()
            .expect("constant term present"),
    };
    if !start.y.is_zero() || start.x.is_zero() {
        return Err(ChainError::Shape(format!(
            "lower side starts at {start}, not on the positive x-axis"
        )));
    }
    let mut chain = AdmissibleChain {
        points: vec![scale(start)?],
        dirs: Vec::new(),
        edges: Vec::new(),
    };
    for e in &edges {
        let lf = p.leading_form(e.dir).expect("nonzero");
        let (r0, k, c) = monic_power_root(&lf, e.dir)?;
        if k % m != 0 {
            return Err(ChainError::PowerRootFailed(e.dir));
        }
        let mut r = r0.pow(k / m);
        if let Some(q) = rational_root(&c, m) {
            r = r.scale(&q);
        }
        let to = scale(e.end)?;
        chain.push(
            e.dir,
            to,
            EdgeData {
                r: Some(r),
                companion: None,
            },
        );
    }
    Ok(chain)
}

/// Fills missing companions by solving `[G,R] = R^i` for `i = 2..=i_max`.
/// Edges without a solution are left as they are.
pub fn complete_chain(c: &AdmissibleChain, i_max: u32) -> AdmissibleChain {
    let mut out = c.clone();
    for data in &mut out.edges {
        if data.companion.is_some() {
            continue;
        }
        let Some(r) = &data.r else { continue };
        for i in 2..=i_max {
            if let Ok(Some(g)) = crate::homogform::solve_companion(r, i) {
                data.companion = Some((g, i));
                break;
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

type Pt = (i64, i64);

fn pt(p: Pt) -> LatticePoint {
    LatticePoint::int(p.0, p.1)
}

fn show(p: Pt) -> String {
    format!("({},{})", p.0, p.1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Status {
    Discarded,
    Witnessed,
    Unresolved,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Discarded => "discarded",
            Status::Witnessed => "witnessed",
            Status::Unresolved => "unresolved",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub point: Pt,
    pub v11: i64,
    pub status: Status,
    /// Present for witnessed points.
    pub chain: Option<AdmissibleChain>,
    /// Failed tests for discarded points, open edges for unresolved ones.
    pub reasons: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EnumConfig {
    pub search: SearchConfig,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    pub bound: i64,
    pub config: EnumConfig,
    pub candidates: Vec<Candidate>,
}

impl EnumerationReport {
    pub fn get(&self, a: i64, b: i64) -> Option<&Candidate> {
        self.candidates.iter().find(|c| c.point == (a, b))
    }

    pub fn status(&self, a: i64, b: i64) -> Option<Status> {
        self.get(a, b).map(|c| c.status)
    }
}

/// One Tier-1 edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TierOneEdge {
    pub from: Pt,
    pub from_dir: Option<Direction>,
    pub dir: Direction,
    pub steps: i64,
    pub to: Pt,
}

type State = (Pt, Option<Direction>);

/// Queue order for Tier 2: `v11` first, then point and direction.
type StateKey = (i64, Pt, Option<(i64, i64)>);

/// Reachability under the arithmetic edge predicate.
#[derive(Clone, Debug, Default)]
pub struct TierOne {
    pub bound: i64,
    pub states: HashSet<State>,
    pub edges: Vec<TierOneEdge>,
    pub points: HashSet<Pt>,
}

impl TierOne {
    pub fn outgoing(&self) -> HashMap<State, Vec<TierOneEdge>> {
        let mut out: HashMap<State, Vec<TierOneEdge>> = HashMap::new();
        for e in &self.edges {
            out.entry((e.from, e.from_dir)).or_default().push(*e);
        }
        out
    }

    /// Directions of the Tier-1 edges arriving at `p`, plus `None` for start points.
    pub fn arrival_dirs(&self, p: Pt) -> Vec<Option<Direction>> {
        self.states.iter().filter(|s| s.0 == p).map(|s| s.1).collect()
    }
}

/// Whether `case` admits an edge of `steps` primitive steps.
fn case_allows(case: &CaseTag, steps: i64) -> bool {
    match case {
        CaseTag::Case1 | CaseTag::Case3 { .. } => true,
        CaseTag::Case2 { s, .. } => *s <= steps,
    }
}

/// Tier-1 breadth-first search from `(l,0)`, `1 ≤ l < bound`.
pub fn tier_one(bound: i64) -> TierOne {
    let mut t = TierOne {
        bound,
        ..TierOne::default()
    };
    let mut queue: VecDeque<State> = VecDeque::new();
    for l in 1..bound {
        let s = ((l, 0), None);
        t.states.insert(s);
        t.points.insert((l, 0));
        queue.push_back(s);
    }
    while let Some((p, prev)) = queue.pop_front() {
        let gap = bound - 1 - (p.0 - p.1);
        if gap < 1 {
            continue;
        }
        let cands = candidate_directions(pt(p), gap, prev, Some(gap)).expect("valid start");
        let mut by_dir: BTreeMap<(i64, i64), Vec<CaseTag>> = BTreeMap::new();
        for c in cands {
            by_dir.entry((c.dir.rho(), c.dir.sigma())).or_default().push(c.case);
        }
        for ((rho, sigma), cases) in by_dir {
            let d = Direction::new(rho, sigma).expect("primitive");
            let k = d.gap();
            for steps in 1..=gap / k {
                if !cases.iter().any(|c| case_allows(c, steps)) {
                    continue;
                }
                let to = (p.0 - sigma * steps, p.1 + rho * steps);
                t.edges.push(TierOneEdge {
                    from: p,
                    from_dir: prev,
                    dir: d,
                    steps,
                    to,
                });
                let s = (to, Some(d));
                t.points.insert(to);
                if t.states.insert(s) {
                    queue.push_back(s);
                }
            }
        }
    }
    t
}

/// The candidate points listed by [`enumerate`]: every `(a,b)` with
/// `1 ≤ a−b < bound` and `0 ≤ b ≤ (a−b−1)²`, every `℘(n′,n′−1)` with
/// `℘ < bound` and `2 ≤ n′ < bound`, and everything Tier 1 reaches.
pub fn candidate_universe(bound: i64, reach: &TierOne) -> Vec<Pt> {
    let mut set: HashSet<Pt> = reach.points.clone();
    for v in 1..bound {
        for b in 0..=(v - 1) * (v - 1) {
            set.insert((v + b, b));
        }
        for n in 2..bound {
            set.insert((v * n, v * (n - 1)));
        }
    }
    let mut pts: Vec<Pt> = set.into_iter().collect();
    pts.sort_by_key(|p| (p.0 - p.1, p.0));
    pts
}

fn ejemplo_chain(p: Pt) -> AdmissibleChain {
    let (a, b) = p;
    let k = a - 2 * b;
    let w = family_witness(&Family::Ejemplo { k, j: b }).expect("k, j >= 1");
    let mut c = AdmissibleChain::start(k);
    c.push(Direction::new(1, -2).expect("primitive"), pt(p), EdgeData::witnessed(w));
    c
}

/// Explains why each geometrically possible incoming edge of an unreachable
/// point fails.
fn discard_reasons(p: Pt, reach: &TierOne) -> Vec<String> {
    let (a, b) = p;
    let v = a - b;
    let mut out = Vec::new();
    if v < 1 {
        out.push(format!("v11 = {v} <= 0"));
        return out;
    }
    for steps in 1..=b {
        for k in 1..=(v - 1) / steps {
            for rho in 1..=b / steps {
                if rho.gcd(&k) != 1 {
                    continue;
                }
                let sigma = -rho - k;
                let d = Direction::new(rho, sigma).expect("primitive");
                let st = (a + sigma * steps, b - rho * steps);
                let head = format!("edge {} -> {} along {d} with {steps} steps", show(st), show(p));
                if !reach.points.contains(&st) {
                    out.push(format!("{head}: start is not reachable"));
                    continue;
                }
                let u = rho * st.0 + sigma * st.1;
                if u < rho {
                    out.push(format!("{head}: u = {u} < rho"));
                    continue;
                }
                let cands = candidate_directions(pt(st), steps, None, Some(k)).unwrap_or_default();
                let passes = cands.iter().any(|c| c.dir == d && case_allows(&c.case, steps));
                if !passes {
                    out.push(format!(
                        "{head}: no s <= {steps} with u | s*k and no gamma | gcd{} with u | gamma*k (u = {u}, k = {k})",
                        show(st)
                    ));
                    continue;
                }
                let arrivals = reach.arrival_dirs(st);
                debug_assert!(arrivals
                    .iter()
                    .all(|a| a.is_some_and(|a| !dir_lt(a, d).unwrap_or(false))));
                out.push(format!(
                    "{head}: every chain reaching the start arrives with a direction >= {d}"
                ));
            }
        }
    }
    if out.is_empty() {
        out.push("no lower-side edge from a point below the diagonal ends here".into());
    }
    out
}

/// Classifies every candidate corner with `v_{1,-1} < bound`.
pub fn enumerate(bound: i64, cfg: &EnumConfig) -> EnumerationReport {
    let reach = tier_one(bound);
    let universe = candidate_universe(bound, &reach);
    let outgoing = reach.outgoing();
    let slope_two = Direction::new(1, -2).expect("primitive");

    // Targets for Tier 2: reachable points not covered by the explicit families.
    let targets: HashSet<Pt> = reach
        .points
        .iter()
        .copied()
        .filter(|&(a, b)| b > 0 && a - 2 * b <= 0)
        .collect();
    // Points from which some target is Tier-1 reachable.
    let mut preds: HashMap<Pt, Vec<Pt>> = HashMap::new();
    for e in &reach.edges {
        preds.entry(e.to).or_default().push(e.from);
    }
    let mut useful: HashSet<Pt> = targets.clone();
    let mut stack: Vec<Pt> = targets.iter().copied().collect();
    while let Some(p) = stack.pop() {
        for &q in preds.get(&p).into_iter().flatten() {
            if useful.insert(q) {
                stack.push(q);
            }
        }
    }

    let mut witnessed: HashMap<State, AdmissibleChain> = HashMap::new();
    let mut queue: BTreeMap<StateKey, State> = BTreeMap::new();
    let key = |s: &State| -> StateKey { (s.0 .0 - s.0 .1, s.0, s.1.map(|d| (d.rho(), d.sigma()))) };
    for s in &reach.states {
        let (p, d) = *s;
        let chain = if d.is_none() {
            Some(AdmissibleChain::start(p.0))
        } else if d == Some(slope_two) && p.0 - 2 * p.1 > 0 && p.1 > 0 {
            Some(ejemplo_chain(p))
        } else {
            None
        };
        if let Some(c) = chain {
            witnessed.insert(*s, c);
            queue.insert(key(s), *s);
        }
    }
    let mut memo: HashMap<(Pt, Direction, i64), Option<Witness>> = HashMap::new();
    let mut tried: HashMap<Pt, Vec<String>> = HashMap::new();
    while let Some((_, s)) = queue.pop_first() {
        if !useful.contains(&s.0) {
            continue;
        }
        let chain = witnessed[&s].clone();
        for e in outgoing.get(&s).into_iter().flatten() {
            let next: State = (e.to, Some(e.dir));
            if !useful.contains(&e.to) || witnessed.contains_key(&next) {
                continue;
            }
            let found = memo
                .entry((e.from, e.dir, e.steps))
                .or_insert_with(|| witness_search(pt(e.from), e.dir, e.steps, &cfg.search).ok().flatten())
                .clone();
            match found {
                Some(w) => {
                    let mut c = chain.clone();
                    c.push(e.dir, pt(e.to), EdgeData::witnessed(w));
                    witnessed.insert(next, c);
                    queue.insert(key(&next), next);
                }
                None => tried.entry(e.to).or_default().push(format!(
                    "edge {} -> {} along {} with {} steps: witness search exhausted",
                    show(e.from),
                    show(e.to),
                    e.dir,
                    e.steps
                )),
            }
        }
    }
    let mut best: HashMap<Pt, AdmissibleChain> = HashMap::new();
    for (s, c) in &witnessed {
        let replace = match best.get(&s.0) {
            None => true,
            Some(old) => (c.points.len(), chain_key(c)) < (old.points.len(), chain_key(old)),
        };
        if replace {
            best.insert(s.0, c.clone());
        }
    }

    let candidates = universe
        .into_iter()
        .map(|p| {
            let v = p.0 - p.1;
            if !reach.points.contains(&p) {
                return Candidate {
                    point: p,
                    v11: v,
                    status: Status::Discarded,
                    chain: None,
                    reasons: discard_reasons(p, &reach),
                };
            }
            let chain = if p.1 == 0 {
                Some(AdmissibleChain::start(p.0))
            } else if p.0 - 2 * p.1 > 0 {
                Some(ejemplo_chain(p))
            } else {
                best.get(&p).cloned()
            };
            match chain {
                Some(c) => Candidate {
                    point: p,
                    v11: v,
                    status: Status::Witnessed,
                    chain: Some(c),
                    reasons: Vec::new(),
                },
                None => {
                    let mut reasons = tried.remove(&p).unwrap_or_default();
                    reasons.sort();
                    reasons.dedup();
                    if reasons.is_empty() {
                        reasons.push(
                            "Tier-1 chains exist but none of their start segments carries witnessed companions".into(),
                        );
                    }
                    Candidate {
                        point: p,
                        v11: v,
                        status: Status::Unresolved,
                        chain: None,
                        reasons,
                    }
                }
            }
        })
        .collect();
    EnumerationReport {
        bound,
        config: cfg.clone(),
        candidates,
    }
}

fn chain_key(c: &AdmissibleChain) -> Vec<(i64, i64)> {
    c.points.iter().map(|p| p.as_int().expect("integral")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditViolation {
    /// A surviving point with `b ≥ a`.
    NotBelowDiagonal(Pt),
    /// A surviving point with `b > (a−b−1)²`.
    BoundExceeded(Pt),
    /// A surviving point of the form `℘(n′,n′−1)`, `n′ ≥ 2`.
    ImpossibleShape(Pt),
}

impl fmt::Display for AuditViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditViolation::NotBelowDiagonal(p) => write!(f, "{} survives with b >= a", show(*p)),
            AuditViolation::BoundExceeded(p) => write!(f, "{} survives with b > (a-b-1)^2", show(*p)),
            AuditViolation::ImpossibleShape(p) => write!(f, "{} survives but has the shape k(n,n-1)", show(*p)),
        }
    }
}

/// `(a,b) = ℘·(n′, n′−1)` with `n′ ≥ 2`.
pub fn is_impossible_shape(a: i64, b: i64) -> bool {
    let v = a - b;
    v > 0 && b > 0 && a % v == 0 && a / v >= 2
}

/// Checks the bounds every surviving candidate must satisfy.
pub fn audit_report(r: &EnumerationReport) -> Vec<AuditViolation> {
    let mut out = Vec::new();
    for c in r.candidates.iter().filter(|c| c.status != Status::Discarded) {
        let (a, b) = c.point;
        if b >= a {
            out.push(AuditViolation::NotBelowDiagonal(c.point));
        } else if b > (a - b - 1) * (a - b - 1) {
            out.push(AuditViolation::BoundExceeded(c.point));
        }
        if is_impossible_shape(a, b) {
            out.push(AuditViolation::ImpossibleShape(c.point));
        }
    }
    out
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

    #[test]
    fn validates_chains() {
        let w = family_witness(&Family::Caso2 { n: 2 }).unwrap();
        let mut c = AdmissibleChain::start(1);
        c.push(d(2, -3), LatticePoint::int(7, 4), EdgeData::witnessed(w.clone()));
        assert_eq!(validate_chain(&c), Ok(ChainVerdict::Valid));

        let mut bad = c.clone();
        bad.points[0] = LatticePoint::int(0, 1);
        let errs = validate_chain(&bad).unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, ChainViolation::NotAnchored(_))));

        let mut skel = AdmissibleChain::start(1);
        skel.push(d(2, -3), LatticePoint::int(7, 4), EdgeData::default());
        skel.push(d(1, -2), LatticePoint::int(9, 5), EdgeData::default());
        let errs = validate_chain(&skel).unwrap_err();
        assert!(errs.iter().any(|e| matches!(e, ChainViolation::NotIncreasing { .. })));

        let mut skel = AdmissibleChain::start(1);
        skel.push(d(2, -3), LatticePoint::int(7, 4), EdgeData::default());
        assert_eq!(validate_chain(&skel), Ok(ChainVerdict::SkeletonValid));
    }

    #[test]
    fn polygon_chains() {
        let c = chain_from_polygon(&(&pp("(x^3*y+x)^2") + &pp("1")), 2).unwrap();
        assert_eq!(c.points, vec![LatticePoint::int(1, 0), LatticePoint::int(3, 1)]);
        assert_eq!(c.dirs, vec![d(1, -2)]);
        assert_eq!(c.edges[0].r.as_ref().unwrap().to_poly(), pp("x^3*y+x"));
        assert_eq!(chain_from_polygon(&pp("x^3*y+x"), 1), Err(ChainError::NotAnchored));
        let c = chain_from_polygon(&(&pp("(x*(x^3*y^2+1)^2)^3") + &pp("1")), 3).unwrap();
        assert_eq!(c.points, vec![LatticePoint::int(1, 0), LatticePoint::int(7, 4)]);
        let full = complete_chain(&c, 4);
        assert_eq!(validate_chain(&full), Ok(ChainVerdict::Valid));
    }

    #[test]
    fn small_enumerations() {
        let r = enumerate(3, &EnumConfig::default());
        assert_eq!(r.status(1, 0), Some(Status::Witnessed));
        assert_eq!(r.status(2, 0), Some(Status::Witnessed));
        assert_eq!(r.status(2, 1), Some(Status::Discarded));
        assert!(audit_report(&r).is_empty());
    }

    #[test]
    fn audits() {
        let mut r = enumerate(3, &EnumConfig::default());
        r.candidates.push(Candidate {
            point: (5, 4),
            v11: 1,
            status: Status::Unresolved,
            chain: None,
            reasons: Vec::new(),
        });
        assert!(audit_report(&r).contains(&AuditViolation::BoundExceeded((5, 4))));
        assert!(is_impossible_shape(6, 3));
        assert!(!is_impossible_shape(7, 4));
        assert!(!is_impossible_shape(3, 0));
    }
}
