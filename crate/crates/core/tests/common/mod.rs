//! Helpers shared by the integration test targets: independent oracles,
//! seeded random polynomials and the list of family witnesses.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use jacobian_newton::homogform::{candidate_directions, family_witness, CaseTag, Family, Witness};
use jacobian_newton::lattice::Exp;
use jacobian_newton::obstruction::automorphism_pair;
use jacobian_newton::univariate::rat;
use jacobian_newton::{Direction, LatticePoint, LaurentPoly};
use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// `(ρ, σ, case, minimal s or γ)`; case 1 carries 0.
pub type CandKey = (i64, i64, u8, i64);

pub const RHO_MAX: i64 = 12;
pub const SIGMA_MAX: i64 = 16;

/// Brute force over directions and `(s, t′, γ)` checking the defining
/// equalities `t′u = s(−ρ−σ)` and `t′u = γ(−ρ−σ)` directly.
pub fn oracle_candidates(alpha: i64, beta: i64, m_max: i64, prev: Option<(i64, i64)>) -> BTreeSet<CandKey> {
    let mut out = BTreeSet::new();
    let n2 = alpha.gcd(&beta);
    for rho in 1..=RHO_MAX {
        for sigma in -SIGMA_MAX..=-1 {
            let k = -rho - sigma;
            // open lower arc: ρ > 0 and ρ + σ < 0
            if k <= 0 || rho.gcd(&sigma) != 1 {
                continue;
            }
            if let Some((pr, ps)) = prev {
                // strictly after prev in the counterclockwise order
                if pr * sigma - ps * rho <= 0 {
                    continue;
                }
            }
            let u = rho * alpha + sigma * beta;
            if u < rho {
                continue;
            }
            if beta == 0 && rho == 1 {
                out.insert((rho, sigma, 1, 0));
            }
            let case2 = (1..=m_max).find(|&s| (1..=s * k).any(|t| t * u == s * k));
            if let Some(s) = case2 {
                out.insert((rho, sigma, 2, s));
            }
            let case3 = (1..=n2)
                .filter(|g| n2 % g == 0)
                .find(|&g| (1..=g * k).any(|t| t * u == g * k));
            if let Some(g) = case3 {
                out.insert((rho, sigma, 3, g));
            }
        }
    }
    out
}

pub fn library_candidates(alpha: i64, beta: i64, m_max: i64, prev: Option<(i64, i64)>) -> BTreeSet<CandKey> {
    let prev = prev.map(|(r, s)| Direction::new(r, s).unwrap());
    let max_gap = if beta == 0 { Some(SIGMA_MAX) } else { None };
    candidate_directions(LatticePoint::int(alpha, beta), m_max, prev, max_gap)
        .unwrap()
        .into_iter()
        .filter(|c| c.dir.rho() <= RHO_MAX && -c.dir.sigma() <= SIGMA_MAX)
        .map(|c| {
            let (case, param) = match c.case {
                CaseTag::Case1 => (1, 0),
                CaseTag::Case2 { s, .. } => (2, s),
                CaseTag::Case3 { gamma, .. } => (3, gamma),
            };
            (c.dir.rho(), c.dir.sigma(), case, param)
        })
        .collect()
}

/// Points reachable by chains whose edges pass the arithmetic predicate,
/// found by depth-first search with the predicate written out by hand.
pub fn brute_tier_one(bound: i64) -> HashSet<(i64, i64)> {
    fn passes(alpha: i64, beta: i64, rho: i64, k: i64, steps: i64) -> bool {
        let u = rho * alpha - (rho + k) * beta;
        if u < rho {
            return false;
        }
        if beta == 0 && rho == 1 {
            return true;
        }
        let n2 = alpha.gcd(&beta);
        (1..=steps).any(|s| (s * k) % u == 0) || (1..=n2).any(|g| n2 % g == 0 && (g * k) % u == 0)
    }
    fn walk(p: (i64, i64), prev: Option<(i64, i64)>, bound: i64, seen: &mut HashSet<((i64, i64), Option<(i64, i64)>)>) {
        if !seen.insert((p, prev)) {
            return;
        }
        let gap = bound - 1 - (p.0 - p.1);
        for k in 1..=gap {
            // larger ρ pushes u past both s·k and γ·k
            for rho in 1..=(k * (gap + p.1 + p.0) + 1) {
                if rho.gcd(&k) != 1 {
                    continue;
                }
                let sigma = -rho - k;
                if let Some((pr, ps)) = prev {
                    if pr * sigma - ps * rho <= 0 {
                        continue;
                    }
                }
                for steps in 1..=gap / k {
                    if passes(p.0, p.1, rho, k, steps) {
                        let to = (p.0 + (rho + k) * steps, p.1 + rho * steps);
                        walk(to, Some((rho, sigma)), bound, seen);
                    }
                }
            }
        }
    }
    let mut seen = HashSet::new();
    for l in 1..bound {
        walk((l, 0), None, bound, &mut seen);
    }
    seen.into_iter().map(|(p, _)| p).collect()
}

/// A random polynomial with at most `terms` terms, x-exponents in
/// `[-deg, deg]/level`, y-exponents in `[0, deg]`.
pub fn random_poly(rng: &mut ChaCha8Rng, terms: usize, deg: i64, level: i64) -> LaurentPoly {
    LaurentPoly::from_terms((0..rng.gen_range(1..=terms)).map(|_| {
        let x = Exp::new(rng.gen_range(-deg * level..=deg * level), level);
        let y = Exp::from_integer(rng.gen_range(0..=deg));
        let c = rat(rng.gen_range(-5..=5));
        (LatticePoint::new(x, y), c)
    }))
}

/// Like [`random_poly`] but without `x^{-1}` terms.
pub fn random_primitive_target(rng: &mut ChaCha8Rng, terms: usize, deg: i64, level: i64) -> LaurentPoly {
    let p = random_poly(rng, terms, deg, level);
    LaurentPoly::from_terms(
        p.terms()
            .filter(|(q, _)| q.x != Exp::from_integer(-1))
            .map(|(q, c)| (*q, c.clone())),
    )
}

/// A Jacobian pair from up to three random shears of bounded degree.
pub fn random_automorphism(rng: &mut ChaCha8Rng) -> (LaurentPoly, LaurentPoly) {
    let n = rng.gen_range(1..=3);
    let steps: Vec<(bool, i64, u32)> = (0..n)
        .map(|_| {
            let mut c = rng.gen_range(-3..=3);
            if c == 0 {
                c = 1;
            }
            (rng.gen_bool(0.5), c, rng.gen_range(1..=3))
        })
        .collect();
    automorphism_pair(&steps)
}

/// Every family member used by the acceptance suite.
pub fn family_members() -> Vec<(String, Witness)> {
    let mut out = Vec::new();
    let mut push = |f: Family| {
        let name = format!("{f:?}");
        let w = family_witness(&f).unwrap_or_else(|e| panic!("{name}: {e}"));
        out.push((name, w));
    };
    for v in 1..=4 {
        for b in 1..=4 {
            push(Family::Intro { a: v + b, b });
        }
    }
    for k in 1..=4 {
        for j in 1..=4 {
            push(Family::Ejemplo { k, j });
        }
    }
    for n in 1..=5 {
        push(Family::Caso2 { n });
    }
    for (u, sigma, j, i) in case1_params() {
        push(Family::Case1 {
            u,
            sigma,
            lambda: rat(1),
            j,
            i,
        });
    }
    push(Family::Case3);
    out
}

/// Small case-1 parameters accepted by the family constructor.
pub fn case1_params() -> Vec<(i64, i64, i64, u32)> {
    let mut out = Vec::new();
    for u in 1..=3 {
        for sigma in -4..=-2 {
            for j in 1..=3 {
                for i in 2..=3 {
                    let f = Family::Case1 {
                        u,
                        sigma,
                        lambda: rat(1),
                        j,
                        i,
                    };
                    if family_witness(&f).is_ok() {
                        out.push((u, sigma, j, i));
                    }
                }
            }
        }
    }
    out
}
