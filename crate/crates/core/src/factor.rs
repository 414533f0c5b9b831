//! Irreducible factorization of univariate polynomials over the rationals
//! (Zassenhaus: modular factorization, Hensel lifting, recombination).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::univariate::UniPoly;

/// `unit · ∏ factor^mult`, factors monic irreducible, sorted by degree then
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigRational,
    pub factors: Vec<(UniPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m as u32)
            })
    }
}

/// Factors a nonzero polynomial into monic irreducibles over the rationals.
pub fn factor_rational(f: &UniPoly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let unit = f.lead();
    let mut factors = Vec::new();
    let low = f.low_order().unwrap_or(0);
    if low > 0 {
        factors.push((UniPoly::monomial(BigRational::one(), 1), low));
    }
    let rest = f.unshift(low);
    for (sqf, mult) in rest.squarefree() {
        let (_, ints) = sqf.primitive_integer();
        for g in factor_squarefree_integer(&ints) {
            factors.push((UniPoly::from_bigints(&g).monic(), mult));
        }
    }
    factors.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    Factorization { unit, factors }
}

/// Irreducible primitive factors of a squarefree primitive integer polynomial
/// of positive degree.
pub fn factor_squarefree_integer(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let Some((p, modular)) = choose_prime(f) else {
        // No usable prime found among the candidates; treat as irreducible.
        return vec![f.to_vec()];
    };
    if modular.len() == 1 {
        return vec![f.to_vec()];
    }
    let lc = f[n].clone();
    let bound = factor_coefficient_bound(f) * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    let lifted = hensel_lift_all(f, &modular, p, k);
    recombine(f, lifted, &modulus)
}

/// Mignotte-style bound on coefficients of any factor of `f`.
fn factor_coefficient_bound(f: &[BigInt]) -> BigInt {
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let root = norm2.sqrt() + 1;
    root << (f.len() - 1)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..20000).filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Picks a prime with `f mod p` squarefree of full degree, preferring fewer
/// modular factors among the first few such primes; returns the monic modular
/// factors.
fn choose_prime(f: &[BigInt]) -> Option<(u64, Vec<ModPoly>)> {
    let n = f.len() - 1;
    let mut best: Option<(u64, Vec<(ModPoly, usize)>, usize)> = None;
    let mut tried = 0;
    for p in small_primes() {
        let fp = reduce(f, p);
        if fp.len() != n + 1 {
            continue;
        }
        let fm = monic(&fp, p);
        if gcd(&fm, &derivative(&fm, p), p).len() != 1 {
            continue;
        }
        let ddf = distinct_degree(&fm, p);
        let count: usize = ddf.iter().map(|(g, d)| (g.len() - 1) / d).sum();
        if best.as_ref().is_none_or(|b| count < b.2) {
            best = Some((p, ddf, count));
        }
        tried += 1;
        if tried >= 6 || count == 1 {
            break;
        }
    }
    let (p, ddf, _) = best?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut factors = Vec::new();
    for (g, d) in ddf {
        factors.extend(equal_degree(&g, d, p, &mut rng));
    }
    factors.sort();
    Some((p, factors))
}

// ---------- arithmetic in F_p[z] (coefficients low first, trimmed) ----------

type ModPoly = Vec<u64>;

fn trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn reduce(f: &[BigInt], p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    trim(
        f.iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("reduced below p"))
            .collect(),
    )
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn inv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn sub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + mulmod(x, y, p)) % p;
        }
    }
    trim(r)
}

fn divrem(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let db = b.len() - 1;
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let li = inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + db], li, p);
        if c == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - mulmod(c, bc, p)) % p;
        }
        q[k] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

fn monic(a: &ModPoly, p: u64) -> ModPoly {
    let li = inv(*a.last().expect("nonzero"), p);
    a.iter().map(|&c| mulmod(c, li, p)).collect()
}

fn derivative(a: &ModPoly, p: u64) -> ModPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulmod(c, i as u64 % p, p))
            .collect(),
    )
}

fn gcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_empty() {
        let r = divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        monic(&a, p)
    }
}

/// `(s, t)` with `s·a + t·b = 1` for coprime `a`, `b`.
fn ext_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    let li = inv(r0[0], p);
    let sc = |v: &ModPoly| trim(v.iter().map(|&c| mulmod(c, li, p)).collect());
    (sc(&s0), sc(&t0))
}

fn powmod_poly(base: &ModPoly, e: &BigUint, m: &ModPoly, p: u64) -> ModPoly {
    let mut r: ModPoly = vec![1];
    let b = divrem(base, m, p).1;
    for i in (0..e.bits()).rev() {
        r = divrem(&mul(&r, &r, p), m, p).1;
        if e.bit(i) {
            r = divrem(&mul(&r, &b, p), m, p).1;
        }
    }
    r
}

/// Distinct-degree factorization of a monic squarefree polynomial.
fn distinct_degree(f: &ModPoly, p: u64) -> Vec<(ModPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x: ModPoly = vec![0, 1];
    let mut h = x.clone();
    let pe = BigUint::from(p);
    let mut d = 1;
    while f.len() > 2 * d {
        h = powmod_poly(&h, &pe, &f, p);
        let g = gcd(&sub(&h, &x, p), &f, p);
        if g.len() > 1 {
            f = divrem(&f, &g, p).0;
            h = divrem(&h, &f, p).1;
            out.push((g, d));
        }
        d += 1;
    }
    if f.len() > 1 {
        let deg = f.len() - 1;
        out.push((f, deg));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of degree-`d` irreducibles.
fn equal_degree(g: &ModPoly, d: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = g.len() - 1;
    if n == d {
        return vec![g.clone()];
    }
    let e = (BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let a: ModPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() <= 1 {
            continue;
        }
        let b = sub(&powmod_poly(&a, &e, g, p), &vec![1], p);
        let h = gcd(&b, g, p);
        if h.len() > 1 && h.len() < g.len() {
            let q = divrem(g, &h, p).0;
            let mut out = equal_degree(&h, d, p, rng);
            out.extend(equal_degree(&monic(&q, p), d, p, rng));
            return out;
        }
    }
}

// ---------- Hensel lifting over Z / p^k ----------

fn int_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r.iter().map(|c| c.mod_floor(m)).collect()
}

fn to_int(a: &ModPoly) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f ≡ g0·h0 (mod p)`, `g0` monic, to `f ≡ g·h (mod p^k)` with `g`
/// monic.
fn hensel_two(f: &[BigInt], g0: &ModPoly, h0: &ModPoly, p: u64, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let (_, t) = ext_gcd(g0, h0, p);
    let pb = BigInt::from(p);
    let mut g = to_int(g0);
    let mut h = to_int(h0);
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let gh = int_mul(&g, &h, &next);
        let n = f.len().max(gh.len());
        let e: Vec<BigInt> = (0..n)
            .map(|i| {
                let fi = f.get(i).cloned().unwrap_or_default();
                let gi = gh.get(i).cloned().unwrap_or_default();
                (fi - gi).mod_floor(&next) / &pj
            })
            .collect();
        let e = reduce(&e, p);
        let b = divrem(&mul(&t, &e, p), g0, p).1;
        let a = divrem(&sub(&e, &mul(&b, h0, p), p), g0, p).0;
        for (i, c) in b.iter().enumerate() {
            g[i] += &pj * BigInt::from(*c);
        }
        if h.len() < a.len() {
            h.resize(a.len(), BigInt::zero());
        }
        for (i, c) in a.iter().enumerate() {
            h[i] += &pj * BigInt::from(*c);
        }
        pj = next;
    }
    let g = g.iter().map(|c| c.mod_floor(&pj)).collect();
    let h = h.iter().map(|c| c.mod_floor(&pj)).collect();
    (g, h)
}

/// Lifts monic modular factors of `f` to `p^k`, splitting one factor at a time.
fn hensel_lift_all(f: &[BigInt], factors: &[ModPoly], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let modulus = BigInt::from(p).pow(k);
    let mut out = Vec::new();
    let mut cur: Vec<BigInt> = f.iter().map(|c| c.mod_floor(&modulus)).collect();
    for (idx, g0) in factors.iter().enumerate() {
        if idx + 1 == factors.len() {
            let lc = cur.last().expect("nonzero").clone();
            let li = lc.modinv(&modulus).expect("leading coefficient is a unit");
            out.push(cur.iter().map(|c| (c * &li).mod_floor(&modulus)).collect());
            break;
        }
        let cur_p = reduce(&cur, p);
        let h0 = divrem(&cur_p, g0, p).0;
        let (g, h) = hensel_two(&cur, g0, &h0, p, k);
        out.push(g);
        cur = h;
    }
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

fn primitive(a: &[BigInt]) -> Vec<BigInt> {
    let mut g = a.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if a.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    let mut v: Vec<BigInt> = a.iter().map(|c| c / &g).collect();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Exact quotient in `Z[z]`, if `d` divides `f`.
fn int_exact_div(f: &[BigInt], d: &[BigInt]) -> Option<Vec<BigInt>> {
    let q = UniPoly::from_bigints(f).exact_div(&UniPoly::from_bigints(d))?;
    q.coeffs()
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn recombine(f: &[BigInt], mut lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut result = Vec::new();
    let mut cur = f.to_vec();
    let mut size = 1;
    'outer: while 2 * size <= lifted.len() {
        let lc = cur.last().expect("nonzero").clone();
        for subset in combinations(lifted.len(), size) {
            let prod = subset
                .iter()
                .fold(vec![lc.clone()], |acc, &i| int_mul(&acc, &lifted[i], modulus));
            let cand = primitive(&symmetric(&prod, modulus));
            if cand.len() < 2 {
                continue;
            }
            if let Some(q) = int_exact_div(&cur, &cand) {
                result.push(cand);
                cur = q;
                for &i in subset.iter().rev() {
                    lifted.remove(i);
                }
                continue 'outer;
            }
        }
        size += 1;
    }
    if cur.len() > 1 {
        result.push(primitive(&cur));
    }
    result
}
