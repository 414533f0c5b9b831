use jacobian_newton::factor::factor_rational;
use jacobian_newton::homogform::{central_residual, power_free_root, HomogForm};
use jacobian_newton::lattice::{newton_polygon, Exp};
use jacobian_newton::obstruction::{exact_primitive, tilde_j};
use jacobian_newton::univariate::{rat, ratio};
use jacobian_newton::{parse_poly, Axis, Direction, LatticePoint, LaurentPoly, UniPoly};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn arb_poly(max_terms: usize, deg: i64) -> impl Strategy<Value = LaurentPoly> {
    (1i64..=3).prop_flat_map(move |level| {
        prop::collection::vec((-deg * level..=deg * level, 0..=deg, -5i64..=5), 1..=max_terms).prop_map(move |ts| {
            LaurentPoly::from_terms(
                ts.into_iter()
                    .map(|(x, y, c)| (LatticePoint::new(Exp::new(x, level), Exp::from_integer(y)), rat(c))),
            )
        })
    })
}

fn arb_uni(max_deg: usize) -> impl Strategy<Value = UniPoly> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1).prop_map(|cs| UniPoly::from_ints(&cs))
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn on_segment(p: (i64, i64), a: (i64, i64), b: (i64, i64)) -> bool {
    cross(a, b, p) == 0 && p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

fn in_triangle(p: (i64, i64), a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> bool {
    let (d1, d2, d3) = (cross(a, b, p), cross(b, c, p), cross(c, a, p));
    let neg = d1 < 0 || d2 < 0 || d3 < 0;
    let pos = d1 > 0 || d2 > 0 || d3 > 0;
    !(neg && pos)
}

/// `p` is a corner iff it is not in the hull of the other points
/// (Carathéodory: some segment or triangle of them).
fn brute_corners(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for &p in pts {
        let others: Vec<_> = pts.iter().copied().filter(|&q| q != p).collect();
        let mut inside = false;
        'search: for (i, &a) in others.iter().enumerate() {
            for (j, &b) in others.iter().enumerate().skip(i + 1) {
                if on_segment(p, a, b) {
                    inside = true;
                    break 'search;
                }
                for &c in others.iter().skip(j + 1) {
                    if cross(a, b, c) != 0 && in_triangle(p, a, b, c) {
                        inside = true;
                        break 'search;
                    }
                }
            }
        }
        if !inside {
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Determinant of the Sylvester matrix by rational Gaussian elimination.
fn sylvester_resultant(a: &UniPoly, b: &UniPoly) -> BigRational {
    let (m, n) = (a.degree().unwrap(), b.degree().unwrap());
    let size = m + n;
    if size == 0 {
        return BigRational::one();
    }
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        let mut row = vec![BigRational::zero(); size];
        for k in 0..=m {
            row[i + k] = a.coeff(m - k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigRational::zero(); size];
        for k in 0..=n {
            row[i + k] = b.coeff(n - k);
        }
        rows.push(row);
    }
    let mut det = BigRational::one();
    for col in 0..size {
        let Some(piv) = (col..size).find(|&r| !rows[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if piv != col {
            rows.swap(piv, col);
            det = -det;
        }
        let p = rows[col][col].clone();
        det *= &p;
        for r in col + 1..size {
            let f = &rows[r][col] / &p;
            if f.is_zero() {
                continue;
            }
            for c in col..size {
                let sub = &rows[col][c] * &f;
                rows[r][c] -= sub;
            }
        }
    }
    det
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hull_corners_match_brute_force(pts in prop::collection::btree_set((0i64..8, 0i64..8), 1..9)) {
        let pts: Vec<(i64, i64)> = pts.into_iter().collect();
        let lattice: Vec<LatticePoint> = pts.iter().map(|&(a, b)| LatticePoint::int(a, b)).collect();
        let mut got: Vec<(i64, i64)> = newton_polygon(&lattice).unwrap().iter().map(|p| p.as_int().unwrap()).collect();
        got.sort();
        prop_assert_eq!(got, brute_corners(&pts));
    }

    #[test]
    fn canonical_text_round_trips(p in arb_poly(6, 4)) {
        let text = p.to_string();
        let back = parse_poly(&text).unwrap();
        prop_assert_eq!(&back, &p);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn bracket_is_a_poisson_bracket(p in arb_poly(4, 3), q in arb_poly(4, 3), r in arb_poly(3, 2)) {
        let b = LaurentPoly::bracket;
        prop_assert_eq!(b(&p, &q), -&b(&q, &p));
        prop_assert_eq!(b(&(&p + &q), &r), &b(&p, &r) + &b(&q, &r));
        prop_assert_eq!(b(&(&p * &q), &r), &(&p * &b(&q, &r)) + &(&q * &b(&p, &r)));
        let jacobi = &(&b(&p, &b(&q, &r)) + &b(&q, &b(&r, &p))) + &b(&r, &b(&p, &q));
        prop_assert!(jacobi.is_zero());
    }

    #[test]
    fn y_shift_is_invertible_and_keeps_brackets(p in arb_poly(4, 3), q in arb_poly(4, 3), c in -3i64..=3, e in -2i64..=3) {
        let (c, e) = (rat(c), Exp::from_integer(e));
        let ps = p.subst_y_shift(&c, e);
        prop_assert_eq!(ps.subst_y_shift(&-&c, e), p.clone());
        let qs = q.subst_y_shift(&c, e);
        prop_assert_eq!(LaurentPoly::bracket(&ps, &qs), LaurentPoly::bracket(&p, &q).subst_y_shift(&c, e));
    }

    #[test]
    fn tilde_j_integrates_the_bracket(p in arb_poly(4, 3), q in arb_poly(4, 3)) {
        let jt = tilde_j(&p, &q);
        prop_assert_eq!(jt.differentiate(Axis::Y), LaurentPoly::bracket(&p, &q));
        let rest = &jt - &(&q * &p.differentiate(Axis::X));
        prop_assert!(rest.integrate(Axis::X).is_ok());
    }

    #[test]
    fn exact_primitive_recovers_h(h in arb_poly(6, 4)) {
        let h = LaurentPoly::from_terms(h.terms().filter(|(p, _)| p.x != Exp::from_integer(-1)).map(|(p, c)| (*p, c.clone())));
        let (g, f) = (h.differentiate(Axis::X), h.differentiate(Axis::Y));
        let got = exact_primitive(&g, &f).unwrap();
        prop_assert_eq!(got.differentiate(Axis::X), g);
        prop_assert_eq!(got.differentiate(Axis::Y), f);
        prop_assert!((&h - &got).as_constant().is_some());
    }

    #[test]
    fn resultant_matches_sylvester(a in arb_uni(4), b in arb_uni(4)) {
        prop_assume!(a.degree().is_some() && b.degree().is_some());
        prop_assert_eq!(UniPoly::resultant(&a, &b), sylvester_resultant(&a, &b));
    }

    #[test]
    fn factorization_multiplies_back(a in arb_uni(3), b in arb_uni(3), e in 1u32..=3) {
        let f = &a.pow(e) * &b;
        prop_assume!(!f.is_zero());
        let fac = factor_rational(&f);
        prop_assert_eq!(fac.expand(), f);
        for (g, _) in &fac.factors {
            prop_assert!(g.lead().is_one());
            if g.degree() == Some(2) {
                // an irreducible quadratic has a non-square discriminant
                let disc = &g.coeff(1) * &g.coeff(1) - &g.coeff(0) * rat(4);
                let n = disc.numer().abs().sqrt();
                let d = disc.denom().sqrt();
                prop_assert!(disc.is_negative() || &n * &n != disc.numer().abs() || &d * &d != *disc.denom());
            }
        }
    }

    #[test]
    fn power_free_root_is_maximal(
        roots in prop::collection::vec(prop::sample::select(vec![1i64, -1, 2, -2, 3]), 1..=3),
        k in 1u32..=3,
        c in prop::sample::select(vec![(1i64, 1i64), (8, 1), (-1, 1), (4, 9), (3, 1)]),
        alpha in 0i64..=2,
        beta in 0i64..=1,
    ) {
        let d = Direction::new(1, -2).unwrap();
        let fhat = roots.iter().fold(UniPoly::one(), |acc, &l| &acc * &UniPoly::linear_root(rat(l)));
        let r0 = HomogForm::new(d, alpha, beta, fhat).unwrap();
        let f = r0.pow(k).to_poly().scale(&ratio(c.0, c.1));
        prop_assume!(f.support().iter().all(|p| (p.x + p.y).to_integer() <= 12));
        let (root, e) = power_free_root(&f, d).unwrap();
        prop_assert_eq!(root.pow(e).to_poly(), f.clone());
        prop_assert!(e >= 1);
        // no larger exponent works: compare against the multiplicities of an
        // independent factorization of the dehomogenized form
        let rz = HomogForm::from_poly(&f, d).unwrap();
        let mults: Vec<usize> = factor_rational(rz.fhat()).factors.iter().map(|(_, m)| *m).collect();
        for bigger in e + 1..=12 {
            let exps_ok = rz.alpha() % bigger as i64 == 0 && rz.beta() % bigger as i64 == 0;
            let mults_ok = mults.iter().all(|m| m % bigger as usize == 0);
            let lead_ok = jacobian_newton::homogform::rational_root(&rz.fhat().lead(), bigger).is_some();
            prop_assert!(!(exps_ok && mults_ok && lead_ok), "F is a {}-th power but e = {}", bigger, e);
        }
    }

    #[test]
    fn companion_residual_agrees_with_bracket(k in 1i64..=3, j in 1i64..=3, bump in -2i64..=2) {
        use jacobian_newton::homogform::{family_witness, Family};
        let w = family_witness(&Family::Ejemplo { k, j }).unwrap();
        let g = if bump == 0 {
            w.g.clone()
        } else {
            HomogForm::new(w.g.dir(), w.g.alpha(), w.g.beta(), w.g.fhat() + &UniPoly::from_ints(&[0, bump])).unwrap()
        };
        let residual_zero = central_residual(&w.r, &g, 2).unwrap().is_zero();
        let bracket_ok = LaurentPoly::bracket(&g.to_poly(), &w.r.to_poly()) == w.r.to_poly().pow(2);
        prop_assert_eq!(residual_zero, bracket_ok);
        prop_assert_eq!(residual_zero, bump == 0);
        // scaling covariance for i = 2
        let c = ratio(3, 2);
        prop_assert!(central_residual(&w.r.scale(&c), &w.g.scale(&c), 2).unwrap().is_zero());
    }

    #[test]
    fn homogeneous_round_trip(alpha in 0i64..=4, beta in 0i64..=3, coeffs in prop::collection::vec(-3i64..=3, 1..=4), rho in 1i64..=3, k in 1i64..=3) {
        prop_assume!(num_integer::Integer::gcd(&rho, &k) == 1);
        let mut coeffs = coeffs;
        if coeffs[0] == 0 {
            coeffs[0] = 1;
        }
        let fhat = UniPoly::from_ints(&coeffs);
        prop_assume!(!fhat.is_zero());
        let d = Direction::new(rho, -rho - k).unwrap();
        let h = HomogForm::new(d, alpha, beta, fhat).unwrap();
        let p = h.to_poly();
        prop_assert!(p.is_homogeneous(d));
        prop_assert_eq!(HomogForm::from_poly(&p, d).unwrap(), h);
    }
}
