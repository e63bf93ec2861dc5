use std::collections::{HashMap, HashSet, VecDeque};

use super::*;
use crate::fields::Elem;
use crate::groebner::{solve_rational, RationalSolve, SolveLimits};
use crate::poly::{monomials_of_degree, Exponents};
use proptest::prelude::*;

fn k(s: &str) -> FieldDescriptor {
    FieldDescriptor::parse(s).unwrap()
}

fn form(field: &str, vars: &[&str], text: &str) -> Form {
    Form::parse(&k(field), vars, text).unwrap()
}

const X2: [&str; 2] = ["x1", "x2"];
const X3: [&str; 3] = ["x1", "x2", "x3"];
const X4: [&str; 4] = ["x1", "x2", "x3", "x4"];

fn limits() -> SearchLimits {
    SearchLimits::default()
}

/// Strength over GF(p) by breadth-first search over coefficient vectors:
/// level 1 is every product of two nonzero forms of complementary degree.
fn bfs_strength(p: u64, n: usize, d: u32, target: &[u64]) -> u32 {
    let mons = monomials_of_degree(n, d);
    let idx: HashMap<Exponents, usize> = mons.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let all = |e: u32| -> Vec<Vec<(Exponents, u64)>> {
        let ms = monomials_of_degree(n, e);
        let total = p.pow(ms.len() as u32);
        (1..total)
            .map(|mut x| {
                ms.iter()
                    .map(|m| {
                        let c = x % p;
                        x /= p;
                        (m.clone(), c)
                    })
                    .filter(|(_, c)| *c != 0)
                    .collect()
            })
            .collect()
    };
    let mut ones: HashSet<Vec<u64>> = HashSet::new();
    for e in 1..=d / 2 {
        let (ge, he) = (all(e), all(d - e));
        for g in &ge {
            for h in &he {
                let mut v = vec![0; mons.len()];
                for (a, x) in g {
                    for (b, y) in h {
                        let m: Exponents = a.iter().zip(b).map(|(s, t)| s + t).collect();
                        let i = idx[&m];
                        v[i] = (v[i] + x * y) % p;
                    }
                }
                ones.insert(v);
            }
        }
    }
    let ones: Vec<Vec<u64>> = ones.into_iter().collect();
    let zero = vec![0; mons.len()];
    let mut dist: HashMap<Vec<u64>, u32> = HashMap::from([(zero.clone(), 0)]);
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        if v.as_slice() == target {
            return dist[&v];
        }
        let dv = dist[&v];
        for o in &ones {
            let w: Vec<u64> = v.iter().zip(o).map(|(a, b)| (a + b) % p).collect();
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), dv + 1);
                queue.push_back(w);
            }
        }
    }
    unreachable!("every form is a sum of products")
}

fn coeff_vector(f: &Form) -> Vec<u64> {
    monomials_of_degree(f.n(), f.degree())
        .iter()
        .map(|m| match f.poly().coefficient(m) {
            Elem::Mod(v) => v,
            other => panic!("not a prime field element: {other:?}"),
        })
        .collect()
}

#[test]
fn form_validation() {
    assert!(Form::parse(&k("QQ"), &X2, "x1^2+x2").is_err());
    assert!(Form::parse(&k("QQ"), &X2, "x1+x2").is_err());
    assert!(Form::parse(&k("QQ"), &X2, "0").is_err());
    let z = Form::zero(Form::parse(&k("QQ"), &X2, "x1^2").unwrap().ring(), 3).unwrap();
    assert!(z.is_zero());
    assert_eq!(z.degree(), 3);
}

#[test]
fn degree_patterns() {
    let p = DegreePattern::new(5, &[4, 2, 1]).unwrap();
    assert_eq!(p.pairs(), vec![(1, 4), (1, 4), (2, 3)]);
    assert!(DegreePattern::new(3, &[3]).is_err());
    assert_eq!(DegreePattern::all(3, 2, 3), vec![DegreePattern::linear(3, 2)]);
    let four = DegreePattern::all(4, 2, 3);
    // {1,3}{1,3} has 2·(3+10) unknowns, {1,3}{2,2} has 13+12, {2,2}{2,2} has 24
    assert_eq!(four.iter().map(|p| p.small_degrees().to_vec()).collect::<Vec<_>>(), vec![vec![2, 2], vec![1, 2], vec![1, 1]]);
    assert_eq!(dim_sym(3, 2), 6);
    assert_eq!(dim_sym(4, 3), 20);
}

#[test]
fn theta_examples() {
    let f = form("QQ", &X2, "x1*x2");
    let sys = theta_system(&f, 1, &DegreePattern::linear(2, 1)).unwrap();
    let names: Vec<&str> = sys.ring.vars().iter().map(|s| s.as_str()).collect();
    assert_eq!(names, ["a1", "a2", "b1", "b2"]);
    let r = |s: &str| crate::poly::parse_in_ring(s, &sys.ring).unwrap();
    assert_eq!(sys.equations, vec![r("a1*b1"), r("a1*b2 + a2*b1 - 1"), r("a2*b2")]);

    let f = form("QQ", &X2, "x1^2+x2^2");
    let sys = theta_system(&f, 1, &DegreePattern::linear(2, 1)).unwrap();
    let r = |s: &str| crate::poly::parse_in_ring(s, &sys.ring).unwrap();
    assert_eq!(sys.equations, vec![r("a1*b1 - 1"), r("a1*b2 + a2*b1"), r("a2*b2 - 1")]);

    let f = form("QQ", &X2, "3*x1^2 - x1*x2");
    let sys = theta_system(&f, 0, &DegreePattern::linear(2, 0)).unwrap();
    let consts: Vec<Option<Elem>> = sys.equations.iter().map(|e| e.as_constant()).collect();
    let qq = k("QQ");
    assert_eq!(consts, vec![Some(qq.from_i64(-3)), Some(qq.from_i64(1)), Some(qq.zero())]);

    let sys = theta_system(&f, 2, &DegreePattern::linear(2, 2)).unwrap();
    assert!(sys.ring.vars().contains(&"a2_1".to_string()));
    assert!(theta_system(&f, 2, &DegreePattern::linear(2, 1)).is_err());
}

#[test]
fn theta_solutions_are_decompositions() {
    let f = form("GF(3)", &X3, "x1*x2 + x3^2");
    let pat = DegreePattern::linear(2, 2);
    let sys = theta_system(&f, 2, &pat).unwrap();
    match solve_rational(&sys.ring, &sys.equations, &SolveLimits::default()) {
        RationalSolve::Solution(pt) => assert!(sys.decomposition(&f, &pt).verify(&f)),
        other => panic!("expected a point, got {other:?}"),
    }
    let sys = theta_system(&f, 1, &DegreePattern::linear(2, 1)).unwrap();
    assert_eq!(solve_rational(&sys.ring, &sys.equations, &SolveLimits::default()), RationalSolve::NoSolution);
}

#[test]
fn astr_examples() {
    let f = form("QQ", &X2, "x1^2+x2^2");
    assert_eq!(astr(&f).unwrap().value, 1);
    assert_eq!(astr(&f).unwrap().route, AstrRoute::QuadraticFastPath);
    assert_eq!(astr_generic(&f).unwrap().value, 1);

    let f = form("GF(2)(t1,t2)", &X2, "t1*x1^2+t2*x2^2");
    let a = astr(&f).unwrap();
    assert_eq!((a.value, a.route), (1, AstrRoute::Nullstellensatz));

    // rank 4: each l·l' has rank ≤ 2, so at least 2; the hyperbolic pairing gives 2
    let f = form("QQ", &X4, "x1^2 + 2*x2^2 + 3*x3^2 + 5*x4^2");
    assert_eq!(quadratic_rank(&f), Some(4));
    assert_eq!(astr_generic(&f).unwrap().value, 2);
    assert_eq!(astr(&f).unwrap().value, 2);

    let z = Form::zero(f.ring(), 2).unwrap();
    assert_eq!(astr(&z).unwrap(), Astr { value: 0, pattern: None, route: AstrRoute::Zero });
}

#[test]
fn astr_of_quartics_uses_mixed_patterns() {
    // x1^2 x2^2 + x3^4 = q·q' + ... : (x1 x2)^2 + (x3^2)^2 is a sum of two squares of quadrics
    let f = form("QQ", &X3, "x1^2*x2^2 + x3^4");
    let a = astr_generic(&f).unwrap();
    assert_eq!(a.value, 1);
    let f = form("GF(2)", &X2, "x1^3*x2 + x1*x2^3");
    assert_eq!(astr_generic(&f).unwrap().value, 1);
}

#[test]
fn exact_examples() {
    let f = form("GF(2)", &X4, "x1*x2+x3*x4");
    let c = str_exact_finite_field(&f, 1_000_000).unwrap();
    assert_eq!((c.status, c.value()), (Status::Exact, Some(2)));
    assert_eq!(c.lower_reason, LowerReason::Exhaustion);
    assert!(c.witness.verify(&f));
    assert_eq!(bfs_strength(2, 4, 2, &coeff_vector(&f)), 2);

    let f = form("GF(2)", &X2, "x1^2+x2^2");
    let c = str_exact_finite_field(&f, 1_000_000).unwrap();
    assert_eq!(c.value(), Some(1));
    assert_eq!(c.witness.terms[0].0, crate::poly::parse_in_ring("x1+x2", f.ring()).unwrap());

    let f = form("GF(3)", &X2, "x1^3+x2^3");
    let c = str_exact_finite_field(&f, 1_000_000).unwrap();
    assert_eq!(c.value(), Some(1));
    assert!(c.witness.verify(&f));

    assert!(matches!(str_exact_finite_field(&form("QQ", &X2, "x1*x2"), 10), Err(Error::Precondition(_))));
    let c = str_exact_finite_field(&form("GF(2)", &X4, "x1*x2+x3*x4"), 1).unwrap();
    assert_eq!(c.status, Status::BoundsOnly);
    assert_eq!((c.lower, c.upper), (1, 2));
}

#[test]
fn max_s_caps_the_search() {
    let f = form("GF(3)", &["x1", "x2", "x3", "x4", "x5"], "x1*x2 + x3*x4 + x5^2 + x1*x5");
    let full = str_exact_finite_field(&f, 10_000_000).unwrap();
    let capped = str_exact_finite_field_capped(&f, 10_000_000, Some(0)).unwrap();
    assert!(full.is_exact());
    assert_eq!(capped.lower, 1);
    assert!(capped.upper >= full.upper);
    assert_eq!(capped.is_exact(), capped.lower == capped.upper);

    let g = form("QQ", &X3, "x1*x2 - x3^2 + x1*x3");
    let mut lim = limits();
    lim.max_s = Some(0);
    let c = str_bounds(&g, &lim).unwrap();
    assert!(c.lower <= c.upper && c.witness.verify(&g));
}

#[test]
fn bounds_examples() {
    let f = form("GF(2)(t1,t2)", &X2, "t1*x1^2+t2*x2^2");
    let c = str_bounds(&f, &limits()).unwrap();
    assert_eq!((c.status, c.lower, c.upper), (Status::Exact, 2, 2));
    assert_eq!(c.lower_reason, LowerReason::IrreducibilityBound);
    assert!(c.witness.verify(&f));
    // the s = 1 refutation: t2/t1 is not a square
    let kf = f.field();
    let ratio = kf.div(&kf.generator("t2").unwrap(), &kf.generator("t1").unwrap()).unwrap();
    assert_eq!(kf.is_qth_power(&ratio, 2).unwrap(), None);

    let f = form("QQ", &X2, "x1^2+x2^2");
    let c = str_bounds(&f, &limits()).unwrap();
    assert_eq!((c.status, c.lower, c.upper), (Status::Exact, 2, 2));

    for field in ["QQ", "GF(2)", "GF(5)(t)"] {
        let f = form(field, &X3, "x1^2");
        let c = str_bounds(&f, &limits()).unwrap();
        assert_eq!((c.lower, c.upper), (1, 1));
        assert!(c.witness.verify(&f));
    }

    // x1*x2 - x3^2 is isotropic over QQ: str 2 only (rank 3)
    let f = form("QQ", &X3, "x1*x2 - x3^2");
    let c = str_bounds(&f, &limits()).unwrap();
    assert_eq!((c.lower, c.upper), (2, 2));
    assert_eq!(c.lower_reason, LowerReason::RankBound);
}

#[test]
fn bounds_only_when_undecidable() {
    // anisotropic over QQ: the rational solver can only sample free coordinates
    let f = form("QQ", &X3, "x1^2 + x2^2 + x3^2");
    let c = str_bounds(&f, &limits()).unwrap();
    assert!(c.lower <= c.upper);
    assert!(c.witness.verify(&f));
    assert_eq!(c.lower, 2);
}

#[test]
fn lift_examples() {
    let f = form("QQ", &X2, "x1^2+x2^2");
    let lift = extension_lift_search(&f, 1, 2, &limits()).unwrap();
    let l = lift.lift().expect("QQ(i)");
    assert_eq!(l.field, k("QQ[i]/(i^2+1)"));
    assert_eq!(l.degree, 2);
    assert!(l.witness.verify(&l.form));
    let ring = l.form.ring();
    let mut factors = vec![l.witness.terms[0].0.clone(), l.witness.terms[0].1.clone()];
    factors.sort_by_key(|p| p.to_string());
    let mut want = vec![
        crate::poly::parse_in_ring("x1+i*x2", ring).unwrap(),
        crate::poly::parse_in_ring("x1-i*x2", ring).unwrap(),
    ];
    want.sort_by_key(|p| p.to_string());
    assert_eq!(factors, want);

    let f = form("GF(2)(t1,t2)", &X2, "t1*x1^2+t2*x2^2");
    let lift = extension_lift_search(&f, 1, 2, &limits()).unwrap();
    let l = lift.lift().expect("a square root of t2/t1");
    assert_eq!(l.degree, 2);
    assert!(l.witness.verify(&l.form));
    let r = l.field.generator("r").expect("layer named r");
    let kf = &l.field;
    let t1 = kf.generator("t1").unwrap();
    let t2 = kf.generator("t2").unwrap();
    assert_eq!(kf.mul(&kf.mul(&r, &r), &t1), t2);
    // t1·(x1 + r·x2)^2 reproduces f
    let g = crate::poly::parse_in_ring("t1*(x1+r*x2)^2", l.form.ring()).unwrap();
    assert_eq!(&g, l.form.poly());

    let f = form("QQ", &X2, "x1*x2");
    let l = extension_lift_search(&f, 1, 5, &limits()).unwrap();
    assert_eq!(l.lift().unwrap().degree, 1);

    let f = form("QQ", &X4, "x1*x2+x3*x4");
    assert!(matches!(extension_lift_search(&f, 1, 2, &limits()), Err(Error::Precondition(_))));
}

#[test]
fn lift_over_finite_fields() {
    // x1^2 + x1*x2 + x2^2 is irreducible over GF(2) and splits over GF(4)
    let f = form("GF(2)", &X2, "x1^2+x1*x2+x2^2");
    let l = extension_lift_search(&f, 1, 3, &limits()).unwrap();
    let l = l.lift().unwrap();
    assert_eq!(l.degree, 2);
    assert!(l.witness.verify(&l.form));
}

#[test]
fn inequality_examples() {
    let f = form("QQ", &X2, "x1^2+x2^2");
    let rep = extension_inequality_check(&f, &k("QQ[i]/(i^2+1)"), 100_000, &limits()).unwrap();
    assert_eq!(rep.e, 2);
    assert_eq!((rep.over_k.value(), rep.over_l.value()), (Some(2), Some(1)));
    assert!(rep.holds);

    let f = form("GF(3)", &X3, "x1^3 + x2^2*x3 - x1*x2*x3");
    let rep = extension_inequality_check(&f, f.field(), 100_000, &limits()).unwrap();
    assert_eq!(rep.e, 1);
    assert_eq!(rep.over_k.value(), rep.over_l.value());
    assert!(rep.holds);
    assert!(extension_inequality_check(&f, &k("GF(2)"), 10, &limits()).is_err());
}

#[test]
fn gap_bound_examples() {
    assert_eq!(gap_bound(2, 1), 2);
    assert_eq!(gap_bound(1, 7), 7);
    assert_eq!(gap_bound(8, 3), 24);
}

#[test]
fn fast_path_matches_generic_on_diagonals() {
    for field in ["GF(3)", "GF(5)", "QQ"] {
        let kf = k(field);
        for coeffs in [[1, 1, 0, 0], [1, 2, 0, 0], [1, 1, 1, 0], [1, 2, 1, 2], [0, 0, 0, 3]] {
            let text: Vec<String> = coeffs.iter().enumerate().map(|(i, c)| format!("{c}*x{}^2", i + 1)).collect();
            let poly = crate::poly::parse_poly(&text.join("+"), &X4, &kf).unwrap();
            let f = Form::with_degree(poly, 2).unwrap();
            assert_eq!(astr_quadratic_fast(&f), Some(astr_generic(&f).unwrap().value), "{field} {f}");
        }
    }
}

#[test]
fn exact_agrees_with_bfs_oracle_on_small_cases() {
    let cases = [
        ("GF(3)", 2, "x1^3 + x1*x2^2 + 2*x2^3"),
        ("GF(3)", 2, "x1^2*x2 + x2^3"),
        ("GF(2)", 3, "x1^3 + x2^3 + x3^3 + x1*x2*x3"),
        ("GF(2)", 3, "x1^2*x2 + x2^2*x3 + x3^2*x1"),
        ("GF(2)", 2, "x1^4 + x1^3*x2 + x2^4"),
    ];
    for (field, n, text) in cases {
        let f = form(field, &X3[..n], text);
        let p = f.field().characteristic();
        let c = str_exact_finite_field(&f, 1_000_000).unwrap();
        assert_eq!(c.value(), Some(bfs_strength(p, n, f.degree(), &coeff_vector(&f))), "{text}");
        assert!(c.witness.verify(&f));
    }
}

fn random_form(field: &FieldDescriptor, n: usize, d: u32, coeffs: &[i64]) -> Option<Form> {
    let mons = monomials_of_degree(n, d);
    let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let ring = crate::poly::PolyRing::new(field, &vars).unwrap();
    let p = crate::poly::Poly::from_terms(&ring, mons.into_iter().zip(coeffs).map(|(m, &c)| (m, field.from_i64(c))));
    if p.is_zero() {
        None
    } else {
        Some(Form::with_degree(p, d).unwrap())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_matches_oracle_and_bounds(fi in 0usize..2, d in 2u32..4, coeffs in prop::collection::vec(-2i64..=2, 10)) {
        let field = k(["GF(2)", "GF(3)"][fi]);
        let n = if d == 2 { 3 } else { 2 };
        let Some(f) = random_form(&field, n, d, &coeffs) else { return Ok(()) };
        let exact = str_exact_finite_field(&f, 1_000_000).unwrap();
        let v = exact.value().unwrap();
        prop_assert!(exact.witness.verify(&f));
        prop_assert_eq!(v, bfs_strength(field.characteristic(), n, d, &coeff_vector(&f)));
        let a = astr(&f).unwrap();
        prop_assert!(a.value <= v);
        prop_assert!(a.value as usize <= n.min(f.poly().num_terms()));
        let b = str_bounds(&f, &limits()).unwrap();
        prop_assert!(b.witness.verify(&f));
        prop_assert!(b.lower <= v && v <= b.upper);
        // rational search is exact over finite fields
        prop_assert_eq!(b.value(), Some(v));
    }

    #[test]
    fn extension_never_increases_strength(coeffs in prop::collection::vec(-1i64..=1, 10)) {
        let Some(f) = random_form(&k("GF(3)"), 3, 3, &coeffs) else { return Ok(()) };
        let rep = extension_inequality_check(&f, &k("GF(3)[a]/(a^2+1)"), 1_000_000, &limits()).unwrap();
        prop_assert!(rep.holds);
        prop_assert!(rep.over_l.upper <= rep.over_k.upper);
        prop_assert!(rep.over_l.witness.verify(&f.extend_to(&k("GF(3)[a]/(a^2+1)")).unwrap()));
        prop_assert!(astr(&f).unwrap().value <= rep.over_l.lower);
    }

    #[test]
    fn fast_path_agrees_with_nullstellensatz(fi in 0usize..3, coeffs in prop::collection::vec(-3i64..=3, 10)) {
        let field = k(["GF(3)", "GF(5)", "QQ"][fi]);
        let Some(f) = random_form(&field, 4, 2, &coeffs) else { return Ok(()) };
        prop_assert_eq!(astr_quadratic_fast(&f).unwrap(), astr_generic(&f).unwrap().value);
    }
}
