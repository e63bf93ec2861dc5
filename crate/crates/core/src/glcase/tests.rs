use super::*;
use proptest::prelude::*;

/// Counts exponent vectors of length n and total a by brute force.
fn count_monomials(n: usize, a: u32) -> u64 {
    fn rec(n: usize, left: u32) -> u64 {
        if n == 0 {
            return u64::from(left == 0);
        }
        (0..=left).map(|k| rec(n - 1, left - k)).sum()
    }
    rec(n, a)
}

fn multinomial(e: &[u32]) -> u64 {
    let fact = |k: u32| (1..=u64::from(k)).product::<u64>();
    fact(e.iter().sum()) / e.iter().map(|&k| fact(k)).product::<u64>()
}

#[test]
fn level_basis_examples() {
    assert_eq!(level_basis(&LevelSpace::Sym(2), 2), vec!["e1^2", "e1*e2", "e2^2"]);
    assert_eq!(level_basis(&LevelSpace::twist(LevelSpace::Sym(1), 2), 3), vec!["e1^(2)", "e2^(2)", "e3^(2)"]);
    let sum = LevelSpace::Sum(vec![LevelSpace::Sym(1), LevelSpace::Sym(2)]);
    assert_eq!(sum.dimension(1), 2);
    assert_eq!(level_basis(&sum, 1), vec!["[1]e1", "[2]e1^2"]);
    assert_eq!(level_basis(&LevelSpace::twist(LevelSpace::Sym(2), 2), 2)[1], "(e1*e2)^(2)");
    assert_eq!(level_basis(&LevelSpace::Sym(0), 3), vec!["1"]);
}

#[test]
fn shift_examples() {
    assert_eq!(shift_decompose(2, 1, 2), vec![(0, 3), (1, 2), (2, 1)]);
    assert_eq!(shift_decompose(1, 1, 5), vec![(0, 5), (1, 1)]);
    let total: u64 = shift_decompose(3, 2, 2).iter().map(|p| p.1).sum();
    assert_eq!(total, 20);
    // the i = 0 piece is Sym^a at level n
    assert_eq!(shift_decompose(4, 3, 2)[0].1, LevelSpace::Sym(4).dimension(2));
}

#[test]
fn ns_generators_match_multinomial_oracle() {
    assert!(ns_example_ideal(0).generators().is_empty());
    for n in 1..=3 {
        let ex = ns_example_ideal(n);
        // [v^4] = Σ multinomial(4; α) c^α w_α, and only the pure powers survive mod 2
        let odd: Vec<Vec<u32>> = monomials_of_degree(n, 4).into_iter().filter(|e| multinomial(e) % 2 == 1).collect();
        assert_eq!(odd.len(), n);
        let mut want: Vec<Poly> = (0..n)
            .map(|i| {
                let mut e = vec![0; n];
                e[i] = 4;
                assert!(odd.contains(&e));
                ex.z(i).pow(2).sub(&ex.w(&e)).monic(MonomialOrder::GrevLex)
            })
            .collect();
        want.sort_by_key(|p| p.to_string());
        assert_eq!(ex.generators(), &want[..]);
    }
    let ex = ns_example_ideal(1);
    assert_eq!(ex.ring().vars(), ["z1", "w1111"]);
    assert_eq!(ex.generators()[0].to_string(), "z1^2+w1111");
    assert!(ns_example_ideal(2).w_names().contains(&"w1122"));
}

#[test]
fn ns_check_passes() {
    for n in 1..=3 {
        let r = ns_example_check(n);
        assert!(r.injective, "n = {n}");
        assert!(r.f_surjective, "n = {n}");
        assert!(r.passed());
        for (i, s) in r.squares.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 4;
            assert_eq!(s.image, ns_example_ideal(n).w(&e));
        }
    }
}

#[test]
fn ns_check_reports_failures() {
    // dropping a generator breaks F-surjectivity
    let mut ex = ns_example_ideal(2);
    ex.generators.truncate(1);
    let r = ex.check();
    assert!(r.injective);
    assert!(!r.f_surjective);
    assert!(!r.passed());
    // a relation among the w's breaks injectivity
    let mut ex = ns_example_ideal(1);
    let w = ex.w(&[4]);
    ex.generators.push(w.pow(3).sub(&w));
    assert!(!ex.check().injective);
}

fn identity(n: usize) -> Vec<Vec<Elem>> {
    let k = FieldDescriptor::parse("GF(2)").unwrap();
    (0..n).map(|i| (0..n).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect()
}

fn in_span(ex: &NsExample, f: &Poly) -> bool {
    let k = ex.ring().field();
    let mut monos: Vec<Vec<u32>> = Vec::new();
    for p in ex.generators().iter().chain([f]) {
        for (e, _) in p.terms() {
            if !monos.contains(e) {
                monos.push(e.clone());
            }
        }
    }
    let row = |p: &Poly| monos.iter().map(|m| p.coefficient(m)).collect::<Vec<_>>();
    let mut rows: Vec<Vec<Elem>> = ex.generators().iter().map(row).collect();
    let r0 = k.rank(&rows);
    rows.push(row(f));
    k.rank(&rows) == r0
}

#[test]
fn action_is_a_representation() {
    let ex = ns_example_ideal(2);
    let k = ex.ring().field().clone();
    let mut swap = identity(2);
    swap.swap(0, 1);
    let f = ex.z(0).mul(&ex.w(&[3, 1]));
    assert_eq!(ex.act(&identity(2), &f), f);
    assert_eq!(ex.act(&swap, &ex.act(&swap, &f)), f);
    // e1 ↦ e1 + e2 sends z1 to z1 + z2 in characteristic 2
    let mut t = identity(2);
    t[1][0] = k.one();
    assert_eq!(ex.act(&t, &ex.z(0)), ex.z(0).add(&ex.z(1)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn shift_pieces_sum_to_total(a in 0u32..=5, m in 0usize..=4, n in 0usize..=4) {
        let pieces = shift_decompose(a, m, n);
        let total: u64 = pieces.iter().map(|p| p.1).sum();
        prop_assert_eq!(total, count_monomials(m + n, a));
        for (i, d) in pieces {
            prop_assert_eq!(d, count_monomials(m, i) * count_monomials(n, a - i));
        }
    }

    #[test]
    fn twist_degree_law(a in 0u32..5, qs in prop::collection::vec(prop::sample::select(vec![2u64, 3, 4, 9]), 0..3), extra in 0u32..4) {
        let mut s = LevelSpace::Sym(a);
        for &q in &qs {
            let d = s.degree();
            s = LevelSpace::twist(s, q);
            prop_assert_eq!(s.degree(), q * d);
            let sum = LevelSpace::Sum(vec![s.clone(), LevelSpace::Sym(extra)]);
            let twisted = LevelSpace::twist(sum.clone(), q);
            prop_assert_eq!(twisted.degree(), q * sum.degree());
        }
        for n in 0..4 {
            prop_assert_eq!(level_basis(&s, n).len() as u64, s.dimension(n));
        }
    }

    #[test]
    fn ideal_is_gl_stable(n in 1usize..=3, moves in prop::collection::vec((0usize..3, 0usize..3, any::<bool>()), 1..4)) {
        let ex = ns_example_ideal(n);
        let k = ex.ring().field().clone();
        for (i, j, is_swap) in moves {
            let (i, j) = (i % n, j % n);
            let mut g = identity(n);
            if is_swap {
                g.swap(i, j);
            } else if i != j {
                g[i][j] = k.one();
            }
            for gen in ex.generators() {
                prop_assert!(in_span(&ex, &ex.act(&g, gen)));
            }
        }
    }
}
