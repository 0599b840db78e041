use nbraid_core::pquotient::{filtration, h1_dimension, series, PQuotient, DEFAULT_ORDER_LIMIT};
use nbraid_core::presentations::{GroupSpec, Presentation};

/// Brute-force lower exponent-2 series of (Z/16) x| (Z/16), b -> b^-1.
/// Elements are (b, a) with (b1, a1)(b2, a2) = (b1 + (-1)^a1 b2, a1 + a2).
fn semidirect_oracle_orders(classes: usize) -> Vec<usize> {
    let mul = |x: (i64, i64), y: (i64, i64)| {
        let s = if x.1 % 2 == 0 { 1 } else { -1 };
        ((x.0 + s * y.0).rem_euclid(16), (x.1 + y.1).rem_euclid(16))
    };
    let inv = |x: (i64, i64)| {
        let s = if x.1 % 2 == 0 { 1 } else { -1 };
        ((-s * x.0).rem_euclid(16), (-x.1).rem_euclid(16))
    };
    let all: Vec<(i64, i64)> = (0..16).flat_map(|b| (0..16).map(move |a| (b, a))).collect();
    let closure = |gens: &[(i64, i64)]| {
        let mut set = std::collections::BTreeSet::new();
        set.insert((0, 0));
        let mut frontier = vec![(0, 0)];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    };
    let mut current: Vec<(i64, i64)> = all.clone();
    let mut orders = Vec::new();
    for _ in 0..classes {
        let mut gens = Vec::new();
        for &x in &current {
            gens.push(mul(x, x));
            for &g in &all {
                gens.push(mul(mul(inv(x), inv(g)), mul(x, g)));
            }
        }
        let next: Vec<(i64, i64)> = closure(&gens).into_iter().collect();
        orders.push(256 / next.len());
        current = next;
    }
    orders
}

#[test]
fn klein_bottle_orders_match_finite_oracle() {
    let oracle = semidirect_oracle_orders(4);
    assert_eq!(oracle, [4, 16, 64, 256]);
    let k = Presentation::klein_bottle();
    let report = filtration(&k, 2, 4, DEFAULT_ORDER_LIMIT).unwrap();
    let orders: Vec<usize> = report.orders_log.iter().map(|&e| 1 << e).collect();
    assert_eq!(orders, oracle);
}

#[test]
fn free_rank_two_class_two_is_associative() {
    let f = Presentation::of(GroupSpec::free(2)).unwrap();
    let q = PQuotient::new(&f, 2, 2, DEFAULT_ORDER_LIMIT).unwrap();
    assert_eq!(q.order_log(), 5);
    let elems: Vec<Vec<u32>> = (0..32u32).map(|x| (0..5).map(|b| (x >> b) & 1).collect()).collect();
    for a in &elems {
        for b in &elems {
            let ab = q.multiply(a, b);
            for c in &elems {
                assert_eq!(q.multiply(&ab, c), q.multiply(a, &q.multiply(b, c)));
            }
        }
    }
}

#[test]
fn h1_dimensions() {
    for g in 2..6 {
        assert_eq!(h1_dimension(&Presentation::of(GroupSpec::surface(g).unwrap()).unwrap(), 2).unwrap(), g as usize);
    }
    let p22 = Presentation::of(GroupSpec::closed(2, 2).unwrap()).unwrap();
    assert_eq!(h1_dimension(&p22, 2).unwrap(), 4);
    let q = PQuotient::class_one(&p22, 2, DEFAULT_ORDER_LIMIT).unwrap();
    assert!(q.image(&"B[1,2]".parse().unwrap()).unwrap().iter().all(|&e| e == 0));
    for d in 0..5 {
        assert_eq!(h1_dimension(&Presentation::of(GroupSpec::free(d)).unwrap(), 2).unwrap(), d as usize);
    }
}

#[test]
fn braid_group_series() {
    let p22 = Presentation::of(GroupSpec::closed(2, 2).unwrap()).unwrap();
    let qs = series(&p22, 2, 3, DEFAULT_ORDER_LIMIT).unwrap();
    let logs: Vec<u32> = qs.iter().map(|q| q.order_log()).collect();
    assert_eq!(logs, [4, 9, 16]);
    let k = Presentation::of(GroupSpec::surface(2).unwrap()).unwrap();
    let b = Presentation::of(GroupSpec::bordered(2, 1, 1).unwrap()).unwrap();
    let fk = filtration(&k, 2, 3, DEFAULT_ORDER_LIMIT).unwrap();
    let fb = filtration(&b, 2, 3, DEFAULT_ORDER_LIMIT).unwrap();
    assert_eq!(fk.orders_log, [2, 4, 6]);
    assert_eq!(fb.orders_log, [2, 5, 10]);
    for c in 0..3 {
        assert_eq!(logs[c], fk.orders_log[c] + fb.orders_log[c]);
    }
}
