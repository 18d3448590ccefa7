use proptest::prelude::*;

use psturm::cocycle::{cheb_pair, d_matrix, trace_recursion, word_product, Mat2};
use psturm::sequences::{
    blocks, k_partition, Alphabet, CodingTriple, PartialWord, Symbol, ToeplitzSpec,
};
use psturm::spectrum::HalfLineOperator;
use psturm::sequences::Potential;

fn ab() -> Alphabet {
    Alphabet::new(vec!['a', 'b'], vec![0.0, 1.0]).unwrap()
}

fn partial_word() -> impl Strategy<Value = PartialWord> {
    (1usize..6)
        .prop_flat_map(|n| (prop::collection::vec(0u8..2, n), 0..n))
        .prop_map(|(cells, hole)| {
            let cells = cells
                .into_iter()
                .enumerate()
                .map(|(i, c)| if i == hole { None } else { Some(c as Symbol) })
                .collect();
            PartialWord::new(cells).unwrap()
        })
}

fn triple() -> impl Strategy<Value = CodingTriple> {
    (1usize..6)
        .prop_flat_map(|n| (prop::collection::vec(0u8..2, n - 1), Just(n), 0..n))
        .prop_map(|(p, n, l)| CodingTriple::new(p.into_iter().map(|c| c as Symbol).collect(), n, l).unwrap())
}

/// Simple tails with periods 3..=5 and arbitrary offsets.
fn simple_spec() -> impl Strategy<Value = ToeplitzSpec> {
    prop::collection::vec((3usize..6, 0usize..5), 1..4).prop_map(|ps| {
        let periods: Vec<usize> = ps.iter().map(|p| p.0).collect();
        let spec = ToeplitzSpec::simple_cycle(ab(), &periods, Some(0)).unwrap();
        let offs: Vec<usize> = (0..spec.tail().len()).map(|i| ps[i % ps.len()].1 % spec.tail()[i].period).collect();
        spec.with_offsets(0, &offs).unwrap()
    })
}

fn mat(word: &[Symbol], e: f64) -> Mat2 {
    let p = word_product(word, e, &[0.0, 1.0]).unwrap();
    p.m.scale(2f64.powi(p.exp2 as i32))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn compose_is_associative(a in partial_word(), b in partial_word(), c in partial_word()) {
        let left = a.compose(&b).and_then(|ab| ab.compose(&c));
        let right = b.compose(&c).and_then(|bc| a.compose(&bc));
        match (left, right) {
            (Ok(l), Ok(r)) => prop_assert_eq!(l, r),
            (l, r) => prop_assert_eq!(l.is_err(), r.is_err()),
        }
    }

    #[test]
    fn merge_matches_compose(a in triple(), b in triple()) {
        let merged = a.merge(&b).partial_word();
        let composed = a.partial_word().compose(&b.partial_word()).unwrap();
        prop_assert_eq!(merged, composed);
    }

    #[test]
    fn blocks_differ_only_at_the_end(spec in simple_spec(), k in 0usize..5) {
        let (s, t) = blocks(&spec, k).unwrap();
        prop_assert_eq!(s.len(), t.len());
        let l = s.len();
        prop_assert_eq!(&s[..l - 1], &t[..l - 1]);
        prop_assert_ne!(s[l - 1], t[l - 1]);
    }

    #[test]
    fn partitions_refine(spec in simple_spec(), start in -5000i64..5000, k in 1usize..3) {
        let len = 4000;
        let w = spec.window(spec.depth_for(len), start, len).unwrap();
        let coarse = k_partition(&w, &spec, k + 1);
        prop_assume!(coarse.is_ok());
        let coarse = coarse.unwrap();
        let fine = k_partition(&w, &spec, k).unwrap();
        let n = spec.tail_period(k + 1);
        prop_assert!(fine.gaps.iter().all(|&g| g == n - 1 || g == 2 * n - 1));
        for b in coarse.expand(&spec).unwrap() {
            if let Some(f) = fine.block_at(b.start) {
                prop_assert_eq!(f, b);
            }
        }
    }

    #[test]
    fn power_identity(word in prop::collection::vec(0u8..2, 1..8), e in -3.0f64..4.0, n in 0i64..25) {
        let m = mat(&word, e);
        let (sn, sn1) = cheb_pair(n, m.trace());
        let rhs = m.scale(sn).sub(&Mat2::IDENTITY.scale(sn1));
        let lhs = m.pow(n as u32);
        let scale = lhs.max_abs().max(1.0);
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-9 * scale, "{:?} vs {:?}", lhs, rhs);
    }

    #[test]
    fn cocycle_identity(u in prop::collection::vec(0u8..2, 0..20), v in prop::collection::vec(0u8..2, 0..20), e in -3.0f64..4.0) {
        let uv: Vec<Symbol> = u.iter().chain(&v).copied().collect();
        let lhs = mat(&uv, e);
        let rhs = mat(&v, e) * mat(&u, e);
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-9 * lhs.max_abs().max(1.0));
        prop_assert!((lhs.det() - 1.0).abs() <= 1e-9 * lhs.max_abs().powi(2).max(1.0));
    }

    #[test]
    fn d_matrix_has_trace_two(e in -3.0f64..4.0, x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let d = d_matrix(e, x, y);
        prop_assert!((d.trace() - 2.0).abs() < 1e-12);
        prop_assert!((d_matrix(e, y, x) * d).sub(&Mat2::IDENTITY).max_abs() < 1e-12);
    }

    #[test]
    fn escape_is_permanent(e in -3.0f64..4.0) {
        let spec = ToeplitzSpec::simple_cycle(ab(), &[3], Some(0)).unwrap();
        let h = trace_recursion(&spec, e, 9).unwrap();
        let big: Vec<bool> = h.iter().map(|x| x.abs_minus(2.0) > 0.0).collect();
        if let Some(k) = (0..big.len() - 1).find(|&k| big[k] && big[k + 1]) {
            prop_assert!(big[k..].iter().all(|&b| b), "E = {}", e);
        }
    }

    #[test]
    fn eigenvalue_count_is_monotone(vals in prop::collection::vec(-2.0f64..2.0, 64..100), x in -5.0f64..5.0, dx in 0.0f64..1.0, phi in 0.1f64..3.0) {
        let op = HalfLineOperator::new(&Potential { start: 1, values: vals }, phi).unwrap();
        prop_assert!(op.count_below(x) <= op.count_below(x + dx));
        let (lo, hi) = op.bounds();
        prop_assert_eq!(op.count_below(lo - 1e-9), 0);
        prop_assert_eq!(op.count_below(hi + 1e-9), op.size());
    }
}
