//! Property tests for the contracts that must hold over the whole input
//! space: stream format round-trips, snapshot determinism, fork
//! consistency, and multi-pass neutrality.

use proptest::prelude::*;

use spacebound::problems::{eval_set_chase, SetFunctionTable};
use spacebound::processors::Algorithm;
use spacebound::stream::{
    read_stream, run_stream, write_stream, Edge, GraphStream, Processor, Query, Token,
};

fn arb_stream() -> impl Strategy<Value = GraphStream> {
    (2u32..24, any::<bool>(), any::<bool>(), 1u32..3).prop_flat_map(|(n, directed, weighted, passes)| {
        let edge = (0..n, 0..n, proptest::option::of(-4i64..=4)).prop_map(move |(u, v, w)| {
            Edge {
                u,
                v,
                w: if weighted { w } else { None },
            }
        });
        let query = proptest::option::of((0..n, proptest::option::of(0..n)))
            .prop_map(|q| q.map(|(u, t)| match t {
                Some(t) => Query::Pair(u, t),
                None => Query::Node(u),
            }));
        (proptest::collection::vec(edge, 0..40), query).prop_map(move |(edges, query)| {
            let mut tokens = Vec::with_capacity(edges.len() + 1);
            if let Some(q) = query {
                tokens.push(Token::Query(q));
            }
            tokens.extend(edges.into_iter().map(Token::Edge));
            GraphStream {
                n,
                directed,
                weighted,
                passes,
                root: None,
                tokens,
            }
        })
    })
}

fn arb_set_tables(m: usize, q: usize) -> impl Strategy<Value = Vec<SetFunctionTable>> {
    let table = proptest::collection::vec(
        proptest::collection::btree_set(1..=m, 0..=m),
        m..=m,
    )
    .prop_map(move |img| SetFunctionTable::new(m, img).expect("entries in range"));
    proptest::collection::vec(table, q..=q)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stream_text_round_trips(stream in arb_stream()) {
        let mut buf = Vec::new();
        write_stream(&stream, &mut buf).expect("valid by construction");
        let back = read_stream(&mut buf.as_slice()).expect("own output parses");
        prop_assert_eq!(back, stream);
    }

    #[test]
    fn negcycle_fork_consistency_at_any_cut(stream in arb_stream(), cut_frac in 0.0f64..1.0) {
        // Snapshot at an arbitrary prefix, restore into a fresh instance,
        // feed the identical suffix: the answer must match the
        // uninterrupted run, for a query-free directed problem.
        let mut stream = stream;
        stream.directed = true;
        stream.weighted = true;
        stream.passes = 1;
        stream.tokens.retain(|t| matches!(t, Token::Edge(_)));
        for tok in &mut stream.tokens {
            if let Token::Edge(e) = tok {
                e.w = Some(e.w.unwrap_or(1));
            }
        }

        let full = run_stream(&mut Algorithm::NegCycle.processor(), &stream).unwrap();

        let cut = ((stream.tokens.len() as f64) * cut_frac) as usize;
        let mut first = Algorithm::NegCycle.processor();
        first.init(&stream.meta()).unwrap();
        for tok in &stream.tokens[..cut] {
            first.feed(tok).unwrap();
        }
        let transcript = first.snapshot();
        let mut second = Algorithm::NegCycle.processor();
        second.restore(&transcript).unwrap();
        for tok in &stream.tokens[cut..] {
            second.feed(tok).unwrap();
        }
        prop_assert_eq!(second.finish().unwrap(), full.answer);
    }

    #[test]
    fn two_runs_are_bit_identical(stream in arb_stream()) {
        let mut stream = stream;
        stream.directed = true;
        stream.weighted = true;
        stream.tokens.retain(|t| matches!(t, Token::Edge(_)));
        for tok in &mut stream.tokens {
            if let Token::Edge(e) = tok {
                e.w = Some(e.w.unwrap_or(1));
            }
        }
        let run = |s: &GraphStream| {
            let mut proc = Algorithm::NegCycle.processor();
            let out = run_stream(&mut proc, s).unwrap();
            (out.answer, out.peak_state_bits, proc.snapshot())
        };
        prop_assert_eq!(run(&stream), run(&stream));
    }

    #[test]
    fn snapshot_ignores_edge_order_and_extra_passes(
        stream in arb_stream(),
        swaps in proptest::collection::vec((0usize..40, 0usize..40), 0..20),
    ) {
        let mut stream = stream;
        stream.directed = false;
        stream.weighted = false;
        stream.passes = 1;
        stream.tokens.retain(|t| matches!(t, Token::Edge(_)));
        for tok in &mut stream.tokens {
            if let Token::Edge(e) = tok {
                e.w = None;
            }
        }

        let run = |s: &GraphStream| {
            let mut proc = Algorithm::StDistance.processor();
            let out = run_stream(&mut proc, s).unwrap();
            (out.answer, proc.snapshot())
        };
        // st-distance accepts any graph; fix a query so finish succeeds.
        stream.tokens.insert(0, Token::Query(Query::Pair(0, stream.n - 1)));
        let (base_answer, base_snapshot) = run(&stream);

        let mut permuted = stream.clone();
        let len = permuted.tokens.len();
        if len > 1 {
            // Swap edge tokens only; the query stays at index 0.
            for (a, b) in swaps {
                let (a, b) = (1 + a % (len - 1), 1 + b % (len - 1));
                permuted.tokens.swap(a, b);
            }
        }
        prop_assert_eq!(run(&permuted), (base_answer, base_snapshot.clone()));

        // Replaying the tape leaves the answer and the state size alone;
        // only the embedded pass counters move.
        let mut doubled = stream.clone();
        doubled.passes = 2;
        let (doubled_answer, doubled_snapshot) = run(&doubled);
        prop_assert_eq!(doubled_answer, base_answer);
        prop_assert_eq!(doubled_snapshot.bit_len(), base_snapshot.bit_len());
    }

    #[test]
    fn set_chase_monotone_under_enlargement(
        tables in arb_set_tables(5, 3),
        extra in (0usize..3, 1usize..=5, 1usize..=5),
    ) {
        let (which, arg, val) = extra;
        let mut grown = tables.clone();
        let m = grown[which].m();
        let mut img: Vec<_> = (1..=m).map(|x| grown[which].apply(x).clone()).collect();
        img[arg - 1].insert(val);
        grown[which] = SetFunctionTable::new(m, img).unwrap();
        let before = eval_set_chase(&tables);
        let after = eval_set_chase(&grown);
        prop_assert!(before.is_subset(&after));
    }

    #[test]
    fn set_chase_output_stays_in_range(tables in arb_set_tables(4, 2)) {
        let out = eval_set_chase(&tables);
        prop_assert!(out.iter().all(|&x| (1..=4).contains(&x)));
    }
}
