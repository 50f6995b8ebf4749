use proptest::prelude::*;

use treefit::generate::{random_graph, random_tree};
use treefit::io::{
    parse_certificate, parse_graph, parse_tree, write_certificate, write_graph, write_tree,
};
use treefit::pipeline::{solve, Config};
use treefit::seed::rng;
use treefit::Error;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn graph_text_round_trips(n in 2usize..30, seed in any::<u64>(), frac in 0.0f64..1.0) {
        let d = 1 + ((n - 2) as f64 * frac) as usize;
        let g = random_graph(n, d, &mut rng(seed)).unwrap();
        let text = write_graph(&g);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(write_graph(&back), text);
        prop_assert_eq!(back.delta(), d);
    }

    #[test]
    fn tree_text_round_trips(n in 1usize..40, seed in any::<u64>()) {
        let t = random_tree(n, &mut rng(seed));
        let text = write_tree(&t);
        prop_assert_eq!(write_tree(&parse_tree(&text).unwrap()), text);
    }

    #[test]
    fn certificate_text_round_trips(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_graph(12, 5, &mut r).unwrap();
        let t = random_tree(6, &mut r);
        let out = solve(&g, &t, &Config { seed, ..Config::default() });
        let e = out.embedding().expect("|T| ≤ δ+1");
        let text = write_certificate(e);
        prop_assert_eq!(&parse_certificate(&text, t.n(), g.n()).unwrap(), e);
    }
}

#[test]
fn parse_errors_carry_lines() {
    let err = parse_graph("4 3\n0 1\n1 2\n2 2\n").unwrap_err();
    assert_eq!(
        err,
        Error::Parse {
            line: 4,
            msg: "loop at 2".into()
        }
    );
    assert!(matches!(parse_tree("3\n0 1\n"), Err(Error::Parse { .. })));
}
