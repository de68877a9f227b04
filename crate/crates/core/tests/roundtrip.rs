mod common;

use common::{random_construction, table, CORPUS};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tilk::syntax::{parse, print_with};

#[test]
fn corpus_prints_back_verbatim() {
    let t = table();
    assert!(CORPUS.len() >= 40);
    for src in CORPUS {
        let c = parse(src, &t).unwrap_or_else(|e| panic!("{src}: {e}"));
        assert_eq!(print_with(&c, &t), *src);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn random_constructions_survive_print_and_parse(seed in any::<u64>(), depth in 0u32..6) {
        let t = table();
        let c = random_construction(&mut ChaCha8Rng::seed_from_u64(seed), depth);
        let text = print_with(&c, &t);
        let back = parse(&text, &t).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &c, "{}", text);
        prop_assert_eq!(print_with(&back, &t), text);
    }
}
