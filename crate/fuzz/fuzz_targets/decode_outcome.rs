#![no_main]

use boxgt::setsystem::{SubsetMode, VerifyOptions};
use boxgt::{BitSet, SetSystem};
use libfuzzer_sys::fuzz_target;

// Bytes: item count, test count, decoder bound, one byte per incidence
// row, then the outcome bits.
fuzz_target!(|data: &[u8]| {
    let [m, n, t, rest @ ..] = data else { return };
    let (m, n, t) = (*m as usize % 12 + 1, *n as usize % 8 + 1, *t as usize % 4);
    if rest.len() < m + 1 {
        return;
    }
    let rows: Vec<Vec<usize>> = rest[..m]
        .iter()
        .map(|b| (0..n).filter(|j| b >> j & 1 == 1).collect())
        .collect();
    let sys = SetSystem::from_rows(n, &rows).expect("rows are in range");
    let bits: Vec<bool> = (0..n).map(|j| rest[m] >> j & 1 == 1).collect();
    let outcome = boxgt::setsystem::Outcome {
        results: BitSet::from_bools(&bits),
    };
    if let Ok(found) = sys.decode_disjunct(&outcome, t) {
        assert_eq!(found.len(), t);
        assert!(found.iter().all(|&i| sys.row(i).is_subset(&outcome.results)));
    }
    let opts = VerifyOptions {
        budget: 10_000,
        parallel: false,
    };
    if let Ok(found) = sys.decode_by_signature(&outcome, t, SubsetMode::AtMost, &opts) {
        assert_eq!(sys.signature(&found).expect("items in range"), outcome.results);
    }
});
