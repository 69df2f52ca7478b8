// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

#![no_main]

use libfuzzer_sys::fuzz_target;
use semiadd::{classify_column, Cell, Lexicon};

const HEADERS: [&str; 5] = ["Loan Amount (x1000)", "Year", "", "STATE", "% share"];

fuzz_target!(|text: &str| {
    let Ok(lexicon) = Lexicon::from_toml_str(text) else { return };
    for cells in [vec![Cell::Number(1.0)], vec![Cell::Text("a".into())], vec![Cell::Empty]] {
        let kind = classify_column(&cells);
        for header in HEADERS {
            assert!(!lexicon.annotate(header, &kind, false).is_empty());
        }
    }
});
