// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

#![no_main]

use libfuzzer_sys::fuzz_target;
use semiadd::table::parse_number;
use semiadd::Cell;

fuzz_target!(|text: &str| {
    let parsed = parse_number(text);
    if let Some((value, _)) = parsed {
        assert!(value.is_finite());
    }
    let (cell, currency) = Cell::parse(text);
    match cell {
        Cell::Number(v) => assert_eq!(parse_number(text.trim()), Some((v, currency))),
        Cell::Text(ref t) => {
            assert!(!currency);
            assert_eq!(t, text.trim());
            assert!(parse_number(t).is_none());
        }
        Cell::Empty => assert!(text.trim().is_empty()),
    }
});
