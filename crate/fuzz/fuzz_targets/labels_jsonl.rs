// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

#![no_main]

use std::collections::HashSet;

use libfuzzer_sys::fuzz_target;
use semiadd::eval::LabelRecord;

fuzz_target!(|text: &str| {
    let Ok(records) = LabelRecord::parse_lines(text) else { return };
    assert!(records.len() <= text.lines().count());
    let ids: HashSet<&str> = records.iter().map(|r| r.case_id.as_str()).collect();
    assert_eq!(ids.len(), records.len());
});
