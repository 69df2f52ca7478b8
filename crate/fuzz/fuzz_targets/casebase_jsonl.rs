// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

#![no_main]

use libfuzzer_sys::fuzz_target;
use semiadd::CaseBase;

fuzz_target!(|data: &[u8]| {
    let Ok(base) = CaseBase::from_reader(data) else { return };
    let again = CaseBase::from_reader(base.to_jsonl().as_bytes()).unwrap();
    assert_eq!(again, base);
    if let Some(first) = base.cases().first() {
        let s = base.suggest_features(first.features.clone(), 3).unwrap();
        assert_eq!(s.neighbours[0].similarity.total, 1.0);
    }
});
