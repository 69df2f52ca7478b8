// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

#![no_main]

use libfuzzer_sys::fuzz_target;
use semiadd::Table;

// Whatever parses must survive a write and re-read unchanged.
fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else { return };
    let delimiter = match first % 3 {
        0 => b',',
        1 => b';',
        _ => b'\t',
    };
    let Ok(table) = Table::from_reader("fuzz", rest, delimiter) else { return };
    for column in table.columns() {
        let kind = column.kind();
        assert!((0.0..=1.0).contains(&kind.numeric_fraction));
    }
    let mut buf = Vec::new();
    table.write(&mut buf, delimiter).unwrap();
    let again = Table::from_reader("fuzz", buf.as_slice(), delimiter).unwrap();
    assert_eq!(again, table);
});
