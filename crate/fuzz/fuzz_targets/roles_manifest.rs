// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

#![no_main]

use libfuzzer_sys::fuzz_target;
use semiadd::RoleManifest;

fuzz_target!(|text: &str| {
    let Ok(manifest) = RoleManifest::from_toml_str(text) else { return };
    let again = RoleManifest::from_toml_str(&manifest.to_toml_string()).unwrap();
    assert_eq!(again, manifest);
});
