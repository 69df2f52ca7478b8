// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: Copyright The semiadd Authors

// Case-base files are JSON Lines. The first line is a header
//   {"format":"semiadd-casebase","version":1,"weights":[1.0,1.0,1.0]}
// and every following non-blank line is one labeled case.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Case, CaseBase, CbrError};
use crate::similarity::FeatureWeights;

pub const CASEBASE_FORMAT: &str = "semiadd-casebase";
pub const CASEBASE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    version: u32,
    weights: FeatureWeights,
}

impl CaseBase {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, CbrError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| CbrError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_reader(file)
    }

    pub fn from_reader(reader: impl Read) -> Result<Self, CbrError> {
        let mut lines = BufReader::new(reader).lines().enumerate();
        let parse_err = |line: usize, message: String| CbrError::Parse { line, message };

        let header: Header = loop {
            match lines.next() {
                None => return Err(parse_err(1, "missing header line".into())),
                Some((i, line)) => {
                    let line = line.map_err(|e| parse_err(i + 1, e.to_string()))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    break serde_json::from_str(&line).map_err(|e| parse_err(i + 1, e.to_string()))?;
                }
            }
        };
        if header.format != CASEBASE_FORMAT {
            return Err(parse_err(1, format!("unexpected format {:?}", header.format)));
        }
        if header.version != CASEBASE_VERSION {
            return Err(parse_err(1, format!("unsupported version {}", header.version)));
        }

        let mut base = CaseBase::new(header.weights);
        for (i, line) in lines {
            let line = line.map_err(|e| parse_err(i + 1, e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let case: Case = serde_json::from_str(&line).map_err(|e| parse_err(i + 1, e.to_string()))?;
            base.add_case(case)
                .map_err(|e| parse_err(i + 1, e.to_string()))?;
        }
        Ok(base)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), CbrError> {
        let path = path.as_ref();
        let io_err = |source| CbrError::Io {
            path: path.display().to_string(),
            source,
        };
        let file = File::create(path).map_err(io_err)?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w).map_err(io_err)?;
        w.flush().map_err(io_err)
    }

    pub fn write_to(&self, mut w: impl Write) -> std::io::Result<()> {
        let header = Header {
            format: CASEBASE_FORMAT.to_string(),
            version: CASEBASE_VERSION,
            weights: self.weights,
        };
        serde_json::to_writer(&mut w, &header)?;
        writeln!(w)?;
        for case in &self.cases {
            serde_json::to_writer(&mut w, case)?;
            writeln!(w)?;
        }
        Ok(())
    }

    pub fn to_jsonl(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("json is utf-8")
    }
}
