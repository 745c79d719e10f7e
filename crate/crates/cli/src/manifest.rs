//! Run manifests: enough to replay any invocation byte-for-byte.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use crate::{to_json_bytes, write_atomic};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub toolkit_version: String,
    pub subcommand: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> Self {
        RunManifest {
            toolkit_version: boxdim::VERSION.to_string(),
            subcommand: subcommand.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn input(mut self, path: &Path) -> Self {
        self.inputs.push(path.display().to_string());
        self
    }

    pub fn output(mut self, path: &Path) -> Self {
        self.outputs.push(path.display().to_string());
        self
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_atomic(path, &to_json_bytes(self))
    }
}
