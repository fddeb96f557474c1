//! Instance and certificate file formats.
//!
//! All rationals are JSON strings `"p/q"` or `"p"`. Instance hashes are the
//! SHA-256 of the instance re-serialised as canonical JSON (sorted keys, no
//! whitespace).

use std::fs;
use std::path::Path;

use farkas_core::{Claim, MarketModel, RatMat, RatVec};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Far,
    Fred,
    Stiemke,
    Alt,
    Lp,
    Market,
    Game,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Far => "far",
            Kind::Fred => "fred",
            Kind::Stiemke => "stiemke",
            Kind::Alt => "alt",
            Kind::Lp => "lp",
            Kind::Market => "market",
            Kind::Game => "game",
        }
    }
}

/// Union of every instance layout; which fields are required depends on the kind.
#[derive(Debug, Clone, Deserialize)]
pub struct InstanceFile {
    pub kind: Option<Kind>,
    #[serde(rename = "A")]
    pub a: RatMat,
    pub b: Option<RatVec>,
    pub c: Option<RatVec>,
    pub u: Option<RatVec>,
    pub assets: Option<usize>,
    pub states: Option<usize>,
    pub claim: Option<RatVec>,
}

/// A loaded instance together with its canonical hash.
pub struct Instance {
    pub file: InstanceFile,
    pub hash: String,
}

/// Certificate wrapped with the instance it certifies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateFile {
    pub certificate: Value,
    pub instance_hash: String,
    pub kind: Kind,
}

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("malformed JSON in {}: {e}", path.display())))
}

/// Recursively sorts object keys.
fn canonicalize(value: &Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<_> = map.iter().collect();
            entries.sort_by(|x, y| x.0.cmp(y.0));
            Value::Object(
                entries
                    .into_iter()
                    .map(|(k, v)| (k.clone(), canonicalize(v)))
                    .collect(),
            )
        }
        Value::Array(items) => Value::Array(items.iter().map(canonicalize).collect()),
        other => other.clone(),
    }
}

pub fn canonical_hash(value: &Value) -> String {
    let canonical = serde_json::to_string(&canonicalize(value)).expect("serialisable value");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn load(path: &Path) -> Result<Instance, Failure> {
    let value = read_json(path)?;
    let hash = canonical_hash(&value);
    let file = serde_json::from_value(value)
        .map_err(|e| Failure::Usage(format!("invalid instance {}: {e}", path.display())))?;
    Ok(Instance { file, hash })
}

impl InstanceFile {
    pub fn rhs(&self) -> Result<&RatVec, Failure> {
        let b = self
            .b
            .as_ref()
            .ok_or_else(|| Failure::Usage("instance is missing \"b\"".into()))?;
        if b.dim() != self.a.rows() {
            return Err(Failure::Usage(format!(
                "\"b\" has length {}, \"A\" has {} rows",
                b.dim(),
                self.a.rows()
            )));
        }
        Ok(b)
    }

    pub fn cost(&self) -> Result<&RatVec, Failure> {
        self.c
            .as_ref()
            .ok_or_else(|| Failure::Usage("instance is missing \"c\"".into()))
    }

    pub fn market(&self) -> Result<(MarketModel, Option<Claim>), Failure> {
        let (m, n) = (self.a.rows(), self.a.cols());
        if self.assets.is_some_and(|x| x != m) || self.states.is_some_and(|x| x != n) {
            return Err(Failure::Usage(format!(
                "\"assets\"/\"states\" disagree with the {m}x{n} matrix \"A\""
            )));
        }
        let claim = self
            .claim
            .clone()
            .map(|c| {
                if c.dim() != n {
                    return Err(Failure::Usage(format!(
                        "claim has {} payoffs, market has {n} states",
                        c.dim()
                    )));
                }
                Claim::new(c).map_err(Failure::Core)
            })
            .transpose()?;
        Ok((MarketModel::new(self.a.clone()), claim))
    }
}
