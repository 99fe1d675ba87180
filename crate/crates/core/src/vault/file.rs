use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::field_poly::{FieldParams, CRC_VARIANT};

use super::{Vault, VaultError, VaultPoint};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VaultHeader {
    pub format_version: u32,
    pub q: u64,
    pub n: usize,
    pub r: usize,
    pub crc_variant: String,
}

/// On-disk form of a vault: a header plus the scrambled points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VaultFile {
    pub header: VaultHeader,
    pub points: Vec<VaultPoint>,
}

impl From<&Vault> for VaultFile {
    fn from(v: &Vault) -> Self {
        VaultFile {
            header: VaultHeader {
                format_version: FORMAT_VERSION,
                q: v.q,
                n: v.n,
                r: v.points.len(),
                crc_variant: CRC_VARIANT.to_string(),
            },
            points: v.points.clone(),
        }
    }
}

impl TryFrom<VaultFile> for Vault {
    type Error = VaultError;

    fn try_from(file: VaultFile) -> Result<Self, VaultError> {
        let schema = |msg: String| Err(VaultError::Schema(msg));
        let h = &file.header;
        if h.format_version != FORMAT_VERSION {
            return schema(format!("unsupported format version {}", h.format_version));
        }
        if h.crc_variant != CRC_VARIANT {
            return schema(format!("unsupported checksum {:?}", h.crc_variant));
        }
        let field = FieldParams::new(h.q).map_err(|e| VaultError::Schema(e.to_string()))?;
        if h.r != file.points.len() {
            return schema(format!("header says r = {}, found {} points", h.r, file.points.len()));
        }
        if h.r == 0 {
            return schema("vault has no points".into());
        }
        if h.r as u64 > h.q {
            return Err(VaultError::RExceedsQ { r: h.r, q: h.q });
        }
        let mut seen = HashSet::with_capacity(h.r);
        for (i, pt) in file.points.iter().enumerate() {
            if pt.x.family() != pt.y.family() {
                return schema(format!("point {i}: x and y families differ"));
            }
            for c in [pt.x.defuzzify(), pt.y.defuzzify()] {
                if c.fract() != 0.0 || c < 0.0 || c >= field.q() as f64 {
                    return schema(format!("point {i}: core {c} is not a field element"));
                }
            }
            if !seen.insert(pt.x_core()) {
                return schema(format!("point {i}: duplicate x core {}", pt.x_core()));
            }
        }
        Ok(Vault {
            q: h.q,
            n: h.n,
            points: file.points,
        })
    }
}

impl Vault {
    /// Pretty-printed JSON. Same vault, same bytes.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&VaultFile::from(self)).expect("vault always serializes")
    }

    /// Parses and validates a vault file.
    pub fn from_json(text: &str) -> Result<Vault, VaultError> {
        let file: VaultFile =
            serde_json::from_str(text).map_err(|e| VaultError::Schema(e.to_string()))?;
        Vault::try_from(file)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy_number::FuzzyNumber;

    fn sample() -> Vault {
        let t = |c: f64| FuzzyNumber::triangular(c - 1.0, c, c + 1.0).unwrap();
        let g = |c: f64| FuzzyNumber::gaussian(c, 0.5, 0.75).unwrap();
        Vault {
            q: 97,
            n: 1,
            points: vec![
                VaultPoint { x: t(3.0), y: t(4.0) },
                VaultPoint { x: g(5.0), y: g(96.0) },
            ],
        }
    }

    #[test]
    fn json_round_trip() {
        let v = sample();
        let text = v.to_json();
        assert!(text.contains("\"crc_variant\": \"CRC-16/ARC\""));
        assert!(text.contains("\"family\": \"gaussian\""));
        let back = Vault::from_json(&text).unwrap();
        assert_eq!(back, v);
        assert_eq!(back.to_json(), text);
    }

    fn edit(f: impl FnOnce(&mut serde_json::Value)) -> Result<Vault, VaultError> {
        let mut v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        f(&mut v);
        Vault::from_json(&v.to_string())
    }

    #[test]
    fn schema_violations() {
        assert!(edit(|v| v["header"]["format_version"] = 2.into()).is_err());
        assert!(edit(|v| v["header"]["crc_variant"] = "CRC-32".into()).is_err());
        assert!(edit(|v| v["header"]["q"] = 98.into()).is_err());
        assert!(edit(|v| v["header"]["r"] = 3.into()).is_err());
        assert!(edit(|v| v["points"][1]["x"]["params"][0] = 3.0.into()).is_err());
        assert!(edit(|v| v["points"][0]["y"]["params"] = serde_json::json!([3.5, 4.5, 5.5])).is_err());
        assert!(edit(|v| v["points"][0]["y"] = serde_json::json!({"family": "crisp", "params": [4.0]}))
            .is_err());
        assert!(edit(|v| v["points"][0]["x"]["params"] = serde_json::json!([3.0, 2.0, 1.0])).is_err());
        assert!(edit(|v| v["extra"] = 1.into()).is_err());
        assert!(Vault::from_json("not json").is_err());
    }
}
