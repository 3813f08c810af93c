//! Named classical knots.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::diagram::{BraidWord, PlatWord};
use crate::error::{Error, Result};
use crate::presentation::Presentation;

const BUILTIN: &str = include_str!("../../data/catalog.json");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CatalogEntry {
    Braid {
        braid: Vec<i64>,
        strands: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bridge: Option<u32>,
    },
    TwoBridge {
        two_bridge: Vec<i64>,
    },
}

impl CatalogEntry {
    pub fn presentation(&self) -> Result<Presentation> {
        match self {
            CatalogEntry::Braid { braid, strands, .. } => {
                BraidWord::new(braid.clone(), *strands)?.wirtinger()
            }
            CatalogEntry::TwoBridge { two_bridge } => PlatWord::two_bridge(two_bridge)?.wirtinger(),
        }
    }

    /// Bridge number when recorded; two-bridge entries are 2 by construction.
    pub fn bridge_number(&self) -> Option<u32> {
        match self {
            CatalogEntry::Braid {
                bridge,
                strands,
                braid,
            } => {
                if braid.is_empty() && *strands == 1 {
                    Some(1)
                } else {
                    *bridge
                }
            }
            CatalogEntry::TwoBridge { .. } => Some(2),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Catalog {
    entries: BTreeMap<String, CatalogEntry>,
}

impl Catalog {
    pub fn builtin() -> Self {
        Catalog::from_json(BUILTIN).expect("shipped catalog parses")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn get(&self, name: &str) -> Result<&CatalogEntry> {
        self.entries
            .get(name)
            .ok_or_else(|| Error::UnknownKnot(name.to_string()))
    }

    pub fn presentation(&self, name: &str) -> Result<Presentation> {
        self.get(name)?.presentation()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &CatalogEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }
}
