//! Solution concepts of the bilateral game, in order of increasing
//! cooperation. Composite concepts decompose into their base checks.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A bilateral solution concept.
///
/// Base concepts (`Remove`, `BilateralAdd`, `BilateralSwap`, `Neighborhood`,
/// `KStrong`) each define one improving-move shape; `PairwiseStable` is
/// remove plus add, `BilateralGreedy` additionally requires swap stability,
/// and `Strong` is `KStrong` with unbounded coalition size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Concept {
    Remove,
    BilateralAdd,
    PairwiseStable,
    BilateralSwap,
    BilateralGreedy,
    Neighborhood,
    KStrong(usize),
    Strong,
}

impl Concept {
    /// Base concepts whose improving-move streams must all be empty for this
    /// concept to hold on a graph with `n` nodes.
    pub fn components(&self, n: usize) -> Vec<Concept> {
        match self {
            Concept::PairwiseStable => vec![Concept::Remove, Concept::BilateralAdd],
            Concept::BilateralGreedy => {
                vec![Concept::Remove, Concept::BilateralAdd, Concept::BilateralSwap]
            }
            Concept::Strong => vec![Concept::KStrong(n)],
            c => vec![*c],
        }
    }

    pub fn id(&self) -> String {
        match self {
            Concept::Remove => "re".into(),
            Concept::BilateralAdd => "bae".into(),
            Concept::PairwiseStable => "ps".into(),
            Concept::BilateralSwap => "bswe".into(),
            Concept::BilateralGreedy => "bge".into(),
            Concept::Neighborhood => "bne".into(),
            Concept::KStrong(k) => format!("kbse:{k}"),
            Concept::Strong => "bse".into(),
        }
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for Concept {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().to_ascii_lowercase();
        Ok(match s.as_str() {
            "re" => Concept::Remove,
            "bae" => Concept::BilateralAdd,
            "ps" => Concept::PairwiseStable,
            "bswe" => Concept::BilateralSwap,
            "bge" => Concept::BilateralGreedy,
            "bne" => Concept::Neighborhood,
            "bse" => Concept::Strong,
            _ => {
                let k = s
                    .strip_prefix("kbse:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown concept {s:?}")))?;
                Concept::KStrong(k)
            }
        })
    }
}

impl From<Concept> for String {
    fn from(c: Concept) -> String {
        c.id()
    }
}

impl TryFrom<String> for Concept {
    type Error = Error;
    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}
