//! Machine-readable result records. All counts are decimal strings, and
//! field order is fixed by declaration order.

use padic_count::{Count, Expansion, Summand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldEcho {
    /// `qp` or the profile path.
    pub source: String,
    pub p: u64,
    pub e0: u64,
    pub f0: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryEcho {
    pub kind: String,
    pub field: FieldEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u64>,
}

/// `value = multiplier * sum(terms) / divisor`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    pub multiplier: Count,
    pub divisor: Count,
    pub terms: Vec<Summand>,
}

impl From<Expansion> for Breakdown {
    fn from(x: Expansion) -> Self {
        Breakdown {
            multiplier: Count::from(x.multiplier),
            divisor: Count::from(x.divisor),
            terms: x.terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryResult {
    pub query: QueryEcho,
    pub value: Count,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<Breakdown>,
}

impl QueryResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("query result serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.value);
        if let Some(b) = &self.breakdown {
            out.push_str(&format!(
                "# value = {} * sum / {}\n",
                b.multiplier, b.divisor
            ));
            for t in &b.terms {
                let mut line = String::from("#");
                let fields = [
                    ("i", t.i.map(u64::from)),
                    ("e'", t.e1),
                    ("f'", t.f1),
                    ("e''", t.e2),
                    ("f''", t.f2),
                    ("d", t.d),
                ];
                for (name, v) in fields {
                    if let Some(v) = v {
                        line.push_str(&format!(" {name}={v}"));
                    }
                }
                line.push_str(&format!(" term={}\n", t.term));
                out.push_str(&line);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub e: u64,
    pub f: u64,
    pub n: u64,
    pub krasner: Count,
    pub iso: Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableTotal {
    pub n: u64,
    pub iso_total: Count,
    pub iso_sum: Count,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub field: FieldEcho,
    pub cells: Vec<TableCell>,
    pub totals: Vec<TableTotal>,
}

pub const CSV_HEADER: &str = "row,e,f,n,krasner,iso,iso_total,iso_sum";

impl Table {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for c in &self.cells {
            out.push_str(&format!(
                "cell,{},{},{},{},{},,\n",
                c.e, c.f, c.n, c.krasner, c.iso
            ));
        }
        for t in &self.totals {
            out.push_str(&format!(
                "total,,,{},,,{},{}\n",
                t.n, t.iso_total, t.iso_sum
            ));
        }
        out
    }
}
