//! Finitely generated 2-local abelian groups with labelled cyclic summands.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::grading::TriDegree;

/// Order of a cyclic summand: the 2-adic integers or `Z/n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Order {
    Z2Adic,
    Cyclic(u64),
}

impl Order {
    pub fn is_free(self) -> bool {
        matches!(self, Order::Z2Adic)
    }

    /// `Z/2^v`.
    pub fn two_power(v: u32) -> Order {
        Order::Cyclic(1u64 << v)
    }

    pub fn parse(s: &str) -> Option<Order> {
        if s == "Z2" {
            return Some(Order::Z2Adic);
        }
        let n: u64 = s.strip_prefix("Z/")?.parse().ok()?;
        (n >= 2).then_some(Order::Cyclic(n))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Z2Adic => f.write_str("Z2"),
            Order::Cyclic(n) => write!(f, "Z/{n}"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Order {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Order::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad group order `{s}`")))
    }
}

/// A cyclic summand with a generator label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Summand {
    pub order: Order,
    pub label: String,
}

impl Summand {
    pub fn new(order: Order, label: impl Into<String>) -> Self {
        Summand { order, label: label.into() }
    }
}

/// Direct sum of cyclic summands, kept sorted: free summands first, then by order, then label.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupPresentation {
    summands: Vec<Summand>,
}

impl GroupPresentation {
    pub fn zero() -> Self {
        GroupPresentation { summands: Vec::new() }
    }

    pub fn new(mut summands: Vec<Summand>) -> Self {
        summands.sort();
        GroupPresentation { summands }
    }

    pub fn single(order: Order, label: impl Into<String>) -> Self {
        GroupPresentation { summands: vec![Summand::new(order, label)] }
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    /// Number of cyclic summands.
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn free_rank(&self) -> usize {
        self.summands.iter().filter(|s| s.order.is_free()).count()
    }

    pub fn torsion_count(&self) -> usize {
        self.len() - self.free_rank()
    }

    /// Sorted multiset of orders, ignoring labels.
    pub fn shape(&self) -> Vec<Order> {
        self.summands.iter().map(|s| s.order).collect()
    }

    pub fn same_shape(&self, other: &GroupPresentation) -> bool {
        self.shape() == other.shape()
    }

    pub fn direct_sum(mut self, other: GroupPresentation) -> Self {
        self.summands.extend(other.summands);
        self.summands.sort();
        self
    }

    pub fn push(&mut self, s: Summand) {
        let at = self.summands.partition_point(|x| x < &s);
        self.summands.insert(at, s);
    }

    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Self {
        GroupPresentation::new(self.summands.iter().map(|s| Summand::new(s.order, f(&s.label))).collect())
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.summands.iter().map(|s| format!("{}{{{}}}", s.order, s.label)).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for GroupPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<(String, &str)> = self.summands.iter().map(|x| (x.order.to_string(), x.label.as_str())).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<(String, String)> = Vec::deserialize(d)?;
        let mut out = Vec::with_capacity(rows.len());
        for (o, l) in rows {
            let order = Order::parse(&o).ok_or_else(|| serde::de::Error::custom(format!("bad group order `{o}`")))?;
            out.push(Summand::new(order, l));
        }
        Ok(GroupPresentation::new(out))
    }
}

/// One line of tabular output: a degree and its group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub degree: Vec<i64>,
    pub summands: GroupPresentation,
}

/// Groups indexed by tri-degree; absent entries are zero.
pub type GroupTable = BTreeMap<TriDegree, GroupPresentation>;

/// Serializes nonzero entries as line-delimited JSON records.
pub fn table_to_json_lines(table: &GroupTable) -> String {
    let mut out = String::new();
    for (d, g) in table {
        if g.is_zero() {
            continue;
        }
        let rec = GroupRecord { degree: d.as_array().to_vec(), summands: g.clone() };
        out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
        out.push('\n');
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum TableParseError {
    #[error("line {line}: {msg}")]
    Bad { line: usize, msg: String },
}

/// Parses line-delimited JSON records with three-component degrees.
pub fn table_from_json_lines(text: &str) -> Result<GroupTable, TableParseError> {
    let mut table = GroupTable::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let rec: GroupRecord =
            serde_json::from_str(line).map_err(|e| TableParseError::Bad { line: i + 1, msg: e.to_string() })?;
        let [p, q, w] = rec.degree[..] else {
            return Err(TableParseError::Bad { line: i + 1, msg: "degree must have three components".into() });
        };
        let entry = table.entry(TriDegree::new(p, q, w)).or_default();
        *entry = std::mem::take(entry).direct_sum(rec.summands);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_and_json() {
        let g = GroupPresentation::new(vec![
            Summand::new(Order::Cyclic(4), "b"),
            Summand::new(Order::Z2Adic, "x"),
            Summand::new(Order::Cyclic(2), "a"),
        ]);
        assert_eq!(g.shape(), vec![Order::Z2Adic, Order::Cyclic(2), Order::Cyclic(4)]);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"[["Z2","x"],["Z/2","a"],["Z/4","b"]]"#);
        let back: GroupPresentation = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn json_lines_round_trip() {
        let mut t = GroupTable::new();
        t.insert(TriDegree::new(1, -1, -1), GroupPresentation::single(Order::Cyclic(2), "ta u"));
        t.insert(TriDegree::new(0, 0, 0), GroupPresentation::single(Order::Z2Adic, "1"));
        let text = table_to_json_lines(&t);
        assert!(text.starts_with(r#"{"degree":[0,0,0],"summands":[["Z2","1"]]}"#));
        assert_eq!(table_from_json_lines(&text).unwrap(), t);
    }

    #[test]
    fn bad_orders_rejected() {
        assert_eq!(Order::parse("Z/1"), None);
        assert_eq!(Order::parse("Z/x"), None);
        assert_eq!(Order::parse("Z/3"), Some(Order::Cyclic(3)));
    }
}
