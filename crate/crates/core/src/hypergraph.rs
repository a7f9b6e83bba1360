//! Hypergraphs with keyed edges.
//!
//! Edges are keyed rather than deduplicated: two edges may carry the same
//! vertex set under different keys. For closed-neighborhood hypergraphs the
//! key is the vertex whose neighborhood the edge is, so predominating a
//! vertex removes exactly one keyed edge.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{IdMap, Vertex};

/// Opaque edge label: a dot-separated sequence of integers, ordered
/// lexicographically by component (`2 < 10 < 10.0 < 11`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct EdgeKey(Vec<u32>);

impl EdgeKey {
    pub fn single(id: u32) -> Self {
        EdgeKey(vec![id])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// This key with one more component appended.
    pub fn suffixed(&self, part: u32) -> Self {
        let mut parts = self.0.clone();
        parts.push(part);
        EdgeKey(parts)
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for EdgeKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('.')
            .map(|p| p.parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::invalid(format!("malformed edge key `{s}`")))?;
        Ok(EdgeKey(parts))
    }
}

impl From<EdgeKey> for String {
    fn from(k: EdgeKey) -> String {
        k.to_string()
    }
}

impl TryFrom<String> for EdgeKey {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    n: usize,
    edges: BTreeMap<EdgeKey, Vec<Vertex>>,
}

impl Hypergraph {
    pub fn new(n: usize) -> Self {
        Hypergraph {
            n,
            edges: BTreeMap::new(),
        }
    }

    /// Convenience constructor keying edges `0, 1, 2, ...` in order.
    pub fn from_edge_sets<I, E>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = Vertex>,
    {
        let mut h = Hypergraph::new(n);
        for (i, e) in edges.into_iter().enumerate() {
            h.insert_edge(EdgeKey::single(i as u32), e)?;
        }
        Ok(h)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Inserts an edge; fails on an empty set, an out-of-range vertex, or a
    /// key already in use.
    pub fn insert_edge(
        &mut self,
        key: EdgeKey,
        vertices: impl IntoIterator<Item = Vertex>,
    ) -> Result<()> {
        let mut set: Vec<Vertex> = vertices.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        if set.is_empty() {
            return Err(Error::invalid(format!("edge {key} is empty")));
        }
        if let Some(&v) = set.iter().find(|&&v| v >= self.n) {
            return Err(Error::invalid(format!(
                "edge {key} contains vertex {v}, out of range for {} vertices",
                self.n
            )));
        }
        if self.edges.contains_key(&key) {
            return Err(Error::invalid(format!("duplicate edge key {key}")));
        }
        self.edges.insert(key, set);
        Ok(())
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&[Vertex]> {
        self.edges.get(key).map(Vec::as_slice)
    }

    /// Edges in ascending key order.
    pub fn edges(&self) -> impl Iterator<Item = (&EdgeKey, &[Vertex])> {
        self.edges.iter().map(|(k, e)| (k, e.as_slice()))
    }

    pub fn keys(&self) -> impl Iterator<Item = &EdgeKey> {
        self.edges.keys()
    }

    pub fn without_edge(&self, key: &EdgeKey) -> Hypergraph {
        let mut h = self.clone();
        h.edges.remove(key);
        h
    }

    pub fn remove_edge(&mut self, key: &EdgeKey) -> Option<Vec<Vertex>> {
        self.edges.remove(key)
    }

    pub fn retain_edges(&mut self, mut keep: impl FnMut(&EdgeKey, &[Vertex]) -> bool) {
        self.edges.retain(|k, e| keep(k, e));
    }

    /// Number of edges containing each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in self.edges.values() {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Connected components over the vertex set (isolated vertices are
    /// singleton components), each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut parent: Vec<usize> = (0..self.n).collect();
        for e in self.edges.values() {
            for w in e.windows(2) {
                let a = find(&mut parent, w[0]);
                let b = find(&mut parent, w[1]);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        self.collect_components(&mut parent)
    }

    fn collect_components(&self, parent: &mut [usize]) -> Vec<Vec<Vertex>> {
        let mut by_root: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        for v in 0..self.n {
            let mut r = v;
            while parent[r] != r {
                r = parent[r];
            }
            by_root.entry(r).or_default().push(v);
        }
        let mut comps: Vec<Vec<Vertex>> = by_root.into_values().collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    /// Renders in the text format: `n=<count>` then `h <key> <v1> <v2> ...`.
    pub fn render(&self) -> String {
        use std::fmt::Write as _;
        let mut out = format!("n={}\n", self.n);
        for (k, e) in &self.edges {
            write!(out, "h {k}").unwrap();
            for v in e {
                write!(out, " {v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    let mut h: Option<Hypergraph> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some(hg) = h.as_mut() else {
            let value = line
                .strip_prefix("n=")
                .ok_or_else(|| Error::parse(line_no, "expected header `n=<count>`"))?;
            let n = value
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex count `{value}`")))?;
            h = Some(Hypergraph::new(n));
            continue;
        };
        let mut toks = line.split_whitespace();
        if toks.next() != Some("h") {
            return Err(Error::parse(line_no, format!("malformed line `{line}`")));
        }
        let key: EdgeKey = toks
            .next()
            .ok_or_else(|| Error::parse(line_no, "edge line needs a key"))?
            .parse()
            .map_err(|e: Error| Error::parse(line_no, e.to_string()))?;
        let mut verts = Vec::new();
        for tok in toks {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad vertex `{tok}`")))?;
            if verts.contains(&v) {
                return Err(Error::parse(line_no, format!("vertex {v} repeated in edge")));
            }
            verts.push(v);
        }
        hg.insert_edge(key, verts)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
    }
    h.ok_or_else(|| Error::parse(last_line.max(1), "missing header `n=<count>`"))
}

/// Drops degree-0 vertices and compacts ids; keys and edge sets are kept.
pub fn strip_isolated(h: &Hypergraph) -> (Hypergraph, IdMap) {
    let keep: Vec<bool> = h.degrees().iter().map(|&d| d > 0).collect();
    let map = IdMap::from_mask(&keep);
    let mut out = Hypergraph::new(map.len());
    for (k, e) in h.edges() {
        out.insert_edge(k.clone(), e.iter().map(|&v| map.new_id(v).unwrap()))
            .expect("relabelled edge is valid");
    }
    (out, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_order_numerically() {
        let mut keys: Vec<EdgeKey> = ["10", "2", "10.0", "11", "2.5"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        keys.sort();
        let shown: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
        assert_eq!(shown, ["2", "2.5", "10", "10.0", "11"]);
    }

    #[test]
    fn rejects_bad_edges() {
        let mut h = Hypergraph::new(2);
        assert!(h.insert_edge(EdgeKey::single(0), []).is_err());
        assert!(h.insert_edge(EdgeKey::single(0), [2]).is_err());
        h.insert_edge(EdgeKey::single(0), [0, 1]).unwrap();
        assert!(h.insert_edge(EdgeKey::single(0), [1]).is_err());
        // same vertex set under another key is fine
        h.insert_edge(EdgeKey::single(1), [1, 0]).unwrap();
        assert_eq!(h.edge_count(), 2);
    }

    #[test]
    fn text_round_trip() {
        let text = "n=4\nh 0 0 1\nh 1.3 1 2 3\nh 7 3\n";
        let h = parse_hypergraph(text).unwrap();
        assert_eq!(h.render(), text);
        assert!(matches!(
            parse_hypergraph("n=2\nh 0 0 5\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_hypergraph("n=2\ng 0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn strip_isolated_examples() {
        let h = Hypergraph::from_edge_sets(2, [vec![0, 1]]).unwrap();
        assert_eq!(strip_isolated(&h).0, h);

        let h = Hypergraph::from_edge_sets(3, [vec![0, 1]]).unwrap();
        let (s, map) = strip_isolated(&h);
        assert_eq!(s.n(), 2);
        assert_eq!(s.edge_count(), 1);
        assert_eq!(map.new_to_old(), &[0, 1]);

        let h = Hypergraph::from_edge_sets(4, [vec![3], vec![1, 3]]).unwrap();
        let (s, map) = strip_isolated(&h);
        assert_eq!(map.new_to_old(), &[1, 3]);
        assert_eq!(s.edge(&EdgeKey::single(0)), Some(&[1][..]));
    }

    #[test]
    fn components_merge_through_edges() {
        let h = Hypergraph::from_edge_sets(6, [vec![0, 3], vec![3, 4], vec![1, 5]]).unwrap();
        assert_eq!(h.components(), vec![vec![0, 3, 4], vec![1, 5], vec![2]]);
    }
}
