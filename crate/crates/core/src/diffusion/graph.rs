use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Directed follower graph in information-flow orientation: an edge
/// `u -> v` means `v` follows `u`, so `v` sees what `u` posts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FollowerGraph {
    names: Vec<String>,
    ids: HashMap<String, u32>,
    /// `followers[u]`: accounts that follow `u`, sorted.
    followers: Vec<Vec<u32>>,
    /// `followees[v]`: accounts that `v` follows, sorted.
    followees: Vec<Vec<u32>>,
    n_edges: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub lines: usize,
    pub malformed: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Accumulates `(follower, followee)` pairs.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    names: Vec<String>,
    ids: HashMap<String, u32>,
    edges: Vec<(u32, u32)>,
    stats: GraphStats,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("fewer than 2^32 accounts");
        self.names.push(name.to_string());
        self.ids.insert(name.to_string(), id);
        id
    }

    /// Records that `follower` follows `followee`.
    pub fn follow(&mut self, follower: &str, followee: &str) {
        if follower == followee {
            self.stats.self_loops += 1;
            return;
        }
        let f = self.intern(follower);
        let g = self.intern(followee);
        self.edges.push((g, f));
    }

    pub fn finish(mut self) -> (FollowerGraph, GraphStats) {
        self.edges.sort_unstable();
        let before = self.edges.len();
        self.edges.dedup();
        self.stats.duplicates += before - self.edges.len();
        let n = self.names.len();
        let mut followers = vec![Vec::new(); n];
        let mut followees = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            followers[u as usize].push(v);
            followees[v as usize].push(u);
        }
        for l in &mut followees {
            l.sort_unstable();
        }
        let g = FollowerGraph {
            names: self.names,
            ids: self.ids,
            followers,
            followees,
            n_edges: self.edges.len(),
        };
        (g, self.stats)
    }
}

impl FollowerGraph {
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut b = GraphBuilder::new();
        for (follower, followee) in pairs {
            b.follow(follower, followee);
        }
        b.finish().0
    }

    pub fn n_nodes(&self) -> usize {
        self.names.len()
    }

    pub fn n_edges(&self) -> usize {
        self.n_edges
    }

    pub fn id(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn followers(&self, id: u32) -> &[u32] {
        &self.followers[id as usize]
    }

    pub fn followees(&self, id: u32) -> &[u32] {
        &self.followees[id as usize]
    }

    pub fn out_degree(&self, id: u32) -> usize {
        self.followers[id as usize].len()
    }

    /// Edges as `(followee, follower)` id pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.followers
            .iter()
            .enumerate()
            .flat_map(|(u, fs)| fs.iter().map(move |&v| (u as u32, v)))
    }

    /// The graph restricted to the edges accepted by `keep`, with the same
    /// node set.
    pub fn filter_edges(&self, mut keep: impl FnMut(u32, u32) -> bool) -> FollowerGraph {
        let n = self.n_nodes();
        let mut followers = vec![Vec::new(); n];
        let mut followees = vec![Vec::new(); n];
        let mut n_edges = 0;
        for (u, v) in self.edges() {
            if keep(u, v) {
                followers[u as usize].push(v);
                followees[v as usize].push(u);
                n_edges += 1;
            }
        }
        for l in &mut followees {
            l.sort_unstable();
        }
        FollowerGraph {
            names: self.names.clone(),
            ids: self.ids.clone(),
            followers,
            followees,
            n_edges,
        }
    }
}

/// Reads `follower,followee` lines. A leading header line is skipped;
/// malformed lines are skipped and counted.
pub fn load_graph(path: &Path) -> Result<(FollowerGraph, GraphStats)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut b = GraphBuilder::new();
    let mut malformed = 0;
    let mut lines = 0;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if i == 0 && line == "follower,followee" {
            continue;
        }
        lines += 1;
        let mut parts = line.split(',');
        match (parts.next(), parts.next(), parts.next()) {
            (Some(a), Some(b2), None) if !a.trim().is_empty() && !b2.trim().is_empty() => {
                b.follow(a.trim(), b2.trim())
            }
            _ => {
                log::debug!("{}:{}: malformed edge", path.display(), i + 1);
                malformed += 1;
            }
        }
    }
    let (g, mut stats) = b.finish();
    stats.lines = lines;
    stats.malformed = malformed;
    Ok((g, stats))
}

pub fn write_graph(path: &Path, graph: &FollowerGraph) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(path, e);
    writeln!(w, "follower,followee").map_err(io)?;
    for (u, v) in graph.edges() {
        writeln!(w, "{},{}", graph.name(v), graph.name(u)).map_err(io)?;
    }
    w.flush().map_err(io)
}
