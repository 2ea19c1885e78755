use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
}

impl Pos {
    /// Lookup order used when grounding a token.
    pub const ALL: [Pos; 4] = [Pos::Noun, Pos::Verb, Pos::Adj, Pos::Adv];

    pub fn file_suffix(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Verb => "verb",
            Pos::Adj => "adj",
            Pos::Adv => "adv",
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adj => 'a',
            Pos::Adv => 'r',
        }
    }

    fn from_letter(c: &str) -> Option<Pos> {
        match c {
            "n" => Some(Pos::Noun),
            "v" => Some(Pos::Verb),
            "a" | "s" => Some(Pos::Adj),
            "r" => Some(Pos::Adv),
            _ => None,
        }
    }

    fn idx(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SynsetId {
    pub pos: Pos,
    pub offset: u32,
}

/// Index of a synset inside a [`Taxonomy`].
pub type NodeIdx = usize;

#[derive(Debug, Clone)]
struct Node {
    id: SynsetId,
    lemmas: Vec<String>,
    /// Hypernyms (nouns only); the root is added for parentless nouns.
    parents: Vec<NodeIdx>,
    /// Nouns reached by derivational, attribute or pertainym links.
    linked_nouns: Vec<SynsetId>,
}

/// Raw text of the WordNet database files, per part of speech in
/// [`Pos::ALL`] order.
pub struct WordNetSources<'a> {
    pub data: [&'a str; 4],
    pub index: [&'a str; 4],
    pub exceptions: [&'a str; 4],
}

/// A WordNet lexicon with the noun hypernym hierarchy rooted at `entity`.
#[derive(Debug, Clone)]
pub struct Taxonomy {
    nodes: Vec<Node>,
    by_id: HashMap<SynsetId, NodeIdx>,
    lemma_index: [HashMap<String, Vec<NodeIdx>>; 4],
    exceptions: [HashMap<String, Vec<String>>; 4],
    root: NodeIdx,
    /// Shortest distance from the root, for nouns.
    depth: Vec<Option<u32>>,
    children: Vec<Vec<NodeIdx>>,
}

fn malformed(what: &'static str, location: String, reason: &str) -> Error {
    Error::Malformed {
        what,
        location,
        reason: reason.to_string(),
    }
}

struct ParsedSynset {
    id: SynsetId,
    lemmas: Vec<String>,
    pointers: Vec<(String, SynsetId)>,
}

fn parse_data_line(line: &str, file: &str, lineno: usize) -> Result<ParsedSynset> {
    let loc = || format!("{file}:{lineno}");
    let head = line.split(" | ").next().unwrap_or(line);
    let f: Vec<&str> = head.split_whitespace().collect();
    let bad = |r: &str| malformed("synset", loc(), r);
    if f.len() < 4 {
        return Err(bad("too few fields"));
    }
    let offset: u32 = f[0].parse().map_err(|_| bad("bad offset"))?;
    let pos = Pos::from_letter(f[2]).ok_or_else(|| bad("bad part of speech"))?;
    let w_cnt = usize::from_str_radix(f[3], 16).map_err(|_| bad("bad word count"))?;
    let mut i = 4;
    let mut lemmas = Vec::with_capacity(w_cnt);
    for _ in 0..w_cnt {
        let w = f.get(i).ok_or_else(|| bad("truncated word list"))?;
        // Adjective markers such as `(p)` are not part of the lemma.
        let w = w.split('(').next().unwrap_or(w);
        lemmas.push(w.to_lowercase());
        i += 2;
    }
    let p_cnt: usize = f.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| bad("bad pointer count"))?;
    i += 1;
    let mut pointers = Vec::with_capacity(p_cnt);
    for _ in 0..p_cnt {
        if i + 3 >= f.len() {
            return Err(bad("truncated pointer list"));
        }
        let sym = f[i];
        let off: u32 = f[i + 1].parse().map_err(|_| bad("bad pointer offset"))?;
        let tpos = Pos::from_letter(f[i + 2]).ok_or_else(|| bad("bad pointer part of speech"))?;
        pointers.push((sym.to_string(), SynsetId { pos: tpos, offset: off }));
        i += 4;
    }
    Ok(ParsedSynset {
        id: SynsetId { pos, offset },
        lemmas,
        pointers,
    })
}

fn parse_index_line(line: &str, file: &str, lineno: usize, pos: Pos) -> Result<(String, Vec<SynsetId>)> {
    let f: Vec<&str> = line.split_whitespace().collect();
    let bad = |r: &str| malformed("index entry", format!("{file}:{lineno}"), r);
    if f.len() < 6 {
        return Err(bad("too few fields"));
    }
    let synset_cnt: usize = f[2].parse().map_err(|_| bad("bad sense count"))?;
    let p_cnt: usize = f[3].parse().map_err(|_| bad("bad pointer count"))?;
    let start = 4 + p_cnt + 2;
    if f.len() < start + synset_cnt {
        return Err(bad("truncated offsets"));
    }
    let offsets = f[start..start + synset_cnt]
        .iter()
        .map(|o| {
            o.parse()
                .map(|offset| SynsetId { pos, offset })
                .map_err(|_| bad("bad offset"))
        })
        .collect::<Result<_>>()?;
    Ok((f[0].to_lowercase(), offsets))
}

fn is_license_line(line: &str) -> bool {
    line.starts_with(' ') || line.trim().is_empty()
}

impl Taxonomy {
    pub fn from_sources(src: &WordNetSources<'_>) -> Result<Self> {
        let mut parsed = Vec::new();
        for pos in Pos::ALL {
            let file = format!("data.{}", pos.file_suffix());
            for (n, line) in src.data[pos.idx()].lines().enumerate() {
                if is_license_line(line) {
                    continue;
                }
                parsed.push(parse_data_line(line, &file, n + 1)?);
            }
        }
        let mut nodes: Vec<Node> = Vec::with_capacity(parsed.len() + 1);
        let mut by_id = HashMap::with_capacity(parsed.len() + 1);
        for p in &parsed {
            if by_id.insert(p.id, nodes.len()).is_some() {
                return Err(malformed("synset", format!("{:?}", p.id), "duplicate offset"));
            }
            nodes.push(Node {
                id: p.id,
                lemmas: p.lemmas.clone(),
                parents: Vec::new(),
                linked_nouns: Vec::new(),
            });
        }
        let mut links: Vec<Vec<(u8, SynsetId)>> = vec![Vec::new(); nodes.len()];
        for p in &parsed {
            let me = by_id[&p.id];
            for (sym, target) in &p.pointers {
                let hyper = p.id.pos == Pos::Noun && target.pos == Pos::Noun && (sym == "@" || sym == "@i");
                let link = p.id.pos != Pos::Noun && target.pos == Pos::Noun && matches!(sym.as_str(), "+" | "=" | "\\");
                if !hyper && !link {
                    continue;
                }
                let Some(&t) = by_id.get(target) else {
                    return Err(malformed("pointer", format!("{:?}", p.id), "target synset missing"));
                };
                if hyper {
                    if !nodes[me].parents.contains(&t) {
                        nodes[me].parents.push(t);
                    }
                } else {
                    let kind = match sym.as_str() {
                        "+" => 0u8,
                        "=" => 1,
                        _ => 2,
                    };
                    links[me].push((kind, *target));
                }
            }
        }
        // Derivational links first, then attributes, then pertainyms; file
        // order within a kind.
        for (n, mut l) in nodes.iter_mut().zip(links) {
            l.sort_by_key(|&(kind, _)| kind);
            let mut seen = BTreeSet::new();
            n.linked_nouns = l.into_iter().map(|(_, s)| s).filter(|s| seen.insert(*s)).collect();
        }

        let parentless: Vec<NodeIdx> = (0..nodes.len())
            .filter(|&i| nodes[i].id.pos == Pos::Noun && nodes[i].parents.is_empty())
            .collect();
        let entity_roots: Vec<NodeIdx> = parentless
            .iter()
            .copied()
            .filter(|&i| nodes[i].lemmas.first().is_some_and(|l| l == "entity"))
            .collect();
        let root = if entity_roots.len() == 1 {
            entity_roots[0]
        } else {
            let id = SynsetId {
                pos: Pos::Noun,
                offset: 0,
            };
            if by_id.contains_key(&id) {
                return Err(malformed("synset", "offset 0".into(), "reserved for the virtual root"));
            }
            by_id.insert(id, nodes.len());
            nodes.push(Node {
                id,
                lemmas: vec!["entity".into()],
                parents: Vec::new(),
                linked_nouns: Vec::new(),
            });
            nodes.len() - 1
        };
        for i in parentless {
            if i != root {
                nodes[i].parents.push(root);
            }
        }

        let mut lemma_index: [HashMap<String, Vec<NodeIdx>>; 4] = Default::default();
        for pos in Pos::ALL {
            let file = format!("index.{}", pos.file_suffix());
            for (n, line) in src.index[pos.idx()].lines().enumerate() {
                if is_license_line(line) {
                    continue;
                }
                let (lemma, ids) = parse_index_line(line, &file, n + 1, pos)?;
                let idxs = ids
                    .iter()
                    .map(|id| {
                        by_id
                            .get(id)
                            .copied()
                            .ok_or_else(|| malformed("index entry", format!("{file}:{}", n + 1), "unknown synset"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                lemma_index[pos.idx()].insert(lemma, idxs);
            }
        }
        let mut exceptions: [HashMap<String, Vec<String>>; 4] = Default::default();
        for pos in Pos::ALL {
            for line in src.exceptions[pos.idx()].lines() {
                let mut f = line.split_whitespace();
                if let Some(form) = f.next() {
                    exceptions[pos.idx()]
                        .entry(form.to_lowercase())
                        .or_default()
                        .extend(f.map(str::to_lowercase));
                }
            }
        }

        let mut t = Taxonomy {
            children: vec![Vec::new(); nodes.len()],
            depth: vec![None; nodes.len()],
            nodes,
            by_id,
            lemma_index,
            exceptions,
            root,
        };
        t.check_acyclic()?;
        t.compute_depths()?;
        Ok(t)
    }

    /// Loads `data.*`, `index.*` and `*.exc` from a WordNet `dict` directory.
    /// Missing exception files are treated as empty.
    pub fn load_dir(dir: &Path) -> Result<Self> {
        let read = |name: String, required: bool| -> Result<String> {
            let p = dir.join(&name);
            match std::fs::read_to_string(&p) {
                Ok(s) => Ok(s),
                Err(e) if !required && e.kind() == std::io::ErrorKind::NotFound => Ok(String::new()),
                Err(e) => Err(Error::io(p, e)),
            }
        };
        let mut data: [String; 4] = Default::default();
        let mut index: [String; 4] = Default::default();
        let mut exc: [String; 4] = Default::default();
        for pos in Pos::ALL {
            data[pos.idx()] = read(format!("data.{}", pos.file_suffix()), true)?;
            index[pos.idx()] = read(format!("index.{}", pos.file_suffix()), true)?;
            exc[pos.idx()] = read(format!("{}.exc", pos.file_suffix()), false)?;
        }
        Self::from_sources(&WordNetSources {
            data: [&data[0], &data[1], &data[2], &data[3]],
            index: [&index[0], &index[1], &index[2], &index[3]],
            exceptions: [&exc[0], &exc[1], &exc[2], &exc[3]],
        })
    }

    fn check_acyclic(&self) -> Result<()> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if state[start] != 0 {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            state[start] = 1;
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if let Some(&p) = self.nodes[v].parents.get(*next) {
                    *next += 1;
                    match state[p] {
                        0 => {
                            state[p] = 1;
                            stack.push((p, 0));
                        }
                        1 => return Err(Error::CyclicTaxonomy(self.key(p))),
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    fn compute_depths(&mut self) -> Result<()> {
        for i in 0..self.nodes.len() {
            for &p in &self.nodes[i].parents {
                self.children[p].push(i);
            }
        }
        let mut queue = VecDeque::from([self.root]);
        self.depth[self.root] = Some(0);
        while let Some(v) = queue.pop_front() {
            let d = self.depth[v].expect("queued nodes have a depth");
            for &c in &self.children[v] {
                if self.depth[c].is_none() {
                    self.depth[c] = Some(d + 1);
                    queue.push_back(c);
                }
            }
        }
        if let Some(i) = (0..self.nodes.len()).find(|&i| self.nodes[i].id.pos == Pos::Noun && self.depth[i].is_none()) {
            return Err(Error::Invariant(format!("{} does not reach the root", self.key(i))));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn root(&self) -> NodeIdx {
        self.root
    }

    pub fn node(&self, id: SynsetId) -> Option<NodeIdx> {
        self.by_id.get(&id).copied()
    }

    pub fn id(&self, n: NodeIdx) -> SynsetId {
        self.nodes[n].id
    }

    pub fn lemmas(&self, n: NodeIdx) -> &[String] {
        &self.nodes[n].lemmas
    }

    pub fn parents(&self, n: NodeIdx) -> &[NodeIdx] {
        &self.nodes[n].parents
    }

    pub fn depth(&self, n: NodeIdx) -> Option<u32> {
        self.depth[n]
    }

    pub fn noun_nodes(&self) -> impl Iterator<Item = NodeIdx> + '_ {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].id.pos == Pos::Noun)
    }

    /// Nouns linked to a non-noun synset: derivational links first, then
    /// attributes, then pertainyms.
    pub fn linked_nouns(&self, n: NodeIdx) -> Vec<NodeIdx> {
        self.nodes[n]
            .linked_nouns
            .iter()
            .filter_map(|id| self.node(*id))
            .collect()
    }

    /// Senses of `lemma` in index order (most frequent first).
    pub fn senses(&self, lemma: &str, pos: Pos) -> &[NodeIdx] {
        self.lemma_index[pos.idx()].get(lemma).map_or(&[], Vec::as_slice)
    }

    pub fn has_lemma(&self, lemma: &str, pos: Pos) -> bool {
        self.lemma_index[pos.idx()].contains_key(lemma)
    }

    pub fn exception_bases(&self, form: &str, pos: Pos) -> &[String] {
        self.exceptions[pos.idx()].get(form).map_or(&[], Vec::as_slice)
    }

    /// Every ancestor of `n` (itself included) whose depth is `depth`, in
    /// index order. Non-noun synsets have no ancestors.
    pub fn rollup(&self, n: NodeIdx, depth: u32) -> Vec<NodeIdx> {
        if self.nodes[n].id.pos != Pos::Noun {
            return Vec::new();
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![n];
        seen[n] = true;
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            if self.depth[v] == Some(depth) {
                out.push(v);
            }
            for &p in &self.nodes[v].parents {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn rollup_id(&self, id: SynsetId, depth: u32) -> Result<Vec<NodeIdx>> {
        let n = self.node(id).ok_or_else(|| Error::UnknownSynset(id.to_string()))?;
        Ok(self.rollup(n, depth))
    }

    /// Stable concept key: `first_lemma.pos.offset`.
    pub fn key(&self, n: NodeIdx) -> String {
        let node = &self.nodes[n];
        format!(
            "{}.{}.{:08}",
            node.lemmas.first().map_or("?", String::as_str),
            node.id.pos.letter(),
            node.id.offset
        )
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:08}", self.pos.letter(), self.offset)
    }
}
