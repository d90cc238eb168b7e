//! Ordered trees with height-preserving embeddings, and the truncation
//! functor `∂*`.
//!
//! A tree is stored as the list of child counts of its nodes in preorder,
//! which is also the lexicographic order `≤_T`; node `0` is the root. An
//! embedding is stored as the vector of images of the nodes of its source.
//!
//! Canonical encoding (`T/v1`): a tree is `n: u32` followed by its `n` child
//! counts; a morphism is the source tree, the target tree, then the image
//! vector as `u32`.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::category::{Category, Functor, HomIter};
use crate::encoding::{combine, fnv1a_u32s, Reader, Writer};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct OrderedTree {
    counts: Vec<u32>,
    parent: Vec<u32>,
    children: Vec<Vec<u32>>,
    /// `ht_T(v)`; the root has height 1.
    level: Vec<u32>,
    /// Index of the previous sibling, if any.
    prev_sibling: Vec<Option<u32>>,
    /// Number of siblings after the node.
    later_siblings: Vec<u32>,
    height: u32,
    digest: u64,
}

impl PartialEq for OrderedTree {
    fn eq(&self, other: &Self) -> bool {
        self.digest == other.digest && self.counts == other.counts
    }
}

impl Eq for OrderedTree {}

impl Hash for OrderedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.digest);
    }
}

impl PartialOrd for OrderedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.counts.len(), &self.counts).cmp(&(other.counts.len(), &other.counts))
    }
}

impl OrderedTree {
    /// Builds a tree from preorder child counts.
    pub fn from_counts(counts: Vec<u32>) -> Result<Self> {
        let n = counts.len();
        let bad =
            |reason: &str| Error::Precondition(format!("{counts:?} is not a preorder child-count list: {reason}"));
        if n == 0 {
            return Err(bad("empty"));
        }
        let mut parent = vec![0u32; n];
        let mut children = vec![Vec::new(); n];
        let mut level = vec![1u32; n];
        let mut prev_sibling = vec![None; n];
        // (node, children still to attach)
        let mut stack: Vec<(u32, u32)> = Vec::new();
        for (i, &c) in counts.iter().enumerate() {
            if i > 0 {
                let top = match stack.last_mut() {
                    Some(t) => t,
                    None => return Err(bad("more nodes than slots")),
                };
                let p = top.0;
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
                parent[i] = p;
                level[i] = level[p as usize] + 1;
                prev_sibling[i] = children[p as usize].last().copied();
                children[p as usize].push(i as u32);
            }
            if c > 0 {
                stack.push((i as u32, c));
            }
        }
        if !stack.is_empty() {
            return Err(bad("fewer nodes than slots"));
        }
        let mut later_siblings = vec![0u32; n];
        for kids in &children {
            for (j, &k) in kids.iter().enumerate() {
                later_siblings[k as usize] = (kids.len() - 1 - j) as u32;
            }
        }
        let height = *level.iter().max().unwrap();
        let mut key = vec![n as u32];
        key.extend_from_slice(&counts);
        let digest = fnv1a_u32s(&key);
        Ok(Self {
            counts,
            parent,
            children,
            level,
            prev_sibling,
            later_siblings,
            height,
            digest,
        })
    }

    pub fn single() -> Self {
        Self::from_counts(vec![0]).unwrap()
    }

    /// A root with `k` children.
    pub fn fan(k: u32) -> Self {
        let mut counts = vec![k];
        counts.extend(std::iter::repeat_n(0, k as usize));
        Self::from_counts(counts).unwrap()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn level(&self, v: usize) -> u32 {
        self.level[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        (v > 0).then(|| self.parent[v] as usize)
    }

    pub fn children(&self, v: usize) -> &[u32] {
        &self.children[v]
    }

    /// `br(T)`: the largest number of immediate successors.
    pub fn branching(&self) -> u32 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    pub fn digest(&self) -> u64 {
        self.digest
    }

    /// `v ∧ w`.
    pub fn meet(&self, mut v: usize, mut w: usize) -> usize {
        while self.level[v] > self.level[w] {
            v = self.parent[v] as usize;
        }
        while self.level[w] > self.level[v] {
            w = self.parent[w] as usize;
        }
        while v != w {
            v = self.parent[v] as usize;
            w = self.parent[w] as usize;
        }
        v
    }

    /// Adds `fan(v)` children below every leaf `v` at height `level`. The new
    /// nodes come after the existing ones in the sibling order.
    pub fn grow(&self, level: u32, fan: impl Fn(usize) -> u32) -> Self {
        let mut counts = Vec::with_capacity(self.len());
        for (v, &c) in self.counts.iter().enumerate() {
            if c == 0 && self.level[v] == level {
                let k = fan(v);
                counts.push(k);
                counts.extend(std::iter::repeat_n(0, k as usize));
            } else {
                counts.push(c);
            }
        }
        Self::from_counts(counts).unwrap()
    }

    /// `T*` together with the index of each surviving node in it.
    pub fn star(&self) -> (Self, Vec<Option<u32>>) {
        if self.height == 1 {
            return (self.clone(), vec![Some(0)]);
        }
        let mut counts = Vec::new();
        let mut index = vec![None; self.len()];
        for (v, &c) in self.counts.iter().enumerate() {
            if self.level[v] < self.height {
                index[v] = Some(counts.len() as u32);
                counts.push(if self.level[v] + 1 == self.height { 0 } else { c });
            }
        }
        (Self::from_counts(counts).unwrap(), index)
    }

    /// All ordered trees with exactly `n` nodes, ascending.
    pub fn all_with(n: usize) -> Vec<Self> {
        fn rec(n: usize, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            let left = n - cur.len();
            if left == 0 {
                if slots == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            if slots == 0 {
                return;
            }
            // this node fills one slot and opens c more; all must fit
            for c in 0..left {
                let open = slots - 1 + c;
                if open < left {
                    cur.push(c as u32);
                    rec(n, open, cur, out);
                    cur.pop();
                }
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, 1, &mut Vec::new(), &mut out);
        }
        out.sort();
        out.into_iter().map(|c| Self::from_counts(c).unwrap()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreeMor {
    pub src: Arc<OrderedTree>,
    pub dst: Arc<OrderedTree>,
    pub map: Vec<u32>,
}

impl TreeMor {
    /// Checks the three embedding conditions directly.
    pub fn is_embedding(s: &OrderedTree, t: &OrderedTree, map: &[u32]) -> bool {
        if map.len() != s.len() || map.iter().any(|&x| x as usize >= t.len()) {
            return false;
        }
        let n = s.len();
        for v in 0..n {
            if s.level(v) != t.level(map[v] as usize) {
                return false;
            }
            for w in v + 1..n {
                // preorder is the lexicographic order, so this also gives injectivity
                if map[v] >= map[w] {
                    return false;
                }
                if map[s.meet(v, w)] as usize != t.meet(map[v] as usize, map[w] as usize) {
                    return false;
                }
            }
        }
        true
    }
}

const FRESH: usize = usize::MAX;

/// Enumerates embeddings by depth-first search over the source in preorder,
/// trying candidate images in ascending order.
struct Embeddings {
    s: Arc<OrderedTree>,
    t: Arc<OrderedTree>,
    map: Vec<u32>,
    pos: Vec<usize>,
    i: usize,
    yielded: bool,
    done: bool,
}

impl Embeddings {
    fn new(s: Arc<OrderedTree>, t: Arc<OrderedTree>) -> Self {
        let n = s.len();
        let done = s.height() != t.height();
        Self {
            map: vec![0; n],
            pos: vec![FRESH; n],
            i: 1,
            yielded: false,
            done,
            s,
            t,
        }
    }

    fn emit(&self) -> TreeMor {
        TreeMor {
            src: self.s.clone(),
            dst: self.t.clone(),
            map: self.map.clone(),
        }
    }
}

impl Iterator for Embeddings {
    type Item = TreeMor;

    fn next(&mut self) -> Option<TreeMor> {
        if self.done {
            return None;
        }
        let n = self.s.len();
        if n == 1 {
            self.done = true;
            return Some(self.emit());
        }
        if self.yielded {
            self.yielded = false;
            self.i = n - 1;
        }
        loop {
            let i = self.i;
            if i == 0 {
                self.done = true;
                return None;
            }
            let p = self.s.parent[i] as usize;
            let kids = &self.t.children[self.map[p] as usize];
            let lo = match self.s.prev_sibling[i] {
                Some(ps) => self.pos[ps as usize] + 1,
                None => 0,
            };
            let start = if self.pos[i] == FRESH { lo } else { self.pos[i] + 1 };
            let hi = kids.len().saturating_sub(self.s.later_siblings[i] as usize);
            if start < hi {
                self.pos[i] = start;
                self.map[i] = kids[start];
                if i + 1 == n {
                    self.yielded = true;
                    return Some(self.emit());
                }
                self.i = i + 1;
                self.pos[i + 1] = FRESH;
            } else {
                self.pos[i] = FRESH;
                self.i = i - 1;
            }
        }
    }
}

/// The category `𝒯` of ordered trees.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TreeCategory;

impl Category for TreeCategory {
    type Obj = Arc<OrderedTree>;
    type Mor = TreeMor;

    fn name(&self) -> String {
        "T".into()
    }

    fn source(&self, f: &TreeMor) -> Arc<OrderedTree> {
        f.src.clone()
    }

    fn target(&self, f: &TreeMor) -> Arc<OrderedTree> {
        f.dst.clone()
    }

    fn hom_iter<'a>(&'a self, a: &Arc<OrderedTree>, b: &Arc<OrderedTree>) -> HomIter<'a, TreeMor> {
        Box::new(Embeddings::new(a.clone(), b.clone()))
    }

    fn compose(&self, g: &TreeMor, f: &TreeMor) -> Result<TreeMor> {
        if f.dst != g.src {
            return Err(Error::DomainMismatch("tree embeddings are not composable".into()));
        }
        Ok(TreeMor {
            src: f.src.clone(),
            dst: g.dst.clone(),
            map: f.map.iter().map(|&v| g.map[v as usize]).collect(),
        })
    }

    fn identity(&self, a: &Arc<OrderedTree>) -> TreeMor {
        TreeMor {
            src: a.clone(),
            dst: a.clone(),
            map: (0..a.len() as u32).collect(),
        }
    }

    /// Every ordered tree with at most `budget` nodes.
    fn objects(&self, budget: usize) -> Vec<Arc<OrderedTree>> {
        (1..=budget).flat_map(OrderedTree::all_with).map(Arc::new).collect()
    }

    fn encode_obj(&self, a: &Arc<OrderedTree>) -> Vec<u8> {
        Writer::new().u32(a.len() as u32).u32s(&a.counts).finish()
    }

    fn decode_obj(&self, bytes: &[u8]) -> Result<Arc<OrderedTree>> {
        let mut r = Reader::new(bytes);
        let t = read_tree(&mut r)?;
        r.finish()?;
        Ok(t)
    }

    fn encode_mor(&self, f: &TreeMor) -> Vec<u8> {
        Writer::new()
            .u32(f.src.len() as u32)
            .u32s(&f.src.counts)
            .u32(f.dst.len() as u32)
            .u32s(&f.dst.counts)
            .u32s(&f.map)
            .finish()
    }

    fn decode_mor(&self, bytes: &[u8]) -> Result<TreeMor> {
        let mut r = Reader::new(bytes);
        let src = read_tree(&mut r)?;
        let dst = read_tree(&mut r)?;
        let map = r.u32s(src.len())?;
        r.finish()?;
        if src.height() != dst.height() || !TreeMor::is_embedding(&src, &dst, &map) {
            return Err(Error::Decode {
                offset: 0,
                reason: "not a height-preserving embedding".into(),
            });
        }
        Ok(TreeMor { src, dst, map })
    }

    fn show_obj(&self, a: &Arc<OrderedTree>) -> String {
        format!("{:?}", a.counts)
    }

    fn show_mor(&self, f: &TreeMor) -> String {
        format!("{:?}→{:?}:{:?}", f.src.counts, f.dst.counts, f.map)
    }

    /// `fan:k`, or preorder child counts such as `2,1,0,0`.
    fn parse_obj(&self, text: &str) -> Result<Arc<OrderedTree>> {
        let t = text.trim();
        if t.starts_with("hex:") {
            return crate::category::parse_hex_fallback(t, |b| self.decode_obj(b));
        }
        let bad = |reason: String| Error::Parse { offset: 0, reason };
        if let Some(k) = t.strip_prefix("fan:") {
            let k = k.parse().map_err(|_| bad(format!("bad fan size `{k}`")))?;
            return Ok(Arc::new(OrderedTree::fan(k)));
        }
        let counts = t
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad(format!("`{t}` is not a child-count list")))?;
        OrderedTree::from_counts(counts)
            .map(Arc::new)
            .map_err(|e| bad(e.to_string()))
    }

    fn mor_key(&self, f: &TreeMor) -> u64 {
        combine(combine(f.src.digest, f.dst.digest), fnv1a_u32s(&f.map))
    }
}

fn read_tree(r: &mut Reader<'_>) -> Result<Arc<OrderedTree>> {
    let n = r.len(4)?;
    let counts = r.u32s(n)?;
    OrderedTree::from_counts(counts)
        .map(Arc::new)
        .map_err(|e| r.err(e.to_string()))
}

/// `∂*`: removes the top level of every tree of height above one.
#[derive(Clone, Copy, Debug, Default)]
pub struct TreePartial {
    cat: TreeCategory,
}

impl TreePartial {
    pub fn new() -> Self {
        Self::default()
    }

    /// A tree `T` with `T* = b'` whose top level gives every top leaf of `b'`
    /// `k` children.
    pub fn extend(b_prime: &OrderedTree, k: u32) -> OrderedTree {
        b_prime.grow(b_prime.height(), |_| k)
    }
}

impl Functor for TreePartial {
    type Dom = TreeCategory;
    type Cod = TreeCategory;

    fn dom(&self) -> &TreeCategory {
        &self.cat
    }
    fn cod(&self) -> &TreeCategory {
        &self.cat
    }
    fn name(&self) -> String {
        "d*".into()
    }
    fn map_obj(&self, a: &Arc<OrderedTree>) -> Arc<OrderedTree> {
        if a.height() == 1 {
            return a.clone();
        }
        Arc::new(a.star().0)
    }
    fn map_mor(&self, f: &TreeMor) -> TreeMor {
        if f.src.height() == 1 {
            return f.clone();
        }
        let (s_star, s_index) = f.src.star();
        let (t_star, t_index) = f.dst.star();
        let map = (0..f.src.len())
            .filter(|&v| s_index[v].is_some())
            .map(|v| t_index[f.map[v] as usize].expect("embeddings preserve height"))
            .collect();
        TreeMor {
            src: Arc::new(s_star),
            dst: Arc::new(t_star),
            map,
        }
    }
    fn frank_lift(&self, a: &Arc<OrderedTree>, b_prime: &Arc<OrderedTree>) -> Result<Arc<OrderedTree>> {
        if a.height() == 1 && b_prime.height() == 1 {
            return Ok(b_prime.clone());
        }
        Ok(Arc::new(Self::extend(b_prime, a.branching().max(1))))
    }
    fn preimage(&self, b_prime: &Arc<OrderedTree>) -> Result<Arc<OrderedTree>> {
        Ok(Arc::new(Self::extend(b_prime, 1)))
    }
}

pub fn tree_category() -> TreeCategory {
    TreeCategory
}

pub fn tree_partial() -> TreePartial {
    TreePartial::new()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(counts: &[u32]) -> Arc<OrderedTree> {
        Arc::new(OrderedTree::from_counts(counts.to_vec()).unwrap())
    }

    #[test]
    fn malformed_counts_are_rejected() {
        assert!(OrderedTree::from_counts(vec![2, 0]).is_err());
        assert!(OrderedTree::from_counts(vec![0, 0]).is_err());
        assert!(OrderedTree::from_counts(vec![]).is_err());
    }

    #[test]
    fn tree_counts_are_catalan() {
        let sizes: Vec<usize> = (1..=7).map(|n| OrderedTree::all_with(n).len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 5, 14, 42, 132]);
    }

    #[test]
    fn small_hom_sizes() {
        let c = tree_category();
        assert_eq!(c.hom_iter(&t(&[0]), &t(&[0])).count(), 1);
        assert_eq!(c.hom_iter(&t(&[1, 0]), &t(&[3, 0, 0, 0])).count(), 3);
        assert_eq!(c.hom_iter(&t(&[0]), &t(&[1, 0])).count(), 0);
        assert_eq!(c.hom_iter(&t(&[2, 0, 0]), &t(&[4, 0, 0, 0, 0])).count(), 6);
    }

    #[test]
    fn embeddings_come_in_lex_order() {
        let c = tree_category();
        let maps: Vec<_> = c
            .hom_iter(&t(&[2, 1, 0, 0]), &t(&[3, 2, 0, 0, 1, 0, 0]))
            .map(|f| f.map)
            .collect();
        let mut sorted = maps.clone();
        sorted.sort();
        assert_eq!(maps, sorted);
        // root ↦ 0; first child needs a grandchild below it
        assert_eq!(
            maps,
            vec![
                vec![0, 1, 2, 4],
                vec![0, 1, 2, 6],
                vec![0, 1, 3, 4],
                vec![0, 1, 3, 6],
                vec![0, 4, 5, 6]
            ]
        );
    }

    #[test]
    fn star_truncates_top_level() {
        let (s, idx) = t(&[2, 1, 0, 0]).star();
        assert_eq!(s.counts(), &[2, 0, 0]);
        assert_eq!(idx, vec![Some(0), Some(1), None, Some(2)]);
        assert_eq!(t(&[0]).star().0.counts(), &[0]);
    }

    #[test]
    fn lift_adds_fans_at_top_leaves() {
        let d = tree_partial();
        let lifted = d.frank_lift(&t(&[2, 0, 0]), &t(&[0])).unwrap();
        assert_eq!(lifted.counts(), &[2, 0, 0]);
        let lifted = d.frank_lift(&t(&[1, 2, 0, 0]), &t(&[2, 1, 0, 1, 0])).unwrap();
        assert_eq!(lifted.counts(), &[2, 1, 2, 0, 0, 1, 2, 0, 0]);
        assert_eq!(d.map_obj(&lifted).counts(), &[2, 1, 0, 1, 0]);
    }
}
