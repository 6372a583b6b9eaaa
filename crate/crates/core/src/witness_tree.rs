//! Dynamic witness tree.
//!
//! Names a multiset of equal-length strings so that equal strings share a
//! name. Internal nodes hold a mismatch position; the child edge taken below
//! a node is labeled by the string's byte at that position. The position at
//! the lowest common ancestor of two leaves is a witness of mismatch between
//! their strings.

use crate::error::{Error, Result};

type NodeId = usize;

#[derive(Debug, Clone)]
enum Node {
    Internal {
        /// 1-based mismatch position.
        pos: usize,
        /// Child edges sorted by label.
        children: Vec<(u8, NodeId)>,
        parent: Option<NodeId>,
    },
    Leaf {
        name: u32,
        count: usize,
        repr: Box<[u8]>,
        parent: Option<NodeId>,
    },
    Free,
}

/// Result of one insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inserted {
    pub name: u32,
    /// Byte comparisons made while naming the string.
    pub inspections: usize,
}

#[derive(Debug, Clone)]
pub struct WitnessTree {
    m: usize,
    root: Option<NodeId>,
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    /// Leaf of each name; `None` once the name is dead.
    leaves: Vec<Option<NodeId>>,
    live_strings: usize,
}

impl Default for WitnessTree {
    fn default() -> Self {
        Self::new()
    }
}

impl WitnessTree {
    /// An empty tree; the first inserted string fixes the length.
    pub fn new() -> Self {
        // name 0 is reserved for "unnamed"
        WitnessTree {
            m: 0,
            root: None,
            nodes: Vec::new(),
            free: Vec::new(),
            leaves: vec![None],
            live_strings: 0,
        }
    }

    pub fn with_length(m: usize) -> Self {
        WitnessTree { m, ..Self::new() }
    }

    /// Common string length, 0 while unset.
    pub fn string_len(&self) -> usize {
        self.m
    }

    /// Number of live distinct names.
    pub fn name_count(&self) -> usize {
        self.leaves.iter().filter(|l| l.is_some()).count()
    }

    /// Size of the live string multiset.
    pub fn len(&self) -> usize {
        self.live_strings
    }

    pub fn is_empty(&self) -> bool {
        self.live_strings == 0
    }

    /// Number of allocated tree nodes.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - self.free.len()
    }

    pub fn internal_positions(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Internal { pos, .. } => Some(*pos),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    fn alloc(&mut self, node: Node) -> NodeId {
        if let Some(id) = self.free.pop() {
            self.nodes[id] = node;
            id
        } else {
            self.nodes.push(node);
            self.nodes.len() - 1
        }
    }

    fn parent_of(&self, id: NodeId) -> Option<NodeId> {
        match &self.nodes[id] {
            Node::Internal { parent, .. } | Node::Leaf { parent, .. } => *parent,
            Node::Free => unreachable!("free node in tree"),
        }
    }

    fn set_parent(&mut self, id: NodeId, p: Option<NodeId>) {
        match &mut self.nodes[id] {
            Node::Internal { parent, .. } | Node::Leaf { parent, .. } => *parent = p,
            Node::Free => unreachable!("free node in tree"),
        }
    }

    fn replace_child(&mut self, parent: Option<NodeId>, old: NodeId, new: NodeId) {
        match parent {
            None => self.root = Some(new),
            Some(p) => {
                if let Node::Internal { children, .. } = &mut self.nodes[p] {
                    for (_, c) in children.iter_mut() {
                        if *c == old {
                            *c = new;
                        }
                    }
                }
            }
        }
        self.set_parent(new, parent);
    }

    fn new_leaf(&mut self, s: &[u8], parent: Option<NodeId>) -> (u32, NodeId) {
        let name = self.leaves.len() as u32;
        let id = self.alloc(Node::Leaf {
            name,
            count: 1,
            repr: s.into(),
            parent,
        });
        self.leaves.push(Some(id));
        (name, id)
    }

    /// Walks from the root following `s`. Returns the node where traversal
    /// stopped and the number of bytes inspected.
    fn descend(&self, s: &[u8]) -> (Option<NodeId>, usize) {
        let mut inspections = 0;
        let mut cur = self.root;
        while let Some(id) = cur {
            match &self.nodes[id] {
                Node::Internal { pos, children, .. } => {
                    inspections += 1;
                    let c = s[pos - 1];
                    match children.binary_search_by_key(&c, |&(l, _)| l) {
                        Ok(i) => cur = Some(children[i].1),
                        Err(_) => return (Some(id), inspections),
                    }
                }
                Node::Leaf { .. } => return (Some(id), inspections),
                Node::Free => unreachable!(),
            }
        }
        (None, inspections)
    }

    /// Names `s`, adding it to the multiset.
    pub fn insert(&mut self, s: &[u8]) -> Result<Inserted> {
        if self.m == 0 {
            if s.is_empty() {
                return Err(Error::ZeroDimension);
            }
            self.m = s.len();
        }
        if s.len() != self.m {
            return Err(Error::WidthMismatch {
                expected: self.m,
                found: s.len(),
            });
        }
        self.live_strings += 1;
        let (stop, mut inspections) = self.descend(s);
        let Some(stop) = stop else {
            let (name, id) = self.new_leaf(s, None);
            self.root = Some(id);
            return Ok(Inserted { name, inspections });
        };
        match &self.nodes[stop] {
            Node::Internal { pos, .. } => {
                let label = s[pos - 1];
                let (name, leaf) = self.new_leaf(s, Some(stop));
                if let Node::Internal { children, .. } = &mut self.nodes[stop] {
                    let at = children.partition_point(|&(l, _)| l < label);
                    children.insert(at, (label, leaf));
                }
                Ok(Inserted { name, inspections })
            }
            Node::Leaf {
                repr, name, parent, ..
            } => {
                let mismatch = repr.iter().zip(s).position(|(a, b)| a != b);
                inspections += mismatch.map_or(self.m, |q| q + 1);
                let Some(q) = mismatch else {
                    let name = *name;
                    if let Node::Leaf { count, .. } = &mut self.nodes[stop] {
                        *count += 1;
                    }
                    return Ok(Inserted { name, inspections });
                };
                let (old_label, parent) = (repr[q], *parent);
                let node = self.alloc(Node::Internal {
                    pos: q + 1,
                    children: Vec::new(),
                    parent,
                });
                self.replace_child(parent, stop, node);
                self.set_parent(stop, Some(node));
                let (name, leaf) = self.new_leaf(s, Some(node));
                let mut children = vec![(old_label, stop), (s[q], leaf)];
                children.sort_unstable_by_key(|&(l, _)| l);
                if let Node::Internal { children: c, .. } = &mut self.nodes[node] {
                    *c = children;
                }
                Ok(Inserted { name, inspections })
            }
            Node::Free => unreachable!(),
        }
    }

    /// Name of `s` if present; never modifies the tree.
    pub fn lookup(&self, s: &[u8]) -> (Option<u32>, usize) {
        if s.len() != self.m {
            return (None, 0);
        }
        let (stop, mut inspections) = self.descend(s);
        match stop.map(|id| &self.nodes[id]) {
            Some(Node::Leaf { repr, name, .. }) => {
                let mismatch = repr.iter().zip(s).position(|(a, b)| a != b);
                inspections += mismatch.map_or(self.m, |q| q + 1);
                (mismatch.is_none().then_some(*name), inspections)
            }
            _ => (None, inspections),
        }
    }

    fn leaf_of(&self, name: u32) -> Result<NodeId> {
        self.leaves
            .get(name as usize)
            .copied()
            .flatten()
            .ok_or(Error::DeadName(name))
    }

    /// Removes one string with `name` from the multiset.
    pub fn remove(&mut self, name: u32) -> Result<()> {
        let leaf = self.leaf_of(name)?;
        self.live_strings -= 1;
        let Node::Leaf { count, parent, .. } = &mut self.nodes[leaf] else {
            unreachable!()
        };
        *count -= 1;
        if *count > 0 {
            return Ok(());
        }
        let parent = *parent;
        self.nodes[leaf] = Node::Free;
        self.free.push(leaf);
        self.leaves[name as usize] = None;

        let Some(p) = parent else {
            // the tree is empty; the next string may fix a new length
            self.root = None;
            self.m = 0;
            return Ok(());
        };
        let Node::Internal {
            children,
            parent: grand,
            ..
        } = &mut self.nodes[p]
        else {
            unreachable!()
        };
        children.retain(|&(_, c)| c != leaf);
        if children.len() == 1 {
            // splice out the hanging internal node
            let sibling = children[0].1;
            let grand = *grand;
            self.nodes[p] = Node::Free;
            self.free.push(p);
            self.replace_child(grand, p, sibling);
        }
        Ok(())
    }

    /// Reference count of a live name.
    pub fn count(&self, name: u32) -> Result<usize> {
        match &self.nodes[self.leaf_of(name)?] {
            Node::Leaf { count, .. } => Ok(*count),
            _ => unreachable!(),
        }
    }

    /// The stored representative string of a live name.
    pub fn representative(&self, name: u32) -> Result<&[u8]> {
        match &self.nodes[self.leaf_of(name)?] {
            Node::Leaf { repr, .. } => Ok(repr),
            _ => unreachable!(),
        }
    }

    fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.parent_of(id) {
            d += 1;
            id = p;
        }
        d
    }

    /// A position where the strings named `a` and `b` differ, or `m + 1`
    /// when `a == b`.
    pub fn witness(&self, a: u32, b: u32) -> Result<usize> {
        let (mut x, mut y) = (self.leaf_of(a)?, self.leaf_of(b)?);
        if x == y {
            return Ok(self.m + 1);
        }
        let (mut dx, mut dy) = (self.depth(x), self.depth(y));
        while dx > dy {
            x = self.parent_of(x).unwrap();
            dx -= 1;
        }
        while dy > dx {
            y = self.parent_of(y).unwrap();
            dy -= 1;
        }
        while x != y {
            x = self.parent_of(x).unwrap();
            y = self.parent_of(y).unwrap();
        }
        match &self.nodes[x] {
            Node::Internal { pos, .. } => Ok(*pos),
            _ => unreachable!("LCA of distinct leaves is internal"),
        }
    }
}
