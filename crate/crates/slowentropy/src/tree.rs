//! The cylinder tree of a subset descriptor, with interned nodes.
//!
//! A node is the joint state of all leaf members of the (flattened) union
//! after reading a prefix. Nodes with identical joint state generate identical
//! subtrees, so interning collapses them: a sparse product contributes one
//! node per depth, a regular set at most one node per automaton state.

use num::{BigUint, One};
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::lattice::{PeriodicPoint, Word};
use crate::subsets::{RegularSet, SparseProduct, SubsetDescriptor};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Comp {
    Dead,
    Dfa(u32),
    Sparse,
    /// canonical sorted set of suffix points
    Pts(Vec<PeriodicPoint>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct NodeRepr(Vec<Comp>);

/// Children of a node: `(symbol, child id)`, sorted by symbol.
pub type ChildList = Rc<Vec<(u8, u32)>>;

enum Leaf {
    Dfa(RegularSet),
    Sparse(SparseProduct),
    Pts,
}

/// Interned view of a descriptor's cylinder tree.
pub struct Tree {
    leaves: Vec<Leaf>,
    reprs: Vec<NodeRepr>,
    index: HashMap<NodeRepr, u32>,
    children_cache: HashMap<(u32, u32), ChildList>,
    root: Option<u32>,
    budget: u64,
}

pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;

fn collect_leaves(desc: &SubsetDescriptor, leaves: &mut Vec<Leaf>, roots: &mut Vec<Comp>) {
    match desc {
        SubsetDescriptor::Finite(points) => {
            let mut pts: Vec<PeriodicPoint> = points.iter().map(|p| p.canonical()).collect();
            pts.sort();
            pts.dedup();
            leaves.push(Leaf::Pts);
            roots.push(if pts.is_empty() {
                Comp::Dead
            } else {
                Comp::Pts(pts)
            });
        }
        SubsetDescriptor::Regular(None) => {
            leaves.push(Leaf::Pts);
            roots.push(Comp::Dead);
        }
        SubsetDescriptor::Regular(Some(reg)) => {
            roots.push(Comp::Dfa(reg.start));
            leaves.push(Leaf::Dfa(reg.clone()));
        }
        SubsetDescriptor::Sparse(sp) => {
            leaves.push(Leaf::Sparse(sp.clone()));
            roots.push(Comp::Sparse);
        }
        SubsetDescriptor::Union(ms) => {
            for m in ms {
                collect_leaves(m, leaves, roots);
            }
        }
    }
}

impl Tree {
    pub fn new(desc: &SubsetDescriptor) -> Tree {
        Tree::with_budget(desc, DEFAULT_NODE_BUDGET)
    }

    pub fn with_budget(desc: &SubsetDescriptor, budget: u64) -> Tree {
        let mut leaves = vec![];
        let mut roots = vec![];
        collect_leaves(desc, &mut leaves, &mut roots);
        let mut tree = Tree {
            leaves,
            reprs: vec![],
            index: HashMap::new(),
            children_cache: HashMap::new(),
            root: None,
            budget,
        };
        let root_repr = NodeRepr(roots);
        if root_repr.0.iter().any(|c| !matches!(c, Comp::Dead)) {
            tree.root = Some(tree.intern(root_repr).unwrap());
        }
        tree
    }

    pub fn root(&self) -> Option<u32> {
        self.root
    }

    fn intern(&mut self, repr: NodeRepr) -> Result<u32> {
        if let Some(&id) = self.index.get(&repr) {
            return Ok(id);
        }
        let id = self.reprs.len() as u32;
        if id as u64 >= self.budget {
            return Err(Error::BudgetExceeded {
                budget: self.budget,
            });
        }
        self.reprs.push(repr.clone());
        self.index.insert(repr, id);
        Ok(id)
    }

    /// Children of the node at the given depth, sorted by symbol. Every alive
    /// node has at least one child: descriptors denote closed sets of infinite
    /// sequences.
    pub fn children(&mut self, id: u32, depth: u64) -> Result<ChildList> {
        let cache_depth = if self.depth_sensitive() { depth } else { 0 };
        if let Some(c) = self.children_cache.get(&(id, cache_depth as u32)) {
            return Ok(c.clone());
        }
        let repr = self.reprs[id as usize].clone();
        let mut by_symbol: BTreeMap<u8, Vec<Comp>> = BTreeMap::new();
        let width = repr.0.len();
        for (li, comp) in repr.0.iter().enumerate() {
            let push = |sym: u8, next: Comp, map: &mut BTreeMap<u8, Vec<Comp>>| {
                let entry = map.entry(sym).or_insert_with(|| vec![Comp::Dead; width]);
                entry[li] = next;
            };
            match (comp, &self.leaves[li]) {
                (Comp::Dead, _) => {}
                (Comp::Dfa(q), Leaf::Dfa(reg)) => {
                    for &(sym, to) in &reg.delta[*q as usize] {
                        push(sym, Comp::Dfa(to), &mut by_symbol);
                    }
                }
                (Comp::Sparse, Leaf::Sparse(sp)) => {
                    if sp.generator.is_free(depth) {
                        for sym in 0..sp.branching {
                            push(sym, Comp::Sparse, &mut by_symbol);
                        }
                    } else {
                        push(sp.default_symbol, Comp::Sparse, &mut by_symbol);
                    }
                }
                (Comp::Pts(pts), Leaf::Pts) => {
                    let mut groups: BTreeMap<u8, Vec<PeriodicPoint>> = BTreeMap::new();
                    for p in pts {
                        groups
                            .entry(p.symbol_at(0))
                            .or_default()
                            .push(p.shift(1).canonical());
                    }
                    for (sym, mut suffixes) in groups {
                        suffixes.sort();
                        suffixes.dedup();
                        push(sym, Comp::Pts(suffixes), &mut by_symbol);
                    }
                }
                _ => unreachable!("component kind mismatch"),
            }
        }
        let mut out = Vec::with_capacity(by_symbol.len());
        for (sym, comps) in by_symbol {
            out.push((sym, self.intern(NodeRepr(comps))?));
        }
        let out = Rc::new(out);
        self.children_cache
            .insert((id, cache_depth as u32), out.clone());
        Ok(out)
    }

    fn depth_sensitive(&self) -> bool {
        self.leaves.iter().any(|l| matches!(l, Leaf::Sparse(_)))
    }

    /// Distinct interned nodes created so far.
    pub fn node_count(&self) -> usize {
        self.reprs.len()
    }
}

/// Exact number of depth-`n` cylinders meeting the set (`1` for `n = 0` on
/// nonempty sets, `0` on the empty set).
pub fn prefix_count(desc: &SubsetDescriptor, n: u64) -> BigUint {
    let mut tree = Tree::new(desc);
    let Some(root) = tree.root() else {
        return BigUint::ZERO;
    };
    let mut counts: HashMap<u32, BigUint> = HashMap::new();
    counts.insert(root, BigUint::one());
    for depth in 0..n {
        let mut next: HashMap<u32, BigUint> = HashMap::new();
        let ids: Vec<(u32, BigUint)> = {
            let mut v: Vec<_> = counts.into_iter().collect();
            v.sort_by_key(|&(id, _)| id);
            v
        };
        for (id, mult) in ids {
            for &(_, child) in tree.children(id, depth).expect("count within budget").iter() {
                *next.entry(child).or_default() += &mult;
            }
        }
        counts = next;
    }
    counts.into_values().sum()
}

/// The exact sorted prefix list at depth `n`; errors when it would exceed `cap`.
pub fn enumerate_prefixes(desc: &SubsetDescriptor, n: u64, cap: u64) -> Result<Vec<Word>> {
    let count = prefix_count(desc, n);
    if count > BigUint::from(cap) {
        return Err(Error::EnumerationCap {
            count: count.to_string(),
            depth: n as u32,
            cap,
        });
    }
    let mut tree = Tree::new(desc);
    let Some(root) = tree.root() else {
        return Ok(vec![]);
    };
    let mut out = vec![];
    // iterative DFS carrying the word built so far
    let mut stack: Vec<(u32, u64, Vec<u8>)> = vec![(root, 0, vec![])];
    while let Some((id, depth, word)) = stack.pop() {
        if depth == n {
            out.push(Word(word));
            continue;
        }
        let children = tree.children(id, depth)?;
        // push in reverse so symbols pop in ascending order
        for &(sym, child) in children.iter().rev() {
            let mut w = word.clone();
            w.push(sym);
            stack.push((child, depth + 1, w));
        }
    }
    Ok(out)
}
