#![allow(dead_code)]

//! Shared oracles for the integration suites: brute-force cover enumeration,
//! coefficient-grid verification, and seeded random trees. Everything here is
//! independent of the dynamic-programming path it checks.

use num::BigRational;
use rand::Rng;
use slowentropy::cover::{ExplicitTree, WeightScheme};
use slowentropy::lattice::PeriodicPoint;
use slowentropy::scalar::{Radical, SRatio};
use slowentropy::subsets::SubsetDescriptor;

/// Every antichain cover value of the subtree below `node`, by explicit
/// enumeration: take a ball here (when usable) or combine one cover per
/// child. Returns `None` when the enumeration exceeds `cap_count`.
pub fn enumerate_cover_values(
    t: &ExplicitTree,
    scheme: &WeightScheme,
    s: SRatio,
    min_level: u64,
    node: usize,
    cap_count: usize,
) -> Option<Vec<Radical>> {
    let floor = scheme.floor_depth(min_level, t.cap).unwrap();
    let d = t.depth[node];
    let mut out = vec![];
    if let Some(order) = scheme.order_at(d, min_level) {
        out.push(Radical::ball_weight(order, s));
    }
    if d < floor {
        let mut combos = vec![Radical::zero()];
        for &c in &t.children[node] {
            let child_covers = enumerate_cover_values(t, scheme, s, min_level, c, cap_count)?;
            let mut next = Vec::with_capacity(combos.len() * child_covers.len());
            for acc in &combos {
                for v in &child_covers {
                    next.push(acc.add(v));
                    if next.len() > cap_count {
                        return None;
                    }
                }
            }
            combos = next;
        }
        out.extend(combos);
    }
    Some(out)
}

/// Exhaustive minimum over all antichain covers.
pub fn brute_force_min_cover(
    t: &ExplicitTree,
    scheme: &WeightScheme,
    s: SRatio,
    min_level: u64,
    cap_count: usize,
) -> Option<Radical> {
    let values = enumerate_cover_values(t, scheme, s, min_level, 0, cap_count)?;
    values.into_iter().min()
}

/// Nodes at usable depths (the candidate balls of the weighted problem).
pub fn usable_nodes(t: &ExplicitTree, scheme: &WeightScheme, min_level: u64) -> Vec<usize> {
    let floor = scheme.floor_depth(min_level, t.cap).unwrap();
    (0..t.children.len())
        .filter(|&i| t.depth[i] <= floor && scheme.order_at(t.depth[i], min_level).is_some())
        .collect()
}

/// Brute force over a fractional coefficient grid: every assignment of
/// coefficients from `grid` to the candidate balls that covers each floor
/// cylinder with total at least one. Returns the minimal objective.
pub fn grid_min_weighted(
    t: &ExplicitTree,
    scheme: &WeightScheme,
    s: SRatio,
    min_level: u64,
    grid: &[BigRational],
) -> Option<Radical> {
    let floor = scheme.floor_depth(min_level, t.cap).unwrap();
    let candidates = usable_nodes(t, scheme, min_level);
    if candidates.len() > 8 {
        return None;
    }
    let leaves: Vec<usize> = (0..t.children.len())
        .filter(|&i| t.depth[i] == floor)
        .collect();
    // ancestor incidence: which candidates cover which leaf
    let covers: Vec<Vec<usize>> = leaves
        .iter()
        .map(|&leaf| {
            let mut on_path = vec![];
            let mut cur = Some(leaf);
            while let Some(i) = cur {
                if let Some(pos) = candidates.iter().position(|&c| c == i) {
                    on_path.push(pos);
                }
                cur = t.parent[i];
            }
            on_path
        })
        .collect();
    let weights: Vec<Radical> = candidates
        .iter()
        .map(|&i| Radical::ball_weight(scheme.order_at(t.depth[i], min_level).unwrap(), s))
        .collect();
    let mut best: Option<Radical> = None;
    let k = grid.len();
    let total = k.pow(candidates.len() as u32);
    let one = BigRational::from_integer(1.into());
    for idx in 0..total {
        let mut rem = idx;
        let coeffs: Vec<&BigRational> = (0..candidates.len())
            .map(|_| {
                let c = &grid[rem % k];
                rem /= k;
                c
            })
            .collect();
        let feasible = covers.iter().all(|on_path| {
            let total: BigRational = on_path.iter().map(|&p| coeffs[p].clone()).sum();
            total >= one
        });
        if !feasible {
            continue;
        }
        let mut obj = Radical::zero();
        for (p, w) in weights.iter().enumerate() {
            if !coeffs[p].numer().eq(&0.into()) {
                obj = obj.add(&w.scale(coeffs[p]));
            }
        }
        best = Some(match best {
            None => obj,
            Some(b) => {
                if obj < b {
                    obj
                } else {
                    b
                }
            }
        });
    }
    best
}

/// Seeded random tree: every branch reaches `depth`, binary splits appear
/// with the given probability until the leaf budget is hit.
pub fn random_tree<R: Rng>(rng: &mut R, depth: u64, split_prob: f64, max_leaves: usize) -> ExplicitTree {
    let mut t = ExplicitTree {
        children: vec![],
        parent: vec![],
        depth: vec![],
        symbol: vec![],
        cap: depth,
    };
    t.push_node(None, 0, 0);
    let mut frontier = vec![0usize];
    let mut leaves = 1usize;
    for d in 0..depth {
        let mut next = vec![];
        for idx in frontier {
            let split = leaves < max_leaves && rng.gen_bool(split_prob);
            let a = t.push_node(Some(idx), d + 1, 0);
            next.push(a);
            if split {
                let b = t.push_node(Some(idx), d + 1, 1);
                next.push(b);
                leaves += 1;
            }
        }
        frontier = next;
    }
    t
}

/// The same tree as a finite descriptor: each floor leaf extended by zeros.
pub fn tree_as_descriptor(t: &ExplicitTree) -> SubsetDescriptor {
    let floor_nodes: Vec<usize> = (0..t.children.len())
        .filter(|&i| t.depth[i] == t.cap)
        .collect();
    let points = floor_nodes
        .iter()
        .map(|&leaf| {
            let word = t.word_of(leaf);
            PeriodicPoint::new(word.0, vec![0]).unwrap()
        })
        .collect();
    SubsetDescriptor::Finite(points)
}
