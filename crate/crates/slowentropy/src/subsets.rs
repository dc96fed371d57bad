//! Finite descriptions of closed subsets of the one-sided shift space:
//! finite point sets, prefix-closed regular languages, sparse products with
//! free symbol choices at a thin set of positions, and finite unions.
//!
//! Descriptors are immutable after construction and expose exact prefix
//! counting (through the cylinder tree), growth classification and a
//! conservative cardinality classification.

use num::rational::Ratio;
use num::{BigRational, BigUint, One, Zero};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::lattice::{Alphabet, PeriodicPoint, Word};
use crate::tree;

/// Trimmed deterministic automaton whose infinite paths form the described
/// set. Every state is reachable from the start and has at least one
/// successor, so every finite path extends to an infinite one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularSet {
    pub start: u32,
    /// per state, sorted by symbol
    pub delta: Vec<Vec<(u8, u32)>>,
}

impl RegularSet {
    /// Build from raw transition data with prefix-closed accepting semantics:
    /// non-accepting states are removed, then dead ends are pruned until every
    /// surviving state extends. Returns `None` when the set is empty.
    pub fn build(
        num_states: u32,
        start: u32,
        transitions: &[(u32, u8, u32)],
        accepting: &[u32],
        alphabet: Alphabet,
    ) -> Result<Option<RegularSet>> {
        if start >= num_states {
            return Err(Error::InvalidDescriptor("start state out of range".into()));
        }
        let acc: BTreeSet<u32> = accepting.iter().copied().collect();
        let mut delta: Vec<BTreeMap<u8, u32>> = vec![BTreeMap::new(); num_states as usize];
        for &(from, sym, to) in transitions {
            if from >= num_states || to >= num_states {
                return Err(Error::InvalidDescriptor(format!(
                    "transition ({from},{sym},{to}) references an unknown state"
                )));
            }
            if !alphabet.contains(sym) {
                return Err(Error::InvalidDescriptor(format!(
                    "transition symbol {sym} outside alphabet"
                )));
            }
            if delta[from as usize].insert(sym, to).is_some() {
                return Err(Error::InvalidDescriptor(format!(
                    "duplicate transition on ({from},{sym}): automaton must be deterministic"
                )));
            }
        }
        let mut alive: Vec<bool> = (0..num_states).map(|q| acc.contains(&q)).collect();
        // prune states with no live successor until stable
        loop {
            let mut changed = false;
            for q in 0..num_states as usize {
                if alive[q] && !delta[q].values().any(|&to| alive[to as usize]) {
                    alive[q] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !alive[start as usize] {
            return Ok(None);
        }
        // restrict to states reachable from start
        let mut reach = vec![false; num_states as usize];
        let mut stack = vec![start];
        reach[start as usize] = true;
        while let Some(q) = stack.pop() {
            for &to in delta[q as usize].values() {
                if alive[to as usize] && !reach[to as usize] {
                    reach[to as usize] = true;
                    stack.push(to);
                }
            }
        }
        let mut remap = vec![u32::MAX; num_states as usize];
        let mut next = 0u32;
        for q in 0..num_states as usize {
            if alive[q] && reach[q] {
                remap[q] = next;
                next += 1;
            }
        }
        let mut compact = vec![vec![]; next as usize];
        for q in 0..num_states as usize {
            if remap[q] == u32::MAX {
                continue;
            }
            for (&sym, &to) in &delta[q] {
                if remap[to as usize] != u32::MAX {
                    compact[remap[q] as usize].push((sym, remap[to as usize]));
                }
            }
        }
        Ok(Some(RegularSet {
            start: remap[start as usize],
            delta: compact,
        }))
    }

    pub fn num_states(&self) -> u32 {
        self.delta.len() as u32
    }

    /// Full shift on `k` symbols: one state, one loop per symbol.
    pub fn full_shift(alphabet: Alphabet) -> RegularSet {
        RegularSet {
            start: 0,
            delta: vec![alphabet.symbols().map(|s| (s, 0)).collect()],
        }
    }

    /// States reachable from the start by words of length exactly `i`.
    pub fn states_after(&self, i: u64) -> Vec<u32> {
        let mut cur: BTreeSet<u32> = [self.start].into();
        for _ in 0..i {
            let mut next = BTreeSet::new();
            for &q in &cur {
                for &(_, to) in &self.delta[q as usize] {
                    next.insert(to);
                }
            }
            cur = next;
        }
        cur.into_iter().collect()
    }
}

/// Generator for the free positions of a sparse product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FreeGenerator {
    /// Positions `base^k - shift` for all `base^k >= shift` (shift arises from
    /// shift images; plain products use shift 0).
    Powers { base: u32, #[serde(default)] shift: u64 },
    /// An explicit finite strictly increasing list.
    Explicit { positions: Vec<u64> },
}

impl FreeGenerator {
    pub fn validate(&self) -> Result<()> {
        match self {
            FreeGenerator::Powers { base, .. } => {
                if *base < 2 {
                    return Err(Error::InvalidDescriptor(
                        "powers generator needs base >= 2".into(),
                    ));
                }
            }
            FreeGenerator::Explicit { positions } => {
                if positions.windows(2).any(|w| w[0] >= w[1]) {
                    return Err(Error::InvalidDescriptor(
                        "explicit free positions must be strictly increasing".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn is_free(&self, pos: u64) -> bool {
        match self {
            FreeGenerator::Powers { base, shift } => {
                let target = pos + shift;
                if target == 0 {
                    return false;
                }
                let mut p = 1u64;
                loop {
                    if p == target {
                        return true;
                    }
                    if p > target {
                        return false;
                    }
                    match p.checked_mul(*base as u64) {
                        Some(next) => p = next,
                        None => return false,
                    }
                }
            }
            FreeGenerator::Explicit { positions } => positions.binary_search(&pos).is_ok(),
        }
    }

    /// Number of free positions strictly below `n`.
    pub fn count_below(&self, n: u64) -> u64 {
        match self {
            FreeGenerator::Powers { base, shift } => {
                let mut count = 0;
                let mut p = 1u64;
                loop {
                    if p >= shift + n {
                        return count;
                    }
                    if p >= *shift {
                        count += 1;
                    }
                    match p.checked_mul(*base as u64) {
                        Some(next) => p = next,
                        None => return count,
                    }
                }
            }
            FreeGenerator::Explicit { positions } => {
                positions.partition_point(|&f| f < n) as u64
            }
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, FreeGenerator::Powers { .. })
    }

    fn shifted(&self, i: u64) -> FreeGenerator {
        match self {
            FreeGenerator::Powers { base, shift } => FreeGenerator::Powers {
                base: *base,
                shift: shift + i,
            },
            FreeGenerator::Explicit { positions } => FreeGenerator::Explicit {
                positions: positions
                    .iter()
                    .filter(|&&f| f >= i)
                    .map(|&f| f - i)
                    .collect(),
            },
        }
    }
}

/// Compact set with free symbol choices `{0, .., branching-1}` at the
/// generator's positions and a fixed default symbol elsewhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseProduct {
    pub generator: FreeGenerator,
    pub branching: u8,
    pub default_symbol: u8,
}

impl SparseProduct {
    pub fn new(generator: FreeGenerator, branching: u8, default_symbol: u8) -> Result<Self> {
        generator.validate()?;
        if branching < 2 {
            return Err(Error::InvalidDescriptor(
                "sparse product branching must be at least 2".into(),
            ));
        }
        Ok(SparseProduct {
            generator,
            branching,
            default_symbol,
        })
    }
}

/// A closed subset of the one-sided shift space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubsetDescriptor {
    Finite(Vec<PeriodicPoint>),
    Regular(Option<RegularSet>),
    Sparse(SparseProduct),
    Union(Vec<SubsetDescriptor>),
}

/// Growth class of the prefix-counting function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GrowthClass {
    /// `p(n) = Theta(n^t)` up to slowly varying factors; `t` is exact for
    /// regular sets and a close rational witness otherwise.
    PolynomialDegree { t_num: u64, t_den: u64 },
    Superpolynomial,
    /// `limsup (1/n) log p(n) = rate > 0`.
    Exponential { rate: f64 },
}

impl GrowthClass {
    pub fn degree(t: Ratio<u64>) -> Self {
        GrowthClass::PolynomialDegree {
            t_num: *t.numer(),
            t_den: *t.denom(),
        }
    }

    pub fn degree_value(&self) -> Option<f64> {
        match self {
            GrowthClass::PolynomialDegree { t_num, t_den } => {
                Some(*t_num as f64 / *t_den as f64)
            }
            _ => None,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            GrowthClass::PolynomialDegree { .. } => 0,
            GrowthClass::Superpolynomial => 1,
            GrowthClass::Exponential { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CardinalityClass {
    Finite,
    CountablyInfinite,
    Unknown,
    Uncountable,
}

/// Exact rational Perron lower-bound certificate: a positive rational vector
/// `x` with `A x >= lambda x` entrywise, so the spectral radius is at least
/// `lambda`.
#[derive(Debug, Clone)]
pub struct PerronCertificate {
    pub lambda_lower: BigRational,
    pub vector: Vec<BigRational>,
}

/// Best rational approximation of `x` with denominator at most `max_den`.
pub fn rational_approx(x: f64, max_den: u64) -> Ratio<u64> {
    if x <= 0.0 {
        return Ratio::new(0, 1);
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0u64, 1u64, 1u64, 0u64);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a >= u64::MAX as f64 {
            break;
        }
        let a_int = a as u64;
        let p2 = match a_int.checked_mul(p1).and_then(|t| t.checked_add(p0)) {
            Some(v) => v,
            None => break,
        };
        let q2 = match a_int.checked_mul(q1).and_then(|t| t.checked_add(q0)) {
            Some(v) => v,
            None => break,
        };
        if q2 > max_den {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        Ratio::new(x.round() as u64, 1)
    } else {
        Ratio::new(p1, q1)
    }
}

struct SccInfo {
    /// component index per state
    comp: Vec<u32>,
    /// number of states and internal edges per component
    sizes: Vec<(u32, u32)>,
}

fn strongly_connected_components(reg: &RegularSet) -> SccInfo {
    // iterative Tarjan
    let n = reg.delta.len();
    let mut index = vec![u32::MAX; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = vec![];
    let mut comp = vec![u32::MAX; n];
    let mut next_index = 0u32;
    let mut comp_count = 0u32;
    let mut call: Vec<(u32, usize)> = vec![];
    for root in 0..n as u32 {
        if index[root as usize] != u32::MAX {
            continue;
        }
        call.push((root, 0));
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        while let Some(&mut (v, ref mut ei)) = call.last_mut() {
            if *ei < reg.delta[v as usize].len() {
                let (_, w) = reg.delta[v as usize][*ei];
                *ei += 1;
                if index[w as usize] == u32::MAX {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent as usize] = low[parent as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w as usize] = false;
                        comp[w as usize] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    let mut sizes = vec![(0u32, 0u32); comp_count as usize];
    for (q, edges) in reg.delta.iter().enumerate() {
        sizes[comp[q] as usize].0 += 1;
        for &(_, to) in edges {
            if comp[to as usize] == comp[q] {
                sizes[comp[q] as usize].1 += 1;
            }
        }
    }
    SccInfo { comp, sizes }
}

/// Spectral radius of the transition count structure by power iteration on
/// word counts, with an exact rational Perron lower-bound certificate.
pub fn spectral_radius(reg: &RegularSet) -> (f64, Option<PerronCertificate>) {
    let n = reg.delta.len();
    let mut v: Vec<BigUint> = vec![BigUint::one(); n];
    let mut prev_ratio = 0f64;
    let mut ratio = 0f64;
    for step in 0..256 {
        let mut next = vec![BigUint::zero(); n];
        for (q, edges) in reg.delta.iter().enumerate() {
            for &(_, to) in edges {
                next[to as usize] += &v[q];
            }
        }
        let total_prev: BigUint = v.iter().sum();
        let total_next: BigUint = next.iter().sum();
        if total_next.is_zero() {
            return (0.0, None);
        }
        ratio = big_ratio_f64(&total_next, &total_prev);
        if step > 8 && (ratio - prev_ratio).abs() <= 1e-9 {
            v = next;
            break;
        }
        prev_ratio = ratio;
        // rescale to keep numbers small once they get large
        v = next;
        let bits = v.iter().map(|x| x.bits()).max().unwrap_or(0);
        if bits > 512 {
            v = v.iter().map(|x| x >> (bits - 64)).collect();
            for x in v.iter_mut() {
                if x.is_zero() {
                    *x = BigUint::one();
                }
            }
        }
    }
    // rational certificate from the iterate
    let denom: BigUint = BigUint::from(1u64) << 20;
    let maxv = v.iter().max().cloned().unwrap_or_else(BigUint::one);
    let x: Vec<BigRational> = v
        .iter()
        .map(|e| {
            let scaled: BigUint = (e * &denom) / &maxv;
            let scaled = if scaled.is_zero() { BigUint::one() } else { scaled };
            BigRational::new(scaled.into(), denom.clone().into())
        })
        .collect();
    let mut ax = vec![BigRational::zero(); n];
    for (q, edges) in reg.delta.iter().enumerate() {
        for &(_, to) in edges {
            let t = ax[to as usize].clone() + &x[q];
            ax[to as usize] = t;
        }
    }
    let lambda = (0..n)
        .map(|q| &ax[q] / &x[q])
        .min()
        .unwrap_or_else(BigRational::zero);
    (
        ratio,
        Some(PerronCertificate {
            lambda_lower: lambda,
            vector: x,
        }),
    )
}

fn big_ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    BigRational::new(a.clone().into(), b.clone().into())
        .to_f64()
        .unwrap_or(f64::INFINITY)
}

fn regular_growth(reg: &RegularSet) -> GrowthClass {
    let scc = strongly_connected_components(reg);
    let mut rich = false;
    let mut cyclic = vec![false; scc.sizes.len()];
    for (i, &(states, edges)) in scc.sizes.iter().enumerate() {
        if edges > states {
            rich = true;
        }
        cyclic[i] = edges >= states && edges > 0;
    }
    if rich {
        let (rho, _) = spectral_radius(reg);
        return GrowthClass::Exponential { rate: rho.ln() };
    }
    // condensation DAG; degree = max number of cyclic components threaded - 1
    let mut best = vec![-1i64; scc.sizes.len()];
    fn dfs(
        c: u32,
        reg: &RegularSet,
        scc: &SccInfo,
        cyclic: &[bool],
        best: &mut Vec<i64>,
    ) -> i64 {
        if best[c as usize] >= 0 {
            return best[c as usize];
        }
        best[c as usize] = 0; // temporary; DAG so no true cycles across comps
        let mut m = 0i64;
        for q in 0..reg.delta.len() {
            if scc.comp[q] != c {
                continue;
            }
            for &(_, to) in &reg.delta[q] {
                let tc = scc.comp[to as usize];
                if tc != c {
                    m = m.max(dfs(tc, reg, scc, cyclic, best));
                }
            }
        }
        let val = m + if cyclic[c as usize] { 1 } else { 0 };
        best[c as usize] = val;
        val
    }
    let chains = dfs(scc.comp[reg.start as usize], reg, &scc, &cyclic, &mut best);
    let degree = (chains - 1).max(0) as u64;
    GrowthClass::degree(Ratio::new(degree, 1))
}

impl SubsetDescriptor {
    pub fn finite(points: Vec<PeriodicPoint>) -> SubsetDescriptor {
        SubsetDescriptor::Finite(points)
    }

    pub fn singleton(point: PeriodicPoint) -> SubsetDescriptor {
        SubsetDescriptor::Finite(vec![point])
    }

    pub fn union(members: Vec<SubsetDescriptor>) -> SubsetDescriptor {
        let mut flat = vec![];
        for m in members {
            match m {
                SubsetDescriptor::Union(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        SubsetDescriptor::Union(flat)
    }

    pub fn is_empty_set(&self) -> bool {
        match self {
            SubsetDescriptor::Finite(pts) => pts.is_empty(),
            SubsetDescriptor::Regular(core) => core.is_none(),
            SubsetDescriptor::Sparse(_) => false,
            SubsetDescriptor::Union(ms) => ms.iter().all(|m| m.is_empty_set()),
        }
    }

    pub fn validate(&self, alphabet: Alphabet) -> Result<()> {
        match self {
            SubsetDescriptor::Finite(points) => {
                for pt in points {
                    if pt
                        .preperiod
                        .iter()
                        .chain(pt.period.iter())
                        .any(|&s| !alphabet.contains(s))
                    {
                        return Err(Error::InvalidDescriptor(
                            "point symbol outside alphabet".into(),
                        ));
                    }
                }
                Ok(())
            }
            SubsetDescriptor::Regular(_) => Ok(()),
            SubsetDescriptor::Sparse(sp) => {
                if sp.branching > alphabet.k {
                    return Err(Error::InvalidDescriptor(
                        "sparse branching exceeds alphabet size".into(),
                    ));
                }
                if !alphabet.contains(sp.default_symbol) {
                    return Err(Error::InvalidDescriptor(
                        "sparse default symbol outside alphabet".into(),
                    ));
                }
                Ok(())
            }
            SubsetDescriptor::Union(ms) => ms.iter().try_for_each(|m| m.validate(alphabet)),
        }
    }

    /// Exact number of depth-`n` cylinders meeting the set.
    pub fn prefix_count(&self, n: u64) -> BigUint {
        tree::prefix_count(self, n)
    }

    /// The exact prefix set at depth `n`, lexicographically sorted.
    pub fn enumerate_prefixes(&self, n: u64, cap: u64) -> Result<Vec<Word>> {
        tree::enumerate_prefixes(self, n, cap)
    }

    pub fn growth_class(&self) -> Result<GrowthClass> {
        match self {
            SubsetDescriptor::Finite(_) => Ok(GrowthClass::degree(Ratio::new(0, 1))),
            SubsetDescriptor::Regular(None) => Ok(GrowthClass::degree(Ratio::new(0, 1))),
            SubsetDescriptor::Regular(Some(reg)) => Ok(regular_growth(reg)),
            SubsetDescriptor::Sparse(sp) => match &sp.generator {
                FreeGenerator::Powers { base, .. } => {
                    let t = (sp.branching as f64).ln() / (*base as f64).ln();
                    Ok(GrowthClass::degree(rational_approx(t, 1 << 30)))
                }
                FreeGenerator::Explicit { .. } => Ok(GrowthClass::degree(Ratio::new(0, 1))),
            },
            SubsetDescriptor::Union(ms) => {
                let mut best: Option<GrowthClass> = None;
                for m in ms {
                    let g = m.growth_class()?;
                    best = Some(match best {
                        None => g,
                        Some(b) => {
                            if g.rank() > b.rank() {
                                g
                            } else if g.rank() < b.rank() {
                                b
                            } else {
                                match (&g, &b) {
                                    (
                                        GrowthClass::PolynomialDegree { .. },
                                        GrowthClass::PolynomialDegree { .. },
                                    ) => {
                                        if g.degree_value() > b.degree_value() {
                                            g
                                        } else {
                                            b
                                        }
                                    }
                                    (
                                        GrowthClass::Exponential { rate: ra },
                                        GrowthClass::Exponential { rate: rb },
                                    ) => GrowthClass::Exponential { rate: ra.max(*rb) },
                                    _ => b,
                                }
                            }
                        }
                    });
                }
                best.ok_or_else(|| Error::UnknownGrowth("empty union".into()))
            }
        }
    }

    pub fn cardinality_class(&self) -> CardinalityClass {
        match self {
            SubsetDescriptor::Finite(_) => CardinalityClass::Finite,
            SubsetDescriptor::Regular(None) => CardinalityClass::Finite,
            SubsetDescriptor::Regular(Some(reg)) => match regular_growth(reg) {
                GrowthClass::Exponential { .. } => CardinalityClass::Uncountable,
                GrowthClass::PolynomialDegree { t_num: 0, .. } => CardinalityClass::Finite,
                // polynomial growth: every component is a simple cycle, so each
                // infinite path is eventually periodic and the set is countable
                GrowthClass::PolynomialDegree { .. } => CardinalityClass::CountablyInfinite,
                GrowthClass::Superpolynomial => CardinalityClass::Unknown,
            },
            SubsetDescriptor::Sparse(sp) => {
                if sp.generator.is_infinite() {
                    CardinalityClass::Uncountable
                } else {
                    CardinalityClass::Finite
                }
            }
            SubsetDescriptor::Union(ms) => {
                let mut worst = CardinalityClass::Finite;
                for m in ms {
                    let c = m.cardinality_class();
                    if c == CardinalityClass::Uncountable {
                        return CardinalityClass::Uncountable;
                    }
                    worst = worst.max(c);
                }
                worst
            }
        }
    }

    pub fn is_countable(&self) -> bool {
        matches!(
            self.cardinality_class(),
            CardinalityClass::Finite | CardinalityClass::CountablyInfinite
        )
    }

    /// Descriptor of the shifted set `sigma^i Z`.
    pub fn shift_image(&self, i: u64) -> SubsetDescriptor {
        match self {
            SubsetDescriptor::Finite(points) => {
                SubsetDescriptor::Finite(points.iter().map(|p| p.shift(i)).collect())
            }
            SubsetDescriptor::Regular(None) => SubsetDescriptor::Regular(None),
            SubsetDescriptor::Regular(Some(reg)) => {
                let starts = reg.states_after(i);
                let members: Vec<SubsetDescriptor> = starts
                    .into_iter()
                    .map(|q| {
                        SubsetDescriptor::Regular(Some(RegularSet {
                            start: q,
                            delta: reg.delta.clone(),
                        }))
                    })
                    .collect();
                if members.len() == 1 {
                    members.into_iter().next().unwrap()
                } else {
                    SubsetDescriptor::Union(members)
                }
            }
            SubsetDescriptor::Sparse(sp) => {
                // choices at dropped positions do not affect the shifted tail,
                // so the union over them collapses to a single sparse product
                SubsetDescriptor::Sparse(SparseProduct {
                    generator: sp.generator.shifted(i),
                    branching: sp.branching,
                    default_symbol: sp.default_symbol,
                })
            }
            SubsetDescriptor::Union(ms) => {
                SubsetDescriptor::Union(ms.iter().map(|m| m.shift_image(i)).collect())
            }
        }
    }

    /// `limsup (1/n) log p(n)`: log spectral radius for exponential regular
    /// sets, zero for polynomial classes.
    pub fn bowen_entropy(&self) -> Result<(f64, Option<PerronCertificate>)> {
        match self {
            SubsetDescriptor::Regular(Some(reg)) => match regular_growth(reg) {
                GrowthClass::Exponential { .. } => {
                    let (rho, cert) = spectral_radius(reg);
                    Ok((rho.ln(), cert))
                }
                _ => Ok((0.0, None)),
            },
            SubsetDescriptor::Union(ms) => {
                let mut best = (0.0f64, None);
                for m in ms {
                    let (h, cert) = m.bowen_entropy()?;
                    if h > best.0 {
                        best = (h, cert);
                    }
                }
                Ok(best)
            }
            _ => Ok((0.0, None)),
        }
    }
}

/// Benchmark constructors shared by tests and the bundled config.
pub mod benchmarks {
    use super::*;

    /// `{0^inf}` as a finite descriptor.
    pub fn singleton_zero() -> SubsetDescriptor {
        SubsetDescriptor::singleton(PeriodicPoint::constant(0))
    }

    /// Closure of `{0^a 1^inf : a >= 0}`: the `0*1*` prefix automaton.
    pub fn zeros_then_ones(alphabet: Alphabet) -> SubsetDescriptor {
        let reg = RegularSet::build(
            2,
            0,
            &[(0, 0, 0), (0, 1, 1), (1, 1, 1)],
            &[0, 1],
            alphabet,
        )
        .unwrap()
        .unwrap();
        SubsetDescriptor::Regular(Some(reg))
    }

    /// Three chained loops `0*1*2*` (needs k >= 3).
    pub fn three_blocks(alphabet: Alphabet) -> SubsetDescriptor {
        let reg = RegularSet::build(
            3,
            0,
            &[
                (0, 0, 0),
                (0, 1, 1),
                (0, 2, 2),
                (1, 1, 1),
                (1, 2, 2),
                (2, 2, 2),
            ],
            &[0, 1, 2],
            alphabet,
        )
        .unwrap()
        .unwrap();
        SubsetDescriptor::Regular(Some(reg))
    }

    pub fn full_shift(alphabet: Alphabet) -> SubsetDescriptor {
        SubsetDescriptor::Regular(Some(RegularSet::full_shift(alphabet)))
    }

    /// Golden-mean subshift: no two adjacent 1s.
    pub fn golden_mean(alphabet: Alphabet) -> SubsetDescriptor {
        let reg = RegularSet::build(
            2,
            0,
            &[(0, 0, 0), (0, 1, 1), (1, 0, 0)],
            &[0, 1],
            alphabet,
        )
        .unwrap()
        .unwrap();
        SubsetDescriptor::Regular(Some(reg))
    }

    /// Sparse product free at powers of two with the given branching.
    pub fn sparse_powers_of_two(branching: u8) -> SubsetDescriptor {
        SubsetDescriptor::Sparse(
            SparseProduct::new(FreeGenerator::Powers { base: 2, shift: 0 }, branching, 0)
                .unwrap(),
        )
    }

    /// Sparse product free at powers of `base`.
    pub fn sparse_powers(base: u32, branching: u8) -> SubsetDescriptor {
        SubsetDescriptor::Sparse(
            SparseProduct::new(FreeGenerator::Powers { base, shift: 0 }, branching, 0).unwrap(),
        )
    }
}
