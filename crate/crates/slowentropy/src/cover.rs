//! Cover optimization on cylinder trees.
//!
//! All cover quantities reduce to the same optimization: choose tree nodes
//! (each standing for a cylinder, hence for a Bowen ball of some order) so
//! that every depth-capped branch passes through a chosen node, minimizing
//! the sum of `(1/order)^s`. On a tree the optimum is attained by an
//! antichain and bottom-up dynamic programming is exact; the weighted variant
//! with fractional coefficients has the same optimum because the covering
//! constraints form a laminar family, certified on explicit instances by a
//! matching feasible packing.

use crate::error::{Error, Result};
use crate::lattice::{ActionSpec, BowenBall, CylinderSet, Radius, Word};
use crate::scalar::{CoverScalar, SRatio};
use crate::subsets::SubsetDescriptor;
use crate::tree::Tree;

/// How depths map to ball orders (and so to weights).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightScheme {
    /// Bowen balls at radius `eps`: a depth-`m` cylinder is a ball of order
    /// `m - eps_order + 1`; `min_level` is the minimum order `N`.
    Bowen { eps_order: u64 },
    /// Bowen balls of the power action `sigma^power`: only depths
    /// `power*(k-1) + eps_order` are balls, of order `k`.
    PowerBowen { power: u64, eps_order: u64 },
    /// Covers weighted by diameter: depth `m` weighs `(1/(m+1))^s`;
    /// `min_level` is the minimum depth from the diameter bound.
    Hausdorff,
    /// Generator-cover families: depth `m` weighs `(1/m)^s`; `min_level` is
    /// the minimum depth `k`.
    BowenCover,
}

impl WeightScheme {
    pub fn bowen(action: &ActionSpec, eps: Radius) -> Result<WeightScheme> {
        if !action.is_one_sided_line() {
            return Err(Error::UnsupportedAction);
        }
        Ok(WeightScheme::Bowen {
            eps_order: action.cylinder_depth_for_radius(eps)?,
        })
    }

    pub fn power_bowen(action: &ActionSpec, power: u64, eps: Radius) -> Result<WeightScheme> {
        if !action.is_one_sided_line() {
            return Err(Error::UnsupportedAction);
        }
        let eps_order = action.cylinder_depth_for_radius(eps)?;
        if eps_order < power {
            return Err(Error::DisconnectedWindows {
                power: power as u32,
                resolution: eps_order as u32,
            });
        }
        Ok(WeightScheme::PowerBowen { power, eps_order })
    }

    /// Ball order of a depth-`m` cylinder, if that depth is usable under the
    /// scheme with the given minimum level.
    pub fn order_at(&self, depth: u64, min_level: u64) -> Option<u64> {
        match self {
            WeightScheme::Bowen { eps_order } => {
                let order = (depth + 1).checked_sub(*eps_order)?;
                (order >= min_level.max(1)).then_some(order)
            }
            WeightScheme::PowerBowen { power, eps_order } => {
                let rel = depth.checked_sub(*eps_order)?;
                if rel % power != 0 {
                    return None;
                }
                let order = rel / power + 1;
                (order >= min_level.max(1)).then_some(order)
            }
            WeightScheme::Hausdorff => (depth >= min_level).then_some(depth + 1),
            WeightScheme::BowenCover => (depth >= min_level.max(1)).then_some(depth),
        }
    }

    /// Smallest usable depth.
    pub fn min_depth(&self, min_level: u64) -> u64 {
        match self {
            WeightScheme::Bowen { eps_order } => min_level.max(1) + eps_order - 1,
            WeightScheme::PowerBowen { power, eps_order } => {
                power * (min_level.max(1) - 1) + eps_order
            }
            WeightScheme::Hausdorff => min_level,
            WeightScheme::BowenCover => min_level.max(1),
        }
    }

    /// Deepest usable depth not exceeding `cap`; the DP bottoms out there, so
    /// the cap must admit at least one usable depth.
    pub fn floor_depth(&self, min_level: u64, cap: u64) -> Result<u64> {
        let min_depth = self.min_depth(min_level);
        if cap < min_depth {
            return Err(Error::CapBelowMinDepth {
                cap: cap as u32,
                min_depth: min_depth as u32,
            });
        }
        Ok(match self {
            WeightScheme::PowerBowen { power, eps_order } => {
                eps_order + ((cap - eps_order) / power) * power
            }
            _ => cap,
        })
    }

    pub fn describe(&self) -> String {
        match self {
            WeightScheme::Bowen { eps_order } => format!("bowen(n_eps={eps_order})"),
            WeightScheme::PowerBowen { power, eps_order } => {
                format!("power-bowen(m={power},n_eps={eps_order})")
            }
            WeightScheme::Hausdorff => "hausdorff".into(),
            WeightScheme::BowenCover => "bowen-cover".into(),
        }
    }
}

/// A finite-depth cover optimum with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct CoverValue<S> {
    pub value: S,
    pub s: SRatio,
    pub min_level: u64,
    pub cap_depth: u64,
    pub scheme: String,
}

/// Exact optimal cover cost over the depth-capped tree.
///
/// Bottom-up over interned nodes: a node either becomes one ball (when its
/// depth is usable) or defers to its children; ties prefer the shallower
/// ball, so optima are deterministic.
pub fn cover_dp<S: CoverScalar>(
    tree: &mut Tree,
    scheme: &WeightScheme,
    s: SRatio,
    min_level: u64,
    cap: u64,
) -> Result<S> {
    let Some(root) = tree.root() else {
        return Ok(S::zero());
    };
    let floor = scheme.floor_depth(min_level, cap)?;
    let mut levels: Vec<Vec<u32>> = Vec::with_capacity(floor as usize + 1);
    levels.push(vec![root]);
    for depth in 0..floor {
        let mut next: Vec<u32> = vec![];
        for &id in &levels[depth as usize] {
            for &(_, c) in tree.children(id, depth)?.iter() {
                next.push(c);
            }
        }
        next.sort_unstable();
        next.dedup();
        levels.push(next);
    }
    let floor_weight = S::ball_weight(
        scheme.order_at(floor, min_level).expect("floor is usable"),
        s,
    );
    let mut below: std::collections::HashMap<u32, S> = levels[floor as usize]
        .iter()
        .map(|&id| (id, floor_weight.clone()))
        .collect();
    for depth in (0..floor).rev() {
        let mut here = std::collections::HashMap::new();
        for &id in &levels[depth as usize] {
            let mut sum = S::zero();
            for &(_, c) in tree.children(id, depth)?.iter() {
                sum = sum + below[&c].clone();
            }
            let value = match scheme.order_at(depth, min_level) {
                Some(order) => {
                    let w = S::ball_weight(order, s);
                    if w <= sum {
                        w
                    } else {
                        sum
                    }
                }
                None => sum,
            };
            here.insert(id, value);
        }
        below = here;
    }
    Ok(below[&root].clone())
}

/// `M(Z, s, N, eps)` restricted to ball orders `N <= n <= cap - n(eps) + 1`.
pub fn caratheodory_value<S: CoverScalar>(
    action: &ActionSpec,
    desc: &SubsetDescriptor,
    s: SRatio,
    min_order: u64,
    eps: Radius,
    cap: u64,
) -> Result<CoverValue<S>> {
    let scheme = WeightScheme::bowen(action, eps)?;
    let mut tree = Tree::new(desc);
    let value = cover_dp(&mut tree, &scheme, s, min_order, cap)?;
    Ok(CoverValue {
        value,
        s,
        min_level: min_order,
        cap_depth: cap,
        scheme: scheme.describe(),
    })
}

/// `W(Z, s, N, eps)` over the same restricted ball family with nonnegative
/// fractional coefficients. The covering constraints form a laminar family,
/// so the fractional optimum coincides with the 0/1 optimum and the same
/// dynamic program computes it; explicit instances can be certified through
/// [`primal_dual_certificates`].
pub fn weighted_value<S: CoverScalar>(
    action: &ActionSpec,
    desc: &SubsetDescriptor,
    s: SRatio,
    min_order: u64,
    eps: Radius,
    cap: u64,
) -> Result<CoverValue<S>> {
    caratheodory_value(action, desc, s, min_order, eps, cap)
}

/// Hausdorff cover value at diameter bound `delta` (mapped to a minimum depth
/// via `diam C_m = 1/(m+1)`), capped at depth `cap`.
pub fn hausdorff_value<S: CoverScalar>(
    action: &ActionSpec,
    desc: &SubsetDescriptor,
    s: SRatio,
    delta: Radius,
    cap: u64,
) -> Result<CoverValue<S>> {
    if !action.is_one_sided_line() {
        return Err(Error::UnsupportedAction);
    }
    let min_depth = action.cylinder_depth_for_radius(delta)?;
    let mut tree = Tree::new(desc);
    let value = cover_dp(&mut tree, &WeightScheme::Hausdorff, s, min_depth, cap)?;
    Ok(CoverValue {
        value,
        s,
        min_level: min_depth,
        cap_depth: cap,
        scheme: "hausdorff".into(),
    })
}

/// Generator-cover value: cylinder covers with depths in `[k, cap]`, each
/// depth-`m` member weighing `(1/m)^s`.
pub fn bowen_cover_slow_value<S: CoverScalar>(
    desc: &SubsetDescriptor,
    s: SRatio,
    k: u64,
    cap: u64,
) -> Result<CoverValue<S>> {
    let mut tree = Tree::new(desc);
    let value = cover_dp(&mut tree, &WeightScheme::BowenCover, s, k, cap)?;
    Ok(CoverValue {
        value,
        s,
        min_level: k,
        cap_depth: cap,
        scheme: "bowen-cover".into(),
    })
}

// ---------------------------------------------------------------------------
// limit classification and critical exponents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub enum LimitClass {
    Zero,
    Infinite,
    Finite(f64),
    Undetermined { lo: f64, hi: f64 },
}

#[derive(Debug, Clone)]
pub struct ClassifyEvidence {
    /// `(min_level, cap, value)` along the schedule
    pub points: Vec<(u64, u64, f64)>,
    /// which rule decided the class
    pub rule: String,
    pub class: LimitClass,
}

/// Two-regime probe schedule.
///
/// The defining limit takes the cap to infinity before the minimum order, and
/// no single ladder can witness both directions at desk scale: thin sets need
/// the cap to run far ahead of the order (their branch remainders must decay),
/// while sets whose optimal covers sit at the minimum order only reveal growth
/// when the order runs ahead and the cap never binds. `pairs` is the
/// cap-driven diagonal and `extended` the order-driven continuation at the
/// final cap; vanishing along the diagonal is the sound direction for `Zero`
/// (capped values bound the true infimum from above at each order), growth
/// along the extension is the evidence for `Infinite`.
#[derive(Debug, Clone)]
pub struct ClassifySchedule {
    pub pairs: Vec<(u64, u64)>,
    pub extended: Vec<(u64, u64)>,
    pub zero_tol: f64,
    pub inf_tol: f64,
    pub slope_tol: f64,
}

impl ClassifySchedule {
    /// Diagonal with caps doubling and orders trailing near the cube root of
    /// the cap, extended by order doublings at the final cap.
    pub fn default_ladder(max_cap: u64) -> ClassifySchedule {
        let mut pairs = vec![];
        let mut d = 64u64;
        let mut i = 0u32;
        while d <= max_cap {
            pairs.push((1u64 << (i / 2 + 1), d));
            d *= 2;
            i += 1;
        }
        if pairs.is_empty() {
            pairs.push((2, max_cap));
        }
        let last_cap = pairs.last().unwrap().1;
        let mut extended = vec![];
        let mut n = pairs.last().unwrap().0 * 2;
        while n <= 256 && n < last_cap / 4 {
            extended.push((n, last_cap));
            n *= 2;
        }
        ClassifySchedule {
            pairs,
            extended,
            zero_tol: 1e-6,
            inf_tol: 1e6,
            slope_tol: 0.01,
        }
    }

    /// Pure cap ladder at a fixed small order: evidence for the inner
    /// (cap-to-infinity) limit at that order.
    pub fn cap_driven_ladder(min_order: u64, max_cap: u64) -> ClassifySchedule {
        let mut pairs = vec![];
        let mut d = 64u64.max(2 * min_order);
        while d <= max_cap {
            pairs.push((min_order, d));
            d *= 2;
        }
        if pairs.is_empty() {
            pairs.push((min_order, max_cap));
        }
        ClassifySchedule {
            pairs,
            extended: vec![],
            zero_tol: 1e-6,
            inf_tol: 1e6,
            slope_tol: 0.01,
        }
    }

    /// Pure order ladder with a cap margin that never binds: evidence for
    /// order-driven growth (exponential prefix counts).
    pub fn order_driven_ladder(max_order: u64) -> ClassifySchedule {
        let mut pairs = vec![];
        let mut n = 2u64;
        while n <= max_order {
            pairs.push((n, 2 * n + 64));
            n *= 2;
        }
        ClassifySchedule {
            pairs,
            extended: vec![],
            zero_tol: 1e-6,
            inf_tol: 1e6,
            slope_tol: 0.01,
        }
    }
}

/// Classify the limit behaviour of the cover values along the schedule.
///
/// The diagonal decides `Zero` (its values bound the true infimum from above
/// at ever larger orders); the order-driven extension decides `Infinite`; a
/// diagonal that itself grows is also `Infinite`; flat tails on both regimes
/// are `Finite`. Anything else stays `Undetermined` with its bracket.
pub fn classify_limit(
    desc: &SubsetDescriptor,
    scheme: &WeightScheme,
    s: SRatio,
    schedule: &ClassifySchedule,
) -> Result<ClassifyEvidence> {
    let mut tree = Tree::new(desc);
    let mut eval = |pairs: &[(u64, u64)]| -> Result<Vec<(u64, u64, f64)>> {
        let mut points = vec![];
        for &(min_level, cap) in pairs {
            let v: f64 = cover_dp(&mut tree, scheme, s, min_level, cap)?;
            points.push((min_level, cap, v));
        }
        Ok(points)
    };
    let diag = eval(&schedule.pairs)?;
    let ext = eval(&schedule.extended)?;
    let (diag_class, diag_rule) = classify_series(&diag, Axis::Cap, schedule);
    let mut points = diag;
    if ext.is_empty() {
        return Ok(ClassifyEvidence {
            points,
            rule: diag_rule,
            class: diag_class,
        });
    }
    let (ext_class, ext_rule) = classify_series(&ext, Axis::MinLevel, schedule);
    points.extend_from_slice(&ext);
    let (class, rule) = match (&diag_class, &ext_class) {
        (LimitClass::Zero, _) => (LimitClass::Zero, format!("diagonal: {diag_rule}")),
        (_, LimitClass::Infinite) => (
            LimitClass::Infinite,
            format!("order extension: {ext_rule}"),
        ),
        (LimitClass::Infinite, _) => (LimitClass::Infinite, format!("diagonal: {diag_rule}")),
        (LimitClass::Finite(v), LimitClass::Finite(_)) => (
            LimitClass::Finite(*v),
            format!("diagonal: {diag_rule}; extension: {ext_rule}"),
        ),
        (LimitClass::Finite(v), _) => (
            LimitClass::Finite(*v),
            format!("diagonal: {diag_rule}; extension undecided: {ext_rule}"),
        ),
        (LimitClass::Undetermined { .. }, LimitClass::Finite(v)) => (
            LimitClass::Finite(*v),
            format!("extension: {ext_rule}; diagonal undecided: {diag_rule}"),
        ),
        (LimitClass::Undetermined { lo, hi }, _) => (
            LimitClass::Undetermined { lo: *lo, hi: *hi },
            format!("diagonal: {diag_rule}; extension: {ext_rule}"),
        ),
    };
    Ok(ClassifyEvidence {
        points,
        rule,
        class,
    })
}

/// Classification of an externally computed value sequence (used by sweeps).
pub fn classify_value_points(
    points: &[(u64, u64, f64)],
    schedule: &ClassifySchedule,
) -> LimitClass {
    classify_series(points, Axis::Cap, schedule).0
}

#[derive(Clone, Copy)]
enum Axis {
    Cap,
    MinLevel,
}

fn classify_series(
    points: &[(u64, u64, f64)],
    axis: Axis,
    schedule: &ClassifySchedule,
) -> (LimitClass, String) {
    if points.is_empty() {
        return (
            LimitClass::Undetermined { lo: 0.0, hi: 0.0 },
            "empty series".into(),
        );
    }
    let values: Vec<f64> = points.iter().map(|p| p.2).collect();
    let last = *values.last().unwrap();
    let window = values.len().min(4);
    let tail = &values[values.len() - window..];
    let nonincreasing = tail.windows(2).all(|w| w[1] <= w[0]);
    let nondecreasing = tail.windows(2).all(|w| w[1] >= w[0]);
    if last <= schedule.zero_tol && nonincreasing {
        return (LimitClass::Zero, "below zero_tol and nonincreasing".into());
    }
    if last >= schedule.inf_tol && nondecreasing {
        return (
            LimitClass::Infinite,
            "above inf_tol and nondecreasing".into(),
        );
    }
    if last == 0.0 {
        return (LimitClass::Zero, "exactly zero".into());
    }
    let xs: Vec<f64> = points
        .iter()
        .map(|p| match axis {
            Axis::Cap => p.1 as f64,
            Axis::MinLevel => p.0 as f64,
        })
        .collect();
    let tail_xs = &xs[xs.len() - window..];
    let mut slopes = vec![];
    for i in 1..window {
        if tail[i] > 0.0 && tail[i - 1] > 0.0 && tail_xs[i] > tail_xs[i - 1] {
            slopes.push((tail[i] / tail[i - 1]).ln() / (tail_xs[i] / tail_xs[i - 1]).ln());
        }
    }
    if slopes.is_empty() {
        return (
            LimitClass::Undetermined { lo: 0.0, hi: last },
            "vanishing values without a trend".into(),
        );
    }
    let slope = slopes.iter().sum::<f64>() / slopes.len() as f64;
    if slope <= -schedule.slope_tol && nonincreasing {
        return (LimitClass::Zero, format!("decreasing, log-slope {slope:.4}"));
    }
    if slope >= schedule.slope_tol && nondecreasing {
        return (
            LimitClass::Infinite,
            format!("increasing, log-slope {slope:.4}"),
        );
    }
    let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = tail.iter().cloned().fold(0.0f64, f64::max);
    // a tight band over several doublings is the at-critical signature, even
    // when shallow and deep cover branches cross over inside it
    if lo > 0.0 && (hi / lo).ln() <= 0.1 {
        return (
            LimitClass::Finite(last),
            format!("tail within a {:.1}% band", 100.0 * ((hi / lo) - 1.0)),
        );
    }
    if slope.abs() < schedule.slope_tol {
        return (
            LimitClass::Finite(last),
            format!("stabilized, log-slope {slope:.4}"),
        );
    }
    (
        LimitClass::Undetermined { lo, hi },
        "oscillating tail".into(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn as_f64(&self) -> f64 {
        match self {
            Exponent::Finite(v) => *v,
            Exponent::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

#[derive(Debug, Clone)]
pub struct ExponentEvidence {
    pub probes: Vec<(SRatio, String)>,
    pub bracket: Option<(f64, f64)>,
    pub result: Exponent,
}

/// Critical exponent: bisection between an `Infinite`-classified lower probe
/// and a `Zero`-classified upper probe, to width `s_tol`. A `Finite` probe is
/// the critical value itself, and so is an `Undetermined` probe whose tail
/// stayed inside a narrow band: a value that neither grows nor vanishes over
/// the schedule pins the exponent at that probe. Wider oscillation is an
/// honest failure and propagates with its bracket.
pub fn critical_exponent(
    desc: &SubsetDescriptor,
    scheme: &WeightScheme,
    schedule: &ClassifySchedule,
    s_tol: SRatio,
    s_max: SRatio,
) -> Result<(Exponent, ExponentEvidence)> {
    let mut probes: Vec<(SRatio, String)> = vec![];
    let classify = |s: SRatio, probes: &mut Vec<(SRatio, String)>| -> Result<LimitClass> {
        let mut class = classify_limit(desc, scheme, s, schedule)?;
        if let LimitClass::Undetermined { lo, hi } = class.class {
            if lo > schedule.zero_tol && hi < schedule.inf_tol && (hi / lo).ln() <= 0.15 {
                class.class = LimitClass::Finite((lo + hi) / 2.0);
                class.rule = format!("bounded oscillation in [{lo:.4}, {hi:.4}]");
            }
        }
        probes.push((s, format!("{:?} ({})", class.class, class.rule)));
        Ok(class.class)
    };
    let finish = |v: f64, probes: Vec<(SRatio, String)>, bracket: (f64, f64)| {
        Ok((
            Exponent::Finite(v),
            ExponentEvidence {
                probes,
                bracket: Some(bracket),
                result: Exponent::Finite(v),
            },
        ))
    };

    let zero = SRatio::new(0, 1);
    match classify(zero, &mut probes)? {
        LimitClass::Zero | LimitClass::Finite(_) => return finish(0.0, probes, (0.0, 0.0)),
        LimitClass::Infinite => {}
        LimitClass::Undetermined { lo, hi } => return Err(Error::Undetermined { lo, hi }),
    }

    let mut lo = zero;
    let mut hi: Option<SRatio> = None;
    let mut probe = SRatio::new(1, 4);
    while probe <= s_max {
        match classify(probe, &mut probes)? {
            LimitClass::Zero => {
                hi = Some(probe);
                break;
            }
            LimitClass::Finite(_) => {
                let v = crate::scalar::sratio_to_f64(probe);
                return finish(v, probes, (v, v));
            }
            LimitClass::Infinite => lo = probe,
            LimitClass::Undetermined { lo, hi } => return Err(Error::Undetermined { lo, hi }),
        }
        probe *= SRatio::new(2, 1);
    }
    let Some(mut hi) = hi else {
        return Ok((
            Exponent::Infinite,
            ExponentEvidence {
                probes,
                bracket: None,
                result: Exponent::Infinite,
            },
        ));
    };

    while hi - lo > s_tol {
        let mid = (lo + hi) / SRatio::new(2, 1);
        match classify(mid, &mut probes)? {
            LimitClass::Zero => hi = mid,
            LimitClass::Infinite => lo = mid,
            LimitClass::Finite(_) => {
                let v = crate::scalar::sratio_to_f64(mid);
                return finish(v, probes, (v, v));
            }
            LimitClass::Undetermined { lo, hi } => return Err(Error::Undetermined { lo, hi }),
        }
    }
    let lo_f = crate::scalar::sratio_to_f64(lo);
    let hi_f = crate::scalar::sratio_to_f64(hi);
    finish((lo_f + hi_f) / 2.0, probes, (lo_f, hi_f))
}

// ---------------------------------------------------------------------------
// explicit trees: materialization, certificates, dilation, Vitali selection
// ---------------------------------------------------------------------------

/// A materialized depth-capped tree; node 0 is the root.
#[derive(Debug, Clone)]
pub struct ExplicitTree {
    pub children: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<u64>,
    pub symbol: Vec<u8>,
    pub cap: u64,
}

impl ExplicitTree {
    pub fn materialize(desc: &SubsetDescriptor, cap: u64, budget: u64) -> Result<ExplicitTree> {
        let mut tree = Tree::new(desc);
        let mut out = ExplicitTree {
            children: vec![],
            parent: vec![],
            depth: vec![],
            symbol: vec![],
            cap,
        };
        let Some(root) = tree.root() else {
            return Ok(out);
        };
        out.push_node(None, 0, 0);
        let mut frontier = vec![(0usize, root)];
        for depth in 0..cap {
            let mut next = vec![];
            for (idx, id) in frontier {
                for &(sym, child) in tree.children(id, depth)?.iter() {
                    let cidx = out.push_node(Some(idx), depth + 1, sym);
                    if out.children.len() as u64 > budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                    next.push((cidx, child));
                }
            }
            frontier = next;
        }
        Ok(out)
    }

    pub fn push_node(&mut self, parent: Option<usize>, depth: u64, symbol: u8) -> usize {
        let idx = self.children.len();
        self.children.push(vec![]);
        self.parent.push(parent);
        self.depth.push(depth);
        self.symbol.push(symbol);
        if let Some(p) = parent {
            self.children[p].push(idx);
        }
        idx
    }

    pub fn word_of(&self, mut idx: usize) -> Word {
        let mut out = vec![];
        while let Some(p) = self.parent[idx] {
            out.push(self.symbol[idx]);
            idx = p;
        }
        out.reverse();
        Word(out)
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }
}

/// DP on an explicit tree, also reporting which nodes take a ball.
pub fn explicit_cover_dp<S: CoverScalar>(
    t: &ExplicitTree,
    scheme: &WeightScheme,
    s: SRatio,
    min_level: u64,
) -> Result<(S, Vec<bool>)> {
    if t.is_empty() {
        return Ok((S::zero(), vec![]));
    }
    let floor = scheme.floor_depth(min_level, t.cap)?;
    let n = t.children.len();
    let mut value: Vec<Option<S>> = vec![None; n];
    let mut ball: Vec<bool> = vec![false; n];
    let mut order: Vec<usize> = (0..n).filter(|&i| t.depth[i] <= floor).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(t.depth[i]));
    for i in order {
        let d = t.depth[i];
        if d == floor {
            let o = scheme.order_at(d, min_level).expect("floor usable");
            value[i] = Some(S::ball_weight(o, s));
            ball[i] = true;
            continue;
        }
        let mut sum = S::zero();
        for &c in &t.children[i] {
            sum = sum + value[c].clone().expect("child computed");
        }
        match scheme.order_at(d, min_level) {
            Some(o) => {
                let w = S::ball_weight(o, s);
                if w <= sum {
                    ball[i] = true;
                    value[i] = Some(w);
                } else {
                    value[i] = Some(sum);
                }
            }
            None => value[i] = Some(sum),
        }
    }
    Ok((value[0].clone().expect("root computed"), ball))
}

/// Primal cover and dual packing certifying the fractional cover optimum on
/// an explicit tree by weak duality: the primal is a feasible 0/1 cover, the
/// dual is a feasible packing of the floor cylinders against every usable
/// node's weight, and their exact values agree.
pub struct LaminarCertificate<S> {
    pub value: S,
    /// nodes chosen as balls (an antichain covering the floor level)
    pub cover: Vec<usize>,
    /// packing value per floor node
    pub packing: Vec<(usize, S)>,
}

pub fn primal_dual_certificates<S: CoverScalar>(
    t: &ExplicitTree,
    scheme: &WeightScheme,
    s: SRatio,
    min_level: u64,
) -> Result<LaminarCertificate<S>> {
    let (value, ball) = explicit_cover_dp::<S>(t, scheme, s, min_level)?;
    if t.is_empty() {
        return Ok(LaminarCertificate {
            value,
            cover: vec![],
            packing: vec![],
        });
    }
    let floor = scheme.floor_depth(min_level, t.cap)?;
    let mut cover = vec![];
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        if ball[i] {
            cover.push(i);
        } else {
            stack.extend(t.children[i].iter().copied());
        }
    }
    cover.sort_unstable();

    let n = t.children.len();
    let mut capacity: Vec<Option<S>> = vec![None; n];
    let mut order: Vec<usize> = (0..n).filter(|&i| t.depth[i] <= floor).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(t.depth[i]));
    for &i in &order {
        let d = t.depth[i];
        let weight_cap = scheme.order_at(d, min_level).map(|o| S::ball_weight(o, s));
        let cap_here = if d < floor {
            let mut sum = S::zero();
            for &c in &t.children[i] {
                sum = sum + capacity[c].clone().expect("child capacity");
            }
            match weight_cap {
                Some(w) if w <= sum => w,
                _ => sum,
            }
        } else {
            weight_cap.expect("floor usable")
        };
        capacity[i] = Some(cap_here);
    }
    let mut assigned: Vec<Option<S>> = vec![None; n];
    assigned[0] = capacity[0].clone();
    let mut packing = vec![];
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        let budget = assigned[i].clone().expect("assigned before visit");
        if t.depth[i] == floor {
            packing.push((i, budget));
            continue;
        }
        let mut remaining = budget;
        for &c in &t.children[i] {
            let cap_c = capacity[c].clone().expect("capacity");
            let give = if cap_c <= remaining {
                cap_c
            } else {
                remaining.clone()
            };
            remaining = S::sub_clamped(&remaining, &give);
            assigned[c] = Some(give);
            stack.push(c);
        }
    }
    packing.sort_by_key(|p| p.0);
    Ok(LaminarCertificate {
        value,
        cover,
        packing,
    })
}

/// Exact feasibility + weak-duality verification of a certificate.
pub fn verify_certificate<S: CoverScalar>(
    t: &ExplicitTree,
    scheme: &WeightScheme,
    s: SRatio,
    min_level: u64,
    cert: &LaminarCertificate<S>,
) -> Result<bool> {
    if t.is_empty() {
        return Ok(cert.value.is_zero() && cert.cover.is_empty());
    }
    let floor = scheme.floor_depth(min_level, t.cap)?;
    let in_cover: std::collections::HashSet<usize> = cert.cover.iter().copied().collect();
    for leaf in (0..t.children.len()).filter(|&i| t.depth[i] == floor) {
        let mut cur = Some(leaf);
        let mut covered = false;
        while let Some(i) = cur {
            if in_cover.contains(&i) {
                covered = true;
                break;
            }
            cur = t.parent[i];
        }
        if !covered {
            return Ok(false);
        }
    }
    let mut primal = S::zero();
    for &i in &cert.cover {
        let Some(o) = scheme.order_at(t.depth[i], min_level) else {
            return Ok(false);
        };
        primal = primal + S::ball_weight(o, s);
    }
    if primal != cert.value {
        return Ok(false);
    }
    let mut below: Vec<S> = vec![S::zero(); t.children.len()];
    for &(leaf, ref y) in &cert.packing {
        let mut cur = Some(leaf);
        while let Some(i) = cur {
            below[i] = below[i].clone() + y.clone();
            cur = t.parent[i];
        }
    }
    for (i, packed) in below.iter().enumerate() {
        if t.depth[i] > floor {
            continue;
        }
        if let Some(o) = scheme.order_at(t.depth[i], min_level) {
            let w = S::ball_weight(o, s);
            if *packed > w {
                return Ok(false);
            }
        }
    }
    Ok(below[0] == cert.value)
}

/// The dilation `B_n(x, factor*eps)` of a ball, as a cylinder.
pub fn dilation_cylinder(
    action: &ActionSpec,
    ball: &BowenBall,
    factor: u64,
) -> Result<CylinderSet> {
    let scaled = Radius::new(ball.radius.numer() * factor, *ball.radius.denom());
    if scaled >= Radius::new(1, 1) {
        return Err(Error::RadiusOutOfRange(format!("{scaled}")));
    }
    crate::lattice::bowen_ball_as_cylinder(
        action,
        &BowenBall {
            center: ball.center.clone(),
            order: ball.order,
            radius: scaled,
        },
    )
}

/// Greedy disjoint subfamily: scan by decreasing radius (increasing order),
/// keep any ball disjoint from all kept ones. The kept balls are pairwise
/// disjoint and every input ball lies inside the 5-dilation of a kept one.
pub fn vitali_5r_select(action: &ActionSpec, balls: &[BowenBall]) -> Result<Vec<usize>> {
    if balls.is_empty() {
        return Ok(vec![]);
    }
    let eps = balls[0].radius;
    if balls.iter().any(|b| b.radius != eps) {
        return Err(Error::InvalidDescriptor(
            "5r selection expects a common radius".into(),
        ));
    }
    if Radius::new(eps.numer() * 5, *eps.denom()) >= Radius::new(1, 1) {
        return Err(Error::RadiusOutOfRange(format!(
            "5*{eps} leaves the metric range"
        )));
    }
    let cylinders: Vec<CylinderSet> = balls
        .iter()
        .map(|b| crate::lattice::bowen_ball_as_cylinder(action, b))
        .collect::<Result<_>>()?;
    let mut idx: Vec<usize> = (0..balls.len()).collect();
    idx.sort_by_key(|&i| (balls[i].order, i));
    let mut kept: Vec<usize> = vec![];
    for i in idx {
        if kept
            .iter()
            .all(|&j| cylinders[i].is_disjoint_from(&cylinders[j]))
        {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Alphabet, PeriodicPoint};
    use crate::scalar::Radical;
    use crate::subsets::benchmarks;
    use num::rational::Ratio;

    fn line() -> ActionSpec {
        ActionSpec::one_sided_line()
    }

    fn r(p: u64, q: u64) -> Ratio<u64> {
        Ratio::new(p, q)
    }

    #[test]
    fn singleton_deepest_ball() {
        // one point: the single deepest ball is optimal; order 50 - 2 + 1 = 49
        let z = benchmarks::singleton_zero();
        let cv = caratheodory_value::<Radical>(&line(), &z, r(1, 1), 2, r(2, 5), 50).unwrap();
        assert_eq!(cv.value, Radical::ball_weight(49, r(1, 1)));
        let wv = weighted_value::<Radical>(&line(), &z, r(1, 1), 2, r(2, 5), 50).unwrap();
        assert_eq!(wv.value, cv.value);
    }

    #[test]
    fn empty_set_cover_is_zero() {
        let e = SubsetDescriptor::Finite(vec![]);
        let cv = caratheodory_value::<Radical>(&line(), &e, r(1, 1), 2, r(2, 5), 20).unwrap();
        assert!(cv.value.is_zero());
    }

    #[test]
    fn countable_values_decrease_across_doublings() {
        let z = benchmarks::zeros_then_ones(Alphabet::new(2).unwrap());
        let mut prev: Option<Radical> = None;
        for (n, d) in [(2u64, 64u64), (2, 128), (4, 256), (4, 512)] {
            let cv = caratheodory_value::<Radical>(&line(), &z, r(1, 2), n, r(2, 5), d).unwrap();
            if let Some(p) = prev {
                assert!(cv.value < p, "strict decrease expected");
            }
            prev = Some(cv.value);
        }
    }

    #[test]
    fn monotone_in_cap_min_order_and_radius() {
        let z = benchmarks::sparse_powers_of_two(2);
        let base = caratheodory_value::<Radical>(&line(), &z, r(1, 1), 2, r(2, 5), 64)
            .unwrap()
            .value;
        let deeper = caratheodory_value::<Radical>(&line(), &z, r(1, 1), 2, r(2, 5), 128)
            .unwrap()
            .value;
        assert!(deeper <= base);
        let stricter = caratheodory_value::<Radical>(&line(), &z, r(1, 1), 4, r(2, 5), 64)
            .unwrap()
            .value;
        assert!(stricter >= base);
        let finer = caratheodory_value::<Radical>(&line(), &z, r(1, 1), 2, r(1, 5), 64)
            .unwrap()
            .value;
        assert!(finer >= base);
    }

    #[test]
    fn hausdorff_singleton() {
        let z = benchmarks::singleton_zero();
        let hv = hausdorff_value::<Radical>(&line(), &z, r(1, 1), r(1, 4), 50).unwrap();
        assert_eq!(hv.value, Radical::ball_weight(51, r(1, 1)));
    }

    #[test]
    fn bowen_cover_singleton() {
        let z = benchmarks::singleton_zero();
        let bv = bowen_cover_slow_value::<Radical>(&z, r(1, 1), 2, 50).unwrap();
        assert_eq!(bv.value, Radical::ball_weight(50, r(1, 1)));
    }

    #[test]
    fn bowen_cover_bounded_by_uniform_depth_cover() {
        // value <= p(n) * (1/n)^s for every usable depth n
        let z = benchmarks::sparse_powers_of_two(2);
        let s = r(1, 1);
        let bv = bowen_cover_slow_value::<Radical>(&z, s, 2, 64).unwrap();
        for n in [2u64, 8, 32, 64] {
            let count = z.prefix_count(n);
            let bound =
                Radical::ball_weight(n, s).scale(&num::BigRational::from_integer(count.into()));
            assert!(bv.value <= bound, "uniform depth-{n} cover bound violated");
        }
    }

    #[test]
    fn classification_on_benchmarks() {
        let sched = ClassifySchedule::default_ladder(2048);
        let scheme = WeightScheme::bowen(&line(), r(2, 5)).unwrap();
        let z = benchmarks::zeros_then_ones(Alphabet::new(2).unwrap());
        let ev = classify_limit(&z, &scheme, r(1, 2), &sched).unwrap();
        assert_eq!(ev.class, LimitClass::Zero, "{ev:?}");
        let full = benchmarks::full_shift(Alphabet::new(2).unwrap());
        let ev = classify_limit(&full, &scheme, r(3, 1), &sched).unwrap();
        assert_eq!(ev.class, LimitClass::Infinite, "{ev:?}");
        let single = benchmarks::singleton_zero();
        let ev = classify_limit(&single, &scheme, r(1, 2), &sched).unwrap();
        assert_eq!(ev.class, LimitClass::Zero, "{ev:?}");
        // below the critical exponent the values grow without bound
        let sp = benchmarks::sparse_powers_of_two(2);
        let ev = classify_limit(&sp, &scheme, r(1, 2), &sched).unwrap();
        assert_eq!(ev.class, LimitClass::Infinite, "{ev:?}");
    }

    #[test]
    fn critical_exponents_of_sparse_products() {
        let sched = ClassifySchedule::default_ladder(2048);
        let scheme = WeightScheme::bowen(&line(), r(2, 5)).unwrap();
        let (e, _) = critical_exponent(
            &benchmarks::sparse_powers_of_two(2),
            &scheme,
            &sched,
            r(1, 20),
            r(8, 1),
        )
        .unwrap();
        assert!((e.as_f64() - 1.0).abs() <= 0.1, "got {e:?}");
        let (e, _) = critical_exponent(
            &benchmarks::sparse_powers_of_two(4),
            &scheme,
            &sched,
            r(1, 20),
            r(8, 1),
        )
        .unwrap();
        assert!((e.as_f64() - 2.0).abs() <= 0.1, "got {e:?}");
        // exponential growth keeps its optimal covers at the minimum order, so
        // the order-driven ladder is the sound probe there
        let order_sched = ClassifySchedule::order_driven_ladder(256);
        let (e, _) = critical_exponent(
            &benchmarks::full_shift(Alphabet::new(2).unwrap()),
            &scheme,
            &order_sched,
            r(1, 20),
            r(8, 1),
        )
        .unwrap();
        assert_eq!(e, Exponent::Infinite);
        let (e, _) =
            critical_exponent(&benchmarks::singleton_zero(), &scheme, &sched, r(1, 20), r(8, 1))
                .unwrap();
        assert_eq!(e, Exponent::Finite(0.0));
    }

    #[test]
    fn certificates_on_small_trees() {
        let z = SubsetDescriptor::union(vec![
            benchmarks::zeros_then_ones(Alphabet::new(2).unwrap()),
            SubsetDescriptor::singleton(PeriodicPoint::new(vec![1, 0], vec![0]).unwrap()),
        ]);
        let t = ExplicitTree::materialize(&z, 9, 10_000).unwrap();
        let scheme = WeightScheme::bowen(&line(), r(2, 5)).unwrap();
        for s in [r(1, 2), r(1, 1), r(3, 2)] {
            let cert = primal_dual_certificates::<Radical>(&t, &scheme, s, 2).unwrap();
            assert!(verify_certificate(&t, &scheme, s, 2, &cert).unwrap());
            let via_dp = caratheodory_value::<Radical>(&line(), &z, s, 2, r(2, 5), 9).unwrap();
            assert_eq!(cert.value, via_dp.value);
        }
    }

    #[test]
    fn vitali_selection_postconditions() {
        let action = line();
        let eps = r(1, 10); // n(eps) = 9; 5*eps = 1/2 stays in range
        let mk = |word: &[u8], order: u64| {
            let mut full = word.to_vec();
            full.resize(24, 0);
            BowenBall::new(Word(full), order, eps).unwrap()
        };
        // nested pair: the deeper cylinder extends the shallower stem
        let mut deep_center = vec![0u8; 13];
        deep_center.extend_from_slice(&[1, 1]);
        let balls = vec![mk(&[0, 0, 0, 0, 0], 5), mk(&deep_center, 7)];
        let kept = vitali_5r_select(&action, &balls).unwrap();
        assert_eq!(kept, vec![0]);
        // disjoint pair: both kept
        let balls = vec![mk(&[0, 0, 0], 3), mk(&[1, 1, 1], 3)];
        let kept = vitali_5r_select(&action, &balls).unwrap();
        assert_eq!(kept, vec![0, 1]);
        // dilation leaves the metric range: rejected
        let wide = vec![BowenBall::new(Word(vec![0; 8]), 2, r(2, 5)).unwrap()];
        assert!(vitali_5r_select(&action, &wide).is_err());
    }

    #[test]
    fn float_backends_agree_with_exact() {
        let z = benchmarks::sparse_powers_of_two(2);
        let exact = caratheodory_value::<Radical>(&line(), &z, r(1, 1), 2, r(2, 5), 64)
            .unwrap()
            .value
            .to_f64();
        let double = caratheodory_value::<f64>(&line(), &z, r(1, 1), 2, r(2, 5), 64)
            .unwrap()
            .value;
        let single = caratheodory_value::<f32>(&line(), &z, r(1, 1), 2, r(2, 5), 64)
            .unwrap()
            .value;
        assert!((exact - double).abs() < 1e-12);
        assert!((exact - single as f64).abs() < 1e-5);
    }

    #[test]
    fn power_scheme_depths() {
        let scheme = WeightScheme::power_bowen(&line(), 2, r(1, 4)).unwrap();
        // n(1/4) = 3: usable depths 3, 5, 7, ... with orders 1, 2, 3, ...
        assert_eq!(scheme.order_at(3, 1), Some(1));
        assert_eq!(scheme.order_at(4, 1), None);
        assert_eq!(scheme.order_at(5, 1), Some(2));
        assert_eq!(scheme.floor_depth(1, 8).unwrap(), 7);
        assert!(WeightScheme::power_bowen(&line(), 3, r(2, 5)).is_err());
    }
}
