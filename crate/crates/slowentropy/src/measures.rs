//! Borel probability measures on the shift space with exact cylinder masses,
//! the polynomial-scale local entropy and its integral, a constructive mass
//! distribution builder for lower bounds, distribution-principle checkers,
//! and the variational-principle harness.

use num::{BigInt, BigRational, BigUint, One, Signed, Zero};
use num_traits::ToPrimitive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cover::{
    explicit_cover_dp, ClassifySchedule, Exponent, ExplicitTree, WeightScheme,
};
use crate::dims::{slow_entropy_dimension, Tolerances};
use crate::error::{Error, Result};
use crate::lattice::{ActionSpec, PeriodicPoint, Radius, Word};
use crate::scalar::Radical;
use crate::subsets::{SparseProduct, SubsetDescriptor};

/// Explicit mass function on a materialized cylinder tree; children sum to
/// their parent exactly.
#[derive(Debug, Clone)]
pub struct TreeMass {
    pub tree: ExplicitTree,
    pub mass: Vec<BigRational>,
    /// leaves carry whole atoms (single points), so masses extend below the
    /// stored depth unchanged
    pub atomic: bool,
}

impl TreeMass {
    pub fn consistent(&self) -> bool {
        if self.tree.is_empty() {
            return false;
        }
        if !self.mass[0].is_one() {
            return false;
        }
        for i in 0..self.tree.children.len() {
            if self.tree.children[i].is_empty() {
                continue;
            }
            let sum: BigRational = self.tree.children[i]
                .iter()
                .map(|&c| self.mass[c].clone())
                .sum();
            if sum != self.mass[i] {
                return false;
            }
        }
        true
    }

    fn mass_of_prefix(&self, w: &[u8]) -> Result<BigRational> {
        if self.tree.is_empty() {
            return Ok(BigRational::zero());
        }
        let mut node = 0usize;
        for (i, &sym) in w.iter().enumerate() {
            if i as u64 >= self.tree.cap {
                if self.atomic {
                    break;
                }
                return Err(Error::InvalidMeasure(format!(
                    "cylinder of depth {} beyond stored depth {}",
                    w.len(),
                    self.tree.cap
                )));
            }
            match self.tree.children[node]
                .iter()
                .find(|&&c| self.tree.symbol[c] == sym)
            {
                Some(&c) => node = c,
                None => return Ok(BigRational::zero()),
            }
        }
        if self.atomic && w.len() as u64 > self.tree.cap {
            // beyond the cap an atomic leaf keeps its whole mass along its own
            // point; other continuations carry none. The stored tree keeps one
            // chain per atom, so reaching here means the prefix followed it.
        }
        Ok(self.mass[node].clone())
    }
}

/// Measure on the shift space with exact rational cylinder masses.
#[derive(Debug, Clone)]
pub enum MeasureDescriptor {
    /// i.i.d. symbol law
    Bernoulli { probs: Vec<BigRational> },
    /// stationary chain on the alphabet; zero rows cut the support to an SFT
    Markov {
        initial: Vec<BigRational>,
        rows: Vec<Vec<BigRational>>,
    },
    /// one probability vector over the branching choices, applied at every
    /// free position of the sparse support
    ProductOnSparse {
        support: SparseProduct,
        probs: Vec<BigRational>,
    },
    TreeMass(TreeMass),
    /// unit mass at a single point
    PointMass { point: PeriodicPoint },
}

fn check_stochastic(v: &[BigRational], what: &str) -> Result<()> {
    if v.iter().any(|p| p.is_negative()) {
        return Err(Error::InvalidMeasure(format!("{what} has a negative entry")));
    }
    let total: BigRational = v.iter().cloned().sum();
    if !total.is_one() {
        return Err(Error::InvalidMeasure(format!(
            "{what} sums to {total}, expected 1"
        )));
    }
    Ok(())
}

impl MeasureDescriptor {
    pub fn validate(&self) -> Result<()> {
        match self {
            MeasureDescriptor::Bernoulli { probs } => check_stochastic(probs, "symbol law"),
            MeasureDescriptor::Markov { initial, rows } => {
                check_stochastic(initial, "initial law")?;
                if rows.len() != initial.len() {
                    return Err(Error::InvalidMeasure(
                        "transition rows must match the alphabet".into(),
                    ));
                }
                for (i, row) in rows.iter().enumerate() {
                    if row.len() != initial.len() {
                        return Err(Error::InvalidMeasure(format!("row {i} has wrong arity")));
                    }
                    check_stochastic(row, &format!("transition row {i}"))?;
                }
                Ok(())
            }
            MeasureDescriptor::ProductOnSparse { support, probs } => {
                if probs.len() != support.branching as usize {
                    return Err(Error::InvalidMeasure(
                        "choice law arity must equal the branching".into(),
                    ));
                }
                check_stochastic(probs, "choice law")
            }
            MeasureDescriptor::TreeMass(tm) => {
                if tm.consistent() {
                    Ok(())
                } else {
                    Err(Error::InvalidMeasure(
                        "tree masses are not consistent".into(),
                    ))
                }
            }
            MeasureDescriptor::PointMass { .. } => Ok(()),
        }
    }

    /// Exact `mu(C_{|w|}(w))`; zero off the support.
    pub fn cylinder_mass(&self, w: &Word) -> Result<BigRational> {
        match self {
            MeasureDescriptor::Bernoulli { probs } => {
                let mut m = BigRational::one();
                for &sym in &w.0 {
                    match probs.get(sym as usize) {
                        Some(p) if !p.is_zero() => m *= p,
                        _ => return Ok(BigRational::zero()),
                    }
                }
                Ok(m)
            }
            MeasureDescriptor::Markov { initial, rows } => {
                let Some(&first) = w.0.first() else {
                    return Ok(BigRational::one());
                };
                let mut m = match initial.get(first as usize) {
                    Some(p) if !p.is_zero() => p.clone(),
                    _ => return Ok(BigRational::zero()),
                };
                for pair in w.0.windows(2) {
                    match rows[pair[0] as usize].get(pair[1] as usize) {
                        Some(p) if !p.is_zero() => m *= p,
                        _ => return Ok(BigRational::zero()),
                    }
                }
                Ok(m)
            }
            MeasureDescriptor::ProductOnSparse { support, probs } => {
                let mut m = BigRational::one();
                for (i, &sym) in w.0.iter().enumerate() {
                    if support.generator.is_free(i as u64) {
                        match probs.get(sym as usize) {
                            Some(p) if !p.is_zero() => m *= p,
                            _ => return Ok(BigRational::zero()),
                        }
                    } else if sym != support.default_symbol {
                        return Ok(BigRational::zero());
                    }
                }
                Ok(m)
            }
            MeasureDescriptor::TreeMass(tm) => tm.mass_of_prefix(&w.0),
            MeasureDescriptor::PointMass { point } => {
                let agrees = (0..w.0.len()).all(|i| point.symbol_at(i as u64) == w.0[i]);
                Ok(if agrees {
                    BigRational::one()
                } else {
                    BigRational::zero()
                })
            }
        }
    }
}

/// `ln` of a positive rational without floating-point overflow.
pub fn ln_big_rational(r: &BigRational) -> f64 {
    fn ln_biguint(x: &BigUint) -> f64 {
        let bits = x.bits();
        if bits <= 52 {
            return x.to_f64().unwrap().ln();
        }
        let top = (x >> (bits - 52)).to_f64().unwrap();
        top.ln() + (bits - 52) as f64 * std::f64::consts::LN_2
    }
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

/// A point fed to the local estimator: eventually periodic, or a sampled
/// finite prefix (long enough for the deepest scheduled cylinder).
#[derive(Debug, Clone)]
pub enum SamplePoint {
    Periodic(PeriodicPoint),
    Prefix(Vec<u8>),
}

impl SamplePoint {
    fn prefix(&self, depth: u64) -> Result<Word> {
        match self {
            SamplePoint::Periodic(p) => Ok(p.prefix(depth as u32)),
            SamplePoint::Prefix(v) => {
                if (v.len() as u64) < depth {
                    Err(Error::InsufficientLength)
                } else {
                    Ok(Word(v[..depth as usize].to_vec()))
                }
            }
        }
    }
}

/// Geometric order schedule aligned so that cylinder depths land on powers of
/// two: `n_j = 2^j - n(eps) + 1`.
pub fn aligned_order_schedule(exponents: &[u32], eps_order: u64) -> Vec<u64> {
    exponents
        .iter()
        .filter_map(|&j| (1u64 << j).checked_sub(eps_order - 1))
        .filter(|&n| n >= 2)
        .collect()
}

#[derive(Debug, Clone)]
pub struct LocalSlowEntropy {
    pub eps: Radius,
    /// `(order n, -log mass / log n)`; infinite entries mark zero-mass cylinders
    pub values: Vec<(u64, f64)>,
    pub liminf_estimate: f64,
    pub decided: bool,
}

/// Local slow entropy of a point along the order schedule:
/// `-log mu(C_{n + n(eps) - 1}(x)) / log n`.
///
/// The lim inf is estimated as the minimum over the last two scheduled
/// orders. Decidedness looks at the last three: the tail must be monotone or
/// confined within the larger of one percent and the sequence's own
/// increment noise (sampled points fluctuate at a known scale, and a
/// stricter band would reject every genuinely convergent random path).
pub fn local_slow_entropy(
    action: &ActionSpec,
    mu: &MeasureDescriptor,
    x: &SamplePoint,
    eps: Radius,
    orders: &[u64],
) -> Result<LocalSlowEntropy> {
    if !action.is_one_sided_line() {
        return Err(Error::UnsupportedAction);
    }
    let eps_order = action.cylinder_depth_for_radius(eps)?;
    let mut values = vec![];
    for &n in orders {
        if n < 2 {
            continue;
        }
        let depth = n + eps_order - 1;
        let mass = mu.cylinder_mass(&x.prefix(depth)?)?;
        let v = if mass.is_zero() {
            f64::INFINITY
        } else {
            -ln_big_rational(&mass) / (n as f64).ln()
        };
        values.push((n, v));
    }
    if values.is_empty() {
        return Err(Error::InvalidMeasure("empty order schedule".into()));
    }
    Ok(summarize_local(eps, values))
}

fn summarize_local(eps: Radius, values: Vec<(u64, f64)>) -> LocalSlowEntropy {
    let finite: Vec<f64> = values.iter().map(|&(_, v)| v).collect();
    let est_window = finite.len().min(2);
    let liminf = finite[finite.len() - est_window..]
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let window = finite.len().min(3);
    let tail = &finite[finite.len() - window..];
    let monotone = tail.windows(2).all(|w| w[1] <= w[0] + 1e-12)
        || tail.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let incs: Vec<f64> = finite
        .windows(2)
        .filter(|w| w[0].is_finite() && w[1].is_finite())
        .map(|w| (w[1] - w[0]).abs())
        .collect();
    let mean_inc = if incs.is_empty() {
        0.0
    } else {
        incs.iter().sum::<f64>() / incs.len() as f64
    };
    // a rare heavy symbol makes one large jump; the band must not read that
    // single jump as instability, so the maximal observed increment enters
    // the floor alongside the mean
    let max_inc = incs.iter().cloned().fold(0.0f64, f64::max);
    let within_band = {
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        hi.is_finite()
            && lo.is_finite()
            && (hi - lo)
                <= (0.01 * hi.abs().max(1.0))
                    .max(3.0 * mean_inc)
                    .max(1.5 * max_inc)
    };
    LocalSlowEntropy {
        eps,
        values,
        liminf_estimate: liminf,
        decided: monotone || within_band,
    }
}

/// Sampled local values of a sparse-product measure without materializing the
/// point: only the free-position choices carry mass.
fn sparse_local_sample(
    support: &SparseProduct,
    probs: &[BigRational],
    eps: Radius,
    eps_order: u64,
    orders: &[u64],
    rng: &mut ChaCha8Rng,
) -> LocalSlowEntropy {
    let max_depth = orders.iter().max().copied().unwrap_or(2) + eps_order;
    let log_probs: Vec<f64> = probs.iter().map(|p| -ln_big_rational(p)).collect();
    let weights: Vec<f64> = probs.iter().map(|p| p.to_f64().unwrap_or(0.0)).collect();
    let mut positions: Vec<u64> = vec![];
    let mut pos_log: Vec<f64> = vec![];
    let mut p = 0u64;
    while p < max_depth {
        if support.generator.is_free(p) {
            positions.push(p);
            let t: f64 = rng.gen();
            let mut acc = 0.0;
            let mut chosen = weights.len() - 1;
            for (i, w) in weights.iter().enumerate() {
                acc += w;
                if t < acc {
                    chosen = i;
                    break;
                }
            }
            pos_log.push(log_probs[chosen]);
        }
        p += 1;
    }
    let mut values = vec![];
    for &n in orders {
        if n < 2 {
            continue;
        }
        let depth = n + eps_order - 1;
        let upto = positions.partition_point(|&f| f < depth);
        let total: f64 = pos_log[..upto].iter().sum();
        values.push((n, total / (n as f64).ln()));
    }
    summarize_local(eps, values)
}

/// How the integral over the measure is evaluated.
#[derive(Debug, Clone)]
pub enum IntegrationSpec {
    /// integrand is constant on the support (uniform choice laws)
    Exact,
    /// finite atomic support, integrated term by term
    Atomic,
    MonteCarlo { samples: u32, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct MeasureSlowEntropy {
    pub value: Exponent,
    pub per_eps: Vec<(Radius, f64)>,
    pub integration: String,
    pub standard_error: Option<f64>,
    pub undecided_fraction: f64,
}

fn sample_point(
    mu: &MeasureDescriptor,
    max_depth: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SamplePoint> {
    fn draw(rng: &mut ChaCha8Rng, probs: &[BigRational]) -> usize {
        let t: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in probs.iter().enumerate() {
            acc += p.to_f64().unwrap_or(0.0);
            if t < acc {
                return i;
            }
        }
        probs.len() - 1
    }
    match mu {
        MeasureDescriptor::Bernoulli { probs } => Ok(SamplePoint::Prefix(
            (0..max_depth).map(|_| draw(rng, probs) as u8).collect(),
        )),
        MeasureDescriptor::Markov { initial, rows } => {
            let mut out = Vec::with_capacity(max_depth as usize);
            let mut state = draw(rng, initial) as u8;
            out.push(state);
            for _ in 1..max_depth {
                state = draw(rng, &rows[state as usize]) as u8;
                out.push(state);
            }
            Ok(SamplePoint::Prefix(out))
        }
        MeasureDescriptor::ProductOnSparse { support, probs } => {
            let mut out = Vec::with_capacity(max_depth as usize);
            for i in 0..max_depth {
                if support.generator.is_free(i) {
                    out.push(draw(rng, probs) as u8);
                } else {
                    out.push(support.default_symbol);
                }
            }
            Ok(SamplePoint::Prefix(out))
        }
        MeasureDescriptor::TreeMass(tm) => {
            let mut node = 0usize;
            let mut out = vec![];
            while !tm.tree.children[node].is_empty() {
                let kids = &tm.tree.children[node];
                let total = tm.mass[node].to_f64().unwrap_or(0.0);
                let t: f64 = rng.gen::<f64>() * total;
                let mut acc = 0.0;
                let mut picked = kids[kids.len() - 1];
                for &c in kids {
                    acc += tm.mass[c].to_f64().unwrap_or(0.0);
                    if t < acc {
                        picked = c;
                        break;
                    }
                }
                out.push(tm.tree.symbol[picked]);
                node = picked;
            }
            Ok(SamplePoint::Prefix(out))
        }
        MeasureDescriptor::PointMass { point } => Ok(SamplePoint::Periodic(point.clone())),
    }
}

fn integrand_is_constant(mu: &MeasureDescriptor) -> bool {
    match mu {
        MeasureDescriptor::ProductOnSparse { probs, .. } => {
            probs.windows(2).all(|w| w[0] == w[1])
        }
        MeasureDescriptor::PointMass { .. } => true,
        _ => false,
    }
}

fn atoms_of(mu: &MeasureDescriptor) -> Option<Vec<(SamplePoint, BigRational)>> {
    match mu {
        MeasureDescriptor::PointMass { point } => Some(vec![(
            SamplePoint::Periodic(point.clone()),
            BigRational::one(),
        )]),
        _ => None,
    }
}

/// Integral of the local lim inf over the measure, per radius, with the value
/// at the finest radius reported. Divergent local values surface as an
/// infinite result rather than a number.
pub fn measure_slow_entropy(
    action: &ActionSpec,
    mu: &MeasureDescriptor,
    eps_schedule: &[Radius],
    order_exponents: &[u32],
    spec: &IntegrationSpec,
) -> Result<MeasureSlowEntropy> {
    let mut per_eps = vec![];
    let mut last_se = None;
    let mut worst_undecided = 0.0f64;
    let divergence_bar = 50.0;
    for &eps in eps_schedule {
        let eps_order = action.cylinder_depth_for_radius(eps)?;
        let orders = aligned_order_schedule(order_exponents, eps_order);
        let (value, se, undecided) = match spec {
            IntegrationSpec::Exact => {
                if !integrand_is_constant(mu) {
                    return Err(Error::InvalidMeasure(
                        "exact integration requires a constant integrand".into(),
                    ));
                }
                let x = representative_point(mu)?;
                let est = local_slow_entropy(action, mu, &x, eps, &orders)?;
                (est.liminf_estimate, None, if est.decided { 0.0 } else { 1.0 })
            }
            IntegrationSpec::Atomic => {
                let atoms = atoms_of(mu).ok_or_else(|| {
                    Error::InvalidMeasure("atomic integration needs an atomic measure".into())
                })?;
                let mut acc = 0.0;
                let mut undecided = 0usize;
                for (x, w) in &atoms {
                    let est = local_slow_entropy(action, mu, x, eps, &orders)?;
                    if !est.decided {
                        undecided += 1;
                    }
                    acc += w.to_f64().unwrap_or(0.0) * est.liminf_estimate;
                }
                (acc, None, undecided as f64 / atoms.len() as f64)
            }
            IntegrationSpec::MonteCarlo { samples, seed } => {
                let max_depth = orders.iter().max().copied().unwrap_or(2) + eps_order;
                let mut acc = 0.0;
                let mut acc2 = 0.0;
                let mut undecided = 0usize;
                let mut diverged = false;
                for i in 0..*samples {
                    let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                    rng.set_stream(i as u64);
                    let est = if let MeasureDescriptor::ProductOnSparse { support, probs } = mu {
                        sparse_local_sample(support, probs, eps, eps_order, &orders, &mut rng)
                    } else {
                        let x = sample_point(mu, max_depth, &mut rng)?;
                        local_slow_entropy(action, mu, &x, eps, &orders)?
                    };
                    if !est.decided {
                        undecided += 1;
                    }
                    if est.liminf_estimate.is_infinite() || est.liminf_estimate > divergence_bar {
                        diverged = true;
                        break;
                    }
                    acc += est.liminf_estimate;
                    acc2 += est.liminf_estimate * est.liminf_estimate;
                }
                if diverged {
                    (f64::INFINITY, None, 0.0)
                } else {
                    let k = *samples as f64;
                    let mean = acc / k;
                    let var = (acc2 / k - mean * mean).max(0.0);
                    (
                        mean,
                        Some((var / k).sqrt()),
                        undecided as f64 / *samples as f64,
                    )
                }
            }
        };
        worst_undecided = worst_undecided.max(undecided);
        last_se = se;
        per_eps.push((eps, value));
    }
    if worst_undecided > 0.05 {
        return Err(Error::Undecided {
            failed: (worst_undecided * 100.0) as usize,
            total: 100,
        });
    }
    let last = per_eps.last().map(|&(_, v)| v).unwrap_or(0.0);
    let value = if last.is_infinite() || last > divergence_bar {
        Exponent::Infinite
    } else {
        Exponent::Finite(last)
    };
    Ok(MeasureSlowEntropy {
        value,
        per_eps,
        integration: format!("{spec:?}"),
        standard_error: last_se,
        undecided_fraction: worst_undecided,
    })
}

fn representative_point(mu: &MeasureDescriptor) -> Result<SamplePoint> {
    match mu {
        MeasureDescriptor::ProductOnSparse { support, .. } => {
            // all-default with choice 0 at free positions; requires the default
            // to be among the choices only when it differs from 0
            let mut prefix = vec![];
            for i in 0..1 << 15 {
                prefix.push(if support.generator.is_free(i) {
                    0
                } else {
                    support.default_symbol
                });
            }
            Ok(SamplePoint::Prefix(prefix))
        }
        MeasureDescriptor::PointMass { point } => Ok(SamplePoint::Periodic(point.clone())),
        _ => Err(Error::InvalidMeasure(
            "no canonical representative point".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// constructive mass distribution (lower-bound builder)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct FrostmanOutput {
    pub measure: TreeMass,
    /// rational constant for which the cap inequality
    /// `mass(ball of order n) * c <= (1/n)^s` is verified exactly
    pub achieved_c: BigRational,
    /// the weighted cover value at the same cap, for comparison
    pub cover_value: Radical,
}

/// Build a probability measure on `K` whose ball masses obey the power cap.
///
/// The maximal constant equals the cover optimum by max-flow/min-cut on the
/// capacity tree; the returned rational constant sits just below it so that
/// all node capacities round to rationals without losing feasibility.
pub fn frostman_construct(
    action: &ActionSpec,
    k_set: &SubsetDescriptor,
    s: crate::scalar::SRatio,
    min_order: u64,
    eps: Radius,
    cap: u64,
    budget: u64,
) -> Result<FrostmanOutput> {
    let scheme = WeightScheme::bowen(action, eps)?;
    let floor = scheme.floor_depth(min_order, cap)?;
    let tree = ExplicitTree::materialize(k_set, floor, budget)?;
    if tree.is_empty() {
        return Err(Error::Infeasible("the support set is empty".into()));
    }
    let (cover_value, _) = explicit_cover_dp::<Radical>(&tree, &scheme, s, min_order)?;
    // rational constant slightly below the exact optimum
    let shrink = BigRational::new(BigInt::from((1u64 << 16) - 1), BigInt::from(1u64 << 16));
    let mut c = cover_value.rational_lower_bound(64) * &shrink;
    if !c.is_positive() {
        return Err(Error::Infeasible("cover value is not positive".into()));
    }
    for _ in 0..64 {
        if let Some(out) = try_build(&tree, &scheme, s, min_order, floor, &c)? {
            let measure = TreeMass {
                tree: tree.clone(),
                mass: out,
                atomic: false,
            };
            debug_assert!(measure.consistent());
            return Ok(FrostmanOutput {
                measure,
                achieved_c: c,
                cover_value,
            });
        }
        c *= &shrink;
    }
    Err(Error::Infeasible(
        "no feasible constant found; the cover value may be vanishing".into(),
    ))
}

/// One feasibility attempt at constant `c`: rational floors of the capacities
/// `(1/c)(1/order)^s`, bottom-up cut computation, and a proportional top-down
/// split when the cut admits full mass.
fn try_build(
    tree: &ExplicitTree,
    scheme: &WeightScheme,
    s: crate::scalar::SRatio,
    min_order: u64,
    floor: u64,
    c: &BigRational,
) -> Result<Option<Vec<BigRational>>> {
    let n = tree.children.len();
    let inv_c = c.recip();
    let cap_at = |depth: u64| -> Option<BigRational> {
        scheme
            .order_at(depth, min_order)
            .map(|o| Radical::ball_weight(o, s).dyadic_approx(48) * &inv_c)
    };
    let mut capacity: Vec<Option<BigRational>> = vec![None; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(tree.depth[i]));
    for &i in &order {
        let d = tree.depth[i];
        if d > floor {
            continue;
        }
        let weight_cap = cap_at(d);
        let cap_here = if d < floor {
            let sum: BigRational = tree.children[i]
                .iter()
                .map(|&ch| capacity[ch].clone().expect("child capacity"))
                .sum();
            match weight_cap {
                Some(w) if w < sum => w,
                _ => sum,
            }
        } else {
            weight_cap.expect("floor depth is usable")
        };
        capacity[i] = Some(cap_here);
    }
    let root_cap = capacity[0].clone().expect("root capacity");
    if root_cap < BigRational::one() {
        return Ok(None);
    }
    let mut mass = vec![BigRational::zero(); n];
    mass[0] = BigRational::one();
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        if tree.depth[i] >= floor || tree.children[i].is_empty() {
            continue;
        }
        let total: BigRational = tree.children[i]
            .iter()
            .map(|&ch| capacity[ch].clone().unwrap())
            .sum();
        for &ch in &tree.children[i] {
            mass[ch] = &mass[i] * capacity[ch].clone().unwrap() / &total;
            stack.push(ch);
        }
    }
    Ok(Some(mass))
}

/// Exact verification of the cap inequality at every usable node:
/// `mass * c <= (1/order)^s`.
pub fn verify_frostman_caps(
    out: &FrostmanOutput,
    action: &ActionSpec,
    s: crate::scalar::SRatio,
    min_order: u64,
    eps: Radius,
) -> Result<bool> {
    let scheme = WeightScheme::bowen(action, eps)?;
    let t = &out.measure.tree;
    for i in 0..t.children.len() {
        if let Some(o) = scheme.order_at(t.depth[i], min_order) {
            let lhs = Radical::from_big_rational(&out.measure.mass[i] * &out.achieved_c);
            let rhs = Radical::ball_weight(o, s);
            if lhs > rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// distribution principle and the variational harness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Upper,
    Lower,
}

#[derive(Debug, Clone)]
pub struct DistributionCheck {
    pub holds: bool,
    pub direction: Direction,
    pub s: f64,
    pub sampled: usize,
    pub violating: usize,
    pub computed_exponent: Exponent,
    pub implication_consistent: bool,
}

/// Check the local values of `mu` on `E` against the threshold `s` and report
/// the implied bound next to the computed exponent.
#[allow(clippy::too_many_arguments)]
pub fn distribution_principle_check(
    action: &ActionSpec,
    mu: &MeasureDescriptor,
    e_set: &SubsetDescriptor,
    s: f64,
    direction: Direction,
    eps: Radius,
    order_exponents: &[u32],
    samples: u32,
    seed: u64,
    schedule: &ClassifySchedule,
    tol: Tolerances,
) -> Result<DistributionCheck> {
    let eps_order = action.cylinder_depth_for_radius(eps)?;
    let orders = aligned_order_schedule(order_exponents, eps_order);
    let max_depth = orders.iter().max().copied().unwrap_or(2) + eps_order;
    let slack = 0.02;
    let mut violating = 0usize;
    let mut sampled = 0usize;
    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let x = sample_point(mu, max_depth, &mut rng)?;
        let est = local_slow_entropy(action, mu, &x, eps, &orders)?;
        sampled += 1;
        let v = est.liminf_estimate;
        let ok = match direction {
            Direction::Upper => v <= s + slack,
            Direction::Lower => v >= s - slack,
        };
        if !ok {
            violating += 1;
        }
    }
    let holds = violating == 0;
    let (exponent, _, _, _) =
        slow_entropy_dimension(action, e_set, &[eps], schedule, tol)?;
    let implication_consistent = match direction {
        Direction::Upper => !holds || at_most(exponent, s + 2.0 * crate::scalar::sratio_to_f64(tol.s_tol)),
        Direction::Lower => !holds || at_least(exponent, s - 2.0 * crate::scalar::sratio_to_f64(tol.s_tol)),
    };
    Ok(DistributionCheck {
        holds,
        direction,
        s,
        sampled,
        violating,
        computed_exponent: exponent,
        implication_consistent,
    })
}

fn at_most(e: Exponent, bound: f64) -> bool {
    match e {
        Exponent::Finite(v) => v <= bound,
        Exponent::Infinite => false,
    }
}

fn at_least(e: Exponent, bound: f64) -> bool {
    match e {
        Exponent::Finite(v) => v >= bound,
        Exponent::Infinite => true,
    }
}

/// Exact support check: the total mass carried by the depth-`check_depth`
/// prefixes of `K` must be exactly one.
pub fn supported_in(
    mu: &MeasureDescriptor,
    k_set: &SubsetDescriptor,
    check_depth: u64,
    enumeration_cap: u64,
) -> Result<bool> {
    let words = k_set.enumerate_prefixes(check_depth, enumeration_cap)?;
    let mut total = BigRational::zero();
    for w in &words {
        total += mu.cylinder_mass(w)?;
    }
    Ok(total.is_one())
}

#[derive(Debug, Clone)]
pub struct VariationalMember {
    pub name: String,
    pub value: Exponent,
    pub standard_error: Option<f64>,
    pub integration: String,
    pub easy_direction_ok: bool,
}

#[derive(Debug, Clone)]
pub struct VariationalOutcome {
    pub h_s_top: Exponent,
    pub sup_measure_value: Exponent,
    /// `h_s_top - sup`, finite cases only
    pub gap: Option<f64>,
    pub members: Vec<VariationalMember>,
}

/// Variational experiment on a compact set: the supremum of measure slow
/// entropies over the family against the cover-side exponent, with the easy
/// direction (every member below the exponent) verified for each member.
#[allow(clippy::too_many_arguments)]
pub fn variational_gap(
    action: &ActionSpec,
    k_set: &SubsetDescriptor,
    family: &[(String, MeasureDescriptor, IntegrationSpec)],
    eps_schedule: &[Radius],
    order_exponents: &[u32],
    schedule: &ClassifySchedule,
    tol: Tolerances,
    check_depth: u64,
    enumeration_cap: u64,
) -> Result<VariationalOutcome> {
    for (name, mu, _) in family {
        mu.validate()?;
        if !supported_in(mu, k_set, check_depth, enumeration_cap)? {
            return Err(Error::SupportViolation {
                name: name.clone(),
                mass: "off-support mass at the working depth".into(),
            });
        }
    }
    let (h_s_top, _, _, _) =
        slow_entropy_dimension(action, k_set, eps_schedule, schedule, tol)?;
    let slack = 2.0 * crate::scalar::sratio_to_f64(tol.s_tol);
    let mut members = vec![];
    let mut sup = Exponent::Finite(f64::NEG_INFINITY);
    for (name, mu, ispec) in family {
        let mse = measure_slow_entropy(action, mu, eps_schedule, order_exponents, ispec)?;
        let easy = match (mse.value, h_s_top) {
            (_, Exponent::Infinite) => true,
            (Exponent::Infinite, Exponent::Finite(_)) => false,
            (Exponent::Finite(v), Exponent::Finite(h)) => v <= h + slack,
        };
        if mse.value.as_f64() > sup.as_f64() {
            sup = mse.value;
        }
        members.push(VariationalMember {
            name: name.clone(),
            value: mse.value,
            standard_error: mse.standard_error,
            integration: mse.integration.clone(),
            easy_direction_ok: easy,
        });
    }
    let gap = match (h_s_top, sup) {
        (Exponent::Finite(h), Exponent::Finite(s)) => Some(h - s),
        _ => None,
    };
    Ok(VariationalOutcome {
        h_s_top,
        sup_measure_value: sup,
        gap,
        members,
    })
}

/// Uniform choice law on a sparse product.
pub fn uniform_on_sparse(sp: &SparseProduct) -> MeasureDescriptor {
    let b = sp.branching as i64;
    MeasureDescriptor::ProductOnSparse {
        support: sp.clone(),
        probs: (0..b)
            .map(|_| BigRational::new(BigInt::one(), BigInt::from(b)))
            .collect(),
    }
}

/// Two-choice law `(p, 1-p)` on a branching-two sparse product.
pub fn biased_on_sparse(sp: &SparseProduct, p: BigRational) -> Result<MeasureDescriptor> {
    if sp.branching != 2 {
        return Err(Error::InvalidMeasure(
            "biased law is defined for branching two".into(),
        ));
    }
    let q = BigRational::one() - &p;
    MeasureDescriptor::ProductOnSparse {
        support: sp.clone(),
        probs: vec![p, q],
    }
    .validated()
}

impl MeasureDescriptor {
    fn validated(self) -> Result<MeasureDescriptor> {
        self.validate()?;
        Ok(self)
    }
}

/// Markov law on the golden-mean shift (rows renormalized so that state 1
/// always returns to 0).
pub fn golden_mean_markov(p_stay: BigRational) -> Result<MeasureDescriptor> {
    let one = BigRational::one();
    MeasureDescriptor::Markov {
        initial: vec![one.clone() - &p_stay, p_stay.clone()],
        rows: vec![
            vec![one.clone() - &p_stay, p_stay.clone()],
            vec![one.clone(), BigRational::zero()],
        ],
    }
    .validated()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::benchmarks;
    use num::rational::Ratio;

    fn line() -> ActionSpec {
        ActionSpec::one_sided_line()
    }

    fn r(p: u64, q: u64) -> Radius {
        Ratio::new(p, q)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn sp2() -> SparseProduct {
        match benchmarks::sparse_powers_of_two(2) {
            SubsetDescriptor::Sparse(sp) => sp,
            _ => unreachable!(),
        }
    }

    #[test]
    fn cylinder_masses() {
        let bern = MeasureDescriptor::Bernoulli {
            probs: vec![rat(1, 2), rat(1, 2)],
        };
        assert_eq!(
            bern.cylinder_mass(&Word(vec![0, 1, 1, 0])).unwrap(),
            rat(1, 16)
        );
        assert_eq!(bern.cylinder_mass(&Word(vec![])).unwrap(), rat(1, 1));

        let unif = uniform_on_sparse(&sp2());
        // free positions {1, 2, 4} below depth 5
        let w = Word(vec![0, 1, 0, 0, 1]);
        assert_eq!(unif.cylinder_mass(&w).unwrap(), rat(1, 8));
        // off-support: non-default at a bound position
        let w = Word(vec![1]);
        assert_eq!(unif.cylinder_mass(&w).unwrap(), rat(0, 1));

        let pm = MeasureDescriptor::PointMass {
            point: PeriodicPoint::constant(0),
        };
        assert_eq!(pm.cylinder_mass(&Word(vec![0, 0, 0])).unwrap(), rat(1, 1));
        assert_eq!(pm.cylinder_mass(&Word(vec![0, 1])).unwrap(), rat(0, 1));
    }

    #[test]
    fn markov_masses_follow_transitions() {
        let gm = golden_mean_markov(rat(1, 3)).unwrap();
        // w = 0 1 0: (2/3) * (1/3) * 1
        assert_eq!(
            gm.cylinder_mass(&Word(vec![0, 1, 0])).unwrap(),
            rat(2, 9)
        );
        // adjacent ones are impossible
        assert_eq!(gm.cylinder_mass(&Word(vec![1, 1])).unwrap(), rat(0, 1));
    }

    #[test]
    fn local_values_track_the_degree() {
        let unif = uniform_on_sparse(&sp2());
        let x = representative_point(&unif).unwrap();
        let est = local_slow_entropy(&line(), &unif, &x, r(2, 5), &aligned_order_schedule(&[8, 10, 12], 2)).unwrap();
        assert!(est.decided);
        assert!(
            (est.liminf_estimate - 1.0).abs() <= 0.05,
            "{est:?}"
        );
        // point mass: local values all zero
        let pm = MeasureDescriptor::PointMass {
            point: PeriodicPoint::constant(0),
        };
        let est = local_slow_entropy(
            &line(),
            &pm,
            &SamplePoint::Periodic(PeriodicPoint::constant(0)),
            r(2, 5),
            &[16, 64, 256],
        )
        .unwrap();
        assert_eq!(est.liminf_estimate, 0.0);
    }

    #[test]
    fn positive_entropy_diverges() {
        let bern = MeasureDescriptor::Bernoulli {
            probs: vec![rat(1, 2), rat(1, 2)],
        };
        let x = SamplePoint::Periodic(PeriodicPoint::constant(0));
        let est = local_slow_entropy(&line(), &bern, &x, r(2, 5), &[1 << 10]).unwrap();
        assert!(est.values[0].1 > 5.0, "{est:?}");
    }

    #[test]
    fn integrated_values() {
        let unif = uniform_on_sparse(&sp2());
        let mse = measure_slow_entropy(
            &line(),
            &unif,
            &[r(2, 5)],
            &[8, 10, 12],
            &IntegrationSpec::Exact,
        )
        .unwrap();
        assert!((mse.value.as_f64() - 1.0).abs() <= 0.05, "{mse:?}");

        let pm = MeasureDescriptor::PointMass {
            point: PeriodicPoint::constant(0),
        };
        let mse = measure_slow_entropy(
            &line(),
            &pm,
            &[r(2, 5)],
            &[8, 10, 12],
            &IntegrationSpec::Atomic,
        )
        .unwrap();
        assert_eq!(mse.value.as_f64(), 0.0);
    }

    #[test]
    fn biased_monte_carlo_matches_entropy_ratio() {
        let biased = biased_on_sparse(&sp2(), rat(4, 5)).unwrap();
        let mse = measure_slow_entropy(
            &line(),
            &biased,
            &[r(2, 5)],
            &[10, 11, 12, 13, 14],
            &IntegrationSpec::MonteCarlo {
                samples: 2048,
                seed: 7,
            },
        )
        .unwrap();
        let h = 0.8f64 * (1.0f64 / 0.8).ln() + 0.2 * (1.0f64 / 0.2).ln();
        let expect = h / 2f64.ln();
        assert!(
            (mse.value.as_f64() - expect).abs() <= 0.05,
            "got {:?} want {expect}",
            mse.value
        );
        assert!(mse.standard_error.unwrap() < 0.02);
    }

    #[test]
    fn monte_carlo_reproducible() {
        let biased = biased_on_sparse(&sp2(), rat(4, 5)).unwrap();
        let run = || {
            measure_slow_entropy(
                &line(),
                &biased,
                &[r(2, 5)],
                &[10, 12],
                &IntegrationSpec::MonteCarlo {
                    samples: 256,
                    seed: 11,
                },
            )
            .unwrap()
            .value
            .as_f64()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn frostman_singleton() {
        let k = benchmarks::singleton_zero();
        let out = frostman_construct(&line(), &k, Ratio::new(1, 1), 2, r(2, 5), 50, 10_000).unwrap();
        // cover value is exactly 1/49 and the constant sits just below it
        assert_eq!(out.cover_value, Radical::ball_weight(49, Ratio::new(1, 1)));
        let c = out.achieved_c.to_f64().unwrap();
        assert!(c <= 1.0 / 49.0 && c > 0.9 / 49.0, "c = {c}");
        assert!(verify_frostman_caps(&out, &line(), Ratio::new(1, 1), 2, r(2, 5)).unwrap());
        assert!(out.measure.consistent());
    }

    #[test]
    fn frostman_sparse_product_caps_hold_exactly() {
        let k = benchmarks::sparse_powers_of_two(2);
        let s = Ratio::new(9, 10);
        let out = frostman_construct(&line(), &k, s, 2, r(2, 5), 64, 1 << 22).unwrap();
        assert!(verify_frostman_caps(&out, &line(), s, 2, r(2, 5)).unwrap());
        assert!(out.measure.consistent());
        // local values of the built measure stay near or above s on samples
        let mu = MeasureDescriptor::TreeMass(out.measure.clone());
        let mut ok = 0;
        let total = 40;
        for i in 0..total {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            rng.set_stream(i);
            let x = sample_point(&mu, 64, &mut rng).unwrap();
            let est = local_slow_entropy(&line(), &mu, &x, r(2, 5), &[30, 62]).unwrap();
            if est.liminf_estimate >= 0.9 - 0.1 {
                ok += 1;
            }
        }
        assert!(ok * 100 >= 95 * total, "only {ok}/{total} above the bar");
    }

    #[test]
    fn frostman_constant_shrinks_above_the_dimension() {
        let k = benchmarks::sparse_powers_of_two(2);
        let s = Ratio::new(11, 10);
        let c32 = frostman_construct(&line(), &k, s, 2, r(2, 5), 32, 1 << 22)
            .unwrap()
            .achieved_c;
        let c128 = frostman_construct(&line(), &k, s, 2, r(2, 5), 128, 1 << 22)
            .unwrap()
            .achieved_c;
        assert!(c128 < c32, "constant must decay above the dimension");
    }

    #[test]
    fn support_checks() {
        let k = benchmarks::sparse_powers_of_two(2);
        let unif = uniform_on_sparse(&sp2());
        assert!(supported_in(&unif, &k, 8, 10_000).unwrap());
        let bern = MeasureDescriptor::Bernoulli {
            probs: vec![rat(1, 2), rat(1, 2)],
        };
        assert!(!supported_in(&bern, &k, 8, 10_000).unwrap());
        let full = benchmarks::full_shift(crate::lattice::Alphabet::new(2).unwrap());
        assert!(supported_in(&bern, &full, 8, 10_000).unwrap());
    }

    #[test]
    fn variational_on_singleton() {
        let k = benchmarks::singleton_zero();
        let family = vec![(
            "point".to_string(),
            MeasureDescriptor::PointMass {
                point: PeriodicPoint::constant(0),
            },
            IntegrationSpec::Atomic,
        )];
        let out = variational_gap(
            &line(),
            &k,
            &family,
            &[r(1, 2), r(1, 4)],
            &[8, 10, 12],
            &ClassifySchedule::default_ladder(1024),
            Tolerances::default(),
            6,
            10_000,
        )
        .unwrap();
        assert_eq!(out.h_s_top.as_f64(), 0.0);
        assert_eq!(out.sup_measure_value.as_f64(), 0.0);
        assert_eq!(out.gap, Some(0.0));
        assert!(out.members[0].easy_direction_ok);
    }

    #[test]
    fn off_support_member_is_named() {
        let k = benchmarks::sparse_powers_of_two(2);
        let family = vec![(
            "bern".to_string(),
            MeasureDescriptor::Bernoulli {
                probs: vec![rat(1, 2), rat(1, 2)],
            },
            IntegrationSpec::MonteCarlo {
                samples: 16,
                seed: 0,
            },
        )];
        let err = variational_gap(
            &line(),
            &k,
            &family,
            &[r(1, 2)],
            &[8],
            &ClassifySchedule::default_ladder(256),
            Tolerances::default(),
            6,
            10_000,
        )
        .unwrap_err();
        match err {
            Error::SupportViolation { name, .. } => assert_eq!(name, "bern"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn distribution_checks() {
        let k = benchmarks::sparse_powers_of_two(2);
        let unif = uniform_on_sparse(&sp2());
        let sched = ClassifySchedule::default_ladder(2048);
        let check = distribution_principle_check(
            &line(),
            &unif,
            &k,
            1.0,
            Direction::Lower,
            r(2, 5),
            &[10, 12],
            64,
            5,
            &sched,
            Tolerances::default(),
        )
        .unwrap();
        assert!(check.holds, "{check:?}");
        assert!(check.implication_consistent);
        let check = distribution_principle_check(
            &line(),
            &unif,
            &k,
            1.5,
            Direction::Lower,
            r(2, 5),
            &[10, 12],
            64,
            5,
            &sched,
            Tolerances::default(),
        )
        .unwrap();
        assert!(!check.holds, "local values near 1 cannot clear 1.5");
    }
}
