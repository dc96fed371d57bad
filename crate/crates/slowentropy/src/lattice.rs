//! Lattice bookkeeping for shift actions: box cardinalities, the cylinder
//! metric on sequence space, and the exact Bowen-ball/cylinder correspondence.
//!
//! Conventions for `d = 1` one-sided actions: `H_n = {0, .., n-1}`, so two
//! sequences first disagreeing at index `j` have disagreement order `j + 1`
//! and distance `1/lambda_{j+1}`. A depth-`m` cylinder fixes the first `m`
//! coordinates and has diameter `1/lambda_{m+1}`.

use num::rational::Ratio;
use num::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact positive rational radius, `num/den`.
pub type Radius = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

/// A lattice action: dimension `d` with `L = Z_+^d` or `Z^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub d: u32,
    pub sided: Sidedness,
}

impl ActionSpec {
    pub fn new(d: u32, sided: Sidedness) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDescriptor(
                "lattice dimension d must be positive".into(),
            ));
        }
        Ok(ActionSpec { d, sided })
    }

    pub fn one_sided_line() -> Self {
        ActionSpec {
            d: 1,
            sided: Sidedness::OneSided,
        }
    }

    pub fn is_one_sided_line(&self) -> bool {
        self.d == 1 && self.sided == Sidedness::OneSided
    }

    /// Side length of the box `H_n` along one axis.
    fn side(&self, n: u64) -> u64 {
        match self.sided {
            Sidedness::OneSided => n,
            Sidedness::TwoSided => 2 * n - 1,
        }
    }

    /// `lambda_n = #H_n`: `n^d` one-sided, `(2n-1)^d` two-sided.
    pub fn lambda(&self, n: u64) -> Result<BigUint> {
        if n == 0 {
            return Err(Error::ZeroBoxIndex);
        }
        Ok(BigUint::from(self.side(n)).pow(self.d))
    }

    /// `lambda_n` as a `u64`; errors if the box count overflows.
    pub fn lambda_u64(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::ZeroBoxIndex);
        }
        let side = self.side(n);
        let mut acc: u64 = 1;
        for _ in 0..self.d {
            acc = acc
                .checked_mul(side)
                .ok_or_else(|| Error::InvalidDescriptor("lambda_n overflows u64".into()))?;
        }
        Ok(acc)
    }

    /// Unique `n` with `1/lambda_{n+1} <= eps < 1/lambda_n`, for `0 < eps < 1`.
    ///
    /// The boundary `eps = 1/lambda_{n+1}` resolves downward to `n`.
    pub fn cylinder_depth_for_radius(&self, eps: Radius) -> Result<u64> {
        let (p, q) = (*eps.numer(), *eps.denom());
        if p == 0 || p >= q {
            return Err(Error::RadiusOutOfRange(format!("{p}/{q}")));
        }
        // lambda_n < q/p <= lambda_{n+1}, i.e. lambda_n * p < q <= lambda_{n+1} * p.
        let target = BigUint::from(q);
        let p_big = BigUint::from(p);
        let mut n = 1u64;
        loop {
            let next = self.lambda(n + 1)? * &p_big;
            if target <= next {
                debug_assert!(self.lambda(n).unwrap() * &p_big < target);
                return Ok(n);
            }
            n += 1;
        }
    }
}

/// Symbol set `{0, .., k-1}` with `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    pub k: u8,
}

impl Alphabet {
    pub fn new(k: u8) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDescriptor(
                "alphabet must have at least 2 symbols".into(),
            ));
        }
        Ok(Alphabet { k })
    }

    pub fn contains(&self, symbol: u8) -> bool {
        symbol < self.k
    }

    pub fn symbols(&self) -> impl Iterator<Item = u8> {
        0..self.k
    }
}

/// Finite word over an alphabet; a plain word denotes the cylinder it stems.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn depth(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for s in &self.0 {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Eventually periodic point `u v^inf` of the one-sided shift space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub preperiod: Vec<u8>,
    pub period: Vec<u8>,
}

impl PeriodicPoint {
    pub fn new(preperiod: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidDescriptor(
                "eventually periodic point needs a nonempty period".into(),
            ));
        }
        Ok(PeriodicPoint { preperiod, period })
    }

    pub fn constant(symbol: u8) -> Self {
        PeriodicPoint {
            preperiod: vec![],
            period: vec![symbol],
        }
    }

    pub fn symbol_at(&self, i: u64) -> u8 {
        let pre = self.preperiod.len() as u64;
        if i < pre {
            self.preperiod[i as usize]
        } else {
            let j = (i - pre) % self.period.len() as u64;
            self.period[j as usize]
        }
    }

    pub fn prefix(&self, n: u32) -> Word {
        Word((0..n as u64).map(|i| self.symbol_at(i)).collect())
    }

    /// The shifted point `sigma^i x`.
    pub fn shift(&self, i: u64) -> PeriodicPoint {
        let pre = self.preperiod.len() as u64;
        if i <= pre {
            PeriodicPoint {
                preperiod: self.preperiod[i as usize..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let j = ((i - pre) % self.period.len() as u64) as usize;
            let mut period = self.period[j..].to_vec();
            period.extend_from_slice(&self.period[..j]);
            PeriodicPoint {
                preperiod: vec![],
                period,
            }
        }
    }

    /// Exact equality of the two infinite sequences.
    pub fn same_point(&self, other: &PeriodicPoint) -> bool {
        let pre = self.preperiod.len().max(other.preperiod.len()) as u64;
        let lcm = num::integer::lcm(self.period.len() as u64, other.period.len() as u64);
        (0..pre + lcm).all(|i| self.symbol_at(i) == other.symbol_at(i))
    }

    /// Normal form: primitive period, preperiod stripped of any tail that the
    /// rotated period already produces. Equal sequences share their normal form.
    pub fn canonical(&self) -> PeriodicPoint {
        let mut period = self.period.clone();
        // primitive period
        for d in 1..=period.len() {
            if period.len().is_multiple_of(d) && period.chunks(d).all(|c| c == &period[..d]) {
                period.truncate(d);
                break;
            }
        }
        let mut preperiod = self.preperiod.clone();
        while let Some(&last) = preperiod.last() {
            if last == *period.last().unwrap() {
                preperiod.pop();
                period.rotate_right(1);
            } else {
                break;
            }
        }
        PeriodicPoint { preperiod, period }
    }
}

/// Cylinder `C_m(stem)`: coordinates on `H_m` fixed. For `d = 1` one-sided the
/// depth equals the stem length and the diameter is `1/lambda_{m+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CylinderSet {
    pub stem: Word,
}

impl CylinderSet {
    pub fn depth(&self) -> u32 {
        self.stem.depth()
    }

    pub fn diameter(&self, action: &ActionSpec) -> Result<Ratio<BigUint>> {
        Ok(Ratio::new(
            BigUint::one(),
            action.lambda(self.depth() as u64 + 1)?,
        ))
    }

    /// Nested-or-disjoint: cylinders intersect iff one stem prefixes the other.
    pub fn contains(&self, other: &CylinderSet) -> bool {
        self.stem.is_prefix_of(&other.stem)
    }

    pub fn is_disjoint_from(&self, other: &CylinderSet) -> bool {
        !self.contains(other) && !other.contains(self)
    }
}

/// Bowen ball `B_n(center, eps)` described by a center prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BowenBall {
    pub center: Word,
    pub order: u64,
    pub radius: Radius,
}

impl BowenBall {
    pub fn new(center: Word, order: u64, radius: Radius) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroBoxIndex);
        }
        Ok(BowenBall {
            center,
            order,
            radius,
        })
    }
}

/// Outcome of comparing two words over their decided range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Disagreement {
    /// `n(w, w')`: least `k` with agreement on `H_{k-1}` and a disagreement in
    /// `H_k \ H_{k-1}`.
    At(u64),
    /// Identical on the full compared range.
    Agree,
}

/// `n(w, w')` for one-sided words, or `Agree` when identical.
///
/// Errors with `InsufficientLength` when the words agree on their whole common
/// range but one is shorter, so the disagreement order is undecided.
pub fn first_disagreement(w: &Word, w2: &Word) -> Result<Disagreement> {
    let common = w.0.len().min(w2.0.len());
    for j in 0..common {
        if w.0[j] != w2.0[j] {
            return Ok(Disagreement::At(j as u64 + 1));
        }
    }
    if w.0.len() == w2.0.len() {
        Ok(Disagreement::Agree)
    } else {
        Err(Error::InsufficientLength)
    }
}

/// Cylinder-metric distance `1/lambda_{n(w,w')}`, `0` when the words agree.
pub fn metric_distance(action: &ActionSpec, w: &Word, w2: &Word) -> Result<Ratio<BigUint>> {
    match first_disagreement(w, w2)? {
        Disagreement::Agree => Ok(Ratio::new(BigUint::ZERO, BigUint::one())),
        Disagreement::At(n) => Ok(Ratio::new(BigUint::one(), action.lambda(n)?)),
    }
}

/// Distance between eventually periodic points, exact.
pub fn point_distance(
    action: &ActionSpec,
    x: &PeriodicPoint,
    y: &PeriodicPoint,
) -> Result<Ratio<BigUint>> {
    if x.same_point(y) {
        return Ok(Ratio::new(BigUint::ZERO, BigUint::one()));
    }
    let bound =
        (x.preperiod.len().max(y.preperiod.len()) as u64) + num::integer::lcm(x.period.len() as u64, y.period.len() as u64);
    for i in 0..bound {
        if x.symbol_at(i) != y.symbol_at(i) {
            return Ok(Ratio::new(BigUint::one(), action.lambda(i + 1)?));
        }
    }
    unreachable!("distinct eventually periodic points disagree within preperiod + lcm of periods");
}

/// `B_k(center, eps) = C_{k + n(eps) - 1}(center)` for the one-sided line.
///
/// The center prefix must be long enough to stem the resulting cylinder.
pub fn bowen_ball_as_cylinder(action: &ActionSpec, ball: &BowenBall) -> Result<CylinderSet> {
    if !action.is_one_sided_line() {
        return Err(Error::UnsupportedAction);
    }
    let n_eps = action.cylinder_depth_for_radius(ball.radius)?;
    let depth = ball.order + n_eps - 1;
    if (ball.center.depth() as u64) < depth {
        return Err(Error::InsufficientLength);
    }
    Ok(CylinderSet {
        stem: Word(ball.center.0[..depth as usize].to_vec()),
    })
}

/// Bowen ball of order `k` for the power action `sigma^m` as a cylinder of
/// depth `m(k-1) + n(eps)`, valid only when `n(eps) >= m` so the constrained
/// coordinate windows overlap into one contiguous block.
pub fn power_ball_as_cylinder(
    action: &ActionSpec,
    power: u32,
    ball: &BowenBall,
) -> Result<CylinderSet> {
    if !action.is_one_sided_line() || power == 0 {
        return Err(Error::UnsupportedAction);
    }
    let n_eps = action.cylinder_depth_for_radius(ball.radius)?;
    if n_eps < power as u64 {
        return Err(Error::DisconnectedWindows {
            power,
            resolution: n_eps as u32,
        });
    }
    let depth = (power as u64) * (ball.order - 1) + n_eps;
    if (ball.center.depth() as u64) < depth {
        return Err(Error::InsufficientLength);
    }
    Ok(CylinderSet {
        stem: Word(ball.center.0[..depth as usize].to_vec()),
    })
}

/// Membership of `y` in `B_k(x, eps)` for `sigma^m`, decided by direct `d_k`
/// evaluation on shifted points.
///
/// Metric values are discrete (`1/lambda_m`), so `d < eps` is equivalent to
/// `d <= 1/lambda_{n(eps)+1}` away from boundary radii; the boundary
/// `eps = 1/lambda_{n+1}` is read closed to match the downward depth
/// convention of [`ActionSpec::cylinder_depth_for_radius`].
pub fn power_ball_member(
    action: &ActionSpec,
    power: u64,
    x: &PeriodicPoint,
    y: &PeriodicPoint,
    order: u64,
    eps: Radius,
) -> Result<bool> {
    let n_eps = action.cylinder_depth_for_radius(eps)?;
    let threshold = Ratio::new(BigUint::one(), action.lambda(n_eps + 1)?);
    for j in 0..order {
        let d = point_distance(action, &x.shift(power * j), &y.shift(power * j))?;
        if d > threshold {
            return Ok(false);
        }
    }
    Ok(true)
}
