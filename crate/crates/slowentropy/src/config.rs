//! Experiment configuration: a TOML document with named subsets, measures and
//! schedules. Radii, exponents and probabilities are exact rationals written
//! as `"p/q"` strings; float literals are rejected so nothing is silently
//! rounded.

use num::rational::Ratio;
use num::{BigInt, BigRational};
use serde::Deserialize;
use std::collections::BTreeMap;

use crate::cover::ClassifySchedule;
use crate::dims::Tolerances;
use crate::error::{Error, Result};
use crate::lattice::{ActionSpec, Alphabet, PeriodicPoint, Radius, Sidedness};
use crate::measures::{IntegrationSpec, MeasureDescriptor};
use crate::scalar::SRatio;
use crate::subsets::{FreeGenerator, RegularSet, SparseProduct, SubsetDescriptor};

fn parse_u64_ratio(text: &str, path: &str) -> Result<Ratio<u64>> {
    let parts: Vec<&str> = text.split('/').collect();
    let parse = |t: &str| -> Option<u64> { t.trim().parse().ok() };
    let (num, den) = match parts.as_slice() {
        [n] => (parse(n), Some(1)),
        [n, d] => (parse(n), parse(d)),
        _ => (None, None),
    };
    match (num, den) {
        (Some(n), Some(d)) if d > 0 => Ok(Ratio::new(n, d)),
        _ => Err(Error::Schema {
            path: path.into(),
            expected: "rational written as \"p/q\" (for example \"3/10\")".into(),
            found: format!("\"{text}\""),
        }),
    }
}

fn parse_big_ratio(text: &str, path: &str) -> Result<BigRational> {
    let r = parse_u64_ratio(text, path)?;
    Ok(BigRational::new(
        BigInt::from(*r.numer()),
        BigInt::from(*r.denom()),
    ))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawConfig {
    action: RawAction,
    alphabet: RawAlphabet,
    #[serde(default)]
    subsets: BTreeMap<String, RawSubset>,
    #[serde(default)]
    measures: BTreeMap<String, RawMeasure>,
    #[serde(default)]
    schedules: RawSchedules,
    #[serde(default)]
    analyze: Option<RawAnalyze>,
    #[serde(default)]
    verify: Option<RawVerify>,
    #[serde(default)]
    variational: Option<RawVariational>,
    #[serde(default)]
    sweep: Option<RawSweep>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAction {
    d: u32,
    sided: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAlphabet {
    k: u8,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawPoint {
    #[serde(default)]
    preperiod: Vec<u8>,
    period: Vec<u8>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
enum RawSubset {
    #[serde(rename = "finite")]
    Finite { points: Vec<RawPoint> },
    #[serde(rename = "regular")]
    Regular {
        states: u32,
        start: u32,
        accepting: Vec<u32>,
        transitions: Vec<(u32, u8, u32)>,
    },
    #[serde(rename = "sparse-product")]
    SparseProduct {
        generator: RawGenerator,
        branching: u8,
        #[serde(default)]
        default_symbol: u8,
    },
    #[serde(rename = "union")]
    Union { members: Vec<String> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
enum RawGenerator {
    #[serde(rename = "powers")]
    Powers {
        base: u32,
        #[serde(default)]
        shift: u64,
    },
    #[serde(rename = "explicit")]
    Explicit { positions: Vec<u64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", tag = "kind")]
enum RawMeasure {
    #[serde(rename = "bernoulli")]
    Bernoulli { support: String, probs: Vec<String> },
    #[serde(rename = "markov")]
    Markov {
        support: String,
        initial: Vec<String>,
        rows: Vec<Vec<String>>,
    },
    #[serde(rename = "product-on-sparse")]
    ProductOnSparse { support: String, probs: Vec<String> },
    #[serde(rename = "point-mass")]
    PointMass { support: String, point: RawPoint },
}

#[derive(Debug, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawSchedules {
    epsilons: Option<Vec<String>>,
    max_cap: Option<u64>,
    max_order: Option<u64>,
    s_tol: Option<String>,
    s_max: Option<String>,
    zero_tol: Option<f64>,
    inf_tol: Option<f64>,
    slope_tol: Option<f64>,
    order_exponents: Option<Vec<u32>>,
    mc_samples: Option<u32>,
    check_depth: Option<u64>,
    enumeration_cap: Option<u64>,
    node_budget: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawAnalyze {
    #[serde(default)]
    subsets: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawVerify {
    #[serde(default)]
    chain_s: Option<Vec<String>>,
    #[serde(default)]
    chain_delta: Option<Vec<String>>,
    #[serde(default)]
    chain_eps: Option<String>,
    #[serde(default)]
    chain_cap: Option<u64>,
    #[serde(default)]
    chain_min_order: Option<u64>,
    #[serde(default)]
    ball_families: Option<u32>,
    #[serde(default)]
    power_subsets: Option<Vec<String>>,
    #[serde(default)]
    inject_fault: Option<bool>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawVariational {
    experiments: Vec<RawExperiment>,
    #[serde(default)]
    frostman: Vec<RawFrostman>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawExperiment {
    support: String,
    measures: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawFrostman {
    support: String,
    s: String,
    #[serde(default)]
    min_order: Option<u64>,
    #[serde(default)]
    eps: Option<String>,
    caps: Vec<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct RawSweep {
    subsets: Vec<String>,
    s_values: Vec<String>,
    min_orders: Vec<u64>,
    epsilons: Vec<String>,
    caps: Vec<u64>,
}

// --- resolved configuration -------------------------------------------------

#[derive(Debug, Clone)]
pub struct Schedules {
    pub epsilons: Vec<Radius>,
    pub deep: ClassifySchedule,
    pub order_driven: ClassifySchedule,
    pub tol: Tolerances,
    pub order_exponents: Vec<u32>,
    pub mc_samples: u32,
    pub check_depth: u64,
    pub enumeration_cap: u64,
    pub node_budget: u64,
}

#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub chain_s: Vec<SRatio>,
    pub chain_delta: Vec<SRatio>,
    pub chain_eps: Radius,
    pub chain_cap: u64,
    pub chain_min_order: u64,
    pub ball_families: u32,
    pub power_subsets: Vec<String>,
    pub inject_fault: bool,
}

#[derive(Debug, Clone)]
pub struct VariationalExperiment {
    pub support: String,
    pub measures: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct FrostmanRequest {
    pub support: String,
    pub s: SRatio,
    pub min_order: u64,
    pub eps: Radius,
    pub caps: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub subsets: Vec<String>,
    pub s_values: Vec<SRatio>,
    pub min_orders: Vec<u64>,
    pub epsilons: Vec<Radius>,
    pub caps: Vec<u64>,
}

#[derive(Debug)]
pub struct ExperimentConfig {
    pub action: ActionSpec,
    pub alphabet: Alphabet,
    pub subsets: BTreeMap<String, SubsetDescriptor>,
    /// name -> (support name, measure)
    pub measures: BTreeMap<String, (String, MeasureDescriptor)>,
    pub schedules: Schedules,
    pub analyze_subsets: Vec<String>,
    pub verify: VerifySettings,
    pub variational: Vec<VariationalExperiment>,
    pub frostman: Vec<FrostmanRequest>,
    pub sweep: Option<SweepGrid>,
}

impl ExperimentConfig {
    pub fn subset(&self, name: &str) -> Result<&SubsetDescriptor> {
        self.subsets
            .get(name)
            .ok_or_else(|| Error::Semantic(format!("unknown subset '{name}'")))
    }

    pub fn measure(&self, name: &str) -> Result<&(String, MeasureDescriptor)> {
        self.measures
            .get(name)
            .ok_or_else(|| Error::Semantic(format!("unknown measure '{name}'")))
    }

    /// Default integration rule for a measure: exact for constant integrands,
    /// atomic for point masses, seeded sampling otherwise.
    pub fn integration_for(&self, mu: &MeasureDescriptor, seed: u64) -> IntegrationSpec {
        match mu {
            MeasureDescriptor::PointMass { .. } => IntegrationSpec::Atomic,
            MeasureDescriptor::ProductOnSparse { probs, .. }
                if probs.windows(2).all(|w| w[0] == w[1]) =>
            {
                IntegrationSpec::Exact
            }
            _ => IntegrationSpec::MonteCarlo {
                samples: self.schedules.mc_samples,
                seed,
            },
        }
    }
}

fn resolve_point(p: &RawPoint) -> Result<PeriodicPoint> {
    PeriodicPoint::new(p.preperiod.clone(), p.period.clone())
}

fn resolve_subset(
    name: &str,
    raw: &RawSubset,
    alphabet: Alphabet,
    resolved: &BTreeMap<String, SubsetDescriptor>,
) -> Result<SubsetDescriptor> {
    let desc = match raw {
        RawSubset::Finite { points } => SubsetDescriptor::Finite(
            points
                .iter()
                .map(resolve_point)
                .collect::<Result<Vec<_>>>()?,
        ),
        RawSubset::Regular {
            states,
            start,
            accepting,
            transitions,
        } => SubsetDescriptor::Regular(RegularSet::build(
            *states,
            *start,
            transitions,
            accepting,
            alphabet,
        )?),
        RawSubset::SparseProduct {
            generator,
            branching,
            default_symbol,
        } => {
            let gen = match generator {
                RawGenerator::Powers { base, shift } => FreeGenerator::Powers {
                    base: *base,
                    shift: *shift,
                },
                RawGenerator::Explicit { positions } => FreeGenerator::Explicit {
                    positions: positions.clone(),
                },
            };
            SubsetDescriptor::Sparse(SparseProduct::new(gen, *branching, *default_symbol)?)
        }
        RawSubset::Union { members } => {
            let mut parts = vec![];
            for m in members {
                let part = resolved.get(m).ok_or_else(|| {
                    Error::Semantic(format!(
                        "union '{name}' references subset '{m}'; members must be \
                         non-union subsets declared in the same document"
                    ))
                })?;
                parts.push(part.clone());
            }
            SubsetDescriptor::union(parts)
        }
    };
    desc.validate(alphabet)?;
    Ok(desc)
}

fn resolve_measure(
    name: &str,
    raw: &RawMeasure,
    alphabet: Alphabet,
    subsets: &BTreeMap<String, SubsetDescriptor>,
) -> Result<(String, MeasureDescriptor)> {
    let support_name = match raw {
        RawMeasure::Bernoulli { support, .. }
        | RawMeasure::Markov { support, .. }
        | RawMeasure::ProductOnSparse { support, .. }
        | RawMeasure::PointMass { support, .. } => support.clone(),
    };
    let support = subsets.get(&support_name).ok_or_else(|| {
        Error::Semantic(format!(
            "measure '{name}' references undeclared subset '{support_name}'"
        ))
    })?;
    let path = |field: &str| format!("measures.{name}.{field}");
    let mu = match raw {
        RawMeasure::Bernoulli { probs, .. } => {
            if probs.len() != alphabet.k as usize {
                return Err(Error::Semantic(format!(
                    "measure '{name}': law arity {} does not match alphabet size {}",
                    probs.len(),
                    alphabet.k
                )));
            }
            MeasureDescriptor::Bernoulli {
                probs: probs
                    .iter()
                    .map(|p| parse_big_ratio(p, &path("probs")))
                    .collect::<Result<_>>()?,
            }
        }
        RawMeasure::Markov { initial, rows, .. } => MeasureDescriptor::Markov {
            initial: initial
                .iter()
                .map(|p| parse_big_ratio(p, &path("initial")))
                .collect::<Result<_>>()?,
            rows: rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|p| parse_big_ratio(p, &path("rows")))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?,
        },
        RawMeasure::ProductOnSparse { probs, .. } => {
            let sp = match support {
                SubsetDescriptor::Sparse(sp) => sp.clone(),
                _ => {
                    return Err(Error::Semantic(format!(
                        "measure '{name}' needs a sparse-product support"
                    )))
                }
            };
            MeasureDescriptor::ProductOnSparse {
                support: sp,
                probs: probs
                    .iter()
                    .map(|p| parse_big_ratio(p, &path("probs")))
                    .collect::<Result<_>>()?,
            }
        }
        RawMeasure::PointMass { point, .. } => MeasureDescriptor::PointMass {
            point: resolve_point(point)?,
        },
    };
    mu.validate()?;
    Ok((support_name, mu))
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Schema {
        path: e
            .span()
            .map(|s| format!("bytes {}..{}", s.start, s.end))
            .unwrap_or_else(|| "document".into()),
        expected: "well-formed configuration".into(),
        found: e.message().to_string(),
    })?;
    let sided = match raw.action.sided.as_str() {
        "one-sided" => Sidedness::OneSided,
        "two-sided" => Sidedness::TwoSided,
        other => {
            return Err(Error::Schema {
                path: "action.sided".into(),
                expected: "\"one-sided\" or \"two-sided\"".into(),
                found: format!("\"{other}\""),
            })
        }
    };
    let action = ActionSpec::new(raw.action.d, sided)?;
    let alphabet = Alphabet::new(raw.alphabet.k)?;

    let sch = &raw.schedules;
    let max_cap = sch.max_cap.unwrap_or(4096);
    let max_order = sch.max_order.unwrap_or(256);
    let mut deep = ClassifySchedule::default_ladder(max_cap);
    let mut order_driven = ClassifySchedule::order_driven_ladder(max_order);
    if let Some(z) = sch.zero_tol {
        deep.zero_tol = z;
        order_driven.zero_tol = z;
    }
    if let Some(z) = sch.inf_tol {
        deep.inf_tol = z;
        order_driven.inf_tol = z;
    }
    if let Some(z) = sch.slope_tol {
        deep.slope_tol = z;
        order_driven.slope_tol = z;
    }
    let epsilons = match &sch.epsilons {
        Some(list) => list
            .iter()
            .map(|e| parse_u64_ratio(e, "schedules.epsilons"))
            .collect::<Result<Vec<_>>>()?,
        None => vec![Ratio::new(1, 2), Ratio::new(1, 4), Ratio::new(1, 8)],
    };
    for &eps in &epsilons {
        if eps >= Ratio::new(1, 1) || *eps.numer() == 0 {
            return Err(Error::Semantic(format!(
                "radius {eps} outside (0, 1) in schedules.epsilons"
            )));
        }
    }
    let tol = Tolerances {
        s_tol: sch
            .s_tol
            .as_deref()
            .map(|t| parse_u64_ratio(t, "schedules.s-tol"))
            .transpose()?
            .unwrap_or(Ratio::new(1, 20)),
        s_max: sch
            .s_max
            .as_deref()
            .map(|t| parse_u64_ratio(t, "schedules.s-max"))
            .transpose()?
            .unwrap_or(Ratio::new(8, 1)),
    };
    let schedules = Schedules {
        epsilons,
        deep,
        order_driven,
        tol,
        order_exponents: sch
            .order_exponents
            .clone()
            .unwrap_or_else(|| (4..=14).collect()),
        mc_samples: sch.mc_samples.unwrap_or(4096),
        check_depth: sch.check_depth.unwrap_or(8),
        enumeration_cap: sch.enumeration_cap.unwrap_or(1_000_000),
        node_budget: sch.node_budget.unwrap_or(crate::tree::DEFAULT_NODE_BUDGET),
    };

    let mut subsets = BTreeMap::new();
    // unions reference other names; resolve non-unions first
    for pass in 0..2 {
        for (name, sub) in &raw.subsets {
            let is_union = matches!(sub, RawSubset::Union { .. });
            if (pass == 0) == is_union {
                continue;
            }
            let resolved = resolve_subset(name, sub, alphabet, &subsets)?;
            subsets.insert(name.clone(), resolved);
        }
    }

    let mut measures = BTreeMap::new();
    for (name, m) in &raw.measures {
        measures.insert(name.clone(), resolve_measure(name, m, alphabet, &subsets)?);
    }

    let analyze_subsets = match raw.analyze.and_then(|a| a.subsets) {
        Some(list) => {
            for name in &list {
                if !subsets.contains_key(name) {
                    return Err(Error::Semantic(format!(
                        "analyze references unknown subset '{name}'"
                    )));
                }
            }
            list
        }
        None => subsets.keys().cloned().collect(),
    };

    let verify = {
        let v = raw.verify.as_ref();
        VerifySettings {
            chain_s: match v.and_then(|v| v.chain_s.as_ref()) {
                Some(list) => list
                    .iter()
                    .map(|t| parse_u64_ratio(t, "verify.chain-s"))
                    .collect::<Result<_>>()?,
                None => vec![Ratio::new(1, 2), Ratio::new(1, 1)],
            },
            chain_delta: match v.and_then(|v| v.chain_delta.as_ref()) {
                Some(list) => list
                    .iter()
                    .map(|t| parse_u64_ratio(t, "verify.chain-delta"))
                    .collect::<Result<_>>()?,
                None => vec![Ratio::new(1, 10), Ratio::new(1, 2)],
            },
            chain_eps: match v.and_then(|v| v.chain_eps.as_deref()) {
                Some(t) => parse_u64_ratio(t, "verify.chain-eps")?,
                None => Ratio::new(1, 13),
            },
            chain_cap: v.and_then(|v| v.chain_cap).unwrap_or(256),
            chain_min_order: v.and_then(|v| v.chain_min_order).unwrap_or(2),
            ball_families: v.and_then(|v| v.ball_families).unwrap_or(100),
            power_subsets: v
                .and_then(|v| v.power_subsets.clone())
                .unwrap_or_default(),
            inject_fault: v.and_then(|v| v.inject_fault).unwrap_or(false),
        }
    };
    for name in &verify.power_subsets {
        if !subsets.contains_key(name) {
            return Err(Error::Semantic(format!(
                "verify.power-subsets references unknown subset '{name}'"
            )));
        }
    }

    let (variational, frostman) = match raw.variational {
        Some(v) => {
            let mut experiments = vec![];
            for e in &v.experiments {
                if !subsets.contains_key(&e.support) {
                    return Err(Error::Semantic(format!(
                        "variational experiment references unknown subset '{}'",
                        e.support
                    )));
                }
                for m in &e.measures {
                    let (support, _) = measures.get(m).ok_or_else(|| {
                        Error::Semantic(format!(
                            "variational experiment references unknown measure '{m}'"
                        ))
                    })?;
                    if support != &e.support {
                        return Err(Error::Semantic(format!(
                            "measure '{m}' is declared on support '{support}', not on '{}'",
                            e.support
                        )));
                    }
                }
                experiments.push(VariationalExperiment {
                    support: e.support.clone(),
                    measures: e.measures.clone(),
                });
            }
            let mut frostman = vec![];
            for f in &v.frostman {
                if !subsets.contains_key(&f.support) {
                    return Err(Error::Semantic(format!(
                        "frostman request references unknown subset '{}'",
                        f.support
                    )));
                }
                frostman.push(FrostmanRequest {
                    support: f.support.clone(),
                    s: parse_u64_ratio(&f.s, "variational.frostman.s")?,
                    min_order: f.min_order.unwrap_or(2),
                    eps: match f.eps.as_deref() {
                        Some(t) => parse_u64_ratio(t, "variational.frostman.eps")?,
                        None => Ratio::new(2, 5),
                    },
                    caps: f.caps.clone(),
                });
            }
            (experiments, frostman)
        }
        None => (vec![], vec![]),
    };

    let sweep = match raw.sweep {
        Some(s) => {
            for name in &s.subsets {
                if !subsets.contains_key(name) {
                    return Err(Error::Semantic(format!(
                        "sweep references unknown subset '{name}'"
                    )));
                }
            }
            Some(SweepGrid {
                subsets: s.subsets.clone(),
                s_values: s
                    .s_values
                    .iter()
                    .map(|t| parse_u64_ratio(t, "sweep.s-values"))
                    .collect::<Result<_>>()?,
                min_orders: s.min_orders.clone(),
                epsilons: s
                    .epsilons
                    .iter()
                    .map(|t| parse_u64_ratio(t, "sweep.epsilons"))
                    .collect::<Result<_>>()?,
                caps: s.caps.clone(),
            })
        }
        None => None,
    };

    Ok(ExperimentConfig {
        action,
        alphabet,
        subsets,
        measures,
        schedules,
        analyze_subsets,
        verify,
        variational,
        frostman,
        sweep,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[action]
d = 1
sided = "one-sided"

[alphabet]
k = 2

[subsets.single]
kind = "finite"
points = [{ period = [0] }]
"#;

    #[test]
    fn minimal_config_parses() {
        let cfg = parse_config(MINIMAL).unwrap();
        assert_eq!(cfg.subsets.len(), 1);
        assert!(cfg.subset("single").is_ok());
        assert_eq!(cfg.analyze_subsets, vec!["single".to_string()]);
        assert_eq!(cfg.schedules.epsilons.len(), 3);
    }

    #[test]
    fn float_radius_is_rejected_with_guidance() {
        let text = format!("{MINIMAL}\n[schedules]\nepsilons = [\"0.3\"]\n");
        let err = parse_config(&text).unwrap_err();
        match err {
            Error::Schema {
                expected, found, ..
            } => {
                assert!(expected.contains("p/q"), "{expected}");
                assert!(found.contains("0.3"));
            }
            other => panic!("unexpected error {other}"),
        }
        // a bare float literal is a type error at the schema level
        let text = format!("{MINIMAL}\n[schedules]\nepsilons = [0.3]\n");
        assert!(matches!(parse_config(&text), Err(Error::Schema { .. })));
    }

    #[test]
    fn measure_with_unknown_support_is_rejected() {
        let text = format!(
            "{MINIMAL}
[measures.m]
kind = \"bernoulli\"
support = \"ghost\"
probs = [\"1/2\", \"1/2\"]
"
        );
        let err = parse_config(&text).unwrap_err();
        assert!(matches!(err, Error::Semantic(_)), "{err}");
    }

    #[test]
    fn union_resolution_and_validation() {
        let text = format!(
            "{MINIMAL}
[subsets.sp2]
kind = \"sparse-product\"
branching = 2
generator = {{ kind = \"powers\", base = 2 }}

[subsets.both]
kind = \"union\"
members = [\"single\", \"sp2\"]
"
        );
        let cfg = parse_config(&text).unwrap();
        assert!(matches!(
            cfg.subset("both").unwrap(),
            SubsetDescriptor::Union(ms) if ms.len() == 2
        ));
    }

    #[test]
    fn unstochastic_measure_is_rejected() {
        let text = format!(
            "{MINIMAL}
[subsets.full]
kind = \"regular\"
states = 1
start = 0
accepting = [0]
transitions = [[0, 0, 0], [0, 1, 0]]

[measures.bad]
kind = \"bernoulli\"
support = \"full\"
probs = [\"1/2\", \"1/3\"]
"
        );
        assert!(matches!(parse_config(&text), Err(Error::InvalidMeasure(_))));
    }
}
