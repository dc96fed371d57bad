//! Deterministic report documents: given the same configuration and seed the
//! serialized bytes are identical, so reports diff cleanly across runs.

use num::BigRational;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;

use crate::cover::Exponent;
use crate::dims::DimensionReport;

/// An exponent in a report: a number, or the string sentinel `"INF"`.
#[derive(Debug, Clone, Copy)]
pub struct ExpDoc(pub Exponent);

impl Serialize for ExpDoc {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self.0 {
            Exponent::Finite(v) => ser.serialize_f64(v),
            Exponent::Infinite => ser.serialize_str("INF"),
        }
    }
}

/// A rational as an exact `num/den` pair of decimal strings.
#[derive(Debug, Clone)]
pub struct RatDoc(pub BigRational);

impl Serialize for RatDoc {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(2))?;
        map.serialize_entry("num", &self.0.numer().to_string())?;
        map.serialize_entry("den", &self.0.denom().to_string())?;
        map.end()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub version: String,
    pub config_sha256: String,
    pub seed: u64,
    pub command: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlagsDoc {
    pub bowen_positive: bool,
    pub exponential_growth: bool,
    pub countable: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SubsetDoc {
    pub h_s_top: ExpDoc,
    pub h_s_top_by_eps: Vec<(String, ExpDoc)>,
    pub h_s_cover: ExpDoc,
    pub dim_h: ExpDoc,
    pub dim_b_upper: ExpDoc,
    pub bowen_cover_exponent: ExpDoc,
    pub bowen_entropy: f64,
    pub flags: FlagsDoc,
    pub measured_degree: Option<f64>,
    pub identity_dim_vs_hausdorff: bool,
    pub identity_box_vs_cover: bool,
    pub order_generator_vs_cover: bool,
    pub generator_vs_dimension: bool,
    pub monotone_in_eps: bool,
    pub evidence: Vec<String>,
}

impl From<&DimensionReport> for SubsetDoc {
    fn from(r: &DimensionReport) -> Self {
        SubsetDoc {
            h_s_top: ExpDoc(r.h_s_top),
            h_s_top_by_eps: r
                .h_s_top_by_eps
                .iter()
                .map(|&(eps, e)| (eps.to_string(), ExpDoc(e)))
                .collect(),
            h_s_cover: ExpDoc(r.h_s_cover),
            dim_h: ExpDoc(r.dim_h),
            dim_b_upper: ExpDoc(r.dim_b_upper),
            bowen_cover_exponent: ExpDoc(r.bowen_cover_exponent),
            bowen_entropy: r.bowen_entropy,
            flags: FlagsDoc {
                bowen_positive: r.flags.bowen_positive,
                exponential_growth: r.flags.exponential_growth,
                countable: r.flags.countable,
            },
            measured_degree: r.measured_degree,
            identity_dim_vs_hausdorff: r.identity_dim_vs_hausdorff,
            identity_box_vs_cover: r.identity_box_vs_cover,
            order_generator_vs_cover: r.order_generator_vs_cover,
            generator_vs_dimension: r.generator_vs_dimension,
            monotone_in_eps: r.monotone_in_eps,
            evidence: r.evidence.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckDoc {
    pub name: String,
    pub passed: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct MemberDoc {
    pub name: String,
    pub value: ExpDoc,
    pub standard_error: Option<f64>,
    pub integration: String,
    pub easy_direction_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariationalDoc {
    pub support: String,
    pub h_s_top: ExpDoc,
    pub sup_measure_value: ExpDoc,
    pub gap: Option<f64>,
    pub gap_within_tolerance: bool,
    pub members: Vec<MemberDoc>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrostmanDoc {
    pub support: String,
    pub s: String,
    /// `(cap depth, achieved constant, caps verified exactly)`
    pub runs: Vec<(u64, RatDoc, bool)>,
    /// smallest ratio of consecutive achieved constants
    pub constant_ratio: Option<f64>,
}

#[derive(Debug, Default, Clone, Serialize)]
pub struct RunReport {
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub subsets: BTreeMap<String, SubsetDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variational: Vec<VariationalDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub frostman: Vec<FrostmanDoc>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn failure_count(&self) -> usize {
        let mut n = self.checks.iter().filter(|c| !c.passed).count();
        n += self
            .subsets
            .values()
            .filter(|s| {
                !(s.identity_dim_vs_hausdorff
                    && s.identity_box_vs_cover
                    && s.order_generator_vs_cover
                    && s.monotone_in_eps)
            })
            .count();
        n += self
            .variational
            .iter()
            .filter(|v| !v.gap_within_tolerance || v.members.iter().any(|m| !m.easy_direction_ok))
            .count();
        n += self
            .frostman
            .iter()
            .filter(|f| f.runs.iter().any(|(_, _, ok)| !ok))
            .count();
        n
    }

    /// One line per check, for terminal output.
    pub fn summary_lines(&self) -> Vec<String> {
        let mut out = vec![];
        for (name, s) in &self.subsets {
            out.push(format!(
                "[{}] subset {name}: h_s_top={:?} dim_h={:?} box={:?} cover={:?}",
                if s.identity_dim_vs_hausdorff && s.identity_box_vs_cover {
                    "ok"
                } else {
                    "FAIL"
                },
                s.h_s_top.0,
                s.dim_h.0,
                s.dim_b_upper.0,
                s.h_s_cover.0,
            ));
        }
        for c in &self.checks {
            out.push(format!(
                "[{}] {}: {}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.details
            ));
        }
        for v in &self.variational {
            out.push(format!(
                "[{}] variational {}: h={:?} sup={:?} gap={:?}",
                if v.gap_within_tolerance { "ok" } else { "FAIL" },
                v.support,
                v.h_s_top.0,
                v.sup_measure_value.0,
                v.gap
            ));
        }
        for f in &self.frostman {
            let ok = f.runs.iter().all(|(_, _, ok)| *ok);
            out.push(format!(
                "[{}] frostman {} at s={}: {} runs",
                if ok { "ok" } else { "FAIL" },
                f.support,
                f.s,
                f.runs.len()
            ));
        }
        out
    }
}

/// CSV escape for plain fields (no commas or quotes are produced by the
/// writers, so this only guards against misuse).
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
