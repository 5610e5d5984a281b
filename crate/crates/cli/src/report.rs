//! Serializable report structures.
//!
//! Every numeric claim carries a provenance tag: `computed` for values the
//! tool derived exactly, `assumed-identification` for values that rest on
//! the rank-one colimit identification, and `probe-bounded` for claims that
//! only hold up to the recorded search bound. Field order is fixed, so
//! serialized output is byte-deterministic for a fixed input and budgets.

use serde::Serialize;

use selfsim_core::homol::{ExtensionResult, HomologyReport, PipelineAssumptions};
use selfsim_core::kthy::KReport;
use selfsim_core::ActionSystem;

pub const COMPUTED: &str = "computed";
pub const ASSUMED: &str = "assumed-identification";
pub const PROBE: &str = "probe-bounded";

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Claim {
    pub value: String,
    pub provenance: &'static str,
}

impl Claim {
    pub fn computed(value: impl ToString) -> Claim {
        Claim {
            value: value.to_string(),
            provenance: COMPUTED,
        }
    }

    pub fn assumed(value: impl ToString) -> Claim {
        Claim {
            value: value.to_string(),
            provenance: ASSUMED,
        }
    }

    pub fn probe(value: impl ToString) -> Claim {
        Claim {
            value: value.to_string(),
            provenance: PROBE,
        }
    }

    pub fn text(&self) -> String {
        format!("{} [{}]", self.value, self.provenance)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeJson {
    pub passed: bool,
    pub bound: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AssumptionsJson {
    pub transitive: ProbeJson,
    pub pseudo_free: ProbeJson,
    pub cocycle_validated: ProbeJson,
    pub isotropy: ProbeJson,
    pub free_on_infinite_paths: ProbeJson,
}

impl From<&PipelineAssumptions> for AssumptionsJson {
    fn from(a: &PipelineAssumptions) -> AssumptionsJson {
        let conv = |p: &selfsim_core::homol::ProbeOutcome| ProbeJson {
            passed: p.passed,
            bound: p.bound,
            detail: p.detail.clone(),
        };
        AssumptionsJson {
            transitive: conv(&a.transitive),
            pseudo_free: conv(&a.pseudo_free),
            cocycle_validated: conv(&a.cocycle_validated),
            isotropy: conv(&a.isotropy),
            free_on_infinite_paths: conv(&a.free_on_infinite_paths),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct KTheoryJson {
    pub isotropy_class: String,
    pub level_multiplicity: Claim,
    pub phi0: Claim,
    pub phi1: Claim,
    pub k0_groupoid_algebra: Claim,
    pub k1_groupoid_algebra: Claim,
    pub k0_core: Claim,
    pub k1_core: Claim,
    pub k0_ambient: Claim,
    pub k1_ambient: Claim,
    pub pseudo_free_bound: usize,
    pub cocycle_bound: usize,
}

impl From<&KReport> for KTheoryJson {
    fn from(r: &KReport) -> KTheoryJson {
        KTheoryJson {
            isotropy_class: r.class.as_str().to_string(),
            level_multiplicity: Claim::computed(r.multipliers.d),
            phi0: Claim::computed(r.multipliers.phi0),
            phi1: Claim::computed(r.multipliers.phi1),
            k0_groupoid_algebra: Claim::assumed(&r.k_groupoid_algebra.0),
            k1_groupoid_algebra: Claim::assumed(&r.k_groupoid_algebra.1),
            k0_core: Claim::assumed(&r.k_core.0),
            k1_core: Claim::assumed(&r.k_core.1),
            k0_ambient: Claim::computed(&r.k_ambient.0),
            k1_ambient: Claim::computed(&r.k_ambient.1),
            pseudo_free_bound: r.pseudo_free_bound,
            cocycle_bound: r.cocycle_bound,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomologyJson {
    pub assumptions: AssumptionsJson,
    pub level_h0: Claim,
    pub level_h1: Claim,
    pub level_generator: String,
    pub inclusion_multiplier: Claim,
    pub union_h0: Claim,
    pub union_h1: Claim,
    pub rho_star: Claim,
    pub conjugator_edge: String,
    pub h0: Claim,
    pub h1: Claim,
    pub h2: Claim,
    pub tail: Claim,
    pub rank_audit: Option<bool>,
}

pub fn homology_json(sys: &ActionSystem, r: &HomologyReport) -> HomologyJson {
    let h1 = match &r.solution.h1 {
        ExtensionResult::Resolved(g) => Claim::computed(g),
        ExtensionResult::Unresolved { sub, quot } => Claim {
            value: format!("unresolved extension 0 -> {sub} -> H1 -> {quot} -> 0"),
            provenance: COMPUTED,
        },
    };
    HomologyJson {
        assumptions: (&r.assumptions).into(),
        level_h0: Claim::assumed(&r.level.h0),
        level_h1: Claim::assumed(&r.level.h1),
        level_generator: r.level.generator.clone(),
        inclusion_multiplier: Claim::computed(r.inclusion_multiplier),
        union_h0: Claim::assumed(&r.union_h0),
        union_h1: Claim::assumed(&r.union_h1),
        rho_star: Claim::computed(&r.rho_star.map),
        conjugator_edge: sys
            .graph()
            .edge_name(r.rho_star.conjugator_edge)
            .to_string(),
        h0: Claim::computed(&r.solution.h0),
        h1,
        h2: Claim::computed(&r.solution.h2),
        tail: Claim::computed(if r.solution.tail_zero {
            "0 for q >= 3"
        } else {
            "not determined"
        }),
        rank_audit: r.rank_audit_passed,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SystemSummaryJson {
    pub vertices: usize,
    pub edges: usize,
    pub generators: usize,
    pub orbits: Vec<Vec<String>>,
    pub transitive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FullReportJson {
    pub system: SystemSummaryJson,
    pub pseudo_free: ProbeJson,
    pub isotropy_evidence: Vec<String>,
    pub ktheory: KTheoryJson,
    pub homology: HomologyJson,
}
