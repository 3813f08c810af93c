//! Versioned JSON documents emitted by the CLI.

use serde::{Deserialize, Serialize};

use knotgroup::alexander::{determinant, odd_prime_factors};
use knotgroup::certify::{
    Annotation, Budget, Certificate, CertificateKind, Direction, Invariant, InvariantBounds,
    InvariantReport,
};
use knotgroup::Presentation;

pub const REPORT_SCHEMA: &str = "knotgroup-report/1";
pub const GROUP_SCHEMA: &str = "knotgroup-group/1";
pub const VERIFY_SCHEMA: &str = "knotgroup-verify/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Certified,
    Inconclusive,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Certified => 0,
            Status::Inconclusive => 10,
            Status::Failed => 1,
        }
    }

    /// The worst of a set of statuses.
    pub fn combine(items: impl IntoIterator<Item = Status>) -> Status {
        items
            .into_iter()
            .fold(Status::Certified, |acc, s| match (acc, s) {
                (Status::Failed, _) | (_, Status::Failed) => Status::Failed,
                (Status::Inconclusive, _) | (_, Status::Inconclusive) => Status::Inconclusive,
                _ => Status::Certified,
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationDoc {
    pub generators: usize,
    pub meridians: Vec<bool>,
    pub distinguished: u32,
    pub relators: Vec<String>,
    pub hash: String,
}

impl PresentationDoc {
    pub fn new(p: &Presentation) -> Self {
        PresentationDoc {
            generators: p.gen_count(),
            meridians: p.meridian_flags().to_vec(),
            distinguished: p.distinguished().0,
            relators: p.relators().iter().map(ToString::to_string).collect(),
            hash: p.hash(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDocument {
    pub schema: String,
    pub tool_version: String,
    pub spec: String,
    pub presentation: PresentationDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationStats {
    pub generators: usize,
    pub relators: usize,
    pub total_length: usize,
    pub hash: String,
    pub reduced_generators: usize,
    pub reduced_relators: usize,
}

impl PresentationStats {
    pub fn new(p: &Presentation) -> Self {
        let r = p.simplified();
        PresentationStats {
            generators: p.gen_count(),
            relators: p.relators().len(),
            total_length: p.total_length(),
            hash: p.hash(),
            reduced_generators: r.gen_count(),
            reduced_relators: r.relators().len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub invariant: Invariant,
    pub direction: Direction,
    pub value: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRef {
    pub digest: String,
    pub kind: CertificateKind,
    pub presentation_hash: String,
    pub claim: Option<Claim>,
}

impl CertificateRef {
    pub fn new(c: &Certificate) -> Self {
        CertificateRef {
            digest: c.digest(),
            kind: c.kind,
            presentation_hash: c.presentation_hash.clone(),
            claim: c.bound().map(|(invariant, direction, value)| Claim {
                invariant,
                direction,
                value,
            }),
        }
    }
}

/// Bounds and annotations of an invariant report, without the certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBody {
    pub invariants: Vec<InvariantBounds>,
    pub annotations: Vec<Annotation>,
}

impl From<&InvariantReport> for ReportBody {
    fn from(r: &InvariantReport) -> Self {
        ReportBody {
            invariants: r.invariants.clone(),
            annotations: r.annotations.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub tool_version: String,
    pub spec: String,
    pub presentation: PresentationStats,
    pub determinant: u64,
    pub coloring_primes: Vec<u64>,
    pub report: ReportBody,
    pub certificates: Vec<CertificateRef>,
    pub undetermined: Vec<Invariant>,
    pub status: Status,
    pub budget: Budget,
    pub wall_time_secs: f64,
}

impl ReportDocument {
    pub fn new(
        spec: String,
        p: &Presentation,
        body: ReportBody,
        certs: &[Certificate],
        budget: Budget,
    ) -> Self {
        let det = determinant(p).unwrap_or(0);
        let undetermined: Vec<Invariant> = body
            .invariants
            .iter()
            .filter(|b| b.exact().is_none())
            .map(|b| b.invariant)
            .collect();
        let status = if undetermined.is_empty() {
            Status::Certified
        } else {
            Status::Inconclusive
        };
        ReportDocument {
            schema: REPORT_SCHEMA.into(),
            tool_version: knotgroup::TOOL_VERSION.into(),
            spec,
            presentation: PresentationStats::new(p),
            determinant: det,
            coloring_primes: if det == 0 {
                Vec::new()
            } else {
                odd_prime_factors(det)
            },
            report: body,
            certificates: certs.iter().map(CertificateRef::new).collect(),
            undetermined,
            status,
            budget,
            wall_time_secs: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub label: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub schema: String,
    pub tool_version: String,
    pub theorem: String,
    pub parameters: serde_json::Value,
    pub cells: Vec<Cell>,
    pub status: Status,
    pub budget: Budget,
    pub wall_time_secs: f64,
}

impl VerifyDocument {
    pub fn new(
        theorem: &str,
        parameters: serde_json::Value,
        cells: Vec<Cell>,
        budget: Budget,
    ) -> Self {
        VerifyDocument {
            schema: VERIFY_SCHEMA.into(),
            tool_version: knotgroup::TOOL_VERSION.into(),
            theorem: theorem.into(),
            parameters,
            status: Status::combine(cells.iter().map(|c| c.status)),
            cells,
            budget,
            wall_time_secs: 0.0,
        }
    }
}
