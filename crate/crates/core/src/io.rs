//! Versioned JSON files for instances, certificates and reports.

use crate::error::{Error, Result};
use crate::gadgets::GadgetInstance;
use crate::geometry::MassCloud;
use crate::transversal::{verify_flag, verify_transversal, FlagCert, TransversalCert, Verdict};
use crate::tverberg::{verify_tv, TvInstance, TverbergCert};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasuresPayload {
    pub d: usize,
    pub measures: Vec<MassCloud>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "kebab-case")]
pub enum InstancePayload {
    Measures(MeasuresPayload),
    Tverberg(TvInstance),
    Gadget(GadgetInstance),
}

impl InstancePayload {
    /// Measures of a `measures` or `gadget` instance.
    pub fn measures(&self) -> Option<&[MassCloud]> {
        match self {
            InstancePayload::Measures(m) => Some(&m.measures),
            InstancePayload::Gadget(g) => Some(&g.measures),
            InstancePayload::Tverberg(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub seed: u64,
    #[serde(default)]
    pub parameters: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub payload: InstancePayload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl InstanceFile {
    pub fn new(payload: InstancePayload, provenance: Option<Provenance>) -> Self {
        Self { schema_version: SCHEMA_VERSION, payload, provenance }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "certificate", rename_all = "kebab-case")]
pub enum CertificatePayload {
    Transversal(TransversalCert),
    OddTransversal(TransversalCert),
    Flag(FlagCert),
    Tverberg(TverbergCert),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifierResult {
    pub accepted: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl From<Verdict> for VerifierResult {
    fn from(v: Verdict) -> Self {
        match v {
            Ok(()) => Self { accepted: true, diagnostic: None },
            Err(e) => Self { accepted: false, diagnostic: Some(e) },
        }
    }
}

/// Run-dependent data, kept apart from everything that must be reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct RunMetadata {
    pub tool_version: String,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub payload: CertificatePayload,
    pub instance: InstanceFile,
    pub verifier: VerifierResult,
    pub metadata: RunMetadata,
}

impl CertificateFile {
    pub fn new(payload: CertificatePayload, instance: InstanceFile, elapsed_ms: u64) -> Self {
        let verifier = verify_payload(&payload, &instance.payload).into();
        Self {
            schema_version: SCHEMA_VERSION,
            payload,
            instance,
            verifier,
            metadata: RunMetadata { tool_version: env!("CARGO_PKG_VERSION").into(), elapsed_ms },
        }
    }

    pub fn recheck(&self) -> Verdict {
        verify_payload(&self.payload, &self.instance.payload)
    }
}

/// Dispatches to the matching verifier; a certificate paired with the wrong kind of instance is
/// rejected.
pub fn verify_payload(cert: &CertificatePayload, instance: &InstancePayload) -> Verdict {
    match (cert, instance) {
        (CertificatePayload::Tverberg(c), InstancePayload::Tverberg(i)) => verify_tv(c, i),
        (CertificatePayload::Tverberg(_), _) => Err("instance: a Tverberg certificate needs a Tverberg instance".into()),
        (CertificatePayload::Flag(c), inst) => {
            verify_flag(c, inst.measures().ok_or("instance: a flag certificate needs measures")?)
        }
        (CertificatePayload::Transversal(c) | CertificatePayload::OddTransversal(c), inst) => {
            verify_transversal(c, inst.measures().ok_or("instance: a transversal certificate needs measures")?)
        }
    }
}

/// What a search that found nothing writes instead of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub kind: String,
    pub report: serde_json::Value,
    pub metadata: RunMetadata,
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Parses an instance file and checks the schema version and the payload's own invariants.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let f: InstanceFile = from_json(text)?;
    if f.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {}", f.schema_version)));
    }
    match &f.payload {
        InstancePayload::Measures(m) => {
            for c in &m.measures {
                c.validate()?;
                if c.dim() != 2 * m.d {
                    return Err(Error::DimensionMismatch { expected: 2 * m.d, found: c.dim() });
                }
            }
        }
        InstancePayload::Tverberg(t) => t.validate()?,
        InstancePayload::Gadget(g) => {
            for c in &g.measures {
                c.validate()?;
            }
        }
    }
    Ok(f)
}

pub fn parse_certificate(text: &str) -> Result<CertificateFile> {
    let f: CertificateFile = from_json(text)?;
    if f.schema_version != SCHEMA_VERSION {
        return Err(Error::Parse(format!("unsupported schema version {}", f.schema_version)));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate_measures, generate_tverberg, Genericity};
    use crate::tverberg::TvVariant;

    #[test]
    fn instance_round_trip() {
        let ms = generate_measures(1, &[3, 4], 5, Genericity::Generic).unwrap();
        let f = InstanceFile::new(InstancePayload::Measures(MeasuresPayload { d: 1, measures: ms }), None);
        let s = to_json(&f).unwrap();
        assert!(s.contains("\"kind\": \"measures\""));
        assert_eq!(parse_instance(&s).unwrap(), f);
        let t = generate_tverberg(2, 1, &[2, 2], TvVariant::Complex, false, 7, Genericity::Generic).unwrap();
        let f = InstanceFile::new(InstancePayload::Tverberg(t), None);
        assert_eq!(parse_instance(&to_json(&f).unwrap()).unwrap(), f);
    }

    #[test]
    fn rejects_bad_versions_and_sizes() {
        let t = generate_tverberg(2, 1, &[2, 2], TvVariant::Complex, false, 7, Genericity::Generic).unwrap();
        let f = InstanceFile::new(InstancePayload::Tverberg(t), None);
        let s = to_json(&f).unwrap().replacen("\"schema_version\": 1", "\"schema_version\": 9", 1);
        assert!(parse_instance(&s).is_err());
        let mut f2 = f.clone();
        if let InstancePayload::Tverberg(t) = &mut f2.payload {
            t.sets[0].points.pop();
        }
        assert!(parse_instance(&to_json(&f2).unwrap()).is_err());
    }
}
