//! Serializable certificate documents and a standalone verifier.
//!
//! Two document kinds exist: a run document recording a witness run (ring,
//! consumed stream, the announced bounds, and the final certificate or a
//! pending marker) and a collapse document recording a Krull collapse
//! certificate. Both embed ordinals and elements as canonical grammar
//! strings, serialize to deterministic JSON (stable key order, canonical
//! texts, trailing newline), and verify by re-parsing every text and
//! re-checking every identity with ring arithmetic.
//!
//! This module deliberately depends on nothing but the ordinal and algebra
//! modules: the verifier re-derives every claim instead of trusting the
//! machinery that produced it.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{parse_element, parse_ring, Element, LinComb, RingDesc};
use crate::ordinal::Ordinal;

/// Format version accepted by [`load`].
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unsupported format version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
}

/// A witness run: the stream is exactly the consumed elements, the trace
/// holds the announced bounds of every `Continue`, and the result is either
/// pending (stream exhausted) or the certificate for the last element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDocument {
    pub version: u32,
    pub ring: String,
    pub stream: Vec<String>,
    pub trace: Vec<String>,
    pub result: RunResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum RunResult {
    Pending,
    Good {
        good_index: usize,
        coefficients: Vec<String>,
    },
}

/// A collapse certificate in textual form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseDocument {
    pub version: u32,
    pub ring: String,
    pub arity: usize,
    pub elements: Vec<String>,
    pub probes: Vec<ProbeRecord>,
    pub comb: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub ordinal: String,
    pub tuple: Vec<u64>,
    pub monomial: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Document {
    Run(RunDocument),
    Collapse(CollapseDocument),
}

impl Document {
    pub fn version(&self) -> u32 {
        match self {
            Document::Run(d) => d.version,
            Document::Collapse(d) => d.version,
        }
    }
}

/// Serializes a document: pretty JSON with the struct field order and a
/// trailing newline. Identical documents yield identical bytes.
pub fn save(doc: &Document) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(doc).expect("documents always serialize");
    bytes.push(b'\n');
    bytes
}

/// A loaded document together with canonicalization warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Loaded {
    pub document: Document,
    pub warnings: Vec<String>,
}

/// Parses a document, checks the format version, and re-canonicalizes every
/// embedded text. Unparseable texts are malformed; parseable non-canonical
/// texts are rewritten and reported as warnings.
pub fn load(bytes: &[u8]) -> Result<Loaded, CertError> {
    let mut document: Document =
        serde_json::from_slice(bytes).map_err(|e| CertError::Malformed(e.to_string()))?;
    if document.version() != FORMAT_VERSION {
        return Err(CertError::VersionMismatch {
            found: document.version(),
            expected: FORMAT_VERSION,
        });
    }
    let mut warnings = Vec::new();
    match &mut document {
        Document::Run(doc) => {
            let ring = canon_ring(&mut doc.ring, &mut warnings)?;
            for text in doc.stream.iter_mut() {
                canon_element(&ring, text, "stream element", &mut warnings)?;
            }
            for text in doc.trace.iter_mut() {
                canon_ordinal(text, &mut warnings)?;
            }
            if let RunResult::Good { coefficients, .. } = &mut doc.result {
                for text in coefficients.iter_mut() {
                    canon_element(&ring, text, "coefficient", &mut warnings)?;
                }
            }
        }
        Document::Collapse(doc) => {
            let ring = canon_ring(&mut doc.ring, &mut warnings)?;
            for text in doc.elements.iter_mut() {
                canon_element(&ring, text, "element", &mut warnings)?;
            }
            for probe in doc.probes.iter_mut() {
                canon_ordinal(&mut probe.ordinal, &mut warnings)?;
                canon_element(&ring, &mut probe.monomial, "monomial", &mut warnings)?;
            }
            for text in doc.comb.iter_mut() {
                canon_element(&ring, text, "coefficient", &mut warnings)?;
            }
        }
    }
    Ok(Loaded { document, warnings })
}

fn canon_ring(text: &mut String, warnings: &mut Vec<String>) -> Result<RingDesc, CertError> {
    let ring =
        parse_ring(text).map_err(|e| CertError::Malformed(format!("ring {text:?}: {e}")))?;
    let canonical = ring.to_string();
    if *text != canonical {
        warnings.push(format!("ring {text:?} rewritten to {canonical:?}"));
        *text = canonical;
    }
    Ok(ring)
}

fn canon_element(
    ring: &RingDesc,
    text: &mut String,
    what: &str,
    warnings: &mut Vec<String>,
) -> Result<(), CertError> {
    let elem = parse_element(ring, text)
        .map_err(|e| CertError::Malformed(format!("{what} {text:?}: {e}")))?;
    let canonical = ring
        .format_element(&elem)
        .map_err(|e| CertError::Malformed(format!("{what} {text:?}: {e}")))?;
    if *text != canonical {
        warnings.push(format!("{what} {text:?} rewritten to {canonical:?}"));
        *text = canonical;
    }
    Ok(())
}

fn canon_ordinal(text: &mut String, warnings: &mut Vec<String>) -> Result<(), CertError> {
    let ord =
        Ordinal::parse(text).map_err(|e| CertError::Malformed(format!("ordinal {text:?}: {e}")))?;
    let canonical = ord.to_string();
    if *text != canonical {
        warnings.push(format!("ordinal {text:?} rewritten to {canonical:?}"));
        *text = canonical;
    }
    Ok(())
}

/// Verification report: empty failures means the document checks out.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub failures: Vec<String>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: impl Into<String>) {
        self.failures.push(msg.into());
    }
}

/// Re-parses every text in the document and re-checks every semantic claim:
/// strict descent of bounds, structural consistency, and the combination
/// identities, by ring arithmetic only.
pub fn verify_document(doc: &Document) -> Report {
    let mut report = Report::default();
    match doc {
        Document::Run(doc) => verify_run(doc, &mut report),
        Document::Collapse(doc) => verify_collapse_doc(doc, &mut report),
    }
    report
}

fn verify_run(doc: &RunDocument, report: &mut Report) {
    if doc.version != FORMAT_VERSION {
        report.fail(format!("unsupported version {}", doc.version));
        return;
    }
    let ring = match parse_ring(&doc.ring) {
        Ok(r) => r,
        Err(e) => {
            report.fail(format!("ring does not parse: {e}"));
            return;
        }
    };
    let mut stream = Vec::with_capacity(doc.stream.len());
    for (i, text) in doc.stream.iter().enumerate() {
        match parse_element(&ring, text) {
            Ok(e) => stream.push(e),
            Err(e) => {
                report.fail(format!("stream element {i} does not parse: {e}"));
                return;
            }
        }
    }
    let mut trace = Vec::with_capacity(doc.trace.len());
    for (i, text) in doc.trace.iter().enumerate() {
        match Ordinal::parse(text) {
            Ok(o) => trace.push(o),
            Err(e) => {
                report.fail(format!("trace ordinal {i} does not parse: {e}"));
                return;
            }
        }
    }
    for (i, pair) in trace.windows(2).enumerate() {
        if pair[0] <= pair[1] {
            report.fail(format!(
                "descent violated: trace[{}] = {} is not above trace[{}] = {}",
                i,
                pair[0],
                i + 1,
                pair[1]
            ));
        }
    }
    match &doc.result {
        RunResult::Pending => {
            if trace.len() != stream.len() {
                report.fail(format!(
                    "pending run must announce one bound per element ({} bounds, {} elements)",
                    trace.len(),
                    stream.len()
                ));
            }
        }
        RunResult::Good {
            good_index,
            coefficients,
        } => {
            if stream.is_empty() {
                report.fail("a certified run cannot have an empty stream");
                return;
            }
            if *good_index != stream.len() - 1 {
                report.fail(format!(
                    "good index {} must point at the last consumed element {}",
                    good_index,
                    stream.len() - 1
                ));
                return;
            }
            if trace.len() != stream.len() - 1 {
                report.fail(format!(
                    "certified run must announce one bound per earlier element ({} bounds, {} elements)",
                    trace.len(),
                    stream.len()
                ));
            }
            let mut comb = Vec::with_capacity(coefficients.len());
            for (i, text) in coefficients.iter().enumerate() {
                match parse_element(&ring, text) {
                    Ok(e) => comb.push(e),
                    Err(e) => {
                        report.fail(format!("coefficient {i} does not parse: {e}"));
                        return;
                    }
                }
            }
            let context = &stream[..stream.len() - 1];
            match ring.eval_comb(context, &LinComb::new(comb)) {
                Ok(value) => {
                    if value != stream[stream.len() - 1] {
                        report.fail(
                            "combination identity failed: coefficients do not produce the last element",
                        );
                    }
                }
                Err(e) => report.fail(format!("combination identity failed: {e}")),
            }
        }
    }
}

fn verify_collapse_doc(doc: &CollapseDocument, report: &mut Report) {
    if doc.version != FORMAT_VERSION {
        report.fail(format!("unsupported version {}", doc.version));
        return;
    }
    let ring = match parse_ring(&doc.ring) {
        Ok(r) => r,
        Err(e) => {
            report.fail(format!("ring does not parse: {e}"));
            return;
        }
    };
    if doc.arity != doc.elements.len() {
        report.fail(format!(
            "arity {} does not match the {} elements",
            doc.arity,
            doc.elements.len()
        ));
        return;
    }
    let mut elements = Vec::with_capacity(doc.elements.len());
    for (i, text) in doc.elements.iter().enumerate() {
        match parse_element(&ring, text) {
            Ok(e) => elements.push(e),
            Err(e) => {
                report.fail(format!("element {i} does not parse: {e}"));
                return;
            }
        }
    }
    if doc.probes.is_empty() {
        report.fail("a collapse certificate needs at least one probe");
        return;
    }
    let idx_bound = Ordinal::omega_pow(doc.arity as u64);
    let mut monomials = Vec::with_capacity(doc.probes.len());
    let mut previous: Option<Ordinal> = None;
    for (i, probe) in doc.probes.iter().enumerate() {
        let ordinal = match Ordinal::parse(&probe.ordinal) {
            Ok(o) => o,
            Err(e) => {
                report.fail(format!("probe {i} ordinal does not parse: {e}"));
                return;
            }
        };
        if ordinal >= idx_bound {
            report.fail(format!(
                "probe {i} ordinal {ordinal} is not below w^{}",
                doc.arity
            ));
        }
        if let Some(prev) = &previous {
            if *prev <= ordinal {
                report.fail(format!(
                    "descent violated: probe {} ordinal {} is not above probe {} ordinal {}",
                    i - 1,
                    prev,
                    i,
                    ordinal
                ));
            }
        }
        match ordinal.decode_tuple(doc.arity) {
            Ok(tuple) if tuple == probe.tuple => {}
            Ok(tuple) => report.fail(format!(
                "probe {i} tuple {:?} does not decode its ordinal (expected {:?})",
                probe.tuple, tuple
            )),
            Err(e) => report.fail(format!("probe {i} ordinal does not decode: {e}")),
        }
        previous = Some(ordinal);
        let recomputed = recompute_monomial(&ring, &elements, &probe.tuple);
        match (recomputed, parse_element(&ring, &probe.monomial)) {
            (Ok(expected), Ok(stated)) => {
                if expected != stated {
                    report.fail(format!(
                        "probe {i} monomial does not recompute from its tuple"
                    ));
                }
                monomials.push(stated);
            }
            (Err(e), _) => {
                report.fail(format!("probe {i} monomial recomputation failed: {e}"));
                return;
            }
            (_, Err(e)) => {
                report.fail(format!("probe {i} monomial does not parse: {e}"));
                return;
            }
        }
    }
    let mut comb = Vec::with_capacity(doc.comb.len());
    for (i, text) in doc.comb.iter().enumerate() {
        match parse_element(&ring, text) {
            Ok(e) => comb.push(e),
            Err(e) => {
                report.fail(format!("coefficient {i} does not parse: {e}"));
                return;
            }
        }
    }
    let (last, earlier) = monomials.split_last().expect("probes checked nonempty");
    match ring.eval_comb(earlier, &LinComb::new(comb)) {
        Ok(value) => {
            if value != *last {
                report.fail(
                    "combination identity failed: coefficients do not produce the last monomial",
                );
            }
        }
        Err(e) => report.fail(format!("combination identity failed: {e}")),
    }
}

fn recompute_monomial(
    ring: &RingDesc,
    elements: &[Element],
    tuple: &[u64],
) -> Result<Element, crate::algebra::AlgebraError> {
    let mut acc = ring.one();
    for (x, &e) in elements.iter().zip(tuple.iter()) {
        let e = u32::try_from(e).map_err(|_| {
            crate::algebra::AlgebraError::BadDescriptor("exponent too large".to_string())
        })?;
        acc = ring.mul(&acc, &ring.pow(x, e)?)?;
    }
    Ok(acc)
}
