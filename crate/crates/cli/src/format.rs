//! Plain-text `key = value` documents: certificates, a priori report sets and
//! constants files.
//!
//! One entry per line. Lines starting with `#` and blank lines are ignored.
//! Values are written verbatim after `" = "`, with `\`, newline and carriage
//! return escaped as `\\`, `\n`, `\r`. Floats are decimal strings with enough
//! digits to read back exactly at the document's `precision`; `f64` values use
//! the shortest round-trip form.

use std::fmt::Write as _;
use std::str::FromStr;

use gasket_core::apriori::{AprioriConfig, Claim, VerificationReport};
use gasket_core::certify::DimensionCertificate;
use gasket_core::operator::AprioriConstants;
use rug::Float;

pub const CERTIFICATE_FORMAT: &str = "gasket-certificate/1";
pub const REPORTS_FORMAT: &str = "gasket-apriori/1";
pub const CONSTANTS_FORMAT: &str = "gasket-constants/1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: expected `key = value`, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("missing key `{0}`")]
    Missing(String),
    #[error("duplicate key `{0}`")]
    Duplicate(String),
    #[error("bad value for `{key}`: {value:?}")]
    Value { key: String, value: String },
    #[error("expected format {want}, found {got:?}")]
    WrongFormat { want: String, got: String },
    #[error("inconsistent document: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, FormatError>;

fn escape(v: &str) -> String {
    let mut out = String::with_capacity(v.len());
    for c in v.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape(v: &str) -> Option<String> {
    let mut out = String::with_capacity(v.len());
    let mut it = v.chars();
    while let Some(c) = it.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match it.next()? {
            '\\' => out.push('\\'),
            'n' => out.push('\n'),
            'r' => out.push('\r'),
            _ => return None,
        }
    }
    Some(out)
}

/// An ordered list of entries with unique keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KvDoc {
    entries: Vec<(String, String)>,
    header: Vec<String>,
}

impl KvDoc {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a `#` comment line to the top of the rendered document.
    pub fn comment(&mut self, text: &str) {
        self.header.extend(text.lines().map(str::to_string));
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        assert!(valid_key(&key), "invalid key {key:?}");
        self.entries.push((key, value.to_string()));
    }

    pub fn push_float(&mut self, key: &str, x: &Float) {
        self.push(key, float_to_string(x));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn req(&self, key: &str) -> Result<&str> {
        self.get(key).ok_or_else(|| FormatError::Missing(key.to_string()))
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self.req(key)?;
        v.parse().map_err(|_| FormatError::Value { key: key.into(), value: v.into() })
    }

    pub fn float(&self, key: &str, prec: u32) -> Result<Float> {
        let v = self.req(key)?;
        parse_float(v, prec).ok_or_else(|| FormatError::Value { key: key.into(), value: v.into() })
    }

    pub fn bool(&self, key: &str) -> Result<bool> {
        self.parsed(key)
    }

    pub fn expect_format(&self, want: &str) -> Result<()> {
        let got = self.req("format")?;
        if got != want {
            return Err(FormatError::WrongFormat { want: want.into(), got: got.into() });
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for h in &self.header {
            let _ = writeln!(s, "# {h}");
        }
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k} = {}", escape(v));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = KvDoc::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let syntax = || FormatError::Syntax { line: i + 1, text: line.to_string() };
            let (k, v) = match line.split_once(" = ") {
                Some(kv) => kv,
                None => (line.strip_suffix(" =").ok_or_else(syntax)?, ""),
            };
            let k = k.trim();
            if !valid_key(k) {
                return Err(syntax());
            }
            if doc.get(k).is_some() {
                return Err(FormatError::Duplicate(k.to_string()));
            }
            let v = unescape(v).ok_or_else(syntax)?;
            doc.entries.push((k.to_string(), v));
        }
        Ok(doc)
    }
}

fn valid_key(k: &str) -> bool {
    !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

/// Shortest decimal that reads back to `x` at `x.prec()`.
pub fn float_to_string(x: &Float) -> String {
    x.to_string_radix(10, None)
}

pub fn parse_float(s: &str, prec: u32) -> Option<Float> {
    Float::parse(s).ok().map(|p| Float::with_val(prec, p))
}

fn constants_to(doc: &mut KvDoc, c: &AprioriConstants) {
    for (k, v) in c.fields() {
        doc.push(k, v);
    }
}

fn constants_from(doc: &KvDoc) -> Result<AprioriConstants> {
    let f = |k: &str| doc.parsed::<f64>(k);
    Ok(AprioriConstants {
        r_big: f("R_A")?,
        r_small: f("r_A")?,
        nu: f("nu_A")?,
        w: f("W_A")?,
        c_a: f("C_A")?,
        d_plus: f("D_plus")?,
        d_minus: f("D_minus")?,
    })
}

// ---------------------------------------------------------------------------
// Constants

pub fn constants_to_doc(c: &AprioriConstants) -> KvDoc {
    let mut doc = KvDoc::new();
    doc.comment("a priori constants");
    doc.push("format", CONSTANTS_FORMAT);
    constants_to(&mut doc, c);
    doc
}

/// Accepts a constants document, or any document that carries the seven
/// constant keys (certificates and report sets do).
pub fn constants_from_doc(doc: &KvDoc) -> Result<AprioriConstants> {
    constants_from(doc)
}

// ---------------------------------------------------------------------------
// Certificates

pub fn certificate_to_doc(c: &DimensionCertificate) -> KvDoc {
    let mut doc = KvDoc::new();
    doc.comment("certified enclosure of the Hausdorff dimension of the Apollonian gasket");
    doc.comment("s_lo <= dim <= s_hi; every float reads back exactly at `precision` bits");
    doc.push("format", CERTIFICATE_FORMAT);
    doc.push("status", "certified");
    doc.push_float("s_lo", &c.s_lo);
    doc.push_float("s_hi", &c.s_hi);
    doc.push_float("width", &c.width());
    doc.push("digits", &c.digits);
    doc.push("certified_digits", c.certified_digits);
    doc.push("eps_bits", c.eps_bits);
    doc.push("precision", c.precision);
    doc.push("k", c.k);
    doc.push("n", c.n);
    doc.push("l", c.l);
    doc.push("m", c.m);
    doc.push("mp", c.mp);
    doc.push("y_even", c.y_even);
    constants_to(&mut doc, &c.constants);
    doc.push_float("s0", &c.s0);
    doc.push_float("lambda_s0", &c.lambda_s0);
    doc.push("secant_iterations", c.secant_iterations);
    doc.push_float("phi_lo", &c.phi_bounds.0);
    doc.push_float("phi_hi", &c.phi_bounds.1);
    doc.push_float("e_lo", &c.discrepancy.0);
    doc.push_float("e_hi", &c.discrepancy.1);
    doc.push_float("pointwise_err", &c.pointwise_err);
    doc.push_float("approx_error", &c.approx_error);
    doc.push_float("vnorm", &c.vnorm);
    doc.push("convention", &c.convention);
    doc.push("timestamp", &c.timestamp);
    doc.push("toolchain", &c.toolchain);
    doc
}

pub fn certificate_from_doc(doc: &KvDoc) -> Result<DimensionCertificate> {
    doc.expect_format(CERTIFICATE_FORMAT)?;
    if doc.req("status")? != "certified" {
        return Err(FormatError::Inconsistent(format!("status is {:?}", doc.req("status")?)));
    }
    let p: u32 = doc.parsed("precision")?;
    let f = |k: &str| doc.float(k, p);
    let cert = DimensionCertificate {
        s_lo: f("s_lo")?,
        s_hi: f("s_hi")?,
        eps_bits: doc.parsed("eps_bits")?,
        precision: p,
        k: doc.parsed("k")?,
        n: doc.parsed("n")?,
        l: doc.parsed("l")?,
        m: doc.parsed("m")?,
        mp: doc.parsed("mp")?,
        y_even: doc.bool("y_even")?,
        constants: constants_from(doc)?,
        s0: f("s0")?,
        lambda_s0: f("lambda_s0")?,
        secant_iterations: doc.parsed("secant_iterations")?,
        phi_bounds: (f("phi_lo")?, f("phi_hi")?),
        discrepancy: (f("e_lo")?, f("e_hi")?),
        pointwise_err: f("pointwise_err")?,
        approx_error: f("approx_error")?,
        vnorm: f("vnorm")?,
        certified_digits: doc.parsed("certified_digits")?,
        digits: doc.req("digits")?.to_string(),
        convention: doc.req("convention")?.to_string(),
        timestamp: doc.req("timestamp")?.to_string(),
        toolchain: doc.req("toolchain")?.to_string(),
    };
    if cert.s_lo > cert.s_hi {
        return Err(FormatError::Inconsistent("s_lo > s_hi".into()));
    }
    if f("width")? != cert.width() {
        return Err(FormatError::Inconsistent("width does not equal s_hi - s_lo".into()));
    }
    Ok(cert)
}

pub fn certificate_to_string(c: &DimensionCertificate) -> String {
    certificate_to_doc(c).render()
}

pub fn certificate_from_str(s: &str) -> Result<DimensionCertificate> {
    certificate_from_doc(&KvDoc::parse(s)?)
}

// ---------------------------------------------------------------------------
// A priori report sets

/// The reports of one `apriori` run, all for the same constants and grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportSet {
    pub config: AprioriConfig,
    pub constants: AprioriConstants,
    pub reports: Vec<VerificationReport>,
}

impl ReportSet {
    pub fn all_passed(&self) -> bool {
        self.reports.len() == Claim::ALL.len() && self.reports.iter().all(|r| r.passed)
    }
}

pub fn reports_to_doc(set: &ReportSet) -> KvDoc {
    let mut doc = KvDoc::new();
    doc.comment("a priori verification reports");
    doc.push("format", REPORTS_FORMAT);
    let c = &set.config;
    doc.push("subdivision", c.subdivision);
    doc.push("prec", c.prec);
    doc.push("n_max", c.n_max);
    doc.push("n_switch", c.n_switch);
    doc.push("max_depth", c.max_depth);
    constants_to(&mut doc, &set.constants);
    let ids: Vec<&str> = set.reports.iter().map(|r| r.claim.id()).collect();
    doc.push("claims", ids.join(","));
    doc.push("all_passed", set.all_passed());
    for r in &set.reports {
        let id = r.claim.id();
        doc.push(format!("{id}.passed"), r.passed);
        doc.push(format!("{id}.slack"), r.slack);
        doc.push(format!("{id}.boxes"), r.boxes);
        doc.push(format!("{id}.n_range"), &r.n_range);
        doc.push(format!("{id}.message"), &r.message);
    }
    doc
}

pub fn reports_from_doc(doc: &KvDoc) -> Result<ReportSet> {
    doc.expect_format(REPORTS_FORMAT)?;
    let config = AprioriConfig {
        subdivision: doc.parsed("subdivision")?,
        n_max: doc.parsed("n_max")?,
        n_switch: doc.parsed("n_switch")?,
        max_depth: doc.parsed("max_depth")?,
        prec: doc.parsed("prec")?,
    };
    let constants = constants_from(doc)?;
    let mut reports = Vec::new();
    let claims = doc.req("claims")?;
    for id in claims.split(',').filter(|s| !s.is_empty()) {
        let claim = Claim::from_id(id).ok_or_else(|| FormatError::Value { key: "claims".into(), value: id.into() })?;
        let k = |f: &str| format!("{id}.{f}");
        reports.push(VerificationReport {
            claim,
            n_range: doc.req(&k("n_range"))?.to_string(),
            boxes: doc.parsed(&k("boxes"))?,
            slack: doc.parsed(&k("slack"))?,
            passed: doc.bool(&k("passed"))?,
            constants,
            subdivision: config.subdivision,
            prec: config.prec,
            message: doc.req(&k("message"))?.to_string(),
        });
    }
    let set = ReportSet { config, constants, reports };
    if doc.bool("all_passed")? != set.all_passed() {
        return Err(FormatError::Inconsistent("all_passed disagrees with the individual reports".into()));
    }
    Ok(set)
}

pub fn reports_to_string(set: &ReportSet) -> String {
    reports_to_doc(set).render()
}

pub fn reports_from_str(s: &str) -> Result<ReportSet> {
    reports_from_doc(&KvDoc::parse(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes_round_trip() {
        for v in ["", "a = b", "x\\ny", "line\nbreak\r", " lead", "trail ", "\\"] {
            assert_eq!(unescape(&escape(v)).unwrap(), v);
        }
        assert!(unescape("bad\\q").is_none());
    }

    #[test]
    fn empty_values_survive_trailing_whitespace_stripping() {
        let doc = KvDoc::parse("format = x\nmessage =\n").unwrap();
        assert_eq!(doc.get("message"), Some(""));
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(matches!(KvDoc::parse("just text"), Err(FormatError::Syntax { line: 1, .. })));
        assert!(matches!(KvDoc::parse("a = 1\na = 2"), Err(FormatError::Duplicate(_))));
    }
}
