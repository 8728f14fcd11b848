//! Assembles certificates, the Pell family, the `d = 6` Lehmer checks, cited
//! results and the brute-force oracle into one verification report for
//! `2 <= d <= 10`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Integer;
use crate::equation::{Solution, D_MAX, D_MIN};
use crate::filters::{self, EliminationCertificate};
use crate::lehmer::{self, DefectScanReport, PolyCheckReport, PRIMITIVE_DIVISOR_BOUND};
use crate::pell::{self, PellSolution};
use crate::search::{self, OracleDiff, SearchBox};

/// Smallest box that still contains `x = -121`.
pub const MIN_X_BOUND: u64 = 200;
pub const MIN_N_MAX: u32 = 4;
/// `|u|` range of the `d = 6` defect scans.
pub const DEFAULT_SCAN_U_BOUND: u64 = 10_000;

/// Source identifiers for results that are cited rather than re-derived.
pub mod sources {
    /// `d = 2`, `n >= 3` (Cohn).
    pub const COHN: &str = "cohn:d=2,n>=3";
    /// `d = 3` (Zhang).
    pub const ZHANG: &str = "zhang:d=3";
    /// Primitive divisors exist for `m >= 30` (Bilu, Hanrot, Voutier).
    pub const BHV: &str = "bilu-hanrot-voutier:m>=30";
    /// Of the primes `7 <= p < 30` only 7 and 13 admit `p`-defective pairs,
    /// and those tables exclude `α/β ∈ Q(√-105)` (Voutier).
    pub const BHV_VOUTIER: &str = "bilu-hanrot-voutier+voutier-tables";
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("x_bound = {0} is below {MIN_X_BOUND}; the box must contain x = 118 and x = -121")]
    XBoundTooSmall(u64),
    #[error("n_max = {0} is below {MIN_N_MAX}")]
    NMaxTooSmall(u32),
    #[error("x_bound = {0} is too large for the search box")]
    XBoundTooLarge(u64),
}

/// Smallest odd prime dividing `n`, or 2 when `n` is a power of two.
///
/// A nonexistence proof for `y^p` covers `y^n = (y^(n/p))^p`.
pub fn exponent_reduction(n: u32) -> u32 {
    assert!(n >= 2, "exponent must be at least 2");
    let mut m = n;
    while m.is_multiple_of(2) {
        m /= 2;
    }
    if m == 1 {
        return 2;
    }
    (3..).step_by(2).find(|p| m.is_multiple_of(*p)).expect("m > 1 has an odd divisor")
}

fn is_odd_prime(n: u32) -> bool {
    n > 2 && n % 2 == 1 && (3..).step_by(2).take_while(|q| q * q <= n).all(|q| !n.is_multiple_of(q))
}

/// Label of the exponent class a concrete `n` falls into.
pub fn exponent_class(n: u32) -> String {
    let canonical = exponent_reduction(n);
    match (n, canonical) {
        (2, _) => "n=2".to_string(),
        (n, c) if n == c => format!("p={n}"),
        (n, 2) => format!("reduced:n={n}->n=2"),
        (n, c) => format!("reduced:n={n}->p={c}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Resolution {
    Eliminated {
        certificate: EliminationCertificate,
    },
    /// `d = 2, n = 2`: the Pell family, restricted to the box.
    Family {
        members: Vec<PellSolution>,
    },
    /// Cited complete solution list, instantiated for this `n`.
    Sporadic {
        source: String,
        solutions: Vec<Solution>,
    },
    ExternalCitation {
        source: String,
    },
    /// Cited result with a desk-scale corroborating scan.
    DefectScan {
        source: String,
        report: DefectScanReport,
    },
    PolyCheck {
        report: PolyCheckReport,
    },
    Unresolved {
        reason: String,
    },
}

impl Resolution {
    pub fn kind(&self) -> &'static str {
        match self {
            Resolution::Eliminated { .. } => "eliminated",
            Resolution::Family { .. } => "family",
            Resolution::Sporadic { .. } => "sporadic",
            Resolution::ExternalCitation { .. } => "external_citation",
            Resolution::DefectScan { .. } => "defect_scan",
            Resolution::PolyCheck { .. } => "poly_check",
            Resolution::Unresolved { .. } => "unresolved",
        }
    }

    /// Whether the evidence attached to this resolution checks out.
    pub fn evidence_holds(&self) -> bool {
        match self {
            Resolution::Eliminated { certificate } => filters::verify(certificate),
            Resolution::Family { members } => members
                .iter()
                .all(|m| pell::is_family_member(&m.x, &m.y)),
            Resolution::Sporadic { solutions, .. } => solutions
                .iter()
                .all(|s| crate::equation::check_solution(s.d, &s.x, &s.y, s.n)),
            Resolution::ExternalCitation { .. } => true,
            Resolution::DefectScan { report, .. } => report.violations.is_empty(),
            Resolution::PolyCheck { report } => report.has_no_roots(),
            Resolution::Unresolved { .. } => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseStatus {
    pub d: u32,
    pub n: u32,
    pub exponent_class: String,
    pub resolution: Resolution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(with = "crate::decimal")]
    pub x_bound: Integer,
    pub n_max: u32,
    pub scan_u_bound: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub parameters: Parameters,
    pub cases: Vec<CaseStatus>,
    pub oracle_diff: OracleDiff,
    /// Human-readable reasons behind a failing verdict.
    pub failures: Vec<String>,
    pub verdict: Verdict,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn case(&self, d: u32, n: u32) -> Option<&CaseStatus> {
        self.cases.iter().find(|c| c.d == d && c.n == n)
    }

    /// Sporadic solutions listed across all cases, sorted.
    pub fn sporadic_solutions(&self) -> Vec<Solution> {
        let mut out: Vec<Solution> = self
            .cases
            .iter()
            .filter_map(|c| match &c.resolution {
                Resolution::Sporadic { solutions, .. } => Some(solutions.clone()),
                _ => None,
            })
            .flatten()
            .collect();
        out.sort();
        out
    }

    pub fn family_members(&self) -> Vec<PellSolution> {
        self.cases
            .iter()
            .find_map(|c| match &c.resolution {
                Resolution::Family { members } => Some(members.clone()),
                _ => None,
            })
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "box |x| <= {}, n <= {}, defect scans |u| <= {}",
            self.parameters.x_bound, self.parameters.n_max, self.parameters.scan_u_bound
        )?;
        for c in &self.cases {
            let mut line = format!("d={:<2} n={:<3} {:<20} {}", c.d, c.n, c.exponent_class, c.resolution.kind());
            match &c.resolution {
                Resolution::Eliminated { certificate } => {
                    let _ = write!(line, " [{}]", certificate.witness.name());
                }
                Resolution::Family { members } => {
                    let _ = write!(line, " [{} members]", members.len());
                }
                Resolution::Sporadic { source, solutions } => {
                    let _ = write!(line, " [{} solutions; {}]", solutions.len(), source);
                }
                Resolution::ExternalCitation { source } => {
                    let _ = write!(line, " [{source}]");
                }
                Resolution::DefectScan { source, report } => {
                    let _ = write!(
                        line,
                        " [{} u scanned, {} violations; {}]",
                        report.scanned,
                        report.violations.len(),
                        source
                    );
                }
                Resolution::PolyCheck { report } => {
                    let _ = write!(line, " [{} integer roots]", report.integer_roots.len());
                }
                Resolution::Unresolved { reason } => {
                    let _ = write!(line, " [{reason}]");
                }
            }
            writeln!(f, "{line}")?;
        }
        writeln!(f, "oracle diff: {} entries", self.oracle_diff.entries.len())?;
        for e in &self.oracle_diff.entries {
            writeln!(f, "  {:?} {}", e.status, e.solution)?;
        }
        for reason in &self.failures {
            writeln!(f, "failure: {reason}")?;
        }
        write!(f, "verdict: {}", if self.passed() { "pass" } else { "fail" })
    }
}

/// Complete list of `d = 2` solutions with exponent `n >= 3`.
pub fn sporadic_solutions(n: u32) -> Vec<Solution> {
    assert!(n >= 3);
    let mut out = vec![
        Solution::new(2, Integer::from(-1), Integer::from(1), n).expect("1 = 1^n"),
        Solution::new(2, Integer::from(-2), Integer::from(1), n).expect("1 = 1^n"),
    ];
    if n == 4 {
        out.push(Solution::new(2, Integer::from(118), Integer::from(13), 4).expect("28561 = 13^4"));
        out.push(Solution::new(2, Integer::from(-121), Integer::from(13), 4).expect("28561 = 13^4"));
    }
    out.sort();
    out
}

fn family_as_solutions(members: &[PellSolution]) -> Vec<Solution> {
    members
        .iter()
        .map(|m| Solution::new(2, m.x.clone(), m.y.abs(), 2).expect("family member"))
        .collect()
}

/// Every solution the classification predicts inside `b`.
pub fn expected_solutions(b: &SearchBox) -> Vec<Solution> {
    let mut out = Vec::new();
    if b.d_min <= 2 && 2 <= b.d_max {
        out.extend(family_as_solutions(&pell::enumerate_in_range(&Integer::from(b.x_bound))));
        for n in 3..=b.n_max {
            out.extend(sporadic_solutions(n).into_iter().filter(|s| b.contains(s)));
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub x_bound: u64,
    pub n_max: u32,
    pub scan_u_bound: u64,
}

impl VerifyConfig {
    pub fn new(x_bound: u64, n_max: u32) -> Self {
        VerifyConfig { x_bound, n_max, scan_u_bound: DEFAULT_SCAN_U_BOUND }
    }
}

/// Verification with the default defect-scan range.
pub fn verify_theorem(x_bound: u64, n_max: u32) -> Result<VerificationReport, PipelineError> {
    verify(&VerifyConfig::new(x_bound, n_max))
}

struct D6Evidence {
    poly: BTreeMap<u32, PolyCheckReport>,
    scans: BTreeMap<u32, DefectScanReport>,
}

impl D6Evidence {
    fn resolve(&mut self, p: u32, scan_u_bound: u64) -> Resolution {
        match p {
            3 | 5 => {
                let report = self
                    .poly
                    .entry(p)
                    .or_insert_with(|| lehmer::small_prime_poly_check(p).expect("p is 3 or 5"));
                Resolution::PolyCheck { report: report.clone() }
            }
            7 | 13 => {
                let report = self.scans.entry(p).or_insert_with(|| {
                    lehmer::defect_scan(p, scan_u_bound).expect("p is a scan prime")
                });
                Resolution::DefectScan { source: sources::BHV_VOUTIER.to_string(), report: report.clone() }
            }
            p if p < PRIMITIVE_DIVISOR_BOUND => {
                Resolution::ExternalCitation { source: sources::BHV_VOUTIER.to_string() }
            }
            _ => Resolution::ExternalCitation { source: sources::BHV.to_string() },
        }
    }
}

fn resolve_case(d: u32, n: u32, cfg: &VerifyConfig, family: &[PellSolution], d6: &mut D6Evidence) -> Resolution {
    match (d, n) {
        (2, 2) => return Resolution::Family { members: family.to_vec() },
        (2, _) => {
            return Resolution::Sporadic {
                source: sources::COHN.to_string(),
                solutions: sporadic_solutions(n),
            }
        }
        (3, _) => return Resolution::ExternalCitation { source: sources::ZHANG.to_string() },
        _ => {}
    }
    if let Some(certificate) = filters::eliminate(d, n) {
        return Resolution::Eliminated { certificate };
    }
    let canonical = exponent_reduction(n);
    if canonical != n {
        if let Some(certificate) = filters::eliminate(d, canonical) {
            return Resolution::Eliminated { certificate };
        }
    }
    if d == 6 && is_odd_prime(canonical) {
        return d6.resolve(canonical, cfg.scan_u_bound);
    }
    Resolution::Unresolved { reason: format!("no procedure covers d={d}, n={n}") }
}

/// Resolves every `(d, n)` with `2 <= d <= 10`, `2 <= n <= n_max`, then runs
/// the brute-force search over the whole box and compares it with the
/// predicted solution set.
pub fn verify(cfg: &VerifyConfig) -> Result<VerificationReport, PipelineError> {
    if cfg.x_bound < MIN_X_BOUND {
        return Err(PipelineError::XBoundTooSmall(cfg.x_bound));
    }
    if cfg.n_max < MIN_N_MAX {
        return Err(PipelineError::NMaxTooSmall(cfg.n_max));
    }
    let search_box = SearchBox::new(D_MIN, D_MAX, cfg.x_bound, cfg.n_max)
        .map_err(|_| PipelineError::XBoundTooLarge(cfg.x_bound))?;

    let family = pell::enumerate_in_range(&Integer::from(cfg.x_bound));
    let mut d6 = D6Evidence { poly: BTreeMap::new(), scans: BTreeMap::new() };
    let mut cases = Vec::new();
    for d in D_MIN..=D_MAX {
        for n in 2..=cfg.n_max {
            cases.push(CaseStatus {
                d,
                n,
                exponent_class: exponent_class(n),
                resolution: resolve_case(d, n, cfg, &family, &mut d6),
            });
        }
    }

    let found = search::brute_force(&search_box);
    let expected = expected_solutions(&search_box);
    let oracle_diff = search::cross_check(&found, &expected);

    let mut failures: Vec<String> = cases
        .iter()
        .filter(|c| !c.resolution.evidence_holds())
        .map(|c| format!("d={} n={}: {} evidence does not hold", c.d, c.n, c.resolution.kind()))
        .collect();
    for e in &oracle_diff.entries {
        failures.push(format!("oracle {:?}: {}", e.status, e.solution));
    }
    let verdict = if failures.is_empty() { Verdict::Pass } else { Verdict::Fail };

    Ok(VerificationReport {
        parameters: Parameters {
            x_bound: Integer::from(cfg.x_bound),
            n_max: cfg.n_max,
            scan_u_bound: cfg.scan_u_bound,
        },
        cases,
        oracle_diff,
        failures,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_examples() {
        assert_eq!(exponent_reduction(4), 2);
        assert_eq!(exponent_reduction(2), 2);
        assert_eq!(exponent_reduction(15), 3);
        assert_eq!(exponent_reduction(7), 7);
        assert_eq!(exponent_reduction(20), 5);
        assert_eq!(exponent_reduction(49), 7);
    }

    #[test]
    fn class_labels() {
        assert_eq!(exponent_class(2), "n=2");
        assert_eq!(exponent_class(13), "p=13");
        assert_eq!(exponent_class(8), "reduced:n=8->n=2");
        assert_eq!(exponent_class(9), "reduced:n=9->p=3");
    }

    #[test]
    fn preconditions() {
        assert_eq!(verify_theorem(100, 20), Err(PipelineError::XBoundTooSmall(100)));
        assert_eq!(verify_theorem(200, 3), Err(PipelineError::NMaxTooSmall(3)));
    }

    #[test]
    fn small_run_passes() {
        let report = verify_theorem(200, 4).unwrap();
        assert!(report.passed(), "{report}");
        let s = Solution::new(2, Integer::from(118), Integer::from(13), 4).unwrap();
        assert!(report.sporadic_solutions().contains(&s));
        assert_eq!(report.cases.len(), 9 * 3);
    }

    #[test]
    fn d6_resolution_table() {
        let report = verify(&VerifyConfig { x_bound: 200, n_max: 31, scan_u_bound: 300 }).unwrap();
        let kind = |n| report.case(6, n).unwrap().resolution.kind();
        assert_eq!(kind(2), "eliminated");
        assert_eq!(kind(3), "poly_check");
        assert_eq!(kind(4), "eliminated");
        assert_eq!(kind(5), "poly_check");
        assert_eq!(kind(7), "defect_scan");
        assert_eq!(kind(9), "poly_check");
        assert_eq!(kind(13), "defect_scan");
        assert_eq!(kind(17), "external_citation");
        assert_eq!(kind(29), "external_citation");
        assert_eq!(kind(31), "external_citation");
        match &report.case(6, 31).unwrap().resolution {
            Resolution::ExternalCitation { source } => assert_eq!(source, sources::BHV),
            r => panic!("{r:?}"),
        }
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn tampered_report_fails_evidence() {
        let mut report = verify_theorem(200, 4).unwrap();
        let case = report.cases.iter_mut().find(|c| c.d == 5).unwrap();
        if let Resolution::Eliminated { certificate } = &mut case.resolution {
            certificate.d = 6;
        }
        assert!(!report.cases.iter().all(|c| c.resolution.evidence_holds()));
    }
}
