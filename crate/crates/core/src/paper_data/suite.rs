//! Suite registry: encoded lemmas and expected results, read from the
//! versioned TOML records under `data/`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::jets::Jets;
use super::traces::e_term;
use crate::boundary::{BoundarySymbol, CaseSpec, JetKey};
use crate::clifford::{CliffordElement, Signature};
use crate::error::{Error, ParseError, Result};
use crate::frame::Frame;
use crate::scalar::{ExactScalar, Registry};
use crate::xi::XiRational;

pub const SUITE_FORMAT: &str = "einres-suite/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SuiteName {
    Interior,
    Traces,
    BoundaryD2D2,
    BoundaryD1D3,
}

impl SuiteName {
    pub const ALL: [SuiteName; 4] = [Self::Interior, Self::Traces, Self::BoundaryD2D2, Self::BoundaryD1D3];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::Traces => "traces",
            Self::BoundaryD2D2 => "boundary-d2d2",
            Self::BoundaryD1D3 => "boundary-d1d3",
        }
    }

    fn data(self) -> &'static str {
        match self {
            Self::Interior => include_str!("../../data/interior.toml"),
            Self::Traces => include_str!("../../data/traces.toml"),
            Self::BoundaryD2D2 => include_str!("../../data/boundary-d2d2.toml"),
            Self::BoundaryD1D3 => include_str!("../../data/boundary-d1d3.toml"),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

// ---- raw records ----

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteFile {
    format: String,
    suite: String,
    #[serde(default)]
    lemma: Vec<LemmaRecord>,
    #[serde(default)]
    claim: Vec<ClaimRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LemmaRecord {
    id: String,
    payload: String,
    quote: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimRecord {
    id: String,
    target: String,
    quote: String,
    #[serde(default)]
    expected: BTreeMap<String, String>,
    #[serde(default)]
    terms: Vec<TermRecord>,
    convention: Option<ConventionRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TermRecord {
    atom: String,
    #[serde(default)]
    h_prime: bool,
    coeff: String,
    #[serde(default)]
    power: u32,
    pole: u32,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConventionRecord {
    ratio: String,
    note: String,
}

// ---- typed records ----

/// What a claim is about; resolved by the verifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Einstein(u8, u8),
    Curvature(u8, u8, usize),
    TraceE(u8, u8),
    FVanishing(u8, u8),
    LeafPair(u8, u8),
    NormalPair(u8, u8),
    Sigma0Normal,
    Sigma0Tangential,
    Case(CaseSpec),
    Total,
    /// Pure arithmetic over the expected values of other claims.
    PrintedSum(Vec<String>),
    Extrinsic,
    Milestone(String),
    Composition,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(ParseError::Record { line: 0, msg: msg.into() })
}

fn pair(s: &str) -> Result<(u8, u8)> {
    let (p, q) = s.split_once(',').ok_or_else(|| bad(format!("expected `p,q`, got `{s}`")))?;
    let n = |t: &str| t.trim().parse::<u8>().map_err(|_| bad(format!("bad integer `{t}`")));
    Ok((n(p)?, n(q)?))
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        Ok(match head {
            "einstein" => pair(rest).map(|(p, q)| Self::Einstein(p, q))?,
            "trace_e" => pair(rest).map(|(p, q)| Self::TraceE(p, q))?,
            "f_vanishing" => pair(rest).map(|(p, q)| Self::FVanishing(p, q))?,
            "leaf_pair" => pair(rest).map(|(p, q)| Self::LeafPair(p, q))?,
            "normal_pair" => pair(rest).map(|(p, q)| Self::NormalPair(p, q))?,
            "curvature" => {
                let (pq, k) = rest.rsplit_once(':').ok_or_else(|| bad(format!("bad target `{s}`")))?;
                let (p, q) = pair(pq)?;
                let k: usize = k.parse().map_err(|_| bad(format!("bad term index `{k}`")))?;
                if k > 2 {
                    return Err(bad(format!("curvature term index {k} out of range")));
                }
                Self::Curvature(p, q, k)
            }
            "sigma0_normal" => Self::Sigma0Normal,
            "sigma0_tangential" => Self::Sigma0Tangential,
            "total" => Self::Total,
            "extrinsic" => Self::Extrinsic,
            "composition" => Self::Composition,
            "milestone" if !rest.is_empty() => Self::Milestone(rest.to_string()),
            "sum" if !rest.is_empty() => Self::PrintedSum(rest.split(',').map(str::to_string).collect()),
            "case" => {
                let v: Vec<i64> = rest
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| bad(format!("bad case index `{t}`"))))
                    .collect::<Result<_>>()?;
                let [r, l, k, j, a] = v[..] else {
                    return Err(bad(format!("case target needs r,l,k,j,|alpha|: `{s}`")));
                };
                let u = |x: i64| u32::try_from(x).map_err(|_| bad(format!("negative index in `{s}`")));
                Self::Case(CaseSpec {
                    r: r as i32,
                    l: l as i32,
                    k: u(k)?,
                    j: u(j)?,
                    alpha: u(a)?,
                })
            }
            _ => return Err(bad(format!("unknown target `{s}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MilestoneAtom {
    /// Σ_{j,l<n} X_jY_lξ_jξ_l
    SigmaPrime,
    /// XₙYₙ
    Normal,
    /// Σ_{j<n} X_jYₙξ_j
    XYn,
    /// Σ_{l<n} XₙY_lξ_l
    XnY,
}

/// coeff·atom·[h′]·ξₙ^power/(ξₙ−i)^pole
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilestoneTerm {
    pub atom: MilestoneAtom,
    pub h_prime: bool,
    pub coeff: ExactScalar,
    pub power: u32,
    pub pole: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convention {
    /// computed / printed
    pub ratio: ExactScalar,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedResult {
    pub id: String,
    pub target: Target,
    pub quote: String,
    pub coefficients: BTreeMap<String, ExactScalar>,
    pub terms: Vec<MilestoneTerm>,
    pub convention: Option<Convention>,
}

#[derive(Clone, Debug)]
pub enum LemmaPayload {
    Jet { side: Side, order: i32, key: JetKey, value: XiRational },
    Element(CliffordElement),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct EncodedLemma {
    pub id: String,
    pub quote: String,
    pub payload: LemmaPayload,
}

#[derive(Clone)]
pub enum SuiteInputs {
    Interior { signatures: Vec<(u8, u8)> },
    Traces,
    Boundary { frame: Frame, left: BoundarySymbol, right: BoundarySymbol, r_max: i32, l_max: i32 },
}

#[derive(Clone)]
pub struct Suite {
    pub name: SuiteName,
    pub inputs: SuiteInputs,
    pub lemmas: Vec<EncodedLemma>,
    pub expected: Vec<ExpectedResult>,
}

impl Suite {
    pub fn claim(&self, id: &str) -> Option<&ExpectedResult> {
        self.expected.iter().find(|e| e.id == id)
    }
}

fn toml_error(text: &str, e: toml::de::Error) -> Error {
    let line = e.span().map_or(0, |s| text[..s.start.min(text.len())].lines().count().max(1));
    Error::Parse(ParseError::Record { line, msg: e.message().to_string() })
}

fn scalar(s: &str) -> Result<ExactScalar> {
    s.parse::<ExactScalar>().map_err(Error::Parse)
}

fn atom(s: &str) -> Result<MilestoneAtom> {
    Ok(match s {
        "sigma_prime" => MilestoneAtom::SigmaPrime,
        "normal" => MilestoneAtom::Normal,
        "x_yn" => MilestoneAtom::XYn,
        "xn_y" => MilestoneAtom::XnY,
        _ => return Err(bad(format!("unknown milestone atom `{s}`"))),
    })
}

fn expected(c: ClaimRecord) -> Result<ExpectedResult> {
    if c.quote.trim().is_empty() {
        return Err(bad(format!("claim `{}` has an empty quote", c.id)));
    }
    let target: Target = c.target.parse()?;
    let coefficients = c
        .expected
        .iter()
        .map(|(k, v)| Ok((k.clone(), scalar(v)?)))
        .collect::<Result<_>>()?;
    let terms = c
        .terms
        .iter()
        .map(|t| {
            Ok(MilestoneTerm {
                atom: atom(&t.atom)?,
                h_prime: t.h_prime,
                coeff: scalar(&t.coeff)?,
                power: t.power,
                pole: t.pole,
            })
        })
        .collect::<Result<_>>()?;
    if matches!(target, Target::Milestone(_)) != !c.terms.is_empty() {
        return Err(bad(format!("claim `{}`: `terms` goes with milestone targets only", c.id)));
    }
    let convention = c
        .convention
        .map(|v| Ok::<_, Error>(Convention { ratio: scalar(&v.ratio)?, note: v.note }))
        .transpose()?;
    Ok(ExpectedResult {
        id: c.id,
        target,
        quote: c.quote,
        coefficients,
        terms,
        convention,
    })
}

fn jet_payload(symbols: (&BoundarySymbol, &BoundarySymbol), spec: &str, sig: Signature, reg: &std::sync::Arc<Registry>) -> Result<LemmaPayload> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [side, order, key] = parts[..] else {
        return Err(bad(format!("payload `{spec}` is not side:order:key")));
    };
    let (side, sym) = match side {
        "left" => (Side::Left, symbols.0),
        "right" => (Side::Right, symbols.1),
        _ => return Err(bad(format!("unknown side `{side}`"))),
    };
    let order: i32 = order.parse().map_err(|_| bad(format!("bad order `{order}`")))?;
    let key = match key {
        "value" => JetKey::VALUE,
        "dxn" => JetKey::normal(1),
        _ => return Err(bad(format!("unknown jet key `{key}`"))),
    };
    let jet = sym.order(order, if side == Side::Left { "left" } else { "right" })?;
    if !jet.jets.contains_key(&key) {
        return Err(bad(format!("payload `{spec}` names a jet that is not encoded")));
    }
    Ok(LemmaPayload::Jet {
        side,
        order,
        key,
        value: jet.get(key, sig, reg),
    })
}

/// Parse a suite from TOML text (the shipped data or an override file).
pub fn parse_suite(name: SuiteName, text: &str) -> Result<Suite> {
    let raw: SuiteFile = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    if raw.format != SUITE_FORMAT {
        return Err(bad(format!("unsupported format `{}`", raw.format)));
    }
    if raw.suite != name.as_str() {
        return Err(bad(format!("file describes suite `{}`, not `{name}`", raw.suite)));
    }
    let reg = Registry::global();
    let frame = Frame::boundary(&reg);
    let sig = frame.signature();
    let inputs = {
        let j = Jets::new(&frame);
        match name {
            SuiteName::Interior => SuiteInputs::Interior { signatures: Vec::new() },
            SuiteName::Traces => SuiteInputs::Traces,
            SuiteName::BoundaryD2D2 => SuiteInputs::Boundary {
                left: j.d2d2_left(),
                right: j.d2d2_right(),
                r_max: 0,
                l_max: -2,
                frame: frame.clone(),
            },
            // the five printed cases correspond to r ≤ 1, l ≤ −3
            SuiteName::BoundaryD1D3 => SuiteInputs::Boundary {
                left: j.d1d3_left(),
                right: j.d1d3_right(),
                r_max: 1,
                l_max: -3,
                frame: frame.clone(),
            },
        }
    };
    let mut lemmas = Vec::new();
    for l in raw.lemma {
        if l.quote.trim().is_empty() {
            return Err(bad(format!("lemma `{}` has an empty quote", l.id)));
        }
        let payload = match (&inputs, l.payload.as_str()) {
            (_, "e_term") => LemmaPayload::Element(e_term(sig, &reg)),
            (SuiteInputs::Boundary { left, right, .. }, spec) => jet_payload((left, right), spec, sig, &reg)?,
            (_, spec) => return Err(bad(format!("payload `{spec}` does not belong to suite `{name}`"))),
        };
        lemmas.push(EncodedLemma { id: l.id, quote: l.quote, payload });
    }
    let expected: Vec<ExpectedResult> = raw.claim.into_iter().map(expected).collect::<Result<_>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for e in &expected {
        if !seen.insert(e.id.as_str()) {
            return Err(bad(format!("duplicate claim id `{}`", e.id)));
        }
    }
    let inputs = match inputs {
        SuiteInputs::Interior { .. } => SuiteInputs::Interior {
            signatures: expected
                .iter()
                .filter_map(|e| match e.target {
                    Target::Einstein(p, q) => Some((p, q)),
                    _ => None,
                })
                .collect(),
        },
        other => other,
    };
    Ok(Suite {
        name,
        inputs,
        lemmas,
        expected,
    })
}

/// The suite an expected-data file describes, read from its `suite` field.
pub fn suite_of(text: &str) -> Result<SuiteName> {
    #[derive(Deserialize)]
    struct Head {
        suite: String,
    }
    let h: Head = toml::from_str(text).map_err(|e| toml_error(text, e))?;
    h.suite.parse()
}

pub fn load_suite(name: &str) -> Result<Suite> {
    let n: SuiteName = name.parse()?;
    parse_suite(n, n.data())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_suites_load() {
        for n in SuiteName::ALL {
            let s = load_suite(n.as_str()).unwrap();
            assert!(!s.expected.is_empty(), "{n}");
            assert!(s.expected.iter().all(|e| !e.quote.is_empty()));
        }
        assert!(matches!(load_suite("nope"), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn every_boundary_jet_has_a_lemma_record() {
        for n in [SuiteName::BoundaryD2D2, SuiteName::BoundaryD1D3] {
            let s = load_suite(n.as_str()).unwrap();
            let SuiteInputs::Boundary { left, right, .. } = &s.inputs else { unreachable!() };
            let encoded: usize = [left, right].iter().map(|b| b.orders.values().map(|j| j.jets.len()).sum::<usize>()).sum();
            assert_eq!(s.lemmas.len(), encoded, "{n}");
        }
    }

    #[test]
    fn printed_sum_identities() {
        // −(113+132i)/960 and −(71−26i)/96
        let s = load_suite("boundary-d1d3").unwrap();
        let sum = |key: &str| {
            (1..=5).fold(ExactScalar::zero(), |acc, k| {
                let c = s.claim(&format!("phi_tilde_{k}")).unwrap();
                &acc + c.coefficients.get(key).unwrap_or(&ExactScalar::zero())
            })
        };
        assert_eq!(sum("tangential"), ExactScalar::gaussian(-113, -132, 960));
        assert_eq!(sum("normal"), ExactScalar::gaussian(-71, 26, 96));
    }

    #[test]
    fn targets_parse() {
        assert_eq!("einstein:2,2".parse::<Target>().unwrap(), Target::Einstein(2, 2));
        assert_eq!(
            "case:-1,-2,0,0,0".parse::<Target>().unwrap(),
            Target::Case(CaseSpec { r: -1, l: -2, k: 0, j: 0, alpha: 0 })
        );
        assert!("case:1,2".parse::<Target>().is_err());
        assert!("bogus".parse::<Target>().is_err());
    }

    #[test]
    fn corrupt_data_is_rejected() {
        let text = SuiteName::Interior.data().replace("8/3", "8/x");
        assert!(matches!(parse_suite(SuiteName::Interior, &text), Err(Error::Parse(_))));
        assert!(parse_suite(SuiteName::Interior, "format = ").is_err());
        assert!(parse_suite(SuiteName::Traces, SuiteName::Interior.data()).is_err());
    }
}
