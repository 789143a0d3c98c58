//! Census data for the orientable integral congruence two hyperbolic
//! 4-manifolds and a rule interpreter replaying the arguments that none of
//! them, nor the orientable double cover of census manifold 1011, contains
//! a closed embedded orientable totally geodesic hypersurface.

mod codes;

use std::fmt;

use serde::Serialize;
use serde_json::{json, Value};

use crate::collar::{volume_obstruction, ObstructionVerdict};
use crate::error::{Error, Result};

pub use codes::{
    cross_section_orientable, cube_symmetry_equivalent, digit_matrix, orbit, parse_code,
    side_pairing_orientable, CrossSectionCode, CubeSymmetry, ReflectionGroupK, SidePairingCode,
    SymmetryKind,
};

const TABLE_DATA: &str = include_str!("../../data/table1.txt");
const MANIFOLD_1011_DATA: &str = include_str!("../../data/manifold_1011.txt");
const LINKS_DATA: &str = include_str!("../../data/links.txt");

/// Euler characteristic shared by every census manifold.
pub const CENSUS_EULER_CHARACTERISTIC: u64 = 1;
/// Volume of the Weeks manifold, the smallest closed hyperbolic 3-manifold,
/// to the four digits used in the volume argument.
pub const WEEKS_VOLUME: f64 = 0.9427;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CensusRecord {
    pub index: u32,
    pub b1: u32,
    pub orientable_cross_sections: u32,
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_u32(field: &str, line: &str) -> Result<u32> {
    field
        .parse()
        .map_err(|_| Error::CensusData(format!("bad number {field:?} in line {line:?}")))
}

/// Parses `index b1 cross_sections` rows.
pub fn parse_table(text: &str) -> Result<Vec<CensusRecord>> {
    data_lines(text)
        .map(|line| {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::CensusData(format!("expected 3 fields in {line:?}")));
            }
            Ok(CensusRecord {
                index: parse_u32(fields[0], line)?,
                b1: parse_u32(fields[1], line)?,
                orientable_cross_sections: parse_u32(fields[2], line)?,
            })
        })
        .collect()
}

/// The 22 census records, in order.
pub fn census_table() -> Vec<CensusRecord> {
    parse_table(TABLE_DATA).expect("embedded census table is well formed")
}

/// Lookup by index (1 to 22).
pub fn census_record(index: u32) -> Result<CensusRecord> {
    census_table()
        .into_iter()
        .find(|r| r.index == index)
        .ok_or_else(|| Error::Domain(format!("no census record with index {index}")))
}

/// A non-orientable census manifold together with its cross-section data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverRecord {
    pub name: String,
    pub code: SidePairingCode,
    pub orientable: bool,
    pub euler_characteristic: u64,
    pub k_codes: Vec<CrossSectionCode>,
    pub reference_code: CrossSectionCode,
    pub link: String,
}

fn key_values(text: &str) -> Vec<(&str, &str)> {
    data_lines(text)
        .map(|l| match l.split_once(char::is_whitespace) {
            Some((k, v)) => (k, v.trim()),
            None => (l, ""),
        })
        .collect()
}

pub fn parse_cover_record(text: &str) -> Result<CoverRecord> {
    let kv = key_values(text);
    let get = |key: &str| {
        kv.iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .ok_or_else(|| Error::CensusData(format!("missing field {key:?}")))
    };
    let orientable = match get("orientable")? {
        "true" => true,
        "false" => false,
        other => return Err(Error::CensusData(format!("bad orientable flag {other:?}"))),
    };
    let euler_characteristic = get("euler_characteristic")?
        .parse()
        .map_err(|_| Error::CensusData("bad euler_characteristic".into()))?;
    let k_codes = get("k_codes")?
        .split_whitespace()
        .map(str::parse)
        .collect::<Result<Vec<CrossSectionCode>>>()?;
    Ok(CoverRecord {
        name: get("name")?.to_string(),
        code: parse_code(get("code")?)?,
        orientable,
        euler_characteristic,
        k_codes,
        reference_code: get("reference_code")?.parse()?,
        link: get("link")?.to_string(),
    })
}

/// Census manifold 1011: code `14FF28` with cross sections 714, 274, 172, 147.
pub fn manifold_1011() -> CoverRecord {
    parse_cover_record(MANIFOLD_1011_DATA).expect("embedded 1011 record is well formed")
}

/// The three links whose complements are the orientable cross sections,
/// and their common volume. Annotation only; never computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkAnnotations {
    pub links: Vec<String>,
    pub volume: f64,
}

pub fn link_annotations() -> LinkAnnotations {
    let mut links = Vec::new();
    let mut volume = f64::NAN;
    for (k, v) in key_values(LINKS_DATA) {
        match k {
            "link" => links.push(v.to_string()),
            "volume" => volume = v.parse().expect("embedded link volume parses"),
            _ => {}
        }
    }
    LinkAnnotations { links, volume }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RuleId {
    /// χ = 1 forbids a separating hypersurface, forcing b₁ ≥ 1.
    L1,
    /// Two reflected copies plus a non-separating cross section: b₁ ≥ 3.
    L2,
    /// Two copies per orientable cross section: b₁ ≥ 2c.
    L3,
    Code,
    Orientability,
    Symmetry,
    Lift,
    Copies,
    Volume,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub rule: RuleId,
    /// The rule's hypothesis and conclusion in words.
    pub statement: &'static str,
    pub inputs: Value,
    /// Whether the rule's hypotheses hold for these inputs.
    pub applicable: bool,
    pub outcome: String,
    /// Whether this step rules the manifold out.
    pub excludes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "rule", rename_all = "snake_case")]
pub enum Verdict {
    Excluded(RuleId),
    NotExcluded,
}

impl Verdict {
    pub fn is_excluded(&self) -> bool {
        matches!(self, Verdict::Excluded(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExclusionTrace {
    pub subject: String,
    pub steps: Vec<TraceStep>,
    pub verdict: Verdict,
}

impl fmt::Display for ExclusionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.subject)?;
        for step in &self.steps {
            let mark = if !step.applicable {
                "skip"
            } else if step.excludes {
                "EXCL"
            } else {
                "ok"
            };
            writeln!(f, "  [{:>4}] {:<13} {}", mark, step.rule.to_string(), step.outcome)?;
        }
        match self.verdict {
            Verdict::Excluded(rule) => write!(f, "  verdict: excluded by {rule}"),
            Verdict::NotExcluded => write!(f, "  verdict: not excluded"),
        }
    }
}

const L1_STATEMENT: &str = "chi = 1 and an embedded orientable totally geodesic hypersurface: \
     it cannot separate (the pieces would have fractional Euler characteristic), so b1 >= 1";
const L2_STATEMENT: &str = "chi = 1 and at least one orientable cross section: M misses every \
     orientable cross section, coordinate reflections give 2 disjoint copies of M, and with the \
     non-separating cross section that is 3 disjoint non-separating hypersurfaces, so b1 >= 3";
const L3_STATEMENT: &str = "chi = 1 and c orientable cross sections: M misses all of them and \
     reflections give 2 disjoint copies of M per cross section, so b1 >= 2c";

/// Lower bound on b₁ a rule yields for a record, if the rule applies.
fn rule_bound(rule: RuleId, rec: &CensusRecord) -> Option<u32> {
    let c = rec.orientable_cross_sections;
    match rule {
        RuleId::L1 => Some(1),
        RuleId::L2 => (c >= 1).then_some(3),
        RuleId::L3 => (c >= 1).then_some(2 * c),
        _ => None,
    }
}

/// The largest b₁ any applicable rule can rule out, plus one: raising b₁
/// to this value leaves the record unexcluded.
pub fn exclusion_threshold(rec: &CensusRecord) -> u32 {
    [RuleId::L1, RuleId::L2, RuleId::L3]
        .iter()
        .filter_map(|r| rule_bound(*r, rec))
        .max()
        .unwrap_or(0)
}

/// Applies L1, L2, L3 in order to a census record, assuming χ = 1, and
/// stops at the first rule that excludes it.
pub fn exclude_closed_hypersurface(rec: &CensusRecord) -> ExclusionTrace {
    let mut steps = Vec::new();
    let mut verdict = Verdict::NotExcluded;
    for (rule, statement) in [
        (RuleId::L1, L1_STATEMENT),
        (RuleId::L2, L2_STATEMENT),
        (RuleId::L3, L3_STATEMENT),
    ] {
        let inputs = json!({
            "chi": CENSUS_EULER_CHARACTERISTIC,
            "b1": rec.b1,
            "orientable_cross_sections": rec.orientable_cross_sections,
        });
        let step = match rule_bound(rule, rec) {
            None => TraceStep {
                rule,
                statement,
                inputs,
                applicable: false,
                outcome: "no orientable cross section".into(),
                excludes: false,
            },
            Some(bound) => {
                let excludes = rec.b1 < bound;
                let outcome = if excludes {
                    format!("requires b1 >= {bound}, but b1 = {}: contradiction", rec.b1)
                } else {
                    format!("requires b1 >= {bound}, and b1 = {} is consistent", rec.b1)
                };
                TraceStep {
                    rule,
                    statement,
                    inputs,
                    applicable: true,
                    outcome,
                    excludes,
                }
            }
        };
        let excludes = step.excludes;
        steps.push(step);
        if excludes {
            verdict = Verdict::Excluded(rule);
            break;
        }
    }
    ExclusionTrace {
        subject: format!(
            "census manifold {} (b1 = {}, orientable cross sections = {}, chi = {})",
            rec.index, rec.b1, rec.orientable_cross_sections, CENSUS_EULER_CHARACTERISTIC
        ),
        steps,
        verdict,
    }
}

const CODE_STATEMENT: &str = "the compact side-pairing code expands to one symbol per side of the 24-cell";
const ORIENT_STATEMENT: &str = "a cross section is orientable iff every k_i reverses orientation, \
     i.e. k_i is in {1, 2, 4, 7}";
const SYMMETRY_STATEMENT: &str = "codes related by a symmetry of the cube give isometric cross \
     sections; the reference code is the complement of the stated link";
const LIFT_STATEMENT: &str = "in the orientable double cover W of a non-orientable N, each \
     orientable cross section lifts to two embedded copies, and chi(W) = 2 chi(N)";
const COPIES_STATEMENT: &str = "M misses every lifted cross section (the link complement has no \
     closed embedded totally geodesic surface), so the reflection group K of order 16 gives 16 \
     disjoint copies of M, each separating since W embeds in S^4";
const VOLUME_STATEMENT: &str = "K disjoint separating copies of a closed hypersurface of volume A \
     need Vol(W) = (4 pi^2 / 3) chi >= K * V'(A)";

/// Volumes in the trace text are truncated, not rounded, to one decimal.
fn truncate_tenths(x: f64) -> f64 {
    (x * 10.0).floor() / 10.0
}

/// Replays the volume argument for the orientable double cover of a
/// non-orientable census manifold, with `a` a lower bound for the volume
/// of a closed hyperbolic 3-manifold.
pub fn exclude_cover(record: &CoverRecord, a: f64) -> Result<ExclusionTrace> {
    let mut steps = Vec::new();
    let subject = format!(
        "orientable double cover of census manifold {} (code {})",
        record.name, record.code
    );
    let stop = |steps: Vec<TraceStep>| ExclusionTrace {
        subject: subject.clone(),
        steps,
        verdict: Verdict::NotExcluded,
    };

    steps.push(TraceStep {
        rule: RuleId::Code,
        statement: CODE_STATEMENT,
        inputs: json!({ "code": record.code.compact() }),
        applicable: true,
        outcome: format!("{} -> {}", record.code.compact(), record.code.expanded()),
        excludes: false,
    });

    let orientable: Vec<bool> = record.k_codes.iter().map(cross_section_orientable).collect();
    let all_orientable = !orientable.is_empty() && orientable.iter().all(|&o| o);
    steps.push(TraceStep {
        rule: RuleId::Orientability,
        statement: ORIENT_STATEMENT,
        inputs: json!({ "k_codes": record.k_codes, "orientable": orientable }),
        applicable: all_orientable,
        outcome: format!(
            "{} of {} cross sections orientable",
            orientable.iter().filter(|&&o| o).count(),
            orientable.len()
        ),
        excludes: false,
    });
    if !all_orientable {
        return Ok(stop(steps));
    }

    let symmetries: Vec<Option<CubeSymmetry>> = record
        .k_codes
        .iter()
        .map(|c| cube_symmetry_equivalent(c, &record.reference_code))
        .collect();
    let all_equivalent = symmetries.iter().all(Option::is_some);
    let annotations = link_annotations();
    steps.push(TraceStep {
        rule: RuleId::Symmetry,
        statement: SYMMETRY_STATEMENT,
        inputs: json!({
            "k_codes": record.k_codes,
            "reference_code": record.reference_code,
            "symmetries": symmetries,
            "link": record.link,
            "link_volume": annotations.volume,
        }),
        applicable: all_equivalent,
        outcome: format!(
            "{} of {} codes equivalent to {}; each cross section is the complement of {}",
            symmetries.iter().filter(|s| s.is_some()).count(),
            symmetries.len(),
            record.reference_code,
            record.link
        ),
        excludes: false,
    });
    if !all_equivalent {
        return Ok(stop(steps));
    }

    let cover_chi = 2 * record.euler_characteristic;
    let lifts = 2 * record.k_codes.len();
    steps.push(TraceStep {
        rule: RuleId::Lift,
        statement: LIFT_STATEMENT,
        inputs: json!({ "base_orientable": record.orientable, "base_chi": record.euler_characteristic }),
        applicable: !record.orientable,
        outcome: format!("chi(W) = {cover_chi}; {lifts} lifted cross sections, 2 per cross section"),
        excludes: false,
    });
    if record.orientable {
        return Ok(stop(steps));
    }

    let k = ReflectionGroupK::new();
    let copies = k.order() as u64;
    steps.push(TraceStep {
        rule: RuleId::Copies,
        statement: COPIES_STATEMENT,
        inputs: json!({ "reflection_group_order": k.order() }),
        applicable: true,
        outcome: format!("{copies} disjoint separating copies of M"),
        excludes: false,
    });

    let v: ObstructionVerdict = volume_obstruction(cover_chi, copies, a)?;
    let (required, available) = (truncate_tenths(v.required), truncate_tenths(v.available));
    let outcome = if v.contradiction {
        format!("{required:.1} > {available:.1}: contradiction")
    } else {
        format!("{required:.1} <= {available:.1}: no contradiction")
    };
    let excludes = v.contradiction;
    steps.push(TraceStep {
        rule: RuleId::Volume,
        statement: VOLUME_STATEMENT,
        inputs: serde_json::to_value(&v).expect("verdict serializes"),
        applicable: true,
        outcome,
        excludes,
    });
    Ok(ExclusionTrace {
        subject,
        steps,
        verdict: if excludes {
            Verdict::Excluded(RuleId::Volume)
        } else {
            Verdict::NotExcluded
        },
    })
}

/// [`exclude_cover`] for census manifold 1011 with the Weeks volume bound.
pub fn exclude_1011_cover() -> ExclusionTrace {
    exclude_cover(&manifold_1011(), WEEKS_VOLUME).expect("embedded data satisfies all preconditions")
}
