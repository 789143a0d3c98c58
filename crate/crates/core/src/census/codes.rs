use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

const HEX: &[u8; 16] = b"0123456789ABCDEF";

/// A 24-cell side pairing in compact form: six hexadecimal symbols, each
/// standing for four consecutive sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SidePairingCode {
    symbols: [u8; 6],
}

impl SidePairingCode {
    /// The six symbol values, each in `0..16`.
    pub fn symbols(&self) -> [u8; 6] {
        self.symbols
    }

    pub fn compact(&self) -> String {
        self.symbols.iter().map(|&s| HEX[s as usize] as char).collect()
    }

    /// One symbol per side of the 24-cell.
    pub fn expanded(&self) -> String {
        self.symbols
            .iter()
            .flat_map(|&s| std::iter::repeat(HEX[s as usize] as char).take(4))
            .collect()
    }

    /// Inverse of [`SidePairingCode::expanded`]; every run of four must
    /// repeat one symbol.
    pub fn from_expanded(expanded: &str) -> Result<SidePairingCode> {
        let chars: Vec<char> = expanded.chars().collect();
        if chars.len() != 24 {
            return Err(Error::InvalidCode(format!(
                "expanded code {expanded:?} has {} symbols, expected 24",
                chars.len()
            )));
        }
        let mut compact = String::new();
        for group in chars.chunks(4) {
            if group.iter().any(|c| *c != group[0]) {
                return Err(Error::InvalidCode(format!(
                    "expanded code {expanded:?} does not repeat each symbol four times"
                )));
            }
            compact.push(group[0]);
        }
        parse_code(&compact)
    }
}

impl fmt::Display for SidePairingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

impl FromStr for SidePairingCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<SidePairingCode> {
        parse_code(s)
    }
}

impl Serialize for SidePairingCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses a six-symbol hexadecimal side-pairing code (either case).
pub fn parse_code(compact: &str) -> Result<SidePairingCode> {
    let chars: Vec<char> = compact.chars().collect();
    if chars.len() != 6 {
        return Err(Error::InvalidCode(format!(
            "code {compact:?} has {} symbols, expected 6",
            chars.len()
        )));
    }
    let mut symbols = [0u8; 6];
    for (slot, c) in symbols.iter_mut().zip(&chars) {
        *slot = c
            .to_digit(16)
            .ok_or_else(|| Error::InvalidCode(format!("{c:?} is not a hexadecimal symbol in {compact:?}")))?
            as u8;
    }
    Ok(SidePairingCode { symbols })
}

/// Sign pattern of a cross-section digit: bit `j` set means coordinate `j`
/// is negated, the fourth coordinate is fixed. Digits run over `0..8`.
pub fn digit_matrix(k: u8) -> Result<[i8; 4]> {
    if k > 7 {
        return Err(Error::InvalidCode(format!("cross-section digit {k} is outside 0..=7")));
    }
    let mut diag = [1i8; 4];
    for (j, entry) in diag.iter_mut().take(3).enumerate() {
        if k >> j & 1 == 1 {
            *entry = -1;
        }
    }
    Ok(diag)
}

/// Whether the reflection-composed side pairing `r·k` preserves
/// orientation, which happens exactly when `k` reverses it: `k ∈ {1,2,4,7}`.
pub fn side_pairing_orientable(k: u8) -> Result<bool> {
    let det: i8 = digit_matrix(k)?.iter().product();
    Ok(det == -1)
}

/// Three cross-section digits `k₁ k₅ k₉`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossSectionCode {
    pub digits: [u8; 3],
}

impl CrossSectionCode {
    pub fn new(digits: [u8; 3]) -> Result<CrossSectionCode> {
        for &d in &digits {
            digit_matrix(d)?;
        }
        Ok(CrossSectionCode { digits })
    }

    /// All 512 codes over the digits `0..8`.
    pub fn all() -> impl Iterator<Item = CrossSectionCode> {
        (0..512u16).map(|n| CrossSectionCode {
            digits: [(n >> 6) as u8, (n >> 3 & 7) as u8, (n & 7) as u8],
        })
    }
}

impl fmt::Display for CrossSectionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.digits[0], self.digits[1], self.digits[2])
    }
}

impl FromStr for CrossSectionCode {
    type Err = Error;

    fn from_str(s: &str) -> Result<CrossSectionCode> {
        let digits: Vec<u8> = s
            .chars()
            .map(|c| c.to_digit(8).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidCode(format!("{s:?} has a digit outside 0..=7")))?;
        let digits: [u8; 3] = digits
            .try_into()
            .map_err(|_| Error::InvalidCode(format!("{s:?} is not three digits")))?;
        CrossSectionCode::new(digits)
    }
}

impl Serialize for CrossSectionCode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// All three side pairings preserve orientation.
pub fn cross_section_orientable(code: &CrossSectionCode) -> bool {
    code.digits
        .iter()
        .all(|&d| side_pairing_orientable(d).expect("digits validated on construction"))
}

/// A symmetry of the cube `[-1,1]³`: `e_i ↦ signs[i]·e_{perm[i]}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CubeSymmetry {
    pub perm: [usize; 3],
    pub signs: [i8; 3],
}

/// Geometric type of a cube symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryKind {
    Identity,
    /// Rotation about the axis through the centers of opposite faces.
    FaceRotation { quarter_turns: u8 },
    /// Rotation by π about the axis through midpoints of opposite edges.
    EdgeRotation,
    /// Rotation by 2π/3 about a long diagonal.
    VertexRotation,
    /// An orientation-reversing symmetry.
    Improper,
}

impl CubeSymmetry {
    pub fn identity() -> CubeSymmetry {
        CubeSymmetry {
            perm: [0, 1, 2],
            signs: [1, 1, 1],
        }
    }

    /// Rotations first, then the orientation-reversing symmetries; within
    /// each, permutations in lexicographic order and sign patterns by
    /// binary count.
    pub fn all() -> Vec<CubeSymmetry> {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut all = Vec::with_capacity(48);
        for want_rotation in [true, false] {
            for perm in PERMS {
                for mask in 0..8u8 {
                    let signs = [0, 1, 2].map(|j| if mask >> j & 1 == 1 { -1 } else { 1 });
                    let g = CubeSymmetry { perm, signs };
                    if g.is_rotation() == want_rotation {
                        all.push(g);
                    }
                }
            }
        }
        all
    }

    /// The 3×3 matrix, `m[perm[i]][i] = signs[i]`.
    pub fn matrix(&self) -> [[i8; 3]; 3] {
        let mut m = [[0i8; 3]; 3];
        for i in 0..3 {
            m[self.perm[i]][i] = self.signs[i];
        }
        m
    }

    pub fn determinant(&self) -> i8 {
        let inversions = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .filter(|&(i, j)| self.perm[i] > self.perm[j])
            .count();
        let parity = if inversions % 2 == 0 { 1 } else { -1 };
        parity * self.signs.iter().product::<i8>()
    }

    pub fn is_rotation(&self) -> bool {
        self.determinant() == 1
    }

    pub fn compose(&self, other: &CubeSymmetry) -> CubeSymmetry {
        // (self ∘ other)(e_i) = self(signs_o[i] e_{perm_o[i]})
        let mut perm = [0; 3];
        let mut signs = [1; 3];
        for i in 0..3 {
            let j = other.perm[i];
            perm[i] = self.perm[j];
            signs[i] = other.signs[i] * self.signs[j];
        }
        CubeSymmetry { perm, signs }
    }

    pub fn inverse(&self) -> CubeSymmetry {
        let mut perm = [0; 3];
        let mut signs = [1; 3];
        for i in 0..3 {
            perm[self.perm[i]] = i;
            signs[self.perm[i]] = self.signs[i];
        }
        CubeSymmetry { perm, signs }
    }

    pub fn kind(&self) -> SymmetryKind {
        if !self.is_rotation() {
            return SymmetryKind::Improper;
        }
        let m = self.matrix();
        let trace: i8 = (0..3).map(|i| m[i][i]).sum();
        match trace {
            3 => SymmetryKind::Identity,
            1 => SymmetryKind::FaceRotation { quarter_turns: 1 },
            0 => SymmetryKind::VertexRotation,
            _ => {
                // a half turn; its axis is fixed, so count the fixed
                // coordinate directions
                if self.perm == [0, 1, 2] {
                    SymmetryKind::FaceRotation { quarter_turns: 2 }
                } else {
                    SymmetryKind::EdgeRotation
                }
            }
        }
    }

    /// Moves bit `j` of a sign mask to bit `perm[j]`.
    pub fn act_on_digit(&self, k: u8) -> u8 {
        (0..3)
            .filter(|&j| k >> j & 1 == 1)
            .fold(0u8, |acc, j| acc | 1 << self.perm[j])
    }

    /// Digit `i` moves to position `perm[i]`, with its mask bits permuted
    /// the same way. Signs act trivially: diagonal sign changes commute
    /// with the diagonal digit matrices.
    pub fn act(&self, code: &CrossSectionCode) -> CrossSectionCode {
        let mut digits = [0u8; 3];
        for i in 0..3 {
            digits[self.perm[i]] = self.act_on_digit(code.digits[i]);
        }
        CrossSectionCode { digits }
    }
}

impl fmt::Display for CubeSymmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.matrix();
        let rows: Vec<String> = m
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

impl Serialize for CubeSymmetry {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CubeSymmetry", 3)?;
        st.serialize_field("matrix", &self.matrix())?;
        st.serialize_field("kind", &self.kind())?;
        st.serialize_field("determinant", &self.determinant())?;
        st.end()
    }
}

/// The first symmetry, in [`CubeSymmetry::all`] order, carrying `c1` to `c2`.
pub fn cube_symmetry_equivalent(c1: &CrossSectionCode, c2: &CrossSectionCode) -> Option<CubeSymmetry> {
    CubeSymmetry::all().into_iter().find(|g| g.act(c1) == *c2)
}

/// The orbit of a code under all 48 symmetries, sorted.
pub fn orbit(code: &CrossSectionCode) -> Vec<CrossSectionCode> {
    let mut out: Vec<CrossSectionCode> = CubeSymmetry::all().iter().map(|g| g.act(code)).collect();
    out.sort();
    out.dedup();
    out
}

/// The group generated by reflections in the four coordinate hyperplanes
/// of R⁴, as diagonal sign matrices encoded by bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReflectionGroupK {
    pub generators: [u8; 4],
    pub elements: Vec<u8>,
}

impl ReflectionGroupK {
    pub fn new() -> ReflectionGroupK {
        let generators = [1u8, 2, 4, 8];
        let mut elements = vec![0u8];
        // close under multiplication, which is XOR of masks
        let mut frontier = vec![0u8];
        while let Some(x) = frontier.pop() {
            for g in generators {
                let y = x ^ g;
                if !elements.contains(&y) {
                    elements.push(y);
                    frontier.push(y);
                }
            }
        }
        elements.sort_unstable();
        ReflectionGroupK { generators, elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn matrix(mask: u8) -> [i8; 4] {
        [0, 1, 2, 3].map(|j| if mask >> j & 1 == 1 { -1 } else { 1 })
    }
}

impl Default for ReflectionGroupK {
    fn default() -> Self {
        ReflectionGroupK::new()
    }
}
