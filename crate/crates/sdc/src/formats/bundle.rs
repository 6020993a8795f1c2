//! Code bundle text: named sections `[SX]`, `[SZ]`, `[LX]`, `[LZ]`, each
//! followed by matrix rows of `0`/`1`. `#` starts a comment. The logical
//! sections are optional; when both are missing they are derived.

use sdc_core::code::{derive_logicals, StabilizerCode};
use sdc_core::gf2::{BitMatrix, BitVec};

use super::{parse_err, FormatError};

/// The [[30,6,5]] code with its shipped logical operators.
pub const BUILTIN_BUNDLE: &str = include_str!("../../assets/code_30_6_5.txt");

/// A [[4,2,2]] code for quick checks.
pub const TOY_BUNDLE: &str = include_str!("../../assets/toy_4_2_2.txt");

const SECTIONS: [&str; 4] = ["SX", "SZ", "LX", "LZ"];

/// Raw matrices of a bundle, before any code-level validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeBundle {
    pub sx: BitMatrix,
    pub sz: BitMatrix,
    pub lx: Option<BitMatrix>,
    pub lz: Option<BitMatrix>,
}

impl CodeBundle {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut sections: [Option<(usize, Vec<BitVec>)>; 4] = Default::default();
        let mut current: Option<usize> = None;
        let mut width: Option<usize> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                let idx = SECTIONS
                    .iter()
                    .position(|s| s.eq_ignore_ascii_case(name.trim()))
                    .ok_or_else(|| parse_err(line_no, format!("unknown section [{name}]")))?;
                if sections[idx].is_some() {
                    return Err(parse_err(
                        line_no,
                        format!("duplicate section [{}]", SECTIONS[idx]),
                    ));
                }
                sections[idx] = Some((line_no, Vec::new()));
                current = Some(idx);
                continue;
            }
            let idx = current.ok_or_else(|| parse_err(line_no, "matrix row outside a section"))?;
            let row = parse_row(line).map_err(|m| parse_err(line_no, m))?;
            match width {
                None => width = Some(row.len()),
                Some(w) if w != row.len() => {
                    return Err(parse_err(
                        line_no,
                        format!("row has {} entries, expected {w}", row.len()),
                    ))
                }
                _ => {}
            }
            sections[idx].as_mut().expect("section opened").1.push(row);
        }
        let n = width.unwrap_or(0);
        let [sx, sz, lx, lz] =
            sections.map(|s| s.map(|(line, rows)| (line, BitMatrix::from_rows(rows, n))));
        let required = |s: Option<(usize, sdc_core::Result<BitMatrix>)>, name: &str| match s {
            Some((_, m)) => m.map_err(FormatError::from),
            None => Err(parse_err(
                text.lines().count().max(1),
                format!("missing section [{name}]"),
            )),
        };
        let optional =
            |s: Option<(usize, sdc_core::Result<BitMatrix>)>| s.map(|(_, m)| m).transpose();
        let bundle = CodeBundle {
            sx: required(sx, "SX")?,
            sz: required(sz, "SZ")?,
            lx: optional(lx)?,
            lz: optional(lz)?,
        };
        if bundle.lx.is_some() != bundle.lz.is_some() {
            return Err(parse_err(1, "sections [LX] and [LZ] must appear together"));
        }
        Ok(bundle)
    }

    /// Validates the stabilizers and logicals; derives logicals if absent.
    pub fn into_code(self) -> Result<StabilizerCode, FormatError> {
        let code = StabilizerCode::new(self.sx, self.sz)?;
        let (lx, lz) = match (self.lx, self.lz) {
            (Some(lx), Some(lz)) => (lx, lz),
            _ => derive_logicals(&code)?,
        };
        Ok(code.with_logicals(lx, lz)?)
    }
}

fn parse_row(line: &str) -> Result<BitVec, String> {
    let bits = line
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(format!("unexpected character {other:?}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BitVec::from_bools(&bits))
}

pub fn parse_code_bundle(text: &str) -> Result<StabilizerCode, FormatError> {
    CodeBundle::parse(text)?.into_code()
}

pub fn write_code_bundle(code: &StabilizerCode) -> String {
    let mut s = format!("# [[{},{}]] CSS code\n", code.n(), code.k());
    let mut section = |name: &str, m: &BitMatrix| {
        s.push_str(&format!("[{name}]\n"));
        s.push_str(&m.to_text());
    };
    section("SX", code.sx());
    section("SZ", code.sz());
    if code.has_logicals() {
        section("LX", code.lx());
        section("LZ", code.lz());
    }
    s
}
