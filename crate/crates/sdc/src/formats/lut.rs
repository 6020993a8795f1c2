//! Binary lookup-table files.
//!
//! Layout (little-endian):
//!
//! | offset | size | field                                     |
//! |--------|------|-------------------------------------------|
//! | 0      | 4    | magic `SDLT`                              |
//! | 4      | 4    | version (1)                               |
//! | 8      | 1    | basis (0 = X, 1 = Z)                      |
//! | 9      | 1    | enumeration cap `w_max`                   |
//! | 10     | 1    | largest entry weight                      |
//! | 11     | 1    | reserved (0)                              |
//! | 12     | 4    | check rows `r`                            |
//! | 16     | 4    | entry count `2^r`                         |
//! | 20     | 4    | qubits `n`                                |
//! | 24     | 4    | CRC-32 of the entry bytes                 |
//! | 28     | 4    | reserved (0)                              |
//! | 32     | 4·2^r| entries, one `u32` error pattern each     |
//!
//! The largest entry weight above `w_max` means some syndromes were filled
//! by the extended search.

use sdc_core::decoder::LookupTable;
use sdc_core::gf2::BitMatrix;
use sdc_core::Basis;

use super::FormatError;

pub const LUT_MAGIC: [u8; 4] = *b"SDLT";
pub const LUT_VERSION: u32 = 1;
pub const LUT_HEADER_LEN: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LutHeader {
    pub basis: Basis,
    pub w_max: u8,
    pub max_weight_used: u8,
    pub rows: u32,
    pub entries: u32,
    pub n: u32,
    pub crc32: u32,
}

fn bad(message: impl Into<String>) -> FormatError {
    FormatError::Binary {
        what: "lookup table",
        message: message.into(),
    }
}

pub fn write_lut(t: &LookupTable) -> Result<Vec<u8>, FormatError> {
    if t.num_qubits() > 32 {
        return Err(bad(format!(
            "{} qubits do not fit 32-bit entries",
            t.num_qubits()
        )));
    }
    let body: Vec<u8> = t
        .entries()
        .iter()
        .flat_map(|&e| (e as u32).to_le_bytes())
        .collect();
    let mut out = Vec::with_capacity(LUT_HEADER_LEN + body.len());
    out.extend_from_slice(&LUT_MAGIC);
    out.extend_from_slice(&LUT_VERSION.to_le_bytes());
    out.push(match t.basis() {
        Basis::X => 0,
        Basis::Z => 1,
    });
    out.push(t.w_max() as u8);
    out.push(t.max_weight_used() as u8);
    out.push(0);
    out.extend_from_slice(&(t.syndrome_bits() as u32).to_le_bytes());
    out.extend_from_slice(&(t.len() as u32).to_le_bytes());
    out.extend_from_slice(&(t.num_qubits() as u32).to_le_bytes());
    out.extend_from_slice(&crc32fast::hash(&body).to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&body);
    Ok(out)
}

fn u32_at(bytes: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"))
}

pub fn read_lut_header(bytes: &[u8]) -> Result<LutHeader, FormatError> {
    if bytes.len() < LUT_HEADER_LEN {
        return Err(bad(format!(
            "{} bytes is shorter than the header",
            bytes.len()
        )));
    }
    if bytes[..4] != LUT_MAGIC {
        return Err(bad("bad magic"));
    }
    let version = u32_at(bytes, 4);
    if version != LUT_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    let basis = match bytes[8] {
        0 => Basis::X,
        1 => Basis::Z,
        b => return Err(bad(format!("unknown basis byte {b}"))),
    };
    Ok(LutHeader {
        basis,
        w_max: bytes[9],
        max_weight_used: bytes[10],
        rows: u32_at(bytes, 12),
        entries: u32_at(bytes, 16),
        n: u32_at(bytes, 20),
        crc32: u32_at(bytes, 24),
    })
}

/// Reads a table and re-validates every entry against the check matrix
/// `h`.
pub fn read_lut(bytes: &[u8], h: &BitMatrix) -> Result<LookupTable, FormatError> {
    let header = read_lut_header(bytes)?;
    let (rows, n) = h.shape();
    if header.rows as usize != rows || header.n as usize != n {
        return Err(bad(format!(
            "table is for a {}x{} check matrix, expected {rows}x{n}",
            header.rows, header.n
        )));
    }
    if header.rows > 24 || header.entries != 1 << header.rows {
        return Err(bad(format!(
            "{} entries for {} check rows",
            header.entries, header.rows
        )));
    }
    let body = &bytes[LUT_HEADER_LEN..];
    if body.len() != 4 * header.entries as usize {
        return Err(bad(format!(
            "body has {} bytes, expected {}",
            body.len(),
            4 * header.entries
        )));
    }
    let computed = crc32fast::hash(body);
    if computed != header.crc32 {
        return Err(FormatError::Checksum {
            stored: header.crc32,
            computed,
        });
    }
    let entries = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes")) as u64)
        .collect();
    let t = LookupTable::from_entries(h, header.basis, header.w_max as usize, entries)?;
    if t.max_weight_used() != header.max_weight_used as usize {
        return Err(bad("recorded maximum weight disagrees with the entries"));
    }
    Ok(t)
}
