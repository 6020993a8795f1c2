//! Per-shot outcome dumps for offline re-decoding.
//!
//! A 16-byte little-endian header (magic `SDCS`, version, bits per shot
//! `n <= 64`, shot count) is followed by one record of `ceil(n/8)` bytes
//! per shot, bit `q` of the record in byte `q/8`, position `q%8`.

use std::io::{Read, Write};

use super::FormatError;

pub const SHOTS_MAGIC: [u8; 4] = *b"SDCS";
pub const SHOTS_VERSION: u32 = 1;
pub const SHOTS_HEADER_LEN: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShotDump {
    /// Bits per shot.
    pub n: u32,
    /// One record per shot, bit `q` = outcome `q`.
    pub records: Vec<u64>,
}

fn bad(message: impl Into<String>) -> FormatError {
    FormatError::Binary {
        what: "shot dump",
        message: message.into(),
    }
}

pub fn write_shot_dump<W: Write>(w: &mut W, dump: &ShotDump) -> std::io::Result<()> {
    assert!((1..=64).contains(&dump.n), "records hold at most 64 bits");
    let width = (dump.n as usize).div_ceil(8);
    w.write_all(&SHOTS_MAGIC)?;
    w.write_all(&SHOTS_VERSION.to_le_bytes())?;
    w.write_all(&dump.n.to_le_bytes())?;
    w.write_all(&(dump.records.len() as u32).to_le_bytes())?;
    for r in &dump.records {
        w.write_all(&r.to_le_bytes()[..width])?;
    }
    Ok(())
}

pub fn read_shot_dump<R: Read>(r: &mut R) -> Result<ShotDump, FormatError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| bad(e.to_string()))?;
    if bytes.len() < SHOTS_HEADER_LEN || bytes[..4] != SHOTS_MAGIC {
        return Err(bad("bad header"));
    }
    let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().expect("4 bytes"));
    let (version, n, shots) = (word(4), word(8), word(12) as usize);
    if version != SHOTS_VERSION {
        return Err(bad(format!("unsupported version {version}")));
    }
    if !(1..=64).contains(&n) {
        return Err(bad(format!("{n} bits per shot")));
    }
    let width = (n as usize).div_ceil(8);
    let body = &bytes[SHOTS_HEADER_LEN..];
    if body.len() != width * shots {
        return Err(bad(format!(
            "body has {} bytes, expected {}",
            body.len(),
            width * shots
        )));
    }
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let records = body
        .chunks_exact(width)
        .map(|c| {
            let mut w = [0u8; 8];
            w[..width].copy_from_slice(c);
            u64::from_le_bytes(w)
        })
        .collect::<Vec<_>>();
    if records.iter().any(|&r| r & !mask != 0) {
        return Err(bad("record has bits beyond n"));
    }
    Ok(ShotDump { n, records })
}
