//! Binary factor stream.
//!
//! A stream is a 26-byte big-endian header followed by `z` varint records.
//! Symbols are stored as internal values (sentinel `0`, input symbols
//! shifted by one).

use crate::{Algorithm, Epsilon, Error, Factor, Result};

pub const MAGIC: [u8; 4] = *b"LZSE";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodecHeader {
    pub algorithm: Algorithm,
    pub epsilon: Epsilon,
    pub n: u64,
    pub z: u64,
}

fn algo_code(a: Algorithm) -> u8 {
    match a {
        Algorithm::Lz77 => 1,
        Algorithm::Lz77Classic => 2,
        Algorithm::Lz78 => 3,
    }
}

impl CodecHeader {
    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[..4].copy_from_slice(&MAGIC);
        b[4] = VERSION;
        b[5] = algo_code(self.algorithm);
        b[6..8].copy_from_slice(&self.epsilon.num().to_be_bytes());
        b[8..10].copy_from_slice(&self.epsilon.den().to_be_bytes());
        b[10..18].copy_from_slice(&self.n.to_be_bytes());
        b[18..26].copy_from_slice(&self.z.to_be_bytes());
        b
    }

    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Malformed("truncated header".into()));
        }
        if bytes[..4] != MAGIC {
            return Err(Error::Malformed("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(Error::Malformed(format!("unsupported version {}", bytes[4])));
        }
        let algorithm = match bytes[5] {
            1 => Algorithm::Lz77,
            2 => Algorithm::Lz77Classic,
            3 => Algorithm::Lz78,
            c => return Err(Error::Malformed(format!("unknown algorithm code {c}"))),
        };
        let num = u16::from_be_bytes([bytes[6], bytes[7]]);
        let den = u16::from_be_bytes([bytes[8], bytes[9]]);
        let epsilon = Epsilon::new(num, den)
            .map_err(|_| Error::Malformed(format!("bad epsilon {num}/{den}")))?;
        let n = u64::from_be_bytes(bytes[10..18].try_into().unwrap());
        let z = u64::from_be_bytes(bytes[18..26].try_into().unwrap());
        if n == 0 || z == 0 || z > n {
            return Err(Error::Malformed(format!("bad sizes n={n} z={z}")));
        }
        Ok(CodecHeader {
            algorithm,
            epsilon,
            n,
            z,
        })
    }
}

pub fn write_varint(out: &mut Vec<u8>, mut v: u64) {
    while v >= 0x80 {
        out.push((v as u8 & 0x7f) | 0x80);
        v >>= 7;
    }
    out.push(v as u8);
}

/// Reads a varint at `*pos` and advances past it.
pub fn read_varint(bytes: &[u8], pos: &mut usize) -> Result<u64> {
    let mut v = 0u64;
    for shift in (0..64).step_by(7) {
        let b = *bytes
            .get(*pos)
            .ok_or_else(|| Error::Malformed("truncated varint".into()))?;
        *pos += 1;
        let part = u64::from(b & 0x7f);
        if shift == 63 && part > 1 {
            break;
        }
        v |= part << shift;
        if b & 0x80 == 0 {
            return Ok(v);
        }
    }
    Err(Error::Malformed("varint overflows 64 bits".into()))
}

/// Serializes a factor list. Classic LZ77 references carry their fresh
/// symbol as a third varint.
pub fn encode(algorithm: Algorithm, epsilon: Epsilon, n: usize, factors: &[Factor]) -> Vec<u8> {
    let header = CodecHeader {
        algorithm,
        epsilon,
        n: n as u64,
        z: factors.len() as u64,
    };
    let mut out = header.to_bytes().to_vec();
    for f in factors {
        match algorithm {
            Algorithm::Lz78 => {
                write_varint(&mut out, f.reference.unwrap_or(0) as u64);
                write_varint(&mut out, f.literal.unwrap_or(0).into());
            }
            _ => match f.reference {
                None => {
                    out.push(0);
                    write_varint(&mut out, f.literal.unwrap_or(0).into());
                }
                Some(r) => {
                    out.push(1);
                    write_varint(&mut out, r as u64);
                    write_varint(&mut out, f.len as u64);
                    if algorithm == Algorithm::Lz77Classic {
                        write_varint(&mut out, f.literal.unwrap_or(0).into());
                    }
                }
            },
        }
    }
    out
}

fn symbol(v: u64) -> Result<u32> {
    u32::try_from(v).map_err(|_| Error::Malformed(format!("symbol {v} exceeds 32 bits")))
}

/// Parses a stream back into its header and factor list. References and
/// lengths are checked against the header; trailing bytes are rejected.
pub fn decode(bytes: &[u8]) -> Result<(CodecHeader, Vec<Factor>)> {
    let header = CodecHeader::parse(bytes)?;
    let n = header.n;
    let mut pos = HEADER_LEN;
    let mut factors: Vec<Factor> = Vec::new();
    let mut start = 1u64;
    for x in 1..=header.z {
        if start > n {
            return Err(Error::Malformed(format!("factor {x} starts past n={n}")));
        }
        let f = match header.algorithm {
            Algorithm::Lz78 => {
                let r = read_varint(bytes, &mut pos)?;
                let c = symbol(read_varint(bytes, &mut pos)?)?;
                if r >= x {
                    return Err(Error::Malformed(format!("factor {x} refers to {r}")));
                }
                let len = if r == 0 {
                    1
                } else {
                    factors[r as usize - 1].len + 1
                };
                Factor {
                    start: start as usize,
                    len,
                    reference: (r > 0).then_some(r as usize),
                    literal: Some(c),
                }
            }
            algo => {
                let flag = *bytes
                    .get(pos)
                    .ok_or_else(|| Error::Malformed("truncated record".into()))?;
                pos += 1;
                match flag {
                    0 => Factor {
                        start: start as usize,
                        len: 1,
                        reference: None,
                        literal: Some(symbol(read_varint(bytes, &mut pos)?)?),
                    },
                    1 => {
                        let r = read_varint(bytes, &mut pos)?;
                        let len = read_varint(bytes, &mut pos)?;
                        let classic = algo == Algorithm::Lz77Classic;
                        if r == 0 || r >= start {
                            return Err(Error::Malformed(format!("factor {x} refers to {r}")));
                        }
                        if len < 1 + u64::from(classic) {
                            return Err(Error::Malformed(format!("factor {x} has length {len}")));
                        }
                        let literal = if classic {
                            Some(symbol(read_varint(bytes, &mut pos)?)?)
                        } else {
                            None
                        };
                        Factor {
                            start: start as usize,
                            len: len as usize,
                            reference: Some(r as usize),
                            literal,
                        }
                    }
                    _ => return Err(Error::Malformed(format!("bad flag byte {flag}"))),
                }
            }
        };
        start = start
            .checked_add(f.len as u64)
            .ok_or_else(|| Error::Malformed("length overflow".into()))?;
        factors.push(f);
    }
    if start != n + 1 {
        return Err(Error::Malformed(format!(
            "factors cover {} symbols, header says {n}",
            start - 1
        )));
    }
    if pos != bytes.len() {
        return Err(Error::Malformed(format!(
            "{} trailing bytes",
            bytes.len() - pos
        )));
    }
    Ok((header, factors))
}

/// Expands a decoded factor list into internal symbols. The result must end
/// with the only sentinel.
pub fn expand(algorithm: Algorithm, factors: &[Factor]) -> Result<Vec<u32>> {
    let mut out: Vec<u32> = Vec::new();
    for f in factors {
        match (algorithm, f.reference) {
            (_, None) => out.push(f.literal.unwrap_or(0)),
            (Algorithm::Lz78, Some(r)) => {
                let from = factors[r - 1].start - 1;
                out.extend_from_within(from..from + f.len - 1);
                out.push(f.literal.unwrap_or(0));
            }
            (_, Some(r)) => {
                let copy = f.len - usize::from(f.literal.is_some());
                for k in 0..copy {
                    out.push(out[r - 1 + k]);
                }
                if let Some(c) = f.literal {
                    out.push(c);
                }
            }
        }
    }
    match out.iter().position(|&c| c == 0) {
        Some(p) if p + 1 == out.len() => Ok(out),
        _ => Err(Error::Malformed("sentinel missing or not last".into())),
    }
}
