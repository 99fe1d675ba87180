use thiserror::Error;

use super::{crc16, FieldError, FieldParams, Polynomial};

/// Key-carrying fields need coefficient chunks of at least this many bits.
pub const MIN_CHUNK_BITS: u32 = 16;

/// A recovered key together with its verified checksum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyMaterial {
    key: Vec<u8>,
    crc: u16,
}

impl KeyMaterial {
    pub fn new(key: Vec<u8>) -> Self {
        let crc = crc16(&key);
        KeyMaterial { key, crc }
    }

    pub fn key(&self) -> &[u8] {
        &self.key
    }

    pub fn crc(&self) -> u16 {
        self.crc
    }

    pub fn into_key(self) -> Vec<u8> {
        self.key
    }
}

/// Why a polynomial did not decode to a key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum IntegrityFailure {
    #[error("coefficient does not fit in a chunk")]
    ChunkOverflow,
    #[error("polynomial too short for the requested key length")]
    Capacity,
    #[error("padding bits are not zero")]
    Padding,
    #[error("checksum mismatch")]
    Checksum,
}

fn bits_needed(key_len: usize) -> u64 {
    8 * key_len as u64 + 16
}

/// Appends the CRC to `key`, reads the result as a big-endian bit string
/// and cuts it into `k` chunks of `floor(log2 q)` bits, zero-padding the
/// tail. The first chunk becomes the leading coefficient.
pub fn encode_key(key: &[u8], field: &FieldParams, k: usize) -> Result<Polynomial, FieldError> {
    if key.is_empty() {
        return Err(FieldError::EmptyKey);
    }
    let bits = field.chunk_bits();
    if bits < MIN_CHUNK_BITS {
        return Err(FieldError::FieldTooSmall {
            q: field.q(),
            bits,
            min: MIN_CHUNK_BITS,
        });
    }
    let need = bits_needed(key.len());
    let have = k as u64 * bits as u64;
    if k == 0 || have < need {
        return Err(FieldError::Capacity {
            coeffs: k,
            bits,
            have,
            need,
        });
    }
    let mut stream = key.to_vec();
    stream.extend_from_slice(&crc16(key).to_be_bytes());

    let bit_at = |i: u64| -> u64 {
        let byte = (i / 8) as usize;
        if byte >= stream.len() {
            0
        } else {
            ((stream[byte] >> (7 - i % 8)) & 1) as u64
        }
    };
    let mut coeffs = vec![0u64; k];
    for chunk in 0..k {
        let start = chunk as u64 * bits as u64;
        let value = (0..bits as u64).fold(0u64, |acc, b| (acc << 1) | bit_at(start + b));
        coeffs[k - 1 - chunk] = value;
    }
    Polynomial::new(coeffs, field)
}

/// Inverse of [`encode_key`]. The checksum is compared exactly.
pub fn decode_key(
    p: &Polynomial,
    field: &FieldParams,
    key_len: usize,
) -> Result<KeyMaterial, IntegrityFailure> {
    let bits = field.chunk_bits() as u64;
    let k = p.len();
    let need = bits_needed(key_len);
    if key_len == 0 || (k as u64) * bits < need {
        return Err(IntegrityFailure::Capacity);
    }
    let mut stream = vec![0u8; (need / 8) as usize];
    let mut pos = 0u64;
    for &c in p.coeffs().iter().rev() {
        if bits < 64 && c >> bits != 0 {
            return Err(IntegrityFailure::ChunkOverflow);
        }
        for b in (0..bits).rev() {
            let bit = ((c >> b) & 1) as u8;
            if pos < need {
                stream[(pos / 8) as usize] |= bit << (7 - pos % 8);
            } else if bit != 0 {
                return Err(IntegrityFailure::Padding);
            }
            pos += 1;
        }
    }
    let crc = u16::from_be_bytes([stream[key_len], stream[key_len + 1]]);
    stream.truncate(key_len);
    if crc16(&stream) != crc {
        return Err(IntegrityFailure::Checksum);
    }
    Ok(KeyMaterial { key: stream, crc })
}
