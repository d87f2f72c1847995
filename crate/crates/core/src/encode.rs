//! Deterministic byte encodings used by canonical codes and refinement
//! records. Every sequence is count- or length-prefixed so that distinct
//! structures never share an encoding.

/// Appends an LEB128 varint.
pub(crate) fn push_varint(buf: &mut Vec<u8>, mut value: u64) {
    loop {
        let byte = (value & 0x7f) as u8;
        value >>= 7;
        if value == 0 {
            buf.push(byte);
            return;
        }
        buf.push(byte | 0x80);
    }
}

/// Appends a length-prefixed byte string.
pub(crate) fn push_bytes(buf: &mut Vec<u8>, bytes: &[u8]) {
    push_varint(buf, bytes.len() as u64);
    buf.extend_from_slice(bytes);
}

/// Appends the exact bit pattern of an `f64` (little-endian).
pub(crate) fn push_f64_bits(buf: &mut Vec<u8>, value: f64) {
    buf.extend_from_slice(&value.to_bits().to_le_bytes());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn varint_round_values() {
        let mut buf = Vec::new();
        push_varint(&mut buf, 0);
        assert_eq!(buf, [0x00]);
        buf.clear();
        push_varint(&mut buf, 127);
        assert_eq!(buf, [0x7f]);
        buf.clear();
        push_varint(&mut buf, 128);
        assert_eq!(buf, [0x80, 0x01]);
        buf.clear();
        push_varint(&mut buf, 300);
        assert_eq!(buf, [0xac, 0x02]);
    }

    #[test]
    fn f64_bits_distinguish_signed_zero() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        push_f64_bits(&mut a, 0.0);
        push_f64_bits(&mut b, -0.0);
        assert_ne!(a, b);
    }
}
