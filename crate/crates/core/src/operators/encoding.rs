//! Self-delimiting codes from finite sequences of naturals to a single natural.
//!
//! Each entry `x` is written in Elias-gamma code for `x + 1`, entries are
//! concatenated, and a leading 1 bit marks where the code starts. The map is
//! injective and stable across runs; it is the only way image elements are named.

use super::OperatorError;
use crate::logic::Name;

const WIDTH: u32 = Name::BITS;

/// Encodes a sequence; fails when the code needs more than 127 bits.
pub fn encode_naturals(xs: &[u128]) -> Result<Name, OperatorError> {
    let mut code: Name = 1;
    let mut used = 1u32;
    for &x in xs {
        let v = x.checked_add(1).ok_or(OperatorError::EncodingOverflow)?;
        let len = WIDTH - v.leading_zeros();
        let bits = 2 * len - 1;
        if used + bits > WIDTH {
            return Err(OperatorError::EncodingOverflow);
        }
        // len-1 zeros, then v in len bits
        code <<= len - 1;
        code = (code << len) | v;
        used += bits;
    }
    Ok(code)
}

pub fn decode_naturals(code: Name) -> Option<Vec<u128>> {
    if code == 0 {
        return None;
    }
    let total = WIDTH - code.leading_zeros();
    // bit positions counted from the most significant, skipping the marker
    let bit = |i: u32| (code >> (total - 1 - i)) & 1;
    let mut i = 1;
    let mut out = Vec::new();
    while i < total {
        let mut zeros = 0;
        while i < total && bit(i) == 0 {
            zeros += 1;
            i += 1;
        }
        if i + zeros + 1 > total {
            return None;
        }
        let mut v: u128 = 0;
        for _ in 0..=zeros {
            v = (v << 1) | bit(i);
            i += 1;
        }
        out.push(v - 1);
    }
    Some(out)
}

/// Interleaves signed values into the naturals: 0, -1, 1, -2, 2, …
pub fn zigzag(v: i128) -> u128 {
    if v >= 0 {
        (v as u128) << 1
    } else {
        ((-(v + 1)) as u128) << 1 | 1
    }
}

pub fn unzigzag(z: u128) -> i128 {
    if z & 1 == 0 {
        (z >> 1) as i128
    } else {
        -((z >> 1) as i128) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_codes() {
        assert_eq!(encode_naturals(&[]).unwrap(), 1);
        // marker 1, then gamma(1) = "1"
        assert_eq!(encode_naturals(&[0]).unwrap(), 0b11);
        // marker 1, then gamma(2) = "010"
        assert_eq!(encode_naturals(&[1]).unwrap(), 0b1010);
        assert_eq!(decode_naturals(0b1010), Some(vec![1]));
        assert_eq!(decode_naturals(0b100), None);
        assert!(encode_naturals(&[u128::MAX]).is_err());
        assert!(encode_naturals(&[1 << 70]).is_err());
    }

    #[test]
    fn zigzag_order() {
        let vals: Vec<u128> = [0, -1, 1, -2, 2].iter().map(|&v| zigzag(v)).collect();
        assert_eq!(vals, vec![0, 1, 2, 3, 4]);
    }

    proptest! {
        #[test]
        fn decode_inverts_encode(xs in proptest::collection::vec(0u128..200, 0..7)) {
            let code = encode_naturals(&xs).unwrap();
            prop_assert_eq!(decode_naturals(code), Some(xs));
        }

        #[test]
        fn zigzag_round_trip(v in -1_000_000i128..1_000_000) {
            prop_assert_eq!(unzigzag(zigzag(v)), v);
        }
    }
}
