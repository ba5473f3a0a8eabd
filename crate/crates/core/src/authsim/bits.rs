/// A binary word packed 64 symbols per machine word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PackedWord {
    len: usize,
    limbs: Vec<u64>,
}

impl PackedWord {
    /// Packs a sequence over `{0, 1}`; returns `None` if another symbol occurs.
    pub fn from_bits(bits: &[u8]) -> Option<Self> {
        let mut limbs = vec![0u64; bits.len().div_ceil(64)];
        for (k, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => limbs[k / 64] |= 1 << (k % 64),
                _ => return None,
            }
        }
        Some(Self { len: bits.len(), limbs })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.count_ones() as usize).sum()
    }

    #[inline]
    pub fn distance(&self, other: &PackedWord) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.limbs
            .iter()
            .zip(&other.limbs)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn xor(&self, other: &PackedWord) -> PackedWord {
        PackedWord {
            len: self.len,
            limbs: self.limbs.iter().zip(&other.limbs).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len)
            .map(|k| ((self.limbs[k / 64] >> (k % 64)) & 1) as u8)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_and_weight() {
        let a = PackedWord::from_bits(&[0, 1, 1, 0, 1]).unwrap();
        let b = PackedWord::from_bits(&[1, 1, 0, 0, 1]).unwrap();
        assert_eq!(a.distance(&b), 2);
        assert_eq!(a.weight(), 3);
        assert_eq!(a.xor(&b).to_bits(), vec![1, 0, 1, 0, 0]);
        assert!(PackedWord::from_bits(&[0, 2]).is_none());
    }

    #[test]
    fn crosses_limb_boundaries() {
        let mut x = vec![0u8; 130];
        x[63] = 1;
        x[64] = 1;
        x[129] = 1;
        let a = PackedWord::from_bits(&x).unwrap();
        let zero = PackedWord::from_bits(&[0; 130]).unwrap();
        assert_eq!(a.distance(&zero), 3);
        assert_eq!(a.to_bits(), x);
    }
}
