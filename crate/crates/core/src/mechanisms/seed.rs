use crate::error::{Error, Result};
use crate::matching::LabelVector;

/// `⌈log₂ m⌉` random bits from which all `m` agent labels are derived.
///
/// Agent `i` is assigned the vector `a_i = i - 1` written in binary; its
/// label is the inner product of `a_i` and the seed over GF(2). Distinct
/// agents have distinct vectors, so any two labels disagree on exactly half
/// of all seeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LabelSeed {
    width: u32,
    bits: u64,
}

impl LabelSeed {
    /// `⌈log₂ agents⌉`, and 0 for a single agent.
    pub fn width_for(agents: usize) -> u32 {
        if agents <= 1 {
            0
        } else {
            usize::BITS - (agents - 1).leading_zeros()
        }
    }

    pub fn new(width: u32, bits: u64) -> Result<Self> {
        if width > 63 || bits >> width != 0 {
            return Err(Error::SeedWidth {
                expected: width,
                got: u64::BITS - bits.leading_zeros(),
            });
        }
        Ok(LabelSeed { width, bits })
    }

    /// Every seed of the width needed for `agents`, in ascending order.
    pub fn all(agents: usize) -> impl Iterator<Item = LabelSeed> {
        let width = Self::width_for(agents);
        (0..1u64 << width).map(move |bits| LabelSeed { width, bits })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }
}

pub fn labels_from_seed(agents: usize, seed: &LabelSeed) -> Result<LabelVector> {
    let expected = LabelSeed::width_for(agents);
    if seed.width != expected {
        return Err(Error::SeedWidth {
            expected,
            got: seed.width,
        });
    }
    Ok(LabelVector::new(
        (0..agents as u64)
            .map(|a| (a & seed.bits).count_ones() % 2 == 1)
            .collect(),
    ))
}
