use crate::error::{Error, Result};

/// Largest supported dimension; subsets are stored as `u32` bitmasks.
pub const MAX_DIM: usize = 31;

/// Index sets A ⊆ {1, …, d} with 2 ≤ |A| ≤ pmax, encoded as bitmasks
/// (bit `j − 1` set when j ∈ A), in ascending mask order.
///
/// In the serial case only sets containing 1 (lag 0) are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    d: usize,
    serial: bool,
    pmax: usize,
    masks: Vec<u32>,
}

impl SubsetFamily {
    pub fn new(d: usize, pmax: usize, serial: bool) -> Result<Self> {
        if !(2..=MAX_DIM).contains(&d) {
            return Err(Error::Argument(format!(
                "dimension must be in 2..={MAX_DIM}, got {d}"
            )));
        }
        if !(2..=d).contains(&pmax) {
            return Err(Error::Argument(format!(
                "pmax must be in 2..={d}, got {pmax}"
            )));
        }
        let masks = (1u32..(1u32 << d))
            .filter(|m| {
                let card = m.count_ones() as usize;
                card >= 2 && card <= pmax && (!serial || m & 1 == 1)
            })
            .collect();
        Ok(SubsetFamily {
            d,
            serial,
            pmax,
            masks,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn pmax(&self) -> usize {
        self.pmax
    }

    pub fn is_serial(&self) -> bool {
        self.serial
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }
}

/// One-based members of a subset mask, ascending.
pub fn members(mask: u32) -> Vec<usize> {
    (0..32)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| j + 1)
        .collect()
}

/// `{1,2,5}`-style label.
pub fn label(mask: u32) -> String {
    let inner: Vec<String> = members(mask).iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}
