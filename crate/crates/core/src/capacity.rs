use crate::error::{Error, Result};

/// Hard limits for term counts, dense matrix sizes and candidate-set sizes.
///
/// The algorithms here scale as n^{O(q)}; these caps turn runaway growth
/// into an explicit error instead of an allocation failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capacity {
    pub max_terms: usize,
    pub max_matrix_entries: usize,
    pub max_candidates: usize,
}

impl Default for Capacity {
    fn default() -> Self {
        Capacity {
            max_terms: 10_000_000,
            max_matrix_entries: 100_000_000,
            max_candidates: 1_000_000,
        }
    }
}

impl Capacity {
    /// Default capacity, with the matrix-entry cap overridden by the
    /// `SPHEREX_CAP` environment variable when set.
    pub fn from_env() -> Self {
        let mut cap = Capacity::default();
        if let Ok(v) = std::env::var("SPHEREX_CAP") {
            if let Ok(n) = v.trim().parse::<usize>() {
                cap.max_matrix_entries = n;
            }
        }
        cap
    }

    /// Capacity with `max_matrix_entries` set to `n` (terms and candidates
    /// keep their defaults unless `n` is smaller).
    pub fn with_matrix_cap(n: usize) -> Self {
        Capacity {
            max_matrix_entries: n,
            ..Capacity::default()
        }
    }

    pub fn check_terms(&self, needed: u128) -> Result<()> {
        if needed > self.max_terms as u128 {
            return Err(Error::Capacity {
                what: "term count".into(),
                needed,
                cap: self.max_terms as u128,
            });
        }
        Ok(())
    }

    pub fn check_matrix(&self, needed: u128) -> Result<()> {
        if needed > self.max_matrix_entries as u128 {
            return Err(Error::Capacity {
                what: "matrix entries".into(),
                needed,
                cap: self.max_matrix_entries as u128,
            });
        }
        Ok(())
    }

    pub fn check_candidates(&self, needed: u128) -> Result<()> {
        if needed > self.max_candidates as u128 {
            return Err(Error::Capacity {
                what: "candidate count".into(),
                needed,
                cap: self.max_candidates as u128,
            });
        }
        Ok(())
    }
}
