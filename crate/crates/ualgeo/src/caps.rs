//! Resource caps for the search- and enumeration-heavy operations.
//!
//! Every cap has a deliberately desk-scale default and can be raised either
//! programmatically or through the `UALGEO_CAP_OVERRIDE` environment variable,
//! which multiplies all caps by an integer factor (intended for CI runs that
//! want more headroom without code changes).

/// Limits honoured by constructions and searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest carrier a product, power or quotient may have.
    pub carrier: usize,
    /// Largest number of elements a relative free algebra may reach.
    pub free_elements: usize,
    /// Node budget for homomorphism / isomorphism backtracking.
    pub hom_nodes: usize,
    /// Largest carrier for full congruence-lattice enumeration.
    pub congruence_carrier: usize,
    /// Largest off-diagonal pair count for exhaustive system enumeration
    /// (the number of systems is `2^pairs`).
    pub system_bits: usize,
    /// Largest number of terms `enumerate_terms` may produce.
    pub term_count: usize,
    /// Largest system size for exact (all-subsets) finite-subsystem maps.
    pub subset_bits: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            carrier: 4096,
            free_elements: 4096,
            hom_nodes: 10_000_000,
            congruence_carrier: 8,
            system_bits: 20,
            term_count: 1_000_000,
            subset_bits: 16,
        }
    }
}

impl Caps {
    /// Default caps scaled by `UALGEO_CAP_OVERRIDE` when the variable is set
    /// to a positive integer. Unparsable values are ignored.
    pub fn from_env() -> Self {
        let caps = Caps::default();
        match std::env::var("UALGEO_CAP_OVERRIDE") {
            Ok(raw) => match raw.trim().parse::<usize>() {
                Ok(factor) if factor >= 1 => caps.scaled(factor),
                _ => caps,
            },
            Err(_) => caps,
        }
    }

    /// Multiply every cap by `factor` (saturating).
    pub fn scaled(&self, factor: usize) -> Self {
        Caps {
            carrier: self.carrier.saturating_mul(factor),
            free_elements: self.free_elements.saturating_mul(factor),
            hom_nodes: self.hom_nodes.saturating_mul(factor),
            congruence_carrier: self.congruence_carrier.saturating_mul(factor),
            system_bits: self.system_bits.saturating_add(factor.ilog2() as usize),
            term_count: self.term_count.saturating_mul(factor),
            subset_bits: self.subset_bits.saturating_add(factor.ilog2() as usize),
        }
    }
}
