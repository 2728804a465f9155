use std::env;

/// Resource ceilings shared by the enumerating constructions.
///
/// Every field can be overridden through an environment variable of the
/// form `SCHUTZ_<FIELD>` (upper case), e.g. `SCHUTZ_MAX_MORPHISMS=5000`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Upper bound on `|M|^|Σ|` when enumerating letter assignments.
    pub max_morphisms: usize,
    /// Upper bound on the number of elements of a generated monoid.
    pub max_closure: usize,
    /// Largest base monoid whose unary product carrier is materialised eagerly.
    pub max_eager_base: usize,
    /// Largest atom count for which the member list of an algebra is materialised.
    pub max_member_atoms: usize,
    /// Upper bound on the number of languages in a quotient closure.
    pub max_quotients: usize,
    /// Upper bound on automaton states produced by products and subset constructions.
    pub max_states: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_morphisms: 1_000_000,
            max_closure: 200_000,
            max_eager_base: 6,
            max_member_atoms: 16,
            max_quotients: 20_000,
            max_states: 2_000_000,
        }
    }
}

impl Limits {
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        let read = |name: &str, slot: &mut usize| {
            if let Some(v) = env::var(name).ok().and_then(|s| s.trim().parse().ok()) {
                *slot = v;
            }
        };
        read("SCHUTZ_MAX_MORPHISMS", &mut limits.max_morphisms);
        read("SCHUTZ_MAX_CLOSURE", &mut limits.max_closure);
        read("SCHUTZ_MAX_EAGER_BASE", &mut limits.max_eager_base);
        read("SCHUTZ_MAX_MEMBER_ATOMS", &mut limits.max_member_atoms);
        read("SCHUTZ_MAX_QUOTIENTS", &mut limits.max_quotients);
        read("SCHUTZ_MAX_STATES", &mut limits.max_states);
        limits
    }
}
