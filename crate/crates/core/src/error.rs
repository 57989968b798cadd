use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live over different alphabets")]
    AlphabetMismatch,

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),

    #[error("relation is not a sum of brackets [a,b] = ab - ba")]
    NotALieRelation,

    #[error("r = 0: no loop-homology presentation; M is a sphere S^{dim} after inverting the torsion primes")]
    SphereFallback { dim: u32 },

    #[error("invalid manifold data: {0}")]
    InvalidManifold(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("power series: {0}")]
    Series(String),

    #[error("non-integral or negative summand count l[{degree}] = {value}")]
    NonIntegralCount { degree: usize, value: String },

    #[error("relation vectors are linearly dependent (rank {rank} < {count})")]
    DependentRelations { rank: usize, count: usize },

    #[error("vector length {found} does not match ambient dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient dimension {0} exceeds the dense linear-algebra limit")]
    TooLarge(usize),

    #[error("rank deficiency in degree {degree}: rank {rank} < {count} standard words")]
    RankDeficient { degree: u32, rank: usize, count: usize },

    #[error("integer overflow counting degree {0}")]
    Overflow(u32),

    #[error("space expression: {0}")]
    Space(String),

    #[error("sphere table line {line}: {message}")]
    TableParse { line: usize, message: String },

    #[error("insufficient sphere table: missing pi_k(S^m) for (k, m) in {}", format_pairs(.missing))]
    TableGap { missing: Vec<(u32, u32)> },
}

fn format_pairs(pairs: &[(u32, u32)]) -> String {
    let items: Vec<String> = pairs.iter().map(|(k, m)| format!("({k}, {m})")).collect();
    format!("[{}]", items.join(", "))
}
