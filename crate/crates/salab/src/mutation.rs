//! Fault injection for validating the fuzz suite: each variant flips the
//! sign of one term in one formula. Production entry points always use
//! [`Mutation::None`].

use std::fmt;
use std::str::FromStr;

/// Terms of the Dorfman bracket, in display order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DorfmanTerm {
    VectorBracket,
    Curvature,
    CovV,
    CovW,
    AdBracket,
    ContractDelEta,
    DelEtaV,
    ContractDelXi,
    H,
    PairDelR,
    PairFV,
    PairFW,
}

impl DorfmanTerm {
    pub const ALL: [DorfmanTerm; 12] = [
        DorfmanTerm::VectorBracket,
        DorfmanTerm::Curvature,
        DorfmanTerm::CovV,
        DorfmanTerm::CovW,
        DorfmanTerm::AdBracket,
        DorfmanTerm::ContractDelEta,
        DorfmanTerm::DelEtaV,
        DorfmanTerm::ContractDelXi,
        DorfmanTerm::H,
        DorfmanTerm::PairDelR,
        DorfmanTerm::PairFV,
        DorfmanTerm::PairFW,
    ];

    fn name(self) -> &'static str {
        match self {
            DorfmanTerm::VectorBracket => "vector-bracket",
            DorfmanTerm::Curvature => "curvature",
            DorfmanTerm::CovV => "cov-v",
            DorfmanTerm::CovW => "cov-w",
            DorfmanTerm::AdBracket => "ad-bracket",
            DorfmanTerm::ContractDelEta => "contract-del-eta",
            DorfmanTerm::DelEtaV => "del-eta-v",
            DorfmanTerm::ContractDelXi => "contract-del-xi",
            DorfmanTerm::H => "h",
            DorfmanTerm::PairDelR => "pair-del-r",
            DorfmanTerm::PairFV => "pair-f-v",
            DorfmanTerm::PairFW => "pair-f-w",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mutation {
    #[default]
    None,
    Dorfman(DorfmanTerm),
    /// Sign of the correction term c(g₂⁻¹a^{g₁} ∧ a^{g₂}) in the 𝒮 product.
    GroupProduct,
    /// Overall sign of the Ω^{≤•} component of the DGLA bracket.
    DglaBracket,
    /// Drops the (−1)^k factor of the DGLA bracket.
    DglaBracketParity,
}

impl Mutation {
    pub fn all() -> Vec<Mutation> {
        let mut v: Vec<Mutation> = DorfmanTerm::ALL.iter().map(|&t| Mutation::Dorfman(t)).collect();
        v.extend([Mutation::GroupProduct, Mutation::DglaBracket, Mutation::DglaBracketParity]);
        v
    }

    pub(crate) fn sign(self, t: DorfmanTerm) -> i64 {
        if self == Mutation::Dorfman(t) {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mutation::None => write!(f, "none"),
            Mutation::Dorfman(t) => write!(f, "dorfman:{}", t.name()),
            Mutation::GroupProduct => write!(f, "group-product"),
            Mutation::DglaBracket => write!(f, "dgla-bracket"),
            Mutation::DglaBracketParity => write!(f, "dgla-bracket-parity"),
        }
    }
}

impl FromStr for Mutation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Mutation::all()
            .into_iter()
            .chain([Mutation::None])
            .find(|m| m.to_string() == s)
            .ok_or_else(|| format!("unknown mutation '{s}'"))
    }
}
