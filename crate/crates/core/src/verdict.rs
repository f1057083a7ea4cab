use serde::Serialize;

/// Outcome of a membership question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    CertifiedIn { certificate: String },
    CertifiedOut { witness: String },
    Undecided { horizon: u64, trace: Vec<String> },
}

impl Verdict {
    pub fn inside(certificate: impl Into<String>) -> Self {
        Verdict::CertifiedIn { certificate: certificate.into() }
    }

    pub fn outside(witness: impl Into<String>) -> Self {
        Verdict::CertifiedOut { witness: witness.into() }
    }

    pub fn undecided(horizon: u64, why: impl Into<String>) -> Self {
        Verdict::Undecided { horizon, trace: vec![why.into()] }
    }

    pub fn is_in(&self) -> bool {
        matches!(self, Verdict::CertifiedIn { .. })
    }

    pub fn is_out(&self) -> bool {
        matches!(self, Verdict::CertifiedOut { .. })
    }

    pub fn is_certified(&self) -> bool {
        !matches!(self, Verdict::Undecided { .. })
    }

    /// CLI exit code: 0 in, 1 out, 2 undecided.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::CertifiedIn { .. } => 0,
            Verdict::CertifiedOut { .. } => 1,
            Verdict::Undecided { .. } => 2,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            Verdict::CertifiedIn { .. } => "in",
            Verdict::CertifiedOut { .. } => "out",
            Verdict::Undecided { .. } => "undecided",
        }
    }
}
