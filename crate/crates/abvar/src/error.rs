use abvar_core::Error;
use serde_json::{json, Value};

/// Input errors map to exit code 2. The JSON object goes to stderr.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub location: Option<String>,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

impl CliError {
    pub fn input(code: &str, message: impl Into<String>, location: &str) -> Self {
        CliError {
            code: code.into(),
            message: message.into(),
            location: if location.is_empty() { None } else { Some(location.into()) },
        }
    }

    pub fn from_core(e: Error, location: &str) -> Self {
        Self::input(core_code(&e), e.to_string(), location)
    }

    pub fn to_json(&self) -> Value {
        json!({ "code": self.code, "message": self.message, "location": self.location })
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::from_core(e, "")
    }
}

pub fn core_code(e: &Error) -> &'static str {
    match e {
        Error::InvalidGenus => "InvalidGenus",
        Error::OddDimension(_) => "OddDimension",
        Error::DegenerateForm => "DegenerateForm",
        Error::InvalidLattice(_) => "InvalidLattice",
        Error::InvalidType(_) => "InvalidType",
        Error::DimensionMismatch { .. } => "DimensionMismatch",
        Error::NotInKernel => "NotInKernel",
        Error::NotTorsion(_) => "NotTorsion",
        Error::ContextMismatch => "ContextMismatch",
        Error::OwnerMismatch => "OwnerMismatch",
        Error::NotIsotropic => "NotIsotropic",
        Error::NotDualizableType(_) => "NotDualizableType",
        Error::NotLatticeMap => "NotLatticeMap",
        Error::NotFiniteIndex => "NotFiniteIndex",
        Error::NotComposable => "NotComposable",
        Error::GenusMismatch(..) => "GenusMismatch",
        Error::DegeneratePairing => "DegeneratePairing",
        Error::NoneExist(_) => "NoneExist",
        Error::InvalidMonodromy(_) => "InvalidMonodromy",
        Error::NegativeGenus => "NegativeGenus",
        Error::UnbranchedCover => "UnbranchedCover",
        Error::OddBranchCount(_) => "OddBranchCount",
        Error::NotGeneric(_) => "NotGeneric",
        Error::Parse(_) => "Parse",
    }
}
