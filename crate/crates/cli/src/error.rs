use selftile::free_group::FreeGroupError;
use selftile::lattice_tiling::LatticeError;
use selftile::number_field::FieldError;
use selftile::spectral::SpectralError;
use selftile::tiling_render::RenderError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// The input is well formed but the mathematics says no.
    #[error("{0}")]
    Refusal(String),
    #[error("{0}")]
    Resource(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Refusal(_) => 1,
            CliError::Resource(_) | CliError::Usage(_) | CliError::Io { .. } => 2,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::RootsDidNotConverge { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Refusal(e.to_string()),
        }
    }
}

impl From<FreeGroupError> for CliError {
    fn from(e: FreeGroupError) -> Self {
        match e {
            FreeGroupError::Parse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Refusal(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        CliError::Resource(e.to_string())
    }
}

impl From<RenderError> for CliError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::FreeGroup(e) => e.into(),
            RenderError::Inconsistent { .. } | RenderError::BadPair(..) => CliError::Refusal(e.to_string()),
            _ => CliError::Resource(e.to_string()),
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Field(f) => f.into(),
            LatticeError::ResourceExceeded { .. } | LatticeError::T0SearchFailed { .. } => {
                CliError::Resource(e.to_string())
            }
            _ => CliError::Refusal(e.to_string()),
        }
    }
}
