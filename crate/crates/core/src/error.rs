use thiserror::Error;

/// Errors shared by every module of the workbench.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// A requested resolution exceeds what the sampler is willing to build.
    #[error("resolution refused: {0}")]
    Resolution(String),

    /// An evaluator produced a non-finite value at the given node.
    #[error("non-finite integrand value at node {node}")]
    NonFinite { node: f64 },

    /// Iterative eigenvalue estimation did not converge.
    #[error("power iteration did not converge, final residual {residual}")]
    Convergence { residual: f64 },

    /// The focusing ball contains no grid node.
    #[error("degenerate support: focusing radius {radius} is below the smallest grid node")]
    DegenerateSupport { radius: f64 },

    /// Leading-term evaluation at a point where the phase curvature vanishes.
    #[error("degenerate stationary point: phi''(z) = {value}")]
    DegenerateStationary { value: f64 },

    /// Every ascent restart collapsed to the zero vector.
    #[error("norm estimation failed: all restarts degenerate")]
    Estimation,

    /// Bad sweep or counterexample configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
