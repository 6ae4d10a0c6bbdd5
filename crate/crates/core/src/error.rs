use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("vertex `{0}` has degree two (set allow_degree_two to accept it)")]
    DegreeTwo(String),
    #[error("edge `{0}` is a loop and cannot be contracted")]
    LoopContraction(String),
    #[error("vertex `{vertex}` has degree {degree}; expansion needs degree at least 4")]
    DegreeTooSmall { vertex: String, degree: usize },
    #[error("invalid rotation: {0}")]
    Rotation(String),
    #[error("edge sets have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("invalid cycle basis: {0}")]
    Basis(String),
    #[error("edge `{0}` is not switched")]
    NotSwitched(String),
    #[error("patch is not a strip")]
    NotAStrip,
    #[error("edge `{0}` is a bridge")]
    Bridge(String),
    #[error("inconsistent surface: euler {euler}, boundary {boundary}, orientable {orientable}")]
    InconsistentSurface {
        euler: i64,
        boundary: usize,
        orientable: bool,
    },
    #[error("instance too large: m_bc = {m_bc} exceeds cap {cap}")]
    InstanceTooLarge { m_bc: usize, cap: usize },
    #[error("path tuple uses a vertex-type intersection edge at `{0}`; resolve the graph to a cubic one first")]
    VertexTypeEdge(String),
    #[error("invalid path tuple: {0}")]
    Tuple(String),
    #[error("invalid catalog spec: {0}")]
    CatalogSpec(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
