use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("group order {0} is too small (factors need at least 2 elements)")]
    OrderTooSmall(usize),
    #[error("table is not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("operation is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no identity element")]
    NoIdentity,
    #[error("generators span only {generated} of {order} elements")]
    GeneratorsDoNotGenerate { generated: usize, order: usize },
    #[error("element id {id} does not belong to a group of order {order}")]
    ForeignElement { id: usize, order: usize },
    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),
    #[error("subgroup part {0} is trivial")]
    TrivialSubgroup(usize),
    #[error("factor index {index} out of range (free product has {factors} factors)")]
    BadFactorIndex { index: usize, factors: usize },
    #[error("elements belong to different free products")]
    MixedAmbient,
    #[error("generator label `{0}` is used twice")]
    DuplicateLabel(String),
    #[error("invalid generator label `{0}`")]
    InvalidLabel(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("variable x{0} has no value")]
    UnboundVariable(u32),
    #[error("word is empty")]
    EmptyWord,
    #[error("candidate list for x{0} is empty")]
    EmptyCandidates(u32),
    #[error("decomposition has no parts and no free part")]
    EmptyDecomposition,
    #[error("element is not hyperbolic")]
    NotHyperbolic,
}

impl Error {
    pub(crate) fn syntax(offset: usize, message: impl Into<String>) -> Self {
        Error::Syntax { offset, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
