use thiserror::Error;

use crate::group::Element;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("empty table")]
    EmptyTable,
    #[error("row {row} has length {len}, expected {order}")]
    NotSquare { row: usize, len: usize, order: usize },
    #[error("entry ({row},{col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("element 0 is not the identity (fails at {element})")]
    IdentityNotZero { element: usize },
    #[error("{line} is not a permutation")]
    NotLatin { line: String },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: Element, b: Element, c: Element },
    #[error("generator {generator} has a different degree")]
    MismatchedDegree { generator: usize },
    #[error("generator {generator} is not a permutation")]
    InvalidPermutation { generator: usize },
    #[error("group order exceeds {limit}")]
    TooLarge { limit: usize },
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("identity does not fix point {point}")]
    ActionIdentity { point: usize },
    #[error("not a right action: (m·g)·h != m·(gh) at m={point}, g={g}, h={h}")]
    NotAnAction { point: usize, g: Element, h: Element },
    #[error("declared size {declared} but {rows} rows given")]
    OrderMismatch { declared: usize, rows: usize },
    #[error("unknown group {0:?}")]
    UnknownGroup(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum CocycleError {
    #[error("table is {rows}x{cols}, group has order {order}")]
    DimensionMismatch { rows: usize, cols: usize, order: usize },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cocycle identity fails at ({g},{h},{k})")]
    NotCocycle { g: Element, h: Element, k: Element },
    #[error("restriction to the centralizer of {g} is not a character: fails at ({h1},{h2})")]
    NotCharacter { g: Element, h1: Element, h2: Element },
    #[error("beta(e) must be trivial")]
    BetaNotNormalized,
    #[error("cocycle is over group {found:?}, expected {expected:?}")]
    WrongGroup { expected: String, found: String },
    #[error("unknown cocycle {name:?} on {group}")]
    Unknown { group: String, name: String },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Error)]
pub enum SectorError {
    #[error("point {point} is not fixed by {g}")]
    NotFixed { g: Element, point: usize },
    #[error("algebra is not associative at basis triple ({0},{1},{2})")]
    NotAssociative(usize, usize, usize),
    #[error("trace pairing is degenerate")]
    Degenerate,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChordError {
    #[error("coordinate {0} is outside [0,1)")]
    OutOfRange(String),
    #[error("chord {0} has equal endpoints")]
    DegenerateChord(usize),
    #[error("chords {0} and {1} cross")]
    Crossing(usize, usize),
    #[error("chord {0} closes a cycle in the chord graph")]
    Cycle(usize),
    #[error("region {0} has no boundary arc of positive length")]
    ZeroMeasure(usize),
    #[error("expected {expected} regions, found {found}")]
    RegionCount { expected: usize, found: usize },
    #[error("expected {expected} marks, found {found}")]
    MarkCount { expected: usize, found: usize },
    #[error("mark z_{0} is not on the boundary of its region")]
    MarkOffRegion(usize),
    #[error("interval labels are not a consistent labeling of the regions: {0}")]
    BadLabels(String),
    #[error("arity mismatch: {expected} parts expected, {found} given")]
    Arity { expected: usize, found: usize },
    #[error("invalid cactus: {0}")]
    BadCactus(String),
    #[error("invalid diagram JSON: {0}")]
    Json(String),
}

#[derive(Debug, Error)]
pub enum GChordError {
    #[error(transparent)]
    Chord(#[from] ChordError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("expected {expected} {what}, found {found}")]
    Count { what: &'static str, expected: usize, found: usize },
    #[error("element {0} is not in the group")]
    BadElement(usize),
    #[error("holonomy mismatch in slot {slot}: region holonomy {expected} but part has outer holonomy {found}")]
    HolonomyMismatch { slot: usize, expected: String, found: String },
    #[error("parts are over a different group")]
    GroupMismatch,
    #[error("search space of {size} exceeds the cap {cap}")]
    SearchCap { size: u128, cap: u128 },
    #[error("composite fails the holonomy contract: {0}")]
    Contract(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BvError {
    #[error("invalid presentation: {0}")]
    Presentation(String),
    #[error("n must be odd, got {0}")]
    EvenDimension(i64),
    #[error("p must be positive")]
    ZeroOrder,
    #[error("degree {degree} is outside the window [{lo},{hi}]")]
    WindowOverflow { degree: i64, lo: i64, hi: i64 },
    #[error("window basis in [{lo},{hi}] is infinite")]
    InfiniteWindow { lo: i64, hi: i64 },
    #[error("operator matrix is {rows}x{cols}, window basis has {dim} elements")]
    OperatorShape { rows: usize, cols: usize, dim: usize },
    #[error("unknown basis element {0:?}")]
    UnknownBasis(String),
    #[error("invalid JSON: {0}")]
    Json(String),
}
