//! Turning a retrieved pattern asset into concrete source text by filling
//! its holes.

use crate::minilang::{instantiate_program, print_program, PatternError};
use crate::minilang::Bindings;
use crate::model::{AssetId, Prefix};
use crate::store::Snapshot;

use super::QueryError;

/// Fill every hole of pattern asset `id` with the supplied fragments and
/// render the result canonically. The output always parses hole-free.
pub fn retrieve_and_instantiate(
    snapshot: &Snapshot,
    id: AssetId,
    bindings: &Bindings,
) -> Result<String, QueryError> {
    let record = snapshot.get(id).ok_or(QueryError::UnknownId(id))?;
    if record.id.prefix != Prefix::Pat {
        return Err(QueryError::WrongKind {
            id,
            found: record.id.prefix.render(),
        });
    }
    let program = snapshot
        .program(id)
        .ok_or_else(|| QueryError::ContractViolation(format!("pattern {id} has no parsed payload")))?;
    match instantiate_program(&program, bindings) {
        Ok(filled) => Ok(print_program(&filled)),
        Err(PatternError::IncompleteBindings(holes)) => Err(QueryError::IncompleteBindings(holes)),
        Err(other) => Err(QueryError::ContractViolation(other.to_string())),
    }
}
