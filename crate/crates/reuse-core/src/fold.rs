//! Term folding shared by every index and every query path.
//!
//! Folding is Unicode-aware lowercasing plus splitting on non-alphanumeric
//! characters. No stemming: stored terms stay verbatim at rest and both sides
//! fold at query time, so "Agility" matches "agility" but not "agile".

/// Split `text` into folded tokens. Empty tokens are dropped.
pub fn fold_tokens(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphanumeric() {
            for low in ch.to_lowercase() {
                current.push(low);
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Fold a whole phrase into a single comparable key: tokens joined by `-`.
///
/// Used for exact-equality comparisons (keywords, facets, metadata
/// selectors) and for edit-distance inputs. Returns an empty string when
/// the input folds to nothing.
pub fn fold_phrase(text: &str) -> String {
    fold_tokens(text).join("-")
}
