#pragma once

#include <iosfwd>

#include "lord/learner.hpp"

namespace lord {

/// Writes the model in the versioned, line-oriented, tab-delimited text
/// format documented in the README. Rules are emitted in canonical
/// (body, head) order so that two saves of the same model are byte-identical.
/// Returns the number of bytes written.
std::size_t save_model(const Model& model, std::ostream& sink);

/// Parses a model file, rebuilding the R-tree and recomputing every rule's
/// heuristic value from its stored counts. Malformed input raises DataError
/// naming the offending line.
Model load_model(std::istream& source);

}  // namespace lord
