#pragma once

#include <string>

#include "soskit/conic.hpp"

namespace sos {

// SDPA sparse text: line 1 = number of constraints, line 2 = number of
// blocks, line 3 = block sizes (negative for diagonal/NONNEG blocks),
// line 4 = objective vector (our b), then entry lines "k blk i j v" with
// i <= j, sorted by (k, blk, i, j), 17 significant digits, zeros skipped.
// Matrix k is the k-th row of A in symmetric-matrix form; matrix 0 is -C.
// Off-diagonal PSD entries are the svec coordinate divided by sqrt(2); the
// printed value is chosen so that multiplying it back by sqrt(2) reproduces
// the stored coordinate bit for bit.
std::string to_sdpa_sparse(const ConicProblem& prob);

// Inverse of to_sdpa_sparse (accepts leading comment lines starting with
// '*' or '"'). Throws std::runtime_error on malformed input.
ConicProblem parse_sdpa_sparse(const std::string& text);

}  // namespace sos
