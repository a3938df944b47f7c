#pragma once

#include <stdexcept>

namespace sapt {

// Error taxonomy mirrors the CLI exit-code contract:
//   input_error      -> exit 2 (bad files, malformed flags, invalid configs)
//   infeasible_error -> exit 3 (request cannot be served, e.g. exhaustive with n > 9)
//   degenerate_error -> exit 4 (numeric degeneracy prevented all requested output)
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace sapt
