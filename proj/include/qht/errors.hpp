// Error types shared across the library. Contract violations use
// invalid_argument; the remaining types distinguish failure modes that
// callers (and the CLI exit-code mapping) need to tell apart.
#pragma once

#include <stdexcept>
#include <string>

namespace qht {

struct invalid_argument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Requested (T1, T2) pair would need a negative dephasing rate.
struct unphysical_noise : std::domain_error {
    using std::domain_error::domain_error;
};

// Zero total field: no well-defined quantization axis.
struct degenerate_axis : std::domain_error {
    using std::domain_error::domain_error;
};

// H1 - H0 has (numerically) degenerate spectrum, so the optimal probe
// and the enhancement conditions are undefined.
struct degenerate_hypotheses : std::domain_error {
    using std::domain_error::domain_error;
};

// Propagation produced a state outside tolerance (positivity breach,
// non-convergence, ...).
struct numerical_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qht
