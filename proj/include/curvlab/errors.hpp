#pragma once

#include <stdexcept>
#include <string>

namespace curvlab {

// Error taxonomy shared by all modules.  Each maps onto a CLI exit path:
// parse/validation errors have dedicated exit codes, the rest surface as
// suite failures.
struct shape_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct decomposition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace curvlab
