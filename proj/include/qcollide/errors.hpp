// errors.hpp — Error taxonomy shared across the library and the CLI exit codes.

#pragma once

#include <stdexcept>
#include <string>

namespace qcollide {

// Register or tensor dimension exceeds a configured cap.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Relative entropy is undefined: second argument lacks support where the
// first carries weight.
struct SupportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical contract was violated (non-Hermitian input where Hermitian is
// required, imaginary residue above threshold, ...).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qcollide
