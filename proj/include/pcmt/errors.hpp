#pragma once

#include <stdexcept>

namespace pcmt {

// Exit-code mapping used by the CLI: ParamError -> 2, InfeasibleError -> 3,
// StructuralError (broken internal invariant) -> 4.
struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CapacityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StructuralError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace pcmt
