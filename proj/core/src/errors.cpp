#include "rfspec/errors.hpp"

namespace rfspec {

StepSizeError::StepSizeError(const std::string& what, double suggested)
    : InvalidInput(what), suggested_(suggested) {}

}  // namespace rfspec
