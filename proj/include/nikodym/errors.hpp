#pragma once

#include <stdexcept>

namespace nikodym {

// Raised when a desk-scale resource cap (field order, point count, matrix
// entries) would be exceeded. Callers are expected to refuse the job.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a search budget runs out before a result can be produced.
class BudgetExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace nikodym
