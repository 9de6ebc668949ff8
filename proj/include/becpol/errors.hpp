#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace becpol {

// Enumeration or sampling workload exceeded its configured cap.
// The CLI maps this to exit code 3.
struct budget_error : std::runtime_error {
    std::uint64_t used;
    std::uint64_t cap;
    budget_error(const std::string& what, std::uint64_t used_, std::uint64_t cap_)
        : std::runtime_error(what), used(used_), cap(cap_) {}
};

// A numerical precondition failed at run time (too few points for a fit,
// a split that is no longer contiguous, ...). CLI exit code 4.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace becpol
