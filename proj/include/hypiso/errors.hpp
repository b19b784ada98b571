#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hypiso {

/// Argument outside the domain of a geometric formula.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An offset collapsed a boundary arc past its centre.
struct DegenerateBody : std::runtime_error {
    DegenerateBody(const std::string& what, std::size_t arc)
        : std::runtime_error(what), arc_index(arc) {}
    std::size_t arc_index;
};

struct NonSimpleBoundary : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotClosed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Infeasible : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hypiso
