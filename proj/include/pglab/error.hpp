#pragma once

#include <stdexcept>
#include <string>

namespace pglab {

// Malformed input: files, labels, flags, arguments outside their contract.
// The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation left its numeric domain (divergence, overflow, degenerate
// denominator). The CLI maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pglab
