#pragma once

#include <stdexcept>

namespace rss {

// Invalid input data (ties, ragged tables, non-finite values, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A computation refused because it would exceed a configured size limit
// (enumeration budget, exact-engine cell cap, integer range).
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rss
