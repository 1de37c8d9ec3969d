#pragma once

// Randomized exact-identity checks between independent evaluation routes.

#include <cstdint>
#include <string>
#include <vector>

namespace rss {

struct VerifyOptions {
    std::uint64_t seed = 1;
    std::size_t instances = 200;
    std::size_t max_k = 5;
    std::size_t max_n = 5;
    // Test fixture: perturbs the fast PA route so the suite must fail.
    bool inject_fault = false;
};

struct IdentityCheck {
    std::string name;
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::string first_failure;
};

struct VerifyReport {
    std::vector<IdentityCheck> checks;
    bool ok() const;
    std::string to_text() const;
};

VerifyReport run_identity_suite(const VerifyOptions& opt);

}  // namespace rss
