#pragma once

#include <string>
#include <vector>

namespace heteronet::cli {

/// Entry point shared by the binary and the tests. Returns the process
/// exit status; on failure a machine-readable JSON error record goes to
/// `err` and a nonzero status is returned.
int run(const std::vector<std::string>& args, std::string* out = nullptr,
        std::string* err = nullptr);

}  // namespace heteronet::cli
