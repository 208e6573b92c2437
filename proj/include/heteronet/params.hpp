#pragma once

#include <map>
#include <string>
#include <vector>

namespace heteronet {

/// Named positive reals keyed by the eigenvalue symbols of the chosen
/// network's vector field (e.g. "c_21", "e_23", "t_34").
using ParamSet = std::map<std::string, double>;

/// Result of checking a ParamSet against a network's required key set.
struct ValidationReport {
    std::vector<std::string> missing;
    std::vector<std::string> extra;
    std::vector<std::string> nonpositive;

    bool ok() const { return missing.empty() && extra.empty() && nonpositive.empty(); }
    std::string to_string() const;
};

/// Fetch a required key, throwing std::invalid_argument when absent.
double param(const ParamSet& p, const std::string& key);

}  // namespace heteronet
