#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "heteronet/params.hpp"

namespace heteronet {

enum class NetworkKind { KirkSilber, DeltaClique, Tournament };

std::string kind_name(NetworkKind kind);
std::optional<NetworkKind> parse_kind(const std::string& name);

/// A directed heteroclinic connection ξ_from → ξ_to.
struct Edge {
    int from = 0;
    int to = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// One cycle of the network, stored as the ordered equilibrium sequence;
/// order = (1,2,3) means ξ1 → ξ2 → ξ3 → ξ1.
struct Cycle {
    std::string name;
    std::vector<int> order;

    bool contains(int equilibrium) const;
    int predecessor(int equilibrium) const;
    int successor(int equilibrium) const;
};

struct Topology {
    NetworkKind kind;
    std::array<int, 4> equilibria{1, 2, 3, 4};
    std::vector<Edge> edges;
    std::vector<Cycle> cycles;
    std::vector<int> splitting_equilibria;

    bool has_edge(int from, int to) const;
    const Cycle& cycle(const std::string& name) const;  // throws on unknown name
    const Cycle* find_cycle(const std::string& name) const;
};

Topology build_topology(NetworkKind kind);

/// The set of parameter keys appearing in the network's vector field.
std::vector<std::string> required_param_keys(NetworkKind kind);

ValidationReport validate_params(NetworkKind kind, const ParamSet& p);

/// Signed eigenvalue of the linearization at ξ_at in coordinate direction
/// `dir` (sign baked into the vector field; magnitude looked up in p).
double eigenvalue_at(NetworkKind kind, int at, int dir, const ParamSet& p);

/// Parameter symbol carrying that eigenvalue's magnitude, e.g. "c_21".
std::string eigenvalue_symbol(NetworkKind kind, int at, int dir);

/// Sign (+1/-1) with which the symbol enters the vector field.
int eigenvalue_sign(NetworkKind kind, int at, int dir);

enum class EigenClass { Radial, Contracting, Expanding, Transverse };

std::string eigen_class_name(EigenClass c);

/// One non-radial eigenvalue of Df(ξ_at), classified relative to a cycle.
struct ClassifiedEigenvalue {
    std::string key;           // parameter symbol
    int direction = 0;         // coordinate axis of the eigenvector
    double value = 0.0;        // signed eigenvalue at the given ParamSet
    EigenClass eigen_class = EigenClass::Transverse;
    bool globally_transverse = false;  // transverse w.r.t. every cycle through ξ_at
};

/// Classify the eigenvalues at `equilibrium` relative to `cycle` by the
/// predecessor/successor rule. Throws std::invalid_argument if the
/// equilibrium is not part of the cycle.
std::vector<ClassifiedEigenvalue> eigen_classes(NetworkKind kind,
                                                const std::string& cycle,
                                                int equilibrium,
                                                const ParamSet& p);

/// A parameter file: `key = value` lines with '#' comments, plus an
/// optional `network = ...` selector (required unless the caller supplies
/// the kind separately, e.g. through the CLI --network flag).
struct ParamFile {
    std::optional<NetworkKind> kind;
    ParamSet params;
};

ParamFile parse_param_text(const std::string& text);
ParamFile load_param_file(const std::string& path);

}  // namespace heteronet
