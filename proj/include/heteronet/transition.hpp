#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heteronet/matrix.hpp"
#include "heteronet/network.hpp"
#include "heteronet/params.hpp"

namespace heteronet {

/// Basic transition matrix m_ijk of the map between the incoming
/// cross-sections at ξ_j and ξ_k, built from the linearization at ξ_j.
/// (i→j, j→k) must be consecutive edges of some cycle of the network.
TransitionMatrix basic_matrix(NetworkKind kind, int i, int j, int k, const ParamSet& p);

/// Full transition matrix M_base^(cycle): ordered product of the basic
/// matrices once around the cycle, starting at base's incoming section.
TransitionMatrix full_matrix(NetworkKind kind, const std::string& cycle, int base,
                             const ParamSet& p);

/// Scalar quantities read off the full transition matrices. Fields are
/// populated per network; matrix-derived values are ground truth and the
/// closed-form displays are evaluated as cross-checks where they are
/// internally consistent (see crosscheck_notes).
struct DerivedScalars {
    std::optional<double> delta3, rho3, nu3;          // C3 quantities
    std::optional<double> delta4, rho4, nu4;          // C4 quantities
    std::optional<double> mu3;                        // tournament C3 at ξ1
    std::optional<double> alpha1, alpha2, alpha3, alpha4;  // entries of M_2^(34)
    std::optional<double> tau34, delta34, omega34;
    std::optional<double> lambda34_plus, lambda34_minus;   // only when omega34 >= 0
    std::optional<double> zeta34, beta34;

    std::vector<std::string> crosscheck_notes;  // product-vs-closed-form discrepancies
};

DerivedScalars derived_scalars(NetworkKind kind, const ParamSet& p);

/// Generalized split-equilibrium matrices for a network of n equilibria
/// whose splitting equilibrium ξ2 has eigenvalues -c_21, e_23, e_24,
/// -t_25, ..., -t_2n. Returns the pair (m_123, m_124) in the basis
/// (X3, X4, X5, ..., Xn), which has n-2 coordinates. Requires n >= 4.
std::pair<TransitionMatrix, TransitionMatrix> general_split_matrices(int n, const ParamSet& p);

/// Keys required by general_split_matrices for a given n.
std::vector<std::string> general_split_keys(int n);

}  // namespace heteronet
