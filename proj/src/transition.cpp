#include "heteronet/transition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace heteronet {

namespace {

std::string basic_tag(int i, int j, int k) {
    std::ostringstream os;
    os << "m_" << i << j << k;
    return os.str();
}

std::string full_tag(int base, const std::string& cycle) {
    std::ostringstream os;
    os << "M_" << base << "^(" << cycle.substr(1) << ")";
    return os.str();
}

// Directions carried by the incoming section at ξ_j reached from ξ_i:
// everything except i and j, in ascending label order.
std::array<int, 2> section_dirs(int i, int j) {
    std::array<int, 2> out{};
    int idx = 0;
    for (int d = 1; d <= 4; ++d)
        if (d != i && d != j) out[idx++] = d;
    return out;
}

}  // namespace

TransitionMatrix basic_matrix(NetworkKind kind, int i, int j, int k, const ParamSet& p) {
    Topology topo = build_topology(kind);
    if (!topo.has_edge(i, j) || !topo.has_edge(j, k))
        throw std::invalid_argument("(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                    std::to_string(k) + ") is not a consecutive edge pair of " +
                                    kind_name(kind));

    const auto in_dirs = section_dirs(i, j);    // coordinates on the incoming section
    const auto out_dirs = section_dirs(j, k);   // coordinates after the basic map
    const double e_jk = eigenvalue_at(kind, j, k, p);   // expanding rate, > 0
    const double c_ji = -eigenvalue_at(kind, j, i, p);  // contracting magnitude, > 0

    auto in_index = [&in_dirs](int d) {
        return d == in_dirs[0] ? 0 : 1;
    };

    Matrix m(2);
    for (int r = 0; r < 2; ++r) {
        const int d = out_dirs[r];
        if (d == i) {
            // Depth gained in the old contracting direction over the passage.
            m(r, in_index(k)) = c_ji / e_jk;
        } else {
            m(r, in_index(d)) = 1.0;
            m(r, in_index(k)) += -eigenvalue_at(kind, j, d, p) / e_jk;
        }
    }
    return {m, basic_tag(i, j, k)};
}

TransitionMatrix full_matrix(NetworkKind kind, const std::string& cycle, int base,
                             const ParamSet& p) {
    Topology topo = build_topology(kind);
    const Cycle& cyc = topo.cycle(cycle);
    if (!cyc.contains(base))
        throw std::invalid_argument("base equilibrium " + std::to_string(base) +
                                    " is not part of cycle " + cycle);
    const int m = static_cast<int>(cyc.order.size());
    const int b = static_cast<int>(std::find(cyc.order.begin(), cyc.order.end(), base) -
                                   cyc.order.begin());
    Matrix M = Matrix::identity(2);
    for (int s = 0; s < m; ++s) {
        const int j = cyc.order[(b + s) % m];
        const int i = cyc.order[(b + s + m - 1) % m];
        const int k = cyc.order[(b + s + 1) % m];
        M = basic_matrix(kind, i, j, k, p).mat * M;
    }
    return {M, full_tag(base, cycle)};
}

namespace {

void crosscheck(DerivedScalars& s, const std::string& name, double product_value,
                double closed_form, double rel_tol = 1e-9) {
    const double scale = std::max({1.0, std::abs(product_value), std::abs(closed_form)});
    if (std::abs(product_value - closed_form) > rel_tol * scale) {
        std::ostringstream os;
        os << name << ": product " << product_value << " vs closed form " << closed_form;
        s.crosscheck_notes.push_back(os.str());
    }
}

void fill_c34_family(DerivedScalars& s, const Matrix& M34, double e23, double e24) {
    s.alpha1 = M34(0, 0);
    s.alpha2 = M34(0, 1);
    s.alpha3 = M34(1, 0);
    s.alpha4 = M34(1, 1);
    s.tau34 = *s.alpha1 + *s.alpha4;
    s.delta34 = *s.alpha1 * *s.alpha4 - *s.alpha2 * *s.alpha3;
    s.omega34 = *s.tau34 * *s.tau34 - 4.0 * *s.delta34;
    if (*s.omega34 >= 0.0) {
        // Evaluate the far root first and the near root through the product
        // identity; the textbook form cancels badly when |tau| >> sqrt(omega).
        const double root = std::sqrt(*s.omega34);
        const double far = (*s.tau34 >= 0.0) ? (*s.tau34 + root) / 2.0 : (*s.tau34 - root) / 2.0;
        const double near_root = (far != 0.0) ? *s.delta34 / far : (*s.tau34 - far);
        s.lambda34_plus = std::max(far, near_root);
        s.lambda34_minus = std::min(far, near_root);
    }
    s.zeta34 = *s.alpha1 - *s.alpha2 + *s.alpha3 - *s.alpha4;
    s.beta34 = *s.alpha3 + 0.5 * (*s.alpha1 - *s.alpha4) +
               (e24 / e23) * (*s.alpha2 + 0.5 * (*s.alpha4 - *s.alpha1));
}

}  // namespace

DerivedScalars derived_scalars(NetworkKind kind, const ParamSet& p) {
    ValidationReport v = validate_params(kind, p);
    if (!v.ok()) throw std::invalid_argument("invalid ParamSet: " + v.to_string());

    DerivedScalars s;
    const double e12 = param(p, "e_12"), e23 = param(p, "e_23"), e24 = param(p, "e_24"),
                 e41 = param(p, "e_41"), c21 = param(p, "c_21"), c14 = param(p, "c_14"),
                 c32 = param(p, "c_32"), c42 = param(p, "c_42");

    const Matrix M4 = full_matrix(kind, "C4", 2, p).mat;
    const Matrix M44 = full_matrix(kind, "C4", 4, p).mat;
    s.delta4 = M4(1, 1);
    s.rho4 = M4(0, 1);
    s.nu4 = M44(1, 0);
    crosscheck(s, "delta4", *s.delta4, c14 * c21 * c42 / (e12 * e24 * e41));

    if (kind == NetworkKind::KirkSilber || kind == NetworkKind::Tournament) {
        const Matrix M3 = full_matrix(kind, "C3", 2, p).mat;
        const Matrix M33 = full_matrix(kind, "C3", 3, p).mat;
        const double e31 = param(p, "e_31"), c13 = param(p, "c_13");
        s.delta3 = M3(0, 0);
        s.rho3 = M3(1, 0);
        s.nu3 = M33(1, 0);
        crosscheck(s, "delta3", *s.delta3, c13 * c21 * c32 / (e12 * e23 * e31));
        if (kind == NetworkKind::KirkSilber) {
            const double t34 = param(p, "t_34"), t43 = param(p, "t_43");
            crosscheck(s, "rho3", *s.rho3,
                       -e24 / e23 + c21 * t34 / (e23 * e31) + c14 * c21 * c32 / (e12 * e23 * e31));
            crosscheck(s, "nu3", *s.nu3,
                       t34 / e31 + c14 * c32 / (e12 * e31) - c13 * c32 * e24 / (e12 * e23 * e31));
            crosscheck(s, "rho4", *s.rho4,
                       -e23 / e24 + c21 * t43 / (e24 * e41) + c13 * c21 * c42 / (e12 * e24 * e41));
            crosscheck(s, "nu4", *s.nu4,
                       t43 / e41 + c13 * c42 / (e12 * e41) - c14 * c42 * e23 / (e12 * e24 * e41));
        } else {
            const Matrix M13 = full_matrix(kind, "C3", 1, p).mat;
            const double e34 = param(p, "e_34"), c43 = param(p, "c_43");
            s.mu3 = M13(1, 0);
            crosscheck(s, "mu3", *s.mu3,
                       c14 / e12 - c13 * e24 / (e12 * e23) - c13 * c21 * e34 / (e12 * e23 * e31));
            crosscheck(s, "nu4", *s.nu4,
                       c43 / e41 + c13 * c42 / (e12 * e41) - c14 * c42 * e23 / (e12 * e24 * e41));
            crosscheck(s, "rho4", *s.rho4,
                       -e23 / e24 + c21 * c43 / (e24 * e41) + c13 * c21 * c42 / (e12 * e24 * e41));
        }
    }

    if (kind == NetworkKind::DeltaClique || kind == NetworkKind::Tournament) {
        const Matrix M34 = full_matrix(kind, "C34", 2, p).mat;
        fill_c34_family(s, M34, e23, e24);
        const double e34 = param(p, "e_34"), c43 = param(p, "c_43");
        crosscheck(s, "delta34", *s.delta34, c14 * c21 * c32 * c43 / (e12 * e23 * e34 * e41));
        if (kind == NetworkKind::DeltaClique) {
            const double t13 = param(p, "t_13"), t31 = param(p, "t_31");
            crosscheck(s, "alpha1", *s.alpha1,
                       c21 * c43 / (e23 * e41) + c21 * c42 * t13 / (e23 * e41 * e12) -
                           c32 * e24 * t13 / (e34 * e23 * e12) - c43 * e24 * t31 / (e41 * e23 * e34) -
                           c42 * e24 * t13 * t31 / (e41 * e23 * e12 * e34));
            crosscheck(s, "alpha2", *s.alpha2,
                       c32 * t13 / (e34 * e12) + c43 * t31 / (e41 * e34) +
                           c42 * t13 * t31 / (e41 * e12 * e34));
            crosscheck(s, "alpha3", *s.alpha3,
                       c14 * c21 * c42 / (e12 * e23 * e41) - c14 * c32 * e24 / (e12 * e34 * e23) -
                           c14 * c42 * e24 * t31 / (e12 * e41 * e23 * e34));
            crosscheck(s, "alpha4", *s.alpha4,
                       c14 * c32 / (e12 * e34) + c14 * c42 * t31 / (e12 * e41 * e34));
            crosscheck(s, "nu4", *s.nu4,
                       c43 / e41 + c42 * t13 / (e41 * e12) - c14 * c42 * e23 / (e12 * e24 * e41));
            crosscheck(s, "rho4", *s.rho4,
                       -e23 / e24 + c21 * c43 / (e24 * e41) + c21 * c42 * t13 / (e24 * e41 * e12));
        } else {
            const double e31 = param(p, "e_31"), c13 = param(p, "c_13");
            crosscheck(s, "alpha1", *s.alpha1,
                       c21 * c43 / (e23 * e41) + c13 * c21 * c42 / (e12 * e23 * e41) +
                           c43 * e24 * e31 / (e41 * e23 * e34) +
                           c13 * c42 * e24 * e31 / (e12 * e41 * e23 * e34) -
                           c13 * c32 * e24 / (e12 * e34 * e23));
            crosscheck(s, "alpha2", *s.alpha2,
                       c32 * c13 / (e12 * e34) - c43 * e31 / (e41 * e34) -
                           c13 * c42 * e31 / (e12 * e41 * e34));
            crosscheck(s, "alpha3", *s.alpha3,
                       c14 * c21 * c42 / (e12 * e23 * e41) +
                           c14 * c42 * e24 * e31 / (e12 * e41 * e23 * e34) -
                           c14 * c32 * e24 / (e12 * e34 * e23));
            crosscheck(s, "alpha4", *s.alpha4,
                       c14 * c32 / (e12 * e34) - c14 * c42 * e31 / (e12 * e41 * e34));
        }
    }
    return s;
}

std::vector<std::string> general_split_keys(int n) {
    std::vector<std::string> keys{"c_21", "e_23", "e_24"};
    for (int d = 5; d <= n; ++d) keys.push_back("t_2" + std::to_string(d));
    return keys;
}

std::pair<TransitionMatrix, TransitionMatrix> general_split_matrices(int n, const ParamSet& p) {
    if (n < 4) throw std::invalid_argument("general_split_matrices requires n >= 4");
    for (const auto& key : general_split_keys(n))
        if (!(param(p, key) > 0.0)) throw std::invalid_argument("nonpositive parameter: " + key);

    const int dim = n - 2;  // basis (X3, X4, X5, ..., Xn)
    const double c21 = param(p, "c_21"), e23 = param(p, "e_23"), e24 = param(p, "e_24");

    Matrix m123 = Matrix::identity(dim);
    m123(0, 0) = c21 / e23;
    m123(1, 0) = -e24 / e23;
    for (int r = 2; r < dim; ++r) m123(r, 0) = param(p, "t_2" + std::to_string(r + 3)) / e23;

    Matrix m124 = Matrix::identity(dim);
    m124(0, 0) = 1.0;
    m124(0, 1) = -e23 / e24;
    m124(1, 1) = c21 / e24;
    for (int r = 2; r < dim; ++r) m124(r, 1) = param(p, "t_2" + std::to_string(r + 3)) / e24;

    const std::string suffix = "[n=" + std::to_string(n) + "]";
    return {{m123, "m_123" + suffix}, {m124, "m_124" + suffix}};
}

}  // namespace heteronet
