#pragma once

// Shared helpers for the test suites: a cross-platform deterministic RNG
// (std distributions are implementation-defined), random parameter sets,
// and the closed-form expressions used as independent oracles.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "heteronet/network.hpp"
#include "heteronet/params.hpp"

namespace testsupport {

using heteronet::NetworkKind;
using heteronet::ParamSet;

inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * uniform01(gen);
}

inline double log_uniform(std::mt19937_64& gen, double lo, double hi) {
    return std::exp(uniform(gen, std::log(lo), std::log(hi)));
}

inline ParamSet random_params(NetworkKind kind, std::mt19937_64& gen, double lo = 0.25,
                              double hi = 4.0) {
    ParamSet p;
    for (const auto& key : heteronet::required_param_keys(kind)) p[key] = log_uniform(gen, lo, hi);
    return p;
}

inline ParamSet all_ones(NetworkKind kind) {
    ParamSet p;
    for (const auto& key : heteronet::required_param_keys(kind)) p[key] = 1.0;
    return p;
}

// --- closed forms transcribed from the published scalar displays ---

struct KsScalars {
    double delta3, rho3, nu3, delta4, rho4, nu4;
};

inline KsScalars ks_closed_forms(const ParamSet& p) {
    auto v = [&p](const char* k) { return p.at(k); };
    const double c13 = v("c_13"), c14 = v("c_14"), c21 = v("c_21"), c32 = v("c_32"),
                 c42 = v("c_42"), e12 = v("e_12"), e23 = v("e_23"), e24 = v("e_24"),
                 e31 = v("e_31"), e41 = v("e_41"), t34 = v("t_34"), t43 = v("t_43");
    KsScalars s;
    s.delta3 = c13 * c21 * c32 / (e12 * e23 * e31);
    s.delta4 = c14 * c21 * c42 / (e12 * e24 * e41);
    s.rho3 = -e24 / e23 + c21 * t34 / (e23 * e31) + c14 * c21 * c32 / (e12 * e23 * e31);
    s.rho4 = -e23 / e24 + c21 * t43 / (e24 * e41) + c13 * c21 * c42 / (e12 * e24 * e41);
    s.nu3 = t34 / e31 + c14 * c32 / (e12 * e31) - c13 * c32 * e24 / (e12 * e23 * e31);
    s.nu4 = t43 / e41 + c13 * c42 / (e12 * e41) - c14 * c42 * e23 / (e12 * e24 * e41);
    return s;
}

// Projected-map closed forms (branch values at theta).
inline double ks_f3(const KsScalars& s, double theta) {
    return -s.delta3 * theta / ((s.delta3 + s.rho3 - 1.0) * theta - 1.0);
}

inline double ks_f4(const KsScalars& s, double theta) {
    return ((1.0 - s.rho4) * theta - s.rho4) /
           ((s.delta4 + s.rho4 - 1.0) * theta + s.delta4 + s.rho4);
}

struct C34Scalars {
    double a1, a2, a3, a4, rho4, delta4, nu4;
};

inline C34Scalars delta_clique_closed_forms(const ParamSet& p) {
    auto v = [&p](const char* k) { return p.at(k); };
    const double c14 = v("c_14"), c21 = v("c_21"), c32 = v("c_32"), c42 = v("c_42"),
                 c43 = v("c_43"), e12 = v("e_12"), e23 = v("e_23"), e24 = v("e_24"),
                 e34 = v("e_34"), e41 = v("e_41"), t13 = v("t_13"), t31 = v("t_31");
    C34Scalars s;
    s.a1 = c21 * c43 / (e23 * e41) + c21 * c42 * t13 / (e23 * e41 * e12) -
           c32 * e24 * t13 / (e34 * e23 * e12) - c43 * e24 * t31 / (e41 * e23 * e34) -
           c42 * e24 * t13 * t31 / (e41 * e23 * e12 * e34);
    s.a2 = c32 * t13 / (e34 * e12) + c43 * t31 / (e41 * e34) +
           c42 * t13 * t31 / (e41 * e12 * e34);
    s.a3 = c14 * c21 * c42 / (e12 * e23 * e41) - c14 * c32 * e24 / (e12 * e34 * e23) -
           c14 * c42 * e24 * t31 / (e12 * e41 * e23 * e34);
    s.a4 = c14 * c32 / (e12 * e34) + c14 * c42 * t31 / (e12 * e41 * e34);
    s.rho4 = -e23 / e24 + c21 * c43 / (e24 * e41) + c21 * c42 * t13 / (e24 * e41 * e12);
    s.delta4 = c14 * c21 * c42 / (e12 * e24 * e41);
    s.nu4 = c43 / e41 + c42 * t13 / (e41 * e12) - c14 * c42 * e23 / (e12 * e24 * e41);
    return s;
}

inline C34Scalars tournament_closed_forms(const ParamSet& p) {
    auto v = [&p](const char* k) { return p.at(k); };
    const double c13 = v("c_13"), c14 = v("c_14"), c21 = v("c_21"), c32 = v("c_32"),
                 c42 = v("c_42"), c43 = v("c_43"), e12 = v("e_12"), e23 = v("e_23"),
                 e24 = v("e_24"), e31 = v("e_31"), e34 = v("e_34"), e41 = v("e_41");
    C34Scalars s;
    s.a1 = c21 * c43 / (e23 * e41) + c13 * c21 * c42 / (e12 * e23 * e41) +
           c43 * e24 * e31 / (e41 * e23 * e34) + c13 * c42 * e24 * e31 / (e12 * e41 * e23 * e34) -
           c13 * c32 * e24 / (e12 * e34 * e23);
    s.a2 = c32 * c13 / (e12 * e34) - c43 * e31 / (e41 * e34) - c13 * c42 * e31 / (e12 * e41 * e34);
    s.a3 = c14 * c21 * c42 / (e12 * e23 * e41) + c14 * c42 * e24 * e31 / (e12 * e41 * e23 * e34) -
           c14 * c32 * e24 / (e12 * e34 * e23);
    s.a4 = c14 * c32 / (e12 * e34) - c14 * c42 * e31 / (e12 * e41 * e34);
    s.rho4 = -e23 / e24 + c21 * c43 / (e24 * e41) + c13 * c21 * c42 / (e12 * e24 * e41);
    s.delta4 = c14 * c21 * c42 / (e12 * e24 * e41);
    s.nu4 = c43 / e41 + c13 * c42 / (e12 * e41) - c14 * c42 * e23 / (e12 * e24 * e41);
    return s;
}

inline double c34_branch(const C34Scalars& s, double theta) {
    const double zeta = s.a1 - s.a2 + s.a3 - s.a4;
    return ((s.a2 - s.a1) * theta + s.a2) / (zeta * theta - s.a2 - s.a4);
}

// Nth pre-image of theta_s under the Kirk-Silber C3 branch.
inline double ks_preimage_closed_form(double theta_s, double delta3, double rho3, int n) {
    double pow_d = 1.0, geom = 0.0;
    for (int k = 0; k < n; ++k) {
        geom += pow_d;
        pow_d *= delta3;
    }
    return theta_s / (pow_d + theta_s * (pow_d - 1.0 + rho3 * geom));
}

// --- frozen regime parameter sets used across the ODE-facing tests ---

ParamSet regime_params(const std::string& name);

}  // namespace testsupport
