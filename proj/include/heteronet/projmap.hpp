#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heteronet/matrix.hpp"
#include "heteronet/network.hpp"
#include "heteronet/params.hpp"

namespace heteronet {

/// Tie tolerance around switching points: values this close to a switch
/// point count as "on the switching manifold".
inline constexpr double kSwitchTieTol = 1e-13;

/// One Möbius branch ϑ ↦ (aϑ+b)/(cϑ+d) of the projected map, valid on the
/// open interval (lo, hi) ⊂ [-1, 0].
struct MobiusBranch {
    double a = 0, b = 0, c = 0, d = 1;
    double lo = -1.0, hi = 0.0;
    std::string cycle;   // "C3", "C4", or "C34"
    Matrix source;       // the 2x2 transition matrix the branch came from

    double eval(double theta) const { return (a * theta + b) / (c * theta + d); }
    double deriv(double theta) const;
    double inverse(double value) const;           // Möbius inverse
    bool contains(double theta) const { return theta > lo && theta < hi; }
};

/// Projection Π of a negative-orthant vector onto S = (-1, 0).
/// Throws std::domain_error unless both components are strictly negative.
double project(double x3, double x4);

/// Switching points in ascending order: {ϑ_s} for Kirk–Silber and the
/// Δ-clique, {ϑ_s^-, ϑ_s^+} for the tournament.
std::vector<double> switching_thetas(NetworkKind kind, const ParamSet& p);

/// Möbius coefficients of Π(M·(ϑ, -1-ϑ)). Domain left at the full (-1,0).
MobiusBranch branch_from_matrix(const TransitionMatrix& m);

/// The piecewise-Möbius projected map on S.
struct ProjectedMap {
    NetworkKind kind;
    ParamSet params;
    std::vector<MobiusBranch> branches;    // ordered left to right over S
    std::vector<double> switch_points;     // ascending, strictly inside (-1,0)

    /// Branch owning ϑ, or nullptr when ϑ is within tie tolerance of a
    /// switch point. Throws std::domain_error for ϑ outside (-1, 0).
    const MobiusBranch* branch_at(double theta) const;
    const MobiusBranch& branch(const std::string& cycle) const;
};

ProjectedMap build_projected_map(NetworkKind kind, const ParamSet& p);

enum class EvalStatus { Value, OnSwitchingManifold };

struct EvalResult {
    EvalStatus status = EvalStatus::Value;
    double value = 0.0;
    std::string branch;  // cycle label of the branch applied
};

EvalResult eval(const ProjectedMap& f, double theta);

enum class HaltReason { MaxSteps, Converged, EscapedToEndpoint, OnSwitchingManifold };

std::string halt_reason_name(HaltReason r);

struct IterateOptions {
    double convergence_tol = 1e-12;  // successive-difference threshold
    double endpoint_tol = 1e-9;      // distance from -1 or 0 counting as escape
};

/// Orbit of the projected map; branch_labels[i] is the branch applied at
/// step i (so it has one entry fewer than thetas once halted).
struct OrbitRecord {
    std::vector<double> thetas;              // ϑ0, ϑ1, ...
    std::vector<std::string> branch_labels;  // per step
    HaltReason reason = HaltReason::MaxSteps;
};

OrbitRecord iterate(const ProjectedMap& f, double theta0, int max_steps = 10'000,
                    const IterateOptions& opts = {});

enum class Admissibility { Admissible, VirtualOtherDomain, VirtualOutsideS };
enum class PointStability { Attracting, Repelling, Neutral };

std::string admissibility_name(Admissibility a);
std::string stability_name(PointStability s);

struct FixedPointReport {
    std::string name;     // e.g. "theta3_star", "theta34_minus"
    std::string branch;   // owning cycle label
    bool exists = true;   // false when the branch has no real fixed points
    double value = 0.0;
    double eigenvalue = 0.0;   // eigenvalue of the source matrix it represents
    double derivative = 0.0;   // branch derivative at the fixed point
    PointStability stability = PointStability::Neutral;
    Admissibility admissibility = Admissibility::VirtualOutsideS;
    std::string note;          // e.g. "fold not yet occurred" when !exists
};

/// Fixed points of every branch, solved through the eigenvalues of the
/// source matrices (star = dominant eigenvalue for C34; the non-unit
/// eigenvalue for C3/C4), with one Newton polish step.
std::vector<FixedPointReport> fixed_points(const ProjectedMap& f);

/// Fixed-point admissibility together with the governing sign conditions
/// (ν3, ν4, μ3, ζ34, β34, τ34, ω34 as applicable for the network).
struct AdmissibilityRegion {
    std::vector<FixedPointReport> reports;
    std::map<std::string, double> signs;
};

AdmissibilityRegion admissibility_region(NetworkKind kind, const ParamSet& p);

/// Pre-images E_0 = switch point, E_{k+1} = branch^{-1}(E_k), while they
/// stay inside the branch's domain.
struct PreimageList {
    std::vector<double> values;
    std::string truncated_reason;  // empty when n_max reached
};

PreimageList preimages_of_switch(const ProjectedMap& f, const std::string& cycle, int n_max);

/// One-sided limits at a switch point by formal branch evaluation.
struct SwitchContinuity {
    double switch_point = 0.0;
    std::string left_branch, right_branch;
    double left_limit = 0.0, right_limit = 0.0;
    bool continuous = false;  // |L-R| <= 1e-12 * max(1, |L|)
};

std::vector<SwitchContinuity> continuity_report(const ProjectedMap& f);

/// Slope map h acting on subspace slopes a (X4 = a·X3), conjugate to the
/// projected map under a(ϑ) = -(1+ϑ)/ϑ. Returns h(a) and the absolute
/// conjugacy residual |h(a(ϑ)) - a(f(ϑ))|.
struct SlopeCheck {
    double h = 0.0;
    double residual = 0.0;
};

SlopeCheck slope_map_check(NetworkKind kind, const ParamSet& p, double a_slope);

/// α*(ϑ) of the excluded-cusp construction: every α > α*(ϑ) gives a point
/// α(ϑ, -1-ϑ) outside the excluded region, so valid as an initial
/// condition. Throws std::domain_error at the switching point.
double cusp_alpha_star(NetworkKind kind, const ParamSet& p, double theta, double eps);

}  // namespace heteronet
