#include "heteronet/projmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "heteronet/transition.hpp"

namespace heteronet {

double MobiusBranch::deriv(double theta) const {
    const double den = c * theta + d;
    return (a * d - b * c) / (den * den);
}

double MobiusBranch::inverse(double value) const {
    return (d * value - b) / (-c * value + a);
}

double project(double x3, double x4) {
    if (!(x3 < 0.0) || !(x4 < 0.0))
        throw std::domain_error("project: both components must be strictly negative");
    return -x3 / (x3 + x4);
}

std::vector<double> switching_thetas(NetworkKind kind, const ParamSet& p) {
    const double ratio = param(p, "e_24") / param(p, "e_23");
    const double theta_s = -1.0 / (1.0 + ratio);
    if (kind != NetworkKind::Tournament) return {theta_s};
    const double extra = param(p, "c_21") * param(p, "e_34") / (param(p, "e_23") * param(p, "e_31"));
    const double theta_plus = -1.0 / (1.0 + extra + ratio);
    return {theta_s, theta_plus};
}

MobiusBranch branch_from_matrix(const TransitionMatrix& tm) {
    const Matrix& m = tm.mat;
    if (m.size() != 2) throw std::invalid_argument("branch_from_matrix needs a 2x2 matrix");
    if (m.det() == 0.0)
        throw std::invalid_argument("branch_from_matrix: singular matrix " + tm.tag);
    MobiusBranch br;
    // Π(M·(ϑ, -1-ϑ)) with Π(X) = -X1/(X1+X2).
    br.a = m(0, 1) - m(0, 0);
    br.b = m(0, 1);
    br.c = m(0, 0) - m(0, 1) + m(1, 0) - m(1, 1);
    br.d = -m(0, 1) - m(1, 1);
    br.source = m;
    return br;
}

const MobiusBranch* ProjectedMap::branch_at(double theta) const {
    if (!(theta > -1.0) || !(theta < 0.0))
        throw std::domain_error("theta outside S = (-1, 0)");
    for (double s : switch_points)
        if (std::abs(theta - s) <= kSwitchTieTol) return nullptr;
    for (const auto& br : branches)
        if (theta > br.lo && theta < br.hi) return &br;
    // theta equals an internal boundary beyond tie tolerance cannot happen:
    // domains tile S minus the switch points.
    return nullptr;
}

const MobiusBranch& ProjectedMap::branch(const std::string& cycle) const {
    for (const auto& br : branches)
        if (br.cycle == cycle) return br;
    throw std::invalid_argument("projected map has no branch " + cycle);
}

ProjectedMap build_projected_map(NetworkKind kind, const ParamSet& p) {
    ValidationReport v = validate_params(kind, p);
    if (!v.ok()) throw std::invalid_argument("invalid ParamSet: " + v.to_string());

    ProjectedMap f;
    f.kind = kind;
    f.params = p;
    f.switch_points = switching_thetas(kind, p);
    std::sort(f.switch_points.begin(), f.switch_points.end());

    auto add = [&f, kind, &p](const std::string& cycle, double lo, double hi) {
        MobiusBranch br = branch_from_matrix(full_matrix(kind, cycle, 2, p));
        br.cycle = cycle;
        br.lo = lo;
        br.hi = hi;
        // The pole must stay outside the closed domain.
        if (br.c != 0.0) {
            const double pole = -br.d / br.c;
            if (pole >= lo && pole <= hi)
                throw std::runtime_error("projected-map branch " + cycle +
                                         " has a pole inside its domain");
        }
        f.branches.push_back(std::move(br));
    };

    if (kind == NetworkKind::KirkSilber) {
        const double s = f.switch_points[0];
        add("C4", -1.0, s);
        add("C3", s, 0.0);
    } else if (kind == NetworkKind::DeltaClique) {
        const double s = f.switch_points[0];
        add("C4", -1.0, s);
        add("C34", s, 0.0);
    } else {
        const double sm = f.switch_points[0], sp = f.switch_points[1];
        add("C4", -1.0, sm);
        add("C34", sm, sp);
        add("C3", sp, 0.0);
    }
    return f;
}

EvalResult eval(const ProjectedMap& f, double theta) {
    const MobiusBranch* br = f.branch_at(theta);
    if (br == nullptr) return {EvalStatus::OnSwitchingManifold, theta, ""};
    return {EvalStatus::Value, br->eval(theta), br->cycle};
}

std::string halt_reason_name(HaltReason r) {
    switch (r) {
        case HaltReason::MaxSteps: return "max_steps";
        case HaltReason::Converged: return "converged";
        case HaltReason::EscapedToEndpoint: return "escaped_to_endpoint";
        case HaltReason::OnSwitchingManifold: return "on_switching_manifold";
    }
    return "?";
}

OrbitRecord iterate(const ProjectedMap& f, double theta0, int max_steps,
                    const IterateOptions& opts) {
    OrbitRecord orbit;
    orbit.thetas.push_back(theta0);
    double theta = theta0;
    for (int step = 0; step < max_steps; ++step) {
        const MobiusBranch* br = f.branch_at(theta);
        if (br == nullptr) {
            orbit.reason = HaltReason::OnSwitchingManifold;
            return orbit;
        }
        const double next = br->eval(theta);
        orbit.branch_labels.push_back(br->cycle);
        orbit.thetas.push_back(next);
        if (next <= -1.0 + opts.endpoint_tol || next >= -opts.endpoint_tol) {
            orbit.reason = HaltReason::EscapedToEndpoint;
            return orbit;
        }
        if (std::abs(next - theta) < opts.convergence_tol) {
            orbit.reason = HaltReason::Converged;
            return orbit;
        }
        theta = next;
    }
    orbit.reason = HaltReason::MaxSteps;
    return orbit;
}

std::string admissibility_name(Admissibility a) {
    switch (a) {
        case Admissibility::Admissible: return "admissible";
        case Admissibility::VirtualOtherDomain: return "virtual_in_other_domain";
        case Admissibility::VirtualOutsideS: return "virtual_outside_S";
    }
    return "?";
}

std::string stability_name(PointStability s) {
    switch (s) {
        case PointStability::Attracting: return "attracting";
        case PointStability::Repelling: return "repelling";
        case PointStability::Neutral: return "neutral";
    }
    return "?";
}

namespace {

std::string fixed_point_name(const std::string& cycle, bool star) {
    return "theta" + cycle.substr(1) + (star ? "_star" : "_minus");
}

FixedPointReport make_report(const MobiusBranch& br, double lambda,
                             const std::array<double, 2>& eigvec, bool star) {
    FixedPointReport r;
    r.name = fixed_point_name(br.cycle, star);
    r.branch = br.cycle;
    r.eigenvalue = lambda;

    // theta(lambda) = (-lambda + m12 + m22) / (m11 - m12 + m21 - m22) is the
    // projection of the lambda-eigendirection; it avoids the cancellation
    // the eigenvector route suffers when |lambda| is small. Fall back to the
    // eigenvector when the quadratic coefficient degenerates (affine branch).
    const Matrix& m = br.source;
    const double zeta = m(0, 0) - m(0, 1) + m(1, 0) - m(1, 1);
    double scale = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) scale = std::max(scale, std::abs(m(i, j)));
    double theta;
    if (std::abs(zeta) > 1e-13 * scale) {
        theta = (-lambda + m(0, 1) + m(1, 1)) / zeta;
    } else {
        const double denom = eigvec[0] + eigvec[1];
        if (denom == 0.0) {
            r.exists = true;
            r.value = std::numeric_limits<double>::infinity();
            r.admissibility = Admissibility::VirtualOutsideS;
            r.derivative = std::numeric_limits<double>::quiet_NaN();
            r.note = "eigenvector projects to infinity";
            return r;
        }
        theta = -eigvec[0] / denom;
    }

    // One Newton polish step on g(ϑ) = branch(ϑ) - ϑ, kept only when it
    // reduces the residual.
    const double g = br.eval(theta) - theta;
    const double gp = br.deriv(theta) - 1.0;
    if (gp != 0.0 && std::isfinite(g) && std::isfinite(gp)) {
        const double candidate = theta - g / gp;
        if (std::isfinite(candidate) && std::abs(br.eval(candidate) - candidate) <= std::abs(g))
            theta = candidate;
    }

    r.value = theta;
    r.derivative = br.deriv(theta);
    const double mag = std::abs(r.derivative);
    if (std::abs(mag - 1.0) <= 1e-12)
        r.stability = PointStability::Neutral;
    else
        r.stability = mag < 1.0 ? PointStability::Attracting : PointStability::Repelling;

    if (theta > br.lo && theta < br.hi)
        r.admissibility = Admissibility::Admissible;
    else if (theta > -1.0 && theta < 0.0)
        r.admissibility = Admissibility::VirtualOtherDomain;
    else
        r.admissibility = Admissibility::VirtualOutsideS;
    return r;
}

}  // namespace

std::vector<FixedPointReport> fixed_points(const ProjectedMap& f) {
    std::vector<FixedPointReport> out;
    for (const auto& br : f.branches) {
        const Eigen2x2 eig = eigen_2x2(br.source);
        if (!eig.real) {
            for (bool star : {true, false}) {
                FixedPointReport r;
                r.name = fixed_point_name(br.cycle, star);
                r.branch = br.cycle;
                r.exists = false;
                r.note = "fold not yet occurred";
                out.push_back(std::move(r));
            }
            continue;
        }
        if (br.cycle == "C34") {
            // star <-> λ+, minus <-> λ-.
            const double lp = std::max(eig.lambda_max, eig.lambda_min);
            const double lm = std::min(eig.lambda_max, eig.lambda_min);
            const auto& vp = eig.lambda_max >= eig.lambda_min ? eig.v_max : eig.v_min;
            const auto& vm = eig.lambda_max >= eig.lambda_min ? eig.v_min : eig.v_max;
            out.push_back(make_report(br, lp, vp, true));
            out.push_back(make_report(br, lm, vm, false));
        } else {
            // C3/C4 matrices carry eigenvalue 1 exactly; the other
            // eigenvalue owns the star point.
            const bool max_is_unit =
                std::abs(eig.lambda_max - 1.0) <= std::abs(eig.lambda_min - 1.0);
            const double l_star = max_is_unit ? eig.lambda_min : eig.lambda_max;
            const auto& v_star = max_is_unit ? eig.v_min : eig.v_max;
            const double l_minus = max_is_unit ? eig.lambda_max : eig.lambda_min;
            const auto& v_minus = max_is_unit ? eig.v_max : eig.v_min;
            out.push_back(make_report(br, l_star, v_star, true));
            out.push_back(make_report(br, l_minus, v_minus, false));
        }
    }
    return out;
}

AdmissibilityRegion admissibility_region(NetworkKind kind, const ParamSet& p) {
    AdmissibilityRegion region;
    const ProjectedMap f = build_projected_map(kind, p);
    region.reports = fixed_points(f);

    const DerivedScalars s = derived_scalars(kind, p);
    auto put = [&region](const char* name, const std::optional<double>& v) {
        if (v) region.signs[name] = *v;
    };
    put("delta3", s.delta3);
    put("nu3", s.nu3);
    put("mu3", s.mu3);
    put("delta4", s.delta4);
    put("nu4", s.nu4);
    put("tau34", s.tau34);
    put("delta34", s.delta34);
    put("omega34", s.omega34);
    put("zeta34", s.zeta34);
    put("beta34", s.beta34);
    return region;
}

PreimageList preimages_of_switch(const ProjectedMap& f, const std::string& cycle, int n_max) {
    const MobiusBranch& br = f.branch(cycle);
    const bool lo_is_switch =
        std::any_of(f.switch_points.begin(), f.switch_points.end(),
                    [&br](double s) { return std::abs(s - br.lo) <= kSwitchTieTol; });
    const bool hi_is_switch =
        std::any_of(f.switch_points.begin(), f.switch_points.end(),
                    [&br](double s) { return std::abs(s - br.hi) <= kSwitchTieTol; });

    auto run = [&br, n_max](double e0) {
        PreimageList list;
        list.values.push_back(e0);
        double e = e0;
        for (int n = 1; n <= n_max; ++n) {
            const double next = br.inverse(e);
            if (!std::isfinite(next) || !(next > br.lo && next < br.hi)) {
                list.truncated_reason = "pre-image left the branch domain";
                return list;
            }
            list.values.push_back(next);
            e = next;
        }
        return list;
    };

    if (lo_is_switch && hi_is_switch) {
        // Both boundaries are switch points (tournament C34 branch): use
        // whichever boundary admits a first pre-image inside the domain.
        PreimageList lower = run(br.lo);
        if (lower.values.size() > 1) return lower;
        return run(br.hi);
    }
    if (lo_is_switch) return run(br.lo);
    if (hi_is_switch) return run(br.hi);
    throw std::invalid_argument("branch " + cycle + " has no switch-point boundary");
}

std::vector<SwitchContinuity> continuity_report(const ProjectedMap& f) {
    std::vector<SwitchContinuity> out;
    for (double s : f.switch_points) {
        SwitchContinuity sc;
        sc.switch_point = s;
        for (const auto& br : f.branches) {
            if (std::abs(br.hi - s) <= kSwitchTieTol) {
                sc.left_branch = br.cycle;
                sc.left_limit = br.eval(s);
            }
            if (std::abs(br.lo - s) <= kSwitchTieTol) {
                sc.right_branch = br.cycle;
                sc.right_limit = br.eval(s);
            }
        }
        sc.continuous = std::abs(sc.left_limit - sc.right_limit) <=
                        1e-12 * std::max(1.0, std::abs(sc.left_limit));
        out.push_back(sc);
    }
    return out;
}

SlopeCheck slope_map_check(NetworkKind kind, const ParamSet& p, double a_slope) {
    if (!(a_slope > 0.0)) throw std::domain_error("slope must be positive");
    const ProjectedMap f = build_projected_map(kind, p);

    // Switching slopes are the a-images of the switch points.
    for (double s : f.switch_points) {
        const double a_s = -(1.0 + s) / s;
        if (std::abs(a_slope - a_s) <= 1e-12 * std::max(1.0, a_s))
            throw std::domain_error("slope lies on a switching subspace");
    }

    const double theta = -1.0 / (1.0 + a_slope);
    const MobiusBranch* br = f.branch_at(theta);
    if (br == nullptr) throw std::domain_error("slope lies on a switching subspace");

    const Matrix& m = br->source;
    SlopeCheck check;
    check.h = (m(1, 0) + m(1, 1) * a_slope) / (m(0, 0) + m(0, 1) * a_slope);
    const double mapped = br->eval(theta);
    const double a_mapped = -(1.0 + mapped) / mapped;
    check.residual = std::abs(check.h - a_mapped);
    return check;
}

double cusp_alpha_star(NetworkKind /*kind*/, const ParamSet& p, double theta, double eps) {
    if (!(theta > -1.0) || !(theta < 0.0)) throw std::domain_error("theta outside S");
    if (!(eps > 0.0) || !(eps < 1.0)) throw std::domain_error("eps must lie in (0,1)");
    const double ratio = param(p, "e_24") / param(p, "e_23");
    const double theta_s = -1.0 / (1.0 + ratio);
    if (std::abs(theta - theta_s) <= kSwitchTieTol)
        throw std::domain_error("alpha* undefined on the switching subspace");
    const double log1me = std::log1p(-eps);
    if (theta > theta_s) return -log1me / (ratio * theta + 1.0 + theta);
    return log1me / (theta + (1.0 / ratio) * (1.0 + theta));
}

}  // namespace heteronet
