#include "heteronet/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include <Eigen/Eigenvalues>

#include "heteronet/projmap.hpp"
#include "heteronet/transition.hpp"

namespace heteronet {

namespace {

constexpr double kSignTol = 1e-12;  // quantities this close to zero are undetermined

bool same_sign_nonzero(const std::vector<double>& w) {
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    const double zero_tol = 1e-12 * norm;
    bool pos = false, neg = false;
    for (double x : w) {
        if (std::abs(x) <= zero_tol) return false;
        (x > 0.0 ? pos : neg) = true;
    }
    return !(pos && neg);
}

}  // namespace

PodviginaReport podvigina_check(const TransitionMatrix& tm) {
    const Matrix& m = tm.mat;
    if (m.size() < 2) throw std::invalid_argument("podvigina_check needs dimension >= 2");
    PodviginaReport r;
    r.tag = tm.tag;

    if (m.size() == 2) {
        const Eigen2x2 eig = eigen_2x2(m);
        r.lambda_real = eig.real;
        r.lambda_tie = eig.tie;
        if (eig.real) {
            r.lambda_max = eig.lambda_max;
            r.w_max = {eig.v_max[0], eig.v_max[1]};
        }
    } else {
        Eigen::MatrixXd em(m.size(), m.size());
        for (int i = 0; i < m.size(); ++i)
            for (int j = 0; j < m.size(); ++j) em(i, j) = m(i, j);
        Eigen::EigenSolver<Eigen::MatrixXd> solver(em);
        int max_idx = 0;
        double max_abs = -1.0;
        for (int i = 0; i < m.size(); ++i) {
            const double mag = std::abs(solver.eigenvalues()[i]);
            if (mag > max_abs) {
                max_abs = mag;
                max_idx = i;
            }
        }
        const auto lambda = solver.eigenvalues()[max_idx];
        for (int i = 0; i < m.size(); ++i) {
            if (i == max_idx) continue;
            const double mag = std::abs(solver.eigenvalues()[i]);
            if (mag == max_abs && solver.eigenvalues()[i] != lambda) r.lambda_tie = true;
        }
        r.lambda_real = std::abs(lambda.imag()) <= 1e-12 * std::max(1.0, std::abs(lambda.real()));
        if (r.lambda_real) {
            r.lambda_max = lambda.real();
            const Eigen::VectorXcd vec = solver.eigenvectors().col(max_idx);
            r.w_max.resize(m.size());
            for (int i = 0; i < m.size(); ++i) r.w_max[i] = vec[i].real();
        }
    }

    r.cond_I = r.lambda_real && !r.lambda_tie;
    r.cond_II = r.cond_I && r.lambda_max > 1.0;
    r.cond_III = r.cond_I && same_sign_nonzero(r.w_max);
    return r;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Fas: return "fas";
        case Verdict::Acu: return "acu";
        case Verdict::Cu: return "cu";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

// Sign with an undetermined band around zero: -1, 0, +1.
int sgn(double x) {
    if (std::abs(x) <= kSignTol) return 0;
    return x > 0.0 ? 1 : -1;
}

CycleClassification classify_three_cycle(const std::string& cycle, double delta, double nu,
                                         const char* delta_name, const char* nu_name,
                                         std::optional<double> mu = std::nullopt) {
    CycleClassification c;
    c.cycle = cycle;
    c.signs[delta_name] = delta;
    c.signs[nu_name] = nu;
    if (mu) c.signs["mu3"] = *mu;

    const int sd = sgn(delta - 1.0);
    const int sn = sgn(nu);
    const int sm = mu ? sgn(*mu) : +1;
    if (sd == 0 || sn == 0 || (mu && sm == 0)) {
        c.verdict = Verdict::Undetermined;
        c.reasons.push_back("sign condition on a bifurcation boundary");
        return c;
    }
    if (sd < 0) {
        c.verdict = Verdict::Cu;
        c.reasons.push_back(std::string(delta_name) + "<1");
        return c;
    }
    if (sn > 0 && sm > 0) {
        c.verdict = Verdict::Fas;
        c.reasons.push_back(std::string(delta_name) + ">1");
        c.reasons.push_back(std::string(nu_name) + ">0");
        if (mu) c.reasons.push_back("mu3>0");
    } else {
        c.verdict = Verdict::Acu;
        c.reasons.push_back(std::string(delta_name) + ">1");
        c.reasons.push_back(sn < 0 ? std::string(nu_name) + "<0" : "mu3<0");
    }
    return c;
}

CycleClassification classify_c34(NetworkKind kind, const DerivedScalars& s, const ParamSet& p) {
    CycleClassification c;
    c.cycle = "C34";
    c.signs["tau34"] = *s.tau34;
    c.signs["delta34"] = *s.delta34;
    c.signs["omega34"] = *s.omega34;
    c.signs["zeta34"] = *s.zeta34;
    c.signs["nu4"] = *s.nu4;
    if (s.beta34) c.signs["beta34"] = *s.beta34;
    if (s.mu3) c.signs["mu3"] = *s.mu3;

    const double threshold = std::min(2.0, 1.0 + *s.delta34);
    const int s_omega = sgn(*s.omega34);
    const int s_tau = sgn(*s.tau34);

    if (s_omega == 0 || s_tau == 0) {
        c.verdict = Verdict::Undetermined;
        c.reasons.push_back("omega34 or tau34 on a bifurcation boundary");
        return c;
    }
    if (s_omega < 0 || s_tau < 0) {
        c.verdict = Verdict::Cu;
        c.reasons.push_back(s_omega < 0 ? "omega34<0" : "tau34<0");
        return c;
    }
    if (sgn(*s.tau34 - threshold) == 0) {
        c.verdict = Verdict::Undetermined;
        c.reasons.push_back("tau34 at min{2, 1+delta34}");
        return c;
    }
    if (*s.tau34 < threshold) {
        c.verdict = Verdict::Cu;
        c.reasons.push_back("0<tau34<min{2,1+delta34}");
        return c;
    }

    if (kind == NetworkKind::DeltaClique) {
        const int sz = sgn(*s.zeta34);
        const int sb = sgn(*s.beta34);
        const int sn4 = sgn(*s.nu4);
        if (sz == 0 || sn4 == 0 || (sz < 0 && sb == 0)) {
            c.verdict = Verdict::Undetermined;
            c.reasons.push_back("zeta34/beta34/nu4 on a bifurcation boundary");
            return c;
        }
        const bool fas = (sz < 0 && sb < 0) || (sz < 0 && sb > 0 && sn4 < 0) ||
                         (sz > 0 && sn4 < 0);
        c.verdict = fas ? Verdict::Fas : Verdict::Cu;
        c.reasons.push_back("omega34>0");
        c.reasons.push_back("tau34>min{2,1+delta34}");
        c.reasons.push_back(fas ? "theta34* admissible by sign case" : "theta34* virtual by sign case");
        return c;
    }

    // Tournament: theta34* must be admissible and attracting, composed from
    // the same primitives; admissibility taken from the fixed point itself.
    const ProjectedMap f = build_projected_map(kind, p);
    for (const auto& fp : fixed_points(f)) {
        if (fp.name != "theta34_star") continue;
        if (!fp.exists) {
            c.verdict = Verdict::Undetermined;
            c.reasons.push_back("fixed points missing despite omega34>0");
            return c;
        }
        const bool admissible = fp.admissibility == Admissibility::Admissible;
        c.verdict = admissible ? Verdict::Fas : Verdict::Cu;
        c.reasons.push_back("omega34>0");
        c.reasons.push_back("tau34>min{2,1+delta34}");
        c.reasons.push_back(admissible ? "theta34* admissible" : "theta34* virtual");
        c.signs["theta34_star"] = fp.value;
        return c;
    }
    c.verdict = Verdict::Undetermined;
    return c;
}

}  // namespace

CycleClassification classify_cycle(NetworkKind kind, const std::string& cycle,
                                   const ParamSet& p) {
    const Topology topo = build_topology(kind);
    topo.cycle(cycle);  // validates the name
    const DerivedScalars s = derived_scalars(kind, p);

    if (cycle == "C3") {
        if (kind == NetworkKind::Tournament)
            return classify_three_cycle(cycle, *s.delta3, *s.nu3, "delta3", "nu3", s.mu3);
        return classify_three_cycle(cycle, *s.delta3, *s.nu3, "delta3", "nu3");
    }
    if (cycle == "C4") return classify_three_cycle(cycle, *s.delta4, *s.nu4, "delta4", "nu4");
    return classify_c34(kind, s, p);
}

namespace {

// Bases whose full matrices carry the negative-entry basic maps of the
// cycle: for each basic m_ijk of the cycle with a negative entry, check
// M_k^(cycle).
std::vector<int> negative_entry_bases(NetworkKind kind, const Cycle& cyc, const ParamSet& p) {
    std::vector<int> bases;
    const int m = static_cast<int>(cyc.order.size());
    for (int idx = 0; idx < m; ++idx) {
        const int i = cyc.order[(idx + m - 1) % m];
        const int j = cyc.order[idx];
        const int k = cyc.order[(idx + 1) % m];
        const Matrix b = basic_matrix(kind, i, j, k, p).mat;
        bool negative = false;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c)
                if (b(r, c) < 0.0) negative = true;
        if (negative) bases.push_back(k);
    }
    return bases;
}

}  // namespace

std::vector<BcbAgreement> bcb_equivalence_check(NetworkKind kind, const ParamSet& p) {
    const Topology topo = build_topology(kind);
    const DerivedScalars s = derived_scalars(kind, p);
    const ProjectedMap f = build_projected_map(kind, p);
    const auto points = fixed_points(f);

    std::vector<BcbAgreement> out;
    for (const auto& cyc : topo.cycles) {
        BcbAgreement agr;
        agr.fixed_point = "theta" + cyc.name.substr(1) + "_star";

        // Preconditions: the star point must own the dominant eigenvalue.
        if (cyc.name == "C3" && !(*s.delta3 > 1.0)) {
            agr.skipped = true;
            agr.skip_reason = "delta3 <= 1";
        } else if (cyc.name == "C4" && !(*s.delta4 > 1.0)) {
            agr.skipped = true;
            agr.skip_reason = "delta4 <= 1";
        } else if (cyc.name == "C34") {
            const double threshold = std::min(2.0, 1.0 + *s.delta34);
            if (!(*s.omega34 > 0.0) || !(*s.tau34 > threshold)) {
                agr.skipped = true;
                agr.skip_reason = "omega34 <= 0 or tau34 <= min{2,1+delta34}";
            }
        }
        if (agr.skipped) {
            out.push_back(std::move(agr));
            continue;
        }

        const auto star = std::find_if(points.begin(), points.end(), [&agr](const auto& fp) {
            return fp.name == agr.fixed_point;
        });
        agr.admissible = star != points.end() && star->exists &&
                         star->admissibility == Admissibility::Admissible;

        agr.cond_III = true;
        for (int base : negative_entry_bases(kind, cyc, p)) {
            const TransitionMatrix M = full_matrix(kind, cyc.name, base, p);
            const PodviginaReport rep = podvigina_check(M);
            agr.matrices.push_back(M.tag);
            agr.cond_III = agr.cond_III && rep.cond_III;
        }
        agr.match = agr.admissible == agr.cond_III;
        out.push_back(std::move(agr));
    }
    return out;
}

ZeroEntryCheck general_bcb_check(int n, const ParamSet& p, std::span<const double> w) {
    const auto [m123, m124] = general_split_matrices(n, p);
    if (static_cast<int>(w.size()) != n - 2)
        throw std::invalid_argument("switching-subspace vector must have n-2 components");
    const double ratio = param(p, "e_24") / param(p, "e_23");
    if (!(w[0] < 0.0))
        throw std::invalid_argument("vector is not in the switching subspace (w1 must be < 0)");
    if (std::abs(w[1] - ratio * w[0]) > 1e-12 * std::abs(w[0]) * std::max(1.0, ratio))
        throw std::invalid_argument("vector is not in the switching subspace (w2 != (e24/e23) w1)");

    ZeroEntryCheck check;
    for (double x : w) check.w_norm += x * x;
    check.w_norm = std::sqrt(check.w_norm);
    check.resid_123 = std::abs(m123.mat.apply(w)[1]);
    check.resid_124 = std::abs(m124.mat.apply(w)[0]);
    check.ok = check.resid_123 <= 1e-14 * check.w_norm && check.resid_124 <= 1e-14 * check.w_norm;
    return check;
}

std::string bifurcation_kind_name(BifurcationKind k) {
    switch (k) {
        case BifurcationKind::BorderCollision: return "border_collision";
        case BifurcationKind::Fold: return "fold";
        case BifurcationKind::Transcritical: return "transcritical";
    }
    return "?";
}

namespace {

struct Monitor {
    std::string name;
    BifurcationKind kind;
    std::string subject;
    std::function<double(const DerivedScalars&)> value;
};

std::vector<Monitor> monitors_for(NetworkKind kind) {
    std::vector<Monitor> ms;
    auto add = [&ms](std::string name, BifurcationKind k, std::string subject,
                     std::function<double(const DerivedScalars&)> fn) {
        ms.push_back({std::move(name), k, std::move(subject), std::move(fn)});
    };
    if (kind == NetworkKind::KirkSilber || kind == NetworkKind::Tournament) {
        add("nu3", BifurcationKind::BorderCollision, "theta3_star",
            [](const DerivedScalars& s) { return *s.nu3; });
        add("delta3-1", BifurcationKind::Transcritical, "theta3_star",
            [](const DerivedScalars& s) { return *s.delta3 - 1.0; });
    }
    add("nu4", BifurcationKind::BorderCollision, "theta4_star",
        [](const DerivedScalars& s) { return *s.nu4; });
    add("delta4-1", BifurcationKind::Transcritical, "theta4_star",
        [](const DerivedScalars& s) { return *s.delta4 - 1.0; });
    if (kind == NetworkKind::Tournament)
        add("mu3", BifurcationKind::BorderCollision, "theta3_star",
            [](const DerivedScalars& s) { return *s.mu3; });
    if (kind == NetworkKind::DeltaClique || kind == NetworkKind::Tournament)
        add("omega34", BifurcationKind::Fold, "theta34_star/theta34_minus",
            [](const DerivedScalars& s) { return *s.omega34; });
    return ms;
}

double fixed_point_value(const std::vector<FixedPointReport>& points, const std::string& name) {
    for (const auto& fp : points)
        if (fp.name == name && fp.exists) return fp.value;
    return std::numeric_limits<double>::quiet_NaN();
}

// Validation distance per event kind; also fills event.crosscheck.
bool validate_event(NetworkKind kind, const ParamSet& p, BifurcationEvent& ev) {
    const ProjectedMap f = build_projected_map(kind, p);
    const auto points = fixed_points(f);
    const auto thetas = switching_thetas(kind, p);

    if (ev.kind == BifurcationKind::Fold) {
        const DerivedScalars s = derived_scalars(kind, p);
        const double theta_c = (2.0 * *s.alpha2 + *s.alpha4 - *s.alpha1) / (2.0 * *s.zeta34);
        const double df = f.branch("C34").deriv(theta_c);
        ev.crosscheck = std::abs(df - 1.0);
        return ev.crosscheck <= 1e-6;
    }
    if (ev.kind == BifurcationKind::Transcritical) {
        const bool c3 = ev.subject == "theta3_star";
        const double target = c3 ? 0.0 : -1.0;
        const double value = fixed_point_value(points, ev.subject);
        ev.crosscheck = std::abs(value - target);
        return ev.crosscheck <= 1e-8;
    }
    // Border collision: the subject fixed point meets a switch point.
    const double value = fixed_point_value(points, ev.subject);
    double best = std::numeric_limits<double>::infinity();
    for (double s : thetas) best = std::min(best, std::abs(value - s));
    ev.crosscheck = best;
    return ev.crosscheck <= 1e-8;
}

}  // namespace

std::vector<BifurcationEvent> detect_bifurcations(NetworkKind kind, const ParamSet& base,
                                                  const std::string& key, double lo, double hi,
                                                  int samples) {
    if (base.find(key) == base.end())
        throw std::invalid_argument("path parameter not in ParamSet: " + key);
    if (!(hi > lo) || !(lo > 0.0))
        throw std::invalid_argument("path interval must be positive and increasing");
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");

    auto scalars_at = [&](double t) {
        ParamSet p = base;
        p[key] = t;
        return derived_scalars(kind, p);
    };

    std::vector<BifurcationEvent> events;
    for (const Monitor& mon : monitors_for(kind)) {
        auto value_at = [&](double t) { return mon.value(scalars_at(t)); };
        double t_prev = lo;
        double v_prev = value_at(t_prev);
        for (int i = 1; i < samples; ++i) {
            const double t = lo + (hi - lo) * i / (samples - 1);
            const double v = value_at(t);
            if (v_prev == 0.0 || v * v_prev < 0.0) {
                double a = t_prev, b = t, va = v_prev;
                for (int iter = 0; iter < 200 && std::abs(b - a) > 0.0; ++iter) {
                    const double mid = 0.5 * (a + b);
                    if (mid == a || mid == b) break;
                    const double vm = value_at(mid);
                    if (std::abs(vm) <= 1e-10 && std::abs(b - a) <= 1e-10 * std::max(1.0, mid))
                        break;
                    if ((vm < 0.0) == (va < 0.0)) {
                        a = mid;
                        va = vm;
                    } else {
                        b = mid;
                    }
                }
                BifurcationEvent ev;
                ev.kind = mon.kind;
                ev.subject = mon.subject;
                ev.monitor = mon.name;
                ev.locus = 0.5 * (a + b);
                ev.residual = std::abs(value_at(ev.locus));
                ParamSet p_at = base;
                p_at[key] = ev.locus;
                ev.validated = validate_event(kind, p_at, ev);
                events.push_back(std::move(ev));
            }
            t_prev = t;
            v_prev = v;
        }
    }
    std::sort(events.begin(), events.end(),
              [](const BifurcationEvent& x, const BifurcationEvent& y) { return x.locus < y.locus; });
    return events;
}

double ScanAxis::value(int i) const {
    if (steps <= 1) return lo;
    return lo + (hi - lo) * i / (steps - 1);
}

ScanResult scan_plane(NetworkKind kind, const ParamSet& base, const ScanAxis& axis1,
                      const ScanAxis& axis2) {
    if (axis1.key == axis2.key) throw std::invalid_argument("scan axes must be distinct keys");
    ScanResult result;
    result.axis1 = axis1;
    result.axis2 = axis2;
    const int total = axis1.steps * axis2.steps;
    result.cells.resize(total);

    const Topology topo = build_topology(kind);
    auto eval_cell = [&](int idx) {
        const int i = idx / axis2.steps;
        const int j = idx % axis2.steps;
        ParamSet p = base;
        p[axis1.key] = axis1.value(i);
        p[axis2.key] = axis2.value(j);
        ScanCell cell;
        cell.x = p[axis1.key];
        cell.y = p[axis2.key];
        for (const auto& cyc : topo.cycles) cell.cycles.push_back(classify_cycle(kind, cyc.name, p));
        result.cells[idx] = std::move(cell);
    };

    unsigned threads = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("HETERONET_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested > 0) threads = static_cast<unsigned>(requested);
    }
    threads = std::max(1u, std::min<unsigned>(threads, total));

    if (threads == 1) {
        for (int idx = 0; idx < total; ++idx) eval_cell(idx);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back([&, w]() {
                for (int idx = static_cast<int>(w); idx < total; idx += static_cast<int>(threads))
                    eval_cell(idx);
            });
        for (auto& th : pool) th.join();
    }
    return result;
}

}  // namespace heteronet
