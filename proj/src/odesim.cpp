#include "heteronet/odesim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heteronet/dopri5.hpp"
#include "heteronet/projmap.hpp"

namespace heteronet {

State4 rhs(const OdeSystem& system, const State4& x) {
    // Coefficient of x_j^2 in the x_k equation, radial part excluded.
    // In logarithmic coordinates the same bracket applies with
    // x_j^2 = exp(2 X_j).
    std::array<double, 4> sq{};
    if (system.coords == Coordinates::Original) {
        for (int j = 0; j < 4; ++j) sq[j] = x[j] * x[j];
    } else {
        for (int j = 0; j < 4; ++j) sq[j] = std::exp(2.0 * x[j]);
    }
    const double norm2 = sq[0] + sq[1] + sq[2] + sq[3];

    State4 out{};
    for (int k = 1; k <= 4; ++k) {
        double bracket = 1.0 - norm2;
        for (int j = 1; j <= 4; ++j) {
            if (j == k) continue;
            bracket += eigenvalue_at(system.kind, j, k, system.p) * sq[j - 1];
        }
        out[k - 1] = system.coords == Coordinates::Original ? x[k - 1] * bracket : bracket;
    }
    return out;
}

namespace {

// Dwell region of ξ_j: x_j > 1-eta and all other coordinates < eta.
int dwell_label(const State4& x, Coordinates coords, double eta) {
    const double hi = coords == Coordinates::Original ? 1.0 - eta : std::log1p(-eta);
    const double lo = coords == Coordinates::Original ? eta : std::log(eta);
    int label = 0;
    for (int j = 0; j < 4; ++j) {
        if (x[j] > hi) {
            if (label != 0) return 0;  // two large coordinates: outside every region
            label = j + 1;
        } else if (!(x[j] < lo)) {
            return 0;  // mid-range coordinate blocks all regions
        }
    }
    return label;
}

// Scans each accepted step on the dense output at a fixed time resolution
// (dwell intervals and the transits between them last O(1) time units, so
// a fraction of a unit cannot straddle two changes), then bisects each
// detected change down to the event time tolerance.
struct EventTracker {
    int current = 0;
    double entry_time = 0.0;

    void process(Trajectory& traj, const Dopri5& stepper, Coordinates coords, double eta,
                 double time_tol, double scan_dt) {
        const double t0 = stepper.t_prev();
        const double t1 = stepper.t();
        const int nsub = std::max(1, static_cast<int>(std::ceil((t1 - t0) / scan_dt)));
        double t_lo = t0;
        for (int s = 1; s <= nsub; ++s) {
            const double t_hi = (s == nsub) ? t1 : t0 + (t1 - t0) * s / nsub;
            const State4 y = (s == nsub) ? stepper.y() : stepper.interpolate(t_hi);
            const int label = dwell_label(y, coords, eta);
            if (label != current) {
                double a = t_lo, b = t_hi;
                while (b - a > time_tol) {
                    const double mid = 0.5 * (a + b);
                    if (mid == a || mid == b) break;
                    if (dwell_label(stepper.interpolate(mid), coords, eta) == current)
                        a = mid;
                    else
                        b = mid;
                }
                if (current != 0) traj.visits.push_back({current, entry_time, b});
                current = label;
                entry_time = b;
            }
            t_lo = t_hi;
        }
    }

    void finish(Trajectory& traj, double t_end) {
        if (current != 0) traj.visits.push_back({current, entry_time, t_end});
    }
};

void run_integration(Trajectory& traj, const OdeSystem& system, const State4& x0, double t0,
                     double t_end, const IntegratorOptions& opts) {
    Dopri5::Options dopts;
    dopts.abs_tol = opts.abs_tol;
    dopts.rel_tol = opts.rel_tol;
    dopts.h_init = opts.h_init;
    dopts.h_max = opts.h_max;

    Dopri5 stepper([&system](const State4& y) { return rhs(system, y); }, dopts);
    stepper.start(t0, x0);
    stepper.limit_to(t_end);

    if (traj.times.empty()) {
        traj.times.push_back(t0);
        traj.states.push_back(x0);
    }

    EventTracker tracker;
    tracker.current = dwell_label(x0, system.coords, opts.dwell_eta);
    tracker.entry_time = t0;
    if (!traj.visits.empty() && traj.visits.back().label == tracker.current &&
        traj.visits.back().t_exit == t0) {
        // Continue an open visit from a previous segment.
        tracker.entry_time = traj.visits.back().t_entry;
        traj.visits.pop_back();
    }

    std::size_t steps = 0;
    while (stepper.t() < t_end) {
        if (++steps > opts.max_steps) {
            traj.truncated = true;
            traj.diagnostic = "step budget exhausted";
            break;
        }
        if (!stepper.step()) {
            traj.truncated = true;
            traj.diagnostic = "step size underflow";
            break;
        }
        tracker.process(traj, stepper, system.coords, opts.dwell_eta, opts.event_time_tol,
                        opts.event_scan_dt);
        traj.times.push_back(stepper.t());
        traj.states.push_back(stepper.y());
    }
    tracker.finish(traj, traj.times.back());
}

}  // namespace

Trajectory integrate(const OdeSystem& system, const State4& x0, double t_end,
                     const IntegratorOptions& opts) {
    ValidationReport v = validate_params(system.kind, system.p);
    if (!v.ok()) throw std::invalid_argument("invalid ParamSet: " + v.to_string());
    Trajectory traj;
    traj.coords = system.coords;
    if (t_end <= 0.0) {
        traj.times.push_back(0.0);
        traj.states.push_back(x0);
        const int label = dwell_label(x0, system.coords, opts.dwell_eta);
        if (label != 0) traj.visits.push_back({label, 0.0, 0.0});
        return traj;
    }
    run_integration(traj, system, x0, 0.0, t_end, opts);
    return traj;
}

void integrate_more(Trajectory& traj, const OdeSystem& system, double extra_time,
                    const IntegratorOptions& opts) {
    if (traj.times.empty()) throw std::invalid_argument("cannot extend an empty trajectory");
    if (traj.truncated) return;
    const double t0 = traj.times.back();
    run_integration(traj, system, traj.states.back(), t0, t0 + extra_time, opts);
}

Itinerary detect_periodicity(std::vector<int> symbols, int window) {
    Itinerary it;
    it.symbols = std::move(symbols);
    const int n = static_cast<int>(it.symbols.size());
    const int w = std::min(window, n);
    if (w < 2) return it;

    const auto tail = it.symbols.end() - w;
    for (int p = 1; p <= w / 2; ++p) {
        bool periodic = true;
        for (int i = 0; i + p < w; ++i) {
            if (*(tail + i) != *(tail + i + p)) {
                periodic = false;
                break;
            }
        }
        if (!periodic) continue;
        it.eventually_periodic = true;
        it.period = p;
        // Extend the periodic match as far back as possible.
        int start = n - w;
        while (start > 0 && it.symbols[start - 1] == it.symbols[start - 1 + p]) --start;
        it.preperiod = start;
        it.root.assign(it.symbols.begin() + start, it.symbols.begin() + start + p);
        return it;
    }
    return it;
}

Itinerary extract_itinerary(const Trajectory& traj, double dwell_threshold) {
    if (!(dwell_threshold > 0.0) || !(dwell_threshold < 1.0))
        throw std::invalid_argument("dwell threshold must lie in (0,1)");

    std::vector<int> symbols;
    auto push = [&symbols](int label) {
        if (label != 0 && (symbols.empty() || symbols.back() != label)) symbols.push_back(label);
    };

    if (!traj.visits.empty()) {
        for (const auto& v : traj.visits) push(v.label);
    } else {
        for (const auto& state : traj.states) push(dwell_label(state, traj.coords, dwell_threshold));
    }
    return detect_periodicity(std::move(symbols));
}

State4 seed_state(NetworkKind kind, const ParamSet& p, double theta0, const SeedOptions& opts) {
    if (!(theta0 > -1.0) || !(theta0 < 0.0)) throw std::domain_error("theta0 outside S");
    const double alpha_min_3 = -std::log(opts.x1_offset) / (-theta0);  // keep x3 below offset scale
    const double alpha_min_4 = -std::log(opts.x1_offset) / (1.0 + theta0);
    const double alpha_star = cusp_alpha_star(kind, p, theta0, opts.eps);
    const double alpha = std::max({opts.depth_scale * alpha_star, opts.min_depth, alpha_min_3,
                                   alpha_min_4});

    const double x3 = std::exp(alpha * theta0);
    const double x4 = std::exp(alpha * (-1.0 - theta0));
    const double x1 = opts.x1_offset;
    const double x2sq = std::max(1.0 - x1 * x1 - x3 * x3 - x4 * x4, 0.25);
    return {std::log(x1), 0.5 * std::log(x2sq), alpha * theta0, alpha * (-1.0 - theta0)};
}

namespace {

// Cycle block between consecutive ξ2 visits, named from the set of
// equilibria seen in between.
std::string block_name(bool saw3, bool saw4) {
    if (saw3 && saw4) return "C34";
    if (saw3) return "C3";
    if (saw4) return "C4";
    return "";
}

std::vector<std::string> blocks_from_symbols(const std::vector<int>& symbols) {
    std::vector<std::string> blocks;
    bool started = false, saw3 = false, saw4 = false;
    for (int s : symbols) {
        if (s == 2) {
            if (started) {
                const std::string name = block_name(saw3, saw4);
                if (!name.empty()) blocks.push_back(name);
            }
            started = true;
            saw3 = saw4 = false;
        } else if (started) {
            if (s == 3) saw3 = true;
            if (s == 4) saw4 = true;
        }
    }
    return blocks;  // trailing partial block dropped
}

std::vector<std::string> run_types(const std::vector<std::string>& blocks) {
    std::vector<std::string> runs;
    for (const auto& b : blocks)
        if (runs.empty() || runs.back() != b) runs.push_back(b);
    return runs;
}

}  // namespace

AgreementReport compare_prediction(NetworkKind kind, const ParamSet& p, const State4& x0_log,
                                   int horizon_symbols, const CompareOptions& opts) {
    AgreementReport rep;
    OdeSystem system{kind, p, Coordinates::Logarithmic};

    IntegratorOptions iopts = opts.integrator;
    Trajectory traj = integrate(system, x0_log, std::min(50.0, opts.max_time), iopts);
    int symbols = static_cast<int>(extract_itinerary(traj, iopts.dwell_eta).symbols.size());
    while (symbols < horizon_symbols && !traj.truncated && traj.times.back() < opts.max_time) {
        integrate_more(traj, system, std::max(traj.times.back(), 50.0), iopts);
        symbols = static_cast<int>(extract_itinerary(traj, iopts.dwell_eta).symbols.size());
    }

    const Itinerary itinerary = extract_itinerary(traj, iopts.dwell_eta);
    rep.ode_symbols = itinerary.symbols;
    rep.ode_blocks = blocks_from_symbols(itinerary.symbols);

    // Observed ϑ at each entry into the ξ2 dwell region.
    for (const auto& v : traj.visits) {
        if (v.label != 2) continue;
        const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), v.t_entry);
        const size_t idx = std::min<size_t>(it - traj.times.begin(), traj.states.size() - 1);
        const State4& s = traj.states[idx];
        if (s[2] < 0.0 && s[3] < 0.0) rep.ode_thetas.push_back(project(s[2], s[3]));
    }
    if (rep.ode_thetas.empty()) {
        rep.no_section_hit = true;
        return rep;
    }
    rep.theta0 = rep.ode_thetas.front();

    // Projected-map prediction from the first section value.
    const ProjectedMap f = build_projected_map(kind, p);
    const int want = static_cast<int>(rep.ode_blocks.size());
    const OrbitRecord orbit = iterate(f, rep.theta0, std::max(want, 1));
    rep.map_blocks = orbit.branch_labels;
    // A converged orbit repeats its final branch forever.
    if ((orbit.reason == HaltReason::Converged || orbit.reason == HaltReason::EscapedToEndpoint) &&
        !rep.map_blocks.empty())
        while (static_cast<int>(rep.map_blocks.size()) < want)
            rep.map_blocks.push_back(rep.map_blocks.back());

    const size_t n = std::min(rep.map_blocks.size(), rep.ode_blocks.size());
    rep.first_disagreement = -1;
    for (size_t i = 0; i < n; ++i) {
        if (rep.map_blocks[i] != rep.ode_blocks[i]) {
            rep.first_disagreement = static_cast<int>(i);
            break;
        }
    }
    rep.root_match = !rep.map_blocks.empty() && !rep.ode_blocks.empty() &&
                     rep.map_blocks.back() == rep.ode_blocks.back();
    rep.structure_match = run_types(rep.map_blocks) == run_types(rep.ode_blocks);
    rep.agree = rep.root_match && rep.structure_match;
    return rep;
}

AgreementReport compare_prediction_theta(NetworkKind kind, const ParamSet& p, double theta0,
                                         int horizon_symbols, const CompareOptions& opts) {
    const State4 x0 = seed_state(kind, p, theta0, opts.seed);
    return compare_prediction(kind, p, x0, horizon_symbols, opts);
}

}  // namespace heteronet
