#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "heteronet/network.hpp"
#include "heteronet/params.hpp"

namespace heteronet {

enum class Coordinates { Original, Logarithmic };

/// One of the three vector fields, in original coordinates x or in
/// logarithmic coordinates X_j = log x_j (positive orthant sheet).
struct OdeSystem {
    NetworkKind kind;
    ParamSet p;
    Coordinates coords = Coordinates::Logarithmic;
};

using State4 = std::array<double, 4>;

State4 rhs(const OdeSystem& system, const State4& x);

/// Maximal interval during which the trajectory sits in the dwell region
/// of ξ_label: x_label > 1-eta and every other coordinate < eta.
struct VisitEvent {
    int label = 0;
    double t_entry = 0.0;
    double t_exit = 0.0;
};

struct Trajectory {
    Coordinates coords = Coordinates::Logarithmic;
    std::vector<double> times;
    std::vector<State4> states;
    std::vector<VisitEvent> visits;
    bool truncated = false;
    std::string diagnostic;
};

struct IntegratorOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-9;
    double h_init = 1e-3;
    double h_max = 0.5;
    double event_time_tol = 1e-9;  // dwell entry/exit localization
    double event_scan_dt = 0.05;   // dense-output scan resolution for events
    double dwell_eta = 0.1;        // region size, original-coordinate units
    std::size_t max_steps = 4'000'000;
};

Trajectory integrate(const OdeSystem& system, const State4& x0, double t_end,
                     const IntegratorOptions& opts = {});

/// Continue an existing trajectory for `extra_time` more time units.
void integrate_more(Trajectory& traj, const OdeSystem& system, double extra_time,
                    const IntegratorOptions& opts = {});

struct Itinerary {
    std::vector<int> symbols;
    bool eventually_periodic = false;
    int preperiod = 0;
    int period = 0;
    std::vector<int> root;
};

/// Symbol sequence of dwell-region visits (consecutive duplicates
/// collapsed), with eventually-periodic structure detected from the
/// trailing window. Uses the trajectory's localized visit events when
/// present; `dwell_threshold` governs the state-sample fallback.
Itinerary extract_itinerary(const Trajectory& traj, double dwell_threshold = 0.1);

/// Detect the eventually periodic structure of a bare symbol sequence.
Itinerary detect_periodicity(std::vector<int> symbols, int window = 24);

/// Initial condition on the incoming region of ξ2 corresponding to a
/// projected-map point ϑ0, placed outside the excluded cusp at depth
/// alpha = max(depth_scale * α*(ϑ0), depth floor from the dwell size).
struct SeedOptions {
    double eps = 0.01;        // excluded-cusp parameter
    double depth_scale = 2.0; // multiple of α*(ϑ0)
    double min_depth = 8.0;
    double x1_offset = 0.1;   // incoming-section coordinate
};

State4 seed_state(NetworkKind kind, const ParamSet& p, double theta0,
                  const SeedOptions& opts = {});  // logarithmic coordinates

/// Map-vs-ODE itinerary comparison at the cycle-block level. Blocks are
/// the loops between consecutive ξ2 visits ("C3", "C4", "C34"); the map
/// side is the branch-label sequence of the projected-map orbit.
struct AgreementReport {
    bool no_section_hit = false;
    double theta0 = 0.0;                  // ϑ at the first ξ2 section hit
    std::vector<std::string> map_blocks;
    std::vector<std::string> ode_blocks;
    std::vector<double> ode_thetas;       // observed ϑ at each ξ2 entry
    std::vector<int> ode_symbols;
    int first_disagreement = -1;          // index of first differing block, -1 if none
    bool root_match = false;              // same eventual block type
    bool structure_match = false;         // same ordered run types
    bool agree = false;                   // root_match && structure_match
};

struct CompareOptions {
    int horizon_symbols = 60;
    IntegratorOptions integrator{};
    SeedOptions seed{};
    double max_time = 1e7;
};

AgreementReport compare_prediction(NetworkKind kind, const ParamSet& p, const State4& x0_log,
                                   int horizon_symbols, const CompareOptions& opts = {});

/// Convenience overload seeding from a projected-map point.
AgreementReport compare_prediction_theta(NetworkKind kind, const ParamSet& p, double theta0,
                                         int horizon_symbols, const CompareOptions& opts = {});

}  // namespace heteronet
