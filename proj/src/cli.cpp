#include "heteronet/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "heteronet/network.hpp"
#include "heteronet/odesim.hpp"
#include "heteronet/projmap.hpp"
#include "heteronet/stability.hpp"
#include "heteronet/transition.hpp"
#include "heteronet/version.hpp"

namespace heteronet::cli {

namespace {

using nlohmann::json;

// Full 17-significant-digit formatting so CSV values round-trip exactly.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

json params_json(const ParamSet& p) {
    json j = json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

json matrix_json(const Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.size(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.size(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_output(const std::string& path, const std::string& payload, std::string* out) {
    if (path.empty()) {
        if (out)
            *out += payload;
        else
            std::cout << payload;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << payload;
}

struct CommonOpts {
    std::string params_path;
    std::string network_name;
    std::string out_path;
};

struct ResolvedParams {
    NetworkKind kind;
    ParamSet params;
};

// Resolved configuration echoed into every artifact for reproducibility.
std::string csv_header(const std::string& subcommand, const ResolvedParams& pf,
                       const std::vector<std::pair<std::string, std::string>>& extras) {
    std::ostringstream os;
    os << "# tool = heteronet " << kVersion << "\n";
    os << "# subcommand = " << subcommand << "\n";
    os << "# network = " << kind_name(pf.kind) << "\n";
    for (const auto& [k, v] : pf.params) os << "# " << k << " = " << fmt(v) << "\n";
    for (const auto& [k, v] : extras) os << "# " << k << " = " << v << "\n";
    return os.str();
}

json config_json(const std::string& subcommand, const ResolvedParams& pf) {
    json j;
    j["tool"] = "heteronet";
    j["version"] = kVersion;
    j["subcommand"] = subcommand;
    j["network"] = kind_name(pf.kind);
    j["params"] = params_json(pf.params);
    return j;
}

ResolvedParams load_and_validate(const CommonOpts& common) {
    const ParamFile pf = load_param_file(common.params_path);
    std::optional<NetworkKind> kind = pf.kind;
    if (!common.network_name.empty()) {
        const auto flag_kind = parse_kind(common.network_name);
        if (!flag_kind) throw std::runtime_error("unknown network: " + common.network_name);
        if (kind && *kind != *flag_kind)
            throw std::runtime_error("--network " + common.network_name +
                                     " conflicts with the parameter file's network key");
        kind = flag_kind;
    }
    if (!kind)
        throw std::runtime_error(
            "no network selected: pass --network or add a 'network = ...' key");
    ValidationReport v = validate_params(*kind, pf.params);
    if (!v.ok()) throw std::runtime_error("parameter validation failed: " + v.to_string());
    return {*kind, pf.params};
}

json fixed_point_json(const FixedPointReport& fp) {
    json j;
    j["name"] = fp.name;
    j["branch"] = fp.branch;
    j["exists"] = fp.exists;
    if (fp.exists) {
        j["value"] = fp.value;
        j["eigenvalue"] = fp.eigenvalue;
        j["derivative"] = fp.derivative;
        j["stability"] = stability_name(fp.stability);
        j["admissibility"] = admissibility_name(fp.admissibility);
    }
    if (!fp.note.empty()) j["note"] = fp.note;
    return j;
}

int run_matrices(const CommonOpts& common, std::string* out) {
    const ResolvedParams pf = load_and_validate(common);
    const Topology topo = build_topology(pf.kind);

    json j;
    j["config"] = config_json("matrices", pf);

    json basics = json::object();
    for (const auto& cyc : topo.cycles) {
        const int m = static_cast<int>(cyc.order.size());
        for (int idx = 0; idx < m; ++idx) {
            const int i = cyc.order[(idx + m - 1) % m];
            const int jq = cyc.order[idx];
            const int k = cyc.order[(idx + 1) % m];
            TransitionMatrix tm = basic_matrix(pf.kind, i, jq, k, pf.params);
            basics[tm.tag] = matrix_json(tm.mat);
        }
    }
    j["basic"] = basics;

    json fulls = json::object();
    for (const auto& cyc : topo.cycles)
        for (int base : cyc.order) {
            TransitionMatrix tm = full_matrix(pf.kind, cyc.name, base, pf.params);
            fulls[tm.tag] = matrix_json(tm.mat);
        }
    j["full"] = fulls;

    const DerivedScalars s = derived_scalars(pf.kind, pf.params);
    json scalars = json::object();
    auto put = [&scalars](const char* name, const std::optional<double>& v) {
        if (v) scalars[name] = *v;
    };
    put("delta3", s.delta3);
    put("rho3", s.rho3);
    put("nu3", s.nu3);
    put("delta4", s.delta4);
    put("rho4", s.rho4);
    put("nu4", s.nu4);
    put("mu3", s.mu3);
    put("alpha1", s.alpha1);
    put("alpha2", s.alpha2);
    put("alpha3", s.alpha3);
    put("alpha4", s.alpha4);
    put("tau34", s.tau34);
    put("delta34", s.delta34);
    put("omega34", s.omega34);
    put("lambda34_plus", s.lambda34_plus);
    put("lambda34_minus", s.lambda34_minus);
    put("zeta34", s.zeta34);
    put("beta34", s.beta34);
    j["scalars"] = scalars;
    j["crosscheck_notes"] = s.crosscheck_notes;

    json classes = json::object();
    for (const auto& cyc : topo.cycles) {
        json per_eq = json::object();
        for (int eq : cyc.order) {
            json list = json::array();
            for (const auto& ce : eigen_classes(pf.kind, cyc.name, eq, pf.params)) {
                json e;
                e["key"] = ce.key;
                e["direction"] = ce.direction;
                e["value"] = ce.value;
                e["class"] = eigen_class_name(ce.eigen_class);
                e["globally_transverse"] = ce.globally_transverse;
                list.push_back(std::move(e));
            }
            per_eq["xi" + std::to_string(eq)] = std::move(list);
        }
        classes[cyc.name] = std::move(per_eq);
    }
    j["eigen_classes"] = classes;

    write_output(common.out_path, j.dump(2) + "\n", out);
    return 0;
}

int run_map(const CommonOpts& common, int samples, std::string* out) {
    const ResolvedParams pf = load_and_validate(common);
    const ProjectedMap f = build_projected_map(pf.kind, pf.params);

    std::ostringstream os;
    os << csv_header("map", pf, {{"samples", std::to_string(samples)}});
    os << "theta,f_theta,branch_label\n";
    for (int i = 1; i < samples; ++i) {
        const double theta = -1.0 + static_cast<double>(i) / samples;
        const EvalResult r = eval(f, theta);
        if (r.status != EvalStatus::Value) continue;
        os << fmt(theta) << "," << fmt(r.value) << "," << r.branch << "\n";
    }
    write_output(common.out_path, os.str(), out);
    return 0;
}

int run_cobweb(const CommonOpts& common, double theta0, int steps, std::string* out) {
    const ResolvedParams pf = load_and_validate(common);
    const ProjectedMap f = build_projected_map(pf.kind, pf.params);
    const OrbitRecord orbit = iterate(f, theta0, steps);

    std::ostringstream os;
    os << csv_header("cobweb", pf,
                     {{"theta0", fmt(theta0)},
                      {"steps", std::to_string(steps)},
                      {"halt_reason", halt_reason_name(orbit.reason)}});
    os << "step,theta,branch_label\n";
    for (size_t i = 0; i < orbit.thetas.size(); ++i) {
        os << i << "," << fmt(orbit.thetas[i]) << ","
           << (i < orbit.branch_labels.size() ? orbit.branch_labels[i] : "") << "\n";
    }
    write_output(common.out_path, os.str(), out);
    return 0;
}

int run_fixed_points(const CommonOpts& common, std::string* out) {
    const ResolvedParams pf = load_and_validate(common);
    const ProjectedMap f = build_projected_map(pf.kind, pf.params);

    json j;
    j["config"] = config_json("fixed-points", pf);
    j["switch_points"] = f.switch_points;

    json points = json::array();
    for (const auto& fp : fixed_points(f)) points.push_back(fixed_point_json(fp));
    j["fixed_points"] = points;

    const AdmissibilityRegion region = admissibility_region(pf.kind, pf.params);
    json signs = json::object();
    for (const auto& [k, v] : region.signs) signs[k] = v;
    j["signs"] = signs;

    json continuity = json::array();
    for (const auto& sc : continuity_report(f)) {
        json c;
        c["switch_point"] = sc.switch_point;
        c["left_branch"] = sc.left_branch;
        c["right_branch"] = sc.right_branch;
        c["left_limit"] = sc.left_limit;
        c["right_limit"] = sc.right_limit;
        c["continuous"] = sc.continuous;
        continuity.push_back(std::move(c));
    }
    j["continuity"] = continuity;

    write_output(common.out_path, j.dump(2) + "\n", out);
    return 0;
}

int run_bifurcations(const CommonOpts& common, const std::string& path_spec, int samples,
                     std::string* out) {
    const ResolvedParams pf = load_and_validate(common);

    std::string key;
    double lo = 0, hi = 0;
    {
        std::istringstream is(path_spec);
        std::string tok;
        std::vector<std::string> parts;
        while (std::getline(is, tok, ':')) parts.push_back(tok);
        if (parts.size() != 3) throw std::runtime_error("--path expects key:lo:hi");
        key = parts[0];
        lo = std::stod(parts[1]);
        hi = std::stod(parts[2]);
    }

    const auto events = detect_bifurcations(pf.kind, pf.params, key, lo, hi, samples);
    json j;
    j["config"] = config_json("bifurcations", pf);
    j["path"] = {{"key", key}, {"lo", lo}, {"hi", hi}, {"samples", samples}};
    json list = json::array();
    for (const auto& ev : events) {
        json e;
        e["kind"] = bifurcation_kind_name(ev.kind);
        e["subject"] = ev.subject;
        e["monitor"] = ev.monitor;
        e["locus"] = ev.locus;
        e["residual"] = ev.residual;
        e["crosscheck"] = ev.crosscheck;
        e["validated"] = ev.validated;
        list.push_back(std::move(e));
    }
    j["events"] = list;
    write_output(common.out_path, j.dump(2) + "\n", out);
    return 0;
}

ScanAxis parse_axis(const std::string& spec) {
    std::istringstream is(spec);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(is, tok, ':')) parts.push_back(tok);
    if (parts.size() != 4) throw std::runtime_error("axis expects key:lo:hi:steps");
    ScanAxis axis;
    axis.key = parts[0];
    axis.lo = std::stod(parts[1]);
    axis.hi = std::stod(parts[2]);
    axis.steps = std::stoi(parts[3]);
    if (axis.steps < 1) throw std::runtime_error("axis steps must be >= 1");
    return axis;
}

int run_scan(const CommonOpts& common, const std::string& axis1_spec,
             const std::string& axis2_spec, std::string* out) {
    const ResolvedParams pf = load_and_validate(common);
    const ScanAxis axis1 = parse_axis(axis1_spec);
    const ScanAxis axis2 = parse_axis(axis2_spec);
    const ScanResult result = scan_plane(pf.kind, pf.params, axis1, axis2);
    const Topology topo = build_topology(pf.kind);

    // Stable column order: cycles as listed by the topology, then the union
    // of sign keys in alphabetical order.
    std::vector<std::string> sign_keys;
    if (!result.cells.empty())
        for (const auto& c : result.cells.front().cycles)
            for (const auto& [k, v] : c.signs)
                if (std::find(sign_keys.begin(), sign_keys.end(), k) == sign_keys.end())
                    sign_keys.push_back(k);
    std::sort(sign_keys.begin(), sign_keys.end());

    std::ostringstream os;
    os << csv_header("scan", pf, {{"axis1", axis1_spec}, {"axis2", axis2_spec}});
    os << axis1.key << "," << axis2.key;
    for (const auto& cyc : topo.cycles) os << ",verdict_" << cyc.name;
    for (const auto& k : sign_keys) os << "," << k;
    os << "\n";
    for (const auto& cell : result.cells) {
        os << fmt(cell.x) << "," << fmt(cell.y);
        for (const auto& c : cell.cycles) os << "," << verdict_name(c.verdict);
        std::map<std::string, double> merged;
        for (const auto& c : cell.cycles) merged.insert(c.signs.begin(), c.signs.end());
        for (const auto& k : sign_keys) {
            os << ",";
            if (auto it = merged.find(k); it != merged.end()) os << fmt(it->second);
        }
        os << "\n";
    }
    write_output(common.out_path, os.str(), out);
    return 0;
}

int run_simulate(const CommonOpts& common, const std::string& x0_spec, double theta0,
                 bool has_theta0, double t_end, const std::string& coords_name, double eta,
                 int stride, const SeedOptions& seed, std::string* out) {
    const ResolvedParams pf = load_and_validate(common);
    if (stride < 1) throw std::runtime_error("--stride must be >= 1");
    Coordinates coords = Coordinates::Logarithmic;
    if (coords_name == "orig")
        coords = Coordinates::Original;
    else if (coords_name != "log")
        throw std::runtime_error("--coords must be orig or log");

    State4 x0{};
    if (has_theta0) {
        x0 = seed_state(pf.kind, pf.params, theta0, seed);
        if (coords == Coordinates::Original)
            for (auto& v : x0) v = std::exp(v);
    } else if (!x0_spec.empty()) {
        std::istringstream is(x0_spec);
        std::string tok;
        int idx = 0;
        while (std::getline(is, tok, ',') && idx < 4) x0[idx++] = std::stod(tok);
        if (idx != 4) throw std::runtime_error("--x0 expects four comma-separated values");
    } else {
        throw std::runtime_error("simulate needs --x0 or --theta0");
    }

    OdeSystem system{pf.kind, pf.params, coords};
    IntegratorOptions opts;
    opts.dwell_eta = eta;
    const Trajectory traj = integrate(system, x0, t_end, opts);

    std::ostringstream os;
    os << csv_header("simulate", pf,
                     {{"coords", coords_name},
                      {"t_end", fmt(t_end)},
                      {"eta", fmt(eta)},
                      {"x0", fmt(x0[0]) + " " + fmt(x0[1]) + " " + fmt(x0[2]) + " " + fmt(x0[3])},
                      {"truncated", traj.truncated ? "true" : "false"}});
    const char* name = coords == Coordinates::Original ? "x" : "X";
    os << "t," << name << "1," << name << "2," << name << "3," << name << "4,dwell_label\n";
    size_t visit_idx = 0;
    for (size_t i = 0; i < traj.times.size(); i += static_cast<size_t>(stride)) {
        const double t = traj.times[i];
        while (visit_idx < traj.visits.size() && traj.visits[visit_idx].t_exit < t) ++visit_idx;
        int label = 0;
        if (visit_idx < traj.visits.size() && traj.visits[visit_idx].t_entry <= t) {
            label = traj.visits[visit_idx].label;
        }
        os << fmt(t);
        for (double v : traj.states[i]) os << "," << fmt(v);
        os << "," << label << "\n";
    }
    write_output(common.out_path, os.str(), out);
    return 0;
}

int run_verify(const CommonOpts& common, double theta0, int horizon, const SeedOptions& seed,
               std::string* out) {
    const ResolvedParams pf = load_and_validate(common);
    CompareOptions copts;
    copts.seed = seed;
    const AgreementReport rep =
        compare_prediction_theta(pf.kind, pf.params, theta0, horizon, copts);

    json j;
    j["config"] = config_json("verify", pf);
    j["seed_theta0"] = theta0;
    j["horizon_symbols"] = horizon;
    j["no_section_hit"] = rep.no_section_hit;
    if (!rep.no_section_hit) {
        j["theta0_observed"] = rep.theta0;
        j["map_blocks"] = rep.map_blocks;
        j["ode_blocks"] = rep.ode_blocks;
        j["ode_thetas"] = rep.ode_thetas;
        j["ode_symbols"] = rep.ode_symbols;
        j["first_disagreement"] = rep.first_disagreement;
        j["root_match"] = rep.root_match;
        j["structure_match"] = rep.structure_match;
        j["agree"] = rep.agree;
    }
    write_output(common.out_path, j.dump(2) + "\n", out);
    return rep.no_section_hit ? 1 : 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::string* out, std::string* err) {
    CLI::App app{"heteronet: transition matrices, projected maps, and trajectory analysis "
                 "for heteroclinic networks of four equilibria"};
    app.set_version_flag("--version", std::string("heteronet ") + kVersion);

    CommonOpts common;
    int map_samples = 1000;
    double theta0 = -0.5;
    int cobweb_steps = 10'000;
    std::string path_spec;
    int bif_samples = 400;
    std::string axis1_spec, axis2_spec;
    std::string x0_spec, coords_name = "log";
    double t_end = 100.0, eta = 0.1;
    int stride = 1, horizon = 60;
    SeedOptions seed;

    auto add_common = [&common](CLI::App* sub) {
        sub->add_option("--params", common.params_path, "parameter file (key = value lines)")
            ->required();
        sub->add_option("--network", common.network_name,
                        "kirk_silber | delta_clique | tournament (overrides the file key)");
        sub->add_option("--out", common.out_path, "output path (default: stdout)");
    };

    CLI::App* c_matrices = app.add_subcommand("matrices", "dump transition matrices and scalars as JSON");
    add_common(c_matrices);

    CLI::App* c_map = app.add_subcommand("map", "sample the projected map on a grid (CSV)");
    add_common(c_map);
    c_map->add_option("--samples", map_samples, "grid resolution");

    CLI::App* c_cobweb = app.add_subcommand("cobweb", "iterate the projected map from theta0 (CSV)");
    add_common(c_cobweb);
    c_cobweb->add_option("--theta0", theta0, "initial point in (-1,0)")->required();
    c_cobweb->add_option("--steps", cobweb_steps, "maximum iterations");

    CLI::App* c_fp = app.add_subcommand("fixed-points", "fixed points, admissibility, continuity (JSON)");
    add_common(c_fp);

    CLI::App* c_bif = app.add_subcommand("bifurcations", "locate bifurcations along a parameter path (JSON)");
    add_common(c_bif);
    c_bif->add_option("--path", path_spec, "key:lo:hi parameter path")->required();
    c_bif->add_option("--samples", bif_samples, "bracketing samples");

    CLI::App* c_scan = app.add_subcommand("scan", "classify cycles over a parameter plane (CSV)");
    add_common(c_scan);
    c_scan->add_option("--axis1", axis1_spec, "key:lo:hi:steps")->required();
    c_scan->add_option("--axis2", axis2_spec, "key:lo:hi:steps")->required();

    CLI::App* c_sim = app.add_subcommand("simulate", "integrate the ODE system (CSV)");
    add_common(c_sim);
    c_sim->add_option("--x0", x0_spec, "initial state: four comma-separated values");
    CLI::Option* sim_theta = c_sim->add_option("--theta0", theta0, "seed on the xi2 incoming region");
    c_sim->add_option("--t-end", t_end, "integration time");
    c_sim->add_option("--coords", coords_name, "orig | log");
    c_sim->add_option("--eta", eta, "dwell region size");
    c_sim->add_option("--stride", stride, "record every n-th step");
    c_sim->add_option("--depth", seed.min_depth, "minimum seeding depth for --theta0");
    c_sim->add_option("--eps", seed.eps, "excluded-cusp parameter for --theta0");

    CLI::App* c_verify = app.add_subcommand("verify", "compare ODE itinerary against the projected map (JSON)");
    add_common(c_verify);
    c_verify->add_option("--theta0", theta0, "seed on the xi2 incoming region")->required();
    c_verify->add_option("--horizon", horizon, "symbols to observe");
    c_verify->add_option("--depth", seed.min_depth, "minimum seeding depth");
    c_verify->add_option("--eps", seed.eps, "excluded-cusp parameter");

    app.require_subcommand(1);

    std::vector<std::string> argv_like = args;
    std::vector<const char*> argv;
    argv.push_back("heteronet");
    for (const auto& a : argv_like) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help / --version exit through CLI11's ParseError path.
            const std::string text =
                std::string(e.get_name()) == "CallForVersion" ? app.version() + "\n" : app.help();
            if (out)
                *out += text;
            else
                std::cout << text;
            return 0;
        }
        if (err)
            *err += std::string("{\"error\": \"usage\", \"detail\": \"") + e.what() + "\"}\n";
        else
            std::cerr << "{\"error\": \"usage\", \"detail\": \"" << e.what() << "\"}\n";
        return e.get_exit_code();
    }

    try {
        if (c_matrices->parsed()) return run_matrices(common, out);
        if (c_map->parsed()) return run_map(common, map_samples, out);
        if (c_cobweb->parsed()) return run_cobweb(common, theta0, cobweb_steps, out);
        if (c_fp->parsed()) return run_fixed_points(common, out);
        if (c_bif->parsed()) return run_bifurcations(common, path_spec, bif_samples, out);
        if (c_scan->parsed()) return run_scan(common, axis1_spec, axis2_spec, out);
        if (c_sim->parsed())
            return run_simulate(common, x0_spec, theta0, !sim_theta->empty(), t_end, coords_name,
                                eta, stride, seed, out);
        if (c_verify->parsed()) return run_verify(common, theta0, horizon, seed, out);
    } catch (const std::exception& e) {
        json j;
        j["error"] = "runtime";
        j["detail"] = e.what();
        if (err)
            *err += j.dump() + "\n";
        else
            std::cerr << j.dump() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace heteronet::cli
