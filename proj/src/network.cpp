#include "heteronet/network.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace heteronet {

std::string kind_name(NetworkKind kind) {
    switch (kind) {
        case NetworkKind::KirkSilber: return "kirk_silber";
        case NetworkKind::DeltaClique: return "delta_clique";
        case NetworkKind::Tournament: return "tournament";
    }
    return "?";
}

std::optional<NetworkKind> parse_kind(const std::string& name) {
    if (name == "kirk_silber" || name == "ks") return NetworkKind::KirkSilber;
    if (name == "delta_clique" || name == "dc") return NetworkKind::DeltaClique;
    if (name == "tournament" || name == "tn") return NetworkKind::Tournament;
    return std::nullopt;
}

namespace {

struct EigenEntry {
    const char* symbol;
    int sign;
};

// entries[j-1][k-1]: signed eigenvalue of Df(ξ_j) in direction k, i.e. the
// coefficient of x_j^2 in the x_k equation of the vector field.
using EigenTable = std::array<std::array<EigenEntry, 4>, 4>;

constexpr EigenEntry kNone{"", 0};

constexpr EigenTable kKirkSilber{{
    {{kNone, {"e_12", +1}, {"c_13", -1}, {"c_14", -1}}},
    {{{"c_21", -1}, kNone, {"e_23", +1}, {"e_24", +1}}},
    {{{"e_31", +1}, {"c_32", -1}, kNone, {"t_34", -1}}},
    {{{"e_41", +1}, {"c_42", -1}, {"t_43", -1}, kNone}},
}};

constexpr EigenTable kDeltaClique{{
    {{kNone, {"e_12", +1}, {"t_13", -1}, {"c_14", -1}}},
    {{{"c_21", -1}, kNone, {"e_23", +1}, {"e_24", +1}}},
    {{{"t_31", -1}, {"c_32", -1}, kNone, {"e_34", +1}}},
    {{{"e_41", +1}, {"c_42", -1}, {"c_43", -1}, kNone}},
}};

constexpr EigenTable kTournament{{
    {{kNone, {"e_12", +1}, {"c_13", -1}, {"c_14", -1}}},
    {{{"c_21", -1}, kNone, {"e_23", +1}, {"e_24", +1}}},
    {{{"e_31", +1}, {"c_32", -1}, kNone, {"e_34", +1}}},
    {{{"e_41", +1}, {"c_42", -1}, {"c_43", -1}, kNone}},
}};

const EigenTable& table(NetworkKind kind) {
    switch (kind) {
        case NetworkKind::KirkSilber: return kKirkSilber;
        case NetworkKind::DeltaClique: return kDeltaClique;
        case NetworkKind::Tournament: return kTournament;
    }
    throw std::invalid_argument("unknown network kind");
}

const EigenEntry& entry(NetworkKind kind, int at, int dir) {
    if (at < 1 || at > 4 || dir < 1 || dir > 4 || at == dir)
        throw std::invalid_argument("eigenvalue lookup needs distinct labels in 1..4");
    return table(kind)[at - 1][dir - 1];
}

}  // namespace

double param(const ParamSet& p, const std::string& key) {
    auto it = p.find(key);
    if (it == p.end()) throw std::invalid_argument("missing parameter: " + key);
    return it->second;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream os;
    auto emit = [&os](const char* label, const std::vector<std::string>& keys) {
        for (const auto& k : keys) os << label << ": " << k << "; ";
    };
    emit("missing", missing);
    emit("extra", extra);
    emit("nonpositive", nonpositive);
    std::string s = os.str();
    if (s.size() >= 2) s.resize(s.size() - 2);
    return s;
}

bool Cycle::contains(int equilibrium) const {
    return std::find(order.begin(), order.end(), equilibrium) != order.end();
}

int Cycle::predecessor(int equilibrium) const {
    auto it = std::find(order.begin(), order.end(), equilibrium);
    if (it == order.end()) throw std::invalid_argument("equilibrium not in cycle " + name);
    return it == order.begin() ? order.back() : *(it - 1);
}

int Cycle::successor(int equilibrium) const {
    auto it = std::find(order.begin(), order.end(), equilibrium);
    if (it == order.end()) throw std::invalid_argument("equilibrium not in cycle " + name);
    return (it + 1) == order.end() ? order.front() : *(it + 1);
}

bool Topology::has_edge(int from, int to) const {
    return std::find(edges.begin(), edges.end(), Edge{from, to}) != edges.end();
}

const Cycle* Topology::find_cycle(const std::string& name) const {
    for (const auto& c : cycles)
        if (c.name == name) return &c;
    return nullptr;
}

const Cycle& Topology::cycle(const std::string& name) const {
    if (const Cycle* c = find_cycle(name)) return *c;
    throw std::invalid_argument("unknown cycle: " + name);
}

Topology build_topology(NetworkKind kind) {
    Topology t;
    t.kind = kind;
    const Cycle c3{"C3", {1, 2, 3}};
    const Cycle c4{"C4", {1, 2, 4}};
    const Cycle c34{"C34", {1, 2, 3, 4}};
    switch (kind) {
        case NetworkKind::KirkSilber:
            t.edges = {{1, 2}, {2, 3}, {3, 1}, {2, 4}, {4, 1}};
            t.cycles = {c3, c4};
            t.splitting_equilibria = {2};
            break;
        case NetworkKind::DeltaClique:
            t.edges = {{1, 2}, {2, 3}, {2, 4}, {3, 4}, {4, 1}};
            t.cycles = {c4, c34};
            t.splitting_equilibria = {2};
            break;
        case NetworkKind::Tournament:
            t.edges = {{1, 2}, {2, 3}, {3, 1}, {2, 4}, {4, 1}, {3, 4}};
            t.cycles = {c3, c4, c34};
            t.splitting_equilibria = {2, 3};
            break;
    }
    return t;
}

std::vector<std::string> required_param_keys(NetworkKind kind) {
    std::set<std::string> keys;
    const EigenTable& tab = table(kind);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            if (tab[j][k].sign != 0) keys.insert(tab[j][k].symbol);
    return {keys.begin(), keys.end()};
}

ValidationReport validate_params(NetworkKind kind, const ParamSet& p) {
    ValidationReport r;
    auto required = required_param_keys(kind);
    for (const auto& key : required) {
        auto it = p.find(key);
        if (it == p.end())
            r.missing.push_back(key);
        else if (!(it->second > 0.0))
            r.nonpositive.push_back(key);
    }
    for (const auto& [key, value] : p)
        if (std::find(required.begin(), required.end(), key) == required.end())
            r.extra.push_back(key);
    return r;
}

double eigenvalue_at(NetworkKind kind, int at, int dir, const ParamSet& p) {
    const EigenEntry& e = entry(kind, at, dir);
    return e.sign * param(p, e.symbol);
}

std::string eigenvalue_symbol(NetworkKind kind, int at, int dir) {
    return entry(kind, at, dir).symbol;
}

int eigenvalue_sign(NetworkKind kind, int at, int dir) {
    return entry(kind, at, dir).sign;
}

std::string eigen_class_name(EigenClass c) {
    switch (c) {
        case EigenClass::Radial: return "radial";
        case EigenClass::Contracting: return "contracting";
        case EigenClass::Expanding: return "expanding";
        case EigenClass::Transverse: return "transverse";
    }
    return "?";
}

std::vector<ClassifiedEigenvalue> eigen_classes(NetworkKind kind, const std::string& cycle,
                                                int equilibrium, const ParamSet& p) {
    Topology topo = build_topology(kind);
    const Cycle& cyc = topo.cycle(cycle);
    if (!cyc.contains(equilibrium))
        throw std::invalid_argument("equilibrium " + std::to_string(equilibrium) +
                                    " is not part of cycle " + cycle);
    const int pred = cyc.predecessor(equilibrium);
    const int succ = cyc.successor(equilibrium);

    std::vector<ClassifiedEigenvalue> out;
    for (int dir = 1; dir <= 4; ++dir) {
        if (dir == equilibrium) continue;
        ClassifiedEigenvalue ce;
        ce.key = eigenvalue_symbol(kind, equilibrium, dir);
        ce.direction = dir;
        ce.value = eigenvalue_at(kind, equilibrium, dir, p);
        if (dir == pred)
            ce.eigen_class = EigenClass::Contracting;
        else if (dir == succ)
            ce.eigen_class = EigenClass::Expanding;
        else
            ce.eigen_class = EigenClass::Transverse;

        // Globally transverse: transverse with respect to every cycle of
        // the network passing through this equilibrium.
        bool global = true;
        for (const auto& other : topo.cycles) {
            if (!other.contains(equilibrium)) continue;
            if (other.predecessor(equilibrium) == dir || other.successor(equilibrium) == dir) {
                global = false;
                break;
            }
        }
        ce.globally_transverse = global && ce.eigen_class == EigenClass::Transverse;
        out.push_back(std::move(ce));
    }
    return out;
}

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ParamFile parse_param_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::optional<NetworkKind> kind;
    ParamSet params;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("parameter file line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "network") {
            kind = parse_kind(value);
            if (!kind)
                throw std::runtime_error("parameter file line " + std::to_string(lineno) +
                                         ": unknown network '" + value + "'");
            continue;
        }
        size_t consumed = 0;
        double v = 0.0;
        try {
            v = std::stod(value, &consumed);
        } catch (const std::exception&) {
            consumed = 0;
        }
        if (consumed != value.size())
            throw std::runtime_error("parameter file line " + std::to_string(lineno) +
                                     ": bad numeric value '" + value + "'");
        params[key] = v;
    }
    return {kind, std::move(params)};
}

ParamFile load_param_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_param_text(buf.str());
}

}  // namespace heteronet
