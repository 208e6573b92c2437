#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "heteronet/cli.hpp"
#include "support.hpp"

using json = nlohmann::json;

namespace {

// Writes a parameter file for a regime and returns its path.
std::string write_params(const std::string& network, const heteronet::ParamSet& p,
                         const std::string& name) {
    const std::string path = "cli_test_" + name + ".params";
    std::ofstream f(path);
    f << "network = " << network << "\n";
    for (const auto& [k, v] : p) f << k << " = " << v << "\n";
    return path;
}

int run_cli(const std::vector<std::string>& args, std::string& out, std::string& err) {
    out.clear();
    err.clear();
    return heteronet::cli::run(args, &out, &err);
}

}  // namespace

TEST_CASE("cli: matrices subcommand dumps JSON with scalars") {
    const auto p = testsupport::regime_params("dc_admissible_fold");
    const std::string path = write_params("delta_clique", p, "matrices");
    std::string out, err;
    const int rc = run_cli({"matrices", "--params", path}, out, err);
    REQUIRE(rc == 0);
    const json j = json::parse(out);
    CHECK(j["config"]["network"] == "delta_clique");
    CHECK(j["basic"].contains("m_123"));
    CHECK(j["full"].contains("M_2^(34)"));
    CHECK(j["scalars"].contains("omega34"));
    CHECK(j["scalars"]["omega34"].get<double>() > 0.0);
    CHECK(j["crosscheck_notes"].empty());
    CHECK(j["eigen_classes"]["C34"].contains("xi3"));
    std::remove(path.c_str());
}

TEST_CASE("cli: map and cobweb emit CSV with config headers") {
    const auto p = testsupport::regime_params("ks_fas_c3");
    const std::string path = write_params("kirk_silber", p, "map");
    std::string out, err;
    REQUIRE(run_cli({"map", "--params", path, "--samples", "100"}, out, err) == 0);
    CHECK(out.find("# network = kirk_silber") != std::string::npos);
    CHECK(out.find("theta,f_theta,branch_label") != std::string::npos);
    CHECK(out.find("C3") != std::string::npos);
    CHECK(out.find("C4") != std::string::npos);

    REQUIRE(run_cli({"cobweb", "--params", path, "--theta0", "-0.2", "--steps", "200"}, out, err) ==
            0);
    CHECK(out.find("step,theta,branch_label") != std::string::npos);
    CHECK(out.find("# halt_reason = converged") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("cli: outputs are byte-identical across runs") {
    const auto p = testsupport::regime_params("dc_admissible_fold");
    const std::string path = write_params("delta_clique", p, "determinism");
    std::string out1, out2, err;
    REQUIRE(run_cli({"scan", "--params", path, "--axis1", "c_43:0.5:4:7", "--axis2",
                     "t_13:0.05:1:5"},
                    out1, err) == 0);
    REQUIRE(run_cli({"scan", "--params", path, "--axis1", "c_43:0.5:4:7", "--axis2",
                     "t_13:0.05:1:5"},
                    out2, err) == 0);
    CHECK(out1 == out2);
    CHECK(out1.find("verdict_C34") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("cli: fixed-points and bifurcations JSON") {
    const auto p = testsupport::regime_params("dc_admissible_fold");
    const std::string path = write_params("delta_clique", p, "fp");
    std::string out, err;
    REQUIRE(run_cli({"fixed-points", "--params", path}, out, err) == 0);
    json j = json::parse(out);
    CHECK(j["fixed_points"].size() == 4);
    CHECK(j["continuity"][0]["continuous"].get<bool>());

    REQUIRE(run_cli({"bifurcations", "--params", path, "--path", "c_43:0.5:4", "--samples", "60"},
                    out, err) == 0);
    j = json::parse(out);
    bool fold = false;
    for (const auto& ev : j["events"])
        if (ev["kind"] == "fold") fold = true;
    CHECK(fold);
    std::remove(path.c_str());
}

TEST_CASE("cli: simulate writes trajectory CSV to a file") {
    const auto p = testsupport::regime_params("ks_fas_c3");
    const std::string path = write_params("kirk_silber", p, "sim");
    const std::string out_path = "cli_test_sim.csv";
    std::string out, err;
    REQUIRE(run_cli({"simulate", "--params", path, "--theta0", "-0.2", "--t-end", "50",
                     "--out", out_path},
                    out, err) == 0);
    std::ifstream f(out_path);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string content = ss.str();
    CHECK(content.find("t,X1,X2,X3,X4,dwell_label") != std::string::npos);
    CHECK(content.find("# subcommand = simulate") != std::string::npos);

    // Original coordinates use x-labeled columns.
    REQUIRE(run_cli({"simulate", "--params", path, "--x0", "0.3,0.9,0.2,0.1", "--t-end", "10",
                     "--coords", "orig"},
                    out, err) == 0);
    CHECK(out.find("t,x1,x2,x3,x4,dwell_label") != std::string::npos);
    std::remove(path.c_str());
    std::remove(out_path.c_str());
}

TEST_CASE("cli: verify reports block agreement") {
    const auto p = testsupport::regime_params("ks_fas_c3");
    const std::string path = write_params("kirk_silber", p, "verify");
    std::string out, err;
    REQUIRE(run_cli({"verify", "--params", path, "--theta0", "-0.2", "--horizon", "24"}, out,
                    err) == 0);
    const json j = json::parse(out);
    CHECK(j["agree"].get<bool>());
    CHECK(j["ode_blocks"].size() >= 3);
    std::remove(path.c_str());
}

TEST_CASE("cli: --network flag selects and validates the kind") {
    const auto p = testsupport::regime_params("ks_fas_c3");
    // File without a network key: the flag supplies it.
    const std::string path = "cli_test_flag.params";
    {
        std::ofstream f(path);
        for (const auto& [k, v] : p) f << k << " = " << v << "\n";
    }
    std::string out, err;
    CHECK(run_cli({"matrices", "--params", path}, out, err) == 1);  // no kind anywhere
    REQUIRE(run_cli({"matrices", "--network", "kirk_silber", "--params", path}, out, err) == 0);
    CHECK(json::parse(out)["config"]["network"] == "kirk_silber");
    // Conflicting selectors are rejected.
    {
        std::ofstream f(path, std::ios::app);
        f << "network = tournament\n";
    }
    CHECK(run_cli({"matrices", "--network", "kirk_silber", "--params", path}, out, err) == 1);
    CHECK(err.find("conflicts") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("cli: usage and runtime errors produce machine-readable records") {
    std::string out, err;
    CHECK(run_cli({"nonsense"}, out, err) != 0);
    CHECK(err.find("\"error\"") != std::string::npos);

    // Invalid parameter file -> runtime error record.
    const std::string path = "cli_test_bad.params";
    {
        std::ofstream f(path);
        f << "network = kirk_silber\nc_21 = -1\n";
    }
    CHECK(run_cli({"matrices", "--params", path}, out, err) == 1);
    CHECK(err.find("runtime") != std::string::npos);
    CHECK(err.find("nonpositive") != std::string::npos);
    std::remove(path.c_str());
}
