#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "heteronet/transition.hpp"
#include "support.hpp"

using namespace heteronet;
using testsupport::all_ones;
using testsupport::random_params;

namespace {

void check_matrix(const Matrix& got, std::initializer_list<std::initializer_list<double>> want,
                  double tol = 1e-15) {
    const Matrix w(want);
    REQUIRE(got.size() == w.size());
    for (int r = 0; r < w.size(); ++r)
        for (int c = 0; c < w.size(); ++c)
            CHECK(got(r, c) == doctest::Approx(w(r, c)).epsilon(tol));
}

}  // namespace

TEST_CASE("basic matrices match the published Kirk-Silber list") {
    ParamSet p = all_ones(NetworkKind::KirkSilber);
    p["c_21"] = 2.0;
    p["e_23"] = 4.0;
    p["e_24"] = 3.0;
    // m_123 = [[c21/e23, 0], [-e24/e23, 1]]
    check_matrix(basic_matrix(NetworkKind::KirkSilber, 1, 2, 3, p).mat,
                 {{0.5, 0.0}, {-0.75, 1.0}});
    // m_124 = [[0, c21/e24], [1, -e23/e24]]
    check_matrix(basic_matrix(NetworkKind::KirkSilber, 1, 2, 4, p).mat,
                 {{0.0, 2.0 / 3.0}, {1.0, -4.0 / 3.0}});
    p = all_ones(NetworkKind::KirkSilber);
    // m_231 with unit parameters = [[1,0],[1,1]]
    check_matrix(basic_matrix(NetworkKind::KirkSilber, 2, 3, 1, p).mat, {{1.0, 0.0}, {1.0, 1.0}});
    CHECK(basic_matrix(NetworkKind::KirkSilber, 2, 3, 1, p).tag == "m_231");
}

TEST_CASE("basic matrices match the published delta-clique list") {
    ParamSet p = all_ones(NetworkKind::DeltaClique);
    p["t_31"] = 0.5;
    p["e_34"] = 2.0;
    p["c_32"] = 3.0;
    // m_234 = [[1, t31/e34], [0, c32/e34]]
    check_matrix(basic_matrix(NetworkKind::DeltaClique, 2, 3, 4, p).mat,
                 {{1.0, 0.25}, {0.0, 1.5}});
    // m_341 = [[c42/e41, 1], [c43/e41, 0]]
    p = all_ones(NetworkKind::DeltaClique);
    p["c_42"] = 2.0;
    p["c_43"] = 3.0;
    check_matrix(basic_matrix(NetworkKind::DeltaClique, 3, 4, 1, p).mat,
                 {{2.0, 1.0}, {3.0, 0.0}});
}

TEST_CASE("basic matrix rejects non-edge triples") {
    const ParamSet p = all_ones(NetworkKind::KirkSilber);
    CHECK_THROWS_AS(basic_matrix(NetworkKind::KirkSilber, 1, 3, 2, p), std::invalid_argument);
    CHECK_THROWS_AS(basic_matrix(NetworkKind::KirkSilber, 2, 3, 4, p), std::invalid_argument);
    CHECK_NOTHROW(basic_matrix(NetworkKind::Tournament, 2, 3, 4, all_ones(NetworkKind::Tournament)));
}

TEST_CASE("full matrix: Kirk-Silber shape laws") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 50; ++trial) {
        const ParamSet p = random_params(NetworkKind::KirkSilber, gen);
        const auto s = testsupport::ks_closed_forms(p);

        const Matrix M3 = full_matrix(NetworkKind::KirkSilber, "C3", 2, p).mat;
        CHECK(M3(0, 0) == doctest::Approx(s.delta3).epsilon(1e-12));
        CHECK(M3(0, 1) == 0.0);
        CHECK(M3(1, 0) == doctest::Approx(s.rho3).epsilon(1e-12));
        CHECK(M3(1, 1) == 1.0);

        const Matrix M4 = full_matrix(NetworkKind::KirkSilber, "C4", 2, p).mat;
        CHECK(M4(0, 0) == 1.0);
        CHECK(M4(0, 1) == doctest::Approx(s.rho4).epsilon(1e-12));
        CHECK(M4(1, 0) == 0.0);
        CHECK(M4(1, 1) == doctest::Approx(s.delta4).epsilon(1e-12));

        const Matrix M33 = full_matrix(NetworkKind::KirkSilber, "C3", 3, p).mat;
        CHECK(M33(1, 0) == doctest::Approx(s.nu3).epsilon(1e-12));
        const Matrix M44 = full_matrix(NetworkKind::KirkSilber, "C4", 4, p).mat;
        CHECK(M44(1, 0) == doctest::Approx(s.nu4).epsilon(1e-12));
    }
}

TEST_CASE("full matrix with unit Kirk-Silber parameters") {
    const ParamSet p = all_ones(NetworkKind::KirkSilber);
    check_matrix(full_matrix(NetworkKind::KirkSilber, "C3", 2, p).mat, {{1, 0}, {1, 1}});
    CHECK(full_matrix(NetworkKind::KirkSilber, "C3", 2, p).tag == "M_2^(3)");
    CHECK_THROWS_AS(full_matrix(NetworkKind::KirkSilber, "C3", 4, p), std::invalid_argument);
    CHECK_THROWS_AS(full_matrix(NetworkKind::KirkSilber, "C34", 2, p), std::invalid_argument);
}

TEST_CASE("full matrix: delta-clique C34 entries equal the alpha closed forms") {
    std::mt19937_64 gen(12);
    for (int trial = 0; trial < 50; ++trial) {
        const ParamSet p = random_params(NetworkKind::DeltaClique, gen);
        const auto s = testsupport::delta_clique_closed_forms(p);
        const Matrix M = full_matrix(NetworkKind::DeltaClique, "C34", 2, p).mat;
        CHECK(M(0, 0) == doctest::Approx(s.a1).epsilon(1e-12));
        CHECK(M(0, 1) == doctest::Approx(s.a2).epsilon(1e-12));
        CHECK(M(1, 0) == doctest::Approx(s.a3).epsilon(1e-12));
        CHECK(M(1, 1) == doctest::Approx(s.a4).epsilon(1e-12));
    }
}

TEST_CASE("full matrix: tournament C34 entries equal the alpha closed forms") {
    std::mt19937_64 gen(13);
    for (int trial = 0; trial < 50; ++trial) {
        const ParamSet p = random_params(NetworkKind::Tournament, gen);
        const auto s = testsupport::tournament_closed_forms(p);
        const Matrix M = full_matrix(NetworkKind::Tournament, "C34", 2, p).mat;
        CHECK(M(0, 0) == doctest::Approx(s.a1).epsilon(1e-12));
        CHECK(M(0, 1) == doctest::Approx(s.a2).epsilon(1e-12));
        CHECK(M(1, 0) == doctest::Approx(s.a3).epsilon(1e-12));
        CHECK(M(1, 1) == doctest::Approx(s.a4).epsilon(1e-12));
    }
}

TEST_CASE("full matrices of a cycle share trace and determinant across bases") {
    std::mt19937_64 gen(14);
    for (auto kind :
         {NetworkKind::KirkSilber, NetworkKind::DeltaClique, NetworkKind::Tournament}) {
        for (int trial = 0; trial < 20; ++trial) {
            const ParamSet p = random_params(kind, gen);
            for (const auto& cyc : build_topology(kind).cycles) {
                const Matrix ref = full_matrix(kind, cyc.name, cyc.order[0], p).mat;
                for (size_t b = 1; b < cyc.order.size(); ++b) {
                    const Matrix M = full_matrix(kind, cyc.name, cyc.order[b], p).mat;
                    CHECK(M.trace() == doctest::Approx(ref.trace()).epsilon(1e-10));
                    CHECK(M.det() == doctest::Approx(ref.det()).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("derived scalars: unit parameters") {
    SUBCASE("Kirk-Silber") {
        const DerivedScalars s =
            derived_scalars(NetworkKind::KirkSilber, all_ones(NetworkKind::KirkSilber));
        CHECK(*s.delta3 == doctest::Approx(1.0));
        CHECK(*s.delta4 == doctest::Approx(1.0));
        CHECK(*s.rho3 == doctest::Approx(1.0));
        CHECK(*s.rho4 == doctest::Approx(1.0));
        CHECK(*s.nu3 == doctest::Approx(1.0));
        CHECK(*s.nu4 == doctest::Approx(1.0));
        CHECK(s.crosscheck_notes.empty());
    }
    SUBCASE("delta-clique") {
        const DerivedScalars s =
            derived_scalars(NetworkKind::DeltaClique, all_ones(NetworkKind::DeltaClique));
        CHECK(*s.alpha2 == doctest::Approx(3.0));
        CHECK(*s.alpha4 == doctest::Approx(2.0));
        CHECK(*s.delta34 == doctest::Approx(1.0));
        CHECK(*s.tau34 == doctest::Approx(*s.alpha1 + *s.alpha4));
        CHECK(s.crosscheck_notes.empty());
    }
}

TEST_CASE("derived scalars: Vieta identities for the C34 eigenvalues") {
    std::mt19937_64 gen(15);
    int with_real = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const ParamSet p = random_params(NetworkKind::DeltaClique, gen);
        const DerivedScalars s = derived_scalars(NetworkKind::DeltaClique, p);
        CHECK(*s.delta34 > 0.0);
        CHECK(*s.delta34 ==
              doctest::Approx(*s.alpha1 * *s.alpha4 - *s.alpha2 * *s.alpha3).epsilon(1e-12));
        if (s.lambda34_plus) {
            ++with_real;
            CHECK(*s.lambda34_plus * *s.lambda34_minus ==
                  doctest::Approx(*s.delta34).epsilon(1e-10));
            CHECK(*s.lambda34_plus + *s.lambda34_minus ==
                  doctest::Approx(*s.tau34).epsilon(1e-10));
        }
    }
    CHECK(with_real > 0);
}

TEST_CASE("derived scalars: closed-form cross-checks stay clean on random parameters") {
    std::mt19937_64 gen(16);
    for (auto kind :
         {NetworkKind::KirkSilber, NetworkKind::DeltaClique, NetworkKind::Tournament}) {
        for (int trial = 0; trial < 50; ++trial) {
            const DerivedScalars s = derived_scalars(kind, random_params(kind, gen));
            CHECK(s.crosscheck_notes.empty());
        }
    }
}

TEST_CASE("general split matrices") {
    SUBCASE("n=4 reduces to the Kirk-Silber pair") {
        ParamSet p{{"c_21", 2.0}, {"e_23", 4.0}, {"e_24", 3.0}};
        const auto [m123, m124] = general_split_matrices(4, p);
        ParamSet ks = all_ones(NetworkKind::KirkSilber);
        ks["c_21"] = 2.0;
        ks["e_23"] = 4.0;
        ks["e_24"] = 3.0;
        CHECK(m123.mat == basic_matrix(NetworkKind::KirkSilber, 1, 2, 3, ks).mat);
        // The generalized matrices keep each coordinate in its slot, so the
        // n=4 m_124 is the Kirk-Silber basic matrix with its rows swapped
        // (the network list orders output coordinates by ascending label).
        const Matrix ks124 = basic_matrix(NetworkKind::KirkSilber, 1, 2, 4, ks).mat;
        const Matrix swapped{{ks124(1, 0), ks124(1, 1)}, {ks124(0, 0), ks124(0, 1)}};
        CHECK(m124.mat == swapped);
    }
    SUBCASE("n=5 with unit parameters") {
        ParamSet p{{"c_21", 1.0}, {"e_23", 1.0}, {"e_24", 1.0}, {"t_25", 1.0}};
        const auto [m123, m124] = general_split_matrices(5, p);
        check_matrix(m123.mat, {{1, 0, 0}, {-1, 1, 0}, {1, 0, 1}});
        check_matrix(m124.mat, {{1, -1, 0}, {0, 1, 0}, {0, 1, 1}});
    }
    SUBCASE("n<4 rejected") {
        ParamSet p{{"c_21", 1.0}, {"e_23", 1.0}, {"e_24", 1.0}};
        CHECK_THROWS_AS(general_split_matrices(3, p), std::invalid_argument);
    }
    SUBCASE("switching-subspace vectors map to a zero entry") {
        std::mt19937_64 gen(17);
        for (int n = 4; n <= 8; ++n) {
            ParamSet p;
            for (const auto& key : general_split_keys(n))
                p[key] = testsupport::log_uniform(gen, 0.3, 3.0);
            const auto [m123, m124] = general_split_matrices(n, p);
            std::vector<double> w(n - 2);
            w[0] = -1.0;
            w[1] = -p["e_24"] / p["e_23"];
            for (int i = 2; i < n - 2; ++i) w[i] = -testsupport::log_uniform(gen, 0.1, 10.0);
            const auto img3 = m123.mat.apply(w);
            const auto img4 = m124.mat.apply(w);
            CHECK(std::abs(img3[1]) <= 1e-14);
            CHECK(std::abs(img4[0]) <= 1e-14);
            // Scaling w preserves the zero pattern.
            for (auto& x : w) x *= 7.0;
            CHECK(std::abs(m123.mat.apply(w)[1]) <= 1e-13);
        }
    }
}

TEST_CASE("2x2 eigen decomposition") {
    SUBCASE("lower-triangular full matrix") {
        const Matrix m{{2.0, 0.0}, {1.0, 1.0}};
        const Eigen2x2 e = eigen_2x2(m);
        REQUIRE(e.real);
        CHECK(e.lambda_max == doctest::Approx(2.0));
        CHECK(e.lambda_min == doctest::Approx(1.0));
        CHECK(e.v_max[1] / e.v_max[0] == doctest::Approx(1.0));  // (delta3-1, rho3) = (1,1)
    }
    SUBCASE("rotation gives a complex pair") {
        const Matrix m{{0.0, -1.0}, {1.0, 0.0}};
        const Eigen2x2 e = eigen_2x2(m);
        CHECK_FALSE(e.real);
        CHECK(e.im == doctest::Approx(1.0));
    }
    SUBCASE("eigen residual on random matrices") {
        std::mt19937_64 gen(18);
        for (int trial = 0; trial < 200; ++trial) {
            Matrix m(2);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) m(r, c) = testsupport::uniform(gen, -3.0, 3.0);
            const Eigen2x2 e = eigen_2x2(m);
            if (!e.real) continue;
            for (auto [lambda, v] : {std::pair{e.lambda_max, e.v_max}, {e.lambda_min, e.v_min}}) {
                const double r0 = m(0, 0) * v[0] + m(0, 1) * v[1] - lambda * v[0];
                const double r1 = m(1, 0) * v[0] + m(1, 1) * v[1] - lambda * v[1];
                const double norm = std::abs(v[0]) + std::abs(v[1]);
                CHECK(std::abs(r0) <= 1e-10 * std::max(1.0, norm * std::abs(lambda)));
                CHECK(std::abs(r1) <= 1e-10 * std::max(1.0, norm * std::abs(lambda)));
            }
        }
    }
}

TEST_CASE("eigenvector law: (delta3-1, rho3) is an eigenvector of M_2^(3)") {
    std::mt19937_64 gen(19);
    for (int trial = 0; trial < 100; ++trial) {
        const ParamSet p = random_params(NetworkKind::KirkSilber, gen);
        const auto s = testsupport::ks_closed_forms(p);
        const Matrix M = full_matrix(NetworkKind::KirkSilber, "C3", 2, p).mat;
        const double w0 = s.delta3 - 1.0, w1 = s.rho3;
        const double r0 = M(0, 0) * w0 + M(0, 1) * w1 - s.delta3 * w0;
        const double r1 = M(1, 0) * w0 + M(1, 1) * w1 - s.delta3 * w1;
        const double norm = std::hypot(w0, w1);
        CHECK(std::hypot(r0, r1) <= 1e-12 * std::max(1.0, norm));
    }
}
