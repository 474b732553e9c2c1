// Copyright 2026 The cvmdi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvmdi/gaussian.h"

#include <gtest/gtest.h>

#include <array>
#include <sstream>

#include "test_util.h"

using namespace cvmdi;
using namespace cvmdi::testing;

namespace {

std::vector<std::string> mode_list(std::initializer_list<const char *> names) {
    return {names.begin(), names.end()};
}

}  // namespace

TEST(covariance_matrix, symmetrizes_and_validates) {
    Eigen::MatrixXd m(2, 2);
    m << 2, 0.5, 0.5 + 1e-13, 2;
    CovarianceMatrix c(m, {"a"});
    EXPECT_EQ(c.matrix()(0, 1), c.matrix()(1, 0));

    EXPECT_ERROR_KIND(CovarianceMatrix(Eigen::MatrixXd::Identity(3, 3), {"a"}), ErrorKind::InvalidArgument);
    EXPECT_ERROR_KIND(CovarianceMatrix(Eigen::MatrixXd::Identity(4, 4), {"a", "a"}), ErrorKind::InvalidArgument);
    EXPECT_ERROR_KIND(CovarianceMatrix(Eigen::MatrixXd::Identity(4, 4), {"a"}), ErrorKind::InvalidArgument);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
    bad(0, 0) = NAN;
    EXPECT_ERROR_KIND(CovarianceMatrix(bad, {"a"}), ErrorKind::InvalidArgument);
}

TEST(covariance_matrix, lookup) {
    auto c = tmss_cov(3, "A", "B");
    EXPECT_EQ(c.mode_index("B"), 1u);
    EXPECT_EQ(c.quadrature_index(P("B")), 3u);
    EXPECT_DOUBLE_EQ(c.variance(X("A")), 3);
    EXPECT_DOUBLE_EQ(c.covariance(P("A"), P("B")), -std::sqrt(8.0));
    EXPECT_FALSE(c.find_mode("C").has_value());
    EXPECT_ERROR_KIND(c.mode_index("C"), ErrorKind::InvalidArgument);
    EXPECT_EQ(to_string(X("A1")), "X_A1");
}

TEST(tmss_cov, blocks) {
    EXPECT_TRUE(tmss_cov(1).matrix().isApprox(Eigen::MatrixXd::Identity(4, 4)));

    auto c = tmss_cov(10).matrix();
    double s = std::sqrt(99.0);
    Eigen::MatrixXd expected(4, 4);
    expected << 10, 0, s, 0,  //
        0, 10, 0, -s,         //
        s, 0, 10, 0,          //
        0, -s, 0, 10;
    EXPECT_LT((c - expected).cwiseAbs().maxCoeff(), 1e-12);

    auto nu = symplectic_eigenvalues(tmss_cov(2)).values;
    ASSERT_EQ(nu.size(), 2u);
    EXPECT_NEAR(nu[0], 1, 1e-12);
    EXPECT_NEAR(nu[1], 1, 1e-12);

    EXPECT_ERROR_KIND(tmss_cov(0.99), ErrorKind::InvalidParameter);
}

TEST(tensor, block_diagonal) {
    auto a = CovarianceMatrix::vacuum({"a", "b"});
    auto b = CovarianceMatrix::vacuum({"c", "d"});
    auto t = tensor(a, b);
    EXPECT_TRUE(t.matrix().isApprox(Eigen::MatrixXd::Identity(8, 8)));
    EXPECT_EQ(t.labels(), mode_list({"a", "b", "c", "d"}));

    auto big = tensor(tmss_cov(2, "x", "y"), tensor(tmss_cov(3, "z", "w"), thermal_cov(2, "u")));
    EXPECT_EQ(big.num_modes(), 5u);
    EXPECT_DOUBLE_EQ(big.variance(X("u")), 2);
    EXPECT_DOUBLE_EQ(big.covariance(X("x"), X("z")), 0);

    EXPECT_ERROR_KIND(tensor(a, a), ErrorKind::InvalidArgument);
}

TEST(beamsplitter, identity_and_half) {
    EXPECT_TRUE(beamsplitter(3, 0, 2, 1).matrix().isApprox(Eigen::MatrixXd::Identity(6, 6)));

    auto s = beamsplitter(2, 0, 1, 0.5).matrix();
    double r = 1 / std::sqrt(2.0);
    Eigen::MatrixXd expected(4, 4);
    expected << r, 0, r, 0,  //
        0, r, 0, r,          //
        -r, 0, r, 0,         //
        0, -r, 0, r;
    EXPECT_LT((s - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(beamsplitter, symplectic_and_errors) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 50; k++) {
        std::size_t i = k % 4, j = (i + 1 + k % 3) % 4;
        EXPECT_LT(beamsplitter(4, i, j, u(rng)).symplectic_defect(), 1e-10);
    }
    EXPECT_ERROR_KIND(beamsplitter(2, 0, 1, 1.01), ErrorKind::InvalidParameter);
    EXPECT_ERROR_KIND(beamsplitter(2, 0, 1, -0.01), ErrorKind::InvalidParameter);
    EXPECT_ERROR_KIND(beamsplitter(2, 1, 1, 0.5), ErrorKind::InvalidArgument);
    EXPECT_ERROR_KIND(beamsplitter(2, 0, 2, 0.5), ErrorKind::InvalidArgument);
    EXPECT_ERROR_KIND(SymplecticTransform(squeezer(1, 0, 0.3) * 2.0), ErrorKind::InvalidArgument);
}

TEST(apply_symplectic, half_beamsplitter_on_tmss_arm) {
    for (double v : {1.0, 2.0, 10.0, 37.5}) {
        auto cov = tensor(tmss_cov(v, "a", "b"), CovarianceMatrix::vacuum({"c"}));
        auto out = apply_symplectic(cov, beamsplitter(3, 1, 2, 0.5));
        EXPECT_NEAR(out.variance(X("b")), (v + 1) / 2, 1e-12);
        EXPECT_NEAR(out.variance(P("c")), (v + 1) / 2, 1e-12);
        EXPECT_NEAR(out.covariance(X("a"), X("b")), std::sqrt((v * v - 1) / 2), 1e-12);
    }
    auto cov = tmss_cov(4);
    EXPECT_TRUE(apply_symplectic(cov, SymplecticTransform::identity(2)).matrix().isApprox(cov.matrix()));
    EXPECT_ERROR_KIND(apply_symplectic(cov, SymplecticTransform::identity(3)), ErrorKind::InvalidArgument);
}

TEST(permute_modes, swap_is_involution) {
    std::mt19937_64 rng(5);
    auto cov = random_state(random_spectrum(3, rng), rng);
    auto swapped = permute_modes(cov, mode_list({"m2", "m1", "m0"}));
    EXPECT_EQ(swapped.labels(), mode_list({"m2", "m1", "m0"}));
    EXPECT_DOUBLE_EQ(swapped.covariance(X("m0"), P("m2")), cov.covariance(X("m0"), P("m2")));
    auto back = permute_modes(swapped, mode_list({"m0", "m1", "m2"}));
    EXPECT_EQ(back.matrix(), cov.matrix());
    auto a = symplectic_eigenvalues(cov).values;
    auto b = symplectic_eigenvalues(swapped).values;
    for (std::size_t k = 0; k < a.size(); k++) {
        EXPECT_NEAR(a[k], b[k], 1e-9);
    }
    EXPECT_ERROR_KIND(permute_modes(cov, mode_list({"m0", "m1"})), ErrorKind::InvalidArgument);
    EXPECT_ERROR_KIND(permute_modes(cov, mode_list({"m0", "m0", "m1"})), ErrorKind::InvalidArgument);
    EXPECT_ERROR_KIND(permute_modes(cov, mode_list({"m0", "m1", "zz"})), ErrorKind::InvalidArgument);
}

TEST(condition_on_homodyne, examples) {
    auto vac = condition_on_homodyne(CovarianceMatrix::vacuum({"a", "b"}), X("b"));
    EXPECT_TRUE(vac.matrix().isApprox(Eigen::MatrixXd::Identity(2, 2)));
    EXPECT_EQ(vac.labels(), mode_list({"a"}));

    auto c = condition_on_homodyne(tmss_cov(2), X("2")).matrix();
    EXPECT_NEAR(c(0, 0), 0.5, 1e-14);
    EXPECT_NEAR(c(1, 1), 2, 1e-14);
    EXPECT_NEAR(c(0, 1), 0, 1e-14);

    // V - (V^2 - 1) / V = 1 / V for every TMSS.
    for (double v : {1.5, 10.0, 1000.0}) {
        EXPECT_NEAR(condition_on_homodyne(tmss_cov(v), P("1")).variance(P("2")), 1 / v, 1e-12 * v);
    }
}

TEST(condition_on_homodyne, errors) {
    auto cov = tmss_cov(2, "a", "b");
    EXPECT_ERROR_KIND(condition_on_homodyne(cov, X("c")), ErrorKind::InvalidArgument);
    std::array<MeasurementSpec, 2> both{X("a"), P("b")};
    EXPECT_ERROR_KIND(condition_on_homodyne(cov, both), ErrorKind::InvalidArgument);
    std::array<MeasurementSpec, 2> dup{X("a"), P("a")};
    EXPECT_ERROR_KIND(condition_on_homodyne(tensor(cov, thermal_cov(2, "c")), dup), ErrorKind::InvalidArgument);

    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
    m(0, 0) = 1e-13;
    EXPECT_ERROR_KIND(condition_on_homodyne(CovarianceMatrix(m, {"a", "b"}), X("a")),
                      ErrorKind::DegenerateMeasurement);
}

TEST(condition_on_homodyne, order_independence) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; trial++) {
        auto cov = random_state(random_spectrum(4, rng), rng);
        std::array<MeasurementSpec, 3> joint{X("m1"), P("m3"), X("m0")};
        auto j = condition_on_homodyne(cov, joint);
        auto s1 = condition_on_homodyne(condition_on_homodyne(condition_on_homodyne(cov, P("m3")), X("m0")), X("m1"));
        EXPECT_LT((j.matrix() - s1.matrix()).cwiseAbs().maxCoeff(), 1e-9 * j.matrix().cwiseAbs().maxCoeff());
        EXPECT_EQ(j.labels(), mode_list({"m2"}));
    }
}

TEST(condition_on_homodyne, preserves_physicality_and_shrinks_variance) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; trial++) {
        auto cov = random_state(random_spectrum(3, rng), rng);
        auto m = trial % 2 ? X("m" + std::to_string(trial % 3)) : P("m" + std::to_string(trial % 3));
        auto out = condition_on_homodyne(cov, m);
        EXPECT_TRUE(is_bona_fide(out));
        for (const auto &label : out.labels()) {
            EXPECT_LE(out.variance(X(label)), cov.variance(X(label)) + 1e-12);
            EXPECT_LE(out.variance(P(label)), cov.variance(P(label)) + 1e-12);
        }
    }
}

TEST(symplectic_eigenvalues, examples) {
    Eigen::MatrixXd thermal = 2 * Eigen::MatrixXd::Identity(2, 2);
    EXPECT_NEAR(symplectic_eigenvalues(thermal).min(), 2, 1e-14);
    Eigen::MatrixXd sq(2, 2);
    sq << 0.5, 0, 0, 2;
    EXPECT_NEAR(symplectic_eigenvalues(sq).min(), 1, 1e-14);
    for (double v : {1.0, 1.0001, 3.0, 1e4}) {
        for (double nu : symplectic_eigenvalues(tmss_cov(v)).values) {
            EXPECT_NEAR(nu, 1, 1e-8);
        }
    }
}

TEST(symplectic_eigenvalues, matches_complex_oracle) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; trial++) {
        auto nus = random_spectrum(1 + trial % 5, rng);
        auto cov = random_state(nus, rng);
        auto got = symplectic_eigenvalues(cov).values;
        auto want = spectrum_oracle(cov.matrix());
        std::sort(nus.begin(), nus.end());
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t k = 0; k < got.size(); k++) {
            EXPECT_NEAR(got[k], want[k], 1e-9 * want[k]);
            EXPECT_NEAR(got[k], nus[k], 1e-8 * nus[k]);
        }
    }
}

TEST(symplectic_eigenvalues, invariant_under_symplectic_maps) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; trial++) {
        auto cov = random_state(random_spectrum(4, rng), rng);
        auto s = SymplecticTransform(random_symplectic(4, rng));
        EXPECT_LT(s.symplectic_defect(), 1e-10);
        auto a = symplectic_eigenvalues(cov).values;
        auto b = symplectic_eigenvalues(apply_symplectic(cov, s)).values;
        for (std::size_t k = 0; k < a.size(); k++) {
            EXPECT_NEAR(a[k], b[k], 1e-9 * a[k]);
        }
    }
}

TEST(entropy, examples) {
    EXPECT_EQ(von_neumann_entropy(CovarianceMatrix::vacuum({"a", "b"})), 0);
    EXPECT_NEAR(von_neumann_entropy(thermal_cov(3, "a")), 2.0, 1e-14);
    EXPECT_NEAR(entropy_function(3), 2.0, 1e-14);

    std::array<std::string, 1> arm{"1"};
    double h10 = 5.5 * std::log2(5.5) - 4.5 * std::log2(4.5);
    EXPECT_NEAR(von_neumann_entropy(tmss_cov(10).reduced(arm)), h10, 1e-12);
    EXPECT_NEAR(h10, 3.7622, 5e-5);
}

TEST(entropy, function_matches_direct_formula) {
    for (double x : {1.0 + 1e-7, 1.001, 1.5, 2.0, 7.0, 123.0, 1e6}) {
        EXPECT_NEAR(entropy_function(x), h_oracle(x), 1e-12 * std::max(1.0, h_oracle(x)));
    }
    EXPECT_EQ(entropy_function(1), 0);
    // Near 1 the direct formula loses digits; the series h ~ y(1 - ln y)/ln 2 does not.
    double nu = 1 + 2e-12;
    double y = (nu - 1) / 2;
    EXPECT_NEAR(entropy_function(nu), y * (1 - std::log(y)) / std::log(2.0), 1e-20);
}

TEST(entropy, clamping_window) {
    Eigen::MatrixXd m(2, 2);
    m << 1 - 1e-7, 0, 0, 1 - 1e-7;
    auto r = entropy_detail(CovarianceMatrix(m, {"a"}));
    EXPECT_TRUE(r.clamped);
    EXPECT_EQ(r.bits, 0);

    m << 1 - 1e-10, 0, 0, 1 - 1e-10;
    r = entropy_detail(CovarianceMatrix(m, {"a"}));
    EXPECT_FALSE(r.clamped);
    EXPECT_EQ(r.bits, 0);

    m << 0.9, 0, 0, 0.9;
    EXPECT_ERROR_KIND(von_neumann_entropy(CovarianceMatrix(m, {"a"})), ErrorKind::UnphysicalState);
}

TEST(entropy, pure_states_have_zero_entropy) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; trial++) {
        auto pure = tensor(tmss_cov(1 + trial, "a", "b"), tmss_cov(2 + 0.5 * trial, "c", "d"));
        auto s = SymplecticTransform(random_symplectic(4, rng));
        EXPECT_NEAR(von_neumann_entropy(apply_symplectic(pure, s)), 0, 1e-6);
    }
}

TEST(mutual_info_homodyne, examples) {
    auto cov = tensor(tmss_cov(2, "a", "b"), thermal_cov(5, "c"));
    std::array<MeasurementSpec, 1> by_b{X("b")};
    EXPECT_NEAR(mutual_info_homodyne(cov, X("a"), by_b), 1.0, 1e-12);
    std::array<MeasurementSpec, 2> by_bc{X("b"), P("c")};
    EXPECT_NEAR(mutual_info_homodyne(cov, X("a"), by_bc), 1.0, 1e-12);
    std::array<MeasurementSpec, 1> by_c{X("c")};
    EXPECT_NEAR(mutual_info_homodyne(cov, X("a"), by_c), 0, 1e-15);

    // I = 0.5 log2(V / (1/V)) = log2 V for any TMSS.
    for (double v : {1.5, 10.0, 300.0}) {
        std::array<MeasurementSpec, 1> m{P("2")};
        EXPECT_NEAR(mutual_info_homodyne(tmss_cov(v), P("1"), m), std::log2(v), 1e-9);
    }

    std::array<MeasurementSpec, 1> self{X("a")};
    EXPECT_ERROR_KIND(mutual_info_homodyne(cov, X("a"), self), ErrorKind::InvalidArgument);
    std::array<MeasurementSpec, 1> same_mode{P("a")};
    EXPECT_ERROR_KIND(mutual_info_homodyne(cov, X("a"), same_mode), ErrorKind::InvalidArgument);
}

TEST(bona_fide, examples) {
    EXPECT_TRUE(is_bona_fide(CovarianceMatrix::vacuum({"a"})));
    Eigen::MatrixXd m(2, 2);
    m << 0.4, 0, 0, 2;
    EXPECT_FALSE(is_bona_fide(CovarianceMatrix(m, {"a"})));
    EXPECT_NEAR(bona_fide_margin(m), std::sqrt(0.8) - 1, 1e-14);
    EXPECT_TRUE(is_bona_fide(tmss_cov(5)));

    // Indefinite matrices are rejected even when |i Omega V| looks fine.
    m << -2, 0, 0, -2;
    EXPECT_FALSE(is_bona_fide(CovarianceMatrix(m, {"a"})));
}

TEST(ppt_entangled, examples) {
    std::array<std::string, 1> one{"1"};
    EXPECT_TRUE(ppt_entangled(tmss_cov(2), one));
    EXPECT_FALSE(ppt_entangled(tmss_cov(1), one));

    auto product = tensor(thermal_cov(2, "1"), thermal_cov(3, "2"));
    EXPECT_FALSE(ppt_entangled(product, one));

    Eigen::MatrixXd m = 2 * Eigen::MatrixXd::Identity(4, 4);
    m(0, 2) = m(2, 0) = 1.5;
    m(1, 3) = m(3, 1) = -1.5;
    CovarianceMatrix st(m, {"1", "2"});
    ASSERT_TRUE(is_bona_fide(st));
    EXPECT_TRUE(ppt_entangled(st, one));
    EXPECT_NEAR(symplectic_eigenvalues(partial_transpose(st, one)).min(), 0.5, 1e-12);

    std::array<std::string, 2> all{"1", "2"};
    std::array<std::string, 0> none{};
    EXPECT_ERROR_KIND(ppt_entangled(st, all), ErrorKind::InvalidArgument);
    EXPECT_ERROR_KIND(ppt_entangled(st, none), ErrorKind::InvalidArgument);
}

TEST(ppt_entangled, pure_entangled_states) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 20; trial++) {
        // 1|2 split of a TMSS arm mixed with vacuum: pure and entangled across a|(b,c).
        auto cov = tensor(tmss_cov(1.5 + trial, "a", "b"), CovarianceMatrix::vacuum({"c"}));
        cov = apply_symplectic(cov, beamsplitter(3, 1, 2, u(rng)));
        std::array<std::string, 1> a{"a"};
        std::array<std::string, 2> bc{"b", "c"};
        EXPECT_TRUE(ppt_entangled(cov, a));
        EXPECT_TRUE(ppt_entangled(cov, bc));
        EXPECT_TRUE(ppt_entangled(cov.reduced(mode_list({"a", "b"})), a));
    }
}

TEST(write_csv, full_precision) {
    Eigen::MatrixXd m(2, 2);
    m << 1.0 / 3.0, 2, -0.1, 1e-20;
    std::ostringstream out;
    write_csv(out, m);
    std::istringstream in(out.str());
    std::string row0, row1;
    std::getline(in, row0);
    std::getline(in, row1);
    EXPECT_EQ(std::stod(row0.substr(0, row0.find(','))), 1.0 / 3.0);
    EXPECT_EQ(row1.substr(row1.find(',') + 1), "1e-20");
}
