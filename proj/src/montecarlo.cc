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

#include "cvmdi/montecarlo.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <map>
#include <ostream>
#include <random>
#include <thread>

#include "cvmdi/error.h"

namespace cvmdi {

namespace {

constexpr std::size_t kBlockShots = 4096;

struct Quad {
    double x = 0;
    double p = 0;
};

// Two-mode squeezed pair drawn from four standard normals:
// x = a z1 +- b z2, p = b z3 -+ a z4 with a^2 + b^2 = V, a^2 - b^2 = sqrt(V^2 - 1).
template <typename Draw>
std::pair<Quad, Quad> draw_tmss(double v, Draw &draw) {
    double c = std::sqrt(v * v - 1);
    double a = std::sqrt(0.5 * (v + c));
    double b = std::sqrt(0.5 * (v - c));
    double z1 = draw(), z2 = draw(), z3 = draw(), z4 = draw();
    return {{a * z1 + b * z2, b * z3 + a * z4}, {a * z1 - b * z2, b * z3 - a * z4}};
}

// In-place two-port mixing with power transmittance t:
// first <- sqrt(t) first + sqrt(1-t) second, second <- -sqrt(1-t) first + sqrt(t) second.
void mix(Quad &first, Quad &second, double t) {
    double s = std::sqrt(t);
    double r = std::sqrt(1 - t);
    Quad a = first;
    Quad b = second;
    first = {s * a.x + r * b.x, s * a.p + r * b.p};
    second = {-r * a.x + s * b.x, -r * a.p + s * b.p};
}

std::vector<std::string> eve_modes(const AttackModel &attack) {
    if (std::holds_alternative<ClonerAttack>(attack)) {
        return {"EA1", "EA2", "EB1", "EB2", "EC1", "EC2"};
    }
    return {"EA1", "EB1", "EC1"};
}

std::vector<std::string> quadrature_columns(std::span<const std::string> modes) {
    std::vector<std::string> cols;
    for (const auto &m : modes) {
        cols.push_back("X_" + m);
        cols.push_back("P_" + m);
    }
    return cols;
}

// Symmetric square root of a positive semidefinite matrix.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd &m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

std::map<std::string, Eigen::Index> column_index(const SampleSet &s) {
    std::map<std::string, Eigen::Index> idx;
    for (std::size_t k = 0; k < s.columns.size(); k++) {
        idx[s.columns[k]] = static_cast<Eigen::Index>(k);
    }
    return idx;
}

}  // namespace

const std::vector<std::string> kDumpColumns{"X_A1", "P_A1", "X_B3", "P_B3", "X_C3", "P_C3", "X_D", "X_E", "P_F"};

DisplacementGains DisplacementGains::shipped() {
    return {-std::sqrt(2.0), -std::sqrt(0.5), -std::sqrt(1.5), std::sqrt(3.0)};
}

DisplacementGains DisplacementGains::none() {
    return {0, 0, 0, 0};
}

SampleSet simulate_samples(const SampleConfig &cfg) {
    if (cfg.n_shots == 0) {
        fail(ErrorKind::InvalidParameter, "n_shots must be positive");
    }
    cfg.scenario.validate();
    validate(cfg.attack);

    const double v = cfg.scenario.modulation_variance;
    const double eta[3] = {cfg.scenario.eta_a(), cfg.scenario.eta_b(), cfg.scenario.eta_c()};
    const auto *cloner = std::get_if<ClonerAttack>(&cfg.attack);
    Eigen::MatrixXd eve_root;
    if (!cloner) {
        eve_root = psd_sqrt(eve_cov(std::get<CoherentAttack>(cfg.attack)).matrix());
    }

    std::vector<std::string> modes{"A1", "B3", "C3"};
    auto eve = eve_modes(cfg.attack);
    modes.insert(modes.end(), eve.begin(), eve.end());
    SampleSet out;
    out.columns = quadrature_columns(modes);
    out.columns.insert(out.columns.end(), {"X_D", "X_E", "P_F"});
    const auto n_cols = static_cast<Eigen::Index>(out.columns.size());
    out.data.resize(static_cast<Eigen::Index>(cfg.n_shots), n_cols);

    const DisplacementGains g = cfg.gains;
    auto run_block = [&](std::size_t block) {
        std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                          static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
        std::mt19937_64 engine(seq);
        std::normal_distribution<double> normal;
        auto draw = [&] { return normal(engine); };

        std::size_t begin = block * kBlockShots;
        std::size_t end = std::min(cfg.n_shots, begin + kBlockShots);
        Eigen::VectorXd z(6);
        for (std::size_t shot = begin; shot < end; shot++) {
            Quad kept[3], sent[3], injected[3], stored[3];
            for (int k = 0; k < 3; k++) {
                std::tie(kept[k], sent[k]) = draw_tmss(v, draw);
            }
            if (cloner) {
                const double ve[3] = {cloner->ve_a, cloner->ve_b, cloner->ve_c};
                for (int k = 0; k < 3; k++) {
                    std::tie(injected[k], stored[k]) = draw_tmss(ve[k], draw);
                }
            } else {
                for (int k = 0; k < 6; k++) {
                    z(k) = draw();
                }
                Eigen::VectorXd e = eve_root * z;
                for (int k = 0; k < 3; k++) {
                    injected[k] = {e(2 * k), e(2 * k + 1)};
                }
            }
            for (int k = 0; k < 3; k++) {
                mix(sent[k], injected[k], eta[k]);
            }
            // Relay: A and B on a 50:50 splitter (second output D), then the
            // first output with C on a 2/3 splitter (outputs F, E).
            Quad f = sent[0];
            Quad d = sent[1];
            Quad e = sent[2];
            mix(f, d, 0.5);
            mix(f, e, 2.0 / 3.0);
            double xd = d.x, xe = e.x, pf = f.p;

            Quad a1 = kept[0];
            Quad b3 = kept[1];
            Quad c3 = kept[2];
            b3.x += g.bob_xd * xd;
            c3.x += g.charlie_xd * xd + g.charlie_xe * xe;
            c3.p += g.charlie_pf * pf;

            auto row = out.data.row(static_cast<Eigen::Index>(shot));
            Eigen::Index col = 0;
            for (const Quad &q : {a1, b3, c3}) {
                row(col++) = q.x;
                row(col++) = q.p;
            }
            for (int k = 0; k < 3; k++) {
                row(col++) = injected[k].x;  // Eve's splitter output
                row(col++) = injected[k].p;
                if (cloner) {
                    row(col++) = stored[k].x;
                    row(col++) = stored[k].p;
                }
            }
            row(col++) = xd;
            row(col++) = xe;
            row(col++) = pf;
        }
    };

    std::size_t blocks = (cfg.n_shots + kBlockShots - 1) / kBlockShots;
    unsigned jobs = cfg.jobs ? cfg.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, blocks));
    if (jobs <= 1) {
        for (std::size_t b = 0; b < blocks; b++) {
            run_block(b);
        }
    } else {
        std::vector<std::thread> workers;
        for (unsigned t = 0; t < jobs; t++) {
            workers.emplace_back([&, t] {
                for (std::size_t b = t; b < blocks; b += jobs) {
                    run_block(b);
                }
            });
        }
        for (auto &w : workers) {
            w.join();
        }
    }
    return out;
}

EmpiricalStats stats_from_samples(
    const SampleSet &samples, std::span<const std::string> modes, std::span<const std::string> regressors) {
    auto idx = column_index(samples);
    auto lookup = [&](const std::string &name) {
        auto it = idx.find(name);
        if (it == idx.end()) {
            fail(ErrorKind::InvalidArgument, "no sample column '" + name + "'");
        }
        return it->second;
    };
    std::vector<Eigen::Index> cols;
    for (const auto &c : quadrature_columns(modes)) {
        cols.push_back(lookup(c));
    }
    for (const auto &r : regressors) {
        cols.push_back(lookup(r));
    }
    const auto n = samples.data.rows();
    const auto k = static_cast<Eigen::Index>(regressors.size());
    const auto ny = static_cast<Eigen::Index>(2 * modes.size());
    if (n < k + 3) {
        fail(ErrorKind::InvalidParameter, fmt::format("{} shots are too few for {} regressors", n, k));
    }

    Eigen::MatrixXd z(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); c++) {
        z.col(static_cast<Eigen::Index>(c)) = samples.data.col(cols[c]);
    }
    Eigen::RowVectorXd mean = z.colwise().mean();
    z.rowwise() -= mean;
    Eigen::MatrixXd s = (z.transpose() * z) / static_cast<double>(n - 1);

    Eigen::MatrixXd syy = s.topLeftCorner(ny, ny);
    Eigen::MatrixXd cond = syy;
    if (k > 0) {
        Eigen::MatrixXd srr = s.bottomRightCorner(k, k);
        Eigen::MatrixXd syr = s.topRightCorner(ny, k);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(srr);
        if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0)) {
            fail(ErrorKind::DegenerateMeasurement, "singular empirical covariance of the regressors");
        }
        cond = (syy - syr * ldlt.solve(syr.transpose())) * (static_cast<double>(n - 1) / static_cast<double>(n - 1 - k));
    }
    const double dof = static_cast<double>(n - 1 - k);

    EmpiricalStats stats{
        static_cast<std::size_t>(n), 0, CovarianceMatrix(cond, std::vector<std::string>(modes.begin(), modes.end())),
        Eigen::MatrixXd(ny, ny), {}, {}};
    for (Eigen::Index i = 0; i < ny; i++) {
        for (Eigen::Index j = 0; j < ny; j++) {
            stats.standard_errors(i, j) = std::sqrt((cond(i, i) * cond(j, j) + cond(i, j) * cond(i, j)) / dof);
        }
    }
    const auto &cov = stats.covariance;
    if (cov.find_mode("A1") && cov.find_mode("B3") && cov.find_mode("C3")) {
        stats.residuals = ghz_residuals(cov);
        stats.corrected_residuals =
            ghz_residuals(CovarianceMatrix(syy, std::vector<std::string>(modes.begin(), modes.end())));
    }
    return stats;
}

EmpiricalStats run_pm_simulation(const SampleConfig &cfg) {
    auto samples = simulate_samples(cfg);
    std::vector<std::string> modes{"A1", "B3", "C3"};
    auto eve = eve_modes(cfg.attack);
    modes.insert(modes.end(), eve.begin(), eve.end());
    const std::vector<std::string> outcomes{"X_D", "X_E", "P_F"};
    auto stats = stats_from_samples(samples, modes, outcomes);
    stats.seed = cfg.seed;
    return stats;
}

double empirical_mutual_info(
    const EmpiricalStats &stats, const MeasurementSpec &target, std::span<const MeasurementSpec> conditioners) {
    return mutual_info_homodyne(stats.covariance, target, conditioners);
}

double max_se_deviation(const EmpiricalStats &stats, const CovarianceMatrix &analytic) {
    std::vector<std::string> shared;
    for (const auto &l : stats.covariance.labels()) {
        if (analytic.find_mode(l)) {
            shared.push_back(l);
        }
    }
    if (shared.empty()) {
        fail(ErrorKind::InvalidArgument, "empirical and analytic covariances share no modes");
    }
    double worst = 0;
    for (const auto &a : shared) {
        for (const auto &b : shared) {
            for (auto qa : {Quadrature::X, Quadrature::P}) {
                for (auto qb : {Quadrature::X, Quadrature::P}) {
                    MeasurementSpec ma{a, qa};
                    MeasurementSpec mb{b, qb};
                    auto i = static_cast<Eigen::Index>(stats.covariance.quadrature_index(ma));
                    auto j = static_cast<Eigen::Index>(stats.covariance.quadrature_index(mb));
                    double dev = std::abs(stats.covariance.covariance(ma, mb) - analytic.covariance(ma, mb));
                    worst = std::max(worst, dev / stats.standard_errors(i, j));
                }
            }
        }
    }
    return worst;
}

void write_samples_csv(std::ostream &out, const SampleSet &samples) {
    auto idx = column_index(samples);
    std::vector<Eigen::Index> cols;
    out << "shot";
    for (const auto &c : kDumpColumns) {
        out << ',' << c;
        cols.push_back(idx.at(c));
    }
    out << '\n';
    for (Eigen::Index r = 0; r < samples.data.rows(); r++) {
        out << r;
        for (auto c : cols) {
            out << ',' << fmt::format("{:.10g}", samples.data(r, c));
        }
        out << '\n';
    }
}

}  // namespace cvmdi
