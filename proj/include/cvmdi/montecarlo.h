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

#ifndef CVMDI_MONTECARLO_H
#define CVMDI_MONTECARLO_H

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cvmdi/attacks.h"
#include "cvmdi/gaussian.h"
#include "cvmdi/protocol.h"

namespace cvmdi {

/// Gains of the outcome-dependent displacements:
///   X_B3 = X_B1 + bob_xd X_D
///   X_C3 = X_C1 + charlie_xd X_D + charlie_xe X_E
///   P_C3 = P_C1 + charlie_pf P_F
/// The shipped signs match the relay wiring of build_network() and minimise
/// the GHZ residuals of the corrected data.
struct DisplacementGains {
    double bob_xd;
    double charlie_xd;
    double charlie_xe;
    double charlie_pf;

    static DisplacementGains shipped();
    static DisplacementGains none();
};

struct SampleConfig {
    std::size_t n_shots = 100000;
    std::uint64_t seed = 1;
    ProtocolScenario scenario;
    AttackModel attack = ClonerAttack{};
    DisplacementGains gains = DisplacementGains::shipped();
    /// Worker threads; 0 picks hardware concurrency. Output does not depend on it.
    unsigned jobs = 0;
};

/// Raw per-shot quadratures, one row per shot.
struct SampleSet {
    std::vector<std::string> columns;
    Eigen::MatrixXd data;
};

/// Column names of the documented raw-sample dump (after the shot index).
extern const std::vector<std::string> kDumpColumns;

/// Empirical statistics of corrected data.
///
/// `covariance` is the covariance of A1, B3, C3 (and Eve's stored modes) with
/// the relay outcomes X_D, X_E, P_F regressed out: the empirical counterpart
/// of the conditional covariance produced by condition_relay().
/// `standard_errors(i, j)` = sqrt((c_ii c_jj + c_ij^2) / dof); on the diagonal
/// this is c_ii / sqrt(dof / 2).
struct EmpiricalStats {
    std::size_t n_shots = 0;
    std::uint64_t seed = 0;
    CovarianceMatrix covariance;
    Eigen::MatrixXd standard_errors;
    /// GHZ residuals from `covariance`.
    GhzResiduals residuals;
    /// GHZ residuals of the corrected data without regressing the outcomes out;
    /// these depend on the displacement gains.
    GhzResiduals corrected_residuals;
};

SampleSet simulate_samples(const SampleConfig &cfg);
EmpiricalStats run_pm_simulation(const SampleConfig &cfg);

/// Statistics of arbitrary zero-mean samples: the columns in `modes` (pairs
/// X_<m>, P_<m>) with the `regressors` columns regressed out.
EmpiricalStats stats_from_samples(
    const SampleSet &samples, std::span<const std::string> modes, std::span<const std::string> regressors);

double empirical_mutual_info(
    const EmpiricalStats &stats, const MeasurementSpec &target, std::span<const MeasurementSpec> conditioners);

/// max |empirical - analytic| / SE over all entries of the modes both share.
double max_se_deviation(const EmpiricalStats &stats, const CovarianceMatrix &analytic);

/// CSV with header shot,X_A1,P_A1,X_B3,P_B3,X_C3,P_C3,X_D,X_E,P_F.
void write_samples_csv(std::ostream &out, const SampleSet &samples);

}  // namespace cvmdi

#endif
