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

#ifndef CVMDI_PROTOCOL_H
#define CVMDI_PROTOCOL_H

#include "cvmdi/attacks.h"
#include "cvmdi/gaussian.h"

namespace cvmdi {

enum class ProtocolKind { QCC, QSS };
enum class Reconciliation { RR, DR };

const char *to_string(ProtocolKind kind);
const char *to_string(Reconciliation recon);

inline constexpr double kDefaultModulationVariance = 10;
inline constexpr double kDefaultBeta = 0.95;
inline constexpr double kDefaultAlpha = 0.2;  // dB/km

struct ProtocolScenario {
    ProtocolKind kind = ProtocolKind::QCC;
    Reconciliation reconciliation = Reconciliation::RR;
    double modulation_variance = kDefaultModulationVariance;
    double beta = kDefaultBeta;
    double alpha = kDefaultAlpha;
    double la = 0;  // km
    double lb = 0;
    double lc = 0;

    void validate() const;
    double eta_a() const;
    double eta_b() const;
    double eta_c() const;
};

/// 10^(-alpha L / 10).
double transmittance_from_distance(double length_km, double alpha_db_per_km);

/// Pre-measurement covariance of the whole network.
///
/// Each party holds a TMSS (kept arm A1/B1/C1, travelling arm A/B/C). The
/// travelling arm meets Eve's injected mode on a beam splitter of power
/// transmittance eta; Eve keeps the other output (EA1/EB1/EC1). At the relay
/// the arms from Alice and Bob meet on a 50:50 splitter whose second output is
/// D; the first output meets Charlie's arm on a 2/3 splitter with outputs F
/// (first) and E (second).
///
/// Mode order, cloner attack (12 modes):
///   A1, F, EA1, EA2, B1, D, EB1, EB2, C1, E, EC1, EC2
/// coherent attack (9 modes):
///   A1, F, EA1, B1, D, EB1, C1, E, EC1
CovarianceMatrix build_network(const ProtocolScenario &scenario, const AttackModel &attack);

struct RelayState {
    CovarianceMatrix cov;
    /// Variance of each relay quadrature just before it was measured
    /// (measurement order X_D, X_E, P_F).
    double var_xd = 0;
    double var_xe = 0;
    double var_pf = 0;

    bool eve_extended() const {
        return cov.num_modes() == 9;
    }
};

/// Homodynes X_D, X_E and P_F of a build_network() output.
///
/// Remaining modes are A1, B3, C3 followed, for the cloner network, by Eve's
/// six stored modes EA1, EA2, EB1, EB2, EC1, EC2. Eve's outputs in the coherent
/// network are not a purification and are traced out.
RelayState condition_relay(const CovarianceMatrix &network);

RelayState relay_state(const ProtocolScenario &scenario, const AttackModel &attack);

struct GhzResiduals {
    double r1 = 0;  // Var(X_A1 - X_B3)
    double r2 = 0;  // Var(X_B3 - X_C3)
    double r3 = 0;  // Var(P_A1 + P_B3 + P_C3)
};

/// Needs modes A1, B3, C3.
GhzResiduals ghz_residuals(const CovarianceMatrix &cov);
GhzResiduals ghz_residuals(const RelayState &state);

}  // namespace cvmdi

#endif
