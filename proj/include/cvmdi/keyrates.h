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

#ifndef CVMDI_KEYRATES_H
#define CVMDI_KEYRATES_H

#include <map>
#include <string>
#include <vector>

#include "cvmdi/attacks.h"
#include "cvmdi/gaussian.h"
#include "cvmdi/protocol.h"

namespace cvmdi {

/// Key rate of one reference/partner pairing, in bits per channel use.
struct PairKeyRate {
    std::string name;     // "AB", "AC" or "QSS"
    double honest_info;   // I between the legitimate data
    double eve_info;      // Eve's classical information or Holevo bound
    double raw;           // beta * honest_info - eve_info

    double reported() const {
        return raw > 0 ? raw : 0.0;
    }
};

struct KeyRateReport {
    ProtocolKind kind = ProtocolKind::QCC;
    Reconciliation reconciliation = Reconciliation::RR;
    std::string attack;  // "cloner" or "coherent"
    double beta = 0;
    std::vector<PairKeyRate> pairs;
    /// min over pairs for QCC, the single pair for QSS.
    double raw = 0;
    std::map<std::string, double> intermediates;
    std::vector<double> spectrum_abc;          // coherent attacks only
    std::vector<double> spectrum_conditional;  // coherent attacks only
    bool entropy_clamped = false;

    double reported() const {
        return raw > 0 ? raw : 0.0;
    }
    const PairKeyRate &pair(const std::string &name) const;
};

KeyRateReport qcc_cloner(const ProtocolScenario &scenario, const ClonerAttack &attack);
KeyRateReport qss_cloner(const ProtocolScenario &scenario, const ClonerAttack &attack);
KeyRateReport qcc_coherent(const ProtocolScenario &scenario, const CoherentAttack &attack);
KeyRateReport qss_coherent(const ProtocolScenario &scenario, const CoherentAttack &attack);

/// Dispatches on scenario.kind and the attack family.
KeyRateReport key_rate(const ProtocolScenario &scenario, const AttackModel &attack);

struct HolevoDetail {
    double bits = 0;
    std::vector<double> spectrum_abc;
    std::vector<double> spectrum_conditional;
    bool clamped = false;
};

/// S(rho_ABC) - S(rho_ABC | ref homodyned). covABC must hold exactly A1, B3, C3.
HolevoDetail holevo_detail(const CovarianceMatrix &cov_abc, const MeasurementSpec &ref);
double holevo_vs_quadrature(const CovarianceMatrix &cov_abc, const MeasurementSpec &ref);

}  // namespace cvmdi

#endif
