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

#ifndef CVMDI_REPORT_IO_H
#define CVMDI_REPORT_IO_H

#include <json.hpp>

#include "cvmdi/keyrates.h"
#include "cvmdi/montecarlo.h"
#include "cvmdi/protocol.h"
#include "cvmdi/sweeps.h"

namespace cvmdi {

nlohmann::json to_json(const ProtocolScenario &scenario);
nlohmann::json to_json(const AttackSpec &attack);
nlohmann::json to_json(const AttackModel &attack);
nlohmann::json to_json(const KeyRateReport &report);
nlohmann::json to_json(const EmpiricalStats &stats);
nlohmann::json to_json(const GhzResiduals &residuals);
nlohmann::json to_json(const std::vector<SweepRow> &rows);
nlohmann::json to_json(const Eigen::MatrixXd &m);

}  // namespace cvmdi

#endif
