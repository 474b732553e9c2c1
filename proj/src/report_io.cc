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

#include "cvmdi/report_io.h"

namespace cvmdi {

using nlohmann::json;

json to_json(const ProtocolScenario &s) {
    return {
        {"protocol", to_string(s.kind)},
        {"recon", to_string(s.reconciliation)},
        {"v", s.modulation_variance},
        {"beta", s.beta},
        {"alpha", s.alpha},
        {"la", s.la},
        {"lb", s.lb},
        {"lc", s.lc},
        {"eta_a", s.eta_a()},
        {"eta_b", s.eta_b()},
        {"eta_c", s.eta_c()},
    };
}

json to_json(const AttackSpec &a) {
    json j = {{"attack", a.name()}, {"ve_a", a.ve_a}, {"ve_b", a.ve_b}, {"ve_c", a.ve_c}};
    if (a.family == AttackSpec::Family::CoherentPreset &&
        (a.preset.kind == PresetKind::QccScaled || a.preset.kind == PresetKind::QssScaled)) {
        j["kappa"] = a.preset.kappa;
    }
    return j;
}

json to_json(const AttackModel &attack) {
    if (const auto *c = std::get_if<ClonerAttack>(&attack)) {
        return {{"family", "cloner"}, {"ve_a", c->ve_a}, {"ve_b", c->ve_b}, {"ve_c", c->ve_c}};
    }
    const auto &c = std::get<CoherentAttack>(attack);
    return {{"family", "coherent"}, {"ve_a", c.ve_a}, {"ve_b", c.ve_b}, {"ve_c", c.ve_c},
            {"g1", c.g1},           {"g2", c.g2},     {"g3", c.g3},     {"gp1", c.gp1},
            {"gp2", c.gp2},         {"gp3", c.gp3}};
}

json to_json(const KeyRateReport &r) {
    json pairs = json::array();
    for (const auto &p : r.pairs) {
        pairs.push_back({{"pair", p.name},
                         {"honest_info", p.honest_info},
                         {"eve_info", p.eve_info},
                         {"raw", p.raw},
                         {"key_rate", p.reported()}});
    }
    json j = {
        {"protocol", to_string(r.kind)},
        {"recon", to_string(r.reconciliation)},
        {"attack", r.attack},
        {"beta", r.beta},
        {"pairs", pairs},
        {"raw", r.raw},
        {"key_rate", r.reported()},
        {"intermediates", r.intermediates},
        {"entropy_clamped", r.entropy_clamped},
    };
    for (const auto &p : r.pairs) {
        j["K_" + p.name] = p.reported();
    }
    if (r.kind == ProtocolKind::QCC) {
        j["K_QCC"] = r.reported();
    }
    if (!r.spectrum_abc.empty()) {
        j["spectrum_abc"] = r.spectrum_abc;
        j["spectrum_conditional"] = r.spectrum_conditional;
    }
    return j;
}

json to_json(const Eigen::MatrixXd &m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            row.push_back(m(r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

json to_json(const GhzResiduals &r) {
    return {{"var_xa1_minus_xb3", r.r1}, {"var_xb3_minus_xc3", r.r2}, {"var_pa1_plus_pb3_plus_pc3", r.r3}};
}

json to_json(const EmpiricalStats &s) {
    return {
        {"n_shots", s.n_shots},
        {"seed", s.seed},
        {"modes", s.covariance.labels()},
        {"covariance", to_json(s.covariance.matrix())},
        {"standard_errors", to_json(s.standard_errors)},
        {"residuals", to_json(s.residuals)},
        {"corrected_residuals", to_json(s.corrected_residuals)},
    };
}

json to_json(const std::vector<SweepRow> &rows) {
    json out = json::array();
    for (const auto &r : rows) {
        out.push_back({{"swept", r.swept},
                       {"responding", r.responding},
                       {"k_at_frontier", r.k_at_frontier},
                       {"iterations", r.iterations},
                       {"flag", to_string(r.flag)}});
    }
    return out;
}

}  // namespace cvmdi
