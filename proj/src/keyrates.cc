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

#include "cvmdi/keyrates.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "cvmdi/error.h"

namespace cvmdi {

namespace {

void require_kind(const ProtocolScenario &s, ProtocolKind kind) {
    if (s.kind != kind) {
        fail(ErrorKind::InvalidArgument, std::string("scenario is ") + to_string(s.kind) + ", expected " + to_string(kind));
    }
}

void require_rr(const ProtocolScenario &s) {
    if (s.reconciliation != Reconciliation::RR) {
        fail(ErrorKind::Unimplemented, "direct reconciliation is not available for coherent attacks");
    }
}

// Records V(target) and V(target | conditioners) alongside the information.
double logged_info(KeyRateReport &report, const CovarianceMatrix &cov, const MeasurementSpec &target,
                   std::vector<MeasurementSpec> conditioners) {
    double info = mutual_info_homodyne(cov, target, conditioners);
    std::string cond;
    for (const auto &c : conditioners) {
        cond += (cond.empty() ? "" : ",") + to_string(c);
    }
    double v = cov.variance(target);
    report.intermediates["V(" + to_string(target) + ")"] = v;
    report.intermediates["V(" + to_string(target) + "|" + cond + ")"] = v / std::exp2(2 * info);
    report.intermediates["I(" + to_string(target) + ":" + cond + ")"] = info;
    return info;
}

KeyRateReport start(const ProtocolScenario &s, const char *attack, const RelayState &state) {
    KeyRateReport r;
    r.kind = s.kind;
    r.reconciliation = s.reconciliation;
    r.attack = attack;
    r.beta = s.beta;
    r.intermediates["V(X_D)"] = state.var_xd;
    r.intermediates["V(X_E)"] = state.var_xe;
    r.intermediates["V(P_F)"] = state.var_pf;
    return r;
}

void finish(KeyRateReport &r) {
    r.raw = r.pairs.front().raw;
    for (const auto &p : r.pairs) {
        r.raw = std::min(r.raw, p.raw);
    }
}

PairKeyRate make_pair(std::string name, double beta, double honest, double eve) {
    return {std::move(name), honest, eve, beta * honest - eve};
}

}  // namespace

const PairKeyRate &KeyRateReport::pair(const std::string &name) const {
    for (const auto &p : pairs) {
        if (p.name == name) {
            return p;
        }
    }
    fail(ErrorKind::InvalidArgument, "report has no key rate for pair '" + name + "'");
}

KeyRateReport qcc_cloner(const ProtocolScenario &scenario, const ClonerAttack &attack) {
    require_kind(scenario, ProtocolKind::QCC);
    auto state = relay_state(scenario, attack);
    const auto &cov = state.cov;
    auto r = start(scenario, "cloner", state);
    double i_ab = logged_info(r, cov, X("B3"), {X("A1")});
    double i_ac = logged_info(r, cov, X("C3"), {X("A1")});
    if (scenario.reconciliation == Reconciliation::RR) {
        double eve = logged_info(r, cov, X("A1"), {X("EA1"), X("EA2")});
        r.pairs.push_back(make_pair("AB", scenario.beta, i_ab, eve));
        r.pairs.push_back(make_pair("AC", scenario.beta, i_ac, eve));
    } else {
        double eve_b = logged_info(r, cov, X("B3"), {X("EB1"), X("EB2")});
        double eve_c = logged_info(r, cov, X("C3"), {X("EC1"), X("EC2")});
        r.pairs.push_back(make_pair("AB", scenario.beta, i_ab, eve_b));
        r.pairs.push_back(make_pair("AC", scenario.beta, i_ac, eve_c));
    }
    finish(r);
    return r;
}

KeyRateReport qss_cloner(const ProtocolScenario &scenario, const ClonerAttack &attack) {
    require_kind(scenario, ProtocolKind::QSS);
    auto state = relay_state(scenario, attack);
    const auto &cov = state.cov;
    auto r = start(scenario, "cloner", state);
    double honest = logged_info(r, cov, P("C3"), {P("A1"), P("B3")});
    double eve = 0;
    if (scenario.reconciliation == Reconciliation::RR) {
        eve = logged_info(r, cov, P("C3"), {P("EC1"), P("EC2")});
    } else {
        eve = logged_info(r, cov, P("A1"), {P("EA1"), P("EA2")}) + logged_info(r, cov, P("B3"), {P("EB1"), P("EB2")});
    }
    r.pairs.push_back(make_pair("QSS", scenario.beta, honest, eve));
    finish(r);
    return r;
}

HolevoDetail holevo_detail(const CovarianceMatrix &cov_abc, const MeasurementSpec &ref) {
    std::set<std::string> labels(cov_abc.labels().begin(), cov_abc.labels().end());
    if (labels != std::set<std::string>{"A1", "B3", "C3"}) {
        fail(ErrorKind::InvalidArgument, "Holevo bound needs a covariance over exactly A1, B3, C3");
    }
    auto full = entropy_detail(cov_abc);
    auto conditioned = condition_on_homodyne(cov_abc, ref);
    auto cond = entropy_detail(conditioned);
    HolevoDetail out;
    out.bits = full.bits - cond.bits;
    out.spectrum_abc = symplectic_eigenvalues(cov_abc).values;
    out.spectrum_conditional = symplectic_eigenvalues(conditioned).values;
    out.clamped = full.clamped || cond.clamped;
    return out;
}

double holevo_vs_quadrature(const CovarianceMatrix &cov_abc, const MeasurementSpec &ref) {
    return holevo_detail(cov_abc, ref).bits;
}

KeyRateReport qcc_coherent(const ProtocolScenario &scenario, const CoherentAttack &attack) {
    require_kind(scenario, ProtocolKind::QCC);
    require_rr(scenario);
    auto state = relay_state(scenario, attack);
    auto r = start(scenario, "coherent", state);
    double i_ab = logged_info(r, state.cov, X("B3"), {X("A1")});
    double i_ac = logged_info(r, state.cov, X("C3"), {X("A1")});
    auto h = holevo_detail(state.cov, X("A1"));
    r.intermediates["H(Eve:X_A1)"] = h.bits;
    r.spectrum_abc = h.spectrum_abc;
    r.spectrum_conditional = h.spectrum_conditional;
    r.entropy_clamped = h.clamped;
    r.pairs.push_back(make_pair("AB", scenario.beta, i_ab, h.bits));
    r.pairs.push_back(make_pair("AC", scenario.beta, i_ac, h.bits));
    finish(r);
    return r;
}

KeyRateReport qss_coherent(const ProtocolScenario &scenario, const CoherentAttack &attack) {
    require_kind(scenario, ProtocolKind::QSS);
    require_rr(scenario);
    auto state = relay_state(scenario, attack);
    auto r = start(scenario, "coherent", state);
    double honest = logged_info(r, state.cov, P("C3"), {P("A1"), P("B3")});
    auto h = holevo_detail(state.cov, P("C3"));
    r.intermediates["H(Eve:P_C3)"] = h.bits;
    r.spectrum_abc = h.spectrum_abc;
    r.spectrum_conditional = h.spectrum_conditional;
    r.entropy_clamped = h.clamped;
    r.pairs.push_back(make_pair("QSS", scenario.beta, honest, h.bits));
    finish(r);
    return r;
}

KeyRateReport key_rate(const ProtocolScenario &scenario, const AttackModel &attack) {
    bool qcc = scenario.kind == ProtocolKind::QCC;
    if (const auto *c = std::get_if<ClonerAttack>(&attack)) {
        return qcc ? qcc_cloner(scenario, *c) : qss_cloner(scenario, *c);
    }
    const auto &c = std::get<CoherentAttack>(attack);
    return qcc ? qcc_coherent(scenario, c) : qss_coherent(scenario, c);
}

}  // namespace cvmdi
