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

#include "cvmdi/protocol.h"

#include <array>
#include <cmath>
#include <fmt/format.h>

#include "cvmdi/error.h"

namespace cvmdi {

namespace {

constexpr std::array<const char *, 6> kClonerEveModes{"EA1", "EA2", "EB1", "EB2", "EC1", "EC2"};

void check_distance(double length, const char *name) {
    if (!(length >= 0) || !std::isfinite(length)) {
        fail(ErrorKind::InvalidParameter, fmt::format("{} must be a finite distance >= 0 km, got {}", name, length));
    }
}

// Channel splitters on (sent, injected) pairs, then the relay splitters.
SymplecticTransform network_transform(
    std::size_t n_modes, std::size_t stride, const ProtocolScenario &s) {
    std::size_t a = 1;
    std::size_t b = 1 + stride;
    std::size_t c = 1 + 2 * stride;
    auto u_eve = beamsplitter(n_modes, a, a + 1, s.eta_a()) * beamsplitter(n_modes, b, b + 1, s.eta_b()) *
                 beamsplitter(n_modes, c, c + 1, s.eta_c());
    auto bs1 = beamsplitter(n_modes, a, b, 0.5);
    auto bs2 = beamsplitter(n_modes, a, c, 2.0 / 3.0);
    return bs2 * bs1 * u_eve;
}

}  // namespace

const char *to_string(ProtocolKind kind) {
    return kind == ProtocolKind::QCC ? "qcc" : "qss";
}

const char *to_string(Reconciliation recon) {
    return recon == Reconciliation::RR ? "rr" : "dr";
}

void ProtocolScenario::validate() const {
    if (!(modulation_variance >= 1) || !std::isfinite(modulation_variance)) {
        fail(ErrorKind::InvalidParameter, fmt::format("modulation variance must be >= 1, got {}", modulation_variance));
    }
    if (!(beta > 0 && beta <= 1)) {
        fail(ErrorKind::InvalidParameter, fmt::format("beta must lie in (0, 1], got {}", beta));
    }
    if (!(alpha > 0) || !std::isfinite(alpha)) {
        fail(ErrorKind::InvalidParameter, fmt::format("alpha must be > 0 dB/km, got {}", alpha));
    }
    check_distance(la, "L_A");
    check_distance(lb, "L_B");
    check_distance(lc, "L_C");
}

double ProtocolScenario::eta_a() const {
    return transmittance_from_distance(la, alpha);
}
double ProtocolScenario::eta_b() const {
    return transmittance_from_distance(lb, alpha);
}
double ProtocolScenario::eta_c() const {
    return transmittance_from_distance(lc, alpha);
}

double transmittance_from_distance(double length_km, double alpha_db_per_km) {
    check_distance(length_km, "distance");
    if (!(alpha_db_per_km > 0)) {
        fail(ErrorKind::InvalidParameter, fmt::format("alpha must be > 0 dB/km, got {}", alpha_db_per_km));
    }
    return std::pow(10.0, -alpha_db_per_km * length_km / 10.0);
}

CovarianceMatrix build_network(const ProtocolScenario &scenario, const AttackModel &attack) {
    scenario.validate();
    validate(attack);
    double v = scenario.modulation_variance;
    if (const auto *cloner = std::get_if<ClonerAttack>(&attack)) {
        auto initial = tensor(
            tensor(tensor(tmss_cov(v, "A1", "F"), tmss_cov(cloner->ve_a, "EA1", "EA2")),
                   tensor(tmss_cov(v, "B1", "D"), tmss_cov(cloner->ve_b, "EB1", "EB2"))),
            tensor(tmss_cov(v, "C1", "E"), tmss_cov(cloner->ve_c, "EC1", "EC2")));
        return apply_symplectic(initial, network_transform(12, 4, scenario));
    }
    const auto &coherent = std::get<CoherentAttack>(attack);
    auto initial = tensor(
        tensor(tensor(tmss_cov(v, "A1", "F"), tmss_cov(v, "B1", "D")), tmss_cov(v, "C1", "E")),
        eve_cov(coherent).with_labels({"EA1", "EB1", "EC1"}));
    std::array<std::string, 9> order{"A1", "F", "EA1", "B1", "D", "EB1", "C1", "E", "EC1"};
    return apply_symplectic(permute_modes(initial, order), network_transform(9, 3, scenario));
}

RelayState condition_relay(const CovarianceMatrix &network) {
    RelayState out{network};
    out.var_xd = out.cov.variance(X("D"));
    out.cov = condition_on_homodyne(out.cov, X("D"));
    out.var_xe = out.cov.variance(X("E"));
    out.cov = condition_on_homodyne(out.cov, X("E"));
    out.var_pf = out.cov.variance(P("F"));
    out.cov = condition_on_homodyne(out.cov, P("F"));

    std::vector<std::string> keep{"A1", "B1", "C1"};
    bool purified = true;
    for (const char *m : kClonerEveModes) {
        purified = purified && out.cov.find_mode(m).has_value();
    }
    if (purified) {
        keep.insert(keep.end(), kClonerEveModes.begin(), kClonerEveModes.end());
    }
    auto cov = out.cov.reduced(keep);
    // Displacements by the public outcomes leave covariances unchanged, so the
    // displaced modes B3, C3 share the conditional covariance of B1, C1.
    keep[1] = "B3";
    keep[2] = "C3";
    out.cov = cov.with_labels(keep);
    return out;
}

RelayState relay_state(const ProtocolScenario &scenario, const AttackModel &attack) {
    return condition_relay(build_network(scenario, attack));
}

GhzResiduals ghz_residuals(const CovarianceMatrix &cov) {
    auto sum_var = [&](const std::vector<MeasurementSpec> &terms, const std::vector<double> &signs) {
        double total = 0;
        for (std::size_t i = 0; i < terms.size(); i++) {
            for (std::size_t j = 0; j < terms.size(); j++) {
                total += signs[i] * signs[j] * cov.covariance(terms[i], terms[j]);
            }
        }
        return total;
    };
    GhzResiduals r;
    r.r1 = sum_var({X("A1"), X("B3")}, {1, -1});
    r.r2 = sum_var({X("B3"), X("C3")}, {1, -1});
    r.r3 = sum_var({P("A1"), P("B3"), P("C3")}, {1, 1, 1});
    return r;
}

GhzResiduals ghz_residuals(const RelayState &state) {
    return ghz_residuals(state.cov);
}

}  // namespace cvmdi
