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

#include "cvmdi/attacks.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fmt/format.h>

#include "cvmdi/error.h"

namespace cvmdi {

namespace {

void check_thermal(double v, const char *name) {
    if (!(v >= 1) || !std::isfinite(v)) {
        fail(ErrorKind::InvalidParameter, fmt::format("{} must be a finite value >= 1, got {}", name, v));
    }
}

// Scale of the correlation that can pair two modes; used to seed the bracket.
double pair_scale(const CoherentAttack &a, FreeCorrelation free) {
    double ab = std::sqrt(a.ve_a * a.ve_b);
    double ac = std::sqrt(a.ve_a * a.ve_c);
    double bc = std::sqrt(a.ve_b * a.ve_c);
    switch (free) {
        case FreeCorrelation::G1:
            return ab;
        case FreeCorrelation::G2:
            return ac;
        case FreeCorrelation::G3:
            return bc;
        case FreeCorrelation::G12:
            return std::max(ab, ac);
        case FreeCorrelation::G23:
            return std::max(ac, bc);
    }
    return ab;
}

double margin(const CoherentAttack &a) {
    return bona_fide_margin(eve_cov(a).matrix());
}

}  // namespace

void ClonerAttack::validate() const {
    check_thermal(ve_a, "V_EA");
    check_thermal(ve_b, "V_EB");
    check_thermal(ve_c, "V_EC");
}

CoherentAttack CoherentAttack::epr(double ve_a, double ve_b, double ve_c, double g1, double g2, double g3) {
    return {ve_a, ve_b, ve_c, g1, g2, g3, -g1, -g2, -g3};
}

CovarianceMatrix eve_cov(const CoherentAttack &a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
    m(0, 0) = m(1, 1) = a.ve_a;
    m(2, 2) = m(3, 3) = a.ve_b;
    m(4, 4) = m(5, 5) = a.ve_c;
    auto block = [&](int i, int j, double g, double gp) {
        m(2 * i, 2 * j) = m(2 * j, 2 * i) = g;
        m(2 * i + 1, 2 * j + 1) = m(2 * j + 1, 2 * i + 1) = gp;
    };
    block(0, 1, a.g1, a.gp1);
    block(0, 2, a.g2, a.gp2);
    block(1, 2, a.g3, a.gp3);
    return CovarianceMatrix(std::move(m), {"EA", "EB", "EC"});
}

void validate(const CoherentAttack &attack) {
    check_thermal(attack.ve_a, "V_EA");
    check_thermal(attack.ve_b, "V_EB");
    check_thermal(attack.ve_c, "V_EC");
    if (!is_bona_fide(eve_cov(attack))) {
        fail(ErrorKind::InvalidParameter,
             fmt::format("Eve's covariance (g = {}, {}, {}; g' = {}, {}, {}) is not a physical state", attack.g1,
                         attack.g2, attack.g3, attack.gp1, attack.gp2, attack.gp3));
    }
}

void validate(const AttackModel &attack) {
    std::visit(
        [](const auto &a) {
            if constexpr (std::is_same_v<std::decay_t<decltype(a)>, ClonerAttack>) {
                a.validate();
            } else {
                validate(a);
            }
        },
        attack);
}

bool bona_fide_symmetric_qcc(double ve_a, double ve_c, double g1, double g3) {
    double g1s = g1 * g1;
    double g3s = g3 * g3;
    double a2 = ve_a * ve_a;
    double c2 = ve_c * ve_c;
    double d = ve_a - ve_c;
    double inner = 8 * g1s * (g3s - d * d) + (g3s + a2 - c2) * (g3s + a2 - c2);
    if (inner < 0) {
        return false;
    }
    return 4 * g1s + g3s - a2 - c2 + std::sqrt(inner) <= -2;
}

CoherentAttack with_correlation(CoherentAttack a, FreeCorrelation free, double value) {
    switch (free) {
        case FreeCorrelation::G1:
            a.g1 = value;
            a.gp1 = -value;
            break;
        case FreeCorrelation::G2:
            a.g2 = value;
            a.gp2 = -value;
            break;
        case FreeCorrelation::G3:
            a.g3 = value;
            a.gp3 = -value;
            break;
        case FreeCorrelation::G12:
            a.g1 = a.g2 = value;
            a.gp1 = a.gp2 = -value;
            break;
        case FreeCorrelation::G23:
            a.g2 = a.g3 = value;
            a.gp2 = a.gp3 = -value;
            break;
    }
    return a;
}

double boundary_extremal_g(const CoherentAttack &templ, FreeCorrelation free, Direction direction) {
    double sign = direction == Direction::Negative ? -1.0 : 1.0;
    auto valid_at = [&](double g) { return margin(with_correlation(templ, free, g)) >= -kBonaFideTolerance; };
    if (!(margin(with_correlation(templ, free, 0)) >= -kBonaFideTolerance)) {
        fail(ErrorKind::InvalidParameter, "attack template is not physical with the free correlation at zero");
    }
    double lo = 0;
    double hi = sign * 2 * pair_scale(templ, free);
    int expansions = 0;
    while (valid_at(hi)) {
        if (++expansions > 6) {
            fail(ErrorKind::BracketFailure, "no physicality boundary found along the free correlation");
        }
        lo = hi;
        hi *= 2;
    }
    for (int iter = 0; iter < 200 && std::abs(hi - lo) > 1e-10; iter++) {
        double mid = 0.5 * (lo + hi);
        if (valid_at(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

const char *to_string(RegionClass c) {
    switch (c) {
        case RegionClass::Invalid:
            return "INVALID";
        case RegionClass::Separable:
            return "SEPARABLE";
        case RegionClass::EntA_BC:
            return "ENT_A_BC";
        case RegionClass::EntBC:
            return "ENT_BC";
        case RegionClass::EntC_AB:
            return "ENT_C_AB";
    }
    return "?";
}

RegionClass classify_region(const CoherentAttack &attack, RegionContext context) {
    auto cov = eve_cov(attack);
    if (!is_bona_fide(cov)) {
        return RegionClass::Invalid;
    }
    auto pair_entangled = [&](const char *a, const char *b) {
        std::array<std::string, 2> modes{a, b};
        auto pair = cov.reduced(modes);
        std::array<std::string, 1> side{a};
        return ppt_entangled(pair, side);
    };
    if (context == RegionContext::QccSymmetric) {
        if (pair_entangled("EA", "EB") && pair_entangled("EA", "EC")) {
            return RegionClass::EntA_BC;
        }
        if (pair_entangled("EB", "EC")) {
            return RegionClass::EntBC;
        }
        return RegionClass::Separable;
    }
    std::array<std::string, 1> side{"EC"};
    return ppt_entangled(cov, side) ? RegionClass::EntC_AB : RegionClass::Separable;
}

PresetKind parse_preset(const std::string &name) {
    for (auto k : {PresetKind::Independent, PresetKind::QccMinG12, PresetKind::QccMinG3, PresetKind::QccScaled,
                   PresetKind::QssMinG23, PresetKind::QssMinG1, PresetKind::QssScaled}) {
        if (name == to_string(k)) {
            return k;
        }
    }
    fail(ErrorKind::InvalidParameter, "unknown attack preset '" + name + "'");
}

const char *to_string(PresetKind kind) {
    switch (kind) {
        case PresetKind::Independent:
            return "independent";
        case PresetKind::QccMinG12:
            return "qcc_min_g12";
        case PresetKind::QccMinG3:
            return "qcc_min_g3";
        case PresetKind::QccScaled:
            return "qcc_scaled";
        case PresetKind::QssMinG23:
            return "qss_min_g23";
        case PresetKind::QssMinG1:
            return "qss_min_g1";
        case PresetKind::QssScaled:
            return "qss_scaled";
    }
    return "?";
}

CoherentAttack preset(const PresetSpec &spec, double ve_a, double ve_b, double ve_c) {
    check_thermal(ve_a, "V_EA");
    check_thermal(ve_b, "V_EB");
    check_thermal(ve_c, "V_EC");
    auto base = CoherentAttack::epr(ve_a, ve_b, ve_c, 0, 0, 0);
    auto extremal = [&](const CoherentAttack &t, FreeCorrelation f) {
        return with_correlation(t, f, boundary_extremal_g(t, f, Direction::Negative));
    };
    // Scaled presets: primary correlation at kappa times its extremal value,
    // the other one pushed to the physicality boundary.
    auto scaled = [&](FreeCorrelation primary, FreeCorrelation secondary) {
        if (!(spec.kappa >= 0 && spec.kappa <= 1)) {
            fail(ErrorKind::InvalidParameter, fmt::format("kappa must lie in [0, 1], got {}", spec.kappa));
        }
        double g = spec.kappa * boundary_extremal_g(base, primary, Direction::Negative);
        return extremal(with_correlation(base, primary, g), secondary);
    };
    switch (spec.kind) {
        case PresetKind::Independent:
            return base;
        case PresetKind::QccMinG12:
            return extremal(base, FreeCorrelation::G12);
        case PresetKind::QccMinG3:
            return extremal(base, FreeCorrelation::G3);
        case PresetKind::QccScaled:
            return scaled(FreeCorrelation::G12, FreeCorrelation::G3);
        case PresetKind::QssMinG23:
            return extremal(base, FreeCorrelation::G23);
        case PresetKind::QssMinG1:
            return extremal(base, FreeCorrelation::G1);
        case PresetKind::QssScaled:
            return scaled(FreeCorrelation::G23, FreeCorrelation::G1);
    }
    return base;
}

}  // namespace cvmdi
