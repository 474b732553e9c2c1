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

#ifndef CVMDI_ATTACKS_H
#define CVMDI_ATTACKS_H

#include <string>
#include <variant>

#include "cvmdi/gaussian.h"

namespace cvmdi {

/// Independent entangling cloners: Eve injects one arm of a TMSS of the given
/// variance into each channel and stores both output arms.
struct ClonerAttack {
    double ve_a = 1;
    double ve_b = 1;
    double ve_c = 1;

    void validate() const;
};

/// Correlated (coherent) attack. Eve's injected three-mode state has thermal
/// variances ve_* on the diagonal and diag(g, g') correlation blocks:
/// g1/gp1 couple E_A-E_B, g2/gp2 couple E_A-E_C, g3/gp3 couple E_B-E_C.
struct CoherentAttack {
    double ve_a = 1;
    double ve_b = 1;
    double ve_c = 1;
    double g1 = 0;
    double g2 = 0;
    double g3 = 0;
    double gp1 = 0;
    double gp2 = 0;
    double gp3 = 0;

    /// Fills the p-correlations with the shipped convention g' = -g.
    static CoherentAttack epr(double ve_a, double ve_b, double ve_c, double g1, double g2, double g3);

    bool operator==(const CoherentAttack &) const = default;
};

using AttackModel = std::variant<ClonerAttack, CoherentAttack>;

/// Eve's three-mode covariance, modes labelled EA, EB, EC.
CovarianceMatrix eve_cov(const CoherentAttack &attack);

/// Throws invalid-parameter unless the variances are >= 1 and eve_cov is physical.
void validate(const CoherentAttack &attack);
void validate(const AttackModel &attack);

/// Closed-form physicality test for V_EB = V_EC, g1 = g2, g' = -g.
bool bona_fide_symmetric_qcc(double ve_a, double ve_c, double g1, double g3);

enum class FreeCorrelation {
    G1,
    G2,
    G3,
    G12,  // g1 = g2 varied together
    G23,  // g2 = g3 varied together
};

enum class Direction { Negative, Positive };

/// Most extreme value of the free correlation (g' following g' = -g) for which
/// eve_cov stays physical, by bisection on nu_min - 1 to |dg| <= 1e-10.
double boundary_extremal_g(const CoherentAttack &templ, FreeCorrelation free, Direction direction);
/// Copy of `attack` with the free correlation (and its g') set to `value`.
CoherentAttack with_correlation(CoherentAttack attack, FreeCorrelation free, double value);

enum class RegionContext { QccSymmetric, QssSymmetric };

enum class RegionClass {
    Invalid,
    Separable,
    EntA_BC,  // E_A entangled with E_B and with E_C
    EntBC,    // E_B entangled with E_C
    EntC_AB,  // E_C entangled with (E_A, E_B)
};

const char *to_string(RegionClass c);
RegionClass classify_region(const CoherentAttack &attack, RegionContext context);

enum class PresetKind {
    Independent,
    QccMinG12,
    QccMinG3,
    QccScaled,
    QssMinG23,
    QssMinG1,
    QssScaled,
};

struct PresetSpec {
    PresetKind kind = PresetKind::Independent;
    double kappa = 2.0 / 3.0;  // used by the scaled presets only
};

/// Parses "independent", "qcc_min_g12", ..., "qcc_scaled", "qss_scaled".
PresetKind parse_preset(const std::string &name);
const char *to_string(PresetKind kind);

CoherentAttack preset(const PresetSpec &spec, double ve_a, double ve_b, double ve_c);

}  // namespace cvmdi

#endif
