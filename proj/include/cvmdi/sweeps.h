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

#ifndef CVMDI_SWEEPS_H
#define CVMDI_SWEEPS_H

#include <iosfwd>
#include <string>
#include <vector>

#include "cvmdi/attacks.h"
#include "cvmdi/protocol.h"

namespace cvmdi {

/// A scalar parameter a sweep can move. Compound axes move several
/// parameters together (LBC sets L_B = L_C, VEBC sets V_EB = V_EC, ...).
enum class Axis { LA, LB, LC, LBC, LAB, VEA, VEB, VEC, VEBC, VEAB };

Axis parse_axis(const std::string &name);
const char *to_string(Axis axis);
bool is_distance_axis(Axis axis);

/// How to build Eve's attack at an evaluation point. Coherent presets are
/// re-derived from the current thermal variances every time they are resolved.
struct AttackSpec {
    enum class Family { Cloner, CoherentPreset, CoherentCustom };

    Family family = Family::Cloner;
    PresetSpec preset;
    double ve_a = 1;
    double ve_b = 1;
    double ve_c = 1;
    double g1 = 0, g2 = 0, g3 = 0;
    double gp1 = 0, gp2 = 0, gp3 = 0;

    AttackModel resolve() const;
    std::string name() const;
};

struct Grid {
    double min = 0;
    double max = 0;
    double step = 1;

    /// Parses "min:max:step".
    static Grid parse(const std::string &text);
    std::vector<double> values() const;
};

void set_axis(ProtocolScenario &scenario, AttackSpec &attack, Axis axis, double value);

/// Raw aggregate key rate (K_QCC or K_QSS) at one point.
double evaluate_key_rate(const ProtocolScenario &scenario, const AttackSpec &attack);

struct FrontierSpec {
    ProtocolScenario scenario;
    AttackSpec attack;
    Axis swept = Axis::LA;
    Axis responding = Axis::LBC;
    double threshold = 1e-3;
    Grid grid{0, 20, 1};
    double respond_min = 0;
    double respond_max = 200;
    unsigned jobs = 1;
};

// Unconverged: the iteration cap was hit before K settled on the threshold
// (K jumps across it).
enum class FrontierFlag { Ok, Edge, Infeasible, Unconverged };
const char *to_string(FrontierFlag flag);

struct SweepRow {
    double swept = 0;
    /// Largest responding value with raw K > threshold; -1 when infeasible.
    double responding = 0;
    double k_at_frontier = 0;
    int iterations = 0;
    FrontierFlag flag = FrontierFlag::Ok;
};

/// Bisection tolerance on the responding axis and cap on iterations.
inline constexpr double kFrontierTolerance = 1e-3;
inline constexpr double kFrontierKTolerance = 1e-6;
inline constexpr int kFrontierMaxIterations = 60;

SweepRow frontier_point(const FrontierSpec &spec, double swept_value);
std::vector<SweepRow> frontier(const FrontierSpec &spec);
/// Feasible rows never increase along the swept axis (tolerance on the
/// bisection resolution).
bool frontier_monotone(const std::vector<SweepRow> &rows);

struct RegionMapSpec {
    RegionContext context = RegionContext::QccSymmetric;
    double ve_a = 2;
    double ve_b = 2;
    double ve_c = 2;
    Grid grid{-2.5, 2.5, 0.05};
    unsigned jobs = 1;
};

/// QCC context: gA = g1 = g2, gB = g3. QSS context: gA = g2 = g3, gB = g1.
struct RegionRow {
    double ga = 0;
    double gb = 0;
    bool bona_fide = false;
    RegionClass region = RegionClass::Invalid;
};

CoherentAttack region_attack(const RegionMapSpec &spec, double ga, double gb);
std::vector<RegionRow> region_map(const RegionMapSpec &spec);

inline constexpr const char *kFrontierCsvHeader = "swept,responding,k_at_frontier,iterations,flag";
inline constexpr const char *kRegionCsvHeader = "gA,gB,bona_fide,class";

/// 10 significant digits.
std::string format_number(double value);
void write_frontier_csv(std::ostream &out, const std::vector<SweepRow> &rows);
void write_region_csv(std::ostream &out, const std::vector<RegionRow> &rows);

}  // namespace cvmdi

#endif
