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

#include "cvmdi/sweeps.h"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <functional>
#include <ostream>
#include <thread>

#include "cvmdi/error.h"
#include "cvmdi/keyrates.h"

namespace cvmdi {

namespace {

struct AxisName {
    Axis axis;
    const char *name;
};

constexpr AxisName kAxisNames[] = {
    {Axis::LA, "la"},     {Axis::LB, "lb"},     {Axis::LC, "lc"},       {Axis::LBC, "lbc"},
    {Axis::LAB, "lab"},   {Axis::VEA, "ve-a"},  {Axis::VEB, "ve-b"},    {Axis::VEC, "ve-c"},
    {Axis::VEBC, "ve-bc"}, {Axis::VEAB, "ve-ab"},
};

// Runs fn(0..n-1) on up to `jobs` threads; fn writes to its own slot.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)> &fn) {
    jobs = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < n; i++) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned t = 0; t < jobs; t++) {
        workers.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += jobs) {
                    fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &w : workers) {
        w.join();
    }
    for (auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

}  // namespace

Axis parse_axis(const std::string &name) {
    for (const auto &a : kAxisNames) {
        if (name == a.name) {
            return a.axis;
        }
    }
    fail(ErrorKind::InvalidParameter, "unknown axis '" + name + "'");
}

const char *to_string(Axis axis) {
    for (const auto &a : kAxisNames) {
        if (axis == a.axis) {
            return a.name;
        }
    }
    return "?";
}

bool is_distance_axis(Axis axis) {
    return axis == Axis::LA || axis == Axis::LB || axis == Axis::LC || axis == Axis::LBC || axis == Axis::LAB;
}

AttackModel AttackSpec::resolve() const {
    switch (family) {
        case Family::Cloner:
            return ClonerAttack{ve_a, ve_b, ve_c};
        case Family::CoherentPreset:
            return cvmdi::preset(this->preset, ve_a, ve_b, ve_c);
        case Family::CoherentCustom:
            return CoherentAttack{ve_a, ve_b, ve_c, g1, g2, g3, gp1, gp2, gp3};
    }
    return ClonerAttack{};
}

std::string AttackSpec::name() const {
    switch (family) {
        case Family::Cloner:
            return "cloner";
        case Family::CoherentPreset:
            return std::string("coherent:") + to_string(preset.kind);
        case Family::CoherentCustom:
            return "coherent:custom";
    }
    return "?";
}

Grid Grid::parse(const std::string &text) {
    Grid g;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &g.min, &g.max, &g.step, &tail) != 3) {
        fail(ErrorKind::InvalidParameter, "grid must look like min:max:step, got '" + text + "'");
    }
    if (!std::isfinite(g.min) || !std::isfinite(g.max) || !(g.step > 0) || g.max < g.min) {
        fail(ErrorKind::InvalidParameter, "grid needs finite min <= max and step > 0, got '" + text + "'");
    }
    return g;
}

std::vector<double> Grid::values() const {
    auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; i++) {
        double v = min + static_cast<double>(i) * step;
        out.push_back(std::abs(v) < 1e-9 * step ? 0.0 : v);
    }
    return out;
}

void set_axis(ProtocolScenario &s, AttackSpec &a, Axis axis, double value) {
    switch (axis) {
        case Axis::LA:
            s.la = value;
            break;
        case Axis::LB:
            s.lb = value;
            break;
        case Axis::LC:
            s.lc = value;
            break;
        case Axis::LBC:
            s.lb = s.lc = value;
            break;
        case Axis::LAB:
            s.la = s.lb = value;
            break;
        case Axis::VEA:
            a.ve_a = value;
            break;
        case Axis::VEB:
            a.ve_b = value;
            break;
        case Axis::VEC:
            a.ve_c = value;
            break;
        case Axis::VEBC:
            a.ve_b = a.ve_c = value;
            break;
        case Axis::VEAB:
            a.ve_a = a.ve_b = value;
            break;
    }
}

double evaluate_key_rate(const ProtocolScenario &scenario, const AttackSpec &attack) {
    return key_rate(scenario, attack.resolve()).raw;
}

const char *to_string(FrontierFlag flag) {
    switch (flag) {
        case FrontierFlag::Ok:
            return "ok";
        case FrontierFlag::Edge:
            return "edge";
        case FrontierFlag::Unconverged:
            return "unconverged";
        case FrontierFlag::Infeasible:
            return "infeasible";
    }
    return "?";
}

SweepRow frontier_point(const FrontierSpec &spec, double swept_value) {
    ProtocolScenario scenario = spec.scenario;
    AttackSpec attack = spec.attack;
    set_axis(scenario, attack, spec.swept, swept_value);
    auto k_at = [&](double r) {
        set_axis(scenario, attack, spec.responding, r);
        return evaluate_key_rate(scenario, attack);
    };

    SweepRow row;
    row.swept = swept_value;
    double k_lo = k_at(spec.respond_min);
    if (!(k_lo > spec.threshold)) {
        row.responding = -1;
        row.k_at_frontier = k_lo;
        row.flag = FrontierFlag::Infeasible;
        return row;
    }
    double k_hi = k_at(spec.respond_max);
    if (k_hi > spec.threshold) {
        row.responding = spec.respond_max;
        row.k_at_frontier = k_hi;
        row.flag = FrontierFlag::Edge;
        return row;
    }
    double lo = spec.respond_min;
    double hi = spec.respond_max;
    int iter = 0;
    while (iter < kFrontierMaxIterations &&
           !(hi - lo <= kFrontierTolerance && std::abs(k_lo - spec.threshold) <= kFrontierKTolerance)) {
        double mid = 0.5 * (lo + hi);
        double k = k_at(mid);
        if (k > spec.threshold) {
            lo = mid;
            k_lo = k;
        } else {
            hi = mid;
        }
        iter++;
    }
    row.responding = lo;
    row.k_at_frontier = k_lo;
    row.iterations = iter;
    if (std::abs(k_lo - spec.threshold) > kFrontierKTolerance) {
        row.flag = FrontierFlag::Unconverged;
    }
    return row;
}

std::vector<SweepRow> frontier(const FrontierSpec &spec) {
    if (!std::isfinite(spec.threshold)) {
        fail(ErrorKind::InvalidParameter, "threshold must be finite");
    }
    if (!(spec.respond_max > spec.respond_min)) {
        fail(ErrorKind::InvalidParameter, "responding range must be non-empty");
    }
    auto xs = spec.grid.values();
    std::vector<SweepRow> rows(xs.size());
    parallel_for(xs.size(), spec.jobs, [&](std::size_t i) { rows[i] = frontier_point(spec, xs[i]); });
    return rows;
}

bool frontier_monotone(const std::vector<SweepRow> &rows) {
    double prev = INFINITY;
    for (const auto &r : rows) {
        double value = r.flag == FrontierFlag::Infeasible ? -1 : r.responding;
        if (value > prev + 2 * kFrontierTolerance) {
            return false;
        }
        prev = value;
    }
    return true;
}

CoherentAttack region_attack(const RegionMapSpec &spec, double ga, double gb) {
    if (spec.context == RegionContext::QccSymmetric) {
        return CoherentAttack::epr(spec.ve_a, spec.ve_b, spec.ve_c, ga, ga, gb);
    }
    return CoherentAttack::epr(spec.ve_a, spec.ve_b, spec.ve_c, gb, ga, ga);
}

std::vector<RegionRow> region_map(const RegionMapSpec &spec) {
    for (double v : {spec.ve_a, spec.ve_b, spec.ve_c}) {
        if (!(v >= 1)) {
            fail(ErrorKind::InvalidParameter, fmt::format("thermal variance must be >= 1, got {}", v));
        }
    }
    auto gs = spec.grid.values();
    std::vector<RegionRow> rows(gs.size() * gs.size());
    parallel_for(rows.size(), spec.jobs, [&](std::size_t i) {
        double ga = gs[i / gs.size()];
        double gb = gs[i % gs.size()];
        auto region = classify_region(region_attack(spec, ga, gb), spec.context);
        rows[i] = {ga, gb, region != RegionClass::Invalid, region};
    });
    return rows;
}

std::string format_number(double value) {
    if (value == 0) {
        return "0";
    }
    return fmt::format("{:.10g}", value);
}

void write_frontier_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    out << kFrontierCsvHeader << '\n';
    for (const auto &r : rows) {
        out << format_number(r.swept) << ',' << format_number(r.responding) << ',' << format_number(r.k_at_frontier)
            << ',' << r.iterations << ',' << to_string(r.flag) << '\n';
    }
}

void write_region_csv(std::ostream &out, const std::vector<RegionRow> &rows) {
    out << kRegionCsvHeader << '\n';
    for (const auto &r : rows) {
        out << format_number(r.ga) << ',' << format_number(r.gb) << ',' << (r.bona_fide ? "true" : "false") << ','
            << to_string(r.region) << '\n';
    }
}

}  // namespace cvmdi
