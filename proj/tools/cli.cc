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

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "cvmdi/error.h"
#include "cvmdi/keyrates.h"
#include "cvmdi/montecarlo.h"
#include "cvmdi/report_io.h"
#include "cvmdi/sweeps.h"

namespace cvmdi::cli {

namespace {

using nlohmann::json;

const std::vector<std::string> kSubcommands{"keyrate", "frontier-distance", "frontier-noise", "region-map", "montecarlo"};

struct Options {
    std::string protocol = "qcc";
    std::string attack = "cloner";
    std::string recon = "rr";
    std::optional<double> v, beta, alpha;
    std::optional<double> la, lb, lc;
    std::optional<double> ve, ve_a, ve_b, ve_c;
    std::optional<double> g1, g2, g3, gp1, gp2, gp3;
    std::optional<double> kappa;
    std::optional<double> threshold;
    std::optional<std::string> grid;
    std::optional<std::string> sweep, respond;
    std::optional<double> rmax;
    std::string out;
    std::optional<std::string> format;
    std::uint64_t seed = 1;
    std::size_t n = 100000;
    std::string config;
    unsigned jobs = 1;
    std::string dump_samples;
    std::string dump_cov;
};

void add_common(CLI::App &cmd, Options &o) {
    cmd.add_option("--protocol", o.protocol, "qcc or qss");
    cmd.add_option("--attack", o.attack, "cloner | coherent:<preset> | coherent:custom");
    cmd.add_option("--recon", o.recon, "rr or dr");
    cmd.add_option("--v", o.v, "modulation variance V (SNU)");
    cmd.add_option("--beta", o.beta, "reconciliation efficiency");
    cmd.add_option("--alpha", o.alpha, "fibre loss, dB/km");
    cmd.add_option("--la", o.la, "Alice-relay distance, km");
    cmd.add_option("--lb", o.lb, "Bob-relay distance, km");
    cmd.add_option("--lc", o.lc, "Charlie-relay distance, km");
    cmd.add_option("--ve", o.ve, "Eve's variance on every channel");
    cmd.add_option("--ve-a", o.ve_a, "Eve's variance on Alice's channel");
    cmd.add_option("--ve-b", o.ve_b, "Eve's variance on Bob's channel");
    cmd.add_option("--ve-c", o.ve_c, "Eve's variance on Charlie's channel");
    cmd.add_option("--g1", o.g1, "x-correlation E_A-E_B (coherent:custom)");
    cmd.add_option("--g2", o.g2, "x-correlation E_A-E_C (coherent:custom)");
    cmd.add_option("--g3", o.g3, "x-correlation E_B-E_C (coherent:custom)");
    cmd.add_option("--gp1", o.gp1, "p-correlation E_A-E_B, default -g1");
    cmd.add_option("--gp2", o.gp2, "p-correlation E_A-E_C, default -g2");
    cmd.add_option("--gp3", o.gp3, "p-correlation E_B-E_C, default -g3");
    cmd.add_option("--kappa", o.kappa, "scale of the primary correlation in *_scaled presets");
    cmd.add_option("--threshold", o.threshold, "key-rate threshold for frontiers");
    cmd.add_option("--grid", o.grid, "min:max:step");
    cmd.add_option("--out", o.out, "output path (default stdout)");
    cmd.add_option("--format", o.format, "csv or json");
    cmd.add_option("--seed", o.seed, "Monte Carlo seed");
    cmd.add_option("--n", o.n, "Monte Carlo shots");
    cmd.add_option("--config", o.config, "key = value config file (also $CVMDI_CONFIG)");
    cmd.add_option("--jobs", o.jobs, "worker threads");
}

ProtocolScenario scenario_from(const Options &o) {
    ProtocolScenario s;
    if (o.protocol == "qcc") {
        s.kind = ProtocolKind::QCC;
    } else if (o.protocol == "qss") {
        s.kind = ProtocolKind::QSS;
    } else {
        fail(ErrorKind::InvalidParameter, "--protocol must be qcc or qss, got '" + o.protocol + "'");
    }
    if (o.recon == "rr") {
        s.reconciliation = Reconciliation::RR;
    } else if (o.recon == "dr") {
        s.reconciliation = Reconciliation::DR;
    } else {
        fail(ErrorKind::InvalidParameter, "--recon must be rr or dr, got '" + o.recon + "'");
    }
    s.modulation_variance = o.v.value_or(kDefaultModulationVariance);
    s.beta = o.beta.value_or(kDefaultBeta);
    s.alpha = o.alpha.value_or(kDefaultAlpha);
    s.la = o.la.value_or(0);
    s.lb = o.lb.value_or(0);
    s.lc = o.lc.value_or(0);
    s.validate();
    return s;
}

AttackSpec attack_from(const Options &o) {
    AttackSpec a;
    double ve = o.ve.value_or(1);
    a.ve_a = o.ve_a.value_or(ve);
    a.ve_b = o.ve_b.value_or(ve);
    a.ve_c = o.ve_c.value_or(ve);
    const std::string prefix = "coherent:";
    if (o.attack == "cloner") {
        a.family = AttackSpec::Family::Cloner;
    } else if (o.attack == "coherent:custom") {
        a.family = AttackSpec::Family::CoherentCustom;
        a.g1 = o.g1.value_or(0);
        a.g2 = o.g2.value_or(0);
        a.g3 = o.g3.value_or(0);
        a.gp1 = o.gp1.value_or(-a.g1);
        a.gp2 = o.gp2.value_or(-a.g2);
        a.gp3 = o.gp3.value_or(-a.g3);
    } else if (o.attack.rfind(prefix, 0) == 0) {
        a.family = AttackSpec::Family::CoherentPreset;
        try {
            a.preset.kind = parse_preset(o.attack.substr(prefix.size()));
        } catch (const Error &e) {
            fail(ErrorKind::InvalidParameter, e.what());
        }
        a.preset.kappa = o.kappa.value_or(a.preset.kappa);
    } else {
        fail(ErrorKind::InvalidParameter, "unknown --attack '" + o.attack + "'");
    }
    return a;
}

json params_json(const Options &o, const ProtocolScenario &s, const AttackSpec &a) {
    json p = to_json(s);
    p.update(to_json(a));
    if (a.family == AttackSpec::Family::CoherentCustom) {
        p.update({{"g1", a.g1}, {"g2", a.g2}, {"g3", a.g3}, {"gp1", a.gp1}, {"gp2", a.gp2}, {"gp3", a.gp3}});
    }
    p["jobs"] = o.jobs;
    return p;
}

std::string output_format(const Options &o, const char *fallback) {
    std::string f = o.format.value_or(fallback);
    if (f != "csv" && f != "json") {
        fail(ErrorKind::InvalidParameter, "--format must be csv or json, got '" + f + "'");
    }
    return f;
}

// Writes to --out when given, otherwise to `out`.
template <typename Writer>
void emit(const Options &o, std::ostream &out, Writer &&write) {
    if (o.out.empty()) {
        write(out);
        return;
    }
    std::ofstream file(o.out);
    if (!file) {
        fail(ErrorKind::InvalidParameter, "cannot open output file '" + o.out + "'");
    }
    write(file);
}

void write_file(const std::string &path, const std::function<void(std::ostream &)> &write) {
    std::ofstream file(path);
    if (!file) {
        fail(ErrorKind::InvalidParameter, "cannot open '" + path + "'");
    }
    write(file);
}

int cmd_keyrate(const Options &o, std::ostream &out) {
    auto scenario = scenario_from(o);
    auto attack = attack_from(o);
    auto model = attack.resolve();
    auto report = key_rate(scenario, model);
    if (!o.dump_cov.empty()) {
        auto state = relay_state(scenario, model);
        write_file(o.dump_cov, [&](std::ostream &f) { write_csv(f, state.cov.matrix()); });
    }
    auto format = output_format(o, "json");
    emit(o, out, [&](std::ostream &os) {
        if (format == "json") {
            json j = to_json(report);
            j["attack_params"] = to_json(model);
            j["params"] = params_json(o, scenario, attack);
            os << j.dump(2) << '\n';
        } else {
            os << "pair,honest_info,eve_info,raw,key_rate\n";
            for (const auto &p : report.pairs) {
                os << p.name << ',' << format_number(p.honest_info) << ',' << format_number(p.eve_info) << ','
                   << format_number(p.raw) << ',' << format_number(p.reported()) << '\n';
            }
        }
    });
    return kExitOk;
}

int run_frontier(const Options &o, std::ostream &out, std::ostream &err, bool noise) {
    Options eff = o;
    if (noise) {
        eff.la = o.la.value_or(1);
        eff.lb = o.lb.value_or(3);
        eff.lc = o.lc.value_or(3);
    }
    auto scenario = scenario_from(eff);
    auto attack = attack_from(eff);
    bool qcc = scenario.kind == ProtocolKind::QCC;

    FrontierSpec spec;
    spec.scenario = scenario;
    spec.attack = attack;
    spec.jobs = std::max(1u, o.jobs);
    spec.threshold = o.threshold.value_or(attack.family == AttackSpec::Family::Cloner ? 1e-3 : 0.0);
    if (noise) {
        spec.swept = parse_axis(o.sweep.value_or(qcc ? "ve-a" : "ve-c"));
        spec.responding = parse_axis(o.respond.value_or(qcc ? "ve-bc" : "ve-ab"));
        spec.grid = Grid::parse(o.grid.value_or("1:3:0.1"));
        spec.respond_min = 1;
        spec.respond_max = o.rmax.value_or(50);
        if (is_distance_axis(spec.swept) || is_distance_axis(spec.responding)) {
            fail(ErrorKind::InvalidParameter, "frontier-noise sweeps thermal-variance axes");
        }
        if (spec.grid.min < 1) {
            fail(ErrorKind::InvalidParameter, "thermal variances below 1 are not physical");
        }
    } else {
        spec.swept = parse_axis(o.sweep.value_or(qcc ? "la" : "lc"));
        spec.responding = parse_axis(o.respond.value_or(qcc ? "lbc" : "lab"));
        spec.grid = Grid::parse(o.grid.value_or("0:30:1"));
        spec.respond_min = 0;
        spec.respond_max = o.rmax.value_or(200);
        if (!is_distance_axis(spec.swept) || !is_distance_axis(spec.responding)) {
            fail(ErrorKind::InvalidParameter, "frontier-distance sweeps distance axes");
        }
        if (spec.grid.min < 0) {
            fail(ErrorKind::InvalidParameter, "distances must be >= 0");
        }
    }
    if (!std::isfinite(spec.threshold)) {
        fail(ErrorKind::InvalidParameter, "threshold must be finite");
    }

    auto rows = frontier(spec);
    if (!frontier_monotone(rows)) {
        err << "warning: frontier is not monotone along " << to_string(spec.swept) << '\n';
    }
    for (const auto &r : rows) {
        if (r.flag == FrontierFlag::Unconverged) {
            err << "warning: key rate is discontinuous at the frontier for " << to_string(spec.swept) << " = "
                << format_number(r.swept) << '\n';
        }
    }
    auto format = output_format(o, "csv");
    emit(o, out, [&](std::ostream &os) {
        if (format == "csv") {
            write_frontier_csv(os, rows);
        } else {
            json j = {{"rows", to_json(rows)}, {"monotone", frontier_monotone(rows)}};
            j["params"] = params_json(o, scenario, attack);
            j["params"].update({{"sweep", to_string(spec.swept)},
                                {"respond", to_string(spec.responding)},
                                {"threshold", spec.threshold},
                                {"grid", {spec.grid.min, spec.grid.max, spec.grid.step}},
                                {"rmax", spec.respond_max}});
            os << j.dump(2) << '\n';
        }
    });
    return kExitOk;
}

int cmd_region_map(const Options &o, std::ostream &out) {
    auto scenario = scenario_from(o);
    RegionMapSpec spec;
    spec.context = scenario.kind == ProtocolKind::QCC ? RegionContext::QccSymmetric : RegionContext::QssSymmetric;
    double ve = o.ve.value_or(2);
    spec.ve_a = o.ve_a.value_or(ve);
    spec.ve_b = o.ve_b.value_or(ve);
    spec.ve_c = o.ve_c.value_or(ve);
    spec.grid = Grid::parse(o.grid.value_or("-2.5:2.5:0.05"));
    spec.jobs = std::max(1u, o.jobs);
    auto rows = region_map(spec);
    auto format = output_format(o, "csv");
    emit(o, out, [&](std::ostream &os) {
        if (format == "csv") {
            write_region_csv(os, rows);
            return;
        }
        json jrows = json::array();
        for (const auto &r : rows) {
            jrows.push_back({{"gA", r.ga}, {"gB", r.gb}, {"bona_fide", r.bona_fide}, {"class", to_string(r.region)}});
        }
        json j = {{"rows", jrows}};
        j["params"] = {{"protocol", o.protocol},
                       {"ve_a", spec.ve_a},
                       {"ve_b", spec.ve_b},
                       {"ve_c", spec.ve_c},
                       {"grid", {spec.grid.min, spec.grid.max, spec.grid.step}}};
        os << j.dump(2) << '\n';
    });
    return kExitOk;
}

int cmd_montecarlo(const Options &o, std::ostream &out) {
    auto scenario = scenario_from(o);
    auto attack = attack_from(o);
    if (o.n == 0) {
        fail(ErrorKind::InvalidParameter, "--n must be positive");
    }
    SampleConfig cfg;
    cfg.n_shots = o.n;
    cfg.seed = o.seed;
    cfg.scenario = scenario;
    cfg.attack = attack.resolve();
    cfg.jobs = std::max(1u, o.jobs);

    auto samples = simulate_samples(cfg);
    const std::vector<std::string> outcomes{"X_D", "X_E", "P_F"};
    std::vector<std::string> modes;
    for (const auto &c : samples.columns) {
        if (c.rfind("X_", 0) == 0 && std::find(outcomes.begin(), outcomes.end(), c) == outcomes.end()) {
            modes.push_back(c.substr(2));
        }
    }
    auto stats = stats_from_samples(samples, modes, outcomes);
    stats.seed = cfg.seed;
    auto analytic = relay_state(scenario, cfg.attack).cov;
    if (!o.dump_samples.empty()) {
        write_file(o.dump_samples, [&](std::ostream &f) { write_samples_csv(f, samples); });
    }
    output_format(o, "json");
    emit(o, out, [&](std::ostream &os) {
        json j = to_json(stats);
        j["analytic_modes"] = analytic.labels();
        j["analytic_covariance"] = to_json(analytic.matrix());
        j["max_se_deviation"] = max_se_deviation(stats, analytic);
        j["params"] = params_json(o, scenario, attack);
        j["params"].update({{"n", o.n}, {"seed", o.seed}});
        os << j.dump(2) << '\n';
    });
    return kExitOk;
}

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return "";
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Flat `key = value` lines; '#' starts a comment. Keys are flag names.
std::vector<std::string> read_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorKind::InvalidParameter, "cannot read config file '" + path + "'");
    }
    std::vector<std::string> args;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::InvalidParameter, path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key.rfind("--", 0) != 0) {
            key = "--" + key;
        }
        args.push_back(key);
        args.push_back(value);
    }
    return args;
}

std::optional<std::string> config_path(const std::vector<std::string> &args) {
    for (std::size_t i = 0; i < args.size(); i++) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            return args[i + 1];
        }
        if (args[i].rfind("--config=", 0) == 0) {
            return args[i].substr(9);
        }
    }
    if (const char *env = std::getenv("CVMDI_CONFIG"); env && *env) {
        return std::string(env);
    }
    return std::nullopt;
}

int dispatch(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Key rates and security frontiers for CV measurement-device-independent QCC/QSS", "cvmdi"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    std::vector<CLI::App *> subs;
    for (const auto &name : kSubcommands) {
        auto *sub = app.add_subcommand(name);
        add_common(*sub, o);
        subs.push_back(sub);
    }
    subs[0]->description("key rate at a single parameter point (JSON)");
    subs[0]->add_option("--dump-cov", o.dump_cov, "write the post-relay covariance as CSV");
    subs[1]->description("maximal responding distance with K > threshold along a swept distance (CSV)");
    subs[2]->description("maximal tolerable thermal noise along a swept noise axis (CSV)");
    subs[3]->description("physicality and entanglement classes of Eve's correlations (CSV)");
    subs[4]->description("sampling oracle for the post-relay covariance (JSON)");
    subs[4]->add_option("--dump-samples", o.dump_samples, "write raw per-shot samples as CSV");
    for (auto i : {1, 2}) {
        subs[i]->add_option("--sweep", o.sweep, "swept axis (la, lb, lc, lbc, lab, ve-a, ..., ve-bc, ve-ab)");
        subs[i]->add_option("--respond", o.respond, "responding axis");
        subs[i]->add_option("--rmax", o.rmax, "upper end of the responding search range");
    }

    if (!args.empty() && std::find(kSubcommands.begin(), kSubcommands.end(), args[0]) != kSubcommands.end()) {
        if (auto path = config_path(args)) {
            auto cfg = read_config(*path);
            args.insert(args.begin() + 1, cfg.begin(), cfg.end());
        }
    }
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &e) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help("cvmdi"));
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    auto *chosen = app.get_subcommands().front();
    const auto &name = chosen->get_name();
    if (name == "keyrate") {
        return cmd_keyrate(o, out);
    }
    if (name == "frontier-distance") {
        return run_frontier(o, out, err, false);
    }
    if (name == "frontier-noise") {
        return run_frontier(o, out, err, true);
    }
    if (name == "region-map") {
        return cmd_region_map(o, out);
    }
    return cmd_montecarlo(o, out);
}

}  // namespace

int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
    try {
        return dispatch(std::move(args), out, err);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::InvalidParameter:
            case ErrorKind::InvalidArgument:
            case ErrorKind::Unimplemented:
                return kExitInvalidParameters;
            default:
                return kExitNumerical;
        }
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace cvmdi::cli
