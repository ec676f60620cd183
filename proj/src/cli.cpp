#include "pdcsim/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "pdcsim/gaussian.hpp"

namespace pdcsim::cli {

namespace {

double parse_real(const std::string& text, const std::string& what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty())
        throw UsageError(what + ": '" + text + "' is not a number");
    return value;
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError(what + ": expected two comma-separated numbers");
    return {parse_real(text.substr(0, comma), what), parse_real(text.substr(comma + 1), what)};
}

void check_y(double y, const std::string& flag) {
    if (!std::isfinite(y) || y < 0.0 || y >= 1.0) throw UsageError(flag + ": y must lie in [0,1)");
    if (y > kMaxMismatch)
        throw UsageError(flag + ": y must not exceed 0.999999 (singular at y = 1)");
}

void check_tau(double tau, const std::string& flag) {
    if (!std::isfinite(tau) || tau < 0.0) throw UsageError(flag + ": tau must be finite and >= 0");
}

struct RawOptions {
    std::string state = "vacuum";
    std::string format = "csv";
    std::string var;
    std::string out;
    double tol = 0.0;
};

void add_point_options(CLI::App* sub, RunConfig& cfg, RawOptions& raw) {
    sub->add_option("--tau", cfg.tau, "Dimensionless interaction time g t");
    sub->add_option("--y", cfg.y, "Dimensionless mismatch delta/g in [0,1)");
    sub->add_option("--w1", cfg.w1, "Mode-1 frequency in units of g");
    sub->add_option("--w2", cfg.w2, "Mode-2 frequency in units of g");
    sub->add_option("--state", raw.state, "vacuum | coherent:RE,IM | thermal:N1,N2");
    sub->add_option("--out", raw.out, "Output file (default: stdout)");
    sub->add_option("--format", raw.format, "csv | json");
    sub->add_option("--precision", cfg.precision, "Significant digits");
}

void add_grid_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--from", cfg.from, "Grid start");
    sub->add_option("--to", cfg.to, "Grid end");
    sub->add_option("--steps", cfg.steps, "Number of grid points (>= 2)");
}

bool given(const CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

}  // namespace

InitialState parse_state(const std::string& text) {
    try {
        if (text == "vacuum") return InitialState::vacuum();
        if (text.rfind("coherent:", 0) == 0) {
            const auto [re, im] = parse_pair(text.substr(9), "--state");
            return InitialState::coherent({re, im});
        }
        if (text.rfind("thermal:", 0) == 0) {
            const auto [n1, n2] = parse_pair(text.substr(8), "--state");
            return InitialState::thermal(n1, n2);
        }
    } catch (const DomainError& e) {
        throw UsageError(std::string("--state: ") + e.what());
    }
    throw UsageError("--state: expected vacuum, coherent:RE,IM or thermal:N1,N2, got '" + text + "'");
}

const std::vector<std::string>& figure_presets() {
    static const std::vector<std::string> presets = {"fig1a", "fig1b", "fig2a", "fig2b",
                                                     "fig3a", "fig3b", "fig3c"};
    return presets;
}

RunConfig parse_args(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return parse_args(args);
}

RunConfig parse_args(const std::vector<std::string>& args) {
    RunConfig cfg;
    RawOptions raw;

    CLI::App app{"Photon statistics and entanglement of phase-mismatched two-mode parametric "
                 "interaction",
                 "pdcsim"};
    app.require_subcommand(1, 1);

    auto* photons = app.add_subcommand("photons", "Mean photon numbers at one (tau, y) point");
    auto* entangle = app.add_subcommand("entangle", "Entanglement report at one (tau, y) point");
    auto* sweep = app.add_subcommand("sweep", "One-dimensional sweep over tau or y");
    auto* figure = app.add_subcommand("figure", "Dataset for a figure preset");
    auto* oracle = app.add_subcommand("oracle-check", "Compare closed forms with the Fock-space oracle");

    for (auto* sub : {photons, entangle, sweep, figure, oracle}) add_point_options(sub, cfg, raw);
    sweep->add_option("--var", raw.var, "Sweep variable: tau | y");
    add_grid_options(sweep, cfg);
    add_grid_options(figure, cfg);
    figure->add_option("preset", cfg.preset, "fig1a | fig1b | fig2a | fig2b | fig3a | fig3b | fig3c")
        ->required();
    oracle->add_option("--nmax", cfg.nmax, "Per-mode Fock truncation");
    oracle->add_option("--tol", raw.tol, "Replace every comparison tolerance with this value");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested(app.help());
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* sub = nullptr;
    if (photons->parsed()) {
        cfg.command = Command::Photons;
        sub = photons;
    } else if (entangle->parsed()) {
        cfg.command = Command::Entangle;
        sub = entangle;
    } else if (sweep->parsed()) {
        cfg.command = Command::Sweep;
        sub = sweep;
    } else if (figure->parsed()) {
        cfg.command = Command::Figure;
        sub = figure;
    } else {
        cfg.command = Command::OracleCheck;
        sub = oracle;
    }

    cfg.tau_set = given(sub, "--tau");
    cfg.y_set = given(sub, "--y");
    cfg.state_set = given(sub, "--state");
    cfg.steps_set = given(sub, "--steps");
    cfg.range_set = given(sub, "--from") || given(sub, "--to");

    cfg.state = parse_state(raw.state);
    if (raw.format == "csv") {
        cfg.format = Format::Csv;
    } else if (raw.format == "json") {
        cfg.format = Format::Json;
    } else {
        throw UsageError("--format: expected csv or json, got '" + raw.format + "'");
    }
    if (!raw.out.empty()) cfg.out = raw.out;
    if (cfg.precision < 1 || cfg.precision > 17) throw UsageError("--precision: must lie in [1,17]");
    if (!std::isfinite(cfg.w1) || cfg.w1 <= 0.0) throw UsageError("--w1: must be finite and > 0");
    if (!std::isfinite(cfg.w2) || cfg.w2 <= 0.0) throw UsageError("--w2: must be finite and > 0");
    check_y(cfg.y, "--y");
    check_tau(cfg.tau, "--tau");

    switch (cfg.command) {
        case Command::Photons:
        case Command::Entangle:
        case Command::OracleCheck:
            if (!cfg.tau_set) throw UsageError("--tau: required");
            break;
        case Command::Sweep:
            if (raw.var == "tau") {
                cfg.var = SweepVar::Tau;
            } else if (raw.var == "y") {
                cfg.var = SweepVar::Y;
            } else if (raw.var.empty()) {
                throw UsageError("--var: required (tau or y)");
            } else {
                throw UsageError("--var: expected tau or y, got '" + raw.var + "'");
            }
            if (!given(sub, "--from")) throw UsageError("--from: required");
            if (!given(sub, "--to")) throw UsageError("--to: required");
            if (*cfg.var == SweepVar::Y) {
                check_y(cfg.from, "--from");
                check_y(cfg.to, "--to");
                if (!cfg.tau_set) throw UsageError("--tau: required when sweeping y");
            } else {
                check_tau(cfg.from, "--from");
                check_tau(cfg.to, "--to");
            }
            break;
        case Command::Figure: {
            const auto& presets = figure_presets();
            if (std::find(presets.begin(), presets.end(), cfg.preset) == presets.end())
                throw UsageError("preset: unknown figure preset '" + cfg.preset + "'");
            if (cfg.y_set) throw UsageError("--y: figure presets fix their mismatch values");
            if (cfg.state_set) {
                if (cfg.preset.rfind("fig3", 0) != 0)
                    throw UsageError("--state: only the fig3 presets take a thermal input override");
                if (!cfg.state.is_thermal()) throw UsageError("--state: fig3 presets need thermal:N1,N2");
            }
            break;
        }
    }

    if (cfg.steps < 2) throw UsageError("--steps: must be >= 2");
    if (cfg.command == Command::OracleCheck) {
        try {
            fock::FockSpec spec(cfg.nmax);
        } catch (const std::exception& e) {
            throw UsageError(std::string("--nmax: ") + e.what());
        }
        if (given(sub, "--tol")) {
            if (!(raw.tol > 0.0) || !std::isfinite(raw.tol)) throw UsageError("--tol: must be > 0");
            cfg.tol.photons = cfg.tol.cm = cfg.tol.entropy = cfg.tol.log_negativity = raw.tol;
        }
    }
    return cfg;
}

OracleCheckReport oracle_check(const RunConfig& config) {
    using nlohmann::ordered_json;
    const ModelParams params(config.y, config.tau, config.w1, config.w2);
    const fock::FockSpec spec(config.nmax);

    ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = "oracle-check";
    report["params"] = {{"tau", config.tau},   {"y", config.y},
                        {"w1", config.w1},     {"w2", config.w2},
                        {"state", config.state.describe()}, {"nmax", config.nmax}};
    report["tolerances"] = {{"photons", config.tol.photons},
                            {"cm", config.tol.cm},
                            {"entropy", config.tol.entropy},
                            {"log_negativity", config.tol.log_negativity},
                            {"tail_mass", config.tol.tail}};

    fock::OracleResult oracle;
    try {
        oracle = fock::evaluate(params, config.state, spec);
    } catch (const fock::TruncationError& e) {
        report["status"] = "truncation-inadequate";
        report["error"] = e.what();
        return {report.dump(2) + "\n", kExitTruncation};
    }

    const auto n = mean_photon_numbers(params, config.state);
    const auto cm = gaussian::assemble_cm(params, config.state);
    const auto rep = gaussian::report_from_cm(cm);
    const auto mv = mean_vector(params, config.state);
    const auto& m = oracle.measurement;

    const double d_photons = std::max(std::abs(m.n1 - n.n1), std::abs(m.n2 - n.n2));
    const double d_cm = (m.cm.m - cm.m).cwiseAbs().maxCoeff();
    const double d_mean = std::max({std::abs(m.mean.x1 - mv.x1), std::abs(m.mean.p1 - mv.p1),
                                    std::abs(m.mean.x2 - mv.x2), std::abs(m.mean.p2 - mv.p2)});
    const double d_entropy = std::max(std::abs(oracle.entropy1 - rep.entropy1),
                                      std::abs(oracle.entropy2 - rep.entropy2));
    const double d_ln = std::abs(oracle.log_negativity - rep.log_negativity);

    report["analytic"] = {{"n1", n.n1},
                          {"n2", n.n2},
                          {"entropy1", rep.entropy1},
                          {"entropy2", rep.entropy2},
                          {"log_negativity", rep.log_negativity}};
    report["oracle"] = {{"n1", m.n1},
                        {"n2", m.n2},
                        {"entropy1", oracle.entropy1},
                        {"entropy2", oracle.entropy2},
                        {"log_negativity", oracle.log_negativity},
                        {"tail_mass", m.tail},
                        {"cut_mass", oracle.cut_mass},
                        {"trace", oracle.trace}};
    report["differences"] = {{"photons", d_photons},
                             {"cm_max_elementwise", d_cm},
                             {"mean_vector", d_mean},
                             {"entropy", d_entropy},
                             {"log_negativity", d_ln}};

    const bool ok_photons = d_photons < config.tol.photons;
    const bool ok_cm = d_cm < config.tol.cm && d_mean < config.tol.cm;
    const bool ok_entropy = d_entropy < config.tol.entropy;
    const bool ok_ln = d_ln < config.tol.log_negativity;
    report["checks"] = {{"photons", ok_photons},
                        {"cm", ok_cm},
                        {"entropy", ok_entropy},
                        {"log_negativity", ok_ln}};

    const bool adequate = m.tail <= config.tol.tail;
    report["truncation"] = {{"tail_mass", m.tail},
                            {"threshold", config.tol.tail},
                            {"adequate", adequate}};

    int code = kExitOk;
    if (!adequate) {
        code = kExitTruncation;
        report["status"] = "truncation-inadequate";
    } else if (!(ok_photons && ok_cm && ok_entropy && ok_ln)) {
        code = kExitCheckFailed;
        report["status"] = "fail";
    } else {
        report["status"] = "pass";
    }
    return {report.dump(2) + "\n", code};
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    std::ofstream file;
    std::ostream* sink = &out;
    if (config.out) {
        file.open(*config.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            err << "error: cannot open " << *config.out << " for writing\n";
            return kExitUsage;
        }
        sink = &file;
    }

    if (config.command == Command::OracleCheck) {
        const auto report = oracle_check(config);
        *sink << report.json;
        return report.exit_code;
    }

    Dataset data;
    switch (config.command) {
        case Command::Photons:
            data = photons_dataset(config);
            break;
        case Command::Entangle:
            data = entangle_dataset(config);
            break;
        case Command::Sweep:
            data = sweep_dataset(config);
            break;
        default:
            data = figure_dataset(config);
            break;
    }

    if (data.max_tau >= 1.0)
        err << "warning: tau >= 1 lies beyond the undepleted-pump validity bound\n";

    if (config.format == Format::Json) {
        write_json(data, config.precision, *sink);
    } else {
        write_csv(data, config.precision, *sink);
    }
    return kExitOk;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        return run(parse_args(argc, argv), out, err);
    } catch (const HelpRequested& help) {
        out << help.what();
        return kExitOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fock::CapExceeded& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace pdcsim::cli
