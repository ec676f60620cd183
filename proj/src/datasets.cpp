#include <json.hpp>

#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "pdcsim/cli.hpp"
#include "pdcsim/gaussian.hpp"

namespace pdcsim::cli {

namespace {

constexpr double kFigureTauMax = 1.0;
constexpr double kFigureYMax = 0.95;
constexpr double kFigureMismatch = 0.9;

const std::vector<std::string> kPointColumns = {
    "tau", "y", "n1", "n2", "nu1", "nu2", "entropy1", "entropy2", "nu_tilde_minus", "log_negativity"};

std::vector<double> point_row(const ModelParams& p, const InitialState& init) {
    const auto n = mean_photon_numbers(p, init);
    const auto r = gaussian::full_report(p, init);
    return {p.tau(), p.y(), n.n1, n.n2, r.nu1, r.nu2, r.entropy1, r.entropy2, r.nu_tilde_minus,
            r.log_negativity};
}

void describe_point(Dataset& d, const RunConfig& c) {
    d.metadata.emplace_back("state", c.state.describe());
    d.metadata.emplace_back("w1", format_number(c.w1, c.precision));
    d.metadata.emplace_back("w2", format_number(c.w2, c.precision));
}

std::string label(double y) { return y == 0.0 ? "y0" : "y" + format_number(y, 6); }

double entropy1(const ModelParams& p, const InitialState& init) {
    return gaussian::full_report(p, init).entropy1;
}

double log_neg(const ModelParams& p, const InitialState& init) {
    return gaussian::full_report(p, init).log_negativity;
}

double photons1(const ModelParams& p, const InitialState& init) {
    return mean_photon_numbers(p, init).n1;
}

using Observable = std::function<double(const ModelParams&, const InitialState&)>;

struct Curve {
    std::string column;
    Observable observable;
    InitialState init;
    double y = 0.0;  // used by tau-grid presets
};

Dataset tau_figure(const RunConfig& c, const std::vector<Curve>& curves) {
    if (c.tau_set) throw UsageError("--tau: preset " + c.preset + " sweeps tau; use --from/--to");
    const double from = c.range_set ? c.from : 0.0;
    const double to = c.range_set ? c.to : kFigureTauMax;
    if (!std::isfinite(from) || !std::isfinite(to) || from < 0.0 || to < 0.0)
        throw UsageError("--from/--to: tau grid must be >= 0");
    Dataset d;
    d.columns.push_back("tau");
    for (const auto& curve : curves) d.columns.push_back(curve.column);
    for (double tau : linear_grid(from, to, c.steps)) {
        std::vector<double> row{tau};
        for (const auto& curve : curves)
            row.push_back(curve.observable(ModelParams(curve.y, tau, c.w1, c.w2), curve.init));
        d.rows.push_back(std::move(row));
        d.max_tau = std::max(d.max_tau, tau);
    }
    return d;
}

Dataset y_figure(const RunConfig& c, double default_tau, const Curve& curve) {
    const double tau = c.tau_set ? c.tau : default_tau;
    const double from = c.range_set ? c.from : 0.0;
    const double to = c.range_set ? c.to : kFigureYMax;
    for (double v : {from, to})
        if (!std::isfinite(v) || v < 0.0 || v > kMaxMismatch)
            throw UsageError("--from/--to: y grid must lie in [0, 0.999999]");
    Dataset d;
    d.columns = {"y", curve.column};
    for (double y : linear_grid(from, to, c.steps))
        d.rows.push_back({y, curve.observable(ModelParams(y, tau, c.w1, c.w2), curve.init)});
    d.metadata.emplace_back("tau", format_number(tau, c.precision));
    d.max_tau = tau;
    return d;
}

}  // namespace

std::vector<double> linear_grid(double from, double to, int steps) {
    if (steps < 2) throw UsageError("--steps: must be >= 2");
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i)
        grid[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
    grid.back() = to;
    return grid;
}

Dataset photons_dataset(const RunConfig& c) {
    const ModelParams p(c.y, c.tau, c.w1, c.w2);
    const auto n = mean_photon_numbers(p, c.state);
    Dataset d;
    d.kind = "photons";
    d.columns = {"tau", "y", "n1", "n2", "photon_difference", "squeezing_r"};
    d.rows.push_back({p.tau(), p.y(), n.n1, n.n2, photon_difference(p, c.state), squeezing_parameter(p)});
    describe_point(d, c);
    d.max_tau = c.tau;
    return d;
}

Dataset entangle_dataset(const RunConfig& c) {
    const ModelParams p(c.y, c.tau, c.w1, c.w2);
    Dataset d;
    d.kind = "entangle";
    d.columns = kPointColumns;
    d.rows.push_back(point_row(p, c.state));
    describe_point(d, c);
    d.max_tau = c.tau;
    return d;
}

Dataset sweep_dataset(const RunConfig& c) {
    if (!c.var) throw UsageError("--var: required (tau or y)");
    Dataset d;
    d.kind = "sweep";
    d.columns = kPointColumns;
    for (double v : linear_grid(c.from, c.to, c.steps)) {
        const ModelParams p = *c.var == SweepVar::Tau ? ModelParams(c.y, v, c.w1, c.w2)
                                                      : ModelParams(v, c.tau, c.w1, c.w2);
        d.rows.push_back(point_row(p, c.state));
        d.max_tau = std::max(d.max_tau, p.tau());
    }
    d.metadata.emplace_back("var", *c.var == SweepVar::Tau ? "tau" : "y");
    describe_point(d, c);
    return d;
}

Dataset figure_dataset(const RunConfig& c) {
    const InitialState vacuum = InitialState::vacuum();
    const InitialState thermal = c.state_set ? c.state : InitialState::thermal(1.0, 2.0);
    const std::string t = "thermal";
    const std::string y0 = label(0.0);
    const std::string y9 = label(kFigureMismatch);

    Dataset d;
    if (c.preset == "fig1a") {
        d = tau_figure(c, {{"n1_" + y0, photons1, vacuum, 0.0},
                           {"n1_" + y9, photons1, vacuum, kFigureMismatch}});
        d.metadata.emplace_back("state", "vacuum");
    } else if (c.preset == "fig1b") {
        d = y_figure(c, 0.9, {"n1", photons1, vacuum});
        d.metadata.emplace_back("state", "vacuum");
    } else if (c.preset == "fig2a") {
        d = tau_figure(c, {{"entropy_" + y0, entropy1, vacuum, 0.0},
                           {"entropy_" + y9, entropy1, vacuum, kFigureMismatch}});
        d.metadata.emplace_back("state", "vacuum");
    } else if (c.preset == "fig2b") {
        d = y_figure(c, 0.9, {"entropy", entropy1, vacuum});
        d.metadata.emplace_back("state", "vacuum");
    } else if (c.preset == "fig3a") {
        d = tau_figure(c, {{"log_negativity_vacuum_" + y0, log_neg, vacuum, 0.0},
                           {"log_negativity_vacuum_" + y9, log_neg, vacuum, kFigureMismatch},
                           {"log_negativity_thermal_" + y0, log_neg, thermal, 0.0},
                           {"log_negativity_thermal_" + y9, log_neg, thermal, kFigureMismatch}});
        d.metadata.emplace_back("thermal_state", thermal.describe());
        if (!c.state_set)
            d.assumptions.push_back("thermal occupations (1,2) are taken from the fig3c setting");
    } else if (c.preset == "fig3b") {
        d = y_figure(c, 0.7, {"log_negativity_thermal", log_neg, thermal});
        d.metadata.emplace_back("thermal_state", thermal.describe());
        if (!c.state_set)
            d.assumptions.push_back("thermal occupations (1,2) are taken from the fig3c setting");
    } else if (c.preset == "fig3c") {
        d = tau_figure(c, {{"entropy1_thermal_" + y0, entropy1, thermal, 0.0},
                           {"entropy1_thermal_" + y9, entropy1, thermal, kFigureMismatch},
                           {"log_negativity_thermal_" + y9, log_neg, thermal, kFigureMismatch}});
        d.metadata.emplace_back("thermal_state", thermal.describe());
    } else {
        throw UsageError("preset: unknown figure preset '" + c.preset + "'");
    }
    d.kind = "figure";
    d.metadata.insert(d.metadata.begin(), {"preset", c.preset});
    d.metadata.emplace_back("w1", format_number(c.w1, c.precision));
    d.metadata.emplace_back("w2", format_number(c.w2, c.precision));
    return d;
}

std::string format_number(double value, int precision) {
    if (value == 0.0) return "0";  // folds -0
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general,
                                         precision);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

void write_csv(const Dataset& data, int precision, std::ostream& os) {
    for (std::size_t i = 0; i < data.columns.size(); ++i) {
        if (i) os << ',';
        os << data.columns[i];
    }
    os << '\n';
    for (const auto& row : data.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_number(row[i], precision);
        }
        os << '\n';
    }
}

void write_json(const Dataset& data, int precision, std::ostream& os) {
    using nlohmann::ordered_json;
    auto rounded = [precision](double v) {
        const std::string text = format_number(v, precision);
        double out = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), out);
        return out;
    };

    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = data.kind;
    ordered_json meta = ordered_json::object();
    for (const auto& [k, v] : data.metadata) meta[k] = v;
    meta["assumptions"] = data.assumptions;
    doc["metadata"] = meta;
    doc["columns"] = data.columns;
    ordered_json rows = ordered_json::array();
    for (const auto& row : data.rows) {
        ordered_json r = ordered_json::array();
        for (double v : row) r.push_back(rounded(v));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    os << doc.dump(2) << '\n';
}

}  // namespace pdcsim::cli
