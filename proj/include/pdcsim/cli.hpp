#pragma once

// Command-line front end: argument parsing, datasets for single points,
// sweeps and figure presets, and the analytic-vs-oracle report.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdcsim/core.hpp"
#include "pdcsim/fock_oracle.hpp"

namespace pdcsim::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitTruncation = 3,
};

inline constexpr int kSchemaVersion = 1;
inline constexpr int kDefaultSteps = 101;
inline constexpr int kDefaultPrecision = 9;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown by parse_args for --help; what() is the help text.
class HelpRequested : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Command { Photons, Entangle, Sweep, Figure, OracleCheck };
enum class SweepVar { Tau, Y };
enum class Format { Csv, Json };

struct Tolerances {
    double photons = 1e-6;
    double cm = 1e-6;
    double entropy = 1e-4;
    double log_negativity = 1e-3;
    double tail = fock::kTailThreshold;
};

struct RunConfig {
    Command command = Command::Photons;
    InitialState state;
    double tau = 0.0;
    double y = 0.0;
    double w1 = kDefaultModeFrequency;
    double w2 = kDefaultModeFrequency;

    std::optional<SweepVar> var;
    double from = 0.0;
    double to = 0.0;
    int steps = kDefaultSteps;
    std::string preset;

    int nmax = fock::kDefaultNmax;
    Tolerances tol;
    std::optional<std::string> out;
    Format format = Format::Csv;
    int precision = kDefaultPrecision;

    // Which optional flags were given; figure presets only override what is set.
    bool tau_set = false;
    bool y_set = false;
    bool state_set = false;
    bool range_set = false;
    bool steps_set = false;
};

/// Parses `args` (without the program name). Throws UsageError naming the
/// offending flag.
RunConfig parse_args(const std::vector<std::string>& args);
RunConfig parse_args(int argc, const char* const* argv);

/// Parses `vacuum` | `coherent:RE,IM` | `thermal:N1,N2`.
InitialState parse_state(const std::string& text);

const std::vector<std::string>& figure_presets();

/// Rectangular numeric table plus free-form metadata (JSON text).
struct Dataset {
    std::string kind;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> assumptions;
    /// Largest interaction time evaluated.
    double max_tau = 0.0;
};

/// Evenly spaced grid with both endpoints included exactly.
std::vector<double> linear_grid(double from, double to, int steps);

Dataset photons_dataset(const RunConfig& config);
Dataset entangle_dataset(const RunConfig& config);
Dataset sweep_dataset(const RunConfig& config);
/// Throws UsageError for unknown presets.
Dataset figure_dataset(const RunConfig& config);

std::string format_number(double value, int precision);
void write_csv(const Dataset& data, int precision, std::ostream& os);
void write_json(const Dataset& data, int precision, std::ostream& os);

struct OracleCheckReport {
    std::string json;
    int exit_code = kExitOk;
};

OracleCheckReport oracle_check(const RunConfig& config);

/// Executes a parsed configuration; output goes to config.out or `out`,
/// diagnostics to `err`. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with usage errors mapped to exit code 2.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pdcsim::cli
