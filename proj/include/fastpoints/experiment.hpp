#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fastpoints/detector.hpp"
#include "fastpoints/drift.hpp"

namespace fastpoints {

// Fully parsed experiment description.  All defaults are already applied;
// every run() output is a pure function of this struct.
struct ExperimentConfig {
    std::string preset;
    std::uint64_t master_seed = 20260822;
    std::int64_t n_paths = 200;
    int level_min = 8;
    int level_max = 12;
    double a = 0.5;
    double epsilon = 0.0;
    DriftSpec drift;                 // zero unless configured
    std::optional<double> hurst;
    std::string output_path;         // empty -> stdout
};

// One emitted statistic.  level is 0 for rows that are not tied to a level.
struct ResultRow {
    std::string preset;
    int level = 0;
    std::string stat;
    double value = 0.0;
    double stderr_value = 0.0;
    std::optional<double> oracle;
    std::int64_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Flat key=value configuration text, in file order; later entries win.
using ConfigText = std::vector<std::pair<std::string, std::string>>;

// Reads key = value lines ('#' comments, blank lines ignored).
ConfigText load_config_file(const std::string& path);

// Appends an override; apply after file entries so the override wins.
void apply_override(ConfigText& text, const std::string& key,
                    const std::string& value);

// Recognized preset names, in canonical emission order.
const std::vector<std::string>& preset_names();

// Builds the config, applying defaults for missing keys and preset-specific
// drift defaults.  Unknown keys or malformed values -> usage error; value
// combinations that violate invariants -> usage error.
ExperimentConfig parse_config(const ConfigText& text);

struct ValidationReport {
    std::vector<std::string> violations;  // empty means the config would run
    std::vector<std::string> notes;       // effective values, informational
    bool ok = false;
};

// Checks a config without running it: collects every violation instead of
// stopping at the first, and reports the effective (defaulted) values.
ValidationReport validate_config(const ConfigText& text);

// Executes the preset and returns its rows; also writes them as CSV to
// config.output_path (stdout when empty).  Identical configs produce
// byte-identical CSV regardless of worker count.
std::vector<ResultRow> run(const ExperimentConfig& config);

// CSV with fixed schema "preset,level,stat,value,stderr,oracle,n_paths,seed";
// the oracle field is empty when absent.
std::string rows_to_csv(const std::vector<ResultRow>& rows);

// Run-length-encoded text form of a flag set, e.g.
//   "level=10 kind=FAST_L a=0.5 epsilon=0 c=0 theta=1 runs=0*12,1*5,0*1007"
// parse_rle_flags inverts it (the window description is not round-tripped).
std::string flags_to_rle(const IntervalFlags& flags);
IntervalFlags parse_rle_flags(const std::string& text);

}  // namespace fastpoints
