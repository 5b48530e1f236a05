#pragma once

#include "teamnet/config.hpp"

#include <iosfwd>

namespace teamnet {

enum ExitCode : int { exit_ok = 0, exit_internal = 1, exit_input = 2 };

// Each command writes its files into config.out_dir and a short report to
// `log`, and returns an ExitCode. Outputs are deterministic for a given
// config and seed.

// interactions_<platform>.jsonl per platform with events, plus
// extract_summary.json.
int cmd_extract(const AnalysisConfig& config, std::ostream& log);

// propensities.csv, preferences.csv, counts.csv, preferences_<platform>.dot,
// organigraph.dot and preferences.json, depending on the formats.
int cmd_preferences(const AnalysisConfig& config, std::ostream& log);

// scenarios.csv (+ scenario_samples.csv with raw samples) and
// scenarios.json. Degenerate slices are reported and skipped; the command
// then exits with exit_input.
int cmd_potentiality(const AnalysisConfig& config, std::ostream& log);

// roles.jsonl and interactions.jsonl realising config.synth_spec.
int cmd_synth(const AnalysisConfig& config, std::ostream& log);

} // namespace teamnet
