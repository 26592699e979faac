// Copyright 2026 The purity-vqa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PVQA_EXPERIMENTS_HPP_
#define PVQA_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pvqa/applications.hpp"

// Named, config-driven experiment runners behind the command-line tool.
// Every runner resolves its configuration against a strict schema, executes
// deterministically for a given resolved config, and returns a tabular
// record that persists as record.json plus data.csv. Outputs carry no
// timestamps, so identical configs produce byte-identical files.

namespace pvqa {

inline constexpr const char* kToolVersion = "0.1.0";

// Result of one experiment run: a table of doubles plus the resolved
// configuration it was produced from. Columns always include estimate,
// oracle and abs_error entries for each reported quantity.
struct ExperimentRecord {
  std::string experiment_id;
  std::string config_hash;  // 16 hex digits derived from the resolved config
  std::string tool_version = kToolVersion;
  nlohmann::json config;  // fully resolved: user values merged over defaults
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json extras;  // fits, pipeline reports, serialized states

  nlohmann::json to_json() const;
};

// Global seed default: the PURITY_VQA_SEED environment variable when set to
// a nonnegative integer, 20260818 otherwise.
std::uint64_t default_seed();

// 64-bit FNV-1a fingerprint of the canonical (sorted-key) JSON dump,
// rendered as 16 lowercase hex digits.
std::string config_fingerprint(const nlohmann::json& resolved);

// "start:end:step" with step > 0; yields round((end-start)/step) + 1 evenly
// spaced values. Raises ConfigInvalid on malformed text.
std::vector<double> parse_grid(const std::string& text);

// Comma-separated integers, e.g. "3,6,9".
std::vector<long long> parse_int_list(const std::string& text);

// Known experiment names, in documentation order.
const std::vector<std::string>& experiment_names();

// Runs the named experiment with the given (possibly partial) config.
// Unknown keys and ill-typed values raise ConfigInvalid.
ExperimentRecord run_experiment(const std::string& command, const nlohmann::json& config);

// Writes <out_dir>/record.json and <out_dir>/data.csv, creating out_dir if
// needed. CSV: comma separators, '.' decimal point, header row, LF line
// endings, 17 significant digits.
void write_record(const ExperimentRecord& record, const std::string& out_dir);

// Writes <out_dir>/plot.gp, a standalone gnuplot script rendering data.csv.
// Returns the script path. Requires a nonempty record.
std::string emit_plot_script(const ExperimentRecord& record, const std::string& out_dir);

}  // namespace pvqa

#endif  // PVQA_EXPERIMENTS_HPP_
