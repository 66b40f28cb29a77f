// Copyright 2026 The teleop Authors
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

#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "teleop/sim_world.hpp"

namespace teleop {

/// One JSON object per record; field names are listed in docs/log_format.md.
nlohmann::json to_json(const LogRecord& r);
/// Throws ConfigError with the offending field path.
LogRecord log_record_from_json(const nlohmann::json& j);

void write_log_jsonl(std::ostream& os, const std::vector<LogRecord>& log);
void write_log_jsonl(const std::filesystem::path& file, const std::vector<LogRecord>& log);

std::vector<LogRecord> read_log_jsonl(std::istream& is);
/// A single .jsonl file, or every *.jsonl in a directory (sorted by name),
/// concatenated.
std::vector<LogRecord> read_logs(const std::filesystem::path& file_or_dir);

/// Largest absolute difference over all numeric fields; +inf when tick
/// indices, flags or lengths differ. 0 means field-identical.
double max_field_difference(const LogRecord& x, const LogRecord& y);
double max_field_difference(const std::vector<LogRecord>& x, const std::vector<LogRecord>& y);

}  // namespace teleop
