// Copyright 2026 The rvv-backport Authors.
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

#include <map>
#include <string>
#include <vector>

namespace rvvback {

struct ReportItem {
  int line = 0;
  std::string code;     // stable kebab-case identifier
  std::string message;
};

struct ScratchUse {
  int line = 0;
  std::string reg;
};

/// Per-file translation outcome. status is derived: failed iff errors
/// is non-empty.
struct TranslationReport {
  std::string source_name;
  std::map<std::string, int> rule_counts;
  std::vector<ReportItem> warnings;
  std::vector<ReportItem> errors;
  std::vector<ScratchUse> scratch_uses;

  bool failed() const { return !errors.empty(); }
};

enum class ReportFormat { Json, HumanText };

/// Json: fixed key order source, status, rules, warnings, errors,
/// scratch_uses; every field always present. Rules render in the canonical
/// rule-table order, zero-count rules omitted. HumanText: one line per
/// warning/error, "LINE:CODE: message".
std::string emit_report(const TranslationReport& report, ReportFormat format);

}  // namespace rvvback
