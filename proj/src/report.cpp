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

#include "rvvback/report.hpp"

#include <json.hpp>

#include "rvvback/rewriter.hpp"

namespace rvvback {

namespace {

nlohmann::ordered_json items_json(const std::vector<ReportItem>& items) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ReportItem& item : items) {
    arr.push_back({{"line", item.line},
                   {"code", item.code},
                   {"message", item.message}});
  }
  return arr;
}

std::string human_text(const TranslationReport& report) {
  std::string out;
  out += report.source_name + ": " + (report.failed() ? "failed" : "ok") + "\n";
  for (const std::string& rule : all_rule_ids()) {
    auto it = report.rule_counts.find(rule);
    if (it != report.rule_counts.end() && it->second > 0) {
      out += "  " + rule + ": " + std::to_string(it->second) + "\n";
    }
  }
  for (const ReportItem& w : report.warnings) {
    out += std::to_string(w.line) + ":" + w.code + ": " + w.message + "\n";
  }
  for (const ReportItem& e : report.errors) {
    out += std::to_string(e.line) + ":" + e.code + ": " + e.message + "\n";
  }
  for (const ScratchUse& s : report.scratch_uses) {
    out += std::to_string(s.line) + ":scratch: uses " + s.reg + "\n";
  }
  return out;
}

}  // namespace

std::string emit_report(const TranslationReport& report, ReportFormat format) {
  if (format == ReportFormat::HumanText) return human_text(report);

  nlohmann::ordered_json rules = nlohmann::ordered_json::object();
  for (const std::string& rule : all_rule_ids()) {
    auto it = report.rule_counts.find(rule);
    if (it != report.rule_counts.end() && it->second > 0) rules[rule] = it->second;
  }
  // Defensive: anything counted under a name outside the canonical list
  // still serializes (sorted by the map).
  for (const auto& [rule, count] : report.rule_counts) {
    if (count > 0 && !rules.contains(rule)) rules[rule] = count;
  }

  nlohmann::ordered_json scratch = nlohmann::ordered_json::array();
  for (const ScratchUse& s : report.scratch_uses) {
    scratch.push_back({{"line", s.line}, {"register", s.reg}});
  }

  nlohmann::ordered_json doc;
  doc["source"] = report.source_name;
  doc["status"] = report.failed() ? "failed" : "ok";
  doc["rules"] = rules;
  doc["warnings"] = items_json(report.warnings);
  doc["errors"] = items_json(report.errors);
  doc["scratch_uses"] = scratch;
  return doc.dump(2) + "\n";
}

}  // namespace rvvback
