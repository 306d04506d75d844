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

#include "rvvback/emitter.hpp"

#include <string>

#include "doctest.h"
#include "json.hpp"
#include "rvvback/parser.hpp"
#include "rvvback/pipeline.hpp"
#include "rvvback/report.hpp"

using namespace rvvback;

namespace {

std::string translate(const std::string& text, RewriteOptions opts = {}) {
  TranslateOutcome outcome = translate_text(text, "t.s", opts);
  return outcome.output;
}

}  // namespace

TEST_CASE("untouched documents round-trip byte-identically") {
  std::string text =
      "# header\n"
      "   .text\n"
      "\n"
      "main:\n"
      "    addi  a0,a0,-1   # weird   spacing\n"
      "\tret\n";
  ParseResult parsed = parse_document(text, "t.s");
  REQUIRE_FALSE(parsed.aborted);
  CHECK(emit_assembly(parsed.doc) == text);
}

TEST_CASE("a missing final newline is restored") {
  ParseResult parsed = parse_document("nop", "t.s");
  CHECK(emit_assembly(parsed.doc) == "nop\n");
}

TEST_CASE("empty input emits empty output") {
  ParseResult parsed = parse_document("", "t.s");
  CHECK(emit_assembly(parsed.doc) == "");
}

TEST_CASE("crlf endings are restored") {
  ParseResult parsed = parse_document("nop\r\nret\r\n", "t.s");
  CHECK(emit_assembly(parsed.doc) == "nop\r\nret\r\n");

  std::string out = translate("vsetvli t0, a0, e32, m1, ta, ma\r\n");
  CHECK(out ==
        "vsetvli t0, a0, e32, m1 # rvv-backport: strip-policy\r\n");
}

TEST_CASE("rewritten lines keep indentation and trailing comments") {
  std::string out = translate(
      "    vsetvli t0, a0, e32, m1\n"
      "    vle32.v v4, (a1)  # data block\n");
  CHECK(out ==
        "    vsetvli t0, a0, e32, m1\n"
        "    vle.v v4, (a1) # data block # rvv-backport: mem-unit-stride\n");
}

TEST_CASE("multi-line replacements annotate the first line only") {
  std::string out = translate("\tvsetivli x0, 7, e16, m2 # cfg\n");
  CHECK(out ==
        "\tli t5, 7 # rvv-backport: expand-vsetivli\n"
        "\tvsetvli x0, t5, e16, m2 # cfg\n");
}

TEST_CASE("a label stays on the first replacement line") {
  std::string out = translate("cfg: vsetivli t0, 12, e32, m1\n");
  CHECK(out ==
        "cfg: li t0, 12 # rvv-backport: expand-vsetivli\n"
        "vsetvli t0, t0, e32, m1\n");
}

TEST_CASE("annotations can be turned off") {
  RewriteOptions opts;
  opts.annotate = false;
  std::string out = translate(
      "    vsetvli t0, a0, e32, m1, ta, ma\n"
      "    vle32.v v4, (a1)\n",
      opts);
  CHECK(out ==
        "    vsetvli t0, a0, e32, m1\n"
        "    vle.v v4, (a1)\n");
}

TEST_CASE("lenient rejects keep the raw line with an error marker") {
  RewriteOptions opts;
  opts.mode = RewriteMode::Lenient;
  TranslateOutcome outcome = translate_text(
      "    vzext.vf2 v2, v4\n"
      "    vsetvli t0, a0, e32, m1\n",
      "t.s", opts);
  CHECK_FALSE(outcome.ok());
  CHECK(outcome.output ==
        "    vzext.vf2 v2, v4 # rvv-backport-error: no-v07-equivalent\n"
        "    vsetvli t0, a0, e32, m1\n");
}

TEST_CASE("arch attribute version tokens rewrite on translated documents") {
  // Both spellings, in one document.
  std::string out = translate(
      "    .attribute arch, \"rv64gcv1p0\"\n"
      "    .attribute arch, \"rv64gc_v1p0_zba1p0\"\n"
      "    .attribute stack_align, 16\n");
  CHECK(out ==
        "    .attribute arch, \"rv64gcv0p7\"\n"
        "    .attribute arch, \"rv64gc_v0p7_zba1p0\"\n"
        "    .attribute stack_align, 16\n");

  TranslateOutcome outcome =
      translate_text("    .attribute arch, \"rv64gcv1p0\"\n", "t.s", {});
  CHECK(outcome.report.rule_counts["arch-attribute"] == 1);
}

TEST_CASE("a foreign vector version leaves the line alone with a warning") {
  TranslateOutcome outcome =
      translate_text("    .attribute arch, \"rv64gcv2p0\"\n", "t.s", {});
  CHECK(outcome.ok());
  CHECK(outcome.output == "    .attribute arch, \"rv64gcv2p0\"\n");
  REQUIRE(outcome.report.warnings.size() == 1);
  CHECK(outcome.report.warnings[0].code == "arch-attribute");
  CHECK(outcome.report.warnings[0].line == 1);
}

TEST_CASE("an already-backported arch string stays silent") {
  TranslateOutcome outcome =
      translate_text("    .attribute arch, \"rv64gcv0p7\"\n", "t.s", {});
  CHECK(outcome.ok());
  CHECK(outcome.output == "    .attribute arch, \"rv64gcv0p7\"\n");
  CHECK(outcome.report.warnings.empty());
  CHECK(outcome.report.rule_counts.count("arch-attribute") == 0);
}

TEST_CASE("untranslated documents do not touch arch attributes") {
  ParseResult parsed =
      parse_document("    .attribute arch, \"rv64gcv1p0\"\n", "t.s");
  REQUIRE_FALSE(parsed.aborted);
  CHECK(emit_assembly(parsed.doc) == "    .attribute arch, \"rv64gcv1p0\"\n");
}

TEST_CASE("json report shape and key order") {
  TranslationReport report;
  report.source_name = "demo.s";
  report.rule_counts["mem-unit-stride"] = 2;
  report.rule_counts["strip-policy"] = 1;
  report.rule_counts["rename-op"] = 0;  // zero counts are omitted
  report.warnings.push_back({4, "unknown-state", "translated on faith"});
  report.errors.push_back({9, "fractional-lmul", "mf2 not expressible"});
  report.scratch_uses.push_back({7, "t5"});

  std::string text = emit_report(report, ReportFormat::Json);
  auto doc = nlohmann::ordered_json::parse(text);

  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  REQUIRE(keys.size() == 6);
  CHECK(keys[0] == "source");
  CHECK(keys[1] == "status");
  CHECK(keys[2] == "rules");
  CHECK(keys[3] == "warnings");
  CHECK(keys[4] == "errors");
  CHECK(keys[5] == "scratch_uses");

  CHECK(doc["source"] == "demo.s");
  CHECK(doc["status"] == "failed");
  REQUIRE(doc["rules"].size() == 2);
  CHECK(doc["rules"]["strip-policy"] == 1);
  CHECK(doc["rules"]["mem-unit-stride"] == 2);
  CHECK_FALSE(doc["rules"].contains("rename-op"));
  // Rules render in canonical table order, not alphabetical.
  std::vector<std::string> rule_keys;
  for (auto it = doc["rules"].begin(); it != doc["rules"].end(); ++it)
    rule_keys.push_back(it.key());
  CHECK(rule_keys[0] == "strip-policy");
  CHECK(rule_keys[1] == "mem-unit-stride");

  REQUIRE(doc["warnings"].size() == 1);
  CHECK(doc["warnings"][0]["line"] == 4);
  CHECK(doc["warnings"][0]["code"] == "unknown-state");
  REQUIRE(doc["errors"].size() == 1);
  CHECK(doc["errors"][0]["message"] == "mf2 not expressible");
  REQUIRE(doc["scratch_uses"].size() == 1);
  CHECK(doc["scratch_uses"][0]["line"] == 7);
  CHECK(doc["scratch_uses"][0]["register"] == "t5");
}

TEST_CASE("json report for a clean run") {
  TranslationReport report;
  report.source_name = "ok.s";
  std::string text = emit_report(report, ReportFormat::Json);
  auto doc = nlohmann::ordered_json::parse(text);
  CHECK(doc["status"] == "ok");
  CHECK(doc["rules"].empty());
  CHECK(doc["warnings"].empty());
  CHECK(doc["errors"].empty());
  CHECK(doc["scratch_uses"].empty());
}

TEST_CASE("human text report lines") {
  TranslationReport report;
  report.source_name = "demo.s";
  report.rule_counts["strip-policy"] = 3;
  report.errors.push_back({9, "fractional-lmul", "mf2 not expressible"});
  std::string text = emit_report(report, ReportFormat::HumanText);
  CHECK(text.find("demo.s: failed\n") != std::string::npos);
  CHECK(text.find("  strip-policy: 3\n") != std::string::npos);
  CHECK(text.find("9:fractional-lmul: mf2 not expressible\n") !=
        std::string::npos);
}
