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

#include "rvvback/pipeline.hpp"

#include "rvvback/emitter.hpp"
#include "rvvback/parser.hpp"
#include "rvvback/vconfig_tracker.hpp"

namespace rvvback {

TranslateOutcome translate_text(std::string_view text, std::string source_name,
                                const RewriteOptions& opts) {
  TranslateOutcome outcome;
  outcome.report.source_name = source_name;

  ParseMode pmode = opts.mode == RewriteMode::Strict ? ParseMode::Strict
                                                     : ParseMode::Lenient;
  ParseResult parsed = parse_document(text, std::move(source_name), pmode);
  for (const ParseDiagnostic& diag : parsed.malformed) {
    ReportItem item{diag.line, "malformed", diag.message};
    if (parsed.aborted) {
      outcome.report.errors.push_back(std::move(item));
    } else {
      outcome.report.warnings.push_back(std::move(item));
    }
  }
  outcome.doc = std::move(parsed.doc);
  if (parsed.aborted) return outcome;  // strict: no output on malformed input

  std::vector<TrackedState> states = track_vconfig(outcome.doc);
  rewrite_document(outcome.doc, states, opts, outcome.report);

  if (opts.mode == RewriteMode::Strict && outcome.report.failed()) {
    return outcome;  // strict: rejects leave no output either
  }
  outcome.output = emit_assembly(outcome.doc, &outcome.report, opts.annotate);
  return outcome;
}

}  // namespace rvvback
