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

#include <string>
#include <string_view>

#include "rvvback/asm_model.hpp"
#include "rvvback/report.hpp"
#include "rvvback/rewriter.hpp"

namespace rvvback {

struct TranslateOutcome {
  std::string output;        // emitted assembly; empty when ok() is false
  TranslationReport report;
  AssemblyDocument doc;      // post-rewrite document

  bool ok() const { return !report.failed(); }
};

/// Full translation of one file: parse, track configuration, rewrite, emit.
/// Parse diagnostics merge into the report: strict mode turns malformed lines
/// into errors and produces no output text; lenient mode records warnings and
/// keeps going. Rewrite rejects also fail the file; lenient mode still emits
/// the text with error comments so the user can inspect it.
TranslateOutcome translate_text(std::string_view text, std::string source_name,
                                const RewriteOptions& opts);

}  // namespace rvvback
