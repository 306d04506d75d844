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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rvvback/asm_model.hpp"

namespace rvvback {

enum class ParseMode { Strict, Lenient };

struct ParseDiagnostic {
  int line = 0;
  std::string message;
};

struct ParseResult {
  AssemblyDocument doc;
  std::vector<ParseDiagnostic> malformed;
  bool aborted = false;  // strict mode only: a recognized line failed to decode
};

/// Classifies and decodes every line of `text`. Only mnemonics the translator
/// must understand are decoded (all vector mnemonics of either dialect, the
/// vsetvl family, csr accesses, and li); everything else passes through as an
/// opaque line that re-emits byte-identically. `.attribute arch` directives
/// are decoded so the emitter can rewrite the version string.
ParseResult parse_document(std::string_view text, std::string source_name,
                           ParseMode mode = ParseMode::Strict);

/// Single-line form of the classification above. Returns a SourceLine with
/// index 1 on success; `error` is set when a recognized mnemonic has operands
/// that fail validation.
struct ParsedLine {
  SourceLine line;
  std::optional<std::string> error;
};
ParsedLine parse_instruction(std::string_view line_text);

/// If `raw` starts (after leading whitespace) with a label definition,
/// returns the label name without the colon, plus the remainder of the line.
/// Used by the vconfig tracker and the emulator loader, which must see label
/// positions on lines the parser left opaque.
struct LabelSplit {
  std::string label;
  std::string rest;
};
std::optional<LabelSplit> split_leading_label(std::string_view raw);

/// Leading run of spaces/tabs of a line (re-applied to replacement lines).
std::string_view leading_indent(std::string_view raw);

}  // namespace rvvback
