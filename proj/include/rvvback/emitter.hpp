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

#include "rvvback/asm_model.hpp"
#include "rvvback/report.hpp"

namespace rvvback {

/// Serializes the document. Untouched lines come from raw_text; rewritten
/// lines render each replacement with the original leading indentation, the
/// label on the first replacement and the trailing comment on the last, plus
/// an "# rvv-backport: <rule>" marker on the first when annotate is set.
/// Lines tagged with an error note (lenient rejects) keep their raw text with
/// "# rvv-backport-error: <code>" appended.
///
/// On a translated document, `.attribute arch` lines get every vector-
/// extension version token "v1p0" replaced by "v0p7"; the substitution is
/// counted under rule "arch-attribute" in `report`, and an arch naming some
/// other vector version is left alone with a warning. Untranslated documents
/// round-trip byte-identically (modulo newline normalization).
///
/// A final newline is always present; CRLF endings are restored when the
/// input used them.
std::string emit_assembly(const AssemblyDocument& doc,
                          TranslationReport* report = nullptr,
                          bool annotate = true);

}  // namespace rvvback
