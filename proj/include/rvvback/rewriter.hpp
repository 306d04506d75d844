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

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "rvvback/asm_model.hpp"
#include "rvvback/report.hpp"
#include "rvvback/vconfig_tracker.hpp"

namespace rvvback {

enum class RewriteMode { Strict, Lenient };

struct RewriteOptions {
  RewriteMode mode = RewriteMode::Strict;
  // Two distinct scalar registers, neither x0, burned by expansions that
  // need temporaries. Never liveness-checked; every use lands in the report.
  std::array<std::string, 2> scratch_regs{"t5", "t6"};
  bool expand_whole_register = false;
  bool assume_eew_matches_sew = false;
  bool annotate = true;  // trailing "# rvv-backport: <rule>" on rewrites
};

/// True when scratch_regs names two distinct scalar registers, neither of
/// which is x0.
bool valid_scratch_regs(const RewriteOptions& opts);

enum class DiagnosticCode {
  FractionalLmul,
  EewSewMismatch,
  UnknownStateStrict,
  NoV07Equivalent,
  WholeRegisterNeedsFlag,
  VcsrAccess,
  MalformedInstruction,
  ScratchCollision,
};

/// Stable identifier used in reports and reject-corpus expectations.
std::string_view diagnostic_code_string(DiagnosticCode code);

/// All diagnostic identifier strings, in enum order.
std::vector<std::string> all_diagnostic_codes();

struct RewriteResult {
  enum class Kind { PassThrough, Replace, Reject } kind = Kind::PassThrough;

  // Replace
  std::vector<Instruction> replacement;
  std::string rule_id;
  std::vector<std::string> scratch_used;  // scratch register names consumed
  bool warn_unknown_state = false;  // translated on faith, state was Unknown

  // Reject
  DiagnosticCode code = DiagnosticCode::MalformedInstruction;
  std::string message;
};

RewriteResult make_reject(DiagnosticCode code, std::string message);

/// One instruction through the rule table. `state` is the tracked
/// configuration before the instruction. Tries, in order: configuration,
/// rename, memory retyping, pseudo expansion, whole-register expansion,
/// known no-equivalents; everything else passes through.
RewriteResult rewrite_instruction(const Instruction& instr,
                                  const TrackedState& state,
                                  const RewriteOptions& opts);

/// Applies rewrite_instruction across the document in place, filling each
/// line's replacement list, and aggregates counts/diagnostics into report.
/// Rejected lines keep their raw text; in Lenient mode they are tagged for
/// an error comment at emission. Marks doc.translated.
void rewrite_document(AssemblyDocument& doc,
                      const std::vector<TrackedState>& states,
                      const RewriteOptions& opts, TranslationReport& report);

/// Canonical rule-table identifiers, in table order.
const std::vector<std::string>& all_rule_ids();

/// The mnemonic appears as a source (left-hand side) of the rule table:
/// it exists in v1.0 and a successful translation never emits it.
bool is_v1_only_mnemonic(std::string_view mnemonic);

/// Scans emitted assembly text for rule-table source mnemonics. Returns the
/// offending mnemonics, empty when the text is clean v0.7.1.
std::vector<std::string> find_v1_only_mnemonics(std::string_view text);

}  // namespace rvvback
