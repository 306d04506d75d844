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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace rvvback {

/// The two RVV dialects this tool knows about. Every dialect-sensitive
/// operation is parameterized by one of these.
enum class Dialect { V0p7, V1p0 };

/// Vector configuration as set by a vsetvli-style instruction.
/// For fractional LMUL (mf2/mf4/mf8), `lmul` holds the denominator and
/// `fractional` is true. Fractional groups exist only in v1.0.
struct VConfig {
  unsigned sew = 8;   // element width in bits: 8, 16, 32, 64
  unsigned lmul = 1;  // group multiplier: 1, 2, 4, 8
  bool fractional = false;

  friend bool operator==(const VConfig&, const VConfig&) = default;
};

// ---- Operands --------------------------------------------------------------

struct ScalarReg {
  std::string name;  // as written: ABI or numeric spelling
  friend bool operator==(const ScalarReg&, const ScalarReg&) = default;
};

struct VectorReg {
  std::string name;  // v0..v31
  friend bool operator==(const VectorReg&, const VectorReg&) = default;
};

struct CsrName {
  std::string name;
  friend bool operator==(const CsrName&, const CsrName&) = default;
};

struct Immediate {
  int64_t value = 0;
  friend bool operator==(const Immediate&, const Immediate&) = default;
};

struct MemRef {
  std::string base;  // scalar register name
  int64_t displacement = 0;
  friend bool operator==(const MemRef&, const MemRef&) = default;
};

struct VtypeTokens {
  std::string sew_token;                  // e8 e16 e32 e64
  std::string lmul_token;                 // m1 m2 m4 m8 mf2 mf4 mf8
  std::vector<std::string> policy_tokens; // subset of ta tu ma mu, in order
  friend bool operator==(const VtypeTokens&, const VtypeTokens&) = default;
};

/// Catch-all for operand text the translator carries but never interprets:
/// branch targets, relocation expressions like %lo(sym), FP register names.
struct SymbolOp {
  std::string text;
  friend bool operator==(const SymbolOp&, const SymbolOp&) = default;
};

using Operand = std::variant<ScalarReg, VectorReg, CsrName, Immediate, MemRef,
                             VtypeTokens, SymbolOp>;

bool operator==(const Operand& a, const Operand& b);

// ---- Instructions and lines ------------------------------------------------

struct Instruction {
  std::string mnemonic;            // lowercase, non-empty, no whitespace
  std::vector<Operand> operands;
  bool mask = false;               // trailing v0.t
  std::string label_prefix;        // e.g. "loop:" (with colon), or empty
  std::string comment_suffix;      // e.g. "# scalar tail", or empty

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// One line of an assembly document. Opaque lines have no decoded
/// instruction and round-trip byte-identically through raw_text.
/// Rewrites replace a line with 1..n instructions; the original raw_text
/// is kept so untouched emission stays exact.
struct SourceLine {
  int index = 0;             // 1-based
  std::string raw_text;      // exact original characters, no newline
  std::optional<Instruction> instr;  // nullopt = Opaque

  // Set by the rewriter.
  bool rewritten = false;
  std::vector<Instruction> replacement;
  std::string rule_id;       // rule that produced the replacement
  std::string error_note;    // lenient-mode reject marker appended on emit

  bool decoded() const { return instr.has_value(); }
};

struct AssemblyDocument {
  std::string source_name;
  std::vector<SourceLine> lines;
  bool crlf = false;        // input used CRLF; emission restores it
  bool translated = false;  // set by rewrite_document
};

// ---- Register and token vocabulary ----------------------------------------

/// True for x0..x31 and the ABI names (zero/ra/sp/gp/tp/t0-t6/s0-s11/a0-a7/fp).
bool is_scalar_reg_name(std::string_view name);
/// Index 0..31 for a scalar register name, -1 if not a scalar register.
int scalar_reg_index(std::string_view name);
bool is_vector_reg_name(std::string_view name);
/// Index 0..31 for v0..v31, -1 otherwise.
int vector_reg_index(std::string_view name);

/// "e32" -> 32; 0 if not a SEW token.
unsigned sew_from_token(std::string_view token);
/// "m2" -> {2,false}, "mf4" -> {4,true}; nullopt if not an LMUL token.
std::optional<std::pair<unsigned, bool>> lmul_from_token(std::string_view token);
bool is_policy_token(std::string_view token);

/// Decode validated vtype tokens into a VConfig.
VConfig vconfig_from_tokens(const VtypeTokens& tokens);
std::string sew_token(unsigned sew);
std::string lmul_token(unsigned lmul, bool fractional);

// ---- Rendering -------------------------------------------------------------

std::string canonical_text(const Operand& op);

/// Deterministic rendering: "mnemonic op1, op2, ...". Vtype token lists are
/// joined with ", ", the mask suffix renders as ", v0.t", and memory
/// references render as "disp(base)" with a zero displacement omitted.
/// Label prefix and trailing comment are not included; the emitter composes
/// those around the rendered body.
std::string canonical_text(const Instruction& instr);

}  // namespace rvvback
