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

#include "rvvback/vconfig_tracker.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "rvvback/parser.hpp"

namespace rvvback {

namespace {

std::string_view strip_comment(std::string_view raw) {
  auto hash = raw.find('#');
  if (hash != std::string_view::npos) raw = raw.substr(0, hash);
  return raw;
}

std::string first_token_lower(std::string_view raw) {
  size_t begin = 0;
  while (begin < raw.size() && (raw[begin] == ' ' || raw[begin] == '\t')) ++begin;
  size_t end = begin;
  while (end < raw.size() && raw[end] != ' ' && raw[end] != '\t') ++end;
  std::string tok(raw.substr(begin, end - begin));
  std::transform(tok.begin(), tok.end(), tok.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tok;
}

const VtypeTokens* vtype_operand(const Instruction& instr) {
  for (const Operand& op : instr.operands) {
    if (const auto* vt = std::get_if<VtypeTokens>(&op)) return vt;
  }
  return nullptr;
}

}  // namespace

bool is_vector_csr(std::string_view name) {
  static constexpr std::array<std::string_view, 7> kNames = {
      "vstart", "vxsat", "vxrm", "vcsr", "vl", "vtype", "vlenb"};
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

bool writes_vector_csr(const Instruction& instr) {
  const std::string& m = instr.mnemonic;
  if (m != "csrw" && m != "csrrw" && m != "csrrs" && m != "csrrc") return false;
  for (const Operand& op : instr.operands) {
    if (const auto* csr = std::get_if<CsrName>(&op)) {
      return is_vector_csr(csr->name);
    }
  }
  return false;
}

bool line_defines_label(const SourceLine& line) {
  if (line.instr && !line.instr->label_prefix.empty()) return true;
  return split_leading_label(strip_comment(line.raw_text)).has_value();
}

bool line_is_call(const SourceLine& line) {
  if (line.instr) return false;  // decoded lines are vector/csr/li, never calls
  std::string_view body = strip_comment(line.raw_text);
  std::string rest_storage;
  if (auto split = split_leading_label(body)) {
    rest_storage = split->rest;
    body = rest_storage;
  }
  std::string tok = first_token_lower(body);
  return tok == "call" || tok == "jal" || tok == "jalr" || tok == "tail";
}

std::vector<TrackedState> track_vconfig(const AssemblyDocument& doc) {
  std::vector<TrackedState> result(doc.lines.size());
  TrackedState state;  // entry state is Unknown
  for (size_t i = 0; i < doc.lines.size(); ++i) {
    const SourceLine& line = doc.lines[i];
    // A label is a join point; anything could reach it.
    if (line_defines_label(line)) state = TrackedState{};
    result[i] = state;

    if (line.instr) {
      const Instruction& instr = *line.instr;
      if (instr.mnemonic == "vsetvli" || instr.mnemonic == "vsetivli") {
        if (const VtypeTokens* vt = vtype_operand(instr)) {
          state = TrackedState{true, vconfig_from_tokens(*vt)};
        } else {
          state = TrackedState{};
        }
      } else if (instr.mnemonic == "vsetvl") {
        state = TrackedState{};
      } else if (writes_vector_csr(instr)) {
        state = TrackedState{};
      }
    } else if (line_is_call(line)) {
      // The callee may reprogram vtype.
      state = TrackedState{};
    }
  }
  return result;
}

}  // namespace rvvback
