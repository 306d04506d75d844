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

#include "rvvback/asm_model.hpp"

#include <array>
#include <map>
#include <sstream>
#include <type_traits>

namespace rvvback {

namespace {

const std::map<std::string, int, std::less<>>& abi_reg_map() {
  static const std::map<std::string, int, std::less<>> m = {
      {"zero", 0}, {"ra", 1},  {"sp", 2},  {"gp", 3},  {"tp", 4},
      {"t0", 5},   {"t1", 6},  {"t2", 7},  {"s0", 8},  {"fp", 8},
      {"s1", 9},   {"a0", 10}, {"a1", 11}, {"a2", 12}, {"a3", 13},
      {"a4", 14},  {"a5", 15}, {"a6", 16}, {"a7", 17}, {"s2", 18},
      {"s3", 19},  {"s4", 20}, {"s5", 21}, {"s6", 22}, {"s7", 23},
      {"s8", 24},  {"s9", 25}, {"s10", 26}, {"s11", 27}, {"t3", 28},
      {"t4", 29},  {"t5", 30}, {"t6", 31},
  };
  return m;
}

int numeric_reg_index(std::string_view name, char prefix) {
  if (name.size() < 2 || name.size() > 3 || name[0] != prefix) return -1;
  int value = 0;
  for (char c : name.substr(1)) {
    if (c < '0' || c > '9') return -1;
    value = value * 10 + (c - '0');
  }
  if (name.size() == 3 && name[1] == '0') return -1;  // no leading zeros
  return value <= 31 ? value : -1;
}

}  // namespace

int scalar_reg_index(std::string_view name) {
  if (int idx = numeric_reg_index(name, 'x'); idx >= 0) return idx;
  auto it = abi_reg_map().find(name);
  return it == abi_reg_map().end() ? -1 : it->second;
}

bool is_scalar_reg_name(std::string_view name) {
  return scalar_reg_index(name) >= 0;
}

int vector_reg_index(std::string_view name) {
  return numeric_reg_index(name, 'v');
}

bool is_vector_reg_name(std::string_view name) {
  return vector_reg_index(name) >= 0;
}

unsigned sew_from_token(std::string_view token) {
  if (token == "e8") return 8;
  if (token == "e16") return 16;
  if (token == "e32") return 32;
  if (token == "e64") return 64;
  return 0;
}

std::optional<std::pair<unsigned, bool>> lmul_from_token(std::string_view token) {
  if (token == "m1") return {{1u, false}};
  if (token == "m2") return {{2u, false}};
  if (token == "m4") return {{4u, false}};
  if (token == "m8") return {{8u, false}};
  if (token == "mf2") return {{2u, true}};
  if (token == "mf4") return {{4u, true}};
  if (token == "mf8") return {{8u, true}};
  return std::nullopt;
}

bool is_policy_token(std::string_view token) {
  return token == "ta" || token == "tu" || token == "ma" || token == "mu";
}

VConfig vconfig_from_tokens(const VtypeTokens& tokens) {
  VConfig cfg;
  cfg.sew = sew_from_token(tokens.sew_token);
  if (auto lm = lmul_from_token(tokens.lmul_token)) {
    cfg.lmul = lm->first;
    cfg.fractional = lm->second;
  }
  return cfg;
}

std::string sew_token(unsigned sew) { return "e" + std::to_string(sew); }

std::string lmul_token(unsigned lmul, bool fractional) {
  return (fractional ? "mf" : "m") + std::to_string(lmul);
}

bool operator==(const Operand& a, const Operand& b) {
  // Compare alternatives directly; delegating to the variant's operator==
  // would resolve back here and recurse.
  if (a.index() != b.index()) return false;
  return std::visit(
      [&](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        return lhs == std::get<T>(b);
      },
      a);
}

std::string canonical_text(const Operand& op) {
  struct Renderer {
    std::string operator()(const ScalarReg& r) const { return r.name; }
    std::string operator()(const VectorReg& r) const { return r.name; }
    std::string operator()(const CsrName& r) const { return r.name; }
    std::string operator()(const Immediate& i) const {
      return std::to_string(i.value);
    }
    std::string operator()(const MemRef& m) const {
      if (m.displacement == 0) return "(" + m.base + ")";
      return std::to_string(m.displacement) + "(" + m.base + ")";
    }
    std::string operator()(const VtypeTokens& v) const {
      std::string out = v.sew_token + ", " + v.lmul_token;
      for (const auto& p : v.policy_tokens) out += ", " + p;
      return out;
    }
    std::string operator()(const SymbolOp& s) const { return s.text; }
  };
  return std::visit(Renderer{}, op);
}

std::string canonical_text(const Instruction& instr) {
  std::string out = instr.mnemonic;
  for (size_t i = 0; i < instr.operands.size(); ++i) {
    out += (i == 0) ? " " : ", ";
    out += canonical_text(instr.operands[i]);
  }
  if (instr.mask) out += instr.operands.empty() ? " v0.t" : ", v0.t";
  return out;
}

}  // namespace rvvback
