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

#include "rvvback/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace rvvback {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool is_label_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '$';
}

bool is_label_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
         c == '$';
}

// Integer literal: decimal or 0x hex, optional sign. Returns nullopt if the
// token is not numeric at all; sets overflow when it is numeric but does not
// fit a signed 64-bit value (such lines degrade to Opaque).
std::optional<int64_t> parse_integer(std::string_view tok, bool& overflow) {
  overflow = false;
  if (tok.empty()) return std::nullopt;
  bool negative = false;
  std::string_view digits = tok;
  if (digits.front() == '-' || digits.front() == '+') {
    negative = digits.front() == '-';
    digits.remove_prefix(1);
  }
  if (digits.empty()) return std::nullopt;
  int base = 10;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
    if (digits.empty()) return std::nullopt;
  }
  uint64_t magnitude = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                   magnitude, base);
  if (ptr != digits.data() + digits.size()) return std::nullopt;
  if (ec == std::errc::result_out_of_range) {
    overflow = true;
    return std::nullopt;
  }
  uint64_t limit = negative ? (uint64_t{1} << 63) : (uint64_t{1} << 63) - 1;
  if (magnitude > limit) {
    overflow = true;
    return std::nullopt;
  }
  return negative ? -static_cast<int64_t>(magnitude)
                  : static_cast<int64_t>(magnitude);
}

// Memory reference: "(reg)" or "disp(reg)", spaces tolerated around parts.
std::optional<MemRef> parse_memref(std::string_view tok, bool& overflow,
                                   bool& malformed) {
  overflow = false;
  malformed = false;
  auto open = tok.find('(');
  if (open == std::string_view::npos || tok.back() != ')') return std::nullopt;
  std::string_view disp_text = trim(tok.substr(0, open));
  std::string_view reg_text = trim(tok.substr(open + 1, tok.size() - open - 2));
  if (!is_scalar_reg_name(reg_text)) return std::nullopt;
  int64_t disp = 0;
  if (!disp_text.empty()) {
    auto value = parse_integer(disp_text, overflow);
    if (overflow) return std::nullopt;
    if (!value) {
      malformed = true;
      return std::nullopt;
    }
    disp = *value;
  }
  return MemRef{std::string(reg_text), disp};
}

const char* const kCsrMnemonics[] = {"csrr", "csrw", "csrrw", "csrrs", "csrrc"};

bool is_csr_mnemonic(std::string_view m) {
  return std::find(std::begin(kCsrMnemonics), std::end(kCsrMnemonics), m) !=
         std::end(kCsrMnemonics);
}

bool token_has_space(std::string_view tok) {
  return tok.find(' ') != std::string_view::npos ||
         tok.find('\t') != std::string_view::npos;
}

struct DecodeOutcome {
  enum Kind { Decoded, Opaque, Malformed } kind = Opaque;
  Instruction instr;
  std::string error;
};

// Splits operand text on top-level commas; tokens are trimmed.
std::vector<std::string> split_operands(std::string_view text) {
  std::vector<std::string> out;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      out.emplace_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

DecodeOutcome malformed(std::string message) {
  DecodeOutcome out;
  out.kind = DecodeOutcome::Malformed;
  out.error = std::move(message);
  return out;
}

// vsetvli/vsetivli operand layout: rd, avl, then vtype token list.
bool decode_vtype_tail(const std::vector<std::string>& tokens, size_t first,
                       Instruction& instr, std::string& error) {
  if (tokens.size() < first + 2) {
    error = "vtype requires at least SEW and LMUL tokens";
    return false;
  }
  VtypeTokens vt;
  vt.sew_token = to_lower(tokens[first]);
  vt.lmul_token = to_lower(tokens[first + 1]);
  if (sew_from_token(vt.sew_token) == 0) {
    error = "invalid SEW token '" + tokens[first] + "'";
    return false;
  }
  if (!lmul_from_token(vt.lmul_token)) {
    error = "invalid LMUL token '" + tokens[first + 1] + "'";
    return false;
  }
  for (size_t i = first + 2; i < tokens.size(); ++i) {
    std::string p = to_lower(tokens[i]);
    if (!is_policy_token(p)) {
      error = "invalid policy token '" + tokens[i] + "'";
      return false;
    }
    vt.policy_tokens.push_back(std::move(p));
  }
  instr.operands.emplace_back(std::move(vt));
  return true;
}

bool is_vector_memory_mnemonic(std::string_view m) {
  // Everything that takes a (base) address operand in either dialect.
  if (m.size() < 3 || m[0] != 'v') return false;
  return (m.starts_with("vl") || m.starts_with("vs")) && m.ends_with(".v");
}

DecodeOutcome decode_recognized(std::string mnemonic,
                                const std::vector<std::string>& tokens) {
  DecodeOutcome out;
  out.kind = DecodeOutcome::Decoded;
  Instruction& instr = out.instr;
  instr.mnemonic = std::move(mnemonic);

  std::vector<std::string> ops = tokens;
  // Trailing mask suffix; recognized case-insensitively, stored lowercase.
  if (!ops.empty() && to_lower(ops.back()) == "v0.t") {
    instr.mask = true;
    ops.pop_back();
  }

  const std::string& m = instr.mnemonic;

  if (m == "vsetvli" || m == "vsetivli") {
    if (ops.size() < 2) return malformed(m + " requires rd and AVL operands");
    if (!is_scalar_reg_name(ops[0]))
      return malformed("'" + ops[0] + "' is not a scalar register");
    instr.operands.emplace_back(ScalarReg{ops[0]});
    if (m == "vsetvli") {
      if (!is_scalar_reg_name(ops[1]))
        return malformed("'" + ops[1] + "' is not a scalar register");
      instr.operands.emplace_back(ScalarReg{ops[1]});
    } else {
      bool overflow = false;
      auto imm = parse_integer(ops[1], overflow);
      if (overflow) return {DecodeOutcome::Opaque, {}, {}};
      if (!imm) return malformed("'" + ops[1] + "' is not an immediate");
      instr.operands.emplace_back(Immediate{*imm});
    }
    std::string error;
    if (!decode_vtype_tail(ops, 2, instr, error)) return malformed(error);
    if (instr.mask) return malformed(m + " does not take a mask");
    return out;
  }

  if (m == "vsetvl") {
    if (ops.size() != 3) return malformed("vsetvl requires three registers");
    for (const auto& tok : ops) {
      if (!is_scalar_reg_name(tok))
        return malformed("'" + tok + "' is not a scalar register");
      instr.operands.emplace_back(ScalarReg{tok});
    }
    return out;
  }

  if (is_csr_mnemonic(m)) {
    // csrr rd, csr | csrw csr, rs | csrrw/csrrs/csrrc rd, csr, rs
    size_t expected = (m == "csrr" || m == "csrw") ? 2 : 3;
    if (ops.size() != expected)
      return malformed(m + " requires " + std::to_string(expected) + " operands");
    size_t csr_pos = (m == "csrw") ? 0 : 1;
    for (size_t i = 0; i < ops.size(); ++i) {
      if (token_has_space(ops[i]))
        return malformed("unexpected whitespace in operand '" + ops[i] + "'");
      if (i == csr_pos) {
        instr.operands.emplace_back(CsrName{to_lower(ops[i])});
      } else {
        if (!is_scalar_reg_name(ops[i]))
          return malformed("'" + ops[i] + "' is not a scalar register");
        instr.operands.emplace_back(ScalarReg{ops[i]});
      }
    }
    return out;
  }

  if (m == "li") {
    if (ops.size() != 2) return malformed("li requires two operands");
    if (!is_scalar_reg_name(ops[0]))
      return malformed("'" + ops[0] + "' is not a scalar register");
    bool overflow = false;
    auto imm = parse_integer(ops[1], overflow);
    if (overflow) return {DecodeOutcome::Opaque, {}, {}};
    if (!imm) return malformed("'" + ops[1] + "' is not an immediate");
    instr.operands.emplace_back(ScalarReg{ops[0]});
    instr.operands.emplace_back(Immediate{*imm});
    return out;
  }

  // Generic vector instruction: classify each operand token on its own.
  const bool memory_op = is_vector_memory_mnemonic(m);
  for (const auto& tok : ops) {
    if (tok.empty()) return malformed("empty operand");
    bool overflow = false;
    bool memref_malformed = false;
    if (auto mem = parse_memref(tok, overflow, memref_malformed)) {
      if (memory_op && mem->displacement != 0)
        return malformed("vector memory operand must have zero displacement");
      instr.operands.emplace_back(*mem);
      continue;
    }
    if (overflow) return {DecodeOutcome::Opaque, {}, {}};
    if (memref_malformed)
      return malformed("invalid memory operand '" + tok + "'");
    if (is_vector_reg_name(tok)) {
      instr.operands.emplace_back(VectorReg{tok});
      continue;
    }
    if (is_scalar_reg_name(tok)) {
      instr.operands.emplace_back(ScalarReg{tok});
      continue;
    }
    if (auto imm = parse_integer(tok, overflow)) {
      instr.operands.emplace_back(Immediate{*imm});
      continue;
    }
    if (overflow) return {DecodeOutcome::Opaque, {}, {}};
    if (token_has_space(tok))
      return malformed("unexpected whitespace in operand '" + tok + "'");
    instr.operands.emplace_back(SymbolOp{tok});
  }
  if (instr.operands.empty()) return malformed(m + " requires operands");
  return out;
}

// First token of a recognized line decides whether we decode it at all.
bool is_recognized_mnemonic(std::string_view lowered) {
  if (lowered.empty()) return false;
  if (lowered[0] == 'v') return true;  // the full RVV namespace, both dialects
  return lowered == "li" || is_csr_mnemonic(lowered);
}

DecodeOutcome decode_line(std::string_view raw) {
  std::string_view body = raw;

  // Trailing comment: '#' anywhere, '//' as first non-blank handled below.
  std::string comment;
  if (auto hash = body.find('#'); hash != std::string_view::npos) {
    comment = std::string(trim(body.substr(hash)));
    body = body.substr(0, hash);
  }

  std::string_view trimmed = trim(body);
  if (trimmed.empty()) return {};  // blank or comment-only line

  std::string label;
  std::string after_label;  // owns the post-label text the views below point at
  if (auto split = split_leading_label(body)) {
    label = split->label + ":";
    after_label = std::move(split->rest);
    body = after_label;
    trimmed = trim(body);
    if (trimmed.empty()) return {};  // label-only line stays opaque
  }

  // Directives are opaque except the arch attribute, which the emitter
  // rewrites in place.
  if (trimmed.front() == '.') {
    size_t token_end = trimmed.find_first_of(" \t");
    std::string_view head = trimmed.substr(0, token_end);
    if (head == ".attribute" && token_end != std::string_view::npos) {
      std::string_view rest = trim(trimmed.substr(token_end));
      if (rest.starts_with("arch")) {
        DecodeOutcome out;
        out.kind = DecodeOutcome::Decoded;
        out.instr.mnemonic = ".attribute";
        out.instr.operands.emplace_back(SymbolOp{"arch"});
        out.instr.label_prefix = label;
        out.instr.comment_suffix = comment;
        return out;
      }
    }
    return {};
  }
  if (trimmed.starts_with("//")) return {};

  size_t token_end = trimmed.find_first_of(" \t");
  std::string mnemonic = to_lower(trimmed.substr(0, token_end));
  if (!is_recognized_mnemonic(mnemonic)) return {};

  std::string_view operand_text =
      token_end == std::string_view::npos ? "" : trimmed.substr(token_end);
  DecodeOutcome out = decode_recognized(std::move(mnemonic),
                                        split_operands(trim(operand_text)));
  if (out.kind == DecodeOutcome::Decoded) {
    out.instr.label_prefix = std::move(label);
    out.instr.comment_suffix = std::move(comment);
  }
  return out;
}

}  // namespace

std::optional<LabelSplit> split_leading_label(std::string_view raw) {
  std::string_view s = raw;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  if (s.empty() || !is_label_start(s.front())) return std::nullopt;
  size_t i = 1;
  while (i < s.size() && is_label_char(s[i])) ++i;
  if (i >= s.size() || s[i] != ':') return std::nullopt;
  LabelSplit out;
  out.label = std::string(s.substr(0, i));
  out.rest = std::string(s.substr(i + 1));
  return out;
}

std::string_view leading_indent(std::string_view raw) {
  size_t i = 0;
  while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) ++i;
  return raw.substr(0, i);
}

ParsedLine parse_instruction(std::string_view line_text) {
  ParsedLine out;
  out.line.index = 1;
  out.line.raw_text = std::string(line_text);
  DecodeOutcome decoded = decode_line(line_text);
  switch (decoded.kind) {
    case DecodeOutcome::Decoded:
      out.line.instr = std::move(decoded.instr);
      break;
    case DecodeOutcome::Opaque:
      break;
    case DecodeOutcome::Malformed:
      out.error = std::move(decoded.error);
      break;
  }
  return out;
}

ParseResult parse_document(std::string_view text, std::string source_name,
                           ParseMode mode) {
  ParseResult result;
  result.doc.source_name = std::move(source_name);
  result.doc.crlf = text.find("\r\n") != std::string_view::npos;

  std::vector<std::string_view> raw_lines;
  size_t start = 0;
  for (size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '\n') {
      if (i == text.size() && i == start) break;  // trailing newline normalized
      std::string_view line = text.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      raw_lines.push_back(line);
      start = i + 1;
    }
  }

  int index = 0;
  for (std::string_view raw : raw_lines) {
    SourceLine line;
    line.index = ++index;
    line.raw_text = std::string(raw);
    DecodeOutcome decoded = decode_line(raw);
    if (decoded.kind == DecodeOutcome::Decoded) {
      line.instr = std::move(decoded.instr);
    } else if (decoded.kind == DecodeOutcome::Malformed) {
      result.malformed.push_back({line.index, decoded.error});
      if (mode == ParseMode::Strict) {
        result.aborted = true;
      }
      // Lenient mode: the line degrades to opaque and is reported upstream.
    }
    result.doc.lines.push_back(std::move(line));
  }
  return result;
}

}  // namespace rvvback
