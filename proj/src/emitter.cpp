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

#include <cctype>

#include "rvvback/parser.hpp"

namespace rvvback {

namespace {

// Vector version tokens inside an arch string: v<digits>p<digits> ending at
// '_', '"', or end of string. Both spellings occur in the wild ("rv64gcv1p0"
// and "rv64gc_v1p0"). Nothing else in an ISA string matches: other extension
// names never put digits directly between 'v' and 'p'.
struct VersionToken {
  size_t pos;  // position of the 'v'
  size_t len;
  std::string text;
};

std::vector<VersionToken> find_vector_versions(const std::string& s) {
  std::vector<VersionToken> out;
  for (size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] != 'v') continue;
    size_t j = i + 1;
    size_t digits1 = j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == digits1 || j >= s.size() || s[j] != 'p') continue;
    size_t digits2 = ++j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == digits2) continue;
    // Must end the token: next char is '_' , '"' or end.
    if (j < s.size() && s[j] != '_' && s[j] != '"') continue;
    out.push_back({i, j - i, s.substr(i, j - i)});
  }
  return out;
}

std::string rewrite_arch_line(const SourceLine& line, TranslationReport* report) {
  std::string text = line.raw_text;
  auto tokens = find_vector_versions(text);
  // A version this tool does not know leaves the whole line alone: there is
  // no way to tell what dialect such code wants.
  for (const VersionToken& token : tokens) {
    if (token.text != "v1p0" && token.text != "v0p7") {
      if (report) {
        report->warnings.push_back(
            {line.index, "arch-attribute",
             "arch attribute names vector extension version '" + token.text +
                 "'; line left unchanged"});
      }
      return line.raw_text;
    }
  }
  bool replaced = false;
  // Replace back-to-front so positions stay valid.
  for (auto it = tokens.rbegin(); it != tokens.rend(); ++it) {
    if (it->text == "v1p0") {
      text.replace(it->pos, it->len, "v0p7");
      replaced = true;
    }
  }
  if (replaced && report) report->rule_counts["arch-attribute"] += 1;
  return text;
}

std::string render_replacement(const SourceLine& line, bool annotate) {
  std::string indent(leading_indent(line.raw_text));
  std::string out;
  for (size_t k = 0; k < line.replacement.size(); ++k) {
    const Instruction& instr = line.replacement[k];
    std::string rendered = indent;
    if (!instr.label_prefix.empty()) {
      rendered += instr.label_prefix;
      rendered += ' ';
    }
    rendered += canonical_text(instr);
    if (!instr.comment_suffix.empty()) {
      rendered += ' ';
      rendered += instr.comment_suffix;
    }
    if (k == 0 && annotate) {
      rendered += " # rvv-backport: ";
      rendered += line.rule_id;
    }
    if (k > 0) out += '\n';
    out += rendered;
  }
  return out;
}

}  // namespace

std::string emit_assembly(const AssemblyDocument& doc,
                          TranslationReport* report, bool annotate) {
  std::string out;
  for (const SourceLine& line : doc.lines) {
    std::string text;
    if (line.rewritten) {
      text = render_replacement(line, annotate);
    } else if (!line.error_note.empty()) {
      text = line.raw_text + " # rvv-backport-error: " + line.error_note;
    } else if (doc.translated && line.instr &&
               line.instr->mnemonic == ".attribute") {
      text = rewrite_arch_line(line, report);
    } else {
      text = line.raw_text;
    }
    out += text;
    out += '\n';
  }
  if (doc.crlf) {
    std::string crlf;
    crlf.reserve(out.size() + doc.lines.size());
    for (char c : out) {
      if (c == '\n') crlf += '\r';
      crlf += c;
    }
    return crlf;
  }
  return out;
}

}  // namespace rvvback
