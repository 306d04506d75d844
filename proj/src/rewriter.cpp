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

#include "rvvback/rewriter.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "rvvback/parser.hpp"

namespace rvvback {

namespace {

bool eat(std::string_view& s, std::string_view prefix) {
  if (!s.starts_with(prefix)) return false;
  s.remove_prefix(prefix.size());
  return true;
}

bool eat_eew(std::string_view& s, unsigned& eew) {
  for (std::string_view tok : {"16", "32", "64", "8"}) {
    if (s.starts_with(tok)) {
      s.remove_prefix(tok.size());
      eew = tok == "8" ? 8u : tok == "16" ? 16u : tok == "32" ? 32u : 64u;
      return true;
    }
  }
  return false;
}

bool eat_nf(std::string_view& s, unsigned& nf) {
  if (s.empty() || s[0] < '2' || s[0] > '8') return false;
  nf = static_cast<unsigned>(s[0] - '0');
  s.remove_prefix(1);
  return true;
}

struct MemoryForm {
  enum Family {
    UnitStride,
    FaultOnlyFirst,
    Strided,
    Indexed,
    UnitSegment,
    StridedSegment,
    IndexedSegment,
    SegmentFaultFirst,
  };
  Family family = UnitStride;
  bool load = true;
  bool ordered = false;  // indexed forms only
  unsigned eew = 0;
  unsigned nf = 0;

  std::string v07_name() const {
    switch (family) {
      case UnitStride:
        return load ? "vle.v" : "vse.v";
      case FaultOnlyFirst:
        return "vleff.v";
      case Strided:
        return load ? "vlse.v" : "vsse.v";
      case Indexed:
        // v0.7.1 has one indexed-load form; stores keep the
        // ordered/unordered split.
        if (load) return "vlxe.v";
        return ordered ? "vsxe.v" : "vsuxe.v";
      case UnitSegment:
        return (load ? "vlseg" : "vsseg") + std::to_string(nf) + "e.v";
      case StridedSegment:
        return (load ? "vlsseg" : "vssseg") + std::to_string(nf) + "e.v";
      case IndexedSegment:
        // Both store orderings funnel into the ordered v0.7.1 form,
        // which is at least as strong.
        return (load ? "vlxseg" : "vsxseg") + std::to_string(nf) + "e.v";
      case SegmentFaultFirst:
        return "vlseg" + std::to_string(nf) + "eff.v";
    }
    return {};
  }

  const char* rule_id() const {
    switch (family) {
      case UnitStride:
        return "mem-unit-stride";
      case FaultOnlyFirst:
      case SegmentFaultFirst:
        return "mem-fault-only-first";
      case Strided:
        return "mem-strided";
      case Indexed:
        return "mem-indexed";
      case UnitSegment:
      case StridedSegment:
      case IndexedSegment:
        return "mem-segment";
    }
    return "";
  }
};

// Recognizes every EEW-typed v1.0 memory mnemonic the table covers.
// v0.7.1 forms (no EEW digits) never match.
std::optional<MemoryForm> classify_memory(std::string_view m) {
  MemoryForm f;
  std::string_view s = m;

  auto indexed_prefix = [&](std::string_view& t) -> bool {
    if (eat(t, "vlux")) { f.load = true;  f.ordered = false; return true; }
    if (eat(t, "vlox")) { f.load = true;  f.ordered = true;  return true; }
    if (eat(t, "vsux")) { f.load = false; f.ordered = false; return true; }
    if (eat(t, "vsox")) { f.load = false; f.ordered = true;  return true; }
    return false;
  };

  s = m;
  if (indexed_prefix(s)) {
    if (eat(s, "seg")) {
      if (eat_nf(s, f.nf) && eat(s, "ei") && eat_eew(s, f.eew) && s == ".v") {
        f.family = MemoryForm::IndexedSegment;
        return f;
      }
      return std::nullopt;
    }
    if (eat(s, "ei") && eat_eew(s, f.eew) && s == ".v") {
      f.family = MemoryForm::Indexed;
      return f;
    }
    return std::nullopt;
  }

  s = m;
  if (eat(s, "vlsseg") || (s = m, eat(s, "vssseg"))) {
    f.load = m[1] == 'l';
    if (eat_nf(s, f.nf) && eat(s, "e") && eat_eew(s, f.eew) && s == ".v") {
      f.family = MemoryForm::StridedSegment;
      return f;
    }
    return std::nullopt;
  }

  s = m;
  if (eat(s, "vlseg") || (s = m, eat(s, "vsseg"))) {
    f.load = m[1] == 'l';
    if (eat_nf(s, f.nf) && eat(s, "e") && eat_eew(s, f.eew)) {
      if (s == ".v") {
        f.family = MemoryForm::UnitSegment;
        return f;
      }
      if (s == "ff.v" && f.load) {
        f.family = MemoryForm::SegmentFaultFirst;
        return f;
      }
    }
    return std::nullopt;
  }

  s = m;
  if (eat(s, "vlse") || (s = m, eat(s, "vsse"))) {
    f.load = m[1] == 'l';
    if (eat_eew(s, f.eew) && s == ".v") {
      f.family = MemoryForm::Strided;
      return f;
    }
    return std::nullopt;
  }

  s = m;
  if (eat(s, "vle") || (s = m, eat(s, "vse"))) {
    f.load = m[1] == 'l';
    if (!eat_eew(s, f.eew)) return std::nullopt;
    if (s == ".v") {
      f.family = MemoryForm::UnitStride;
      return f;
    }
    if (s == "ff.v" && f.load) {
      f.family = MemoryForm::FaultOnlyFirst;
      return f;
    }
  }
  return std::nullopt;
}

struct WholeRegForm {
  enum Kind { Move, Load, Store } kind = Move;
  unsigned nr = 1;
};

std::optional<WholeRegForm> classify_whole_register(std::string_view m) {
  auto group = [](char c) -> unsigned {
    return (c == '1' || c == '2' || c == '4' || c == '8')
               ? static_cast<unsigned>(c - '0')
               : 0;
  };
  std::string_view s = m;
  if (eat(s, "vmv") && s.size() == 4 && s.substr(1) == "r.v" && group(s[0]))
    return WholeRegForm{WholeRegForm::Move, group(s[0])};
  s = m;
  if (eat(s, "vl") && !s.empty() && group(s[0])) {
    unsigned nr = group(s[0]);
    s.remove_prefix(1);
    if (s == "r.v") return WholeRegForm{WholeRegForm::Load, nr};
    unsigned eew = 0;
    if (eat(s, "re") && eat_eew(s, eew) && s == ".v")
      return WholeRegForm{WholeRegForm::Load, nr};
    return std::nullopt;
  }
  s = m;
  if (eat(s, "vs") && !s.empty() && group(s[0])) {
    unsigned nr = group(s[0]);
    s.remove_prefix(1);
    if (s == "r.v") return WholeRegForm{WholeRegForm::Store, nr};
  }
  return std::nullopt;
}

const std::map<std::string_view, std::string_view>& rename_table() {
  static const std::map<std::string_view, std::string_view> table = {
      {"vcpop.m", "vpopc.m"},
      {"vmandn.mm", "vmandnot.mm"},
      {"vmorn.mm", "vmornot.mm"},
      {"vfredusum.vs", "vfredsum.vs"},
      {"vfwredusum.vs", "vfwredsum.vs"},
      {"vnsrl.wv", "vnsrl.vv"},
      {"vnsrl.wx", "vnsrl.vx"},
      {"vnsrl.wi", "vnsrl.vi"},
      {"vnsra.wv", "vnsra.vv"},
      {"vnsra.wx", "vnsra.vx"},
      {"vnsra.wi", "vnsra.vi"},
      {"vnclip.wv", "vnclip.vv"},
      {"vnclip.wx", "vnclip.vx"},
      {"vnclip.wi", "vnclip.vi"},
      {"vnclipu.wv", "vnclipu.vv"},
      {"vnclipu.wx", "vnclipu.vx"},
      {"vnclipu.wi", "vnclipu.vi"},
      {"vfncvt.xu.f.w", "vfncvt.xu.f.v"},
      {"vfncvt.x.f.w", "vfncvt.x.f.v"},
      {"vfncvt.f.xu.w", "vfncvt.f.xu.v"},
      {"vfncvt.f.x.w", "vfncvt.f.x.v"},
      {"vfncvt.f.f.w", "vfncvt.f.f.v"},
  };
  return table;
}

// v1.0 mnemonics with no v0.7.1 counterpart at all. The rtz/rod conversion
// modes and the mask byte load/store appeared after 0.7.1.
const std::set<std::string_view>& no_equivalent_set() {
  static const std::set<std::string_view> table = {
      "vzext.vf2", "vzext.vf4", "vzext.vf8",
      "vsext.vf2", "vsext.vf4", "vsext.vf8",
      "vrgatherei16.vv",
      "vlm.v", "vsm.v", "vle1.v", "vse1.v",
      "vfslide1up.vf", "vfslide1down.vf",
      "vfncvt.rtz.xu.f.w", "vfncvt.rtz.x.f.w", "vfncvt.rod.f.f.w",
      "vfcvt.rtz.xu.f.v", "vfcvt.rtz.x.f.v",
      "vfwcvt.rtz.xu.f.v", "vfwcvt.rtz.x.f.v",
  };
  return table;
}

bool is_csr_mnemonic(std::string_view m) {
  return m == "csrr" || m == "csrw" || m == "csrrw" || m == "csrrs" ||
         m == "csrrc";
}

bool names_vcsr(const Instruction& instr) {
  for (const Operand& op : instr.operands) {
    if (const auto* csr = std::get_if<CsrName>(&op)) {
      if (csr->name == "vcsr") return true;
    }
  }
  return false;
}

Instruction renamed_copy(const Instruction& instr, std::string new_mnemonic) {
  Instruction out = instr;
  out.mnemonic = std::move(new_mnemonic);
  out.label_prefix.clear();
  out.comment_suffix.clear();
  return out;
}

Instruction make(std::string mnemonic, std::vector<Operand> ops,
                 bool mask = false) {
  Instruction out;
  out.mnemonic = std::move(mnemonic);
  out.operands = std::move(ops);
  out.mask = mask;
  return out;
}

RewriteResult replace_with(std::vector<Instruction> instrs, std::string rule) {
  RewriteResult res;
  res.kind = RewriteResult::Kind::Replace;
  res.replacement = std::move(instrs);
  res.rule_id = std::move(rule);
  return res;
}

bool is_x0(const Operand& op) {
  const auto* reg = std::get_if<ScalarReg>(&op);
  return reg && scalar_reg_index(reg->name) == 0;
}

const VtypeTokens* vtype_of(const Instruction& instr) {
  for (const Operand& op : instr.operands) {
    if (const auto* vt = std::get_if<VtypeTokens>(&op)) return vt;
  }
  return nullptr;
}

RewriteResult rewrite_config(const Instruction& instr,
                             const RewriteOptions& opts) {
  const VtypeTokens* vt = vtype_of(instr);
  if (!vt) {
    return make_reject(DiagnosticCode::MalformedInstruction,
                       instr.mnemonic + " missing vtype tokens");
  }
  auto lm = lmul_from_token(vt->lmul_token);
  if (lm && lm->second) {
    return make_reject(DiagnosticCode::FractionalLmul,
                       "fractional LMUL " + vt->lmul_token +
                           " has no v0.7.1 encoding");
  }
  VtypeTokens stripped{vt->sew_token, vt->lmul_token, {}};

  if (instr.mnemonic == "vsetvli") {
    if (vt->policy_tokens.empty()) {
      RewriteResult res;  // nothing v1.0-specific left on the line
      res.kind = RewriteResult::Kind::PassThrough;
      return res;
    }
    return replace_with(
        {make("vsetvli", {instr.operands[0], instr.operands[1], stripped})},
        "strip-policy");
  }

  // vsetivli: no v0.7.1 encoding, expand through a register.
  const auto* imm = std::get_if<Immediate>(&instr.operands[1]);
  if (!imm || imm->value < 0 || imm->value > 31) {
    return make_reject(DiagnosticCode::MalformedInstruction,
                       "vsetivli immediate outside [0,31]");
  }
  RewriteResult res;
  if (is_x0(instr.operands[0])) {
    ScalarReg scratch{opts.scratch_regs[0]};
    res = replace_with(
        {make("li", {scratch, Immediate{imm->value}}),
         make("vsetvli", {instr.operands[0], scratch, stripped})},
        "expand-vsetivli");
    res.scratch_used.push_back(scratch.name);
  } else {
    res = replace_with(
        {make("li", {instr.operands[0], Immediate{imm->value}}),
         make("vsetvli", {instr.operands[0], instr.operands[0], stripped})},
        "expand-vsetivli");
  }
  return res;
}

RewriteResult rewrite_memory(const Instruction& instr, const MemoryForm& form,
                             const TrackedState& state,
                             const RewriteOptions& opts) {
  bool warn = false;
  if (!opts.assume_eew_matches_sew) {
    if (state.known) {
      if (state.config.sew != form.eew) {
        return make_reject(
            DiagnosticCode::EewSewMismatch,
            "EEW " + std::to_string(form.eew) + " differs from tracked SEW " +
                std::to_string(state.config.sew));
      }
    } else if (opts.mode == RewriteMode::Lenient) {
      warn = true;  // translate on faith, surface it
    } else {
      return make_reject(
          DiagnosticCode::UnknownStateStrict,
          "vector configuration unknown here; pass --assume-eew-matches-sew "
          "or --lenient to translate anyway");
    }
  }
  RewriteResult res =
      replace_with({renamed_copy(instr, form.v07_name())}, form.rule_id());
  res.warn_unknown_state = warn;
  return res;
}

RewriteResult rewrite_whole_register(const Instruction& instr,
                                     const WholeRegForm& form,
                                     const RewriteOptions& opts) {
  if (form.nr != 1) {
    return make_reject(DiagnosticCode::NoV07Equivalent,
                       "whole-register group of " + std::to_string(form.nr) +
                           " has no v0.7.1 equivalent");
  }
  if (!opts.expand_whole_register) {
    return make_reject(
        DiagnosticCode::WholeRegisterNeedsFlag,
        instr.mnemonic + " requires --expand-whole-register to translate");
  }
  ScalarReg s0{opts.scratch_regs[0]};
  ScalarReg s1{opts.scratch_regs[1]};

  Instruction body;
  if (form.kind == WholeRegForm::Move) {
    if (instr.operands.size() != 2)
      return make_reject(DiagnosticCode::MalformedInstruction,
                         instr.mnemonic + " expects vd, vs");
    body = make("vmv.v.v", {instr.operands[0], instr.operands[1]});
  } else {
    if (instr.operands.size() != 2)
      return make_reject(DiagnosticCode::MalformedInstruction,
                         instr.mnemonic + " expects a register and an address");
    const auto* mem = std::get_if<MemRef>(&instr.operands[1]);
    if (!mem)
      return make_reject(DiagnosticCode::MalformedInstruction,
                         instr.mnemonic + " expects an address operand");
    int base = scalar_reg_index(mem->base);
    if (base == scalar_reg_index(s0.name) || base == scalar_reg_index(s1.name)) {
      return make_reject(DiagnosticCode::ScratchCollision,
                         "base register " + mem->base +
                             " collides with scratch registers " + s0.name +
                             "," + s1.name);
    }
    body = make(form.kind == WholeRegForm::Load ? "vle.v" : "vse.v",
                {instr.operands[0], instr.operands[1]});
  }

  RewriteResult res = replace_with(
      {make("csrr", {s0, CsrName{"vl"}}),
       make("csrr", {s1, CsrName{"vtype"}}),
       make("vsetvli",
            {ScalarReg{"x0"}, ScalarReg{"x0"}, VtypeTokens{"e8", "m1", {}}}),
       std::move(body),
       make("vsetvl", {ScalarReg{"x0"}, s0, s1})},
      "expand-whole-register");
  res.scratch_used = {s0.name, s1.name};
  return res;
}

}  // namespace

bool valid_scratch_regs(const RewriteOptions& opts) {
  int a = scalar_reg_index(opts.scratch_regs[0]);
  int b = scalar_reg_index(opts.scratch_regs[1]);
  return a > 0 && b > 0 && a != b;
}

std::string_view diagnostic_code_string(DiagnosticCode code) {
  switch (code) {
    case DiagnosticCode::FractionalLmul: return "fractional-lmul";
    case DiagnosticCode::EewSewMismatch: return "eew-sew-mismatch";
    case DiagnosticCode::UnknownStateStrict: return "unknown-state";
    case DiagnosticCode::NoV07Equivalent: return "no-v07-equivalent";
    case DiagnosticCode::WholeRegisterNeedsFlag: return "whole-register-needs-flag";
    case DiagnosticCode::VcsrAccess: return "vcsr-access";
    case DiagnosticCode::MalformedInstruction: return "malformed";
    case DiagnosticCode::ScratchCollision: return "scratch-collision";
  }
  return "malformed";
}

std::vector<std::string> all_diagnostic_codes() {
  return {"fractional-lmul",  "eew-sew-mismatch",
          "unknown-state",    "no-v07-equivalent",
          "whole-register-needs-flag", "vcsr-access",
          "malformed",        "scratch-collision"};
}

RewriteResult make_reject(DiagnosticCode code, std::string message) {
  RewriteResult res;
  res.kind = RewriteResult::Kind::Reject;
  res.code = code;
  res.message = std::move(message);
  return res;
}

RewriteResult rewrite_instruction(const Instruction& instr,
                                  const TrackedState& state,
                                  const RewriteOptions& opts) {
  const std::string& m = instr.mnemonic;
  RewriteResult pass;  // default: PassThrough

  if (m == ".attribute") return pass;  // handled at emission

  // A. configuration
  if (m == "vsetvli" || m == "vsetivli") return rewrite_config(instr, opts);

  // B. one-to-one renames
  if (auto it = rename_table().find(m); it != rename_table().end()) {
    return replace_with({renamed_copy(instr, std::string(it->second))},
                        "rename-op");
  }

  // C. EEW-typed memory
  if (auto mem = classify_memory(m)) {
    return rewrite_memory(instr, *mem, state, opts);
  }

  // D. pseudo expansions
  if (m == "vneg.v" && instr.operands.size() == 2) {
    return replace_with({make("vrsub.vx",
                              {instr.operands[0], instr.operands[1],
                               ScalarReg{"x0"}},
                              instr.mask)},
                        "expand-pseudo");
  }
  if (m == "vncvt.x.x.w" && instr.operands.size() == 2) {
    return replace_with({make("vnsrl.vx",
                              {instr.operands[0], instr.operands[1],
                               ScalarReg{"x0"}},
                              instr.mask)},
                        "expand-pseudo");
  }
  if (m == "vmmv.m" && instr.operands.size() == 2) {
    return replace_with(
        {make("vmand.mm",
              {instr.operands[0], instr.operands[1], instr.operands[1]})},
        "expand-pseudo");
  }
  if (m == "vmv.x.s" && instr.operands.size() == 2) {
    return replace_with({make("vext.x.v",
                              {instr.operands[0], instr.operands[1],
                               ScalarReg{"x0"}})},
                        "scalar-move");
  }

  // E. whole-register forms
  if (auto wr = classify_whole_register(m)) {
    return rewrite_whole_register(instr, *wr, opts);
  }

  // F. known dead ends
  if (no_equivalent_set().count(m)) {
    return make_reject(DiagnosticCode::NoV07Equivalent,
                       "no v0.7.1 equivalent for " + m);
  }
  if (is_csr_mnemonic(m) && names_vcsr(instr)) {
    return make_reject(DiagnosticCode::VcsrAccess,
                       "the vcsr CSR does not exist in v0.7.1");
  }

  // G. native in both dialects, or scalar
  return pass;
}

void rewrite_document(AssemblyDocument& doc,
                      const std::vector<TrackedState>& states,
                      const RewriteOptions& opts, TranslationReport& report) {
  for (size_t i = 0; i < doc.lines.size(); ++i) {
    SourceLine& line = doc.lines[i];
    if (!line.instr) continue;
    RewriteResult res = rewrite_instruction(*line.instr, states[i], opts);
    switch (res.kind) {
      case RewriteResult::Kind::PassThrough:
        break;
      case RewriteResult::Kind::Replace: {
        line.rewritten = true;
        line.rule_id = res.rule_id;
        line.replacement = std::move(res.replacement);
        line.replacement.front().label_prefix = line.instr->label_prefix;
        line.replacement.back().comment_suffix = line.instr->comment_suffix;
        report.rule_counts[res.rule_id] += 1;
        for (const std::string& reg : res.scratch_used)
          report.scratch_uses.push_back({line.index, reg});
        if (res.warn_unknown_state) {
          report.warnings.push_back(
              {line.index, "unknown-state",
               "translated " + line.instr->mnemonic +
                   " assuming EEW matches SEW; configuration not proven"});
        }
        break;
      }
      case RewriteResult::Kind::Reject:
        report.errors.push_back({line.index,
                                 std::string(diagnostic_code_string(res.code)),
                                 res.message});
        line.error_note = std::string(diagnostic_code_string(res.code));
        break;
    }
  }
  doc.translated = true;
}

const std::vector<std::string>& all_rule_ids() {
  static const std::vector<std::string> ids = {
      "strip-policy",       "expand-vsetivli",
      "rename-op",          "mem-unit-stride",
      "mem-strided",        "mem-indexed",
      "mem-segment",        "mem-fault-only-first",
      "expand-pseudo",      "expand-whole-register",
      "scalar-move",        "arch-attribute",
  };
  return ids;
}

bool is_v1_only_mnemonic(std::string_view mnemonic) {
  std::string m(mnemonic);
  std::transform(m.begin(), m.end(), m.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (m == "vsetivli") return true;
  if (rename_table().count(m)) return true;
  if (classify_memory(m)) return true;
  if (m == "vneg.v" || m == "vncvt.x.x.w" || m == "vmmv.m" || m == "vmv.x.s")
    return true;
  if (classify_whole_register(m)) return true;
  if (no_equivalent_set().count(m)) return true;
  return false;
}

std::vector<std::string> find_v1_only_mnemonics(std::string_view text) {
  std::vector<std::string> found;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    std::string rest_storage;
    if (auto split = split_leading_label(line)) {
      rest_storage = split->rest;
      line = rest_storage;
    }
    size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    size_t stop = line.find_first_of(" \t", begin);
    std::string_view tok = line.substr(
        begin, stop == std::string_view::npos ? line.size() - begin
                                              : stop - begin);
    if (is_v1_only_mnemonic(tok)) found.emplace_back(tok);
    if (end == text.size()) break;
  }
  return found;
}

}  // namespace rvvback
