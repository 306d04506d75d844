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

#include "rvvback/emulator.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>

#include "rvvback/parser.hpp"

namespace rvvback {

namespace {

unsigned log2_exact(unsigned v) {
  unsigned r = 0;
  while (v > 1) {
    v >>= 1;
    ++r;
  }
  return r;
}

uint64_t sign_extend(uint64_t value, unsigned bits) {
  if (bits >= 64) return value;
  uint64_t sign = 1ull << (bits - 1);
  uint64_t mask = (1ull << bits) - 1;
  value &= mask;
  return (value ^ sign) - sign;
}

uint64_t truncate(uint64_t value, unsigned bits) {
  return bits >= 64 ? value : value & ((1ull << bits) - 1);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string> split_commas(std::string_view text) {
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

std::optional<int64_t> parse_imm(std::string_view tok) {
  if (tok.empty()) return std::nullopt;
  bool neg = false;
  if (tok.front() == '-' || tok.front() == '+') {
    neg = tok.front() == '-';
    tok.remove_prefix(1);
  }
  int base = 10;
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    base = 16;
    tok.remove_prefix(2);
  }
  uint64_t mag = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), mag, base);
  if (ec != std::errc{} || p != tok.data() + tok.size()) return std::nullopt;
  return neg ? -static_cast<int64_t>(mag) : static_cast<int64_t>(mag);
}

// ---- operand accessors over the parsed Instruction ----

int op_vreg(const Instruction& in, size_t i) {
  if (i >= in.operands.size()) return -1;
  const auto* r = std::get_if<VectorReg>(&in.operands[i]);
  return r ? vector_reg_index(r->name) : -1;
}

int op_sreg(const Instruction& in, size_t i) {
  if (i >= in.operands.size()) return -1;
  const auto* r = std::get_if<ScalarReg>(&in.operands[i]);
  return r ? scalar_reg_index(r->name) : -1;
}

const MemRef* op_mem(const Instruction& in, size_t i) {
  if (i >= in.operands.size()) return nullptr;
  return std::get_if<MemRef>(&in.operands[i]);
}

const Immediate* op_imm(const Instruction& in, size_t i) {
  if (i >= in.operands.size()) return nullptr;
  return std::get_if<Immediate>(&in.operands[i]);
}

// ---- mnemonic tables ----

struct BinSpec {
  BinOp op;
  bool vv, vx, vi;
};

const std::map<std::string_view, BinSpec>& bin_table() {
  static const std::map<std::string_view, BinSpec> table = {
      {"vadd", {BinOp::Add, true, true, true}},
      {"vsub", {BinOp::Sub, true, true, false}},
      {"vrsub", {BinOp::Rsub, false, true, true}},
      {"vmul", {BinOp::Mul, true, true, false}},
      {"vand", {BinOp::And, true, true, true}},
      {"vor", {BinOp::Or, true, true, true}},
      {"vxor", {BinOp::Xor, true, true, true}},
  };
  return table;
}

struct CmpSpec {
  CmpOp op;
  bool vv, vx, vi;
};

const std::map<std::string_view, CmpSpec>& cmp_table() {
  static const std::map<std::string_view, CmpSpec> table = {
      {"vmseq", {CmpOp::Eq, true, true, true}},
      {"vmslt", {CmpOp::Lt, true, true, false}},
      {"vmsltu", {CmpOp::Ltu, true, true, false}},
  };
  return table;
}

bool match_v1_memory(std::string_view m, EmuOp& op) {
  auto try_form = [&](std::string_view prefix, bool load, MemMode mode) {
    std::string_view t = m;
    if (!t.starts_with(prefix)) return false;
    t.remove_prefix(prefix.size());
    unsigned eew = 0;
    for (std::string_view d : {"16", "32", "64", "8"}) {
      if (t.starts_with(d)) {
        eew = d == "8" ? 8u : d == "16" ? 16u : d == "32" ? 32u : 64u;
        t.remove_prefix(d.size());
        break;
      }
    }
    if (eew == 0 || t != ".v") return false;
    op.eew = eew;
    op.load = load;
    op.memmode = mode;
    return true;
  };
  return try_form("vluxei", true, MemMode::Indexed) ||
         try_form("vloxei", true, MemMode::Indexed) ||
         try_form("vsuxei", false, MemMode::Indexed) ||
         try_form("vsoxei", false, MemMode::Indexed) ||
         try_form("vlse", true, MemMode::Strided) ||
         try_form("vsse", false, MemMode::Strided) ||
         try_form("vle", true, MemMode::Unit) ||
         try_form("vse", false, MemMode::Unit);
}

bool match_v07_memory(std::string_view m, EmuOp& op) {
  struct Row {
    std::string_view name;
    bool load;
    MemMode mode;
  };
  static const Row rows[] = {
      {"vle.v", true, MemMode::Unit},      {"vse.v", false, MemMode::Unit},
      {"vlse.v", true, MemMode::Strided},  {"vsse.v", false, MemMode::Strided},
      {"vlxe.v", true, MemMode::Indexed},  {"vsxe.v", false, MemMode::Indexed},
      {"vsuxe.v", false, MemMode::Indexed},
  };
  for (const Row& row : rows) {
    if (m == row.name) {
      op.eew = 0;
      op.load = row.load;
      op.memmode = row.mode;
      return true;
    }
  }
  return false;
}

// ---- loader ----

struct Loader {
  Dialect dialect;
  LoadResult out;

  bool fail(int line, std::string message) {
    out.ok = false;
    out.error_line = line;
    out.error = std::move(message);
    return false;
  }

  bool add_label(std::string_view name, int line) {
    std::string key(name);
    if (out.program.labels.count(key))
      return fail(line, "duplicate label '" + key + "'");
    out.program.labels.emplace(std::move(key), out.program.ops.size());
    return true;
  }

  bool require(bool cond, int line, const std::string& what) {
    if (!cond) return fail(line, what);
    return true;
  }

  // The parser leaves scalar code opaque; the subset interpreter decodes the
  // handful it supports from raw text.
  bool decode_scalar(std::string_view body, int line) {
    size_t cut = body.find_first_of(" \t");
    std::string mnem = to_lower(body.substr(0, cut));
    std::vector<std::string> ops =
        cut == std::string_view::npos
            ? std::vector<std::string>{}
            : split_commas(trim(body.substr(cut)));

    EmuOp op;
    op.line = line;
    auto sreg = [&](size_t i) {
      return i < ops.size() ? scalar_reg_index(ops[i]) : -1;
    };

    if (mnem == "nop") {
      op.kind = OpKind::SNop;
    } else if (mnem == "ret") {
      op.kind = OpKind::SRet;
    } else if (mnem == "mv") {
      op.kind = OpKind::SMv;
      op.rd = sreg(0);
      op.rs1 = sreg(1);
      if (op.rd < 0 || op.rs1 < 0 || ops.size() != 2)
        return fail(line, "mv expects rd, rs");
    } else if (mnem == "add" || mnem == "sub" || mnem == "mul") {
      op.kind = mnem == "add" ? OpKind::SAdd
                              : mnem == "sub" ? OpKind::SSub : OpKind::SMul;
      op.rd = sreg(0);
      op.rs1 = sreg(1);
      op.rs2 = sreg(2);
      if (op.rd < 0 || op.rs1 < 0 || op.rs2 < 0 || ops.size() != 3)
        return fail(line, mnem + " expects rd, rs1, rs2");
    } else if (mnem == "addi" || mnem == "slli" || mnem == "srli") {
      op.kind = mnem == "addi" ? OpKind::SAddi
                               : mnem == "slli" ? OpKind::SSlli : OpKind::SSrli;
      op.rd = sreg(0);
      op.rs1 = sreg(1);
      auto imm = ops.size() == 3 ? parse_imm(ops[2]) : std::nullopt;
      if (op.rd < 0 || op.rs1 < 0 || !imm)
        return fail(line, mnem + " expects rd, rs1, imm");
      op.imm = *imm;
      if (op.kind != OpKind::SAddi && (op.imm < 0 || op.imm > 63))
        return fail(line, "shift amount outside [0,63]");
    } else if (mnem == "beq" || mnem == "bne" || mnem == "blt" ||
               mnem == "bge") {
      op.kind = OpKind::SBranch;
      op.cond = mnem == "beq" ? BranchCond::Eq
                : mnem == "bne" ? BranchCond::Ne
                : mnem == "blt" ? BranchCond::Lt : BranchCond::Ge;
      op.rs1 = sreg(0);
      op.rs2 = sreg(1);
      if (op.rs1 < 0 || op.rs2 < 0 || ops.size() != 3)
        return fail(line, mnem + " expects rs1, rs2, label");
      op.target_label = ops[2];
    } else if (mnem == "bnez" || mnem == "beqz") {
      op.kind = OpKind::SBranch;
      op.cond = mnem == "bnez" ? BranchCond::Ne : BranchCond::Eq;
      op.rs1 = sreg(0);
      op.rs2 = 0;
      if (op.rs1 < 0 || ops.size() != 2)
        return fail(line, mnem + " expects rs, label");
      op.target_label = ops[1];
    } else if (mnem == "j") {
      op.kind = OpKind::SJump;
      if (ops.size() != 1) return fail(line, "j expects a label");
      op.target_label = ops[0];
    } else {
      return fail(line, "unsupported instruction '" + mnem + "'");
    }
    out.program.ops.push_back(std::move(op));
    return true;
  }

  bool decode_vset(const Instruction& in, int line) {
    EmuOp op;
    op.line = line;
    if (in.mnemonic == "vsetvl") {
      op.kind = OpKind::SetVl;
      op.rd = op_sreg(in, 0);
      op.rs1 = op_sreg(in, 1);
      op.rs2 = op_sreg(in, 2);
      if (op.rd < 0 || op.rs1 < 0 || op.rs2 < 0)
        return fail(line, "vsetvl expects three scalar registers");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    const VtypeTokens* vt = nullptr;
    for (const Operand& o : in.operands)
      if (const auto* t = std::get_if<VtypeTokens>(&o)) vt = t;
    if (!vt) return fail(line, in.mnemonic + " missing vtype tokens");
    VConfig cfg = vconfig_from_tokens(*vt);
    if (cfg.fractional)
      return fail(line, "fractional LMUL is not supported by the emulator");
    if (!vt->policy_tokens.empty()) {
      if (dialect == Dialect::V0p7)
        return fail(line, "policy tokens are a v1.0 feature");
      op.has_policy = true;
      for (const std::string& p : vt->policy_tokens) {
        if (p == "ta") op.set_vta = true;
        if (p == "tu") op.set_vta = false;
        if (p == "ma") op.set_vma = true;
        if (p == "mu") op.set_vma = false;
      }
    }
    op.vt = cfg;
    op.rd = op_sreg(in, 0);
    if (op.rd < 0) return fail(line, in.mnemonic + " expects rd first");

    if (in.mnemonic == "vsetvli") {
      op.kind = OpKind::SetVli;
      op.rs1 = op_sreg(in, 1);
      if (op.rs1 < 0) return fail(line, "vsetvli expects rs1 second");
    } else {
      if (dialect == Dialect::V0p7)
        return fail(line, "vsetivli does not exist in v0.7.1");
      op.kind = OpKind::SetIVli;
      const Immediate* imm = op_imm(in, 1);
      if (!imm || imm->value < 0 || imm->value > 31)
        return fail(line, "vsetivli immediate outside [0,31]");
      op.imm = imm->value;
    }
    out.program.ops.push_back(std::move(op));
    return true;
  }

  bool decode_vector(const Instruction& in, int line) {
    const std::string& m = in.mnemonic;
    EmuOp op;
    op.line = line;
    op.mask = in.mask;

    // memory first: the mnemonic namespaces differ per dialect
    bool is_mem = dialect == Dialect::V1p0 ? match_v1_memory(m, op)
                                           : match_v07_memory(m, op);
    if (!is_mem && dialect == Dialect::V1p0 && match_v07_memory(m, op))
      return fail(line, m + " is a v0.7.1 mnemonic, program loads as v1.0");
    if (!is_mem && dialect == Dialect::V0p7 && match_v1_memory(m, op))
      return fail(line, m + " is a v1.0 mnemonic, program loads as v0.7.1");
    if (is_mem) {
      op.kind = OpKind::VMem;
      op.vd = op_vreg(in, 0);
      const MemRef* mem = op_mem(in, 1);
      if (op.vd < 0 || !mem || mem->displacement != 0)
        return fail(line, m + " expects vreg, (base)");
      op.rs1 = scalar_reg_index(mem->base);
      if (op.memmode == MemMode::Strided) {
        op.rs2 = op_sreg(in, 2);
        if (op.rs2 < 0) return fail(line, m + " expects a stride register");
      } else if (op.memmode == MemMode::Indexed) {
        op.vs2 = op_vreg(in, 2);
        if (op.vs2 < 0) return fail(line, m + " expects an index vreg");
      } else if (in.operands.size() != 2) {
        return fail(line, m + " expects vreg, (base)");
      }
      out.program.ops.push_back(std::move(op));
      return true;
    }

    // sew-wide elementwise families, split mnemonic at the last dot
    auto dot = m.rfind('.');
    std::string base = dot == std::string::npos ? m : m.substr(0, dot);
    std::string suffix = dot == std::string::npos ? "" : m.substr(dot + 1);

    auto src_of = [&](std::string_view sfx) -> std::optional<SrcKind> {
      if (sfx == "vv") return SrcKind::VV;
      if (sfx == "vx") return SrcKind::VX;
      if (sfx == "vi") return SrcKind::VI;
      return std::nullopt;
    };

    auto take_src = [&](SrcKind kind) -> bool {
      op.src = kind;
      op.vs2 = op_vreg(in, 1);
      if (op.vs2 < 0) return false;
      switch (kind) {
        case SrcKind::VV:
          op.vs1 = op_vreg(in, 2);
          return op.vs1 >= 0;
        case SrcKind::VX:
          op.rs1 = op_sreg(in, 2);
          return op.rs1 >= 0;
        case SrcKind::VI: {
          const Immediate* imm = op_imm(in, 2);
          if (!imm || imm->value < -16 || imm->value > 15) return false;
          op.imm = imm->value;
          return true;
        }
      }
      return false;
    };

    if (auto it = bin_table().find(base); it != bin_table().end()) {
      auto src = src_of(suffix);
      bool allowed = src && ((*src == SrcKind::VV && it->second.vv) ||
                             (*src == SrcKind::VX && it->second.vx) ||
                             (*src == SrcKind::VI && it->second.vi));
      if (!allowed) return fail(line, "unsupported form " + m);
      op.kind = OpKind::VBin;
      op.binop = it->second.op;
      op.vd = op_vreg(in, 0);
      if (op.vd < 0 || in.operands.size() != 3 || !take_src(*src))
        return fail(line, m + " expects vd and two sources");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (auto it = cmp_table().find(base); it != cmp_table().end()) {
      auto src = src_of(suffix);
      bool allowed = src && ((*src == SrcKind::VV && it->second.vv) ||
                             (*src == SrcKind::VX && it->second.vx) ||
                             (*src == SrcKind::VI && it->second.vi));
      if (!allowed) return fail(line, "unsupported form " + m);
      op.kind = OpKind::VCmp;
      op.cmpop = it->second.op;
      op.vd = op_vreg(in, 0);
      if (op.vd < 0 || in.operands.size() != 3 || !take_src(*src))
        return fail(line, m + " expects vd and two sources");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (base == "vmacc" && (suffix == "vv" || suffix == "vx")) {
      op.kind = OpKind::VMacc;
      op.src = suffix == "vv" ? SrcKind::VV : SrcKind::VX;
      op.vd = op_vreg(in, 0);
      // multiply-add source order: vd, vs1|rs1, vs2
      if (op.src == SrcKind::VV) {
        op.vs1 = op_vreg(in, 1);
        op.vs2 = op_vreg(in, 2);
        if (op.vd < 0 || op.vs1 < 0 || op.vs2 < 0)
          return fail(line, "vmacc.vv expects vd, vs1, vs2");
      } else {
        op.rs1 = op_sreg(in, 1);
        op.vs2 = op_vreg(in, 2);
        if (op.vd < 0 || op.rs1 < 0 || op.vs2 < 0)
          return fail(line, "vmacc.vx expects vd, rs1, vs2");
      }
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vmerge.vvm") {
      op.kind = OpKind::VMerge;
      op.vd = op_vreg(in, 0);
      op.vs2 = op_vreg(in, 1);
      op.vs1 = op_vreg(in, 2);
      if (op.vd < 0 || op.vs2 < 0 || op.vs1 < 0 || op_vreg(in, 3) != 0)
        return fail(line, "vmerge.vvm expects vd, vs2, vs1, v0");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vmv.v.v" || m == "vmv.v.x" || m == "vmv.v.i") {
      if (in.mask) return fail(line, m + " does not take a mask");
      op.kind = OpKind::VMv;
      op.vd = op_vreg(in, 0);
      if (m == "vmv.v.v") {
        op.src = SrcKind::VV;
        op.vs1 = op_vreg(in, 1);
        if (op.vd < 0 || op.vs1 < 0) return fail(line, "vmv.v.v expects vd, vs");
      } else if (m == "vmv.v.x") {
        op.src = SrcKind::VX;
        op.rs1 = op_sreg(in, 1);
        if (op.vd < 0 || op.rs1 < 0) return fail(line, "vmv.v.x expects vd, rs");
      } else {
        op.src = SrcKind::VI;
        const Immediate* imm = op_imm(in, 1);
        if (op.vd < 0 || !imm || imm->value < -16 || imm->value > 15)
          return fail(line, "vmv.v.i expects vd, simm5");
        op.imm = imm->value;
      }
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vredsum.vs") {
      op.kind = OpKind::VRedsum;
      op.vd = op_vreg(in, 0);
      op.vs2 = op_vreg(in, 1);
      op.vs1 = op_vreg(in, 2);
      if (op.vd < 0 || op.vs2 < 0 || op.vs1 < 0)
        return fail(line, "vredsum.vs expects vd, vs2, vs1");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vid.v") {
      op.kind = OpKind::VId;
      op.vd = op_vreg(in, 0);
      if (op.vd < 0) return fail(line, "vid.v expects vd");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vneg.v") {
      if (dialect == Dialect::V0p7)
        return fail(line, "vneg.v is a v1.0 pseudo instruction");
      op.kind = OpKind::VBin;
      op.binop = BinOp::Rsub;
      op.src = SrcKind::VX;
      op.vd = op_vreg(in, 0);
      op.vs2 = op_vreg(in, 1);
      op.rs1 = 0;  // 0 - vs2
      if (op.vd < 0 || op.vs2 < 0) return fail(line, "vneg.v expects vd, vs");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vcpop.m" || m == "vpopc.m") {
      if (m == "vcpop.m" && dialect == Dialect::V0p7)
        return fail(line, "vcpop.m is the v1.0 name; v0.7.1 uses vpopc.m");
      if (m == "vpopc.m" && dialect == Dialect::V1p0)
        return fail(line, "vpopc.m is the v0.7.1 name; v1.0 uses vcpop.m");
      op.kind = OpKind::VPopc;
      op.rd = op_sreg(in, 0);
      op.vs2 = op_vreg(in, 1);
      if (op.rd < 0 || op.vs2 < 0) return fail(line, m + " expects rd, vs2");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vext.x.v") {
      if (dialect == Dialect::V1p0)
        return fail(line, "vext.x.v was removed in v1.0");
      op.kind = OpKind::VExtX;
      op.rd = op_sreg(in, 0);
      op.vs2 = op_vreg(in, 1);
      op.rs1 = op_sreg(in, 2);
      if (op.rd < 0 || op.vs2 < 0 || op.rs1 < 0)
        return fail(line, "vext.x.v expects rd, vs2, rs1");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vmv.x.s") {
      if (dialect == Dialect::V0p7)
        return fail(line, "vmv.x.s does not exist in v0.7.1");
      op.kind = OpKind::VMvXS;
      op.rd = op_sreg(in, 0);
      op.vs2 = op_vreg(in, 1);
      if (op.rd < 0 || op.vs2 < 0) return fail(line, "vmv.x.s expects rd, vs2");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    if (m == "vmv1r.v") {
      if (dialect == Dialect::V0p7)
        return fail(line, "whole-register moves do not exist in v0.7.1");
      op.kind = OpKind::VMv1r;
      op.vd = op_vreg(in, 0);
      op.vs2 = op_vreg(in, 1);
      if (op.vd < 0 || op.vs2 < 0) return fail(line, "vmv1r.v expects vd, vs");
      out.program.ops.push_back(std::move(op));
      return true;
    }

    return fail(line, "unsupported instruction '" + m + "'");
  }

  bool decode_instr(const Instruction& in, int line) {
    const std::string& m = in.mnemonic;
    if (m == ".attribute") return true;  // directive

    if (m == "li") {
      EmuOp op;
      op.line = line;
      op.kind = OpKind::SLi;
      op.rd = op_sreg(in, 0);
      const Immediate* imm = op_imm(in, 1);
      if (op.rd < 0 || !imm) return fail(line, "li expects rd, imm");
      op.imm = imm->value;
      out.program.ops.push_back(std::move(op));
      return true;
    }
    if (m == "csrr") {
      EmuOp op;
      op.line = line;
      op.kind = OpKind::SCsrr;
      op.rd = op_sreg(in, 0);
      const auto* csr = std::get_if<CsrName>(&in.operands[1]);
      if (op.rd < 0 || !csr) return fail(line, "csrr expects rd, csr");
      if (csr->name != "vl" && csr->name != "vtype" && csr->name != "vlenb")
        return fail(line, "unsupported CSR '" + csr->name + "'");
      op.csr = csr->name;
      out.program.ops.push_back(std::move(op));
      return true;
    }
    if (m == "csrw" || m == "csrrw" || m == "csrrs" || m == "csrrc")
      return fail(line, "CSR writes are outside the emulated subset");

    if (m == "vsetvli" || m == "vsetivli" || m == "vsetvl")
      return decode_vset(in, line);

    return decode_vector(in, line);
  }

  bool load(const AssemblyDocument& doc) {
    for (const SourceLine& line : doc.lines) {
      if (line.instr) {
        if (!line.instr->label_prefix.empty()) {
          std::string_view label = line.instr->label_prefix;
          label.remove_suffix(1);  // drop the colon
          if (!add_label(label, line.index)) return false;
        }
        if (!decode_instr(*line.instr, line.index)) return false;
        continue;
      }
      std::string_view body = line.raw_text;
      if (auto hash = body.find('#'); hash != std::string_view::npos)
        body = body.substr(0, hash);
      std::string rest_storage;
      if (auto split = split_leading_label(body)) {
        if (!add_label(split->label, line.index)) return false;
        rest_storage = split->rest;
        body = rest_storage;
      }
      body = trim(body);
      if (body.empty()) continue;
      if (body.front() == '.') continue;        // directive
      if (body.starts_with("//")) continue;     // comment
      if (!decode_scalar(body, line.index)) return false;
    }
    // resolve branch targets
    for (EmuOp& op : out.program.ops) {
      if (op.target_label.empty()) continue;
      auto it = out.program.labels.find(op.target_label);
      if (it == out.program.labels.end())
        return fail(op.line, "unresolved label '" + op.target_label + "'");
      op.target = it->second;
    }
    return true;
  }
};

}  // namespace

MachineState::MachineState(const MachineConfig& cfg)
    : config(cfg), v(32u * (cfg.vlen / 8), 0), mem(cfg.mem_size, 0) {}

uint64_t MachineState::vtype_bits() const {
  return encode_vtype(vconf, vta, vma, vill, config.dialect);
}

uint64_t encode_vtype(const VConfig& cfg, bool vta, bool vma, bool vill,
                      Dialect dialect) {
  if (vill) return 1ull << 63;
  uint64_t sew_code = log2_exact(cfg.sew / 8);
  uint64_t lmul_code = log2_exact(cfg.lmul);
  if (dialect == Dialect::V0p7) return (sew_code << 2) | lmul_code;
  return (uint64_t(vma) << 7) | (uint64_t(vta) << 6) | (sew_code << 3) |
         lmul_code;
}

std::optional<VConfig> decode_vtype(uint64_t bits, Dialect dialect, bool* vta,
                                    bool* vma) {
  if (bits >> 63) return std::nullopt;
  if (dialect == Dialect::V0p7) {
    uint64_t lmul_code = bits & 3;
    uint64_t sew_code = (bits >> 2) & 7;
    if (bits >> 5) return std::nullopt;  // vediv or reserved bits set
    if (sew_code > 3) return std::nullopt;
    return VConfig{8u << sew_code, 1u << lmul_code, false};
  }
  uint64_t lmul_code = bits & 7;
  uint64_t sew_code = (bits >> 3) & 7;
  if (vta) *vta = (bits >> 6) & 1;
  if (vma) *vma = (bits >> 7) & 1;
  if (bits >> 8) return std::nullopt;
  if (lmul_code > 3) return std::nullopt;  // reserved or fractional
  if (sew_code > 3) return std::nullopt;
  return VConfig{8u << sew_code, 1u << lmul_code, false};
}

uint64_t vlmax_for(unsigned vlen, const VConfig& cfg) {
  if (cfg.fractional) return uint64_t(vlen) / cfg.sew / cfg.lmul;
  return uint64_t(vlen) / cfg.sew * cfg.lmul;
}

LoadResult load_program(const AssemblyDocument& doc, Dialect dialect) {
  Loader loader;
  loader.dialect = dialect;
  loader.load(doc);
  return std::move(loader.out);
}

namespace {

struct Exec {
  MachineState& st;
  const EmuOp& op;
  std::optional<std::string> err;

  bool trap(const std::string& reason) {
    err = "line " + std::to_string(op.line) + ": " + reason;
    return false;
  }

  void write_x(int rd, uint64_t value) {
    if (rd > 0) st.x[rd] = value;
  }

  unsigned vlenb() const { return st.vlenb(); }

  uint64_t read_elem(int vreg, uint64_t idx, unsigned esize) const {
    uint64_t val = 0;
    std::memcpy(&val, st.v.data() + size_t(vreg) * vlenb() + idx * esize,
                esize);
    return val;
  }

  void write_elem(int vreg, uint64_t idx, unsigned esize, uint64_t value) {
    std::memcpy(st.v.data() + size_t(vreg) * vlenb() + idx * esize, &value,
                esize);
  }

  // mask layouts differ: v1.0 packs one bit per element; v0.7.1 strides
  // mask bits by MLEN = SEW/LMUL
  unsigned mask_stride() const {
    if (st.config.dialect == Dialect::V1p0) return 1;
    return st.vconf.sew / st.vconf.lmul;
  }

  bool read_mask_bit(int mreg, uint64_t i) const {
    uint64_t pos = i * mask_stride();
    return (st.v[size_t(mreg) * vlenb() + pos / 8] >> (pos % 8)) & 1;
  }

  void write_mask_field(int mreg, uint64_t i, bool value) {
    unsigned stride = mask_stride();
    uint64_t pos = i * stride;
    uint8_t* base = st.v.data() + size_t(mreg) * vlenb();
    // result bit
    uint8_t& b0 = base[pos / 8];
    b0 = uint8_t((b0 & ~(1u << (pos % 8))) | (uint8_t(value) << (pos % 8)));
    // v0.7.1 zeroes the rest of the field
    for (uint64_t k = 1; k < stride; ++k) {
      uint64_t p = pos + k;
      base[p / 8] = uint8_t(base[p / 8] & ~(1u << (p % 8)));
    }
  }

  bool active(uint64_t i) const {
    return !op.mask || read_mask_bit(0, i);
  }

  bool require_legal_vtype() {
    if (st.vill) return trap("vector instruction with illegal vtype");
    return true;
  }

  bool check_group(int vreg, unsigned emul, const char* what) {
    if (vreg % int(emul) != 0)
      return trap(std::string(what) + " register group misaligned for EMUL");
    if (vreg + int(emul) > 32)
      return trap(std::string(what) + " register group past v31");
    return true;
  }

  bool exec_vset() {
    VConfig cfg = op.vt;
    bool new_vta = op.set_vta, new_vma = op.set_vma;
    if (op.kind == OpKind::SetVl) {
      auto decoded =
          decode_vtype(st.x[op.rs2], st.config.dialect, &new_vta, &new_vma);
      if (!decoded) {
        st.vill = true;
        st.vl = 0;
        write_x(op.rd, 0);
        return true;
      }
      cfg = *decoded;
    }
    if (op.has_policy) st.stats.policy_tokens_seen += 1;

    uint64_t vlmax = vlmax_for(st.config.vlen, cfg);
    uint64_t avl = 0;
    if (op.kind == OpKind::SetIVli) {
      avl = uint64_t(op.imm);
    } else if (op.rs1 != 0) {
      avl = st.x[op.rs1];
    } else if (st.config.dialect == Dialect::V0p7) {
      avl = vlmax;
      st.stats.v07_avl_x0_vlmax += 1;
    } else if (op.rd == 0) {
      // v1.0: rs1=x0, rd=x0 changes vtype only and must keep vl legal
      if (st.vl > vlmax)
        return trap("vsetvli x0, x0 would shrink VLMAX below current vl");
      st.stats.v10_avl_x0_keep_vl += 1;
      st.vconf = cfg;
      st.vill = false;
      st.vta = new_vta;
      st.vma = new_vma;
      return true;
    } else {
      avl = vlmax;
      st.stats.v10_avl_x0_vlmax += 1;
    }
    st.vl = std::min(avl, vlmax);
    st.vconf = cfg;
    st.vill = false;
    st.vta = new_vta;
    st.vma = new_vma;
    write_x(op.rd, st.vl);
    return true;
  }

  bool exec_vmem() {
    if (!require_legal_vtype()) return false;
    unsigned sew = st.vconf.sew;
    unsigned lmul = st.vconf.lmul;
    bool indexed = op.memmode == MemMode::Indexed;
    unsigned data_bits = indexed ? sew : (op.eew ? op.eew : sew);
    unsigned index_bits = indexed ? (op.eew ? op.eew : sew) : 0;
    if (op.eew)
      st.stats.mem_eew_typed += 1;
    else
      st.stats.mem_sew_typed += 1;

    auto emul_of = [&](unsigned bits, unsigned& emul) {
      unsigned num = bits * lmul;
      if (num < sew || num % sew != 0) return false;
      emul = num / sew;
      return emul <= 8;
    };
    unsigned data_emul = 1, index_emul = 1;
    if (!emul_of(data_bits, data_emul))
      return trap("effective EMUL outside the emulated range");
    if (!check_group(op.vd, data_emul, "data")) return false;
    if (indexed) {
      if (!emul_of(index_bits, index_emul))
        return trap("index EMUL outside the emulated range");
      if (!check_group(op.vs2, index_emul, "index")) return false;
    }

    unsigned esize = data_bits / 8;
    unsigned isize = index_bits / 8;
    uint64_t base = st.x[op.rs1];
    int64_t stride =
        op.memmode == MemMode::Strided ? int64_t(st.x[op.rs2]) : 0;

    for (uint64_t i = 0; i < st.vl; ++i) {
      if (!active(i)) continue;
      uint64_t addr = 0;
      switch (op.memmode) {
        case MemMode::Unit:
          addr = base + i * esize;
          break;
        case MemMode::Strided:
          addr = base + uint64_t(int64_t(i) * stride);
          break;
        case MemMode::Indexed:
          addr = base + read_elem(op.vs2, i, isize);
          break;
      }
      if (addr % esize != 0)
        return trap("misaligned vector memory access");
      if (addr >= st.mem.size() || st.mem.size() - addr < esize)
        return trap("vector memory access out of bounds");
      if (op.load) {
        uint64_t val = 0;
        std::memcpy(&val, st.mem.data() + addr, esize);
        write_elem(op.vd, i, esize, val);
      } else {
        uint64_t val = read_elem(op.vd, i, esize);
        std::memcpy(st.mem.data() + addr, &val, esize);
      }
    }
    return true;
  }

  uint64_t src2_value(uint64_t i) const {
    switch (op.src) {
      case SrcKind::VV: return read_elem(op.vs1, i, st.vconf.sew / 8);
      case SrcKind::VX: return st.x[op.rs1];
      case SrcKind::VI: return uint64_t(op.imm);
    }
    return 0;
  }

  bool exec_vbin() {
    if (!require_legal_vtype()) return false;
    unsigned sew = st.vconf.sew;
    unsigned lmul = st.vconf.lmul;
    if (!check_group(op.vd, lmul, "destination")) return false;
    if (!check_group(op.vs2, lmul, "source")) return false;
    if (op.src == SrcKind::VV && !check_group(op.vs1, lmul, "source"))
      return false;
    unsigned esize = sew / 8;
    for (uint64_t i = 0; i < st.vl; ++i) {
      if (!active(i)) continue;
      uint64_t a = read_elem(op.vs2, i, esize);
      uint64_t b = src2_value(i);
      uint64_t r = 0;
      switch (op.binop) {
        case BinOp::Add: r = a + b; break;
        case BinOp::Sub: r = a - b; break;
        case BinOp::Rsub: r = b - a; break;
        case BinOp::Mul: r = a * b; break;
        case BinOp::And: r = a & b; break;
        case BinOp::Or: r = a | b; break;
        case BinOp::Xor: r = a ^ b; break;
      }
      write_elem(op.vd, i, esize, truncate(r, sew));
    }
    return true;
  }

  bool exec_vmacc() {
    if (!require_legal_vtype()) return false;
    unsigned sew = st.vconf.sew;
    unsigned lmul = st.vconf.lmul;
    if (!check_group(op.vd, lmul, "destination")) return false;
    if (!check_group(op.vs2, lmul, "source")) return false;
    if (op.src == SrcKind::VV && !check_group(op.vs1, lmul, "source"))
      return false;
    unsigned esize = sew / 8;
    for (uint64_t i = 0; i < st.vl; ++i) {
      if (!active(i)) continue;
      uint64_t mul = op.src == SrcKind::VV ? read_elem(op.vs1, i, esize)
                                           : st.x[op.rs1];
      uint64_t acc = read_elem(op.vd, i, esize);
      uint64_t r = acc + mul * read_elem(op.vs2, i, esize);
      write_elem(op.vd, i, esize, truncate(r, sew));
    }
    return true;
  }

  bool exec_vcmp() {
    if (!require_legal_vtype()) return false;
    unsigned sew = st.vconf.sew;
    unsigned lmul = st.vconf.lmul;
    if (!check_group(op.vs2, lmul, "source")) return false;
    if (op.src == SrcKind::VV && !check_group(op.vs1, lmul, "source"))
      return false;
    unsigned esize = sew / 8;
    for (uint64_t i = 0; i < st.vl; ++i) {
      if (!active(i)) continue;
      uint64_t a = read_elem(op.vs2, i, esize);
      uint64_t b = src2_value(i);
      bool r = false;
      switch (op.cmpop) {
        case CmpOp::Eq:
          r = truncate(a, sew) == truncate(b, sew);
          break;
        case CmpOp::Lt:
          r = int64_t(sign_extend(a, sew)) < int64_t(sign_extend(b, sew));
          break;
        case CmpOp::Ltu:
          r = truncate(a, sew) < truncate(b, sew);
          break;
      }
      write_mask_field(op.vd, i, r);
    }
    return true;
  }

  bool exec_vmerge() {
    if (!require_legal_vtype()) return false;
    unsigned sew = st.vconf.sew;
    unsigned lmul = st.vconf.lmul;
    if (!check_group(op.vd, lmul, "destination")) return false;
    if (!check_group(op.vs2, lmul, "source")) return false;
    if (!check_group(op.vs1, lmul, "source")) return false;
    unsigned esize = sew / 8;
    for (uint64_t i = 0; i < st.vl; ++i) {
      uint64_t val = read_mask_bit(0, i) ? read_elem(op.vs1, i, esize)
                                         : read_elem(op.vs2, i, esize);
      write_elem(op.vd, i, esize, val);
    }
    return true;
  }

  bool exec_vmv() {
    if (!require_legal_vtype()) return false;
    unsigned sew = st.vconf.sew;
    unsigned lmul = st.vconf.lmul;
    if (!check_group(op.vd, lmul, "destination")) return false;
    if (op.src == SrcKind::VV && !check_group(op.vs1, lmul, "source"))
      return false;
    unsigned esize = sew / 8;
    for (uint64_t i = 0; i < st.vl; ++i) {
      uint64_t val = op.src == SrcKind::VV ? read_elem(op.vs1, i, esize)
                   : op.src == SrcKind::VX ? st.x[op.rs1]
                                           : uint64_t(op.imm);
      write_elem(op.vd, i, esize, truncate(val, sew));
    }
    return true;
  }

  bool exec_vredsum() {
    if (!require_legal_vtype()) return false;
    unsigned sew = st.vconf.sew;
    unsigned lmul = st.vconf.lmul;
    if (!check_group(op.vs2, lmul, "source")) return false;
    if (st.vl == 0) return true;  // destination untouched
    unsigned esize = sew / 8;
    uint64_t acc = read_elem(op.vs1, 0, esize);
    for (uint64_t i = 0; i < st.vl; ++i) {
      if (!active(i)) continue;
      acc += read_elem(op.vs2, i, esize);
    }
    write_elem(op.vd, 0, esize, truncate(acc, sew));
    return true;
  }

  bool exec_vid() {
    if (!require_legal_vtype()) return false;
    unsigned lmul = st.vconf.lmul;
    if (!check_group(op.vd, lmul, "destination")) return false;
    unsigned esize = st.vconf.sew / 8;
    for (uint64_t i = 0; i < st.vl; ++i) {
      if (!active(i)) continue;
      write_elem(op.vd, i, esize, truncate(i, st.vconf.sew));
    }
    return true;
  }

  bool exec_vpopc() {
    if (!require_legal_vtype()) return false;
    uint64_t count = 0;
    for (uint64_t i = 0; i < st.vl; ++i) {
      if (!active(i)) continue;
      if (read_mask_bit(op.vs2, i)) ++count;
    }
    write_x(op.rd, count);
    return true;
  }

  bool exec_vextx() {
    if (!require_legal_vtype()) return false;
    if (!check_group(op.vs2, st.vconf.lmul, "source")) return false;
    uint64_t idx = st.x[op.rs1];
    uint64_t vlmax = vlmax_for(st.config.vlen, st.vconf);
    uint64_t val = 0;
    if (idx < vlmax)
      val = sign_extend(read_elem(op.vs2, idx, st.vconf.sew / 8), st.vconf.sew);
    write_x(op.rd, val);
    return true;
  }

  bool exec_vmvxs() {
    if (!require_legal_vtype()) return false;
    write_x(op.rd,
            sign_extend(read_elem(op.vs2, 0, st.vconf.sew / 8), st.vconf.sew));
    return true;
  }

  bool exec_vmv1r() {
    uint8_t* dst = st.v.data() + size_t(op.vd) * vlenb();
    const uint8_t* src = st.v.data() + size_t(op.vs2) * vlenb();
    std::memmove(dst, src, vlenb());
    return true;
  }
};

}  // namespace

std::optional<std::string> step(MachineState& st, const Program& program) {
  if (st.pc >= program.ops.size()) return "halt";
  const EmuOp& op = program.ops[st.pc];
  Exec ex{st, op, std::nullopt};
  size_t next = st.pc + 1;
  bool ok = true;

  switch (op.kind) {
    case OpKind::SetVli:
    case OpKind::SetIVli:
    case OpKind::SetVl:
      ok = ex.exec_vset();
      break;
    case OpKind::VMem: ok = ex.exec_vmem(); break;
    case OpKind::VMv1r: ok = ex.exec_vmv1r(); break;
    case OpKind::VBin: ok = ex.exec_vbin(); break;
    case OpKind::VMacc: ok = ex.exec_vmacc(); break;
    case OpKind::VCmp: ok = ex.exec_vcmp(); break;
    case OpKind::VMerge: ok = ex.exec_vmerge(); break;
    case OpKind::VMv: ok = ex.exec_vmv(); break;
    case OpKind::VRedsum: ok = ex.exec_vredsum(); break;
    case OpKind::VId: ok = ex.exec_vid(); break;
    case OpKind::VPopc: ok = ex.exec_vpopc(); break;
    case OpKind::VExtX: ok = ex.exec_vextx(); break;
    case OpKind::VMvXS: ok = ex.exec_vmvxs(); break;

    case OpKind::SLi: ex.write_x(op.rd, uint64_t(op.imm)); break;
    case OpKind::SAdd: ex.write_x(op.rd, st.x[op.rs1] + st.x[op.rs2]); break;
    case OpKind::SAddi:
      ex.write_x(op.rd, st.x[op.rs1] + uint64_t(op.imm));
      break;
    case OpKind::SSub: ex.write_x(op.rd, st.x[op.rs1] - st.x[op.rs2]); break;
    case OpKind::SMul: ex.write_x(op.rd, st.x[op.rs1] * st.x[op.rs2]); break;
    case OpKind::SSlli:
      ex.write_x(op.rd, st.x[op.rs1] << (op.imm & 63));
      break;
    case OpKind::SSrli:
      ex.write_x(op.rd, st.x[op.rs1] >> (op.imm & 63));
      break;
    case OpKind::SMv: ex.write_x(op.rd, st.x[op.rs1]); break;
    case OpKind::SNop: break;
    case OpKind::SCsrr: {
      uint64_t val = 0;
      if (op.csr == "vl") val = st.vl;
      else if (op.csr == "vtype") val = st.vtype_bits();
      else val = st.vlenb();
      ex.write_x(op.rd, val);
      break;
    }
    case OpKind::SBranch: {
      bool taken = false;
      uint64_t a = st.x[op.rs1], b = st.x[op.rs2];
      switch (op.cond) {
        case BranchCond::Eq: taken = a == b; break;
        case BranchCond::Ne: taken = a != b; break;
        case BranchCond::Lt: taken = int64_t(a) < int64_t(b); break;
        case BranchCond::Ge: taken = int64_t(a) >= int64_t(b); break;
      }
      if (taken) next = op.target;
      break;
    }
    case OpKind::SJump: next = op.target; break;
    case OpKind::SRet: return "halt";
  }

  if (!ok) return ex.err;
  st.x[0] = 0;
  st.pc = next;
  return std::nullopt;
}

RunResult run(MachineState& state, const Program& program, uint64_t max_steps) {
  RunResult result;
  for (uint64_t i = 0; i < max_steps; ++i) {
    if (state.pc >= program.ops.size()) {
      result.ok = true;
      result.steps = i;
      return result;
    }
    int line = program.ops[state.pc].line;
    auto err = step(state, program);
    if (err) {
      result.steps = i + 1;
      if (*err == "halt") {
        result.ok = true;
      } else {
        result.error = *err;
        result.error_line = line;
      }
      return result;
    }
  }
  result.error = "step limit exceeded";
  result.steps = max_steps;
  return result;
}

}  // namespace rvvback
