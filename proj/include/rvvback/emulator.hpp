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
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rvvback/asm_model.hpp"

namespace rvvback {

struct MachineConfig {
  unsigned vlen = 128;         // bits per vector register
  size_t mem_size = 1 << 20;   // flat byte-addressed memory
  Dialect dialect = Dialect::V1p0;
};

/// Execution counters for the dialect-sensitive paths, so property tests can
/// assert every branch was actually exercised.
struct DialectStats {
  uint64_t v07_avl_x0_vlmax = 0;   // v0.7 vsetvli rs1=x0 -> VLMAX
  uint64_t v10_avl_x0_keep_vl = 0; // v1.0 rs1=x0, rd=x0 -> vl kept
  uint64_t v10_avl_x0_vlmax = 0;   // v1.0 rs1=x0, rd!=x0 -> VLMAX
  uint64_t mem_sew_typed = 0;      // v0.7 memory op sized by SEW
  uint64_t mem_eew_typed = 0;      // v1.0 memory op sized by mnemonic EEW
  uint64_t policy_tokens_seen = 0; // vsetvli carrying ta/tu/ma/mu
};

struct MachineState {
  explicit MachineState(const MachineConfig& config);

  MachineConfig config;
  std::array<uint64_t, 32> x{};  // x0 stays zero
  std::vector<uint8_t> v;        // 32 * vlenb bytes, flat; groups contiguous
  std::vector<uint8_t> mem;
  uint64_t vl = 0;
  bool vill = true;
  VConfig vconf;                 // valid when !vill
  bool vta = false, vma = false; // v1.0 policy bits, kept for CSR reads
  size_t pc = 0;
  DialectStats stats;

  unsigned vlenb() const { return config.vlen / 8; }
  uint64_t vtype_bits() const;
};

/// Bits of the vtype CSR for a configuration, per dialect layout.
uint64_t encode_vtype(const VConfig& cfg, bool vta, bool vma, bool vill,
                      Dialect dialect);
/// Decodes vtype bits. nullopt means vill (set, reserved, or out of the
/// emulated range); vta/vma are filled for v1.0 when non-null.
std::optional<VConfig> decode_vtype(uint64_t bits, Dialect dialect,
                                    bool* vta = nullptr, bool* vma = nullptr);
/// VLEN/SEW * LMUL.
uint64_t vlmax_for(unsigned vlen, const VConfig& cfg);

enum class OpKind {
  SetVli, SetIVli, SetVl,
  VMem,      // unit / strided / indexed load or store
  VMv1r,
  VBin,      // elementwise arithmetic/logic
  VMacc,
  VCmp,      // mask-producing compare
  VMerge,
  VMv,       // vmv.v.v / .v.x / .v.i
  VRedsum,
  VId,
  VPopc,
  VExtX,     // v0.7 vext.x.v
  VMvXS,     // v1.0 vmv.x.s
  SLi, SAdd, SAddi, SSub, SMul, SSlli, SSrli, SMv, SNop,
  SCsrr, SBranch, SJump, SRet,
};

enum class BinOp : uint8_t { Add, Sub, Rsub, Mul, And, Or, Xor };
enum class CmpOp : uint8_t { Eq, Lt, Ltu };
enum class SrcKind : uint8_t { VV, VX, VI };
enum class MemMode : uint8_t { Unit, Strided, Indexed };
enum class BranchCond : uint8_t { Eq, Ne, Lt, Ge };

struct EmuOp {
  OpKind kind = OpKind::SNop;
  int line = 0;
  int rd = -1, rs1 = -1, rs2 = -1;
  int vd = -1, vs1 = -1, vs2 = -1;
  int64_t imm = 0;
  bool mask = false;
  unsigned eew = 0;              // 0: element size comes from SEW
  MemMode memmode = MemMode::Unit;
  bool load = false;
  BinOp binop = BinOp::Add;
  CmpOp cmpop = CmpOp::Eq;
  SrcKind src = SrcKind::VV;
  BranchCond cond = BranchCond::Eq;
  VConfig vt;                    // vset immediate vtype
  bool set_vta = false, set_vma = false;
  bool has_policy = false;       // source carried explicit ta/tu/ma/mu
  std::string csr;
  std::string target_label;
  size_t target = 0;             // resolved label index
};

struct Program {
  std::vector<EmuOp> ops;
  std::map<std::string, size_t> labels;
};

struct LoadResult {
  Program program;
  bool ok = true;
  int error_line = 0;
  std::string error;
};

/// Builds an executable program for one dialect. Blank lines, comments,
/// directives, and label-only lines are structural; any other line must
/// decode to the supported subset for that dialect. Scalar instructions are
/// decoded here from their raw text.
LoadResult load_program(const AssemblyDocument& doc, Dialect dialect);

/// Executes one instruction. Returns a trap/halt reason, nullopt while
/// running. "halt" is the orderly stop (ret or past-the-end).
std::optional<std::string> step(MachineState& state, const Program& program);

struct RunResult {
  bool ok = false;        // halted without trap
  std::string error;
  int error_line = 0;
  uint64_t steps = 0;
};

RunResult run(MachineState& state, const Program& program, uint64_t max_steps);

}  // namespace rvvback
