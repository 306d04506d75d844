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

#include <functional>
#include <string>

#include "doctest.h"
#include "rvvback/parser.hpp"

using namespace rvvback;

namespace {

LoadResult load(const std::string& text, Dialect dialect) {
  ParseResult parsed = parse_document(text, "emu.s", ParseMode::Lenient);
  return load_program(parsed.doc, dialect);
}

// Loads and runs to completion. `setup` pokes registers/memory first.
// When `expect_trap` is null the run must halt cleanly.
MachineState run_asm(const std::string& text, Dialect dialect, unsigned vlen,
                     const std::function<void(MachineState&)>& setup = {},
                     RunResult* out = nullptr) {
  LoadResult loaded = load(text, dialect);
  REQUIRE_MESSAGE(loaded.ok, loaded.error);
  MachineConfig cfg;
  cfg.vlen = vlen;
  cfg.mem_size = 1 << 16;
  cfg.dialect = dialect;
  MachineState state(cfg);
  if (setup) setup(state);
  RunResult res = run(state, loaded.program, 100000);
  if (out)
    *out = res;
  else
    REQUIRE_MESSAGE(res.ok, res.error);
  return state;
}

uint64_t vreg_elem(const MachineState& st, int reg, unsigned sew,
                   unsigned idx) {
  size_t base = size_t(reg) * st.vlenb() + size_t(idx) * (sew / 8);
  uint64_t out = 0;
  for (unsigned b = 0; b < sew / 8; ++b)
    out |= uint64_t(st.v[base + b]) << (8 * b);
  return out;
}

int mask_bit(const MachineState& st, int reg, unsigned bitpos) {
  return (st.v[size_t(reg) * st.vlenb() + bitpos / 8] >> (bitpos % 8)) & 1;
}

void poke32(MachineState& st, uint64_t addr, uint32_t value) {
  for (unsigned b = 0; b < 4; ++b)
    st.mem[addr + b] = uint8_t(value >> (8 * b));
}

uint32_t peek32(const MachineState& st, uint64_t addr) {
  uint32_t out = 0;
  for (unsigned b = 0; b < 4; ++b)
    out |= uint32_t(st.mem[addr + b]) << (8 * b);
  return out;
}

}  // namespace

TEST_CASE("vtype encoding per dialect") {
  // v1.0 layout: vlmul[2:0], vsew[5:3], vta bit 6, vma bit 7.
  CHECK(encode_vtype({8, 1, false}, false, false, false, Dialect::V1p0) == 0);
  CHECK(encode_vtype({32, 2, false}, true, false, false, Dialect::V1p0) ==
        0x51);
  CHECK(encode_vtype({64, 8, false}, false, false, false, Dialect::V1p0) ==
        0x1b);
  // v0.7 layout: vlmul[1:0], vsew[4:2].
  CHECK(encode_vtype({8, 1, false}, false, false, false, Dialect::V0p7) == 0);
  CHECK(encode_vtype({32, 2, false}, false, false, false, Dialect::V0p7) == 9);
  CHECK(encode_vtype({64, 8, false}, false, false, false, Dialect::V0p7) ==
        0xf);
  // vill dominates everything.
  CHECK(encode_vtype({32, 1, false}, false, false, true, Dialect::V1p0) ==
        1ull << 63);
}

TEST_CASE("vtype decoding rejects reserved patterns") {
  bool ta = false, ma = false;
  auto cfg = decode_vtype(0x51, Dialect::V1p0, &ta, &ma);
  REQUIRE(cfg.has_value());
  CHECK(*cfg == VConfig{32, 2, false});
  CHECK(ta);
  CHECK_FALSE(ma);

  CHECK_FALSE(decode_vtype(1ull << 63, Dialect::V1p0).has_value());
  CHECK_FALSE(decode_vtype(1ull << 63, Dialect::V0p7).has_value());
  CHECK_FALSE(decode_vtype(4, Dialect::V1p0).has_value());    // lmul code 100
  CHECK_FALSE(decode_vtype(7, Dialect::V1p0).has_value());    // fractional
  CHECK_FALSE(decode_vtype(1 << 8, Dialect::V1p0).has_value());
  CHECK_FALSE(decode_vtype(1 << 5, Dialect::V0p7).has_value());  // vediv
  CHECK_FALSE(decode_vtype(4 << 2 | 0, Dialect::V0p7).has_value());  // sew 128

  // Integer-LMUL roundtrip across both dialects.
  for (Dialect d : {Dialect::V0p7, Dialect::V1p0})
    for (unsigned sew : {8u, 16u, 32u, 64u})
      for (unsigned lmul : {1u, 2u, 4u, 8u}) {
        VConfig in{sew, lmul, false};
        auto out = decode_vtype(encode_vtype(in, false, false, false, d), d);
        REQUIRE(out.has_value());
        CHECK(*out == in);
      }
}

TEST_CASE("vlmax") {
  CHECK(vlmax_for(128, {32, 2, false}) == 8);
  CHECK(vlmax_for(128, {8, 1, false}) == 16);
  CHECK(vlmax_for(128, {64, 8, false}) == 16);
  CHECK(vlmax_for(256, {16, 4, false}) == 64);
  CHECK(vlmax_for(128, {32, 2, true}) == 2);  // fractional: VLEN/SEW/denom
}

TEST_CASE("vsetvli clamps AVL to VLMAX") {
  auto st = run_asm("vsetvli t0, a0, e32, m1\n", Dialect::V1p0, 128,
                    [](MachineState& s) { s.x[10] = 3; });
  CHECK(st.vl == 3);
  CHECK(st.x[5] == 3);
  CHECK_FALSE(st.vill);
  CHECK(st.vconf == VConfig{32, 1, false});

  auto big = run_asm("vsetvli t0, a0, e32, m1\n", Dialect::V1p0, 128,
                     [](MachineState& s) { s.x[10] = 100; });
  CHECK(big.vl == 4);
  CHECK(big.x[5] == 4);
}

TEST_CASE("vsetivli uses the immediate AVL") {
  auto st = run_asm("vsetivli t0, 7, e16, m2\n", Dialect::V1p0, 128);
  CHECK(st.vl == 7);
  CHECK(st.x[5] == 7);
}

TEST_CASE("v0.7 vsetvli with rs1=x0 selects VLMAX") {
  auto st = run_asm("vsetvli t0, x0, e8, m1\n", Dialect::V0p7, 128);
  CHECK(st.vl == 16);
  CHECK(st.stats.v07_avl_x0_vlmax == 1);

  // Even with rd=x0.
  auto keep = run_asm("vsetvli t0, a0, e8, m1\nvsetvli x0, x0, e8, m1\n",
                      Dialect::V0p7, 128,
                      [](MachineState& s) { s.x[10] = 2; });
  CHECK(keep.vl == 16);
  CHECK(keep.stats.v07_avl_x0_vlmax == 1);
}

TEST_CASE("v1.0 vsetvli with rs1=x0 splits on rd") {
  // rd != x0: VLMAX.
  auto vlmax = run_asm("vsetvli t0, x0, e8, m1\n", Dialect::V1p0, 128);
  CHECK(vlmax.vl == 16);
  CHECK(vlmax.stats.v10_avl_x0_vlmax == 1);

  // rd == x0: vl is kept, vtype changes.
  auto keep = run_asm(
      "vsetvli t0, a0, e8, m1\n"
      "vsetvli x0, x0, e16, m4\n",
      Dialect::V1p0, 128, [](MachineState& s) { s.x[10] = 2; });
  CHECK(keep.vl == 2);
  CHECK(keep.vconf == VConfig{16, 4, false});
  CHECK(keep.stats.v10_avl_x0_keep_vl == 1);

  // Keeping a vl above the new VLMAX traps.
  RunResult res;
  run_asm(
      "vsetvli t0, x0, e8, m1\n"
      "vsetvli x0, x0, e32, m1\n",
      Dialect::V1p0, 128, {}, &res);
  CHECK_FALSE(res.ok);
  CHECK(res.error == "line 2: vsetvli x0, x0 would shrink VLMAX below current vl");
  CHECK(res.error_line == 2);
}

TEST_CASE("policy tokens are counted") {
  auto st = run_asm("vsetvli t0, a0, e32, m1, ta, ma\n", Dialect::V1p0, 128,
                    [](MachineState& s) { s.x[10] = 4; });
  CHECK(st.stats.policy_tokens_seen == 1);
  CHECK(st.vta);
  CHECK(st.vma);
}

TEST_CASE("vsetvl takes vtype from a register") {
  uint64_t bits = encode_vtype({32, 2, false}, false, false, false,
                               Dialect::V0p7);
  auto st = run_asm("vsetvl t0, a0, a1\n", Dialect::V0p7, 128,
                    [&](MachineState& s) {
                      s.x[10] = 5;
                      s.x[11] = bits;
                    });
  CHECK(st.vl == 5);
  CHECK(st.vconf == VConfig{32, 2, false});

  // Reserved bits make the configuration illegal rather than trapping.
  auto ill = run_asm("vsetvl t0, a0, a1\n", Dialect::V0p7, 128,
                     [](MachineState& s) {
                       s.x[10] = 5;
                       s.x[11] = 1 << 5;
                     });
  CHECK(ill.vill);
}

TEST_CASE("vector instructions trap under an illegal vtype") {
  RunResult res;
  run_asm("vadd.vv v1, v2, v3\n", Dialect::V1p0, 128, {}, &res);
  CHECK_FALSE(res.ok);
  CHECK(res.error == "line 1: vector instruction with illegal vtype");
  CHECK(res.error_line == 1);
}

TEST_CASE("v1.0 memory is sized by the mnemonic EEW") {
  // SEW=8 but a 32-bit load: EMUL = 4, element width 32.
  auto st = run_asm(
      "vsetvli t0, a0, e8, m1\n"
      "vle32.v v4, (a1)\n",
      Dialect::V1p0, 128, [](MachineState& s) {
        s.x[10] = 4;
        s.x[11] = 0x100;
        poke32(s, 0x100, 0x11223344);
        poke32(s, 0x104, 0x55667788);
      });
  CHECK(st.stats.mem_eew_typed == 1);
  CHECK(st.stats.mem_sew_typed == 0);
  CHECK(vreg_elem(st, 4, 32, 0) == 0x11223344);
  CHECK(vreg_elem(st, 4, 32, 1) == 0x55667788);
}

TEST_CASE("v0.7 memory is sized by SEW") {
  auto st = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle.v v4, (a1)\n"
      "vse.v v4, (a2)\n",
      Dialect::V0p7, 128, [](MachineState& s) {
        s.x[10] = 2;
        s.x[11] = 0x100;
        s.x[12] = 0x200;
        poke32(s, 0x100, 0xdeadbeef);
        poke32(s, 0x104, 0x01020304);
      });
  CHECK(st.stats.mem_sew_typed == 2);
  CHECK(st.stats.mem_eew_typed == 0);
  CHECK(peek32(st, 0x200) == 0xdeadbeef);
  CHECK(peek32(st, 0x204) == 0x01020304);
}

TEST_CASE("strided and indexed memory") {
  auto st = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vlse.v v4, (a1), t1\n"
      "vsxe.v v4, (a2), v8\n",
      Dialect::V0p7, 128, [](MachineState& s) {
        s.x[10] = 2;
        s.x[11] = 0x100;
        s.x[12] = 0x200;
        s.x[6] = 8;  // stride in bytes
        poke32(s, 0x100, 111);
        poke32(s, 0x108, 222);
        // index vector v8: byte offsets 4 and 0 (swap on store)
        size_t base = 8 * s.vlenb();
        s.v[base + 0] = 4;
        s.v[base + 4] = 0;
      });
  CHECK(peek32(st, 0x204) == 111);
  CHECK(peek32(st, 0x200) == 222);
}

TEST_CASE("mask register layouts differ by dialect") {
  // Same compare in both dialects; v1.0 packs bit i, v0.7 uses bit i*MLEN.
  auto setup = [](MachineState& s) {
    s.x[10] = 4;
    s.x[11] = 0x100;
    poke32(s, 0x100, 7);
    poke32(s, 0x104, 3);
    poke32(s, 0x108, 7);
    poke32(s, 0x10c, 9);
    s.x[6] = 7;
  };
  auto v1 = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle32.v v4, (a1)\n"
      "vmseq.vx v0, v4, t1\n",
      Dialect::V1p0, 128, setup);
  CHECK(mask_bit(v1, 0, 0) == 1);
  CHECK(mask_bit(v1, 0, 1) == 0);
  CHECK(mask_bit(v1, 0, 2) == 1);
  CHECK(mask_bit(v1, 0, 3) == 0);

  auto v7 = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle.v v4, (a1)\n"
      "vmseq.vx v0, v4, t1\n",
      Dialect::V0p7, 128, setup);
  // MLEN = SEW/LMUL = 32: one mask bit per 32-bit field.
  CHECK(mask_bit(v7, 0, 0) == 1);
  CHECK(mask_bit(v7, 0, 32) == 0);
  CHECK(mask_bit(v7, 0, 64) == 1);
  CHECK(mask_bit(v7, 0, 96) == 0);
  // The rest of each field is zeroed by the compare.
  CHECK(mask_bit(v7, 0, 1) == 0);
  CHECK(mask_bit(v7, 0, 33) == 0);
}

TEST_CASE("masked operations leave inactive elements undisturbed") {
  auto st = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle.v v4, (a1)\n"
      "vmseq.vx v0, v4, t1\n"
      "vadd.vx v4, v4, t2, v0.t\n"
      "vse.v v4, (a2)\n",
      Dialect::V0p7, 128, [](MachineState& s) {
        s.x[10] = 4;
        s.x[11] = 0x100;
        s.x[12] = 0x200;
        s.x[6] = 5;    // compare value
        s.x[7] = 100;  // addend
        poke32(s, 0x100, 5);
        poke32(s, 0x104, 6);
        poke32(s, 0x108, 5);
        poke32(s, 0x10c, 8);
      });
  CHECK(peek32(st, 0x200) == 105);
  CHECK(peek32(st, 0x204) == 6);
  CHECK(peek32(st, 0x208) == 105);
  CHECK(peek32(st, 0x20c) == 8);
}

TEST_CASE("tail elements stay undisturbed") {
  auto st = run_asm(
      "vsetvli t0, x0, e32, m1\n"
      "vle32.v v4, (a1)\n"       // fill all 4 lanes
      "vsetvli t0, a0, e32, m1\n"
      "vadd.vx v4, v4, t2\n"     // vl = 2: lanes 2,3 are tail
      "vsetvli t0, x0, e32, m1\n"
      "vse32.v v4, (a2)\n",
      Dialect::V1p0, 128, [](MachineState& s) {
        s.x[10] = 2;
        s.x[11] = 0x100;
        s.x[12] = 0x200;
        s.x[7] = 10;
        for (int i = 0; i < 4; ++i) poke32(s, 0x100 + 4 * i, uint32_t(i + 1));
      });
  CHECK(peek32(st, 0x200) == 11);
  CHECK(peek32(st, 0x204) == 12);
  CHECK(peek32(st, 0x208) == 3);
  CHECK(peek32(st, 0x20c) == 4);
}

TEST_CASE("reductions, vid, popcount, scalar extract") {
  auto st = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle32.v v4, (a1)\n"
      "vmv.v.i v8, 0\n"
      "vredsum.vs v8, v4, v8\n"
      "vmv.x.s a4, v8\n"
      "vid.v v12\n"
      "vmseq.vx v0, v12, t1\n"
      "vcpop.m a5, v0\n",
      Dialect::V1p0, 128, [](MachineState& s) {
        s.x[10] = 4;
        s.x[11] = 0x100;
        s.x[6] = 2;
        for (int i = 0; i < 4; ++i) poke32(s, 0x100 + 4 * i, uint32_t(i + 1));
      });
  CHECK(st.x[14] == 10);  // 1+2+3+4
  CHECK(st.x[15] == 1);   // exactly one lane id equals 2

  // The v0.7 spellings behave the same way.
  auto v7 = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle.v v4, (a1)\n"
      "vmv.v.i v8, 0\n"
      "vredsum.vs v8, v4, v8\n"
      "vext.x.v a4, v8, x0\n"
      "vpopc.m a5, v0\n",
      Dialect::V0p7, 128, [](MachineState& s) {
        s.x[10] = 3;
        s.x[11] = 0x100;
        for (int i = 0; i < 3; ++i) poke32(s, 0x100 + 4 * i, uint32_t(i + 1));
      });
  CHECK(v7.x[14] == 6);
  CHECK(v7.x[15] == 0);
}

TEST_CASE("scalar extract sign-extends and handles out-of-range indices") {
  auto st = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle32.v v4, (a1)\n"
      "vmv.x.s a4, v4\n",
      Dialect::V1p0, 128, [](MachineState& s) {
        s.x[10] = 1;
        s.x[11] = 0x100;
        poke32(s, 0x100, 0xffffffff);
      });
  CHECK(st.x[14] == ~uint64_t(0));

  // v0.7 vext.x.v with an index at or past VLMAX reads zero.
  auto zero = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle.v v4, (a1)\n"
      "vext.x.v a4, v4, t1\n",
      Dialect::V0p7, 128, [](MachineState& s) {
        s.x[10] = 4;
        s.x[11] = 0x100;
        s.x[6] = 4;  // VLMAX is 4, so index 4 is out of range
        poke32(s, 0x100, 123);
      });
  CHECK(zero.x[14] == 0);
}

TEST_CASE("vmv1r copies a whole register regardless of vl") {
  auto st = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle32.v v4, (a1)\n"
      "vsetvli t0, t1, e32, m1\n"  // shrink vl to 1
      "vmv1r.v v8, v4\n",
      Dialect::V1p0, 128, [](MachineState& s) {
        s.x[10] = 4;
        s.x[6] = 1;
        s.x[11] = 0x100;
        for (int i = 0; i < 4; ++i) poke32(s, 0x100 + 4 * i, uint32_t(i + 7));
      });
  for (unsigned i = 0; i < 4; ++i)
    CHECK(vreg_elem(st, 8, 32, i) == i + 7);
}

TEST_CASE("merge and macc") {
  auto st = run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle32.v v4, (a1)\n"
      "vid.v v8\n"
      "vmseq.vx v0, v8, x0\n"        // mask: lane 0 only
      "vmerge.vvm v12, v4, v8, v0\n"  // lane0 from v8, others from v4
      "vmacc.vx v4, t1, v8\n"         // v4 += t1 * id
      "vse32.v v4, (a2)\n",
      Dialect::V1p0, 128, [](MachineState& s) {
        s.x[10] = 4;
        s.x[11] = 0x100;
        s.x[12] = 0x200;
        s.x[6] = 10;
        for (int i = 0; i < 4; ++i) poke32(s, 0x100 + 4 * i, uint32_t(i + 1));
      });
  CHECK(vreg_elem(st, 12, 32, 0) == 0);  // selected the id value at lane 0
  CHECK(vreg_elem(st, 12, 32, 1) == 2);
  CHECK(peek32(st, 0x200) == 1);
  CHECK(peek32(st, 0x204) == 12);   // 2 + 10*1
  CHECK(peek32(st, 0x20c) == 34);   // 4 + 10*3
}

TEST_CASE("reduction with vl=0 leaves the destination alone") {
  auto zero = run_asm(
      "vsetvli t0, x0, e32, m1\n"
      "vmv.v.i v8, 7\n"
      "vsetvli t0, a0, e32, m1\n"
      "vredsum.vs v8, v4, v8\n",
      Dialect::V1p0, 128, [](MachineState& s) { s.x[10] = 0; });
  CHECK(zero.vl == 0);
  CHECK(vreg_elem(zero, 8, 32, 0) == 7);
}

TEST_CASE("memory traps") {
  RunResult res;
  run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vle.v v4, (a1)\n",
      Dialect::V0p7, 128,
      [](MachineState& s) {
        s.x[10] = 2;
        s.x[11] = 0x101;  // not 4-byte aligned
      },
      &res);
  CHECK_FALSE(res.ok);
  CHECK(res.error == "line 2: misaligned vector memory access");
  CHECK(res.error_line == 2);

  RunResult oob;
  run_asm(
      "vsetvli t0, a0, e32, m1\n"
      "vse.v v4, (a1)\n",
      Dialect::V0p7, 128,
      [](MachineState& s) {
        s.x[10] = 2;
        s.x[11] = 0xfffc;  // last element lands past mem_size
      },
      &oob);
  CHECK_FALSE(oob.ok);
  CHECK(oob.error == "line 2: vector memory access out of bounds");
}

TEST_CASE("x0 stays zero") {
  auto st = run_asm("li x0, 55\naddi x0, x0, 1\nli t0, 9\n", Dialect::V1p0,
                    128);
  CHECK(st.x[0] == 0);
  CHECK(st.x[5] == 9);
}

TEST_CASE("scalar loop with branches") {
  // Sums 1..n with a bne loop.
  auto st = run_asm(
      "    li t0, 0\n"
      "    li t1, 0\n"
      "loop:\n"
      "    addi t1, t1, 1\n"
      "    add t0, t0, t1\n"
      "    bne t1, a0, loop\n"
      "    mv a1, t0\n",
      Dialect::V1p0, 128, [](MachineState& s) { s.x[10] = 5; });
  CHECK(st.x[11] == 15);

  auto lt = run_asm(
      "    li t0, 0\n"
      "loop:\n"
      "    addi t0, t0, 3\n"
      "    blt t0, a0, loop\n",
      Dialect::V1p0, 128, [](MachineState& s) { s.x[10] = 10; });
  CHECK(lt.x[5] == 12);
}

TEST_CASE("csr reads") {
  auto st = run_asm(
      "vsetvli t0, a0, e16, m2\n"
      "csrr a4, vl\n"
      "csrr a5, vtype\n"
      "csrr a6, vlenb\n",
      Dialect::V0p7, 128, [](MachineState& s) { s.x[10] = 3; });
  CHECK(st.x[14] == 3);
  CHECK(st.x[15] ==
        encode_vtype({16, 2, false}, false, false, false, Dialect::V0p7));
  CHECK(st.x[16] == 16);
}

TEST_CASE("step limit") {
  LoadResult loaded = load("loop: j loop\n", Dialect::V1p0);
  REQUIRE(loaded.ok);
  MachineConfig cfg;
  MachineState state(cfg);
  RunResult res = run(state, loaded.program, 100);
  CHECK_FALSE(res.ok);
  CHECK(res.error == "step limit exceeded");
  CHECK(res.steps == 100);
}

TEST_CASE("ret halts cleanly") {
  LoadResult loaded = load("li t0, 1\nret\nli t0, 2\n", Dialect::V1p0);
  REQUIRE(loaded.ok);
  MachineConfig cfg;
  MachineState state(cfg);
  RunResult res = run(state, loaded.program, 100);
  CHECK(res.ok);
  CHECK(state.x[5] == 1);
}

TEST_CASE("dialect gating at load time") {
  LoadResult v7 = load("vle32.v v4, (a1)\n", Dialect::V0p7);
  CHECK_FALSE(v7.ok);
  CHECK(v7.error_line == 1);
  CHECK(v7.error.find("v1.0") != std::string::npos);

  LoadResult v1 = load("vle.v v4, (a1)\n", Dialect::V1p0);
  CHECK_FALSE(v1.ok);
  CHECK(v1.error.find("v0.7") != std::string::npos);

  LoadResult ext = load("vext.x.v a0, v4, x0\n", Dialect::V1p0);
  CHECK_FALSE(ext.ok);
  LoadResult mvxs = load("vmv.x.s a0, v4\n", Dialect::V0p7);
  CHECK_FALSE(mvxs.ok);
}

TEST_CASE("unknown labels and duplicate labels fail at load") {
  LoadResult missing = load("beq a0, a1, nowhere\n", Dialect::V1p0);
  CHECK_FALSE(missing.ok);

  LoadResult dup = load("a:\nnop\na:\nnop\n", Dialect::V1p0);
  CHECK_FALSE(dup.ok);
}

TEST_CASE("unsupported lines fail at load with their line number") {
  LoadResult res = load("nop\nfmadd.s fa0, fa1, fa2, fa3\n", Dialect::V1p0);
  CHECK_FALSE(res.ok);
  CHECK(res.error_line == 2);
}

TEST_CASE("register groups with lmul") {
  // LMUL=2: v4 spans v4+v5; 8 e32 lanes at vlen 128.
  auto st = run_asm(
      "vsetvli t0, a0, e32, m2\n"
      "vle32.v v4, (a1)\n"
      "vadd.vv v8, v4, v4\n"
      "vse32.v v8, (a2)\n",
      Dialect::V1p0, 128, [](MachineState& s) {
        s.x[10] = 8;
        s.x[11] = 0x100;
        s.x[12] = 0x200;
        for (int i = 0; i < 8; ++i) poke32(s, 0x100 + 4 * i, uint32_t(i));
      });
  for (uint32_t i = 0; i < 8; ++i) CHECK(peek32(st, 0x200 + 4 * i) == 2 * i);

  // Misaligned group register traps.
  RunResult res;
  run_asm(
      "vsetvli t0, a0, e32, m2\n"
      "vadd.vv v3, v4, v4\n",
      Dialect::V1p0, 128, [](MachineState& s) { s.x[10] = 4; }, &res);
  CHECK_FALSE(res.ok);
  CHECK(res.error.find("misaligned") != std::string::npos);
}
