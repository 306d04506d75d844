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

#include "rvvback/differential.hpp"

#include <string>

#include "doctest.h"
#include "rvvback/parser.hpp"

using namespace rvvback;

TEST_CASE("diffspec grammar") {
  std::string text =
      "# kernel inputs\n"
      "seeds 25\n"
      "vlen 128 256\n"
      "option expand-whole-register\n"
      "\n"
      "a0 = rand(1, 48)\n"
      "t1 = 0x10\n"
      "a2 = -4\n"
      "s1 = rand\n"
      "mem 0x1000 : 192 = rand\n"
      "mem 0x2000 = deadbeef\n";
  std::string error;
  auto spec = parse_diffspec(text, &error);
  REQUIRE_MESSAGE(spec.has_value(), error);
  CHECK(spec->seeds == 25);
  REQUIRE(spec->vlens.size() == 2);
  CHECK(spec->vlens[0] == 128);
  CHECK(spec->vlens[1] == 256);
  REQUIRE(spec->options.size() == 1);
  CHECK(spec->options[0] == "expand-whole-register");

  REQUIRE(spec->regs.size() == 4);
  CHECK(spec->regs[0].reg == 10);
  CHECK(spec->regs[0].kind == DiffSpec::RegInit::Kind::RandRange);
  CHECK(spec->regs[0].lo == 1);
  CHECK(spec->regs[0].hi == 48);
  CHECK(spec->regs[1].reg == 6);
  CHECK(spec->regs[1].kind == DiffSpec::RegInit::Kind::Fixed);
  CHECK(spec->regs[1].value == 0x10);
  CHECK(spec->regs[2].value == -4);
  CHECK(spec->regs[3].kind == DiffSpec::RegInit::Kind::Rand);

  REQUIRE(spec->mems.size() == 2);
  CHECK(spec->mems[0].addr == 0x1000);
  CHECK(spec->mems[0].rand_len == 192);
  CHECK(spec->mems[1].addr == 0x2000);
  REQUIRE(spec->mems[1].bytes.size() == 4);
  CHECK(spec->mems[1].bytes[0] == 0xde);
  CHECK(spec->mems[1].bytes[3] == 0xef);
}

TEST_CASE("diffspec defaults") {
  std::string error;
  auto spec = parse_diffspec("", &error);
  REQUIRE(spec.has_value());
  CHECK(spec->seeds == 10);
  REQUIRE(spec->vlens.size() == 1);
  CHECK(spec->vlens[0] == 128);
  CHECK(spec->options.empty());
}

TEST_CASE("diffspec rejects bad lines with their line number") {
  std::string error;
  CHECK_FALSE(parse_diffspec("vlen 100\n", &error).has_value());
  CHECK(error.find("diffspec line 1") != std::string::npos);

  CHECK_FALSE(parse_diffspec("seeds 25\nnonsense here\n", &error).has_value());
  CHECK(error.find("diffspec line 2") != std::string::npos);

  CHECK_FALSE(parse_diffspec("v1 = 5\n", &error).has_value());
  CHECK_FALSE(parse_diffspec("mem 0x10 = xyz\n", &error).has_value());
  CHECK_FALSE(parse_diffspec("option bogus-flag\n", &error).has_value());
  CHECK_FALSE(parse_diffspec("seeds 0\n", &error).has_value());
  CHECK_FALSE(parse_diffspec("vlen 32\n", &error).has_value());  // below 64
}

namespace {

DiffSpec basic_spec(int seeds) {
  DiffSpec spec;
  spec.seeds = seeds;
  spec.vlens = {128, 256};
  DiffSpec::RegInit n;
  n.reg = 10;  // a0
  n.kind = DiffSpec::RegInit::Kind::RandRange;
  n.lo = 0;
  n.hi = 48;
  spec.regs.push_back(n);
  DiffSpec::RegInit src;
  src.reg = 11;  // a1
  src.value = 0x1000;
  spec.regs.push_back(src);
  DiffSpec::RegInit dst;
  dst.reg = 12;  // a2
  dst.value = 0x2000;
  spec.regs.push_back(dst);
  DiffSpec::MemInit data;
  data.addr = 0x1000;
  data.rand_len = 256;
  spec.mems.push_back(data);
  return spec;
}

const char* kCopyKernel =
    "copy:\n"
    "    vsetvli t0, a0, e32, m2, ta, ma\n"
    "    vle32.v v8, (a1)\n"
    "    vse32.v v8, (a2)\n"
    "    sub a0, a0, t0\n"
    "    slli t1, t0, 2\n"
    "    add a1, a1, t1\n"
    "    add a2, a2, t1\n"
    "    bnez a0, copy\n"
    "    ret\n";

}  // namespace

TEST_CASE("matching programs agree over many runs") {
  DiffOutcome out = run_differential(kCopyKernel, "copy.s", basic_spec(10),
                                     RewriteOptions{}, 42, 100000);
  CHECK(out.error.empty());
  CHECK(out.ok);
  CHECK(out.runs == 20);  // 10 seeds x 2 vlens
  CHECK(out.failures.empty());
  // Both sides exercised their dialect's memory sizing.
  CHECK(out.source_stats.mem_eew_typed > 0);
  CHECK(out.translated_stats.mem_sew_typed > 0);
  CHECK(out.source_stats.policy_tokens_seen > 0);
  CHECK(out.translated_stats.policy_tokens_seen == 0);
}

TEST_CASE("differential runs are deterministic for a given seed") {
  DiffSpec spec = basic_spec(4);
  DiffOutcome a = run_differential(kCopyKernel, "copy.s", spec,
                                   RewriteOptions{}, 7, 100000);
  DiffOutcome b = run_differential(kCopyKernel, "copy.s", spec,
                                   RewriteOptions{}, 7, 100000);
  CHECK(a.ok == b.ok);
  CHECK(a.runs == b.runs);
  CHECK(a.source_stats.mem_eew_typed == b.source_stats.mem_eew_typed);
  CHECK(a.source_stats.v10_avl_x0_vlmax == b.source_stats.v10_avl_x0_vlmax);
}

TEST_CASE("the harness catches a semantic divergence") {
  // vsetvli x0, x0 keeps vl under v1.0 but selects VLMAX under v0.7.1, and
  // the translator passes the line through untouched. The differential run
  // must expose the difference.
  std::string kernel =
      "    vsetvli t0, a0, e8, m1\n"
      "    vsetvli x0, x0, e8, m1\n"
      "    vle8.v v1, (a1)\n"
      "    vse8.v v1, (a2)\n";
  DiffSpec spec;
  spec.seeds = 3;
  DiffSpec::RegInit n;
  n.reg = 10;
  n.value = 2;  // vl = 2, far below VLMAX = 16
  spec.regs.push_back(n);
  DiffSpec::RegInit src;
  src.reg = 11;
  src.value = 0x1000;
  spec.regs.push_back(src);
  DiffSpec::RegInit dst;
  dst.reg = 12;
  dst.value = 0x2000;
  spec.regs.push_back(dst);
  DiffSpec::MemInit data;
  data.addr = 0x1000;
  data.rand_len = 64;
  spec.mems.push_back(data);

  DiffOutcome out =
      run_differential(kernel, "keepvl.s", spec, RewriteOptions{}, 1, 100000);
  CHECK(out.error.empty());
  CHECK_FALSE(out.ok);
  REQUIRE_FALSE(out.failures.empty());
  // The first divergent byte sits in the destination buffer, past the kept
  // vl: v1.0 stored 2 bytes, the translation stored VLMAX.
  CHECK(out.failures[0].find("mem[0x200") != std::string::npos);
}

TEST_CASE("translation failures surface as errors, not mismatches") {
  DiffOutcome out = run_differential("    vzext.vf2 v2, v4\n", "bad.s",
                                     basic_spec(2), RewriteOptions{}, 42,
                                     100000);
  CHECK_FALSE(out.ok);
  CHECK_FALSE(out.error.empty());
  CHECK(out.runs == 0);
}

TEST_CASE("traps on either side count as failures") {
  // Unaligned base address: both dialects trap on the e32 load.
  std::string kernel =
      "    vsetvli t0, a0, e32, m1\n"
      "    vle32.v v4, (a1)\n";
  DiffSpec spec;
  spec.seeds = 1;
  DiffSpec::RegInit n;
  n.reg = 10;
  n.value = 2;
  spec.regs.push_back(n);
  DiffSpec::RegInit src;
  src.reg = 11;
  src.value = 0x1001;
  spec.regs.push_back(src);

  DiffOutcome out =
      run_differential(kernel, "trap.s", spec, RewriteOptions{}, 42, 100000);
  CHECK(out.error.empty());
  CHECK_FALSE(out.ok);
  REQUIRE_FALSE(out.failures.empty());
  CHECK(out.failures[0].find("trapped") != std::string::npos);
}

TEST_CASE("spec options apply on top of the base options") {
  std::string kernel =
      "    vsetvli t0, a0, e32, m1\n"
      "    vle32.v v4, (a1)\n"
      "    vmv1r.v v8, v4\n"
      "    vse32.v v8, (a2)\n";
  DiffSpec spec = basic_spec(2);
  spec.options.push_back("expand-whole-register");
  DiffOutcome out =
      run_differential(kernel, "whole.s", spec, RewriteOptions{}, 42, 100000);
  CHECK_MESSAGE(out.error.empty(), out.error);
  CHECK(out.ok);

  // Without the option the translation itself fails.
  DiffOutcome bare = run_differential(kernel, "whole.s", basic_spec(2),
                                      RewriteOptions{}, 42, 100000);
  CHECK_FALSE(bare.ok);
  CHECK_FALSE(bare.error.empty());
}

TEST_CASE("excluded registers") {
  ParseResult src = parse_document(
      "vsetvli t0, a0, e32, m1\n"
      "vle32.v v4, (a1)\n",
      "x.s");
  ParseResult dst = parse_document(
      "li a6, 7\n"
      "vsetvli a6, a6, e32, m1\n"
      "vle.v v4, (a1)\n",
      "y.s");
  REQUIRE_FALSE(src.aborted);
  REQUIRE_FALSE(dst.aborted);
  LoadResult src_load = load_program(src.doc, Dialect::V1p0);
  LoadResult dst_load = load_program(dst.doc, Dialect::V0p7);
  REQUIRE(src_load.ok);
  REQUIRE(dst_load.ok);

  auto excluded =
      excluded_registers(src_load.program, dst_load.program, RewriteOptions{});
  CHECK(excluded.count(0) == 1);   // x0
  CHECK(excluded.count(5) == 1);   // t0, vset rd in the source
  CHECK(excluded.count(16) == 1);  // a6, vset rd in the translation
  CHECK(excluded.count(30) == 1);  // t5 scratch
  CHECK(excluded.count(31) == 1);  // t6 scratch
  CHECK(excluded.count(10) == 0);  // a0 stays comparable
}
