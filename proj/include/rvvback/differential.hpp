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
#include <set>
#include <string>
#include <vector>

#include "rvvback/emulator.hpp"
#include "rvvback/rewriter.hpp"

namespace rvvback {

/// Input description for a differential run, read from a .diffspec file:
///
///   seeds 75
///   vlen 128 256
///   option expand-whole-register
///   a0 = rand(0, 48)
///   t1 = 0x10
///   mem 0x1000 : 192 = rand
///   mem 0x2000 = deadbeef
///
/// Registers and memory not mentioned start zeroed. Random draws happen in
/// file order, so a spec is reproducible for a given seed.
struct DiffSpec {
  struct RegInit {
    enum class Kind { Fixed, Rand, RandRange };
    int reg = 0;
    Kind kind = Kind::Fixed;
    int64_t value = 0;
    int64_t lo = 0, hi = 0;
  };
  struct MemInit {
    uint64_t addr = 0;
    std::vector<uint8_t> bytes;  // fixed contents
    uint64_t rand_len = 0;       // or this many random bytes
  };

  int seeds = 10;
  std::vector<unsigned> vlens = {128};
  std::vector<std::string> options;
  std::vector<RegInit> regs;
  std::vector<MemInit> mems;
};

std::optional<DiffSpec> parse_diffspec(const std::string& text,
                                       std::string* error);

/// Aggregate result of seeds * vlens runs of one kernel.
struct DiffOutcome {
  bool ok = false;
  int runs = 0;
  std::vector<std::string> failures;  // first few mismatch descriptions
  std::string error;                  // translate/load problem, not a mismatch
  DialectStats source_stats;          // summed over all v1.0 runs
  DialectStats translated_stats;      // summed over all v0.7.1 runs
};

/// Scalar registers whose final value is not comparable: x0, the rewriter
/// scratch registers, and the rd of every vset instruction in either program.
std::set<int> excluded_registers(const Program& source,
                                 const Program& translated,
                                 const RewriteOptions& opts);

/// Translates the source, runs original (v1.0) and translation (v0.7.1) on
/// identical machines, and compares final memory and scalar registers.
/// Spec options are applied on top of base_opts.
DiffOutcome run_differential(const std::string& source_text,
                             const std::string& source_name,
                             const DiffSpec& spec,
                             const RewriteOptions& base_opts,
                             uint64_t base_seed, uint64_t max_steps);

}  // namespace rvvback
