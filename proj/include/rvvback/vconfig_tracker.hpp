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

#include <vector>

#include "rvvback/asm_model.hpp"

namespace rvvback {

/// Conservative knowledge about the vector configuration at a program point.
/// `known` means a vsetvli/vsetivli with immediate vtype tokens dominates this
/// point on every path the tracker can see.
struct TrackedState {
  bool known = false;
  VConfig config;  // meaningful only when known

  friend bool operator==(const TrackedState&, const TrackedState&) = default;
};

/// Forward pass over the document: result[i] is the configuration in effect
/// when line i executes, before the line's own effect.
///
/// Transfer rules:
///   vsetvli/vsetivli with token vtype  -> Known(SEW, LMUL)
///   vsetvl (vtype from a register)     -> Unknown
///   label definition                   -> Unknown before the labeled statement
///   call/jal/jalr/tail                 -> Unknown after it
///   csr write touching a vector CSR    -> Unknown after it
///   anything else                      -> state preserved
std::vector<TrackedState> track_vconfig(const AssemblyDocument& doc);

/// The line starts with a label, either on a decoded instruction or as
/// leading text on an opaque line.
bool line_defines_label(const SourceLine& line);

/// Opaque line whose first token is a call-style control transfer.
bool line_is_call(const SourceLine& line);

/// csrw/csrrw/csrrs/csrrc whose CSR operand names vector state.
bool writes_vector_csr(const Instruction& instr);

bool is_vector_csr(std::string_view name);

}  // namespace rvvback
