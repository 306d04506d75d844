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

#include "rvvback/selftest.hpp"

#include "rvvback/parser.hpp"
#include "rvvback/rewriter.hpp"
#include "rvvback/vconfig_tracker.hpp"

namespace rvvback {

namespace {

struct Row {
  const char* setup;   // optional vsetvli establishing the tracked state
  const char* input;   // one v1.0 line
  const char* expect;  // replacement text joined with " ; ", "=" passthrough,
                       // nullptr reject
  const char* rule;    // rule id for rewrites
  const char* code;    // diagnostic code for rejects
  bool whole_register = false;
};

// Hand-written against the instruction listings of both vector extension
// versions. Keep these literal: the point is an oracle that does not share
// code with the rewriter.
const Row kRows[] = {
    // vsetvli policy handling
    {"", "vsetvli t0, a0, e32, m2, ta, ma", "vsetvli t0, a0, e32, m2",
     "strip-policy", nullptr},
    {"", "vsetvli t0, a0, e8, m1, tu, mu", "vsetvli t0, a0, e8, m1",
     "strip-policy", nullptr},
    {"", "vsetvli a2, a0, e64, m8, ta, mu", "vsetvli a2, a0, e64, m8",
     "strip-policy", nullptr},
    {"", "vsetvli t0, a0, e16, m4", "=", "", nullptr},
    {"", "vsetvl t0, a0, a1", "=", "", nullptr},
    {"", "vsetivli t0, 16, e32, m2, ta, ma",
     "li t0, 16 ; vsetvli t0, t0, e32, m2", "expand-vsetivli", nullptr},
    {"", "vsetivli a3, 31, e8, m1", "li a3, 31 ; vsetvli a3, a3, e8, m1",
     "expand-vsetivli", nullptr},
    {"", "vsetivli x0, 8, e16, m1", "li t5, 8 ; vsetvli x0, t5, e16, m1",
     "expand-vsetivli", nullptr},
    {"", "vsetvli t0, a0, e32, mf2", nullptr, nullptr, "fractional-lmul"},
    {"", "vsetivli t0, 4, e32, mf4, ta, ma", nullptr, nullptr,
     "fractional-lmul"},

    // renamed opcodes
    {"", "vcpop.m t0, v4", "vpopc.m t0, v4", "rename-op", nullptr},
    {"", "vcpop.m t0, v4, v0.t", "vpopc.m t0, v4, v0.t", "rename-op", nullptr},
    {"", "vmandn.mm v1, v2, v3", "vmandnot.mm v1, v2, v3", "rename-op",
     nullptr},
    {"", "vmorn.mm v1, v2, v3", "vmornot.mm v1, v2, v3", "rename-op", nullptr},
    {"", "vfredusum.vs v1, v2, v3", "vfredsum.vs v1, v2, v3", "rename-op",
     nullptr},
    {"", "vfwredusum.vs v1, v2, v3", "vfwredsum.vs v1, v2, v3", "rename-op",
     nullptr},
    {"", "vnsrl.wv v1, v2, v3", "vnsrl.vv v1, v2, v3", "rename-op", nullptr},
    {"", "vnsrl.wx v1, v2, t1", "vnsrl.vx v1, v2, t1", "rename-op", nullptr},
    {"", "vnsra.wi v1, v2, 4", "vnsra.vi v1, v2, 4", "rename-op", nullptr},
    {"", "vnsra.wv v1, v2, v3, v0.t", "vnsra.vv v1, v2, v3, v0.t", "rename-op",
     nullptr},
    {"", "vnclip.wv v1, v2, v3", "vnclip.vv v1, v2, v3", "rename-op", nullptr},
    {"", "vnclipu.wx v1, v2, t1", "vnclipu.vx v1, v2, t1", "rename-op",
     nullptr},
    {"", "vfncvt.xu.f.w v1, v2", "vfncvt.xu.f.v v1, v2", "rename-op", nullptr},
    {"", "vfncvt.x.f.w v1, v2", "vfncvt.x.f.v v1, v2", "rename-op", nullptr},
    {"", "vfncvt.f.xu.w v1, v2", "vfncvt.f.xu.v v1, v2", "rename-op", nullptr},
    {"", "vfncvt.f.x.w v1, v2", "vfncvt.f.x.v v1, v2", "rename-op", nullptr},
    {"", "vfncvt.f.f.w v1, v2", "vfncvt.f.f.v v1, v2", "rename-op", nullptr},

    // memory: EEW-typed mnemonics to SEW-typed, state from the setup line
    {"vsetvli t0, a0, e32, m2", "vle32.v v4, (a1)", "vle.v v4, (a1)",
     "mem-unit-stride", nullptr},
    {"vsetvli t0, a0, e32, m2", "vse32.v v4, (a1), v0.t",
     "vse.v v4, (a1), v0.t", "mem-unit-stride", nullptr},
    {"vsetvli t0, a0, e8, m1", "vle8.v v4, (a1)", "vle.v v4, (a1)",
     "mem-unit-stride", nullptr},
    {"vsetvli t0, a0, e64, m1", "vle64.v v4, (a1)", "vle.v v4, (a1)",
     "mem-unit-stride", nullptr},
    {"vsetvli t0, a0, e16, m1", "vlse16.v v4, (a1), t2", "vlse.v v4, (a1), t2",
     "mem-strided", nullptr},
    {"vsetvli t0, a0, e16, m1", "vsse16.v v4, (a1), t2", "vsse.v v4, (a1), t2",
     "mem-strided", nullptr},
    {"vsetvli t0, a0, e32, m1", "vluxei32.v v4, (a1), v8",
     "vlxe.v v4, (a1), v8", "mem-indexed", nullptr},
    {"vsetvli t0, a0, e32, m1", "vloxei32.v v4, (a1), v8",
     "vlxe.v v4, (a1), v8", "mem-indexed", nullptr},
    {"vsetvli t0, a0, e32, m1", "vsuxei32.v v4, (a1), v8",
     "vsuxe.v v4, (a1), v8", "mem-indexed", nullptr},
    {"vsetvli t0, a0, e32, m1", "vsoxei32.v v4, (a1), v8",
     "vsxe.v v4, (a1), v8", "mem-indexed", nullptr},
    {"vsetvli t0, a0, e8, m1", "vle8ff.v v4, (a1)", "vleff.v v4, (a1)",
     "mem-fault-only-first", nullptr},
    {"vsetvli t0, a0, e32, m2", "vlseg4e32.v v4, (a1)", "vlseg4e.v v4, (a1)",
     "mem-segment", nullptr},
    {"vsetvli t0, a0, e32, m2", "vsseg2e32.v v4, (a1)", "vsseg2e.v v4, (a1)",
     "mem-segment", nullptr},
    {"vsetvli t0, a0, e32, m1", "vlsseg2e32.v v4, (a1), t2",
     "vlsseg2e.v v4, (a1), t2", "mem-segment", nullptr},

    // memory rejects in strict mode
    {"vsetvli t0, a0, e16, m1", "vle32.v v4, (a1)", nullptr, nullptr,
     "eew-sew-mismatch"},
    {"", "vle32.v v4, (a1)", nullptr, nullptr, "unknown-state"},

    // pseudo expansions
    {"", "vneg.v v2, v4", "vrsub.vx v2, v4, x0", "expand-pseudo", nullptr},
    {"", "vneg.v v2, v4, v0.t", "vrsub.vx v2, v4, x0, v0.t", "expand-pseudo",
     nullptr},
    {"", "vncvt.x.x.w v2, v4", "vnsrl.vx v2, v4, x0", "expand-pseudo",
     nullptr},
    {"", "vmmv.m v1, v2", "vmand.mm v1, v2, v2", "expand-pseudo", nullptr},
    {"", "vmv.x.s t0, v4", "vext.x.v t0, v4, x0", "scalar-move", nullptr},

    // whole-register group, gated behind the expansion flag
    {"", "vmv1r.v v2, v4",
     "csrr t5, vl ; csrr t6, vtype ; vsetvli x0, x0, e8, m1 ; "
     "vmv.v.v v2, v4 ; vsetvl x0, t5, t6",
     "expand-whole-register", nullptr, true},
    {"", "vl1r.v v2, (a1)",
     "csrr t5, vl ; csrr t6, vtype ; vsetvli x0, x0, e8, m1 ; "
     "vle.v v2, (a1) ; vsetvl x0, t5, t6",
     "expand-whole-register", nullptr, true},
    {"", "vl1re32.v v2, (a1)",
     "csrr t5, vl ; csrr t6, vtype ; vsetvli x0, x0, e8, m1 ; "
     "vle.v v2, (a1) ; vsetvl x0, t5, t6",
     "expand-whole-register", nullptr, true},
    {"", "vs1r.v v2, (a1)",
     "csrr t5, vl ; csrr t6, vtype ; vsetvli x0, x0, e8, m1 ; "
     "vse.v v2, (a1) ; vsetvl x0, t5, t6",
     "expand-whole-register", nullptr, true},
    {"", "vmv2r.v v2, v4", nullptr, nullptr, "no-v07-equivalent", true},
    {"", "vmv4r.v v4, v8", nullptr, nullptr, "no-v07-equivalent", true},
    {"", "vmv1r.v v2, v4", nullptr, nullptr, "whole-register-needs-flag"},
    {"", "vl1r.v v2, (t5)", nullptr, nullptr, "scratch-collision", true},

    // v1.0 instructions with no counterpart
    {"", "vzext.vf2 v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vzext.vf4 v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vsext.vf2 v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vsext.vf8 v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vrgatherei16.vv v2, v4, v8", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vlm.v v2, (a1)", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vsm.v v2, (a1)", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vle1.v v2, (a1)", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vse1.v v2, (a1)", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vfslide1up.vf v2, v4, fa0", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vfslide1down.vf v2, v4, fa0", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vfncvt.rtz.x.f.w v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vfncvt.rod.f.f.w v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vfcvt.rtz.xu.f.v v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "vfwcvt.rtz.x.f.v v2, v4", nullptr, nullptr, "no-v07-equivalent"},
    {"", "csrr t0, vcsr", nullptr, nullptr, "vcsr-access"},
    {"", "csrw vcsr, t0", nullptr, nullptr, "vcsr-access"},

    // shared instructions stay untouched
    {"", "vadd.vv v1, v2, v3", "=", "", nullptr},
    {"", "vadd.vx v1, v2, t0, v0.t", "=", "", nullptr},
    {"", "vfmacc.vf v1, fa0, v2", "=", "", nullptr},
    {"", "vmseq.vi v0, v2, 3", "=", "", nullptr},
    {"", "vslide1down.vx v1, v2, t0", "=", "", nullptr},
    {"", "vredsum.vs v1, v2, v3", "=", "", nullptr},
    {"", "csrr t0, vl", "=", "", nullptr},
    {"", "add a0, a1, a2", "=", "", nullptr},
};

std::string render_replacement(const SourceLine& line) {
  std::string out;
  for (size_t i = 0; i < line.replacement.size(); ++i) {
    if (i) out += " ; ";
    out += canonical_text(line.replacement[i]);
  }
  return out;
}

}  // namespace

SelftestResult run_selftest() {
  SelftestResult result;
  for (const Row& row : kRows) {
    std::string text;
    if (row.setup[0] != '\0') text = std::string(row.setup) + "\n";
    text += row.input;
    text += "\n";
    size_t target = row.setup[0] != '\0' ? 1 : 0;

    RewriteOptions opts;
    opts.expand_whole_register = row.whole_register;

    auto record_failure = [&](const std::string& detail) {
      result.failed += 1;
      result.failures.push_back(std::string(row.input) + ": " + detail);
    };

    ParseResult parsed = parse_document(text, "selftest");
    if (parsed.aborted || parsed.doc.lines.size() <= target) {
      record_failure("did not parse");
      continue;
    }
    TranslationReport report;
    report.source_name = "selftest";
    std::vector<TrackedState> states = track_vconfig(parsed.doc);
    rewrite_document(parsed.doc, states, opts, report);
    const SourceLine& line = parsed.doc.lines[target];

    if (row.expect == nullptr) {
      if (line.error_note.empty()) {
        record_failure("expected reject " + std::string(row.code) +
                       ", got a translation");
        continue;
      }
      if (line.error_note != row.code) {
        record_failure("expected reject " + std::string(row.code) + ", got " +
                       line.error_note);
        continue;
      }
    } else if (std::string_view(row.expect) == "=") {
      if (line.rewritten || !line.error_note.empty()) {
        record_failure("expected pass-through, got " +
                       (!line.error_note.empty()
                            ? "reject " + line.error_note
                            : render_replacement(line)));
        continue;
      }
    } else {
      if (!line.error_note.empty()) {
        record_failure("expected rewrite, got reject " + line.error_note);
        continue;
      }
      if (!line.rewritten) {
        record_failure("expected rewrite, instruction passed through");
        continue;
      }
      std::string got = render_replacement(line);
      if (got != row.expect) {
        record_failure("expected '" + std::string(row.expect) + "', got '" +
                       got + "'");
        continue;
      }
      if (line.rule_id != row.rule) {
        record_failure("expected rule " + std::string(row.rule) + ", got " +
                       (line.rule_id.empty() ? std::string("none")
                                             : line.rule_id));
        continue;
      }
    }
    result.passed += 1;
  }
  return result;
}

}  // namespace rvvback
