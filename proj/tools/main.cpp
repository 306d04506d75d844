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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rvvback/differential.hpp"
#include "rvvback/pipeline.hpp"
#include "rvvback/selftest.hpp"

namespace fs = std::filesystem;
using namespace rvvback;

namespace {

// exit codes: 0 clean, 1 the input could not be translated (or a
// differential/selftest failure), 2 usage or I/O problems
constexpr int kExitOk = 0;
constexpr int kExitRejected = 1;
constexpr int kExitUsage = 2;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

// write through a temp file so a crash never leaves a half-written output
bool write_file_atomic(const std::string& path, const std::string& content) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << content;
    if (!out.flush()) return false;
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    return false;
  }
  return true;
}

std::string default_output_path(const std::string& input) {
  if (input.size() > 2 && input.ends_with(".s"))
    return input.substr(0, input.size() - 2) + ".v07.s";
  return input + ".v07.s";
}

std::string diffspec_path(const std::string& input) {
  fs::path p(input);
  p.replace_extension(".diffspec");
  return p.string();
}

struct SharedFlags {
  bool lenient = false;
  bool assume_eew = false;
  bool expand_whole = false;
  bool no_annotate = false;
  std::string scratch;
};

void add_shared_flags(CLI::App* cmd, SharedFlags& flags) {
  cmd->add_flag("--lenient", flags.lenient,
                "Keep going on untranslatable lines; mark them with error "
                "comments instead of failing the file");
  cmd->add_flag("--assume-eew-matches-sew", flags.assume_eew,
                "Trust that memory element widths equal the configured SEW "
                "even where tracking cannot prove it");
  cmd->add_flag("--expand-whole-register", flags.expand_whole,
                "Expand vmv1r/vl1r/vs1r into a save/restore sequence using "
                "the scratch registers");
  cmd->add_flag("--no-annotate", flags.no_annotate,
                "Do not append '# rvv-backport: <rule>' comments");
  cmd->add_option("--scratch", flags.scratch,
                  "Two scratch registers for expansions, e.g. t3,t4 "
                  "(default t5,t6)");
}

bool build_options(const SharedFlags& flags, RewriteOptions& opts) {
  opts.mode = flags.lenient ? RewriteMode::Lenient : RewriteMode::Strict;
  opts.assume_eew_matches_sew = flags.assume_eew;
  opts.expand_whole_register = flags.expand_whole;
  opts.annotate = !flags.no_annotate;
  if (!flags.scratch.empty()) {
    auto comma = flags.scratch.find(',');
    if (comma == std::string::npos) {
      std::cerr << "error: --scratch expects two registers, e.g. t3,t4\n";
      return false;
    }
    opts.scratch_regs[0] = flags.scratch.substr(0, comma);
    opts.scratch_regs[1] = flags.scratch.substr(comma + 1);
  }
  if (!valid_scratch_regs(opts)) {
    std::cerr << "error: --scratch needs two distinct scalar registers, "
                 "neither x0\n";
    return false;
  }
  return true;
}

void print_diagnostics(const std::string& name, const TranslationReport& rep) {
  for (const ReportItem& item : rep.warnings)
    std::cerr << name << ":" << item.line << ": warning: " << item.code << ": "
              << item.message << "\n";
  for (const ReportItem& item : rep.errors)
    std::cerr << name << ":" << item.line << ": error: " << item.code << ": "
              << item.message << "\n";
}

int run_translate(const std::string& input, const std::string& output,
                  const std::string& report_path, const SharedFlags& flags) {
  RewriteOptions opts;
  if (!build_options(flags, opts)) return kExitUsage;

  std::string text;
  if (!read_file(input, text)) {
    std::cerr << "error: cannot read " << input << "\n";
    return kExitUsage;
  }

  TranslateOutcome outcome = translate_text(text, input, opts);
  print_diagnostics(input, outcome.report);

  if (!report_path.empty()) {
    std::string json = emit_report(outcome.report, ReportFormat::Json);
    if (!write_file_atomic(report_path, json)) {
      std::cerr << "error: cannot write " << report_path << "\n";
      return kExitUsage;
    }
  }

  if (outcome.ok() || opts.mode == RewriteMode::Lenient) {
    std::string out_path = output.empty() ? default_output_path(input) : output;
    if (out_path == "-") {
      std::cout << outcome.output;
    } else if (!write_file_atomic(out_path, outcome.output)) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitUsage;
    }
  }
  return outcome.ok() ? kExitOk : kExitRejected;
}

int run_check(const std::vector<std::string>& inputs,
              const std::vector<unsigned>& vlens, uint64_t seed,
              uint64_t max_steps, const SharedFlags& flags) {
  RewriteOptions opts;
  if (!build_options(flags, opts)) return kExitUsage;

  int exit_code = kExitOk;
  for (const std::string& input : inputs) {
    std::string text;
    if (!read_file(input, text)) {
      std::cerr << "error: cannot read " << input << "\n";
      return kExitUsage;
    }

    DiffSpec spec;
    std::string spec_file = diffspec_path(input);
    if (fs::exists(spec_file)) {
      std::string spec_text;
      if (!read_file(spec_file, spec_text)) {
        std::cerr << "error: cannot read " << spec_file << "\n";
        return kExitUsage;
      }
      std::string err;
      auto parsed = parse_diffspec(spec_text, &err);
      if (!parsed) {
        std::cerr << "error: " << spec_file << ": " << err << "\n";
        return kExitUsage;
      }
      spec = std::move(*parsed);
    } else {
      std::cerr << input << ": no " << spec_file
                << ", using defaults (zeroed machine)\n";
    }
    if (!vlens.empty()) spec.vlens = vlens;

    DiffOutcome out =
        run_differential(text, input, spec, opts, seed, max_steps);
    if (!out.error.empty()) {
      std::cerr << input << ": " << out.error << "\n";
      exit_code = std::max(exit_code, kExitRejected);
      continue;
    }
    if (!out.ok) {
      for (const std::string& failure : out.failures)
        std::cerr << input << ": mismatch: " << failure << "\n";
      exit_code = std::max(exit_code, kExitRejected);
      continue;
    }
    std::cout << input << ": " << out.runs << " differential runs ok\n";
  }
  return exit_code;
}

int run_selftest_cmd() {
  SelftestResult result = run_selftest();
  for (const std::string& failure : result.failures)
    std::cerr << "selftest: " << failure << "\n";
  std::cout << "selftest: " << result.passed << " passed, " << result.failed
            << " failed\n";
  return result.ok() ? kExitOk : kExitRejected;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rvv-backport: rewrites RISC-V vector v1.0 assembly for v0.7.1 "
      "toolchains"};
  app.require_subcommand(1);

  SharedFlags tr_flags;
  std::string tr_input, tr_output, tr_report;
  CLI::App* translate =
      app.add_subcommand("translate", "Translate one assembly file");
  translate->add_option("input", tr_input, "v1.0 assembly file")->required();
  translate->add_option("-o,--output", tr_output,
                        "Output path ('-' for stdout; default: "
                        "<input>.v07.s next to the input)");
  translate->add_option("--report", tr_report, "Write a JSON report here");
  add_shared_flags(translate, tr_flags);

  SharedFlags ck_flags;
  std::vector<std::string> ck_inputs;
  std::vector<unsigned> ck_vlens;
  uint64_t ck_seed = 42;
  uint64_t ck_max_steps = 1000000;
  CLI::App* check = app.add_subcommand(
      "check", "Translate, then run source and translation through the "
               "built-in interpreters and compare the outcome");
  check->add_option("input", ck_inputs, "v1.0 assembly files")->required();
  check->add_option("--vlen", ck_vlens,
                    "Vector register widths to run (overrides the .diffspec)");
  check->add_option("--seed", ck_seed, "Base seed for generated inputs");
  check->add_option("--max-steps", ck_max_steps,
                    "Interpreter step budget per run");
  add_shared_flags(check, ck_flags);

  CLI::App* selftest = app.add_subcommand(
      "selftest", "Check the rewrite rules against the built-in "
                  "instruction-pair table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (translate->parsed())
    return run_translate(tr_input, tr_output, tr_report, tr_flags);
  if (check->parsed())
    return run_check(ck_inputs, ck_vlens, ck_seed, ck_max_steps, ck_flags);
  if (selftest->parsed()) return run_selftest_cmd();
  return kExitUsage;
}
