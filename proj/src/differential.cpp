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

#include <charconv>
#include <random>
#include <sstream>

#include "rvvback/parser.hpp"
#include "rvvback/pipeline.hpp"

namespace rvvback {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<int64_t> parse_int(std::string_view tok) {
  tok = trim(tok);
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

std::vector<std::string> split_fields(std::string_view s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.emplace_back(s.substr(start, i - start));
  }
  return out;
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool parse_reg_value(std::string_view value, DiffSpec::RegInit& init) {
  value = trim(value);
  if (value == "rand") {
    init.kind = DiffSpec::RegInit::Kind::Rand;
    return true;
  }
  if (value.starts_with("rand(") && value.ends_with(")")) {
    std::string_view inner = value.substr(5, value.size() - 6);
    size_t comma = inner.find(',');
    if (comma == std::string_view::npos) return false;
    auto lo = parse_int(inner.substr(0, comma));
    auto hi = parse_int(inner.substr(comma + 1));
    if (!lo || !hi || *lo > *hi) return false;
    init.kind = DiffSpec::RegInit::Kind::RandRange;
    init.lo = *lo;
    init.hi = *hi;
    return true;
  }
  auto fixed = parse_int(value);
  if (!fixed) return false;
  init.kind = DiffSpec::RegInit::Kind::Fixed;
  init.value = *fixed;
  return true;
}

}  // namespace

std::optional<DiffSpec> parse_diffspec(const std::string& text,
                                       std::string* error) {
  DiffSpec spec;
  spec.vlens.clear();
  auto fail = [&](int line, const std::string& msg) -> std::optional<DiffSpec> {
    if (error) *error = "diffspec line " + std::to_string(line) + ": " + msg;
    return std::nullopt;
  };

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    auto fields = split_fields(line);
    const std::string& head = fields[0];

    if (head == "seeds") {
      auto n = fields.size() == 2 ? parse_int(fields[1]) : std::nullopt;
      if (!n || *n < 1) return fail(lineno, "seeds expects a positive count");
      spec.seeds = int(*n);
    } else if (head == "vlen") {
      if (fields.size() < 2) return fail(lineno, "vlen expects at least one value");
      for (size_t i = 1; i < fields.size(); ++i) {
        auto v = parse_int(fields[i]);
        if (!v || *v < 64 || *v > 4096 || (*v & (*v - 1)))
          return fail(lineno, "vlen must be a power of two in [64, 4096]");
        spec.vlens.push_back(unsigned(*v));
      }
    } else if (head == "option") {
      if (fields.size() != 2) return fail(lineno, "option expects one name");
      const std::string& name = fields[1];
      if (name != "expand-whole-register" && name != "assume-eew-matches-sew" &&
          name != "lenient")
        return fail(lineno, "unknown option '" + name + "'");
      spec.options.push_back(name);
    } else if (head == "mem") {
      // mem ADDR = HEXBYTES   or   mem ADDR : LEN = rand
      auto eq = line.find('=');
      if (eq == std::string_view::npos) return fail(lineno, "mem expects '='");
      std::string_view lhs = trim(line.substr(3, eq - 3));
      std::string_view rhs = trim(line.substr(eq + 1));
      DiffSpec::MemInit init;
      auto colon = lhs.find(':');
      if (colon != std::string_view::npos) {
        auto addr = parse_int(lhs.substr(0, colon));
        auto len = parse_int(lhs.substr(colon + 1));
        if (!addr || *addr < 0 || !len || *len < 1)
          return fail(lineno, "mem range expects addr : len");
        if (rhs != "rand") return fail(lineno, "mem range only supports rand");
        init.addr = uint64_t(*addr);
        init.rand_len = uint64_t(*len);
      } else {
        auto addr = parse_int(lhs);
        if (!addr || *addr < 0) return fail(lineno, "bad mem address");
        init.addr = uint64_t(*addr);
        if (rhs.empty() || rhs.size() % 2 != 0)
          return fail(lineno, "mem bytes must be hex pairs");
        for (size_t i = 0; i < rhs.size(); i += 2) {
          int hi = hex_nibble(rhs[i]), lo = hex_nibble(rhs[i + 1]);
          if (hi < 0 || lo < 0) return fail(lineno, "mem bytes must be hex pairs");
          init.bytes.push_back(uint8_t(hi * 16 + lo));
        }
      }
      spec.mems.push_back(std::move(init));
    } else {
      // REG = VALUE
      auto eq = line.find('=');
      if (eq == std::string_view::npos)
        return fail(lineno, "unrecognized directive '" + head + "'");
      std::string reg(trim(line.substr(0, eq)));
      int idx = scalar_reg_index(reg);
      if (idx < 0) return fail(lineno, "unknown register '" + reg + "'");
      if (idx == 0) return fail(lineno, "x0 cannot be initialized");
      DiffSpec::RegInit init;
      init.reg = idx;
      if (!parse_reg_value(line.substr(eq + 1), init))
        return fail(lineno, "bad register value");
      spec.regs.push_back(init);
    }
  }
  if (spec.vlens.empty()) spec.vlens.push_back(128);
  return spec;
}

std::set<int> excluded_registers(const Program& source,
                                 const Program& translated,
                                 const RewriteOptions& opts) {
  std::set<int> out;
  out.insert(0);
  for (const std::string& name : opts.scratch_regs) {
    int idx = scalar_reg_index(name);
    if (idx >= 0) out.insert(idx);
  }
  auto collect = [&](const Program& prog) {
    for (const EmuOp& op : prog.ops) {
      if (op.kind == OpKind::SetVli || op.kind == OpKind::SetIVli ||
          op.kind == OpKind::SetVl) {
        if (op.rd > 0) out.insert(op.rd);
      }
    }
  };
  collect(source);
  collect(translated);
  return out;
}

namespace {

void accumulate(DialectStats& into, const DialectStats& from) {
  into.v07_avl_x0_vlmax += from.v07_avl_x0_vlmax;
  into.v10_avl_x0_keep_vl += from.v10_avl_x0_keep_vl;
  into.v10_avl_x0_vlmax += from.v10_avl_x0_vlmax;
  into.mem_sew_typed += from.mem_sew_typed;
  into.mem_eew_typed += from.mem_eew_typed;
  into.policy_tokens_seen += from.policy_tokens_seen;
}

struct Inputs {
  std::vector<std::pair<int, uint64_t>> regs;
  std::vector<std::pair<uint64_t, std::vector<uint8_t>>> mems;
};

// one draw per run, applied identically to both machines
std::optional<Inputs> draw_inputs(const DiffSpec& spec, uint64_t seed,
                                  size_t mem_size, std::string* error) {
  std::mt19937_64 rng(seed);
  Inputs in;
  for (const DiffSpec::RegInit& reg : spec.regs) {
    uint64_t value = 0;
    switch (reg.kind) {
      case DiffSpec::RegInit::Kind::Fixed:
        value = uint64_t(reg.value);
        break;
      case DiffSpec::RegInit::Kind::Rand:
        value = rng();
        break;
      case DiffSpec::RegInit::Kind::RandRange: {
        uint64_t span = uint64_t(reg.hi - reg.lo) + 1;
        value = uint64_t(reg.lo) + (span ? rng() % span : rng());
        break;
      }
    }
    in.regs.emplace_back(reg.reg, value);
  }
  for (const DiffSpec::MemInit& mem : spec.mems) {
    std::vector<uint8_t> bytes = mem.bytes;
    for (uint64_t i = 0; i < mem.rand_len; ++i)
      bytes.push_back(uint8_t(rng()));
    if (mem.addr >= mem_size || mem_size - mem.addr < bytes.size()) {
      if (error) *error = "diffspec memory init outside machine memory";
      return std::nullopt;
    }
    in.mems.emplace_back(mem.addr, std::move(bytes));
  }
  return in;
}

void apply_inputs(MachineState& st, const Inputs& in) {
  for (const auto& [reg, value] : in.regs) st.x[reg] = value;
  for (const auto& [addr, bytes] : in.mems)
    std::copy(bytes.begin(), bytes.end(), st.mem.begin() + addr);
}

std::string hex64(uint64_t v) {
  char buf[19];
  snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(v));
  return buf;
}

// empty string means equal
std::string compare_states(const MachineState& a, const MachineState& b,
                           const std::set<int>& excluded) {
  for (int r = 1; r < 32; ++r) {
    if (excluded.count(r)) continue;
    if (a.x[r] != b.x[r])
      return "x" + std::to_string(r) + ": source " + hex64(a.x[r]) +
             ", translated " + hex64(b.x[r]);
  }
  if (a.mem.size() != b.mem.size()) return "memory sizes differ";
  for (size_t i = 0; i < a.mem.size(); ++i) {
    if (a.mem[i] != b.mem[i])
      return "mem[" + hex64(i) + "]: source " + std::to_string(a.mem[i]) +
             ", translated " + std::to_string(b.mem[i]);
  }
  return "";
}

}  // namespace

DiffOutcome run_differential(const std::string& source_text,
                             const std::string& source_name,
                             const DiffSpec& spec,
                             const RewriteOptions& base_opts,
                             uint64_t base_seed, uint64_t max_steps) {
  DiffOutcome out;
  RewriteOptions opts = base_opts;
  for (const std::string& name : spec.options) {
    if (name == "expand-whole-register") opts.expand_whole_register = true;
    if (name == "assume-eew-matches-sew") opts.assume_eew_matches_sew = true;
    if (name == "lenient") opts.mode = RewriteMode::Lenient;
  }

  TranslateOutcome translated = translate_text(source_text, source_name, opts);
  if (!translated.ok()) {
    out.error = "translation failed";
    for (const ReportItem& item : translated.report.errors)
      out.error += "; line " + std::to_string(item.line) + ": " + item.message;
    return out;
  }

  ParseResult src_parse = parse_document(source_text, source_name);
  ParseResult dst_parse =
      parse_document(translated.output, source_name + " (translated)");
  LoadResult src_load = load_program(src_parse.doc, Dialect::V1p0);
  if (!src_load.ok) {
    out.error = "source line " + std::to_string(src_load.error_line) + ": " +
                src_load.error;
    return out;
  }
  LoadResult dst_load = load_program(dst_parse.doc, Dialect::V0p7);
  if (!dst_load.ok) {
    out.error = "translated line " + std::to_string(dst_load.error_line) +
                ": " + dst_load.error;
    return out;
  }

  std::set<int> excluded =
      excluded_registers(src_load.program, dst_load.program, opts);

  out.ok = true;
  for (unsigned vlen : spec.vlens) {
    for (int j = 0; j < spec.seeds; ++j) {
      uint64_t seed = base_seed + uint64_t(j);
      MachineConfig src_cfg{vlen, size_t(1) << 20, Dialect::V1p0};
      MachineConfig dst_cfg{vlen, size_t(1) << 20, Dialect::V0p7};
      MachineState src_state(src_cfg);
      MachineState dst_state(dst_cfg);

      std::string derr;
      auto inputs = draw_inputs(spec, seed, src_cfg.mem_size, &derr);
      if (!inputs) {
        out.ok = false;
        out.error = derr;
        return out;
      }
      apply_inputs(src_state, *inputs);
      apply_inputs(dst_state, *inputs);

      RunResult src_run = run(src_state, src_load.program, max_steps);
      RunResult dst_run = run(dst_state, dst_load.program, max_steps);
      out.runs += 1;

      std::string tag = "vlen=" + std::to_string(vlen) +
                        " seed=" + std::to_string(seed);
      std::string problem;
      if (!src_run.ok)
        problem = "source trapped: " + src_run.error;
      else if (!dst_run.ok)
        problem = "translated trapped: " + dst_run.error;
      else
        problem = compare_states(src_state, dst_state, excluded);

      if (!problem.empty()) {
        out.ok = false;
        if (out.failures.size() < 5)
          out.failures.push_back(tag + ": " + problem);
      }
      accumulate(out.source_stats, src_state.stats);
      accumulate(out.translated_stats, dst_state.stats);
    }
  }
  return out;
}

}  // namespace rvvback
