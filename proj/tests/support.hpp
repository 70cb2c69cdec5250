#pragma once

// Shared helpers for the test binaries: parse-or-fail wrappers, goal
// descriptions compared between the engine and the brute-force oracle, and a
// driver for the installed CLI binary.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fcci/fcci.hpp"

namespace support {

inline fcci::TermPtr parse_term(const std::string& text,
                                const fcci::ParseScope& scope = {}) {
  auto r = fcci::parse_term_text(text, scope);
  if (!r.ok()) throw std::runtime_error("parse_term failed on `" + text +
                                        "`: " + r.error().message);
  return r.value();
}

inline fcci::TypePtr parse_type(const std::string& text,
                                const fcci::ParseScope& scope = {}) {
  auto r = fcci::parse_type_text(text, scope);
  if (!r.ok()) throw std::runtime_error("parse_type failed on `" + text +
                                        "`: " + r.error().message);
  return r.value();
}

inline fcci::KindPtr parse_kind(const std::string& text) {
  auto r = fcci::parse_kind_text(text);
  if (!r.ok()) throw std::runtime_error("parse_kind failed on `" + text +
                                        "`: " + r.error().message);
  return r.value();
}

inline fcci::Context parse_context(const std::string& text) {
  auto r = fcci::parse_context_text(text);
  if (!r.ok()) throw std::runtime_error("parse_context failed on `" + text +
                                        "`: " + r.error().message);
  return r.value();
}

// --------------------------------------------------------------------------
// Engine-vs-oracle comparison on a resolution goal

struct GoalSpec {
  std::string name;
  std::string context;             // context-file syntax
  std::string from;                // empty = pure entailment
  std::string to;
  std::vector<std::string> universe;  // finite instantiation universe
};

struct GoalSummary {
  bool derivable = false;
  int min_measure = -1;
  std::vector<std::string> witnesses;  // pretty, sorted
};

inline std::vector<std::string> sorted_witness_strings(
    const std::vector<fcci::Witness>& ws, const fcci::Context& ctx) {
  auto [ty, tm] = fcci::context_display_names(ctx);
  std::vector<std::string> out;
  for (const auto& w : ws) out.push_back(fcci::pretty_term(w.term, ty, tm));
  std::sort(out.begin(), out.end());
  return out;
}

struct PreparedGoal {
  fcci::Context ctx;
  std::optional<fcci::TypePtr> from;
  fcci::TypePtr to;
  std::vector<fcci::TypePtr> universe;
};

inline PreparedGoal prepare_goal(const GoalSpec& g) {
  PreparedGoal p;
  p.ctx = parse_context(g.context);
  fcci::ParseScope scope = fcci::ParseScope::of_context(p.ctx);
  if (!g.from.empty())
    p.from = fcci::normalize_type(parse_type(g.from, scope));
  p.to = fcci::normalize_type(parse_type(g.to, scope));
  for (const auto& u : g.universe)
    p.universe.push_back(fcci::normalize_type(parse_type(u, scope)));
  return p;
}

inline GoalSummary engine_summary(const GoalSpec& g, int limit,
                                  unsigned seed = 0) {
  PreparedGoal p = prepare_goal(g);
  fcci::SolveOptions opts;
  opts.limit = limit;
  opts.shuffle_seed = seed;
  fcci::SolveResult res = fcci::solve(p.ctx, p.from, p.to, opts);
  GoalSummary s;
  s.derivable = res.kind == fcci::SolveResult::Kind::Unique ||
                res.kind == fcci::SolveResult::Kind::Ambiguous;
  if (s.derivable) {
    s.min_measure = res.witnesses.front().measure;
    s.witnesses = sorted_witness_strings(res.witnesses, p.ctx);
  }
  return s;
}

inline GoalSummary oracle_summary(const GoalSpec& g, int limit) {
  PreparedGoal p = prepare_goal(g);
  auto all = fcci::oracle_enumerate(p.ctx, p.from, p.to, limit, p.universe);
  auto min = fcci::minimal_witnesses(all);
  GoalSummary s;
  s.derivable = !min.empty();
  if (s.derivable) {
    s.min_measure = min.front().measure;
    s.witnesses = sorted_witness_strings(min, p.ctx);
  }
  return s;
}

// --------------------------------------------------------------------------
// CLI driver

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "fcci-tests";
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_file(const std::string& name,
                                        const std::string& body) {
  auto p = scratch_dir() / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

#ifdef FCCI_BIN_PATH
inline CliResult run_cli(const std::string& args) {
  static int counter = 0;
  auto dir = scratch_dir();
  auto out_p = dir / ("out" + std::to_string(++counter) + ".txt");
  auto err_p = dir / ("err" + std::to_string(counter) + ".txt");
  std::string cmd = std::string(FCCI_BIN_PATH) + " " + args + " > " +
                    out_p.string() + " 2> " + err_p.string();
  int raw = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_p);
  r.err = slurp(err_p);
  std::filesystem::remove(out_p);
  std::filesystem::remove(err_p);
  return r;
}
#endif

}  // namespace support
