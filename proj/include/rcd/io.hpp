// Textual instance files, result emission and CSV writers.
//
// Instance format (line oriented, '#' starts a comment):
//
//   m 2
//   n 2
//   F
//   1 0
//   0 1
//   r 0 1
//   c 0 0
//   actions a1 a2      # optional
//   outcomes w1 w2     # optional
//
// Typed variant: shared "m" and "r" up front, then "types K", "lambda ...",
// and K blocks each introduced by a "type" line with its own n/F/c.
#pragma once

#include "rcd/common.hpp"
#include "rcd/instance.hpp"
#include "rcd/robust.hpp"
#include "rcd/typed.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcd {

/// Round-trip exact formatting; every number the toolkit emits goes
/// through here so identical values always produce identical bytes.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

class parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct LineReader {
  std::istream& in;
  long line_no = 0;

  /// Next non-empty line with comments stripped, or nullopt at EOF.
  std::optional<std::string> next() {
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      bool blank = true;
      for (char ch : line)
        if (!std::isspace(static_cast<unsigned char>(ch))) blank = false;
      if (!blank) return line;
    }
    return std::nullopt;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error("line " + std::to_string(line_no) + ": " + what);
  }
};

inline std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> toks;
  std::string t;
  while (ss >> t) toks.push_back(t);
  return toks;
}

inline double parse_number(LineReader& reader, const std::string& tok) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) reader.fail("malformed number '" + tok + "'");
    return v;
  } catch (const std::exception&) {
    reader.fail("malformed number '" + tok + "'");
  }
}

inline Index parse_count(LineReader& reader, const std::vector<std::string>& toks) {
  if (toks.size() != 2) reader.fail("expected a single integer after '" + toks[0] + "'");
  const double v = parse_number(reader, toks[1]);
  if (v < 1 || v != std::floor(v)) reader.fail("'" + toks[0] + "' must be a positive integer");
  return static_cast<Index>(v);
}

inline Vector parse_vector(LineReader& reader, const std::vector<std::string>& toks,
                           Index expected) {
  if (static_cast<Index>(toks.size()) - 1 != expected)
    reader.fail("expected " + std::to_string(expected) + " values after '" + toks[0] + "', got " +
                std::to_string(toks.size() - 1));
  Vector v(expected);
  for (Index i = 0; i < expected; ++i) v[i] = parse_number(reader, toks[i + 1]);
  return v;
}

inline Matrix parse_matrix(LineReader& reader, Index rows, Index cols) {
  Matrix M(rows, cols);
  for (Index a = 0; a < rows; ++a) {
    const auto line = reader.next();
    if (!line) reader.fail("unexpected end of file inside F (need " + std::to_string(rows) + " rows)");
    const auto toks = tokens_of(*line);
    if (static_cast<Index>(toks.size()) != cols)
      reader.fail("row has " + std::to_string(toks.size()) + " entries, expected " +
                  std::to_string(cols));
    for (Index w = 0; w < cols; ++w) M(a, w) = parse_number(reader, toks[w]);
  }
  return M;
}

struct InstanceParts {
  std::optional<Index> n;
  std::optional<Matrix> F;
  std::optional<Vector> c;
  std::vector<std::string> action_labels;
};

}  // namespace detail

/// Reads a single (untyped) instance. Throws parse_error with a line
/// number on malformed input; semantic validity is validate_instance's job.
inline Instance parse_instance(std::istream& in) {
  detail::LineReader reader{in};
  std::optional<Index> m, n;
  std::optional<Matrix> F;
  std::optional<Vector> r, c;
  std::vector<std::string> action_labels, outcome_labels;

  while (auto line = reader.next()) {
    const auto toks = detail::tokens_of(*line);
    const std::string& key = toks[0];
    if (key == "m") {
      m = detail::parse_count(reader, toks);
    } else if (key == "n") {
      n = detail::parse_count(reader, toks);
    } else if (key == "F") {
      if (!m || !n) reader.fail("F must come after both m and n");
      F = detail::parse_matrix(reader, *n, *m);
    } else if (key == "r") {
      if (!m) reader.fail("r must come after m");
      r = detail::parse_vector(reader, toks, *m);
    } else if (key == "c") {
      if (!n) reader.fail("c must come after n");
      c = detail::parse_vector(reader, toks, *n);
    } else if (key == "actions") {
      action_labels.assign(toks.begin() + 1, toks.end());
    } else if (key == "outcomes") {
      outcome_labels.assign(toks.begin() + 1, toks.end());
    } else if (key == "types") {
      reader.fail("typed instance file; use parse_typed_instance");
    } else {
      reader.fail("unknown key '" + key + "'");
    }
  }
  if (!m || !n || !F || !r || !c)
    throw parse_error("incomplete instance: need m, n, F, r and c");
  Instance inst = make_instance(std::move(*F), std::move(*r), std::move(*c));
  inst.action_labels = std::move(action_labels);
  inst.outcome_labels = std::move(outcome_labels);
  return inst;
}

/// Reads a typed instance (shared m/r, per-type n/F/c blocks).
inline TypedInstance parse_typed_instance(std::istream& in) {
  detail::LineReader reader{in};
  std::optional<Index> m, num_types;
  std::optional<Vector> r, lambda;
  std::vector<detail::InstanceParts> blocks;

  while (auto line = reader.next()) {
    const auto toks = detail::tokens_of(*line);
    const std::string& key = toks[0];
    if (key == "m") {
      m = detail::parse_count(reader, toks);
    } else if (key == "r") {
      if (!m) reader.fail("r must come after m");
      r = detail::parse_vector(reader, toks, *m);
    } else if (key == "types") {
      num_types = detail::parse_count(reader, toks);
    } else if (key == "lambda") {
      if (!num_types) reader.fail("lambda must come after types");
      lambda = detail::parse_vector(reader, toks, *num_types);
    } else if (key == "type") {
      blocks.emplace_back();
    } else if (key == "n") {
      if (blocks.empty()) reader.fail("n outside a type block");
      blocks.back().n = detail::parse_count(reader, toks);
    } else if (key == "F") {
      if (blocks.empty()) reader.fail("F outside a type block");
      if (!blocks.back().n || !m) reader.fail("F must come after m and the block's n");
      blocks.back().F = detail::parse_matrix(reader, *blocks.back().n, *m);
    } else if (key == "c") {
      if (blocks.empty()) reader.fail("c outside a type block");
      if (!blocks.back().n) reader.fail("c must come after the block's n");
      blocks.back().c = detail::parse_vector(reader, toks, *blocks.back().n);
    } else if (key == "actions") {
      if (blocks.empty()) reader.fail("actions outside a type block");
      blocks.back().action_labels.assign(toks.begin() + 1, toks.end());
    } else {
      reader.fail("unknown key '" + key + "'");
    }
  }
  if (!m || !r || !num_types || !lambda)
    throw parse_error("incomplete typed instance: need m, r, types and lambda");
  if (static_cast<Index>(blocks.size()) != *num_types)
    throw parse_error("found " + std::to_string(blocks.size()) + " type blocks, expected " +
                      std::to_string(*num_types));
  TypedInstance tinst;
  tinst.r = *r;
  tinst.lambda = *lambda;
  for (auto& blk : blocks) {
    if (!blk.n || !blk.F || !blk.c)
      throw parse_error("incomplete type block: need n, F and c");
    Instance inst = make_instance(std::move(*blk.F), *r, std::move(*blk.c));
    inst.action_labels = std::move(blk.action_labels);
    tinst.types.push_back(std::move(inst));
  }
  return tinst;
}

/// True when the file declares agent types.
inline bool is_typed_file(std::istream& in) {
  detail::LineReader reader{in};
  while (auto line = reader.next()) {
    const auto toks = detail::tokens_of(*line);
    if (toks[0] == "types") return true;
  }
  return false;
}

inline void write_instance(std::ostream& out, const Instance& inst) {
  out << "m " << inst.num_outcomes() << "\n";
  out << "n " << inst.num_actions() << "\n";
  out << "F\n";
  for (Index a = 0; a < inst.num_actions(); ++a) {
    for (Index w = 0; w < inst.num_outcomes(); ++w)
      out << (w ? " " : "") << format_double(inst.F(a, w));
    out << "\n";
  }
  out << "r";
  for (Index w = 0; w < inst.num_outcomes(); ++w) out << " " << format_double(inst.r[w]);
  out << "\nc";
  for (Index a = 0; a < inst.num_actions(); ++a) out << " " << format_double(inst.c[a]);
  out << "\n";
  if (!inst.action_labels.empty()) {
    out << "actions";
    for (const auto& s : inst.action_labels) out << " " << s;
    out << "\n";
  }
  if (!inst.outcome_labels.empty()) {
    out << "outcomes";
    for (const auto& s : inst.outcome_labels) out << " " << s;
    out << "\n";
  }
}

inline void write_typed_instance(std::ostream& out, const TypedInstance& tinst) {
  out << "m " << tinst.num_outcomes() << "\n";
  out << "r";
  for (Index w = 0; w < tinst.num_outcomes(); ++w) out << " " << format_double(tinst.r[w]);
  out << "\ntypes " << tinst.num_types() << "\n";
  out << "lambda";
  for (Index t = 0; t < tinst.num_types(); ++t) out << " " << format_double(tinst.lambda[t]);
  out << "\n";
  for (Index t = 0; t < tinst.num_types(); ++t) {
    const Instance& inst = tinst.types[t];
    out << "type\n";
    out << "n " << inst.num_actions() << "\n";
    out << "F\n";
    for (Index a = 0; a < inst.num_actions(); ++a) {
      for (Index w = 0; w < inst.num_outcomes(); ++w)
        out << (w ? " " : "") << format_double(inst.F(a, w));
      out << "\n";
    }
    out << "c";
    for (Index a = 0; a < inst.num_actions(); ++a) out << " " << format_double(inst.c[a]);
    out << "\n";
  }
}

/// Machine-readable result of a robust solve (stable field order; thread
/// count deliberately omitted so equal results give equal bytes).
inline void write_solution_json(std::ostream& out, const RobustSolution& sol, double delta) {
  out << "{\"delta\":" << format_double(delta) << ",\"psi\":" << format_double(sol.psi)
      << ",\"contract\":[";
  for (Index w = 0; w < sol.contract.size(); ++w)
    out << (w ? "," : "") << format_double(sol.contract[w]);
  out << "],\"a_star\":" << sol.a_star << ",\"a_delta\":" << sol.a_delta << ",\"j\":" << sol.j
      << ",\"lp_value\":" << format_double(sol.lp_value) << "}\n";
}

}  // namespace rcd
