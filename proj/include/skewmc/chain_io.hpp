#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "skewmc/finite.hpp"
#include "skewmc/samplers.hpp"
#include "skewmc/vec.hpp"

namespace skewmc {

using json = nlohmann::json;

/// Shortest round-tripping decimal form; locale-independent by
/// construction (std::to_chars).
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  return v;
}

/// Accepts a JSON number, an exact decimal string, or a rational string
/// "a/b".
inline double parse_exact(const json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const std::string s = value.get<std::string>();
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return parse_double(s);
      return parse_double(s.substr(0, slash)) / parse_double(s.substr(slash + 1));
    } catch (const std::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  throw std::invalid_argument(where + ": expected a number or a decimal/rational string");
}

/// FiniteChain document: {"n": int, "pi": [...], "Q": [row-major ...],
/// "s_perm": [...]}; numeric entries may be exact decimal or rational
/// strings. Validation failures carry the violated invariant by name.
inline FiniteChain load_finite_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open chain file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("chain file parse error at byte " + std::to_string(e.byte) + ": " +
                             e.what());
  }
  FiniteChain chain;
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw std::invalid_argument("chain file: integer field 'n' required");
  chain.n = doc["n"].get<int>();
  if (!doc.contains("pi") || !doc["pi"].is_array() ||
      static_cast<int>(doc["pi"].size()) != chain.n)
    throw std::invalid_argument("chain file: 'pi' must be an array of length n");
  for (const auto& v : doc["pi"]) chain.pi.push_back(parse_exact(v, "pi"));
  if (!doc.contains("Q") || !doc["Q"].is_array() ||
      static_cast<long>(doc["Q"].size()) != static_cast<long>(chain.n) * chain.n)
    throw std::invalid_argument("chain file: 'Q' must be a row-major array of length n*n");
  chain.Q = Mat(chain.n, chain.n);
  for (int i = 0; i < chain.n; ++i)
    for (int j = 0; j < chain.n; ++j)
      chain.Q(i, j) = parse_exact(doc["Q"][static_cast<std::size_t>(i) * chain.n + j], "Q");
  if (!doc.contains("s_perm") || !doc["s_perm"].is_array() ||
      static_cast<int>(doc["s_perm"].size()) != chain.n)
    throw std::invalid_argument("chain file: 's_perm' must be an array of length n");
  for (const auto& v : doc["s_perm"]) {
    if (!v.is_number_integer()) throw std::invalid_argument("chain file: s_perm entries must be integers");
    chain.s_perm.push_back(v.get<int>());
  }
  chain.validate();
  return chain;
}

inline void save_finite_chain(const FiniteChain& chain, const std::string& path) {
  json doc;
  doc["n"] = chain.n;
  doc["pi"] = chain.pi;
  doc["Q"] = chain.Q.a;
  doc["s_perm"] = chain.s_perm;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write chain file: " + path);
  out << doc.dump(2) << "\n";
}

/// Trace CSV: header step,x0,...,x{d-1},accepted,direction,log_ratio. Row 0
/// is the initial state with accepted = 1 and log_ratio = 0 by convention;
/// chains without a direction variable write direction 0. Floats are
/// written shortest-round-trip, so re-ingesting reproduces the recorded
/// values bit-exactly.
inline void write_trace_csv(const ChainTrace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  const int d = static_cast<int>(trace.states.front().x.size());
  out << "step";
  for (int k = 0; k < d; ++k) out << ",x" << k;
  out << ",accepted,direction,log_ratio\n";
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    const auto& z = trace.states[i];
    out << i;
    for (int k = 0; k < d; ++k) out << "," << format_double(z.x[static_cast<std::size_t>(k)]);
    const int acc = i == 0 ? 1 : static_cast<int>(trace.accepted[i - 1]);
    const int dir = z.v ? *z.v : 0;
    const double lr = i == 0 ? 0.0 : trace.log_ratios[i - 1];
    out << "," << acc << "," << dir << "," << format_double(lr) << "\n";
  }
}

/// Re-ingests a trace CSV into the fields diagnostics read: positions,
/// accept flags, directions, log ratios.
inline ChainTrace read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty trace file: " + path);
  int d = 0;
  {
    std::stringstream header(line);
    std::string field;
    while (std::getline(header, field, ','))
      if (field.size() > 1 && field[0] == 'x') ++d;
  }
  ChainTrace trace;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (static_cast<int>(fields.size()) != d + 4)
      throw std::runtime_error("trace row with wrong field count: " + line);
    ExtendedState z;
    for (int k = 0; k < d; ++k) z.x.push_back(parse_double(fields[static_cast<std::size_t>(k + 1)]));
    const int dir = static_cast<int>(parse_double(fields[static_cast<std::size_t>(d + 2)]));
    if (dir != 0) z.v = dir;
    trace.states.push_back(std::move(z));
    if (!first) {
      trace.accepted.push_back(fields[static_cast<std::size_t>(d + 1)] == "1");
      trace.log_ratios.push_back(parse_double(fields[static_cast<std::size_t>(d + 3)]));
    }
    first = false;
  }
  for (std::size_t i = 1; i < trace.states.size(); ++i)
    if (trace.states[i].v && trace.states[i - 1].v &&
        *trace.states[i].v != *trace.states[i - 1].v)
      ++trace.direction_flips;
  return trace;
}

}  // namespace skewmc
