#pragma once

// Text formats: the native spec format, a certificate format, and readers
// for DIMACS WCNF/CNF, DIMACS max-flow, a vertex-cover edge list and a
// Potts model description. Application formats number nodes, variables and
// labels from 1; the native formats number from 0.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "cwm/duality.hpp"
#include "cwm/instances.hpp"
#include "cwm/model.hpp"

namespace cwm::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace detail {

// Splits a line into whitespace-separated tokens, dropping a trailing
// comment introduced by `comment` (0 disables).
inline std::vector<std::string_view> tokenize(std::string_view line, char comment) {
  if (comment != 0) {
    if (auto pos = line.find(comment); pos != std::string_view::npos) line = line.substr(0, pos);
  }
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline double parse_real(std::string_view tok, std::size_t line, bool allow_inf = false) {
  if (tok == "inf" || tok == "+inf" || tok == "-inf") {
    if (!allow_inf) throw ParseError(line, "infinite value not allowed here");
    return tok == "-inf" ? -kInf : kInf;
  }
  std::string_view body = tok;
  if (!body.empty() && body.front() == '+') body.remove_prefix(1);
  double value = 0.0;
  const auto res = std::from_chars(body.data(), body.data() + body.size(), value);
  if (res.ec != std::errc() || res.ptr != body.data() + body.size() || body.empty() ||
      std::isnan(value) || std::isinf(value)) {
    throw ParseError(line, "expected a number, got '" + std::string(tok) + "'");
  }
  return value;
}

template <class Int>
Int parse_int(std::string_view tok, std::size_t line) {
  Int value{};
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || tok.empty()) {
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return value;
}

inline std::size_t parse_index(std::string_view tok, std::size_t line, std::size_t limit,
                               const char* what) {
  const auto value = parse_int<long long>(tok, line);
  if (value < 0 || static_cast<unsigned long long>(value) >= limit) {
    throw ParseError(line, std::string(what) + " index " + std::string(tok) +
                               " out of range [0, " + std::to_string(limit) + ")");
  }
  return static_cast<std::size_t>(value);
}

// 1-based id in 1..limit, returned 0-based.
inline std::size_t parse_id(std::string_view tok, std::size_t line, std::size_t limit,
                            const char* what) {
  const auto value = parse_int<long long>(tok, line);
  if (value < 1 || static_cast<unsigned long long>(value) > limit) {
    throw ParseError(line, std::string(what) + " " + std::string(tok) + " out of range 1.." +
                               std::to_string(limit));
  }
  return static_cast<std::size_t>(value - 1);
}

inline void expect_tokens(const std::vector<std::string_view>& t, std::size_t count,
                          std::size_t line) {
  if (t.size() != count) {
    throw ParseError(line, "'" + std::string(t.front()) + "' record expects " +
                               std::to_string(count - 1) + " fields, got " +
                               std::to_string(t.size() - 1));
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Native spec format

// Writes only non-default records: zero vector entries and infinite bounds are omitted.
inline void write_spec(std::ostream& os, const ProblemSpec& spec) {
  os << "cwm 1\n";
  os << "dims " << spec.m() << ' ' << spec.n() << ' ' << spec.p() << '\n';
  auto vec = [&](const char* tag, const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0 || std::signbit(x[i])) os << tag << ' ' << i << ' ' << format_double(x[i]) << '\n';
    }
  };
  auto bound = [&](const char* tag, const std::vector<double>& x, double omitted) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != omitted) os << tag << ' ' << i << ' ' << format_double(x[i]) << '\n';
    }
  };
  vec("a", spec.a());
  vec("b", spec.b());
  vec("w", spec.w());
  vec("v", spec.v());
  for (const Triplet& t : spec.A().triplets()) {
    os << "A " << t.row << ' ' << t.col << ' ' << format_double(t.value) << '\n';
  }
  for (const Triplet& t : spec.B().triplets()) {
    os << "B " << t.row << ' ' << t.col << ' ' << format_double(t.value) << '\n';
  }
  bound("philo", spec.phi_lo(), -kInf);
  bound("phihi", spec.phi_hi(), kInf);
  bound("lamlo", spec.lam_lo(), -kInf);
  bound("lamhi", spec.lam_hi(), kInf);
}

inline std::string spec_to_string(const ProblemSpec& spec) {
  std::ostringstream os;
  write_spec(os, spec);
  return os.str();
}

inline ProblemSpec read_spec(std::istream& is) {
  ProblemData d;
  bool header = false, dims = false;
  std::set<std::pair<std::string, std::size_t>> seen;
  std::set<std::tuple<char, std::size_t, std::size_t>> seen_entries;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto t = detail::tokenize(raw, '#');
    if (t.empty()) continue;
    if (!header) {
      if (t.size() != 2 || t[0] != "cwm") throw ParseError(line, "expected header 'cwm 1'");
      if (t[1] != "1") throw ParseError(line, "unsupported format version " + std::string(t[1]));
      header = true;
      continue;
    }
    if (t[0] == "dims") {
      if (dims) throw ParseError(line, "duplicate dims record");
      detail::expect_tokens(t, 4, line);
      d.m = detail::parse_int<std::size_t>(t[1], line);
      d.n = detail::parse_int<std::size_t>(t[2], line);
      d.p = detail::parse_int<std::size_t>(t[3], line);
      d.a.assign(d.m, 0.0);
      d.w.assign(d.m, 0.0);
      d.phi_lo.assign(d.m, -kInf);
      d.phi_hi.assign(d.m, kInf);
      d.b.assign(d.n, 0.0);
      d.lam_lo.assign(d.n, -kInf);
      d.lam_hi.assign(d.n, kInf);
      d.v.assign(d.p, 0.0);
      dims = true;
      continue;
    }
    if (!dims) throw ParseError(line, "record '" + std::string(t[0]) + "' before dims");

    const std::string tag(t[0]);
    if (tag == "A" || tag == "B") {
      detail::expect_tokens(t, 4, line);
      const std::size_t rows = tag == "A" ? d.m : d.n;
      const std::size_t i = detail::parse_index(t[1], line, rows, tag == "A" ? "A row" : "B row");
      const std::size_t j = detail::parse_index(t[2], line, d.p, "column");
      if (!seen_entries.insert({tag[0], i, j}).second) {
        throw ParseError(line, "duplicate " + tag + " entry (" + std::to_string(i) + ", " +
                                   std::to_string(j) + ")");
      }
      (tag == "A" ? d.A : d.B).push_back({i, j, detail::parse_real(t[3], line)});
      continue;
    }

    std::vector<double>* target = nullptr;
    std::size_t limit = 0;
    bool allow_inf = false;
    if (tag == "a") target = &d.a, limit = d.m;
    else if (tag == "w") target = &d.w, limit = d.m;
    else if (tag == "b") target = &d.b, limit = d.n;
    else if (tag == "v") target = &d.v, limit = d.p;
    else if (tag == "philo") target = &d.phi_lo, limit = d.m, allow_inf = true;
    else if (tag == "phihi") target = &d.phi_hi, limit = d.m, allow_inf = true;
    else if (tag == "lamlo") target = &d.lam_lo, limit = d.n, allow_inf = true;
    else if (tag == "lamhi") target = &d.lam_hi, limit = d.n, allow_inf = true;
    else throw ParseError(line, "unknown record '" + tag + "'");

    detail::expect_tokens(t, 3, line);
    const std::size_t i = detail::parse_index(t[1], line, limit, tag.c_str());
    if (!seen.insert({tag, i}).second) {
      throw ParseError(line, "duplicate " + tag + " record for index " + std::to_string(i));
    }
    (*target)[i] = detail::parse_real(t[2], line, allow_inf);
  }
  if (!header) throw ParseError(line + 1, "missing header 'cwm 1'");
  if (!dims) throw ParseError(line + 1, "missing dims record");
  return ProblemSpec(std::move(d));
}

inline ProblemSpec spec_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_spec(is);
}

// ---------------------------------------------------------------------------
// Certificate format: the primal point plus every dual and auxiliary value,
// dense, one record per entry.

struct CertificateFile {
  std::vector<double> phi;
  std::vector<double> lam;
  DualCertificate cert;
};

inline void write_certificate(std::ostream& os, std::span<const double> phi,
                              std::span<const double> lam, const DualCertificate& cert) {
  os << "cwmcert 1\n";
  os << "dims " << phi.size() << ' ' << lam.size() << ' ' << cert.x.size() << '\n';
  os << "precondition " << (cert.precondition_met ? 1 : 0) << '\n';
  auto vec = [&](const char* tag, std::span<const double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      os << tag << ' ' << i << ' ' << format_double(x[i]) << '\n';
    }
  };
  vec("phi", phi);
  vec("lam", lam);
  vec("x", cert.x);
  vec("s", cert.s);
  vec("y", cert.y);
  vec("z", cert.z);
  vec("q", cert.q);
  vec("r", cert.r);
  vec("alpha", cert.alpha);
  vec("beta", cert.beta);
}

inline CertificateFile read_certificate(std::istream& is) {
  CertificateFile out;
  bool header = false, dims = false;
  std::map<std::string, std::vector<double>*> targets;
  std::map<std::string, std::vector<bool>> filled;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto t = detail::tokenize(raw, '#');
    if (t.empty()) continue;
    if (!header) {
      if (t.size() != 2 || t[0] != "cwmcert" || t[1] != "1") {
        throw ParseError(line, "expected header 'cwmcert 1'");
      }
      header = true;
      continue;
    }
    if (t[0] == "dims") {
      if (dims) throw ParseError(line, "duplicate dims record");
      detail::expect_tokens(t, 4, line);
      const auto m = detail::parse_int<std::size_t>(t[1], line);
      const auto n = detail::parse_int<std::size_t>(t[2], line);
      const auto p = detail::parse_int<std::size_t>(t[3], line);
      DualCertificate& c = out.cert;
      for (auto [tag, vec, size] :
           {std::tuple{"phi", &out.phi, m}, {"lam", &out.lam, n}, {"x", &c.x, p},
            {"s", &c.s, m}, {"y", &c.y, m}, {"z", &c.z, m}, {"q", &c.q, n}, {"r", &c.r, n},
            {"alpha", &c.alpha, m}, {"beta", &c.beta, p}}) {
        vec->assign(size, 0.0);
        targets[tag] = vec;
        filled[tag].assign(size, false);
      }
      dims = true;
      continue;
    }
    if (!dims) throw ParseError(line, "record '" + std::string(t[0]) + "' before dims");
    if (t[0] == "precondition") {
      detail::expect_tokens(t, 2, line);
      if (t[1] != "0" && t[1] != "1") throw ParseError(line, "precondition must be 0 or 1");
      out.cert.precondition_met = t[1] == "1";
      continue;
    }
    const std::string tag(t[0]);
    auto it = targets.find(tag);
    if (it == targets.end()) throw ParseError(line, "unknown record '" + tag + "'");
    detail::expect_tokens(t, 3, line);
    const std::size_t i = detail::parse_index(t[1], line, it->second->size(), tag.c_str());
    if (filled[tag][i]) throw ParseError(line, "duplicate " + tag + " record");
    filled[tag][i] = true;
    (*it->second)[i] = detail::parse_real(t[2], line);
  }
  if (!header) throw ParseError(line + 1, "missing header 'cwmcert 1'");
  if (!dims) throw ParseError(line + 1, "missing dims record");
  for (const auto& [tag, flags] : filled) {
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (!flags[i]) throw ParseError(line + 1, "missing " + tag + " record for index " + std::to_string(i));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DIMACS WCNF / CNF. Accepts the classic `p wcnf nvars nclauses [top]` and
// `p cnf nvars nclauses` headers, and header-less files where hard clauses
// start with `h`. A clause ends with 0 on its own line.

inline MaxSatFormula read_wcnf(std::istream& is) {
  MaxSatFormula f;
  enum class Kind { kNone, kCnf, kWcnf } kind = Kind::kNone;
  std::optional<double> top;
  std::optional<std::size_t> declared;
  int max_var = 0;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto t = detail::tokenize(raw, 0);
    if (t.empty() || t[0] == "c" || t[0].front() == 'c') continue;
    if (t[0] == "p") {
      if (kind != Kind::kNone) throw ParseError(line, "duplicate problem line");
      if (t.size() < 4) throw ParseError(line, "problem line needs format, variables and clauses");
      if (t[1] == "cnf") {
        detail::expect_tokens(t, 4, line);
        kind = Kind::kCnf;
      } else if (t[1] == "wcnf") {
        if (t.size() > 5) throw ParseError(line, "too many fields on problem line");
        kind = Kind::kWcnf;
        if (t.size() == 5) top = detail::parse_real(t[4], line);
      } else {
        throw ParseError(line, "unknown problem format '" + std::string(t[1]) + "'");
      }
      f.num_vars = detail::parse_int<int>(t[2], line);
      if (f.num_vars < 0) throw ParseError(line, "negative variable count");
      declared = detail::parse_int<std::size_t>(t[3], line);
      continue;
    }
    if (t.back() != "0") throw ParseError(line, "clause must end with 0");
    Clause clause;
    std::size_t first = 0;
    if (t[0] == "h") {
      clause.hard = true;
      first = 1;
    } else if (kind == Kind::kCnf) {
      clause.weight = 1.0;
    } else {
      clause.weight = detail::parse_real(t[0], line);
      if (clause.weight < 0.0) throw ParseError(line, "negative clause weight");
      if (top && clause.weight >= *top) {
        clause.hard = true;
        clause.weight = 0.0;
      }
      first = 1;
    }
    for (std::size_t k = first; k + 1 < t.size(); ++k) {
      const int lit = detail::parse_int<int>(t[k], line);
      if (lit == 0) throw ParseError(line, "literal 0 inside a clause");
      if (kind != Kind::kNone && std::abs(lit) > f.num_vars) {
        throw ParseError(line, "literal " + std::to_string(lit) + " exceeds declared " +
                                   std::to_string(f.num_vars) + " variables");
      }
      max_var = std::max(max_var, std::abs(lit));
      clause.literals.push_back(lit);
    }
    f.clauses.push_back(std::move(clause));
  }
  if (kind == Kind::kNone) f.num_vars = max_var;
  if (declared && *declared != f.clauses.size()) {
    throw ParseError(line + 1, "problem line declares " + std::to_string(*declared) +
                                   " clauses, found " + std::to_string(f.clauses.size()));
  }
  return f;
}

// ---------------------------------------------------------------------------
// DIMACS max-flow: `p max nodes arcs`, `n id s`, `n id t`, `a u v cap`.

inline FlowNetwork read_dimacs_flow(std::istream& is) {
  FlowNetwork net;
  std::optional<std::size_t> declared_arcs, source, sink;
  bool problem = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto t = detail::tokenize(raw, 0);
    if (t.empty() || t[0] == "c") continue;
    if (t[0] == "p") {
      if (problem) throw ParseError(line, "duplicate problem line");
      detail::expect_tokens(t, 4, line);
      if (t[1] != "max") throw ParseError(line, "expected 'p max'");
      net.num_nodes = detail::parse_int<std::size_t>(t[2], line);
      declared_arcs = detail::parse_int<std::size_t>(t[3], line);
      problem = true;
      continue;
    }
    if (!problem) throw ParseError(line, "record before problem line");
    if (t[0] == "n") {
      detail::expect_tokens(t, 3, line);
      const std::size_t id = detail::parse_id(t[1], line, net.num_nodes, "node");
      if (t[2] == "s") {
        if (source) throw ParseError(line, "duplicate source");
        source = id;
      } else if (t[2] == "t") {
        if (sink) throw ParseError(line, "duplicate sink");
        sink = id;
      } else {
        throw ParseError(line, "node designator must be 's' or 't'");
      }
    } else if (t[0] == "a") {
      detail::expect_tokens(t, 4, line);
      Arc arc;
      arc.from = detail::parse_id(t[1], line, net.num_nodes, "node");
      arc.to = detail::parse_id(t[2], line, net.num_nodes, "node");
      arc.capacity = detail::parse_real(t[3], line);
      if (arc.capacity < 0.0) throw ParseError(line, "negative capacity");
      net.arcs.push_back(arc);
    } else {
      throw ParseError(line, "unknown record '" + std::string(t[0]) + "'");
    }
  }
  if (!problem) throw ParseError(line + 1, "missing problem line");
  if (!source || !sink) throw ParseError(line + 1, "source and sink must both be designated");
  if (*declared_arcs != net.arcs.size()) {
    throw ParseError(line + 1, "problem line declares " + std::to_string(*declared_arcs) +
                                   " arcs, found " + std::to_string(net.arcs.size()));
  }
  net.source = *source;
  net.sink = *sink;
  return net;
}

// ---------------------------------------------------------------------------
// Vertex cover: `n id weight` for ids 1..N (each once), `e u v`.

inline WeightedGraph read_vertex_cover(std::istream& is) {
  std::map<std::size_t, double> weights;
  std::vector<std::pair<std::pair<long long, long long>, std::size_t>> raw_edges;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto t = detail::tokenize(raw, '#');
    if (t.empty() || t[0] == "c") continue;
    if (t[0] == "n") {
      detail::expect_tokens(t, 3, line);
      const auto id = detail::parse_int<long long>(t[1], line);
      if (id < 1) throw ParseError(line, "node ids start at 1");
      const double w = detail::parse_real(t[2], line);
      if (w < 0.0) throw ParseError(line, "negative node weight");
      if (!weights.emplace(static_cast<std::size_t>(id), w).second) {
        throw ParseError(line, "duplicate node " + std::string(t[1]));
      }
    } else if (t[0] == "e") {
      detail::expect_tokens(t, 3, line);
      raw_edges.push_back({{detail::parse_int<long long>(t[1], line),
                            detail::parse_int<long long>(t[2], line)},
                           line});
    } else {
      throw ParseError(line, "unknown record '" + std::string(t[0]) + "'");
    }
  }
  WeightedGraph g;
  std::size_t expect = 1;
  for (const auto& [id, w] : weights) {
    if (id != expect) throw ParseError(line + 1, "node " + std::to_string(expect) + " is missing");
    g.weights.push_back(w);
    ++expect;
  }
  for (const auto& [uv, at] : raw_edges) {
    const auto [u, v] = uv;
    if (u < 1 || v < 1 || static_cast<std::size_t>(u) > g.weights.size() ||
        static_cast<std::size_t>(v) > g.weights.size()) {
      throw ParseError(at, "edge references an undefined node");
    }
    if (u == v) throw ParseError(at, "self-loop");
    g.edges.emplace_back(static_cast<std::size_t>(u - 1), static_cast<std::size_t>(v - 1));
  }
  return g;
}

// ---------------------------------------------------------------------------
// Potts: `potts nodes edges labels`, `theta i k value` (missing entries are
// 0), `edge i j`.

inline PottsModel read_potts(std::istream& is) {
  PottsModel model;
  bool header = false;
  std::size_t declared_edges = 0;
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto t = detail::tokenize(raw, '#');
    if (t.empty() || t[0] == "c") continue;
    if (t[0] == "potts") {
      if (header) throw ParseError(line, "duplicate potts header");
      detail::expect_tokens(t, 4, line);
      const auto nodes = detail::parse_int<std::size_t>(t[1], line);
      declared_edges = detail::parse_int<std::size_t>(t[2], line);
      model.num_labels = detail::parse_int<std::size_t>(t[3], line);
      if (model.num_labels < 2) throw ParseError(line, "at least two labels are required");
      model.unary.assign(nodes, std::vector<double>(model.num_labels, 0.0));
      header = true;
      continue;
    }
    if (!header) throw ParseError(line, "record before potts header");
    if (t[0] == "theta") {
      detail::expect_tokens(t, 4, line);
      const std::size_t i = detail::parse_id(t[1], line, model.unary.size(), "node");
      const std::size_t k = detail::parse_id(t[2], line, model.num_labels, "label");
      if (!seen.insert({i, k}).second) throw ParseError(line, "duplicate theta record");
      model.unary[i][k] = detail::parse_real(t[3], line);
    } else if (t[0] == "edge") {
      detail::expect_tokens(t, 3, line);
      const std::size_t i = detail::parse_id(t[1], line, model.unary.size(), "node");
      const std::size_t j = detail::parse_id(t[2], line, model.unary.size(), "node");
      if (i == j) throw ParseError(line, "self-loop");
      model.edges.emplace_back(i, j);
    } else {
      throw ParseError(line, "unknown record '" + std::string(t[0]) + "'");
    }
  }
  if (!header) throw ParseError(line + 1, "missing potts header");
  if (model.edges.size() != declared_edges) {
    throw ParseError(line + 1, "header declares " + std::to_string(declared_edges) +
                                   " edges, found " + std::to_string(model.edges.size()));
  }
  return model;
}

}  // namespace cwm::io
