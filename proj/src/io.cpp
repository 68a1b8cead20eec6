#include "kspecpart/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "kspecpart/errors.hpp"
#include "kspecpart/log.hpp"

namespace ksp {
namespace {

// Reads the next non-comment, non-blank line. Returns false on EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '%') continue;
    return true;
  }
  return false;
}

std::vector<std::int64_t> parse_ints(const std::string& line, std::size_t lineno) {
  std::vector<std::int64_t> out;
  const char* p = line.data();
  const char* end = p + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p == end) break;
    std::int64_t value = 0;
    auto [next, ec] = std::from_chars(p, end, value);
    if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r')) {
      throw ParseError(lineno, "expected integer in '" + line + "'");
    }
    out.push_back(value);
    p = next;
  }
  return out;
}

}  // namespace

Hypergraph parse_hmetis(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw ParseError(lineno, "missing header");
  const auto header = parse_ints(line, lineno);
  if (header.size() < 2 || header.size() > 3) {
    throw ParseError(lineno, "header must be '|E| |V| [fmt]'");
  }
  const std::int64_t n_edges = header[0];
  const std::int64_t n_vertices = header[1];
  const std::int64_t fmt = header.size() == 3 ? header[2] : 0;
  if (n_edges < 0 || n_vertices <= 0) throw ParseError(lineno, "invalid |E| or |V| in header");
  if (fmt != 0 && fmt != 1 && fmt != 10 && fmt != 11) {
    throw ParseError(lineno, "unsupported fmt " + std::to_string(fmt));
  }
  const bool edge_weighted = fmt == 1 || fmt == 11;
  const bool vertex_weighted = fmt == 10 || fmt == 11;

  std::vector<std::vector<VertexId>> edges;
  std::vector<Weight> edge_weights;
  edges.reserve(n_edges);
  edge_weights.reserve(n_edges);
  for (std::int64_t e = 0; e < n_edges; ++e) {
    if (!next_line(in, line, lineno)) {
      throw ParseError(lineno, "expected " + std::to_string(n_edges) + " hyperedge lines, got " +
                                   std::to_string(e));
    }
    auto ints = parse_ints(line, lineno);
    Weight w = 1;
    std::size_t first_pin = 0;
    if (edge_weighted) {
      if (ints.empty()) throw ParseError(lineno, "missing hyperedge weight");
      w = ints[0];
      first_pin = 1;
      if (w <= 0) throw ParseError(lineno, "nonpositive hyperedge weight");
    }
    if (ints.size() - first_pin < 2) throw ParseError(lineno, "hyperedge with fewer than 2 pins");
    std::vector<VertexId> pins;
    pins.reserve(ints.size() - first_pin);
    for (std::size_t i = first_pin; i < ints.size(); ++i) {
      if (ints[i] < 1 || ints[i] > n_vertices) {
        throw ParseError(lineno, "pin " + std::to_string(ints[i]) + " out of range [1, " +
                                     std::to_string(n_vertices) + "]");
      }
      pins.push_back(static_cast<VertexId>(ints[i] - 1));
    }
    std::sort(pins.begin(), pins.end());
    const auto before = pins.size();
    pins.erase(std::unique(pins.begin(), pins.end()), pins.end());
    if (pins.size() != before) {
      log::warn("line " + std::to_string(lineno) + ": duplicate pins removed");
    }
    if (pins.size() < 2) {
      log::warn("line " + std::to_string(lineno) + ": single-pin hyperedge dropped");
      continue;
    }
    edges.push_back(std::move(pins));
    edge_weights.push_back(w);
  }

  std::vector<Weight> vertex_weights(n_vertices, 1);
  if (vertex_weighted) {
    for (std::int64_t v = 0; v < n_vertices; ++v) {
      if (!next_line(in, line, lineno)) {
        throw ParseError(lineno, "expected " + std::to_string(n_vertices) + " vertex weight lines");
      }
      const auto ints = parse_ints(line, lineno);
      if (ints.size() != 1) throw ParseError(lineno, "expected a single vertex weight");
      if (ints[0] < 0) throw ParseError(lineno, "negative vertex weight");
      vertex_weights[v] = ints[0];
    }
  }
  try {
    return Hypergraph(std::move(vertex_weights), edges, std::move(edge_weights));
  } catch (const std::invalid_argument& err) {
    throw ParseError(lineno, err.what());
  }
}

Hypergraph read_hmetis_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_hmetis(in);
}

void write_hmetis(std::ostream& out, const Hypergraph& h) {
  const auto& ew = h.edge_weights();
  const auto& vw = h.vertex_weights();
  const bool edge_weighted = std::any_of(ew.begin(), ew.end(), [](Weight w) { return w != 1; });
  const bool vertex_weighted = std::any_of(vw.begin(), vw.end(), [](Weight w) { return w != 1; });
  out << h.num_edges() << ' ' << h.num_vertices();
  if (edge_weighted || vertex_weighted) out << ' ' << (vertex_weighted ? "1" : "") << (edge_weighted ? "1" : "0");
  out << '\n';
  for (EdgeId e = 0; e < h.num_edges(); ++e) {
    bool first = true;
    if (edge_weighted) {
      out << h.edge_weight(e);
      first = false;
    }
    for (VertexId v : h.pins(e)) {
      if (!first) out << ' ';
      out << v + 1;
      first = false;
    }
    out << '\n';
  }
  if (vertex_weighted) {
    for (Weight w : vw) out << w << '\n';
  }
}

Partition parse_solution(std::istream& in, VertexId n_vertices, BlockId k) {
  std::vector<BlockId> labels;
  labels.reserve(n_vertices);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto ints = parse_ints(line, lineno);
    if (ints.empty()) continue;
    if (ints.size() != 1) throw ParseError(lineno, "expected one block id per line");
    if (ints[0] < 0) throw ParseError(lineno, "negative block id");
    if (static_cast<VertexId>(labels.size()) == n_vertices) {
      throw ParseError(lineno, "more than " + std::to_string(n_vertices) + " labels");
    }
    labels.push_back(static_cast<BlockId>(ints[0]));
  }
  if (static_cast<VertexId>(labels.size()) != n_vertices) {
    throw ParseError(lineno, "expected " + std::to_string(n_vertices) + " labels, got " +
                                 std::to_string(labels.size()));
  }
  BlockId max_label = 0;
  for (BlockId b : labels) max_label = std::max(max_label, b);
  if (k == 0) k = max_label + 1;
  if (max_label >= k) {
    throw ParseError(lineno, "block id " + std::to_string(max_label) + " exceeds k-1");
  }
  return Partition(std::move(labels), k);
}

Partition read_solution_file(const std::string& path, VertexId n_vertices, BlockId k) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_solution(in, n_vertices, k);
}

void write_solution(std::ostream& out, const Partition& s) {
  for (BlockId b : s.labels) out << b << '\n';
}

void write_solution_file(const std::string& path, const Partition& s) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  write_solution(out, s);
}

}  // namespace ksp
