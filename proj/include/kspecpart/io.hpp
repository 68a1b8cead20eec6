#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kspecpart/hypergraph.hpp"

namespace ksp {

// hMETIS .hgr reader. Header "|E| |V| [fmt]", fmt in {absent, 1, 10, 11}.
// Lines starting with '%' are comments. Duplicate pins are dropped with a
// warning; hyperedges left with a single pin are dropped with a warning.
// Throws ParseError naming the offending line.
Hypergraph parse_hmetis(std::istream& in);
Hypergraph read_hmetis_file(const std::string& path);

// Writes fmt 11 when any weight differs from 1, otherwise the bare header.
void write_hmetis(std::ostream& out, const Hypergraph& h);

// Solution file: one 0-indexed block id per line. k = 0 infers k = max + 1.
Partition parse_solution(std::istream& in, VertexId n_vertices, BlockId k = 0);
Partition read_solution_file(const std::string& path, VertexId n_vertices, BlockId k = 0);
void write_solution(std::ostream& out, const Partition& s);
void write_solution_file(const std::string& path, const Partition& s);

}  // namespace ksp
