#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kspecpart/driver.hpp"

namespace ksp::bench {

// One manifest line: "name path_or_url sha256 k_list eps [hint=path]".
// k_list is comma separated; sha256 "-" skips verification for local files.
struct ManifestEntry {
  std::string name;
  std::string source;
  std::string sha256;
  std::vector<BlockId> ks;
  double eps = 0.0;
  std::string hint;
};

// Blank lines and '#' comments are ignored. Throws ParseError.
std::vector<ManifestEntry> parse_manifest(std::istream& in);
std::vector<ManifestEntry> read_manifest_file(const std::string& path);

// Lower-case hex digest. Throws IoError if the file cannot be read.
std::string sha256_file(const std::string& path);

bool is_url(const std::string& source);

struct BenchOptions {
  KspConfig base;           // k and eps are taken from the manifest
  std::string cache_dir = "bench_cache";
  bool parallel = false;
  bool include_timings = true;
  int hint_restarts = 5;
};

struct BenchRow {
  std::string benchmark;
  BlockId k = 0;
  double eps = 0.0;
  std::optional<VertexId> vertices;
  std::optional<EdgeId> hyperedges;
  std::optional<Weight> hint_cutsize;
  std::optional<Weight> final_cutsize;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::string skipped;  // reason, empty for completed runs
};

// Relative paths in the manifest resolve against base_dir. Rows follow
// manifest order and then k order regardless of `parallel`.
std::vector<BenchRow> run_suite(const std::vector<ManifestEntry>& manifest, const BenchOptions& opts,
                                const std::string& base_dir = ".");

// Header "benchmark,|V|,|E|,K,eps,hint_cutsize,final_cutsize,seconds,seed".
// Skipped rows keep the name, K and eps and leave the other fields empty.
void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool include_timings = true);

}  // namespace ksp::bench
