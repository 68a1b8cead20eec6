#include "kspecpart/bench.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "kspecpart/errors.hpp"
#include "kspecpart/io.hpp"
#include "kspecpart/log.hpp"
#include "kspecpart/parallel.hpp"
#include "kspecpart/refine.hpp"

namespace ksp::bench {
namespace fs = std::filesystem;

namespace {

std::vector<BlockId> parse_k_list(const std::string& text, std::size_t line) {
  std::vector<BlockId> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || k < 2) throw ParseError(line, "bad k value '" + item + "'");
    ks.push_back(k);
  }
  if (ks.empty() || text.back() == ',') throw ParseError(line, "bad k list '" + text + "'");
  return ks;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

std::string url_basename(const std::string& url) {
  auto cut = url.find_first_of("?#");
  std::string path = url.substr(0, cut);
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  return base.empty() ? "download" : base;
}

// Resolves the entry to a verified local file. Returns an empty string and
// sets `why` when the entry has to be skipped.
std::string materialize(const ManifestEntry& e, const BenchOptions& opts, const fs::path& base, std::string& why) {
  fs::path local;
  if (is_url(e.source)) {
    if (e.sha256 == "-") {
      why = "downloaded benchmark without checksum";
      return {};
    }
    local = fs::path(opts.cache_dir) / (e.name + "_" + url_basename(e.source));
    std::error_code ec;
    fs::create_directories(local.parent_path(), ec);
    bool cached = fs::exists(local);
    if (cached) {
      try {
        cached = sha256_file(local.string()) == e.sha256;
      } catch (const IoError&) {
        cached = false;
      }
    }
    if (!cached) {
      const std::string cmd = "curl -fsSL -o " + shell_quote(local.string()) + " " + shell_quote(e.source);
      if (std::system(cmd.c_str()) != 0) {
        why = "download failed";
        return {};
      }
    }
  } else {
    local = fs::path(e.source);
    if (local.is_relative()) local = base / local;
    if (!fs::exists(local)) {
      why = "missing file " + local.string();
      return {};
    }
  }
  if (e.sha256 != "-") {
    std::string digest;
    try {
      digest = sha256_file(local.string());
    } catch (const IoError& err) {
      why = err.what();
      return {};
    }
    if (digest != e.sha256) {
      why = "checksum mismatch";
      return {};
    }
  }
  return local.string();
}

BenchRow run_one(const ManifestEntry& e, BlockId k, const BenchOptions& opts, const fs::path& base) {
  BenchRow row;
  row.benchmark = e.name;
  row.k = k;
  row.eps = e.eps;
  row.seed = opts.base.seed;
  std::string why;
  const std::string path = materialize(e, opts, base, why);
  try {
    if (path.empty()) throw std::runtime_error(why);
    const Hypergraph h = read_hmetis_file(path);
    row.vertices = h.num_vertices();
    row.hyperedges = h.num_edges();
    KspConfig cfg = opts.base;
    cfg.k = k;
    cfg.eps = e.eps;
    cfg.export_coarse_prefix.clear();
    const auto t0 = std::chrono::steady_clock::now();
    Partition hint;
    if (!e.hint.empty()) {
      fs::path hp(e.hint);
      if (hp.is_relative()) hp = base / hp;
      hint = read_solution_file(hp.string(), h.num_vertices(), k);
    } else {
      FmConfig fm;
      fm.max_passes = cfg.fm_passes;
      hint = baseline_partitioner(h, k, e.eps, opts.hint_restarts, cfg.seed, fm);
    }
    row.hint_cutsize = cutsize(h, hint);
    const KspResult res = run_kspecpart(h, hint, cfg);
    row.final_cutsize = res.report.final_cutsize;
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } catch (const std::exception& err) {
    row.skipped = err.what();
  }
  if (!row.skipped.empty()) log::warn("bench: skipped " + e.name + " K=" + std::to_string(k) + ": " + row.skipped);
  return row;
}

}  // namespace

std::vector<ManifestEntry> parse_manifest(std::istream& in) {
  std::vector<ManifestEntry> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::vector<std::string> fields;
    for (std::string f; ss >> f;) fields.push_back(f);
    if (fields.empty()) continue;
    if (fields.size() < 5 || fields.size() > 6) throw ParseError(line_no, "expected 5 or 6 fields");
    ManifestEntry e;
    e.name = fields[0];
    e.source = fields[1];
    e.sha256 = fields[2];
    if (e.sha256 != "-") {
      for (char& c : e.sha256) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      if (e.sha256.size() != 64 || e.sha256.find_first_not_of("0123456789abcdef") != std::string::npos)
        throw ParseError(line_no, "bad sha256");
    }
    e.ks = parse_k_list(fields[3], line_no);
    try {
      std::size_t used = 0;
      e.eps = std::stod(fields[4], &used);
      if (used != fields[4].size() || e.eps < 0.0) throw std::invalid_argument("eps");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad eps '" + fields[4] + "'");
    }
    if (fields.size() == 6) {
      if (fields[5].rfind("hint=", 0) != 0 || fields[5].size() == 5)
        throw ParseError(line_no, "sixth field must be hint=path");
      e.hint = fields[5].substr(5);
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ManifestEntry> read_manifest_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path);
  return parse_manifest(in);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw IoError("read error on " + path);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

bool is_url(const std::string& source) {
  return source.rfind("http://", 0) == 0 || source.rfind("https://", 0) == 0 || source.rfind("ftp://", 0) == 0;
}

std::vector<BenchRow> run_suite(const std::vector<ManifestEntry>& manifest, const BenchOptions& opts,
                                const std::string& base_dir) {
  std::vector<std::pair<std::size_t, BlockId>> jobs;
  for (std::size_t i = 0; i < manifest.size(); ++i)
    for (BlockId k : manifest[i].ks) jobs.emplace_back(i, k);
  std::vector<BenchRow> rows(jobs.size());
  const int threads = opts.parallel ? resolve_threads(0) : 1;
  BenchOptions inner = opts;
  if (opts.parallel) inner.base.threads = 1;
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    rows[j] = run_one(manifest[jobs[j].first], jobs[j].second, inner, fs::path(base_dir));
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows, bool include_timings) {
  out << "benchmark,|V|,|E|,K,eps,hint_cutsize,final_cutsize,seconds,seed\n";
  auto opt = [](const auto& v) { return v ? std::to_string(*v) : std::string(); };
  for (const BenchRow& r : rows) {
    std::ostringstream eps;
    eps << r.eps;
    out << r.benchmark << ',' << opt(r.vertices) << ',' << opt(r.hyperedges) << ',' << r.k << ',' << eps.str()
        << ',' << opt(r.hint_cutsize) << ',' << opt(r.final_cutsize) << ',';
    if (r.skipped.empty()) {
      std::ostringstream secs;
      secs << std::fixed << std::setprecision(3) << (include_timings ? r.seconds : 0.0);
      out << secs.str();
    }
    out << ',' << r.seed << '\n';
  }
}

}  // namespace ksp::bench
