#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kspecpart/bench.hpp"
#include "kspecpart/errors.hpp"
#include "kspecpart/io.hpp"
#include "support/generators.hpp"

namespace ksp::bench {
namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ksp_bench_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_h0(const fs::path& p) {
  std::ofstream f(p);
  write_hmetis(f, testing::h0());
}

BenchOptions quick() {
  BenchOptions o;
  o.base.threads = 1;
  o.include_timings = false;
  return o;
}

TEST(Manifest, Parses) {
  std::istringstream in(
      "# name source sha k eps\n"
      "\n"
      "h0 h0.hgr - 2 0.25\n"
      "ibm01 https://example.org/ibm01.hgr " + std::string(64, 'A') + " 2,3,4 0.02 hint=ibm01.sol  # trailing\n");
  const auto m = parse_manifest(in);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].name, "h0");
  EXPECT_EQ(m[0].ks, std::vector<BlockId>{2});
  EXPECT_DOUBLE_EQ(m[0].eps, 0.25);
  EXPECT_TRUE(m[0].hint.empty());
  EXPECT_EQ(m[1].ks, (std::vector<BlockId>{2, 3, 4}));
  EXPECT_EQ(m[1].sha256, std::string(64, 'a'));
  EXPECT_EQ(m[1].hint, "ibm01.sol");
  EXPECT_TRUE(is_url(m[1].source));
  EXPECT_FALSE(is_url(m[0].source));
}

TEST(Manifest, Rejects) {
  for (const char* bad : {"a b - 2\n", "a b - x 0.1\n", "a b - 1 0.1\n", "a b - 2 -1\n", "a b abc 2 0.1\n",
                          "a b - 2 0.1 sol=x\n", "a b - 2, 0.1\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(parse_manifest(in), ParseError) << bad;
  }
  EXPECT_THROW(read_manifest_file("/nonexistent/manifest.txt"), IoError);
}

TEST(Sha256, KnownDigests) {
  TempDir dir;
  const fs::path p = dir.path / "abc.txt";
  std::ofstream(p) << "abc";
  EXPECT_EQ(sha256_file(p.string()), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const fs::path empty = dir.path / "empty.txt";
  std::ofstream{empty};
  EXPECT_EQ(sha256_file(empty.string()), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_THROW(sha256_file((dir.path / "missing").string()), IoError);
}

TEST(Suite, RunningExampleRow) {
  TempDir dir;
  write_h0(dir.path / "h0.hgr");
  const std::string digest = sha256_file((dir.path / "h0.hgr").string());
  std::istringstream in("h0 h0.hgr " + digest + " 2 0.25\n");
  const auto rows = run_suite(parse_manifest(in), quick(), dir.path.string());
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].skipped.empty()) << rows[0].skipped;
  EXPECT_EQ(*rows[0].final_cutsize, 2);
  EXPECT_EQ(*rows[0].vertices, 4);
  EXPECT_EQ(*rows[0].hyperedges, 3);
  std::ostringstream csv;
  write_csv(csv, rows, false);
  EXPECT_EQ(csv.str(),
            "benchmark,|V|,|E|,K,eps,hint_cutsize,final_cutsize,seconds,seed\n"
            "h0,4,3,2,0.25," + std::to_string(*rows[0].hint_cutsize) + ",2,0.000,1\n");
}

TEST(Suite, EmptyManifestWritesHeader) {
  std::istringstream in("# nothing\n");
  const auto rows = run_suite(parse_manifest(in), quick());
  std::ostringstream csv;
  write_csv(csv, rows);
  EXPECT_EQ(csv.str(), "benchmark,|V|,|E|,K,eps,hint_cutsize,final_cutsize,seconds,seed\n");
}

TEST(Suite, SkipsMissingAndCorrupt) {
  TempDir dir;
  write_h0(dir.path / "h0.hgr");
  std::ofstream(dir.path / "junk.hgr") << "not a header\n";
  std::istringstream in("gone gone.hgr - 2 0.1\n"
                        "wrong h0.hgr " + std::string(64, '0') + " 2 0.1\n"
                        "junk junk.hgr - 2 0.1\n"
                        "nosum https://example.invalid/x.hgr - 2 0.1\n"
                        "ok h0.hgr - 2,3 0.25\n");
  const auto rows = run_suite(parse_manifest(in), quick(), dir.path.string());
  ASSERT_EQ(rows.size(), 6u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_FALSE(rows[i].skipped.empty()) << rows[i].benchmark;
    EXPECT_FALSE(rows[i].final_cutsize.has_value());
  }
  EXPECT_TRUE(rows[4].skipped.empty());
  EXPECT_EQ(rows[5].k, 3);
  std::ostringstream csv;
  write_csv(csv, rows, false);
  EXPECT_NE(csv.str().find("gone,,,2,0.1,,,,1\n"), std::string::npos);
}

TEST(Suite, HintFileAndParallelMatchSequential) {
  TempDir dir;
  write_h0(dir.path / "h0.hgr");
  std::ofstream(dir.path / "h0.sol") << "0\n0\n1\n1\n";
  std::ostringstream manifest;
  manifest << "a h0.hgr - 2 0.25 hint=h0.sol\n";
  manifest << "b h0.hgr - 2,3 0.3\n";
  std::istringstream in1(manifest.str()), in2(manifest.str());
  BenchOptions par = quick();
  par.parallel = true;
  const auto seq = run_suite(parse_manifest(in1), quick(), dir.path.string());
  const auto con = run_suite(parse_manifest(in2), par, dir.path.string());
  ASSERT_EQ(seq.size(), 3u);
  EXPECT_EQ(*seq[0].hint_cutsize, 3);
  EXPECT_EQ(*seq[0].final_cutsize, 2);
  std::ostringstream a, b;
  write_csv(a, seq, false);
  write_csv(b, con, false);
  EXPECT_EQ(a.str(), b.str());
}

}  // namespace
}  // namespace ksp::bench
