#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "tsnet/csv_io.hpp"
#include "tsnet/dist_matrix.hpp"
#include "tsnet/error.hpp"

using namespace tsnet;
namespace fs = std::filesystem;

namespace {

std::vector<TimeSeries> random_set(std::size_t n, std::size_t len, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<TimeSeries> out;
  for (std::size_t k = 0; k < n; ++k) out.emplace_back("s" + std::to_string(k + 1), oracle::random_values(rng, len));
  return out;
}

Kernel cor_kernel() { return make_kernel(KernelConfig{}); }

DistanceMatrix from_upper(std::vector<double> upper) {
  std::size_t n = 2;
  while (pair_count(n) < upper.size()) ++n;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k) labels.push_back(std::to_string(k + 1));
  DistanceMatrix d(labels);
  for (std::size_t k = 0; k < upper.size(); ++k) {
    auto [i, j] = pair_at(k, n);
    d.set(i - 1, j - 1, upper[k]);
  }
  return d;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("matrix invariants are enforced") {
  CHECK_THROWS_AS(DistanceMatrix({"a", "b"}, {0, 1, 2, 0}), Error);
  CHECK_THROWS_AS(DistanceMatrix({"a", "b"}, {1, 1, 1, 0}), Error);
  CHECK_THROWS_AS(DistanceMatrix({"a", "b"}, {0, -1, -1, 0}), Error);
  CHECK_NOTHROW(DistanceMatrix({"a", "b"}, {0, 1, 1, 0}));
  DistanceMatrix d({"a", "b"});
  CHECK_THROWS_AS(d.set(0, 0, 1.0), Error);
  CHECK_THROWS_AS(d.set(0, 1, NAN), Error);
}

TEST_CASE("canonical pair order") {
  for (std::size_t n = 2; n <= 15; ++n) {
    std::size_t k = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = i + 1; j <= n; ++j, ++k) {
        CHECK(pair_at(k, n) == std::pair{i, j});
        CHECK(pair_index(i, j, n) == k);
      }
    }
    CHECK(k == pair_count(n));
  }
}

TEST_CASE("part ranges tile the pair list") {
  CHECK(part_range(6, 1, 1).count == 6);
  std::vector<std::size_t> sizes;
  for (std::size_t p = 1; p <= 4; ++p) sizes.push_back(part_range(6, p, 4).count);
  CHECK(sizes == std::vector<std::size_t>{2, 2, 1, 1});
  for (std::size_t pairs : {0u, 1u, 6u, 45u, 66u, 100u}) {
    for (std::size_t total = 1; total <= 70; ++total) {
      std::size_t next = 0;
      for (std::size_t p = 1; p <= total; ++p) {
        const auto r = part_range(pairs, p, total);
        CHECK(r.begin == next);
        next += r.count;
      }
      CHECK(next == pairs);
    }
  }
  CHECK_THROWS_AS(part_range(6, 0, 3), Error);
  CHECK_THROWS_AS(part_range(6, 4, 3), Error);
}

TEST_CASE("ts_dist") {
  SUBCASE("identical series give the zero matrix") {
    std::vector<TimeSeries> same(3, TimeSeries("a", {1, 5, 2, 7}));
    auto d = ts_dist(same, cor_kernel());
    for (double v : d.values()) CHECK(v == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("noisy copy is closer than the phase-shifted series") {
    std::vector<double> s, c, ns;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 0.1);
    for (int t = 0; t < 100; ++t) {
      s.push_back(std::sin(0.1 * t));
      c.push_back(std::cos(0.1 * t));
      ns.push_back(s.back() + g(rng));
    }
    auto d = ts_dist({TimeSeries("sin", s), TimeSeries("cos", c), TimeSeries("nsin", ns)}, cor_kernel());
    CHECK(d(0, 2) < d(0, 1));
    CHECK(d(0, 2) == dist_cor(TimeSeries("a", s), TimeSeries("b", ns), CorrelationMode::abs));
  }
  SUBCASE("worker count does not matter") {
    auto set = random_set(20, 50, 2);
    for (const char* metric : {"cor", "dtw", "nmi"}) {
      KernelConfig cfg;
      cfg.metric = metric;
      const auto k = make_kernel(cfg);
      const auto one = ts_dist(set, k, 1);
      CHECK(one == ts_dist(set, k, 8));
      CHECK(one == ts_dist(set, k, 3));
      CHECK(one.labels()[4] == "s5");
    }
  }
  SUBCASE("fails on the lowest failing pair") {
    auto set = random_set(6, 10, 3);
    set[3] = TimeSeries("flat", std::vector<double>(10, 2.0));
    set[4] = TimeSeries("flat2", std::vector<double>(10, 1.0));
    for (std::size_t workers : {1u, 2u, 5u}) {
      try {
        ts_dist(set, cor_kernel(), workers);
        FAIL("expected failure");
      } catch (const KernelError& e) {
        CHECK(e.i() == 1);
        CHECK(e.j() == 4);
        CHECK(e.cause() == ErrorKind::degenerate_input);
      }
    }
  }
  SUBCASE("rejects asymmetric kernels and tiny inputs") {
    KernelConfig cfg;
    cfg.metric = "es";
    cfg.es.mode = EsMode::asymmetric;
    auto set = random_set(3, 10, 4);
    try {
      ts_dist(set, make_kernel(cfg));
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::asymmetric_kernel);
    }
    CHECK_THROWS_AS(ts_dist(random_set(1, 10, 4), cor_kernel()), Error);
  }
  SUBCASE("kernel returning garbage") {
    Kernel bad{"bad", [](const TimeSeries&, const TimeSeries&) { return -1.0; }, true};
    CHECK_THROWS_AS(ts_dist(random_set(3, 5, 5), bad), KernelError);
  }
}

TEST_CASE("partitioned computation and merge") {
  const auto set = random_set(12, 30, 6);
  const auto kernel = cor_kernel();
  const auto full = ts_dist(set, kernel);
  std::vector<std::string> labels;
  for (const auto& s : set) labels.push_back(s.id());

  for (std::size_t total : {1u, 3u, 7u, 66u, 80u}) {
    std::vector<DistancePart> parts;
    std::size_t triples = 0;
    for (std::size_t p = 1; p <= total; ++p) {
      parts.push_back(ts_dist_part(set, kernel, p, total, 2));
      CHECK(parts.back().part_index == p);
      const auto r = part_range(66, p, total);
      REQUIRE(parts.back().triples.size() == r.count);
      for (std::size_t k = 0; k < r.count; ++k) {
        const auto& t = parts.back().triples[k];
        CHECK(std::pair{t.i, t.j} == pair_at(r.begin + k, 12));
        CHECK(t.d == full(t.i - 1, t.j - 1));
      }
      triples += r.count;
    }
    CHECK(triples == 66);
    CHECK(dist_parts_merge(parts, 12, labels) == full);

    auto doubled = parts;
    doubled.push_back(parts.front());
    CHECK(dist_parts_merge(doubled, 12, labels) == full);

    if (total >= 3) {
      auto missing = parts;
      missing.erase(missing.begin() + 1);
      try {
        dist_parts_merge(missing, 12, labels);
        FAIL("expected incomplete merge");
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::incomplete_merge);
        const auto r = part_range(66, 2, total);
        if (r.count > 0) {
          auto [i, j] = pair_at(r.begin, 12);
          CHECK(std::string(e.what()).find("(" + std::to_string(i) + "," + std::to_string(j) + ")") !=
                std::string::npos);
        }
      }
    }
  }
  SUBCASE("conflicting duplicates") {
    auto part = ts_dist_part(set, kernel, 1, 1);
    auto bad = part;
    bad.triples[5].d += 0.25;
    try {
      dist_parts_merge({part, bad}, 12, labels);
      FAIL("expected conflict");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::merge_conflict);
    }
  }
  SUBCASE("default labels") {
    auto merged = dist_parts_merge({ts_dist_part(set, kernel, 1, 1)}, 12);
    CHECK(merged.labels().front() == "1");
    CHECK(merged.labels().back() == "12");
  }
}

TEST_CASE("directory source streams the same part") {
  TempDir dir("tsnet_dm_dir");
  const auto set = random_set(7, 25, 7);
  // Written in reverse so creation order differs from name order.
  for (std::size_t k = set.size(); k-- > 0;) {
    std::ofstream out(dir.path / (set[k].id() + ".csv"));
    for (double v : set[k].values()) out << format_double(v) << '\n';
  }
  const auto kernel = cor_kernel();
  for (std::size_t total : {1u, 4u}) {
    for (std::size_t p = 1; p <= total; ++p) {
      CHECK(ts_dist_part_file(dir.path, kernel, p, total) == ts_dist_part(set, kernel, p, total));
    }
  }
  TempDir empty("tsnet_dm_empty");
  try {
    ts_dist_part_file(empty.path, kernel, 1, 1);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_argument);
  }
}

TEST_CASE("part and matrix files round-trip") {
  TempDir dir("tsnet_dm_files");
  const auto set = random_set(5, 20, 8);
  const auto part = ts_dist_part(set, cor_kernel(), 2, 3);
  const auto path = dir.path / part_file_name(2, 3);
  CHECK(path.filename() == "part_2_of_3.csv");
  write_part_csv(part, path);
  CHECK(read_part_csv(path) == part);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "i,j,dist");

  const auto full = ts_dist(set, cor_kernel());
  write_matrix_csv(full, dir.path / "m.csv");
  CHECK(read_matrix_csv(dir.path / "m.csv") == full);

  std::istringstream bad(",a,b\na,0,1\nb,2,0\n");
  CHECK_THROWS_AS(parse_matrix_csv(bad, "bad"), Error);
}

TEST_CASE("normalize") {
  auto d = from_upper({2, 4, 6});
  auto n = dist_matrix_normalize(d);
  CHECK(n.matrix.off_diagonal() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(!n.degenerate);
  CHECK(dist_matrix_normalize(n.matrix).matrix == n.matrix);
  auto unit = from_upper({0, 0.3, 1});
  CHECK(dist_matrix_normalize(unit).matrix == unit);
  auto flat = dist_matrix_normalize(from_upper({3, 3, 3}));
  CHECK(flat.degenerate);
  CHECK(flat.matrix.off_diagonal() == std::vector<double>{0, 0, 0});
}

TEST_CASE("percentile") {
  CHECK(dist_percentile(from_upper({7, 7, 7, 7, 7, 7}), 0.37) == 7.0);
  // Six pairs on four nodes; only five of them hold the interesting values.
  const auto five = from_upper({1, 2, 3, 4, 5, 3});
  CHECK(dist_percentile(five, 0.5) == 3.0);
  const auto d = from_upper({5, 1, 4, 2, 3, 9});
  CHECK(dist_percentile(d, 1e-9) == doctest::Approx(1.0));
  CHECK(dist_percentile(d, 1 - 1e-9) == doctest::Approx(9.0));
  CHECK_THROWS_AS(dist_percentile(d, 0.0), Error);
  CHECK_THROWS_AS(dist_percentile(d, 1.0), Error);

  SUBCASE("epsilon link count") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> upper(pair_count(15));
      for (auto& v : upper) v = u(rng);
      const auto m = from_upper(upper);
      for (double p : {0.1, 0.3, 0.5, 0.9}) {
        const double eps = dist_percentile(m, p);
        const auto within = std::count_if(upper.begin(), upper.end(), [&](double v) { return v <= eps; });
        const double target = p * static_cast<double>(upper.size());
        CHECK(std::abs(static_cast<double>(within) - target) <= 1.0);
      }
    }
  }
}

TEST_CASE("pairwise significance") {
  std::vector<double> s, noisy, indep;
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  for (int t = 0; t < 100; ++t) {
    s.push_back(std::sin(0.2 * t));
    noisy.push_back(s.back() + 0.3 * g(rng));
    indep.push_back(g(rng));
  }
  KernelConfig cfg;
  cfg.significance = SignificanceSpec{};
  const auto test = make_significance_test(cfg);
  const std::vector<TimeSeries> set{TimeSeries("s", s), TimeSeries("n", noisy), TimeSeries("i", indep)};
  const auto m = pairwise_significance(set, test);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(0, 2) == 0.0);
  CHECK(m(1, 2) == 0.0);
  CHECK(pairwise_significance(set, test, 3) == m);
}
