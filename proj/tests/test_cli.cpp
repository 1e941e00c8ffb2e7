#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/bench.hpp"
#include "levy/csv.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace levy;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args)
{
  const std::string cmd = std::string(LEVYBENCH_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path scratch(const std::string& name)
{
  auto p = fs::temp_directory_path() / ("levy_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string small_table = "table --quiet --model 'gamma(3,2);bgamma(3,2)' --n 1000 --reps 3 --seed 5";

} // namespace

TEST_CASE("exit codes")
{
  const auto dir = scratch("codes");
  CHECK(run("") == 2);
  CHECK(run("--help") == 0);
  CHECK(run("table --model 'nonsense(1)' --out-dir " + dir.string()) == 2);
  CHECK(run("table --n 999 --out-dir " + dir.string()) == 2);
  CHECK(run("table --reps 0 --out-dir " + dir.string()) == 2);
  CHECK(run("table --config " + (dir / "absent.cfg").string()) == 2);
  CHECK(run("estimate-density --model 'cpois_normal(3)' --out-dir " + dir.string()) == 2);
  CHECK(run("estimate-jump --weights binned:0 --out-dir " + dir.string()) == 2);
  CHECK(run("rates --class 'pol(-1)' --out-dir " + dir.string()) == 2);
}

TEST_CASE("simulate, estimate and rates write their files")
{
  const auto dir = scratch("single");
  REQUIRE(run("simulate --n 500 --out-dir " + (dir / "sim").string()) == 0);
  CHECK(read_csv(dir / "sim" / "increments.csv").size() == 501);
  CHECK(fs::exists(dir / "sim" / "scheme.csv"));

  REQUIRE(run("estimate-jump --n 1000 --weights equal --x-points 11 --spectra --out-dir " + (dir / "g").string()) == 0);
  CHECK(read_csv(dir / "g" / "estimate.csv").size() == 12);
  for (const char* f : {"loss.csv", "p_hat.csv", "q_hat.csv", "psi_prime_hat.csv"})
    CHECK(fs::exists(dir / "g" / f));

  REQUIRE(run("estimate-density --n 1000 --weights oracle --cutoff 3 --out-dir " + (dir / "f").string()) == 0);
  CHECK(fs::exists(dir / "f" / "estimate.csv"));

  REQUIRE(run("rates --class 'pol(1)' --n 100,1000 --out-dir " + (dir / "r").string()) == 0);
  CHECK(read_csv(dir / "r" / "rates.csv").size() == 3);
}

TEST_CASE("table: row counts, reproducibility, aggregates")
{
  const auto a = scratch("table_a");
  const auto b = scratch("table_b");
  const auto c = scratch("table_c");
  REQUIRE(run(small_table + " --threads 2 --out-dir " + a.string()) == 0);
  REQUIRE(run(small_table + " --threads 2 --out-dir " + b.string()) == 0);
  REQUIRE(run(small_table + " --threads 1 --out-dir " + c.string()) == 0);

  const auto summary = read_csv(a / "summary.csv");
  // one row per (model, n) cell
  CHECK(summary.size() == 1 + 2);

  // Same seed: per-replication output is bit-identical.
  CHECK(slurp(a / "per_rep.csv") == slurp(b / "per_rep.csv"));
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  // The thread count only shows in the echo.
  CHECK(read_csv(a / "per_rep.csv") == read_csv(c / "per_rep.csv"));

  // Every output file starts with the configuration echo.
  for (const char* f : {"summary.csv", "per_rep.csv", "runtime.csv"}) {
    const auto text = slurp(a / f);
    CHECK(text.rfind("# model=gamma(3,2);bgamma(3,2)", 0) == 0);
  }

  // Aggregates recomputed from per_rep.csv.
  const auto per_rep = read_csv(a / "per_rep.csv");
  const auto& head = per_rep.front();
  auto col = [&](const std::vector<std::string>& h, const std::string& name) {
    return static_cast<std::size_t>(std::find(h.begin(), h.end(), name) - h.begin());
  };
  std::map<std::string, std::map<std::string, std::vector<double>>> values;
  for (std::size_t i = 1; i < per_rep.size(); ++i)
    for (const char* v : {"r_or", "r_ad", "r_eq"})
      values[per_rep[i][col(head, "model")]][v].push_back(std::stod(per_rep[i][col(head, v)]));
  const auto& sh = summary.front();
  for (std::size_t i = 1; i < summary.size(); ++i) {
    const auto& model = summary[i][col(sh, "model")];
    CHECK(std::stoul(summary[i][col(sh, "reps")]) == 3);
    for (const auto& [v, se] : {std::pair{"r_or", "se_or"}, {"r_ad", "se_ad"}, {"r_eq", "se_eq"}}) {
      const auto agg = aggregate(values[model][v]);
      CHECK(std::abs(std::stod(summary[i][col(sh, v)]) - agg.mean) <= 1e-12 * std::max(1.0, agg.mean));
      CHECK(std::abs(std::stod(summary[i][col(sh, se)]) - agg.se) <= 1e-12 * std::max(1.0, agg.se));
    }
  }
}
