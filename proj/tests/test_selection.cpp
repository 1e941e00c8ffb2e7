#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "levy/bench.hpp"
#include "levy/error.hpp"
#include "levy/models.hpp"
#include "levy/sampling.hpp"
#include "levy/selection.hpp"
#include "levy/spectral.hpp"
#include "levy/weights.hpp"

#include <cmath>
#include <cstring>
#include <numeric>

using namespace levy;

namespace {

const LevyModel gamma32 = LevyModel(GammaProcess{3, 2});

ErrorCode code_of(auto&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::io;
}

ObservationSet constant_path(std::size_t n, double z)
{
  return ObservationSet(SamplingScheme::from_gaps(std::vector<double>(n, 1.0), 1.0), std::vector<double>(n, z));
}

} // namespace

TEST_CASE("cutoff menu")
{
  CHECK(CutoffMenu::up_to_root(100.0).values == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  CHECK(CutoffMenu::up_to_root(99.99).max() == 9);
  CHECK(CutoffMenu::up_to_root(1.0).values == std::vector<int>{1});
  CHECK_THROWS_AS(CutoffMenu::up_to_root(0.5), Error);
}

TEST_CASE("block plan layout")
{
  const auto plan = BlockPlan::standard(1000);
  CHECK(plan.block_count() == 100);
  CHECK(plan.window() == 10);
  CHECK(plan.subset_count() == 91);
  for (std::size_t b = 0; b < 100; ++b)
    CHECK(plan.offsets()[b + 1] - plan.offsets()[b] == 10);

  const auto odd = BlockPlan::standard(1234);
  CHECK(odd.offsets().front() == 0);
  CHECK(odd.offsets().back() == 1234);
  for (std::size_t b = 0; b + 1 < 100; ++b)
    CHECK(odd.offsets()[b + 1] - odd.offsets()[b] == 12);
  CHECK(odd.offsets()[100] - odd.offsets()[99] == 46);

  CHECK(code_of([] { BlockPlan::standard(999); }) == ErrorCode::plan_too_small);
  CHECK(code_of([] { BlockPlan(50, 5, 10); }) == ErrorCode::plan_too_small);
}

TEST_CASE("smallest argmin")
{
  CHECK(smallest_argmin(std::vector<double>{3, 1, 2, 1}) == 1);
  CHECK(smallest_argmin(std::vector<double>{0, 0, 0}) == 0);
  CHECK(smallest_argmin(std::vector<double>{5}) == 0);
}

TEST_CASE("nested integrals agree with direct trapezoid sums")
{
  const auto grid = SpectralGrid::covering(40.0, 0.01);
  std::vector<double> f(grid.half_size());
  for (std::size_t k = 0; k < f.size(); ++k)
    f[k] = std::cos(grid.node(k)) * std::exp(-0.05 * grid.node(k)) + 0.3;
  std::vector<int> menu(40);
  std::iota(menu.begin(), menu.end(), 1);
  const auto nested = nested_symmetric_integrals(f, grid, menu);
  for (std::size_t i = 0; i < menu.size(); ++i) {
    const std::size_t k_end = grid.index_at_or_below(menu[i]);
    double direct = 0;
    for (std::size_t k = 0; k <= k_end; ++k)
      direct += trapezoid_weight(k, k_end, grid.du()) * f[k];
    REQUIRE(std::fabs(nested[i] - 2 * direct) < 1e-12 * (1 + std::fabs(direct)));
  }
}

TEST_CASE("single-candidate menu")
{
  const auto obs = gamma32.sample_increments(draw_uniform_gaps(1000, 6, 1), 2);
  const auto grid = SpectralGrid::covering(std::sqrt(obs.scheme.horizon()), 0.05);
  const CutoffMenu menu{{3}};
  const auto w = oracle_weights(gamma32, grid);
  CHECK(cv_cutoff_jump(obs, w, 1.0, grid, menu, BlockPlan::standard(1000)).m_hat == 3);
  CHECK(cv_cutoff_density(obs, w, 1.0, grid, menu, BlockPlan::standard(1000)).m_hat == 3);
}

TEST_CASE("vanishing estimates: loss is zero and the smallest cutoff wins")
{
  const auto obs = constant_path(1000, 0.0);
  const auto grid = SpectralGrid::covering(std::sqrt(1000.0), 0.05);
  const auto menu = CutoffMenu::up_to_root(1000.0);
  const auto cv = cv_cutoff_jump(obs, equal_weights(grid), 1.0, grid, menu, BlockPlan::standard(1000));
  CHECK(cv.m_hat == 1);
  for (double l : cv.loss)
    CHECK(l == 0.0);
}

TEST_CASE("identical subset and complement estimates select the largest cutoff")
{
  // Z_j == c: every subset ratio is ic exactly and passes any threshold,
  // so the loss is -int_{-m}^{m} |S|^2 and decreases in m.
  const double c = 0.7;
  const auto obs = constant_path(1000, c);
  const auto grid = SpectralGrid::covering(std::sqrt(1000.0), 0.05);
  const auto menu = CutoffMenu::up_to_root(1000.0);
  const auto plan = BlockPlan::standard(1000);
  const auto jump = cv_cutoff_jump(obs, equal_weights(grid), 1.0, grid, menu, plan);
  CHECK(jump.m_hat == menu.max());
  const auto dens = cv_cutoff_density(obs, equal_weights(grid), 1.0, grid, menu, plan);
  CHECK(dens.m_hat == menu.max());
  for (std::size_t i = 0; i < menu.values.size(); ++i) {
    const double m = menu.values[i];
    CHECK(jump.loss[i] == doctest::Approx(-2.0 * m * c * c).epsilon(1e-9));
    CHECK(dens.loss[i] == doctest::Approx(-2.0 * m).epsilon(1e-9));
  }
}

TEST_CASE("relabelling within blocks leaves the loss unchanged")
{
  const auto obs = gamma32.sample_increments(draw_uniform_gaps(1000, 6, 3), 4);
  const auto grid = SpectralGrid::covering(std::sqrt(obs.scheme.horizon()), 0.02);
  const auto menu = CutoffMenu::up_to_root(obs.scheme.horizon());
  const auto plan = BlockPlan::standard(1000);
  std::vector<double> gaps(obs.scheme.deltas().begin(), obs.scheme.deltas().end());
  std::vector<double> z = obs.increments;
  for (std::size_t b = 0; b < plan.block_count(); ++b) {
    const auto lo = plan.offsets()[b], hi = plan.offsets()[b + 1];
    std::reverse(gaps.begin() + lo, gaps.begin() + hi);
    std::reverse(z.begin() + lo, z.begin() + hi);
  }
  const ObservationSet shuffled(SamplingScheme::from_gaps(gaps, 6.0), z);
  const auto w = oracle_weights(gamma32, grid);
  for (bool density : {false, true}) {
    const auto a = density ? cv_cutoff_density(obs, w, 1.0, grid, menu, plan) : cv_cutoff_jump(obs, w, 1.0, grid, menu, plan);
    const auto b = density ? cv_cutoff_density(shuffled, w, 1.0, grid, menu, plan)
                           : cv_cutoff_jump(shuffled, w, 1.0, grid, menu, plan);
    CHECK(a.m_hat == b.m_hat);
    for (std::size_t i = 0; i < a.loss.size(); ++i)
      REQUIRE(std::fabs(a.loss[i] - b.loss[i]) < 1e-9 * (1 + std::fabs(a.loss[i])));
  }
}

TEST_CASE("cross validation is deterministic")
{
  const auto obs = gamma32.sample_increments(draw_uniform_gaps(2000, 6, 5), 6);
  const auto grid = SpectralGrid::covering(std::sqrt(obs.scheme.horizon()), 0.02);
  const auto menu = CutoffMenu::up_to_root(obs.scheme.horizon());
  const auto plan = BlockPlan::standard(2000);
  const auto w = oracle_weights(gamma32, grid);
  const auto a = cv_cutoff_jump(obs, w, 1.0, grid, menu, plan);
  const auto b = cv_cutoff_jump(obs, w, 1.0, grid, menu, plan);
  CHECK(a.m_hat == b.m_hat);
  CHECK(std::memcmp(a.loss.data(), b.loss.data(), a.loss.size() * sizeof(double)) == 0);
  CHECK(a.menu == menu.values);
}

TEST_CASE("blocked and direct entry points agree")
{
  const auto obs = gamma32.sample_increments(draw_uniform_gaps(1500, 6, 7), 8);
  const auto grid = SpectralGrid::covering(std::sqrt(obs.scheme.horizon()), 0.02);
  const auto menu = CutoffMenu::up_to_root(obs.scheme.horizon());
  const auto plan = BlockPlan::standard(1500);
  const auto w = oracle_weights(gamma32, grid);
  const auto sums = accumulate_block_sums(obs, w, grid, plan.offsets());
  const auto a = cv_cutoff_jump(sums, grid, 1.0, menu, plan);
  const auto b = cv_cutoff_jump(obs, w, 1.0, grid, menu, plan);
  CHECK(a.m_hat == b.m_hat);
  CHECK(a.loss == b.loss);
}

TEST_CASE("cross validation needs n >= 1000")
{
  const auto obs = gamma32.sample_increments(draw_uniform_gaps(999, 6, 7), 8);
  const auto grid = SpectralGrid::covering(std::sqrt(obs.scheme.horizon()), 0.05);
  CHECK(code_of([&] {
          cv_cutoff_jump(obs, equal_weights(grid), 1.0, grid, CutoffMenu::up_to_root(obs.scheme.horizon()),
                         BlockPlan::standard(999));
        }) == ErrorCode::plan_too_small);
}
