#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pasx/optimize.hpp"

using namespace pasx;
using Catch::Matchers::WithinAbs;

namespace {

// Brute-force grid over the product of two binary simplices.
double grid_best_product_mi(const FactoredDmc& fd, int steps) {
  double best = -1.0;
  for (int a = 0; a <= steps; ++a) {
    Pmf pa(fd.a_labels(), {static_cast<double>(a) / steps, 1.0 - static_cast<double>(a) / steps});
    for (int s = 0; s <= steps; ++s) {
      Pmf ps(fd.s_labels(),
             {static_cast<double>(s) / steps, 1.0 - static_cast<double>(s) / steps});
      best = std::max(best, mutual_information(product_input(pa, ps, fd), fd.base()));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("blahut_arimoto") {
  SECTION("BSC closed form") {
    for (double p : {0.01, 0.11, 0.25, 0.4}) {
      auto res = blahut_arimoto(make_bsc(p), 1e-10);
      const double expected = 1.0 + p * std::log2(p) + (1.0 - p) * std::log2(1.0 - p);
      CHECK_THAT(res.capacity, WithinAbs(expected, 1e-9));
      CHECK_THAT(res.px_star[0], WithinAbs(0.5, 1e-6));
      CHECK(res.gap < 1e-10);
    }
  }
  SECTION("identity channel") {
    for (std::size_t k : {std::size_t{2}, std::size_t{3}, std::size_t{5}}) {
      std::vector<std::vector<double>> rows(k, std::vector<double>(k, 0.0));
      for (std::size_t i = 0; i < k; ++i) rows[i][i] = 1.0;
      Dmc ident(testutil::letters(k), testutil::letters(k), rows);
      auto res = blahut_arimoto(ident);
      CHECK_THAT(res.capacity, WithinAbs(std::log2(static_cast<double>(k)), 1e-9));
      for (std::size_t i = 0; i < k; ++i) {
        CHECK_THAT(res.px_star[i], WithinAbs(1.0 / static_cast<double>(k), 1e-9));
      }
    }
  }
  SECTION("useless channel") {
    auto res = blahut_arimoto(make_bsc(0.5));
    CHECK_THAT(res.capacity, WithinAbs(0.0, 1e-12));
  }
  SECTION("lower bounds climb monotonically") {
    Rng rng(51);
    for (int i = 0; i < 10; ++i) {
      Dmc w = testutil::random_dmc(rng, 3, 4, 0.02);
      auto res = blahut_arimoto(w, 1e-10);
      for (std::size_t k = 1; k < res.history.size(); ++k) {
        CHECK(res.history[k] >= res.history[k - 1] - 1e-12);
      }
      CHECK(res.gap >= 0.0);
    }
  }
  SECTION("max_iter exhaustion leaves the gap above tol") {
    Rng rng(52);
    auto res = blahut_arimoto(testutil::random_dmc(rng, 4, 4), 1e-14, 2);
    CHECK(res.iterations == 2);
    CHECK(res.gap > 1e-14);
  }
}

TEST_CASE("maximize_product_mi") {
  SECTION("independent parallel sub-channels attain the unconstrained capacity") {
    auto wa = make_bsc(0.1);
    auto ws = make_bsc(0.2);
    auto fd = make_parallel(wa, ws);
    const double expected =
        blahut_arimoto(wa, 1e-11).capacity + blahut_arimoto(ws, 1e-11).capacity;
    auto res = maximize_product_mi(fd, 1e-11);
    CHECK_THAT(res.mi, WithinAbs(expected, 1e-8));
    CHECK(res.converged);
    // never exceeds the unconstrained capacity
    CHECK(res.mi <= blahut_arimoto(fd.base(), 1e-11).capacity + 1e-9);
  }
  SECTION("optimized input dominates the uniform pair on ASK") {
    auto fd = make_ask_awgn(2, 10.0, 32);
    const double uniform_mi = mutual_information(
        product_input(Pmf::uniform(fd.a_labels()), Pmf::uniform(fd.s_labels()), fd), fd.base());
    auto res = maximize_product_mi(fd, 1e-9, 2000, 4);
    CHECK(res.mi >= uniform_mi - 1e-12);
  }
  SECTION("matches a fine grid oracle on random factored channels") {
    Rng rng(53);
    for (int i = 0; i < 3; ++i) {
      auto fd = testutil::random_factored(rng, 3, 0.02);
      auto res = maximize_product_mi(fd, 1e-11, 20000, 8);
      const double oracle = grid_best_product_mi(fd, 1000);
      CHECK_THAT(res.mi, WithinAbs(oracle, 1e-5));
      CHECK(res.mi >= oracle - 1e-9);  // grid can only undershoot
    }
  }
}

TEST_CASE("project_to_ntype_design") {
  SECTION("even split") {
    auto t = project_to_ntype_design(testutil::binary_pmf(0.5), 10);
    CHECK(t.counts == std::vector<std::uint32_t>{5, 5});
  }
  SECTION("Boltzmann target, n = 8, matches exhaustive search") {
    Pmf pa = maxwell_boltzmann({1.0, 3.0}, 0.08);
    auto t = project_to_ntype_design(pa, 8);
    const double got = kl_divergence(as_pmf(t), pa);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t c = 0; c <= 8; ++c) {
      best = std::min(best, kl_divergence(as_pmf(NType(pa.labels(), {c, 8 - c}, 8)), pa));
    }
    CHECK_THAT(got, WithinAbs(best, 1e-12));
  }
  SECTION("n = 1 collapses to a point mass on the best symbol") {
    Pmf pa = maxwell_boltzmann({1.0, 3.0}, 0.05);
    auto t = project_to_ntype_design(pa, 1);
    CHECK(t.counts == std::vector<std::uint32_t>{1, 0});  // argmin over both candidates
    const double got = kl_divergence(as_pmf(t), pa);
    const double alt = kl_divergence(as_pmf(NType(pa.labels(), {0, 1}, 1)), pa);
    CHECK(got <= alt);
  }
  SECTION("divergence shrinks as the blocklength doubles") {
    // every n-type is also a 2n-type, so doubling can only improve the fit
    Pmf pa = maxwell_boltzmann({1.0, 3.0}, 0.11);
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint32_t n : {2u, 4u, 8u, 16u, 32u, 64u}) {
      const double d = kl_divergence(as_pmf(project_to_ntype_design(pa, n)), pa);
      CHECK(d <= prev + 1e-15);
      prev = d;
    }
    CHECK(prev < 1e-3);
  }
}
