#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pasx/channel.hpp"
#include "pasx/channel_json.hpp"

using namespace pasx;
using Catch::Matchers::WithinAbs;

namespace {

// Independent quadrature of the binary-input AWGN mutual information for
// BPSK levels +-1 and noise sigma; serves as the continuous-output reference.
double biawgn_capacity(double sigma) {
  const double lo = -1.0 - 10.0 * sigma, hi = 1.0 + 10.0 * sigma;
  const int steps = 200000;
  const double dy = (hi - lo) / steps;
  auto pdf = [&](double y, double x) {
    const double t = (y - x) / sigma;
    return std::exp(-0.5 * t * t) / (sigma * std::sqrt(2.0 * M_PI));
  };
  double mi = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double y = lo + i * dy;
    const double wgt = (i == 0 || i == steps) ? 0.5 : 1.0;
    const double p0 = pdf(y, 1.0), p1 = pdf(y, -1.0);
    const double py = 0.5 * (p0 + p1);
    double term = 0.0;
    if (p0 > 0) term += 0.5 * p0 * std::log2(p0 / py);
    if (p1 > 0) term += 0.5 * p1 * std::log2(p1 / py);
    mi += wgt * term * dy;
  }
  return mi;
}

}  // namespace

TEST_CASE("make_bsc") {
  auto w = make_bsc(0.11);
  CHECK_THAT(w.w(0, 0), WithinAbs(0.89, 1e-15));
  CHECK_THAT(w.w(0, 1), WithinAbs(0.11, 1e-15));
  CHECK_THAT(w.w(1, 0), WithinAbs(0.11, 1e-15));
  CHECK_THAT(make_bsc(0.0).w(0, 0), WithinAbs(1.0, 1e-15));
  CHECK_THAT(make_bsc(0.5).w(1, 1), WithinAbs(0.5, 1e-15));
  CHECK_THROWS_AS(make_bsc(0.6), std::invalid_argument);
  CHECK_THROWS_AS(make_bsc(-0.1), std::invalid_argument);
}

TEST_CASE("Dmc validation") {
  CHECK_THROWS_AS(Dmc({"a"}, {"0", "1"}, {{0.6, 0.3}}), std::invalid_argument);
  CHECK_THROWS_AS(Dmc({"a"}, {"0", "1"}, {{1.2, -0.2}}), std::invalid_argument);
  CHECK_THROWS_AS(Dmc({"a", "b"}, {"0"}, {{1.0}}), std::invalid_argument);
}

TEST_CASE("make_ask_awgn") {
  SECTION("m=1 is a binary-input channel split as |A|=1, |S|=2") {
    auto fd = make_ask_awgn(1, 5.0, 32);
    CHECK(fd.num_a() == 1);
    CHECK(fd.num_s() == 2);
    CHECK(fd.base().num_inputs() == 2);
    CHECK(fd.base().num_outputs() == 34);
  }
  SECTION("rows are stochastic") {
    auto fd = make_ask_awgn(2, 10.0, 64);
    for (std::size_t x = 0; x < fd.base().num_inputs(); ++x) {
      double sum = 0.0;
      for (std::size_t y = 0; y < fd.base().num_outputs(); ++y) sum += fd.base().w(x, y);
      CHECK_THAT(sum, WithinAbs(1.0, 1e-9));
    }
  }
  SECTION("mutual information is monotone in the bin count") {
    double prev = -1.0;
    for (int bins : {8, 16, 32, 64}) {
      auto fd = make_ask_awgn(2, 10.0, bins);
      const Pmf px = Pmf::uniform(fd.base().input_labels());
      const double mi = mutual_information(px, fd.base());
      CHECK(mi > prev - 1e-12);
      prev = mi;
    }
  }
  SECTION("m=1 approaches the continuous binary-input capacity from below") {
    const double snr_db = 3.0;
    const double sigma = std::pow(10.0, -snr_db / 20.0);
    const double reference = biawgn_capacity(sigma);
    auto fd = make_ask_awgn(1, snr_db, 512, 6.0);
    const double mi = mutual_information(Pmf::uniform(fd.base().input_labels()), fd.base());
    CHECK(mi <= reference + 1e-9);
    CHECK(mi > reference - 5e-3);
  }
  CHECK_THROWS_AS(make_ask_awgn(5, 10.0, 64), std::invalid_argument);
  CHECK_THROWS_AS(make_ask_awgn(2, 10.0, 1), std::invalid_argument);
}

TEST_CASE("maxwell_boltzmann") {
  SECTION("nu = 0 gives uniform") {
    Pmf p = maxwell_boltzmann({1.0, 3.0, 5.0}, 0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK_THAT(p[i], WithinAbs(1.0 / 3.0, 1e-15));
  }
  SECTION("large nu concentrates on the smallest amplitude") {
    Pmf p = maxwell_boltzmann({1.0, 3.0}, 5.0);
    CHECK(p[0] > 0.999);
  }
  SECTION("amplitudes (1,3), nu = 0.1") {
    Pmf p = maxwell_boltzmann({1.0, 3.0}, 0.1);
    CHECK_THAT(p[0], WithinAbs(0.6899744811276124, 1e-9));
    CHECK_THAT(p[1], WithinAbs(0.3100255188723876, 1e-9));
  }
  SECTION("labels line up with a factored ASK channel") {
    auto fd = make_ask_awgn(2, 8.0, 16);
    Pmf p = maxwell_boltzmann(fd, 0.05);
    CHECK(p.labels() == fd.a_labels());
  }
}

TEST_CASE("product_input") {
  auto fd = testutil::bsc_pair(0.1);
  SECTION("uniform times uniform is uniform") {
    Pmf px = product_input(Pmf::uniform(fd.a_labels()), Pmf::uniform(fd.s_labels()), fd);
    for (std::size_t i = 0; i < 4; ++i) CHECK_THAT(px[i], WithinAbs(0.25, 1e-15));
  }
  SECTION("products land on the mapped index") {
    Pmf pa({"0", "1"}, {0.7, 0.3});
    Pmf ps({"0", "1"}, {0.5, 0.5});
    Pmf px = product_input(pa, ps, fd);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t s = 0; s < 2; ++s) {
        CHECK_THAT(px[fd.x_of(a, s)], WithinAbs(pa[a] * ps[s], 1e-15));
      }
    }
  }
  SECTION("marginals recover the factors") {
    Rng rng(31);
    Pmf pa = Pmf(fd.a_labels(), testutil::random_simplex(rng, 2));
    Pmf ps = Pmf(fd.s_labels(), testutil::random_simplex(rng, 2));
    Pmf px = product_input(pa, ps, fd);
    for (std::size_t a = 0; a < 2; ++a) {
      double m = 0.0;
      for (std::size_t s = 0; s < 2; ++s) m += px[fd.x_of(a, s)];
      CHECK_THAT(m, WithinAbs(pa[a], 1e-15));
    }
    for (std::size_t s = 0; s < 2; ++s) {
      double m = 0.0;
      for (std::size_t a = 0; a < 2; ++a) m += px[fd.x_of(a, s)];
      CHECK_THAT(m, WithinAbs(ps[s], 1e-15));
    }
  }
  SECTION("degenerate pa confines the support to one amplitude") {
    Pmf pa({"0", "1"}, {1.0, 0.0});
    Pmf px = product_input(pa, Pmf::uniform(fd.s_labels()), fd);
    CHECK_THAT(px[fd.x_of(1, 0)] + px[fd.x_of(1, 1)], WithinAbs(0.0, 1e-15));
  }
}

TEST_CASE("channel JSON round trip") {
  auto w = make_bsc(0.11);
  auto j = dmc_to_json(w);
  auto back = dmc_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.input_labels() == w.input_labels());
  CHECK(back.output_labels() == w.output_labels());
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) CHECK_THAT(back.w(x, y), WithinAbs(w.w(x, y), 1e-15));
  }

  auto fd = testutil::bsc_pair(0.05);
  auto fj = factored_to_json(fd);
  auto fback = factored_from_json(nlohmann::json::parse(fj.dump()));
  CHECK(fback.a_labels() == fd.a_labels());
  CHECK(fback.s_labels() == fd.s_labels());
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t s = 0; s < 2; ++s) {
      for (std::size_t y = 0; y < 4; ++y) {
        CHECK_THAT(fback.w_as(a, s, y), WithinAbs(fd.w_as(a, s, y), 1e-15));
      }
    }
  }
}
