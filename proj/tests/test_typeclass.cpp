#include <functional>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "pasx/typeclass.hpp"

using namespace pasx;
using Catch::Matchers::WithinAbs;

namespace {

NType bin_type(std::uint32_t c0, std::uint32_t c1) {
  return NType({"a", "b"}, {c0, c1}, c0 + c1);
}

// All count vectors of length k summing to n.
void for_each_composition(std::uint32_t n, std::uint32_t k,
                          const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> counts(k, 0);
  std::function<void(std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t idx,
                                                              std::uint32_t left) {
    if (idx + 1 == k) {
      counts[idx] = left;
      fn(counts);
      return;
    }
    for (std::uint32_t c = 0; c <= left; ++c) {
      counts[idx] = c;
      rec(idx + 1, left - c);
    }
  };
  rec(0, n);
}

}  // namespace

TEST_CASE("NType validation and as_pmf") {
  CHECK_THROWS_AS(NType({"a", "b"}, {2, 1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(NType({"a"}, {0}, 0), std::invalid_argument);

  auto p = as_pmf(bin_type(2, 2));
  CHECK_THAT(p[0], WithinAbs(0.5, 1e-15));
  auto q = as_pmf(bin_type(4, 0));
  CHECK_THAT(q[0], WithinAbs(1.0, 1e-15));
  CHECK_THAT(q[1], WithinAbs(0.0, 1e-15));
  auto r = as_pmf(bin_type(3, 1));
  CHECK_THAT(r[0], WithinAbs(0.75, 1e-15));
}

TEST_CASE("multinomial") {
  CHECK(multinomial(bin_type(2, 2)) == 6);
  CHECK(multinomial(bin_type(4, 0)) == 1);
  CHECK(multinomial(bin_type(3, 1)) == 4);
  CHECK(multinomial(NType({"a", "b", "c"}, {2, 1, 1}, 4)) == 12);
  // C(64,32), larger than 2^60
  CHECK(multinomial(bin_type(32, 32)) == BigInt("1832624140942590534"));
}

TEST_CASE("type_class_info") {
  auto info = type_class_info(bin_type(2, 2));
  CHECK_THAT(info.log2_cardinality_exact, WithinAbs(2.584962500721156, 1e-12));
  CHECK_THAT(info.upper_bound_bits, WithinAbs(4.0, 1e-12));
  CHECK_THAT(info.lower_bound_bits, WithinAbs(4.0 - 2.0 * std::log2(5.0), 1e-12));

  CHECK_THAT(type_class_info(bin_type(7, 0)).log2_cardinality_exact, WithinAbs(0.0, 1e-15));
  CHECK_THAT(type_class_info(bin_type(3, 1)).log2_cardinality_exact, WithinAbs(2.0, 1e-12));

  SECTION("cardinality sandwich holds exhaustively, n <= 64, alphabets up to 4") {
    long violations = 0;
    for (std::uint32_t k = 2; k <= 4; ++k) {
      for (std::uint32_t n = 1; n <= 64; ++n) {
        for_each_composition(n, k, [&](const std::vector<std::uint32_t>& counts) {
          auto inf = type_class_info(NType(testutil::letters(k), counts, n));
          if (inf.lower_bound_bits > inf.log2_cardinality_exact + 1e-9 ||
              inf.log2_cardinality_exact > inf.upper_bound_bits + 1e-9) {
            ++violations;
          }
        });
      }
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("type_sequence_prob") {
  CHECK_THAT(type_sequence_prob(bin_type(2, 2), Pmf::uniform({"a", "b"})),
             WithinAbs(-4.0, 1e-12));
  CHECK_THAT(type_sequence_prob(bin_type(3, 1), Pmf({"a", "b"}, {0.75, 0.25})),
             WithinAbs(-3.2451124978365314, 1e-12));
  CHECK_THAT(type_sequence_prob(bin_type(4, 0), Pmf::uniform({"a", "b"})),
             WithinAbs(-4.0, 1e-12));
  CHECK(std::isinf(type_sequence_prob(bin_type(2, 2), Pmf({"a", "b"}, {1.0, 0.0}))));

  SECTION("equals -n (H(P) + D(P||q)) for random types") {
    Rng rng(21);
    for (int i = 0; i < 50; ++i) {
      const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.next_below(20));
      const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.next_below(3));
      std::vector<std::uint32_t> counts(k, 0);
      for (std::uint32_t j = 0; j < n; ++j) ++counts[rng.next_below(k)];
      NType t(testutil::letters(k), counts, n);
      Pmf q = testutil::random_pmf(rng, k);
      const Pmf p = as_pmf(t);
      const double expected = -static_cast<double>(n) * (entropy(p) + kl_divergence(p, q));
      CHECK_THAT(type_sequence_prob(t, q), WithinAbs(expected, 1e-12));
    }
  }

  SECTION("whole class mass at the own type is at most 1") {
    for (std::uint32_t n = 1; n <= 16; ++n) {
      for (std::uint32_t c = 0; c <= n; ++c) {
        NType t = bin_type(c, n - c);
        const double lp = type_sequence_prob(t, as_pmf(t));
        const double class_mass =
            std::exp2(lp + type_class_info(t).log2_cardinality_exact);
        CHECK(class_mass <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("quantize_to_ntype") {
  CHECK(quantize_to_ntype(testutil::binary_pmf(0.5), 4).counts == std::vector<std::uint32_t>{2, 2});
  CHECK(quantize_to_ntype(testutil::binary_pmf(0.6), 5).counts == std::vector<std::uint32_t>{3, 2});

  SECTION("(0.7,0.3), n=4 matches exhaustive search") {
    Pmf target({"a", "b"}, {0.7, 0.3});
    NType best = quantize_to_ntype(target, 4);
    double best_d = kl_divergence(as_pmf(best), target);
    for (std::uint32_t c = 0; c <= 4; ++c) {
      const double d = kl_divergence(as_pmf(bin_type(c, 4 - c)), target);
      CHECK(best_d <= d + 1e-12);
    }
  }

  SECTION("matches exhaustive divergence minimization on random targets") {
    Rng rng(22);
    for (int i = 0; i < 60; ++i) {
      const std::uint32_t k = 2 + static_cast<std::uint32_t>(rng.next_below(2));
      const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.next_below(12));
      Pmf target = testutil::random_pmf(rng, k, 0.0);
      NType greedy = quantize_to_ntype(target, n);
      const double greedy_d = kl_divergence(as_pmf(greedy), target);
      double exhaustive_d = std::numeric_limits<double>::infinity();
      for_each_composition(n, k, [&](const std::vector<std::uint32_t>& counts) {
        const double d = kl_divergence(as_pmf(NType(target.labels(), counts, n)), target);
        exhaustive_d = std::min(exhaustive_d, d);
      });
      CHECK_THAT(greedy_d, WithinAbs(exhaustive_d, 1e-12));
    }
  }

  SECTION("support of the result stays inside the target's support") {
    Pmf target({"a", "b", "c"}, {0.7, 0.3, 0.0});
    NType t = quantize_to_ntype(target, 7);
    CHECK(t.counts[2] == 0);
  }
}

TEST_CASE("enumerate_type_class") {
  using Seq = std::vector<std::uint32_t>;
  auto cls = enumerate_type_class(bin_type(1, 1), 100);
  CHECK(cls == std::vector<Seq>{{0, 1}, {1, 0}});
  CHECK(enumerate_type_class(bin_type(2, 0), 100) == std::vector<Seq>{{0, 0}});
  CHECK(enumerate_type_class(bin_type(2, 1), 100) ==
        std::vector<Seq>{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}});

  SECTION("refusal reports the exact cardinality") {
    try {
      enumerate_type_class(bin_type(10, 10), 10);
      FAIL("expected length_error");
    } catch (const std::length_error& e) {
      CHECK(std::string(e.what()).find("184756") != std::string::npos);
    }
  }
}

TEST_CASE("unrank and rank") {
  CHECK(unrank_type_sequence(bin_type(1, 1), 0) == std::vector<std::uint32_t>{0, 1});
  CHECK(unrank_type_sequence(bin_type(2, 1), 2) == std::vector<std::uint32_t>{1, 0, 0});
  CHECK(unrank_type_sequence(bin_type(2, 2), 5) == std::vector<std::uint32_t>{1, 1, 0, 0});
  CHECK_THROWS_AS(unrank_type_sequence(bin_type(2, 2), 6), std::out_of_range);

  SECTION("unrank inverts enumeration over full small classes") {
    std::vector<NType> types = {bin_type(3, 4), NType({"a", "b", "c"}, {2, 2, 1}, 5),
                                NType({"a", "b", "c", "d"}, {1, 1, 1, 1}, 4)};
    for (const auto& t : types) {
      auto cls = enumerate_type_class(t, 1000);
      for (std::uint64_t r = 0; r < cls.size(); ++r) {
        CHECK(unrank_type_sequence(t, r) == cls[r]);
        CHECK(rank_type_sequence(t, cls[r]) == r);
      }
    }
  }
}
