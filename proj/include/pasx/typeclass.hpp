#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pasx/pmf.hpp"

namespace pasx {

using BigInt = boost::multiprecision::cpp_int;

/// An n-type: a distribution whose entries are integer multiples of 1/n,
/// stored as symbol counts over a labeled alphabet.
struct NType {
  std::vector<std::string> alphabet;
  std::vector<std::uint32_t> counts;
  std::uint32_t n = 0;

  NType(std::vector<std::string> alphabet_, std::vector<std::uint32_t> counts_,
        std::uint32_t n_)
      : alphabet(std::move(alphabet_)), counts(std::move(counts_)), n(n_) {
    if (alphabet.empty() || alphabet.size() != counts.size()) {
      throw std::invalid_argument("NType: alphabet and counts must have equal length >= 1");
    }
    if (n == 0) throw std::invalid_argument("NType: n must be positive");
    std::uint64_t total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    if (total != n) throw std::invalid_argument("NType: counts must sum to n");
  }
};

struct TypeClassInfo {
  double log2_cardinality_exact = 0.0;
  double lower_bound_bits = 0.0;
  double upper_bound_bits = 0.0;
};

/// Exact multinomial coefficient n! / prod(counts_i!).
inline BigInt multinomial(const std::vector<std::uint32_t>& counts) {
  BigInt result = 1;
  std::uint64_t placed = 0;
  for (std::uint32_t c : counts) {
    // multiply by C(placed + c, c), kept integral one factor at a time
    for (std::uint32_t j = 1; j <= c; ++j) {
      ++placed;
      result *= placed;
      result /= j;
    }
  }
  return result;
}

inline BigInt multinomial(const NType& t) { return multinomial(t.counts); }

inline double log2_bigint(const BigInt& v) {
  if (v <= 0) throw std::domain_error("log2_bigint: value must be positive");
  // cpp_int converts exactly enough for log2 up to the double range;
  // fall back to msb scaling for larger values.
  if (boost::multiprecision::msb(v) < 1000) {
    return std::log2(v.convert_to<double>());
  }
  const unsigned shift = boost::multiprecision::msb(v) - 500;
  BigInt scaled = v >> shift;
  return std::log2(scaled.convert_to<double>()) + static_cast<double>(shift);
}

inline Pmf as_pmf(const NType& t) {
  std::vector<double> p(t.counts.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = static_cast<double>(t.counts[i]) / static_cast<double>(t.n);
  }
  return Pmf(t.alphabet, std::move(p));
}

/// Exact log2 |T(P)| together with the standard sandwich
///   n H(P) - |Z| log2(n+1) <= log2 |T(P)| <= n H(P).
inline TypeClassInfo type_class_info(const NType& t) {
  TypeClassInfo info;
  info.log2_cardinality_exact = log2_bigint(multinomial(t));
  const double nh = static_cast<double>(t.n) * entropy(as_pmf(t));
  info.upper_bound_bits = nh;
  info.lower_bound_bits =
      nh - static_cast<double>(t.alphabet.size()) * std::log2(static_cast<double>(t.n) + 1.0);
  return info;
}

/// log2 of the i.i.d.-q probability of any single sequence of type t:
///   log2 q^n(z^n) = sum_i counts_i log2 q_i = -n (H(P) + D(P||q)).
/// Returns -infinity when some counted symbol has q-probability 0.
inline double type_sequence_prob(const NType& t, const Pmf& q) {
  if (t.alphabet != q.labels()) {
    throw std::invalid_argument("type_sequence_prob: alphabet mismatch");
  }
  double lp = 0.0;
  for (std::size_t i = 0; i < t.counts.size(); ++i) {
    if (t.counts[i] == 0) continue;
    if (q[i] <= 0.0) return -std::numeric_limits<double>::infinity();
    lp += static_cast<double>(t.counts[i]) * std::log2(q[i]);
  }
  return lp;
}

namespace detail {
// Increase in n*D(P||target) (up to the constant -log2(n*t_j) scaling) when
// count j goes from c to c+1; used by the greedy quantizer.
inline double quantizer_step_cost(std::uint32_t c, double n_times_target) {
  const double c1 = static_cast<double>(c) + 1.0;
  double delta = c1 * std::log2(c1);
  if (c > 0) delta -= static_cast<double>(c) * std::log2(static_cast<double>(c));
  return delta - std::log2(n_times_target);
}
}  // namespace detail

/// Deterministic n-type approximation of `target` minimizing D(P_bar||target).
/// All n counts are handed out one at a time to the symbol with the smallest
/// marginal increase of n*D = sum_i c_i log2(c_i/(n t_i)), lowest index on
/// ties. Each symbol's marginal cost is increasing in its count (x log x is
/// convex), so this incremental allocation attains the exact integer optimum.
/// Starting from floor(n*t_i) instead would not: the optimum can sit below a
/// floor (e.g. target (0.1,0.1,0.8) at n=5 wants counts (1,1,3), not 4 for
/// the dominant symbol).
inline NType quantize_to_ntype(const Pmf& target, std::uint32_t n) {
  if (n == 0) throw std::invalid_argument("quantize_to_ntype: n must be positive");
  const std::size_t k = target.size();
  std::vector<std::uint32_t> counts(k, 0);
  for (std::uint32_t step = 0; step < n; ++step) {
    std::size_t best = k;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      if (target[i] <= 0.0) continue;  // keep supp(P_bar) inside supp(target)
      const double cost =
          detail::quantizer_step_cost(counts[i], static_cast<double>(n) * target[i]);
      if (cost < best_cost) {
        best_cost = cost;
        best = i;
      }
    }
    ++counts[best];
  }
  return NType(target.labels(), std::move(counts), n);
}

/// All sequences of type t (as symbol indices) in lexicographic order of the
/// declared alphabet. Refuses when the class is larger than max_count,
/// reporting the exact cardinality.
inline std::vector<std::vector<std::uint32_t>> enumerate_type_class(const NType& t,
                                                                    std::uint64_t max_count) {
  const BigInt card = multinomial(t);
  if (card > max_count) {
    throw std::length_error("enumerate_type_class: type class has " + card.str() +
                            " sequences, exceeding max_count " + std::to_string(max_count));
  }
  std::vector<std::uint32_t> seq;
  seq.reserve(t.n);
  for (std::uint32_t sym = 0; sym < t.counts.size(); ++sym) {
    seq.insert(seq.end(), t.counts[sym], sym);
  }
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(card.convert_to<std::uint64_t>());
  do {
    out.push_back(seq);
  } while (std::next_permutation(seq.begin(), seq.end()));
  return out;
}

/// rank-th sequence (0-based) of T(t) in lexicographic order.
inline std::vector<std::uint32_t> unrank_type_sequence(const NType& t, std::uint64_t rank) {
  BigInt remaining = multinomial(t);
  if (rank >= remaining) {
    throw std::out_of_range("unrank_type_sequence: rank out of range");
  }
  BigInt r = rank;
  std::vector<std::uint32_t> counts = t.counts;
  std::vector<std::uint32_t> seq(t.n);
  for (std::uint32_t pos = 0; pos < t.n; ++pos) {
    const std::uint32_t left = t.n - pos;
    for (std::uint32_t sym = 0; sym < counts.size(); ++sym) {
      if (counts[sym] == 0) continue;
      // number of completions starting with sym
      BigInt block = remaining * counts[sym] / left;
      if (r < block) {
        seq[pos] = sym;
        --counts[sym];
        remaining = block;
        break;
      }
      r -= block;
    }
  }
  return seq;
}

/// Lexicographic rank of a sequence within T(t); inverse of
/// unrank_type_sequence.
inline std::uint64_t rank_type_sequence(const NType& t, const std::vector<std::uint32_t>& seq) {
  if (seq.size() != t.n) throw std::invalid_argument("rank_type_sequence: wrong length");
  BigInt remaining = multinomial(t);
  BigInt r = 0;
  std::vector<std::uint32_t> counts = t.counts;
  for (std::uint32_t pos = 0; pos < t.n; ++pos) {
    const std::uint32_t left = t.n - pos;
    const std::uint32_t sym = seq[pos];
    if (sym >= counts.size() || counts[sym] == 0) {
      throw std::invalid_argument("rank_type_sequence: sequence not in type class");
    }
    for (std::uint32_t s = 0; s < sym; ++s) {
      if (counts[s] > 0) r += remaining * counts[s] / left;
    }
    remaining = remaining * counts[sym] / left;
    --counts[sym];
  }
  return r.convert_to<std::uint64_t>();
}

/// Empirical counts of a sequence; true when it belongs to T(t).
inline bool in_type_class(const NType& t, const std::vector<std::uint32_t>& seq) {
  if (seq.size() != t.n) return false;
  std::vector<std::uint32_t> counts(t.counts.size(), 0);
  for (std::uint32_t sym : seq) {
    if (sym >= counts.size()) return false;
    ++counts[sym];
  }
  return counts == t.counts;
}

}  // namespace pasx
