#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasx/channel.hpp"
#include "pasx/exponents.hpp"
#include "pasx/pmf.hpp"
#include "pasx/rng.hpp"
#include "pasx/typeclass.hpp"

namespace pasx {

enum class Setup { classical, systematic, mismatched, pas };
enum class Ensemble { iid, affine_binary };
enum class SimMode { automatic, exact, monte_carlo };

inline const char* setup_name(Setup s) {
  switch (s) {
    case Setup::classical: return "classical";
    case Setup::systematic: return "systematic";
    case Setup::mismatched: return "mismatched";
    case Setup::pas: return "pas";
  }
  return "?";
}

// Feasibility caps: code tables are materialized over all of A^n and exact
// error sums enumerate Y^n, so both index spaces must stay within 2^24.
inline constexpr double kFeasibleLogSpace = 24.0;

namespace seqs {

inline std::uint64_t pow_u64(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Mixed-radix rank with the first symbol most significant, so numeric order
/// of ranks equals lexicographic order of sequences.
inline std::uint64_t rank_of(const std::vector<std::uint32_t>& seq, std::uint32_t base) {
  std::uint64_t r = 0;
  for (std::uint32_t sym : seq) r = r * base + sym;
  return r;
}

inline std::vector<std::uint32_t> seq_of(std::uint64_t rank, std::uint32_t base,
                                         std::uint32_t n) {
  std::vector<std::uint32_t> seq(n);
  for (std::uint32_t i = n; i-- > 0;) {
    seq[i] = static_cast<std::uint32_t>(rank % base);
    rank /= base;
  }
  return seq;
}

inline bool increment(std::vector<std::uint32_t>& seq, std::uint32_t base) {
  for (std::uint32_t i = static_cast<std::uint32_t>(seq.size()); i-- > 0;) {
    if (++seq[i] < base) return true;
    seq[i] = 0;
  }
  return false;
}

}  // namespace seqs

/// A full random-code realization: one generated sequence for every message
/// sequence in A^n. The mismatched decoder searches all of A^n, so the table
/// must be total even when the source only uses a type class.
struct CodeTable {
  std::uint32_t n = 0;
  std::uint32_t a_size = 0;
  std::uint32_t s_size = 0;
  std::vector<std::uint64_t> generated;  // [a-rank] -> generated-sequence rank

  std::uint64_t messages() const { return seqs::pow_u64(a_size, n); }
};

inline void check_code_feasible(std::uint32_t n, std::uint32_t a_size) {
  if (n == 0 || a_size == 0) throw std::invalid_argument("code table: empty dimensions");
  const double bits = n * std::log2(static_cast<double>(a_size));
  if (bits > kFeasibleLogSpace + 1e-9) {
    throw std::invalid_argument("infeasible size: n*log2|A| = " + std::to_string(bits) +
                                " exceeds " + std::to_string(kFeasibleLogSpace));
  }
}

/// Fully random ensemble: every message independently gets a generated
/// sequence drawn i.i.d. from `ps` per symbol.
inline CodeTable sample_code_iid(std::uint32_t n, std::uint32_t a_size, const Pmf& ps, Rng& rng) {
  check_code_feasible(n, a_size);
  CodeTable code;
  code.n = n;
  code.a_size = a_size;
  code.s_size = static_cast<std::uint32_t>(ps.size());
  const std::uint64_t count = code.messages();
  code.generated.resize(count);
  for (std::uint64_t m = 0; m < count; ++m) {
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < n; ++i) r = r * code.s_size + sample_index(rng, ps.probs());
    code.generated[m] = r;
  }
  return code;
}

/// Affine code over GF(2): message bits (m-p per symbol) map to generated bits
/// (p per symbol) via s = G a + b with uniform random G, b. Alphabets must be
/// powers of two.
struct AffineCode {
  std::vector<std::uint64_t> g_rows;  // one mask of input bits per output bit
  std::uint64_t offset = 0;
};

inline CodeTable make_affine_code(std::uint32_t n, std::uint32_t m_bits, std::uint32_t p_bits,
                                  const AffineCode& map) {
  if (p_bits == 0 || m_bits <= p_bits) {
    throw std::invalid_argument("affine code: need m_bits > p_bits >= 1");
  }
  const std::uint32_t a_bits = m_bits - p_bits;
  const std::uint32_t in_bits = a_bits * n;
  const std::uint32_t out_bits = p_bits * n;
  if (in_bits > kFeasibleLogSpace || out_bits > 63) {
    throw std::invalid_argument("affine code: bit widths out of range");
  }
  if (map.g_rows.size() != out_bits) throw std::invalid_argument("affine code: G row count");
  CodeTable code;
  code.n = n;
  code.a_size = 1u << a_bits;
  code.s_size = 1u << p_bits;
  const std::uint64_t count = code.messages();
  code.generated.resize(count);
  for (std::uint64_t m = 0; m < count; ++m) {
    // message rank doubles as its bit representation (first symbol in the
    // most significant group), so G acts directly on ranks
    std::uint64_t s = map.offset;
    for (std::uint32_t j = 0; j < out_bits; ++j) {
      const int parity = __builtin_parityll(map.g_rows[j] & m);
      s ^= static_cast<std::uint64_t>(parity) << (out_bits - 1 - j);
    }
    code.generated[m] = s;
  }
  return code;
}

inline CodeTable sample_code_affine_binary(std::uint32_t n, std::uint32_t m_bits,
                                           std::uint32_t p_bits, Rng& rng) {
  if (p_bits == 0 || m_bits <= p_bits) {
    throw std::invalid_argument("affine code: need m_bits > p_bits >= 1");
  }
  const std::uint32_t in_bits = (m_bits - p_bits) * n;
  const std::uint32_t out_bits = p_bits * n;
  if (in_bits > kFeasibleLogSpace || out_bits > 63) {
    throw std::invalid_argument("affine code: bit widths out of range");
  }
  check_code_feasible(n, 1u << (m_bits - p_bits));
  AffineCode map;
  const std::uint64_t in_mask = (in_bits == 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << in_bits) - 1);
  const std::uint64_t out_mask = (std::uint64_t{1} << out_bits) - 1;
  map.g_rows.resize(out_bits);
  for (std::uint32_t j = 0; j < out_bits; ++j) map.g_rows[j] = rng.next_u64() & in_mask;
  map.offset = rng.next_u64() & out_mask;
  return make_affine_code(n, m_bits, p_bits, map);
}

/// Permutation of one type class, identity everywhere else. Stored at rank
/// level; sequences map through rank -> perm -> unrank.
struct TypePermuter {
  NType type;
  std::vector<std::uint32_t> perm;

  std::vector<std::uint32_t> apply(const std::vector<std::uint32_t>& seq) const {
    if (!in_type_class(type, seq)) return seq;
    const std::uint64_t r = rank_type_sequence(type, seq);
    return unrank_type_sequence(type, perm[r]);
  }

  TypePermuter inverse() const {
    TypePermuter inv{type, std::vector<std::uint32_t>(perm.size())};
    for (std::uint32_t i = 0; i < perm.size(); ++i) inv.perm[perm[i]] = i;
    return inv;
  }
};

inline std::uint64_t type_class_size_checked(const NType& t) {
  const BigInt card = multinomial(t);
  if (card > (std::uint64_t{1} << 24)) {
    throw std::length_error("type class too large to materialize: " + card.str() + " sequences");
  }
  return card.convert_to<std::uint64_t>();
}

inline TypePermuter sample_permuter(const NType& t, Rng& rng) {
  const std::uint64_t size = type_class_size_checked(t);
  TypePermuter p{t, std::vector<std::uint32_t>(size)};
  for (std::uint32_t i = 0; i < size; ++i) p.perm[i] = i;
  for (std::uint64_t i = size; i-- > 1;) {
    const std::uint64_t j = rng.next_below(i + 1);
    std::swap(p.perm[i], p.perm[j]);
  }
  return p;
}

inline TypePermuter identity_permuter(const NType& t) {
  const std::uint64_t size = type_class_size_checked(t);
  TypePermuter p{t, std::vector<std::uint32_t>(size)};
  for (std::uint32_t i = 0; i < size; ++i) p.perm[i] = i;
  return p;
}

/// Source law over message sequences: a DMS over all of A^n, or the uniform
/// law over the first `support_size` ranks of the type class T(type).
struct SourceModel {
  enum class Kind { dms, type_uniform } kind = Kind::dms;
  std::optional<Pmf> pa;
  std::optional<NType> type;
  std::uint64_t support_size = 0;

  static SourceModel dms(Pmf p) { return SourceModel{Kind::dms, std::move(p), std::nullopt, 0}; }
  static SourceModel type_uniform(NType t, std::uint64_t support) {
    return SourceModel{Kind::type_uniform, std::nullopt, std::move(t), support};
  }
};

/// Fully materialized decoding problem for one sampled code: every candidate
/// message with its transmitted word and log-prior. Built once per code; the
/// per-y argmax is then a flat scan with lexicographic tie-break.
struct Decoder {
  std::uint32_t n = 0;
  std::uint32_t x_size = 0;
  std::uint32_t y_size = 0;
  std::vector<std::uint64_t> candidates;   // message ranks, ascending
  std::vector<std::uint32_t> cand_x;       // [pos*n + i] transmitted x index
  std::vector<double> cand_logprior;       // log2 of the decoder's prior
  std::vector<double> logw;                // [x*y_size + y] log2 W
  std::vector<double> wlin;                // [x*y_size + y] W

  std::uint64_t decode(const std::vector<std::uint32_t>& y) const {
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_rank = candidates.front();
    for (std::size_t pos = 0; pos < candidates.size(); ++pos) {
      double metric = cand_logprior[pos];
      const std::uint32_t* xs = &cand_x[pos * n];
      for (std::uint32_t i = 0; i < n; ++i) metric += logw[xs[i] * y_size + y[i]];
      if (metric > best) {
        best = metric;
        best_rank = candidates[pos];
      }
    }
    return best_rank;
  }
};

namespace detail {

inline void fill_channel_tables(Decoder& dec, const Dmc& w) {
  dec.x_size = static_cast<std::uint32_t>(w.num_inputs());
  dec.y_size = static_cast<std::uint32_t>(w.num_outputs());
  dec.logw.resize(dec.x_size * dec.y_size);
  dec.wlin.resize(dec.x_size * dec.y_size);
  for (std::uint32_t x = 0; x < dec.x_size; ++x) {
    for (std::uint32_t y = 0; y < dec.y_size; ++y) {
      const double v = w.w(x, y);
      dec.wlin[x * dec.y_size + y] = v;
      dec.logw[x * dec.y_size + y] = v > 0.0 ? std::log2(v) : -std::numeric_limits<double>::infinity();
    }
  }
}

inline std::vector<double> log_pa_table(const Pmf& pa) {
  std::vector<double> lp(pa.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    lp[i] = pa[i] > 0.0 ? std::log2(pa[i]) : -std::numeric_limits<double>::infinity();
  }
  return lp;
}

// Message-rank -> permuted message-rank over all of A^n (identity off the
// type class).
inline std::vector<std::uint64_t> permuter_rank_table(const TypePermuter* perm, std::uint32_t n,
                                                      std::uint32_t a_size) {
  const std::uint64_t count = seqs::pow_u64(a_size, n);
  std::vector<std::uint64_t> table(count);
  for (std::uint64_t m = 0; m < count; ++m) table[m] = m;
  if (perm == nullptr) return table;
  const auto members = enumerate_type_class(perm->type, std::uint64_t{1} << 24);
  for (std::uint32_t r = 0; r < members.size(); ++r) {
    const std::uint64_t from = seqs::rank_of(members[r], a_size);
    const std::uint64_t to = seqs::rank_of(members[perm->perm[r]], a_size);
    table[from] = to;
  }
  return table;
}

}  // namespace detail

/// Decoder for codes mapping messages straight to channel-input words
/// (classical and mismatched setups). The prior picks the search space: a DMS
/// prior scans all of A^n, a constant-composition prior only the type class.
inline Decoder make_direct_decoder(const CodeTable& code, const SourceModel& prior,
                                   const Dmc& w) {
  if (code.s_size != w.num_inputs()) {
    throw std::invalid_argument("decoder: code output alphabet must match channel input");
  }
  Decoder dec;
  dec.n = code.n;
  detail::fill_channel_tables(dec, w);

  const std::uint64_t count = code.messages();
  if (prior.kind == SourceModel::Kind::dms) {
    const auto lp = detail::log_pa_table(*prior.pa);
    dec.candidates.resize(count);
    dec.cand_x.resize(count * code.n);
    dec.cand_logprior.resize(count);
    std::vector<std::uint32_t> a(code.n, 0);
    for (std::uint64_t m = 0; m < count; ++m) {
      dec.candidates[m] = m;
      const auto xw = seqs::seq_of(code.generated[m], code.s_size, code.n);
      double prior_bits = 0.0;
      for (std::uint32_t i = 0; i < code.n; ++i) {
        dec.cand_x[m * code.n + i] = xw[i];
        prior_bits += lp[a[i]];
      }
      dec.cand_logprior[m] = prior_bits;
      seqs::increment(a, code.a_size);
    }
  } else {
    const auto members = enumerate_type_class(*prior.type, std::uint64_t{1} << 24);
    dec.candidates.reserve(members.size());
    dec.cand_x.reserve(members.size() * code.n);
    for (const auto& seq : members) {
      const std::uint64_t m = seqs::rank_of(seq, code.a_size);
      dec.candidates.push_back(m);
      const auto xw = seqs::seq_of(code.generated[m], code.s_size, code.n);
      dec.cand_x.insert(dec.cand_x.end(), xw.begin(), xw.end());
      dec.cand_logprior.push_back(0.0);  // uniform over the class
    }
  }
  return dec;
}

/// Decoder for systematic codes: the word for message a is (phi(a), h(phi(a)))
/// on the factored input alphabet. Passing a permuter gives the combined PAS
/// decoder; nullptr gives the plain systematic one. The prior is the DMS P_A,
/// and the argmax runs over all of A^n (the mismatched search space).
inline Decoder make_systematic_decoder(const CodeTable& code, const Pmf& pa,
                                       const FactoredDmc& fd,
                                       const TypePermuter* permuter = nullptr) {
  if (code.a_size != fd.num_a() || code.s_size != fd.num_s()) {
    throw std::invalid_argument("decoder: code alphabets must match factored channel");
  }
  Decoder dec;
  dec.n = code.n;
  detail::fill_channel_tables(dec, fd.base());

  const std::uint64_t count = code.messages();
  const auto lp = detail::log_pa_table(pa);
  const auto phi = detail::permuter_rank_table(permuter, code.n, code.a_size);
  dec.candidates.resize(count);
  dec.cand_x.resize(count * code.n);
  dec.cand_logprior.resize(count);
  std::vector<std::uint32_t> a(code.n, 0);
  for (std::uint64_t m = 0; m < count; ++m) {
    dec.candidates[m] = m;
    const auto abar = seqs::seq_of(phi[m], code.a_size, code.n);
    const auto sw = seqs::seq_of(code.generated[phi[m]], code.s_size, code.n);
    double prior_bits = 0.0;
    for (std::uint32_t i = 0; i < code.n; ++i) {
      dec.cand_x[m * code.n + i] = fd.x_of(abar[i], sw[i]);
      prior_bits += lp[a[i]];
    }
    dec.cand_logprior[m] = prior_bits;
    seqs::increment(a, code.a_size);
  }
  return dec;
}

/// True MAP decoding of a single received word (classical code shape).
inline std::uint64_t map_decode(const std::vector<std::uint32_t>& y, const CodeTable& code,
                                const SourceModel& prior, const Dmc& w) {
  return make_direct_decoder(code, prior, w).decode(y);
}

/// True MAP decoding for a systematic code with DMS prior.
inline std::uint64_t map_decode(const std::vector<std::uint32_t>& y, const CodeTable& code,
                                const Pmf& pa, const FactoredDmc& fd) {
  return make_systematic_decoder(code, pa, fd, nullptr).decode(y);
}

/// Mismatched MAP decoding: i.i.d. prior P_A^n over all of A^n regardless of
/// the true source. Direct (non-systematic) code shape.
inline std::uint64_t mmap_decode(const std::vector<std::uint32_t>& y, const CodeTable& code,
                                 const Pmf& pa, const Dmc& w) {
  return make_direct_decoder(code, SourceModel::dms(pa), w).decode(y);
}

/// Mismatched MAP decoding for the combined PAS setup (systematic encoder
/// composed with a type permuter).
inline std::uint64_t mmap_decode(const std::vector<std::uint32_t>& y, const CodeTable& code,
                                 const Pmf& pa, const FactoredDmc& fd,
                                 const TypePermuter& permuter) {
  return make_systematic_decoder(code, pa, fd, &permuter).decode(y);
}

/// Simulation configuration covering the four JSCC setups. `pa` is the DMS
/// law (true source for classical/systematic, decoder assumption otherwise);
/// `ps` the parity law for systematic encoders; `px` the codeword letter law
/// for direct codes (defaults to the product P_A P_S on factored channels);
/// `pbar` the source type for the mismatched/pas setups.
struct SimConfig {
  Setup setup = Setup::systematic;
  std::uint32_t n = 2;
  std::optional<FactoredDmc> fchannel;
  std::optional<Dmc> channel;
  std::optional<Pmf> pa;
  std::optional<Pmf> ps;
  std::optional<Pmf> px;
  std::optional<NType> pbar;
  double q_support_fraction = 1.0;
  Ensemble ensemble = Ensemble::iid;
  bool permuter_enabled = true;
  std::uint32_t num_codes = 100;
  std::uint32_t trials_per_code = 0;
  SimMode mode = SimMode::automatic;
  std::uint64_t seed = 1;

  const Dmc& dmc() const {
    if (fchannel) return fchannel->base();
    if (channel) return *channel;
    throw std::invalid_argument("SimConfig: no channel configured");
  }
};

struct SimReport {
  Setup setup = Setup::systematic;
  std::uint32_t n = 0;
  bool exact_mode = false;
  std::uint64_t trials = 0;   // code draws (exact) or total transmissions (mc)
  double errors = 0.0;        // error mass; fractional in exact mode
  double p_hat = 0.0;
  double ci_99_upper = 0.0;
  double analytic_exponent = 0.0;  // bits, raw (negative = vacuous bound)
  double rho_star = 0.0;
  double analytic_bound = 0.0;     // 2^{-n E}
  bool bound_vacuous = false;
  bool verdict = false;
};

/// Wilson score interval, upper end, 99% two-sided.
inline double wilson_upper_99(double p_hat, double trials) {
  constexpr double z = 2.5758293035489004;
  const double z2 = z * z;
  const double center = p_hat + z2 / (2.0 * trials);
  const double radius = z * std::sqrt(p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials * trials));
  const double upper = (center + radius) / (1.0 + z2 / trials);
  return upper < 1.0 ? upper : 1.0;
}

namespace detail {

struct SourceItem {
  std::uint64_t rank = 0;
  double weight = 0.0;
};

inline std::uint64_t resolved_support_size(const NType& t, double fraction) {
  const std::uint64_t full = type_class_size_checked(t);
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw std::invalid_argument("q_support_fraction must lie in (0,1]");
  }
  const auto k = static_cast<std::uint64_t>(
      std::floor(fraction * static_cast<double>(full) + 1e-9));
  return k > 0 ? k : 1;
}

inline std::vector<SourceItem> build_sources(const SimConfig& cfg) {
  std::vector<SourceItem> src;
  if (cfg.setup == Setup::classical || cfg.setup == Setup::systematic) {
    const Pmf& pa = *cfg.pa;
    const auto a_size = static_cast<std::uint32_t>(pa.size());
    const std::uint64_t count = seqs::pow_u64(a_size, cfg.n);
    src.resize(count);
    std::vector<std::uint32_t> a(cfg.n, 0);
    for (std::uint64_t m = 0; m < count; ++m) {
      double wgt = 1.0;
      for (std::uint32_t i = 0; i < cfg.n; ++i) wgt *= pa[a[i]];
      src[m] = SourceItem{m, wgt};
      seqs::increment(a, a_size);
    }
  } else {
    const NType& t = *cfg.pbar;
    const std::uint64_t k = resolved_support_size(t, cfg.q_support_fraction);
    const auto a_size = static_cast<std::uint32_t>(cfg.pa->size());
    src.resize(k);
    for (std::uint64_t j = 0; j < k; ++j) {
      const auto seq = unrank_type_sequence(t, j);
      src[j] = SourceItem{seqs::rank_of(seq, a_size), 1.0 / static_cast<double>(k)};
    }
  }
  return src;
}

inline Decoder build_decoder(const SimConfig& cfg, const CodeTable& code,
                             const TypePermuter* permuter) {
  switch (cfg.setup) {
    case Setup::classical:
      return make_direct_decoder(code, SourceModel::dms(*cfg.pa), cfg.dmc());
    case Setup::mismatched:
      return make_direct_decoder(code, SourceModel::dms(*cfg.pa), cfg.dmc());
    case Setup::systematic:
      return make_systematic_decoder(code, *cfg.pa, *cfg.fchannel, nullptr);
    case Setup::pas:
      return make_systematic_decoder(code, *cfg.pa, *cfg.fchannel, permuter);
  }
  throw std::logic_error("unreachable");
}

}  // namespace detail

/// Exact block error probability of one fixed code (and permuter, for the pas
/// setup) by full enumeration of Y^n. Deterministic.
inline double exact_error_probability(const CodeTable& code, const TypePermuter* permuter,
                                      const SimConfig& cfg) {
  const Dmc& w = cfg.dmc();
  const double ybits = cfg.n * std::log2(static_cast<double>(w.num_outputs()));
  if (ybits > kFeasibleLogSpace + 1e-9) {
    throw std::invalid_argument("infeasible size: n*log2|Y| = " + std::to_string(ybits) +
                                " exceeds " + std::to_string(kFeasibleLogSpace));
  }
  const Decoder dec = detail::build_decoder(cfg, code, permuter);
  const auto sources = detail::build_sources(cfg);

  // position of each source message in the decoder's candidate arrays;
  // candidates are ranks in ascending order, so direct indexing works when
  // the search space is all of A^n (true for every setup here)
  double err = 0.0;
  std::vector<std::uint32_t> y(cfg.n, 0);
  do {
    const std::uint64_t decoded = dec.decode(y);
    for (const auto& src : sources) {
      if (src.rank == decoded) continue;
      const std::uint32_t* xs = &dec.cand_x[src.rank * cfg.n];
      double p = src.weight;
      for (std::uint32_t i = 0; i < cfg.n; ++i) p *= dec.wlin[xs[i] * dec.y_size + y[i]];
      err += p;
    }
  } while (seqs::increment(y, dec.y_size));
  return err;
}

namespace detail {

inline std::uint64_t sample_source_rank(const SimConfig& cfg, Rng& rng) {
  const auto a_size = static_cast<std::uint32_t>(cfg.pa->size());
  if (cfg.setup == Setup::classical || cfg.setup == Setup::systematic) {
    std::uint64_t r = 0;
    for (std::uint32_t i = 0; i < cfg.n; ++i) r = r * a_size + sample_index(rng, cfg.pa->probs());
    return r;
  }
  const std::uint64_t k = resolved_support_size(*cfg.pbar, cfg.q_support_fraction);
  const std::uint64_t j = rng.next_below(k);
  return seqs::rank_of(unrank_type_sequence(*cfg.pbar, j), a_size);
}

inline ExponentResult setup_exponent(const SimConfig& cfg) {
  switch (cfg.setup) {
    case Setup::classical: {
      const Pmf px = cfg.px ? *cfg.px : product_input(*cfg.pa, *cfg.ps, *cfg.fchannel);
      const Pmf pa = *cfg.pa;
      return exponent_eg(px, cfg.dmc(), [pa](double alpha) { return renyi_entropy(alpha, pa); });
    }
    case Setup::systematic:
      return exponent_es(*cfg.pa, *cfg.ps, *cfg.fchannel);
    case Setup::mismatched: {
      const Pmf px = cfg.px ? *cfg.px : product_input(*cfg.pa, *cfg.ps, *cfg.fchannel);
      return exponent_em(as_pmf(*cfg.pbar), *cfg.pa, px, cfg.dmc());
    }
    case Setup::pas:
      return exponent_esm(cfg.n, as_pmf(*cfg.pbar), *cfg.pa, *cfg.ps, *cfg.fchannel);
  }
  throw std::logic_error("unreachable");
}

inline void validate_config(const SimConfig& cfg) {
  if (!cfg.pa) throw std::invalid_argument("SimConfig: pa required");
  check_code_feasible(cfg.n, static_cast<std::uint32_t>(cfg.pa->size()));
  const bool systematic_shape = cfg.setup == Setup::systematic || cfg.setup == Setup::pas;
  if (systematic_shape) {
    if (!cfg.fchannel) throw std::invalid_argument("SimConfig: setup needs a factored channel");
    if (!cfg.ps) throw std::invalid_argument("SimConfig: setup needs ps");
    if (cfg.pa->labels() != cfg.fchannel->a_labels() ||
        cfg.ps->labels() != cfg.fchannel->s_labels()) {
      throw std::invalid_argument("SimConfig: pa/ps alphabets must match the channel");
    }
  } else {
    const bool can_default_px = cfg.fchannel && cfg.ps &&
                                cfg.pa->labels() == cfg.fchannel->a_labels() &&
                                cfg.ps->labels() == cfg.fchannel->s_labels();
    if (!cfg.px && !can_default_px) {
      throw std::invalid_argument(
          "SimConfig: px required unless the channel is factored and pa/ps match it");
    }
    if (cfg.px && cfg.px->labels() != cfg.dmc().input_labels()) {
      throw std::invalid_argument("SimConfig: px alphabet must match the channel input");
    }
  }
  if (cfg.setup == Setup::mismatched || cfg.setup == Setup::pas) {
    if (!cfg.pbar) throw std::invalid_argument("SimConfig: setup needs pbar");
    if (cfg.pbar->n != cfg.n) throw std::invalid_argument("SimConfig: pbar must be an n-type");
    if (cfg.pbar->alphabet != cfg.pa->labels()) {
      throw std::invalid_argument("SimConfig: pbar alphabet must match pa");
    }
    if (std::isinf(kl_divergence(as_pmf(*cfg.pbar), *cfg.pa))) {
      throw std::invalid_argument("SimConfig: precondition P_A >> P_bar violated");
    }
  }
  if (cfg.num_codes == 0) throw std::invalid_argument("SimConfig: num_codes must be positive");
}

}  // namespace detail

/// Average the error probability of `num_codes` sampled codes (and permuters,
/// when enabled) and compare against the analytic bound 2^{-n E} for the
/// setup's exponent. Per-code randomness is keyed by (seed, code index) and
/// per-trial randomness by (seed, code index, trial index), so results do not
/// depend on scheduling.
inline SimReport run_ensemble_experiment(const SimConfig& cfg) {
  detail::validate_config(cfg);
  const Dmc& w = cfg.dmc();

  const double ybits = cfg.n * std::log2(static_cast<double>(w.num_outputs()));
  bool exact = false;
  if (cfg.mode == SimMode::exact) {
    if (ybits > kFeasibleLogSpace + 1e-9) {
      throw std::invalid_argument("infeasible size: n*log2|Y| = " + std::to_string(ybits) +
                                  " exceeds " + std::to_string(kFeasibleLogSpace));
    }
    exact = true;
  } else if (cfg.mode == SimMode::automatic) {
    exact = ybits <= kFeasibleLogSpace + 1e-9;
  }
  if (!exact && cfg.trials_per_code == 0) {
    throw std::invalid_argument("SimConfig: trials_per_code must be positive in Monte Carlo mode");
  }

  const ExponentResult er = detail::setup_exponent(cfg);

  const bool systematic_shape = cfg.setup == Setup::systematic || cfg.setup == Setup::pas;
  const auto a_size = static_cast<std::uint32_t>(cfg.pa->size());
  const Pmf letter_law = systematic_shape
                             ? *cfg.ps
                             : (cfg.px ? *cfg.px : product_input(*cfg.pa, *cfg.ps, *cfg.fchannel));

  constexpr std::uint64_t kCodeTag = 1, kPermTag = 2, kTrialTag = 3;
  double error_mass = 0.0;
  std::uint64_t trials = 0;

  for (std::uint32_t c = 0; c < cfg.num_codes; ++c) {
    Rng code_rng = derive_rng(cfg.seed, kCodeTag, c);
    CodeTable code;
    if (cfg.ensemble == Ensemble::iid) {
      code = sample_code_iid(cfg.n, a_size, letter_law, code_rng);
    } else {
      const double a_bits = std::log2(static_cast<double>(a_size));
      const double s_bits = std::log2(static_cast<double>(letter_law.size()));
      if (a_bits != std::floor(a_bits) || s_bits != std::floor(s_bits)) {
        throw std::invalid_argument("affine ensemble: alphabet sizes must be powers of two");
      }
      code = sample_code_affine_binary(
          cfg.n, static_cast<std::uint32_t>(a_bits + s_bits),
          static_cast<std::uint32_t>(s_bits), code_rng);
    }

    std::optional<TypePermuter> permuter;
    if (cfg.setup == Setup::pas) {
      if (cfg.permuter_enabled) {
        Rng perm_rng = derive_rng(cfg.seed, kPermTag, c);
        permuter = sample_permuter(*cfg.pbar, perm_rng);
      } else {
        permuter = identity_permuter(*cfg.pbar);
      }
    }

    if (exact) {
      error_mass += exact_error_probability(code, permuter ? &*permuter : nullptr, cfg);
      trials += 1;
    } else {
      const Decoder dec = detail::build_decoder(cfg, code, permuter ? &*permuter : nullptr);
      std::vector<double> row(dec.y_size);
      for (std::uint32_t t = 0; t < cfg.trials_per_code; ++t) {
        Rng trial_rng = derive_rng(cfg.seed, kTrialTag, c, t);
        const std::uint64_t msg = detail::sample_source_rank(cfg, trial_rng);
        std::vector<std::uint32_t> y(cfg.n);
        const std::uint32_t* xs = &dec.cand_x[msg * cfg.n];
        for (std::uint32_t i = 0; i < cfg.n; ++i) {
          for (std::uint32_t yy = 0; yy < dec.y_size; ++yy) {
            row[yy] = dec.wlin[xs[i] * dec.y_size + yy];
          }
          y[i] = sample_index(trial_rng, row);
        }
        if (dec.decode(y) != msg) error_mass += 1.0;
        trials += 1;
      }
    }
  }

  SimReport report;
  report.setup = cfg.setup;
  report.n = cfg.n;
  report.exact_mode = exact;
  report.trials = trials;
  report.errors = error_mass;
  report.p_hat = error_mass / static_cast<double>(trials);
  report.ci_99_upper = wilson_upper_99(report.p_hat, static_cast<double>(trials));
  report.analytic_exponent = er.exponent;
  report.rho_star = er.rho_star;
  report.analytic_bound = std::exp2(-static_cast<double>(cfg.n) * er.exponent);
  report.bound_vacuous = report.analytic_bound >= 1.0;
  report.verdict = report.ci_99_upper <= report.analytic_bound ||
                   (exact && report.p_hat <= report.analytic_bound);
  return report;
}

/// One CSV row per configuration; header provided for fresh files.
inline std::string sim_report_csv_header() {
  return "setup,n,exponent_bits,bound,p_exact_or_hat,ci_upper,verdict\n";
}

inline std::string sim_report_csv_row(const SimReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%u,%.12g,%.12g,%.12g,%.12g,%s\n", setup_name(r.setup), r.n,
                r.analytic_exponent, r.analytic_bound, r.p_hat, r.ci_99_upper,
                r.verdict ? "true" : "false");
  return buf;
}

}  // namespace pasx
