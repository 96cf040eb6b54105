#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasx/channel.hpp"
#include "pasx/pmf.hpp"

namespace pasx {

/// Sampled integrand over the rho grid used by the maximizer.
struct RhoCurve {
  std::vector<double> rho_values;
  std::vector<double> integrand_values;  // bits
};

/// Result of maximizing a random-coding integrand over rho in [0,1].
/// `exponent` is the raw maximum; it can be negative (the bound 2^{-nE} is
/// then vacuous), which is surfaced rather than hidden.
struct ExponentResult {
  double exponent = 0.0;
  double exponent_clamped = 0.0;
  double rho_star = 0.0;
  bool vacuous = false;  // exponent <= 0: the error bound carries no information
  RhoCurve curve;
};

struct RateThresholds {
  double mutual_info = 0.0;
  double penalty = 0.0;
  double rate_limit = 0.0;  // mutual_info - penalty, possibly negative
  double rate_limit_clamped = 0.0;
  bool vacuous = false;
};

/// Rate report for the systematic setup, including the equivalent redundancy
/// condition H(S) > H(X|Y).
struct SystematicRateInfo {
  RateThresholds thresholds;
  double source_entropy = 0.0;        // H(A)
  double redundancy = 0.0;            // H(S)
  double channel_uncertainty = 0.0;   // H(X|Y)
  bool redundancy_exceeds_uncertainty = false;
};

namespace detail {
inline void check_rho(double rho) {
  // The pointwise formulas are well defined slightly left of 0; tests probe
  // there with central finite differences.
  if (!(rho > -0.5) || !(rho <= 1.0)) {
    throw std::invalid_argument("rho must lie in [0,1] (off-grid probes limited to (-0.5,1])");
  }
}
}  // namespace detail

/// Gallager's E_0 in bits:
///   -log2 sum_y { sum_x P_X(x) W(y|x)^(1/(1+rho)) }^(1+rho).
inline double gallager_e0(double rho, const Pmf& px, const Dmc& w) {
  detail::check_rho(rho);
  if (px.labels() != w.input_labels()) {
    throw std::invalid_argument("gallager_e0: alphabet mismatch");
  }
  const double beta = 1.0 / (1.0 + rho);
  double outer = 0.0;
  for (std::size_t y = 0; y < w.num_outputs(); ++y) {
    double inner = 0.0;
    for (std::size_t x = 0; x < w.num_inputs(); ++x) {
      const double wxy = w.w(x, y);
      if (px[x] > 0.0 && wxy > 0.0) inner += px[x] * std::pow(wxy, beta);
    }
    if (inner > 0.0) outer += std::pow(inner, 1.0 + rho);
  }
  return -std::log2(outer);
}

/// Coarse grid (step 1/256) followed by golden-section refinement around the
/// best bracket, to |delta rho| < 1e-6. Assumes a unimodal integrand; the
/// grid pass guards the refinement against spurious local maxima.
inline ExponentResult maximize_over_rho(const std::function<double(double)>& integrand) {
  constexpr int kGridSteps = 256;
  constexpr double kRhoResolution = 1e-6;

  ExponentResult res;
  res.curve.rho_values.resize(kGridSteps + 1);
  res.curve.integrand_values.resize(kGridSteps + 1);
  int best = 0;
  for (int i = 0; i <= kGridSteps; ++i) {
    const double rho = static_cast<double>(i) / kGridSteps;
    const double v = integrand(rho);
    res.curve.rho_values[i] = rho;
    res.curve.integrand_values[i] = v;
    if (v > res.curve.integrand_values[best]) best = i;
  }

  double lo = res.curve.rho_values[best > 0 ? best - 1 : 0];
  double hi = res.curve.rho_values[best < kGridSteps ? best + 1 : kGridSteps];
  double best_rho = res.curve.rho_values[best];
  double best_val = res.curve.integrand_values[best];

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = integrand(c), fd = integrand(d);
  while (b - a > kRhoResolution) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = integrand(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = integrand(d);
    }
  }
  const double refined_rho = fc > fd ? c : d;
  const double refined_val = fc > fd ? fc : fd;
  if (refined_val > best_val) {
    best_val = refined_val;
    best_rho = refined_rho;
  }

  res.exponent = best_val;
  res.rho_star = best_rho;
  res.exponent_clamped = best_val > 0.0 ? best_val : 0.0;
  res.vacuous = !(best_val > 0.0);
  return res;
}

/// E_G integrand: E_0(rho, P_X) - rho * (1/n) H_{1/(1+rho)}(Q_n).
/// per_symbol_renyi maps the order alpha to the per-symbol Renyi entropy of
/// the source; for a DMS P_A that is simply H_alpha(P_A).
inline double exponent_eg_integrand(double rho, const Pmf& px, const Dmc& w,
                                    const std::function<double(double)>& per_symbol_renyi) {
  const double e0 = gallager_e0(rho, px, w);
  if (rho == 0.0) return e0;
  return e0 - rho * per_symbol_renyi(1.0 / (1.0 + rho));
}

inline ExponentResult exponent_eg(const Pmf& px, const Dmc& w,
                                  const std::function<double(double)>& per_symbol_renyi) {
  return maximize_over_rho(
      [&](double rho) { return exponent_eg_integrand(rho, px, w, per_symbol_renyi); });
}

/// Systematic-encoding integrand:
///   -log2 sum_y { sum_{a,s} P_S(s) [P_A(a) W(y|(a,s))]^(1/(1+rho)) }^(1+rho).
inline double exponent_es_integrand(double rho, const Pmf& pa, const Pmf& ps,
                                    const FactoredDmc& fd) {
  detail::check_rho(rho);
  if (pa.labels() != fd.a_labels() || ps.labels() != fd.s_labels()) {
    throw std::invalid_argument("exponent_es_integrand: alphabet mismatch");
  }
  const double beta = 1.0 / (1.0 + rho);
  double outer = 0.0;
  for (std::size_t y = 0; y < fd.base().num_outputs(); ++y) {
    double inner = 0.0;
    for (std::size_t a = 0; a < fd.num_a(); ++a) {
      if (pa[a] <= 0.0) continue;
      for (std::size_t s = 0; s < fd.num_s(); ++s) {
        const double wy = fd.w_as(a, s, y);
        if (ps[s] > 0.0 && wy > 0.0) inner += ps[s] * std::pow(pa[a] * wy, beta);
      }
    }
    if (inner > 0.0) outer += std::pow(inner, 1.0 + rho);
  }
  return -std::log2(outer);
}

inline ExponentResult exponent_es(const Pmf& pa, const Pmf& ps, const FactoredDmc& fd) {
  return maximize_over_rho([&](double rho) { return exponent_es_integrand(rho, pa, ps, fd); });
}

/// Mismatched-decoding integrand:
///   E_0(rho, P_X) - rho/(1+rho) (D(P_bar||P_A) + H(P_bar))
///                 - rho^2/(1+rho) H_{1/(1+rho)}(P_A).
/// Requires supp(P_bar) within supp(P_A); otherwise the decoder metric is
/// identically zero on the message set and the bound is meaningless.
inline double exponent_em_integrand(double rho, const Pmf& pbar, const Pmf& pa, const Pmf& px,
                                    const Dmc& w) {
  detail::check_rho(rho);
  const double d = kl_divergence(pbar, pa);
  if (std::isinf(d)) {
    throw std::invalid_argument(
        "exponent_em: precondition P_A >> P_bar violated (supp(P_bar) not in supp(P_A))");
  }
  const double e0 = gallager_e0(rho, px, w);
  if (rho == 0.0) return e0;
  const double src = (rho / (1.0 + rho)) * (d + entropy(pbar));
  const double renyi = (rho * rho / (1.0 + rho)) * renyi_entropy(1.0 / (1.0 + rho), pa);
  return e0 - src - renyi;
}

inline ExponentResult exponent_em(const Pmf& pbar, const Pmf& pa, const Pmf& px, const Dmc& w) {
  return maximize_over_rho(
      [&](double rho) { return exponent_em_integrand(rho, pbar, pa, px, w); });
}

/// Finite-n penalty of the type-permuter argument: |A| log2(n+1) / n.
inline double alpha_n(std::uint32_t n, std::size_t a_size) {
  return static_cast<double>(a_size) * std::log2(static_cast<double>(n) + 1.0) /
         static_cast<double>(n);
}

/// Combined systematic + mismatched integrand:
///   es_integrand(rho) - alpha(n) - D(P_bar||P_A).
inline double exponent_esm_integrand(double rho, std::uint32_t n, const Pmf& pbar, const Pmf& pa,
                                     const Pmf& ps, const FactoredDmc& fd) {
  const double d = kl_divergence(pbar, pa);
  if (std::isinf(d)) {
    throw std::invalid_argument(
        "exponent_esm: precondition P_A >> P_bar violated (supp(P_bar) not in supp(P_A))");
  }
  return exponent_es_integrand(rho, pa, ps, fd) - alpha_n(n, fd.num_a()) - d;
}

inline ExponentResult exponent_esm(std::uint32_t n, const Pmf& pbar, const Pmf& pa, const Pmf& ps,
                                   const FactoredDmc& fd) {
  if (n == 0) throw std::invalid_argument("exponent_esm: n must be positive");
  return maximize_over_rho(
      [&](double rho) { return exponent_esm_integrand(rho, n, pbar, pa, ps, fd); });
}

inline RateThresholds make_rate_thresholds(double mi, double penalty) {
  RateThresholds t;
  t.mutual_info = mi;
  t.penalty = penalty;
  t.rate_limit = mi - penalty;
  t.rate_limit_clamped = t.rate_limit > 0.0 ? t.rate_limit : 0.0;
  t.vacuous = !(t.rate_limit > 0.0);
  return t;
}

/// Achievable-rate report for the systematic setup: any R < I(X;Y) under
/// P_X = P_A P_S, equivalently H(S) > H(X|Y).
inline SystematicRateInfo rate_thresholds_es(const Pmf& pa, const Pmf& ps,
                                             const FactoredDmc& fd) {
  SystematicRateInfo info;
  const Pmf px = product_input(pa, ps, fd);
  const double mi = mutual_information(px, fd.base());
  info.thresholds = make_rate_thresholds(mi, 0.0);
  info.source_entropy = entropy(pa);
  info.redundancy = entropy(ps);
  info.channel_uncertainty = entropy(px) - mi;  // H(X|Y) = H(X) - I(X;Y)
  info.redundancy_exceeds_uncertainty = info.redundancy > info.channel_uncertainty;
  return info;
}

/// Achievable-rate report for the mismatched setup: any R below
/// I(X;Y) - D(P_bar||P_A).
inline RateThresholds rate_thresholds_em(const Pmf& pbar, const Pmf& pa, const Pmf& px,
                                         const Dmc& w) {
  const double d = kl_divergence(pbar, pa);
  if (std::isinf(d)) {
    throw std::invalid_argument(
        "rate_thresholds_em: precondition P_A >> P_bar violated");
  }
  return make_rate_thresholds(mutual_information(px, w), d);
}

/// CSV with mandatory header, 12 significant digits.
inline std::string curve_to_csv(const RhoCurve& curve) {
  std::string out = "rho,integrand_bits\n";
  char buf[64];
  for (std::size_t i = 0; i < curve.rho_values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g\n", curve.rho_values[i],
                  curve.integrand_values[i]);
    out += buf;
  }
  return out;
}

inline RhoCurve curve_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != "rho,integrand_bits") {
    throw std::invalid_argument("curve_from_csv: missing header row");
  }
  RhoCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("curve_from_csv: malformed row");
    curve.rho_values.push_back(std::stod(line.substr(0, comma)));
    curve.integrand_values.push_back(std::stod(line.substr(comma + 1)));
  }
  return curve;
}

}  // namespace pasx
