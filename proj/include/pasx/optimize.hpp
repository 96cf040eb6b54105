#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pasx/channel.hpp"
#include "pasx/pmf.hpp"
#include "pasx/rng.hpp"
#include "pasx/typeclass.hpp"

namespace pasx {

struct CapacityResult {
  double capacity = 0.0;  // bits; lower bound, within `gap` of the true value
  Pmf px_star;
  int iterations = 0;
  double gap = 0.0;  // duality-gap bound at termination
  std::vector<double> history;  // per-iteration lower bounds, monotone
};

struct ProductOptResult {
  double mi = 0.0;  // bits
  Pmf pa_star;
  Pmf ps_star;
  bool converged = false;
};

/// Blahut-Arimoto. Alternates the posterior and input updates; terminates when
/// max_x D(W_x || P_Y) - I(r) < tol, which sandwiches the capacity.
inline CapacityResult blahut_arimoto(const Dmc& w, double tol = 1e-9, int max_iter = 10000) {
  if (!(tol > 0.0)) throw std::invalid_argument("blahut_arimoto: tol must be > 0");
  const std::size_t nx = w.num_inputs(), ny = w.num_outputs();
  std::vector<double> r(nx, 1.0 / static_cast<double>(nx));
  std::vector<double> d(nx, 0.0);  // D(W(.|x) || P_Y) in bits

  CapacityResult res{0.0, Pmf::uniform(w.input_labels()), 0, 0.0, {}};
  for (int iter = 1; iter <= max_iter; ++iter) {
    std::vector<double> py(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      for (std::size_t y = 0; y < ny; ++y) py[y] += r[x] * w.w(x, y);
    }
    double lower = 0.0, upper = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < nx; ++x) {
      double dx = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        const double wxy = w.w(x, y);
        if (wxy > 0.0 && py[y] > 0.0) dx += wxy * std::log2(wxy / py[y]);
      }
      d[x] = dx;
      lower += r[x] * dx;
      if (dx > upper) upper = dx;
    }
    res.capacity = lower;
    res.iterations = iter;
    res.gap = upper - lower;
    res.history.push_back(lower);
    if (res.gap < tol) break;

    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      r[x] *= std::exp2(d[x]);
      z += r[x];
    }
    for (std::size_t x = 0; x < nx; ++x) r[x] /= z;
  }
  res.px_star = Pmf(w.input_labels(), r);
  return res;
}

namespace detail {

// One Blahut-style multiplicative update of `r` for the objective
//   F(r) = H(sum_a r_a V_a) - sum_a r_a cost_a        (nats throughout)
// where V_a are rows of an effective channel. This is mutual information plus
// a per-letter linear reward, so the classical alternating-maximization step
// applies with the reward folded into the exponent. Returns F after the
// update's posterior step (a lower bound that never decreases).
inline double ascend_marginal(std::vector<double>& r, const std::vector<std::vector<double>>& v,
                              const std::vector<double>& cost) {
  const std::size_t na = r.size(), ny = v[0].size();
  std::vector<double> py(ny, 0.0);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t y = 0; y < ny; ++y) py[y] += r[a] * v[a][y];
  }
  std::vector<double> t(na, -std::numeric_limits<double>::infinity());
  double f = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    if (r[a] <= 0.0) continue;
    double dx = 0.0;  // D(V_a || P_Y) in nats
    for (std::size_t y = 0; y < ny; ++y) {
      if (v[a][y] > 0.0 && py[y] > 0.0) dx += v[a][y] * std::log(v[a][y] / py[y]);
    }
    double ha = 0.0;  // H(V_a) in nats
    for (std::size_t y = 0; y < ny; ++y) {
      if (v[a][y] > 0.0) ha -= v[a][y] * std::log(v[a][y]);
    }
    t[a] = dx + (ha - cost[a]);
    f += r[a] * t[a];
  }
  double tmax = -std::numeric_limits<double>::infinity();
  for (double ta : t) tmax = std::max(tmax, ta);
  double z = 0.0;
  for (std::size_t a = 0; a < na; ++a) {
    r[a] = r[a] > 0.0 ? r[a] * std::exp(t[a] - tmax) : 0.0;
    z += r[a];
  }
  for (std::size_t a = 0; a < na; ++a) r[a] /= z;
  return f;
}

inline std::vector<double> random_simplex_point(Rng& rng, std::size_t k) {
  std::vector<double> p(k);
  double z = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.next_double());
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

}  // namespace detail

/// Maximize I(X;Y) over product inputs P_A x P_S by alternating ascent on the
/// two marginals. I(X;Y) is concave in each marginal separately but not
/// jointly, so the search multi-starts from `restarts` random pairs plus the
/// uniform pair and keeps the best (lexicographically smallest on exact ties).
inline ProductOptResult maximize_product_mi(const FactoredDmc& fd, double tol = 1e-9,
                                            int max_iter = 10000, int restarts = 8,
                                            std::uint64_t seed = 0x5EEDULL) {
  const std::size_t na = fd.num_a(), ns = fd.num_s(), ny = fd.base().num_outputs();

  // Conditional output rows and per-letter entropies, indexed [a][s].
  std::vector<std::vector<double>> rows(na * ns, std::vector<double>(ny));
  std::vector<double> hrow(na * ns);
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t s = 0; s < ns; ++s) {
      double h = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        const double v = fd.w_as(a, s, y);
        rows[a * ns + s][y] = v;
        if (v > 0.0) h -= v * std::log(v);
      }
      hrow[a * ns + s] = h;
    }
  }

  ProductOptResult best{-1.0, Pmf::uniform(fd.a_labels()), Pmf::uniform(fd.s_labels()), false};

  for (int start = 0; start <= restarts; ++start) {
    std::vector<double> pa(na, 1.0 / static_cast<double>(na));
    std::vector<double> ps(ns, 1.0 / static_cast<double>(ns));
    if (start > 0) {
      Rng rng = derive_rng(seed, 0xA11u, static_cast<std::uint64_t>(start));
      pa = detail::random_simplex_point(rng, na);
      ps = detail::random_simplex_point(rng, ns);
    }

    double prev = -std::numeric_limits<double>::infinity();
    bool converged = false;
    const double tol_nats = tol * std::log(2.0);
    for (int iter = 0; iter < max_iter; ++iter) {
      // Effective A-channel with S averaged out; cost_a = E_S[H(W(.|a,S))].
      std::vector<std::vector<double>> va(na, std::vector<double>(ny, 0.0));
      std::vector<double> ca(na, 0.0);
      for (std::size_t a = 0; a < na; ++a) {
        for (std::size_t s = 0; s < ns; ++s) {
          for (std::size_t y = 0; y < ny; ++y) va[a][y] += ps[s] * rows[a * ns + s][y];
          ca[a] += ps[s] * hrow[a * ns + s];
        }
      }
      detail::ascend_marginal(pa, va, ca);

      std::vector<std::vector<double>> vs(ns, std::vector<double>(ny, 0.0));
      std::vector<double> cs(ns, 0.0);
      for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t a = 0; a < na; ++a) {
          for (std::size_t y = 0; y < ny; ++y) vs[s][y] += pa[a] * rows[a * ns + s][y];
          cs[s] += pa[a] * hrow[a * ns + s];
        }
      }
      const double f = detail::ascend_marginal(ps, vs, cs);
      if (f - prev < tol_nats && iter > 0) {
        converged = true;
        break;
      }
      prev = f;
    }

    const Pmf pa_pmf(fd.a_labels(), pa);
    const Pmf ps_pmf(fd.s_labels(), ps);
    const double mi = mutual_information(product_input(pa_pmf, ps_pmf, fd), fd.base());
    const bool better =
        mi > best.mi ||
        (mi == best.mi && (pa < best.pa_star.probs() ||
                           (pa == best.pa_star.probs() && ps < best.ps_star.probs())));
    if (better) best = ProductOptResult{mi, pa_pmf, ps_pmf, converged};
  }
  return best;
}

/// Blocklength-n design step: project the optimized amplitude law onto the
/// closest n-type in divergence.
inline NType project_to_ntype_design(const Pmf& pa_star, std::uint32_t n) {
  return quantize_to_ntype(pa_star, n);
}

}  // namespace pasx
