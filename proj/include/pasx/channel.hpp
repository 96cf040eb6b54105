#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pasx/pmf.hpp"

namespace pasx {

/// Discrete memoryless channel: row-stochastic matrix W(y|x) over labeled
/// input/output alphabets. Rows are validated to 1e-12 and renormalized.
class Dmc {
 public:
  Dmc(std::vector<std::string> input_labels, std::vector<std::string> output_labels,
      std::vector<std::vector<double>> w, double row_tolerance = kPmfTolerance)
      : in_(std::move(input_labels)), out_(std::move(output_labels)) {
    if (in_.empty() || out_.empty() || w.size() != in_.size()) {
      throw std::invalid_argument("Dmc: shape mismatch");
    }
    w_.resize(in_.size() * out_.size());
    for (std::size_t x = 0; x < in_.size(); ++x) {
      if (w[x].size() != out_.size()) throw std::invalid_argument("Dmc: ragged matrix");
      double sum = 0.0;
      for (double p : w[x]) {
        if (!(p >= 0.0)) throw std::invalid_argument("Dmc: entries must be >= 0");
        sum += p;
      }
      if (std::abs(sum - 1.0) > row_tolerance) {
        throw std::invalid_argument("Dmc: row " + std::to_string(x) +
                                    " does not sum to 1 within tolerance");
      }
      for (std::size_t y = 0; y < out_.size(); ++y) w_[x * out_.size() + y] = w[x][y] / sum;
    }
  }

  std::size_t num_inputs() const { return in_.size(); }
  std::size_t num_outputs() const { return out_.size(); }
  double w(std::size_t x, std::size_t y) const { return w_[x * out_.size() + y]; }
  const std::vector<std::string>& input_labels() const { return in_; }
  const std::vector<std::string>& output_labels() const { return out_; }

 private:
  std::vector<std::string> in_, out_;
  std::vector<double> w_;
};

/// Channel whose input alphabet is a set partition X = A x S: `s` selects the
/// partition, `a` the value within it. x_of/a_of/s_of hold the bijection.
class FactoredDmc {
 public:
  FactoredDmc(Dmc base, std::vector<std::string> a_labels, std::vector<std::string> s_labels,
              std::vector<std::uint32_t> x_of_as)
      : base_(std::move(base)),
        a_labels_(std::move(a_labels)),
        s_labels_(std::move(s_labels)),
        x_of_as_(std::move(x_of_as)) {
    const std::size_t nx = base_.num_inputs();
    if (a_labels_.size() * s_labels_.size() != nx || x_of_as_.size() != nx) {
      throw std::invalid_argument("FactoredDmc: |A| x |S| must equal |X|");
    }
    a_of_x_.assign(nx, 0);
    s_of_x_.assign(nx, 0);
    std::vector<bool> seen(nx, false);
    for (std::size_t a = 0; a < a_labels_.size(); ++a) {
      for (std::size_t s = 0; s < s_labels_.size(); ++s) {
        const std::uint32_t x = x_of_as_[a * s_labels_.size() + s];
        if (x >= nx || seen[x]) throw std::invalid_argument("FactoredDmc: index map not a bijection");
        seen[x] = true;
        a_of_x_[x] = static_cast<std::uint32_t>(a);
        s_of_x_[x] = static_cast<std::uint32_t>(s);
      }
    }
  }

  const Dmc& base() const { return base_; }
  std::size_t num_a() const { return a_labels_.size(); }
  std::size_t num_s() const { return s_labels_.size(); }
  const std::vector<std::string>& a_labels() const { return a_labels_; }
  const std::vector<std::string>& s_labels() const { return s_labels_; }
  std::uint32_t x_of(std::size_t a, std::size_t s) const { return x_of_as_[a * s_labels_.size() + s]; }
  std::uint32_t a_of(std::size_t x) const { return a_of_x_[x]; }
  std::uint32_t s_of(std::size_t x) const { return s_of_x_[x]; }
  double w_as(std::size_t a, std::size_t s, std::size_t y) const {
    return base_.w(x_of(a, s), y);
  }

 private:
  Dmc base_;
  std::vector<std::string> a_labels_, s_labels_;
  std::vector<std::uint32_t> x_of_as_, a_of_x_, s_of_x_;
};

inline Dmc make_bsc(double p) {
  if (!(p >= 0.0) || !(p <= 0.5)) throw std::invalid_argument("make_bsc: p must be in [0, 0.5]");
  return Dmc({"0", "1"}, {"0", "1"}, {{1.0 - p, p}, {p, 1.0 - p}});
}

/// Generic constructor for X = A x S channels with x index a*|S|+s and input
/// labels "a:s".
inline FactoredDmc make_factored(std::vector<std::string> a_labels,
                                 std::vector<std::string> s_labels,
                                 std::vector<std::string> output_labels,
                                 std::vector<std::vector<double>> w_rows_as_major) {
  std::vector<std::string> x_labels;
  std::vector<std::uint32_t> x_of_as;
  for (std::size_t a = 0; a < a_labels.size(); ++a) {
    for (std::size_t s = 0; s < s_labels.size(); ++s) {
      x_labels.push_back(a_labels[a] + ":" + s_labels[s]);
      x_of_as.push_back(static_cast<std::uint32_t>(a * s_labels.size() + s));
    }
  }
  Dmc base(std::move(x_labels), std::move(output_labels), std::move(w_rows_as_major));
  return FactoredDmc(std::move(base), std::move(a_labels), std::move(s_labels),
                     std::move(x_of_as));
}

/// X = A x S channel made of two independent per-symbol sub-channels:
/// `a` goes through wa, `s` through ws, Y = Ya x Ys.
inline FactoredDmc make_parallel(const Dmc& wa, const Dmc& ws) {
  std::vector<std::string> out;
  for (const auto& ya : wa.output_labels()) {
    for (const auto& ys : ws.output_labels()) out.push_back(ya + ys);
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t a = 0; a < wa.num_inputs(); ++a) {
    for (std::size_t s = 0; s < ws.num_inputs(); ++s) {
      std::vector<double> row;
      row.reserve(out.size());
      for (std::size_t ya = 0; ya < wa.num_outputs(); ++ya) {
        for (std::size_t ys = 0; ys < ws.num_outputs(); ++ys) {
          row.push_back(wa.w(a, ya) * ws.w(s, ys));
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return make_factored(wa.input_labels(), ws.input_labels(), std::move(out), std::move(rows));
}

namespace detail {
inline double gauss_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline std::string format_double_label(double v) {
  std::ostringstream oss;
  oss << v;
  return oss.str();
}
}  // namespace detail

/// Discretized 2^m-ASK over AWGN. The constellation {+-1, +-3, ..., +-(2^m-1)}
/// is scaled to unit average power under uniform input; snr_db fixes the noise
/// variance against that unit power. The output line is cut into `bins` equal
/// cells spanning span_sigmas times the output standard deviation
/// sqrt(1 + sigma^2), plus two unbounded tail cells, each integrated exactly
/// with the Gaussian CDF. S carries the sign, A the amplitude.
inline FactoredDmc make_ask_awgn(int m, double snr_db, int bins, double span_sigmas = 4.0) {
  if (m < 1 || m > 4) throw std::invalid_argument("make_ask_awgn: m must be in [1,4]");
  if (bins < 2 || bins > 512) throw std::invalid_argument("make_ask_awgn: bins must be in [2,512]");
  if (!(span_sigmas > 0.0)) throw std::invalid_argument("make_ask_awgn: span_sigmas must be > 0");

  const int num_amp = 1 << (m - 1);
  const double avg_power = (std::pow(4.0, m) - 1.0) / 3.0;  // mean of odd levels squared
  const double scale = 1.0 / std::sqrt(avg_power);
  const double sigma2 = std::pow(10.0, -snr_db / 10.0);
  const double sigma = std::sqrt(sigma2);
  const double sigma_y = std::sqrt(1.0 + sigma2);
  const double lo = -span_sigmas * sigma_y;
  const double hi = +span_sigmas * sigma_y;

  std::vector<std::string> a_labels, s_labels = {"+", "-"};
  std::vector<double> amp_values;
  for (int i = 0; i < num_amp; ++i) {
    const int level = 2 * i + 1;
    a_labels.push_back(std::to_string(level));
    amp_values.push_back(level * scale);
  }

  const int num_cells = bins + 2;
  std::vector<std::string> out_labels(num_cells);
  for (int c = 0; c < num_cells; ++c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "y%03d", c);
    out_labels[c] = buf;
  }

  std::vector<std::vector<double>> rows;
  std::vector<std::string> x_labels;
  std::vector<std::uint32_t> x_of_as;
  const double cell = (hi - lo) / bins;
  for (int a = 0; a < num_amp; ++a) {
    for (int s = 0; s < 2; ++s) {
      const double xval = (s == 0 ? +1.0 : -1.0) * amp_values[a];
      std::vector<double> row(num_cells);
      row[0] = detail::gauss_cdf((lo - xval) / sigma);
      for (int c = 0; c < bins; ++c) {
        const double e0 = lo + c * cell, e1 = lo + (c + 1) * cell;
        row[c + 1] =
            detail::gauss_cdf((e1 - xval) / sigma) - detail::gauss_cdf((e0 - xval) / sigma);
      }
      row[num_cells - 1] = 1.0 - detail::gauss_cdf((hi - xval) / sigma);
      rows.push_back(std::move(row));
      x_labels.push_back(s_labels[s] + a_labels[a]);
      x_of_as.push_back(static_cast<std::uint32_t>(a * 2 + s));
    }
  }
  Dmc base(std::move(x_labels), std::move(out_labels), std::move(rows), 1e-9);
  return FactoredDmc(std::move(base), std::move(a_labels), std::move(s_labels),
                     std::move(x_of_as));
}

/// Boltzmann amplitude law P(a) proportional to exp(-nu a^2).
inline Pmf maxwell_boltzmann(const std::vector<double>& amplitudes, double nu) {
  if (amplitudes.empty()) throw std::invalid_argument("maxwell_boltzmann: empty amplitude set");
  if (!(nu >= 0.0)) throw std::invalid_argument("maxwell_boltzmann: nu must be >= 0");
  std::vector<std::string> labels;
  std::vector<double> p(amplitudes.size());
  double z = 0.0;
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    labels.push_back(detail::format_double_label(amplitudes[i]));
    p[i] = std::exp(-nu * amplitudes[i] * amplitudes[i]);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return Pmf(std::move(labels), std::move(p));
}

inline Pmf maxwell_boltzmann(const FactoredDmc& fd, double nu) {
  std::vector<double> amps;
  for (const auto& lbl : fd.a_labels()) amps.push_back(std::stod(lbl));
  Pmf raw = maxwell_boltzmann(amps, nu);
  return Pmf(fd.a_labels(), raw.probs());
}

/// P_X(x) = P_A(a) P_S(s) under the channel's index map.
inline Pmf product_input(const Pmf& pa, const Pmf& ps, const FactoredDmc& fd) {
  if (pa.labels() != fd.a_labels() || ps.labels() != fd.s_labels()) {
    throw std::invalid_argument("product_input: alphabet mismatch");
  }
  std::vector<double> px(fd.base().num_inputs());
  for (std::size_t a = 0; a < fd.num_a(); ++a) {
    for (std::size_t s = 0; s < fd.num_s(); ++s) px[fd.x_of(a, s)] = pa[a] * ps[s];
  }
  return Pmf(fd.base().input_labels(), std::move(px));
}

/// Joint input/output law P(x,y) = px(x) W(y|x).
inline JointPmf joint_from(const Pmf& px, const Dmc& w) {
  if (px.labels() != w.input_labels()) throw std::invalid_argument("joint_from: alphabet mismatch");
  std::vector<std::vector<double>> j(w.num_inputs(), std::vector<double>(w.num_outputs()));
  for (std::size_t x = 0; x < w.num_inputs(); ++x) {
    for (std::size_t y = 0; y < w.num_outputs(); ++y) j[x][y] = px[x] * w.w(x, y);
  }
  return JointPmf(w.input_labels(), w.output_labels(), std::move(j));
}

/// I(X;Y) in bits for input px over channel w.
inline double mutual_information(const Pmf& px, const Dmc& w) {
  if (px.labels() != w.input_labels()) {
    throw std::invalid_argument("mutual_information: alphabet mismatch");
  }
  std::vector<double> py(w.num_outputs(), 0.0);
  for (std::size_t x = 0; x < w.num_inputs(); ++x) {
    for (std::size_t y = 0; y < w.num_outputs(); ++y) py[y] += px[x] * w.w(x, y);
  }
  double mi = 0.0;
  for (std::size_t x = 0; x < w.num_inputs(); ++x) {
    if (px[x] <= 0.0) continue;
    for (std::size_t y = 0; y < w.num_outputs(); ++y) {
      const double wxy = w.w(x, y);
      if (wxy > 0.0 && py[y] > 0.0) mi += px[x] * wxy * std::log2(wxy / py[y]);
    }
  }
  return mi;
}

}  // namespace pasx
