#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace pasx {

inline constexpr double kPmfTolerance = 1e-12;

// 0*log2(0) := 0 convention, used throughout.
inline double xlog2(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

/// Probability mass function over a labeled finite alphabet.
/// Construction validates (entries >= 0, sum within 1e-12 of 1, distinct
/// labels) and renormalizes exactly so downstream n-fold products do not
/// accumulate drift.
class Pmf {
 public:
  Pmf(std::vector<std::string> labels, std::vector<double> probs)
      : labels_(std::move(labels)), probs_(std::move(probs)) {
    if (labels_.empty() || labels_.size() != probs_.size()) {
      throw std::invalid_argument("Pmf: labels and probs must have equal length >= 1");
    }
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0)) throw std::invalid_argument("Pmf: probabilities must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kPmfTolerance) {
      throw std::invalid_argument("Pmf: probabilities must sum to 1 within 1e-12");
    }
    for (double& p : probs_) p /= sum;
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("Pmf: labels must be distinct");
    }
  }

  static Pmf uniform(std::vector<std::string> labels) {
    std::vector<double> p(labels.size(), 1.0 / static_cast<double>(labels.size()));
    return Pmf(std::move(labels), std::move(p));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& probs() const { return probs_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool same_alphabet(const Pmf& other) const { return labels_ == other.labels_; }

 private:
  std::vector<std::string> labels_;
  std::vector<double> probs_;
};

/// Joint distribution over a pair of labeled finite alphabets.
class JointPmf {
 public:
  JointPmf(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
           std::vector<std::vector<double>> probs)
      : row_labels_(std::move(row_labels)),
        col_labels_(std::move(col_labels)),
        probs_(std::move(probs)) {
    if (row_labels_.empty() || col_labels_.empty() || probs_.size() != row_labels_.size()) {
      throw std::invalid_argument("JointPmf: shape mismatch");
    }
    double sum = 0.0;
    for (const auto& row : probs_) {
      if (row.size() != col_labels_.size()) throw std::invalid_argument("JointPmf: ragged matrix");
      for (double p : row) {
        if (!(p >= 0.0)) throw std::invalid_argument("JointPmf: entries must be >= 0");
        sum += p;
      }
    }
    if (std::abs(sum - 1.0) > kPmfTolerance) {
      throw std::invalid_argument("JointPmf: entries must sum to 1 within 1e-12");
    }
    for (auto& row : probs_) {
      for (double& p : row) p /= sum;
    }
  }

  std::size_t rows() const { return probs_.size(); }
  std::size_t cols() const { return col_labels_.size(); }
  double operator()(std::size_t i, std::size_t j) const { return probs_[i][j]; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  Pmf row_marginal() const {
    std::vector<double> m(rows(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i) {
      for (std::size_t j = 0; j < cols(); ++j) m[i] += probs_[i][j];
    }
    return Pmf(row_labels_, std::move(m));
  }

  Pmf col_marginal() const {
    std::vector<double> m(cols(), 0.0);
    for (std::size_t i = 0; i < rows(); ++i) {
      for (std::size_t j = 0; j < cols(); ++j) m[j] += probs_[i][j];
    }
    return Pmf(col_labels_, std::move(m));
  }

 private:
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<std::vector<double>> probs_;
};

/// Shannon entropy in bits.
inline double entropy(const Pmf& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) h -= xlog2(p[i]);
  return h;
}

inline double entropy(const JointPmf& pxy) {
  double h = 0.0;
  for (std::size_t i = 0; i < pxy.rows(); ++i) {
    for (std::size_t j = 0; j < pxy.cols(); ++j) h -= xlog2(pxy(i, j));
  }
  return h;
}

/// Renyi entropy of order alpha, in bits: (1/(1-alpha)) log2 sum p_i^alpha.
/// alpha must be positive and != 1 (take Shannon entropy at 1).
inline double renyi_entropy(double alpha, const Pmf& p) {
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw std::invalid_argument("renyi_entropy: alpha must be > 0 and != 1");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += std::pow(p[i], alpha);
  }
  return std::log2(s) / (1.0 - alpha);
}

/// KL divergence D(p||q) in bits; +infinity when supp(p) is not contained in
/// supp(q). Infinity is a regular return value, not an error: callers use it
/// to test absolute-continuity preconditions.
inline double kl_divergence(const Pmf& p, const Pmf& q) {
  if (!p.same_alphabet(q)) throw std::invalid_argument("kl_divergence: alphabet mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
      d += p[i] * std::log2(p[i] / q[i]);
    }
  }
  return d;
}

/// Arimoto conditional Renyi entropy H_alpha(X|Y) in bits, for alpha in (0,1):
/// (alpha/(1-alpha)) log2 sum_y [sum_x P(x,y)^alpha]^(1/alpha).
/// With alpha = 1/(1+rho) this satisfies
///   2^(rho*H) = sum_y [sum_x P(x,y)^alpha]^(1+rho).
inline double arimoto_cond_renyi(double alpha, const JointPmf& pxy) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw std::invalid_argument("arimoto_cond_renyi: alpha must be in (0,1)");
  }
  double outer = 0.0;
  for (std::size_t y = 0; y < pxy.cols(); ++y) {
    double inner = 0.0;
    for (std::size_t x = 0; x < pxy.rows(); ++x) {
      if (pxy(x, y) > 0.0) inner += std::pow(pxy(x, y), alpha);
    }
    if (inner > 0.0) outer += std::pow(inner, 1.0 / alpha);
  }
  return (alpha / (1.0 - alpha)) * std::log2(outer);
}

}  // namespace pasx
