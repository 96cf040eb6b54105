#pragma once

#include <string>
#include <vector>

#include "pasx/channel.hpp"
#include "pasx/pmf.hpp"
#include "pasx/rng.hpp"

namespace testutil {

inline std::vector<std::string> letters(std::size_t k) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
  return out;
}

// Random point in the simplex interior; `floor` mixes in uniform mass so
// entries stay bounded away from zero (keeps logs and divergences finite).
inline std::vector<double> random_simplex(pasx::Rng& rng, std::size_t k, double floor = 0.0) {
  std::vector<double> p(k);
  double z = 0.0;
  for (double& v : p) {
    v = -std::log(1.0 - rng.next_double());
    z += v;
  }
  for (double& v : p) v = (1.0 - floor) * v / z + floor / static_cast<double>(k);
  return p;
}

inline pasx::Pmf random_pmf(pasx::Rng& rng, std::size_t k, double floor = 0.05) {
  return pasx::Pmf(letters(k), random_simplex(rng, k, floor));
}

inline pasx::Dmc random_dmc(pasx::Rng& rng, std::size_t nx, std::size_t ny, double floor = 0.05) {
  std::vector<std::vector<double>> rows;
  for (std::size_t x = 0; x < nx; ++x) rows.push_back(random_simplex(rng, ny, floor));
  std::vector<std::string> out;
  for (std::size_t y = 0; y < ny; ++y) out.push_back("y" + std::to_string(y));
  return pasx::Dmc(letters(nx), std::move(out), std::move(rows));
}

// Random factored channel with |A| = |S| = 2 and `ny` outputs.
inline pasx::FactoredDmc random_factored(pasx::Rng& rng, std::size_t ny, double floor = 0.05) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 4; ++i) rows.push_back(random_simplex(rng, ny, floor));
  std::vector<std::string> out;
  for (std::size_t y = 0; y < ny; ++y) out.push_back("y" + std::to_string(y));
  return pasx::make_factored({"0", "1"}, {"0", "1"}, std::move(out), std::move(rows));
}

// Two independent per-symbol BSC uses: A through one, S through the other.
inline pasx::FactoredDmc bsc_pair(double p) {
  return pasx::make_parallel(pasx::make_bsc(p), pasx::make_bsc(p));
}

inline pasx::Pmf binary_pmf(double p0) {
  return pasx::Pmf({"0", "1"}, {p0, 1.0 - p0});
}

}  // namespace testutil
