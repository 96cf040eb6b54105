#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pasx/channel.hpp"

namespace pasx {

/// {"input_labels":[...], "output_labels":[...], "w":[[...]]}, row-major.
inline nlohmann::ordered_json dmc_to_json(const Dmc& w) {
  nlohmann::ordered_json j;
  j["input_labels"] = w.input_labels();
  j["output_labels"] = w.output_labels();
  auto& rows = j["w"];
  rows = nlohmann::ordered_json::array();
  for (std::size_t x = 0; x < w.num_inputs(); ++x) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (std::size_t y = 0; y < w.num_outputs(); ++y) row.push_back(w.w(x, y));
    rows.push_back(std::move(row));
  }
  return j;
}

inline Dmc dmc_from_json(const nlohmann::json& j) {
  std::vector<std::string> in = j.at("input_labels").get<std::vector<std::string>>();
  std::vector<std::string> out = j.at("output_labels").get<std::vector<std::string>>();
  std::vector<std::vector<double>> w = j.at("w").get<std::vector<std::vector<double>>>();
  return Dmc(std::move(in), std::move(out), std::move(w), 1e-9);
}

/// Factored channels add a_labels/s_labels; rows are (a,s)-major with
/// x index a*|S|+s, matching make_factored.
inline nlohmann::ordered_json factored_to_json(const FactoredDmc& fd) {
  nlohmann::ordered_json j;
  j["a_labels"] = fd.a_labels();
  j["s_labels"] = fd.s_labels();
  j["output_labels"] = fd.base().output_labels();
  auto& rows = j["w"];
  rows = nlohmann::ordered_json::array();
  for (std::size_t a = 0; a < fd.num_a(); ++a) {
    for (std::size_t s = 0; s < fd.num_s(); ++s) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t y = 0; y < fd.base().num_outputs(); ++y) row.push_back(fd.w_as(a, s, y));
      rows.push_back(std::move(row));
    }
  }
  return j;
}

inline FactoredDmc factored_from_json(const nlohmann::json& j) {
  std::vector<std::string> a = j.at("a_labels").get<std::vector<std::string>>();
  std::vector<std::string> s = j.at("s_labels").get<std::vector<std::string>>();
  std::vector<std::string> out = j.at("output_labels").get<std::vector<std::string>>();
  std::vector<std::vector<double>> w = j.at("w").get<std::vector<std::vector<double>>>();
  return make_factored(std::move(a), std::move(s), std::move(out), std::move(w));
}

}  // namespace pasx
