// pasx: achievable rates, random-coding error exponents, and desk-scale
// bound verification for probabilistic amplitude shaping over DMCs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pasx/channel.hpp"
#include "pasx/channel_json.hpp"
#include "pasx/exponents.hpp"
#include "pasx/jsonw.hpp"
#include "pasx/optimize.hpp"
#include "pasx/pmf.hpp"
#include "pasx/simulate.hpp"
#include "pasx/typeclass.hpp"

namespace {

using pasx::jsonw::Value;

struct Channel {
  std::optional<pasx::Dmc> dmc;
  std::optional<pasx::FactoredDmc> factored;
  std::string spec;

  const pasx::Dmc& base() const { return factored ? factored->base() : *dmc; }
  const pasx::FactoredDmc& need_factored(const std::string& who) const {
    if (!factored) {
      throw std::invalid_argument(who + " requires a factored channel (X = A x S)");
    }
    return *factored;
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, sep)) parts.push_back(part);
  return parts;
}

double parse_number(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t used = 0;
  if (slash != std::string::npos) {
    const double num = std::stod(s.substr(0, slash));
    const double den = std::stod(s.substr(slash + 1));
    return num / den;
  }
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("malformed number: " + s);
  return v;
}

std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_number(part));
  if (out.empty()) throw std::invalid_argument("empty probability list");
  return out;
}

Channel parse_channel(const std::string& spec) {
  Channel ch;
  ch.spec = spec;
  const auto parts = split(spec, ':');
  if (parts[0] == "bsc" && parts.size() == 2) {
    ch.dmc = pasx::make_bsc(parse_number(parts[1]));
    return ch;
  }
  if (parts[0] == "bsc2" && parts.size() == 2) {
    const auto w = pasx::make_bsc(parse_number(parts[1]));
    ch.factored = pasx::make_parallel(w, w);
    return ch;
  }
  if (parts[0] == "ask" && (parts.size() == 4 || parts.size() == 5)) {
    const double span = parts.size() == 5 ? parse_number(parts[4]) : 4.0;
    ch.factored = pasx::make_ask_awgn(std::stoi(parts[1]), parse_number(parts[2]),
                                      std::stoi(parts[3]), span);
    return ch;
  }
  // otherwise: a JSON document on disk
  std::string path = spec;
  if (!path.empty() && path[0] == '@') path = path.substr(1);
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("unknown channel spec (expected bsc:p, bsc2:p, "
                                "ask:m:snr:bins[:span], or a JSON file): " + spec);
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed channel JSON in " + path + ": " + e.what());
  }
  try {
    if (j.contains("a_labels")) {
      ch.factored = pasx::factored_from_json(j);
    } else {
      ch.dmc = pasx::dmc_from_json(j);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed channel JSON in " + path + ": " + e.what());
  }
  return ch;
}

pasx::Pmf parse_pmf(const std::string& spec, const std::vector<std::string>& labels,
                    const Channel* ch = nullptr) {
  if (spec == "uniform") return pasx::Pmf::uniform(labels);
  if (spec.rfind("mb:", 0) == 0) {
    if (ch == nullptr || !ch->factored) {
      throw std::invalid_argument("mb:<nu> needs a factored channel with numeric amplitudes");
    }
    return pasx::maxwell_boltzmann(*ch->factored, parse_number(spec.substr(3)));
  }
  auto probs = parse_number_list(spec);
  if (probs.size() != labels.size()) {
    throw std::invalid_argument("probability list has " + std::to_string(probs.size()) +
                                " entries, alphabet has " + std::to_string(labels.size()));
  }
  return pasx::Pmf(labels, probs);
}

pasx::NType parse_ntype(const std::string& spec, const std::vector<std::string>& labels,
                        std::uint32_t n) {
  if (spec.rfind("counts:", 0) == 0) {
    std::vector<std::uint32_t> counts;
    for (const auto& part : split(spec.substr(7), ',')) {
      counts.push_back(static_cast<std::uint32_t>(std::stoul(part)));
    }
    return pasx::NType(labels, counts, n);
  }
  const auto probs = parse_number_list(spec);
  if (probs.size() != labels.size()) throw std::invalid_argument("pbar length mismatch");
  std::vector<std::uint32_t> counts(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double scaled = probs[i] * n;
    counts[i] = static_cast<std::uint32_t>(std::llround(scaled));
    if (std::abs(scaled - counts[i]) > 1e-9) {
      throw std::invalid_argument("pbar is not an n-type for n = " + std::to_string(n));
    }
  }
  return pasx::NType(labels, counts, n);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

void append_csv(const std::string& path, const std::string& header, const std::string& row) {
  const bool fresh = !std::ifstream(path).good();
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  if (fresh) out << header;
  out << row;
}

Value pmf_value(const pasx::Pmf& p) {
  Value v = Value::object();
  v.set("labels", Value::array_of(p.labels()));
  v.set("probs", Value::array_of(p.probs()));
  return v;
}

Value exponent_value(const pasx::ExponentResult& res) {
  Value v = Value::object();
  v.set("exponent_bits", res.exponent);
  v.set("exponent_clamped_bits", res.exponent_clamped);
  v.set("rho_star", res.rho_star);
  v.set("vacuous", res.vacuous);
  return v;
}

void emit(const Value& v) { std::cout << v.dump(); }

// ---------------------------------------------------------------------------
// capacity

struct CapacityArgs {
  std::string channel;
  double tol = 1e-9;
  int max_iter = 10000;
};

int run_capacity(const CapacityArgs& args) {
  const Channel ch = parse_channel(args.channel);
  const auto res = pasx::blahut_arimoto(ch.base(), args.tol, args.max_iter);

  Value config = Value::object();
  config.set("channel", args.channel);
  config.set("inputs", static_cast<std::uint64_t>(ch.base().num_inputs()));
  config.set("outputs", static_cast<std::uint64_t>(ch.base().num_outputs()));
  config.set("tol", args.tol);
  config.set("max_iter", args.max_iter);

  Value out = Value::object();
  out.set("command", "capacity");
  out.set("config", std::move(config));
  out.set("capacity_bits", res.capacity);
  out.set("px", Value::array_of(res.px_star.probs()));
  out.set("px_labels", Value::array_of(res.px_star.labels()));
  out.set("iterations", res.iterations);
  out.set("gap", res.gap);
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// exponent

struct ExponentArgs {
  std::string which;
  std::string channel;
  std::string pa = "uniform";
  std::string ps = "uniform";
  std::string px = "uniform";
  std::string pbar;
  std::string source;
  std::uint32_t n = 0;
  std::string curve_path;
};

int run_exponent(const ExponentArgs& args) {
  const Channel ch = parse_channel(args.channel);

  Value config = Value::object();
  config.set("which", args.which);
  config.set("channel", args.channel);

  pasx::ExponentResult res;
  Value extras = Value::object();

  if (args.which == "eg") {
    if (args.source.empty()) {
      throw std::invalid_argument("exponent eg requires --source (the DMS law)");
    }
    const pasx::Pmf px = parse_pmf(args.px, ch.base().input_labels(), &ch);
    const auto src_probs = parse_number_list(args.source);
    std::vector<std::string> src_labels;
    for (std::size_t i = 0; i < src_probs.size(); ++i) src_labels.push_back("w" + std::to_string(i));
    const pasx::Pmf src(src_labels, src_probs);
    config.set("px", Value::array_of(px.probs()));
    config.set("source", Value::array_of(src.probs()));
    res = pasx::exponent_eg(px, ch.base(),
                            [&src](double a) { return pasx::renyi_entropy(a, src); });
    extras.set("source_entropy_bits", pasx::entropy(src));
    extras.set("mutual_info_bits", pasx::mutual_information(px, ch.base()));
  } else if (args.which == "es") {
    const auto& fd = ch.need_factored("exponent es");
    const pasx::Pmf pa = parse_pmf(args.pa, fd.a_labels(), &ch);
    const pasx::Pmf ps = parse_pmf(args.ps, fd.s_labels(), &ch);
    config.set("pa", Value::array_of(pa.probs()));
    config.set("ps", Value::array_of(ps.probs()));
    res = pasx::exponent_es(pa, ps, fd);
    const auto info = pasx::rate_thresholds_es(pa, ps, fd);
    extras.set("mutual_info_bits", info.thresholds.mutual_info);
    extras.set("rate_limit_bits", info.thresholds.rate_limit);
    extras.set("source_entropy_bits", info.source_entropy);
    extras.set("redundancy_bits", info.redundancy);
    extras.set("channel_uncertainty_bits", info.channel_uncertainty);
    extras.set("redundancy_exceeds_uncertainty", info.redundancy_exceeds_uncertainty);
  } else if (args.which == "em") {
    if (args.pbar.empty()) throw std::invalid_argument("exponent em requires --pbar");
    const std::vector<std::string>& a_labels =
        ch.factored ? ch.factored->a_labels() : ch.base().input_labels();
    const pasx::Pmf pa = parse_pmf(args.pa, a_labels, &ch);
    const pasx::Pmf pbar = parse_pmf(args.pbar, a_labels, &ch);
    const pasx::Pmf px = parse_pmf(args.px, ch.base().input_labels(), &ch);
    config.set("pa", Value::array_of(pa.probs()));
    config.set("pbar", Value::array_of(pbar.probs()));
    config.set("px", Value::array_of(px.probs()));
    res = pasx::exponent_em(pbar, pa, px, ch.base());
    const auto t = pasx::rate_thresholds_em(pbar, pa, px, ch.base());
    extras.set("mutual_info_bits", t.mutual_info);
    extras.set("penalty_bits", t.penalty);
    extras.set("rate_limit_bits", t.rate_limit);
  } else if (args.which == "esm") {
    if (args.n == 0) throw std::invalid_argument("exponent esm requires --n");
    if (args.pbar.empty()) throw std::invalid_argument("exponent esm requires --pbar");
    const auto& fd = ch.need_factored("exponent esm");
    const pasx::Pmf pa = parse_pmf(args.pa, fd.a_labels(), &ch);
    const pasx::Pmf ps = parse_pmf(args.ps, fd.s_labels(), &ch);
    const pasx::NType pbar_t = parse_ntype(args.pbar, fd.a_labels(), args.n);
    const pasx::Pmf pbar = pasx::as_pmf(pbar_t);
    config.set("n", args.n);
    config.set("pa", Value::array_of(pa.probs()));
    config.set("ps", Value::array_of(ps.probs()));
    config.set("pbar", Value::array_of(pbar.probs()));
    res = pasx::exponent_esm(args.n, pbar, pa, ps, fd);
    extras.set("alpha_n_bits", pasx::alpha_n(args.n, fd.num_a()));
    extras.set("penalty_bits", pasx::kl_divergence(pbar, pa));
  } else {
    throw std::invalid_argument("--which must be one of eg, es, em, esm");
  }

  if (!args.curve_path.empty()) {
    write_file(args.curve_path, pasx::curve_to_csv(res.curve));
    config.set("curve", args.curve_path);
  }

  Value out = Value::object();
  out.set("command", "exponent");
  out.set("config", std::move(config));
  out.set("result", exponent_value(res));
  out.set("details", std::move(extras));
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// ratesweep

struct RatesweepArgs {
  std::string channel;
  std::string sweep;
  std::string pa = "uniform";
  std::string ps = "uniform";
  std::uint32_t pbar_n = 0;
  std::string out_path;
};

// Rebuild the channel spec with the swept field substituted.
std::string substitute_channel_param(const std::string& spec, const std::string& kind,
                                     double value) {
  auto parts = split(spec, ':');
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  if (kind == "snr") {
    if (parts[0] != "ask" || parts.size() < 4) {
      throw std::invalid_argument("snr sweep requires an ask:m:snr:bins channel");
    }
    parts[2] = buf;
  } else if (kind == "p") {
    if ((parts[0] != "bsc" && parts[0] != "bsc2") || parts.size() != 2) {
      throw std::invalid_argument("p sweep requires a bsc:p or bsc2:p channel");
    }
    parts[1] = buf;
  } else {
    throw std::invalid_argument("unknown sweep kind: " + kind);
  }
  std::string joined = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) joined += ":" + parts[i];
  return joined;
}

int run_ratesweep(const RatesweepArgs& args) {
  const auto sweep_parts = split(args.sweep, ':');
  if (sweep_parts.size() != 4) {
    throw std::invalid_argument("--sweep must be kind:start:stop:step (kind in {nu, snr, p})");
  }
  const std::string kind = sweep_parts[0];
  const double start = parse_number(sweep_parts[1]);
  const double stop = parse_number(sweep_parts[2]);
  const double step = parse_number(sweep_parts[3]);
  if (!(step > 0.0) || stop < start) throw std::invalid_argument("invalid sweep grid");
  if (args.out_path.empty()) throw std::invalid_argument("ratesweep requires --out");

  std::string csv = "param,mutual_info_bits,penalty_bits,rate_limit_bits\n";
  int rows = 0;
  for (double v = start; v <= stop + 1e-12; v += step) {
    Channel ch;
    pasx::Pmf pa = pasx::Pmf::uniform({"x"});  // replaced below
    if (kind == "nu") {
      ch = parse_channel(args.channel);
      ch.need_factored("nu sweep");
      pa = pasx::maxwell_boltzmann(*ch.factored, v);
    } else {
      ch = parse_channel(substitute_channel_param(args.channel, kind, v));
      if (ch.factored) {
        pa = parse_pmf(args.pa, ch.factored->a_labels(), &ch);
      }
    }

    double mi = 0.0, penalty = 0.0;
    if (ch.factored) {
      const pasx::Pmf ps = parse_pmf(args.ps, ch.factored->s_labels(), &ch);
      mi = pasx::mutual_information(pasx::product_input(pa, ps, *ch.factored),
                                    ch.factored->base());
      if (args.pbar_n > 0) {
        const auto pbar = pasx::quantize_to_ntype(pa, args.pbar_n);
        penalty = pasx::kl_divergence(pasx::as_pmf(pbar), pa);
      }
    } else {
      mi = pasx::mutual_information(pasx::Pmf::uniform(ch.base().input_labels()), ch.base());
    }

    char buf[160];
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g\n", v, mi, penalty, mi - penalty);
    csv += buf;
    ++rows;
  }
  write_file(args.out_path, csv);

  Value config = Value::object();
  config.set("channel", args.channel);
  config.set("sweep", args.sweep);
  config.set("pa", args.pa);
  config.set("ps", args.ps);
  config.set("pbar_n", args.pbar_n);
  config.set("out", args.out_path);

  Value out = Value::object();
  out.set("command", "ratesweep");
  out.set("config", std::move(config));
  out.set("rows", rows);
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// design

struct DesignArgs {
  std::string channel;
  std::uint32_t n = 0;
  double tol = 1e-9;
  int max_iter = 10000;
  int restarts = 8;
  std::uint64_t seed = 0x5EEDULL;
};

int run_design(const DesignArgs& args) {
  if (args.n == 0) throw std::invalid_argument("design requires --n >= 1");
  const Channel ch = parse_channel(args.channel);
  const auto& fd = ch.need_factored("design");

  const auto opt = pasx::maximize_product_mi(fd, args.tol, args.max_iter, args.restarts,
                                             args.seed);
  const auto pbar = pasx::project_to_ntype_design(opt.pa_star, args.n);
  const pasx::Pmf pbar_pmf = pasx::as_pmf(pbar);
  const double divergence = pasx::kl_divergence(pbar_pmf, opt.pa_star);
  const double mi_at_pbar = pasx::mutual_information(
      pasx::product_input(pbar_pmf, opt.ps_star, fd), fd.base());

  Value config = Value::object();
  config.set("channel", args.channel);
  config.set("n", args.n);
  config.set("tol", args.tol);
  config.set("max_iter", args.max_iter);
  config.set("restarts", args.restarts);
  config.set("seed", args.seed);

  Value out = Value::object();
  out.set("command", "design");
  out.set("config", std::move(config));
  out.set("mi_bits", opt.mi);
  out.set("converged", opt.converged);
  out.set("pa_star", pmf_value(opt.pa_star));
  out.set("ps_star", pmf_value(opt.ps_star));
  Value pbar_v = Value::object();
  pbar_v.set("counts", Value::array_of(pbar.counts));
  pbar_v.set("probs", Value::array_of(pbar_pmf.probs()));
  out.set("pbar", std::move(pbar_v));
  out.set("divergence_bits", divergence);
  Value rate = Value::object();
  rate.set("mutual_info_bits", opt.mi);
  rate.set("mutual_info_at_pbar_bits", mi_at_pbar);
  rate.set("penalty_bits", divergence);
  rate.set("rate_limit_bits", opt.mi - divergence);
  out.set("rate", std::move(rate));
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  std::string config_path;
  std::string csv_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> num_codes;
  std::optional<std::uint32_t> trials;
  std::optional<std::string> mode;
};

pasx::SimConfig load_sim_config(const std::string& path, const SimulateArgs& overrides,
                                Value& echo) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed config JSON: " + std::string(e.what()));
  }

  pasx::SimConfig cfg;
  const std::string setup = j.at("setup").get<std::string>();
  if (setup == "classical") cfg.setup = pasx::Setup::classical;
  else if (setup == "systematic") cfg.setup = pasx::Setup::systematic;
  else if (setup == "mismatched") cfg.setup = pasx::Setup::mismatched;
  else if (setup == "pas") cfg.setup = pasx::Setup::pas;
  else throw std::invalid_argument("setup must be classical|systematic|mismatched|pas");

  cfg.n = j.at("n").get<std::uint32_t>();

  Channel ch;
  if (j.at("channel").is_string()) {
    ch = parse_channel(j["channel"].get<std::string>());
  } else if (j["channel"].contains("a_labels")) {
    ch.factored = pasx::factored_from_json(j["channel"]);
    ch.spec = "(inline factored)";
  } else {
    ch.dmc = pasx::dmc_from_json(j["channel"]);
    ch.spec = "(inline dmc)";
  }
  cfg.fchannel = ch.factored;
  cfg.channel = ch.dmc;

  auto pmf_field = [&](const char* key, const std::vector<std::string>& labels)
      -> std::optional<pasx::Pmf> {
    if (!j.contains(key)) return std::nullopt;
    if (j[key].is_string()) return parse_pmf(j[key].get<std::string>(), labels, &ch);
    std::vector<double> probs = j[key].get<std::vector<double>>();
    return pasx::Pmf(labels, probs);
  };

  const std::vector<std::string> a_labels =
      ch.factored ? ch.factored->a_labels()
                  : (j.contains("a_labels")
                         ? j["a_labels"].get<std::vector<std::string>>()
                         : std::vector<std::string>{"0", "1"});
  cfg.pa = pmf_field("pa", a_labels);
  if (ch.factored) cfg.ps = pmf_field("ps", ch.factored->s_labels());
  cfg.px = pmf_field("px", ch.base().input_labels());

  if (j.contains("pbar_counts")) {
    cfg.pbar = pasx::NType(a_labels, j["pbar_counts"].get<std::vector<std::uint32_t>>(), cfg.n);
  } else if (j.contains("pbar")) {
    std::string spec;
    if (j["pbar"].is_string()) {
      spec = j["pbar"].get<std::string>();
    } else {
      for (double v : j["pbar"].get<std::vector<double>>()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        spec += (spec.empty() ? "" : ",") + std::string(buf);
      }
    }
    cfg.pbar = parse_ntype(spec, a_labels, cfg.n);
  }

  cfg.q_support_fraction = j.value("q_support_fraction", 1.0);
  const std::string ensemble = j.value("ensemble", std::string("iid"));
  if (ensemble == "iid") cfg.ensemble = pasx::Ensemble::iid;
  else if (ensemble == "affine-binary") cfg.ensemble = pasx::Ensemble::affine_binary;
  else throw std::invalid_argument("ensemble must be iid or affine-binary");
  cfg.permuter_enabled = j.value("permuter_enabled", true);
  cfg.num_codes = j.value("num_codes", 100u);
  cfg.trials_per_code = j.value("trials_per_code", 0u);
  cfg.seed = j.value("seed", std::uint64_t{1});
  const std::string mode = j.value("mode", std::string("auto"));
  if (mode == "auto") cfg.mode = pasx::SimMode::automatic;
  else if (mode == "exact") cfg.mode = pasx::SimMode::exact;
  else if (mode == "mc") cfg.mode = pasx::SimMode::monte_carlo;
  else throw std::invalid_argument("mode must be auto, exact, or mc");

  // flag overrides beat config-file values
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.num_codes) cfg.num_codes = *overrides.num_codes;
  if (overrides.trials) cfg.trials_per_code = *overrides.trials;
  if (overrides.mode) {
    if (*overrides.mode == "auto") cfg.mode = pasx::SimMode::automatic;
    else if (*overrides.mode == "exact") cfg.mode = pasx::SimMode::exact;
    else if (*overrides.mode == "mc") cfg.mode = pasx::SimMode::monte_carlo;
    else throw std::invalid_argument("--mode must be auto, exact, or mc");
  }

  echo.set("setup", setup);
  echo.set("n", cfg.n);
  echo.set("channel", ch.spec);
  if (cfg.pa) echo.set("pa", Value::array_of(cfg.pa->probs()));
  if (cfg.ps) echo.set("ps", Value::array_of(cfg.ps->probs()));
  if (cfg.px) echo.set("px", Value::array_of(cfg.px->probs()));
  if (cfg.pbar) echo.set("pbar_counts", Value::array_of(cfg.pbar->counts));
  echo.set("q_support_fraction", cfg.q_support_fraction);
  echo.set("ensemble", ensemble);
  echo.set("permuter_enabled", cfg.permuter_enabled);
  echo.set("num_codes", cfg.num_codes);
  echo.set("trials_per_code", cfg.trials_per_code);
  echo.set("mode", cfg.mode == pasx::SimMode::automatic
                       ? "auto"
                       : (cfg.mode == pasx::SimMode::exact ? "exact" : "mc"));
  echo.set("seed", cfg.seed);
  return cfg;
}

int run_simulate(const SimulateArgs& args) {
  Value echo = Value::object();
  const pasx::SimConfig cfg = load_sim_config(args.config_path, args, echo);
  const pasx::SimReport report = pasx::run_ensemble_experiment(cfg);

  Value rep = Value::object();
  rep.set("exact_mode", report.exact_mode);
  rep.set("trials", report.trials);
  rep.set("errors", report.errors);
  rep.set("p_hat", report.p_hat);
  rep.set("ci_99_upper", report.ci_99_upper);
  rep.set("analytic_exponent_bits", report.analytic_exponent);
  rep.set("rho_star", report.rho_star);
  rep.set("analytic_bound", report.analytic_bound);
  rep.set("bound_vacuous", report.bound_vacuous);
  rep.set("verdict", report.verdict);

  Value out = Value::object();
  out.set("command", "simulate");
  out.set("config", std::move(echo));
  out.set("report", std::move(rep));
  emit(out);

  if (!args.csv_path.empty()) {
    append_csv(args.csv_path, pasx::sim_report_csv_header(), pasx::sim_report_csv_row(report));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Achievable rates and error exponents for probabilistic amplitude shaping"};
  app.require_subcommand(1);

  CapacityArgs cap;
  auto* cap_cmd = app.add_subcommand("capacity", "Channel capacity via Blahut-Arimoto");
  cap_cmd->add_option("--channel", cap.channel, "bsc:p | bsc2:p | ask:m:snr:bins[:span] | file.json")
      ->required();
  cap_cmd->add_option("--tol", cap.tol, "duality-gap tolerance in bits");
  cap_cmd->add_option("--max-iter", cap.max_iter, "iteration cap");

  ExponentArgs exp_args;
  auto* exp_cmd = app.add_subcommand("exponent", "Random-coding exponents and rho curves");
  exp_cmd->add_option("--which", exp_args.which, "eg | es | em | esm")->required();
  exp_cmd->add_option("--channel", exp_args.channel, "channel spec")->required();
  exp_cmd->add_option("--pa", exp_args.pa, "amplitude law (list | uniform | mb:nu)");
  exp_cmd->add_option("--ps", exp_args.ps, "sign/parity law");
  exp_cmd->add_option("--px", exp_args.px, "channel input law (eg, em)");
  exp_cmd->add_option("--pbar", exp_args.pbar, "source type (list or counts:...)");
  exp_cmd->add_option("--source", exp_args.source, "DMS law for eg");
  exp_cmd->add_option("--n", exp_args.n, "blocklength (esm)");
  exp_cmd->add_option("--curve", exp_args.curve_path, "write the rho curve CSV here");

  RatesweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("ratesweep", "Achievable-rate sweeps to CSV");
  sweep_cmd->add_option("--channel", sweep_args.channel, "channel spec")->required();
  sweep_cmd->add_option("--sweep", sweep_args.sweep, "nu:start:stop:step | snr:... | p:...")
      ->required();
  sweep_cmd->add_option("--pa", sweep_args.pa, "amplitude law for snr/p sweeps");
  sweep_cmd->add_option("--ps", sweep_args.ps, "sign law");
  sweep_cmd->add_option("--pbar-n", sweep_args.pbar_n, "quantize pa to an n-type for the penalty");
  sweep_cmd->add_option("--out", sweep_args.out_path, "output CSV path")->required();

  DesignArgs design_args;
  auto* design_cmd = app.add_subcommand("design", "Two-step input design: optimize then quantize");
  design_cmd->add_option("--channel", design_args.channel, "factored channel spec")->required();
  design_cmd->add_option("--n", design_args.n, "blocklength for the n-type projection")->required();
  design_cmd->add_option("--tol", design_args.tol, "ascent tolerance in bits");
  design_cmd->add_option("--max-iter", design_args.max_iter, "iteration cap");
  design_cmd->add_option("--restarts", design_args.restarts, "random restarts");
  design_cmd->add_option("--seed", design_args.seed, "restart seed");

  SimulateArgs sim_args;
  std::uint64_t sim_seed = 0;
  std::uint32_t sim_codes = 0, sim_trials = 0;
  std::string sim_mode;
  auto* sim_cmd = app.add_subcommand("simulate", "Ensemble bound verification");
  sim_cmd->add_option("--config", sim_args.config_path, "JSON configuration file")->required();
  sim_cmd->add_option("--csv", sim_args.csv_path, "append a result row to this CSV");
  auto* o_seed = sim_cmd->add_option("--seed", sim_seed, "override the config seed");
  auto* o_codes = sim_cmd->add_option("--num-codes", sim_codes, "override num_codes");
  auto* o_trials = sim_cmd->add_option("--trials", sim_trials, "override trials_per_code");
  auto* o_mode = sim_cmd->add_option("--mode", sim_mode, "override mode: auto | exact | mc");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (*cap_cmd) return run_capacity(cap);
    if (*exp_cmd) return run_exponent(exp_args);
    if (*sweep_cmd) return run_ratesweep(sweep_args);
    if (*design_cmd) return run_design(design_args);
    if (*sim_cmd) {
      if (o_seed->count() > 0) sim_args.seed = sim_seed;
      if (o_codes->count() > 0) sim_args.num_codes = sim_codes;
      if (o_trials->count() > 0) sim_args.trials = sim_trials;
      if (o_mode->count() > 0) sim_args.mode = sim_mode;
      return run_simulate(sim_args);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
