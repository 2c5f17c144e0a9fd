// Copyright 2026 The qwork Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. `run` is kept free of process-global state so the
// test suite can drive it in-process.
//
// Exit status: 0 success (certificate verdicts are data), 2 malformed
// command line or input document, 3 domain validation failure, 1 anything
// else.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qwork/io.hpp"
#include "qwork/qwork.hpp"

namespace qwork::cli {

using nlohmann::json;

struct RunConfig {
  std::string command;
  std::string nogo_kind;
  std::string process_file;
  std::string builtin;
  std::vector<std::string> params;
  std::string state = "maximally_coherent";
  std::vector<std::string> state_params;
  std::string out;
  std::string outcomes_out;
  std::string format = "auto";
  std::string scheme = "tpm";
  double beta = 1.0;
  int copies = 2;
  std::optional<std::uint64_t> seed;
  double from = 0.0;
  double to = std::numbers::pi / 2;
  int steps = 64;
  bool with_candidate = false;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Params parse_key_values(const std::vector<std::string>& items) {
  Params out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError("expected K=V, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (value == "inf" || value == "+inf") {
      out[key] = std::numeric_limits<double>::infinity();
      continue;
    }
    try {
      std::size_t used = 0;
      out[key] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ParseError("parameter '" + key + "' is not a number: '" + value + "'");
    }
  }
  return out;
}

inline Process load_process(const RunConfig& cfg) {
  if (!cfg.process_file.empty() && !cfg.builtin.empty()) {
    throw ParseError("give either --process or --builtin, not both");
  }
  if (!cfg.process_file.empty()) return io::process_from_json(io::parse(read_file(cfg.process_file)));
  if (!cfg.builtin.empty()) return builtin_process(cfg.builtin, parse_key_values(cfg.params));
  throw ParseError("a process is required (--process FILE or --builtin NAME)");
}

// --state takes inline JSON, a path to a JSON file, or a builtin state name.
inline DensityMatrix load_state(const RunConfig& cfg, const Process& process) {
  const std::string& spec = cfg.state;
  if (!spec.empty() && spec.front() == '{') return io::state_from_json(io::parse(spec), process);
  if (std::filesystem::exists(spec)) return io::state_from_json(io::parse(read_file(spec)), process);
  return builtin_state(spec, parse_key_values(cfg.state_params), process.h());
}

inline std::string resolve_format(const RunConfig& cfg, const char* fallback) {
  const std::string f = cfg.format == "auto" ? fallback : cfg.format;
  if (f != "csv" && f != "json") throw ParseError("--format must be csv or json");
  return f;
}

inline std::string csv_number(double v) { return io::format_number(v, 15); }

struct Output {
  std::string main;
  std::string outcomes;  // optional side file
};

inline Output distribution_command(const RunConfig& cfg, std::ostream& err) {
  const Process process = load_process(cfg);
  const DensityMatrix rho = load_state(cfg, process);
  const bool collective = cfg.command == "collective";
  std::optional<LambdaResult> lambda;
  WorkPOVM povm;
  if (collective) {
    auto scheme = two_copy_povm(process);
    povm = std::move(scheme.povm);
    lambda = std::move(scheme.lambda);
  } else {
    povm = tpm_povm(process);
  }
  const auto outcomes = outcome_probabilities(povm, rho);
  const WorkDistribution dist = evaluate_povm(povm, rho);
  Output out;
  if (resolve_format(cfg, "csv") == "json") {
    json doc = {{"scheme", collective ? "two_copy" : "tpm"},
                {"distribution", io::to_json(dist)},
                {"outcomes", io::to_json(outcomes)}};
    if (lambda) doc["lambda"] = io::to_json(*lambda);
    out.main = doc.dump(2) + "\n";
  } else {
    out.main = io::distribution_to_csv(dist);
    out.outcomes = io::outcomes_to_csv(outcomes);
    if (lambda) err << "lambda = " << io::format_number(lambda->lambda, 15) << "\n";
  }
  return out;
}

inline Output lambda_command(const RunConfig& cfg) {
  const LambdaResult r = lambda_max(load_process(cfg));
  if (resolve_format(cfg, "json") == "json") return {io::to_json(r).dump(2) + "\n", {}};
  std::string csv = "lambda,binding_i,binding_j,unconstrained,collapsed_to_tpm\n" +
                    csv_number(r.lambda) + ",";
  csv += r.binding_pair ? std::to_string(r.binding_pair->first) + "," +
                              std::to_string(r.binding_pair->second)
                        : std::string(",");
  csv += std::string(",") + (r.unconstrained ? "1" : "0") + "," + (r.collapsed_to_tpm ? "1" : "0") +
         "\n";
  return {csv, {}};
}

inline Output certificate_output(const RunConfig& cfg, const NoGoCertificate& c) {
  if (resolve_format(cfg, "json") == "json") return {io::to_json(c).dump(2) + "\n", {}};
  const auto opt = [](const std::optional<double>& v) { return v ? csv_number(*v) : std::string(); };
  return {"kind,gap,bound_lhs,bound_rhs,verdict\n" + std::string(to_string(c.kind)) + "," +
              csv_number(c.gap) + "," + opt(c.bound_lhs) + "," + opt(c.bound_rhs) + "," +
              to_string(c.verdict) + "\n",
          {}};
}

inline Output nogo_command(const RunConfig& cfg) {
  if (cfg.nogo_kind == "single") return certificate_output(cfg, single_copy_gap(load_process(cfg)));
  if (cfg.nogo_kind == "total") {
    return certificate_output(cfg, total_work_infeasibility(load_process(cfg), cfg.copies));
  }
  if (cfg.with_candidate) {
    if (cfg.copies != 2) throw ParamError("--with-candidate is only available for N = 2");
    const double epsilon = 1.0 / (2.0 * 8.0);
    const auto scheme = two_copy_povm(builtin_process("near_identity", {{"epsilon", epsilon}}));
    return certificate_output(cfg, individual_work_bound(cfg.copies, &scheme.povm));
  }
  return certificate_output(cfg, individual_work_bound(cfg.copies));
}

// Grid points sit at cell midpoints, so the default [0, π/2] grid never
// lands on a multiple of π/2.
inline Output sweep_command(const RunConfig& cfg) {
  if (cfg.steps < 1) throw ParamError("--steps must be >= 1");
  const auto h = HermitianOperator::diagonal({0.0, 1.0});
  const Process probe(h, h, UnitaryOperator::identity(2));
  const DensityMatrix rho = load_state(cfg, probe);
  const bool as_json = resolve_format(cfg, "csv") == "json";
  json rows = json::array();
  std::string csv =
      "alpha,lambda_closed,lambda_numeric,p00_closed,p00_numeric,p01_closed,p01_numeric,"
      "p10_closed,p10_numeric,p11_closed,p11_numeric\n";
  const double step = (cfg.to - cfg.from) / cfg.steps;
  for (int k = 0; k < cfg.steps; ++k) {
    const double alpha = cfg.from + (k + 0.5) * step;
    const Process process(h, h, unitaries::rotation(alpha));
    const auto closed = qubit_lambda_closed_form(alpha);
    const auto scheme = two_copy_povm(process);
    const auto numeric = outcome_probabilities(scheme.povm, rho);
    std::optional<std::array<double, 4>> closed_p;
    if (alpha >= 0.0 && alpha <= std::numbers::pi / 4) closed_p = qubit_probabilities_closed_form(alpha, rho);
    if (as_json) {
      json row = {{"alpha", alpha},
                  {"lambda_closed", closed.lambda},
                  {"lambda_numeric", scheme.lambda.lambda}};
      json p_num = json::array();
      for (const auto& o : numeric) p_num.push_back(o.probability);
      row["p_numeric"] = p_num;
      row["p_closed"] = closed_p ? json(*closed_p) : json();
      rows.push_back(std::move(row));
    } else {
      csv += csv_number(alpha) + "," + csv_number(closed.lambda) + "," +
             csv_number(scheme.lambda.lambda);
      for (std::size_t n = 0; n < 4; ++n) {
        csv += "," + (closed_p ? csv_number((*closed_p)[n]) : std::string()) + "," +
               csv_number(numeric[n].probability);
      }
      csv += "\n";
    }
  }
  return {as_json ? rows.dump(2) + "\n" : csv, {}};
}

inline Output jarzynski_command(const RunConfig& cfg) {
  const JarzynskiCheck r = jarzynski_check(load_process(cfg), cfg.beta);
  if (resolve_format(cfg, "json") == "json") {
    return {json{{"beta", cfg.beta}, {"lhs", r.lhs}, {"rhs", r.rhs}}.dump(2) + "\n", {}};
  }
  return {"beta,lhs,rhs\n" + csv_number(cfg.beta) + "," + csv_number(r.lhs) + "," +
              csv_number(r.rhs) + "\n",
          {}};
}

inline Output sample_command(const RunConfig& cfg) {
  if (!cfg.seed) throw ParseError("sample requires an explicit --seed");
  if (cfg.copies < 0) throw ParamError("--n must be >= 0");
  if (cfg.scheme != "tpm" && cfg.scheme != "collective") {
    throw ParseError("--scheme must be tpm or collective");
  }
  const Process process = load_process(cfg);
  const DensityMatrix rho = load_state(cfg, process);
  const WorkPOVM povm = scheme_povm(cfg.scheme == "tpm" ? SchemeKind::tpm : SchemeKind::two_copy, process);
  const auto draws = sample(evaluate_povm(povm, rho), static_cast<std::size_t>(cfg.copies), *cfg.seed);
  if (resolve_format(cfg, "csv") == "json") {
    return {json{{"sampler", kSamplerId}, {"seed", *cfg.seed}, {"samples", draws}}.dump(2) + "\n", {}};
  }
  std::string csv = "work\n";
  for (double w : draws) csv += io::format_number(w, 12) + "\n";
  return {csv, {}};
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << text;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Quantum work statistics: TPM and two-copy schemes, no-go certificates", "qwork"};
  app.require_subcommand(1);

  const auto add_process = [&cfg](CLI::App* sub) {
    sub->add_option("--process", cfg.process_file, "process JSON file");
    sub->add_option("--builtin", cfg.builtin,
                    "builtin process: dft, rotation, near_identity, swap_to_coherent, "
                    "diagonal_phase");
    sub->add_option("--params", cfg.params, "builtin process parameters K=V");
  };
  const auto add_state = [&cfg](CLI::App* sub) {
    sub->add_option("--state", cfg.state,
                    "state: inline JSON, JSON file, or builtin name (thermal, basis, "
                    "maximally_coherent)");
    sub->add_option("--state-params", cfg.state_params, "builtin state parameters K=V");
  };
  const auto add_output = [&cfg](CLI::App* sub) {
    sub->add_option("--out", cfg.out, "output file (default: stdout)");
    sub->add_option("--format", cfg.format, "csv or json");
  };

  auto* tpm = app.add_subcommand("tpm", "TPM work distribution");
  auto* collective = app.add_subcommand("collective", "two-copy work distribution and lambda");
  for (auto* sub : {tpm, collective}) {
    add_process(sub);
    add_state(sub);
    add_output(sub);
    sub->add_option("--outcomes", cfg.outcomes_out, "CSV file for raw (i,j) probabilities");
  }
  auto* lambda = app.add_subcommand("lambda", "maximal lambda of the two-copy scheme");
  add_process(lambda);
  add_output(lambda);

  auto* nogo = app.add_subcommand("nogo", "no-go certificates");
  nogo->require_subcommand(1);
  auto* single = nogo->add_subcommand("single", "single-copy operator gap");
  add_process(single);
  add_output(single);
  auto* individual = nogo->add_subcommand("individual", "N-copy individual-work bound");
  individual->add_option("--n", cfg.copies, "number of copies");
  individual->add_flag("--with-candidate", cfg.with_candidate,
                       "also check the two-copy scheme as a candidate (N = 2)");
  add_output(individual);
  auto* total = nogo->add_subcommand("total", "N-copy total-work infeasibility");
  add_process(total);
  total->add_option("--n", cfg.copies, "number of copies (1..3)");
  add_output(total);

  auto* sweep = app.add_subcommand("sweep-alpha", "qubit rotation sweep: closed form vs numeric");
  sweep->add_option("--from", cfg.from, "first angle");
  sweep->add_option("--to", cfg.to, "last angle");
  sweep->add_option("--steps", cfg.steps, "number of grid cells");
  add_state(sweep);
  add_output(sweep);

  auto* jarz = app.add_subcommand("jarzynski", "fluctuation identity <e^{beta W}> = Z'/Z");
  add_process(jarz);
  jarz->add_option("--beta", cfg.beta, "inverse temperature");
  add_output(jarz);

  auto* smp = app.add_subcommand("sample", "i.i.d. work samples");
  add_process(smp);
  add_state(smp);
  add_output(smp);
  smp->add_option("--scheme", cfg.scheme, "tpm or collective");
  smp->add_option("--n", cfg.copies, "number of samples")->required();
  std::uint64_t seed = 0;
  auto* seed_opt = smp->add_option("--seed", seed, "PRNG seed")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  if (seed_opt->count() > 0) cfg.seed = seed;
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  for (const auto* sub : nogo->get_subcommands()) cfg.nogo_kind = sub->get_name();

  try {
    detail::Output result;
    if (cfg.command == "tpm" || cfg.command == "collective") {
      result = detail::distribution_command(cfg, err);
    } else if (cfg.command == "lambda") {
      result = detail::lambda_command(cfg);
    } else if (cfg.command == "nogo") {
      result = detail::nogo_command(cfg);
    } else if (cfg.command == "sweep-alpha") {
      result = detail::sweep_command(cfg);
    } else if (cfg.command == "jarzynski") {
      result = detail::jarzynski_command(cfg);
    } else {
      result = detail::sample_command(cfg);
    }
    if (!cfg.outcomes_out.empty() && result.outcomes.empty()) {
      throw ParseError("--outcomes needs --format csv");
    }
    if (cfg.out.empty()) {
      out << result.main;
    } else {
      detail::write_text(cfg.out, result.main);
    }
    if (!cfg.outcomes_out.empty()) detail::write_text(cfg.outcomes_out, result.outcomes);
    return 0;
  } catch (const ParseError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qwork::cli
