// Copyright 2026 The bosonic-clt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Command-line front end: gaussify, converge, capacity and demo.
//
// Exit codes: 0 success, 1 numerical failure, 2 invalid input,
// 3 physicality-certificate failure, 4 convergence-threshold miss.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bosonic_clt/analysis.hpp"
#include "bosonic_clt/channel_spec.hpp"
#include "bosonic_clt/convolution.hpp"
#include "bosonic_clt/errors.hpp"
#include "bosonic_clt/gaussification.hpp"
#include "bosonic_clt/report_io.hpp"

namespace bclt {

enum ExitCode : int {
  kExitOk = 0,
  kExitNumerical = 1,
  kExitInvalid = 2,
  kExitCertificate = 3,
  kExitThreshold = 4,
};

struct RunConfig {
  std::string command;
  std::string demo;
  std::string spec_path;
  int cutoff = -1;
  std::string alpha = "1";
  int k_max = 8;
  bool k_max_set = false;
  double threshold = 0.05;
  std::optional<double> energy;
  std::string out_dir;
  std::string format = "both";
};

namespace cli_detail {

class Emitter {
 public:
  Emitter(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {}

  /// Writes <stem>.json and/or <stem>.csv under --out, or prints the JSON
  /// (the CSV for --format csv) when no directory is given.
  void emit(const std::string& stem, const Json& report, const std::string& csv = {}) const {
    const bool want_json = config_.format != "csv" || csv.empty();
    const bool want_csv = config_.format != "json" && !csv.empty();
    if (config_.out_dir.empty()) {
      out_ << (config_.format == "csv" && !csv.empty() ? csv : dump_json(report));
      return;
    }
    const std::filesystem::path dir(config_.out_dir);
    std::filesystem::create_directories(dir);
    if (want_json) write(dir / (stem + ".json"), dump_json(report));
    if (want_csv) write(dir / (stem + ".csv"), csv);
  }

  bool to_directory() const { return !config_.out_dir.empty(); }
  std::ostream& out() const { return out_; }

 private:
  void write(const std::filesystem::path& path, const std::string& text) const {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw InvalidArgument("cannot write " + path.string());
    file << text;
    out_ << "wrote " << path.string() << '\n';
  }

  const RunConfig& config_;
  std::ostream& out_;
};

inline ChannelSpec require_spec(const RunConfig& config) {
  if (config.spec_path.empty()) throw InvalidArgument(config.command + ": --spec is required");
  return load_channel_spec(config.spec_path, config.cutoff);
}

inline FockSpaceConfig demo_config(const RunConfig& config, int fallback) {
  return FockSpaceConfig::single_mode(config.cutoff > 0 ? config.cutoff : fallback);
}

inline ConvergenceOptions convergence_options(const RunConfig& config, int fallback_k) {
  ConvergenceOptions options;
  options.k_max = config.k_max_set ? config.k_max : fallback_k;
  options.channel_side_max_k = std::min(3, options.k_max);
  return options;
}

inline int cmd_gaussify(const RunConfig& config, std::ostream& out) {
  const ChannelSpec spec = require_spec(config);
  if (spec.gaussian) {
    const Certificate cert = uncertainty_certificate(*spec.gaussian);
    const Json report = {{"label", spec.source.value("label", spec.type)},
                         {"gaussification", to_json(*spec.gaussian)},
                         {"certificate", to_json(cert)}};
    Emitter(config, out).emit("gaussify", report);
    return cert.physical ? kExitOk : kExitCertificate;
  }
  const KrausChannel channel = build_channel(spec);
  const MomentData moments = extract_moments(channel);
  const GaussianChannelParams params = extract_xy(channel);
  const Certificate cert = uncertainty_certificate(params);
  const Json report = {{"label", channel.label()},
                       {"cutoff", channel.cutoff()},
                       {"completeness_defect", channel.completeness_defect()},
                       {"gaussification", to_json(params)},
                       {"moments", to_json(moments)},
                       {"certificate", to_json(cert)}};
  Emitter(config, out).emit("gaussify", report);
  return cert.physical ? kExitOk : kExitCertificate;
}

inline int converge_exit(const ConvergenceReport& report, const RunConfig& config, std::ostream& out,
                         const Emitter& emitter) {
  const double final_distance = report.rows.back().trace_distance;
  const bool pass = final_distance < config.threshold;
  if (emitter.to_directory()) {
    out << report.label << ": final trace distance " << format_double(final_distance) << " at k = "
        << report.rows.back().k << (pass ? " below " : " not below ") << "threshold "
        << format_double(config.threshold) << '\n';
  }
  return pass ? kExitOk : kExitThreshold;
}

inline int cmd_converge(const RunConfig& config, std::ostream& out) {
  const ChannelSpec spec = require_spec(config);
  const KrausChannel channel = build_channel(spec);
  const Complex alpha = detail::parse_complex_list(config.alpha, "--alpha");
  const ConvergenceReport report = convergence_study(channel, alpha, convergence_options(config, 8));
  const Emitter emitter(config, out);
  emitter.emit("convergence", to_json(report), convergence_csv(report));
  return converge_exit(report, config, out, emitter);
}

inline int cmd_capacity(const RunConfig& config, std::ostream& out) {
  const ChannelSpec spec = require_spec(config);
  CapacityReport report;
  if (spec.type == "dephasing") {
    report = capacity_comparison(*spec.angular, spec.source.value("label", spec.type));
  } else if (spec.type == "pure_loss") {
    report.label = spec.source.value("label", spec.type);
    report.transmissivity = *spec.transmissivity;
    report.pure_loss_capacity = pure_loss_capacity(*spec.transmissivity);
    report.gap_sign = "not_applicable";
  } else {
    throw InvalidArgument("capacity: expects a dephasing or pure_loss spec, got '" + spec.type + "'");
  }
  if (config.energy) {
    if (!(*config.energy >= 0.0)) throw InvalidArgument("capacity: --energy must be non-negative");
    KrausChannel current = build_channel(spec);
    const FockOperator thermal = thermal_state(*config.energy, current.config()).rho;
    const int k_max = config.k_max_set ? config.k_max : 0;
    if (k_max < 0 || k_max > 3) throw InvalidArgument("capacity: --kmax must lie in [0, 3]");
    for (int k = 0; k <= k_max; ++k) {
      if (k > 0) current = channel_convolve2(current);
      report.samples.push_back({k, *config.energy, coherent_information(current, thermal)});
    }
  }
  const Emitter emitter(config, out);
  emitter.emit("capacity", to_json(report), capacity_csv(report));
  if (emitter.to_directory()) {
    out << report.label << ": ";
    if (report.dephasing_capacity) out << "dephasing capacity " << format_double(*report.dephasing_capacity) << ", ";
    out << "pure-loss capacity " << format_double(report.pure_loss_capacity) << " (lambda "
        << format_double(report.transmissivity) << "), gap " << report.gap_sign << '\n';
  }
  return kExitOk;
}

inline int demo_classical_clt(const RunConfig& config, std::ostream& out) {
  NoiseDistribution dist = NoiseDistribution::symmetric_two_point(0.5);
  FockSpaceConfig fock = demo_config(config, 20);
  if (!config.spec_path.empty()) {
    const ChannelSpec spec = require_spec(config);
    if (spec.type != "additive_noise") throw InvalidArgument("classical-clt: spec must be additive_noise");
    dist = *spec.noise;
    fock = spec.config();
  }
  const ConvergenceReport report = classical_clt_demo(dist, fock, convergence_options(config, 8));
  Emitter(config, out).emit("classical-clt", to_json(report), convergence_csv(report));
  return kExitOk;
}

inline int demo_cushen_hudson(const RunConfig& config, std::ostream& out) {
  const FockSpaceConfig fock = demo_config(config, 24);
  std::optional<KrausChannel> channel;
  if (config.spec_path.empty()) {
    channel = replacement_channel(fock_state(1, fock), "replacement(fock:1)");
  } else {
    channel = build_channel(require_spec(config));
  }
  const Complex alpha = detail::parse_complex_list(config.alpha, "--alpha");
  const ConvergenceReport report = convergence_study(*channel, alpha, convergence_options(config, 7));
  Emitter(config, out).emit("cushen-hudson", to_json(report), convergence_csv(report));
  return kExitOk;
}

inline KrausChannel demo_channel_or(const RunConfig& config, KrausChannel fallback) {
  return config.spec_path.empty() ? std::move(fallback) : build_channel(require_spec(config));
}

inline int demo_no_signalling(const RunConfig& config, std::ostream& out) {
  const FockSpaceConfig fock = demo_config(config, 20);
  const KrausChannel channel = demo_channel_or(
      config, additive_noise_channel(NoiseDistribution::symmetric_two_point(0.3), fock, "additive_noise(+-0.3)"));
  const LinearityScreen screen = linearity_screen(channel);
  const Json report = {{"label", channel.label()},
                       {"cutoff", channel.cutoff()},
                       {"probes", {"vacuum", "coherent:0.7", "thermal:0.5"}},
                       {"no_signalling_defect", screen.no_signalling},
                       {"marginal_symmetry_defect", screen.marginal_symmetry},
                       {"tolerance", kLinearityTolerance},
                       {"linear", screen.no_signalling <= kLinearityTolerance &&
                                      screen.marginal_symmetry <= kLinearityTolerance}};
  Emitter(config, out).emit("no-signalling", report);
  return kExitOk;
}

inline int demo_kac_bernstein(const RunConfig& config, std::ostream& out) {
  const FockSpaceConfig fock = demo_config(config, 20);
  std::vector<KrausChannel> channels;
  if (config.spec_path.empty()) {
    channels.push_back(pure_loss(0.6, fock));
    channels.push_back(dephasing_channel(AngularDistribution::von_mises(2.0), fock, "dephasing(von_mises 2)"));
  } else {
    channels.push_back(build_channel(require_spec(config)));
  }
  Json rows = Json::array();
  for (const auto& channel : channels) {
    const FockOperator rho = coherent_state(0.7, channel.config()).rho;
    const FockOperator sigma = coherent_state(Complex(0.0, -0.4), channel.config()).rho;
    rows.push_back({{"label", channel.label()},
                    {"inputs", {"coherent:0.7", "coherent:0,-0.4"}},
                    {"output_mutual_information_bits", product_preservation_defect(channel, rho, sigma)}});
  }
  Emitter(config, out).emit("kac-bernstein", {{"cutoff", fock.cutoff}, {"channels", rows}});
  return kExitOk;
}

inline int cmd_demo(const RunConfig& config, std::ostream& out) {
  if (config.demo == "classical-clt") return demo_classical_clt(config, out);
  if (config.demo == "cushen-hudson") return demo_cushen_hudson(config, out);
  if (config.demo == "no-signalling") return demo_no_signalling(config, out);
  if (config.demo == "kac-bernstein") return demo_kac_bernstein(config, out);
  throw InvalidArgument("unknown demo '" + config.demo +
                        "' (expected classical-clt, cushen-hudson, no-signalling or kac-bernstein)");
}

inline int dispatch(const RunConfig& config, std::ostream& out) {
  if (config.command == "gaussify") return cmd_gaussify(config, out);
  if (config.command == "converge") return cmd_converge(config, out);
  if (config.command == "capacity") return cmd_capacity(config, out);
  return cmd_demo(config, out);
}

inline void add_shared_options(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--spec", config.spec_path, "channel spec JSON file");
  cmd->add_option("--cutoff", config.cutoff, "Fock cutoff d, overrides the spec")->check(CLI::Range(2, 4096));
  cmd->add_option("--alpha", config.alpha, "coherent amplitude as re[,im]")->capture_default_str();
  cmd->add_option_function<int>(
         "--kmax",
         [&config](int k) {
           config.k_max = k;
           config.k_max_set = true;
         },
         "largest k; outputs use 2^k channel copies")
      ->check(CLI::Range(0, 10));
  cmd->add_option("--threshold", config.threshold, "trace-distance threshold for converge")->capture_default_str();
  cmd->add_option("--out", config.out_dir, "directory for report files; stdout when omitted");
  cmd->add_option("--format", config.format, "report format")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
}

}  // namespace cli_detail

/// Reports a failed command on `err` and maps it to an exit code.
inline int exit_code_for(std::exception_ptr failure, std::ostream& err) {
  try {
    std::rethrow_exception(failure);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
  } catch (const NonlinearChannel& e) {
    err << "error: " << e.what() << '\n';
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (...) {
    err << "numerical failure: unknown error\n";
    return kExitNumerical;
  }
  return kExitInvalid;
}

/// Runs one command. Returns the process exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  RunConfig config;
  CLI::App app{"Symmetric convolution and Gaussification of bosonic channels", "bosonic-clt"};
  app.require_subcommand(1);
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"gaussify", "print the Gaussification (X, Y), moment data and uncertainty certificate"},
      {"converge", "convergence of the convolved channel toward its Gaussification"},
      {"capacity", "dephasing and pure-loss capacities of a dephasing or pure-loss spec"},
      {"demo", "canned experiments: classical-clt, cushen-hudson, no-signalling, kac-bernstein"},
  };
  for (const auto& c : commands) {
    CLI::App* cmd = app.add_subcommand(c.name, c.help);
    cli_detail::add_shared_options(cmd, config);
    cmd->callback([&config, name = std::string(c.name)] { config.command = name; });
    if (std::string(c.name) == "demo") {
      cmd->add_option("name", config.demo, "demo name")->required();
    }
    if (std::string(c.name) == "capacity") {
      cmd->add_option_function<double>("--energy", [&config](double e) { config.energy = e; },
                                        "mean photon number for coherent-information samples");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    return cli_detail::dispatch(config, out);
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace bclt
