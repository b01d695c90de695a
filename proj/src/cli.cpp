#include "qoscap/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qoscap/asymptotics.hpp"
#include "qoscap/effcap.hpp"
#include "qoscap/errors.hpp"
#include "qoscap/fading.hpp"
#include "qoscap/queue_sim.hpp"
#include "qoscap/training.hpp"

namespace qoscap::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::vector<double> log_spaced(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) {
    throw std::invalid_argument("grid requires 0 < lo < hi and >= 2 points");
  }
  std::vector<double> g(points);
  double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * i / (points - 1));
  }
  return g;
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("QOSCAP_OUTPUT_DIR")) {
      p = std::filesystem::path(dir) / p;
    }
  }
  return p;
}

/// One CSV block: a label (used for per-job file suffixes), a header, rows.
struct CsvBlock {
  std::string label;
  std::string header;
  std::vector<std::string> rows;
};

void emit(const std::vector<CsvBlock>& blocks, const std::string& output,
          const std::string& plot_script) {
  std::vector<std::string> written;
  if (output.empty()) {
    for (const auto& b : blocks) {
      if (blocks.size() > 1) std::cout << "# " << b.label << "\n";
      std::cout << b.header << "\n";
      for (const auto& r : b.rows) std::cout << r << "\n";
    }
  } else {
    auto base = resolve_output(output);
    for (const auto& b : blocks) {
      auto path = base;
      if (blocks.size() > 1) {
        path = base.parent_path() /
               (base.stem().string() + "_" + b.label + base.extension().string());
      }
      std::ofstream os(path);
      if (!os) {
        throw std::invalid_argument("cannot open output file " + path.string());
      }
      os << b.header << "\n";
      for (const auto& r : b.rows) os << r << "\n";
      written.push_back(path.string());
    }
  }
  if (!plot_script.empty()) {
    if (written.empty()) {
      throw std::invalid_argument("--plot-script requires --output");
    }
    std::ofstream ps(resolve_output(plot_script));
    ps << "set datafile separator ','\nset key autotitle columnhead\n";
    ps << "plot \\\n";
    for (std::size_t i = 0; i < written.size(); ++i) {
      ps << "  '" << written[i] << "' using 1:2 with lines"
         << (i + 1 < written.size() ? ", \\" : "") << "\n";
    }
  }
}

std::string theta_label(double theta) {
  std::ostringstream os;
  os << "theta" << theta;
  return os.str();
}

struct CurveJob {
  FadingModel model;
  double theta;
  double gamma = 1.0;  // training curves only
  double B = 0.0;      // overrides the common B when > 0
  std::string label;
};

EffCapPoint curve_point(const FadingModel& model, double theta, double T,
                        double B, double snr) {
  if (theta > 0.0) return optimize_rate({T, B, theta, snr}, model);
  return detail::optimize_fixed_rate_theta0(model, snr, 1.0 / B, B);
}

CsvBlock curve_block(const CurveJob& job, double T, double B,
                     const std::vector<double>& snr_grid, bool training) {
  CsvBlock block;
  block.label = job.label;
  block.header = "snr,eb_n0_db,spectral_eff,r_opt,alpha_opt";
  double bw = job.B > 0.0 ? job.B : B;
  for (double snr : snr_grid) {
    double eb_db, re, r_opt, alpha;
    if (training) {
      TrainingPoint pt =
          optimize_rate_training({job.gamma, T, bw, job.theta, snr});
      eb_db = pt.bit_energy_db;
      re = pt.spectral_efficiency;
      r_opt = pt.r_opt;
      alpha = pt.alpha_opt;
    } else {
      EffCapPoint pt = curve_point(job.model, job.theta, T, bw, snr);
      eb_db = pt.bit_energy_db;
      re = pt.spectral_efficiency;
      r_opt = pt.r_opt;
      alpha = pt.alpha_opt;
    }
    block.rows.push_back(fmt(snr) + "," + fmt(eb_db) + "," + fmt(re) + "," +
                         fmt(r_opt) + "," + fmt(alpha));
  }
  return block;
}

CsvBlock wideband_curve_block(const CurveJob& job, double T,
                              double pbar_over_n0,
                              const std::vector<double>& snr_grid) {
  CsvBlock block;
  block.label = job.label;
  block.header = "snr,eb_n0_db,spectral_eff,r_opt,alpha_opt";
  for (double snr : snr_grid) {
    double bw = pbar_over_n0 / snr;
    EffCapPoint pt = curve_point(job.model, job.theta, T, bw, snr);
    block.rows.push_back(fmt(snr) + "," + fmt(pt.bit_energy_db) + "," +
                         fmt(pt.spectral_efficiency) + "," + fmt(pt.r_opt) +
                         "," + fmt(pt.alpha_opt));
  }
  return block;
}

struct CommonOpts {
  std::string model_text = "rayleigh:gamma=1";
  std::vector<double> thetas;
  double T = 2e-3;
  double B = 0.0;
  double pbar_over_n0 = 0.0;
  double gamma = 1.0;
  double snr = 0.0;
  std::vector<double> snr_grid_spec;  // lo hi points
  std::string output;
  std::string plot_script;
  std::string preset;
};

std::vector<double> resolve_snr_grid(const CommonOpts& o,
                                     std::vector<double> fallback) {
  if (o.snr_grid_spec.size() == 3) {
    return log_spaced(o.snr_grid_spec[0], o.snr_grid_spec[1],
                      static_cast<int>(o.snr_grid_spec[2]));
  }
  if (!o.snr_grid_spec.empty()) {
    throw std::invalid_argument("--snr-grid expects LO HI POINTS");
  }
  if (o.snr > 0.0) return {o.snr};
  if (!fallback.empty()) return fallback;
  throw std::invalid_argument("missing --snr or --snr-grid");
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_model = true) {
  if (with_model) {
    cmd->add_option("--model", o.model_text,
                    "fading model, e.g. rayleigh:gamma=1 | nakagami:m=2 | "
                    "gamma:n=3,lambda=3");
  }
  cmd->add_option("--theta", o.thetas, "QoS exponent(s), 1/bit");
  cmd->add_option("--T", o.T, "frame duration, s");
  cmd->add_option("-o,--output", o.output,
                  "output CSV path (default: stdout; relative paths honor "
                  "QOSCAP_OUTPUT_DIR)");
  cmd->add_option("--plot-script", o.plot_script,
                  "write a gnuplot script referencing the CSV output");
}

int run_impl(const std::vector<std::string>& args) {
  CLI::App app{
      "qoscap: throughput and energy-efficiency limits of fixed-rate "
      "transmission over block-fading ON-OFF channels under statistical "
      "QoS constraints"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string regime = "lowpower";
  double arrival = 0.0, rate = 0.0, alpha = 0.0;
  std::size_t frames = 10000000;
  std::uint64_t seed = 1;

  auto* alpha_cmd = app.add_subcommand(
      "alpha-star", "limiting outage threshold; CSV: "
                    "regime,theta,alpha_star,qos_param");
  alpha_cmd->add_option("--regime", regime)
      ->check(CLI::IsMember({"wideband", "lowpower"}));
  alpha_cmd->add_option("--pbar-over-n0", o.pbar_over_n0, "Pbar/N0, Hz");
  add_common(alpha_cmd, o);

  auto* limits_cmd = app.add_subcommand(
      "limits", "bit energy at zero spectral efficiency and wideband slope; "
                "CSV: regime,theta,alpha_star,eb_n0_db,s0,qos_param,"
                "is_minimum");
  limits_cmd->add_option("--regime", regime)
      ->check(CLI::IsMember({"wideband", "lowpower"}));
  limits_cmd->add_option("--B", o.B, "bandwidth, Hz (lowpower)");
  limits_cmd->add_option("--pbar-over-n0", o.pbar_over_n0,
                         "Pbar/N0, Hz (wideband)");
  add_common(limits_cmd, o);

  auto* cwb = app.add_subcommand(
      "curve-wideband", "spectral efficiency vs bit energy at fixed Pbar/N0 "
                        "(bandwidth varies with the SNR grid); CSV: "
                        "snr,eb_n0_db,spectral_eff,r_opt,alpha_opt");
  cwb->add_option("--pbar-over-n0", o.pbar_over_n0, "Pbar/N0, Hz");
  cwb->add_option("--snr-grid", o.snr_grid_spec, "LO HI POINTS, log-spaced")
      ->expected(3);
  cwb->add_option("--preset", o.preset, "fig3 | fig4");
  add_common(cwb, o);

  auto* clp = app.add_subcommand(
      "curve-lowpower", "spectral efficiency vs bit energy at fixed "
                        "bandwidth; CSV: snr,eb_n0_db,spectral_eff,r_opt,"
                        "alpha_opt");
  clp->add_option("--B", o.B, "bandwidth, Hz");
  clp->add_option("--snr-grid", o.snr_grid_spec, "LO HI POINTS, log-spaced")
      ->expected(3);
  clp->add_option("--preset", o.preset, "fig5 | fig6");
  add_common(clp, o);

  auto* ctr = app.add_subcommand(
      "curve-training", "training-based link curves; CSV: snr,eb_n0_db,"
                        "spectral_eff,r_opt,alpha_opt");
  ctr->add_option("--B", o.B, "bandwidth, Hz");
  ctr->add_option("--gamma", o.gamma, "mean channel power gain");
  ctr->add_option("--snr-grid", o.snr_grid_spec, "LO HI POINTS, log-spaced")
      ->expected(3);
  ctr->add_option("--preset", o.preset, "fig9 | fig10 | fig11");
  add_common(ctr, o, /*with_model=*/false);

  auto* rho = app.add_subcommand(
      "rho-opt", "optimal pilot energy fraction; CSV: snr,rho_opt,snr_eff");
  rho->add_option("--B", o.B, "bandwidth, Hz");
  rho->add_option("--gamma", o.gamma, "mean channel power gain");
  rho->add_option("--snr", o.snr, "single SNR value");
  rho->add_option("--snr-grid", o.snr_grid_spec, "LO HI POINTS, log-spaced")
      ->expected(3);
  rho->add_option("--preset", o.preset, "fig8");
  add_common(rho, o, /*with_model=*/false);

  auto* sim = app.add_subcommand(
      "simulate", "buffered ON-OFF link trace; CSV: frame,queue_bits,"
                  "on_state");
  sim->add_option("--arrival", arrival, "constant arrival rate a, bits/s")
      ->required();
  sim->add_option("--rate", rate, "fixed transmission rate r, bits/s")
      ->required();
  sim->add_option("--alpha", alpha, "outage threshold")->required();
  sim->add_option("--frames", frames, "number of frames");
  sim->add_option("--seed", seed, "RNG seed");
  add_common(sim, o);

  auto* val = app.add_subcommand(
      "validate", "fit the queue-tail decay rate against theta; CSV: "
                  "theta_hat,q_lo,q_hi,r2,n_frames");
  val->add_option("--B", o.B, "bandwidth, Hz");
  val->add_option("--snr", o.snr, "average SNR");
  val->add_option("--frames", frames, "number of frames");
  val->add_option("--seed", seed, "RNG seed");
  add_common(val, o);

  std::vector<const char*> argv;
  argv.push_back("qoscap");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  std::vector<CsvBlock> blocks;

  if (alpha_cmd->parsed()) {
    FadingModel model = parse_model(o.model_text);
    CsvBlock b{"alpha_star", "regime,theta,alpha_star,qos_param", {}};
    if (regime == "wideband") {
      if (!(o.pbar_over_n0 > 0.0)) {
        throw std::invalid_argument("wideband regime requires --pbar-over-n0");
      }
      if (o.thetas.empty()) {
        throw std::invalid_argument("wideband alpha-star requires --theta");
      }
      for (double th : o.thetas) {
        auto res = wideband_limits(th, o.T, o.pbar_over_n0, model);
        b.rows.push_back("wideband," + fmt(th) + "," + fmt(res.alpha_star) +
                         "," + fmt(res.qos_param));
      }
    } else {
      double a_star = lowpower_alpha_star(model);
      if (o.thetas.empty()) o.thetas = {0.0};
      for (double th : o.thetas) {
        b.rows.push_back("lowpower," + fmt(th) + "," + fmt(a_star) + "," +
                         fmt(th * o.T * o.B / 0.6931471805599453));
      }
    }
    blocks.push_back(std::move(b));
  } else if (limits_cmd->parsed()) {
    FadingModel model = parse_model(o.model_text);
    if (o.thetas.empty()) {
      throw std::invalid_argument("limits requires at least one --theta");
    }
    CsvBlock b{"limits",
               "regime,theta,alpha_star,eb_n0_db,s0,qos_param,is_minimum",
               {}};
    for (double th : o.thetas) {
      AsymptoticResult res;
      if (regime == "wideband") {
        if (!(o.pbar_over_n0 > 0.0)) {
          throw std::invalid_argument(
              "wideband regime requires --pbar-over-n0");
        }
        res = wideband_limits(th, o.T, o.pbar_over_n0, model);
      } else {
        if (!(o.B > 0.0)) {
          throw std::invalid_argument("lowpower regime requires --B");
        }
        res = lowpower_limits(th, o.T, o.B, model);
      }
      b.rows.push_back(std::string(regime) + "," + fmt(th) + "," +
                       fmt(res.alpha_star) + "," + fmt(res.eb_n0_zero_db) +
                       "," + fmt(res.wideband_slope) + "," +
                       fmt(res.qos_param) + "," +
                       (res.is_minimum ? "1" : "0"));
    }
    blocks.push_back(std::move(b));
  } else if (cwb->parsed()) {
    std::vector<CurveJob> jobs;
    std::vector<double> grid_fallback;
    if (o.preset == "fig3") {
      if (o.thetas.empty()) o.thetas = {0.0, 0.001, 0.01, 0.1, 1.0};
      if (!(o.pbar_over_n0 > 0.0)) o.pbar_over_n0 = 1e4;
      grid_fallback = log_spaced(1e-5, 1.0, 40);
      for (double th : o.thetas) {
        jobs.push_back({FadingModel::rayleigh(1.0), th, 1.0, 0.0,
                        theta_label(th)});
      }
    } else if (o.preset == "fig4") {
      double th = o.thetas.empty() ? 0.01 : o.thetas.front();
      if (!(o.pbar_over_n0 > 0.0)) o.pbar_over_n0 = 1e4;
      grid_fallback = log_spaced(1e-5, 1.0, 40);
      for (double m : {0.6, 1.0, 2.0, 5.0}) {
        std::ostringstream lab;
        lab << "m" << m << "_" << theta_label(th);
        jobs.push_back({FadingModel::nakagami(m), th, 1.0, 0.0, lab.str()});
      }
    } else if (!o.preset.empty()) {
      throw std::invalid_argument("unknown preset '" + o.preset + "'");
    } else {
      if (o.thetas.empty()) {
        throw std::invalid_argument("curve-wideband requires --theta");
      }
      if (!(o.pbar_over_n0 > 0.0)) {
        throw std::invalid_argument("curve-wideband requires --pbar-over-n0");
      }
      FadingModel model = parse_model(o.model_text);
      for (double th : o.thetas) {
        jobs.push_back({model, th, 1.0, 0.0, theta_label(th)});
      }
    }
    auto grid = resolve_snr_grid(o, grid_fallback);
    for (const auto& job : jobs) {
      blocks.push_back(wideband_curve_block(job, o.T, o.pbar_over_n0, grid));
    }
  } else if (clp->parsed()) {
    std::vector<CurveJob> jobs;
    std::vector<double> grid_fallback;
    if (o.preset == "fig5") {
      if (o.thetas.empty()) o.thetas = {0.0, 0.001, 0.01, 0.1, 1.0};
      if (!(o.B > 0.0)) o.B = 1e5;
      grid_fallback = log_spaced(1e-5, 1.0, 40);
      for (double th : o.thetas) {
        jobs.push_back({FadingModel::rayleigh(1.0), th, 1.0, 0.0,
                        theta_label(th)});
      }
    } else if (o.preset == "fig6") {
      double th = o.thetas.empty() ? 0.01 : o.thetas.front();
      if (!(o.B > 0.0)) o.B = 1e5;
      grid_fallback = log_spaced(1e-5, 1.0, 40);
      for (double m : {0.6, 1.0, 2.0, 5.0}) {
        std::ostringstream lab;
        lab << "m" << m << "_" << theta_label(th);
        jobs.push_back({FadingModel::nakagami(m), th, 1.0, 0.0, lab.str()});
      }
    } else if (!o.preset.empty()) {
      throw std::invalid_argument("unknown preset '" + o.preset + "'");
    } else {
      if (o.thetas.empty()) {
        throw std::invalid_argument("curve-lowpower requires --theta");
      }
      if (!(o.B > 0.0)) {
        throw std::invalid_argument("curve-lowpower requires --B");
      }
      FadingModel model = parse_model(o.model_text);
      for (double th : o.thetas) {
        jobs.push_back({model, th, 1.0, 0.0, theta_label(th)});
      }
    }
    auto grid = resolve_snr_grid(o, grid_fallback);
    for (const auto& job : jobs) {
      blocks.push_back(curve_block(job, o.T, o.B, grid, /*training=*/false));
    }
  } else if (ctr->parsed()) {
    std::vector<CurveJob> jobs;
    std::vector<double> grid_fallback;
    FadingModel unit = FadingModel::rayleigh(1.0);
    auto b_label = [](double th, double bw) {
      std::ostringstream lab;
      lab << "B" << bw << "_" << theta_label(th);
      return lab.str();
    };
    if (o.preset == "fig9") {
      if (o.thetas.empty()) o.thetas = {0.001, 0.01, 0.1, 1.0};
      if (!(o.B > 0.0)) o.B = 1e5;
      grid_fallback = log_spaced(1e-4, 10.0, 50);
      for (double th : o.thetas) {
        jobs.push_back({unit, th, o.gamma, 0.0, theta_label(th)});
      }
    } else if (o.preset == "fig10") {
      double th = o.thetas.empty() ? 0.01 : o.thetas.front();
      grid_fallback = log_spaced(1e-4, 10.0, 50);
      for (double bw : {1e4, 1e5, 1e6, 1e7}) {
        jobs.push_back({unit, th, o.gamma, bw, b_label(th, bw)});
      }
    } else if (o.preset == "fig11") {
      if (o.thetas.empty()) o.thetas = {0.0, 0.1};
      grid_fallback = log_spaced(1e-4, 10.0, 50);
      for (double th : o.thetas) {
        for (double bw : {1e4, 1e5, 1e6, 1e7}) {
          jobs.push_back({unit, th, o.gamma, bw, b_label(th, bw)});
        }
      }
    } else if (!o.preset.empty()) {
      throw std::invalid_argument("unknown preset '" + o.preset + "'");
    } else {
      if (o.thetas.empty()) {
        throw std::invalid_argument("curve-training requires --theta");
      }
      if (!(o.B > 0.0)) {
        throw std::invalid_argument("curve-training requires --B");
      }
      for (double th : o.thetas) {
        jobs.push_back({unit, th, o.gamma, 0.0, theta_label(th)});
      }
    }
    auto grid = resolve_snr_grid(o, grid_fallback);
    for (const auto& job : jobs) {
      blocks.push_back(curve_block(job, o.T, o.B, grid, /*training=*/true));
    }
  } else if (rho->parsed()) {
    if (o.preset == "fig8") {
      if (!(o.B > 0.0)) o.B = 1e7;
      if (o.snr_grid_spec.empty() && !(o.snr > 0.0)) {
        o.snr_grid_spec = {1e-6, 1e3, 60};
      }
    } else if (!o.preset.empty()) {
      throw std::invalid_argument("unknown preset '" + o.preset + "'");
    }
    if (!(o.B > 0.0)) {
      throw std::invalid_argument("rho-opt requires --B");
    }
    auto grid = resolve_snr_grid(o, {});
    CsvBlock b{"rho_opt", "snr,rho_opt,snr_eff", {}};
    for (double snr : grid) {
      double r = optimal_training_fraction(snr, o.gamma, o.T, o.B);
      double se = effective_snr(r, snr, o.gamma, o.T, o.B);
      b.rows.push_back(fmt(snr) + "," + fmt(r) + "," + fmt(se));
    }
    blocks.push_back(std::move(b));
  } else if (sim->parsed()) {
    FadingModel model = parse_model(o.model_text);
    QueueParams qp{arrival, rate, alpha, o.T, model, frames, seed};
    QueueTrace trace = simulate_queue(qp);
    CsvBlock b{"trace", "frame,queue_bits,on_state", {}};
    b.rows.reserve(trace.queue_samples.size());
    for (std::size_t k = 0; k < trace.queue_samples.size(); ++k) {
      b.rows.push_back(std::to_string(k) + "," + fmt(trace.queue_samples[k]) +
                       "," + std::to_string(trace.on_state[k]));
    }
    blocks.push_back(std::move(b));
  } else if (val->parsed()) {
    FadingModel model = parse_model(o.model_text);
    if (o.thetas.size() != 1) {
      throw std::invalid_argument("validate requires exactly one --theta");
    }
    if (!(o.B > 0.0) || !(o.snr > 0.0)) {
      throw std::invalid_argument("validate requires --B and --snr");
    }
    auto report = validate_effective_capacity(o.thetas.front(), o.snr, o.T,
                                              o.B, model, frames, seed);
    CsvBlock b{"validate", "theta_hat,q_lo,q_hi,r2,n_frames", {}};
    b.rows.push_back(decay_record(report.decay));
    blocks.push_back(std::move(b));
  }

  emit(blocks, o.output, o.plot_script);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  try {
    return run_impl(args);
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace qoscap::cli
