#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mimo_lab/bounds.hpp"
#include "mimo_lab/concentration.hpp"
#include "mimo_lab/detequiv.hpp"
#include "mimo_lab/errors.hpp"
#include "mimo_lab/harness.hpp"

using namespace mimo_lab;

namespace {

constexpr int kConfigExit = 2;
constexpr int kNumericExit = 3;

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "plotdata") return OutputFormat::PlotData;
  throw ConfigError("unknown format '" + s + "'");
}

void emit(const ResultTable& table, const std::string& out, const std::string& format) {
  const OutputFormat f = parse_format(format);
  if (out.empty() || out == "-")
    write_results(table, std::cout, f);
  else
    write_results(table, out, f);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicell massive MIMO rate bounds and deterministic equivalents"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int trials = 0;
  std::string out;
  std::string format = "csv";

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string config_path;
  run->add_option("config", config_path, "Config file")->required();

  auto* reproduce = app.add_subcommand("reproduce", "Reproduce a figure (fig2, fig3, fig5, fig6, fig7)");
  std::string figure;
  std::string scale = "desk";
  reproduce->add_option("figure", figure, "Figure name")->required();
  reproduce->add_option("--scale", scale, "desk or full")->check(CLI::IsMember({"desk", "full"}));

  for (auto* sub : {run, reproduce}) {
    sub->add_option("--seed", seed, "Override the seed");
    sub->add_option("--trials", trials, "Override the trial count");
    sub->add_option("--out", out, "Output path (stdout when omitted)");
    sub->add_option("--format", format, "csv or plotdata")->check(CLI::IsMember({"csv", "plotdata"}));
  }

  auto* de = app.add_subcommand("detequiv", "Solve a det-equiv fixed point from a problem file");
  std::string problem_path;
  double omega_scale = 0.0;
  de->add_option("problem", problem_path, "Problem file")->required();
  de->add_option("--primed", omega_scale, "Also solve the primed system with Omega = c I");

  auto* scaling = app.add_subcommand("scaling", "Evaluate a closed-form scaling law");
  std::string law = "orthogonal";
  ScalingParams sp;
  double snr_db = 10.0;
  std::string regime = "strong";
  scaling->add_option("law", law, "legacy-contaminated, legacy-global, orthogonal, nonorthogonal, regime, cutset")
      ->check(CLI::IsMember({"legacy-contaminated", "legacy-global", "orthogonal", "nonorthogonal", "regime", "cutset"}));
  scaling->add_option("--M", sp.M, "Antennas");
  scaling->add_option("--K", sp.K, "Users per cell");
  scaling->add_option("--L", sp.L, "Cells");
  scaling->add_option("--T_c", sp.T_c, "Coherence block length");
  scaling->add_option("--r", sp.r, "Covariance rank");
  scaling->add_option("--snr_db", snr_db, "Sum SNR per cell in dB");
  scaling->add_option("--iota", sp.iota, "Inter-cell factor");
  scaling->add_option("--tr_lambda", sp.tr_lambda, "Trace of the own covariance (default from the regime)");
  scaling->add_option("--regime", regime, "strong or very_strong")->check(CLI::IsMember({"strong", "very_strong"}));

  auto* lemma = app.add_subcommand("lemma-check", "Concentration statistics against dimension");
  std::string kind_name;
  std::vector<int> dims{64, 128, 256, 512};
  int lemma_trials = 1000;
  std::uint64_t lemma_seed = 1;
  lemma->add_option("kind", kind_name, "TraceLemma, ConstantModulus, UnboundedNorm, IndependentVectors, HaarProduct, FourierProduct")
      ->required();
  lemma->add_option("dims", dims, "Increasing dimensions");
  lemma->add_option("--trials", lemma_trials, "Trials per dimension");
  lemma->add_option("--seed", lemma_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try {
    if (*run) {
      ExperimentSpec spec = load_config(config_path);
      if (seed > 0) spec.seed = seed;
      if (trials > 0) spec.trials = trials;
      emit(run_experiment(spec), out, format);
    } else if (*reproduce) {
      emit(reproduce_figure(figure, scale == "full" ? Scale::Full : Scale::Desk, trials, seed), out, format);
    } else if (*de) {
      const DetEquivJob job = parse_detequiv_problem(slurp(problem_path));
      const DetEquivSolution sol = solve_fixed_point(job.problem, job.tol, job.max_iter);
      std::cout << "e =";
      for (Eigen::Index i = 0; i < sol.e.size(); ++i) std::cout << (i ? ", " : " ") << num(sol.e(i));
      std::cout << "\nm = " << num(sol.m) << "\niterations = " << sol.iterations << "\nresidual = " << num(sol.residual)
                << '\n';
      if (omega_scale > 0.0) {
        const int N = job.problem.N();
        const PrimedSolution pr =
            solve_primed(job.problem, sol, omega_scale * CMatrix::Identity(N, N));
        std::cout << "e_prime =";
        for (Eigen::Index i = 0; i < pr.e_prime.size(); ++i) std::cout << (i ? ", " : " ") << num(pr.e_prime(i));
        std::cout << "\ntrace_T_prime = " << num(pr.T_prime.trace().real()) << '\n';
      }
    } else if (*scaling) {
      sp.snr = std::pow(10.0, snr_db / 10.0);
      sp.regime = regime == "strong" ? Regime::Strong : Regime::VeryStrong;
      double value = 0.0;
      if (law == "legacy-contaminated") value = legacy_scaling(LegacyKind::Contaminated, sp);
      else if (law == "legacy-global") value = legacy_scaling(LegacyKind::GlobalOrth, sp);
      else if (law == "orthogonal") value = asymptotic_capacity(AsymptoticLaw::OrthogonalPilot, sp);
      else if (law == "nonorthogonal") value = asymptotic_capacity(AsymptoticLaw::NonOrthogonal, sp);
      else if (law == "regime") value = asymptotic_capacity(AsymptoticLaw::CorrelationRegime, sp);
      else {
        const double tr = sp.tr_lambda > 0.0 ? sp.tr_lambda : (sp.regime == Regime::Strong ? sp.M : sp.r);
        value = cutset_leading(sp.snr / sp.K, tr, sp.T_c);
      }
      std::cout << law << " = " << num(value) << " bits/s/Hz\n";
    } else if (*lemma) {
      const auto kind = parse_concentration_kind(kind_name);
      if (!kind) throw ConfigError("unknown lemma kind '" + kind_name + "'");
      Rng rng(lemma_seed, {stream::kLemma, static_cast<std::uint64_t>(*kind)});
      const ConcentrationReport rep = concentration_check(*kind, dims, lemma_trials, rng);
      std::cout << "# " << to_string(rep.kind) << " trials=" << lemma_trials << "\n";
      std::cout << "dim mean target stddev rms_deviation max_deviation\n";
      for (const auto& p : rep.points)
        std::cout << p.dim << ' ' << num(p.mean) << ' ' << num(p.target) << ' ' << num(p.stddev) << ' '
                  << num(p.deviation) << ' ' << num(p.max_deviation) << '\n';
      std::cout << "slope = " << num(rep.slope) << " (expected " << num(rep.expected_slope) << ")\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::length_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
