#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mimo_lab/bounds.hpp"
#include "mimo_lab/covmodel.hpp"
#include "mimo_lab/detequiv.hpp"
#include "mimo_lab/engine.hpp"
#include "mimo_lab/plan.hpp"

namespace mimo_lab {

enum class SweepAxis { None, SnrDb, M, R, Tc };

std::string to_string(SweepAxis axis);

struct ExperimentSpec {
  std::string name = "experiment";
  ScenarioConfig scenario;  // snr, M, r_own and T_c are replaced per sweep point
  double snr_db = 0.0;
  SweepAxis axis = SweepAxis::None;
  std::vector<double> sweep;  // values of the swept key
  double users_ratio = 0.0;     // > 0 sets K = round(M / users_ratio)
  double spreading_gain = 0.0;  // > 0 sets r = round(M / spreading_gain)
  ProcessingOptions processing;
  std::vector<BoundId> bounds{BoundId::CoherentUL, BoundId::NonCoherent, BoundId::AltNonCoherent,
                              BoundId::MaxMinUB, BoundId::CutsetPerUser};
  std::vector<Direction> directions{Direction::UL};
  int trials = 500;
  std::uint64_t seed = 1;
  int covariance_draws = 3;
  bool per_draw_rows = false;
  bool detequiv = false;
  int threads = 0;
  std::vector<std::string> audit;  // written as header comments

  // Sweep values, or the single operating point when nothing is swept.
  std::vector<double> points() const;
  // Scenario at one sweep value, with derived K and r and orthogonal-pilot scheduling.
  ScenarioConfig scenario_at(double value) const;
  void validate() const;
};

// Flat `key = value` text; `#` starts a comment; lists are comma separated.
ExperimentSpec parse_config(const std::string& text);
ExperimentSpec load_config(const std::string& path);

struct ResultRow {
  std::string experiment;
  double sweep_value = 0.0;
  int M = 0;
  int K = 0;
  int r = 0;
  int T_c = 0;
  std::string bound_id;
  Direction direction = Direction::UL;
  double per_user_rate = 0.0;
  double sum_per_cell = 0.0;
  double sum_total = 0.0;
  double stderr = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
};

struct ResultTable {
  std::vector<std::string> audit;
  std::vector<ResultRow> rows;

  void append(const ResultTable& other);
  // First row matching all given fields; throws std::out_of_range when missing.
  const ResultRow& find(const std::string& experiment, const std::string& bound, Direction d,
                        double sweep_value) const;
};

ResultTable run_experiment(const ExperimentSpec& spec);

enum class OutputFormat { Csv, PlotData };

void write_results(const ResultTable& table, std::ostream& out, OutputFormat format);
void write_results(const ResultTable& table, const std::string& path, OutputFormat format);
ResultTable parse_csv(const std::string& text);
ResultTable read_csv(const std::string& path);

enum class Scale { Desk, Full };

// Experiments behind one figure (fig2, fig3, fig5, fig6, fig7). Desk scale caps M at
// 256, trials at 500 and uses one covariance draw; every cap is listed in the audit.
std::vector<ExperimentSpec> figure_specs(const std::string& figure, Scale scale);
ResultTable reproduce_figure(const std::string& figure, Scale scale, int trials_override = 0,
                             std::uint64_t seed_override = 0);

// Problem file for the det-equiv solver. Keys: N, z, tol, max_iter, A, Q and a
// repeatable `theta`. Matrix values are `zero`, `identity`, `scalar c`, `diag a,b,...`
// or `dense` followed by N*N real entries in row-major order; `theta = 3 * identity`
// adds three copies.
struct DetEquivJob {
  DetEquivProblem problem;
  double tol = 1e-10;
  int max_iter = 10000;
};
DetEquivJob parse_detequiv_problem(const std::string& text);

}  // namespace mimo_lab
