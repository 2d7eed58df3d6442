#include "mimo_lab/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mimo_lab/errors.hpp"

namespace mimo_lab {

namespace {

const char* kHeader =
    "experiment,sweep_value,M,K,r,T_c,bound_id,direction,per_user_rate,sum_per_cell,sum_total,stderr,trials,seed";

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError(what + ": '" + s + "' is not a number");
  return v;
}

long to_long(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) throw ConfigError(what + ": '" + s + "' is not an integer");
  return v;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size())
    throw ConfigError(what + ": '" + s + "' is not a non-negative integer");
  return v;
}

bool to_bool(const std::string& s, const std::string& what) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(what + ": '" + s + "' is not a boolean");
}

int round_ratio(int M, double ratio) { return std::max(1, static_cast<int>(std::lround(M / ratio))); }

struct PointResult {
  std::string bound;
  Direction direction;
  double sum_total;
  double stderr;
  long trials;
};

void add_report(std::vector<PointResult>& out, const Evaluation& ev, BoundId id, Direction d) {
  if (!ev.has(id, d)) return;
  const RateReport rep = ev.report(id, d);
  out.push_back({to_string(id), d, rep.sum_total, rep.stderr, rep.trials});
  if (id == BoundId::AltNonCoherent)
    out.push_back({"AltNonCoherentFloored", d, rep.sum_total_floored, rep.stderr, rep.trials});
}

double closed_form(BoundId id, const ScenarioConfig& c) {
  ScalingParams p;
  p.M = c.M;
  p.K = c.K;
  p.L = c.L;
  p.T_c = c.T_c;
  p.r = c.r_own;
  p.snr = c.snr;
  p.iota = c.iota;
  p.regime = c.regime;
  switch (id) {
    case BoundId::LegacyContaminated:
      return legacy_scaling(LegacyKind::Contaminated, p);
    case BoundId::LegacyGlobalOrth:
      return legacy_scaling(LegacyKind::GlobalOrth, p);
    case BoundId::AsymptoticLB_Orth:
      return asymptotic_capacity(AsymptoticLaw::OrthogonalPilot, p);
    case BoundId::AsymptoticScaling:
      return asymptotic_capacity(
          c.pilot == PilotKind::NonOrthogonal ? AsymptoticLaw::NonOrthogonal : AsymptoticLaw::CorrelationRegime, p);
    default:
      throw std::logic_error("not a closed-form bound");
  }
}

bool is_closed_form(BoundId id) {
  return id == BoundId::LegacyContaminated || id == BoundId::LegacyGlobalOrth || id == BoundId::AsymptoticLB_Orth ||
         id == BoundId::AsymptoticScaling;
}

ResultRow make_row(const std::string& experiment, double value, const ScenarioConfig& c, const PointResult& pr,
                   std::uint64_t seed) {
  ResultRow row;
  row.experiment = experiment;
  row.sweep_value = value;
  row.M = c.M;
  row.K = c.K;
  row.r = c.r_own;
  row.T_c = c.T_c;
  row.bound_id = pr.bound;
  row.direction = pr.direction;
  row.sum_total = pr.sum_total;
  row.sum_per_cell = pr.sum_total / c.L;
  row.per_user_rate = pr.sum_total / (static_cast<double>(c.L) * c.K);
  row.stderr = pr.stderr;
  row.trials = pr.trials;
  row.seed = seed;
  return row;
}

}  // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::SnrDb:
      return "snr_db";
    case SweepAxis::M:
      return "M";
    case SweepAxis::R:
      return "r";
    case SweepAxis::Tc:
      return "T_c";
    default:
      return "none";
  }
}

std::vector<double> ExperimentSpec::points() const {
  if (axis != SweepAxis::None) return sweep;
  return {snr_db};
}

ScenarioConfig ExperimentSpec::scenario_at(double value) const {
  ScenarioConfig c = scenario;
  double db = snr_db;
  switch (axis) {
    case SweepAxis::SnrDb:
      db = value;
      break;
    case SweepAxis::M:
      c.M = static_cast<int>(value);
      break;
    case SweepAxis::R:
      c.r_own = static_cast<int>(value);
      break;
    case SweepAxis::Tc:
      c.T_c = static_cast<int>(value);
      break;
    case SweepAxis::None:
      break;
  }
  if (users_ratio > 0.0) c.K = round_ratio(c.M, users_ratio);
  if (spreading_gain > 0.0) c.r_own = round_ratio(c.M, spreading_gain);
  c.snr = std::pow(10.0, db / 10.0);
  if (c.pilot == PilotKind::Orthogonal) c.K = std::max(1, std::min(c.K, c.T_c / 2));
  return c;
}

void ExperimentSpec::validate() const {
  if (name.empty() || name.find(',') != std::string::npos) throw ConfigError("name: must be non-empty without commas");
  if (trials < 1) throw ConfigError("trials: must be at least 1");
  if (covariance_draws < 1) throw ConfigError("covariance_draws: must be at least 1");
  if (axis != SweepAxis::None && sweep.empty()) throw ConfigError(to_string(axis) + ": empty sweep");
  if (bounds.empty()) throw ConfigError("bounds: at least one bound is required");
  if (directions.empty()) throw ConfigError("directions: at least one direction is required");
  if (processing.dims_used < 0) throw ConfigError("dims_used: must be non-negative");
  for (double v : points()) {
    ScenarioConfig c = scenario;
    switch (axis) {
      case SweepAxis::M:
        c.M = static_cast<int>(v);
        break;
      case SweepAxis::R:
        c.r_own = static_cast<int>(v);
        break;
      case SweepAxis::Tc:
        c.T_c = static_cast<int>(v);
        break;
      default:
        break;
    }
    if (users_ratio > 0.0) c.K = round_ratio(c.M, users_ratio);
    if (c.pilot == PilotKind::Orthogonal && c.K > c.T_c)
      throw ConfigError("K: orthogonal pilots need K <= T_c (K=" + std::to_string(c.K) +
                        ", T_c=" + std::to_string(c.T_c) + ")");
    try {
      scenario_at(v).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

ExperimentSpec parse_config(const std::string& text) {
  ExperimentSpec spec;
  std::set<std::string> seen;
  std::vector<std::pair<std::string, std::size_t>> swept;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no);
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "r_own") key = "r";
    if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
    if (!seen.insert(key).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    const std::string what = where + ": " + key;
    const std::vector<std::string> items = split(value, ',');
    auto scalar_int = [&]() {
      if (items.size() != 1) throw ConfigError(what + " takes a single value");
      return static_cast<int>(to_long(value, what));
    };
    auto scalar_double = [&]() {
      if (items.size() != 1) throw ConfigError(what + " takes a single value");
      return to_double(value, what);
    };
    auto sweepable = [&](SweepAxis axis, auto set_scalar) {
      if (items.size() == 1) {
        set_scalar(to_double(items[0], what));
        return;
      }
      swept.emplace_back(key, static_cast<std::size_t>(line_no));
      spec.axis = axis;
      spec.sweep.clear();
      for (const auto& it : items) spec.sweep.push_back(to_double(it, what));
      set_scalar(spec.sweep.front());
    };
    if (key == "name") {
      spec.name = value;
    } else if (key == "L") {
      spec.scenario.L = scalar_int();
    } else if (key == "K") {
      spec.scenario.K = scalar_int();
    } else if (key == "M") {
      sweepable(SweepAxis::M, [&](double v) { spec.scenario.M = static_cast<int>(v); });
    } else if (key == "r") {
      sweepable(SweepAxis::R, [&](double v) { spec.scenario.r_own = static_cast<int>(v); });
    } else if (key == "T_c") {
      sweepable(SweepAxis::Tc, [&](double v) { spec.scenario.T_c = static_cast<int>(v); });
    } else if (key == "snr_db") {
      sweepable(SweepAxis::SnrDb, [&](double v) { spec.snr_db = v; });
    } else if (key == "r_cross") {
      spec.scenario.r_cross = scalar_int();
    } else if (key == "iota") {
      spec.scenario.iota = scalar_double();
    } else if (key == "pilot_boost") {
      spec.scenario.pilot_boost = scalar_double();
    } else if (key == "noiseless_pilot") {
      spec.scenario.noiseless_pilot = to_bool(value, what);
    } else if (key == "regime") {
      if (value == "strong") spec.scenario.regime = Regime::Strong;
      else if (value == "very_strong") spec.scenario.regime = Regime::VeryStrong;
      else throw ConfigError(what + ": expected strong or very_strong");
    } else if (key == "model") {
      if (value == "fourier") spec.scenario.model = CorrelationModel::PartialFourier;
      else if (value == "unitary") spec.scenario.model = CorrelationModel::PartialUnitary;
      else throw ConfigError(what + ": expected fourier or unitary");
    } else if (key == "profile") {
      if (value == "uniform") spec.scenario.shape = EigenProfile::Shape::Uniform;
      else if (value == "exponential") spec.scenario.shape = EigenProfile::Shape::ExponentialDecay;
      else throw ConfigError(what + ": expected uniform or exponential");
    } else if (key == "decay_rate") {
      spec.scenario.decay_rate = scalar_double();
    } else if (key == "pilot") {
      if (value == "orthogonal") spec.scenario.pilot = PilotKind::Orthogonal;
      else if (value == "nonorthogonal") spec.scenario.pilot = PilotKind::NonOrthogonal;
      else throw ConfigError(what + ": expected orthogonal or nonorthogonal");
    } else if (key == "processing") {
      if (value == "lowdim") spec.processing.processing = Processing::LowDim;
      else if (value == "fulldim") spec.processing.processing = Processing::FullDim;
      else throw ConfigError(what + ": expected lowdim or fulldim");
    } else if (key == "dims_used") {
      spec.processing.dims_used = scalar_int();
    } else if (key == "beamformer") {
      if (value == "mmse") spec.processing.beamformer = Beamformer::MMSE;
      else if (value == "mf") spec.processing.beamformer = Beamformer::MatchedFilter;
      else throw ConfigError(what + ": expected mmse or mf");
    } else if (key == "bounds") {
      spec.bounds.clear();
      for (const auto& it : items) {
        const auto id = parse_bound_id(it);
        if (!id) throw ConfigError(what + ": unknown bound '" + it + "'");
        spec.bounds.push_back(*id);
      }
    } else if (key == "directions") {
      spec.directions.clear();
      for (const auto& it : items) {
        const auto d = parse_direction(it);
        if (!d) throw ConfigError(what + ": unknown direction '" + it + "'");
        spec.directions.push_back(*d);
      }
    } else if (key == "trials") {
      spec.trials = scalar_int();
    } else if (key == "seed") {
      spec.seed = to_u64(value, what);
    } else if (key == "covariance_draws") {
      spec.covariance_draws = scalar_int();
    } else if (key == "users_ratio") {
      spec.users_ratio = scalar_double();
      if (!(spec.users_ratio > 0.0)) throw ConfigError(what + ": must be positive");
    } else if (key == "spreading_gain") {
      spec.spreading_gain = scalar_double();
      if (!(spec.spreading_gain > 0.0)) throw ConfigError(what + ": must be positive");
    } else if (key == "per_draw_rows") {
      spec.per_draw_rows = to_bool(value, what);
    } else if (key == "detequiv") {
      spec.detequiv = to_bool(value, what);
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  if (swept.size() > 1)
    throw ConfigError("line " + std::to_string(swept[1].second) + ": two sweep axes ('" + swept[0].first + "' and '" +
                      swept[1].first + "')");
  for (const char* req : {"L", "M", "T_c", "snr_db"})
    if (!seen.count(req)) throw ConfigError(std::string("missing required key '") + req + "'");
  if (!seen.count("K") && !seen.count("users_ratio")) throw ConfigError("missing required key 'K' (or users_ratio)");
  if (!seen.count("r") && !seen.count("spreading_gain"))
    throw ConfigError("missing required key 'r' (or spreading_gain)");
  spec.validate();
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_config(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void ResultTable::append(const ResultTable& other) {
  audit.insert(audit.end(), other.audit.begin(), other.audit.end());
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

const ResultRow& ResultTable::find(const std::string& experiment, const std::string& bound, Direction d,
                                   double sweep_value) const {
  for (const auto& row : rows)
    if (row.experiment == experiment && row.bound_id == bound && row.direction == d &&
        std::abs(row.sweep_value - sweep_value) <= 1e-9 * std::max(1.0, std::abs(sweep_value)))
      return row;
  throw std::out_of_range("no row " + experiment + "/" + bound + "/" + to_string(d) + " at " + fmt(sweep_value));
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::vector<double> pts = spec.points();
  const int D = spec.covariance_draws;
  bool want_ul = false;
  bool want_dl = false;
  for (Direction d : spec.directions) (d == Direction::UL ? want_ul : want_dl) = true;
  const bool want_de =
      spec.detequiv || std::find(spec.bounds.begin(), spec.bounds.end(), BoundId::DetEquiv) != spec.bounds.end();

  ResultTable table;
  table.audit = spec.audit;
  // results[draw][point]
  std::vector<std::vector<std::vector<PointResult>>> results(static_cast<std::size_t>(D));
  std::vector<ScenarioConfig> configs;
  for (double v : pts) {
    configs.push_back(spec.scenario_at(v));
    ScenarioConfig raw = spec.scenario;
    if (spec.axis == SweepAxis::M) raw.M = static_cast<int>(v);
    const int asked = spec.users_ratio > 0.0 ? round_ratio(raw.M, spec.users_ratio) : raw.K;
    if (configs.back().K < asked)
      table.audit.push_back(spec.name + " at " + to_string(spec.axis) + "=" + fmt(v) + ": scheduled " +
                            std::to_string(configs.back().K) + " of " + std::to_string(asked) +
                            " users per cell (orthogonal pilots, floor(T_c/2))");
  }

  for (int draw = 0; draw < D; ++draw) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const ScenarioConfig& cfg = configs[i];
      const NetworkScenario net = build_network(cfg, spec.seed, draw);
      EvaluationOptions opt;
      opt.processing = spec.processing;
      opt.uplink = want_ul || want_de;
      opt.downlink = want_dl;
      opt.detequiv = want_de;
      opt.trials = spec.trials;
      opt.seed = spec.seed;
      opt.draw = draw;
      opt.threads = spec.threads;
      const Evaluation ev = evaluate(net, opt);
      if (ev.jittered)
        table.audit.push_back(spec.name + " draw " + std::to_string(draw) + " at " + to_string(spec.axis) + "=" +
                              fmt(pts[i]) + ": diagonal jitter applied to a singular covariance");
      auto& out = results[static_cast<std::size_t>(draw)];
      out.resize(pts.size());
      for (BoundId id : spec.bounds) {
        for (Direction d : spec.directions) {
          if (is_closed_form(id)) {
            out[i].push_back({to_string(id), d, closed_form(id, cfg), 0.0, 0});
          } else if (id == BoundId::CoherentUL || id == BoundId::DetEquiv) {
            if (d == Direction::UL) add_report(out[i], ev, id, d);
          } else {
            add_report(out[i], ev, id, d);
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& first = results[0][i];
    for (std::size_t b = 0; b < first.size(); ++b) {
      PointResult pooled = first[b];
      double sum = 0.0;
      double var = 0.0;
      long trials = 0;
      for (int draw = 0; draw < D; ++draw) {
        const PointResult& pr = results[static_cast<std::size_t>(draw)][i][b];
        sum += pr.sum_total;
        var += pr.stderr * pr.stderr;
        trials += pr.trials;
      }
      pooled.sum_total = sum / D;
      pooled.stderr = std::sqrt(var) / D;
      pooled.trials = trials;
      table.rows.push_back(make_row(spec.name, pts[i], configs[i], pooled, spec.seed));
    }
  }
  if (spec.per_draw_rows) {
    for (int draw = 0; draw < D; ++draw)
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (const auto& pr : results[static_cast<std::size_t>(draw)][i])
          table.rows.push_back(
              make_row(spec.name + "/draw" + std::to_string(draw), pts[i], configs[i], pr, spec.seed));
  }
  return table;
}

void write_results(const ResultTable& table, std::ostream& out, OutputFormat format) {
  for (const auto& a : table.audit) out << "# " << a << '\n';
  if (format == OutputFormat::Csv) {
    out << kHeader << '\n';
    for (const auto& r : table.rows) {
      out << r.experiment << ',' << fmt(r.sweep_value) << ',' << r.M << ',' << r.K << ',' << r.r << ',' << r.T_c << ','
          << r.bound_id << ',' << to_string(r.direction) << ',' << fmt(r.per_user_rate) << ',' << fmt(r.sum_per_cell)
          << ',' << fmt(r.sum_total) << ',' << fmt(r.stderr) << ',' << r.trials << ',' << r.seed << '\n';
    }
    return;
  }
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRow*>> curves;
  for (const auto& r : table.rows) {
    const std::string key = r.experiment + " " + r.bound_id + " " + to_string(r.direction);
    if (!curves.count(key)) order.push_back(key);
    curves[key].push_back(&r);
  }
  bool first = true;
  for (const auto& key : order) {
    if (!first) out << "\n\n";
    first = false;
    out << "# curve: " << key << '\n';
    out << "# sweep_value sum_total stderr per_user_rate\n";
    for (const ResultRow* r : curves[key])
      out << fmt(r->sweep_value) << ' ' << fmt(r->sum_total) << ' ' << fmt(r->stderr) << ' ' << fmt(r->per_user_rate)
          << '\n';
  }
}

void write_results(const ResultTable& table, const std::string& path, OutputFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_results(table, out, format);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ResultTable parse_csv(const std::string& text) {
  ResultTable table;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.audit.push_back(trim(line.substr(1)));
      continue;
    }
    if (!header) {
      if (line != kHeader) throw ConfigError("csv line " + std::to_string(line_no) + ": unexpected header");
      header = true;
      continue;
    }
    const auto f = split(line, ',');
    const std::string where = "csv line " + std::to_string(line_no);
    if (f.size() != 14) throw ConfigError(where + ": expected 14 fields");
    ResultRow r;
    r.experiment = f[0];
    r.sweep_value = to_double(f[1], where);
    r.M = static_cast<int>(to_long(f[2], where));
    r.K = static_cast<int>(to_long(f[3], where));
    r.r = static_cast<int>(to_long(f[4], where));
    r.T_c = static_cast<int>(to_long(f[5], where));
    r.bound_id = f[6];
    const auto d = parse_direction(f[7]);
    if (!d) throw ConfigError(where + ": bad direction");
    r.direction = *d;
    r.per_user_rate = to_double(f[8], where);
    r.sum_per_cell = to_double(f[9], where);
    r.sum_total = to_double(f[10], where);
    r.stderr = to_double(f[11], where);
    r.trials = to_long(f[12], where);
    r.seed = to_u64(f[13], where);
    table.rows.push_back(r);
  }
  if (!header) throw ConfigError("csv: missing header");
  return table;
}

ResultTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

namespace {

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

ExperimentSpec base_spec(const std::string& name, Scale scale) {
  ExperimentSpec s;
  s.name = name;
  s.trials = scale == Scale::Desk ? 500 : 1000;
  s.covariance_draws = scale == Scale::Desk ? 1 : 3;
  if (scale == Scale::Desk) s.audit.push_back(name + ": desk scale, 1 covariance draw (full scale uses 3), trials <= 500");
  return s;
}

std::vector<ExperimentSpec> fig2(Scale scale) {
  std::vector<ExperimentSpec> out;
  struct Variant {
    const char* name;
    Processing proc;
    int d;
  };
  for (const Variant& v : {Variant{"fig2/fulldim", Processing::FullDim, 0}, Variant{"fig2/lowdim_d8", Processing::LowDim, 8},
                           Variant{"fig2/lowdim_d6", Processing::LowDim, 6}, Variant{"fig2/lowdim_d4", Processing::LowDim, 4}}) {
    ExperimentSpec s = base_spec(v.name, scale);
    s.scenario.L = 4;
    s.scenario.K = 5;
    s.scenario.M = 100;
    s.scenario.r_own = 8;
    s.scenario.T_c = 500;
    s.axis = SweepAxis::SnrDb;
    s.sweep = range(-10, 30, 5);
    s.snr_db = s.sweep.front();
    s.processing.processing = v.proc;
    s.processing.dims_used = v.d;
    s.directions = {Direction::DL};
    s.bounds = {BoundId::NonCoherent, BoundId::AltNonCoherent, BoundId::MaxMinUB};
    out.push_back(s);
  }
  return out;
}

std::vector<ExperimentSpec> fig3(Scale scale) {
  std::vector<ExperimentSpec> out;
  for (int r : {10, 30, 100}) {
    ExperimentSpec s = base_spec("fig3/r" + std::to_string(r), scale);
    s.scenario.L = 4;
    s.scenario.K = 10;
    s.scenario.M = 200;
    s.scenario.r_own = r;
    s.scenario.T_c = 500;
    s.axis = SweepAxis::SnrDb;
    s.sweep = range(-10, 30, 5);
    s.snr_db = s.sweep.front();
    s.bounds = {BoundId::CoherentUL, BoundId::NonCoherent, BoundId::AltNonCoherent, BoundId::MaxMinUB};
    out.push_back(s);
  }
  return out;
}

std::vector<ExperimentSpec> fig5(Scale scale) {
  ExperimentSpec s = base_spec("fig5", scale);
  s.scenario.L = 7;
  s.scenario.T_c = 500;
  s.users_ratio = 5;
  s.spreading_gain = 10;
  s.snr_db = 10;
  s.axis = SweepAxis::M;
  s.sweep = {40, 80, 160};
  if (scale == Scale::Full) {
    s.sweep.push_back(320);
    s.sweep.push_back(640);
  } else {
    s.audit.push_back("fig5: desk scale caps M at 256 (full scale adds M = 320, 640)");
  }
  s.scenario.M = 40;
  s.scenario.K = 8;
  s.scenario.r_own = 4;
  s.directions = {Direction::DL};
  s.bounds = {BoundId::NonCoherent, BoundId::AltNonCoherent, BoundId::MaxMinUB};
  return {s};
}

std::vector<ExperimentSpec> fig6(Scale scale) {
  std::vector<ExperimentSpec> out;
  for (PilotKind kind : {PilotKind::Orthogonal, PilotKind::NonOrthogonal}) {
    ExperimentSpec s =
        base_spec(kind == PilotKind::Orthogonal ? "fig6/orthogonal" : "fig6/nonorthogonal", scale);
    s.scenario.L = 7;
    s.scenario.K = 20;
    s.scenario.M = 100;
    s.scenario.T_c = 50;
    s.scenario.pilot = kind;
    s.snr_db = 20;
    s.axis = SweepAxis::R;
    s.sweep = {2, 4, 8, 16, 32};
    s.scenario.r_own = 2;
    s.bounds = {BoundId::NonCoherent, BoundId::AltNonCoherent, BoundId::MaxMinUB};
    out.push_back(s);
  }
  return out;
}

std::vector<ExperimentSpec> fig7(Scale scale) {
  std::vector<ExperimentSpec> out;
  for (int r : {4, 8}) {
    for (PilotKind kind : {PilotKind::Orthogonal, PilotKind::NonOrthogonal}) {
      ExperimentSpec s = base_spec("fig7/r" + std::to_string(r) +
                                       (kind == PilotKind::Orthogonal ? "_orthogonal" : "_nonorthogonal"),
                                   scale);
      s.scenario.L = 7;
      s.scenario.K = 10;
      s.scenario.M = 100;
      s.scenario.r_own = r;
      s.scenario.pilot = kind;
      s.snr_db = 20;
      s.axis = SweepAxis::Tc;
      s.sweep = {20, 50, 100, 200, 500, 1000};
      s.scenario.T_c = 20;
      s.bounds = {BoundId::AltNonCoherent, BoundId::MaxMinUB};
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

std::vector<ExperimentSpec> figure_specs(const std::string& figure, Scale scale) {
  if (figure == "fig2") return fig2(scale);
  if (figure == "fig3") return fig3(scale);
  if (figure == "fig5") return fig5(scale);
  if (figure == "fig6") return fig6(scale);
  if (figure == "fig7") return fig7(scale);
  throw ConfigError("unknown figure '" + figure + "' (expected fig2, fig3, fig5, fig6 or fig7)");
}

ResultTable reproduce_figure(const std::string& figure, Scale scale, int trials_override,
                             std::uint64_t seed_override) {
  ResultTable table;
  for (ExperimentSpec spec : figure_specs(figure, scale)) {
    if (trials_override > 0) {
      if (scale == Scale::Desk && trials_override > 500) {
        spec.audit.push_back(spec.name + ": requested " + std::to_string(trials_override) +
                             " trials, desk scale caps at 500");
        trials_override = 500;
      }
      spec.trials = trials_override;
    }
    if (seed_override > 0) spec.seed = seed_override;
    table.append(run_experiment(spec));
  }
  return table;
}

}  // namespace mimo_lab

namespace mimo_lab {

namespace {

CMatrix parse_matrix(const std::string& value, int N, const std::string& what) {
  std::istringstream in(value);
  std::string kind;
  in >> kind;
  std::string rest;
  std::getline(in, rest);
  rest = trim(rest);
  if (kind == "zero") return CMatrix::Zero(N, N);
  if (kind == "identity") return CMatrix::Identity(N, N);
  if (kind == "scalar") return to_double(rest, what) * CMatrix::Identity(N, N);
  std::vector<double> vals;
  for (const auto& item : split(rest, ',')) vals.push_back(to_double(item, what));
  if (kind == "diag") {
    if (static_cast<int>(vals.size()) != N) throw ConfigError(what + ": diag needs N entries");
    CMatrix m = CMatrix::Zero(N, N);
    for (int i = 0; i < N; ++i) m(i, i) = vals[static_cast<std::size_t>(i)];
    return m;
  }
  if (kind == "dense") {
    if (static_cast<int>(vals.size()) != N * N) throw ConfigError(what + ": dense needs N*N entries");
    CMatrix m(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) m(i, j) = vals[static_cast<std::size_t>(i * N + j)];
    if (!m.isApprox(m.adjoint(), 1e-12)) throw ConfigError(what + ": dense matrix must be symmetric");
    return m;
  }
  throw ConfigError(what + ": unknown matrix form '" + kind + "'");
}

}  // namespace

DetEquivJob parse_detequiv_problem(const std::string& text) {
  std::vector<std::pair<int, std::string>> lines;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int N = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    lines.emplace_back(line_no, line);
    const auto eq = line.find('=');
    if (eq != std::string::npos && trim(line.substr(0, eq)) == "N")
      N = static_cast<int>(to_long(trim(line.substr(eq + 1)), "line " + std::to_string(line_no) + ": N"));
  }
  if (N < 1) throw ConfigError("det-equiv problem: missing or invalid N");
  DetEquivJob job;
  job.problem = DetEquivProblem::make(N, -1.0);
  for (const auto& [no, l] : lines) {
    const std::string where = "line " + std::to_string(no);
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(l.substr(0, eq));
    std::string value = trim(l.substr(eq + 1));
    const std::string what = where + ": " + key;
    if (key == "N") continue;
    if (key == "z") {
      job.problem.z = to_double(value, what);
    } else if (key == "tol") {
      job.tol = to_double(value, what);
    } else if (key == "max_iter") {
      job.max_iter = static_cast<int>(to_long(value, what));
    } else if (key == "A") {
      job.problem.A = parse_matrix(value, N, what);
    } else if (key == "Q") {
      job.problem.Q = parse_matrix(value, N, what);
    } else if (key == "theta") {
      long copies = 1;
      const auto star = value.find('*');
      if (star != std::string::npos) {
        copies = to_long(trim(value.substr(0, star)), what);
        value = trim(value.substr(star + 1));
        if (copies < 0) throw ConfigError(what + ": negative count");
      }
      const CMatrix m = parse_matrix(value, N, what);
      for (long c = 0; c < copies; ++c) job.problem.thetas.push_back(m);
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  if (!(job.problem.z < 0.0)) throw ConfigError("det-equiv problem: z must be negative");
  return job;
}

}  // namespace mimo_lab
