#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "dispersion.hpp"
#include "gas.hpp"
#include "random.hpp"
#include "search_space.hpp"

namespace gasd {

/// Symmetric matrix with integer entries drawn uniformly from [lo, hi].
inline DistanceMatrix generate_instance(int n, int lo, int hi, Rng& rng) {
  if (lo < 1 || hi < lo) throw std::invalid_argument("distance range needs 1 <= lo <= hi");
  std::vector<double> upper(static_cast<std::size_t>(n) * (n - 1) / 2);
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  for (double& d : upper) d = static_cast<double>(lo + static_cast<int>(uniform_below(rng, span)));
  return DistanceMatrix::from_upper_triangular(n, upper);
}

enum class Problem { MaxSum, MaxMin };
enum class Method { GasDicke, GasHadamard, Classical };
enum class QueryDomain { QD, CD };

inline const char* problem_name(Problem p) { return p == Problem::MaxSum ? "max-sum" : "max-min"; }

inline Problem parse_problem(const std::string& s) {
  if (s == "max-sum") return Problem::MaxSum;
  if (s == "max-min") return Problem::MaxMin;
  throw std::invalid_argument("unknown problem '" + s + "' (expected max-sum or max-min)");
}

inline const char* method_name(Method m) {
  switch (m) {
    case Method::GasDicke: return "gas-dicke";
    case Method::GasHadamard: return "gas-hadamard";
    case Method::Classical: return "classical-exhaustive";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "gas-dicke") return Method::GasDicke;
  if (s == "gas-hadamard") return Method::GasHadamard;
  if (s == "classical-exhaustive" || s == "classical") return Method::Classical;
  throw std::invalid_argument("unknown method '" + s + "'");
}

inline const char* domain_name(QueryDomain d) { return d == QueryDomain::QD ? "QD" : "CD"; }

inline QueryDomain parse_domain(const std::string& s) {
  if (s == "QD") return QueryDomain::QD;
  if (s == "CD") return QueryDomain::CD;
  throw std::invalid_argument("unknown query domain '" + s + "'");
}

struct ExperimentConfig {
  int n = 12;
  int k = 2;
  int trials = 200;
  int lo = 1;
  int hi = 20;
  Problem problem = Problem::MaxSum;
  std::vector<Method> methods{Method::GasDicke, Method::GasHadamard, Method::Classical};
  std::optional<double> lambda2;  // penalty for the Hadamard formulation; theoretical rule if unset
  double delta = 0.0;             // max-min rank compression; 0 disables
  double lambda_growth = 8.0 / 7.0;
  std::uint64_t seed = 1;
  Backend backend = Backend::Analytic;
  std::uint64_t max_quantum_queries = 0;  // 0 picks 400 * sqrt(2^n)
  std::uint64_t max_classical_queries = 1'000'000;
  int grid_points = 48;
  int workers = 1;

  /// Reference settings for one problem and subset size: penalty weight 100 (max-sum) or 1 (max-min), compression step 1e-5 for max-min.
  static ExperimentConfig reference(Problem p, int k) {
    ExperimentConfig c;
    c.problem = p;
    c.k = k;
    c.lambda2 = p == Problem::MaxSum ? 100.0 : 1.0;
    c.delta = p == Problem::MaxSum ? 0.0 : 1e-5;
    return c;
  }

  void validate() const {
    if (n < 3 || n > 24) throw std::invalid_argument("experiment n must lie in [3, 24]");
    if (k < 2 || k >= n) throw std::invalid_argument("experiment k must satisfy 2 <= k < n");
    if (trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (lo < 1 || hi < lo) throw std::invalid_argument("distance range needs 1 <= lo <= hi");
    if (methods.empty()) throw std::invalid_argument("at least one method is required");
    if (delta < 0.0 || !std::isfinite(delta)) throw std::invalid_argument("delta must be non-negative");
    if (!(lambda_growth > 1.0)) throw std::invalid_argument("lambda_growth must exceed 1");
    if (grid_points < 2) throw std::invalid_argument("grid_points must be at least 2");
    if (workers < 1) throw std::invalid_argument("workers must be at least 1");
    if (lambda2 && !(*lambda2 > 0.0)) throw std::invalid_argument("lambda2 must be positive");
  }

  std::uint64_t quantum_budget() const {
    if (max_quantum_queries) return max_quantum_queries;
    return static_cast<std::uint64_t>(400.0 * std::sqrt(std::ldexp(1.0, n)));
  }
};

/// One point of a best-so-far step function.
struct StepPoint {
  std::uint64_t qd = 0;
  std::uint64_t cd = 0;
  double best = 0.0;
};

struct TrialRun {
  std::vector<StepPoint> steps;
  double target = 0.0;
  // Queries at first attainment of the target; +inf when never reached.
  double qd_to_optimum = std::numeric_limits<double>::infinity();
  double cd_to_optimum = std::numeric_limits<double>::infinity();
};

/// The formulation each method optimizes on one instance.
struct TrialFormulations {
  DispersionObjective dicke;     // penalty-free, over weight-k strings
  DispersionObjective hadamard;  // penalized, over all strings
};

inline TrialFormulations build_formulations(const ExperimentConfig& cfg, const DistanceMatrix& D) {
  TrialFormulations f;
  if (cfg.problem == Problem::MaxSum) {
    f.dicke = max_sum_formulation(D, cfg.k, false);
    f.hadamard = max_sum_formulation(D, cfg.k, true, cfg.lambda2);
  } else if (cfg.delta > 0.0) {
    const CompressionResult c = rank_compress(D, cfg.delta, cfg.k);
    f.dicke = max_min_formulation(c.compressed, cfg.k, false, c.lambda1);
    f.hadamard = max_min_formulation(c.compressed, cfg.k, true, c.lambda1, cfg.lambda2);
  } else {
    f.dicke = max_min_formulation(D, cfg.k, false);
    f.hadamard = max_min_formulation(D, cfg.k, true, std::nullopt, cfg.lambda2);
  }
  return f;
}

inline TrialRun run_gas_trial(const DispersionObjective& f, const SearchSpace& space, const ExperimentConfig& cfg,
                              std::uint64_t seed) {
  TrialRun out;
  out.target = brute_force_minimum(f, space).value;
  GasConfig g;
  g.lambda_growth = cfg.lambda_growth;
  g.backend = cfg.backend;
  g.target_value = out.target;
  g.max_quantum_queries = cfg.quantum_budget();
  g.max_classical_queries = cfg.max_classical_queries;
  g.seed = seed;
  const GasResult r = run_gas(f, space, g);
  for (const auto& e : r.trace.events) out.steps.push_back({e.qd, e.cd, e.y});
  if (r.reached_target) {
    out.qd_to_optimum = static_cast<double>(r.counters.qd);
    out.cd_to_optimum = static_cast<double>(r.counters.cd);
  }
  return out;
}

/// Exhaustive search visiting the weight-k strings in a seeded random order,
/// one evaluation per query, stopping at the optimum.
inline TrialRun run_classical_trial(const DispersionObjective& f, int n, int k, std::uint64_t seed) {
  TrialRun out;
  const SearchSpace space = SearchSpace::dicke(n, k);
  out.target = brute_force_minimum(f, space).value;
  auto order = space.elements();
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[uniform_below(rng, i)]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < order.size(); ++i) {
    best = std::min(best, f.evaluate(order[i]));
    const auto q = static_cast<std::uint64_t>(i + 1);
    out.steps.push_back({q, q, best});
    if (best <= out.target) {
      out.qd_to_optimum = out.cd_to_optimum = static_cast<double>(q);
      break;
    }
  }
  return out;
}

struct TrajectoryRow {
  std::string method;
  std::string query_domain;
  std::uint64_t query = 0;
  double median_value = 0.0;

  bool operator==(const TrajectoryRow&) const = default;
};

struct CdfRow {
  std::string method;
  std::string query_domain;
  std::uint64_t query = 0;
  double fraction = 0.0;

  bool operator==(const CdfRow&) const = default;
};

struct MethodRuns {
  Method method = Method::GasDicke;
  std::vector<TrialRun> trials;  // indexed by trial

  std::vector<double> to_optimum(QueryDomain d) const {
    std::vector<double> v;
    v.reserve(trials.size());
    for (const auto& t : trials) v.push_back(d == QueryDomain::QD ? t.qd_to_optimum : t.cd_to_optimum);
    return v;
  }

  std::size_t reached() const {
    return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const TrialRun& t) {
      return std::isfinite(t.qd_to_optimum);
    }));
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<MethodRuns> runs;
  std::vector<TrajectoryRow> trajectories;
  std::vector<CdfRow> cdf;

  const MethodRuns& method(Method m) const {
    for (const auto& r : runs) {
      if (r.method == m) return r;
    }
    throw std::out_of_range(std::string("method not in experiment: ") + method_name(m));
  }
};

/// Median of a sample; unreached (+inf) entries sort last.
inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  if (v.size() % 2 == 1) return v[h];
  if (std::isinf(v[h])) return v[h];
  return 0.5 * (v[h - 1] + v[h]);
}

/// Fraction of the sample at or below q.
inline double empirical_cdf(const std::vector<double>& sorted_sample, double q) {
  const auto it = std::upper_bound(sorted_sample.begin(), sorted_sample.end(), q);
  return static_cast<double>(it - sorted_sample.begin()) / static_cast<double>(sorted_sample.size());
}

/// Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b| over the union
/// of sample points (infinite entries never enter either CDF's mass below +inf).
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("KS distance of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double sup = 0.0;
  for (const auto* s : {&a, &b}) {
    for (double q : *s) {
      if (std::isinf(q)) continue;
      sup = std::max(sup, std::abs(empirical_cdf(a, q) - empirical_cdf(b, q)));
    }
  }
  return sup;
}

/// 1 followed by roughly geometric integers up to `top`, strictly increasing.
inline std::vector<std::uint64_t> log_grid(std::uint64_t top, int points) {
  std::vector<std::uint64_t> g{1};
  if (top <= 1) return g;
  const double ratio = std::pow(static_cast<double>(top), 1.0 / (points - 1));
  double x = 1.0;
  for (int i = 1; i < points; ++i) {
    x *= ratio;
    const auto q = static_cast<std::uint64_t>(std::llround(x));
    if (q > g.back()) g.push_back(std::min(q, top));
  }
  if (g.back() != top) g.push_back(top);
  return g;
}

/// Best-so-far at query q: the last step at or before q (NaN before the first).
inline double step_value(const std::vector<StepPoint>& steps, QueryDomain d, std::uint64_t q) {
  double v = std::numeric_limits<double>::quiet_NaN();
  for (const auto& s : steps) {
    if ((d == QueryDomain::QD ? s.qd : s.cd) > q) break;
    v = s.best;
  }
  return v;
}

namespace detail {

inline void aggregate(ExperimentResult& res) {
  for (QueryDomain d : {QueryDomain::QD, QueryDomain::CD}) {
    std::uint64_t top = 1;
    for (const auto& m : res.runs) {
      for (const auto& t : m.trials) {
        const auto& last = t.steps.back();
        top = std::max(top, d == QueryDomain::QD ? last.qd : last.cd);
      }
    }
    const auto grid = log_grid(top, res.config.grid_points);
    for (const auto& m : res.runs) {
      for (std::uint64_t q : grid) {
        std::vector<double> vals;
        for (const auto& t : m.trials) {
          const double v = step_value(t.steps, d, q);
          if (!std::isnan(v)) vals.push_back(v);
        }
        if (vals.empty()) continue;
        res.trajectories.push_back({method_name(m.method), domain_name(d), q, median(std::move(vals))});
      }
      auto sample = m.to_optimum(d);
      std::sort(sample.begin(), sample.end());
      for (std::uint64_t q : grid) {
        res.cdf.push_back({method_name(m.method), domain_name(d), q, empirical_cdf(sample, static_cast<double>(q))});
      }
    }
  }
}

}  // namespace detail

/// Runs every method on `trials` random instances. Instance t and each
/// method's random stream derive from (seed, t), so results do not depend on
/// the worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult res;
  res.config = cfg;
  for (Method m : cfg.methods) res.runs.push_back({m, std::vector<TrialRun>(static_cast<std::size_t>(cfg.trials))});

  auto run_trial = [&](int t) {
    Rng inst_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(t), 0));
    const DistanceMatrix D = generate_instance(cfg.n, cfg.lo, cfg.hi, inst_rng);
    const TrialFormulations f = build_formulations(cfg, D);
    for (auto& m : res.runs) {
      const std::uint64_t s = derive_seed(cfg.seed, static_cast<std::uint64_t>(t), 1 + static_cast<std::uint64_t>(m.method));
      TrialRun& out = m.trials[static_cast<std::size_t>(t)];
      switch (m.method) {
        case Method::GasDicke: out = run_gas_trial(f.dicke, SearchSpace::dicke(cfg.n, cfg.k), cfg, s); break;
        case Method::GasHadamard: out = run_gas_trial(f.hadamard, SearchSpace::hadamard(cfg.n), cfg, s); break;
        case Method::Classical: out = run_classical_trial(f.dicke, cfg.n, cfg.k, s); break;
      }
    }
  };

  if (cfg.workers <= 1) {
    for (int t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.workers));
    for (int w = 0; w < cfg.workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int t = w; t < cfg.trials; t += cfg.workers) run_trial(t);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  detail::aggregate(res);
  return res;
}

inline double median_to_optimum(const ExperimentResult& r, Method m, QueryDomain d) {
  return median(r.method(m).to_optimum(d));
}

/// max |c| / min |c| over the nonzero pairwise coefficients.
inline double coefficient_ratio(const PolynomialObjective& p) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& t : p.terms()) {
    const double a = std::abs(t.coefficient);
    if (a == 0.0) continue;
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return hi / lo;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trajectories_csv(const std::vector<TrajectoryRow>& rows, std::ostream& os) {
  os << "method,query_domain,query,median_value\n";
  for (const auto& r : rows) os << r.method << ',' << r.query_domain << ',' << r.query << ',' << format_real(r.median_value) << '\n';
}

inline void write_cdf_csv(const std::vector<CdfRow>& rows, std::ostream& os) {
  os << "method,query_domain,query,fraction\n";
  for (const auto& r : rows) os << r.method << ',' << r.query_domain << ',' << r.query << ',' << format_real(r.fraction) << '\n';
}

namespace detail {

inline std::vector<std::vector<std::string>> read_csv_rows(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw std::invalid_argument("unexpected CSV header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) throw std::invalid_argument("expected 4 CSV fields in '" + line + "'");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace detail

inline std::vector<TrajectoryRow> read_trajectories_csv(std::istream& is) {
  std::vector<TrajectoryRow> out;
  for (auto& c : detail::read_csv_rows(is, "method,query_domain,query,median_value")) {
    out.push_back({c[0], c[1], std::stoull(c[2]), std::stod(c[3])});
  }
  return out;
}

inline std::vector<CdfRow> read_cdf_csv(std::istream& is) {
  std::vector<CdfRow> out;
  for (auto& c : detail::read_csv_rows(is, "method,query_domain,query,fraction")) {
    out.push_back({c[0], c[1], std::stoull(c[2]), std::stod(c[3])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG

struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (query, value)
};

/// Line chart with a logarithmic x axis. Output depends only on the input.
inline void write_svg_plot(std::ostream& os, const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series) {
  const double W = 640, H = 420, left = 70, right = 170, top = 40, bottom = 50;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, std::max(x, 1.0));
      xmax = std::max(xmax, std::max(x, 1.0));
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (!std::isfinite(xmin)) xmin = 1, xmax = 10, ymin = 0, ymax = 1;
  if (xmax <= xmin) xmax = xmin * 10;
  if (ymax <= ymin) ymax = ymin + 1;
  const double lx0 = std::log10(xmin), lx1 = std::log10(xmax);
  auto px = [&](double x) { return left + (std::log10(std::max(x, 1.0)) - lx0) / (lx1 - lx0) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - ymin) / (ymax - ymin) * (H - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  char buf[256];

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  std::snprintf(buf, sizeof buf, "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"none\" stroke=\"black\"/>\n",
                left, top, W - left - right, H - top - bottom);
  os << buf;
  for (int e = static_cast<int>(std::floor(lx0)); e <= static_cast<int>(std::ceil(lx1)); ++e) {
    const double x = std::pow(10.0, e);
    if (x < xmin * 0.999 || x > xmax * 1.001) continue;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">1e%d</text>\n", px(x), H - bottom + 16, e);
    os << buf;
  }
  for (int i = 0; i <= 4; ++i) {
    const double y = ymin + (ymax - ymin) * i / 4.0;
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%.4g</text>\n", left - 6, py(y) + 4, y);
    os << buf;
  }
  os << "<text x=\"" << left + (W - left - right) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  std::snprintf(buf, sizeof buf, "<text transform=\"translate(16,%.2f) rotate(-90)\" text-anchor=\"middle\">", top + (H - top - bottom) / 2);
  os << buf << y_label << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = colors[i % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : series[i].points) {
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(x), py(y));
      os << buf;
    }
    os << "\"/>\n";
    std::snprintf(buf, sizeof buf, "<text x=\"%.2f\" y=\"%.2f\" fill=\"%s\">", W - right + 10, top + 16 + 18.0 * i, color);
    os << buf << series[i].label << "</text>\n";
  }
  os << "</svg>\n";
}

/// Median trajectories of one query domain as an SVG chart.
inline void write_trajectory_svg(const ExperimentResult& r, QueryDomain d, std::ostream& os) {
  std::vector<SvgSeries> series;
  for (const auto& m : r.runs) {
    SvgSeries s{method_name(m.method), {}};
    for (const auto& row : r.trajectories) {
      if (row.method == s.label && row.query_domain == domain_name(d)) s.points.emplace_back(row.query, row.median_value);
    }
    series.push_back(std::move(s));
  }
  write_svg_plot(os, std::string(problem_name(r.config.problem)) + " median objective, n=" + std::to_string(r.config.n) +
                         ", k=" + std::to_string(r.config.k),
                 domain_name(d), "median best objective", series);
}

/// Query-to-optimum CDFs of one domain as an SVG chart.
inline void write_cdf_svg(const ExperimentResult& r, QueryDomain d, std::ostream& os) {
  std::vector<SvgSeries> series;
  for (const auto& m : r.runs) {
    SvgSeries s{method_name(m.method), {}};
    for (const auto& row : r.cdf) {
      if (row.method == s.label && row.query_domain == domain_name(d)) s.points.emplace_back(row.query, row.fraction);
    }
    series.push_back(std::move(s));
  }
  write_svg_plot(os, std::string(problem_name(r.config.problem)) + " CDF of queries to optimum, n=" + std::to_string(r.config.n) +
                         ", k=" + std::to_string(r.config.k),
                 domain_name(d), "fraction of trials", series);
}

}  // namespace gasd
