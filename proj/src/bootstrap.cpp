#include "pctcoef/bootstrap.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "pctcoef/error.hpp"
#include "pctcoef/kernels.hpp"

namespace pctcoef {

void BootstrapConfig::validate() const {
  if (n_bootstrap < 1) throw Error(ErrorKind::schema, "n_bootstrap must be at least 1");
  if (!(ci_level > 0.0 && ci_level < 1.0))
    throw Error(ErrorKind::schema, fmt::format("ci_level must lie in (0, 1), got {}", ci_level));
  for (std::size_t i = 0; i < alpha_levels.size(); ++i) {
    if (!(alpha_levels[i] > 0.0 && alpha_levels[i] < 1.0))
      throw Error(ErrorKind::schema, fmt::format("alpha level {} outside (0, 1)", alpha_levels[i]));
    if (i > 0 && !(alpha_levels[i] < alpha_levels[i - 1]))
      throw Error(ErrorKind::schema, "alpha_levels must be strictly decreasing");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t replicate_stream_seed(std::uint64_t seed, std::uint64_t k) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(k + 0x632be59bd9b4e019ULL));
}

void draw_resample(std::mt19937_64& engine, std::size_t n, std::vector<std::uint32_t>& rows) {
  rows.resize(n);
  for (std::uint32_t& r : rows) r = static_cast<std::uint32_t>(uniform_index(engine, n));
}

DesignMatrix resample_rows(const DesignMatrix& dm, std::span<const std::uint32_t> rows) {
  auto pick = [&](const std::vector<double>& src) {
    std::vector<double> out(rows.size());
    kernels::gather(src, rows, out);
    return out;
  };
  DesignMatrix out;
  out.dv.name = dm.dv.name;
  out.dv.conceptual_min = dm.dv.conceptual_min;
  out.dv.conceptual_max = dm.dv.conceptual_max;
  out.dv.values = pick(dm.dv.values);
  out.raw_dv = pick(dm.raw_dv);
  out.ivs.reserve(dm.n_ivs());
  out.raw_ivs.reserve(dm.n_ivs());
  for (std::size_t i = 0; i < dm.n_ivs(); ++i) {
    PercentizedColumn c;
    c.name = dm.ivs[i].name;
    c.conceptual_min = dm.ivs[i].conceptual_min;
    c.conceptual_max = dm.ivs[i].conceptual_max;
    c.values = pick(dm.ivs[i].values);
    out.ivs.push_back(std::move(c));
    out.raw_ivs.push_back(pick(dm.raw_ivs[i]));
  }
  out.tags = dm.tags;
  return out;
}

std::size_t ReplicateSet::iv_index(std::string_view name) const {
  for (std::size_t i = 0; i < iv_names.size(); ++i)
    if (iv_names[i] == name) return i;
  throw Error(ErrorKind::schema, fmt::format("no independent variable named '{}'", name));
}

ReplicateSet bootstrap_fits(const DesignMatrix& dm, const BootstrapConfig& cfg, unsigned threads) {
  cfg.validate();
  const std::size_t n = dm.n_rows();
  const std::size_t p = dm.n_ivs();
  const std::size_t reps = cfg.n_bootstrap;
  if (n == 0 || n > UINT32_MAX) throw Error(ErrorKind::data, "unsupported number of rows for resampling");

  ReplicateSet out;
  for (const PercentizedColumn& c : dm.ivs) out.iv_names.push_back(c.name);
  out.b_w.assign(p, std::vector<double>(reps));
  out.beta.assign(p, std::vector<double>(reps));
  out.b_p.assign(p, std::vector<double>(reps));
  out.intercept_raw.assign(reps, 0.0);
  out.intercept_p.assign(reps, 0.0);
  out.r_squared.assign(reps, 0.0);
  std::vector<std::size_t> redraws(reps, 0);

  const std::size_t max_draws = 100 * reps;
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> total_draws{0};
  std::atomic<bool> stop{false};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    std::vector<std::uint32_t> rows;
    try {
      for (std::size_t k = next.fetch_add(1); k < reps && !stop.load(); k = next.fetch_add(1)) {
        std::mt19937_64 engine(replicate_stream_seed(cfg.seed, k));
        for (;;) {
          if (total_draws.fetch_add(1) >= max_draws)
            throw Error(ErrorKind::numeric,
                        fmt::format("bootstrap gave up after {} draws: resamples keep coming out "
                                    "rank deficient",
                                    max_draws));
          draw_resample(engine, n, rows);
          const DesignMatrix sample = resample_rows(dm, rows);
          try {
            const FitResult fit = fit_three_ways(sample);
            for (std::size_t i = 0; i < p; ++i) {
              out.b_w[i][k] = fit.coefficients[i].b_w;
              out.beta[i][k] = fit.coefficients[i].beta;
              out.b_p[i][k] = fit.coefficients[i].b_p;
            }
            out.intercept_raw[k] = fit.intercept_raw;
            out.intercept_p[k] = fit.intercept_p;
            out.r_squared[k] = fit.r_squared;
            break;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::numeric) throw;
            ++redraws[k];
          }
        }
      }
    } catch (...) {
      stop.store(true);
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(reps)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t r : redraws) out.redraws += r;
  return out;
}

// ---- inference ---------------------------------------------------------------

double nearest_rank_percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::numeric, "percentile of an empty sample");
  const double n = static_cast<double>(sorted.size());
  // Rounding guard: q * n lands a hair above an integer for e.g. 0.975 * 1000.
  auto rank = static_cast<std::size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

double min_proportion_p_value(std::span<const double> replicates) {
  if (replicates.empty()) throw Error(ErrorKind::numeric, "p-value of an empty sample");
  std::size_t le = 0;
  std::size_t ge = 0;
  for (double v : replicates) {
    if (v <= 0.0) ++le;
    if (v >= 0.0) ++ge;
  }
  const double n = static_cast<double>(replicates.size());
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / n);
}

BootstrapDistribution summarize(std::string name, std::vector<double> replicates,
                                double point_estimate, const BootstrapConfig& cfg) {
  if (replicates.empty()) throw Error(ErrorKind::numeric, fmt::format("no replicates for '{}'", name));
  BootstrapDistribution d;
  d.statistic_name = std::move(name);
  d.point_estimate = point_estimate;

  const double n = static_cast<double>(replicates.size());
  d.mean = kernels::sum(replicates) / n;
  d.se = replicates.size() > 1 ? std::sqrt(kernels::sum_sq_dev(replicates, d.mean) / (n - 1.0)) : 0.0;

  d.p_value = min_proportion_p_value(replicates);
  d.p_below_resolution = d.p_value == 0.0;

  std::vector<double> sorted = replicates;
  std::sort(sorted.begin(), sorted.end());
  const double tail = (1.0 - cfg.ci_level) / 2.0;
  d.ci_low = nearest_rank_percentile(sorted, tail);
  d.ci_high = nearest_rank_percentile(sorted, 1.0 - tail);
  d.replicates = std::move(replicates);
  return d;
}

std::map<std::string, BootstrapDistribution> coefficient_inference(const ReplicateSet& reps,
                                                                   const FitResult& full_fit,
                                                                   const BootstrapConfig& cfg) {
  if (reps.size() == 0) throw Error(ErrorKind::numeric, "coefficient inference needs replicates");
  std::map<std::string, BootstrapDistribution> out;
  auto add = [&](std::string key, const std::vector<double>& values, double point) {
    out.emplace(key, summarize(key, values, point, cfg));
  };
  add("intercept_raw", reps.intercept_raw, full_fit.intercept_raw);
  add("intercept_p", reps.intercept_p, full_fit.intercept_p);
  for (std::size_t i = 0; i < reps.iv_names.size(); ++i) {
    const CoefficientRecord& c = full_fit.coefficient(reps.iv_names[i]);
    add("b_w:" + c.name, reps.b_w[i], c.b_w);
    add("beta:" + c.name, reps.beta[i], c.beta);
    add("b_p:" + c.name, reps.b_p[i], c.b_p);
  }
  return out;
}

PairDifference pairwise_differences(const ReplicateSet& reps, const FitResult& full_fit,
                                    std::string_view iv_i, std::string_view iv_j,
                                    const BootstrapConfig& cfg) {
  if (iv_i == iv_j)
    throw Error(ErrorKind::schema, fmt::format("pairwise difference of '{}' with itself", iv_i));
  const std::size_t i = reps.iv_index(iv_i);
  const std::size_t j = reps.iv_index(iv_j);
  const double bi = full_fit.coefficient(iv_i).b_p;
  const double bj = full_fit.coefficient(iv_j).b_p;

  const std::size_t k_max = reps.size();
  std::vector<double> ds(k_max);
  std::vector<double> dd(k_max);
  for (std::size_t k = 0; k < k_max; ++k) {
    ds[k] = std::abs(reps.b_p[i][k]) - std::abs(reps.b_p[j][k]);
    dd[k] = reps.b_p[i][k] - reps.b_p[j][k];
  }
  PairDifference out;
  out.scalar = summarize(fmt::format("d_s:{}:{}", iv_i, iv_j), std::move(ds),
                         std::abs(bi) - std::abs(bj), cfg);
  out.directional = summarize(fmt::format("d_d:{}:{}", iv_i, iv_j), std::move(dd), bi - bj, cfg);
  return out;
}

int significance_stars(double p_value, bool below_resolution, std::size_t n_bootstrap,
                       std::span<const double> alpha_levels) {
  // Below resolution we only know p < 2/n.
  const double bound = below_resolution ? 2.0 / static_cast<double>(n_bootstrap) : p_value;
  int stars = 0;
  for (double alpha : alpha_levels) {
    const bool passes = below_resolution ? bound <= alpha : p_value < alpha;
    if (!passes) break;
    ++stars;
  }
  return stars;
}

const ComparisonCell& ComparisonMatrix::at(std::size_t row, std::size_t col) const {
  if (row >= cells.size() || col >= cells[row].size() || !cells[row][col])
    throw Error(ErrorKind::schema, fmt::format("comparison cell ({}, {}) is empty", row, col));
  return *cells[row][col];
}

std::pair<ComparisonMatrix, ComparisonMatrix> comparison_matrices(
    const ReplicateSet& reps, const FitResult& full_fit, const BootstrapConfig& cfg,
    std::span<const std::string> order) {
  std::vector<std::string> names(order.begin(), order.end());
  if (names.empty()) names = reps.iv_names;
  if (names.size() < 2) throw Error(ErrorKind::schema, "comparison matrices need at least two IVs");

  const std::size_t g = names.size();
  ComparisonMatrix scalar{ComparisonKind::scalar, names, {}};
  ComparisonMatrix directional{ComparisonKind::directional, names, {}};
  scalar.cells.assign(g, std::vector<std::optional<ComparisonCell>>(g));
  directional.cells.assign(g, std::vector<std::optional<ComparisonCell>>(g));

  auto cell = [&](BootstrapDistribution d) {
    ComparisonCell c;
    c.estimate = d.point_estimate;
    c.p_value = d.p_value;
    c.p_below_resolution = d.p_below_resolution;
    c.stars = significance_stars(d.p_value, d.p_below_resolution, cfg.n_bootstrap, cfg.alpha_levels);
    c.distribution = std::move(d);
    return c;
  };

  for (std::size_t row = 0; row < g; ++row) {
    for (std::size_t col = 0; col < g; ++col) {
      if (row == col) continue;
      PairDifference diff = pairwise_differences(reps, full_fit, names[col], names[row], cfg);
      scalar.cells[row][col] = cell(std::move(diff.scalar));
      directional.cells[row][col] = cell(std::move(diff.directional));
    }
  }
  return {std::move(scalar), std::move(directional)};
}

}  // namespace pctcoef
