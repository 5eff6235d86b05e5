#pragma once
// Case-resampling percentile bootstrap for the coefficients and for pairwise
// differences between percentage coefficients.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pctcoef/regression.hpp"

namespace pctcoef {

struct BootstrapConfig {
  std::size_t n_bootstrap = 10000;
  std::uint64_t seed = 0;
  double ci_level = 0.95;
  std::vector<double> alpha_levels{0.05, 0.01, 0.001};

  void validate() const;
};

/// Seed of the RNG stream owned by replicate `k`. Streams depend only on
/// (seed, k), never on scheduling.
std::uint64_t replicate_stream_seed(std::uint64_t seed, std::uint64_t k) noexcept;

/// Uniform integer in [0, bound) by rejection; identical on every platform.
template <typename Engine>
std::uint64_t uniform_index(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

/// Fills `rows` with a resample (with replacement) of indices in [0, n).
void draw_resample(std::mt19937_64& engine, std::size_t n, std::vector<std::uint32_t>& rows);

/// Subset of a design matrix selected (with repetition) by row index.
DesignMatrix resample_rows(const DesignMatrix& dm, std::span<const std::uint32_t> rows);

/// Replicate coefficients stored statistic-major: b_p[i][k] is IV i in
/// replicate k.
struct ReplicateSet {
  std::vector<std::string> iv_names;
  std::vector<std::vector<double>> b_w;
  std::vector<std::vector<double>> beta;
  std::vector<std::vector<double>> b_p;
  std::vector<double> intercept_raw;
  std::vector<double> intercept_p;
  std::vector<double> r_squared;
  std::size_t redraws = 0;  ///< resamples discarded as rank deficient

  std::size_t size() const noexcept { return intercept_raw.size(); }
  std::size_t iv_index(std::string_view name) const;
};

/// Fits `cfg.n_bootstrap` case resamples in parallel. Replicate k draws its
/// rows from stream (seed, k) and redraws from the same stream while the
/// resample is rank deficient; the whole run fails after 100 * n_bootstrap
/// draws. Results do not depend on `threads`.
ReplicateSet bootstrap_fits(const DesignMatrix& dm, const BootstrapConfig& cfg,
                            unsigned threads = 1);

struct BootstrapDistribution {
  std::string statistic_name;
  std::vector<double> replicates;
  double point_estimate = 0.0;
  double mean = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;
  /// True when no replicate fell on the far side of zero, so the p-value is
  /// only known to be below 2 / n_bootstrap.
  bool p_below_resolution = false;
};

/// Nearest-rank percentile of sorted data, q in (0, 1).
double nearest_rank_percentile(std::span<const double> sorted, double q);

/// Two-sided p = 2 * min(share <= 0, share >= 0), capped at 1. Zeros count
/// on both sides.
double min_proportion_p_value(std::span<const double> replicates);

BootstrapDistribution summarize(std::string name, std::vector<double> replicates,
                                double point_estimate, const BootstrapConfig& cfg);

/// Keys: "intercept_raw", "intercept_p", and "b_w:<iv>", "beta:<iv>",
/// "b_p:<iv>" for every IV.
std::map<std::string, BootstrapDistribution> coefficient_inference(const ReplicateSet& reps,
                                                                   const FitResult& full_fit,
                                                                   const BootstrapConfig& cfg);

struct PairDifference {
  BootstrapDistribution scalar;       ///< |b_p(i)| - |b_p(j)|
  BootstrapDistribution directional;  ///< b_p(i) - b_p(j)
};

PairDifference pairwise_differences(const ReplicateSet& reps, const FitResult& full_fit,
                                    std::string_view iv_i, std::string_view iv_j,
                                    const BootstrapConfig& cfg);

/// Number of thresholds in `alpha_levels` that p falls below. A p-value
/// under the resolution limit counts as below every alpha >= 2/n_bootstrap.
int significance_stars(double p_value, bool below_resolution, std::size_t n_bootstrap,
                       std::span<const double> alpha_levels);

enum class ComparisonKind { scalar, directional };

struct ComparisonCell {
  double estimate = 0.0;
  double p_value = 1.0;
  bool p_below_resolution = false;
  int stars = 0;
  BootstrapDistribution distribution;
};

/// Square table laid out like a printed comparison table: the cell in row r,
/// column c holds d(iv_names[c], iv_names[r]), so every column reads "this
/// IV minus the row IV". The diagonal is empty.
struct ComparisonMatrix {
  ComparisonKind kind = ComparisonKind::scalar;
  std::vector<std::string> iv_names;
  std::vector<std::vector<std::optional<ComparisonCell>>> cells;

  const ComparisonCell& at(std::size_t row, std::size_t col) const;
};

/// Both matrices over `order` (defaults to fit order). Throws Error(schema)
/// for fewer than two IVs.
std::pair<ComparisonMatrix, ComparisonMatrix> comparison_matrices(
    const ReplicateSet& reps, const FitResult& full_fit, const BootstrapConfig& cfg,
    std::span<const std::string> order = {});

}  // namespace pctcoef
