#pragma once
// Ordinary least squares in three parameterizations: raw scales (b_w),
// standard-deviation units (beta) and percentage scales (b_p).

#include <span>
#include <string>
#include <vector>

#include "pctcoef/percentize.hpp"

namespace pctcoef {

struct OlsFit {
  double intercept = 0.0;
  std::vector<double> coefficients;
  double r_squared = 0.0;
  double rss = 0.0;
  double tss = 0.0;
  bool constant_dv = false;
};

/// Singular values of the column-normalized, centered design below this
/// fraction of the largest one signal collinearity.
inline constexpr double kRankTolerance = 1e-10;

/// Least-squares fit of y on the columns of `x` plus an intercept, via
/// Householder QR of the centered design. A constant y yields zero slopes
/// and r^2 = 0. `names` (optional, parallel to `x`) label the columns in
/// collinearity errors.
///
/// Throws Error(numeric) when n <= p + 1 or the centered design is rank
/// deficient.
OlsFit fit_ols(std::span<const double> y, std::span<const std::span<const double>> x,
               std::span<const std::string> names = {});

/// b_w * sd_x / sd_y. Throws Error(numeric) when either SD is not positive.
double standardized_beta(double b_w, double sd_x, double sd_y);

/// Sample standard deviation with the n-1 denominator.
double sample_sd(std::span<const double> x);

struct CoefficientRecord {
  std::string name;
  double b_w = 0.0;   ///< DV units per IV unit
  double beta = 0.0;  ///< DV SDs per IV SD
  double b_p = 0.0;   ///< DV scale fraction per whole IV scale
};

struct FitResult {
  double intercept_raw = 0.0;
  double intercept_p = 0.0;
  std::vector<CoefficientRecord> coefficients;
  double r_squared = 0.0;    ///< from the raw-scale fit
  double r_squared_p = 0.0;  ///< from the percentized fit; equal up to rounding
  std::size_t n_used = 0;
  std::vector<std::string> warnings;

  const CoefficientRecord& coefficient(std::string_view name) const;
};

/// Fits the raw-scale and percentized models and derives beta from the
/// raw slopes and sample SDs.
FitResult fit_three_ways(const DesignMatrix& dm);

}  // namespace pctcoef
