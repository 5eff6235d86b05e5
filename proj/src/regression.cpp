#include "pctcoef/regression.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "pctcoef/error.hpp"
#include "pctcoef/kernels.hpp"
#include "pctcoef/linalg.hpp"

namespace pctcoef {

namespace {

std::string column_label(std::span<const std::string> names, std::size_t j) {
  return j < names.size() ? names[j] : fmt::format("x{}", j + 1);
}

}  // namespace

OlsFit fit_ols(std::span<const double> y, std::span<const std::span<const double>> x,
               std::span<const std::string> names) {
  const std::size_t n = y.size();
  const std::size_t p = x.size();
  for (std::size_t j = 0; j < p; ++j)
    if (x[j].size() != n)
      throw Error(ErrorKind::data, fmt::format("column {} has {} rows, expected {}",
                                               column_label(names, j), x[j].size(), n));
  if (n <= p + 1)
    throw Error(ErrorKind::numeric,
                fmt::format("insufficient data: {} rows for {} predictors plus intercept", n, p));

  const double dn = static_cast<double>(n);
  const double y_mean = kernels::sum(y) / dn;
  std::vector<double> x_mean(p);

  linalg::Matrix a(n, p);
  std::vector<double> col_norm(p);
  for (std::size_t j = 0; j < p; ++j) {
    x_mean[j] = kernels::sum(x[j]) / dn;
    std::span<double> cj = a.col(j);
    for (std::size_t r = 0; r < n; ++r) cj[r] = x[j][r] - x_mean[j];
    col_norm[j] = std::sqrt(kernels::dot(cj, cj));
    if (col_norm[j] == 0.0)
      throw Error(ErrorKind::numeric,
                  fmt::format("collinearity: column {{{}}} is constant", column_label(names, j)));
  }

  OlsFit fit;
  fit.coefficients.assign(p, 0.0);
  const bool constant_y = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });

  std::vector<double> rhs(n);
  for (std::size_t r = 0; r < n; ++r) rhs[r] = y[r] - y_mean;

  linalg::householder_qr(a, rhs);

  // Rank decision on R with unit-norm columns so that rescaling a predictor
  // never changes the verdict.
  linalg::Matrix r_scaled(p, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i <= j; ++i) r_scaled(i, j) = a(i, j) / col_norm[j];
  const linalg::SvdResult svd = linalg::jacobi_svd(r_scaled);
  const double smax = svd.singular_values.front();
  if (!(svd.singular_values.back() > kRankTolerance * smax)) {
    const std::size_t last = p - 1;
    double vmax = 0.0;
    for (std::size_t i = 0; i < p; ++i) vmax = std::max(vmax, std::abs(svd.v(i, last)));
    std::vector<std::string> involved;
    for (std::size_t i = 0; i < p; ++i)
      if (std::abs(svd.v(i, last)) > 1e-3 * vmax) involved.push_back(column_label(names, i));
    throw Error(ErrorKind::numeric,
                fmt::format("collinearity: columns {{{}}} are linearly dependent",
                            fmt::join(involved, ", ")));
  }

  if (constant_y) {
    fit.intercept = y[0];
    fit.constant_dv = true;
    return fit;
  }

  fit.coefficients = linalg::solve_upper(a, std::span<const double>(rhs).first(p));
  fit.intercept = y_mean;
  for (std::size_t j = 0; j < p; ++j) fit.intercept -= fit.coefficients[j] * x_mean[j];

  std::span<const double> resid = std::span<const double>(rhs).subspan(p);
  fit.rss = kernels::dot(resid, resid);
  fit.tss = kernels::sum_sq_dev(y, y_mean);
  fit.r_squared = std::clamp(1.0 - fit.rss / fit.tss, 0.0, 1.0);
  return fit;
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double mean = kernels::sum(x) / static_cast<double>(x.size());
  return std::sqrt(kernels::sum_sq_dev(x, mean) / static_cast<double>(x.size() - 1));
}

double standardized_beta(double b_w, double sd_x, double sd_y) {
  if (!(sd_x > 0.0) || !(sd_y > 0.0))
    throw Error(ErrorKind::numeric,
                fmt::format("degenerate variable: standard deviations must be positive (sd_x={}, sd_y={})",
                            sd_x, sd_y));
  return b_w * sd_x / sd_y;
}

const CoefficientRecord& FitResult::coefficient(std::string_view name) const {
  for (const CoefficientRecord& c : coefficients)
    if (c.name == name) return c;
  throw Error(ErrorKind::schema, fmt::format("no coefficient named '{}'", name));
}

FitResult fit_three_ways(const DesignMatrix& dm) {
  const std::size_t p = dm.n_ivs();
  std::vector<std::string> names;
  std::vector<std::span<const double>> raw_x;
  std::vector<std::span<const double>> pct_x;
  names.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    names.push_back(dm.ivs[i].name);
    raw_x.emplace_back(dm.raw_ivs[i]);
    pct_x.emplace_back(dm.ivs[i].values);
  }

  const OlsFit raw = fit_ols(dm.raw_dv, raw_x, names);
  const OlsFit pct = fit_ols(dm.dv.values, pct_x, names);

  FitResult out;
  out.intercept_raw = raw.intercept;
  out.intercept_p = pct.intercept;
  out.r_squared = raw.r_squared;
  out.r_squared_p = pct.r_squared;
  out.n_used = dm.n_rows();
  if (raw.constant_dv)
    out.warnings.push_back(fmt::format("dependent variable '{}' is constant; r^2 set to 0", dm.dv.name));

  const double sd_y = sample_sd(dm.raw_dv);
  out.coefficients.reserve(p);
  for (std::size_t i = 0; i < p; ++i) {
    CoefficientRecord rec;
    rec.name = names[i];
    rec.b_w = raw.coefficients[i];
    rec.b_p = pct.coefficients[i];
    rec.beta = raw.constant_dv ? 0.0 : standardized_beta(rec.b_w, sample_sd(dm.raw_ivs[i]), sd_y);
    out.coefficients.push_back(std::move(rec));
  }
  return out;
}

}  // namespace pctcoef
