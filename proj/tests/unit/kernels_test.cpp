#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pctcoef/kernels.hpp"
#include "pctcoef/regression.hpp"
#include "oracles.hpp"

namespace kernels = pctcoef::kernels;

namespace {

std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> z(0.5, 3.0);
  std::vector<double> v(n);
  for (double& x : v) x = z(rng);
  return v;
}

// Reassociation error bound for a sum of n terms of magnitude <= scale.
double tol(std::size_t n, double scale) { return 1e-14 * static_cast<double>(n + 1) * scale; }

struct BackendGuard {
  kernels::Backend saved = kernels::active().backend;
  ~BackendGuard() { kernels::select_backend(saved); }
};

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  const auto backends = kernels::available_backends();
  ASSERT_FALSE(backends.empty());
  EXPECT_EQ(backends.front(), kernels::Backend::scalar);
  EXPECT_NE(kernels::find_table(kernels::Backend::scalar), nullptr);
}

TEST(Kernels, EveryBackendMatchesScalarReference) {
  std::mt19937_64 rng(7);
  const kernels::KernelTable& ref = *kernels::find_table(kernels::Backend::scalar);
  for (kernels::Backend b : kernels::available_backends()) {
    const kernels::KernelTable& t = *kernels::find_table(b);
    SCOPED_TRACE(std::string(kernels::name(b)));
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 127u, 1000u}) {
      const auto a = random_vec(rng, n);
      const auto c = random_vec(rng, n);
      double mag = 0.0;
      for (std::size_t i = 0; i < n; ++i) mag = std::max(mag, std::abs(a[i] * c[i]) + std::abs(a[i]));

      EXPECT_NEAR(t.dot(a.data(), c.data(), n), ref.dot(a.data(), c.data(), n), tol(n, mag));
      EXPECT_NEAR(t.sum(a.data(), n), ref.sum(a.data(), n), tol(n, mag));
      EXPECT_NEAR(t.sum_sq_dev(a.data(), n, 0.3), ref.sum_sq_dev(a.data(), n, 0.3), tol(n, mag * mag + 1));

      auto y1 = c;
      auto y2 = c;
      t.axpy(-1.7, a.data(), y1.data(), n);
      ref.axpy(-1.7, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-14 * (std::abs(y2[i]) + 2 * mag));

      if (n > 0) {
        std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
        std::vector<std::uint32_t> idx(n + 3);
        for (auto& i : idx) i = pick(rng);
        std::vector<double> g1(idx.size()), g2(idx.size());
        t.gather(a.data(), idx.data(), g1.data(), idx.size());
        ref.gather(a.data(), idx.data(), g2.data(), idx.size());
        EXPECT_EQ(g1, g2);
      }
    }
  }
}

TEST(Kernels, SelectBackendRejectsUnavailable) {
  BackendGuard guard;
  for (kernels::Backend b : {kernels::Backend::scalar, kernels::Backend::avx2, kernels::Backend::neon}) {
    const bool available = kernels::find_table(b) != nullptr;
    EXPECT_EQ(kernels::select_backend(b), available);
    if (available) EXPECT_EQ(kernels::active().backend, b);
  }
}

TEST(Kernels, OlsFitAgreesAcrossBackends) {
  BackendGuard guard;
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = oracle::random_instance(rng, 120, 5);
    std::vector<std::span<const double>> cols(inst.x.begin(), inst.x.end());
    ASSERT_TRUE(kernels::select_backend(kernels::Backend::scalar));
    const auto ref = pctcoef::fit_ols(inst.y, cols);
    for (kernels::Backend b : kernels::available_backends()) {
      ASSERT_TRUE(kernels::select_backend(b));
      const auto fit = pctcoef::fit_ols(inst.y, cols);
      EXPECT_NEAR(fit.intercept, ref.intercept, 1e-9 * (1 + std::abs(ref.intercept)));
      EXPECT_NEAR(fit.r_squared, ref.r_squared, 1e-12);
      for (std::size_t j = 0; j < cols.size(); ++j)
        EXPECT_NEAR(fit.coefficients[j], ref.coefficients[j], 1e-9 * (1 + std::abs(ref.coefficients[j])));
    }
  }
}
