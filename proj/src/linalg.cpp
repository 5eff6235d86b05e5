#include "pctcoef/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pctcoef/kernels.hpp"

namespace pctcoef::linalg {

void householder_qr(Matrix& a, std::span<double> rhs) {
  const std::size_t n = a.rows();
  const std::size_t p = a.cols();
  std::vector<double> v(n);
  for (std::size_t k = 0; k < p && k < n; ++k) {
    const std::size_t len = n - k;
    std::span<double> x = a.col(k).subspan(k);
    const double norm = std::sqrt(kernels::dot(x, x));
    if (norm == 0.0) continue;  // exact zero column; rank check reports it

    // v = x + sign(x0) |x| e1, reflector H = I - 2 v v^T / (v^T v)
    const double alpha = x[0] >= 0.0 ? -norm : norm;
    std::span<double> vk(v.data(), len);
    std::copy(x.begin(), x.end(), vk.begin());
    vk[0] -= alpha;
    const double vtv = kernels::dot(vk, vk);
    if (vtv == 0.0) continue;

    x[0] = alpha;
    std::fill(x.begin() + 1, x.end(), 0.0);
    for (std::size_t j = k + 1; j < p; ++j) {
      std::span<double> cj = a.col(j).subspan(k);
      kernels::axpy(-2.0 * kernels::dot(vk, cj) / vtv, vk, cj);
    }
    std::span<double> tail = rhs.subspan(k);
    kernels::axpy(-2.0 * kernels::dot(vk, tail) / vtv, vk, tail);
  }
}

std::vector<double> solve_upper(const Matrix& r, std::span<const double> b) {
  const std::size_t p = r.cols();
  std::vector<double> x(p, 0.0);
  for (std::size_t i = p; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < p; ++j) s -= r(i, j) * x[j];
    x[i] = s / r(i, i);
  }
  return x;
}

SvdResult jacobi_svd(Matrix a) {
  const std::size_t m = a.rows();
  const std::size_t p = a.cols();
  Matrix v(p, p);
  for (std::size_t i = 0; i < p; ++i) v(i, i) = 1.0;

  constexpr double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double alpha = kernels::dot(a.col(i), a.col(i));
        const double beta = kernels::dot(a.col(j), a.col(j));
        const double gamma = kernels::dot(a.col(i), a.col(j));
        if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < m; ++r) {
          const double ai = a(r, i);
          const double aj = a(r, j);
          a(r, i) = c * ai - s * aj;
          a(r, j) = s * ai + c * aj;
        }
        for (std::size_t r = 0; r < p; ++r) {
          const double vi = v(r, i);
          const double vj = v(r, j);
          v(r, i) = c * vi - s * vj;
          v(r, j) = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(p);
  for (std::size_t j = 0; j < p; ++j) sv[j] = std::sqrt(kernels::dot(a.col(j), a.col(j)));
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sv[x] > sv[y]; });

  SvdResult out;
  out.v = Matrix(p, p);
  for (std::size_t k = 0; k < p; ++k) {
    out.singular_values.push_back(sv[order[k]]);
    for (std::size_t r = 0; r < p; ++r) out.v(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace pctcoef::linalg
