#include "conelab/tridiag.hpp"

#include <lapacke.h>

#include <cmath>
#include <string>

#include "conelab/error.hpp"

namespace conelab::tridiag {

std::vector<double> solve(const std::vector<double>& lower, const std::vector<double>& diag,
                          const std::vector<double>& upper, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  require(n > 0 && lower.size() == n && upper.size() == n && rhs.size() == n, ErrorCode::Domain,
          "tridiagonal system has inconsistent sizes");
  std::vector<double> c(n);
  double denom = diag[0];
  require(denom != 0.0, ErrorCode::Solver, "zero pivot in tridiagonal solve");
  c[0] = upper[0] / denom;
  rhs[0] /= denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - lower[i] * c[i - 1];
    require(denom != 0.0 && std::isfinite(denom), ErrorCode::Solver, "zero pivot in tridiagonal solve");
    c[i] = upper[i] / denom;
    rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

Eigenpair lowest(const std::vector<double>& diag, const std::vector<double>& offdiag) {
  const lapack_int n = static_cast<lapack_int>(diag.size());
  require(n >= 1 && offdiag.size() + 1 == diag.size(), ErrorCode::Domain,
          "tridiagonal eigenproblem has inconsistent sizes");
  std::vector<double> d = diag, e = offdiag;
  e.push_back(0.0);
  std::vector<double> w(n), z(n);
  std::vector<lapack_int> ifail(n);
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevx(LAPACK_COL_MAJOR, 'V', 'I', n, d.data(), e.data(), 0.0, 0.0,
                                         1, 1, 2.0 * LAPACKE_dlamch('S'), &found, w.data(), z.data(), n, ifail.data());
  require(info == 0 && found == 1, ErrorCode::Solver,
          "dstevx failed with info " + std::to_string(info));
  return {w[0], std::move(z)};
}

}  // namespace conelab::tridiag
