#pragma once

#include <vector>

namespace conelab::tridiag {

// Solves lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
// lower[0] and upper[n-1] are ignored.
std::vector<double> solve(const std::vector<double>& lower, const std::vector<double>& diag,
                          const std::vector<double>& upper, std::vector<double> rhs);

struct Eigenpair {
  double value;
  std::vector<double> vector;
};

// Smallest eigenpair of the symmetric tridiagonal matrix (diag, offdiag),
// offdiag of length n-1.
Eigenpair lowest(const std::vector<double>& diag, const std::vector<double>& offdiag);

}  // namespace conelab::tridiag
