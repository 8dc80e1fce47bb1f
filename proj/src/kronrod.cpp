// Gauss-Kronrod rules through Laurie's mixed-moment extension of the
// recurrence table: the Jacobi-Kronrod matrix of order 2n+1 shares its
// leading n x n block with the Gauss Jacobi matrix, and its eigen-decomposition
// gives the Kronrod nodes and weights directly.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "bvquad/error.hpp"
#include "bvquad/rules.hpp"
#include "bvquad/tridiagonal.hpp"

namespace bvquad {
namespace {

bool kronrod_lambda_supported(double lambda) {
  return (lambda >= 0.0 && lambda <= 1.0) || lambda == 3.0;
}

struct KronrodTable {
  std::vector<double> a;
  std::vector<double> b;
};

// a0 needs floor(3n/2)+1 entries, b0 ceil(3n/2)+1 entries.
KronrodTable extend_recurrence(int n, const std::vector<double>& a0, const std::vector<double>& b0) {
  std::vector<double> a(2 * n + 1, 0.0);
  std::vector<double> b(2 * n + 1, 0.0);
  for (int k = 0; k <= (3 * n) / 2; ++k) a[k] = a0[k];
  for (int k = 0; k <= (3 * n + 1) / 2; ++k) b[k] = b0[k];

  const std::size_t width = n / 2 + 2;
  std::vector<double> s(width, 0.0);
  std::vector<double> t(width, 0.0);
  t[1] = b[n + 1];

  // Every update below reads the mixed moments of the previous sweep and
  // writes a running sum over k, so it is computed from a snapshot.
  // The mixed moments shrink like prod(b) (about 4^-m for Legendre) and
  // underflow near n = 500. Every update is homogeneous of degree one in
  // (s, t) and the a, b updates are ratios, so both arrays share a rescale.
  auto rescale = [&] {
    double big = 0.0;
    for (std::size_t i = 0; i < width; ++i) big = std::max({big, std::abs(s[i]), std::abs(t[i])});
    if (big > 0.0 && std::isfinite(big)) {
      const double f = std::ldexp(1.0, -std::ilogb(big));
      for (std::size_t i = 0; i < width; ++i) {
        s[i] *= f;
        t[i] *= f;
      }
    }
  };

  std::vector<double> terms;
  for (int m = 0; m <= n - 2; ++m) {
    terms.clear();
    for (int k = (m + 1) / 2; k >= 0; --k) {
      const int l = m - k;
      terms.push_back((a[k + n + 1] - a[l]) * t[k + 1] + b[k + n + 1] * s[k] - b[l] * s[k + 1]);
    }
    double running = 0.0;
    int idx = 0;
    for (int k = (m + 1) / 2; k >= 0; --k) {
      running += terms[idx++];
      s[k + 1] = running;
    }
    std::swap(s, t);
    rescale();
  }

  for (int j = n / 2; j >= 0; --j) s[j + 1] = s[j];

  for (int m = n - 1; m <= 2 * n - 3; ++m) {
    const int k_first = m + 1 - n;
    const int k_last = (m - 1) / 2;
    terms.clear();
    for (int k = k_first; k <= k_last; ++k) {
      const int l = m - k;
      const int j = n - 1 - l;
      terms.push_back(-(a[k + n + 1] - a[l]) * t[j + 1] - b[k + n + 1] * s[j + 1] +
                      b[l] * s[j + 2]);
    }
    double running = 0.0;
    int idx = 0;
    int j_last = 0;
    for (int k = k_first; k <= k_last; ++k) {
      const int j = n - 1 - (m - k);
      running += terms[idx++];
      s[j + 1] = running;
      j_last = j;
    }
    const int k = (m + 1) / 2;
    if (m % 2 == 0) {
      a[k + n + 1] = a[k] + (s[j_last + 1] - b[k + n + 1] * s[j_last + 2]) / t[j_last + 2];
    } else {
      b[k + n + 1] = s[j_last + 1] / s[j_last + 2];
    }
    std::swap(s, t);
    rescale();
  }

  a[2 * n] = a[n - 1] - b[2 * n] * s[1] / t[1];
  return {std::move(a), std::move(b)};
}

}  // namespace

QuadratureRule kronrod_rule(const WeightSpec& weight, int n) {
  if (!kronrod_lambda_supported(weight.lambda())) {
    throw Error(ErrorKind::unsupported_lambda,
                "Gauss-Kronrod rules are supported for lambda in [0,1] or lambda = 3");
  }
  if (n < 1) throw Error(ErrorKind::size_error, "kronrod_rule needs n >= 1");

  const RecurrenceTable rec = recurrence(weight, (3 * n + 1) / 2 + 1);
  const KronrodTable ext = extend_recurrence(n, rec.alpha, rec.beta);

  const int size = 2 * n + 1;
  std::vector<double> off(size - 1);
  for (int k = 1; k < size; ++k) {
    if (!(ext.b[k] > 0.0)) {
      throw Error(ErrorKind::extension_failure,
                  "Kronrod extension has complex nodes (non-positive recurrence coefficient)");
    }
    off[k - 1] = std::sqrt(ext.b[k]);
  }
  const TridiagonalEigen eig = tridiagonal_eigen(ext.a, std::move(off));

  std::vector<double> x = eig.values;
  std::vector<double> w(size);
  for (int j = 0; j < size; ++j) {
    w[j] = ext.b[0] * eig.first_components[j] * eig.first_components[j];
  }
  // The ultraspherical weights are symmetric; mirror-average the eigenpairs.
  for (int i = 0; i < size / 2; ++i) {
    const int j = size - 1 - i;
    const double xs = 0.5 * (x[j] - x[i]);
    const double ws = 0.5 * (w[i] + w[j]);
    x[i] = -xs;
    x[j] = xs;
    w[i] = ws;
    w[j] = ws;
  }
  x[size / 2] = 0.0;

  for (int j = 0; j < size; ++j) {
    // Some extensions (Chebyshev weights) put nodes at +-1 exactly.
    if (std::abs(x[j]) > 1.0 && std::abs(x[j]) <= 1.0 + 1e-13) x[j] = std::copysign(1.0, x[j]);
    if (x[j] < -1.0 || x[j] > 1.0) {
      throw Error(ErrorKind::extension_failure, "Kronrod node outside [-1,1]");
    }
    if (j > 0 && !(x[j] > x[j - 1])) {
      throw Error(ErrorKind::extension_failure, "Kronrod nodes are not distinct");
    }
    if (!(w[j] > 0.0)) {
      throw Error(ErrorKind::extension_failure, "non-positive Kronrod weight");
    }
  }
  return {weight, std::move(x), std::move(w), RuleFamily::kronrod, 3 * n + 1};
}

}  // namespace bvquad
