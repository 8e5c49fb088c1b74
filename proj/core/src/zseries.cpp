// x_k, p_z and the law of Z. Values are memoized per process; the memo is
// guarded by a mutex so concurrent callers see fully computed entries only.

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include <boost/math/special_functions/binomial.hpp>

#include "mrca/analytics.hpp"

namespace mrca::analytics {

namespace {

double x_k_closed(int k) {
  // (-1)^{k+1} / 3^{2k-1} sum_{j=1}^{k} C(2k-j-1, k-j) 3^{j-1} (b_j - [j even] 2 zeta(j))
  double sum = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double c = boost::math::binomial_coefficient<double>(
        static_cast<unsigned>(2 * k - j - 1), static_cast<unsigned>(k - j));
    double term = b_coefficient(j);
    if (j % 2 == 0) term -= 2.0 * zeta(j);
    sum += c * std::pow(3.0, j - 1) * term;
  }
  const double sign = (k % 2 == 1) ? 1.0 : -1.0;
  return sign * sum / std::pow(3.0, 2 * k - 1);
}

class ZSeriesMemo {
 public:
  double x(int k, XMethod method) {
    std::lock_guard lock(mutex_);
    auto& cache = method == XMethod::series ? x_series_ : x_closed_;
    if (auto it = cache.find(k); it != cache.end()) return it->second;
    const double v = method == XMethod::series ? x_k_series(k).value : x_k_closed(k);
    cache.emplace(k, v);
    return v;
  }

  double p_recursion(int z) {
    std::vector<double> x;
    x.reserve(static_cast<std::size_t>(z));
    for (int j = 1; j <= z; ++j) x.push_back(this->x(j, XMethod::closed_form));
    std::lock_guard lock(mutex_);
    if (p_.empty()) p_.push_back(1.0);
    while (static_cast<int>(p_.size()) <= z) {
      const int n = static_cast<int>(p_.size());
      double s = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        s += sign * p_[static_cast<std::size_t>(n - j)] * x[static_cast<std::size_t>(j - 1)];
      }
      p_.push_back(s / n);
    }
    return p_[static_cast<std::size_t>(z)];
  }

 private:
  std::mutex mutex_;
  std::map<int, double> x_series_;
  std::map<int, double> x_closed_;
  std::vector<double> p_;
};

ZSeriesMemo& memo() {
  static ZSeriesMemo instance;
  return instance;
}

// Visits every partition of n as a nondecreasing sequence of parts
// (ascending-composition generation).
template <class Visit>
void for_each_partition(int n, Visit&& visit) {
  if (n == 0) {
    visit(std::vector<int>{});
    return;
  }
  std::vector<int> a(static_cast<std::size_t>(n) + 1, 0);
  int k = 1;
  int y = n - 1;
  while (k != 0) {
    int x = a[static_cast<std::size_t>(k - 1)] + 1;
    --k;
    while (2 * x <= y) {
      a[static_cast<std::size_t>(k)] = x;
      y -= x;
      ++k;
    }
    const int l = k + 1;
    while (x <= y) {
      a[static_cast<std::size_t>(k)] = x;
      a[static_cast<std::size_t>(l)] = y;
      visit(std::vector<int>(a.begin(), a.begin() + l + 1));
      ++x;
      --y;
    }
    a[static_cast<std::size_t>(k)] = x + y;
    y = x + y - 1;
    visit(std::vector<int>(a.begin(), a.begin() + k + 1));
  }
}

double p_partition(int z) {
  std::vector<double> x_over_j(static_cast<std::size_t>(z) + 1, 0.0);
  for (int j = 1; j <= z; ++j) x_over_j[static_cast<std::size_t>(j)] = memo().x(j, XMethod::closed_form) / j;
  double total = 0.0;
  for_each_partition(z, [&](const std::vector<int>& parts) {
    // parts are nondecreasing; a_j = multiplicity of j.
    double term = 1.0;
    int part_count = 0;
    std::size_t i = 0;
    while (i < parts.size()) {
      std::size_t r = i;
      while (r < parts.size() && parts[r] == parts[i]) ++r;
      const int a = static_cast<int>(r - i);
      const double base = x_over_j[static_cast<std::size_t>(parts[i])];
      double factor = 1.0;
      for (int m = 1; m <= a; ++m) factor *= base / m;  // base^a / a!
      term *= factor;
      part_count += a;
      i = r;
    }
    const double sign = ((z + part_count) % 2 == 0) ? 1.0 : -1.0;
    total += sign * term;
  });
  return total;
}

}  // namespace

double x_k(int k, XMethod method) {
  if (k < 1) throw DomainError("x_k: k must be >= 1");
  return memo().x(k, method);
}

double p_z(int z, PMethod method) {
  if (z < 0) throw DomainError("p_z: z must be >= 0");
  if (z == 0) return 1.0;
  if (method == PMethod::partition) {
    if (z > kMaxPartitionZ) throw DomainError("p_z: partition route is capped at z = " + std::to_string(kMaxPartitionZ));
    return p_partition(z);
  }
  return memo().p_recursion(z);
}

double pmf_Z(int z) {
  if (z < 0) throw DomainError("pmf_Z: z must be >= 0");
  return std::ldexp(p_z(z), z) / 3.0;
}

}  // namespace mrca::analytics
