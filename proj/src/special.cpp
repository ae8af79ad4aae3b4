#include "fbmlt/special.hpp"

#include <cmath>
#include <string>

#include "fbmlt/error.hpp"

namespace fbmlt {

double hermite(int q, double x) {
  if (q < 0) throw DomainError("hermite: negative order " + std::to_string(q));
  if (q == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int n = 1; n < q; ++n) {
    const double next = x * cur - n * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double log_beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: arguments must be positive");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

double double_factorial(int n) {
  if (n < -1) throw DomainError("double_factorial: n < -1");
  double r = 1.0;
  for (int k = n; k > 1; k -= 2) r *= k;
  return r;
}

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(n + 1.0);
}

}  // namespace fbmlt
