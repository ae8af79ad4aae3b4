#pragma once

#include <cstdint>

namespace fbmlt {

/// Probabilists' Hermite polynomial He_q(x) by three-term recurrence.
double hermite(int q, double x);

double log_beta(double a, double b);
double beta_fn(double a, double b);

/// n!! for n >= -1, with (-1)!! = 0!! = 1.
double double_factorial(int n);

double log_factorial(int n);

}  // namespace fbmlt
