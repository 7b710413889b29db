#pragma once

#include <span>

namespace hyperrelax {

/// Least-squares slope of y against x. Needs at least two distinct x.
double least_squares_slope(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace hyperrelax
