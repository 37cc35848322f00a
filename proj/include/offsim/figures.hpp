#pragma once

#include <string>
#include <vector>

#include "offsim/money.hpp"
#include "offsim/tightness.hpp"

namespace offsim {

/// One point of the logistic bid curve, independent of the bidder's edge
/// rules: O(c) = (B - F) [1 - 1/(1 + e^{-a(c-1)})] + F, rounded to Money.
Money bid_curve_point(Money budget, Money fine, double a_n, double c_n);

/// CSV rows (a_n, c_n, bid) over c_n in [0, 2], `samples` points per curve.
std::string bid_curve_csv(Money budget, Money fine,
                          const std::vector<double> &a_values, int samples);

/// CSV rows (op, c, preference) over [0, B_n] x [0, c_max] on a grid x grid
/// lattice.
std::string preference_grid_csv(Money b_n, double c_max, double k1, double k2,
                                int grid);

}  // namespace offsim
