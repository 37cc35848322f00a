#include "offsim/figures.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace offsim {

Money bid_curve_point(Money budget, Money fine, double a_n, double c_n) {
  const double b = budget.to_double();
  const double f = fine.to_double();
  const double logistic = 1.0 / (1.0 + std::exp(-a_n * (c_n - 1.0)));
  return Money::from_double((b - f) * (1.0 - logistic) + f);
}

namespace {

std::string fmt(double v, const char *spec = "%.6f") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

}  // namespace

std::string bid_curve_csv(Money budget, Money fine,
                          const std::vector<double> &a_values, int samples) {
  if (fine > budget) {
    throw SimError(ErrorCode::config_error, "fine exceeds budget");
  }
  if (samples < 2) {
    throw SimError(ErrorCode::config_error, "need at least 2 samples");
  }
  std::ostringstream out;
  out << "a_n,c_n,bid\n";
  for (double a : a_values) {
    for (int i = 0; i < samples; ++i) {
      const double c = 2.0 * i / (samples - 1);
      out << fmt(a, "%g") << ',' << fmt(c) << ','
          << bid_curve_point(budget, fine, a, c).str() << '\n';
    }
  }
  return out.str();
}

std::string preference_grid_csv(Money b_n, double c_max, double k1, double k2,
                                int grid) {
  if (!(k2 > k1 && k1 > 0.0)) {
    throw SimError(ErrorCode::config_error, "need k2 > k1 > 0");
  }
  if (c_max <= 0.0) {
    throw SimError(ErrorCode::config_error, "c_max must be > 0");
  }
  if (grid < 2) {
    throw SimError(ErrorCode::config_error, "grid must be >= 2");
  }
  StrategyParams params;
  params.k1 = k1;
  params.k2 = k2;
  std::ostringstream out;
  out << "op,c,preference\n";
  for (int i = 0; i < grid; ++i) {
    const Money op = Money::from_double(b_n.to_double() * i / (grid - 1));
    for (int j = 0; j < grid; ++j) {
      const double c = c_max * j / (grid - 1);
      out << op.str() << ',' << fmt(c) << ','
          << fmt(preference(op, c, b_n, c_max, params), "%.9f") << '\n';
    }
  }
  return out.str();
}

}  // namespace offsim
