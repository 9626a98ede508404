#include <array>
#include <cmath>
#include <limits>

#include "oilsent/error.hpp"
#include "oilsent/metrics.hpp"

namespace oilsent {

std::string_view to_string(Correction c) { return c == Correction::None ? "none" : "continuity"; }
std::string_view to_string(Sidedness s) { return s == Sidedness::Two ? "two" : "one"; }

namespace {

// Lower series for P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 1000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1.
double gamma_q_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1 - a;
  double c = 1 / tiny;
  double d = 1 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0) || !(x >= 0)) throw PreconditionError("gamma_q needs a > 0 and x >= 0");
  if (x == 0) return 1;
  if (std::isinf(x)) return 0;
  return x < a + 1 ? 1 - gamma_p_series(a, x) : gamma_q_fraction(a, x);
}

double chi_square_tail(double x, double dof) {
  if (!(dof >= 1)) throw PreconditionError("degrees of freedom must be at least 1");
  if (!(x >= 0)) throw PreconditionError("chi-square statistic must be non-negative");
  if (dof == 1) return std::erfc(std::sqrt(x / 2));
  if (dof == 2) return std::exp(-x / 2);
  return gamma_q(dof / 2, x / 2);
}

ChiSquareResult chi_square_2x2(std::size_t correct_a, std::size_t total_a, std::size_t correct_b,
                               std::size_t total_b, Correction correction, Sidedness sidedness) {
  if (total_a == 0 || total_b == 0) throw PreconditionError("totals must be positive");
  if (correct_a > total_a || correct_b > total_b)
    throw PreconditionError("correct count exceeds total");

  const std::array<double, 4> obs{static_cast<double>(correct_a),
                                  static_cast<double>(total_a - correct_a),
                                  static_cast<double>(correct_b),
                                  static_cast<double>(total_b - correct_b)};
  const double row[2] = {obs[0] + obs[1], obs[2] + obs[3]};
  const double col[2] = {obs[0] + obs[2], obs[1] + obs[3]};
  if (col[0] == 0 || col[1] == 0)
    throw ValidationError("degenerate 2x2 table: a column marginal is zero");
  const double n = row[0] + row[1];

  double stat = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double e = row[k / 2] * col[k % 2] / n;
    double o = obs[k];
    if (correction == Correction::Continuity) {
      const double diff = e - o;
      o += std::copysign(std::min(0.5, std::abs(diff)), diff);
    }
    stat += (o - e) * (o - e) / e;
  }

  ChiSquareResult r;
  r.statistic = stat;
  r.dof = 1;
  r.correction = correction;
  r.sidedness = sidedness;
  const double p = chi_square_tail(stat, 1);
  if (sidedness == Sidedness::Two) {
    r.p_value = p;
  } else {
    const bool a_ahead = obs[0] * row[1] > obs[2] * row[0];
    r.p_value = a_ahead ? p / 2 : 1 - p / 2;
  }
  return r;
}

}  // namespace oilsent
