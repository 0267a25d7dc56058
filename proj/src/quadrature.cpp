#include "casrough/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "casrough/error.hpp"

namespace casrough {
namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525478344, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;
};

void check_finite(double y, double x) {
  if (!std::isfinite(y)) {
    throw Error(ErrorCode::NonFiniteIntegrand,
                "integrand returned " + std::to_string(y) + " at x = " + std::to_string(x));
  }
}

Panel gauss_kronrod_21(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double fc = f(center);
  check_finite(fc, center);
  double kronrod = fc * kWgk[10];
  double gauss = 0.0;
  double l1 = std::abs(kronrod);
  std::array<double, 10> f1{};
  std::array<double, 10> f2{};

  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double lo = center - dx;
    const double hi = center + dx;
    f1[j] = f(lo);
    f2[j] = f(hi);
    check_finite(f1[j], lo);
    check_finite(f2[j], hi);
    kronrod += kWgk[j] * (f1[j] + f2[j]);
    l1 += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    // Odd Kronrod indices are the embedded Gauss nodes.
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
  }

  const double mean = 0.5 * kronrod;
  double asc = kWgk[10] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  const double abs_half = std::abs(half);
  const double result = kronrod * half;
  const double resabs = l1 * abs_half;
  const double resasc = asc * abs_half;
  double err = std::abs((kronrod - gauss) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, result, err, resabs};
}

struct ByError {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    // Ties broken by position so the pop order is fully determined.
    if (lhs.error != rhs.error) return lhs.error < rhs.error;
    return lhs.a > rhs.a;
  }
};

double target(const QuadratureSpec& spec, double value, double l1) {
  const double scale = spec.relative_to_l1 ? l1 : std::abs(value);
  return std::max(spec.abs_tol, spec.rel_tol * scale);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "rel_tol must be > 0");
  if (!(abs_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "abs_tol must be >= 0");
  if (max_subdivisions < 1) throw Error(ErrorCode::InvalidArgument, "max_subdivisions must be >= 1");
  if (!(semi_infinite_scale > 0.0) || !std::isfinite(semi_infinite_scale)) {
    throw Error(ErrorCode::InvalidArgument, "semi_infinite_scale must be > 0");
  }
}

QuadratureSpec QuadratureSpec::inner(double tighten) const {
  QuadratureSpec out = *this;
  out.rel_tol = rel_tol / tighten;
  out.abs_tol = abs_tol / tighten;
  out.relative_to_l1 = true;
  return out;
}

QuadratureResult& QuadratureResult::operator+=(const QuadratureResult& other) {
  value += other.value;
  error_estimate += other.error_estimate;
  evaluations += other.evaluations;
  converged = converged && other.converged;
  return *this;
}

QuadratureResult integrate_1d(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  return integrate_1d(f, a, b, {}, spec);
}

QuadratureResult integrate_1d(const Integrand& f, double a, double b,
                              std::span<const double> breakpoints, const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw Error(ErrorCode::InvalidArgument, "integrate_1d requires finite a < b");
  }

  std::vector<double> edges{a};
  for (double p : breakpoints) {
    if (p > edges.back() && p < b) edges.push_back(p);
  }
  edges.push_back(b);

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  std::size_t evaluations = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    queue.push(gauss_kronrod_21(f, edges[i], edges[i + 1]));
    evaluations += 21;
  }

  auto totals = [&queue]() {
    // Summed in a fixed order (sorted by position) so the result does not
    // depend on heap layout.
    std::vector<Panel> panels;
    auto copy = queue;
    panels.reserve(copy.size());
    while (!copy.empty()) {
      panels.push_back(copy.top());
      copy.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    std::array<double, 3> sum{0.0, 0.0, 0.0};
    for (const Panel& p : panels) {
      sum[0] += p.value;
      sum[1] += p.error;
      sum[2] += p.l1;
    }
    return sum;
  };

  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
  int subdivisions = static_cast<int>(edges.size()) - 1;
  {
    // Running sums steer the loop; the final answer is re-summed in order.
    auto s = totals();
    value = s[0];
    error = s[1];
    l1 = s[2];
  }
  while (error > target(spec, value, l1) && subdivisions < spec.max_subdivisions) {
    const Panel worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval at machine resolution
    queue.pop();
    const Panel left = gauss_kronrod_21(f, worst.a, mid);
    const Panel right = gauss_kronrod_21(f, mid, worst.b);
    evaluations += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    queue.push(left);
    queue.push(right);
    ++subdivisions;
  }

  const auto s = totals();
  QuadratureResult result;
  result.value = s[0];
  result.error_estimate = s[1];
  result.evaluations = evaluations;
  result.converged = s[1] <= target(spec, s[0], s[2]);
  return result;
}

QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec) {
  spec.validate();
  const double scale = spec.semi_infinite_scale;
  auto mapped = [&f, scale](double t) {
    const double one_minus = 1.0 - t;
    const double xi = scale * t / one_minus;
    const double y = f(xi);
    if (y == 0.0) return 0.0;  // avoids 0 * inf when xi overflows
    return y * scale / (one_minus * one_minus);
  };
  return integrate_1d(mapped, 0.0, 1.0, spec);
}

QuadratureResult integrate_polar_2d(const PolarIntegrand& g, double r_max, const QuadratureSpec& spec,
                                    const PolarOptions& options) {
  spec.validate();
  if (!(r_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "r_max must be > 0");

  const double angle_max = options.mirror_symmetric ? std::numbers::pi : 2.0 * std::numbers::pi;
  const double multiplicity = options.mirror_symmetric ? 2.0 : 1.0;
  const QuadratureSpec inner_spec = spec.inner();

  std::size_t inner_evaluations = 0;
  bool inner_converged = true;
  auto radial = [&](double r) {
    auto angular = [&g, r](double theta) { return g(r, theta); };
    std::vector<double> breaks;
    if (options.angular_breaks) breaks = options.angular_breaks(r);
    const QuadratureResult ring = integrate_1d(angular, 0.0, angle_max, breaks, inner_spec);
    inner_evaluations += ring.evaluations;
    inner_converged = inner_converged && ring.converged;
    return multiplicity * ring.value * r;
  };

  QuadratureResult result = integrate_1d(radial, 0.0, r_max, options.radial_breaks, spec);
  result.evaluations = inner_evaluations;
  result.converged = result.converged && inner_converged;
  return result;
}

}  // namespace casrough
