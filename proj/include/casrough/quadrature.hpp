#pragma once

// Adaptive Gauss-Kronrod quadrature shared by every physics module.
//
// All routines are deterministic: the subdivision order depends only on the
// integrand values, never on timing or thread scheduling.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace casrough {

struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;
  // Scale s of the map xi = s * t / (1 - t) used for [0, inf) integrals.
  double semi_infinite_scale = 1.0;
  // When set, the relative target is rel_tol * integral of |f| instead of
  // rel_tol * |integral of f|. Used for nested inner integrals, whose value can
  // cross zero as the outer variables move.
  bool relative_to_l1 = false;

  // Throws Error(InvalidArgument) when a field is out of range.
  void validate() const;

  // Tolerance for an integral nested inside this one: rel_tol / tighten,
  // measured against the L1 norm.
  QuadratureSpec inner(double tighten = 10.0) const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;

  QuadratureResult& operator+=(const QuadratureResult& other);
};

using Integrand = std::function<double(double)>;
using PolarIntegrand = std::function<double(double radius, double angle)>;

// Global adaptive G10/K21 on [a, b]. Throws Error(NonFiniteIntegrand) if f
// returns NaN or inf; returns converged=false if the subdivision budget runs out.
QuadratureResult integrate_1d(const Integrand& f, double a, double b, const QuadratureSpec& spec);

// Same, with the initial panels split at the given sorted points. Points
// outside (a, b) are ignored.
QuadratureResult integrate_1d(const Integrand& f, double a, double b,
                              std::span<const double> breakpoints, const QuadratureSpec& spec);

// Integral of f over [0, inf) through xi = s * t / (1 - t), s = spec.semi_infinite_scale.
QuadratureResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec);

struct PolarOptions {
  // Initial radial panel boundaries (e.g. kinks of the integrand).
  std::vector<double> radial_breaks;
  // Initial angular panel boundaries as a function of the radius, in [0, 2pi)
  // (or [0, pi) when mirror_symmetric).
  std::function<std::vector<double>(double radius)> angular_breaks;
  // g(r, theta) == g(r, -theta): integrate [0, pi] and double it.
  bool mirror_symmetric = false;
};

// Integral of g(r, theta) r dr dtheta over the disk of radius r_max.
// Radial outer loop, angular inner loop at a tightened tolerance.
QuadratureResult integrate_polar_2d(const PolarIntegrand& g, double r_max, const QuadratureSpec& spec,
                                    const PolarOptions& options = {});

}  // namespace casrough
