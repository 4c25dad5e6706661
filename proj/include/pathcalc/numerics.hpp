#pragma once

// Fixed-step quadrature, RK4 integration and deterministic ball sampling.

#include "pathcalc/error.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pathcalc::numerics {

/// Uniform grid t_k = start + k * step, k = 0..intervals.
struct UniformGrid {
    double start = 0.0;
    double step = 0.0;
    std::size_t intervals = 0;

    [[nodiscard]] double at(std::size_t k) const { return start + static_cast<double>(k) * step; }
    [[nodiscard]] std::size_t size() const { return intervals + 1; }
    [[nodiscard]] double end() const { return at(intervals); }
};

/// Grid over [t0, t1] with round((t1 - t0) / requested_step) intervals (at
/// least one), so the last node lands exactly on t1.
UniformGrid make_grid(double t0, double t1, double requested_step);

/// Raised when an integration leaves the finite range.
class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, double last_good_t)
        : Error(what), last_good_t_(last_good_t) {}

    [[nodiscard]] double last_good_t() const noexcept { return last_good_t_; }

private:
    double last_good_t_;
};

/// dx/dt = rhs(t, x); writes the derivative into the last argument.
using OdeRhs = std::function<void(double, std::span<const double>, std::span<double>)>;

/// Classical fourth-order Runge-Kutta over `grid`. Returns one state per node.
/// Throws IntegrationFailure if any component exceeds `blowup` in magnitude or
/// becomes non-finite.
std::vector<std::vector<double>> integrate_rk4(const OdeRhs& rhs, std::span<const double> x0,
                                               const UniformGrid& grid, double blowup = 1e12);

/// Running integral I_k = integral from node 0 to node k of the sampled values.
/// Composite Simpson for even k, Simpson 3/8 on the last three panels for odd k.
std::vector<double> cumulative_simpson(std::span<const double> values, double step);

/// Composite trapezoid rule over uniformly spaced values.
double trapezoid(std::span<const double> values, double step);

/// Fourth-order finite-difference derivative of uniformly spaced samples.
std::vector<double> grid_derivative(std::span<const double> values, double step);

/// `count` points strictly inside the ball of `radius` around `center`, in
/// antipodal pairs taken from a Halton sequence. `count` is rounded up to even.
std::vector<std::vector<double>> ball_samples(std::span<const double> center, double radius,
                                              std::size_t count);

}  // namespace pathcalc::numerics
