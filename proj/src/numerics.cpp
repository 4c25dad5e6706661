#include "pathcalc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pathcalc::numerics {

UniformGrid make_grid(double t0, double t1, double requested_step) {
    if (!(requested_step > 0.0)) throw InvalidArgument("step must be strictly positive");
    if (!(t1 > t0)) throw InvalidArgument("time span must satisfy t1 > t0");
    const double n = std::round((t1 - t0) / requested_step);
    const auto intervals = static_cast<std::size_t>(std::max(1.0, n));
    return UniformGrid{t0, (t1 - t0) / static_cast<double>(intervals), intervals};
}

std::vector<std::vector<double>> integrate_rk4(const OdeRhs& rhs, std::span<const double> x0,
                                               const UniformGrid& grid, double blowup) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> states;
    states.reserve(grid.size());
    states.emplace_back(x0.begin(), x0.end());

    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    const double h = grid.step;
    for (std::size_t k = 0; k < grid.intervals; ++k) {
        const double t = grid.at(k);
        const std::vector<double>& x = states.back();
        try {
            rhs(t, x, k1);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
            rhs(t + 0.5 * h, tmp, k2);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
            rhs(t + 0.5 * h, tmp, k3);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = x[i] + h * k3[i];
            rhs(t + h, tmp, k4);
        } catch (const DomainError& e) {
            throw IntegrationFailure("right-hand side undefined after t = " + std::to_string(t) + ": " + e.what(), t);
        }

        std::vector<double> next(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            next[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            if (!std::isfinite(next[i]) || std::abs(next[i]) > blowup) {
                throw IntegrationFailure("integration blew up after t = " + std::to_string(t), t);
            }
        }
        states.push_back(std::move(next));
    }
    return states;
}

std::vector<double> cumulative_simpson(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return out;
    if (n == 2) {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for (std::size_t k = 2; k < n; k += 2) {
        out[k] = out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    }
    // First panel from the cubic through the first four nodes (or the
    // quadratic through three when that is all there is).
    if (n >= 4) {
        out[1] = h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3]);
    } else {
        out[1] = h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2]);
    }
    for (std::size_t k = 3; k < n; k += 2) {
        out[k] = out[k - 3] + 3.0 * h / 8.0 * (f[k - 3] + 3.0 * f[k - 2] + 3.0 * f[k - 1] + f[k]);
    }
    return out;
}

double trapezoid(std::span<const double> f, double h) {
    if (f.size() < 2) return 0.0;
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t k = 1; k + 1 < f.size(); ++k) sum += f[k];
    return sum * h;
}

std::vector<double> grid_derivative(std::span<const double> f, double h) {
    const std::size_t n = f.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    if (n < 5) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k == 0) {
                d[k] = (f[1] - f[0]) / h;
            } else if (k + 1 == n) {
                d[k] = (f[k] - f[k - 1]) / h;
            } else {
                d[k] = (f[k + 1] - f[k - 1]) / (2.0 * h);
            }
        }
        return d;
    }
    const double s = 12.0 * h;
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / s;
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / s;
    for (std::size_t k = 2; k + 2 < n; ++k) {
        d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / s;
    }
    const std::size_t m = n - 1;
    d[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / s;
    d[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / s;
    return d;
}

namespace {

double radical_inverse(std::size_t index, unsigned base) {
    double result = 0.0;
    double scale = 1.0 / base;
    while (index > 0) {
        result += static_cast<double>(index % base) * scale;
        index /= base;
        scale /= base;
    }
    return result;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

}  // namespace

std::vector<std::vector<double>> ball_samples(std::span<const double> center, double radius,
                                              std::size_t count) {
    const std::size_t dim = center.size();
    if (dim == 0 || dim > std::size(kPrimes)) {
        throw InvalidArgument("ball sampling supports dimensions 1.." + std::to_string(std::size(kPrimes)));
    }
    const std::size_t pairs = (count + 1) / 2;
    std::vector<std::vector<double>> out;
    out.reserve(2 * pairs);
    std::vector<double> v(dim);
    for (std::size_t index = 1; out.size() < 2 * pairs; ++index) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            v[i] = 2.0 * radical_inverse(index, kPrimes[i]) - 1.0;
            norm2 += v[i] * v[i];
        }
        // Rejection keeps the points uniformly spread through the open unit ball.
        if (norm2 >= 1.0 || norm2 < 1e-6) continue;
        std::vector<double> plus(dim), minus(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            plus[i] = center[i] + radius * v[i];
            minus[i] = center[i] - radius * v[i];
        }
        out.push_back(std::move(plus));
        out.push_back(std::move(minus));
    }
    return out;
}

}  // namespace pathcalc::numerics
