#include "pathcalc/genfun.hpp"

#include "pathcalc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pathcalc {
namespace {

constexpr double kGridDivisions = 64.0;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Grid over `box` with pitch (smallest extent)/64; flat axes get one node.
std::vector<std::vector<double>> box_grid(const Box& box) {
    const std::size_t d = box.lower.size();
    double min_extent = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < d; ++i) {
        const double extent = box.upper[i] - box.lower[i];
        if (extent > 0.0) min_extent = std::min(min_extent, extent);
    }
    std::vector<std::size_t> counts(d, 1);
    std::vector<double> pitch(d, 0.0);
    if (std::isfinite(min_extent)) {
        const double h = min_extent / kGridDivisions;
        for (std::size_t i = 0; i < d; ++i) {
            const double extent = box.upper[i] - box.lower[i];
            if (extent <= 0.0) continue;
            const auto panels = static_cast<std::size_t>(std::ceil(extent / h - 1e-9));
            counts[i] = panels + 1;
            pitch[i] = extent / static_cast<double>(panels);
        }
    }
    std::vector<std::vector<double>> out;
    std::vector<std::size_t> index(d, 0);
    for (;;) {
        std::vector<double> p(d);
        for (std::size_t i = 0; i < d; ++i) {
            // The last node is pinned to the upper face so no rounding pushes it outside.
            p[i] = index[i] + 1 == counts[i] && counts[i] > 1
                       ? box.upper[i]
                       : box.lower[i] + pitch[i] * static_cast<double>(index[i]);
        }
        out.push_back(std::move(p));
        std::size_t axis = 0;
        while (axis < d && ++index[axis] == counts[axis]) index[axis++] = 0;
        if (axis == d) break;
    }
    return out;
}

Box intersect(const Box& a, const Box& b) {
    Box out{a.lower, a.upper};
    for (std::size_t i = 0; i < a.lower.size(); ++i) {
        out.lower[i] = std::max(a.lower[i], b.lower[i]);
        out.upper[i] = std::min(a.upper[i], b.upper[i]);
    }
    return out;
}

bool is_empty(const Box& b) {
    for (std::size_t i = 0; i < b.lower.size(); ++i) {
        if (b.lower[i] > b.upper[i]) return true;
    }
    return false;
}

}  // namespace

Region::Region(Box box) : dimension_(box.lower.size()) {
    if (dimension_ == 0 || box.upper.size() != dimension_) {
        throw InvalidArgument("box corners must be nonempty and of equal dimension");
    }
    for (std::size_t i = 0; i < dimension_; ++i) {
        if (!(box.lower[i] <= box.upper[i])) throw InvalidArgument("box lower corner must not exceed upper");
    }
    shape_ = std::move(box);
}

Region::Region(Ball ball) : dimension_(ball.center.size()) {
    if (dimension_ == 0) throw InvalidArgument("ball center must be nonempty");
    if (!(ball.radius > 0.0)) throw InvalidArgument("ball radius must be strictly positive");
    shape_ = std::move(ball);
}

Region::Region(PointSet points) {
    if (points.points.empty()) throw InvalidArgument("point set must be nonempty");
    dimension_ = points.points.front().size();
    if (dimension_ == 0) throw InvalidArgument("points must have at least one coordinate");
    for (const auto& p : points.points) {
        if (p.size() != dimension_) throw InvalidArgument("points must share one dimension");
    }
    shape_ = std::move(points);
}

bool Region::contains(std::span<const double> point) const {
    if (point.size() != dimension_) throw DimensionMismatch("point dimension differs from region");
    return std::visit(Overloaded{
                          [&](const Box& b) {
                              for (std::size_t i = 0; i < dimension_; ++i) {
                                  if (point[i] < b.lower[i] || point[i] > b.upper[i]) return false;
                              }
                              return true;
                          },
                          [&](const Ball& b) {
                              double d2 = 0.0;
                              for (std::size_t i = 0; i < dimension_; ++i) {
                                  const double d = point[i] - b.center[i];
                                  d2 += d * d;
                              }
                              return d2 <= b.radius * b.radius;
                          },
                          [&](const PointSet& s) {
                              return std::any_of(s.points.begin(), s.points.end(), [&](const auto& p) {
                                  return std::equal(p.begin(), p.end(), point.begin());
                              });
                          },
                      },
                      shape_);
}

Box Region::bounds() const {
    return std::visit(Overloaded{
                          [](const Box& b) { return b; },
                          [](const Ball& b) {
                              Box out{b.center, b.center};
                              for (std::size_t i = 0; i < b.center.size(); ++i) {
                                  out.lower[i] -= b.radius;
                                  out.upper[i] += b.radius;
                              }
                              return out;
                          },
                          [](const PointSet& s) {
                              Box out{s.points.front(), s.points.front()};
                              for (const auto& p : s.points) {
                                  for (std::size_t i = 0; i < p.size(); ++i) {
                                      out.lower[i] = std::min(out.lower[i], p[i]);
                                      out.upper[i] = std::max(out.upper[i], p[i]);
                                  }
                              }
                              return out;
                          },
                      },
                      shape_);
}

std::vector<std::vector<double>> Region::samples() const {
    if (const auto* s = std::get_if<PointSet>(&shape_)) return s->points;
    auto grid = box_grid(bounds());
    if (std::holds_alternative<Box>(shape_)) return grid;
    std::erase_if(grid, [&](const auto& p) { return !contains(p); });
    return grid;
}

std::optional<Region> overlap(const Region& a, const Region& b) {
    if (a.dimension() != b.dimension()) throw DimensionMismatch("regions live in different dimensions");
    const Box common = intersect(a.bounds(), b.bounds());
    if (is_empty(common)) return std::nullopt;

    const auto* box_a = std::get_if<Box>(&a.shape());
    const auto* box_b = std::get_if<Box>(&b.shape());
    if (box_a && box_b) return Region(common);

    std::vector<std::vector<double>> candidates;
    if (const auto* s = std::get_if<PointSet>(&a.shape())) {
        candidates = s->points;
    } else if (const auto* s2 = std::get_if<PointSet>(&b.shape())) {
        candidates = s2->points;
    } else {
        candidates = box_grid(common);
    }
    std::erase_if(candidates, [&](const auto& p) { return !a.contains(p) || !b.contains(p); });
    if (candidates.empty()) return std::nullopt;
    return Region(PointSet{std::move(candidates)});
}

// ---------------------------------------------------------------------------

std::vector<std::string> region_coordinates(std::size_t dimension) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < dimension; ++i) out.push_back(coordinate_name(i));
    return out;
}

namespace {

Assignment region_assignment(std::span<const double> point) {
    Assignment a;
    for (std::size_t i = 0; i < point.size(); ++i) a.emplace(coordinate_name(i), point[i]);
    return a;
}

}  // namespace

FunctionalElement::FunctionalElement(Region region, Expression function)
    : region_(std::move(region)), function_(std::move(function)) {
    const auto coords = region_coordinates(region_.dimension());
    for (const auto& v : free_variables(function_)) {
        if (std::find(coords.begin(), coords.end(), v) == coords.end()) {
            throw DimensionMismatch("element function uses '" + v + "' outside the region's coordinates");
        }
    }
}

double FunctionalElement::operator()(std::span<const double> point) const {
    if (!region_.contains(point)) throw DomainError("point lies outside the element's region");
    return evaluate(function_, region_assignment(point));
}

GeneralFunction::GeneralFunction(std::vector<FunctionalElement> elements, GeneralFunctionInfo info)
    : elements_(std::move(elements)), info_(std::move(info)) {
    if (elements_.empty()) throw InvalidArgument("a general function needs at least one element");
    dimension_ = elements_.front().dimension();
    for (const auto& e : elements_) {
        if (e.dimension() != dimension_) throw DimensionMismatch("elements must share one ambient dimension");
    }
}

FunctionalElement restrict(const ScalarField& field, const Region& region) {
    if (region.dimension() != field.dimension()) {
        throw DimensionMismatch("region dimension " + std::to_string(region.dimension()) +
                                " differs from field dimension " + std::to_string(field.dimension()));
    }
    // The field's t becomes the last region coordinate.
    const Substitution rename{{std::string(kTimeVariable),
                               Expression::variable(coordinate_name(field.dimension() - 1))}};
    return FunctionalElement(region, substitute(field.body(), rename));
}

FunctionalElement restrict(const Expression& function, const Region& region) {
    return FunctionalElement(region, function);
}

ProlongationResult direct_prolongation(const FunctionalElement& a, const FunctionalElement& b, double tol) {
    ProlongationResult result;
    const auto common = overlap(a.region(), b.region());
    if (!common) return result;
    result.overlapping = true;
    for (const auto& p : common->samples()) {
        const Assignment at = region_assignment(p);
        double deviation = 0.0;
        try {
            deviation = std::abs(evaluate(a.function(), at) - evaluate(b.function(), at));
        } catch (const DomainError&) {
            deviation = std::numeric_limits<double>::infinity();
        }
        result.max_deviation = std::max(result.max_deviation, deviation);
        ++result.samples;
    }
    result.prolongs = result.samples > 0 && result.max_deviation <= tol;
    return result;
}

NondifferentiableError::NondifferentiableError(std::size_t element, const std::string& detail)
    : Error("general function is not differentiable: element " + std::to_string(element) + " " + detail),
      element_(element) {}

GeneralFunction derivative_general_function(const GeneralFunction& function, std::string_view variable) {
    std::vector<FunctionalElement> derived;
    derived.reserve(function.elements().size());
    for (std::size_t k = 0; k < function.elements().size(); ++k) {
        const auto& e = function.elements()[k];
        const Expression d = differentiate(e.function(), variable);
        for (const auto& p : e.region().samples()) {
            try {
                (void)evaluate(e.function(), region_assignment(p));
                (void)evaluate(d, region_assignment(p));
            } catch (const DomainError& err) {
                throw NondifferentiableError(k, std::string("fails at a region sample: ") + err.what());
            }
        }
        derived.emplace_back(e.region(), d);
    }
    return GeneralFunction(std::move(derived), function.info());
}

CoherenceReport coherence_check(const GeneralFunction& function, double tol) {
    CoherenceReport report;
    const auto& els = function.elements();
    for (std::size_t i = 0; i < els.size(); ++i) {
        for (std::size_t j = i + 1; j < els.size(); ++j) {
            const auto r = direct_prolongation(els[i], els[j], tol);
            if (!r.overlapping) continue;
            ++report.pairs_checked;
            report.worst_deviation = std::max(report.worst_deviation, r.max_deviation);
            if (!r.prolongs) report.incoherent.push_back({i, j, r.max_deviation});
        }
    }
    return report;
}

}  // namespace pathcalc
