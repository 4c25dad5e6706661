#pragma once

// General functions: finite families of functional elements <f_A, A>, each a
// function paired with the region it is assigned to. Agreement on overlaps
// is checked by deterministic sampling.

#include "pathcalc/calculus.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pathcalc {

struct Box {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct Ball {
    std::vector<double> center;
    double radius = 1.0;
};

struct PointSet {
    std::vector<std::vector<double>> points;
};

class Region {
public:
    Region(Box box);
    Region(Ball ball);
    Region(PointSet points);

    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] const std::variant<Box, Ball, PointSet>& shape() const noexcept { return shape_; }
    [[nodiscard]] bool contains(std::span<const double> point) const;

    /// Axis-aligned bounding box.
    [[nodiscard]] Box bounds() const;

    /// Deterministic sample: a grid of pitch (smallest extent)/64 clipped to the
    /// region, or the points themselves for a PointSet.
    [[nodiscard]] std::vector<std::vector<double>> samples() const;

private:
    std::variant<Box, Ball, PointSet> shape_;
    std::size_t dimension_ = 0;
};

/// Exact for two boxes; otherwise the sampled point set lying in both. An
/// empty intersection is std::nullopt. Throws DimensionMismatch.
std::optional<Region> overlap(const Region& a, const Region& b);

/// <f_A, A>. The function is over x1..xd where d is the region's dimension.
class FunctionalElement {
public:
    FunctionalElement(Region region, Expression function);

    [[nodiscard]] const Region& region() const noexcept { return region_; }
    [[nodiscard]] const Expression& function() const noexcept { return function_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return region_.dimension(); }

    /// Throws DomainError for points outside the region.
    [[nodiscard]] double operator()(std::span<const double> point) const;

private:
    Region region_;
    Expression function_;
};

/// Descriptive data carried alongside the elements; it has no behaviour.
struct GeneralFunctionInfo {
    std::string functor = "T";
    std::string source_category = "C1";
    std::string target_category = "C2";
    std::string topology = "P(D)";
};

class GeneralFunction {
public:
    explicit GeneralFunction(std::vector<FunctionalElement> elements, GeneralFunctionInfo info = {});

    [[nodiscard]] const std::vector<FunctionalElement>& elements() const noexcept { return elements_; }
    [[nodiscard]] const GeneralFunctionInfo& info() const noexcept { return info_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

private:
    std::vector<FunctionalElement> elements_;
    GeneralFunctionInfo info_;
    std::size_t dimension_ = 0;
};

/// Region coordinates (x1, ..., xd).
std::vector<std::string> region_coordinates(std::size_t dimension);

/// <E, A>, with region coordinate k standing for x{k+1} and the last one for t.
FunctionalElement restrict(const ScalarField& field, const Region& region);

/// <e, A> for an expression over x1..xd.
FunctionalElement restrict(const Expression& function, const Region& region);

struct ProlongationResult {
    bool prolongs = false;       ///< overlap nonempty and deviation within tolerance
    bool overlapping = false;
    double max_deviation = 0.0;  ///< infinite if either side is undefined at a sample
    std::size_t samples = 0;
};

ProlongationResult direct_prolongation(const FunctionalElement& a, const FunctionalElement& b, double tol);

class NondifferentiableError : public Error {
public:
    NondifferentiableError(std::size_t element, const std::string& detail);
    [[nodiscard]] std::size_t element() const noexcept { return element_; }

private:
    std::size_t element_;
};

/// Elementwise derivative. Throws NondifferentiableError if any element's
/// derivative is undefined at one of its region samples.
GeneralFunction derivative_general_function(const GeneralFunction& function, std::string_view variable);

struct IncoherentPair {
    std::size_t first = 0;
    std::size_t second = 0;
    double deviation = 0.0;
};

struct CoherenceReport {
    std::size_t pairs_checked = 0;  ///< pairs with a nonempty overlap
    std::vector<IncoherentPair> incoherent;
    double worst_deviation = 0.0;

    [[nodiscard]] bool coherent() const noexcept { return incoherent.empty(); }
};

CoherenceReport coherence_check(const GeneralFunction& function, double tol);

}  // namespace pathcalc
