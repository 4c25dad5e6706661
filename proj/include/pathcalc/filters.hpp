#pragma once

// Filters on finite sets, the "stronger than" order and filter limits, plus a
// numeric shrinking-ball realization of the limit r -> p(t).

#include "pathcalc/calculus.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pathcalc {

/// A subset of a FiniteSpace as a bit mask over its label indices.
struct Subset {
    std::uint64_t bits = 0;

    [[nodiscard]] bool empty() const noexcept { return bits == 0; }
    [[nodiscard]] bool subset_of(Subset other) const noexcept { return (bits & ~other.bits) == 0; }
    [[nodiscard]] std::size_t size() const noexcept;
    friend Subset operator&(Subset a, Subset b) noexcept { return {a.bits & b.bits}; }
    friend Subset operator|(Subset a, Subset b) noexcept { return {a.bits | b.bits}; }
    friend bool operator==(Subset a, Subset b) noexcept = default;
    friend auto operator<=>(Subset a, Subset b) noexcept = default;
};

/// Finite set of distinct labels; at most 64, and at most 16 for operations
/// that enumerate the power set.
class FiniteSpace {
public:
    static constexpr std::size_t kMaxLabels = 64;
    static constexpr std::size_t kMaxEnumerable = 16;

    explicit FiniteSpace(std::vector<std::string> labels);

    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }
    [[nodiscard]] Subset full() const noexcept;
    [[nodiscard]] bool enumerable() const noexcept { return size() <= kMaxEnumerable; }

    /// Throws InvalidArgument for unknown labels.
    [[nodiscard]] Subset subset(const std::vector<std::string>& labels) const;
    [[nodiscard]] std::size_t index_of(const std::string& label) const;
    [[nodiscard]] std::vector<std::string> labels_of(Subset s) const;
    [[nodiscard]] bool contains(Subset s) const noexcept { return s.subset_of(full()); }

    friend bool operator==(const FiniteSpace&, const FiniteSpace&) = default;

private:
    std::vector<std::string> labels_;
};

/// Disjoint nonempty blocks covering the space.
class Partition {
public:
    Partition(FiniteSpace space, std::vector<Subset> blocks);

    [[nodiscard]] const FiniteSpace& space() const noexcept { return space_; }
    [[nodiscard]] const std::vector<Subset>& blocks() const noexcept { return blocks_; }

private:
    FiniteSpace space_;
    std::vector<Subset> blocks_;
};

/// A family of subsets of a carrier. Principal filters also remember their
/// generator; on carriers too large to enumerate only the generator is kept.
class Filter {
public:
    Filter(FiniteSpace carrier, std::vector<Subset> members);

    [[nodiscard]] const FiniteSpace& carrier() const noexcept { return carrier_; }
    [[nodiscard]] const std::optional<Subset>& generator() const noexcept { return generator_; }
    [[nodiscard]] bool has_explicit_members() const noexcept { return explicit_; }
    /// Sorted members; throws InvalidArgument for an implicit filter.
    [[nodiscard]] const std::vector<Subset>& members() const;
    [[nodiscard]] bool contains(Subset s) const;

private:
    friend Filter principal_filter(const FiniteSpace&, Subset);
    Filter() = default;

    FiniteSpace carrier_{std::vector<std::string>{"_"}};
    std::vector<Subset> members_;
    std::optional<Subset> generator_;
    bool explicit_ = true;
};

/// All supersets of `generator` (which must be a nonempty subset of the space).
Filter principal_filter(const FiniteSpace& space, Subset generator);

enum class FilterAxiom {
    ExcludesEmpty,          ///< (a) the empty set is not a member
    ClosedUnderIntersection,  ///< (b) A, B members implies A n B a member
    UpwardClosed,           ///< (c) A member and A c B c D implies B a member
};

const char* axiom_label(FilterAxiom axiom);

struct AxiomViolation {
    FilterAxiom axiom;
    std::vector<Subset> witness;  ///< the offending set(s); for (b) and (c) the missing set is last
};

struct FilterCheck {
    std::vector<AxiomViolation> violations;  ///< first entry is the first violated axiom

    [[nodiscard]] bool is_filter() const noexcept { return violations.empty(); }
};

/// Checks the three filter axioms exhaustively. Requires an enumerable space.
FilterCheck is_filter(const std::vector<Subset>& family, const FiniteSpace& space);

/// H is stronger than B iff every member of B contains some member of H.
/// Throws DimensionMismatch for different carriers.
bool stronger_than(const Filter& h, const Filter& b);

/// G is the limit of H iff H is stronger than the principal filter of G.
bool filter_limit(const Filter& h, const FiniteSpace& space, Subset g);

/// Per-block maps f_i : G_i -> K given label to label.
class ElementMap {
public:
    ElementMap(Partition partition, FiniteSpace codomain,
               std::vector<std::map<std::string, std::string>> block_maps);

    [[nodiscard]] const Partition& partition() const noexcept { return partition_; }
    [[nodiscard]] const FiniteSpace& codomain() const noexcept { return codomain_; }
    [[nodiscard]] std::size_t blocks() const noexcept { return maps_.size(); }

    /// f_i(G_i) as a subset of the codomain.
    [[nodiscard]] Subset image(std::size_t block) const;

private:
    Partition partition_;
    FiniteSpace codomain_;
    std::vector<std::map<std::string, std::string>> maps_;
};

/// {A c K | f_i(G_i) c A}. `block_filter` must be the principal filter of G_i.
Filter image_filter(const ElementMap& map, std::size_t block, const Filter& block_filter);

/// A is the limit of the general function under P_i iff the image filter is
/// stronger than the principal filter of A in K.
bool general_function_limit(const ElementMap& map, std::size_t block, Subset a);

struct BallStep {
    double radius = 0.0;
    double max_deviation = 0.0;  ///< max |B(r) - B(p(t))| over the ball samples
    double mean = 0.0;           ///< mean of B over the (antipodally paired) samples
};

struct BallLimit {
    double limit = 0.0;          ///< Richardson extrapolation of the sample means
    double center_value = 0.0;   ///< B at p(t) itself
    std::vector<BallStep> trace;
};

/// Raised when the ball deviations fail to shrink toward p(t).
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Samples B = (V . grad) E + dE/dt at 64 points in each ball of radius
/// cfg.ball_radius0 * cfg.shrink^k, k = 0..12, centred at p(t). Throws
/// NonConvergenceError unless each deviation is at most 1.1 times the previous
/// one (plus a rounding floor) and the last is at most half the first.
BallLimit ball_filter_limit(const ScalarField& field, const Curve& curve, double t,
                            const ToleranceConfig& cfg = {});

}  // namespace pathcalc
