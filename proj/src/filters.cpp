#include "pathcalc/filters.hpp"

#include "pathcalc/error.hpp"
#include "pathcalc/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>

namespace pathcalc {

std::size_t Subset::size() const noexcept { return static_cast<std::size_t>(std::popcount(bits)); }

FiniteSpace::FiniteSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw InvalidArgument("finite space must be nonempty");
    if (labels_.size() > kMaxLabels) throw InvalidArgument("finite space supports at most 64 labels");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw InvalidArgument("finite space labels must be distinct");
}

Subset FiniteSpace::full() const noexcept {
    return {size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1};
}

std::size_t FiniteSpace::index_of(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw InvalidArgument("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

Subset FiniteSpace::subset(const std::vector<std::string>& labels) const {
    Subset s;
    for (const auto& l : labels) s.bits |= std::uint64_t{1} << index_of(l);
    return s;
}

std::vector<std::string> FiniteSpace::labels_of(Subset s) const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size(); ++i) {
        if (s.bits >> i & 1U) out.push_back(labels_[i]);
    }
    return out;
}

Partition::Partition(FiniteSpace space, std::vector<Subset> blocks)
    : space_(std::move(space)), blocks_(std::move(blocks)) {
    Subset covered;
    for (const auto& b : blocks_) {
        if (b.empty()) throw InvalidArgument("partition blocks must be nonempty");
        if (!space_.contains(b)) throw InvalidArgument("partition block leaves the space");
        if (!(b & covered).empty()) throw InvalidArgument("partition blocks must be disjoint");
        covered = covered | b;
    }
    if (covered != space_.full()) throw InvalidArgument("partition blocks must cover the space");
}

// ---------------------------------------------------------------------------

const char* axiom_label(FilterAxiom axiom) {
    switch (axiom) {
        case FilterAxiom::ExcludesEmpty: return "(a) empty set excluded";
        case FilterAxiom::ClosedUnderIntersection: return "(b) closed under intersection";
        case FilterAxiom::UpwardClosed: return "(c) upward closed";
    }
    return "?";
}

FilterCheck is_filter(const std::vector<Subset>& family, const FiniteSpace& space) {
    if (!space.enumerable()) throw InvalidArgument("exhaustive filter check needs at most 16 labels");
    for (const auto& a : family) {
        if (!space.contains(a)) throw InvalidArgument("family member is not a subset of the space");
    }
    const std::set<Subset> members(family.begin(), family.end());
    FilterCheck check;

    if (members.count(Subset{})) check.violations.push_back({FilterAxiom::ExcludesEmpty, {Subset{}}});

    for (auto a = members.begin(); a != members.end(); ++a) {
        bool found = false;
        for (auto b = a; b != members.end() && !found; ++b) {
            if (!members.count(*a & *b)) {
                check.violations.push_back({FilterAxiom::ClosedUnderIntersection, {*a, *b, *a & *b}});
                found = true;
            }
        }
        if (found) break;
    }

    const std::uint64_t full = space.full().bits;
    bool upward_ok = true;
    for (const auto& a : members) {
        // Every superset of a: iterate the subsets of the complement.
        const std::uint64_t rest = full & ~a.bits;
        for (std::uint64_t extra = rest;; extra = (extra - 1) & rest) {
            const Subset b{a.bits | extra};
            if (!members.count(b)) {
                check.violations.push_back({FilterAxiom::UpwardClosed, {a, b}});
                upward_ok = false;
                break;
            }
            if (extra == 0) break;
        }
        if (!upward_ok) break;
    }
    return check;
}

Filter::Filter(FiniteSpace carrier, std::vector<Subset> members) : carrier_(std::move(carrier)) {
    const auto check = is_filter(members, carrier_);
    if (!check.is_filter()) {
        throw InvalidArgument(std::string("family violates filter axiom ") +
                              axiom_label(check.violations.front().axiom));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    members_ = std::move(members);
    if (!members_.empty()) {
        Subset g = carrier_.full();
        for (const auto& m : members_) g = g & m;
        generator_ = g;
    }
}

const std::vector<Subset>& Filter::members() const {
    if (!explicit_) throw InvalidArgument("filter on a large carrier has no explicit member list");
    return members_;
}

bool Filter::contains(Subset s) const {
    if (!explicit_) return generator_->subset_of(s) && carrier_.contains(s);
    return std::binary_search(members_.begin(), members_.end(), s);
}

Filter principal_filter(const FiniteSpace& space, Subset generator) {
    if (generator.empty()) throw InvalidArgument("principal filter generator must be nonempty");
    if (!space.contains(generator)) throw InvalidArgument("generator is not a subset of the space");
    Filter f;
    f.carrier_ = space;
    f.generator_ = generator;
    f.explicit_ = space.enumerable();
    if (f.explicit_) {
        const std::uint64_t rest = space.full().bits & ~generator.bits;
        for (std::uint64_t extra = rest;; extra = (extra - 1) & rest) {
            f.members_.push_back(Subset{generator.bits | extra});
            if (extra == 0) break;
        }
        std::sort(f.members_.begin(), f.members_.end());
    }
    return f;
}

bool stronger_than(const Filter& h, const Filter& b) {
    if (!(h.carrier() == b.carrier())) throw DimensionMismatch("filters live on different carriers");
    if (h.has_explicit_members() && b.has_explicit_members()) {
        for (const auto& a : b.members()) {
            const auto& hm = h.members();
            if (std::none_of(hm.begin(), hm.end(), [&](Subset s) { return s.subset_of(a); })) return false;
        }
        return true;
    }
    // On a large carrier both filters are principal. Every member of B
    // contains G_B, which is itself a member, so it suffices that H has a
    // member inside G_B; H's smallest member is G_H.
    if (!b.generator()) return true;
    if (!h.generator()) return false;
    return h.generator()->subset_of(*b.generator());
}

bool filter_limit(const Filter& h, const FiniteSpace& space, Subset g) {
    return stronger_than(h, principal_filter(space, g));
}

// ---------------------------------------------------------------------------

ElementMap::ElementMap(Partition partition, FiniteSpace codomain,
                       std::vector<std::map<std::string, std::string>> block_maps)
    : partition_(std::move(partition)), codomain_(std::move(codomain)), maps_(std::move(block_maps)) {
    if (maps_.size() != partition_.blocks().size()) {
        throw InvalidArgument("need exactly one map per partition block");
    }
    for (std::size_t i = 0; i < maps_.size(); ++i) {
        for (const auto& label : partition_.space().labels_of(partition_.blocks()[i])) {
            auto it = maps_[i].find(label);
            if (it == maps_[i].end()) {
                throw InvalidArgument("map for block " + std::to_string(i + 1) + " is not total: '" + label +
                                      "' has no image");
            }
            (void)codomain_.index_of(it->second);
        }
    }
}

Subset ElementMap::image(std::size_t block) const {
    if (block >= maps_.size()) throw InvalidArgument("block index out of range");
    Subset out;
    for (const auto& label : partition_.space().labels_of(partition_.blocks()[block])) {
        out.bits |= std::uint64_t{1} << codomain_.index_of(maps_[block].at(label));
    }
    return out;
}

Filter image_filter(const ElementMap& map, std::size_t block, const Filter& block_filter) {
    if (block >= map.blocks()) throw InvalidArgument("block index out of range");
    const Subset g = map.partition().blocks()[block];
    if (!(block_filter.carrier() == map.partition().space()) || !block_filter.generator() ||
        *block_filter.generator() != g) {
        throw InvalidArgument("image_filter expects the principal filter of the chosen block");
    }
    return principal_filter(map.codomain(), map.image(block));
}

bool general_function_limit(const ElementMap& map, std::size_t block, Subset a) {
    const Filter pi = principal_filter(map.partition().space(), map.partition().blocks().at(block));
    return stronger_than(image_filter(map, block, pi), principal_filter(map.codomain(), a));
}

// ---------------------------------------------------------------------------

BallLimit ball_filter_limit(const ScalarField& field, const Curve& curve, double t, const ToleranceConfig& cfg) {
    cfg.validate();
    constexpr std::size_t kBalls = 13;
    constexpr std::size_t kSamples = 64;
    constexpr double kSlack = 1.1;

    const Expression bracket = total_derivative_expression(field, curve);
    std::vector<double> center = curve.position(t);
    center.push_back(t);
    auto value_at = [&](const std::vector<double>& r) {
        return evaluate(bracket, point_assignment(std::span<const double>(r.data(), r.size() - 1), r.back()));
    };

    BallLimit out;
    out.center_value = value_at(center);
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(out.center_value));

    double radius = cfg.ball_radius0;
    for (std::size_t k = 0; k < kBalls; ++k, radius *= cfg.shrink) {
        BallStep step;
        step.radius = radius;
        double sum = 0.0;
        const auto points = numerics::ball_samples(center, radius, kSamples);
        for (const auto& r : points) {
            double v = 0.0;
            try {
                v = value_at(r);
            } catch (const DomainError& err) {
                throw NonConvergenceError(std::string("bracket undefined inside the ball: ") + err.what());
            }
            sum += v;
            step.max_deviation = std::max(step.max_deviation, std::abs(v - out.center_value));
        }
        step.mean = sum / static_cast<double>(points.size());
        if (!out.trace.empty() && step.max_deviation > kSlack * out.trace.back().max_deviation + floor) {
            throw NonConvergenceError("ball deviations grew from radius " +
                                      std::to_string(out.trace.back().radius) + " to " + std::to_string(radius));
        }
        out.trace.push_back(step);
    }
    const double first = out.trace.front().max_deviation;
    const double last = out.trace.back().max_deviation;
    if (first > floor && last > 0.5 * first) {
        throw NonConvergenceError("ball deviations do not shrink toward p(t)");
    }

    // Antipodal pairing cancels the odd terms, so the means approach the limit as r^2.
    const double s2 = cfg.shrink * cfg.shrink;
    const double fine = out.trace[kBalls - 1].mean;
    const double coarse = out.trace[kBalls - 2].mean;
    out.limit = (fine - s2 * coarse) / (1.0 - s2);
    return out;
}

}  // namespace pathcalc
