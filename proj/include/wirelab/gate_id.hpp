#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "wirelab/small_vec.hpp"

namespace wirelab {

/// Hierarchical operation identifier.
///
/// A freshly parsed circuit numbers its operations 0..n-1. When an operation
/// is rewritten into a sequence, the inserted operations extend the rewritten
/// id by one component each ("2" rewritten by eleven ops yields "2.0".."2.10"),
/// like software version numbers. This keeps the gate list totally ordered
/// across rewrite rounds without renumbering.
///
/// The distinguished sentinel min() compares less than every other id; it is
/// used as the threshold of recycle joins so that every operation resolves
/// into the joined wire.
class GateId {
public:
    GateId() = default;

    static GateId min() { return GateId{}; }

    static GateId single(std::uint32_t position) {
        GateId id;
        id.components_.push_back(position);
        return id;
    }

    static GateId of(std::initializer_list<std::uint32_t> components) {
        GateId id;
        for (std::uint32_t c : components) id.components_.push_back(c);
        return id;
    }

    /// Id of the i-th operation inserted when this operation is rewritten.
    [[nodiscard]] GateId child(std::uint32_t i) const {
        GateId id = *this;
        id.components_.push_back(i);
        return id;
    }

    [[nodiscard]] bool is_min() const { return components_.empty(); }

    [[nodiscard]] const SmallVec<std::uint32_t, 4>& components() const { return components_; }

    /// Prefix-equal ids compare shorter-first, which is the same order a
    /// component-wise comparison padding the shorter id with -infinity gives.
    /// The sentinel (empty) is therefore smaller than everything.
    [[nodiscard]] std::strong_ordering compare(const GateId& other) const {
        const std::size_t n = std::min(components_.size(), other.components_.size());
        for (std::size_t k = 0; k < n; ++k) {
            if (components_[k] != other.components_[k]) {
                return components_[k] < other.components_[k] ? std::strong_ordering::less
                                                             : std::strong_ordering::greater;
            }
        }
        if (components_.size() == other.components_.size()) return std::strong_ordering::equal;
        return components_.size() < other.components_.size() ? std::strong_ordering::less
                                                             : std::strong_ordering::greater;
    }

    friend std::strong_ordering operator<=>(const GateId& a, const GateId& b) { return a.compare(b); }
    friend bool operator==(const GateId& a, const GateId& b) { return a.components_ == b.components_; }

    [[nodiscard]] std::string str() const {
        if (is_min()) return "-1";
        std::string out;
        for (std::size_t k = 0; k < components_.size(); ++k) {
            if (k) out += '.';
            out += std::to_string(components_[k]);
        }
        return out;
    }

    /// True if this id has `prefix` as a strict prefix (e.g. 2.5.3 extends 2.5).
    [[nodiscard]] bool extends(const GateId& prefix) const {
        if (components_.size() <= prefix.components_.size()) return false;
        for (std::size_t k = 0; k < prefix.components_.size(); ++k) {
            if (components_[k] != prefix.components_[k]) return false;
        }
        return true;
    }

private:
    SmallVec<std::uint32_t, 4> components_;
};

/// Threshold test used by diagram traversals: does the operation identified
/// by `id` lie on the "after" side of a node split at `threshold`?
///
/// Operations inserted by the rewrite of gate t inherit ids t.i, which extend
/// t and belong to the new (right) wire, so ids that are >= the threshold
/// (prefix-equal included) count as after. Everything is after the sentinel.
inline bool is_after(const GateId& id, const GateId& threshold) {
    return id.compare(threshold) != std::strong_ordering::less;
}

}  // namespace wirelab
