#pragma once

#include <json.hpp>

#include "coarsemod/group.hpp"

namespace coarsemod {

/// Finite subset of a group's underlying metric space, canonically sorted.
struct MetricSubset {
    GroupPtr G;
    std::vector<GroupElement> elems;  // sorted, unique

    MetricSubset() = default;
    explicit MetricSubset(GroupPtr g) : G(std::move(g)) {}
    static MetricSubset of(GroupPtr g, std::vector<GroupElement> xs);
    static MetricSubset ofBall(const GroupElement& center, int r);
    static MetricSubset singleton(const GroupElement& x);

    bool empty() const { return elems.empty(); }
    size_t size() const { return elems.size(); }
    bool contains(const GroupElement& x) const;

    /// Metric d-enlargement S[d] (union of closed d-balls).
    MetricSubset enlarged(int d) const;
    MetricSubset intersect(const MetricSubset& other) const;
    MetricSubset unite(const MetricSubset& other) const;
    bool subsetOf(const MetricSubset& other) const;

    nlohmann::json toJson() const;
    /// Accepts {"elements":[...words...]} or {"ball":{"center":word,"radius":r}}.
    static MetricSubset fromJson(const GroupPtr& g, const nlohmann::json& j);

    bool operator==(const MetricSubset& o) const { return elems == o.elems; }
};

}  // namespace coarsemod
