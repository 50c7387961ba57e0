#include "coarsemod/subset.hpp"

#include <algorithm>

namespace coarsemod {

MetricSubset MetricSubset::of(GroupPtr g, std::vector<GroupElement> xs) {
    MetricSubset s(std::move(g));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    s.elems = std::move(xs);
    return s;
}

MetricSubset MetricSubset::ofBall(const GroupElement& center, int r) {
    MetricSubset s(center.G);
    s.elems = ball(center, r);
    return s;
}

MetricSubset MetricSubset::singleton(const GroupElement& x) {
    MetricSubset s(x.G);
    s.elems = {x};
    return s;
}

bool MetricSubset::contains(const GroupElement& x) const {
    return std::binary_search(elems.begin(), elems.end(), x);
}

MetricSubset MetricSubset::enlarged(int d) const {
    if (d < 0) throw std::invalid_argument("enlargement must be >= 0");
    if (d == 0) return *this;
    auto offsets = ballAtIdentity(G, d);
    std::vector<GroupElement> out;
    out.reserve(elems.size() * offsets.size());
    for (const auto& x : elems)
        for (const auto& w : offsets) out.push_back(x.mul(w));
    return of(G, std::move(out));
}

MetricSubset MetricSubset::intersect(const MetricSubset& other) const {
    MetricSubset s(G);
    std::set_intersection(elems.begin(), elems.end(), other.elems.begin(), other.elems.end(),
                          std::back_inserter(s.elems));
    return s;
}

MetricSubset MetricSubset::unite(const MetricSubset& other) const {
    MetricSubset s(G);
    std::set_union(elems.begin(), elems.end(), other.elems.begin(), other.elems.end(),
                   std::back_inserter(s.elems));
    return s;
}

bool MetricSubset::subsetOf(const MetricSubset& other) const {
    return std::includes(other.elems.begin(), other.elems.end(), elems.begin(), elems.end());
}

nlohmann::json MetricSubset::toJson() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : elems) arr.push_back(x.str());
    return nlohmann::json{{"elements", arr}};
}

MetricSubset MetricSubset::fromJson(const GroupPtr& g, const nlohmann::json& j) {
    if (j.contains("ball")) {
        const auto& b = j.at("ball");
        GroupElement c = g->parseElement(b.value("center", "e"));
        return ofBall(c, b.at("radius").get<int>());
    }
    std::vector<GroupElement> xs;
    for (const auto& w : j.at("elements")) xs.push_back(g->parseElement(w.get<std::string>()));
    return of(g, std::move(xs));
}

}  // namespace coarsemod
