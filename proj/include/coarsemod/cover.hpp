#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "coarsemod/certificate.hpp"
#include "coarsemod/subset.hpp"

namespace coarsemod {

/// A cover instantiated on a concrete window: families of explicit pieces.
struct MaterializedCover {
    GroupPtr G;
    long long bound = 0;       // claimed uniform diameter bound
    long long separation = 0;  // claimed same-family gap
    std::vector<std::vector<MetricSubset>> families;

    nlohmann::json toJson() const;
    static MaterializedCover fromJson(const GroupPtr& g, const nlohmann::json& j);
};

/// Symbolic cover rule. For FreeAbelian(n) the pieces are shrunk cubes with
/// period L = (n+1)(R+1) and covered side L - (R+1); family j is shifted by
/// j(R+1) along the diagonal. Each coordinate excludes a point from exactly
/// one family, so the n+1 families cover while same-family cubes sit a full
/// period apart in some coordinate (gap R+1 > R).
///
/// Product-of-trees covers pull the Z^p rule back along the per-factor level
/// map and split each piece by the geodesic ancestor sitting `shadow` levels
/// below the cube floor: two points sharing a cube but not the ancestor
/// branch at that depth are at distance >= 2(shadow+1).
struct Cover {
    GroupPtr G;
    long long R = 0;
    int dims = 0;             // n for Z^n, factor count for tree products
    long long shadow = 0;     // ancestor depth below the cube floor (trees)
    long long bound = 0;
    int familyCount = 0;

    long long period() const { return (long long)(dims + 1) * (R + 1); }
    long long side() const { return period() - (R + 1); }

    MaterializedCover materialize(const MetricSubset& window) const;
};

/// Builds the standard cover for FreeAbelian(n) or ProductOfTrees; other
/// families are rejected.
Cover build_cover(const GroupPtr& G, long long R);

/// Independent verdict on an explicit cover: every window point is covered,
/// pieces stay within `bound` after clipping to the window, and same-family
/// pieces are more than R apart. Interval boxes per coordinate (or per
/// factor level) give sound shortcuts; inconclusive pairs fall back to exact
/// pairwise distances.
ControlCertificate verify_cover(const MaterializedCover& c, long long R,
                                const MetricSubset& window);

}  // namespace coarsemod
