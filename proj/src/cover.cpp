#include "coarsemod/cover.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace coarsemod {

namespace {

long long floorDiv(long long a, long long b) {
    long long q = a / b, r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

long long floorMod(long long a, long long b) { return a - floorDiv(a, b) * b; }

/// Coordinate profile used for interval-box shortcuts: Z^n coordinates,
/// per-factor levels for tree products, total level for free groups. Empty
/// for families without a useful profile (BS).
std::vector<long long> levelProfile(const GroupElement& x) {
    switch (x.G->family) {
        case GroupFamily::FreeAbelian:
            return std::get<std::vector<long long>>(x.payload);
        case GroupFamily::ProductOfTrees: {
            const auto& ws = std::get<std::vector<std::vector<int>>>(x.payload);
            std::vector<long long> lv;
            lv.reserve(ws.size());
            for (const auto& w : ws) lv.push_back((long long)w.size());
            return lv;
        }
        case GroupFamily::Free:
            return {(long long)std::get<std::vector<int>>(x.payload).size()};
        default:
            return {};
    }
}

long long exactDiameter(const MetricSubset& s) {
    long long best = 0;
    for (size_t i = 0; i < s.elems.size(); ++i)
        for (size_t j = i + 1; j < s.elems.size(); ++j)
            best = std::max(best, (long long)distance(s.elems[i], s.elems[j]));
    return best;
}

}  // namespace

nlohmann::json MaterializedCover::toJson() const {
    nlohmann::json fams = nlohmann::json::array();
    for (const auto& fam : families) {
        nlohmann::json pieces = nlohmann::json::array();
        for (const auto& p : fam) pieces.push_back(p.toJson());
        fams.push_back(std::move(pieces));
    }
    return {{"families", std::move(fams)}, {"bound", bound}, {"separation", separation}};
}

MaterializedCover MaterializedCover::fromJson(const GroupPtr& g, const nlohmann::json& j) {
    MaterializedCover out;
    out.G = g;
    out.bound = j.at("bound").get<long long>();
    out.separation = j.at("separation").get<long long>();
    for (const auto& fam : j.at("families")) {
        std::vector<MetricSubset> pieces;
        for (const auto& p : fam) pieces.push_back(MetricSubset::fromJson(g, p));
        out.families.push_back(std::move(pieces));
    }
    return out;
}

Cover build_cover(const GroupPtr& G, long long R) {
    if (R < 0) throw std::invalid_argument("cover: separation must be nonnegative");
    Cover c;
    c.G = G;
    c.R = R;
    switch (G->family) {
        case GroupFamily::FreeAbelian:
            c.dims = G->rank;
            break;
        case GroupFamily::ProductOfTrees:
            c.dims = (int)G->branching.size();
            c.shadow = R;
            break;
        default:
            throw std::invalid_argument("cover: no construction for " + G->name());
    }
    c.familyCount = c.dims + 1;
    if (G->family == GroupFamily::FreeAbelian)
        c.bound = (long long)c.dims * (c.side() - 1);
    else
        c.bound = (long long)c.dims * 2 * (c.side() - 1 + c.shadow);
    return c;
}

MaterializedCover Cover::materialize(const MetricSubset& window) const {
    if (!sameGroup(window.G, G)) throw std::invalid_argument("cover: window group mismatch");
    MaterializedCover out;
    out.G = G;
    out.bound = bound;
    out.separation = R;
    out.families.resize(familyCount);

    const long long L = period(), S = side(), delta = R + 1;
    const bool trees = (G->family == GroupFamily::ProductOfTrees);

    for (int j = 0; j < familyCount; ++j) {
        std::map<std::string, std::vector<GroupElement>> pieces;
        for (const auto& x : window.elems) {
            auto lv = levelProfile(x);
            bool in = true;
            std::vector<long long> lam(dims);
            std::string key;
            for (int i = 0; i < dims; ++i) {
                long long shifted = lv[i] - (long long)j * delta;
                if (floorMod(shifted, L) >= S) {
                    in = false;
                    break;
                }
                lam[i] = floorDiv(shifted, L);
                key += std::to_string(lam[i]);
                key += ',';
            }
            if (!in) continue;
            if (trees) {
                const auto& words = std::get<std::vector<std::vector<int>>>(x.payload);
                for (int i = 0; i < dims; ++i) {
                    long long floor = lam[i] * L + (long long)j * delta;
                    long long depth = std::max<long long>(0, floor - shadow);
                    key += '|';
                    for (long long k = 0; k < depth; ++k) {
                        key += std::to_string(words[i][(size_t)k]);
                        key += '.';
                    }
                }
            }
            pieces[key].push_back(x);
        }
        for (auto& [k, v] : pieces)
            out.families[j].push_back(MetricSubset::of(G, std::move(v)));
    }
    return out;
}

ControlCertificate verify_cover(const MaterializedCover& c, long long R,
                                const MetricSubset& window) {
    int windowRadius = 0;
    for (const auto& x : window.elems) windowRadius = std::max(windowRadius, x.wordLength());

    auto fail = [&](nlohmann::json why) {
        return ControlCertificate::failed("cover", c.bound, windowRadius, std::move(why));
    };

    // Clip pieces to the window and record their level boxes.
    struct Box {
        MetricSubset s;
        std::vector<long long> lo, hi;
    };
    std::vector<std::vector<Box>> fams;
    for (const auto& fam : c.families) {
        std::vector<Box> bs;
        for (const auto& piece : fam) {
            Box b;
            b.s = piece.intersect(window);
            if (b.s.empty()) continue;
            for (const auto& x : b.s.elems) {
                auto lv = levelProfile(x);
                if (b.lo.empty()) {
                    b.lo = lv;
                    b.hi = lv;
                } else {
                    for (size_t i = 0; i < lv.size(); ++i) {
                        b.lo[i] = std::min(b.lo[i], lv[i]);
                        b.hi[i] = std::max(b.hi[i], lv[i]);
                    }
                }
            }
            bs.push_back(std::move(b));
        }
        fams.push_back(std::move(bs));
    }

    // Coverage.
    std::vector<GroupElement> covered;
    for (const auto& fam : fams)
        for (const auto& b : fam) covered.insert(covered.end(), b.s.elems.begin(), b.s.elems.end());
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    for (const auto& x : window.elems)
        if (!std::binary_search(covered.begin(), covered.end(), x))
            return fail({{"reason", "uncovered"}, {"point", x.str()}});

    const bool boxIsMetric = (window.G->family == GroupFamily::FreeAbelian);

    // Uniform boundedness of the clipped pieces.
    for (size_t f = 0; f < fams.size(); ++f) {
        for (size_t p = 0; p < fams[f].size(); ++p) {
            const Box& b = fams[f][p];
            if (boxIsMetric) {
                long long boxDiam = 0;
                for (size_t i = 0; i < b.lo.size(); ++i) boxDiam += b.hi[i] - b.lo[i];
                if (boxDiam <= c.bound) continue;
            }
            long long d = exactDiameter(b.s);
            if (d > c.bound)
                return fail({{"reason", "oversized-piece"},
                             {"family", f},
                             {"piece", p},
                             {"diameter", d}});
        }
    }

    // R-disjointness within each family.
    for (size_t f = 0; f < fams.size(); ++f) {
        for (size_t p = 0; p < fams[f].size(); ++p) {
            for (size_t q = p + 1; q < fams[f].size(); ++q) {
                const Box &A = fams[f][p], &B = fams[f][q];
                long long lower = 0;
                for (size_t i = 0; i < A.lo.size() && i < B.lo.size(); ++i) {
                    if (A.hi[i] < B.lo[i]) lower += B.lo[i] - A.hi[i];
                    if (B.hi[i] < A.lo[i]) lower += A.lo[i] - B.hi[i];
                }
                if (!A.lo.empty() && lower > R) continue;
                long long best = -1;
                const GroupElement *wa = nullptr, *wb = nullptr;
                for (const auto& a : A.s.elems)
                    for (const auto& bb : B.s.elems) {
                        long long d = distance(a, bb);
                        if (best < 0 || d < best) {
                            best = d;
                            wa = &a;
                            wb = &bb;
                        }
                    }
                if (best >= 0 && best <= R)
                    return fail({{"reason", "close-pieces"},
                                 {"family", f},
                                 {"a", wa->str()},
                                 {"b", wb->str()},
                                 {"distance", best}});
            }
        }
    }

    size_t total = 0;
    for (const auto& fam : fams) total += fam.size();
    return ControlCertificate::passed(
        "cover", c.bound, windowRadius,
        {{"families", fams.size()}, {"pieces", total}, {"separation", R}});
}

}  // namespace coarsemod
