#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

namespace coarsemod {

enum class GroupFamily { FreeAbelian, Free, BaumslagSolitar, ProductOfTrees };

struct GroupSpec;
using GroupPtr = std::shared_ptr<const GroupSpec>;

/// Britton normal form for BS(m,n) = <x,y | x y^m x^-1 = y^n>:
///   y^{r_1} x^{e_1} ... y^{r_k} x^{e_k} y^{tail}
/// with r_i in [0,n) before x and in [0,m) before x^-1, and no pinches.
struct BSForm {
    std::vector<std::pair<long long, int>> syl;  // (r_i, e_i), e_i = +1/-1
    long long tail = 0;

    bool operator==(const BSForm& o) const { return syl == o.syl && tail == o.tail; }
    bool operator<(const BSForm& o) const {
        if (syl.size() != o.syl.size()) return syl.size() < o.syl.size();
        if (syl != o.syl) return syl < o.syl;
        return tail < o.tail;
    }
};

using GroupPayload = std::variant<
    std::vector<long long>,        // FreeAbelian: exponent vector
    std::vector<int>,              // Free: reduced word, letter +i/-i (1-based)
    BSForm,                        // BaumslagSolitar
    std::vector<std::vector<int>>  // ProductOfTrees: per-factor reduced word
>;

class GroupElement {
public:
    GroupElement() = default;
    GroupElement(GroupPtr g, GroupPayload p) : G(std::move(g)), payload(std::move(p)) {}

    GroupPtr G;
    GroupPayload payload;

    bool isIdentity() const;
    GroupElement mul(const GroupElement& other) const;
    GroupElement inverse() const;
    /// Word length |g| in the standard generators; BFS families may throw
    /// when the radius cap is exceeded.
    int wordLength() const;

    bool operator==(const GroupElement& o) const { return payload == o.payload; }
    bool operator!=(const GroupElement& o) const { return !(*this == o); }
    /// Structural canonical order (metric-free, deterministic).
    bool operator<(const GroupElement& o) const;

    std::string str() const;
};

struct GroupSpec : std::enable_shared_from_this<GroupSpec> {
    GroupFamily family = GroupFamily::FreeAbelian;
    int rank = 1;                 // FreeAbelian n / Free k
    long long bsM = 0, bsN = 0;   // BaumslagSolitar(m, n)
    std::vector<int> branching;   // ProductOfTrees valences
    int bfsCap = 12;              // radius cap for BFS-based metric data

    static GroupPtr freeAbelian(int n);
    static GroupPtr freeGroup(int k);
    static GroupPtr baumslagSolitar(long long m, long long n, int cap = 12);
    static GroupPtr productOfTrees(std::vector<int> valences);
    /// "Z", "Z2", "Z^3", "F2", "BS(2,3)", "T(2,2)", "FreeAbelian(2)", ...
    static GroupPtr parse(const std::string& name);

    std::string name() const;
    bool usesBfsMetric() const { return family == GroupFamily::BaumslagSolitar; }
    /// Symmetric standard generating set (inverses included, involutions once).
    std::vector<GroupElement> symmetricGenerators() const;
    /// Named generators in order (x, y / t1..tn / a,b,... / si_j).
    std::vector<std::pair<std::string, GroupElement>> namedGenerators() const;

    GroupElement identity() const;
    GroupElement parseElement(const std::string& word) const;

    // BFS sphere cache from the identity (lazily grown, mutex-guarded).
    mutable std::mutex cacheMutex;
    mutable std::vector<std::vector<GroupElement>> spheres;  // spheres[r]
    mutable std::map<GroupPayload, int> distToIdentity;
};

/// Structural equality of group descriptions (instances are not interned, so
/// pointer identity is too strict).
bool sameGroup(const GroupPtr& a, const GroupPtr& b);

/// d(a, b) = |a^{-1} b|; left-invariant by construction.
int distance(const GroupElement& a, const GroupElement& b);

/// Ball around the identity, canonically ordered (radius layers, structural
/// order inside each layer). Throws when r exceeds the BFS family cap.
std::vector<GroupElement> ballAtIdentity(const GroupPtr& G, int r);
/// Left-translated ball, sorted in structural canonical order.
std::vector<GroupElement> ball(const GroupElement& center, int r);
long long ballSize(const GroupPtr& G, int r);

}  // namespace coarsemod
