#pragma once

#include <json.hpp>

#include "coarsemod/group.hpp"
#include "coarsemod/linalg.hpp"

namespace coarsemod {

/// Basis coordinate of a free module R[G]^k: the group translate g of the
/// slot-th standard generator.
struct Coord {
    GroupElement g;
    int slot = 0;

    bool operator==(const Coord& o) const { return slot == o.slot && g == o.g; }
    bool operator<(const Coord& o) const {
        if (slot != o.slot) return slot < o.slot;
        return g < o.g;
    }
};

/// Element of a free module over the group ring, in sparse coordinates.
using FreeVec = SparseVec<Coord>;

std::string freeVecStr(const FreeVec& v);
nlohmann::json freeVecToJson(const FreeVec& v);
FreeVec freeVecFromJson(const GroupPtr& G, const Ring& R, const nlohmann::json& j);

/// Left translate: gamma . v (coordinates (g, i) -> (gamma g, i)).
FreeVec translate(const GroupElement& gamma, const FreeVec& v);

/// All group elements appearing in the support.
std::vector<GroupElement> supportOf(const FreeVec& v);
/// max |g| over the support (0 for the zero vector).
int supportRadius(const FreeVec& v);

/// Element of the group ring R[G]: finitely supported scalar combination of
/// group elements, terms sorted in the structural order.
struct GroupRingElement {
    GroupPtr G;
    Ring R;
    std::vector<std::pair<GroupElement, Scalar>> terms;

    GroupRingElement() = default;
    GroupRingElement(GroupPtr g, Ring r) : G(std::move(g)), R(std::move(r)) {}

    static GroupRingElement zero(const GroupPtr& G, const Ring& R) { return {G, R}; }
    static GroupRingElement one(const GroupPtr& G, const Ring& R);
    static GroupRingElement monomial(const GroupPtr& G, const Ring& R, const GroupElement& g,
                                     const Scalar& c);

    bool isZero() const { return terms.empty(); }
    bool operator==(const GroupRingElement& o) const { return terms == o.terms; }
    bool operator!=(const GroupRingElement& o) const { return !(*this == o); }

    GroupRingElement add(const GroupRingElement& o) const;
    GroupRingElement sub(const GroupRingElement& o) const;
    GroupRingElement mul(const GroupRingElement& o) const;  // convolution
    GroupRingElement neg() const;
    GroupRingElement scale(const Scalar& c) const;
    GroupRingElement translated(const GroupElement& gamma) const;  // gamma . x

    int supportRadius() const;
    std::string str() const;
    nlohmann::json toJson() const;

    /// "3*t^2 + -1/2*t.s + y + 2"; words use '.' separators inside terms.
    static GroupRingElement parse(const GroupPtr& G, const Ring& R, const std::string& text);
    static GroupRingElement fromJson(const GroupPtr& G, const Ring& R, const nlohmann::json& j);

    void normalize();  // sort, merge, drop zeros
};

/// Matrix over the group ring, row-major. Morphisms R[G]^rows -> R[G]^cols
/// act on row vectors: (v A)_j = sum_i v_i A_{ij}, so basis vector g.e_i maps
/// to the g-translate of row i.
struct GroupRingMatrix {
    GroupPtr G;
    Ring R;
    int rows = 0, cols = 0;
    std::vector<GroupRingElement> entries;  // rows*cols

    GroupRingMatrix() = default;
    GroupRingMatrix(GroupPtr g, Ring r, int m, int n);
    static GroupRingMatrix identity(const GroupPtr& G, const Ring& R, int n);

    GroupRingElement& at(int i, int j) { return entries[(size_t)i * cols + j]; }
    const GroupRingElement& at(int i, int j) const { return entries[(size_t)i * cols + j]; }

    GroupRingMatrix mul(const GroupRingMatrix& o) const;
    GroupRingMatrix add(const GroupRingMatrix& o) const;
    GroupRingMatrix sub(const GroupRingMatrix& o) const;
    bool operator==(const GroupRingMatrix& o) const;
    bool isIdempotent() const;

    /// Image of g.e_i under the matrix (the g-translate of row i).
    FreeVec applyToBasis(const Coord& c) const;
    FreeVec apply(const FreeVec& v) const;

    /// max support radius over entries: the control bound of the morphism.
    int maxSupportRadius() const;

    nlohmann::json toJson() const;
    static GroupRingMatrix fromJson(const GroupPtr& G, const Ring& R, const nlohmann::json& j);
};

}  // namespace coarsemod
