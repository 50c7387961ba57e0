#pragma once

#include "coarsemod/group_ring.hpp"

namespace coarsemod {

/// Exponent vector in k[x_1..x_n, y_1..y_n], where x_i stands for the i-th
/// coordinate generator of Z^n and y_i for its inverse (bridged by the
/// relators x_i y_i - 1).
using Expo = std::vector<int>;

int expoDeg(const Expo& e);
Expo expoMul(const Expo& a, const Expo& b);
Expo expoLcm(const Expo& a, const Expo& b);
/// a - b, assuming b divides a.
Expo expoQuot(const Expo& a, const Expo& b);
bool expoDivides(const Expo& a, const Expo& b);
/// degrevlex: higher degree wins, ties broken by the last differing variable
/// (smaller exponent there wins).
int cmpExpo(const Expo& a, const Expo& b);

/// Term of a free-module vector over the polynomial ring.
struct ModTerm {
    Scalar c;
    int pos = 0;
    Expo e;
};

/// Position-over-term order: lower positions dominate, degrevlex inside a
/// position. Returns +1 when (pa, a) is the larger term.
int cmpTerm(int pa, const Expo& a, int pb, const Expo& b);

/// Module vector with terms strictly descending in the POT order.
struct PolyVec {
    std::vector<ModTerm> t;

    bool empty() const { return t.empty(); }
    const ModTerm& lead() const { return t.front(); }
};

PolyVec pvNormalize(const Ring& R, std::vector<ModTerm> terms);
/// f + c * x^m * g.
PolyVec pvAxpy(const Ring& R, const PolyVec& f, const Scalar& c, const Expo& m, const PolyVec& g);
PolyVec pvMonic(const Ring& R, PolyVec f);
std::string pvStr(const PolyVec& f);

/// Full normal form of f against the basis (top reduction, then the tail).
PolyVec reduceFull(const Ring& R, PolyVec f, const std::vector<PolyVec>& basis);

/// Module Buchberger over a field, deterministic: pairs processed by lcm
/// degree then insertion order, no pair-dropping criteria (the syzygy
/// extraction downstream needs every reduction). Output is monic.
std::vector<PolyVec> buchberger(const Ring& R, std::vector<PolyVec> inputs);

/// Laurent bridge: group element t^a lifts to x^{max(a,0)} y^{max(-a,0)}
/// termwise; positions are offset by posBase.
PolyVec liftVec(const Ring& R, int n, const FreeVec& v, int posBase = 0);
/// Inverse image: exponent a_i = e(x_i) - e(y_i); positions below posBase are
/// rejected. Terms that collide after the drop are merged.
FreeVec dropVec(const GroupPtr& G, const Ring& R, const PolyVec& v, int posBase = 0);

/// True when complete Groebner computations apply: Z^n with a field of
/// coefficients.
bool groebnerTier(const GroupPtr& G, const Ring& R);

/// Generators of { a in L^p : sum a_i tracked_i lies in the L-span of extras }
/// for Laurent vectors in L^targetRank, L = R[Z^n]. Complete, pruned to a set
/// with no redundant member, each generator translated and scaled so its
/// largest coordinate is monic at the identity end.
std::vector<FreeVec> laurent_syzygies(const GroupPtr& G, const Ring& R,
                                      const std::vector<FreeVec>& tracked,
                                      const std::vector<FreeVec>& extras, int targetRank);

/// Exact membership of v in the L-span of gens inside L^rank.
bool laurent_member(const GroupPtr& G, const Ring& R, const FreeVec& v,
                    const std::vector<FreeVec>& gens, int rank);

}  // namespace coarsemod
