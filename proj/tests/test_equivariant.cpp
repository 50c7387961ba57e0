#include <doctest.h>

#include <random>

#include "coarsemod/equivariant.hpp"

using namespace coarsemod;

namespace {

FreeVec unitVec(const GroupPtr& G, const Ring& R, const std::string& word, int slot = 0) {
    return FreeVec{{Coord{G->parseElement(word), slot}, R.one()}};
}

}  // namespace

TEST_CASE("psi translates coordinates backwards and inverts cleanly") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();
    auto E = equivariant_of(standard_filtration(PresentedModule::freeModule(Z, ZZ, 1)));

    auto t = Z->parseElement("t");
    CHECK(E.psi(t, unitVec(Z, ZZ, "e")) == unitVec(Z, ZZ, "t^-1"));
    CHECK(E.psi(t, unitVec(Z, ZZ, "t^4")) == unitVec(Z, ZZ, "t^3"));
    CHECK(E.psi(Z->identity(), unitVec(Z, ZZ, "t^2")) == unitVec(Z, ZZ, "t^2"));
    CHECK(E.psiInverse(t, E.psi(t, unitVec(Z, ZZ, "t^2"))) == unitVec(Z, ZZ, "t^2"));

    auto push = FilteredModule::pushforward(
        standard_filtration(PresentedModule::freeModule(Z, ZZ, 1)),
        UniformEmbedding::doubling(Z, 2));
    CHECK_THROWS_AS(equivariant_of(push), std::invalid_argument);
}

TEST_CASE("cocycle law holds on sampled pairs, in the reversed order") {
    Ring ZZ = Ring::integers();
    auto plan = SamplingPlan::forWindow(8, 0, 19);

    auto Z = GroupSpec::freeAbelian(1);
    auto EZ = equivariant_of(standard_filtration(PresentedModule::freeModule(Z, ZZ, 1)));
    auto cz = check_cocycle(EZ, 8, plan);
    CHECK(cz.pass);
    CHECK(cz.details.at("samples").get<int>() >= 50);

    auto F2 = GroupSpec::freeGroup(2);
    auto EF = equivariant_of(standard_filtration(PresentedModule::freeModule(F2, ZZ, 2)));
    CHECK(check_cocycle(EF, 6, SamplingPlan::forWindow(6, 0, 19)).pass);

    // order matters: the homomorphism-style composition fails on free groups
    auto a = F2->parseElement("a");
    auto b = F2->parseElement("b");
    auto v = unitVec(F2, ZZ, "e");
    CHECK(EF.psi(a.mul(b), v) == EF.psi(b, EF.psi(a, v)));
    CHECK(EF.psi(a.mul(b), v) != EF.psi(a, EF.psi(b, v)));
}

TEST_CASE("psi has degree zero on window spans") {
    Ring ZZ = Ring::integers();
    auto Z = GroupSpec::freeAbelian(1);
    auto plan = SamplingPlan::forWindow(10, 0, 29);

    auto free1 = standard_filtration(PresentedModule::freeModule(Z, ZZ, 1));
    auto c1 = check_degree_zero(equivariant_of(free1), 10, plan);
    CHECK(c1.pass);
    CHECK(c1.details.at("samples").get<int>() > 0);

    GroupRingMatrix rel(Z, ZZ, 1, 1);
    rel.at(0, 0) = GroupRingElement::parse(Z, ZZ, "t - 1");
    auto trivial = standard_filtration(PresentedModule::quotient(rel));
    CHECK(check_degree_zero(equivariant_of(trivial), 10, plan).pass);

    GroupRingMatrix e(Z, ZZ, 2, 2);
    e.at(0, 0) = GroupRingElement::parse(Z, ZZ, "1");
    e.at(0, 1) = GroupRingElement::parse(Z, ZZ, "t");
    auto img = FilteredModule::image(e, PresentedModule::freeModule(Z, ZZ, 2));
    CHECK(check_degree_zero(equivariant_of(img), 10, plan).pass);

    auto F2 = GroupSpec::freeGroup(2);
    auto freeF = standard_filtration(PresentedModule::freeModule(F2, ZZ, 1));
    CHECK(check_degree_zero(equivariant_of(freeF), 5, SamplingPlan::forWindow(5, 0, 29)).pass);
}

TEST_CASE("the recovered action is left multiplication") {
    Ring ZZ = Ring::integers();
    auto Z = GroupSpec::freeAbelian(1);
    auto free1 = standard_filtration(PresentedModule::freeModule(Z, ZZ, 1));
    auto act = action_from_equivariant(equivariant_of(free1));
    CHECK(act.cocycle.pass);

    // oracle: 1x1 matrix application computes the convolution independently
    std::mt19937_64 rng(77);
    auto B = ballAtIdentity(Z, 4);
    const char* elems[] = {"t^2 - 3", "t - 1", "t^5", "2 + t^-1 + t", "0"};
    for (auto s : elems) {
        auto r = GroupRingElement::parse(Z, ZZ, s);
        GroupRingMatrix m(Z, ZZ, 1, 1);
        m.at(0, 0) = r;
        for (int trial = 0; trial < 10; ++trial) {
            FreeVec v;
            for (int i = 0; i < 3; ++i)
                v = svAxpy(ZZ, v, ZZ.fromInt((long)(rng() % 5) - 2),
                           FreeVec{{Coord{B[rng() % B.size()], 0}, ZZ.one()}});
            CHECK(act.act(r, v) == m.apply(v));
        }
    }

    // trivial module: (t - 1) . 1 lands in the zero class
    GroupRingMatrix rel(Z, ZZ, 1, 1);
    rel.at(0, 0) = GroupRingElement::parse(Z, ZZ, "t - 1");
    auto trivial = standard_filtration(PresentedModule::quotient(rel));
    auto actT = action_from_equivariant(equivariant_of(trivial));
    auto moved = actT.act(GroupRingElement::parse(Z, ZZ, "t - 1"), unitVec(Z, ZZ, "e"));
    CHECK(!moved.empty());  // nonzero as a raw vector
    auto zero = trivial->evaluate(MetricSubset(Z), 6);
    CHECK(zero.member(moved));  // zero in the quotient
}
