#include <doctest.h>

#include "coarsemod/cover.hpp"

using namespace coarsemod;

namespace {

MetricSubset windowBall(const GroupPtr& G, int r) {
    return MetricSubset::ofBall(G->identity(), r);
}

}  // namespace

TEST_CASE("line cover matches the offset interval picture") {
    auto Z = GroupSpec::freeAbelian(1);
    auto c = build_cover(Z, 5);
    CHECK(c.familyCount == 2);
    CHECK(c.side() == 6);

    auto mat = c.materialize(windowBall(Z, 30));
    REQUIRE(mat.families.size() == 2);
    for (const auto& fam : mat.families)
        for (const auto& piece : fam) CHECK(piece.size() <= 6);

    // every piece is a run of consecutive integers
    for (const auto& fam : mat.families)
        for (const auto& piece : fam)
            for (size_t i = 1; i < piece.elems.size(); ++i)
                CHECK(distance(piece.elems[i - 1], piece.elems[i]) == 1);

    CHECK(verify_cover(mat, 5, windowBall(Z, 30)).pass);
}

TEST_CASE("free abelian covers verify at the contract sizes") {
    for (long long R : {2LL, 5LL, 10LL}) {
        {
            auto Z = GroupSpec::freeAbelian(1);
            auto w = windowBall(Z, 200);
            auto cert = verify_cover(build_cover(Z, R).materialize(w), R, w);
            CHECK(cert.pass);
        }
        {
            auto Z2 = GroupSpec::freeAbelian(2);
            auto w = windowBall(Z2, 40);
            auto c = build_cover(Z2, R);
            CHECK(c.familyCount == 3);
            CHECK(verify_cover(c.materialize(w), R, w).pass);
        }
        {
            auto Z3 = GroupSpec::freeAbelian(3);
            auto w = windowBall(Z3, 12);
            auto c = build_cover(Z3, R);
            CHECK(c.familyCount == 4);
            CHECK(verify_cover(c.materialize(w), R, w).pass);
        }
    }
}

TEST_CASE("tree covers pull back through the level map") {
    auto T3 = GroupSpec::productOfTrees({3});
    auto c = build_cover(T3, 2);
    CHECK(c.familyCount == 2);
    auto w = windowBall(T3, 7);
    auto cert = verify_cover(c.materialize(w), 2, w);
    CHECK(cert.pass);

    auto T22 = GroupSpec::productOfTrees({2, 2});
    auto c2 = build_cover(T22, 2);
    CHECK(c2.familyCount == 3);
    auto w2 = windowBall(T22, 6);
    CHECK(verify_cover(c2.materialize(w2), 2, w2).pass);

    auto T23 = GroupSpec::productOfTrees({2, 3});
    auto w3 = windowBall(T23, 5);
    CHECK(verify_cover(build_cover(T23, 1).materialize(w3), 1, w3).pass);
}

TEST_CASE("shadow markers actually split tree pieces") {
    auto T3 = GroupSpec::productOfTrees({3});
    auto c = build_cover(T3, 2);
    auto mat = c.materialize(windowBall(T3, 7));
    // pieces away from the root must be split by branch: more pieces than the
    // handful of level intervals
    size_t pieces = 0;
    for (const auto& fam : mat.families) pieces += fam.size();
    CHECK(pieces > 6);
}

TEST_CASE("broken covers are refuted with witnesses") {
    auto Z = GroupSpec::freeAbelian(1);
    auto w = windowBall(Z, 10);

    MaterializedCover singletons;
    singletons.G = Z;
    singletons.bound = 0;
    singletons.separation = 1;
    singletons.families.emplace_back();
    for (const auto& x : w.elems)
        singletons.families.back().push_back(MetricSubset::singleton(x));
    auto cert = verify_cover(singletons, 1, w);
    REQUIRE(!cert.pass);
    CHECK(cert.counterexample.at("reason") == "close-pieces");
    CHECK(cert.counterexample.at("distance").get<long long>() <= 1);

    MaterializedCover gap;
    gap.G = Z;
    gap.bound = 40;
    gap.separation = 1;
    gap.families.push_back({MetricSubset::of(
        Z, {Z->parseElement("t^-10"), Z->parseElement("e"), Z->parseElement("t^10")})});
    auto cert2 = verify_cover(gap, 1, w);
    REQUIRE(!cert2.pass);
    CHECK(cert2.counterexample.at("reason") == "uncovered");

    MaterializedCover fat;
    fat.G = Z;
    fat.bound = 3;
    fat.separation = 1;
    fat.families.push_back({w});
    auto cert3 = verify_cover(fat, 1, w);
    REQUIRE(!cert3.pass);
    CHECK(cert3.counterexample.at("reason") == "oversized-piece");
    CHECK(cert3.counterexample.at("diameter").get<long long>() == 20);
}

TEST_CASE("cover json round trip and unsupported families") {
    auto Z2 = GroupSpec::freeAbelian(2);
    auto w = windowBall(Z2, 8);
    auto mat = build_cover(Z2, 2).materialize(w);
    auto back = MaterializedCover::fromJson(Z2, mat.toJson());
    CHECK(back.bound == mat.bound);
    CHECK(back.separation == mat.separation);
    REQUIRE(back.families.size() == mat.families.size());
    for (size_t f = 0; f < back.families.size(); ++f) {
        REQUIRE(back.families[f].size() == mat.families[f].size());
        for (size_t p = 0; p < back.families[f].size(); ++p)
            CHECK(back.families[f][p] == mat.families[f][p]);
    }
    CHECK(verify_cover(back, 2, w).pass);

    CHECK_THROWS(build_cover(GroupSpec::baumslagSolitar(2, 3), 2));
    CHECK_THROWS(build_cover(GroupSpec::freeGroup(2), 2));
    CHECK_THROWS(build_cover(Z2, -1));
}
