#include <doctest.h>

#include "coarsemod/embedding.hpp"

using namespace coarsemod;

TEST_CASE("witness tables") {
    auto f = WitnessTable::linear(2, 1);
    CHECK(f(0) == 1);
    CHECK(f(5) == 11);
    CHECK(f.monotone());
    CHECK(f.divergent());

    auto g = WitnessTable::fromJson(nlohmann::json::parse("[[0,0],[4,2],[8,8]]"));
    CHECK(g(0) == 0);
    CHECK(g(2) == 1);
    CHECK(g(4) == 2);
    CHECK(g(6) == 5);
    CHECK(g(12) == 14);  // final slope extrapolates
    CHECK(g.monotone());
    CHECK(g.divergent());
    CHECK(WitnessTable::fromJson(g.toJson()).pts == g.pts);

    auto flat = WitnessTable::fromJson(nlohmann::json::parse("[[0,3],[10,3]]"));
    CHECK(flat.monotone());
    CHECK(!flat.divergent());
    auto dropping = WitnessTable::fromJson(nlohmann::json::parse("[[0,3],[4,1]]"));
    CHECK(!dropping.monotone());

    CHECK_THROWS(WitnessTable::fromJson(nlohmann::json::parse("[]")));
    CHECK_THROWS(WitnessTable::fromJson(nlohmann::json::parse("[[0,0],[0,1]]")));
}

TEST_CASE("identity and doubling embeddings verify") {
    auto Z2 = GroupSpec::freeAbelian(2);
    auto pairs = samplePairs(Z2, 8, 42, 80);
    REQUIRE(pairs.size() == 80);

    auto id = UniformEmbedding::identity(Z2);
    auto cert = verify_uniform_embedding(id, pairs);
    CHECK(cert.pass);

    auto dbl = UniformEmbedding::doubling(Z2, 3);
    CHECK(verify_uniform_embedding(dbl, pairs).pass);
    auto x = Z2->parseElement("t1^2.t2^-1");
    CHECK(dbl.apply(x) == Z2->parseElement("t1^6.t2^-3"));

    CHECK_THROWS(UniformEmbedding::doubling(GroupSpec::freeGroup(2), 2));
    CHECK_THROWS(UniformEmbedding::doubling(Z2, 0));
}

TEST_CASE("zn to trees is an isometry on samples") {
    for (int n : {1, 2, 3}) {
        auto emb = UniformEmbedding::znToTrees(n);
        CHECK(emb.dst->family == GroupFamily::ProductOfTrees);
        auto pairs = samplePairs(emb.src, n == 3 ? 4 : 6, 7, 60);
        for (auto& [a, b] : pairs)
            CHECK(distance(emb.apply(a), emb.apply(b)) == distance(a, b));
        CHECK(verify_uniform_embedding(emb, pairs).pass);
    }
}

TEST_CASE("projection fixture fails with a lower-side witness") {
    auto emb = UniformEmbedding::projection(2, WitnessTable::linear(1), WitnessTable::linear(1));
    auto pairs = samplePairs(emb.src, 8, 42, 80);
    auto cert = verify_uniform_embedding(emb, pairs);
    REQUIRE(!cert.pass);
    CHECK(cert.counterexample.at("side") == "lower");
    auto x = emb.src->parseElement(cert.counterexample.at("x").get<std::string>());
    auto y = emb.src->parseElement(cert.counterexample.at("y").get<std::string>());
    CHECK(distance(emb.apply(x), emb.apply(y)) <
          cert.counterexample.at("source_distance").get<long long>());
}

TEST_CASE("degenerate witness tables are rejected up front") {
    auto Z2 = GroupSpec::freeAbelian(2);
    auto flat = WitnessTable::fromJson(nlohmann::json::parse("[[0,0],[10,0]]"));
    auto emb = UniformEmbedding::projection(2, flat, WitnessTable::linear(1));
    auto cert = verify_uniform_embedding(emb, samplePairs(Z2, 4, 1, 10));
    REQUIRE(!cert.pass);
    CHECK(cert.counterexample.at("note").get<std::string>().find("divergent") !=
          std::string::npos);
}

TEST_CASE("embedding preimage and json round trip") {
    auto emb = UniformEmbedding::znToTrees(2);
    auto T = MetricSubset::ofBall(emb.dst->identity(), 2);
    auto pre = emb.preimage(T, 5);
    // the preimage of a 2-ball under an isometry onto its image is the 2-ball
    auto expect = ballAtIdentity(emb.src, 2);
    std::sort(expect.begin(), expect.end());
    CHECK(pre == expect);

    auto j = emb.toJson();
    auto back = UniformEmbedding::fromJson(j);
    CHECK(back.kind == emb.kind);
    CHECK(back.src->name() == emb.src->name());
    CHECK(back.dst->name() == emb.dst->name());

    auto dbl = UniformEmbedding::fromJson(
        nlohmann::json{{"kind", "doubling"}, {"source", "Z^2"}, {"factor", 3}});
    CHECK(dbl.factor == 3);
    CHECK(dbl.name() == "doubling(3):Z^2");
    CHECK_THROWS(UniformEmbedding::fromJson(nlohmann::json{{"kind", "mystery"}}));
}
