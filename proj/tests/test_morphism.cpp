#include <doctest.h>

#include "coarsemod/morphism.hpp"

using namespace coarsemod;

namespace {

GroupRingMatrix mat1(const GroupPtr& G, const Ring& R, const char* entry) {
    GroupRingMatrix m(G, R, 1, 1);
    m.at(0, 0) = GroupRingElement::parse(G, R, entry);
    return m;
}

FilteredMorphism scalarMorphism(const GroupPtr& G, const Ring& R, const char* entry) {
    auto M = standard_filtration(PresentedModule::freeModule(G, R, 1));
    return FilteredMorphism(M, M, mat1(G, R, entry));
}

}  // namespace

TEST_CASE("bound_of measures the support shift") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();
    auto plan = SamplingPlan::forWindow(12, 0, 9);

    auto M = standard_filtration(PresentedModule::freeModule(Z, ZZ, 1));
    auto id = FilteredMorphism::identityOn(M);
    auto cid = bound_of(id, 12, plan);
    CHECK(cid.pass);
    CHECK(cid.kind == "bounded");
    CHECK(cid.constant == 0);

    auto ct = bound_of(scalarMorphism(Z, ZZ, "t - 1"), 12, plan);
    CHECK(ct.pass);
    CHECK(ct.constant == 1);

    auto c5 = bound_of(scalarMorphism(Z, ZZ, "t^5"), 12, plan);
    CHECK(c5.pass);
    CHECK(c5.constant == 5);

    auto czero = bound_of(scalarMorphism(Z, ZZ, "0"), 12, plan);
    CHECK(czero.pass);
    CHECK(czero.constant == 0);
}

TEST_CASE("multiplication by t - 1 is bounded but not bicontrolled") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();
    auto phi = scalarMorphism(Z, ZZ, "t - 1");
    const int window = 12;
    auto plan = SamplingPlan::forWindow(window, 1, 3);

    for (int b = 0; b <= 4; ++b) {
        CAPTURE(b);
        auto cert = check_bicontrolled(phi, b, window, plan);
        REQUIRE(!cert.pass);
        CHECK(cert.kind == "bicontrolled");
        CHECK(cert.constant == b);

        // replay: the witness sits in im(phi) cap F'(S) but needs a
        // geometric-sum preimage supported across the whole gap
        auto S = MetricSubset::fromJson(Z, cert.counterexample.at("S"));
        auto FS = phi.target->evaluate(S, window);
        auto wide = phi.source->evaluate(S.enlarged(b), window);
        std::vector<FreeVec> imgs;
        for (const auto& g : wide.gens) imgs.push_back(phi.apply(g));
        WindowSubmodule rhs(Z, ZZ, window, imgs, phi.target->context(window));
        bool witnessOutside = false;
        for (const auto& g : FS.gens)
            if (!rhs.member(g)) witnessOutside = true;
        // F'(S) itself already contains vectors the enlarged image misses
        CHECK(witnessOutside);
    }
}

TEST_CASE("idempotents are bicontrolled at their measured bound") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();
    auto free2 = standard_filtration(PresentedModule::freeModule(Z, ZZ, 2));
    auto plan = SamplingPlan::forWindow(10, 2, 17);

    GroupRingMatrix proj(Z, ZZ, 2, 2);
    proj.at(0, 0) = GroupRingElement::parse(Z, ZZ, "1");
    REQUIRE(proj.isIdempotent());
    FilteredMorphism p(free2, free2, proj);
    auto bp = bound_of(p, 10, plan);
    CHECK(bp.pass);
    CHECK(bp.constant == 0);
    CHECK(check_bicontrolled(p, 0, 10, plan).pass);

    GroupRingMatrix e(Z, ZZ, 2, 2);
    e.at(0, 0) = GroupRingElement::parse(Z, ZZ, "1");
    e.at(0, 1) = GroupRingElement::parse(Z, ZZ, "t");
    REQUIRE(e.isIdempotent());
    FilteredMorphism phi(free2, free2, e);
    auto be = bound_of(phi, 10, plan);
    CHECK(be.pass);
    CHECK(be.constant == 1);
    auto cert = check_bicontrolled(phi, (int)be.constant, 10, plan);
    CHECK(cert.pass);
    CHECK(cert.details.at("imageRadius").get<int>() > 0);
}

TEST_CASE("classification separates mono, epi, iso and neither") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();
    auto free1 = standard_filtration(PresentedModule::freeModule(Z, ZZ, 1));
    auto free2 = standard_filtration(PresentedModule::freeModule(Z, ZZ, 2));
    const int window = 10;
    auto plan = SamplingPlan::forWindow(window, 1, 5);

    auto id = classify_morphism(FilteredMorphism::identityOn(free1), window, plan);
    CHECK(id.verdict == MorphismClass::Both);
    CHECK(id.injective);
    CHECK(id.surjective);
    CHECK(id.bound.constant == 0);
    CHECK(id.bicontrol.pass);

    auto tm1 = classify_morphism(scalarMorphism(Z, ZZ, "t - 1"), window, plan);
    CHECK(tm1.verdict == MorphismClass::Neither);
    CHECK(tm1.injective);       // no window kernel
    CHECK(!tm1.bicontrol.pass);  // the geometric-sum obstruction

    GroupRingMatrix projM(Z, ZZ, 2, 1);
    projM.at(0, 0) = GroupRingElement::parse(Z, ZZ, "1");
    auto proj = classify_morphism(FilteredMorphism(free2, free1, projM), window, plan);
    CHECK(proj.verdict == MorphismClass::AdmissibleEpi);
    CHECK(!proj.injective);
    CHECK(proj.surjective);
    CHECK(proj.bound.constant == 0);
    CHECK(proj.details.at("enlargement").get<int>() == 0);

    GroupRingMatrix inclM(Z, ZZ, 1, 2);
    inclM.at(0, 0) = GroupRingElement::parse(Z, ZZ, "1");
    auto incl = classify_morphism(FilteredMorphism(free1, free2, inclM), window, plan);
    CHECK(incl.verdict == MorphismClass::AdmissibleMono);
    CHECK(incl.injective);
    CHECK(!incl.surjective);

    // multiplication by 2 on the mod-4 scalars: 2*2 = 0 gives a window kernel
    Ring Z4 = Ring::integersMod(4);
    auto m4 = standard_filtration(PresentedModule::freeModule(Z, Z4, 1));
    auto twice = classify_morphism(FilteredMorphism(m4, m4, mat1(Z, Z4, "2")), window, plan);
    CHECK(!twice.injective);
    CHECK(!twice.surjective);
    CHECK(twice.verdict == MorphismClass::Neither);
}

TEST_CASE("generator bound dominates every measured bound") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();

    CHECK(generator_bound(FilteredMorphism::identityOn(
              standard_filtration(PresentedModule::freeModule(Z, ZZ, 1)))) == 0);
    CHECK(generator_bound(scalarMorphism(Z, ZZ, "t - 1")) == 1);
    CHECK(generator_bound(scalarMorphism(Z, ZZ, "t^3 + t^-3")) == 3);

    const char* entries[] = {"t^2 - t^-1", "3*t", "1 + t + t^2", "t^-4", "5"};
    for (auto s : entries) {
        CAPTURE(s);
        auto phi = scalarMorphism(Z, ZZ, s);
        int gb = generator_bound(phi);
        for (int w : {8, 10, 12}) {
            auto cert = bound_of(phi, w, SamplingPlan::forWindow(w, phi.shift(), 11));
            REQUIRE(cert.pass);
            CHECK(gb >= cert.constant);
        }
    }

    auto push = FilteredModule::pushforward(
        standard_filtration(PresentedModule::freeModule(Z, ZZ, 1)),
        UniformEmbedding::doubling(Z, 2));
    CHECK_THROWS_AS(generator_bound(FilteredMorphism::identityOn(push)), std::invalid_argument);
}

TEST_CASE("equivariance holds for group-ring maps and fails for perturbations") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();
    const int window = 10;
    auto plan = SamplingPlan::forWindow(window, 0, 23);

    auto M = standard_filtration(PresentedModule::freeModule(Z, ZZ, 1));
    CHECK(check_equivariance(FilteredMorphism::identityOn(M), window, plan).pass);
    CHECK(check_equivariance(scalarMorphism(Z, ZZ, "t^2 - 3"), window, plan).pass);

    // quotient targets only need equality modulo the relations
    GroupRingMatrix rel(Z, ZZ, 1, 1);
    rel.at(0, 0) = GroupRingElement::parse(Z, ZZ, "t - 1");
    auto T = standard_filtration(PresentedModule::quotient(rel));
    CHECK(check_equivariance(FilteredMorphism(M, T, mat1(Z, ZZ, "1")), window, plan).pass);

    auto bad = FilteredMorphism::identityOn(M);
    bad.overrideCoord(Coord{Z->identity(), 0},
                      svAdd(ZZ, FreeVec{{Coord{Z->identity(), 0}, ZZ.one()}},
                            FreeVec{{Coord{Z->parseElement("t^3"), 0}, ZZ.one()}}));
    CHECK(!bad.equivariant);
    auto cert = check_equivariance(bad, window, plan);
    REQUIRE(!cert.pass);
    CHECK(cert.kind == "equivariant");
    auto gamma = cert.counterexample.at("gamma").get<std::string>();
    CHECK(gamma != "e");
    CHECK(!cert.counterexample.at("difference").get<std::string>().empty());
}

TEST_CASE("geometric morphisms compose blockwise") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();

    std::vector<std::pair<GroupElement, int>> pts;
    for (int k = -3; k <= 3; ++k) pts.emplace_back(Z->parseElement("t^" + std::to_string(k)), 1);
    auto M = GeometricModule::of(Z, ZZ, pts);
    CHECK(M.rankAt(Z->identity()) == 1);
    CHECK(M.rankAt(Z->parseElement("t^9")) == 0);

    auto shiftBy = [&](int step) {
        GeometricMorphism m{M, M, 1, {}};
        for (int k = -3; k <= 3; ++k) {
            if (k + step < -3 || k + step > 3) continue;
            m.setBlock(Z->parseElement("t^" + std::to_string(k)),
                       Z->parseElement("t^" + std::to_string(k + step)), {{ZZ.one()}});
        }
        return m;
    };

    auto up = shiftBy(1);
    CHECK(up.validate());
    CHECK(up.measuredBound() == 1);

    auto id = GeometricMorphism::identityOn(M);
    CHECK(compose_geometric(id, up).sameBlocks(up));
    CHECK(compose_geometric(up, id).sameBlocks(up));
    CHECK(compose_geometric(id, up).declaredBound == 1);

    auto upTwice = compose_geometric(up, up);
    CHECK(upTwice.declaredBound == 2);
    CHECK(upTwice.measuredBound() == 2);
    CHECK(upTwice.blockAt(Z->identity(), Z->parseElement("t^2")) == ScalarBlock{{ZZ.one()}});
    CHECK(upTwice.validate());

    // declared bounds only add; cancellation drops the measured bound to 0
    auto down = shiftBy(-1);
    auto roundTrip = compose_geometric(down, up);
    CHECK(roundTrip.declaredBound == 2);
    CHECK(roundTrip.measuredBound() == 0);
    CHECK(roundTrip.blockAt(Z->identity(), Z->identity()) == ScalarBlock{{ZZ.one()}});
    CHECK(roundTrip.blockAt(Z->identity(), Z->parseElement("t^2")) == ScalarBlock{{ZZ.zero()}});
    CHECK(roundTrip.validate());

    auto other = GeometricModule::of(Z, ZZ, {{Z->identity(), 2}});
    CHECK_THROWS_AS(compose_geometric(GeometricMorphism::identityOn(other), up),
                    std::invalid_argument);
}

TEST_CASE("morphism JSON carries the matrix and the equivariance flag") {
    auto Z = GroupSpec::freeAbelian(1);
    Ring ZZ = Ring::integers();
    auto phi = scalarMorphism(Z, ZZ, "t^2 - 1");
    auto j = phi.toJson();
    CHECK(j.at("equivariant").get<bool>());

    auto back = FilteredMorphism::fromJson(phi.source, phi.target, j);
    CHECK(back.action == phi.action);
    CHECK(back.equivariant);

    // shape violations are rejected up front
    auto free2 = standard_filtration(PresentedModule::freeModule(Z, ZZ, 2));
    CHECK_THROWS_AS(FilteredMorphism(phi.source, free2, phi.action), std::invalid_argument);
}
