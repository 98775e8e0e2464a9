#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "exactcat/suites.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace {

using namespace exactcat;
using doctest::Contains;
using nlohmann::json;

Hom hom_1x1(const FgAb& a, const FgAb& b, long v) {
    Mat m(1, 1);
    m.at(0, 0) = v;
    return Hom(a, b, m);
}

json matrix_entry(long v) {
    json m;
    m["rows"] = 1;
    m["cols"] = 1;
    m["matrix"] = json::array({json::array({std::to_string(v)})});
    return m;
}

}  // namespace

TEST_CASE("the suite registry is fixed and sorted") {
    const std::vector<std::string>& names = all_lemma_suites();
    REQUIRE(names.size() == 10);
    CHECK(std::is_sorted(names.begin(), names.end()));
    CHECK(std::find(names.begin(), names.end(), "five") != names.end());
    CHECK(std::find(names.begin(), names.end(), "cone-acyclic") != names.end());
}

TEST_CASE("every suite verifies on the certified structures") {
    for (const char* sn : {"split", "max"}) {
        ExactStructure s = structure_by_name(sn);
        for (const std::string& name : all_lemma_suites()) {
            SuiteReport r = run_lemma_suite(name, s, 8, 820);
            CHECK(r.pass);
            CHECK(r.samples_run >= 1);
            CHECK(r.suite == name);
            CHECK(r.structure == s.name);
            CHECK(r.seed == 820);
            if (!r.pass) MESSAGE(sn << " " << name << ": " << r.note);
        }
    }
}

TEST_CASE("suites run on the substructures their hypotheses admit") {
    ExactStructure ec = structure_by_name("ext-closed:torsion-free");
    for (const char* name : {"five", "double", "pushout-equiv", "section-decomp",
                             "cone-acyclic", "defl-sum"}) {
        SuiteReport r = run_lemma_suite(name, ec, 4, 821);
        CHECK(r.pass);
        if (!r.pass) MESSAGE(name << ": " << r.note);
    }
    ExactStructure ai = structure_by_name("all-isos");
    for (const char* name : {"five", "section-decomp", "cone-acyclic"}) {
        SuiteReport r = run_lemma_suite(name, ai, 4, 822);
        CHECK(r.pass);
        if (!r.pass) MESSAGE(name << ": " << r.note);
    }
    // missing hypotheses surface as exceptions, not failures
    ExactStructure isb = structure_by_name("isbell:2");
    CHECK_THROWS_WITH_AS(run_lemma_suite("defl-sum", isb, 2, 1),
                         Contains("right-side"), lemma_hypothesis);
    CHECK_THROWS_WITH_AS(run_lemma_suite("obscure", isb, 2, 1),
                         Contains("strongly"), lemma_hypothesis);
    CHECK_THROWS_WITH_AS(run_lemma_suite("pushout-equiv", ai, 2, 1),
                         Contains("not certified"), lemma_hypothesis);
}

TEST_CASE("unknown names and empty sample budgets are rejected") {
    ExactStructure sp = structure_by_name("split");
    CHECK_THROWS_WITH_AS(run_lemma_suite("bogus", sp, 4, 1), Contains("unknown lemma suite"),
                         parse_error);
    CHECK_THROWS_WITH_AS(run_lemma_suite("five", sp, 0, 1), Contains("positive"), parse_error);
    Witness w;
    w.structure = "split";
    w.axiom = "bogus";
    CHECK_THROWS_WITH_AS(replay_lemma_witness(w), Contains("unknown lemma suite"), parse_error);
}

TEST_CASE("witnesses replay to the recorded verdict after a json round trip") {
    ExactStructure mx = structure_by_name("max");
    FgAb z = FgAb::free(1);
    FgAb two = FgAb::cyclic(2);
    Hom i = hom_1x1(z, z, 2);
    Hom d = hom_1x1(z, two, 1);

    Witness five = make_witness(
        mx, "five", {i, d, i, d, identity_hom(z), identity_hom(z), identity_hom(two)}, "");
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(five))));

    Witness short_handed = five;
    short_handed.morphisms.resize(3);
    CHECK_THROWS_WITH_AS(replay_lemma_witness(short_handed), Contains("needs 7 morphisms"),
                         parse_error);

    Biproduct bi = biproduct(z, two);
    Witness section = make_witness(mx, "section-decomp", {bi.in1}, "");
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(section))));

    Biproduct bz = biproduct(z, z);
    Witness cancel = make_witness(mx, "obscure", {bz.in1, bz.pr1}, "projection probe");
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(cancel))));
    Hom f = hom_1x1(z, z, 1);
    Witness bracket =
        make_witness(mx, "obscure", {f, into_biproduct(bz, f, hom_1x1(z, z, 3))}, "[f; gf] probe");
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(bracket))));

    ContextPushout po = mx.context.pushout(i, hom_1x1(z, z, 3));
    Witness square = make_witness(
        mx, "pushout-equiv", {i, hom_1x1(z, z, 3), po.from_f_target, po.from_i_target}, "");
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(square))));

    Witness ds = make_witness(mx, "defl-sum", {hom_1x1(z, z, 5), d}, "");
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(ds))));

    Witness inj = make_witness(mx, "injective", {identity_hom(z)}, "");
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(inj))));
}

TEST_CASE("cone witnesses ride in the note as complex fixtures") {
    FgAb z = FgAb::free(1);
    FgAb two = FgAb::cyclic(2);
    ChainComplex res(0, {z, z, two}, {hom_1x1(z, z, 2), hom_1x1(z, two, 1)});
    json note;
    note["source"] = json::parse(complex_to_json(res));
    note["target"] = json::parse(complex_to_json(res));
    json comps = json::object();
    for (int n = 0; n <= 2; ++n) comps[std::to_string(n)] = matrix_entry(1);
    note["components"] = comps;
    Witness w;
    w.structure = "max";
    w.axiom = "cone-acyclic";
    w.note = note.dump();
    CHECK(!replay_lemma_witness(witness_from_json(witness_to_json(w))));

    SUBCASE("a non-acyclic endpoint is reported") {
        ChainComplex stalk = ChainComplex::concentrated(two, 0);
        json bad = note;
        bad["source"] = json::parse(complex_to_json(stalk));
        bad["target"] = json::parse(complex_to_json(stalk));
        bad["components"] = json::object();
        Witness wb = w;
        wb.note = bad.dump();
        auto why = replay_lemma_witness(wb);
        REQUIRE(why.has_value());
        CHECK(why->find("not acyclic") != std::string::npos);
    }

    SUBCASE("garbage notes are malformed input") {
        Witness wb = w;
        wb.note = "{";
        CHECK_THROWS_WITH_AS(replay_lemma_witness(wb), Contains("bad cone witness note"),
                             parse_error);
    }
}

TEST_CASE("a fabricated cancellation failure is reproduced on replay") {
    // In the order-4-free subcategory the projection composite Z -> Z can be
    // an inflation while the bracket into Z (+) Z/2 is not; the replay must
    // surface that instead of declaring the instance sound.
    ExactStructure isb = structure_by_name("isbell:2");
    FgAb z = FgAb::free(1);
    Biproduct bi = biproduct(z, FgAb::cyclic(2));
    Hom i = into_biproduct(bi, hom_1x1(z, z, 2), Hom(z, FgAb::cyclic(2), Mat{{1}}));
    REQUIRE(isb.is_inflation(compose(bi.pr1, i)));
    REQUIRE(!isb.is_inflation(i));
    Witness w = make_witness(isb, "obscure", {i, bi.pr1}, "projection probe");
    auto why = replay_lemma_witness(witness_from_json(witness_to_json(w)));
    REQUIRE(why.has_value());
    CHECK(why->find("projection composite") != std::string::npos);
}

TEST_CASE("suite runs are reproducible for a fixed seed") {
    ExactStructure mx = structure_by_name("max");
    SuiteReport a = run_lemma_suite("five", mx, 10, 77);
    SuiteReport b = run_lemma_suite("five", mx, 10, 77);
    CHECK(a.pass == b.pass);
    CHECK(a.samples_run == b.samples_run);
    CHECK(a.note == b.note);
}
