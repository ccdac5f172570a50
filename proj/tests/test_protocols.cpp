#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nld/box.hpp"
#include "nld/protocol.hpp"
#include "nld/wiring.hpp"

using namespace nld;

namespace {

double max_entry_diff(const Box& a, const Box& b) {
    double d = 0.0;
    for (int i = 0; i < 16; ++i) d = std::max(d, std::fabs(a.p[i] - b.p[i]));
    return d;
}

Box random_ns_box(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Box> parts;
    std::vector<double> w;
    double total = 0.0;
    for (int i = 1; i <= 16; ++i) {
        auto d = local_decode(i);
        parts.push_back(local_extremal(d[0], d[1], d[2], d[3]));
        w.push_back(u(rng));
        total += w.back();
    }
    for (int i = 1; i <= 8; ++i) {
        auto d = nonlocal_decode(i);
        parts.push_back(nonlocal_extremal(d[0], d[1], d[2]));
        w.push_back(u(rng));
        total += w.back();
    }
    for (double& x : w) x /= total;
    return mix(parts, w);
}

}  // namespace

TEST_CASE("named protocol registry") {
    CHECK(protocol_names() ==
          std::vector<std::string>{"FWW", "ABL1", "ABL2", "EQ2", "EQ3", "EQ4", "HR"});
    CHECK(protocol_arity("FWW") == 2);
    CHECK(protocol_arity("ABL1") == 2);
    CHECK(protocol_arity("ABL2") == 2);
    for (const char* n : {"EQ2", "EQ3", "EQ4", "HR"}) CHECK(protocol_arity(n) == 3);
    CHECK_THROWS(protocol_arity("EQ5"));
    CHECK_THROWS(named_protocol("FWW"));  // 2-copy wirings live in the label table
}

TEST_CASE("three-copy wirings are valid and query ascending") {
    for (const char* n : {"EQ2", "EQ3", "EQ4", "HR"}) {
        const NamedProtocol& p = named_protocol(n);
        CHECK(p.n == 3);
        CHECK(wiring_valid(p.alice));
        CHECK(wiring_valid(p.bob));
        for (int z = 0; z < 2; ++z)
            for (int k = 0; k < 3; ++k)
                for (int h = 0; h < (1 << k); ++h) {
                    CHECK(p.alice.box_choice[z][k][h] == k);
                    CHECK(p.bob.box_choice[z][k][h] == k);
                }
    }
}

TEST_CASE("pinned truth-table entries") {
    // EQ4 Bob's third query at y = 0 with b1 = 0 is input 1 regardless of b2
    const NamedProtocol& eq4 = named_protocol("EQ4");
    CHECK(eq4.bob.input_choice[0][2][0] == 1);  // (b2,b1) = (0,0)
    CHECK(eq4.bob.input_choice[0][2][2] == 1);  // (b2,b1) = (1,0)
    // HR Alice's second query is x xor a1
    const NamedProtocol& hr = named_protocol("HR");
    for (int x = 0; x < 2; ++x)
        for (int a1 = 0; a1 < 2; ++a1) CHECK(hr.alice.input_choice[x][1][a1] == (x ^ a1));
    // EQ2 Alice's second query is x xor a1 xor 1
    const NamedProtocol& eq2 = named_protocol("EQ2");
    for (int x = 0; x < 2; ++x)
        for (int a1 = 0; a1 < 2; ++a1)
            CHECK(eq2.alice.input_choice[x][1][a1] == (x ^ a1 ^ 1));
}

TEST_CASE("protocol values on three PR boxes") {
    Box pr = pr_box();
    CHECK(chsh(apply_named(pr, "EQ2")) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(chsh(apply_named(pr, "EQ3")) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(chsh(apply_named(pr, "EQ4")) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(chsh(apply_named(pr, "HR")) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("protocol values on three reference mixture boxes are exact dyadics") {
    Box po = po_box();
    CHECK(chsh(apply_named(po, "EQ2")) == doctest::Approx(31.0 / 32).epsilon(1e-12));
    CHECK(chsh(apply_named(po, "EQ3")) == doctest::Approx(23.0 / 16).epsilon(1e-12));
    CHECK(chsh(apply_named(po, "EQ4")) == doctest::Approx(17.0 / 16).epsilon(1e-12));
    CHECK(chsh(apply_named(po, "HR")) == doctest::Approx(51.0 / 64).epsilon(1e-12));
}

TEST_CASE("EQ3 collapses the all-zeros local box to a = 1, b = not y") {
    Box z = local_extremal(0, 0, 0, 0);
    Box c = apply_named(z, "EQ3");
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(c.at(1, 1 - y, x, y) == doctest::Approx(1.0));
    CHECK(chsh(c) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("protocol outputs are valid no-signalling boxes") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 8; ++trial) {
        Box b = random_ns_box(rng);
        for (const std::string& n : protocol_names()) {
            ValidationReport r = validate(apply_named(b, n));
            CHECK(r.ok());
            CHECK(r.worst <= 1e-12);
        }
    }
}

TEST_CASE("two-stage structure of the 3-copy parity protocol") {
    // EQ2 on (P, P, P) composes the stage-one pair wiring on (P, P) and the
    // stage-two pair wiring on (stage-one result, P)
    for (Box p : {cs_point(CrossSection::II, 0.3, 0.5), cs_point(CrossSection::I, 0.2, 0.6),
                  po_box()}) {
        Box stage1 = compose2(p, p, {57, 61}, {11, 61});
        Box nested = compose2(stage1, p, {11, 65}, {53, 65});
        Box direct = apply_named(p, "EQ2");
        CHECK(max_entry_diff(nested, direct) <= 1e-12);
    }
}

TEST_CASE("generic two-copy representation agrees with direct composition") {
    Box q1 = cs_point(CrossSection::I, 0.25, 0.45);
    Box q2 = cs_point(CrossSection::II, 0.4, 0.3);
    for (int l = 1; l <= CATALOG_SIZE; ++l) {
        NCopyWiring w = two_copy_wiring({l, l});
        CHECK(wiring_valid(w));
        Box via_ncopy = apply_ncopy({q1, q2}, w, w);
        Box via_pairs = compose2(q1, q2, {l, l}, {l, l});
        CHECK(max_entry_diff(via_ncopy, via_pairs) <= 1e-12);
    }
    // mixed label pairs across the parties
    NCopyWiring a = two_copy_wiring({58, 62});
    NCopyWiring b = two_copy_wiring({12, 62});
    CHECK(max_entry_diff(apply_ncopy({q1, q2}, a, b), compose2(q1, q2, {58, 62}, {12, 62})) <=
          1e-12);
}

TEST_CASE("local inputs stay local through every named protocol") {
    for (int i = 1; i <= 16; ++i) {
        auto d = local_decode(i);
        Box l = local_extremal(d[0], d[1], d[2], d[3]);
        for (const std::string& n : protocol_names())
            CHECK(chsh(apply_named(l, n)) <= 2.0 + 1e-12);
    }
}

TEST_CASE("apply_ncopy rejects malformed inputs") {
    const NamedProtocol& p = named_protocol("HR");
    Box pr = pr_box();
    CHECK_THROWS(apply_ncopy({pr, pr}, p.alice, p.bob));  // wrong copy count
    NCopyWiring broken = p.alice;
    broken.box_choice[0][1][0] = 0;  // revisits box 0 on one path
    CHECK_FALSE(wiring_valid(broken));
    CHECK_THROWS(apply_ncopy({pr, pr, pr}, broken, p.bob));
}

TEST_CASE("protocol gain helper") {
    auto [before, after] = protocol_gain(CrossSection::I, 0.0, 1.0, "EQ3");
    CHECK(before == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(after == doctest::Approx(4.0).epsilon(1e-12));
    auto [b2, a2] = protocol_gain(CrossSection::II, 0.3, 0.5, "EQ2");
    CHECK(b2 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(a2 == doctest::Approx(3.021).epsilon(1e-12));
}
