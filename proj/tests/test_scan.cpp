#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "nld/box.hpp"
#include "nld/protocol.hpp"
#include "nld/scan.hpp"
#include "nld/wiring.hpp"

using namespace nld;

TEST_CASE("boundary curves hit their endpoint anchors") {
    CHECK(boundary_omega("FWW_I", 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(boundary_omega("ABL1_I", 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(boundary_omega("CHORD_I", 2.0 / 3.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-9));
    CHECK(boundary_omega("ABL2_II", 1.0 / 3.0) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    CHECK(boundary_omega("ABL1_II", 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(boundary_omega("CHORD_II", 1.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(boundary_curve("CHORD_II").eta_min ==
          doctest::Approx((9.0 + std::sqrt(6.0)) / 25.0).epsilon(1e-12));
    CHECK(boundary_curve_names().size() == 6);
}

TEST_CASE("boundary curves respect their domains") {
    CHECK_THROWS_AS(boundary_omega("FWW_I", 0.3), std::domain_error);
    CHECK_THROWS_AS(boundary_omega("ABL2_II", 0.2), std::domain_error);
    CHECK_THROWS_AS(boundary_omega("NOPE", 0.5), std::invalid_argument);
    // endpoints themselves are fine
    CHECK_NOTHROW(boundary_omega("FWW_I", 1.0));
    CHECK_NOTHROW(boundary_omega("ABL1_II", 1.0));
}

TEST_CASE("closed forms match their pinned values") {
    CHECK(std::fabs(closed_form_chsh("FWW", CrossSection::I, 0.888, 0.1) -
                    2.352584) <= 1e-9);
    CHECK(closed_form_chsh("ABL1", CrossSection::I, 0.0, 1.0) ==
          doctest::Approx(4.0).epsilon(1e-12));
    // the two pair curves on the first cross-section cross at this point
    CHECK(closed_form_chsh("FWW", CrossSection::I, 2.0 / 3.0, 1.0 / 3.0) ==
          doctest::Approx(26.0 / 9.0).epsilon(1e-12));
    CHECK(closed_form_chsh("ABL1", CrossSection::I, 2.0 / 3.0, 1.0 / 3.0) ==
          doctest::Approx(26.0 / 9.0).epsilon(1e-12));
    CHECK(closed_form_chsh("ABL2", CrossSection::II, 1.0 / 3.0, 2.0 / 3.0) ==
          doctest::Approx(10.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(closed_form_chsh("ABL2", CrossSection::I, 0.5, 0.2),
                    std::invalid_argument);
    CHECK_THROWS_AS(closed_form_chsh("FWW", CrossSection::III, 0.5, 0.2),
                    std::invalid_argument);
}

TEST_CASE("closed forms agree with actual composition on a grid") {
    NamedTwoCopy fww = named_two_copy("FWW");
    NamedTwoCopy abl2 = named_two_copy("ABL2");
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; i + j <= 10; ++j) {
            double eta = i / 10.0, omega = j / 10.0;
            Box p1 = cs_point(CrossSection::I, eta, omega);
            CHECK(std::fabs(closed_form_chsh("FWW", CrossSection::I, eta, omega) -
                            chsh(compose2(p1, p1, fww.alice, fww.bob))) <= 1e-12);
            Box p2 = cs_point(CrossSection::II, eta, omega);
            CHECK(std::fabs(closed_form_chsh("ABL2", CrossSection::II, eta, omega) -
                            chsh(compose2(p2, p2, abl2.alice, abl2.bob))) <= 1e-12);
        }
    }
}

TEST_CASE("zero-gain residuals vanish along every boundary") {
    for (const auto& name : {"FWW_I", "ABL1_I", "ABL2_II", "ABL1_II"})
        CHECK(zero_gain_residual(name, 100) <= 1e-9);
    // chords are loci where the two wiring curves of a cross-section agree
    CHECK(zero_gain_residual("CHORD_I", 100) <= 1e-12);
    CHECK(zero_gain_residual("CHORD_II", 100) <= 1e-12);
}

TEST_CASE("region scans fill the triangle and flag gains") {
    ScanRequest req;
    req.cs = CrossSection::II;
    req.resolution = 5;
    req.protocols = {"EQ2", "HR"};
    req.chsh2_col = true;
    req.threads = 1;
    ScanResult res = scan_region(req);
    REQUIRE(res.rows.size() == 25);

    int masked = 0;
    for (const auto& row : res.rows) {
        if (row.mask) {
            ++masked;
            CHECK(std::isnan(row.after[0]));
            CHECK(row.distill[0] == 0);
            continue;
        }
        CHECK(row.chsh_init ==
              doctest::Approx(2.0 + 2.0 * row.omega).epsilon(1e-12));
        CHECK(row.chsh2_val == doctest::Approx(2.0 * row.eta).epsilon(1e-12));
        // at most one round of a fixed protocol: gain implies the flag
        for (size_t p = 0; p < 2; ++p)
            CHECK(row.distill[p] ==
                  (row.after[p] > row.chsh_init + 1e-9 ? 1 : 0));
        // HR's gain region on this slice sits inside EQ2's
        if (row.distill[1]) CHECK(row.distill[0] == 1);
    }
    CHECK(masked == 10);  // eta + omega > 1 corners of a 5x5 grid

    // row order is eta-major
    CHECK(res.rows[0].eta == doctest::Approx(0.0));
    CHECK(res.rows[0].omega == doctest::Approx(0.0));
    CHECK(res.rows[1].omega == doctest::Approx(0.25));
    CHECK(res.rows[5].eta == doctest::Approx(0.25));

    // spot value: EQ2 applied once at (0.3, 0.5)
    Box p = cs_point(CrossSection::II, 0.3, 0.5);
    double want = chsh(apply_named(p, "EQ2"));
    ScanRequest spot;
    spot.cs = CrossSection::II;
    spot.resolution = 11;
    spot.protocols = {"EQ2"};
    spot.threads = 1;
    ScanResult sr = scan_region(spot);
    const ScanRow& row = sr.rows[3 * 11 + 5];  // eta 0.3, omega 0.5
    CHECK(row.eta == doctest::Approx(0.3));
    CHECK(row.omega == doctest::Approx(0.5));
    CHECK(std::fabs(row.after[0] - want) <= 1e-12);
    CHECK(row.distill[0] == 1);
}

TEST_CASE("scan CSV has the documented header and row count") {
    ScanRequest req;
    req.cs = CrossSection::I;
    req.resolution = 3;
    req.protocols = {"FWW"};
    req.chsh2_col = true;
    req.threads = 1;
    ScanResult res = scan_region(req);
    std::ostringstream buf;
    write_scan_csv(res, buf);
    std::istringstream in(buf.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "cs,eta,omega,mask,chsh_init,FWW_after,FWW_distill,chsh2");
    int lines = 0;
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) ++lines;
    CHECK(lines == 9);
}

TEST_CASE("scan supports sweep and serial pseudo-protocols") {
    ScanRequest req;
    req.cs = CrossSection::I;
    req.resolution = 3;
    req.protocols = {"SWEEP2", "SERIAL"};
    req.serial_rounds = 1;
    req.threads = 1;
    ScanResult res = scan_region(req);
    for (const auto& row : res.rows) {
        if (row.mask) continue;
        // one serial round is exactly one sweep, floored at the input value
        double want = std::max(row.after[0], row.chsh_init);
        CHECK(std::fabs(row.after[1] - want) <= 1e-9);
    }
}

TEST_CASE("scan rejects bad requests") {
    ScanRequest req;
    req.cs = CrossSection::I;
    req.protocols = {"NOT_A_PROTOCOL"};
    CHECK_THROWS_AS(scan_region(req), std::invalid_argument);
    req.protocols = {"HR"};
    req.resolution = 1;
    CHECK_THROWS_AS(scan_region(req), std::invalid_argument);
}
