#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nld/box.hpp"

namespace nld {

// Zero-gain boundary curves of the named two-copy wirings on the parameter
// triangle, plus the two chords where neighbouring optimality cells meet.
// Names: FWW_I, ABL1_I on cross-section I; ABL2_II, ABL1_II on II;
// CHORD_I, CHORD_II are the equal-value loci of each pair.
struct BoundaryCurve {
    std::string name;
    CrossSection cs;
    double eta_min, eta_max;
};

const std::vector<std::string>& boundary_curve_names();
const BoundaryCurve& boundary_curve(const std::string& name);

// omega(eta) on the named curve; std::domain_error outside [eta_min, eta_max].
double boundary_omega(const std::string& name, double eta);

// Polynomial CHSH of the named two-copy wiring applied to two copies of a
// cross-section point. Defined for (FWW, I), (ABL1, I), (ABL2, II),
// (ABL1, II); anything else throws.
double closed_form_chsh(const std::string& protocol, CrossSection cs, double eta,
                        double omega);

// Largest residual over `samples` evenly spaced eta in the curve's domain:
// |closed form - (2 + 2 omega)| on the protocol curves, |cf_A - cf_B| on the
// chords. Analytically zero everywhere.
double zero_gain_residual(const std::string& curve, int samples = 100);

struct ScanRequest {
    CrossSection cs = CrossSection::I;
    int resolution = 201;                 // grid points per axis on [0, 1]
    std::vector<std::string> protocols;   // named protocols, "SWEEP2", "SERIAL"
    bool chsh2_col = false;
    int threads = 0;
    int serial_rounds = 1;                // round budget of a "SERIAL" column
};

struct ScanRow {
    double eta = 0.0, omega = 0.0;
    bool mask = false;   // eta + omega > 1: no box there, value cells are NaN
    double chsh_init = 0.0;
    std::vector<double> after;       // one entry per requested column
    std::vector<uint8_t> distill;    // after > chsh_init + DISTILL_TOL
    double chsh2_val = 0.0;
};

struct ScanResult {
    ScanRequest request;
    std::vector<ScanRow> rows;  // eta-major: row i*res + j is (i/(res-1), j/(res-1))
};

ScanResult scan_region(const ScanRequest& req);

// cs,eta,omega,mask,chsh_init,<name>_after,<name>_distill,...[,chsh2]
// with 12 significant digits on the numeric columns.
void write_scan_csv(const ScanResult& res, std::ostream& out);

}  // namespace nld
