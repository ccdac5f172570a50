#pragma once
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace nld {

// Bipartite 2-input/2-output conditional distribution P(ab|xy).
// Flat storage, index bits packed as a,b,x,y from high to low.
struct Box {
    std::array<double, 16> p{};

    static constexpr int idx(int a, int b, int x, int y) {
        return a << 3 | b << 2 | x << 1 | y;
    }
    double& at(int a, int b, int x, int y) { return p[idx(a, b, x, y)]; }
    double at(int a, int b, int x, int y) const { return p[idx(a, b, x, y)]; }
};

inline constexpr double EPS_PROB = 1e-9;   // box validity tolerance
inline constexpr double RENORM_DRIFT = 1e-12;

// CHSH score above which shared boxes collapse communication complexity.
double trivial_cc_threshold();

// Deterministic box a = mu*x xor nu, b = sigma*y xor tau; 1-based index
// 1 + tau + 2*sigma + 4*nu + 8*mu.
Box local_extremal(int mu, int nu, int sigma, int tau);
int local_index(int mu, int nu, int sigma, int tau);
std::array<int, 4> local_decode(int index);

// Nonlocal vertex a xor b = xy xor mu*x xor nu*y xor sigma with uniform
// marginals; 1-based index 1 + sigma + 2*nu + 4*mu. Index 1 is the PR box.
Box nonlocal_extremal(int mu, int nu, int sigma);
int nonlocal_index(int mu, int nu, int sigma);
std::array<int, 3> nonlocal_decode(int index);

Box pr_box();
Box po_box();  // 3/4 PR + 1/4 its sigma-complement; CHSH 2

double correlator(const Box& b, int x, int y);  // E_xy = P(a=b|xy) - P(a!=b|xy)
double chsh(const Box& b);    // E00 + E01 + E10 - E11
double chsh2(const Box& b);   // E00 - E01 + E10 + E11 (plot coordinate)

Box mix(const std::vector<Box>& boxes, const std::vector<double>& weights);

enum class CrossSection { I, II, III };
CrossSection parse_cross_section(const std::string& s);
std::string cross_section_name(CrossSection cs);

// Two-parameter slices omega*PR + eta*(local part) + (1-omega-eta)*PO.
// All three satisfy chsh(cs_point(..)) == 2 + 2*omega.
Box cs_point(CrossSection cs, double eta, double omega);

struct ValidationReport {
    bool positivity = true;
    bool normalization = true;
    bool no_signalling_alice = true;  // Alice marginal independent of y
    bool no_signalling_bob = true;    // Bob marginal independent of x
    double worst = 0.0;               // largest violation magnitude seen
    bool ok() const {
        return positivity && normalization && no_signalling_alice && no_signalling_bob;
    }
};
ValidationReport validate(const Box& b);

// Rescale each (x,y) block to sum 1, but only when accumulated float dust
// exceeds RENORM_DRIFT; exact-by-construction boxes pass through untouched.
Box renormalize_if_drifted(Box b);

// JSON {"p": 4x4 rows, "order": "xy-ab"}; row 2x+y, column 2a+b,
// 17 significant digits.
std::string box_to_json(const Box& b);
Box box_from_json(const std::string& text);

}  // namespace nld
