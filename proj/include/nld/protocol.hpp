#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "nld/box.hpp"
#include "nld/wiring.hpp"

namespace nld {

// One party's deterministic adaptive wiring over n boxes (n <= 3 here).
// Step k of the query sequence picks a box and its input from the party
// input z and the outcomes observed so far; h packs those outcomes in query
// order, bit i = outcome at step i. The final output reads the full history.
struct NCopyWiring {
    int n = 0;
    uint8_t box_choice[2][3][4] = {};    // [z][step][h], h < 2^step
    uint8_t input_choice[2][3][4] = {};  // same indexing
    uint8_t output[2][8] = {};           // [z][h], h < 2^n

    // outcome-by-box and input-by-box for a given (z, history) path
    struct Path {
        int box_input[3];
        int box_outcome[3];
        int output;
    };
    Path trace(int z, int h) const;
};

// True iff every (z, history) path queries each box exactly once.
bool wiring_valid(const NCopyWiring& w);

// Exhaustive path sum: P(ab|xy) = sum over all joint outcome assignments of
// the product of per-box probabilities along both parties' adaptive paths.
Box apply_ncopy(const std::vector<Box>& boxes, const NCopyWiring& alice,
                const NCopyWiring& bob);

struct NamedProtocol {
    std::string name;
    int n = 3;
    NCopyWiring alice, bob;
};

// EQ2, EQ3, EQ4, HR built as explicit truth tables from their defining
// boolean functions (ascending query order on both sides).
const NamedProtocol& named_protocol(const std::string& name);

// 2 for FWW/ABL1/ABL2, 3 for EQ2/EQ3/EQ4/HR.
int protocol_arity(const std::string& name);
const std::vector<std::string>& protocol_names();

// A catalog label pair lifted to the generic n=2 representation.
NCopyWiring two_copy_wiring(WiringPair labels);

// Apply any named protocol (either arity) to identical copies of a box.
Box apply_named(const Box& b, const std::string& name);

// (chsh before, chsh after) for a protocol on copies of a cross-section point.
std::pair<double, double> protocol_gain(CrossSection cs, double eta, double omega,
                                        const std::string& name);

}  // namespace nld
