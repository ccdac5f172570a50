#pragma once

#include <array>
#include <string>
#include <vector>

#include "nld/box.hpp"
#include "nld/optimize.hpp"

namespace nld {

struct AlgorithmConfig {
    int max_rounds = 50;
    double improvement_tol = 1e-9;   // a round must beat the last by more than this
    bool stop_at_threshold = false;  // halt once CHSH exceeds the trivial-CC bound
    int threads = 0;                 // 0 = hardware concurrency
};

struct Round {
    int k = 0;       // 1-based round number
    double chsh = 0.0;
    std::array<int, 2> alice{-1, -1};  // catalog labels; -1 when the LP
    std::array<int, 2> bob{-1, -1};    // optimum sits off every vertex
    bool lp_interior = false;
    std::string protocol;  // set for fixed-repeat rounds driven by a named wiring
};

enum class StopReason { round_cap, no_improvement, threshold_reached };

const char* stop_reason_name(StopReason r);

struct Transcript {
    Box initial_box;
    double initial_chsh = 0.0;
    std::vector<Round> rounds;
    StopReason stop_reason = StopReason::round_cap;
    long copies_used = 1;
    Box final_box;
};

// Greedy serial scheme: each round wires the current box together with one
// fresh copy of the initial box through the best catalog pair found by the
// sweep, so round k consumes k + 1 copies in total.
Transcript serial_distill(const Box& initial, const AlgorithmConfig& cfg = {});

// Same greedy search, but both slots take the current box, doubling the
// number of underlying copies every round.
Transcript parallel_distill(const Box& initial, const AlgorithmConfig& cfg = {});

// Apply one named wiring to fresh copies of the current box every round,
// with no per-round search. Copies grow as arity^k.
Transcript fixed_repeat(const Box& initial, const std::string& protocol,
                        const AlgorithmConfig& cfg = {});

enum class Architecture { serial, parallel, repeat };

Architecture parse_architecture(const std::string& s);
const char* architecture_name(Architecture a);

struct CertifyResult {
    bool trivial = false;  // CHSH exceeded the collapse bound at some round
    Transcript transcript;
};

// Run the chosen scheme until CHSH strictly exceeds trivial_cc_threshold()
// or progress stops. protocol is only consulted for Architecture::repeat.
CertifyResult certify_trivial_cc(const Box& initial, Architecture arch,
                                 const std::string& protocol = "",
                                 AlgorithmConfig cfg = {});

std::string transcript_to_json(const Transcript& t, int indent = 2);

}  // namespace nld
