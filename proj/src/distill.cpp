#include "nld/distill.hpp"

#include <json.hpp>
#include <limits>
#include <stdexcept>
#include <utility>

#include "nld/protocol.hpp"

namespace nld {

const char* stop_reason_name(StopReason r) {
    switch (r) {
        case StopReason::round_cap: return "round_cap";
        case StopReason::no_improvement: return "no_improvement";
        case StopReason::threshold_reached: return "threshold_reached";
    }
    return "unknown";
}

Architecture parse_architecture(const std::string& s) {
    if (s == "serial") return Architecture::serial;
    if (s == "parallel") return Architecture::parallel;
    if (s == "repeat") return Architecture::repeat;
    throw std::invalid_argument("unknown architecture: " + s);
}

const char* architecture_name(Architecture a) {
    switch (a) {
        case Architecture::serial: return "serial";
        case Architecture::parallel: return "parallel";
        case Architecture::repeat: return "repeat";
    }
    return "unknown";
}

namespace {

long copies_after(long base, size_t rounds, bool additive) {
    if (additive) return static_cast<long>(rounds) + 1;
    long c = 1;
    for (size_t i = 0; i < rounds; ++i) {
        if (c > std::numeric_limits<long>::max() / base)
            return std::numeric_limits<long>::max();  // saturate, never wraps
        c *= base;
    }
    return c;
}

// Common round loop. step(current, k) returns the candidate next box and its
// round record; a candidate that fails to improve is discarded unrecorded.
template <typename StepFn>
Transcript drive(const Box& initial, const AlgorithmConfig& cfg, long base,
                 bool additive, StepFn step) {
    Transcript t;
    t.initial_box = initial;
    t.initial_chsh = chsh(initial);
    t.final_box = initial;
    const double thresh = trivial_cc_threshold();
    if (cfg.stop_at_threshold && t.initial_chsh > thresh) {
        t.stop_reason = StopReason::threshold_reached;
        return t;
    }
    t.stop_reason = StopReason::round_cap;
    Box current = initial;
    double prev = t.initial_chsh;
    for (int k = 1; k <= cfg.max_rounds; ++k) {
        std::pair<Box, Round> next = step(current, k);
        if (next.second.chsh <= prev + cfg.improvement_tol) {
            t.stop_reason = StopReason::no_improvement;
            break;
        }
        current = next.first;
        prev = next.second.chsh;
        t.rounds.push_back(next.second);
        if (cfg.stop_at_threshold && prev > thresh) {
            t.stop_reason = StopReason::threshold_reached;
            break;
        }
    }
    t.final_box = current;
    t.copies_used = copies_after(base, t.rounds.size(), additive);
    return t;
}

std::pair<Box, Round> sweep_step(const Box& q1, const Box& q2, int k, int threads) {
    SweepResult s = sweep_two_copy(q1, q2, threads);
    Box next = s.vertex_alice
                   ? compose2(q1, q2, s.alice, s.bob)
                   : compose2_effects(q1, q2, s.alice_effects[0], s.alice_effects[1],
                                      catalog_effect(s.bob[0]), catalog_effect(s.bob[1]));
    Round r;
    r.k = k;
    r.chsh = chsh(next);
    r.alice = s.alice;
    r.bob = s.bob;
    r.lp_interior = !s.vertex_alice;
    return {next, r};
}

}  // namespace

Transcript serial_distill(const Box& initial, const AlgorithmConfig& cfg) {
    return drive(initial, cfg, 1, true, [&](const Box& current, int k) {
        return sweep_step(current, initial, k, cfg.threads);
    });
}

Transcript parallel_distill(const Box& initial, const AlgorithmConfig& cfg) {
    return drive(initial, cfg, 2, false, [&](const Box& current, int k) {
        return sweep_step(current, current, k, cfg.threads);
    });
}

Transcript fixed_repeat(const Box& initial, const std::string& protocol,
                        const AlgorithmConfig& cfg) {
    const int arity = protocol_arity(protocol);
    WiringPair alice{-1, -1}, bob{-1, -1};
    if (arity == 2) {
        NamedTwoCopy nt = named_two_copy(protocol);
        alice = nt.alice;
        bob = nt.bob;
    }
    return drive(initial, cfg, arity, false, [&](const Box& current, int k) {
        Round r;
        r.k = k;
        r.alice = alice;
        r.bob = bob;
        r.protocol = protocol;
        Box next = apply_named(current, protocol);
        r.chsh = chsh(next);
        return std::pair<Box, Round>{next, r};
    });
}

CertifyResult certify_trivial_cc(const Box& initial, Architecture arch,
                                 const std::string& protocol, AlgorithmConfig cfg) {
    cfg.stop_at_threshold = true;
    CertifyResult res;
    switch (arch) {
        case Architecture::serial:
            res.transcript = serial_distill(initial, cfg);
            break;
        case Architecture::parallel:
            res.transcript = parallel_distill(initial, cfg);
            break;
        case Architecture::repeat:
            res.transcript = fixed_repeat(initial, protocol, cfg);
            break;
    }
    res.trivial = res.transcript.stop_reason == StopReason::threshold_reached;
    return res;
}

std::string transcript_to_json(const Transcript& t, int indent) {
    nlohmann::ordered_json j;
    j["initial_chsh"] = t.initial_chsh;
    j["rounds"] = nlohmann::ordered_json::array();
    for (const Round& r : t.rounds) {
        nlohmann::ordered_json jr;
        jr["k"] = r.k;
        jr["chsh"] = r.chsh;
        if (r.lp_interior)
            jr["alice"] = "LP";
        else if (r.alice[0] > 0)
            jr["alice"] = {r.alice[0], r.alice[1]};
        else
            jr["alice"] = r.protocol;
        if (r.bob[0] > 0)
            jr["bob"] = {r.bob[0], r.bob[1]};
        else
            jr["bob"] = r.protocol;
        j["rounds"].push_back(jr);
    }
    j["stop_reason"] = stop_reason_name(t.stop_reason);
    j["copies_used"] = t.copies_used;
    return j.dump(indent);
}

}  // namespace nld
