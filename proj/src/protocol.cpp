#include "nld/protocol.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace nld {

NCopyWiring::Path NCopyWiring::trace(int z, int h) const {
    Path p{};
    for (int k = 0; k < n; ++k) {
        int seen = h & ((1 << k) - 1);
        int j = box_choice[z][k][seen];
        p.box_input[j] = input_choice[z][k][seen];
        p.box_outcome[j] = h >> k & 1;
    }
    p.output = output[z][h];
    return p;
}

bool wiring_valid(const NCopyWiring& w) {
    if (w.n < 1 || w.n > 3) return false;
    for (int z = 0; z < 2; ++z)
        for (int h = 0; h < (1 << w.n); ++h) {
            int visited = 0;
            for (int k = 0; k < w.n; ++k) {
                int j = w.box_choice[z][k][h & ((1 << k) - 1)];
                if (j >= w.n || (visited >> j & 1)) return false;
                visited |= 1 << j;
            }
        }
    return true;
}

Box apply_ncopy(const std::vector<Box>& boxes, const NCopyWiring& alice,
                const NCopyWiring& bob) {
    const int n = alice.n;
    if (bob.n != n || static_cast<int>(boxes.size()) != n)
        throw std::invalid_argument("apply_ncopy: copy count mismatch");
    if (!wiring_valid(alice) || !wiring_valid(bob))
        throw std::invalid_argument("apply_ncopy: wiring does not visit each box once");
    Box out;
    const int paths = 1 << n;
    for (int x = 0; x < 2; ++x) {
        NCopyWiring::Path ap[8];
        for (int ha = 0; ha < paths; ++ha) ap[ha] = alice.trace(x, ha);
        for (int y = 0; y < 2; ++y)
            for (int hb = 0; hb < paths; ++hb) {
                NCopyWiring::Path bp = bob.trace(y, hb);
                for (int ha = 0; ha < paths; ++ha) {
                    double p = 1.0;
                    for (int i = 0; i < n; ++i)
                        p *= boxes[i].at(ap[ha].box_outcome[i], bp.box_outcome[i],
                                         ap[ha].box_input[i], bp.box_input[i]);
                    if (p != 0.0) out.at(ap[ha].output, bp.output, x, y) += p;
                }
            }
    }
    return renormalize_if_drifted(out);
}

namespace {

// Fills a fixed-order (box k at step k) 3-copy wiring from boolean functions
// of the party input and the outcomes of boxes 1..k.
NCopyWiring three_copy(const std::function<int(int)>& f1,
                       const std::function<int(int, int)>& f2,
                       const std::function<int(int, int, int)>& f3,
                       const std::function<int(int, int, int, int)>& fo) {
    NCopyWiring w;
    w.n = 3;
    for (int z = 0; z < 2; ++z) {
        for (int k = 0; k < 3; ++k)
            for (int h = 0; h < (1 << k); ++h) w.box_choice[z][k][h] = k;
        for (int h = 0; h < 4; ++h) {
            int o1 = h & 1, o2 = h >> 1 & 1;
            w.input_choice[z][0][0] = f1(z);
            w.input_choice[z][1][h & 1] = f2(z, o1);
            w.input_choice[z][2][h] = f3(z, o1, o2);
        }
        for (int h = 0; h < 8; ++h)
            w.output[z][h] = fo(z, h & 1, h >> 1 & 1, h >> 2 & 1);
    }
    return w;
}

int NOT(int v) { return v ^ 1; }

NamedProtocol build_named(const std::string& name) {
    NamedProtocol p;
    p.name = name;
    if (name == "EQ2") {
        // two-stage construction: stage one wires boxes 1,2 with
        // x2 = x ^ a1 ^ 1, a = a1 ^ a2 (Bob: y2 = y b1, b = b1 ^ b2), then
        // the result meets box 3 via x3 = x * not(a), y3 = y ^ b and final
        // outputs a ^ a3, b ^ b3
        p.alice = three_copy([](int x) { return x; },
                             [](int x, int a1) { return x ^ a1 ^ 1; },
                             [](int x, int a1, int a2) { return x & NOT(a1 ^ a2); },
                             [](int, int a1, int a2, int a3) { return a1 ^ a2 ^ a3; });
        p.bob = three_copy([](int y) { return y; },
                           [](int y, int b1) { return y & b1; },
                           [](int y, int b1, int b2) { return y ^ b1 ^ b2; },
                           [](int, int b1, int b2, int b3) { return b1 ^ b2 ^ b3; });
    } else if (name == "EQ3") {
        p.alice = three_copy(
            [](int x) { return NOT(x); }, [](int x, int) { return NOT(x); },
            [](int x, int a1, int a2) { return (NOT(x) & a1) | (NOT(x) & a2); },
            [](int, int a1, int a2, int a3) {
                return (a1 & a3) | (a2 & a3) | (NOT(a1) & NOT(a2) & NOT(a3));
            });
        p.bob = three_copy(
            [](int y) { return y; }, [](int y, int) { return y; },
            [](int y, int b1, int b2) {
                return (y & b1) | (y & b2) | (NOT(y) & NOT(b1) & NOT(b2));
            },
            [](int y, int b1, int b2, int b3) {
                return (NOT(y) & b1 & b3) | (NOT(y) & b2 & b3) | (y & b1 & NOT(b3)) |
                       (y & b2 & NOT(b3)) | (NOT(y) & NOT(b1) & NOT(b2) & NOT(b3)) |
                       (y & NOT(b1) & NOT(b2) & b3);
            });
    } else if (name == "EQ4") {
        p.alice = three_copy(
            [](int x) { return x; }, [](int x, int) { return x; },
            [](int x, int a1, int a2) {
                return (x & a2) | (x & NOT(a1)) | (NOT(x) & NOT(a2) & a1);
            },
            [](int, int a1, int a2, int a3) {
                return (a3 & a2) | (a3 & NOT(a1)) | (NOT(a3) & NOT(a2) & a1);
            });
        p.bob = three_copy(
            [](int y) { return y; }, [](int y, int) { return y; },
            [](int y, int b1, int b2) { return (y & b2) | NOT(b1); },
            [](int, int b1, int b2, int b3) {
                return (b3 & b2) | (b3 & NOT(b1)) | (NOT(b3) & NOT(b2) & b1);
            });
    } else if (name == "HR") {
        p.alice = three_copy(
            [](int x) { return x; }, [](int x, int a1) { return x ^ a1; },
            [](int x, int a1, int a2) {
                return (a2 & NOT(a1)) ^ (x & (a1 ^ a2 ^ (a1 & a2)));
            },
            [](int, int a1, int a2, int a3) { return a1 ^ a2 ^ a3; });
        p.bob = three_copy(
            [](int y) { return y; }, [](int y, int b1) { return y & NOT(b1); },
            [](int y, int b1, int b2) {
                return NOT(b1) ^ (b2 & NOT(b1)) ^ (y & (NOT(b2) ^ (b1 & b2)));
            },
            [](int, int b1, int b2, int b3) { return b1 ^ b2 ^ b3; });
    } else {
        throw std::invalid_argument("unknown 3-copy protocol: " + name);
    }
    return p;
}

}  // namespace

const NamedProtocol& named_protocol(const std::string& name) {
    static const std::map<std::string, NamedProtocol> all = [] {
        std::map<std::string, NamedProtocol> m;
        for (const char* n : {"EQ2", "EQ3", "EQ4", "HR"}) m[n] = build_named(n);
        return m;
    }();
    auto it = all.find(name);
    if (it == all.end()) throw std::invalid_argument("unknown 3-copy protocol: " + name);
    return it->second;
}

int protocol_arity(const std::string& name) {
    if (name == "FWW" || name == "ABL1" || name == "ABL2") return 2;
    if (name == "EQ2" || name == "EQ3" || name == "EQ4" || name == "HR") return 3;
    throw std::invalid_argument("unknown protocol: " + name);
}

const std::vector<std::string>& protocol_names() {
    static const std::vector<std::string> names = {"FWW", "ABL1", "ABL2", "EQ2",
                                                   "EQ3", "EQ4",  "HR"};
    return names;
}

NCopyWiring two_copy_wiring(WiringPair labels) {
    NCopyWiring w;
    w.n = 2;
    for (int z = 0; z < 2; ++z) {
        int label = labels[z];
        WiringClass cls = wiring_class(label);
        // defaults: ascending order, inputs 0
        for (int k = 0; k < 2; ++k)
            for (int h = 0; h < (1 << k); ++h) w.box_choice[z][k][h] = k;
        switch (cls) {
            case WiringClass::Constant: {
                int mu = label - 1;
                for (int h = 0; h < 4; ++h) w.output[z][h] = mu;
                break;
            }
            case WiringClass::OneSided: {
                int v = label - 3;
                int mu = v >> 2 & 1, nu = v >> 1 & 1, sigma = v & 1;
                w.input_choice[z][0][0] = mu;
                for (int h = 0; h < 2; ++h) w.input_choice[z][1][h] = mu;
                for (int h = 0; h < 4; ++h)
                    w.output[z][h] = ((nu ? h >> 1 : h) & 1) ^ sigma;
                break;
            }
            case WiringClass::Xor: {
                int v = label - 11;
                int mu = v >> 2 & 1, nu = v >> 1 & 1, sigma = v & 1;
                w.input_choice[z][0][0] = mu;
                for (int h = 0; h < 2; ++h) w.input_choice[z][1][h] = nu;
                for (int h = 0; h < 4; ++h)
                    w.output[z][h] = (h & 1) ^ (h >> 1 & 1) ^ sigma;
                break;
            }
            case WiringClass::And: {
                int v = label - 19;
                int mu = v >> 4 & 1, nu = v >> 3 & 1, sigma = v >> 2 & 1;
                int delta = v >> 1 & 1, eps = v & 1;
                w.input_choice[z][0][0] = mu;
                for (int h = 0; h < 2; ++h) w.input_choice[z][1][h] = nu;
                for (int h = 0; h < 4; ++h)
                    w.output[z][h] = (((h & 1) ^ sigma) & ((h >> 1 & 1) ^ delta)) ^ eps;
                break;
            }
            case WiringClass::Sequential: {
                int v = label - 51;
                int mu = v >> 4 & 1, nu = v >> 3 & 1, sigma = v >> 2 & 1;
                int delta = v >> 1 & 1, eps = v & 1;
                // box mu first; history bit 0 is its outcome
                w.box_choice[z][0][0] = mu;
                w.box_choice[z][1][0] = w.box_choice[z][1][1] = mu ^ 1;
                w.input_choice[z][0][0] = nu;
                for (int h = 0; h < 2; ++h) w.input_choice[z][1][h] = h ^ sigma;
                // history packs (first outcome, second outcome) low-to-high
                for (int h = 0; h < 4; ++h) {
                    int first = h & 1, second = h >> 1 & 1;
                    w.output[z][h] = second ^ (delta & first) ^ eps;
                }
                break;
            }
        }
    }
    return w;
}

Box apply_named(const Box& b, const std::string& name) {
    if (protocol_arity(name) == 2) {
        NamedTwoCopy t = named_two_copy(name);
        return compose2(b, b, t.alice, t.bob);
    }
    const NamedProtocol& p = named_protocol(name);
    return apply_ncopy({b, b, b}, p.alice, p.bob);
}

std::pair<double, double> protocol_gain(CrossSection cs, double eta, double omega,
                                        const std::string& name) {
    Box b = cs_point(cs, eta, omega);
    return {chsh(b), chsh(apply_named(b, name))};
}

}  // namespace nld
