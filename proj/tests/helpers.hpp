#pragma once

#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "wirelab/wirelab.hpp"

namespace testutil {

using namespace wirelab;

/// Random valid circuit in the textual format; wires may start headless and
/// may end unmeasured, mirroring what the parser accepts.
inline std::string random_circuit_text(std::mt19937& rng, std::size_t max_wires,
                                       std::size_t max_ops) {
    std::uniform_int_distribution<std::size_t> wire_count(1, max_wires);
    const std::size_t q = wire_count(rng);
    std::vector<int> state(q, 0);  // 0 unseen, 1 live, 2 measured
    std::string text;
    std::uniform_int_distribution<int> action(0, 9);
    std::uniform_int_distribution<std::size_t> wire(0, q - 1);
    static const char* kGates1[] = {"x", "z", "h", "p", "pdag", "v", "vdag", "t", "tdag"};
    std::uniform_int_distribution<int> g1(0, 8);
    std::uniform_int_distribution<std::size_t> length(0, max_ops);
    const std::size_t target = length(rng);
    for (std::size_t n = 0; n < target; ++n) {
        const int a = action(rng);
        const std::size_t w = wire(rng);
        if (a <= 1) {
            if (state[w] == 1) continue;
            text += "init q" + std::to_string(w) + (rng() % 2 ? " 0\n" : " +\n");
            state[w] = 1;
        } else if (a <= 5) {
            if (state[w] == 2) continue;
            if (state[w] == 0 && rng() % 4 != 0) continue;  // headless starts are rare
            text += std::string(kGates1[g1(rng)]) + " q" + std::to_string(w) + "\n";
            if (state[w] == 0) state[w] = 1;
        } else if (a <= 7) {
            const std::size_t w2 = wire(rng);
            if (w2 == w || state[w] != 1 || state[w2] != 1) continue;
            text += "cnot q" + std::to_string(w) + " q" + std::to_string(w2) + "\n";
        } else if (a == 8) {
            if (q < 3) continue;
            const std::size_t w2 = wire(rng), w3 = wire(rng);
            if (w == w2 || w2 == w3 || w == w3) continue;
            if (state[w] != 1 || state[w2] != 1 || state[w3] != 1) continue;
            text += "toffoli q" + std::to_string(w) + " q" + std::to_string(w2) + " q" +
                    std::to_string(w3) + "\n";
        } else {
            if (state[w] != 1) continue;
            text += "measure q" + std::to_string(w) + (rng() % 2 ? " Z\n" : " X\n");
            state[w] = 2;
        }
    }
    return text;
}

/// Serialize with wires renamed by first appearance, for comparisons that
/// hold modulo wire naming.
inline std::string normalized(const Circuit& c) {
    std::unordered_map<WireLabel, std::string> rename;
    std::string out;
    for (const Operation& op : c.ops) {
        out += kind_keyword(op.kind);
        for (std::size_t k = 0; k < op.refs.size(); ++k) {
            const WireLabel& w = c.resolved_label(op, k);
            auto it = rename.find(w);
            if (it == rename.end()) {
                it = rename.emplace(w, "n" + std::to_string(rename.size())).first;
            }
            out += ' ';
            out += it->second;
        }
        if (op.kind == OpKind::Init) {
            out += ' ';
            out += state_token(op.state);
        } else if (op.kind == OpKind::Measure) {
            out += ' ';
            out += basis_token(op.basis);
        }
        out += '\n';
    }
    return out;
}

inline std::string normalized(const std::string& text) { return normalized(parse_circuit(text)); }

/// Eager relabelling reference model for the diagram: every op's label is
/// rewritten immediately on each split/join. The lazy diagram must resolve
/// to exactly these labels.
struct EagerModel {
    std::vector<std::pair<GateId, WireLabel>> ops;

    void add_op(const GateId& id, const WireLabel& w) { ops.emplace_back(id, w); }

    void split(const WireLabel& w, const GateId& threshold, const WireLabel& left,
               const WireLabel& right) {
        for (auto& [id, label] : ops) {
            if (label == w) label = is_after(id, threshold) ? right : left;
        }
    }

    void join(const WireLabel& from, const WireLabel& onto) {
        for (auto& [id, label] : ops) {
            if (label == from) label = onto;
        }
    }
};

inline Circuit example2_circuit() {
    return parse_circuit(
        "init 0 0\ninit 1 0\ninit 2 0\ninit 3 0\n"
        "cnot 0 1\ncnot 1 2\ncnot 2 3\n"
        "measure 0 Z\nmeasure 1 Z\nmeasure 2 Z\nmeasure 3 Z\n");
}

}  // namespace testutil
