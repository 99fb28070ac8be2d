#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wirelab/diagram.hpp"
#include "wirelab/gate_id.hpp"
#include "wirelab/small_vec.hpp"

namespace wirelab {

enum class OpKind : std::uint8_t {
    Init,
    Measure,
    X,
    Z,
    H,
    P,
    Pdag,
    V,
    Vdag,
    T,
    Tdag,
    Cnot,
    Toffoli,
};

enum class InitState : std::uint8_t { Zero, One, Plus, Y, A };

enum class MeasBasis : std::uint8_t { Z, X };

inline std::size_t arity(OpKind kind) {
    switch (kind) {
        case OpKind::Cnot: return 2;
        case OpKind::Toffoli: return 3;
        default: return 1;
    }
}

inline bool is_gate(OpKind kind) { return kind != OpKind::Init && kind != OpKind::Measure; }

inline bool is_single_qubit_gate(OpKind kind) { return is_gate(kind) && arity(kind) == 1; }

/// Gates permitted in ICM circuits: none. ICM keeps only Init, CNOT, Measure.
inline bool is_icm_op(OpKind kind) {
    return kind == OpKind::Init || kind == OpKind::Measure || kind == OpKind::Cnot;
}

inline const char* kind_keyword(OpKind kind) {
    switch (kind) {
        case OpKind::Init: return "init";
        case OpKind::Measure: return "measure";
        case OpKind::X: return "x";
        case OpKind::Z: return "z";
        case OpKind::H: return "h";
        case OpKind::P: return "p";
        case OpKind::Pdag: return "pdag";
        case OpKind::V: return "v";
        case OpKind::Vdag: return "vdag";
        case OpKind::T: return "t";
        case OpKind::Tdag: return "tdag";
        case OpKind::Cnot: return "cnot";
        case OpKind::Toffoli: return "toffoli";
    }
    return "?";
}

inline const char* state_token(InitState s) {
    switch (s) {
        case InitState::Zero: return "0";
        case InitState::One: return "1";
        case InitState::Plus: return "+";
        case InitState::Y: return "Y";
        case InitState::A: return "A";
    }
    return "?";
}

inline const char* basis_token(MeasBasis b) { return b == MeasBasis::Z ? "Z" : "X"; }

/// One circuit element: initialisation, gate, or measurement. Wires are held
/// as diagram node handles; the label actually operated on is resolved
/// through the diagram with the operation's own id as search key.
struct Operation {
    GateId id;
    OpKind kind = OpKind::Init;
    InitState state = InitState::Zero;  // Init only
    MeasBasis basis = MeasBasis::Z;     // Measure only
    SmallVec<NodeHandle, 3> refs;

    [[nodiscard]] bool same_shape(const Operation& other) const {
        return kind == other.kind &&
               (kind != OpKind::Init || state == other.state) &&
               (kind != OpKind::Measure || basis == other.basis);
    }
};

class CircuitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Ordered gate list plus the diagram its operations reference.
///
/// `label_writes` counts every wire reference stored into an operation by a
/// manipulation (rewrites, recycling). Resolution is a read and never counts;
/// neither does flush, which is the deferred bulk update both engines would
/// pay identically. The counter is what the eager baseline is compared on.
struct Circuit {
    std::vector<Operation> ops;
    Diagram diagram;
    std::uint64_t label_writes = 0;

    [[nodiscard]] const WireLabel& resolved_label(const Operation& op, std::size_t ref_index) const {
        return diagram.resolve_label(op.refs.at(ref_index), op.id);
    }

    [[nodiscard]] std::vector<WireLabel> resolved_labels(const Operation& op) const {
        std::vector<WireLabel> labels;
        labels.reserve(op.refs.size());
        for (std::size_t k = 0; k < op.refs.size(); ++k) labels.push_back(resolved_label(op, k));
        return labels;
    }

    [[nodiscard]] std::size_t wire_count() const { return diagram.live_count(); }
};

/// True when every operation already points at a leaf: nothing is pending in
/// the diagram. Holds after parse and after flush.
inline bool is_flushed(const Circuit& c) {
    for (const Operation& op : c.ops) {
        for (NodeHandle h : op.refs) {
            if (!c.diagram.node(h).is_leaf()) return false;
        }
    }
    return true;
}

/// Resolve every reference to its leaf, renumber operations 0..n-1, and drop
/// interior nodes: the leaves become the roots of a fresh diagram. The
/// resolved gate list is unchanged, so flush(flush(c)) == flush(c).
inline Circuit flush(const Circuit& c) {
    Circuit out;
    std::vector<NodeHandle> new_root(c.diagram.size(), kNoNode);
    out.ops.reserve(c.ops.size());
    std::uint32_t position = 0;
    for (const Operation& op : c.ops) {
        Operation& next = out.ops.emplace_back();
        next.id = GateId::single(position++);
        next.kind = op.kind;
        next.state = op.state;
        next.basis = op.basis;
        next.refs.reserve(op.refs.size());
        for (NodeHandle h : op.refs) {
            const NodeHandle leaf = c.diagram.resolve(h, op.id);
            if (new_root[leaf] == kNoNode) new_root[leaf] = out.diagram.add_root(c.diagram.label_of(leaf));
            next.refs.push_back(new_root[leaf]);
        }
    }
    out.label_writes = c.label_writes;
    return out;
}

/// Histogram of resolve() path lengths over all wire references; the
/// instrumented cost of lazy lookups. An untouched circuit is all zeros.
inline std::map<std::size_t, std::size_t> resolution_depth_stats(const Circuit& c) {
    std::map<std::size_t, std::size_t> histogram;
    for (const Operation& op : c.ops) {
        for (NodeHandle h : op.refs) {
            ++histogram[c.diagram.resolution_depth(h, op.id)];
        }
    }
    return histogram;
}

/// Check the per-wire operation pattern on resolved labels. Each wire must
/// match: optional headless run (gates, optionally measured), then any number
/// of (Init, gates*, Measure) episodes, then at most one open trailing
/// episode. Returns a description of the first violation, if any.
inline std::optional<std::string> check_wire_patterns(const Circuit& c) {
    enum class WireState { Headless, Live, Dead };
    std::unordered_map<WireLabel, WireState> state;
    for (std::size_t i = 0; i < c.ops.size(); ++i) {
        const Operation& op = c.ops[i];
        const auto labels = c.resolved_labels(op);
        for (const WireLabel& w : labels) {
            auto it = state.find(w);
            switch (op.kind) {
                case OpKind::Init:
                    if (it != state.end() && it->second != WireState::Dead) {
                        return "op " + std::to_string(i) + ": init on live wire '" + w + "'";
                    }
                    state[w] = WireState::Live;
                    break;
                case OpKind::Measure:
                    if (it != state.end() && it->second == WireState::Dead) {
                        return "op " + std::to_string(i) + ": measure on measured wire '" + w + "'";
                    }
                    state[w] = WireState::Dead;
                    break;
                default:
                    if (it == state.end()) {
                        state[w] = WireState::Headless;
                    } else if (it->second == WireState::Dead) {
                        return "op " + std::to_string(i) + ": gate on measured wire '" + w + "'";
                    }
                    break;
            }
        }
    }
    return std::nullopt;
}

}  // namespace wirelab
