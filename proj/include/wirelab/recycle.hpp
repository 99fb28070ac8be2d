#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wirelab/circuit.hpp"
#include "wirelab/deadline.hpp"
#include "wirelab/reachability.hpp"

namespace wirelab {

class RecycleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One recycling decision: the qubit initialised on `init_wire` is placed on
/// `target_wire`, after that wire's measurement.
struct RecyclePair {
    WireLabel init_wire;
    WireLabel target_wire;
};

struct RecyclePlan {
    std::vector<RecyclePair> pairs;
    std::size_t predicted_wire_count = 0;

    [[nodiscard]] std::string to_csv() const {
        std::string out = "init_wire,target_wire\n";
        for (const RecyclePair& p : pairs) out += p.init_wire + "," + p.target_wire + "\n";
        return out;
    }
};

/// The planning and move machinery shared by the diagram engine and the
/// eager baseline. Both present their gate lists as KeyOp sequences (wires
/// as small integers); running the same decisions on both is what makes the
/// engines produce identical circuits.
namespace recycle_detail {

struct KeyOp {
    OpKind kind = OpKind::Init;
    SmallVec<std::uint32_t, 3> wires;
};

/// Compute the operation order that moves the seed ops (one recycled
/// qubit's operations) to just after the anchor op (the target wire's
/// measurement), dragging along whatever must move with them so that every
/// wire's operation order is preserved.
///
/// An op must move together with a moving op when they share a wire and lie
/// between it and the anchor; otherwise the block insertion would flip their
/// relative order on that wire. The closure runs to fixpoint. If it swallows
/// the anchor itself the move is impossible and nullopt is returned.
inline std::optional<std::vector<std::size_t>> hull_move_order(const std::vector<KeyOp>& ops,
                                                               const std::vector<std::size_t>& seed,
                                                               std::size_t anchor) {
    const std::size_t n = ops.size();
    std::unordered_map<std::uint32_t, std::vector<std::size_t>> on_wire;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t w : ops[i].wires) on_wire[w].push_back(i);
    }

    std::vector<char> hull(n, 0);
    std::vector<std::size_t> work;
    for (std::size_t s : seed) {
        if (!hull[s]) {
            hull[s] = 1;
            work.push_back(s);
        }
    }
    // Per wire, the span around the anchor already absorbed; windows from
    // several ops on one wire overlap, so only newly exposed spans are walked.
    std::unordered_map<std::uint32_t, std::size_t> left_bound;   // all (left_bound, anchor] hulled
    std::unordered_map<std::uint32_t, std::size_t> right_bound;  // all (anchor, right_bound) hulled

    auto absorb = [&](std::size_t y) {
        if (!hull[y]) {
            hull[y] = 1;
            work.push_back(y);
        }
    };

    while (!work.empty()) {
        const std::size_t x = work.back();
        work.pop_back();
        for (std::uint32_t w : ops[x].wires) {
            const std::vector<std::size_t>& positions = on_wire[w];
            if (x <= anchor) {
                auto [it, inserted] = left_bound.try_emplace(w, anchor + 1);
                if (x < it->second) {
                    const std::size_t old = it->second;
                    it->second = x;
                    auto lo = std::upper_bound(positions.begin(), positions.end(), x);
                    for (; lo != positions.end() && *lo <= anchor && *lo < old; ++lo) absorb(*lo);
                }
            } else {
                auto [it, inserted] = right_bound.try_emplace(w, anchor + 1);
                if (x > it->second) {
                    const std::size_t old = it->second;
                    it->second = x;
                    auto lo = std::lower_bound(positions.begin(), positions.end(), old);
                    for (; lo != positions.end() && *lo < x; ++lo) absorb(*lo);
                }
            }
        }
    }
    if (hull[anchor]) return std::nullopt;

    std::vector<std::size_t> order;
    order.reserve(n);
    for (std::size_t i = 0; i <= anchor; ++i) {
        if (!hull[i]) order.push_back(i);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (hull[i]) order.push_back(i);
    }
    for (std::size_t i = anchor + 1; i < n; ++i) {
        if (!hull[i]) order.push_back(i);
    }
    return order;
}

/// The movable episode of wire `i`: its first operation must be an Init
/// (nothing headless in front), and the seed runs from there to the wire's
/// first measurement (or to the end for an open episode). Later episodes on
/// the wire stay put; the move closure keeps them consistent.
struct Segment {
    bool clean = false;
    std::size_t init_pos = 0;
    std::vector<std::size_t> seed;
};

inline Segment find_segment(const std::vector<KeyOp>& ops, std::uint32_t i) {
    Segment s;
    bool started = false;
    bool done = false;
    for (std::size_t p = 0; p < ops.size() && !done; ++p) {
        for (std::uint32_t w : ops[p].wires) {
            if (w != i) continue;
            if (!started) {
                if (ops[p].kind != OpKind::Init) return s;  // headless or mid-wire start
                started = true;
                s.init_pos = p;
            }
            s.seed.push_back(p);
            if (ops[p].kind == OpKind::Measure) done = true;
            break;
        }
    }
    s.clean = started;
    return s;
}

inline std::size_t first_measure_on(const std::vector<KeyOp>& ops, std::uint32_t m) {
    for (std::size_t p = 0; p < ops.size(); ++p) {
        if (ops[p].kind == OpKind::Measure && ops[p].wires[0] == m) return p;
    }
    return SIZE_MAX;
}

/// Would the merged wire (i joined onto m) still satisfy the per-wire
/// pattern if the ops were arranged in `order`? Other wires keep their
/// relative op order under the move, so only the merged one needs checking.
inline bool merged_pattern_ok(const std::vector<KeyOp>& ops, const std::vector<std::size_t>& order,
                              std::uint32_t i, std::uint32_t m) {
    int state = 0;  // 0 unseen, 1 live, 2 measured
    for (std::size_t p : order) {
        const KeyOp& op = ops[p];
        bool incident = false;
        for (std::uint32_t w : op.wires) {
            if (w == i || w == m) {
                incident = true;
                break;
            }
        }
        if (!incident) continue;
        if (op.kind == OpKind::Init) {
            if (state == 1) return false;
            state = 1;
        } else if (op.kind == OpKind::Measure) {
            if (state == 2) return false;
            state = 2;
        } else {
            if (state == 2) return false;
            if (state == 0) state = 1;
        }
    }
    return true;
}

/// Greedy first-fit pairing with applicability baked in: walk the
/// initialisations in circuit order and give each the earliest measurement
/// (again in circuit order) whose wire is still free this round, whose
/// output the initialisation cannot reach, and whose segment move actually
/// goes through on the current list. Committed moves are simulated in place
/// so later decisions see what apply_recycling will see. Deterministic in
/// the circuit; an empty result means nothing is recyclable.
template <typename Reaches>
std::vector<std::pair<std::uint32_t, std::uint32_t>> greedy_pairs(std::vector<KeyOp> ops,
                                                                  std::size_t wire_count,
                                                                  Reaches&& reaches,
                                                                  const Deadline& deadline) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<char> used_source(wire_count, 0);
    std::vector<char> used_target(wire_count, 0);

    std::vector<std::uint32_t> init_wires;   // wires by first init, circuit order
    std::vector<std::uint32_t> target_order; // wires by first measure, circuit order
    {
        std::vector<char> seen_i(wire_count, 0), seen_m(wire_count, 0);
        for (const KeyOp& op : ops) {
            if (op.kind == OpKind::Init && !seen_i[op.wires[0]]) {
                seen_i[op.wires[0]] = 1;
                init_wires.push_back(op.wires[0]);
            } else if (op.kind == OpKind::Measure && !seen_m[op.wires[0]]) {
                seen_m[op.wires[0]] = 1;
                target_order.push_back(op.wires[0]);
            }
        }
    }

    for (std::uint32_t i : init_wires) {
        deadline.poll();
        if (used_source[i]) continue;
        Segment segment = find_segment(ops, i);
        if (!segment.clean) continue;
        for (std::uint32_t m : target_order) {
            if (m == i || used_target[m] || used_source[m]) continue;
            if (reaches(i, m)) continue;
            const std::size_t anchor = first_measure_on(ops, m);
            if (anchor == SIZE_MAX) continue;
            auto order = hull_move_order(ops, segment.seed, anchor);
            if (!order) continue;  // this move cannot be applied; try the next output
            if (!merged_pattern_ok(ops, *order, i, m)) continue;
            std::vector<KeyOp> reordered;
            reordered.reserve(ops.size());
            for (std::size_t idx : *order) reordered.push_back(std::move(ops[idx]));
            ops = std::move(reordered);
            for (KeyOp& op : ops) {
                for (std::uint32_t& w : op.wires) {
                    if (w == i) w = m;
                }
            }
            used_source[i] = 1;
            used_target[m] = 1;
            pairs.emplace_back(i, m);
            break;
        }
    }
    return pairs;
}

}  // namespace recycle_detail

/// Plan one recycling round from the reachability matrix of `c`.
inline RecyclePlan plan_recycling(const ReachMatrix& m, const Circuit& c,
                                  const Deadline& deadline = Deadline::never()) {
    std::vector<recycle_detail::KeyOp> ops;
    ops.reserve(c.ops.size());
    for (const Operation& op : c.ops) {
        recycle_detail::KeyOp k;
        k.kind = op.kind;
        k.wires.reserve(op.refs.size());
        for (std::size_t r = 0; r < op.refs.size(); ++r) {
            k.wires.push_back(static_cast<std::uint32_t>(m.label_to_index.at(c.resolved_label(op, r))));
        }
        ops.push_back(std::move(k));
    }
    auto pairs = recycle_detail::greedy_pairs(
        std::move(ops), m.q, [&](std::uint32_t i, std::uint32_t t) { return m.rows[i].test(t); },
        deadline);

    RecyclePlan plan;
    for (auto [i, t] : pairs) plan.pairs.push_back({m.index_to_label[i], m.index_to_label[t]});
    plan.predicted_wire_count = c.wire_count() - plan.pairs.size();
    return plan;
}

/// Apply a recycling plan: for each pair, the recycled qubit's operations
/// move after the target wire's measurement and the diagram joins the wires.
/// Labels update lazily from then on; no operation reference is rewritten,
/// and the op multiset is untouched (only order and resolved labels change).
inline void apply_recycling(Circuit& c, const RecyclePlan& plan,
                            const Deadline& deadline = Deadline::never()) {
    for (const RecyclePair& pair : plan.pairs) {
        deadline.poll();
        if (!c.diagram.is_live(pair.init_wire) || !c.diagram.is_live(pair.target_wire)) {
            throw RecycleError("plan/circuit mismatch: wire '" + pair.init_wire + "' or '" +
                               pair.target_wire + "' is not live");
        }
        const NodeHandle init_leaf = c.diagram.live_node(pair.init_wire);
        const NodeHandle target_leaf = c.diagram.live_node(pair.target_wire);

        const std::size_t n = c.ops.size();
        std::vector<recycle_detail::KeyOp> keyed(n);
        for (std::size_t i = 0; i < n; ++i) {
            keyed[i].kind = c.ops[i].kind;
            keyed[i].wires.reserve(c.ops[i].refs.size());
            for (NodeHandle h : c.ops[i].refs) {
                keyed[i].wires.push_back(c.diagram.resolve(h, c.ops[i].id));
            }
        }

        auto segment = recycle_detail::find_segment(keyed, init_leaf);
        if (!segment.clean) {
            throw RecycleError("wire '" + pair.init_wire + "' has no movable initialisation");
        }
        const std::size_t anchor = recycle_detail::first_measure_on(keyed, target_leaf);
        if (anchor == SIZE_MAX) {
            throw RecycleError("wire '" + pair.target_wire + "' has no measurement");
        }
        auto order = recycle_detail::hull_move_order(keyed, segment.seed, anchor);
        if (!order) {
            throw RecycleError("pair " + pair.init_wire + " -> " + pair.target_wire +
                               " cannot be applied: the move would drag the target measurement");
        }
        if (!recycle_detail::merged_pattern_ok(keyed, *order, init_leaf, target_leaf)) {
            throw RecycleError("pair " + pair.init_wire + " -> " + pair.target_wire +
                               " cannot be applied: the joined wire would break its pattern");
        }
        std::vector<Operation> reordered;
        reordered.reserve(n);
        for (std::size_t idx : *order) reordered.push_back(std::move(c.ops[idx]));
        c.ops = std::move(reordered);

        c.diagram.join(init_leaf, target_leaf);
    }
}

struct RecycleReport {
    bool pass = true;
    std::vector<std::string> violations;

    void fail(std::string what) {
        pass = false;
        violations.push_back(std::move(what));
    }
};

/// Check a recycling result against the circuit it came from:
///  (a) per-wire operation patterns still hold,
///  (b) every original qubit's operations kept their relative order
///      (ids survive apply_recycling, so episodes are matched by id),
///  (c) every applied pair obeys the reachability matrix of the original.
inline RecycleReport validate_recycled(const Circuit& original, const ReachMatrix& matrix,
                                       const RecyclePlan& plan, const Circuit& recycled) {
    RecycleReport report;

    if (auto violation = check_wire_patterns(recycled)) {
        report.fail("(a) " + *violation);
    }

    std::map<GateId, std::size_t> position;
    for (std::size_t i = 0; i < recycled.ops.size(); ++i) position[recycled.ops[i].id] = i;

    std::unordered_map<WireLabel, std::vector<std::vector<GateId>>> episodes;
    for (const Operation& op : original.ops) {
        for (std::size_t k = 0; k < op.refs.size(); ++k) {
            const WireLabel& w = original.resolved_label(op, k);
            auto& eps = episodes[w];
            if (eps.empty() || op.kind == OpKind::Init) eps.emplace_back();
            eps.back().push_back(op.id);
        }
    }
    for (const auto& [wire, eps] : episodes) {
        for (const auto& ids : eps) {
            std::size_t previous = 0;
            bool first = true;
            for (const GateId& id : ids) {
                auto it = position.find(id);
                if (it == position.end()) {
                    report.fail("(b) op " + id.str() + " of wire '" + wire + "' missing from result");
                    break;
                }
                if (!first && it->second <= previous) {
                    report.fail("(b) wire '" + wire + "': op " + id.str() + " moved out of order");
                    break;
                }
                previous = it->second;
                first = false;
            }
        }
    }

    for (const RecyclePair& pair : plan.pairs) {
        if (!matrix.label_to_index.count(pair.init_wire) ||
            !matrix.label_to_index.count(pair.target_wire)) {
            report.fail("(c) pair " + pair.init_wire + " -> " + pair.target_wire +
                        " names an unknown wire");
            continue;
        }
        if (matrix.reaches(pair.init_wire, pair.target_wire)) {
            report.fail("(c) init of '" + pair.init_wire + "' reaches the output of '" +
                        pair.target_wire + "'");
        }
    }
    return report;
}

}  // namespace wirelab
