#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "wirelab/circuit.hpp"
#include "wirelab/deadline.hpp"
#include "wirelab/io.hpp"
#include "wirelab/recycle.hpp"
#include "wirelab/rewrite.hpp"

namespace wirelab {

/// Eager reference engine.
///
/// Wire designators are positions in an ordered wire list, so every
/// manipulation that inserts or removes a wire walks the whole gate list and
/// rewrites the stored positions (counted in label_writes when a value
/// actually changes). Reachability bookkeeping uses plain ordered sets. This
/// is the baseline the diagram engine is checked against and timed against;
/// both must produce identical circuits.
struct EagerOp {
    OpKind kind = OpKind::Init;
    InitState state = InitState::Zero;
    MeasBasis basis = MeasBasis::Z;
    std::vector<std::uint32_t> wires;  // positions into EagerCircuit::wires
};

struct EagerCircuit {
    std::vector<EagerOp> ops;
    std::vector<WireLabel> wires;
    std::unordered_set<WireLabel> used_labels;
    std::uint64_t fresh_counter = 0;
    std::uint64_t label_writes = 0;

    [[nodiscard]] std::size_t wire_count() const { return wires.size(); }

    WireLabel fresh_label() {
        for (;;) {
            WireLabel candidate = "w" + std::to_string(fresh_counter++);
            if (!used_labels.count(candidate)) return candidate;
        }
    }
};

inline EagerCircuit eager_from_circuit(const Circuit& c) {
    EagerCircuit ec;
    std::unordered_map<WireLabel, std::uint32_t> index;
    for (const Operation& op : c.ops) {
        EagerOp eop;
        eop.kind = op.kind;
        eop.state = op.state;
        eop.basis = op.basis;
        for (std::size_t k = 0; k < op.refs.size(); ++k) {
            const WireLabel& w = c.resolved_label(op, k);
            auto it = index.find(w);
            if (it == index.end()) {
                it = index.emplace(w, static_cast<std::uint32_t>(ec.wires.size())).first;
                ec.wires.push_back(w);
                ec.used_labels.insert(w);
            }
            eop.wires.push_back(it->second);
        }
        ec.ops.push_back(std::move(eop));
    }
    return ec;
}

inline std::string eager_serialize(const EagerCircuit& ec) {
    std::string out;
    for (const EagerOp& op : ec.ops) {
        out += kind_keyword(op.kind);
        for (std::uint32_t w : op.wires) {
            out += ' ';
            out += ec.wires.at(w);
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

namespace naive_detail {

/// Eager positional update after a wire was split at `pos`: references above
/// the insertion shift up, references to the split wire move to the new
/// right half when the op lies after the rewrite site.
inline void update_after_split(EagerCircuit& ec, EagerOp& op, std::uint32_t pos, bool after) {
    for (std::uint32_t& w : op.wires) {
        if (w > pos) {
            ++w;
            ++ec.label_writes;
        } else if (w == pos && after) {
            w = pos + 1;
            ++ec.label_writes;
        }
    }
}

inline std::size_t eager_sweep(EagerCircuit& ec, OpKind match, const RewriteRule& rule,
                               const Deadline& deadline) {
    std::size_t matches = 0;
    for (const EagerOp& op : ec.ops) {
        if (op.kind == match) ++matches;
    }
    if (matches == 0) return 0;
    std::size_t fired = 0;
    std::vector<EagerOp> out;
    out.reserve(ec.ops.size() + matches * (rule.body.size() - 1));
    for (std::size_t i = 0; i < ec.ops.size(); ++i) {
        deadline.poll();
        EagerOp op = std::move(ec.ops[i]);
        if (op.kind != match) {
            out.push_back(std::move(op));
            continue;
        }
        ++fired;
        std::uint32_t old_pos = op.wires[0];
        std::uint32_t anc_pos = 0;
        if (rule.introduces_ancilla) {
            const WireLabel left = ec.fresh_label();
            const WireLabel right = ec.fresh_label();
            ec.used_labels.insert(left);
            ec.used_labels.insert(right);
            ec.wires[old_pos] = left;
            ec.wires.insert(ec.wires.begin() + old_pos + 1, right);
            anc_pos = old_pos + 1;
            // the eager full-list update the diagram engine avoids
            for (EagerOp& prev : out) update_after_split(ec, prev, old_pos, false);
            for (std::size_t j = i + 1; j < ec.ops.size(); ++j) {
                update_after_split(ec, ec.ops[j], old_pos, true);
            }
        }
        for (const TemplateOp& top : rule.body) {
            EagerOp e;
            e.kind = top.kind;
            e.state = top.state;
            e.basis = top.basis;
            for (const std::string& operand : top.operands) {
                std::uint32_t w = 0;
                if (operand == "%old") w = old_pos;
                else if (operand == "%anc") w = anc_pos;
                else if (operand == "%c1") w = op.wires[0];
                else if (operand == "%c2") w = op.wires[1];
                else if (operand == "%t") w = op.wires[2];
                e.wires.push_back(w);
                ++ec.label_writes;
            }
            out.push_back(std::move(e));
        }
    }
    ec.ops = std::move(out);
    return fired;
}

}  // namespace naive_detail

inline std::size_t eager_decompose_toffoli(EagerCircuit& ec, const RuleSet& rules = RuleSet::defaults(),
                                           const Deadline& deadline = Deadline::never()) {
    return naive_detail::eager_sweep(ec, OpKind::Toffoli, rules.at(OpKind::Toffoli), deadline);
}

inline std::size_t eager_to_icm(EagerCircuit& ec, const RuleSet& rules = RuleSet::defaults(),
                                const Deadline& deadline = Deadline::never()) {
    for (const EagerOp& op : ec.ops) {
        if (op.kind == OpKind::Toffoli) {
            throw RewriteError("eager_to_icm: Toffoli present; run eager_decompose_toffoli first");
        }
    }
    for (OpKind kind : {OpKind::H, OpKind::X, OpKind::Z}) {
        if (const RewriteRule* rule = rules.find(kind)) {
            if (!rule->introduces_ancilla) naive_detail::eager_sweep(ec, kind, *rule, deadline);
        }
    }
    std::size_t teleports = 0;
    for (OpKind kind : {OpKind::P, OpKind::Pdag, OpKind::V, OpKind::Vdag, OpKind::T, OpKind::Tdag,
                        OpKind::H, OpKind::X, OpKind::Z}) {
        const RewriteRule* rule = rules.find(kind);
        if (rule && rule->introduces_ancilla) {
            teleports += naive_detail::eager_sweep(ec, kind, *rule, deadline);
        }
    }
    for (const EagerOp& op : ec.ops) {
        if (!is_icm_op(op.kind)) {
            throw RewriteError(std::string("eager_to_icm: unsupported gate kind present: ") +
                               kind_keyword(op.kind));
        }
    }
    return teleports;
}

/// Set-based reachability rows, one std::set of reached output positions per
/// wire. Same backward walk as the bit-array analysis, with the slow
/// containers the baseline is defined by.
inline std::vector<std::set<std::uint32_t>> eager_reach_rows(const EagerCircuit& ec,
                                                             const Deadline& deadline =
                                                                 Deadline::never()) {
    const std::size_t q = ec.wires.size();
    std::vector<std::set<std::uint32_t>> rows(q);
    std::vector<std::set<std::uint32_t>> arrays(q);
    for (auto it = ec.ops.rbegin(); it != ec.ops.rend(); ++it) {
        deadline.poll();
        const EagerOp& op = *it;
        if (op.kind == OpKind::Measure) {
            arrays[op.wires[0]].insert(op.wires[0]);
        } else if (op.kind == OpKind::Init) {
            rows[op.wires[0]].insert(arrays[op.wires[0]].begin(), arrays[op.wires[0]].end());
            arrays[op.wires[0]].clear();
        } else if (op.wires.size() > 1) {
            std::set<std::uint32_t> merged;
            for (std::uint32_t w : op.wires) merged.insert(arrays[w].begin(), arrays[w].end());
            for (std::uint32_t w : op.wires) arrays[w] = merged;
        }
    }
    return rows;
}

/// Same greedy pairing as plan_recycling, driven by the set rows.
inline RecyclePlan eager_plan_recycling(const EagerCircuit& ec,
                                        const Deadline& deadline = Deadline::never()) {
    auto rows = eager_reach_rows(ec, deadline);
    std::vector<recycle_detail::KeyOp> ops;
    ops.reserve(ec.ops.size());
    for (const EagerOp& op : ec.ops) {
        recycle_detail::KeyOp k;
        k.kind = op.kind;
        for (std::uint32_t w : op.wires) k.wires.push_back(w);
        ops.push_back(std::move(k));
    }
    auto pairs = recycle_detail::greedy_pairs(
        std::move(ops), ec.wires.size(),
        [&](std::uint32_t i, std::uint32_t t) { return rows[i].count(t) != 0; }, deadline);

    RecyclePlan plan;
    for (auto [i, t] : pairs) plan.pairs.push_back({ec.wires[i], ec.wires[t]});
    plan.predicted_wire_count = ec.wires.size() - plan.pairs.size();
    return plan;
}

/// Apply a plan eagerly: the same segment move as the diagram engine, then a
/// full-list relabelling scan (recycled wire takes the target's position)
/// and another full-list shift scan once the emptied wire slot is removed.
inline void eager_apply_recycling(EagerCircuit& ec, const RecyclePlan& plan,
                                  const Deadline& deadline = Deadline::never()) {
    for (const RecyclePair& pair : plan.pairs) {
        deadline.poll();
        std::uint32_t pos_i = UINT32_MAX, pos_m = UINT32_MAX;
        for (std::uint32_t w = 0; w < ec.wires.size(); ++w) {
            if (ec.wires[w] == pair.init_wire) pos_i = w;
            if (ec.wires[w] == pair.target_wire) pos_m = w;
        }
        if (pos_i == UINT32_MAX || pos_m == UINT32_MAX) {
            throw RecycleError("plan/circuit mismatch: wire '" + pair.init_wire + "' or '" +
                               pair.target_wire + "' is not live");
        }

        const std::size_t n = ec.ops.size();
        std::vector<recycle_detail::KeyOp> keyed;
        keyed.reserve(n);
        for (const EagerOp& op : ec.ops) {
            recycle_detail::KeyOp k;
            k.kind = op.kind;
            for (std::uint32_t w : op.wires) k.wires.push_back(w);
            keyed.push_back(std::move(k));
        }

        auto segment = recycle_detail::find_segment(keyed, pos_i);
        if (!segment.clean) {
            throw RecycleError("wire '" + pair.init_wire + "' has no movable initialisation");
        }
        const std::size_t anchor = recycle_detail::first_measure_on(keyed, pos_m);
        if (anchor == SIZE_MAX) {
            throw RecycleError("wire '" + pair.target_wire + "' has no measurement");
        }
        auto order = recycle_detail::hull_move_order(keyed, segment.seed, anchor);
        if (!order) {
            throw RecycleError("pair " + pair.init_wire + " -> " + pair.target_wire +
                               " cannot be applied: the move would drag the target measurement");
        }
        if (!recycle_detail::merged_pattern_ok(keyed, *order, pos_i, pos_m)) {
            throw RecycleError("pair " + pair.init_wire + " -> " + pair.target_wire +
                               " cannot be applied: the joined wire would break its pattern");
        }
        std::vector<EagerOp> reordered;
        reordered.reserve(n);
        for (std::size_t idx : *order) reordered.push_back(std::move(ec.ops[idx]));
        ec.ops = std::move(reordered);

        // full-list relabel: all gates on the recycled wire reference the target
        for (EagerOp& op : ec.ops) {
            deadline.poll();
            for (std::uint32_t& w : op.wires) {
                if (w == pos_i) {
                    w = pos_m;
                    ++ec.label_writes;
                }
            }
        }
        // the wire list shrinks; every higher position shifts down
        ec.wires.erase(ec.wires.begin() + pos_i);
        for (EagerOp& op : ec.ops) {
            deadline.poll();
            for (std::uint32_t& w : op.wires) {
                if (w > pos_i) {
                    --w;
                    ++ec.label_writes;
                }
            }
        }
    }
}

}  // namespace wirelab
