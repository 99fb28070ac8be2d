#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "wirelab/circuit.hpp"
#include "wirelab/deadline.hpp"

namespace wirelab {

class ReachError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed-width packed bit vector; one per wire during the backward pass.
class BitRow {
public:
    BitRow() = default;
    explicit BitRow(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i >> 6] |= (std::uint64_t{1} << (i & 63)); }

    [[nodiscard]] bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1;
    }

    void or_with(const BitRow& other) {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    }

    void clear() { words_.assign(words_.size(), 0); }

    [[nodiscard]] std::size_t size() const { return bits_; }

    [[nodiscard]] std::size_t count() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += static_cast<std::size_t>(__builtin_popcountll(w));
        return n;
    }

    [[nodiscard]] std::set<std::size_t> to_set() const {
        std::set<std::size_t> s;
        for (std::size_t i = 0; i < bits_; ++i) {
            if (test(i)) s.insert(i);
        }
        return s;
    }

    friend bool operator==(const BitRow& a, const BitRow& b) = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// q x q reachability matrix: row i, column j is set when the measured
/// output of wire j is reachable from an initialisation of wire i. Labels
/// are mapped to indices in first-appearance order; inside the analysis,
/// wires are numbers, not references.
struct ReachMatrix {
    std::size_t q = 0;
    std::vector<BitRow> rows;
    std::vector<WireLabel> index_to_label;
    std::unordered_map<WireLabel, std::size_t> label_to_index;

    [[nodiscard]] const BitRow& row(const WireLabel& label) const {
        return rows.at(label_to_index.at(label));
    }

    [[nodiscard]] bool reaches(const WireLabel& init_wire, const WireLabel& measured_wire) const {
        return row(init_wire).test(label_to_index.at(measured_wire));
    }

    friend bool operator==(const ReachMatrix& a, const ReachMatrix& b) {
        return a.q == b.q && a.index_to_label == b.index_to_label && a.rows == b.rows;
    }

    /// Plain-text PBM bitmap, for eyeballing.
    [[nodiscard]] std::string to_pbm() const {
        std::string out = "P1\n" + std::to_string(q) + " " + std::to_string(q) + "\n";
        for (const BitRow& r : rows) {
            for (std::size_t j = 0; j < q; ++j) {
                out += r.test(j) ? '1' : '0';
                out += j + 1 == q ? '\n' : ' ';
            }
        }
        return out;
    }
};

namespace reach_detail {

inline std::pair<std::vector<WireLabel>, std::unordered_map<WireLabel, std::size_t>> index_wires(
    const Circuit& c) {
    std::vector<WireLabel> order;
    std::unordered_map<WireLabel, std::size_t> index;
    for (const Operation& op : c.ops) {
        for (std::size_t k = 0; k < op.refs.size(); ++k) {
            const WireLabel& w = c.resolved_label(op, k);
            if (index.emplace(w, order.size()).second) order.push_back(w);
        }
    }
    return {order, index};
}

inline void require_flushed(const Circuit& c, const char* who) {
    if (!is_flushed(c)) throw ReachError(std::string(who) + ": circuit has unresolved references; flush first");
}

}  // namespace reach_detail

/// Backward pass with per-wire bit arrays. Walking from outputs towards
/// inputs: a measure lights its wire's own output bit, a multi-wire gate
/// leaves all incident arrays equal to their bit-wise OR, and an init
/// snapshots the wire's array as that wire's matrix row (then clears it — a
/// fresh initialisation severs influence through the wire). Gates are never
/// commuted; the circuit structure is taken as fixed.
inline ReachMatrix analyze(const Circuit& c, const Deadline& deadline = Deadline::never()) {
    reach_detail::require_flushed(c, "analyze");
    auto [order, index] = reach_detail::index_wires(c);
    const std::size_t q = order.size();

    ReachMatrix m;
    m.q = q;
    m.index_to_label = std::move(order);
    m.label_to_index = std::move(index);
    m.rows.assign(q, BitRow(q));

    std::vector<BitRow> arrays(q, BitRow(q));
    for (auto it = c.ops.rbegin(); it != c.ops.rend(); ++it) {
        deadline.poll();
        const Operation& op = *it;
        if (op.kind == OpKind::Measure) {
            const std::size_t w = m.label_to_index.at(c.resolved_label(op, 0));
            arrays[w].set(w);
        } else if (op.kind == OpKind::Init) {
            const std::size_t w = m.label_to_index.at(c.resolved_label(op, 0));
            m.rows[w].or_with(arrays[w]);
            arrays[w].clear();
        } else if (op.refs.size() > 1) {
            std::vector<std::size_t> incident;
            incident.reserve(op.refs.size());
            for (std::size_t k = 0; k < op.refs.size(); ++k) {
                incident.push_back(m.label_to_index.at(c.resolved_label(op, k)));
            }
            BitRow merged = arrays[incident[0]];
            for (std::size_t k = 1; k < incident.size(); ++k) merged.or_with(arrays[incident[k]]);
            for (std::size_t w : incident) arrays[w] = merged;
        }
    }
    return m;
}

/// Independent oracle for analyze(): build the op-level dependency graph
/// (consecutive operations on a wire are chained, except across an
/// initialisation, which starts a fresh qubit) and run a forward search from
/// each init, collecting the measures it reaches. Quadratic-ish; intended
/// for small circuits.
inline ReachMatrix analyze_bruteforce(const Circuit& c) {
    reach_detail::require_flushed(c, "analyze_bruteforce");
    auto [order, index] = reach_detail::index_wires(c);
    const std::size_t q = order.size();

    ReachMatrix m;
    m.q = q;
    m.index_to_label = std::move(order);
    m.label_to_index = std::move(index);
    m.rows.assign(q, BitRow(q));

    const std::size_t n = c.ops.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::unordered_map<WireLabel, std::size_t> last_on_wire;
    for (std::size_t i = 0; i < n; ++i) {
        const Operation& op = c.ops[i];
        for (std::size_t k = 0; k < op.refs.size(); ++k) {
            const WireLabel& w = c.resolved_label(op, k);
            auto it = last_on_wire.find(w);
            if (it != last_on_wire.end() && op.kind != OpKind::Init) {
                succ[it->second].push_back(i);
            }
            last_on_wire[w] = i;
        }
    }

    std::vector<std::size_t> visited(n, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) {
        if (c.ops[i].kind != OpKind::Init) continue;
        const std::size_t row = m.label_to_index.at(c.resolved_label(c.ops[i], 0));
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            if (visited[v] == i) continue;
            visited[v] = i;
            if (c.ops[v].kind == OpKind::Measure) {
                m.rows[row].set(m.label_to_index.at(c.resolved_label(c.ops[v], 0)));
            }
            for (std::size_t s : succ[v]) stack.push_back(s);
        }
    }
    return m;
}

/// Bytes needed to store the full q x q reachability matrix.
inline std::uint64_t memory_estimate(std::uint64_t q) { return (q * q + 7) / 8; }

}  // namespace wirelab
