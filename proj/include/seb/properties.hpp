#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "control.hpp"

namespace seb {

/// A tau transition and a second transition from the same state with no joining square.
struct ConfluenceViolation {
    StateId state;
    StateId tau_target;
    SymbolicAction other;
    StateId other_target;

    std::string to_string() const {
        return "state " + std::to_string(state) + ": tau to " + std::to_string(tau_target) + " and " + other.to_string() +
               " to " + std::to_string(other_target) + " do not commute";
    }
};

/// States of some cycle made only of tau transitions, if any.
inline std::optional<std::vector<StateId>> find_tau_cycle(const ControlGraph& g) {
    enum : char { White, Grey, Black };
    std::vector<char> colour(g.num_states(), White);
    std::vector<StateId> parent(g.num_states(), 0);
    for (StateId root = 0; root < g.num_states(); ++root) {
        if (colour[root] != White) continue;
        std::vector<std::pair<StateId, std::size_t>> stack{{root, 0}};
        colour[root] = Grey;
        while (!stack.empty()) {
            auto& [s, i] = stack.back();
            if (i == g.out[s].size()) {
                colour[s] = Black;
                stack.pop_back();
                continue;
            }
            const Edge& e = g.out[s][i++];
            if (!e.action.is_tau()) continue;
            if (colour[e.to] == Grey) {
                std::vector<StateId> cycle{e.to};
                for (std::size_t k = stack.size(); k-- > 0 && stack[k].first != e.to;) cycle.push_back(stack[k].first);
                return cycle;
            }
            if (colour[e.to] == White) {
                colour[e.to] = Grey;
                stack.push_back({e.to, 0});
            }
        }
    }
    return std::nullopt;
}

/// First violation of strong tau-confluence: for g -tau-> g1 and a distinct g -a-> g2
/// there must be g' with g1 -a-> g' and g2 -tau-> g'.
inline std::optional<ConfluenceViolation> find_confluence_violation(const ControlGraph& g) {
    auto has = [&](StateId s, const SymbolicAction& a, StateId t) {
        for (const auto& e : g.out[s]) {
            if (e.to == t && e.action == a) return true;
        }
        return false;
    };
    for (StateId s = 0; s < g.num_states(); ++s) {
        for (const auto& t : g.out[s]) {
            if (!t.action.is_tau()) continue;
            for (const auto& o : g.out[s]) {
                if (o == t) continue;
                bool joined = false;
                for (const auto& e : g.out[t.to]) {
                    if (e.action == o.action && has(o.to, SymbolicAction::tau(), e.to)) {
                        joined = true;
                        break;
                    }
                }
                if (!joined) return ConfluenceViolation{s, t.to, o.action, o.to};
            }
        }
    }
    return std::nullopt;
}

/// Sinks whose residual activity is not nil; requires payloads.
inline std::vector<StateId> sinks_with_residual(const ControlGraph& g) {
    std::vector<StateId> v;
    if (!g.payload) throw ContractError("graph has no payloads");
    for (auto s : g.sinks()) {
        if (!(*g.payload)[s].residual.is_nil()) v.push_back(s);
    }
    return v;
}

/// States from which no sink is reachable.
inline std::vector<StateId> states_not_reaching_sink(const ControlGraph& g) {
    std::vector<std::vector<StateId>> rev(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
        for (const auto& e : g.out[s]) rev[e.to].push_back(s);
    }
    std::vector<bool> ok(g.num_states(), false);
    std::vector<StateId> work = g.sinks();
    for (auto s : work) ok[s] = true;
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        for (auto p : rev[s]) {
            if (!ok[p]) {
                ok[p] = true;
                work.push_back(p);
            }
        }
    }
    std::vector<StateId> bad;
    for (StateId s = 0; s < g.num_states(); ++s) {
        if (!ok[s]) bad.push_back(s);
    }
    return bad;
}

/// Every state's outgoing transitions are all tau or all observable.
inline bool is_tau_homogeneous(const ControlGraph& g) {
    for (const auto& edges : g.out) {
        bool tau = false, obs = false;
        for (const auto& e : edges) (e.action.is_tau() ? tau : obs) = true;
        if (tau && obs) return false;
    }
    return true;
}

inline bool is_tau_free(const ControlGraph& g) {
    for (const auto& edges : g.out) {
        for (const auto& e : edges) {
            if (e.action.is_tau()) return false;
        }
    }
    return true;
}

/// Every state's outgoing transitions share one priority class.
inline bool is_single_priority_class(const ControlGraph& g) {
    for (const auto& edges : g.out) {
        for (const auto& e : edges) {
            if (priority_class(e.action) != priority_class(edges.front().action)) return false;
        }
    }
    return true;
}

/// Results of checking the four structural properties of a raw graph.
struct PropertyReport {
    std::uint64_t bound = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

/// Checks state bound, absence of tau cycles, tau-confluence, nil sinks and sink reachability.
inline PropertyReport check_raw_properties(const ControlGraph& raw, std::uint64_t bound) {
    PropertyReport r;
    r.bound = bound;
    if (raw.num_states() > bound)
        r.violations.push_back("state count " + std::to_string(raw.num_states()) + " exceeds bound " + std::to_string(bound));
    if (auto c = find_tau_cycle(raw)) r.violations.push_back("tau cycle through state " + std::to_string(c->front()));
    if (auto v = find_confluence_violation(raw)) r.violations.push_back("not tau-confluent: " + v->to_string());
    if (raw.payload) {
        for (auto s : sinks_with_residual(raw))
            r.violations.push_back("sink " + std::to_string(s) + " has a residual activity");
    }
    auto stuck = states_not_reaching_sink(raw);
    if (!stuck.empty()) r.violations.push_back("state " + std::to_string(stuck.front()) + " cannot reach a sink");
    return r;
}

}  // namespace seb
