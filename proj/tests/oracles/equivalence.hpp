#pragma once

// Naive equivalence and trace checks used as independent references.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "seb/control.hpp"

namespace seb::testing {

/// Simple labelled graph with string labels; "tau" is the silent label.
struct Lts {
    std::size_t init = 0;
    std::vector<std::vector<std::pair<std::string, std::size_t>>> out;
};

inline Lts to_lts(const ControlGraph& g) {
    Lts l;
    l.init = g.init;
    l.out.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
        for (const auto& e : g.out[s]) l.out[s].push_back({e.action.to_string(), e.to});
    }
    return l;
}

/// Branching bisimilarity of the initial states, by signature refinement on the
/// disjoint union. Inert tau paths stay inside the current block.
inline bool branching_bisimilar(const Lts& a, const Lts& b) {
    std::size_t n = a.out.size() + b.out.size();
    std::vector<std::vector<std::pair<std::string, std::size_t>>> out(n);
    for (std::size_t s = 0; s < a.out.size(); ++s) out[s] = a.out[s];
    for (std::size_t s = 0; s < b.out.size(); ++s) {
        for (const auto& [l, t] : b.out[s]) out[a.out.size() + s].push_back({l, a.out.size() + t});
    }
    std::vector<std::size_t> block(n, 0);
    std::size_t count = 1;
    while (true) {
        std::map<std::set<std::pair<std::string, std::size_t>>, std::size_t> ids;
        std::vector<std::size_t> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::set<std::pair<std::string, std::size_t>> sig;
            std::vector<std::size_t> work{s};
            std::set<std::size_t> seen{s};
            while (!work.empty()) {
                std::size_t u = work.back();
                work.pop_back();
                for (const auto& [l, t] : out[u]) {
                    if (l == "tau" && block[t] == block[s]) {
                        if (seen.insert(t).second) work.push_back(t);
                        continue;
                    }
                    sig.insert({l, block[t]});
                }
            }
            sig.insert({"#block", block[s]});
            next[s] = ids.try_emplace(sig, ids.size()).first->second;
        }
        block = next;
        if (ids.size() == count) break;
        count = ids.size();
    }
    return block[a.init] == block[a.out.size() + b.init];
}

/// Observable traces of `g` up to `max_len` actions, tau erased.
inline std::set<std::vector<std::string>> traces(const Lts& g, std::size_t max_len) {
    std::set<std::vector<std::string>> out;
    std::vector<std::string> cur;
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t s, std::size_t taus) {
        out.insert(cur);
        if (taus > g.out.size()) return;
        for (const auto& [l, t] : g.out[s]) {
            if (l == "tau") {
                walk(t, taus + 1);
            } else if (cur.size() < max_len) {
                cur.push_back(l);
                walk(t, 0);
                cur.pop_back();
            }
        }
    };
    walk(g.init, 0);
    return out;
}

/// True when `trace` is a weak trace of `g`.
inline bool has_weak_trace(const Lts& g, const std::vector<std::string>& trace) {
    auto closure = [&](std::set<std::size_t> s) {
        std::vector<std::size_t> work(s.begin(), s.end());
        while (!work.empty()) {
            std::size_t u = work.back();
            work.pop_back();
            for (const auto& [l, t] : g.out[u]) {
                if (l == "tau" && s.insert(t).second) work.push_back(t);
            }
        }
        return s;
    };
    std::set<std::size_t> cur = closure({g.init});
    for (const auto& a : trace) {
        std::set<std::size_t> next;
        for (auto u : cur) {
            for (const auto& [l, t] : g.out[u]) {
                if (l == a) next.insert(t);
            }
        }
        cur = closure(next);
        if (cur.empty()) return false;
    }
    return true;
}

}  // namespace seb::testing
