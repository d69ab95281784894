#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "control.hpp"
#include "properties.hpp"
#include "sos.hpp"

namespace seb {

/// Raised when a transformation's input does not satisfy its precondition.
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Keeps only the tau transitions of every state that has one. Requires a
/// tau-confluent graph without tau cycles.
inline ControlGraph tau_prioritize(const ControlGraph& g) {
    if (auto c = find_tau_cycle(g)) throw PreconditionError("tau cycle through state " + std::to_string(c->front()));
    if (auto v = find_confluence_violation(g)) throw PreconditionError("not tau-confluent: " + v->to_string());
    ControlGraph r = g;
    for (auto& edges : r.out) {
        bool tau = false;
        for (const auto& e : edges) tau = tau || e.action.is_tau();
        if (!tau) continue;
        std::vector<Edge> keep;
        for (const auto& e : edges) {
            if (e.action.is_tau()) keep.push_back(e);
        }
        edges = std::move(keep);
    }
    return canonicalize(r);
}

/// Collapses each all-tau state onto the observable state reached by
/// following its least tau successor. The result has no tau transitions.
inline ControlGraph tau_compress(const ControlGraph& g) {
    if (!is_tau_homogeneous(g)) throw PreconditionError("graph mixes tau and observable transitions in a state");
    const StateId none = static_cast<StateId>(-1);
    std::vector<StateId> rep(g.num_states(), none);
    std::vector<bool> on_path(g.num_states(), false);
    auto next_tau = [&](StateId s) {
        StateId best = none;
        for (const auto& e : g.out[s]) {
            if (e.action.is_tau() && (best == none || e.to < best)) best = e.to;
        }
        return best;
    };
    for (StateId s = 0; s < g.num_states(); ++s) {
        std::vector<StateId> path;
        StateId cur = s;
        while (rep[cur] == none) {
            StateId n = next_tau(cur);
            if (n == none) {
                rep[cur] = cur;
                break;
            }
            if (on_path[cur]) throw PreconditionError("tau loop through state " + std::to_string(cur));
            on_path[cur] = true;
            path.push_back(cur);
            cur = n;
        }
        for (auto p : path) {
            rep[p] = rep[cur];
            on_path[p] = false;
        }
    }
    ControlGraph r;
    r.init = rep[g.init];
    r.out.resize(g.num_states());
    for (StateId s = 0; s < g.num_states(); ++s) {
        if (rep[s] != s) continue;
        for (const auto& e : g.out[s]) r.out[s].push_back({e.action, rep[e.to]});
    }
    r.payload = g.payload;
    return canonicalize(r);
}

/// Keeps, at every state, only the transitions of the most urgent priority
/// class present: tau, then send, then session initiation, then reception.
inline ControlGraph run_to_completion(const ControlGraph& g) {
    ControlGraph r = g;
    for (auto& edges : r.out) {
        int best = 4;
        for (const auto& e : edges) best = std::min(best, priority_class(e.action));
        std::vector<Edge> keep;
        for (const auto& e : edges) {
            if (priority_class(e.action) == best) keep.push_back(e);
        }
        edges = std::move(keep);
    }
    return canonicalize(r);
}

/// Strong bisimulation classes by naive signature refinement; block ids are
/// assigned in order of first member.
inline std::vector<std::size_t> bisimulation_blocks(const ControlGraph& g, std::size_t* rounds = nullptr) {
    std::vector<std::size_t> block(g.num_states(), 0);
    std::size_t count = g.num_states() ? 1 : 0;
    std::size_t n = 0;
    while (true) {
        ++n;
        std::map<std::pair<std::size_t, std::vector<std::pair<SymbolicAction, std::size_t>>>, std::size_t> ids;
        std::vector<std::size_t> next(g.num_states());
        for (StateId s = 0; s < g.num_states(); ++s) {
            std::vector<std::pair<SymbolicAction, std::size_t>> sig;
            for (const auto& e : g.out[s]) sig.emplace_back(e.action, block[e.to]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            auto [it, fresh] = ids.try_emplace({block[s], std::move(sig)}, ids.size());
            next[s] = it->second;
        }
        block = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }
    if (rounds) *rounds = n;
    return block;
}

/// Quotient of `g` by strong bisimilarity. Payloads are dropped.
inline ControlGraph minimize(const ControlGraph& g) {
    auto block = bisimulation_blocks(g);
    std::size_t nb = 0;
    for (auto b : block) nb = std::max(nb, b + 1);
    ControlGraph r;
    r.init = block[g.init];
    r.out.resize(nb);
    std::vector<bool> done(nb, false);
    for (StateId s = 0; s < g.num_states(); ++s) {
        if (done[block[s]]) continue;
        done[block[s]] = true;
        for (const auto& e : g.out[s]) r.out[block[s]].push_back({e.action, block[e.to]});
    }
    return canonicalize(r);
}

/// True when no two distinct states of `g` are strongly bisimilar.
inline bool is_minimal(const ControlGraph& g) {
    auto block = bisimulation_blocks(g);
    std::vector<bool> seen(g.num_states(), false);
    for (auto b : block) {
        if (seen[b]) return false;
        seen[b] = true;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Pipeline

enum class Stage { Raw, Prio, Compress, Rtc, Min };

inline const char* stage_name(Stage s) {
    switch (s) {
        case Stage::Raw: return "raw";
        case Stage::Prio: return "prio";
        case Stage::Compress: return "compress";
        case Stage::Rtc: return "rtc";
        case Stage::Min: return "min";
    }
    return "?";
}

struct PipelineOptions {
    std::size_t max_states = 1000000;
    bool rtc_before_compress = false;
    bool keep_payloads = false;  // retain payloads on prio, compress and rtc graphs
    bool check_stages = false;   // verify each stage's postcondition
};

struct Pipeline {
    RawGraph raw;
    ControlGraph prio;
    ControlGraph compressed;
    ControlGraph rtc;
    ControlGraph min;

    const ControlGraph& stage(Stage s) const {
        switch (s) {
            case Stage::Raw: return raw.graph;
            case Stage::Prio: return prio;
            case Stage::Compress: return compressed;
            case Stage::Rtc: return rtc;
            case Stage::Min: return min;
        }
        return min;
    }
};

/// Verifies the postcondition of one stage; returns a description of each failure.
inline std::vector<std::string> check_stage(Stage s, const ControlGraph& g) {
    std::vector<std::string> bad;
    switch (s) {
        case Stage::Raw: break;
        case Stage::Prio:
            if (!is_tau_homogeneous(g)) bad.push_back("prio: a state mixes tau and observable transitions");
            break;
        case Stage::Compress:
            if (!is_tau_free(g)) bad.push_back("compress: tau transitions remain");
            break;
        case Stage::Rtc:
            if (!is_single_priority_class(g)) bad.push_back("rtc: a state mixes priority classes");
            break;
        case Stage::Min:
            if (!is_minimal(g)) bad.push_back("min: graph is not minimal");
            if (g.sinks().size() != 1) bad.push_back("min: expected one terminal state, found " + std::to_string(g.sinks().size()));
            break;
    }
    return bad;
}

/// Runs every stage of the compilation pipeline on `act`.
inline Pipeline run_pipeline(const Activity& act, const PipelineOptions& opt = {}) {
    Pipeline p;
    p.raw = build_raw_cg(act, {opt.max_states});
    p.prio = tau_prioritize(p.raw.graph);
    if (opt.rtc_before_compress) {
        p.rtc = tau_compress(run_to_completion(p.prio));
        p.compressed = tau_compress(p.prio);
    } else {
        p.compressed = tau_compress(p.prio);
        p.rtc = run_to_completion(p.compressed);
    }
    p.min = minimize(p.rtc);
    if (!opt.keep_payloads) {
        p.prio.payload.reset();
        p.compressed.payload.reset();
        p.rtc.payload.reset();
    }
    if (opt.check_stages) {
        std::vector<std::string> bad;
        for (Stage s : {Stage::Prio, Stage::Compress, Stage::Rtc, Stage::Min}) {
            auto b = check_stage(s, p.stage(s));
            bad.insert(bad.end(), b.begin(), b.end());
        }
        if (!bad.empty()) throw InternalError(bad.front());
    }
    return p;
}

/// Minimal control graph of `act`.
inline ControlGraph compile(const Activity& act, const PipelineOptions& opt = {}) { return run_pipeline(act, opt).min; }

}  // namespace seb
