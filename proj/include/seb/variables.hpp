#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "activity.hpp"
#include "control.hpp"
#include "diagnostic.hpp"
#include "transforms.hpp"
#include "wellformed.hpp"

namespace seb {

/// Runtime value of a variable.
struct Value {
    enum class Kind { Data, ServiceLoc, SessionId };

    Kind kind = Kind::Data;
    std::string text;

    static Value data(std::string t) { return {Kind::Data, std::move(t)}; }
    static Value location(std::string t) { return {Kind::ServiceLoc, std::move(t)}; }
    static Value session(std::string t) { return {Kind::SessionId, std::move(t)}; }

    auto operator<=>(const Value&) const = default;
    bool operator==(const Value&) const = default;

    std::string to_string() const {
        switch (kind) {
            case Kind::Data: return "\"" + text + "\"";
            case Kind::ServiceLoc: return "@" + text;
            case Kind::SessionId: return text;
        }
        return text;
    }
};

/// Variable assignment; a variable mapped to nullopt is in the domain but undefined.
using VarMap = std::map<VarName, std::optional<Value>>;

struct VarReport {
    std::set<VarName> all;
    std::set<VarName> binding;
    std::set<VarName> usage;
    std::set<VarName> free;
    std::vector<Diagnostic> forbidden;
};

/// Binding and usage occurrences, plus forbidden ones: a reception binding p0 or a session opened on s0.
inline VarReport classify_occurrences(const Activity& act) {
    VarReport r;
    Path cur;
    std::function<void(const Activity&)> walk = [&](const Activity& a) {
        switch (a.kind()) {
            case Kind::Ses:
                r.binding.insert(a.session());
                r.usage.insert(a.partner());
                if (a.session() == "s0") r.forbidden.push_back({DiagCode::S0Init, "session s0 cannot be opened", cur});
                break;
            case Kind::Inv:
                r.usage.insert(a.session());
                r.usage.insert(a.vars().begin(), a.vars().end());
                break;
            case Kind::Rec:
                r.usage.insert(a.session());
                r.binding.insert(a.vars().begin(), a.vars().end());
                for (const auto& v : a.vars()) {
                    if (v == "p0") r.forbidden.push_back({DiagCode::P0Rebound, "a reception cannot bind p0", cur});
                }
                break;
            default: break;
        }
        for (std::size_t i = 0; i < a.children().size(); ++i) {
            cur.push_back(i);
            walk(a.children()[i]);
            cur.pop_back();
        }
    };
    walk(act);
    r.all = r.binding;
    r.all.insert(r.usage.begin(), r.usage.end());
    return r;
}

inline std::set<VarName> action_binds(const SymbolicAction& a) {
    if (a.kind == SymbolicAction::Kind::SesInit) return {a.session};
    if (a.kind == SymbolicAction::Kind::Recv) return {a.args.begin(), a.args.end()};
    return {};
}

inline std::set<VarName> action_uses(const SymbolicAction& a) {
    switch (a.kind) {
        case SymbolicAction::Kind::SesInit: return {a.name};
        case SymbolicAction::Kind::Send: {
            std::set<VarName> u(a.args.begin(), a.args.end());
            u.insert(a.session);
            return u;
        }
        case SymbolicAction::Kind::Recv: return {a.session};
        case SymbolicAction::Kind::Tau: return {};
    }
    return {};
}

/// Variables used on some path from the initial state before any binding of them.
inline std::set<VarName> free_vars(const ControlGraph& g) {
    std::set<VarName> candidates;
    for (const auto& edges : g.out) {
        for (const auto& e : edges) {
            auto u = action_uses(e.action);
            candidates.insert(u.begin(), u.end());
        }
    }
    std::set<VarName> free;
    for (const auto& z : candidates) {
        // States reachable without binding z; z is free if one of them has an edge using it.
        std::vector<bool> seen(g.num_states(), false);
        std::vector<StateId> work{g.init};
        seen[g.init] = true;
        bool found = false;
        while (!work.empty() && !found) {
            StateId s = work.back();
            work.pop_back();
            for (const auto& e : g.out[s]) {
                if (action_uses(e.action).count(z)) {
                    found = true;
                    break;
                }
                if (action_binds(e.action).count(z) || seen[e.to]) continue;
                seen[e.to] = true;
                work.push_back(e.to);
            }
        }
        if (found) free.insert(z);
    }
    return free;
}

/// Free variables of an activity, computed on its tau-compressed graph.
inline std::set<VarName> free_vars(const Activity& act) { return free_vars(run_pipeline(act).compressed); }

/// Occurrence classes together with the free variables.
inline VarReport var_report(const Activity& act) {
    VarReport r = classify_occurrences(act);
    r.free = free_vars(act);
    return r;
}

/// True when `state` has an outgoing reception on session variable `s`.
inline bool open_for_reception(const ControlGraph& g, StateId state, const VarName& s) {
    for (const auto& e : g.out[state]) {
        if (e.action.kind == SymbolicAction::Kind::Recv && e.action.session == s) return true;
    }
    return false;
}

/// Conditions for deploying `pic` as a service under assignment `m`. `fv` are its free variables.
inline std::vector<Diagnostic> check_deployable(const VarMap& m, const Activity& pic, const std::set<VarName>& fv) {
    std::vector<Diagnostic> out;
    if (pic.kind() != Kind::Pic) {
        out.push_back({DiagCode::RootSession, "a service must be a pick", {}});
    } else {
        for (std::size_t i = 0; i < pic.branch_count(); ++i) {
            if (pic.branch_head(i).session() != "s0") {
                out.push_back({DiagCode::RootSession, "every branch of a service must receive on s0", {2 * i}});
                break;
            }
        }
    }
    if (!fv.count("p0")) out.push_back({DiagCode::P0NotFree, "p0 is not a free variable", {}});
    if (!fv.count("s0")) out.push_back({DiagCode::S0NotFree, "s0 is not a free variable", {}});
    auto kinds = infer_var_kinds(pic);
    for (const auto& v : fv) {
        if (v != "s0" && kinds.count(v) && kinds.at(v) == VarKind::Session) {
            out.push_back({DiagCode::ExtraFreeSession, "session variable " + v + " is free", {}});
            break;
        }
    }
    auto rep = classify_occurrences(pic);
    std::set<VarName> dom;
    for (const auto& [v, val] : m) dom.insert(v);
    if (dom != rep.all) out.push_back({DiagCode::DomainMismatch, "the assignment's domain differs from the variables", {}});
    for (const auto& [v, val] : m) {
        if (val && !fv.count(v)) {
            out.push_back({DiagCode::BoundDefined, "non-free variable " + v + " has a value", {}});
            break;
        }
    }
    for (const auto& v : fv) {
        if (v == "s0") continue;
        auto it = m.find(v);
        if (it == m.end() || !it->second) {
            out.push_back({DiagCode::UndefinedFree, "free variable " + v + " has no value", {}});
            break;
        }
    }
    out.insert(out.end(), rep.forbidden.begin(), rep.forbidden.end());
    return out;
}

inline std::vector<Diagnostic> check_deployable(const VarMap& m, const Activity& pic) {
    return check_deployable(m, pic, free_vars(pic));
}

}  // namespace seb
