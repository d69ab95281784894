#pragma once

#include <algorithm>
#include <compare>
#include <initializer_list>
#include <memory>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "activity.hpp"

namespace seb {

enum class Tri { False, True, Undef };

inline const char* tri_name(Tri t) { return t == Tri::True ? "true" : t == Tri::False ? "false" : "undef"; }

/// Status of every link of an activity. Values share one immutable, sorted
/// table of names, so copies only duplicate the status vector.
class LinkMap {
public:
    LinkMap() : names_(std::make_shared<const std::vector<LinkName>>()) {}

    /// Every link of `names` mapped to Undef.
    explicit LinkMap(LinkSet names)
        : names_(std::make_shared<const std::vector<LinkName>>(std::move(names))), values_(names_->size(), Tri::Undef) {}

    LinkMap(std::initializer_list<std::pair<LinkName, Tri>> entries) {
        std::vector<LinkName> names;
        for (const auto& e : entries) names.push_back(e.first);
        names_ = std::make_shared<const std::vector<LinkName>>(make_link_set(std::move(names)));
        values_.assign(names_->size(), Tri::Undef);
        for (const auto& e : entries) set(e.first, e.second);
    }

    std::size_t size() const { return values_.size(); }
    const LinkName& name(std::size_t i) const { return (*names_)[i]; }
    Tri value(std::size_t i) const { return values_[i]; }
    const std::vector<LinkName>& names() const { return *names_; }

    std::optional<std::size_t> index(const LinkName& l) const {
        auto it = std::lower_bound(names_->begin(), names_->end(), l);
        if (it == names_->end() || *it != l) return std::nullopt;
        return static_cast<std::size_t>(it - names_->begin());
    }

    bool contains(const LinkName& l) const { return index(l).has_value(); }

    Tri at(const LinkName& l) const { return values_[require(l)]; }

    void set(const LinkName& l, Tri v) { values_[require(l)] = v; }

    std::size_t hash() const {
        std::size_t h = values_.size();
        for (auto v : values_) h = h * 3 + static_cast<std::size_t>(v);
        return h;
    }

    friend bool operator==(const LinkMap& a, const LinkMap& b) {
        return a.values_ == b.values_ && (a.names_ == b.names_ || *a.names_ == *b.names_);
    }

private:
    std::size_t require(const LinkName& l) const {
        auto i = index(l);
        if (!i) throw ContractError("link " + l + " is not in the domain of the link map");
        return *i;
    }

    std::shared_ptr<const std::vector<LinkName>> names_;
    std::vector<Tri> values_;
};

/// Every link of `act` mapped to Undef.
inline LinkMap initial_link_map(const Activity& act) { return LinkMap(all_links(act)); }

/// Returns a copy of `c` with every link of `links` set to `v`.
inline LinkMap set_links(LinkMap c, Tri v, const LinkSet& links) {
    for (const auto& l : links) c.set(l, v);
    return c;
}

namespace detail {

// Evaluates every leaf so that out-of-range references are always reported.
inline Tri eval_checked(const LinkMap& c, const JoinExpr& e, const LinkSet& targets) {
    switch (e.op()) {
        case JoinExpr::Op::Lit: return e.value() ? Tri::True : Tri::False;
        case JoinExpr::Op::Link:
            if (!contains(targets, e.link_name()))
                throw ContractError("join condition refers to " + e.link_name() + " outside the incoming links");
            return c.at(e.link_name());
        case JoinExpr::Op::Not: {
            Tri a = eval_checked(c, e.lhs(), targets);
            return a == Tri::Undef ? a : a == Tri::True ? Tri::False : Tri::True;
        }
        case JoinExpr::Op::And:
        case JoinExpr::Op::Or: {
            Tri a = eval_checked(c, e.lhs(), targets);
            Tri b = eval_checked(c, e.rhs(), targets);
            if (a == Tri::Undef || b == Tri::Undef) return Tri::Undef;
            bool r = e.op() == JoinExpr::Op::And ? (a == Tri::True && b == Tri::True) : (a == Tri::True || b == Tri::True);
            return r ? Tri::True : Tri::False;
        }
    }
    return Tri::Undef;
}

}  // namespace detail

/// Evaluates a join condition once every incoming link is defined; Undef otherwise.
inline Tri eval_join(const LinkMap& c, const JoinExpr& e, const LinkSet& targets) {
    bool undefined = false;
    for (const auto& l : targets) undefined = undefined || c.at(l) == Tri::Undef;
    Tri r = detail::eval_checked(c, e, targets);
    return undefined ? Tri::Undef : r;
}

inline Tri eval_join(const LinkMap& c, const Activity& a) { return eval_join(c, a.jcd(), a.tgt()); }

// ---------------------------------------------------------------------------
// Actions

/// Observable or silent label of a transition. The declaration order of the
/// kinds is the canonical ordering tag.
struct SymbolicAction {
    enum class Kind { SesInit, Send, Recv, Tau };

    Kind kind = Kind::Tau;
    VarName session;
    std::string name;  // partner variable for SesInit, operation otherwise
    std::vector<VarName> args;

    static SymbolicAction tau() { return {}; }
    static SymbolicAction ses_init(VarName s, VarName p) { return {Kind::SesInit, std::move(s), std::move(p), {}}; }
    static SymbolicAction send(VarName s, std::string op, std::vector<VarName> a) {
        return {Kind::Send, std::move(s), std::move(op), std::move(a)};
    }
    static SymbolicAction recv(VarName s, std::string op, std::vector<VarName> a) {
        return {Kind::Recv, std::move(s), std::move(op), std::move(a)};
    }

    bool is_tau() const { return kind == Kind::Tau; }

    auto operator<=>(const SymbolicAction&) const = default;
    bool operator==(const SymbolicAction&) const = default;

    std::string to_string() const {
        auto list = [&] {
            std::string out = "(";
            for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
            return out + ")";
        };
        switch (kind) {
            case Kind::SesInit: return session + "@" + name;
            case Kind::Send: return session + "!" + name + list();
            case Kind::Recv: return session + "?" + name + list();
            case Kind::Tau: return "tau";
        }
        return "?";
    }
};

/// Priority class for run-to-completion; lower is more urgent.
inline int priority_class(const SymbolicAction& a) {
    switch (a.kind) {
        case SymbolicAction::Kind::Tau: return 0;
        case SymbolicAction::Kind::Send: return 1;
        case SymbolicAction::Kind::SesInit: return 2;
        case SymbolicAction::Kind::Recv: return 3;
    }
    return 4;
}

// ---------------------------------------------------------------------------
// Control graphs

using StateId = std::size_t;

struct Edge {
    SymbolicAction action;
    StateId to;

    auto operator<=>(const Edge&) const = default;
    bool operator==(const Edge&) const = default;
};

struct Transition {
    StateId from;
    SymbolicAction action;
    StateId to;
};

/// Link map and residual activity of a raw state.
struct Payload {
    LinkMap links;
    Activity residual;
};

/// Finite labelled transition system with dense state ids.
struct ControlGraph {
    StateId init = 0;
    std::vector<std::vector<Edge>> out;
    std::optional<std::vector<Payload>> payload;

    std::size_t num_states() const { return out.size(); }

    std::size_t num_transitions() const {
        std::size_t n = 0;
        for (const auto& e : out) n += e.size();
        return n;
    }

    std::vector<Transition> transitions() const {
        std::vector<Transition> t;
        for (StateId s = 0; s < out.size(); ++s) {
            for (const auto& e : out[s]) t.push_back({s, e.action, e.to});
        }
        return t;
    }

    std::vector<StateId> sinks() const {
        std::vector<StateId> v;
        for (StateId s = 0; s < out.size(); ++s) {
            if (out[s].empty()) v.push_back(s);
        }
        return v;
    }
};

/// Renumbers the states reachable from init in breadth-first order, visiting
/// edges in canonical order. Unreachable states are dropped and payloads follow
/// their states.
inline ControlGraph canonicalize(const ControlGraph& g) {
    std::vector<StateId> fresh(g.num_states(), static_cast<StateId>(-1));
    std::vector<StateId> order{g.init};
    fresh[g.init] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto edges = g.out[order[i]];
        std::sort(edges.begin(), edges.end());
        for (const auto& e : edges) {
            if (fresh[e.to] == static_cast<StateId>(-1)) {
                fresh[e.to] = order.size();
                order.push_back(e.to);
            }
        }
    }
    ControlGraph r;
    r.init = 0;
    r.out.resize(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& e : g.out[order[i]]) r.out[i].push_back({e.action, fresh[e.to]});
        std::sort(r.out[i].begin(), r.out[i].end());
        r.out[i].erase(std::unique(r.out[i].begin(), r.out[i].end()), r.out[i].end());
    }
    if (g.payload) {
        r.payload.emplace();
        for (auto s : order) r.payload->push_back((*g.payload)[s]);
    }
    return r;
}

/// The unique sink of `g`; throws when there is not exactly one.
inline StateId term_state(const ControlGraph& g) {
    auto s = g.sinks();
    if (s.size() != 1) throw ContractError("graph has " + std::to_string(s.size()) + " terminal states, expected one");
    return s.front();
}

inline std::string link_map_to_string(const LinkMap& c) {
    std::string out = "{";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + c.name(i) + "=" + tri_name(c.value(i));
    return out + "}";
}

}  // namespace seb
