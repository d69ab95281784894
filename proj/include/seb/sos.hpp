#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "activity.hpp"
#include "control.hpp"
#include "diagnostic.hpp"
#include "wellformed.hpp"

namespace seb {

/// Raised when exploration exceeds its state budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on malformed internal nodes.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct Step {
    SymbolicAction action;
    LinkMap links;
    Activity residual;
};

namespace detail {

inline SymbolicAction atomic_action(const Activity& a) {
    switch (a.kind()) {
        case Kind::Ses: return SymbolicAction::ses_init(a.session(), a.partner());
        case Kind::Inv: return SymbolicAction::send(a.session(), a.op(), a.vars());
        case Kind::Rec: return SymbolicAction::recv(a.session(), a.op(), a.vars());
        default: throw InternalError("not an atomic activity");
    }
}

inline bool same_step(const Step& x, const Step& y) {
    return x.action == y.action && x.residual == y.residual && x.links == y.links;
}

inline void push_unique(std::vector<Step>& out, Step s) {
    for (const auto& o : out) {
        if (same_step(o, s)) return;
    }
    out.push_back(std::move(s));
}

class Stepper {
public:
    explicit Stepper(std::vector<Diagnostic>* notes) : notes_(notes) {}

    std::vector<Step> steps(const LinkMap& c, const Activity& a) {
        std::vector<Step> out;
        if (a.is_nil()) return out;
        if (a.kind() == Kind::Seq) throw ContractError("seq must be desugared before execution");
        Tri j = eval_join(c, a);
        if (j == Tri::Undef) return out;
        if (j == Tri::False) {
            if (a.from_pick()) note(DiagCode::PickWrapperFalse, "join of a pick residual evaluated to false");
            out.push_back({SymbolicAction::tau(), set_links(c, Tri::False, all_src(a)), Activity::nil()});
            return out;
        }
        switch (a.kind()) {
            case Kind::Ses:
            case Kind::Inv:
            case Kind::Rec:
                out.push_back({atomic_action(a), set_links(c, Tri::True, a.src()), Activity::nil()});
                break;
            case Kind::Flo: flo(c, a, out); break;
            case Kind::Pic: pic(c, a, out); break;
            case Kind::Rep: rep(c, a, out); break;
            case Kind::Unf: unf(c, a, out); break;
            default: break;
        }
        return out;
    }

private:
    std::vector<Diagnostic>* notes_;

    void note(DiagCode code, const std::string& msg) {
        if (notes_ && !has_code(*notes_, code)) notes_->push_back({code, msg, {}});
    }

    void flo(const LinkMap& c, const Activity& a, std::vector<Step>& out) {
        const auto& kids = a.children();
        if (kids.size() == 1 && kids[0].is_nil()) {
            out.push_back({SymbolicAction::tau(), set_links(c, Tri::True, a.src()), Activity::nil()});
            return;
        }
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (kids[i].is_nil()) {
                if (kids.size() < 2) continue;
                std::vector<Activity> rest;
                for (std::size_t k = 0; k < kids.size(); ++k) {
                    if (k != i) rest.push_back(kids[k]);
                }
                push_unique(out, {SymbolicAction::tau(), c, a.with_children(std::move(rest))});
                continue;
            }
            for (auto& s : steps(c, kids[i])) {
                auto next = kids;
                next[i] = std::move(s.residual);
                push_unique(out, {std::move(s.action), std::move(s.links), a.with_children(std::move(next))});
            }
        }
    }

    void pic(const LinkMap& c, const Activity& a, std::vector<Step>& out) {
        for (std::size_t i = 0; i < a.branch_count(); ++i) {
            const Activity& head = a.branch_head(i);
            if (head.kind() != Kind::Rec) throw InternalError("pick branch without a reception head");
            if (eval_join(c, head) != Tri::True) continue;
            LinkMap next = set_links(c, Tri::True, head.src());
            for (std::size_t k = 0; k < a.branch_count(); ++k) {
                if (k == i) continue;
                next = set_links(std::move(next), Tri::False, all_src(a.branch_head(k)));
                next = set_links(std::move(next), Tri::False, all_src(a.branch_body(k)));
            }
            push_unique(out, {atomic_action(head), std::move(next), Activity::pick_residual(a.branch_body(i), a.fields())});
        }
    }

    void rep(const LinkMap& c, const Activity& a, std::vector<Step>& out) {
        const Activity& d = a.do_pic();
        const Activity& u = a.until_pic();
        if (d.kind() != Kind::Pic || u.kind() != Kind::Pic) throw InternalError("rep parts must be picks");
        for (auto& s : steps(c, d)) {
            push_unique(out, {std::move(s.action), std::move(s.links), Activity::unf(std::move(s.residual), d, u, a.fields())});
        }
        for (auto& s : steps(c, u)) {
            push_unique(out, {std::move(s.action), std::move(s.links), Activity::flo({std::move(s.residual)}, a.fields())});
        }
    }

    void unf(const LinkMap& c, const Activity& a, std::vector<Step>& out) {
        if (a.children().size() != 3 || a.do_pic().kind() != Kind::Pic || a.until_pic().kind() != Kind::Pic)
            throw InternalError("malformed unf node");
        const Activity& body = a.unf_body();
        if (body.is_nil()) {
            const Activity& d = a.do_pic();
            if (!d.src().empty()) note(DiagCode::UnfNonVacuous, "loop restart sets outgoing links of the do pick");
            LinkMap next = set_links(c, Tri::Undef, strict_src(d));
            next = set_links(std::move(next), Tri::Undef, strict_tgt(d));
            next = set_links(std::move(next), Tri::True, d.src());
            out.push_back({SymbolicAction::tau(), std::move(next), Activity::rep(d, a.until_pic(), a.fields())});
            return;
        }
        for (auto& s : steps(c, body)) {
            push_unique(out, {std::move(s.action), std::move(s.links),
                              Activity::unf(std::move(s.residual), a.do_pic(), a.until_pic(), a.fields())});
        }
    }
};

}  // namespace detail

/// All transitions enabled from (c, act). `act` must be seq-free.
inline std::vector<Step> enabled_steps(const LinkMap& c, const Activity& act,
                                       std::vector<Diagnostic>* notes = nullptr) {
    return detail::Stepper(notes).steps(c, act);
}

struct RawGraphOptions {
    std::size_t max_states = 1000000;
};

struct RawGraph {
    ControlGraph graph;  // payloads always present
    Activity desugared;
    std::vector<Diagnostic> notes;
};

/// Explores every configuration reachable from the desugared activity with all links undefined.
inline RawGraph build_raw_cg(const Activity& act, const RawGraphOptions& opt = {}) {
    RawGraph r;
    r.desugared = desugar_seq(act);
    struct Hash {
        std::size_t operator()(const Payload& p) const {
            return hash_combine(p.residual.hash(), p.links.hash());
        }
    };
    struct Eq {
        bool operator()(const Payload& a, const Payload& b) const { return a.links == b.links && a.residual == b.residual; }
    };
    std::unordered_map<Payload, StateId, Hash, Eq> ids;
    std::vector<Payload> states;
    auto intern = [&](Payload p) {
        auto it = ids.find(p);
        if (it != ids.end()) return it->second;
        if (states.size() >= opt.max_states)
            throw ResourceError("state budget of " + std::to_string(opt.max_states) + " exceeded");
        StateId id = states.size();
        ids.emplace(p, id);
        states.push_back(std::move(p));
        return id;
    };
    intern({initial_link_map(r.desugared), r.desugared});
    std::vector<std::vector<Edge>> out;
    for (StateId s = 0; s < states.size(); ++s) {
        auto steps = enabled_steps(states[s].links, states[s].residual, &r.notes);
        std::stable_sort(steps.begin(), steps.end(), [](const Step& a, const Step& b) { return a.action < b.action; });
        std::vector<Edge> edges;
        for (auto& st : steps) edges.push_back({st.action, intern({std::move(st.links), std::move(st.residual)})});
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        out.push_back(std::move(edges));
    }
    r.graph.init = 0;
    r.graph.out = std::move(out);
    r.graph.payload = std::move(states);
    return r;
}

namespace detail {

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
    return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

inline std::uint64_t ub(const Activity& a) {
    switch (a.kind()) {
        case Kind::Nil: return 1;
        case Kind::Ses:
        case Kind::Inv:
        case Kind::Rec: return 2;
        case Kind::Rep: return sat_add(sat_add(ub(a.do_pic()), ub(a.until_pic())), 1);
        case Kind::Flo: {
            std::uint64_t p = 1;
            for (const auto& c : a.children()) p = sat_mul(p, sat_add(ub(c), 1));
            return sat_add(p, 1);
        }
        case Kind::Pic: {
            std::uint64_t s = 0;
            for (std::size_t i = 0; i < a.branch_count(); ++i) s = sat_add(s, sat_add(ub(a.branch_body(i)), 2));
            return sat_add(s, 1);
        }
        default: throw ContractError(std::string("no state bound for ") + kind_name(a.kind()));
    }
}

}  // namespace detail

/// Upper bound on the raw graph size, computed on the seq-free form; saturates at 2^64-1.
inline std::uint64_t state_upper_bound(const Activity& act) { return detail::ub(desugar_seq(act)); }

}  // namespace seb
