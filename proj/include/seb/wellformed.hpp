#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "activity.hpp"
#include "diagnostic.hpp"

namespace seb {

enum class VarKind { Session, Location, Value };

namespace detail {

struct Occ {
    Path path;
    const Activity* act;
};

inline std::vector<Occ> occurrences(const Activity& root) {
    std::vector<Occ> out;
    Path cur;
    std::function<void(const Activity&)> walk = [&](const Activity& a) {
        if (a.kind() == Kind::Unf) throw ContractError("unexpected internal unf node in source activity");
        out.push_back({cur, &a});
        for (std::size_t i = 0; i < a.children().size(); ++i) {
            cur.push_back(i);
            walk(a.children()[i]);
            cur.pop_back();
        }
    };
    walk(root);
    return out;
}

inline void check_unicity(const std::vector<Occ>& occ, std::vector<Diagnostic>& out) {
    const char* names[3] = {"lnk", "src", "tgt"};
    for (int field = 0; field < 3; ++field) {
        std::map<LinkName, std::vector<std::size_t>> seen;
        for (std::size_t i = 0; i < occ.size(); ++i) {
            const Activity& a = *occ[i].act;
            const LinkSet& s = field == 0 ? a.lnk() : field == 1 ? a.src() : a.tgt();
            for (const auto& l : s) seen[l].push_back(i);
        }
        for (const auto& [l, idx] : seen) {
            if (idx.size() > 1) {
                out.push_back({DiagCode::DupLink,
                               "link " + l + " occurs in " + std::to_string(idx.size()) + " " + names[field] + " sets",
                               occ[idx[1]].path});
            }
        }
    }
}

inline void check_scoping(const Activity& root, const std::vector<Occ>& occ, std::vector<Diagnostic>& out) {
    auto scoped = [&](const Path& p, const LinkName& l, bool outgoing) {
        for (std::size_t len = 0; len <= p.size(); ++len) {
            Path anc(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(len));
            if (!contains(resolve(root, anc).lnk(), l)) continue;
            for (const auto& o : occ) {
                if (!is_prefix(anc, o.path)) continue;
                if (contains(outgoing ? o.act->tgt() : o.act->src(), l)) return true;
            }
        }
        return false;
    };
    for (const auto& o : occ) {
        for (const auto& l : o.act->src()) {
            if (!scoped(o.path, l, true))
                out.push_back({DiagCode::UnscopedLink, "outgoing link " + l + " has no enclosing flo declaring it", o.path});
        }
        for (const auto& l : o.act->tgt()) {
            if (!scoped(o.path, l, false))
                out.push_back({DiagCode::UnscopedLink, "incoming link " + l + " has no enclosing flo declaring it", o.path});
        }
        for (const auto& l : o.act->jcd().leaves()) {
            if (!contains(o.act->tgt(), l))
                out.push_back({DiagCode::JoinLink, "join condition refers to " + l + ", which is not an incoming link", o.path});
        }
    }
}

inline void check_cycles(const Activity& root, const std::vector<Occ>& occ, std::vector<Diagnostic>& out) {
    std::map<Path, std::size_t> index;
    for (std::size_t i = 0; i < occ.size(); ++i) index[occ[i].path] = i;
    std::vector<std::vector<std::size_t>> adj(occ.size());
    for (const auto& [a, b] : pred_pairs(root)) {
        if (a != b) adj[index[a]].push_back(index[b]);
    }
    // Tarjan's strongly connected components.
    std::vector<int> idx(occ.size(), -1), low(occ.size(), 0);
    std::vector<bool> on(occ.size(), false);
    std::vector<std::size_t> stack;
    int counter = 0;
    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        idx[v] = low[v] = counter++;
        stack.push_back(v);
        on[v] = true;
        for (auto w : adj[v]) {
            if (idx[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on[w]) {
                low[v] = std::min(low[v], idx[w]);
            }
        }
        if (low[v] == idx[v]) {
            std::vector<std::size_t> comp;
            std::size_t w;
            do {
                w = stack.back();
                stack.pop_back();
                on[w] = false;
                comp.push_back(w);
            } while (w != v);
            if (comp.size() > 1) {
                std::size_t first = *std::min_element(comp.begin(), comp.end());
                out.push_back({DiagCode::Cycle,
                               "precedence cycle through " + std::to_string(comp.size()) + " activities", occ[first].path});
            }
        }
    };
    for (std::size_t v = 0; v < occ.size(); ++v) {
        if (idx[v] < 0) visit(v);
    }
}

inline void check_containment(const std::vector<Occ>& occ, std::vector<Diagnostic>& out) {
    for (const auto& outer : occ) {
        for (const auto& inner : occ) {
            if (!is_prefix(outer.path, inner.path)) continue;
            auto a = set_intersection(outer.act->src(), inner.act->tgt());
            auto b = set_intersection(inner.act->src(), outer.act->tgt());
            a.insert(a.end(), b.begin(), b.end());
            if (!a.empty()) {
                out.push_back({DiagCode::ContainmentCross,
                               "link " + a.front() + " connects an activity with one of its own subactivities",
                               inner.path});
            }
        }
    }
}

inline void check_reps(const std::vector<Occ>& occ, std::vector<Diagnostic>& out) {
    for (const auto& o : occ) {
        const Activity& a = *o.act;
        if (a.kind() != Kind::Rep) continue;
        const Activity& d = a.do_pic();
        const Activity& u = a.until_pic();
        if (!d.tgt().empty() || !u.tgt().empty())
            out.push_back({DiagCode::RepIncoming, "the picks of a rep must have no incoming links", o.path});
        if (!d.src().empty())
            out.push_back({DiagCode::RepOutgoing, "the do pick of a rep must have no outgoing links", o.path});
        if (strict_src(d) != strict_tgt(d))
            out.push_back({DiagCode::RepEscape, "links inside the do pick of a rep must stay inside it", o.path});
    }
}

}  // namespace detail

/// Infers a kind per variable; records a KIND_CLASH for each conflicting use.
inline std::map<VarName, VarKind> infer_var_kinds(const Activity& root, std::vector<Diagnostic>* diags = nullptr) {
    std::map<VarName, VarKind> kinds;
    std::set<VarName> reported;
    auto note = [&](const VarName& v, VarKind k, const Path& p) {
        // Location and value uses are compatible; only session versus non-session clashes.
        auto it = kinds.find(v);
        if (it == kinds.end()) {
            kinds[v] = k;
            return;
        }
        bool clash = (it->second == VarKind::Session) != (k == VarKind::Session);
        if (clash) {
            if (diags && reported.insert(v).second)
                diags->push_back({DiagCode::KindClash, "variable " + v + " is used both as a session and as a value", p});
            return;
        }
        if (k == VarKind::Location) it->second = VarKind::Location;
    };
    note("s0", VarKind::Session, {});
    note("p0", VarKind::Location, {});
    for (const auto& o : detail::occurrences(root)) {
        const Activity& a = *o.act;
        if (a.kind() == Kind::Ses) {
            note(a.session(), VarKind::Session, o.path);
            note(a.partner(), VarKind::Location, o.path);
        } else if (a.kind() == Kind::Inv || a.kind() == Kind::Rec) {
            note(a.session(), VarKind::Session, o.path);
            for (const auto& v : a.vars()) note(v, VarKind::Value, o.path);
        }
    }
    return kinds;
}

/// Checks every well-formedness condition and returns all violations found.
inline std::vector<Diagnostic> validate_well_formed(const Activity& act) {
    std::vector<Diagnostic> out;
    auto occ = detail::occurrences(act);
    detail::check_unicity(occ, out);
    detail::check_scoping(act, occ, out);
    detail::check_cycles(act, occ, out);
    detail::check_containment(occ, out);
    detail::check_reps(occ, out);
    infer_var_kinds(act, &out);
    return out;
}

namespace detail {

inline Activity desugar(const Activity& a, std::size_t& counter) {
    if (a.children().empty()) return a;
    if (a.kind() != Kind::Seq) {
        std::vector<Activity> kids;
        for (const auto& c : a.children()) kids.push_back(desugar(c, counter));
        return a.with_children(std::move(kids));
    }
    // nil children carry no links and are dropped before chaining.
    std::vector<Activity> kids;
    for (const auto& c : a.children()) {
        if (!c.is_nil()) kids.push_back(c);
    }
    if (kids.empty()) kids.push_back(Activity::nil());
    std::vector<LinkName> fresh;
    for (std::size_t i = 0; i + 1 < kids.size(); ++i) fresh.push_back("$seq" + std::to_string(counter++));
    std::vector<Activity> out;
    for (std::size_t i = 0; i < kids.size(); ++i) {
        Activity c = desugar(kids[i], counter);
        if (i + 1 < kids.size() || i > 0) {
            Fields f = c.fields();
            if (i + 1 < kids.size()) f.src = set_union(f.src, {fresh[i]});
            if (i > 0) {
                const LinkName& in = fresh[i - 1];
                f.tgt = set_union(f.tgt, {in});
                f.jcd = f.jcd.is_true() ? JoinExpr::link(in) : JoinExpr::conj(f.jcd, JoinExpr::link(in));
            }
            c = c.with_fields(std::move(f));
        }
        out.push_back(std::move(c));
    }
    return Activity::flo(std::move(out), a.fields(), make_link_set(fresh));
}

}  // namespace detail

/// Rewrites every seq into a flo chained by fresh links named $seq0, $seq1, ...
inline Activity desugar_seq(const Activity& act) {
    std::size_t counter = 0;
    return detail::desugar(act, counter);
}

}  // namespace seb
