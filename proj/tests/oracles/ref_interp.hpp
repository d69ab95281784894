#pragma once

// Reference interpreter for link-free activities built from nil, atomic
// activities, flo and pic. States are plain strings, so it shares no code
// with the library's residual representation.

#include <deque>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "seb/activity.hpp"

namespace seb::testing {

struct RefTerm {
    enum K { Nil, Act, Flo, Pic, Wrap } k = Nil;
    std::string label;
    std::vector<RefTerm> kids;

    std::string key() const {
        std::string out;
        switch (k) {
            case Nil: return "0";
            case Act: return label;
            case Flo: out = "F["; break;
            case Pic: out = "P["; break;
            case Wrap: out = "W["; break;
        }
        for (const auto& c : kids) out += c.key() + ",";
        return out + "]";
    }
};

inline std::string ref_label(const Activity& a) {
    std::string out;
    if (a.kind() == Kind::Ses) return a.session() + "@" + a.partner();
    out = a.session() + (a.kind() == Kind::Inv ? "!" : "?") + a.op() + "(";
    for (std::size_t i = 0; i < a.vars().size(); ++i) out += (i ? "," : "") + a.vars()[i];
    return out + ")";
}

inline RefTerm to_ref(const Activity& a) {
    RefTerm t;
    switch (a.kind()) {
        case Kind::Nil: return t;
        case Kind::Ses:
        case Kind::Inv:
        case Kind::Rec:
            t.k = RefTerm::Act;
            t.label = ref_label(a);
            return t;
        case Kind::Flo: t.k = RefTerm::Flo; break;
        case Kind::Pic: t.k = RefTerm::Pic; break;
        default: throw std::logic_error("reference interpreter: unsupported kind");
    }
    for (const auto& c : a.children()) t.kids.push_back(to_ref(c));
    return t;
}

inline std::vector<std::pair<std::string, RefTerm>> ref_steps(const RefTerm& t) {
    std::vector<std::pair<std::string, RefTerm>> out;
    switch (t.k) {
        case RefTerm::Nil: break;
        case RefTerm::Act: out.push_back({t.label, RefTerm{}}); break;
        case RefTerm::Pic:
            for (std::size_t i = 0; i + 1 < t.kids.size(); i += 2) {
                RefTerm w;
                w.k = RefTerm::Wrap;
                w.kids.push_back(t.kids[i + 1]);
                out.push_back({t.kids[i].label, w});
            }
            break;
        case RefTerm::Flo:
        case RefTerm::Wrap:
            if (t.kids.size() == 1 && t.kids[0].k == RefTerm::Nil) {
                out.push_back({"tau", RefTerm{}});
                break;
            }
            for (std::size_t i = 0; i < t.kids.size(); ++i) {
                if (t.kids[i].k == RefTerm::Nil) {
                    if (t.kids.size() < 2) continue;
                    RefTerm r = t;
                    r.kids.erase(r.kids.begin() + static_cast<std::ptrdiff_t>(i));
                    out.push_back({"tau", r});
                    continue;
                }
                for (auto& [l, c] : ref_steps(t.kids[i])) {
                    RefTerm r = t;
                    r.kids[i] = c;
                    out.push_back({l, r});
                }
            }
            break;
    }
    return out;
}

struct RefCounts {
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t sinks = 0;
};

inline RefCounts ref_explore(const Activity& a) {
    std::set<std::string> seen;
    std::set<std::tuple<std::string, std::string, std::string>> trans;
    std::deque<RefTerm> work{to_ref(a)};
    seen.insert(work.front().key());
    RefCounts c;
    while (!work.empty()) {
        RefTerm t = work.front();
        work.pop_front();
        auto steps = ref_steps(t);
        if (steps.empty()) ++c.sinks;
        for (auto& [l, n] : steps) {
            auto k = n.key();
            trans.insert({t.key(), l, k});
            if (seen.insert(k).second) work.push_back(n);
        }
    }
    c.states = seen.size();
    c.transitions = trans.size();
    return c;
}

}  // namespace seb::testing
