#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace seb {

/// Raised when a caller violates a documented precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

using LinkName = std::string;
using VarName = std::string;

/// Sorted, duplicate-free set of link names.
using LinkSet = std::vector<LinkName>;

inline LinkSet make_link_set(std::vector<LinkName> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool contains(const LinkSet& s, const LinkName& l) { return std::binary_search(s.begin(), s.end(), l); }

inline LinkSet set_union(const LinkSet& a, const LinkSet& b) {
    LinkSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline LinkSet set_intersection(const LinkSet& a, const LinkSet& b) {
    LinkSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool intersects(const LinkSet& a, const LinkSet& b) { return !set_intersection(a, b).empty(); }

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// ---------------------------------------------------------------------------
// Join conditions

/// Immutable boolean expression over link names.
class JoinExpr {
public:
    enum class Op { Lit, Link, And, Or, Not };

    static JoinExpr lit(bool v) { return JoinExpr(make(Op::Lit, v, {}, nullptr, nullptr)); }
    static JoinExpr link(LinkName l) { return JoinExpr(make(Op::Link, false, std::move(l), nullptr, nullptr)); }
    static JoinExpr conj(const JoinExpr& a, const JoinExpr& b) { return JoinExpr(make(Op::And, false, {}, a.n_, b.n_)); }
    static JoinExpr disj(const JoinExpr& a, const JoinExpr& b) { return JoinExpr(make(Op::Or, false, {}, a.n_, b.n_)); }
    static JoinExpr neg(const JoinExpr& a) { return JoinExpr(make(Op::Not, false, {}, a.n_, nullptr)); }

    JoinExpr() : JoinExpr(lit(true)) {}

    Op op() const { return n_->op; }
    bool value() const { return n_->value; }
    const LinkName& link_name() const { return n_->link; }
    JoinExpr lhs() const { return JoinExpr(n_->lhs); }
    JoinExpr rhs() const { return JoinExpr(n_->rhs); }
    std::size_t hash() const { return n_->hash; }
    bool is_true() const { return n_->op == Op::Lit && n_->value; }

    /// Link names occurring as leaves.
    LinkSet leaves() const {
        std::vector<LinkName> out;
        collect(n_.get(), out);
        return make_link_set(std::move(out));
    }

    friend bool operator==(const JoinExpr& a, const JoinExpr& b) { return equal(a.n_.get(), b.n_.get()); }

    std::string to_string() const {
        std::string out;
        print(n_.get(), out);
        return out;
    }

private:
    struct Node {
        Op op;
        bool value;
        LinkName link;
        std::shared_ptr<const Node> lhs, rhs;
        std::size_t hash;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit JoinExpr(NodePtr n) : n_(std::move(n)) {}

    static NodePtr make(Op op, bool v, LinkName l, NodePtr a, NodePtr b) {
        std::size_t h = hash_combine(static_cast<std::size_t>(op) + 17, v ? 1 : 0);
        h = hash_combine(h, std::hash<std::string>{}(l));
        if (a) h = hash_combine(h, a->hash);
        if (b) h = hash_combine(h, b->hash);
        return std::make_shared<const Node>(Node{op, v, std::move(l), std::move(a), std::move(b), h});
    }

    static bool equal(const Node* a, const Node* b) {
        if (a == b) return true;
        if (!a || !b || a->hash != b->hash || a->op != b->op) return false;
        switch (a->op) {
            case Op::Lit: return a->value == b->value;
            case Op::Link: return a->link == b->link;
            case Op::Not: return equal(a->lhs.get(), b->lhs.get());
            default: return equal(a->lhs.get(), b->lhs.get()) && equal(a->rhs.get(), b->rhs.get());
        }
    }

    static void collect(const Node* n, std::vector<LinkName>& out) {
        if (!n) return;
        if (n->op == Op::Link) out.push_back(n->link);
        collect(n->lhs.get(), out);
        collect(n->rhs.get(), out);
    }

    static void print(const Node* n, std::string& out) {
        switch (n->op) {
            case Op::Lit: out += n->value ? "true" : "false"; break;
            case Op::Link: out += n->link; break;
            case Op::Not:
                out += "(not ";
                print(n->lhs.get(), out);
                out += ")";
                break;
            default:
                out += n->op == Op::And ? "(and " : "(or ";
                print(n->lhs.get(), out);
                out += " ";
                print(n->rhs.get(), out);
                out += ")";
        }
    }

    NodePtr n_;
};

// ---------------------------------------------------------------------------
// Activities

enum class Kind { Nil, Ses, Inv, Rec, Seq, Flo, Pic, Rep, Unf };

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Nil: return "nil";
        case Kind::Ses: return "ses";
        case Kind::Inv: return "inv";
        case Kind::Rec: return "rec";
        case Kind::Seq: return "seq";
        case Kind::Flo: return "flo";
        case Kind::Pic: return "pic";
        case Kind::Rep: return "rep";
        case Kind::Unf: return "unf";
    }
    return "?";
}

/// Incoming links, outgoing links and join condition shared by every non-nil activity.
struct Fields {
    LinkSet tgt;
    LinkSet src;
    JoinExpr jcd = JoinExpr::lit(true);
};

/// Immutable activity tree with structural equality and cached hashing.
///
/// Children are stored in one vector whose layout depends on the kind:
/// seq/flo hold their children, pic holds head0, body0, head1, body1, ...,
/// rep holds do, until and unf holds body, do, until.
class Activity {
public:
    Activity() : Activity(nil()) {}

    static Activity nil() {
        static const Activity n(build(Node{Kind::Nil, {}, {}, {}, {}, {}, {}, {}, false, 0}));
        return n;
    }
    static Activity ses(VarName s, VarName p, Fields f = {}) {
        return Activity(build(Node{Kind::Ses, std::move(f), {}, std::move(s), std::move(p), {}, {}, {}, false, 0}));
    }
    static Activity inv(VarName s, std::string op, std::vector<VarName> args, Fields f = {}) {
        return Activity(
            build(Node{Kind::Inv, std::move(f), {}, std::move(s), {}, std::move(op), std::move(args), {}, false, 0}));
    }
    static Activity rec(VarName s, std::string op, std::vector<VarName> params, Fields f = {}) {
        return Activity(
            build(Node{Kind::Rec, std::move(f), {}, std::move(s), {}, std::move(op), std::move(params), {}, false, 0}));
    }
    static Activity seq(std::vector<Activity> children, Fields f = {}) {
        return Activity(build(Node{Kind::Seq, std::move(f), {}, {}, {}, {}, {}, std::move(children), false, 0}));
    }
    static Activity flo(std::vector<Activity> children, Fields f = {}, LinkSet lnk = {}) {
        return Activity(
            build(Node{Kind::Flo, std::move(f), std::move(lnk), {}, {}, {}, {}, std::move(children), false, 0}));
    }
    static Activity pic(const std::vector<std::pair<Activity, Activity>>& branches, Fields f = {}) {
        std::vector<Activity> kids;
        for (const auto& [h, b] : branches) {
            kids.push_back(h);
            kids.push_back(b);
        }
        return Activity(build(Node{Kind::Pic, std::move(f), {}, {}, {}, {}, {}, std::move(kids), false, 0}));
    }
    static Activity rep(Activity do_pic, Activity until_pic, Fields f = {}) {
        return Activity(build(
            Node{Kind::Rep, std::move(f), {}, {}, {}, {}, {}, {std::move(do_pic), std::move(until_pic)}, false, 0}));
    }
    static Activity unf(Activity body, Activity do_pic, Activity until_pic, Fields f = {}) {
        return Activity(build(Node{Kind::Unf, std::move(f), {}, {}, {}, {}, {},
                                   {std::move(body), std::move(do_pic), std::move(until_pic)}, false, 0}));
    }
    /// Single-child flow standing for the residual of a pick.
    static Activity pick_residual(Activity body, Fields f) {
        return Activity(build(Node{Kind::Flo, std::move(f), {}, {}, {}, {}, {}, {std::move(body)}, true, 0}));
    }

    Kind kind() const { return n_->kind; }
    bool is_nil() const { return n_->kind == Kind::Nil; }
    bool is_atomic() const { return n_->kind == Kind::Ses || n_->kind == Kind::Inv || n_->kind == Kind::Rec; }
    const Fields& fields() const { return n_->fields; }
    const LinkSet& tgt() const { return n_->fields.tgt; }
    const LinkSet& src() const { return n_->fields.src; }
    const JoinExpr& jcd() const { return n_->fields.jcd; }
    const LinkSet& lnk() const { return n_->lnk; }
    const VarName& session() const { return n_->session; }
    const VarName& partner() const { return n_->partner; }
    const std::string& op() const { return n_->op; }
    const std::vector<VarName>& vars() const { return n_->vars; }
    const std::vector<Activity>& children() const { return n_->kids; }
    bool from_pick() const { return n_->from_pick; }
    std::size_t hash() const { return n_->hash; }

    std::size_t branch_count() const { return n_->kind == Kind::Pic ? n_->kids.size() / 2 : 0; }
    const Activity& branch_head(std::size_t i) const { return n_->kids[2 * i]; }
    const Activity& branch_body(std::size_t i) const { return n_->kids[2 * i + 1]; }
    const Activity& do_pic() const { return n_->kids[n_->kind == Kind::Unf ? 1 : 0]; }
    const Activity& until_pic() const { return n_->kids[n_->kind == Kind::Unf ? 2 : 1]; }
    const Activity& unf_body() const { return n_->kids[0]; }

    Activity with_children(std::vector<Activity> kids) const {
        Node n = *n_;
        n.kids = std::move(kids);
        return Activity(build(std::move(n)));
    }
    Activity with_fields(Fields f) const {
        Node n = *n_;
        n.fields = std::move(f);
        return Activity(build(std::move(n)));
    }
    Activity with_lnk(LinkSet lnk) const {
        Node n = *n_;
        n.lnk = std::move(lnk);
        return Activity(build(std::move(n)));
    }

    friend bool operator==(const Activity& a, const Activity& b) { return equal(a.n_.get(), b.n_.get()); }

private:
    struct Node {
        Kind kind;
        Fields fields;
        LinkSet lnk;
        VarName session;
        VarName partner;
        std::string op;
        std::vector<VarName> vars;
        std::vector<Activity> kids;
        bool from_pick;
        std::size_t hash;
    };
    using NodePtr = std::shared_ptr<const Node>;

    explicit Activity(NodePtr n) : n_(std::move(n)) {}

    static std::size_t hash_strings(std::size_t h, const std::vector<std::string>& v) {
        for (const auto& s : v) h = hash_combine(h, std::hash<std::string>{}(s));
        return hash_combine(h, v.size());
    }

    static NodePtr build(Node n) {
        std::hash<std::string> hs;
        std::size_t h = hash_combine(static_cast<std::size_t>(n.kind) * 31 + 7, n.from_pick ? 1 : 0);
        h = hash_strings(h, n.fields.tgt);
        h = hash_strings(h, n.fields.src);
        h = hash_combine(h, n.fields.jcd.hash());
        h = hash_strings(h, n.lnk);
        h = hash_combine(h, hs(n.session));
        h = hash_combine(h, hs(n.partner));
        h = hash_combine(h, hs(n.op));
        h = hash_strings(h, n.vars);
        for (const auto& k : n.kids) h = hash_combine(h, k.hash());
        n.hash = hash_combine(h, n.kids.size());
        return std::make_shared<const Node>(std::move(n));
    }

    static bool equal(const Node* a, const Node* b) {
        if (a == b) return true;
        if (a->hash != b->hash || a->kind != b->kind || a->from_pick != b->from_pick) return false;
        return a->fields.tgt == b->fields.tgt && a->fields.src == b->fields.src && a->fields.jcd == b->fields.jcd &&
               a->lnk == b->lnk && a->session == b->session && a->partner == b->partner && a->op == b->op &&
               a->vars == b->vars && a->kids == b->kids;
    }

    NodePtr n_;
};

struct ActivityHash {
    std::size_t operator()(const Activity& a) const { return a.hash(); }
};

// ---------------------------------------------------------------------------
// Occurrences

/// Position of a subactivity: child indices from the root.
using Path = std::vector<std::size_t>;

inline std::string path_to_string(const Path& p) {
    if (p.empty()) return "/";
    std::string out;
    for (auto i : p) out += "/" + std::to_string(i);
    return out;
}

inline bool is_prefix(const Path& prefix, const Path& p) {
    return prefix.size() <= p.size() && std::equal(prefix.begin(), prefix.end(), p.begin());
}

inline const Activity& resolve(const Activity& root, const Path& p) {
    const Activity* cur = &root;
    for (auto i : p) {
        if (i >= cur->children().size()) throw ContractError("path " + path_to_string(p) + " does not resolve");
        cur = &cur->children()[i];
    }
    return *cur;
}

/// Occurrences of `act` and of all its subactivities, in pre-order.
inline std::vector<Path> subacts(const Activity& act) {
    std::vector<Path> out;
    Path cur;
    std::function<void(const Activity&)> walk = [&](const Activity& a) {
        out.push_back(cur);
        for (std::size_t i = 0; i < a.children().size(); ++i) {
            cur.push_back(i);
            walk(a.children()[i]);
            cur.pop_back();
        }
    };
    walk(act);
    return out;
}

/// Subactivity occurrences excluding `act` itself.
inline std::vector<Path> strict_subacts(const Activity& act) {
    auto all = subacts(act);
    all.erase(all.begin());
    return all;
}

/// Visits `act` and every subactivity in pre-order.
template <typename F>
void for_each_subact(const Activity& act, F&& f) {
    f(act);
    for (const auto& c : act.children()) for_each_subact(c, f);
}

/// Union of the outgoing links of `act` and all its subactivities.
inline LinkSet all_src(const Activity& act) {
    std::vector<LinkName> out;
    for_each_subact(act, [&](const Activity& a) { out.insert(out.end(), a.src().begin(), a.src().end()); });
    return make_link_set(std::move(out));
}

/// Union of the incoming links of `act` and all its subactivities.
inline LinkSet all_tgt(const Activity& act) {
    std::vector<LinkName> out;
    for_each_subact(act, [&](const Activity& a) { out.insert(out.end(), a.tgt().begin(), a.tgt().end()); });
    return make_link_set(std::move(out));
}

inline LinkSet strict_src(const Activity& act) {
    std::vector<LinkName> out;
    for (const auto& c : act.children()) {
        auto s = all_src(c);
        out.insert(out.end(), s.begin(), s.end());
    }
    return make_link_set(std::move(out));
}

inline LinkSet strict_tgt(const Activity& act) {
    std::vector<LinkName> out;
    for (const auto& c : act.children()) {
        auto s = all_tgt(c);
        out.insert(out.end(), s.begin(), s.end());
    }
    return make_link_set(std::move(out));
}

/// Every link name occurring in `act`: declared, sourced, targeted or referenced by a join.
inline LinkSet all_links(const Activity& act) {
    std::vector<LinkName> out;
    for_each_subact(act, [&](const Activity& a) {
        out.insert(out.end(), a.tgt().begin(), a.tgt().end());
        out.insert(out.end(), a.src().begin(), a.src().end());
        out.insert(out.end(), a.lnk().begin(), a.lnk().end());
        auto j = a.jcd().leaves();
        out.insert(out.end(), j.begin(), j.end());
    });
    return make_link_set(std::move(out));
}

/// Pairs (a1, a2) with a1 preceding a2: a link from a1 to a2, or a1 directly before a2 in a seq.
inline std::vector<std::pair<Path, Path>> pred_pairs(const Activity& act) {
    std::vector<std::pair<Path, Path>> out;
    auto occ = subacts(act);
    for (const auto& p1 : occ) {
        const Activity& a1 = resolve(act, p1);
        if (a1.src().empty()) continue;
        for (const auto& p2 : occ) {
            if (intersects(a1.src(), resolve(act, p2).tgt())) out.emplace_back(p1, p2);
        }
    }
    for (const auto& p : occ) {
        const Activity& a = resolve(act, p);
        if (a.kind() != Kind::Seq) continue;
        for (std::size_t i = 0; i + 1 < a.children().size(); ++i) {
            Path x = p, y = p;
            x.push_back(i);
            y.push_back(i + 1);
            out.emplace_back(x, y);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_list(std::string& out, const std::vector<std::string>& v) {
    out += "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += " ";
        out += v[i];
    }
    out += ")";
}

inline void print_fields(std::string& out, const Activity& a) {
    if (!a.tgt().empty()) {
        out += " :tgt ";
        print_list(out, a.tgt());
    }
    if (!a.src().empty()) {
        out += " :src ";
        print_list(out, a.src());
    }
    if (!a.jcd().is_true()) out += " :jcd " + a.jcd().to_string();
    if (a.kind() == Kind::Flo && !a.lnk().empty()) {
        out += " :lnk ";
        print_list(out, a.lnk());
    }
}

inline void print_activity(std::string& out, const Activity& a) {
    switch (a.kind()) {
        case Kind::Nil: out += "(nil)"; return;
        case Kind::Ses:
            out += "(ses " + a.session() + " " + a.partner();
            print_fields(out, a);
            out += ")";
            return;
        case Kind::Inv:
        case Kind::Rec:
            out += std::string("(") + kind_name(a.kind()) + " " + a.session() + " " + a.op() + " ";
            print_list(out, a.vars());
            print_fields(out, a);
            out += ")";
            return;
        case Kind::Seq:
        case Kind::Flo:
            out += std::string("(") + kind_name(a.kind());
            print_fields(out, a);
            for (const auto& c : a.children()) {
                out += " ";
                print_activity(out, c);
            }
            out += ")";
            return;
        case Kind::Pic:
            out += "(pic";
            print_fields(out, a);
            for (std::size_t i = 0; i < a.branch_count(); ++i) {
                out += " (on ";
                print_activity(out, a.branch_head(i));
                out += " ";
                print_activity(out, a.branch_body(i));
                out += ")";
            }
            out += ")";
            return;
        case Kind::Rep:
        case Kind::Unf:
            out += std::string("(") + kind_name(a.kind());
            print_fields(out, a);
            if (a.kind() == Kind::Unf) {
                out += " (body ";
                print_activity(out, a.unf_body());
                out += ")";
            }
            out += " (do ";
            print_activity(out, a.do_pic());
            out += ") (until ";
            print_activity(out, a.until_pic());
            out += "))";
            return;
    }
}

}  // namespace detail

/// Canonical single-line rendering; parses back to an equal activity when no internal nodes are present.
inline std::string to_string(const Activity& a) {
    std::string out;
    detail::print_activity(out, a);
    return out;
}

}  // namespace seb
