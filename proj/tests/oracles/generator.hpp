#pragma once

// Random well-formed activities for property tests.

#include <random>
#include <string>
#include <vector>

#include "seb/activity.hpp"
#include "seb/wellformed.hpp"

namespace seb::testing {

struct GenOptions {
    int max_depth = 4;
    int max_atoms = 7;
    int max_children = 3;
    bool links = true;
    bool seqs = true;
    bool reps = true;
};

class Generator {
public:
    explicit Generator(std::uint64_t seed, GenOptions opt = {}) : rng_(seed), opt_(opt) {}

    /// A well-formed activity; candidates failing validation are discarded.
    Activity next() {
        while (true) {
            int budget = opt_.max_atoms;
            Node root = tree(opt_.max_depth, budget);
            if (opt_.links) add_links(root);
            Activity a = build(root);
            if (validate_well_formed(a).empty()) return a;
        }
    }

    /// A seq of up to `n` atomic activities without links.
    Activity atomic_sequence(int n) {
        std::vector<Activity> kids;
        int len = 1 + pick(n);
        for (int i = 0; i < len; ++i) {
            Node a = atomic();
            kids.push_back(build(a));
        }
        return Activity::seq(std::move(kids));
    }

    int pick(int n) { return n <= 0 ? 0 : static_cast<int>(rng_() % static_cast<std::uint64_t>(n)); }

private:
    struct Node {
        Kind kind = Kind::Nil;
        std::string s, p, op;
        std::vector<std::string> vars;
        std::vector<Node> kids;
        LinkSet tgt, src, lnk;
        bool head = false;
    };

    std::mt19937_64 rng_;
    GenOptions opt_;
    int link_counter_ = 0;

    bool coin(int percent) { return pick(100) < percent; }

    Node atomic() {
        static const char* sessions[] = {"s", "r"};
        static const char* ops[] = {"a", "b", "c"};
        static const char* vars[] = {"x", "y"};
        Node n;
        int k = pick(3);
        n.kind = k == 0 ? Kind::Ses : k == 1 ? Kind::Inv : Kind::Rec;
        n.s = sessions[pick(2)];
        if (n.kind == Kind::Ses) {
            n.p = "p";
        } else {
            n.op = ops[pick(3)];
            for (int i = pick(3); i > 0; --i) n.vars.push_back(vars[pick(2)]);
        }
        return n;
    }

    Node receive() {
        Node n = atomic();
        if (n.kind != Kind::Rec) {
            n.kind = Kind::Rec;
            n.p.clear();
            n.op = "a";
        }
        n.head = true;
        return n;
    }

    Node tree(int depth, int& budget) {
        if (depth <= 1 || budget <= 1) {
            --budget;
            if (coin(8)) return Node{};
            return atomic();
        }
        int choice = pick(opt_.reps ? 6 : 5);
        if (choice == 0 || (choice == 1 && !opt_.seqs)) {
            --budget;
            return atomic();
        }
        Node n;
        if (choice == 1 || choice == 2) {
            n.kind = choice == 1 ? Kind::Seq : Kind::Flo;
            int count = 1 + pick(opt_.max_children);
            for (int i = 0; i < count && budget > 0; ++i) n.kids.push_back(tree(depth - 1, budget));
            if (n.kids.empty()) n.kids.push_back(atomic());
            return n;
        }
        if (choice == 3 || choice == 4) {
            n.kind = Kind::Pic;
            int count = 1 + pick(2);
            for (int i = 0; i < count && budget > 0; ++i) {
                --budget;
                n.kids.push_back(receive());
                n.kids.push_back(tree(depth - 1, budget));
            }
            if (n.kids.empty()) {
                n.kids.push_back(receive());
                n.kids.push_back(Node{});
            }
            return n;
        }
        n.kind = Kind::Rep;
        Node d;
        d.kind = Kind::Pic;
        budget -= 2;
        d.kids.push_back(receive());
        d.kids.push_back(tree(depth - 2, budget));
        Node u;
        u.kind = Kind::Pic;
        u.kids.push_back(receive());
        u.kids.push_back(coin(50) ? Node{} : atomic());
        n.kids.push_back(d);
        n.kids.push_back(u);
        return n;
    }

    // Nodes inside `n` usable as link endpoints: not nil, not below a rep.
    static void endpoints(Node& n, std::vector<Node*>& out) {
        if (n.kind == Kind::Nil) return;
        out.push_back(&n);
        if (n.kind == Kind::Rep) return;
        for (auto& k : n.kids) endpoints(k, out);
    }

    void add_links(Node& n) {
        for (auto& k : n.kids) add_links(k);
        if (n.kind != Kind::Flo || n.kids.size() < 2) return;
        int count = pick(3);
        for (int c = 0; c < count; ++c) {
            std::size_t i = static_cast<std::size_t>(pick(static_cast<int>(n.kids.size()) - 1));
            std::size_t j = i + 1 + static_cast<std::size_t>(pick(static_cast<int>(n.kids.size() - i - 1)));
            std::vector<Node*> from, to;
            endpoints(n.kids[i], from);
            endpoints(n.kids[j], to);
            std::erase_if(to, [](Node* x) { return x->head; });
            if (from.empty() || to.empty()) continue;
            std::string l = "l" + std::to_string(link_counter_++);
            Node* a = from[static_cast<std::size_t>(pick(static_cast<int>(from.size())))];
            Node* b = to[static_cast<std::size_t>(pick(static_cast<int>(to.size())))];
            a->src = set_union(a->src, {l});
            b->tgt = set_union(b->tgt, {l});
            n.lnk = set_union(n.lnk, {l});
        }
    }

    JoinExpr join_for(const LinkSet& tgt) {
        if (tgt.empty()) return JoinExpr::lit(true);
        JoinExpr e = leaf(tgt.front());
        for (std::size_t i = 1; i < tgt.size(); ++i) e = coin(60) ? JoinExpr::conj(e, leaf(tgt[i])) : JoinExpr::disj(e, leaf(tgt[i]));
        return e;
    }

    JoinExpr leaf(const LinkName& l) { return coin(20) ? JoinExpr::neg(JoinExpr::link(l)) : JoinExpr::link(l); }

    Activity build(const Node& n) {
        Fields f{n.tgt, n.src, join_for(n.tgt)};
        std::vector<Activity> kids;
        for (const auto& k : n.kids) kids.push_back(build(k));
        switch (n.kind) {
            case Kind::Nil: return Activity::nil();
            case Kind::Ses: return Activity::ses(n.s, n.p, f);
            case Kind::Inv: return Activity::inv(n.s, n.op, n.vars, f);
            case Kind::Rec: return Activity::rec(n.s, n.op, n.vars, f);
            case Kind::Seq: return Activity::seq(std::move(kids), f);
            case Kind::Flo: return Activity::flo(std::move(kids), f, n.lnk);
            case Kind::Pic: {
                std::vector<std::pair<Activity, Activity>> b;
                for (std::size_t i = 0; i + 1 < kids.size(); i += 2) b.emplace_back(kids[i], kids[i + 1]);
                return Activity::pic(b, f);
            }
            case Kind::Rep: return Activity::rep(kids[0], kids[1], f);
            default: return Activity::nil();
        }
    }
};

}  // namespace seb::testing
