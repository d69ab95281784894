#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "activity.hpp"
#include "sexpr.hpp"

namespace seb {

namespace detail {

inline bool is_identifier(std::string_view s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

inline bool is_reserved_word(std::string_view s) {
    for (auto w : {"true", "false", "and", "or", "not", "on", "do", "until", "nil", "ses", "inv", "rec", "seq", "flo",
                   "pic", "rep"}) {
        if (s == w) return true;
    }
    return false;
}

inline std::string expect_ident(const SExpr& e, const char* what) {
    if (!e.is_atom()) e.fail(std::string("expected ") + what);
    if (e.text.find('$') != std::string::npos) e.fail("'$' is reserved for generated names: " + e.text);
    if (!is_identifier(e.text) || is_reserved_word(e.text)) e.fail(std::string("invalid ") + what + ": " + e.text);
    return e.text;
}

inline std::vector<std::string> expect_ident_list(const SExpr& e, const char* what) {
    if (!e.is_list()) e.fail(std::string("expected a parenthesised list of ") + what);
    std::vector<std::string> out;
    for (const auto& i : e.items) out.push_back(expect_ident(i, what));
    return out;
}

inline JoinExpr parse_join(const SExpr& e) {
    if (e.is_atom()) {
        if (e.text == "true") return JoinExpr::lit(true);
        if (e.text == "false") return JoinExpr::lit(false);
        return JoinExpr::link(expect_ident(e, "link name"));
    }
    if (!e.is_list() || e.items.empty() || !e.items[0].is_atom()) e.fail("expected a join condition");
    const auto& op = e.items[0].text;
    if (op == "not") {
        if (e.items.size() != 2) e.fail("'not' takes one operand");
        return JoinExpr::neg(parse_join(e.items[1]));
    }
    if (op == "and" || op == "or") {
        if (e.items.size() != 3) e.fail("'" + op + "' takes two operands");
        auto a = parse_join(e.items[1]);
        auto b = parse_join(e.items[2]);
        return op == "and" ? JoinExpr::conj(a, b) : JoinExpr::disj(a, b);
    }
    e.items[0].fail("unknown keyword in join condition: " + op);
}

class ActivityParser {
public:
    Activity parse(const SExpr& e) {
        if (!e.is_list() || e.items.empty()) e.fail("expected an activity");
        const SExpr& head = e.items[0];
        if (!head.is_atom()) head.fail("expected an activity keyword");
        const std::string& kw = head.text;
        std::size_t i = 1;

        if (kw == "nil") {
            if (e.items.size() != 1) e.items[1].fail("(nil) takes no arguments");
            return Activity::nil();
        }
        if (kw == "ses") {
            need(e, i + 2, "ses expects a session and a partner variable");
            auto s = expect_ident(e.items[i++], "session variable");
            auto p = expect_ident(e.items[i++], "partner variable");
            auto f = parse_fields(e, i, false);
            no_body(e, i);
            return Activity::ses(std::move(s), std::move(p), std::move(f.fields));
        }
        if (kw == "inv" || kw == "rec") {
            need(e, i + 2, kw + " expects a session variable and an operation");
            auto s = expect_ident(e.items[i++], "session variable");
            auto op = expect_ident(e.items[i++], "operation name");
            std::vector<VarName> vars;
            if (i < e.items.size() && e.items[i].is_list()) vars = expect_ident_list(e.items[i++], "variable");
            auto f = parse_fields(e, i, false);
            no_body(e, i);
            return kw == "inv" ? Activity::inv(std::move(s), std::move(op), std::move(vars), std::move(f.fields))
                               : Activity::rec(std::move(s), std::move(op), std::move(vars), std::move(f.fields));
        }
        if (kw == "seq" || kw == "flo") {
            auto f = parse_fields(e, i, kw == "flo");
            std::vector<Activity> kids;
            for (; i < e.items.size(); ++i) kids.push_back(parse(e.items[i]));
            if (kids.empty()) e.fail(kw + " needs at least one child activity");
            if (kw == "seq") return Activity::seq(std::move(kids), std::move(f.fields));
            return Activity::flo(std::move(kids), std::move(f.fields), std::move(f.lnk));
        }
        if (kw == "pic") {
            auto f = parse_fields(e, i, false);
            std::vector<std::pair<Activity, Activity>> branches;
            for (; i < e.items.size(); ++i) {
                const SExpr& b = e.items[i];
                if (!b.is_list() || b.items.empty() || !b.items[0].is_atom("on")) b.fail("expected (on <rec> <activity>)");
                if (b.items.size() != 3) b.fail("a pick branch is (on <rec> <activity>)");
                Activity h = parse(b.items[1]);
                if (h.kind() != Kind::Rec) b.items[1].fail("a pick branch must start with a reception");
                branches.emplace_back(std::move(h), parse(b.items[2]));
            }
            if (branches.empty()) e.fail("pic needs at least one branch");
            return Activity::pic(branches, std::move(f.fields));
        }
        if (kw == "rep") {
            auto f = parse_fields(e, i, false);
            if (e.items.size() != i + 2) e.fail("rep expects (do <pic>) (until <pic>)");
            Activity d = part(e.items[i], "do");
            Activity u = part(e.items[i + 1], "until");
            return Activity::rep(std::move(d), std::move(u), std::move(f.fields));
        }
        head.fail("unknown keyword: " + kw);
    }

private:
    struct ParsedFields {
        Fields fields;
        LinkSet lnk;
    };

    static void need(const SExpr& e, std::size_t n, const std::string& what) {
        if (e.items.size() < n) e.fail(what);
    }

    static void no_body(const SExpr& e, std::size_t i) {
        if (i < e.items.size()) e.items[i].fail("unexpected element in atomic activity");
    }

    Activity part(const SExpr& e, const char* kw) {
        if (!e.is_list() || e.items.size() != 2 || !e.items[0].is_atom(kw)) e.fail(std::string("expected (") + kw + " <pic>)");
        Activity a = parse(e.items[1]);
        if (a.kind() != Kind::Pic) e.items[1].fail(std::string("the ") + kw + " part of rep must be a pic");
        return a;
    }

    static ParsedFields parse_fields(const SExpr& e, std::size_t& i, bool allow_lnk) {
        ParsedFields out;
        bool seen_tgt = false, seen_src = false, seen_jcd = false, seen_lnk = false;
        while (i < e.items.size() && e.items[i].is_atom() && !e.items[i].text.empty() && e.items[i].text[0] == ':') {
            const SExpr& key = e.items[i];
            if (i + 1 >= e.items.size()) key.fail("missing value for " + key.text);
            const SExpr& val = e.items[i + 1];
            auto once = [&](bool& seen) {
                if (seen) key.fail("duplicate field " + key.text);
                seen = true;
            };
            if (key.text == ":tgt") {
                once(seen_tgt);
                out.fields.tgt = make_link_set(expect_ident_list(val, "link name"));
            } else if (key.text == ":src") {
                once(seen_src);
                out.fields.src = make_link_set(expect_ident_list(val, "link name"));
            } else if (key.text == ":jcd") {
                once(seen_jcd);
                out.fields.jcd = parse_join(val);
            } else if (key.text == ":lnk") {
                if (!allow_lnk) key.fail(":lnk is only allowed on flo");
                once(seen_lnk);
                out.lnk = make_link_set(expect_ident_list(val, "link name"));
            } else {
                key.fail("unknown keyword: " + key.text);
            }
            i += 2;
        }
        return out;
    }
};

}  // namespace detail

/// Parses exactly one activity from source text.
inline Activity parse_activity(std::string_view src) {
    auto top = read_sexprs(src);
    if (top.empty()) throw ParseError(1, 1, "empty input");
    if (top.size() > 1) top[1].fail("trailing input after the activity");
    return detail::ActivityParser().parse(top[0]);
}

/// Reads a whole file; throws std::runtime_error when it cannot be opened.
inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Activity parse_activity_file(const std::string& path) { return parse_activity(read_file(path)); }

}  // namespace seb
