#pragma once

#include <cctype>
#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>

#include "control.hpp"
#include "sexpr.hpp"

namespace seb {

/// Label used in Aldebaran files; tau is written "i".
inline std::string aut_label(const SymbolicAction& a) { return a.is_tau() ? "i" : a.to_string(); }

/// Parses "s@p", "s!op(x,y)", "s?op(x)", "i" or "tau".
inline SymbolicAction parse_action_label(std::string_view text) {
    std::string t(text);
    if (t == "i" || t == "tau") return SymbolicAction::tau();
    auto bad = [&]() -> SymbolicAction { throw std::runtime_error("malformed action label: " + t); };
    auto at = t.find('@');
    if (at != std::string::npos) {
        if (at == 0 || at + 1 == t.size()) return bad();
        return SymbolicAction::ses_init(t.substr(0, at), t.substr(at + 1));
    }
    auto mark = t.find_first_of("!?");
    auto open = t.find('(');
    if (mark == std::string::npos || mark == 0 || open == std::string::npos || open < mark + 2 || t.back() != ')') return bad();
    std::vector<VarName> args;
    std::string inner = t.substr(open + 1, t.size() - open - 2);
    if (!inner.empty() && inner.back() == ',') return bad();
    std::stringstream ss(inner);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) return bad();
        args.push_back(item);
    }
    std::string s = t.substr(0, mark), op = t.substr(mark + 1, open - mark - 1);
    return t[mark] == '!' ? SymbolicAction::send(s, op, args) : SymbolicAction::recv(s, op, args);
}

/// Aldebaran text: header "des (init, #transitions, #states)" then one line per transition.
inline std::string to_aut(const ControlGraph& g) {
    std::ostringstream os;
    os << "des (" << g.init << ", " << g.num_transitions() << ", " << g.num_states() << ")\n";
    for (const auto& t : g.transitions()) os << "(" << t.from << ", \"" << aut_label(t.action) << "\", " << t.to << ")\n";
    return os.str();
}

/// Reads Aldebaran text; labels may be quoted or bare.
inline ControlGraph from_aut(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& what) -> void { throw ParseError(lineno, 1, what); };
    auto trim = [](std::string s) {
        std::size_t b = s.find_first_not_of(" \t\r"), e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    ControlGraph g;
    std::size_t ntrans = 0;
    bool header = false;
    std::size_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        if (!header) {
            std::size_t init = 0, nstates = 0;
            if (std::sscanf(line.c_str(), "des (%zu , %zu , %zu )", &init, &ntrans, &nstates) != 3) fail("expected des header");
            if (nstates == 0 || init >= nstates) fail("invalid des header");
            g.init = init;
            g.out.resize(nstates);
            header = true;
            continue;
        }
        if (line.front() != '(' || line.back() != ')') fail("expected (from, label, to)");
        std::string body = line.substr(1, line.size() - 2);
        auto c1 = body.find(',');
        auto c2 = body.rfind(',');
        if (c1 == std::string::npos || c2 == c1) fail("expected (from, label, to)");
        std::string from = trim(body.substr(0, c1)), label = trim(body.substr(c1 + 1, c2 - c1 - 1)), to = trim(body.substr(c2 + 1));
        if (label.size() >= 2 && label.front() == '"' && label.back() == '"') label = label.substr(1, label.size() - 2);
        std::size_t f = 0, t = 0;
        try {
            f = std::stoul(from);
            t = std::stoul(to);
        } catch (const std::exception&) {
            fail("invalid state number");
        }
        if (f >= g.out.size() || t >= g.out.size()) fail("state number out of range");
        SymbolicAction a;
        try {
            a = parse_action_label(label);
        } catch (const std::runtime_error& e) {
            fail(e.what());
        }
        g.out[f].push_back({a, t});
        ++seen;
    }
    if (!header) throw ParseError(1, 1, "missing des header");
    if (seen != ntrans) throw ParseError(lineno, 1, "transition count does not match header");
    return g;
}

/// Graphviz rendering; terminal states are double circles and tau is drawn as "τ".
/// With `with_payloads`, states that carry payloads show their link map and residual.
inline std::string to_dot(const ControlGraph& g, bool with_payloads = false) {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o.push_back('\\');
            o.push_back(c);
        }
        return o;
    };
    std::ostringstream os;
    os << "digraph cg {\n  rankdir=TB;\n  start [shape=point];\n  start -> " << g.init << ";\n";
    for (StateId s = 0; s < g.num_states(); ++s) {
        os << "  " << s << " [shape=" << (g.out[s].empty() ? "doublecircle" : "circle");
        if (with_payloads && g.payload) {
            const auto& p = (*g.payload)[s];
            os << ", xlabel=\"" << esc(link_map_to_string(p.links)) << "\\n" << esc(to_string(p.residual)) << "\"";
        }
        os << "];\n";
    }
    for (const auto& t : g.transitions())
        os << "  " << t.from << " -> " << t.to << " [label=\"" << (t.action.is_tau() ? "τ" : esc(t.action.to_string())) << "\"];\n";
    os << "}\n";
    return os.str();
}

}  // namespace seb
