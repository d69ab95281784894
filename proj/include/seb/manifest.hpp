#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "parser.hpp"
#include "sexpr.hpp"
#include "variables.hpp"

namespace seb {

/// Deployment description read from a .cfg file.
struct Manifest {
    std::vector<ServiceSpec> services;
    ClientSpec client;
};

namespace detail {

inline Value parse_value(const SExpr& e) {
    if (e.type == SExpr::Type::String) return Value::data(e.text);
    if (!e.is_atom() || e.text.empty()) e.fail("expected a value");
    if (e.text[0] == '@') {
        if (e.text.size() == 1) e.fail("empty location");
        return Value::location(e.text.substr(1));
    }
    return Value::data(e.text);
}

inline VarMap undefined_vars(const Activity& act) {
    VarMap m;
    for (const auto& v : classify_occurrences(act).all) m[v] = std::nullopt;
    return m;
}

}  // namespace detail

/// Parses manifest text. Each entry is
///   (service NAME :file PATH :at LOC [:bind (VAR VALUE)...])  or
///   (client :file PATH [:bind (VAR VALUE)...])
/// where a value is @loc for a service location and a word or string for data.
/// `load` maps a file name to its activity source.
template <typename Loader>
Manifest parse_manifest(std::string_view text, Loader&& load) {
    Manifest out;
    bool have_client = false;
    for (const auto& e : read_sexprs(text)) {
        if (!e.is_list() || e.items.empty() || !e.items[0].is_atom()) e.fail("expected (service ...) or (client ...)");
        const std::string& kw = e.items[0].text;
        bool service = kw == "service";
        if (!service && kw != "client") e.items[0].fail("unknown keyword: " + kw);
        std::size_t i = 1;
        std::string name = "client";
        if (service) {
            if (e.items.size() < 2 || !e.items[1].is_atom()) e.fail("service needs a name");
            name = e.items[i++].text;
        }
        std::optional<std::string> file;
        std::optional<Value> at;
        std::vector<std::pair<const SExpr*, Value>> binds;
        while (i < e.items.size()) {
            const SExpr& key = e.items[i++];
            if (!key.is_atom()) key.fail("expected a keyword");
            if (key.text == ":file" || key.text == ":at") {
                if (i >= e.items.size()) key.fail("missing value for " + key.text);
                const SExpr& v = e.items[i++];
                if (v.is_list()) v.fail("expected a name");
                if (key.text == ":file") {
                    file = v.text;
                } else {
                    if (!service) key.fail(":at is only allowed for services");
                    at = Value::location(v.text[0] == '@' ? v.text.substr(1) : v.text);
                }
            } else if (key.text == ":bind") {
                while (i < e.items.size() && e.items[i].is_list()) {
                    const SExpr& b = e.items[i++];
                    if (b.items.size() != 2 || !b.items[0].is_atom()) b.fail("expected (variable value)");
                    binds.emplace_back(&b.items[0], detail::parse_value(b.items[1]));
                }
            } else {
                key.fail("unknown keyword: " + key.text);
            }
        }
        if (!file) e.fail(name + " needs :file");
        Activity act = load(*file);
        VarMap m = detail::undefined_vars(act);
        if (service) {
            if (!at) e.fail("service " + name + " needs :at");
            m["p0"] = *at;
        }
        for (const auto& [var, val] : binds) m[var->text] = val;
        if (service) {
            out.services.push_back({name, act, std::move(m)});
        } else {
            if (have_client) e.fail("more than one client");
            have_client = true;
            out.client = {act, std::move(m)};
        }
    }
    if (!have_client) throw ParseError(1, 1, "manifest has no client");
    return out;
}

/// Reads a manifest file; activity files are resolved relative to its directory.
inline Manifest load_manifest(const std::string& path) {
    auto dir = std::filesystem::path(path).parent_path();
    return parse_manifest(read_file(path), [&](const std::string& f) {
        auto p = std::filesystem::path(f);
        if (p.is_relative()) p = dir / p;
        return parse_activity_file(p.string());
    });
}

}  // namespace seb
