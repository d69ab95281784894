#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "activity.hpp"
#include "control.hpp"
#include "diagnostic.hpp"
#include "transforms.hpp"
#include "variables.hpp"

namespace seb {

/// A service ready for instantiation: its assignment, activity and compiled graph.
struct DeployableService {
    std::string name;
    VarMap map;
    Activity act;
    std::shared_ptr<const ControlGraph> graph;

    Value location() const { return *map.at("p0"); }
};

/// A running activity: its assignment, its shared graph and its current state.
struct Instance {
    std::string id;
    VarMap map;
    Activity act;
    std::shared_ptr<const ControlGraph> graph;
    StateId state = 0;
};

struct Message {
    enum class Kind { New, Op };

    Kind kind = Kind::Op;
    std::string sid;  // New: session id handed to the spawned instance
    std::string op;   // Op: operation name
    std::vector<Value> payload;

    bool operator==(const Message&) const = default;

    std::string to_string() const {
        if (kind == Kind::New) return "new(" + sid + ")";
        std::string out = op + "(";
        for (std::size_t i = 0; i < payload.size(); ++i) out += (i ? "," : "") + payload[i].to_string();
        return out + ")";
    }
};

/// Services, instances, message queues keyed by destination, session bindings and the fresh-name counter.
struct Configuration {
    std::vector<std::shared_ptr<const DeployableService>> services;
    std::vector<Instance> instances;
    std::map<Value, std::deque<Message>> queues;
    std::set<std::pair<std::string, std::string>> bindings;
    std::size_t fresh = 0;

    /// Canonical rendering of the mutable part; equal keys mean equal configurations.
    std::string key() const {
        std::ostringstream os;
        for (const auto& i : instances) {
            os << i.id << "@" << i.state << "{";
            for (const auto& [v, val] : i.map) os << v << "=" << (val ? val->to_string() : "_") << ";";
            os << "}";
        }
        os << "|";
        for (const auto& [d, q] : queues) {
            os << d.to_string() << ":[";
            for (const auto& m : q) os << m.to_string() << ";";
            os << "]";
        }
        os << "|";
        for (const auto& [a, b] : bindings) os << a << "~" << b << ";";
        os << "|" << fresh;
        return os.str();
    }

    std::optional<std::string> partner_of(const std::string& sid) const {
        for (const auto& [a, b] : bindings) {
            if (a == sid) return b;
            if (b == sid) return a;
        }
        return std::nullopt;
    }

    std::size_t max_queue_length() const {
        std::size_t n = 0;
        for (const auto& [d, q] : queues) n = std::max(n, q.size());
        return n;
    }
};

// ---------------------------------------------------------------------------
// Construction

struct ServiceSpec {
    std::string name;
    Activity act;
    VarMap map;
};

struct ClientSpec {
    Activity act;
    VarMap map;
};

/// Checks that locations are distinct and that every location in any assignment belongs to a service.
inline std::vector<Diagnostic> check_well_partnered(const std::vector<ServiceSpec>& services, const VarMap* client = nullptr) {
    std::vector<Diagnostic> out;
    std::set<Value> locs;
    for (const auto& s : services) {
        auto it = s.map.find("p0");
        if (it == s.map.end() || !it->second) continue;
        if (!locs.insert(*it->second).second)
            out.push_back({DiagCode::DupLocation, "location " + it->second->to_string() + " is used by two services", {}});
    }
    auto scan = [&](const VarMap& m, const std::string& owner) {
        for (const auto& [v, val] : m) {
            if (val && val->kind == Value::Kind::ServiceLoc && !locs.count(*val))
                out.push_back({DiagCode::DanglingPartner, owner + ": " + v + " refers to unknown location " + val->to_string(), {}});
        }
    };
    for (const auto& s : services) scan(s.map, s.name);
    if (client) scan(*client, "client");
    return out;
}

struct InitResult {
    std::optional<Configuration> config;
    std::vector<Diagnostic> diagnostics;
};

/// Builds the initial configuration: deployable services plus one client about to open a session.
inline InitResult make_initial_config(const std::vector<ServiceSpec>& services, const ClientSpec& client) {
    InitResult r;
    Configuration c;
    for (const auto& s : services) {
        auto g = std::make_shared<const ControlGraph>(compile(s.act));
        auto fv = free_vars(*g);
        for (auto d : check_deployable(s.map, s.act, fv)) {
            d.message = s.name + ": " + d.message;
            r.diagnostics.push_back(std::move(d));
        }
        c.services.push_back(std::make_shared<const DeployableService>(DeployableService{s.name, s.map, s.act, g}));
    }
    auto wp = check_well_partnered(services, &client.map);
    r.diagnostics.insert(r.diagnostics.end(), wp.begin(), wp.end());

    auto g = std::make_shared<const ControlGraph>(compile(client.act));
    const auto& first = g->out[g->init];
    bool shaped = !first.empty();
    for (const auto& e : first) shaped = shaped && e.action.kind == SymbolicAction::Kind::SesInit;
    if (!shaped) {
        r.diagnostics.push_back({DiagCode::ClientShape, "client must start by opening a session", {}});
    } else {
        for (const auto& v : free_vars(*g)) {
            auto it = client.map.find(v);
            if (it == client.map.end() || !it->second)
                r.diagnostics.push_back({DiagCode::UndefinedFree, "client: free variable " + v + " has no value", {}});
        }
    }
    if (!r.diagnostics.empty()) return r;
    c.instances.push_back({"client", client.map, client.act, g, g->init});
    r.config = std::move(c);
    return r;
}

// ---------------------------------------------------------------------------
// Steps

struct Successor {
    std::string rule;      // SES1, SES2, INV or REC
    std::string instance;  // id of the instance that moved or was spawned
    std::string action;
    std::string fault;     // non-empty when the step cannot be carried out
    Configuration config;
};

namespace detail {

inline std::optional<Value> lookup(const VarMap& m, const VarName& v) {
    auto it = m.find(v);
    return it == m.end() ? std::nullopt : it->second;
}

inline void push_message(Configuration& c, const Value& dest, Message msg) { c.queues[dest].push_back(std::move(msg)); }

inline void pop_message(Configuration& c, const Value& dest) {
    auto it = c.queues.find(dest);
    it->second.pop_front();
    if (it->second.empty()) c.queues.erase(it);
}

inline const Message* head(const Configuration& c, const Value& dest) {
    auto it = c.queues.find(dest);
    return it == c.queues.end() || it->second.empty() ? nullptr : &it->second.front();
}

}  // namespace detail

/// Every configuration reachable in one step, in deterministic order: instances
/// in order with their transitions in graph order, then session spawns per service.
inline std::vector<Successor> successors(const Configuration& c) {
    std::vector<Successor> out;
    for (std::size_t i = 0; i < c.instances.size(); ++i) {
        const Instance& inst = c.instances[i];
        for (const auto& e : inst.graph->out[inst.state]) {
            const auto& a = e.action;
            Successor s{"", inst.id, a.to_string(), "", c};
            Instance& ni = s.config.instances[i];
            switch (a.kind) {
                case SymbolicAction::Kind::SesInit: {
                    s.rule = "SES1";
                    auto loc = detail::lookup(inst.map, a.name);
                    if (!loc || loc->kind != Value::Kind::ServiceLoc) {
                        s.fault = "BAD_LOCATION";
                        s.config = c;
                        break;
                    }
                    std::string alpha = "#" + std::to_string(s.config.fresh++);
                    std::string beta = "#" + std::to_string(s.config.fresh++);
                    ni.map[a.session] = Value::session(alpha);
                    detail::push_message(s.config, *loc, {Message::Kind::New, beta, "", {}});
                    s.config.bindings.insert({alpha, beta});
                    ni.state = e.to;
                    break;
                }
                case SymbolicAction::Kind::Send: {
                    s.rule = "INV";
                    auto sid = detail::lookup(inst.map, a.session);
                    std::optional<std::string> dest;
                    if (sid && sid->kind == Value::Kind::SessionId) dest = c.partner_of(sid->text);
                    if (!dest) {
                        s.fault = "BROKEN_BINDING";
                        s.config = c;
                        break;
                    }
                    Message msg{Message::Kind::Op, "", a.name, {}};
                    for (const auto& x : a.args) {
                        auto v = detail::lookup(inst.map, x);
                        if (!v || v->kind == Value::Kind::SessionId) {
                            s.fault = "UNDEFINED_VALUE";
                            break;
                        }
                        msg.payload.push_back(*v);
                    }
                    if (!s.fault.empty()) {
                        s.config = c;
                        break;
                    }
                    detail::push_message(s.config, Value::session(*dest), std::move(msg));
                    ni.state = e.to;
                    break;
                }
                case SymbolicAction::Kind::Recv: {
                    auto sid = detail::lookup(inst.map, a.session);
                    if (!sid || sid->kind != Value::Kind::SessionId) continue;
                    const Message* m = detail::head(c, *sid);
                    if (!m || m->kind != Message::Kind::Op || m->op != a.name || m->payload.size() != a.args.size()) continue;
                    s.rule = "REC";
                    for (std::size_t k = 0; k < a.args.size(); ++k) ni.map[a.args[k]] = m->payload[k];
                    detail::pop_message(s.config, *sid);
                    ni.state = e.to;
                    break;
                }
                case SymbolicAction::Kind::Tau: continue;
            }
            out.push_back(std::move(s));
        }
    }
    for (const auto& svc : c.services) {
        Value loc = svc->location();
        const Message* m = detail::head(c, loc);
        if (!m || m->kind != Message::Kind::New) continue;
        Successor s{"SES2", svc->name + m->sid, "new(" + m->sid + ")", "", c};
        VarMap map = svc->map;
        map["s0"] = Value::session(m->sid);
        s.config.instances.push_back({s.instance, std::move(map), svc->act, svc->graph, svc->graph->init});
        detail::pop_message(s.config, loc);
        out.push_back(std::move(s));
    }
    return out;
}

/// An instance open for reception on `var` whose queue holds a message it can never accept.
struct UnsafeWitness {
    std::string instance;
    VarName var;
    std::string session;
    std::string op;
    std::size_t arity = 0;

    std::string to_string() const {
        return instance + " is open on " + var + " (" + session + ") but cannot receive " + op + "/" + std::to_string(arity);
    }
};

/// First violation of one-step safety, if any.
inline std::optional<UnsafeWitness> one_step_safe(const Configuration& c) {
    for (const auto& inst : c.instances) {
        for (const auto& [var, val] : inst.map) {
            if (!val || val->kind != Value::Kind::SessionId) continue;
            const Message* m = detail::head(c, *val);
            if (!m || m->kind != Message::Kind::Op) continue;
            if (!open_for_reception(*inst.graph, inst.state, var)) continue;
            bool accepted = false;
            for (const auto& e : inst.graph->out[inst.state]) {
                const auto& a = e.action;
                if (a.kind == SymbolicAction::Kind::Recv && a.session == var && a.name == m->op && a.args.size() == m->payload.size())
                    accepted = true;
            }
            if (!accepted) return UnsafeWitness{inst.id, var, val->text, m->op, m->payload.size()};
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exploration

struct TraceStep {
    std::string rule;
    std::string instance;
    std::string action;
    Configuration config;  // configuration after the step
};

struct SafetyOptions {
    std::size_t max_configs = 100000;
    std::size_t max_queue_len = 16;
};

struct SafetyResult {
    enum class Verdict { Verified, Unsafe, Exhausted };

    Verdict verdict = Verdict::Verified;
    std::size_t configs = 0;
    std::vector<TraceStep> trace;          // for Unsafe: steps from the initial configuration
    std::optional<UnsafeWitness> witness;  // for Unsafe without a fault
    std::string fault;                     // for Unsafe caused by a faulty step
    std::string reason;                    // for Exhausted

    std::string trace_text() const {
        std::string out;
        for (std::size_t i = 0; i < trace.size(); ++i)
            out += std::to_string(i + 1) + ": " + trace[i].rule + " " + trace[i].instance + " " + trace[i].action + "\n";
        return out;
    }
};

inline const char* verdict_name(SafetyResult::Verdict v) {
    switch (v) {
        case SafetyResult::Verdict::Verified: return "Verified";
        case SafetyResult::Verdict::Unsafe: return "UNSAFE";
        case SafetyResult::Verdict::Exhausted: return "Exhausted";
    }
    return "?";
}

/// Breadth-first search for a reachable configuration violating one-step safety.
inline SafetyResult explore_safety(const Configuration& init, const SafetyOptions& opt = {}) {
    struct Node {
        Configuration config;
        std::size_t parent;
        std::string rule, instance, action;
    };
    std::vector<Node> nodes{{init, static_cast<std::size_t>(-1), "", "", ""}};
    std::unordered_map<std::string, std::size_t> seen{{init.key(), 0}};
    SafetyResult r;
    bool pruned = false;
    auto trace_to = [&](std::size_t n) {
        std::vector<TraceStep> t;
        for (; nodes[n].parent != static_cast<std::size_t>(-1); n = nodes[n].parent)
            t.push_back({nodes[n].rule, nodes[n].instance, nodes[n].action, nodes[n].config});
        return std::vector<TraceStep>(t.rbegin(), t.rend());
    };
    for (std::size_t n = 0; n < nodes.size(); ++n) {
        if (auto w = one_step_safe(nodes[n].config)) {
            r.verdict = SafetyResult::Verdict::Unsafe;
            r.witness = w;
            r.trace = trace_to(n);
            r.configs = nodes.size();
            return r;
        }
        for (auto& s : successors(nodes[n].config)) {
            if (!s.fault.empty()) {
                r.verdict = SafetyResult::Verdict::Unsafe;
                r.fault = s.fault;
                r.trace = trace_to(n);
                r.trace.push_back({s.rule, s.instance, s.action, s.config});
                r.configs = nodes.size();
                return r;
            }
            if (s.config.max_queue_length() > opt.max_queue_len) {
                pruned = true;
                continue;
            }
            auto key = s.config.key();
            if (seen.count(key)) continue;
            if (nodes.size() >= opt.max_configs) {
                r.verdict = SafetyResult::Verdict::Exhausted;
                r.reason = "configuration budget of " + std::to_string(opt.max_configs) + " reached";
                r.configs = nodes.size();
                return r;
            }
            seen.emplace(std::move(key), nodes.size());
            nodes.push_back({std::move(s.config), n, std::move(s.rule), std::move(s.instance), std::move(s.action)});
        }
    }
    r.configs = nodes.size();
    if (pruned) {
        r.verdict = SafetyResult::Verdict::Exhausted;
        r.reason = "queue length bound of " + std::to_string(opt.max_queue_len) + " reached";
    }
    return r;
}

/// Queues and bindings of `c`, one item per line.
inline std::string summary(const Configuration& c) {
    std::ostringstream os;
    os << "instances:\n";
    for (const auto& i : c.instances) os << "  " << i.id << " at state " << i.state << "\n";
    os << "queues:\n";
    for (const auto& [d, q] : c.queues) {
        os << "  " << d.to_string() << ":";
        for (const auto& m : q) os << " " << m.to_string();
        os << "\n";
    }
    os << "bindings:\n";
    for (const auto& [a, b] : c.bindings) os << "  " << a << " ~ " << b << "\n";
    return os.str();
}

/// Runs at most `steps` uniformly chosen steps with a seeded generator and reports each one.
inline std::string simulate(const Configuration& init, std::size_t steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Configuration c = init;
    std::ostringstream os;
    std::size_t k = 0;
    for (; k < steps; ++k) {
        auto next = successors(c);
        if (next.empty()) {
            os << "quiescent at step " << k << "\n";
            break;
        }
        auto& s = next[rng() % next.size()];
        os << k + 1 << ": " << s.rule << " " << s.instance << " " << s.action << "\n";
        if (!s.fault.empty()) {
            os << "fault " << s.fault << " at step " << k + 1 << "\n";
            break;
        }
        c = std::move(s.config);
    }
    os << summary(c);
    return os.str();
}

}  // namespace seb
