#pragma once

// Session-oriented JSON-over-HTTP service for interactive Smith-chart matching.
//
// SessionService holds the state and implements every endpoint as a plain
// function returning {status, body}; mount() wires those functions onto a
// cpp-httplib server. All RF math happens here so a client only renders.
//
// Locking: the session table has its own mutex. Each session carries a FIFO
// gate that orders mutations by arrival and a shared_mutex that lets reads run
// concurrently while never observing a half-applied mutation.

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "leafmatch/discrete.hpp"
#include "leafmatch/json_io.hpp"
#include "leafmatch/ladder.hpp"
#include "leafmatch/synth.hpp"
#include "leafmatch/touchstone.hpp"
#include "leafmatch/units.hpp"

namespace leafmatch::serve {

using json = nlohmann::json;
using Clock = std::chrono::system_clock;

inline constexpr std::size_t kMaxS1pBytes = 1u << 20;

struct ServiceConfig {
    std::chrono::seconds ttl = std::chrono::hours(24);
    std::optional<std::filesystem::path> persist_path;
    int arc_steps = 64;
    std::function<Clock::time_point()> now = [] { return Clock::now(); };
};

struct Reply {
    int status = 200;
    json body;
};

inline Reply error_reply(int status, const std::string& code, const std::string& message,
                         std::optional<std::size_t> line = std::nullopt) {
    json err = {{"code", code}, {"message", message}};
    if (line) err["line"] = *line;
    return {status, {{"error", err}}};
}

/// Mutex that grants ownership strictly in request order.
class FifoGate {
public:
    void lock() {
        std::unique_lock lk(m_);
        const std::uint64_t ticket = next_++;
        cv_.wait(lk, [&] { return serving_ == ticket; });
    }
    void unlock() {
        {
            std::lock_guard lk(m_);
            ++serving_;
        }
        cv_.notify_all();
    }

private:
    std::mutex m_;
    std::condition_variable cv_;
    std::uint64_t next_ = 0;
    std::uint64_t serving_ = 0;
};

struct Session {
    std::string id;
    ReferenceImpedance z0;
    Frequency f0;
    LoadProfile load;
    json load_doc;  // as received, for persistence and echoing back
    std::vector<LadderElement> stack;
    Clock::time_point created;
    Clock::time_point updated;

    FifoGate writers;
    mutable std::shared_mutex rw;

    Session(std::string id_, ReferenceImpedance z0_, Frequency f0_, LoadProfile load_, json doc, Clock::time_point t)
        : id(std::move(id_)), z0(z0_), f0(f0_), load(std::move(load_)), load_doc(std::move(doc)), created(t),
          updated(t) {}
};

inline std::string iso8601(Clock::time_point t) {
    const std::time_t tt = Clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// 128 random bits as 32 hex digits.
inline std::string new_session_id() {
    static thread_local std::random_device rd;
    std::ostringstream os;
    os << std::hex;
    for (int i = 0; i < 4; ++i) {
        const std::uint32_t word = rd();
        char buf[9];
        std::snprintf(buf, sizeof buf, "%08x", word);
        os << buf;
    }
    return os.str();
}

inline json point_json(const ReflectionCoefficient& g) { return json::array({g.re, g.im}); }

class SessionService {
public:
    explicit SessionService(ServiceConfig cfg = {}) : cfg_(std::move(cfg)) {
        if (cfg_.persist_path) replay(*cfg_.persist_path);
    }

    /// POST /sessions
    Reply create(const std::string& body) {
        return guarded([&]() -> Reply {
            const json req = parse_body(body);
            if (!req.is_object()) return error_reply(400, "invalid_request", "body must be a JSON object");
            if (auto too_big = check_upload(req)) return *too_big;
            const auto now = cfg_.now();
            auto s = make_session(new_session_id(), req, now);
            evict_expired();
            {
                std::lock_guard lk(table_m_);
                sessions_[s->id] = s;
            }
            persist({{"op", "create"}, {"id", s->id}, {"at", iso8601(now)}, {"body", req}});
            std::shared_lock rl(s->rw);
            json out = {{"id", s->id}, {"state", state_json(*s)}};
            return {201, out};
        });
    }

    /// GET /sessions/{id}
    Reply state(const std::string& id) {
        return with_session(id, [&](Session& s) -> Reply {
            std::shared_lock rl(s.rw);
            return {200, state_json(s)};
        });
    }

    /// POST /sessions/{id}/elements
    Reply push(const std::string& id, const std::string& body) {
        return with_session(id, [&](Session& s) -> Reply {
            const json req = parse_body(body);
            const LadderElement e = json_io::element_from_json(req);
            std::lock_guard gate(s.writers);
            std::unique_lock wl(s.rw);
            if (s.stack.size() >= MatchingNetwork::kMaxElements) {
                return error_reply(400, "invalid_element", "element stack is full");
            }
            auto next = s.stack;
            next.push_back(e);
            json state = state_json(s, &next);  // throws before commit if not evaluable
            s.stack = std::move(next);
            s.updated = cfg_.now();
            state["updated"] = iso8601(s.updated);
            persist({{"op", "push"}, {"id", s.id}, {"at", iso8601(s.updated)}, {"element", json_io::element_to_json(e)}});
            return {200, state};
        });
    }

    /// DELETE /sessions/{id}/elements/last
    Reply pop(const std::string& id) {
        return with_session(id, [&](Session& s) -> Reply {
            std::lock_guard gate(s.writers);
            std::unique_lock wl(s.rw);
            if (s.stack.empty()) return error_reply(400, "empty_stack", "no element to remove");
            s.stack.pop_back();
            s.updated = cfg_.now();
            persist({{"op", "pop"}, {"id", s.id}, {"at", iso8601(s.updated)}});
            return {200, state_json(s)};
        });
    }

    /// GET /sessions/{id}/suggest
    Reply suggest(const std::string& id) {
        return with_session(id, [&](Session& s) -> Reply {
            std::shared_lock rl(s.rw);
            return {200, {{"solutions", suggestions_json(s, s.stack)}}};
        });
    }

    /// GET /sessions/{id}/sweep?from=&to=&points=
    Reply sweep(const std::string& id, const std::optional<std::string>& from, const std::optional<std::string>& to,
                const std::optional<std::string>& points) {
        return with_session(id, [&](Session& s) -> Reply {
            const Frequency f_start(from ? units::parse_quantity(*from, "Hz") : 700e6);
            const Frequency f_stop(to ? units::parse_quantity(*to, "Hz") : 1100e6);
            int n = 201;
            if (points) {
                const auto v = units::parse_decimal(*points);
                if (!v || *v != std::floor(*v) || *v < 2 || *v > 100000) {
                    return error_reply(400, "invalid_request", "points must be an integer in [2, 100000]");
                }
                n = static_cast<int>(*v);
            }
            std::shared_lock rl(s.rw);
            const auto result = sweep_s11(MatchingNetwork(s.stack), s.load, s.z0, f_start, f_stop, n);
            return {200, json_io::sweep_to_json(result)};
        });
    }

    /// POST /sessions/{id}/discretize {series, k}
    Reply discretize(const std::string& id, const std::string& body) {
        return with_session(id, [&](Session& s) -> Reply {
            const json req = body.empty() ? json::object() : parse_body(body);
            discrete::SearchOptions opt;
            if (req.contains("series")) opt.series = discrete::parse_series(req.at("series").get<std::string>());
            if (req.contains("k")) opt.k = req.at("k").get<int>();
            if (req.contains("top_k")) opt.top_k = req.at("top_k").get<std::size_t>();
            if (opt.k < 0 || opt.k > 10) return error_reply(400, "invalid_request", "k must be in [0, 10]");
            std::shared_lock rl(s.rw);
            const auto report = discrete::optimize_discrete(MatchingNetwork(s.stack), s.load, s.z0, s.f0, opt);
            return {200, json_io::search_report_to_json(report)};
        });
    }

    /// Drops sessions idle for longer than the TTL. Returns how many were removed.
    std::size_t evict_expired() {
        const auto now = cfg_.now();
        std::vector<std::string> gone;
        {
            std::lock_guard lk(table_m_);
            for (auto it = sessions_.begin(); it != sessions_.end();) {
                std::shared_lock rl(it->second->rw);
                if (now - it->second->updated > cfg_.ttl) {
                    gone.push_back(it->first);
                    rl.unlock();
                    it = sessions_.erase(it);
                } else {
                    ++it;
                }
            }
        }
        for (const auto& id : gone) persist({{"op", "evict"}, {"id", id}});
        return gone.size();
    }

    std::size_t session_count() const {
        std::lock_guard lk(table_m_);
        return sessions_.size();
    }

private:
    template <class F>
    Reply guarded(F&& f) {
        try {
            return f();
        } catch (const touchstone::ParseError& e) {
            return error_reply(400, "bad_s1p", e.what(), e.line());
        } catch (const InputError& e) {
            return error_reply(400, "invalid_request", e.what());
        } catch (const json::exception& e) {
            return error_reply(400, "invalid_request", e.what());
        } catch (const ComputeError& e) {
            return error_reply(422, "computation_error", e.what());
        } catch (const std::exception& e) {
            return error_reply(500, "internal_error", e.what());
        }
    }

    template <class F>
    Reply with_session(const std::string& id, F&& f) {
        return guarded([&]() -> Reply {
            std::shared_ptr<Session> s;
            {
                std::lock_guard lk(table_m_);
                auto it = sessions_.find(id);
                if (it != sessions_.end()) s = it->second;
            }
            if (!s) return error_reply(404, "not_found", "unknown session '" + id + "'");
            return f(*s);
        });
    }

    static json parse_body(const std::string& body) {
        try {
            return json::parse(body);
        } catch (const json::parse_error& e) {
            throw InputError(std::string("malformed JSON body: ") + e.what());
        }
    }

    static std::optional<Reply> check_upload(const json& req) {
        if (req.contains("load") && req.at("load").is_object() && req.at("load").contains("content") &&
            req.at("load").at("content").is_string() &&
            req.at("load").at("content").get_ref<const std::string&>().size() > kMaxS1pBytes) {
            return error_reply(413, "payload_too_large", "s1p upload exceeds 1 MiB");
        }
        return std::nullopt;
    }

    std::shared_ptr<Session> make_session(std::string id, const json& req, Clock::time_point now) const {
        const ReferenceImpedance z0(req.contains("z0") ? json_io::detail::number(req, "z0", "ohm") : 50.0);
        const Frequency f0(json_io::detail::number(req, "f0", "Hz"));
        const json& load_doc = json_io::detail::require(req, "load");
        LoadProfile load = json_io::load_from_json(load_doc);
        (void)load_impedance(load, f0);  // must be evaluable at f0
        return std::make_shared<Session>(std::move(id), z0, f0, std::move(load), load_doc, now);
    }

    json suggestions_json(const Session& s, const std::vector<LadderElement>& stack) const {
        json out = json::array();
        const MatchingNetwork current(stack);
        const Impedance residual = input_impedance(current, s.load, s.f0);
        if (!(residual.resistance > 0.0)) return out;
        for (const auto& sol : l_match_solutions(residual, s.z0, s.f0)) {
            if (stack.size() + sol.network.size() > MatchingNetwork::kMaxElements) continue;
            auto full = stack;
            for (const auto& e : sol.network.elements()) full.push_back(e);
            const auto g = reflection_coefficient(input_impedance(MatchingNetwork(full), s.load, s.f0), s.z0);
            MatchSolution verified{sol.network, g, s11_db(g), sol.topology_label};
            out.push_back(json_io::solution_to_json(verified));
        }
        return out;
    }

    /// Full SessionState for `s`, or for `s` with its stack replaced by `stack`.
    json state_json(const Session& s, const std::vector<LadderElement>* stack = nullptr) const {
        const auto& els = stack ? *stack : s.stack;
        const MatchingNetwork network(els);
        const Impedance z_load = load_impedance(s.load, s.f0);
        const ReflectionCoefficient g_start = reflection_coefficient(z_load, s.z0);

        json arcs = json::array();
        Impedance z = z_load;
        std::optional<ReflectionCoefficient> prev_end;
        for (std::size_t i = 0; i < els.size(); ++i) {
            const LadderElement& e = els[i];
            const SmithArc arc = smith_arc(z, e, s.f0, cfg_.arc_steps, s.z0, static_cast<int>(i));
            verify_arc(arc, e, s.z0);
            if (prev_end && !(arc.points.front() == *prev_end)) {
                throw std::logic_error("arc chaining broken at element " + std::to_string(i));
            }
            prev_end = arc.points.back();
            json pts = json::array();
            for (const auto& p : arc.points) pts.push_back(point_json(p));
            arcs.push_back({{"element_index", i}, {"points", pts}});
            z = attach(z, e.placement, element_impedance(e, s.f0));
        }

        const Impedance z_in = input_impedance(network, s.load, s.f0);
        const ReflectionCoefficient g = reflection_coefficient(z_in, s.z0);
        if (prev_end && !(*prev_end == g)) throw std::logic_error("final arc does not end at the evaluated state");

        json elements = json::array();
        for (const auto& e : els) elements.push_back(json_io::element_to_json(e));
        return {
            {"id", s.id},
            {"z0", s.z0.ohms()},
            {"f0_hz", s.f0.hertz()},
            {"load", s.load_doc},
            {"created", iso8601(s.created)},
            {"updated", iso8601(s.updated)},
            {"elements", elements},
            {"start",
             {{"impedance", json_io::impedance_to_json(z_load)},
              {"gamma", json_io::gamma_to_json(g_start)},
              {"s11_db", s11_db_floored(s11_db(g_start))}}},
            {"current",
             {{"impedance", json_io::impedance_to_json(z_in)},
              {"gamma", json_io::gamma_to_json(g)},
              {"s11_db", s11_db_floored(s11_db(g))}}},
            {"arcs", arcs},
            {"suggestions", suggestions_json(s, els)},
        };
    }

    /// Series reactances keep R fixed and shunt susceptances keep G fixed;
    /// checked on every ideal reactive element before a state leaves the server.
    static void verify_arc(const SmithArc& arc, const LadderElement& e, const ReferenceImpedance& z0) {
        if (e.kind == ComponentKind::Resistor || e.quality_factor) return;
        const Impedance first = impedance_from_gamma(arc.points.front(), z0);
        const Admittance first_y = impedance_to_admittance(first);
        for (const auto& p : arc.points) {
            const Impedance z = impedance_from_gamma(p, z0);
            const double scale = std::max(z.magnitude(), z0.ohms());
            if (e.placement == Placement::Series) {
                if (std::fabs(z.resistance - first.resistance) > 1e-9 * scale) {
                    throw std::logic_error("series arc left its constant-resistance circle");
                }
            } else {
                const Admittance y = impedance_to_admittance(z);
                const double yscale = std::max(y.magnitude(), 1.0 / z0.ohms());
                if (std::fabs(y.conductance - first_y.conductance) > 1e-9 * yscale) {
                    throw std::logic_error("shunt arc left its constant-conductance circle");
                }
            }
        }
    }

    void persist(const json& record) {
        if (!cfg_.persist_path) return;
        std::lock_guard lk(persist_m_);
        std::ofstream out(*cfg_.persist_path, std::ios::app);
        out << record.dump() << '\n';
    }

    /// Rebuilds sessions from an append-only journal. Unreadable lines are skipped.
    void replay(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) return;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            try {
                const json rec = json::parse(line);
                const std::string op = rec.at("op").get<std::string>();
                const std::string id = rec.at("id").get<std::string>();
                if (op == "create") {
                    sessions_[id] = make_session(id, rec.at("body"), cfg_.now());
                } else if (op == "push") {
                    if (auto it = sessions_.find(id); it != sessions_.end()) {
                        it->second->stack.push_back(json_io::element_from_json(rec.at("element")));
                        it->second->updated = cfg_.now();
                    }
                } else if (op == "pop") {
                    if (auto it = sessions_.find(id); it != sessions_.end() && !it->second->stack.empty()) {
                        it->second->stack.pop_back();
                    }
                } else if (op == "evict") {
                    sessions_.erase(id);
                }
            } catch (const std::exception&) {
                continue;
            }
        }
    }

    ServiceConfig cfg_;
    mutable std::mutex table_m_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mutex persist_m_;
};

inline void send(httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

inline std::optional<std::string> query(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) return std::nullopt;
    return req.get_param_value(key);
}

/// Registers every route plus CORS handling on `server`.
inline void mount(httplib::Server& server, SessionService& svc, const std::string& cors_origin = "*") {
    server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.set_payload_max_length(4 * kMaxS1pBytes);
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.create(req.body));
    });
    server.Get(R"(/sessions/([0-9a-zA-Z]+))", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.state(req.matches[1]));
    });
    server.Post(R"(/sessions/([0-9a-zA-Z]+)/elements)", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.push(req.matches[1], req.body));
    });
    server.Delete(R"(/sessions/([0-9a-zA-Z]+)/elements/last)",
                  [&svc](const httplib::Request& req, httplib::Response& res) { send(res, svc.pop(req.matches[1])); });
    server.Get(R"(/sessions/([0-9a-zA-Z]+)/suggest)", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.suggest(req.matches[1]));
    });
    server.Get(R"(/sessions/([0-9a-zA-Z]+)/sweep)", [&svc](const httplib::Request& req, httplib::Response& res) {
        send(res, svc.sweep(req.matches[1], query(req, "from"), query(req, "to"), query(req, "points")));
    });
    server.Post(R"(/sessions/([0-9a-zA-Z]+)/discretize)",
                [&svc](const httplib::Request& req, httplib::Response& res) {
                    send(res, svc.discretize(req.matches[1], req.body));
                });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        const std::string code = res.status == 413 ? "payload_too_large" : res.status == 404 ? "not_found" : "http_error";
        send(res, error_reply(res.status, code, httplib::status_message(res.status)));
    });
}

}  // namespace leafmatch::serve
