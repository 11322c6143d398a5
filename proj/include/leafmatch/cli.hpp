#pragma once

// `leafmatch` command-line front end. run() is the whole program; the binary
// in tools/ only forwards argv to it.
//
// Exit codes: 0 success, 2 usage or input error, 3 computation error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "leafmatch/discrete.hpp"
#include "leafmatch/json_io.hpp"
#include "leafmatch/ladder.hpp"
#include "leafmatch/leafgeom.hpp"
#include "leafmatch/linksim.hpp"
#include "leafmatch/rfcore.hpp"
#include "leafmatch/serve.hpp"
#include "leafmatch/synth.hpp"
#include "leafmatch/touchstone.hpp"
#include "leafmatch/units.hpp"

namespace leafmatch::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitCompute = 3;

using json = nlohmann::json;

struct GlobalOptions {
    std::string z0 = "50";
    std::string f0 = "915MHz";
    std::string out;
    std::string format = "text";
    std::uint64_t seed = 1;
};

struct LoadOptions {
    std::string load;
    std::string s1p;
    std::string resonator;
};

struct NetworkOptions {
    std::string network_file;
    std::string elements;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline json read_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

/// "--resonator 10,18nH,1.2pF" → series RLC profile.
inline LoadProfile resonator_from_text(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw InputError("--resonator expects r,L,C (e.g. 10,18nH,1.2pF)");
    return LoadProfile::resonator(units::parse_quantity(parts[0], "ohm"), units::parse_quantity(parts[1], "H"),
                                  units::parse_quantity(parts[2], "F"));
}

inline LoadProfile load_from_options(const LoadOptions& o) {
    const int given = !o.load.empty() + !o.s1p.empty() + !o.resonator.empty();
    if (given == 0) throw InputError("a load is required: --load R+Xj, --s1p FILE or --resonator r,L,C");
    if (given > 1) throw InputError("give exactly one of --load, --s1p, --resonator");
    if (!o.load.empty()) return LoadProfile::constant(Impedance::from(units::parse_impedance(o.load)));
    if (!o.s1p.empty()) return LoadProfile::measured(touchstone::parse_touchstone(read_file(o.s1p)));
    return resonator_from_text(o.resonator);
}

/// "series:L:6.8nH,shunt:C:1.2pF[:Q]" in load-to-source order.
inline MatchingNetwork elements_from_text(const std::string& text) {
    std::vector<LadderElement> els;
    if (text.empty()) return MatchingNetwork{};
    for (const auto& item : split(text, ',')) {
        const auto f = split(item, ':');
        if (f.size() != 3 && f.size() != 4) throw InputError("element '" + item + "' is not placement:kind:value[:Q]");
        LadderElement e;
        e.placement = json_io::parse_placement(f[0]);
        e.kind = json_io::parse_kind(f[1]);
        e.value = units::parse_quantity(f[2], value_unit(e.kind));
        if (f.size() == 4) e.quality_factor = units::parse_quantity(f[3], "");
        e.validate();
        els.push_back(e);
    }
    return MatchingNetwork(std::move(els));
}

inline MatchingNetwork network_from_options(const NetworkOptions& o) {
    if (!o.network_file.empty() && !o.elements.empty()) throw InputError("give --network or --elements, not both");
    if (!o.network_file.empty()) return json_io::network_from_json(read_json_file(o.network_file));
    return elements_from_text(o.elements);
}

/// Base unit implied by a value's suffix: "7nH" -> "H", "10" -> "".
inline std::string unit_of(const std::string& text) {
    auto ends = [&](std::string_view u) { return text.size() >= u.size() && text.compare(text.size() - u.size(), u.size(), u) == 0; };
    if (ends("ohm") || ends("\xCE\xA9")) return "ohm";
    if (ends("H") && !ends("Hz")) return "H";
    if (ends("F")) return "F";
    return "";
}

inline std::string describe_element(const LadderElement& e) {
    std::string s = e.label() + " " + units::format_si(e.value, value_unit(e.kind));
    if (e.quality_factor) s += " (Q=" + units::format_si(*e.quality_factor, "", 4) + ")";
    return s;
}

inline std::string describe_network(const MatchingNetwork& n) {
    if (n.empty()) return "(no elements)";
    std::string s;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) s += " | ";
        s += describe_element(n.elements()[i]);
    }
    return s;
}

inline std::string fmt_db(double db) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f dB", s11_db_floored(db));
    return buf;
}

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(int argc, const char* const* argv) {
        CLI::App app{"leafmatch: L-network matching, E-series search, Touchstone, leaf outline and link tools"};
        app.require_subcommand(1);
        app.add_option("--z0", g_.z0, "reference impedance (e.g. 50 or 50ohm)");
        app.add_option("--f0", g_.f0, "design frequency (e.g. 915MHz)");
        app.add_option("--out", g_.out, "write the primary output to this file instead of stdout");
        app.add_option("--format", g_.format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
        app.add_option("--seed", g_.seed, "seed for Monte-Carlo tolerance runs");

        auto add_load = [&](CLI::App* cmd) {
            cmd->add_option("--load", load_.load, "constant load impedance, e.g. 25-10j");
            cmd->add_option("--s1p", load_.s1p, "measured one-port Touchstone file");
            cmd->add_option("--resonator", load_.resonator, "series RLC load r,L,C, e.g. 10,18nH,1.2pF");
        };
        auto add_network = [&](CLI::App* cmd) {
            cmd->add_option("--network", net_.network_file, "network JSON file");
            cmd->add_option("--elements", net_.elements, "inline network, e.g. series:L:3.3nH,shunt:L:5.6nH");
        };

        auto* match = app.add_subcommand("match", "synthesize every L-network match at f0");
        add_load(match);

        std::string from = "700MHz", to = "1100MHz";
        int points = 201;
        auto* sweep = app.add_subcommand("sweep", "S11 over frequency and the dip location");
        add_load(sweep);
        add_network(sweep);
        sweep->add_option("--from", from, "start frequency");
        sweep->add_option("--to", to, "stop frequency");
        sweep->add_option("--points", points, "grid points (>= 2)");

        std::string series = "E24", value;
        int k = 0;
        auto* snap = app.add_subcommand("snap", "snap a value or a network to an E-series");
        snap->add_option("--value", value, "component value with unit, e.g. 7nH");
        snap->add_option("--series", series, "E12, E24, E48 or E96");
        snap->add_option("--k", k, "also list k neighbors on each side");
        add_network(snap);
        add_load(snap);

        int opt_k = 2;
        std::size_t top = 5;
        double tolerance = 0.0;
        int mc_samples = 1000;
        auto* optimize = app.add_subcommand("optimize", "exhaustive E-series neighborhood search at f0");
        add_network(optimize);
        add_load(optimize);
        optimize->add_option("--series", series, "E12, E24, E48 or E96");
        optimize->add_option("--k", opt_k, "neighborhood radius");
        optimize->add_option("--top", top, "runner-ups to report");
        optimize->add_option("--tolerance", tolerance, "component tolerance in percent for a Monte-Carlo check");
        optimize->add_option("--mc-samples", mc_samples, "Monte-Carlo samples");

        std::string profile_path, dxf_path;
        auto* leaf = app.add_subcommand("leaf", "build the leaf radiator pair and export DXF");
        leaf->add_option("--profile", profile_path, "leaf profile JSON (default: shipped profile)");
        leaf->add_option("--dxf", dxf_path, "write the outline as DXF to this path");

        std::string budget_path;
        double d_from = 0.5, d_to = 2.0, d_step = 0.25;
        auto* link = app.add_subcommand("link", "charging time versus distance");
        link->add_option("--budget", budget_path, "link budget JSON (default budget if omitted)");
        link->add_option("--from", d_from, "first distance in meters");
        link->add_option("--to", d_to, "last distance in meters");
        link->add_option("--step", d_step, "distance step in meters");

        std::string material = "copper", rho, mur = "1", freq;
        auto* skin = app.add_subcommand("skin", "skin depth of a conductor");
        skin->add_option("--material", material, "copper or custom")->check(CLI::IsMember({"copper", "custom"}));
        skin->add_option("--rho", rho, "resistivity in ohm*m (custom)");
        skin->add_option("--mur", mur, "relative permeability (custom)");
        skin->add_option("--freq", freq, "frequency (default: --f0)");

        int port = 8080;
        std::string host = "127.0.0.1", persist, cors = "*";
        double ttl_hours = 24.0;
        auto* serve_cmd = app.add_subcommand("serve", "run the Smith-chart session service");
        serve_cmd->add_option("--port", port, "TCP port");
        serve_cmd->add_option("--host", host, "bind address (loopback by default)");
        serve_cmd->add_option("--persist", persist, "append-only JSON-lines journal for crash recovery");
        serve_cmd->add_option("--ttl-hours", ttl_hours, "idle session lifetime");
        serve_cmd->add_option("--cors-origin", cors, "allowed CORS origin");

        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp&) {
            out_ << app.help();
            return kExitOk;
        } catch (const CLI::CallForAllHelp&) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kExitOk;
        } catch (const CLI::ParseError& e) {
            err_ << "error: " << e.what() << "\n" << app.help();
            return kExitInput;
        }

        try {
            if (*match) return cmd_match();
            if (*sweep) return cmd_sweep(from, to, points);
            if (*snap) return cmd_snap(value, series, k);
            if (*optimize) return cmd_optimize(series, opt_k, top, tolerance, mc_samples);
            if (*leaf) return cmd_leaf(profile_path, dxf_path);
            if (*link) return cmd_link(budget_path, d_from, d_to, d_step);
            if (*skin) return cmd_skin(material, rho, mur, freq);
            if (*serve_cmd) return cmd_serve(host, port, persist, ttl_hours, cors);
        } catch (const InputError& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitInput;
        } catch (const json::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitInput;
        } catch (const ComputeError& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitCompute;
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
            return kExitCompute;
        }
        return kExitInput;
    }

private:
    ReferenceImpedance z0() const { return ReferenceImpedance(units::parse_quantity(g_.z0, "ohm")); }
    Frequency f0() const { return Frequency(units::parse_quantity(g_.f0, "Hz")); }

    void emit(const std::string& text) {
        if (g_.out.empty()) {
            out_ << text;
            return;
        }
        std::ofstream f(g_.out, std::ios::binary);
        if (!f) throw InputError("cannot write '" + g_.out + "'");
        f << text;
    }

    int cmd_match() {
        const auto profile = load_from_options(load_);
        const auto freq = f0();
        const auto sols = match_and_verify(profile, z0(), freq);
        if (g_.format == "json") {
            emit(json{{"f0_hz", freq.hertz()}, {"z0", z0().ohms()}, {"solutions", json_io::solutions_to_json(sols)}}
                     .dump(2) + "\n");
            return kExitOk;
        }
        if (g_.format == "csv") {
            std::string csv = "index,topology,s11_db\n";
            for (std::size_t i = 0; i < sols.size(); ++i) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.6g", s11_db_floored(sols[i].achieved_s11_db));
                csv += std::to_string(i + 1) + "," + sols[i].topology_label + "," + buf + "\n";
            }
            emit(csv);
            return kExitOk;
        }
        const Impedance load = load_impedance(profile, freq);
        std::ostringstream os;
        char head[160];
        std::snprintf(head, sizeof head, "load at %s: %.6g %+.6gj ohm (S11 %s)\n", units::format_si(freq.hertz(), "Hz").c_str(),
                      load.resistance, load.reactance,
                      fmt_db(s11_db(reflection_coefficient(load, z0()))).c_str());
        os << head;
        if (sols.size() == 1 && sols.front().network.empty()) {
            os << "already matched: empty network\n";
        } else {
            for (std::size_t i = 0; i < sols.size(); ++i) {
                os << "[" << i + 1 << "] " << sols[i].topology_label << ": " << describe_network(sols[i].network)
                   << "  S11 " << fmt_db(sols[i].achieved_s11_db) << "\n";
            }
        }
        emit(os.str());
        return kExitOk;
    }

    int cmd_sweep(const std::string& from, const std::string& to, int points) {
        const auto profile = load_from_options(load_);
        const auto network = network_from_options(net_);
        const auto result = sweep_s11(network, profile, z0(), Frequency(units::parse_quantity(from, "Hz")),
                                      Frequency(units::parse_quantity(to, "Hz")), points);
        const Dip dip = find_dip(result);
        char dip_line[128];
        std::snprintf(dip_line, sizeof dip_line, "dip: %.6g Hz at %.2f dB\n", dip.frequency.hertz(), dip.s11_db);
        if (g_.format == "json") {
            emit(json_io::sweep_to_json(result).dump(2) + "\n");
            return kExitOk;
        }
        std::string csv = "frequency_hz,gamma_re,gamma_im,s11_db\n";
        for (const auto& p : result.points) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "%.10g,%.6g,%.6g,%.6g\n", p.frequency.hertz(), p.gamma.re, p.gamma.im, p.s11_db);
            csv += buf;
        }
        if (g_.format == "csv") {
            emit(csv);
            err_ << dip_line;
        } else {
            emit(csv + dip_line);
        }
        return kExitOk;
    }

    int cmd_snap(const std::string& value, const std::string& series_name, int k) {
        const auto series = discrete::parse_series(series_name);
        if (!value.empty()) {
            const std::string unit = unit_of(value);
            const double v = units::parse_quantity(value, unit);
            const auto snapped = discrete::snap(v, series);
            const auto hood = discrete::neighborhood(v, series, k);
            if (g_.format == "json") {
                json arr = json::array();
                for (const auto& c : hood) arr.push_back(c.value());
                emit(json{{"input", v}, {"series", discrete::series_name(series)}, {"snapped", snapped.value()},
                          {"neighborhood", arr}}
                         .dump(2) + "\n");
                return kExitOk;
            }
            std::ostringstream os;
            os << units::format_si(v, unit) << " -> " << units::format_si(snapped.value(), unit) << " ("
               << discrete::series_name(series) << ")\n";
            if (k > 0) {
                os << "neighborhood:";
                for (const auto& c : hood) os << " " << units::format_si(c.value(), unit);
                os << "\n";
            }
            emit(os.str());
            return kExitOk;
        }
        const auto network = network_from_options(net_);
        if (network.empty()) throw InputError("snap needs --value or a network (--network / --elements)");
        // Snapping alone is the k = 0 search.
        discrete::SearchOptions opt;
        opt.series = series;
        opt.k = 0;
        opt.top_k = 0;
        const auto profile = load_from_options(load_);
        const auto report = discrete::optimize_discrete(network, profile, z0(), f0(), opt);
        return render_report(report);
    }

    int cmd_optimize(const std::string& series_name, int k, std::size_t top, double tolerance, int samples) {
        discrete::SearchOptions opt;
        opt.series = discrete::parse_series(series_name);
        opt.k = k;
        opt.top_k = top;
        if (tolerance > 0.0) opt.tolerance = discrete::ToleranceSpec{tolerance, samples, g_.seed};
        const auto network = network_from_options(net_);
        const auto profile = load_from_options(load_);
        const auto report = discrete::optimize_discrete(network, profile, z0(), f0(), opt);
        return render_report(report);
    }

    int render_report(const discrete::SearchReport& r) {
        if (g_.format == "json") {
            emit(json_io::search_report_to_json(r).dump(2) + "\n");
            return kExitOk;
        }
        std::ostringstream os;
        if (g_.format == "csv") {
            os << "rank,s11_db,elements\n";
            auto row = [&](std::size_t rank, const MatchingNetwork& n, double db) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.6g", s11_db_floored(db));
                std::string els;
                for (const auto& e : n.elements()) {
                    if (!els.empty()) els += ";";
                    char v[64];
                    std::snprintf(v, sizeof v, "%s:%s:%.6g", placement_name(e.placement), kind_symbol(e.kind), e.value);
                    els += v;
                }
                os << rank << "," << buf << "," << els << "\n";
            };
            row(1, r.best_network, r.best_s11_db);
            for (std::size_t i = 0; i < r.runner_ups.size(); ++i) row(i + 2, r.runner_ups[i].network, r.runner_ups[i].s11_db);
            emit(os.str());
            return kExitOk;
        }
        os << "candidates evaluated: " << r.candidates_evaluated << "\n";
        os << " rank  S11 at f0    network\n";
        char line[64];
        std::snprintf(line, sizeof line, " %4d  %-11s  ", 1, fmt_db(r.best_s11_db).c_str());
        os << line << describe_network(r.best_network) << "\n";
        for (std::size_t i = 0; i < r.runner_ups.size(); ++i) {
            std::snprintf(line, sizeof line, " %4zu  %-11s  ", i + 2, fmt_db(r.runner_ups[i].s11_db).c_str());
            os << line << describe_network(r.runner_ups[i].network) << "\n";
        }
        if (r.tolerance) {
            os << "tolerance (" << r.tolerance->samples << " samples): median " << fmt_db(r.tolerance->median_s11_db)
               << ", p95 " << fmt_db(r.tolerance->p95_s11_db) << ", worst " << fmt_db(r.tolerance->worst_s11_db) << "\n";
        }
        emit(os.str());
        return kExitOk;
    }

    int cmd_leaf(const std::string& profile_path, const std::string& dxf_path) {
        const auto profile =
            profile_path.empty() ? leafgeom::default_profile() : json_io::leaf_profile_from_json(read_json_file(profile_path));
        const auto pair = leafgeom::build_leaf_pair(profile);
        const auto m = leafgeom::outline_metrics(pair);
        if (!dxf_path.empty()) {
            std::ofstream f(dxf_path, std::ios::binary);
            if (!f) throw InputError("cannot write '" + dxf_path + "'");
            f << leafgeom::export_dxf(pair);
        }
        if (g_.format == "json") {
            emit(json_io::leaf_metrics_to_json(m).dump(2) + "\n");
        } else if (g_.format == "csv") {
            char buf[160];
            std::snprintf(buf, sizeof buf, "area_mm2,perimeter_mm,width_mm,height_mm\n%.6g,%.6g,%.6g,%.6g\n", m.area,
                          m.perimeter, m.width, m.height);
            emit(buf);
        } else {
            char buf[160];
            std::snprintf(buf, sizeof buf, "area %.2f mm^2, perimeter %.2f mm, bbox %.2f x %.2f mm\n", m.area, m.perimeter,
                          m.width, m.height);
            emit(buf);
        }
        return kExitOk;
    }

    int cmd_link(const std::string& budget_path, double d_from, double d_to, double d_step) {
        linksim::LinkBudget lb;
        linksim::ChargeTank tank;
        if (!budget_path.empty()) {
            const json doc = read_json_file(budget_path);
            lb = json_io::link_budget_from_json(doc);
            if (doc.contains("tank")) tank = json_io::charge_tank_from_json(doc.at("tank"));
        }
        const auto result = linksim::distance_sweep(lb, tank, d_from, d_to, d_step);
        if (g_.format == "json") {
            emit(json_io::distance_sweep_to_json(result).dump(2) + "\n");
        } else {
            emit(linksim::to_csv(result));
        }
        return kExitOk;
    }

    int cmd_skin(const std::string& material, const std::string& rho, const std::string& mur, const std::string& freq) {
        MaterialSpec m = MaterialSpec::copper();
        if (material == "custom") {
            if (rho.empty()) throw InputError("--material custom needs --rho");
            m = {units::parse_quantity(rho, ""), units::parse_quantity(mur, "")};
        }
        const Frequency f(freq.empty() ? f0().hertz() : units::parse_quantity(freq, "Hz"));
        const double depth = skin_depth(m, f);
        if (g_.format == "json") {
            emit(json{{"frequency_hz", f.hertz()}, {"skin_depth_m", depth}}.dump(2) + "\n");
        } else {
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.4f um\n", depth * 1e6);
            emit(buf);
        }
        return kExitOk;
    }

    int cmd_serve(const std::string& host, int port, const std::string& persist, double ttl_hours,
                  const std::string& cors) {
        serve::ServiceConfig cfg;
        cfg.ttl = std::chrono::seconds(static_cast<long long>(ttl_hours * 3600.0));
        if (!persist.empty()) cfg.persist_path = persist;
        serve::SessionService svc(cfg);
        httplib::Server server;
        serve::mount(server, svc, cors);
        err_ << "listening on http://" << host << ":" << port << "\n";
        err_.flush();
        if (!server.listen(host, port)) throw ComputeError("cannot listen on " + host + ":" + std::to_string(port));
        return kExitOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    GlobalOptions g_;
    LoadOptions load_;
    NetworkOptions net_;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    return Runner(out, err).run(argc, argv);
}

}  // namespace leafmatch::cli
