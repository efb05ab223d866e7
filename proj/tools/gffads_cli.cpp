// gffads-cli: verification suites, single evaluations and parameter scans.
//
//   gffads-cli verify <suite> [--config file.json] [--seed N] [--format json|csv] [--timings]
//   gffads-cli compute <quantity> [--param k=v ...] [k=v ...] [--format json|csv]
//   gffads-cli scan <quantity> --axis param:start:stop:steps[:log] [--param k=v ...]
//   gffads-cli list
//
// Exit codes: 0 pass, 1 tolerance or numerical failure, 2 usage or config error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gffads/errors.hpp"
#include "gffads/suites.hpp"

namespace {

using gffads::ConfigError;

gffads::SuiteConfig loadConfig(const std::string& path) {
    if (path.empty()) return {};
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return gffads::SuiteConfig::fromJson(j);
}

std::map<std::string, std::string> keyValues(const std::vector<std::string>& items) {
    std::map<std::string, std::string> m;
    for (const auto& s : items) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + s + "'");
        if (!m.emplace(s.substr(0, eq), s.substr(eq + 1)).second)
            throw ConfigError("parameter '" + s.substr(0, eq) + "' given twice");
    }
    return m;
}

void checkFormat(const std::string& f) {
    if (f != "json" && f != "csv") throw ConfigError("format must be json or csv");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized free fields, AdS boundary fields and the singular stress tensor"};
    app.require_subcommand(1);

    std::string config_path, format = "json", suite, quantity, axis;
    std::uint64_t seed = 0;
    int threads = 0;
    bool timings = false;
    std::vector<std::string> params, extra;

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "specfun, correlators, fock, holography, locality, set or all")->required();
    auto* seed_opt = verify->add_option("--seed", seed, "seed for the sampled checks");
    verify->add_option("--threads", threads, "concurrent checks");

    auto* comp = app.add_subcommand("compute", "evaluate one quantity");
    comp->add_option("quantity", quantity)->required();
    comp->add_option("--param,-p", params, "k=v");
    comp->add_option("extra", extra, "k=v");

    auto* sc = app.add_subcommand("scan", "evaluate one quantity along an axis");
    sc->add_option("quantity", quantity)->required();
    sc->add_option("--axis", axis, "param:start:stop:steps[:log]")->required();
    sc->add_option("--param,-p", params, "k=v");
    sc->add_option("extra", extra, "k=v");

    auto* list = app.add_subcommand("list", "print suite and quantity names");

    for (auto* s : {verify, comp, sc}) {
        s->add_option("--config", config_path, "JSON run configuration");
        s->add_option("--format", format, "json or csv");
        s->add_flag("--timings", timings, "include runtimes (output is then not reproducible)");
    }
    sc->get_option("--format")->default_str("csv");
    bool scan_format_given = false;

    try {
        app.parse(argc, argv);
        scan_format_given = sc->count("--format") > 0;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            std::cout << "suites:";
            for (const auto& s : gffads::suiteNames()) std::cout << ' ' << s;
            std::cout << " all\nquantities:";
            for (const auto& q : gffads::quantityNames()) std::cout << ' ' << q;
            std::cout << '\n';
            return 0;
        }
        auto cfg = loadConfig(config_path);
        if (*seed_opt) cfg.seed = seed;
        if (threads > 0) cfg.threads = threads;
        if (sc->parsed() && !scan_format_given) format = "csv";
        checkFormat(format);

        if (verify->parsed()) {
            auto names = gffads::suiteNames();
            if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
                throw ConfigError("unknown suite '" + suite + "'");
            cfg.validate();
            auto rep = gffads::runSuite(suite, cfg);
            std::cout << (format == "json" ? gffads::reportJson(rep, timings) : gffads::reportCsv(rep, timings));
            return rep.pass() ? 0 : 1;
        }

        auto kv = keyValues(params);
        for (const auto& [k, v] : keyValues(extra))
            if (!kv.emplace(k, v).second) throw ConfigError("parameter '" + k + "' given twice");

        if (comp->parsed()) {
            auto r = gffads::compute(quantity, kv, cfg);
            std::cout << (format == "json" ? gffads::computeJson(r) : gffads::computeCsv({r}));
            return 0;
        }
        auto ax = gffads::ScanAxis::parse(axis);
        auto rows = gffads::scan(quantity, ax, kv, cfg);
        std::cout << (format == "json" ? gffads::scanJson(rows, ax.param) : gffads::computeCsv(rows, ax.param));
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const gffads::LightConeProximity& e) {
        std::cerr << "rejected input: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << '\n';
        return 1;
    }
}
