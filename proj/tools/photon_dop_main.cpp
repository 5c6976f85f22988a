// photon-dop: batch CLI over the qpol library. Every run is driven by a
// JSON config file and a master seed inside it; identical configs produce
// byte-identical reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qpol/cli.hpp"
#include "qpol/errors.hpp"

namespace {

struct CommandArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qpol::IoError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw qpol::IoError("failed reading config file '" + path + "'");
    return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw qpol::IoError("cannot open output file '" + path + "'");
    out.write(bytes.data(), std::streamsize(bytes.size()));
    out.flush();
    if (!out) throw qpol::IoError("failed writing output file '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-photon polarization toolkit"};
    app.set_version_flag("--version", qpol::kArtifactVersion);
    app.require_subcommand(1);

    const std::map<std::string, std::string> commands = {
        {"dop", "degree of polarization of a configured state"},
        {"game", "Monte Carlo detector-guessing protocol"},
        {"scramble-sweep", "partial-flip angle sweep (analytic vs grid)"},
        {"scramble-ensemble", "per-pulse scrambler ensemble statistics"},
        {"singlet-test", "two-photon singlet projection test"},
        {"oracle-check", "grid-vs-analytic agreement over random states"},
    };
    std::map<std::string, CommandArgs> args;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        CommandArgs& a = args[name];
        sub->add_option("--config", a.config_path, "JSON config file")->required();
        sub->add_option("--out", a.out_path, "report path (default: stdout)");
        sub->add_option("--format", a.format, "json or csv (default json)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // usage problems are config errors
    }

    const std::string name = app.get_subcommands().front()->get_name();
    const CommandArgs& a = args[name];

    try {
        const qpol::EmitFormat fmt = qpol::format_from_string(a.format);
        qpol::RunConfig cfg = qpol::parse_config(read_file(a.config_path));
        if (cfg.command != name) {
            throw qpol::ConfigError("config is for command '" + cfg.command +
                                    "' but '" + name + "' was invoked");
        }
        const qpol::Report report = qpol::run(cfg);
        const std::string bytes = qpol::emit(report, fmt);
        if (a.out_path.empty()) {
            std::fwrite(bytes.data(), 1, bytes.size(), stdout);
            if (std::fflush(stdout) != 0) {
                throw qpol::IoError("failed writing report to stdout");
            }
        } else {
            write_file(a.out_path, bytes);
        }
        std::fprintf(stderr, "wall_time_ms=%.3f\n", report.wall_time_ms);
        return 0;
    } catch (const qpol::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qpol::exit_code_for(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 2;
    }
}
