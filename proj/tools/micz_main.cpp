// Command-line front end: micz <mode> --config <path> [--out <dir>]
//                              [--stride N] [--quiet]

#include <string>

#include <CLI11.hpp>

#include "micz/errors.hpp"
#include "micz/run_config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Charged-particle dynamics in multi-center dyon backgrounds"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    int stride = 0;
    bool quiet = false;

    const auto add_mode = [&](const char* name, const char* desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", config_path, "run configuration (JSON)")->required();
        sub->add_option("--out", out_dir, "output directory (default: cwd)");
        sub->add_option("--stride", stride, "keep every Nth trajectory sample");
        sub->add_flag("--quiet", quiet, "suppress informational output");
        return sub;
    };
    add_mode("simulate", "integrate a trajectory; emit CSV + conservation report");
    add_mode("validate", "cross-check a trajectory against the separated quadratures");
    add_mode("sweep", "run one simulation per parameter value; emit summary CSV");
    add_mode("green", "tabulate the radial Green function of the configured profile");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    micz::RunMode mode;
    try {
        mode = micz::parse_mode(app.get_subcommands().front()->get_name());
    } catch (const micz::ConfigError&) {
        return 2;
    }
    return micz::run(mode, config_path, out_dir, stride, quiet);
}
