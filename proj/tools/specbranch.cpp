#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "specbranch/config.hpp"
#include "specbranch/errors.hpp"
#include "specbranch/run.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Track differentiable eigenvalue branches of Hermitian families"};
    std::string config_path;
    std::string out_dir;
    bool verbose = false;
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config's output)");
    app.add_flag("--verbose", verbose, "progress on stderr");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw specbranch::ConfigError("cannot read config file " + config_path);
        std::stringstream text;
        text << in.rdbuf();
        const specbranch::RunConfig config = specbranch::parse_config(text.str());
        const std::string dir = out_dir.empty() ? config.output : out_dir;
        const std::string report = specbranch::run(config, dir, verbose ? &std::cerr : nullptr);
        if (verbose) std::cerr << report;
        return 0;
    } catch (const specbranch::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
