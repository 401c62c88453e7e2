// Study driver: single runs and convergence, penalty and stability studies.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "viscodg/study.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_solver = 3;

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw viscodg::ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DG solver for dynamic viscoelasticity with Prony-series memory"};
    std::string config_path;
    std::string study, scheme, k, n, dt, T, alpha0, beta0, solver, out;
    bool quiet = false;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--study", study, "single | hconv | tconv | penalty | stability");
    app.add_option("--scheme", scheme, "displacement | velocity | both");
    app.add_option("--k", k, "polynomial degree(s), comma separated");
    app.add_option("--n", n, "mesh subdivision(s), comma separated");
    app.add_option("--dt", dt, "time step(s) such as 1/2048, or h");
    app.add_option("--T", T, "final time");
    app.add_option("--alpha0", alpha0, "penalty coefficient");
    app.add_option("--beta0", beta0, "penalty exponent");
    app.add_option("--solver", solver, "cholesky | lu | cg");
    app.add_option("--out", out, "CSV output path");
    app.add_flag("--quiet", quiet, "suppress progress lines");
    CLI11_PARSE(app, argc, argv);

    viscodg::StudyConfig config;
    try {
        std::string text = config_path.empty() ? std::string() : read_file(config_path);
        // Command-line values override the file, so they are appended as later lines.
        const std::pair<const char*, const std::string*> overrides[] = {
            {"study", &study}, {"scheme", &scheme}, {"k", &k},           {"n", &n},           {"dt", &dt},
            {"T", &T},         {"alpha0", &alpha0}, {"beta0", &beta0},   {"solver", &solver}, {"output", &out}};
        text += "\n";
        for (const auto& [key, value] : overrides) {
            if (!value->empty()) {
                text += std::string(key) + " = " + *value + "\n";
            }
        }
        config = viscodg::parse_config(text);
    } catch (const viscodg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    }

    viscodg::StudyResult result;
    try {
        result = viscodg::run_study(config, quiet ? nullptr : &std::cerr);
    } catch (const viscodg::SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return exit_solver;
    }

    if (config.output.empty()) {
        viscodg::write_rate_table(std::cerr, result);
        viscodg::write_csv(std::cout, result);
    } else {
        std::ofstream csv(config.output);
        if (!csv) {
            std::cerr << "cannot write '" << config.output << "'\n";
            return exit_config;
        }
        viscodg::write_csv(csv, result);
        viscodg::write_rate_table(std::cout, result);
    }
    return 0;
}
