#include "loctest/harness.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string positional_suite;
    std::string suite;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::string out_dir;
    std::string format;
    bool timings = false;
};

loctest::ExperimentConfig resolve(const Options &o) {
    loctest::ExperimentConfig c = o.config_path.empty() ? loctest::ExperimentConfig{} : loctest::load_config(o.config_path);
    if (!o.positional_suite.empty() && !o.suite.empty() && o.positional_suite != o.suite)
        throw loctest::ConfigError("suite given twice with different values");
    if (!o.positional_suite.empty()) c.suite = o.positional_suite;
    if (!o.suite.empty()) c.suite = o.suite;
    if (o.seed) c.seed = *o.seed;
    if (o.shots) c.shots = *o.shots;
    if (!o.out_dir.empty()) c.out_dir = o.out_dir;
    if (!o.format.empty()) c.format = o.format == "csv" ? loctest::ReportFormat::Csv : loctest::ReportFormat::Json;
    if (o.timings) c.timings = true;
    loctest::validate_config(c);
    return c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Run verification suites and emit check reports."};
    Options o;
    app.add_option("suite_name", o.positional_suite, "Suite: schur, localize, locc, hardness, blockenc, amplify, all")
        ->check(CLI::IsMember(loctest::suite_names()));
    app.add_option("--suite", o.suite, "Suite name (alternative to the positional form)")->check(CLI::IsMember(loctest::suite_names()));
    app.add_option("--config", o.config_path, "Config file")->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "Master seed");
    app.add_option("--shots", o.shots, "Shots for sampled checks");
    app.add_option("--out", o.out_dir, "Output directory; report goes to stdout when omitted");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--timings", o.timings, "Record per-check runtime");
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    loctest::ExperimentConfig config;
    try {
        config = resolve(o);
    } catch (const std::exception &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    loctest::Report report;
    try {
        report = loctest::run_suite(config);
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }

    try {
        if (config.out_dir.empty()) {
            std::cout << loctest::render_report(report, config.format);
        } else {
            std::filesystem::create_directories(config.out_dir);
            std::cerr << "wrote " << loctest::emit(report, config.format, config.out_dir) << '\n';
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    std::cerr << report.records.size() << " checks, " << report.failures() << " failed\n";
    return loctest::exit_status(report) == 0 ? kExitPass : kExitFail;
}
