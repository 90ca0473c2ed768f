#include "loctest/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace loctest;

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig golden_config(const std::string &name) { return load_config(std::string(LOCTEST_SOURCE_DIR) + "/configs/" + name); }

} // namespace

TEST(ConfigParser, ScalarsListsAndSections) {
    auto m = parse_config_text("# comment\nsuite = \"locc\"\nseed = 11   # trailing\ntimings = true\n[grid]\nN = [2, 3]\nc = [2/3]\ns = [1/3]\n");
    auto c = config_from_map(m);
    EXPECT_EQ(c.suite, "locc");
    EXPECT_EQ(c.seed, 11u);
    EXPECT_TRUE(c.timings);
    EXPECT_EQ(*c.copies, (std::vector<std::size_t>{2, 3}));
    EXPECT_DOUBLE_EQ((*c.completeness)[0], 2.0 / 3.0);
    EXPECT_FALSE(c.dims.has_value());
}

TEST(ConfigParser, Errors) {
    EXPECT_THROW(config_from_map(parse_config_text("bogus = 1\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("suite = \"nope\"\n")), ConfigError);
    EXPECT_THROW(parse_config_text("seed = \n"), ConfigError);
    EXPECT_THROW(parse_config_text("[grid]\nN = [1, 2\n"), ConfigError);
    EXPECT_THROW(parse_config_text("suite = \"x\n"), ConfigError);
    EXPECT_THROW(parse_config_text("just text\n"), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("seed = -1\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("seed = 1.5\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("format = \"xml\"\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("[grid]\nc = [0.6]\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("[grid]\nc = [0.3]\ns = [0.5]\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("[grid]\ntheta = [1.5]\n")), ConfigError);
    EXPECT_THROW(config_from_map(parse_config_text("[grid]\nr = [1]\n")), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/file.toml"), ConfigError);
}

TEST(RunSuite, GuardViolationsSurface) {
    ExperimentConfig c;
    c.suite = "localize";
    c.copies = std::vector<std::size_t>{4};
    c.dims = std::vector<std::size_t>{3};
    EXPECT_THROW(run_suite(c), std::invalid_argument);
    c.suite = "hardness";
    c.copies = std::vector<std::size_t>{2};
    c.dims = std::vector<std::size_t>{3};
    c.ranks = std::vector<std::size_t>{2};
    EXPECT_THROW(run_suite(c), std::invalid_argument);
}

TEST(RunSuite, LocalizeMatchesDirectLibraryCalls) {
    ExperimentConfig c;
    c.suite = "localize";
    c.seed = 7;
    c.copies = std::vector<std::size_t>{2};
    c.dims = std::vector<std::size_t>{2};
    Report rep = run_suite(c);
    ASSERT_EQ(rep.records.size(), 2 * c.testers);
    for (std::size_t i = 0; i < c.testers; ++i) {
        Rng rng = stream_rng(7, 1000 * 2 + 2, i);
        Tester t(random_povm_element(16, rng), 2, 2);
        LocalTester th = localize(t);
        Tester tt = twirl_tester(t);
        double worst = 0.0;
        for (std::size_t j = 0; j < c.states; ++j) {
            Vector psi = haar_state(4, rng);
            Matrix rho = psi * psi.adjoint();
            worst = std::max(worst, std::abs(acceptance(th, rho).raw - acceptance(tt, rho).raw));
        }
        const auto &gap = rep.records[2 * i];
        EXPECT_EQ(gap.name, "localize.acceptance_gap N=2 d=2 T=" + std::to_string(i));
        EXPECT_EQ(gap.lhs, worst);
        EXPECT_TRUE(gap.pass);
        auto [lo, hi] = validate_povm_element(th.a_side());
        EXPECT_EQ(rep.records[2 * i + 1].lhs, std::max(-lo, hi - 1.0));
    }
}

TEST(RunSuite, EmptyGridGivesEmptyReport) {
    Report rep = run_suite(golden_config("empty.toml"));
    EXPECT_TRUE(rep.records.empty());
    EXPECT_TRUE(rep.all_pass());
    EXPECT_EQ(report_to_csv(rep), "name,anchor,kind,lhs,rhs,tolerance,pass\n");
}

TEST(RunSuite, HardnessDefaultGridHasNonnegativeMargins) {
    ExperimentConfig c;
    c.suite = "hardness";
    Report rep = run_suite(c);
    EXPECT_EQ(rep.records.size(), 18u);
    for (const auto &r : rep.records) {
        EXPECT_TRUE(r.pass) << r.name;
        if (r.kind == CheckKind::AtMost) EXPECT_GE(r.rhs - r.lhs, 0.0) << r.name;
    }
    ASSERT_EQ(rep.artifacts.size(), 1u);
    EXPECT_EQ(rep.artifacts[0].first, "hardness_margins.csv");
    EXPECT_EQ(rep.artifacts[0].second.substr(0, 32), "bound,N,r,d,theta,lhs,rhs,margin");
}

TEST(RunSuite, AllSuitesPassAtSmallScale) {
    ExperimentConfig c;
    c.suite = "all";
    c.testers = 1;
    c.states = 2;
    c.shots = 4000;
    Report rep = run_suite(c);
    EXPECT_GT(rep.records.size(), 50u);
    for (const auto &r : rep.records) EXPECT_TRUE(r.pass) << r.name << " lhs=" << r.lhs << " rhs=" << r.rhs;
}

TEST(CheckRecord, PassRule) {
    EXPECT_TRUE(make_check("a", "", CheckKind::Equal, 1.0, 1.0 + 1e-10, 1e-9).pass);
    EXPECT_FALSE(make_check("a", "", CheckKind::Equal, 1.0, 1.1, 1e-9).pass);
    EXPECT_TRUE(make_check("a", "", CheckKind::AtMost, 0.5, 0.4, 0.2).pass);
    EXPECT_FALSE(make_check("a", "", CheckKind::AtMost, 0.5, 0.4, 0.0).pass);
    EXPECT_FALSE(make_check("a", "", CheckKind::AtMost, std::nan(""), 1.0, 0.0).pass);
}

TEST(CheckRecord, ExitStatusFollowsFailures) {
    Report rep;
    EXPECT_EQ(exit_status(rep), 0);
    rep.records.push_back(make_check("ok", "", CheckKind::Equal, 0.0, 0.0, 0.0));
    EXPECT_EQ(exit_status(rep), 0);
    rep.records.push_back(make_check("bad", "", CheckKind::Equal, 1.0, 0.0, 0.0));
    EXPECT_EQ(exit_status(rep), 1);
    EXPECT_EQ(rep.failures(), 1u);
}

TEST(Emit, JsonRoundTripAndStableBytes) {
    ExperimentConfig c = golden_config("amplify.toml");
    Report a = run_suite(c), b = run_suite(c);
    const std::string ja = render_report(a, ReportFormat::Json);
    EXPECT_EQ(ja, render_report(b, ReportFormat::Json));
    EXPECT_EQ(render_report(a, ReportFormat::Csv), render_report(b, ReportFormat::Csv));
    auto parsed = json::parse(ja);
    EXPECT_EQ(parsed, report_to_json(a));
    EXPECT_EQ(parsed.dump(2) + "\n", ja);
    ASSERT_EQ(parsed.at("records").size(), a.records.size());
    EXPECT_EQ(parsed["records"][0].at("lhs").get<double>(), a.records[0].lhs);
    EXPECT_FALSE(parsed["records"][0].contains("runtime_s"));
}

TEST(Emit, TimingsColumnOnlyWhenRequested) {
    ExperimentConfig c;
    c.suite = "blockenc";
    c.states = 1;
    c.timings = true;
    Report rep = run_suite(c);
    EXPECT_TRUE(report_to_json(rep)["records"][0].contains("runtime_s"));
    EXPECT_EQ(report_to_csv(rep).substr(0, 50), "name,anchor,kind,lhs,rhs,tolerance,pass,runtime_s\n");
}

TEST(Emit, WritesReportAndArtifacts) {
    const auto dir = std::filesystem::temp_directory_path() / "loctest_emit_test";
    std::filesystem::create_directories(dir);
    Report rep = run_suite(golden_config("hardness.toml"));
    const auto path = emit(rep, ReportFormat::Csv, dir.string());
    EXPECT_EQ(read_file(path), report_to_csv(rep));
    EXPECT_EQ(read_file((dir / "hardness_margins.csv").string()), rep.artifacts[0].second);
    EXPECT_THROW(emit(rep, ReportFormat::Csv, "/nonexistent/dir"), std::runtime_error);
}

TEST(Golden, HardnessReport) {
    Report rep = run_suite(golden_config("hardness.toml"));
    EXPECT_EQ(render_report(rep, ReportFormat::Json), read_file(std::string(LOCTEST_SOURCE_DIR) + "/tests/golden/hardness_seed7.json"));
    EXPECT_EQ(rep.artifacts[0].second, read_file(std::string(LOCTEST_SOURCE_DIR) + "/tests/golden/hardness_margins_seed7.csv"));
}

TEST(Golden, AmplifyReport) {
    Report rep = run_suite(golden_config("amplify.toml"));
    EXPECT_EQ(render_report(rep, ReportFormat::Csv), read_file(std::string(LOCTEST_SOURCE_DIR) + "/tests/golden/amplify.csv"));
}

TEST(Serialize, RoundTrips) {
    Rng rng = stream_rng(111);
    Operator op(random_hermitian(16, rng), SystemLayout::bipartite_copies(2, 2));
    auto op2 = operator_from_json(json::parse(operator_to_json(op).dump()));
    EXPECT_EQ(op2.matrix(), op.matrix());
    EXPECT_EQ(op2.layout().dims(), op.layout().dims());
    EXPECT_EQ(op2.layout()[1].party, Party::B);

    StateVector s(haar_state(6, rng), SystemLayout({{2, Party::A}, {3, Party::B}}));
    auto s2 = state_from_json(json::parse(state_to_json(s).dump()));
    EXPECT_EQ(s2.amplitudes(), s.amplitudes());

    Tester t(random_povm_element(16, rng), 2, 2);
    auto t2 = tester_from_json(tester_to_json(t));
    EXPECT_EQ(t2.matrix(), t.matrix());
    EXPECT_EQ(t2.copies(), 2u);

    auto sj = schur_basis_to_json(*build_schur_basis(3, 2));
    EXPECT_EQ(sj["blocks"].size(), 2u);
    EXPECT_EQ(operator_from_json(sj["isometry"]).matrix(), build_schur_basis(3, 2)->matrix());

    json bad = operator_to_json(op);
    bad["data"].erase(0);
    EXPECT_THROW(operator_from_json(bad), std::invalid_argument);
}
