#pragma once

#include "blockenc.hpp"
#include "hardness.hpp"
#include "locc.hpp"
#include "serialize.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <variant>

namespace loctest {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// key = value lines with [section] headers; values are numbers, booleans, "strings" or [lists].
class ConfigValue {
public:
    using Scalar = std::variant<double, bool, std::string>;
    ConfigValue() = default;
    explicit ConfigValue(std::vector<Scalar> items, bool is_list) : items_(std::move(items)), list_(is_list) {}

    bool is_list() const { return list_; }
    const std::vector<Scalar> &items() const { return items_; }

    double number() const { return as<double>(scalar(), "number"); }
    bool boolean() const { return as<bool>(scalar(), "boolean"); }
    std::string string() const { return as<std::string>(scalar(), "string"); }
    std::vector<double> numbers() const {
        std::vector<double> out;
        for (const auto &s : items_) out.push_back(as<double>(s, "number"));
        return out;
    }

private:
    const Scalar &scalar() const {
        if (list_ || items_.size() != 1) throw ConfigError("config: expected a scalar value");
        return items_.front();
    }
    template <class T>
    static const T &as(const Scalar &s, const char *what) {
        if (!std::holds_alternative<T>(s)) throw ConfigError(std::string("config: expected a ") + what);
        return std::get<T>(s);
    }

    std::vector<Scalar> items_;
    bool list_ = false;
};

namespace detail {
inline std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline ConfigValue::Scalar parse_scalar(const std::string &raw, int line) {
    const std::string t = trim(raw);
    if (t.empty()) throw ConfigError("config line " + std::to_string(line) + ": empty value");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') throw ConfigError("config line " + std::to_string(line) + ": unterminated string");
        return t.substr(1, t.size() - 2);
    }
    if (t == "true") return true;
    if (t == "false") return false;
    // a/b fractions are accepted for exact thresholds like 2/3
    const auto slash = t.find('/');
    try {
        std::size_t used = 0;
        if (slash != std::string::npos) {
            const double a = std::stod(t.substr(0, slash), &used);
            const double b = std::stod(t.substr(slash + 1));
            return a / b;
        }
        const double v = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception &) {
        throw ConfigError("config line " + std::to_string(line) + ": cannot parse value '" + t + "'");
    }
}
} // namespace detail

inline std::map<std::string, ConfigValue> parse_config_text(const std::string &text) {
    std::map<std::string, ConfigValue> out;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": bad section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (!val.empty() && val.front() == '[') {
            if (val.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": unterminated list");
            std::vector<ConfigValue::Scalar> items;
            std::string body = detail::trim(val.substr(1, val.size() - 2));
            std::istringstream parts(body);
            std::string part;
            while (!body.empty() && std::getline(parts, part, ',')) items.push_back(detail::parse_scalar(part, lineno));
            out[key] = ConfigValue(std::move(items), true);
        } else {
            out[key] = ConfigValue({detail::parse_scalar(val, lineno)}, false);
        }
    }
    return out;
}

enum class ReportFormat { Json, Csv };

struct ExperimentConfig {
    std::string suite = "all";
    std::uint64_t seed = 7;
    std::uint64_t shots = 20000;
    std::string out_dir;
    ReportFormat format = ReportFormat::Json;
    bool timings = false;
    std::size_t testers = 3; // random testers per grid point
    std::size_t states = 3;  // random states per tester

    std::optional<std::vector<std::size_t>> copies;
    std::optional<std::vector<std::size_t>> dims;
    std::optional<std::vector<std::size_t>> ranks;
    std::optional<std::vector<double>> thetas;
    std::optional<std::vector<std::size_t>> qubits;
    std::optional<std::vector<double>> completeness;
    std::optional<std::vector<double>> soundness;
};

inline const std::vector<std::string> &suite_names() {
    static const std::vector<std::string> names{"schur", "localize", "locc", "hardness", "blockenc", "amplify", "all"};
    return names;
}

inline void validate_config(const ExperimentConfig &c) {
    const auto &names = suite_names();
    if (std::find(names.begin(), names.end(), c.suite) == names.end()) throw ConfigError("config: unknown suite '" + c.suite + "'");
    auto positive = [](const std::optional<std::vector<std::size_t>> &v, const char *what, std::size_t lo) {
        if (!v) return;
        for (auto x : *v)
            if (x < lo) throw ConfigError(std::string("config: ") + what + " value below " + std::to_string(lo));
    };
    positive(c.copies, "grid.N", 1);
    positive(c.dims, "grid.d", 1);
    positive(c.ranks, "grid.r", 2);
    positive(c.qubits, "grid.qubits", 1);
    if (c.thetas)
        for (double t : *c.thetas)
            if (!(t > 0.0 && t <= 1.0)) throw ConfigError("config: grid.theta must lie in (0, 1]");
    const auto nc = c.completeness ? c.completeness->size() : 0;
    const auto ns = c.soundness ? c.soundness->size() : 0;
    if (nc != ns) throw ConfigError("config: grid.c and grid.s must have equal length");
    for (std::size_t i = 0; i < nc; ++i)
        if (!(0.0 < (*c.soundness)[i] && (*c.soundness)[i] < (*c.completeness)[i] && (*c.completeness)[i] <= 1.0))
            throw ConfigError("config: need 0 < s < c <= 1");
}

inline ExperimentConfig config_from_map(const std::map<std::string, ConfigValue> &m) {
    static const std::vector<std::string> known{"suite", "seed", "shots", "out", "format", "timings", "testers", "states",
                                                "grid.N", "grid.d", "grid.r", "grid.theta", "grid.qubits", "grid.c", "grid.s"};
    for (const auto &[k, v] : m)
        if (std::find(known.begin(), known.end(), k) == known.end()) throw ConfigError("config: unknown key '" + k + "'");
    ExperimentConfig c;
    auto count = [](double x, const std::string &key) {
        if (x < 0 || x != std::floor(x)) throw ConfigError("config: " + key + " must be a nonnegative integer");
        return static_cast<std::size_t>(x);
    };
    auto counts = [&](const std::string &key) {
        std::vector<std::size_t> out;
        for (double x : m.at(key).numbers()) out.push_back(count(x, key));
        return out;
    };
    if (m.count("suite")) c.suite = m.at("suite").string();
    if (m.count("seed")) c.seed = count(m.at("seed").number(), "seed");
    if (m.count("shots")) c.shots = count(m.at("shots").number(), "shots");
    if (m.count("out")) c.out_dir = m.at("out").string();
    if (m.count("format")) {
        const auto f = m.at("format").string();
        if (f != "json" && f != "csv") throw ConfigError("config: format must be json or csv");
        c.format = f == "json" ? ReportFormat::Json : ReportFormat::Csv;
    }
    if (m.count("timings")) c.timings = m.at("timings").boolean();
    if (m.count("testers")) c.testers = count(m.at("testers").number(), "testers");
    if (m.count("states")) c.states = count(m.at("states").number(), "states");
    if (m.count("grid.N")) c.copies = counts("grid.N");
    if (m.count("grid.d")) c.dims = counts("grid.d");
    if (m.count("grid.r")) c.ranks = counts("grid.r");
    if (m.count("grid.theta")) c.thetas = m.at("grid.theta").numbers();
    if (m.count("grid.qubits")) c.qubits = counts("grid.qubits");
    if (m.count("grid.c")) c.completeness = m.at("grid.c").numbers();
    if (m.count("grid.s")) c.soundness = m.at("grid.s").numbers();
    validate_config(c);
    return c;
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_map(parse_config_text(ss.str()));
}

enum class CheckKind { Equal, AtMost };

struct CheckRecord {
    std::string name;
    std::string anchor;
    CheckKind kind = CheckKind::Equal;
    double lhs = 0.0, rhs = 0.0, tolerance = 0.0;
    bool pass = false;
    double runtime = 0.0;
};

struct Report {
    std::string suite;
    std::uint64_t seed = 0;
    bool timings = false;
    std::vector<CheckRecord> records;
    std::vector<std::pair<std::string, std::string>> artifacts; // file name, contents

    bool all_pass() const {
        return std::all_of(records.begin(), records.end(), [](const CheckRecord &r) { return r.pass; });
    }
    std::size_t failures() const {
        return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const CheckRecord &r) { return !r.pass; }));
    }
};

inline CheckRecord make_check(std::string name, std::string anchor, CheckKind kind, double lhs, double rhs, double tol) {
    CheckRecord r{std::move(name), std::move(anchor), kind, lhs, rhs, tol, false, 0.0};
    r.pass = kind == CheckKind::Equal ? std::abs(lhs - rhs) <= tol : lhs <= rhs + tol;
    if (!std::isfinite(lhs) || !std::isfinite(rhs)) r.pass = false;
    return r;
}

namespace suites {

inline std::string point_tag(std::size_t n, std::size_t d) { return "N=" + std::to_string(n) + " d=" + std::to_string(d); }

inline std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

class Recorder {
public:
    Recorder(Report &rep, bool timings) : rep_(rep), timings_(timings) {}
    template <class F>
    void check(std::string name, std::string anchor, CheckKind kind, double tol, F &&compute) {
        const auto t0 = std::chrono::steady_clock::now();
        auto [lhs, rhs] = compute();
        auto rec = make_check(std::move(name), std::move(anchor), kind, lhs, rhs, tol);
        if (timings_) rec.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep_.records.push_back(std::move(rec));
    }

private:
    Report &rep_;
    bool timings_;
};

// Grid-point generators are stream_rng(seed, tag, item) with tag = 1000 N + d.
inline Rng point_rng(std::uint64_t seed, std::size_t n, std::size_t d, std::size_t item) {
    return stream_rng(seed, 1000 * n + d, item);
}

inline void schur(const ExperimentConfig &c, Report &rep) {
    Recorder rec(rep, c.timings);
    for (auto n : c.copies.value_or(std::vector<std::size_t>{2, 3, 4}))
        for (auto d : c.dims.value_or(std::vector<std::size_t>{2, 3})) {
            if (ipow(d, n) > kMaxDenseDim) throw std::invalid_argument("schur suite: d^N exceeds 4096");
            auto basis = build_schur_basis(n, d);
            const auto tag = point_tag(n, d);
            rec.check("schur.unitarity " + tag, "Schur basis is unitary", CheckKind::Equal, 1e-10, [&] {
                return std::pair{max_abs(basis->matrix().adjoint() * basis->matrix() - Matrix::Identity(basis->dim(), basis->dim())), 0.0};
            });
            rec.check("schur.permutation_blocks " + tag, "S^dag P(s_k) S = P_lambda(s_k) (x) I", CheckKind::Equal, 1e-9,
                      [&] { return std::pair{basis->transposition_residual(), 0.0}; });
            Rng rng = point_rng(c.seed, n, d, 0);
            for (int i = 0; i < 5; ++i) {
                Matrix u = haar_unitary(static_cast<Index>(d), rng);
                rec.check("schur.unitary_blocks " + tag + " U=" + std::to_string(i), "S^dag U^N S = I (x) Q_lambda(U)", CheckKind::Equal,
                          1e-9, [&] { return std::pair{basis->unitary_residual(u), 0.0}; });
            }
            rec.check("schur.dimension_count " + tag, "sum dimV dimW = d^N", CheckKind::Equal, 0.0, [&] {
                double s = 0.0;
                for (const auto &b : basis->blocks()) s += static_cast<double>(b.dim_v * b.dim_w);
                return std::pair{s, static_cast<double>(ipow(d, n))};
            });
        }
}

inline void localize_suite(const ExperimentConfig &c, Report &rep) {
    Recorder rec(rep, c.timings);
    for (auto n : c.copies.value_or(std::vector<std::size_t>{2, 3}))
        for (auto d : c.dims.value_or(std::vector<std::size_t>{2})) {
            if (ipow(d, 2 * n) > kMaxDenseDim) throw std::invalid_argument("localize suite: d^(2N) exceeds 4096");
            const auto dim = static_cast<Index>(ipow(d, 2 * n));
            for (std::size_t i = 0; i < c.testers; ++i) {
                Rng rng = point_rng(c.seed, n, d, i);
                Tester t(random_povm_element(dim, rng), n, d);
                LocalTester th = localize(t);
                Tester tt = twirl_tester(t);
                const auto tag = point_tag(n, d) + " T=" + std::to_string(i);
                rec.check("localize.acceptance_gap " + tag, "local tester matches twirled tester on pure powers", CheckKind::Equal, 1e-9, [&] {
                    double worst = 0.0;
                    for (std::size_t j = 0; j < c.states; ++j) {
                        Vector psi = haar_state(static_cast<Index>(d * d), rng);
                        Matrix rho = psi * psi.adjoint();
                        worst = std::max(worst, std::abs(acceptance(th, rho).raw - acceptance(tt, rho).raw));
                    }
                    return std::pair{worst, 0.0};
                });
                rec.check("localize.povm_range " + tag, "0 <= local tester <= I", CheckKind::AtMost, 1e-9, [&] {
                    auto [lo, hi] = validate_povm_element(th.a_side());
                    return std::pair{std::max(-lo, hi - 1.0), 0.0};
                });
            }
        }
}

inline void locc_suite(const ExperimentConfig &c, Report &rep) {
    Recorder rec(rep, c.timings);
    for (auto n : c.copies.value_or(std::vector<std::size_t>{2, 3}))
        for (auto d : c.dims.value_or(std::vector<std::size_t>{2})) {
            if (ipow(d, 2 * n) > kMaxDenseDim) throw std::invalid_argument("locc suite: d^(2N) exceeds 4096");
            const auto dim = static_cast<Index>(ipow(d, 2 * n));
            for (std::size_t i = 0; i < c.testers; ++i) {
                Rng rng = point_rng(c.seed, n, d, i);
                Tester t(random_povm_element(dim, rng), n, d);
                Tester tl = locc_tester(t);
                Tester tb = embed_purity(t);
                Matrix rho = random_density(static_cast<Index>(d * d), rng);
                const auto tag = point_tag(n, d) + " T=" + std::to_string(i);
                rec.check("locc.dominance " + tag, "LOCC tester dominates purity-embedded tester", CheckKind::AtMost, 1e-10, [&] {
                    return std::pair{-hermitian_eigenvalues(tl.matrix() - tb.matrix()).minCoeff(), 0.0};
                });
                rec.check("locc.slack " + tag, "mixed-state slack at most 1/N", CheckKind::AtMost, 1e-9, [&] {
                    return std::pair{acceptance(tl, rho).raw - acceptance(tb, rho).raw, 1.0 / static_cast<double>(n)};
                });
                LoccSimulation sim;
                rec.check("locc.simulation " + tag, "shot simulation within 4 sigma of exact acceptance", CheckKind::AtMost, 0.0, [&] {
                    sim = simulate_one_way_locc(t, rho, c.shots, stream_seed(c.seed, 1000 * n + d, i));
                    const double p = acceptance(tl, rho).value;
                    const double ns = static_cast<double>(std::max<std::uint64_t>(c.shots, 1));
                    const double sigma = std::max(std::sqrt(p * (1.0 - p) / ns), 1.0 / ns);
                    return std::pair{std::abs(sim.acceptance - p), 4.0 * sigma};
                });
                if (i == 0) rep.artifacts.emplace_back("locc_transcript_" + std::to_string(n) + "_" + std::to_string(d) + ".jsonl", sim.transcript.to_jsonl());
            }
        }
}

inline void hardness_suite(const ExperimentConfig &c, Report &rep) {
    Recorder rec(rep, c.timings);
    std::ostringstream csv;
    csv << "bound,N,r,d,theta,lhs,rhs,margin\n";
    for (auto n : c.copies.value_or(std::vector<std::size_t>{1, 2, 3}))
        for (auto r : c.ranks.value_or(std::vector<std::size_t>{2}))
            for (auto d : c.dims.value_or(std::vector<std::size_t>{4}))
                for (double theta : c.thetas.value_or(std::vector<double>{0.05, 0.2})) {
                    if (ipow(d, 2 * n) > kMaxDenseDim) throw std::invalid_argument("hardness suite: d^(2N) exceeds 4096");
                    auto inst = hard_instance_theta(r, d, theta);
                    auto pair = twirled_pair(inst, n);
                    auto report = verify_distance_bounds(pair, inst);
                    const auto tag = "N=" + std::to_string(n) + " r=" + std::to_string(r) + " d=" + std::to_string(d) + " theta=" + fmt(theta);
                    rec.check("hardness.pair_bound " + tag, "d_tr(rho0, sigma0) <= 4 sqrt2 N theta / r min(N theta, 1)", CheckKind::AtMost, 0.0,
                              [&] { return std::pair{report.lemma.lhs, report.lemma.rhs}; });
                    rec.check("hardness.tau_bound " + tag, "tau-average distance <= sqrt2 (N/(r-1) + N/(d-1))", CheckKind::AtMost, 0.0,
                              [&] { return std::pair{report.tau.lhs, report.tau.rhs}; });
                    rec.check("hardness.reduced_equality " + tag, "d_tr(rho0, sigma0) = d_tr(tr_B rho0, tr_B sigma0)", CheckKind::Equal, 1e-9,
                              [&] { return std::pair{report.full_distance, report.reduced_distance}; });
                    for (const auto *b : {&report.lemma, &report.tau})
                        csv << b->name << ',' << n << ',' << r << ',' << d << ',' << fmt(theta) << ',' << fmt(b->lhs) << ',' << fmt(b->rhs) << ','
                            << fmt(b->margin()) << '\n';
                }
    rep.artifacts.emplace_back("hardness_margins.csv", csv.str());
}

inline void blockenc_suite(const ExperimentConfig &c, Report &rep) {
    Recorder rec(rep, c.timings);
    for (auto q : c.qubits.value_or(std::vector<std::size_t>{1, 2})) {
        if (q > 6) throw std::invalid_argument("blockenc suite: at most 6 qubits");
        for (std::size_t i = 0; i < c.states; ++i) {
            Rng rng = stream_rng(c.seed, 5000 + q, i);
            Vector psi = haar_state(static_cast<Index>(ipow(2, q)), rng);
            Matrix proj = psi * psi.adjoint();
            const auto tag = "qubits=" + std::to_string(q) + " state=" + std::to_string(i);
            BlockEncoding be = reflection_to_projector(reflection_about(psi));
            rec.check("blockenc.projector " + tag, "(2,2,0)-encoding of |psi><psi| from its reflection", CheckKind::Equal, 1e-10,
                      [&] { return std::pair{verify_block_encoding(be, proj), 0.0}; });
            rec.check("blockenc.pre_amplification " + tag, "(5,3,0)-encoding of I - 2|psi><psi|", CheckKind::Equal, 1e-10, [&] {
                BlockEncoding r5 = projector_to_reflection_pre_aa(be);
                return std::pair{verify_block_encoding(r5, reflection_about(psi)), 0.0};
            });
        }
    }
}

inline void amplify_suite(const ExperimentConfig &c, Report &rep) {
    Recorder rec(rep, c.timings);
    const auto cs = c.completeness.value_or(std::vector<double>{2.0 / 3.0});
    const auto ss = c.soundness.value_or(std::vector<double>{1.0 / 3.0});
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto cfg = amplification_schedule(cs[k], ss[k]);
        const auto tag = "c=" + fmt(cfg.c) + " s=" + fmt(cfg.s) + " n=" + std::to_string(cfg.n);
        const double mid = 0.5 * (cfg.c + cfg.s);
        const double no_err = amplified_error_exact(mid, cfg.n, cfg.t, Tail::AtLeast);
        const double yes_fail = amplified_error_exact(cfg.c, cfg.n, cfg.t, Tail::Below);
        const double hb = hoeffding_bound(cfg.n, cfg.delta());
        rec.check("amplify.no_instance " + tag, "Pr[mean >= t | p=(s+c)/2] <= s", CheckKind::AtMost, 0.0, [&] { return std::pair{no_err, cfg.s}; });
        rec.check("amplify.no_instance_hoeffding " + tag, "Pr[mean >= t | p=(s+c)/2] <= exp(-2 n delta^2)", CheckKind::AtMost, 0.0,
                  [&] { return std::pair{no_err, hb}; });
        rec.check("amplify.yes_instance " + tag, "Pr[mean < t | p=c] <= 1 - c", CheckKind::AtMost, 1e-15, [&] { return std::pair{yes_fail, 1.0 - cfg.c}; });
        rec.check("amplify.yes_instance_hoeffding " + tag, "Pr[mean < t | p=c] <= exp(-2 n delta^2)", CheckKind::AtMost, 0.0,
                  [&] { return std::pair{yes_fail, hb}; });
    }
    // Hoeffding dominance on a fixed grid of (p, n, t).
    const std::vector<std::uint64_t> ns{50, 200, 1000, 6926};
    const std::vector<std::pair<double, double>> pts{{0.5, 7.0 / 12.0}, {0.3, 0.4}, {0.7, 0.6}, {0.9, 0.8}, {0.1, 0.25}};
    for (auto n : ns)
        for (auto [p, t] : pts) {
            const Tail tail = p < t ? Tail::AtLeast : Tail::Below;
            rec.check("amplify.hoeffding_grid n=" + std::to_string(n) + " p=" + fmt(p) + " t=" + fmt(t), "exact tail <= exp(-2 n (t-p)^2)",
                      CheckKind::AtMost, 0.0, [&] { return std::pair{amplified_error_exact(p, n, t, tail), hoeffding_bound(n, t - p)}; });
        }
}

} // namespace suites

inline Report run_suite(const ExperimentConfig &config) {
    validate_config(config);
    Report rep;
    rep.suite = config.suite;
    rep.seed = config.seed;
    rep.timings = config.timings;
    const std::map<std::string, std::function<void(const ExperimentConfig &, Report &)>> table{
        {"schur", suites::schur},       {"localize", suites::localize_suite}, {"locc", suites::locc_suite},
        {"hardness", suites::hardness_suite}, {"blockenc", suites::blockenc_suite}, {"amplify", suites::amplify_suite}};
    if (config.suite == "all") {
        for (const auto &name : suite_names())
            if (name != "all") table.at(name)(config, rep);
    } else {
        table.at(config.suite)(config, rep);
    }
    return rep;
}

inline int exit_status(const Report &rep) { return rep.all_pass() ? 0 : 1; }

inline const char *kind_name(CheckKind k) { return k == CheckKind::Equal ? "eq" : "le"; }

inline json report_to_json(const Report &rep) {
    json recs = json::array();
    for (const auto &r : rep.records) {
        json j{{"name", r.name}, {"anchor", r.anchor}, {"kind", kind_name(r.kind)}, {"lhs", r.lhs},
               {"rhs", r.rhs},   {"tolerance", r.tolerance}, {"pass", r.pass}};
        if (rep.timings) j["runtime_s"] = r.runtime;
        recs.push_back(std::move(j));
    }
    return json{{"suite", rep.suite}, {"seed", rep.seed}, {"pass", rep.all_pass()}, {"records", recs}};
}

inline std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline std::string report_to_csv(const Report &rep) {
    std::ostringstream os;
    os << "name,anchor,kind,lhs,rhs,tolerance,pass" << (rep.timings ? ",runtime_s" : "") << '\n';
    for (const auto &r : rep.records) {
        os << csv_escape(r.name) << ',' << csv_escape(r.anchor) << ',' << kind_name(r.kind) << ',' << suites::fmt(r.lhs) << ','
           << suites::fmt(r.rhs) << ',' << suites::fmt(r.tolerance) << ',' << (r.pass ? "true" : "false");
        if (rep.timings) os << ',' << suites::fmt(r.runtime);
        os << '\n';
    }
    return os.str();
}

inline std::string render_report(const Report &rep, ReportFormat format) {
    return format == ReportFormat::Json ? report_to_json(rep).dump(2) + "\n" : report_to_csv(rep);
}

// Writes <dir>/<suite>.<ext> plus any artifacts; returns the report path.
inline std::string emit(const Report &rep, ReportFormat format, const std::string &dir) {
    auto write = [](const std::string &path, const std::string &text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("emit: cannot write '" + path + "'");
        out << text;
        if (!out) throw std::runtime_error("emit: write failed for '" + path + "'");
    };
    const std::string base = dir.empty() ? std::string(".") : dir;
    const std::string path = base + "/" + rep.suite + (format == ReportFormat::Json ? ".json" : ".csv");
    write(path, render_report(rep, format));
    for (const auto &[name, text] : rep.artifacts) write(base + "/" + name, text);
    return path;
}

} // namespace loctest
