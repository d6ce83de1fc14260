// Command-line front end: builds scenarios from a config file, certifies
// admissibility, estimates optimal constants, verifies both inequalities,
// and runs the built-in acceptance suite. Reports are deterministic for a
// fixed (config, seed); timing goes to stderr only.

#include "pineq/constants.hpp"
#include "pineq/functionals.hpp"
#include "pineq/report.hpp"
#include "pineq/scenarios.hpp"
#include "pineq/selftest.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInvalid = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- strict sectioned key-value config ---

using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

ConfigMap parse_config(std::istream& in) {
    ConfigMap cfg;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of(";#");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            cfg[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty())
            throw ConfigError("line " + std::to_string(line_no) + ": key outside a section");
        if (!cfg[section].emplace(key, value).second)
            throw ConfigError("duplicate key '" + key + "' in section [" + section + "]");
    }
    return cfg;
}

/// Typed view over one section with unknown-key rejection.
class Section {
public:
    Section(const ConfigMap& cfg, const std::string& name) : name_(name) {
        const auto it = cfg.find(name);
        if (it != cfg.end()) entries_ = &it->second;
    }

    std::string str(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        if (!entries_) return fallback;
        const auto it = entries_->find(key);
        return it == entries_->end() ? fallback : it->second;
    }
    double num(const std::string& key, double fallback) {
        const std::string raw = str(key, "");
        if (raw.empty()) return fallback;
        try {
            size_t used = 0;
            const double v = std::stod(raw, &used);
            if (used != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("key '" + key + "' in [" + name_ + "] is not a number: " + raw);
        }
    }
    int integer(const std::string& key, int fallback) {
        const double v = num(key, fallback);
        if (v != std::floor(v)) throw ConfigError("key '" + key + "' must be an integer");
        return static_cast<int>(v);
    }
    std::optional<double> opt_num(const std::string& key) {
        const std::string raw = str(key, "");
        if (raw.empty()) return std::nullopt;
        return num(key, 0.0);
    }

    void finish() const {
        if (!entries_) return;
        for (const auto& [key, value] : *entries_)
            if (!seen_.count(key))
                throw ConfigError("unknown key '" + key + "' in section [" + name_ + "]");
    }

private:
    std::string name_;
    const std::map<std::string, std::string>* entries_ = nullptr;
    std::set<std::string> seen_;
};

void check_sections(const ConfigMap& cfg, const std::set<std::string>& known) {
    for (const auto& [section, entries] : cfg)
        if (!known.count(section)) throw ConfigError("unknown section [" + section + "]");
}

// --- scenario construction from config ---

struct BuiltScenario {
    pineq::Space space;
    pineq::WeightPair weights;
    pineq::CenterMode center = pineq::CenterMode::Mu;
    nlohmann::ordered_json echo;
};

BuiltScenario build_scenario(const ConfigMap& cfg) {
    Section sec(cfg, "scenario");
    const std::string kind = sec.str("kind", "lattice");
    nlohmann::ordered_json echo;
    echo["kind"] = kind;

    if (kind == "graph") {
        const std::string graph = sec.str("graph", "path");
        const int vertices = sec.integer("vertices", 21);
        const int root = sec.integer("root", vertices / 2);
        const double decay = sec.num("decay_rate", std::log(4.0));
        sec.finish();
        if (vertices < 2) throw ConfigError("graph needs at least two vertices");
        pineq::Relation adj;
        if (graph == "path") {
            adj = pineq::selftest_detail::path_graph(vertices);
        } else if (graph == "complete") {
            adj = pineq::selftest_detail::complete_graph(vertices);
        } else if (graph == "cycle") {
            adj = pineq::selftest_detail::path_graph(vertices);
            adj.front().push_back(vertices - 1);
            adj.back().push_back(0);
        } else {
            throw ConfigError("unknown graph '" + graph + "'");
        }
        auto scen = pineq::make_graph_scenario(adj, root, decay);
        echo["graph"] = graph;
        echo["vertices"] = vertices;
        echo["root"] = root;
        echo["decay_rate"] = decay;
        echo["connected"] = scen.connected;
        return {std::move(scen.space), std::move(scen.weights),
                decay == 0.0 ? pineq::CenterMode::Mu : pineq::CenterMode::X0, std::move(echo)};
    }
    if (kind == "lattice") {
        const int d = sec.integer("d", 1);
        const double L = sec.num("L", 8.0);
        const double h = sec.num("h", 0.25);
        const double s_exp = sec.num("s_exp", 2.0);
        const double eps = sec.num("eps", 0.5);
        const std::string variant = sec.str("variant", "neumann");
        const std::string mode = sec.str("mode", "plain");
        sec.finish();
        if (variant != "neumann" && variant != "dirichlet")
            throw ConfigError("variant must be neumann or dirichlet");
        if (mode != "plain" && mode != "modified")
            throw ConfigError("mode must be plain or modified");
        auto scen = pineq::make_lattice_scenario(
            d, L, h, s_exp, eps,
            variant == "neumann" ? pineq::LatticeVariant::Neumann
                                 : pineq::LatticeVariant::Dirichlet,
            mode == "plain" ? pineq::LatticeMode::Plain : pineq::LatticeMode::Modified);
        echo["d"] = d;
        echo["L"] = L;
        echo["h"] = h;
        echo["s_exp"] = s_exp;
        echo["eps"] = eps;
        echo["variant"] = variant;
        echo["mode"] = mode;
        echo["clipped_fraction"] = scen.clipped_fraction;
        const pineq::CenterMode center = variant == "neumann" ? pineq::CenterMode::X0
                                                              : pineq::CenterMode::WPlus;
        return {std::move(scen.lattice.space), std::move(scen.weights), center, std::move(echo)};
    }
    if (kind == "domain") {
        const std::string shape = sec.str("shape", "dumbbell");
        const double pixel = sec.num("pixel", 0.05);
        const double c_threshold = sec.num("c_threshold", 0.05);
        const double corridor = sec.num("corridor_width", 0.3);
        const double gap = sec.num("gap", 1.2);
        sec.finish();
        pineq::PixelMask mask;
        if (shape == "dumbbell") {
            mask = pineq::make_dumbbell_mask(pixel, corridor);
        } else if (shape == "separated") {
            mask = pineq::make_separated_mask(pixel, gap);
        } else if (shape == "square") {
            mask = pineq::make_rect_union_mask({{0.0, 2.0, 0.0, 2.0}}, pixel);
        } else {
            throw ConfigError("unknown shape '" + shape + "'");
        }
        auto scen = pineq::make_domain_scenario(mask, c_threshold);
        echo["shape"] = shape;
        echo["pixel"] = pixel;
        echo["c_threshold"] = c_threshold;
        echo["covered"] = scen.covered;
        echo["n_star"] = scen.n_star;
        return {std::move(scen.space), std::move(scen.weights), pineq::CenterMode::Mu,
                std::move(echo)};
    }
    if (kind == "boltzmann") {
        const int d = sec.integer("d", 2);
        const double L = sec.num("L", 4.0);
        const double h = sec.num("h", 0.25);
        const double alpha = sec.num("alpha", 0.0);
        sec.finish();
        auto scen = pineq::make_boltzmann_scenario(d, L, h, alpha);
        echo["d"] = d;
        echo["L"] = L;
        echo["h"] = h;
        echo["alpha"] = alpha;
        return {std::move(scen.space), std::move(scen.weights), pineq::CenterMode::Mu,
                std::move(echo)};
    }
    throw ConfigError("unknown scenario kind '" + kind + "'");
}

// --- shared pipeline pieces ---

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format = "json";
    std::uint64_t seed = 24601;
    int threads = 0;
    double tolerance_scale = 1.0;
};

void write_report(const pineq::RunReport& report, const Options& opt) {
    const auto format = opt.format == "csv" ? pineq::ReportFormat::Csv : pineq::ReportFormat::Json;
    const std::string bytes = pineq::emit_report(report, format);
    if (opt.out_path.empty()) {
        std::cout << bytes;
        return;
    }
    std::ofstream out(opt.out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + opt.out_path);
    out << bytes;
}

nlohmann::ordered_json certificate_json(const pineq::AdmissibilityCertificate& cert) {
    nlohmann::ordered_json doc;
    doc["lambda"] = cert.lambda;
    doc["epsilon"] = cert.epsilon;
    doc["s"] = cert.s;
    doc["x0_constant"] = cert.x0_constant;
    doc["lambda0"] = cert.lambda0;
    doc["passed"] = cert.passed;
    nlohmann::ordered_json violations = nlohmann::ordered_json::array();
    for (const auto& v : cert.violations)
        violations.push_back({{"point", v.point},
                              {"deficit", v.deficit},
                              {"kind", static_cast<int>(v.kind)}});
    doc["violations"] = std::move(violations);
    return doc;
}

pineq::AdmissibilitySearchResult certify(const BuiltScenario& scen, const ConfigMap& cfg,
                                         const pineq::GrowthFit& growth) {
    Section sec(cfg, "admissibility");
    const auto lambda = sec.opt_num("lambda");
    const auto epsilon = sec.opt_num("epsilon");
    const auto s = sec.opt_num("s");
    sec.finish();
    pineq::AdmissibilitySearchResult result;
    if (lambda || epsilon || s) {
        if (!(lambda && epsilon && s))
            throw ConfigError("set lambda, epsilon, and s together or none of them");
        auto cert =
            pineq::check_admissibility(scen.space, scen.weights, *lambda, *epsilon, *s, growth);
        if (cert.passed) {
            result.best = std::move(cert);
        } else {
            pineq::Violation worst;
            for (const auto& v : cert.violations)
                if (v.deficit >= worst.deficit || worst.point == -1) worst = v;
            result.failures.push_back({*lambda, *epsilon, *s, worst});
        }
        return result;
    }
    return pineq::search_admissibility(scen.space, scen.weights, growth);
}

int growth_max_n(const ConfigMap& cfg) {
    Section sec(cfg, "admissibility");
    const int n = sec.integer("growth_max_n", 10);
    // Only growth_max_n is consumed here; the certificate keys are read by
    // certify(), so skip the unknown-key sweep for this view.
    return n;
}

struct ConstantsConfig {
    double p = 2.0;
    int restarts = 32;
    int n_max = 50;
    int validation = 200;
};

ConstantsConfig constants_config(const ConfigMap& cfg) {
    Section sec(cfg, "constants");
    ConstantsConfig out;
    out.p = sec.num("p", 2.0);
    out.restarts = sec.integer("restarts", 32);
    out.n_max = sec.integer("n_max", 50);
    out.validation = sec.integer("validation", 200);
    sec.finish();
    if (out.p < 1.0) throw ConfigError("p must be at least 1");
    return out;
}

const std::set<std::string> kKnownSections = {"scenario", "admissibility", "constants", "logsob"};

ConfigMap load_config(const Options& opt) {
    if (opt.config_path.empty()) throw ConfigError("--config is required for this command");
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config file: " + opt.config_path);
    ConfigMap cfg = parse_config(in);
    check_sections(cfg, kKnownSections);
    return cfg;
}

// --- subcommands ---

int cmd_scenario(const Options& opt) {
    const ConfigMap cfg = load_config(opt);
    const BuiltScenario scen = build_scenario(cfg);
    pineq::RunReport report("scenario", opt.seed, opt.tolerance_scale);
    report.info("scenario", scen.echo);
    report.info("space", pineq::space_to_json(scen.space));
    report.info("weights",
                {{"W", std::vector<double>(scen.weights.W.data(),
                                           scen.weights.W.data() + scen.weights.W.size())},
                 {"W_plus", std::vector<double>(
                                scen.weights.W_plus.data(),
                                scen.weights.W_plus.data() + scen.weights.W_plus.size())},
                 {"X0", scen.weights.X0}});
    write_report(report, opt);
    return kExitPass;
}

int cmd_check_admissibility(const Options& opt) {
    const ConfigMap cfg = load_config(opt);
    const BuiltScenario scen = build_scenario(cfg);
    const pineq::GrowthFit growth = pineq::fit_growth_constant(scen.space, growth_max_n(cfg));
    const auto result = certify(scen, cfg, growth);

    pineq::RunReport report("check-admissibility", opt.seed, opt.tolerance_scale);
    report.info("scenario", scen.echo);
    report.metric("growth/lambda0", growth.lambda0, 1e-12);
    report.metric("growth/C", growth.C, 1e-12);
    report.info("feasible", result.feasible());
    if (result.feasible()) {
        report.info("certificate", certificate_json(*result.best));
    } else {
        nlohmann::ordered_json failures = nlohmann::ordered_json::array();
        const size_t cap = std::min<size_t>(result.failures.size(), 50);
        for (size_t i = 0; i < cap; ++i)
            failures.push_back({{"lambda", result.failures[i].lambda},
                                {"epsilon", result.failures[i].epsilon},
                                {"s", result.failures[i].s},
                                {"worst_point", result.failures[i].worst.point},
                                {"worst_deficit", result.failures[i].worst.deficit}});
        report.info("failures", std::move(failures));
    }
    write_report(report, opt);
    return result.feasible() ? kExitPass : kExitInvalid;
}

int cmd_estimate_constant(const Options& opt) {
    const ConfigMap cfg = load_config(opt);
    const BuiltScenario scen = build_scenario(cfg);
    const ConstantsConfig cc = constants_config(cfg);
    const pineq::GrowthFit growth = pineq::fit_growth_constant(scen.space, growth_max_n(cfg));
    const auto result = certify(scen, cfg, growth);

    pineq::RunReport report("estimate-constant", opt.seed, opt.tolerance_scale);
    report.info("scenario", scen.echo);
    report.metric("growth/lambda0", growth.lambda0, 1e-12);
    report.metric("p", cc.p, 0.0);

    bool unbounded = false;
    if (cc.p == 2.0) {
        const auto exact = pineq::best_constant_p2(scen.space, scen.weights, scen.center);
        unbounded = exact.unbounded;
        report.info("exact_p2/unbounded", exact.unbounded);
        if (!exact.unbounded) report.metric("exact_p2/value", exact.value, 1e-9);
    }
    const auto lower = pineq::lower_bound_constant(scen.space, scen.weights, cc.p, scen.center,
                                                   cc.restarts, opt.seed);
    report.info("lower_bound/degenerate", lower.degenerate);
    if (!lower.degenerate) report.metric("lower_bound/value", lower.value, 1e-6);

    report.info("certificate_feasible", result.feasible());
    if (result.feasible()) {
        report.info("certificate", certificate_json(*result.best));
        const auto chain = pineq::run_constructive_chain(scen.space, scen.weights, *result.best,
                                                         cc.p, cc.n_max, opt.seed, cc.validation,
                                                         growth);
        report.metric("chain/delta", chain.delta, 1e-12);
        report.metric("chain/s_prime", chain.s_prime, 1e-12);
        report.metric("chain/c_upper", chain.c_upper, 1e-9);
        report.metric("chain/operator_norm", chain.operator_norm, 1e-9);
        report.metric("chain/lyapunov_max_excess", chain.lyapunov_max_excess, 1e-10);
        report.metric("chain/sn_identity_max_dev", chain.sn_identity_max_dev, 1e-10);
        report.metric("chain/sn_delta_min_margin", chain.sn_delta_min_margin, 1e-10);
        report.metric("chain/validation_worst_ratio", chain.validation_worst_ratio, 1e-10);
    }
    write_report(report, opt);
    return unbounded ? kExitViolated : kExitPass;
}

int cmd_verify_poincare(const Options& opt) {
    const ConfigMap cfg = load_config(opt);
    const BuiltScenario scen = build_scenario(cfg);
    const ConstantsConfig cc = constants_config(cfg);
    const pineq::GrowthFit growth = pineq::fit_growth_constant(scen.space, growth_max_n(cfg));

    pineq::RunReport report("verify-poincare", opt.seed, opt.tolerance_scale);
    report.info("scenario", scen.echo);
    report.metric("p", cc.p, 0.0);

    double constant = 0.0;
    if (cc.p == 2.0) {
        const auto exact = pineq::best_constant_p2(scen.space, scen.weights, scen.center);
        if (exact.unbounded) {
            report.info("exact_p2/unbounded", true);
            write_report(report, opt);
            return kExitViolated;
        }
        constant = exact.value;
        report.metric("exact_p2/value", exact.value, 1e-9);
    } else {
        const auto result = certify(scen, cfg, growth);
        if (!result.feasible()) {
            report.info("certificate_feasible", false);
            write_report(report, opt);
            return kExitInvalid;
        }
        const auto chain = pineq::run_constructive_chain(scen.space, scen.weights, *result.best,
                                                         cc.p, cc.n_max, opt.seed, 1, growth);
        constant = chain.c_upper;
        report.metric("chain/c_upper", chain.c_upper, 1e-9);
    }

    std::mt19937_64 rng(opt.seed);
    int violations = 0;
    double worst_ratio = 0.0;
    for (int trial = 0; trial < cc.validation; ++trial) {
        const auto f =
            pineq::selftest_detail::random_centered(scen.space, scen.weights, scen.center, rng);
        const auto [lhs, rhs] = pineq::poincare_sides(scen.space, scen.weights, f, cc.p);
        if (rhs > 0.0) worst_ratio = std::max(worst_ratio, lhs / (constant * rhs));
        if (!pineq::leq_with_slack(lhs, constant * rhs, 1e-10 * opt.tolerance_scale)) ++violations;
    }
    report.metric("validation/worst_ratio", worst_ratio, 1e-10);
    report.info("validation/violations", violations);
    report.info("validation/count", cc.validation);
    write_report(report, opt);
    return violations == 0 ? kExitPass : kExitViolated;
}

int cmd_verify_logsob(const Options& opt) {
    const ConfigMap cfg = load_config(opt);
    BuiltScenario scen = build_scenario(cfg);

    Section sec(cfg, "logsob");
    const std::string psi_kind = sec.str("psi", "log_power");
    const double alpha = sec.num("alpha", 0.5);
    const double c = sec.num("c", 0.0);
    const double p = sec.num("p", 2.0);
    const int family_size = sec.integer("family_size", 100);
    sec.finish();
    pineq::PsiKind kind;
    if (psi_kind == "log_power") {
        kind = pineq::PsiKind::LogPower;
    } else if (psi_kind == "exp_log_power") {
        kind = pineq::PsiKind::ExpLogPower;
    } else if (psi_kind == "constant") {
        kind = pineq::PsiKind::Constant;
    } else {
        throw ConfigError("unknown psi kind '" + psi_kind + "'");
    }
    const pineq::PsiPair psi = pineq::make_psi_pair(kind, alpha, c);

    if (!scen.space.has_scales()) {
        // Default two-scale family: the unit relation over the diagonal.
        pineq::Relation unit(static_cast<size_t>(scen.space.size()));
        for (int x = 0; x < scen.space.size(); ++x) unit[static_cast<size_t>(x)] = scen.space.ball(x);
        pineq::ScaleFamily fam;
        fam.levels = {unit, pineq::diagonal_relation(scen.space.size())};
        scen.space = pineq::Space(scen.space.measure(), std::move(unit), std::move(fam));
    }

    pineq::RunReport report("verify-logsob", opt.seed, opt.tolerance_scale);
    report.info("scenario", scen.echo);
    report.info("psi", {{"kind", psi_kind}, {"alpha", alpha}, {"c", c}});
    report.metric("psi/slow_growth_constant", psi.slow_growth_constant, 1e-9);

    const auto diag = pineq::check_sobolev_weight_conditions(scen.space, scen.weights, psi, p);
    report.metric("weight_conditions/K1", diag.K1, 1e-9);
    report.metric("weight_conditions/K2", diag.K2, 1e-9);
    report.info("weight_conditions/flagged", diag.flagged);

    std::mt19937_64 rng(opt.seed);
    std::vector<pineq::FunctionOnSpace> family;
    for (int i = 0; i < family_size; ++i)
        family.push_back(
            pineq::selftest_detail::random_centered(scen.space, scen.weights, scen.center, rng));
    const auto result = pineq::find_logsob_constant(scen.space, scen.weights, psi, family, p);
    report.info("logsob/feasible", result.feasible);
    report.metric("logsob/c_star", result.c, 1e-6);
    report.metric("logsob/final_value", result.final_value, 1e-6);
    write_report(report, opt);
    return result.feasible && result.c > 0.0 ? kExitPass : kExitViolated;
}

int cmd_selftest(const Options& opt) {
    const auto outcome = pineq::run_selftest(opt.seed, opt.tolerance_scale);
    for (const auto& c : outcome.criteria) {
        std::cout << "criterion " << c.index << ": " << (c.passed ? "PASS" : "FAIL") << " — "
                  << c.name << " (" << c.detail << ")\n";
        std::cerr << "criterion " << c.index << " took " << c.seconds << " s\n";
    }
    pineq::RunReport report = pineq::selftest_report(outcome, opt.seed, opt.tolerance_scale);
    if (!opt.out_path.empty()) write_report(report, opt);
    return outcome.all_passed ? kExitPass : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certification lab for two-weight fractional Poincare and generalized "
                 "log-Sobolev inequalities on finite weighted spaces"};
    app.require_subcommand(1);

    Options opt;
    app.add_option("--config", opt.config_path, "path to the run configuration file");
    app.add_option("--out", opt.out_path, "write the report here instead of stdout");
    app.add_option("--format", opt.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", opt.seed, "seed for all randomized computations");
    app.add_option("--threads", opt.threads, "internal parallelism cap (0 = library default)");
    app.add_option("--tolerance-scale", opt.tolerance_scale,
                   "multiplier applied to every validation tolerance");

    auto* sc_check = app.add_subcommand("check-admissibility",
                                        "certify the weight-pair admissibility condition");
    auto* sc_estimate =
        app.add_subcommand("estimate-constant", "bound the optimal Poincare constant");
    auto* sc_poincare =
        app.add_subcommand("verify-poincare", "validate the Poincare inequality on random data");
    auto* sc_logsob =
        app.add_subcommand("verify-logsob", "validate the generalized log-Sobolev inequality");
    auto* sc_scenario = app.add_subcommand("scenario", "build a scenario and emit it");
    auto* sc_selftest = app.add_subcommand("selftest", "run the built-in acceptance suite");
    // The shared flags may appear after the subcommand name.
    for (auto* sub : {sc_check, sc_estimate, sc_poincare, sc_logsob, sc_scenario, sc_selftest})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitInvalid;
    }

    if (opt.threads > 0) Eigen::setNbThreads(opt.threads);

    const auto start = std::chrono::steady_clock::now();
    int code = kExitInvalid;
    try {
        if (sc_check->parsed()) code = cmd_check_admissibility(opt);
        else if (sc_estimate->parsed()) code = cmd_estimate_constant(opt);
        else if (sc_poincare->parsed()) code = cmd_verify_poincare(opt);
        else if (sc_logsob->parsed()) code = cmd_verify_logsob(opt);
        else if (sc_scenario->parsed()) code = cmd_scenario(opt);
        else if (sc_selftest->parsed()) code = cmd_selftest(opt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolated;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "completed in " << elapsed << " s\n";
    return code;
}
