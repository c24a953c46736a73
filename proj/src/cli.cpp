#include "quotapower/cli.hpp"

#include "quotapower/balls_bins.hpp"
#include "quotapower/experiments.hpp"
#include "quotapower/game.hpp"
#include "quotapower/io.hpp"
#include "quotapower/numeric.hpp"
#include "quotapower/super_increasing.hpp"
#include "quotapower/verify.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace quotapower {

namespace {

const CLI::Validator rational_check(
    [](std::string& s) -> std::string {
        try {
            parse_rational(s);
        } catch (const std::invalid_argument&) {
            return "not a rational or decimal: " + s;
        }
        return {};
    },
    "RATIONAL");

std::vector<std::string> split_on(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

std::vector<BigRat> parse_rational_list(const std::string& text) {
    std::vector<BigRat> values;
    for (const auto& token : split_on(text, ',')) values.push_back(parse_rational(token));
    return values;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    for (const auto& token : split_on(text, ',')) {
        size_t used = 0;
        values.push_back(std::stoi(token, &used));
        if (used != token.size()) throw std::invalid_argument("not an integer: " + token);
    }
    return values;
}

// Super-increasing weights from a comma-separated list, accepted in either
// monotone order (the analysis indexes them heaviest first).
SIWeights si_from_list(const std::string& text) {
    std::vector<BigInt> values;
    for (const auto& token : split_on(text, ',')) {
        if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("weights must be positive integers, got: " + token);
        values.emplace_back(token);
    }
    bool non_increasing = true, non_decreasing = true;
    for (size_t i = 1; i < values.size(); ++i) {
        non_increasing = non_increasing && values[i] <= values[i - 1];
        non_decreasing = non_decreasing && values[i] >= values[i - 1];
    }
    if (!non_increasing && non_decreasing) std::reverse(values.begin(), values.end());
    else if (!non_increasing)
        throw std::invalid_argument("super-increasing weights must be sorted");
    return SIWeights(std::move(values));
}

GameDocument load_game_document(const std::string& path) {
    if (path == "-") return read_game_document(std::cin);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open game file: " + path);
    return read_game_document(in);
}

// Output target: "-" is the session stream, anything else a file.
struct Sink {
    std::ofstream file;

    std::ostream& open(const std::string& path, std::ostream& fallback) {
        if (path == "-") return fallback;
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open output file: " + path);
        return file;
    }
};

void log_config(std::ostream& err, const std::string& name,
                const std::vector<std::pair<std::string, std::string>>& entries) {
    err << "# config: " << name;
    for (const auto& [key, value] : entries) err << ' ' << key << '=' << value;
    err << '\n';
}

std::string compact_rational(const BigRat& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    return den == 1 ? num.str() : num.str() + "/" + den.str();
}

std::string pset_braces(const PSet& p) {
    std::string text = "{";
    for (size_t i = 0; i < p.members.size(); ++i) {
        if (i) text += ',';
        text += std::to_string(p.members[i]);
    }
    text += '}';
    return text;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact and sampled Shapley power analysis for weighted voting games"};
    app.name("quotapower");
    app.require_subcommand(1);
    app.footer(
        "Rationals are written as \"a/b\" or as finite decimals; both parse exactly.\n"
        "Randomized subcommands require an explicit --seed; reruns with the same\n"
        "config are byte-identical. QUOTAPOWER_THREADS (0 = auto) caps worker\n"
        "threads; this build evaluates trials sequentially, so any cap holds.");

    if (const char* threads = std::getenv("QUOTAPOWER_THREADS")) {
        const std::string value(threads);
        if (value.empty() || value.find_first_not_of("0123456789") != std::string::npos)
            err << "# warning: ignoring non-numeric QUOTAPOWER_THREADS=" << value << '\n';
    }

    // compute
    auto* compute = app.add_subcommand("compute", "Exact power of every agent in a game file");
    std::string compute_game = "-", compute_quota, compute_out = "-";
    compute->add_option("-g,--game", compute_game, "game JSON file, - for stdin");
    compute->add_option("-q,--quota", compute_quota, "quota override")->check(rational_check);
    compute->add_option("-o,--output", compute_out, "output file, - for stdout");
    compute->callback([&] {
        std::optional<BigRat> quota;
        if (!compute_quota.empty()) quota = parse_rational(compute_quota);
        Game game = make_game(load_game_document(compute_game), quota);
        log_config(err, "compute",
                   {{"game", compute_game},
                    {"n", std::to_string(game.n())},
                    {"quota", format_rational(game.quota())},
                    {"output", compute_out}});
        Sink sink;
        write_power_csv(sink.open(compute_out, out), shapley_all(game));
    });

    // diff
    auto* diff = app.add_subcommand("diff", "Exact |phi_j - phi_i| for one agent pair");
    std::string diff_game = "-", diff_quota, diff_out = "-";
    int diff_i = 0, diff_j = 0;
    diff->add_option("-g,--game", diff_game, "game JSON file, - for stdin");
    diff->add_option("-q,--quota", diff_quota, "quota override")->check(rational_check);
    diff->add_option("-i", diff_i, "first agent (1-based)")->required();
    diff->add_option("-j", diff_j, "second agent (1-based)")->required();
    diff->add_option("-o,--output", diff_out, "output file, - for stdout");
    diff->callback([&] {
        std::optional<BigRat> quota;
        if (!diff_quota.empty()) quota = parse_rational(diff_quota);
        Game game = make_game(load_game_document(diff_game), quota);
        log_config(err, "diff",
                   {{"game", diff_game},
                    {"quota", format_rational(game.quota())},
                    {"i", std::to_string(diff_i)},
                    {"j", std::to_string(diff_j)},
                    {"output", diff_out}});
        const BigRat d = shapley_diff(game, diff_i, diff_j);
        Sink sink;
        std::ostream& target = sink.open(diff_out, out);
        target << "i,j,diff_num,diff_den,diff_float\n";
        target << diff_i << ',' << diff_j << ','
               << boost::multiprecision::numerator(d).str() << ','
               << boost::multiprecision::denominator(d).str() << ',' << format_double17(d)
               << '\n';
    });

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Exact power curve over a quota grid");
    std::string sweep_game = "-", sweep_quotas, sweep_linspace, sweep_agents, sweep_out = "-";
    bool sweep_breakpoints = false, sweep_midpoints = false;
    sweep->add_option("-g,--game", sweep_game, "game JSON file, - for stdin");
    auto* opt_quotas = sweep->add_option("--quotas", sweep_quotas, "comma-separated quota list");
    auto* opt_linspace =
        sweep->add_option("--linspace", sweep_linspace, "lo:hi:count evenly spaced quotas");
    auto* opt_bp = sweep->add_flag("--breakpoints", sweep_breakpoints,
                                   "all subset-sum breakpoints (super-increasing weights)");
    sweep->add_flag("--midpoints", sweep_midpoints, "add interval midpoints to --breakpoints")
        ->needs(opt_bp);
    sweep->add_option("--agents", sweep_agents, "comma-separated 1-based agents (default all)");
    sweep->add_option("-o,--output", sweep_out, "output file, - for stdout");
    opt_quotas->excludes(opt_linspace)->excludes(opt_bp);
    opt_linspace->excludes(opt_bp);
    sweep->callback([&] {
        GameDocument doc = load_game_document(sweep_game);
        GridSpec grid;
        std::string grid_desc;
        if (!sweep_quotas.empty()) {
            grid.kind = GridSpec::Kind::explicit_list;
            grid.points = parse_rational_list(sweep_quotas);
            grid_desc = "list:" + sweep_quotas;
        } else if (!sweep_linspace.empty()) {
            const auto parts = split_on(sweep_linspace, ':');
            int count = 0;
            if (parts.size() == 3) {
                try {
                    size_t used = 0;
                    count = std::stoi(parts[2], &used);
                    if (used != parts[2].size()) count = 0;
                } catch (const std::exception&) {
                    count = 0;
                }
            }
            if (parts.size() != 3 || count < 1)
                throw CLI::ValidationError("sweep",
                                           "--linspace wants lo:hi:count, got: " + sweep_linspace);
            grid.kind = GridSpec::Kind::linspace;
            grid.lo = parse_rational(parts[0]);
            grid.hi = parse_rational(parts[1]);
            grid.count = count;
            grid_desc = "linspace:" + sweep_linspace;
        } else if (sweep_breakpoints) {
            grid.kind = sweep_midpoints ? GridSpec::Kind::breakpoints_and_midpoints
                                        : GridSpec::Kind::breakpoints;
            grid_desc = sweep_midpoints ? "breakpoints+midpoints" : "breakpoints";
        } else {
            throw CLI::ValidationError(
                "sweep", "choose a grid: --quotas, --linspace, or --breakpoints");
        }
        std::vector<int> agents;
        if (!sweep_agents.empty()) agents = parse_int_list(sweep_agents);

        // The sweep reads only the weights; a document without a quota still
        // needs a valid placeholder to build the game.
        std::int64_t total = 0;
        for (auto w : doc.weights) total += w;
        Game game(doc.weights, doc.quota.value_or(BigRat(total)));
        log_config(err, "sweep",
                   {{"game", sweep_game},
                    {"n", std::to_string(game.n())},
                    {"grid", grid_desc},
                    {"agents", sweep_agents.empty() ? std::string("all") : sweep_agents},
                    {"output", sweep_out}});
        Sink sink;
        write_sweep_csv(sink.open(sweep_out, out), quota_sweep(game, grid, agents));
    });

    // sample
    auto* sample = app.add_subcommand("sample", "Draw a weight vector by tossing m balls into n bins");
    int sample_n = 0;
    std::int64_t sample_m = 0;
    std::uint64_t sample_seed = 0;
    bool sample_uniform = false;
    std::string sample_rho, sample_probs, sample_out = "-";
    sample->add_option("-n", sample_n, "number of bins (agents)")->required();
    sample->add_option("-m", sample_m, "number of balls (total weight)")->required();
    sample->add_option("--seed", sample_seed, "RNG seed")->required();
    auto* opt_uniform = sample->add_flag("--uniform", sample_uniform, "equiprobable bins");
    auto* opt_rho = sample->add_option("--rho", sample_rho,
                                       "exponential bins: p_i proportional to rho^(n-i)")
                        ->check(rational_check);
    auto* opt_probs =
        sample->add_option("--probs", sample_probs, "probability file, one value per line");
    sample->add_option("-o,--output", sample_out, "output file, - for stdout");
    opt_uniform->excludes(opt_rho)->excludes(opt_probs);
    opt_rho->excludes(opt_probs);
    sample->callback([&] {
        BallsBinsConfig cfg;
        cfg.n = sample_n;
        cfg.m = sample_m;
        cfg.seed = sample_seed;
        std::string dist;
        if (sample_uniform) {
            cfg.probs = uniform_probs(sample_n);
            dist = "uniform";
        } else if (!sample_rho.empty()) {
            cfg.probs = exponential_probs(sample_n, parse_rational(sample_rho));
            dist = "exponential:" + sample_rho;
        } else if (!sample_probs.empty()) {
            std::ifstream in(sample_probs);
            if (!in) throw std::invalid_argument("cannot open probability file: " + sample_probs);
            cfg.probs = read_rational_lines(in);
            dist = "file:" + sample_probs;
        } else {
            throw CLI::ValidationError("sample",
                                       "choose a distribution: --uniform, --rho, or --probs");
        }
        log_config(err, "sample",
                   {{"n", std::to_string(sample_n)},
                    {"m", std::to_string(sample_m)},
                    {"distribution", dist},
                    {"seed", std::to_string(sample_seed)},
                    {"output", sample_out}});
        Sink sink;
        write_sample_json(sink.open(sample_out, out), sample_weights(cfg));
    });

    // si
    auto* si = app.add_subcommand("si", "Closed-form analysis of super-increasing weights");
    si->require_subcommand(1);
    std::string si_weights, si_quota, si_out = "-";
    int si_base = 0, si_n = 0, si_agent = 0, si_depth = 32;

    const auto si_weights_flags = [&](CLI::App* cmd, bool with_quota) {
        auto* w = cmd->add_option("--weights", si_weights, "comma-separated weights");
        auto* b = cmd->add_option("--base", si_base, "geometric weights d^(n-i)");
        auto* n = cmd->add_option("-n", si_n, "agent count for --base");
        b->needs(n);
        w->excludes(b);
        if (with_quota)
            cmd->add_option("-q,--quota", si_quota, "quota")->required()->check(rational_check);
        cmd->add_option("-o,--output", si_out, "output file, - for stdout");
    };
    const auto resolve_si = [&]() -> SIWeights {
        if (!si_weights.empty()) return si_from_list(si_weights);
        if (si_base != 0) return SIWeights::powers(si_base, si_n);
        throw CLI::ValidationError("si", "provide --weights or --base with -n");
    };

    auto* si_pset = si->add_subcommand("pset", "Pivotal set and quota interval at a quota");
    si_weights_flags(si_pset, true);
    si_pset->callback([&] {
        SIWeights w = resolve_si();
        const BigRat q = parse_rational(si_quota);
        log_config(err, "si pset",
                   {{"n", std::to_string(w.n())}, {"quota", format_rational(q)}});
        PSet p = find_pset(w, q);
        QuotaInterval interval = si_interval(w, p);
        Sink sink;
        std::ostream& target = sink.open(si_out, out);
        target << "pset: " << pset_braces(p) << '\n';
        target << "beta: " << beta(p).str() << '\n';
        target << "interval: (" << compact_rational(interval.lower) << ", "
               << compact_rational(interval.upper) << "]\n";
    });

    auto* si_shap = si->add_subcommand("shapley", "Closed-form power values at a quota");
    si_weights_flags(si_shap, true);
    si_shap->add_option("--agent", si_agent, "single 1-based agent (default all)");
    si_shap->callback([&] {
        SIWeights w = resolve_si();
        const BigRat q = parse_rational(si_quota);
        log_config(err, "si shapley",
                   {{"n", std::to_string(w.n())},
                    {"quota", format_rational(q)},
                    {"agent", si_agent == 0 ? std::string("all") : std::to_string(si_agent)}});
        PowerVector power;
        if (si_agent == 0) {
            power = si_shapley_all(w, q);
        } else {
            power.values.assign(1, si_shapley(w, q, si_agent));
        }
        Sink sink;
        std::ostream& target = sink.open(si_out, out);
        if (si_agent == 0) {
            write_power_csv(target, power);
        } else {
            target << "agent_index,value_num,value_den,value_float\n";
            target << si_agent << ',' << boost::multiprecision::numerator(power.values[0]).str()
                   << ',' << boost::multiprecision::denominator(power.values[0]).str() << ','
                   << format_double17(power.values[0]) << '\n';
        }
    });

    auto* si_bp = si->add_subcommand("breakpoints", "Every breakpoint interval and its power values");
    si_weights_flags(si_bp, false);
    si_bp->callback([&] {
        SIWeights w = resolve_si();
        log_config(err, "si breakpoints", {{"n", std::to_string(w.n())}});
        Sink sink;
        write_breakpoints_csv(sink.open(si_out, out), w);
    });

    auto* si_limit = si->add_subcommand("limit", "Infinite geometric game d^-i, depth-limited");
    si_limit->add_option("--base", si_base, "geometric base d >= 2")->required();
    si_limit->add_option("-q,--quota", si_quota, "quota in (0, 1/(d-1))")
        ->required()
        ->check(rational_check);
    si_limit->add_option("--depth", si_depth, "prefix depth K (default 32)");
    si_limit->add_option("--agent", si_agent, "single 1-based agent (default 1..10)");
    si_limit->add_option("-o,--output", si_out, "output file, - for stdout");
    si_limit->callback([&] {
        LimitSpec spec;
        spec.d = si_base;
        spec.depth = si_depth;
        spec.q = parse_rational(si_quota);
        log_config(err, "si limit",
                   {{"base", std::to_string(spec.d)},
                    {"quota", format_rational(spec.q)},
                    {"depth", std::to_string(spec.depth)},
                    {"agent", si_agent == 0 ? std::string("default") : std::to_string(si_agent)}});
        std::vector<int> agents;
        if (si_agent != 0) {
            agents.push_back(si_agent);
        } else {
            for (int a = 1; a <= std::min(10, spec.depth - 1); ++a) agents.push_back(a);
        }
        Sink sink;
        std::ostream& target = sink.open(si_out, out);
        target << "agent,value_num,value_den,value_float,error_num,error_den\n";
        for (int a : agents) {
            LimitValue v = limit_shapley(spec, a);
            target << a << ',' << boost::multiprecision::numerator(v.value).str() << ','
                   << boost::multiprecision::denominator(v.value).str() << ','
                   << format_double17(v.value) << ','
                   << boost::multiprecision::numerator(v.error_bound).str() << ','
                   << boost::multiprecision::denominator(v.error_bound).str() << '\n';
        }
    });

    // experiment
    auto* experiment =
        app.add_subcommand("experiment", "Seeded Monte Carlo experiments on sampled weights");
    experiment->require_subcommand(1);
    int exp_n = 0, exp_ell = 0, exp_trials = 0;
    std::int64_t exp_m = 0;
    std::uint64_t exp_seed = 0;
    double exp_C = 8.0;
    std::string exp_quotas, exp_rho, exp_T, exp_out = "-";
    bool exp_csv = false;

    const auto experiment_common = [&](CLI::App* cmd) {
        cmd->add_option("-n", exp_n, "number of agents")->required();
        cmd->add_option("-m", exp_m, "number of balls (total weight)")->required();
        cmd->add_option("--trials", exp_trials, "trial count")->required();
        cmd->add_option("--seed", exp_seed, "RNG seed")->required();
        cmd->add_flag("--csv", exp_csv, "emit per-trial CSV instead of the JSON report");
        cmd->add_option("-o,--output", exp_out, "output file, - for stdout");
    };
    const auto emit_report = [&](const ExperimentReport& report) {
        Sink sink;
        std::ostream& target = sink.open(exp_out, out);
        if (exp_csv)
            write_report_csv(target, report);
        else
            write_report_json(target, report);
    };
    const auto log_report_config = [&](const ExperimentReport& report) {
        auto entries = report.config;
        entries.emplace_back("output", exp_out);
        log_config(err, "experiment " + report.tag, entries);
    };

    auto* exp_equal = experiment->add_subcommand(
        "equal-power", "Near-uniform weights at quotas away from multiples of m/n");
    experiment_common(exp_equal);
    exp_equal->add_option("--quotas", exp_quotas,
                          "comma-separated quotas (default midpoints (l+1/2)m/n)");
    exp_equal->callback([&] {
        EqualPowerConfig cfg;
        cfg.n = exp_n;
        cfg.m = exp_m;
        cfg.trials = exp_trials;
        cfg.seed = exp_seed;
        if (!exp_quotas.empty()) cfg.quotas = parse_rational_list(exp_quotas);
        ExperimentReport report = run_equal_power(cfg);
        log_report_config(report);
        emit_report(report);
    });

    auto* exp_min = experiment->add_subcommand(
        "min-shapley", "Lightest agent's power at quota multiples of m/n");
    experiment_common(exp_min);
    exp_min->add_option("--ell", exp_ell, "quota multiple q = ell*m/n")->required();
    exp_min->callback([&] {
        MinShapleyConfig cfg;
        cfg.n = exp_n;
        cfg.m = exp_m;
        cfg.ell = exp_ell;
        cfg.trials = exp_trials;
        cfg.seed = exp_seed;
        ExperimentReport report = run_min_shapley(cfg);
        log_report_config(report);
        emit_report(report);
    });

    auto* exp_expo = experiment->add_subcommand(
        "exponential", "Sampled exponential weights against the closed form");
    experiment_common(exp_expo);
    exp_expo->add_option("--rho", exp_rho, "bin ratio in (0, 1/2)")
        ->required()
        ->check(rational_check);
    exp_expo->add_option("-T", exp_T,
                         "comma-separated probability-scale quotas (default 10 midpoints)");
    exp_expo->add_option("-C", exp_C, "super-increasing threshold constant (default 8)");
    exp_expo->callback([&] {
        ExponentialMatchConfig cfg;
        cfg.n = exp_n;
        cfg.rho = parse_rational(exp_rho);
        cfg.m = exp_m;
        cfg.trials = exp_trials;
        cfg.seed = exp_seed;
        cfg.C = exp_C;
        if (!exp_T.empty()) cfg.T_values = parse_rational_list(exp_T);
        ExperimentReport report = run_exponential_match(cfg);
        log_report_config(report);
        emit_report(report);
    });

    // verify
    auto* verify = app.add_subcommand("verify", "Self-checks with exact arithmetic");
    verify->require_subcommand(1);
    std::int64_t verify_p_max = 40, verify_k_max = 20;
    int verify_games = 200;
    std::uint64_t verify_seed = 0;

    auto* verify_id = verify->add_subcommand("identities", "Binomial identity suite");
    verify_id->add_option("--p-max", verify_p_max, "largest p (default 40)");
    verify_id->add_option("--k-max", verify_k_max, "largest tail length (default 20)");
    verify_id->callback([&] {
        log_config(err, "verify identities",
                   {{"p_max", std::to_string(verify_p_max)},
                    {"k_max", std::to_string(verify_k_max)}});
        VerifyResult r = verify_identities(verify_p_max, verify_k_max);
        if (!r.ok()) throw std::runtime_error(r.failure);
        out << "identities: " << r.checks << " checks passed\n";
    });

    auto* verify_or = verify->add_subcommand("oracle", "Counting evaluator vs permutation oracle");
    verify_or->add_option("--games", verify_games, "number of random games (default 200)");
    verify_or->add_option("--seed", verify_seed, "RNG seed")->required();
    verify_or->callback([&] {
        log_config(err, "verify oracle",
                   {{"games", std::to_string(verify_games)},
                    {"seed", std::to_string(verify_seed)}});
        VerifyResult r = verify_oracle(verify_games, verify_seed);
        if (!r.ok()) throw std::runtime_error(r.failure);
        out << "oracle: " << r.checks << " checks passed\n";
    });

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("quotapower");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace quotapower
