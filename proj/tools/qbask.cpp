#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbask/cli.hpp"

namespace {

using qbask::cli::Command;
using qbask::cli::ExperimentConfig;
using qbask::cli::OutputFormat;

int dispatch(ExperimentConfig config) {
    qbask::cli::RunResult res = qbask::cli::run(config);
    if (!res.message.empty())
        std::fprintf(res.exit_code == 0 ? stdout : stderr, "%s\n", res.message.c_str());
    if (config.output_path.empty() && res.exit_code == 0 && !res.csv.empty())
        std::fputs(res.csv.c_str(), stdout);
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavelet-aided q-Baskakov-Kantorovich operator experiments"};
    app.require_subcommand(1);

    ExperimentConfig config;
    std::string domain_text = "0:1";
    std::string format_text = "csv";

    static const std::map<std::string, Command> kCommands = {
        {"moments", Command::Moments},   {"evaluate", Command::Evaluate},
        {"figure1", Command::Figure1},   {"figure2", Command::Figure2},
        {"figure3", Command::Figure3},   {"korovkin", Command::Korovkin},
        {"rate", Command::Rate},         {"density", Command::Density},
    };
    static const char* kHelp[] = {
        "moment residual table across m, q, x",
        "operator curve for a user-supplied function",
        "degree sweep for g(x) = (x-1/5)(x-4/9) at q = 0.95",
        "degree sweep for g(x) = x^2-1 at q = 1 with closed-form errors",
        "q sweep for f(x) = x^2-4x+3 at m = 50 on [0,4]",
        "weighted-norm Korovkin bound table over n",
        "rate bound 3 C_alpha omega(g; delta_n) over n",
        "q-density of an index set (evens, squares, all, empty)",
    };

    std::vector<CLI::App*> subs;
    int i = 0;
    for (const auto& [name, cmd] : kCommands) {
        (void)cmd;
        subs.push_back(app.add_subcommand(name, kHelp[i++]));
    }
    for (CLI::App* sub : subs) {
        sub->add_option("--m", config.m_values, "degree list, e.g. 10,30,80")
            ->delimiter(',');
        sub->add_option("--q", config.q_values, "deformation list, e.g. 0.95")
            ->delimiter(',');
        sub->add_option("--n", config.n_list, "index list for korovkin/rate")
            ->delimiter(',');
        sub->add_option("--alpha", config.alpha, "weight exponent in 1 + x^(2+alpha)");
        sub->add_option("--domain", domain_text, "evaluation interval a:b");
        sub->add_option("--points", config.grid_points, "grid points across the domain");
        sub->add_option("--function", config.function_text,
                        "expression in x (numbers, + - * / ^, parentheses)");
        sub->add_option("--out", config.output_path, "output file path");
        sub->add_option("--format", format_text, "csv or svg")
            ->check(CLI::IsMember({"csv", "svg"}));
        sub->add_option("--tail-tol", config.policy.tail_tol, "series tail tolerance");
        sub->add_option("--max-terms", config.policy.max_terms, "series term cap");
        sub->add_option("--set", config.set_name, "index set for density")
            ->check(CLI::IsMember({"evens", "squares", "all", "empty"}));
        sub->add_option("--horizon", config.horizon, "density evaluation horizon");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exits 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qbask::cli::kExitConfig;
    }

    config.command = kCommands.at(app.get_subcommands().front()->get_name());
    config.format = format_text == "svg" ? OutputFormat::Svg : OutputFormat::Csv;

    double lo = 0.0, hi = 1.0;
    if (std::sscanf(domain_text.c_str(), "%lf:%lf", &lo, &hi) != 2 || lo < 0.0 || hi <= lo) {
        std::fprintf(stderr, "invalid --domain '%s': expected a:b with 0 <= a < b\n",
                     domain_text.c_str());
        return qbask::cli::kExitConfig;
    }
    // figure3 defaults to [0,4]; only override when the user gave --domain
    bool domain_given = false;
    for (CLI::App* sub : subs)
        if (sub->parsed() && sub->count("--domain") > 0) domain_given = true;
    if (domain_given || config.command != Command::Figure3)
        config.domain = qbask::QInterval(lo, hi);
    else
        config.domain = qbask::QInterval(0.0, 4.0);

    try {
        config.policy.validate();
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return qbask::cli::kExitConfig;
    }

    return dispatch(std::move(config));
}
