#ifndef QBASK_CLI_HPP
#define QBASK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "qbask/convergence.hpp"
#include "qbask/operators.hpp"
#include "qbask/qcalc.hpp"

namespace qbask::cli {

enum class Command { Moments, Evaluate, Figure1, Figure2, Figure3, Korovkin, Rate, Density };
enum class OutputFormat { Csv, Svg };

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNonConvergent = 3;

struct ExperimentConfig {
    Command command = Command::Moments;
    std::string function_text;      // empty: use the command's default function
    std::vector<int> m_values;      // empty: command defaults
    std::vector<double> q_values;   // empty: command defaults
    QInterval domain{0.0, 1.0};
    int grid_points = 201;
    double alpha = 0.0;
    std::string output_path;        // empty: headless (assertions only)
    OutputFormat format = OutputFormat::Csv;
    TruncationPolicy policy;

    // korovkin / rate / density extras
    std::vector<int> n_list;
    double norm_x_max = 50.0;
    int norm_points = 2001;
    std::string set_name = "evens";
    long horizon = 1000;
};

/// Column-oriented table with a shared strictly increasing x column.
struct CurveTable {
    std::vector<std::string> labels;
    std::vector<double> xs;
    std::vector<std::vector<double>> columns;

    void write_csv(std::ostream& os) const;
    void write_svg(std::ostream& os, const std::string& title) const;
};

struct RunResult {
    int exit_code = kExitOk;
    std::string message;
    std::string csv;   // always populated on success
    std::string svg;   // populated for curve-producing commands
};

RunResult run_moments(const ExperimentConfig& config);
RunResult run_evaluate(const ExperimentConfig& config);
RunResult run_figure1(const ExperimentConfig& config);
RunResult run_figure2(const ExperimentConfig& config);
RunResult run_figure3(const ExperimentConfig& config);
RunResult run_korovkin(const ExperimentConfig& config);
RunResult run_rate(const ExperimentConfig& config);
RunResult run_density(const ExperimentConfig& config);

/// Dispatches on config.command, maps exceptions to exit codes, and writes
/// the requested artifact when output_path is set.
RunResult run(const ExperimentConfig& config);

}  // namespace qbask::cli

#endif
