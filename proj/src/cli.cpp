#include "qbask/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qbask/expr.hpp"

namespace qbask::cli {

namespace {

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<double> linspace(const QInterval& domain, int n) {
    if (n < 2) throw std::invalid_argument("grid_points must be >= 2");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = domain.lower + (domain.upper - domain.lower) * i / (n - 1);
    return xs;
}

RealFn resolve_function(const ExperimentConfig& config, RealFn fallback) {
    if (config.function_text.empty()) return fallback;
    return Expression::parse(config.function_text).fn();
}

std::vector<double> eval_curve(const RealFn& g, const OperatorSpec& spec,
                               const std::vector<double>& xs) {
    const Wavelet haar = Wavelet::haar();
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        out[i] = wavelet_q_operator(g, spec, haar, xs[i]);
    return out;
}

double max_abs_error(const std::vector<double>& approx, const std::vector<double>& exact) {
    double worst = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i)
        worst = std::max(worst, std::abs(approx[i] - exact[i]));
    return worst;
}

std::string report_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    report.write_csv(os);
    return os.str();
}

struct FigureSetup {
    RealFn g;
    std::vector<double> xs;
    std::vector<double> gx;
    CurveTable table;
};

FigureSetup figure_setup(const ExperimentConfig& config, RealFn default_g,
                         const char* g_label) {
    FigureSetup s;
    s.g = resolve_function(config, std::move(default_g));
    s.xs = linspace(config.domain, config.grid_points);
    s.gx.reserve(s.xs.size());
    for (double x : s.xs) s.gx.push_back(s.g(x));
    s.table.xs = s.xs;
    s.table.labels.push_back(g_label);
    s.table.columns.push_back(s.gx);
    return s;
}

}  // namespace

void CurveTable::write_csv(std::ostream& os) const {
    os << "x";
    for (const auto& label : labels) os << ',' << label;
    os << '\n';
    for (std::size_t i = 0; i < xs.size(); ++i) {
        os << num17(xs[i]);
        for (const auto& col : columns) os << ',' << num17(col[i]);
        os << '\n';
    }
}

void CurveTable::write_svg(std::ostream& os, const std::string& title) const {
    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                     "#9467bd", "#ff7f0e", "#8c564b"};
    const int width = 800, height = 560;
    const int ml = 70, mr = 160, mt = 40, mb = 50;

    double x_lo = xs.front(), x_hi = xs.back();
    double y_lo = 0.0, y_hi = 1.0;
    bool seeded = false;
    for (const auto& col : columns)
        for (double v : col) {
            if (std::isnan(v)) continue;
            if (!seeded) {
                y_lo = y_hi = v;
                seeded = true;
            } else {
                y_lo = std::min(y_lo, v);
                y_hi = std::max(y_hi, v);
            }
        }
    if (y_hi == y_lo) y_hi = y_lo + 1.0;

    auto px = [&](double x) {
        return ml + (x - x_lo) / (x_hi - x_lo) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (y - y_lo) / (y_hi - y_lo) * (height - mt - mb);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\">\n";
    os << "<text x=\"" << ml << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
       << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << height - mb << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        double xv = x_lo + (x_hi - x_lo) * t / 4;
        double yv = y_lo + (y_hi - y_lo) * t / 4;
        os << "<text x=\"" << num6(px(xv)) << "\" y=\"" << height - mb + 18
           << "\" font-size=\"11\" text-anchor=\"middle\">" << num6(xv) << "</text>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << num6(py(yv) + 4)
           << "\" font-size=\"11\" text-anchor=\"end\">" << num6(yv) << "</text>\n";
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const char* color = kPalette[c % 6];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (std::isnan(columns[c][i])) continue;
            os << num6(px(xs[i])) << ',' << num6(py(columns[c][i])) << ' ';
        }
        os << "\"/>\n";
        int ly = mt + 16 * static_cast<int>(c);
        os << "<line x1=\"" << width - mr + 10 << "\" y1=\"" << ly << "\" x2=\""
           << width - mr + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\"/>\n";
        os << "<text x=\"" << width - mr + 40 << "\" y=\"" << ly + 4
           << "\" font-size=\"11\">" << labels[c] << "</text>\n";
    }
    os << "</svg>\n";
}

RunResult run_moments(const ExperimentConfig& config) {
    std::vector<int> ms = config.m_values.empty()
                              ? std::vector<int>{2, 5, 10, 20, 50}
                              : config.m_values;
    std::vector<double> qs = config.q_values.empty()
                                 ? std::vector<double>{0.8, 0.9, 0.95, 1.0}
                                 : config.q_values;
    std::vector<double> xs = {0.0, 0.25, 0.5, 1.0, 2.0};
    const Wavelet haar = Wavelet::haar();
    const double tol = 1e-8;

    RunResult res;
    std::ostringstream os;
    os << "j,m,q,x,operator,closed_form,residual\n";
    double worst = 0.0;
    std::string worst_at;
    for (int m : ms) {
        for (double qv : qs) {
            QParam q(qv);
            OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, m, q,
                              config.policy);
            for (int j = 0; j <= 2; ++j) {
                auto ej = [j](double t) { return std::pow(t, j); };
                for (double x : xs) {
                    double sv = wavelet_q_operator(ej, spec, haar, x);
                    double cf = moment_closed_form(j, m, q, x);
                    double r = std::abs(sv - cf);
                    os << j << ',' << m << ',' << num17(qv) << ',' << num17(x) << ','
                       << num17(sv) << ',' << num17(cf) << ',' << num17(r) << '\n';
                    if (r > worst) {
                        worst = r;
                        worst_at = "j=" + std::to_string(j) + " m=" + std::to_string(m) +
                                   " q=" + num6(qv) + " x=" + num6(x);
                    }
                }
            }
            if (q.unit()) {
                // classical reduction cross check
                OperatorSpec tspec(OperatorFamily::QBaskakovKantorovich, m, q,
                                   config.policy);
                for (int j = 0; j <= 2; ++j) {
                    auto ej = [j](double t) { return std::pow(t, j); };
                    for (double x : xs) {
                        double tv = q_baskakov_kantorovich(ej, tspec, x);
                        double kv = baskakov_kantorovich(ej, m, x, config.policy);
                        if (std::abs(tv - kv) > worst) {
                            worst = std::abs(tv - kv);
                            worst_at = "classical reduction j=" + std::to_string(j) +
                                       " m=" + std::to_string(m) + " x=" + num6(x);
                        }
                    }
                }
            }
        }
    }
    res.csv = os.str();
    if (worst > tol) {
        res.exit_code = kExitAssertion;
        res.message = "moment residual " + num6(worst) + " above 1e-8 at " + worst_at;
    } else {
        res.message = "all moment residuals below 1e-8 (worst " + num6(worst) + ")";
    }
    return res;
}

RunResult run_evaluate(const ExperimentConfig& config) {
    auto setup = figure_setup(config, [](double x) { return x; }, "g");
    std::vector<int> ms = config.m_values.empty() ? std::vector<int>{10} : config.m_values;
    double qv = config.q_values.empty() ? 0.95 : config.q_values.front();
    for (int m : ms) {
        OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, m, QParam(qv),
                          config.policy);
        setup.table.labels.push_back("S[m=" + std::to_string(m) + ",q=" + num6(qv) + "]");
        setup.table.columns.push_back(eval_curve(setup.g, spec, setup.xs));
    }
    RunResult res;
    std::ostringstream csv, svg;
    setup.table.write_csv(csv);
    setup.table.write_svg(svg, "operator curves, q=" + num6(qv));
    res.csv = csv.str();
    res.svg = svg.str();
    return res;
}

namespace {

/// Shared body of the figure-1/figure-2 experiments: one operator series per
/// degree at a fixed q, with a monotone-improvement check across degrees.
RunResult run_degree_sweep(const ExperimentConfig& config, RealFn default_g,
                           std::vector<int> default_m, double default_q,
                           const char* title, bool check_q1_closed_form) {
    auto setup = figure_setup(config, std::move(default_g), "g");
    std::vector<int> ms = config.m_values.empty() ? default_m : config.m_values;
    double qv = config.q_values.empty() ? default_q : config.q_values.front();

    RunResult res;
    std::vector<double> max_errors;
    for (int m : ms) {
        QParam q(qv);
        OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, m, q, config.policy);
        auto curve = eval_curve(setup.g, spec, setup.xs);
        if (check_q1_closed_form) {
            for (std::size_t i = 0; i < setup.xs.size(); ++i) {
                double x = setup.xs[i];
                double expected = x * x / m + x / m;  // q = 1 closed form
                if (std::abs(std::abs(curve[i] - setup.gx[i]) - expected) > 1e-8) {
                    res.exit_code = kExitAssertion;
                    res.message = "pointwise error deviates from x^2/m + x/m at x=" +
                                  num6(x) + ", m=" + std::to_string(m);
                }
            }
        }
        max_errors.push_back(max_abs_error(curve, setup.gx));
        setup.table.labels.push_back("S[m=" + std::to_string(m) + ",q=" + num6(qv) + "]");
        setup.table.columns.push_back(std::move(curve));
    }
    for (std::size_t i = 1; i < max_errors.size(); ++i) {
        if (!(max_errors[i] < max_errors[i - 1])) {
            res.exit_code = kExitAssertion;
            res.message = "max error not strictly decreasing: m=" + std::to_string(ms[i]) +
                          " gives " + num6(max_errors[i]) + " vs " +
                          num6(max_errors[i - 1]) + " at m=" + std::to_string(ms[i - 1]);
        }
    }
    if (res.exit_code == kExitOk)
        res.message = "max errors decrease across degrees";

    std::ostringstream csv, svg;
    setup.table.write_csv(csv);
    setup.table.write_svg(svg, title);
    res.csv = csv.str();
    res.svg = svg.str();
    return res;
}

}  // namespace

RunResult run_figure1(const ExperimentConfig& config) {
    return run_degree_sweep(
        config, [](double x) { return (x - 0.2) * (x - 4.0 / 9.0); }, {10, 30, 80}, 0.95,
        "convergence for g(x) = (x-1/5)(x-4/9), q = 0.95", false);
}

RunResult run_figure2(const ExperimentConfig& config) {
    return run_degree_sweep(
        config, [](double x) { return x * x - 1.0; }, {10, 30, 60}, 1.0,
        "convergence for g(x) = x^2-1, q = 1", true);
}

RunResult run_figure3(const ExperimentConfig& config) {
    ExperimentConfig cfg = config;
    if (cfg.domain.lower == 0.0 && cfg.domain.upper == 1.0) cfg.domain = QInterval(0.0, 4.0);
    auto setup = figure_setup(cfg, [](double x) { return x * x - 4.0 * x + 3.0; }, "f");
    int m = cfg.m_values.empty() ? 50 : cfg.m_values.front();
    std::vector<double> qs = cfg.q_values.empty()
                                 ? std::vector<double>{0.5, 0.7, 0.9, 0.99}
                                 : cfg.q_values;

    RunResult res;
    std::vector<double> mid_errors;
    for (double qv : qs) {
        QParam q(qv);
        OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, m, q, cfg.policy);
        auto curve = eval_curve(setup.g, spec, setup.xs);
        const double qint_m = q_integer(m, q);
        for (std::size_t i = 0; i < setup.xs.size(); ++i) {
            double x = setup.xs[i];
            double expected = x * x / (qv * qint_m) + x / qint_m;
            if (std::abs(std::abs(curve[i] - setup.gx[i]) - expected) > 1e-8) {
                res.exit_code = kExitAssertion;
                res.message = "pointwise error deviates from closed form at x=" + num6(x) +
                              ", q=" + num6(qv);
            }
        }
        mid_errors.push_back(
            std::abs(curve[curve.size() / 2] - setup.gx[curve.size() / 2]));
        setup.table.labels.push_back("S[m=" + std::to_string(m) + ",q=" + num6(qv) + "]");
        setup.table.columns.push_back(std::move(curve));
    }
    // error at fixed x shrinks as q [m]_q grows with q
    for (std::size_t i = 1; i < qs.size(); ++i) {
        double prev = qs[i - 1] * q_integer(m, QParam(qs[i - 1]));
        double cur = qs[i] * q_integer(m, QParam(qs[i]));
        if (cur > prev && !(mid_errors[i] < mid_errors[i - 1])) {
            res.exit_code = kExitAssertion;
            res.message = "mid-domain error not decreasing from q=" + num6(qs[i - 1]) +
                          " to q=" + num6(qs[i]);
        }
    }
    if (res.exit_code == kExitOk)
        res.message = "errors match the closed form and shrink with growing q[m]_q";

    std::ostringstream csv, svg;
    setup.table.write_csv(csv);
    setup.table.write_svg(svg, "convergence for f(x) = x^2-4x+3, m = " + std::to_string(m));
    res.csv = csv.str();
    res.svg = svg.str();
    return res;
}

RunResult run_korovkin(const ExperimentConfig& config) {
    std::vector<int> ns = config.n_list;
    if (ns.empty())
        for (int n = 10; n <= 200; n += 10) ns.push_back(n);
    WeightedGrid grid(config.norm_x_max, config.norm_points, config.alpha);
    auto report = korovkin_harness(QSequence::canonical(), Wavelet::haar(), ns, grid);

    RunResult res;
    res.csv = report_csv(report);
    if (report.verdict != Verdict::Pass) {
        res.exit_code = kExitAssertion;
        for (const auto& row : report.rows) {
            if (row.norm_e0 > 1e-10 || row.norm_e1 > 1e-10 ||
                row.norm_e2 > row.bound + report.tolerance) {
                res.message = "bound violated at n=" + std::to_string(row.n);
                break;
            }
        }
    } else {
        res.message = "all rows within the Korovkin bound";
    }
    return res;
}

RunResult run_rate(const ExperimentConfig& config) {
    std::vector<int> ns =
        config.n_list.empty() ? std::vector<int>{10, 20, 40, 80} : config.n_list;
    RealFn g = resolve_function(config, [](double x) { return x * x; });
    WeightedGrid grid(config.norm_x_max, config.norm_points, config.alpha);
    auto report = rate_experiment(g, QSequence::canonical(), ns, grid);

    RunResult res;
    res.csv = report_csv(report);
    if (report.verdict != Verdict::Pass) {
        res.exit_code = kExitAssertion;
        for (const auto& row : report.rows)
            if (row.g_norm > row.rate_bound) {
                res.message = "rate bound violated at n=" + std::to_string(row.n);
                break;
            }
        if (res.message.empty()) res.message = "error or modulus column not settling";
    } else {
        res.message = "weighted errors within 3 C_alpha omega(g; delta_n)";
    }
    return res;
}

RunResult run_density(const ExperimentConfig& config) {
    double qv = config.q_values.empty() ? 1.0 : config.q_values.front();
    if (qv < 1.0)
        throw std::invalid_argument("density: q must be >= 1");
    QParam q(qv);
    long horizon = config.horizon;

    IndexSet set = IndexSet::evens(horizon);
    double expected = 0.5;
    bool expect_null = false;
    if (config.set_name == "evens") {
        // defaults above
    } else if (config.set_name == "all") {
        set = IndexSet::all(horizon);
        expected = 1.0;
    } else if (config.set_name == "squares") {
        set = IndexSet::squares(horizon);
        expect_null = true;
    } else if (config.set_name == "empty") {
        set = IndexSet::empty(horizon);
        expected = 0.0;
    } else {
        throw std::invalid_argument("density: unknown set '" + config.set_name + "'");
    }

    RunResult res;
    std::ostringstream os;
    os << "n,density\n";
    double final_density = 0.0;
    for (int i = 1; i <= 10; ++i) {
        long n = std::max<long>(1, horizon * i / 10);
        final_density = q_density(set, n, q);
        os << n << ',' << num17(final_density) << '\n';
    }
    res.csv = os.str();

    bool ok;
    if (expect_null)
        ok = final_density <= 2.0 / std::sqrt(static_cast<double>(horizon));
    else if (q.unit())
        ok = std::abs(final_density - expected) <= 1e-3;
    else
        ok = final_density >= 0.0 && final_density <= 1.0;
    if (!ok) {
        res.exit_code = kExitAssertion;
        res.message = "density " + num6(final_density) + " outside the expected range";
    } else {
        res.message = "density " + num6(final_density) + " as expected";
    }
    return res;
}

RunResult run(const ExperimentConfig& config) {
    RunResult res;
    try {
        switch (config.command) {
            case Command::Moments: res = run_moments(config); break;
            case Command::Evaluate: res = run_evaluate(config); break;
            case Command::Figure1: res = run_figure1(config); break;
            case Command::Figure2: res = run_figure2(config); break;
            case Command::Figure3: res = run_figure3(config); break;
            case Command::Korovkin: res = run_korovkin(config); break;
            case Command::Rate: res = run_rate(config); break;
            case Command::Density: res = run_density(config); break;
        }
    } catch (const NonConvergent& e) {
        res.exit_code = kExitNonConvergent;
        res.message = e.what();
        return res;
    } catch (const std::invalid_argument& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
        return res;
    } catch (const ExprError& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
        return res;
    }

    if (!config.output_path.empty()) {
        const std::string& payload =
            config.format == OutputFormat::Svg ? res.svg : res.csv;
        if (payload.empty()) {
            res.exit_code = kExitConfig;
            res.message = "svg output is only available for curve commands";
            return res;
        }
        std::ofstream out(config.output_path, std::ios::binary);
        if (!out) {
            res.exit_code = kExitConfig;
            res.message = "cannot open output file: " + config.output_path;
            return res;
        }
        out << payload;
    }
    return res;
}

}  // namespace qbask::cli
