#include "qbask/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace qbask {

namespace {

std::string csv_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double rho(double x, double alpha) { return 1.0 + std::pow(x, 2.0 + alpha); }

}  // namespace

double QSequence::operator()(int n) const {
    if (n < 1) throw std::invalid_argument("QSequence: n must be >= 1");
    double v = generator(n);
    if (!(v > 0.0 && v <= 1.0))
        throw std::invalid_argument("QSequence: q_n must lie in (0,1]");
    return v;
}

QSequence QSequence::canonical() {
    return {[](int n) { return n < 2 ? 0.5 : 1.0 - 1.0 / n; }, "q_n = 1 - 1/n"};
}

QSequence QSequence::slow_log() {
    return {[](int n) { return 1.0 - 1.0 / (n * std::log(n + 2.0)); },
            "q_n = 1 - 1/(n ln(n+2))"};
}

QSequence QSequence::constant(double q) {
    if (!(q > 0.0 && q <= 1.0))
        throw std::invalid_argument("QSequence::constant: q must lie in (0,1]");
    return {[q](int) { return q; }, "q_n = " + csv_num(q)};
}

IndexSet IndexSet::all(long horizon) {
    return {[](long) { return true; }, horizon};
}

IndexSet IndexSet::evens(long horizon) {
    return {[](long k) { return k % 2 == 0; }, horizon};
}

IndexSet IndexSet::squares(long horizon) {
    return {[](long k) {
                long r = std::lround(std::sqrt(static_cast<double>(k)));
                return r * r == k;
            },
            horizon};
}

IndexSet IndexSet::empty(long horizon) {
    return {[](long) { return false; }, horizon};
}

double asymptotic_density(const IndexSet& set, long r) {
    if (r < 1) throw std::invalid_argument("asymptotic_density: r must be >= 1");
    if (r > set.horizon)
        throw std::invalid_argument("asymptotic_density: r exceeds the horizon");
    long count = 0;
    for (long k = 1; k <= r; ++k)
        if (set.membership(k)) ++count;
    return static_cast<double>(count) / r;
}

double q_density(const IndexSet& set, long n, const QParam& q) {
    if (q.sub_unit()) throw std::invalid_argument("q_density: requires q >= 1");
    if (n < 1) throw std::invalid_argument("q_density: n must be >= 1");
    if (n > set.horizon) throw std::invalid_argument("q_density: n exceeds the horizon");
    if (q.unit()) return asymptotic_density(set, n);

    // q^{k-1}/[n]_q = (q-1) q^{k-1-n} / (1 - q^{-n}); all exponents <= 0.
    const double qv = q.value();
    double sum = 0.0;
    double w = 1.0 / qv;  // q^{k-1-n} at k = n
    for (long k = n; k >= 1; --k) {
        if (set.membership(k)) sum += w;
        w /= qv;
    }
    return sum * (qv - 1.0) / (1.0 - std::pow(qv, -static_cast<double>(n)));
}

StatisticalLimitResult q_statistical_limit(const std::vector<double>& eta, double L,
                                           double eps, const QParam& q, long horizon,
                                           double threshold) {
    if (!(eps > 0.0)) throw std::invalid_argument("q_statistical_limit: eps must be > 0");
    if (q.sub_unit())
        throw std::invalid_argument("q_statistical_limit: requires q >= 1");
    if (horizon < 1 || static_cast<std::size_t>(horizon) > eta.size())
        throw std::invalid_argument("q_statistical_limit: eta shorter than horizon");

    const double log_q = std::log(q.value());
    const double log_eps = std::log(eps);
    auto exceeds = [&](long k) {
        double dev = std::abs(eta[static_cast<std::size_t>(k - 1)] - L);
        if (dev == 0.0) return false;
        return (k - 1) * log_q + std::log(dev) >= log_eps;
    };
    auto estimate_at = [&](long n) {
        long count = 0;
        for (long k = 1; k <= n; ++k)
            if (exceeds(k)) ++count;
        double qn = q.unit() ? static_cast<double>(n)
                             : (std::pow(q.value(), n) - 1.0) / (q.value() - 1.0);
        if (!std::isfinite(qn)) return 0.0;
        return static_cast<double>(count) / qn;
    };

    StatisticalLimitResult res;
    res.density_estimate = estimate_at(horizon);
    double decade_start = estimate_at(std::max<long>(1, horizon / 10));
    res.verdict = res.density_estimate <= threshold &&
                  res.density_estimate <= decade_start + 1e-15;
    return res;
}

double weighted_norm(const RealFn& f, const WeightedGrid& grid) {
    double best = 0.0;
    for (double x : grid.points())
        best = std::max(best, std::abs(f(x)) / grid.weight(x));
    return best;
}

double weighted_modulus(const RealFn& g, double delta, const WeightedGrid& grid,
                        int i_steps) {
    if (!(delta > 0.0)) throw std::invalid_argument("weighted_modulus: delta must be > 0");
    if (i_steps < 2) throw std::invalid_argument("weighted_modulus: i_steps must be >= 2");
    double best = 0.0;
    for (double x : grid.points()) {
        double gx = g(x);
        for (int j = 1; j <= i_steps; ++j) {
            double i = delta * j / i_steps;
            best = std::max(best, std::abs(g(x + i) - gx) / rho(x + i, grid.alpha));
        }
    }
    return best;
}

ConvergenceReport korovkin_harness(const QSequence& seq, const Wavelet& wavelet,
                                   const std::vector<int>& m_list, const WeightedGrid& grid,
                                   const KorovkinOptions& opts) {
    if (m_list.empty())
        throw std::invalid_argument("korovkin_harness: m_list must be nonempty");

    ConvergenceReport report;
    report.kind = ConvergenceReport::Kind::Korovkin;
    report.tolerance = 1e-8;

    const std::vector<double> xs = grid.points();
    const int stride = std::max(1, opts.operator_check_stride);
    bool pass = true;

    for (int n : m_list) {
        QParam q(seq(n));
        ConvergenceRow row;
        row.n = n;
        row.q_n = q.value();
        const double qint_n = q_integer(n, q);
        row.bound = 1.0 / (q.value() * qint_n) + 1.0 / qint_n;
        row.delta_n = std::sqrt(1.0 / (q.value() * qint_n));

        // closed-form route on the full grid
        double norms[3] = {0.0, 0.0, 0.0};
        for (double x : xs) {
            for (int j = 0; j < 3; ++j) {
                double diff = moment_closed_form(j, n, q, x) - std::pow(x, j);
                norms[j] = std::max(norms[j], std::abs(diff) / rho(x, grid.alpha));
            }
        }

        // operator route on a subsampled grid, checked against the closed forms
        OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, n, q);
        for (std::size_t i = 0; i < xs.size(); i += stride) {
            double x = xs[i];
            for (int j = 0; j < 3; ++j) {
                auto ej = [j](double t) { return std::pow(t, j); };
                double sv = wavelet_q_operator(ej, spec, wavelet, x);
                double cf = moment_closed_form(j, n, q, x);
                if (std::abs(sv - cf) > report.tolerance * (1.0 + std::abs(cf)))
                    pass = false;
                norms[j] = std::max(norms[j],
                                    std::abs(sv - std::pow(x, j)) / rho(x, grid.alpha));
            }
        }

        row.norm_e0 = norms[0];
        row.norm_e1 = norms[1];
        row.norm_e2 = norms[2];
        row.omega_at_delta =
            weighted_modulus([](double t) { return t * t; }, row.delta_n, grid);

        if (row.norm_e0 > 1e-10 || row.norm_e1 > 1e-10 ||
            row.norm_e2 > row.bound + report.tolerance)
            pass = false;
        report.rows.push_back(row);
    }
    report.verdict = pass ? Verdict::Pass : Verdict::Fail;
    return report;
}

BoundPair pointwise_error_bound(const RealFn& g, const OperatorSpec& spec, double x,
                          double delta, const WeightedGrid& grid) {
    if (!(delta > 0.0)) throw std::invalid_argument("pointwise_error_bound: delta must be > 0");
    const Wavelet haar = Wavelet::haar();
    const double alpha = grid.alpha;

    BoundPair out;
    out.lhs = std::abs(wavelet_q_operator(g, spec, haar, x) - g(x));

    auto mu_sq = [x, alpha](double y) {
        double m = 1.0 + std::pow(x + std::abs(y - x), 2.0 + alpha);
        return m * m;
    };
    double s_mu2 = wavelet_q_operator(mu_sq, spec, haar, x);
    double s_phi2 = second_central_moment(spec.degree, spec.q, x);
    double omega = weighted_modulus(g, delta, grid);
    out.rhs = std::sqrt(s_mu2) * (1.0 + std::sqrt(s_phi2) / delta) * omega;
    return out;
}

double rate_delta(int n, const QSequence& seq) {
    QParam q(seq(n));
    return std::sqrt(1.0 / (q.value() * q_integer(n, q)));
}

ConvergenceReport rate_experiment(const RealFn& g, const QSequence& seq,
                                  const std::vector<int>& n_list, const WeightedGrid& grid,
                                  double c_alpha) {
    if (n_list.empty())
        throw std::invalid_argument("rate_experiment: n_list must be nonempty");

    ConvergenceReport report;
    report.kind = ConvergenceReport::Kind::Rate;
    report.tolerance = 1e-8;
    const Wavelet haar = Wavelet::haar();
    bool pass = true;

    for (int n : n_list) {
        QParam q(seq(n));
        ConvergenceRow row;
        row.n = n;
        row.q_n = q.value();
        const double qint_n = q_integer(n, q);
        row.bound = 1.0 / (q.value() * qint_n) + 1.0 / qint_n;
        row.delta_n = std::sqrt(1.0 / (q.value() * qint_n));

        OperatorSpec spec(OperatorFamily::WaveletQBaskakovKantorovich, n, q);
        auto curve = operator_error_curve(g, spec, haar, grid);
        double norm = 0.0;
        for (const auto& p : curve) {
            if (!p.diagnostic.empty()) {
                pass = false;
                continue;
            }
            norm = std::max(norm, p.abs_error / rho(p.x, grid.alpha));
        }
        row.g_norm = norm;
        row.omega_at_delta = weighted_modulus(g, row.delta_n, grid);

        if (c_alpha > 0.0) {
            row.c_alpha = c_alpha;
        } else {
            // grid sup of S(mu_{x,alpha}^2; x) / rho_alpha(x), subsampled
            double best = 0.0;
            const std::vector<double> xs = grid.points();
            for (std::size_t i = 0; i < xs.size(); i += 10) {
                double x = xs[i];
                auto mu_sq = [x, a = grid.alpha](double y) {
                    double m = 1.0 + std::pow(x + std::abs(y - x), 2.0 + a);
                    return m * m;
                };
                double v = wavelet_q_operator(mu_sq, spec, haar, x) / rho(x, grid.alpha);
                best = std::max(best, v);
            }
            row.c_alpha = best;
        }
        row.rate_bound = 3.0 * row.c_alpha * row.omega_at_delta;
        if (row.g_norm > row.rate_bound) pass = false;
        report.rows.push_back(row);
    }

    // both error and modulus columns must settle monotonically in the tail
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        if (report.rows[i].g_norm > report.rows[i - 1].g_norm + 1e-12) pass = false;
        if (report.rows[i].omega_at_delta > report.rows[i - 1].omega_at_delta + 1e-12)
            pass = false;
    }
    report.verdict = pass ? Verdict::Pass : Verdict::Fail;
    return report;
}

void ConvergenceReport::write_csv(std::ostream& os) const {
    if (kind == Kind::Korovkin) {
        os << "n,q_n,norm_e0,norm_e1,norm_e2,bound,delta_n,omega_at_delta\n";
        for (const auto& r : rows)
            os << r.n << ',' << csv_num(r.q_n) << ',' << csv_num(r.norm_e0) << ','
               << csv_num(r.norm_e1) << ',' << csv_num(r.norm_e2) << ','
               << csv_num(r.bound) << ',' << csv_num(r.delta_n) << ','
               << csv_num(r.omega_at_delta) << '\n';
    } else {
        os << "n,q_n,g_norm,delta_n,omega_at_delta,c_alpha,rate_bound\n";
        for (const auto& r : rows)
            os << r.n << ',' << csv_num(r.q_n) << ',' << csv_num(r.g_norm) << ','
               << csv_num(r.delta_n) << ',' << csv_num(r.omega_at_delta) << ','
               << csv_num(r.c_alpha) << ',' << csv_num(r.rate_bound) << '\n';
    }
}

}  // namespace qbask
