#include "qbask/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

namespace qbask {

namespace {

bool needs_sub_unit_q(OperatorFamily f) {
    return f == OperatorFamily::QBaskakov || f == OperatorFamily::QBaskakovKantorovich ||
           f == OperatorFamily::WaveletQBaskakovKantorovich;
}

double binomial(int n, int k) {
    double prod = 1.0;
    for (int i = 1; i <= k; ++i) prod *= static_cast<double>(n - k + i) / i;
    return prod;
}

/// Walks the q-Baskakov basis B_{m,s,q}(x) for s = 0,1,2,... The weight is
/// tracked in log space; consecutive weights are related by
///   B_{s+1}/B_s = ([m+s]_q/[s+1]_q) * x * q^s / (1 + q^{m+s} x).
class BasisSweep {
public:
    BasisSweep(int m, double x, const QParam& q)
        : q_(q.value()),
          log_q_(std::log(q.value())),
          x_(x),
          log_x_(std::log(x)),
          qint_m_(q_integer(m, q)),
          qint_ms_(qint_m_),
          qpow_sm1_(1.0 / q.value()),
          qpow_ms_(std::pow(q.value(), m)),
          log_w_(-q_pochhammer_log(x, m, q)) {}

    int s() const { return s_; }
    double weight() const { return std::exp(log_w_); }
    double node() const {
        return s_ == 0 ? 0.0 : qint_s_ / (qpow_sm1_ * qint_m_);
    }
    double cell_lower() const { return q_ * qint_s_ / qint_m_; }
    double cell_upper() const { return (1.0 + q_ * qint_s_) / qint_m_; }
    double q_pow_s_minus_1() const { return qpow_sm1_; }

    void advance() {
        log_w_ += std::log(qint_ms_) - std::log(1.0 + q_ * qint_s_) + log_x_ +
                  s_ * log_q_ - std::log1p(qpow_ms_ * x_);
        qint_s_ = 1.0 + q_ * qint_s_;
        qint_ms_ = 1.0 + q_ * qint_ms_;
        qpow_sm1_ = qpow_s_;
        qpow_s_ *= q_;
        qpow_ms_ *= q_;
        ++s_;
    }

private:
    double q_;
    double log_q_;
    double x_;
    double log_x_;
    double qint_m_;
    int s_ = 0;
    double qint_s_ = 0.0;         // [s]_q
    double qint_ms_;              // [m+s]_q
    double qpow_s_ = 1.0;         // q^s
    double qpow_sm1_;             // q^{s-1}
    double qpow_ms_;              // q^{m+s}
    double log_w_;
};

std::size_t series_cap(int m, double x, const TruncationPolicy& policy) {
    double soft = 50.0 * m * (1.0 + std::ceil(x));
    auto cap = static_cast<std::size_t>(std::max(1000.0, soft));
    return std::min(cap, policy.max_terms);
}

void check_operator_args(const OperatorSpec& spec, OperatorFamily expected, double x) {
    if (spec.family != expected)
        throw std::invalid_argument("operator family does not match the entry point");
    if (x < 0.0) throw std::invalid_argument("operator evaluation requires x >= 0");
}

/// Sums per_term(sweep) over the basis. Stops once the cumulative weight has
/// reached 1 - tail_tol and the last few contributions are below tolerance.
template <typename TermFn>
double apply_basis_series(int m, double x, const QParam& q,
                          const TruncationPolicy& policy, TermFn&& per_term) {
    policy.validate();
    BasisSweep sweep(m, x, q);
    const std::size_t cap = series_cap(m, x, policy);
    double acc = 0.0;
    double cum_weight = 0.0;
    int quiet = 0;
    for (std::size_t n = 0; n < cap; ++n) {
        double w = sweep.weight();
        double term = per_term(sweep);
        acc += term;
        cum_weight += w;
        if (std::abs(term) <= policy.tail_tol * (1.0 + std::abs(acc)))
            ++quiet;
        else
            quiet = 0;
        if (cum_weight >= 1.0 - policy.tail_tol && quiet >= 3) return acc;
        sweep.advance();
    }
    throw NonConvergent("basis series hit its term cap above tolerance");
}

}  // namespace

OperatorSpec::OperatorSpec(OperatorFamily fam, int m, QParam qq, TruncationPolicy pol)
    : family(fam), degree(m), q(qq), policy(pol) {
    if (m < 1) throw std::invalid_argument("OperatorSpec: degree must be >= 1");
    if (needs_sub_unit_q(fam) && qq.super_unit())
        throw std::invalid_argument("OperatorSpec: this family requires q in (0,1]");
    policy.validate();
}

std::vector<BasisTerm> q_basis_terms(int m, double x, const QParam& q,
                                     const TruncationPolicy& policy) {
    policy.validate();
    if (m < 1) throw std::invalid_argument("q_basis_terms: m must be >= 1");
    if (x < 0.0) throw std::invalid_argument("q_basis_terms: requires x >= 0");
    if (q.super_unit()) throw std::invalid_argument("q_basis_terms: requires q in (0,1]");

    std::vector<BasisTerm> terms;
    BasisSweep sweep(m, x, q);
    const std::size_t cap = series_cap(m, x, policy);
    double cum_weight = 0.0;
    for (std::size_t n = 0; n < cap; ++n) {
        BasisTerm t;
        t.index = sweep.s();
        t.weight = sweep.weight();
        t.node = sweep.node();
        t.cell = QInterval(sweep.cell_lower(), sweep.cell_upper());
        terms.push_back(t);
        cum_weight += t.weight;
        if (cum_weight >= 1.0 - policy.tail_tol) return terms;
        sweep.advance();
    }
    throw NonConvergent("q_basis_terms: term cap reached below target weight");
}

double bernstein(const RealFn& g, int m, double x) {
    if (m < 1) throw std::invalid_argument("bernstein: m must be >= 1");
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("bernstein: requires x in [0,1]");
    double sum = 0.0;
    for (int s = 0; s <= m; ++s)
        sum += binomial(m, s) * std::pow(x, s) * std::pow(1.0 - x, m - s) *
               g(static_cast<double>(s) / m);
    return sum;
}

double bernstein_kantorovich(const RealFn& g, int m, double x) {
    if (m < 1) throw std::invalid_argument("bernstein_kantorovich: m must be >= 1");
    if (x < 0.0 || x > 1.0)
        throw std::invalid_argument("bernstein_kantorovich: requires x in [0,1]");
    double sum = 0.0;
    for (int s = 0; s <= m; ++s) {
        double lo = static_cast<double>(s) / (m + 1);
        double hi = static_cast<double>(s + 1) / (m + 1);
        sum += binomial(m, s) * std::pow(x, s) * std::pow(1.0 - x, m - s) *
               adaptive_simpson(g, lo, hi, 1e-10);
    }
    return (m + 1) * sum;
}

double baskakov_kantorovich(const RealFn& g, int m, double x,
                            const TruncationPolicy& policy) {
    policy.validate();
    if (m < 1) throw std::invalid_argument("baskakov_kantorovich: m must be >= 1");
    if (x < 0.0) throw std::invalid_argument("baskakov_kantorovich: requires x >= 0");
    double sum = 0.0;
    double cum_weight = 0.0;
    double w = std::pow(1.0 + x, -m);  // s = 0 weight
    const std::size_t cap = series_cap(m, x, policy);
    for (std::size_t s = 0; s < cap; ++s) {
        double lo = static_cast<double>(s) / m;
        double hi = static_cast<double>(s + 1) / m;
        sum += w * adaptive_simpson(g, lo, hi, 1e-10);
        cum_weight += w;
        if (cum_weight >= 1.0 - policy.tail_tol) return m * sum;
        w *= (static_cast<double>(m + s) / (s + 1)) * x / (1.0 + x);
    }
    throw NonConvergent("baskakov_kantorovich: term cap reached below target weight");
}

double q_baskakov(const RealFn& g, const OperatorSpec& spec, double x) {
    check_operator_args(spec, OperatorFamily::QBaskakov, x);
    return apply_basis_series(spec.degree, x, spec.q, spec.policy,
                              [&](const BasisSweep& sw) { return sw.weight() * g(sw.node()); });
}

double q_baskakov_kantorovich(const RealFn& g, const OperatorSpec& spec, double x) {
    check_operator_args(spec, OperatorFamily::QBaskakovKantorovich, x);
    const double qint_m = q_integer(spec.degree, spec.q);
    return apply_basis_series(
        spec.degree, x, spec.q, spec.policy, [&](const BasisSweep& sw) {
            double qpow = sw.q_pow_s_minus_1();
            QInterval cell(sw.cell_lower(), sw.cell_upper());
            double scale = 1.0 / qpow;  // q^{1-s}
            double integral = jackson_integral(
                [&](double t) { return g(scale * t); }, cell, spec.q, spec.policy);
            return qint_m * qpow * sw.weight() * integral;
        });
}

double wavelet_q_operator(const RealFn& g, const OperatorSpec& spec,
                          const Wavelet& wavelet, double x) {
    check_operator_args(spec, OperatorFamily::WaveletQBaskakovKantorovich, x);
    if (wavelet.kind != WaveletKind::Haar)
        throw std::invalid_argument("wavelet_q_operator: only the Haar kernel is supported");
    // Zeroth kernel moment over [0, xi] by Jackson quadrature (1 for Haar).
    // The kernel contract (unit zeroth q-moment, vanishing higher q-moments)
    // reduces each cell functional to mass * g(node): every other term of
    // g's expansion about the node integrates against a vanishing moment.
    const double mass = jackson_integral_0b([&](double t) { return wavelet(t); },
                                            wavelet.support_bound, spec.q, spec.policy);
    return apply_basis_series(
        spec.degree, x, spec.q, spec.policy,
        [&](const BasisSweep& sw) { return sw.weight() * mass * g(sw.node()); });
}

double moment_closed_form(int j, int m, const QParam& q, double x) {
    if (m < 1) throw std::invalid_argument("moment_closed_form: m must be >= 1");
    switch (j) {
        case 0: return 1.0;
        case 1: return x;
        case 2: return x * x + (x / q_integer(m, q)) * (1.0 + x / q.value());
        default: throw std::invalid_argument("moment_closed_form: j must be 0, 1, or 2");
    }
}

double second_central_moment(int m, const QParam& q, double x) {
    if (m < 1) throw std::invalid_argument("second_central_moment: m must be >= 1");
    const double qint_m = q_integer(m, q);
    return x * x / (q.value() * qint_m) + x / qint_m;
}

int grid_thread_count() {
    int n = 0;
    if (const char* env = std::getenv("QBASK_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 0 && v < 1024) n = static_cast<int>(v);
    }
    if (n == 0) n = static_cast<int>(std::thread::hardware_concurrency());
    return std::max(1, n);
}

std::vector<CurvePoint> operator_error_curve(const RealFn& g, const OperatorSpec& spec,
                                             const Wavelet& wavelet,
                                             const WeightedGrid& grid) {
    const std::vector<double> xs = grid.points();
    std::vector<CurvePoint> out(xs.size());

    auto eval_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            CurvePoint& p = out[i];
            p.x = xs[i];
            p.function_value = g(xs[i]);
            try {
                p.operator_value = wavelet_q_operator(g, spec, wavelet, xs[i]);
                p.abs_error = std::abs(p.operator_value - p.function_value);
            } catch (const NonConvergent& e) {
                p.operator_value = std::numeric_limits<double>::quiet_NaN();
                p.abs_error = std::numeric_limits<double>::quiet_NaN();
                p.diagnostic = e.what();
            }
        }
    };

    int threads = std::min<int>(grid_thread_count(), static_cast<int>(xs.size()));
    if (threads <= 1) {
        eval_range(0, xs.size());
    } else {
        std::vector<std::thread> pool;
        std::size_t chunk = (xs.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = t * chunk;
            std::size_t hi = std::min(xs.size(), lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(eval_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

}  // namespace qbask
