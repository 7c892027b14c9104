#ifndef QBASK_QCALC_HPP
#define QBASK_QCALC_HPP

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace qbask {

/// Thrown when a truncated series hits its term cap before meeting the
/// tail tolerance.
class NonConvergent : public std::runtime_error {
public:
    explicit NonConvergent(const std::string& what) : std::runtime_error(what) {}
};

enum class Regime { SubUnit, Unit, SuperUnit };

/// Validated deformation parameter q > 0.
class QParam {
public:
    explicit QParam(double q);

    double value() const { return q_; }
    Regime regime() const { return regime_; }

    bool sub_unit() const { return regime_ == Regime::SubUnit; }
    bool unit() const { return regime_ == Regime::Unit; }
    bool super_unit() const { return regime_ == Regime::SuperUnit; }

private:
    double q_;
    Regime regime_;
};

/// Cutoff contract for every infinite series and Jackson integral.
struct TruncationPolicy {
    double tail_tol = 1e-12;       // relative
    std::size_t max_terms = 100000;

    void validate() const;
};

/// Interval [lower, upper] with 0 <= lower <= upper.
struct QInterval {
    double lower = 0.0;
    double upper = 0.0;

    QInterval() = default;
    QInterval(double lo, double hi);

    double length() const { return upper - lower; }
};

using RealFn = std::function<double(double)>;

double q_integer(int m, const QParam& q);
double q_factorial(int m, const QParam& q);

/// Strict [m choose k]_q; rejects k < 0 and k > m.
double q_binomial(int m, int k, const QParam& q);

/// Product form prod_{i=1..k} [m+k-i]_q / [i]_q == [m+k-1 choose k]_q.
/// Total in k; this is the top index shape the Baskakov basis needs.
double q_binomial_product(int m, int k, const QParam& q);

/// (1+x)(1+qx)...(1+q^{m-1}x); 1 for m = 0.
double q_pochhammer(double x, int m, const QParam& q);

/// log of q_pochhammer, requires x >= 0.
double q_pochhammer_log(double x, int m, const QParam& q);

/// Log-domain evaluation of q_pochhammer, exponentiated at the end.
double q_pochhammer_limit(double x, int m, const QParam& q);

/// sum_{k=0..m} [m choose k]_q q^{k(k-1)/2} a^k x^{m-k}; equals the
/// product prod_{i=0..m-1} (x + q^i a). Cross-check oracle only.
double gauss_binomial_expand(double x, double a, int m, const QParam& q);

/// (g(x) - g(qx)) / ((1-q)x). Rejects x = 0. At q = 1 falls back to a
/// central finite difference with step 1e-6.
double q_derivative(const RealFn& f, double x, const QParam& q);

/// Jackson integral over [0,b]: (1-q) b sum_{n>=0} q^n f(q^n b).
/// At q = 1 (and within 1e-9 of it, where the lattice sum would need
/// ~1/(1-q) terms) falls back to adaptive Simpson quadrature.
double jackson_integral_0b(const RealFn& f, double b, const QParam& q,
                           const TruncationPolicy& policy);

/// Jackson integral over a cell, as the difference of two [0,.] integrals.
double jackson_integral(const RealFn& f, const QInterval& cell, const QParam& q,
                        const TruncationPolicy& policy);

/// Adaptive composite Simpson on [a,b].
double adaptive_simpson(const RealFn& f, double a, double b, double tol);

}  // namespace qbask

#endif
