#ifndef QBASK_CONVERGENCE_HPP
#define QBASK_CONVERGENCE_HPP

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "qbask/operators.hpp"
#include "qbask/qcalc.hpp"
#include "qbask/weighted_grid.hpp"

namespace qbask {

/// Deformation sequence n -> q_n in (0,1].
struct QSequence {
    std::function<double(int)> generator;
    std::string description;

    double operator()(int n) const;

    /// q_n = 1 - 1/n for n >= 2 (0.5 at n = 1).
    static QSequence canonical();
    /// q_n = 1 - 1/(n ln(n+2)); q_n^n -> 1 in the ordinary limit.
    static QSequence slow_log();
    static QSequence constant(double q);
};

/// Subset of the positive integers with a finite evaluation window.
struct IndexSet {
    std::function<bool(long)> membership;
    long horizon = 0;

    static IndexSet all(long horizon);
    static IndexSet evens(long horizon);
    static IndexSet squares(long horizon);
    static IndexSet empty(long horizon);
};

enum class Verdict { Pass, Fail };

struct ConvergenceRow {
    long n = 0;
    double q_n = 0.0;
    double norm_e0 = 0.0;
    double norm_e1 = 0.0;
    double norm_e2 = 0.0;
    double bound = 0.0;           // 1/(q_n [n]) + 1/[n]
    double delta_n = 0.0;         // sqrt(1/(q_n [n]))
    double omega_at_delta = 0.0;
    // rate experiment extras
    double g_norm = std::numeric_limits<double>::quiet_NaN();
    double c_alpha = std::numeric_limits<double>::quiet_NaN();
    double rate_bound = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceReport {
    enum class Kind { Korovkin, Rate };

    Kind kind = Kind::Korovkin;
    std::vector<ConvergenceRow> rows;
    Verdict verdict = Verdict::Fail;
    double tolerance = 0.0;

    void write_csv(std::ostream& os) const;
};

double asymptotic_density(const IndexSet& set, long r);

/// sum_{k in K, k <= n} q^{k-1} / [n]_q for q >= 1; reduces to
/// asymptotic_density at q = 1.
double q_density(const IndexSet& set, long n, const QParam& q);

struct StatisticalLimitResult {
    double density_estimate = 0.0;
    bool verdict = false;
};

/// Finite-horizon estimate of (1/[n]) #{k <= n : q^{k-1}|eta_k - L| >= eps}.
/// Verdict: estimate below threshold at the horizon and non-increasing over
/// the last decade of n. An estimator of an asymptotic property, not a proof.
StatisticalLimitResult q_statistical_limit(const std::vector<double>& eta, double L,
                                           double eps, const QParam& q, long horizon,
                                           double threshold = 1e-3);

/// Grid lower estimate of sup |f(x)| / (1 + x^{2+alpha}).
double weighted_norm(const RealFn& f, const WeightedGrid& grid);

/// Grid lower estimate of sup_{x, 0 < i <= delta} |g(x+i) - g(x)| / (1 + (x+i)^{2+alpha}).
/// The i-lattice is {delta j / i_steps}; keep i_steps proportional to delta
/// across calls to make lattices nest.
double weighted_modulus(const RealFn& g, double delta, const WeightedGrid& grid,
                        int i_steps = 64);

struct KorovkinOptions {
    /// Stride for the operator-route cross check (closed forms run on every
    /// grid point, the operator itself on every stride-th point).
    int operator_check_stride = 80;
};

ConvergenceReport korovkin_harness(const QSequence& seq, const Wavelet& wavelet,
                                   const std::vector<int>& m_list, const WeightedGrid& grid,
                                   const KorovkinOptions& opts = {});

struct BoundPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Pointwise error bound: lhs = |S g(x) - g(x)|, rhs the product of the
/// operator's weighted second moments with the modulus at delta.
BoundPair pointwise_error_bound(const RealFn& g, const OperatorSpec& spec, double x,
                          double delta, const WeightedGrid& grid);

/// delta_n = sqrt(1/(q_n [n]_{q_n})).
double rate_delta(int n, const QSequence& seq);

ConvergenceReport rate_experiment(const RealFn& g, const QSequence& seq,
                                  const std::vector<int>& n_list, const WeightedGrid& grid,
                                  double c_alpha = 0.0);

}  // namespace qbask

#endif
