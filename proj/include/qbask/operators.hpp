#ifndef QBASK_OPERATORS_HPP
#define QBASK_OPERATORS_HPP

#include <string>
#include <vector>

#include "qbask/qcalc.hpp"
#include "qbask/weighted_grid.hpp"

namespace qbask {

enum class OperatorFamily {
    Bernstein,
    BernsteinKantorovich,
    Baskakov,
    BaskakovKantorovich,
    QBaskakov,
    QBaskakovKantorovich,
    WaveletQBaskakovKantorovich,
};

/// One operator family instance: degree m, deformation q, series cutoff.
struct OperatorSpec {
    OperatorFamily family;
    int degree;
    QParam q;
    TruncationPolicy policy;

    OperatorSpec(OperatorFamily fam, int m, QParam qq, TruncationPolicy pol = {});
};

/// One term of the q-Baskakov basis: weight B_{m,s,q}(x), its sample node
/// [s]_q/(q^{s-1}[m]_q), and the Kantorovich cell [q[s]_q/[m]_q, [s+1]_q/[m]_q].
struct BasisTerm {
    int index = 0;
    double weight = 0.0;
    double node = 0.0;
    QInterval cell;
};

enum class WaveletKind { Haar };

/// Compactly supported kernel on [0, xi] with its first `vanishing_moments`
/// q-moments assumed zero and unit zeroth q-moment.
struct Wavelet {
    WaveletKind kind = WaveletKind::Haar;
    double support_bound = 1.0;  // xi
    int vanishing_moments = 0;

    static Wavelet haar() { return Wavelet{}; }

    /// Haar: 1 on [0,1], 0 elsewhere. The closed right endpoint keeps the
    /// Jackson mass over [0,1] exactly 1 on the q-lattice.
    double operator()(double t) const { return (t >= 0.0 && t <= support_bound) ? 1.0 : 0.0; }
};

std::vector<BasisTerm> q_basis_terms(int m, double x, const QParam& q,
                                     const TruncationPolicy& policy);

double bernstein(const RealFn& g, int m, double x);
double bernstein_kantorovich(const RealFn& g, int m, double x);
double baskakov_kantorovich(const RealFn& g, int m, double x,
                            const TruncationPolicy& policy);

double q_baskakov(const RealFn& g, const OperatorSpec& spec, double x);
double q_baskakov_kantorovich(const RealFn& g, const OperatorSpec& spec, double x);
double wavelet_q_operator(const RealFn& g, const OperatorSpec& spec,
                          const Wavelet& wavelet, double x);

/// Test-function moments: 1, x, and x^2 + (x/[m]_q)(1 + x/q).
double moment_closed_form(int j, int m, const QParam& q, double x);

/// Operator applied to (t-x)^2: x^2/(q [m]_q) + x/[m]_q.
double second_central_moment(int m, const QParam& q, double x);

struct CurvePoint {
    double x = 0.0;
    double operator_value = 0.0;
    double function_value = 0.0;
    double abs_error = 0.0;
    std::string diagnostic;  // nonempty when the point failed to converge
};

/// Pointwise wavelet-operator curve over the grid. Non-convergent points
/// become NaN rows with a diagnostic instead of aborting the curve.
/// Deterministic; parallelized per point, assembled by grid index.
std::vector<CurvePoint> operator_error_curve(const RealFn& g, const OperatorSpec& spec,
                                             const Wavelet& wavelet,
                                             const WeightedGrid& grid);

/// Grid parallelism width: QBASK_THREADS env var, 0 or unset = auto.
int grid_thread_count();

}  // namespace qbask

#endif
