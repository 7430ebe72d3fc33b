#ifndef WH_STABILITY_HPP
#define WH_STABILITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wh/dk.hpp"
#include "wh/rational.hpp"

namespace wh {

/// Perturbation-bound report for a pair of symbols I + fJ and I + f~J.
/// epsilon is the L2 distance of Delta f and Delta f~; the four bounds are
/// the guaranteed estimates, the four measured values the observed L2
/// distances of parameters and their split parts.
struct DKBoundReport {
    double epsilon = 0.0;
    double m = 0.0; // min |r|, |r~|
    double N = 0.0; // max |Delta f|, |Delta f~|
    double M = 0.0; // max |r|, |r~|
    double c = 0.0; // min |Delta|
    double d = 0.0; // min |1 + Delta f|, |1 + Delta f~|
    double L = 0.0; // max |(1 - Delta f)/(1 + Delta f)|

    double r_bound = 0.0;           // N eps / m
    double theta_bound = 0.0;       // 2 eps / (c d^2 L)
    double r_factor_bound = 0.0;    // 5 M N eps / m^2
    double theta_split_bound = 0.0; // 2 eps / (c d^2 L)

    double measured_r = 0.0;
    double measured_theta = 0.0;
    double measured_r_pm = 0.0;
    double measured_theta_pm = 0.0;

    bool admissible = false; // eps < m/2 and eps < d/2
    std::string note;
};

DKBoundReport lemma_bounds(const DKMatrix &K, const DKMatrix &K_tilde);

struct PerturbationFamily {
    double eps_min = 1e-6;
    double eps_max = 1e-3;
    std::uint64_t seed = 1;
};

struct SweepDraw {
    DKBoundReport report;
    double epsilon_target = 0.0;
    double factor_error = 0.0; // max entrywise L2 distance of the factors
    bool admissible = false;
    bool pass = false;
    std::string failure;
};

struct SweepResult {
    std::vector<SweepDraw> draws;
    int admissible_count = 0;
    int passes = 0;
    double slope = 0.0;    // log-log regression of factor_error against epsilon
    double slope_ci = 0.0; // 95% half-width of the slope estimate
};

SweepResult perturbation_sweep(const DKMatrix &K, const PerturbationFamily &family, int count);

/// Fixed-shape study: one bump, epsilon halved `halvings` times from
/// eps_start; returns the fitted log-log slope of the factor error.
double epsilon_scaling_slope(const DKMatrix &K, std::uint64_t seed, double eps_start,
                             int halvings);

/// diag(m, 1/m) and its epsilon-perturbation with a lower-left entry:
/// indices flip from (1,-1) to (0,0) for any epsilon != 0.
struct UnstableExample {
    MatrixFactorization unperturbed;
    std::optional<MatrixFactorization> perturbed;
    double epsilon = 0.0;

    /// Throws ZeroEpsilon when no perturbed factorisation exists.
    const MatrixFactorization &perturbed_or_throw() const;
};

UnstableExample unstable_example(double epsilon, GridPtr grid);

/// Symbol I + g J_N with J_N = [[0, 1/r_N],[r_N, 0]] for rational r_N.
struct RationalDKMatrix {
    GridFunction g;
    RationalFunction r_N;
    double fit_max_error = 0.0;
    bool exact = false;
    bool max_degree_reached = false;

    GridMat2 sample() const;
};

/// Reduce I + f [[0, n/p],[1, 0]] to the rational-J form by approximating
/// (p/n)^{1/2}; exact (zero fit error) when p/n is a perfect square.
RationalDKMatrix abrahams_reduce(const RationalFunction &n, const RationalFunction &p,
                                 const GridFunction &f, int fit_degree);

struct RatMat2 {
    RationalFunction a11, a12, a21, a22;
};

/// Max deviation of det(M) from 1 over a set of off-axis sample points.
double removal_det_error(const RatMat2 &M);

struct MeromorphicFactorization {
    MatrixFactorization base; // factors may carry the listed poles
    RatMat2 removal;          // rational M with det M = 1
    GridMat2 final_plus;
    GridMat2 final_minus;
    bool complete = false; // true when the removal step has been applied
};

MeromorphicFactorization meromorphic_factorize(const RationalDKMatrix &K_N);

/// [[1/m, eps*k],[eps*k, m]] sampled on the grid.
GridMat2 perturbed_diagonal_symbol(double k, double epsilon, GridPtr grid);

/// Full worked pole removal for the perturbed diagonal symbol
/// [[1/m, eps*k],[eps*k, m]]: meromorphic factors, the rational removal
/// matrix with unit determinant, and pole-free final factors.
MeromorphicFactorization pole_removal_example(double k, double epsilon, GridPtr grid);

/// Analyticity defect of a (possibly polynomially growing) factor entry:
/// the entry is tamed by (t + i)^2 or (t - i)^2 before the spectral test.
double growth_normalized_defect(const GridFunction &entry, HalfPlane side);

double matrix_defect(const GridMat2 &factor, HalfPlane side);

struct MethodComparison {
    MatrixFactorization exact_fac;
    MatrixFactorization approx_fac;
    double fit_error = 0.0;
    std::pair<int, int> fit_degree{0, 0};
    GridFunction a11_diff;
    double a11_sup = 0.0;
    double a11_l2 = 0.0;
    double bound = 0.0; // entrywise estimate assembled from the lemma bounds
    double exact_ms = 0.0;
    double approx_ms = 0.0;
    bool degenerate_fit = false;
};

/// Factorise K twice: through the Cauchy-integral pipeline and through a
/// rational approximation of f with algebraic splitting; compare a11.
MethodComparison compare_methods(const DKMatrix &K, const std::function<cplx(double)> &f_eval,
                                 int degree, double tol);

} // namespace wh

#endif
