#pragma once

#include <array>
#include <complex>
#include <vector>

#include "sepbell/expression.hpp"

namespace sepbell {

/// Equatorial qubit measurement directions: one angle per (party, setting).
/// Outcome 1 is the +1 eigenstate (|0> + e^{i theta} |1>)/sqrt(2).
struct QubitPlan {
    std::vector<std::array<double, 2>> angles; // [party][setting-1], radians

    double angle(int party, int setting) const {
        return angles[static_cast<std::size_t>(party)][static_cast<std::size_t>(setting - 1)];
    }

    /// Settings that maximally violate the N-partite separation inequality:
    /// setting 1 along x, setting 2 rotated by pi/(N-1). For even N the first
    /// party's angles are additionally offset by pi; under the global
    /// "outcome 1 is the event" convention this local relabeling is what
    /// makes the even-N expression go negative (see ghz_qubit_separation).
    static QubitPlan maximal_violation(int n_parties);
};

/// Tripartite Fourier-basis phases: phi(i,j,k) = alpha_i + beta_j - gamma_k
/// in units of one outcome spacing.
struct QuditPlan {
    int d = 2;
    std::array<double, 2> alpha{0.0, 0.0};
    std::array<double, 2> beta{0.0, 0.0};
    std::array<double, 2> gamma{0.0, 0.0};

    double phase(int i, int j, int k) const {
        return alpha[static_cast<std::size_t>(i - 1)] + beta[static_cast<std::size_t>(j - 1)] -
               gamma[static_cast<std::size_t>(k - 1)];
    }

    /// Per-party phases alpha=(1,1/3), beta=(0,0), gamma=(0,2/3); the induced
    /// phi table violates the d-outcome inequality for every d >= 2.
    static QuditPlan maximal_violation(int d);
};

struct StateVector {
    int n_parties = 0;
    int d = 2;
    std::vector<std::complex<double>> amps; // size d^n_parties, norm 1 within 1e-12

    static StateVector ghz(int n_parties, int d);
};

/// One orthonormal basis: basis[outcome][component].
using Basis = std::vector<std::vector<std::complex<double>>>;

/// Qubit basis for an equatorial angle; fourier_basis(x | n) ~ w^{n(x+phi)},
/// conjugate_fourier_basis the complex conjugate.
Basis equatorial_qubit_basis(double theta);
Basis fourier_basis(int d, double phi);
Basis conjugate_fourier_basis(int d, double phi);

/// Projective-measurement oracle: p(o|s) = |<o_1,s_1| ... <o_N,s_N | state>|^2
/// computed by direct inner products. bases[party][setting-1] must be
/// orthonormal within 1e-10.
Behavior statevector_behavior(const StateVector& state,
                              const std::vector<std::array<Basis, 2>>& bases);

/// GHZ qubit behavior under a plan; table computed by the state-vector
/// oracle. The full-party separation at total angle t equals
/// (1 + (-1)^{N+1} cos t)/2.
Behavior ghz_qubit_behavior(int n_parties, const QubitPlan& plan);

/// Closed forms used to cross-check the oracle.
double ghz_qubit_separation(int n_parties, double total_angle);
double ghz_qubit_entry(int n_parties, const QubitPlan& plan, const std::vector<int>& settings,
                       const std::vector<int>& outcomes);
double evaluate_closed_form(const BellExpression& expression, const QubitPlan& plan);

/// Tripartite GHZ qudit behavior:
/// p(a,b,c|i,j,k) = (1/d^4) |sum_n w^{n(a+b-c+phi_ijk)}|^2.
Behavior ghz_qudit_behavior(int d, const QuditPlan& plan);

/// Expression value on the GHZ qudit behavior through the residue reduction
/// (the probability depends only on (a+b-c) mod d), without building the
/// d^3-entry table.
double evaluate_reduced(const BellExpression& expression, const QuditPlan& plan);

struct Figure3Row {
    int d = 0;
    double value = 0.0;
};

/// Quasi-distance inequality value on the GHZ state per dimension, reduced
/// evaluation, parallel over d, rows ordered by d.
std::vector<Figure3Row> figure3_sweep(int d_min, int d_max);

/// CSV with header "d,value", 15 significant digits.
std::string figure3_csv(const std::vector<Figure3Row>& rows);

} // namespace sepbell
