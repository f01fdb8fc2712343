#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace sepbell::lp {

using Rational = mpq_class;

enum class SolveStatus { optimal, infeasible, unbounded, iteration_limit };

/// min c.x  subject to  A x = b, x >= 0; A dense row-major.
template <class Scalar>
struct StandardForm {
    std::size_t m = 0;
    std::size_t n = 0;
    std::vector<Scalar> a;
    std::vector<Scalar> b;
    std::vector<Scalar> c;

    void resize(std::size_t rows, std::size_t cols) {
        m = rows;
        n = cols;
        a.assign(m * n, Scalar(0));
        b.assign(m, Scalar(0));
        c.assign(n, Scalar(0));
    }
    Scalar& at(std::size_t row, std::size_t col) { return a[row * n + col]; }
    const Scalar& at(std::size_t row, std::size_t col) const { return a[row * n + col]; }
};

template <class Scalar>
struct Solution {
    SolveStatus status = SolveStatus::iteration_limit;
    Scalar objective{};
    std::vector<Scalar> x;            // primal solution, size n
    std::vector<Scalar> multipliers;  // row prices of the final basis, size m
    std::vector<int> basis;           // basic column per row
    long iterations = 0;
};

struct Options {
    long max_iterations = 0;  // 0 picks a size-based default
    double pivot_tol = 1e-7;
    double cost_tol = 1e-9;
};

/// Two-phase primal simplex. The double instantiation uses Dantzig pricing
/// with a Bland fallback on stalls and refactorizes the final basis; the
/// rational instantiation uses Bland's rule throughout and is exact.
Solution<double> solve(const StandardForm<double>& problem, const Options& options = {});
Solution<Rational> solve(const StandardForm<Rational>& problem, const Options& options = {});

/// Checks a proposed basis for exact primal and dual feasibility. Returns the
/// exact optimal solution it certifies, or nullopt when the basis is not
/// optimal (singular, infeasible or with a negative reduced cost).
std::optional<Solution<Rational>> certify_basis(const StandardForm<Rational>& problem,
                                                const std::vector<int>& basis);

} // namespace sepbell::lp
