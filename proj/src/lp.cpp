#include "sepbell/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <cstdio>

#include "sepbell/errors.hpp"

namespace sepbell::lp {

namespace {

template <class Scalar>
struct Num {
    static constexpr bool exact = true;
    static bool is_pos(const Scalar& v, double) { return sgn(v) > 0; }
    static bool is_neg(const Scalar& v, double) { return sgn(v) < 0; }
    static bool is_zero(const Scalar& v, double) { return sgn(v) == 0; }
    static double widen(const Scalar& v) { return v.get_d(); }
};

template <>
struct Num<double> {
    static constexpr bool exact = false;
    static bool is_pos(double v, double tol) { return v > tol; }
    static bool is_neg(double v, double tol) { return v < -tol; }
    static bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
    static double widen(double v) { return v; }
};

/// Gaussian solve of B x = rhs_k for several right-hand sides; destroys B.
/// Returns false when B is singular (to working precision for doubles).
template <class Scalar>
bool gauss_solve(std::vector<Scalar>& B, std::size_t m,
                 const std::vector<std::vector<Scalar>*>& rhs, double singular_tol) {
    std::vector<std::size_t> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    auto at = [&](std::size_t r, std::size_t c) -> Scalar& { return B[perm[r] * m + c]; };

    for (std::size_t k = 0; k < m; ++k) {
        std::size_t best = k;
        if constexpr (Num<Scalar>::exact) {
            while (best < m && sgn(at(best, k)) == 0) ++best;
            if (best == m) return false;
        } else {
            double mag = std::abs(Num<Scalar>::widen(at(k, k)));
            for (std::size_t r = k + 1; r < m; ++r) {
                const double v = std::abs(Num<Scalar>::widen(at(r, k)));
                if (v > mag) {
                    mag = v;
                    best = r;
                }
            }
            if (mag <= singular_tol) return false;
        }
        std::swap(perm[k], perm[best]);
        const Scalar piv = at(k, k);
        for (std::size_t r = k + 1; r < m; ++r) {
            if (Num<Scalar>::is_zero(at(r, k), 0.0)) continue;
            const Scalar f = at(r, k) / piv;
            at(r, k) = Scalar(0);
            for (std::size_t c = k + 1; c < m; ++c) at(r, c) -= f * at(k, c);
            for (auto* v : rhs) (*v)[perm[r]] -= f * (*v)[perm[k]];
        }
    }
    for (auto* v : rhs) {
        std::vector<Scalar> x(m, Scalar(0));
        for (std::size_t ri = m; ri-- > 0;) {
            Scalar acc = (*v)[perm[ri]];
            for (std::size_t c = ri + 1; c < m; ++c) {
                if (!Num<Scalar>::is_zero(x[c], 0.0)) acc -= at(ri, c) * x[c];
            }
            x[ri] = acc / at(ri, ri);
        }
        *v = std::move(x);
    }
    return true;
}

template <class Scalar>
class Engine {
  public:
    Engine(const StandardForm<Scalar>& problem, const Options& options)
        : p_(problem), opt_(options), m_(problem.m), n_(problem.n), width_(problem.n + problem.m) {
        if (p_.a.size() != m_ * n_ || p_.b.size() != m_ || p_.c.size() != n_) {
            throw FormulationError("standard form arrays have inconsistent sizes");
        }
        max_iter_ = options.max_iterations > 0 ? options.max_iterations
                                               : static_cast<long>(4000 + 30 * (m_ + n_ / 8));
        rowsign_.assign(m_, 1);
        for (std::size_t i = 0; i < m_; ++i) {
            if (Num<Scalar>::is_neg(p_.b[i], 0.0)) rowsign_[i] = -1;
        }
    }

    Solution<Scalar> run() {
        build_initial_tableau();
        phase1_ = true;
        bland_ = Num<Scalar>::exact;
        set_phase_costs();
        Solution<Scalar> fail;
        if (!iterate(fail)) return fail;
        if (Num<Scalar>::is_pos(phase_objective(), feas_threshold())) {
            if constexpr (!Num<Scalar>::exact) {
                // drifted tableau: rebuild from the basis and give phase 1 a
                // clean second pass before declaring infeasibility
                rebuild_tableau_from_basis();
                set_phase_costs();
                if (!iterate(fail)) return fail;
            }
            if (Num<Scalar>::is_pos(phase_objective(), feas_threshold())) {
                fail.status = SolveStatus::infeasible;
                fail.iterations = iterations_;
                return fail;
            }
        }
        drive_out_artificials();
        phase1_ = false;
        set_phase_costs();
        if (!iterate(fail)) return fail;

        // Refactorize the final basis from the original data; when the drifted
        // tableau picked a basis that fresh numbers reject, rebuild and resume.
        for (int repair = 0; repair < 3; ++repair) {
            Solution<Scalar> sol = extract();
            if constexpr (Num<Scalar>::exact) {
                return sol;
            } else {
                if (fresh_optimality_ok(sol)) return sol;
                rebuild_tableau_from_basis();
                set_phase_costs();
                if (!iterate(fail)) return fail;
            }
        }
        Solution<Scalar> sol = extract();
        return sol;
    }

  private:
    std::size_t stride() const { return width_ + 1; }
    Scalar& tab(std::size_t r, std::size_t c) { return tab_[r * stride() + c]; }
    Scalar& rhs(std::size_t r) { return tab_[r * stride() + width_]; }
    Scalar& dj(std::size_t c) { return tab_[m_ * stride() + c]; }

    double feas_threshold() const {
        if constexpr (Num<Scalar>::exact) return 0.0;
        double scale = 1.0;
        for (const auto& b : p_.b) scale = std::max(scale, std::abs(Num<Scalar>::widen(b)));
        return opt_.cost_tol * scale * 10.0;
    }

    Scalar phase_objective() {
        Scalar z(0);
        for (std::size_t i = 0; i < m_; ++i) {
            const Scalar cb = cost_of(basis_[i]);
            if (!Num<Scalar>::is_zero(cb, 0.0)) z += cb * rhs(i);
        }
        return z;
    }

    Scalar cost_of(int col) const {
        if (phase1_) return col >= static_cast<int>(n_) ? Scalar(1) : Scalar(0);
        return col < static_cast<int>(n_) ? p_.c[static_cast<std::size_t>(col)] : Scalar(0);
    }

    void build_initial_tableau() {
        tab_.assign((m_ + 1) * stride(), Scalar(0));
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const Scalar s(rowsign_[i]);
            for (std::size_t j = 0; j < n_; ++j) tab(i, j) = s * p_.at(i, j);
            tab(i, n_ + i) = Scalar(1);
            rhs(i) = s * p_.b[i];
            basis_[i] = static_cast<int>(n_ + i);
        }
    }

    void set_phase_costs() {
        for (std::size_t j = 0; j <= width_; ++j) dj(j) = Scalar(0);
        for (std::size_t i = 0; i < m_; ++i) {
            const Scalar cb = cost_of(basis_[i]);
            if (Num<Scalar>::is_zero(cb, 0.0)) continue;
            const Scalar* row = &tab_[i * stride()];
            for (std::size_t j = 0; j <= width_; ++j) {
                if (!Num<Scalar>::is_zero(row[j], 0.0)) dj(j) -= cb * row[j];
            }
        }
        for (std::size_t j = 0; j < width_; ++j) {
            const Scalar cj = cost_of(static_cast<int>(j));
            if (!Num<Scalar>::is_zero(cj, 0.0)) dj(j) += cj;
        }
    }

    int pick_entering(const std::vector<char>& skipped) {
        const std::size_t limit = phase1_ ? width_ : n_;
        if (bland_) {
            for (std::size_t j = 0; j < limit; ++j) {
                if (!skipped[j] && Num<Scalar>::is_neg(dj(j), opt_.cost_tol)) {
                    return static_cast<int>(j);
                }
            }
            return -1;
        }
        int best = -1;
        double best_val = -opt_.cost_tol;
        for (std::size_t j = 0; j < limit; ++j) {
            if (skipped[j]) continue;
            const double v = Num<Scalar>::widen(dj(j));
            if (v < best_val) {
                best_val = v;
                best = static_cast<int>(j);
            }
        }
        return best;
    }

    // Two-pass ratio test: the first pass finds the minimum ratio with a small
    // feasibility slack, the second picks the numerically largest pivot among
    // the near-ties. The exact instantiation uses Bland's leaving rule.
    int pick_leaving(int entering) {
        const std::size_t col = static_cast<std::size_t>(entering);
        int row = -1;
        if constexpr (Num<Scalar>::exact) {
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                if (sgn(tab(i, col)) <= 0) continue;
                const Rational ratio = rhs(i) / tab(i, col);
                if (row < 0 || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[static_cast<std::size_t>(row)])) {
                    best_ratio = ratio;
                    row = static_cast<int>(i);
                }
            }
        } else {
            const double slack = 1e-9;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = Num<Scalar>::widen(tab(i, col));
                if (a <= opt_.pivot_tol) continue;
                best_ratio = std::min(best_ratio,
                                      (std::max(Num<Scalar>::widen(rhs(i)), 0.0) + slack) / a);
            }
            if (!std::isfinite(best_ratio)) return -1;
            double best_piv = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = Num<Scalar>::widen(tab(i, col));
                if (a <= opt_.pivot_tol) continue;
                const double r = std::max(Num<Scalar>::widen(rhs(i)), 0.0) / a;
                if (r <= best_ratio && a > best_piv) {
                    best_piv = a;
                    row = static_cast<int>(i);
                }
            }
        }
        return row;
    }

    void pivot(std::size_t row, std::size_t col) {
        const Scalar piv = tab(row, col);
        Scalar* prow = &tab_[row * stride()];
        for (std::size_t c = 0; c <= width_; ++c) {
            if (!Num<Scalar>::is_zero(prow[c], 0.0)) prow[c] /= piv;
        }
        prow[col] = Scalar(1);
        for (std::size_t r = 0; r <= m_; ++r) {
            if (r == row) continue;
            Scalar* rr = &tab_[r * stride()];
            const Scalar f = rr[col];
            if (Num<Scalar>::is_zero(f, 0.0)) continue;
            if constexpr (Num<Scalar>::exact) {
                for (std::size_t c = 0; c <= width_; ++c) {
                    if (!Num<Scalar>::is_zero(prow[c], 0.0)) rr[c] -= f * prow[c];
                }
            } else {
                for (std::size_t c = 0; c <= width_; ++c) rr[c] -= f * prow[c];
            }
            rr[col] = Scalar(0);
        }
        basis_[row] = static_cast<int>(col);
    }

    bool iterate(Solution<Scalar>& fail) {
        std::vector<char> skipped(width_, 0);
        double best_obj = std::numeric_limits<double>::infinity();
        long last_progress = iterations_;
        long last_rebuild = iterations_;
        long bland_until = 0;
        while (true) {
            if constexpr (!Num<Scalar>::exact) {
                // drift control: periodically recompute the whole tableau from
                // a fresh factorization of the current basis
                if (iterations_ - last_rebuild >= 1500) {
                    rebuild_tableau_from_basis();
                    set_phase_costs();
                    last_rebuild = iterations_;
                    std::fill(skipped.begin(), skipped.end(), 0);
                }
            }
            bland_ = Num<Scalar>::exact || iterations_ < bland_until;
            const int entering = pick_entering(skipped);
            if (entering < 0) return true;
            const int leaving = pick_leaving(entering);
            if (leaving < 0) {
                // numerically this is drift far more often than a genuine
                // extreme ray; set the column aside and let the final
                // optimality check repair any real descent direction
                if (!phase1_ && Num<Scalar>::widen(dj(static_cast<std::size_t>(entering))) <
                                    -1e-4) {
                    fail.status = SolveStatus::unbounded;
                    fail.iterations = iterations_;
                    return false;
                }
                skipped[static_cast<std::size_t>(entering)] = 1;
                continue;
            }
            pivot(static_cast<std::size_t>(leaving), static_cast<std::size_t>(entering));
            std::fill(skipped.begin(), skipped.end(), 0);
            ++iterations_;
            if (iterations_ > max_iter_) {
                fail.status = SolveStatus::iteration_limit;
                fail.iterations = iterations_;
                return false;
            }
            if constexpr (!Num<Scalar>::exact) {
                const double z = Num<Scalar>::widen(phase_objective());
                if (z < best_obj - 1e-10 * std::max(1.0, std::abs(best_obj))) {
                    best_obj = z;
                    last_progress = iterations_;
                } else if (iterations_ - last_progress > 400) {
                    // stagnating on a degenerate face: refresh the numbers and
                    // walk off it with Bland's rule for a while
                    rebuild_tableau_from_basis();
                    set_phase_costs();
                    last_rebuild = iterations_;
                    last_progress = iterations_;
                    bland_until = iterations_ + 300;
                    std::fill(skipped.begin(), skipped.end(), 0);
                }
                if (const char* t = std::getenv("SEPBELL_LP_TRACE"); t && iterations_ % 500 == 0) {
                    int arts = 0;
                    for (int b : basis_) arts += b >= static_cast<int>(n_);
                    std::fprintf(stderr, "[lp] phase%d it=%ld obj=%.12g arts=%d\n",
                                 phase1_ ? 1 : 2, iterations_, z, arts);
                }
            }
        }
    }

    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < static_cast<int>(n_)) continue;
            std::size_t j = 0;
            for (; j < n_; ++j) {
                if constexpr (Num<Scalar>::exact) {
                    if (sgn(tab(i, j)) != 0) break;
                } else {
                    if (std::abs(Num<Scalar>::widen(tab(i, j))) > opt_.pivot_tol) break;
                }
            }
            if (j < n_) pivot(i, j); // degenerate pivot, basic value stays zero
            // otherwise the row is redundant and the artificial stays basic at zero
        }
    }

    Solution<Scalar> extract() {
        Solution<Scalar> sol;
        sol.status = SolveStatus::optimal;
        sol.iterations = iterations_;
        sol.basis = basis_;
        sol.x.assign(n_, Scalar(0));
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < static_cast<int>(n_)) {
                sol.x[static_cast<std::size_t>(basis_[i])] = rhs(i);
            }
        }
        compute_basis_quantities(sol);
        sol.objective = Scalar(0);
        for (std::size_t j = 0; j < n_; ++j) {
            if (!Num<Scalar>::is_zero(sol.x[j], 0.0)) sol.objective += p_.c[j] * sol.x[j];
        }
        return sol;
    }

    // Solves B xB = b and B^T pi = cB from the original data: sharper than the
    // drifted tableau numbers, and supplies the price vector.
    void compute_basis_quantities(Solution<Scalar>& sol) {
        std::vector<Scalar> B(m_ * m_, Scalar(0));
        std::vector<Scalar> Bt(m_ * m_, Scalar(0));
        for (std::size_t i = 0; i < m_; ++i) {
            const int col = basis_[i];
            for (std::size_t r = 0; r < m_; ++r) {
                Scalar v(0);
                if (col < static_cast<int>(n_)) {
                    v = Scalar(rowsign_[r]) * p_.at(r, static_cast<std::size_t>(col));
                } else if (static_cast<std::size_t>(col) - n_ == r) {
                    v = Scalar(1);
                }
                if (!Num<Scalar>::is_zero(v, 0.0)) {
                    B[r * m_ + i] = v;
                    Bt[i * m_ + r] = v;
                }
            }
        }
        std::vector<Scalar> cb(m_, Scalar(0));
        for (std::size_t i = 0; i < m_; ++i) cb[i] = cost_of(basis_[i]);
        std::vector<Scalar> xb(m_, Scalar(0));
        for (std::size_t i = 0; i < m_; ++i) xb[i] = Scalar(rowsign_[i]) * p_.b[i];

        std::vector<std::vector<Scalar>*> r1{&xb};
        std::vector<std::vector<Scalar>*> r2{&cb};
        if (!gauss_solve(B, m_, r1, 1e-14) || !gauss_solve(Bt, m_, r2, 1e-14)) {
            throw FormulationError("final LP basis is singular");
        }
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < static_cast<int>(n_)) {
                sol.x[static_cast<std::size_t>(basis_[i])] = xb[i];
            }
        }
        sol.multipliers.assign(m_, Scalar(0));
        for (std::size_t i = 0; i < m_; ++i) sol.multipliers[i] = Scalar(rowsign_[i]) * cb[i];
    }

    bool fresh_optimality_ok(const Solution<Scalar>& sol) {
        const double tol = opt_.cost_tol * 100.0;
        for (std::size_t j = 0; j < n_; ++j) {
            if (Num<Scalar>::widen(sol.x[j]) < -1e-7) return false;
        }
        std::vector<bool> basic(n_, false);
        for (int b : basis_) {
            if (b < static_cast<int>(n_)) basic[static_cast<std::size_t>(b)] = true;
        }
        for (std::size_t j = 0; j < n_; ++j) {
            if (basic[j]) continue;
            double d = Num<Scalar>::widen(p_.c[j]);
            for (std::size_t r = 0; r < m_; ++r) {
                const double a = Num<Scalar>::widen(p_.at(r, j));
                if (a != 0.0) d -= Num<Scalar>::widen(sol.multipliers[r]) * a;
            }
            if (d < -tol) return false;
        }
        return true;
    }

    // tableau := Binv [A_int | I | b_int], recomputed exactly from the data
    void rebuild_tableau_from_basis() {
        std::vector<Scalar> B(m_ * m_, Scalar(0));
        for (std::size_t i = 0; i < m_; ++i) {
            const int col = basis_[i];
            for (std::size_t r = 0; r < m_; ++r) {
                if (col < static_cast<int>(n_)) {
                    B[r * m_ + i] = Scalar(rowsign_[r]) * p_.at(r, static_cast<std::size_t>(col));
                } else if (static_cast<std::size_t>(col) - n_ == r) {
                    B[r * m_ + i] = Scalar(1);
                }
            }
        }
        std::vector<std::vector<Scalar>> cols(width_ + 1, std::vector<Scalar>(m_, Scalar(0)));
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t r = 0; r < m_; ++r) {
                cols[j][r] = Scalar(rowsign_[r]) * p_.at(r, j);
            }
        }
        for (std::size_t i = 0; i < m_; ++i) cols[n_ + i][i] = Scalar(1);
        for (std::size_t r = 0; r < m_; ++r) cols[width_][r] = Scalar(rowsign_[r]) * p_.b[r];
        std::vector<std::vector<Scalar>*> ptrs;
        ptrs.reserve(cols.size());
        for (auto& c : cols) ptrs.push_back(&c);
        if (!gauss_solve(B, m_, ptrs, 1e-14)) {
            throw FormulationError("LP basis became singular during repair");
        }
        for (std::size_t r = 0; r < m_; ++r) {
            for (std::size_t j = 0; j <= width_; ++j) tab(r, j) = cols[j][r];
        }
    }

    const StandardForm<Scalar>& p_;
    Options opt_;
    std::size_t m_, n_, width_;
    long max_iter_ = 0;
    long iterations_ = 0;
    bool phase1_ = true;
    bool bland_ = false;
    std::vector<Scalar> tab_;
    std::vector<int> basis_;
    std::vector<int> rowsign_;
};

} // namespace

Solution<double> solve(const StandardForm<double>& problem, const Options& options) {
    return Engine<double>(problem, options).run();
}

Solution<Rational> solve(const StandardForm<Rational>& problem, const Options& options) {
    return Engine<Rational>(problem, options).run();
}

std::optional<Solution<Rational>> certify_basis(const StandardForm<Rational>& problem,
                                                const std::vector<int>& basis) {
    const std::size_t m = problem.m, n = problem.n;
    if (basis.size() != m) return std::nullopt;

    std::vector<Rational> B(m * m, Rational(0));
    std::vector<Rational> Bt(m * m, Rational(0));
    std::vector<Rational> cb(m, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        const int col = basis[i];
        if (col < 0 || col >= static_cast<int>(n + m)) return std::nullopt;
        for (std::size_t r = 0; r < m; ++r) {
            Rational v(0);
            if (col < static_cast<int>(n)) {
                v = problem.at(r, static_cast<std::size_t>(col));
            } else if (static_cast<std::size_t>(col) - n == r) {
                v = Rational(1);
            }
            if (sgn(v) != 0) {
                B[r * m + i] = v;
                Bt[i * m + r] = v;
            }
        }
        if (col < static_cast<int>(n)) cb[i] = problem.c[static_cast<std::size_t>(col)];
    }

    std::vector<Rational> xb = problem.b;
    std::vector<std::vector<Rational>*> r1{&xb};
    if (!gauss_solve(B, m, r1, 0.0)) return std::nullopt;
    for (std::size_t i = 0; i < m; ++i) {
        if (sgn(xb[i]) < 0) return std::nullopt; // primal infeasible
        if (basis[i] >= static_cast<int>(n) && sgn(xb[i]) != 0) return std::nullopt;
    }
    std::vector<std::vector<Rational>*> r2{&cb};
    if (!gauss_solve(Bt, m, r2, 0.0)) return std::nullopt;

    for (std::size_t j = 0; j < n; ++j) {
        Rational d = problem.c[j];
        for (std::size_t r = 0; r < m; ++r) {
            const Rational& a = problem.at(r, j);
            if (sgn(a) != 0) d -= cb[r] * a;
        }
        if (sgn(d) < 0) return std::nullopt; // dual infeasible
    }

    Solution<Rational> sol;
    sol.status = SolveStatus::optimal;
    sol.basis = basis;
    sol.x.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < static_cast<int>(n)) sol.x[static_cast<std::size_t>(basis[i])] = xb[i];
    }
    sol.multipliers = cb;
    sol.objective = Rational(0);
    for (std::size_t j = 0; j < n; ++j) {
        if (sgn(sol.x[j]) != 0) sol.objective += problem.c[j] * sol.x[j];
    }
    return sol;
}

} // namespace sepbell::lp
