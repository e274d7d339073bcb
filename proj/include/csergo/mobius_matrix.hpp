#pragma once

#include <Eigen/Dense>

#include <vector>

#include "csergo/polynomial.hpp"
#include "csergo/system.hpp"

namespace csergo {

// Square matrix of polynomials indexed by states.
template <class T>
struct PolyMatrix {
    int n = 0;
    std::vector<Polynomial<T>> entries;  // row-major

    const Polynomial<T>& at(int i, int j) const { return entries[i * n + j]; }
    Polynomial<T>& at(int i, int j) { return entries[i * n + j]; }

    Eigen::MatrixXd eval(double t) const {
        Eigen::MatrixXd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = at(i, j).eval_double(t);
        return m;
    }
};

// M_{a,b}(z) = sum over cliques c with a.c = b of w_a(c) (-1)^{|c|} z^{|c|}.
// M(0) is the identity; M is the formal inverse of the growth matrix.
inline PolyMatrix<Rational> mobius_matrix(const ConcurrentSystem& sys) {
    const int ns = sys.n_states();
    PolyMatrix<Rational> m;
    m.n = ns;
    m.entries.assign(ns * ns, RationalPoly());
    const auto& cliques = sys.alphabet().cliques();
    for (int st = 0; st < ns; ++st) {
        std::vector<std::vector<Rational>> acc(ns);
        for (int ci = 0; ci < static_cast<int>(cliques.size()); ++ci) {
            int to = sys.act_clique(st, ci);
            if (to == kBot) continue;
            int d = cliques[ci].size();
            auto& coeffs = acc[to];
            if (static_cast<int>(coeffs.size()) <= d) coeffs.resize(d + 1, Rational(0));
            Rational term = sys.clique_weight(st, ci);
            coeffs[d] += (d % 2 == 0) ? term : -term;
        }
        for (int to = 0; to < ns; ++to) m.at(st, to) = RationalPoly(std::move(acc[to]));
    }
    return m;
}

// Same matrix with arbitrary floating letter weights (used after
// renormalization, when weights are no longer rational).
inline PolyMatrix<double> mobius_matrix_numeric(const ConcurrentSystem& sys, const Valuation& w) {
    const int ns = sys.n_states();
    const int nl = sys.n_letters();
    PolyMatrix<double> m;
    m.n = ns;
    m.entries.assign(ns * ns, Polynomial<double>());
    const auto& cliques = sys.alphabet().cliques();
    for (int st = 0; st < ns; ++st) {
        std::vector<std::vector<double>> acc(ns);
        for (int ci = 0; ci < static_cast<int>(cliques.size()); ++ci) {
            int to = sys.act_clique(st, ci);
            if (to == kBot) continue;
            double term = 1.0;
            int cur = st;
            for (int a : cliques[ci].members()) {
                term *= w[cur * nl + a];
                cur = sys.act_letter(cur, a);
            }
            int d = cliques[ci].size();
            auto& coeffs = acc[to];
            if (static_cast<int>(coeffs.size()) <= d) coeffs.resize(d + 1, 0.0);
            coeffs[d] += (d % 2 == 0) ? term : -term;
        }
        for (int to = 0; to < ns; ++to) m.at(st, to) = Polynomial<double>(std::move(acc[to]));
    }
    return m;
}

// Fraction-free Gaussian elimination (Bareiss). Exact over rationals; over
// doubles it degenerates to ordinary elimination, which is fine at this size.
template <class T>
Polynomial<T> determinant(const PolyMatrix<T>& m) {
    const int n = m.n;
    if (n == 0) return Polynomial<T>::constant(T(1));
    std::vector<Polynomial<T>> b = m.entries;
    auto at = [&](int i, int j) -> Polynomial<T>& { return b[i * n + j]; };
    Polynomial<T> prev = Polynomial<T>::constant(T(1));
    int sign = 1;
    for (int k = 0; k + 1 < n; ++k) {
        if (at(k, k).is_zero()) {
            int piv = -1;
            for (int r = k + 1; r < n; ++r)
                if (!at(r, k).is_zero()) {
                    piv = r;
                    break;
                }
            if (piv < 0) return Polynomial<T>();  // singular
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                at(i, j) = Polynomial<T>::exact_div(at(k, k) * at(i, j) - at(i, k) * at(k, j), prev);
            at(i, k) = Polynomial<T>();
        }
        prev = at(k, k);
    }
    Polynomial<T> det = at(n - 1, n - 1);
    if (sign < 0) det = Polynomial<T>() - det;
    return det;
}

// Coefficient matrices of the formal power series M(t)^{-1} up to degree L.
// Exact: with M = sum_k M_k t^k and M_0 = I, the inverse G satisfies
// G_0 = I and G_k = -sum_{j>=1} M_j G_{k-j}.
inline std::vector<std::vector<std::vector<Rational>>> growth_series(const PolyMatrix<Rational>& m,
                                                                     int L) {
    const int n = m.n;
    int maxdeg = 0;
    for (const auto& p : m.entries) maxdeg = std::max(maxdeg, p.degree());
    auto coeff_mat = [&](int k) {
        std::vector<std::vector<Rational>> mk(n, std::vector<Rational>(n, Rational(0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mk[i][j] = m.at(i, j).coeff(k);
        return mk;
    };
    std::vector<std::vector<std::vector<Rational>>> M(maxdeg + 1);
    for (int k = 0; k <= maxdeg; ++k) M[k] = coeff_mat(k);

    std::vector<std::vector<std::vector<Rational>>> G(L + 1);
    G[0].assign(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) G[0][i][i] = 1;
    for (int k = 1; k <= L; ++k) {
        G[k].assign(n, std::vector<Rational>(n, Rational(0)));
        for (int j = 1; j <= std::min(k, maxdeg); ++j)
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l)
                    for (int r = 0; r < n; ++r) G[k][i][r] -= M[j][i][l] * G[k - j][l][r];
    }
    return G;
}

// G(s) = M(s)^{-1} entrywise for 0 <= s < rho. Entries must come out
// non-negative; failure to invert reports SingularAtS.
inline Eigen::MatrixXd growth_matrix_at(const PolyMatrix<Rational>& m, double s,
                                        double tol = 1e-9) {
    Eigen::MatrixXd ms = m.eval(s);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ms);
    if (!lu.isInvertible()) throw SingularAtS(s);
    Eigen::MatrixXd g = lu.inverse();
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
            if (g(i, j) < -tol) throw SingularAtS(s);
    return g;
}

inline Eigen::MatrixXd growth_matrix_at(const ConcurrentSystem& sys, double s, double tol = 1e-9) {
    return growth_matrix_at(mobius_matrix(sys), s, tol);
}

}  // namespace csergo
