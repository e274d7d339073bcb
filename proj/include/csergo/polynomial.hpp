#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <type_traits>
#include <vector>

#include "csergo/rational.hpp"

namespace csergo {

// Dense univariate polynomial, coefficients from low to high degree.
// Coefficient type is Rational for the exact path and double otherwise.
template <class T>
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { trim(); }
    static Polynomial constant(T v) { return Polynomial(std::vector<T>{std::move(v)}); }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
    const std::vector<T>& coeffs() const { return c_; }

    T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : T(0); }

    T operator()(const T& t) const {
        T acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
        return acc;
    }

    double eval_double(double t) const {
        double acc = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + coeff_double(c_[i]);
        return acc;
    }

    std::vector<double> coeffs_double() const {
        std::vector<double> out(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) out[i] = coeff_double(c_[i]);
        return out;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        std::vector<T> r(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] -= b.c_[i];
        return Polynomial(std::move(r));
    }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.is_zero() || b.is_zero()) return Polynomial();
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return Polynomial(std::move(r));
    }
    friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

    // Quotient of an exact division; the remainder must vanish. Used by the
    // fraction-free (Bareiss) elimination, where divisibility is guaranteed.
    static Polynomial exact_div(const Polynomial& num, const Polynomial& den) {
        assert(!den.is_zero());
        if (num.is_zero()) return Polynomial();
        std::vector<T> rem = num.c_;
        std::vector<T> quo(num.c_.size() - den.c_.size() + 1, T(0));
        const T& lead = den.c_.back();
        for (std::size_t k = quo.size(); k-- > 0;) {
            T q = rem[k + den.c_.size() - 1] / lead;
            quo[k] = q;
            for (std::size_t j = 0; j < den.c_.size(); ++j) rem[k + j] -= q * den.c_[j];
        }
        if constexpr (std::is_same_v<T, Rational>) {
            for (const T& r : rem) assert(r == 0);
        }
        return Polynomial(std::move(quo));
    }

private:
    static double coeff_double(const Rational& q) { return to_double(q); }
    static double coeff_double(double q) { return q; }

    void trim() {
        while (!c_.empty() && c_.back() == T(0)) c_.pop_back();
    }

    std::vector<T> c_;
};

using RationalPoly = Polynomial<Rational>;

inline Polynomial<double> to_double_poly(const RationalPoly& p) {
    return Polynomial<double>(p.coeffs_double());
}

// -- root isolation -----------------------------------------------------------

// Smallest positive root of f on (0, scan_max], isolated by a sign-change scan
// (the grid is refined a few times if no change shows up) and then bisected
// down to `tol`. Returns nullopt when no sign change is found at the finest
// grid; roots of even multiplicity are invisible to this scheme.
inline std::optional<double> smallest_positive_root(const std::function<double(double)>& f,
                                                    double scan_max, double tol = 1e-12) {
    const double f0 = f(0.0);
    if (f0 == 0.0) return std::nullopt;  // not a positive root
    for (double step = std::ldexp(1.0, -10); step >= std::ldexp(1.0, -16); step /= 2.0) {
        double prev_t = 0.0, prev_v = f0;
        for (double t = step; t <= scan_max + step / 2; t += step) {
            double v = f(t);
            if (v == 0.0) return t;
            if ((prev_v > 0) != (v > 0)) {
                double lo = prev_t, hi = t;
                while (hi - lo > tol) {
                    double mid = 0.5 * (lo + hi);
                    double vm = f(mid);
                    if (vm == 0.0) return mid;
                    if ((vm > 0) == (prev_v > 0))
                        lo = mid;
                    else
                        hi = mid;
                }
                return 0.5 * (lo + hi);
            }
            prev_t = t;
            prev_v = v;
        }
    }
    return std::nullopt;
}

template <class T>
std::optional<double> smallest_positive_root(const Polynomial<T>& p, double scan_max,
                                             double tol = 1e-12) {
    if (p.degree() <= 0) return std::nullopt;
    // A polynomial with nonnegative coefficients and positive constant term has
    // no positive root; skip the scan.
    bool all_nonneg = true;
    for (double c : p.coeffs_double())
        if (c < 0) {
            all_nonneg = false;
            break;
        }
    if (all_nonneg && p.eval_double(0.0) > 0) return std::nullopt;
    return smallest_positive_root([&](double t) { return p.eval_double(t); }, scan_max, tol);
}

// All complex roots via the companion matrix; diagnostic only.
template <class T>
std::vector<std::complex<double>> complex_roots(const Polynomial<T>& p) {
    auto c = p.coeffs_double();
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    const int n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[i] / c[n];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(n);
    for (int i = 0; i < n; ++i) roots[i] = es.eigenvalues()[i];
    return roots;
}

// True when some complex root has modulus strictly below `rho` (diagnostic for
// the expectation that the smallest positive root has minimal modulus).
template <class T>
bool has_smaller_modulus_root(const Polynomial<T>& p, double rho, double slack = 1e-6) {
    for (const auto& z : complex_roots(p))
        if (std::abs(z) < rho - slack) return true;
    return false;
}

}  // namespace csergo
