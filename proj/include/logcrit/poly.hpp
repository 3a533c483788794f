#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace logcrit {

using Complex = std::complex<double>;

// Exponent vector of a Laurent monomial. Bivariate polynomials keep j3 == 0.
struct LatticePoint {
    std::int64_t j1 = 0, j2 = 0, j3 = 0;

    LatticePoint() = default;
    LatticePoint(std::int64_t a, std::int64_t b) : j1(a), j2(b), j3(0) {}
    LatticePoint(std::int64_t a, std::int64_t b, std::int64_t c) : j1(a), j2(b), j3(c) {}

    friend bool operator==(const LatticePoint& a, const LatticePoint& b) {
        return a.j1 == b.j1 && a.j2 == b.j2 && a.j3 == b.j3;
    }
    friend bool operator!=(const LatticePoint& a, const LatticePoint& b) { return !(a == b); }
    friend bool operator<(const LatticePoint& a, const LatticePoint& b) {
        if (a.j1 != b.j1) return a.j1 < b.j1;
        if (a.j2 != b.j2) return a.j2 < b.j2;
        return a.j3 < b.j3;
    }
    LatticePoint operator+(const LatticePoint& o) const { return {j1 + o.j1, j2 + o.j2, j3 + o.j3}; }
    LatticePoint operator-(const LatticePoint& o) const { return {j1 - o.j1, j2 - o.j2, j3 - o.j3}; }
    std::string str() const {
        return "(" + std::to_string(j1) + "," + std::to_string(j2) + "," + std::to_string(j3) + ")";
    }
};

// Unimodular exponent transform with translation; arity 2 uses the top-left
// 2x2 block and the identity on j3.
struct AffineLatticeMap {
    int arity = 2;
    std::array<std::array<std::int64_t, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    LatticePoint shift{};

    static AffineLatticeMap identity(int arity = 2) {
        AffineLatticeMap r;
        r.arity = arity;
        return r;
    }
    static AffineLatticeMap from2x2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d,
                                    LatticePoint t = {}) {
        AffineLatticeMap r;
        r.arity = 2;
        r.m = {{{a, b, 0}, {c, d, 0}, {0, 0, 1}}};
        r.shift = t;
        return r;
    }

    std::int64_t det() const {
        const auto& a = m;
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
             - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
             + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    }
    bool unimodular() const { std::int64_t d = det(); return d == 1 || d == -1; }

    LatticePoint apply(const LatticePoint& p) const {
        std::array<std::int64_t, 3> v{p.j1, p.j2, p.j3};
        std::array<std::int64_t, 3> r{};
        for (int i = 0; i < 3; ++i)
            r[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
        return LatticePoint{r[0] + shift.j1, r[1] + shift.j2, r[2] + shift.j3};
    }

    AffineLatticeMap inverse() const {
        std::int64_t d = det();
        if (d != 1 && d != -1) throw std::runtime_error("lattice map is not unimodular");
        const auto& a = m;
        AffineLatticeMap r;
        r.arity = arity;
        // adjugate / det with det = +-1
        std::array<std::array<std::int64_t, 3>, 3> adj;
        adj[0][0] = a[1][1] * a[2][2] - a[1][2] * a[2][1];
        adj[0][1] = -(a[0][1] * a[2][2] - a[0][2] * a[2][1]);
        adj[0][2] = a[0][1] * a[1][2] - a[0][2] * a[1][1];
        adj[1][0] = -(a[1][0] * a[2][2] - a[1][2] * a[2][0]);
        adj[1][1] = a[0][0] * a[2][2] - a[0][2] * a[2][0];
        adj[1][2] = -(a[0][0] * a[1][2] - a[0][2] * a[1][0]);
        adj[2][0] = a[1][0] * a[2][1] - a[1][1] * a[2][0];
        adj[2][1] = -(a[0][0] * a[2][1] - a[0][1] * a[2][0]);
        adj[2][2] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = adj[i][j] * d;
        LatticePoint ms{r.m[0][0] * shift.j1 + r.m[0][1] * shift.j2 + r.m[0][2] * shift.j3,
                        r.m[1][0] * shift.j1 + r.m[1][1] * shift.j2 + r.m[1][2] * shift.j3,
                        r.m[2][0] * shift.j1 + r.m[2][1] * shift.j2 + r.m[2][2] * shift.j3};
        r.shift = LatticePoint{-ms.j1, -ms.j2, -ms.j3};
        return r;
    }
};

inline Complex cpow_int(Complex base, std::int64_t e) {
    if (e == 0) return {1.0, 0.0};
    bool neg = e < 0;
    std::uint64_t k = neg ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
    Complex acc{1.0, 0.0}, b = base;
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    return neg ? Complex{1.0, 0.0} / acc : acc;
}

// Finite map from Z^2 (or Z^3) exponents to complex coefficients.
// Value type: every operation returns a new polynomial.
class LaurentPolynomial {
  public:
    LaurentPolynomial() = default;
    explicit LaurentPolynomial(int arity) : arity_(arity) {}

    static LaurentPolynomial zero(int arity = 2) { return LaurentPolynomial(arity); }
    static LaurentPolynomial monomial(const LatticePoint& p, Complex c, int arity = 2) {
        LaurentPolynomial f(arity);
        if (std::abs(c) != 0.0) f.terms_[p] = c;
        return f;
    }
    static LaurentPolynomial constant(Complex c, int arity = 2) { return monomial({0, 0, 0}, c, arity); }

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::map<LatticePoint, Complex>& terms() const { return terms_; }

    Complex coeff(const LatticePoint& p) const {
        auto it = terms_.find(p);
        return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
    }

    double max_coeff_magnitude() const {
        double m = 0.0;
        for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c));
        return m;
    }

    std::vector<LatticePoint> support() const {
        std::vector<LatticePoint> s;
        s.reserve(terms_.size());
        for (const auto& [p, c] : terms_) s.push_back(p);
        return s;
    }

    void set_term(const LatticePoint& p, Complex c) {
        if (std::abs(c) == 0.0) terms_.erase(p);
        else terms_[p] = c;
    }

    // Drops terms below drop_rel * (max magnitude); keeps support honest after
    // arithmetic so Newton polygons do not inflate.
    LaurentPolynomial cleaned(double drop_rel = 1e-14) const {
        LaurentPolynomial r(arity_);
        double m = max_coeff_magnitude();
        for (const auto& [p, c] : terms_)
            if (std::abs(c) > drop_rel * m) r.terms_[p] = c;
        return r;
    }

    friend LaurentPolynomial operator+(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        check_arity(a, b);
        LaurentPolynomial r = a;
        for (const auto& [p, c] : b.terms_) {
            auto it = r.terms_.find(p);
            if (it == r.terms_.end()) r.terms_[p] = c;
            else {
                it->second += c;
                if (std::abs(it->second) == 0.0) r.terms_.erase(it);
            }
        }
        return r;
    }
    friend LaurentPolynomial operator-(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        return a + (b * Complex{-1.0, 0.0});
    }
    friend LaurentPolynomial operator*(const LaurentPolynomial& a, Complex s) {
        LaurentPolynomial r(a.arity_);
        if (std::abs(s) == 0.0) return r;
        for (const auto& [p, c] : a.terms_) r.terms_[p] = c * s;
        return r;
    }
    friend LaurentPolynomial operator*(Complex s, const LaurentPolynomial& a) { return a * s; }
    friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        check_arity(a, b);
        LaurentPolynomial r(a.arity_);
        for (const auto& [p, cp] : a.terms_)
            for (const auto& [q, cq] : b.terms_) {
                LatticePoint s = p + q;
                auto it = r.terms_.find(s);
                if (it == r.terms_.end()) r.terms_[s] = cp * cq;
                else it->second += cp * cq;
            }
        return r.cleaned();
    }

    LaurentPolynomial shifted(const LatticePoint& d) const {
        LaurentPolynomial r(arity_);
        for (const auto& [p, c] : terms_) r.terms_[p + d] = c;
        return r;
    }

    // var: 0 = z, 1 = w, 2 = t
    LaurentPolynomial partial(int var) const {
        LaurentPolynomial r(arity_);
        for (const auto& [p, c] : terms_) {
            std::int64_t e = var == 0 ? p.j1 : var == 1 ? p.j2 : p.j3;
            if (e == 0) continue;
            LatticePoint q = p;
            (var == 0 ? q.j1 : var == 1 ? q.j2 : q.j3) -= 1;
            r.terms_[q] += c * static_cast<double>(e);
        }
        for (auto it = r.terms_.begin(); it != r.terms_.end();)
            it = std::abs(it->second) == 0.0 ? r.terms_.erase(it) : std::next(it);
        return r;
    }

    // z * d/dz (or w * d/dw): exponents unchanged, so safe for Laurent input.
    LaurentPolynomial euler(int var) const {
        LaurentPolynomial r(arity_);
        for (const auto& [p, c] : terms_) {
            std::int64_t e = var == 0 ? p.j1 : var == 1 ? p.j2 : p.j3;
            if (e == 0) continue;
            r.terms_[p] = c * static_cast<double>(e);
        }
        return r;
    }

    Complex evaluate(Complex z, Complex w, Complex t = {1.0, 0.0}) const {
        // Neumaier-compensated sum over exponent-ordered terms.
        if ((std::abs(z) == 0.0 && min_exp(0) < 0) || (std::abs(w) == 0.0 && min_exp(1) < 0) ||
            (arity_ == 3 && std::abs(t) == 0.0 && min_exp(2) < 0))
            throw std::runtime_error("evaluation at zero with negative exponents");
        double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
        auto add = [](double& s, double& comp, double v) {
            double t2 = s + v;
            if (std::abs(s) >= std::abs(v)) comp += (s - t2) + v;
            else comp += (v - t2) + s;
            s = t2;
        };
        for (const auto& [p, c] : terms_) {
            Complex term = c * cpow_int(z, p.j1) * cpow_int(w, p.j2);
            if (arity_ == 3 && p.j3 != 0) term *= cpow_int(t, p.j3);
            add(sr, cr, term.real());
            add(si, ci, term.imag());
        }
        return {sr + cr, si + ci};
    }

    std::int64_t min_exp(int var) const {
        std::int64_t m = 0;
        bool first = true;
        for (const auto& [p, c] : terms_) {
            std::int64_t e = var == 0 ? p.j1 : var == 1 ? p.j2 : p.j3;
            m = first ? e : std::min(m, e);
            first = false;
        }
        return m;
    }
    std::int64_t max_exp(int var) const {
        std::int64_t m = 0;
        bool first = true;
        for (const auto& [p, c] : terms_) {
            std::int64_t e = var == 0 ? p.j1 : var == 1 ? p.j2 : p.j3;
            m = first ? e : std::max(m, e);
            first = false;
        }
        return m;
    }

    // Divides out the monomial content z^a w^b (t^c for arity 3).
    LaurentPolynomial content_reduced(LatticePoint* removed = nullptr) const {
        if (terms_.empty()) return *this;
        LatticePoint d{min_exp(0), min_exp(1), arity_ == 3 ? min_exp(2) : 0};
        if (removed) *removed = d;
        return shifted(LatticePoint{-d.j1, -d.j2, -d.j3});
    }

    LaurentPolynomial apply_map(const AffineLatticeMap& map) const {
        if (!map.unimodular()) throw std::runtime_error("lattice map is not unimodular");
        LaurentPolynomial r(arity_);
        for (const auto& [p, c] : terms_) r.terms_[map.apply(p)] = c;
        return r;
    }

    // w -> w + 1 by exact binomial expansion with compensated accumulation.
    LaurentPolynomial shift_w(Complex offset = {1.0, 0.0}) const {
        if (min_exp(1) < 0) throw std::runtime_error("shift_w requires a polynomial in w");
        LaurentPolynomial r(arity_);
        std::map<LatticePoint, std::pair<Complex, Complex>> acc; // (sum, compensation)
        auto add = [&acc](const LatticePoint& p, Complex v) {
            auto& [s, comp] = acc[p];
            Complex t2 = s + v;
            Complex delta = (std::abs(s) >= std::abs(v)) ? (s - t2) + v : (v - t2) + s;
            comp += delta;
            s = t2;
        };
        for (const auto& [p, c] : terms_) {
            std::int64_t n = p.j2;
            // (w + offset)^n
            Complex binom{1.0, 0.0};
            for (std::int64_t k = 0; k <= n; ++k) {
                add(LatticePoint{p.j1, k, p.j3}, c * binom);
                if (k < n)
                    binom = binom * (static_cast<double>(n - k) / static_cast<double>(k + 1)) * offset;
            }
        }
        for (const auto& [p, sc] : acc) {
            Complex v = sc.first + sc.second;
            if (std::abs(v) != 0.0) r.terms_[p] = v;
        }
        return r.cleaned();
    }

    // Scales variable var by s: coefficients pick up s^exponent.
    LaurentPolynomial scale_var(int var, Complex s) const {
        LaurentPolynomial r(arity_);
        for (const auto& [p, c] : terms_) {
            std::int64_t e = var == 0 ? p.j1 : var == 1 ? p.j2 : p.j3;
            r.terms_[p] = c * cpow_int(s, e);
        }
        return r;
    }

    // Substitutes a numeric value for t, producing a bivariate polynomial.
    LaurentPolynomial substitute_t(Complex t) const {
        if (arity_ != 3) throw std::runtime_error("substitute_t needs a trivariate polynomial");
        LaurentPolynomial r(2);
        for (const auto& [p, c] : terms_) {
            LatticePoint q{p.j1, p.j2, 0};
            auto it = r.terms_.find(q);
            Complex v = c * cpow_int(t, p.j3);
            if (it == r.terms_.end()) r.terms_[q] = v;
            else it->second += v;
        }
        return r.cleaned();
    }

    LaurentPolynomial with_arity(int a) const {
        LaurentPolynomial r(a);
        for (const auto& [p, c] : terms_) {
            if (a == 2 && p.j3 != 0) throw std::runtime_error("cannot narrow arity: t-exponent present");
            r.terms_[p] = c;
        }
        return r;
    }

  private:
    static void check_arity(const LaurentPolynomial& a, const LaurentPolynomial& b) {
        if (a.arity_ != b.arity_) throw std::runtime_error("arity mismatch");
    }

    int arity_ = 2;
    std::map<LatticePoint, Complex> terms_;
};

// Convenience builders for tests and the catalog.
inline LaurentPolynomial var_z() { return LaurentPolynomial::monomial({1, 0}, 1.0); }
inline LaurentPolynomial var_w() { return LaurentPolynomial::monomial({0, 1}, 1.0); }

} // namespace logcrit
