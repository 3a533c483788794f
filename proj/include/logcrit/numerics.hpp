#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "logcrit/poly.hpp"

namespace logcrit {

// Central tolerance configuration; every module reads from here.
struct Tolerances {
    double root_residual = 1e-12;       // univariate root refinement target
    double root_cluster = 1e-8;         // multiplicity cluster radius
    double joint_residual = 1e-10;      // bivariate system refinement target
    double coeff_drop = 1e-14;          // term cleanup, relative
    double coeff_check = 1e-8;          // symbolic coefficient identities, relative
    double torus_band_lo = 1e-8;        // reported (C*)^2 membership band
    double torus_band_hi = 1e8;
    double solve_band_lo = 1e-12;       // internal band for tracked fibers
    double solve_band_hi = 1e12;
    double track_collision = 1e-6;      // strand collision flag
    double step_underflow = 1e-12;      // relative to schedule span
    double branch_real_threshold = 1e-6; // Cr-smoothness margin
    double trop_classify = 0.05;        // tropical-limit classification radius
    double epsilon_disc = 0.1;          // |t| bound for membership certificates
    int n_theta = 720;                  // default monodromy resolution
    int aberth_max_iter = 400;
    int newton_max_iter = 60;
    unsigned threads = 0;               // 0 = hardware concurrency
};

inline Tolerances& default_tolerances() {
    static Tolerances tol;
    return tol;
}

// ---------------------------------------------------------------------------
// Univariate polynomials (dense, ascending degree)
// ---------------------------------------------------------------------------

struct UnivariatePoly {
    std::vector<Complex> c; // c[0] + c[1] x + ...

    UnivariatePoly() = default;
    explicit UnivariatePoly(std::vector<Complex> coeffs) : c(std::move(coeffs)) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    double max_mag() const {
        double m = 0;
        for (const auto& x : c) m = std::max(m, std::abs(x));
        return m;
    }

    UnivariatePoly trimmed(double rel = 1e-14) const {
        double m = max_mag();
        std::size_t n = c.size();
        while (n > 0 && std::abs(c[n - 1]) <= rel * m) --n;
        return UnivariatePoly(std::vector<Complex>(c.begin(), c.begin() + n));
    }

    Complex eval(Complex x) const {
        Complex r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
        return r;
    }

    // Scale at which |p(x)| should be compared: sum |c_i| |x|^i.
    double eval_scale(Complex x) const {
        double ax = std::abs(x), pw = 1.0, s = 0.0;
        for (const auto& ci : c) { s += std::abs(ci) * pw; pw *= ax; }
        return s;
    }

    UnivariatePoly derivative() const {
        if (c.size() <= 1) return UnivariatePoly{};
        std::vector<Complex> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
        return UnivariatePoly(std::move(d));
    }
};

struct RootWithMultiplicity {
    Complex value;
    int multiplicity;
    double residual;
};

// Aberth-Ehrlich simultaneous iteration. Zero roots (exactly vanishing low
// coefficients) are split off first; clusters within tol.root_cluster are
// merged and reported with multiplicity.
inline std::vector<RootWithMultiplicity> roots(const UnivariatePoly& p_in,
                                               const Tolerances& tol = default_tolerances()) {
    UnivariatePoly p = p_in.trimmed();
    if (p.degree() < 1) throw std::runtime_error("roots: degree must be >= 1");

    int zero_mult = 0;
    while (!p.c.empty() && std::abs(p.c[0]) == 0.0) {
        p.c.erase(p.c.begin());
        ++zero_mult;
    }
    std::vector<RootWithMultiplicity> out;
    if (zero_mult > 0) out.push_back({Complex{0, 0}, zero_mult, 0.0});
    int n = p.degree();
    if (n < 1) return out;

    // initial guesses on a circle sized by the coefficient profile
    double lead = std::abs(p.c.back());
    double radius = 0.0;
    for (int i = 0; i < n; ++i)
        radius = std::max(radius, 2.0 * std::pow(std::abs(p.c[i]) / lead, 1.0 / double(n - i)));
    if (radius == 0.0) radius = 1.0;
    std::vector<Complex> x(n);
    for (int i = 0; i < n; ++i) {
        double ang = 2.0 * M_PI * i / n + 0.376991;
        x[i] = radius * Complex{std::cos(ang), std::sin(ang)};
    }

    UnivariatePoly dp = p.derivative();
    double best_worst = 1e300;
    for (int iter = 0; iter < tol.aberth_max_iter; ++iter) {
        double worst = 0.0;
        bool moved = false;
        for (int i = 0; i < n; ++i) {
            Complex pv = p.eval(x[i]);
            double scale = p.eval_scale(x[i]);
            double res = std::abs(pv) / (scale > 0 ? scale : 1.0);
            worst = std::max(worst, res);
            if (res < 1e-16) continue;
            Complex dv = dp.eval(x[i]);
            Complex ratio = (std::abs(dv) == 0.0) ? Complex{1e-30, 0} : pv / dv;
            Complex sum = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) {
                    Complex diff = x[i] - x[j];
                    if (std::abs(diff) < 1e-300) diff = Complex{1e-300, 0};
                    sum += 1.0 / diff;
                }
            Complex denom = 1.0 - ratio * sum;
            Complex corr = (std::abs(denom) < 1e-300) ? ratio : ratio / denom;
            x[i] -= corr;
            if (std::abs(corr) > 1e-15 * (1.0 + std::abs(x[i]))) moved = true;
        }
        best_worst = std::min(best_worst, worst);
        if (worst < tol.root_residual || !moved) break;
        if (iter == tol.aberth_max_iter - 1)
            throw std::runtime_error("roots: no convergence, best residual " + std::to_string(best_worst));
    }

    // cluster into multiplicities
    std::vector<bool> used(n, false);
    for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        std::vector<int> cluster{i};
        used[i] = true;
        for (int j = i + 1; j < n; ++j)
            if (!used[j] && std::abs(x[i] - x[j]) < tol.root_cluster * (1.0 + std::abs(x[i]))) {
                cluster.push_back(j);
                used[j] = true;
            }
        Complex center = 0;
        for (int k : cluster) center += x[k];
        center /= double(cluster.size());
        double scale = p.eval_scale(center);
        out.push_back({center, static_cast<int>(cluster.size()),
                       std::abs(p.eval(center)) / (scale > 0 ? scale : 1.0)});
    }
    return out;
}

inline std::vector<Complex> simple_roots(const UnivariatePoly& p,
                                         const Tolerances& tol = default_tolerances()) {
    std::vector<Complex> r;
    for (const auto& rm : roots(p, tol))
        for (int k = 0; k < rm.multiplicity; ++k) r.push_back(rm.value);
    return r;
}

// ---------------------------------------------------------------------------
// Bivariate view: a Laurent polynomial as a polynomial in w with univariate
// z-coefficients (after clearing the monomial content).
// ---------------------------------------------------------------------------

struct BivariateView {
    std::vector<UnivariatePoly> wcols; // index = w-degree
    int degw() const { return static_cast<int>(wcols.size()) - 1; }

    static BivariateView of(const LaurentPolynomial& f_in) {
        LaurentPolynomial f = f_in.content_reduced();
        BivariateView v;
        std::int64_t dw = f.max_exp(1), dz = f.max_exp(0);
        v.wcols.assign(dw + 1, UnivariatePoly{});
        for (auto& col : v.wcols) col.c.assign(dz + 1, Complex{0, 0});
        for (const auto& [p, c] : f.terms()) v.wcols[p.j2].c[p.j1] = c;
        return v;
    }

    UnivariatePoly at_z(Complex z) const {
        std::vector<Complex> wc(wcols.size());
        for (std::size_t j = 0; j < wcols.size(); ++j) wc[j] = wcols[j].eval(z);
        return UnivariatePoly(std::move(wc));
    }
};

// Sylvester determinant of (f, g) in w, entries evaluated at z. Fixed shape
// (m, n) = full w-degrees, so evaluation commutes with the determinant.
inline Complex sylvester_det_at(const BivariateView& f, const BivariateView& g, Complex z) {
    int m = f.degw(), n = g.degw();
    if (m == 0 && n == 0) return {1.0, 0.0};
    int N = m + n;
    std::vector<Complex> M(static_cast<std::size_t>(N) * N, Complex{0, 0});
    std::vector<Complex> fv(m + 1), gv(n + 1);
    for (int k = 0; k <= m; ++k) fv[k] = f.wcols[k].eval(z);
    for (int k = 0; k <= n; ++k) gv[k] = g.wcols[k].eval(z);
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) M[r * N + r + k] = fv[m - k];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) M[(n + r) * N + r + k] = gv[n - k];
    // LU with partial pivoting
    Complex det{1.0, 0.0};
    for (int col = 0; col < N; ++col) {
        int piv = col;
        double mx = std::abs(M[col * N + col]);
        for (int r = col + 1; r < N; ++r)
            if (std::abs(M[r * N + col]) > mx) { mx = std::abs(M[r * N + col]); piv = r; }
        if (mx == 0.0) return {0.0, 0.0};
        if (piv != col) {
            for (int k = col; k < N; ++k) std::swap(M[piv * N + k], M[col * N + k]);
            det = -det;
        }
        det *= M[col * N + col];
        for (int r = col + 1; r < N; ++r) {
            Complex factor = M[r * N + col] / M[col * N + col];
            for (int k = col; k < N; ++k) M[r * N + k] -= factor * M[col * N + k];
        }
    }
    return det;
}

// Resultant in w by evaluation-interpolation on a circle of sample points
// (plain DFT recovery; unitary, so coefficients come back at the noise floor
// of the sampled determinant values).
inline UnivariatePoly resultant_w_sampled(const BivariateView& f, const BivariateView& g,
                                          double radius) {
    int degz_f = 0, degz_g = 0;
    for (const auto& col : f.wcols) degz_f = std::max(degz_f, col.degree());
    for (const auto& col : g.wcols) degz_g = std::max(degz_g, col.degree());
    int D = degz_f * g.degw() + degz_g * f.degw();
    int K = D + 1;
    std::vector<Complex> vals(K);
    for (int s = 0; s < K; ++s) {
        double ang = 2.0 * M_PI * s / K;
        vals[s] = sylvester_det_at(f, g, radius * Complex{std::cos(ang), std::sin(ang)});
    }
    std::vector<Complex> coeffs(K);
    for (int k = 0; k < K; ++k) {
        Complex acc = 0;
        for (int s = 0; s < K; ++s) {
            double ang = -2.0 * M_PI * k * s / K;
            acc += vals[s] * Complex{std::cos(ang), std::sin(ang)};
        }
        coeffs[k] = acc / (double(K) * std::pow(radius, k));
    }
    return UnivariatePoly(std::move(coeffs));
}

inline UnivariatePoly resultant_w(const LaurentPolynomial& f_in, const LaurentPolynomial& g_in) {
    LaurentPolynomial f = f_in.content_reduced(), g = g_in.content_reduced();
    if (f.max_exp(1) == 0 && g.max_exp(1) == 0)
        throw std::runtime_error("resultant_w: both inputs independent of w");
    return resultant_w_sampled(BivariateView::of(f), BivariateView::of(g), 1.0);
}

// ---------------------------------------------------------------------------
// Zero-dimensional bivariate solving
// ---------------------------------------------------------------------------

struct SystemSolution {
    Complex z, w;
    double residual;
};

namespace detail {

inline double rel_point_dist(Complex az, Complex aw, Complex bz, Complex bw) {
    return std::abs(az - bz) / (1e-12 + std::abs(az) + std::abs(bz)) +
           std::abs(aw - bw) / (1e-12 + std::abs(aw) + std::abs(bw));
}

struct PairEvaluator {
    LaurentPolynomial f, g, fz, fw, gz, gw;
    double fscale = 1.0, gscale = 1.0;

    PairEvaluator(const LaurentPolynomial& F, const LaurentPolynomial& G) {
        f = F; g = G;
        fz = f.partial(0); fw = f.partial(1);
        gz = g.partial(0); gw = g.partial(1);
        fscale = std::max(f.max_coeff_magnitude(), 1e-300);
        gscale = std::max(g.max_coeff_magnitude(), 1e-300);
    }

    double poly_scale(const LaurentPolynomial& p, Complex z, Complex w) const {
        double s = 0, az = std::abs(z), aw = std::abs(w);
        for (const auto& [e, c] : p.terms())
            s += std::abs(c) * std::pow(az, double(e.j1)) * std::pow(aw, double(e.j2));
        return std::max(s, 1e-300);
    }

    // Newton on the pair; returns relative joint residual, or nullopt.
    std::optional<double> refine(Complex& z, Complex& w, const Tolerances& tol) const {
        for (int it = 0; it < tol.newton_max_iter; ++it) {
            Complex F = f.evaluate(z, w), G = g.evaluate(z, w);
            Complex a = fz.evaluate(z, w), b = fw.evaluate(z, w);
            Complex c = gz.evaluate(z, w), d = gw.evaluate(z, w);
            Complex det = a * d - b * c;
            if (std::abs(det) < 1e-300) return std::nullopt;
            Complex dz = (-F * d + G * b) / det;
            Complex dw = (-G * a + F * c) / det;
            z += dz;
            w += dw;
            if (std::abs(dz) + std::abs(dw) < 1e-14 * (1.0 + std::abs(z) + std::abs(w))) break;
        }
        double r1 = std::abs(f.evaluate(z, w)) / poly_scale(f, z, w);
        double r2 = std::abs(g.evaluate(z, w)) / poly_scale(g, z, w);
        return std::max(r1, r2);
    }
};

inline std::vector<Complex> resultant_root_candidates(const BivariateView& fv,
                                                      const BivariateView& gv,
                                                      const Tolerances& tol) {
    UnivariatePoly R = resultant_w_sampled(fv, gv, 1.0);
    double mx = R.max_mag();
    if (mx == 0.0) throw std::runtime_error("non-isolated solutions");
    int lead = R.degree();
    while (lead > 0 && std::abs(R.c[lead]) < 1e-10 * mx) --lead;
    int low = 0;
    while (low < lead && std::abs(R.c[low]) < 1e-280) ++low;
    if (lead <= low) throw std::runtime_error("non-isolated solutions");

    std::vector<Complex> cand;
    auto add_roots = [&](const UnivariatePoly& P) {
        UnivariatePoly Q = P;
        if (Q.degree() >= 1) {
            try {
                for (const auto& rm : roots(Q, tol))
                    for (int k = 0; k < rm.multiplicity; ++k) cand.push_back(rm.value);
            } catch (const std::exception&) {
                // keep whatever other branches provide
            }
        }
    };
    add_roots(UnivariatePoly(std::vector<Complex>(R.c.begin() + low, R.c.begin() + lead + 1)));

    // re-sample at the geometric-mean root radius when magnitudes are skew
    double rho = std::pow(std::abs(R.c[low]) / std::abs(R.c[lead]), 1.0 / double(lead - low));
    if (std::isfinite(rho) && rho > 0 && (rho < 0.2 || rho > 5.0)) {
        UnivariatePoly R2 = resultant_w_sampled(fv, gv, rho);
        double mx2 = R2.max_mag();
        int l2 = R2.degree();
        while (l2 > 0 && std::abs(R2.c[l2]) < 1e-10 * mx2) --l2;
        int lo2 = 0;
        while (lo2 < l2 && std::abs(R2.c[lo2]) < 1e-280) ++lo2;
        if (l2 > lo2)
            add_roots(UnivariatePoly(std::vector<Complex>(R2.c.begin() + lo2, R2.c.begin() + l2 + 1)));
    }
    return cand;
}

} // namespace detail

// Solves {f = g = 0} in (C*)^2: resultant in w, back-substitution, joint
// Newton refinement, torus-band filter, dedupe.
inline std::vector<SystemSolution> solve_system(const LaurentPolynomial& f_in,
                                                const LaurentPolynomial& g_in,
                                                const Tolerances& tol = default_tolerances(),
                                                double band_lo = -1.0, double band_hi = -1.0) {
    if (band_lo < 0) band_lo = tol.torus_band_lo;
    if (band_hi < 0) band_hi = tol.torus_band_hi;
    LaurentPolynomial f = f_in.content_reduced(), g = g_in.content_reduced();
    if (f.is_zero() || g.is_zero()) throw std::runtime_error("solve_system: zero polynomial");

    if (f.max_exp(1) == 0 && g.max_exp(1) > 0) std::swap(f, g);
    detail::PairEvaluator ev(f, g);
    std::vector<SystemSolution> out;
    auto push_candidate = [&](Complex z0, Complex w0) {
        if (!(band_lo < std::abs(z0) && std::abs(z0) < band_hi)) return;
        if (!(band_lo < std::abs(w0) && std::abs(w0) < band_hi)) return;
        Complex z = z0, w = w0;
        auto res = ev.refine(z, w, tol);
        if (!res || *res > tol.joint_residual) return;
        if (!(band_lo < std::abs(z) && std::abs(z) < band_hi)) return;
        if (!(band_lo < std::abs(w) && std::abs(w) < band_hi)) return;
        for (const auto& s : out)
            if (detail::rel_point_dist(s.z, s.w, z, w) < 1e-8) return;
        out.push_back({z, w, *res});
    };

    if (g.max_exp(1) == 0) {
        // both independent of w after clearing: zero-dimensionality fails
        throw std::runtime_error("non-isolated solutions");
    }
    if (f.max_exp(1) == 0) {
        // f univariate in z: solve it, back-substitute in g
        UnivariatePoly pz;
        pz.c.assign(f.max_exp(0) + 1, Complex{0, 0});
        for (const auto& [p, c] : f.terms()) pz.c[p.j1] = c;
        BivariateView gv = BivariateView::of(g);
        for (Complex z0 : simple_roots(pz.trimmed(), tol)) {
            UnivariatePoly wp = gv.at_z(z0).trimmed(1e-13);
            if (wp.degree() < 1) continue;
            for (Complex w0 : simple_roots(wp, tol)) push_candidate(z0, w0);
        }
        return out;
    }

    BivariateView fv = BivariateView::of(f), gv = BivariateView::of(g);
    for (Complex z0 : detail::resultant_root_candidates(fv, gv, tol)) {
        UnivariatePoly wp = fv.at_z(z0).trimmed(1e-13);
        if (wp.degree() < 1) {
            wp = gv.at_z(z0).trimmed(1e-13);
            if (wp.degree() < 1) continue;
        }
        for (Complex w0 : simple_roots(wp, tol)) push_candidate(z0, w0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Predictor-corrector path tracking for 1-parameter families of systems
// ---------------------------------------------------------------------------

struct PathTrack {
    std::vector<Complex> samples;                       // retained parameter values
    std::vector<std::vector<std::pair<Complex, Complex>>> strands; // [strand][sample]
    std::vector<bool> collision_flag;                   // per strand
};

// family(s) must return the pair (f_s, g_s) of bivariate polynomials.
inline PathTrack track(const std::function<std::pair<LaurentPolynomial, LaurentPolynomial>(Complex)>& family,
                       const std::vector<std::pair<Complex, Complex>>& starts,
                       const std::vector<Complex>& schedule,
                       const Tolerances& tol = default_tolerances()) {
    if (schedule.size() < 2) throw std::runtime_error("track: schedule needs at least two samples");
    PathTrack pt;
    pt.samples = schedule;
    pt.strands.assign(starts.size(), {});
    pt.collision_flag.assign(starts.size(), false);

    double span = 0.0;
    for (std::size_t i = 1; i < schedule.size(); ++i)
        span += std::abs(schedule[i] - schedule[i - 1]);

    std::vector<std::pair<Complex, Complex>> cur = starts;
    for (auto& s : pt.strands) s.reserve(schedule.size());
    for (std::size_t i = 0; i < starts.size(); ++i) pt.strands[i].push_back(starts[i]);

    for (std::size_t seg = 1; seg < schedule.size(); ++seg) {
        Complex s0 = schedule[seg - 1], s1 = schedule[seg];
        for (std::size_t i = 0; i < cur.size(); ++i) {
            Complex a = s0;
            auto [z, w] = cur[i];
            Complex target = s1;
            while (std::abs(a - target) > 0) {
                Complex step = target - a;
                bool ok = false;
                for (int halve = 0; halve < 45 && !ok; ++halve) {
                    Complex b = a + step;
                    auto [fb, gb] = family(b);
                    detail::PairEvaluator ev(fb, gb);
                    Complex zz = z, ww = w;
                    auto res = ev.refine(zz, ww, tol);
                    double move = detail::rel_point_dist(z, w, zz, ww);
                    if (res && *res < tol.joint_residual && move < 0.5) {
                        a = b; z = zz; w = ww; ok = true;
                    } else {
                        step *= 0.5;
                        if (std::abs(step) < tol.step_underflow * span)
                            throw std::runtime_error("track: step underflow on strand " +
                                                     std::to_string(i) + " near parameter (" +
                                                     std::to_string(a.real()) + "," +
                                                     std::to_string(a.imag()) + ")");
                    }
                }
                if (!ok)
                    throw std::runtime_error("track: corrector failure on strand " + std::to_string(i));
            }
            cur[i] = {z, w};
            pt.strands[i].push_back(cur[i]);
        }
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t j = i + 1; j < cur.size(); ++j)
                if (detail::rel_point_dist(cur[i].first, cur[i].second, cur[j].first, cur[j].second) <
                    tol.track_collision)
                    pt.collision_flag[i] = pt.collision_flag[j] = true;
    }
    return pt;
}

} // namespace logcrit
