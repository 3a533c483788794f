#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "logcrit/poly.hpp"
#include "logcrit/rational.hpp"

namespace logcrit {

inline std::int64_t cross2(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a.j1 - o.j1) * (b.j2 - o.j2) - (a.j2 - o.j2) * (b.j1 - o.j1);
}

inline std::int64_t lattice_gcd(std::int64_t a, std::int64_t b) {
    return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

// Lattice length of a segment: number of primitive steps between endpoints.
inline std::int64_t lattice_length(const LatticePoint& a, const LatticePoint& b) {
    return lattice_gcd(b.j1 - a.j1, b.j2 - a.j2);
}

inline LatticePoint primitive(const LatticePoint& v) {
    std::int64_t g = lattice_gcd(v.j1, v.j2);
    if (g == 0) throw std::runtime_error("primitive direction of zero vector");
    return {v.j1 / g, v.j2 / g};
}

// Strictly convex lattice polygon; vertices counterclockwise, starting at the
// lexicographically smallest. Degenerate hulls (point, segment) are allowed as
// data but rejected by area-demanding operations.
class LatticePolygon {
  public:
    LatticePolygon() = default;
    explicit LatticePolygon(std::vector<LatticePoint> verts) : v_(std::move(verts)) { canonicalize(); }

    static LatticePolygon hull_of(std::vector<LatticePoint> pts) {
        for (auto& p : pts) p.j3 = 0;
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        if (pts.size() <= 2) return LatticePolygon(pts);
        // Andrew monotone chain, strict turns only (no collinear vertices kept).
        std::vector<LatticePoint> lo, hi;
        for (const auto& p : pts) {
            while (lo.size() >= 2 && cross2(lo[lo.size() - 2], lo.back(), p) <= 0) lo.pop_back();
            lo.push_back(p);
        }
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            while (hi.size() >= 2 && cross2(hi[hi.size() - 2], hi.back(), *it) <= 0) hi.pop_back();
            hi.push_back(*it);
        }
        lo.pop_back();
        hi.pop_back();
        lo.insert(lo.end(), hi.begin(), hi.end());
        if (lo.size() == 2 && lo[0] == lo[1]) lo.pop_back();
        return LatticePolygon(lo);
    }

    const std::vector<LatticePoint>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    bool degenerate() const { return v_.size() < 3; }

    std::int64_t twice_area() const {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            const auto& a = v_[i];
            const auto& b = v_[(i + 1) % v_.size()];
            s += a.j1 * b.j2 - b.j1 * a.j2;
        }
        return s; // positive for CCW
    }

    bool contains(const LatticePoint& p) const {
        if (v_.empty()) return false;
        if (v_.size() == 1) return p == v_[0];
        if (v_.size() == 2) {
            if (cross2(v_[0], v_[1], p) != 0) return false;
            return std::min(v_[0].j1, v_[1].j1) <= p.j1 && p.j1 <= std::max(v_[0].j1, v_[1].j1) &&
                   std::min(v_[0].j2, v_[1].j2) <= p.j2 && p.j2 <= std::max(v_[0].j2, v_[1].j2);
        }
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (cross2(v_[i], v_[(i + 1) % v_.size()], p) < 0) return false;
        return true;
    }

    bool contains_interior(const LatticePoint& p) const {
        if (v_.size() < 3) return false;
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (cross2(v_[i], v_[(i + 1) % v_.size()], p) <= 0) return false;
        return true;
    }

    std::vector<LatticePoint> lattice_points() const {
        std::vector<LatticePoint> pts;
        if (v_.empty()) return pts;
        std::int64_t x0 = v_[0].j1, x1 = x0, y0 = v_[0].j2, y1 = y0;
        for (const auto& p : v_) {
            x0 = std::min(x0, p.j1); x1 = std::max(x1, p.j1);
            y0 = std::min(y0, p.j2); y1 = std::max(y1, p.j2);
        }
        for (std::int64_t x = x0; x <= x1; ++x)
            for (std::int64_t y = y0; y <= y1; ++y)
                if (contains({x, y})) pts.push_back({x, y});
        return pts;
    }

    std::int64_t interior_lattice_count() const {
        std::int64_t n = 0;
        for (const auto& p : lattice_points())
            if (contains_interior(p)) ++n;
        return n;
    }

    struct Edge {
        LatticePoint a, b;          // CCW order
        LatticePoint outer_normal;  // primitive
        std::int64_t length;        // lattice length
    };

    std::vector<Edge> edges() const {
        std::vector<Edge> es;
        if (v_.size() < 2) return es;
        std::size_t n = v_.size() == 2 ? 1 : v_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = v_[i];
            const auto& b = v_[(i + 1) % v_.size()];
            LatticePoint d = primitive(b - a);
            es.push_back({a, b, LatticePoint{d.j2, -d.j1}, lattice_length(a, b)});
        }
        return es;
    }

    friend bool operator==(const LatticePolygon& a, const LatticePolygon& b) { return a.v_ == b.v_; }
    friend bool operator<(const LatticePolygon& a, const LatticePolygon& b) { return a.v_ < b.v_; }

  private:
    void canonicalize() {
        if (v_.size() < 3) { std::sort(v_.begin(), v_.end()); v_.erase(std::unique(v_.begin(), v_.end()), v_.end()); return; }
        std::int64_t s = twice_area();
        if (s < 0) std::reverse(v_.begin(), v_.end());
        auto mn = std::min_element(v_.begin(), v_.end());
        std::rotate(v_.begin(), mn, v_.end());
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (cross2(v_[i], v_[(i + 1) % v_.size()], v_[(i + 2) % v_.size()]) <= 0)
                throw std::runtime_error("polygon is not strictly convex");
    }

    std::vector<LatticePoint> v_;
};

inline LatticePolygon newton_polygon(const LaurentPolynomial& f) {
    if (f.is_zero()) throw std::runtime_error("zero polynomial has no Newton polygon");
    return LatticePolygon::hull_of(f.support());
}

// Truncation to any lattice subset: polygon, edge (2-point polygon) or vertex.
inline LaurentPolynomial truncate(const LaurentPolynomial& f, const LatticePolygon& face) {
    LaurentPolynomial r(f.arity());
    for (const auto& [p, c] : f.terms())
        if (face.contains({p.j1, p.j2})) r.set_term(p, c);
    return r;
}

inline LaurentPolynomial truncate(const LaurentPolynomial& f, const LatticePoint& vertex) {
    LaurentPolynomial r(f.arity());
    for (const auto& [p, c] : f.terms())
        if (p.j1 == vertex.j1 && p.j2 == vertex.j2) r.set_term(p, c);
    return r;
}

// Integer-valued lift on the lattice points of a polygon.
struct ConvexLift {
    LatticePolygon domain;
    std::map<LatticePoint, std::int64_t> values;

    std::int64_t at(const LatticePoint& p) const {
        auto it = values.find(LatticePoint{p.j1, p.j2, 0});
        if (it == values.end()) throw std::runtime_error("lift undefined at " + p.str());
        return it->second;
    }

    void validate() const {
        for (const auto& p : domain.lattice_points())
            if (!values.count(p)) throw std::runtime_error("lift missing value at " + p.str());
    }
};

struct CellFunction {
    // nu restricted to the cell: g1*j1 + g2*j2 + c (rational in general)
    Rational g1, g2, c;
    Rational eval(const LatticePoint& p) const {
        return g1 * Rational(p.j1) + g2 * Rational(p.j2) + c;
    }
};

struct Subdivision {
    LatticePolygon parent;
    std::vector<LatticePolygon> cells;
    std::vector<CellFunction> cell_functions;

    struct InteriorEdge {
        std::size_t cell_a, cell_b;
        LatticePoint a, b; // endpoints
        std::int64_t length;
        LatticePoint direction; // primitive, from a to b
    };
    std::vector<InteriorEdge> interior_edges;

    bool same_cells(const Subdivision& other) const {
        auto s1 = cells, s2 = other.cells;
        std::sort(s1.begin(), s1.end());
        std::sort(s2.begin(), s2.end());
        return s1 == s2;
    }
};

// Projection of the lower convex hull of {(p, nu(p))}. Brute force over point
// triples; point sets here are tiny.
inline Subdivision subdivision_from_lift(const ConvexLift& lift) {
    lift.validate();
    if (lift.domain.degenerate()) throw std::runtime_error("degenerate lift domain");
    std::vector<LatticePoint> pts = lift.domain.lattice_points();
    const std::size_t n = pts.size();
    auto val = [&](std::size_t i) { return lift.at(pts[i]); };

    std::set<std::vector<std::size_t>> facets;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                if (cross2(pts[i], pts[j], pts[k]) == 0) continue;
                // normal of the lifted plane through i,j,k
                std::int64_t ux = pts[j].j1 - pts[i].j1, uy = pts[j].j2 - pts[i].j2, uz = val(j) - val(i);
                std::int64_t vx = pts[k].j1 - pts[i].j1, vy = pts[k].j2 - pts[i].j2, vz = val(k) - val(i);
                std::int64_t nx = uy * vz - uz * vy, ny = uz * vx - ux * vz, nz = ux * vy - uy * vx;
                if (nz == 0) continue;
                if (nz < 0) { nx = -nx; ny = -ny; nz = -nz; }
                bool lower = true;
                std::vector<std::size_t> on;
                for (std::size_t s = 0; s < n; ++s) {
                    std::int64_t d = nx * (pts[s].j1 - pts[i].j1) + ny * (pts[s].j2 - pts[i].j2) +
                                     nz * (val(s) - val(i));
                    if (d < 0) { lower = false; break; }
                    if (d == 0) on.push_back(s);
                }
                if (lower) facets.insert(on);
            }

    Subdivision sub;
    sub.parent = lift.domain;
    if (facets.empty()) {
        // all lifted points coplanar: the trivial subdivision
        facets.insert([&] {
            std::vector<std::size_t> all(n);
            std::iota(all.begin(), all.end(), 0);
            return all;
        }());
    }
    for (const auto& on : facets) {
        std::vector<LatticePoint> cpts;
        for (auto s : on) cpts.push_back(pts[s]);
        LatticePolygon cell = LatticePolygon::hull_of(cpts);
        if (cell.degenerate()) continue;
        // linear function on the cell from three non-collinear support points
        const auto& vs = cell.vertices();
        LatticePoint p0 = vs[0], p1 = vs[1], p2 = vs[2];
        std::int64_t a1 = p1.j1 - p0.j1, b1 = p1.j2 - p0.j2;
        std::int64_t a2 = p2.j1 - p0.j1, b2 = p2.j2 - p0.j2;
        std::int64_t det = a1 * b2 - b1 * a2;
        std::int64_t r1 = lift.at(p1) - lift.at(p0), r2 = lift.at(p2) - lift.at(p0);
        CellFunction cf;
        cf.g1 = Rational(r1 * b2 - r2 * b1, det);
        cf.g2 = Rational(a1 * r2 - a2 * r1, det);
        cf.c = Rational(lift.at(p0)) - cf.g1 * Rational(p0.j1) - cf.g2 * Rational(p0.j2);
        sub.cells.push_back(cell);
        sub.cell_functions.push_back(cf);
    }

    // interior edges: shared segments between cell pairs
    for (std::size_t a = 0; a < sub.cells.size(); ++a)
        for (std::size_t b = a + 1; b < sub.cells.size(); ++b)
            for (const auto& ea : sub.cells[a].edges())
                for (const auto& eb : sub.cells[b].edges())
                    if ((ea.a == eb.b && ea.b == eb.a) || (ea.a == eb.a && ea.b == eb.b)) {
                        Subdivision::InteriorEdge ie;
                        ie.cell_a = a; ie.cell_b = b;
                        ie.a = std::min(ea.a, ea.b); ie.b = std::max(ea.a, ea.b);
                        ie.length = ea.length;
                        ie.direction = primitive(ie.b - ie.a);
                        sub.interior_edges.push_back(ie);
                    }
    return sub;
}

inline bool certify_convex(const ConvexLift& lift, const Subdivision& claimed) {
    return subdivision_from_lift(lift).same_cells(claimed);
}

// Dual tropical curve. Vertices sit at the gradient of nu on each cell, so
// that Log_t images of Z(f_t) converge onto the graph.
struct TropicalCurve {
    std::vector<RationalPoint> vertices; // one per cell, same indexing

    struct BoundedEdge {
        std::size_t cell_a, cell_b;
        std::int64_t weight;
        LatticePoint dual_a, dual_b; // dual subdivision edge
    };
    struct Ray {
        std::size_t cell;
        LatticePoint direction; // primitive
        std::int64_t weight;
        LatticePoint dual_a, dual_b;
    };
    std::vector<BoundedEdge> bounded_edges;
    std::vector<Ray> rays;

    RationalPoint midpoint(const BoundedEdge& e) const {
        return {(vertices[e.cell_a].x + vertices[e.cell_b].x) / Rational(2),
                (vertices[e.cell_a].y + vertices[e.cell_b].y) / Rational(2)};
    }
};

inline TropicalCurve dual_tropical_curve(const Subdivision& sub, const ConvexLift& lift) {
    Subdivision check = subdivision_from_lift(lift);
    if (!check.same_cells(sub)) throw std::runtime_error("subdivision does not match lift");

    TropicalCurve tc;
    for (const auto& cf : sub.cell_functions) tc.vertices.push_back({cf.g1, cf.g2});
    for (const auto& ie : sub.interior_edges)
        tc.bounded_edges.push_back({ie.cell_a, ie.cell_b, ie.length, ie.a, ie.b});

    // one ray per boundary edge of a cell lying on the parent boundary
    auto is_interior = [&](const LatticePoint& a, const LatticePoint& b) {
        for (const auto& ie : sub.interior_edges)
            if ((ie.a == a && ie.b == b) || (ie.a == b && ie.b == a)) return true;
        return false;
    };
    for (std::size_t k = 0; k < sub.cells.size(); ++k)
        for (const auto& e : sub.cells[k].edges()) {
            LatticePoint a = std::min(e.a, e.b), b = std::max(e.a, e.b);
            if (is_interior(a, b)) continue;
            tc.rays.push_back({k, e.outer_normal, e.length, a, b});
        }
    return tc;
}

inline RationalPoint midpoint(const TropicalCurve& tc, std::size_t bounded_edge_index) {
    if (bounded_edge_index >= tc.bounded_edges.size())
        throw std::runtime_error("midpoint of unbounded or missing edge");
    return tc.midpoint(tc.bounded_edges[bounded_edge_index]);
}

} // namespace logcrit
