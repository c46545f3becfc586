#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "arealaw/common.hpp"
#include "arealaw/quadrature.hpp"

namespace arealaw {

struct BoundaryNode {
    Eigen::Vector2d point;
    Eigen::Vector2d normal;  // exterior unit normal
    double weight = 0.0;     // arc-length weight
};

/// Bounded spatial domain: a disjoint interval union (d=1) or a disc /
/// axis-aligned polygon (d=2), plus nested differences of those. All are
/// piece-wise C^1 with positive boundary measure.
class Region {
  public:
    enum class Kind { IntervalUnion, Disc, Polygon, Difference };

    static Region intervals(std::vector<std::pair<double, double>> iv) {
        if (iv.empty()) throw GeometryError("Region: empty interval list");
        std::sort(iv.begin(), iv.end());
        for (const auto& [a, b] : iv)
            if (!(b > a)) throw GeometryError("Region: interval with non-positive length");
        for (std::size_t i = 0; i + 1 < iv.size(); ++i)
            if (iv[i + 1].first < iv[i].second - 1e-12)
                throw GeometryError("Region: intervals must be pairwise disjoint");
        Region r;
        r.kind_ = Kind::IntervalUnion;
        r.dim_ = 1;
        r.intervals_ = std::move(iv);
        return r;
    }

    static Region interval(double a, double b) { return intervals({{a, b}}); }

    static Region disc(double cx, double cy, double radius) {
        if (!(radius > 0.0)) throw GeometryError("Region: disc radius must be positive");
        Region r;
        r.kind_ = Kind::Disc;
        r.dim_ = 2;
        r.center_ = Eigen::Vector2d(cx, cy);
        r.radius_ = radius;
        return r;
    }

    /// Simple axis-aligned polygon; vertices in order, implicitly closed.
    static Region axis_polygon(std::vector<Eigen::Vector2d> vertices) {
        if (vertices.size() < 4) throw GeometryError("Region: polygon needs >= 4 vertices");
        const std::size_t n = vertices.size();
        double signed_area = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = vertices[i];
            const auto& q = vertices[(i + 1) % n];
            const bool horizontal = std::abs(p.y() - q.y()) < 1e-14;
            const bool vertical = std::abs(p.x() - q.x()) < 1e-14;
            if (horizontal == vertical) throw GeometryError("Region: polygon edges must be axis-aligned");
            signed_area += p.x() * q.y() - q.x() * p.y();
        }
        if (std::abs(signed_area) < 1e-14) throw GeometryError("Region: degenerate polygon");
        if (signed_area < 0.0) std::reverse(vertices.begin(), vertices.end());  // force CCW
        Region r;
        r.kind_ = Kind::Polygon;
        r.dim_ = 2;
        r.vertices_ = std::move(vertices);
        return r;
    }

    static Region rectangle(double x0, double y0, double x1, double y1) {
        return axis_polygon({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
    }

    /// outer minus inner. For interval unions the difference is computed
    /// exactly; in d=2 a composite region with membership tests is returned.
    static Region difference(const Region& outer, const Region& inner) {
        if (outer.dim() != inner.dim()) throw GeometryError("Region: dimension mismatch in difference");
        if (outer.dim() == 1) return intervals(subtract_intervals(outer.intervals_, inner.intervals_));
        Region r;
        r.kind_ = Kind::Difference;
        r.dim_ = 2;
        r.outer_ = std::make_shared<Region>(outer);
        r.inner_ = std::make_shared<Region>(inner);
        return r;
    }

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }

    double volume() const {
        switch (kind_) {
            case Kind::IntervalUnion: {
                double v = 0.0;
                for (const auto& [a, b] : intervals_) v += b - a;
                return v;
            }
            case Kind::Disc:
                return std::numbers::pi * radius_ * radius_;
            case Kind::Polygon: {
                double s = 0.0;
                for (std::size_t i = 0; i < vertices_.size(); ++i) {
                    const auto& p = vertices_[i];
                    const auto& q = vertices_[(i + 1) % vertices_.size()];
                    s += p.x() * q.y() - q.x() * p.y();
                }
                return 0.5 * std::abs(s);
            }
            case Kind::Difference:
                return outer_->volume() - inner_->volume();
        }
        return 0.0;
    }

    /// d=1: number of boundary points; d=2: perimeter.
    double boundary_measure() const {
        switch (kind_) {
            case Kind::IntervalUnion:
                return 2.0 * static_cast<double>(intervals_.size());
            case Kind::Disc:
                return 2.0 * std::numbers::pi * radius_;
            case Kind::Polygon: {
                double s = 0.0;
                for (std::size_t i = 0; i < vertices_.size(); ++i)
                    s += (vertices_[(i + 1) % vertices_.size()] - vertices_[i]).norm();
                return s;
            }
            case Kind::Difference:
                return outer_->boundary_measure() + inner_->boundary_measure();
        }
        return 0.0;
    }

    bool contains(double x) const {
        for (const auto& [a, b] : intervals_)
            if (x >= a && x <= b) return true;
        return false;
    }

    bool contains(double x, double y) const {
        switch (kind_) {
            case Kind::IntervalUnion:
                return contains(x);
            case Kind::Disc:
                return (Eigen::Vector2d(x, y) - center_).norm() <= radius_;
            case Kind::Polygon: {
                // ray cast along +x
                bool inside = false;
                const std::size_t n = vertices_.size();
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& p = vertices_[i];
                    const auto& q = vertices_[(i + 1) % n];
                    if ((p.y() > y) != (q.y() > y)) {
                        const double cross_x = p.x() + (y - p.y()) / (q.y() - p.y()) * (q.x() - p.x());
                        if (x < cross_x) inside = !inside;
                    }
                }
                return inside;
            }
            case Kind::Difference:
                return outer_->contains(x, y) && !inner_->contains(x, y);
        }
        return false;
    }

    bool contains_point(const Eigen::VectorXd& p) const {
        return dim_ == 1 ? contains(p[0]) : contains(p[0], p[1]);
    }

    /// Distance from a point to the closure (0 inside).
    double distance_to(const Eigen::Vector2d& p) const {
        switch (kind_) {
            case Kind::IntervalUnion: {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& [a, b] : intervals_) {
                    if (p.x() >= a && p.x() <= b) return 0.0;
                    best = std::min(best, std::min(std::abs(p.x() - a), std::abs(p.x() - b)));
                }
                return best;
            }
            case Kind::Disc:
                return std::max(0.0, (p - center_).norm() - radius_);
            case Kind::Polygon: {
                if (contains(p.x(), p.y())) return 0.0;
                return boundary_distance(p);
            }
            case Kind::Difference: {
                if (contains(p.x(), p.y())) return 0.0;
                if (!outer_->contains(p.x(), p.y())) return outer_->distance_to(p);
                return inner_->boundary_distance(p);
            }
        }
        return 0.0;
    }

    /// Distance from a point to the boundary set.
    double boundary_distance(const Eigen::Vector2d& p) const {
        switch (kind_) {
            case Kind::IntervalUnion: {
                double best = std::numeric_limits<double>::infinity();
                for (const auto& [a, b] : intervals_)
                    best = std::min({best, std::abs(p.x() - a), std::abs(p.x() - b)});
                return best;
            }
            case Kind::Disc:
                return std::abs((p - center_).norm() - radius_);
            case Kind::Polygon: {
                double best = std::numeric_limits<double>::infinity();
                const std::size_t n = vertices_.size();
                for (std::size_t i = 0; i < n; ++i)
                    best = std::min(best, segment_distance(p, vertices_[i], vertices_[(i + 1) % n]));
                return best;
            }
            case Kind::Difference:
                return std::min(outer_->boundary_distance(p), inner_->boundary_distance(p));
        }
        return 0.0;
    }

    /// Quadrature nodes on the boundary with exterior normals (d=2).
    /// Discs use uniform angles (spectrally accurate for periodic smooth
    /// integrands); polygons use per-edge Gauss-Legendre.
    std::vector<BoundaryNode> boundary_quadrature(int target_nodes = 256) const {
        std::vector<BoundaryNode> nodes;
        switch (kind_) {
            case Kind::IntervalUnion:
                throw GeometryError("boundary_quadrature: not defined in d=1");
            case Kind::Disc: {
                const int n = std::max(16, target_nodes);
                const double w = 2.0 * std::numbers::pi * radius_ / n;
                for (int i = 0; i < n; ++i) {
                    const double th = 2.0 * std::numbers::pi * (i + 0.5) / n;
                    const Eigen::Vector2d dir(std::cos(th), std::sin(th));
                    nodes.push_back({center_ + radius_ * dir, dir, w});
                }
                return nodes;
            }
            case Kind::Polygon: {
                const double perimeter = boundary_measure();
                const std::size_t n = vertices_.size();
                for (std::size_t i = 0; i < n; ++i) {
                    const Eigen::Vector2d a = vertices_[i];
                    const Eigen::Vector2d b = vertices_[(i + 1) % n];
                    const double len = (b - a).norm();
                    const Eigen::Vector2d tangent = (b - a) / len;
                    const Eigen::Vector2d normal(tangent.y(), -tangent.x());  // outward for CCW
                    const int panels =
                        std::max(1, static_cast<int>(std::round(target_nodes * len / perimeter / 16.0)));
                    const GaussRule& rule = gauss_legendre(16);
                    for (int pnl = 0; pnl < panels; ++pnl) {
                        const double lo = len * pnl / panels;
                        const double hi = len * (pnl + 1) / panels;
                        for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
                            const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * rule.nodes[g];
                            nodes.push_back({a + s * tangent, normal, 0.5 * (hi - lo) * rule.weights[g]});
                        }
                    }
                }
                return nodes;
            }
            case Kind::Difference: {
                nodes = outer_->boundary_quadrature(target_nodes);
                auto inner_nodes = inner_->boundary_quadrature(target_nodes);
                for (auto& bn : inner_nodes) bn.normal = -bn.normal;  // exterior of the difference
                nodes.insert(nodes.end(), inner_nodes.begin(), inner_nodes.end());
                return nodes;
            }
        }
        return nodes;
    }

    const std::vector<std::pair<double, double>>& interval_list() const {
        if (kind_ != Kind::IntervalUnion) throw GeometryError("interval_list: not an interval union");
        return intervals_;
    }

    /// Axis-aligned bounding box (d=2) or [min, max] x {0} (d=1).
    std::pair<Eigen::Vector2d, Eigen::Vector2d> bounding_box() const {
        switch (kind_) {
            case Kind::IntervalUnion:
                return {{intervals_.front().first, 0.0}, {intervals_.back().second, 0.0}};
            case Kind::Disc:
                return {center_.array() - radius_, center_.array() + radius_};
            case Kind::Polygon: {
                Eigen::Vector2d lo = vertices_.front(), hi = vertices_.front();
                for (const auto& v : vertices_) {
                    lo = lo.cwiseMin(v);
                    hi = hi.cwiseMax(v);
                }
                return {lo, hi};
            }
            case Kind::Difference:
                return outer_->bounding_box();
        }
        return {{0, 0}, {0, 0}};
    }

  private:
    static double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                                   const Eigen::Vector2d& b) {
        const Eigen::Vector2d ab = b - a;
        const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
        return (p - (a + t * ab)).norm();
    }

    static std::vector<std::pair<double, double>> subtract_intervals(
        const std::vector<std::pair<double, double>>& outer,
        const std::vector<std::pair<double, double>>& inner) {
        std::vector<std::pair<double, double>> result;
        for (auto [a, b] : outer) {
            double lo = a;
            for (const auto& [c, d] : inner) {
                if (d <= lo || c >= b) continue;
                if (c < lo + 1e-15) {
                    lo = std::max(lo, d);
                    continue;
                }
                result.emplace_back(lo, c);
                lo = d;
            }
            if (lo < b - 1e-15) result.emplace_back(lo, b);
        }
        if (result.empty()) throw GeometryError("Region: difference is empty");
        return result;
    }

    Kind kind_ = Kind::IntervalUnion;
    int dim_ = 1;
    std::vector<std::pair<double, double>> intervals_;
    Eigen::Vector2d center_{0.0, 0.0};
    double radius_ = 0.0;
    std::vector<Eigen::Vector2d> vertices_;
    std::shared_ptr<const Region> outer_, inner_;
};

/// dist(inner region, boundary of outer region); three-domain combinations
/// require this to be positive.
inline double region_gap(const Region& inner, const Region& outer) {
    if (inner.dim() != outer.dim()) throw GeometryError("region_gap: dimension mismatch");
    if (inner.dim() == 1) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [a, b] : outer.interval_list())
            for (double y : {a, b}) best = std::min(best, inner.distance_to(Eigen::Vector2d(y, 0.0)));
        return best;
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& node : outer.boundary_quadrature(512))
        best = std::min(best, inner.distance_to(node.point));
    return best;
}

}  // namespace arealaw
