#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pathkac/errors.hpp"

namespace pathkac {

using Vec = std::vector<double>;

/// Euclidean norm of a coordinate vector.
inline double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

/// An H-valued continuous path sampled on a uniform time grid.
///
/// Values are stored flat, one m-vector per grid point. Off-grid queries
/// interpolate linearly. A path may carry a lifetime index: the first grid
/// index at which it is dead (values at or past it are undefined and checked
/// accessors refuse to read them). Paths are immutable once built; the
/// non-const accessors exist for construction code only.
class GridPath {
public:
    GridPath(double t0, double dt, std::size_t dim, std::size_t n_points)
        : t0_(t0), dt_(dt), m_(dim), data_(dim * n_points, 0.0) {
        if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0))
            throw RangeError("GridPath: dt must be positive and times finite");
        if (dim == 0 || n_points == 0)
            throw ShapeError("GridPath: empty dimension or grid");
    }

    /// Build from a flat row-major buffer (n_points rows of dim entries).
    /// Scans for non-finite entries; the first bad row marks the path dead there.
    static GridPath from_flat(double t0, double dt, std::size_t dim, Vec flat) {
        if (dim == 0 || flat.empty() || flat.size() % dim != 0)
            throw ShapeError("GridPath::from_flat: buffer size not a multiple of dim");
        GridPath p(t0, dt, dim, flat.size() / dim);
        p.data_ = std::move(flat);
        p.rescan_lifetime();
        return p;
    }

    double t0() const { return t0_; }
    double dt() const { return dt_; }
    std::size_t dim() const { return m_; }
    std::size_t size() const { return data_.size() / m_; }
    double final_time() const { return t0_ + static_cast<double>(size() - 1) * dt_; }
    double time_at(std::size_t i) const { return t0_ + static_cast<double>(i) * dt_; }

    bool alive() const { return !lifetime_.has_value(); }
    std::optional<std::size_t> lifetime() const { return lifetime_; }
    bool alive_at_index(std::size_t i) const { return !lifetime_ || i < *lifetime_; }

    /// Checked read: throws if the index is past the lifetime.
    std::span<const double> at(std::size_t i) const {
        check_alive(i);
        return raw(i);
    }

    /// Unchecked read (serialization and construction internals).
    std::span<const double> raw(std::size_t i) const {
        return {data_.data() + i * m_, m_};
    }

    std::span<double> mutable_at(std::size_t i) { return {data_.data() + i * m_, m_}; }

    const Vec& flat() const { return data_; }

    void mark_dead_from(std::size_t i) {
        if (!lifetime_ || i < *lifetime_) lifetime_ = i;
    }

    /// Re-derive the lifetime from entry finiteness.
    void rescan_lifetime() {
        lifetime_.reset();
        for (std::size_t i = 0; i < size(); ++i) {
            if (!all_finite(raw(i))) {
                lifetime_ = i;
                return;
            }
        }
    }

    /// Index of the grid point at time s; s must sit on the grid.
    std::size_t index_of(double s) const {
        double u = (s - t0_) / dt_;
        double r = std::round(u);
        if (std::abs(u - r) > grid_tol() || r < 0.0 || r > static_cast<double>(size() - 1))
            throw RangeError("time " + std::to_string(s) + " is not on the grid");
        return static_cast<std::size_t>(r);
    }

    /// Largest grid index with time <= s (snapping tolerance applied).
    std::size_t floor_index(double s) const {
        double u = (s - t0_) / dt_ + grid_tol();
        if (u < 0.0) throw RangeError("time " + std::to_string(s) + " precedes the grid");
        auto i = static_cast<std::size_t>(u);
        if (i > size() - 1) throw RangeError("time " + std::to_string(s) + " exceeds the grid");
        return i;
    }

    bool is_on_grid(double s) const {
        double u = (s - t0_) / dt_;
        double r = std::round(u);
        return std::abs(u - r) <= grid_tol() && r >= 0.0 && r <= static_cast<double>(size() - 1);
    }

    /// Value at an arbitrary time in [t0, T], linearly interpolated off-grid.
    Vec value_at(double s) const {
        std::size_t i = floor_index(s);
        double frac = (s - time_at(i)) / dt_;
        if (frac <= grid_tol()) {
            auto v = at(i);
            return Vec(v.begin(), v.end());
        }
        if (i + 1 > size() - 1) throw RangeError("interpolation time exceeds the grid");
        auto a = at(i);
        auto b = at(i + 1);
        Vec out(m_);
        for (std::size_t k = 0; k < m_; ++k) out[k] = (1.0 - frac) * a[k] + frac * b[k];
        return out;
    }

private:
    double grid_tol() const { return 1e-9; }  // in units of dt

    void check_alive(std::size_t i) const {
        if (lifetime_ && i >= *lifetime_)
            throw LifetimeError("path is dead at grid index " + std::to_string(i) +
                                " (t = " + std::to_string(time_at(i)) + ")");
        if (i >= size()) throw RangeError("grid index out of range");
    }

    double t0_;
    double dt_;
    std::size_t m_;
    Vec data_;
    std::optional<std::size_t> lifetime_;
};

/// sup-norm of the path up to time s: max Euclidean norm over grid points <= s.
inline double sup_norm(const GridPath& y, double s) {
    std::size_t last = y.floor_index(s);
    double best = 0.0;
    for (std::size_t i = 0; i <= last; ++i) best = std::max(best, norm2(y.at(i)));
    return best;
}

inline double sup_norm(const GridPath& y) { return sup_norm(y, y.final_time()); }

/// Prefix of y up to an on-grid time s.
inline GridPath restrict(const GridPath& y, double s) {
    std::size_t last = y.index_of(s);
    GridPath out(y.t0(), y.dt(), y.dim(), last + 1);
    for (std::size_t i = 0; i <= last; ++i) {
        auto src = y.at(i);
        std::copy(src.begin(), src.end(), out.mutable_at(i).begin());
    }
    return out;
}

/// Continuous pasting of y2 after y1: identity on [0,t1], shifted increments of
/// y2 on (t1, t1+t2], constant afterwards up to T. Requires matching grids,
/// both paths starting at 0, and t1 + t2 < T with T on the grid.
inline GridPath concat(const GridPath& y1, const GridPath& y2, double T) {
    if (y1.dim() != y2.dim()) throw ShapeError("concat: dimension mismatch");
    if (y1.dt() != y2.dt()) throw ShapeError("concat: grid step mismatch");
    if (y1.t0() != 0.0 || y2.t0() != 0.0) throw RangeError("concat: paths must start at time 0");
    if (!y1.alive() || !y2.alive()) throw LifetimeError("concat: dead input path");

    const double dt = y1.dt();
    const double n_total_f = T / dt;
    const double n_total_r = std::round(n_total_f);
    if (std::abs(n_total_f - n_total_r) > 1e-9) throw RangeError("concat: T is not on the grid");
    const auto n_total = static_cast<std::size_t>(n_total_r);

    const std::size_t i1 = y1.size() - 1;
    const std::size_t i2 = y2.size() - 1;
    if (i1 + i2 >= n_total) throw RangeError("concat: t1 + t2 must be strictly below T");

    const std::size_t m = y1.dim();
    GridPath out(0.0, dt, m, n_total + 1);
    auto base = y1.at(i1);
    auto z0 = y2.at(0);
    for (std::size_t i = 0; i <= n_total; ++i) {
        auto dst = out.mutable_at(i);
        if (i <= i1) {
            auto v = y1.at(i);
            std::copy(v.begin(), v.end(), dst.begin());
        } else {
            auto v = y2.at(std::min(i - i1, i2));
            for (std::size_t k = 0; k < m; ++k) dst[k] = v[k] - z0[k] + base[k];
        }
    }
    return out;
}

/// Pointwise difference of two paths on the same grid.
inline GridPath operator-(const GridPath& a, const GridPath& b) {
    if (a.dim() != b.dim() || a.size() != b.size()) throw ShapeError("path difference: shape mismatch");
    if (a.dt() != b.dt() || a.t0() != b.t0()) throw ShapeError("path difference: grid mismatch");
    GridPath out(a.t0(), a.dt(), a.dim(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto va = a.at(i);
        auto vb = b.at(i);
        auto dst = out.mutable_at(i);
        for (std::size_t k = 0; k < a.dim(); ++k) dst[k] = va[k] - vb[k];
    }
    return out;
}

/// Format a double with 17 significant digits (exact round trip).
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

/// CSV serialization: header `t,v0,...,v{m-1}`, one row per grid point.
inline void write_csv(const GridPath& y, std::ostream& os) {
    os << "t";
    for (std::size_t k = 0; k < y.dim(); ++k) os << ",v" << k;
    os << "\n";
    for (std::size_t i = 0; i < y.size(); ++i) {
        os << format_full(y.time_at(i));
        auto v = y.raw(i);
        for (double x : v) os << "," << format_full(x);
        os << "\n";
    }
}

inline GridPath read_path_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ShapeError("path CSV: missing header");
    std::size_t m = 0;
    for (char c : line)
        if (c == ',') ++m;
    if (m == 0) throw ShapeError("path CSV: header must name at least one coordinate");

    std::vector<double> times;
    Vec flat;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(row, cell, ',')) {
            double v = std::strtod(cell.c_str(), nullptr);
            if (col == 0)
                times.push_back(v);
            else
                flat.push_back(v);
            ++col;
        }
        if (col != m + 1) throw ShapeError("path CSV: ragged row");
    }
    if (times.empty()) throw ShapeError("path CSV: no data rows");
    double t0 = times.front();
    double dt = times.size() > 1 ? times[1] - times[0] : 1.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (std::abs(times[i] - times[i - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
            throw ShapeError("path CSV: non-uniform time grid");
    }
    return GridPath::from_flat(t0, dt, m, std::move(flat));
}

}  // namespace pathkac
