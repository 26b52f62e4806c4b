#ifndef NLBV_GRID_HPP
#define NLBV_GRID_HPP

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "nlbv/errors.hpp"

namespace nlbv {

/// Integer offset between two cells. For 1-d grids dy is always 0.
struct Offset {
    int dx = 0;
    int dy = 0;

    friend bool operator==(const Offset& a, const Offset& b) = default;
    Offset operator-() const { return {-dx, -dy}; }
    int chebyshev() const { return std::max(std::abs(dx), std::abs(dy)); }
};

/// Uniform grid in 1 or 2 dimensions. Cell (ix, iy) has its center at
/// origin + (ix*h, iy*h). Functions are extended by 0 and sets by the
/// empty set outside the grid; pad by the kernel window radius when
/// free-space semantics matter near the data.
class GridDomain {
public:
    GridDomain(int dim, std::array<int, 2> shape, double spacing,
               std::array<double, 2> origin = {0.0, 0.0})
        : dim_(dim), shape_(shape), h_(spacing), origin_(origin) {
        if (dim != 1 && dim != 2) throw InvalidParameter("grid dimension must be 1 or 2");
        if (dim == 1) shape_[1] = 1;
        if (shape_[0] < 1 || shape_[1] < 1) throw InvalidParameter("grid extents must be >= 1");
        if (!(spacing > 0)) throw InvalidParameter("grid spacing must be positive");
    }

    static GridDomain line(int nx, double h, double origin = 0.0) {
        return GridDomain(1, {nx, 1}, h, {origin, 0.0});
    }
    static GridDomain plane(int nx, int ny, double h, std::array<double, 2> origin = {0.0, 0.0}) {
        return GridDomain(2, {nx, ny}, h, origin);
    }

    int dim() const { return dim_; }
    int nx() const { return shape_[0]; }
    int ny() const { return shape_[1]; }
    std::int64_t size() const { return std::int64_t(shape_[0]) * shape_[1]; }
    double spacing() const { return h_; }
    double cell_measure() const { return dim_ == 1 ? h_ : h_ * h_; }
    const std::array<double, 2>& origin() const { return origin_; }

    int index(int ix, int iy) const { return ix + shape_[0] * iy; }
    int cell_x(int i) const { return i % shape_[0]; }
    int cell_y(int i) const { return i / shape_[0]; }
    bool contains(int ix, int iy) const {
        return ix >= 0 && ix < shape_[0] && iy >= 0 && iy < shape_[1];
    }

    double center_x(int i) const { return origin_[0] + cell_x(i) * h_; }
    double center_y(int i) const { return dim_ == 1 ? 0.0 : origin_[1] + cell_y(i) * h_; }

    /// Geometric center of the whole grid (may lie between cell centers).
    std::array<double, 2> grid_center() const {
        return {origin_[0] + 0.5 * (shape_[0] - 1) * h_,
                dim_ == 1 ? 0.0 : origin_[1] + 0.5 * (shape_[1] - 1) * h_};
    }

    friend bool operator==(const GridDomain& a, const GridDomain& b) {
        return a.dim_ == b.dim_ && a.shape_ == b.shape_ && a.h_ == b.h_ && a.origin_ == b.origin_;
    }

private:
    int dim_;
    std::array<int, 2> shape_;
    double h_;
    std::array<double, 2> origin_;
};

inline void require_same_grid(const GridDomain& a, const GridDomain& b, const char* what) {
    if (!(a == b)) throw GridMismatch(what);
}

/// Indicator of a measurable set restricted to a grid: one membership bit
/// per cell, cell count cached.
class DiscreteSet {
public:
    explicit DiscreteSet(const GridDomain& grid)
        : grid_(grid), bits_((grid.size() + 63) / 64, 0), count_(0) {}

    const GridDomain& grid() const { return grid_; }

    bool test(int i) const { return (bits_[i >> 6] >> (i & 63)) & 1u; }
    void set(int i, bool value) {
        std::uint64_t mask = std::uint64_t(1) << (i & 63);
        std::uint64_t& word = bits_[i >> 6];
        bool old = word & mask;
        if (old == value) return;
        if (value) { word |= mask; ++count_; }
        else       { word &= ~mask; --count_; }
    }

    std::int64_t cell_count() const { return count_; }
    bool empty() const { return count_ == 0; }
    bool full() const { return count_ == grid_.size(); }

    /// Lebesgue measure |E| = cell_count * h^n.
    double volume() const { return double(count_) * grid_.cell_measure(); }

    std::vector<int> cells() const {
        std::vector<int> out;
        out.reserve(count_);
        for (int i = 0; i < grid_.size(); ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    DiscreteSet complement() const {
        DiscreteSet out(grid_);
        for (int i = 0; i < grid_.size(); ++i) out.set(i, !test(i));
        return out;
    }
    DiscreteSet set_union(const DiscreteSet& other) const {
        require_same_grid(grid_, other.grid_, "set union");
        DiscreteSet out(grid_);
        for (int i = 0; i < grid_.size(); ++i) out.set(i, test(i) || other.test(i));
        return out;
    }
    DiscreteSet set_intersection(const DiscreteSet& other) const {
        require_same_grid(grid_, other.grid_, "set intersection");
        DiscreteSet out(grid_);
        for (int i = 0; i < grid_.size(); ++i) out.set(i, test(i) && other.test(i));
        return out;
    }
    bool subset_of(const DiscreteSet& other) const {
        require_same_grid(grid_, other.grid_, "subset test");
        for (std::size_t b = 0; b < bits_.size(); ++b)
            if (bits_[b] & ~other.bits_[b]) return false;
        return true;
    }

    friend bool operator==(const DiscreteSet& a, const DiscreteSet& b) {
        return a.grid_ == b.grid_ && a.bits_ == b.bits_;
    }

private:
    GridDomain grid_;
    std::vector<std::uint64_t> bits_;
    std::int64_t count_;
};

/// Real-valued cell array; implicit value 0 outside the grid.
class DiscreteFunction {
public:
    explicit DiscreteFunction(const GridDomain& grid)
        : grid_(grid), values_(Eigen::ArrayXd::Zero(grid.size())) {}
    DiscreteFunction(const GridDomain& grid, Eigen::ArrayXd values)
        : grid_(grid), values_(std::move(values)) {
        if (values_.size() != grid_.size()) throw GridMismatch("function values vs grid size");
        if (!values_.isFinite().all()) throw InvalidParameter("function values must be finite");
    }

    const GridDomain& grid() const { return grid_; }
    const Eigen::ArrayXd& values() const { return values_; }
    Eigen::ArrayXd& values() { return values_; }
    double operator[](int i) const { return values_[i]; }

    static DiscreteFunction indicator(const DiscreteSet& set) {
        DiscreteFunction f(set.grid());
        for (int i = 0; i < set.grid().size(); ++i)
            if (set.test(i)) f.values()[i] = 1.0;
        return f;
    }

    /// Strict superlevel set {u > t} within the grid.
    DiscreteSet superlevel(double t) const {
        DiscreteSet out(grid_);
        for (int i = 0; i < grid_.size(); ++i)
            if (values_[i] > t) out.set(i, true);
        return out;
    }

private:
    GridDomain grid_;
    Eigen::ArrayXd values_;
};

/// Admissible weight measure nu = w * Lebesgue with density bounded above
/// and away from zero; nu(E) = sum_{i in E} w_i h^n.
class WeightMeasure {
public:
    WeightMeasure(const GridDomain& grid, Eigen::ArrayXd density)
        : grid_(grid), w_(std::move(density)) {
        if (w_.size() != grid_.size()) throw GridMismatch("weight density vs grid size");
        w_lo_ = w_.minCoeff();
        w_hi_ = w_.maxCoeff();
        if (!(w_lo_ > 0) || !std::isfinite(w_hi_))
            throw InvalidParameter("weight density must satisfy 0 < min <= max < inf");
    }

    static WeightMeasure constant(const GridDomain& grid, double w = 1.0) {
        return WeightMeasure(grid, Eigen::ArrayXd::Constant(grid.size(), w));
    }

    const GridDomain& grid() const { return grid_; }
    const Eigen::ArrayXd& density() const { return w_; }
    double w_lo() const { return w_lo_; }
    double w_hi() const { return w_hi_; }

    double measure(const DiscreteSet& set) const {
        require_same_grid(grid_, set.grid(), "measure of set");
        double s = 0.0;
        for (int i = 0; i < grid_.size(); ++i)
            if (set.test(i)) s += w_[i];
        return s * grid_.cell_measure();
    }

    double symmetric_difference(const DiscreteSet& a, const DiscreteSet& b) const {
        require_same_grid(a.grid(), b.grid(), "symmetric difference");
        require_same_grid(grid_, a.grid(), "symmetric difference measure");
        double s = 0.0;
        for (int i = 0; i < grid_.size(); ++i)
            if (a.test(i) != b.test(i)) s += w_[i];
        return s * grid_.cell_measure();
    }

    /// L1(nu) distance between two functions on this grid.
    double l1_distance(const DiscreteFunction& u, const DiscreteFunction& f) const {
        require_same_grid(u.grid(), f.grid(), "L1 distance");
        require_same_grid(grid_, u.grid(), "L1 distance measure");
        return ((u.values() - f.values()).abs() * w_).sum() * grid_.cell_measure();
    }

private:
    GridDomain grid_;
    Eigen::ArrayXd w_;
    double w_lo_, w_hi_;
};

/// Cells whose centers lie within Euclidean distance r of `center`
/// (boundary rule: <= r).
DiscreteSet make_ball_set(const GridDomain& grid, std::array<double, 2> center, double r);

struct QuantizeResult {
    std::vector<double> thresholds;   ///< t_1 < ... < t_{m-1}, interior bin boundaries
    DiscreteFunction quantized;       ///< bin-midpoint values, within delta/2 of the input
    double delta = 0.0;               ///< bin width (max-min)/m
    bool constant_input = false;
};

/// Uniform m-level quantization over [min f, max f]. Superlevel sets
/// {f > t_k} are nested decreasing and agree with those of the returned
/// quantized function.
QuantizeResult quantize(const DiscreteFunction& f, int levels);

} // namespace nlbv

#endif
