#include "nlbv/grid.hpp"

#include <algorithm>
#include <cmath>

namespace nlbv {

DiscreteSet make_ball_set(const GridDomain& grid, std::array<double, 2> center, double r) {
    if (!(r > 0)) throw InvalidParameter("ball radius must be positive");
    DiscreteSet out(grid);
    const double r2 = r * r;
    for (int i = 0; i < grid.size(); ++i) {
        double dx = grid.center_x(i) - center[0];
        double dy = grid.dim() == 2 ? grid.center_y(i) - center[1] : 0.0;
        if (dx * dx + dy * dy <= r2) out.set(i, true);
    }
    return out;
}

QuantizeResult quantize(const DiscreteFunction& f, int levels) {
    if (levels < 2) throw InvalidParameter("quantization needs at least 2 levels");
    QuantizeResult res{{}, DiscreteFunction(f.grid()), 0.0, false};
    const double lo = f.values().minCoeff();
    const double hi = f.values().maxCoeff();
    if (lo == hi) {
        res.quantized = f;
        res.constant_input = true;
        return res;
    }
    const double delta = (hi - lo) / levels;
    res.delta = delta;
    res.thresholds.reserve(levels - 1);
    for (int k = 1; k < levels; ++k) res.thresholds.push_back(lo + k * delta);

    Eigen::ArrayXd q(f.grid().size());
    for (int i = 0; i < f.grid().size(); ++i) {
        // bin index = number of thresholds strictly below the value, so the
        // quantized function has exactly the superlevel sets {f > t_k}
        int bin = 0;
        for (int k = 0; k < levels - 1; ++k)
            if (f[i] > res.thresholds[k]) ++bin;
        q[i] = lo + (bin + 0.5) * delta;
    }
    res.quantized = DiscreteFunction(f.grid(), std::move(q));
    return res;
}

} // namespace nlbv
