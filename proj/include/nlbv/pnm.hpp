#ifndef NLBV_PNM_HPP
#define NLBV_PNM_HPP

#include <string>

#include "nlbv/grid.hpp"

namespace nlbv {

/// Reads a P2/P5 grayscale PGM (maxval <= 65535) into a function with
/// values scaled to [0,1] on a unit-spacing grid.
DiscreteFunction load_pgm(const std::string& path, double spacing = 1.0);

/// Clamps u to [lo,hi], rescales to the gray range and writes binary P5.
/// Values already on the 8-bit lattice round-trip exactly at maxval 255.
void save_pgm(const std::string& path, const DiscreteFunction& u, double lo, double hi,
              int maxval = 255);

/// P1/P4 bitmap in/out for discrete sets (1 = member).
DiscreteSet load_pbm(const std::string& path, double spacing = 1.0);
void save_pbm(const std::string& path, const DiscreteSet& set);

/// Weight density from a PGM, rescaled affinely onto [w_lo, w_hi].
WeightMeasure load_weight_pgm(const std::string& path, double w_lo, double w_hi,
                              double spacing = 1.0);

} // namespace nlbv

#endif
