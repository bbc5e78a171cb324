#pragma once

#include <functional>

#include "pifem/geometry.hpp"

namespace pifem {

/// Which side of the interface a point (or sub-region) belongs to.
/// Minus is the region {phi < 0}, Plus is {phi > 0}.
enum class Side { Minus, Plus };

inline Side opposite(Side s) { return s == Side::Minus ? Side::Plus : Side::Minus; }

/// Analytic moving interface given as the zero set of a signed function.
struct LevelSet {
    std::function<double(Vec2, double)> phi;       // (point, time) -> signed value
    std::function<Vec2(Vec2, double)> grad_phi;    // spatial gradient
    double velocity_normal_bound = 0.0;            // max |V . n| along the interface
};

// Scalar/vector fields defined separately on each side of the interface.
using SideScalarFn = std::function<double(Vec2, Side, double)>;
using SideVectorFn = std::function<Vec2(Vec2, Side, double)>;

}  // namespace pifem
