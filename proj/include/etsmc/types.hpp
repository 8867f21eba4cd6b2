#pragma once

#include <Eigen/Dense>

namespace etsmc {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec4 = Eigen::Vector4d;

/// Joint index for the two-link limb: 0 = hip (link O1O2), 1 = knee (link O2O3).
enum class Joint : int { Hip = 0, Knee = 1 };

inline int index(Joint j) { return static_cast<int>(j); }

inline bool all_finite(const Vec2& v) { return v.allFinite(); }

}  // namespace etsmc
