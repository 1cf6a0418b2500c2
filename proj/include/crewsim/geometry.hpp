#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace crewsim {

inline constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle into [-pi, pi).
inline double normalize_angle(double a) {
    double two_pi = 2.0 * kPi;
    a = std::fmod(a + kPi, two_pi);
    if (a < 0) a += two_pi;
    return a - kPi;
}

struct Pose2D {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;  // radians, normalized to [-pi, pi)

    friend bool operator==(const Pose2D&, const Pose2D&) = default;
};

inline Pose2D make_pose(double x, double y, double theta = 0.0) {
    return Pose2D{x, y, normalize_angle(theta)};
}

inline double planar_distance(const Pose2D& a, const Pose2D& b) {
    return std::hypot(b.x - a.x, b.y - a.y);
}

/// Fixed 2-decimal formatting used by every text rendering so prompts and
/// golden files stay byte-stable.
inline std::string fmt2(double v) {
    char buf[64];
    if (v == 0.0) v = 0.0;  // avoid "-0.00"
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

inline std::string fmt_pose(const Pose2D& p) {
    return "(" + fmt2(p.x) + ", " + fmt2(p.y) + ")";
}

}  // namespace crewsim
