#pragma once

// Unit system and nondimensionalization.
//
// All internal computations run in a dimensionless system with hbar = 1,
// time measured in units of 1/Omega and momentum in units of hbar*k. This
// keeps every coefficient that enters the integrators within a few orders
// of magnitude of unity; lab-frame Compton-scale frequencies never reach
// floating point.

#include <stdexcept>
#include <string>
#include <cmath>

namespace spdiff {

enum class Dim { Time, Length, Momentum, Frequency, Acceleration, Phase };

struct UnitSystem {
    double time_scale;      // seconds, characteristic 1/Omega
    double momentum_scale;  // kg m/s, hbar*k
    double length_scale;    // meters, 1/k
    double speed_of_light;  // m/s; configurable "toy c"
    double grav_accel;      // m/s^2

    UnitSystem(double t_s, double p_s, double l_s,
               double c = 299792458.0, double g = 9.81)
        : time_scale(t_s), momentum_scale(p_s), length_scale(l_s),
          speed_of_light(c), grav_accel(g)
    {
        auto ok = [](double v) { return v > 0.0 && std::isfinite(v); };
        if (!ok(time_scale) || !ok(momentum_scale) || !ok(length_scale) ||
            !ok(speed_of_light))
            throw std::invalid_argument("UnitSystem: scales must be positive and finite");
        if (!std::isfinite(grav_accel))
            throw std::invalid_argument("UnitSystem: grav_accel must be finite");
    }

    double scale_for(Dim kind) const {
        switch (kind) {
        case Dim::Time:         return time_scale;
        case Dim::Length:       return length_scale;
        case Dim::Momentum:     return momentum_scale;
        case Dim::Frequency:    return 1.0 / time_scale;
        case Dim::Acceleration: return length_scale / (time_scale * time_scale);
        case Dim::Phase:        return 1.0;  // radians pass through
        }
        throw std::invalid_argument("UnitSystem: unknown dimension tag");
    }

    // SI -> internal
    double nondimensionalize(double value, Dim kind) const {
        return value / scale_for(kind);
    }

    // internal -> SI
    double redimensionalize(double value, Dim kind) const {
        return value * scale_for(kind);
    }

    // Speed of light and gravitational acceleration in internal units.
    double c_internal() const { return nondimensionalize(speed_of_light, Dim::Length) * time_scale; }
    double g_internal() const { return nondimensionalize(grav_accel, Dim::Acceleration); }
};

} // namespace spdiff
