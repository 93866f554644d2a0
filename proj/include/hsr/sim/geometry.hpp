#pragma once

#include <cmath>
#include <stdexcept>
#include <string_view>

namespace hsr::sim {

enum class Zone { Normal = 0, Overlap = 1 };

inline std::string_view to_string(Zone z) { return z == Zone::Normal ? "normal" : "overlap"; }

struct ZonePosition {
    Zone zone = Zone::Normal;
    /// Metres travelled into the overlap band; 0 outside it.
    double x_m = 0.0;
};

/// Cells repeat every 2R - D metres with position 0 at a cell centre. The
/// overlap band is D wide and centred on each cell boundary.
inline ZonePosition train_zone(double position_m, double cell_radius_m, double overlap_m) {
    if (!(cell_radius_m > 0 && overlap_m > 0 && overlap_m < 2 * cell_radius_m))
        throw std::invalid_argument("train_zone: require 0 < overlap < 2 * radius");
    if (!std::isfinite(position_m)) throw std::invalid_argument("train_zone: position must be finite");
    const double pitch = 2 * cell_radius_m - overlap_m;
    double u = std::fmod(position_m, pitch);
    if (u < 0) u += pitch;
    const double entry = pitch / 2 - overlap_m / 2;
    if (u >= entry && u < entry + overlap_m) return {Zone::Overlap, u - entry};
    return {Zone::Normal, 0.0};
}

/// Position of the n-th overlap entry (n >= 0) along the track.
inline double overlap_entry_m(long long n, double cell_radius_m, double overlap_m) {
    const double pitch = 2 * cell_radius_m - overlap_m;
    return static_cast<double>(n) * pitch + pitch / 2 - overlap_m / 2;
}

}  // namespace hsr::sim
