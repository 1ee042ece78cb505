#pragma once

#include "altproj/grid.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace altproj {

/// Additive ellipse on the continuous square [-1, 1]^2 (y up).
struct Ellipse {
    double additive_intensity = 0.0;
    double semi_axis_a = 1.0; // along the rotated x axis
    double semi_axis_b = 1.0; // along the rotated y axis
    double center_x = 0.0;
    double center_y = 0.0;
    double rotation_deg = 0.0;

    /// Boundary counts as inside.
    bool contains(double x, double y) const noexcept
    {
        const double phi = rotation_deg * std::numbers::pi / 180.0;
        const double c = std::cos(phi);
        const double s = std::sin(phi);
        const double dx = x - center_x;
        const double dy = y - center_y;
        const double u = (dx * c + dy * s) / semi_axis_a;
        const double v = (-dx * s + dy * c) / semi_axis_b;
        return u * u + v * v <= 1.0;
    }
};

struct PhantomSpec {
    std::vector<Ellipse> ellipses;
};

inline void validate(const PhantomSpec& spec)
{
    detail::require(!spec.ellipses.empty(), "PhantomSpec: at least one ellipse required");
    for (const Ellipse& e : spec.ellipses)
        detail::require(e.semi_axis_a > 0.0 && e.semi_axis_b > 0.0,
                        "PhantomSpec: semi-axes must be strictly positive");
}

/// Ten-ellipse Shepp-Logan head with the contrast-enhanced ("modified")
/// intensity table common to tomography toolkits.
inline PhantomSpec modified_shepp_logan_spec()
{
    return PhantomSpec{{
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
        {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
        {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
        {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
        {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
        {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
        {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
    }};
}

/// Unit disk of intensity 1, mostly useful for tests and smoke runs.
inline PhantomSpec unit_disk_spec()
{
    return PhantomSpec{{{1.0, 1.0, 1.0, 0.0, 0.0, 0.0}}};
}

/// Continuous coordinates of the center of pixel (i, j) on an n-grid.
inline double pixel_center_x(std::size_t j, std::size_t n)
{
    return static_cast<double>(2 * j + 1) / static_cast<double>(n) - 1.0;
}

inline double pixel_center_y(std::size_t i, std::size_t n)
{
    return 1.0 - static_cast<double>(2 * i + 1) / static_cast<double>(n);
}

/// Point-sampled (non-antialiased) rasterization at pixel centers. Each pixel
/// sums the intensities of the ellipses containing its center, in table order.
inline Image rasterize(const PhantomSpec& spec, std::size_t n)
{
    detail::require(n >= 2, "rasterize: n must be at least 2");
    validate(spec);

    Image img(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = pixel_center_y(i, n);
        for (std::size_t j = 0; j < n; ++j) {
            const double x = pixel_center_x(j, n);
            double value = 0.0;
            for (const Ellipse& e : spec.ellipses)
                if (e.contains(x, y))
                    value += e.additive_intensity;
            img(i, j) = value;
        }
    }
    return img;
}

} // namespace altproj
