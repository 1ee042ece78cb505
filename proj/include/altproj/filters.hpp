#pragma once

// Prior-side projections: nonlinear filters applied to the current iterate,
// each with one strength parameter that is annealed across outer iterations.
//
//   PeronaMalik           explicit 4-neighbor anisotropic diffusion
//   RegularizedDiffusion  same stencil, conductance read off a Gaussian-smoothed copy
//   TIHaar                undecimated Haar soft-thresholding (full cycle spinning)
//   BlockDCT              sliding-window block-DCT soft-thresholding

#include "altproj/grid.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

namespace altproj {

enum class Conductance { rational, exponential };

inline double conductance(double s, double K, Conductance kind)
{
    const double r = s / K;
    return kind == Conductance::rational ? 1.0 / (1.0 + r * r) : std::exp(-r * r);
}

struct PMParams {
    double edge_scale_K = 0.5;
    double time_step = 0.25;
    Conductance conductance = Conductance::rational;
    int steps_per_projection = 1;
};

struct RegDiffParams {
    double edge_scale_K = 0.5;
    double time_step = 0.25;
    double presmooth_sigma = 1.0;
    int steps_per_projection = 1;
};

struct TIHaarParams {
    double threshold = 0.5;
    int levels = 4;
};

struct BlockDCTParams {
    double threshold = 0.5;
    int block = 8;
    int step = 4;
};

/// value(k) = max(floor, initial * decay^k)
struct AnnealSchedule {
    double initial = 1.0;
    double decay = 1.0;
    double floor = 0.0;
};

inline void validate(const AnnealSchedule& s)
{
    detail::require(std::isfinite(s.initial) && s.initial >= 0.0, "schedule: initial value must be >= 0");
    detail::require(s.decay > 0.0 && s.decay <= 1.0, "schedule: decay must lie in (0, 1]");
    detail::require(s.floor >= 0.0 && s.floor <= s.initial, "schedule: floor must lie in [0, initial]");
}

inline double anneal_value(const AnnealSchedule& s, long long k)
{
    return std::max(s.floor, s.initial * std::pow(s.decay, static_cast<double>(k)));
}

inline void validate(const PMParams& p)
{
    detail::require(p.edge_scale_K > 0.0, "perona_malik: edge_scale_k must be positive");
    detail::require(p.time_step > 0.0 && p.time_step <= 0.25, "perona_malik: time_step must lie in (0, 0.25]");
    detail::require(p.steps_per_projection >= 1, "perona_malik: steps must be >= 1");
}

inline void validate(const RegDiffParams& p)
{
    detail::require(p.edge_scale_K > 0.0, "regularized_diffusion: edge_scale_k must be positive");
    detail::require(p.time_step > 0.0 && p.time_step <= 0.25,
                    "regularized_diffusion: time_step must lie in (0, 0.25]");
    detail::require(p.presmooth_sigma > 0.0, "regularized_diffusion: presmooth_sigma must be positive");
    detail::require(p.steps_per_projection >= 1, "regularized_diffusion: steps must be >= 1");
}

inline void validate(const TIHaarParams& p, std::size_t n)
{
    detail::require(p.threshold >= 0.0, "ti_haar: threshold must be >= 0");
    detail::require(p.levels >= 1, "ti_haar: levels must be >= 1");
    detail::require(std::has_single_bit(n), "ti_haar: image side must be a power of two");
    detail::require(static_cast<std::size_t>(p.levels) <= static_cast<std::size_t>(std::countr_zero(n)),
                    "ti_haar: levels must not exceed log2(n)");
}

/// Every pixel must be covered by the same number of blocks, which holds when
/// the stride divides both the block size and the image side.
inline void validate(const BlockDCTParams& p, std::size_t n)
{
    detail::require(p.threshold >= 0.0, "block_dct: threshold must be >= 0");
    detail::require(p.block >= 1 && std::has_single_bit(static_cast<unsigned>(p.block)),
                    "block_dct: block must be a power of two");
    detail::require(p.step >= 1 && p.step <= p.block, "block_dct: step must lie in [1, block]");
    detail::require(p.block % p.step == 0, "block_dct: step must divide block");
    detail::require(static_cast<std::size_t>(p.block) <= n, "block_dct: block larger than image");
    detail::require(n % static_cast<std::size_t>(p.step) == 0, "block_dct: step must divide the image side");
}

// ---------------------------------------------------------------------------
// Diffusion

namespace detail {

/// One explicit update u + dt * sum_d g(|guide_d|) * (u_d - u) over the four
/// neighbors; differences across the image border are zero.
inline Image diffusion_update(const Image& u, const Image& guide, double dt, double K, Conductance kind)
{
    const std::size_t n = u.n();
    Image out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = u(i, j);
            const double gc = guide(i, j);
            double flow = 0.0;
            if (i > 0)
                flow += conductance(std::abs(guide(i - 1, j) - gc), K, kind) * (u(i - 1, j) - c);
            if (i + 1 < n)
                flow += conductance(std::abs(guide(i + 1, j) - gc), K, kind) * (u(i + 1, j) - c);
            if (j + 1 < n)
                flow += conductance(std::abs(guide(i, j + 1) - gc), K, kind) * (u(i, j + 1) - c);
            if (j > 0)
                flow += conductance(std::abs(guide(i, j - 1) - gc), K, kind) * (u(i, j - 1) - c);
            out(i, j) = c + dt * flow;
        }
    }
    return out;
}

/// Half-sample symmetric reflection: -1 -> 0, n -> n-1, period 2n.
inline std::size_t reflect(long long idx, std::size_t n)
{
    const long long period = 2 * static_cast<long long>(n);
    long long r = idx % period;
    if (r < 0)
        r += period;
    return static_cast<std::size_t>(r < static_cast<long long>(n) ? r : period - 1 - r);
}

} // namespace detail

inline Image pm_step(const Image& img, const PMParams& p)
{
    validate(p);
    Image u = img;
    for (int s = 0; s < p.steps_per_projection; ++s)
        u = detail::diffusion_update(u, u, p.time_step, p.edge_scale_K, p.conductance);
    return u;
}

/// Sampled Gaussian over [-ceil(3 sigma), ceil(3 sigma)], normalized to sum 1.
inline std::vector<double> gaussian_kernel(double sigma)
{
    detail::require(sigma > 0.0, "gaussian_blur: sigma must be positive");
    const auto radius = static_cast<long long>(std::ceil(3.0 * sigma));
    std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
    double total = 0.0;
    for (long long t = -radius; t <= radius; ++t) {
        const double x = static_cast<double>(t) / sigma;
        w[static_cast<std::size_t>(t + radius)] = std::exp(-0.5 * x * x);
        total += w[static_cast<std::size_t>(t + radius)];
    }
    for (double& v : w)
        v /= total;
    return w;
}

/// Separable blur with mirror boundaries.
inline Image gaussian_blur(const Image& img, double sigma)
{
    const std::vector<double> w = gaussian_kernel(sigma);
    const auto radius = static_cast<long long>(w.size() / 2);
    const std::size_t n = img.n();

    Image rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (long long t = -radius; t <= radius; ++t)
                acc += w[static_cast<std::size_t>(t + radius)] *
                       img(i, detail::reflect(static_cast<long long>(j) + t, n));
            rows(i, j) = acc;
        }
    }
    Image out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (long long t = -radius; t <= radius; ++t)
                acc += w[static_cast<std::size_t>(t + radius)] *
                       rows(detail::reflect(static_cast<long long>(i) + t, n), j);
            out(i, j) = acc;
        }
    }
    return out;
}

/// Catte-style diffusion: the conductance sees a presmoothed image, the flux
/// acts on the unsmoothed one.
inline Image regdiff_step(const Image& img, const RegDiffParams& p)
{
    validate(p);
    Image u = img;
    for (int s = 0; s < p.steps_per_projection; ++s) {
        const Image guide = gaussian_blur(u, p.presmooth_sigma);
        u = detail::diffusion_update(u, guide, p.time_step, p.edge_scale_K, Conductance::rational);
    }
    return u;
}

// ---------------------------------------------------------------------------
// Thresholding

inline double soft_threshold(double x, double t)
{
    const double mag = std::abs(x) - t;
    return mag > 0.0 ? std::copysign(mag, x) : 0.0;
}

namespace detail {

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Undecimated orthonormal Haar split along rows (axis 0) or columns (axis 1)
/// at dilation `shift`, circular boundaries.
inline void haar_split(const std::vector<double>& in, std::vector<double>& lo, std::vector<double>& hi,
                       std::size_t n, std::size_t shift, int axis)
{
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t idx = i * n + j;
            const std::size_t nb = axis == 0 ? ((i + shift) % n) * n + j : i * n + (j + shift) % n;
            lo[idx] = (in[idx] + in[nb]) * kInvSqrt2;
            hi[idx] = (in[idx] - in[nb]) * kInvSqrt2;
        }
    }
}

/// Inverse of haar_split averaged over the two polyphase reconstructions.
inline void haar_merge(const std::vector<double>& lo, const std::vector<double>& hi, std::vector<double>& out,
                       std::size_t n, std::size_t shift, int axis)
{
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t idx = i * n + j;
            const std::size_t nb = axis == 0 ? ((i + n - shift) % n) * n + j : i * n + (j + n - shift) % n;
            out[idx] = 0.5 * ((lo[idx] + hi[idx]) * kInvSqrt2 + (lo[nb] - hi[nb]) * kInvSqrt2);
        }
    }
}

} // namespace detail

/// Translation-invariant Haar soft-thresholding. Equivalent to averaging the
/// decimated orthonormal Haar shrinkage over all 2^levels x 2^levels circular
/// shifts. The approximation band is left untouched.
inline Image ti_haar_filter(const Image& img, const TIHaarParams& p)
{
    const std::size_t n = img.n();
    validate(p, n);
    const auto levels = static_cast<std::size_t>(p.levels);
    const std::size_t area = n * n;

    std::vector<double> approx(img.samples().begin(), img.samples().end());
    std::vector<std::array<std::vector<double>, 3>> details(levels);
    std::vector<double> lo(area), hi(area), ll(area);

    for (std::size_t level = 0; level < levels; ++level) {
        const std::size_t shift = std::size_t{1} << level;
        auto& bands = details[level];
        for (auto& b : bands)
            b.resize(area);
        detail::haar_split(approx, lo, hi, n, shift, 1);
        detail::haar_split(lo, ll, bands[0], n, shift, 0);
        detail::haar_split(hi, bands[1], bands[2], n, shift, 0);
        for (auto& b : bands)
            for (double& v : b)
                v = soft_threshold(v, p.threshold);
        approx.swap(ll);
    }

    for (std::size_t level = levels; level-- > 0;) {
        const std::size_t shift = std::size_t{1} << level;
        auto& bands = details[level];
        detail::haar_merge(approx, bands[0], lo, n, shift, 0);
        detail::haar_merge(bands[1], bands[2], hi, n, shift, 0);
        detail::haar_merge(lo, hi, approx, n, shift, 1);
    }
    return Image(n, std::move(approx));
}

namespace detail {

/// Orthonormal DCT-II matrix, row u holds basis function u.
inline std::vector<double> dct_matrix(std::size_t b)
{
    std::vector<double> c(b * b);
    const double bd = static_cast<double>(b);
    for (std::size_t u = 0; u < b; ++u) {
        const double alpha = u == 0 ? std::sqrt(1.0 / bd) : std::sqrt(2.0 / bd);
        for (std::size_t x = 0; x < b; ++x)
            c[u * b + x] =
                alpha * std::cos(std::numbers::pi * (2.0 * static_cast<double>(x) + 1.0) * static_cast<double>(u) /
                                 (2.0 * bd));
    }
    return c;
}

} // namespace detail

/// Sliding block-DCT shrinkage with wrap-around tiling. Each block's DC is
/// exempt; overlapping estimates are averaged with equal weights.
inline Image block_dct_filter(const Image& img, const BlockDCTParams& p)
{
    const std::size_t n = img.n();
    validate(p, n);
    const auto b = static_cast<std::size_t>(p.block);
    const auto step = static_cast<std::size_t>(p.step);
    const std::vector<double> c = detail::dct_matrix(b);

    std::vector<double> acc(n * n, 0.0);
    std::vector<double> block(b * b), tmp(b * b), coef(b * b);

    for (std::size_t oi = 0; oi < n; oi += step) {
        for (std::size_t oj = 0; oj < n; oj += step) {
            for (std::size_t y = 0; y < b; ++y)
                for (std::size_t x = 0; x < b; ++x)
                    block[y * b + x] = img((oi + y) % n, (oj + x) % n);

            // coef = C * block * C^T
            for (std::size_t y = 0; y < b; ++y)
                for (std::size_t v = 0; v < b; ++v) {
                    double s = 0.0;
                    for (std::size_t x = 0; x < b; ++x)
                        s += block[y * b + x] * c[v * b + x];
                    tmp[y * b + v] = s;
                }
            for (std::size_t u = 0; u < b; ++u)
                for (std::size_t v = 0; v < b; ++v) {
                    double s = 0.0;
                    for (std::size_t y = 0; y < b; ++y)
                        s += c[u * b + y] * tmp[y * b + v];
                    coef[u * b + v] = s;
                }

            for (std::size_t idx = 1; idx < b * b; ++idx)
                coef[idx] = soft_threshold(coef[idx], p.threshold);

            // block = C^T * coef * C
            for (std::size_t u = 0; u < b; ++u)
                for (std::size_t x = 0; x < b; ++x) {
                    double s = 0.0;
                    for (std::size_t v = 0; v < b; ++v)
                        s += coef[u * b + v] * c[v * b + x];
                    tmp[u * b + x] = s;
                }
            for (std::size_t y = 0; y < b; ++y)
                for (std::size_t x = 0; x < b; ++x) {
                    double s = 0.0;
                    for (std::size_t u = 0; u < b; ++u)
                        s += c[u * b + y] * tmp[u * b + x];
                    acc[((oi + y) % n) * n + (oj + x) % n] += s;
                }
        }
    }

    // Every pixel is covered (block/step)^2 times.
    const double cover = static_cast<double>((b / step) * (b / step));
    for (double& v : acc)
        v /= cover;
    return Image(n, std::move(acc));
}

// ---------------------------------------------------------------------------
// Dispatch

enum class FilterKind { PeronaMalik, RegularizedDiffusion, TIHaar, BlockDCT };

using FilterParams = std::variant<PMParams, RegDiffParams, TIHaarParams, BlockDCTParams>;

/// A filter plus the decay of its strength parameter. The schedule's initial
/// value is the parameter stored in `params` (K or threshold).
struct FilterSpec {
    FilterParams params = TIHaarParams{};
    double decay = 1.0;
    double floor = 0.0;

    FilterKind kind() const noexcept { return static_cast<FilterKind>(params.index()); }

    double base_strength() const
    {
        return std::visit(
            [](const auto& p) -> double {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, PMParams> || std::is_same_v<P, RegDiffParams>)
                    return p.edge_scale_K;
                else
                    return p.threshold;
            },
            params);
    }

    AnnealSchedule schedule() const { return AnnealSchedule{base_strength(), decay, floor}; }
};

inline const char* to_string(FilterKind kind)
{
    switch (kind) {
    case FilterKind::PeronaMalik:
        return "perona_malik";
    case FilterKind::RegularizedDiffusion:
        return "regularized_diffusion";
    case FilterKind::TIHaar:
        return "ti_haar";
    case FilterKind::BlockDCT:
        return "block_dct";
    }
    return "unknown";
}

inline void validate(const FilterSpec& spec, std::size_t n)
{
    validate(spec.schedule());
    std::visit(
        [n](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, PMParams> || std::is_same_v<P, RegDiffParams>)
                validate(p);
            else
                validate(p, n);
        },
        spec.params);
}

/// The annealed parameter (K or threshold) in effect at iteration k.
inline double filter_strength(const FilterSpec& spec, long long k)
{
    return anneal_value(spec.schedule(), k);
}

inline Image apply_filter(const Image& img, const FilterSpec& spec, long long k)
{
    const double strength = filter_strength(spec, k);
    return std::visit(
        [&](auto p) -> Image {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, PMParams>) {
                p.edge_scale_K = strength;
                return pm_step(img, p);
            } else if constexpr (std::is_same_v<P, RegDiffParams>) {
                p.edge_scale_K = strength;
                return regdiff_step(img, p);
            } else if constexpr (std::is_same_v<P, TIHaarParams>) {
                p.threshold = strength;
                return ti_haar_filter(img, p);
            } else {
                p.threshold = strength;
                return block_dct_filter(img, p);
            }
        },
        spec.params);
}

/// Declared starting points for each filter and its schedule.
inline FilterSpec default_filter(FilterKind kind)
{
    switch (kind) {
    case FilterKind::PeronaMalik:
        return FilterSpec{PMParams{}, 0.999, 1e-3};
    case FilterKind::RegularizedDiffusion:
        return FilterSpec{RegDiffParams{}, 0.999, 1e-3};
    case FilterKind::TIHaar:
        return FilterSpec{TIHaarParams{}, 0.998, 1e-5};
    case FilterKind::BlockDCT:
        return FilterSpec{BlockDCTParams{}, 0.998, 1e-5};
    }
    return FilterSpec{};
}

} // namespace altproj
