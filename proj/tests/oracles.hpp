#pragma once

// Reference computations used only by the tests. Each one follows the
// defining formula directly and shares no code path with the library.

#include "altproj/grid.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace altproj::oracle {

inline Image random_image(std::size_t n, std::mt19937_64& rng, double lo = 0.0, double hi = 1.0)
{
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n * n);
    for (double& x : v)
        x = dist(rng);
    return Image(n, std::move(v));
}

/// O(n^4) forward DFT straight from the definition.
inline std::vector<std::complex<double>> direct_dft2(const Image& img)
{
    const std::size_t n = img.n();
    std::vector<std::complex<double>> out(n * n);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t x = 0; x < n; ++x)
                for (std::size_t y = 0; y < n; ++y) {
                    const double phase =
                        -2.0 * std::numbers::pi * static_cast<double>((m * x + k * y) % n) / static_cast<double>(n);
                    acc += img(x, y) * std::polar(1.0, phase);
                }
            out[m * n + k] = acc;
        }
    return out;
}

/// Radial line sample set enumerated from the written rule: angles pi*l/L,
/// radii -n/2..n/2-1, (row, col) = (round(r sin), round(r cos)) mod n, plus
/// conjugate mirrors and DC.
inline std::set<std::pair<long long, long long>> radial_sample_set(long long n, long long lines)
{
    std::set<std::pair<long long, long long>> pts;
    auto mod = [n](long long v) { return ((v % n) + n) % n; };
    for (long long l = 0; l < lines; ++l) {
        const double th = std::numbers::pi * static_cast<double>(l) / static_cast<double>(lines);
        for (long long r = -n / 2; r <= n / 2 - 1; ++r) {
            const double fx = static_cast<double>(r) * std::cos(th);
            const double fy = static_cast<double>(r) * std::sin(th);
            // round half away from zero, written out
            const auto rnd = [](double v) {
                return static_cast<long long>(v >= 0 ? std::floor(v + 0.5) : -std::floor(-v + 0.5));
            };
            const long long row = mod(rnd(fy));
            const long long col = mod(rnd(fx));
            pts.insert({row, col});
            pts.insert({mod(-row), mod(-col)});
        }
    }
    pts.insert({0, 0});
    return pts;
}

/// Sum of the intensities of every ellipse containing (x, y); ellipse given as
/// (A, a, b, x0, y0, phi_deg). Written with an explicit rotation matrix.
struct EllipseRow {
    double A, a, b, x0, y0, phi_deg;
};

inline double ellipse_sum(const std::vector<EllipseRow>& rows, double x, double y)
{
    double total = 0.0;
    for (const EllipseRow& e : rows) {
        const double t = e.phi_deg * std::numbers::pi / 180.0;
        const double r00 = std::cos(t), r01 = std::sin(t);
        const double r10 = -std::sin(t), r11 = std::cos(t);
        const double px = x - e.x0, py = y - e.y0;
        const double xr = r00 * px + r01 * py;
        const double yr = r10 * px + r11 * py;
        if ((xr / e.a) * (xr / e.a) + (yr / e.b) * (yr / e.b) <= 1.0)
            total += e.A;
    }
    return total;
}

/// The modified Shepp-Logan table as published for common toolkits.
inline std::vector<EllipseRow> modified_shepp_logan_table()
{
    return {
        {1.0, .69, .92, 0, 0, 0},          {-.8, .6624, .8740, 0, -.0184, 0}, {-.2, .1100, .3100, .22, 0, -18},
        {-.2, .1600, .4100, -.22, 0, 18},  {.1, .2100, .2500, 0, .35, 0},     {.1, .0460, .0460, 0, .1, 0},
        {.1, .0460, .0460, 0, -.1, 0},     {.1, .0460, .0230, -.08, -.605, 0}, {.1, .0230, .0230, 0, -.606, 0},
        {.1, .0230, .0460, .06, -.605, 0},
    };
}

/// Orthonormal DCT-II of an N x N block by the double-sum definition.
inline std::vector<double> direct_dct2(const std::vector<double>& block, std::size_t N)
{
    std::vector<double> out(N * N);
    const double nd = static_cast<double>(N);
    for (std::size_t u = 0; u < N; ++u)
        for (std::size_t v = 0; v < N; ++v) {
            const double au = u == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
            const double av = v == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
            double s = 0.0;
            for (std::size_t y = 0; y < N; ++y)
                for (std::size_t x = 0; x < N; ++x)
                    s += block[y * N + x] * std::cos(std::numbers::pi * (2.0 * y + 1.0) * u / (2.0 * nd)) *
                         std::cos(std::numbers::pi * (2.0 * x + 1.0) * v / (2.0 * nd));
            out[u * N + v] = au * av * s;
        }
    return out;
}

/// Inverse of direct_dct2.
inline std::vector<double> direct_idct2(const std::vector<double>& coef, std::size_t N)
{
    std::vector<double> out(N * N);
    const double nd = static_cast<double>(N);
    for (std::size_t y = 0; y < N; ++y)
        for (std::size_t x = 0; x < N; ++x) {
            double s = 0.0;
            for (std::size_t u = 0; u < N; ++u)
                for (std::size_t v = 0; v < N; ++v) {
                    const double au = u == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
                    const double av = v == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
                    s += au * av * coef[u * N + v] * std::cos(std::numbers::pi * (2.0 * y + 1.0) * u / (2.0 * nd)) *
                         std::cos(std::numbers::pi * (2.0 * x + 1.0) * v / (2.0 * nd));
                }
            out[y * N + x] = s;
        }
    return out;
}

/// Translation-invariant Haar shrinkage by explicit cycle spinning: for each
/// circular shift, decimated orthonormal 2D Haar (levels deep), soft-threshold
/// details, invert, unshift; average in row-major shift order.
inline Image cycle_spin_haar(const Image& img, int levels, double t)
{
    const std::size_t n = img.n();
    const std::size_t shifts = std::size_t{1} << levels;
    const double r2 = std::sqrt(0.5);
    auto soft = [t](double x) { return std::abs(x) <= t ? 0.0 : (x > 0 ? x - t : x + t); };

    std::vector<double> acc(n * n, 0.0);
    for (std::size_t sy = 0; sy < shifts; ++sy)
        for (std::size_t sx = 0; sx < shifts; ++sx) {
            std::vector<double> a(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    a[i * n + j] = img((i + sy) % n, (j + sx) % n);

            // Forward: Mallat layout, LL in the top-left size x size corner.
            std::size_t size = n;
            for (int l = 0; l < levels; ++l, size /= 2) {
                std::vector<double> tmp(a);
                for (std::size_t i = 0; i < size; ++i)
                    for (std::size_t j = 0; j < size / 2; ++j) {
                        tmp[i * n + j] = (a[i * n + 2 * j] + a[i * n + 2 * j + 1]) * r2;
                        tmp[i * n + size / 2 + j] = (a[i * n + 2 * j] - a[i * n + 2 * j + 1]) * r2;
                    }
                std::vector<double> tmp2(tmp);
                for (std::size_t i = 0; i < size / 2; ++i)
                    for (std::size_t j = 0; j < size; ++j) {
                        tmp2[i * n + j] = (tmp[(2 * i) * n + j] + tmp[(2 * i + 1) * n + j]) * r2;
                        tmp2[(size / 2 + i) * n + j] = (tmp[(2 * i) * n + j] - tmp[(2 * i + 1) * n + j]) * r2;
                    }
                a = tmp2;
            }
            const std::size_t coarse = n >> levels;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i >= coarse || j >= coarse)
                        a[i * n + j] = soft(a[i * n + j]);

            for (int l = levels - 1; l >= 0; --l) {
                const std::size_t sz = n >> l;
                std::vector<double> tmp(a);
                for (std::size_t i = 0; i < sz / 2; ++i)
                    for (std::size_t j = 0; j < sz; ++j) {
                        const double lo = a[i * n + j], hi = a[(sz / 2 + i) * n + j];
                        tmp[(2 * i) * n + j] = (lo + hi) * r2;
                        tmp[(2 * i + 1) * n + j] = (lo - hi) * r2;
                    }
                std::vector<double> tmp2(tmp);
                for (std::size_t i = 0; i < sz; ++i)
                    for (std::size_t j = 0; j < sz / 2; ++j) {
                        const double lo = tmp[i * n + j], hi = tmp[i * n + sz / 2 + j];
                        tmp2[i * n + 2 * j] = (lo + hi) * r2;
                        tmp2[i * n + 2 * j + 1] = (lo - hi) * r2;
                    }
                a = tmp2;
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    acc[((i + sy) % n) * n + (j + sx) % n] += a[i * n + j];
        }
    for (double& v : acc)
        v /= static_cast<double>(shifts * shifts);
    return Image(n, std::move(acc));
}

} // namespace altproj::oracle
