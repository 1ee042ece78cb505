#pragma once

// Grid value types shared by every stage of the reconstruction pipeline,
// plus the norms and quality metrics used to trace it.

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace altproj {

using Complex = std::complex<double>;

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition)
        throw std::invalid_argument(message);
}

inline std::size_t checked_area(std::size_t n, std::size_t length, const char* what)
{
    require(n > 0, std::string(what) + ": side length must be positive");
    require(length == n * n, std::string(what) + ": expected " + std::to_string(n * n) +
                                 " samples, got " + std::to_string(length));
    return length;
}

} // namespace detail

/// Square grid of real samples, row-major, pixel (i, j) = row i, column j.
/// Samples are never clamped; nominal range is [0, 1].
class Image {
public:
    Image() = default;

    explicit Image(std::size_t n, double fill = 0.0) : n_(n), samples_(n * n, fill)
    {
        detail::require(n > 0, "Image: side length must be positive");
    }

    Image(std::size_t n, std::vector<double> samples) : n_(n), samples_(std::move(samples))
    {
        detail::checked_area(n, samples_.size(), "Image");
        for (double v : samples_)
            detail::require(std::isfinite(v), "Image: samples must be finite");
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return samples_.size(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return samples_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return samples_[i * n_ + j]; }

    double& operator[](std::size_t idx) noexcept { return samples_[idx]; }
    double operator[](std::size_t idx) const noexcept { return samples_[idx]; }

    std::span<double> samples() noexcept { return samples_; }
    std::span<const double> samples() const noexcept { return samples_; }

    bool all_finite() const noexcept
    {
        for (double v : samples_)
            if (!std::isfinite(v))
                return false;
        return true;
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> samples_;
};

/// Square grid of complex DFT coefficients, row-major, DC at (0, 0).
class Spectrum {
public:
    Spectrum() = default;

    explicit Spectrum(std::size_t n) : n_(n), coeffs_(n * n, Complex{0.0, 0.0})
    {
        detail::require(n > 0, "Spectrum: side length must be positive");
    }

    Spectrum(std::size_t n, std::vector<Complex> coeffs) : n_(n), coeffs_(std::move(coeffs))
    {
        detail::checked_area(n, coeffs_.size(), "Spectrum");
        for (const Complex& c : coeffs_)
            detail::require(std::isfinite(c.real()) && std::isfinite(c.imag()),
                            "Spectrum: coefficients must be finite");
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return coeffs_.size(); }

    Complex& operator()(std::size_t m, std::size_t k) noexcept { return coeffs_[m * n_ + k]; }
    const Complex& operator()(std::size_t m, std::size_t k) const noexcept { return coeffs_[m * n_ + k]; }

    Complex& operator[](std::size_t idx) noexcept { return coeffs_[idx]; }
    const Complex& operator[](std::size_t idx) const noexcept { return coeffs_[idx]; }

    std::span<Complex> coeffs() noexcept { return coeffs_; }
    std::span<const Complex> coeffs() const noexcept { return coeffs_; }

    friend bool operator==(const Spectrum&, const Spectrum&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Complex> coeffs_;
};

/// Identical inputs report psnr_db = +infinity (serialized as "inf").
struct QualityReport {
    double mse = 0.0;
    double psnr_db = std::numeric_limits<double>::infinity();

    bool is_exact() const noexcept { return std::isinf(psnr_db); }
};

inline constexpr double kPsnrPeak = 1.0;

inline double l2_norm(const Image& img)
{
    double sum = 0.0;
    for (double v : img.samples())
        sum += v * v;
    return std::sqrt(sum);
}

inline double mse(const Image& a, const Image& b)
{
    detail::require(a.n() == b.n(), "mse: dimension mismatch (" + std::to_string(a.n()) + " vs " +
                                        std::to_string(b.n()) + ")");
    double sum = 0.0;
    const auto sa = a.samples();
    const auto sb = b.samples();
    for (std::size_t i = 0; i < sa.size(); ++i) {
        const double d = sa[i] - sb[i];
        sum += d * d;
    }
    return sum / static_cast<double>(sa.size());
}

inline QualityReport psnr(const Image& reference, const Image& candidate)
{
    QualityReport report;
    report.mse = mse(reference, candidate);
    if (report.mse > 0.0)
        report.psnr_db = 10.0 * std::log10(kPsnrPeak * kPsnrPeak / report.mse);
    return report;
}

} // namespace altproj
