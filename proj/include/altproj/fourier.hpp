#pragma once

// 2D DFT with the unnormalized-forward / (1/n^2)-inverse convention, the
// radial-line sampling pattern, and the observation-side projections.
//
// Transforms run through FFTW. Real images go through the r2c transform and
// the redundant half is filled by conjugation, so the spectrum of a real
// image is Hermitian bit-exactly. Plans are created with FFTW_ESTIMATE, which
// makes them a function of the size alone (deterministic per build).

#include "altproj/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace altproj {

namespace detail {

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t count)
{
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
    if (p == nullptr)
        throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

/// Forward r2c / inverse c2r plan pair for one side length. Execution uses the
/// new-array interface, which FFTW documents as thread-safe.
class RealFftPlans {
public:
    explicit RealFftPlans(std::size_t n) : n_(n), half_(n / 2 + 1)
    {
        const int ni = static_cast<int>(n);
        auto real = fftw_buffer<double>(n * n);
        auto cplx = fftw_buffer<fftw_complex>(n * half_);
        forward_ = fftw_plan_dft_r2c_2d(ni, ni, real.get(), cplx.get(), FFTW_ESTIMATE);
        // c2r destroys its input unless told otherwise; callers always pass scratch.
        inverse_ = fftw_plan_dft_c2r_2d(ni, ni, cplx.get(), real.get(), FFTW_ESTIMATE);
        if (forward_ == nullptr || inverse_ == nullptr)
            throw std::runtime_error("FFTW planning failed for n=" + std::to_string(n));
    }

    RealFftPlans(const RealFftPlans&) = delete;
    RealFftPlans& operator=(const RealFftPlans&) = delete;

    ~RealFftPlans()
    {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }

    std::size_t half() const noexcept { return half_; }

    void forward(double* in, fftw_complex* out) const { fftw_execute_dft_r2c(forward_, in, out); }
    void inverse(fftw_complex* in, double* out) const { fftw_execute_dft_c2r(inverse_, in, out); }

private:
    std::size_t n_;
    std::size_t half_;
    fftw_plan forward_ = nullptr;
    fftw_plan inverse_ = nullptr;
};

inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

inline const RealFftPlans& plans_for(std::size_t n)
{
    static std::map<std::size_t, std::unique_ptr<RealFftPlans>> cache;
    std::lock_guard lock(fftw_planner_mutex());
    auto& slot = cache[n];
    if (!slot)
        slot = std::make_unique<RealFftPlans>(n);
    return *slot;
}

inline std::size_t mirror_index(std::size_t idx, std::size_t n) noexcept
{
    return idx == 0 ? 0 : n - idx;
}

} // namespace detail

/// F(m,k) = sum_{x,y} f(x,y) exp(-2 pi i (m x + k y) / n), DC at (0,0).
inline Spectrum dft2(const Image& img)
{
    const std::size_t n = img.n();
    const auto& plans = detail::plans_for(n);
    const std::size_t half = plans.half();

    auto in = detail::fftw_buffer<double>(n * n);
    auto out = detail::fftw_buffer<fftw_complex>(n * half);
    std::memcpy(in.get(), img.samples().data(), sizeof(double) * n * n);
    plans.forward(in.get(), out.get());

    Spectrum spec(n);
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t mm = detail::mirror_index(m, n);
        for (std::size_t k = 0; k < half; ++k) {
            Complex c{out[m * half + k][0], out[m * half + k][1]};
            // Columns 0 and n/2 hold both members of each conjugate pair.
            if (detail::mirror_index(k, n) == k) {
                if (mm < m)
                    c = std::conj(spec(mm, k));
                else if (mm == m)
                    c = Complex{c.real(), 0.0};
            }
            spec(m, k) = c;
        }
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = half; k < n; ++k)
            spec(m, k) = std::conj(spec(detail::mirror_index(m, n), n - k));
    return spec;
}

/// Inverse DFT with 1/n^2 normalization; the imaginary part is discarded.
/// Discarding the imaginary part is the same as inverting the Hermitian part
/// (X(m,k) + conj X(-m,-k)) / 2, which is what is fed to the c2r transform.
inline Image idft2(const Spectrum& spec)
{
    const std::size_t n = spec.n();
    const auto& plans = detail::plans_for(n);
    const std::size_t half = plans.half();

    auto in = detail::fftw_buffer<fftw_complex>(n * half);
    auto out = detail::fftw_buffer<double>(n * n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < half; ++k) {
            const Complex a = spec(m, k);
            const Complex b = std::conj(spec(detail::mirror_index(m, n), detail::mirror_index(k, n)));
            const Complex h = (a == b) ? a : 0.5 * (a + b);
            in[m * half + k][0] = h.real();
            in[m * half + k][1] = h.imag();
        }
    }
    plans.inverse(in.get(), out.get());

    const double scale = 1.0 / static_cast<double>(n * n);
    std::vector<double> samples(n * n);
    for (std::size_t i = 0; i < n * n; ++i)
        samples[i] = out[i] * scale;
    return Image(n, std::move(samples));
}

/// Sampling pattern S, row-major, DC at (0,0).
class SamplingMask {
public:
    SamplingMask() = default;

    explicit SamplingMask(std::size_t n, bool fill = false) : n_(n), flags_(n * n, fill ? 1 : 0)
    {
        detail::require(n > 0, "SamplingMask: side length must be positive");
    }

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return flags_.size(); }

    bool operator()(std::size_t m, std::size_t k) const noexcept { return flags_[m * n_ + k] != 0; }
    bool operator[](std::size_t idx) const noexcept { return flags_[idx] != 0; }
    void set(std::size_t m, std::size_t k, bool value = true) noexcept { flags_[m * n_ + k] = value ? 1 : 0; }

    std::size_t count() const noexcept
    {
        std::size_t c = 0;
        for (auto f : flags_)
            c += f;
        return c;
    }

    double sampled_fraction() const noexcept
    {
        return static_cast<double>(count()) / static_cast<double>(flags_.size());
    }

    bool is_conjugate_symmetric() const noexcept
    {
        for (std::size_t m = 0; m < n_; ++m)
            for (std::size_t k = 0; k < n_; ++k)
                if ((*this)(m, k) != (*this)(detail::mirror_index(m, n_), detail::mirror_index(k, n_)))
                    return false;
        return true;
    }

    /// Conjugate symmetry plus DC inclusion.
    bool is_valid() const noexcept { return n_ > 0 && (*this)(0, 0) && is_conjugate_symmetric(); }

    friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

private:
    std::size_t n_ = 0;
    std::vector<unsigned char> flags_;
};

/// Measured coefficients G; exactly zero off the mask.
struct Observation {
    SamplingMask mask;
    Spectrum values;

    std::size_t n() const noexcept { return mask.n(); }
};

inline void validate(const Observation& obs)
{
    detail::require(obs.mask.n() == obs.values.n(), "Observation: mask and values differ in size");
    detail::require(obs.mask.is_valid(), "Observation: mask must be conjugate-symmetric and include DC");
    const std::size_t n = obs.n();
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex& v = obs.values(m, k);
            if (!obs.mask(m, k)) {
                detail::require(v == Complex{0.0, 0.0}, "Observation: nonzero value off the mask");
                continue;
            }
            detail::require(v == std::conj(obs.values(detail::mirror_index(m, n), detail::mirror_index(k, n))),
                            "Observation: values are not conjugate-symmetric on the mask");
        }
    }
}

/// Lines through DC at angles pi*l/lines; each line samples the centered
/// radii -n/2 .. n/2-1 rounded half away from zero, then the set is
/// conjugate-mirrored. Column frequency follows cos, row frequency sin.
inline SamplingMask radial_mask(std::size_t n, std::size_t lines)
{
    detail::require(n > 0 && n % 2 == 0, "radial_mask: n must be even and positive");
    detail::require(lines >= 1, "radial_mask: at least one line required");

    const auto wrap = [n](long long v) {
        const long long ni = static_cast<long long>(n);
        return static_cast<std::size_t>(((v % ni) + ni) % ni);
    };

    SamplingMask mask(n);
    const long long half = static_cast<long long>(n / 2);
    for (std::size_t l = 0; l < lines; ++l) {
        const double theta = std::numbers::pi * static_cast<double>(l) / static_cast<double>(lines);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        for (long long r = -half; r < half; ++r) {
            const auto col = static_cast<long long>(std::round(static_cast<double>(r) * c));
            const auto row = static_cast<long long>(std::round(static_cast<double>(r) * s));
            mask.set(wrap(row), wrap(col));
        }
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k)
            if (mask(m, k))
                mask.set(detail::mirror_index(m, n), detail::mirror_index(k, n));
    mask.set(0, 0);
    return mask;
}

inline Observation measure(const Image& img, const SamplingMask& mask)
{
    detail::require(img.n() == mask.n(), "measure: image and mask differ in size");
    Spectrum full = dft2(img);
    Spectrum values(img.n());
    for (std::size_t idx = 0; idx < full.size(); ++idx)
        if (mask[idx])
            values[idx] = full[idx];
    return Observation{mask, std::move(values)};
}

/// Overwrites the sampled coefficients with the observation.
inline Spectrum data_projection(const Spectrum& spec, const Observation& obs)
{
    detail::require(spec.n() == obs.n(), "data_projection: spectrum and observation differ in size");
    Spectrum out = spec;
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        if (obs.mask[idx])
            out[idx] = obs.values[idx];
    return out;
}

/// l2 distance on the mask between a spectrum and the observation.
inline double data_residual(const Spectrum& spec, const Observation& obs)
{
    detail::require(spec.n() == obs.n(), "data_residual: spectrum and observation differ in size");
    double sum = 0.0;
    for (std::size_t idx = 0; idx < spec.size(); ++idx)
        if (obs.mask[idx])
            sum += std::norm(spec[idx] - obs.values[idx]);
    return std::sqrt(sum);
}

/// Zero-filled inverse: the minimum-energy image consistent with the data.
inline Image back_projection_init(const Observation& obs)
{
    return idft2(obs.values);
}

} // namespace altproj
