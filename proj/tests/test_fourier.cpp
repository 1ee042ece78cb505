#include "altproj/fourier.hpp"
#include "altproj/phantom.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

namespace altproj {
namespace {

TEST(Fourier, ConstantImageIsDcOnly)
{
    for (std::size_t n : {4u, 8u, 10u}) {
        const double c = 0.37;
        const Spectrum F = dft2(Image(n, c));
        const double nn = static_cast<double>(n * n);
        EXPECT_NEAR(F(0, 0).real(), c * nn, 1e-10 * nn);
        for (std::size_t idx = 1; idx < F.size(); ++idx)
            EXPECT_LE(std::abs(F[idx]), 1e-10 * nn);
    }
}

TEST(Fourier, DeltaHasFlatSpectrum)
{
    const Spectrum F = dft2(Image(2, {1, 0, 0, 0}));
    for (const Complex& c : F.coeffs())
        EXPECT_EQ(c, Complex(1.0, 0.0));
}

TEST(Fourier, MatchesDirectOracleAndParseval)
{
    std::mt19937_64 rng(21);
    for (std::size_t n : {6u, 8u, 16u}) {
        const Image img = oracle::random_image(n, rng, -1.0, 1.0);
        const Spectrum F = dft2(img);
        const auto ref = oracle::direct_dft2(img);
        double energy_f = 0.0, energy_F = 0.0;
        for (std::size_t idx = 0; idx < F.size(); ++idx) {
            EXPECT_LE(std::abs(F[idx] - ref[idx]), 1e-10 * static_cast<double>(n * n));
            energy_F += std::norm(ref[idx]);
            energy_f += img[idx] * img[idx];
        }
        EXPECT_NEAR(energy_F, static_cast<double>(n * n) * energy_f, 1e-9 * energy_F);
    }
}

TEST(Fourier, SpectrumOfRealImageIsExactlyHermitian)
{
    std::mt19937_64 rng(22);
    for (std::size_t n : {8u, 9u, 32u}) {
        const Spectrum F = dft2(oracle::random_image(n, rng));
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t k = 0; k < n; ++k)
                ASSERT_EQ(F(m, k), std::conj(F((n - m) % n, (n - k) % n))) << n << " " << m << "," << k;
    }
}

TEST(Fourier, InverseExamples)
{
    std::mt19937_64 rng(23);
    const Image img = oracle::random_image(16, rng);
    const Image back = idft2(dft2(img));
    for (std::size_t i = 0; i < img.size(); ++i)
        EXPECT_NEAR(back[i], img[i], 1e-10);

    EXPECT_EQ(idft2(Spectrum(8)), Image(8));

    Spectrum dc(8);
    dc(0, 0) = 64.0;
    const Image ones = idft2(dc);
    for (double v : ones.samples())
        EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(Fourier, InverseDiscardsImaginaryPart)
{
    // A lone coefficient at (0,1) inverts to exp(2 pi i j / n) / n^2; the real
    // part is cos(2 pi j / n) / n^2.
    const std::size_t n = 8;
    Spectrum s(n);
    s(0, 1) = 1.0;
    const Image img = idft2(s);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            EXPECT_NEAR(img(i, j), std::cos(2.0 * std::numbers::pi * j / n) / 64.0, 1e-15);
}

TEST(Fourier, RadialMaskSmallCases)
{
    const SamplingMask one = radial_mask(8, 1);
    EXPECT_EQ(one.count(), 8u);
    for (std::size_t k = 0; k < 8; ++k)
        EXPECT_TRUE(one(0, k));

    const SamplingMask two = radial_mask(8, 2);
    EXPECT_EQ(two.count(), 15u);
    EXPECT_EQ(two.count(), oracle::radial_sample_set(8, 2).size());
}

TEST(Fourier, RadialMaskMatchesEnumerationOracle)
{
    for (std::size_t n : {8u, 16u, 32u, 64u, 256u})
        for (std::size_t lines : {1u, 2u, 11u, 22u}) {
            const SamplingMask mask = radial_mask(n, lines);
            const auto pts = oracle::radial_sample_set(static_cast<long long>(n), static_cast<long long>(lines));
            EXPECT_EQ(mask.count(), pts.size()) << n << "/" << lines;
            for (const auto& [r, c] : pts)
                EXPECT_TRUE(mask(static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
            EXPECT_TRUE(mask.is_valid()) << n << "/" << lines;
        }
}

TEST(Fourier, TwentyTwoLineFraction)
{
    const SamplingMask mask = radial_mask(256, 22);
    const auto pts = oracle::radial_sample_set(256, 22);
    EXPECT_DOUBLE_EQ(mask.sampled_fraction(), static_cast<double>(pts.size()) / 65536.0);
    EXPECT_GT(mask.sampled_fraction(), 0.07);
    EXPECT_LT(mask.sampled_fraction(), 0.10);
}

TEST(Fourier, RadialMaskRejectsOddSize)
{
    EXPECT_THROW(radial_mask(7, 3), std::invalid_argument);
    EXPECT_THROW(radial_mask(8, 0), std::invalid_argument);
}

TEST(Fourier, MeasureExamples)
{
    std::mt19937_64 rng(24);
    const Image img = oracle::random_image(16, rng);

    const Observation full = measure(img, SamplingMask(16, true));
    EXPECT_EQ(full.values, dft2(img));

    SamplingMask dc_only(16);
    dc_only.set(0, 0);
    const Observation dc = measure(img, dc_only);
    double mean = 0.0;
    for (double v : img.samples())
        mean += v;
    mean /= 256.0;
    EXPECT_NEAR(dc.values(0, 0).real(), 256.0 * mean, 1e-12);
    for (std::size_t idx = 1; idx < dc.values.size(); ++idx)
        EXPECT_EQ(dc.values[idx], Complex(0.0, 0.0));

    const Observation radial = measure(img, radial_mask(16, 5));
    EXPECT_NO_THROW(validate(radial));
    EXPECT_THROW(measure(img, radial_mask(8, 2)), std::invalid_argument);
}

TEST(Fourier, DataProjectionExamples)
{
    std::mt19937_64 rng(25);
    const Image img = oracle::random_image(16, rng);
    const Spectrum other = dft2(oracle::random_image(16, rng));

    const Observation obs = measure(img, radial_mask(16, 3));
    const Spectrum once = data_projection(other, obs);
    EXPECT_EQ(data_projection(once, obs), once);
    EXPECT_EQ(data_residual(once, obs), 0.0);
    for (std::size_t idx = 0; idx < once.size(); ++idx)
        EXPECT_EQ(once[idx], obs.mask[idx] ? obs.values[idx] : other[idx]);

    const Observation all = measure(img, SamplingMask(16, true));
    EXPECT_EQ(data_projection(other, all), all.values);

    SamplingMask dc_only(16);
    dc_only.set(0, 0);
    const Spectrum dc = data_projection(other, measure(img, dc_only));
    for (std::size_t idx = 1; idx < dc.size(); ++idx)
        EXPECT_EQ(dc[idx], other[idx]);

    EXPECT_THROW(data_projection(Spectrum(8), obs), std::invalid_argument);
}

TEST(Fourier, BackProjectionExamples)
{
    std::mt19937_64 rng(26);
    const Image img = oracle::random_image(16, rng);
    const Image full = back_projection_init(measure(img, SamplingMask(16, true)));
    for (std::size_t i = 0; i < img.size(); ++i)
        EXPECT_NEAR(full[i], img[i], 1e-10);

    SamplingMask dc_only(16);
    dc_only.set(0, 0);
    double mean = 0.0;
    for (double v : img.samples())
        mean += v / 256.0;
    const Image flat = back_projection_init(measure(img, dc_only));
    for (double v : flat.samples())
        EXPECT_NEAR(v, mean, 1e-14);
}

TEST(Fourier, BackProjectionIsDataConsistent)
{
    const Image ph = rasterize(modified_shepp_logan_spec(), 64);
    const Observation obs = measure(ph, radial_mask(64, 22));
    const Observation again = measure(back_projection_init(obs), obs.mask);
    double scale = 0.0;
    for (const Complex& c : obs.values.coeffs())
        scale = std::max(scale, std::abs(c));
    for (std::size_t idx = 0; idx < obs.values.size(); ++idx)
        EXPECT_LE(std::abs(again.values[idx] - obs.values[idx]), 1e-9 * scale);
}

TEST(Fourier, ObservationValidationCatchesBrokenInvariants)
{
    const Observation good = measure(rasterize(modified_shepp_logan_spec(), 16), radial_mask(16, 4));
    Observation off_mask = good;
    for (std::size_t idx = 0; idx < off_mask.values.size(); ++idx)
        if (!off_mask.mask[idx]) {
            off_mask.values[idx] = 1.0;
            break;
        }
    EXPECT_THROW(validate(off_mask), std::invalid_argument);

    Observation asym = good;
    asym.values(0, 1) += Complex(0.0, 1.0);
    EXPECT_THROW(validate(asym), std::invalid_argument);
}

} // namespace
} // namespace altproj
