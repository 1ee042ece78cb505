#include "altproj/grid.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace altproj {
namespace {

TEST(Grid, ImageRejectsWrongLengthAndNonFinite)
{
    EXPECT_THROW(Image(2, std::vector<double>{1.0, 2.0, 3.0}), std::invalid_argument);
    EXPECT_THROW(Image(1, std::vector<double>{NAN}), std::invalid_argument);
    EXPECT_THROW(Image(0), std::invalid_argument);
    EXPECT_THROW(Spectrum(1, std::vector<Complex>{{INFINITY, 0.0}}), std::invalid_argument);
}

TEST(Grid, L2NormExamples)
{
    EXPECT_EQ(l2_norm(Image(4)), 0.0);
    EXPECT_EQ(l2_norm(Image(2, {1, 0, 0, 0})), 1.0);
    EXPECT_EQ(l2_norm(Image(2, {3, 4, 0, 0})), 5.0);
}

TEST(Grid, MseExamples)
{
    const Image a(2, {0.2, 0.4, 0.6, 0.8});
    EXPECT_EQ(mse(a, a), 0.0);
    EXPECT_NEAR(mse(Image(1, {0.0}), Image(1, {0.1})), 0.01, 1e-15);
    EXPECT_EQ(mse(Image(2, 1.0), Image(2, 0.0)), 1.0);
    EXPECT_THROW(mse(Image(2), Image(3)), std::invalid_argument);
}

TEST(Grid, PsnrExamples)
{
    const Image ref(8, 0.5);
    EXPECT_TRUE(psnr(ref, ref).is_exact());
    EXPECT_TRUE(std::isinf(psnr(ref, ref).psnr_db));

    const QualityReport small = psnr(ref, Image(8, 0.51));
    EXPECT_NEAR(small.mse, 1e-4, 1e-15);
    EXPECT_NEAR(small.psnr_db, 40.0, 1e-9);

    EXPECT_NEAR(psnr(ref, Image(8, 0.4)).psnr_db, 20.0, 1e-9);
    EXPECT_THROW(psnr(Image(4), Image(8)), std::invalid_argument);
}

TEST(Grid, NormIsZeroOnlyForZeroImage)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Image img(6);
        std::uniform_int_distribution<std::size_t> pick(0, 35);
        img[pick(rng)] = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        EXPECT_EQ(l2_norm(img) == 0.0, img == Image(6));
    }
}

TEST(Grid, MseSymmetricAndShiftInvariant)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const Image a = oracle::random_image(8, rng);
        const Image b = oracle::random_image(8, rng);
        EXPECT_EQ(psnr(a, b).mse, psnr(b, a).mse);

        const double c = std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
        Image ac = a, bc = b;
        for (std::size_t i = 0; i < ac.size(); ++i) {
            ac[i] += c;
            bc[i] += c;
        }
        EXPECT_NEAR(mse(ac, bc), mse(a, b), 1e-12 * mse(a, b) + 1e-15);
    }
}

} // namespace
} // namespace altproj
