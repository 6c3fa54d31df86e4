#include <doctest.h>

#include "growthsim/constitutive.hpp"

using namespace growthsim;

TEST_CASE("undeformed material at p = G is stress free")
{
    const MaterialParams params{2.0, 0.0, 1.0};
    const Tensor2 sigma = neo_hookean_stress(Tensor2::Identity(), 2.0, params);
    CHECK(sigma.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("simple shear stress matches the hand-expanded b = F F^T")
{
    // F = [[1, g], [0, 1]] -> b = [[1 + g^2, g], [g, 1]]; G = 2, p = 1, g = 0.5.
    const MaterialParams params{2.0, 0.0, 1.0};
    Tensor2 F;
    F << 1.0, 0.5, 0.0, 1.0;
    const Tensor2 sigma = neo_hookean_stress(F, 1.0, params);
    CHECK(sigma(0, 0) == doctest::Approx(1.5));
    CHECK(sigma(0, 1) == doctest::Approx(1.0));
    CHECK(sigma(1, 0) == doctest::Approx(1.0));
    CHECK(sigma(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("stress is bitwise symmetric for a general F")
{
    const MaterialParams params{1.3, 0.0, 1.0};
    Tensor2 F;
    F << 1.1, 0.37, -0.21, 0.93;
    const Tensor2 sigma = neo_hookean_stress(F, 0.4, params);
    CHECK(sigma(0, 1) == sigma(1, 0));
}

TEST_CASE("total stress adds 2 mu sym(grad v)")
{
    const MaterialParams params{1.0, 0.1, 1.0};
    Tensor2 L = Tensor2::Zero();
    L(0, 1) = 3.0;
    const Tensor2 sigma = total_stress(Tensor2::Identity(), L, 1.0, params);
    CHECK(sigma(0, 1) == doctest::Approx(0.3));
    CHECK(sigma(1, 0) == doctest::Approx(0.3));
    CHECK(sigma(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("attachment inversion reproduces the requested traction")
{
    const MaterialParams params{1.0, 0.0, 1.0};
    AttachmentSpec spec;
    spec.sigma_star << 0.01, 0.1, 0.1, 0.0;
    const auto [F_e, p] = attach_elastic_deformation(spec, params);
    CHECK(F_e(0, 1) == doctest::Approx(0.1));
    CHECK(F_e(1, 0) == 0.0);
    CHECK(det(F_e) == 1.0);
    CHECK(p == doctest::Approx(1.0));

    const Tensor2 sigma = neo_hookean_stress(F_e, p, params);
    CHECK(sigma(0, 1) == doctest::Approx(0.1));
    CHECK(sigma(1, 1) == doctest::Approx(0.0));
    // The tangential normal stress follows from the family: G g^2.
    CHECK(sigma(0, 0) == doctest::Approx(0.01));
}

TEST_CASE("non-invertible attachment requests raise NoInverse")
{
    const MaterialParams params{1.0, 0.0, 1.0};
    AttachmentSpec asym;
    asym.sigma_star << 0.0, 0.1, 0.2, 0.0;
    CHECK_THROWS_AS(attach_elastic_deformation(asym, params), NoInverse);

    AttachmentSpec general;
    general.tangential_identity = false;
    CHECK_THROWS_AS(attach_elastic_deformation(general, params), NoInverse);

    AttachmentSpec pinned;
    pinned.sigma_star(1, 1) = -0.5;
    pinned.pinned_pressure = 1.0;   // pins sigma22 = G - p = 0
    CHECK_THROWS_AS(attach_elastic_deformation(pinned, params), NoInverse);

    AttachmentSpec nan_spec;
    nan_spec.sigma_star(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(attach_elastic_deformation(nan_spec, params), NoInverse);
}

TEST_CASE("material parameter validity")
{
    CHECK(MaterialParams{1.0, 0.0, 1.0}.valid());
    CHECK_FALSE(MaterialParams{-1.0, 0.0, 1.0}.valid());
    CHECK_FALSE(MaterialParams{1.0, -0.1, 1.0}.valid());
    CHECK_FALSE(MaterialParams{1.0, 0.1, 0.0}.valid());
}
