#include <doctest.h>

#include "growthsim/errors.hpp"
#include "growthsim/tensor.hpp"

using namespace growthsim;

TEST_CASE("det and inverse of a 2x2 tensor match hand values")
{
    Tensor2 A;
    A << 2.0, 1.0, 1.0, 3.0;
    CHECK(det(A) == doctest::Approx(5.0));

    Tensor2 expected;
    expected << 0.6, -0.2, -0.2, 0.4;
    const Tensor2 Ainv = inverse(A);
    CHECK((Ainv - expected).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((A * Ainv - Tensor2::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("simple shear has unit determinant and inverse with -gamma")
{
    Tensor2 F;
    F << 1.0, 0.7, 0.0, 1.0;
    CHECK(det(F) == 1.0);
    const Tensor2 Finv = inverse(F);
    CHECK(Finv(0, 1) == -0.7);
    CHECK(Finv(0, 0) == 1.0);
    CHECK(Finv(1, 1) == 1.0);
}

TEST_CASE("singular tensors raise SingularTensor")
{
    Tensor2 A;
    A << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(inverse(A), SingularTensor);

    Tensor2 tiny = 1e-7 * Tensor2::Identity();   // det = 1e-14
    CHECK_THROWS_AS(inverse(tiny), SingularTensor);
    CHECK_NOTHROW(inverse(tiny, 1e-16));
}

TEST_CASE("3x3 variants share the interface")
{
    Tensor3 A;
    A << 2, 0, 0, 0, 3, 0, 1, 0, 4;
    CHECK(det(A) == doctest::Approx(24.0));
    CHECK((A * inverse(A) - Tensor3::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sym is the symmetric part")
{
    Tensor2 L;
    L << 0.0, 2.0, 0.0, 0.0;
    Tensor2 expected;
    expected << 0.0, 1.0, 1.0, 0.0;
    CHECK(sym(L) == expected);
}

TEST_CASE("templated on the scalar type")
{
    Tensor<float, 2> A;
    A << 4.0f, 0.0f, 0.0f, 0.5f;
    CHECK(det(A) == doctest::Approx(2.0f));
    CHECK(inverse(A)(0, 0) == doctest::Approx(0.25f));
}

TEST_CASE("all_finite detects NaN and infinity")
{
    Tensor2 A = Tensor2::Identity();
    CHECK(all_finite(A));
    A(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(all_finite(A));
    A(1, 0) = std::numeric_limits<double>::infinity();
    CHECK_FALSE(all_finite(A));
}
