#pragma once

#include <cmath>
#include <type_traits>

#include <Eigen/Dense>

#include "growthsim/errors.hpp"

namespace growthsim
{

// Second-order tensors are stored row-major so that component order on disk
// (11, 12, 21, 22) matches memory order.
template <typename Scalar, int Dim = 2>
using Tensor = Eigen::Matrix<Scalar, Dim, Dim, Eigen::RowMajor>;

template <typename Scalar, int Dim = 2>
using Vector = Eigen::Matrix<Scalar, Dim, 1>;

using Tensor2 = Tensor<double, 2>;
using Vec2 = Vector<double, 2>;
using Tensor3 = Tensor<double, 3>;
using Vec3 = Vector<double, 3>;

/// Singularity threshold shared by every inversion in the project.
inline constexpr double kDetEpsilon = 1e-12;

namespace detail
{
template <typename Derived>
constexpr void assert_small_square()
{
    static_assert(Derived::RowsAtCompileTime == Derived::ColsAtCompileTime,
                  "tensor must be square");
    static_assert(Derived::RowsAtCompileTime == 2 || Derived::RowsAtCompileTime == 3,
                  "only 2x2 and 3x3 tensors are supported");
}
} // namespace detail

template <typename Derived>
typename Derived::Scalar det(const Eigen::MatrixBase<Derived>& t)
{
    detail::assert_small_square<Derived>();
    if constexpr (Derived::RowsAtCompileTime == 2)
        return t(0, 0) * t(1, 1) - t(0, 1) * t(1, 0);
    else
        return t.determinant();
}

/// Closed-form inverse; throws SingularTensor when |det| <= eps.
template <typename Derived>
Tensor<typename Derived::Scalar, Derived::RowsAtCompileTime>
inverse(const Eigen::MatrixBase<Derived>& t, double eps = kDetEpsilon)
{
    detail::assert_small_square<Derived>();
    using Scalar = typename Derived::Scalar;
    const Scalar d = det(t);
    if (!(std::abs(d) > eps))
        throw SingularTensor("tensor determinant " + std::to_string(static_cast<double>(d)) +
                             " is within the singularity threshold");
    if constexpr (Derived::RowsAtCompileTime == 2)
    {
        Tensor<Scalar, 2> r;
        r << t(1, 1) / d, -t(0, 1) / d, -t(1, 0) / d, t(0, 0) / d;
        return r;
    }
    else
    {
        return t.inverse();
    }
}

template <typename Derived>
Tensor<typename Derived::Scalar, Derived::RowsAtCompileTime>
sym(const Eigen::MatrixBase<Derived>& t)
{
    detail::assert_small_square<Derived>();
    return (t + t.transpose()) / typename Derived::Scalar(2);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& t)
{
    return t.array().isFinite().all();
}

} // namespace growthsim
