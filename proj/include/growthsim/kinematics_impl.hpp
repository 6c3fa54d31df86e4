#pragma once

#include <algorithm>
#include <cassert>

namespace growthsim
{

template <typename T>
std::vector<T> resample(std::span<const double> node_x, std::span<const T> node_values,
                        const Grid1D& target)
{
    assert(node_x.size() == node_values.size() && !node_x.empty());
    std::vector<T> out;
    out.reserve(target.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < target.size(); ++i)
    {
        const double x = target.center(i);
        if (x <= node_x.front())
        {
            out.push_back(node_values.front());
            continue;
        }
        if (x >= node_x.back())
        {
            out.push_back(node_values.back());
            continue;
        }
        while (j + 1 < node_x.size() && node_x[j + 1] < x)
            ++j;
        const double w = (x - node_x[j]) / (node_x[j + 1] - node_x[j]);
        out.push_back(T((1.0 - w) * node_values[j] + w * node_values[j + 1]));
    }
    return out;
}

} // namespace growthsim
