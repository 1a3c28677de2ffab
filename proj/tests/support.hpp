#pragma once

#include "robust_trim/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace test_support {

using robust_trim::Coefficients;
using robust_trim::Dataset;
using robust_trim::Index;
using robust_trim::Matrix;
using robust_trim::Vector;

// Intercept plus (p - 1) standard normal features; y = X beta + N(0, noise^2).
inline Dataset random_dataset(Index n, Index p, std::uint64_t seed, double noise = 0.5,
                              Coefficients* truth = nullptr)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    Matrix x(n, p);
    for (Index i = 0; i < n; ++i) {
        x(i, 0) = 1.0;
        for (Index j = 1; j < p; ++j)
            x(i, j) = z(rng);
    }
    Coefficients beta(p);
    for (Index j = 0; j < p; ++j)
        beta[j] = z(rng);
    Vector y = x * beta;
    for (Index i = 0; i < n; ++i)
        y[i] += noise * z(rng);
    if (truth)
        *truth = beta;
    return Dataset(std::move(x), std::move(y));
}

inline Coefficients random_vector(Index p, std::uint64_t seed, double scale = 1.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, scale);
    Coefficients b(p);
    for (Index j = 0; j < p; ++j)
        b[j] = z(rng);
    return b;
}

// Second implementation of the trimmed objective: sort a copy of the squared
// residuals and add up the h smallest.
inline double naive_objective(const Dataset& d, const Coefficients& b, Index h, double l1, double l2)
{
    std::vector<double> r2;
    for (Index i = 0; i < d.n(); ++i) {
        double fit = 0.0;
        for (Index j = 0; j < d.p(); ++j)
            fit += d.x()(i, j) * b[j];
        r2.push_back((d.y()[i] - fit) * (d.y()[i] - fit));
    }
    std::sort(r2.begin(), r2.end());
    double loss = 0.0;
    for (Index i = 0; i < h; ++i)
        loss += r2[static_cast<std::size_t>(i)];
    double pen = 0.0;
    for (Index j = 0; j < d.p(); ++j)
        pen += l1 * std::abs(b[j]) + l2 * b[j] * b[j];
    return loss / static_cast<double>(d.n()) + pen;
}

// Every h-subset of {0..n-1} as a bitmask.
inline std::vector<std::vector<Index>> all_subsets(Index n, Index h)
{
    std::vector<std::vector<Index>> out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != static_cast<int>(h))
            continue;
        std::vector<Index> s;
        for (Index i = 0; i < n; ++i)
            if (mask & (1u << i))
                s.push_back(i);
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace test_support
