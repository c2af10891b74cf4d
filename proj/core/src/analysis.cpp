// SPDX-License-Identifier: Apache-2.0
//
// comp-noma: downlink power allocation for CoMP-NOMA multi-cell networks
// Copyright (C) 2026 The comp-noma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "comp_noma/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

namespace compnoma {

namespace {

void check_ascending(std::span<const double> powers, std::span<const double> gains)
{
    if (powers.size() != gains.size())
        throw std::invalid_argument("powers and gains differ in length");
    if (gains.size() < 2)
        throw std::invalid_argument("Hessian minors need at least two users");
    for (std::size_t i = 0; i < gains.size(); ++i) {
        if (!(gains[i] > 0.0))
            throw std::invalid_argument("gains must be positive");
        if (i > 0 && !(gains[i] > gains[i - 1]))
            throw std::invalid_argument("gains must be strictly ascending");
        if (powers[i] < 0.0)
            throw std::invalid_argument("powers must be non-negative");
    }
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

template <typename T, typename F>
Matrix central_hessian(const F& f, std::span<const double> point, double step)
{
    if (!(step > 0.0))
        throw std::invalid_argument("finite_diff_hessian: step must be positive");
    for (double x : point)
        if (!(x - step > 0.0))
            throw std::domain_error("finite_diff_hessian: point is on or near the domain boundary");
    const auto n = point.size();
    const T h = step;
    std::vector<T> x(point.begin(), point.end());
    auto at = [&](std::size_t i, T di, std::size_t j, T dj) {
        x[i] += di;
        x[j] += dj;
        const T v = f(std::span<const T>(x));
        x[i] -= di;
        x[j] -= dj;
        return v;
    };
    Matrix hess(n, std::vector<double>(n, 0.0));
    const T f0 = f(std::span<const T>(x));
    for (std::size_t i = 0; i < n; ++i) {
        hess[i][i] = static_cast<double>((at(i, h, i, 0) - 2 * f0 + at(i, -h, i, 0)) / (h * h));
        for (std::size_t j = i + 1; j < n; ++j) {
            const T v = (at(i, h, j, h) - at(i, h, j, -h) - at(i, -h, j, h) + at(i, -h, j, -h)) /
                        (4 * h * h);
            hess[i][j] = hess[j][i] = static_cast<double>(v);
        }
    }
    return hess;
}

// Extended-precision objective for the cross-check: near-equal gains make the
// minors tiny differences of the entries, and double rounding of the
// objective at h ~ 1e-4 is already visible in the fourth digit.
long double sum_rate_nats_ext(std::span<const long double> powers, std::span<const double> gains)
{
    long double s = 0.0L;
    long double above = 0.0L;
    for (std::size_t i = powers.size(); i-- > 0;) {
        const long double g = gains[i];
        s += std::log1p(powers[i] * g / (above * g + 1.0L));
        above += powers[i];
    }
    return s;
}

}  // namespace

MinorTerms minor_terms(std::span<const double> powers, std::span<const double> gains)
{
    check_ascending(powers, gains);
    const auto m = gains.size();
    std::vector<double> tail(m + 1, 0.0);
    for (std::size_t i = m; i-- > 0;)
        tail[i] = tail[i + 1] + powers[i];
    MinorTerms t;
    for (std::size_t i = 0; i < m; ++i) {
        const double a = gains[i] / (tail[i] * gains[i] + 1.0);
        const double b = gains[i] / (tail[i + 1] * gains[i] + 1.0);
        t.direct.push_back(a * a);
        t.shifted.push_back(b * b);
    }
    return t;
}

double sum_rate_nats(std::span<const double> powers, std::span<const double> gains)
{
    if (powers.size() != gains.size())
        throw std::invalid_argument("powers and gains differ in length");
    double s = 0.0;
    double above = 0.0;
    for (std::size_t i = powers.size(); i-- > 0;) {
        s += std::log1p(powers[i] * gains[i] / (above * gains[i] + 1.0));
        above += powers[i];
    }
    return s;
}

MinorReport hessian_minors(std::span<const double> powers, std::span<const double> gains,
                           bool cross_check)
{
    const auto t = minor_terms(powers, gains);
    const auto m = gains.size();

    MinorReport r;
    double prod = t.direct[0];
    for (std::size_t order = 1; order <= m; ++order) {
        if (order > 1)
            prod *= t.direct[order - 1] - t.shifted[order - 2];
        r.minors.push_back(order % 2 == 1 ? -prod : prod);
    }
    r.pass = true;
    for (std::size_t i = 0; i < m; ++i) {
        r.signs.push_back(sign_of(r.minors[i]));
        if (r.signs[i] != (i % 2 == 0 ? -1 : 1))
            r.pass = false;
    }

    double total = 0.0;
    for (double p : powers)
        total += p;
    const double h = 1e-4 * total;
    const bool interior =
        h > 0.0 && std::all_of(powers.begin(), powers.end(), [h](double p) { return p - h > 0.0; });
    if (cross_check && m <= 3 && interior) {
        std::vector<double> g(gains.begin(), gains.end());
        const auto hess = central_hessian<long double>(
            [&g](std::span<const long double> x) { return sum_rate_nats_ext(x, g); }, powers, h);
        r.finite_difference = leading_principal_minors(hess);
        for (std::size_t i = 0; i < m; ++i) {
            const double gap = std::abs(r.finite_difference[i] - r.minors[i]) /
                               std::max(std::abs(r.minors[i]), std::numeric_limits<double>::min());
            r.max_relative_gap = std::max(r.max_relative_gap, gap);
        }
    }
    return r;
}

Matrix finite_diff_hessian(const std::function<double(std::span<const double>)>& f,
                           std::span<const double> point, double h)
{
    return central_hessian<double>(f, point, h);
}

std::vector<double> leading_principal_minors(const Matrix& m)
{
    const auto n = m.size();
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n)
            throw std::invalid_argument("leading_principal_minors: matrix is not square");
        for (std::size_t j = 0; j < n; ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m[i][j];
    }
    std::vector<double> out;
    for (std::size_t k = 1; k <= n; ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        out.push_back(a.topLeftCorner(kk, kk).determinant());
    }
    return out;
}

std::string to_string(EfficiencyScope s)
{
    switch (s) {
    case EfficiencyScope::cluster:
        return "cluster";
    case EfficiencyScope::comp_set:
        return "comp_set";
    case EfficiencyScope::bs:
        return "bs";
    }
    return "?";
}

EfficiencyReport efficiency(EfficiencyScope scope, std::span<const double> rates,
                            std::span<const double> powers, std::size_t rb_count,
                            double rb_bandwidth_hz)
{
    if (rb_count == 0)
        throw std::invalid_argument("efficiency: need at least one resource block");
    if (!(rb_bandwidth_hz > 0.0))
        throw std::invalid_argument("efficiency: bandwidth must be positive");
    EfficiencyReport r;
    r.scope = scope;
    r.bandwidth_hz = rb_bandwidth_hz * static_cast<double>(rb_count);
    for (double x : rates) {
        if (!(x >= 0.0))
            throw std::invalid_argument("efficiency: rates must be non-negative");
        r.se += x;
    }
    double per_rb = 0.0;
    for (double p : powers) {
        if (!(p >= 0.0))
            throw std::invalid_argument("efficiency: powers must be non-negative");
        per_rb += p;
    }
    r.total_power = per_rb * static_cast<double>(rb_count);
    if (r.total_power == 0.0) {
        if (r.se > 0.0)
            throw std::domain_error("efficiency: positive rate at zero transmit power");
        r.ee = 0.0;
        return r;
    }
    r.ee = r.se * r.bandwidth_hz / r.total_power / 1e6;
    return r;
}

}  // namespace compnoma
