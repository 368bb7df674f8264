#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature for vector-valued
// integrands sharing one adaptive mesh. Node and weight tables come from
// Boost.Math.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqt::quad {

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double error_estimate)
        : std::runtime_error(what + " (error estimate " + std::to_string(error_estimate) + ")"),
          error_estimate_(error_estimate)
    {
    }
    double error_estimate() const { return error_estimate_; }

private:
    double error_estimate_;
};

struct Options {
    double abs_tol = 0.0;
    double rel_tol = 1e-12;
    std::size_t max_intervals = 20000;
};

template <std::size_t Dim>
struct Result {
    std::array<double, Dim> value{};
    double error = 0.0; ///< max-norm estimate over components
    std::size_t evaluations = 0;
};

namespace detail {

struct GK21 {
    // Non-negative nodes, center first. gauss_w is zero where the Kronrod node
    // is not also a Gauss node.
    std::array<double, 11> x{};
    std::array<double, 11> kronrod_w{};
    std::array<double, 11> gauss_w{};

    GK21()
    {
        using kr = boost::math::quadrature::gauss_kronrod<double, 21>;
        using ga = boost::math::quadrature::gauss<double, 10>;
        for (std::size_t i = 0; i < 11; ++i) {
            x[i] = kr::abscissa()[i];
            kronrod_w[i] = kr::weights()[i];
            // Gauss-10 nodes sit at the odd Kronrod indices.
            gauss_w[i] = (i % 2 == 1) ? ga::weights()[i / 2] : 0.0;
        }
    }
};

inline const GK21& gk21()
{
    static const GK21 table;
    return table;
}

template <std::size_t Dim>
struct Panel {
    double a, b;
    std::array<double, Dim> value;
    double error;
};

template <std::size_t Dim, class F>
Panel<Dim> apply_rule(const F& f, double a, double b)
{
    const auto& t = gk21();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);

    std::array<std::array<double, Dim>, 21> fv;
    fv[0] = f(mid);
    for (std::size_t i = 1; i < 11; ++i) {
        fv[2 * i - 1] = f(mid - half * t.x[i]);
        fv[2 * i] = f(mid + half * t.x[i]);
    }

    Panel<Dim> p{a, b, {}, 0.0};
    for (std::size_t k = 0; k < Dim; ++k) {
        double kr = t.kronrod_w[0] * fv[0][k];
        double ga = t.gauss_w[0] * fv[0][k];
        double resabs = std::abs(kr);
        for (std::size_t i = 1; i < 11; ++i) {
            const double s = fv[2 * i - 1][k] + fv[2 * i][k];
            kr += t.kronrod_w[i] * s;
            ga += t.gauss_w[i] * s;
            resabs += t.kronrod_w[i] * (std::abs(fv[2 * i - 1][k]) + std::abs(fv[2 * i][k]));
        }
        const double mean = 0.5 * kr;
        double resasc = t.kronrod_w[0] * std::abs(fv[0][k] - mean);
        for (std::size_t i = 1; i < 11; ++i)
            resasc += t.kronrod_w[i] * (std::abs(fv[2 * i - 1][k] - mean) + std::abs(fv[2 * i][k] - mean));

        kr *= half;
        ga *= half;
        resabs *= std::abs(half);
        resasc *= std::abs(half);

        // QUADPACK error scaling
        double err = std::abs(kr - ga);
        if (resasc != 0.0 && err != 0.0)
            err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
        const double floor = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
        err = std::max(err, floor);

        p.value[k] = kr;
        p.error = std::max(p.error, err);
    }
    return p;
}

template <std::size_t Dim>
double max_norm(const std::array<double, Dim>& v)
{
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail

/// Integrates f over the union of [breaks[i], breaks[i+1]]. breaks must be sorted.
template <std::size_t Dim, class F>
Result<Dim> integrate(const F& f, std::span<const double> breaks, const Options& opt = {})
{
    using Panel = detail::Panel<Dim>;
    if (breaks.size() < 2)
        throw std::invalid_argument("integrate: need at least two break points");

    auto worse = [](const Panel& l, const Panel& r) { return l.error < r.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);

    Result<Dim> res;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i]))
            continue;
        heap.push(detail::apply_rule<Dim>(f, breaks[i], breaks[i + 1]));
        res.evaluations += 21;
    }

    auto totals = [&heap]() {
        // Copy-out in position order so the final sum is independent of heap layout.
        auto copy = heap;
        std::vector<Panel> panels;
        panels.reserve(copy.size());
        while (!copy.empty()) {
            panels.push_back(copy.top());
            copy.pop();
        }
        std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
        std::array<double, Dim> sum{};
        double err = 0.0;
        for (const auto& p : panels) {
            for (std::size_t k = 0; k < Dim; ++k)
                sum[k] += p.value[k];
            err += p.error;
        }
        return std::pair{sum, err};
    };

    // Running totals drive the loop; the reported value is re-summed in order.
    std::array<double, Dim> running{};
    double running_err = 0.0;
    {
        auto [s, e] = totals();
        running = s;
        running_err = e;
    }

    while (!heap.empty()) {
        const double target = std::max(opt.abs_tol, opt.rel_tol * detail::max_norm(running));
        if (running_err <= target)
            break;
        if (heap.size() >= opt.max_intervals)
            throw QuadratureError("adaptive quadrature did not converge", running_err);

        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw QuadratureError("adaptive quadrature reached machine resolution", running_err);
        Panel left = detail::apply_rule<Dim>(f, worst.a, mid);
        Panel right = detail::apply_rule<Dim>(f, mid, worst.b);
        res.evaluations += 42;
        for (std::size_t k = 0; k < Dim; ++k)
            running[k] += left.value[k] + right.value[k] - worst.value[k];
        running_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    auto [sum, err] = totals();
    res.value = sum;
    res.error = err;
    return res;
}

template <std::size_t Dim, class F>
Result<Dim> integrate(const F& f, double a, double b, const Options& opt = {})
{
    const std::array<double, 2> br{a, b};
    return integrate<Dim>(f, std::span<const double>(br), opt);
}

/// Scalar convenience wrapper.
template <class F>
double integrate_scalar(const F& f, double a, double b, const Options& opt = {}, double* error = nullptr)
{
    auto wrapped = [&f](double x) { return std::array<double, 1>{f(x)}; };
    auto r = integrate<1>(wrapped, a, b, opt);
    if (error)
        *error = r.error;
    return r.value[0];
}

} // namespace sqt::quad
