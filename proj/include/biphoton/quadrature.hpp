#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <type_traits>
#include <vector>

#include "biphoton/error.hpp"

namespace biphoton {

struct QuadOptions {
    double tol = 1e-10;
    std::size_t max_intervals = std::size_t{1} << 20;
};

template <class T>
struct QuadResult {
    T value;
    double error;
    std::size_t intervals;
    std::size_t evaluations;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kronrod = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        T f1 = f(c - dx);
        T f2 = f(c + dx);
        kronrod += (f1 + f2) * kWgk[j];
        if (j % 2 == 1) gauss += (f1 + f2) * kWg[j / 2];
    }
    return {a, b, kronrod * h, std::abs((kronrod - gauss) * h)};
}

}  // namespace detail

// Deterministic adaptive Gauss-Kronrod 7/15 over [breaks[0], breaks.back()],
// always splitting the interval with the largest error estimate. Converged when
// the summed error estimate is <= tol * (1 + |value|).
template <class F>
auto integrate_adaptive(F&& f, const std::vector<double>& breaks, const QuadOptions& opt = {})
    -> QuadResult<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    using Seg = detail::Segment<T>;
    if (breaks.size() < 2) throw ValidationError("integrate: need at least two break points");
    if (!(opt.tol > 0.0)) throw ValidationError("integrate: tol must be positive");

    std::vector<Seg> store;
    store.reserve(64);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        store.push_back(detail::gk15<T>(f, breaks[i], breaks[i + 1]));
    }
    if (store.empty()) return {T{}, 0.0, 0, 0};
    std::priority_queue<Seg> heap(std::less<Seg>{}, std::move(store));

    // Running sums can drift; recomputed from the heap at exit.
    T total{};
    double err = 0.0;
    {
        auto copy = heap;
        while (!copy.empty()) {
            total += copy.top().value;
            err += copy.top().error;
            copy.pop();
        }
    }
    std::size_t evals = 15 * heap.size();
    while (err > opt.tol * (1.0 + std::abs(total))) {
        if (heap.size() >= opt.max_intervals)
            throw NonConvergence("integrate: subdivision budget exhausted (error estimate " +
                                 std::to_string(err) + ")");
        Seg s = heap.top();
        double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b)) {
            // Interval cannot be split further in double precision; accept its estimate.
            err -= s.error;
            heap.pop();
            s.error = 0.0;
            heap.push(s);
            if (err <= 0.0) break;
            continue;
        }
        heap.pop();
        Seg l = detail::gk15<T>(f, s.a, m);
        Seg r = detail::gk15<T>(f, m, s.b);
        evals += 30;
        total += (l.value + r.value) - s.value;
        err += (l.error + r.error) - s.error;
        heap.push(l);
        heap.push(r);
    }
    QuadResult<T> res{T{}, 0.0, heap.size(), evals};
    // Sum in a fixed order (by left end point) so results do not depend on heap layout.
    std::vector<Seg> segs;
    segs.reserve(heap.size());
    while (!heap.empty()) {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
    for (const auto& s : segs) {
        res.value += s.value;
        res.error += s.error;
    }
    if (!std::isfinite(std::abs(res.value))) throw NonConvergence("integrate: non-finite result");
    return res;
}

template <class F>
auto integrate_1d(F&& f, double lo, double hi, double tol = 1e-10) {
    QuadOptions opt;
    opt.tol = tol;
    if (hi < lo) return -integrate_adaptive(std::forward<F>(f), std::vector<double>{hi, lo}, opt).value;
    return integrate_adaptive(std::forward<F>(f), std::vector<double>{lo, hi}, opt).value;
}

}  // namespace biphoton
