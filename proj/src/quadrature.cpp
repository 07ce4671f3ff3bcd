#include "rwt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace rwt::quad {

namespace {

// Gauss-Kronrod 10/21 abscissae and weights (QUADPACK qk21).
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077664059844301, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

double safe(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    return std::isfinite(v) ? v : 0.0;
}

Segment kronrod21(const std::function<double(double)>& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = safe(f, center);
    double result_k = fc * kWgk[10];
    double result_g = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = safe(f, center - dx);
        const double f2 = safe(f, center + dx);
        result_k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) {
            result_g += kWg[j / 2] * (f1 + f2);
        }
    }
    const double err = std::abs((result_k - result_g) * half);
    return {a, b, result_k * half, err};
}

Result integrate_finite(const std::function<double(double)>& f, double a, double b,
                        const Options& options) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Segment> heap;
    Segment first = kronrod21(f, a, b);
    out.evaluations = 21;
    double total = first.value;
    double total_err = first.error;
    heap.push(first);
    int subdivisions = 0;
    while (total_err > std::max(options.abs_tol, options.rel_tol * std::abs(total))) {
        if (subdivisions >= options.max_subdivisions) {
            break;
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        Segment left = kronrod21(f, worst.a, mid);
        Segment right = kronrod21(f, mid, worst.b);
        out.evaluations += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }
    // Re-sum to shed the drift of the running updates.
    double sum = 0.0;
    double err = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.abs_error = err;
    out.converged = err <= std::max(options.abs_tol, options.rel_tol * std::abs(sum)) * 1.0001;
    return out;
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 const Options& options) {
    if (a > b) {
        Result r = integrate(f, b, a, options);
        r.value = -r.value;
        return r;
    }
    const bool lo_inf = std::isinf(a);
    const bool hi_inf = std::isinf(b);
    if (!lo_inf && !hi_inf) {
        return integrate_finite(f, a, b, options);
    }
    if (lo_inf && hi_inf) {
        // x = t / (1 - t^2), t in (-1, 1)
        auto g = [&f](double t) {
            const double d = 1.0 - t * t;
            return f(t / d) * (1.0 + t * t) / (d * d);
        };
        return integrate_finite(g, -1.0, 1.0, options);
    }
    if (hi_inf) {
        // x = a + t / (1 - t), t in [0, 1)
        auto g = [&f, a](double t) {
            const double d = 1.0 - t;
            return f(a + t / d) / (d * d);
        };
        return integrate_finite(g, 0.0, 1.0, options);
    }
    // x = b - t / (1 - t)
    auto g = [&f, b](double t) {
        const double d = 1.0 - t;
        return f(b - t / d) / (d * d);
    };
    return integrate_finite(g, 0.0, 1.0, options);
}

NodeSet composite_rule(double a, double b, int panels) {
    NodeSet out;
    out.nodes.reserve(static_cast<std::size_t>(panels) * 21);
    out.weights.reserve(out.nodes.capacity());
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double center = lo + 0.5 * width;
        const double half = 0.5 * width;
        for (int j = 0; j < 10; ++j) {
            out.nodes.push_back(center - half * kXgk[j]);
            out.weights.push_back(half * kWgk[j]);
            out.nodes.push_back(center + half * kXgk[j]);
            out.weights.push_back(half * kWgk[j]);
        }
        out.nodes.push_back(center);
        out.weights.push_back(half * kWgk[10]);
    }
    return out;
}

}  // namespace rwt::quad
