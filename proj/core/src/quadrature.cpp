#include "riseval/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

namespace riseval::quad {

namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr std::array<double, 11> kronrod_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980735390, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for kronrod_nodes[1], [3], [5], [7], [9].
constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double tiny = std::numeric_limits<double>::min();

struct Interval {
    double a;
    double b;
    std::size_t slot;     // offset of this interval's component block
    double priority;      // largest component error
};

struct ByPriority {
    bool operator()(const Interval& x, const Interval& y) const
    {
        // Ties broken on position so the bisection order is fully deterministic.
        if (x.priority != y.priority) return x.priority < y.priority;
        return x.a > y.a;
    }
};

class VectorEngine {
public:
    VectorEngine(const VectorIntegrand& f, std::size_t dim)
        : f_(f), dim_(dim), kronrod(dim), gauss(dim), resabs(dim), resasc(dim)
    {
        for (auto& s : samples) s.assign(dim, 0.0);
    }

    // One G10/K21 panel on [a, b]; writes per-component value and error.
    void panel(double a, double b, double* value, double* error)
    {
        const double center = 0.5 * (a + b);
        const double half = 0.5 * (b - a);

        std::fill(gauss.begin(), gauss.end(), 0.0);

        eval(center, samples[20]);
        for (std::size_t k = 0; k < dim_; ++k) {
            kronrod[k] = kronrod_weights[10] * samples[20][k];
            resabs[k] = std::abs(kronrod[k]);
        }
        for (std::size_t j = 0; j < 10; ++j) {
            const double dx = half * kronrod_nodes[j];
            eval(center - dx, samples[2 * j]);
            eval(center + dx, samples[2 * j + 1]);
            for (std::size_t k = 0; k < dim_; ++k) {
                const double lo = samples[2 * j][k];
                const double hi = samples[2 * j + 1][k];
                kronrod[k] += kronrod_weights[j] * (lo + hi);
                resabs[k] += kronrod_weights[j] * (std::abs(lo) + std::abs(hi));
                if (j % 2 == 1) gauss[k] += gauss_weights[j / 2] * (lo + hi);
            }
        }
        for (std::size_t k = 0; k < dim_; ++k) {
            const double mean = 0.5 * kronrod[k];
            double asc = kronrod_weights[10] * std::abs(samples[20][k] - mean);
            for (std::size_t j = 0; j < 10; ++j)
                asc += kronrod_weights[j] *
                       (std::abs(samples[2 * j][k] - mean) + std::abs(samples[2 * j + 1][k] - mean));
            resasc[k] = asc;

            const double result = kronrod[k] * half;
            double err = std::abs((kronrod[k] - gauss[k]) * half);
            const double scaled_asc = resasc[k] * std::abs(half);
            const double scaled_abs = resabs[k] * std::abs(half);
            if (scaled_asc != 0.0 && err != 0.0) err = scaled_asc * std::min(1.0, std::pow(200.0 * err / scaled_asc, 1.5));
            if (scaled_abs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * scaled_abs, err);
            value[k] = result;
            error[k] = err;
        }
    }

private:
    void eval(double x, std::vector<double>& out)
    {
        std::fill(out.begin(), out.end(), 0.0);
        f_(x, std::span<double>(out));
        for (double v : out) {
            if (!std::isfinite(v)) {
                std::ostringstream os;
                os.precision(17);
                os << "non-finite integrand value " << v << " at x = " << x;
                throw QuadratureError(os.str(), x);
            }
        }
    }

    const VectorIntegrand& f_;
    std::size_t dim_;
    std::vector<double> kronrod, gauss, resabs, resasc;
    std::array<std::vector<double>, 21> samples;
};

VectorOutcome adaptive(const VectorIntegrand& f, std::size_t dim, double a, double b, const QuadratureSpec& spec)
{
    spec.validate();
    VectorOutcome out;
    out.values.assign(dim, 0.0);
    if (dim == 0) {
        out.converged = true;
        return out;
    }
    if (a == b) {
        out.converged = true;
        return out;
    }
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("integrate_finite: require finite a <= b");

    VectorEngine engine(f, dim);
    std::vector<double> values;  // component blocks, one per interval slot
    std::vector<double> errors;
    values.reserve(dim * 64);
    errors.reserve(dim * 64);

    auto allocate = [&]() {
        const std::size_t slot = values.size();
        values.resize(slot + dim);
        errors.resize(slot + dim);
        return slot;
    };
    auto priority_of = [&](std::size_t slot) {
        double p = 0.0;
        for (std::size_t k = 0; k < dim; ++k) p = std::max(p, errors[slot + k]);
        return p;
    };

    std::priority_queue<Interval, std::vector<Interval>, ByPriority> heap;
    std::vector<double> total(dim, 0.0), total_err(dim, 0.0);

    const std::size_t first = allocate();
    engine.panel(a, b, &values[first], &errors[first]);
    for (std::size_t k = 0; k < dim; ++k) {
        total[k] = values[first + k];
        total_err[k] = errors[first + k];
    }
    heap.push({a, b, first, priority_of(first)});

    auto satisfied = [&]() {
        for (std::size_t k = 0; k < dim; ++k)
            if (total_err[k] > std::max(spec.abs_tol, spec.rel_tol * std::abs(total[k]))) return false;
        return true;
    };

    int subdivisions = 1;
    // Intervals too narrow to split keep their error but are retired.
    std::vector<std::size_t> retired;
    while (!satisfied() && subdivisions < spec.max_subdivisions && !heap.empty()) {
        const Interval iv = heap.top();
        heap.pop();
        const double mid = 0.5 * (iv.a + iv.b);
        if (!(mid > iv.a && mid < iv.b) || (iv.b - iv.a) < 64.0 * eps * std::max(std::abs(iv.a), std::abs(iv.b))) {
            retired.push_back(iv.slot);
            continue;
        }
        const std::size_t left = allocate();
        const std::size_t right = allocate();
        engine.panel(iv.a, mid, &values[left], &errors[left]);
        engine.panel(mid, iv.b, &values[right], &errors[right]);
        for (std::size_t k = 0; k < dim; ++k) {
            total[k] += values[left + k] + values[right + k] - values[iv.slot + k];
            total_err[k] += errors[left + k] + errors[right + k] - errors[iv.slot + k];
        }
        heap.push({iv.a, mid, left, priority_of(left)});
        heap.push({mid, iv.b, right, priority_of(right)});
        ++subdivisions;
    }

    // Re-sum the surviving intervals so incremental round-off does not leak
    // into the reported value.
    std::fill(total.begin(), total.end(), 0.0);
    std::fill(total_err.begin(), total_err.end(), 0.0);
    std::vector<Interval> leaves;
    leaves.reserve(heap.size());
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    std::sort(leaves.begin(), leaves.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    for (std::size_t slot : retired) leaves.push_back({0.0, 0.0, slot, 0.0});
    for (const auto& iv : leaves) {
        for (std::size_t k = 0; k < dim; ++k) {
            total[k] += values[iv.slot + k];
            total_err[k] += errors[iv.slot + k];
        }
    }

    out.values = total;
    out.est_error = *std::max_element(total_err.begin(), total_err.end());
    out.subdivisions_used = subdivisions;
    out.converged = satisfied();
    return out;
}

QuadratureOutcome to_scalar(const VectorOutcome& v)
{
    return {v.values.front(), v.est_error, v.subdivisions_used, v.converged};
}

VectorIntegrand lift(const Integrand& f)
{
    return [&f](double x, std::span<double> out) { out[0] = f(x); };
}

// Wraps f on [a, inf) as an integrand on t in [0, 1).
VectorIntegrand map_semi_infinite(const VectorIntegrand& f, std::size_t dim, double a, const QuadratureSpec& spec)
{
    const double scale = spec.scale;
    const InfinityMap map = spec.infinity_map;
    return [&f, dim, a, scale, map](double t, std::span<double> out) {
        const double one_minus = 1.0 - t;
        if (!(one_minus > 0.0)) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        double x = 0.0;
        double jacobian = 0.0;
        if (map == InfinityMap::Rational) {
            x = a + scale * t / one_minus;
            jacobian = scale / (one_minus * one_minus);
        } else {
            x = a - scale * std::log1p(-t);
            jacobian = scale / one_minus;
        }
        if (!std::isfinite(x) || !std::isfinite(jacobian)) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        f(x, out);
        for (std::size_t k = 0; k < dim; ++k) {
            // An integrand that has already decayed to 0 stays 0 under any jacobian.
            out[k] = out[k] == 0.0 ? 0.0 : out[k] * jacobian;
        }
    };
}

}  // namespace

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::invalid_argument("QuadratureSpec: tolerances must be positive");
    if (max_subdivisions < 1) throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("QuadratureSpec: scale must be positive");
}

QuadratureOutcome integrate_finite(const Integrand& f, double a, double b, const QuadratureSpec& spec)
{
    const auto lifted = lift(f);
    return to_scalar(adaptive(lifted, 1, a, b, spec));
}

QuadratureOutcome integrate_semi_infinite(const Integrand& f, double a, const QuadratureSpec& spec)
{
    const auto lifted = lift(f);
    const auto mapped = map_semi_infinite(lifted, 1, a, spec);
    return to_scalar(adaptive(mapped, 1, 0.0, 1.0, spec));
}

VectorOutcome integrate_finite_vec(const VectorIntegrand& f, std::size_t dim, double a, double b,
                                   const QuadratureSpec& spec)
{
    return adaptive(f, dim, a, b, spec);
}

VectorOutcome integrate_semi_infinite_vec(const VectorIntegrand& f, std::size_t dim, double a,
                                          const QuadratureSpec& spec)
{
    const auto mapped = map_semi_infinite(f, dim, a, spec);
    return adaptive(mapped, dim, 0.0, 1.0, spec);
}

QuadratureOutcome integrate_with_breakpoints(const Integrand& f, std::span<const double> breakpoints,
                                             bool semi_infinite_tail, const QuadratureSpec& spec)
{
    QuadratureOutcome total{0.0, 0.0, 0, true};
    if (breakpoints.empty()) throw std::invalid_argument("integrate_with_breakpoints: no breakpoints");
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        if (breakpoints[i + 1] < breakpoints[i])
            throw std::invalid_argument("integrate_with_breakpoints: breakpoints must be non-decreasing");
        if (breakpoints[i + 1] == breakpoints[i]) continue;
        const auto piece = integrate_finite(f, breakpoints[i], breakpoints[i + 1], spec);
        total.value += piece.value;
        total.est_error += piece.est_error;
        total.subdivisions_used += piece.subdivisions_used;
        total.converged = total.converged && piece.converged;
    }
    if (semi_infinite_tail) {
        const auto tail = integrate_semi_infinite(f, breakpoints.back(), spec);
        total.value += tail.value;
        total.est_error += tail.est_error;
        total.subdivisions_used += tail.subdivisions_used;
        total.converged = total.converged && tail.converged;
    }
    return total;
}

QuadratureOutcome integrate_2d_semi_infinite(const Integrand2D& f, const std::function<double(double)>& inner_bound,
                                             const QuadratureSpec& outer_spec, const QuadratureSpec& inner_spec,
                                             InnerSide side)
{
    double worst_inner_rel = 0.0;
    bool inner_converged = true;

    const Integrand outer = [&](double x1) {
        const double bound = inner_bound(x1);
        const Integrand inner = [&](double x2) { return f(x1, x2); };
        QuadratureOutcome piece;
        if (side == InnerSide::Below) {
            if (bound <= 0.0) return 0.0;
            piece = std::isinf(bound) ? integrate_semi_infinite(inner, 0.0, inner_spec)
                                      : integrate_finite(inner, 0.0, bound, inner_spec);
        } else {
            if (std::isinf(bound)) return 0.0;
            piece = integrate_semi_infinite(inner, std::max(bound, 0.0), inner_spec);
        }
        inner_converged = inner_converged && piece.converged;
        if (piece.value != 0.0) worst_inner_rel = std::max(worst_inner_rel, piece.est_error / std::abs(piece.value));
        return piece.value;
    };

    auto result = integrate_semi_infinite(outer, 0.0, outer_spec);
    result.est_error += worst_inner_rel * std::abs(result.value);
    result.converged = result.converged && inner_converged &&
                       result.est_error <= std::max(outer_spec.abs_tol, outer_spec.rel_tol * std::abs(result.value)) * 10.0;
    return result;
}

std::vector<double> geometric_grid(double lo, double hi, int count)
{
    if (!(lo > 0.0) || !(hi >= lo) || count < 2) throw std::invalid_argument("geometric_grid: need 0 < lo <= hi, count >= 2");
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double step = std::log(hi / lo) / (count - 1);
    for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = lo * std::exp(step * i);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace riseval::quad
