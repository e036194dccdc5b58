#include "aerocov/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>

namespace aerocov {

namespace {

// 15-point Kronrod abscissae; odd entries double as the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

enum class PanelMap { Linear, LogFinite, LogInfinite };

struct Panel {
  PanelMap map;
  double a;  // Linear: left end. Log*: anchor b with y = b * exp(w).
  double b;  // Linear: right end. LogFinite: w_max. LogInfinite: unused.
};

struct Segment {
  std::size_t panel;
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Segment& other) const { return error < other.error; }
};

class Integrator {
 public:
  Integrator(const std::function<double(double)>& f, std::vector<Panel> panels)
      : f_(f), panels_(std::move(panels)) {}

  // Integrand in the panel's own variable, Jacobian included.
  double mapped(const Panel& p, double t) {
    ++evaluations_;
    switch (p.map) {
      case PanelMap::Linear:
        return f_(t);
      case PanelMap::LogFinite: {
        const double y = p.a * std::exp(t);
        return f_(y) * y;
      }
      case PanelMap::LogInfinite: {
        const double one_minus = 1.0 - t;
        const double w = t / one_minus;
        const double y = p.a * std::exp(w);
        if (!std::isfinite(y)) return 0.0;
        const double v = f_(y) * y / (one_minus * one_minus);
        return std::isfinite(v) ? v : 0.0;
      }
    }
    return 0.0;
  }

  Segment rule(std::size_t panel, double lo, double hi) {
    const Panel& p = panels_[panel];
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = mapped(p, center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    double abs_sum = std::abs(kronrod);
    std::array<double, 7> f1{}, f2{};
    for (int j = 0; j < 7; ++j) {
      const double dx = half * kXgk[j];
      f1[j] = mapped(p, center - dx);
      f2[j] = mapped(p, center + dx);
      kronrod += kWgk[j] * (f1[j] + f2[j]);
      abs_sum += kWgk[j] * (std::abs(f1[j]) + std::abs(f2[j]));
      if (j % 2 == 1) gauss += kWg[j / 2] * (f1[j] + f2[j]);
    }
    const double mean = 0.5 * kronrod;
    double asc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j) asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));

    const double value = kronrod * half;
    const double res_abs = abs_sum * std::abs(half);
    const double res_asc = asc * std::abs(half);
    double err = std::abs((kronrod - gauss) * half);
    if (res_asc != 0.0 && err != 0.0) err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps))
      err = std::max(50.0 * eps * res_abs, err);
    return {panel, lo, hi, value, err};
  }

  QuadResult run(double rel_tol, double abs_tol, int max_subdivisions) {
    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i < panels_.size(); ++i) {
      const Panel& p = panels_[i];
      const double lo = 0.0;
      const double hi = p.map == PanelMap::Linear ? p.b : (p.map == PanelMap::LogFinite ? p.b : 1.0);
      const double start = p.map == PanelMap::Linear ? p.a : lo;
      if (!(hi > start)) continue;
      Segment s = rule(i, start, hi);
      total += s.value;
      total_err += s.error;
      heap.push(s);
    }

    int subdivisions = 0;
    while (!heap.empty() && total_err > std::max(rel_tol * std::abs(total), abs_tol)) {
      if (subdivisions >= max_subdivisions) {
        throw NumericalError("integrate_semi_infinite: subdivision budget exhausted", total,
                             total_err);
      }
      const Segment worst = heap.top();
      heap.pop();
      const double mid = 0.5 * (worst.lo + worst.hi);
      const Segment left = rule(worst.panel, worst.lo, mid);
      const Segment right = rule(worst.panel, mid, worst.hi);
      total += left.value + right.value - worst.value;
      total_err += left.error + right.error - worst.error;
      heap.push(left);
      heap.push(right);
      ++subdivisions;

      // Periodic resummation keeps the running totals free of drift.
      if (subdivisions % 64 == 0) {
        auto copy = heap;
        total = 0.0;
        total_err = 0.0;
        while (!copy.empty()) {
          total += copy.top().value;
          total_err += copy.top().error;
          copy.pop();
        }
      }
    }

    double value = 0.0;
    double error = 0.0;
    while (!heap.empty()) {
      value += heap.top().value;
      error += heap.top().error;
      heap.pop();
    }
    if (!std::isfinite(value)) throw NumericalError("integrate_semi_infinite: non-finite integral", value, error);
    for (const Panel& p : panels_) {
      if (p.map != PanelMap::LogInfinite) continue;
      // y f(y) is the integrand per unit of log y; if it has not decayed at
      // the top of the double range the integral does not converge.
      const double y = p.a * std::exp(std::log(std::numeric_limits<double>::max() / p.a) - 1.0);
      const double tail = std::abs(f_(y) * y);
      if (std::isfinite(tail) && tail > std::max(rel_tol * std::abs(value), abs_tol))
        throw NumericalError("integrate_semi_infinite: integrand does not decay", value, error);
    }
    return {value, error, evaluations_};
  }

 private:
  const std::function<double(double)>& f_;
  std::vector<Panel> panels_;
  int evaluations_ = 0;
};

}  // namespace

QuadResult integrate_semi_infinite(const std::function<double(double)>& f, double rel_tol,
                                   double abs_tol, const QuadOptions& options) {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("integrate_semi_infinite: tolerances must be > 0");
  if (!(options.scale > 0.0)) throw std::invalid_argument("integrate_semi_infinite: scale must be > 0");

  const double upper = options.upper.value_or(std::numeric_limits<double>::infinity());
  if (!(upper > 0.0)) return {};

  std::vector<double> cuts;
  for (double b : options.breakpoints)
    if (b > 0.0 && b < upper && std::isfinite(b)) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.empty() && options.scale < upper) cuts.push_back(options.scale);

  std::vector<Panel> panels;
  double left = 0.0;
  for (double c : cuts) {
    panels.push_back({PanelMap::Linear, left, c});
    left = c;
  }
  if (left == 0.0) {
    panels.push_back({PanelMap::Linear, 0.0, upper});
  } else if (std::isinf(upper)) {
    panels.push_back({PanelMap::LogInfinite, left, 0.0});
  } else {
    panels.push_back({PanelMap::LogFinite, left, std::log(upper / left)});
  }

  Integrator integrator(f, std::move(panels));
  return integrator.run(rel_tol, abs_tol, options.max_subdivisions);
}

}  // namespace aerocov
