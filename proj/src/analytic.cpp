#include "pwdg/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "pwdg/planewave.hpp"
#include "pwdg/quadrature.hpp"

namespace pwdg {
namespace {

// ---------------------------------------------------------------------------
// Bessel kernels, orders 0 and 1.
//
// Everything runs in extended precision so that double-precision results
// keep ~1e-13 relative accuracy against the sqrt(2/(pi x)) envelope:
//   x <= 17 : ascending power series for J, logarithmic series for Y.
//   x >  17 : Hankel large-argument expansion with optimal truncation;
//             at the split point its attainable error floor ~e^{-2x} is
//             far below the accuracy target, and it only improves as x
//             grows.

constexpr long double kPi = 3.14159265358979323846264338327950288L;
constexpr long double kEulerGamma = 0.57721566490153286060651209008240243L;

void j0_j1_series(long double x, long double& j0, long double& j1) {
  const long double q = x * x / 4.0L;
  long double t0 = 1.0L, s0 = 1.0L;  // terms/sum for J0
  long double t1 = 1.0L, s1 = 1.0L;  // terms/sum for J1 / (x/2)
  for (int m = 1; m < 200; ++m) {
    t0 *= -q / (static_cast<long double>(m) * m);
    s0 += t0;
    t1 *= -q / (static_cast<long double>(m) * (m + 1));
    s1 += t1;
    if (fabsl(t0) < 1e-22L * fabsl(s0) && fabsl(t1) < 1e-22L * fabsl(s1)) break;
  }
  j0 = s0;
  j1 = (x / 2.0L) * s1;
}

// Y0 = (2/pi) [(ln(x/2) + gamma) J0 + sum_{m>=1} (-1)^{m+1} H_m q^m / (m!)^2]
// Y1 = (2/pi) (ln(x/2) + gamma) J1 - 2/(pi x)
//      - (x/(2 pi)) sum_{m>=0} (-1)^m (H_m + H_{m+1}) q^m / (m! (m+1)!)
// with q = x^2/4 and H_m the m-th harmonic number.
void y0_y1_series(long double x, long double j0, long double j1,
                  long double& y0, long double& y1) {
  const long double q = x * x / 4.0L;
  const long double log_term = logl(x / 2.0L) + kEulerGamma;

  long double t = 1.0L, harmonic = 0.0L, s = 0.0L;
  for (int m = 1; m < 200; ++m) {
    t *= -q / (static_cast<long double>(m) * m);  // t carries (-1)^m
    harmonic += 1.0L / m;
    const long double term = -t * harmonic;
    s += term;
    if (fabsl(term) < 1e-24L * (fabsl(s) + 1e-30L) && m > 3) break;
  }
  y0 = (2.0L / kPi) * (log_term * j0 + s);

  long double tk = 1.0L, h_m = 0.0L, h_m1 = 1.0L;
  long double s1 = (h_m + h_m1) * tk;
  for (int m = 1; m < 200; ++m) {
    tk *= -q / (static_cast<long double>(m) * (m + 1));
    h_m += 1.0L / m;
    h_m1 += 1.0L / (m + 1);
    const long double term = (h_m + h_m1) * tk;
    s1 += term;
    if (fabsl(term) < 1e-24L * (fabsl(s1) + 1e-30L) && m > 3) break;
  }
  y1 = (2.0L / kPi) * log_term * j1 - 2.0L / (kPi * x) - (x / (2.0L * kPi)) * s1;
}

// Modulation sums of the Hankel expansion:
//   J_nu = sqrt(2/(pi x)) [P cos(chi) - Q sin(chi)],
//   Y_nu = sqrt(2/(pi x)) [P sin(chi) + Q cos(chi)],  chi = x - (2 nu + 1) pi/4,
// P = 1 - t2 + t4 - ..., Q = t1 - t3 + ...; the series is asymptotic, so
// summation stops at the smallest term.
void hankel_pq(int nu, long double x, long double& p_sum, long double& q_sum) {
  const long double mu = 4.0L * nu * nu;
  const long double z8 = 8.0L * x;
  long double t = 1.0L, prev = 1e30L;
  p_sum = 1.0L;
  q_sum = 0.0L;
  for (int m = 1; m < 300; ++m) {
    t *= (mu - static_cast<long double>(2 * m - 1) * (2 * m - 1)) /
         (static_cast<long double>(m) * z8);
    if (fabsl(t) >= prev) break;
    prev = fabsl(t);
    if (m % 2 == 1)
      q_sum += (((m - 1) / 2) % 2 == 0) ? t : -t;
    else
      p_sum += ((m / 2) % 2 == 1) ? -t : t;
    if (fabsl(t) < 1e-25L) break;
  }
}

struct BesselPair {
  long double j = 0.0L;
  long double y = 0.0L;
};

void bessel_01(long double x, BesselPair& order0, BesselPair& order1) {
  if (x <= 17.0L) {
    j0_j1_series(x, order0.j, order1.j);
    y0_y1_series(x, order0.j, order1.j, order0.y, order1.y);
  } else {
    long double p0, q0, p1, q1;
    hankel_pq(0, x, p0, q0);
    hankel_pq(1, x, p1, q1);
    const long double amp = sqrtl(2.0L / (kPi * x));
    const long double c0 = cosl(x - kPi / 4.0L), s0 = sinl(x - kPi / 4.0L);
    const long double c1 = cosl(x - 3.0L * kPi / 4.0L), s1 = sinl(x - 3.0L * kPi / 4.0L);
    order0.j = amp * (p0 * c0 - q0 * s0);
    order0.y = amp * (p0 * s0 + q0 * c0);
    order1.j = amp * (p1 * c1 - q1 * s1);
    order1.y = amp * (p1 * s1 + q1 * c1);
  }
}

long double bessel_j_impl(int nu, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("bessel_j: need x >= 0");
  if (x == 0.0) return nu == 0 ? 1.0L : 0.0L;
  BesselPair b0, b1;
  bessel_01(x, b0, b1);
  return nu == 0 ? b0.j : b1.j;
}

long double bessel_y_impl(int nu, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("bessel_y: need x > 0");
  BesselPair b0, b1;
  bessel_01(x, b0, b1);
  return nu == 0 ? b0.y : b1.y;
}

}  // namespace

double bessel_j0(double x) { return static_cast<double>(bessel_j_impl(0, x)); }
double bessel_j1(double x) { return static_cast<double>(bessel_j_impl(1, x)); }
double bessel_y0(double x) { return static_cast<double>(bessel_y_impl(0, x)); }
double bessel_y1(double x) { return static_cast<double>(bessel_y_impl(1, x)); }

std::complex<double> hankel1_0(double x) {
  BesselPair b0, b1;
  if (!(x > 0.0)) throw std::invalid_argument("hankel1_0: need x > 0");
  bessel_01(x, b0, b1);
  return {static_cast<double>(b0.j), static_cast<double>(b0.y)};
}

std::complex<double> hankel1_1(double x) {
  BesselPair b0, b1;
  if (!(x > 0.0)) throw std::invalid_argument("hankel1_1: need x > 0");
  bessel_01(x, b0, b1);
  return {static_cast<double>(b1.j), static_cast<double>(b1.y)};
}

std::complex<double> exact_value(const ExactSolution& sol, Point2 x) {
  if (!(sol.k > 0.0)) throw std::invalid_argument("exact_value: need k > 0");
  const double r = distance(x, sol.source);
  if (!(r > 0.0))
    throw std::invalid_argument("exact_value: evaluation at the source point");
  return hankel1_0(sol.k * r);
}

Eigen::Vector2cd exact_gradient(const ExactSolution& sol, Point2 x) {
  if (!(sol.k > 0.0)) throw std::invalid_argument("exact_gradient: need k > 0");
  const Point2 rel = x - sol.source;
  const double r = norm(rel);
  if (!(r > 0.0))
    throw std::invalid_argument("exact_gradient: evaluation at the source point");
  // d/dx H0(k r) = -k H1(k r) * (x - source)/r, since H0' = -H1.
  const std::complex<double> factor = -sol.k * hankel1_1(sol.k * r) / r;
  return {factor * rel.x, factor * rel.y};
}

FieldWithGradient exact_field(const ExactSolution& sol) {
  FieldWithGradient field;
  field.value = [sol](Point2 x) { return exact_value(sol, x); };
  field.gradient = [sol](Point2 x) { return exact_gradient(sol, x); };
  return field;
}

// ---------------------------------------------------------------------------
// L2 norms by fan quadrature.

namespace {

// Integrates `term` (given the quadrature point) over one element with a
// tensor Gauss rule of the given 1D order on each centroid-fan triangle,
// using the square-to-triangle collapse
//   (u, v) in [0,1]^2  ->  centroid + u [(1-v) (a - c) + v (b - c)],
// whose Jacobian is 2 |T| u.
double integrate_element(const ConvexPolygon& element, int order,
                         const std::function<double(Point2)>& term) {
  const GaussRule& rule = gauss_legendre(order);
  const Point2 c = polygon_metrics(element).centroid;
  double sum = 0.0;
  const std::size_t nv = element.vertices.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const Point2 ea = element.vertices[i] - c;
    const Point2 eb = element.vertices[(i + 1) % nv] - c;
    const double two_area = cross(ea, eb);
    for (int iu = 0; iu < rule.size(); ++iu) {
      const double u = 0.5 * (rule.nodes[static_cast<std::size_t>(iu)] + 1.0);
      const double wu = 0.5 * rule.weights[static_cast<std::size_t>(iu)];
      for (int iv = 0; iv < rule.size(); ++iv) {
        const double v = 0.5 * (rule.nodes[static_cast<std::size_t>(iv)] + 1.0);
        const double wv = 0.5 * rule.weights[static_cast<std::size_t>(iv)];
        const Point2 x = c + u * ((1.0 - v) * ea + v * eb);
        sum += wu * wv * two_area * u * term(x);
      }
    }
  }
  return sum;
}

// Doubles the rule order until the element integral stabilizes to 0.1%.
double integrate_element_adaptive(const ConvexPolygon& element, double k,
                                  const std::function<double(Point2)>& term) {
  const double hk = polygon_metrics(element).diameter;
  int order = std::min(static_cast<int>(std::ceil(k * hk)) + 6, 64);
  double value = integrate_element(element, order, term);
  for (int attempt = 0; attempt < 3; ++attempt) {
    const int refined = std::min(2 * order, 96);
    if (refined == order) break;
    const double better = integrate_element(element, refined, term);
    const bool settled = std::abs(better - value) <= 1e-3 * std::abs(better);
    value = better;
    order = refined;
    if (settled) break;
  }
  return value;
}

}  // namespace

double l2_error(const Mesh& mesh, double k, double theta0,
                const Eigen::VectorXcd& coefficients,
                const std::function<std::complex<double>(Point2)>& reference) {
  if (!(k > 0.0)) throw std::invalid_argument("l2_error: need k > 0");
  const int n_elem = mesh.n_elements();
  if (n_elem == 0 || coefficients.size() % n_elem != 0)
    throw std::invalid_argument("l2_error: coefficient count not a multiple of element count");
  const int p = static_cast<int>(coefficients.size()) / n_elem;
  if (p < 1) throw std::invalid_argument("l2_error: empty coefficient vector");

  double total = 0.0;
  for (int e = 0; e < n_elem; ++e) {
    const ConvexPolygon& element = mesh.elements[static_cast<std::size_t>(e)];
    const PlaneWaveBasis basis =
        make_basis(k, polygon_metrics(element).centroid, p, theta0);
    const Eigen::VectorXcd local =
        coefficients.segment(static_cast<Eigen::Index>(e) * p, p);
    auto term = [&](Point2 x) {
      const std::complex<double> uh =
          eval_basis(basis, x).cwiseProduct(local).sum();
      return std::norm(uh - reference(x));
    };
    total += integrate_element_adaptive(element, k, term);
  }
  return std::sqrt(std::max(total, 0.0));
}

double l2_norm(const Mesh& mesh, double k,
               const std::function<std::complex<double>(Point2)>& f) {
  if (!(k > 0.0)) throw std::invalid_argument("l2_norm: need k > 0");
  double total = 0.0;
  for (const ConvexPolygon& element : mesh.elements) {
    auto term = [&](Point2 x) { return std::norm(f(x)); };
    total += integrate_element_adaptive(element, k, term);
  }
  return std::sqrt(std::max(total, 0.0));
}

double relative_l2_error(const Mesh& mesh, double k, double theta0,
                         const Eigen::VectorXcd& coefficients,
                         const std::function<std::complex<double>(Point2)>& reference) {
  const double denom = l2_norm(mesh, k, reference);
  if (!(denom > 0.0))
    throw std::invalid_argument("relative_l2_error: reference field has zero norm");
  return l2_error(mesh, k, theta0, coefficients, reference) / denom;
}

}  // namespace pwdg
