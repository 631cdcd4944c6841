#pragma once

// Test-side numerical integration, written independently of the library so
// the two can disagree.  Everything here runs in long double and trades
// speed for transparency: no caching, no closed forms, plain composite
// Gauss rules.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace oracle {

using ld = long double;
using cld = std::complex<long double>;

inline constexpr ld kPi = 3.14159265358979323846264338327950288L;

struct Pt {
  ld x = 0;
  ld y = 0;
};

inline Pt operator+(Pt a, Pt b) { return {a.x + b.x, a.y + b.y}; }
inline Pt operator-(Pt a, Pt b) { return {a.x - b.x, a.y - b.y}; }
inline Pt operator*(ld s, Pt a) { return {s * a.x, s * a.y}; }
inline ld dot(Pt a, Pt b) { return a.x * b.x + a.y * b.y; }
inline ld cross(Pt a, Pt b) { return a.x * b.y - a.y * b.x; }
inline ld len(Pt a) { return std::sqrt(dot(a, a)); }

// Gauss-Legendre rule on [-1, 1], nodes paired with weights.  Newton on the
// three-term recurrence, seeded with the Chebyshev angle estimate.
inline const std::vector<std::pair<ld, ld>>& gl_rule(int n) {
  static std::map<int, std::vector<std::pair<ld, ld>>> table;  // stable refs
  if (n < 1) n = 1;
  auto& rule = table[n];
  if (!rule.empty()) return rule;
  for (int i = 0; i < n; ++i) {
    ld x = std::cos(kPi * (ld(i) + 0.75L) / (ld(n) + 0.5L));
    ld dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      ld p0 = 1, p1 = x;
      for (int m = 2; m <= n; ++m) {
        const ld p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      // p1 = P_n(x), p0 = P_{n-1}(x)
      dp = ld(n) * (x * p1 - p0) / (x * x - 1);
      const ld dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L) break;
    }
    rule.push_back({x, 2.0L / ((1 - x * x) * dp * dp)});
  }
  std::sort(rule.begin(), rule.end());  // ascending nodes
  return rule;
}

// Integral of f over the straight segment [a, b] (arc-length measure).
inline cld segment_integral(const std::function<cld(Pt)>& f, Pt a, Pt b, int n) {
  const ld half = 0.5L * len(b - a);
  cld sum = 0;
  for (const auto& [node, weight] : gl_rule(n)) {
    const ld t = 0.5L * (node + 1);
    sum += weight * f({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
  }
  return half * sum;
}

inline ld shoelace(const std::vector<Pt>& v) {
  ld twice = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Pt& p = v[i];
    const Pt& q = v[(i + 1) % v.size()];
    twice += p.x * q.y - p.y * q.x;
  }
  return 0.5L * twice;
}

inline Pt shoelace_centroid(const std::vector<Pt>& v) {
  ld twice = 0, cx = 0, cy = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Pt& p = v[i];
    const Pt& q = v[(i + 1) % v.size()];
    const ld w = p.x * q.y - p.y * q.x;
    twice += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  return {cx / (3 * twice), cy / (3 * twice)};
}

// Integral of f over a convex polygon, by fanning triangles out of vertex 0
// and mapping each with a tensor Gauss rule (the collapsed-edge map needs
// the extra `s` Jacobian factor).
inline cld polygon_integral(const std::function<cld(Pt)>& f,
                            const std::vector<Pt>& v, int n) {
  cld sum = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    const Pt e1 = v[i] - v[0];
    const Pt e2 = v[i + 1] - v[0];
    const ld jac = cross(e1, e2);  // = 2 * triangle area
    for (const auto& [ns, ws] : gl_rule(n)) {
      const ld s = 0.5L * (ns + 1);
      for (const auto& [nt, wt] : gl_rule(n)) {
        const ld t = 0.5L * (nt + 1);
        const Pt x = v[0] + s * ((1 - t) * e1 + t * e2);
        sum += 0.25L * ws * wt * jac * s * f(x);
      }
    }
  }
  return sum;
}

}  // namespace oracle
