#include "algoprice/orbit.hpp"

#include <cmath>

#include "algoprice/errors.hpp"

namespace algoprice {

OrbitValues discounted_orbit_values(const std::vector<int>& next, const std::vector<double>& ra,
                                    const std::vector<double>& rb, double beta) {
  const int n = static_cast<int>(next.size());
  if (static_cast<int>(ra.size()) != n || static_cast<int>(rb.size()) != n) {
    throw DomainError("reward vectors do not match the state count");
  }
  OrbitValues w{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  // 0 = unvisited, 1 = on the current walk, 2 = done
  std::vector<char> mark(n, 0);
  std::vector<int> walk;
  const double keep = 1.0 - beta;

  for (int s0 = 0; s0 < n; ++s0) {
    if (mark[s0] == 2) continue;
    walk.clear();
    int x = s0;
    while (mark[x] == 0) {
      mark[x] = 1;
      walk.push_back(x);
      x = next[x];
    }
    size_t unwind = walk.size();
    if (mark[x] == 1) {
      // x heads a new cycle made of the walk suffix starting at x.
      size_t head = 0;
      while (walk[head] != x) ++head;
      const size_t len = walk.size() - head;
      double sa = 0.0, sb = 0.0, disc = 1.0;
      for (size_t t = head; t < walk.size(); ++t) {
        sa += disc * keep * ra[walk[t]];
        sb += disc * keep * rb[walk[t]];
        disc *= beta;
      }
      const double denom = -std::expm1(static_cast<double>(len) * std::log(beta));
      w.a[x] = sa / denom;
      w.b[x] = sb / denom;
      mark[x] = 2;
      for (size_t t = walk.size() - 1; t > head; --t) {
        const int y = walk[t];
        w.a[y] = keep * ra[y] + beta * w.a[next[y]];
        w.b[y] = keep * rb[y] + beta * w.b[next[y]];
        mark[y] = 2;
      }
      unwind = head;
    }
    for (size_t t = unwind; t-- > 0;) {
      const int y = walk[t];
      w.a[y] = keep * ra[y] + beta * w.a[next[y]];
      w.b[y] = keep * rb[y] + beta * w.b[next[y]];
      mark[y] = 2;
    }
  }
  return w;
}

Orbit follow_orbit(const std::vector<int>& next, int start) {
  const int n = static_cast<int>(next.size());
  std::vector<int> seen_at(n, -1);
  Orbit orbit;
  int x = start;
  while (seen_at[x] < 0) {
    seen_at[x] = static_cast<int>(orbit.states.size());
    orbit.states.push_back(x);
    x = next[x];
  }
  orbit.cycle_start = static_cast<size_t>(seen_at[x]);
  return orbit;
}

}  // namespace algoprice
