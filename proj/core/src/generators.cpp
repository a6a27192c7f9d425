#include "chemofv/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

namespace chemofv {

namespace {

struct Circle {
  double cx, cy, r2;
};

Circle circumcircle(Point a, Point b, Point c) {
  const double bx = b.x - a.x, by = b.y - a.y;
  const double cx = c.x - a.x, cy = c.y - a.y;
  const double d = 2.0 * (bx * cy - by * cx);
  const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  const double ux = (cy * b2 - by * c2) / d, uy = (bx * c2 - cx * b2) / d;
  return {a.x + ux, a.y + uy, ux * ux + uy * uy};
}

double cross(Point o, Point a, Point b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double area(const std::vector<Point>& p, const std::vector<std::array<int, 3>>& t) {
  long double s = 0.0L;
  for (const auto& tri : t) s += 0.5L * std::abs(cross(p[tri[0]], p[tri[1]], p[tri[2]]));
  return static_cast<double>(s);
}

}  // namespace

std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& points) {
  const int n = static_cast<int>(points.size());
  if (n < 3) throw std::invalid_argument("delaunay needs at least 3 points");
  double xmin = points[0].x, xmax = xmin, ymin = points[0].y, ymax = ymin;
  for (const Point& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max(xmax - xmin, ymax - ymin);
  const double mx = 0.5 * (xmin + xmax), my = 0.5 * (ymin + ymax);
  std::vector<Point> p = points;
  p.push_back({mx - 1e4 * span, my - 1e4 * span});
  p.push_back({mx + 1e4 * span, my - 1e4 * span});
  p.push_back({mx, my + 1e4 * span});

  struct Tri {
    std::array<int, 3> v;
    Circle c;
    bool alive;
  };
  std::vector<Tri> tris;
  tris.push_back({{n, n + 1, n + 2}, circumcircle(p[n], p[n + 1], p[n + 2]), true});

  std::vector<int> bad;
  std::map<std::pair<int, int>, int> rim;
  for (int i = 0; i < n; ++i) {
    const Point q = p[i];
    bad.clear();
    for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
      if (!tris[t].alive) continue;
      const Circle& c = tris[t].c;
      const double dx = q.x - c.cx, dy = q.y - c.cy;
      if (dx * dx + dy * dy < c.r2 * (1.0 - 1e-12)) bad.push_back(t);
    }
    if (bad.empty()) throw std::runtime_error(fmt::format("point {} is duplicated", i));
    rim.clear();
    for (int t : bad) {
      tris[t].alive = false;
      for (int j = 0; j < 3; ++j) {
        const int a = tris[t].v[j], b = tris[t].v[(j + 1) % 3];
        auto it = rim.find({b, a});
        if (it != rim.end())
          rim.erase(it);
        else
          rim[{a, b}] = 1;
      }
    }
    for (const auto& [e, unused] : rim) {
      const std::array<int, 3> v{e.first, e.second, i};
      tris.push_back({v, circumcircle(p[v[0]], p[v[1]], p[v[2]]), true});
    }
  }

  std::vector<std::array<int, 3>> out;
  for (const Tri& t : tris) {
    if (!t.alive || t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    out.push_back(t.v);
  }
  std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
    const double ya = p[a[0]].y + p[a[1]].y + p[a[2]].y, yb = p[b[0]].y + p[b[1]].y + p[b[2]].y;
    const double xa = p[a[0]].x + p[a[1]].x + p[a[2]].x, xb = p[b[0]].x + p[b[1]].x + p[b[2]].x;
    return ya != yb ? ya < yb : xa < xb;
  });
  return out;
}

Triangulation square_mesh(double edge, int n) {
  if (!(edge > 0.0)) throw std::invalid_argument("square edge must be positive");
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("square mesh needs an even n >= 8");
  // Staggered rows with a graded boundary layer; every triangle stays below 74 degrees.
  const double a = 4.0 / 3.0, b = 23.0 / 12.0, c = 13.0 / 8.0, d = 53.0 / 24.0;
  const double h = edge / n;
  Triangulation t;
  std::vector<std::vector<int>> row(n + 1);
  for (int j = 0; j <= n; ++j) {
    std::vector<double> xs;
    if (j % 2 == 0) {
      xs = {0.0, c, d};
      for (int i = 3; i <= n - 3; ++i) xs.push_back(i);
      xs.insert(xs.end(), {n - d, n - c, static_cast<double>(n)});
    } else {
      xs = {a, b};
      for (int i = 2; i <= n - 3; ++i) xs.push_back(i + 0.5);
      xs.insert(xs.end(), {n - b, n - a});
    }
    for (double x : xs) {
      row[j].push_back(static_cast<int>(t.vertices.size()));
      t.vertices.push_back({x * h, j * h});
    }
  }
  const auto& v = t.vertices;
  auto d2 = [&](int i, int k) { return std::hypot(v[i].x - v[k].x, v[i].y - v[k].y); };
  // zip consecutive rows, always closing the shorter diagonal
  for (int j = 0; j < n; ++j) {
    const auto& lo = row[j];
    const auto& up = row[j + 1];
    std::size_t i = 0, k = 0;
    while (i + 1 < lo.size() || k + 1 < up.size()) {
      const bool advance_lo =
          k + 1 == up.size() || (i + 1 < lo.size() && d2(lo[i + 1], up[k]) < d2(lo[i], up[k + 1]));
      if (advance_lo) {
        t.triangles.push_back({lo[i], lo[i + 1], up[k]});
        ++i;
      } else {
        t.triangles.push_back({lo[i], up[k + 1], up[k]});
        ++k;
      }
    }
  }
  // odd rows stop short of the sides; close the gaps
  for (int j = 1; j < n; j += 2) {
    t.triangles.push_back({row[j - 1].front(), row[j].front(), row[j + 1].front()});
    t.triangles.push_back({row[j - 1].back(), row[j + 1].back(), row[j].back()});
  }
  for (auto& tri : t.triangles)
    if (cross(v[tri[0]], v[tri[1]], v[tri[2]]) < 0.0) std::swap(tri[1], tri[2]);
  const double got = area(t.vertices, t.triangles);
  if (std::abs(got - edge * edge) > 1e-10 * edge * edge)
    throw std::runtime_error("square triangulation does not cover the domain");
  return t;
}

Triangulation disk_mesh(double radius, int boundary_vertices, int smoothing_sweeps) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk radius must be positive");
  if (boundary_vertices < 12 || boundary_vertices % 6 != 0)
    throw std::invalid_argument("disk boundary vertex count must be a multiple of 6, at least 12");
  const int rings = boundary_vertices / 6;
  // Hexagonal rings mapped to circles; ring k carries 6k points, the boundary ring gets equal
  // angles. Ring k starts at index 1 + 3k(k-1).
  auto index = [](int k, int i) { return k == 0 ? 0 : 1 + 3 * k * (k - 1) + i % (6 * k); };
  std::vector<Point> p{{0.0, 0.0}};
  for (int k = 1; k <= rings; ++k) {
    for (int s = 0; s < 6; ++s) {
      const double a0 = s * std::numbers::pi / 3.0, a1 = (s + 1) * std::numbers::pi / 3.0;
      for (int j = 0; j < k; ++j) {
        const double f = static_cast<double>(j) / k;
        const double hx = (1.0 - f) * std::cos(a0) + f * std::cos(a1);
        const double hy = (1.0 - f) * std::sin(a0) + f * std::sin(a1);
        double theta = std::atan2(hy, hx);
        if (k == rings) theta = 2.0 * std::numbers::pi * (s * k + j) / boundary_vertices;
        const double r = radius * k / rings;
        p.push_back({r * std::cos(theta), r * std::sin(theta)});
      }
    }
  }
  const int first_boundary = static_cast<int>(p.size()) - boundary_vertices;

  // ring k-1 to ring k, sector by sector: k triangles pointing in, k-1 pointing out
  std::vector<std::array<int, 3>> tris;
  for (int k = 1; k <= rings; ++k)
    for (int s = 0; s < 6; ++s)
      for (int j = 0; j < k; ++j) {
        const int outer = s * k + j, inner = s * (k - 1) + j;
        tris.push_back({index(k, outer), index(k, outer + 1), index(k - 1, inner)});
        if (j + 1 < k)
          tris.push_back({index(k - 1, inner), index(k, outer + 1), index(k - 1, inner + 1)});
      }

  std::vector<std::set<int>> adj(p.size());
  for (const auto& t : tris)
    for (int i = 0; i < 3; ++i) {
      adj[t[i]].insert(t[(i + 1) % 3]);
      adj[t[i]].insert(t[(i + 2) % 3]);
    }
  for (int sweep = 0; sweep < smoothing_sweeps; ++sweep) {
    std::vector<Point> q = p;
    for (int v = 0; v < first_boundary; ++v) {
      Point s{0.0, 0.0};
      for (int w : adj[v]) {
        s.x += p[w].x;
        s.y += p[w].y;
      }
      q[v] = {s.x / adj[v].size(), s.y / adj[v].size()};
    }
    p = std::move(q);
  }

  Triangulation out;
  out.vertices = std::move(p);
  for (auto& t : tris)
    if (cross(out.vertices[t[0]], out.vertices[t[1]], out.vertices[t[2]]) < 0.0) std::swap(t[1], t[2]);
  out.triangles = std::move(tris);
  const double polygon =
      0.5 * boundary_vertices * radius * radius * std::sin(2.0 * std::numbers::pi / boundary_vertices);
  const double got = area(out.vertices, out.triangles);
  if (std::abs(got - polygon) > 1e-10 * polygon)
    throw std::runtime_error("disk triangulation does not cover the polygon");
  return out;
}

double max_angle_degrees(const Triangulation& t) {
  double worst = 0.0;
  for (const auto& tri : t.triangles)
    for (int i = 0; i < 3; ++i) {
      const Point o = t.vertices[tri[i]], a = t.vertices[tri[(i + 1) % 3]],
                  b = t.vertices[tri[(i + 2) % 3]];
      const double ux = a.x - o.x, uy = a.y - o.y, vx = b.x - o.x, vy = b.y - o.y;
      const double c = (ux * vx + uy * vy) / (std::hypot(ux, uy) * std::hypot(vx, vy));
      worst = std::max(worst, std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi);
    }
  return worst;
}

}  // namespace chemofv
