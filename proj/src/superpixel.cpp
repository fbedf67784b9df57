#include "roadseg/superpixel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <utility>

namespace roadseg {
namespace {

// Separable Gaussian blur with clamp-to-edge borders, one float plane per
// RGB channel. sigma <= 0 just converts to float.
std::vector<std::vector<float>> smooth_channels(const Image& img, double sigma) {
  const int w = img.width, h = img.height;
  std::vector<std::vector<float>> planes(3, std::vector<float>(static_cast<std::size_t>(w) * h));
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        planes[c][static_cast<std::size_t>(y) * w + x] = static_cast<float>(img.at(x, y, c));

  if (sigma <= 1e-9) return planes;

  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (auto& v : kernel) v /= sum;

  std::vector<float> tmp(static_cast<std::size_t>(w) * h);
  for (auto& plane : planes) {
    // horizontal
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          const int xx = std::clamp(x + i, 0, w - 1);
          acc += kernel[i + radius] * plane[static_cast<std::size_t>(y) * w + xx];
        }
        tmp[static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc);
      }
    }
    // vertical
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i) {
          const int yy = std::clamp(y + i, 0, h - 1);
          acc += kernel[i + radius] * tmp[static_cast<std::size_t>(yy) * w + x];
        }
        plane[static_cast<std::size_t>(y) * w + x] = static_cast<float>(acc);
      }
    }
  }
  return planes;
}

float color_distance(const std::vector<std::vector<float>>& planes, std::size_t a, std::size_t b) {
  const double dr = planes[0][a] - planes[0][b];
  const double dg = planes[1][a] - planes[1][b];
  const double db = planes[2][a] - planes[2][b];
  return static_cast<float>(std::sqrt(dr * dr + dg * dg + db * db));
}

struct Edge {
  float w;
  std::uint32_t a, b;
};

// Disjoint set with union by size and path compression.
class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0u);
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const std::uint32_t next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Returns the surviving root.
  std::uint32_t unite(std::uint32_t a, std::uint32_t b) {
    if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return a;
  }

  std::int64_t size(std::uint32_t root) const { return size_[root]; }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::int64_t> size_;
};

// Splits a label raster into 4-connected regions, renumbering densely in
// first-occurrence scan order. Returns the number of regions.
int relabel_4connected(int w, int h, const std::vector<std::uint32_t>& raw,
                       std::vector<std::int32_t>& out) {
  out.assign(raw.size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < raw.size(); ++start) {
    if (out[start] != -1) continue;
    const std::int32_t id = next++;
    stack.push_back(start);
    out[start] = id;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(p % w), y = static_cast<int>(p / w);
      const std::array<std::pair<int, int>, 4> nbrs{{{x + 1, y}, {x - 1, y}, {x, y + 1}, {x, y - 1}}};
      for (auto [nx, ny] : nbrs) {
        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
        const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
        if (out[q] == -1 && raw[q] == raw[p]) {
          out[q] = id;
          stack.push_back(q);
        }
      }
    }
  }
  return next;
}

}  // namespace

SuperpixelMap segment(const Image& image, const SuperpixelConfig& cfg, std::uint32_t /*seed*/) {
  cfg.validate();
  const int w = image.width, h = image.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;
  const auto planes = smooth_channels(image, cfg.sigma);

  // 8-connected grid graph; each undirected edge built once, in row-major
  // pixel order with a fixed neighbor order, so a stable sort is enough to
  // keep the secondary (edge index) key deterministic.
  std::vector<Edge> edges;
  edges.reserve(4 * n);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::uint32_t p = static_cast<std::uint32_t>(y) * w + x;
      if (x + 1 < w) edges.push_back({color_distance(planes, p, p + 1), p, p + 1});
      if (y + 1 < h) edges.push_back({color_distance(planes, p, p + w), p, p + static_cast<std::uint32_t>(w)});
      if (x + 1 < w && y + 1 < h)
        edges.push_back({color_distance(planes, p, p + w + 1), p, p + static_cast<std::uint32_t>(w) + 1});
      if (x + 1 < w && y > 0)
        edges.push_back({color_distance(planes, p, p - w + 1), p, p - static_cast<std::uint32_t>(w) + 1});
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.w < b.w; });

  // Greedy merge: join components when the edge is no heavier than both
  // adaptive thresholds Int(C) + k / |C|.
  DisjointSet ds(n);
  std::vector<float> internal(n, 0.0f);  // max internal edge weight, by root
  for (const Edge& e : edges) {
    const std::uint32_t ra = ds.find(e.a), rb = ds.find(e.b);
    if (ra == rb) continue;
    const double ta = internal[ra] + cfg.k / static_cast<double>(ds.size(ra));
    const double tb = internal[rb] + cfg.k / static_cast<double>(ds.size(rb));
    if (e.w <= ta && e.w <= tb) {
      const std::uint32_t r = ds.unite(ra, rb);
      internal[r] = e.w;  // edges arrive in ascending order
    }
  }

  std::vector<std::uint32_t> roots(n);
  for (std::size_t p = 0; p < n; ++p) roots[p] = ds.find(static_cast<std::uint32_t>(p));

  // The merge graph is 8-connected but downstream mask semantics are
  // 4-connected, so split diagonal-only attachments before size cleanup.
  std::vector<std::int32_t> labels;
  int n_comp = relabel_4connected(w, h, roots, labels);

  // Absorb undersized components into the neighbor reached through their
  // cheapest shared pixel edge. Merging only across 4-neighbor edges keeps
  // every region 4-connected.
  DisjointSet comp_ds(static_cast<std::size_t>(n_comp));
  std::vector<std::map<std::uint32_t, float>> adj(n_comp);
  {
    std::vector<std::int64_t> comp_size(n_comp, 0);
    for (std::size_t p = 0; p < n; ++p) comp_size[labels[p]]++;

    auto boundary = [&](std::size_t pa, std::size_t pb) {
      const std::int32_t ca = labels[pa], cb = labels[pb];
      if (ca == cb) return;
      const float d = color_distance(planes, pa, pb);
      auto upd = [&](std::int32_t from, std::int32_t to) {
        auto [it, inserted] = adj[from].try_emplace(static_cast<std::uint32_t>(to), d);
        if (!inserted && d < it->second) it->second = d;
      };
      upd(ca, cb);
      upd(cb, ca);
    };
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const std::size_t p = static_cast<std::size_t>(y) * w + x;
        if (x + 1 < w) boundary(p, p + 1);
        if (y + 1 < h) boundary(p, p + w);
      }

    std::vector<std::int64_t> size_of(comp_size);
    // Smallest component first; ties broken by id for determinism.
    auto pick_undersized = [&]() -> std::int32_t {
      std::int32_t best = -1;
      for (std::int32_t c = 0; c < n_comp; ++c) {
        if (comp_ds.find(static_cast<std::uint32_t>(c)) != static_cast<std::uint32_t>(c)) continue;
        if (size_of[c] >= cfg.min_size) continue;
        if (best == -1 || size_of[c] < size_of[best]) best = c;
      }
      return best;
    };

    int alive = n_comp;
    while (alive > 1) {
      const std::int32_t c = pick_undersized();
      if (c == -1) break;
      // Lowest-weight neighboring component; ties broken by id.
      std::uint32_t target = 0;
      float best_w = std::numeric_limits<float>::infinity();
      bool found = false;
      for (const auto& [nbr, wgt] : adj[c]) {
        const std::uint32_t r = comp_ds.find(nbr);
        if (r == static_cast<std::uint32_t>(c)) continue;
        if (!found || wgt < best_w || (wgt == best_w && r < target)) {
          target = r;
          best_w = wgt;
          found = true;
        }
      }
      if (!found) break;  // isolated; cannot occur on a grid with >1 component

      const std::uint32_t merged = comp_ds.unite(static_cast<std::uint32_t>(c), target);
      const std::uint32_t other = merged == static_cast<std::uint32_t>(c) ? target : static_cast<std::uint32_t>(c);
      size_of[merged] += size_of[other];
      if (adj[other].size() > adj[merged].size()) std::swap(adj[other], adj[merged]);
      for (const auto& [nbr, wgt] : adj[other]) {
        auto [it, inserted] = adj[merged].try_emplace(nbr, wgt);
        if (!inserted && wgt < it->second) it->second = wgt;
      }
      adj[other].clear();
      --alive;
    }

    for (auto& l : labels) l = static_cast<std::int32_t>(comp_ds.find(static_cast<std::uint32_t>(l)));
  }

  // Dense renumber in first-occurrence scan order.
  SuperpixelMap sp(w, h);
  std::vector<std::int32_t> remap(n_comp, -1);
  std::int32_t next = 0;
  for (std::size_t p = 0; p < n; ++p) {
    std::int32_t& m = remap[labels[p]];
    if (m == -1) m = next++;
    sp.component_id[p] = m;
  }
  sp.sizes.assign(next, 0);
  for (auto id : sp.component_id) sp.sizes[id]++;
  return sp;
}

std::vector<ComponentStats> component_stats(const SuperpixelMap& sp) {
  std::vector<ComponentStats> stats(sp.n_components());
  for (int i = 0; i < sp.n_components(); ++i) {
    stats[i].id = i;
    stats[i].x0 = sp.width;
    stats[i].y0 = sp.height;
    stats[i].x1 = -1;
    stats[i].y1 = -1;
  }
  for (int y = 0; y < sp.height; ++y) {
    for (int x = 0; x < sp.width; ++x) {
      ComponentStats& s = stats[sp.at(x, y)];
      s.size++;
      s.x0 = std::min(s.x0, x);
      s.y0 = std::min(s.y0, y);
      s.x1 = std::max(s.x1, x);
      s.y1 = std::max(s.y1, y);
    }
  }
  return stats;
}

}  // namespace roadseg
