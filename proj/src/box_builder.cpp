#include "relkmeans/box_builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relkmeans/error.hpp"

namespace relkmeans {

namespace {

constexpr std::size_t kMaxRounds = 4096;

// Overlap with positive extent in every dimension. Boxes that merely touch do
// not meld, matching the half-open membership of the frozen boxes.
bool overlaps(const BoxRect& a, const BoxRect& b) {
  for (std::size_t f = 0; f < a.dims.size(); ++f) {
    if (!(a.dims[f].low < b.dims[f].high && b.dims[f].low < a.dims[f].high)) return false;
  }
  return true;
}

BoxRect bounding(const BoxRect& a, const BoxRect& b) {
  BoxRect out = a;
  for (std::size_t f = 0; f < a.dims.size(); ++f) {
    out.dims[f].low = std::min(a.dims[f].low, b.dims[f].low);
    out.dims[f].high = std::max(a.dims[f].high, b.dims[f].high);
  }
  return out;
}

void double_around(BoxRect& box, std::span<const double> rep) {
  for (std::size_t f = 0; f < box.dims.size(); ++f) {
    auto& iv = box.dims[f];
    iv.low = std::min(iv.low, rep[f] - 2.0 * (rep[f] - iv.low));
    iv.high = std::max(iv.high, rep[f] + 2.0 * (iv.high - rep[f]));
  }
}

BoxRect half_open(BoxRect box) {
  for (auto& iv : box.dims) iv.high_open = true;
  return box;
}

// a is a subset of b under half-open semantics.
bool subset(const BoxRect& a, const BoxRect& b) {
  for (std::size_t f = 0; f < a.dims.size(); ++f) {
    if (a.dims[f].low < b.dims[f].low || a.dims[f].high > b.dims[f].high) return false;
  }
  return true;
}

bool disjoint(const BoxRect& a, const BoxRect& b) {
  for (std::size_t f = 0; f < a.dims.size(); ++f) {
    if (a.dims[f].high <= b.dims[f].low || b.dims[f].high <= a.dims[f].low) return true;
  }
  return false;
}

}  // namespace

LaminarForest::LaminarForest(std::vector<Point> sites, std::vector<std::size_t> alias,
                             std::vector<ForestNode> nodes)
    : sites_(std::move(sites)), alias_(std::move(alias)), nodes_(std::move(nodes)) {}

std::size_t LaminarForest::first_center_of(std::size_t site) const {
  for (std::size_t c = 0; c < alias_.size(); ++c) {
    if (alias_[c] == site) return c;
  }
  return site;
}

std::size_t LaminarForest::smallest_containing(std::span<const double> p) const {
  std::size_t node = root();
  while (true) {
    bool descended = false;
    for (auto child : nodes_[node].children) {
      if (nodes_[child].box.contains(p)) {
        node = child;
        descended = true;
        break;
      }
    }
    if (!descended) return node;
  }
}

double initial_half_side(std::span<const Point> sites) {
  double delta = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < sites.size(); ++a) {
    for (std::size_t b = a + 1; b < sites.size(); ++b) {
      double linf = 0.0;
      for (std::size_t f = 0; f < sites[a].size(); ++f) {
        linf = std::max(linf, std::abs(sites[a][f] - sites[b][f]));
      }
      if (linf > 0.0) delta = std::min(delta, linf);
    }
  }
  if (!std::isfinite(delta)) return 1.0;
  const double quarter = delta / 4.0;
  double h = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(quarter))));
  while (h > quarter) h /= 2.0;
  while (2.0 * h <= quarter) h *= 2.0;
  return h;
}

LaminarForest build_boxes(std::span<const Point> centers, const RoundObserver& observer) {
  if (centers.empty()) throw Error("build_boxes needs at least one center");
  const std::size_t d = centers.front().size();

  std::vector<Point> sites;
  std::vector<std::size_t> alias;
  for (const auto& c : centers) {
    const auto it = std::find(sites.begin(), sites.end(), c);
    alias.push_back(static_cast<std::size_t>(it - sites.begin()));
    if (it == sites.end()) sites.push_back(c);
  }

  std::vector<ForestNode> frozen;
  ForestNode root{BoxRect::whole_space(d), 0, std::nullopt, {}};

  if (sites.size() > 1) {
    const double h0 = initial_half_side(sites);
    std::vector<ActiveBox> active;
    std::size_t next_id = 0;
    for (std::size_t s = 0; s < sites.size(); ++s) {
      ActiveBox box;
      box.id = next_id++;
      box.representative = s;
      box.box.dims.resize(d);
      for (std::size_t f = 0; f < d; ++f) box.box.dims[f] = {sites[s][f] - h0, sites[s][f] + h0, false};
      active.push_back(std::move(box));
    }

    std::size_t round = 0;
    while (active.size() > 1) {
      if (++round > kMaxRounds) throw Error("box construction did not converge");
      for (auto& b : active) {
        b.before_doubling = b.box;
        double_around(b.box, sites[b.representative]);
        b.melded_this_round = false;
      }

      // Active boxes stay in id order: melded boxes get fresh, larger ids.
      while (true) {
        std::size_t first = active.size(), second = active.size();
        for (std::size_t a = 0; a < active.size() && first == active.size(); ++a) {
          for (std::size_t b = a + 1; b < active.size(); ++b) {
            if (overlaps(active[a].box, active[b].box)) {
              first = a;
              second = b;
              break;
            }
          }
        }
        if (first == active.size()) break;

        const ActiveBox lhs = active[first];
        const ActiveBox rhs = active[second];
        for (const ActiveBox* b : {&lhs, &rhs}) {
          if (!b->melded_this_round) {
            frozen.push_back({half_open(b->before_doubling), b->representative, std::nullopt, {}});
          }
        }
        ActiveBox melded;
        melded.id = next_id++;
        melded.box = bounding(lhs.box, rhs.box);
        melded.representative = lhs.representative;
        melded.melded_this_round = true;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(second));
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(first));
        active.push_back(std::move(melded));
      }
      if (observer) observer(round, h0, active);
    }
    root.representative = active.front().representative;
  }

  std::vector<ForestNode> nodes;
  nodes.reserve(frozen.size() + 1);
  nodes.push_back(std::move(root));
  for (auto& n : frozen) nodes.push_back(std::move(n));

  // Parent: the smallest box containing this one. Containers form a chain.
  for (std::size_t a = 1; a < nodes.size(); ++a) {
    std::size_t best = LaminarForest::root();
    for (std::size_t b = 1; b < nodes.size(); ++b) {
      if (b == a || !subset(nodes[a].box, nodes[b].box)) continue;
      // Identical boxes: the earlier one is the parent.
      if (subset(nodes[b].box, nodes[a].box) && b > a) continue;
      if (best == LaminarForest::root() || subset(nodes[b].box, nodes[best].box)) best = b;
    }
    nodes[a].parent = best;
    nodes[best].children.push_back(a);
  }

  return LaminarForest(std::move(sites), std::move(alias), std::move(nodes));
}

std::pair<BoxRect, std::size_t> smallest_containing_box(const LaminarForest& forest,
                                                        std::span<const double> p) {
  const auto node = forest.smallest_containing(p);
  return {forest.nodes()[node].box, forest.first_center_of(forest.nodes()[node].representative)};
}

bool is_laminar(const LaminarForest& forest) {
  const auto& nodes = forest.nodes();
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      const auto& x = nodes[a].box;
      const auto& y = nodes[b].box;
      if (!(subset(x, y) || subset(y, x) || disjoint(x, y))) return false;
    }
  }
  return true;
}

}  // namespace relkmeans
