#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "relkmeans/geometry.hpp"
#include "relkmeans/relational.hpp"

namespace relkmeans {

/// One box of the laminar forest. Boxes are half-open on their upper faces so
/// that siblings touching at a face stay disjoint.
struct ForestNode {
  BoxRect box;
  std::size_t representative = 0;  // index into LaminarForest::sites()
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
};

/// Laminar family of boxes with representatives, rooted at the whole space
/// (node 0). Any two boxes are nested or disjoint.
class LaminarForest {
 public:
  LaminarForest() = default;
  LaminarForest(std::vector<Point> sites, std::vector<std::size_t> alias,
                std::vector<ForestNode> nodes);

  const std::vector<ForestNode>& nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  static constexpr std::size_t root() noexcept { return 0; }

  /// Distinct center locations; representatives index this list.
  const std::vector<Point>& sites() const noexcept { return sites_; }
  /// For each input center, the distinct site it was collapsed onto.
  const std::vector<std::size_t>& alias() const noexcept { return alias_; }
  /// Lowest input-center index located at `site`.
  std::size_t first_center_of(std::size_t site) const;

  const Point& representative_point(std::size_t node) const {
    return sites_[nodes_[node].representative];
  }

  /// Inclusion-minimal box containing p (the root always does).
  std::size_t smallest_containing(std::span<const double> p) const;

  /// R(p): squared distance from p to the representative of its minimal box.
  double assignment_cost(std::span<const double> p) const {
    return squared_distance(p, representative_point(smallest_containing(p)));
  }

 private:
  std::vector<Point> sites_;
  std::vector<std::size_t> alias_;
  std::vector<ForestNode> nodes_;
};

/// State of one active box while the forest is being grown (closed faces).
struct ActiveBox {
  std::size_t id = 0;
  BoxRect box;
  BoxRect before_doubling;
  std::size_t representative = 0;
  bool melded_this_round = false;
};

/// Called after the melding phase of every doubling round.
using RoundObserver = std::function<void(std::size_t round, double initial_half_side,
                                         std::span<const ActiveBox> active)>;

/// Grows boxes around the centers by rounds of doubling, melding overlapping
/// pairs into their bounding box (keeping the first box's representative) and
/// freezing the pre-doubling shape of each freshly doubled box that melds.
/// Duplicate centers are collapsed onto one site first.
LaminarForest build_boxes(std::span<const Point> centers, const RoundObserver& observer = {});

/// Minimal forest box containing p and the input-center index of its representative.
std::pair<BoxRect, std::size_t> smallest_containing_box(const LaminarForest& forest,
                                                        std::span<const double> p);

/// Half-side of the initial cubes: the largest power of two not exceeding a
/// quarter of the minimum L-infinity distance between distinct sites.
double initial_half_side(std::span<const Point> sites);

/// Any two boxes nested or disjoint (half-open semantics); used by tests.
bool is_laminar(const LaminarForest& forest);

}  // namespace relkmeans
