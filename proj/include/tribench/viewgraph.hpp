#pragma once

#include <span>
#include <vector>

#include "tribench/geometry.hpp"
#include "tribench/relpose.hpp"

namespace tribench {

/// Undirected edge i < j carrying the relative pose of camera j seen from
/// camera i (see RelativePose for the conventions).
struct ViewEdge {
  int i = 0;
  int j = 1;
  RelativePose pose;
};

/// Cameras as nodes, pairwise relative observations as edges. Validated on
/// construction: indices in range with i < j, no duplicate pairs, connected.
class ViewingGraph {
 public:
  ViewingGraph(int node_count, std::vector<ViewEdge> edges);

  int node_count() const { return node_count_; }
  const std::vector<ViewEdge>& edges() const { return edges_; }

 private:
  int node_count_;
  std::vector<ViewEdge> edges_;
};

/// Gauge-fixed global poses: rotations[0] is the identity and centers[0]
/// the origin; the overall scale pins the first edge to unit length.
struct GlobalPoses {
  std::vector<Rotation> rotations;
  std::vector<Point3> centers;
};

struct ChordalSettings {
  double tol = 1e-12;
  int max_iter = 100;
};

/// Consistency residual sum |R_ij - R_j R_i^T|_F^2 of a rotation assignment.
double rotation_consistency_residual(const ViewingGraph& graph,
                                     std::span<const Rotation> rotations);

/// Spanning-tree initialization followed by iterative chordal averaging;
/// each averaged matrix is re-projected onto SO(3). Camera 0 is fixed to
/// the identity, and the returned assignment never has a larger consistency
/// residual than the spanning-tree one.
std::vector<Rotation> solve_rotations(const ViewingGraph& graph,
                                      ChordalSettings settings = {});

struct PositionSolution {
  std::vector<Point3> centers;   // centers[0] = origin
  std::vector<double> scales;    // per edge, scales[0] fixed to 1
};

/// Rotates every edge direction into the world frame and solves the linear
/// least squares over centers and per-edge scales, with c_0 = 0 and the
/// first edge's scale fixed to 1. Throws CollinearDegeneracy when the
/// stacked system is rank-deficient beyond the gauge freedoms.
PositionSolution solve_positions(const ViewingGraph& graph,
                                 std::span<const Rotation> rotations);

/// solve_rotations followed by solve_positions.
GlobalPoses solve_viewing_graph(const ViewingGraph& graph,
                                ChordalSettings settings = {});

}  // namespace tribench
