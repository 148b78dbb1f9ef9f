#include "tribench/viewgraph.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <deque>
#include <set>

namespace tribench {

ViewingGraph::ViewingGraph(int node_count, std::vector<ViewEdge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 2) throw FormatError("viewing graph needs at least two nodes");
  std::set<std::pair<int, int>> seen;
  for (const ViewEdge& e : edges_) {
    if (e.i < 0 || e.j >= node_count_ || e.i >= e.j) {
      throw FormatError("viewing graph edge indices must satisfy 0 <= i < j < N");
    }
    if (!seen.insert({e.i, e.j}).second) {
      throw FormatError("duplicate viewing graph edge");
    }
  }
  // connectivity
  std::vector<char> reached(node_count_, 0);
  std::deque<int> queue{0};
  reached[0] = 1;
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    for (const ViewEdge& e : edges_) {
      const int other = e.i == k ? e.j : (e.j == k ? e.i : -1);
      if (other >= 0 && !reached[other]) {
        reached[other] = 1;
        queue.push_back(other);
      }
    }
  }
  if (!std::all_of(reached.begin(), reached.end(), [](char c) { return c; })) {
    throw DisconnectedGraph("viewing graph is not connected");
  }
}

double rotation_consistency_residual(const ViewingGraph& graph,
                                     std::span<const Rotation> rotations) {
  double sum = 0.0;
  for (const ViewEdge& e : graph.edges()) {
    const Mat3 gap = e.pose.rotation.matrix() -
                     rotations[e.j].matrix() * rotations[e.i].matrix().transpose();
    sum += gap.squaredNorm();
  }
  return sum;
}

std::vector<Rotation> solve_rotations(const ViewingGraph& graph,
                                      ChordalSettings settings) {
  const int n = graph.node_count();
  std::vector<Rotation> rot(n);

  // Spanning-tree chaining from node 0 (BFS order).
  std::vector<char> known(n, 0);
  known[0] = 1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int k = queue.front();
    queue.pop_front();
    for (const ViewEdge& e : graph.edges()) {
      if (e.i == k && !known[e.j]) {
        rot[e.j] = e.pose.rotation * rot[e.i];
        known[e.j] = 1;
        queue.push_back(e.j);
      } else if (e.j == k && !known[e.i]) {
        rot[e.i] = e.pose.rotation.inverse() * rot[e.j];
        known[e.i] = 1;
        queue.push_back(e.i);
      }
    }
  }

  std::vector<Rotation> best = rot;
  double best_residual = rotation_consistency_residual(graph, rot);

  // Gauss-Seidel chordal sweeps: each node moves to the projected average of
  // its neighbors' predictions. Node 0 stays pinned to keep the gauge.
  for (int iter = 0; iter < settings.max_iter; ++iter) {
    double max_change = 0.0;
    for (int k = 1; k < n; ++k) {
      Mat3 acc = Mat3::Zero();
      int degree = 0;
      for (const ViewEdge& e : graph.edges()) {
        if (e.j == k) {
          acc += e.pose.rotation.matrix() * rot[e.i].matrix();
          ++degree;
        } else if (e.i == k) {
          acc += e.pose.rotation.matrix().transpose() * rot[e.j].matrix();
          ++degree;
        }
      }
      if (degree == 0) continue;
      const Rotation updated = Rotation::project(acc);
      max_change = std::max(max_change, (updated.matrix() - rot[k].matrix()).norm());
      rot[k] = updated;
    }
    const double residual = rotation_consistency_residual(graph, rot);
    if (residual < best_residual) {
      best_residual = residual;
      best = rot;
    }
    if (max_change < settings.tol) break;
  }

  // Re-fix the gauge exactly: R_k <- R_k R_0^T leaves every residual term
  // unchanged and puts camera 0 at the identity.
  const Rotation gauge = best[0].inverse();
  for (Rotation& r : best) r = r * gauge;
  best[0] = Rotation::identity();
  return best;
}

PositionSolution solve_positions(const ViewingGraph& graph,
                                 std::span<const Rotation> rotations) {
  const int n = graph.node_count();
  const int n_edges = static_cast<int>(graph.edges().size());
  if (static_cast<int>(rotations.size()) != n) {
    throw FormatError("solve_positions: one rotation per node required");
  }

  // Unknowns: centers c_1..c_{n-1} (c_0 = 0) then scales of edges 1..E-1
  // (first edge scale = 1). Rows: c_j - c_i - s_e w_e = 0 per edge.
  const int n_center_vars = 3 * (n - 1);
  const int n_vars = n_center_vars + (n_edges - 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * n_edges, n_vars);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(3 * n_edges);

  for (int e = 0; e < n_edges; ++e) {
    const ViewEdge& edge = graph.edges()[e];
    const Vec3 w = rotations[edge.i].inverse() * edge.pose.direction;
    for (int axis = 0; axis < 3; ++axis) {
      const int row = 3 * e + axis;
      if (edge.j > 0) a(row, 3 * (edge.j - 1) + axis) = 1.0;
      if (edge.i > 0) a(row, 3 * (edge.i - 1) + axis) = -1.0;
      if (e == 0) {
        b(row) = w(axis);
      } else {
        a(row, n_center_vars + (e - 1)) = -w(axis);
      }
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smallest = sv[sv.size() - 1];
  if (!(smallest > 0.0) || sv[0] / smallest > 1e10) {
    throw CollinearDegeneracy("solve_positions: center/scale system is rank-deficient");
  }
  const Eigen::VectorXd x = svd.solve(b);

  PositionSolution sol;
  sol.centers.resize(n, Point3::Zero());
  for (int k = 1; k < n; ++k) sol.centers[k] = x.segment<3>(3 * (k - 1));
  sol.scales.resize(n_edges, 1.0);
  for (int e = 1; e < n_edges; ++e) sol.scales[e] = x(n_center_vars + e - 1);
  return sol;
}

GlobalPoses solve_viewing_graph(const ViewingGraph& graph, ChordalSettings settings) {
  GlobalPoses poses;
  poses.rotations = solve_rotations(graph, settings);
  poses.centers = solve_positions(graph, poses.rotations).centers;
  return poses;
}

}  // namespace tribench
