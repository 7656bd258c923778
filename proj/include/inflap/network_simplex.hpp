// Primal network simplex for uncapacitated min-cost flow with real-valued
// supplies and costs. Small and explicit: spanning tree as parent pointers,
// potentials and depths recomputed per pivot (node counts here are a few
// hundred), entering arc by block pricing. Intended for dense bipartite
// transport instances; optimality of every solve is certified downstream via
// reduced costs and complementary slackness, so nothing rests on this code
// being trusted blindly.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "inflap/core.hpp"

namespace inflap {

class NetworkSimplex {
 public:
  explicit NetworkSimplex(int node_count)
      : n_(node_count), supply_(node_count, 0.0) {}

  int add_arc(int from, int to, double cost) {
    from_.push_back(from);
    to_.push_back(to);
    cost_.push_back(cost);
    return (int)from_.size() - 1;
  }

  void set_supply(int node, double s) { supply_[node] = s; }

  int arc_count() const { return (int)from_.size(); }
  double flow(int arc) const { return flow_[arc]; }
  double potential(int node) const { return pi_[node]; }

  double total_cost() const {
    double c = 0.0;
    for (int a = 0; a < user_arcs_; ++a) c += flow_[a] * cost_[a];
    return c;
  }

  void solve(long max_pivots = 200000) {
    double tot = 0.0, imb = 0.0;
    for (double s : supply_) {
      tot += std::abs(s);
      imb += s;
    }
    if (std::abs(imb) > 1e-9 * std::max(tot, 1.0))
      throw InfeasibleMarginals("supplies do not balance");

    user_arcs_ = (int)from_.size();
    double cmax = 0.0;
    for (int a = 0; a < user_arcs_; ++a) cmax = std::max(cmax, std::abs(cost_[a]));
    double big = (cmax + 1.0) * (n_ + 1);

    // artificial star through a virtual root; flows start feasible
    int root = n_;
    parent_.assign(n_ + 1, -1);
    parent_arc_.assign(n_ + 1, -1);
    flow_.assign(user_arcs_, 0.0);
    for (int i = 0; i < n_; ++i) {
      int a;
      if (supply_[i] >= 0.0)
        a = add_arc(i, root, big);
      else
        a = add_arc(root, i, big);
      flow_.push_back(std::abs(supply_[i]));
      parent_[i] = root;
      parent_arc_[i] = a;
    }

    pi_.assign(n_ + 1, 0.0);
    depth_.assign(n_ + 1, 0);
    double enter_eps = 1e-11 * (cmax + 1.0);
    int cursor = 0;
    int block = std::max(64, (int)std::sqrt((double)user_arcs_));
    long pivots = 0;

    while (true) {
      compute_potentials();
      // block pricing: first block (from a rotating cursor) containing a
      // sufficiently negative reduced cost supplies the entering arc
      int enter = -1;
      double best = -enter_eps;
      int scanned = 0;
      while (scanned < user_arcs_) {
        int stop = std::min(scanned + block, user_arcs_);
        for (; scanned < stop; ++scanned) {
          int a = (cursor + scanned) % user_arcs_;
          if (parent_arc_[from_[a]] == a || parent_arc_[to_[a]] == a) continue;
          double rc = cost_[a] - pi_[from_[a]] + pi_[to_[a]];
          if (rc < best) {
            best = rc;
            enter = a;
          }
        }
        if (enter >= 0) break;
      }
      if (enter < 0) break;
      cursor = (cursor + scanned) % user_arcs_;
      if (++pivots > max_pivots)
        throw NonConvergence("network simplex exceeded its pivot cap");
      pivot(enter);
    }

    // artificial arcs must be drained (they always are for the balanced,
    // fully connected instances this library builds; guard regardless)
    for (int a = user_arcs_; a < (int)from_.size(); ++a)
      if (flow_[a] > 1e-7 * std::max(tot, 1.0))
        throw InfeasibleMarginals("instance is not connected enough to route all mass");
  }

 private:
  void compute_potentials() {
    // children lists as intrusive linked arrays
    head_.assign(n_ + 2, -1);
    next_.assign(n_ + 1, -1);
    for (int v = 0; v <= n_; ++v) {
      int p = parent_[v];
      if (p >= 0) {
        next_[v] = head_[p];
        head_[p] = v;
      }
    }
    int root = n_;
    pi_[root] = 0.0;
    depth_[root] = 0;
    stack_.clear();
    stack_.push_back(root);
    while (!stack_.empty()) {
      int u = stack_.back();
      stack_.pop_back();
      for (int v = head_[u]; v >= 0; v = next_[v]) {
        int a = parent_arc_[v];
        // tree arcs have zero reduced cost: rc = c - pi[from] + pi[to] = 0
        pi_[v] = from_[a] == v ? cost_[a] + pi_[u] : pi_[u] - cost_[a];
        depth_[v] = depth_[u] + 1;
        stack_.push_back(v);
      }
    }
  }

  void pivot(int e) {
    int u = from_[e], v = to_[e];
    int a = u, b = v;
    while (a != b) {
      if (depth_[a] >= depth_[b]) a = parent_[a];
      else b = parent_[b];
    }
    int apex = a;

    // theta = max pushable along the cycle e + tree path; candidates are
    // tree arcs oriented against the push direction
    double theta = std::numeric_limits<double>::infinity();
    int leave = -1;
    bool leave_on_u_side = false;
    for (int w = u; w != apex; w = parent_[w]) {
      int t = parent_arc_[w];
      bool arc_up = from_[t] == w;  // directed w -> parent
      // push direction on this segment is parent -> w
      if (arc_up && flow_[t] < theta) {
        theta = flow_[t];
        leave = w;
        leave_on_u_side = true;
      }
    }
    for (int w = v; w != apex; w = parent_[w]) {
      int t = parent_arc_[w];
      bool arc_up = from_[t] == w;
      // push direction on this segment is w -> parent
      if (!arc_up && flow_[t] < theta) {
        theta = flow_[t];
        leave = w;
        leave_on_u_side = false;
      }
    }
    if (leave < 0)
      throw NonConvergence("unbounded negative cycle in flow network");

    flow_[e] += theta;
    for (int w = u; w != apex; w = parent_[w]) {
      int t = parent_arc_[w];
      flow_[t] += from_[t] == w ? -theta : theta;
    }
    for (int w = v; w != apex; w = parent_[w]) {
      int t = parent_arc_[w];
      flow_[t] += from_[t] == w ? theta : -theta;
    }

    // re-hang the severed subtree from the entering arc's inside endpoint
    int z = leave_on_u_side ? u : v;
    int attach = leave_on_u_side ? v : u;
    int cur = z, new_parent = attach, new_arc = e;
    while (true) {
      int old_parent = parent_[cur];
      int old_arc = parent_arc_[cur];
      parent_[cur] = new_parent;
      parent_arc_[cur] = new_arc;
      if (cur == leave) break;
      new_parent = cur;
      new_arc = old_arc;
      cur = old_parent;
    }
  }

  int n_;
  int user_arcs_ = 0;
  std::vector<double> supply_;
  std::vector<int> from_, to_;
  std::vector<double> cost_, flow_, pi_;
  std::vector<int> parent_, parent_arc_, depth_, head_, next_, stack_;
};

}  // namespace inflap
