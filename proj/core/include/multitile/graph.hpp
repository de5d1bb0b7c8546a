#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multitile/log_linear.hpp"
#include "multitile/rational.hpp"
#include "multitile/real.hpp"
#include "multitile/scheme.hpp"

namespace multitile {

struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  LogLinearValue length;  // ln(1/scale)
  Rational scale;
  std::size_t rule_child_index = 0;
};

/// The associated graph: one vertex per prototile, one edge per rule child,
/// edge length ln(1/alpha).
struct SubstGraph {
  std::size_t vertex_count = 0;
  std::vector<GraphEdge> edges;
  std::vector<std::vector<std::size_t>> out_edges;  // edge indices by source vertex

  std::string dot(const Scheme& scheme) const;
};

SubstGraph build_graph(const Scheme& scheme);

/// Strong connectivity (forward and backward reachability from vertex 0).
bool is_irreducible(const SubstGraph& graph);

/// A simple directed cycle as a sequence of edge indices.
struct Cycle {
  std::vector<std::size_t> edges;
  LogLinearValue length;
};

/// Every simple cycle of the multigraph; parallel edges give distinct cycles.
/// Johnson's algorithm on the underlying simple digraph, expanded over edge
/// multiplicities. Throws BudgetExceeded past `budget` cycles.
std::vector<Cycle> simple_cycles(const SubstGraph& graph, std::uint64_t budget = 1'000'000);

struct CommensurabilityVerdict {
  enum class Kind { Incommensurable, Commensurable, HeuristicIncommensurable, HeuristicCommensurable };
  Kind kind = Kind::Commensurable;
  /// Incommensurable: every pair of cycles with Q-independent lengths whose
  /// (longer, shorter) lengths are minimal; each pair ordered longer first.
  std::vector<std::pair<Cycle, Cycle>> witnesses;
  /// Commensurable: every cycle length is a positive integer multiple of it.
  LogLinearValue generator;
  std::size_t cycle_count = 0;
  std::size_t rank = 0;
  std::string note;

  bool exact() const { return kind == Kind::Incommensurable || kind == Kind::Commensurable; }
  bool incommensurable() const {
    return kind == Kind::Incommensurable || kind == Kind::HeuristicIncommensurable;
  }
  std::string summary() const;
};

/// Exact verdict for rational scales: cycle lengths are integer vectors in the
/// basis {ln p}, and the scheme is incommensurable iff their Q-rank exceeds 1.
CommensurabilityVerdict classify_commensurability(const SubstGraph& graph, std::uint64_t cycle_budget = 1'000'000);

struct HeuristicOptions {
  mpfr_prec_t bits = 128;
  double denominator_cutoff = 1e12;
};

/// Heuristic verdict from real-valued cycle lengths (irrational scales):
/// continued-fraction expansion of every ratio to the first length.
CommensurabilityVerdict heuristic_commensurability(std::span<const Real> cycle_lengths,
                                                   const HeuristicOptions& options = {});

/// M(s) and M'(s) at a non-negative integer s.
struct GraphMatrixEval {
  std::size_t n = 0;
  int s = 0;
  std::vector<std::vector<Rational>> value;             // M_ij(s) = sum_k alpha^s
  std::vector<std::vector<LogLinearValue>> derivative;  // M'_ij(s) = -sum_k alpha^s ln(1/alpha)
};

GraphMatrixEval eval_M(const Scheme& scheme, int s);

/// A value numerator / denominator with an exact rational numerator and a
/// log-linear denominator.
struct FreqValue {
  Rational numerator;
  LogLinearValue denominator;

  Real evaluate(mpfr_prec_t bits) const;
  std::string decimal(int digits) const;
  double to_double() const;
  /// "(175/1152)/Z" style, where Z names the shared denominator.
  std::string symbolic(const std::string& denominator_name = "Z") const;
};

/// Q = adj(I - M(d)) / (-tr(adj(I - M(d)) * M'(d))).
struct QMatrix {
  std::vector<std::vector<Rational>> numerator;
  LogLinearValue denominator;

  FreqValue q(std::size_t h) const { return {numerator.at(0).at(h), denominator}; }
  bool rows_identical() const;
};

/// Adjugate by exact cofactor expansion.
std::vector<std::vector<Rational>> adjugate(const std::vector<std::vector<Rational>>& a);
Rational determinant(const std::vector<std::vector<Rational>>& a);

QMatrix compute_Q(const Scheme& scheme);

struct PathTime {
  LogLinearValue time;  // ln(1/q) for the path scale product q
  Rational product;     // q
  std::uint64_t multiplicity = 0;
};

/// Lengths of i -> j paths up to `horizon` (horizon == ln u, u rational),
/// sorted increasingly, with multiplicities.
std::vector<PathTime> enumerate_path_times(const SubstGraph& graph, std::size_t i, std::size_t j,
                                           const LogLinearValue& horizon, std::uint64_t budget = 10'000'000);

/// Number of metric paths of length exactly t starting at i, by depth-first
/// traversal over edge sequences with exact log-linear lengths.
std::uint64_t path_count_oracle(const SubstGraph& graph, std::size_t i, const LogLinearValue& t,
                                std::uint64_t budget = 100'000'000);

}  // namespace multitile
