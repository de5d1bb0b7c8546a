#include "multitile/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "multitile/errors.hpp"

namespace multitile {

SubstGraph build_graph(const Scheme& scheme) {
  SubstGraph g;
  g.vertex_count = scheme.size();
  g.out_edges.assign(g.vertex_count, {});
  for (std::size_t i = 0; i < scheme.size(); ++i) {
    for (std::size_t k = 0; k < scheme.rules[i].size(); ++k) {
      const RuleChild& c = scheme.rules[i][k];
      GraphEdge e;
      e.from = i;
      e.to = c.child_type;
      e.scale = c.scale;
      e.length = LogLinearValue::log_of(Rational(1) / c.scale);
      e.rule_child_index = k;
      g.out_edges[i].push_back(g.edges.size());
      g.edges.push_back(std::move(e));
    }
  }
  return g;
}

std::string SubstGraph::dot(const Scheme& scheme) const {
  std::ostringstream os;
  os << "digraph \"" << scheme.name << "\" {\n";
  for (std::size_t v = 0; v < vertex_count; ++v) {
    os << "  v" << v << " [label=\"" << scheme.prototiles[v].label << "\"];\n";
  }
  for (const GraphEdge& e : edges) {
    os << "  v" << e.from << " -> v" << e.to << " [label=\"" << e.length.str() << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

namespace {

std::vector<bool> reachable(std::size_t n, std::size_t start, const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{start};
  seen[start] = true;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (const std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

// Simple digraph adjacency (deduplicated targets) and the parallel-edge lists.
struct SimpleView {
  std::vector<std::vector<std::size_t>> adj;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> parallel;
};

SimpleView simple_view(const SubstGraph& g) {
  SimpleView view;
  view.adj.assign(g.vertex_count, {});
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const auto key = std::make_pair(g.edges[e].from, g.edges[e].to);
    auto& list = view.parallel[key];
    if (list.empty()) view.adj[key.first].push_back(key.second);
    list.push_back(e);
  }
  for (auto& targets : view.adj) std::sort(targets.begin(), targets.end());
  return view;
}

// Tarjan SCC restricted to vertices >= lo; returns the component of `root`.
std::vector<std::size_t> component_of(const std::vector<std::vector<std::size_t>>& adj, std::size_t lo,
                                      std::size_t root) {
  const std::size_t n = adj.size();
  std::vector<long> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack, result;
  long counter = 0;
  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const std::size_t w : adj[v]) {
      if (w < lo) continue;
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      if (std::find(comp.begin(), comp.end(), root) != comp.end()) result = comp;
    }
  };
  strong(root);
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace

bool is_irreducible(const SubstGraph& graph) {
  const std::size_t n = graph.vertex_count;
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> fwd(n), rev(n);
  for (const GraphEdge& e : graph.edges) {
    fwd[e.from].push_back(e.to);
    rev[e.to].push_back(e.from);
  }
  const auto a = reachable(n, 0, fwd);
  const auto b = reachable(n, 0, rev);
  // A single vertex without a loop has no closed paths and is not irreducible.
  if (n == 1 && graph.edges.empty()) return false;
  return std::all_of(a.begin(), a.end(), [](bool x) { return x; }) &&
         std::all_of(b.begin(), b.end(), [](bool x) { return x; });
}

std::vector<Cycle> simple_cycles(const SubstGraph& graph, std::uint64_t budget) {
  const SimpleView view = simple_view(graph);
  const std::size_t n = graph.vertex_count;
  std::vector<std::vector<std::size_t>> vertex_cycles;

  for (std::size_t s = 0; s < n; ++s) {
    const auto comp = component_of(view.adj, s, s);
    std::vector<bool> in_comp(n, false);
    for (const std::size_t v : comp) in_comp[v] = true;
    std::vector<bool> blocked(n, false);
    std::vector<std::set<std::size_t>> blocked_by(n);
    std::vector<std::size_t> path;

    std::function<void(std::size_t)> unblock = [&](std::size_t u) {
      blocked[u] = false;
      auto waiting = std::move(blocked_by[u]);
      blocked_by[u].clear();
      for (const std::size_t w : waiting) {
        if (blocked[w]) unblock(w);
      }
    };
    std::function<bool(std::size_t)> circuit = [&](std::size_t v) {
      bool found = false;
      path.push_back(v);
      blocked[v] = true;
      for (const std::size_t w : view.adj[v]) {
        if (!in_comp[w]) continue;
        if (w == s) {
          vertex_cycles.push_back(path);
          if (vertex_cycles.size() > budget) throw BudgetExceeded("simple cycle enumeration", budget);
          found = true;
        } else if (!blocked[w] && circuit(w)) {
          found = true;
        }
      }
      if (found) {
        unblock(v);
      } else {
        for (const std::size_t w : view.adj[v]) {
          if (in_comp[w]) blocked_by[w].insert(v);
        }
      }
      path.pop_back();
      return found;
    };
    circuit(s);
  }

  std::vector<Cycle> cycles;
  for (const auto& vc : vertex_cycles) {
    std::vector<const std::vector<std::size_t>*> choices;
    for (std::size_t k = 0; k < vc.size(); ++k) {
      choices.push_back(&view.parallel.at({vc[k], vc[(k + 1) % vc.size()]}));
    }
    std::vector<std::size_t> pick(choices.size(), 0);
    while (true) {
      Cycle c;
      for (std::size_t k = 0; k < choices.size(); ++k) {
        const std::size_t e = (*choices[k])[pick[k]];
        c.edges.push_back(e);
        c.length += graph.edges[e].length;
      }
      cycles.push_back(std::move(c));
      if (cycles.size() > budget) throw BudgetExceeded("simple cycle enumeration", budget);
      bool done = true;
      for (std::size_t k = choices.size(); k-- > 0;) {
        if (++pick[k] < choices[k]->size()) {
          done = false;
          break;
        }
        pick[k] = 0;
      }
      if (done) break;
    }
  }
  return cycles;
}

namespace {

// Rank over Q of the prime-exponent vectors.
std::size_t q_rank(const std::vector<const LogLinearValue*>& values) {
  std::vector<BigInt> primes;
  for (const auto* v : values) {
    for (const auto& [p, c] : v->terms()) primes.push_back(p);
  }
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  std::vector<std::vector<Rational>> rows;
  for (const auto* v : values) {
    std::vector<Rational> row(primes.size());
    for (const auto& [p, c] : v->terms()) {
      row[static_cast<std::size_t>(std::lower_bound(primes.begin(), primes.end(), p) - primes.begin())] = c;
    }
    rows.push_back(std::move(row));
  }
  std::size_t rank = 0;
  for (std::size_t col = 0; col < primes.size() && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col].sign() == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col].sign() == 0) continue;
      const Rational f = rows[r][col] / rows[rank][col];
      for (std::size_t c = col; c < primes.size(); ++c) rows[r][c] -= f * rows[rank][c];
    }
    ++rank;
  }
  return rank;
}

bool proportional(const LogLinearValue& a, const LogLinearValue& b) {
  if (a.is_zero() || b.is_zero()) return true;
  const auto& [p, ca] = *a.terms().begin();
  auto it = b.terms().find(p);
  if (it == b.terms().end()) return false;
  return a == b * (ca / it->second);
}

}  // namespace

std::string CommensurabilityVerdict::summary() const {
  switch (kind) {
    case Kind::Incommensurable:
      return "incommensurable (witness: " + witnesses.front().first.length.str() + ", " +
             witnesses.front().second.length.str() + ")";
    case Kind::Commensurable:
      return "commensurable (generator: " + generator.str() + ")";
    case Kind::HeuristicIncommensurable:
      return "heuristically incommensurable (" + note + ")";
    case Kind::HeuristicCommensurable:
      return "heuristically commensurable (" + note + ")";
  }
  return {};
}

CommensurabilityVerdict classify_commensurability(const SubstGraph& graph, std::uint64_t cycle_budget) {
  if (!is_irreducible(graph)) throw DomainError("commensurability is only defined for irreducible graphs");
  const auto cycles = simple_cycles(graph, cycle_budget);
  CommensurabilityVerdict verdict;
  verdict.cycle_count = cycles.size();
  std::vector<const LogLinearValue*> lengths;
  for (const Cycle& c : cycles) lengths.push_back(&c.length);
  verdict.rank = q_rank(lengths);

  if (verdict.rank >= 2) {
    verdict.kind = CommensurabilityVerdict::Kind::Incommensurable;
    // Distinct length classes in increasing order.
    std::vector<LogLinearValue> classes;
    for (const Cycle& c : cycles) {
      if (std::find(classes.begin(), classes.end(), c.length) == classes.end()) classes.push_back(c.length);
    }
    std::sort(classes.begin(), classes.end());
    std::optional<std::pair<std::size_t, std::size_t>> best;  // (longer, shorter) class indices
    for (std::size_t hi = 1; hi < classes.size() && !best; ++hi) {
      for (std::size_t lo = 0; lo < hi; ++lo) {
        if (!proportional(classes[hi], classes[lo])) {
          best = std::make_pair(hi, lo);
          break;
        }
      }
    }
    constexpr std::size_t kMaxWitnesses = 4096;
    for (const Cycle& a : cycles) {
      if (a.length != classes[best->first]) continue;
      for (const Cycle& b : cycles) {
        if (b.length != classes[best->second]) continue;
        if (verdict.witnesses.size() < kMaxWitnesses) verdict.witnesses.emplace_back(a, b);
      }
    }
    return verdict;
  }

  verdict.kind = CommensurabilityVerdict::Kind::Commensurable;
  // Rank 1: every length is an integer multiple of one primitive vector.
  const LogLinearValue& first = cycles.front().length;
  BigInt content = 0;
  for (const auto& [p, c] : first.terms()) mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.numerator().get_mpz_t());
  LogLinearValue primitive = first * Rational(BigInt(1), content);
  if (primitive.sign() < 0) primitive = -primitive;
  BigInt multiple_gcd = 0;
  const auto& [p0, c0] = *primitive.terms().begin();
  for (const Cycle& c : cycles) {
    const Rational k = c.length.terms().at(p0) / c0;
    mpz_gcd(multiple_gcd.get_mpz_t(), multiple_gcd.get_mpz_t(), k.numerator().get_mpz_t());
  }
  verdict.generator = primitive * Rational(multiple_gcd);
  return verdict;
}

CommensurabilityVerdict heuristic_commensurability(std::span<const Real> cycle_lengths,
                                                   const HeuristicOptions& options) {
  CommensurabilityVerdict verdict;
  verdict.cycle_count = cycle_lengths.size();
  if (cycle_lengths.empty()) throw DomainError("no cycle lengths given");
  const Real base = Real(Rational(0), options.bits) + cycle_lengths[0];
  Real tolerance(Rational(1), options.bits);
  mpfr_mul_2si(tolerance.get(), tolerance.get(), -static_cast<long>(options.bits) + 24, MPFR_RNDN);
  for (std::size_t k = 1; k < cycle_lengths.size(); ++k) {
    const Real ratio = (Real(Rational(0), options.bits) + cycle_lengths[k]) / base;
    // Convergents p/q of the continued fraction of the ratio.
    Real x = ratio;
    BigInt p_prev = 0, q_prev = 1, p = 1, q = 0;
    bool rational = false;
    for (int step = 0; step < 200; ++step) {
      Real fl(options.bits);
      mpfr_floor(fl.get(), x.get());
      BigInt a;
      mpfr_get_z(a.get_mpz_t(), fl.get(), MPFR_RNDN);
      const BigInt p_next = a * p + p_prev;
      const BigInt q_next = a * q + q_prev;
      p_prev = p; q_prev = q; p = p_next; q = q_next;
      if (q.get_d() > options.denominator_cutoff) break;
      const Real approx = Real(Rational(p, q), options.bits);
      if ((approx - ratio).abs() < tolerance * ratio.abs()) {
        rational = true;
        break;
      }
      Real frac = x - fl;
      if (frac.sign() == 0) {
        rational = true;
        break;
      }
      x = Real(Rational(1), options.bits) / frac;
    }
    if (!rational) {
      verdict.kind = CommensurabilityVerdict::Kind::HeuristicIncommensurable;
      verdict.note = "length ratio " + std::to_string(k) + " has no rational approximation with denominator <= " +
                     Real(Rational(static_cast<long>(options.denominator_cutoff)), 64).significant(3) + " at " +
                     std::to_string(options.bits) + " bits";
      return verdict;
    }
  }
  verdict.kind = CommensurabilityVerdict::Kind::HeuristicCommensurable;
  verdict.note = "all length ratios rational within " + std::to_string(options.bits) + "-bit tolerance";
  return verdict;
}

GraphMatrixEval eval_M(const Scheme& scheme, int s) {
  if (s < 0) throw DomainError("eval_M needs s >= 0");
  GraphMatrixEval m;
  m.n = scheme.size();
  m.s = s;
  m.value.assign(m.n, std::vector<Rational>(m.n));
  m.derivative.assign(m.n, std::vector<LogLinearValue>(m.n));
  for (std::size_t i = 0; i < m.n; ++i) {
    for (const RuleChild& c : scheme.rules[i]) {
      const Rational power = c.scale.pow(s);
      m.value[i][c.child_type] += power;
      m.derivative[i][c.child_type] += LogLinearValue::log_of(Rational(1) / c.scale) * (-power);
    }
  }
  return m;
}

Rational determinant(const std::vector<std::vector<Rational>>& a) {
  const std::size_t n = a.size();
  if (n == 0) return Rational(1);
  auto m = a;
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].sign() == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].sign() == 0) continue;
      const Rational f = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

std::vector<std::vector<Rational>> adjugate(const std::vector<std::vector<Rational>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> adj(n, std::vector<Rational>(n));
  if (n == 1) {
    adj[0][0] = Rational(1);
    return adj;
  }
  std::vector<std::vector<Rational>> minor(n - 1, std::vector<Rational>(n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor[mr][mc++] = a[r][c];
        }
        ++mr;
      }
      const Rational cofactor = ((i + j) % 2 == 0 ? Rational(1) : Rational(-1)) * determinant(minor);
      adj[j][i] = cofactor;  // transpose
    }
  }
  return adj;
}

bool QMatrix::rows_identical() const {
  return std::all_of(numerator.begin(), numerator.end(), [&](const auto& row) { return row == numerator.front(); });
}

QMatrix compute_Q(const Scheme& scheme) {
  if (!is_normalized(scheme)) throw DomainError("compute_Q needs a normalized scheme");
  const std::size_t n = scheme.size();
  const GraphMatrixEval m = eval_M(scheme, scheme.dimension);
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i == j ? Rational(1) : Rational(0)) - m.value[i][j];
  }
  QMatrix q;
  q.numerator = adjugate(a);
  const bool zero = std::all_of(q.numerator.begin(), q.numerator.end(), [](const auto& row) {
    return std::all_of(row.begin(), row.end(), [](const Rational& x) { return x.sign() == 0; });
  });
  if (zero) throw DomainError("adj(I - M(d)) vanishes: the scheme is not irreducible");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) q.denominator += m.derivative[j][i] * (-q.numerator[i][j]);
  }
  if (q.denominator.sign() <= 0) throw DomainError("Q denominator is not positive");
  return q;
}

Real FreqValue::evaluate(mpfr_prec_t bits) const {
  return Real(numerator, bits) / denominator.evaluate(bits);
}

std::string FreqValue::decimal(int digits) const {
  return evaluate(Real::bits_for_digits(digits + 10)).fixed(digits);
}

double FreqValue::to_double() const { return evaluate(96).to_double(); }

std::string FreqValue::symbolic(const std::string& denominator_name) const {
  if (numerator.is_integer()) return numerator.str() + "/" + denominator_name;
  return "(" + numerator.str() + ")/" + denominator_name;
}

std::vector<PathTime> enumerate_path_times(const SubstGraph& graph, std::size_t i, std::size_t j,
                                           const LogLinearValue& horizon, std::uint64_t budget) {
  const auto u = horizon.exp_rational();
  if (!u) throw DomainError("path-time horizon must be ln of a rational");
  if (*u < Rational(1)) throw DomainError("path-time horizon must be non-negative");
  const Rational floor_product = Rational(1) / *u;
  // States (product, vertex), largest product first; contributions to a state
  // always come from strictly larger products, so each state is final when popped.
  using Key = std::pair<Rational, std::size_t>;
  auto order = [](const Key& a, const Key& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::map<Key, std::uint64_t, decltype(order)> frontier(order);
  frontier[{Rational(1), i}] = 1;
  std::map<Rational, std::uint64_t, std::greater<>> found;
  std::uint64_t processed = 0;
  while (!frontier.empty()) {
    auto node = frontier.extract(frontier.begin());
    const auto& [product, v] = node.key();
    const std::uint64_t count = node.mapped();
    if (++processed > budget) throw BudgetExceeded("path-time enumeration", budget);
    if (v == j) found[product] += count;
    for (const std::size_t e : graph.out_edges[v]) {
      const Rational next = product * graph.edges[e].scale;
      if (next >= floor_product) frontier[{next, graph.edges[e].to}] += count;
    }
  }
  std::vector<PathTime> out;
  for (const auto& [product, count] : found) {
    out.push_back({LogLinearValue::log_of(Rational(1) / product), product, count});
  }
  return out;
}

std::uint64_t path_count_oracle(const SubstGraph& graph, std::size_t i, const LogLinearValue& t,
                                std::uint64_t budget) {
  if (t.sign() < 0) throw DomainError("path length must be non-negative");
  if (t.is_zero()) return 1;
  std::uint64_t count = 0, visited = 0;
  std::vector<std::pair<std::size_t, LogLinearValue>> stack;
  stack.emplace_back(i, LogLinearValue());
  while (!stack.empty()) {
    auto [v, acc] = std::move(stack.back());
    stack.pop_back();
    for (const std::size_t e : graph.out_edges[v]) {
      if (++visited > budget) throw BudgetExceeded("metric path enumeration", budget);
      LogLinearValue reach = acc + graph.edges[e].length;
      if (reach >= t) {
        ++count;
      } else {
        stack.emplace_back(graph.edges[e].to, std::move(reach));
      }
    }
  }
  return count;
}

}  // namespace multitile
