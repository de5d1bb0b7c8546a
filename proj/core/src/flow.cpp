#include "multitile/flow.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <map>
#include <thread>
#include <unordered_set>

#include "multitile/digest.hpp"
#include "multitile/errors.hpp"

namespace multitile {

using geometry::Point;

// --- TimePoint -------------------------------------------------------------

TimePoint TimePoint::exact(Rational factor) {
  if (factor < Rational(1)) throw DomainError("time must be non-negative (e^t = " + factor.str() + " < 1)");
  TimePoint t;
  t.exact_ = true;
  t.factor_ = std::move(factor);
  return t;
}

TimePoint TimePoint::approx(double t) {
  if (!(t >= 0)) throw DomainError("time must be non-negative");
  TimePoint out;
  out.exact_ = false;
  out.approx_ = t;
  return out;
}

namespace {

std::string strip(std::string_view text) {
  std::string out;
  for (const char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

}  // namespace

TimePoint TimePoint::parse(std::string_view text) {
  const std::string s = strip(text);
  if (s.empty()) throw ParseError("empty time expression");
  if (s == "0") return exact(Rational(1));
  std::size_t ln = s.find("ln");
  std::size_t skip = 2;
  if (ln == std::string::npos) {
    ln = s.find("log");
    skip = 3;
  }
  if (ln == std::string::npos) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw ParseError("malformed time \"" + s + "\"");
      return approx(v);
    } catch (const std::logic_error&) {
      throw ParseError("malformed time \"" + s + "\"");
    }
  }
  Rational multiple(1);
  if (ln > 0) {
    std::string coef = s.substr(0, ln);
    if (coef.back() == '*') coef.pop_back();
    multiple = Rational::parse(coef);
    if (!multiple.is_integer() || multiple.sign() < 0) {
      throw ParseError("time multiple must be a non-negative integer in \"" + s + "\"");
    }
  }
  std::string arg = s.substr(ln + skip);
  if (!arg.empty() && arg.front() == '(') {
    if (arg.back() != ')') throw ParseError("unbalanced parentheses in \"" + s + "\"");
    arg = arg.substr(1, arg.size() - 2);
  }
  const Rational base = Rational::parse(arg);
  if (base.sign() <= 0) throw ParseError("logarithm of a non-positive value in \"" + s + "\"");
  return exact(base.pow(multiple.numerator().get_si()));
}

const Rational& TimePoint::factor() const {
  if (!exact_) throw DomainError("approximate time has no exact factor");
  return factor_;
}

double TimePoint::value() const { return exact_ ? LogLinearValue::log_of(factor_).to_double() : approx_; }

LogLinearValue TimePoint::log_value() const { return LogLinearValue::log_of(factor()); }

std::string TimePoint::str() const {
  if (!exact_) return std::to_string(approx_);
  if (factor_ == Rational(1)) return "0";
  return factor_.is_integer() ? "ln" + factor_.str() : "ln(" + factor_.str() + ")";
}

// --- generation ------------------------------------------------------------

namespace {

struct Frontier {
  std::vector<PlacedTile> nodes;
};

void push_children(const Scheme& scheme, const PlacedTile& node, std::vector<PlacedTile>& stack) {
  const auto& rule = scheme.rules[node.type];
  for (std::size_t k = rule.size(); k-- > 0;) {
    const RuleChild& c = rule[k];
    PlacedTile child;
    child.type = static_cast<std::uint16_t>(c.child_type);
    child.scale = node.scale * c.scale;
    child.offset = {node.offset.x + node.scale * c.offset.x, node.offset.y + node.scale * c.offset.y};
    child.path.reserve(node.path.size() + 1);
    child.path = node.path;
    child.path.push_back(static_cast<std::uint16_t>(k));
    stack.push_back(std::move(child));
  }
}

const Rational kOne(1);

// Depth-first completion of one subtree, children visited in rule order.
void complete_subtree(const Scheme& scheme, PlacedTile root, std::vector<PlacedTile>& out,
                      std::atomic<std::uint64_t>& emitted, std::atomic<bool>& stop, std::uint64_t budget) {
  std::vector<PlacedTile> stack;
  stack.push_back(std::move(root));
  std::uint64_t since_check = 0;
  while (!stack.empty()) {
    PlacedTile node = std::move(stack.back());
    stack.pop_back();
    if (node.scale > kOne) {
      push_children(scheme, node, stack);
      continue;
    }
    out.push_back(std::move(node));
    if (++since_check == 1024 || stack.empty()) {
      if (emitted.fetch_add(since_check) + since_check > budget) stop = true;
      since_check = 0;
      if (stop) return;
    }
  }
}

}  // namespace

Patch generate(const Scheme& scheme, std::size_t root, const TimePoint& t, const GenerateOptions& options) {
  if (root >= scheme.size()) throw DomainError("root type out of range");
  Patch patch;
  patch.meta.scheme_name = scheme.name;
  patch.meta.scheme_hash = scheme_hash(scheme);
  patch.meta.dimension = scheme.dimension;
  patch.meta.root = root;
  patch.meta.time_factor = t.factor();
  patch.meta.frame_offset = options.frame_offset;

  PlacedTile start;
  start.type = static_cast<std::uint16_t>(root);
  start.scale = t.factor();
  start.offset = options.frame_offset;

  const unsigned workers = std::max(1u, options.workers);
  std::vector<PlacedTile> items{std::move(start)};
  if (workers > 1) {
    // Expand level by level; in-order replacement keeps lexicographic order.
    const std::size_t target = 8 * static_cast<std::size_t>(workers);
    while (items.size() < target) {
      bool any = false;
      std::vector<PlacedTile> next;
      for (PlacedTile& node : items) {
        if (node.scale > kOne) {
          any = true;
          std::vector<PlacedTile> kids;
          push_children(scheme, node, kids);
          std::reverse(kids.begin(), kids.end());
          for (auto& k : kids) next.push_back(std::move(k));
        } else {
          next.push_back(std::move(node));
        }
      }
      items = std::move(next);
      if (!any) break;
    }
  }

  std::atomic<std::uint64_t> emitted{0};
  std::atomic<bool> stop{false};
  std::vector<std::vector<PlacedTile>> results(items.size());
  if (workers == 1 || items.size() == 1) {
    for (std::size_t k = 0; k < items.size() && !stop; ++k) {
      complete_subtree(scheme, std::move(items[k]), results[k], emitted, stop, options.budget);
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < items.size() && !stop; k = next++) {
          complete_subtree(scheme, std::move(items[k]), results[k], emitted, stop, options.budget);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  if (stop || emitted > options.budget) throw BudgetExceeded("patch generation", options.budget);

  std::size_t total = 0;
  for (const auto& r : results) total += r.size();
  patch.tiles.reserve(total);
  for (auto& r : results) {
    for (auto& tile : r) patch.tiles.push_back(std::move(tile));
  }
  return patch;
}

std::vector<ApproxTile> generate_approx(const Scheme& scheme, std::size_t root, double t, std::uint64_t budget) {
  if (root >= scheme.size()) throw DomainError("root type out of range");
  if (!(t >= 0)) throw DomainError("time must be non-negative");
  std::vector<ApproxTile> out;
  std::vector<ApproxTile> stack{{static_cast<std::uint16_t>(root), std::exp(t), 0.0, 0.0, 0}};
  while (!stack.empty()) {
    const ApproxTile node = stack.back();
    stack.pop_back();
    if (node.scale > 1.0) {
      const auto& rule = scheme.rules[node.type];
      for (std::size_t k = rule.size(); k-- > 0;) {
        const RuleChild& c = rule[k];
        stack.push_back({static_cast<std::uint16_t>(c.child_type), node.scale * c.scale.to_double(),
                         node.x + node.scale * c.offset.x.to_double(), node.y + node.scale * c.offset.y.to_double(),
                         node.depth + 1});
      }
      continue;
    }
    out.push_back(node);
    if (out.size() > budget) throw BudgetExceeded("approximate patch generation", budget);
  }
  return out;
}

// --- scale spectrum -------------------------------------------------------------

std::uint64_t ScaleSpectrum::total() const {
  std::uint64_t sum = 0;
  for (const auto& c : classes) {
    if (__builtin_add_overflow(sum, c.count, &sum)) throw DomainError("tile count exceeds 64 bits");
  }
  return sum;
}

namespace {

void sort_classes(std::vector<ScaleClass>& classes) {
  std::sort(classes.begin(), classes.end(), [](const ScaleClass& a, const ScaleClass& b) {
    if (a.type != b.type) return a.type < b.type;
    return a.scale > b.scale;
  });
}

}  // namespace

ScaleSpectrum scale_spectrum(const Scheme& scheme, std::size_t root, const TimePoint& t, std::uint64_t state_budget) {
  if (root >= scheme.size()) throw DomainError("root type out of range");
  ScaleSpectrum spectrum;
  spectrum.factor = t.factor();
  spectrum.dimension = scheme.dimension;
  using Key = std::pair<Rational, std::size_t>;
  auto order = [](const Key& a, const Key& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  };
  std::map<Key, std::uint64_t, decltype(order)> states(order);
  states[{t.factor(), root}] = 1;
  std::uint64_t processed = 0;
  while (!states.empty()) {
    auto node = states.extract(states.begin());
    const auto& [scale, type] = node.key();
    if (++processed > state_budget) throw BudgetExceeded("scale spectrum", state_budget);
    if (scale > kOne) {
      for (const RuleChild& c : scheme.rules[type]) {
        std::uint64_t& n = states[{scale * c.scale, c.child_type}];
        if (__builtin_add_overflow(n, node.mapped(), &n)) throw DomainError("tile count exceeds 64 bits");
      }
    } else {
      spectrum.classes.push_back({type, scale, node.mapped()});
    }
  }
  sort_classes(spectrum.classes);
  return spectrum;
}

ScaleSpectrum spectrum_of(const Patch& patch) {
  ScaleSpectrum spectrum;
  spectrum.factor = patch.meta.time_factor;
  spectrum.dimension = patch.meta.dimension;
  std::map<std::pair<std::size_t, Rational>, std::uint64_t> counts;
  for (const PlacedTile& tile : patch.tiles) counts[{tile.type, tile.scale}] += 1;
  for (const auto& [key, count] : counts) spectrum.classes.push_back({key.first, key.second, count});
  sort_classes(spectrum.classes);
  return spectrum;
}

// --- stationary tilings ------------------------------------------------------

bool anchor_for_path(const Scheme& scheme, std::size_t root, const TilePath& path, StationaryAnchor& out) {
  if (path.empty()) return false;
  std::size_t type = root;
  Rational lambda(1);
  Point chain;
  for (const std::uint16_t k : path) {
    if (k >= scheme.rules[type].size()) throw DomainError("path index out of range");
    const RuleChild& c = scheme.rules[type][k];
    chain.x += lambda * c.offset.x;
    chain.y += lambda * c.offset.y;
    lambda *= c.scale;
    type = c.child_type;
  }
  if (type != root) return false;
  const Rational inv = Rational(1) / (Rational(1) - lambda);
  const Point p{chain.x * inv, chain.y * inv};
  const auto& shape = scheme.prototiles[root].vertices;
  const bool interior = scheme.dimension == 1 ? (shape[0].x < p.x && p.x < shape[1].x)
                                              : geometry::strictly_inside(shape, p);
  if (!interior) return false;
  out.root_type = root;
  out.contraction = lambda;
  out.period = LogLinearValue::log_of(Rational(1) / lambda);
  out.control_point = p;
  out.child_path = path;
  return true;
}

namespace {

// True when the path is a repetition of a strictly shorter block.
bool is_power(const TilePath& path) {
  const std::size_t n = path.size();
  for (std::size_t len = 1; len < n; ++len) {
    if (n % len != 0) continue;
    bool repeats = true;
    for (std::size_t i = len; i < n && repeats; ++i) repeats = path[i] == path[i - len];
    if (repeats) return true;
  }
  return false;
}

}  // namespace

std::vector<StationaryAnchor> find_stationary_anchors(const Scheme& scheme, std::size_t root,
                                                      const TimePoint& max_period) {
  if (root >= scheme.size()) throw DomainError("root type out of range");
  const Rational floor_product = Rational(1) / max_period.factor();
  std::vector<StationaryAnchor> anchors;
  struct Item {
    std::size_t type;
    Rational product;
    TilePath path;
  };
  std::vector<Item> stack{{root, Rational(1), {}}};
  constexpr std::size_t kMaxPaths = 1'000'000;
  std::size_t visited = 0;
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    if (++visited > kMaxPaths) throw BudgetExceeded("stationary anchor search", kMaxPaths);
    const auto& rule = scheme.rules[item.type];
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const Rational product = item.product * rule[k].scale;
      if (product < floor_product) continue;
      TilePath path = item.path;
      path.push_back(static_cast<std::uint16_t>(k));
      if (rule[k].child_type == root && !is_power(path)) {
        StationaryAnchor anchor;
        if (anchor_for_path(scheme, root, path, anchor)) anchors.push_back(std::move(anchor));
      }
      stack.push_back({rule[k].child_type, product, std::move(path)});
    }
  }
  std::sort(anchors.begin(), anchors.end(), [](const StationaryAnchor& a, const StationaryAnchor& b) {
    if (a.contraction != b.contraction) return a.contraction > b.contraction;
    if (a.child_path.size() != b.child_path.size()) return a.child_path.size() < b.child_path.size();
    return a.child_path < b.child_path;
  });
  return anchors;
}

Patch stationary_patch(const Scheme& scheme, const StationaryAnchor& anchor, int k, const GenerateOptions& options) {
  if (k < 0) throw DomainError("stationary patch index must be >= 0");
  const Rational u = (Rational(1) / anchor.contraction).pow(k);
  GenerateOptions opts = options;
  opts.frame_offset = {-(u * anchor.control_point.x), -(u * anchor.control_point.y)};
  return generate(scheme, anchor.root_type, TimePoint::exact(u), opts);
}

namespace {

struct TileKey {
  std::uint16_t type;
  const Rational* scale;
  const Point* offset;
  bool operator==(const TileKey& o) const {
    return type == o.type && *scale == *o.scale && *offset == *o.offset;
  }
};

struct TileKeyHash {
  std::size_t operator()(const TileKey& k) const {
    std::size_t h = k.type;
    h = h * 1000003u ^ k.scale->hash();
    h = h * 1000003u ^ k.offset->x.hash();
    h = h * 1000003u ^ k.offset->y.hash();
    return h;
  }
};

}  // namespace

bool is_subpatch(const Patch& small, const Patch& big) {
  std::unordered_set<TileKey, TileKeyHash> wanted;
  wanted.reserve(small.tiles.size());
  for (const PlacedTile& t : small.tiles) wanted.insert({t.type, &t.scale, &t.offset});
  std::size_t found = 0;
  for (const PlacedTile& t : big.tiles) {
    if (wanted.count({t.type, &t.scale, &t.offset}) != 0) ++found;
  }
  return found == wanted.size();
}

std::vector<Supertile> supertile_decompose(const Scheme& scheme, const Patch& patch, const Rational& inflation) {
  std::vector<Supertile> groups;
  for (std::size_t idx = 0; idx < patch.tiles.size(); ++idx) {
    const PlacedTile& tile = patch.tiles[idx];
    std::size_t type = patch.meta.root;
    Rational scale = patch.meta.time_factor;
    Point offset = patch.meta.frame_offset;
    std::size_t depth = 0;
    while (scale > inflation) {
      if (depth >= tile.path.size()) throw DomainError("tile path ends above the requested supertile order");
      const RuleChild& c = scheme.rules[type][tile.path[depth]];
      offset = {offset.x + scale * c.offset.x, offset.y + scale * c.offset.y};
      scale *= c.scale;
      type = c.child_type;
      ++depth;
    }
    const TilePath prefix(tile.path.begin(), tile.path.begin() + static_cast<std::ptrdiff_t>(depth));
    if (groups.empty() || groups.back().path != prefix) {
      groups.push_back({prefix, type, scale, offset, {}});
    }
    groups.back().members.push_back(idx);
  }
  return groups;
}

std::vector<Supertile> supertile_decompose(const Scheme& scheme, const Patch& patch, const StationaryAnchor& anchor,
                                           int m) {
  if (m < 0) throw DomainError("supertile order must be >= 0");
  const Rational expansion = Rational(1) / anchor.contraction;
  // Recover k from the patch factor u = expansion^k.
  int k = 0;
  for (Rational u(1); u < patch.meta.time_factor; u *= expansion) ++k;
  if (expansion.pow(k) != patch.meta.time_factor) throw DomainError("patch is not a stationary patch of this anchor");
  if (m > k) throw DomainError("supertile order m = " + std::to_string(m) + " exceeds k = " + std::to_string(k));
  return supertile_decompose(scheme, patch, expansion.pow(m));
}

Rational patch_volume(const Scheme& scheme, const Patch& patch) {
  Rational total;
  for (const PlacedTile& t : patch.tiles) total += t.scale.pow(scheme.dimension) * scheme.prototiles[t.type].volume;
  return total;
}

}  // namespace multitile
