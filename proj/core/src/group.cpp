#include "repstab/group.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "repstab/error.hpp"

namespace repstab {

namespace {

std::size_t parse_size(std::string_view text, std::string_view context) {
  std::size_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw InvalidArgument("group spec: expected an integer in '" + std::string(context) +
                          "', got '" + std::string(text) + "'");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(std::vector<std::vector<Element>> cayley, std::string name,
                                    std::string spec) {
  const std::size_t n = cayley.size();
  if (n == 0) throw InvalidArgument("group table is empty");
  for (const auto& row : cayley) {
    if (row.size() != n) throw InvalidArgument("group table is not square");
    for (Element v : row) {
      if (v >= n) throw InvalidArgument("group table is not closed: entry out of range");
    }
  }

  // Find the identity.
  std::size_t identity = n;
  for (std::size_t e = 0; e < n && identity == n; ++e) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) {
      ok = cayley[e][a] == a && cayley[a][e] == a;
    }
    if (ok) identity = e;
  }
  if (identity == n) throw InvalidArgument("group table has no identity element");

  // Relabel so the identity is index 0 (swap labels identity <-> 0).
  std::vector<Element> relabel(n);
  std::iota(relabel.begin(), relabel.end(), Element{0});
  std::swap(relabel[0], relabel[identity]);

  FiniteGroup g;
  g.order_ = n;
  g.name_ = std::move(name);
  g.spec_ = std::move(spec);
  g.table_.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      g.table_[relabel[a] * n + relabel[b]] = relabel[cayley[a][b]];
    }
  }

  for (std::size_t a = 0; a < n; ++a) {
    std::size_t count = 0;
    for (std::size_t b = 0; b < n; ++b) {
      if (g.table_[a * n + b] == 0) ++count;
    }
    std::vector<bool> seen(n, false);
    for (std::size_t b = 0; b < n; ++b) seen[g.table_[a * n + b]] = true;
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw InvalidArgument("group table row is not a permutation (cancellation fails)");
    }
    if (count != 1) throw InvalidArgument("group table: element without a unique inverse");
  }

  g.inverses_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (g.table_[a * n + b] == 0) {
        if (g.table_[b * n + a] != 0) {
          throw InvalidArgument("group table: left and right inverses differ");
        }
        g.inverses_[a] = static_cast<Element>(b);
      }
    }
  }

  if (n <= kAssociativityCheckOrder && !g.is_associative()) {
    throw InvalidArgument("group table is not associative");
  }
  return g;
}

std::size_t FiniteGroup::element_order(Element a) const {
  std::size_t k = 1;
  Element p = a;
  while (p != identity()) {
    p = mul(p, a);
    ++k;
  }
  return k;
}

bool FiniteGroup::is_associative() const {
  const auto n = static_cast<Element>(order_);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      const Element ab = mul(a, b);
      for (Element c = 0; c < n; ++c) {
        if (mul(ab, c) != mul(a, mul(b, c))) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Spec grammar

GroupSpec GroupSpec::parse(std::string_view text) {
  text = trim(text);
  GroupSpec spec;
  if (text == "quaternion") {
    spec.kind = Kind::kQuaternion;
    return spec;
  }
  if (text.starts_with("product(")) {
    if (!text.ends_with(")")) throw InvalidArgument("group spec: unbalanced product(...)");
    const std::string_view inner = text.substr(8, text.size() - 9);
    // Split on the top-level comma.
    int depth = 0;
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0) {
        split = i;
        break;
      }
    }
    if (split == std::string_view::npos) {
      throw InvalidArgument("group spec: product needs two comma-separated factors");
    }
    spec.kind = Kind::kProduct;
    spec.factors.push_back(parse(inner.substr(0, split)));
    spec.factors.push_back(parse(inner.substr(split + 1)));
    return spec;
  }
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument("group spec: unknown constructor '" + std::string(text) + "'");
  }
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg = trim(text.substr(colon + 1));
  if (head == "table") {
    spec.kind = Kind::kTable;
    spec.path = std::string(arg);
    if (spec.path.empty()) throw InvalidArgument("group spec: table needs a path");
    return spec;
  }
  spec.parameter = parse_size(arg, text);
  if (head == "cyclic") {
    spec.kind = Kind::kCyclic;
    if (spec.parameter < 1 || spec.parameter > kMaxBuiltinOrder) {
      throw InvalidArgument("group spec: cyclic order must be in [1, 5040]");
    }
  } else if (head == "dihedral") {
    spec.kind = Kind::kDihedral;
    if (spec.parameter < 1 || 2 * spec.parameter > kMaxBuiltinOrder) {
      throw InvalidArgument("group spec: dihedral:<n> needs 1 <= n <= 2520");
    }
  } else if (head == "symmetric") {
    spec.kind = Kind::kSymmetric;
    if (spec.parameter < 1 || spec.parameter > 7) {
      throw InvalidArgument("group spec: symmetric degree must be in [1, 7]");
    }
  } else {
    throw InvalidArgument("group spec: unknown constructor '" + std::string(head) + "'");
  }
  return spec;
}

std::string GroupSpec::to_string() const {
  switch (kind) {
    case Kind::kCyclic:
      return "cyclic:" + std::to_string(parameter);
    case Kind::kDihedral:
      return "dihedral:" + std::to_string(parameter);
    case Kind::kSymmetric:
      return "symmetric:" + std::to_string(parameter);
    case Kind::kQuaternion:
      return "quaternion";
    case Kind::kProduct:
      return "product(" + factors.at(0).to_string() + "," + factors.at(1).to_string() + ")";
    case Kind::kTable:
      return "table:" + path;
  }
  return {};
}

GroupPtr build_group(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupSpec::Kind::kCyclic:
      return cyclic_group(spec.parameter);
    case GroupSpec::Kind::kDihedral:
      return dihedral_group(spec.parameter);
    case GroupSpec::Kind::kSymmetric:
      return symmetric_group(spec.parameter);
    case GroupSpec::Kind::kQuaternion:
      return quaternion_group();
    case GroupSpec::Kind::kProduct: {
      auto g = build_group(spec.factors.at(0));
      auto h = build_group(spec.factors.at(1));
      return direct_product(*g, *h);
    }
    case GroupSpec::Kind::kTable:
      return load_group_table(spec.path);
  }
  throw InvalidArgument("group spec: unhandled constructor");
}

GroupPtr build_group(std::string_view spec) { return build_group(GroupSpec::parse(spec)); }

// ---------------------------------------------------------------------------
// Constructors

GroupPtr cyclic_group(std::size_t n) {
  if (n < 1 || n > kMaxBuiltinOrder) throw InvalidArgument("cyclic order must be in [1, 5040]");
  std::vector<std::vector<Element>> t(n, std::vector<Element>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) t[a][b] = static_cast<Element>((a + b) % n);
  }
  return std::make_shared<const FiniteGroup>(FiniteGroup::from_table(
      std::move(t), "C" + std::to_string(n), "cyclic:" + std::to_string(n)));
}

GroupPtr dihedral_group(std::size_t n) {
  if (n < 1 || 2 * n > kMaxBuiltinOrder) throw InvalidArgument("dihedral:<n> needs 1 <= n <= 2520");
  // Element r^k s^j has index k + n*j; s r s = r^{-1}.
  const std::size_t order = 2 * n;
  std::vector<std::vector<Element>> t(order, std::vector<Element>(order));
  for (std::size_t a = 0; a < order; ++a) {
    const std::size_t ka = a % n, ja = a / n;
    for (std::size_t b = 0; b < order; ++b) {
      const std::size_t kb = b % n, jb = b / n;
      const std::size_t k = ja == 0 ? (ka + kb) % n : (ka + n - kb) % n;
      t[a][b] = static_cast<Element>(k + n * ((ja + jb) % 2));
    }
  }
  return std::make_shared<const FiniteGroup>(FiniteGroup::from_table(
      std::move(t), "D" + std::to_string(n), "dihedral:" + std::to_string(n)));
}

GroupPtr symmetric_group(std::size_t n) {
  if (n < 1 || n > 7) throw InvalidArgument("symmetric degree must be in [1, 7]");
  std::vector<std::vector<std::uint8_t>> perms;
  std::vector<std::uint8_t> p(n);
  std::iota(p.begin(), p.end(), std::uint8_t{0});
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  // Lexicographic rank of a permutation.
  auto rank = [n](const std::vector<std::uint8_t>& q) {
    std::size_t r = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t smaller = 0;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (q[j] < q[i]) ++smaller;
      }
      std::size_t fact = 1;
      for (std::size_t k = 2; k < n - i; ++k) fact *= k;
      r += smaller * fact;
    }
    return r;
  };

  const std::size_t order = perms.size();
  std::vector<std::vector<Element>> t(order, std::vector<Element>(order));
  std::vector<std::uint8_t> c(n);
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      // (a*b)(i) = a(b(i))
      for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][perms[b][i]];
      t[a][b] = static_cast<Element>(rank(c));
    }
  }
  return std::make_shared<const FiniteGroup>(FiniteGroup::from_table(
      std::move(t), "S" + std::to_string(n), "symmetric:" + std::to_string(n)));
}

GroupPtr quaternion_group() {
  // Index = sign * 4 + unit, unit in {1, i, j, k}, sign 0 for +, 1 for -.
  // Unit products: table[u][v] = (sign, unit).
  static constexpr std::array<std::array<std::pair<int, int>, 4>, 4> kUnits{{
      {{{0, 0}, {0, 1}, {0, 2}, {0, 3}}},
      {{{0, 1}, {1, 0}, {0, 3}, {1, 2}}},
      {{{0, 2}, {1, 3}, {1, 0}, {0, 1}}},
      {{{0, 3}, {0, 2}, {1, 1}, {1, 0}}},
  }};
  std::vector<std::vector<Element>> t(8, std::vector<Element>(8));
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const auto [s, u] = kUnits[a % 4][b % 4];
      const int sign = (s + a / 4 + b / 4) % 2;
      t[a][b] = static_cast<Element>(sign * 4 + u);
    }
  }
  return std::make_shared<const FiniteGroup>(
      FiniteGroup::from_table(std::move(t), "Q8", "quaternion"));
}

GroupPtr direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t order = g.order() * h.order();
  if (order > kMaxBuiltinOrder) throw InvalidArgument("product order exceeds 5040");
  const std::size_t hn = h.order();
  std::vector<std::vector<Element>> t(order, std::vector<Element>(order));
  for (std::size_t a = 0; a < order; ++a) {
    for (std::size_t b = 0; b < order; ++b) {
      const auto ga = static_cast<Element>(a / hn), ha = static_cast<Element>(a % hn);
      const auto gb = static_cast<Element>(b / hn), hb = static_cast<Element>(b % hn);
      t[a][b] = static_cast<Element>(g.mul(ga, gb) * hn + h.mul(ha, hb));
    }
  }
  return std::make_shared<const FiniteGroup>(
      FiniteGroup::from_table(std::move(t), g.name() + "x" + h.name(),
                              "product(" + g.spec() + "," + h.spec() + ")"));
}

GroupPtr load_group_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open group table file '" + path + "'");
  std::size_t order = 0;
  if (!(in >> order) || order == 0) throw InvalidArgument("group table file: bad order line");
  if (order > kMaxTableOrder) throw InvalidArgument("group table file: order exceeds 512");
  std::vector<std::vector<Element>> t(order, std::vector<Element>(order));
  for (auto& row : t) {
    for (auto& v : row) {
      long long x = -1;
      if (!(in >> x) || x < 0) throw InvalidArgument("group table file: truncated or negative entry");
      v = static_cast<Element>(x);
      if (static_cast<std::size_t>(x) >= order) {
        throw InvalidArgument("group table is not closed: entry out of range");
      }
    }
  }
  auto g = FiniteGroup::from_table(std::move(t), "table", "table:" + path);
  if (!g.is_associative()) throw InvalidArgument("group table is not associative");
  return std::make_shared<const FiniteGroup>(std::move(g));
}

}  // namespace repstab
