#include "wavekin/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "wavekin/scaling.hpp"

namespace wavekin {

int TernaryTree::order() const {
  int n = 0;
  for (const auto& v : nodes)
    if (!v.leaf()) ++n;
  return n;
}

std::vector<int> TernaryTree::leaves() const {
  std::vector<int> out;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (nodes[v].leaf()) {
      out.push_back(v);
      continue;
    }
    for (int c = 2; c >= 0; --c) stack.push_back(nodes[v].child[c]);
  }
  return out;
}

std::vector<int> TernaryTree::branching() const {
  std::vector<int> out;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (nodes[v].leaf()) continue;
    out.push_back(v);
    for (int c = 2; c >= 0; --c) stack.push_back(nodes[v].child[c]);
  }
  return out;
}

int TernaryTree::sign(int node) const {
  int s = 1;
  for (int v = node; nodes[v].parent >= 0; v = nodes[v].parent)
    if (nodes[nodes[v].parent].child[1] == v) s = -s;
  return s;
}

void TernaryTree::validate() const {
  if (nodes.empty()) throw std::logic_error("tree has no root");
  if (nodes[0].parent != -1) throw std::logic_error("root must not have a parent");
  std::vector<int> seen(nodes.size(), 0);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (v < 0 || v >= static_cast<int>(nodes.size()) || seen[v]++) throw std::logic_error("tree arena is not a tree");
    const auto& nd = nodes[v];
    const int kids = (nd.child[0] >= 0) + (nd.child[1] >= 0) + (nd.child[2] >= 0);
    if (kids != 0 && kids != 3) throw std::logic_error("branching node must have exactly three children");
    for (int c = 0; c < kids; ++c) {
      if (nd.child[c] < 0 || nd.child[c] >= static_cast<int>(nodes.size()) || nodes[nd.child[c]].parent != v)
        throw std::logic_error("child does not point back to its parent");
      stack.push_back(nd.child[c]);
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw std::logic_error("unreachable node in tree arena");
  const int n = order();
  if (static_cast<int>(leaves().size()) != 2 * n + 1 || static_cast<int>(nodes.size()) != 3 * n + 1)
    throw std::logic_error("node counts violate |L| = 2n + 1, |T| = 3n + 1");
}

std::string TernaryTree::shape() const {
  std::function<std::string(int)> rec = [&](int v) -> std::string {
    if (nodes[v].leaf()) return ".";
    return "(" + rec(nodes[v].child[0]) + rec(nodes[v].child[1]) + rec(nodes[v].child[2]) + ")";
  };
  return rec(0);
}

namespace {

constexpr int kMaxTreeOrder = 4;

/// Appends a copy of `t` below `parent` and returns the new subtree root.
int graft(TernaryTree& dst, const TernaryTree& t, int v, int parent) {
  const int id = static_cast<int>(dst.nodes.size());
  dst.nodes.push_back({});
  dst.nodes[id].parent = parent;
  if (!t.nodes[v].leaf())
    for (int c = 0; c < 3; ++c) {
      const int ch = graft(dst, t, t.nodes[v].child[c], id);
      dst.nodes[id].child[c] = ch;
    }
  return id;
}

}  // namespace

std::vector<TernaryTree> enumerate_trees(int n) {
  if (n < 0) throw std::invalid_argument("tree order must be >= 0");
  if (n > kMaxTreeOrder) throw std::invalid_argument("tree enumeration is limited to order 4");
  if (n == 0) {
    TernaryTree t;
    t.nodes.push_back({});
    return {t};
  }
  std::vector<TernaryTree> out;
  for (int n1 = 0; n1 <= n - 1; ++n1)
    for (int n2 = 0; n1 + n2 <= n - 1; ++n2) {
      const int n3 = n - 1 - n1 - n2;
      const auto A = enumerate_trees(n1), B = enumerate_trees(n2), C = enumerate_trees(n3);
      for (const auto& a : A)
        for (const auto& b : B)
          for (const auto& c : C) {
            TernaryTree t;
            t.nodes.push_back({});
            t.nodes[0].child[0] = graft(t, a, 0, 0);
            t.nodes[0].child[1] = graft(t, b, 0, 0);
            t.nodes[0].child[2] = graft(t, c, 0, 0);
            t.validate();
            out.push_back(std::move(t));
          }
    }
  return out;
}

std::uint64_t tree_count(int n) {
  if (n < 0) throw std::invalid_argument("tree order must be >= 0");
  std::vector<std::uint64_t> a(n + 1, 0);
  a[0] = 1;
  for (int m = 1; m <= n; ++m)
    for (int i = 0; i <= m - 1; ++i)
      for (int j = 0; i + j <= m - 1; ++j) a[m] += a[i] * a[j] * a[m - 1 - i - j];
  return a[n];
}

std::uint64_t isserlis_pairings(int m) {
  if (m < 0 || m % 2 != 0) throw std::invalid_argument("pairings need an even number of points");
  std::uint64_t c = 1;
  for (int j = m - 1; j > 1; j -= 2) c *= static_cast<std::uint64_t>(j);
  return c;
}

void for_each_pairing(int m, const std::function<void(const std::vector<std::pair<int, int>>&)>& visit) {
  if (m < 0 || m % 2 != 0) throw std::invalid_argument("pairings need an even number of points");
  if (m > 16) throw std::invalid_argument("pairing enumeration is limited to 16 points");
  std::vector<std::pair<int, int>> cur;
  std::vector<bool> used(m, false);
  std::function<void()> rec = [&]() {
    int first = -1;
    for (int i = 0; i < m; ++i)
      if (!used[i]) {
        first = i;
        break;
      }
    if (first < 0) {
      visit(cur);
      return;
    }
    used[first] = true;
    for (int j = first + 1; j < m; ++j) {
      if (used[j]) continue;
      used[j] = true;
      cur.emplace_back(first, j);
      rec();
      cur.pop_back();
      used[j] = false;
    }
    used[first] = false;
  };
  rec();
}

bool pairing_respects_signs(const std::vector<TernaryTree>& copies, const Pairing& p) {
  for (const auto& [a, b] : p.pairs) {
    if (a == b) return false;
    const int sa = copies.at(a.copy).sign(a.node), sb = copies.at(b.copy).sign(b.node);
    if (!copies[a.copy].nodes.at(a.node).leaf() || !copies[b.copy].nodes.at(b.node).leaf()) return false;
    if (a.copy == b.copy ? sa + sb != 0 : sa != sb) return false;
  }
  return true;
}

std::vector<Pairing> sign_pairings(const std::vector<TernaryTree>& copies) {
  std::vector<LeafRef> all;
  for (int c = 0; c < static_cast<int>(copies.size()); ++c)
    for (int v : copies[c].leaves()) all.push_back({c, v});
  std::vector<Pairing> out;
  if (all.size() % 2 != 0) return out;
  for_each_pairing(static_cast<int>(all.size()), [&](const std::vector<std::pair<int, int>>& m) {
    Pairing p;
    for (auto [i, j] : m) p.pairs.emplace_back(all[i], all[j]);
    if (pairing_respects_signs(copies, p)) out.push_back(std::move(p));
  });
  return out;
}

namespace {

using Num = std::array<int, kMaxDim>;

struct NodeForm {
  int copy = 0;
  int node = 0;
  std::vector<std::pair<int, int>> terms;  // (var, coefficient)
  int last_var = -1;
};

struct Search {
  const CountingProblem& P;
  int d = 2;
  double L = 1.0, invT = 1.0;
  std::vector<Num> cands;
  double R2 = 0.0;
  // per copy, per node: linear form over variables
  std::vector<std::vector<NodeForm>> forms;
  int nvars = 0;
  std::vector<int> fixed;          // var -> index into pinned values or -1
  std::vector<Num> fixed_value;    // for pinned leaves
  /// checks attached to the depth at which their last variable is assigned
  std::vector<std::vector<const NodeForm*>> omega_checks, pin_checks;
  std::vector<Num> pin_of;  // per copy*maxnodes index
  std::map<std::pair<int, int>, Num> pins;
  std::vector<const NodeForm*> solver;  // var -> pinned branching form solving it, or null
  std::vector<Num> val;
  std::uint64_t visited = 0, count = 0;

  explicit Search(const CountingProblem& p) : P(p) {}

  Num eval(const NodeForm& f) const {
    Num out{0, 0, 0};
    for (auto [v, c] : f.terms)
      for (int i = 0; i < d; ++i) out[i] += c * val[v][i];
    return out;
  }

  double disp(const Num& n) const {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += P.spec.zeta[i] * n[i] * n[i];
    return s / (L * L);
  }

  bool in_ball(const Num& n) const {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += static_cast<double>(n[i]) * n[i];
    return s <= R2;
  }

  bool check(int depth) {
    for (const NodeForm* f : pin_checks[depth]) {
      const Num v = eval(*f);
      const Num& want = pins.at({f->copy, f->node});
      for (int i = 0; i < d; ++i)
        if (v[i] != want[i]) return false;
    }
    for (const NodeForm* f : omega_checks[depth]) {
      const auto& t = P.copies[f->copy];
      const auto& nd = t.nodes[f->node];
      const double om = disp(eval(forms[f->copy][nd.child[0]])) - disp(eval(forms[f->copy][nd.child[1]])) +
                        disp(eval(forms[f->copy][nd.child[2]])) - disp(eval(*f));
      double sig = 0.0;
      if (!P.sigma.empty()) sig = P.sigma.at(f->copy).at(f->node);
      if (std::abs(om - sig) > invT) return false;
    }
    return true;
  }

  void dfs(int depth) {
    if (++visited > P.budget) throw std::runtime_error("count_admissible exceeded its enumeration budget");
    if (depth == nvars) {
      ++count;
      return;
    }
    auto try_value = [&](const Num& v) {
      if (!in_ball(v)) return;
      val[depth] = v;
      if (check(depth)) dfs(depth + 1);
    };
    if (fixed[depth] >= 0) {
      try_value(fixed_value[fixed[depth]]);
      return;
    }
    if (const NodeForm* f = solver[depth]) {
      int c = 0;
      Num rest{0, 0, 0};
      for (auto [v, co] : f->terms) {
        if (v == depth) {
          c = co;
          continue;
        }
        for (int i = 0; i < d; ++i) rest[i] += co * val[v][i];
      }
      const Num& want = pins.at({f->copy, f->node});
      Num x{0, 0, 0};
      for (int i = 0; i < d; ++i) {
        const int num = want[i] - rest[i];
        if (num % c != 0) return;
        x[i] = num / c;
      }
      try_value(x);
      return;
    }
    for (const Num& v : cands) try_value(v);
  }
};

}  // namespace

std::uint64_t count_admissible(const CountingProblem& p) {
  if (p.copies.empty() || p.copies.size() > 2) throw std::invalid_argument("counting needs one or two tree copies");
  p.spec.validate();
  if (!(p.T > 0.0)) throw std::invalid_argument("T must be positive");
  if (!(p.theta >= 0.0)) throw std::invalid_argument("theta must be nonnegative");
  for (const auto& t : p.copies) t.validate();
  if (!pairing_respects_signs(p.copies, p.pairing)) throw std::invalid_argument("pairing violates the sign rule");
  if (!p.sigma.empty()) {
    if (p.sigma.size() != p.copies.size()) throw std::invalid_argument("sigma must list every copy");
    for (std::size_t c = 0; c < p.copies.size(); ++c)
      if (p.sigma[c].size() != p.copies[c].nodes.size()) throw std::invalid_argument("sigma must list every node");
  }

  Search S(p);
  S.d = p.spec.dim;
  S.L = p.spec.L;
  S.invT = 1.0 / p.T;
  const double rad = std::pow(p.spec.L, 1.0 + p.theta);
  S.R2 = rad * rad * (1.0 + 1e-12);
  const int R = static_cast<int>(std::floor(rad + 1e-9));
  {
    Num n{0, 0, 0};
    std::function<void(int)> rec = [&](int i) {
      if (i == S.d) {
        if (S.in_ball(n)) S.cands.push_back(n);
        return;
      }
      for (int a = -R; a <= R; ++a) {
        n[i] = a;
        rec(i + 1);
      }
      n[i] = 0;
    };
    rec(0);
  }

  // variables: one per unpaired leaf, one per pair, in leaf order
  std::map<std::pair<int, int>, int> var_of;
  for (int c = 0; c < static_cast<int>(p.copies.size()); ++c)
    for (int v : p.copies[c].leaves()) {
      const LeafRef me{c, v};
      int partner_var = -1;
      for (const auto& [a, b] : p.pairing.pairs) {
        const LeafRef other = a == me ? b : (b == me ? a : LeafRef{-1, -1});
        if (other.copy >= 0) {
          auto it = var_of.find({other.copy, other.node});
          if (it != var_of.end()) partner_var = it->second;
        }
      }
      var_of[{c, v}] = partner_var >= 0 ? partner_var : S.nvars++;
    }
  for (const auto& [ref, value] : p.red) {
    if (ref.copy < 0 || ref.copy >= static_cast<int>(p.copies.size()) || ref.node < 0 ||
        ref.node >= static_cast<int>(p.copies[ref.copy].nodes.size()))
      throw std::invalid_argument("red node does not exist");
    if (value.dim != S.d) throw std::invalid_argument("red value has the wrong dimension");
    auto [it, fresh] = S.pins.emplace(std::make_pair(ref.copy, ref.node), value.n);
    if (!fresh && it->second != value.n) return 0;
  }

  S.fixed.assign(S.nvars, -1);
  S.solver.assign(S.nvars, nullptr);
  S.omega_checks.assign(S.nvars, {});
  S.pin_checks.assign(S.nvars, {});
  S.val.assign(S.nvars, Num{0, 0, 0});

  S.forms.resize(p.copies.size());
  for (int c = 0; c < static_cast<int>(p.copies.size()); ++c) {
    const auto& t = p.copies[c];
    S.forms[c].resize(t.nodes.size());
    std::function<void(int)> build = [&](int v) {
      NodeForm& f = S.forms[c][v];
      f.copy = c;
      f.node = v;
      if (t.nodes[v].leaf()) {
        f.terms = {{var_of.at({c, v}), 1}};
      } else {
        std::map<int, int> acc;
        for (int ch = 0; ch < 3; ++ch) {
          build(t.nodes[v].child[ch]);
          const int s = ch == 1 ? -1 : 1;
          for (auto [var, co] : S.forms[c][t.nodes[v].child[ch]].terms) acc[var] += s * co;
        }
        f.terms.clear();
        for (auto [var, co] : acc)
          if (co != 0) f.terms.emplace_back(var, co);
      }
      f.last_var = -1;
      for (auto [var, co] : f.terms) f.last_var = std::max(f.last_var, var);
    };
    build(0);
  }

  // pinned leaves fix their variable; other pins become solves or checks
  for (const auto& [key, value] : S.pins) {
    const NodeForm& f = S.forms[key.first][key.second];
    if (p.copies[key.first].nodes[key.second].leaf()) {
      const int var = f.terms[0].first;
      if (S.fixed[var] >= 0) {
        if (S.fixed_value[S.fixed[var]] != value) return 0;
        continue;
      }
      S.fixed[var] = static_cast<int>(S.fixed_value.size());
      S.fixed_value.push_back(value);
    }
  }
  std::vector<const NodeForm*> root_free_pins;
  for (const auto& [key, value] : S.pins) {
    const NodeForm& f = S.forms[key.first][key.second];
    if (p.copies[key.first].nodes[key.second].leaf()) continue;
    if (f.last_var < 0) {
      // the form vanishes identically: the pin must be zero
      for (int i = 0; i < S.d; ++i)
        if (value[i] != 0) return 0;
      continue;
    }
    const int lv = f.last_var;
    int coef = 0;
    for (auto [var, co] : f.terms)
      if (var == lv) coef = co;
    if (S.fixed[lv] < 0 && !S.solver[lv] && coef != 0)
      S.solver[lv] = &f;
    else
      S.pin_checks[lv].push_back(&f);
  }
  for (int c = 0; c < static_cast<int>(p.copies.size()); ++c)
    for (int v : p.copies[c].branching()) {
      const NodeForm& f = S.forms[c][v];
      int last = f.last_var;
      for (int ch = 0; ch < 3; ++ch) last = std::max(last, S.forms[c][p.copies[c].nodes[v].child[ch]].last_var);
      S.omega_checks[std::max(last, 0)].push_back(&f);
    }
  if (S.nvars == 0) throw std::logic_error("tree without leaves");
  S.dfs(0);
  return S.count;
}

double admissible_bound(const CountingProblem& p, bool generic_zeta) {
  int l = 0;
  for (const auto& t : p.copies) l += static_cast<int>(t.leaves().size());
  const int np = static_cast<int>(p.pairing.pairs.size());
  const int r = static_cast<int>(p.red.size());
  int expo = l - np - r;
  if (p.copies.size() == 1) {
    // red set equal to unpaired leaves plus the root
    std::vector<int> want;
    for (int v : p.copies[0].leaves()) {
      bool paired = false;
      for (const auto& [a, b] : p.pairing.pairs)
        if (a.node == v || b.node == v) paired = true;
      if (!paired) want.push_back(v);
    }
    want.push_back(0);
    std::vector<int> have;
    for (const auto& [ref, value] : p.red) have.push_back(ref.node);
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    std::sort(have.begin(), have.end());
    if (have == want) ++expo;
  }
  const double L = p.spec.L;
  const double rho = rho_combinatorial(p.T, L, generic_zeta);
  return std::pow(L, p.theta) * std::pow(std::pow(L, p.spec.dim) / p.T * rho, expo);
}

std::uint64_t degenerate_set_count(const Wavevector& k, const TorusSpec& spec, double T, double alpha, double theta,
                                   std::uint64_t budget) {
  if (spec.dim != 2) throw std::invalid_argument("degenerate set count is implemented for d = 2");
  if (!(T > 0.0) || !(alpha >= 0.0) || !(theta >= 0.0)) throw std::invalid_argument("need T > 0, alpha >= 0, theta >= 0");
  if (T > spec.L * spec.L * (1.0 + 1e-12)) throw std::invalid_argument("degenerate set count needs T <= L^2");
  const double L = spec.L, L2 = L * L;
  const double z0 = spec.zeta[0], z1 = spec.zeta[1];
  auto g = [&](int a, int b) { return z0 * a * a + z1 * b * b; };  // L^2 |k|^2_zeta
  const double rad = std::pow(L, 1.0 + theta);
  const double R2 = rad * rad * (1.0 + 1e-12);
  const double gk = g(k.n[0], k.n[1]);
  // sum_j gamma_kj <= gamma_k + alpha bounds every |k_j|^2_zeta
  const double cap = gk + alpha * L2 * (1.0 + 1e-12);
  const int R = static_cast<int>(std::floor(rad + 1e-9));
  std::vector<std::array<int, 2>> pts;
  for (int a = -R; a <= R; ++a)
    for (int b = -R; b <= R; ++b)
      if (static_cast<double>(a) * a + static_cast<double>(b) * b <= R2 && g(a, b) <= cap) pts.push_back({a, b});
  if (static_cast<double>(pts.size()) * pts.size() > static_cast<double>(budget))
    throw std::runtime_error("degenerate set count exceeded its enumeration budget");
  std::uint64_t count = 0;
  for (const auto& p1 : pts) {
    if (p1[0] == k.n[0] && p1[1] == k.n[1]) continue;
    for (const auto& p3 : pts) {
      if (p3[0] == k.n[0] && p3[1] == k.n[1]) continue;
      const int a2 = p1[0] + p3[0] - k.n[0], b2 = p1[1] + p3[1] - k.n[1];
      if (static_cast<double>(a2) * a2 + static_cast<double>(b2) * b2 > R2) continue;
      const double g1 = g(p1[0], p1[1]), g2 = g(a2, b2), g3 = g(p3[0], p3[1]);
      const double om = g1 - g2 + g3 - gk;
      if (!(std::abs(om) * T < L2)) continue;
      if (std::abs(g1 + g2 + g3 - gk) > alpha * L2) continue;
      ++count;
    }
  }
  return count;
}

double degenerate_bound(int dim, double L, double T, double alpha, double theta) {
  return std::pow(L, dim * theta) * std::pow(L, 2 * dim) / T * std::pow(alpha + 1.0 / T, 0.5 * (dim - 1));
}

}  // namespace wavekin
